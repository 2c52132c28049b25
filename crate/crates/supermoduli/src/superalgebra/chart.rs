use std::collections::HashMap;

use super::{AlgebraError, Parity, Result, Ring, SuperPoly, Var};

/// A parity-preserving superalgebra homomorphism given by generator images.
///
/// Composition follows `(m2 ∘ m1)(x) = substitute(m1(x), m2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartMap {
    source: Ring,
    target: Ring,
    even: Vec<SuperPoly>,
    odd: Vec<SuperPoly>,
}

impl ChartMap {
    /// Images keyed by source generator name; unlisted generators go to the
    /// same-named generator of the target ring.
    pub fn by_name(source: &Ring, target: &Ring, images: &[(&str, SuperPoly)]) -> Result<ChartMap> {
        let given: HashMap<&str, &SuperPoly> = images.iter().map(|(n, p)| (*n, p)).collect();
        for name in given.keys() {
            source.expect_var(name)?;
        }
        let image = |name: &str| -> Result<SuperPoly> {
            match given.get(name) {
                Some(p) => {
                    if p.ring() != target {
                        return Err(AlgebraError::RingMismatch);
                    }
                    Ok((*p).clone())
                }
                None => SuperPoly::var(target, name),
            }
        };
        let even = (0..source.n_even()).map(|i| image(source.even_name(i))).collect::<Result<Vec<_>>>()?;
        let odd = (0..source.n_odd()).map(|j| image(source.odd_name(j))).collect::<Result<Vec<_>>>()?;
        let m = ChartMap { source: source.clone(), target: target.clone(), even, odd };
        m.check_parity()?;
        Ok(m)
    }

    pub fn identity(ring: &Ring) -> ChartMap {
        ChartMap::by_name(ring, ring, &[]).expect("identity map")
    }

    fn check_parity(&self) -> Result<()> {
        for (i, p) in self.even.iter().enumerate() {
            if !p.is_zero() && p.parity() != Some(Parity::Even) {
                return Err(AlgebraError::ParityMismatch(self.source.even_name(i).to_string()));
            }
        }
        for (j, p) in self.odd.iter().enumerate() {
            if !p.is_zero() && p.parity() != Some(Parity::Odd) {
                return Err(AlgebraError::ParityMismatch(self.source.odd_name(j).to_string()));
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn image(&self, v: Var) -> &SuperPoly {
        match v {
            Var::Even(i) => &self.even[i],
            Var::Odd(j) => &self.odd[j],
        }
    }

    pub fn image_of(&self, name: &str) -> Result<&SuperPoly> {
        Ok(self.image(self.source.expect_var(name)?))
    }

    /// `(self ∘ first)(x) = substitute(first(x), self)`.
    pub fn after(&self, first: &ChartMap) -> Result<ChartMap> {
        if first.target != self.source {
            return Err(AlgebraError::RingMismatch);
        }
        let even = first.even.iter().map(|p| p.substitute(self)).collect::<Result<Vec<_>>>()?;
        let odd = first.odd.iter().map(|p| p.substitute(self)).collect::<Result<Vec<_>>>()?;
        Ok(ChartMap { source: first.source.clone(), target: self.target.clone(), even, odd })
    }
}

impl SuperPoly {
    /// Applies a ring homomorphism. Negative powers of even images are inverted
    /// as unit times nilpotent.
    pub fn substitute(&self, m: &ChartMap) -> Result<SuperPoly> {
        if self.ring() != m.source() {
            return Err(AlgebraError::RingMismatch);
        }
        let target = m.target();
        let mut powers: Vec<HashMap<i32, SuperPoly>> = vec![HashMap::new(); m.source.n_even()];
        let mut inverses: Vec<Option<SuperPoly>> = vec![None; m.source.n_even()];
        let mut out = SuperPoly::zero(target);
        for (mono, c) in self.terms() {
            let mut term = SuperPoly::constant(target, c.clone());
            for (i, &e) in mono.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !powers[i].contains_key(&e) {
                    let p = if e > 0 {
                        m.even[i].pow(e as i64)?
                    } else {
                        if inverses[i].is_none() {
                            inverses[i] = Some(m.even[i].inverse()?);
                        }
                        inverses[i].as_ref().unwrap().pow(-e as i64)?
                    };
                    powers[i].insert(e, p);
                }
                term = &term * &powers[i][&e];
            }
            for j in 0..m.source.n_odd() {
                if mono.odd & (1 << j) != 0 {
                    term = &term * &m.odd[j];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }
}
