use std::collections::BTreeMap;

use super::{Ring, SuperPoly, Var};

/// Integer weights on generators; unlisted generators weigh zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedDegree {
    weights: BTreeMap<String, i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    /// All terms share this degree. The zero polynomial reports degree 0.
    Degree(i64),
    Inhomogeneous,
}

impl WeightedDegree {
    pub fn new(weights: &[(&str, i64)]) -> Self {
        WeightedDegree { weights: weights.iter().map(|(n, w)| (n.to_string(), *w)).collect() }
    }

    /// `u, v` of weight 1 and `theta` of weight `1 - n/2`.
    pub fn homogeneous_ring(n: i64) -> Self {
        Self::new(&[("u", 1), ("v", 1), ("theta", 1 - n / 2)])
    }

    pub fn weight(&self, ring: &Ring, v: Var) -> i64 {
        self.weights.get(ring.name(v)).copied().unwrap_or(0)
    }

    pub fn degree_of(&self, p: &SuperPoly) -> Homogeneity {
        let ring = p.ring();
        let ew: Vec<i64> = (0..ring.n_even()).map(|i| self.weight(ring, Var::Even(i))).collect();
        let ow: Vec<i64> = (0..ring.n_odd()).map(|j| self.weight(ring, Var::Odd(j))).collect();
        let mut deg = None;
        for (m, _) in p.terms() {
            let mut d: i64 = m.exps.iter().zip(&ew).map(|(&e, &w)| e as i64 * w).sum();
            for (j, w) in ow.iter().enumerate() {
                if m.odd & (1 << j) != 0 {
                    d += w;
                }
            }
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return Homogeneity::Inhomogeneous,
                _ => {}
            }
        }
        Homogeneity::Degree(deg.unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::new(&[("u", false), ("v", false)], &["theta"]).unwrap()
    }

    #[test]
    fn examples() {
        let r = ring();
        let u = SuperPoly::var(&r, "u").unwrap();
        let v = SuperPoly::var(&r, "v").unwrap();
        let th = SuperPoly::var(&r, "theta").unwrap();
        let w6 = WeightedDegree::homogeneous_ring(6);
        assert_eq!((&u.pow(2).unwrap() * &th).weighted_degree(&w6), Homogeneity::Degree(0));
        assert_eq!((&u * &v).weighted_degree(&w6), Homogeneity::Degree(2));
        let w4 = WeightedDegree::homogeneous_ring(4);
        assert_eq!((&u + &th).weighted_degree(&w4), Homogeneity::Inhomogeneous);
    }
}
