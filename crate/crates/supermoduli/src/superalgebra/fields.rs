use std::fmt;

use super::{AlgebraError, ChartMap, Parity, Result, Ring, SuperPoly, Var};

/// `Σ c_i ∂/∂x_i` over a chart with coordinates `x_i`; acts by left derivatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperVectorField {
    ring: Ring,
    coords: Vec<Var>,
    coeffs: Vec<SuperPoly>,
}

impl SuperVectorField {
    pub fn new(ring: &Ring, coords: &[Var], coeffs: Vec<SuperPoly>) -> Result<Self> {
        if coords.len() != coeffs.len() || coeffs.iter().any(|c| c.ring() != ring) {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(SuperVectorField { ring: ring.clone(), coords: coords.to_vec(), coeffs })
    }

    pub fn zero(ring: &Ring, coords: &[Var]) -> Self {
        SuperVectorField {
            ring: ring.clone(),
            coords: coords.to_vec(),
            coeffs: vec![SuperPoly::zero(ring); coords.len()],
        }
    }

    /// `f ∂/∂x_k`.
    pub fn single(ring: &Ring, coords: &[Var], k: usize, f: SuperPoly) -> Self {
        let mut x = Self::zero(ring, coords);
        x.coeffs[k] = f;
        x
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coords(&self) -> &[Var] {
        &self.coords
    }

    pub fn coeffs(&self) -> &[SuperPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &SuperPoly {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(SuperPoly::is_zero)
    }

    /// Parity of `c_i` plus parity of `x_i`, if the same for every nonzero component.
    pub fn parity(&self) -> Option<Parity> {
        let mut out = None;
        for (c, x) in self.coeffs.iter().zip(&self.coords) {
            if c.is_zero() {
                continue;
            }
            let p = c.parity()? + x.parity();
            match out {
                None => out = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(out.unwrap_or(Parity::Even))
    }

    pub fn apply(&self, f: &SuperPoly) -> SuperPoly {
        let mut out = SuperPoly::zero(&self.ring);
        for (c, x) in self.coeffs.iter().zip(&self.coords) {
            if !c.is_zero() {
                out = &out + &(c * &f.deriv(*x));
            }
        }
        out
    }

    /// `f · X`, the function multiplied on the left of every coefficient.
    pub fn scale_left(&self, f: &SuperPoly) -> Self {
        SuperVectorField {
            ring: self.ring.clone(),
            coords: self.coords.clone(),
            coeffs: self.coeffs.iter().map(|c| f * c).collect(),
        }
    }

    pub fn map_coeffs(&self, g: impl Fn(&SuperPoly) -> SuperPoly) -> Self {
        SuperVectorField {
            ring: self.ring.clone(),
            coords: self.coords.clone(),
            coeffs: self.coeffs.iter().map(g).collect(),
        }
    }

    fn zip(&self, other: &Self, g: impl Fn(&SuperPoly, &SuperPoly) -> SuperPoly) -> Result<Self> {
        if self.ring != other.ring || self.coords != other.coords {
            return Err(AlgebraError::RingMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| g(a, b)).collect();
        Ok(SuperVectorField { ring: self.ring.clone(), coords: self.coords.clone(), coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    /// `[X, Y] = XY - (-1)^{|X||Y|} YX`, evaluated on the coordinate functions.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        let px = self.parity().ok_or(AlgebraError::MixedParity)?;
        let py = other.parity().ok_or(AlgebraError::MixedParity)?;
        let both_odd = px == Parity::Odd && py == Parity::Odd;
        self.zip(other, |_, _| SuperPoly::zero(&self.ring))?;
        let coeffs = (0..self.coords.len())
            .map(|k| {
                let xy = self.apply(&other.coeffs[k]);
                let yx = other.apply(&self.coeffs[k]);
                if both_odd {
                    &xy + &yx
                } else {
                    &xy - &yx
                }
            })
            .collect();
        Ok(SuperVectorField { ring: self.ring.clone(), coords: self.coords.clone(), coeffs })
    }

    /// `½[X, X]` for an odd field.
    pub fn half_square(&self) -> Result<Self> {
        if self.parity() != Some(Parity::Odd) {
            return Err(AlgebraError::MixedParity);
        }
        let b = self.bracket(self)?;
        Ok(b.map_coeffs(|c| c.scale(&super::q_frac(1, 2))))
    }
}

impl fmt::Display for SuperVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .zip(&self.coords)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| format!("({c})*d/d{}", self.ring.name(*x)))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `Σ c_i dx_i` with function coefficients written to the left of the basis forms.
/// Pullback and `d` use right derivatives, which is what keeps `d ∘ m* = m* ∘ d`
/// under this convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperOneForm {
    ring: Ring,
    coords: Vec<Var>,
    coeffs: Vec<SuperPoly>,
}

impl SuperOneForm {
    pub fn new(ring: &Ring, coords: &[Var], coeffs: Vec<SuperPoly>) -> Result<Self> {
        if coords.len() != coeffs.len() || coeffs.iter().any(|c| c.ring() != ring) {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(SuperOneForm { ring: ring.clone(), coords: coords.to_vec(), coeffs })
    }

    pub fn zero(ring: &Ring, coords: &[Var]) -> Self {
        SuperOneForm { ring: ring.clone(), coords: coords.to_vec(), coeffs: vec![SuperPoly::zero(ring); coords.len()] }
    }

    /// `df = Σ (∂^R f/∂x_i) dx_i`.
    pub fn differential(f: &SuperPoly, coords: &[Var]) -> Self {
        SuperOneForm {
            ring: f.ring().clone(),
            coords: coords.to_vec(),
            coeffs: coords.iter().map(|x| f.deriv_right(*x)).collect(),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coords(&self) -> &[Var] {
        &self.coords
    }

    pub fn coeffs(&self) -> &[SuperPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &SuperPoly {
        &self.coeffs[k]
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring || self.coords != other.coords {
            return Err(AlgebraError::RingMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(SuperOneForm { ring: self.ring.clone(), coords: self.coords.clone(), coeffs })
    }

    /// `f · ω`.
    pub fn scale_left(&self, f: &SuperPoly) -> Self {
        SuperOneForm {
            ring: self.ring.clone(),
            coords: self.coords.clone(),
            coeffs: self.coeffs.iter().map(|c| f * c).collect(),
        }
    }

    /// `Σ c_i X_i` where `X_i` is the `∂/∂x_i`-coefficient of `x`.
    pub fn pair(&self, x: &SuperVectorField) -> Result<SuperPoly> {
        if self.ring != x.ring || self.coords != x.coords {
            return Err(AlgebraError::RingMismatch);
        }
        let mut out = SuperPoly::zero(&self.ring);
        for (c, g) in self.coeffs.iter().zip(&x.coeffs) {
            out = &out + &(c * g);
        }
        Ok(out)
    }

    /// Pullback along `m`, which expresses this form's coordinates in terms of `new_coords`.
    pub fn pullback(&self, m: &ChartMap, new_coords: &[Var]) -> Result<Self> {
        if m.source() != &self.ring {
            return Err(AlgebraError::RingMismatch);
        }
        let target = m.target();
        let images: Vec<&SuperPoly> = self.coords.iter().map(|y| m.image(*y)).collect();
        if new_coords.len() == self.coords.len() {
            check_jacobian(&images, new_coords)?;
        }
        let pulled: Vec<SuperPoly> = self.coeffs.iter().map(|c| c.substitute(m)).collect::<Result<_>>()?;
        let coeffs = new_coords
            .iter()
            .map(|x| {
                let mut acc = SuperPoly::zero(target);
                for (c, y) in pulled.iter().zip(&images) {
                    acc = &acc + &(c * &y.deriv_right(*x));
                }
                acc
            })
            .collect();
        Ok(SuperOneForm { ring: target.clone(), coords: new_coords.to_vec(), coeffs })
    }
}

/// Rejects a square coordinate change whose even or odd diagonal block has
/// a vanishing reduced determinant.
fn check_jacobian(images: &[&SuperPoly], new_coords: &[Var]) -> Result<()> {
    let ring = images.first().map(|p| p.ring().clone());
    let Some(ring) = ring else { return Ok(()) };
    for parity in [Parity::Even, Parity::Odd] {
        let idx: Vec<usize> = (0..new_coords.len()).filter(|&k| new_coords[k].parity() == parity).collect();
        let old: Vec<usize> = (0..images.len()).filter(|&k| images[k].parity() == Some(parity)).collect();
        if idx.len() != old.len() {
            return Err(AlgebraError::SingularJacobian);
        }
        let block: Vec<Vec<SuperPoly>> =
            old.iter().map(|&i| idx.iter().map(|&j| images[i].deriv_right(new_coords[j]).body()).collect()).collect();
        if laplace_det(&ring, &block).is_zero() {
            return Err(AlgebraError::SingularJacobian);
        }
    }
    Ok(())
}

fn laplace_det(ring: &Ring, m: &[Vec<SuperPoly>]) -> SuperPoly {
    match m.len() {
        0 => SuperPoly::one(ring),
        1 => m[0][0].clone(),
        n => {
            let mut acc = SuperPoly::zero(ring);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<SuperPoly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let t = &m[0][j] * &laplace_det(ring, &minor);
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

/// Coordinate change between two charts `A` (coordinates `a`) and `B` (coordinates `b`).
#[derive(Clone, Debug)]
pub struct Transition {
    pub a_coords: Vec<Var>,
    pub b_coords: Vec<Var>,
    /// A-coordinates written in B-coordinates.
    pub a_in_b: ChartMap,
    /// B-coordinates written in A-coordinates.
    pub b_in_a: ChartMap,
}

impl Transition {
    /// Checks that the two maps are mutually inverse on the coordinates.
    pub fn is_involutive(&self) -> Result<bool> {
        for x in &self.a_coords {
            let back = self.a_in_b.image(*x).substitute(&self.b_in_a)?;
            if back != SuperPoly::gen(self.b_in_a.target(), *x) {
                return Ok(false);
            }
        }
        for y in &self.b_coords {
            let back = self.b_in_a.image(*y).substitute(&self.a_in_b)?;
            if back != SuperPoly::gen(self.a_in_b.target(), *y) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A field written in B-coordinates, re-expressed in A-coordinates.
    pub fn push_to_a(&self, x: &SuperVectorField) -> Result<SuperVectorField> {
        let coeffs = self
            .a_coords
            .iter()
            .map(|a| x.apply(self.a_in_b.image(*a)).substitute(&self.b_in_a))
            .collect::<Result<Vec<_>>>()?;
        SuperVectorField::new(self.b_in_a.target(), &self.a_coords, coeffs)
    }

    /// A field written in A-coordinates, re-expressed in B-coordinates.
    pub fn push_to_b(&self, x: &SuperVectorField) -> Result<SuperVectorField> {
        let coeffs = self
            .b_coords
            .iter()
            .map(|b| x.apply(self.b_in_a.image(*b)).substitute(&self.a_in_b))
            .collect::<Result<Vec<_>>>()?;
        SuperVectorField::new(self.a_in_b.target(), &self.b_coords, coeffs)
    }
}
