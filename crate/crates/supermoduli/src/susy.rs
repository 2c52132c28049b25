//! SUSY structures on WP¹|¹(1,1|1−n/2) with `n` Ramond punctures: the canonical
//! framed pre-SUSY form, its distribution and Ramond divisor, the homogeneous
//! discriminant, the Euler-sequence computation of `H⁰(Ω¹(2))`, and gauge fixing
//! by the group `Γ*` of invertible global functions.
//!
//! Forms are written `Σ c_i dy_i` with coefficients on the left; see
//! [`SuperOneForm`].

use std::collections::HashMap;

use num_traits::One;
use thiserror::Error;

use crate::family::{build_z, h0_on_z, line_bundle_on_z, FamilyError};
use crate::linalg::{det_even, Echelon, SparseVec};
use crate::sheaf::{check_ramond, h0_line_bundle, tangent_cohomology, SheafError, WPSpace};
use crate::superalgebra::{
    parse_fixture, AlgebraError, ChartMap, Monomial, Parity, Ring, SuperOneForm, SuperPoly, SuperVectorField, Var, Q,
};
use crate::SuperDim;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SusyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("coefficient {0} has the wrong parity")]
    CoefficientParity(String),
    #[error("form is not framed: x1 = {0} is not a unit")]
    Unframed(String),
    #[error("form has no odd kernel generator")]
    Degenerate,
    #[error("distribution is integrable")]
    Integrable,
    #[error("not a binary form of degree {0}")]
    NotBinaryForm(i64),
    #[error("form is not in the span of the canonical basis")]
    NotCanonical,
    #[error("Ramond divisor is ramified")]
    Ramified,
}

pub type Result<T> = std::result::Result<T, SusyError>;

/// Appends generators to a base ring; base generators keep their positions.
pub fn extend_ring(base: &Ring, even: &[(&str, bool)], odd: &[&str]) -> Result<Ring> {
    let mut ev: Vec<(String, bool)> =
        (0..base.n_even()).map(|i| (base.even_name(i).to_string(), base.is_laurent(i))).collect();
    ev.extend(even.iter().map(|(n, l)| (n.to_string(), *l)));
    let mut od: Vec<String> = (0..base.n_odd()).map(|j| base.odd_name(j).to_string()).collect();
    od.extend(odd.iter().map(|s| s.to_string()));
    Ok(Ring::from_names(ev, od)?)
}

/// `k[u, v | θ]` over `base`, with `θ` last in the odd order.
pub fn homogeneous_ring(base: &Ring) -> Result<Ring> {
    extend_ring(base, &[("u", false), ("v", false)], &["theta"])
}

/// Both affine charts over `base`: `(z | ζ) = (v/u | θ)` and `(w | χ) = (u/v | θ)`.
pub fn chart_ring(base: &Ring) -> Result<Ring> {
    extend_ring(base, &[("z", true), ("w", true)], &["zeta", "chi"])
}

fn var(r: &Ring, name: &str) -> SuperPoly {
    SuperPoly::var(r, name).expect("generator present")
}

fn coords(r: &Ring, names: &[&str]) -> Vec<Var> {
    names.iter().map(|n| r.expect_var(n).expect("generator present")).collect()
}

/// Coefficient of the monomial `u^a v^b θ^t` in `p`, as an element of `base`.
fn h_coefficient(p: &SuperPoly, base: &Ring, a: i32, b: i32, t: bool) -> Result<SuperPoly> {
    let r = p.ring();
    let (Var::Even(iu), Var::Even(iv), Var::Odd(it)) = (r.expect_var("u")?, r.expect_var("v")?, r.expect_var("theta")?)
    else {
        unreachable!()
    };
    let bit = 1u64 << it;
    let mut out = SuperPoly::zero(r);
    for (m, c) in p.terms() {
        if m.exps[iu] == a && m.exps[iv] == b && ((m.odd & bit) != 0) == t {
            let mut nm = m.clone();
            nm.exps[iu] = 0;
            nm.exps[iv] = 0;
            nm.odd &= !bit;
            out.add_term(nm, c.clone());
        }
    }
    Ok(out.transport(base)?)
}

/// Which contraction defines the Euler map `Ω¹ → O`: the displayed map sends
/// `dθ ↦ θ`; the weighted Euler field sends `dθ ↦ (1 − n/2) θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EulerWeight {
    Unweighted,
    Weighted,
}

impl EulerWeight {
    fn theta_weight(self, n: i64) -> Q {
        match self {
            EulerWeight::Unweighted => Q::one(),
            EulerWeight::Weighted => Q::from_integer((1 - n / 2).into()),
        }
    }
}

/// The canonical basis of `H⁰(Ω¹(2))`, even members first, on `hring`.
/// Order matches the coordinates `(x₁..x_{n+2} | ξ₁..ξ_{n+2})`.
pub fn canonical_basis(n: i64, hring: &Ring, conv: EulerWeight) -> Vec<SuperOneForm> {
    let u = var(hring, "u");
    let v = var(hring, "v");
    let th = var(hring, "theta");
    let c = coords(hring, &["u", "v", "theta"]);
    let zero = SuperPoly::zero(hring);
    let kappa = SuperPoly::constant(hring, conv.theta_weight(n));
    let mon = |a: i64, b: i64| &u.pow(a).unwrap() * &v.pow(b).unwrap();
    let form = |cu: SuperPoly, cv: SuperPoly, ct: SuperPoly| SuperOneForm::new(hring, &c, vec![cu, cv, ct]).unwrap();
    let h = n / 2;
    let mut out = vec![form(-&v, u.clone(), zero.clone())];
    for j in 0..=n {
        out.push(form(zero.clone(), zero.clone(), &mon(n - j, j) * &th));
    }
    for i in 0..h {
        let m = &mon(h - 1 - i, i) * &th;
        out.push(form(-&(&m * &v), &m * &u, zero.clone()));
    }
    for i in 0..=h {
        let m = mon(h - i, i);
        out.push(form(-&(&(&kappa * &m) * &th), zero.clone(), &m * &u));
    }
    let last = mon(0, h);
    out.push(form(zero.clone(), -&(&(&kappa * &last) * &th), &last * &v));
    out
}

/// `H⁰(Ω¹(2))` as the kernel of `H⁰(p)` on `H⁰(O(1))du ⊕ H⁰(O(1))dv ⊕ H⁰(O(n/2+1))dθ`.
#[derive(Clone, Debug)]
pub struct OmegaTwisted {
    pub n: i64,
    pub convention: EulerWeight,
    pub dim: SuperDim,
    pub basis: Vec<SuperOneForm>,
    pub surjective: bool,
    /// Dimensions of the graded pieces `A_1, A_{n/2+1}, A_2`.
    pub piece_dims: [SuperDim; 3],
    pub hring: Ring,
}

/// Monomials `u^a v^b θ^t` of weighted degree `k`.
pub fn graded_piece(n: i64, k: i64) -> Vec<(i32, i32, bool)> {
    let mut out = Vec::new();
    for t in [false, true] {
        let rest = k - if t { 1 - n / 2 } else { 0 };
        for a in (0..=rest).rev() {
            out.push((a as i32, (rest - a) as i32, t));
        }
    }
    out
}

fn piece_dim(p: &[(i32, i32, bool)]) -> SuperDim {
    let odd = p.iter().filter(|m| m.2).count() as i64;
    SuperDim::new(p.len() as i64 - odd, odd)
}

pub fn h0_omega_twisted(n: i64, conv: EulerWeight) -> Result<OmegaTwisted> {
    check_ramond(n)?;
    let hring = homogeneous_ring(&Ring::new(&[], &[])?)?;
    let c = coords(&hring, &["u", "v", "theta"]);
    let mono = |(a, b, t): (i32, i32, bool)| {
        let mut m = Monomial::one(&hring);
        m.exps[0] = a;
        m.exps[1] = b;
        if t {
            m.odd = 1;
        }
        SuperPoly::from_terms(&hring, [(m, Q::one())])
    };
    let a1 = graded_piece(n, 1);
    let a2 = graded_piece(n, 2);
    let ah = graded_piece(n, n / 2 + 1);
    let gens = [var(&hring, "u"), var(&hring, "v"), var(&hring, "theta").scale(&conv.theta_weight(n))];
    let zero = SuperPoly::zero(&hring);
    let mut domain: Vec<SuperOneForm> = Vec::new();
    for (slot, piece) in [(0, &a1), (1, &a1), (2, &ah)] {
        for &m in piece.iter() {
            let mut cs = vec![zero.clone(); 3];
            cs[slot] = mono(m);
            domain.push(SuperOneForm::new(&hring, &c, cs)?);
        }
    }
    let mut rows: HashMap<Monomial, usize> = HashMap::new();
    let contract = |f: &SuperOneForm| -> SuperPoly {
        let mut acc = zero.clone();
        for (ci, g) in f.coeffs().iter().zip(&gens) {
            acc = &acc + &(ci * g);
        }
        acc
    };
    let mut to_vec = |p: &SuperPoly| -> SparseVec {
        p.terms()
            .map(|(m, q)| {
                let len = rows.len();
                (*rows.entry(m.clone()).or_insert(len), q.clone())
            })
            .collect()
    };
    let mut ech = Echelon::new();
    for f in &domain {
        ech.insert(&to_vec(&contract(f)));
    }
    let mut basis = Vec::new();
    let mut dim = SuperDim::new(0, 0);
    for rel in ech.kernel() {
        let mut cs = vec![zero.clone(); 3];
        for (idx, q) in rel {
            for (acc, g) in cs.iter_mut().zip(domain[*idx].coeffs()) {
                *acc = &*acc + &g.scale(q);
            }
        }
        let f = SuperOneForm::new(&hring, &c, cs)?;
        let odd = f.coeffs()[0].parity() == Some(Parity::Odd) && !f.coeffs()[0].is_zero()
            || f.coeffs()[2].parity() == Some(Parity::Even) && !f.coeffs()[2].is_zero();
        if odd {
            dim.odd += 1;
        } else {
            dim.even += 1;
        }
        basis.push(f);
    }
    let target = piece_dim(&a2);
    Ok(OmegaTwisted {
        n,
        convention: conv,
        dim,
        basis,
        surjective: ech.rank() as i64 == target.even + target.odd,
        piece_dims: [piece_dim(&a1), piece_dim(&ah), target],
        hring,
    })
}

impl OmegaTwisted {
    /// `H⁰(p)(f) = 0`.
    pub fn in_kernel(&self, f: &SuperOneForm) -> bool {
        let th = var(&self.hring, "theta").scale(&self.convention.theta_weight(self.n));
        let gens = [var(&self.hring, "u"), var(&self.hring, "v"), th];
        let mut acc = SuperPoly::zero(&self.hring);
        for (ci, g) in f.coeffs().iter().zip(&gens) {
            acc = &acc + &(ci * g);
        }
        acc.is_zero()
    }

    /// Rank of a family of forms inside the space of forms.
    pub fn rank_of(&self, forms: &[SuperOneForm]) -> usize {
        let mut rows: HashMap<(usize, Monomial), usize> = HashMap::new();
        let mut e = Echelon::new();
        for f in forms {
            let mut v = SparseVec::new();
            for (k, c) in f.coeffs().iter().enumerate() {
                for (m, q) in c.terms() {
                    let len = rows.len();
                    v.insert(*rows.entry((k, m.clone())).or_insert(len), q.clone());
                }
            }
            e.insert(&v);
        }
        e.rank()
    }

    /// The graded pieces agree with sheaf cohomology of `O(1), O(n/2+1), O(2)`.
    pub fn pieces_match_sheaf(&self) -> Result<bool> {
        let x = WPSpace::ramond(self.n)?;
        for (d, want) in [1, self.n / 2 + 1, 2].into_iter().zip(self.piece_dims) {
            if h0_line_bundle(x, d, None)?.0 != want {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Coefficients of the canonical framed pre-SUSY form
/// `x₁(udv−vdu) + pθdθ + qθ(udv−vdu) + r(udθ−θdu) + ξ_{n+2}v^{n/2}(vdθ−θdv)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SusyForm {
    pub n: i64,
    pub base: Ring,
    pub x: Vec<SuperPoly>,
    pub xi: Vec<SuperPoly>,
}

impl SusyForm {
    pub fn new(n: i64, base: &Ring, x: Vec<SuperPoly>, xi: Vec<SuperPoly>) -> Result<Self> {
        check_ramond(n)?;
        let len = (n + 2) as usize;
        for v in [&x, &xi] {
            if v.len() != len {
                return Err(SusyError::CoefficientCount { expected: 2 * len, got: x.len() + xi.len() });
            }
        }
        for (i, c) in x.iter().enumerate() {
            if c.ring() != base || c.parity() != Some(Parity::Even) {
                return Err(SusyError::CoefficientParity(format!("x{}", i + 1)));
            }
        }
        for (i, c) in xi.iter().enumerate() {
            if c.ring() != base || !(c.is_zero() || c.parity() == Some(Parity::Odd)) {
                return Err(SusyError::CoefficientParity(format!("xi{}", i + 1)));
            }
        }
        Ok(SusyForm { n, base: base.clone(), x, xi })
    }

    /// `x₁(udv − vdu) + p θdθ` with `p(1, z) = Σ p_j z^j`.
    pub fn bosonic(n: i64, base: &Ring, x1: SuperPoly, p_affine: &[SuperPoly]) -> Result<Self> {
        let mut x = vec![x1];
        for j in 0..=n as usize {
            x.push(p_affine.get(j).cloned().unwrap_or_else(|| SuperPoly::zero(base)));
        }
        if p_affine.len() > n as usize + 1 {
            return Err(SusyError::NotBinaryForm(n));
        }
        let xi = vec![SuperPoly::zero(base); (n + 2) as usize];
        SusyForm::new(n, base, x, xi)
    }

    /// Over `k`, `x₁ = 1`, with `p(1, z)` given by integer coefficients of `1, z, z², ...`.
    pub fn from_affine_p(n: i64, coeffs: &[i64]) -> Result<Self> {
        let k = Ring::new(&[], &[])?;
        let p: Vec<SuperPoly> = coeffs.iter().map(|c| SuperPoly::int(&k, *c)).collect();
        SusyForm::bosonic(n, &k, SuperPoly::one(&k), &p)
    }

    /// Fixture text listing `x₁..x_{n+2}, ξ₁..ξ_{n+2}`, one per line.
    pub fn from_fixture(n: i64, text: &str) -> Result<Self> {
        let fx = parse_fixture(text)?;
        let len = (n + 2) as usize;
        if fx.polys.len() != 2 * len {
            return Err(SusyError::CoefficientCount { expected: 2 * len, got: fx.polys.len() });
        }
        let (x, xi) = fx.polys.split_at(len);
        SusyForm::new(n, &fx.ring, x.to_vec(), xi.to_vec())
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &SuperPoly> {
        self.x.iter().chain(self.xi.iter())
    }

    pub fn is_framed(&self) -> bool {
        self.x[0].inverse().is_ok()
    }

    /// The homogeneous form on `k[u,v|θ]` over the base.
    pub fn homogeneous(&self, conv: EulerWeight) -> Result<SuperOneForm> {
        let h = homogeneous_ring(&self.base)?;
        let basis = canonical_basis(self.n, &h, conv);
        let mut out = SuperOneForm::zero(&h, &coords(&h, &["u", "v", "theta"]));
        for (c, e) in self.coefficients().zip(&basis) {
            out = out.add(&e.scale_left(&c.transport(&h)?))?;
        }
        Ok(out)
    }

    /// Reads coordinates back from a homogeneous form in the span of the basis.
    pub fn from_homogeneous(n: i64, base: &Ring, f: &SuperOneForm, conv: EulerWeight) -> Result<Self> {
        let h = f.ring().clone();
        let basis = canonical_basis(n, &h, conv);
        let keys = distinguished_terms(&basis);
        let mut cs = Vec::with_capacity(basis.len());
        for (slot, (a, b, t), scale) in keys {
            let c = h_coefficient(&f.coeffs()[slot], base, a, b, t)?;
            cs.push(c.scale(&scale.recip()));
        }
        let len = (n + 2) as usize;
        let xi = cs.split_off(len);
        let s = SusyForm::new(n, base, cs, xi)?;
        if &s.homogeneous(conv)? != f {
            return Err(SusyError::NotCanonical);
        }
        Ok(s)
    }

    pub fn chart_ring(&self) -> Result<Ring> {
        chart_ring(&self.base)
    }

    /// Restriction to chart U, `u = 1, v = z, θ = ζ`.
    pub fn omega_on_chart_u(&self) -> Result<SuperOneForm> {
        self.on_chart(&[("u", "1"), ("v", "z"), ("theta", "zeta")], &["z", "zeta"])
    }

    /// Restriction to chart V, `u = w, v = 1, θ = χ`.
    pub fn omega_on_chart_v(&self) -> Result<SuperOneForm> {
        self.on_chart(&[("u", "w"), ("v", "1"), ("theta", "chi")], &["w", "chi"])
    }

    fn on_chart(&self, subs: &[(&str, &str)], new: &[&str]) -> Result<SuperOneForm> {
        let f = self.homogeneous(EulerWeight::Weighted)?;
        let c = self.chart_ring()?;
        let images: Vec<(&str, SuperPoly)> =
            subs.iter().map(|(a, b)| (*a, SuperPoly::parse(&c, b).expect("chart coordinate"))).collect();
        let m = ChartMap::by_name(f.ring(), &c, &images)?;
        Ok(f.pullback(&m, &coords(&c, new))?)
    }

    /// `p(u, v)` on the homogeneous ring.
    pub fn p_homogeneous(&self) -> Result<SuperPoly> {
        let h = homogeneous_ring(&self.base)?;
        let (u, v) = (var(&h, "u"), var(&h, "v"));
        let mut p = SuperPoly::zero(&h);
        for j in 0..=self.n {
            let m = &u.pow(self.n - j)? * &v.pow(j)?;
            p = &p + &(&self.x[(j + 1) as usize].transport(&h)? * &m);
        }
        Ok(p)
    }

    /// The coefficients `q` vanish.
    pub fn q_is_zero(&self) -> bool {
        self.xi[..(self.n / 2) as usize].iter().all(SuperPoly::is_zero)
    }
}

/// For each basis form a `(slot, monomial)` occurring in it and in no other,
/// with its coefficient there.
fn distinguished_terms(basis: &[SuperOneForm]) -> Vec<(usize, (i32, i32, bool), Q)> {
    let h = basis[0].ring().clone();
    let key = |m: &Monomial| (m.exps[h.n_even() - 2], m.exps[h.n_even() - 1], m.odd != 0);
    let mut count: HashMap<(usize, (i32, i32, bool)), usize> = HashMap::new();
    for f in basis {
        for (k, c) in f.coeffs().iter().enumerate() {
            for (m, _) in c.terms() {
                *count.entry((k, key(m))).or_default() += 1;
            }
        }
    }
    basis
        .iter()
        .map(|f| {
            f.coeffs()
                .iter()
                .enumerate()
                .find_map(|(k, c)| {
                    c.terms().find(|(m, _)| count[&(k, key(m))] == 1).map(|(m, q)| (k, key(m), q.clone()))
                })
                .expect("basis forms have distinguished terms")
        })
        .collect()
}

/// The odd field `D = -g ∂z + f ∂ζ` spanning the kernel of `ω = f dz + g dζ`.
pub fn distribution_from_form(omega: &SuperOneForm) -> Result<SuperVectorField> {
    let f = omega.coeff(0);
    let g = omega.coeff(1);
    if f.inverse().is_err() {
        return Err(SusyError::Degenerate);
    }
    Ok(SuperVectorField::new(omega.ring(), omega.coords(), vec![-g, f.clone()])?)
}

/// The Ramond divisor on chart U and its homogenisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamondDivisor {
    /// `-(½[D,D])_z / D_ζ`; equals `p(1, z)` up to nilpotent corrections.
    pub affine: SuperPoly,
    /// The `ζ`-free part of `affine`, homogenised to degree `n`.
    pub homogeneous: SuperPoly,
}

pub fn ramond_divisor(s: &SusyForm) -> Result<RamondDivisor> {
    let omega = s.omega_on_chart_u()?;
    let d = distribution_from_form(&omega)?;
    let sq = d.half_square()?;
    if sq.is_zero() {
        return Err(SusyError::Integrable);
    }
    let affine = &(-sq.coeff(0)) * &d.coeff(1).inverse()?;
    let c = omega.ring().clone();
    let zeta = c.expect_var("zeta")?;
    let free = affine.without(&[zeta]);
    let h = homogeneous_ring(&s.base)?;
    let (u, v) = (var(&h, "u"), var(&h, "v"));
    let Var::Even(iz) = c.expect_var("z")? else { unreachable!() };
    let mut hom = SuperPoly::zero(&h);
    for j in 0..=s.n as i32 {
        let cj = free.even_coefficient(&[iz], &[j]).transport(&s.base)?;
        hom = &hom + &(&cj.transport(&h)? * &(&u.pow(s.n - j as i64)? * &v.pow(j as i64)?));
    }
    if free.max_abs_exp(iz) > s.n as i32 || free.terms().any(|(m, _)| m.exps[iz] < 0) {
        return Err(SusyError::NotBinaryForm(s.n));
    }
    Ok(RamondDivisor { affine, homogeneous: hom })
}

/// Coefficients `c_0..c_deg` of a binary form `Σ c_j u^{deg-j} v^j` over the ring
/// without `u, v`.
pub fn binary_form_coefficients(p: &SuperPoly, deg: i64) -> Result<Vec<SuperPoly>> {
    let r = p.ring();
    let (Var::Even(iu), Var::Even(iv)) = (r.expect_var("u")?, r.expect_var("v")?) else { unreachable!() };
    if let Some(t) = r.var("theta") {
        if !p.without(&[t]).eq(p) {
            return Err(SusyError::NotBinaryForm(deg));
        }
    }
    if p.terms().any(|(m, _)| (m.exps[iu] + m.exps[iv]) as i64 != deg || m.exps[iu] < 0 || m.exps[iv] < 0) {
        return Err(SusyError::NotBinaryForm(deg));
    }
    Ok((0..=deg).map(|j| p.even_coefficient(&[iu, iv], &[(deg - j) as i32, j as i32])).collect())
}

/// Resultant of two binary forms of degrees `m` and `k` via the Sylvester matrix.
pub fn binary_resultant(ring: &Ring, f: &[SuperPoly], g: &[SuperPoly]) -> SuperPoly {
    let m = f.len() - 1;
    let k = g.len() - 1;
    let size = m + k;
    let zero = SuperPoly::zero(ring);
    let mut rows = vec![vec![zero.clone(); size]; size];
    for i in 0..k {
        for (j, c) in f.iter().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().enumerate() {
            rows[k + i][i + j] = c.clone();
        }
    }
    det_even(ring, &rows)
}

/// `Res(∂p/∂u, ∂p/∂v)`, zero exactly when `p` has a repeated projective root.
pub fn homogeneous_discriminant(p: &SuperPoly, n: i64) -> Result<SuperPoly> {
    let cs = binary_form_coefficients(p, n)?;
    if n < 2 {
        return Err(SusyError::NotBinaryForm(n));
    }
    let ring = p.ring();
    let pu: Vec<SuperPoly> = (0..n).map(|j| cs[j as usize].scale(&Q::from_integer((n - j).into()))).collect();
    let pv: Vec<SuperPoly> = (0..n).map(|j| cs[j as usize + 1].scale(&Q::from_integer((j + 1).into()))).collect();
    Ok(binary_resultant(ring, &pu, &pv))
}

/// `a₀ (1 + ζ Σ β_i z^i)`, a unit global function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaStar {
    pub n: i64,
    pub a0: SuperPoly,
    pub beta: Vec<SuperPoly>,
}

impl GammaStar {
    pub fn new(n: i64, a0: SuperPoly, beta: Vec<SuperPoly>) -> Result<Self> {
        if beta.len() != (n / 2) as usize {
            return Err(SusyError::CoefficientCount { expected: (n / 2) as usize, got: beta.len() });
        }
        a0.inverse()?;
        Ok(GammaStar { n, a0, beta })
    }

    pub fn identity(n: i64, base: &Ring) -> Self {
        GammaStar { n, a0: SuperPoly::one(base), beta: vec![SuperPoly::zero(base); (n / 2) as usize] }
    }

    /// Group law: scalars multiply, `β`s add.
    pub fn mul(&self, other: &GammaStar) -> GammaStar {
        GammaStar {
            n: self.n,
            a0: &self.a0 * &other.a0,
            beta: self.beta.iter().zip(&other.beta).map(|(a, b)| a + b).collect(),
        }
    }

    /// `r₀ (1 + θ Σ β_i v^i u^{n/2-1-i})` on the homogeneous ring.
    pub fn homogeneous_function(&self, h: &Ring) -> Result<SuperPoly> {
        let (u, v, th) = (var(h, "u"), var(h, "v"), var(h, "theta"));
        let mut sum = SuperPoly::zero(h);
        for (i, b) in self.beta.iter().enumerate() {
            let i = i as i64;
            sum = &sum + &(&b.transport(h)? * &(&v.pow(i)? * &u.pow(self.n / 2 - 1 - i)?));
        }
        Ok(&self.a0.transport(h)? * &(&SuperPoly::one(h) + &(&th * &sum)))
    }

    /// The same function on chart U.
    pub fn on_chart_u(&self, c: &Ring) -> Result<SuperPoly> {
        let (z, zeta) = (var(c, "z"), var(c, "zeta"));
        let mut sum = SuperPoly::zero(c);
        for (i, b) in self.beta.iter().enumerate() {
            sum = &sum + &(&b.transport(c)? * &z.pow(i as i64)?);
        }
        Ok(&self.a0.transport(c)? * &(&SuperPoly::one(c) + &(&zeta * &sum)))
    }
}

/// Multiplication of the form by the function `g`.
pub fn gamma_action(g: &GammaStar, s: &SusyForm) -> Result<SusyForm> {
    let f = s.homogeneous(EulerWeight::Weighted)?;
    let func = g.homogeneous_function(f.ring())?;
    SusyForm::from_homogeneous(s.n, &s.base, &f.scale_left(&func), EulerWeight::Weighted)
}

/// The representative with `x₁ = 1` and `q = 0`, with the element reaching it.
pub fn gauge_fix(s: &SusyForm) -> Result<(SusyForm, GammaStar)> {
    let x1_inv = s.x[0].inverse().map_err(|_| SusyError::Unframed(s.x[0].to_string()))?;
    let beta: Vec<SuperPoly> = s.xi[..(s.n / 2) as usize].iter().map(|xi| &x1_inv * xi).collect();
    let g = GammaStar::new(s.n, x1_inv, beta)?;
    let fixed = gamma_action(&g, s)?;
    debug_assert!(fixed.x[0].as_constant() == Some(Q::one()) && fixed.q_is_zero());
    if fixed.x[0].as_constant() != Some(Q::one()) || !fixed.q_is_zero() {
        return Err(SusyError::NotCanonical);
    }
    Ok((fixed, g))
}

/// Dimensions entering `M_{0,n} = [(Y/Γ*_Z)/Aut(WP)]`, each computed on its own.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DimensionReport {
    pub n: i64,
    /// `h⁰(Ω¹(2))`, the relative dimension of `Y` over `S`.
    pub y_rel: SuperDim,
    /// Rank of `π_* O_Z`, the relative dimension of `Γ*_Z`.
    pub gamma_z: SuperDim,
    /// `h¹(T_WP)`, the dimension of `S`.
    pub base: SuperDim,
    /// `h⁰(T_WP)`, the dimension of `Aut(WP)`.
    pub aut_wp: SuperDim,
    pub quotient_rel: SuperDim,
    pub moduli: SuperDim,
}

pub fn moduli_dimension_report(n: i64) -> Result<DimensionReport> {
    let y_rel = h0_omega_twisted(n, EulerWeight::Unweighted)?.dim;
    let z = build_z(n)?;
    let gamma_z = h0_on_z(&line_bundle_on_z(&z, 0), None)?.rank;
    let t = tangent_cohomology(WPSpace::ramond(n)?, None)?;
    let quotient_rel = y_rel.minus(gamma_z);
    Ok(DimensionReport {
        n,
        y_rel,
        gamma_z,
        base: t.h1dim,
        aut_wp: t.h0dim,
        quotient_rel,
        moduli: quotient_rel.plus(t.h1dim).minus(t.h0dim),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalgebra::q;

    fn grass(k: usize) -> Ring {
        let names: Vec<String> = (1..=k).map(|i| format!("e{i}")).collect();
        Ring::from_names(vec![], names).unwrap()
    }

    #[test]
    fn omega_dims_and_paper_basis() {
        for n in [4, 6, 8] {
            for conv in [EulerWeight::Unweighted, EulerWeight::Weighted] {
                let o = h0_omega_twisted(n, conv).unwrap();
                assert_eq!(o.dim, SuperDim::new(n + 2, n + 2));
                assert!(o.surjective);
                let b = canonical_basis(n, &o.hring, conv);
                assert!(b.iter().all(|f| o.in_kernel(f)));
                assert_eq!(o.rank_of(&b), (2 * n + 4) as usize);
            }
            let o = h0_omega_twisted(n, EulerWeight::Weighted).unwrap();
            let paper = canonical_basis(n, &o.hring, EulerWeight::Unweighted);
            assert!(!o.in_kernel(&paper[2 * n as usize + 3]));
            assert!(o.pieces_match_sheaf().unwrap());
        }
    }

    #[test]
    fn chart_u_examples() {
        let s = SusyForm::from_affine_p(4, &[-1, 0, 0, 0, 1]).unwrap();
        let w = s.omega_on_chart_u().unwrap();
        assert_eq!(w.coeff(0).to_string(), "1");
        assert_eq!(w.coeff(1).to_string(), "-zeta + z^4*zeta");
        let d = distribution_from_form(&w).unwrap();
        assert_eq!(d.coeff(1).to_string(), "1");
        let r = ramond_divisor(&s).unwrap();
        assert_eq!(r.affine.to_string(), "-1 + z^4");
        let zero = SusyForm::from_affine_p(4, &[]).unwrap();
        assert_eq!(ramond_divisor(&zero), Err(SusyError::Integrable));
    }

    #[test]
    fn last_xi_on_both_charts() {
        let n = 6;
        let b = grass(1);
        let mut xi = vec![SuperPoly::zero(&b); 8];
        xi[7] = SuperPoly::var(&b, "e1").unwrap();
        let mut x = vec![SuperPoly::zero(&b); 8];
        x[0] = SuperPoly::one(&b);
        let s = SusyForm::new(n, &b, x, xi).unwrap();
        let wu = s.omega_on_chart_u().unwrap();
        assert_eq!(wu.coeff(0).to_string(), "1 + 2*z^3*e1*zeta");
        assert_eq!(wu.coeff(1).to_string(), "z^4*e1");
        // ω_V pulled back to U equals z^{-2} ω_U
        let wv = s.omega_on_chart_v().unwrap();
        let c = wv.ring().clone();
        let z = var(&c, "z");
        let glue = ChartMap::by_name(
            &c,
            &c,
            &[("w", z.pow(-1).unwrap()), ("chi", &var(&c, "zeta") * &z.pow(n / 2 - 1).unwrap())],
        )
        .unwrap();
        let back = wv.pullback(&glue, &coords(&c, &["z", "zeta"])).unwrap();
        assert_eq!(back, wu.scale_left(&z.pow(-2).unwrap()));
    }

    #[test]
    fn discriminant_examples() {
        let k = Ring::new(&[], &[]).unwrap();
        let h = homogeneous_ring(&k).unwrap();
        let p = SuperPoly::parse(&h, "v^4 - u^4").unwrap();
        assert!(!homogeneous_discriminant(&p, 4).unwrap().is_zero());
        let p = SuperPoly::parse(&h, "u^2*v^2").unwrap();
        assert!(homogeneous_discriminant(&p, 4).unwrap().is_zero());
        let p = SuperPoly::parse(&h, "u^4").unwrap();
        assert!(homogeneous_discriminant(&p, 4).unwrap().is_zero());
        let p = SuperPoly::parse(&h, "u^3").unwrap();
        assert!(homogeneous_discriminant(&p, 4).is_err());
    }

    #[test]
    fn gauge_fix_examples() {
        let n = 4;
        let b = grass(2);
        let e1 = SuperPoly::var(&b, "e1").unwrap();
        let e2 = SuperPoly::var(&b, "e2").unwrap();
        let mut x: Vec<SuperPoly> = (0..6).map(|i| SuperPoly::int(&b, i as i64 - 2)).collect();
        x[0] = SuperPoly::int(&b, 3);
        let mut xi = vec![SuperPoly::zero(&b); 6];
        xi[0] = e1.clone();
        xi[3] = e2.clone();
        let s = SusyForm::new(n, &b, x, xi).unwrap();
        let (fixed, g) = gauge_fix(&s).unwrap();
        assert_eq!(g.a0.as_constant(), Some(q(1) / q(3)));
        assert_eq!(gauge_fix(&fixed).unwrap().1, GammaStar::identity(n, &b));
        let g2 = GammaStar::new(n, SuperPoly::int(&b, 2), vec![SuperPoly::zero(&b), e2.clone()]).unwrap();
        assert_eq!(gauge_fix(&gamma_action(&g2, &s).unwrap()).unwrap().0, fixed);
        // a β-shift on a q-free form only touches q at first order
        let moved = gamma_action(
            &GammaStar::new(n, SuperPoly::one(&b), vec![e1.clone(), SuperPoly::zero(&b)]).unwrap(),
            &fixed,
        )
        .unwrap();
        assert_eq!(moved.xi[0], -&e1);
        assert_eq!(moved.x[0], fixed.x[0]);
    }

    #[test]
    fn dimension_report() {
        for (n, m) in [(4, (1, 0)), (6, (3, 1)), (10, (7, 3))] {
            let r = moduli_dimension_report(n).unwrap();
            assert_eq!(r.moduli, SuperDim::new(m.0, m.1));
            assert_eq!(r.quotient_rel, SuperDim::new(n + 1, n / 2 + 2));
        }
    }
}
