//! Generators and property bodies shared by the property suite and the acceptance gate.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use supermoduli::autgroup::{gamma_star_embedding, quotient_equal, AutElement};
use supermoduli::family::build_z;
use supermoduli::sheaf::{CechComplex, Charts, SheafKind, WPSpace};
use supermoduli::superalgebra::Monomial;
use supermoduli::susy::{gauge_fix, GammaStar, SusyForm};
use supermoduli::{ChartMap, Parity, Ring, SuperOneForm, SuperPoly, SuperVectorField, Var, Q};

pub const CASES: u32 = 256;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// `k[x, y | s, t, r]`, polynomial in the even generators.
pub fn poly_ring() -> Ring {
    Ring::new(&[("x", false), ("y", false)], &["s", "t", "r"]).unwrap()
}

pub fn grassmann(k: usize) -> Ring {
    Ring::from_names(vec![], (1..=k).map(|i| format!("e{i}")).collect()).unwrap()
}

/// Raw terms: coefficient, even exponents, odd mask.
pub fn raw_terms(n_even: usize, lo: i32, hi: i32, n_odd: usize) -> impl Strategy<Value = Vec<(i64, Vec<i32>, u64)>> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(lo..=hi, n_even), 0u64..(1u64 << n_odd)), 0..5)
}

/// Keeps only the terms of the requested parity.
pub fn build(ring: &Ring, terms: &[(i64, Vec<i32>, u64)], parity: Option<Parity>) -> SuperPoly {
    SuperPoly::from_terms(
        ring,
        terms
            .iter()
            .filter(|(_, _, o)| parity.is_none_or(|p| (o.count_ones() % 2 == 1) == (p == Parity::Odd)))
            .map(|(c, e, o)| (Monomial { exps: e.clone(), odd: *o }, q(*c))),
    )
}

pub fn homogeneous(ring: &Ring, lo: i32, hi: i32, parity: Parity) -> impl Strategy<Value = SuperPoly> {
    let r = ring.clone();
    raw_terms(ring.n_even(), lo, hi, ring.n_odd()).prop_map(move |t| build(&r, &t, Some(parity)))
}

pub fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

pub fn sign(p: Parity, q: Parity) -> bool {
    p == Parity::Odd && q == Parity::Odd
}

pub type RawTerms = Vec<(i64, Vec<i32>, u64)>;

/// `ab = (-1)^{|a||b|} ba`.
pub fn koszul((pa, pb): (Parity, Parity), (ta, tb): (RawTerms, RawTerms)) -> Result<(), TestCaseError> {
    let r = poly_ring();
    let a = build(&r, &ta, Some(pa));
    let b = build(&r, &tb, Some(pb));
    let ab = &a * &b;
    let ba = &b * &a;
    prop_assert_eq!(ab, if sign(pa, pb) { -&ba } else { ba });
    Ok(())
}

/// Maps of `poly_ring` to itself with invertible-free images.
pub fn ring_map() -> impl Strategy<Value = ChartMap> {
    let r = poly_ring();
    (
        homogeneous(&r, 0, 2, Parity::Even),
        homogeneous(&r, 0, 2, Parity::Even),
        homogeneous(&r, 0, 2, Parity::Odd),
        homogeneous(&r, 0, 2, Parity::Odd),
        homogeneous(&r, 0, 2, Parity::Odd),
    )
        .prop_map(move |(x, y, s, t, rr)| {
            ChartMap::by_name(&r, &r, &[("x", x), ("y", y), ("s", s), ("t", t), ("r", rr)]).unwrap()
        })
}

/// `p(m1)(m2) = p(m2 ∘ m1)`.
pub fn functoriality(p: &SuperPoly, m1: &ChartMap, m2: &ChartMap) -> Result<(), TestCaseError> {
    let lhs = p.substitute(m1).unwrap().substitute(m2).unwrap();
    let rhs = p.substitute(&m2.after(m1).unwrap()).unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// A field of the given parity on chart U with coefficients involving two odd parameters.
pub fn field(parity: Parity) -> impl Strategy<Value = SuperVectorField> {
    let c = Charts::new(&["p1".into(), "p2".into()]);
    let r = c.ring.clone();
    let (pz, pzeta) = match parity {
        Parity::Even => (Parity::Even, Parity::Odd),
        Parity::Odd => (Parity::Odd, Parity::Even),
    };
    // only z, zeta and the parameters: mask bits 0..3, w and chi absent
    let coeff = move |p: Parity| {
        let r = r.clone();
        prop::collection::vec((-3i64..=3, -1i32..=2, 0u64..8), 0..4).prop_map(move |ts| {
            let terms: Vec<(i64, Vec<i32>, u64)> = ts.into_iter().map(|(k, e, o)| (k, vec![e, 0], o)).collect();
            build(&r, &terms, Some(p))
        })
    };
    (coeff(pz), coeff(pzeta)).prop_map(move |(a, b)| c.u_field(a, b))
}

/// `[X,[Y,Z]] = [[X,Y],Z] + (-1)^{|X||Y|}[Y,[X,Z]]`.
pub fn jacobi(x: &SuperVectorField, y: &SuperVectorField, z: &SuperVectorField) -> Result<(), TestCaseError> {
    let br = |a: &SuperVectorField, b: &SuperVectorField| a.bracket(b).unwrap();
    let (px, py) = (x.parity().unwrap_or(Parity::Even), y.parity().unwrap_or(Parity::Even));
    if x.is_zero() || y.is_zero() || z.is_zero() {
        return Ok(());
    }
    let lhs = br(x, &br(y, z));
    let t = br(y, &br(x, z));
    let rhs = br(&br(x, y), z).add(&if sign(px, py) { t.map_coeffs(|c| -c) } else { t }).unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// Dimensions at window `N` and `N + 1` agree once `N` reaches the default radius.
pub fn window_stable(m: i64, kind: SheafKind, extra: i64) -> Result<(), TestCaseError> {
    let space = WPSpace::new(m);
    let d = match kind {
        SheafKind::Line(d) => d,
        SheafKind::Tangent => 2,
    };
    let n0 = space.default_window(d) + extra;
    let a = CechComplex::new(space, kind, n0).unwrap();
    let b = CechComplex::new(space, kind, n0 + 1).unwrap();
    prop_assert_eq!(a.h0_dim(), b.h0_dim());
    prop_assert_eq!(a.h1_dim(), b.h1_dim());
    Ok(())
}

pub fn sheaf_kind() -> impl Strategy<Value = SheafKind> {
    prop_oneof![Just(SheafKind::Tangent), (-6i64..=6).prop_map(SheafKind::Line)]
}

/// Odd element `Σ k_i e_i` of a Grassmann ring.
pub fn odd_combo(ring: &Ring, ks: &[i64]) -> SuperPoly {
    let mut p = SuperPoly::zero(ring);
    for (i, k) in ks.iter().enumerate() {
        p = &p + &SuperPoly::gen(ring, Var::Odd(i)).scale(&q(*k));
    }
    p
}

fn e12(ring: &Ring) -> SuperPoly {
    &SuperPoly::gen(ring, Var::Odd(0)) * &SuperPoly::gen(ring, Var::Odd(1))
}

#[derive(Clone, Debug)]
pub struct AutSeed {
    pub n: i64,
    pub abcde: [i64; 5],
    pub nil: i64,
    pub odd: Vec<[i64; 3]>,
}

pub fn aut_seed() -> impl Strategy<Value = AutSeed> {
    prop_oneof![Just(4i64), Just(6i64)].prop_flat_map(|n| {
        (
            prop::array::uniform5(-3i64..=3).prop_filter("unit", |v| v[0] * v[3] - v[1] * v[2] != 0 && v[4] != 0),
            -2i64..=2,
            prop::collection::vec(prop::array::uniform3(-2i64..=2), (n + 2) as usize),
        )
            .prop_map(move |(abcde, nil, odd)| AutSeed { n, abcde, nil, odd })
    })
}

impl AutSeed {
    pub fn element(&self, ring: &Ring) -> AutElement {
        let h = (self.n / 2 + 1) as usize;
        let int = |k: i64| SuperPoly::int(ring, k);
        let odd: Vec<SuperPoly> = self.odd.iter().map(|ks| odd_combo(ring, ks)).collect();
        AutElement::new(
            self.n,
            ring,
            &int(self.abcde[0]) + &e12(ring).scale(&q(self.nil)),
            int(self.abcde[1]),
            int(self.abcde[2]),
            int(self.abcde[3]),
            int(self.abcde[4]),
            odd[..h].to_vec(),
            odd[h..].to_vec(),
        )
        .unwrap()
    }
}

/// `g γ g⁻¹ ∈ Γ*`, with a witness.
pub fn gamma_normal(seed: &AutSeed, r0: i64, betas: &[[i64; 3]]) -> Result<(), TestCaseError> {
    let ring = grassmann(3);
    let g = seed.element(&ring);
    let beta: Vec<SuperPoly> = betas.iter().take((seed.n / 2) as usize).map(|ks| odd_combo(&ring, ks)).collect();
    let gs = GammaStar::new(seed.n, SuperPoly::int(&ring, r0), beta).unwrap();
    let gamma = gamma_star_embedding(&gs).unwrap();
    let conj = g.compose(&gamma).unwrap().compose(&g.invert().unwrap()).unwrap();
    let w = quotient_equal(&AutElement::identity(seed.n, &ring), &conj).unwrap();
    prop_assert!(w.is_some());
    prop_assert_eq!(w.unwrap().a0, SuperPoly::int(&ring, r0));
    Ok(())
}

pub fn gamma_seed() -> impl Strategy<Value = (i64, Vec<[i64; 3]>)> {
    (
        (1i64..=4).prop_flat_map(|r| prop_oneof![Just(r), Just(-r)]),
        prop::collection::vec(prop::array::uniform3(-2i64..=2), 3),
    )
}

#[derive(Clone, Debug)]
pub struct FormSeed {
    pub n: i64,
    pub x1: i64,
    pub nil: i64,
    pub x: Vec<i64>,
    pub xi: Vec<[i64; 3]>,
}

pub fn form_seed() -> impl Strategy<Value = FormSeed> {
    prop_oneof![Just(4i64), Just(6i64)].prop_flat_map(|n| {
        let len = (n + 2) as usize;
        (
            (1i64..=4).prop_flat_map(|r| prop_oneof![Just(r), Just(-r)]),
            -2i64..=2,
            prop::collection::vec(-3i64..=3, len),
            prop::collection::vec(prop::array::uniform3(-2i64..=2), len),
        )
            .prop_map(move |(x1, nil, x, xi)| FormSeed { n, x1, nil, x, xi })
    })
}

impl FormSeed {
    pub fn form(&self, ring: &Ring) -> SusyForm {
        let mut x: Vec<SuperPoly> = self.x.iter().map(|k| SuperPoly::int(ring, *k)).collect();
        x[0] = &SuperPoly::int(ring, self.x1) + &e12(ring).scale(&q(self.nil));
        let xi = self.xi.iter().map(|ks| odd_combo(ring, ks)).collect();
        SusyForm::new(self.n, ring, x, xi).unwrap()
    }
}

pub fn gauge_idempotent(seed: &FormSeed) -> Result<(), TestCaseError> {
    let ring = grassmann(3);
    let s = seed.form(&ring);
    let (f1, _) = gauge_fix(&s).unwrap();
    let (f2, w) = gauge_fix(&f1).unwrap();
    prop_assert_eq!(&f1.x[0], &SuperPoly::one(&ring));
    prop_assert!(f1.q_is_zero());
    prop_assert_eq!(f2, f1);
    prop_assert_eq!(w, GammaStar::identity(seed.n, &ring));
    Ok(())
}

/// Jacobian-invertible self-maps of `poly_ring`: diagonal units plus nilpotent or
/// triangular corrections.
pub fn invertible_map() -> impl Strategy<Value = ChartMap> {
    let r = poly_ring();
    (
        prop::array::uniform4((1i64..=3).prop_flat_map(|k| prop_oneof![Just(k), Just(-k)])),
        homogeneous(&r, 0, 1, Parity::Even),
        homogeneous(&r, 0, 1, Parity::Even),
    )
        .prop_map(move |(k, ex, ey)| {
            let v = |n: &str| SuperPoly::var(&r, n).unwrap();
            let nil = |p: &SuperPoly| p.filter(|m| m.odd != 0);
            let t_free = |p: &SuperPoly| p.filter(|m| m.odd & 0b010 == 0 && m.odd & 0b001 == 0);
            ChartMap::by_name(
                &r,
                &r,
                &[
                    ("x", &v("x").scale(&q(k[0])) + &nil(&ex)),
                    ("y", &v("y").scale(&q(k[1])) + &nil(&ey)),
                    ("s", &v("s").scale(&q(k[2])) + &(&v("t") * &t_free(&(&ex + &ey)))),
                    ("t", v("t").scale(&q(k[3]))),
                    ("r", v("r")),
                ],
            )
            .unwrap()
        })
}

pub fn form_on_poly_ring() -> impl Strategy<Value = SuperOneForm> {
    let r = poly_ring();
    (
        homogeneous(&r, 0, 2, Parity::Even),
        homogeneous(&r, 0, 2, Parity::Even),
        homogeneous(&r, 0, 2, Parity::Odd),
        homogeneous(&r, 0, 2, Parity::Odd),
        homogeneous(&r, 0, 2, Parity::Odd),
    )
        .prop_map(move |(a, b, c, d, e)| SuperOneForm::new(&r, &r.vars(), vec![a, b, c, d, e]).unwrap())
}

/// `(m2 ∘ m1)^* ω = m2^*(m1^* ω)`.
pub fn pullback_functorial(w: &SuperOneForm, m1: &ChartMap, m2: &ChartMap) -> Result<(), TestCaseError> {
    let coords = w.coords().to_vec();
    let lhs = w.pullback(m1, &coords).unwrap().pullback(m2, &coords).unwrap();
    let rhs = w.pullback(&m2.after(m1).unwrap(), &coords).unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// Pulling `Z` back along `f` and then changing the base by `φ` equals pulling back
/// along `φ(f)`.
pub fn base_change(n: i64, f: &[[i64; 3]], phi: &[[i64; 3]]) -> Result<(), TestCaseError> {
    let names: Vec<String> = (1..=3).map(|i| format!("e{i}")).collect();
    let c = Charts::new(&names);
    let z = build_z(n).unwrap();
    let s = z.base.n_params();
    let fs: Vec<SuperPoly> = f.iter().take(s).map(|ks| odd_combo(&c.ring, ks)).collect();
    let images: Vec<(&str, SuperPoly)> =
        names.iter().zip(phi).map(|(nm, ks)| (nm.as_str(), odd_combo(&c.ring, ks))).collect();
    let base = ChartMap::by_name(&c.ring, &c.ring, &images).unwrap();
    let d = z.pullback(&c, &fs).unwrap();
    let moved_w = d.w_image().substitute(&base).unwrap();
    let moved_chi = d.chi_image().substitute(&base).unwrap();
    let f2: Vec<SuperPoly> = fs.iter().map(|p| p.substitute(&base).unwrap()).collect();
    let d2 = z.pullback(&c, &f2).unwrap();
    prop_assert_eq!(&moved_w, d2.w_image());
    prop_assert_eq!(&moved_chi, d2.chi_image());
    Ok(())
}
