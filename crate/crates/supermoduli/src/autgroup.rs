//! Automorphisms of `A = k[u, v | θ]`, the subgroup `Γ*` acting trivially on
//! WP, and the actions of `Aut(WP) = Aut(A)/Γ*` on the base `S` and on SUSY forms.

use num_traits::Zero;
use thiserror::Error;

use crate::family::{classify_deformation, standard_gluing, DeformationGluing, FamilyError};
use crate::linalg::{Echelon, SparseVec};
use crate::sheaf::{check_ramond, tangent_cohomology, Charts, SheafError, WPSpace};
use crate::superalgebra::{AlgebraError, ChartMap, Monomial, Parity, Ring, SuperPoly, SuperVectorField, Var};
use crate::susy::{
    distribution_from_form, gauge_fix, homogeneous_discriminant, homogeneous_ring, EulerWeight, GammaStar, SusyError,
    SusyForm,
};
use crate::SuperDim;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Susy(#[from] SusyError),
    #[error("ad - bc or e is not a unit")]
    NotInvertible,
    #[error("map does not have the shape of a graded automorphism")]
    NotAutomorphism,
    #[error("automorphism moves a chart off itself")]
    NotChartPreserving,
    #[error("elements live over different rings")]
    RingMismatch,
    #[error("Ramond divisor is ramified")]
    Ramified,
    #[error("fixed-point equations are not of the expected form: {0}")]
    UnexpectedEquations(String),
}

pub type Result<T> = std::result::Result<T, AutError>;

/// `u ↦ au + bv + θΣα_i u^{n/2-i}v^i`, `v ↦ cu + dv + θΣβ_j u^{n/2-j}v^j`, `θ ↦ eθ`,
/// with coefficients in `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutElement {
    pub n: i64,
    pub base: Ring,
    pub a: SuperPoly,
    pub b: SuperPoly,
    pub c: SuperPoly,
    pub d: SuperPoly,
    pub e: SuperPoly,
    pub alpha: Vec<SuperPoly>,
    pub beta: Vec<SuperPoly>,
}

fn gen(r: &Ring, name: &str) -> SuperPoly {
    SuperPoly::var(r, name).expect("generator present")
}

impl AutElement {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: i64,
        base: &Ring,
        a: SuperPoly,
        b: SuperPoly,
        c: SuperPoly,
        d: SuperPoly,
        e: SuperPoly,
        alpha: Vec<SuperPoly>,
        beta: Vec<SuperPoly>,
    ) -> Result<Self> {
        check_ramond(n).map_err(AutError::Sheaf)?;
        let len = (n / 2 + 1) as usize;
        if alpha.len() != len || beta.len() != len {
            return Err(AutError::NotAutomorphism);
        }
        for p in [&a, &b, &c, &d, &e] {
            if p.ring() != base || !(p.is_zero() || p.parity() == Some(Parity::Even)) {
                return Err(AutError::NotAutomorphism);
            }
        }
        for p in alpha.iter().chain(&beta) {
            if p.ring() != base || !(p.is_zero() || p.parity() == Some(Parity::Odd)) {
                return Err(AutError::NotAutomorphism);
            }
        }
        let g = AutElement { n, base: base.clone(), a, b, c, d, e, alpha, beta };
        if g.det().inverse().is_err() || g.e.inverse().is_err() {
            return Err(AutError::NotInvertible);
        }
        Ok(g)
    }

    /// The bosonic part `(a, b, c, d, e)` with `α = β = 0`.
    pub fn linear(n: i64, base: &Ring, abcde: [SuperPoly; 5]) -> Result<Self> {
        let z = vec![SuperPoly::zero(base); (n / 2 + 1) as usize];
        let [a, b, c, d, e] = abcde;
        AutElement::new(n, base, a, b, c, d, e, z.clone(), z)
    }

    /// Integer `(a, b, c, d, e)` over `base`.
    pub fn from_ints(n: i64, base: &Ring, abcde: [i64; 5]) -> Result<Self> {
        AutElement::linear(n, base, abcde.map(|x| SuperPoly::int(base, x)))
    }

    pub fn identity(n: i64, base: &Ring) -> Self {
        AutElement::from_ints(n, base, [1, 0, 0, 1, 1]).expect("identity")
    }

    pub fn det(&self) -> SuperPoly {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn hring(&self) -> Ring {
        homogeneous_ring(&self.base).expect("homogeneous ring")
    }

    /// The ring map on `A ⊗ R`.
    pub fn to_map(&self) -> Result<ChartMap> {
        let h = self.hring();
        let (u, v, th) = (gen(&h, "u"), gen(&h, "v"), gen(&h, "theta"));
        let half = self.n / 2;
        let tail = |cs: &[SuperPoly]| -> Result<SuperPoly> {
            let mut s = SuperPoly::zero(&h);
            for (i, c) in cs.iter().enumerate() {
                let m = &u.pow(half - i as i64)? * &v.pow(i as i64)?;
                s = &s + &(&(&th * &c.transport(&h)?) * &m);
            }
            Ok(s)
        };
        let t = |p: &SuperPoly| p.transport(&h);
        let iu = &(&(&t(&self.a)? * &u) + &(&t(&self.b)? * &v)) + &tail(&self.alpha)?;
        let iv = &(&(&t(&self.c)? * &u) + &(&t(&self.d)? * &v)) + &tail(&self.beta)?;
        let ith = &t(&self.e)? * &th;
        Ok(ChartMap::by_name(&h, &h, &[("u", iu), ("v", iv), ("theta", ith)])?)
    }

    /// Reads the coefficients back from a map of the right shape.
    pub fn from_map(n: i64, base: &Ring, m: &ChartMap) -> Result<Self> {
        let h = m.source().clone();
        let (iu, iv, it) = (h.expect_var("u")?, h.expect_var("v")?, h.expect_var("theta")?);
        let (Var::Even(ku), Var::Even(kv)) = (iu, iv) else { unreachable!() };
        let half = n / 2;
        let bos = |p: &SuperPoly, a: i32, b: i32| -> Result<SuperPoly> {
            Ok(p.without(&[it]).even_coefficient(&[ku, kv], &[a, b]).transport(base)?)
        };
        let fer = |p: &SuperPoly, i: i64| -> Result<SuperPoly> {
            Ok(p.deriv(it).even_coefficient(&[ku, kv], &[(half - i) as i32, i as i32]).transport(base)?)
        };
        let (pu, pv, pt) = (m.image(iu), m.image(iv), m.image(it));
        let g = AutElement::new(
            n,
            base,
            bos(pu, 1, 0)?,
            bos(pu, 0, 1)?,
            bos(pv, 1, 0)?,
            bos(pv, 0, 1)?,
            pt.deriv(it).transport(base)?,
            (0..=half).map(|i| fer(pu, i)).collect::<Result<_>>()?,
            (0..=half).map(|i| fer(pv, i)).collect::<Result<_>>()?,
        )?;
        if &g.to_map()? != m {
            return Err(AutError::NotAutomorphism);
        }
        Ok(g)
    }

    /// `(g ∘ h)(x) = substitute(h(x), g)` on generators.
    pub fn compose(&self, h: &AutElement) -> Result<AutElement> {
        if self.base != h.base || self.n != h.n {
            return Err(AutError::RingMismatch);
        }
        AutElement::from_map(self.n, &self.base, &self.to_map()?.after(&h.to_map()?)?)
    }

    /// Inverts the linear part exactly, then removes the nilpotent remainder by
    /// Newton steps `h ← h ∘ (2·id − g∘h)`.
    pub fn invert(&self) -> Result<AutElement> {
        let det_inv = self.det().inverse().map_err(|_| AutError::NotInvertible)?;
        let e_inv = self.e.inverse().map_err(|_| AutError::NotInvertible)?;
        let mut h = AutElement::linear(
            self.n,
            &self.base,
            [&self.d * &det_inv, -&(&self.b * &det_inv), -&(&self.c * &det_inv), &self.a * &det_inv, e_inv],
        )?
        .to_map()?;
        let g = self.to_map()?;
        let ring = g.source().clone();
        let id = ChartMap::identity(&ring);
        for _ in 0..64 {
            let k = g.after(&h)?;
            if k == id {
                return AutElement::from_map(self.n, &self.base, &h);
            }
            let names = ["u", "v", "theta"];
            let imgs: Vec<(&str, SuperPoly)> = names
                .iter()
                .map(|nm| {
                    let x = gen(&ring, nm);
                    (*nm, &(&x + &x) - k.image_of(nm).unwrap())
                })
                .collect();
            h = h.after(&ChartMap::by_name(&ring, &ring, &imgs)?)?;
        }
        Err(AutError::NotInvertible)
    }

    /// Whether `self` has the shape of the image of `Γ*`; returns the element.
    pub fn as_gamma_star(&self) -> Option<GammaStar> {
        let half = self.n / 2;
        let r0 = &self.a;
        let r0_inv = r0.inverse().ok()?;
        let shape = self.b.is_zero()
            && self.c.is_zero()
            && self.d == *r0
            && self.alpha[half as usize].is_zero()
            && self.beta[0].is_zero()
            && (0..half as usize).all(|i| self.beta[i + 1] == self.alpha[i])
            && r0.pow(1 - half).ok()? == self.e;
        if !shape {
            return None;
        }
        let beta = self.alpha[..half as usize].iter().map(|x| &r0_inv * x).collect();
        GammaStar::new(self.n, r0.clone(), beta).ok()
    }

    /// Chart U: `z ↦ g(v)/g(u)`, `ζ ↦ eζ g(u)^{n/2-1}` restricted to `u = 1`.
    pub fn chart_u(&self, charts: &Charts) -> Result<ChartMap> {
        self.chart(charts, ("u", "v"), ("z", "zeta"))
    }

    /// Chart V: `w ↦ g(u)/g(v)`, `χ ↦ eχ g(v)^{n/2-1}` restricted to `v = 1`.
    pub fn chart_v(&self, charts: &Charts) -> Result<ChartMap> {
        self.chart(charts, ("v", "u"), ("w", "chi"))
    }

    fn chart(&self, charts: &Charts, (one, other): (&str, &str), (x, xi): (&str, &str)) -> Result<ChartMap> {
        let r = &charts.ring;
        let h = self.hring();
        let restrict = ChartMap::by_name(&h, r, &[(one, SuperPoly::one(r)), (other, gen(r, x)), ("theta", gen(r, xi))])
            .map_err(|_| AutError::RingMismatch)?;
        let g = self.to_map()?;
        let g_one = g.image_of(one)?.substitute(&restrict)?;
        let g_other = g.image_of(other)?.substitute(&restrict)?;
        // the chart is preserved iff the body of g(u)|_U is a nonzero constant
        let Var::Even(ix) = r.expect_var(x)? else { unreachable!() };
        if g_one.body().terms().any(|(m, _)| m.exps[ix] != 0) {
            return Err(AutError::NotChartPreserving);
        }
        let inv = g_one.inverse().map_err(|_| AutError::NotChartPreserving)?;
        let g_th = g.image_of("theta")?.substitute(&restrict)?;
        let new_xi = &g_th * &g_one.pow(self.n / 2 - 1)?;
        Ok(ChartMap::by_name(r, r, &[(x, &g_other * &inv), (xi, new_xi)])?)
    }

    /// The same element over a larger ring.
    pub fn transport(&self, base: &Ring) -> Result<AutElement> {
        let t = |p: &SuperPoly| p.transport(base);
        AutElement::new(
            self.n,
            base,
            t(&self.a)?,
            t(&self.b)?,
            t(&self.c)?,
            t(&self.d)?,
            t(&self.e)?,
            self.alpha.iter().map(t).collect::<std::result::Result<_, _>>()?,
            self.beta.iter().map(t).collect::<std::result::Result<_, _>>()?,
        )
    }
}

/// `u, v ↦ r₀(1 + θB)u, r₀(1 + θB)v`, `θ ↦ r₀^{1-n/2}θ`.
pub fn gamma_star_embedding(g: &GammaStar) -> Result<AutElement> {
    let base = g.a0.ring().clone();
    let half = (g.n / 2) as usize;
    let zero = SuperPoly::zero(&base);
    let mut alpha: Vec<SuperPoly> = g.beta.iter().map(|b| &g.a0 * b).collect();
    alpha.push(zero.clone());
    let mut beta = vec![zero.clone()];
    beta.extend(g.beta.iter().map(|b| &g.a0 * b));
    debug_assert_eq!(alpha.len(), half + 1);
    AutElement::new(g.n, &base, g.a0.clone(), zero.clone(), zero, g.a0.clone(), g.a0.pow(1 - g.n / 2)?, alpha, beta)
}

/// `(1 + θB)^{1-n/2} θ = θ` for `B = Σβ_i v^i u^{n/2-1-i}`.
pub fn theta_scaling_collapses(g: &GammaStar) -> Result<bool> {
    let h = homogeneous_ring(g.a0.ring())?;
    let unit = &g.homogeneous_function(&h)? * &g.a0.transport(&h)?.inverse()?;
    let th = gen(&h, "theta");
    Ok(&unit.pow(1 - g.n / 2)? * &th == th)
}

/// `h ∘ g⁻¹ ∈ Γ*`, with the witness.
pub fn quotient_equal(g: &AutElement, h: &AutElement) -> Result<Option<GammaStar>> {
    Ok(h.compose(&g.invert()?)?.as_gamma_star())
}

/// An S-point `η` transported by `g`: conjugate the pulled-back gluing by the chart
/// expressions of `g` and classify the result.
pub fn act_on_s(g: &AutElement, eta: &[SuperPoly]) -> Result<Vec<SuperPoly>> {
    let base = &g.base;
    if base.n_even() != 0 {
        return Err(AutError::RingMismatch);
    }
    let names: Vec<String> = (0..base.n_odd()).map(|j| base.odd_name(j).to_string()).collect();
    let charts = Charts::new(&names);
    let r = &charts.ring;
    let f: Vec<SuperPoly> = eta.iter().map(|p| p.transport(r)).collect::<std::result::Result<_, _>>()?;
    let glue = standard_gluing(g.n, &charts, &f)?;
    let d = DeformationGluing { n: g.n, charts: charts.clone(), map: glue };
    let moved = d.conjugate(&g.invert()?.chart_u(&charts)?, &g.chart_v(&charts)?)?;
    let d2 =
        DeformationGluing::new(g.n, charts.clone(), moved.image(charts.w).clone(), moved.image(charts.chi).clone())?;
    let cls = classify_deformation(&d2)?;
    Ok(cls.params.iter().map(|p| p.transport(base)).collect::<std::result::Result<_, _>>()?)
}

/// Pullback of the form by `g` (weighted Euler lift), then gauge fixing.
pub fn act_on_susy(g: &AutElement, s: &SusyForm) -> Result<SusyForm> {
    let g = if g.base == s.base { g.clone() } else { g.transport(&s.base)? };
    let omega = s.homogeneous(EulerWeight::Weighted)?;
    let h = omega.ring().clone();
    let coords: Vec<Var> = omega.coords().to_vec();
    let pulled = omega.pullback(&g.to_map()?, &coords)?;
    let moved = SusyForm::from_homogeneous(s.n, &s.base, &pulled, EulerWeight::Weighted)?;
    debug_assert_eq!(&h, pulled.ring());
    Ok(gauge_fix(&moved)?.0)
}

/// Superconformal fields among the global vector fields of `space`:
/// `X` with `[D, X] ∈ span(D)`. Returns dimension per parity and a basis on chart U.
pub fn superconformal_sections_raw(space: WPSpace, d: &SuperVectorField) -> Result<(SuperDim, Vec<SuperVectorField>)> {
    let t = tangent_cohomology(space, None)?;
    let charts = Charts::plain();
    let f_inv = d.coeff(1).inverse().map_err(|_| AutError::Susy(SusyError::Degenerate))?;
    let ratio = &f_inv * d.coeff(0);
    let mut dim = SuperDim::new(0, 0);
    let mut basis = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let fields: Vec<SuperVectorField> =
            t.h0basis.iter().filter(|s| s.parity == parity).map(|s| s.u_field(&charts)).collect();
        let mut rows: std::collections::HashMap<Monomial, usize> = std::collections::HashMap::new();
        let mut ech = Echelon::new();
        for x in &fields {
            let br = d.bracket(x)?;
            let cond = br.coeff(0) - &(br.coeff(1) * &ratio);
            let v: SparseVec = cond
                .terms()
                .map(|(m, q)| {
                    let len = rows.len();
                    (*rows.entry(m.clone()).or_insert(len), q.clone())
                })
                .collect();
            ech.insert(&v);
        }
        for rel in ech.kernel() {
            let mut x = SuperVectorField::zero(d.ring(), d.coords());
            for (i, q) in rel {
                x = x.add(&fields[*i].map_coeffs(|p| p.scale(q)))?;
            }
            match parity {
                Parity::Even => dim.even += 1,
                Parity::Odd => dim.odd += 1,
            }
            basis.push(x);
        }
    }
    Ok((dim, basis))
}

/// Global superconformal vector fields of a SUSY structure over `k`.
pub fn superconformal_global_sections(s: &SusyForm) -> Result<(SuperDim, Vec<SuperVectorField>)> {
    let d = distribution_from_form(&s.omega_on_chart_u()?)?;
    superconformal_sections_raw(WPSpace::ramond(s.n)?, &d)
}

/// `Aut(Σ)` for a SUSY structure over `k`.
#[derive(Clone, Debug)]
pub struct Stabilizer {
    pub order: usize,
    pub generator: AutElement,
    /// Chart-U images of `z` and `ζ` under the generator.
    pub generator_on_u: (SuperPoly, SuperPoly),
    /// Solutions `(a, b, c, d)` of the fixed-point conditions on `P¹`.
    pub mobius_solutions: usize,
}

/// The projective map `[u:v] ↦ [au+bv : cu+dv]` fixes a point iff
/// `F = c u² + (d−a) uv − b v²` vanishes there. Fixing every root of a squarefree
/// `p` of degree `n ≥ 4` forces `p | F`, hence `F = 0`. Returns the dimension of the
/// solution space in `(a, b, c, d)`.
fn pointwise_fixing_solutions(p: &SuperPoly, n: i64) -> Result<usize> {
    let k = Ring::new(&[("a", false), ("b", false), ("c", false), ("d", false)], &[])?;
    let h = homogeneous_ring(&k)?;
    let (u, v) = (gen(&h, "u"), gen(&h, "v"));
    let f = &(&(&gen(&h, "c") * &u.pow(2)?) + &(&(&gen(&h, "d") - &gen(&h, "a")) * &(&u * &v)))
        - &(&gen(&h, "b") * &v.pow(2)?);
    // remainder of F modulo p is F itself since deg F < deg p
    debug_assert!(n > 2 && p.terms().all(|(m, _)| m.exps.iter().sum::<i32>() as i64 == n));
    let (Var::Even(iu), Var::Even(iv)) = (h.expect_var("u")?, h.expect_var("v")?) else { unreachable!() };
    let mut ech = Echelon::new();
    for (mono, _) in [(2, 0), (1, 1), (0, 2)].iter().map(|&(a, b)| ((a, b), ())) {
        let c = f.even_coefficient(&[iu, iv], &[mono.0, mono.1]);
        let row: SparseVec = (0..4)
            .filter_map(|i| {
                let mut m = Monomial::one(&h);
                m.exps[i] = 1;
                let q = c.coeff(&m);
                (!q.is_zero()).then_some((i, q))
            })
            .collect();
        ech.insert(&row);
    }
    Ok(4 - ech.rank())
}

pub fn stabilizer(s: &SusyForm) -> Result<Stabilizer> {
    let (s, _) = gauge_fix(s)?;
    let p = s.p_homogeneous()?;
    if homogeneous_discriminant(&p, s.n)?.is_zero() {
        return Err(AutError::Ramified);
    }
    let mobius = pointwise_fixing_solutions(&p, s.n)?;
    if mobius != 1 {
        return Err(AutError::UnexpectedEquations(format!("{mobius} Möbius directions")));
    }
    // a = d normalised to 1 by Γ*; the θ-scaling e stays symbolic
    let er = Ring::new(&[("e", true)], &[])?;
    let e = gen(&er, "e");
    let one = SuperPoly::one(&er);
    let zero = SuperPoly::zero(&er);
    let g = AutElement::linear(s.n, &er, [one.clone(), zero.clone(), zero, one.clone(), e.clone()])?;
    let se = SusyForm::new(
        s.n,
        &er,
        s.x.iter().map(|c| c.transport(&er)).collect::<std::result::Result<_, _>>()?,
        s.xi.iter().map(|c| c.transport(&er)).collect::<std::result::Result<_, _>>()?,
    )?;
    let moved = act_on_susy(&g, &se)?;
    let quad = &e.pow(2)? - &one;
    let mut nonzero = false;
    for (a, b) in moved.coefficients().zip(se.coefficients()) {
        let eq = a - b;
        if eq.is_zero() {
            continue;
        }
        nonzero = true;
        let Var::Even(ie) = er.expect_var("e")? else { unreachable!() };
        let lead = SuperPoly::constant(&er, eq.even_coefficient(&[ie], &[2]).as_constant().unwrap_or_default());
        if &quad * &lead != eq {
            return Err(AutError::UnexpectedEquations(eq.to_string()));
        }
    }
    if !nonzero {
        return Err(AutError::UnexpectedEquations("no condition on e".into()));
    }
    let k = s.base.clone();
    let generator = AutElement::from_ints(s.n, &k, [1, 0, 0, 1, -1])?;
    if quotient_equal(&AutElement::identity(s.n, &k), &generator)?.is_some() {
        return Err(AutError::UnexpectedEquations("e = -1 lies in Γ*".into()));
    }
    if act_on_susy(&generator, &s)? != s {
        return Err(AutError::UnexpectedEquations("generator does not fix the form".into()));
    }
    let charts = Charts::plain();
    let on_u = generator.chart_u(&charts)?;
    Ok(Stabilizer {
        order: 2,
        generator_on_u: (on_u.image(charts.z).clone(), on_u.image(charts.zeta).clone()),
        generator,
        mobius_solutions: mobius,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DimensionTable {
    pub aut_a: SuperDim,
    pub gamma_star: SuperDim,
    pub aut_wp: SuperDim,
}

/// Parameter counts of the three groups.
pub fn dimension_table(n: i64) -> Result<DimensionTable> {
    check_ramond(n)?;
    let k = Ring::new(&[], &[])?;
    let g = AutElement::identity(n, &k);
    let aut_a = SuperDim::new(5, (g.alpha.len() + g.beta.len()) as i64);
    let gamma_star = SuperDim::new(1, GammaStar::identity(n, &k).beta.len() as i64);
    Ok(DimensionTable { aut_a, gamma_star, aut_wp: aut_a.minus(gamma_star) })
}

/// Chart-U vector fields of the one-parameter directions of `Aut(A)` at the
/// identity, with the rank of their span per parity and whether each is global.
pub fn lie_algebra_check(n: i64) -> Result<(SuperDim, bool)> {
    let base = Ring::new(&[], &["eps1", "eps2"])?;
    let e1 = gen(&base, "eps1");
    let t = &e1 * &gen(&base, "eps2");
    let one = SuperPoly::one(&base);
    let zero = SuperPoly::zero(&base);
    let half = (n / 2 + 1) as usize;
    let charts = Charts::new(&["eps1".into(), "eps2".into()]);
    let plain = Charts::plain();
    let mut fields: Vec<(Parity, SuperVectorField)> = Vec::new();
    let mut push = |g: AutElement, mask: u64, parity: Parity| -> Result<()> {
        let m = g.chart_u(&charts)?;
        let dz = (m.image(charts.z) - &SuperPoly::gen(&charts.ring, charts.z)).split_odd_prefix(2);
        let dzeta = (m.image(charts.zeta) - &charts.zeta()).split_odd_prefix(2);
        let get = |mp: &std::collections::BTreeMap<u64, SuperPoly>| -> Result<SuperPoly> {
            Ok(mp
                .get(&mask)
                .map(|p| p.transport(&plain.ring))
                .transpose()?
                .unwrap_or_else(|| SuperPoly::zero(&plain.ring)))
        };
        fields.push((parity, plain.u_field(get(&dz)?, get(&dzeta)?)));
        Ok(())
    };
    for k in 0..5 {
        let mut abcde = [one.clone(), zero.clone(), zero.clone(), one.clone(), one.clone()];
        abcde[k] = &abcde[k] + &t;
        push(AutElement::linear(n, &base, abcde)?, 0b11, Parity::Even)?;
    }
    for k in 0..2 * half {
        let mut alpha = vec![zero.clone(); half];
        let mut beta = vec![zero.clone(); half];
        if k < half {
            alpha[k] = e1.clone();
        } else {
            beta[k - half] = e1.clone();
        }
        let g =
            AutElement::new(n, &base, one.clone(), zero.clone(), zero.clone(), one.clone(), one.clone(), alpha, beta)?;
        push(g, 0b01, Parity::Odd)?;
    }
    let tc = tangent_cohomology(WPSpace::ramond(n)?, None)?;
    let h0: Vec<SuperVectorField> = tc.h0basis.iter().map(|s| s.u_field(&plain)).collect();
    let mut rank = SuperDim::new(0, 0);
    let mut global = true;
    for parity in [Parity::Even, Parity::Odd] {
        let mine: Vec<&SuperVectorField> = fields.iter().filter(|(p, _)| *p == parity).map(|(_, f)| f).collect();
        let r = field_rank(mine.iter().copied());
        let known: Vec<&SuperVectorField> =
            h0.iter().zip(&tc.h0basis).filter(|(_, s)| s.parity == parity).map(|(f, _)| f).collect();
        let rk = field_rank(known.iter().copied());
        if field_rank(known.iter().copied().chain(mine.iter().copied())) != rk {
            global = false;
        }
        match parity {
            Parity::Even => rank.even = r as i64,
            Parity::Odd => rank.odd = r as i64,
        }
    }
    Ok((rank, global))
}

fn field_rank<'a>(fields: impl Iterator<Item = &'a SuperVectorField>) -> usize {
    let mut rows: std::collections::HashMap<(usize, Monomial), usize> = std::collections::HashMap::new();
    let mut e = Echelon::new();
    for f in fields {
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

/// `p ∘ g` for the bosonic part of `g`, on the homogeneous ring.
pub fn transform_binary_form(g: &AutElement, p: &SuperPoly) -> Result<SuperPoly> {
    Ok(p.substitute(&g.to_map()?)?)
}

/// Two binary forms over `k` agree up to a nonzero scalar.
pub fn proportional(p: &SuperPoly, q: &SuperPoly) -> bool {
    let Some((m, c)) = p.terms().next() else { return q.is_zero() };
    let d = q.coeff(m);
    !d.is_zero() && p.scale(&d) == q.scale(c)
}
