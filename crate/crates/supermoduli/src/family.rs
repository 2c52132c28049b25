//! The universal odd deformation `Z → S` of WP¹|¹(1,1|1−n/2), classification of
//! deformations over Grassmann test rings, the hypersurface model of `Z`, and
//! sections of `O_Z(d)` as modules over the base.

use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{Echelon, SparseVec};
use crate::sheaf::{check_ramond, reduce_cocycle, Charts, Section, SheafError, WPSpace};
use crate::superalgebra::{AlgebraError, ChartMap, Monomial, Parity, Ring, SuperPoly, Transition, Var, Q};
use crate::SuperDim;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("gluing does not reduce to the WP gluing: {0}")]
    NotADeformation(String),
    #[error("expected {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("classification did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, FamilyError>;

/// `S = A^{0|n/2-2}` with odd coordinates `eta1, eta2, ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaseS {
    pub n: i64,
}

impl BaseS {
    pub fn new(n: i64) -> Result<Self> {
        check_ramond(n)?;
        Ok(BaseS { n })
    }

    pub fn n_params(&self) -> usize {
        (self.n / 2 - 2) as usize
    }

    pub fn param_names(&self) -> Vec<String> {
        (1..=self.n_params()).map(|i| format!("eta{i}")).collect()
    }

    pub fn dim(&self) -> SuperDim {
        SuperDim::new(0, self.n_params() as i64)
    }
}

/// `χ ↦ ζ z^{n/2-1} + Σ f_i z^{n/2-1-i}`, `w ↦ 1/z`, on the ring of `charts`.
pub fn standard_gluing(n: i64, charts: &Charts, f: &[SuperPoly]) -> Result<ChartMap> {
    let s = (n / 2 - 2) as usize;
    if f.len() != s {
        return Err(FamilyError::ParameterCount { expected: s, got: f.len() });
    }
    let mut chi = &charts.zeta() * &charts.zpow((n / 2 - 1) as i32);
    for (i, fi) in f.iter().enumerate() {
        chi = &chi + &(fi * &charts.zpow((n / 2 - 2) as i32 - i as i32));
    }
    Ok(ChartMap::by_name(&charts.ring, &charts.ring, &[("w", charts.zpow(-1)), ("chi", chi)])?)
}

/// The universal family, glued over `B = k[eta1..]`.
#[derive(Clone, Debug)]
pub struct FamilyZ {
    pub base: BaseS,
    pub charts: Charts,
    pub transition: Transition,
}

pub fn build_z(n: i64) -> Result<FamilyZ> {
    let base = BaseS::new(n)?;
    let charts = Charts::new(&base.param_names());
    let etas: Vec<SuperPoly> = (0..base.n_params()).map(|i| SuperPoly::gen(&charts.ring, Var::Odd(i))).collect();
    let b_in_a = standard_gluing(n, &charts, &etas)?;
    let mut zeta = &charts.chi() * &charts.wpow((n / 2 - 1) as i32);
    for (i, e) in etas.iter().enumerate() {
        zeta = &zeta - &(e * &charts.wpow(i as i32 + 1));
    }
    let a_in_b = ChartMap::by_name(&charts.ring, &charts.ring, &[("z", charts.wpow(-1)), ("zeta", zeta)])?;
    let transition = Transition { a_coords: charts.u_coords(), b_coords: charts.v_coords(), a_in_b, b_in_a };
    Ok(FamilyZ { base, charts, transition })
}

impl FamilyZ {
    pub fn n(&self) -> i64 {
        self.base.n
    }

    pub fn space(&self) -> WPSpace {
        WPSpace::new(1 - self.base.n / 2)
    }

    /// The image of `χ` under the gluing.
    pub fn chi_image(&self) -> &SuperPoly {
        self.transition.b_in_a.image(self.charts.chi)
    }

    /// The two displayed gluing directions are mutually inverse.
    pub fn directions_agree(&self) -> Result<bool> {
        Ok(self.transition.is_involutive()?)
    }

    /// Pullback of `Z` along `eta_i ↦ f_i`, with `f_i` odd elements of the ring of `target`.
    pub fn pullback(&self, target: &Charts, f: &[SuperPoly]) -> Result<DeformationGluing> {
        let s = self.base.n_params();
        if f.len() != s {
            return Err(FamilyError::ParameterCount { expected: s, got: f.len() });
        }
        let names = self.base.param_names();
        let images: Vec<(&str, SuperPoly)> = names.iter().map(|n| n.as_str()).zip(f.iter().cloned()).collect();
        let base_change = ChartMap::by_name(&self.charts.ring, &target.ring, &images)?;
        let w = self.transition.b_in_a.image(self.charts.w).substitute(&base_change)?;
        let chi = self.chi_image().substitute(&base_change)?;
        DeformationGluing::new(self.n(), target.clone(), w, chi)
    }

    /// Specialisation `eta = 0`, which must be the gluing of WP.
    pub fn specialize_to_wp(&self) -> Result<Transition> {
        let zero: Vec<(String, SuperPoly)> =
            self.base.param_names().into_iter().map(|n| (n, SuperPoly::zero(&self.charts.ring))).collect();
        let images: Vec<(&str, SuperPoly)> = zero.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        let kill = ChartMap::by_name(&self.charts.ring, &self.charts.ring, &images)?;
        let t = &self.transition;
        Ok(Transition {
            a_coords: t.a_coords.clone(),
            b_coords: t.b_coords.clone(),
            a_in_b: kill.after(&t.a_in_b)?,
            b_in_a: kill.after(&t.b_in_a)?,
        })
    }
}

/// A gluing `w ↦ G_w(z, ζ)`, `χ ↦ G_χ(z, ζ)` over a Grassmann ring of parameters,
/// reducing to the WP gluing when the parameters vanish.
#[derive(Clone, Debug)]
pub struct DeformationGluing {
    pub n: i64,
    pub charts: Charts,
    pub map: ChartMap,
}

impl DeformationGluing {
    pub fn new(n: i64, charts: Charts, w: SuperPoly, chi: SuperPoly) -> Result<Self> {
        check_ramond(n)?;
        let map = ChartMap::by_name(&charts.ring, &charts.ring, &[("w", w), ("chi", chi)])?;
        let d = DeformationGluing { n, charts, map };
        d.check_body()?;
        Ok(d)
    }

    /// `χ ↦ ζ z^{n/2-1} + g`, `w ↦ 1/z`.
    pub fn with_odd_term(n: i64, charts: Charts, g: SuperPoly) -> Result<Self> {
        let chi = &(&charts.zeta() * &charts.zpow((n / 2 - 1) as i32)) + &g;
        let w = charts.zpow(-1);
        DeformationGluing::new(n, charts, w, chi)
    }

    fn check_body(&self) -> Result<()> {
        let k = self.charts.n_params;
        let expect_w = self.charts.zpow(-1);
        let expect_chi = &self.charts.zeta() * &self.charts.zpow((self.n / 2 - 1) as i32);
        for (v, expect) in [(self.charts.w, expect_w), (self.charts.chi, expect_chi)] {
            let img = self.map.image(v);
            let body = img.split_odd_prefix(k).remove(&0).unwrap_or_else(|| SuperPoly::zero(&self.charts.ring));
            if body != expect {
                return Err(FamilyError::NotADeformation(format!("{} ↦ {}", self.charts.ring.name(v), img)));
            }
        }
        Ok(())
    }

    pub fn w_image(&self) -> &SuperPoly {
        self.map.image(self.charts.w)
    }

    pub fn chi_image(&self) -> &SuperPoly {
        self.map.image(self.charts.chi)
    }

    /// `on_u ∘ self ∘ on_v`: the gluing after changing coordinates on both charts.
    pub fn conjugate(&self, on_u: &ChartMap, on_v: &ChartMap) -> Result<ChartMap> {
        Ok(on_u.after(&self.map.after(on_v)?)?)
    }
}

/// Parameters `f` with explicit chart automorphisms such that
/// `on_u ∘ d ∘ on_v` is the pullback of `Z` along `eta_i ↦ f_i`.
#[derive(Clone, Debug)]
pub struct Classification {
    pub params: Vec<SuperPoly>,
    pub on_u: ChartMap,
    pub on_v: ChartMap,
}

impl Classification {
    pub fn verify(&self, d: &DeformationGluing) -> Result<bool> {
        let target = standard_gluing(d.n, &d.charts, &self.params)?;
        let got = d.conjugate(&self.on_u, &self.on_v)?;
        Ok(got.image(d.charts.w) == target.image(d.charts.w) && got.image(d.charts.chi) == target.image(d.charts.chi))
    }
}

/// Classifies a deformation gluing order by order in the parameter degree: at each
/// order the discrepancy from the current standard gluing is a Čech 1-cocycle, its
/// class moves the parameters and its coboundary part is removed by chart changes.
pub fn classify_deformation(d: &DeformationGluing) -> Result<Classification> {
    let space = WPSpace::ramond(d.n)?;
    let ch = &d.charts;
    let r = &ch.ring;
    let k = ch.n_params;
    let s = (d.n / 2 - 2) as usize;
    let plain = Charts::plain();
    let trans = space.transition(&plain);
    let one = SuperPoly::one(&plain.ring);
    let zero = SuperPoly::zero(&plain.ring);
    let push_w = trans.push_to_a(&plain.v_field(one.clone(), zero.clone()))?;
    let push_chi = trans.push_to_a(&plain.v_field(zero.clone(), one))?;

    let mut f = vec![SuperPoly::zero(r); s];
    let mut g = d.map.clone();
    let mut on_u = ChartMap::identity(r);
    let mut on_v = ChartMap::identity(r);
    for degree in 1..=k as u32 {
        let z_f = standard_gluing(d.n, ch, &f)?;
        let dw = (g.image(ch.w) - z_f.image(ch.w)).split_odd_prefix(k);
        let dchi = (g.image(ch.chi) - z_f.image(ch.chi)).split_odd_prefix(k);
        let mut masks: Vec<u64> = dw.keys().chain(dchi.keys()).copied().collect();
        masks.sort();
        masks.dedup();
        let mut u = [SuperPoly::zero(r), SuperPoly::zero(r)];
        let mut v = [SuperPoly::zero(r), SuperPoly::zero(r)];
        for e in masks {
            if e.count_ones() < degree {
                return Err(FamilyError::NoConvergence);
            }
            if e.count_ones() > degree {
                continue;
            }
            let pw = dw.get(&e).map(|p| p.transport(&plain.ring)).transpose()?.unwrap_or_else(|| zero.clone());
            let pc = dchi.get(&e).map(|p| p.transport(&plain.ring)).transpose()?.unwrap_or_else(|| zero.clone());
            let theta = push_w.scale_left(&pw).add(&push_chi.scale_left(&pc))?;
            let red = reduce_cocycle(space, &theta)?;
            for (i, c) in red.coords.iter().enumerate().take(s) {
                if !c.is_zero() {
                    f[i] = &f[i] + &SuperPoly::constant(r, c.clone()).with_odd_prefix(e);
                }
            }
            for j in 0..2 {
                u[j] = &u[j] + &red.u_part[j].transport(r)?.with_odd_prefix(e);
                v[j] = &v[j] + &red.v_part[j].transport(r)?.with_odd_prefix(e);
            }
        }
        let a = ChartMap::by_name(r, r, &[("z", &SuperPoly::gen(r, ch.z) - &u[0]), ("zeta", &ch.zeta() - &u[1])])?;
        let b = ChartMap::by_name(r, r, &[("w", &SuperPoly::gen(r, ch.w) + &v[0]), ("chi", &ch.chi() + &v[1])])?;
        g = a.after(&g.after(&b)?)?;
        on_u = a.after(&on_u)?;
        on_v = on_v.after(&b)?;
    }
    let c = Classification { params: f, on_u, on_v };
    if !c.verify(d)? {
        return Err(FamilyError::NoConvergence);
    }
    Ok(c)
}

/// The relation `u^{n/2-1} χ - v^{n/2-1} ζ - Σ η_i u^i v^{n/2-1-i}` after substituting
/// the gluing image of `χ` (written in `z = v/u`).
pub fn hypersurface_residual(z: &FamilyZ, chi_image: &SuperPoly) -> Result<SuperPoly> {
    let n = z.n();
    let mut odd = z.base.param_names();
    odd.push("zeta".into());
    odd.push("chi".into());
    let h = Ring::from_names(vec![("u".into(), true), ("v".into(), true)], odd)?;
    let u = SuperPoly::var(&h, "u")?;
    let v = SuperPoly::var(&h, "v")?;
    let to_h = ChartMap::by_name(
        &z.charts.ring,
        &h,
        &[
            ("z", &v * &u.pow(-1)?),
            ("w", &u * &v.pow(-1)?),
            ("zeta", SuperPoly::var(&h, "zeta")?),
            ("chi", SuperPoly::var(&h, "chi")?),
        ]
        .iter()
        .map(|(a, b)| (*a, b.clone()))
        .chain(z.base.param_names().iter().map(|nm| (nm.as_str(), SuperPoly::var(&h, nm).unwrap())))
        .collect::<Vec<_>>(),
    )?;
    let k = n / 2 - 1;
    let chi_h = chi_image.substitute(&to_h)?;
    let mut rel = &(&u.pow(k)? * &chi_h) - &(&v.pow(k)? * &SuperPoly::var(&h, "zeta")?);
    for (i, nm) in z.base.param_names().iter().enumerate() {
        let i = i as i64 + 1;
        rel = &rel - &(&SuperPoly::var(&h, nm)? * &(&u.pow(i)? * &v.pow(k - i)?));
    }
    Ok(rel)
}

pub fn hypersurface_check(z: &FamilyZ) -> Result<(bool, SuperPoly)> {
    let r = hypersurface_residual(z, z.chi_image())?;
    Ok((r.is_zero(), r))
}

/// The gluing image of `χ` with one coefficient doubled: `η₁`'s when present, else `ζ`'s.
pub fn perturbed_chi(z: &FamilyZ) -> SuperPoly {
    let chi = z.chi_image();
    let target = if z.base.n_params() > 0 { Var::Odd(0) } else { z.charts.zeta };
    let bump = chi.filter(|m| match target {
        Var::Odd(j) => m.odd & (1 << j) != 0,
        Var::Even(_) => false,
    });
    chi + &bump
}

/// `O_Z(d)`: transition `f_U = z^d f_V` over the gluing of `Z`.
#[derive(Clone, Debug)]
pub struct LineBundleOnZ {
    pub family: FamilyZ,
    pub d: i64,
}

pub fn line_bundle_on_z(z: &FamilyZ, d: i64) -> LineBundleOnZ {
    LineBundleOnZ { family: z.clone(), d }
}

impl LineBundleOnZ {
    /// Restriction of a chart-V function to the overlap, in U coordinates.
    pub fn restrict_v(&self, g: &SuperPoly) -> Result<SuperPoly> {
        let c = &self.family.charts;
        Ok(&c.zpow(self.d as i32) * &g.substitute(&self.family.transition.b_in_a)?)
    }
}

/// Global sections of `O_Z(d)` as a `B`-module.
#[derive(Clone, Debug)]
pub struct FreeModule {
    /// Rank over `B`, read off at the closed point.
    pub rank: SuperDim,
    /// Dimension of the sections as a vector space over `k`.
    pub k_dim: SuperDim,
    /// Lifts of a basis of the fibre at `eta = 0`.
    pub basis: Vec<Section>,
    /// The same basis at `eta = 0`, chart-U expressions.
    pub reduction: Vec<SuperPoly>,
    /// `k_dim = 2^{dim S} · rank`, split by parity.
    pub is_free: bool,
}

pub fn h0_on_z(bundle: &LineBundleOnZ, window: Option<i64>) -> Result<FreeModule> {
    let z = &bundle.family;
    let c = &z.charts;
    let r = &c.ring;
    let s = z.base.n_params();
    let n2 = z.n() / 2;
    let d = bundle.d;
    let eta_weight = |m: &Monomial| -> i64 { (0..s).filter(|j| m.odd & (1 << j) != 0).map(|j| j as i64 + 1).sum() };
    let zeta_bit = match c.zeta {
        Var::Odd(j) => 1u64 << j,
        _ => unreachable!(),
    };
    let chi_bit = match c.chi {
        Var::Odd(j) => 1u64 << j,
        _ => unreachable!(),
    };
    let weight = |m: &Monomial| m.exps[0] as i64 + eta_weight(m);
    let n_w = window.unwrap_or_else(|| z.space().default_window(d)) + (s * (s + 1) / 2) as i64;

    let mut rows: HashMap<Monomial, usize> = HashMap::new();
    let to_vec = |p: &SuperPoly, rows: &mut HashMap<Monomial, usize>| -> SparseVec {
        let mut v = SparseVec::new();
        for (m, coef) in p.terms() {
            let len = rows.len();
            v.insert(*rows.entry(m.clone()).or_insert(len), coef.clone());
        }
        v
    };
    let mut cols: Vec<(bool, SuperPoly, SparseVec)> = Vec::new();
    for mask in 0..(1u64 << s) {
        for e in [0u64, 1] {
            let mut m = Monomial::one(r);
            m.odd = mask | if e == 1 { zeta_bit } else { 0 };
            let base_w = eta_weight(&m);
            for k in 0..=(n_w - base_w).max(-1) {
                let mut mk = m.clone();
                mk.exps[0] = k as i32;
                let own = SuperPoly::from_terms(r, [(mk, Q::one())]);
                let vec = to_vec(&own, &mut rows);
                cols.push((true, own, vec));
            }
            let mut mv = Monomial::one(r);
            mv.odd = mask | if e == 1 { chi_bit } else { 0 };
            let reach = n_w + d.abs() + n2 + (s * (s + 1) / 2) as i64 + 2;
            for j in 0..=reach {
                let mut mj = mv.clone();
                mj.exps[1] = j as i32;
                let own = SuperPoly::from_terms(r, [(mj, Q::one())]);
                let img = bundle.restrict_v(&own)?;
                let ws: Vec<i64> = img.terms().map(|(m, _)| weight(m)).collect();
                debug_assert!(ws.windows(2).all(|p| p[0] == p[1]));
                if ws.first().is_some_and(|w| w.abs() <= n_w) {
                    let vec = to_vec(&img, &mut rows);
                    cols.push((false, own, vec));
                }
            }
        }
    }
    let mut ech = Echelon::new();
    for (_, _, v) in &cols {
        ech.insert(v);
    }
    let mut sections = Vec::new();
    for rel in ech.kernel() {
        let mut on_u = SuperPoly::zero(r);
        let mut on_v = SuperPoly::zero(r);
        for (idx, coef) in rel {
            let (is_u, own, _) = &cols[*idx];
            if *is_u {
                on_u = &on_u + &own.scale(coef);
            } else {
                on_v = &on_v - &own.scale(coef);
            }
        }
        let parity = on_u.parity().or_else(|| on_v.parity()).unwrap_or(Parity::Even);
        sections.push(Section { parity, on_u: vec![on_u], on_v: vec![on_v] });
    }
    let odd = sections.iter().filter(|x| x.parity == Parity::Odd).count() as i64;
    let k_dim = SuperDim::new(sections.len() as i64 - odd, odd);

    let plain = Charts::plain();
    let mut red_rows: HashMap<Monomial, usize> = HashMap::new();
    let mut red_ech = Echelon::new();
    let mut basis = Vec::new();
    let mut reduction = Vec::new();
    let mut rank = SuperDim::new(0, 0);
    for sec in &sections {
        let body = sec.on_u[0].split_odd_prefix(s).remove(&0).unwrap_or_else(|| SuperPoly::zero(r));
        let body = body.transport(&plain.ring)?;
        let mut v = SparseVec::new();
        for (m, coef) in body.terms() {
            let len = red_rows.len();
            let idx = *red_rows.entry(m.clone()).or_insert(len);
            v.insert(idx, coef.clone());
        }
        if !v.is_empty() && red_ech.insert(&v) {
            match sec.parity {
                Parity::Even => rank.even += 1,
                Parity::Odd => rank.odd += 1,
            }
            basis.push(sec.clone());
            reduction.push(body);
        }
    }
    let total = rank.even + rank.odd;
    let is_free = if s == 0 {
        k_dim == rank
    } else {
        let half = (1i64 << (s - 1)) * total;
        k_dim == SuperDim::new(half, half)
    };
    Ok(FreeModule { rank, k_dim, basis, reduction, is_free })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(k: usize) -> Charts {
        Charts::new(&(1..=k).map(|i| format!("eps{i}")).collect::<Vec<_>>())
    }

    #[test]
    fn gluing_shapes() {
        let z = build_z(4).unwrap();
        assert_eq!(z.base.n_params(), 0);
        assert_eq!(z.chi_image().to_string(), "z*zeta");
        let z = build_z(8).unwrap();
        assert_eq!(z.chi_image().to_string(), "z*eta2 + z^2*eta1 + z^3*zeta");
        assert!(z.directions_agree().unwrap());
        assert!(build_z(5).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = eps(1);
        let e = SuperPoly::gen(&c.ring, Var::Odd(0));
        let trivial = DeformationGluing::with_odd_term(6, c.clone(), SuperPoly::zero(&c.ring)).unwrap();
        assert!(classify_deformation(&trivial).unwrap().params[0].is_zero());
        let d = DeformationGluing::with_odd_term(6, c.clone(), &e * &c.zpow(1)).unwrap();
        assert_eq!(classify_deformation(&d).unwrap().params, vec![e.clone()]);
        let d = DeformationGluing::with_odd_term(6, c.clone(), &e * &c.zpow(3)).unwrap();
        let cl = classify_deformation(&d).unwrap();
        assert!(cl.params[0].is_zero());
        assert!(cl.verify(&d).unwrap());
        let bad = DeformationGluing::new(6, c.clone(), c.zpow(-2), c.chi());
        assert!(matches!(bad, Err(FamilyError::NotADeformation(_))));
    }

    #[test]
    fn classify_after_conjugation() {
        let c = eps(3);
        let e: Vec<SuperPoly> = (0..3).map(|i| SuperPoly::gen(&c.ring, Var::Odd(i))).collect();
        let e123 = &(&e[0] * &e[1]) * &e[2];
        let f = vec![&e[0] + &e123, &e[1] - &e[2].scale(&Q::from_integer(3.into()))];
        let z = build_z(8).unwrap();
        let d = z.pullback(&c, &f).unwrap();
        assert_eq!(classify_deformation(&d).unwrap().params, f);
        let zz = SuperPoly::gen(&c.ring, c.z);
        let ww = SuperPoly::gen(&c.ring, c.w);
        let a0 = ChartMap::by_name(
            &c.ring,
            &c.ring,
            &[("z", &zz + &(&(&e[0] * &e[1]) * &c.zpow(2))), ("zeta", &c.zeta() + &(&e[2] * &zz))],
        )
        .unwrap();
        let b0 = ChartMap::by_name(
            &c.ring,
            &c.ring,
            &[("w", &ww + &(&(&e[0] * &e[2]) * &ww)), ("chi", &c.chi() + &(&e[1] * &c.wpow(3)))],
        )
        .unwrap();
        let g = d.conjugate(&a0, &b0).unwrap();
        let d2 = DeformationGluing::new(8, c.clone(), g.image(c.w).clone(), g.image(c.chi).clone()).unwrap();
        let cl = classify_deformation(&d2).unwrap();
        assert!(cl.verify(&d2).unwrap());
        for (got, want) in cl.params.iter().zip(&f) {
            let lin = |p: &SuperPoly| p.filter(|m| m.odd_degree() == 1);
            assert_eq!(lin(got), lin(want));
        }
    }

    #[test]
    fn hypersurface_and_control() {
        for n in [4, 6, 8] {
            let z = build_z(n).unwrap();
            assert!(hypersurface_check(&z).unwrap().0);
            assert!(!hypersurface_residual(&z, &perturbed_chi(&z)).unwrap().is_zero());
        }
    }

    #[test]
    fn sections_of_o_z() {
        let z = build_z(6).unwrap();
        let m = h0_on_z(&line_bundle_on_z(&z, 1), None).unwrap();
        assert_eq!(m.rank, SuperDim::new(2, 4));
        assert!(m.is_free);
        let m = h0_on_z(&line_bundle_on_z(&z, 0), None).unwrap();
        assert_eq!(m.rank, SuperDim::new(1, 3));
        assert!(m.is_free);
    }

    #[test]
    fn reduction_of_o1_basis() {
        let z = build_z(6).unwrap();
        let m = h0_on_z(&line_bundle_on_z(&z, 1), None).unwrap();
        let plain = Charts::plain();
        let mut expected = vec![plain.zpow(0), plain.zpow(1)];
        for i in 0..=3 {
            expected.push(&plain.zpow(i) * &plain.zeta());
        }
        let mut rows: HashMap<Monomial, usize> = HashMap::new();
        let mut vecs = |p: &SuperPoly| -> SparseVec {
            p.terms()
                .map(|(mo, c)| {
                    let len = rows.len();
                    (*rows.entry(mo.clone()).or_insert(len), c.clone())
                })
                .collect()
        };
        let mut e = Echelon::new();
        for p in &expected {
            e.insert(&vecs(p));
        }
        for p in &m.reduction {
            assert!(e.contains(&vecs(p)));
        }
        assert_eq!(e.rank(), m.reduction.len());
    }
}
