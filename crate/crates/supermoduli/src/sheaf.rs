//! The two-chart model of WP¹|¹(1,1|m), line bundles O(d), the tangent sheaf, and
//! their Čech cohomology.
//!
//! Charts: `U = k[z|ζ]`, `V = k[w|χ]`, glued by `z ↦ 1/w, ζ ↦ χ w^{-m}`. Every
//! map in the Čech complex preserves the weight `(z-exponent) - (1 if ∂z)`, so the
//! complex splits into finite pieces and a window `[-N, N]` of weights computes the
//! cohomology of those weights exactly.

use std::collections::HashMap;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{Echelon, SparseVec};
use crate::superalgebra::{
    AlgebraError, ChartMap, Monomial, Parity, Ring, SuperPoly, SuperVectorField, Transition, Var, Q,
};
use crate::SuperDim;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("number of Ramond punctures must be even and at least 4, got {0}")]
    InvalidRamond(i64),
    #[error("cocycle does not reduce within window {0}")]
    WindowTooSmall(i64),
    #[error("section has a term outside window {0}")]
    OutsideWindow(i64),
    #[error("dimensions did not stabilise up to window {0}")]
    NotStabilized(i64),
}

pub type Result<T> = std::result::Result<T, SheafError>;

/// WP¹|¹(1,1|m): `θ` has weight `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WPSpace {
    pub m: i64,
}

impl WPSpace {
    pub fn new(m: i64) -> Self {
        WPSpace { m }
    }

    /// The space carrying `n` Ramond punctures, `m = 1 - n/2`.
    pub fn ramond(n: i64) -> Result<Self> {
        check_ramond(n)?;
        Ok(WPSpace { m: 1 - n / 2 })
    }

    /// `n` with `m = 1 - n/2`, floored at 4 for the window formula.
    pub fn n_eff(&self) -> i64 {
        (2 - 2 * self.m).max(4)
    }

    /// `N₀ = |d| + |m| + n + 2`.
    pub fn default_window(&self, d: i64) -> i64 {
        d.abs() + self.m.abs() + self.n_eff() + 2
    }

    /// Gluing between the charts of `charts` (parameters are left untouched).
    pub fn transition(&self, charts: &Charts) -> Transition {
        let r = &charts.ring;
        let a_in_b =
            ChartMap::by_name(r, r, &[("z", charts.wpow(-1)), ("zeta", &charts.chi() * &charts.wpow(-self.m as i32))])
                .expect("gluing is parity preserving");
        let b_in_a =
            ChartMap::by_name(r, r, &[("w", charts.zpow(-1)), ("chi", &charts.zeta() * &charts.zpow(-self.m as i32))])
                .expect("gluing is parity preserving");
        Transition { a_coords: charts.u_coords(), b_coords: charts.v_coords(), a_in_b, b_in_a }
    }
}

pub fn check_ramond(n: i64) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        Err(SheafError::InvalidRamond(n))
    } else {
        Ok(())
    }
}

/// A ring holding both chart coordinate systems and optional odd parameters,
/// which precede `ζ, χ` in the odd order.
#[derive(Clone, Debug)]
pub struct Charts {
    pub ring: Ring,
    pub z: Var,
    pub w: Var,
    pub zeta: Var,
    pub chi: Var,
    pub n_params: usize,
}

impl Charts {
    pub fn new(params: &[String]) -> Charts {
        let mut odd: Vec<String> = params.to_vec();
        odd.push("zeta".into());
        odd.push("chi".into());
        let ring = Ring::from_names(vec![("z".into(), true), ("w".into(), true)], odd).expect("distinct chart names");
        Charts {
            z: ring.expect_var("z").unwrap(),
            w: ring.expect_var("w").unwrap(),
            zeta: ring.expect_var("zeta").unwrap(),
            chi: ring.expect_var("chi").unwrap(),
            n_params: params.len(),
            ring,
        }
    }

    pub fn plain() -> Charts {
        Charts::new(&[])
    }

    pub fn u_coords(&self) -> Vec<Var> {
        vec![self.z, self.zeta]
    }

    pub fn v_coords(&self) -> Vec<Var> {
        vec![self.w, self.chi]
    }

    pub fn zpow(&self, k: i32) -> SuperPoly {
        SuperPoly::monomial(&self.ring, Q::from_integer(1.into()), &[(0, k)], &[]).unwrap()
    }

    pub fn wpow(&self, k: i32) -> SuperPoly {
        SuperPoly::monomial(&self.ring, Q::from_integer(1.into()), &[(1, k)], &[]).unwrap()
    }

    pub fn zeta(&self) -> SuperPoly {
        SuperPoly::gen(&self.ring, self.zeta)
    }

    pub fn chi(&self) -> SuperPoly {
        SuperPoly::gen(&self.ring, self.chi)
    }

    pub fn parse(&self, s: &str) -> std::result::Result<SuperPoly, AlgebraError> {
        SuperPoly::parse(&self.ring, s)
    }

    /// A field on chart U from its `∂z` and `∂ζ` coefficients.
    pub fn u_field(&self, dz: SuperPoly, dzeta: SuperPoly) -> SuperVectorField {
        SuperVectorField::new(&self.ring, &self.u_coords(), vec![dz, dzeta]).expect("chart ring")
    }

    pub fn v_field(&self, dw: SuperPoly, dchi: SuperPoly) -> SuperVectorField {
        SuperVectorField::new(&self.ring, &self.v_coords(), vec![dw, dchi]).expect("chart ring")
    }
}

/// Which sheaf a Čech complex computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SheafKind {
    /// O(d), transition `f_U = z^d f_V`.
    Line(i64),
    /// The tangent sheaf; components are the `∂z, ∂ζ` (resp. `∂w, ∂χ`) coefficients.
    Tangent,
}

impl SheafKind {
    fn components(self) -> usize {
        match self {
            SheafKind::Line(_) => 1,
            SheafKind::Tangent => 2,
        }
    }

    fn shift(self, comp: usize) -> i64 {
        match (self, comp) {
            (SheafKind::Tangent, 0) => -1,
            _ => 0,
        }
    }

    fn comp_parity(self, comp: usize) -> Parity {
        match (self, comp) {
            (SheafKind::Tangent, 1) => Parity::Odd,
            _ => Parity::Even,
        }
    }

    fn twist(self) -> i64 {
        match self {
            SheafKind::Line(d) => d,
            SheafKind::Tangent => 2,
        }
    }
}

/// A global section: its expressions on both charts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub parity: Parity,
    pub on_u: Vec<SuperPoly>,
    pub on_v: Vec<SuperPoly>,
}

impl Section {
    pub fn u_field(&self, charts: &Charts) -> SuperVectorField {
        charts.u_field(self.on_u[0].clone(), self.on_u[1].clone())
    }
}

/// `target = Σ coords_i · basis_i + u_part - (v_part restricted to the overlap)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReduction {
    pub coords: Vec<Q>,
    pub u_part: Vec<SuperPoly>,
    pub v_part: Vec<SuperPoly>,
}

#[derive(Clone, Debug)]
struct Col {
    own: Vec<SuperPoly>,
    vec: SparseVec,
}

/// The truncated Čech complex of one sheaf.
#[derive(Clone, Debug)]
pub struct CechComplex {
    pub space: WPSpace,
    pub kind: SheafKind,
    pub window: i64,
    charts: Charts,
    trans: Transition,
    rows: HashMap<(usize, Monomial), usize>,
    row_keys: Vec<(usize, Monomial, Parity)>,
    u_cols: Vec<Col>,
    v_cols: Vec<Col>,
    h0: Vec<Section>,
    h1_rows: Vec<usize>,
    h1_dim: SuperDim,
    full: Echelon,
}

fn mono(charts: &Charts, k: i64, e: u32) -> Monomial {
    let mut m = Monomial::one(&charts.ring);
    m.exps[0] = k as i32;
    if e == 1 {
        if let Var::Odd(j) = charts.zeta {
            m.odd = 1 << j;
        }
    }
    m
}

impl CechComplex {
    pub fn new(space: WPSpace, kind: SheafKind, window: i64) -> Result<Self> {
        let charts = Charts::plain();
        let trans = space.transition(&charts);
        let ncomp = kind.components();
        let mut rows = HashMap::new();
        let mut row_keys = Vec::new();
        for comp in 0..ncomp {
            for e in 0..2u32 {
                let s = kind.shift(comp);
                for k in (-window - s)..=(window - s) {
                    let m = mono(&charts, k, e);
                    rows.insert((comp, m.clone()), row_keys.len());
                    row_keys.push((comp, m, kind.comp_parity(comp) + Parity::from_bit(e)));
                }
            }
        }
        let mut cx = CechComplex {
            space,
            kind,
            window,
            charts,
            trans,
            rows,
            row_keys,
            u_cols: Vec::new(),
            v_cols: Vec::new(),
            h0: Vec::new(),
            h1_rows: Vec::new(),
            h1_dim: SuperDim::new(0, 0),
            full: Echelon::new(),
        };
        cx.build_columns()?;
        cx.solve()?;
        Ok(cx)
    }

    /// The window-stabilised complex: dimensions at `N` and `N + 1` agree.
    pub fn stabilized(space: WPSpace, kind: SheafKind, window: Option<i64>) -> Result<Self> {
        let start = window.unwrap_or_else(|| space.default_window(kind.twist()));
        let mut n = start;
        while n <= 16 * start.max(1) {
            let a = CechComplex::new(space, kind, n)?;
            let b = CechComplex::new(space, kind, n + 1)?;
            if a.h0_dim() == b.h0_dim() && a.h1_dim() == b.h1_dim() {
                return Ok(a);
            }
            n *= 2;
        }
        Err(SheafError::NotStabilized(n))
    }

    pub fn charts(&self) -> &Charts {
        &self.charts
    }

    pub fn transition(&self) -> &Transition {
        &self.trans
    }

    fn weight_of(&self, comps: &[SuperPoly]) -> Option<i64> {
        comps.iter().enumerate().find_map(|(c, p)| p.terms().next().map(|(m, _)| m.exps[0] as i64 + self.kind.shift(c)))
    }

    /// Restriction of a chart-V section to the overlap, in U coordinates.
    pub fn restrict_v(&self, own: &[SuperPoly]) -> Result<Vec<SuperPoly>> {
        match self.kind {
            SheafKind::Line(d) => {
                let g = own[0].substitute(&self.trans.b_in_a)?;
                Ok(vec![&self.charts.zpow(d as i32) * &g])
            }
            SheafKind::Tangent => {
                let x = self.charts.v_field(own[0].clone(), own[1].clone());
                Ok(self.trans.push_to_a(&x)?.coeffs().to_vec())
            }
        }
    }

    /// Coordinates of an overlap section in the window.
    pub fn to_vec(&self, comps: &[SuperPoly]) -> Result<SparseVec> {
        let mut v = SparseVec::new();
        for (c, p) in comps.iter().enumerate() {
            for (m, coef) in p.terms() {
                let row = self.rows.get(&(c, m.clone())).ok_or(SheafError::OutsideWindow(self.window))?;
                v.insert(*row, coef.clone());
            }
        }
        Ok(v)
    }

    fn decode(&self, v: &SparseVec) -> Vec<SuperPoly> {
        let mut out = vec![SuperPoly::zero(&self.charts.ring); self.kind.components()];
        for (row, c) in v {
            let (comp, m, _) = &self.row_keys[*row];
            out[*comp].add_term(m.clone(), c.clone());
        }
        out
    }

    fn build_columns(&mut self) -> Result<()> {
        let ncomp = self.kind.components();
        let zero = SuperPoly::zero(&self.charts.ring);
        for comp in 0..ncomp {
            for e in 0..2u32 {
                let s = self.kind.shift(comp);
                for k in 0..=(self.window - s) {
                    let mut own = vec![zero.clone(); ncomp];
                    own[comp] = SuperPoly::from_terms(
                        &self.charts.ring,
                        [(mono(&self.charts, k, e), Q::from_integer(1.into()))],
                    );
                    let vec = self.to_vec(&own)?;
                    self.u_cols.push(Col { own, vec });
                }
            }
        }
        let reach = self.window + self.kind.twist().abs() + self.space.m.abs() + 2;
        for comp in 0..ncomp {
            for e in 0..2u32 {
                for j in 0..=reach {
                    let mut own = vec![zero.clone(); ncomp];
                    let mut m = Monomial::one(&self.charts.ring);
                    m.exps[1] = j as i32;
                    if e == 1 {
                        if let Var::Odd(i) = self.charts.chi {
                            m.odd = 1 << i;
                        }
                    }
                    own[comp] = SuperPoly::from_terms(&self.charts.ring, [(m, Q::from_integer(1.into()))]);
                    let img = self.restrict_v(&own)?;
                    match self.weight_of(&img) {
                        Some(wt) if wt.abs() <= self.window => {
                            let vec = self.to_vec(&img)?;
                            self.v_cols.push(Col { own, vec });
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(())
    }

    fn col_parity(&self, c: &Col) -> Parity {
        self.row_keys[*c.vec.keys().next().expect("nonzero column")].2
    }

    fn solve(&mut self) -> Result<()> {
        let zero = SuperPoly::zero(&self.charts.ring);
        let ncomp = self.kind.components();
        let mut h0 = Vec::new();
        let mut h1 = [0i64; 2];
        let mut h1_rows = Vec::new();
        for parity in [Parity::Even, Parity::Odd] {
            let u: Vec<&Col> = self.u_cols.iter().filter(|c| self.col_parity(c) == parity).collect();
            let v: Vec<&Col> = self.v_cols.iter().filter(|c| self.col_parity(c) == parity).collect();
            let mut ech = Echelon::new();
            for c in u.iter().chain(v.iter()) {
                ech.insert(&c.vec);
            }
            for rel in ech.kernel() {
                let mut on_u = vec![zero.clone(); ncomp];
                let mut on_v = vec![zero.clone(); ncomp];
                for (idx, coef) in rel {
                    if *idx < u.len() {
                        for (acc, g) in on_u.iter_mut().zip(&u[*idx].own) {
                            *acc = &*acc + &g.scale(coef);
                        }
                    } else {
                        for (acc, g) in on_v.iter_mut().zip(&v[*idx - u.len()].own) {
                            *acc = &*acc - &g.scale(coef);
                        }
                    }
                }
                h0.push(Section { parity, on_u, on_v });
            }
            let nrows = self.row_keys.iter().filter(|r| r.2 == parity).count();
            let dim = nrows - ech.rank();
            h1[parity.bit() as usize] = dim as i64;
            let mut found = 0;
            for row in self.candidate_order(parity) {
                if found == dim {
                    break;
                }
                let mut unit = SparseVec::new();
                unit.insert(row, Q::from_integer(1.into()));
                if ech.insert(&unit) {
                    h1_rows.push(row);
                    found += 1;
                }
            }
        }
        self.h0 = h0;
        self.h1_rows = h1_rows;
        self.h1_dim = SuperDim::new(h1[0], h1[1]);
        let mut full = Echelon::new();
        for &row in &self.h1_rows {
            let mut unit = SparseVec::new();
            unit.insert(row, Q::from_integer(1.into()));
            full.insert(&unit);
        }
        for c in self.u_cols.iter().chain(self.v_cols.iter()) {
            full.insert(&c.vec);
        }
        self.full = full;
        Ok(())
    }

    /// Preferred H¹ representatives: negative-degree `∂ζ` terms first (pure
    /// negative-degree monomials for line bundles), closest to degree 0 first.
    fn candidate_order(&self, parity: Parity) -> Vec<usize> {
        let mut rows: Vec<(i64, usize)> = self
            .row_keys
            .iter()
            .enumerate()
            .filter(|(_, (_, _, p))| *p == parity)
            .map(|(i, (comp, m, _))| {
                let k = m.exps[0] as i64;
                let has_zeta = m.odd != 0;
                let pref_comp = self.kind.components() - 1 - comp;
                let class = if k < 0 { 0 } else { 1 };
                (((class * 2 + pref_comp as i64) * 2 + has_zeta as i64) * 10_000 + k.abs(), i)
            })
            .collect();
        rows.sort();
        rows.into_iter().map(|(_, i)| i).collect()
    }

    pub fn h0(&self) -> &[Section] {
        &self.h0
    }

    pub fn h0_dim(&self) -> SuperDim {
        let odd = self.h0.iter().filter(|s| s.parity == Parity::Odd).count() as i64;
        SuperDim::new(self.h0.len() as i64 - odd, odd)
    }

    pub fn h1_dim(&self) -> SuperDim {
        self.h1_dim
    }

    /// Chosen H¹ representatives, as overlap sections.
    pub fn h1_basis(&self) -> Vec<Vec<SuperPoly>> {
        self.h1_rows
            .iter()
            .map(|&r| {
                let mut v = SparseVec::new();
                v.insert(r, Q::from_integer(1.into()));
                self.decode(&v)
            })
            .collect()
    }

    /// Coordinates of an overlap section in the H¹ basis, with the coboundary part.
    pub fn reduce(&self, target: &[SuperPoly]) -> Result<CocycleReduction> {
        let v = self.to_vec(target)?;
        let combo = self.full.solve(&v).ok_or(SheafError::WindowTooSmall(self.window))?;
        let nb = self.h1_rows.len();
        let nu = self.u_cols.len();
        let ncomp = self.kind.components();
        let zero = SuperPoly::zero(&self.charts.ring);
        let mut coords = vec![Q::zero(); nb];
        let mut u_part = vec![zero.clone(); ncomp];
        let mut v_part = vec![zero; ncomp];
        for (idx, c) in &combo {
            if *idx < nb {
                coords[*idx] = c.clone();
            } else if *idx < nb + nu {
                for (acc, g) in u_part.iter_mut().zip(&self.u_cols[*idx - nb].own) {
                    *acc = &*acc + &g.scale(c);
                }
            } else {
                for (acc, g) in v_part.iter_mut().zip(&self.v_cols[*idx - nb - nu].own) {
                    *acc = &*acc - &g.scale(c);
                }
            }
        }
        Ok(CocycleReduction { coords, u_part, v_part })
    }

    /// True iff the overlap section is a difference of chart-regular sections.
    pub fn is_coboundary(&self, target: &[SuperPoly]) -> Result<bool> {
        let r = self.reduce(target)?;
        Ok(r.coords.iter().all(Zero::is_zero))
    }

    /// Largest |weight| of the terms of an overlap section.
    pub fn max_weight(kind: SheafKind, comps: &[SuperPoly]) -> i64 {
        comps
            .iter()
            .enumerate()
            .flat_map(|(c, p)| p.terms().map(move |(m, _)| (m.exps[0] as i64 + kind.shift(c)).abs()))
            .max()
            .unwrap_or(0)
    }
}

/// Cohomology of the tangent sheaf.
#[derive(Clone, Debug)]
pub struct TangentCohomology {
    pub h0basis: Vec<Section>,
    pub h0dim: SuperDim,
    pub h1basis: Vec<SuperVectorField>,
    pub h1dim: SuperDim,
    pub window: i64,
}

pub fn tangent_cohomology(space: WPSpace, window: Option<i64>) -> Result<TangentCohomology> {
    let cx = CechComplex::stabilized(space, SheafKind::Tangent, window)?;
    let charts = cx.charts().clone();
    Ok(TangentCohomology {
        h0basis: cx.h0().to_vec(),
        h0dim: cx.h0_dim(),
        h1basis: cx.h1_basis().into_iter().map(|c| charts.u_field(c[0].clone(), c[1].clone())).collect(),
        h1dim: cx.h1_dim(),
        window: cx.window,
    })
}

pub fn h0_line_bundle(space: WPSpace, d: i64, window: Option<i64>) -> Result<(SuperDim, Vec<Section>)> {
    let cx = CechComplex::stabilized(space, SheafKind::Line(d), window)?;
    Ok((cx.h0_dim(), cx.h0().to_vec()))
}

pub fn h1_line_bundle(space: WPSpace, d: i64, window: Option<i64>) -> Result<(SuperDim, Vec<SuperPoly>)> {
    let cx = CechComplex::stabilized(space, SheafKind::Line(d), window)?;
    Ok((cx.h1_dim(), cx.h1_basis().into_iter().map(|mut c| c.remove(0)).collect()))
}

/// Reduces an overlap vector field (chart-U coordinates, plain chart ring) to the H¹
/// basis, doubling the window when the default one is too small.
pub fn reduce_cocycle(space: WPSpace, v: &SuperVectorField) -> Result<CocycleReduction> {
    let need = CechComplex::max_weight(SheafKind::Tangent, v.coeffs());
    let mut n = space.default_window(2).max(need);
    for _ in 0..4 {
        let cx = CechComplex::new(space, SheafKind::Tangent, n)?;
        match cx.reduce(v.coeffs()) {
            Ok(r) => return Ok(r),
            Err(SheafError::WindowTooSmall(_)) | Err(SheafError::OutsideWindow(_)) => n *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(SheafError::WindowTooSmall(n))
}

/// Dimensions `(h⁰, h¹)` of `O_{P¹}(k)`.
pub fn p1_line_bundle(k: i64) -> (i64, i64) {
    ((k + 1).max(0), (-k - 1).max(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(m: i64) -> SuperDim {
        tangent_cohomology(WPSpace::new(m), None).unwrap().h1dim
    }

    #[test]
    fn tangent_h1_examples() {
        assert_eq!(dims(-2), SuperDim::new(0, 1));
        assert_eq!(dims(0), SuperDim::new(0, 0));
        assert_eq!(dims(5), SuperDim::new(0, 2));
    }

    #[test]
    fn line_bundle_examples() {
        let x = WPSpace::ramond(4).unwrap();
        assert_eq!(h0_line_bundle(x, 1, None).unwrap().0, SuperDim::new(2, 3));
        for n in [4, 6, 8] {
            let x = WPSpace::ramond(n).unwrap();
            assert_eq!(h0_line_bundle(x, 0, None).unwrap().0, SuperDim::new(1, n / 2));
            assert_eq!(h1_line_bundle(x, 1, None).unwrap().0, SuperDim::new(0, 0));
            assert_eq!(h1_line_bundle(x, 2, None).unwrap().0, SuperDim::new(0, 0));
            let (h0, _) = h0_line_bundle(x, -1, None).unwrap();
            assert_eq!(h0.even, 0);
            assert_eq!(h0.odd, p1_line_bundle(-1 - x.m).0);
        }
    }

    #[test]
    fn reduce_examples() {
        let n = 8;
        let x = WPSpace::ramond(n).unwrap();
        let c = Charts::plain();
        let zero = SuperPoly::zero(&c.ring);
        let r = reduce_cocycle(x, &c.u_field(zero.clone(), c.zpow(-1))).unwrap();
        assert_eq!(r.coords, vec![Q::from_integer(1.into()), Q::zero()]);
        let r = reduce_cocycle(x, &c.u_field(zero.clone(), c.zpow(0))).unwrap();
        assert!(r.coords.iter().all(Zero::is_zero));
        let top = &c.zpow((n / 2 + 1) as i32) * &c.zeta();
        let r = reduce_cocycle(x, &c.u_field(top, zero)).unwrap();
        assert!(r.coords.iter().all(Zero::is_zero));
    }
}
