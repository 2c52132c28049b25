//! Supercommutative Laurent polynomials over the rationals.
//!
//! A [`SuperPoly`] lives in a [`Ring`]: a list of even variables (some of which may
//! carry negative exponents) and an ordered list of odd generators. Odd factors of a
//! monomial are kept sorted by generator index and the sign of the sorting
//! permutation is folded into the coefficient.

mod chart;
mod degree;
mod fields;
mod parse;

pub use chart::ChartMap;
pub use degree::{Homogeneity, WeightedDegree};
pub use fields::{SuperOneForm, SuperVectorField, Transition};
pub use parse::{parse_fixture, Fixture};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("ring contexts differ")]
    RingMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("too many odd generators ({0}, at most 64)")]
    TooManyOdd(usize),
    #[error("variable `{0}` does not admit negative exponents")]
    NegativeExponent(String),
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("element has mixed parity")]
    MixedParity,
    #[error("map does not preserve parity at `{0}`")]
    ParityMismatch(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("non-invertible Jacobian")]
    SingularJacobian,
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: u32) -> Self {
        if b.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;

    fn add(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() + other.bit())
    }
}

/// A generator of a ring: index into the even or the odd variable list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Even(usize),
    Odd(usize),
}

impl Var {
    pub fn parity(self) -> Parity {
        match self {
            Var::Even(_) => Parity::Even,
            Var::Odd(_) => Parity::Odd,
        }
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct RingSpec {
    even: Vec<String>,
    laurent: Vec<bool>,
    odd: Vec<String>,
}

/// Shared ring context. Cheap to clone.
#[derive(Clone)]
pub struct Ring(Arc<RingSpec>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring[{} | {}]", self.0.even.join(","), self.0.odd.join(","))
    }
}

impl Ring {
    /// `even` pairs a name with whether negative exponents are allowed.
    pub fn new(even: &[(&str, bool)], odd: &[&str]) -> Result<Ring> {
        let owned_even: Vec<(String, bool)> = even.iter().map(|(n, l)| (n.to_string(), *l)).collect();
        let owned_odd: Vec<String> = odd.iter().map(|s| s.to_string()).collect();
        Ring::from_names(owned_even, owned_odd)
    }

    pub fn from_names(even: Vec<(String, bool)>, odd: Vec<String>) -> Result<Ring> {
        if odd.len() > 64 {
            return Err(AlgebraError::TooManyOdd(odd.len()));
        }
        let mut seen = std::collections::HashSet::new();
        for name in even.iter().map(|(n, _)| n).chain(odd.iter()) {
            if !seen.insert(name.clone()) {
                return Err(AlgebraError::DuplicateVariable(name.clone()));
            }
        }
        let (names, laurent) = even.into_iter().unzip();
        Ok(Ring(Arc::new(RingSpec { even: names, laurent, odd })))
    }

    pub fn n_even(&self) -> usize {
        self.0.even.len()
    }

    pub fn n_odd(&self) -> usize {
        self.0.odd.len()
    }

    pub fn even_name(&self, i: usize) -> &str {
        &self.0.even[i]
    }

    pub fn odd_name(&self, i: usize) -> &str {
        &self.0.odd[i]
    }

    pub fn name(&self, v: Var) -> &str {
        match v {
            Var::Even(i) => self.even_name(i),
            Var::Odd(i) => self.odd_name(i),
        }
    }

    pub fn is_laurent(&self, i: usize) -> bool {
        self.0.laurent[i]
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        if let Some(i) = self.0.even.iter().position(|n| n == name) {
            return Some(Var::Even(i));
        }
        self.0.odd.iter().position(|n| n == name).map(Var::Odd)
    }

    pub fn expect_var(&self, name: &str) -> Result<Var> {
        self.var(name).ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }

    pub fn vars(&self) -> Vec<Var> {
        (0..self.n_even()).map(Var::Even).chain((0..self.n_odd()).map(Var::Odd)).collect()
    }

    fn check(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }
}

/// Even exponents (indexed like the ring's even list) and a bitmask of odd generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exps: Vec<i32>,
    pub odd: u64,
}

impl Monomial {
    pub fn one(ring: &Ring) -> Monomial {
        Monomial { exps: vec![0; ring.n_even()], odd: 0 }
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd.count_ones())
    }

    pub fn odd_degree(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.exps.iter().all(|&e| e == 0)
    }

    /// Product of two monomials with its Koszul sign, or `None` if an odd generator repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut rest = other.odd;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            swaps += (self.odd >> j).count_ones();
        }
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Some((Monomial { exps, odd: self.odd | other.odd }, swaps % 2 == 1))
    }
}

/// Exact supercommutative Laurent polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperPoly {
    ring: Ring,
    terms: BTreeMap<Monomial, Q>,
}

impl fmt::Debug for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl SuperPoly {
    pub fn zero(ring: &Ring) -> SuperPoly {
        SuperPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Ring, c: Q) -> SuperPoly {
        let mut p = SuperPoly::zero(ring);
        p.add_term(Monomial::one(ring), c);
        p
    }

    pub fn one(ring: &Ring) -> SuperPoly {
        SuperPoly::constant(ring, Q::one())
    }

    pub fn int(ring: &Ring, n: i64) -> SuperPoly {
        SuperPoly::constant(ring, q(n))
    }

    pub fn gen(ring: &Ring, v: Var) -> SuperPoly {
        let mut m = Monomial::one(ring);
        match v {
            Var::Even(i) => m.exps[i] = 1,
            Var::Odd(i) => m.odd = 1 << i,
        }
        let mut p = SuperPoly::zero(ring);
        p.add_term(m, Q::one());
        p
    }

    pub fn var(ring: &Ring, name: &str) -> Result<SuperPoly> {
        Ok(SuperPoly::gen(ring, ring.expect_var(name)?))
    }

    /// `c * x^e * (odd generators multiplied in the given order)`.
    pub fn monomial(ring: &Ring, c: Q, exps: &[(usize, i32)], odd: &[usize]) -> Result<SuperPoly> {
        let mut m = Monomial::one(ring);
        for &(i, e) in exps {
            if e < 0 && !ring.is_laurent(i) {
                return Err(AlgebraError::NegativeExponent(ring.even_name(i).to_string()));
            }
            m.exps[i] += e;
        }
        let mut p = SuperPoly::zero(ring);
        p.add_term(m, c);
        for &j in odd {
            p = &p * &SuperPoly::gen(ring, Var::Odd(j));
        }
        Ok(p)
    }

    /// Wraps a raw term map; the caller guarantees monomials fit `ring`.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, Q)>) -> SuperPoly {
        let mut p = SuperPoly::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// The constant term, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m);
        match slot {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> SuperPoly {
        if c.is_zero() {
            return SuperPoly::zero(&self.ring);
        }
        SuperPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn checked_add(&self, other: &SuperPoly) -> Result<SuperPoly> {
        self.ring.check(&other.ring)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &SuperPoly) -> Result<SuperPoly> {
        self.ring.check(&other.ring)?;
        let mut out = SuperPoly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, neg)) = m1.mul(m2) {
                    let c = c1 * c2;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `Some(parity)` if all terms share one parity; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        match it.next() {
            None => Some(Parity::Even),
            Some(p) => it.all(|x| x == p).then_some(p),
        }
    }

    pub fn homogeneous_parity(&self) -> Result<Parity> {
        self.parity().ok_or(AlgebraError::MixedParity)
    }

    /// Terms free of odd generators.
    pub fn body(&self) -> SuperPoly {
        self.filter(|m| m.odd == 0)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> SuperPoly {
        SuperPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.terms.keys().all(|m| m.odd != 0)
    }

    /// Inverse of a unit: a single invertible body monomial plus a nilpotent part.
    pub fn inverse(&self) -> Result<SuperPoly> {
        let body = self.body();
        if body.terms.len() != 1 {
            return Err(AlgebraError::NotInvertible(self.to_string()));
        }
        let (bm, bc) = body.terms.iter().next().unwrap();
        let mut inv_m = bm.clone();
        for (i, e) in inv_m.exps.iter_mut().enumerate() {
            if *e > 0 && !self.ring.is_laurent(i) {
                return Err(AlgebraError::NotInvertible(self.to_string()));
            }
            *e = -*e;
        }
        let b_inv = SuperPoly::from_terms(&self.ring, [(inv_m, bc.recip())]);
        // self = b (1 + x) with x = b^{-1} (self - b) nilpotent
        let x = &b_inv * &(self - &body);
        let mut sum = SuperPoly::one(&self.ring);
        let mut power = SuperPoly::one(&self.ring);
        let mut sign = false;
        loop {
            power = &power * &x;
            if power.is_zero() {
                break;
            }
            sign = !sign;
            sum = if sign { &sum - &power } else { &sum + &power };
        }
        Ok(&b_inv * &sum)
    }

    pub fn pow(&self, k: i64) -> Result<SuperPoly> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut base = self.clone();
        let mut acc = SuperPoly::one(&self.ring);
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Left derivative: odd generators are stripped from the left of the sorted monomial.
    pub fn deriv(&self, v: Var) -> SuperPoly {
        self.deriv_sided(v, true)
    }

    /// Right derivative: odd generators are stripped from the right.
    pub fn deriv_right(&self, v: Var) -> SuperPoly {
        self.deriv_sided(v, false)
    }

    fn deriv_sided(&self, v: Var, left: bool) -> SuperPoly {
        let mut out = SuperPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            match v {
                Var::Even(i) => {
                    let e = m.exps[i];
                    if e != 0 {
                        let mut nm = m.clone();
                        nm.exps[i] -= 1;
                        out.add_term(nm, c * q(e as i64));
                    }
                }
                Var::Odd(j) => {
                    let bit = 1u64 << j;
                    if m.odd & bit != 0 {
                        let passed = if left {
                            (m.odd & (bit - 1)).count_ones()
                        } else {
                            (m.odd & !(bit | (bit - 1))).count_ones()
                        };
                        let mut nm = m.clone();
                        nm.odd &= !bit;
                        out.add_term(nm, if passed % 2 == 1 { -c.clone() } else { c.clone() });
                    }
                }
            }
        }
        out
    }

    /// Part of `self` not involving the listed variables, i.e. set them to zero.
    pub fn without(&self, vars: &[Var]) -> SuperPoly {
        self.filter(|m| {
            vars.iter().all(|v| match *v {
                Var::Even(i) => m.exps[i] == 0,
                Var::Odd(j) => m.odd & (1 << j) == 0,
            })
        })
    }

    /// Coefficient of an even monomial in the listed even variables, as a polynomial in the rest.
    pub fn even_coefficient(&self, vars: &[usize], exps: &[i32]) -> SuperPoly {
        let mut out = SuperPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            if vars.iter().zip(exps).all(|(&i, &e)| m.exps[i] == e) {
                let mut nm = m.clone();
                for &i in vars {
                    nm.exps[i] = 0;
                }
                out.add_term(nm, c.clone());
            }
        }
        out
    }

    /// Largest absolute exponent of a given even variable.
    pub fn max_abs_exp(&self, i: usize) -> i32 {
        self.terms.keys().map(|m| m.exps[i].abs()).max().unwrap_or(0)
    }

    pub fn weighted_degree(&self, w: &WeightedDegree) -> Homogeneity {
        w.degree_of(self)
    }

    /// The same element in another ring, matching generators by name.
    pub fn transport(&self, target: &Ring) -> Result<SuperPoly> {
        if &self.ring == target {
            return Ok(self.clone());
        }
        let used = |v: Var| {
            self.terms.keys().any(|m| match v {
                Var::Even(i) => m.exps[i] != 0,
                Var::Odd(j) => m.odd & (1 << j) != 0,
            })
        };
        let map_var = |v: Var| -> Result<Option<Var>> {
            match target.var(self.ring.name(v)) {
                Some(t) if t.parity() == v.parity() => Ok(Some(t)),
                _ if !used(v) => Ok(None),
                _ => Err(AlgebraError::UnknownVariable(self.ring.name(v).to_string())),
            }
        };
        let even: Vec<Option<Var>> = (0..self.ring.n_even()).map(|i| map_var(Var::Even(i))).collect::<Result<_>>()?;
        let odd: Vec<Option<Var>> = (0..self.ring.n_odd()).map(|j| map_var(Var::Odd(j))).collect::<Result<_>>()?;
        let mut out = SuperPoly::zero(target);
        for (m, c) in &self.terms {
            let exps: Vec<(usize, i32)> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, e)| **e != 0)
                .map(|(i, e)| match even[i] {
                    Some(Var::Even(t)) => (t, *e),
                    _ => unreachable!(),
                })
                .collect();
            let odds: Vec<usize> = (0..self.ring.n_odd())
                .filter(|j| m.odd & (1 << j) != 0)
                .map(|j| match odd[j] {
                    Some(Var::Odd(t)) => t,
                    _ => unreachable!(),
                })
                .collect();
            out = &out + &SuperPoly::monomial(target, c.clone(), &exps, &odds)?;
        }
        Ok(out)
    }

    /// Splits off the first `k` odd generators: `self = Σ_E E · p_E` where `E` runs over
    /// products of those generators (as bitmasks) and `p_E` is free of them.
    pub fn split_odd_prefix(&self, k: usize) -> BTreeMap<u64, SuperPoly> {
        let mask = if k >= 64 { u64::MAX } else { (1u64 << k) - 1 };
        let mut out: BTreeMap<u64, SuperPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.odd & mask;
            let mut nm = m.clone();
            nm.odd &= !mask;
            out.entry(e).or_insert_with(|| SuperPoly::zero(&self.ring)).add_term(nm, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// `E · self` for a bitmask `E` of odd generators, all absent from `self` and
    /// preceding every odd generator of `self`.
    pub fn with_odd_prefix(&self, e: u64) -> SuperPoly {
        SuperPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    debug_assert!(m.odd & e == 0 && (m.odd == 0 || m.odd.trailing_zeros() >= 64 - e.leading_zeros()));
                    let mut nm = m.clone();
                    nm.odd |= e;
                    (nm, c.clone())
                })
                .collect(),
        }
    }
}

impl Add for &SuperPoly {
    type Output = SuperPoly;
    fn add(self, rhs: &SuperPoly) -> SuperPoly {
        self.checked_add(rhs).expect("ring mismatch in addition")
    }
}

impl Sub for &SuperPoly {
    type Output = SuperPoly;
    fn sub(self, rhs: &SuperPoly) -> SuperPoly {
        self.checked_add(&-rhs).expect("ring mismatch in subtraction")
    }
}

impl Neg for &SuperPoly {
    type Output = SuperPoly;
    fn neg(self) -> SuperPoly {
        SuperPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &SuperPoly {
    type Output = SuperPoly;
    fn mul(self, rhs: &SuperPoly) -> SuperPoly {
        self.checked_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl Add for SuperPoly {
    type Output = SuperPoly;
    fn add(self, rhs: SuperPoly) -> SuperPoly {
        &self + &rhs
    }
}

impl Sub for SuperPoly {
    type Output = SuperPoly;
    fn sub(self, rhs: SuperPoly) -> SuperPoly {
        &self - &rhs
    }
}

impl Mul for SuperPoly {
    type Output = SuperPoly;
    fn mul(self, rhs: SuperPoly) -> SuperPoly {
        &self * &rhs
    }
}

impl Neg for SuperPoly {
    type Output = SuperPoly;
    fn neg(self) -> SuperPoly {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.even_name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.ring.even_name(i), e)),
                }
            }
            for j in 0..self.ring.n_odd() {
                if m.odd & (1 << j) != 0 {
                    factors.push(self.ring.odd_name(j).to_string());
                }
            }
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if factors.is_empty() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), factors.join("*"))?;
            }
        }
        Ok(())
    }
}
