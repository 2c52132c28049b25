//! Exact linear algebra over ℚ: an incremental sparse echelon form that remembers how
//! each stored row was built from the inserted columns, plus dense determinants.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::superalgebra::{Ring, SuperPoly, Q};

pub type SparseVec = BTreeMap<usize, Q>;

pub fn axpy(y: &mut SparseVec, a: &Q, x: &SparseVec) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let e = y.entry(*k).or_insert_with(Q::zero);
        *e += a * v;
        if e.is_zero() {
            y.remove(k);
        }
    }
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    combo: SparseVec,
}

/// Column space of the vectors inserted so far.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Row>,
    pivots: HashMap<usize, usize>,
    inserted: usize,
    kernel: Vec<SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Relations `Σ c_k col_k = 0` among the inserted columns; a basis of the kernel.
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }

    /// Writes `v = Σ combo_k col_k + remainder` with the remainder free of pivots.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut rem = v.clone();
        let mut combo = SparseVec::new();
        let mut cursor = 0usize;
        loop {
            let next = rem.range(cursor..).find(|(k, _)| self.pivots.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            let row = &self.rows[self.pivots[&k]];
            axpy(&mut rem, &-c.clone(), &row.vec);
            axpy(&mut combo, &c, &row.combo);
            cursor = k + 1;
        }
        (rem, combo)
    }

    /// Inserts a column; returns `true` if it was independent of the previous ones.
    pub fn insert(&mut self, col: &SparseVec) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (rem, combo) = self.reduce(col);
        let mut rel = SparseVec::new();
        rel.insert(idx, Q::one());
        axpy(&mut rel, &-Q::one(), &combo);
        match rem.iter().next() {
            None => {
                self.kernel.push(rel);
                false
            }
            Some((&p, c)) => {
                let f = c.recip();
                let vec = rem.iter().map(|(k, v)| (*k, v * &f)).collect();
                let combo = rel.iter().map(|(k, v)| (*k, v * &f)).collect();
                self.pivots.insert(p, self.rows.len());
                self.rows.push(Row { vec, combo });
                true
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Coefficients `x` with `Σ x_k col_k = b`, if `b` lies in the span.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let (rem, combo) = self.reduce(b);
        rem.is_empty().then_some(combo)
    }
}

/// Rank of a list of sparse vectors.
pub fn rank(cols: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for c in cols {
        e.insert(c);
    }
    e.rank()
}

/// Determinant by fraction Gaussian elimination.
pub fn det_rational(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            let (top, rest) = m.split_at_mut(r);
            for (x, y) in rest[0][col..n].iter_mut().zip(&top[col][col..n]) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Division-free determinant (Berkowitz) for matrices over the even, hence
/// commutative, part of a superalgebra.
pub fn det_even(ring: &Ring, a: &[Vec<SuperPoly>]) -> SuperPoly {
    let n = a.len();
    if n == 0 {
        return SuperPoly::one(ring);
    }
    let mut vect = vec![SuperPoly::one(ring), -&a[0][0]];
    for r in 1..n {
        // Q = [1, -a_rr, -C R, -C M R, ..., -C M^{r-1} R]
        let mut qv = vec![SuperPoly::one(ring), -&a[r][r]];
        let mut mr: Vec<SuperPoly> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let mut dot = SuperPoly::zero(ring);
            for j in 0..r {
                dot = &dot + &(&a[r][j] * &mr[j]);
            }
            qv.push(-dot);
            mr = (0..r)
                .map(|i| {
                    let mut acc = SuperPoly::zero(ring);
                    for j in 0..r {
                        acc = &acc + &(&a[i][j] * &mr[j]);
                    }
                    acc
                })
                .collect();
        }
        let new: Vec<SuperPoly> = (0..r + 2)
            .map(|i| {
                let mut acc = SuperPoly::zero(ring);
                for (j, v) in vect.iter().enumerate() {
                    if i >= j {
                        acc = &acc + &(&qv[i - j] * v);
                    }
                }
                acc
            })
            .collect();
        vect = new;
    }
    if n.is_multiple_of(2) {
        vect[n].clone()
    } else {
        -&vect[n]
    }
}
