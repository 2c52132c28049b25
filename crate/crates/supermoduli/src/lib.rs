//! Exact computations on the weighted projective superline WP¹|¹(1,1|1−n/2):
//! its cohomology, universal odd deformation, SUSY structures with `n` Ramond
//! punctures and automorphism supergroup, together with a verification harness.

pub mod autgroup;
pub mod cli;
pub mod family;
pub mod linalg;
pub mod sheaf;
pub mod superalgebra;
pub mod susy;

pub use superalgebra::{ChartMap, Parity, Ring, SuperOneForm, SuperPoly, SuperVectorField, Var, Q};

/// Dimension of a super vector space, `(even | odd)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SuperDim {
    pub even: i64,
    pub odd: i64,
}

impl SuperDim {
    pub const fn new(even: i64, odd: i64) -> Self {
        SuperDim { even, odd }
    }

    pub fn plus(self, o: SuperDim) -> SuperDim {
        SuperDim::new(self.even + o.even, self.odd + o.odd)
    }

    pub fn minus(self, o: SuperDim) -> SuperDim {
        SuperDim::new(self.even - o.even, self.odd - o.odd)
    }
}

impl std::fmt::Display for SuperDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}|{})", self.even, self.odd)
    }
}
