use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical cutoffs shared by every predicate in the crate.
///
/// `rank_tol` is relative to the largest singular value. `geom_tol` applies to
/// coordinates rescaled to unit diameter, so both are scale free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rank_tol: f64,
    pub geom_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rank_tol: 1e-9, geom_tol: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(rank_tol: f64, geom_tol: f64) -> Result<Self> {
        for (name, v) in [("rank_tol", rank_tol), ("geom_tol", geom_tol)] {
            if !(v > 0.0 && v < 1e-3) {
                return Err(Error::Precondition(format!("{name} must lie in (0, 1e-3), got {v:e}")));
            }
        }
        Ok(Tolerance { rank_tol, geom_tol })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(Tolerance::new(0.0, 1e-9).is_err());
        assert!(Tolerance::new(1e-9, 1e-2).is_err());
        assert!(Tolerance::new(1e-10, 1e-8).is_ok());
    }
}
