//! Mapper, Joint Contour Nets and Reeb graphs of piecewise-linear maps on
//! simplicial complexes.
//!
//! The crate builds the categorical mapper of a PL map `f: X -> R^d` over a
//! box cover of the range, evaluates its colimit functor on open boxes, and
//! constructs an explicit interleaving between that functor and the
//! connected-components cosheaf `pi_0 f^{-1}` at the resolution of the cover.
//! The interleaving is checked diagram by diagram, so every call to
//! [`interleave::certified_upper_bound`] is backed by a verified witness.
//!
//! For `d = 1` the crate also computes exact Reeb graphs and the geometric
//! mapper graph, and compares the two.

pub mod cli;
pub mod complex;
pub mod cover;
mod error;
pub mod fixtures;
pub mod interleave;
pub mod mapper;
pub mod preimage;
pub mod reeb;
pub mod unionfind;

use std::sync::atomic::{AtomicU64, Ordering};

pub use complex::{load_mesh, PlMap, RdSpace, Simplex, SimplicialComplex};
pub use cover::{Cover, CoverNerve, OpenBox};
pub use error::{Error, Result};
pub use mapper::{CategoricalMapper, MapperNerve, SetFunctorValue};
pub use preimage::{components, ActiveRegion, ComponentSet, LabelMap};
pub use reeb::{BettiPair, CosheafRep, ReebGraph};

/// Default absolute tolerance for open-set intersection tests.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695);

/// Current absolute tolerance: an intersection counts as nonempty only when
/// its slack exceeds this value.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Overrides the process-wide tolerance. Intended to be called once at
/// startup (the CLI reads `REEBMAPPER_TOL`).
pub fn set_tolerance(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::Validation(format!("invalid tolerance {tol}")));
    }
    TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tolerance_bits() {
        assert_eq!(DEFAULT_TOLERANCE.to_bits(), 0x3E11_2E0B_E826_D695);
        assert_eq!(tolerance(), DEFAULT_TOLERANCE);
    }
}
