//! Character values of diagonal models, the idempotent criterion built on
//! them, explicit idempotent chains, separation certificates and the
//! sharpness example on `C_0[0, 1]`.

mod certificate;
mod characters;
mod idempotents;
mod sharpness;

pub use certificate::{separation_certificate, Certificate, LambdaCheck};
pub use characters::{character_set, criterion_check, CharacterSet, CriterionRow, CRITERION_TOL};
pub use idempotents::{bounded_generator_check, build_idempotents, ChainCheck, GeneratorRow, IdempotentChain};
pub use sharpness::{sharpness_csv, sharpness_demo, SharpnessReport, SharpnessRow};

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::complexfn::ComplexFnError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("backend {0} is not diagonal")]
    NotDiagonal(String),
    #[error("measure has mass {0:e}, expected zero")]
    MassNotZero(f64),
    #[error("measure is not real")]
    NotReal,
    #[error("certificate failed at {point}: {reason}")]
    CertificateFailed { point: C64, reason: String },
    #[error(transparent)]
    ComplexFn(#[from] ComplexFnError),
}

pub(crate) fn check_mass(mu: &crate::measures::CompactMeasure) -> Result<(), SpectralError> {
    let m = mu.mass().norm();
    if m > crate::calculus::MASS_TOL {
        return Err(SpectralError::MassNotZero(m));
    }
    Ok(())
}
