//! First-order geometric amplitude
//!
//! `f₁ = -½√(i/2π𝔎)·[I₀ - iΣ(A'⁻¹_{mn} I_{mn} + A⁻¹_{mn} J_{mn}) - ΣA'⁻¹_{mm'}A⁻¹_{nn'} I_{mm'nn'}]`
//!
//! where `A` is the defect matrix at the incident `k_x = 𝔎 cos θ₀` and `A'` the
//! one at the outgoing `k'_x = 𝔎 cos θ`.

mod amplitude;
mod closed;
mod scan;

pub use amplitude::{
    amplitude, amplitude_with, cross_section, f1_from_source, f1_geometric, AmplitudeOptions, AmplitudeResult,
    ClosedForms, CoefficientSource, SUPPORT_TOLERANCE,
};
pub use closed::{
    i0_closed, immnn_closed, immnn_pieces, imn_closed, jmn_closed, ClosedFormOptions, GeoCoefficientInputs, ImmPieces,
    KVariant, Transcription,
};
pub use scan::{peak_over_k, Peak};
