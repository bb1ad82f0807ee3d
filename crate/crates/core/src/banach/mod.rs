//! Analytic representations of the (b,c)-inverse on the float matrix
//! algebra `M_n(R)` with the spectral norm: spectra and group projections,
//! integral, series and resolvent-limit formulas, the operator `H` with the
//! resulting error bounds, and continuity.

mod bound;
mod continuity;
mod repr;
mod spectrum;

pub use bound::{
    build_h, group_identities, perturbation_bound, resolvent_deviation, BanachSetting, BoundReport, BoundSide,
    HOperator, IdentityReport,
};
pub use continuity::{
    continuity_experiment, continuity_from_terms, difference_identity, ContinuityReport, ContinuityTerm,
    DifferenceReport, SequenceSpec, Verdict, DIFFERENCE_TOL,
};
pub use num_complex::Complex64;
pub use repr::{
    choose_beta, integral_representation, limit_representation, series_ratio, series_representation,
    LimitConfig, QuadratureConfig, Representation, RepresentationDetail, SeriesConfig,
};
pub use spectrum::{eigenvalues, spectral_gap, spectrum, Eigenvalue, SpectralReport};
