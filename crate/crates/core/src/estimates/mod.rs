//! Numerical checks of the multilinear space-time estimates: exact identities
//! where equality holds, bounded and resolution-stable ratios elsewhere.

mod bilinear;
mod ensemble;
mod localization;
mod ratio;
mod trilinear;

pub use bilinear::{
    bilinear_closed_form, bilinear_spectrum, check_bilinear_identity, check_bilinear_identity_with, IdentityReport,
    IdentitySetup,
};
pub use ensemble::{ensemble_sup_ratio, ensemble_sup_ratio_with, trial_inputs, RatioReport};
pub use localization::{marginal_trajectory, time_localization_ratios, time_localization_slope};
pub use ratio::{
    cross_terms, estimate_ratio, estimate_sides, EstimateId, EstimateInput, EstimateParams, EstimateTag, Harness,
};
pub use trilinear::{
    trilinear_brute_force, trilinear_fft_route, FftRouteSetup, trilinear_quadrature, trilinear_quadrature_with, QuadratureOptions,
    TripleSpectra, TrilinearValue,
};
