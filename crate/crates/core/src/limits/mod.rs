//! Probabilistic inequalities and seeded Monte-Carlo checks of the limit
//! theorems.
//!
//! The experiments sample classical components of a phantom variable: its
//! real component, its reduced component, or the midpoint between them.
//! There is no notion of drawing a phantom value directly.

mod inequality;
mod normal;
mod rng;
mod sim;

pub use inequality::{
    chebyshev_bound, chebyshev_c_form, markov_bound, ChebyshevCheck, MarkovCheck, MarkovVariant, BOUND_SLACK,
};
pub use normal::std_normal_cdf;
pub use rng::{UniformStream, RNG_ALGORITHM};
pub use sim::{
    clt_experiment, coupled_sum, ks_distances, octave_grid, sample_iid, slln_experiment, standardize_sum,
    wlln_experiment, CltBin, ComponentLaw, CurvePoint, Law, SampleStream, Selection, SimConfig, SimReport,
    CLT_BIN_GRID,
};
