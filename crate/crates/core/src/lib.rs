//! Low-projection sparse code multiple access (SCMA) codebooks.
//!
//! The crate builds golden-angle low-projection codebooks, evaluates them
//! with Euclidean and Rician-fading distance metrics, optimizes their free
//! parameters, labels their codewords, and simulates them with an
//! instrumented message-passing detector.

pub mod codebook;
pub mod complexity;
pub mod error;
pub mod fixtures;
pub mod gam;
pub mod labeling;
pub mod metrics;
pub mod mother;
pub mod optimizer;
pub mod rng;
pub mod simulator;

pub use codebook::{
    assemble, builtin_factor_graph, builtin_signature, CodebookSet, DesignMeta, FactorGraph,
    OperatorParams, Overload, SignaturePattern, UserCodebook,
};
pub use complexity::{crr, mpa_op_counts, ComplexityParams, ComplexityReport, OpCounts};
pub use error::{Error, Result};
pub use gam::{
    build_basic_constellation, build_lp_vector, default_overlap_plan, gam_point, Constellation1D,
    GamParams, OverlapPlan,
};
pub use labeling::{bsa_label, labeling_cost, Labeling};
pub use metrics::{
    delta_lb, delta_min, med_superimposed, mpd_codebook, noise_from_ebn0, rician_pair_distance,
    DeltaMode,
};
pub use mother::{cartesian_mother, permutation_search, MotherConstellation, Permutation};
pub use optimizer::{design_pipeline, optimize, DesignConfig, OptimizationProblem, OptimizationResult};
pub use simulator::{ber_sweep, lp_mpa_decode, mpa_decode, ChannelSpec, DecodeStats};

pub use num_complex::Complex64;
