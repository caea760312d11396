//! Geometric mean of q-concurrence (GqC) and companion multipartite
//! entanglement measures for pure states, with certified lower bounds and a
//! heuristic upper estimate for mixed states.
//!
//! States use row-major amplitude order with party 0 most significant.

pub mod bounds;
pub mod error;
pub mod io;
pub mod measures;
pub mod partitions;
pub mod propcheck;
pub mod roof;
pub mod states;
pub mod sweep;
pub mod tensor;

pub use bounds::{
    chord_coefficient, closed_form_ghz, closed_form_w, continuity_bound_bipartite, continuity_bound_multipartite,
    convex_hull_oracle, gqc_ghz_closed, gqc_w_closed, lower_bound_bipartite, lower_bound_multipartite, r_curve,
    w_ghz_ratio, BoundCertificate, ConvexHullReport,
};
pub use error::{Error, Result};
pub use measures::{
    concurrence_pure, f_q, ggm_pure, gmc_pure, gqc_pure, max_fq, q_concurrence_pure, tensor_partywise, CutProfile,
    CutValue, MeasureKind, MeasureReport,
};
pub use partitions::{cardinality, enumerate_bipartitions, enumerate_bipartitions_capped, Bipartition};
pub use roof::{mixed_gqc_upper_estimate, RoofEstimate};
pub use states::{
    class1, class2, four_qubit_family, ghz_state, haar_random_pure, noisy_state, product_from_bits, product_state,
    w_state, NoisyStateSpec,
};
pub use tensor::{
    fidelity_with_pure, partial_trace, schmidt, state_distance, trace_distance, trace_power, DensityMatrix,
    PartialTrace, SchmidtDecomposition, StateVector, C64,
};
