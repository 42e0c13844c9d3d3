//! The `L x L` toric code on a torus with odd `L`.
//!
//! Qubits live on edges. Horizontal edge `h(r, c)` joins vertex `(r, c)` to
//! `(r, c + 1)` and has index `r L + c`; vertical edge `v(r, c)` joins
//! `(r, c)` to `(r + 1, c)` and has index `L^2 + r L + c`. Z errors light up
//! stars (vertices) and X errors light up plaquettes. Plaquette `(r, c)` has
//! its top-left corner at vertex `(r, c)`.

pub mod brute;
pub mod census;
pub mod code;
pub mod count;
pub mod decoder;
pub mod estimate;
pub mod lattice;
pub mod partition;
pub mod strings;
pub mod table;
pub mod truncated;

pub use brute::{
    brute_force_amplitudes, brute_force_amplitudes_angles, brute_force_logical_chi, brute_force_logical_chi_angles,
    class_amplitudes_by_weight, logical_index, rotation_weight_amplitudes, ClassAmplitudes,
};
pub use census::{
    correlated_toric_probe, correlated_weight_amplitudes, disconnected_factor_probe, general_angle_spot_check,
    incoherent_census, logical_component_census, multiplicity_partner_pair, partition_multiplicity, partner_string,
    strengths, AngleConfig, AngleSpotCheck, ComponentCensus, CorrelatedToricProbe, DisconnectedProbe, IncoherentCensus,
    MultiplicityRow, PartitionMultiplicity, PartnerPair, RankedEntry, CORRELATED_LIMIT,
};
pub use code::{build_code, build_code_with, default_decoder, ToricStandardErrors};
pub use count::{count_operators, count_operators_by_class, COUNT_NODE_LIMIT};
pub use decoder::{min_weight_pairing, mwpm_decode, mwpm_decode_x, MAX_DEFECTS};
pub use estimate::{
    coherent_estimator, coherent_string_term, count_logical_strings, error_budget, incoherent_estimator,
    incoherent_string_term, logical_chi_estimate, rm_growth_check, theorem5_ratio_check, GrowthReport,
    LengthContribution, LogicalChiEstimate, Theorem5Report, DEFAULT_GAMMA, DEFAULT_ZETA, D_L,
};
pub use lattice::{xor_edges, Axis, Orientation, TorusLattice, MAX_L, MIN_L};
pub use partition::{exceptional_fraction_bound, partition_sum, PartitionReport, MAX_PARTITION_LENGTH};
pub use strings::{
    classify_string_shape, enumerate_logical_strings, logical_strings_of_length, shape_census, string_from_moves,
    LengthCount, LogicalString, Move, ShapeCensus, ShapeClass, MAX_EXCESS,
};
pub use table::{
    standard_error_table, MatchingDecoder, StringCensus, SyndromeTable, TableEntry, ToricDecoder, TABLE_L,
};
pub use truncated::{
    truncated_chi_oracle, DecomposeContext, FastDecomposition, RotationNoise, TruncatedChi, TRUNCATION_BUDGET,
};
