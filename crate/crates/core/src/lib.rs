//! Exact zero-sum constants and extremal-sequence structure for finite
//! abelian groups given as direct sums of cyclic groups.

mod bitset;
pub mod error;
pub mod families;
pub mod group;
pub mod search;
pub mod sequence;
pub mod sums;
pub mod verify;

pub use bitset::{ElemSet, MAX_ELEMENTS};
pub use error::{Error, Result};
pub use families::{
    check_filter_lemma, classify, decompose_ct, enumerate_family, generate, height_bound,
    height_profile, height_witness, Classifier, Decomposition, FamilyLabel, FamilyWitness, Param,
    Problem,
};
pub use group::{
    canonical_split, enumerate_automorphisms, enumerate_bases, split_by, Automorphism, Basis,
    Group, GroupElement, GroupSpec, SplitData,
};
pub use search::{
    canonical_form, compute_s_l, compute_s_l_with_mode, davenport_constant, enumerate_avoiding,
    enumerate_extremal, enumerate_max_minimal_zero_sum, enumerate_minimal_zero_sum, Checkpoint,
    ConstantResult, Enumeration, EquivalenceMode, PruneStrength, SearchConfig, Symmetry,
};
pub use sequence::{LengthSet, Sequence, SequenceStats};
pub use sums::{
    brute_sigma_l, brute_sums_by_length, count_zero_sum_subsequences, has_zero_sum,
    is_minimal_zero_sum, sigma_l, witness_zero_sum,
};
pub use verify::{run_suite, Check, VerifyOptions, VerifyReport};
