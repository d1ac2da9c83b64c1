//! Semi-deterministic transducers: string antichains, the machine model,
//! translation-query oracles, characteristic samples and a learner that
//! identifies the canonical machine from pairs and queries.

pub mod antichain;
pub mod dataset;
pub mod equivalence;
pub mod fixtures;
pub mod learner;
pub mod oracle;
pub mod sampler;
pub mod strings;
pub mod transducer;

pub use antichain::{
    ac_less, is_maximal_antichain, is_valid_antichain, left_quotient, maximal_factorization,
    product, product_all, valid_antichains, PrefixTree,
};
pub use dataset::{Dataset, DatasetError};
pub use equivalence::{
    bounded_equiv, canonical_form, canonicalize, isomorphic, CanonicalReport, EquivError,
};
pub use learner::{learn, learn_with_report, LearnError, LearnReport};
pub use oracle::{
    budgeted, machine_oracle, Budgeted, MachineOracle, Oracle, OracleError, OracleStats,
};
pub use sampler::{characteristic_sample, n0, n1, n2, n2_star, CharacteristicSample, SampleError};
pub use strings::{llex_cmp, prefix_rel, Alphabet, PrefixRel, Str, StringError, StringSet, Symbol};
pub use transducer::{
    random_sdt, to_dot, Edge, OutputSet, Path, RandomSdtParams, Sdt, SdtBuilder, SdtError, StateId,
    Step, Violation,
};
