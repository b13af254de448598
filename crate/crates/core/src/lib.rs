//! Parikh matrices, subword counting, and rewriting rules that preserve
//! (strong) M-equivalence of words.
//!
//! Counting code is generic over the count scalar (see [`Count`]); the
//! aliases [`ParikhMatrix64`] and [`ParikhMatrixBig`] cover the usual cases.

pub mod error;
pub mod irreducibility;
pub mod parikh;
pub mod scalar;
pub mod search;
pub mod transforms;
pub mod words;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use error::{Error, Result};
pub use irreducibility::{
    analyze, check_strong_not_mse, compute_pq_pairs, decompose, has_irreducible_2x2_structure,
    irreducible_family, strong_2t_only_family, strong_3t_only_family, Family, PqPair,
    ReducibilityReport, Stage, StrongNotMse,
};
pub use parikh::{
    m_equivalent, parikh_matrix, parikh_matrix_from_counts, strongly_m_equivalent,
    sufficient_orderings, ParikhMatrix,
};
pub use scalar::Count;
pub use search::{
    detect_alpha_beta_sites, detect_strong_2t, detect_strong_3t, enumerate_class, msae_search,
    mse_equivalent, ClassMode, Derivation, DerivationStep, Detection3t, MsaeOutcome, MseOutcome,
};
pub use transforms::{
    apply_alpha_beta, apply_e1, apply_se, apply_strong_2t, apply_strong_3t,
    predict_pair_swap_deltas, validate_classic_2t, BlockKind, Counter, FactorClass, PairSwapDeltas,
    SwapBlock, SwapSpec, TripleFactor, TripleFactorSpec,
};
pub use words::{
    count_factor, count_subword, parikh_vector, Alphabet, Letter, OrderedAlphabet, ParikhVector,
    Word,
};

pub type ParikhMatrix64 = ParikhMatrix<u64>;
pub type ParikhMatrixBig = ParikhMatrix<num_bigint::BigUint>;
