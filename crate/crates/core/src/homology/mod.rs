//! Z/2 edge signings, their cycle classes, and partial knowledge of them.

mod checks;
mod constraints;
mod signing;

pub use checks::{
    verify_k4_parity, verify_switching_invariance, ParityCounterexample, ParityReport,
    SwitchingCounterexample, SwitchingReport,
};
pub use constraints::{Gf2System, SigningConstraintSet};
pub use signing::{
    canonical_over, enumerate_classes, figure2_signing, sign_vector_cmp, ClassIter, EdgeSigning,
    GraphSource, Modulo, SigningDoc, SpanningForest, FIGURE2_NEGATIVE, MAX_CLASS_DIMENSION, Z2,
};
