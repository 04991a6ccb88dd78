//! The Ansatz family `Φ_{λ,μ}` and `F_A`, the rank-one weight matrices `W_p`,
//! and the evaluation operator producing relative-phase products.

mod functions;
mod predictor;

pub use functions::{
    ansatz_phi, eval_l, eval_operator, eval_q, evaluate_fa, weight_matrix, weight_vector, ComplexPoint2, EntireFunction,
};
pub use predictor::{band_pairs, build_predictor, PredictorEntry, PredictorTable, PREDICTOR_HEADER};
