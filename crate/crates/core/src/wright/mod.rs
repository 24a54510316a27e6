//! Wright constants, the inverse-power decomposition of `W_l`, the
//! saddle-point estimate of tree polynomials, and asymptotic ratio checks.

mod constants;
mod decompose;
mod ratios;
pub mod saddle;

pub use constants::{wright_b, wright_c, wright_constants, WrightConstants};
pub use decompose::{
    decompose_w, decompose_w_with, w_series, BasisDecomposition, BASIS_S_MIN,
};
pub use ratios::{
    cr_upper_bound, lemma4_closed_form, lemma4_sum, theorem1_ratio, wright_sandwich,
    Lemma4Coefficients, CR_BOUND_SLACK,
};
pub use saddle::{h_at_saddle, saddle_point, saddle_tree_polynomial, SaddleEvaluation};
