//! Construction of the m-isometric dilation: the representing operator `A`,
//! the weight polynomial `p`, the shift weights `S_n` and the block matrix `W`.

mod assemble;
pub mod diagonal;
mod model;
mod polynomial;
mod representing;

pub use assemble::{assemble_w, build_badea_2iso, perturbed, AssembledDilation, BlockLayout};
pub use model::{badea_model, general_model, three_concave_model, DilationModel, DilationPath};
pub use polynomial::{
    build_p_and_weights, falling_factorial_coeffs, p_coefficients, ratio_bound_c, PolynomialWeights, ShiftWeights,
};
pub use representing::{build_a_general, build_a_three_concave, RepresentingOperator};
