//! Trigonometric polynomials and the functionals evaluated on them.

mod grid;
mod kernels;
mod measure;
mod norms;
mod poly;
mod rademacher;
mod rearrange;
mod riesz;
mod square;

pub use grid::{for_each_grid_coset, grid_moduli, grid_values};
pub use kernels::{dirichlet, fejer, vallee_poussin, vallee_poussin_coeff};
pub use measure::{pseudo_complement, pseudo_complement_report, PseudoComplement};
pub use norms::{
    exact_grid, lq_norm, lq_norm_exact_even, lq_norm_exact_even_with, orlicz_psi2_norm, psi_parameter,
    quadrature_is_exact, sup_grid, sup_norm, NormMethod, NormReport, PsiEstimate,
};
pub use poly::TrigPolynomial;
pub use rademacher::{rademacher_norm, sign_flipped};
pub use rearrange::{coefficient_rearrangement, orlicz_phi, orlicz_phi_inverse, Rearrangement};
pub use riesz::{riesz_product, RieszProduct, RIESZ_TERM_BUDGET};
pub use square::{dyadic_pieces, square_function, DyadicBlock};
