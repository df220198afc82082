//! Small-`t` expansions of the singular oscillatory and Laplace integrals.

mod alpha;
mod coeffs;
mod expansion;
mod fit;

pub use alpha::{AlphaSpec, Exponent};
pub use coeffs::{
    coeff_a, coeff_a_hat, coeff_b, coeff_b_check, coeff_b_hat, coeff_c, coeff_c_hat, is_log_index, laplace_limit_constant,
    limit_constant, power_phase, singular_part_f, LimitConstant, Normalizer, Regime,
};
pub use expansion::{
    build_expansion, build_expansion_with, eval_expansion, oracle_deviation, remainder, remainder_detail, remainder_of, singular_term,
    taylor_term, Branch, Expansion, ExpansionTerm, Kind,
};
pub use fit::{coeff_c_empirical, log_grid, EmpiricalFit, CONDITION_LIMIT, DEFAULT_FIT_WINDOW, FIT_POINTS};
