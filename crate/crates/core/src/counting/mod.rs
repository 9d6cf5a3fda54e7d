//! Local masses, multivariate Dirichlet coefficient sums, exact abelian counts
//! over `Q` and heuristic constants.

mod abelian;
mod constant;
mod malle;
mod mass;
mod series;

pub use abelian::{abelian_count, abelian_factors, wild_local_count, WildLocalCount};
pub use constant::{
    predicted_constant, predicted_slice_constant, ConstantComponents, ConstantEstimate, ConstantOptions, LValue,
    ResidueEstimate, WildMode,
};
pub use malle::{malle_exponents, MalleExponents};
pub use mass::{
    local_factor, local_factor_at_norm, local_mass, local_mass_at_norm, local_mass_bruteforce, residue_degree,
    LocalFactor, MassTable,
};
pub use series::{box_sum, box_sum_with, region_sum_product, shell_sum, BoxCountResult};
