//! Densities, Riesz sums and Poisson summation.

pub mod density;
pub mod poisson;
pub mod riesz;
pub mod tail;
pub mod testfn;

pub use density::{
    default_translates, empirical_density, quasi_random, theoretical_density, DensityReport, DensityRow,
};
pub use poisson::{poisson_check, PoissonReport};
pub use riesz::{nl_convergence, nl_convergence_with, riesz_limit, riesz_sum, riesz_sum_with, NlRow, NlTable, RieszSum, Truncation};
pub use testfn::{Gaussian, PsiSpec, TestFunctionSpec, TrigTerm};
