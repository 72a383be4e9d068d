//! Dynamical maps from time-local generators and memory kernels.

pub mod family;
pub mod generator;
pub mod kernel;
pub mod mixture;
pub mod recipes;
pub mod superop;
pub mod volterra;

pub use family::{GadcFamily, Profile};
pub use generator::{eigenvalues_from_rates, gadc_generator, GeneratorSpec, Rates};
pub use kernel::{
    k_from_kernel, kernel_from_k, KernelComponent, KernelRates, KernelSpec, KernelTerm,
};
pub use mixture::{mixture_equivalence, MixtureReport};
pub use recipes::{
    example1_kernel, gadc_kernel, single_function_kernel, theorem1_kernel, EllFunction,
    EllParameterization, KernelRecipe, RecipeSpec,
};
pub use volterra::{convolution_identity_check, volterra_solve, Trajectories};
