//! Sine-basis calculus on a Dirichlet box.
//!
//! Every operator that is a function of the Dirichlet Laplacian is diagonal
//! here, so `J_n`, `omega^s`, `U(t)` and `(K(t), K'(t))` are [`Multiplier`]s.
//! Nonlinear terms go through [`product`].

pub mod multiplier;
pub mod norms;
pub mod product;
pub mod transform;

pub use multiplier::{
    kg_propagator, laplacian, omega_apply, omega_power, schrodinger_propagator, yosida,
    yosida_apply, Multiplier,
};
pub use norms::{inner, lp_norm, norms, sobolev_norm, Norms};
pub use product::{abs_sq, pointwise_product, ProductRule};
pub use transform::{to_physical, to_spectral};
