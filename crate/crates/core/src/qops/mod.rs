//! Minimal dense complex linear algebra for the small Hilbert spaces used
//! here (dimensions 2 through 16): Pauli algebra, tensor products, Hermitian
//! matrix exponentials, partial traces and fidelity.

pub mod basis;
mod density;
mod operator;

pub use density::{fidelity, partial_trace, DensityMatrix};
pub use operator::{
    matexp_hermitian_generator, partial_trace_op, pauli, tensor, Operator, Pauli,
};
