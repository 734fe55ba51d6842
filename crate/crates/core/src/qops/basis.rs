//! Qubit basis kets.
//!
//! Ordering convention used everywhere in this crate: index 0 is the excited
//! state |e⟩ (σᶻ eigenvalue +1), index 1 is the ground state |g⟩. For control
//! qubits the computational labels coincide with the indices, |0⟩ = index 0
//! and |1⟩ = index 1.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::qops::density::DensityMatrix;

fn ket2(a: Complex64, b: Complex64) -> DVector<Complex64> {
    DVector::from_vec(vec![a, b])
}

/// |e⟩, σᶻ eigenvalue +1 (index 0).
pub fn excited() -> DVector<Complex64> {
    ket2(1.0.into(), 0.0.into())
}

/// |g⟩, σᶻ eigenvalue -1 (index 1).
pub fn ground() -> DVector<Complex64> {
    ket2(0.0.into(), 1.0.into())
}

/// Control |0⟩ (index 0).
pub fn zero() -> DVector<Complex64> {
    excited()
}

/// Control |1⟩ (index 1).
pub fn one() -> DVector<Complex64> {
    ground()
}

/// |+⟩ = (|0⟩ + |1⟩)/√2.
pub fn plus() -> DVector<Complex64> {
    ket2((0.5f64.sqrt()).into(), (0.5f64.sqrt()).into())
}

/// |−⟩ = (|0⟩ − |1⟩)/√2.
pub fn minus() -> DVector<Complex64> {
    ket2((0.5f64.sqrt()).into(), (-(0.5f64.sqrt())).into())
}

/// |e⟩⟨e|, the fully charged qubit state.
pub fn excited_state() -> DensityMatrix {
    DensityMatrix::from_pure(&excited()).expect("pure state")
}

/// |g⟩⟨g|, the empty qubit state.
pub fn ground_state() -> DensityMatrix {
    DensityMatrix::from_pure(&ground()).expect("pure state")
}
