//! The static unitary charger-pair protocol.
//!
//! A battery with gap Hamiltonian ωσᶻ is driven by two static chargers
//! Vᵢ = xᵢσˣ + yᵢσʸ placed in a quantum switch. Throughout this module the
//! time argument is the duration *each* charger acts, so the corresponding
//! switch run has total duration 2t (each branch process lasts t).

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::qops::{basis, matexp_hermitian_generator, pauli, DensityMatrix, Operator, Pauli};
use crate::switch::{switch_of_duration, ControlState, SwitchOutcome};
use crate::tol;

/// Static charger field amplitudes: V = xσˣ + yσʸ. A zero charger is the
/// free evolution under the battery Hamiltonian alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargerSpec {
    pub x: f64,
    pub y: f64,
}

impl ChargerSpec {
    pub fn new(x: f64, y: f64) -> Self {
        ChargerSpec { x, y }
    }

    pub fn magnitude_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn hamiltonian(&self) -> Operator {
        &pauli(Pauli::X).scale(Complex64::new(self.x, 0.0))
            + &pauli(Pauli::Y).scale(Complex64::new(self.y, 0.0))
    }
}

/// A battery gap plus a pair of chargers.
#[derive(Debug, Clone, Copy)]
pub struct UnitaryProtocol {
    pub omega: f64,
    pub c1: ChargerSpec,
    pub c2: ChargerSpec,
}

impl UnitaryProtocol {
    pub fn new(omega: f64, c1: ChargerSpec, c2: ChargerSpec) -> Result<Self> {
        if omega <= 0.0 {
            return Err(Error::NonPositiveOmega { omega });
        }
        Ok(UnitaryProtocol { omega, c1, c2 })
    }

    /// Parallel chargers along σˣ with the requested eigenfrequencies
    /// Ωᵢ = √(ω² + xᵢ²), i.e. magnitudes √(Ωᵢ² − ω²).
    pub fn from_eigenfrequencies(omega: f64, omega1: f64, omega2: f64) -> Result<Self> {
        if omega <= 0.0 {
            return Err(Error::NonPositiveOmega { omega });
        }
        for target in [omega1, omega2] {
            if target < omega {
                return Err(Error::InfeasibleTarget { omega, target });
            }
        }
        let mag = |big: f64| (big * big - omega * omega).sqrt();
        Ok(UnitaryProtocol {
            omega,
            c1: ChargerSpec::new(mag(omega1), 0.0),
            c2: ChargerSpec::new(mag(omega2), 0.0),
        })
    }

    /// Eigenfrequency Ω₁ = √(ω² + x₁² + y₁²) of H_B + V₁.
    pub fn omega1(&self) -> f64 {
        (self.omega * self.omega + self.c1.magnitude_sq()).sqrt()
    }

    pub fn omega2(&self) -> f64 {
        (self.omega * self.omega + self.c2.magnitude_sq()).sqrt()
    }

    /// Amplitude ratio R = x₁/x₂ = y₁/y₂ of parallel chargers, computed from
    /// whichever component of c2 is nonzero. `None` when c2 vanishes.
    pub fn ratio(&self) -> Option<f64> {
        if self.c2.x != 0.0 {
            Some(self.c1.x / self.c2.x)
        } else if self.c2.y != 0.0 {
            Some(self.c1.y / self.c2.y)
        } else {
            None
        }
    }

    /// Generator H_B + Vᵢ of charger i ∈ {1, 2}.
    pub fn generator(&self, which: usize) -> Operator {
        let charger = match which {
            1 => self.c1,
            2 => self.c2,
            _ => panic!("charger index must be 1 or 2"),
        };
        &pauli(Pauli::Z).scale(Complex64::new(self.omega, 0.0)) + &charger.hamiltonian()
    }

    /// Propagator e^{-i(H_B + Vᵢ)t}.
    pub fn propagator(&self, which: usize, t: f64) -> Operator {
        matexp_hermitian_generator(&self.generator(which), t).expect("Hermitian generator")
    }

    /// Switch run with each charger acting for `t`, control |+⟩, battery from
    /// |g⟩⟨g|. Returns the (plus, minus) branches.
    pub fn switch_branches(&self, t: f64) -> Result<(SwitchOutcome, SwitchOutcome)> {
        self.switch_branches_from(t, &ControlState::plus(), &basis::ground_state())
    }

    pub fn switch_branches_from(
        &self,
        t: f64,
        control: &ControlState,
        rho0: &DensityMatrix,
    ) -> Result<(SwitchOutcome, SwitchOutcome)> {
        if t < 0.0 {
            return Err(Error::NegativeTime { t });
        }
        switch_of_duration(
            |s| KrausChannel::from_unitary(self.propagator(1, s)),
            |s| KrausChannel::from_unitary(self.propagator(2, s)),
            2.0 * t,
            control,
            rho0,
        )
    }
}

/// Diagonal entries (ρ⁻₁₁, ρ⁻₂₂) of the unnormalized minus-branch state for a
/// battery started in |g⟩⟨g|, each charger acting for `t`:
///
///   ρ⁻₁₁ = ω²[(x₂−x₁)² + (y₂−y₁)²] sin²(Ω₁t) sin²(Ω₂t) / (Ω₁²Ω₂²)
///   ρ⁻₂₂ = (x₂y₁ − x₁y₂)² sin²(Ω₁t) sin²(Ω₂t) / (Ω₁²Ω₂²)
///
/// For parallel chargers the ρ⁻₁₁ prefactor reduces to ω²(1−R)²M² with
/// R = x₁/x₂ and M² = x₂² + y₂²; the difference form above is exact for
/// arbitrary pairs and avoids dividing by x₂.
pub fn minus_branch_population(proto: &UnitaryProtocol, t: f64) -> (f64, f64) {
    let o1 = proto.omega1();
    let o2 = proto.omega2();
    let envelope = (o1 * t).sin().powi(2) * (o2 * t).sin().powi(2) / (o1 * o1 * o2 * o2);
    let dx = proto.c2.x - proto.c1.x;
    let dy = proto.c2.y - proto.c1.y;
    let rho11 = proto.omega * proto.omega * (dx * dx + dy * dy) * envelope;
    let cross = proto.c2.x * proto.c1.y - proto.c1.x * proto.c2.y;
    let rho22 = cross * cross * envelope;
    (rho11, rho22)
}

/// True when the chargers are parallel with amplitude ratio ≠ 1, the
/// condition under which the minus branch is the fully charged state.
/// Parallelism is tested on the cross product x₁y₂ − x₂y₁.
pub fn fully_charged_condition(proto: &UnitaryProtocol) -> bool {
    let cross = proto.c1.x * proto.c2.y - proto.c2.x * proto.c1.y;
    let scale = proto.c1.magnitude_sq().max(proto.c2.magnitude_sq()).max(1.0);
    if cross.abs() > tol::PARALLEL_CHARGERS * scale {
        return false;
    }
    let dx = proto.c1.x - proto.c2.x;
    let dy = proto.c1.y - proto.c2.y;
    // ratio 1 means identical chargers
    (dx * dx + dy * dy) > tol::PARALLEL_CHARGERS * scale
}

/// The probability-optimal protocol for a given k: the first charger is off
/// (Ω₁ = ω, free precession) and the second satisfies Ω₂ = (1+2k)ω, giving
/// minus-branch probability 1 − 1/(1+2k)² at t = π/(2ω) with the battery
/// fully charged.
pub fn optimal_protocol(omega: f64, k: u32) -> Result<UnitaryProtocol> {
    if omega <= 0.0 {
        return Err(Error::NonPositiveOmega { omega });
    }
    if k == 0 {
        return Err(Error::DomainError { what: "k", value: 0.0 });
    }
    let factor = (1 + 2 * k) as f64;
    UnitaryProtocol::from_eigenfrequencies(omega, omega, factor * omega)
}

/// Peak minus-branch probability p⁽ᵏ⁾ = 1 − 1/(1+2k)² of the optimal protocol.
pub fn success_probability(k: u32) -> f64 {
    let f = (1 + 2 * k) as f64;
    1.0 - 1.0 / (f * f)
}

/// The per-charger duration t_min = π/(2ω) at which the optimum is reached.
pub fn optimal_time(omega: f64) -> Result<f64> {
    if omega <= 0.0 {
        return Err(Error::NonPositiveOmega { omega });
    }
    Ok(FRAC_PI_2 / omega)
}

/// Battery energy Tr(ρ · ωσᶻ).
pub fn battery_energy(rho: &DensityMatrix, omega: f64) -> f64 {
    rho.expectation(&pauli(Pauli::Z)) * omega
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn eigenfrequency_construction_magnitudes() {
        // Ω₁ = √2, Ω₂ = 3√2 at ω = 1: magnitudes 1 and √17, R = 1/√17.
        let proto =
            UnitaryProtocol::from_eigenfrequencies(1.0, 2f64.sqrt(), 3.0 * 2f64.sqrt()).unwrap();
        assert!((proto.c1.magnitude_sq() - 1.0).abs() < 1e-12);
        assert!((proto.c2.magnitude_sq() - 17.0).abs() < 1e-12);
        assert!((proto.ratio().unwrap() - 1.0 / 17f64.sqrt()).abs() < 1e-12);
        assert!((proto.omega2() - 3.0 * proto.omega1()).abs() < 1e-12);
    }

    #[test]
    fn infeasible_targets_rejected() {
        assert!(matches!(
            UnitaryProtocol::from_eigenfrequencies(1.0, 0.5, 3.0),
            Err(Error::InfeasibleTarget { .. })
        ));
        assert!(matches!(
            UnitaryProtocol::from_eigenfrequencies(0.0, 1.0, 3.0),
            Err(Error::NonPositiveOmega { .. })
        ));
    }

    #[test]
    fn identical_chargers_give_zero_minus_branch() {
        let c = ChargerSpec::new(1.3, -0.4);
        let proto = UnitaryProtocol::new(1.0, c, c).unwrap();
        for t in [0.2, 0.9, 2.5] {
            let (r11, r22) = minus_branch_population(&proto, t);
            assert!(r11.abs() < 1e-15 && r22.abs() < 1e-15);
        }
    }

    #[test]
    fn sine_zeros_kill_the_branch() {
        let proto = UnitaryProtocol::new(1.0, ChargerSpec::new(0.5, 0.0), ChargerSpec::new(2.0, 0.0))
            .unwrap();
        let t = PI / proto.omega1();
        let (r11, r22) = minus_branch_population(&proto, t);
        assert!(r11.abs() < 1e-25 && r22.abs() < 1e-25);
    }

    #[test]
    fn fully_charged_condition_cases() {
        let p = |c1: (f64, f64), c2: (f64, f64)| {
            fully_charged_condition(
                &UnitaryProtocol::new(1.0, ChargerSpec::new(c1.0, c1.1), ChargerSpec::new(c2.0, c2.1))
                    .unwrap(),
            )
        };
        assert!(p((2.0, 4.0), (1.0, 2.0)));      // R = 2
        assert!(!p((1.0, 2.0), (1.0, 2.0)));     // R = 1
        assert!(!p((1.0, 0.0), (0.0, 1.0)));     // not parallel
        assert!(p((0.0, 0.0), (1.0, 2.0)));      // trivial first charger, R = 0
        assert!(p((0.0, 2.0), (0.0, 1.0)));      // x₂ = 0 fallback path
    }

    #[test]
    fn success_probability_values() {
        assert!((success_probability(1) - 8.0 / 9.0).abs() < 1e-15);
        assert!((success_probability(2) - 24.0 / 25.0).abs() < 1e-15);
        let mut last = 0.0;
        for k in 1..50 {
            let p = success_probability(k);
            assert!(p > last && p < 1.0);
            last = p;
        }
    }

    #[test]
    fn optimal_time_values() {
        assert!((optimal_time(1.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((optimal_time(2.0).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!(optimal_time(0.0).is_err());
    }

    #[test]
    fn battery_energy_values() {
        assert!((battery_energy(&basis::excited_state(), 1.0) - 1.0).abs() < 1e-15);
        assert!((battery_energy(&basis::ground_state(), 1.0) + 1.0).abs() < 1e-15);
        assert!(battery_energy(&DensityMatrix::maximally_mixed(2), 3.0).abs() < 1e-15);
    }

    #[test]
    fn optimal_protocol_reaches_peak_probability() {
        let proto = optimal_protocol(1.0, 1).unwrap();
        let t = optimal_time(1.0).unwrap();
        let (_, minus) = proto.switch_branches(t).unwrap();
        assert!((minus.probability - 8.0 / 9.0).abs() < 1e-12);
        let state = minus.state.unwrap();
        assert!(
            crate::qops::fidelity(&state, &basis::excited_state()).unwrap() > 1.0 - 1e-9
        );
    }

    #[test]
    fn analytic_matches_simulation_spot_check() {
        // r-scaled parallel pair with Ω₂ = 3Ω₁ at t = π/2.
        let proto =
            UnitaryProtocol::from_eigenfrequencies(1.0, 2f64.sqrt(), 3.0 * 2f64.sqrt()).unwrap();
        let t = FRAC_PI_2;
        let (r11, r22) = minus_branch_population(&proto, t);
        let (_, minus) = proto.switch_branches(t).unwrap();
        let unnorm_11 = minus.probability * minus.state.as_ref().map_or(0.0, |s| s.population(0));
        let unnorm_22 = minus.probability * minus.state.as_ref().map_or(0.0, |s| s.population(1));
        assert!((r11 - unnorm_11).abs() < 1e-9);
        assert!((r22 - unnorm_22).abs() < 1e-9);
    }
}
