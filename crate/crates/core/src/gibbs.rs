//! Non-unitary charging through a thermal mediator.
//!
//! Battery and charger are resonant qubits with H = (ω/2)σᶻ each, coupled for
//! a finite time by the pair-exchange interaction H_I = K(σ⁺⊗σ⁺ + σ⁻⊗σ⁻),
//! which couples |gg⟩ ↔ |ee⟩ with eigenfrequency ν = √(ω² + K²). The mediator
//! is prepared in the Gibbs state diag(p, 1−p) and the battery starts in the
//! same thermal state; the switch's minus branch then concentrates population
//! in |e⟩ beyond what any sequence of classical contacts reaches.
//!
//! Closed forms implemented here: the population f(p) of the minus branch at
//! its measurement-probability peak with coefficient polynomials A–J, the
//! first peak time, the classical two-pass benchmark g(p), the population-
//! inversion bound h(p) = 1 − p, the weak-coupling limit of f, and the global
//! population maximum (1−p)²/(1 + 2p(p−1)) reached as t → 2π/ν.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::channels::{kraus_from_dilation, KrausChannel};
use crate::error::{Error, Result};
use crate::qops::{pauli, tensor, DensityMatrix, Operator, Pauli};
use crate::switch::{switch_of_duration, ControlState, SwitchOutcome};
use crate::tol;

/// Scale applied to σˣ ± iσʸ when forming the raising/lowering operators.
///
/// `Half` gives the elementary matrix units (σ⁺ = |e⟩⟨g|) and keeps the
/// pair-exchange eigenfrequency at √(ω² + K²); it is the convention every
/// closed form in this module is written in, and the default. `Verbatim`
/// (no ½) rescales the effective coupling to 4K.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RaisingConvention {
    #[default]
    Half,
    Verbatim,
}

impl RaisingConvention {
    pub fn scale(&self) -> f64 {
        match self {
            RaisingConvention::Half => 0.5,
            RaisingConvention::Verbatim => 1.0,
        }
    }
}

/// Parameters of the thermal charging protocol.
///
/// `p` is the excited-state population of the mediator's Gibbs state
/// diag(p, 1−p); thermal states (β ≥ 0) have p ≤ 1/2. Population-inverted
/// mediators (p > 1/2) must be requested explicitly.
#[derive(Debug, Clone, Copy)]
pub struct GibbsSpec {
    omega: f64,
    coupling: f64,
    p: f64,
}

impl GibbsSpec {
    pub fn new(omega: f64, coupling: f64, p: f64) -> Result<Self> {
        if omega <= 0.0 {
            return Err(Error::NonPositiveOmega { omega });
        }
        if coupling < 0.0 {
            return Err(Error::DomainError { what: "coupling", value: coupling });
        }
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::DomainError { what: "p", value: p });
        }
        Ok(GibbsSpec { omega, coupling, p })
    }

    /// Allows p ∈ (1/2, 1]: a population-inverted (negative-temperature)
    /// mediator.
    pub fn with_inverted_population(omega: f64, coupling: f64, p: f64) -> Result<Self> {
        if omega <= 0.0 {
            return Err(Error::NonPositiveOmega { omega });
        }
        if coupling < 0.0 {
            return Err(Error::DomainError { what: "coupling", value: coupling });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::DomainError { what: "p", value: p });
        }
        Ok(GibbsSpec { omega, coupling, p })
    }

    /// Derives p from the inverse temperature: p = 1/(1 + e^{βω}) for the
    /// splitting ω of H_C = (ω/2)σᶻ.
    pub fn from_beta(omega: f64, coupling: f64, beta: f64) -> Result<Self> {
        if beta < 0.0 {
            return Err(Error::DomainError { what: "beta", value: beta });
        }
        let p = 1.0 / (1.0 + (beta * omega).exp());
        Self::new(omega, coupling, p)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Pair-exchange eigenfrequency ν = √(ω² + K²).
    pub fn nu(&self) -> f64 {
        (self.omega * self.omega + self.coupling * self.coupling).sqrt()
    }

    /// The mediator's Gibbs state diag(p, 1−p), also the battery's initial
    /// state in this protocol.
    pub fn gibbs_state(&self) -> DensityMatrix {
        DensityMatrix::from_populations(&[self.p, 1.0 - self.p]).expect("valid populations")
    }
}

/// H_I = K(σ_B⁺ ⊗ σ_C⁺ + σ_B⁻ ⊗ σ_C⁻): the counter-rotating pair exchange
/// coupling |gg⟩ ↔ |ee⟩. With the Half convention the entries are K; the
/// Verbatim convention scales them by 4.
pub fn interaction_hamiltonian(spec: &GibbsSpec, conv: RaisingConvention) -> Operator {
    let s = conv.scale();
    let raise = (&pauli(Pauli::X) + &pauli(Pauli::Y).scale(Complex64::new(0.0, 1.0)))
        .scale(Complex64::new(s, 0.0));
    let lower = raise.adjoint();
    (&tensor(&raise, &raise) + &tensor(&lower, &lower)).scale(Complex64::new(spec.coupling, 0.0))
}

/// H_B + H_C + H_I on battery ⊗ charger, both local terms (ω/2)σᶻ.
pub fn joint_hamiltonian(spec: &GibbsSpec, conv: RaisingConvention) -> Operator {
    let half_gap = pauli(Pauli::Z).scale(Complex64::new(spec.omega / 2.0, 0.0));
    let id = Operator::identity(2);
    &(&tensor(&half_gap, &id) + &tensor(&id, &half_gap)) + &interaction_hamiltonian(spec, conv)
}

/// The battery-reduced channel of one charging contact of duration `t`:
/// the Kraus set K_ij = √P_j ⟨i|e^{−iHt}|j⟩ with the mediator traced out.
pub fn single_charge_channel(
    spec: &GibbsSpec,
    conv: RaisingConvention,
    t: f64,
) -> Result<KrausChannel> {
    GibbsCharger::new(spec, conv).channel(t)
}

/// A charging contact with the joint generator eigendecomposed once, for
/// time sweeps that build the channel at many durations.
pub struct GibbsCharger {
    eigenvalues: Vec<f64>,
    eigenvectors: nalgebra::DMatrix<Complex64>,
    gibbs: DensityMatrix,
}

impl GibbsCharger {
    pub fn new(spec: &GibbsSpec, conv: RaisingConvention) -> Self {
        let (eigenvalues, eigenvectors) = joint_hamiltonian(spec, conv)
            .hermitian_eigen()
            .expect("joint Hamiltonian is Hermitian");
        GibbsCharger { eigenvalues, eigenvectors, gibbs: spec.gibbs_state() }
    }

    /// e^{−iHt} from the cached eigendecomposition.
    pub fn propagator(&self, t: f64) -> Operator {
        let d = self.eigenvalues.len();
        let phases = nalgebra::DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, -self.eigenvalues[i] * t)
            } else {
                Complex64::ZERO
            }
        });
        Operator::from_matrix(&self.eigenvectors * phases * self.eigenvectors.adjoint())
    }

    pub fn channel(&self, t: f64) -> Result<KrausChannel> {
        if t < 0.0 {
            return Err(Error::NegativeTime { t });
        }
        kraus_from_dilation(&self.propagator(t), &self.gibbs)
    }

    /// Switch of two identical contacts, each lasting t/2.
    pub fn switch_branches(
        &self,
        t: f64,
        rho0: &DensityMatrix,
    ) -> Result<(SwitchOutcome, SwitchOutcome)> {
        let factory = |s: f64| self.channel(s);
        switch_of_duration(factory, factory, t, &ControlState::plus(), rho0)
    }
}

/// Switch of two identical charging contacts, each lasting t/2, control |+⟩,
/// battery starting in the protocol's thermal state. Returns (plus, minus).
pub fn switched_charge(
    spec: &GibbsSpec,
    conv: RaisingConvention,
    t: f64,
) -> Result<(SwitchOutcome, SwitchOutcome)> {
    switched_charge_from(spec, conv, t, &spec.gibbs_state())
}

/// As [`switched_charge`] but from an arbitrary battery state (e.g. the
/// empty cell |g⟩⟨g|).
pub fn switched_charge_from(
    spec: &GibbsSpec,
    conv: RaisingConvention,
    t: f64,
    rho0: &DensityMatrix,
) -> Result<(SwitchOutcome, SwitchOutcome)> {
    if t < 0.0 {
        return Err(Error::NegativeTime { t });
    }
    let factory = |s: f64| single_charge_channel(spec, conv, s);
    switch_of_duration(factory, factory, t, &ControlState::plus(), rho0)
}

/// Two consecutive charging contacts (fresh mediator each) of durations t₁
/// and t₂: the classical-order benchmark dynamics.
pub fn sequential_charge(
    spec: &GibbsSpec,
    conv: RaisingConvention,
    t1: f64,
    t2: f64,
    rho0: &DensityMatrix,
) -> Result<DensityMatrix> {
    let first = single_charge_channel(spec, conv, t1)?.apply(rho0)?;
    single_charge_channel(spec, conv, t2)?.apply(&first)
}

// Coefficient polynomials of the closed-form f(p).
fn coeff_a(p: f64) -> f64 {
    (((6.0 * p - 24.0) * p + 39.0) * p - 23.0) * p + 5.0
}
fn coeff_b(p: f64) -> f64 {
    (((12.0 * p - 24.0) * p + 29.0) * p - 15.0) * p + 3.0
}
fn coeff_c(p: f64) -> f64 {
    p * p + p - 1.0
}
fn coeff_d(p: f64) -> f64 {
    (2.0 * p - 2.0) * p + 1.0
}
fn coeff_e(p: f64) -> f64 {
    (4.0 * p - 4.0) * p + 3.0
}
fn coeff_g(p: f64) -> f64 {
    1.0 - p
}
fn coeff_h(p: f64) -> f64 {
    (3.0 * p - 3.0) * p + 1.0
}
fn coeff_i(p: f64) -> f64 {
    (6.0 * p - 6.0) * p + 3.0
}
fn coeff_j(p: f64) -> f64 {
    (12.0 * p - 12.0) * p + 5.0
}

/// F(p): the discriminant under the square root of f(p) and the peak time.
fn coeff_f(omega: f64, coupling: f64, p: f64) -> f64 {
    let f1 = (((36.0 * p - 72.0) * p + 72.0) * p - 36.0) * p + 9.0;
    let f2 = (((48.0 * p - 96.0) * p + 100.0) * p - 52.0) * p + 14.0;
    let f3 = (((48.0 * p - 96.0) * p + 88.0) * p - 40.0) * p + 9.0;
    let w2 = omega * omega;
    let k2 = coupling * coupling;
    w2 * w2 * f1 + w2 * k2 * f2 + k2 * k2 * f3
}

/// Minus-branch excited population at the time the measurement probability
/// peaks:
///
///   f(p) = (1−p)·[ω²A + K²B − C√F] / (H·[5Dω² + EK² + √F])
///
/// Satisfies f(0) = 1 and f(1/2) = 1/2 identically in ω, K.
pub fn f_of_p(spec: &GibbsSpec) -> f64 {
    let p = spec.p;
    let w2 = spec.omega * spec.omega;
    let k2 = spec.coupling * spec.coupling;
    let sf = coeff_f(spec.omega, spec.coupling, p).sqrt();
    let num = (w2 * coeff_a(p) + k2 * coeff_b(p) - coeff_c(p) * sf) * coeff_g(p);
    let den = (5.0 * coeff_d(p) * w2 + coeff_e(p) * k2 + sf) * coeff_h(p);
    num / den
}

/// First time at which the minus-branch measurement probability peaks:
///
///   t* = (4/ν)·arccos{ (1/(2√2))·√[(ω²I + K²J − √F)/(K²H)] }.
pub fn peak_probability_time(spec: &GibbsSpec) -> Result<f64> {
    if spec.coupling == 0.0 {
        return Err(Error::DomainError { what: "coupling", value: 0.0 });
    }
    let p = spec.p;
    let w2 = spec.omega * spec.omega;
    let k2 = spec.coupling * spec.coupling;
    let sf = coeff_f(spec.omega, spec.coupling, p).sqrt();
    // squared arccos argument: the quadratic's root in cos²(θ/2)
    let y = (w2 * coeff_i(p) + k2 * coeff_j(p) - sf) / (8.0 * k2 * coeff_h(p));
    if !(-tol::ARCCOS_CLAMP..=1.0 + tol::ARCCOS_CLAMP).contains(&y) {
        return Err(Error::DomainError { what: "arccos argument", value: y });
    }
    Ok(4.0 / spec.nu() * y.clamp(0.0, 1.0).sqrt().acos())
}

/// Best excited population reachable by two consecutive classical contacts:
///
///   g(p) = [ω⁴(1−p) + 2ω²K²(1−p) + K⁴p] / (ω² + K²)².
pub fn g_of_p(spec: &GibbsSpec) -> f64 {
    let q = 1.0 - spec.p;
    let w2 = spec.omega * spec.omega;
    let k2 = spec.coupling * spec.coupling;
    (w2 * w2 * q + 2.0 * w2 * k2 * q + k2 * k2 * spec.p) / (w2 + k2).powi(2)
}

/// Population-inversion bound h(p) = 1 − p: the ceiling for repeated
/// classical thermal contacts.
pub fn h_of_p(p: f64) -> f64 {
    1.0 - p
}

/// Weak-coupling (ω ≫ K) limit of f:
///
///   f(p) ≈ 1/(1 + (p/(1−p))²) = (1−p)²/((1−p)² + p²).
pub fn weak_coupling_f(p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::DomainError { what: "p", value: p });
    }
    let r = p / (1.0 - p);
    Ok(1.0 / (1.0 + r * r))
}

/// Global maximum of the minus-branch excited population over time:
/// (p−1)²/(1 + 2p(p−1)), approached as t → 2π/ν where the branch
/// probability itself vanishes.
pub fn global_max_population(p: f64) -> f64 {
    (p - 1.0) * (p - 1.0) / (1.0 + 2.0 * p * (p - 1.0))
}

/// The time 2π/√(ω² + K²) at which the global population maximum sits.
pub fn global_max_time(spec: &GibbsSpec) -> f64 {
    2.0 * PI / spec.nu()
}
