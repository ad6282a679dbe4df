//! Two masses, each split over a left and a right path, interacting through
//! a Newtonian `1/r` potential.
//!
//! Particle A sits at `x^a(t)` and particle B at `x^b(t) + D`, where each
//! branch ramps outwards at speed `v = L / 2τ` for a time `τ`, holds at
//! `±L/2` for a time `T` and ramps back. The common transverse drift cancels
//! in the separation and is not modelled. With `ħ = 1`, branch pair `(a, b)`
//! accumulates the phase
//!
//! ```text
//! Φ_ab = ∫_0^{T+2τ} κ / |x^a(t) - x^b(t) - D| dt,   κ = G m_A m_B,
//! ```
//!
//! which for `T >> τ` is dominated by the hold, `κT / (D + (ε_b - ε_a) L/2)`
//! with `ε_L = -1`, `ε_R = +1`.

use std::f64::consts::PI;

use crate::channel::CoefficientMatrix;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_piecewise, DEFAULT_MAX_DEPTH};

pub use crate::quadrature::DEFAULT_EPS as DEFAULT_INTEGRATOR_EPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    L,
    R,
}

impl Branch {
    pub const ALL: [Branch; 2] = [Branch::L, Branch::R];

    /// Displacement sign: `L ↦ -1`, `R ↦ +1`.
    pub fn sign(self) -> f64 {
        match self {
            Branch::L => -1.0,
            Branch::R => 1.0,
        }
    }

    /// Path-basis label: `L ↦ 0`, `R ↦ 1`.
    pub fn index(self) -> usize {
        match self {
            Branch::L => 0,
            Branch::R => 1,
        }
    }
}

/// Geometry and coupling of the two interferometers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerConfig {
    /// `κ = G m_A m_B`.
    pub coupling: f64,
    /// `D`, distance between the two interferometer centres.
    pub separation: f64,
    /// `L`, full splitting of each superposition.
    pub arm: f64,
    /// `T`.
    pub hold_time: f64,
    /// `τ`.
    pub ramp_time: f64,
}

impl InterferometerConfig {
    pub fn new(coupling: f64, separation: f64, arm: f64, hold_time: f64, ramp_time: f64) -> Result<Self> {
        let cfg = Self {
            coupling,
            separation,
            arm,
            hold_time,
            ramp_time,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Unit separation and hold time, `κ = πθ` (so `θ = κT / πD`),
    /// `L = ratio` and `τ = tau_over_t`.
    pub fn from_dimensionless(theta: f64, ratio: f64, tau_over_t: f64) -> Result<Self> {
        Self::new(PI * theta, 1.0, ratio, 1.0, tau_over_t)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("coupling", self.coupling),
            ("separation", self.separation),
            ("arm", self.arm),
            ("hold_time", self.hold_time),
            ("ramp_time", self.ramp_time),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidConfig(format!("{name} must be finite")));
        }
        if self.coupling < 0.0 {
            return Err(Error::InvalidConfig("coupling must be non-negative".into()));
        }
        if let Some((name, _)) = fields[1..].iter().find(|(_, v)| *v <= 0.0) {
            return Err(Error::InvalidConfig(format!("{name} must be positive")));
        }
        if self.separation <= self.arm {
            return Err(Error::InvalidConfig(format!(
                "separation D = {} must exceed arm L = {}: the R-L branches would meet and the hold phase κT/(D - L) diverges",
                self.separation, self.arm
            )));
        }
        Ok(())
    }

    /// `v = L / 2τ`.
    pub fn velocity(&self) -> f64 {
        self.arm / (2.0 * self.ramp_time)
    }

    /// `T + 2τ`.
    pub fn total_time(&self) -> f64 {
        self.hold_time + 2.0 * self.ramp_time
    }

    /// Displacement `x^a(t)` of a branch from its starting point.
    pub fn displacement(&self, branch: Branch, t: f64) -> f64 {
        let v = self.velocity();
        let tau = self.ramp_time;
        let hold_end = self.hold_time + tau;
        let s = if t <= tau {
            v * t
        } else if t <= hold_end {
            v * tau
        } else {
            v * (hold_end - t) + v * tau
        };
        branch.sign() * s
    }

    /// `|x_A^a(t) - x_B^b(t)|`.
    pub fn distance(&self, a: Branch, b: Branch, t: f64) -> f64 {
        (self.displacement(a, t) - self.displacement(b, t) - self.separation).abs()
    }
}

/// Accumulated phases `Φ_ab` for `a, b ∈ {L, R}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTable {
    pub phi: [[f64; 2]; 2],
}

impl PhaseTable {
    pub fn new(ll: f64, lr: f64, rl: f64, rr: f64) -> Self {
        Self {
            phi: [[ll, lr], [rl, rr]],
        }
    }

    pub fn get(&self, a: Branch, b: Branch) -> f64 {
        self.phi[a.index()][b.index()]
    }

    /// Phases in path-basis order `LL, LR, RL, RR`.
    pub fn to_basis_order(&self) -> [f64; 4] {
        [self.phi[0][0], self.phi[0][1], self.phi[1][0], self.phi[1][1]]
    }

    /// `ΔΦ = Φ_LR + Φ_RL - Φ_LL - Φ_RR`, the only combination that is not
    /// removable by local phases.
    pub fn entangling_phase(&self) -> f64 {
        self.phi[0][1] + self.phi[1][0] - self.phi[0][0] - self.phi[1][1]
    }

    /// Largest `|self - reference| / |reference|` over all branch pairs.
    pub fn max_relative_discrepancy(&self, reference: &PhaseTable) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let r = reference.phi[i][j];
                let d = (self.phi[i][j] - r).abs();
                worst = worst.max(if r != 0.0 { d / r.abs() } else { d });
            }
        }
        worst
    }
}

/// Hold-stage phases `κT / (D + (ε_b - ε_a) L/2)` for a given `κT`.
pub fn hold_phases(coupling_time: f64, separation: f64, arm: f64) -> PhaseTable {
    let mut phi = [[0.0; 2]; 2];
    for a in Branch::ALL {
        for b in Branch::ALL {
            phi[a.index()][b.index()] = coupling_time / (separation + (b.sign() - a.sign()) * arm / 2.0);
        }
    }
    PhaseTable { phi }
}

/// Large-`T` phases, neglecting the ramps.
pub fn phase_analytic(c: &InterferometerConfig) -> Result<PhaseTable> {
    c.validate()?;
    Ok(hold_phases(c.coupling * c.hold_time, c.separation, c.arm))
}

/// Phases integrated over the full trajectory (ramp out, hold, ramp back),
/// each segment handled separately by adaptive Simpson to relative `eps`.
pub fn phase_numeric(c: &InterferometerConfig, eps: f64) -> Result<PhaseTable> {
    c.validate()?;
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "integrator eps must be positive, got {eps}"
        )));
    }
    let tau = c.ramp_time;
    let breaks = [0.0, tau, c.hold_time + tau, c.total_time()];
    let mut phi = [[0.0; 2]; 2];
    for a in Branch::ALL {
        for b in Branch::ALL {
            let kappa = c.coupling;
            phi[a.index()][b.index()] =
                integrate_piecewise(|t| kappa / c.distance(a, b, t), &breaks, eps, DEFAULT_MAX_DEPTH)?;
        }
    }
    Ok(PhaseTable { phi })
}

/// `ℰ_{ab a'b'} = e^{i(Φ_ab - Φ_a'b')}`: the rank-one coefficient matrix of
/// the phase-only evolution.
pub fn gravity_coefficients(p: &PhaseTable) -> Result<CoefficientMatrix> {
    CoefficientMatrix::unitary_dephaser(2, 2, &p.to_basis_order())
}

/// `(1/2) |sin(ΔΦ / 2)|` for the uniform product input.
pub fn negativity_closed_form(p: &PhaseTable) -> f64 {
    0.5 * (0.5 * p.entangling_phase()).sin().abs()
}

/// `2 |sin(ΔΦ / 2)|`.
pub fn measure_closed_form(p: &PhaseTable) -> f64 {
    2.0 * (0.5 * p.entangling_phase()).sin().abs()
}
