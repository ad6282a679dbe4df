//! Coupling sweeps in dimensionless units `θ = κT/(πD)`, `r = L/D`.

use std::io::Write;

use pathent::channel::apply_channel;
use pathent::gravity::{
    gravity_coefficients, negativity_closed_form, phase_analytic, phase_numeric, InterferometerConfig, PhaseTable,
    DEFAULT_INTEGRATOR_EPS,
};
use pathent::separability::{inseparability_measure, negativity};
use pathent::state::{pure_product_state, uniform_superposition};

use crate::format::csv_float;
use crate::CliError;

pub const SWEEP_HEADER: &str =
    "theta,phi_LL,phi_LR,phi_RL,phi_RR,negativity_closed,negativity_pipeline,v_closed,v_pipeline";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub theta_min: f64,
    pub theta_max: f64,
    /// Number of intervals; the grid has `steps + 1` points including both ends.
    pub steps: usize,
    pub ratio: f64,
    pub use_numeric_phases: bool,
    /// `τ/T`, used only with numeric phases.
    pub tau_over_t: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            theta_min: 0.0,
            theta_max: 4.0,
            steps: 400,
            ratio: 0.5,
            use_numeric_phases: false,
            tau_over_t: 1e-3,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Usage(m));
        if !(self.theta_min.is_finite() && self.theta_max.is_finite()) || self.theta_min >= self.theta_max {
            return bad(format!(
                "theta range must satisfy theta-min < theta-max, got [{}, {}]",
                self.theta_min, self.theta_max
            ));
        }
        if self.theta_min < 0.0 {
            return bad("theta-min must be non-negative".into());
        }
        if self.steps == 0 {
            return bad("steps must be positive".into());
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return bad(format!("ratio must lie in (0, 1), got {}", self.ratio));
        }
        if !(self.tau_over_t > 0.0 && self.tau_over_t.is_finite()) {
            return bad(format!("tau-over-t must be positive, got {}", self.tau_over_t));
        }
        Ok(())
    }

    pub fn theta(&self, i: usize) -> f64 {
        if i == self.steps {
            return self.theta_max;
        }
        self.theta_min + (self.theta_max - self.theta_min) * i as f64 / self.steps as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub phases: PhaseTable,
    pub negativity_closed: f64,
    pub negativity_pipeline: f64,
    pub v_closed: f64,
    pub v_pipeline: f64,
}

impl SweepRow {
    pub fn csv(&self) -> String {
        let p = self.phases.to_basis_order();
        [
            self.theta,
            p[0],
            p[1],
            p[2],
            p[3],
            self.negativity_closed,
            self.negativity_pipeline,
            self.v_closed,
            self.v_pipeline,
        ]
        .iter()
        .map(|x| csv_float(*x))
        .collect::<Vec<_>>()
        .join(",")
    }
}

/// Evaluates one point: closed forms from the phase table, pipeline values
/// by building `ℰ`, pushing the uniform product state through it and
/// eigensolving partial transposes.
pub fn sweep_point(spec: &SweepSpec, theta: f64) -> Result<SweepRow, CliError> {
    let cfg = InterferometerConfig::from_dimensionless(theta, spec.ratio, spec.tau_over_t)?;
    let phases = if spec.use_numeric_phases {
        phase_numeric(&cfg, DEFAULT_INTEGRATOR_EPS)?
    } else {
        phase_analytic(&cfg)?
    };
    let e = gravity_coefficients(&phases)?;
    let input = pure_product_state(&uniform_superposition(2)?, &uniform_superposition(2)?);
    let output = apply_channel(&e, &input)?;
    let negativity_closed = negativity_closed_form(&phases);
    Ok(SweepRow {
        theta,
        phases,
        negativity_closed,
        negativity_pipeline: negativity(&output)?.value,
        v_closed: 4.0 * negativity_closed,
        v_pipeline: inseparability_measure(&e)?.value,
    })
}

pub fn sweep_rows(spec: &SweepSpec) -> Result<Vec<SweepRow>, CliError> {
    spec.validate()?;
    (0..=spec.steps).map(|i| sweep_point(spec, spec.theta(i))).collect()
}

pub fn write_sweep_csv(rows: &[SweepRow], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv())?;
    }
    Ok(())
}

pub fn cmd_sweep(spec: &SweepSpec, out: &mut dyn Write) -> Result<(), CliError> {
    let rows = sweep_rows(spec)?;
    write_sweep_csv(&rows, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hits_endpoints() {
        let s = SweepSpec::default();
        assert_eq!(s.theta(0), 0.0);
        assert_eq!(s.theta(150), 1.5);
        assert_eq!(s.theta(400), 4.0);
    }

    #[test]
    fn zero_coupling_row() {
        let row = sweep_point(&SweepSpec::default(), 0.0).unwrap();
        assert_eq!(row.phases.to_basis_order(), [0.0; 4]);
        assert_eq!(row.negativity_closed, 0.0);
        assert!(row.negativity_pipeline.abs() < 1e-15);
        assert!(row.v_pipeline.abs() < 1e-15);
    }

    #[test]
    fn peak_row() {
        let row = sweep_point(&SweepSpec::default(), 1.5).unwrap();
        assert!((row.negativity_closed - 0.5).abs() < 1e-12);
        assert!((row.negativity_pipeline - 0.5).abs() < 1e-9);
        assert!((row.v_pipeline - 2.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_specs() {
        let base = SweepSpec::default();
        for s in [
            SweepSpec { theta_max: 0.0, ..base },
            SweepSpec { steps: 0, ..base },
            SweepSpec { ratio: 1.0, ..base },
            SweepSpec { ratio: 0.0, ..base },
            SweepSpec {
                tau_over_t: 0.0,
                ..base
            },
        ] {
            assert!(matches!(s.validate(), Err(CliError::Usage(_))));
        }
    }
}
