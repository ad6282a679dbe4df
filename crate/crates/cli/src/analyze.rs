//! Full pipeline report for one interferometer configuration.

use std::io::Write;

use pathent::channel::{apply_channel, kraus_from_coefficients};
use pathent::gravity::{gravity_coefficients, phase_analytic, phase_numeric, PhaseTable};
use pathent::separability::{channel_separability_verdict, inseparability_measure, negativity, Verdict};
use pathent::state::{pure_product_state, uniform_superposition};
use pathent::DEFAULT_TOL;

use crate::config::AnalyzeConfig;
use crate::format::{csv_float, sig6, sig6_list};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeReport {
    pub config: AnalyzeConfig,
    pub analytic: PhaseTable,
    pub numeric: PhaseTable,
    pub max_relative_discrepancy: f64,
    /// Which table drives the channel.
    pub used_numeric: bool,
    pub eigenvalues: Vec<f64>,
    pub kraus_rank: usize,
    pub negativity: f64,
    pub v: f64,
    pub verdict: Verdict,
    pub witness: Option<f64>,
}

pub fn analyze(config: &AnalyzeConfig, use_numeric_phases: bool) -> Result<AnalyzeReport, CliError> {
    let cfg = config.interferometer()?;
    let analytic = phase_analytic(&cfg)?;
    let numeric = phase_numeric(&cfg, config.integrator_eps)?;
    let phases = if use_numeric_phases { numeric } else { analytic };
    let e = gravity_coefficients(&phases)?;
    let kraus = kraus_from_coefficients(&e)?;
    let input = pure_product_state(&uniform_superposition(2)?, &uniform_superposition(2)?);
    let verdict = channel_separability_verdict(&e, DEFAULT_TOL)?;
    Ok(AnalyzeReport {
        config: *config,
        analytic,
        numeric,
        max_relative_discrepancy: numeric.max_relative_discrepancy(&analytic),
        used_numeric: use_numeric_phases,
        eigenvalues: e.eigenvalues()?,
        kraus_rank: kraus.len(),
        negativity: negativity(&apply_channel(&e, &input)?)?.value,
        v: inseparability_measure(&e)?.value,
        verdict: verdict.tag,
        witness: verdict.witness,
    })
}

fn phase_line(p: &PhaseTable) -> String {
    let [ll, lr, rl, rr] = p.to_basis_order();
    format!(
        "LL = {}, LR = {}, RL = {}, RR = {}",
        sig6(ll),
        sig6(lr),
        sig6(rl),
        sig6(rr)
    )
}

impl AnalyzeReport {
    pub fn write_human(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let c = &self.config;
        writeln!(
            out,
            "configuration: coupling = {}, separation = {}, arm = {}, hold_time = {}, ramp_time = {}",
            sig6(c.coupling),
            sig6(c.separation),
            sig6(c.arm),
            sig6(c.hold_time),
            sig6(c.ramp_time)
        )?;
        writeln!(out, "phases (analytic): {}", phase_line(&self.analytic))?;
        writeln!(out, "phases (numeric):  {}", phase_line(&self.numeric))?;
        writeln!(out, "max relative discrepancy: {}", sig6(self.max_relative_discrepancy))?;
        let used = if self.used_numeric {
            &self.numeric
        } else {
            &self.analytic
        };
        writeln!(
            out,
            "entangling phase ({}): {}",
            if self.used_numeric { "numeric" } else { "analytic" },
            sig6(used.entangling_phase())
        )?;
        writeln!(out, "coefficient eigenvalues: {}", sig6_list(&self.eigenvalues))?;
        writeln!(out, "Kraus rank: {}", self.kraus_rank)?;
        writeln!(out, "negativity of output: {}", sig6(self.negativity))?;
        writeln!(out, "inseparability measure: {}", sig6(self.v))?;
        match self.witness {
            Some(w) => writeln!(out, "channel verdict: {} (witness {})", self.verdict, sig6(w)),
            None => writeln!(out, "channel verdict: {}", self.verdict),
        }
    }

    pub fn csv_header(&self) -> String {
        let mut cols: Vec<String> = Vec::new();
        for kind in ["analytic", "numeric"] {
            for ab in ["LL", "LR", "RL", "RR"] {
                cols.push(format!("phi_{ab}_{kind}"));
            }
        }
        cols.push("max_relative_discrepancy".into());
        cols.extend((0..self.eigenvalues.len()).map(|k| format!("eigenvalue_{k}")));
        cols.extend(["kraus_rank", "negativity", "v", "verdict", "witness"].map(String::from));
        cols.join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut fields: Vec<String> = self
            .analytic
            .to_basis_order()
            .iter()
            .chain(&self.numeric.to_basis_order())
            .chain(std::iter::once(&self.max_relative_discrepancy))
            .chain(&self.eigenvalues)
            .map(|x| csv_float(*x))
            .collect();
        fields.push(self.kraus_rank.to_string());
        fields.push(csv_float(self.negativity));
        fields.push(csv_float(self.v));
        fields.push(self.verdict.to_string());
        fields.push(self.witness.map(csv_float).unwrap_or_default());
        fields.join(",")
    }
}

pub fn cmd_analyze(
    path: &std::path::Path,
    use_numeric_phases: bool,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> Result<(), CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let config = crate::config::parse_config(&text).map_err(|source| CliError::Config {
        path: path.display().to_string(),
        source,
    })?;
    let report = analyze(&config, use_numeric_phases)?;
    report.write_human(diag)?;
    writeln!(out, "{}", report.csv_header())?;
    writeln!(out, "{}", report.csv_row())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn config(coupling: f64, separation: f64, arm: f64) -> AnalyzeConfig {
        AnalyzeConfig {
            coupling,
            separation,
            arm,
            hold_time: 1.0,
            ramp_time: 1e-3,
            integrator_eps: 1e-9,
        }
    }

    #[test]
    fn half_pi_configuration_is_maximally_entangling() {
        let r = analyze(&config(3.0 * PI, 2.0, 1.0), false).unwrap();
        assert!((r.negativity - 0.5).abs() < 1e-10);
        assert!((r.v - 2.0).abs() < 1e-10);
        assert_eq!(r.verdict, Verdict::Entangled);
        assert_eq!(r.kraus_rank, 1);
        assert!(r.max_relative_discrepancy < 3e-3);
        let eig = &r.eigenvalues;
        assert!((eig[3] - 4.0).abs() < 1e-12 && eig[0].abs() < 1e-12);
    }

    #[test]
    fn tiny_arm_gives_tiny_numbers() {
        let r = analyze(&config(1.0, 1.0, 1e-6), false).unwrap();
        assert!(r.negativity < 1e-5);
        assert!(r.v < 1e-5);
        assert_eq!(r.verdict == Verdict::Separable, r.v <= DEFAULT_TOL);
    }

    #[test]
    fn csv_columns_line_up() {
        let r = analyze(&config(1.0, 3.0, 1.0), true).unwrap();
        let h = r.csv_header().split(',').count();
        assert_eq!(h, r.csv_row().split(',').count());
        assert_eq!(h, 8 + 1 + 4 + 5);
    }

    #[test]
    fn separation_must_exceed_arm() {
        let err = analyze(&config(1.0, 1.0, 1.0), false).unwrap_err();
        assert!(err.to_string().contains("must exceed arm"));
    }
}
