//! SWAP: an inseparable channel that never entangles separable inputs.

use std::io::Write;

use pathent::separability::{swap_demo_with, SwapDemo, Verdict};

use crate::format::sig6;
use crate::CliError;

/// Verdict line, e.g.
/// `Choi: Entangled (witness < 0); non-entangling: 50/50; population-preserving: NO`.
pub fn summary_line(d: &SwapDemo) -> String {
    let witness = match d.choi_verdict.witness {
        Some(w) if w < 0.0 => "witness < 0".to_string(),
        Some(w) => format!("witness = {}", sig6(w)),
        None => "no witness".to_string(),
    };
    format!(
        "Choi: {} ({witness}); non-entangling: {}/{}; population-preserving: {}",
        d.choi_verdict.tag,
        d.preserved,
        d.inputs,
        if d.population_preserving { "YES" } else { "NO" }
    )
}

pub fn cmd_swap_demo(dim: usize, inputs: usize, seed: u64, out: &mut dyn Write) -> Result<(), CliError> {
    let d = swap_demo_with(dim, inputs, seed)?;
    writeln!(out, "{}", summary_line(&d))?;
    if let Some(w) = d.choi_verdict.witness {
        writeln!(
            out,
            "Choi witness (normalized, min eigenvalue of partial transpose): {}",
            sig6(w)
        )?;
    }
    if let Some(e) = &d.gate_error {
        writeln!(out, "population gate: {e}")?;
    }
    let expected = d.choi_verdict.tag == Verdict::Entangled && d.preserved_separability && !d.population_preserving;
    if !expected {
        return Err(CliError::Violation("SWAP demonstration did not reproduce".into()));
    }
    Ok(())
}
