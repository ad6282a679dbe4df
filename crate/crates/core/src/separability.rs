//! Partial transposition, negativity and separability verdicts for states
//! and for population-preserving channels.
//!
//! The transpose always acts on the first factor (`A`, or `AA'` for Choi
//! matrices). An eigenvalue counts as negative when it lies below
//! `-tol * |M|_F` of the partially transposed matrix `M`.

use std::fmt;

use crate::channel::{apply_channel, choi_of_kraus, coefficients_from_kraus, CoefficientMatrix, KrausSet};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigensolve, ComplexMatrix, DEFAULT_TOL};
use crate::random::derive_seed;
use crate::state::{
    assemble_separable, basis_index, pure_product_state, random_separable_state, uniform_superposition, DensityOperator,
};

/// Largest `d_A d_B` for which a positive partial transpose implies
/// separability.
pub const PPT_EXACT_MAX_DIM: usize = 6;

/// `(M^{T_A})_{(ab),(a'b')} = M_{(a'b),(ab')}`.
pub fn partial_transpose(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    if n != dim_a * dim_b {
        return Err(Error::DimensionMismatch {
            expected: (dim_a * dim_b, dim_a * dim_b),
            got: m.shape(),
        });
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for a in 0..dim_a {
        for b in 0..dim_b {
            for a2 in 0..dim_a {
                for b2 in 0..dim_b {
                    let z = m[(basis_index(a2, b, dim_b), basis_index(a, b2, dim_b))];
                    out.set(basis_index(a, b, dim_b), basis_index(a2, b2, dim_b), z);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Separable,
    Entangled,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Separable => "Separable",
            Verdict::Entangled => "Entangled",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

/// Outcome of the PPT test. `witness` is the smallest eigenvalue of the
/// partial transpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparabilityVerdict {
    pub tag: Verdict,
    pub witness: Option<f64>,
}

/// Sum of the magnitudes of the negative eigenvalues of a partial transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct NegativityReport {
    pub value: f64,
    pub negative_eigenvalues: Vec<f64>,
}

/// Negativity functional of `m` across the `d_A | d_B` cut, without any
/// state or channel validation.
pub fn negativity_of_matrix(m: &ComplexMatrix, dim_a: usize, dim_b: usize, tol: f64) -> Result<NegativityReport> {
    let pt = partial_transpose(m, dim_a, dim_b)?;
    let eig = hermitian_eigensolve(&pt, tol)?;
    let threshold = -tol * pt.frobenius_norm();
    let negative_eigenvalues: Vec<f64> = eig.eigenvalues.into_iter().filter(|&x| x < threshold).collect();
    let value = negative_eigenvalues.iter().fold(0.0, |acc, x| acc + x.abs());
    Ok(NegativityReport {
        value,
        negative_eigenvalues,
    })
}

pub fn negativity(rho: &DensityOperator) -> Result<NegativityReport> {
    negativity_of_matrix(rho.matrix(), rho.dim_a(), rho.dim_b(), DEFAULT_TOL)
}

/// PPT test. Separability is only claimed where PPT is sufficient
/// (`d_A d_B <= 6`).
pub fn ppt_verdict(rho: &DensityOperator, tol: f64) -> Result<SeparabilityVerdict> {
    let pt = partial_transpose(rho.matrix(), rho.dim_a(), rho.dim_b())?;
    let min = hermitian_eigensolve(&pt, tol)?.min_eigenvalue();
    let tag = if min < -tol * pt.frobenius_norm() {
        Verdict::Entangled
    } else if rho.dim_a() * rho.dim_b() <= PPT_EXACT_MAX_DIM {
        Verdict::Separable
    } else {
        Verdict::Inconclusive
    };
    Ok(SeparabilityVerdict {
        tag,
        witness: Some(min),
    })
}

/// Inseparability measure `𝒱`: negativity functional of `ℰ^{T_A}`.
pub fn inseparability_measure(e: &CoefficientMatrix) -> Result<NegativityReport> {
    negativity_of_matrix(e.matrix(), e.dim_a(), e.dim_b(), DEFAULT_TOL)
}

/// Separability of the channel itself: the PPT test applied to
/// `ℰ / (d_A d_B)`, which coincides with the normalized Choi matrix
/// restricted to its reference frame.
pub fn channel_separability_verdict(e: &CoefficientMatrix, tol: f64) -> Result<SeparabilityVerdict> {
    let state = DensityOperator::from_trusted(e.dim_a(), e.dim_b(), e.matrix().scale(1.0 / e.size() as f64));
    ppt_verdict(&state, tol)
}

/// Cross-check between channel inseparability and entanglement generation
/// on the uniform product input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglingAudit {
    /// `𝒱(ℰ)`.
    pub v: f64,
    /// Negativity of `Φ[ρ_uniform]`.
    pub n_out: f64,
    pub consistent: bool,
    /// False when `d_A d_B > 6`; only the implication `𝒱 > tol ⇒ 𝒩 > tol/(d_A d_B)`
    /// is then checked.
    pub exact: bool,
}

/// Feeds the uniform product state through the channel and compares its
/// negativity with `𝒱`. Consistency requires `𝒱 > tol ⇔ 𝒩 > tol/(d_A d_B)`
/// and `|𝒩 - 𝒱/(d_A d_B)| <= tol`.
pub fn entangling_audit(e: &CoefficientMatrix, tol: f64) -> Result<EntanglingAudit> {
    let (da, db) = e.dims();
    let n = e.size() as f64;
    let rho_in = pure_product_state(&uniform_superposition(da)?, &uniform_superposition(db)?);
    let rho_out = apply_channel(e, &rho_in)?;
    let v = inseparability_measure(e)?.value;
    let n_out = negativity(&rho_out)?.value;

    let exact = e.size() <= PPT_EXACT_MAX_DIM;
    let insep = v > tol;
    let entangling = n_out > tol / n;
    let gate = if exact {
        insep == entangling
    } else {
        !insep || entangling
    };
    let consistent = gate && (n_out - v / n).abs() <= tol;
    Ok(EntanglingAudit {
        v,
        n_out,
        consistent,
        exact,
    })
}

/// `U |i⟩|j⟩ = |j⟩|i⟩` on `C^d ⊗ C^d`.
pub fn swap_unitary(d: usize) -> ComplexMatrix {
    let n = d * d;
    ComplexMatrix::from_fn(n, n, |row, col| {
        let (i, j) = (col / d, col % d);
        if row == j * d + i {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapDemo {
    pub dim: usize,
    /// PPT verdict on the normalized Choi matrix across `AA' | BB'`.
    pub choi_verdict: SeparabilityVerdict,
    pub inputs: usize,
    /// Separable inputs whose image is not detected as entangled.
    pub preserved: usize,
    pub preserved_separability: bool,
    /// Whether SWAP passes the population-preserving (path-diagonal) gate.
    pub population_preserving: bool,
    pub gate_error: Option<Error>,
}

/// The SWAP counterexample with 50 separable inputs from seed 0.
pub fn swap_demo(d: usize) -> Result<SwapDemo> {
    swap_demo_with(d, 50, 0)
}

pub fn swap_demo_with(d: usize, inputs: usize, seed: u64) -> Result<SwapDemo> {
    if d < 2 {
        return Err(Error::InvalidDimension("SWAP demo needs d >= 2".into()));
    }
    let u = swap_unitary(d);
    let kraus = KrausSet::new(vec![u.clone()], DEFAULT_TOL)?;
    let choi = choi_of_kraus(&kraus, d, d)?;
    let choi_verdict = ppt_verdict(&choi.normalized_state()?, DEFAULT_TOL)?;

    let mut preserved = 0;
    for i in 0..inputs {
        let terms = 1 + i % 4;
        let ensemble = random_separable_state(derive_seed(seed, i as u64), d, d, terms)?;
        let rho = assemble_separable(&ensemble)?;
        let out = u.matmul(rho.matrix())?.matmul(&u.dagger())?;
        let out = DensityOperator::from_trusted(d, d, out.hermitian_part());
        if ppt_verdict(&out, DEFAULT_TOL)?.tag != Verdict::Entangled {
            preserved += 1;
        }
    }

    let gate = coefficients_from_kraus(&kraus, d, d);
    Ok(SwapDemo {
        dim: d,
        choi_verdict,
        inputs,
        preserved,
        preserved_separability: preserved == inputs,
        population_preserving: gate.is_ok(),
        gate_error: gate.err(),
    })
}
