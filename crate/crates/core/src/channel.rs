//! Population-preserving CPTP channels.
//!
//! A channel on the joint path basis that leaves every joint population
//! `Tr[Π_a ⊗ Π_b ρ]` unchanged is fixed by its coefficient matrix `ℰ`:
//! a Hermitian, positive semidefinite matrix with unit diagonal, indexed by
//! composite labels `(ab), (a'b')`. The channel acts as
//!
//! ```text
//! Φ[ρ]_{(ab),(a'b')} = ℰ_{(ab),(a'b')} ρ_{(ab),(a'b')}
//! ```
//!
//! i.e. a Schur product in the path basis. In and out path kets are
//! identified, so every channel is an endomorphism of one space and each
//! Kraus operator is diagonal in that basis.

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigensolve, ComplexMatrix, C64, DEFAULT_TOL};
use crate::random::{derive_seed, gaussian_matrix, rng_from_seed};
use crate::state::{basis_index, random_density, split_index, DensityOperator, NORMALIZATION_TOL};

/// Eigenvalues of `ℰ` at or below this multiple of `d_A d_B` produce no
/// Kraus operator.
pub const KRAUS_CUTOFF: f64 = 1e-12;

const SAMPLER_RETRIES: u64 = 16;

/// Unit-diagonal PSD matrix `ℰ` parameterizing a population-preserving
/// channel.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    dim_a: usize,
    dim_b: usize,
    matrix: ComplexMatrix,
}

impl CoefficientMatrix {
    /// All-ones matrix: the identity channel.
    pub fn identity_channel(dim_a: usize, dim_b: usize) -> Self {
        let n = dim_a * dim_b;
        Self {
            dim_a,
            dim_b,
            matrix: ComplexMatrix::from_fn(n, n, |_, _| c(1.0, 0.0)),
        }
    }

    /// Identity matrix: complete dephasing in the path basis.
    pub fn full_dephasing(dim_a: usize, dim_b: usize) -> Self {
        Self {
            dim_a,
            dim_b,
            matrix: ComplexMatrix::identity(dim_a * dim_b),
        }
    }

    /// Rank-one `ℰ = z z^dag` with `z_{ab} = e^{i θ_{ab}}`: the channel
    /// `ρ ↦ U ρ U^dag` with diagonal `U = diag(z)`.
    pub fn unitary_dephaser(dim_a: usize, dim_b: usize, phases: &[f64]) -> Result<Self> {
        let n = dim_a * dim_b;
        if phases.len() != n {
            return Err(Error::DimensionMismatch {
                expected: (n, 1),
                got: (phases.len(), 1),
            });
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite { row: 0, col: 0 });
        }
        let z: Vec<C64> = phases.iter().map(|&p| C64::from_polar(1.0, p)).collect();
        let matrix = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(1.0, 0.0)
            } else {
                // e^{i(θ_i - θ_j)} evaluated directly keeps |entry| = 1
                C64::from_polar(1.0, phases[i] - phases[j])
            }
        });
        debug_assert!(matrix.max_abs_diff(&ComplexMatrix::outer(&z)) < 1e-12);
        Ok(Self { dim_a, dim_b, matrix })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    /// `d_A d_B`.
    pub fn size(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Entry `ℰ_{ab a'b'}`.
    pub fn entry(&self, a: usize, b: usize, a2: usize, b2: usize) -> C64 {
        self.matrix[(basis_index(a, b, self.dim_b), basis_index(a2, b2, self.dim_b))]
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigensolve(&self.matrix, DEFAULT_TOL)?.eigenvalues)
    }
}

/// Accepts `m` as a coefficient matrix iff it is Hermitian, has unit
/// diagonal (within 1e-12) and is positive semidefinite.
pub fn validate_coefficients(m: &ComplexMatrix, dim_a: usize, dim_b: usize, tol: f64) -> Result<CoefficientMatrix> {
    if dim_a == 0 || dim_b == 0 {
        return Err(Error::InvalidDimension("subsystem dimensions must be positive".into()));
    }
    let n = m.require_square()?;
    if n != dim_a * dim_b {
        return Err(Error::DimensionMismatch {
            expected: (dim_a * dim_b, dim_a * dim_b),
            got: m.shape(),
        });
    }
    let herm = m.symmetrized(tol)?;
    for (index, z) in m.diagonal().into_iter().enumerate() {
        if (z - c(1.0, 0.0)).norm() > NORMALIZATION_TOL {
            return Err(Error::DiagonalNotUnit { index, value: z.re });
        }
    }
    let eig = hermitian_eigensolve(&herm, tol)?;
    if eig.min_eigenvalue() < -tol * herm.frobenius_norm() {
        return Err(Error::NotPositive {
            min_eigenvalue: eig.min_eigenvalue(),
        });
    }
    Ok(CoefficientMatrix {
        dim_a,
        dim_b,
        matrix: herm,
    })
}

/// Entrywise product `ℰ ∘ ρ` without validating either argument.
pub fn schur_apply(e: &ComplexMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    e.hadamard(rho)
}

/// `Φ[ρ]` for the channel with coefficients `e`.
pub fn apply_channel(e: &CoefficientMatrix, rho: &DensityOperator) -> Result<DensityOperator> {
    if e.dims() != rho.dims() {
        return Err(Error::DimensionMismatch {
            expected: e.dims(),
            got: rho.dims(),
        });
    }
    let out = schur_apply(&e.matrix, rho.matrix())?;
    Ok(DensityOperator::from_trusted(e.dim_a, e.dim_b, out.hermitian_part()))
}

/// Operator-sum representation `Φ[ρ] = Σ_ℓ K_ℓ ρ K_ℓ^dag` on one space.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
    completeness_residual: f64,
}

impl KrausSet {
    /// Accepts square operators of equal size with
    /// `|Σ K^dag K - I|_F <= tol * sqrt(n)`.
    pub fn new(operators: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::InvalidDimension("empty Kraus set".into()))?;
        let n = first.require_square()?;
        for k in &operators {
            if k.shape() != (n, n) {
                return Err(Error::DimensionMismatch {
                    expected: (n, n),
                    got: k.shape(),
                });
            }
        }
        let completeness_residual = completeness_residual(&operators);
        if completeness_residual > tol * (n as f64).sqrt() {
            return Err(Error::Incomplete {
                residual: completeness_residual,
            });
        }
        Ok(Self {
            operators,
            completeness_residual,
        })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Side length of each operator.
    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    pub fn completeness_residual(&self) -> f64 {
        self.completeness_residual
    }

    /// Explicit sum `Σ_ℓ K_ℓ ρ K_ℓ^dag`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for k in &self.operators {
            out = out.add(&k.matmul(rho)?.matmul(&k.dagger())?)?;
        }
        Ok(out)
    }
}

fn completeness_residual(ops: &[ComplexMatrix]) -> f64 {
    let n = ops[0].rows();
    let mut sum = ComplexMatrix::zeros(n, n);
    for k in ops {
        sum = sum
            .add(&k.dagger().matmul(k).expect("square operators"))
            .expect("equal shapes");
    }
    sum.sub(&ComplexMatrix::identity(n))
        .expect("equal shapes")
        .frobenius_norm()
}

/// Kraus operators `K_ℓ = diag(√ν_ℓ v_ℓ)` from the eigendecomposition
/// `ℰ = Σ ν_ℓ v_ℓ v_ℓ^dag`, dropping eigenvalues `ν_ℓ <= 1e-12 d_A d_B`.
///
/// The gauge is the one fixed by the eigensolver; compare channels through
/// their coefficient matrices, not through raw Kraus lists.
pub fn kraus_from_coefficients(e: &CoefficientMatrix) -> Result<KrausSet> {
    let n = e.size();
    let eig = hermitian_eigensolve(&e.matrix, DEFAULT_TOL)?;
    let cutoff = KRAUS_CUTOFF * n as f64;
    let operators: Vec<ComplexMatrix> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &nu)| nu > cutoff)
        .map(|(l, &nu)| {
            let amp = nu.sqrt();
            let diag: Vec<C64> = eig.eigenvectors.column_vec(l).into_iter().map(|z| z * amp).collect();
            ComplexMatrix::from_diagonal(&diag)
        })
        .collect();
    KrausSet::new(operators, 1e-8)
}

/// Gram reconstruction `ℰ_{(ab),(a'b')} = Σ_ℓ k^ℓ_{ab} (k^ℓ_{a'b'})^*` from
/// path-diagonal Kraus operators.
pub fn coefficients_from_kraus(k: &KrausSet, dim_a: usize, dim_b: usize) -> Result<CoefficientMatrix> {
    let n = dim_a * dim_b;
    if k.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: (n, n),
            got: (k.dim(), k.dim()),
        });
    }
    for (operator, op) in k.operators().iter().enumerate() {
        if let Some((row, col)) = op.off_diagonal_position(DEFAULT_TOL) {
            return Err(Error::NotPathDiagonal { operator, row, col });
        }
    }
    if k.completeness_residual() > DEFAULT_TOL * (n as f64).sqrt() {
        return Err(Error::Incomplete {
            residual: k.completeness_residual(),
        });
    }
    let diags: Vec<Vec<C64>> = k.operators().iter().map(|op| op.diagonal()).collect();
    let m = ComplexMatrix::from_fn(n, n, |i, j| diags.iter().map(|d| d[i] * d[j].conj()).sum());
    validate_coefficients(&m, dim_a, dim_b, DEFAULT_TOL)
}

/// Channel image of `|Ψ⟩⟨Ψ|_{AA'} ⊗ |Ψ̃⟩⟨Ψ̃|_{BB'}` with unnormalized
/// maximally entangled references, stored in `A A' B B'` factor order so the
/// `AA' | BB'` cut is a plain bipartition.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    dim_a: usize,
    dim_b: usize,
    matrix: ComplexMatrix,
}

/// Factor order `A B A' B'` → `A A' B B'`.
pub const CHOI_CUT_PERMUTATION: [usize; 4] = [0, 2, 1, 3];

/// Reorders an operator on `A ⊗ B ⊗ A' ⊗ B'` into `A ⊗ A' ⊗ B ⊗ B'`.
pub fn reorder_to_cut(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    m.permute_subsystems(&[dim_a, dim_b, dim_a, dim_b], &CHOI_CUT_PERMUTATION)
}

impl ChoiMatrix {
    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    /// Dimensions of the `AA'` and `BB'` parties.
    pub fn cut_dims(&self) -> (usize, usize) {
        (self.dim_a * self.dim_a, self.dim_b * self.dim_b)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Restriction to the orthonormal frame `|a⟩_A|a⟩_{A'} ⊗ |b⟩_B|b⟩_{B'}`,
    /// indexed by `(ab), (a'b')`.
    pub fn frame_projection(&self) -> ComplexMatrix {
        let (da, db) = (self.dim_a, self.dim_b);
        let n = da * db;
        let frame = ComplexMatrix::from_fn(n * n, n, |row, col| {
            let (a, b) = split_index(col, db);
            let ea = basis_vector(da, a);
            let eb = basis_vector(db, b);
            let v = ea.kron(&ea).kron(&eb).kron(&eb);
            v[(row, 0)]
        });
        frame
            .dagger()
            .matmul(&self.matrix)
            .and_then(|m| m.matmul(&frame))
            .expect("frame dimensions match")
    }

    /// Choi matrix divided by its trace, as a state across `AA' | BB'`.
    pub fn normalized_state(&self) -> Result<DensityOperator> {
        let (ca, cb) = self.cut_dims();
        let tr = self.matrix.trace().re;
        if tr.is_nan() || tr <= 0.0 {
            return Err(Error::TraceNotUnit { trace: tr });
        }
        crate::state::validate_density(&self.matrix.scale(1.0 / tr), ca, cb, DEFAULT_TOL)
    }
}

fn basis_vector(d: usize, k: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, 1, |i, _| if i == k { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// Builds the Choi matrix of an arbitrary channel on `C^{d_A} ⊗ C^{d_B}`.
pub fn choi_of_kraus(k: &KrausSet, dim_a: usize, dim_b: usize) -> Result<ChoiMatrix> {
    let n = dim_a * dim_b;
    if k.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: (n, n),
            got: (k.dim(), k.dim()),
        });
    }
    // Σ_{ab} |ab⟩_{AB} |ab⟩_{A'B'} equals |Ψ⟩_{AA'}|Ψ̃⟩_{BB'} in A B A' B' order
    let omega = ComplexMatrix::from_fn(n * n, 1, |r, _| if r / n == r % n { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let id = ComplexMatrix::identity(n);
    let mut internal = ComplexMatrix::zeros(n * n, n * n);
    for op in k.operators() {
        let v = op.kron(&id).matmul(&omega)?;
        internal = internal.add(&v.matmul(&v.dagger())?)?;
    }
    Ok(ChoiMatrix {
        dim_a,
        dim_b,
        matrix: reorder_to_cut(&internal, dim_a, dim_b)?,
    })
}

/// Where a population-preservation check failed.
#[derive(Debug, Clone, PartialEq)]
pub enum PopulationInput {
    BasisState { a: usize, b: usize },
    RandomState { trial: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationViolation {
    pub input: PopulationInput,
    pub a: usize,
    pub b: usize,
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationCheck {
    pub inputs_checked: usize,
    pub max_deviation: f64,
    pub counterexample: Option<PopulationViolation>,
}

impl PopulationCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Compares every joint population before and after the channel, evaluated
/// through its explicit Kraus sum, on all basis projectors and `trials`
/// seeded mixed states.
pub fn population_check(e: &CoefficientMatrix, trials: usize, seed: u64, tol: f64) -> Result<PopulationCheck> {
    let kraus = kraus_from_coefficients(e)?;
    let (da, db) = e.dims();
    let n = e.size();

    let mut inputs: Vec<(PopulationInput, ComplexMatrix)> = Vec::with_capacity(n + trials);
    for i in 0..n {
        let (a, b) = split_index(i, db);
        let mut diag = vec![0.0; n];
        diag[i] = 1.0;
        inputs.push((
            PopulationInput::BasisState { a, b },
            ComplexMatrix::from_real_diagonal(&diag),
        ));
    }
    for trial in 0..trials {
        let s = derive_seed(seed, trial as u64);
        inputs.push((
            PopulationInput::RandomState { trial, seed: s },
            random_density(s, da, db).into_matrix(),
        ));
    }

    let mut report = PopulationCheck {
        inputs_checked: inputs.len(),
        max_deviation: 0.0,
        counterexample: None,
    };
    for (input, rho) in inputs {
        let out = kraus.apply(&rho)?;
        for i in 0..n {
            let before = rho[(i, i)].re;
            let after = out[(i, i)].re;
            let dev = (after - before).abs();
            report.max_deviation = report.max_deviation.max(dev);
            if dev > tol && report.counterexample.is_none() {
                let (a, b) = split_index(i, db);
                report.counterexample = Some(PopulationViolation {
                    input: input.clone(),
                    a,
                    b,
                    before,
                    after,
                });
            }
        }
    }
    Ok(report)
}

/// Seeded random channel: `ℰ = D^{-1/2} X^dag X D^{-1/2}` with `X` a
/// `rank x d_A d_B` complex Gaussian matrix and `D = diag(X^dag X)`.
pub fn random_ppcptp(seed: u64, dim_a: usize, dim_b: usize, rank: usize) -> Result<CoefficientMatrix> {
    let n = dim_a * dim_b;
    if n == 0 || rank == 0 || rank > n {
        return Err(Error::InvalidDimension(format!(
            "rank {rank} must lie in 1..={n} for dims {dim_a}x{dim_b}"
        )));
    }
    for attempt in 0..SAMPLER_RETRIES {
        let s = if attempt == 0 { seed } else { derive_seed(seed, attempt) };
        let mut rng = rng_from_seed(s);
        let x = gaussian_matrix(&mut rng, rank, n);
        let g = x.dagger().matmul(&x)?;
        let d: Vec<f64> = g.diagonal().iter().map(|z| z.re).collect();
        if d.iter().any(|&v| v < 1e-12) {
            continue;
        }
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(1.0, 0.0)
            } else {
                g[(i, j)] / (d[i].sqrt() * d[j].sqrt())
            }
        });
        return validate_coefficients(&m.hermitian_part(), dim_a, dim_b, DEFAULT_TOL);
    }
    Err(Error::Sampling(format!(
        "no non-degenerate Gram matrix after {SAMPLER_RETRIES} attempts (seed {seed})"
    )))
}
