//! Bipartite states on the joint path basis.
//!
//! The joint basis is ordered `|a⟩|b⟩ ↦ a * d_B + b` with zero-based path
//! labels; for two-path particles `L ↦ 0` and `R ↦ 1`. Every module goes
//! through [`basis_index`] and [`split_index`] for this mapping.

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigensolve, ComplexMatrix, C64, DEFAULT_TOL};
use crate::random::{dirichlet_weights, ginibre_density, haar_pure_state, rng_from_seed};

/// Tolerance on the squared norm of amplitude vectors and on unit traces.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[inline]
pub fn basis_index(a: usize, b: usize, dim_b: usize) -> usize {
    a * dim_b + b
}

#[inline]
pub fn split_index(index: usize, dim_b: usize) -> (usize, usize) {
    (index / dim_b, index % dim_b)
}

/// Normalized amplitudes of one particle over its paths.
#[derive(Debug, Clone, PartialEq)]
pub struct PathAmplitudes {
    amplitudes: Vec<C64>,
}

impl PathAmplitudes {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension("amplitude vector is empty".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.amplitudes
    }
}

/// Equal-weight superposition `1/√d` over `d` paths.
pub fn uniform_superposition(d: usize) -> Result<PathAmplitudes> {
    if d == 0 {
        return Err(Error::InvalidDimension("number of paths must be at least 1".into()));
    }
    let amp = 1.0 / (d as f64).sqrt();
    Ok(PathAmplitudes {
        amplitudes: vec![c(amp, 0.0); d],
    })
}

/// Validated density operator on `C^{d_A} ⊗ C^{d_B}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dim_a: usize,
    dim_b: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Wraps a matrix already known to be a state (e.g. a Schur product of a
    /// state with a unit-diagonal PSD matrix).
    pub(crate) fn from_trusted(dim_a: usize, dim_b: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.shape(), (dim_a * dim_b, dim_a * dim_b));
        Self { dim_a, dim_b, matrix }
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

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Joint path populations `Tr[Π_a ⊗ Π_b ρ]`, indexed by `a * d_B + b`.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn population(&self, a: usize, b: usize) -> f64 {
        let i = basis_index(a, b, self.dim_b);
        self.matrix[(i, i)].re
    }
}

/// Checks Hermiticity, unit trace and positivity, reporting the first
/// violated condition.
pub fn validate_density(m: &ComplexMatrix, dim_a: usize, dim_b: usize, tol: f64) -> Result<DensityOperator> {
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
    let trace = m.trace();
    if (trace.re - 1.0).abs() > tol.max(NORMALIZATION_TOL) || trace.im.abs() > tol.max(NORMALIZATION_TOL) {
        return Err(Error::TraceNotUnit { trace: trace.re });
    }
    let eig = hermitian_eigensolve(&herm, tol)?;
    if eig.min_eigenvalue() < -tol * herm.frobenius_norm() {
        return Err(Error::NotPositive {
            min_eigenvalue: eig.min_eigenvalue(),
        });
    }
    Ok(DensityOperator {
        dim_a,
        dim_b,
        matrix: herm,
    })
}

/// `|ψ⟩⟨ψ| ⊗ |φ⟩⟨φ|` for normalized path amplitudes.
pub fn pure_product_state(psi: &PathAmplitudes, phi: &PathAmplitudes) -> DensityOperator {
    let joint: Vec<C64> = psi
        .as_slice()
        .iter()
        .flat_map(|&x| phi.as_slice().iter().map(move |&y| x * y))
        .collect();
    DensityOperator {
        dim_a: psi.dim(),
        dim_b: phi.dim(),
        matrix: ComplexMatrix::outer(&joint),
    }
}

/// Convex mixture `Σ_k p_k ρ_k ⊗ σ_k` of product states.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductStateEnsemble {
    pub weights: Vec<f64>,
    pub factors: Vec<(ComplexMatrix, ComplexMatrix)>,
}

impl ProductStateEnsemble {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

fn check_local_state(m: &ComplexMatrix, which: &str, k: usize) -> Result<()> {
    let d = m.require_square()?;
    validate_density(m, d, 1, DEFAULT_TOL)
        .map(|_| ())
        .map_err(|e| Error::InvalidEnsemble(format!("factor {which}[{k}]: {e}")))
}

pub fn assemble_separable(e: &ProductStateEnsemble) -> Result<DensityOperator> {
    if e.is_empty() {
        return Err(Error::InvalidEnsemble("ensemble has no terms".into()));
    }
    if e.weights.len() != e.factors.len() {
        return Err(Error::InvalidEnsemble(format!(
            "{} weights for {} factor pairs",
            e.weights.len(),
            e.factors.len()
        )));
    }
    if let Some(w) = e.weights.iter().find(|w| w.is_nan() || **w < 0.0) {
        return Err(Error::InvalidEnsemble(format!("negative or NaN weight {w}")));
    }
    let total: f64 = e.weights.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidEnsemble(format!("weights sum to {total}, not 1")));
    }
    let (rho0, sigma0) = &e.factors[0];
    let (dim_a, dim_b) = (rho0.rows(), sigma0.rows());
    let n = dim_a * dim_b;
    let mut acc = ComplexMatrix::zeros(n, n);
    for (k, (p, (rho, sigma))) in e.weights.iter().zip(&e.factors).enumerate() {
        if rho.shape() != (dim_a, dim_a) || sigma.shape() != (dim_b, dim_b) {
            return Err(Error::DimensionMismatch {
                expected: (dim_a, dim_b),
                got: (rho.rows(), sigma.rows()),
            });
        }
        check_local_state(rho, "A", k)?;
        check_local_state(sigma, "B", k)?;
        acc = acc.add(&rho.kron(sigma).scale(*p))?;
    }
    validate_density(&acc, dim_a, dim_b, DEFAULT_TOL)
}

/// Seeded ensemble of `terms` Haar-random pure product states with uniform
/// Dirichlet weights.
pub fn random_separable_state(seed: u64, dim_a: usize, dim_b: usize, terms: usize) -> Result<ProductStateEnsemble> {
    if terms == 0 {
        return Err(Error::InvalidEnsemble("at least one term is required".into()));
    }
    if dim_a == 0 || dim_b == 0 {
        return Err(Error::InvalidDimension("subsystem dimensions must be positive".into()));
    }
    let mut rng = rng_from_seed(seed);
    let weights = dirichlet_weights(&mut rng, terms);
    let factors = (0..terms)
        .map(|_| {
            let a = haar_pure_state(&mut rng, dim_a);
            let b = haar_pure_state(&mut rng, dim_b);
            (ComplexMatrix::outer(&a), ComplexMatrix::outer(&b))
        })
        .collect();
    Ok(ProductStateEnsemble { weights, factors })
}

/// Seeded full-rank mixed state on `C^{d_A} ⊗ C^{d_B}` (Ginibre ensemble).
pub fn random_density(seed: u64, dim_a: usize, dim_b: usize) -> DensityOperator {
    let mut rng = rng_from_seed(seed);
    DensityOperator::from_trusted(dim_a, dim_b, ginibre_density(&mut rng, dim_a * dim_b))
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn basis_state_product() {
        let e0 = PathAmplitudes::from_real(&[1.0, 0.0]).unwrap();
        let rho = pure_product_state(&e0, &e0);
        assert_eq!(*rho.matrix(), ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn uniform_product_has_flat_entries() {
        let u = uniform_superposition(2).unwrap();
        let rho = pure_product_state(&u, &u);
        for z in rho.matrix().as_slice() {
            assert!((z - c(0.25, 0.0)).norm() < 1e-15);
        }
        let sq = rho.matrix().matmul(rho.matrix()).unwrap();
        assert!(sq.max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn uniform_superposition_values() {
        assert_eq!(uniform_superposition(1).unwrap().as_slice(), &[c(1.0, 0.0)]);
        let u2 = uniform_superposition(2).unwrap();
        assert!(u2.as_slice().iter().all(|z| (z.re - H).abs() < 1e-15 && z.im == 0.0));
        let u3 = uniform_superposition(3).unwrap();
        assert!(u3.as_slice().iter().all(|z| (z.re - 1.0 / 3f64.sqrt()).abs() < 1e-16));
        assert!(uniform_superposition(0).is_err());
    }

    #[test]
    fn unnormalized_amplitudes_rejected() {
        assert!(matches!(
            PathAmplitudes::from_real(&[1.0, 1.0]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn assemble_maximally_mixed() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        let e = ProductStateEnsemble {
            weights: vec![1.0],
            factors: vec![(half.clone(), half)],
        };
        let rho = assemble_separable(&e).unwrap();
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale(0.25)) < 1e-15);
    }

    #[test]
    fn assemble_classical_mixture() {
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let e = ProductStateEnsemble {
            weights: vec![0.5, 0.5],
            factors: vec![(p0.clone(), p0), (p1.clone(), p1)],
        };
        let rho = assemble_separable(&e).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]);
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn assemble_rejects_bad_inputs() {
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let bad_weights = ProductStateEnsemble {
            weights: vec![0.5, 0.4],
            factors: vec![(p0.clone(), p0.clone()), (p0.clone(), p0.clone())],
        };
        assert!(matches!(
            assemble_separable(&bad_weights),
            Err(Error::InvalidEnsemble(_))
        ));

        let p3 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]);
        let mismatch = ProductStateEnsemble {
            weights: vec![0.5, 0.5],
            factors: vec![(p0.clone(), p0.clone()), (p3, p0.clone())],
        };
        assert!(matches!(
            assemble_separable(&mismatch),
            Err(Error::DimensionMismatch { .. })
        ));

        let not_state = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        let invalid = ProductStateEnsemble {
            weights: vec![1.0],
            factors: vec![(not_state, p0)],
        };
        assert!(matches!(assemble_separable(&invalid), Err(Error::InvalidEnsemble(_))));
    }

    #[test]
    fn random_ensembles_are_deterministic_and_valid() {
        let a = random_separable_state(11, 2, 3, 4).unwrap();
        let b = random_separable_state(11, 2, 3, 4).unwrap();
        assert_eq!(a, b);
        for seed in 0..100 {
            let e = random_separable_state(seed, 2, 2, 1 + (seed as usize % 5)).unwrap();
            assemble_separable(&e).unwrap();
        }
        assert!(random_separable_state(0, 2, 2, 0).is_err());
    }

    #[test]
    fn validate_density_reports_each_violation() {
        let ok = ComplexMatrix::identity(4).scale(0.25);
        validate_density(&ok, 2, 2, DEFAULT_TOL).unwrap();

        let neg = ComplexMatrix::from_real_diagonal(&[1.5, -0.5, 0.0, 0.0]);
        assert!(matches!(
            validate_density(&neg, 2, 2, DEFAULT_TOL),
            Err(Error::NotPositive { .. })
        ));

        let trace2 = ComplexMatrix::identity(4).scale(0.5);
        assert!(matches!(
            validate_density(&trace2, 2, 2, DEFAULT_TOL),
            Err(Error::TraceNotUnit { .. })
        ));

        let mut skew = ok.clone();
        skew.set(0, 1, c(0.0, 0.1));
        assert!(matches!(
            validate_density(&skew, 2, 2, DEFAULT_TOL),
            Err(Error::NotHermitian { .. })
        ));

        assert!(matches!(
            validate_density(&ok, 2, 3, DEFAULT_TOL),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn basis_index_round_trip() {
        for (da, db) in [(1, 1), (2, 2), (2, 3), (3, 2), (4, 5)] {
            for a in 0..da {
                for b in 0..db {
                    assert_eq!(split_index(basis_index(a, b, db), db), (a, b));
                }
            }
            for i in 0..da * db {
                let (a, b) = split_index(i, db);
                assert_eq!(basis_index(a, b, db), i);
            }
        }
    }

    #[test]
    fn random_density_is_valid() {
        for seed in 0..10 {
            let rho = random_density(seed, 2, 3);
            validate_density(rho.matrix(), 2, 3, DEFAULT_TOL).unwrap();
        }
    }
}
