//! Checkable forms of the trace-norm estimates used throughout the crate,
//! exposed both as a fuzz surface and as internal guards.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    self, derive_seed, haar_unitary, norm_1_tr, norm_2, psd_sqrt, random_density, random_matrix,
    ComplexMatrix, HermitianOperator, UnitaryMatrix,
};
use crate::tol;

/// Both sides of an inequality lhs ≤ rhs, with the absolute tolerance that
/// was applied. Reports always carry the numbers, never just a boolean, so
/// failed fuzz trials stay reproducible and diagnosable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub ok: bool,
}

impl InequalityReport {
    /// Build a report with the default relative tolerance
    /// 1e−9 · (1 + |rhs|).
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self::with_relative_tolerance(lhs, rhs, tol::REPORT_REL)
    }

    pub fn with_relative_tolerance(lhs: f64, rhs: f64, rel: f64) -> Self {
        let tolerance = rel * (1.0 + rhs.abs());
        let slack = rhs - lhs;
        Self { lhs, rhs, slack, tolerance, ok: slack >= -tolerance }
    }
}

fn require_psd(m: &HermitianOperator) -> Result<()> {
    let spectrum = matcore::hermitian_eigh(m)?;
    let min = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -tol::PSD_EIG_FLOOR {
        return Err(Error::NotPositive(min));
    }
    Ok(())
}

/// ‖h − k‖²_{2,Tr} ≤ ‖h² − k²‖_{1,Tr} for positive h, k.
pub fn check_powers_stormer(
    h: &HermitianOperator,
    k: &HermitianOperator,
) -> Result<InequalityReport> {
    if h.dim() != k.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", h.dim(), k.dim())));
    }
    require_psd(h)?;
    require_psd(k)?;
    let hm = h.matrix();
    let km = k.matrix();
    let lhs = norm_2(&(hm - km), false).powi(2);
    let rhs = norm_1_tr(&(&hm.mul(hm) - &km.mul(km)))?;
    Ok(InequalityReport::new(lhs, rhs))
}

/// ‖uh^{1/2} − h^{1/2}u‖_{2,Tr} ≤ ‖uhu* − h‖₁^{1/2} for unitary u and
/// positive h.
pub fn check_commutator_transfer(
    u: &UnitaryMatrix,
    h: &HermitianOperator,
) -> Result<InequalityReport> {
    if u.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", u.dim(), h.dim())));
    }
    let root = psd_sqrt(h)?;
    let um = u.matrix();
    let lhs = norm_2(&(&um.mul(&root) - &root.mul(um)), false);
    let conj = h.matrix().conjugate_by(um);
    let rhs = norm_1_tr(&(&conj - h.matrix()))?.sqrt();
    Ok(InequalityReport::new(lhs, rhs))
}

/// Cauchy–Schwarz on the Hilbert–Schmidt inner product:
/// |Tr(ab)| ≤ ‖a‖_{2,Tr} ‖b‖_{2,Tr}.
pub fn check_cs_hilbert_schmidt(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<InequalityReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", a.dim(), b.dim())));
    }
    let lhs = matcore::tr_unnormalized(&a.mul(b)).norm();
    let rhs = norm_2(a, false) * norm_2(b, false);
    Ok(InequalityReport::new(lhs, rhs))
}

// ---------------------------------------------------------------------------
// Fuzzing.

/// Which estimate a fuzz run exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuzzCheck {
    PowersStormer,
    CommutatorTransfer,
    CauchySchwarz,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuzzConfig {
    /// Trials cycle over dimensions 2..=max_dim.
    pub max_dim: usize,
    pub trials: u64,
    pub seed: u64,
}

/// One failed trial, enough to reproduce it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuzzFailure {
    pub seed: u64,
    pub dim: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub check: FuzzCheck,
    pub trials: u64,
    pub failures: Vec<FuzzFailure>,
    /// Minimum of rhs − lhs across all trials (f64::INFINITY when no trials
    /// ran).
    pub min_slack: f64,
}

fn trial_dim(cfg: &FuzzConfig, index: u64) -> usize {
    let span = cfg.max_dim.max(2) - 1;
    2 + (index % span as u64) as usize
}

/// Run one seeded trial. The trial seed fully determines the instance.
pub fn fuzz_trial(check: FuzzCheck, dim: usize, seed: u64) -> Result<InequalityReport> {
    match check {
        FuzzCheck::PowersStormer => {
            let h = random_density(dim, derive_seed(seed, 1));
            let k = random_density(dim, derive_seed(seed, 2));
            check_powers_stormer(h.hermitian(), k.hermitian())
        }
        FuzzCheck::CommutatorTransfer => {
            let u = haar_unitary(dim, derive_seed(seed, 1));
            let h = random_density(dim, derive_seed(seed, 2));
            check_commutator_transfer(&u, h.hermitian())
        }
        FuzzCheck::CauchySchwarz => {
            let a = random_matrix(dim, derive_seed(seed, 1));
            let b = random_matrix(dim, derive_seed(seed, 2));
            check_cs_hilbert_schmidt(&a, &b)
        }
    }
}

/// Run `cfg.trials` independent trials (in parallel); failures are reported
/// in trial order regardless of completion order.
pub fn run_fuzz(check: FuzzCheck, cfg: &FuzzConfig) -> Result<FuzzSummary> {
    let reports: Vec<(u64, usize, InequalityReport)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(cfg.seed, t);
            let dim = trial_dim(cfg, t);
            fuzz_trial(check, dim, seed).map(|r| (seed, dim, r))
        })
        .collect::<Result<_>>()?;

    let mut min_slack = f64::INFINITY;
    let mut failures = Vec::new();
    for (seed, dim, report) in reports {
        min_slack = min_slack.min(report.slack);
        if !report.ok {
            failures.push(FuzzFailure { seed, dim, lhs: report.lhs, rhs: report.rhs });
        }
    }
    Ok(FuzzSummary { check, trials: cfg.trials, failures, min_slack })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::Complex64;

    fn diag(entries: &[f64]) -> HermitianOperator {
        HermitianOperator::new(ComplexMatrix::from_real_diag(entries)).unwrap()
    }

    #[test]
    fn powers_stormer_orthogonal_projectors() {
        let h = diag(&[1.0, 0.0]);
        let k = diag(&[0.0, 1.0]);
        let r = check_powers_stormer(&h, &k).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-12);
        assert!((r.rhs - 2.0).abs() < 1e-12);
        assert!(r.ok);
    }

    #[test]
    fn powers_stormer_equal_arguments() {
        let h = diag(&[0.3, 0.7]);
        let r = check_powers_stormer(&h, &h).unwrap();
        assert!(r.lhs.abs() < 1e-15);
        assert!(r.rhs.abs() < 1e-15);
        assert!(r.ok);
    }

    #[test]
    fn powers_stormer_mixed_vs_pure() {
        let h = diag(&[0.5, 0.5]);
        let k = diag(&[1.0, 0.0]);
        let r = check_powers_stormer(&h, &k).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-12);
        assert!((r.rhs - 1.0).abs() < 1e-12);
        assert!(r.ok);
    }

    #[test]
    fn powers_stormer_rejects_negative_input() {
        let h = diag(&[1.0, -0.5]);
        let k = diag(&[0.5, 0.5]);
        assert!(matches!(check_powers_stormer(&h, &k), Err(Error::NotPositive(_))));
    }

    #[test]
    fn powers_stormer_is_symmetric() {
        for seed in 0..20u64 {
            let h = random_density(5, derive_seed(77, seed));
            let k = random_density(5, derive_seed(78, seed));
            let a = check_powers_stormer(h.hermitian(), k.hermitian()).unwrap();
            let b = check_powers_stormer(k.hermitian(), h.hermitian()).unwrap();
            assert!((a.lhs - b.lhs).abs() < 1e-10);
            assert!((a.rhs - b.rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn commutator_transfer_commuting_case() {
        let u = UnitaryMatrix::new(ComplexMatrix::from_real_diag(&[1.0, -1.0])).unwrap();
        let h = diag(&[0.25, 0.75]);
        let r = check_commutator_transfer(&u, &h).unwrap();
        assert!(r.lhs.abs() < 1e-12);
        assert!(r.rhs.abs() < 1e-7, "rhs {}", r.rhs);
        assert!(r.ok);
    }

    #[test]
    fn commutator_transfer_swap_instance() {
        let swap = UnitaryMatrix::new(
            ComplexMatrix::new(
                2,
                vec![
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 0.0),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let h = diag(&[2.0 / 3.0, 1.0 / 3.0]);
        let r = check_commutator_transfer(&swap, &h).unwrap();
        let expected_rhs = (2.0f64 / 3.0).sqrt();
        let expected_lhs = (2.0 - 4.0 * 2.0f64.sqrt() / 3.0).sqrt();
        assert!((r.rhs - expected_rhs).abs() < 1e-12);
        assert!((r.lhs - expected_lhs).abs() < 1e-12);
        assert!(r.ok);
    }

    #[test]
    fn cauchy_schwarz_equality_at_adjoint_pair() {
        let b = random_matrix(4, 5);
        let a = b.adjoint();
        let r = check_cs_hilbert_schmidt(&a, &b).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-10 * (1.0 + r.rhs));
        assert!(r.ok);
    }

    #[test]
    fn cauchy_schwarz_identity_vs_traceless() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let r = check_cs_hilbert_schmidt(&a, &b).unwrap();
        assert!(r.lhs.abs() < 1e-15);
        assert!((r.rhs - 2.0).abs() < 1e-12);
    }

    #[test]
    fn fuzz_smoke_all_checks() {
        let cfg = FuzzConfig { max_dim: 8, trials: 200, seed: 1 };
        for check in [
            FuzzCheck::PowersStormer,
            FuzzCheck::CommutatorTransfer,
            FuzzCheck::CauchySchwarz,
        ] {
            let summary = run_fuzz(check, &cfg).unwrap();
            assert_eq!(summary.trials, 200);
            assert!(summary.failures.is_empty(), "{check:?}: {:?}", summary.failures);
        }
    }

    #[test]
    fn fuzz_zero_trials() {
        let cfg = FuzzConfig { max_dim: 4, trials: 0, seed: 1 };
        let summary = run_fuzz(FuzzCheck::PowersStormer, &cfg).unwrap();
        assert_eq!(summary.trials, 0);
        assert!(summary.failures.is_empty());
        assert!(summary.min_slack.is_infinite());
    }
}
