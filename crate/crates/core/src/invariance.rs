//! Almost-invariant density operators.
//!
//! Given finitely many unitaries u_i with target trace values τ_i, find a
//! density operator h making every conjugation defect ‖u_i h u_i* − h‖₁
//! and trace residual |Tr(h u_i) − τ_i| small. The solver is conditional
//! gradient on the convex objective J over the density-operator set, with a
//! group-style averaging step interleaved every ten iterations.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    hermitian_eigh, norm_1_tr, tr_unnormalized, Complex64, ComplexMatrix, DensityOperator,
    HermitianOperator, UnitaryMatrix,
};

/// Finite set of unitaries with target trace values.
#[derive(Debug, Clone, Serialize)]
pub struct InvarianceProblem {
    unitaries: Vec<UnitaryMatrix>,
    targets: Vec<Complex64>,
}

impl InvarianceProblem {
    pub fn new(unitaries: Vec<UnitaryMatrix>, targets: Vec<Complex64>) -> Result<Self> {
        if unitaries.is_empty() {
            return Err(Error::InvalidInput("empty unitary list".into()));
        }
        if unitaries.len() != targets.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} unitaries vs {} targets",
                unitaries.len(),
                targets.len()
            )));
        }
        let dim = unitaries[0].dim();
        if unitaries.iter().any(|u| u.dim() != dim) {
            return Err(Error::DimensionMismatch("unitaries of mixed dimension".into()));
        }
        if let Some(t) = targets.iter().find(|t| t.norm() > 1.0 + 1e-12) {
            return Err(Error::Infeasible(format!(
                "target magnitude {} exceeds 1; no state attains it",
                t.norm()
            )));
        }
        Ok(Self { unitaries, targets })
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].dim()
    }

    pub fn unitaries(&self) -> &[UnitaryMatrix] {
        &self.unitaries
    }

    pub fn targets(&self) -> &[Complex64] {
        &self.targets
    }
}

#[derive(Serialize, Deserialize)]
struct ProblemJson {
    unitaries: Vec<ComplexMatrix>,
    targets: Vec<[f64; 2]>,
}

impl<'de> Deserialize<'de> for InvarianceProblem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ProblemJson::deserialize(d)?;
        let unitaries = raw
            .unitaries
            .into_iter()
            .map(UnitaryMatrix::new)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        let targets = raw.targets.iter().map(|&[re, im]| Complex::new(re, im)).collect();
        InvarianceProblem::new(unitaries, targets).map_err(serde::de::Error::custom)
    }
}

/// Solver configuration. All randomness in a pipeline flows from the seed;
/// the solver itself is deterministic (it starts from the maximally mixed
/// state) and records the seed for provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iters: usize,
    pub lambda: f64,
    pub eps: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { max_iters: 5000, lambda: 1.0, eps: 1e-8, seed: 0 }
    }
}

/// Solver output. Defects and residuals are recomputed from the returned h.
#[derive(Debug, Clone, Serialize)]
pub struct InvarianceSolution {
    pub h: DensityOperator,
    pub invariance_defects: Vec<f64>,
    pub trace_residuals: Vec<f64>,
    pub objective: f64,
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub stagnated: bool,
}

/// J(h) = Σ_i ‖u_i h u_i* − h‖₁ + λ Σ_i |Tr(h u_i) − τ_i|. Convex in h.
pub fn objective(h: &DensityOperator, prob: &InvarianceProblem, lambda: f64) -> Result<f64> {
    let mut j = 0.0;
    for (u, tau) in prob.unitaries.iter().zip(&prob.targets) {
        j += invariance_defect(h, u)?;
        j += lambda * trace_residual(h, u, *tau);
    }
    Ok(j)
}

pub(crate) fn invariance_defect(h: &DensityOperator, u: &UnitaryMatrix) -> Result<f64> {
    let hm = h.matrix();
    norm_1_tr(&(&hm.conjugate_by(u.matrix()) - hm))
}

pub(crate) fn trace_residual(h: &DensityOperator, u: &UnitaryMatrix, tau: Complex64) -> f64 {
    (tr_unnormalized(&h.matrix().mul(u.matrix())) - tau).norm()
}

/// One convex combination of the conjugation orbit:
/// h' = (h + Σ_i u_i h u_i*)/(n + 1). Trace and positivity are preserved.
pub fn averaging_step(h: &DensityOperator, prob: &InvarianceProblem) -> DensityOperator {
    let mut acc = h.matrix().clone();
    for u in &prob.unitaries {
        acc = acc.add(&h.matrix().conjugate_by(u.matrix()));
    }
    let scale = 1.0 / (prob.unitaries.len() as f64 + 1.0);
    let m = acc.scale(Complex::new(scale, 0.0)).hermitian_part();
    DensityOperator::new_unchecked(m)
}

/// Subgradient of J at h in the real vector space of Hermitian matrices.
/// Trace-norm terms contribute the sign factor of u h u* − h pulled back
/// through the conjugation; modulus terms contribute the phase of the
/// residual times the Hermitian part of the scaled unitary.
fn subgradient(h: &DensityOperator, prob: &InvarianceProblem, lambda: f64) -> Result<ComplexMatrix> {
    let dim = prob.dim();
    let mut g = ComplexMatrix::zeros(dim);
    for (u, tau) in prob.unitaries.iter().zip(&prob.targets) {
        let um = u.matrix();
        let delta = &h.matrix().conjugate_by(um) - h.matrix();
        let spec = hermitian_eigh(&HermitianOperator::new_unchecked(delta.hermitian_part()))?;
        let band = 1e-14 * (1.0 + spec.eigenvalues.iter().fold(0.0f64, |a, &x| a.max(x.abs())));
        let sign = spec.apply_to_eigenvalues(|x| {
            if x > band {
                1.0
            } else if x < -band {
                -1.0
            } else {
                0.0
            }
        });
        g = g.add(&(&sign.conjugate_by(&um.adjoint()) - &sign));

        let z = tr_unnormalized(&h.matrix().mul(um)) - tau;
        if z.norm() > 1e-15 {
            let phase = z.conj() / z.norm();
            g = g.add(&um.scale(phase * lambda).hermitian_part());
        }
    }
    Ok(g.hermitian_part())
}

/// Rank-one projector onto the minimal eigendirection of g: the linear
/// minimizer of <g, x> over density operators.
fn minimizing_vertex(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = hermitian_eigh(&HermitianOperator::new_unchecked(g.clone()))?;
    let dim = g.dim();
    let v = spec.vector(dim - 1);
    Ok(ComplexMatrix::from_fn(dim, |i, j| v[i] * v[j].conj()))
}

/// Conditional-gradient descent on J with step 2/(t+2) and one averaging
/// step every 10 iterations. Stops at J ≤ eps or max_iters and returns the
/// best iterate. Fifty consecutive non-improving iterations raise the
/// stagnation flag; the run still continues to its budget since averaging
/// can unstick the iterate.
pub fn solve_invariant(prob: &InvarianceProblem, cfg: &SolverConfig) -> Result<InvarianceSolution> {
    let dim = prob.dim();
    let uniform = ComplexMatrix::identity(dim).scale(Complex::new(1.0 / dim as f64, 0.0));
    let mut h = DensityOperator::new_unchecked(uniform);

    let mut best_h = h.clone();
    let mut best_j = objective(&h, prob, cfg.lambda)?;
    let mut objective_trace = vec![best_j];
    let mut iterations = 0;
    let mut since_improvement = 0usize;
    let mut stagnated = false;

    if best_j > cfg.eps {
        for t in 0..cfg.max_iters {
            iterations = t + 1;
            let g = subgradient(&h, prob, cfg.lambda)?;
            let vertex = minimizing_vertex(&g)?;
            let gamma = 2.0 / (t as f64 + 2.0);
            let stepped = h
                .matrix()
                .scale(Complex::new(1.0 - gamma, 0.0))
                .add(&vertex.scale(Complex::new(gamma, 0.0)))
                .hermitian_part();
            h = DensityOperator::new_unchecked(stepped);
            if (t + 1) % 10 == 0 {
                h = averaging_step(&h, prob);
            }
            let j = objective(&h, prob, cfg.lambda)?;
            objective_trace.push(j);
            if j < best_j {
                best_j = j;
                best_h = h.clone();
                since_improvement = 0;
            } else {
                since_improvement += 1;
                if since_improvement >= 50 {
                    stagnated = true;
                }
            }
            if j <= cfg.eps {
                break;
            }
        }
    }

    let invariance_defects = prob
        .unitaries
        .iter()
        .map(|u| invariance_defect(&best_h, u))
        .collect::<Result<Vec<_>>>()?;
    let trace_residuals = prob
        .unitaries
        .iter()
        .zip(&prob.targets)
        .map(|(u, tau)| trace_residual(&best_h, u, *tau))
        .collect();

    Ok(InvarianceSolution {
        converged: best_j <= cfg.eps,
        h: best_h,
        invariance_defects,
        trace_residuals,
        objective: best_j,
        objective_trace,
        iterations,
        stagnated,
    })
}

/// Per-unitary certification of a candidate h.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub ok: bool,
    pub eps: f64,
    pub invariance_defects: Vec<f64>,
    pub trace_residuals: Vec<f64>,
}

/// True iff every invariance defect and trace residual is < eps.
pub fn certify_invariance(
    h: &DensityOperator,
    prob: &InvarianceProblem,
    eps: f64,
) -> Result<InvarianceReport> {
    let mut defects = Vec::new();
    let mut residuals = Vec::new();
    for (u, tau) in prob.unitaries.iter().zip(&prob.targets) {
        defects.push(invariance_defect(h, u)?);
        residuals.push(trace_residual(h, u, *tau));
    }
    let ok = defects.iter().chain(&residuals).all(|&x| x < eps);
    Ok(InvarianceReport { ok, eps, invariance_defects: defects, trace_residuals: residuals })
}
