//! Microstate maps and certificates.
//!
//! A microstate map is a unital matrix model evaluated on words over a
//! fixed generator set: an exact representation (unitary image per
//! generator, multiplied along the word), a compression map (words are
//! evaluated in the source algebra first, then mapped), or a direct sum of
//! such maps. Certificates record multiplicativity defects in the
//! normalized 2-norm and trace errors against target values at one finite
//! stage.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::compression::{self, rationalize, CompressionMap};
use crate::error::{Error, Result};
use crate::groups::{canonical_trace, Word};
use crate::invariance::{solve_invariant, InvarianceProblem, SolverConfig};
use crate::matcore::{
    hermitian_eigh, norm_2, norm_op, tr_normalized, Complex64, ComplexMatrix, HermitianOperator,
    UnitaryMatrix,
};
use crate::tol;

/// Largest denominator the default q rule may pick before demanding an
/// explicit choice.
pub const MAX_DEFAULT_Q: u64 = 8192;

/// A unital matrix model with a fixed generator arity.
#[derive(Debug, Clone)]
pub enum MicrostateMap {
    /// Words evaluated in the source algebra, then compressed.
    Compression { map: CompressionMap, generators: Vec<UnitaryMatrix> },
    /// Unitary image per generator, evaluated multiplicatively on words.
    ExactRep { images: Vec<UnitaryMatrix> },
    /// Block-diagonal combination of maps over the same generator set.
    DirectSum(Vec<MicrostateMap>),
}

impl MicrostateMap {
    pub fn compression(map: CompressionMap, generators: Vec<UnitaryMatrix>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("compression map needs generators".into()));
        }
        if generators.iter().any(|u| u.dim() != map.source_dim()) {
            return Err(Error::DimensionMismatch(format!(
                "generators must act on the map's source dimension {}",
                map.source_dim()
            )));
        }
        Ok(Self::Compression { map, generators })
    }

    pub fn exact_rep(images: Vec<UnitaryMatrix>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidInput("exact representation needs generators".into()));
        }
        let dim = images[0].dim();
        if images.iter().any(|u| u.dim() != dim) {
            return Err(Error::DimensionMismatch("generator images of mixed dimension".into()));
        }
        Ok(Self::ExactRep { images })
    }

    pub fn arity(&self) -> usize {
        match self {
            Self::Compression { generators, .. } => generators.len(),
            Self::ExactRep { images } => images.len(),
            Self::DirectSum(maps) => maps[0].arity(),
        }
    }

    /// Evaluation dimension: q for a compression, the image dimension for
    /// an exact representation, the sum of summand dimensions for a direct
    /// sum.
    pub fn output_dim(&self) -> usize {
        match self {
            Self::Compression { map, .. } => map.target_dim(),
            Self::ExactRep { images } => images[0].dim(),
            Self::DirectSum(maps) => maps.iter().map(|m| m.output_dim()).sum(),
        }
    }

    /// φ(w) for a word w over the generator set; the empty word maps to
    /// the identity.
    pub fn evaluate_word(&self, w: &Word) -> Result<ComplexMatrix> {
        if w.arity() > self.arity() {
            return Err(Error::InvalidInput(format!(
                "word uses generator {} but the map has arity {}",
                w.arity() - 1,
                self.arity()
            )));
        }
        match self {
            Self::Compression { map, generators } => {
                let source = word_product(generators, w, map.source_dim());
                compression::apply(map, &source)
            }
            Self::ExactRep { images } => Ok(word_product(images, w, images[0].dim())),
            Self::DirectSum(maps) => {
                let blocks = maps
                    .iter()
                    .map(|m| m.evaluate_word(w))
                    .collect::<Result<Vec<_>>>()?;
                Ok(block_diag(&blocks))
            }
        }
    }

    /// φ(x) for an operator x on the source algebra. Exact representations
    /// are defined on words only.
    pub fn evaluate_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self {
            Self::Compression { map, .. } => compression::apply(map, x),
            Self::ExactRep { .. } => Err(Error::Unsupported(
                "exact representations evaluate words, not arbitrary operators".into(),
            )),
            Self::DirectSum(maps) => {
                let blocks = maps
                    .iter()
                    .map(|m| m.evaluate_operator(x))
                    .collect::<Result<Vec<_>>>()?;
                Ok(block_diag(&blocks))
            }
        }
    }
}

fn word_product(images: &[UnitaryMatrix], w: &Word, dim: usize) -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(dim);
    for &(g, e) in w.letters() {
        let factor = if e == 1 { images[g].matrix().clone() } else { images[g].matrix().adjoint() };
        acc = acc.mul(&factor);
    }
    acc
}

/// Assemble block-diag(blocks).
pub fn block_diag(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let total: usize = blocks.iter().map(|b| b.dim()).sum();
    let mut out = ComplexMatrix::zeros(total);
    let mut offset = 0;
    for b in blocks {
        let n = b.dim();
        for i in 0..n {
            for j in 0..n {
                out.set(offset + i, offset + j, b.get(i, j));
            }
        }
        offset += n;
    }
    out
}

/// ‖φ(ab) − φ(a)φ(b)‖_{2,tr}.
pub fn defect_mult(m: &MicrostateMap, a: &Word, b: &Word) -> Result<f64> {
    let phi_ab = m.evaluate_word(&a.concat(b))?;
    let product = m.evaluate_word(a)?.mul(&m.evaluate_word(b)?);
    Ok(norm_2(&(&phi_ab - &product), true))
}

/// |tr φ(a) − τ(a)|.
pub fn trace_error(m: &MicrostateMap, a: &Word, target: Complex64) -> Result<f64> {
    Ok((tr_normalized(&m.evaluate_word(a)?) - target).norm())
}

/// ‖1 − φ(u)φ(u*)‖²_{2,tr} against ‖1 − φ(u)φ(u*)‖_op · tr(φ(uu*) − φ(u)φ(u*)).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultDomainRecord {
    pub lhs: f64,
    pub rhs: f64,
    pub op_norm: f64,
    pub defect_trace: f64,
    pub ok: bool,
}

pub fn check_mult_domain_bound(m: &MicrostateMap, u: &Word) -> Result<MultDomainRecord> {
    let product = m.evaluate_word(u)?.mul(&m.evaluate_word(&u.inverse())?);
    let one_minus = &ComplexMatrix::identity(m.output_dim()) - &product;
    let lhs = norm_2(&one_minus, true).powi(2);
    let op = norm_op(&one_minus)?;
    let phi_uu_star = m.evaluate_word(&u.concat(&u.inverse()))?;
    let defect_trace = (tr_normalized(&phi_uu_star) - tr_normalized(&product)).re;
    let rhs = op * defect_trace;
    Ok(MultDomainRecord { lhs, rhs, op_norm: op, defect_trace, ok: lhs <= rhs + 1e-9 })
}

/// Block-diagonal combination. The normalized 2-norm satisfies
/// ‖x⊕y‖²_{2,tr} = (k₁‖x‖²_{2,tr} + k₂‖y‖²_{2,tr})/(k₁+k₂).
pub fn direct_sum(maps: Vec<MicrostateMap>) -> Result<MicrostateMap> {
    if maps.is_empty() {
        return Err(Error::DegenerateInput("direct sum of no maps".into()));
    }
    let arity = maps[0].arity();
    if maps.iter().any(|m| m.arity() != arity) {
        return Err(Error::DimensionMismatch(
            "direct summands must share one generator set".into(),
        ));
    }
    Ok(MicrostateMap::DirectSum(maps))
}

// ---------------------------------------------------------------------------
// Certification pipeline.

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertifyConfig {
    /// Tolerance for the verdict and target for the invariance solver.
    pub eps: f64,
    /// Compression denominator; when absent, q = ceil(2·rank/eps) capped at
    /// MAX_DEFAULT_Q.
    pub q: Option<u64>,
    pub max_iters: usize,
    pub lambda: f64,
    pub seed: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self { eps: 1e-2, q: None, max_iters: 5000, lambda: 1.0, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairDefect {
    pub a: String,
    pub b: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceErrorRecord {
    pub a: String,
    pub value: f64,
    pub target: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverSummary {
    pub converged: bool,
    pub stagnated: bool,
    pub objective: f64,
    pub iterations: usize,
}

/// The finite-stage witness: evaluation dimension, per-pair
/// multiplicativity defects, per-word trace errors, configuration and
/// verdict. The verdict is a pure function of the stored data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub generators: Vec<String>,
    pub dim: usize,
    pub defects: Vec<PairDefect>,
    pub trace_errors: Vec<TraceErrorRecord>,
    pub config: CertifyConfig,
    pub solver: SolverSummary,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn max_defect(&self) -> f64 {
        self.defects.iter().map(|d| d.value).fold(0.0, f64::max)
    }

    pub fn max_trace_error(&self) -> f64 {
        self.trace_errors.iter().map(|t| t.value).fold(0.0, f64::max)
    }

    /// Recompute the verdict from the stored arrays: inconclusive when the
    /// solver failed to reach its target, otherwise pass iff every defect
    /// and trace error is within eps.
    pub fn recompute_verdict(&self) -> Verdict {
        if !self.solver.converged {
            return Verdict::Inconclusive;
        }
        if self.max_defect() <= self.config.eps && self.max_trace_error() <= self.config.eps {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

fn default_q(h: &crate::matcore::DensityOperator, eps: f64) -> Result<u64> {
    let spectrum = hermitian_eigh(h.hermitian())?;
    let rank = spectrum.eigenvalues.iter().filter(|&&x| x > tol::RANK_EIG).count() as u64;
    let q = (2.0 * rank as f64 / eps).ceil() as u64;
    let q = q.max(rank);
    if q > MAX_DEFAULT_Q {
        return Err(Error::InvalidInput(format!(
            "default q = {q} exceeds {MAX_DEFAULT_Q}; pass q explicitly"
        )));
    }
    Ok(q)
}

/// Full pipeline: solve for an almost-invariant density operator on the
/// generator set, rationalize its spectrum, build the compression map, and
/// evaluate every word pair. Word targets default to the canonical
/// free-group trace. Solver stagnation yields verdict "inconclusive",
/// never a silent pass.
pub fn certify(
    generators: &[UnitaryMatrix],
    targets: &[Complex64],
    words: &[Word],
    word_targets: Option<&[Complex64]>,
    cfg: &CertifyConfig,
) -> Result<Certificate> {
    if words.is_empty() {
        return Err(Error::InvalidInput("empty word list".into()));
    }
    if let Some(wt) = word_targets {
        if wt.len() != words.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} word targets for {} words",
                wt.len(),
                words.len()
            )));
        }
    }
    let prob = InvarianceProblem::new(generators.to_vec(), targets.to_vec())?;
    let solver_cfg = SolverConfig {
        max_iters: cfg.max_iters,
        lambda: cfg.lambda,
        eps: cfg.eps,
        seed: cfg.seed,
    };
    let sol = solve_invariant(&prob, &solver_cfg)?;

    let q = match cfg.q {
        Some(q) => q,
        None => default_q(&sol.h, cfg.eps)?,
    };
    let rs = rationalize(&sol.h, q)?;
    let cm = compression::build_compression(rs, prob.dim())?;
    let map = MicrostateMap::compression(cm, generators.to_vec())?;

    let mut defects = Vec::with_capacity(words.len() * words.len());
    for a in words {
        for b in words {
            defects.push(PairDefect {
                a: a.label(),
                b: b.label(),
                value: defect_mult(&map, a, b)?,
            });
        }
    }

    let mut trace_errors = Vec::with_capacity(words.len());
    for (i, a) in words.iter().enumerate() {
        let target = match word_targets {
            Some(wt) => wt[i],
            None => Complex::new(canonical_trace(a) as f64, 0.0),
        };
        trace_errors.push(TraceErrorRecord {
            a: a.label(),
            value: trace_error(&map, a, target)?,
            target: [target.re, target.im],
        });
    }

    let mut cert = Certificate {
        generators: (0..generators.len()).map(|i| format!("g{i}")).collect(),
        dim: map.output_dim(),
        defects,
        trace_errors,
        config: cfg.clone(),
        solver: SolverSummary {
            converged: sol.converged,
            stagnated: sol.stagnated,
            objective: sol.objective,
            iterations: sol.iterations,
        },
        verdict: Verdict::Inconclusive,
    };
    cert.verdict = cert.recompute_verdict();
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compression::build_compression;
    use crate::groups::{eval_word, random_perm_rep, regular_rep};
    use crate::matcore::{random_matrix, DensityOperator};

    fn cx(re: f64) -> Complex64 {
        Complex::new(re, 0.0)
    }

    fn pauli_x() -> UnitaryMatrix {
        let data = vec![cx(0.0), cx(1.0), cx(1.0), cx(0.0)];
        UnitaryMatrix::new(ComplexMatrix::new(2, data).unwrap()).unwrap()
    }

    fn pauli_z() -> UnitaryMatrix {
        UnitaryMatrix::new(ComplexMatrix::from_real_diag(&[1.0, -1.0])).unwrap()
    }

    fn worked_compression_map() -> MicrostateMap {
        let h =
            DensityOperator::from_matrix(ComplexMatrix::from_real_diag(&[2.0 / 3.0, 1.0 / 3.0]))
                .unwrap();
        let rs = rationalize(&h, 3).unwrap();
        let cm = build_compression(rs, 2).unwrap();
        MicrostateMap::compression(cm, vec![pauli_x()]).unwrap()
    }

    fn haar_exact_rep(dim: usize, seed: u64) -> MicrostateMap {
        MicrostateMap::exact_rep(vec![
            crate::matcore::haar_unitary(dim, seed),
            crate::matcore::haar_unitary(dim, seed + 1),
        ])
        .unwrap()
    }

    fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect()
    }

    #[test]
    fn exact_rep_empty_word_is_identity() {
        let m = haar_exact_rep(4, 1);
        let out = m.evaluate_word(&Word::empty()).unwrap();
        assert_eq!(out, ComplexMatrix::identity(4));
    }

    #[test]
    fn direct_sum_evaluates_block_diagonally() {
        let m = haar_exact_rep(3, 5);
        let sum = direct_sum(vec![m.clone(), m.clone()]).unwrap();
        let w = Word::generator(0);
        let single = m.evaluate_word(&w).unwrap();
        let double = sum.evaluate_word(&w).unwrap();
        assert_eq!(double, block_diag(&[single.clone(), single]));
        assert_eq!(sum.output_dim(), 6);
    }

    #[test]
    fn compression_evaluate_delegates_to_apply() {
        let m = worked_compression_map();
        let MicrostateMap::Compression { map, generators } = &m else { unreachable!() };
        let w = Word::generator(0);
        let via_map = m.evaluate_word(&w).unwrap();
        let direct = compression::apply(map, generators[0].matrix()).unwrap();
        assert_eq!(via_map, direct);
        let x = random_matrix(2, 3);
        assert_eq!(m.evaluate_operator(&x).unwrap(), compression::apply(map, &x).unwrap());
    }

    #[test]
    fn exact_rep_rejects_operator_evaluation() {
        let m = haar_exact_rep(2, 9);
        let x = random_matrix(2, 1);
        assert!(matches!(m.evaluate_operator(&x), Err(Error::Unsupported(_))));
    }

    #[test]
    fn defect_mult_vanishes_for_exact_reps() {
        let m = haar_exact_rep(5, 31);
        let words = [
            Word::generator(0),
            Word::generator(1),
            Word::from_powers(&[(0, 2), (1, -1)]),
            Word::from_powers(&[(1, 1), (0, -2)]),
        ];
        for a in &words {
            for b in &words {
                let d = defect_mult(&m, a, b).unwrap();
                assert!(d <= 1e-12, "defect {d}");
            }
        }
    }

    #[test]
    fn defect_mult_worked_compression_instance() {
        let m = worked_compression_map();
        let x = Word::generator(0);
        let d = defect_mult(&m, &x, &x).unwrap();
        let expect = (1.0f64 / 3.0).sqrt();
        assert!((d - expect).abs() < 1e-12, "defect {d} vs {expect}");
    }

    #[test]
    fn defect_mult_direct_sum_is_dimension_weighted() {
        let exact = haar_exact_rep(4, 41);
        let h = crate::matcore::random_density(2, 42);
        let rs = rationalize(&h, 6).unwrap();
        let cm = build_compression(rs, 2).unwrap();
        let compressed = MicrostateMap::compression(
            cm,
            vec![crate::matcore::haar_unitary(2, 43), crate::matcore::haar_unitary(2, 44)],
        )
        .unwrap();
        let k1 = exact.output_dim() as f64;
        let k2 = compressed.output_dim() as f64;
        let sum = direct_sum(vec![exact.clone(), compressed.clone()]).unwrap();
        let a = Word::from_powers(&[(0, 1), (1, 1)]);
        let b = Word::generator(1);
        let d1 = defect_mult(&exact, &a, &b).unwrap();
        let d2 = defect_mult(&compressed, &a, &b).unwrap();
        let d = defect_mult(&sum, &a, &b).unwrap();
        let expect = ((k1 * d1 * d1 + k2 * d2 * d2) / (k1 + k2)).sqrt();
        assert!((d - expect).abs() <= 1e-12, "{d} vs {expect}");
    }

    #[test]
    fn direct_sum_of_identical_maps_keeps_defects() {
        let m = worked_compression_map();
        let sum = direct_sum(vec![m.clone(), m.clone()]).unwrap();
        let x = Word::generator(0);
        let d1 = defect_mult(&m, &x, &x).unwrap();
        let d2 = defect_mult(&sum, &x, &x).unwrap();
        assert!((d1 - d2).abs() <= 1e-12);
    }

    #[test]
    fn direct_sum_rejects_empty_and_mismatched() {
        assert!(matches!(direct_sum(vec![]), Err(Error::DegenerateInput(_))));
        let a = haar_exact_rep(2, 7);
        let b = MicrostateMap::exact_rep(vec![crate::matcore::haar_unitary(2, 8)]).unwrap();
        assert!(matches!(direct_sum(vec![a, b]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn trace_error_identity_element() {
        let m = haar_exact_rep(4, 51);
        let e = trace_error(&m, &Word::empty(), cx(1.0)).unwrap();
        assert!(e <= 1e-15);
    }

    #[test]
    fn trace_error_regular_rep_vanishes_off_identity() {
        let rep = regular_rep(&cyclic_table(5)).unwrap();
        let images: Vec<UnitaryMatrix> = (1..5).map(|g| rep.generator_matrix(g)).collect();
        let m = MicrostateMap::exact_rep(images).unwrap();
        for g in 0..4 {
            let e = trace_error(&m, &Word::generator(g), cx(0.0)).unwrap();
            assert_eq!(e, 0.0);
        }
    }

    #[test]
    fn trace_error_random_rep_matches_fixed_point_fraction() {
        let rep = random_perm_rep(2, 200, 13).unwrap();
        let m = MicrostateMap::exact_rep(vec![rep.generator_matrix(0), rep.generator_matrix(1)])
            .unwrap();
        let w = Word::from_powers(&[(0, 1), (1, 1)]);
        let e = trace_error(&m, &w, cx(0.0)).unwrap();
        let expect = rep.fixed_points(&w).unwrap() as f64 / 200.0;
        assert!((e - expect).abs() < 1e-15);
    }

    #[test]
    fn mult_domain_bound_exact_rep_is_zero() {
        let m = haar_exact_rep(4, 61);
        let r = check_mult_domain_bound(&m, &Word::generator(0)).unwrap();
        assert!(r.lhs <= 1e-14);
        assert!(r.rhs.abs() <= 1e-12);
        assert!(r.ok);
    }

    #[test]
    fn mult_domain_bound_worked_instance_is_tight() {
        let m = worked_compression_map();
        let r = check_mult_domain_bound(&m, &Word::generator(0)).unwrap();
        assert!((r.lhs - 1.0 / 3.0).abs() < 1e-12, "lhs {}", r.lhs);
        assert!((r.rhs - 1.0 / 3.0).abs() < 1e-12, "rhs {}", r.rhs);
        assert!((r.op_norm - 1.0).abs() < 1e-12);
        assert!((r.defect_trace - 1.0 / 3.0).abs() < 1e-12);
        assert!(r.ok);
    }

    #[test]
    fn mult_domain_bound_fuzz_compressions() {
        for seed in 0..30u64 {
            let dim = 2 + (seed % 5) as usize;
            let h = crate::matcore::random_density(dim, 800 + seed);
            let rs = rationalize(&h, dim as u64 + 4).unwrap();
            let cm = build_compression(rs, dim).unwrap();
            let u = crate::matcore::haar_unitary(dim, 900 + seed);
            let m = MicrostateMap::compression(cm, vec![u]).unwrap();
            let r = check_mult_domain_bound(&m, &Word::generator(0)).unwrap();
            assert!(r.ok, "seed {seed}: lhs {} rhs {}", r.lhs, r.rhs);
        }
    }

    #[test]
    fn certify_cyclic_regular_rep_passes_exactly() {
        let rep = regular_rep(&cyclic_table(3)).unwrap();
        let gens = vec![rep.generator_matrix(1), rep.generator_matrix(2)];
        let targets = vec![cx(0.0), cx(0.0)];
        // words and their group traces
        let words = vec![
            Word::generator(0),
            Word::generator(1),
            Word::from_powers(&[(0, 1), (1, 1)]), // g·g² = e
            Word::from_powers(&[(0, 2)]),         // g² ≠ e
        ];
        // generator index i names rep element i+1, so shift before asking
        // the representation for the group trace
        let word_targets: Vec<Complex64> = words
            .iter()
            .map(|w| {
                let shifted =
                    Word::new(w.letters().iter().map(|&(g, e)| (g + 1, e)).collect()).unwrap();
                cx(rep.fixed_points(&shifted).unwrap() as f64 / 3.0)
            })
            .collect();
        let cfg = CertifyConfig { eps: 1e-10, q: Some(3), ..Default::default() };
        let cert = certify(&gens, &targets, &words, Some(&word_targets), &cfg).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        assert!(cert.max_defect() <= 1e-12, "max defect {}", cert.max_defect());
        assert!(cert.max_trace_error() <= 1e-12, "max err {}", cert.max_trace_error());
        assert_eq!(cert.dim, 3);
    }

    #[test]
    fn certify_pauli_pair_passes() {
        let gens = vec![pauli_x(), pauli_z()];
        let targets = vec![cx(0.0), cx(0.0)];
        // reduced words whose Pauli images are traceless
        let words = vec![
            Word::generator(0),
            Word::generator(1),
            Word::from_powers(&[(0, 1), (1, 1)]),
            Word::from_powers(&[(0, -1), (1, 1)]),
        ];
        let cfg = CertifyConfig { eps: 1e-8, q: Some(4), ..Default::default() };
        let cert = certify(&gens, &targets, &words, None, &cfg).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass, "defect {} err {}", cert.max_defect(), cert.max_trace_error());
    }

    #[test]
    fn certify_infeasible_target_is_inconclusive() {
        // invariance under X and Z forces h = I/2, which has Tr(hX) = 0;
        // demanding τ(X) = 1 cannot be met
        let gens = vec![pauli_x(), pauli_z()];
        let targets = vec![cx(1.0), cx(0.0)];
        let words = vec![Word::generator(0)];
        let cfg =
            CertifyConfig { eps: 1e-6, q: Some(4), max_iters: 200, ..Default::default() };
        let cert = certify(&gens, &targets, &words, Some(&[cx(1.0)]), &cfg).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        assert!(!cert.solver.converged);
        assert!(cert.solver.objective > 0.1, "residual {}", cert.solver.objective);
    }

    #[test]
    fn certify_default_q_guard() {
        let gens = vec![pauli_x(), pauli_z()];
        let targets = vec![cx(0.0), cx(0.0)];
        let words = vec![Word::generator(0)];
        let cfg = CertifyConfig { eps: 1e-9, q: None, ..Default::default() };
        assert!(matches!(
            certify(&gens, &targets, &words, None, &cfg),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn verdict_is_pure_function_of_stored_arrays() {
        let gens = vec![pauli_x(), pauli_z()];
        let targets = vec![cx(0.0), cx(0.0)];
        let words = vec![Word::generator(0), Word::generator(1)];
        let cfg = CertifyConfig { eps: 1e-8, q: Some(2), ..Default::default() };
        let mut cert = certify(&gens, &targets, &words, None, &cfg).unwrap();
        assert_eq!(cert.verdict, cert.recompute_verdict());
        // tampering with a defect flips the recomputed verdict
        cert.defects[0].value = 1.0;
        assert_eq!(cert.recompute_verdict(), Verdict::Fail);
        cert.solver.converged = false;
        assert_eq!(cert.recompute_verdict(), Verdict::Inconclusive);
    }

    #[test]
    fn certificate_json_round_trip() {
        let gens = vec![pauli_x(), pauli_z()];
        let targets = vec![cx(0.0), cx(0.0)];
        let words = vec![Word::generator(0)];
        let cfg = CertifyConfig { eps: 1e-8, q: Some(2), ..Default::default() };
        let cert = certify(&gens, &targets, &words, None, &cfg).unwrap();
        let text = crate::json::to_string_precise(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back.verdict, cert.verdict);
        assert_eq!(back.dim, cert.dim);
        assert!(text.contains("\"verdict\":\"pass\""));
    }

    #[test]
    fn exact_rep_of_permutations_matches_group_module() {
        let rep = random_perm_rep(2, 30, 3).unwrap();
        let m = MicrostateMap::exact_rep(vec![rep.generator_matrix(0), rep.generator_matrix(1)])
            .unwrap();
        let w = Word::from_powers(&[(0, 1), (1, -1), (0, 1)]);
        let a = m.evaluate_word(&w).unwrap();
        let b = eval_word(&rep, &w).unwrap();
        assert_eq!(&a, b.matrix());
    }
}
