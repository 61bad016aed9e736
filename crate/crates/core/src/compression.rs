//! Rational-spectrum compression maps.
//!
//! A density operator is approximated by h' = Σ (p_i/q) v_i v_i* with
//! integer weights p_i summing to q (largest-remainder apportionment); the
//! u.c.p. map φ(T) = P(T⊗1)P is then assembled from the closed q×q block
//! formula φ(T)[(i,s),(j,t)] = T̂_{ij} δ_{st}, T̂_{ij} = <T v_j, v_i>,
//! without ever materializing the tensor-product space.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    hermitian_eigh, norm_1_tr, norm_2, tr_normalized, tr_unnormalized, Complex64, ComplexMatrix,
    DensityOperator, UnitaryMatrix,
};
use crate::tol;

/// Eigenvalue data p_i/q with Σ p_i = q and the orthonormal eigenvectors
/// carrying the weights.
#[derive(Debug, Clone)]
pub struct RationalSpectrum {
    q: u64,
    p: Vec<u64>,
    /// k orthonormal columns, each of length `dim`.
    vectors: Vec<Vec<Complex64>>,
}

impl RationalSpectrum {
    pub fn new(q: u64, p: Vec<u64>, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidInput("q must be positive".into()));
        }
        if p.is_empty() || p.len() != vectors.len() {
            return Err(Error::InvalidInput(format!(
                "{} weights vs {} vectors",
                p.len(),
                vectors.len()
            )));
        }
        if p.iter().any(|&w| w == 0) {
            return Err(Error::InvalidInput("zero weights are not representable".into()));
        }
        if p.iter().sum::<u64>() != q {
            return Err(Error::InvalidInput("weights must sum to q".into()));
        }
        let dim = vectors[0].len();
        if dim == 0 || vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch("ragged eigenvector columns".into()));
        }
        if vectors.len() > dim {
            return Err(Error::InvalidInput(format!(
                "{} vectors exceed dimension {dim}",
                vectors.len()
            )));
        }
        // orthonormality of the kept columns
        for i in 0..vectors.len() {
            for j in 0..=i {
                let inner: Complex64 = vectors[i]
                    .iter()
                    .zip(&vectors[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (inner - Complex::new(target, 0.0)).norm() > tol::ORTHONORMAL {
                    return Err(Error::InvalidInput(format!(
                        "vectors {i},{j} are not orthonormal: <v_i, v_j> = {inner}"
                    )));
                }
            }
        }
        Ok(Self { q, p, vectors })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn weights(&self) -> &[u64] {
        &self.p
    }

    /// Number of retained eigendirections.
    pub fn rank(&self) -> usize {
        self.p.len()
    }

    /// Dimension of the space the vectors live in.
    pub fn source_dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    /// h' = Σ (p_i/q) v_i v_i*.
    pub fn density(&self) -> ComplexMatrix {
        self.weighted_outer(|w| w)
    }

    /// h'^{1/2} = Σ (p_i/q)^{1/2} v_i v_i*.
    pub fn density_sqrt(&self) -> ComplexMatrix {
        self.weighted_outer(f64::sqrt)
    }

    fn weighted_outer(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let dim = self.source_dim();
        let mut out = ComplexMatrix::zeros(dim);
        for (v, &pi) in self.vectors.iter().zip(&self.p) {
            let w = f(pi as f64 / self.q as f64);
            for i in 0..dim {
                for j in 0..dim {
                    let t = v[i] * v[j].conj() * w;
                    let cur = out.get(i, j);
                    out.set(i, j, cur + t);
                }
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct RationalSpectrumJson {
    q: u64,
    p: Vec<u64>,
    vectors: Vec<Vec<[f64; 2]>>,
}

impl Serialize for RationalSpectrum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| v.iter().map(|c| [c.re, c.im]).collect())
            .collect();
        RationalSpectrumJson { q: self.q, p: self.p.clone(), vectors }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalSpectrum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RationalSpectrumJson::deserialize(d)?;
        let vectors = raw
            .vectors
            .iter()
            .map(|v| v.iter().map(|&[re, im]| Complex::new(re, im)).collect())
            .collect();
        RationalSpectrum::new(raw.q, raw.p, vectors).map_err(serde::de::Error::custom)
    }
}

/// Largest-remainder apportionment of `q` units proportional to `weights`:
/// floors first, then one extra unit per largest fractional part, ties to
/// the lowest index.
fn apportion(q: u64, weights: &[f64]) -> Result<Vec<u64>> {
    let targets: Vec<f64> = weights.iter().map(|w| w * q as f64).collect();
    let floors: Vec<u64> = targets.iter().map(|x| x.floor().max(0.0) as u64).collect();
    let assigned: u64 = floors.iter().sum();
    if assigned > q {
        return Err(Error::NumericalFailure(format!(
            "apportionment floors exceed q: {assigned} > {q}"
        )));
    }
    let shortfall = (q - assigned) as usize;
    if shortfall > weights.len() {
        return Err(Error::NumericalFailure(format!(
            "apportionment shortfall {shortfall} exceeds {} candidates (weights do not sum to 1)",
            weights.len()
        )));
    }
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = targets[a] - targets[a].floor();
        let fb = targets[b] - targets[b].floor();
        fb.partial_cmp(&fa).expect("finite fractions").then(a.cmp(&b))
    });
    let mut p = floors;
    for &i in order.iter().take(shortfall) {
        p[i] += 1;
    }
    Ok(p)
}

/// Approximate a density operator by one with eigenvalues p_i/q on its own
/// eigenvectors. Eigendirections apportioned zero weight are dropped; the
/// retained rank k guarantees ‖h − h'‖_{1,Tr} ≤ 2k/q.
pub fn rationalize(h: &DensityOperator, q: u64) -> Result<RationalSpectrum> {
    let spectrum = hermitian_eigh(h.hermitian())?;
    let positive: Vec<(usize, f64)> = spectrum
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, x)| x > tol::RANK_EIG)
        .collect();
    if positive.is_empty() {
        return Err(Error::DegenerateInput("no strictly positive eigenvalues".into()));
    }
    if (q as usize) < positive.len() {
        return Err(Error::Infeasible(format!(
            "q = {q} is smaller than the {} strictly positive eigenvalues",
            positive.len()
        )));
    }
    let weights: Vec<f64> = positive.iter().map(|&(_, x)| x).collect();
    let p = apportion(q, &weights)?;
    let mut kept_p = Vec::new();
    let mut kept_vectors = Vec::new();
    for (&(col, _), &pi) in positive.iter().zip(&p) {
        if pi > 0 {
            kept_p.push(pi);
            kept_vectors.push(spectrum.vector(col));
        }
    }
    RationalSpectrum::new(q, kept_p, kept_vectors)
}

// ---------------------------------------------------------------------------
// The compression map.

/// φ(T) = P(T⊗1)P as an explicit q×q block formula over the basis
/// v_i ⊗ w_s, s = 1..p_i.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompressionMap {
    spectrum: RationalSpectrum,
    source_dim: usize,
}

impl CompressionMap {
    pub fn spectrum(&self) -> &RationalSpectrum {
        &self.spectrum
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.spectrum.q() as usize
    }

    /// T̂ = V*TV restricted to the kept eigenvectors (k×k).
    fn compressed_entries(&self, t: &ComplexMatrix) -> Vec<Vec<Complex64>> {
        let k = self.spectrum.rank();
        let dim = self.source_dim;
        let vs = self.spectrum.vectors();
        // tv_j = T v_j
        let tv: Vec<Vec<Complex64>> = vs
            .iter()
            .map(|v| {
                (0..dim)
                    .map(|r| (0..dim).map(|c| t.get(r, c) * v[c]).sum())
                    .collect()
            })
            .collect();
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| vs[i].iter().zip(&tv[j]).map(|(a, b)| a.conj() * b).sum())
                    .collect()
            })
            .collect()
    }
}

fn block_offsets(p: &[u64]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(p.len());
    let mut acc = 0usize;
    for &pi in p {
        offsets.push(acc);
        acc += pi as usize;
    }
    offsets
}

/// Attach a source dimension to a rational spectrum, yielding the unital
/// completely positive map φ.
pub fn build_compression(rs: RationalSpectrum, source_dim: usize) -> Result<CompressionMap> {
    if rs.source_dim() != source_dim {
        return Err(Error::DimensionMismatch(format!(
            "spectrum vectors live in dimension {}, not {source_dim}",
            rs.source_dim()
        )));
    }
    Ok(CompressionMap { spectrum: rs, source_dim })
}

/// Evaluate φ(T). Entries of T̂ are copied into the block slots, zeros
/// elsewhere.
pub fn apply(cm: &CompressionMap, t: &ComplexMatrix) -> Result<ComplexMatrix> {
    if t.dim() != cm.source_dim {
        return Err(Error::DimensionMismatch(format!(
            "operator has dimension {}, map expects {}",
            t.dim(),
            cm.source_dim
        )));
    }
    let that = cm.compressed_entries(t);
    let p = cm.spectrum.weights();
    let offsets = block_offsets(p);
    let q = cm.target_dim();
    let mut out = ComplexMatrix::zeros(q);
    for i in 0..p.len() {
        for j in 0..p.len() {
            let copies = p[i].min(p[j]) as usize;
            let v = that[i][j];
            for s in 0..copies {
                out.set(offsets[i] + s, offsets[j] + s, v);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Check records.

/// tr(φ(T)) against Tr(h'T).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceIdentityRecord {
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub error: f64,
    pub ok: bool,
}

pub fn check_trace_identity(cm: &CompressionMap, t: &ComplexMatrix) -> Result<TraceIdentityRecord> {
    let phi = apply(cm, t)?;
    let lhs = tr_normalized(&phi);
    let rhs = tr_unnormalized(&cm.spectrum.density().mul(t));
    let error = (lhs - rhs).norm();
    Ok(TraceIdentityRecord {
        lhs: [lhs.re, lhs.im],
        rhs: [rhs.re, rhs.im],
        error,
        ok: error <= 1e-10 * (1.0 + rhs.norm()),
    })
}

/// tr(φ(T)φ(T*)) from the assembled block product against the closed form
/// (1/q) Σ_{i,j} |T̂_{ij}|² min(p_i, p_j).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecondMomentRecord {
    pub product_route: f64,
    pub closed_form: f64,
    pub error: f64,
    pub ok: bool,
}

pub fn check_second_moment(cm: &CompressionMap, t: &ComplexMatrix) -> Result<SecondMomentRecord> {
    let phi_t = apply(cm, t)?;
    let phi_t_star = apply(cm, &t.adjoint())?;
    let product_route = tr_normalized(&phi_t.mul(&phi_t_star)).re;

    let that = cm.compressed_entries(t);
    let p = cm.spectrum.weights();
    let q = cm.spectrum.q() as f64;
    let mut closed_form = 0.0;
    for i in 0..p.len() {
        for j in 0..p.len() {
            closed_form += that[i][j].norm_sqr() * p[i].min(p[j]) as f64;
        }
    }
    closed_form /= q;

    let error = (product_route - closed_form).abs();
    Ok(SecondMomentRecord {
        product_route,
        closed_form,
        error,
        ok: error <= 1e-9 * (1.0 + closed_form.abs()),
    })
}

/// Multiplicativity defect of φ at a unitary, its trace-norm bound, and the
/// intermediate Hilbert–Schmidt estimate from the chain connecting them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DefectBoundRecord {
    /// tr(φ(uu*) − φ(u)φ(u*)), real and nonnegative up to eigensolver noise.
    pub defect: f64,
    /// 2‖uh'u* − h'‖₁^{1/2}.
    pub bound: f64,
    pub ok: bool,
    /// |Tr(h'^{1/2} u h'^{1/2} u*) − tr(φ(u)φ(u*))|.
    pub intermediate: f64,
    /// ‖uh'^{1/2} − h'^{1/2}u‖_{2,Tr}.
    pub intermediate_bound: f64,
    pub intermediate_ok: bool,
}

pub fn check_defect_bound(cm: &CompressionMap, u: &UnitaryMatrix) -> Result<DefectBoundRecord> {
    let um = u.matrix();
    let phi_u = apply(cm, um)?;
    let phi_u_star = apply(cm, &um.adjoint())?;
    let phi_uu_star = apply(cm, &um.mul(&um.adjoint()))?;
    let product = phi_u.mul(&phi_u_star);
    let defect = (tr_normalized(&phi_uu_star) - tr_normalized(&product)).re;

    let h = cm.spectrum.density();
    let bound = 2.0 * norm_1_tr(&(&h.conjugate_by(um) - &h))?.sqrt();

    let root = cm.spectrum.density_sqrt();
    let second_moment = tr_unnormalized(&root.mul(um).mul(&root).mul(&um.adjoint()));
    let intermediate = (second_moment - tr_normalized(&product)).norm();
    let intermediate_bound = norm_2(&(&um.mul(&root) - &root.mul(um)), false);

    Ok(DefectBoundRecord {
        defect,
        bound,
        ok: defect <= bound + 1e-9,
        intermediate,
        intermediate_bound,
        intermediate_ok: intermediate <= intermediate_bound + 1e-9,
    })
}
