//! Dense complex matrix foundation: traces, Schatten norms, Hermitian
//! eigendecomposition, projections onto structured sets, seeded random
//! ensembles.
//!
//! Matrices are square, row-major, `Complex<f64>`. Eigen/singular
//! decompositions are delegated to nalgebra; everything else is computed
//! directly. All values are immutable after construction and safe to share
//! across threads.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

pub type Complex64 = Complex<f64>;

const ZERO: Complex64 = Complex::new(0.0, 0.0);
const ONE: Complex64 = Complex::new(1.0, 0.0);

/// Square complex matrix with finite entries, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from row-major entries. Errors on non-square data, zero
    /// dimension or non-finite entries.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("matrix dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for dim {}, got {}",
                dim * dim,
                dim,
                data.len()
            )));
        }
        if !data.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * dim + i] = v;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let entries: Vec<Complex64> = diag.iter().map(|&x| Complex::new(x, 0.0)).collect();
        Self::from_diag(&entries)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matrix addition");
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matrix subtraction");
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Matrix product. Skips exact-zero left entries, so products of
    /// permutation or block-sparse matrices cost O(n²).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row_b = &other.data[k * n..(k + 1) * n];
                let row_o = &mut out[i * n..(i + 1) * n];
                for j in 0..n {
                    row_o[j] += a * row_b[j];
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// Hermitian part (m + m*)/2.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5)
    }

    /// Conjugation u m u*.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.mul(self).mul(&u.adjoint())
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "square matrix expected");
        let n = m.nrows();
        Self::from_fn(n, |i, j| m[(i, j)])
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::add(self, other)
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::sub(self, other)
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::mul(self, other)
    }
}

// ---------------------------------------------------------------------------
// JSON schema: {"dim": n, "entries": [[re, im], ...]} row-major, length n².

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.data.iter().map(|c| [c.re, c.im]).collect();
        MatrixJson { dim: self.dim, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        let data = raw.entries.iter().map(|&[re, im]| Complex::new(re, im)).collect();
        ComplexMatrix::new(raw.dim, data).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Traces and norms.

/// Unnormalized trace Tr(m) = Σ m_ii.
pub fn tr_unnormalized(m: &ComplexMatrix) -> Complex64 {
    (0..m.dim()).map(|i| m.get(i, i)).sum()
}

/// Normalized trace tr(m) = Tr(m)/dim, the tracial state at finite dimension.
pub fn tr_normalized(m: &ComplexMatrix) -> Complex64 {
    tr_unnormalized(m) / m.dim() as f64
}

/// Trace norm ‖m‖_{1,Tr}: sum of singular values.
pub fn norm_1_tr(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Hilbert–Schmidt norm sqrt(tr(m*m)). `normalized` selects the ‖·‖_{2,tr}
/// convention (trace divided by dim); the two satisfy
/// ‖·‖_{2,tr} = ‖·‖_{2,Tr}/√dim.
pub fn norm_2(m: &ComplexMatrix, normalized: bool) -> f64 {
    let sq: f64 = m.entries().iter().map(|c| c.norm_sqr()).sum();
    if normalized {
        (sq / m.dim() as f64).sqrt()
    } else {
        sq.sqrt()
    }
}

/// Operator norm: largest singular value.
pub fn norm_op(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Singular values, descending.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let svd = nalgebra::SVD::try_new(m.to_nalgebra(), false, false, f64::EPSILON, 4096)
        .ok_or_else(|| Error::NumericalFailure("SVD did not converge".into()))?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    Ok(sv)
}

// ---------------------------------------------------------------------------
// Checked operator types.

/// Hermitian within ‖m − m*‖_op ≤ 1e−12·‖m‖_op.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let scale = norm_op(&m)?;
        let diff = &m - &m.adjoint();
        // Frobenius bounds the operator norm from above; only compute the
        // exact defect when the cheap check fails.
        let fro = norm_2(&diff, false);
        if fro > tol::HERMITIAN_REL * scale {
            let defect = norm_op(&diff)?;
            if defect > tol::HERMITIAN_REL * scale {
                return Err(Error::NotHermitian { defect, bound: tol::HERMITIAN_REL * scale });
            }
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        HermitianOperator::new(ComplexMatrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Positive operator with unnormalized trace 1 (within tolerances).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityOperator(HermitianOperator);

impl DensityOperator {
    pub fn new(h: HermitianOperator) -> Result<Self> {
        let spectrum = hermitian_eigh(&h)?;
        let min = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -tol::PSD_EIG_FLOOR {
            return Err(Error::NotDensity(format!("min eigenvalue {min:.3e}")));
        }
        let trace = tr_unnormalized(h.matrix());
        if (trace.re - 1.0).abs() > tol::TRACE_ONE || trace.im.abs() > tol::TRACE_ONE {
            return Err(Error::NotDensity(format!("trace {trace} is not 1")));
        }
        Ok(Self(h))
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(m)?)
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(HermitianOperator::new_unchecked(m))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.matrix()
    }

    pub fn hermitian(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        DensityOperator::from_matrix(m).map_err(serde::de::Error::custom)
    }
}

/// Unitary within ‖uu* − I‖_op ≤ 1e−10.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let defect_m = &m.mul(&m.adjoint()) - &ComplexMatrix::identity(m.dim());
        let fro = norm_2(&defect_m, false);
        if fro > tol::UNITARY {
            let defect = norm_op(&defect_m)?;
            if defect > tol::UNITARY {
                return Err(Error::NotUnitary { defect });
            }
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix(self.0.adjoint())
    }
}

impl<'de> Deserialize<'de> for UnitaryMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        UnitaryMatrix::new(ComplexMatrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition.

/// Eigenvalues (real, descending) and orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// Column i of the eigenvector matrix.
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        let n = self.eigenvectors.dim();
        (0..n).map(|r| self.eigenvectors.get(r, i)).collect()
    }

    /// VΛV*.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_to_eigenvalues(|x| x)
    }

    /// V f(Λ) V*.
    pub fn apply_to_eigenvalues(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = v.get(i, k);
                if vi == ZERO {
                    continue;
                }
                for j in 0..n {
                    let t = vi * v.get(j, k).conj() * w;
                    let cur = out.get(i, j);
                    out.set(i, j, cur + t);
                }
            }
        }
        out
    }
}

/// Full Hermitian eigendecomposition, eigenvalues descending.
pub fn hermitian_eigh(h: &HermitianOperator) -> Result<Spectrum> {
    let m = h.matrix().hermitian_part().to_nalgebra();
    let eig = nalgebra::SymmetricEigen::try_new(m, f64::EPSILON, 8192)
        .ok_or_else(|| Error::NumericalFailure("eigendecomposition did not converge".into()))?;
    let n = h.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Spectrum { eigenvalues, eigenvectors })
}

/// Positive square root of a PSD operator (eigenvalues in
/// [-1e−10, 0] are clipped to zero; anything lower is an error).
pub fn psd_sqrt(h: &HermitianOperator) -> Result<ComplexMatrix> {
    let spectrum = hermitian_eigh(h)?;
    let min = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -tol::PSD_EIG_FLOOR {
        return Err(Error::NotPositive(min));
    }
    Ok(spectrum.apply_to_eigenvalues(|x| if x > 0.0 { x.sqrt() } else { 0.0 }))
}

// ---------------------------------------------------------------------------
// Projection onto the density-operator set.

/// Nearest density operator: eigenvalues clipped at 0 then rescaled to
/// trace 1. Inputs that already satisfy the density invariants are
/// returned unchanged, making the projection an exact fixed point there.
pub fn nearest_density(h: &HermitianOperator) -> Result<DensityOperator> {
    let spectrum = hermitian_eigh(h)?;
    let min = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
    let trace: f64 = spectrum.eigenvalues.iter().sum();
    if min >= 0.0 && (trace - 1.0).abs() <= tol::TRACE_ONE {
        return Ok(DensityOperator::new_unchecked(h.matrix().clone()));
    }
    let clipped_trace: f64 = spectrum.eigenvalues.iter().filter(|&&x| x > 0.0).sum();
    if clipped_trace <= 0.0 {
        return Err(Error::DegenerateInput(
            "matrix is zero after clipping negative eigenvalues".into(),
        ));
    }
    let projected = spectrum.apply_to_eigenvalues(|x| if x > 0.0 { x / clipped_trace } else { 0.0 });
    Ok(DensityOperator::new_unchecked(projected))
}

// ---------------------------------------------------------------------------
// Seeded random ensembles.

/// Derive the seed of trial `index` from a master seed (splitmix64 step).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E3779B97F4A7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre ensemble: i.i.d. standard complex Gaussian entries.
pub fn random_matrix(dim: usize, seed: u64) -> ComplexMatrix {
    assert!(dim > 0, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..dim * dim).map(|_| complex_normal(&mut rng)).collect();
    ComplexMatrix { dim, data }
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phase
/// ambiguity fixed by making the R-factor diagonal positive.
pub fn haar_unitary(dim: usize, seed: u64) -> UnitaryMatrix {
    let g = random_matrix(dim, seed).to_nalgebra();
    let qr = nalgebra::QR::new(g);
    let r = qr.r();
    let q = qr.q();
    let mut u = ComplexMatrix::from_nalgebra(&q);
    // u <- q · diag(r_ii / |r_ii|)
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { ONE };
        for i in 0..dim {
            let v = u.get(i, j);
            u.set(i, j, v * phase);
        }
    }
    debug_assert!({
        let d = &u.mul(&u.adjoint()) - &ComplexMatrix::identity(dim);
        norm_2(&d, false) < 1e-12 * (dim as f64)
    });
    UnitaryMatrix::new_unchecked(u)
}

/// Random density operator: normalized positive square GG*/Tr(GG*) of a
/// Ginibre matrix.
pub fn random_density(dim: usize, seed: u64) -> DensityOperator {
    let g = random_matrix(dim, seed);
    let p = g.mul(&g.adjoint());
    let trace = tr_unnormalized(&p).re;
    let h = p.scale(Complex::new(1.0 / trace, 0.0)).hermitian_part();
    DensityOperator::new_unchecked(h)
}
