//! The discrete Fourier transform side of the periodic classification:
//! Fourier matrix U_n, the Gauss multiplicity table, eigenspace
//! extraction by spectral projectors, palindrome structure, and the
//! bridge between DFT eigenvectors and sqrt(n)-periodic eigenmeasures.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{FourthRoot, MeasureExpr, ZAtom};
use crate::scalar::QuadScalar;

/// Singular-value cutoff for rank detection in the eigenbasis builder.
pub const RANK_CUTOFF: f64 = 1e-9;

/// Residual tolerance for accepting a vector as a DFT eigenvector.
pub const EIGVEC_TOL: f64 = 1e-9;

/// The unitary Fourier matrix with entries omega^{k l} / sqrt(n),
/// omega = e^{-2 pi i / n}, zero-based indices.
#[derive(Debug, Clone)]
pub struct FourierMatrix {
    n: usize,
    mat: DMatrix<Complex64>,
}

impl FourierMatrix {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroAmbient);
        }
        let scale = 1.0 / (n as f64).sqrt();
        let mat = DMatrix::from_fn(n, n, |k, l| {
            let angle = -2.0 * std::f64::consts::PI * ((k * l) % n) as f64 / n as f64;
            Complex64::from_polar(scale, angle)
        });
        Ok(Self { n, mat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.mat * v
    }
}

/// Eigenvalue multiplicities (m_1, m_i, m_-1, m_-i) of U_n, per the
/// closed form known to Gauss.
pub fn multiplicities(n: u64) -> (u64, u64, u64, u64) {
    let m = n / 4;
    match n % 4 {
        0 => (m + 1, m - 1, m, m),
        1 => (m + 1, m, m, m),
        2 => (m + 1, m, m + 1, m),
        _ => (m + 1, m, m + 1, m + 1),
    }
}

pub fn multiplicity(n: u64, lambda: FourthRoot) -> u64 {
    let (m1, mi, mm1, mmi) = multiplicities(n);
    match lambda {
        FourthRoot::One => m1,
        FourthRoot::I => mi,
        FourthRoot::MinusOne => mm1,
        FourthRoot::MinusI => mmi,
    }
}

/// An orthonormal basis of the lambda-eigenspace of U_n.
#[derive(Debug, Clone)]
pub struct EigvecSet {
    pub lambda: FourthRoot,
    pub vectors: Vec<DVector<Complex64>>,
}

impl EigvecSet {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Squared distance of a (normalized) vector from the span.
    pub fn projection_residual(&self, v: &DVector<Complex64>) -> f64 {
        let v = v / Complex64::new(v.norm(), 0.0);
        let mut proj = DVector::from_element(v.len(), Complex64::new(0.0, 0.0));
        for u in &self.vectors {
            let coef = u.dotc(&v);
            proj += u * coef;
        }
        (&v - proj).norm()
    }
}

/// The spectral projector P_lambda = (1/4) sum_j lambda^{-j} U^j. For
/// n <= 2 (U^2 = I) this degenerates to (1/2)(I +- U) for lambda = +-1
/// and to zero for lambda = +-i.
fn spectral_projector(u: &FourierMatrix, lambda: FourthRoot) -> DMatrix<Complex64> {
    let n = u.n();
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut acc = id.clone();
    let mut power = id;
    for j in 1..4i64 {
        power = &power * u.matrix();
        let w = FourthRoot::i_power(-lambda.exponent() * j).value();
        acc += &power * w;
    }
    acc * Complex64::new(0.25, 0.0)
}

/// Orthonormal basis of ker(U_n - lambda) via the spectral projector
/// applied to the standard basis, followed by pivoted Gram-Schmidt with
/// cutoff `RANK_CUTOFF`.
pub fn eigenbasis(n: usize, lambda: FourthRoot) -> Result<EigvecSet> {
    let u = FourierMatrix::new(n)?;
    let p = spectral_projector(&u, lambda);
    let mut columns: Vec<DVector<Complex64>> =
        (0..n).map(|j| p.column(j).into_owned()).collect();
    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    loop {
        // pivot on the largest residual column
        let (best, norm) = columns
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap_or((0, 0.0));
        if norm <= RANK_CUTOFF {
            break;
        }
        let mut v = columns[best].clone();
        // re-orthogonalize twice for numerical cleanliness
        for _ in 0..2 {
            for u in &basis {
                let coef = u.dotc(&v);
                v -= u * coef;
            }
        }
        let nv = v.norm();
        if nv <= RANK_CUTOFF {
            columns[best] = DVector::from_element(n, Complex64::new(0.0, 0.0));
            continue;
        }
        v /= Complex64::new(nv, 0.0);
        for c in &mut columns {
            let coef = v.dotc(&*c);
            *c -= &v * coef;
        }
        basis.push(v);
    }
    Ok(EigvecSet { lambda, vectors: basis })
}

/// Checks the palindrome structure c_0 = lambda^2 c_0 and
/// c_{n-k} = lambda^2 c_k forced by the support symmetry.
pub fn check_palindrome(c: &[Complex64], lambda: FourthRoot, tol: f64) -> bool {
    let n = c.len();
    if n == 0 {
        return false;
    }
    let l2 = lambda.square().value();
    if (c[0] - l2 * c[0]).norm() > tol {
        return false;
    }
    for k in 1..n {
        if (c[n - k] - l2 * c[k]).norm() > tol {
            return false;
        }
    }
    true
}

/// Builds the sqrt(n)-periodic eigenmeasure sum_m c_m Z_{0, m/sqrt(n), sqrt(n)}
/// from a DFT eigenvector; rejects vectors with U_n c != lambda c.
pub fn periodic_eigenmeasure(
    c: &[Complex64],
    lambda: FourthRoot,
    n: u64,
) -> Result<MeasureExpr> {
    if c.len() != n as usize || n == 0 {
        return Err(Error::Invalid(format!(
            "coefficient vector length {} does not match n = {n}",
            c.len()
        )));
    }
    let u = FourierMatrix::new(n as usize)?;
    let v = DVector::from_column_slice(c);
    let residual = (u.apply(&v) - &v * lambda.value()).norm();
    let scale = v.norm().max(1.0);
    if residual > EIGVEC_TOL * scale {
        return Err(Error::NotEigenvector { residual, tol: EIGVEC_TOL * scale });
    }
    let alpha = QuadScalar::sqrt(n)?;
    let inv_alpha = alpha.recip()?;
    let atoms = c
        .iter()
        .enumerate()
        .map(|(m, amp)| {
            Ok(ZAtom {
                amp: *amp,
                r: QuadScalar::zero(),
                s: inv_alpha.scale_int(&num_bigint::BigInt::from(m)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    MeasureExpr::with_alpha(alpha, atoms).map(|m| m.canonicalize())
}

/// Extracts (n, c) from a measure in periodic normal form: all atoms with
/// r = 0 and s on (1/sqrt(n)) Z. Returns `None` otherwise.
pub fn measure_to_vector(mu: &MeasureExpr) -> Option<(u64, Vec<Complex64>)> {
    let mu = mu.canonicalize();
    let n = mu.ambient_n()?;
    let alpha = mu.alpha();
    let mut c = vec![Complex64::new(0.0, 0.0); n as usize];
    for atom in mu.atoms() {
        if !atom.r.is_zero() {
            return None;
        }
        // s must be m / alpha for an integer m; equivalently s * alpha is
        // a rational integer
        let t = atom.s.checked_mul(alpha).ok()?;
        if !t.is_rational() || !t.rational_part().is_integer() {
            return None;
        }
        let m = t.rational_part().to_integer();
        let idx = ((m.clone() % n) + n) % n;
        let idx: u64 = num_traits::ToPrimitive::to_u64(&idx)?;
        c[idx as usize] += atom.amp;
    }
    Some((n, c))
}

/// JSON form of a lambda-eigenspace, as emitted by the CLI.
#[derive(Debug, Serialize)]
pub struct EigvecSetJson {
    pub n: usize,
    pub lambda: String,
    pub vectors: Vec<Vec<crate::measure::ComplexJson>>,
}

impl EigvecSet {
    pub fn to_json(&self, n: usize) -> EigvecSetJson {
        EigvecSetJson {
            n,
            lambda: self.lambda.as_str().to_string(),
            vectors: self
                .vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|z| crate::measure::ComplexJson { re: z.re, im: z.im })
                        .collect()
                })
                .collect(),
        }
    }
}
