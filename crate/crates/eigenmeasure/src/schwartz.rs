//! Test-function engine and numerical oracle: Hermite functions and a
//! Gaussian family closed under the Fourier transform, measure-function
//! pairing, and the distributional-transform verification harness.

use num_complex::Complex64;
use serde::Serialize;

use crate::cutproject::WeightedComb;
use crate::error::{Error, Result};
use crate::measure::MeasureExpr;

/// Stability cap for the Hermite recurrence.
pub const HERMITE_CAP: usize = 60;

/// Default truncation window for pairings.
pub const DEFAULT_WINDOW: f64 = 12.0;

/// Quadrature step for `quad_inner` and the brute-force transform.
pub const QUAD_STEP: f64 = 1.0 / 256.0;

/// Normalized Hermite function h_k(x), evaluated by the stable
/// three-term recurrence
/// h_{k+1}(x) = 2 sqrt(pi/(k+1)) x h_k(x) - sqrt(k/(k+1)) h_{k-1}(x)
/// with h_0(x) = 2^{1/4} e^{-pi x^2}.
pub fn hermite(k: usize, x: f64) -> Result<f64> {
    if k > HERMITE_CAP {
        return Err(Error::DegreeCap(k, HERMITE_CAP));
    }
    let h0 = 2f64.powf(0.25) * (-std::f64::consts::PI * x * x).exp();
    if k == 0 {
        return Ok(h0);
    }
    let mut prev = h0;
    let mut cur = 2.0 * (std::f64::consts::PI).sqrt() * x * h0;
    for j in 1..k {
        let jf = j as f64;
        let next = 2.0 * (std::f64::consts::PI / (jf + 1.0)).sqrt() * x * cur
            - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// One term of a test function.
#[derive(Debug, Clone)]
pub enum Term {
    /// amp * e^{2 pi i b (x - c)} * e^{-pi a (x - c)^2} with width a > 0,
    /// modulation b and shift c.
    Gaussian { amp: Complex64, a: f64, b: f64, c: f64 },
    /// amp * h_k(x).
    Hermite { amp: Complex64, k: usize },
}

/// A Schwartz-class probe: a finite sum of Gaussian and Hermite terms,
/// closed under the analytic Fourier transform.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub terms: Vec<Term>,
}

impl TestFunction {
    pub fn gaussian(a: f64, b: f64, c: f64) -> Self {
        Self { terms: vec![Term::Gaussian { amp: Complex64::new(1.0, 0.0), a, b, c }] }
    }

    pub fn hermite_fn(k: usize) -> Self {
        Self { terms: vec![Term::Hermite { amp: Complex64::new(1.0, 0.0), k }] }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            match term {
                Term::Gaussian { amp, a, b, c } => {
                    let u = x - c;
                    let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * b * u);
                    acc += amp * phase * (-std::f64::consts::PI * a * u * u).exp();
                }
                Term::Hermite { amp, k } => {
                    acc += amp * hermite(*k, x).expect("degree checked at construction");
                }
            }
        }
        acc
    }

    /// Term-by-term closed-form Fourier transform (kernel e^{-2 pi i x y}).
    /// Gaussians swap shift and modulation roles; Hermite terms scale by
    /// (-i)^k.
    pub fn analytic_ft(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|term| match term {
                Term::Gaussian { amp, a, b, c } => {
                    let factor = Complex64::from_polar(
                        1.0 / a.sqrt(),
                        -2.0 * std::f64::consts::PI * b * c,
                    );
                    Term::Gaussian { amp: amp * factor, a: 1.0 / a, b: -c, c: *b }
                }
                Term::Hermite { amp, k } => {
                    let factor = match k % 4 {
                        0 => Complex64::new(1.0, 0.0),
                        1 => Complex64::new(0.0, -1.0),
                        2 => Complex64::new(-1.0, 0.0),
                        _ => Complex64::new(0.0, 1.0),
                    };
                    Term::Hermite { amp: amp * factor, k: *k }
                }
            })
            .collect();
        Self { terms }
    }

    /// A short human-readable description, used in pairing reports.
    pub fn describe(&self) -> String {
        self.terms
            .iter()
            .map(|t| match t {
                Term::Gaussian { a, b, c, .. } => format!("gaussian(a={a},b={b},c={c})"),
                Term::Hermite { k, .. } => format!("hermite:{k}"),
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Pairs a comb expression with a probe: the truncated sum of
/// amplitude * phi(x) over the support within |x| <= R.
pub fn pair(mu: &MeasureExpr, phi: &TestFunction, window: f64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, amp) in mu.support_atoms(window)? {
        acc += amp * phi.eval(x);
    }
    Ok(acc)
}

/// Pairs a numeric weighted comb with a probe.
pub fn pair_comb(w: &WeightedComb, phi: &TestFunction) -> Complex64 {
    w.atoms().iter().map(|(x, amp)| amp * phi.eval(*x)).sum()
}

/// Residual record of one probe in a verification run.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeResidual {
    pub probe: String,
    pub residual: f64,
}

/// Outcome of a pairing verification: pass iff max residual < tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct PairingReport {
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub probes: Vec<ProbeResidual>,
}

impl PairingReport {
    pub fn from_residuals(probes: Vec<ProbeResidual>, tol: f64) -> Self {
        let max_residual = probes.iter().map(|p| p.residual).fold(0.0, f64::max);
        Self { max_residual, tol, pass: max_residual < tol, probes }
    }
}

/// The default 27-probe set: Gaussian widths {1/2, 1, 2}, shifts
/// {0, 1/3, 1/sqrt2}, modulations {0, 1/2, 1}.
pub fn default_probes() -> Vec<TestFunction> {
    let mut probes = Vec::new();
    for &a in &[0.5, 1.0, 2.0] {
        for &c in &[0.0, 1.0 / 3.0, std::f64::consts::FRAC_1_SQRT_2] {
            for &b in &[0.0, 0.5, 1.0] {
                probes.push(TestFunction::gaussian(a, b, c));
            }
        }
    }
    probes
}

/// Checks the distributional identity <F mu, phi> = <mu, F phi> against
/// every probe.
pub fn verify_transform(
    mu: &MeasureExpr,
    probes: &[TestFunction],
    tol: f64,
) -> Result<PairingReport> {
    let transformed = crate::fourier::fourier(mu)?;
    let sup_t = transformed.support_atoms(DEFAULT_WINDOW)?;
    let sup_m = mu.support_atoms(DEFAULT_WINDOW)?;
    let sum = |sup: &[(f64, Complex64)], phi: &TestFunction| {
        sup.iter().map(|&(x, amp)| amp * phi.eval(x)).sum::<Complex64>()
    };
    let mut residuals = Vec::with_capacity(probes.len());
    for phi in probes {
        let lhs = sum(&sup_t, phi);
        let rhs = sum(&sup_m, &phi.analytic_ft());
        residuals.push(ProbeResidual { probe: phi.describe(), residual: (lhs - rhs).norm() });
    }
    Ok(PairingReport::from_residuals(residuals, tol))
}

/// |sum_{|m| <= K} h_k(m)|, with symmetric pairing so odd degrees cancel
/// exactly. Vanishes for k not divisible by 4.
pub fn hermite_sum_rule(k: usize, big_k: u64) -> Result<f64> {
    let mut acc = hermite(k, 0.0)?;
    for m in 1..=big_k {
        acc += hermite(k, m as f64)? + hermite(k, -(m as f64))?;
    }
    Ok(acc.abs())
}

/// <g|f> = integral of conj(g) f over [-12, 12] by composite Simpson
/// quadrature with step 1/256.
pub fn quad_inner(f: &TestFunction, g: &TestFunction) -> Complex64 {
    let r = DEFAULT_WINDOW;
    let n = (2.0 * r / QUAD_STEP).round() as usize; // even by construction
    let h = 2.0 * r / n as f64;
    let value = |i: usize| {
        let x = -r + i as f64 * h;
        g.eval(x).conj() * f.eval(x)
    };
    let mut acc = value(0) + value(n);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * value(i);
    }
    acc * (h / 3.0)
}

/// Brute-force quadrature Fourier transform at one frequency; the
/// independent oracle for `analytic_ft`.
pub fn quad_ft(phi: &TestFunction, y: f64) -> Complex64 {
    let r = DEFAULT_WINDOW;
    let n = (2.0 * r / QUAD_STEP).round() as usize;
    let h = 2.0 * r / n as f64;
    let value = |i: usize| {
        let x = -r + i as f64 * h;
        Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * x * y) * phi.eval(x)
    };
    let mut acc = value(0) + value(n);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * value(i);
    }
    acc * (h / 3.0)
}
