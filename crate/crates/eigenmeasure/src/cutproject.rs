//! Shadows of the rotated planar lattice. Rotating Z^2 by theta gives a
//! self-dual lattice; pushing a window function g along the second
//! coordinate leaves a weighted comb on the line whose Fourier behaviour
//! mirrors that of g. For rational tan(theta) = p/q the comb lives on
//! (1/alpha) Z with alpha = sqrt(p^2 + q^2) and its weights are constant
//! along residue classes mod p^2 + q^2.

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::measure::FourthRoot;
use crate::schwartz::{pair_comb, TestFunction, DEFAULT_WINDOW};

/// Default truncation radius for lattice enumeration.
pub const DEFAULT_RADIUS: f64 = 12.0;

/// Merging tolerance for comb positions produced from float geometry.
pub const MERGE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Slope {
    /// tan(theta) = p/q in lowest terms, q > 0.
    Rational { p: i64, q: i64 },
    Float { cos: f64, sin: f64 },
}

/// The lattice R_theta Z^2, with points (m cos - n sin, m sin + n cos).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice2D {
    slope: Slope,
}

/// One enumerated lattice point with its integer coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticePoint {
    pub m: i64,
    pub n: i64,
    pub x: f64,
    pub y: f64,
}

impl Lattice2D {
    pub fn from_rational(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::NonRationalLattice);
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        Ok(Self { slope: Slope::Rational { p, q } })
    }

    pub fn from_angle(theta: f64) -> Self {
        Self { slope: Slope::Float { cos: theta.cos(), sin: theta.sin() } }
    }

    /// (p, q) when the slope is rational.
    pub fn rational_slope(&self) -> Option<(i64, i64)> {
        match self.slope {
            Slope::Rational { p, q } => Some((p, q)),
            Slope::Float { .. } => None,
        }
    }

    pub fn cos_sin(&self) -> (f64, f64) {
        match self.slope {
            Slope::Rational { p, q } => {
                let alpha = ((p * p + q * q) as f64).sqrt();
                (q as f64 / alpha, p as f64 / alpha)
            }
            Slope::Float { cos, sin } => (cos, sin),
        }
    }

    /// All lattice points with |x| <= rx and |y| <= ry.
    pub fn points(&self, rx: f64, ry: f64) -> Vec<LatticePoint> {
        let (c, s) = self.cos_sin();
        // the inverse rotation bounds the integer coordinates
        let bound = (rx.max(ry) * std::f64::consts::SQRT_2).ceil() as i64 + 1;
        let mut out = Vec::new();
        for m in -bound..=bound {
            for n in -bound..=bound {
                let x = m as f64 * c - n as f64 * s;
                let y = m as f64 * s + n as f64 * c;
                if x.abs() <= rx + 1e-12 && y.abs() <= ry + 1e-12 {
                    out.push(LatticePoint { m, n, x, y });
                }
            }
        }
        out
    }
}

/// A finite comb sum_i w_i delta_{x_i} with float positions, sorted.
#[derive(Debug, Clone)]
pub struct WeightedComb {
    atoms: Vec<(f64, Complex64)>,
}

impl WeightedComb {
    pub fn new(mut atoms: Vec<(f64, Complex64)>) -> Self {
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Self { atoms }
    }

    pub fn atoms(&self) -> &[(f64, Complex64)] {
        &self.atoms
    }

    pub fn max_amp(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w.norm()).fold(0.0, f64::max)
    }
}

/// The shadow comb of the window g: weight sum_{y} g(y) at each distinct
/// x over lattice points within |x| <= radius. The y-sum is truncated at
/// `DEFAULT_WINDOW` plus the requested radius, which is far past the decay
/// of any admissible window. Atoms with total weight below eps are dropped.
pub fn shadow_measure(
    lattice: &Lattice2D,
    g: &TestFunction,
    radius: f64,
    eps: f64,
) -> Result<WeightedComb> {
    if radius <= 0.0 {
        return Err(Error::NonPositiveWindow);
    }
    let ry = DEFAULT_WINDOW + radius;
    let pts = lattice.points(radius, ry);
    let merged: Vec<(f64, Complex64)> = match lattice.slope {
        Slope::Rational { p, q } => {
            // x = (m q - n p)/alpha exactly, so merge on the integer key
            let alpha = ((p * p + q * q) as f64).sqrt();
            let mut acc: std::collections::BTreeMap<i64, Complex64> =
                std::collections::BTreeMap::new();
            for pt in pts {
                let j = pt.m * q - pt.n * p;
                *acc.entry(j).or_insert(Complex64::new(0.0, 0.0)) += g.eval(pt.y);
            }
            acc.into_iter().map(|(j, w)| (j as f64 / alpha, w)).collect()
        }
        Slope::Float { .. } => {
            let mut sorted: Vec<(f64, Complex64)> =
                pts.iter().map(|pt| (pt.x, g.eval(pt.y))).collect();
            sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut acc: Vec<(f64, Complex64)> = Vec::new();
            for (x, w) in sorted {
                match acc.last_mut() {
                    Some((x0, w0)) if (x - *x0).abs() <= MERGE_EPS => *w0 += w,
                    _ => acc.push((x, w)),
                }
            }
            acc
        }
    };
    Ok(WeightedComb::new(
        merged.into_iter().filter(|(_, w)| w.norm() > eps).collect(),
    ))
}

/// Reads off the residue-class coefficients of a rational shadow:
/// the atom at x = j/alpha belongs to class j mod (p^2 + q^2). Returns
/// the class coefficients and the largest deviation of any atom from
/// its class representative.
pub fn coset_coefficients(
    w: &WeightedComb,
    p: i64,
    q: i64,
) -> Result<(Vec<Complex64>, f64)> {
    if p == 0 && q == 0 {
        return Err(Error::NonRationalLattice);
    }
    let big_n = p * p + q * q;
    let alpha = (big_n as f64).sqrt();
    let mut coefs: Vec<Option<Complex64>> = vec![None; big_n as usize];
    let mut deviation = 0.0f64;
    for &(x, amp) in w.atoms() {
        let j = (x * alpha).round() as i64;
        if (x * alpha - j as f64).abs() > 1e-6 {
            return Err(Error::Invalid(format!(
                "comb position {x} is not on (1/sqrt({big_n})) Z"
            )));
        }
        let class = (j.rem_euclid(big_n)) as usize;
        match coefs[class] {
            None => coefs[class] = Some(amp),
            Some(c) => deviation = deviation.max((c - amp).norm()),
        }
    }
    Ok((
        coefs
            .into_iter()
            .map(|c| c.unwrap_or(Complex64::new(0.0, 0.0)))
            .collect(),
        deviation,
    ))
}

/// Determines which fourth root lambda satisfies g^ = lambda g, to
/// within tol on a sample grid. Errors if no root fits.
pub fn window_eigenvalue(g: &TestFunction, tol: f64) -> Result<FourthRoot> {
    let ft = g.analytic_ft();
    let grid: Vec<f64> = (0..=60).map(|k| -3.0 + k as f64 * 0.1).collect();
    let scale = grid
        .iter()
        .map(|&x| g.eval(x).norm())
        .fold(0.0f64, f64::max)
        .max(1e-30);
    let mut best: Option<(FourthRoot, f64)> = None;
    for lambda in FourthRoot::ALL {
        let dev = grid
            .iter()
            .map(|&x| (ft.eval(x) - lambda.value() * g.eval(x)).norm())
            .fold(0.0f64, f64::max);
        if best.map_or(true, |(_, d)| dev < d) {
            best = Some((lambda, dev));
        }
    }
    let (lambda, dev) = best.unwrap();
    if dev > tol * scale {
        return Err(Error::NotEigenfunction(format!(
            "window is not a Fourier eigenfunction (best deviation {dev:.3e})"
        )));
    }
    Ok(lambda)
}

/// Outcome of one shadow verification run.
#[derive(Debug, Clone)]
pub struct ShadowReport {
    pub lambda: FourthRoot,
    pub max_residual: f64,
    pub pass: bool,
}

/// Verifies the duality of the shadow: if g^ = lambda g then pairing the
/// comb with phi^ must equal conj(lambda) times pairing with phi, for
/// every probe. Residuals are relative to the largest pairing magnitude.
pub fn verify_shadow_eigen(
    lattice: &Lattice2D,
    g: &TestFunction,
    probes: &[TestFunction],
    tol: f64,
) -> Result<ShadowReport> {
    let lambda = window_eigenvalue(g, 1e-9)?;
    let w = shadow_measure(lattice, g, DEFAULT_RADIUS, 0.0)?;
    let lam_bar = lambda.value().conj();
    let mut max_residual = 0.0f64;
    let mut scale = 1.0f64;
    for phi in probes {
        let lhs = pair_comb(&w, &phi.analytic_ft());
        let rhs = lam_bar * pair_comb(&w, phi);
        max_residual = max_residual.max((lhs - rhs).norm());
        scale = scale.max(lhs.norm()).max(rhs.norm());
    }
    let rel = max_residual / scale;
    Ok(ShadowReport { lambda, max_residual: rel, pass: rel <= tol })
}

/// Checks the planar Poisson summation identity on the self-dual lattice
/// with separable probes (phi, psi): summing phi(x) psi(y) over lattice
/// points must equal the same sum with both factors transformed.
pub fn verify_psf_2d(
    lattice: &Lattice2D,
    probes: &[(TestFunction, TestFunction)],
    tol: f64,
) -> Result<ShadowReport> {
    let pts = lattice.points(DEFAULT_RADIUS + DEFAULT_WINDOW, DEFAULT_RADIUS + DEFAULT_WINDOW);
    let mut max_residual = 0.0f64;
    let mut scale = 1.0f64;
    for (phi, psi) in probes {
        let (phi_hat, psi_hat) = (phi.analytic_ft(), psi.analytic_ft());
        let mut direct = Complex64::new(0.0, 0.0);
        let mut dual = Complex64::new(0.0, 0.0);
        for pt in &pts {
            direct += phi.eval(pt.x) * psi.eval(pt.y);
            dual += phi_hat.eval(pt.x) * psi_hat.eval(pt.y);
        }
        max_residual = max_residual.max((direct - dual).norm());
        scale = scale.max(direct.norm());
    }
    let rel = max_residual / scale;
    Ok(ShadowReport { lambda: FourthRoot::One, max_residual: rel, pass: rel <= tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rational_slope_normalization() {
        let l = Lattice2D::from_rational(2, 4).unwrap();
        assert_eq!(l.rational_slope(), Some((1, 2)));
        let l = Lattice2D::from_rational(1, -1).unwrap();
        assert_eq!(l.rational_slope(), Some((-1, 1)));
        assert!(Lattice2D::from_rational(1, 0).is_err());
    }

    #[test]
    fn axis_aligned_points() {
        let l = Lattice2D::from_rational(0, 1).unwrap();
        let pts = l.points(1.5, 0.5);
        // x in {-1, 0, 1}, y = 0 only
        assert_eq!(pts.len(), 3);
        for pt in &pts {
            assert_eq!(pt.y, 0.0);
            assert_eq!(pt.x, pt.m as f64);
        }
    }

    #[test]
    fn eighth_turn_geometry() {
        let l = Lattice2D::from_rational(1, 1).unwrap();
        let (c, s) = l.cos_sin();
        let r = 0.5f64.sqrt();
        assert!((c - r).abs() < 1e-15 && (s - r).abs() < 1e-15);
        // (1,1) rotates to (0, sqrt2)
        let pts = l.points(0.1, 2.0);
        assert!(pts
            .iter()
            .any(|pt| pt.m == 1 && pt.n == 1 && pt.x.abs() < 1e-12 && (pt.y - 2f64.sqrt()).abs() < 1e-12));
    }

    #[test]
    fn shadow_of_axis_lattice_is_plain_comb() {
        // theta = 0: every integer x carries weight g(0) + 2 sum_{n>0} g(n)
        let l = Lattice2D::from_rational(0, 1).unwrap();
        let g = TestFunction::gaussian(1.0, 0.0, 0.0);
        let w = shadow_measure(&l, &g, 2.5, 0.0).unwrap();
        assert_eq!(w.atoms().len(), 5);
        let expect: f64 = (-40..=40i64)
            .map(|n| (-std::f64::consts::PI * (n * n) as f64).exp())
            .sum();
        for &(x, amp) in w.atoms() {
            assert!((x - x.round()).abs() < 1e-12);
            assert!((amp - cx(expect)).norm() < 1e-12);
        }
    }

    #[test]
    fn eighth_turn_coset_weights() {
        // tan theta = 1: positions on (1/sqrt2) Z, even sites weigh
        // sum g(sqrt2 m), odd sites sum g(sqrt2 m + 1/sqrt2)
        let l = Lattice2D::from_rational(1, 1).unwrap();
        let g = TestFunction::hermite_fn(0);
        let w = shadow_measure(&l, &g, 6.0, 0.0).unwrap();
        let (coefs, dev) = coset_coefficients(&w, 1, 1).unwrap();
        assert_eq!(coefs.len(), 2);
        assert!(dev < 1e-12);

        let root2 = 2f64.sqrt();
        let c0: Complex64 = (-30..=30i64).map(|m| g.eval(root2 * m as f64)).sum();
        let c1: Complex64 = (-30..=30i64)
            .map(|m| g.eval(root2 * m as f64 + 1.0 / root2))
            .sum();
        assert!((coefs[0] - c0).norm() < 1e-12);
        assert!((coefs[1] - c1).norm() < 1e-12);
        // the classical silver ratio shows up as the weight ratio
        assert!((coefs[0] / coefs[1] - cx(1.0 + root2)).norm() < 1e-9);
    }

    #[test]
    fn window_eigenvalue_detection() {
        for (k, expect) in [
            (0, FourthRoot::One),
            (1, FourthRoot::MinusI),
            (2, FourthRoot::MinusOne),
            (3, FourthRoot::I),
            (4, FourthRoot::One),
        ] {
            let g = TestFunction::hermite_fn(k);
            assert_eq!(window_eigenvalue(&g, 1e-9).unwrap(), expect, "degree {k}");
        }
        // a shifted Gaussian is not an eigenfunction
        let g = TestFunction::gaussian(1.0, 0.0, 0.4);
        assert!(window_eigenvalue(&g, 1e-9).is_err());
    }

    #[test]
    fn shadow_duality_eighth_turn() {
        let l = Lattice2D::from_rational(1, 1).unwrap();
        let probes = crate::schwartz::default_probes();
        for k in [0usize, 2] {
            let g = TestFunction::hermite_fn(k);
            let report = verify_shadow_eigen(&l, &g, &probes, 1e-9).unwrap();
            assert!(report.pass, "degree {k}: residual {}", report.max_residual);
        }
    }

    #[test]
    fn odd_window_kills_the_symmetric_shadow() {
        // h_1 is odd and theta = pi/4 pairs +-y at each site: the comb
        // vanishes identically, so duality holds trivially
        let l = Lattice2D::from_rational(1, 1).unwrap();
        let g = TestFunction::hermite_fn(1);
        let w = shadow_measure(&l, &g, 6.0, 0.0).unwrap();
        assert!(w.max_amp() < 1e-10);
    }

    #[test]
    fn irrational_slope_duality() {
        let l = Lattice2D::from_angle((1.0 / std::f64::consts::PI).atan());
        assert!(l.rational_slope().is_none());
        let probes: Vec<TestFunction> = vec![
            TestFunction::gaussian(1.0, 0.0, 0.0),
            TestFunction::gaussian(2.0, 0.0, 0.0),
            TestFunction::gaussian(1.0, 0.5, 0.0),
        ];
        let g = TestFunction::hermite_fn(0);
        let report = verify_shadow_eigen(&l, &g, &probes, 1e-6).unwrap();
        assert!(report.pass, "residual {}", report.max_residual);
    }

    #[test]
    fn planar_poisson_summation() {
        let probes = vec![
            (TestFunction::gaussian(1.0, 0.0, 0.0), TestFunction::gaussian(1.0, 0.0, 0.0)),
            (TestFunction::gaussian(2.0, 0.0, 0.0), TestFunction::gaussian(0.5, 0.0, 0.0)),
            (TestFunction::gaussian(1.0, 0.25, 0.0), TestFunction::gaussian(1.5, 0.0, 0.0)),
        ];
        for lattice in [
            Lattice2D::from_rational(0, 1).unwrap(),
            Lattice2D::from_rational(1, 1).unwrap(),
            Lattice2D::from_angle(std::f64::consts::FRAC_PI_6),
        ] {
            let report = verify_psf_2d(&lattice, &probes, 1e-8).unwrap();
            assert!(report.pass, "residual {}", report.max_residual);
        }
    }
}
