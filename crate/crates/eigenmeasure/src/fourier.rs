//! The Fourier operator on comb expressions and its order-4 cycle
//! structure: transform, powers, even/odd split, the four cycle
//! projectors and eigenmeasure classification.
//!
//! A single atom transforms as
//! F(Z_{r,s,alpha}) = (1/alpha) e^{2 pi i r s} Z_{-s, r, 1/alpha},
//! after which the coset decomposition brings the result back to the
//! integer ambient sqrt(n), so the operator is closed on expressions over
//! one ambient.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::measure::{FourthRoot, MeasureExpr, ZAtom};
use crate::scalar::PhaseExponent;

/// The cycle projector C_lambda = (1/4) sum_j lambda^{-j} F^j.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectorId {
    pub lambda: FourthRoot,
}

/// Brings an expression with rational alpha^2 = p/q to the integer
/// ambient sqrt(p q).
fn to_integer_ambient(mu: &MeasureExpr) -> Result<MeasureExpr> {
    let sq = mu.alpha_squared();
    let p = sq.numer().to_u64().ok_or_else(|| Error::Invalid("ambient overflow".into()))?;
    let q = sq.denom().to_u64().ok_or_else(|| Error::Invalid("ambient overflow".into()))?;
    mu.rebase(p, q)
}

/// The distributional Fourier transform. The result lives over the same
/// integer ambient sqrt(n) as the (rebased) input.
pub fn fourier(mu: &MeasureExpr) -> Result<MeasureExpr> {
    let mu = to_integer_ambient(&mu.canonicalize())?;
    let n = mu.ambient_n().expect("integer ambient after rebase");
    let alpha = mu.alpha().clone();
    let inv_alpha = alpha.recip()?;
    let inv_alpha_f = inv_alpha.to_f64();
    let mut atoms = Vec::with_capacity(mu.atoms().len());
    for atom in mu.atoms() {
        let rs = atom.r.checked_mul(&atom.s)?;
        let amp = atom.amp * inv_alpha_f * PhaseExponent::new(rs).value();
        atoms.push(ZAtom { amp, r: -atom.s.clone(), s: atom.r.clone() });
    }
    // transform side lives over 1/alpha; rebase (1/alpha)^2 = 1/n back
    let transformed = MeasureExpr::with_alpha(inv_alpha, atoms)?;
    transformed.rebase(1, n)
}

/// k-fold transform; k is reduced mod 4 and F^2 = reflection is used for
/// the even powers.
pub fn fourier_pow(mu: &MeasureExpr, k: i64) -> Result<MeasureExpr> {
    let mu = to_integer_ambient(&mu.canonicalize())?;
    match k.rem_euclid(4) {
        0 => Ok(mu),
        1 => fourier(&mu),
        2 => Ok(mu.reflect()),
        _ => fourier(&mu.reflect()),
    }
}

/// C_lambda(mu) = (1/4) (mu + lambda^{-1} F mu + lambda^{-2} F^2 mu +
/// lambda^{-3} F^3 mu); zero or an eigenmeasure for lambda.
pub fn project(mu: &MeasureExpr, lambda: FourthRoot) -> Result<MeasureExpr> {
    let mut acc = to_integer_ambient(&mu.canonicalize())?;
    let mut term = acc.clone();
    for j in 1..4 {
        term = fourier(&term)?;
        let weight = FourthRoot::i_power(-lambda.exponent() * j).value();
        acc = acc.add(&term.scale(weight))?;
    }
    Ok(acc.scale(Complex64::new(0.25, 0.0)))
}

/// Splits mu = mu_+ + mu_- into its even and odd parts under reflection.
pub fn even_odd_split(mu: &MeasureExpr) -> Result<(MeasureExpr, MeasureExpr)> {
    let half = Complex64::new(0.5, 0.0);
    let refl = mu.reflect();
    let even = mu.add(&refl)?.scale(half);
    let odd = mu.sub(&refl)?.scale(half);
    Ok((even, odd))
}

/// Y_{r,s,sqrt(n),lambda}: the four-term cycle sum applied to a single
/// comb Z_{r,s,sqrt(n)}. Either zero or an eigenmeasure for lambda, with
/// support in sqrt(n) Z plus a finite set.
pub fn build_y(
    r: crate::scalar::QuadScalar,
    s: crate::scalar::QuadScalar,
    n: u64,
    lambda: FourthRoot,
) -> Result<MeasureExpr> {
    let z = MeasureExpr::make_z(Complex64::new(1.0, 0.0), r, s, n)?;
    Ok(project(&z, lambda)?.scale(Complex64::new(4.0, 0.0)))
}

/// Returns lambda when F(mu) = lambda mu within `tol` for exactly one
/// fourth root; `None` when mu is no eigenmeasure. The zero measure is
/// rejected.
pub fn classify(mu: &MeasureExpr, tol: f64) -> Result<Option<FourthRoot>> {
    let mu = to_integer_ambient(&mu.canonicalize())?;
    if mu.is_zero() {
        return Err(Error::ZeroMeasure);
    }
    let transformed = fourier(&mu)?;
    let mut found = None;
    for lambda in FourthRoot::ALL {
        if transformed.equals(&mu.scale(lambda.value()), tol)? {
            if found.is_some() {
                return Ok(None); // ambiguous; only the zero measure qualifies
            }
            found = Some(lambda);
        }
    }
    Ok(found)
}

/// Checks the support symmetry I.mu = lambda^2 mu of an eigenmeasure.
pub fn check_symmetry(mu: &MeasureExpr, lambda: FourthRoot, tol: f64) -> Result<bool> {
    mu.reflect().equals(&mu.scale(lambda.square().value()), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QuadScalar;

    fn qs(p: i64, q: i64) -> QuadScalar {
        QuadScalar::from_ratio(p, q)
    }

    fn surd(p: i64, q: i64, d: u64) -> QuadScalar {
        QuadScalar::sqrt_term(p, q, d).unwrap()
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn dirac_comb() -> MeasureExpr {
        MeasureExpr::make_z(one(), QuadScalar::zero(), QuadScalar::zero(), 1)
            .unwrap()
            .canonicalize()
    }

    #[test]
    fn psf_fixed_point() {
        let dz = dirac_comb();
        let ft = fourier(&dz).unwrap();
        assert!(ft.equals(&dz, 1e-12).unwrap());
        assert_eq!(classify(&dz, 1e-9).unwrap(), Some(FourthRoot::One));
    }

    #[test]
    fn transform_of_shifted_comb() {
        // F(Z_{0, 1/sqrt2, sqrt2}) = (1/sqrt2)(Z_{0,0,sqrt2} - Z_{0,1/sqrt2,sqrt2})
        let z = MeasureExpr::make_z(one(), QuadScalar::zero(), surd(1, 2, 2), 2).unwrap();
        let ft = fourier(&z).unwrap();
        let c = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
        let expect = MeasureExpr::make_z(c, QuadScalar::zero(), QuadScalar::zero(), 2)
            .unwrap()
            .add(&MeasureExpr::make_z(-c, QuadScalar::zero(), surd(1, 2, 2), 2).unwrap())
            .unwrap();
        assert!(ft.equals(&expect, 1e-12).unwrap());
    }

    #[test]
    fn omega_s_transform_rule() {
        // F(Z_{s,s,1}) = e^{2 pi i s^2} conj(Z_{s,s,1}) for s = 1/3
        let s = qs(1, 3);
        let z = MeasureExpr::make_z(one(), s.clone(), s.clone(), 1).unwrap();
        let ft = fourier(&z).unwrap();
        let phase = PhaseExponent::new(s.checked_mul(&s).unwrap()).value();
        let expect = z.conjugate().scale(phase);
        assert!(ft.equals(&expect, 1e-12).unwrap());
    }

    #[test]
    fn omega_s_four_cycle() {
        for s in [qs(1, 3), qs(1, 5), surd(1, 2, 2)] {
            let z = MeasureExpr::make_z(one(), s.clone(), s.clone(), 1).unwrap();
            let phase = PhaseExponent::new(s.checked_mul(&s).unwrap()).value();
            let f1 = fourier(&z).unwrap();
            assert!(f1.equals(&z.conjugate().scale(phase), 1e-10).unwrap());
            let f2 = fourier(&f1).unwrap();
            assert!(f2.equals(&z.reflect(), 1e-10).unwrap());
            let f3 = fourier(&f2).unwrap();
            assert!(f3.equals(&z.reflect().conjugate().scale(phase), 1e-10).unwrap());
            let f4 = fourier(&f3).unwrap();
            assert!(f4.equals(&z, 1e-10).unwrap());
        }
    }

    #[test]
    fn powers_examples() {
        let s = qs(2, 7);
        let z = MeasureExpr::make_z(one(), s.clone(), s.clone(), 1).unwrap();
        assert!(fourier_pow(&z, 0).unwrap().equals(&z.canonicalize(), 1e-12).unwrap());
        assert!(fourier_pow(&z, 2).unwrap().equals(&z.reflect(), 1e-12).unwrap());
        assert!(fourier_pow(&z, 4).unwrap().equals(&z.canonicalize(), 1e-12).unwrap());
        let dz = dirac_comb();
        assert!(fourier_pow(&dz, 3).unwrap().equals(&dz, 1e-12).unwrap());
    }

    #[test]
    fn projector_examples() {
        let dz = dirac_comb();
        assert!(project(&dz, FourthRoot::One).unwrap().equals(&dz, 1e-12).unwrap());
        assert!(project(&dz, FourthRoot::I).unwrap().is_zero());

        // completeness on a generic atom
        let mu = MeasureExpr::make_z(Complex64::new(0.4, 0.3), qs(1, 4), qs(1, 3), 1)
            .unwrap()
            .canonicalize();
        let mut sum = MeasureExpr::zero(1).unwrap();
        for lambda in FourthRoot::ALL {
            sum = sum.add(&project(&mu, lambda).unwrap()).unwrap();
        }
        assert!(sum.equals(&mu, 1e-9).unwrap());
    }

    #[test]
    fn build_y_examples() {
        let y = build_y(QuadScalar::zero(), QuadScalar::zero(), 1, FourthRoot::One).unwrap();
        let four_dz = dirac_comb().scale(Complex64::new(4.0, 0.0));
        assert!(y.equals(&four_dz, 1e-12).unwrap());

        let y = build_y(QuadScalar::zero(), QuadScalar::zero(), 1, FourthRoot::I).unwrap();
        assert!(y.is_zero());

        let y = build_y(qs(1, 4), qs(1, 3), 1, FourthRoot::MinusOne).unwrap();
        assert!(!y.is_zero());
        assert_eq!(classify(&y, 1e-9).unwrap(), Some(FourthRoot::MinusOne));
    }

    #[test]
    fn classify_examples() {
        // (1 + sqrt2) Z_{0,0,sqrt2} + Z_{0,1/sqrt2,sqrt2} is fixed by F
        let c0 = Complex64::new(1.0 + 2f64.sqrt(), 0.0);
        let mu = MeasureExpr::make_z(c0, QuadScalar::zero(), QuadScalar::zero(), 2)
            .unwrap()
            .add(&MeasureExpr::make_z(one(), QuadScalar::zero(), surd(1, 2, 2), 2).unwrap())
            .unwrap();
        assert_eq!(classify(&mu, 1e-9).unwrap(), Some(FourthRoot::One));

        // a single shifted comb is no eigenmeasure
        let z = MeasureExpr::make_z(one(), QuadScalar::zero(), qs(1, 3), 1).unwrap();
        assert_eq!(classify(&z, 1e-9).unwrap(), None);

        // the zero measure is rejected
        assert!(classify(&MeasureExpr::zero(1).unwrap(), 1e-9).is_err());
    }

    #[test]
    fn symmetry_check() {
        let dz = dirac_comb();
        assert!(check_symmetry(&dz, FourthRoot::One, 1e-12).unwrap());

        let y = build_y(qs(1, 5), qs(1, 3), 1, FourthRoot::I).unwrap();
        if !y.is_zero() {
            // I.mu = lambda^2 mu = -mu for lambda = i
            assert!(y.reflect().equals(&y.scale(Complex64::new(-1.0, 0.0)), 1e-9).unwrap());
            assert!(check_symmetry(&y, FourthRoot::I, 1e-9).unwrap());
        }
    }

    #[test]
    fn even_odd_examples() {
        let dz = dirac_comb();
        let (even, odd) = even_odd_split(&dz).unwrap();
        assert!(even.equals(&dz, 1e-12).unwrap());
        assert!(odd.is_zero());

        let z = MeasureExpr::make_z(one(), QuadScalar::zero(), qs(1, 3), 1).unwrap();
        let (even, odd) = even_odd_split(&z).unwrap();
        assert!(even.add(&odd).unwrap().equals(&z.canonicalize(), 1e-12).unwrap());
        assert!(even.reflect().equals(&even, 1e-12).unwrap());
        assert!(odd.reflect().equals(&odd.scale(Complex64::new(-1.0, 0.0)), 1e-12).unwrap());
    }
}
