//! The comb algebra: finite complex linear combinations of the measures
//! Z_{r,s,alpha} = chi_r * (delta_s conv delta_{alpha Z}) at a fixed
//! ambient spacing alpha.
//!
//! Parameters r, s and the spacing are exact quadratic-field elements;
//! amplitudes are floating complex numbers. Canonical form reduces s into
//! (-alpha/2, alpha/2] (phase-free), then r into (-1/(2 alpha), 1/(2 alpha)]
//! (picking up the exact phase of the quasi-periodicity relation), merges
//! equal (r, s) pairs and drops amplitudes below a tolerance.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{reduce_mod, PhaseExponent, QuadScalar};

/// Default drop/merge tolerance for amplitudes.
pub const DEFAULT_EPS: f64 = 1e-9;

/// The eigenvalue lambda of an order-4 operator: a fourth root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FourthRoot {
    One,
    I,
    MinusOne,
    MinusI,
}

impl FourthRoot {
    pub const ALL: [FourthRoot; 4] = [Self::One, Self::I, Self::MinusOne, Self::MinusI];

    pub fn value(self) -> Complex64 {
        match self {
            Self::One => Complex64::new(1.0, 0.0),
            Self::I => Complex64::new(0.0, 1.0),
            Self::MinusOne => Complex64::new(-1.0, 0.0),
            Self::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    /// i^k for k taken mod 4.
    pub fn i_power(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::One,
            1 => Self::I,
            2 => Self::MinusOne,
            _ => Self::MinusI,
        }
    }

    pub fn exponent(self) -> i64 {
        match self {
            Self::One => 0,
            Self::I => 1,
            Self::MinusOne => 2,
            Self::MinusI => 3,
        }
    }

    pub fn mul(self, other: Self) -> Self {
        Self::i_power(self.exponent() + other.exponent())
    }

    pub fn inverse(self) -> Self {
        Self::i_power(-self.exponent())
    }

    pub fn square(self) -> Self {
        self.mul(self)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::One => "1",
            Self::I => "i",
            Self::MinusOne => "-1",
            Self::MinusI => "-i",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "1" => Some(Self::One),
            "i" => Some(Self::I),
            "-1" => Some(Self::MinusOne),
            "-i" => Some(Self::MinusI),
            _ => None,
        }
    }
}

impl std::fmt::Display for FourthRoot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One modulated, shifted comb: amp * Z_{r,s,alpha}.
#[derive(Debug, Clone)]
pub struct ZAtom {
    pub amp: Complex64,
    pub r: QuadScalar,
    pub s: QuadScalar,
}

/// A finite linear combination of Z-atoms over one ambient spacing.
///
/// The spacing alpha is a pure quadratic value (rational or a rational
/// multiple of sqrt(d)), so alpha^2 is rational and the coset
/// decompositions of the rewrite calculus stay inside one field. The zero
/// measure is the empty atom list.
#[derive(Debug, Clone)]
pub struct MeasureExpr {
    alpha: QuadScalar,
    atoms: Vec<ZAtom>,
    canonical: bool,
}

fn alpha_for_n(n: u64) -> Result<QuadScalar> {
    if n == 0 {
        return Err(Error::ZeroAmbient);
    }
    QuadScalar::sqrt(n)
}

impl MeasureExpr {
    /// The zero measure at ambient alpha = sqrt(n).
    pub fn zero(n: u64) -> Result<Self> {
        Ok(Self { alpha: alpha_for_n(n)?, atoms: Vec::new(), canonical: true })
    }

    /// amp * Z_{r,s,sqrt(n)}; not yet canonical.
    pub fn make_z(amp: Complex64, r: QuadScalar, s: QuadScalar, n: u64) -> Result<Self> {
        let alpha = alpha_for_n(n)?;
        Self::with_alpha(alpha, vec![ZAtom { amp, r, s }])
    }

    /// Builds an expression over an explicit spacing. The spacing must be
    /// pure (alpha^2 rational) and positive, and all parameters must live
    /// in its field.
    pub fn with_alpha(alpha: QuadScalar, atoms: Vec<ZAtom>) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::NonPositiveModulus);
        }
        if !alpha.rational_part().is_zero() && !alpha.surd_part().is_zero() {
            return Err(Error::Invalid(format!(
                "ambient spacing {alpha} is not a pure quadratic value"
            )));
        }
        for atom in &atoms {
            if !atom.r.compatible(&alpha) || !atom.s.compatible(&alpha) {
                return Err(Error::RadicandMismatch(
                    atom.r.radicand().max(atom.s.radicand()),
                    alpha.radicand(),
                ));
            }
            if !atom.r.compatible(&atom.s) {
                return Err(Error::RadicandMismatch(atom.r.radicand(), atom.s.radicand()));
            }
        }
        Ok(Self { alpha, atoms, canonical: false })
    }

    pub fn alpha(&self) -> &QuadScalar {
        &self.alpha
    }

    /// alpha^2 as an exact rational (the spacing is pure by invariant).
    pub fn alpha_squared(&self) -> BigRational {
        let sq = self.alpha.checked_mul(&self.alpha).expect("same field");
        debug_assert!(sq.is_rational());
        sq.rational_part().clone()
    }

    /// The ambient integer n when alpha = sqrt(n).
    pub fn ambient_n(&self) -> Option<u64> {
        let sq = self.alpha_squared();
        if sq.is_integer() {
            sq.to_integer().to_u64()
        } else {
            None
        }
    }

    pub fn atoms(&self) -> &[ZAtom] {
        &self.atoms
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn canonicalize(&self) -> Self {
        self.canonicalize_with_eps(DEFAULT_EPS)
    }

    /// Reduces every atom into the fundamental domains, merges equal
    /// (r, s) pairs and drops amplitudes at or below `eps`. Idempotent.
    ///
    /// Reduction order is s first (phase-free), then r: the phase picked
    /// up by an r-shift depends on the already-reduced s.
    pub fn canonicalize_with_eps(&self, eps: f64) -> Self {
        if self.canonical {
            return self.clone();
        }
        let inv_alpha = self.alpha.recip().expect("spacing is positive");
        let mut reduced: Vec<ZAtom> = Vec::with_capacity(self.atoms.len());
        for atom in &self.atoms {
            // (1): Z_{r, s+m alpha, alpha} = Z_{r, s, alpha}
            let (s, _) = reduce_mod(&atom.s, &self.alpha).expect("compatible by invariant");
            // (2): Z_{r + m/alpha, s, alpha} = e^{2 pi i m s / alpha} Z_{r, s, alpha}
            let (r, m) = reduce_mod(&atom.r, &inv_alpha).expect("compatible by invariant");
            let s_over_alpha = s.checked_mul(&inv_alpha).expect("same field");
            let phase = PhaseExponent::new(s_over_alpha.scale_int(&m)).value();
            reduced.push(ZAtom { amp: atom.amp * phase, r, s });
        }
        reduced.sort_by(|x, y| (&x.s, &x.r).cmp(&(&y.s, &y.r)));
        let mut merged: Vec<ZAtom> = Vec::with_capacity(reduced.len());
        for atom in reduced {
            match merged.last_mut() {
                Some(last) if last.r == atom.r && last.s == atom.s => last.amp += atom.amp,
                _ => merged.push(atom),
            }
        }
        merged.retain(|a| a.amp.norm() > eps);
        Self { alpha: self.alpha.clone(), atoms: merged, canonical: true }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.alpha != other.alpha {
            return Err(Error::AmbientMismatch(
                self.alpha.to_string(),
                other.alpha.to_string(),
            ));
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Ok(Self { alpha: self.alpha.clone(), atoms, canonical: false }.canonicalize())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| ZAtom { amp: c * a.amp, r: a.r.clone(), s: a.s.clone() })
            .collect();
        Self { alpha: self.alpha.clone(), atoms, canonical: false }.canonicalize()
    }

    /// Coset decomposition: for alpha^2 = p/q with gcd(p, q) = 1, rewrites
    /// the expression over beta = sqrt(p q), each atom splitting into q
    /// cosets Z_{r, s + m alpha, beta}.
    pub fn rebase(&self, p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::ZeroAmbient);
        }
        let expected = BigRational::new(BigInt::from(p), BigInt::from(q));
        if self.alpha_squared() != expected {
            return Err(Error::BadRebase { p, q, actual: self.alpha_squared().to_string() });
        }
        if q == 1 {
            return Ok(self.canonicalize());
        }
        let beta = QuadScalar::sqrt(p * q)?;
        let mut atoms = Vec::with_capacity(self.atoms.len() * q as usize);
        for atom in &self.atoms {
            for m in 0..q {
                let shift = self.alpha.scale_int(&BigInt::from(m));
                atoms.push(ZAtom {
                    amp: atom.amp,
                    r: atom.r.clone(),
                    s: atom.s.checked_add(&shift)?,
                });
            }
        }
        Self::with_alpha(beta, atoms).map(|m| m.canonicalize())
    }

    /// Refines the spacing by an integer factor k: alpha Z splits into the
    /// k cosets of (k alpha) Z. Used to bring two integer ambients to a
    /// common one before addition.
    pub fn refine(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroAmbient);
        }
        if k == 1 {
            return Ok(self.canonicalize());
        }
        let beta = self.alpha.scale_int(&BigInt::from(k));
        let mut atoms = Vec::with_capacity(self.atoms.len() * k as usize);
        for atom in &self.atoms {
            for m in 0..k {
                let shift = self.alpha.scale_int(&BigInt::from(m));
                atoms.push(ZAtom {
                    amp: atom.amp,
                    r: atom.r.clone(),
                    s: atom.s.checked_add(&shift)?,
                });
            }
        }
        Self::with_alpha(beta, atoms).map(|m| m.canonicalize())
    }

    /// The reflection I.mu: (amp, r, s) -> (amp, -r, -s).
    pub fn reflect(&self) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| ZAtom { amp: a.amp, r: -a.r.clone(), s: -a.s.clone() })
            .collect();
        Self { alpha: self.alpha.clone(), atoms, canonical: false }.canonicalize()
    }

    /// Complex conjugation: (amp, r, s) -> (conj amp, -r, s).
    pub fn conjugate(&self) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| ZAtom { amp: a.amp.conj(), r: -a.r.clone(), s: a.s.clone() })
            .collect();
        Self { alpha: self.alpha.clone(), atoms, canonical: false }.canonicalize()
    }

    /// Compares canonical forms: identical (r, s) sets with amplitudes
    /// matching within `tol` (absolute, per atom).
    pub fn equals(&self, other: &Self, tol: f64) -> Result<bool> {
        if self.alpha != other.alpha {
            return Err(Error::AmbientMismatch(
                self.alpha.to_string(),
                other.alpha.to_string(),
            ));
        }
        let a = self.canonicalize();
        let b = other.canonicalize();
        let mut i = 0;
        let mut j = 0;
        while i < a.atoms.len() || j < b.atoms.len() {
            let order = match (a.atoms.get(i), b.atoms.get(j)) {
                (Some(x), Some(y)) => (&x.s, &x.r).cmp(&(&y.s, &y.r)),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (None, None) => unreachable!(),
            };
            match order {
                std::cmp::Ordering::Equal => {
                    if (a.atoms[i].amp - b.atoms[j].amp).norm() > tol {
                        return Ok(false);
                    }
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Less => {
                    if a.atoms[i].amp.norm() > tol {
                        return Ok(false);
                    }
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    if b.atoms[j].amp.norm() > tol {
                        return Ok(false);
                    }
                    j += 1;
                }
            }
        }
        Ok(true)
    }

    /// All support points s + k alpha with |x| <= R, each with the
    /// modulated amplitude amp * e^{2 pi i r x}, sorted by position.
    pub fn support_atoms(&self, window: f64) -> Result<Vec<(f64, Complex64)>> {
        if window <= 0.0 {
            return Err(Error::NonPositiveWindow);
        }
        let mu = self.canonicalize();
        let alpha_f = mu.alpha.to_f64();
        let mut out: Vec<(f64, Complex64)> = Vec::new();
        for atom in &mu.atoms {
            let s_f = atom.s.to_f64();
            // e^{2 pi i r (s + k alpha)} factors into a base phase and a
            // per-step rotation, both reduced exactly before going to f64
            let theta0 = PhaseExponent::new(atom.r.checked_mul(&atom.s)?)
                .exponent()
                .to_f64();
            let theta_step = PhaseExponent::new(atom.r.checked_mul(&mu.alpha)?)
                .exponent()
                .to_f64();
            let k_min = ((-window - s_f) / alpha_f).floor() as i64 - 1;
            let k_max = ((window - s_f) / alpha_f).ceil() as i64 + 1;
            for k in k_min..=k_max {
                let x = s_f + k as f64 * alpha_f;
                if x.abs() > window {
                    continue;
                }
                let angle =
                    2.0 * std::f64::consts::PI * (theta0 + k as f64 * theta_step).fract();
                out.push((x, atom.amp * Complex64::from_polar(1.0, angle)));
            }
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(out)
    }

    /// Maximum amplitude magnitude over the atoms of the canonical form.
    pub fn max_amp(&self) -> f64 {
        self.canonicalize().atoms.iter().map(|a| a.amp.norm()).fold(0.0, f64::max)
    }
}

/// JSON form of a measure expression; requires an integer ambient.
#[derive(Debug, Serialize, Deserialize)]
pub struct MeasureJson {
    pub n: u64,
    pub atoms: Vec<AtomJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AtomJson {
    pub r: QuadScalar,
    pub s: QuadScalar,
    pub amp: ComplexJson,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl MeasureExpr {
    pub fn to_json(&self) -> Result<MeasureJson> {
        let n = self.ambient_n().ok_or_else(|| {
            Error::Invalid(format!("ambient {} is not sqrt of an integer", self.alpha))
        })?;
        let mu = self.canonicalize();
        Ok(MeasureJson {
            n,
            atoms: mu
                .atoms
                .iter()
                .map(|a| AtomJson {
                    r: a.r.clone(),
                    s: a.s.clone(),
                    amp: ComplexJson { re: a.amp.re, im: a.amp.im },
                })
                .collect(),
        })
    }

    pub fn from_json(json: &MeasureJson) -> Result<Self> {
        let alpha = alpha_for_n(json.n)?;
        let atoms = json
            .atoms
            .iter()
            .map(|a| ZAtom {
                amp: Complex64::new(a.amp.re, a.amp.im),
                r: a.r.clone(),
                s: a.s.clone(),
            })
            .collect();
        Self::with_alpha(alpha, atoms).map(|m| m.canonicalize())
    }

    /// CSV rows `position,re,im` of the support within the window, with
    /// 17-significant-digit floats.
    pub fn support_csv(&self, window: f64) -> Result<String> {
        let mut out = String::from("position,re,im\n");
        for (x, amp) in self.support_atoms(window)? {
            out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", x, amp.re, amp.im));
        }
        Ok(out)
    }
}
