//! Lowers parsed expressions to canonical measures, unifying ambients
//! where two subexpressions live on commensurate combs.

use eigenmeasure::error::{Error, Result};
use eigenmeasure::fourier;
use eigenmeasure::measure::MeasureExpr;
use eigenmeasure::scalar::{normalize_radicand, QuadScalar};
use num_complex::Complex64;

use crate::parser::Ast;

pub fn evaluate(ast: &Ast) -> Result<MeasureExpr> {
    Ok(eval(ast)?.canonicalize())
}

fn eval(ast: &Ast) -> Result<MeasureExpr> {
    match ast {
        Ast::Z { r, s, n } => {
            MeasureExpr::make_z(Complex64::new(1.0, 0.0), r.clone(), s.clone(), *n)
        }
        Ast::Y { r, s, n, root } => fourier::build_y(r.clone(), s.clone(), *n, *root),
        Ast::DiracComb(n) => {
            MeasureExpr::make_z(Complex64::new(1.0, 0.0), QuadScalar::zero(), QuadScalar::zero(), *n)
        }
        Ast::Ft(e) => fourier::fourier(&eval(e)?),
        Ast::Refl(e) => Ok(eval(e)?.reflect()),
        Ast::Conj(e) => Ok(eval(e)?.conjugate()),
        Ast::Proj(root, e) => fourier::project(&eval(e)?, *root),
        Ast::Sum(a, b) => {
            let (a, b) = unify(eval(a)?, eval(b)?)?;
            a.add(&b)
        }
        Ast::Diff(a, b) => {
            let (a, b) = unify(eval(a)?, eval(b)?)?;
            a.sub(&b)
        }
        Ast::Scale(c, e) => Ok(eval(e)?.scale(*c)),
    }
}

/// Brings two measures onto a common comb: ambients f1^2 d and f2^2 d
/// refine to lcm(f1, f2)^2 d. Distinct square-free cores cannot mix.
fn unify(a: MeasureExpr, b: MeasureExpr) -> Result<(MeasureExpr, MeasureExpr)> {
    let na = a.ambient_n().ok_or(Error::ZeroAmbient)?;
    let nb = b.ambient_n().ok_or(Error::ZeroAmbient)?;
    if na == nb {
        return Ok((a, b));
    }
    let (fa, da) = normalize_radicand(na)?;
    let (fb, db) = normalize_radicand(nb)?;
    if da != db {
        return Err(Error::AmbientMismatch(format!("sqrt({na})"), format!("sqrt({nb})")));
    }
    let l = num_integer::lcm(fa, fb);
    Ok((a.refine(l / fa)?, b.refine(l / fb)?))
}
