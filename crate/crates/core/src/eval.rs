//! Evaluation of parsed expressions to elements of a world.

use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{Scalar, ScalarError};
use crate::syntax::{Expr, Index};
use crate::world::Scope;
use crate::Element;

/// Parameters available in every world unless shadowed by a generator.
pub const BUILTIN_PARAMS: [&str; 5] = ["tau", "h", "hbar", "Delta", "k"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("index variable `{0}` is not bound")]
    UnboundIndex(String),
    #[error("`d/d{0}` is not defined; only d/dX[i] and d/dP[i] are")]
    UnknownDerivative(String),
    #[error("can only divide by a nonzero scalar, not `{0}`")]
    NonScalarDivisor(String),
    #[error("negative power of non-scalar `{0}`")]
    NegativePower(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

pub type Bindings = HashMap<String, u32>;

fn index_value(i: &Index, b: &Bindings) -> Result<u32, EvalError> {
    match i {
        Index::Lit(n) => Ok(*n),
        Index::Var(v) => b.get(v).copied().ok_or_else(|| EvalError::UnboundIndex(v.clone())),
    }
}

fn indices_value(ix: &[Index], b: &Bindings) -> Result<Vec<u32>, EvalError> {
    ix.iter().map(|i| index_value(i, b)).collect()
}

fn display_ref(name: &str, ix: &[u32]) -> String {
    let mut s = name.to_string();
    for i in ix {
        s.push_str(&format!("[{i}]"));
    }
    s
}

/// The element a constant-only expression denotes, if it is one.
fn as_scalar(e: &Element) -> Option<Scalar> {
    match e.len() {
        0 => Some(Scalar::zero()),
        1 => {
            let (w, c) = e.terms().next().unwrap();
            w.is_empty().then(|| c.clone())
        }
        _ => None,
    }
}

fn resolve(scope: &dyn Scope, name: &str, ix: &[u32]) -> Result<Element, EvalError> {
    if let Some(e) = scope.lookup(name, ix) {
        return Ok(e);
    }
    if ix.is_empty() && (scope.is_param(name) || BUILTIN_PARAMS.contains(&name)) {
        return Ok(Element::constant(Scalar::param(name, 1)));
    }
    Err(EvalError::UnknownSymbol(display_ref(name, ix)))
}

/// Evaluate without normalizing. Schematic indices take values from `b`.
pub fn eval(expr: &Expr, scope: &dyn Scope, b: &Bindings) -> Result<Element, EvalError> {
    let ev = |e: &Expr| eval(e, scope, b);
    Ok(match expr {
        Expr::Num(q) => Element::constant(Scalar::from_rational(q.clone())),
        Expr::Imag => Element::constant(Scalar::imag_unit()),
        Expr::Ref { name, indices } => resolve(scope, name, &indices_value(indices, b)?)?,
        Expr::Delta(i, j) => {
            if index_value(i, b)? == index_value(j, b)? {
                Element::one()
            } else {
                Element::zero()
            }
        }
        Expr::Neg(a) => -ev(a)?,
        Expr::Add(a, c) => ev(a)? + ev(c)?,
        Expr::Sub(a, c) => ev(a)? - ev(c)?,
        Expr::Mul(a, c) => ev(a)? * ev(c)?,
        Expr::Div(a, c) => {
            let d = ev(c)?;
            let s = as_scalar(&d).ok_or_else(|| EvalError::NonScalarDivisor(d.to_string()))?;
            ev(a)?.scale(&s.inverse()?)
        }
        Expr::Pow(a, n) => {
            let base = ev(a)?;
            if *n >= 0 {
                base.pow(*n as u32)
            } else {
                let s = as_scalar(&base).ok_or_else(|| EvalError::NegativePower(base.to_string()))?;
                let inv = s.inverse()?;
                let mut out = Scalar::one();
                for _ in 0..n.unsigned_abs() {
                    out = &out * &inv;
                }
                Element::constant(out)
            }
        }
        Expr::Comm(a, c) => Element::commutator(&ev(a)?, &ev(c)?),
        Expr::Partial { name, indices, arg } => {
            let ix = indices_value(indices, b)?;
            let f = ev(arg)?;
            match name.as_str() {
                "X" => Element::commutator(&f, &resolve(scope, "P", &ix)?),
                "P" => Element::commutator(&resolve(scope, "X", &ix)?, &f),
                _ => return Err(EvalError::UnknownDerivative(display_ref(name, &ix))),
            }
        }
        Expr::TimeDeriv(a) => Element::commutator(&ev(a)?, &resolve(scope, "H", &[])?),
    })
}

/// Index variables occurring in `expr`, in first-occurrence order.
pub fn index_vars(expr: &Expr, out: &mut Vec<String>) {
    let push = |i: &Index, out: &mut Vec<String>| {
        if let Index::Var(v) = i {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
    };
    match expr {
        Expr::Num(_) | Expr::Imag => {}
        Expr::Ref { indices, .. } => indices.iter().for_each(|i| push(i, out)),
        Expr::Delta(i, j) => {
            push(i, out);
            push(j, out);
        }
        Expr::Neg(a) | Expr::Pow(a, _) | Expr::TimeDeriv(a) => index_vars(a, out),
        Expr::Add(a, c) | Expr::Sub(a, c) | Expr::Mul(a, c) | Expr::Div(a, c) | Expr::Comm(a, c) => {
            index_vars(a, out);
            index_vars(c, out);
        }
        Expr::Partial { indices, arg, .. } => {
            indices.iter().for_each(|i| push(i, out));
            index_vars(arg, out);
        }
    }
}

/// Every assignment of `vars` to `1..=dim`, last variable fastest.
pub fn assignments(vars: &[String], dim: u32) -> Vec<Bindings> {
    let mut out = vec![Bindings::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|b| {
                (1..=dim).map(move |k| {
                    let mut b = b.clone();
                    b.insert(v.clone(), k);
                    b
                })
            })
            .collect();
    }
    out
}
