//! Exact scalars: Laurent polynomials in commuting parameter symbols with
//! Gaussian-rational coefficients.
//!
//! A [`Scalar`] is a finite sum `Σ c_m · m` where each `m` is a Laurent
//! monomial in the parameters (`tau^2 * h^-1`, ...) and `c_m = a + b·i` with
//! `a, b` exact rationals. All arithmetic is exact. Division is only defined
//! by single-term scalars (a nonzero coefficient times a parameter monomial),
//! which is all the calculus ever needs (`J/h`, `1/tau`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot divide by `{0}`: only single-term scalars (coefficient times parameter monomial) are invertible")]
    NotInvertible(String),
}

/// Interned parameter symbol (`tau`, `h`, `hbar`, `Delta`, `k`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param(u16);

fn param_table() -> &'static RwLock<Vec<String>> {
    static TABLE: OnceLock<RwLock<Vec<String>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        RwLock::new(
            ["tau", "h", "hbar", "Delta", "k"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        )
    })
}

impl Param {
    pub fn new(name: &str) -> Param {
        {
            let table = param_table().read().expect("param table poisoned");
            if let Some(pos) = table.iter().position(|n| n == name) {
                return Param(pos as u16);
            }
        }
        let mut table = param_table().write().expect("param table poisoned");
        if let Some(pos) = table.iter().position(|n| n == name) {
            return Param(pos as u16);
        }
        table.push(name.to_string());
        Param((table.len() - 1) as u16)
    }

    pub fn name(self) -> String {
        param_table().read().expect("param table poisoned")[self.0 as usize].clone()
    }
}

/// A Laurent monomial: parameter exponents, sorted by parameter, no zero exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(SmallVec<[(Param, i32); 2]>);

impl Monomial {
    pub fn unit() -> Monomial {
        Monomial::default()
    }

    pub fn param(p: Param, exp: i32) -> Monomial {
        if exp == 0 {
            Monomial::unit()
        } else {
            Monomial(smallvec::smallvec![(p, exp)])
        }
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = (Param, i32)> + '_ {
        self.0.iter().copied()
    }

    pub fn exponent(&self, p: Param) -> i32 {
        self.0
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(_, e)| *e as i64).sum()
    }

    /// Exponents add under multiplication.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: SmallVec<[(Param, i32); 2]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|(p, e)| (*p, -e)).collect())
    }

    /// Parameter names paired with exponents, sorted by name.
    fn named(&self) -> Vec<(String, i32)> {
        let mut v: Vec<(String, i32)> = self.0.iter().map(|(p, e)| (p.name(), *e)).collect();
        v.sort();
        v
    }
}

/// Exact Gaussian rational `re + im·i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Gaussian {
        Gaussian { re, im }
    }

    pub fn real(re: BigRational) -> Gaussian {
        Gaussian { re, im: BigRational::zero() }
    }

    pub fn i() -> Gaussian {
        Gaussian { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Gaussian {
        Gaussian { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn inverse(&self) -> Option<Gaussian> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(Gaussian { re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    /// True when the leading nonzero component is negative.
    pub fn leading_negative(&self) -> bool {
        if !self.re.is_zero() {
            self.re.is_negative()
        } else {
            self.im.is_negative()
        }
    }
}

impl Zero for Gaussian {
    fn zero() -> Self {
        Gaussian::real(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Gaussian {
    fn one() -> Self {
        Gaussian::real(BigRational::one())
    }
}

impl Add for Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: Gaussian) -> Gaussian {
        Gaussian { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for Gaussian {
    type Output = Gaussian;
    fn sub(self, rhs: Gaussian) -> Gaussian {
        Gaussian { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: Gaussian) -> Gaussian {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: &Gaussian) -> Gaussian {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Gaussian::real(&self.re * &rhs.re);
        }
        Gaussian {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian { re: -self.re, im: -self.im }
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Gaussian {
    /// `3/2`, `i`, `-2*i`, `1 + i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |q: &BigRational| -> String {
            if q.is_one() {
                "i".to_string()
            } else if (-q.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rational(q))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}", imag(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "{} {} {}", fmt_rational(&self.re), sign, imag(&self.im.abs()))
            }
        }
    }
}

/// Laurent polynomial in the parameters over the Gaussian rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Monomial, Gaussian>,
}

/// A term with its parameters spelled out by name, for display ordering.
type NamedTerm<'a> = (Vec<(String, i32)>, &'a Monomial, &'a Gaussian);

impl Scalar {
    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Scalar {
        assert!(denom != 0, "zero denominator");
        Scalar::from_rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_rational(q: BigRational) -> Scalar {
        Scalar::from_gaussian(Gaussian::real(q))
    }

    pub fn from_gaussian(c: Gaussian) -> Scalar {
        Scalar::term(Monomial::unit(), c)
    }

    pub fn term(m: Monomial, c: Gaussian) -> Scalar {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Scalar { terms }
    }

    pub fn imag_unit() -> Scalar {
        Scalar::from_gaussian(Gaussian::i())
    }

    /// The parameter `name` raised to `exp` (negative allowed).
    pub fn param(name: &str, exp: i32) -> Scalar {
        Scalar::term(Monomial::param(Param::new(name), exp), Gaussian::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Gaussian)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The value when this scalar is a real rational constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.is_unit() && c.is_real()).then(|| c.re.clone())
            }
            _ => None,
        }
    }

    /// Parameters occurring with nonzero exponent.
    pub fn params(&self) -> Vec<Param> {
        let mut ps: Vec<Param> = self
            .terms
            .keys()
            .flat_map(|m| m.exponents().map(|(p, _)| p))
            .collect();
        ps.sort();
        ps.dedup();
        ps
    }

    fn add_term(&mut self, m: Monomial, c: Gaussian) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Multiplicative inverse of a single-term scalar.
    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        match self.terms.len() {
            0 => Err(ScalarError::DivisionByZero),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                let inv = c.inverse().ok_or(ScalarError::DivisionByZero)?;
                Ok(Scalar::term(m.inverse(), inv))
            }
            _ => Err(ScalarError::NotInvertible(self.to_string())),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &rhs.inverse()?)
    }

    /// Replace every parameter `p` by the scalar `f(p)` (exponents must be
    /// non-negative unless the replacement is invertible).
    pub fn substitute_params<F>(&self, mut f: F) -> Result<Scalar, ScalarError>
    where
        F: FnMut(Param) -> Option<Scalar>,
    {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = Scalar::from_gaussian(c.clone());
            for (p, e) in m.exponents() {
                let base = f(p).unwrap_or_else(|| Scalar::term(Monomial::param(p, 1), Gaussian::one()));
                let base = if e < 0 { base.inverse()? } else { base };
                for _ in 0..e.unsigned_abs() {
                    term = &term * &base;
                }
            }
            out = out + term;
        }
        Ok(out)
    }

    /// True when the scalar is a single term whose coefficient leads with a minus sign.
    pub fn leading_negative(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().next().unwrap().leading_negative()
    }

    /// Renderable as a factor without parentheses.
    pub fn is_atomic(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => {
                let c = self.terms.values().next().unwrap();
                c.re.is_zero() || c.im.is_zero()
            }
            _ => false,
        }
    }

    fn sorted_terms(&self) -> Vec<NamedTerm<'_>> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (m.named(), m, c)).collect();
        v.sort_by(|a, b| {
            let da: i64 = a.0.iter().map(|(_, e)| *e as i64).sum();
            let db: i64 = b.0.iter().map(|(_, e)| *e as i64).sum();
            da.cmp(&db).then_with(|| a.0.cmp(&b.0))
        });
        v
    }
}

fn fmt_monomial_term(named: &[(String, i32)], c: &Gaussian) -> (bool, String) {
    let mut factors: Vec<String> = Vec::new();
    let negative = c.leading_negative() && (c.re.is_zero() || c.im.is_zero());
    let c_abs = if negative { -c.clone() } else { c.clone() };
    let coeff_is_one = c_abs.is_one();
    if !coeff_is_one || named.is_empty() {
        let s = c_abs.to_string();
        if c_abs.re.is_zero() || c_abs.im.is_zero() {
            factors.push(s);
        } else {
            factors.push(format!("({s})"));
        }
    }
    for (name, e) in named {
        if *e == 1 {
            factors.push(name.clone());
        } else {
            factors.push(format!("{name}^{e}"));
        }
    }
    (negative, factors.join("*"))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (named, _, c)) in self.sorted_terms().into_iter().enumerate() {
            let (neg, body) = fmt_monomial_term(&named, c);
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_int(1)
    }
    fn is_one(&self) -> bool {
        self.terms.len() == 1 && {
            let (m, c) = self.terms.iter().next().unwrap();
            m.is_unit() && c.is_one()
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        assert_eq!(&q(1, 3) + &q(1, 6), q(1, 2));
        assert_eq!(&q(2, 3) * &q(3, 2), Scalar::one());
        assert!((&q(5, 7) - &q(5, 7)).is_zero());
    }

    #[test]
    fn laurent_exponents_add() {
        let tau = Scalar::param("tau", 1);
        let inv = Scalar::param("tau", -1);
        assert_eq!(&tau * &inv, Scalar::one());
        let t2h = &(&tau * &tau) * &Scalar::param("h", -1);
        assert_eq!(t2h.to_string(), "h^-1*tau^2");
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let i = Scalar::imag_unit();
        assert_eq!(&i * &i, Scalar::from_int(-1));
        assert_eq!(i.to_string(), "i");
        assert_eq!((-i).to_string(), "-i");
    }

    #[test]
    fn division_only_by_monomials() {
        let h = Scalar::param("h", 1);
        let j = q(3, 1);
        assert_eq!(j.checked_div(&h).unwrap().to_string(), "3*h^-1");
        let two_terms = &h + &Scalar::one();
        assert!(matches!(j.checked_div(&two_terms), Err(ScalarError::NotInvertible(_))));
        assert_eq!(j.checked_div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
        let gi = Scalar::from_gaussian(Gaussian::new(
            BigRational::from_integer(1.into()),
            BigRational::from_integer(1.into()),
        ));
        assert_eq!(&gi * &gi.inverse().unwrap(), Scalar::one());
    }

    #[test]
    fn rendering() {
        assert_eq!(q(-3, 2).to_string(), "-3/2");
        let s = &(&Scalar::param("tau", 1) + &q(2, 1)) * &Scalar::one();
        assert_eq!(s.to_string(), "2 + tau");
        assert!(!s.is_atomic());
        assert_eq!(Scalar::zero().to_string(), "0");
    }

    proptest! {
        #[test]
        fn reciprocal_product_is_one(a in 1i64..1000, b in 1i64..1000, sa in any::<bool>()) {
            let a = if sa { -a } else { a };
            prop_assert_eq!(&q(a, b) * &q(b, a), Scalar::one());
        }

        #[test]
        fn monomial_exponents_add(e1 in -5i32..5, e2 in -5i32..5) {
            let p = &Scalar::param("h", e1) * &Scalar::param("h", e2);
            prop_assert_eq!(p, Scalar::param("h", e1 + e2));
        }
    }
}
