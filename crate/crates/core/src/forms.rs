//! Exterior calculus over formal function symbols.
//!
//! Coefficients are [`Element`]s whose letters are function symbols such as
//! `F`, `F_x`, `A[2]_13`; a formal partial appends a coordinate label to the
//! symbol's sorted partial multi-index. In commutative mode coefficient
//! products are collapsed to sorted words; in noncommutative mode they are
//! kept in order. Basis differentials are central.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::poly::Word;
use crate::report::Report;
use crate::scalar::Scalar;
use crate::symbol::GeneratorId;
use crate::world::gauge_world;
use crate::Element;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Commutative,
    Noncommutative,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("cannot combine forms with different coefficient modes")]
    MixedMode,
    #[error("cannot combine forms over different coordinates")]
    CoordinateMismatch,
    #[error("`{0}` is not a coordinate of this form")]
    UnknownCoordinate(char),
}

/// A function symbol as a coefficient element.
pub fn sym(name: &str) -> Element {
    Element::generator(&GeneratorId::scalar(name))
}

fn collapse(e: Element, mode: Mode) -> Element {
    match mode {
        Mode::Commutative => e.commutative_normal(),
        Mode::Noncommutative => e,
    }
}

/// Formal partial `∂/∂label` by the Leibniz rule over letters.
pub fn partial(e: &Element, label: char, mode: Mode) -> Element {
    let mut out = Element::zero();
    for (w, c) in e.terms() {
        let letters = w.letters();
        for (k, l) in letters.iter().enumerate() {
            let d = l.id().differentiated(label).letter();
            let nw = w.splice(k, k + 1, &Word::letter(d));
            out.add_term(nw, c.clone());
        }
    }
    collapse(out, mode)
}

/// Sign of sorting `a ++ b` given both sorted and disjoint (bitmasks).
fn merge_sign(a: u32, b: u32) -> i64 {
    let mut inversions = 0;
    for i in 0..32 {
        if a >> i & 1 == 1 {
            inversions += (b & ((1u32 << i) - 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialForm {
    mode: Mode,
    coords: Vec<char>,
    /// Basis `dx^S` keyed by the bitmask of `S` over `coords`.
    terms: BTreeMap<u32, Element>,
}

impl DifferentialForm {
    pub fn zero(mode: Mode, coords: &[char]) -> DifferentialForm {
        assert!(coords.len() <= 16, "too many coordinates");
        DifferentialForm { mode, coords: coords.to_vec(), terms: BTreeMap::new() }
    }

    /// The 0-form `f`.
    pub fn function(mode: Mode, coords: &[char], f: Element) -> DifferentialForm {
        let mut out = DifferentialForm::zero(mode, coords);
        out.add_basis(0, collapse(f, mode));
        out
    }

    fn bit(&self, c: char) -> Result<u32, FormError> {
        self.coords
            .iter()
            .position(|&x| x == c)
            .map(|k| 1 << k)
            .ok_or(FormError::UnknownCoordinate(c))
    }

    /// Mask and sign of `dc_1 ∧ ... ∧ dc_n`; `None` if a coordinate repeats.
    fn basis_mask(&self, cs: &[char]) -> Result<Option<(u32, i64)>, FormError> {
        let mut mask = 0u32;
        let mut sign = 1;
        for &c in cs {
            let b = self.bit(c)?;
            if mask & b != 0 {
                return Ok(None);
            }
            sign *= merge_sign(mask, b);
            mask |= b;
        }
        Ok(Some((mask, sign)))
    }

    /// `f · dc_1 ∧ ... ∧ dc_n` with the sign of sorting applied.
    pub fn monomial(mode: Mode, coords: &[char], f: Element, cs: &[char]) -> Result<DifferentialForm, FormError> {
        let mut out = DifferentialForm::zero(mode, coords);
        if let Some((mask, sign)) = out.basis_mask(cs)? {
            out.add_basis(mask, collapse(f, mode).scale(&Scalar::from_int(sign)));
        }
        Ok(out)
    }

    /// `Σ f_k dc_k` over all coordinates.
    pub fn one_form(mode: Mode, coords: &[char], coeffs: Vec<Element>) -> DifferentialForm {
        assert_eq!(coeffs.len(), coords.len());
        let mut out = DifferentialForm::zero(mode, coords);
        for (k, f) in coeffs.into_iter().enumerate() {
            out.add_basis(1 << k, collapse(f, mode));
        }
        out
    }

    fn add_basis(&mut self, mask: u32, f: Element) {
        let sum = match self.terms.remove(&mask) {
            Some(g) => g + f,
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(mask, sum);
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn coords(&self) -> &[char] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest degree present, `None` for the zero form.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.count_ones()).max()
    }

    /// Coefficient of `dc_1 ∧ ... ∧ dc_n` in any order (sign-adjusted).
    pub fn coefficient(&self, cs: &[char]) -> Result<Element, FormError> {
        Ok(match self.basis_mask(cs)? {
            None => Element::zero(),
            Some((mask, sign)) => self
                .terms
                .get(&mask)
                .map(|f| f.scale(&Scalar::from_int(sign)))
                .unwrap_or_default(),
        })
    }

    fn compatible(&self, other: &DifferentialForm) -> Result<(), FormError> {
        if self.mode != other.mode {
            return Err(FormError::MixedMode);
        }
        if self.coords != other.coords {
            return Err(FormError::CoordinateMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &DifferentialForm) -> Result<DifferentialForm, FormError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (&m, f) in &other.terms {
            out.add_basis(m, f.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.mode, &self.coords);
        for (&m, f) in &self.terms {
            out.add_basis(m, f.scale(c));
        }
        out
    }

    pub fn sub(&self, other: &DifferentialForm) -> Result<DifferentialForm, FormError> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn wedge(&self, other: &DifferentialForm) -> Result<DifferentialForm, FormError> {
        self.compatible(other)?;
        let mut out = DifferentialForm::zero(self.mode, &self.coords);
        for (&ma, fa) in &self.terms {
            for (&mb, fb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let f = collapse(fa * fb, self.mode).scale(&Scalar::from_int(merge_sign(ma, mb)));
                out.add_basis(ma | mb, f);
            }
        }
        Ok(out)
    }

    /// `d(f dx^S) = Σ_c ∂_c f dc ∧ dx^S`.
    pub fn exterior_d(&self) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.mode, &self.coords);
        for (&m, f) in &self.terms {
            for (k, &c) in self.coords.iter().enumerate() {
                let b = 1u32 << k;
                if m & b != 0 {
                    continue;
                }
                let df = partial(f, c, self.mode);
                if df.is_zero() {
                    continue;
                }
                out.add_basis(m | b, df.scale(&Scalar::from_int(merge_sign(b, m))));
            }
        }
        out
    }

    /// Replace coefficient letters through `f` (e.g. setting symbols to 0).
    pub fn map_coefficients(&self, mut f: impl FnMut(&Element) -> Element) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.mode, &self.coords);
        for (&m, e) in &self.terms {
            out.add_basis(m, collapse(f(e), self.mode));
        }
        out
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<u32> = self.terms.keys().copied().collect();
        keys.sort_by_key(|m| (m.count_ones(), m.reverse_bits()));
        for (k, m) in keys.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let basis: Vec<String> = (0..self.coords.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| format!("d{}", self.coords[i]))
                .collect();
            if basis.is_empty() {
                write!(f, "({})", self.terms[m])?;
            } else {
                write!(f, "({}) {}", self.terms[m], basis.join("^"))?;
            }
        }
        Ok(())
    }
}

const XYZT: [char; 4] = ['x', 'y', 'z', 't'];

fn d(name: &str, label: char) -> Element {
    Element::generator(&GeneratorId::scalar(name).differentiated(label))
}

/// The electromagnetic reading of `dλ` for `λ = F dx + G dy + H dz − φ dt`.
#[derive(Debug, Clone)]
pub struct MaxwellDerivation {
    pub lambda: DifferentialForm,
    pub d_lambda: DifferentialForm,
    pub e: [Element; 3],
    pub b: [Element; 3],
    pub dd_lambda: DifferentialForm,
    pub div_b: Element,
    pub faraday: [Element; 3],
    pub rho: Element,
    pub current: [Element; 3],
}

fn curl(v: &[Element; 3], mode: Mode) -> [Element; 3] {
    let p = |e: &Element, c| partial(e, c, mode);
    [
        p(&v[2], 'y') - p(&v[1], 'z'),
        p(&v[0], 'z') - p(&v[2], 'x'),
        p(&v[1], 'x') - p(&v[0], 'y'),
    ]
}

impl MaxwellDerivation {
    pub fn compute() -> MaxwellDerivation {
        let m = Mode::Commutative;
        let lambda = DifferentialForm::one_form(m, &XYZT, vec![sym("F"), sym("G"), sym("H"), -sym("phi")]);
        let d_lambda = lambda.exterior_d();
        let c = |cs: &[char]| d_lambda.coefficient(cs).expect("coordinates are fixed");
        let b = [c(&['y', 'z']), -c(&['x', 'z']), c(&['x', 'y'])];
        let e = [c(&['x', 't']), c(&['y', 't']), c(&['z', 't'])];
        let dd_lambda = d_lambda.exterior_d();
        let div_b = partial(&b[0], 'x', m) + partial(&b[1], 'y', m) + partial(&b[2], 'z', m);
        let curl_e = curl(&e, m);
        let faraday = [0, 1, 2].map(|k| &curl_e[k] + &partial(&b[k], 't', m));
        let rho = partial(&e[0], 'x', m) + partial(&e[1], 'y', m) + partial(&e[2], 'z', m);
        let curl_b = curl(&b, m);
        let current = [0, 1, 2].map(|k| &curl_b[k] - &partial(&e[k], 't', m));
        MaxwellDerivation { lambda, d_lambda, e, b, dd_lambda, div_b, faraday, rho, current }
    }
}

impl fmt::Display for MaxwellDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lambda = {}", self.lambda)?;
        writeln!(f, "d lambda = {}", self.d_lambda)?;
        for k in 0..3 {
            writeln!(f, "E{} = {}", k + 1, self.e[k])?;
        }
        for k in 0..3 {
            writeln!(f, "B{} = {}", k + 1, self.b[k])?;
        }
        writeln!(f, "d d lambda = {}", self.dd_lambda)?;
        writeln!(f, "div B = {}", self.div_b)?;
        for k in 0..3 {
            writeln!(f, "(curl E + dB/dt){} = {}", k + 1, self.faraday[k])?;
        }
        writeln!(f, "rho := div E = {}", self.rho)?;
        for k in 0..3 {
            writeln!(f, "J{} := (curl B - dE/dt){} = {}", k + 1, k + 1, self.current[k])?;
        }
        Ok(())
    }
}

fn exact(r: &mut Report, identity: &str, case: &str, residual: Element) {
    r.push(identity, case.to_string(), residual.to_string(), residual.is_zero());
}

/// `dλ` against the displayed components, `E`/`B` against the potentials,
/// `d²λ = 0` and the homogeneous Maxwell equations.
pub fn weyl_maxwell_derivation() -> Report {
    let m = Mode::Commutative;
    let mx = MaxwellDerivation::compute();
    let mut r = Report::new("maxwell");
    let displayed: [(&[char], Element, &str); 6] = [
        (&['x', 'y'], d("G", 'x') - d("F", 'y'), "dx^dy"),
        (&['x', 'z'], d("H", 'x') - d("F", 'z'), "dx^dz"),
        (&['y', 'z'], d("H", 'y') - d("G", 'z'), "dy^dz"),
        (&['x', 't'], -(d("F", 't') + d("phi", 'x')), "dx^dt"),
        (&['y', 't'], -(d("G", 't') + d("phi", 'y')), "dy^dt"),
        (&['z', 't'], -(d("H", 't') + d("phi", 'z')), "dz^dt"),
    ];
    for (cs, expected, label) in displayed {
        let got = mx.d_lambda.coefficient(cs).expect("coordinates are fixed");
        exact(&mut r, "d-lambda-component", label, (got - expected).commutative_normal());
    }
    r.note("dx^dz coefficient is H_x - F_z, not H_x - F_y");

    let a = [sym("F"), sym("G"), sym("H")];
    let phi = sym("phi");
    for k in 0..3 {
        let expected = -partial(&phi, XYZT[k], m) - partial(&a[k], 't', m);
        exact(&mut r, "E = -grad phi - dA/dt", &format!("E{}", k + 1), (&mx.e[k] - &expected).commutative_normal());
    }
    let curl_a = curl(&a, m);
    for (k, ck) in curl_a.iter().enumerate() {
        exact(&mut r, "B = curl A", &format!("B{}", k + 1), (&mx.b[k] - ck).commutative_normal());
    }
    let total: Element = mx.dd_lambda.coefficient(&['x', 'y', 'z']).unwrap();
    exact(&mut r, "d d lambda = 0", "dx^dy^dz", total);
    r.push("d d lambda = 0", "all components".into(), mx.dd_lambda.to_string(), mx.dd_lambda.is_zero());
    exact(&mut r, "div B = 0", "-", mx.div_b.clone());
    for k in 0..3 {
        exact(&mut r, "curl E + dB/dt = 0", &format!("component {}", k + 1), mx.faraday[k].clone());
    }
    r
}

/// Components of `F = dA + A∧A` for noncommuting `A = Σ A_i dx^i`.
pub fn yang_mills_curvature(d: u32, mode: Mode) -> DifferentialForm {
    let coords: Vec<char> = (1..=d).map(|i| char::from_digit(i, 10).expect("d <= 9")).collect();
    let a = DifferentialForm::one_form(
        mode,
        &coords,
        (1..=d).map(|i| Element::generator(&GeneratorId::new("A", &[i]))).collect(),
    );
    a.exterior_d().add(&a.wedge(&a).expect("same form")).expect("same form")
}

fn partial_a(j: u32, i: u32) -> Element {
    let label = char::from_digit(i, 10).expect("d <= 9");
    Element::generator(&GeneratorId::new("A", &[j]).differentiated(label))
}

/// `F_ij = ∂_iA_j − ∂_jA_i + [A_i,A_j]`, cross-checked against the
/// commutator curvature `[Ẋ_i, Ẋ_j]` of the gauge world under
/// `∂_iA_j ↦ [A_j, P_i]`, plus the commuting and `A = 0` specializations.
pub fn yang_mills_curvature_check(d: u32) -> Result<Report, crate::world::WorldError> {
    let mut r = Report::new("yang-mills");
    if !(1..=4).contains(&d) {
        return Err(crate::world::WorldError::DimOutOfRange(d));
    }
    let f = yang_mills_curvature(d, Mode::Noncommutative);
    let fc = yang_mills_curvature(d, Mode::Commutative);
    let w = gauge_world(d)?;
    let a = |i: u32| Element::generator(&GeneratorId::new("A", &[i]));
    let digit = |i: u32| char::from_digit(i, 10).unwrap();
    for i in 1..=d {
        for j in i + 1..=d {
            let case = crate::report::tuple(&[i, j]);
            let fij = f.coefficient(&[digit(i), digit(j)]).unwrap();
            let expected = partial_a(j, i) - partial_a(i, j) + Element::commutator(&a(i), &a(j));
            exact(&mut r, "F = dA + A^A", &case, &fij - &expected);

            let images: Vec<_> = (1..=d)
                .flat_map(|p| (1..=d).map(move |q| (p, q)))
                .map(|(p, q)| {
                    let img = Element::commutator(&a(p), &w.gen("P", &[q]).unwrap());
                    (GeneratorId::new("A", &[p]).differentiated(digit(q)).letter(), img)
                })
                .collect();
            let as_ops = fij.substitute(|l| images.iter().find(|(k, _)| *k == l).map(|(_, v)| v.clone()));
            let xdot = |k: u32| w.element("Xdot", &[k]).unwrap();
            let rij = Element::commutator(&xdot(i), &xdot(j));
            let residual = w.normalize(&(as_ops - rij))?;
            r.exact(&w, "F_ij = [Xdot_i, Xdot_j]", case.clone(), &residual);

            let fcij = fc.coefficient(&[digit(i), digit(j)]).unwrap();
            let abelian = (partial_a(j, i) - partial_a(i, j)).commutative_normal();
            exact(&mut r, "commuting A: F = dA", &case, &fcij - &abelian);
        }
    }
    let zero = f.map_coefficients(|e| {
        e.substitute(|l| (l.id().name == "A").then(Element::zero))
    });
    r.push("A = 0 gives F = 0", "-".into(), zero.to_string(), zero.is_zero());
    Ok(r)
}
