//! Numeric second opinion: substitute seeded random dense matrices for free
//! generators and measure the relative size of an identity's value.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, RealField};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::eval::{eval, Bindings, BUILTIN_PARAMS};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::symbol::GeneratorId;
use crate::world::{free_world, gen_element, Scope, World, WorldError};
use crate::syntax::{Expr, Index};
use crate::Element;

/// Relative residual below which an identity is accepted.
pub const PASS_THRESHOLD: f64 = 1e-8;
/// Relative residual a non-identity control must exceed.
pub const CONTROL_THRESHOLD: f64 = 1e-2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("generator `{0}` has no matrix assigned")]
    UnassignedGenerator(GeneratorId),
    #[error("parameter `{0}` has no value assigned")]
    UnassignedParameter(String),
    #[error("scalar `{0}` is not real; the oracle evaluates over the reals")]
    NonRealScalar(String),
    #[error(
        "world `{0}` has relations; a relation such as [X,P] = 1 has no finite matrix solution \
         (the trace of a commutator is 0, the trace of the identity is n), so the oracle only \
         evaluates identities of the free algebra"
    )]
    RelationsPresent(String),
    #[error("`{0}` is not a constant")]
    NonScalar(String),
    #[error("the oracle evaluates free-algebra expressions; `{0}` is not supported")]
    Unsupported(String),
    #[error("matrix dimension must be positive")]
    ZeroDimension,
    #[error(transparent)]
    World(#[from] WorldError),
}

/// Matrices for generators (entries uniform in [-1, 1]) and values for parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixAssignment<T: RealField> {
    n: usize,
    seed: u64,
    matrices: BTreeMap<GeneratorId, DMatrix<T>>,
    params: BTreeMap<String, T>,
}

impl<T: RealField + Copy> MatrixAssignment<T> {
    /// Deterministic in `(seed, n, generators)`: generators are filled in
    /// sorted order from one ChaCha stream.
    pub fn random(generators: &[GeneratorId], n: usize, seed: u64) -> MatrixAssignment<T> {
        let mut sorted = generators.to_vec();
        sorted.sort();
        sorted.dedup();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let matrices = sorted
            .into_iter()
            .map(|g| {
                let m = DMatrix::from_fn(n, n, |_, _| nalgebra::convert::<f64, T>(rng.gen_range(-1.0..=1.0)));
                (g, m)
            })
            .collect();
        MatrixAssignment { n, seed, matrices, params: BTreeMap::new() }
    }

    pub fn with_param(mut self, name: &str, value: T) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn matrix(&self, id: &GeneratorId) -> Option<&DMatrix<T>> {
        self.matrices.get(id)
    }

    fn scalar(&self, s: &Scalar) -> Result<T, OracleError> {
        let mut total = T::zero();
        for (m, c) in s.terms() {
            if !c.is_real() {
                return Err(OracleError::NonRealScalar(s.to_string()));
            }
            let mut v: T = nalgebra::convert(c.re.to_f64().unwrap_or(f64::NAN));
            for (p, e) in m.exponents() {
                let value = *self.params.get(&p.name()).ok_or_else(|| OracleError::UnassignedParameter(p.name()))?;
                v *= value.powi(e);
            }
            total += v;
        }
        Ok(total)
    }

    /// `Σ |c| Π ‖M‖_F` over the terms: the scale residuals are measured against.
    pub fn scale(&self, e: &Element) -> Result<T, OracleError> {
        let mut total = T::zero();
        for (w, c) in e.terms() {
            let mut t = self.scalar(c)?.abs();
            for l in w.letters() {
                let id = l.id();
                t *= self.matrices.get(&*id).ok_or_else(|| OracleError::UnassignedGenerator((*id).clone()))?.norm();
            }
            total += t;
        }
        Ok(total)
    }
}

/// The matrix value of `e`.
pub fn evaluate<T: RealField + Copy>(e: &Element, m: &MatrixAssignment<T>) -> Result<DMatrix<T>, OracleError> {
    let mut out = DMatrix::zeros(m.n, m.n);
    for (w, c) in e.terms() {
        let mut prod = DMatrix::identity(m.n, m.n);
        for l in w.letters() {
            let id = l.id();
            let g = m.matrices.get(&*id).ok_or_else(|| OracleError::UnassignedGenerator((*id).clone()))?;
            prod *= g;
        }
        out += prod * m.scalar(c)?;
    }
    Ok(out)
}

/// `‖value‖_F / scale`, or 0 for the zero element.
pub fn relative_residual<T: RealField + Copy>(e: &Element, m: &MatrixAssignment<T>) -> Result<f64, OracleError> {
    let scale = m.scale(e)?;
    if scale == T::zero() {
        return Ok(0.0);
    }
    let r = evaluate(e, m)?.norm() / scale;
    Ok(nalgebra::try_convert::<T, f64>(r).unwrap_or(f64::NAN))
}

/// Value and scale of an unexpanded expression. Sums, products and brackets
/// are formed on matrices, so an identity cancels only in floating point.
/// The scale follows the same recursion with norms: `|a + b| -> |a| + |b|`,
/// `|ab| -> |a||b|`, `|[a,b]| -> 2|a||b|`.
fn eval_tree<T: RealField + Copy>(e: &Expr, m: &MatrixAssignment<T>) -> Result<(DMatrix<T>, T), OracleError> {
    let n = m.n;
    let scalar = |v: T| -> Result<(DMatrix<T>, T), OracleError> { Ok((DMatrix::identity(n, n) * v, v.abs())) };
    match e {
        Expr::Num(q) => scalar(nalgebra::convert(q.to_f64().unwrap_or(f64::NAN))),
        Expr::Imag => Err(OracleError::NonRealScalar("i".into())),
        Expr::Ref { name, indices } => {
            let ix = literal_indices(indices)?;
            if ix.is_empty() {
                if let Some(v) = m.params.get(name) {
                    return scalar(*v);
                }
                if BUILTIN_PARAMS.contains(&name.as_str()) {
                    return Err(OracleError::UnassignedParameter(name.clone()));
                }
            }
            let id = GeneratorId::new(name.as_str(), &ix);
            let g = m.matrices.get(&id).ok_or(OracleError::UnassignedGenerator(id))?;
            Ok((g.clone(), g.norm()))
        }
        Expr::Delta(a, b) => {
            let ix = literal_indices(&[a.clone(), b.clone()])?;
            scalar(if ix[0] == ix[1] { T::one() } else { T::zero() })
        }
        Expr::Neg(a) => {
            let (v, s) = eval_tree(a, m)?;
            Ok((-v, s))
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let ((va, sa), (vb, sb)) = (eval_tree(a, m)?, eval_tree(b, m)?);
            let v = if matches!(e, Expr::Add(..)) { va + vb } else { va - vb };
            Ok((v, sa + sb))
        }
        Expr::Mul(a, b) => {
            let ((va, sa), (vb, sb)) = (eval_tree(a, m)?, eval_tree(b, m)?);
            Ok((va * vb, sa * sb))
        }
        Expr::Comm(a, b) => {
            let ((va, sa), (vb, sb)) = (eval_tree(a, m)?, eval_tree(b, m)?);
            let two: T = nalgebra::convert(2.0);
            Ok((&va * &vb - &vb * &va, two * sa * sb))
        }
        Expr::Div(a, b) => {
            let (va, sa) = eval_tree(a, m)?;
            let d = scalar_value(b, m)?;
            Ok((va / d, sa / d.abs()))
        }
        Expr::Pow(a, k) if *k < 0 => {
            let v = scalar_value(a, m)?.powi(*k);
            scalar(v)
        }
        Expr::Pow(a, k) => {
            let (va, sa) = eval_tree(a, m)?;
            let mut out = DMatrix::identity(n, n);
            for _ in 0..*k {
                out *= &va;
            }
            Ok((out, sa.powi(*k)))
        }
        Expr::Partial { .. } | Expr::TimeDeriv(_) => Err(OracleError::Unsupported(e.to_string())),
    }
}

fn literal_indices(ix: &[Index]) -> Result<Vec<u32>, OracleError> {
    ix.iter()
        .map(|i| match i {
            Index::Lit(n) => Ok(*n),
            Index::Var(v) => Err(OracleError::Unsupported(format!("index variable `{v}`"))),
        })
        .collect()
}

/// Value of a constant subexpression, for divisors and negative powers.
fn scalar_value<T: RealField + Copy>(e: &Expr, m: &MatrixAssignment<T>) -> Result<T, OracleError> {
    let non_scalar = || OracleError::NonScalar(e.to_string());
    Ok(match e {
        Expr::Num(q) => nalgebra::convert(q.to_f64().unwrap_or(f64::NAN)),
        Expr::Ref { name, indices } if indices.is_empty() => match m.params.get(name) {
            Some(v) => *v,
            None if BUILTIN_PARAMS.contains(&name.as_str()) => {
                return Err(OracleError::UnassignedParameter(name.clone()))
            }
            None => return Err(non_scalar()),
        },
        Expr::Neg(a) => -scalar_value(a, m)?,
        Expr::Add(a, b) => scalar_value(a, m)? + scalar_value(b, m)?,
        Expr::Sub(a, b) => scalar_value(a, m)? - scalar_value(b, m)?,
        Expr::Mul(a, b) => scalar_value(a, m)? * scalar_value(b, m)?,
        Expr::Div(a, b) => scalar_value(a, m)? / scalar_value(b, m)?,
        Expr::Pow(a, k) => scalar_value(a, m)?.powi(*k),
        _ => return Err(non_scalar()),
    })
}

/// The matrix value of an unexpanded expression.
pub fn evaluate_expr<T: RealField + Copy>(e: &Expr, m: &MatrixAssignment<T>) -> Result<DMatrix<T>, OracleError> {
    Ok(eval_tree(e, m)?.0)
}

/// `‖value‖_F / scale` of an unexpanded expression, or 0 when the scale is 0.
pub fn expr_residual<T: RealField + Copy>(e: &Expr, m: &MatrixAssignment<T>) -> Result<f64, OracleError> {
    let (v, scale) = eval_tree(e, m)?;
    if scale == T::zero() {
        return Ok(0.0);
    }
    Ok(nalgebra::try_convert::<T, f64>(v.norm() / scale).unwrap_or(f64::NAN))
}

/// Generators referenced by `e`, with parameters left out.
pub fn expr_generators(e: &Expr) -> Result<Vec<GeneratorId>, OracleError> {
    fn walk(e: &Expr, out: &mut Vec<GeneratorId>) -> Result<(), OracleError> {
        match e {
            Expr::Ref { name, indices } => {
                let ix = literal_indices(indices)?;
                if !(ix.is_empty() && BUILTIN_PARAMS.contains(&name.as_str())) {
                    out.push(GeneratorId::new(name.as_str(), &ix));
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::TimeDeriv(a) => walk(a, out)?,
            Expr::Partial { arg, .. } => walk(arg, out)?,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Comm(a, b) => {
                walk(a, out)?;
                walk(b, out)?;
            }
            Expr::Num(_) | Expr::Imag | Expr::Delta(..) => {}
        }
        Ok(())
    }
    let mut out = Vec::new();
    walk(e, &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub name: String,
    pub trials: usize,
    pub n: usize,
    /// Largest relative residual per trial over all instances.
    pub residuals: Vec<f64>,
}

impl OracleOutcome {
    pub fn max(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.residuals.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn holds(&self) -> bool {
        self.residuals.iter().all(|&r| r < PASS_THRESHOLD)
    }

    /// True when every trial exposes the expression as a non-identity.
    pub fn refuted(&self) -> bool {
        self.residuals.iter().all(|&r| r > CONTROL_THRESHOLD)
    }
}

/// Evaluate each of `instances` (unexpanded expressions over the generators
/// of the free world `w`) under `trials` random assignments; trial `t` uses
/// seed `seed + t`.
pub fn oracle_check(
    name: &str,
    instances: &[Expr],
    w: &World,
    trials: usize,
    n: usize,
    seed: u64,
) -> Result<OracleOutcome, OracleError> {
    if w.has_relations() {
        return Err(OracleError::RelationsPresent(w.name().to_string()));
    }
    if n == 0 {
        return Err(OracleError::ZeroDimension);
    }
    let gens = w.generators();
    let mut residuals = Vec::with_capacity(trials);
    for t in 0..trials as u64 {
        let m = MatrixAssignment::<f64>::random(gens, n, seed.wrapping_add(t));
        let mut worst: f64 = 0.0;
        for e in instances {
            worst = worst.max(expr_residual(e, &m)?);
        }
        residuals.push(worst);
    }
    Ok(OracleOutcome { name: name.to_string(), trials, n, residuals })
}

fn gen(name: &str, ix: &[u32]) -> Expr {
    Expr::reference(name, ix)
}

fn comm(a: &Expr, b: &Expr) -> Expr {
    Expr::comm(a.clone(), b.clone())
}

fn add(a: Expr, b: Expr) -> Expr {
    Expr::Add(Box::new(a), Box::new(b))
}

fn sub(a: Expr, b: Expr) -> Expr {
    Expr::Sub(Box::new(a), Box::new(b))
}

fn world_of(instances: &[Expr]) -> Result<World, OracleError> {
    let mut gens = Vec::new();
    for e in instances {
        gens.extend(expr_generators(e)?);
    }
    gens.sort();
    gens.dedup();
    if gens.is_empty() {
        gens.push(GeneratorId::scalar("I"));
    }
    Ok(free_world(&gens)?)
}

fn bianchi_instances(k: u32) -> Vec<Expr> {
    let nn = |a: u32| gen("N", &[a]);
    let r = |a: u32, b: u32| comm(&nn(a), &nn(b));
    let mut out = Vec::new();
    for a in 1..=k {
        for b in 1..=k {
            for c in 1..=k {
                out.push(add(add(comm(&r(a, b), &nn(c)), comm(&r(c, a), &nn(b))), comm(&r(b, c), &nn(a))));
            }
        }
    }
    out
}

fn curvature_instances() -> Vec<Expr> {
    let (lx, ly) = (gen("L", &[1]), gen("L", &[2]));
    let alphabet = [lx.clone(), ly.clone(), gen("G", &[])];
    let mut words = vec![Expr::int(1)];
    words.extend(alphabet.iter().cloned());
    for a in &alphabet {
        for b in &alphabet {
            words.push(Expr::Mul(Box::new(a.clone()), Box::new(b.clone())));
        }
    }
    let nabla = |l: &Expr, f: &Expr| comm(f, l);
    words
        .iter()
        .map(|f| {
            let lhs = sub(nabla(&lx, &nabla(&ly, f)), nabla(&ly, &nabla(&lx, f)));
            sub(lhs, comm(&comm(&lx, &ly), f))
        })
        .collect()
}

fn levi_civita_instances(d: u32) -> Vec<Expr> {
    let h = gen("H", &[]);
    let x = |i: u32| gen("X", &[i]);
    let xdot = |i: u32| comm(&x(i), &h);
    let g = |a: u32, b: u32| comm(&x(a), &xdot(b));
    let nabla = |i: u32, f: &Expr| comm(f, &xdot(i));
    let mut out = Vec::new();
    for i in 1..=d {
        for j in 1..=d {
            for k in 1..=d {
                let xddot = comm(&xdot(k), &h);
                let lhs = comm(&x(i), &comm(&x(j), &xddot));
                let rhs = add(
                    add(add(comm(&comm(&x(i), &g(j, k)), &h), nabla(i, &g(j, k))), nabla(j, &g(i, k))),
                    Expr::Neg(Box::new(nabla(k, &g(i, j)))),
                );
                out.push(sub(lhs, rhs));
            }
        }
    }
    out
}

fn control_instance() -> Vec<Expr> {
    vec![comm(&comm(&gen("A", &[]), &gen("B", &[])), &gen("C", &[]))]
}

/// Built-in oracle identities: `bianchi`, `curvature`, `levi-civita`, `jacobi`,
/// and the non-identity `control`, each with the free world of its generators.
pub fn named_identity(name: &str, k: u32) -> Result<Option<(World, Vec<Expr>)>, OracleError> {
    let inst = match name {
        "bianchi" => bianchi_instances(k),
        "curvature" => curvature_instances(),
        "levi-civita" => levi_civita_instances(k.min(3)),
        "jacobi" => bianchi_instances(3),
        "control" => control_instance(),
        _ => return Ok(None),
    };
    Ok(Some((world_of(&inst)?, inst)))
}

/// Scope accepting every reference as a free generator.
pub struct FreeScope;

impl Scope for FreeScope {
    fn lookup(&self, name: &str, indices: &[u32]) -> Option<Element> {
        if indices.is_empty() && BUILTIN_PARAMS.contains(&name) {
            return None;
        }
        Some(gen_element(name, indices))
    }
    fn is_param(&self, _: &str) -> bool {
        false
    }
}

/// How many instances the symbolic engine reduces to zero.
fn symbolic_zeros(w: &World, instances: &[Expr]) -> Result<usize, OracleError> {
    let mut zeros = 0;
    for e in instances {
        let v = eval(e, &FreeScope, &Bindings::new()).map_err(|err| OracleError::Unsupported(err.to_string()))?;
        if w.is_zero(&v)? {
            zeros += 1;
        }
    }
    Ok(zeros)
}

fn outcome_line(r: &mut Report, o: &OracleOutcome, control: bool) {
    let case = format!("{} trials, n = {}", o.trials, o.n);
    if control {
        r.push(
            &format!("{} is refuted (relative residual > {CONTROL_THRESHOLD:e})", o.name),
            case,
            format!("min {:.3e}", o.min()),
            o.refuted(),
        );
    } else {
        r.push(
            &format!("{} holds (relative residual < {PASS_THRESHOLD:e})", o.name),
            case,
            format!("max {:.3e}", o.max()),
            o.holds(),
        );
    }
}

/// The symbolic verdict on the same instances, as a separate line.
fn symbolic_line(r: &mut Report, name: &str, w: &World, inst: &[Expr], control: bool) -> Result<(), OracleError> {
    let zeros = symbolic_zeros(w, inst)?;
    let (identity, pass) = if control {
        (format!("{name} is symbolically nonzero"), zeros == 0)
    } else {
        (format!("{name} is symbolically zero"), zeros == inst.len())
    };
    r.push(&identity, format!("{} instances", inst.len()), format!("{zeros} zero"), pass);
    Ok(())
}

/// One of the `oracle-*` suites as a report.
pub fn oracle_suite(name: &str, k: u32, trials: usize, n: usize, seed: u64) -> Result<Option<Report>, OracleError> {
    let Some((w, instances)) = named_identity(name, k)? else {
        return Ok(None);
    };
    let control = name == "control";
    let o = oracle_check(name, &instances, &w, trials, n, seed)?;
    let mut r = Report::new(&format!("oracle-{name}"));
    outcome_line(&mut r, &o, control);
    symbolic_line(&mut r, name, &w, &instances, control)?;
    Ok(Some(r))
}

/// Oracle test of a user expression asserted to vanish, with every
/// non-parameter reference read as a free generator.
pub fn oracle_expression(e: &Expr, trials: usize, n: usize, seed: u64) -> Result<Report, OracleError> {
    let inst = [e.clone()];
    let w = world_of(&inst)?;
    let o = oracle_check(&e.to_string(), &inst, &w, trials, n, seed)?;
    let mut r = Report::new("oracle");
    outcome_line(&mut r, &o, false);
    Ok(r)
}

/// Bianchi with the control alongside, as the acceptance pairing.
pub fn oracle_bianchi_with_control(k: u32, trials: usize, n: usize, seed: u64) -> Result<Report, OracleError> {
    let mut r = Report::new("oracle-bianchi");
    for (name, control) in [("bianchi", false), ("control", true)] {
        let (w, inst) = named_identity(name, k)?.expect("built-in identity");
        let label = if control { "control [[A,B],C]" } else { name };
        outcome_line(&mut r, &oracle_check(label, &inst, &w, trials, n, seed)?, control);
        symbolic_line(&mut r, label, &w, &inst, control)?;
    }
    Ok(r)
}
