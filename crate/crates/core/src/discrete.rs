//! Discrete calculus through the shift operator `J` with `X^(n) J = J X^(n+1)`,
//! and an exact rational ±Δ random walk.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::poly::Word;
use crate::report::Report;
use crate::scalar::Scalar;
use crate::symbol::{GeneratorId, Letter};
use crate::world::{words_up_to, World, WorldBuilder, WorldError};
use crate::Element;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiscreteError {
    #[error("shifting `{generator}` exceeds the series horizon {horizon}")]
    IndexOverflow { generator: String, horizon: u32 },
    #[error("invalid walk configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    World(#[from] WorldError),
}

/// Time-series symbols `X[0..=N]` and the shift `J`, ordered `J < X[0] < ... < X[N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesWorld {
    world: World,
    horizon: u32,
}

pub fn series_symbol(n: u32) -> Element {
    Element::generator(&GeneratorId::new("X", &[n]))
}

pub fn shift_symbol() -> Element {
    Element::generator(&GeneratorId::scalar("J"))
}

impl SeriesWorld {
    /// `commuting` adds `[X^(m), X^(n)] = 0` (scalar-valued series).
    pub fn new(horizon: u32, commuting: bool) -> Result<SeriesWorld, DiscreteError> {
        let mut b = WorldBuilder::new("series", 1);
        b.param("tau").param("h");
        let j = GeneratorId::scalar("J");
        b.gen(j.clone());
        for n in 0..=horizon {
            b.gen(GeneratorId::new("X", &[n]));
        }
        for n in 0..horizon {
            b.rule(&GeneratorId::new("X", &[n]), &j, &shift_symbol() * &series_symbol(n + 1))?;
        }
        if commuting {
            for m in 0..=horizon {
                for n in m + 1..=horizon {
                    b.rel(&GeneratorId::new("X", &[m]), &GeneratorId::new("X", &[n]), Element::zero())?;
                }
            }
        }
        Ok(SeriesWorld { world: b.build()?, horizon })
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    fn check_shiftable(&self, f: &Element) -> Result<(), DiscreteError> {
        for l in f.letters() {
            let id = l.id();
            if id.name == "X" && id.indices.first().is_some_and(|&n| n >= self.horizon) {
                return Err(DiscreteError::IndexOverflow { generator: id.to_string(), horizon: self.horizon });
            }
        }
        Ok(())
    }
}

/// `∇f = [f, J/h]`, normalized.
pub fn discrete_derivative(f: &Element, sw: &SeriesWorld) -> Result<Element, DiscreteError> {
    sw.check_shiftable(f)?;
    let j_over_h = shift_symbol().scale(&Scalar::param("h", -1));
    Ok(sw.world.commutator(f, &j_over_h)?)
}

/// `∇(fg) = ∇(f)g + f∇(g)` for all monomials `f, g` of length ≤ `maxlen`
/// over `X[0..horizon)`.
pub fn discrete_leibniz_check(maxlen: usize, sw: &SeriesWorld) -> Result<Report, DiscreteError> {
    let w = &sw.world;
    let alphabet: Vec<Letter> = (0..sw.horizon)
        .map(|n| GeneratorId::new("X", &[n]).letter())
        .collect();
    let words = words_up_to(&alphabet, maxlen);
    let mut r = Report::new("discrete-leibniz");
    let mut failures = 0;
    let mut checked = 0;
    let mut first_bad: Option<String> = None;
    for a in &words {
        for b in &words {
            let (f, g) = (Element::word(a.clone()), Element::word(b.clone()));
            let fg = &f * &g;
            let res = w.normalize(
                &(discrete_derivative(&fg, sw)? - &discrete_derivative(&f, sw)? * &g - &f * &discrete_derivative(&g, sw)?),
            )?;
            checked += 1;
            if !res.is_zero() {
                failures += 1;
                first_bad.get_or_insert(format!("f = {a}, g = {b}: {}", w.render(&res)));
            }
        }
    }
    r.push(
        "nabla(fg) = nabla(f)g + f nabla(g)",
        format!("{checked} pairs of monomials, length <= {maxlen}"),
        first_bad.unwrap_or_else(|| "0".into()),
        failures == 0,
    );
    let x0 = series_symbol(0);
    let expected = (&shift_symbol() * &(series_symbol(1) - x0.clone())).scale(&Scalar::param("h", -1));
    let res = w.normalize(&(discrete_derivative(&x0, sw)? - expected))?;
    r.exact(w, "nabla(X[0]) = J(X[1] - X[0])/h", "-".into(), &res);
    Ok(r)
}

/// `[X, Ẋ]` with `Ẋ = J(X' − X)/τ`, `X = X[0]`, `X' = X[1]`, normalized in
/// the commuting series world.
pub fn walk_commutator_symbolic(sw: &SeriesWorld) -> Result<Element, DiscreteError> {
    let (x, x1) = (series_symbol(0), series_symbol(1));
    sw.check_shiftable(&x)?;
    let xdot = (&shift_symbol() * &(&x1 - &x)).scale(&Scalar::param("tau", -1));
    Ok(sw.world.commutator(&x, &xdot)?)
}

/// The displayed identity `[X, Ẋ] = J(X' − X)²/τ` plus its constant-walk
/// specialization.
pub fn walk_commutator_check() -> Result<Report, DiscreteError> {
    let sw = SeriesWorld::new(2, true)?;
    let w = sw.world();
    let mut r = Report::new("walk-commutator");
    let got = walk_commutator_symbolic(&sw)?;
    let diff = series_symbol(1) - series_symbol(0);
    let expected = (&shift_symbol() * &(&diff * &diff)).scale(&Scalar::param("tau", -1));
    r.exact(w, "[X,Xdot] = J(X' - X)^2/tau", "-".into(), &w.normalize(&(&got - &expected))?);
    r.note(format!("[X,Xdot] = {}", w.render(&got)));
    let x1 = GeneratorId::new("X", &[1]).letter();
    let constant = got.substitute(|l| (l == x1).then(|| series_symbol(0)));
    r.exact(w, "X' = X gives 0", "-".into(), &w.normalize(&constant)?);
    let shift = w.normalize(&(&series_symbol(0) * &shift_symbol() - &shift_symbol() * &series_symbol(1)))?;
    r.exact(w, "X[0] J = J X[1]", "-".into(), &shift);
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkConfig {
    pub steps: u64,
    pub delta: BigRational,
    pub tau: BigRational,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkStep {
    pub step: u64,
    pub position: BigRational,
    pub increment: BigRational,
    pub k: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkReport {
    pub config: WalkConfig,
    pub steps: Vec<WalkStep>,
    pub min: BigRational,
    pub max: BigRational,
    pub mean: BigRational,
}

impl WalkReport {
    /// `min = max = Δ²/τ`.
    pub fn is_constant(&self) -> bool {
        let k = &self.config.delta * &self.config.delta / &self.config.tau;
        self.min == self.max && self.min == k
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,position,increment,k\n");
        for s in &self.steps {
            out.push_str(&format!("{},{},{},{}\n", s.step, s.position, s.increment, s.k));
        }
        out
    }
}

impl fmt::Display for WalkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(f, "steps: {}", c.steps)?;
        writeln!(f, "Delta: {}", c.delta)?;
        writeln!(f, "tau: {}", c.tau)?;
        writeln!(f, "seed: {}", c.seed)?;
        if let Some(last) = self.steps.last() {
            writeln!(f, "final position: {}", last.position)?;
        }
        writeln!(f, "k min: {}", self.min)?;
        writeln!(f, "k max: {}", self.max)?;
        writeln!(f, "k mean: {}", self.mean)?;
        writeln!(f, "Delta^2/tau: {}", &c.delta * &c.delta / &c.tau)?;
        writeln!(f, "k constant: {}", self.is_constant())
    }
}

/// A ±Δ walk with exact per-step `(X' − X)²/τ`.
pub fn simulate_walk(cfg: &WalkConfig) -> Result<WalkReport, DiscreteError> {
    if cfg.steps == 0 {
        return Err(DiscreteError::InvalidConfig("steps must be positive".into()));
    }
    if cfg.delta.is_zero() {
        return Err(DiscreteError::InvalidConfig("Delta must be nonzero".into()));
    }
    if !cfg.tau.is_positive() {
        return Err(DiscreteError::InvalidConfig("tau must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut position = BigRational::zero();
    let mut steps = Vec::with_capacity(cfg.steps as usize);
    let mut sum = BigRational::zero();
    for step in 1..=cfg.steps {
        let increment = if rng.gen_bool(0.5) { cfg.delta.clone() } else { -cfg.delta.clone() };
        position += &increment;
        let k = &increment * &increment / &cfg.tau;
        sum += &k;
        steps.push(WalkStep { step, position: position.clone(), increment, k });
    }
    let min = steps.iter().map(|s| &s.k).min().expect("steps > 0").clone();
    let max = steps.iter().map(|s| &s.k).max().expect("steps > 0").clone();
    let mean = sum / BigRational::from_integer(BigInt::from(cfg.steps));
    Ok(WalkReport { config: cfg.clone(), steps, min, max, mean })
}

/// `X[n_1]·X[n_2]·...` as an element.
pub fn monomial(indices: &[u32]) -> Element {
    Element::word(Word::from_letters(indices.iter().map(|&n| GeneratorId::new("X", &[n]).letter())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn derivative_examples() {
        let sw = SeriesWorld::new(3, false).unwrap();
        let w = sw.world();
        let d = discrete_derivative(&series_symbol(0), &sw).unwrap();
        assert_eq!(w.render(&d), "-h^-1*J*X[0] + h^-1*J*X[1]");
        assert!(discrete_derivative(&Element::one(), &sw).unwrap().is_zero());
        let sq = discrete_derivative(&monomial(&[0, 0]), &sw).unwrap();
        let expected = (&shift_symbol() * &(monomial(&[1, 1]) - monomial(&[0, 0]))).scale(&Scalar::param("h", -1));
        assert_eq!(sq, expected);
        assert!(matches!(
            discrete_derivative(&series_symbol(3), &sw),
            Err(DiscreteError::IndexOverflow { .. })
        ));
    }

    #[test]
    fn shift_relation_holds() {
        let sw = SeriesWorld::new(4, false).unwrap();
        for n in 0..4 {
            let e = &series_symbol(n) * &shift_symbol() - &shift_symbol() * &series_symbol(n + 1);
            assert!(sw.world().is_zero(&e).unwrap());
        }
    }

    #[test]
    fn leibniz_and_commutator() {
        let sw = SeriesWorld::new(2, false).unwrap();
        assert!(discrete_leibniz_check(2, &sw).unwrap().passed());
        let r = walk_commutator_check().unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn walk_constants() {
        let cfg = WalkConfig { steps: 10_000, delta: q(1, 2), tau: q(1, 4), seed: 7 };
        let rep = simulate_walk(&cfg).unwrap();
        assert_eq!(rep.min, q(1, 1));
        assert!(rep.is_constant());
        let rep = simulate_walk(&WalkConfig { steps: 10, delta: q(3, 1), tau: q(2, 1), seed: 1 }).unwrap();
        assert_eq!(rep.mean, q(9, 2));
        assert_eq!(simulate_walk(&cfg).unwrap().to_string(), simulate_walk(&cfg).unwrap().to_string());
        assert!(simulate_walk(&WalkConfig { tau: q(0, 1), ..cfg.clone() }).is_err());
        assert!(simulate_walk(&WalkConfig { delta: q(0, 1), ..cfg }).is_err());
    }
}
