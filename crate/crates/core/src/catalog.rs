//! The fixed catalog of verification suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::discrete::{self, DiscreteError, SeriesWorld, WalkConfig};
use crate::forms;
use crate::geometry;
use crate::oracle::{self, OracleError};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::world::{flat_world, WorldError};
use crate::Element;

pub const SUITES: [&str; 17] = [
    "hamilton",
    "curvature",
    "metric-lemma",
    "fdot",
    "levi-civita-free",
    "levi-civita-corollary",
    "weyl-connection",
    "christoffel",
    "bianchi",
    "discrete-leibniz",
    "walk-commutator",
    "maxwell",
    "yang-mills",
    "oracle-bianchi",
    "oracle-curvature",
    "oracle-levi-civita",
    "oracle-control",
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown suite `{0}`; known suites: {list}, all", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Discrete(#[from] DiscreteError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A suite name with optional overrides of its default parameters.
#[derive(Debug, Clone, Default)]
pub struct SuiteSpec {
    pub name: String,
    /// Dimension `d` of the world.
    pub d: Option<u32>,
    /// Generator count for Bianchi-type suites.
    pub n: Option<u32>,
    pub maxlen: Option<usize>,
    pub trials: Option<usize>,
    /// Matrix size for oracle suites.
    pub matrix_dim: Option<usize>,
    pub seed: Option<u64>,
    /// User Hamiltonian for `hamilton`; seeded random ones otherwise.
    pub hamiltonian: Option<Element>,
}

impl SuiteSpec {
    pub fn named(name: &str) -> SuiteSpec {
        SuiteSpec { name: name.to_string(), ..SuiteSpec::default() }
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn run_suite(s: &SuiteSpec) -> Result<Report, CatalogError> {
    let seed = s.seed.unwrap_or(2024);
    let trials = s.trials.unwrap_or(100);
    let mdim = s.matrix_dim.unwrap_or(4);
    let n = s.n.unwrap_or(4);
    Ok(match s.name.as_str() {
        "hamilton" => {
            let d = s.d.unwrap_or(3);
            let w = flat_world(d)?;
            match &s.hamiltonian {
                Some(h) => geometry::hamilton_check(h, &w)?,
                None => {
                    let mut r = Report::new("hamilton");
                    let mut kinetic = Element::zero();
                    for i in 1..=d {
                        let p = w.gen("P", &[i])?;
                        kinetic.add_scaled(&(&p * &p), &Scalar::from_ratio(1, 2));
                    }
                    r.merge(geometry::hamilton_check(&kinetic, &w)?);
                    for k in 0..10 {
                        r.merge(geometry::hamilton_check(&geometry::random_hamiltonian(d, 3, seed + k), &w)?);
                    }
                    r
                }
            }
        }
        "curvature" => geometry::curvature_formula_check(s.d.unwrap_or(3))?,
        "metric-lemma" => {
            let mut r = Report::new("metric-lemma");
            for d in 1..=s.d.unwrap_or(3) {
                r.merge(geometry::metric_lemma_check(d)?);
            }
            r
        }
        "fdot" => geometry::fdot_symmetrized_check(s.d.unwrap_or(2), s.maxlen.unwrap_or(3))?,
        "levi-civita-free" => geometry::levi_civita_free_identity(s.d.unwrap_or(2))?,
        "levi-civita-corollary" => geometry::levi_civita_corollary_check()?,
        "weyl-connection" => geometry::weyl_connection_identity(s.d.unwrap_or(2))?,
        "christoffel" => geometry::classical_christoffel_check(s.d.unwrap_or(2))?,
        "bianchi" => geometry::bianchi_check(n)?,
        "discrete-leibniz" => {
            let sw = SeriesWorld::new(2, false)?;
            discrete::discrete_leibniz_check(s.maxlen.unwrap_or(2), &sw)?
        }
        "walk-commutator" => {
            let mut r = discrete::walk_commutator_check()?;
            let cfg = WalkConfig { steps: 10_000, delta: q(1, 2), tau: q(1, 4), seed };
            let walk = discrete::simulate_walk(&cfg)?;
            r.push(
                "(X' - X)^2/tau = Delta^2/tau on every step",
                format!("Delta = {}, tau = {}, {} steps", cfg.delta, cfg.tau, cfg.steps),
                format!("min {} max {}", walk.min, walk.max),
                walk.is_constant(),
            );
            r
        }
        "maxwell" => forms::weyl_maxwell_derivation(),
        "yang-mills" => {
            let mut r = Report::new("yang-mills");
            for d in 1..=s.d.unwrap_or(4) {
                r.merge(forms::yang_mills_curvature_check(d)?);
            }
            r
        }
        "oracle-bianchi" => oracle::oracle_bianchi_with_control(n, trials, mdim, seed)?,
        "oracle-curvature" | "oracle-levi-civita" | "oracle-control" => {
            let name = &s.name["oracle-".len()..];
            let k = if name == "levi-civita" { s.d.unwrap_or(2) } else { n };
            oracle::oracle_suite(name, k, trials, mdim, seed)?.expect("catalog name")
        }
        other => return Err(CatalogError::UnknownSuite(other.to_string())),
    })
}

/// Every suite in catalog order, with the same overrides.
pub fn run_all(base: &SuiteSpec) -> Result<Vec<Report>, CatalogError> {
    SUITES
        .iter()
        .map(|name| {
            let spec = SuiteSpec { name: name.to_string(), hamiltonian: None, ..base.clone() };
            run_suite(&spec)
        })
        .collect()
}
