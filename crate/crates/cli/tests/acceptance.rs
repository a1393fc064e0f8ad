//! One PASS/FAIL line per acceptance criterion, each within its time limit.

use std::process::Command;
use std::time::Instant;

use ncw_core::catalog::{run_suite, SuiteSpec};
use ncw_core::discrete::{self, SeriesWorld, WalkConfig};
use ncw_core::eval::{eval, Bindings};
use ncw_core::forms::{self, partial, sym, DifferentialForm, Mode};
use ncw_core::geometry::{self, Derivation};
use ncw_core::oracle::{self, named_identity, oracle_check, PASS_THRESHOLD};
use ncw_core::world::{
    coordinate_world, flat_world, free_world, gauge_world, metric_world, potential_world, words_up_to,
};
use ncw_core::{parse_expr, Element, GeneratorId, Report, Scalar, Strategy, Word, World};
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};

const SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Outcome {
        Outcome { pass, detail: detail.into() }
    }

    fn and(self, other: Outcome) -> Outcome {
        Outcome { pass: self.pass && other.pass, detail: format!("{}; {}", self.detail, other.detail) }
    }
}

/// Every line passes with an exact zero residual.
fn exact(r: &Report) -> Outcome {
    let bad: Vec<_> = r.results.iter().filter(|c| !c.pass || c.residual != "0").collect();
    let detail = match bad.first() {
        None => format!("{} exact zero residuals", r.results.len()),
        Some(c) => format!("{} nonzero, first: {} {} residual {}", bad.len(), c.identity, c.case, c.residual),
    };
    Outcome::new(bad.is_empty() && !r.results.is_empty(), format!("{}: {detail}", r.suite))
}

fn suite(name: &str, f: impl FnOnce(&mut SuiteSpec)) -> Report {
    let mut s = SuiteSpec::named(name);
    f(&mut s);
    run_suite(&s).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn count(r: &Report, identity_prefix: &str) -> usize {
    r.results.iter().filter(|c| c.identity.starts_with(identity_prefix)).count()
}

fn criterion(id: u32, title: &str, limit: f64, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let secs = start.elapsed().as_secs_f64();
    let pass = o.pass && secs <= limit;
    println!(
        "{} criterion {id}: {title}: {} [{secs:.3} s, limit {limit} s]",
        if pass { "PASS" } else { "FAIL" },
        o.detail
    );
    pass
}

fn c1_hamilton() -> Outcome {
    let w = flat_world(3).unwrap();
    let user = "X[1]*P[2]*P[3] + 1/2*(P[1]*P[1] + P[2]*P[2] + P[3]*P[3]) - 2*X[2]*X[3]*P[1] + X[3]^3 + 5";
    let h = eval(&parse_expr(user).unwrap(), &w, &Bindings::new()).unwrap();
    let mut out = exact(&suite("hamilton", |s| {
        s.d = Some(3);
        s.hamiltonian = Some(h);
    }));
    for seed in 0..20 {
        let h = geometry::random_hamiltonian(3, 3, SEED + seed);
        let r = geometry::hamilton_check(&h, &w).unwrap();
        if !exact(&r).pass {
            out = out.and(Outcome::new(false, format!("random H seed {seed} fails")));
        }
    }
    let cli = Command::new(env!("CARGO_BIN_EXE_ncw"))
        .args(["check", "hamilton", "-d", "3", "--hamiltonian", user])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&cli.stdout);
    let cli_ok = cli.status.success() && text.lines().filter(|l| l.starts_with("PASS")).all(|l| l.ends_with("residual: 0"));
    out.and(Outcome::new(cli_ok, format!("20 random cubic H exact; `ncw check hamilton -d 3` exit {:?}", cli.status.code())))
}

fn c2_curvature() -> Outcome {
    let r = suite("curvature", |s| s.d = Some(3));
    let formula = count(&r, "R_ij = ");
    let operator = r.results.iter().filter(|c| c.identity.starts_with("[[Xdot_i,Xdot_j],F]") && c.case.contains("91 words")).count();
    exact(&r).and(Outcome::new(
        formula == 3 && operator == 3,
        format!("{formula} formula pairs, {operator} operator pairs over all 91 words of length <= 2"),
    ))
}

fn c3_metric() -> Outcome {
    let r = suite("metric-lemma", |s| s.d = Some(3));
    exact(&r).and(Outcome::new(count(&r, "[X_r,Xdot_k] = g_rk") == 1 + 4 + 9, "d = 1, 2, 3"))
}

fn c4_fdot() -> Outcome {
    let r = suite("fdot", |s| {
        s.d = Some(2);
        s.maxlen = Some(3);
    });
    // every nonempty word of length <= 3 over X[1], X[2], P[1], P[2]
    let words = 4 + 16 + 64;
    exact(&r).and(Outcome::new(r.results.len() == words, format!("{} words F", r.results.len())))
}

fn c5_levi_civita() -> Outcome {
    let free = suite("levi-civita-free", |s| s.d = Some(2));
    let triples = count(&free, "[X_i,[X_j,Xddot_k]]");
    exact(&free)
        .and(Outcome::new(triples == 8, format!("{triples} index triples")))
        .and(exact(&suite("levi-civita-corollary", |_| {})))
}

fn c6_weyl() -> Outcome {
    let r = suite("weyl-connection", |s| s.d = Some(2));
    let triples = count(&r, "Gamma_kij + Gamma_ikj");
    exact(&r).and(Outcome::new(triples == 8, format!("{triples} triples in the coordinates world")))
}

fn c7_bianchi() -> Outcome {
    let r = suite("bianchi", |s| s.n = Some(4));
    let symbolic = exact(&r).and(Outcome::new(r.results.len() == 64, "all 64 ordered triples"));
    let (w, inst) = named_identity("bianchi", 4).unwrap().unwrap();
    let o = oracle_check("bianchi", &inst, &w, 100, 4, SEED).unwrap();
    let (cw, cinst) = named_identity("control", 4).unwrap().unwrap();
    let c = oracle_check("control", &cinst, &cw, 100, 4, SEED).unwrap();
    let numeric = Outcome::new(
        o.holds() && o.max() < PASS_THRESHOLD && c.refuted(),
        format!(
            "oracle n = 4, 100 trials, max relative residual {:.2e}; control [[A,B],C] min {:.2e} (fails as intended)",
            o.max(),
            c.min()
        ),
    );
    symbolic.and(numeric)
}

fn c8_discrete() -> Outcome {
    let leibniz = exact(&suite("discrete-leibniz", |s| s.maxlen = Some(2)));
    let comm = exact(&discrete::walk_commutator_check().unwrap());
    let q = |s: &str| s.parse::<BigRational>().unwrap();
    let cfg = WalkConfig { steps: 10_000, delta: q("1/2"), tau: q("1/4"), seed: SEED };
    let walk = discrete::simulate_walk(&cfg).unwrap();
    let one = q("1");
    let k = Outcome::new(
        walk.min == one && walk.max == one && walk.steps.len() == 10_000,
        format!("walk k min = {}, max = {} over {} steps", walk.min, walk.max, walk.steps.len()),
    );
    // independent series-world check: [X[0], J/h] = J(X[1] - X[0])/h
    let sw = SeriesWorld::new(3, false).unwrap();
    let w = sw.world();
    let lhs = discrete::discrete_derivative(&w.gen("X", &[0]).unwrap(), &sw).unwrap();
    let j = w.gen("J", &[]).unwrap();
    let hinv = Element::constant(Scalar::param("h", -1));
    let rhs = &(&j * &(w.gen("X", &[1]).unwrap() - w.gen("X", &[0]).unwrap())) * &hinv;
    let diff = w.is_zero(&(lhs - rhs)).unwrap();
    leibniz.and(comm).and(k).and(Outcome::new(diff, "difference quotient as commutator"))
}

fn c9_maxwell() -> Outcome {
    let m = Mode::Commutative;
    let coords = ['x', 'y', 'z', 't'];
    let lambda = DifferentialForm::one_form(m, &coords, vec![sym("F"), sym("G"), sym("H"), -sym("phi")]);
    let dl = lambda.exterior_d();
    let d = |e: &str, c: char| partial(&sym(e), c, m);
    // the displayed dx^dz component, with the sign slip corrected
    let xz = dl.coefficient(&['x', 'z']).unwrap() == d("H", 'x') - d("F", 'z');
    let xy = dl.coefficient(&['x', 'y']).unwrap() == d("G", 'x') - d("F", 'y');
    let dd = dl.exterior_d().is_zero();
    let mut out = exact(&forms::weyl_maxwell_derivation())
        .and(Outcome::new(xz && xy && dd, "dx^dz = H_x - F_z, d(d lambda) = 0"));
    for dim in 1..=4 {
        out = out.and(exact(&forms::yang_mills_curvature_check(dim).unwrap()));
    }
    out
}

fn worlds() -> Vec<World> {
    let free = [GeneratorId::new("N", &[1]), GeneratorId::new("N", &[2]), GeneratorId::scalar("K")];
    vec![
        flat_world(2).unwrap(),
        gauge_world(2).unwrap(),
        metric_world(2).unwrap(),
        potential_world(2).unwrap(),
        coordinate_world(2).unwrap(),
        free_world(&free).unwrap(),
    ]
}

fn element(w: &World, t: &[(Vec<usize>, i64)]) -> Element {
    let alphabet = w.system().order();
    let mut e = Element::zero();
    for (picks, c) in t {
        e.add_term(Word::from_letters(picks.iter().map(|&k| alphabet[k % alphabet.len()])), Scalar::from_int(*c));
    }
    e
}

fn c10_engine() -> Outcome {
    const CASES: u32 = 256;
    let ws = worlds();
    let terms = || prop::collection::vec((prop::collection::vec(0usize..64, 0..=3), -3i64..=3), 1..=3);
    let runner = |seed| {
        TestRunner::new(Config { cases: CASES, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() })
    };

    let leibniz = runner(1).run(&(0..ws.len(), terms(), terms(), terms()), |(wi, a, b, r)| {
        let w = &ws[wi];
        let (a, b, r) = (element(w, &a), element(w, &b), element(w, &r));
        let mut ds = vec![Derivation::bracket_right(r)];
        if wi < 4 {
            ds.push(Derivation::partial_x(w, 1).unwrap());
            ds.push(Derivation::partial_p(w, 2).unwrap());
        }
        for d in ds {
            let lhs = d.apply(&(&a * &b), w).unwrap();
            let rhs = &d.apply(&a, w).unwrap() * &b + &a * &d.apply(&b, w).unwrap();
            prop_assert!(w.is_zero(&(lhs - rhs)).unwrap());
        }
        Ok(())
    });
    let jacobi = runner(2).run(&(0..ws.len(), terms(), terms(), terms()), |(wi, a, b, c)| {
        let w = &ws[wi];
        let (a, b, c) = (element(w, &a), element(w, &b), element(w, &c));
        let br = Element::commutator;
        prop_assert!(w.is_zero(&(br(&a, &br(&b, &c)) + br(&b, &br(&c, &a)) + br(&c, &br(&a, &b)))).unwrap());
        Ok(())
    });

    let flat = flat_world(2).unwrap();
    let words = words_up_to(flat.system().order(), 4);
    let agree = words.iter().all(|word| {
        let e = Element::word(word.clone());
        flat.normalize_with(&e, Strategy::LeftmostInnermost).unwrap()
            == flat.normalize_with(&e, Strategy::RightmostInnermost).unwrap()
    });

    let corpus: Vec<&str> = include_str!("../../core/tests/data/expressions.txt").lines().filter(|l| !l.trim().is_empty()).collect();
    let stable = corpus.iter().filter(|s| {
        let once = parse_expr(s).map(|e| e.to_string());
        match once {
            Ok(p) => parse_expr(&p).map(|e| e.to_string()).ok().as_ref() == Some(&p),
            Err(_) => false,
        }
    });
    let stable = stable.count();

    Outcome::new(leibniz.is_ok(), format!("Leibniz {CASES} cases {}", if leibniz.is_ok() { "ok" } else { "FAILED" }))
        .and(Outcome::new(jacobi.is_ok(), format!("Jacobi {CASES} cases {}", if jacobi.is_ok() { "ok" } else { "FAILED" })))
        .and(Outcome::new(agree, format!("dual strategies agree on all {} flat words of length <= 4", words.len())))
        .and(Outcome::new(stable == corpus.len() && corpus.len() >= 50, format!("parser corpus {stable}/{} stable", corpus.len())))
}

fn main() {
    // the oracle suite is also reachable by name
    assert!(oracle::oracle_suite("bianchi", 4, 1, 2, SEED).unwrap().is_some());
    let results = [
        criterion(1, "flat relations and Hamilton's equations", 1.0, c1_hamilton),
        criterion(2, "gauge curvature formula", 1.0, c2_curvature),
        criterion(3, "metric lemma", 1.0, c3_metric),
        criterion(4, "symmetrized Fdot lemma", 5.0, c4_fdot),
        criterion(5, "Levi-Civita free identity and corollary", 5.0, c5_levi_civita),
        criterion(6, "Weyl connection identity", 2.0, c6_weyl),
        criterion(7, "Bianchi from Jacobi, symbolic and matrix oracle", 2.0, c7_bianchi),
        criterion(8, "discrete calculus and the random walk", 1.0, c8_discrete),
        criterion(9, "Maxwell derivation and Yang-Mills curvature", 1.0, c9_maxwell),
        criterion(10, "engine properties", 60.0, c10_engine),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
