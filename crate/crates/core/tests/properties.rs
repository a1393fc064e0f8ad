use std::sync::OnceLock;

use ncw_core::forms::{sym, DifferentialForm, Mode};
use ncw_core::geometry::Derivation;
use ncw_core::world::{
    coordinate_world, flat_world, free_world, gauge_world, metric_world, potential_world, words_up_to,
};
use ncw_core::{Element, GeneratorId, RationalElement, Scalar, Strategy, Word, World};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32, seed: u64) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

fn worlds() -> &'static [World] {
    static W: OnceLock<Vec<World>> = OnceLock::new();
    W.get_or_init(|| {
        let free = [GeneratorId::new("N", &[1]), GeneratorId::new("N", &[2]), GeneratorId::scalar("K")];
        vec![
            flat_world(2).unwrap(),
            gauge_world(2).unwrap(),
            metric_world(2).unwrap(),
            potential_world(2).unwrap(),
            coordinate_world(2).unwrap(),
            free_world(&free).unwrap(),
        ]
    })
}

/// Raw term list: letter picks (reduced modulo the alphabet) and a coefficient.
type Terms = Vec<(Vec<usize>, i64)>;

fn terms(max_len: usize) -> impl proptest::strategy::Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0usize..64, 0..=max_len), -3i64..=3), 1..=3)
}

fn element(w: &World, t: &Terms) -> Element {
    let alphabet = w.system().order();
    let mut e = Element::zero();
    for (picks, c) in t {
        let word = Word::from_letters(picks.iter().map(|&k| alphabet[k % alphabet.len()]));
        e.add_term(word, Scalar::from_int(*c));
    }
    e
}

fn nf(w: &World, e: &Element) -> Element {
    w.normalize(e).unwrap()
}

fn equal(w: &World, a: &Element, b: &Element) -> bool {
    w.is_zero(&(a - b)).unwrap()
}

proptest! {
    #![proptest_config(config(256, 11))]

    #[test]
    fn bracket_derivations_obey_leibniz(wi in 0usize..6, a in terms(3), b in terms(3), r in terms(2)) {
        let w = &worlds()[wi];
        let (a, b, r) = (element(w, &a), element(w, &b), element(w, &r));
        for d in [Derivation::bracket_right(r.clone()), Derivation::bracket_left(r.clone())] {
            let lhs = d.apply(&(&a * &b), w).unwrap();
            let rhs = &d.apply(&a, w).unwrap() * &b + &a * &d.apply(&b, w).unwrap();
            prop_assert!(equal(w, &lhs, &rhs), "world {}", w.name());
        }
    }

    #[test]
    fn named_derivations_obey_leibniz(wi in 0usize..4, i in 1u32..=2, a in terms(3), b in terms(3)) {
        let w = &worlds()[wi];
        let (a, b) = (element(w, &a), element(w, &b));
        let mut ds = vec![Derivation::partial_x(w, i).unwrap(), Derivation::partial_p(w, i).unwrap()];
        if let Ok(t) = Derivation::time(w) {
            ds.push(t);
        }
        for d in ds {
            let lhs = d.apply(&(&a * &b), w).unwrap();
            let rhs = &d.apply(&a, w).unwrap() * &b + &a * &d.apply(&b, w).unwrap();
            prop_assert!(equal(w, &lhs, &rhs), "world {}", w.name());
        }
    }

    #[test]
    fn jacobi_identity(wi in 0usize..6, a in terms(2), b in terms(2), c in terms(2)) {
        let w = &worlds()[wi];
        let (a, b, c) = (element(w, &a), element(w, &b), element(w, &c));
        let br = Element::commutator;
        let sum = br(&a, &br(&b, &c)) + br(&b, &br(&c, &a)) + br(&c, &br(&a, &b));
        prop_assert!(nf(w, &sum).is_zero());
    }

    #[test]
    fn strategies_agree(wi in 0usize..6, a in terms(4)) {
        let w = &worlds()[wi];
        let a = element(w, &a);
        let l = w.normalize_with(&a, Strategy::LeftmostInnermost).unwrap();
        let r = w.normalize_with(&a, Strategy::RightmostInnermost).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn normalization_is_idempotent_and_multiplicative(wi in 0usize..6, a in terms(3), b in terms(3)) {
        let w = &worlds()[wi];
        let (a, b) = (element(w, &a), element(w, &b));
        let na = nf(w, &a);
        prop_assert_eq!(nf(w, &na), na.clone());
        prop_assert_eq!(nf(w, &(&a * &b)), nf(w, &(&na * &nf(w, &b))));
    }

    #[test]
    fn flat_partials_commute(i in 1u32..=3, j in 1u32..=3, a in terms(4)) {
        let w = flat_world(3).unwrap();
        let f = element(&w, &a);
        let ops = |k| [Derivation::partial_x(&w, k).unwrap(), Derivation::partial_p(&w, k).unwrap()];
        for di in ops(i) {
            for dj in ops(j) {
                let ij = di.apply(&dj.apply(&f, &w).unwrap(), &w).unwrap();
                let ji = dj.apply(&di.apply(&f, &w).unwrap(), &w).unwrap();
                prop_assert!(equal(&w, &ij, &ji));
            }
        }
    }
}

const COORDS: [char; 3] = ['x', 'y', 'z'];

fn coefficient(picks: &[usize]) -> Element {
    let names = ["F", "G", "H"];
    picks.iter().fold(Element::one(), |acc, &k| acc * sym(names[k % 3]))
}

/// Random form of degree `p` with a few monomial terms.
fn form(mode: Mode, p: usize, raw: &[(Vec<usize>, usize)]) -> DifferentialForm {
    let mut out = DifferentialForm::zero(mode, &COORDS);
    for (picks, sel) in raw {
        let cs: Vec<char> = match p {
            0 => vec![],
            1 => vec![COORDS[sel % 3]],
            2 => [[0, 1], [0, 2], [1, 2]][sel % 3].iter().map(|&k| COORDS[k]).collect(),
            _ => COORDS.to_vec(),
        };
        let m = DifferentialForm::monomial(mode, &COORDS, coefficient(picks), &cs).unwrap();
        out = out.add(&m).unwrap();
    }
    out
}

fn raw_form() -> impl proptest::strategy::Strategy<Value = Vec<(Vec<usize>, usize)>> {
    prop::collection::vec((prop::collection::vec(0usize..3, 1..=3), 0usize..3), 1..=3)
}

fn mode(nc: bool) -> Mode {
    if nc {
        Mode::Noncommutative
    } else {
        Mode::Commutative
    }
}

proptest! {
    #![proptest_config(config(256, 12))]

    #[test]
    fn exterior_derivative_squares_to_zero(nc: bool, p in 0usize..=2, raw in raw_form()) {
        let a = form(mode(nc), p, &raw);
        prop_assert!(a.exterior_d().exterior_d().is_zero());
    }

    #[test]
    fn graded_leibniz(nc: bool, p in 0usize..=2, q in 0usize..=1, ra in raw_form(), rb in raw_form()) {
        let (a, b) = (form(mode(nc), p, &ra), form(mode(nc), q, &rb));
        let lhs = a.wedge(&b).unwrap().exterior_d();
        let second = a.wedge(&b.exterior_d()).unwrap();
        let second = if p % 2 == 1 { second.scale(&Scalar::from_int(-1)) } else { second };
        let rhs = a.exterior_d().wedge(&b).unwrap().add(&second).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn wedge_is_graded_commutative_when_coefficients_commute(p in 0usize..=2, q in 0usize..=2, ra in raw_form(), rb in raw_form()) {
        let (a, b) = (form(Mode::Commutative, p, &ra), form(Mode::Commutative, q, &rb));
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let ba = if p * q % 2 == 1 { ba.scale(&Scalar::from_int(-1)) } else { ba };
        prop_assert!(ab.sub(&ba).unwrap().is_zero());
    }
}

/// Sum of `c * tau^a * h^b` terms with Gaussian integer `c`.
fn scalar(raw: &[(i64, i64, i32, i32)]) -> Scalar {
    raw.iter().fold(Scalar::zero(), |acc, &(re, im, a, b)| {
        let c = Scalar::from_int(re) + Scalar::from_int(im) * Scalar::imag_unit();
        acc + c * Scalar::param("tau", a) * Scalar::param("h", b)
    })
}

fn raw_scalar() -> impl proptest::strategy::Strategy<Value = Vec<(i64, i64, i32, i32)>> {
    prop::collection::vec((-4i64..=4, -2i64..=2, -2i32..=2, -2i32..=2), 0..=3)
}

proptest! {
    #![proptest_config(config(256, 13))]

    #[test]
    fn scalars_form_a_commutative_ring(a in raw_scalar(), b in raw_scalar(), c in raw_scalar()) {
        let (a, b, c) = (scalar(&a), scalar(&b), scalar(&c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &Scalar::one(), a);
    }

    #[test]
    fn single_terms_are_invertible(re in 1i64..=5, im in -2i64..=2, e in -3i32..=3, b in raw_scalar()) {
        let t = scalar(&[(re, im, e, -e)]);
        let inv = t.inverse().unwrap();
        prop_assert_eq!(&t * &inv, Scalar::one());
        let b = scalar(&b);
        prop_assert_eq!(&b.checked_div(&t).unwrap() * &t, b);
    }

    #[test]
    fn rational_polynomials_associate(a in terms(2), b in terms(2), c in terms(2)) {
        let w = &worlds()[5];
        let q = |e: &Element| -> RationalElement { e.map_coefficients(|s| s.as_rational().unwrap()) };
        let (a, b, c) = (q(&element(w, &a)), q(&element(w, &b)), q(&element(w, &c)));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        prop_assert_eq!((&a + &b).scale(&half), a.scale(&half) + b.scale(&half));
    }
}

#[test]
fn strategies_agree_on_all_short_flat_words() {
    let w = flat_world(2).unwrap();
    let words = words_up_to(w.system().order(), 4);
    assert_eq!(words.len(), 1 + 4 + 16 + 64 + 256);
    for word in words {
        let e = Element::word(word.clone());
        let l = w.normalize_with(&e, Strategy::LeftmostInnermost).unwrap();
        let r = w.normalize_with(&e, Strategy::RightmostInnermost).unwrap();
        assert_eq!(l, r, "{word}");
    }
}
