//! Deterministic plain-text rendering of elements.
//!
//! Terms are sorted by word length, then lexicographically by the supplied
//! generator order. Output is parseable by [`crate::syntax`], e.g.
//! `X[1]*P[1] - 1`.

use std::cmp::Ordering;

use crate::coefficient::Coefficient;
use crate::poly::{Poly, Word};
use crate::symbol::Letter;

pub fn compare_words(a: &Word, b: &Word, mut cmp: impl FnMut(&Letter, &Letter) -> Ordering) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.letters().iter().zip(b.letters()) {
            match cmp(x, y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

pub fn render_with<C: Coefficient>(p: &Poly<C>, mut cmp: impl FnMut(&Letter, &Letter) -> Ordering) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&Word, &C)> = p.terms().collect();
    terms.sort_by(|a, b| compare_words(a.0, b.0, &mut cmp));
    let single = terms.len() == 1;
    let mut out = String::new();
    for (k, (w, c)) in terms.into_iter().enumerate() {
        let negative = c.is_atomic() && c.leading_negative();
        let abs = if negative { -c.clone() } else { c.clone() };
        let body = if w.is_empty() {
            if abs.is_atomic() || single {
                abs.to_string()
            } else {
                format!("({abs})")
            }
        } else if abs.is_one() {
            w.to_string()
        } else if abs.is_atomic() {
            format!("{abs}*{w}")
        } else {
            format!("({abs})*{w}")
        };
        match (k, negative) {
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (0, false) => out.push_str(&body),
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
    }
    out
}
