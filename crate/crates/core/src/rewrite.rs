//! Relation-driven rewriting to normal form.
//!
//! A [`RewriteSystem`] holds a total order on generators and a set of rules
//! `b·a → rhs` whose left side is an out-of-order adjacent pair. Every rule
//! must strictly decrease the degree-lexicographic order induced by the
//! generator order, which is checked when the rule is added; that alone
//! guarantees termination. Confluence is not checked: for a non-confluent
//! rule set the normal form still exists but equality testing is only sound
//! up to the chosen strategy.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::coefficient::Coefficient;
use crate::poly::{Poly, Word};
use crate::render::{compare_words, render_with};
use crate::symbol::{GeneratorId, Letter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(GeneratorId),
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(GeneratorId),
    #[error("rule `{rule}` is not admissible: {reason}")]
    NonTerminatingRuleSet { rule: String, reason: String },
    #[error("conflicting rules for `{lhs}`")]
    ConflictingRule { lhs: String },
}

/// Which redex to contract first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    LeftmostInnermost,
    RightmostInnermost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RewriteSystem<C> {
    order: Vec<Letter>,
    rank: HashMap<Letter, usize>,
    rules: HashMap<(Letter, Letter), Poly<C>>,
}

impl<C: Coefficient> RewriteSystem<C> {
    /// A system with no rules over generators listed in ascending order.
    pub fn new(order: impl IntoIterator<Item = Letter>) -> Result<Self, RewriteError> {
        let order: Vec<Letter> = order.into_iter().collect();
        let mut rank = HashMap::with_capacity(order.len());
        for (k, &l) in order.iter().enumerate() {
            if rank.insert(l, k).is_some() {
                return Err(RewriteError::DuplicateGenerator((*l.id()).clone()));
            }
        }
        Ok(RewriteSystem { order, rank, rules: HashMap::new() })
    }

    pub fn order(&self) -> &[Letter] {
        &self.order
    }

    pub fn rank(&self, l: Letter) -> Option<usize> {
        self.rank.get(&l).copied()
    }

    pub fn contains(&self, l: Letter) -> bool {
        self.rank.contains_key(&l)
    }

    pub fn rules(&self) -> impl Iterator<Item = (&(Letter, Letter), &Poly<C>)> {
        self.rules.iter()
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    pub fn rule(&self, a: Letter, b: Letter) -> Option<&Poly<C>> {
        self.rules.get(&(a, b))
    }

    /// Letter comparison in this system's order; undeclared letters sort
    /// after declared ones by their natural order.
    pub fn cmp_letters(&self, a: &Letter, b: &Letter) -> Ordering {
        match (self.rank.get(a), self.rank.get(b)) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => a.id().cmp(&b.id()),
        }
    }

    /// Degree-lexicographic word order.
    pub fn cmp_words(&self, a: &Word, b: &Word) -> Ordering {
        compare_words(a, b, |x, y| self.cmp_letters(x, y))
    }

    pub fn render(&self, p: &Poly<C>) -> String {
        render_with(p, |a, b| self.cmp_letters(a, b))
    }

    fn check_known(&self, p: &Poly<C>) -> Result<(), RewriteError> {
        for l in p.letters() {
            if !self.contains(l) {
                return Err(RewriteError::UnknownGenerator((*l.id()).clone()));
            }
        }
        Ok(())
    }

    /// Add `first·second → rhs`. The pair must be descending and every word
    /// of `rhs` strictly smaller than the pair.
    pub fn add_rule(&mut self, first: Letter, second: Letter, rhs: Poly<C>) -> Result<(), RewriteError> {
        let lhs = Word::from_letters([first, second]);
        let describe = |rhs: &Poly<C>| {
            format!("{} -> {}", lhs, render_with(rhs, |a, b| self.cmp_letters(a, b)))
        };
        for l in [first, second] {
            if !self.contains(l) {
                return Err(RewriteError::UnknownGenerator((*l.id()).clone()));
            }
        }
        self.check_known(&rhs)?;
        if self.cmp_letters(&first, &second) != Ordering::Greater {
            return Err(RewriteError::NonTerminatingRuleSet {
                rule: describe(&rhs),
                reason: "left-hand side must be a descending pair of generators".into(),
            });
        }
        if let Some((w, _)) = rhs.terms().find(|(w, _)| self.cmp_words(w, &lhs) != Ordering::Less) {
            return Err(RewriteError::NonTerminatingRuleSet {
                rule: describe(&rhs),
                reason: format!("right-hand side word `{w}` is not smaller than `{lhs}` in degree-lex order"),
            });
        }
        match self.rules.get(&(first, second)) {
            Some(existing) if *existing == rhs => Ok(()),
            Some(_) => Err(RewriteError::ConflictingRule { lhs: lhs.to_string() }),
            None => {
                self.rules.insert((first, second), rhs);
                Ok(())
            }
        }
    }

    fn find_redex(&self, w: &Word, strategy: Strategy) -> Option<usize> {
        let letters = w.letters();
        let hit = |k: &usize| self.rules.contains_key(&(letters[*k], letters[*k + 1]));
        let n = letters.len().saturating_sub(1);
        match strategy {
            Strategy::LeftmostInnermost => (0..n).find(hit),
            Strategy::RightmostInnermost => (0..n).rev().find(hit),
        }
    }

    fn normal_word(&self, w: &Word, strategy: Strategy, memo: &mut HashMap<Word, Poly<C>>) -> Poly<C> {
        if let Some(p) = memo.get(w) {
            return p.clone();
        }
        let result = match self.find_redex(w, strategy) {
            None => Poly::word(w.clone()),
            Some(k) => {
                let (a, b) = (w.letters()[k], w.letters()[k + 1]);
                let rhs = self.rules[&(a, b)].clone();
                let mut acc = Poly::zero();
                for (mid, c) in rhs.terms() {
                    let next = w.splice(k, k + 2, mid);
                    let nf = self.normal_word(&next, strategy, memo);
                    acc.add_scaled(&nf, c);
                }
                acc
            }
        };
        memo.insert(w.clone(), result.clone());
        result
    }

    pub fn normalize_with(&self, p: &Poly<C>, strategy: Strategy) -> Result<Poly<C>, RewriteError> {
        self.check_known(p)?;
        let mut memo = HashMap::new();
        let mut out = Poly::zero();
        for (w, c) in p.terms() {
            let nf = self.normal_word(w, strategy, &mut memo);
            out.add_scaled(&nf, c);
        }
        Ok(out)
    }

    /// Exhaustive leftmost-innermost rewriting.
    pub fn normalize(&self, p: &Poly<C>) -> Result<Poly<C>, RewriteError> {
        self.normalize_with(p, Strategy::LeftmostInnermost)
    }

    pub fn is_zero(&self, p: &Poly<C>) -> Result<bool, RewriteError> {
        Ok(self.normalize(p)?.is_zero())
    }

    /// True when no word of `p` contains a rule's left-hand side.
    pub fn is_normal(&self, p: &Poly<C>) -> bool {
        p.terms()
            .all(|(w, _)| self.find_redex(w, Strategy::LeftmostInnermost).is_none())
    }
}
