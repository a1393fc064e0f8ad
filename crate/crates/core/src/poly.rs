//! Words and elements of the free associative algebra.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::coefficient::Coefficient;
use crate::symbol::{GeneratorId, Letter};

/// A monomial of the free algebra; the empty word is the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(SmallVec<[Letter; 8]>);

impl Word {
    pub fn unit() -> Word {
        Word::default()
    }

    pub fn letter(l: Letter) -> Word {
        Word(smallvec::smallvec![l])
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        Word(letters.into_iter().collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `self[..start] ++ middle ++ self[end..]`.
    pub fn splice(&self, start: usize, end: usize, middle: &Word) -> Word {
        let mut v: SmallVec<[Letter; 8]> = SmallVec::with_capacity(self.len() - (end - start) + middle.len());
        v.extend_from_slice(&self.0[..start]);
        v.extend_from_slice(&middle.0);
        v.extend_from_slice(&self.0[end..]);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A finite linear combination of words with coefficients in `C`.
///
/// No stored coefficient is zero, so structural equality is equality in the
/// free algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<C> {
    terms: BTreeMap<Word, C>,
}

impl<C: Coefficient> Default for Poly<C> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<C: Coefficient> Poly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(Word::unit(), c)
    }

    pub fn term(w: Word, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, C::one())
    }

    pub fn letter(l: Letter) -> Self {
        Self::word(Word::letter(l))
    }

    pub fn generator(id: &GeneratorId) -> Self {
        Self::letter(id.letter())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, C)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, C)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, w: &Word) -> Option<&C> {
        self.terms.get(w)
    }

    /// Longest word length, or `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        self.terms.keys().flat_map(|w| w.letters().iter().copied()).collect()
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &C) {
        for (w, d) in &other.terms {
            self.add_term(w.clone(), c.clone() * d.clone());
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(w, d)| (w.clone(), c.clone() * d.clone())).collect() }
    }

    /// Bilinear concatenation product.
    pub fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(wb), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// `a·b − b·a`, without normalization.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul_ref(b) - b.mul_ref(a)
    }

    pub fn map_coefficients<D: Coefficient>(&self, mut f: impl FnMut(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    /// Algebra homomorphism extending `f` on letters; letters mapped to
    /// `None` are kept.
    pub fn substitute(&self, mut f: impl FnMut(Letter) -> Option<Self>) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut prod = Self::constant(c.clone());
            for &l in w.letters() {
                let image = f(l).unwrap_or_else(|| Self::letter(l));
                prod = prod.mul_ref(&image);
            }
            out = out + prod;
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.mul_ref(self);
        }
        out
    }

    /// Commutative collapse: sort the letters of every word.
    pub fn commutative_normal(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| {
            let mut letters: Vec<Letter> = w.letters().to_vec();
            letters.sort_by_key(|a| a.id());
            (Word::from_letters(letters), c.clone())
        }))
    }
}

impl<C: Coefficient> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(mut self, rhs: Poly<C>) -> Poly<C> {
        for (w, c) in rhs.terms {
            self.add_term(w, c);
        }
        self
    }
}

impl<'a, C: Coefficient> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(mut self, rhs: Poly<C>) -> Poly<C> {
        for (w, c) in rhs.terms {
            self.add_term(w, -c);
        }
        self
    }
}

impl<'a, C: Coefficient> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Poly<C>) -> Poly<C> {
        self.mul_ref(&rhs)
    }
}

impl<'a, C: Coefficient> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        self.mul_ref(rhs)
    }
}

impl<C: Coefficient> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly { terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect() }
    }
}

impl<C: Coefficient> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -self.clone()
    }
}

impl<C: Coefficient> fmt::Display for Poly<C> {
    /// Rendering with the natural generator order; see [`crate::render`] for
    /// world-ordered rendering.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::render_with(self, |a, b| a.id().cmp(&b.id())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    type E = Poly<Scalar>;

    fn g(name: &str, i: u32) -> E {
        E::generator(&GeneratorId::new(name, &[i]))
    }

    #[test]
    fn additive_identity_and_inverse() {
        let x1 = g("X", 1);
        assert_eq!(&x1 + &E::zero(), x1);
        assert!((&x1 + &x1.scale(&Scalar::from_int(-1))).is_zero());
    }

    #[test]
    fn free_algebra_keeps_distinct_words() {
        let (x1, p1) = (g("X", 1), g("P", 1));
        let s = &(&x1 * &p1) + &(&p1 * &x1);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn product_distributes_and_unit_is_identity() {
        let (x1, x2, p1) = (g("X", 1), g("X", 2), g("P", 1));
        assert_eq!(&(&x1 + &x2) * &p1, &(&x1 * &p1) + &(&x2 * &p1));
        assert_eq!(&E::one() * &x1, x1);
        let xp = &x1 * &p1;
        assert_eq!(xp.terms().next().unwrap().0.len(), 2);
    }

    #[test]
    fn self_commutator_vanishes() {
        let f = &(&g("X", 1) * &g("P", 2)) + &g("A", 1);
        assert!(E::commutator(&f, &f).is_zero());
        let c = E::commutator(&g("X", 1), &g("P", 1));
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn substitution_is_a_homomorphism() {
        let x = GeneratorId::new("X", &[1]).letter();
        let e = &g("X", 1) * &g("X", 1);
        let two = E::constant(Scalar::from_int(2));
        let s = e.substitute(|l| (l == x).then(|| two.clone()));
        assert_eq!(s, E::constant(Scalar::from_int(4)));
    }
}
