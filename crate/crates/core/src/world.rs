//! Worlds: generators, a total generator order, commutation relations
//! oriented as rewrite rules, parameters and named macro elements.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::poly::Word;
use crate::rewrite::{RewriteError, RewriteSystem, Strategy};
use crate::scalar::Scalar;
use crate::symbol::{GeneratorId, Letter};
use crate::Element;

pub const MAX_DIM: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorldError {
    #[error("dimension {0} out of range 1..={MAX_DIM}")]
    DimOutOfRange(u32),
    #[error("a free world needs at least one generator")]
    EmptyGeneratorList,
    #[error("generator `{0}` is not declared in this world")]
    UnknownGenerator(GeneratorId),
    #[error("`{0}` is neither a generator nor a macro of this world")]
    UnknownSymbol(String),
    #[error("relation [{a},{b}] with a == b must have zero right-hand side")]
    TrivialRelation { a: String, b: String },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// Anything symbol references can be resolved against.
pub trait Scope {
    /// A macro or generator element for `name[indices]`.
    fn lookup(&self, name: &str, indices: &[u32]) -> Option<Element>;
    fn is_param(&self, name: &str) -> bool;
}

#[derive(Debug, Clone, PartialEq)]
pub struct World {
    name: String,
    dim: u32,
    params: Vec<String>,
    symmetric: BTreeSet<String>,
    generators: Vec<GeneratorId>,
    macros: BTreeMap<GeneratorId, Element>,
    system: RewriteSystem<Scalar>,
}

impl World {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn symmetric_families(&self) -> impl Iterator<Item = &String> {
        self.symmetric.iter()
    }

    /// Generators in ascending order.
    pub fn generators(&self) -> &[GeneratorId] {
        &self.generators
    }

    pub fn macros(&self) -> impl Iterator<Item = (&GeneratorId, &Element)> {
        self.macros.iter()
    }

    pub fn system(&self) -> &RewriteSystem<Scalar> {
        &self.system
    }

    pub fn has_relations(&self) -> bool {
        self.system.num_rules() > 0
    }

    /// Storage normalization: indices of symmetric families are sorted.
    pub fn canonical(&self, id: GeneratorId) -> GeneratorId {
        if self.symmetric.contains(&id.name) {
            id.with_sorted_indices()
        } else {
            id
        }
    }

    /// The generator `name[indices]` as an element.
    pub fn gen(&self, name: &str, indices: &[u32]) -> Result<Element, WorldError> {
        let id = self.canonical(GeneratorId::new(name, indices));
        let l = id.letter();
        if self.system.contains(l) {
            Ok(Element::letter(l))
        } else {
            Err(WorldError::UnknownGenerator(id))
        }
    }

    pub fn macro_element(&self, name: &str, indices: &[u32]) -> Option<&Element> {
        self.macros.get(&GeneratorId::new(name, indices))
    }

    /// Macro if one is defined under this name, otherwise the generator.
    pub fn element(&self, name: &str, indices: &[u32]) -> Result<Element, WorldError> {
        match self.macro_element(name, indices) {
            Some(e) => Ok(e.clone()),
            None => self.gen(name, indices).map_err(|_| {
                WorldError::UnknownSymbol(GeneratorId::new(name, indices).to_string())
            }),
        }
    }

    pub fn normalize(&self, e: &Element) -> Result<Element, WorldError> {
        Ok(self.system.normalize(e)?)
    }

    pub fn normalize_with(&self, e: &Element, strategy: Strategy) -> Result<Element, WorldError> {
        Ok(self.system.normalize_with(e, strategy)?)
    }

    pub fn is_zero(&self, e: &Element) -> Result<bool, WorldError> {
        Ok(self.normalize(e)?.is_zero())
    }

    /// Normalized `[a, b]`.
    pub fn commutator(&self, a: &Element, b: &Element) -> Result<Element, WorldError> {
        self.normalize(&Element::commutator(a, b))
    }

    pub fn render(&self, e: &Element) -> String {
        self.system.render(e)
    }

    /// Every word of length exactly `len` over the generators, in order.
    pub fn words_of_length(&self, len: usize) -> Vec<Word> {
        words_over(self.system.order(), len)
    }
}

impl Scope for World {
    fn lookup(&self, name: &str, indices: &[u32]) -> Option<Element> {
        self.element(name, indices).ok()
    }
    fn is_param(&self, name: &str) -> bool {
        self.params.iter().any(|p| p == name)
    }
}

/// All words of length `len` over `alphabet`, lexicographic in alphabet order.
pub fn words_over(alphabet: &[Letter], len: usize) -> Vec<Word> {
    let mut out = vec![Word::unit()];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|w| alphabet.iter().map(move |&l| w.concat(&Word::letter(l))))
            .collect();
    }
    out
}

/// All words of length `0..=max_len`.
pub fn words_up_to(alphabet: &[Letter], max_len: usize) -> Vec<Word> {
    (0..=max_len).flat_map(|n| words_over(alphabet, n)).collect()
}

/// Incremental construction shared by the builders and the file parser.
#[derive(Debug, Clone)]
pub struct WorldBuilder {
    name: String,
    dim: u32,
    params: Vec<String>,
    symmetric: BTreeSet<String>,
    generators: Vec<GeneratorId>,
    macros: BTreeMap<GeneratorId, Element>,
    system: Option<RewriteSystem<Scalar>>,
}

impl WorldBuilder {
    pub fn new(name: &str, dim: u32) -> WorldBuilder {
        WorldBuilder {
            name: name.to_string(),
            dim,
            params: Vec::new(),
            symmetric: BTreeSet::new(),
            generators: Vec::new(),
            macros: BTreeMap::new(),
            system: None,
        }
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    pub fn set_dim(&mut self, dim: u32) {
        self.dim = dim;
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn param(&mut self, name: &str) -> &mut Self {
        if !self.params.iter().any(|p| p == name) {
            self.params.push(name.to_string());
        }
        self
    }

    pub fn symmetric(&mut self, family: &str) -> &mut Self {
        self.symmetric.insert(family.to_string());
        self
    }

    pub fn canonical(&self, id: GeneratorId) -> GeneratorId {
        if self.symmetric.contains(&id.name) {
            id.with_sorted_indices()
        } else {
            id
        }
    }

    /// Declare a generator; re-declaring is a no-op.
    pub fn gen(&mut self, id: GeneratorId) -> &mut Self {
        let id = self.canonical(id);
        if !self.generators.contains(&id) {
            self.generators.push(id);
        }
        self
    }

    pub fn generators(&self) -> &[GeneratorId] {
        &self.generators
    }

    /// Fix the generator order (ascending) and start accepting relations.
    /// Without a call, declaration order is used.
    pub fn order(&mut self, order: Vec<GeneratorId>) -> Result<&mut Self, WorldError> {
        let system = RewriteSystem::new(order.iter().map(GeneratorId::letter))?;
        self.generators = order;
        self.system = Some(system);
        Ok(self)
    }

    fn system_mut(&mut self) -> Result<&mut RewriteSystem<Scalar>, WorldError> {
        if self.system.is_none() {
            let order = self.generators.clone();
            self.order(order)?;
        }
        Ok(self.system.as_mut().unwrap())
    }

    fn letter(&self, id: &GeneratorId) -> Letter {
        self.canonical(id.clone()).letter()
    }

    /// `[a, b] = c`, oriented so the descending pair is rewritten.
    pub fn rel(&mut self, a: &GeneratorId, b: &GeneratorId, c: Element) -> Result<&mut Self, WorldError> {
        let (la, lb) = (self.letter(a), self.letter(b));
        let system = self.system_mut()?;
        for l in [la, lb] {
            if !system.contains(l) {
                return Err(WorldError::UnknownGenerator((*l.id()).clone()));
            }
        }
        if la == lb {
            if c.is_zero() {
                return Ok(self);
            }
            return Err(WorldError::TrivialRelation { a: a.to_string(), b: b.to_string() });
        }
        let ab = Element::word(Word::from_letters([la, lb]));
        let ba = Element::word(Word::from_letters([lb, la]));
        if system.cmp_letters(&la, &lb) == std::cmp::Ordering::Greater {
            system.add_rule(la, lb, ba + c)?;
        } else {
            system.add_rule(lb, la, ab - c)?;
        }
        Ok(self)
    }

    /// `a·b → rhs` verbatim.
    pub fn rule(&mut self, a: &GeneratorId, b: &GeneratorId, rhs: Element) -> Result<&mut Self, WorldError> {
        let (la, lb) = (self.letter(a), self.letter(b));
        self.system_mut()?.add_rule(la, lb, rhs)?;
        Ok(self)
    }

    pub fn define(&mut self, id: GeneratorId, value: Element) -> &mut Self {
        self.macros.insert(id, value);
        self
    }

    pub fn build(mut self) -> Result<World, WorldError> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(WorldError::DimOutOfRange(self.dim));
        }
        if self.generators.is_empty() {
            return Err(WorldError::EmptyGeneratorList);
        }
        self.system_mut()?;
        Ok(World {
            name: self.name,
            dim: self.dim,
            params: self.params,
            symmetric: self.symmetric,
            generators: self.generators,
            macros: self.macros,
            system: self.system.unwrap(),
        })
    }

    /// Normalize against the relations declared so far.
    pub fn normalize(&mut self, e: &Element) -> Result<Element, WorldError> {
        Ok(self.system_mut()?.normalize(e)?)
    }
}

impl Scope for WorldBuilder {
    fn lookup(&self, name: &str, indices: &[u32]) -> Option<Element> {
        let id = GeneratorId::new(name, indices);
        if let Some(m) = self.macros.get(&id) {
            return Some(m.clone());
        }
        let id = self.canonical(id);
        self.generators.contains(&id).then(|| Element::generator(&id))
    }
    fn is_param(&self, name: &str) -> bool {
        self.params.iter().any(|p| p == name)
    }
}

fn check_dim(d: u32) -> Result<(), WorldError> {
    if d == 0 || d > MAX_DIM {
        Err(WorldError::DimOutOfRange(d))
    } else {
        Ok(())
    }
}

fn x(i: u32) -> GeneratorId {
    GeneratorId::new("X", &[i])
}

fn p(i: u32) -> GeneratorId {
    GeneratorId::new("P", &[i])
}

fn delta(i: u32, j: u32) -> Element {
    if i == j {
        Element::one()
    } else {
        Element::zero()
    }
}

fn add_flat_relations(b: &mut WorldBuilder, d: u32) -> Result<(), WorldError> {
    for i in 1..=d {
        for j in 1..=d {
            b.rel(&x(i), &x(j), Element::zero())?;
            b.rel(&p(i), &p(j), Element::zero())?;
            b.rel(&x(i), &p(j), delta(i, j))?;
        }
    }
    Ok(())
}

fn flat_generators(d: u32) -> Vec<GeneratorId> {
    (1..=d).map(x).chain((1..=d).map(p)).collect()
}

/// Coordinates `X[1..d]` and momenta `P[1..d]` with
/// `[X_i,X_j] = [P_i,P_j] = 0`, `[X_i,P_j] = δ_ij`.
pub fn flat_world(d: u32) -> Result<World, WorldError> {
    check_dim(d)?;
    let mut b = WorldBuilder::new("flat", d);
    for g in flat_generators(d) {
        b.gen(g);
    }
    add_flat_relations(&mut b, d)?;
    b.build()
}

/// The flat world plus free potentials `A[1..d]` and macros
/// `Xdot[i] = P[i] - A[i]`.
pub fn gauge_world(d: u32) -> Result<World, WorldError> {
    check_dim(d)?;
    let mut b = WorldBuilder::new("gauge", d);
    for g in flat_generators(d) {
        b.gen(g);
    }
    for i in 1..=d {
        b.gen(GeneratorId::new("A", &[i]));
    }
    add_flat_relations(&mut b, d)?;
    for i in 1..=d {
        let xdot = Element::generator(&p(i)) - Element::generator(&GeneratorId::new("A", &[i]));
        b.define(GeneratorId::new("Xdot", &[i]), xdot);
    }
    b.build()
}

/// Central symmetric metric generators `g[i][j]` (stored with `i <= j`)
/// alongside flat `X`, `P`; macros `H = 1/2 Σ g_ij P_i P_j` and
/// `Xdot[k] = [X_k, H]`. The `g` generators come first in the order so
/// normal forms collect them on the left.
pub fn metric_world(d: u32) -> Result<World, WorldError> {
    check_dim(d)?;
    let mut b = WorldBuilder::new("metric", d);
    b.symmetric("g");
    let gs: Vec<GeneratorId> = (1..=d)
        .flat_map(|i| (i..=d).map(move |j| GeneratorId::new("g", &[i, j])))
        .collect();
    for g in gs.iter().cloned().chain(flat_generators(d)) {
        b.gen(g);
    }
    add_flat_relations(&mut b, d)?;
    for g in &gs {
        for other in gs.iter().cloned().chain(flat_generators(d)) {
            b.rel(g, &other, Element::zero())?;
        }
    }
    let mut h = Element::zero();
    for i in 1..=d {
        for j in 1..=d {
            let g = Element::generator(&GeneratorId::new("g", &[i.min(j), i.max(j)]));
            let term = &(&g * &Element::generator(&p(i))) * &Element::generator(&p(j));
            h.add_scaled(&term, &Scalar::from_ratio(1, 2));
        }
    }
    let h = b.normalize(&h)?;
    for k in 1..=d {
        let xdot = b.normalize(&Element::commutator(&Element::generator(&x(k)), &h))?;
        b.define(GeneratorId::new("Xdot", &[k]), xdot);
    }
    b.define(GeneratorId::scalar("H"), h);
    b.build()
}

/// The flat world plus a potential `V` commuting with the coordinates
/// (not with the momenta); macro `H = 1/2 Σ P_i^2 + V`.
pub fn potential_world(d: u32) -> Result<World, WorldError> {
    check_dim(d)?;
    let mut b = WorldBuilder::new("potential", d);
    let v = GeneratorId::scalar("V");
    for g in flat_generators(d) {
        b.gen(g);
    }
    b.gen(v.clone());
    add_flat_relations(&mut b, d)?;
    for i in 1..=d {
        b.rel(&v, &x(i), Element::zero())?;
    }
    let mut h = Element::generator(&v);
    for i in 1..=d {
        let pi = Element::generator(&p(i));
        h.add_scaled(&(&pi * &pi), &Scalar::from_ratio(1, 2));
    }
    b.define(GeneratorId::scalar("H"), h);
    b.build()
}

/// Commuting coordinates `X[1..d]` and a free generator `H`.
pub fn coordinate_world(d: u32) -> Result<World, WorldError> {
    check_dim(d)?;
    let mut b = WorldBuilder::new("coordinates", d);
    for i in 1..=d {
        b.gen(x(i));
    }
    b.gen(GeneratorId::scalar("H"));
    for i in 1..=d {
        for j in 1..=d {
            b.rel(&x(i), &x(j), Element::zero())?;
        }
    }
    b.build()
}

/// The free algebra on `generators`: no relations, normalize is the identity.
pub fn free_world(generators: &[GeneratorId]) -> Result<World, WorldError> {
    if generators.is_empty() {
        return Err(WorldError::EmptyGeneratorList);
    }
    let dim = generators
        .iter()
        .flat_map(|g| g.indices.iter().copied())
        .max()
        .unwrap_or(1)
        .clamp(1, MAX_DIM);
    let mut b = WorldBuilder::new("free", dim);
    for g in generators {
        b.gen(g.clone());
    }
    b.build()
}

/// Shorthand used by tests and suites: `X[i]` etc. as elements.
pub fn gen_element(name: &str, indices: &[u32]) -> Element {
    Element::generator(&GeneratorId::new(name, indices))
}

impl World {
    /// Substitute macro-free generator images, e.g. `A ≡ 0`.
    pub fn substitute(&self, e: &Element, images: &[(GeneratorId, Element)]) -> Result<Element, WorldError> {
        let map: Vec<(Letter, &Element)> = images
            .iter()
            .map(|(id, img)| (self.canonical(id.clone()).letter(), img))
            .collect();
        let s = e.substitute(|l| map.iter().find(|(k, _)| *k == l).map(|(_, v)| (*v).clone()));
        self.normalize(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn xe(i: u32) -> Element {
        gen_element("X", &[i])
    }
    fn pe(i: u32) -> Element {
        gen_element("P", &[i])
    }

    #[test]
    fn flat_canonical_commutation() {
        let w = flat_world(1).unwrap();
        let nf = w.normalize(&(&pe(1) * &xe(1))).unwrap();
        assert_eq!(w.render(&nf), "-1 + X[1]*P[1]");
        assert_eq!(w.render(&w.commutator(&xe(1), &pe(1)).unwrap()), "1");
        let w2 = flat_world(2).unwrap();
        assert_eq!(w2.render(&w2.normalize(&(&pe(2) * &xe(1))).unwrap()), "X[1]*P[2]");
        assert!(w2.is_zero(&Element::commutator(&pe(1), &pe(2))).unwrap());
        assert!(w2.is_zero(&Element::commutator(&xe(1), &pe(2))).unwrap());
        assert!(w2.is_zero(&Element::commutator(&xe(1), &xe(2))).unwrap());
        assert!(!w2.is_zero(&xe(1)).unwrap());
    }

    #[test]
    fn flat_double_rewrite() {
        // P1·P1·X1 → P1·(X1·P1 − 1) → (X1·P1 − 1)·P1 − P1 = X1·P1·P1 − 2·P1
        let w = flat_world(1).unwrap();
        let nf = w.normalize(&(&(&pe(1) * &pe(1)) * &xe(1))).unwrap();
        assert_eq!(w.render(&nf), "-2*P[1] + X[1]*P[1]*P[1]");
    }

    #[test]
    fn commutator_of_square() {
        // [X1², P1] = X1X1P1 − P1X1X1; P1X1X1 → X1P1X1 − X1 → X1X1P1 − 2X1.
        let w = flat_world(1).unwrap();
        let c = w.commutator(&(&xe(1) * &xe(1)), &pe(1)).unwrap();
        assert_eq!(c, xe(1).scale(&Scalar::from_int(2)));
    }

    #[test]
    fn dimension_limits() {
        assert_eq!(flat_world(0).unwrap_err(), WorldError::DimOutOfRange(0));
        assert_eq!(gauge_world(9).unwrap_err(), WorldError::DimOutOfRange(9));
        assert!(metric_world(8).is_ok());
        assert_eq!(free_world(&[]).unwrap_err(), WorldError::EmptyGeneratorList);
    }

    #[test]
    fn gauge_world_metric_deviation() {
        let w = gauge_world(2).unwrap();
        let xdot1 = w.element("Xdot", &[1]).unwrap();
        let g11 = w.commutator(&xe(1), &xdot1).unwrap();
        assert_eq!(w.render(&g11), "1 - X[1]*A[1] + A[1]*X[1]");
        assert!(w.is_zero(&Element::commutator(&xe(1), &xe(2))).unwrap());
        let xdot2 = w.element("Xdot", &[2]).unwrap();
        let r = Element::commutator(&xdot1, &xdot2);
        let zero_a: Vec<_> = (1..=2).map(|i| (GeneratorId::new("A", &[i]), Element::zero())).collect();
        assert!(w.substitute(&r, &zero_a).unwrap().is_zero());
    }

    #[test]
    fn metric_world_centrality_and_symmetry() {
        let w = metric_world(2).unwrap();
        let g12 = w.gen("g", &[1, 2]).unwrap();
        assert_eq!(w.gen("g", &[2, 1]).unwrap(), g12);
        assert_eq!(w.render(&g12), "g[1][2]");
        assert!(w.is_zero(&(&(&g12 * &xe(1)) - &(&xe(1) * &g12))).unwrap());
        assert!(w.is_zero(&Element::commutator(&g12, &pe(1))).unwrap());
        let w1 = metric_world(1).unwrap();
        assert_eq!(w1.render(w1.macro_element("H", &[]).unwrap()), "1/2*g[1][1]*P[1]*P[1]");
        let nf = w.normalize(&(&(&pe(1) * &xe(2)) * &g12)).unwrap();
        assert_eq!(w.render(&nf), "g[1][2]*X[2]*P[1]");
    }

    #[test]
    fn free_world_is_identity() {
        let ns: Vec<_> = (1..=3).map(|i| GeneratorId::new("N", &[i])).collect();
        let w = free_world(&ns).unwrap();
        let e = &gen_element("N", &[1]) * &gen_element("N", &[2]);
        assert_eq!(w.normalize(&e).unwrap(), e);
        let [a, b, c] = [1, 2, 3].map(|i| gen_element("N", &[i]));
        let jacobi = Element::commutator(&Element::commutator(&a, &b), &c)
            + Element::commutator(&Element::commutator(&c, &a), &b)
            + Element::commutator(&Element::commutator(&b, &c), &a);
        assert!(w.is_zero(&jacobi).unwrap());
        let h = free_world(&[GeneratorId::new("X", &[]), GeneratorId::scalar("H")]).unwrap();
        let xh = Element::commutator(&gen_element("X", &[]), &gen_element("H", &[]));
        assert_eq!(h.normalize(&xh).unwrap().len(), 2);
    }

    #[test]
    fn unknown_generator_is_reported() {
        let w = flat_world(1).unwrap();
        assert!(matches!(
            w.normalize(&gen_element("Q", &[1])),
            Err(WorldError::Rewrite(RewriteError::UnknownGenerator(_)))
        ));
    }

    #[test]
    fn builders_are_admissible() {
        for w in [
            flat_world(3).unwrap(),
            gauge_world(3).unwrap(),
            metric_world(3).unwrap(),
            potential_world(3).unwrap(),
            coordinate_world(3).unwrap(),
        ] {
            for ((a, b), rhs) in w.system().rules() {
                let lhs = Word::from_letters([*a, *b]);
                for (word, _) in rhs.terms() {
                    assert_eq!(w.system().cmp_words(word, &lhs), std::cmp::Ordering::Less);
                }
            }
        }
    }

    #[test]
    fn metric_normal_forms_keep_g_left() {
        let w = metric_world(2).unwrap();
        let letters: Vec<Letter> = w.system().order().to_vec();
        for word in words_up_to(&letters, 3) {
            let nf = w.normalize(&Element::word(word)).unwrap();
            for (nw, _) in nf.terms() {
                let names: Vec<bool> = nw.letters().iter().map(|l| l.id().name == "g").collect();
                let first_non_g = names.iter().position(|g| !g).unwrap_or(names.len());
                assert!(names[first_non_g..].iter().all(|g| !g));
            }
        }
    }

    #[test]
    fn scalar_unit_identity() {
        assert!(Scalar::one().is_one());
    }
}
