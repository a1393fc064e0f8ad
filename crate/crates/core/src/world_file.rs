//! Line-oriented world definition files.
//!
//! ```text
//! world flat
//! dim 2
//! gen X[i]            # schematic index: one generator per value in 1..=dim
//! gen P[1..2]         # explicit range; literals also allowed
//! symmetric g         # store g[i][j] with sorted indices
//! param tau
//! order X < P         # families or concrete generators, ascending
//! rel [X[i],P[j]] = delta(i,j)
//! rule P[1]*X[1] -> X[1]*P[1] - 1
//! def Xdot[i] = P[i] - A[i]
//! ```
//!
//! Header lines (`world`, `dim`, `param`, `symmetric`, `gen`, `order`) may
//! appear anywhere; `rel`, `rule` and `def` lines are applied in file order,
//! and a `def` may only use relations and macros that precede it.

use thiserror::Error;

use crate::eval::{assignments, eval, index_vars, EvalError};
use crate::rewrite::RewriteError;
use crate::symbol::GeneratorId;
use crate::syntax::{Expr, Index, Parser, SyntaxError};
use crate::world::{World, WorldBuilder, WorldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorldFileError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("line {line}: rule `{rule}` is not admissible: {reason}")]
    Admissibility { line: usize, rule: String, reason: String },
    #[error("line {line}: {source}")]
    Eval { line: usize, source: EvalError },
    #[error("line {line}: {source}")]
    World { line: usize, source: WorldError },
}

struct Line<'a> {
    number: usize,
    keyword: &'a str,
    /// Text after the keyword and its 1-based column.
    rest: &'a str,
    column: usize,
}

fn split_lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let lead = content.len() - trimmed.len();
        let kw_len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        out.push(Line {
            number: k + 1,
            keyword: &trimmed[..kw_len],
            rest: &trimmed[kw_len..],
            column: lead + kw_len + 1,
        });
    }
    out
}

fn parser(line: &Line<'_>) -> Result<Parser, SyntaxError> {
    Parser::at(line.rest, line.number, line.column)
}

fn syntax_at(line: &Line<'_>, column: usize, expected: &str, found: String) -> WorldFileError {
    WorldFileError::Syntax(SyntaxError { line: line.number, column, expected: vec![expected.into()], found })
}

/// Column of the first mention of `name` on this line, for error reporting.
fn column_of(line: &Line<'_>, name: &str) -> usize {
    let base = name.split('[').next().unwrap_or(name);
    line.rest.find(base).map(|k| line.column + k).unwrap_or(line.column)
}

fn eval_error(line: &Line<'_>, e: EvalError) -> WorldFileError {
    match e {
        EvalError::UnknownSymbol(name) => {
            syntax_at(line, column_of(line, &name), "declared generator, macro or parameter", format!("`{name}`"))
        }
        source => WorldFileError::Eval { line: line.number, source },
    }
}

fn world_error(line: &Line<'_>, e: WorldError) -> WorldFileError {
    match e {
        WorldError::Rewrite(RewriteError::NonTerminatingRuleSet { rule, reason }) => {
            WorldFileError::Admissibility { line: line.number, rule, reason }
        }
        WorldError::UnknownGenerator(id) | WorldError::Rewrite(RewriteError::UnknownGenerator(id)) => {
            let name = id.to_string();
            syntax_at(line, column_of(line, &name), "declared generator", format!("`{name}`"))
        }
        source => WorldFileError::World { line: line.number, source },
    }
}

/// Index ranges of a `gen` line.
fn gen_ranges(p: &mut Parser, dim: u32) -> Result<Vec<Vec<u32>>, SyntaxError> {
    let mut ranges = Vec::new();
    while p.eat_sym('[') {
        let (line, col) = p.position();
        let range = match p.index()? {
            Index::Var(_) => (1..=dim).collect(),
            Index::Lit(a) => {
                if p.eat_sym('.') {
                    if !p.eat_sym('.') {
                        return Err(p.error(&["`..`"]));
                    }
                    let b = p.int()?;
                    if b < a {
                        return Err(SyntaxError { line, column: col, expected: vec!["nonempty range".into()], found: format!("`{a}..{b}`") });
                    }
                    (a..=b).collect()
                } else {
                    vec![a]
                }
            }
        };
        ranges.push(range);
        if !p.eat_sym(']') {
            return Err(p.error(&["`]`"]));
        }
    }
    Ok(ranges)
}

fn cartesian(ranges: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for r in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                r.iter().map(move |&k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

fn literal_indices(p: &mut Parser) -> Result<Vec<u32>, SyntaxError> {
    let mut v = Vec::new();
    while p.eat_sym('[') {
        v.push(p.int()?);
        if !p.eat_sym(']') {
            return Err(p.error(&["`]`"]));
        }
    }
    Ok(v)
}

/// A generator reference `Name[...]` in a rel/rule head.
fn head_ref(e: &Expr, line: &Line<'_>) -> Result<(String, Vec<Index>), WorldFileError> {
    match e {
        Expr::Ref { name, indices } => Ok((name.clone(), indices.clone())),
        other => Err(syntax_at(line, line.column, "generator", format!("`{other}`"))),
    }
}

fn concrete(name: &str, ix: &[Index], b: &crate::eval::Bindings) -> Result<GeneratorId, EvalError> {
    let mut v = Vec::with_capacity(ix.len());
    for i in ix {
        v.push(match i {
            Index::Lit(n) => *n,
            Index::Var(x) => *b.get(x).ok_or_else(|| EvalError::UnboundIndex(x.clone()))?,
        });
    }
    Ok(GeneratorId::new(name, &v))
}

pub fn parse_world_file(text: &str) -> Result<World, WorldFileError> {
    let lines = split_lines(text);
    let mut b = WorldBuilder::new("unnamed", 0);
    let mut dim_seen = false;

    for line in lines.iter().filter(|l| matches!(l.keyword, "world" | "dim" | "param" | "symmetric")) {
        let mut p = parser(line)?;
        match line.keyword {
            "world" => b.set_name(&p.ident()?),
            "dim" => {
                let (l, c) = p.position();
                let d = p.int()?;
                if dim_seen {
                    return Err(SyntaxError { line: l, column: c, expected: vec!["a single `dim` line".into()], found: format!("`{d}`") }.into());
                }
                dim_seen = true;
                b.set_dim(d);
            }
            "param" => {
                b.param(&p.ident()?);
                while !p.at_end() {
                    b.param(&p.ident()?);
                }
            }
            _ => {
                b.symmetric(&p.ident()?);
            }
        }
        p.expect_end()?;
    }
    if !dim_seen {
        return Err(SyntaxError { line: 1, column: 1, expected: vec!["`dim` line".into()], found: "none".into() }.into());
    }
    let dim = b.dim();

    for line in lines.iter().filter(|l| l.keyword == "gen") {
        let mut p = parser(line)?;
        let name = p.ident()?;
        let ranges = gen_ranges(&mut p, dim)?;
        p.expect_end()?;
        for ix in cartesian(&ranges) {
            b.gen(GeneratorId::new(name.as_str(), &ix));
        }
    }

    let order_lines: Vec<&Line<'_>> = lines.iter().filter(|l| l.keyword == "order").collect();
    if !order_lines.is_empty() {
        let declared = b.generators().to_vec();
        let mut order: Vec<GeneratorId> = Vec::new();
        for line in &order_lines {
            let mut p = parser(line)?;
            loop {
                let (l, c) = p.position();
                let name = p.ident()?;
                let ix = literal_indices(&mut p)?;
                let items: Vec<GeneratorId> = if ix.is_empty() && !declared.iter().any(|g| g.name == name && g.indices.is_empty()) {
                    declared.iter().filter(|g| g.name == name).cloned().collect()
                } else {
                    let id = b.canonical(GeneratorId::new(name.as_str(), &ix));
                    if declared.contains(&id) { vec![id] } else { Vec::new() }
                };
                if items.is_empty() {
                    return Err(SyntaxError { line: l, column: c, expected: vec!["declared generator".into()], found: format!("`{name}`") }.into());
                }
                for g in items {
                    if order.contains(&g) {
                        return Err(SyntaxError { line: l, column: c, expected: vec!["generator not yet ordered".into()], found: format!("`{g}`") }.into());
                    }
                    order.push(g);
                }
                if p.at_end() {
                    break;
                }
                if !p.eat_sym('<') {
                    return Err(p.error(&["`<`", "end of line"]).into());
                }
            }
        }
        if let Some(missing) = declared.iter().find(|g| !order.contains(g)) {
            let line = order_lines[0];
            return Err(syntax_at(line, line.column, "every generator in the order", format!("missing `{missing}`")));
        }
        b.order(order).map_err(|e| world_error(order_lines[0], e))?;
    }

    for line in &lines {
        match line.keyword {
            "world" | "dim" | "param" | "symmetric" | "gen" | "order" => {}
            "rel" => {
                let mut p = parser(line)?;
                let head = p.expr()?;
                let (a, c) = match &head {
                    Expr::Comm(a, c) => (head_ref(a, line)?, head_ref(c, line)?),
                    _ => return Err(syntax_at(line, line.column, "commutator `[a,b]`", format!("`{head}`"))),
                };
                if !p.eat_sym('=') {
                    return Err(p.error(&["`=`"]).into());
                }
                let rhs = p.expr()?;
                p.expect_end()?;
                let mut vars = Vec::new();
                index_vars(&head, &mut vars);
                index_vars(&rhs, &mut vars);
                for env in assignments(&vars, dim) {
                    let ga = concrete(&a.0, &a.1, &env).map_err(|e| eval_error(line, e))?;
                    let gb = concrete(&c.0, &c.1, &env).map_err(|e| eval_error(line, e))?;
                    let value = eval(&rhs, &b, &env).map_err(|e| eval_error(line, e))?;
                    b.rel(&ga, &gb, value).map_err(|e| world_error(line, e))?;
                }
            }
            "rule" => {
                let arrow = line
                    .rest
                    .find("->")
                    .ok_or_else(|| syntax_at(line, line.column + line.rest.len(), "`->`", "end of line".into()))?;
                let mut p = Parser::at(&line.rest[..arrow], line.number, line.column)?;
                let head = p.expr()?;
                p.expect_end()?;
                let (a, c) = match &head {
                    Expr::Mul(a, c) => (head_ref(a, line)?, head_ref(c, line)?),
                    _ => return Err(syntax_at(line, line.column, "generator pair `a*b`", format!("`{head}`"))),
                };
                let mut p = Parser::at(&line.rest[arrow + 2..], line.number, line.column + arrow + 2)?;
                let rhs = p.expr()?;
                p.expect_end()?;
                let mut vars = Vec::new();
                index_vars(&head, &mut vars);
                index_vars(&rhs, &mut vars);
                for env in assignments(&vars, dim) {
                    let ga = concrete(&a.0, &a.1, &env).map_err(|e| eval_error(line, e))?;
                    let gb = concrete(&c.0, &c.1, &env).map_err(|e| eval_error(line, e))?;
                    let value = eval(&rhs, &b, &env).map_err(|e| eval_error(line, e))?;
                    b.rule(&ga, &gb, value).map_err(|e| world_error(line, e))?;
                }
            }
            "def" => {
                let mut p = parser(line)?;
                let name = p.ident()?;
                let ix = p.indices()?;
                if !p.eat_sym('=') {
                    return Err(p.error(&["`=`"]).into());
                }
                let rhs = p.expr()?;
                p.expect_end()?;
                let mut vars = Vec::new();
                for i in &ix {
                    if let Index::Var(v) = i {
                        vars.push(v.clone());
                    }
                }
                index_vars(&rhs, &mut vars);
                for env in assignments(&vars, dim) {
                    let id = concrete(&name, &ix, &env).map_err(|e| eval_error(line, e))?;
                    let value = eval(&rhs, &b, &env).map_err(|e| eval_error(line, e))?;
                    let value = b.normalize(&value).map_err(|e| world_error(line, e))?;
                    b.define(id, value);
                }
            }
            other => {
                return Err(syntax_at(
                    line,
                    line.column - other.len(),
                    "world, dim, param, symmetric, gen, order, rel, rule or def",
                    format!("`{other}`"),
                ))
            }
        }
    }
    b.build().map_err(|source| WorldFileError::World { line: 0, source })
}

/// Canonical text for `w`: concrete generators, explicit order, one `rule`
/// line per rewrite rule and one `def` line per macro.
pub fn render_world(w: &World) -> String {
    let mut out = String::new();
    out.push_str(&format!("world {}\ndim {}\n", w.name(), w.dim()));
    for p in w.params() {
        out.push_str(&format!("param {p}\n"));
    }
    for s in w.symmetric_families() {
        out.push_str(&format!("symmetric {s}\n"));
    }
    for g in w.generators() {
        out.push_str(&format!("gen {g}\n"));
    }
    let order: Vec<String> = w.generators().iter().map(|g| g.to_string()).collect();
    out.push_str(&format!("order {}\n", order.join(" < ")));
    let sys = w.system();
    let mut rules: Vec<_> = sys.rules().collect();
    rules.sort_by(|(a, _), (b, _)| {
        let wa = crate::poly::Word::from_letters([a.0, a.1]);
        let wb = crate::poly::Word::from_letters([b.0, b.1]);
        sys.cmp_words(&wa, &wb)
    });
    for ((a, b), rhs) in rules {
        out.push_str(&format!("rule {a}*{b} -> {}\n", w.render(rhs)));
    }
    for (id, value) in w.macros() {
        out.push_str(&format!("def {id} = {}\n", w.render(value)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::*;

    const FLAT: &str = "\
# flat space, two dimensions
world flat
dim 2
gen X[i]
gen P[i]
order X < P
rel [X[i],X[j]] = 0
rel [P[i],P[j]] = 0
rel [X[i],P[j]] = delta(i,j)
";

    #[test]
    fn flat_file_matches_builder() {
        assert_eq!(parse_world_file(FLAT).unwrap(), flat_world(2).unwrap());
    }

    #[test]
    fn round_trip_builders() {
        let ns = [GeneratorId::new("N", &[1]), GeneratorId::new("N", &[2]), GeneratorId::scalar("H")];
        for w in [
            flat_world(3).unwrap(),
            gauge_world(2).unwrap(),
            metric_world(2).unwrap(),
            potential_world(2).unwrap(),
            coordinate_world(2).unwrap(),
            free_world(&ns).unwrap(),
        ] {
            let text = render_world(&w);
            let back = parse_world_file(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert_eq!(back, w, "{text}");
        }
    }

    #[test]
    fn non_decreasing_rule_is_rejected() {
        let text = "world w\ndim 1\ngen X[i]\ngen P[i]\norder X < P\nrule P[1]*X[1] -> P[1]*X[1]\n";
        match parse_world_file(text).unwrap_err() {
            WorldFileError::Admissibility { line, rule, .. } => {
                assert_eq!(line, 6);
                assert!(rule.contains("P[1]*X[1]"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn undeclared_generator_is_a_syntax_error() {
        let text = "world w\ndim 1\ngen X[i]\ngen P[i]\nrel [X[1],Q[1]] = 0\n";
        match parse_world_file(text).unwrap_err() {
            WorldFileError::Syntax(e) => {
                assert_eq!((e.line, e.column), (5, 11));
                assert!(e.found.contains("Q[1]"));
            }
            e => panic!("unexpected {e:?}"),
        }
        let text = "world w\ndim 1\ngen X[i]\ndef Y = X[1] + Q[1]\n";
        assert!(matches!(parse_world_file(text), Err(WorldFileError::Syntax(_))));
    }

    #[test]
    fn malformed_lines_have_positions() {
        let e = parse_world_file("world w\ndim 2\ngen X[i\n").unwrap_err();
        match e {
            WorldFileError::Syntax(s) => assert_eq!(s.line, 3),
            e => panic!("unexpected {e:?}"),
        }
        let e = parse_world_file("world w\ndim 2\ngen X[i]\nfrobnicate\n").unwrap_err();
        match e {
            WorldFileError::Syntax(s) => assert_eq!((s.line, s.column), (4, 1)),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn gauge_file_with_macros() {
        let text = "world gauge\ndim 2\ngen X[i]\ngen P[i]\ngen A[1..2]\norder X < P < A\n\
                    rel [X[i],X[j]] = 0\nrel [P[i],P[j]] = 0\nrel [X[i],P[j]] = delta(i,j)\n\
                    def Xdot[i] = P[i] - A[i]\n";
        assert_eq!(parse_world_file(text).unwrap(), gauge_world(2).unwrap());
    }

    #[test]
    fn symmetric_family_storage() {
        let text = "world m\ndim 2\nsymmetric g\ngen g[i][j]\ngen X[i]\norder g < X\nrel [X[i],g[j][k]] = 0\n";
        let w = parse_world_file(text).unwrap();
        assert_eq!(w.generators().len(), 5);
        assert_eq!(w.gen("g", &[2, 1]).unwrap(), w.gen("g", &[1, 2]).unwrap());
    }
}
