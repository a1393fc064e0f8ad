use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use ncw_core::eval::{eval, Bindings};
use ncw_core::world::Scope;
use ncw_core::{parse_expr, render_world, Element, World};

/// A world plus the `:let` bindings made in a session.
pub struct Session {
    world: World,
    lets: BTreeMap<String, Element>,
}

impl Scope for Session {
    fn lookup(&self, name: &str, indices: &[u32]) -> Option<Element> {
        if indices.is_empty() {
            if let Some(e) = self.lets.get(name) {
                return Some(e.clone());
            }
        }
        self.world.lookup(name, indices)
    }
    fn is_param(&self, name: &str) -> bool {
        self.world.is_param(name)
    }
}

impl Session {
    pub fn new(world: World) -> Session {
        Session { world, lets: BTreeMap::new() }
    }

    fn evaluate(&self, text: &str) -> Result<Element, String> {
        let expr = parse_expr(text).map_err(|e| e.to_string())?;
        let e = eval(&expr, self, &Bindings::new()).map_err(|e| e.to_string())?;
        self.world.normalize(&e).map_err(|e| e.to_string())
    }

    /// Handle one input line. `None` ends the session.
    pub fn line(&mut self, input: &str) -> Option<String> {
        let input = input.trim();
        if input.is_empty() || input.starts_with('#') {
            return Some(String::new());
        }
        if let Some(cmd) = input.strip_prefix(':') {
            let (head, rest) = cmd.split_once(char::is_whitespace).unwrap_or((cmd, ""));
            return match head {
                "quit" | "q" => None,
                "world" => {
                    let mut out = render_world(&self.world);
                    for (name, e) in &self.lets {
                        out.push_str(&format!("let {name} = {}\n", self.world.render(e)));
                    }
                    Some(out)
                }
                "let" => Some(self.bind(rest)),
                "help" => Some(HELP.to_string()),
                other => Some(format!("error: unknown command `:{other}`; try :help\n")),
            };
        }
        Some(match self.evaluate(input) {
            Ok(e) => format!("{}\n", self.world.render(&e)),
            Err(msg) => format!("error: {msg}\n"),
        })
    }

    fn bind(&mut self, rest: &str) -> String {
        let Some((name, text)) = rest.split_once('=') else {
            return "error: expected `:let name = expr`\n".to_string();
        };
        let name = name.trim();
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return format!("error: `{name}` is not an identifier\n");
        }
        match self.evaluate(text) {
            Ok(e) => {
                let out = format!("{name} = {}\n", self.world.render(&e));
                self.lets.insert(name.to_string(), e);
                out
            }
            Err(msg) => format!("error: {msg}\n"),
        }
    }
}

const HELP: &str = "\
expressions are normalized and printed in canonical form
:let name = expr   bind a name
:world             show the world and bindings
:quit              leave
";

pub fn run<R: BufRead, W: Write>(world: World, input: R, mut out: W, prompt: bool) -> io::Result<()> {
    let mut session = Session::new(world);
    let mut lines = input.lines();
    loop {
        if prompt {
            write!(out, "ncw> ")?;
            out.flush()?;
        }
        let Some(line) = lines.next() else { break };
        match session.line(&line?) {
            Some(reply) => out.write_all(reply.as_bytes())?,
            None => break,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ncw_core::world::{flat_world, gauge_world};

    fn session(w: World, input: &str) -> String {
        let mut out = Vec::new();
        run(w, input.as_bytes(), &mut out, false).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn flat_commutators() {
        let out = session(flat_world(2).unwrap(), "[X[1],P[1]]\n[X[1],X[2]]\n");
        assert_eq!(out, "1\n0\n");
    }

    #[test]
    fn gauge_curvature_element() {
        let out = session(gauge_world(2).unwrap(), "[Xdot[1],Xdot[2]]\n");
        let w = gauge_world(2).unwrap();
        let a = |i| w.gen("A", &[i]).unwrap();
        let p = |i| w.gen("P", &[i]).unwrap();
        let expected = Element::commutator(&a(2), &p(1)) - Element::commutator(&a(1), &p(2))
            + Element::commutator(&a(1), &a(2));
        assert_eq!(out, format!("{}\n", w.render(&w.normalize(&expected).unwrap())));
    }

    #[test]
    fn lets_errors_and_quit() {
        let out = session(
            flat_world(1).unwrap(),
            ":let y = X[1]*X[1]\n[y, P[1]]\nQ[7]\n:let 1x = 2\n:quit\nX[1]\n",
        );
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "y = X[1]*X[1]");
        assert_eq!(lines[1], "2*X[1]");
        assert!(lines[2].starts_with("error: unknown symbol"));
        assert!(lines[3].starts_with("error:"));
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn syntax_errors_are_positioned_and_session_continues() {
        let out = session(flat_world(1).unwrap(), "[X[1],\n1 + 1\n");
        assert!(out.starts_with("error: syntax error at line 1"), "{out}");
        assert!(out.ends_with("2\n"));
    }

    #[test]
    fn world_command_lists_bindings() {
        let out = session(flat_world(1).unwrap(), ":let z = P[1]\n:world\n");
        assert!(out.contains("world flat"), "{out}");
        assert!(out.contains("let z = P[1]"));
    }
}
