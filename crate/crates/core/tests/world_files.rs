use std::path::PathBuf;

use ncw_core::eval::{eval, Bindings};
use ncw_core::world::{flat_world, gauge_world, metric_world};
use ncw_core::{parse_expr, parse_world_file, render_world, World};

fn load(name: &str) -> World {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "worlds", name].iter().collect();
    let text = std::fs::read_to_string(&path).unwrap();
    parse_world_file(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn normal(w: &World, s: &str) -> String {
    let e = eval(&parse_expr(s).unwrap(), w, &Bindings::new()).unwrap();
    w.render(&w.normalize(&e).unwrap())
}

#[test]
fn shipped_worlds_match_builders() {
    assert_eq!(load("flat2.ncw"), flat_world(2).unwrap());
    assert_eq!(load("gauge2.ncw"), gauge_world(2).unwrap());
    assert_eq!(load("metric2.ncw"), metric_world(2).unwrap());
}

#[test]
fn shipped_worlds_round_trip() {
    for name in ["flat2.ncw", "gauge2.ncw", "metric2.ncw", "shift.ncw"] {
        let w = load(name);
        let text = render_world(&w);
        assert_eq!(parse_world_file(&text).unwrap(), w, "{name}");
        assert_eq!(render_world(&parse_world_file(&text).unwrap()), text, "{name}");
    }
}

#[test]
fn shift_world_moves_samples_past_j() {
    let w = load("shift.ncw");
    assert_eq!(normal(&w, "X[0]*X[1]*J"), "J*X[1]*X[2]");
    assert_eq!(normal(&w, "[X[0], J/h]"), "-h^-1*J*X[0] + h^-1*J*X[1]");
}

#[test]
fn metric_file_velocity() {
    let w = load("metric2.ncw");
    assert_eq!(normal(&w, "[X[1], Xdot[2]]"), "g[1][2]");
    assert_eq!(normal(&w, "D X[1]"), normal(&w, "g[1][1]*P[1] + g[1][2]*P[2]"));
}
