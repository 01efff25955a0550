#![allow(dead_code)]

use std::sync::Arc;

use rephat::field::Rational;
use rephat::presentation::parse_presentation;
use rephat::repetitive::{RVertex, Repetitive};
use rephat::strings::StringWord;

pub type Q = Rational;

pub const CORPUS: [&str; 5] = ["a2", "a3", "a3_rad2", "one_loop", "example4"];

pub fn source(name: &str) -> String {
    let path = format!("{}/data/{name}.quiver", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

pub fn load(name: &str) -> Arc<Repetitive> {
    Repetitive::new(parse_presentation(&source(name)).unwrap()).unwrap()
}

pub fn vx(rep: &Repetitive, name: &str, z: i64) -> RVertex {
    RVertex {
        z,
        v: rep.base_quiver().vertex(name).unwrap(),
    }
}

pub fn word(rep: &Repetitive, text: &str) -> StringWord {
    StringWord::parse(rep, text).unwrap()
}

pub fn arrow(rep: &Repetitive, text: &str) -> rephat::repetitive::RArrow {
    let (base, z) = text.rsplit_once('_').unwrap();
    let letter = (0..rep.letters_per_degree())
        .map(|i| rep.letter_from_index(i))
        .find(|&l| rep.letter_name(l) == base)
        .unwrap();
    rephat::repetitive::RArrow {
        z: z.parse().unwrap(),
        letter,
    }
}

/// A path of the repetitive quiver, letters in application order.
pub fn path(rep: &Repetitive, text: &str) -> rephat::repetitive::RPath {
    let arrows: Vec<_> = text.split_whitespace().map(|t| arrow(rep, t)).collect();
    rephat::repetitive::RPath {
        start: rep.source(arrows[0]),
        arrows,
    }
}
