//! Plain-text form of modules and morphisms.
//!
//! ```text
//! module
//! vertex 1_0 1
//! vertex 2_0 1
//! arrow a_0 1 1
//! 1
//! end
//! ```
//!
//! Vertices are listed by (degree, base vertex name), arrows by (degree,
//! arrow name); only vertices of nonzero dimension and arrows between them
//! appear. Matrices follow their header one row per line, entries in the
//! field's canonical form (`p/q` for rationals).

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use super::{GradedModule, ModuleBuilder, Morphism};
use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::repetitive::{RArrow, RVertex, Repetitive};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {reason}")]
pub struct TextError {
    pub line: usize,
    pub reason: String,
}

fn sorted_vertices<F: Scalar>(m: &GradedModule<F>) -> Vec<RVertex> {
    let rep = m.repetitive();
    let mut xs: Vec<RVertex> = m.dimension_vector().into_iter().map(|(x, _)| x).collect();
    xs.sort_by(|a, b| {
        (a.z, rep.base_quiver().vertex_name(a.v)).cmp(&(b.z, rep.base_quiver().vertex_name(b.v)))
    });
    xs
}

fn write_matrix<F: Scalar>(out: &mut String, m: &Matrix<F>) {
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m[(r, c)].to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

impl<F: Scalar> GradedModule<F> {
    pub fn to_text(&self) -> String {
        let rep = self.repetitive();
        let mut out = String::from("module\n");
        for x in sorted_vertices(self) {
            out.push_str(&format!("vertex {} {}\n", rep.vertex_name(x), self.dim(x)));
        }
        let mut arrows: Vec<RArrow> = self
            .arrows_in_range()
            .into_iter()
            .filter(|&a| self.dim(rep.source(a)) > 0 && self.dim(rep.target(a)) > 0)
            .collect();
        arrows.sort_by(|a, b| (a.z, rep.letter_name(a.letter)).cmp(&(b.z, rep.letter_name(b.letter))));
        for a in arrows {
            let m = self.action(a);
            out.push_str(&format!("arrow {} {} {}\n", rep.arrow_name(a), m.rows(), m.cols()));
            write_matrix(&mut out, &m);
        }
        out.push_str("end\n");
        out
    }
}

impl<F: Scalar> Morphism<F> {
    pub fn to_text(&self) -> String {
        let rep = self.source().repetitive();
        let mut out = String::from("morphism\nsource\n");
        out.push_str(&self.source().to_text());
        out.push_str("target\n");
        out.push_str(&self.target().to_text());
        let mut xs: Vec<RVertex> = self
            .vertices()
            .filter(|&x| self.source().dim(x) > 0 && self.target().dim(x) > 0)
            .collect();
        xs.sort_by(|a, b| {
            (a.z, rep.base_quiver().vertex_name(a.v)).cmp(&(b.z, rep.base_quiver().vertex_name(b.v)))
        });
        for x in xs {
            let b = self.block(x);
            out.push_str(&format!("block {} {} {}\n", rep.vertex_name(x), b.rows(), b.cols()));
            write_matrix(&mut out, &b);
        }
        out.push_str("end\n");
        out
    }
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            lines: text
                .lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
                .collect(),
            pos: 0,
        }
    }

    fn next(&mut self) -> Result<(usize, &'a str), TextError> {
        let l = self.lines.get(self.pos).copied().ok_or(TextError {
            line: self.lines.last().map_or(0, |l| l.0),
            reason: "unexpected end of input".into(),
        })?;
        self.pos += 1;
        Ok(l)
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).map(|l| l.1)
    }

    fn expect(&mut self, word: &str) -> Result<(), TextError> {
        let (line, l) = self.next()?;
        if l != word {
            return Err(TextError {
                line,
                reason: format!("expected `{word}`"),
            });
        }
        Ok(())
    }

    fn matrix<F: Scalar>(&mut self, rows: usize, cols: usize) -> Result<Matrix<F>, TextError> {
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (line, l) = self.next()?;
            let entries: Vec<&str> = l.split_whitespace().collect();
            if entries.len() != cols {
                return Err(TextError {
                    line,
                    reason: format!("expected {cols} entries"),
                });
            }
            for e in entries {
                data.push(F::parse(e).ok_or(TextError {
                    line,
                    reason: format!("bad scalar `{e}`"),
                })?);
            }
        }
        Ok(Matrix::from_rows(rows, cols, data))
    }
}

fn split_degree(name: &str) -> Option<(&str, i64)> {
    let (base, z) = name.rsplit_once('_')?;
    Some((base, z.parse().ok()?))
}

fn parse_vertex(rep: &Repetitive, name: &str, line: usize) -> Result<RVertex, TextError> {
    let err = || TextError {
        line,
        reason: format!("unknown vertex `{name}`"),
    };
    let (base, z) = split_degree(name).ok_or_else(err)?;
    let v = rep.base_quiver().vertex(base).ok_or_else(err)?;
    Ok(RVertex { z, v })
}

fn parse_arrow(rep: &Repetitive, name: &str, line: usize) -> Result<RArrow, TextError> {
    let err = || TextError {
        line,
        reason: format!("unknown arrow `{name}`"),
    };
    let (base, z) = split_degree(name).ok_or_else(err)?;
    let letter = (0..rep.letters_per_degree())
        .map(|i| rep.letter_from_index(i))
        .find(|&l| rep.letter_name(l) == base)
        .ok_or_else(err)?;
    Ok(RArrow { z, letter })
}

fn header<'a>(l: &'a str, word: &str, line: usize) -> Result<(&'a str, Vec<usize>), TextError> {
    let parts: Vec<&str> = l.split_whitespace().collect();
    if parts.first() != Some(&word) || parts.len() < 3 {
        return Err(TextError {
            line,
            reason: format!("expected `{word} <name> <sizes>`"),
        });
    }
    let nums = parts[2..]
        .iter()
        .map(|s| s.parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| TextError {
            line,
            reason: "bad size".into(),
        })?;
    Ok((parts[1], nums))
}

fn module_body<F: Scalar>(rep: &Arc<Repetitive>, lines: &mut Lines) -> Result<GradedModule<F>, TextError> {
    lines.expect("module")?;
    let mut b = ModuleBuilder::new(rep);
    let mut dims: BTreeMap<RVertex, usize> = BTreeMap::new();
    loop {
        let (line, l) = lines.next()?;
        if l == "end" {
            break;
        }
        if l.starts_with("vertex ") {
            let (name, nums) = header(l, "vertex", line)?;
            let x = parse_vertex(rep, name, line)?;
            let [d] = nums[..] else {
                return Err(TextError {
                    line,
                    reason: "expected one dimension".into(),
                });
            };
            dims.insert(x, d);
            b.dim(x, d);
        } else {
            let (name, nums) = header(l, "arrow", line)?;
            let a = parse_arrow(rep, name, line)?;
            let [r, c] = nums[..] else {
                return Err(TextError {
                    line,
                    reason: "expected `rows cols`".into(),
                });
            };
            let dim = |x: RVertex| dims.get(&x).copied().unwrap_or(0);
            if (r, c) != (dim(rep.target(a)), dim(rep.source(a))) {
                return Err(TextError {
                    line,
                    reason: "matrix shape does not match the vertex dimensions".into(),
                });
            }
            b.arrow(a, lines.matrix(r, c)?);
        }
    }
    Ok(b.build())
}

pub fn parse_module<F: Scalar>(rep: &Arc<Repetitive>, text: &str) -> Result<GradedModule<F>, TextError> {
    let mut lines = Lines::new(text);
    let m = module_body(rep, &mut lines)?;
    if let Some(extra) = lines.peek() {
        return Err(TextError {
            line: lines.lines[lines.pos].0,
            reason: format!("trailing input `{extra}`"),
        });
    }
    Ok(m)
}

pub fn parse_morphism<F: Scalar>(rep: &Arc<Repetitive>, text: &str) -> Result<Morphism<F>, TextError> {
    let mut lines = Lines::new(text);
    lines.expect("morphism")?;
    lines.expect("source")?;
    let source = module_body(rep, &mut lines)?;
    lines.expect("target")?;
    let target = module_body(rep, &mut lines)?;
    let mut blocks = BTreeMap::new();
    loop {
        let (line, l) = lines.next()?;
        if l == "end" {
            break;
        }
        let (name, nums) = header(l, "block", line)?;
        let x = parse_vertex(rep, name, line)?;
        let [r, c] = nums[..] else {
            return Err(TextError {
                line,
                reason: "expected `rows cols`".into(),
            });
        };
        if (r, c) != (target.dim(x), source.dim(x)) {
            return Err(TextError {
                line,
                reason: "block shape does not match the modules".into(),
            });
        }
        blocks.insert(x, lines.matrix(r, c)?);
    }
    Ok(Morphism::from_blocks(&source, &target, &blocks))
}
