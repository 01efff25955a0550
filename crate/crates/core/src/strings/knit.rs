//! Knitting a component of the stable Auslander-Reiten quiver.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write;
use std::sync::Arc;

use super::{ar_sequence, tau, ArSequence, StringWord, StringsError};
use crate::field::Scalar;
use crate::repetitive::{RVertex, Repetitive};
use crate::stable::{classify_irreducible, IrredClass, Universe};

/// One mesh `τw → (middle) → w'`, all words canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mesh {
    pub start: StringWord,
    pub middle: Vec<StringWord>,
    pub end: StringWord,
    pub projective: Option<RVertex>,
}

/// An irreducible map between string modules with its class, or the reason
/// classification failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: StringWord,
    pub to: StringWord,
    pub class: Result<IrredClass, String>,
}

#[derive(Clone, Debug)]
pub struct ArComponent {
    pub nodes: BTreeSet<StringWord>,
    pub meshes: Vec<Mesh>,
    pub edges: Vec<Edge>,
    /// Edges met twice with different classes.
    pub conflicts: Vec<(StringWord, StringWord)>,
}

impl ArComponent {
    /// Checks the local shape of a `ZA∞` (or `ZA_n`) component on the nodes
    /// whose meshes on both sides were knitted: at most two arrows in and
    /// out, equally many of each. Returns the number of such nodes with one
    /// arrow (the mouth) and the violations.
    pub fn valency_report(&self) -> (usize, Vec<String>) {
        let mut out_deg: BTreeMap<&StringWord, usize> = BTreeMap::new();
        let mut in_deg: BTreeMap<&StringWord, usize> = BTreeMap::new();
        for m in &self.meshes {
            out_deg.insert(&m.start, m.middle.len());
            in_deg.insert(&m.end, m.middle.len());
        }
        let mut mouth = 0;
        let mut bad = Vec::new();
        for (w, &o) in &out_deg {
            let Some(&i) = in_deg.get(w) else { continue };
            if i != o || !(1..=2).contains(&o) {
                bad.push(format!("{w:?}: {i} in, {o} out"));
            } else if o == 1 {
                mouth += 1;
            }
        }
        (mouth, bad)
    }

    /// One line per edge: `from -> to : class`.
    pub fn table(&self, rep: &Repetitive) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let class = match &e.class {
                Ok(c) => c.to_string(),
                Err(r) => format!("unclassified ({r})"),
            };
            let _ = writeln!(out, "{} -> {} : {}", e.from.display(rep), e.to.display(rep), class);
        }
        out
    }
}

/// Breadth-first knitting from `seed`, computing at most `steps` meshes whose
/// start lies in degrees `[lo, hi]`. Both the sequence starting at a node and
/// the one ending at it are explored.
pub fn knit_component<F: Scalar>(
    rep: &Arc<Repetitive>,
    seed: &StringWord,
    window: (i64, i64),
    steps: usize,
    universe: Option<&Universe<F>>,
) -> Result<ArComponent, StringsError> {
    let inside = |w: &StringWord| {
        let (a, b) = w.degree_range(rep);
        window.0 <= a && b <= window.1
    };
    let seed = seed.canonical(rep);
    let mut nodes = BTreeSet::from([seed.clone()]);
    let mut queue = VecDeque::from([seed]);
    let mut done = BTreeSet::new();
    let mut meshes = Vec::new();
    let mut labels: BTreeMap<(StringWord, StringWord), Result<IrredClass, String>> = BTreeMap::new();
    let mut order = Vec::new();
    let mut conflicts = Vec::new();
    while let Some(w) = queue.pop_front() {
        if meshes.len() >= steps {
            break;
        }
        let mut next = Vec::new();
        if done.insert(w.clone()) {
            let seq: ArSequence<F> = ar_sequence(rep, &w)?;
            let mesh = Mesh {
                start: w.clone(),
                middle: seq.middle_words.iter().map(|v| v.canonical(rep)).collect(),
                end: seq.end.canonical(rep),
                projective: seq.projective,
            };
            for (k, m) in mesh.middle.iter().enumerate() {
                let pairs = [
                    ((w.clone(), m.clone()), seq.h_component(k)),
                    ((m.clone(), mesh.end.clone()), seq.h2_component(k)),
                ];
                for (key, map) in pairs {
                    let class = classify_irreducible(&map, universe).map_err(|e| e.to_string());
                    match labels.get(&key) {
                        Some(old) if *old != class => conflicts.push(key.clone()),
                        Some(_) => {}
                        None => {
                            order.push(key.clone());
                            labels.insert(key, class);
                        }
                    }
                }
                next.push(m.clone());
            }
            next.push(mesh.end.clone());
            meshes.push(mesh);
        }
        if let Some(t) = tau(rep, &w) {
            next.push(t);
        }
        for v in next {
            if inside(&v) && nodes.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    let edges = order
        .into_iter()
        .map(|key| {
            let class = labels[&key].clone();
            Edge {
                from: key.0,
                to: key.1,
                class,
            }
        })
        .collect();
    Ok(ArComponent {
        nodes,
        meshes,
        edges,
        conflicts,
    })
}

/// Graphviz rendering: solid edges for irreducible maps, dashed for `τ`.
pub fn export_dot(rep: &Repetitive, c: &ArComponent) -> String {
    let name = |w: &StringWord| format!("\"{}\"", w.display(rep));
    let mut out = String::from("digraph ar {\n  rankdir=LR;\n");
    for w in &c.nodes {
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        for x in w.vertices(rep) {
            *dims.entry(x.z).or_default() += 1;
        }
        let dims: Vec<String> = dims.iter().map(|(z, d)| format!("{z}:{d}")).collect();
        let _ = writeln!(
            out,
            "  {} [label=\"{}\\n[{}]\"];",
            name(w),
            w.display(rep),
            dims.join(" ")
        );
    }
    // one rank per τ-orbit
    let mut orbit: BTreeMap<&StringWord, &StringWord> = BTreeMap::new();
    for m in &c.meshes {
        orbit.insert(&m.end, &m.start);
    }
    let mut ranks: BTreeMap<&StringWord, Vec<&StringWord>> = BTreeMap::new();
    for w in &c.nodes {
        let mut r = w;
        let mut seen = BTreeSet::new();
        while let Some(&t) = orbit.get(r) {
            if !seen.insert(r) {
                break;
            }
            r = t;
        }
        ranks.entry(r).or_default().push(w);
    }
    for members in ranks.values().filter(|m| m.len() > 1) {
        let names: Vec<String> = members.iter().map(|w| name(w)).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", names.join("; "));
    }
    for e in &c.edges {
        let label = match &e.class {
            Ok(cl) => cl.to_string(),
            Err(_) => "?".into(),
        };
        let _ = writeln!(out, "  {} -> {} [label=\"{}\"];", name(&e.from), name(&e.to), label);
    }
    for m in &c.meshes {
        let _ = writeln!(out, "  {} -> {} [style=dashed];", name(&m.end), name(&m.start));
    }
    out.push_str("}\n");
    out
}
