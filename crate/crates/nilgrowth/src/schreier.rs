//! Schreier graphs of the finite quotient, simple cycles, and loop-erasure.
//!
//! The kernel is normal in every registry group, so the Schreier graph of the
//! coset space is a Cayley graph of the finite quotient; in particular a word
//! labels a simple cycle at one vertex iff it does at every vertex, and
//! "simple cycle" is a property of the word alone.

use crate::group::{FiniteElement, GroupDescriptor, GroupElement};
use crate::word::{evaluate, GenSet, Word};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchreierError {
    #[error("the walk does not return to the base coset (element not in the kernel)")]
    NotInSubgroup,
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

/// Labeled graph on the cosets of the kernel; vertex 0 is the base coset.
#[derive(Debug, Clone)]
pub struct SchreierGraph {
    /// `edges[v][letter]` is the vertex reached from `v` by that letter.
    edges: Vec<Vec<usize>>,
}

impl SchreierGraph {
    pub fn vertex_count(&self) -> usize {
        self.edges.len()
    }

    pub fn step(&self, v: usize, letter: usize) -> usize {
        self.edges[v][letter]
    }

    /// Walk a whole word from `v`.
    pub fn walk(&self, v: usize, word: &Word) -> usize {
        word.letters().fold(v, |u, l| self.step(u, l))
    }
}

/// Build the coset graph: `edge(v, s) = v * coset(s)`.
pub fn build_graph(desc: &GroupDescriptor, gens: &GenSet) -> SchreierGraph {
    let f = desc.finite();
    let edges = (0..f.size())
        .map(|v| {
            gens.letters()
                .iter()
                .map(|l| f.mul(FiniteElement(v), desc.coset(&l.element)).0)
                .collect()
        })
        .collect();
    SchreierGraph { edges }
}

/// All words labeling simple cycles at the base vertex: the prefix walk
/// visits pairwise-distinct vertices and returns to the base exactly at the
/// end. Enumerated by depth-first search in letter order; distinct words are
/// distinct cycles, rotations included.
pub fn simple_cycles(graph: &SchreierGraph, gens: &GenSet) -> Vec<Word> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    let mut visited = vec![false; graph.vertex_count()];
    visited[0] = true;
    cycle_dfs(graph, gens.len(), 0, &mut prefix, &mut visited, &mut out);
    out
}

fn cycle_dfs(
    graph: &SchreierGraph,
    n_letters: usize,
    v: usize,
    prefix: &mut Vec<usize>,
    visited: &mut Vec<bool>,
    out: &mut Vec<Word>,
) {
    for l in 0..n_letters {
        let w = graph.step(v, l);
        if w == 0 {
            prefix.push(l);
            out.push(Word::from_letters(prefix));
            prefix.pop();
        } else if !visited[w] {
            visited[w] = true;
            prefix.push(l);
            cycle_dfs(graph, n_letters, w, prefix, visited, out);
            prefix.pop();
            visited[w] = false;
        }
    }
}

/// All words labeling vertex-simple paths from the base (the empty path
/// included), in depth-first letter order.
pub fn simple_paths(graph: &SchreierGraph, gens: &GenSet) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut prefix = Vec::new();
    let mut visited = vec![false; graph.vertex_count()];
    visited[0] = true;
    path_dfs(graph, gens.len(), 0, &mut prefix, &mut visited, &mut out);
    out
}

fn path_dfs(
    graph: &SchreierGraph,
    n_letters: usize,
    v: usize,
    prefix: &mut Vec<usize>,
    visited: &mut Vec<bool>,
    out: &mut Vec<Word>,
) {
    for l in 0..n_letters {
        let w = graph.step(v, l);
        if !visited[w] {
            visited[w] = true;
            prefix.push(l);
            out.push(Word::from_letters(prefix));
            path_dfs(graph, n_letters, w, prefix, visited, out);
            prefix.pop();
            visited[w] = false;
        }
    }
}

/// A generator of the kernel: the conjugate `t u t^-1` of a simple cycle `u`
/// by a simple path `t`, with cost `l(u)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XLetter {
    pub path: Word,
    pub cycle: Word,
    pub cost: u64,
    pub element: GroupElement,
}

impl XLetter {
    fn new(
        path: Word,
        cycle: Word,
        gens: &GenSet,
        desc: &GroupDescriptor,
    ) -> Result<XLetter, SchreierError> {
        let t = evaluate(&path, gens, desc)?;
        let u = evaluate(&cycle, gens, desc)?;
        let element = desc.mul(&desc.mul(&t, &u)?, &desc.inv(&t)?)?;
        debug_assert!(desc.coset(&element).is_identity());
        let cost = cycle.letter_len();
        Ok(XLetter {
            path,
            cycle,
            cost,
            element,
        })
    }

    pub fn display(&self, gens: &GenSet) -> String {
        if self.path.is_empty() {
            format!("[{}]", self.cycle.display(gens))
        } else {
            format!("[{} | {}]", self.path.display(gens), self.cycle.display(gens))
        }
    }
}

/// The full conjugate generating set `X(S)`: every (simple path, simple
/// cycle) pair. Cycle words are vertex-independent, so all pairs occur.
pub fn x_of_s(
    graph: &SchreierGraph,
    gens: &GenSet,
    desc: &GroupDescriptor,
) -> Result<Vec<XLetter>, SchreierError> {
    let paths = simple_paths(graph, gens);
    let cycles = simple_cycles(graph, gens);
    let mut out = Vec::with_capacity(paths.len() * cycles.len());
    for t in &paths {
        for u in &cycles {
            out.push(XLetter::new(t.clone(), u.clone(), gens, desc)?);
        }
    }
    out.dedup_by(|a, b| a.path == b.path && a.cycle == b.cycle);
    Ok(out)
}

/// Loop-erasure decomposition of a word whose walk returns to the base coset.
///
/// A stack holds the current simple path from the base. Each letter extends
/// it; when the new vertex is already on the path, the enclosed segment pops
/// off as a simple cycle `u` based at that vertex and the remaining prefix is
/// its conjugator `t`. Total cost of the output equals the plain length of
/// `w`, and the product of the emitted elements is the element of `w`.
pub fn loop_erase(
    word: &Word,
    graph: &SchreierGraph,
    gens: &GenSet,
    desc: &GroupDescriptor,
) -> Result<Vec<XLetter>, SchreierError> {
    let mut path_vertices = vec![0usize];
    let mut path_letters: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for l in word.letters() {
        let v = *path_vertices.last().unwrap();
        let w = graph.step(v, l);
        path_letters.push(l);
        if let Some(at) = path_vertices.iter().position(|&u| u == w) {
            let cycle_letters = path_letters.split_off(at);
            path_vertices.truncate(at + 1);
            out.push(XLetter::new(
                Word::from_letters(&path_letters),
                Word::from_letters(&cycle_letters),
                gens,
                desc,
            )?);
        } else {
            path_vertices.push(w);
        }
    }
    if path_letters.is_empty() {
        Ok(out)
    } else {
        Err(SchreierError::NotInSubgroup)
    }
}
