//! Kneser graphs `K(n,k)` and their clique covers.
//!
//! Vertices are the k-subsets of `[n]`, adjacent when disjoint, so a clique is
//! a family of pairwise disjoint coalitions. A clique cover groups all
//! coalitions of one size into such families; its minimum size `ξ(n,k)` is
//! the number of grouped best-reply tests the k-lateral criterion needs.
//!
//! `ξ(n,1) = 1`: all singletons are pairwise disjoint, so `K(n,1)` is complete
//! and a single class covers it.

use std::collections::BTreeSet;

use num_integer::binomial;

use crate::error::{Error, Result};
use crate::game::Coalition;

/// Largest `C(n,k)` accepted by [`build_kneser`] and [`greedy_cover`].
pub const DEFAULT_VERTEX_BUDGET: usize = 10_000;

/// Largest `n` accepted by [`exact_cover`].
pub const DEFAULT_EXACT_MAX_N: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KneserGraph {
    n: usize,
    k: usize,
    vertices: Vec<Coalition>,
    adjacency: Vec<Vec<bool>>,
}

impl KneserGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[Coalition] {
        &self.vertices
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency
            .iter()
            .enumerate()
            .map(|(a, row)| row[a + 1..].iter().filter(|&&e| e).count())
            .sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertices.len())
            .flat_map(move |a| (a + 1..self.vertices.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| self.adjacency[a][b])
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::invalid(format!(
            "Kneser graph needs 1 <= k <= n, got n={n}, k={k}"
        )))
    } else {
        Ok(())
    }
}

fn vertex_count(n: usize, k: usize, budget: usize) -> Result<usize> {
    check_nk(n, k)?;
    let count = binomial(n as u128, k as u128);
    if count > budget as u128 {
        return Err(Error::limit(format!("vertices of K({n},{k})"), count, budget as u128));
    }
    Ok(count as usize)
}

pub fn build_kneser(n: usize, k: usize) -> Result<KneserGraph> {
    build_kneser_with_budget(n, k, DEFAULT_VERTEX_BUDGET)
}

pub fn build_kneser_with_budget(n: usize, k: usize, budget: usize) -> Result<KneserGraph> {
    vertex_count(n, k, budget)?;
    let vertices: Vec<Coalition> = Coalition::all(n, k).collect();
    let adjacency = vertices
        .iter()
        .map(|a| vertices.iter().map(|b| a.is_disjoint(b)).collect())
        .collect();
    Ok(KneserGraph {
        n,
        k,
        vertices,
        adjacency,
    })
}

/// A partition of all k-subsets of `[n]` into classes of pairwise disjoint
/// subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KneserCover {
    n: usize,
    k: usize,
    classes: Vec<Vec<Coalition>>,
}

impl KneserCover {
    /// Wraps classes as given, normalized to lexicographic order. Use
    /// [`KneserCover::validate`] before trusting a hand-built cover.
    pub fn from_classes(n: usize, k: usize, mut classes: Vec<Vec<Coalition>>) -> Self {
        for class in &mut classes {
            class.sort();
        }
        classes.sort();
        KneserCover { n, k, classes }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn classes(&self) -> &[Vec<Coalition>] {
        &self.classes
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        check_nk(self.n, self.k)?;
        let mut seen = BTreeSet::new();
        for (c, class) in self.classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::invalid(format!("cover class {} is empty", c + 1)));
            }
            for (a, coalition) in class.iter().enumerate() {
                if coalition.len() != self.k || coalition.members().iter().any(|&p| p >= self.n) {
                    return Err(Error::invalid(format!(
                        "{coalition} is not a {}-subset of [{}]",
                        self.k, self.n
                    )));
                }
                if !seen.insert(coalition.clone()) {
                    return Err(Error::invalid(format!("{coalition} appears in more than one place")));
                }
                if let Some(other) = class[..a].iter().find(|o| !o.is_disjoint(coalition)) {
                    return Err(Error::invalid(format!(
                        "class {} holds intersecting subsets {other} and {coalition}",
                        c + 1
                    )));
                }
            }
        }
        let total = binomial(self.n, self.k);
        if seen.len() != total {
            return Err(Error::invalid(format!(
                "cover holds {} of the {total} subsets",
                seen.len()
            )));
        }
        Ok(())
    }
}

/// `⌈C(n,k) / ⌊n/k⌋⌉`: a clique holds at most `⌊n/k⌋` disjoint k-subsets.
pub fn lower_bound(n: usize, k: usize) -> Result<usize> {
    check_nk(n, k)?;
    Ok(binomial(n, k).div_ceil(n / k))
}

/// First-fit cover: each vertex, in lexicographic order, joins the first class
/// it is disjoint from.
pub fn greedy_cover(n: usize, k: usize) -> Result<KneserCover> {
    greedy_cover_with_budget(n, k, DEFAULT_VERTEX_BUDGET)
}

pub fn greedy_cover_with_budget(n: usize, k: usize, budget: usize) -> Result<KneserCover> {
    vertex_count(n, k, budget)?;
    let mut classes: Vec<Vec<Coalition>> = Vec::new();
    for v in Coalition::all(n, k) {
        match classes.iter_mut().find(|c| c.iter().all(|u| u.is_disjoint(&v))) {
            Some(class) => class.push(v),
            None => classes.push(vec![v]),
        }
    }
    Ok(KneserCover::from_classes(n, k, classes))
}

/// Why an exact cover is minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// The cover has as many classes as the counting lower bound.
    MeetsLowerBound,
    /// Branch and bound visited `nodes` nodes without finding a smaller cover.
    Exhausted { nodes: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCover {
    pub cover: KneserCover,
    pub certificate: Certificate,
}

/// Minimum clique cover, certified by exhausting a branch-and-bound search.
pub fn exact_cover(n: usize, k: usize) -> Result<KneserCover> {
    exact_cover_with_limit(n, k, DEFAULT_EXACT_MAX_N).map(|e| e.cover)
}

pub fn exact_cover_certified(n: usize, k: usize) -> Result<ExactCover> {
    exact_cover_with_limit(n, k, DEFAULT_EXACT_MAX_N)
}

pub fn exact_cover_with_limit(n: usize, k: usize, max_n: usize) -> Result<ExactCover> {
    check_nk(n, k)?;
    if n > max_n {
        return Err(Error::ResourceLimit {
            what: format!("exact clique cover of K({n},{k})"),
            needed: n as u128,
            bound: max_n as u128,
            hint: Some("use greedy_cover for an upper bound".into()),
        });
    }
    let vertices: Vec<u32> = Coalition::all(n, k)
        .map(|c| c.members().iter().fold(0u32, |m, &p| m | 1 << p))
        .collect();
    let greedy = greedy_cover(n, k)?;
    let mut search = Search {
        vertices: &vertices,
        capacity: n / k,
        floor: lower_bound(n, k)?,
        best: greedy
            .classes
            .iter()
            .map(|class| class.iter().map(|c| index_of(&vertices, c)).collect())
            .collect(),
        current: Vec::new(),
        nodes: 0,
    };
    if search.best.len() > search.floor {
        let mut covered = vec![false; vertices.len()];
        search.branch(&mut covered, vertices.len());
    }
    let coalitions: Vec<Coalition> = Coalition::all(n, k).collect();
    let classes = search
        .best
        .iter()
        .map(|class| class.iter().map(|&v| coalitions[v].clone()).collect())
        .collect();
    let certificate = if search.best.len() == search.floor {
        Certificate::MeetsLowerBound
    } else {
        Certificate::Exhausted { nodes: search.nodes }
    };
    Ok(ExactCover {
        cover: KneserCover::from_classes(n, k, classes),
        certificate,
    })
}

fn index_of(vertices: &[u32], c: &Coalition) -> usize {
    let mask = c.members().iter().fold(0u32, |m, &p| m | 1 << p);
    vertices.iter().position(|&v| v == mask).expect("coalition is a vertex")
}

struct Search<'a> {
    vertices: &'a [u32],
    capacity: usize,
    floor: usize,
    best: Vec<Vec<usize>>,
    current: Vec<Vec<usize>>,
    nodes: u64,
}

impl Search<'_> {
    /// Returns true once a cover meeting the global lower bound is found.
    fn branch(&mut self, covered: &mut [bool], remaining: usize) -> bool {
        self.nodes += 1;
        if remaining == 0 {
            if self.current.len() < self.best.len() {
                self.best = self.current.clone();
            }
            return self.best.len() <= self.floor;
        }
        // Degrees inside the uncovered subgraph. An isolated vertex needs a
        // class of its own.
        let open: Vec<usize> = (0..self.vertices.len()).filter(|&v| !covered[v]).collect();
        let degree = |v: usize| {
            open.iter()
                .filter(|&&u| self.vertices[u] & self.vertices[v] == 0)
                .count()
        };
        let degrees: Vec<usize> = open.iter().map(|&v| degree(v)).collect();
        let isolated = degrees.iter().filter(|&&d| d == 0).count();
        let bound = isolated + (remaining - isolated).div_ceil(self.capacity);
        if self.current.len() + bound >= self.best.len() {
            return false;
        }
        // Some optimal cover gives any uncovered vertex a class that is a
        // maximal clique among the uncovered vertices; branch on the one with
        // the fewest options.
        let pick = (0..open.len()).min_by_key(|&i| (degrees[i], i)).expect("remaining > 0");
        let first = open[pick];
        let candidates: Vec<usize> = open
            .iter()
            .copied()
            .filter(|&v| self.vertices[v] & self.vertices[first] == 0)
            .collect();
        let mut cliques = Vec::new();
        maximal_cliques(
            self.vertices,
            &candidates,
            &[],
            self.vertices[first],
            &mut vec![first],
            &mut cliques,
        );
        for clique in cliques {
            for &v in &clique {
                covered[v] = true;
            }
            self.current.push(clique);
            let done = self.branch(covered, remaining - self.current.last().unwrap().len());
            let clique = self.current.pop().unwrap();
            for &v in &clique {
                covered[v] = false;
            }
            if done {
                return true;
            }
        }
        false
    }
}

/// Bron–Kerbosch over the Kneser adjacency: `clique` has member union
/// `used`, `open` are vertices that may still join, `excluded` are vertices
/// already tried at this level. Reports every maximal extension.
fn maximal_cliques(
    vertices: &[u32],
    open: &[usize],
    excluded: &[usize],
    used: u32,
    clique: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if open.is_empty() {
        if excluded.is_empty() {
            out.push(clique.clone());
        }
        return;
    }
    let mut excluded = excluded.to_vec();
    for (i, &v) in open.iter().enumerate() {
        let mask = used | vertices[v];
        let fits = |u: &&usize| vertices[**u] & mask == 0;
        let next_open: Vec<usize> = open[i + 1..].iter().filter(fits).copied().collect();
        let next_excluded: Vec<usize> = excluded.iter().filter(fits).copied().collect();
        clique.push(v);
        maximal_cliques(vertices, &next_open, &next_excluded, mask, clique, out);
        clique.pop();
        excluded.push(v);
    }
}
