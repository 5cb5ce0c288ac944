//! Design isomorphism by colour refinement and backtracking.
//!
//! Each design is viewed as its bipartite point/block incidence graph. Both
//! graphs are refined together with one shared signature-to-colour table, so
//! equal colours mean the same thing on both sides and any class-size
//! mismatch prunes the branch. Leaves are validated before being returned.

use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;

use super::IncidenceStructure;

/// A point bijection and the block bijection it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    /// Point `x` of the first design maps to `points[x]` of the second.
    pub points: Vec<usize>,
    /// Block `j` of the first design maps to `blocks[j]` of the second.
    pub blocks: Vec<usize>,
}

impl Isomorphism {
    /// Rechecks the witness from scratch.
    pub fn is_valid(&self, d1: &IncidenceStructure, d2: &IncidenceStructure) -> bool {
        if d1.v() != d2.v() || d1.b() != d2.b() || self.points.len() != d1.v() || self.blocks.len() != d1.b() {
            return false;
        }
        let bijective = |m: &[usize], n: usize| {
            let mut seen = vec![false; n];
            m.iter().all(|&y| y < n && !std::mem::replace(&mut seen[y], true))
        };
        if !bijective(&self.points, d1.v()) || !bijective(&self.blocks, d1.b()) {
            return false;
        }
        d1.blocks().iter().enumerate().all(|(j, b)| {
            let mut img: Vec<usize> = b.iter().map(|&x| self.points[x]).collect();
            img.sort_unstable();
            img == d2.block(self.blocks[j])
        })
    }
}

/// Incidence graph: vertices `0..v` are points, `v..v+b` blocks.
struct Graph {
    v: usize,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    fn new(d: &IncidenceStructure) -> Self {
        let v = d.v();
        let mut adj = vec![Vec::new(); v + d.b()];
        for (j, b) in d.blocks().iter().enumerate() {
            for &x in b {
                adj[x].push(v + j);
                adj[v + j].push(x);
            }
        }
        Graph { v, adj }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }
}

/// Per point `x`: the sorted multiset over `y != x` of
/// (blocks through both, size of the intersection of those blocks).
fn pair_invariant(d: &IncidenceStructure) -> Vec<Vec<(usize, usize)>> {
    let rows = d.point_bits();
    let all_points = {
        let mut s = FixedBitSet::with_capacity(d.v());
        s.insert_range(..);
        s
    };
    (0..d.v())
        .map(|x| {
            let mut sig: Vec<(usize, usize)> = (0..d.v())
                .filter(|&y| y != x)
                .map(|y| {
                    let mut common = rows[x].clone();
                    common.intersect_with(&rows[y]);
                    let mut meet = all_points.clone();
                    for j in common.ones() {
                        meet.intersect_with(d.block_bits(j));
                    }
                    (common.count_ones(..), meet.count_ones(..))
                })
                .collect();
            sig.sort_unstable();
            sig
        })
        .collect()
}

type Colouring = Vec<usize>;

type Signature = (u8, Vec<(usize, usize)>, Vec<(usize, usize)>);

/// Initial colours from the point and block (dual) pair invariants of the
/// design and of its complement. Complementing is canonical, so this stays an
/// invariant, and it separates designs whose own pair patterns are uniform.
fn initial_colours(d1: &IncidenceStructure, d2: &IncidenceStructure) -> (Colouring, Colouring) {
    let sig = |d: &IncidenceStructure| -> Vec<Signature> {
        let side = |tag: u8, d: &IncidenceStructure| {
            let own = pair_invariant(d);
            let comp = pair_invariant(&super::complement(d));
            own.into_iter().zip(comp).map(move |(a, b)| (tag, a, b))
        };
        side(0, d).chain(side(1, &d.dual())).collect()
    };
    let (s1, s2) = (sig(d1), sig(d2));
    let table: BTreeMap<&Signature, usize> = s1
        .iter()
        .chain(&s2)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    (s1.iter().map(|s| table[s]).collect(), s2.iter().map(|s| table[s]).collect())
}

fn histogram(c: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &x in c {
        *h.entry(x).or_insert(0) += 1;
    }
    h
}

/// Refines both colourings to a joint equitable partition. Returns `false`
/// as soon as the two sides disagree on some class size.
fn refine(g1: &Graph, g2: &Graph, c1: &mut Colouring, c2: &mut Colouring) -> bool {
    let mut classes = histogram(c1).len();
    loop {
        if histogram(c1) != histogram(c2) {
            return false;
        }
        let sig = |g: &Graph, c: &Colouring| -> Vec<(usize, Vec<usize>)> {
            (0..g.n())
                .map(|u| {
                    let mut nb: Vec<usize> = g.adj[u].iter().map(|&w| c[w]).collect();
                    nb.sort_unstable();
                    (c[u], nb)
                })
                .collect()
        };
        let (s1, s2) = (sig(g1, c1), sig(g2, c2));
        // Sorted keys: new colours respect the old colour order.
        let table: BTreeMap<&(usize, Vec<usize>), usize> = s1
            .iter()
            .chain(&s2)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        *c1 = s1.iter().map(|s| table[s]).collect();
        *c2 = s2.iter().map(|s| table[s]).collect();
        let now = table.len();
        if now == classes {
            return histogram(c1) == histogram(c2);
        }
        classes = now;
    }
}

fn search(
    g1: &Graph,
    g2: &Graph,
    c1: Colouring,
    c2: Colouring,
    d1: &IncidenceStructure,
    d2: &IncidenceStructure,
) -> Option<Isomorphism> {
    let hist = histogram(&c1);
    // Smallest nontrivial class, first vertex of it in the first graph.
    let target = hist
        .iter()
        .filter(|(_, &n)| n > 1)
        .min_by_key(|(&col, &n)| (n, col))
        .map(|(&col, _)| col);
    let Some(col) = target else {
        return leaf(g1, &c1, &c2, d1, d2);
    };
    let x = c1.iter().position(|&c| c == col).expect("class is nonempty");
    let fresh = hist.keys().next_back().map_or(0, |m| m + 1);
    for y in (0..g2.n()).filter(|&y| c2[y] == col) {
        let (mut n1, mut n2) = (c1.clone(), c2.clone());
        n1[x] = fresh;
        n2[y] = fresh;
        if refine(g1, g2, &mut n1, &mut n2) {
            if let Some(iso) = search(g1, g2, n1, n2, d1, d2) {
                return Some(iso);
            }
        }
    }
    None
}

fn leaf(
    g1: &Graph,
    c1: &Colouring,
    c2: &Colouring,
    d1: &IncidenceStructure,
    d2: &IncidenceStructure,
) -> Option<Isomorphism> {
    let mut by_colour = vec![0; c2.len()];
    for (u, &c) in c2.iter().enumerate() {
        by_colour[c] = u;
    }
    let map: Vec<usize> = c1.iter().map(|&c| by_colour[c]).collect();
    let v = g1.v;
    if map[..v].iter().any(|&y| y >= v) {
        return None;
    }
    let iso = Isomorphism {
        points: map[..v].to_vec(),
        blocks: map[v..].iter().map(|&y| y - v).collect(),
    };
    iso.is_valid(d1, d2).then_some(iso)
}

/// An isomorphism from `d1` to `d2`, if one exists.
///
/// The witness is always revalidated before it is returned.
pub fn are_isomorphic(d1: &IncidenceStructure, d2: &IncidenceStructure) -> Option<Isomorphism> {
    if d1.v() != d2.v() || d1.b() != d2.b() {
        return None;
    }
    let mut sizes1: Vec<usize> = d1.blocks().iter().map(Vec::len).collect();
    let mut sizes2: Vec<usize> = d2.blocks().iter().map(Vec::len).collect();
    sizes1.sort_unstable();
    sizes2.sort_unstable();
    if sizes1 != sizes2 {
        return None;
    }
    let (g1, g2) = (Graph::new(d1), Graph::new(d2));
    let (mut c1, mut c2) = initial_colours(d1, d2);
    if !refine(&g1, &g2, &mut c1, &mut c2) {
        return None;
    }
    let iso = search(&g1, &g2, c1, c2, d1, d2)?;
    Some(iso)
}
