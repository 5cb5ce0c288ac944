//! Permutation groups of small degree.
//!
//! Permutations act on the right: `x^(gh) = (x^g)^h`, and `g.then(&h)` is
//! that product. Group order and membership go through a deterministic
//! Schreier-Sims stabilizer chain with Schreier vectors.

pub mod groups;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::designs::{flags, IncidenceStructure};
use crate::geometry::{Matrix, PrimeField, ProjectivePoint};

/// Largest degree the chain routines accept.
pub const MAX_DEGREE: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("images do not form a permutation of 0..{0}")]
    NotBijective(usize),
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: usize, found: usize },
    #[error("degree {0} exceeds the limit of {MAX_DEGREE}")]
    TooLarge(usize),
    #[error("generator {generator} maps point {point} outside the point set")]
    LeavesPointSet { generator: usize, point: usize },
    #[error("generator {generator} maps block {block} to a set that is not a block")]
    IncompatibleBlocks { generator: usize, block: usize },
    #[error("action is not transitive")]
    NotTransitive,
    #[error("point action has degree {points}, design has v = {v}")]
    DesignMismatch { points: usize, v: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n || std::mem::replace(&mut seen[y], true) {
                return Err(GroupError::NotBijective(n));
            }
        }
        Ok(Permutation { images })
    }

    /// Product of cycles, applied left to right.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, GroupError> {
        let mut p = Permutation::identity(n);
        for c in cycles {
            let mut img: Vec<usize> = (0..n).collect();
            for (i, &x) in c.iter().enumerate() {
                if x >= n {
                    return Err(GroupError::NotBijective(n));
                }
                img[x] = c[(i + 1) % c.len()];
            }
            p = p.then(&Permutation::from_images(img)?);
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(x, &y)| *x == y).count()
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                c.push(x);
                x = self.images[x];
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// A group given by generators acting on `0..degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationAction {
    degree: usize,
    generators: Vec<Permutation>,
}

impl PermutationAction {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, GroupError> {
        for (index, g) in generators.iter().enumerate() {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch { index, expected: degree, found: g.degree() });
            }
        }
        Ok(PermutationAction { degree, generators })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }
}

/// Each matrix becomes `x ↦ normal form of M·x` on `points`.
///
/// Scalars act trivially, so the action is that of the projective image.
pub fn induce(
    field: &PrimeField,
    matrices: &[Matrix],
    points: &[ProjectivePoint],
) -> Result<PermutationAction, GroupError> {
    let index: HashMap<&ProjectivePoint, usize> = points.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut gens = Vec::with_capacity(matrices.len());
    for (g, m) in matrices.iter().enumerate() {
        let mut images = Vec::with_capacity(points.len());
        for (i, x) in points.iter().enumerate() {
            let y = ProjectivePoint::from_vector(field, &m.apply(field, x.coords()))
                .map_err(|_| GroupError::LeavesPointSet { generator: g, point: i })?;
            let j = *index.get(&y).ok_or(GroupError::LeavesPointSet { generator: g, point: i })?;
            images.push(j);
        }
        gens.push(Permutation::from_images(images).map_err(|_| GroupError::LeavesPointSet { generator: g, point: 0 })?);
    }
    PermutationAction::new(points.len(), gens)
}

/// The orbit of `seed`, sorted.
pub fn orbit(action: &PermutationAction, seed: usize) -> Vec<usize> {
    orbit_under(action.degree(), action.generators(), seed)
}

fn orbit_under(degree: usize, gens: &[Permutation], seed: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[seed] = true;
    let mut queue = VecDeque::from([seed]);
    let mut out = vec![seed];
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// All orbits, ordered by smallest element.
pub fn orbits(action: &PermutationAction) -> Vec<Vec<usize>> {
    orbits_under(action.degree(), action.generators())
}

fn orbits_under(degree: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut done = vec![false; degree];
    let mut out = Vec::new();
    for x in 0..degree {
        if !done[x] {
            let o = orbit_under(degree, gens, x);
            for &y in &o {
                done[y] = true;
            }
            out.push(o);
        }
    }
    out
}

pub fn is_transitive(action: &PermutationAction) -> bool {
    action.degree() <= 1 || orbit(action, 0).len() == action.degree()
}

/// One level of a stabilizer chain.
#[derive(Debug, Clone)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    inv: Vec<Permutation>,
    /// `sv[x] = Some(i)`: `x = y^gens[i]` for an earlier orbit point `y`.
    /// The base point carries `usize::MAX`.
    sv: Vec<Option<usize>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut l = Level { base, gens: Vec::new(), inv: Vec::new(), sv: vec![None; degree], orbit: Vec::new() };
        l.rebuild();
        l
    }

    fn push(&mut self, g: Permutation) {
        self.inv.push(g.inverse());
        self.gens.push(g);
        self.rebuild();
    }

    fn rebuild(&mut self) {
        self.sv.iter_mut().for_each(|s| *s = None);
        self.sv[self.base] = Some(usize::MAX);
        self.orbit = vec![self.base];
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i];
            for (k, g) in self.gens.iter().enumerate() {
                let y = g.apply(x);
                if self.sv[y].is_none() {
                    self.sv[y] = Some(k);
                    self.orbit.push(y);
                }
            }
            i += 1;
        }
    }

    /// `u` with `base^u = x`.
    fn transversal(&self, x: usize) -> Permutation {
        let mut u = Permutation::identity(self.sv.len());
        let mut y = x;
        while y != self.base {
            let k = self.sv[y].expect("point lies in the orbit");
            u = self.gens[k].then(&u);
            y = self.inv[k].apply(y);
        }
        u
    }

    /// `h·u_x⁻¹` where `x = base^h`, or `None` if `x` is not in the orbit.
    fn strip(&self, mut h: Permutation) -> Option<Permutation> {
        let mut x = h.apply(self.base);
        self.sv[x]?;
        while x != self.base {
            let k = self.sv[x].expect("point lies in the orbit");
            h = h.then(&self.inv[k]);
            x = self.inv[k].apply(x);
        }
        Some(h)
    }
}

/// Base, strong generators and Schreier vectors for a permutation group.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// Builds the chain, starting the base with `prefix`.
    ///
    /// Without a prefix the base starts at the smallest moved point. New base
    /// points come from sifting residues: the start of the residue's longest
    /// cycle (smallest point on ties).
    pub fn new(action: &PermutationAction, prefix: &[usize]) -> Result<Self, GroupError> {
        let n = action.degree();
        if n > MAX_DEGREE {
            return Err(GroupError::TooLarge(n));
        }
        let gens: Vec<&Permutation> = action.generators().iter().filter(|g| !g.is_identity()).collect();
        let mut chain = StabilizerChain { degree: n, levels: Vec::new() };
        for &b in prefix {
            chain.levels.push(Level::new(b, n));
        }
        for g in gens {
            if chain.levels.iter().all(|l| g.apply(l.base) == l.base) {
                chain.levels.push(Level::new(new_base_point(g), n));
            }
            // g lies in every stabilizer up to the first base point it moves.
            for l in &mut chain.levels {
                l.push(g.clone());
                if g.apply(l.base) != l.base {
                    break;
                }
            }
        }
        chain.complete();
        Ok(chain)
    }

    /// Schreier-Sims closure: every Schreier generator at every level sifts.
    fn complete(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let level = i - 1;
            match self.find_residue(level) {
                Some((h, j)) => {
                    if j == self.levels.len() {
                        self.levels.push(Level::new(new_base_point(&h), self.degree));
                    }
                    for l in level + 1..=j {
                        self.levels[l].push(h.clone());
                    }
                    i = j + 1;
                }
                None => i -= 1,
            }
        }
    }

    /// First Schreier generator at `level` that does not sift through the
    /// levels below it, with its drop-out level.
    fn find_residue(&self, level: usize) -> Option<(Permutation, usize)> {
        let l = &self.levels[level];
        for &x in &l.orbit {
            let ux = l.transversal(x);
            for g in &l.gens {
                let y = g.apply(x);
                let uy = l.transversal(y);
                let s = ux.then(g).then(&uy.inverse());
                if s.is_identity() {
                    continue;
                }
                let (h, j) = self.sift(s, level + 1);
                if !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    /// Strips `h` through the levels from `from` on. Returns the residue and
    /// the level where it dropped out (`levels.len()` if it went through).
    fn sift(&self, mut h: Permutation, from: usize) -> (Permutation, usize) {
        for j in from..self.levels.len() {
            match self.levels[j].strip(h.clone()) {
                Some(next) => h = next,
                None => return (h, j),
            }
        }
        (h, self.levels.len())
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Basic orbit lengths.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * l.orbit.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && {
            let (h, j) = self.sift(g.clone(), 0);
            j == self.levels.len() && h.is_identity()
        }
    }

    /// Strong generators of the stabilizer of the first `depth` base points.
    pub fn stabilizer_generators(&self, depth: usize) -> &[Permutation] {
        self.levels.get(depth).map_or(&[], |l| &l.gens)
    }
}

fn new_base_point(g: &Permutation) -> usize {
    g.cycles()
        .into_iter()
        .max_by_key(|c| (c.len(), std::cmp::Reverse(c[0])))
        .map(|c| c[0])
        .expect("nonidentity permutation moves a point")
}

/// Exact order via a stabilizer chain.
pub fn group_order(action: &PermutationAction) -> Result<BigUint, GroupError> {
    Ok(StabilizerChain::new(action, &[])?.order())
}

/// Sorted orbit lengths of the stabilizer of `point`; their count is the rank
/// when the action is transitive.
pub fn stabilizer_orbit_sizes(action: &PermutationAction, point: usize) -> Result<Vec<usize>, GroupError> {
    let chain = StabilizerChain::new(action, &[point])?;
    let stab = chain.stabilizer_generators(1);
    let mut sizes: Vec<usize> = orbits_under(action.degree(), stab).iter().map(Vec::len).collect();
    sizes.sort_unstable();
    Ok(sizes)
}

/// Number of orbits of a point stabilizer in a transitive action.
pub fn rank(action: &PermutationAction) -> Result<usize, GroupError> {
    if !is_transitive(action) {
        return Err(GroupError::NotTransitive);
    }
    if action.degree() == 0 {
        return Ok(0);
    }
    Ok(stabilizer_orbit_sizes(action, 0)?.len())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            y = std::mem::replace(&mut self.0[y], r);
        }
        r
    }
}

/// The smallest block containing `a` and `b`, sorted.
pub fn minimal_block(action: &PermutationAction, a: usize, b: usize) -> Vec<usize> {
    let n = action.degree();
    let mut uf = UnionFind((0..n).collect());
    let mut queue = VecDeque::new();
    let (ra, rb) = (uf.find(a), uf.find(b));
    if ra != rb {
        uf.0[rb] = ra;
        queue.push_back((a, b));
    }
    while let Some((x, y)) = queue.pop_front() {
        for g in action.generators() {
            let (cx, cy) = (uf.find(g.apply(x)), uf.find(g.apply(y)));
            if cx != cy {
                uf.0[cy] = cx;
                queue.push_back((cx, cy));
            }
        }
    }
    let r = uf.find(a);
    (0..n).filter(|&x| uf.find(x) == r).collect()
}

/// No nontrivial block system. Errors on intransitive actions.
pub fn is_primitive(action: &PermutationAction) -> Result<bool, GroupError> {
    if !is_transitive(action) {
        return Err(GroupError::NotTransitive);
    }
    let n = action.degree();
    Ok((1..n).all(|b| minimal_block(action, 0, b).len() == n))
}

/// Block permutations induced by the point generators.
pub fn induce_block_action(action: &PermutationAction, d: &IncidenceStructure) -> Result<PermutationAction, GroupError> {
    if action.degree() != d.v() {
        return Err(GroupError::DesignMismatch { points: action.degree(), v: d.v() });
    }
    let index: HashMap<&[usize], usize> = d.blocks().iter().enumerate().map(|(j, b)| (b.as_slice(), j)).collect();
    let mut gens = Vec::with_capacity(action.generators().len());
    for (gi, g) in action.generators().iter().enumerate() {
        let mut images = Vec::with_capacity(d.b());
        for (j, b) in d.blocks().iter().enumerate() {
            let mut img: Vec<usize> = b.iter().map(|&x| g.apply(x)).collect();
            img.sort_unstable();
            let k = *index
                .get(img.as_slice())
                .ok_or(GroupError::IncompatibleBlocks { generator: gi, block: j })?;
            images.push(k);
        }
        let p = Permutation::from_images(images)
            .map_err(|_| GroupError::IncompatibleBlocks { generator: gi, block: 0 })?;
        gens.push(p);
    }
    PermutationAction::new(d.b(), gens)
}

/// Whether the simultaneous action is transitive on flags.
///
/// The pair of actions is checked first: generator `i` must carry every
/// block `B` onto block `blocks.generators()[i](B)`.
pub fn is_flag_transitive(
    points: &PermutationAction,
    d: &IncidenceStructure,
    blocks: &PermutationAction,
) -> Result<bool, GroupError> {
    if points.degree() != d.v() {
        return Err(GroupError::DesignMismatch { points: points.degree(), v: d.v() });
    }
    if blocks.generators().len() != points.generators().len() || blocks.degree() != d.b() {
        return Err(GroupError::IncompatibleBlocks { generator: 0, block: 0 });
    }
    for (gi, (g, h)) in points.generators().iter().zip(blocks.generators()).enumerate() {
        for (j, b) in d.blocks().iter().enumerate() {
            let mut img: Vec<usize> = b.iter().map(|&x| g.apply(x)).collect();
            img.sort_unstable();
            if img != d.block(h.apply(j)) {
                return Err(GroupError::IncompatibleBlocks { generator: gi, block: j });
            }
        }
    }
    let all = flags(d);
    let Some(&start) = all.first() else {
        return Ok(true);
    };
    let index: HashMap<(usize, usize), usize> = all.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut seen = vec![false; all.len()];
    seen[index[&start]] = true;
    let mut queue = VecDeque::from([start]);
    let mut count = 1;
    while let Some((x, b)) = queue.pop_front() {
        for (g, h) in points.generators().iter().zip(blocks.generators()) {
            let f = (g.apply(x), h.apply(b));
            let i = index[&f];
            if !seen[i] {
                seen[i] = true;
                count += 1;
                queue.push_back(f);
            }
        }
    }
    Ok(count == all.len())
}
