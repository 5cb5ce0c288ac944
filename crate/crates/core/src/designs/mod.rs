//! Incidence structures, the four constructions, symmetric-design checks and
//! the plain-text design file format.
//!
//! Points are `0..v`. A block is a sorted list of point indices; alongside it
//! the structure keeps one bitset per block so intersections are cheap.

mod iso;

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::geometry::{
    perp_set, pg_hyperplanes, points_of_class, projective_points, PointClass, PrimeField, ProjectivePoint,
    QuadraticSpace,
};
use crate::sieve::DesignParams;

pub use iso::{are_isomorphic, Isomorphism};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("block {block} contains point {point}, but v = {v}")]
    PointOutOfRange { block: usize, point: usize, v: usize },
    #[error("block {block} repeats point {point}")]
    RepeatedPoint { block: usize, point: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceStructure {
    v: usize,
    blocks: Vec<Vec<usize>>,
    incidence: Vec<FixedBitSet>,
}

impl IncidenceStructure {
    /// Sorts each block; block order is kept as given.
    pub fn new(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self, StructureError> {
        let mut incidence = Vec::with_capacity(blocks.len());
        let mut sorted = Vec::with_capacity(blocks.len());
        for (i, mut b) in blocks.into_iter().enumerate() {
            b.sort_unstable();
            let mut bits = FixedBitSet::with_capacity(v);
            for w in b.windows(2) {
                if w[0] == w[1] {
                    return Err(StructureError::RepeatedPoint { block: i, point: w[0] });
                }
            }
            for &x in &b {
                if x >= v {
                    return Err(StructureError::PointOutOfRange { block: i, point: x, v });
                }
                bits.insert(x);
            }
            incidence.push(bits);
            sorted.push(b);
        }
        Ok(IncidenceStructure { v, blocks: sorted, incidence })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    /// Bitset over points for block `i`.
    pub fn block_bits(&self, i: usize) -> &FixedBitSet {
        &self.incidence[i]
    }

    pub fn is_incident(&self, point: usize, block: usize) -> bool {
        self.incidence[block].contains(point)
    }

    /// For each point, the bitset of blocks through it.
    pub fn point_bits(&self) -> Vec<FixedBitSet> {
        let mut rows = vec![FixedBitSet::with_capacity(self.b()); self.v];
        for (j, b) in self.blocks.iter().enumerate() {
            for &x in b {
                rows[x].insert(j);
            }
        }
        rows
    }

    /// The dual structure: blocks become points and vice versa.
    pub fn dual(&self) -> IncidenceStructure {
        let blocks = self.point_bits().iter().map(|r| r.ones().collect()).collect();
        IncidenceStructure::new(self.b(), blocks).expect("dual of a valid structure")
    }

    /// Point `x` becomes `perm[x]`; block order is unchanged.
    pub fn relabel_points(&self, perm: &[usize]) -> IncidenceStructure {
        assert_eq!(perm.len(), self.v, "relabeling must cover every point");
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&x| perm[x]).collect()).collect();
        IncidenceStructure::new(self.v, blocks).expect("relabeling preserves validity")
    }

    /// Block `i` moves to position `perm[i]`.
    pub fn reorder_blocks(&self, perm: &[usize]) -> IncidenceStructure {
        assert_eq!(perm.len(), self.b(), "reordering must cover every block");
        let mut blocks = vec![Vec::new(); self.b()];
        for (i, b) in self.blocks.iter().enumerate() {
            blocks[perm[i]] = b.clone();
        }
        IncidenceStructure::new(self.v, blocks).expect("reordering preserves validity")
    }
}

/// The four constructed designs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DesignKind {
    /// Square-type points of the 5-dimensional orthogonal space over F3.
    Menon36,
    /// Nonsquare-type points of the same space.
    Minus45,
    /// Isotropic points of the same space.
    Higman40,
    /// Points and hyperplanes of PG(3,3).
    Pg33,
}

impl DesignKind {
    pub const ALL: [DesignKind; 4] = [DesignKind::Menon36, DesignKind::Minus45, DesignKind::Higman40, DesignKind::Pg33];

    pub fn name(&self) -> &'static str {
        match self {
            DesignKind::Menon36 => "menon36",
            DesignKind::Minus45 => "minus45",
            DesignKind::Higman40 => "higman40",
            DesignKind::Pg33 => "pg33",
        }
    }

    /// Parameters of the base design.
    pub fn params(&self) -> (u64, u64, u64) {
        match self {
            DesignKind::Menon36 => (36, 15, 6),
            DesignKind::Minus45 => (45, 12, 3),
            DesignKind::Higman40 | DesignKind::Pg33 => (40, 13, 4),
        }
    }

    /// Whether the flag-transitive design is the complement of the base one.
    pub fn flag_transitive_on_complement(&self) -> bool {
        matches!(self, DesignKind::Higman40 | DesignKind::Pg33)
    }

    /// Point class in [`QuadraticSpace::design_space`]; `None` for `pg33`.
    pub fn point_class(&self) -> Option<PointClass> {
        match self {
            DesignKind::Menon36 => Some(PointClass::SquareType),
            DesignKind::Minus45 => Some(PointClass::NonsquareType),
            DesignKind::Higman40 => Some(PointClass::Isotropic),
            DesignKind::Pg33 => None,
        }
    }

    /// The projective points the design lives on, in point-index order.
    pub fn points(&self) -> Vec<ProjectivePoint> {
        match self.point_class() {
            Some(c) => points_of_class(&QuadraticSpace::design_space(), c),
            None => projective_points(4, &f3()),
        }
    }
}

impl fmt::Display for DesignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown design kind {0:?} (expected menon36, minus45, higman40 or pg33)")]
pub struct UnknownKind(pub String);

impl FromStr for DesignKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DesignKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownKind(s.to_string()))
    }
}

fn f3() -> PrimeField {
    PrimeField::new(3).expect("3 is prime")
}

/// Builds a design. In the orthogonal cases block `i` is the perp of point `i`.
pub fn build(kind: DesignKind) -> IncidenceStructure {
    let blocks = match kind.point_class() {
        Some(_) => {
            let space = QuadraticSpace::design_space();
            let pts = kind.points();
            pts.iter().map(|x| perp_set(&space, x, &pts)).collect()
        }
        None => pg_hyperplanes(4, &f3()),
    };
    let v = blocks.len();
    IncidenceStructure::new(v, blocks).expect("constructions are valid")
}

/// Build, complementing when the flag-transitive design is the complement.
pub fn build_flag_transitive(kind: DesignKind) -> IncidenceStructure {
    let d = build(kind);
    if kind.flag_transitive_on_complement() {
        complement(&d)
    } else {
        d
    }
}

/// Every block replaced by its complement in the point set.
pub fn complement(d: &IncidenceStructure) -> IncidenceStructure {
    let blocks = d
        .incidence
        .iter()
        .map(|bits| (0..d.v).filter(|&x| !bits.contains(x)).collect())
        .collect();
    IncidenceStructure::new(d.v, blocks).expect("complement of a valid structure")
}

/// Incident `(point, block)` pairs in lexicographic order.
pub fn flags(d: &IncidenceStructure) -> Vec<(usize, usize)> {
    let rows = d.point_bits();
    rows.iter()
        .enumerate()
        .flat_map(|(x, r)| r.ones().map(move |j| (x, j)))
        .collect()
}

/// The first symmetric-design axiom a structure breaks, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    BlockCount { v: usize, b: usize },
    /// Blocks `first` and `block` have different sizes.
    BlockSize { first: usize, block: usize, expected: usize, found: usize },
    /// Points `first` and `point` lie on different numbers of blocks.
    Replication { first: usize, point: usize, expected: usize, found: usize },
    Trivial { v: usize, k: usize },
    /// Points `x` and `y` lie on `found` common blocks, not `expected`.
    PointPair { x: usize, y: usize, expected: usize, found: usize },
    /// Blocks `a` and `b` share `found` points, not `expected`.
    BlockPair { a: usize, b: usize, expected: usize, found: usize },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::BlockCount { .. } => "block-count",
            Violation::BlockSize { .. } => "block-size",
            Violation::Replication { .. } => "replication",
            Violation::Trivial { .. } => "nontriviality",
            Violation::PointPair { .. } => "point-pair",
            Violation::BlockPair { .. } => "block-pair",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.axiom())?;
        match *self {
            Violation::BlockCount { v, b } => write!(f, "{b} blocks on {v} points"),
            Violation::BlockSize { first, block, expected, found } => {
                write!(f, "block {block} has {found} points, block {first} has {expected}")
            }
            Violation::Replication { first, point, expected, found } => {
                write!(f, "point {point} is on {found} blocks, point {first} is on {expected}")
            }
            Violation::Trivial { v, k } => write!(f, "k = {k} is not strictly between 2 and v-1 = {}", v - 1),
            Violation::PointPair { x, y, expected, found } => {
                write!(f, "points {x},{y} are on {found} common blocks, expected {expected}")
            }
            Violation::BlockPair { a, b, expected, found } => {
                write!(f, "blocks {a},{b} share {found} points, expected {expected}")
            }
        }
    }
}

/// Checks every symmetric-design axiom directly; nothing about block order
/// or polarity is assumed.
pub fn verify_symmetric(d: &IncidenceStructure) -> Result<DesignParams, Violation> {
    let (v, b) = (d.v(), d.b());
    if b != v || v == 0 {
        return Err(Violation::BlockCount { v, b });
    }
    let k = d.blocks[0].len();
    if let Some(j) = (1..b).find(|&j| d.blocks[j].len() != k) {
        return Err(Violation::BlockSize { first: 0, block: j, expected: k, found: d.blocks[j].len() });
    }
    let rows = d.point_bits();
    let r0 = rows[0].count_ones(..);
    if let Some(x) = (1..v).find(|&x| rows[x].count_ones(..) != r0) {
        return Err(Violation::Replication { first: 0, point: x, expected: r0, found: rows[x].count_ones(..) });
    }
    if k <= 2 || k + 1 >= v {
        return Err(Violation::Trivial { v, k });
    }
    let lambda = rows[0].intersection_count(&rows[1]);
    for x in 0..v {
        for y in x + 1..v {
            let c = rows[x].intersection_count(&rows[y]);
            if c != lambda {
                return Err(Violation::PointPair { x, y, expected: lambda, found: c });
            }
        }
    }
    for a in 0..b {
        for c in a + 1..b {
            let n = d.incidence[a].intersection_count(&d.incidence[c]);
            if n != lambda {
                return Err(Violation::BlockPair { a, b: c, expected: lambda, found: n });
            }
        }
    }
    // Constant pair counts force k(k-1) = λ(v-1) and the square condition.
    Ok(DesignParams::from_u64(v as u64, k as u64, lambda as u64).expect("axioms imply valid parameters"))
}

/// A structure that passed [`verify_symmetric`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifiedDesign {
    structure: IncidenceStructure,
    params: DesignParams,
}

impl VerifiedDesign {
    pub fn new(structure: IncidenceStructure) -> Result<Self, Violation> {
        let params = verify_symmetric(&structure)?;
        Ok(VerifiedDesign { structure, params })
    }

    pub fn structure(&self) -> &IncidenceStructure {
        &self.structure
    }

    pub fn params(&self) -> &DesignParams {
        &self.params
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum DesignFileError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
}

/// `v b`, then one line of sorted point indices per block.
pub fn to_design_string(d: &IncidenceStructure) -> String {
    let mut s = format!("{} {}\n", d.v(), d.b());
    for b in d.blocks() {
        let line: Vec<String> = b.iter().map(|x| x.to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

pub fn parse_design(text: &str) -> Result<IncidenceStructure, ParseError> {
    let err = |line: usize, message: String| ParseError { line, message };
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().expect("split yields at least one item");
    let nums: Vec<&str> = header.split(' ').collect();
    let [v, b] = nums[..] else {
        return Err(err(1, format!("expected `v b`, found {header:?}")));
    };
    let parse = |n: usize, s: &str| s.parse::<usize>().map_err(|_| err(n, format!("not an index: {s:?}")));
    let (v, b) = (parse(1, v)?, parse(1, b)?);

    let mut blocks = Vec::with_capacity(b);
    for j in 0..b {
        let Some((n, line)) = lines.next() else {
            return Err(err(j + 2, format!("missing block {j} of {b}")));
        };
        let mut block = Vec::new();
        if !line.is_empty() {
            for tok in line.split(' ') {
                let x = parse(n, tok)?;
                if x >= v {
                    return Err(err(n, format!("point {x} out of range for v = {v}")));
                }
                if block.last().is_some_and(|&prev| prev >= x) {
                    return Err(err(n, "indices must be strictly increasing".into()));
                }
                block.push(x);
            }
        }
        blocks.push(block);
    }
    // Only the empty remainder after the final newline may follow.
    match lines.collect::<Vec<_>>().as_slice() {
        [(_, "")] => {}
        [] => return Err(err(b + 1, "missing trailing newline".into())),
        [(n, _), ..] => return Err(err(*n, "unexpected content after the last block".into())),
    }
    Ok(IncidenceStructure::new(v, blocks).expect("validated while parsing"))
}

pub fn read_design_file(path: &Path) -> Result<IncidenceStructure, DesignFileError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| DesignFileError::Io { path: shown.clone(), source })?;
    parse_design(&text).map_err(|source| DesignFileError::Parse { path: shown, source })
}

pub fn write_design_file(path: &Path, d: &IncidenceStructure) -> io::Result<()> {
    fs::write(path, to_design_string(d))
}
