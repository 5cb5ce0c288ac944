//! Prime-field linear algebra, quadratic spaces and projective point sets.
//!
//! Field elements are stored as `u16` residues, which covers every prime
//! modulus up to 257. Vectors are plain slices; matrices act on column
//! vectors from the left.

use std::fmt;

use thiserror::Error;

use crate::exactmath::is_prime_u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("modulus {0} is not a prime <= 257")]
    BadModulus(u32),
    #[error("quadratic spaces need odd characteristic")]
    EvenCharacteristic,
    #[error("gram matrix must be square, symmetric and nondegenerate")]
    BadGram,
    #[error("vector has length {got}, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("vector is isotropic")]
    Isotropic,
    #[error("zero vector has no projective point")]
    ZeroVector,
}

/// The field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u16,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, GeometryError> {
        if p > 257 || !is_prime_u64(p as u64) {
            return Err(GeometryError::BadModulus(p));
        }
        Ok(PrimeField { p: p as u16 })
    }

    pub fn p(&self) -> u16 {
        self.p
    }

    pub fn reduce(&self, x: i64) -> u16 {
        x.rem_euclid(self.p as i64) as u16
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        ((a as u32 + b as u32) % self.p as u32) as u16
    }

    pub fn sub(&self, a: u16, b: u16) -> u16 {
        ((a as u32 + self.p as u32 - b as u32) % self.p as u32) as u16
    }

    pub fn neg(&self, a: u16) -> u16 {
        self.sub(0, a)
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        ((a as u32 * b as u32) % self.p as u32) as u16
    }

    pub fn pow(&self, mut a: u16, mut e: u32) -> u16 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero element (Fermat).
    pub fn inv(&self, a: u16) -> Option<u16> {
        (a % self.p != 0).then(|| self.pow(a, self.p as u32 - 2))
    }

    /// Euler's criterion; zero is not a square here. In characteristic 2
    /// every nonzero element is a square.
    pub fn is_nonzero_square(&self, a: u16) -> bool {
        let a = a % self.p;
        a != 0 && (self.p == 2 || self.pow(a, (self.p as u32 - 1) / 2) == 1)
    }

    pub fn dot(&self, x: &[u16], y: &[u16]) -> u16 {
        let s: u64 = x.iter().zip(y).map(|(&a, &b)| a as u64 * b as u64).sum();
        (s % self.p as u64) as u16
    }
}

/// Square matrix over a prime field, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    data: Vec<u16>,
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        Matrix::scalar(n, 1)
    }

    pub fn scalar(n: usize, c: u16) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = c;
        }
        Matrix { n, data }
    }

    /// Builds from rows; `None` unless the rows form a square array.
    pub fn from_rows(rows: &[Vec<u16>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Matrix { n, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u16] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        Matrix { n, data }
    }

    pub fn mul(&self, field: &PrimeField, other: &Matrix) -> Matrix {
        let n = self.n;
        let t = other.transpose();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(field.dot(self.row(i), t.row(j)));
            }
        }
        Matrix { n, data }
    }

    /// `M·x`.
    pub fn apply(&self, field: &PrimeField, x: &[u16]) -> Vec<u16> {
        (0..self.n).map(|i| field.dot(self.row(i), x)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self, field: &PrimeField) -> u16 {
        let n = self.n;
        let mut a: Vec<u16> = self.data.iter().map(|&x| x % field.p()).collect();
        let mut det = 1u16;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = field.neg(det);
            }
            let pv = a[col * n + col];
            det = field.mul(det, pv);
            let inv = field.inv(pv).expect("pivot is nonzero");
            for r in col + 1..n {
                let f = field.mul(a[r * n + col], inv);
                if f == 0 {
                    continue;
                }
                for j in col..n {
                    let s = field.mul(f, a[col * n + j]);
                    a[r * n + j] = field.sub(a[r * n + j], s);
                }
            }
        }
        det
    }
}

/// A nondegenerate symmetric bilinear form over `F_p`, `p` odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticSpace {
    field: PrimeField,
    gram: Matrix,
}

impl QuadraticSpace {
    pub fn new(field: PrimeField, gram: Matrix) -> Result<Self, GeometryError> {
        if field.p() == 2 {
            return Err(GeometryError::EvenCharacteristic);
        }
        if !gram.is_symmetric() || gram.determinant(&field) == 0 {
            return Err(GeometryError::BadGram);
        }
        Ok(QuadraticSpace { field, gram })
    }

    /// `F_p^n` with the identity gram matrix.
    pub fn standard(p: u32, n: usize) -> Result<Self, GeometryError> {
        QuadraticSpace::new(PrimeField::new(p)?, Matrix::identity(n))
    }

    /// `F_3^5` with gram `diag(1,1,1,1,-1)`, the space behind the three
    /// orthogonal designs.
    ///
    /// With this discriminant the points with `Q(x) = 1` number 36 and those
    /// with `Q(x) = -1` number 45. The identity gram has the other
    /// discriminant class and swaps the two counts.
    pub fn design_space() -> Self {
        let mut gram = Matrix::identity(5);
        gram.data[24] = 2;
        QuadraticSpace::new(PrimeField::new(3).expect("3 is prime"), gram).expect("nondegenerate")
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn bilinear(&self, x: &[u16], y: &[u16]) -> u16 {
        self.field.dot(x, &self.gram.apply(&self.field, y))
    }

    pub fn form(&self, x: &[u16]) -> u16 {
        self.bilinear(x, x)
    }

    /// `Mᵀ·G·M = G`.
    pub fn is_isometry(&self, m: &Matrix) -> bool {
        let f = &self.field;
        m.transpose().mul(f, &self.gram).mul(f, m) == self.gram
    }
}

/// A 1-dimensional subspace, stored in normal form (first nonzero entry 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: Vec<u16>,
}

impl ProjectivePoint {
    /// Normalizes any nonzero vector.
    pub fn from_vector(field: &PrimeField, v: &[u16]) -> Result<Self, GeometryError> {
        let lead = v
            .iter()
            .map(|&x| x % field.p())
            .find(|&x| x != 0)
            .ok_or(GeometryError::ZeroVector)?;
        let inv = field.inv(lead).expect("nonzero");
        Ok(ProjectivePoint { coords: v.iter().map(|&x| field.mul(x, inv)).collect() })
    }

    pub fn coords(&self) -> &[u16] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(">")
    }
}

/// All points of `PG(dim-1, p)` in lexicographic normal-form order.
pub fn projective_points(dim: usize, field: &PrimeField) -> Vec<ProjectivePoint> {
    let p = field.p();
    let mut out = Vec::new();
    // (0,..,0,1,*) sorts before (0,..,1,*,*), so the leading 1 moves left.
    for lead in (0..dim).rev() {
        let mut coords = vec![0u16; dim];
        coords[lead] = 1;
        loop {
            out.push(ProjectivePoint { coords: coords.clone() });
            // Odometer on the tail, last coordinate fastest.
            let Some(i) = (lead + 1..dim).rev().find(|&i| coords[i] + 1 < p) else {
                break;
            };
            coords[i] += 1;
            coords[i + 1..].fill(0);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointClass {
    Isotropic,
    SquareType,
    NonsquareType,
}

/// Scaling by `c` multiplies the form by `c²`, so the class is well defined.
pub fn classify_point(space: &QuadraticSpace, x: &ProjectivePoint) -> PointClass {
    let f = space.form(x.coords());
    if f == 0 {
        PointClass::Isotropic
    } else if space.field().is_nonzero_square(f) {
        PointClass::SquareType
    } else {
        PointClass::NonsquareType
    }
}

/// Points of `space` of the given class, in lexicographic order.
pub fn points_of_class(space: &QuadraticSpace, class: PointClass) -> Vec<ProjectivePoint> {
    projective_points(space.dim(), space.field())
        .into_iter()
        .filter(|x| classify_point(space, x) == class)
        .collect()
}

/// Indices `i` with `B(x, universe[i]) = 0`, ascending.
pub fn perp_set(space: &QuadraticSpace, x: &ProjectivePoint, universe: &[ProjectivePoint]) -> Vec<usize> {
    let gx = space.gram().apply(space.field(), x.coords());
    universe
        .iter()
        .enumerate()
        .filter(|(_, y)| space.field().dot(&gx, y.coords()) == 0)
        .map(|(i, _)| i)
        .collect()
}

/// `r_v(x) = x - (2 B(x,v) / Q(v)) v`.
pub fn reflection(space: &QuadraticSpace, v: &[u16]) -> Result<Matrix, GeometryError> {
    let n = space.dim();
    if v.len() != n {
        return Err(GeometryError::Dimension { expected: n, got: v.len() });
    }
    let f = space.field();
    let q = space.form(v);
    let c = f.mul(2, f.inv(q).ok_or(GeometryError::Isotropic)?);
    // B(x,v) = (Gv)·x since G is symmetric.
    let gv = space.gram().apply(f, v);
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let t = f.mul(c, f.mul(v[i], gv[j]));
            data.push(f.sub(u16::from(i == j), t));
        }
    }
    Ok(Matrix { n, data })
}

/// `x ↦ x + c·B(x,v)·v` for an alternating form with gram `j`.
pub fn transvection(field: &PrimeField, j: &Matrix, v: &[u16], c: u16) -> Matrix {
    let n = j.dim();
    let jv = j.apply(field, v);
    let mut data = Vec::with_capacity(n * n);
    for r in 0..n {
        for s in 0..n {
            let t = field.mul(c, field.mul(v[r], jv[s]));
            data.push(field.add(u16::from(r == s), t));
        }
    }
    Matrix { n, data }
}

/// Hyperplanes of `PG(dim-1, p)` as index sets into [`projective_points`].
///
/// Block `i` is the kernel of the functional given by point `i`.
pub fn pg_hyperplanes(dim: usize, field: &PrimeField) -> Vec<Vec<usize>> {
    let pts = projective_points(dim, field);
    pts.iter()
        .map(|u| {
            pts.iter()
                .enumerate()
                .filter(|(_, x)| field.dot(u.coords(), x.coords()) == 0)
                .map(|(i, _)| i)
                .collect()
        })
        .collect()
}
