//! The concrete group actions on the four designs.
//!
//! Orthogonal designs: the group generated by all reflections of
//! `F_3^5` (projective image of `GO_5(3)`, order 51840), or the subgroup
//! generated by products of two reflections in vectors of the same form class
//! (kernel of the spinor norm, `Ω_5(3)`, order 25920).
//!
//! `pg33`: symplectic transvections of `F_3^4` (`PSp_4(3)`, order 25920),
//! optionally with the similitude `diag(1,1,-1,-1)` (order 51840).

use std::fmt;

use num_bigint::BigUint;

use super::{group_order, induce, GroupError, PermutationAction};
use crate::designs::DesignKind;
use crate::geometry::{
    points_of_class, projective_points, reflection, transvection, Matrix, PointClass, PrimeField, QuadraticSpace,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// All reflections (or transvections plus the similitude).
    Full,
    /// The index-2 simple subgroup.
    Simple,
}

fn f3() -> PrimeField {
    PrimeField::new(3).expect("3 is prime")
}

/// Gram matrix of `x1 y3 - x3 y1 + x2 y4 - x4 y2`.
pub fn symplectic_gram() -> Matrix {
    Matrix::from_rows(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![2, 0, 0, 0], vec![0, 2, 0, 0]])
        .expect("square")
}

/// Matrix generators for the group acting on `kind`.
pub fn matrix_generators(kind: DesignKind, variant: Variant) -> Vec<Matrix> {
    let f = f3();
    if kind == DesignKind::Pg33 {
        let j = symplectic_gram();
        let mut gens: Vec<Matrix> = projective_points(4, &f).iter().map(|v| transvection(&f, &j, v.coords(), 1)).collect();
        if variant == Variant::Full {
            let d = Matrix::from_rows(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 2, 0], vec![0, 0, 0, 2]]);
            gens.push(d.expect("square"));
        }
        return gens;
    }
    let space = QuadraticSpace::design_space();
    let refl = |class| -> Vec<Matrix> {
        points_of_class(&space, class)
            .iter()
            .map(|v| reflection(&space, v.coords()).expect("anisotropic"))
            .collect()
    };
    let (sq, nsq) = (refl(PointClass::SquareType), refl(PointClass::NonsquareType));
    match variant {
        Variant::Full => sq.into_iter().chain(nsq).collect(),
        Variant::Simple => {
            // r_a r_b = (r_a r_u)(r_u r_b), so one anchor per class suffices.
            let anchored = |rs: &[Matrix]| -> Vec<Matrix> { rs[1..].iter().map(|r| rs[0].mul(&f, r)).collect() };
            let mut gens = anchored(&sq);
            gens.extend(anchored(&nsq));
            gens
        }
    }
}

/// The point action on `kind`, with points in design order.
pub fn design_action(kind: DesignKind, variant: Variant) -> Result<PermutationAction, GroupError> {
    let gens = matrix_generators(kind, variant);
    let action = induce(&f3(), &gens, &kind.points())?;
    // Distinct matrices can induce the same permutation (±M).
    let mut seen = std::collections::HashSet::new();
    let unique = action.generators().iter().filter(|g| !g.is_identity() && seen.insert((*g).clone())).cloned().collect();
    PermutationAction::new(action.degree(), unique)
}

/// Identified by order alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupName {
    Psu42,
    Psu42Ext2,
    Unidentified(BigUint),
}

impl GroupName {
    pub fn from_order(order: &BigUint) -> Self {
        if *order == BigUint::from(25920u32) {
            GroupName::Psu42
        } else if *order == BigUint::from(51840u32) {
            GroupName::Psu42Ext2
        } else {
            GroupName::Unidentified(order.clone())
        }
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::Psu42 => f.write_str("PSU4(2)"),
            GroupName::Psu42Ext2 => f.write_str("PSU4(2):2"),
            GroupName::Unidentified(n) => write!(f, "unidentified group of order {n}"),
        }
    }
}

pub fn identify(action: &PermutationAction) -> Result<(BigUint, GroupName), GroupError> {
    let n = group_order(action)?;
    let name = GroupName::from_order(&n);
    Ok((n, name))
}
