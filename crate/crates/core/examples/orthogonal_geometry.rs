//! Point classes of the 5-dimensional orthogonal space over F3, and the
//! reflections that generate its isometry group.

use psu4_designs::geometry::{classify_point, perp_set, points_of_class, projective_points, reflection, PointClass, QuadraticSpace};

fn main() {
    let space = QuadraticSpace::design_space();
    let all = projective_points(5, space.field());
    println!("{} projective points", all.len());
    for class in [PointClass::SquareType, PointClass::NonsquareType, PointClass::Isotropic] {
        let pts = points_of_class(&space, class);
        let perp = perp_set(&space, &pts[0], &pts).len();
        println!("  {class:?}: {} points, {perp} in the perp of {} within the class", pts.len(), pts[0]);
    }

    let v = &points_of_class(&space, PointClass::NonsquareType)[0];
    let r = reflection(&space, v.coords()).expect("anisotropic");
    let fixed = all.iter().filter(|x| {
        let y = r.apply(space.field(), x.coords());
        psu4_designs::geometry::ProjectivePoint::from_vector(space.field(), &y).expect("nonzero") == **x
    });
    println!("reflection in {v}: isometry {}, fixes {} points", space.is_isometry(&r), fixed.count());
    println!("class of {v}: {:?}", classify_point(&space, v));
}
