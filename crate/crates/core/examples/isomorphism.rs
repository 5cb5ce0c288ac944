//! Tell the two (40, 27, 18) designs apart, and recover a hidden relabeling.

use std::time::Instant;

use psu4_designs::designs::{are_isomorphic, build, complement, DesignKind};

fn main() {
    let pg = complement(&build(DesignKind::Pg33));
    let hig = complement(&build(DesignKind::Higman40));

    let t = Instant::now();
    let verdict = are_isomorphic(&pg, &hig);
    println!("complement(pg33) ~ complement(higman40): {} ({:?})", verdict.is_some(), t.elapsed());

    // Scramble points and blocks of the Menon design with fixed affine maps.
    let d = build(DesignKind::Menon36);
    let points: Vec<usize> = (0..36).map(|i| (5 * i + 7) % 36).collect();
    let blocks: Vec<usize> = (0..36).map(|i| (11 * i + 1) % 36).collect();
    let scrambled = d.relabel_points(&points).reorder_blocks(&blocks);

    let iso = are_isomorphic(&d, &scrambled).expect("relabeled copy is isomorphic");
    assert!(iso.is_valid(&d, &scrambled));
    println!("menon36 ~ scrambled copy: witness maps point 0 -> {}, block 0 -> {}", iso.points[0], iso.blocks[0]);
}
