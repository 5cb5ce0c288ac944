//! Group orders, point counts and divisor bounds from the catalog, in exact
//! arithmetic.

use psu4_designs::catalog::{cases_for, out_order, socle_order};
use psu4_designs::exactmath::{factorize, PrimePower};

fn main() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let q = PrimePower::from_value(q).expect("prime power");
        let x = socle_order(&q);
        println!("PSU4({}): |X| = {} = {}, |Out| = {}", q.q(), x, factorize(&x), out_order(&q));
        for case in cases_for(&q) {
            let v = case.point_count().expect("integral index");
            let kb = case.k_divisor_bound().expect("integral bound");
            println!("  line {:>2} {:<28} v = {v}, k | {kb} = {}", case.line, case.structure_label(), factorize(&kb));
        }
    }
}
