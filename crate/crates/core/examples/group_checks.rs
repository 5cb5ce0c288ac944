//! The group acting on each design: order, rank, primitivity, flag-transitivity.

use psu4_designs::designs::{build_flag_transitive, flags, DesignKind};
use psu4_designs::permgroup::groups::{design_action, identify, Variant};
use psu4_designs::permgroup::{induce_block_action, is_flag_transitive, is_primitive, stabilizer_orbit_sizes};

fn main() {
    for variant in [Variant::Full, Variant::Simple] {
        println!("{variant:?} group");
        for kind in DesignKind::ALL {
            let g = design_action(kind, variant).expect("matrices preserve the point set");
            let (order, name) = identify(&g).expect("small degree");
            let sub = stabilizer_orbit_sizes(&g, 0).expect("small degree");
            let d = build_flag_transitive(kind);
            let blocks = induce_block_action(&g, &d).expect("blocks map to blocks");
            let ft = is_flag_transitive(&g, &d, &blocks).expect("compatible actions");
            println!(
                "  {kind:>9}: |G| = {order} ({name}), subdegrees {sub:?}, primitive {}, flag-transitive {ft} on {} flags{}",
                is_primitive(&g).expect("transitive"),
                flags(&d).len(),
                if kind.flag_transitive_on_complement() { " of the complement" } else { "" },
            );
        }
    }
}
