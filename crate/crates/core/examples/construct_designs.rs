//! Build the four designs, check the axioms, and check the complements.

use psu4_designs::designs::{build, complement, flags, verify_symmetric, DesignKind};

fn main() {
    for kind in DesignKind::ALL {
        let d = build(kind);
        let params = verify_symmetric(&d).expect("construction is a symmetric design");
        let comp = verify_symmetric(&complement(&d)).expect("complement is symmetric too");
        println!("{kind:>9}: {params}, complement {comp}, {} flags", flags(&d).len());
    }
}
