//! Recompute every bounding table and compare with the expected content.

use psu4_designs::sieve::tables::bound_tables;

fn main() {
    let mut all = true;
    for report in bound_tables().values() {
        print!("{}", report.render());
        println!("-> {}\n", if report.matches() { "matches" } else { "DIFFERS" });
        all &= report.matches();
    }
    std::process::exit(if all { 0 } else { 1 });
}
