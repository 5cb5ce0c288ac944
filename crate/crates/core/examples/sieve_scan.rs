//! Scan every catalog line over a small box of prime powers and list what
//! survives the arithmetic sieve.
//!
//! cargo run --example sieve_scan -- 13 3

use psu4_designs::sieve::{scan_all, Status};

fn main() {
    let mut args = std::env::args().skip(1);
    let p_max: u64 = args.next().map_or(13, |s| s.parse().expect("p_max"));
    let a_max: u32 = args.next().map_or(3, |s| s.parse().expect("a_max"));

    let report = scan_all(p_max, a_max).expect("catalog is consistent");
    println!("{} cases for p <= {p_max}, a <= {a_max}", report.outcomes.len());

    for o in &report.outcomes {
        if o.status == Status::Eliminated {
            continue;
        }
        println!("line {:>2} {} at q = {}: v = {}, k | {}", o.line(), o.case.structure_label(), o.q().q(), o.v, o.k_bound);
        for c in &o.candidates {
            println!("    {} {}", c.status, c.params);
            if let Some(note) = &c.trace.note {
                println!("      {note}");
            }
        }
    }

    let survivors: Vec<String> = report.survivors().iter().map(|s| s.params.to_string()).collect();
    println!("survivors: {}", survivors.join(" "));
}
