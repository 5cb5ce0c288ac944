//! Write a design file, read it back and verify it; show a parse error.

use psu4_designs::designs::{build, parse_design, read_design_file, verify_symmetric, write_design_file, DesignKind};

fn main() -> std::io::Result<()> {
    let d = build(DesignKind::Minus45);
    let path = std::env::temp_dir().join("minus45.design");
    write_design_file(&path, &d)?;

    let back = read_design_file(&path).expect("round trip");
    assert_eq!(back, d);
    println!("{}: {}", path.display(), verify_symmetric(&back).expect("still a design"));

    let text = std::fs::read_to_string(&path)?;
    println!("first lines:\n{}", text.lines().take(3).collect::<Vec<_>>().join("\n"));

    match parse_design("3 2\n0 1\n2 1\n") {
        Ok(_) => unreachable!("indices out of order"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
