//! Regenerates the bundled dataset:
//! `cargo run -p ccsplan-core --example write_toy_nation -- data/toy-nation`

use std::path::PathBuf;

fn main() {
    let dir: PathBuf = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data/toy-nation"));
    let raw = ccsplan_core::fixtures::toy_nation_raw();
    if let Err(e) = ccsplan_core::io::write_dataset(&raw, &dir) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
    println!("wrote {}", dir.display());
}
