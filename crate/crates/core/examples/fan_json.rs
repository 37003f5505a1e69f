//! Read a fan file, report its combinatorics, and print the canonical form.
//!
//! Usage: `cargo run --example fan_json -- crates/core/fans/hirzebruch2.json`

use toric_homology::fan::Fan;

const FALLBACK: &str = r#"{"name": "F1", "rank": 2, "rays": [[1,0],[0,1],[-1,1],[0,-1]],
  "maximal_cones": [[0,1],[1,2],[2,3],[3,0]]}"#;

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}")),
        None => FALLBACK.to_string(),
    };
    let fan = match Fan::read_json(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("invalid fan: {e}");
            std::process::exit(if e.is_parse_error() { 3 } else { 2 });
        }
    };
    println!("rank {}, {} rays, {} cones", fan.rank(), fan.rays().len(), fan.cones().len());
    println!("f-vector {:?}, h-vector {:?}", fan.f_vector(), fan.h_vector().values);
    println!(
        "complete {}, simplicial {}, nonsingular {}",
        fan.is_complete(),
        fan.is_simplicial(),
        fan.is_nonsingular()
    );
    for (p, stratum) in fan.strata().iter().enumerate() {
        let cones: Vec<_> = stratum.iter().map(|&c| fan.cone(c).rays.clone()).collect();
        println!("codim {p}: {cones:?}");
    }
    print!("{}", fan.write_json());
}
