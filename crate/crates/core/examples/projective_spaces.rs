//! Real Betti numbers and M-verdicts for projective spaces P^1 .. P^5.
//!
//! ```bash
//! cargo run --example projective_spaces
//! ```

use toric_homology::analysis::m_verdict;
use toric_homology::constructions::projective_space_fan;
use toric_homology::spectral::betti_real;

fn main() {
    for n in 1..=5 {
        let fan = projective_space_fan(n).expect("n >= 1");
        let b = betti_real(&fan);
        let v = m_verdict(&fan);
        println!(
            "P{n}: {} cones, betti_real {:?}, total E2 {}, total G1 {}, {}",
            fan.cones().len(),
            b,
            v.total_e2,
            v.total_g1,
            v.status
        );
    }
}
