//! Complete toric surfaces: the closed-form Betti numbers next to the ones
//! computed from the cellular complex.

use toric_homology::analysis::{m_verdict, surface_betti_oracle};
use toric_homology::constructions::{
    hirzebruch_fan, projective_space_fan, same_mod2_surface_fan, weighted_projective_fan,
};
use toric_homology::fan::Fan;
use toric_homology::spectral::betti_real;

fn main() {
    let mut fans: Vec<Fan> = vec![projective_space_fan(2).unwrap()];
    fans.extend((0..=3).map(|a| hirzebruch_fan(a).unwrap()));
    fans.push(weighted_projective_fan(&[1, 1, 2]).unwrap());
    fans.push(weighted_projective_fan(&[1, 2, 3]).unwrap());
    fans.extend([4, 6, 7].map(|s| same_mod2_surface_fan(s).unwrap()));

    println!("{:<12} {:>2}  {:<9} {:<11} {:<11} {:<15} verdict", "fan", "s", "case", "b(R)", "computed", "b(C)");
    for fan in &fans {
        let o = surface_betti_oracle(fan).expect("complete surface");
        let computed = betti_real(fan);
        assert_eq!(computed, o.betti_real.to_vec());
        println!(
            "{:<12} {:>2}  {:<9} {:<11} {:<11} {:<15} {}",
            fan.name().unwrap_or("-"),
            o.rays,
            format!("{:?}", o.case),
            format!("{:?}", o.betti_real),
            format!("{computed:?}"),
            format!("{:?}", o.betti_complex),
            m_verdict(fan).status
        );
    }
}
