//! Rank-3 diagnostics: the kernel of E1(3,1) -> E1(2,1), and the shape of E2
//! when only maximal cones are singular.

use toric_homology::analysis::{dim3_kernel_analysis, isolated_singularities_shape};
use toric_homology::constructions::{
    projective_space_fan, same_mod2_threefold_fan, square_pyramid_fan, torus_fan,
};
use toric_homology::report::render_table;
use toric_homology::spectral::e2_dims;

fn main() {
    for fan in [projective_space_fan(3).unwrap(), torus_fan(3), same_mod2_threefold_fan(), square_pyramid_fan()] {
        let d = dim3_kernel_analysis(&fan).expect("rank 3");
        println!(
            "{}: {:?}, ker d1 = {}, ker d0 = {}, ker d = {}, {}",
            fan.name().unwrap_or("-"),
            d.case,
            d.kernel_dim,
            d.ker_d0,
            d.ker_d,
            d.verdict
        );
    }
    let sq = square_pyramid_fan();
    println!("\nsquare pyramid, E2 on p=q and p=q+1 only: {:?}", isolated_singularities_shape(&sq));
    print!("{}", render_table(&e2_dims(&sq)));
}
