//! The group algebra F2[(Z/2)^r]: y-basis, augmentation filtration, and the
//! graded action of a surjection compared with its exterior powers.

use toric_homology::gf2::{exterior_power, subsets, Gf2Matrix};
use toric_homology::orbitalg::{
    augmentation_filtration_dims, diagonal_class_check, group_algebra_map_y, subset_mask, GroupAlgebraElement,
};

fn main() {
    for r in 0..=5 {
        println!("r = {r}: dim I^k = {:?}", augmentation_filtration_dims(r));
    }

    // (Z/2)^3 -> (Z/2)^2
    let m = Gf2Matrix::from_rows(3, &[[1, 0, 1], [0, 1, 1]]);
    let y = group_algebra_map_y(&m);
    for k in 0..=2 {
        let rows: Vec<usize> = subsets(2, k).iter().map(|s| subset_mask(s)).collect();
        let cols: Vec<usize> = subsets(3, k).iter().map(|s| subset_mask(s)).collect();
        let graded = y.submatrix(&rows, &cols);
        println!("Gr^{k}: {:?}  equals exterior power: {}", graded, graded == exterior_power(&m, k));
    }

    let a = &GroupAlgebraElement::y(3, 0b011) + &GroupAlgebraElement::y(3, 0b100);
    println!("a = {:?}, filtration degree {}, a*a zero: {}", a.coords(), a.filtration_degree(), (&a * &a).is_zero());
    println!("diagonal subgroup class = y1 + y2 + y12: {}", diagonal_class_check());
}
