//! Integer normal forms and the quotient lattice N/N_sigma of a singular cone.

use toric_homology::intlin::{hermite_normal_form, quotient_lattice, smith_normal_form, IntMatrix};

fn main() {
    let a = IntMatrix::from_rows(3, &[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
    let h = hermite_normal_form(&a);
    println!("HNF {:?}\n  pivots {:?}", h.h, h.pivots);
    let s = smith_normal_form(&a);
    println!("invariant factors {:?}", s.invariant_factors());

    // the cone spanned by (1,0,0) and (1,2,0) has index 2 in its saturation
    let rays = IntMatrix::from_columns(3, &[[1, 0, 0], [1, 2, 0]]);
    let q = quotient_lattice(3, &rays);
    println!("saturation basis {:?}", q.saturation);
    println!("projection {:?}, section {:?}", q.projection, q.section);
    println!("projection mod 2 {:?}", q.projection.mod2());
}
