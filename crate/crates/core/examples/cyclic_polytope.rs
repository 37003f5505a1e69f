//! The normal fan of the cyclic polytope C(7,5): facets two ways, then the
//! E2 and G1 pages in grid form.

use toric_homology::analysis::{check_cyclic57, m_verdict};
use toric_homology::constructions::{cyclic_facets_gale, cyclic_facets_hull, cyclic_polytope_normal_fan};
use toric_homology::report::render_table;
use toric_homology::spectral::{e2_dims, g_pages};

fn main() {
    let gale = cyclic_facets_gale(7, 5);
    let hull = cyclic_facets_hull(7, 5);
    println!("facets: {} by Gale evenness, {} by supporting hyperplanes", gale.len(), hull.len());
    for (vertices, normal) in &hull {
        println!("  {vertices:?}  inner normal {normal:?}");
    }

    let fan = cyclic_polytope_normal_fan().expect("facet enumerations agree");
    println!("f-vector {:?}\n", fan.f_vector());

    let e2 = e2_dims(&fan);
    let g1 = g_pages(&fan).g1;
    print!("{}\n{}", render_table(&e2), render_table(&g1));

    let check = check_cyclic57(&e2, &g1);
    println!("\nreference values: {}", if check.passed() { "all match" } else { "MISMATCH" });
    let v = m_verdict(&fan);
    println!("sum b(X(R)) = {}, total E2 = {}, {}", v.sum_betti_real, v.total_e2, v.status);
}
