use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use toric_homology::analysis::{
    betti_complex_nonsingular_complete, m_verdict, surface_betti_oracle, MStatus, SurfaceCase,
};
use toric_homology::constructions::{random_fan, Profile};
use toric_homology::fan::Fan;
use toric_homology::gf2::{exterior_power, ChainComplex, Gf2Matrix};
use toric_homology::intlin::{
    hermite_normal_form, quotient_lattice, saturation, smith_normal_form, IntMatrix,
};
use toric_homology::orbitalg::{group_algebra_map, group_algebra_map_y};
use toric_homology::spectral::SpectralSummary;

fn int_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-6i64..=6, r * c).prop_map(move |v| {
            let rows: Vec<&[i64]> = v.chunks(c).collect();
            IntMatrix::from_rows(c, &rows)
        })
    })
}

fn gf2_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Gf2Matrix> {
    proptest::collection::vec(any::<bool>(), rows * cols).prop_map(move |bits| {
        let mut m = Gf2Matrix::zeros(rows, cols);
        for (k, b) in bits.into_iter().enumerate() {
            m.set(k / cols, k % cols, b);
        }
        m
    })
}

fn surjection(max: usize) -> impl Strategy<Value = Gf2Matrix> {
    (1..=max)
        .prop_flat_map(|a| (Just(a), 1..=a))
        .prop_flat_map(|(a, b)| gf2_matrix(b, a))
        .prop_filter("surjective", |m| m.rank() == m.rows())
}

fn fan_args() -> impl Strategy<Value = (usize, u64, Profile)> {
    (1usize..=3, any::<u64>(), prop::sample::select(Profile::ALL.to_vec()))
}

fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

/// Row lattice of a matrix, as the nonzero rows of its Hermite form.
fn row_lattice(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let h = hermite_normal_form(a);
    (0..h.rank).map(|i| h.h.row(i).to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hermite_form(a in int_matrix(5, 5)) {
        let h = hermite_normal_form(&a);
        prop_assert_eq!(&(&h.u * &a), &h.h);
        prop_assert!(is_unit(&h.u.det()));
        prop_assert_eq!(&(&h.u * &h.u_inv), &IntMatrix::identity(a.rows()));
        prop_assert_eq!(h.rank, a.rank());
        let mut last = None;
        for (i, &p) in h.pivots.iter().enumerate() {
            prop_assert!(last.is_none_or(|l| p > l));
            last = Some(p);
            let pivot = &h.h[(i, p)];
            prop_assert!(pivot.is_positive());
            for k in 0..i {
                let above = &h.h[(k, p)];
                prop_assert!(!above.is_negative() && above < pivot);
            }
            for j in 0..p {
                prop_assert!(h.h[(i, j)].is_zero());
            }
        }
        for i in h.rank..a.rows() {
            prop_assert!((0..a.cols()).all(|j| h.h[(i, j)].is_zero()));
        }
    }

    #[test]
    fn smith_form(a in int_matrix(4, 5)) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&(&s.u * &a) * &s.v), &s.s);
        prop_assert!(is_unit(&s.u.det()) && is_unit(&s.v.det()));
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    prop_assert!(s.s[(i, j)].is_zero());
                }
            }
        }
        let d = s.invariant_factors();
        prop_assert_eq!(d.len(), a.rank());
        for w in d.windows(2) {
            prop_assert!(w[0].is_positive() && (&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn saturation_is_idempotent(b in int_matrix(4, 3)) {
        prop_assume!(b.rank() > 0);
        let s = saturation(&b);
        let ss = saturation(&s);
        prop_assert_eq!(row_lattice(&s.transpose()), row_lattice(&ss.transpose()));
        prop_assert_eq!(s.cols(), b.rank());
    }

    #[test]
    fn quotient_projection_kills_and_splits(b in int_matrix(5, 3)) {
        let n = b.rows();
        let q = quotient_lattice(n, &b);
        prop_assert_eq!(q.projection.rows(), n - b.rank());
        prop_assert!((&q.projection * &b).is_zero());
        prop_assert_eq!(&(&q.projection * &q.section), &IntMatrix::identity(n - b.rank()));
    }

    #[test]
    fn rank_nullity((r, c) in (1usize..=12, 1usize..=12), seed in any::<u64>()) {
        let m = pseudo_random_gf2(r, c, seed);
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.cols(), c);
        prop_assert!((&m * &k).is_zero());
    }

    #[test]
    fn homology_invariant_under_basis_change(seed in any::<u64>()) {
        let (complex, changes) = random_complex_and_changes(seed);
        let dims = complex.dims().to_vec();
        let boundaries: Vec<Gf2Matrix> = (1..dims.len())
            .map(|k| &(&changes[k - 1].0 * complex.boundary(k)) * &changes[k].1)
            .collect();
        let moved = ChainComplex::new(dims, boundaries).unwrap();
        prop_assert_eq!(moved.homology_dims(), complex.homology_dims());
    }

    #[test]
    fn exterior_power_is_functorial(
        (a, b) in (1usize..=4, 1usize..=4, 1usize..=4)
            .prop_flat_map(|(m, n, p)| (gf2_matrix(m, n), gf2_matrix(n, p))),
        q in 0usize..=4,
    ) {
        let lhs = exterior_power(&(&a * &b), q);
        let rhs = &exterior_power(&a, q) * &exterior_power(&b, q);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn group_algebra_map_is_functorial(
        (a, b) in (1usize..=4, 1usize..=4, 1usize..=4)
            .prop_flat_map(|(m, n, p)| (gf2_matrix(m, n), gf2_matrix(n, p))),
    ) {
        let lhs = group_algebra_map(&(&a * &b));
        let rhs = &group_algebra_map(&a) * &group_algebra_map(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn surjections_preserve_the_filtration(m in surjection(6)) {
        let y = group_algebra_map_y(&m);
        for k in 0..=m.cols() {
            let src: Vec<usize> = (0..1usize << m.cols()).filter(|s| s.count_ones() as usize >= k).collect();
            let dst: Vec<usize> = (0..1usize << m.rows()).filter(|s| (s.count_ones() as usize) < k).collect();
            prop_assert!(y.submatrix(&dst, &src).is_zero());
        }
    }
}

fn pseudo_random_gf2(rows: usize, cols: usize, seed: u64) -> Gf2Matrix {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut m = Gf2Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.gen_bool(0.4));
        }
    }
    m
}

/// Invertible `n × n` matrix and its inverse, from random elementary operations.
fn invertible(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> (Gf2Matrix, Gf2Matrix) {
    use rand::Rng;
    let mut g = Gf2Matrix::identity(n);
    let mut g_inv = Gf2Matrix::identity(n);
    for _ in 0..3 * n {
        if n < 2 {
            break;
        }
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut e = Gf2Matrix::identity(n);
        e.set(i, j, true);
        // E is its own inverse over GF(2).
        g = &e * &g;
        g_inv = &g_inv * &e;
    }
    (g, g_inv)
}

/// A random three-term complex `C_2 → C_1 → C_0` plus a change of basis `(A_k, A_k⁻¹)` per degree.
fn random_complex_and_changes(seed: u64) -> (ChainComplex, Vec<(Gf2Matrix, Gf2Matrix)>) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let dims = [rng.gen_range(1..=5), rng.gen_range(1..=6), rng.gen_range(1..=5)];
    let d1 = pseudo_random_gf2(dims[0], dims[1], rng.gen());
    let kernel = d1.kernel_basis();
    let d2 = if kernel.cols() == 0 {
        Gf2Matrix::zeros(dims[1], dims[2])
    } else {
        &kernel * &pseudo_random_gf2(kernel.cols(), dims[2], rng.gen())
    };
    let complex = ChainComplex::new(dims.to_vec(), vec![d1, d2]).unwrap();
    let changes = dims.iter().map(|&n| invertible(n, &mut rng)).collect();
    (complex, changes)
}

fn mod2_images_all_equal(fan: &Fan) -> bool {
    let m = fan.rays_mod2();
    (1..m.cols()).all(|j| m.column(j) == m.column(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn generated_fans_satisfy_page_and_verdict_invariants((rank, seed, profile) in fan_args()) {
        let fan = random_fan(rank, seed, profile).unwrap();
        let s = SpectralSummary::compute(&fan);
        let v = m_verdict(&fan);
        prop_assert_eq!(v.total_g1, v.total_e2);
        prop_assert!(v.sum_betti_real <= v.total_g1);
        prop_assert_eq!(v.status == MStatus::CertifiedM, v.sum_betti_real == v.total_e2);
        prop_assert_eq!(s.g1.clone(), s.e2.reindexed());
        prop_assert_eq!(fan.stratum(rank).len(), 1);
        prop_assert_eq!(fan.stratum(rank - 1).len(), fan.rays().len());
        if fan.is_complete() {
            let row0: Vec<usize> = (0..=rank as i64).map(|p| s.e2.get(p, 0)).collect();
            let mut expected = vec![0; rank + 1];
            expected[0] = 1;
            prop_assert_eq!(row0, expected);
            if fan.is_simplicial() {
                let h_sum: i64 = fan.h_vector().values.iter().sum();
                prop_assert_eq!(h_sum as usize, fan.maximal_cones().len());
            }
        }
        if rank == 2 && fan.is_complete() {
            let oracle = surface_betti_oracle(&fan).unwrap();
            prop_assert_eq!(oracle.betti_real.to_vec(), s.betti_real.clone());
            let expected_case = if mod2_images_all_equal(&fan) { SurfaceCase::AllEqual } else { SurfaceCase::Distinct };
            prop_assert_eq!(oracle.case, expected_case);
        }
        if let Ok(b) = betti_complex_nonsingular_complete(&fan) {
            let even: Vec<usize> = b.iter().step_by(2).copied().collect();
            prop_assert_eq!(&even, &s.betti_real);
            prop_assert_eq!(b.iter().sum::<usize>(), v.total_e2);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relabeling_keeps_strata_and_pages((rank, seed, profile) in fan_args(), shuffle in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let fan = random_fan(rank, seed, profile).unwrap();
        let mut perm: Vec<usize> = (0..fan.rays().len()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(shuffle));
        let moved = fan.relabel(&perm).unwrap();
        let sizes = |f: &Fan| f.strata().iter().map(Vec::len).collect::<Vec<_>>();
        prop_assert_eq!(sizes(&moved), sizes(&fan));
        let (a, b) = (SpectralSummary::compute(&fan), SpectralSummary::compute(&moved));
        prop_assert_eq!(a.betti_real, b.betti_real);
        prop_assert_eq!(a.e1, b.e1);
        prop_assert_eq!(a.e2, b.e2);
        prop_assert_eq!(a.g0, b.g0);
        prop_assert_eq!(a.g1, b.g1);
    }
}
