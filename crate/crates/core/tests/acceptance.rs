//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line, with details on failure.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_homology::analysis::{
    batch_fans, check_cyclic57, dim3_theorem_batch, isolated_singularities_shape, m_verdict,
    surface_betti_oracle, transpose_mismatches, BatchOptions, MStatus, SurfaceCase,
};
use toric_homology::constructions::*;
use toric_homology::fan::Fan;
use toric_homology::gf2::{exterior_power, subsets, ChainComplex, Gf2Matrix};
use toric_homology::orbitalg::{
    augmentation_filtration_dims, diagonal_class_check, graded_piece_basis, group_algebra_map_y,
    subset_mask, y_basis_change, GroupAlgebraElement,
};
use toric_homology::spectral::{
    betti_real, e1_page, g_pages, real_complex, real_complex_y, rightmost_column_split, SpectralSummary,
};

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn cyclic_tables() -> Outcome {
    let start = Instant::now();
    let fan = cyclic_polytope_normal_fan().map_err(|e| e.to_string())?;
    let s = SpectralSummary::compute(&fan);
    let check = check_cyclic57(&s.e2, &s.g1);
    ensure(check.passed(), || format!("mismatches: {:?}", check.mismatches))?;
    let bad = transpose_mismatches(&s.e2, &s.g1);
    ensure(bad.is_empty(), || format!("reindexing fails at {bad:?}"))?;
    ensure(s.e2.total() == 123 && s.g1.total() == 123, || {
        format!("totals {} and {}", s.e2.total(), s.g1.total())
    })?;
    ensure(s.e2.nonzero().count() == 16, || "E2 should have 16 nonzero entries".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("16 E2 + 21 G1 cells, reindexing holds, totals 123 = 123, {elapsed:.2?}"))
}

fn surfaces() -> Outcome {
    let mut fans: Vec<(Fan, SurfaceCase)> = vec![(projective_space_fan(2).unwrap(), SurfaceCase::Distinct)];
    for a in 0..=4 {
        fans.push((hirzebruch_fan(a).unwrap(), SurfaceCase::Distinct));
    }
    fans.push((weighted_projective_fan(&[1, 1, 2]).unwrap(), SurfaceCase::Distinct));
    fans.push((weighted_projective_fan(&[1, 2, 3]).unwrap(), SurfaceCase::Distinct));
    for s in [3, 4, 5, 6] {
        fans.push((same_mod2_surface_fan(s).unwrap(), SurfaceCase::AllEqual));
    }
    for (fan, case) in &fans {
        let s = fan.rays().len();
        let expected = match case {
            SurfaceCase::Distinct => vec![1, s - 2, 1],
            SurfaceCase::AllEqual => vec![1, s - 1, 2],
        };
        let name = fan.name().unwrap_or("?");
        let got = betti_real(fan);
        ensure(got == expected, || format!("{name}: betti_real {got:?}, expected {expected:?}"))?;
        let oracle = surface_betti_oracle(fan).map_err(|e| e.to_string())?;
        ensure(oracle.case == *case, || format!("{name}: oracle case {:?}", oracle.case))?;
        let v = m_verdict(fan);
        let complex_sum: usize = oracle.betti_complex.iter().sum();
        ensure(
            complex_sum == v.total_e2 && complex_sum == v.total_g1 && v.status == MStatus::CertifiedM,
            || format!("{name}: complex Betti sum {complex_sum} vs totals {} / {}", v.total_e2, v.total_g1),
        )?;
    }
    Ok(format!("{} complete surfaces, both cases", fans.len()))
}

fn projective_spaces() -> Outcome {
    for n in 1..=5 {
        let fan = projective_space_fan(n).unwrap();
        let b = betti_real(&fan);
        ensure(b == vec![1; n + 1], || format!("P{n}: betti_real {b:?}"))?;
        let v = m_verdict(&fan);
        ensure(
            (v.sum_betti_real, v.total_e2, v.total_g1) == (n + 1, n + 1, n + 1) && v.status == MStatus::CertifiedM,
            || format!("P{n}: verdict {v:?}"),
        )?;
    }
    Ok("P1..P5 have betti_real (1,...,1) and totals n+1".into())
}

fn h_vectors() -> Outcome {
    let p1 = projective_space_fan(1).unwrap();
    let p1p1 = product_fan(&p1, &p1).unwrap();
    let cases: Vec<(Fan, Vec<usize>)> = vec![
        (projective_space_fan(2).unwrap(), vec![1, 1, 1]),
        (product_fan(&p1p1, &p1).unwrap(), vec![1, 3, 3, 1]),
        (p1p1, vec![1, 2, 1]),
        (hirzebruch_fan(2).unwrap(), vec![1, 2, 1]),
    ];
    for (fan, h) in &cases {
        let name = fan.name().unwrap_or("?").to_string();
        let hv: Vec<usize> = fan.h_vector().values.iter().map(|&x| x as usize).collect();
        ensure(&hv == h, || format!("{name}: h-vector {hv:?}, expected {h:?}"))?;
        let b = betti_real(fan);
        ensure(&b == h, || format!("{name}: betti_real {b:?}, h {h:?}"))?;
    }
    Ok("P2, P1xP1, P1xP1xP1, F2: b_k(X(R)) = h_k".into())
}

fn theorem_batch() -> Outcome {
    let start = Instant::now();
    let report = dim3_theorem_batch(300, 42).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(report.all_certified() && report.max_gap == 0, || format!("{report:?}"))?;
    let fans = batch_fans(300, 42, BatchOptions::default());
    let singular = fans.iter().filter(|(_, f)| !f.is_nonsingular()).count();
    let incomplete = fans.iter().filter(|(_, f)| !f.is_complete()).count();
    ensure(singular > 0 && incomplete > 0, || "batch lacks singular or non-complete fans".into())?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("300 fans CertifiedM, gap 0 ({singular} singular, {incomplete} non-complete), {elapsed:.2?}"))
}

/// `dim I^k` computed from `I^k = I^{k−1} · I = span{b · y_i}`.
fn ideal_power_dims(r: usize) -> Vec<usize> {
    let size = 1usize << r;
    let span_dim = |vs: &[GroupAlgebraElement]| {
        let cols: Vec<Vec<bool>> = vs.iter().map(|v| v.coords().to_vec()).collect();
        if cols.is_empty() {
            0
        } else {
            Gf2Matrix::from_columns(size, &cols).rank()
        }
    };
    let basis_of = |vs: Vec<GroupAlgebraElement>| {
        let mut kept: Vec<GroupAlgebraElement> = Vec::new();
        for v in vs {
            kept.push(v);
            if span_dim(&kept) < kept.len() {
                kept.pop();
            }
        }
        kept
    };
    let mut dims = vec![size];
    let mut current: Vec<GroupAlgebraElement> = (0..size).map(|g| GroupAlgebraElement::point(r, g)).collect();
    for _ in 1..=r + 1 {
        let products: Vec<GroupAlgebraElement> = current
            .iter()
            .flat_map(|b| (0..r).map(move |i| b * &GroupAlgebraElement::y(r, 1 << i)))
            .collect();
        current = basis_of(products);
        dims.push(current.len());
    }
    dims
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Gf2Matrix {
    let mut m = Gf2Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.gen_bool(0.5));
        }
    }
    m
}

fn algebra_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for r in 0..=8 {
        let y = y_basis_change(r);
        ensure(&y * &y == Gf2Matrix::identity(1 << r), || format!("Y_{r} is not an involution"))?;
        let expected: Vec<usize> = (0..=r).map(|k| (k..=r).map(|j| binom(r, j)).sum()).collect();
        let dims = augmentation_filtration_dims(r);
        ensure(dims[..=r] == expected[..], || format!("r={r}: filtration dims {dims:?}"))?;
        for k in 0..=r {
            let g = graded_piece_basis(r, k).cols();
            ensure(g == binom(r, k), || format!("r={r}: dim Gr^{k} = {g}"))?;
        }
        if r <= 6 {
            let independent = ideal_power_dims(r);
            ensure(independent[..=r] == expected[..] && independent[r + 1] == 0, || {
                format!("r={r}: ideal powers {independent:?}")
            })?;
        }
    }
    for _ in 0..200 {
        let r = rng.gen_range(1..=8);
        let mut coords: Vec<bool> = (0..1usize << r).map(|_| rng.gen_bool(0.5)).collect();
        if coords.iter().filter(|&&c| c).count() % 2 == 1 {
            coords[0] = !coords[0];
        }
        let a = GroupAlgebraElement::from_coords(r, coords);
        ensure(!a.augmentation() && (&a * &a).is_zero(), || format!("a*a != 0 for {a:?}"))?;
    }
    ensure(diagonal_class_check(), || "diagonal class identity fails".into())?;
    let mut tested = 0;
    while tested < 100 {
        let a = rng.gen_range(1..=6);
        let b = rng.gen_range(1..=a);
        let m = random_matrix(&mut rng, b, a);
        if m.rank() < b {
            continue;
        }
        let big = group_algebra_map_y(&m);
        for k in 0..=b {
            let rows: Vec<usize> = subsets(b, k).iter().map(|s| subset_mask(s)).collect();
            let cols: Vec<usize> = subsets(a, k).iter().map(|s| subset_mask(s)).collect();
            ensure(big.submatrix(&rows, &cols) == exterior_power(&m, k), || {
                format!("Gr^{k} action differs from the exterior power for {m:?}")
            })?;
        }
        tested += 1;
    }
    Ok("r <= 8 involution and filtration dims, 200 squares, diagonal class, 100 Gr actions".into())
}

fn example_fans() -> Vec<Fan> {
    let p1 = projective_space_fan(1).unwrap();
    vec![
        projective_space_fan(2).unwrap(),
        projective_space_fan(3).unwrap(),
        hirzebruch_fan(2).unwrap(),
        product_fan(&p1, &p1).unwrap(),
        weighted_projective_fan(&[1, 1, 2]).unwrap(),
        weighted_projective_fan(&[1, 2, 3]).unwrap(),
        same_mod2_surface_fan(4).unwrap(),
        square_pyramid_fan(),
        same_mod2_threefold_fan(),
        torus_fan(2),
        affine_fan(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]]).unwrap(),
        random_fan(3, 5, Profile::Subfan).unwrap(),
    ]
}

fn complex_is_closed(c: &ChainComplex) -> bool {
    (2..=c.top_degree()).all(|k| (c.boundary(k - 1) * c.boundary(k)).is_zero())
}

type Entries = Vec<(i64, i64, usize)>;

fn signature(fan: &Fan) -> (Vec<usize>, Entries, Entries, Entries) {
    let s = SpectralSummary::compute(fan);
    (s.betti_real, s.e1.entries().collect(), s.e2.entries().collect(), s.g1.entries().collect())
}

fn structural_suite() -> Outcome {
    let mut fans = example_fans();
    fans.push(cyclic_polytope_normal_fan().unwrap());
    fans.extend(batch_fans(300, 42, BatchOptions::default()).into_iter().map(|(_, f)| f));
    let mut complexes = 0;
    for fan in &fans {
        let name = fan.name().unwrap_or("?").to_string();
        let (_, rows) = e1_page(fan);
        let mut all: Vec<ChainComplex> = rows;
        all.push(real_complex(fan).complex);
        all.push(real_complex_y(fan).complex);
        all.extend(g_pages(fan).columns);
        for c in &all {
            ensure(complex_is_closed(c), || format!("{name}: d∘d ≠ 0"))?;
        }
        complexes += all.len();
        ensure(rightmost_column_split(fan), || format!("{name}: split fails"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for fan in example_fans() {
        let name = fan.name().unwrap_or("?").to_string();
        let base = signature(&fan);
        let n = fan.rays().len();
        for _ in 0..20 {
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let moved = fan.relabel(&perm).map_err(|e| e.to_string())?;
            ensure(signature(&moved) == base, || format!("{name}: pages change under relabeling {perm:?}"))?;
            let g = random_unimodular(&mut rng, fan.rank(), 6);
            let moved = fan.transform(&g).map_err(|e| e.to_string())?;
            ensure(signature(&moved) == base, || format!("{name}: pages change under an ambient change"))?;
        }
    }
    let shape = isolated_singularities_shape(&square_pyramid_fan()).map_err(|e| e.to_string())?;
    ensure(shape, || "square pyramid E2 leaves the lines p=q, p=q+1".into())?;
    Ok(format!("{complexes} complexes closed, split on {} fans, 20+20 symmetries on 12 fans, isolated shape", fans.len()))
}

fn main() {
    let criteria: [(&str, Criterion); 7] = [
        ("cyclic-polytope E2 and G1 tables", cyclic_tables),
        ("surface classification", surfaces),
        ("projective spaces", projective_spaces),
        ("h-vector identity", h_vectors),
        ("rank <= 3 batch of 300", theorem_batch),
        ("group algebra suite", algebra_suite),
        ("structural suite", structural_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
