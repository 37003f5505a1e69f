//! Standard fans: projective and weighted projective spaces, Hirzebruch
//! surfaces, products, tori, single cones, the normal fan of a cyclic
//! polytope, and a seeded random generator in rank ≤ 3.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::{Fan, FanError, FanOptions};
use crate::intlin::{primitive, quotient_projection, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("the two facet enumerations of the cyclic polytope disagree")]
    HullMismatch,
    #[error(transparent)]
    Fan(#[from] FanError),
}

type Result<T> = std::result::Result<T, ConstructionError>;

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Rays `e_1..e_n, −(e_1+…+e_n)`; maximal cones are all `n`-subsets.
pub fn projective_space_fan(n: usize) -> Result<Fan> {
    if n == 0 {
        return Err(ConstructionError::InvalidParameter("projective space needs n ≥ 1".into()));
    }
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
    rays.push(vec![-1; n]);
    let cones = (0..=n).combinations(n).collect();
    Ok(Fan::from_maximal_cones(n, rays, cones)?.with_name(format!("P{n}")))
}

/// Rays `(1,0), (0,1), (−1,a), (0,−1)`.
pub fn hirzebruch_fan(a: i64) -> Result<Fan> {
    let rays = vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]];
    let cones = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]];
    Ok(Fan::from_maximal_cones(2, rays, cones)?.with_name(format!("F{a}")))
}

/// Cones are products of maximal cones of the factors.
pub fn product_fan(f: &Fan, g: &Fan) -> Result<Fan> {
    let (n, m) = (f.rank(), g.rank());
    let mut rays: Vec<Vec<i64>> = f.rays().iter().map(|r| [r.as_slice(), &vec![0; m]].concat()).collect();
    rays.extend(g.rays().iter().map(|r| [&vec![0; n], r.as_slice()].concat()));
    let off = f.rays().len();
    let mut cones = Vec::new();
    for a in f.maximal_ray_sets() {
        for b in g.maximal_ray_sets() {
            cones.push(a.iter().copied().chain(b.iter().map(|i| i + off)).collect());
        }
    }
    let name = match (f.name(), g.name()) {
        (Some(a), Some(b)) => format!("{a}x{b}"),
        _ => "product".to_string(),
    };
    Ok(Fan::from_maximal_cones(n + m, rays, cones)?.with_name(name))
}

/// Weighted projective space `P(q_0, …, q_n)` in the lattice `ℤ^{n+1}/ℤ·q`.
pub fn weighted_projective_fan(weights: &[i64]) -> Result<Fan> {
    if weights.len() < 2 || weights.iter().any(|&w| w <= 0) {
        return Err(ConstructionError::InvalidParameter("weights must be ≥ 2 positive integers".into()));
    }
    if weights.iter().fold(0i64, |g, &w| g.gcd(&w)) != 1 {
        return Err(ConstructionError::InvalidParameter("weights must be coprime".into()));
    }
    let n = weights.len() - 1;
    let q = IntMatrix::from_columns(n + 1, &[weights]);
    let p = quotient_projection(n + 1, &q);
    let rays = (0..=n)
        .map(|i| to_i64(&primitive(&p.column(i))))
        .collect::<Vec<_>>();
    let cones = (0..=n).combinations(n).collect();
    let name = format!("P({})", weights.iter().map(i64::to_string).join(","));
    Ok(Fan::from_maximal_cones(n, rays, cones)?.with_name(name))
}

/// The fan consisting of the zero cone only.
pub fn torus_fan(n: usize) -> Fan {
    Fan::from_maximal_cones(n, vec![], vec![]).expect("zero cone").with_name(format!("T{n}"))
}

/// A single cone and its faces.
pub fn affine_fan(rank: usize, rays: Vec<Vec<i64>>) -> Result<Fan> {
    let all = (0..rays.len()).collect();
    Ok(Fan::from_maximal_cones(rank, rays, vec![all])?)
}

/// A complete surface fan with `s ≥ 3` rays, all congruent to `(1,0)` mod 2.
pub fn same_mod2_surface_fan(s: usize) -> Result<Fan> {
    if s < 3 {
        return Err(ConstructionError::InvalidParameter(format!(
            "a complete surface fan needs at least 3 rays, got {s}"
        )));
    }
    let half = (s / 2) as i64;
    let rays: Vec<Vec<i64>> = if s.is_multiple_of(2) {
        (0..half).map(|k| vec![1, 2 * k]).chain((0..half).map(|k| vec![-1, -2 * k])).collect()
    } else {
        (0..half)
            .map(|k| vec![1, 2 * k])
            .chain(std::iter::once(vec![-1, 2]))
            .chain((1..=half).map(|k| vec![-1, -2 * k]))
            .collect()
    };
    let cones = (0..s).map(|i| vec![i, (i + 1) % s]).collect();
    Ok(Fan::from_maximal_cones(2, rays, cones)?.with_name(format!("same-mod2-{s}")))
}

/// Facets of the cyclic polytope with `m` vertices in dimension `d` by Gale's evenness condition.
pub fn cyclic_facets_gale(m: usize, d: usize) -> BTreeSet<Vec<usize>> {
    (0..m)
        .combinations(d)
        .filter(|s| {
            let outside: Vec<usize> = (0..m).filter(|i| !s.contains(i)).collect();
            outside.iter().tuple_combinations().all(|(&i, &j)| s.iter().filter(|&&k| i < k && k < j).count() % 2 == 0)
        })
        .collect()
}

fn moment_point(t: i64, d: usize) -> Vec<BigInt> {
    (1..=d as u32).map(|e| BigInt::from(t).pow(e)).collect()
}

/// Facets of the cyclic polytope with vertices `(t, t², …, t^d)`, `t = 0..m`, by
/// testing every `d`-subset of vertices for a supporting hyperplane. Returns
/// each facet with its primitive inner normal.
pub fn cyclic_facets_hull(m: usize, d: usize) -> Vec<(Vec<usize>, Vec<BigInt>)> {
    let pts: Vec<Vec<BigInt>> = (0..m as i64).map(|t| moment_point(t, d)).collect();
    let mut out = Vec::new();
    for s in (0..m).combinations(d) {
        let base = &pts[s[0]];
        let diffs: Vec<Vec<BigInt>> =
            s[1..].iter().map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
        let mut normal = crate::fan::cone_cofactor_normal(&diffs, d);
        if normal.iter().all(Zero::is_zero) {
            continue;
        }
        let offset: BigInt = normal.iter().zip(base).map(|(a, b)| a * b).sum();
        let values: Vec<BigInt> = pts
            .iter()
            .map(|p| normal.iter().zip(p).map(|(a, b)| a * b).sum::<BigInt>() - &offset)
            .collect();
        let pos = values.iter().any(Signed::is_positive);
        let neg = values.iter().any(Signed::is_negative);
        if pos && neg {
            continue;
        }
        if neg {
            normal.iter_mut().for_each(|x| *x = -std::mem::take(x));
        }
        out.push((s, primitive(&normal)));
    }
    out
}

fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).expect("coordinate fits in 64 bits")).collect()
}

/// Normal fan of the cyclic polytope with `m` vertices in dimension `d`.
pub fn cyclic_polytope_normal_fan_of(m: usize, d: usize) -> Result<Fan> {
    let gale = cyclic_facets_gale(m, d);
    let hull = cyclic_facets_hull(m, d);
    let hull_sets: BTreeSet<Vec<usize>> = hull.iter().map(|(s, _)| s.clone()).collect();
    if gale != hull_sets {
        return Err(ConstructionError::HullMismatch);
    }
    let rays: Vec<Vec<i64>> = hull.iter().map(|(_, n)| to_i64(n)).collect();
    let cones: Vec<Vec<usize>> = (0..m)
        .map(|v| hull.iter().enumerate().filter(|(_, (s, _))| s.contains(&v)).map(|(i, _)| i).collect())
        .collect();
    Ok(Fan::with_options(d, rays, cones, FanOptions::unchecked())?.with_name(format!("cyclic-{d}-{m}")))
}

/// Normal fan of the five-dimensional cyclic polytope on `(k, k², …, k⁵)`, `k = 0..6`.
pub fn cyclic_polytope_normal_fan() -> Result<Fan> {
    Ok(cyclic_polytope_normal_fan_of(7, 5)?.with_name("cyclic57"))
}

/// Complete rank-3 fan: the cone over the square with rays `(±1,0,1), (0,±1,1)`
/// plus four regular cones to the apex `(0,0,−1)`. Only the square cone is singular.
pub fn square_pyramid_fan() -> Fan {
    let rays = vec![vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1], vec![0, 0, -1]];
    let cones = vec![vec![0, 1, 2, 3], vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![3, 0, 4]];
    Fan::from_maximal_cones(3, rays, cones).expect("valid fan").with_name("square-pyramid")
}

/// Complete simplicial rank-3 fan whose four rays `(−1,−1,−1), (−1,1,1), (1,−1,1), (1,1,−1)`
/// all reduce to `(1,1,1)` mod 2.
pub fn same_mod2_threefold_fan() -> Fan {
    let rays = vec![vec![-1, -1, -1], vec![-1, 1, 1], vec![1, -1, 1], vec![1, 1, -1]];
    let cones = (0..4).combinations(3).collect();
    Fan::from_maximal_cones(3, rays, cones).expect("valid fan").with_name("same-mod2-3fold")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Complete,
    Subfan,
    Affine,
}

impl Profile {
    pub const ALL: [Profile; 3] = [Profile::Complete, Profile::Subfan, Profile::Affine];
}

impl std::str::FromStr for Profile {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "complete" => Ok(Profile::Complete),
            "subfan" => Ok(Profile::Subfan),
            "affine" => Ok(Profile::Affine),
            _ => Err(format!("unknown profile {s:?}")),
        }
    }
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Profile::Complete => "complete",
            Profile::Subfan => "subfan",
            Profile::Affine => "affine",
        })
    }
}

fn random_primitive(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 1 {
            return v;
        }
    }
}

fn distinct_primitive(rng: &mut ChaCha8Rng, n: usize, bound: i64, count: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    while out.len() < count {
        let v = random_primitive(rng, n, bound);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Exact angular order of plane vectors starting from the positive x-axis.
fn angle_cmp(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    let half = |v: &[i64]| if v[1] > 0 || (v[1] == 0 && v[0] > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&(a[0] * b[1] - a[1] * b[0])))
}

fn random_complete_rank2(rng: &mut ChaCha8Rng) -> (Vec<Vec<i64>>, Vec<Vec<usize>>) {
    loop {
        let m = rng.gen_range(3..=7);
        let mut rays = distinct_primitive(rng, 2, 3, m);
        rays.sort_by(|a, b| angle_cmp(a, b));
        let ok = (0..m).all(|i| {
            let (a, b) = (&rays[i], &rays[(i + 1) % m]);
            a[0] * b[1] - a[1] * b[0] > 0
        });
        if ok {
            let cones = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
            return (rays, cones);
        }
    }
}

fn cross(a: &[i64], b: &[i64]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn random_complete_rank3(rng: &mut ChaCha8Rng) -> (Vec<Vec<i64>>, Vec<Vec<usize>>) {
    'draw: loop {
        let m = rng.gen_range(4..=8);
        let pts = distinct_primitive(rng, 3, 2, m);
        let mut triangles = Vec::new();
        for (i, j, k) in (0..m).tuple_combinations() {
            let u: Vec<i64> = (0..3).map(|c| pts[j][c] - pts[i][c]).collect();
            let v: Vec<i64> = (0..3).map(|c| pts[k][c] - pts[i][c]).collect();
            let nrm = cross(&u, &v);
            if nrm == [0, 0, 0] {
                continue;
            }
            let side = |p: &[i64]| dot3(&nrm, p) - dot3(&nrm, &pts[i]);
            let vals: Vec<i64> = (0..m).filter(|&l| l != i && l != j && l != k).map(|l| side(&pts[l])).collect();
            let pos = vals.iter().any(|&x| x > 0);
            let neg = vals.iter().any(|&x| x < 0);
            if pos && neg {
                continue;
            }
            if vals.contains(&0) {
                // four coplanar points on the hull boundary
                continue 'draw;
            }
            // the origin must lie strictly on the inner side
            let origin = side(&[0, 0, 0]);
            if origin == 0 || (origin > 0) != pos && !vals.is_empty() {
                continue 'draw;
            }
            triangles.push(vec![i, j, k]);
        }
        if triangles.len() < 4 {
            continue;
        }
        let used: BTreeSet<usize> = triangles.iter().flatten().copied().collect();
        let remap: Vec<Option<usize>> =
            (0..m).map(|i| used.iter().position(|&u| u == i)).collect();
        let rays: Vec<Vec<i64>> = used.iter().map(|&i| pts[i].clone()).collect();
        let cones = triangles.iter().map(|t| t.iter().map(|&i| remap[i].unwrap()).collect()).collect();
        return (rays, cones);
    }
}

fn random_complete(rng: &mut ChaCha8Rng, rank: usize) -> (Vec<Vec<i64>>, Vec<Vec<usize>>) {
    match rank {
        1 => (vec![vec![1], vec![-1]], vec![vec![0], vec![1]]),
        2 => random_complete_rank2(rng),
        _ => random_complete_rank3(rng),
    }
}

/// Keeps only rays that occur in some cone, renumbering them.
fn compact(rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> (Vec<Vec<i64>>, Vec<Vec<usize>>) {
    let used: BTreeSet<usize> = cones.iter().flatten().copied().collect();
    let remap: Vec<Option<usize>> = (0..rays.len()).map(|i| used.iter().position(|&u| u == i)).collect();
    let new_rays = used.iter().map(|&i| rays[i].clone()).collect();
    let new_cones = cones.into_iter().map(|c| c.into_iter().map(|i| remap[i].unwrap()).collect()).collect();
    (new_rays, new_cones)
}

fn random_affine(rng: &mut ChaCha8Rng, rank: usize) -> (Vec<Vec<i64>>, Vec<Vec<usize>>) {
    // Generators in an open half-space, then a random lattice automorphism.
    let k = if rank == 1 { rng.gen_range(0..=1) } else { rng.gen_range(0..=rank + 1) };
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for _ in 0..64 {
        if gens.len() == k {
            break;
        }
        let mut v = random_primitive(rng, rank, 2);
        v[rank - 1] = v[rank - 1].abs().max(1);
        let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
        let v: Vec<i64> = v.iter().map(|x| x / g).collect();
        if !gens.contains(&v) {
            gens.push(v);
        }
    }
    let big: Vec<Vec<BigInt>> = gens.iter().map(|g| crate::fan::to_big(g)).collect();
    let geom = crate::fan::ConeGeometry::new(&big, rank);
    let faces = geom.faces();
    let extremal: Vec<Vec<i64>> =
        (0..gens.len()).filter(|&i| faces.contains(&vec![i])).map(|i| gens[i].clone()).collect();
    let g = random_unimodular(rng, rank, 4);
    let rays: Vec<Vec<i64>> = extremal
        .iter()
        .map(|r| to_i64(&g.mul_vec(&crate::fan::to_big(r))))
        .collect();
    let all = (0..rays.len()).collect();
    (rays, vec![all])
}

/// Product of random elementary matrices with small multipliers.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> IntMatrix {
    let mut g = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            g[(0, 0)] = BigInt::from(-1);
        }
        return g;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = BigInt::from(rng.gen_range(-1i64..=1));
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = k;
        g = &e * &g;
        if rng.gen_bool(0.25) {
            let mut s = IntMatrix::identity(n);
            s[(i, i)] = BigInt::from(0);
            s[(j, j)] = BigInt::from(0);
            s[(i, j)] = BigInt::from(1);
            s[(j, i)] = BigInt::from(-1);
            g = &s * &g;
        }
    }
    g
}

/// Deterministic random fan of rank 1–3.
pub fn random_fan(rank: usize, seed: u64, profile: Profile) -> Result<Fan> {
    if !(1..=3).contains(&rank) {
        return Err(ConstructionError::InvalidParameter(format!("random fans need rank 1..=3, got {rank}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((rank as u64) << 56));
    let (rays, cones) = match profile {
        Profile::Complete => random_complete(&mut rng, rank),
        Profile::Subfan => {
            let (rays, cones) = random_complete(&mut rng, rank);
            let mut kept = Vec::new();
            for c in cones {
                if rng.gen_bool(0.5) {
                    kept.push(c);
                } else if c.len() > 1 && rng.gen_bool(0.4) {
                    // keep a random proper face of the dropped simplicial cone
                    let size = rng.gen_range(1..c.len());
                    let mut face = c.clone();
                    face.shuffle(&mut rng);
                    face.truncate(size);
                    kept.push(face);
                }
            }
            compact(rays, kept)
        }
        Profile::Affine => random_affine(&mut rng, rank),
    };
    Ok(Fan::from_maximal_cones(rank, rays, cones)?.with_name(format!("random-{profile}-r{rank}-s{seed}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::betti_real;

    #[test]
    fn projective_spaces() {
        let p1 = projective_space_fan(1).unwrap();
        assert_eq!(p1.cones().len(), 3);
        let p2 = projective_space_fan(2).unwrap();
        assert_eq!(p2.cones().len(), 7);
        let p3 = projective_space_fan(3).unwrap();
        assert_eq!(p3.rays().len(), 4);
        assert_eq!(p3.maximal_cones().len(), 4);
        assert!(p3.is_nonsingular());
        assert!(projective_space_fan(0).is_err());
    }

    #[test]
    fn hirzebruch_zero_is_product_of_lines() {
        let f0 = hirzebruch_fan(0).unwrap();
        let p1 = projective_space_fan(1).unwrap();
        let prod = product_fan(&p1, &p1).unwrap();
        assert_eq!(f0.f_vector(), prod.f_vector());
        assert_eq!(betti_real(&f0), betti_real(&prod));
        assert!(prod.is_complete());
    }

    #[test]
    fn weighted_plane() {
        let f = weighted_projective_fan(&[1, 1, 2]).unwrap();
        assert!(f.is_complete());
        assert!(!f.is_nonsingular());
        assert_eq!(f.rays().len(), 3);
        // Two rays share an image mod 2, one differs.
        let m = f.rays_mod2();
        let cols: BTreeSet<Vec<bool>> = (0..3).map(|j| m.column(j)).collect();
        assert_eq!(cols.len(), 2);
        assert!(weighted_projective_fan(&[2, 4]).is_err());
        assert!(weighted_projective_fan(&[1, 0, 1]).is_err());
    }

    #[test]
    fn same_mod2_surfaces() {
        let f = same_mod2_surface_fan(4).unwrap();
        assert_eq!(f.rays(), &[vec![1, 0], vec![1, 2], vec![-1, 0], vec![-1, -2]]);
        assert!(f.is_complete());
        for s in 3..=8 {
            let f = same_mod2_surface_fan(s).unwrap();
            assert!(f.is_complete(), "s = {s}");
            let m = f.rays_mod2();
            assert!((0..s).all(|j| m.column(j) == vec![true, false]));
        }
        assert!(same_mod2_surface_fan(2).is_err());
        let six = same_mod2_surface_fan(6).unwrap();
        assert!(six.rays().contains(&vec![1, 4]) && six.rays().contains(&vec![-1, -4]));
    }

    #[test]
    fn gale_evenness_counts() {
        // Upper bound theorem for odd d = 2k+1: 2·C(m−k−1, k) facets.
        assert_eq!(cyclic_facets_gale(7, 5).len(), 12);
        assert_eq!(cyclic_facets_gale(8, 5).len(), 2 * 10);
        assert_eq!(cyclic_facets_gale(6, 4).len(), 9);
        assert_eq!(cyclic_facets_gale(5, 2).len(), 5);
    }

    #[test]
    fn hull_agrees_with_gale() {
        for (m, d) in [(7, 5), (6, 3), (6, 4), (8, 4)] {
            let hull: BTreeSet<Vec<usize>> = cyclic_facets_hull(m, d).into_iter().map(|(s, _)| s).collect();
            assert_eq!(hull, cyclic_facets_gale(m, d), "C({m},{d})");
        }
    }

    #[test]
    fn cyclic_fan_shape() {
        let f = cyclic_polytope_normal_fan().unwrap();
        assert_eq!(f.rays().len(), 12);
        assert_eq!(f.stratum(0).len(), 7);
        // each facet has five vertices
        let incidences: usize = f.stratum(0).iter().map(|&c| f.cone(c).rays.len()).sum();
        assert_eq!(incidences, 12 * 5);
        assert!(f.is_complete());
    }

    #[test]
    fn random_fans_are_deterministic_and_valid() {
        for rank in 1..=3 {
            for profile in Profile::ALL {
                for seed in 0..10 {
                    let a = random_fan(rank, seed, profile).unwrap();
                    let b = random_fan(rank, seed, profile).unwrap();
                    assert_eq!(a.write_json(), b.write_json());
                    if profile == Profile::Complete {
                        assert!(a.is_complete(), "{}", a.write_json());
                    }
                }
            }
        }
        assert!(random_fan(4, 0, Profile::Complete).is_err());
    }

    #[test]
    fn special_threefolds() {
        let sq = square_pyramid_fan();
        assert!(sq.is_complete());
        assert!(!sq.is_simplicial());
        let t = same_mod2_threefold_fan();
        assert!(t.is_complete());
        assert!(!t.is_nonsingular());
    }
}
