//! Rational fans: cones with exact face lattices, stratified by codimension.

mod cone;
mod json;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::gf2::Gf2Matrix;
use crate::intlin::{saturation_index, IntMatrix};

pub(crate) use cone::{cofactor_normal as cone_cofactor_normal, ConeGeometry};
pub use json::FanFile;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("ray {0} is the zero vector")]
    ZeroRay(usize),
    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(usize),
    #[error("ray {index} has {found} coordinates, expected {expected}")]
    WrongLength { index: usize, expected: usize, found: usize },
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),
    #[error("cone {cone:?} refers to ray {index}, which does not exist")]
    RayOutOfRange { cone: Vec<usize>, index: usize },
    #[error("ray {0} belongs to no cone")]
    UnusedRay(usize),
    #[error("cone {0:?} is not pointed")]
    NotPointed(Vec<usize>),
    #[error("ray {ray} is not an extremal ray of cone {cone:?}")]
    RedundantRay { cone: Vec<usize>, ray: usize },
    #[error("cones {0:?} and {1:?} do not meet in a common face")]
    BadIntersection(Vec<usize>, Vec<usize>),
    #[error("ray {ray} has an entry outside the 64-bit range")]
    Overflow { ray: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

impl FanError {
    pub fn is_parse_error(&self) -> bool {
        matches!(self, FanError::Parse { .. })
    }
}

/// A cone of the fan, identified by the sorted indices of its rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub rays: Vec<usize>,
    pub dim: usize,
    /// Indices (into the fan) of all faces, including the cone itself.
    pub faces: Vec<usize>,
    /// Indices of the faces of dimension `dim − 1`.
    pub facets: Vec<usize>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FanOptions {
    /// Pairwise intersection check on maximal cones. `None` enables it up to rank 4.
    pub check_intersections: Option<bool>,
}

impl FanOptions {
    pub fn unchecked() -> Self {
        Self { check_intersections: Some(false) }
    }
}

#[derive(Clone, Debug)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Cone>,
    maximal: Vec<usize>,
    strata: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
    name: Option<String>,
}

/// The h-vector, with a flag telling whether the fan is complete and simplicial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HVector {
    pub values: Vec<i64>,
    pub complete_simplicial: bool,
}

pub(crate) fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

impl Fan {
    pub fn from_maximal_cones(
        rank: usize,
        rays: Vec<Vec<i64>>,
        maximal: Vec<Vec<usize>>,
    ) -> Result<Self, FanError> {
        Self::with_options(rank, rays, maximal, FanOptions::default())
    }

    pub fn with_options(
        rank: usize,
        rays: Vec<Vec<i64>>,
        maximal: Vec<Vec<usize>>,
        options: FanOptions,
    ) -> Result<Self, FanError> {
        validate_rays(rank, &rays)?;
        let big_rays: Vec<Vec<BigInt>> = rays.iter().map(|r| to_big(r)).collect();

        let mut inputs: BTreeSet<Vec<usize>> = BTreeSet::new();
        for cone in &maximal {
            let mut c = cone.clone();
            c.sort_unstable();
            c.dedup();
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::RayOutOfRange { cone: cone.clone(), index: bad });
            }
            inputs.insert(c);
        }

        // Face lattice of every input cone, expressed in global ray indices.
        let mut dims: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut face_sets: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
        dims.insert(Vec::new(), 0);
        face_sets.insert(Vec::new(), vec![Vec::new()]);
        for c in &inputs {
            let gens: Vec<Vec<BigInt>> = c.iter().map(|&i| big_rays[i].clone()).collect();
            let geom = ConeGeometry::new(&gens, rank);
            if !geom.is_pointed() {
                return Err(FanError::NotPointed(c.clone()));
            }
            let local_faces = geom.faces();
            for (k, &ray) in c.iter().enumerate() {
                if !local_faces.contains(&vec![k]) {
                    return Err(FanError::RedundantRay { cone: c.clone(), ray });
                }
            }
            let global: Vec<(Vec<usize>, usize)> = local_faces
                .iter()
                .map(|f| (f.iter().map(|&k| c[k]).collect(), geom.face_dim(f)))
                .collect();
            for (f, d) in &global {
                dims.insert(f.clone(), *d);
                face_sets.entry(f.clone()).or_insert_with(|| {
                    global
                        .iter()
                        .filter(|(g, _)| g.iter().all(|x| f.contains(x)))
                        .map(|(g, _)| g.clone())
                        .collect()
                });
            }
        }

        let check = options.check_intersections.unwrap_or(rank <= 4);
        if check {
            check_intersections(rank, &inputs, &face_sets, &big_rays)?;
        }

        let mut order: Vec<(usize, Vec<usize>)> = dims.iter().map(|(f, &d)| (d, f.clone())).collect();
        order.sort();
        let lookup: HashMap<Vec<usize>, usize> =
            order.iter().enumerate().map(|(i, (_, f))| (f.clone(), i)).collect();
        for i in 0..rays.len() {
            if !lookup.contains_key(&vec![i]) {
                return Err(FanError::UnusedRay(i));
            }
        }

        let mut cones: Vec<Cone> = order
            .iter()
            .map(|(d, f)| {
                let mut faces: Vec<usize> = face_sets[f].iter().map(|g| lookup[g]).collect();
                faces.sort_unstable();
                Cone { rays: f.clone(), dim: *d, faces, facets: Vec::new() }
            })
            .collect();
        for i in 0..cones.len() {
            let dim = cones[i].dim;
            let facets: Vec<usize> =
                cones[i].faces.iter().copied().filter(|&j| cones[j].dim + 1 == dim).collect();
            cones[i].facets = facets;
        }

        let mut is_face_of_other = vec![false; cones.len()];
        for (i, c) in cones.iter().enumerate() {
            for &f in &c.faces {
                if f != i {
                    is_face_of_other[f] = true;
                }
            }
        }
        let maximal: Vec<usize> = (0..cones.len()).filter(|&i| !is_face_of_other[i]).collect();

        let mut strata = vec![Vec::new(); rank + 1];
        for (i, c) in cones.iter().enumerate() {
            strata[rank - c.dim].push(i);
        }

        Ok(Self { rank, rays, cones, maximal, strata, lookup, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.cones[i]
    }

    /// Index of the cone with exactly these rays, if present.
    pub fn cone_index(&self, rays: &[usize]) -> Option<usize> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        self.lookup.get(&key).copied()
    }

    /// The zero cone is always index 0.
    pub fn zero_cone(&self) -> usize {
        0
    }

    pub fn codim(&self, cone: usize) -> usize {
        self.rank - self.cones[cone].dim
    }

    /// `Δ^p`: indices of the cones of codimension `p`.
    pub fn stratum(&self, p: usize) -> &[usize] {
        &self.strata[p]
    }

    pub fn strata(&self) -> &[Vec<usize>] {
        &self.strata
    }

    pub fn maximal_cones(&self) -> &[usize] {
        &self.maximal
    }

    pub fn ray_matrix(&self, cone: usize) -> IntMatrix {
        let cols: Vec<&[i64]> = self.cones[cone].rays.iter().map(|&i| self.rays[i].as_slice()).collect();
        IntMatrix::from_columns(self.rank, &cols)
    }

    /// Pairs `(σ, τ)` with `σ` a facet of `τ`, ordered by `τ`.
    pub fn facet_pairs(&self) -> Vec<(usize, usize)> {
        self.cones
            .iter()
            .enumerate()
            .flat_map(|(t, c)| c.facets.iter().map(move |&s| (s, t)))
            .collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.rays.len() == c.dim)
    }

    /// The cone's rays form part of a basis of the lattice.
    pub fn cone_is_regular(&self, cone: usize) -> bool {
        let c = &self.cones[cone];
        c.rays.len() == c.dim && saturation_index(&self.ray_matrix(cone)).is_one()
    }

    /// The cone is simplicial and its rays stay independent modulo 2.
    pub fn cone_is_mod2_regular(&self, cone: usize) -> bool {
        let c = &self.cones[cone];
        c.rays.len() == c.dim && self.ray_matrix(cone).mod2().rank() == c.dim
    }

    pub fn is_nonsingular(&self) -> bool {
        self.maximal.iter().all(|&c| self.cone_is_regular(c))
    }

    /// Images of the rays in `N/2N`, as columns.
    pub fn rays_mod2(&self) -> Gf2Matrix {
        let cols: Vec<&[i64]> = self.rays.iter().map(Vec::as_slice).collect();
        IntMatrix::from_columns(self.rank, &cols).mod2()
    }

    /// Support equals ℝⁿ: a full-dimensional cone exists, every wall lies on
    /// exactly two full-dimensional cones, and a fixed set of sample
    /// directions is covered.
    pub fn is_complete(&self) -> bool {
        let n = self.rank;
        if n == 0 {
            return true;
        }
        let full: Vec<usize> = self.strata[0].clone();
        if full.is_empty() {
            return false;
        }
        let mut wall_count: HashMap<usize, usize> = HashMap::new();
        for &t in &full {
            for &s in &self.cones[t].facets {
                *wall_count.entry(s).or_default() += 1;
            }
        }
        if self.strata[1].iter().any(|s| wall_count.get(s).copied().unwrap_or(0) != 2) {
            return false;
        }
        let geoms: Vec<ConeGeometry> = full
            .iter()
            .map(|&t| {
                let gens: Vec<Vec<BigInt>> =
                    self.cones[t].rays.iter().map(|&i| to_big(&self.rays[i])).collect();
                ConeGeometry::new(&gens, n)
            })
            .collect();
        sample_directions(n).iter().all(|x| geoms.iter().any(|g| g.contains_full_dim(x)))
    }

    /// `f_{−1}, f_0, …, f_{n−1}`: number of cones of each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.rank + 1];
        for c in &self.cones {
            f[c.dim] += 1;
        }
        f
    }

    /// Binomial transform `Σ f_{i−1} (t−1)^{n−i} = Σ h_k t^{n−k}`.
    pub fn h_vector(&self) -> HVector {
        let n = self.rank;
        let f = self.f_vector();
        let mut h = vec![0i64; n + 1];
        for (i, &fi) in f.iter().enumerate() {
            // (t−1)^{n−i} = Σ_j C(n−i, j) t^j (−1)^{n−i−j}
            let m = n - i;
            for j in 0..=m {
                let sign = if (m - j).is_multiple_of(2) { 1 } else { -1 };
                h[n - j] += sign * binomial(m, j) as i64 * fi as i64;
            }
        }
        HVector { values: h, complete_simplicial: self.is_simplicial() && self.is_complete() }
    }

    /// The same fan with ray `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, FanError> {
        assert_eq!(perm.len(), self.rays.len());
        let mut rays = vec![Vec::new(); self.rays.len()];
        for (i, r) in self.rays.iter().enumerate() {
            rays[perm[i]] = r.clone();
        }
        let maximal =
            self.maximal.iter().map(|&c| self.cones[c].rays.iter().map(|&i| perm[i]).collect()).collect();
        Ok(Self::with_options(self.rank, rays, maximal, FanOptions::unchecked())?.renamed(&self.name))
    }

    /// The image of the fan under a lattice automorphism `g` (rays ↦ g·ray).
    pub fn transform(&self, g: &IntMatrix) -> Result<Self, FanError> {
        assert!(g.is_unimodular(), "ambient change must be unimodular");
        let mut rays = Vec::with_capacity(self.rays.len());
        for (i, r) in self.rays.iter().enumerate() {
            let img = g.mul_vec(&to_big(r));
            let img: Option<Vec<i64>> = img.iter().map(|x| i64::try_from(x).ok()).collect();
            rays.push(img.ok_or(FanError::Overflow { ray: i })?);
        }
        let maximal = self.maximal.iter().map(|&c| self.cones[c].rays.clone()).collect();
        Ok(Self::with_options(self.rank, rays, maximal, FanOptions::unchecked())?.renamed(&self.name))
    }

    fn renamed(mut self, name: &Option<String>) -> Self {
        self.name = name.clone();
        self
    }

    /// Maximal cones as ray lists, in fan order.
    pub fn maximal_ray_sets(&self) -> Vec<Vec<usize>> {
        self.maximal.iter().map(|&c| self.cones[c].rays.clone()).collect()
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn validate_rays(rank: usize, rays: &[Vec<i64>]) -> Result<(), FanError> {
    let mut seen: HashMap<&[i64], usize> = HashMap::new();
    for (i, r) in rays.iter().enumerate() {
        if r.len() != rank {
            return Err(FanError::WrongLength { index: i, expected: rank, found: r.len() });
        }
        if r.iter().all(|&x| x == 0) {
            return Err(FanError::ZeroRay(i));
        }
        let g = r.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g != 1 {
            return Err(FanError::NonPrimitiveRay(i));
        }
        if let Some(&j) = seen.get(r.as_slice()) {
            return Err(FanError::DuplicateRay(j, i));
        }
        seen.insert(r, i);
    }
    Ok(())
}

fn check_intersections(
    rank: usize,
    inputs: &BTreeSet<Vec<usize>>,
    face_sets: &BTreeMap<Vec<usize>, Vec<Vec<usize>>>,
    rays: &[Vec<BigInt>],
) -> Result<(), FanError> {
    let list: Vec<&Vec<usize>> = inputs.iter().collect();
    for (a, &ca) in list.iter().enumerate() {
        for &cb in &list[a + 1..] {
            let shared: Vec<usize> = ca.iter().copied().filter(|i| cb.contains(i)).collect();
            let bad = || FanError::BadIntersection(ca.clone(), cb.clone());
            // The shared rays must span a face of each cone.
            if !face_sets[ca].contains(&shared) || !face_sets[cb].contains(&shared) {
                return Err(bad());
            }
            let ga: Vec<Vec<BigInt>> = ca.iter().map(|&i| rays[i].clone()).collect();
            let gb: Vec<Vec<BigInt>> = cb.iter().map(|&i| rays[i].clone()).collect();
            let gs: Vec<Vec<BigInt>> = shared.iter().map(|&i| rays[i].clone()).collect();
            if !cone::intersection_within_span(&ga, &gb, &gs, rank) {
                return Err(bad());
            }
        }
    }
    Ok(())
}

/// Fixed generic directions used for the covering part of the completeness test.
fn sample_directions(n: usize) -> Vec<Vec<BigInt>> {
    let mut state: i64 = 12_345;
    let mut next = move || {
        state = (state * 1_103_515_245 + 12_345).rem_euclid(1 << 31);
        (state % 193) - 96
    };
    let mut out = Vec::new();
    for _ in 0..16 {
        let v: Vec<i64> = (0..n).map(|_| next()).collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        out.push(v.iter().map(|&x| BigInt::from(x)).collect());
        out.push(v.iter().map(|&x| BigInt::from(-x)).collect());
    }
    out
}
