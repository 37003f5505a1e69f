//! Per-orbit algebra: quotient lattices `N(σ)`, their reductions mod 2, the
//! exterior algebra model of torus homology, and group algebras of
//! elementary abelian 2-groups with the augmentation-ideal filtration.
//!
//! Group elements of `(ℤ/2)^r` are bitmasks (bit `i` = coordinate `i`). The
//! y-basis element `y^S = Π_{i∈S} ([0] + [e_i])` is indexed by the same
//! bitmask read as the subset `S`, so `I^k` is the span of masks of popcount
//! at least `k`.

use std::ops::{Add, Mul};

use thiserror::Error;

use crate::fan::Fan;
use crate::gf2::{subsets, Gf2Matrix};
use crate::intlin::{quotient_lattice, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("cone {face} is not a face of cone {cone}")]
    NotAFace { face: usize, cone: usize },
}

/// The lattice `N(σ) = N / N_σ` of a cone, through a fixed integral projection.
#[derive(Clone, Debug)]
pub struct OrbitLattice {
    pub cone: usize,
    pub codim: usize,
    /// `ℤⁿ → ℤ^codim`, kernel `N_σ`.
    pub projection: IntMatrix,
    /// A right inverse of `projection`.
    pub section: IntMatrix,
    /// `V(σ) = N(σ) ⊗ ℤ/2` coordinates of the standard basis of `N/2N`.
    pub projection_mod2: Gf2Matrix,
}

pub fn orbit_lattice(fan: &Fan, cone: usize) -> OrbitLattice {
    let q = quotient_lattice(fan.rank(), &fan.ray_matrix(cone));
    debug_assert_eq!(fan.rank() - q.rank, fan.codim(cone));
    OrbitLattice {
        cone,
        codim: fan.rank() - q.rank,
        projection_mod2: q.projection.mod2(),
        projection: q.projection,
        section: q.section,
    }
}

/// Orbit lattices of every cone of a fan, computed once.
#[derive(Clone, Debug)]
pub struct FanOrbits<'a> {
    fan: &'a Fan,
    lattices: Vec<OrbitLattice>,
}

impl<'a> FanOrbits<'a> {
    pub fn new(fan: &'a Fan) -> Self {
        let lattices = (0..fan.cones().len()).map(|c| orbit_lattice(fan, c)).collect();
        Self { fan, lattices }
    }

    pub fn fan(&self) -> &'a Fan {
        self.fan
    }

    pub fn lattice(&self, cone: usize) -> &OrbitLattice {
        &self.lattices[cone]
    }

    /// The map `V(σ) → V(τ)` induced by `N(σ) ↠ N(τ)`, for `σ` a face of `τ`.
    pub fn induced_projection_mod2(&self, sigma: usize, tau: usize) -> Result<Gf2Matrix, OrbitError> {
        if !self.fan.cone(tau).faces.contains(&sigma) {
            return Err(OrbitError::NotAFace { face: sigma, cone: tau });
        }
        let m = &self.lattices[tau].projection * &self.lattices[sigma].section;
        Ok(m.mod2())
    }
}

/// Convenience wrapper building the orbit lattices on the fly.
pub fn induced_projection_mod2(fan: &Fan, sigma: usize, tau: usize) -> Result<Gf2Matrix, OrbitError> {
    FanOrbits::new(fan).induced_projection_mod2(sigma, tau)
}

/// `dim H_q(T^p; ℤ/2) = C(p, q)` for `q = 0..=p`.
pub fn torus_homology_dims(p: usize) -> Vec<usize> {
    (0..=p).map(|q| crate::fan::binomial(p, q)).collect()
}

fn apply_mod2(m: &Gf2Matrix, g: usize) -> usize {
    (0..m.rows()).fold(0, |acc, i| {
        let bit = m.ones_in_row(i).filter(|&j| g >> j & 1 == 1).count() % 2;
        acc | (bit << i)
    })
}

/// Matrix `2^b × 2^a` of the group algebra map induced by `m : (ℤ/2)^a → (ℤ/2)^b`
/// in the point bases: `[g] ↦ [m·g]`.
pub fn group_algebra_map(m: &Gf2Matrix) -> Gf2Matrix {
    let (a, b) = (m.cols(), m.rows());
    let mut out = Gf2Matrix::zeros(1 << b, 1 << a);
    for g in 0..1usize << a {
        out.set(apply_mod2(m, g), g, true);
    }
    out
}

/// Change of basis from the y-basis to the point basis: entry `(g, S)` is 1
/// iff `g ⊆ S`. It is its own inverse over GF(2).
pub fn y_basis_change(r: usize) -> Gf2Matrix {
    let n = 1usize << r;
    let mut z = Gf2Matrix::zeros(n, n);
    for s in 0..n {
        // enumerate submasks of s
        let mut g = s;
        loop {
            z.set(g, s, true);
            if g == 0 {
                break;
            }
            g = (g - 1) & s;
        }
    }
    z
}

/// In-place superset-sum transform. Converts point coordinates to y-coordinates and back.
pub fn y_transform(coords: &mut [bool]) {
    let n = coords.len();
    debug_assert!(n.is_power_of_two());
    let mut bit = 1;
    while bit < n {
        for mask in 0..n {
            if mask & bit == 0 {
                let hi = coords[mask | bit];
                coords[mask] ^= hi;
            }
        }
        bit <<= 1;
    }
}

/// `[dim I^0, …, dim I^r, dim I^{r+1} = 0]`.
pub fn augmentation_filtration_dims(r: usize) -> Vec<usize> {
    let mut dims: Vec<usize> =
        (0..=r).map(|k| (k..=r).map(|j| crate::fan::binomial(r, j)).sum()).collect();
    dims.push(0);
    dims
}

/// Bitmask of a subset given as sorted indices.
pub fn subset_mask(s: &[usize]) -> usize {
    s.iter().fold(0, |m, &i| m | 1 << i)
}

/// Columns `y^S`, `|S| = k`, in the point basis, ordered like the exterior power basis.
pub fn graded_piece_basis(r: usize, k: usize) -> Gf2Matrix {
    let z = y_basis_change(r);
    let cols: Vec<usize> = subsets(r, k).iter().map(|s| subset_mask(s)).collect();
    let all: Vec<usize> = (0..1 << r).collect();
    z.submatrix(&all, &cols)
}

/// Element of the group algebra `F₂[(ℤ/2)^r]` in the point basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupAlgebraElement {
    rank: usize,
    coords: Vec<bool>,
}

impl GroupAlgebraElement {
    pub fn zero(rank: usize) -> Self {
        Self { rank, coords: vec![false; 1 << rank] }
    }

    pub fn point(rank: usize, g: usize) -> Self {
        let mut e = Self::zero(rank);
        e.coords[g] = true;
        e
    }

    pub fn one(rank: usize) -> Self {
        Self::point(rank, 0)
    }

    pub fn from_coords(rank: usize, coords: Vec<bool>) -> Self {
        assert_eq!(coords.len(), 1 << rank);
        Self { rank, coords }
    }

    pub fn from_y_coords(rank: usize, mut y: Vec<bool>) -> Self {
        assert_eq!(y.len(), 1 << rank);
        y_transform(&mut y);
        Self { rank, coords: y }
    }

    /// `y^S` for a subset mask `S`.
    pub fn y(rank: usize, s: usize) -> Self {
        let mut y = vec![false; 1 << rank];
        y[s] = true;
        Self::from_y_coords(rank, y)
    }

    /// Sum of all points of the subgroup generated by `generators`.
    pub fn subgroup_class(rank: usize, generators: &[usize]) -> Self {
        let mut members = vec![0usize];
        for &g in generators {
            if members.contains(&g) {
                continue;
            }
            let shifted: Vec<usize> = members.iter().map(|&h| h ^ g).collect();
            members.extend(shifted);
        }
        let mut e = Self::zero(rank);
        for h in members {
            e.coords[h] = true;
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coords(&self) -> &[bool] {
        &self.coords
    }

    pub fn y_coords(&self) -> Vec<bool> {
        let mut y = self.coords.clone();
        y_transform(&mut y);
        y
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&b| !b)
    }

    /// Sum of coefficients.
    pub fn augmentation(&self) -> bool {
        self.coords.iter().filter(|&&b| b).count() % 2 == 1
    }

    /// Largest `k` with the element in `I^k` (`rank + 1` for zero).
    pub fn filtration_degree(&self) -> usize {
        self.y_coords()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(s, _)| s.count_ones() as usize)
            .min()
            .unwrap_or(self.rank + 1)
    }

    pub fn in_power(&self, k: usize) -> bool {
        self.filtration_degree() >= k
    }
}

impl Add for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn add(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        assert_eq!(self.rank, rhs.rank);
        let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| a ^ b).collect();
        GroupAlgebraElement { rank: self.rank, coords }
    }
}

/// Pontryagin product: convolution over the group.
impl Mul for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn mul(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        assert_eq!(self.rank, rhs.rank);
        let mut out = GroupAlgebraElement::zero(self.rank);
        for (g, &a) in self.coords.iter().enumerate() {
            if !a {
                continue;
            }
            for (h, &b) in rhs.coords.iter().enumerate() {
                if b {
                    out.coords[g ^ h] ^= true;
                }
            }
        }
        out
    }
}

/// In `F₂[(ℤ/2)²]`, the class of the diagonal subgroup equals `y^{1} + y^{2} + y^{1,2}`.
pub fn diagonal_class_check() -> bool {
    let r = 2;
    let diagonal = GroupAlgebraElement::subgroup_class(r, &[0b11]);
    let expected = &(&GroupAlgebraElement::y(r, 0b01) + &GroupAlgebraElement::y(r, 0b10))
        + &GroupAlgebraElement::y(r, 0b11);
    diagonal == expected
}

/// Matrix of the block map in y-bases: `Y_b · GA(m) · Y_a`.
pub fn group_algebra_map_y(m: &Gf2Matrix) -> Gf2Matrix {
    let ga = group_algebra_map(m);
    &(&y_basis_change(m.rows()) * &ga) * &y_basis_change(m.cols())
}
