//! Exact face enumeration for a single finitely generated cone.
//!
//! The cone is first mapped isomorphically onto ℚ^d (d = dimension of its
//! span) by keeping a set of coordinates on which the span projects
//! injectively. Facets are then found by running over (d−1)-subsets of
//! generators of rank d−1 and keeping the hyperplanes that support the cone.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::intlin::IntMatrix;

#[derive(Clone, Debug)]
pub(crate) struct Facet {
    /// Inner normal in the projected coordinates.
    pub normal: Vec<BigInt>,
    /// Generators lying on the facet, as local indices.
    pub rays: Vec<usize>,
}

#[derive(Clone, Debug)]
pub(crate) struct ConeGeometry {
    pub dim: usize,
    /// Ambient coordinates kept by the projection.
    pub coords: Vec<usize>,
    /// Generators expressed in the kept coordinates.
    pub projected: Vec<Vec<BigInt>>,
    pub facets: Vec<Facet>,
}

/// Vector whose `j`-th entry is `(−1)^j` times the minor of `rows` with column `j` removed.
/// It is orthogonal to every row.
pub(crate) fn cofactor_normal(rows: &[Vec<BigInt>], d: usize) -> Vec<BigInt> {
    debug_assert_eq!(rows.len() + 1, d);
    (0..d)
        .map(|j| {
            let cols: Vec<usize> = (0..d).filter(|&c| c != j).collect();
            let mut m = IntMatrix::zeros(rows.len(), cols.len());
            for (i, r) in rows.iter().enumerate() {
                for (k, &c) in cols.iter().enumerate() {
                    m[(i, k)] = r[c].clone();
                }
            }
            let minor = m.det();
            if j % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
        .collect()
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn rank_of(vectors: &[Vec<BigInt>], len: usize) -> usize {
    IntMatrix::from_bigint_columns(len, vectors).rank()
}

impl ConeGeometry {
    pub fn new(generators: &[Vec<BigInt>], ambient: usize) -> Self {
        let dim = rank_of(generators, ambient);
        // Greedily keep coordinates until the projection has full rank `dim`.
        let mut coords = Vec::with_capacity(dim);
        let mut current = 0;
        for c in 0..ambient {
            if current == dim {
                break;
            }
            let mut trial = coords.clone();
            trial.push(c);
            let rows: Vec<Vec<BigInt>> = trial
                .iter()
                .map(|&k| generators.iter().map(|g| g[k].clone()).collect())
                .collect();
            let r = IntMatrix::from_bigint_columns(generators.len(), &rows).rank();
            if r > current {
                coords = trial;
                current = r;
            }
        }
        let projected: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| coords.iter().map(|&c| g[c].clone()).collect())
            .collect();

        let mut facets = Vec::new();
        if dim > 0 {
            let mut seen = BTreeSet::new();
            for subset in (0..generators.len()).combinations(dim - 1) {
                let rows: Vec<Vec<BigInt>> = subset.iter().map(|&i| projected[i].clone()).collect();
                if rank_of(&rows, dim) != dim - 1 {
                    continue;
                }
                let mut normal = cofactor_normal(&rows, dim);
                let values: Vec<BigInt> = projected.iter().map(|p| dot(&normal, p)).collect();
                let has_pos = values.iter().any(Signed::is_positive);
                let has_neg = values.iter().any(Signed::is_negative);
                if has_pos && has_neg {
                    continue;
                }
                if has_neg {
                    normal.iter_mut().for_each(|x| *x = -std::mem::take(x));
                }
                let on: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_zero()).collect();
                if seen.insert(on.clone()) {
                    facets.push(Facet { normal, rays: on });
                }
            }
        }
        Self { dim, coords, projected, facets }
    }

    /// No line through the origin is contained in the cone.
    pub fn is_pointed(&self) -> bool {
        if self.dim == 0 {
            return true;
        }
        if self.facets.is_empty() {
            return false;
        }
        // The intersection of all facets is the lineality space.
        let mut common: BTreeSet<usize> = self.facets[0].rays.iter().copied().collect();
        for f in &self.facets[1..] {
            common.retain(|i| f.rays.contains(i));
        }
        common.is_empty()
    }

    /// Every face, as a sorted list of local generator indices. Includes the
    /// cone itself and, for pointed cones, the empty face.
    pub fn faces(&self) -> BTreeSet<Vec<usize>> {
        let full: Vec<usize> = (0..self.projected.len()).collect();
        let mut faces = BTreeSet::from([full.clone()]);
        let mut frontier = vec![full];
        while let Some(f) = frontier.pop() {
            for facet in &self.facets {
                let g: Vec<usize> = f.iter().copied().filter(|i| facet.rays.contains(i)).collect();
                if faces.insert(g.clone()) {
                    frontier.push(g);
                }
            }
        }
        faces
    }

    pub fn face_dim(&self, face: &[usize]) -> usize {
        let vs: Vec<Vec<BigInt>> = face.iter().map(|&i| self.projected[i].clone()).collect();
        rank_of(&vs, self.dim)
    }

    /// Point membership for a full-dimensional cone, in ambient coordinates.
    pub fn contains_full_dim(&self, x: &[BigInt]) -> bool {
        debug_assert_eq!(self.coords.len(), x.len());
        self.facets.iter().all(|f| !dot(&f.normal, x).is_negative())
    }
}

/// Checks that `cone(a) ∩ cone(b)` lies in the linear span of `shared`.
///
/// The cone `{(s, t) ≥ 0 : A·s = B·t}` is generated by positive circuits of
/// the matrix `[A | −B]`; each one yields a generator `A·s` of the
/// intersection, which must lie in the span of the shared generators.
pub(crate) fn intersection_within_span(
    a: &[Vec<BigInt>],
    b: &[Vec<BigInt>],
    shared: &[Vec<BigInt>],
    ambient: usize,
) -> bool {
    let mut columns: Vec<Vec<BigInt>> = a.to_vec();
    columns.extend(b.iter().map(|v| v.iter().map(|x| -x).collect::<Vec<_>>()));
    let shared_rank = rank_of(shared, ambient);
    let max_size = (rank_of(&columns, ambient) + 1).min(columns.len());
    for size in 2..=max_size {
        for subset in (0..columns.len()).combinations(size) {
            // Mixed circuits only; circuits inside one cone are impossible for pointed cones.
            if subset.iter().all(|&i| i < a.len()) || subset.iter().all(|&i| i >= a.len()) {
                continue;
            }
            let Some(coeffs) = circuit(&columns, &subset, ambient) else {
                continue;
            };
            let all_pos = coeffs.iter().all(Signed::is_positive);
            let all_neg = coeffs.iter().all(Signed::is_negative);
            if !all_pos && !all_neg {
                continue;
            }
            let mut x = vec![BigInt::zero(); ambient];
            for (&i, c) in subset.iter().zip(&coeffs) {
                if i < a.len() {
                    for (xk, ak) in x.iter_mut().zip(&columns[i]) {
                        *xk += c * ak;
                    }
                }
            }
            if x.iter().all(Zero::is_zero) {
                continue;
            }
            let mut with_x = shared.to_vec();
            with_x.push(x);
            if rank_of(&with_x, ambient) != shared_rank {
                return false;
            }
        }
    }
    true
}

/// Coefficients of the unique (up to scale) dependency among the selected
/// columns, if they form a circuit with full support.
fn circuit(columns: &[Vec<BigInt>], subset: &[usize], ambient: usize) -> Option<Vec<BigInt>> {
    let vs: Vec<Vec<BigInt>> = subset.iter().map(|&i| columns[i].clone()).collect();
    let t = vs.len();
    if rank_of(&vs, ambient) != t - 1 {
        return None;
    }
    // Keep t−1 independent coordinate rows of the ambient×t matrix.
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(t - 1);
    for k in 0..ambient {
        let row: Vec<BigInt> = vs.iter().map(|v| v[k].clone()).collect();
        let mut trial = rows.clone();
        trial.push(row);
        if rank_of(&trial, t) == trial.len() {
            rows = trial;
            if rows.len() == t - 1 {
                break;
            }
        }
    }
    let c = cofactor_normal(&rows, t);
    if c.iter().any(Zero::is_zero) {
        return None;
    }
    Some(c)
}
