//! The orbit spectral sequences of a fan.
//!
//! Complex side: `E¹_{p,q} = ⊕_{σ∈Δ^p} Λ^q V(σ)` with `d¹` assembled from
//! exterior powers of the induced projections; `E²` is the homology of each
//! row. Real side: the cellular complex `C_p = ⊕_{σ∈Δ^p} F₂[V(σ)]` with
//! blocks induced by the same projections, filtered by powers of the
//! augmentation ideal. `G⁰`/`G¹` are computed from that filtered complex
//! directly, so the identity `G¹_{p,q} = E²_{p+q,−p}` is checked rather than
//! used.
//!
//! E-pages use homological indices `0 ≤ q ≤ p ≤ n`; G-pages use the
//! second-quadrant convention `p = −j ≤ 0`, `q = k + j` where `k` is the
//! cellular degree and `j` the filtration degree.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::fan::Fan;
use crate::gf2::{exterior_power, ChainComplex, Gf2Matrix};
use crate::orbitalg::{group_algebra_map, group_algebra_map_y, FanOrbits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PageKind {
    E1,
    E2,
    G0,
    G1,
}

impl PageKind {
    pub fn is_real(self) -> bool {
        matches!(self, PageKind::G0 | PageKind::G1)
    }
}

impl fmt::Display for PageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PageKind::E1 => "E1",
            PageKind::E2 => "E2",
            PageKind::G0 => "G0",
            PageKind::G1 => "G1",
        };
        f.write_str(s)
    }
}

/// Dimensions of one page, keyed by `(p, q)`. Every position of the page's
/// possible support is present, zeros included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageTable {
    pub kind: PageKind,
    /// Rank of the fan the page belongs to.
    pub rank: usize,
    entries: BTreeMap<(i64, i64), usize>,
}

impl PageTable {
    fn empty(kind: PageKind, rank: usize) -> Self {
        let mut entries = BTreeMap::new();
        for k in 0..=rank as i64 {
            for j in 0..=k {
                let key = if kind.is_real() { (-j, k + j) } else { (k, j) };
                entries.insert(key, 0);
            }
        }
        Self { kind, rank, entries }
    }

    pub fn get(&self, p: i64, q: i64) -> usize {
        self.entries.get(&(p, q)).copied().unwrap_or(0)
    }

    fn set(&mut self, p: i64, q: i64, v: usize) {
        let slot = self.entries.get_mut(&(p, q)).expect("position outside the page support");
        *slot = v;
    }

    /// Whether `(p, q)` lies in the possible support of the page.
    pub fn in_support(&self, p: i64, q: i64) -> bool {
        self.entries.contains_key(&(p, q))
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    /// `(p, q, dim)` triples in key order, zeros included.
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, usize)> + '_ {
        self.entries.iter().map(|(&(p, q), &d)| (p, q, d))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (i64, i64, usize)> + '_ {
        self.entries().filter(|&(_, _, d)| d > 0)
    }

    /// Sum of entries of total degree `p + q = k`.
    pub fn diagonal_total(&self, k: i64) -> usize {
        self.entries().filter(|&(p, q, _)| p + q == k).map(|(_, _, d)| d).sum()
    }

    /// Moves an E-page into G indexing via `G_{p,q} = E_{p+q,−p}`, or back.
    pub fn reindexed(&self) -> PageTable {
        let kind = match self.kind {
            PageKind::E1 => PageKind::G0,
            PageKind::E2 => PageKind::G1,
            PageKind::G0 => PageKind::E1,
            PageKind::G1 => PageKind::E2,
        };
        let mut out = PageTable::empty(kind, self.rank);
        for (p, q, d) in self.entries() {
            let (np, nq) = if self.kind.is_real() { (p + q, -p) } else { (-q, p + q) };
            out.set(np, nq, d);
        }
        out
    }
}

/// `(p, q)` of the G-page matching `E_{p,q}`.
pub fn g_position_of_e(p: i64, q: i64) -> (i64, i64) {
    (-q, p + q)
}

/// Coordinate ranges of each cone's block inside every degree.
#[derive(Clone, Debug)]
pub struct BlockIndex {
    /// `blocks[p]` lists `(cone, range)` for the cones of `Δ^p`.
    pub blocks: Vec<Vec<(usize, Range<usize>)>>,
}

impl BlockIndex {
    fn new(fan: &Fan, width: impl Fn(usize) -> usize) -> Self {
        let blocks = (0..=fan.rank())
            .map(|p| {
                let mut start = 0;
                fan.stratum(p)
                    .iter()
                    .map(|&c| {
                        let r = start..start + width(p);
                        start = r.end;
                        (c, r)
                    })
                    .collect()
            })
            .collect();
        Self { blocks }
    }

    pub fn dim(&self, p: usize) -> usize {
        self.blocks[p].last().map_or(0, |(_, r)| r.end)
    }

    pub fn range(&self, p: usize, cone: usize) -> Range<usize> {
        self.blocks[p].iter().find(|(c, _)| *c == cone).expect("cone not in this degree").1.clone()
    }

    fn dims(&self) -> Vec<usize> {
        (0..self.blocks.len()).map(|p| self.dim(p)).collect()
    }
}

/// Assembles `∂_p` for `p = 1..=n` from per-facet-pair blocks.
fn assemble(
    fan: &Fan,
    orbits: &FanOrbits<'_>,
    index: &BlockIndex,
    block: impl Fn(&Gf2Matrix) -> Gf2Matrix,
) -> ChainComplex {
    let n = fan.rank();
    let mut boundaries: Vec<Gf2Matrix> = (1..=n).map(|p| Gf2Matrix::zeros(index.dim(p - 1), index.dim(p))).collect();
    for (sigma, tau) in fan.facet_pairs() {
        let p = fan.codim(sigma);
        let m = orbits.induced_projection_mod2(sigma, tau).expect("facet pair");
        let b = block(&m);
        let rows = index.range(p - 1, tau);
        let cols = index.range(p, sigma);
        boundaries[p - 1].add_block(rows.start, cols.start, &b);
    }
    ChainComplex::new(index.dims(), boundaries).expect("orbit complexes satisfy d∘d = 0")
}

/// The q-th row of `E¹`: degree `p` term `⊕_{σ∈Δ^p} Λ^q V(σ)`.
pub fn e1_row_complex(orbits: &FanOrbits<'_>, q: usize) -> (ChainComplex, BlockIndex) {
    let fan = orbits.fan();
    let index = BlockIndex::new(fan, |p| crate::fan::binomial(p, q));
    let complex = assemble(fan, orbits, &index, |m| exterior_power(m, q));
    (complex, index)
}

/// `E¹` dimensions together with the row complexes, indexed by `q`.
pub fn e1_page(fan: &Fan) -> (PageTable, Vec<ChainComplex>) {
    let orbits = FanOrbits::new(fan);
    let mut table = PageTable::empty(PageKind::E1, fan.rank());
    let rows: Vec<ChainComplex> = (0..=fan.rank()).map(|q| e1_row_complex(&orbits, q).0).collect();
    for (q, row) in rows.iter().enumerate() {
        for (p, &d) in row.dims().iter().enumerate().skip(q) {
            table.set(p as i64, q as i64, d);
        }
    }
    (table, rows)
}

fn e2_from_rows(rank: usize, rows: &[ChainComplex]) -> PageTable {
    let mut table = PageTable::empty(PageKind::E2, rank);
    for (q, row) in rows.iter().enumerate() {
        for (p, &h) in row.homology_dims().iter().enumerate().skip(q) {
            table.set(p as i64, q as i64, h);
        }
    }
    table
}

pub fn e2_dims(fan: &Fan) -> PageTable {
    let (_, rows) = e1_page(fan);
    e2_from_rows(fan.rank(), &rows)
}

/// Cellular chain complex of the real points, with its block layout.
#[derive(Clone, Debug)]
pub struct RealComplex {
    pub complex: ChainComplex,
    pub index: BlockIndex,
}

/// The cellular complex in the point bases of the group algebras.
pub fn real_complex(fan: &Fan) -> RealComplex {
    let orbits = FanOrbits::new(fan);
    let index = BlockIndex::new(fan, |p| 1 << p);
    let complex = assemble(fan, &orbits, &index, group_algebra_map);
    RealComplex { complex, index }
}

/// The same complex written in the y-bases, where the filtration is by popcount.
pub fn real_complex_y(fan: &Fan) -> RealComplex {
    let orbits = FanOrbits::new(fan);
    let index = BlockIndex::new(fan, |p| 1 << p);
    let complex = assemble(fan, &orbits, &index, group_algebra_map_y);
    RealComplex { complex, index }
}

/// Mod-2 Betti numbers (closed supports) of the real points.
pub fn betti_real(fan: &Fan) -> Vec<usize> {
    real_complex(fan).complex.homology_dims()
}

/// `G⁰` with its column complexes (indexed by filtration degree `j = −p`) and `G¹`.
#[derive(Clone, Debug)]
pub struct GPages {
    pub g0: PageTable,
    pub columns: Vec<ChainComplex>,
    pub g1: PageTable,
}

/// Coordinates of degree `k` whose y-subset has exactly `j` elements (or at least `j`).
fn graded_coords(index: &BlockIndex, k: usize, pred: impl Fn(u32) -> bool) -> Vec<usize> {
    index.blocks[k]
        .iter()
        .flat_map(|(_, r)| r.clone().enumerate().filter(|(s, _)| pred((*s as u32).count_ones())).map(|(_, c)| c))
        .collect()
}

/// `G⁰_{−j,·}` as a chain complex: the graded piece `Gr^j` of the filtered real complex.
fn g0_column(real_y: &RealComplex, j: usize) -> ChainComplex {
    let n = real_y.index.blocks.len() - 1;
    let coords: Vec<Vec<usize>> = (0..=n).map(|k| graded_coords(&real_y.index, k, |c| c as usize == j)).collect();
    let dims = coords.iter().map(Vec::len).collect();
    let boundaries = (1..=n)
        .map(|k| real_y.complex.boundary(k).submatrix(&coords[k - 1], &coords[k]))
        .collect();
    ChainComplex::new(dims, boundaries).expect("graded piece of a filtered complex is a complex")
}

pub fn g_pages(fan: &Fan) -> GPages {
    let real_y = real_complex_y(fan);
    g_pages_from(fan.rank(), &real_y)
}

fn g_pages_from(rank: usize, real_y: &RealComplex) -> GPages {
    let mut g0 = PageTable::empty(PageKind::G0, rank);
    let mut g1 = PageTable::empty(PageKind::G1, rank);
    let columns: Vec<ChainComplex> = (0..=rank).map(|j| g0_column(real_y, j)).collect();
    for (j, col) in columns.iter().enumerate() {
        let h = col.homology_dims();
        for k in j..=rank {
            let (p, q) = (-(j as i64), (k + j) as i64);
            g0.set(p, q, col.dims()[k]);
            g1.set(p, q, h[k]);
        }
    }
    GPages { g0, columns, g1 }
}

/// `G¹` read off from `E²` by reindexing, for when the cross-check is not wanted.
pub fn g1_from_e2(e2: &PageTable) -> PageTable {
    assert_eq!(e2.kind, PageKind::E2);
    e2.reindexed()
}

/// The boundary of the y-basis real complex never lowers the filtration degree.
pub fn filtration_preserved(real_y: &RealComplex) -> bool {
    let n = real_y.index.blocks.len() - 1;
    (1..=n).all(|k| {
        let b = real_y.complex.boundary(k);
        (0..=k).all(|j| {
            let src = graded_coords(&real_y.index, k, |c| c as usize >= j);
            let dst = graded_coords(&real_y.index, k - 1, |c| (c as usize) < j);
            b.submatrix(&dst, &src).is_zero()
        })
    })
}

/// The splitting `C_* = ⟨[1]⟩-part ⊕ augmentation ideals` is preserved by the boundary.
pub fn rightmost_column_split(fan: &Fan) -> bool {
    let real_y = real_complex_y(fan);
    let n = fan.rank();
    (1..=n).all(|k| {
        let b = real_y.complex.boundary(k);
        let unit_src = graded_coords(&real_y.index, k, |c| c == 0);
        let ideal_src = graded_coords(&real_y.index, k, |c| c > 0);
        let unit_dst = graded_coords(&real_y.index, k - 1, |c| c == 0);
        let ideal_dst = graded_coords(&real_y.index, k - 1, |c| c > 0);
        b.submatrix(&ideal_dst, &unit_src).is_zero() && b.submatrix(&unit_dst, &ideal_src).is_zero()
    })
}

/// Everything the reports need for one fan, computed once.
#[derive(Clone, Debug)]
pub struct SpectralSummary {
    pub betti_real: Vec<usize>,
    pub e1: PageTable,
    pub e2: PageTable,
    pub g0: PageTable,
    pub g1: PageTable,
}

impl SpectralSummary {
    pub fn compute(fan: &Fan) -> Self {
        let (e1, rows) = e1_page(fan);
        let e2 = e2_from_rows(fan.rank(), &rows);
        let real = real_complex(fan);
        let betti_real = real.complex.homology_dims();
        let real_y = real_complex_y(fan);
        let GPages { g0, g1, .. } = g_pages_from(fan.rank(), &real_y);
        Self { betti_real, e1, e2, g0, g1 }
    }

    /// The shortcut path: `G` pages obtained from `E` by reindexing.
    pub fn compute_shortcut(fan: &Fan) -> Self {
        let (e1, rows) = e1_page(fan);
        let e2 = e2_from_rows(fan.rank(), &rows);
        let betti_real = betti_real(fan);
        let g0 = e1.reindexed();
        let g1 = e2.reindexed();
        Self { betti_real, e1, e2, g0, g1 }
    }
}
