//! Verdicts built on the spectral pages: M-variety certification, the
//! closed-form surface classification, and checkers for the
//! dimension-three theorem and for isolated singularities.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{random_fan, Profile};
use crate::fan::Fan;
use crate::orbitalg::FanOrbits;
use crate::spectral::{e1_row_complex, e2_dims, g_pages, real_complex_y, PageTable, SpectralSummary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("fan is not complete")]
    NotComplete,
    #[error("expected a fan of rank {expected}, got rank {got}")]
    WrongRank { expected: usize, got: usize },
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error("precondition failed: cones {cones:?} are not regular mod 2")]
    PreconditionFailed { cones: Vec<Vec<usize>> },
    #[error("batch size must be at least 1")]
    EmptyBatch,
    #[error("fan of rank ≤ 3 was not certified (gap {gap}):\n{fan_json}")]
    TheoremViolation { fan_json: String, gap: usize },
    #[error("surface Betti numbers disagree with the closed form:\n{fan_json}")]
    OracleMismatch { fan_json: String },
}

type Result<T> = std::result::Result<T, AnalysisError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MStatus {
    CertifiedM,
    Inconclusive,
}

impl std::fmt::Display for MStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MStatus::CertifiedM => "CertifiedM",
            MStatus::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MVerdict {
    pub status: MStatus,
    pub sum_betti_real: usize,
    pub total_e2: usize,
    pub total_g1: usize,
    pub notes: Vec<String>,
}

impl MVerdict {
    /// `total_e2 − sum_betti_real`; zero exactly when certified.
    pub fn gap(&self) -> usize {
        self.total_e2.saturating_sub(self.sum_betti_real)
    }

    pub fn from_summary(summary: &SpectralSummary) -> Self {
        let sum_betti_real: usize = summary.betti_real.iter().sum();
        let total_e2 = summary.e2.total();
        let total_g1 = summary.g1.total();
        let mut notes = vec![
            format!("sum b(X(R)) = {sum_betti_real} from the cellular complex of the real points"),
            format!("total E2 = {total_e2}, total G1 = {total_g1}"),
            "Smith-Thom: sum b(X(R)) <= sum b(X(C)); convergence of E: sum b(X(C)) <= total E2".to_string(),
        ];
        if total_e2 != total_g1 {
            notes.push("page totals disagree; this indicates a defect in the page computation".to_string());
        }
        let status = if sum_betti_real == total_e2 && total_e2 == total_g1 {
            notes.push(format!(
                "both ends equal {total_e2}: sum b(X(C)) = {total_e2}, X is an M-variety, and both sequences degenerate at E2 and G1"
            ));
            MStatus::CertifiedM
        } else {
            notes.push(format!(
                "gap {}: sum b(X(C)) is not computed, so the M-property is undecided; this alone is not a counterexample",
                total_e2.saturating_sub(sum_betti_real)
            ));
            MStatus::Inconclusive
        };
        Self { status, sum_betti_real, total_e2, total_g1, notes }
    }
}

pub fn m_verdict(fan: &Fan) -> MVerdict {
    MVerdict::from_summary(&SpectralSummary::compute(fan))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceCase {
    /// Some two rays differ mod 2.
    Distinct = 1,
    /// All rays agree mod 2.
    AllEqual = 2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceBetti {
    pub case: SurfaceCase,
    pub rays: usize,
    pub betti_real: [usize; 3],
    pub betti_complex: [usize; 5],
}

/// Whether all primitive ray generators have the same image in `N/2N`.
pub fn rays_agree_mod2(fan: &Fan) -> bool {
    fan.rays().windows(2).all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| (a - b) % 2 == 0))
}

/// Betti numbers of a complete toric surface from the number of rays and their residues mod 2.
pub fn surface_betti_oracle(fan: &Fan) -> Result<SurfaceBetti> {
    if fan.rank() != 2 {
        return Err(AnalysisError::WrongRank { expected: 2, got: fan.rank() });
    }
    if !fan.is_complete() {
        return Err(AnalysisError::NotComplete);
    }
    let s = fan.rays().len();
    Ok(if rays_agree_mod2(fan) {
        SurfaceBetti { case: SurfaceCase::AllEqual, rays: s, betti_real: [1, s - 1, 2], betti_complex: [1, 0, s - 1, 1, 1] }
    } else {
        SurfaceBetti { case: SurfaceCase::Distinct, rays: s, betti_real: [1, s - 2, 1], betti_complex: [1, 0, s - 2, 0, 1] }
    })
}

/// `b_{2k} = h_k`, odd Betti numbers vanish.
pub fn betti_complex_nonsingular_complete(fan: &Fan) -> Result<Vec<usize>> {
    if !fan.is_complete() {
        return Err(AnalysisError::Inapplicable("fan is not complete".into()));
    }
    if !fan.is_nonsingular() {
        return Err(AnalysisError::Inapplicable("fan is singular".into()));
    }
    let h = fan.h_vector();
    let mut b = vec![0; 2 * fan.rank() + 1];
    for (k, &v) in h.values.iter().enumerate() {
        b[2 * k] = usize::try_from(v).expect("h-vector of a complete nonsingular fan is nonnegative");
    }
    Ok(b)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub total: usize,
    pub certified: usize,
    pub by_profile: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchReport {
    pub count: usize,
    pub seed: u64,
    pub per_rank: BTreeMap<usize, Tally>,
    pub max_gap: usize,
    /// Complete surfaces whose Betti numbers were matched against the closed form.
    pub oracle_checked: usize,
}

impl BatchReport {
    pub fn all_certified(&self) -> bool {
        self.per_rank.values().all(|t| t.certified == t.total)
    }
}

/// Worker pool size from `TORHOM_THREADS`, if set.
fn thread_pool() -> Option<rayon::ThreadPool> {
    let n: usize = std::env::var("TORHOM_THREADS").ok()?.parse().ok()?;
    rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok()
}

fn run_parallel<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    match thread_pool() {
        Some(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
        None => (0..n).into_par_iter().map(&f).collect(),
    }
}

/// Restricts what a batch draws: a fixed rank and/or a fixed profile.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BatchOptions {
    pub rank: Option<usize>,
    pub profile: Option<Profile>,
}

/// The fans of a batch. Unless fixed, ranks cycle through 1..=3 and profiles
/// through all three; per-fan seeds come from one ChaCha stream.
pub fn batch_fans(count: usize, seed: u64, options: BatchOptions) -> Vec<(Profile, Fan)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let rank = options.rank.unwrap_or(1 + i % 3);
            let profile = options.profile.unwrap_or(Profile::ALL[(i / 3) % 3]);
            let fan = random_fan(rank, rng.next_u64(), profile).expect("rank within 1..=3");
            (profile, fan)
        })
        .collect()
}

/// Certifies every fan of a list of rank ≤ 3 fans; any failure is a hard error.
/// Complete surfaces are also compared against the closed-form Betti numbers.
pub fn dim3_theorem_check(fans: &[(String, Fan)], seed: u64) -> Result<BatchReport> {
    if fans.is_empty() {
        return Err(AnalysisError::EmptyBatch);
    }
    let results = run_parallel(fans.len(), |i| {
        let fan = &fans[i].1;
        let summary = SpectralSummary::compute(fan);
        let oracle = (fan.rank() == 2 && fan.is_complete())
            .then(|| surface_betti_oracle(fan).map(|o| o.betti_real.to_vec() == summary.betti_real));
        (MVerdict::from_summary(&summary), oracle)
    });
    let mut per_rank: BTreeMap<usize, Tally> = BTreeMap::new();
    let mut max_gap = 0;
    let mut oracle_checked = 0;
    for ((label, fan), (v, oracle)) in fans.iter().zip(&results) {
        if fan.rank() <= 3 && v.status != MStatus::CertifiedM {
            return Err(AnalysisError::TheoremViolation { fan_json: fan.write_json(), gap: v.gap() });
        }
        if let Some(matched) = oracle {
            if matched != &Ok(true) {
                return Err(AnalysisError::OracleMismatch { fan_json: fan.write_json() });
            }
            oracle_checked += 1;
        }
        max_gap = max_gap.max(v.gap());
        let t = per_rank.entry(fan.rank()).or_default();
        t.total += 1;
        t.certified += usize::from(v.status == MStatus::CertifiedM);
        *t.by_profile.entry(label.clone()).or_default() += 1;
    }
    Ok(BatchReport { count: fans.len(), seed, per_rank, max_gap, oracle_checked })
}

pub fn dim3_theorem_batch(count: usize, seed: u64) -> Result<BatchReport> {
    dim3_theorem_batch_with(count, seed, BatchOptions::default())
}

pub fn dim3_theorem_batch_with(count: usize, seed: u64, options: BatchOptions) -> Result<BatchReport> {
    if count == 0 {
        return Err(AnalysisError::EmptyBatch);
    }
    if let Some(r) = options.rank {
        if !(1..=3).contains(&r) {
            return Err(AnalysisError::WrongRank { expected: 3, got: r });
        }
    }
    let fans: Vec<(String, Fan)> =
        batch_fans(count, seed, options).into_iter().map(|(p, f)| (p.to_string(), f)).collect();
    dim3_theorem_check(&fans, seed)
}

/// Support of `E²` lies on `p = q` and `p = q + 1` when only maximal cones may be singular mod 2.
pub fn isolated_singularities_shape(fan: &Fan) -> Result<bool> {
    if !fan.is_complete() {
        return Err(AnalysisError::NotComplete);
    }
    let maximal = fan.maximal_cones();
    let bad: Vec<Vec<usize>> = (0..fan.cones().len())
        .filter(|c| !maximal.contains(c) && !fan.cone_is_mod2_regular(*c))
        .map(|c| fan.cone(c).rays.clone())
        .collect();
    if !bad.is_empty() {
        return Err(AnalysisError::PreconditionFailed { cones: bad });
    }
    Ok(e2_dims(fan).nonzero().all(|(p, q, _)| p == q || p == q + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelCase {
    /// No rays, so the target of the differential is zero.
    NoCodimTwoCones,
    Injective,
    /// `common_image` is the shared residue of all rays, if there is one.
    NonInjective { common_image: Option<Vec<u8>>, kernels_match: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelDiagnostic {
    pub case: KernelCase,
    /// Kernel dimension of `d¹: E¹_{3,1} → E¹_{2,1}`.
    pub kernel_dim: usize,
    /// Kernel dimension of `d⁰` on total degree 3 of the graded real complex.
    pub ker_d0: usize,
    /// Kernel dimension of the unfiltered `d: C_3 → C_2`.
    pub ker_d: usize,
    pub verdict: MStatus,
}

/// Follows the rank-3 argument: the only possible higher differential
/// leaves `G¹_{−1,4}`, which is nonzero only if `E¹_{3,1} → E¹_{2,1}` has a kernel.
pub fn dim3_kernel_analysis(fan: &Fan) -> Result<KernelDiagnostic> {
    if fan.rank() != 3 {
        return Err(AnalysisError::WrongRank { expected: 3, got: fan.rank() });
    }
    let orbits = FanOrbits::new(fan);
    let (row, _) = e1_row_complex(&orbits, 1);
    let d = row.boundary(3);
    let kernel_dim = row.dims()[3] - d.rank();

    let real_y = real_complex_y(fan);
    let c3 = real_y.complex.dims()[3];
    let ker_d = c3 - real_y.complex.boundary(3).rank();
    let pages = g_pages(fan);
    let ker_d0: usize = pages.columns.iter().map(|col| col.dims()[3] - col.boundary(3).rank()).sum();

    let case = if fan.rays().is_empty() {
        KernelCase::NoCodimTwoCones
    } else if kernel_dim == 0 {
        KernelCase::Injective
    } else {
        let residues: Vec<Vec<u8>> =
            fan.rays().iter().map(|r| r.iter().map(|x| x.rem_euclid(2) as u8).collect()).collect();
        let common_image = residues.windows(2).all(|w| w[0] == w[1]).then(|| residues[0].clone());
        KernelCase::NonInjective { common_image, kernels_match: ker_d0 == ker_d }
    };
    Ok(KernelDiagnostic { case, kernel_dim, ker_d0, ker_d, verdict: m_verdict(fan).status })
}

/// Expected `E²` and `G¹` dimensions for the normal fan of the cyclic polytope
/// with vertices `(k, k², …, k⁵)`, `k = 0..6`.
pub mod cyclic57 {
    /// Nonzero `E²_{p,q}`; every other position is zero.
    pub const E2: [((i64, i64), usize); 16] = [
        ((5, 5), 1),
        ((4, 4), 11),
        ((5, 4), 4),
        ((3, 3), 13),
        ((4, 3), 27),
        ((5, 3), 6),
        ((2, 2), 6),
        ((3, 2), 17),
        ((4, 2), 21),
        ((5, 2), 4),
        ((1, 1), 1),
        ((2, 1), 1),
        ((3, 1), 4),
        ((4, 1), 5),
        ((5, 1), 1),
        ((0, 0), 1),
    ];

    /// The displayed cells of the `G¹` table, including its explicit zeros.
    pub const G1: [((i64, i64), usize); 21] = [
        ((-5, 10), 1),
        ((-4, 9), 4),
        ((-4, 8), 11),
        ((-3, 8), 6),
        ((-3, 7), 27),
        ((-2, 7), 4),
        ((-3, 6), 13),
        ((-2, 6), 21),
        ((-1, 6), 1),
        ((-2, 5), 17),
        ((-1, 5), 5),
        ((0, 5), 0),
        ((-2, 4), 6),
        ((-1, 4), 4),
        ((0, 4), 0),
        ((-1, 3), 1),
        ((0, 3), 0),
        ((-1, 2), 1),
        ((0, 2), 0),
        ((0, 1), 0),
        ((0, 0), 1),
    ];
}

/// One disagreement between a computed page and the expected values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub page: String,
    pub p: i64,
    pub q: i64,
    pub expected: usize,
    pub got: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCheck {
    pub e2_checked: usize,
    pub g1_checked: usize,
    pub total_e2: usize,
    pub total_g1: usize,
    pub mismatches: Vec<Mismatch>,
}

impl TableCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn compare(page: &PageTable, listed: &[((i64, i64), usize)], out: &mut Vec<Mismatch>) {
    let expected = |p, q| listed.iter().find(|(k, _)| *k == (p, q)).map_or(0, |(_, v)| *v);
    for (p, q, got) in page.entries() {
        let want = expected(p, q);
        if got != want {
            out.push(Mismatch { page: page.kind.to_string(), p, q, expected: want, got });
        }
    }
    for &((p, q), v) in listed {
        if !page.in_support(p, q) {
            out.push(Mismatch { page: page.kind.to_string(), p, q, expected: v, got: 0 });
        }
    }
}

/// Compares computed pages of the cyclic-polytope fan with [`cyclic57`], over the whole support.
pub fn check_cyclic57(e2: &PageTable, g1: &PageTable) -> TableCheck {
    let mut mismatches = Vec::new();
    compare(e2, &cyclic57::E2, &mut mismatches);
    compare(g1, &cyclic57::G1, &mut mismatches);
    TableCheck {
        e2_checked: cyclic57::E2.len(),
        g1_checked: cyclic57::G1.len(),
        total_e2: e2.total(),
        total_g1: g1.total(),
        mismatches,
    }
}

/// Positions where `G¹_{p,q} ≠ E²_{p+q,−p}`.
pub fn transpose_mismatches(e2: &PageTable, g1: &PageTable) -> Vec<Mismatch> {
    g1.entries()
        .filter_map(|(p, q, got)| {
            let expected = e2.get(p + q, -p);
            (got != expected).then(|| Mismatch { page: "G1".into(), p, q, expected, got })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;

    #[test]
    fn projective_spaces_certified() {
        for n in 1..=3 {
            let v = m_verdict(&projective_space_fan(n).unwrap());
            assert_eq!(v.status, MStatus::CertifiedM);
            assert_eq!((v.sum_betti_real, v.total_e2, v.total_g1), (n + 1, n + 1, n + 1));
            assert_eq!(v.gap(), 0);
        }
    }

    #[test]
    fn surface_cases() {
        let p2 = surface_betti_oracle(&projective_space_fan(2).unwrap()).unwrap();
        assert_eq!((p2.case, p2.betti_real), (SurfaceCase::Distinct, [1, 1, 1]));
        let s4 = surface_betti_oracle(&same_mod2_surface_fan(4).unwrap()).unwrap();
        assert_eq!(s4.betti_real, [1, 3, 2]);
        assert_eq!(s4.betti_complex, [1, 0, 3, 1, 1]);
        let f1 = surface_betti_oracle(&hirzebruch_fan(1).unwrap()).unwrap();
        assert_eq!(f1.betti_real, [1, 2, 1]);
        assert_eq!(
            surface_betti_oracle(&projective_space_fan(3).unwrap()),
            Err(AnalysisError::WrongRank { expected: 2, got: 3 })
        );
        let half = Fan::from_maximal_cones(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert_eq!(surface_betti_oracle(&half), Err(AnalysisError::NotComplete));
    }

    #[test]
    fn nonsingular_betti() {
        assert_eq!(betti_complex_nonsingular_complete(&projective_space_fan(2).unwrap()).unwrap(), vec![1, 0, 1, 0, 1]);
        let p1 = projective_space_fan(1).unwrap();
        let q = product_fan(&p1, &p1).unwrap();
        assert_eq!(betti_complex_nonsingular_complete(&q).unwrap(), vec![1, 0, 2, 0, 1]);
        assert!(matches!(
            betti_complex_nonsingular_complete(&weighted_projective_fan(&[1, 1, 2]).unwrap()),
            Err(AnalysisError::Inapplicable(_))
        ));
    }

    #[test]
    fn small_batch() {
        let r = dim3_theorem_batch(12, 7).unwrap();
        assert!(r.all_certified());
        assert_eq!(r.max_gap, 0);
        assert_eq!(r.per_rank.values().map(|t| t.total).sum::<usize>(), 12);
        assert_eq!(dim3_theorem_batch(0, 7), Err(AnalysisError::EmptyBatch));
    }

    #[test]
    fn isolated_shapes() {
        assert_eq!(isolated_singularities_shape(&projective_space_fan(3).unwrap()), Ok(true));
        assert_eq!(isolated_singularities_shape(&square_pyramid_fan()), Ok(true));
        // P(1,1,2) × P¹: its singular 2-cones are not maximal.
        let w = weighted_projective_fan(&[1, 1, 2]).unwrap();
        let prod = product_fan(&w, &projective_space_fan(1).unwrap()).unwrap();
        assert!(matches!(isolated_singularities_shape(&prod), Err(AnalysisError::PreconditionFailed { .. })));
    }

    #[test]
    fn kernel_cases() {
        let p3 = dim3_kernel_analysis(&projective_space_fan(3).unwrap()).unwrap();
        assert_eq!(p3.case, KernelCase::Injective);
        let t = dim3_kernel_analysis(&torus_fan(3)).unwrap();
        assert_eq!(t.case, KernelCase::NoCodimTwoCones);
        let same = dim3_kernel_analysis(&same_mod2_threefold_fan()).unwrap();
        assert_eq!(
            same.case,
            KernelCase::NonInjective { common_image: Some(vec![1, 1, 1]), kernels_match: true }
        );
        assert_eq!(same.kernel_dim, 1);
        assert_eq!(same.verdict, MStatus::CertifiedM);
    }

    #[test]
    fn reference_tables_are_consistent() {
        // The two tables describe the same numbers under G_{p,q} = E_{p+q,−p}.
        for ((p, q), v) in cyclic57::E2 {
            let g = cyclic57::G1.iter().find(|(k, _)| *k == (-q, p + q)).map(|(_, v)| *v);
            assert_eq!(g, Some(v), "E2[{p},{q}]");
        }
        let sum = |t: &[((i64, i64), usize)]| t.iter().map(|(_, v)| v).sum::<usize>();
        assert_eq!(sum(&cyclic57::E2), 123);
        assert_eq!(sum(&cyclic57::G1), 123);
    }

    #[test]
    fn surface_batch_matches_oracle() {
        let opts = BatchOptions { rank: Some(2), profile: Some(Profile::Complete) };
        let r = dim3_theorem_batch_with(20, 3, opts).unwrap();
        assert_eq!(r.oracle_checked, 20);
        let bad = BatchOptions { rank: Some(4), profile: None };
        assert!(dim3_theorem_batch_with(1, 0, bad).is_err());
    }
}
