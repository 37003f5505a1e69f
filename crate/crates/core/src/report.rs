//! Report objects for one fan: JSON for machines, grid tables for people.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::{MStatus, MVerdict};
use crate::fan::{Fan, FanFile};
use crate::spectral::{PageKind, PageTable, SpectralSummary};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub betti_real: usize,
    pub e1: usize,
    pub e2: usize,
    pub g0: usize,
    pub g1: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    pub betti_real: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e1: Option<Vec<[i64; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e2: Option<Vec<[i64; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g0: Option<Vec<[i64; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g1: Option<Vec<[i64; 3]>>,
    pub totals: Totals,
    pub verdict: MVerdict,
    /// The fan itself, kept for inconclusive verdicts in rank ≥ 4.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanFile>,
    #[serde(skip)]
    tables: Vec<PageTable>,
}

fn triples(t: &PageTable) -> Vec<[i64; 3]> {
    t.entries().map(|(p, q, d)| [p, q, d as i64]).collect()
}

impl Report {
    pub fn new(fan: &Fan, summary: &SpectralSummary, pages: &[PageKind]) -> Self {
        let verdict = MVerdict::from_summary(summary);
        let pick = |k: PageKind| pages.contains(&k).then(|| triples(page(summary, k)));
        let keep_fan = verdict.status == MStatus::Inconclusive && fan.rank() >= 4;
        Self {
            name: fan.name().map(str::to_string),
            rank: fan.rank(),
            betti_real: summary.betti_real.clone(),
            e1: pick(PageKind::E1),
            e2: pick(PageKind::E2),
            g0: pick(PageKind::G0),
            g1: pick(PageKind::G1),
            totals: Totals {
                betti_real: summary.betti_real.iter().sum(),
                e1: summary.e1.total(),
                e2: summary.e2.total(),
                g0: summary.g0.total(),
                g1: summary.g1.total(),
            },
            verdict,
            fan: keep_fan.then(|| FanFile::from(fan)),
            tables: pages.iter().map(|&k| page(summary, k).clone()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "fan {name} (rank {})", self.rank);
        } else {
            let _ = writeln!(out, "fan of rank {}", self.rank);
        }
        let betti: Vec<String> = self.betti_real.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "betti_real = {} (sum {})\n", betti.join(","), self.totals.betti_real);
        for t in &self.tables {
            out += &render_table(t);
            out += &render_flat(t);
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "totals: E1 {}  E2 {}  G0 {}  G1 {}",
            self.totals.e1, self.totals.e2, self.totals.g0, self.totals.g1
        );
        let _ = writeln!(out, "verdict: {}", self.verdict.status);
        for n in &self.verdict.notes {
            let _ = writeln!(out, "  {n}");
        }
        if let Some(f) = &self.fan {
            out += "fan kept for later study:\n";
            out += &f.to_json();
        }
        out
    }
}

fn page(summary: &SpectralSummary, kind: PageKind) -> &PageTable {
    match kind {
        PageKind::E1 => &summary.e1,
        PageKind::E2 => &summary.e2,
        PageKind::G0 => &summary.g0,
        PageKind::G1 => &summary.g1,
    }
}

/// Grid with rows `q` descending. E-pages run over `p = 0..n`, G-pages over `p = −n..0`.
pub fn render_table(t: &PageTable) -> String {
    let n = t.rank as i64;
    let (ps, qmax): (Vec<i64>, i64) = if t.kind.is_real() { ((-n..=0).collect(), 2 * n) } else { ((0..=n).collect(), n) };
    let width = t.entries().map(|(_, _, d)| d.to_string().len()).max().unwrap_or(1).max(2) + 2;
    let label_w = format!("q={qmax}").len();
    let rule = format!("{:label_w$} +{}\n", "", format!("{}+", "-".repeat(width)).repeat(ps.len()));
    let mut out = format!("{}\n", t.kind);
    out += &rule;
    for q in (0..=qmax).rev() {
        let label = if q == qmax { format!("q={q}") } else { q.to_string() };
        let _ = write!(out, "{label:>label_w$} |");
        for &p in &ps {
            if t.in_support(p, q) {
                let _ = write!(out, "{:^width$}|", t.get(p, q));
            } else {
                let _ = write!(out, "{:width$}|", "");
            }
        }
        out.push('\n');
        out += &rule;
    }
    let _ = write!(out, "{:label_w$}  ", "");
    for (i, &p) in ps.iter().enumerate() {
        let cell = if i == 0 { format!("p={p}") } else { p.to_string() };
        let _ = write!(out, "{cell:^width$} ");
    }
    out.push('\n');
    out
}

/// One `KIND[p,q] = d` line per nonzero entry.
pub fn render_flat(t: &PageTable) -> String {
    t.nonzero().map(|(p, q, d)| format!("{}[{p},{q}] = {d}\n", t.kind)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::projective_space_fan;

    #[test]
    fn p2_report() {
        let fan = projective_space_fan(2).unwrap();
        let s = SpectralSummary::compute(&fan);
        let r = Report::new(&fan, &s, &[PageKind::E2, PageKind::G1]);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["betti_real"], serde_json::json!([1, 1, 1]));
        assert_eq!(json["totals"]["e2"], 3);
        assert!(json.get("e1").is_none());
        assert_eq!(json["verdict"]["status"], "CertifiedM");
        let pretty = r.to_pretty();
        assert!(pretty.contains("betti_real = 1,1,1"));
        assert!(pretty.contains("E2[2,2] = 1"));
        assert!(pretty.contains("G1[-2,4] = 1"));
    }

    #[test]
    fn grid_layout() {
        let fan = projective_space_fan(1).unwrap();
        let s = SpectralSummary::compute(&fan);
        let e = render_table(&s.e1);
        let lines: Vec<&str> = e.lines().collect();
        assert_eq!(lines[0], "E1");
        assert!(lines[2].starts_with("q=1 |"));
        assert!(lines.last().unwrap().contains("p=0"));
        let g = render_table(&s.g1);
        assert!(g.contains("q=2"));
        assert!(g.lines().last().unwrap().contains("p=-1"));
    }
}
