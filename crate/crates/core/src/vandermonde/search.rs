//! Exhaustive check of "spectral implies tiling" over all three-interval
//! cell configurations with a given denominator, with candidate spectra on
//! a rational grid.
//!
//! For configurations on the `(1/d)`-grid the exponent pattern of
//! `xi + d k` is `k`-independent, so orthogonality of a candidate residue
//! pair is a single transform-vanishing test; candidate spectra are then
//! cliques in the difference-vanishing graph. Every clique survivor is
//! re-verified through the generic orthogonality/completeness pipeline
//! before it counts.

use rayon::prelude::*;
use serde::Serialize;

use super::{torus_solutions, GVExponents};
use crate::classify::{
    classify_three_intervals, verify_completeness, verify_orthogonality,
    Branch, BranchReport, PeriodicSpectrum, TilesOutcome,
};
use crate::geometry::{ft_is_zero, IntervalUnion};
use crate::rational::{ratio, Rational};

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Largest denominator `d` to probe; the scan starts at 3.
    pub d_max: u64,
    /// Residue lattice `(1/grid) Z`; `None` uses `grid = d` per denominator.
    pub grid: Option<u64>,
    /// Cap for the greedy tiling window, in cells.
    pub p_max: u64,
}

impl SearchOptions {
    pub fn new(d_max: u64) -> Self {
        SearchOptions {
            d_max,
            grid: None,
            p_max: crate::classify::DEFAULT_P_MAX,
        }
    }
}

/// An Exceptional-branch hit: the pair, its distinguished Vandermonde
/// system, and the root-of-unity solution counts at the search order.
#[derive(Debug, Clone, Serialize)]
pub struct ExceptionalHit {
    pub spectrum: String,
    pub system: Vec<[u64; 3]>,
    pub torus_order: u64,
    pub trivial_solutions: u64,
    pub nontrivial_solutions: u64,
}

/// A spectral configuration whose interval union does not tile: the
/// counterexample the search is hunting for.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub omega: String,
    pub spectrum: String,
    pub conflict_cell: u64,
}

/// Per-configuration outcome.
#[derive(Debug, Clone)]
pub struct ConfigReport {
    pub d: u64,
    pub grid: u64,
    pub k: [u64; 3],
    pub l: [u64; 3],
    pub cells: Vec<u64>,
    pub omega: String,
    pub spectral_count: u64,
    pub spectra: Vec<String>,
    pub tiles: bool,
    pub exceptional: Vec<ExceptionalHit>,
    pub counterexample: Option<Counterexample>,
}

impl ConfigReport {
    /// Whether every spectrum found for this configuration lives on a
    /// tiling set (vacuously true without spectra).
    pub fn tiles_all(&self) -> bool {
        self.spectral_count == 0 || self.tiles
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d,
            "grid": self.grid,
            "k": self.k.to_vec(),
            "l": self.l.to_vec(),
            "cells": self.cells,
            "omega": self.omega,
            "spectralCount": self.spectral_count,
            "spectra": self.spectra,
            "tilesAll": self.tiles_all(),
            "exceptionalCount": self.exceptional.len(),
            "exceptional": serde_json::to_value(&self.exceptional).unwrap(),
            "counterexample": serde_json::to_value(&self.counterexample).unwrap(),
        })
    }
}

/// Per-denominator aggregate counts.
#[derive(Debug, Clone, Serialize)]
pub struct DSummary {
    pub d: u64,
    pub configs: u64,
    pub spectral_configs: u64,
    pub spectral_pairs: u64,
    pub tiling_configs: u64,
    pub exceptional_hits: u64,
    pub counterexamples: u64,
}

impl DSummary {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "summary": true,
            "d": self.d,
            "configs": self.configs,
            "spectralConfigs": self.spectral_configs,
            "spectralPairs": self.spectral_pairs,
            "tilingConfigs": self.tiling_configs,
            "exceptionalHits": self.exceptional_hits,
            "counterexamples": self.counterexamples,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub rows: Vec<ConfigReport>,
    pub summaries: Vec<DSummary>,
}

impl SearchReport {
    pub fn has_counterexample(&self) -> bool {
        self.rows.iter().any(|r| r.counterexample.is_some())
    }

    /// One JSON object per configuration row, then one per summary, in
    /// deterministic enumeration order.
    pub fn to_json_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self.rows.iter().map(|r| r.to_json().to_string()).collect();
        out.extend(self.summaries.iter().map(|s| s.to_json().to_string()));
        out
    }
}

/// Exhaustively scans three-interval configurations for `3 <= d <= d_max`.
///
/// Interval translations by whole multiples of `grid` (in real units) fix
/// every candidate exponential, so the gap parameters range over one
/// fundamental domain of that action: `1..=d*grid` cells each.
pub fn exceptional_search(opts: &SearchOptions) -> SearchReport {
    assert!(opts.d_max >= 3, "the scan starts at d = 3");
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for d in 3..=opts.d_max {
        let grid = opts.grid.unwrap_or(d);
        let configs = enumerate_configs(d, grid);
        let d_rows: Vec<ConfigReport> = configs
            .par_iter()
            .map(|&(k, l)| evaluate_config(d, grid, k, l, opts.p_max))
            .collect();
        let summary = DSummary {
            d,
            configs: d_rows.len() as u64,
            spectral_configs: d_rows.iter().filter(|r| r.spectral_count > 0).count() as u64,
            spectral_pairs: d_rows.iter().map(|r| r.spectral_count).sum(),
            tiling_configs: d_rows
                .iter()
                .filter(|r| r.spectral_count > 0 && r.tiles)
                .count() as u64,
            exceptional_hits: d_rows.iter().map(|r| r.exceptional.len() as u64).sum(),
            counterexamples: d_rows
                .iter()
                .filter(|r| r.counterexample.is_some())
                .count() as u64,
        };
        rows.extend(d_rows);
        summaries.push(summary);
    }
    SearchReport { rows, summaries }
}

/// All `(k, l)` with `k1 + k2 + k3 = d`, positive parts, and gaps in one
/// fundamental domain.
fn enumerate_configs(d: u64, grid: u64) -> Vec<([u64; 3], [u64; 3])> {
    let gap_bound = d * grid;
    let mut out = Vec::new();
    for k1 in 1..=(d - 2) {
        for k2 in 1..=(d - 1 - k1) {
            let k3 = d - k1 - k2;
            for gap1 in 1..=gap_bound {
                let l2 = k1 + gap1;
                for gap2 in 1..=gap_bound {
                    let l3 = l2 + k2 + gap2;
                    out.push(([k1, k2, k3], [0, l2, l3]));
                }
            }
        }
    }
    out
}

fn omega_from_cells(d: u64, k: [u64; 3], l: [u64; 3]) -> IntervalUnion {
    let intervals = (0..3)
        .map(|j| {
            (
                ratio(l[j] as i64, d as i64),
                ratio(k[j] as i64, d as i64),
            )
        })
        .collect();
    IntervalUnion::new(intervals).expect("enumerated cells form a valid union")
}

fn evaluate_config(d: u64, grid: u64, k: [u64; 3], l: [u64; 3], p_max: u64) -> ConfigReport {
    let omega = omega_from_cells(d, k, l);
    let cells: Vec<u64> = (0..3)
        .flat_map(|j| l[j]..l[j] + k[j])
        .collect();

    // Difference classes m/grid whose whole progression m/grid + d Z has a
    // vanishing transform; on the (1/d)-grid one member decides all.
    let classes = d * grid;
    let mut vanish = vec![false; classes as usize];
    for m in 1..classes {
        let xi = ratio(m as i64, grid as i64);
        vanish[m as usize] = ft_is_zero(&omega, &xi).expect("nonzero frequency");
    }

    // Candidate spectra: {0} plus (d-1)-cliques in the difference graph.
    let vertices: Vec<u64> = (1..classes).filter(|&m| vanish[m as usize]).collect();
    let mut cliques = Vec::new();
    let mut current = Vec::new();
    extend_cliques(
        &vertices,
        &vanish,
        d as usize - 1,
        0,
        &mut current,
        &mut cliques,
    );

    let tiles_outcome = tiles_cells_for(&cells, d, p_max);
    let tiles = tiles_outcome.tiles();

    let mut spectra = Vec::new();
    let mut exceptional = Vec::new();
    let mut counterexample = None;
    for clique in &cliques {
        let mut residues: Vec<Rational> = vec![Rational::from_integer(0.into())];
        residues.extend(clique.iter().map(|&m| ratio(m as i64, grid as i64)));
        let spectrum =
            PeriodicSpectrum::new(d, residues).expect("clique residues are distinct in range");

        // The clique filter must agree with the generic pipeline.
        if !verify_orthogonality(&omega, &spectrum) {
            panic!(
                "difference-vanishing clique disagrees with verify_orthogonality \
                 for omega={omega} spectrum={spectrum}"
            );
        }
        let completeness =
            verify_completeness(&omega, &spectrum).expect("orthogonality just verified");
        if !completeness.admits_spectrality() {
            continue;
        }
        spectra.push(spectrum.to_string());

        let report = classify_three_intervals(&omega, &spectrum)
            .expect("verified pair classifies without error");
        if report.branch == Branch::Exceptional {
            let system = distinguished_system(&report)
                .expect("exceptional reports carry their system");
            let torus = torus_solutions(&system, d * grid);
            exceptional.push(ExceptionalHit {
                spectrum: spectrum.to_string(),
                system: system.iter().map(|e| [e.j(), e.k(), e.l()]).collect(),
                torus_order: torus.order(),
                trivial_solutions: torus.trivial_count(),
                nontrivial_solutions: torus.nontrivial_count(),
            });
        }

        if counterexample.is_none() {
            if let TilesOutcome::NotTiling { conflict_cell } = &tiles_outcome {
                counterexample = Some(Counterexample {
                    omega: omega.to_string(),
                    spectrum: spectrum.to_string(),
                    conflict_cell: *conflict_cell,
                });
            }
        }
    }

    ConfigReport {
        d,
        grid,
        k,
        l,
        cells,
        omega: omega.to_string(),
        spectral_count: spectra.len() as u64,
        spectra,
        tiles,
        exceptional,
        counterexample,
    }
}

fn tiles_cells_for(cells: &[u64], d: u64, p_max: u64) -> TilesOutcome {
    crate::classify::tiles_cells(cells, d, p_max).expect("search windows stay under the cap")
}

/// Depth-first extension of difference-vanishing cliques, ascending, so
/// the enumeration order (and everything downstream) is deterministic.
fn extend_cliques(
    vertices: &[u64],
    vanish: &[bool],
    size: usize,
    start: usize,
    current: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if current.len() == size {
        out.push(current.clone());
        return;
    }
    if vertices.len() - start < size - current.len() {
        return;
    }
    for (offset, &v) in vertices[start..].iter().enumerate() {
        if current.iter().all(|&u| vanish[(v - u) as usize]) {
            current.push(v);
            extend_cliques(vertices, vanish, size, start + offset + 1, current, out);
            current.pop();
        }
    }
}

/// Reads the distinguished exponent triples back out of an Exceptional
/// branch report.
fn distinguished_system(report: &BranchReport) -> Option<Vec<GVExponents>> {
    let value = &report
        .evidence
        .iter()
        .find(|e| e.name == "distinguishedSystem")?
        .value;
    let triples = value.as_array()?;
    let mut out = Vec::with_capacity(triples.len());
    for t in triples {
        let nums: Vec<u64> = t
            .as_array()?
            .iter()
            .map(|v| v.as_u64())
            .collect::<Option<_>>()?;
        out.push(GVExponents::new(nums[0], nums[1], nums[2]).ok()?);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d3_finds_the_equal_thirds_spectra_and_no_counterexamples() {
        let report = exceptional_search(&SearchOptions::new(3));
        assert!(!report.has_counterexample());
        let s = &report.summaries[0];
        assert_eq!(s.d, 3);
        assert!(s.spectral_pairs > 0, "the equal-thirds family must appear");
        assert_eq!(s.counterexamples, 0);
        // d = 3 forces k = (1,1,1): every configuration is three equal
        // intervals.
        assert!(report.rows.iter().all(|r| r.k == [1, 1, 1]));
    }

    #[test]
    fn canonical_equal_thirds_config_is_spectral_and_tiles() {
        let report = exceptional_search(&SearchOptions::new(3));
        let row = report
            .rows
            .iter()
            .find(|r| r.l == [0, 3, 6])
            .expect("unit-gap configuration enumerated");
        assert!(row.spectral_count > 0);
        assert!(row.tiles);
        assert!(row.spectra.contains(&"d=3;0,1/3,2/3".to_string()));
    }
}
