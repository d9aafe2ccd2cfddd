//! Tiling of the integers by the cell set of an interval union.
//!
//! With the leftmost cell pinned at 0, the leftmost uncovered integer can
//! only ever be covered by a translate placed exactly there, so placement
//! is forced and the run either hits a conflict or revisits a frontier
//! state. A revisited state yields a periodic tiling certificate; the
//! window between the two visits is the complement.

use serde::Serialize;

use super::ClassifyError;
use crate::geometry::{cell_decomposition, IntervalUnion};
use crate::rational::{format_rational, ratio};

/// Default cap on the explored window, in cells.
pub const DEFAULT_P_MAX: u64 = 1 << 16;

/// A periodic tiling of the integers by the cell set: the complement `B`
/// satisfies `cells (+) B = Z_P` with every residue covered exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TilingCertificate {
    /// Period of the tiling, in cells.
    pub cell_period: u64,
    /// Translate offsets within one period, in cells.
    pub complement: Vec<u64>,
    /// Cells per unit length; translates in real units are
    /// `complement / Q + (P / Q) Z`.
    pub cell_denominator: u64,
    /// The tile itself, in cells.
    pub cells: Vec<u64>,
}

impl TilingCertificate {
    /// Re-expands the certificate and checks the exact-partition property.
    pub fn is_exact_partition(&self) -> bool {
        let p = self.cell_period as usize;
        if self.cells.len() * self.complement.len() != p {
            return false;
        }
        let mut hits = vec![0u32; p];
        for &b in &self.complement {
            for &a in &self.cells {
                hits[((a + b) % self.cell_period) as usize] += 1;
            }
        }
        hits.iter().all(|&h| h == 1)
    }

    /// Real translate set `B/Q + (P/Q) Z` as exact rationals.
    pub fn real_translates(&self) -> (Vec<String>, String) {
        let q = self.cell_denominator as i64;
        let offsets = self
            .complement
            .iter()
            .map(|&b| format_rational(&ratio(b as i64, q)))
            .collect();
        let period = format_rational(&ratio(self.cell_period as i64, q));
        (offsets, period)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (offsets, period) = self.real_translates();
        serde_json::json!({
            "cellPeriod": self.cell_period,
            "complement": self.complement,
            "cellDenominator": self.cell_denominator,
            "cells": self.cells,
            "realTranslates": {"offsets": offsets, "period": period},
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TilesOutcome {
    Tiles(TilingCertificate),
    /// The forced placement collided at the stated cell.
    NotTiling { conflict_cell: u64 },
}

impl TilesOutcome {
    pub fn tiles(&self) -> bool {
        matches!(self, TilesOutcome::Tiles(_))
    }

    pub fn certificate(&self) -> Option<&TilingCertificate> {
        match self {
            TilesOutcome::Tiles(c) => Some(c),
            TilesOutcome::NotTiling { .. } => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            TilesOutcome::Tiles(c) => {
                let mut v = c.to_json();
                v.as_object_mut()
                    .unwrap()
                    .insert("tiles".into(), serde_json::json!(true));
                v
            }
            TilesOutcome::NotTiling { conflict_cell } => serde_json::json!({
                "tiles": false,
                "conflictCell": conflict_cell,
            }),
        }
    }
}

/// Dynamic bitset for the frontier overhang; bit `i` marks offset `i + 1`
/// ahead of the current position as covered.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Overhang {
    words: Vec<u64>,
}

impl Overhang {
    fn new(width_bits: usize) -> Self {
        Overhang {
            words: vec![0; width_bits.div_ceil(64).max(1)],
        }
    }

    fn get(&self, bit: usize) -> bool {
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    fn set(&mut self, bit: usize) {
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    fn shift_down(&mut self, by: usize) {
        let word_shift = by / 64;
        let bit_shift = by % 64;
        let n = self.words.len();
        for i in 0..n {
            let src = i + word_shift;
            let mut w = if src < n { self.words[src] } else { 0 };
            if bit_shift > 0 {
                w >>= bit_shift;
                if src + 1 < n {
                    w |= self.words[src + 1] << (64 - bit_shift);
                }
            }
            self.words[i] = w;
        }
    }
}

/// Decides tiling of the integers by a finite cell set containing 0.
///
/// `p_max` caps the explored window; the frontier state space is finite so
/// the cap is only a guard against pathological spans.
pub fn tiles_cells(
    cells: &[u64],
    cell_denominator: u64,
    p_max: u64,
) -> Result<TilesOutcome, ClassifyError> {
    assert!(!cells.is_empty() && cells[0] == 0, "cells must start at 0");
    let span = (*cells.last().unwrap() + 1) as usize;
    let width = span - 1;

    let mut seen: std::collections::HashMap<Overhang, u64> = std::collections::HashMap::new();
    let mut translates: Vec<u64> = Vec::new();
    let mut mask = Overhang::new(width);
    let mut position: u64 = 0;

    loop {
        if let Some(&start) = seen.get(&mask) {
            let period = position - start;
            let complement: Vec<u64> = translates
                .iter()
                .filter(|&&t| t >= start)
                .map(|&t| t - start)
                .collect();
            let cert = TilingCertificate {
                cell_period: period,
                complement,
                cell_denominator,
                cells: cells.to_vec(),
            };
            if !cert.is_exact_partition() {
                return Err(ClassifyError::Internal(
                    "greedy tiling produced a non-partition certificate".into(),
                ));
            }
            return Ok(TilesOutcome::Tiles(cert));
        }
        seen.insert(mask.clone(), position);

        // Place the tile at the current position; position itself is the
        // leftmost uncovered cell, so this is the only legal move.
        for &c in &cells[1..] {
            if mask.get(c as usize - 1) {
                return Ok(TilesOutcome::NotTiling {
                    conflict_cell: position + c,
                });
            }
        }
        translates.push(position);
        for &c in &cells[1..] {
            mask.set(c as usize - 1);
        }

        // Advance to the next uncovered cell.
        let mut step = 1usize;
        while step <= width && mask.get(step - 1) {
            step += 1;
        }
        mask.shift_down(step);
        position += step as u64;
        if position > p_max {
            return Err(ClassifyError::WindowExceeded(p_max));
        }
    }
}

/// Tiling decision for an interval union, through its cell decomposition.
pub fn tiles_decision(
    omega: &IntervalUnion,
    p_max: Option<u64>,
) -> Result<TilesOutcome, ClassifyError> {
    let dec = cell_decomposition(omega);
    tiles_cells(
        dec.cells(),
        dec.denominator(),
        p_max.unwrap_or(DEFAULT_P_MAX),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega(text: &str) -> IntervalUnion {
        text.parse().unwrap()
    }

    #[test]
    fn unit_interval_tiles_by_z() {
        let out = tiles_decision(&omega("0,1"), None).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.cell_period, 1);
        assert_eq!(cert.complement, vec![0]);
        assert_eq!(cert.real_translates(), (vec!["0".to_string()], "1".into()));
    }

    #[test]
    fn half_shift_union_tiles_with_period_four() {
        let out = tiles_decision(&omega("0,1/2;1,1/2"), None).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.cell_period, 4);
        assert_eq!(cert.complement, vec![0, 1]);
        assert_eq!(cert.cell_denominator, 2);
        let (offsets, period) = cert.real_translates();
        assert_eq!(offsets, vec!["0", "1/2"]);
        assert_eq!(period, "2");
        assert!(cert.is_exact_partition());
    }

    #[test]
    fn witness_cells_do_not_tile() {
        let out = tiles_cells(&[0, 1, 3], 3, DEFAULT_P_MAX).unwrap();
        assert_eq!(out, TilesOutcome::NotTiling { conflict_cell: 3 });
    }

    #[test]
    fn non_tiling_interval_union() {
        // {0,1,3} realized as [0,2/3) u [1,4/3).
        let out = tiles_decision(&omega("0,2/3;1,1/3"), None).unwrap();
        assert!(!out.tiles());
    }

    #[test]
    fn certificates_partition_for_sample_tiles() {
        for cells in [
            vec![0u64],
            vec![0, 2],
            vec![0, 1, 4, 5],
            vec![0, 3, 6],
            vec![0, 1, 2],
        ] {
            let out = tiles_cells(&cells, 1, DEFAULT_P_MAX).unwrap();
            let cert = out.certificate().expect("these sets tile");
            assert!(cert.is_exact_partition());
        }
    }
}
