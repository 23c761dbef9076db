//! Exhaustive enumeration of LPP tuples and small-field censuses.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::klenian::{eklenian_structure, EKlenianGroup};
use crate::lpp::tuple_table;
use crate::ortho::count_lpp_companions;
use crate::perm::{all_permutations, autotopism_count, tuples_isotopic, PermTuple, Permutation};

/// Largest order enumerated unless a caller raises the limit.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 5;
/// Companion histograms are computed up to this order.
pub const COMPANION_HISTOGRAM_LIMIT: usize = 4;
/// Subgroup counting walks `(q-1)!` layouts; refused above this order.
pub const SUBGROUP_COUNT_LIMIT: usize = 9;

fn check_limit(q: usize, limit: usize) -> Result<()> {
    if q > limit {
        Err(Error::TooLarge { q, limit })
    } else {
        Ok(())
    }
}

/// Completes a first row to every Latin square, calling `visit` with the row-major grid
/// `grid[i*q + x] = β_i(x)`.
fn complete_rows(q: usize, first: &[usize], visit: &mut dyn FnMut(&[u8])) {
    let mut grid = vec![0u8; q * q];
    let mut cols = vec![0u32; q];
    let mut rows = vec![0u32; q];
    for (x, &v) in first.iter().enumerate() {
        grid[x] = v as u8;
        cols[x] |= 1 << v;
    }
    rows[0] = (1 << q) - 1;
    fn go(
        q: usize,
        cell: usize,
        grid: &mut [u8],
        rows: &mut [u32],
        cols: &mut [u32],
        visit: &mut dyn FnMut(&[u8]),
    ) {
        if cell == q * q {
            visit(grid);
            return;
        }
        let (i, x) = (cell / q, cell % q);
        let mut free = !(rows[i] | cols[x]) & ((1u32 << q) - 1);
        while free != 0 {
            let v = free.trailing_zeros();
            free &= free - 1;
            let bit = 1u32 << v;
            rows[i] |= bit;
            cols[x] |= bit;
            grid[cell] = v as u8;
            go(q, cell + 1, grid, rows, cols, visit);
            rows[i] &= !bit;
            cols[x] &= !bit;
        }
    }
    go(q, q, &mut grid, &mut rows, &mut cols, visit);
}

/// Every LPP tuple as a compact row-major grid, in deterministic order.
pub fn tuple_grids(q: usize, limit: usize) -> Result<Vec<Vec<u8>>> {
    check_limit(q, limit)?;
    if q == 0 {
        return Ok(Vec::new());
    }
    let chunks: Vec<Vec<Vec<u8>>> = all_permutations(q)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            complete_rows(q, first.images(), &mut |g| out.push(g.to_vec()));
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

pub fn grid_to_tuple(q: usize, grid: &[u8]) -> PermTuple {
    let rows: Vec<Vec<usize>> = grid
        .chunks(q)
        .map(|r| r.iter().map(|&v| v as usize).collect())
        .collect();
    PermTuple::from_rows(&rows).expect("enumerated grids are Latin")
}

/// Number of LPP tuples (Latin squares of order `q`).
pub fn count_lpps(field: &Field) -> Result<u64> {
    count_lpps_with_limit(field, DEFAULT_ENUMERATION_LIMIT)
}

pub fn count_lpps_with_limit(field: &Field, limit: usize) -> Result<u64> {
    let q = field.q();
    check_limit(q, limit)?;
    Ok(all_permutations(q)
        .into_par_iter()
        .map(|first| {
            let mut n = 0u64;
            complete_rows(q, first.images(), &mut |_| n += 1);
            n
        })
        .sum())
}

pub fn enumerate_lpps(field: &Field) -> Result<Vec<PermTuple>> {
    enumerate_lpps_with_limit(field, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_lpps_with_limit(field: &Field, limit: usize) -> Result<Vec<PermTuple>> {
    let q = field.q();
    Ok(tuple_grids(q, limit)?
        .par_iter()
        .map(|g| grid_to_tuple(q, g))
        .collect())
}

/// Writes one JSON array of image arrays per line.
pub fn write_lpps_ndjson<W: Write>(field: &Field, limit: usize, mut out: W) -> Result<u64> {
    let q = field.q();
    let grids = tuple_grids(q, limit)?;
    for g in &grids {
        let rows: Vec<&[u8]> = g.chunks(q).collect();
        let line = serde_json::to_string(&rows).expect("serializable");
        writeln!(out, "{line}").map_err(|_| Error::Parse {
            what: "output stream",
            input: String::new(),
        })?;
    }
    Ok(grids.len() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub q: usize,
    pub total_lpps: u64,
    /// e → number of tuples whose permutations form an e-Klenian group.
    pub eklenian_counts: BTreeMap<u32, u64>,
    /// Tuples `(μ_n)` with `{μ_0⁻¹ μ_n}` an e-Klenian group, summed over e.
    pub equivalent_to_eklenian: u64,
    pub equivalent_by_e: BTreeMap<u32, u64>,
    /// `None` above the companion histogram limit.
    pub lpps_with_lpp_companion: Option<u64>,
    /// Number of LPP companions → number of LPPs with that many.
    pub companion_counts: Option<BTreeMap<usize, u64>>,
    /// Classes under `σ Ω δ` with level reordering (isotopy).
    pub equivalence_classes: u64,
    pub class_sizes: Vec<u64>,
}

#[derive(Default)]
struct Tally {
    eklenian: BTreeMap<u32, u64>,
    equivalent: BTreeMap<u32, u64>,
    with_companion: u64,
    histogram: BTreeMap<usize, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.eklenian {
            *self.eklenian.entry(k).or_default() += v;
        }
        for (k, v) in other.equivalent {
            *self.equivalent.entry(k).or_default() += v;
        }
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        self.with_companion += other.with_companion;
        self
    }
}

/// The block exponents giving distinct group shapes (`e = r` repeats `e = 0`).
fn census_exponents(field: &Field) -> Vec<u32> {
    (0..field.r().max(1)).collect()
}

pub fn census(field: &Field) -> Result<CensusReport> {
    census_with_limit(field, DEFAULT_ENUMERATION_LIMIT)
}

pub fn census_with_limit(field: &Field, limit: usize) -> Result<CensusReport> {
    let q = field.q();
    let grids = tuple_grids(q, limit)?;
    let exps = census_exponents(field);
    let histogram = q <= COMPANION_HISTOGRAM_LIMIT;
    let tally = grids
        .par_iter()
        .map(|g| {
            let tuple = grid_to_tuple(q, g);
            let mut t = Tally::default();
            let perms = tuple.perms();
            let has_identity = perms.iter().any(Permutation::is_identity);
            let inv = perms[0].inverse();
            let quotients: Vec<Permutation> = perms.iter().map(|b| inv.then_after(b)).collect();
            for &e in &exps {
                if has_identity && eklenian_structure(field, perms, e).is_some() {
                    *t.eklenian.entry(e).or_default() += 1;
                }
                if eklenian_structure(field, &quotients, e).is_some() {
                    *t.equivalent.entry(e).or_default() += 1;
                }
            }
            if histogram {
                let n = count_lpp_companions(&tuple_table(&tuple), q);
                *t.histogram.entry(n).or_default() += 1;
                if n > 0 {
                    t.with_companion += 1;
                }
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    let class_sizes = isotopy_class_sizes(q, &grids);
    let mut eklenian_counts = tally.eklenian;
    let mut equivalent_by_e = tally.equivalent;
    for &e in &exps {
        eklenian_counts.entry(e).or_default();
        equivalent_by_e.entry(e).or_default();
    }
    Ok(CensusReport {
        q,
        total_lpps: grids.len() as u64,
        equivalent_to_eklenian: equivalent_by_e.values().sum(),
        eklenian_counts,
        equivalent_by_e,
        lpps_with_lpp_companion: histogram.then_some(tally.with_companion),
        companion_counts: histogram.then_some(tally.histogram),
        equivalence_classes: class_sizes.len() as u64,
        class_sizes,
    })
}

/// Class sizes by orbit–stabilizer: each new representative covers `q!^3 / |autotopisms|`
/// tuples, and the scan stops once the sizes account for every tuple.
fn isotopy_class_sizes(q: usize, grids: &[Vec<u8>]) -> Vec<u64> {
    let total = grids.len() as u64;
    let group_order: u64 = (1..=q as u64).product::<u64>().pow(3);
    let mut reps: Vec<PermTuple> = Vec::new();
    let mut sizes = Vec::new();
    let mut covered = 0u64;
    for g in grids {
        if covered == total {
            break;
        }
        let tuple = grid_to_tuple(q, g);
        if reps.iter().any(|r| tuples_isotopic(r, &tuple).is_some()) {
            continue;
        }
        let size = group_order / autotopism_count(&tuple) as u64;
        covered += size;
        sizes.push(size);
        reps.push(tuple);
    }
    sizes
}

/// Distinct e-Klenian subgroups of `Σ_q`, found by walking every layout with `layout[0] = c_0`.
pub fn count_eklenian_subgroups(field: &Field, e: u32) -> Result<usize> {
    let q = field.q();
    check_limit(q, SUBGROUP_COUNT_LIMIT)?;
    if e > field.r() {
        return Err(Error::BadExponent { e, r: field.r() });
    }
    let rest: Vec<usize> = (1..q).collect();
    let tails = all_permutations(q - 1);
    let groups: HashSet<Vec<Permutation>> = tails
        .into_par_iter()
        .map(|tail| {
            let mut layout = vec![0usize];
            layout.extend(tail.images().iter().map(|&i| rest[i]));
            let g = EKlenianGroup::with_layout(field, e, layout).expect("valid layout");
            let mut elems = g.elements().to_vec();
            elems.sort();
            elems
        })
        .collect();
    Ok(groups.len())
}
