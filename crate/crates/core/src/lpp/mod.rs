//! Local permutation polynomials: predicates, tuple and Latin-square bijections, constructions.

mod constructions;
mod latin;

pub use constructions::{
    compose_inner, compose_outer, full_cycle_poly, max_degree_lpp_2, max_degree_lpp_n, sum_lpp,
    transposition_poly,
};
pub use latin::{latin_to_lpp, lpp_to_latin, LatinSquare};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::mpoly::MPoly;
use crate::perm::{PermTuple, Permutation};

/// Which variable a level permutation acts on in [`lpp_to_tuple_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LevelAxis {
    /// `f(c_j, β_i(c_j)) = c_i`.
    #[default]
    Second,
    /// `f(β_i(c_j), c_j) = c_i`.
    First,
}

/// True iff every value occurs exactly `q^(n-1)` times.
pub fn is_permutation_poly(f: &MPoly) -> bool {
    let Ok(table) = f.eval_table() else {
        return false;
    };
    let q = f.field().q();
    let mut counts = vec![0usize; q];
    for &v in &table {
        counts[v] += 1;
    }
    let target = table.len() / q;
    counts.iter().all(|&c| c == target)
}

/// Axis-parallel bijectivity of a dense value table (layout of [`MPoly::eval_table`]).
pub fn is_lpp_table(table: &[usize], q: usize, nvars: usize) -> bool {
    let mut stride = 1usize;
    let mut seen = vec![0usize; q];
    let mut stamp = 0usize;
    for _ in 0..nvars {
        let block = stride * q;
        for base in (0..table.len()).step_by(block) {
            for offset in 0..stride {
                stamp += 1;
                for a in 0..q {
                    let v = table[base + offset + a * stride];
                    if seen[v] == stamp {
                        return false;
                    }
                    seen[v] = stamp;
                }
            }
        }
        stride = block;
    }
    true
}

/// True iff `f` permutes `F_q` in each variable for every fixing of the others.
pub fn is_lpp(f: &MPoly) -> bool {
    match f.eval_table() {
        Ok(table) => is_lpp_table(&table, f.field().q(), f.nvars()),
        Err(_) => false,
    }
}

fn bivariate_table(f: &MPoly) -> Result<Vec<usize>> {
    if f.nvars() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: f.nvars(),
        });
    }
    let table = f.eval_table()?;
    if !is_lpp_table(&table, f.field().q(), 2) {
        return Err(Error::NotLpp);
    }
    Ok(table)
}

/// `β_i(c_j)` is the unique `y` with `f(c_j, y) = c_i`.
pub fn lpp_to_tuple(f: &MPoly) -> Result<PermTuple> {
    lpp_to_tuple_with(f, LevelAxis::Second)
}

pub fn lpp_to_tuple_with(f: &MPoly, axis: LevelAxis) -> Result<PermTuple> {
    let table = bivariate_table(f)?;
    let q = f.field().q();
    let mut rows = vec![vec![0usize; q]; q];
    for x in 0..q {
        for y in 0..q {
            let level = table[x * q + y];
            match axis {
                LevelAxis::Second => rows[level][x] = y,
                LevelAxis::First => rows[level][y] = x,
            }
        }
    }
    let perms = rows
        .into_iter()
        .map(Permutation::from_images)
        .collect::<Result<Vec<_>>>()?;
    Ok(PermTuple::new_unchecked(perms))
}

/// Value table of the LPP with `f(c_j, β_i(c_j)) = c_i`.
pub fn tuple_table(t: &PermTuple) -> Vec<usize> {
    let q = t.q();
    let mut table = vec![0usize; q * q];
    for (i, beta) in t.perms().iter().enumerate() {
        for x in 0..q {
            table[x * q + beta.apply(x)] = i;
        }
    }
    table
}

/// The reduced bivariate LPP whose level sets are the graphs of the tuple.
pub fn tuple_to_lpp(field: &Field, t: &PermTuple) -> Result<MPoly> {
    if t.q() != field.q() {
        return Err(Error::WrongLength {
            expected: field.q(),
            got: t.q(),
        });
    }
    if !crate::perm::tuple_valid(t.perms())? {
        return Err(Error::InvalidTuple);
    }
    MPoly::interpolate(field, 2, &tuple_table(t))
}
