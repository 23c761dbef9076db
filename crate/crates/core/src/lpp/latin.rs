use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldSpec};
use crate::mpoly::MPoly;

use super::is_lpp_table;

/// A `q × q` grid of element indices; rows follow the first variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct LatinSquare {
    grid: Vec<Vec<usize>>,
}

impl TryFrom<Vec<Vec<usize>>> for LatinSquare {
    type Error = Error;
    fn try_from(grid: Vec<Vec<usize>>) -> Result<Self> {
        LatinSquare::new(grid)
    }
}

impl From<LatinSquare> for Vec<Vec<usize>> {
    fn from(l: LatinSquare) -> Self {
        l.grid
    }
}

impl LatinSquare {
    pub fn new(grid: Vec<Vec<usize>>) -> Result<Self> {
        let q = grid.len();
        if q == 0 || grid.iter().any(|r| r.len() != q) {
            return Err(Error::NotLatin);
        }
        if grid.iter().flatten().any(|&v| v >= q) {
            return Err(Error::NotLatin);
        }
        let flat: Vec<usize> = grid.iter().flatten().copied().collect();
        if !is_lpp_table(&flat, q, 2) {
            return Err(Error::NotLatin);
        }
        Ok(LatinSquare { grid })
    }

    /// Builds from a row-major value table of length `q^2`.
    pub fn from_table(table: &[usize], q: usize) -> Result<Self> {
        if table.len() != q * q {
            return Err(Error::NotLatin);
        }
        LatinSquare::new(table.chunks(q).map(<[usize]>::to_vec).collect())
    }

    pub fn q(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &[Vec<usize>] {
        &self.grid
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.grid[i][j]
    }

    pub fn table(&self) -> Vec<usize> {
        self.grid.iter().flatten().copied().collect()
    }

    /// One row per line, indices separated by commas.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.grid {
            let line: Vec<String> = row.iter().map(usize::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(input: &str) -> Result<Self> {
        let grid = input
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split(',')
                    .map(|c| {
                        c.trim().parse::<usize>().map_err(|_| Error::Parse {
                            what: "Latin square CSV",
                            input: l.to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        LatinSquare::new(grid)
    }

    /// Grid of element labels, columns right-aligned.
    pub fn render(&self, field: &FieldSpec) -> String {
        let labels: Vec<Vec<String>> = self
            .grid
            .iter()
            .map(|r| r.iter().map(|&v| field.label(v)).collect())
            .collect();
        let width = labels.iter().flatten().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        for row in &labels {
            let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }
}

/// `grid[i][j]` becomes `f(c_i, c_j)`.
pub fn latin_to_lpp(field: &Field, square: &LatinSquare) -> Result<MPoly> {
    if square.q() != field.q() {
        return Err(Error::OrderMismatch);
    }
    MPoly::interpolate(field, 2, &square.table())
}

pub fn lpp_to_latin(f: &MPoly) -> Result<LatinSquare> {
    if f.nvars() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: f.nvars(),
        });
    }
    let table = f.eval_table()?;
    LatinSquare::from_table(&table, f.field().q()).map_err(|_| Error::NotLpp)
}
