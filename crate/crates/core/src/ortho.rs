//! Orthogonal systems, companions and MOLS.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::klenian::{EKlenianGroup, Indexing};
use crate::lpp::{is_lpp, is_permutation_poly, lpp_to_latin, LatinSquare};
use crate::mpoly::MPoly;
use crate::perm::Permutation;

/// Full companion enumeration is refused above this order.
pub const COMPANION_ENUMERATION_LIMIT: usize = 3;
/// LPP companion search is refused above this order.
pub const LPP_COMPANION_LIMIT: usize = 5;

/// True iff every target vector in `F_q^m` is hit `q^(n-m)` times.
pub fn is_orthogonal_system(fs: &[MPoly]) -> Result<bool> {
    let first = fs.first().ok_or(Error::ArityMismatch {
        expected: 1,
        got: 0,
    })?;
    let n = first.nvars();
    let m = fs.len();
    if m > n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: m,
        });
    }
    for f in fs {
        if **f.field() != **first.field() {
            return Err(Error::FieldMismatch);
        }
        if f.nvars() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: f.nvars(),
            });
        }
    }
    let q = first.field().q();
    let tables = fs
        .iter()
        .map(MPoly::eval_table)
        .collect::<Result<Vec<_>>>()?;
    let targets = q.pow(m as u32);
    let mut counts = vec![0usize; targets];
    for idx in 0..tables[0].len() {
        let key = tables.iter().fold(0usize, |acc, t| acc * q + t[idx]);
        counts[key] += 1;
    }
    let want = tables[0].len() / targets;
    Ok(counts.iter().all(|&c| c == want))
}

/// True iff `(f, g)` permutes `F_q^2`.
pub fn is_companion(f: &MPoly, g: &MPoly) -> bool {
    f.nvars() == 2
        && g.nvars() == 2
        && is_orthogonal_system(&[f.clone(), g.clone()]).unwrap_or(false)
}

/// `q!^q`, the number of companions of any bivariate permutation polynomial.
pub fn companion_count(q: usize) -> BigUint {
    let fact: BigUint = (1..=q).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k));
    fact.pow(q as u32)
}

/// Every companion of `f`: on the `i`-th level set `g` takes the values `σ_i(c_j)`.
pub struct Companions {
    field: Field,
    levels: Vec<Vec<usize>>,
    perms: Vec<Permutation>,
    counter: Vec<usize>,
    done: bool,
}

impl Iterator for Companions {
    type Item = MPoly;

    fn next(&mut self) -> Option<MPoly> {
        if self.done {
            return None;
        }
        let q = self.field.q();
        let mut table = vec![0usize; q * q];
        for (level, &pi) in self.levels.iter().zip(&self.counter) {
            for (j, &cell) in level.iter().enumerate() {
                table[cell] = self.perms[pi].apply(j);
            }
        }
        let mut k = 0;
        loop {
            if k == self.counter.len() {
                self.done = true;
                break;
            }
            self.counter[k] += 1;
            if self.counter[k] < self.perms.len() {
                break;
            }
            self.counter[k] = 0;
            k += 1;
        }
        Some(MPoly::interpolate(&self.field, 2, &table).expect("complete table"))
    }
}

pub fn enumerate_companions(f: &MPoly) -> Result<Companions> {
    let q = f.field().q();
    if q > COMPANION_ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            q,
            limit: COMPANION_ENUMERATION_LIMIT,
        });
    }
    if f.nvars() != 2 || !is_permutation_poly(f) {
        return Err(Error::NotPermutation);
    }
    let table = f.eval_table()?;
    let mut levels = vec![Vec::with_capacity(q); q];
    for (cell, &v) in table.iter().enumerate() {
        levels[v].push(cell);
    }
    Ok(Companions {
        field: f.field().clone(),
        levels,
        perms: crate::perm::all_permutations(q),
        counter: vec![0; q],
        done: false,
    })
}

/// Latin squares `g` orthogonal to the square `f` (row-major tables), found by backtracking.
pub fn lpp_companion_tables(f: &[usize], q: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    search_companions(f, q, &mut |g| out.push(g.to_vec()));
    out
}

pub fn count_lpp_companions(f: &[usize], q: usize) -> usize {
    let mut n = 0usize;
    search_companions(f, q, &mut |_| n += 1);
    n
}

fn search_companions(f: &[usize], q: usize, emit: &mut dyn FnMut(&[usize])) {
    struct State<'a> {
        f: &'a [usize],
        q: usize,
        g: Vec<usize>,
        rows: Vec<u32>,
        cols: Vec<u32>,
        pairs: Vec<u32>,
    }
    fn go(s: &mut State<'_>, cell: usize, emit: &mut dyn FnMut(&[usize])) {
        if cell == s.q * s.q {
            emit(&s.g);
            return;
        }
        let (x, y) = (cell / s.q, cell % s.q);
        let level = s.f[cell];
        let free = !(s.rows[x] | s.cols[y] | s.pairs[level]) & ((1u32 << s.q) - 1);
        let mut bits = free;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let bit = 1u32 << v;
            s.rows[x] |= bit;
            s.cols[y] |= bit;
            s.pairs[level] |= bit;
            s.g[cell] = v;
            go(s, cell + 1, emit);
            s.rows[x] &= !bit;
            s.cols[y] &= !bit;
            s.pairs[level] &= !bit;
        }
    }
    let mut state = State {
        f,
        q,
        g: vec![0; q * q],
        rows: vec![0; q],
        cols: vec![0; q],
        pairs: vec![0; q],
    };
    go(&mut state, 0, emit);
}

/// All LPPs `g` with `(f, g)` orthogonal.
pub fn enumerate_lpp_companions(f: &MPoly) -> Result<Vec<MPoly>> {
    let q = f.field().q();
    if f.nvars() != 2 || !is_lpp(f) {
        return Err(Error::NotLpp);
    }
    if q > LPP_COMPANION_LIMIT {
        return Err(Error::TooLarge {
            q,
            limit: LPP_COMPANION_LIMIT,
        });
    }
    let table = f.eval_table()?;
    lpp_companion_tables(&table, q)
        .into_iter()
        .map(|g| MPoly::interpolate(f.field(), 2, &g))
        .collect()
}

/// For `f = ax + by + c`, returns `c'a·x + (c'+1)b·y` with `c' ∉ {0, -1}`.
pub fn linear_companion(f: &MPoly) -> Result<MPoly> {
    let field = f.field();
    if f.nvars() != 2 || !f.is_linear() {
        return Err(Error::NotLinearLpp);
    }
    let (a, b) = (f.coeff(&[1, 0]), f.coeff(&[0, 1]));
    if a == field.zero() || b == field.zero() {
        return Err(Error::NotLinearLpp);
    }
    if field.q() == 2 {
        return Err(Error::UnsupportedOrder(2));
    }
    let one = field.one();
    let c = if field.p() == 2 {
        field.generator_u()
    } else {
        one
    };
    let c1 = field.add(c, one);
    Ok(MPoly::from_terms(
        field,
        2,
        [
            (vec![1, 0], field.mul(c, a)),
            (vec![0, 1], field.mul(c1, b)),
        ],
    ))
}

/// LPP companion of the e-Klenian polynomial `eklenian_poly(group, base, indexing)`.
///
/// The cell `(x, μ_0 g(x))`, with `x` at layout position `k`, receives the level whose
/// element index `m` satisfies `g = elements[m ⊕ (k ⊕ shift)]`.
pub fn klenian_companion(
    group: &EKlenianGroup,
    base: Option<&Permutation>,
    indexing: Indexing,
) -> Result<MPoly> {
    let field = group.field();
    if field.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let q = field.q();
    let id = Permutation::identity(q);
    let mu0 = base.unwrap_or(&id);
    if mu0.len() != q {
        return Err(Error::SizeMismatch(q, mu0.len()));
    }
    let s = indexing.shift();
    let mut table = vec![usize::MAX; q * q];
    for x in 0..q {
        let kappa = group.index_add(group.position(x), s % q);
        for v in 0..q {
            let m = (v + s) % q;
            let y = mu0.apply(group.elements()[group.index_add(m, kappa)].apply(x));
            table[x * q + y] = v;
        }
    }
    MPoly::interpolate(field, 2, &table)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolsSet {
    polys: Vec<MPoly>,
    squares: Vec<LatinSquare>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MolsReport {
    pub q: usize,
    pub size: usize,
    pub mutually_orthogonal: bool,
    pub complete: bool,
}

impl MolsSet {
    pub fn from_polys(polys: Vec<MPoly>) -> Result<Self> {
        let squares = polys.iter().map(lpp_to_latin).collect::<Result<Vec<_>>>()?;
        Ok(MolsSet { polys, squares })
    }

    pub fn polys(&self) -> &[MPoly] {
        &self.polys
    }

    pub fn squares(&self) -> &[LatinSquare] {
        &self.squares
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    pub fn report(&self) -> MolsReport {
        let q = self.squares.first().map_or(0, LatinSquare::q);
        let mutually_orthogonal = is_mols(&self.squares).unwrap_or(false);
        MolsReport {
            q,
            size: self.len(),
            mutually_orthogonal,
            complete: mutually_orthogonal && self.len() + 1 == q,
        }
    }
}

/// Superimposes two squares: cell `(i, j)` becomes `(a[i][j], b[i][j])`.
pub fn superimpose(a: &LatinSquare, b: &LatinSquare) -> Result<Vec<Vec<(usize, usize)>>> {
    if a.q() != b.q() {
        return Err(Error::OrderMismatch);
    }
    Ok(a.grid()
        .iter()
        .zip(b.grid())
        .map(|(ra, rb)| ra.iter().copied().zip(rb.iter().copied()).collect())
        .collect())
}

pub fn squares_orthogonal(a: &LatinSquare, b: &LatinSquare) -> Result<bool> {
    let q = a.q();
    let pairs = superimpose(a, b)?;
    let mut seen = vec![false; q * q];
    for &(x, y) in pairs.iter().flatten() {
        if std::mem::replace(&mut seen[x * q + y], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_mols(squares: &[LatinSquare]) -> Result<bool> {
    let Some(first) = squares.first() else {
        return Ok(true);
    };
    if squares.iter().any(|s| s.q() != first.q()) {
        return Err(Error::OrderMismatch);
    }
    for (i, a) in squares.iter().enumerate() {
        for b in &squares[i + 1..] {
            if !squares_orthogonal(a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_complete(squares: &[LatinSquare]) -> Result<bool> {
    let q = squares.first().map_or(0, LatinSquare::q);
    Ok(is_mols(squares)? && squares.len() + 1 == q)
}

fn nonzero_multiples(field: &Field, f: &MPoly, g: &MPoly) -> Result<Vec<MPoly>> {
    (0..field.q())
        .filter(|&a| a != field.zero())
        .map(|a| f.add(&g.scale(a)))
        .collect()
}

/// `{f + a·g : a ∈ F_q^*}` for an orthogonal LPP pair.
pub fn mols_from_pair(f: &MPoly, g: &MPoly) -> Result<MolsSet> {
    if !is_lpp(f) || !is_lpp(g) || !is_companion(f, g) {
        return Err(Error::NotCompanions);
    }
    let polys = nonzero_multiples(f.field(), f, g)?;
    let set = MolsSet::from_polys(polys).map_err(|_| Error::NotMols)?;
    if !is_mols(set.squares())? {
        return Err(Error::NotMols);
    }
    Ok(set)
}

/// `{f(x) + a·h(y) : a ∈ F_q^*}` for univariate permutation polynomials `f`, `h`.
pub fn mols_separated(field: &Field, f: &MPoly, h: &MPoly) -> Result<MolsSet> {
    for p in [f, h] {
        if **p.field() != **field {
            return Err(Error::FieldMismatch);
        }
        if p.nvars() != 1 || p.induced_permutation().is_none() {
            return Err(Error::NotPermutation);
        }
    }
    let fx = f.embed(2, 0)?;
    let hy = h.embed(2, 1)?;
    let set = MolsSet::from_polys(nonzero_multiples(field, &fx, &hy)?)?;
    if !is_mols(set.squares())? {
        return Err(Error::NotMols);
    }
    Ok(set)
}
