//! Multivariate polynomials over F_q in reduced form.
//!
//! Every stored exponent is below `q`, so each `MPoly` is the unique
//! representative of a function `F_q^n -> F_q`. Coefficients are element
//! indices of the owning field.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;

/// Dense tables larger than this are refused.
pub const MAX_TABLE_SIZE: usize = 1 << 22;

/// Total degree of a polynomial; the zero polynomial has no terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NoTerms,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NoTerms => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NoTerms => write!(f, "NoTerms"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Reduces `x^e` using `x^q = x`.
pub fn reduce_exponent(e: u64, q: usize) -> u32 {
    if e == 0 {
        0
    } else {
        ((e - 1) % (q as u64 - 1) + 1) as u32
    }
}

#[derive(Clone)]
pub struct MPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, usize>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field)
            && self.nvars == other.nvars
            && self.terms == other.terms
    }
}

impl Eq for MPoly {}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({})", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: Vec<u32>,
}

/// JSON polynomial, terms in canonical (graded lex, descending) order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

fn table_len(q: usize, nvars: usize) -> Result<usize> {
    let mut len = 1usize;
    for _ in 0..nvars {
        len = len
            .checked_mul(q)
            .filter(|&l| l <= MAX_TABLE_SIZE)
            .ok_or(Error::TooLarge {
                q,
                limit: MAX_TABLE_SIZE,
            })?;
    }
    Ok(len)
}

/// Applies `out[k] = sum_a v[a] * m[a][k]` along every axis of a dense `q^n` array.
fn transform_axes(field: &Field, data: &mut [usize], nvars: usize, matrix: &[Vec<usize>]) {
    let q = field.q();
    let zero = field.zero();
    let mut fiber = vec![zero; q];
    let mut stride = 1usize;
    for _ in 0..nvars {
        let block = stride * q;
        for base in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                for (a, slot) in fiber.iter_mut().enumerate() {
                    *slot = data[base + offset + a * stride];
                }
                for k in 0..q {
                    let mut acc = zero;
                    for (a, &v) in fiber.iter().enumerate() {
                        if v != zero {
                            acc = field.add(acc, field.mul(v, matrix[a][k]));
                        }
                    }
                    data[base + offset + k * stride] = acc;
                }
            }
        }
        stride = block;
    }
}

/// `lagrange[a][k]`: coefficient of `x^k` in `1 - (x - c_a)^(q-1)`.
fn lagrange_matrix(field: &Field) -> Vec<Vec<usize>> {
    let q = field.q();
    (0..q)
        .map(|a| {
            let mut poly = vec![field.one()];
            let neg_a = field.neg(a);
            for _ in 0..q - 1 {
                let mut next = vec![field.zero(); poly.len() + 1];
                for (i, &c) in poly.iter().enumerate() {
                    next[i + 1] = field.add(next[i + 1], c);
                    next[i] = field.add(next[i], field.mul(c, neg_a));
                }
                poly = next;
            }
            let mut row: Vec<usize> = poly.into_iter().map(|c| field.neg(c)).collect();
            row[0] = field.add(row[0], field.one());
            row.truncate(q);
            row
        })
        .collect()
}

/// `powers[a][k] = c_a^k` for `k < q`, with `0^0 = 1`.
fn power_matrix(field: &Field) -> Vec<Vec<usize>> {
    let q = field.q();
    (0..q)
        .map(|a| {
            let mut row = Vec::with_capacity(q);
            let mut acc = field.one();
            for _ in 0..q {
                row.push(acc);
                acc = field.mul(acc, a);
            }
            row
        })
        .collect()
}

impl MPoly {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        MPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, nvars: usize, c: usize) -> Self {
        Self::monomial(field, nvars, &vec![0u32; nvars], c)
    }

    /// The variable `x_i` (0-based).
    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        let mut exps = vec![0u64; nvars];
        exps[i] = 1;
        Self::monomial(field, nvars, &exps, field.one())
    }

    pub fn monomial<E: Copy + Into<u64>>(
        field: &Field,
        nvars: usize,
        exps: &[E],
        c: usize,
    ) -> Self {
        Self::from_terms(
            field,
            nvars,
            [(exps.iter().map(|&e| e.into()).collect(), c)],
        )
    }

    /// Sums the given terms, reducing exponents and dropping zeros.
    pub fn from_terms<I>(field: &Field, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u64>, usize)>,
    {
        let mut poly = MPoly::zero(field, nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent vector length");
            let key: Vec<u32> = exps
                .iter()
                .map(|&e| reduce_exponent(e, field.q()))
                .collect();
            poly.add_term(key, c);
        }
        poly
    }

    fn add_term(&mut self, key: Vec<u32>, c: usize) {
        let zero = self.field.zero();
        if c == zero {
            return;
        }
        let entry = self.terms.entry(key).or_insert(zero);
        *entry = self.field.add(*entry, c);
        if *entry == zero {
            let key: Vec<u32> = self
                .terms
                .iter()
                .find(|(_, &v)| v == zero)
                .map(|(k, _)| k.clone())
                .expect("just inserted");
            self.terms.remove(&key);
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> usize {
        self.terms.get(exps).copied().unwrap_or(self.field.zero())
    }

    /// Terms in canonical order: higher total degree first, then lexicographically descending.
    pub fn terms(&self) -> Vec<(&[u32], usize)> {
        let mut out: Vec<(&[u32], usize)> =
            self.terms.iter().map(|(k, &c)| (k.as_slice(), c)).collect();
        out.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        out
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|k| k.iter().sum::<u32>())
            .max()
            .map_or(Degree::NoTerms, Degree::Finite)
    }

    /// Largest exponent of `x_i`, `None` for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|k| k[i]).max()
    }

    /// True when every term has total degree at most one.
    pub fn is_linear(&self) -> bool {
        self.total_degree().finite().unwrap_or(0) <= 1
    }

    fn check_same(&self, other: &MPoly) -> Result<()> {
        if !(Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field) {
            return Err(Error::FieldMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn eval(&self, point: &[usize]) -> Result<usize> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let f = &self.field;
        let mut acc = f.zero();
        for (exps, &c) in &self.terms {
            let mut term = c;
            for (&x, &e) in point.iter().zip(exps) {
                term = f.mul(term, f.pow(x, e as u64));
            }
            acc = f.add(acc, term);
        }
        Ok(acc)
    }

    /// Values at every point of `F_q^n`; index `sum_i a_i q^(n-1-i)`, so `x_0` is most significant.
    pub fn eval_table(&self) -> Result<Vec<usize>> {
        let q = self.field.q();
        let len = table_len(q, self.nvars)?;
        let mut data = vec![self.field.zero(); len];
        for (exps, &c) in &self.terms {
            data[dense_index(exps, q)] = c;
        }
        // Coefficient index k along an axis maps to value index a via x^k.
        let powers = power_matrix(&self.field);
        let matrix: Vec<Vec<usize>> = (0..q)
            .map(|k| (0..q).map(|a| powers[a][k]).collect())
            .collect();
        transform_axes(&self.field, &mut data, self.nvars, &matrix);
        Ok(data)
    }

    /// Unique reduced polynomial with the given value table (layout as in [`MPoly::eval_table`]).
    pub fn interpolate(field: &Field, nvars: usize, table: &[usize]) -> Result<MPoly> {
        let q = field.q();
        let len = table_len(q, nvars)?;
        if table.len() != len {
            return Err(Error::IncompleteTable {
                expected: len,
                got: table.len(),
            });
        }
        if table.iter().any(|&v| v >= q) {
            return Err(Error::FieldMismatch);
        }
        let mut data = table.to_vec();
        transform_axes(field, &mut data, nvars, &lagrange_matrix(field));
        let mut poly = MPoly::zero(field, nvars);
        for (idx, &c) in data.iter().enumerate() {
            if c != field.zero() {
                poly.terms.insert(dense_exps(idx, q, nvars), c);
            }
        }
        Ok(poly)
    }

    /// Interpolates from a partial map; every point must be present.
    pub fn interpolate_points<I>(field: &Field, nvars: usize, points: I) -> Result<MPoly>
    where
        I: IntoIterator<Item = (Vec<usize>, usize)>,
    {
        let q = field.q();
        let len = table_len(q, nvars)?;
        let mut table = vec![usize::MAX; len];
        let mut filled = 0usize;
        for (pt, v) in points {
            if pt.len() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    got: pt.len(),
                });
            }
            let idx = pt.iter().fold(0usize, |acc, &a| acc * q + a);
            if table[idx] == usize::MAX {
                filled += 1;
            }
            table[idx] = v;
        }
        if filled != len {
            return Err(Error::IncompleteTable {
                expected: len,
                got: filled,
            });
        }
        Self::interpolate(field, nvars, &table)
    }

    pub fn add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (k, &c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> MPoly {
        self.scale(self.field.neg(self.field.one()))
    }

    pub fn sub(&self, other: &MPoly) -> Result<MPoly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: usize) -> MPoly {
        let f = &self.field;
        let mut out = MPoly::zero(f, self.nvars);
        if c == f.zero() {
            return out;
        }
        for (k, &v) in &self.terms {
            out.terms.insert(k.clone(), f.mul(v, c));
        }
        out
    }

    pub fn add_constant(&self, c: usize) -> MPoly {
        let mut out = self.clone();
        out.add_term(vec![0; self.nvars], c);
        out
    }

    pub fn multiply(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same(other)?;
        let f = &self.field;
        let q = f.q();
        let mut out = MPoly::zero(f, self.nvars);
        for (ka, &ca) in &self.terms {
            for (kb, &cb) in &other.terms {
                let key: Vec<u32> = ka
                    .iter()
                    .zip(kb)
                    .map(|(&a, &b)| reduce_exponent(a as u64 + b as u64, q))
                    .collect();
                out.add_term(key, f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u64) -> MPoly {
        let mut acc = MPoly::constant(&self.field, self.nvars, self.field.one());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.multiply(&base).expect("same ring");
            }
            base = base.multiply(&base).expect("same ring");
            k >>= 1;
        }
        acc
    }

    /// `g(f)` for a univariate `g`.
    pub fn compose_univariate(g: &MPoly, f: &MPoly) -> Result<MPoly> {
        if g.nvars != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                got: g.nvars,
            });
        }
        if !(Arc::ptr_eq(&g.field, &f.field) || *g.field == *f.field) {
            return Err(Error::FieldMismatch);
        }
        let q = f.field.q();
        let mut acc = MPoly::zero(&f.field, f.nvars);
        for k in (0..q as u32).rev() {
            acc = acc.multiply(f)?;
            let c = g.coeff(&[k]);
            acc = acc.add_constant(c);
        }
        Ok(acc)
    }

    /// `self(subs[0], ..., subs[n-1])`; all substitutes share one arity.
    pub fn substitute(&self, subs: &[MPoly]) -> Result<MPoly> {
        if subs.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: subs.len(),
            });
        }
        let f = &self.field;
        let target = subs.first().map_or(0, |s| s.nvars);
        for s in subs {
            if !(Arc::ptr_eq(&s.field, f) || *s.field == **f) {
                return Err(Error::FieldMismatch);
            }
            if s.nvars != target {
                return Err(Error::ArityMismatch {
                    expected: target,
                    got: s.nvars,
                });
            }
        }
        let one = MPoly::constant(f, target, f.one());
        let mut powers: Vec<Vec<MPoly>> = subs.iter().map(|_| vec![one.clone()]).collect();
        let mut acc = MPoly::zero(f, target);
        for (exps, &c) in &self.terms {
            let mut term = MPoly::constant(f, target, c);
            for (i, &e) in exps.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().expect("nonempty").multiply(&subs[i])?;
                    powers[i].push(next);
                }
                term = term.multiply(&powers[i][e as usize])?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Re-homes the variables into a ring of `nvars` variables starting at `offset`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Result<MPoly> {
        if offset + self.nvars > nvars {
            return Err(Error::ArityMismatch {
                expected: nvars,
                got: offset + self.nvars,
            });
        }
        let mut out = MPoly::zero(&self.field, nvars);
        for (k, &c) in &self.terms {
            let mut key = vec![0u32; nvars];
            key[offset..offset + self.nvars].copy_from_slice(k);
            out.terms.insert(key, c);
        }
        Ok(out)
    }

    /// Permutation of `F_q` induced by a univariate polynomial, if it is one.
    pub fn induced_permutation(&self) -> Option<Vec<usize>> {
        if self.nvars != 1 {
            return None;
        }
        let table = self.eval_table().ok()?;
        let mut seen = vec![false; self.field.q()];
        for &v in &table {
            if std::mem::replace(&mut seen[v], true) {
                return None;
            }
        }
        Some(table)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            nvars: self.nvars,
            terms: self
                .terms()
                .into_iter()
                .map(|(exps, c)| TermJson {
                    exps: exps.to_vec(),
                    coeff: self.field.element(c).coeffs().to_vec(),
                })
                .collect(),
        }
    }

    pub fn from_json(field: &Field, json: &PolyJson) -> Result<MPoly> {
        let mut terms = Vec::with_capacity(json.terms.len());
        for t in &json.terms {
            if t.exps.len() != json.nvars {
                return Err(Error::ArityMismatch {
                    expected: json.nvars,
                    got: t.exps.len(),
                });
            }
            let c = field
                .index_of(&crate::gf::FieldElement::new(t.coeff.clone()))
                .ok_or(Error::FieldMismatch)?;
            terms.push((t.exps.iter().map(|&e| e as u64).collect(), c));
        }
        Ok(MPoly::from_terms(field, json.nvars, terms))
    }

    /// Parses strings such as `2x^3y^3 + (u+1)xy + 1`.
    pub fn parse(field: &Field, nvars: usize, input: &str) -> Result<MPoly> {
        parse::parse_poly(field, nvars, input)
    }

    pub fn var_name(nvars: usize, i: usize) -> String {
        if nvars <= 3 {
            ["x", "y", "z"][i].to_string()
        } else {
            format!("x{}", i + 1)
        }
    }
}

fn dense_index(exps: &[u32], q: usize) -> usize {
    exps.iter().fold(0usize, |acc, &e| acc * q + e as usize)
}

fn dense_exps(mut idx: usize, q: usize, nvars: usize) -> Vec<u32> {
    let mut exps = vec![0u32; nvars];
    for slot in exps.iter_mut().rev() {
        *slot = (idx % q) as u32;
        idx /= q;
    }
    exps
}

impl fmt::Display for MPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let sep = if self.nvars <= 3 { "" } else { "*" };
        let mut first = true;
        for (exps, c) in self.terms() {
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            let label = self.field.label(c);
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = MPoly::var_name(self.nvars, i);
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(out, "{label}")?;
            } else {
                if c != self.field.one() {
                    if label.contains('+') {
                        write!(out, "({label}){sep}")?;
                    } else {
                        write!(out, "{label}{sep}")?;
                    }
                }
                write!(out, "{}", mono.join(sep))?;
            }
        }
        Ok(())
    }
}
