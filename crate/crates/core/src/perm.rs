//! Permutations of element indices and permutation-polynomial tuples.
//!
//! `compose(a, b)` is `a ∘ b`: `b` acts first.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::FieldSpec;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(image: Vec<usize>) -> Result<Self> {
        Permutation::from_images(image)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl Permutation {
    pub fn identity(q: usize) -> Self {
        Permutation {
            image: (0..q).collect(),
        }
    }

    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let q = image.len();
        let mut seen = vec![false; q];
        for &v in &image {
            if v >= q || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(q));
            }
        }
        Ok(Permutation { image })
    }

    /// Builds from disjoint cycles; unlisted points are fixed.
    pub fn from_cycles(q: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut image: Vec<usize> = (0..q).collect();
        let mut used = vec![false; q];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= q || std::mem::replace(&mut used[a], true) {
                    return Err(Error::InvalidPermutation(q));
                }
                image[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { image })
    }

    /// Parses cycle notation over field labels, e.g. `(0,u)(u^2,u^3)`; `()` or `id` is the identity.
    pub fn parse_cycles(field: &FieldSpec, input: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "cycle notation",
            input: input.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "id" || s.is_empty() {
            return Ok(Permutation::identity(field.q()));
        }
        let mut cycles = Vec::new();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(err)?;
            // Element labels may contain parentheses only as whole wrapped elements; cycles are flat.
            let mut depth = 0i32;
            let mut end = None;
            for (i, c) in body.char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' if depth == 0 => {
                        end = Some(i);
                        break;
                    }
                    ')' => depth -= 1,
                    _ => {}
                }
            }
            let end = end.ok_or_else(err)?;
            let inner = &body[..end];
            if !inner.is_empty() {
                cycles.push(field.parse_element_list(inner).map_err(|_| err())?);
            }
            rest = &body[end + 1..];
        }
        Permutation::from_cycles(field.q(), &cycles)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { image: inv }
    }

    /// `self ∘ other`, panicking on size mismatch; see [`compose`] for the checked form.
    pub fn then_after(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "permutation sizes differ");
        Permutation {
            image: other.image.iter().map(|&v| self.image[v]).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Permutation {
        let mut acc = Permutation::identity(self.len());
        for _ in 0..k {
            acc = self.then_after(&acc);
        }
        acc
    }

    pub fn has_fixed_point(&self) -> bool {
        self.image.iter().enumerate().any(|(i, &v)| i == v)
    }

    /// Disjoint cycles, each starting at its smallest point, including fixed points.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let q = self.len();
        let mut seen = vec![false; q];
        let mut out = Vec::new();
        for start in 0..q {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in descending order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> usize {
        self.cycle_type()
            .into_iter()
            .fold(1, |acc, len| acc / gcd(acc, len) * len)
    }

    /// Cycle notation over indices, omitting fixed points.
    pub fn cycle_string(&self) -> String {
        self.render_cycles(|i| i.to_string())
    }

    /// Cycle notation over field labels, omitting fixed points.
    pub fn label_cycles(&self, field: &FieldSpec) -> String {
        self.render_cycles(|i| field.label(i))
    }

    fn render_cycles(&self, label: impl Fn(usize) -> String) -> String {
        let parts: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| format!("({})", c.into_iter().map(&label).join(",")))
            .collect();
        if parts.is_empty() {
            "id".to_string()
        } else {
            parts.concat()
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `a ∘ b` (apply `b`, then `a`).
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    Ok(a.then_after(b))
}

pub fn inverse(a: &Permutation) -> Permutation {
    a.inverse()
}

/// Every permutation of `0..q`, in lexicographic order.
pub fn all_permutations(q: usize) -> Vec<Permutation> {
    (0..q)
        .permutations(q)
        .map(|image| Permutation { image })
        .collect()
}

/// An ordered `q`-tuple `(β_0, …, β_{q-1})` with every `β_i⁻¹ β_j` fixed-point-free.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Permutation>", into = "Vec<Permutation>")]
pub struct PermTuple {
    perms: Vec<Permutation>,
}

impl TryFrom<Vec<Permutation>> for PermTuple {
    type Error = Error;
    fn try_from(perms: Vec<Permutation>) -> Result<Self> {
        PermTuple::new(perms)
    }
}

impl From<PermTuple> for Vec<Permutation> {
    fn from(t: PermTuple) -> Self {
        t.perms
    }
}

impl fmt::Debug for PermTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.perms).finish()
    }
}

impl PermTuple {
    pub fn new(perms: Vec<Permutation>) -> Result<Self> {
        if tuple_valid(&perms)? {
            Ok(PermTuple { perms })
        } else {
            Err(Error::InvalidTuple)
        }
    }

    /// Rows of a Latin square: `rows[i][x] = β_i(x)`.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let perms = rows
            .iter()
            .map(|r| Permutation::from_images(r.clone()))
            .collect::<Result<Vec<_>>>()?;
        PermTuple::new(perms)
    }

    pub(crate) fn new_unchecked(perms: Vec<Permutation>) -> Self {
        PermTuple { perms }
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn q(&self) -> usize {
        self.perms.len()
    }

    pub fn get(&self, i: usize) -> &Permutation {
        &self.perms[i]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.perms.iter().map(|p| p.images().to_vec()).collect()
    }

    pub fn as_set(&self) -> HashSet<&Permutation> {
        self.perms.iter().collect()
    }
}

/// True iff `perms` has length `q` and all pairwise quotients are fixed-point-free.
pub fn tuple_valid(perms: &[Permutation]) -> Result<bool> {
    let q = perms.first().map_or(0, Permutation::len);
    if perms.len() != q {
        return Err(Error::WrongLength {
            expected: q,
            got: perms.len(),
        });
    }
    if perms.iter().any(|p| p.len() != q) {
        return Err(Error::SizeMismatch(
            q,
            perms
                .iter()
                .map(Permutation::len)
                .find(|&l| l != q)
                .unwrap_or(q),
        ));
    }
    // β_i⁻¹β_j has a fixed point z iff β_i(z) = β_j(z): columns must be injective.
    for x in 0..q {
        let mut seen = vec![false; q];
        for p in perms {
            if std::mem::replace(&mut seen[p.apply(x)], true) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `(σ β_0 δ, …, σ β_{q-1} δ)`.
pub fn tuple_transform(sigma: &Permutation, omega: &PermTuple, delta: &Permutation) -> PermTuple {
    PermTuple {
        perms: omega
            .perms
            .iter()
            .map(|b| sigma.then_after(&b.then_after(delta)))
            .collect(),
    }
}

/// Finds `(σ, δ)` with `σ β_i δ = γ_i` for every `i`.
pub fn tuples_equivalent(
    omega: &PermTuple,
    gamma: &PermTuple,
) -> Option<(Permutation, Permutation)> {
    let q = omega.q();
    if gamma.q() != q {
        return None;
    }
    let beta0_inv = omega.perms[0].inverse();
    all_permutations(q).into_par_iter().find_map_first(|delta| {
        let sigma = gamma.perms[0]
            .then_after(&delta.inverse())
            .then_after(&beta0_inv);
        omega
            .perms
            .iter()
            .zip(&gamma.perms)
            .all(|(b, g)| sigma.then_after(&b.then_after(&delta)) == *g)
            .then_some((sigma, delta))
    })
}

/// Like [`tuples_equivalent`] but the levels may be reordered: `{σ β_i δ} = {γ_i}` as sets.
pub fn tuples_isotopic(omega: &PermTuple, gamma: &PermTuple) -> Option<(Permutation, Permutation)> {
    let q = omega.q();
    if gamma.q() != q {
        return None;
    }
    let target: HashSet<&Permutation> = gamma.as_set();
    let beta0_inv = omega.perms[0].inverse();
    all_permutations(q).into_par_iter().find_map_first(|delta| {
        let delta_inv = delta.inverse();
        gamma.perms.iter().find_map(|gk| {
            let sigma = gk.then_after(&delta_inv).then_after(&beta0_inv);
            omega
                .perms
                .iter()
                .all(|b| target.contains(&sigma.then_after(&b.then_after(&delta))))
                .then(|| (sigma, delta.clone()))
        })
    })
}

/// Number of pairs `(σ, δ)` with `{σ β_i δ} = {β_i}`.
pub fn autotopism_count(omega: &PermTuple) -> usize {
    let q = omega.q();
    let set = omega.as_set();
    let beta0_inv = omega.perms[0].inverse();
    all_permutations(q)
        .into_par_iter()
        .map(|delta| {
            let delta_inv = delta.inverse();
            omega
                .perms
                .iter()
                .filter(|gk| {
                    let sigma = gk.then_after(&delta_inv).then_after(&beta0_inv);
                    omega
                        .perms
                        .iter()
                        .all(|b| set.contains(&sigma.then_after(&b.then_after(&delta))))
                })
                .count()
        })
        .sum()
}
