//! e-Klenian groups `⟨α, β⟩` over a block layout of the field, and their polynomials.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::lpp::{lpp_to_tuple, tuple_to_lpp};
use crate::mpoly::MPoly;
use crate::perm::{PermTuple, Permutation};

/// How levels `c_v` of a group polynomial are matched to group elements.
///
/// `ZeroBased` pairs level `c_v` with element `v`; `OneBased` pairs it with element
/// `(v + 1) mod q`, so `c_{q-1}` carries the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Indexing {
    #[default]
    ZeroBased,
    OneBased,
}

impl Indexing {
    pub fn shift(self) -> usize {
        match self {
            Indexing::ZeroBased => 0,
            Indexing::OneBased => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EKlenianGroup {
    field: Field,
    e: u32,
    l: usize,
    t: usize,
    layout: Vec<usize>,
    position: Vec<usize>,
    alpha: Permutation,
    beta: Permutation,
    elements: Vec<Permutation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub e: u32,
    pub alpha: String,
    pub beta: String,
    pub elements: Vec<String>,
}

impl EKlenianGroup {
    /// Group over the field's own element order.
    pub fn new(field: &Field, e: u32) -> Result<Self> {
        Self::with_layout(field, e, (0..field.q()).collect())
    }

    /// `layout[a + b·l]` is the element sent to by `α^a β^b` from `layout[0]`.
    pub fn with_layout(field: &Field, e: u32, layout: Vec<usize>) -> Result<Self> {
        let r = field.r();
        if e > r {
            return Err(Error::BadExponent { e, r });
        }
        let q = field.q();
        let layout_perm = Permutation::from_images(layout.clone()).map_err(|_| {
            Error::InvalidGenerators("layout is not an ordering of the field".into())
        })?;
        if layout.len() != q {
            return Err(Error::InvalidGenerators(
                "layout length differs from q".into(),
            ));
        }
        let position = layout_perm.inverse().images().to_vec();
        let l = (field.p() as usize).pow(e);
        let t = q / l;
        let mut alpha = vec![0usize; q];
        let mut beta = vec![0usize; q];
        for k in 0..q {
            let (a, b) = (k % l, k / l);
            alpha[layout[k]] = layout[(a + 1) % l + b * l];
            beta[layout[k]] = layout[a + ((b + 1) % t) * l];
        }
        let alpha = Permutation::from_images(alpha)?;
        let beta = Permutation::from_images(beta)?;
        let mut elements = Vec::with_capacity(q);
        for b in 0..t {
            for a in 0..l {
                elements.push(alpha.pow(a).then_after(&beta.pow(b)));
            }
        }
        Ok(EKlenianGroup {
            field: field.clone(),
            e,
            l,
            t,
            layout,
            position,
            alpha,
            beta,
            elements,
        })
    }

    /// The 0-Klenian group of a full cycle listed as `(x_0, x_1, …)`.
    pub fn from_cycle(field: &Field, cycle: &[usize]) -> Result<Self> {
        if cycle.len() != field.q() {
            return Err(Error::InvalidGenerators(format!(
                "cycle has length {}, expected {}",
                cycle.len(),
                field.q()
            )));
        }
        Self::with_layout(field, 0, cycle.to_vec())
    }

    /// Validates generators of e-Klenian shape and recovers the layout from `c_0`.
    pub fn from_generators(field: &Field, alpha: &Permutation, beta: &Permutation) -> Result<Self> {
        let q = field.q();
        let bad = |m: &str| Error::InvalidGenerators(m.to_string());
        if alpha.len() != q || beta.len() != q {
            return Err(bad("generator size differs from q"));
        }
        let l = alpha.order();
        let t = beta.order();
        if l * t != q {
            return Err(bad("generator orders do not multiply to q"));
        }
        let e = (0..=field.r())
            .find(|&e| (field.p() as usize).pow(e) == l)
            .ok_or_else(|| bad("order of alpha is not a power of p"))?;
        if alpha.cycle_type().iter().any(|&c| c != l) || beta.cycle_type().iter().any(|&c| c != t) {
            return Err(bad(
                "generators are not products of equal-length disjoint cycles",
            ));
        }
        if alpha.then_after(beta) != beta.then_after(alpha) {
            return Err(bad("generators do not commute"));
        }
        let mut layout = vec![usize::MAX; q];
        let mut seen = vec![false; q];
        for b in 0..t {
            for a in 0..l {
                let x = alpha.pow(a).then_after(&beta.pow(b)).apply(0);
                if std::mem::replace(&mut seen[x], true) {
                    return Err(bad("generated group has fixed points"));
                }
                layout[a + b * l] = x;
            }
        }
        let group = Self::with_layout(field, e, layout)?;
        debug_assert!(group.alpha == *alpha && group.beta == *beta);
        Ok(group)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn alpha(&self) -> &Permutation {
        &self.alpha
    }

    pub fn beta(&self) -> &Permutation {
        &self.beta
    }

    /// `elements()[i + j·l] = α^i β^j`.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn layout(&self) -> &[usize] {
        &self.layout
    }

    /// Index `k` with `layout()[k] = x`.
    pub fn position(&self, x: usize) -> usize {
        self.position[x]
    }

    /// Index of the product of elements `n` and `m`.
    pub fn index_add(&self, n: usize, m: usize) -> usize {
        let a = (n % self.l + m % self.l) % self.l;
        let b = (n / self.l + m / self.l) % self.t;
        a + b * self.l
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            e: self.e,
            alpha: self.alpha.label_cycles(&self.field),
            beta: self.beta.label_cycles(&self.field),
            elements: self
                .elements
                .iter()
                .map(|g| g.label_cycles(&self.field))
                .collect(),
        }
    }
}

/// `(α, β)` of the e-Klenian group over the field's element order.
pub fn eklenian_generators(field: &Field, e: u32) -> Result<(Permutation, Permutation)> {
    let g = EKlenianGroup::new(field, e)?;
    Ok((g.alpha, g.beta))
}

pub fn eklenian_group(field: &Field, e: u32) -> Result<EKlenianGroup> {
    EKlenianGroup::new(field, e)
}

/// Level tuple `β_v = μ_0 ∘ α^i β^j` with `i + j·l = v + shift (mod q)`.
pub fn eklenian_tuple(
    group: &EKlenianGroup,
    base: Option<&Permutation>,
    indexing: Indexing,
) -> Result<PermTuple> {
    let q = group.field.q();
    let id = Permutation::identity(q);
    let mu0 = base.unwrap_or(&id);
    if mu0.len() != q {
        return Err(Error::SizeMismatch(q, mu0.len()));
    }
    let s = indexing.shift();
    let perms = (0..q)
        .map(|v| mu0.then_after(&group.elements[(v + s) % q]))
        .collect();
    PermTuple::new(perms)
}

pub fn eklenian_poly(
    group: &EKlenianGroup,
    base: Option<&Permutation>,
    indexing: Indexing,
) -> Result<MPoly> {
    tuple_to_lpp(&group.field, &eklenian_tuple(group, base, indexing)?)
}

/// Polynomial whose level `c_v` is the graph of `elements[v]`.
pub fn group_poly(field: &Field, elements: &[Permutation]) -> Result<MPoly> {
    tuple_to_lpp(field, &PermTuple::new(elements.to_vec())?)
}

/// Closure of the generators under composition.
pub fn generated_group(gens: &[Permutation]) -> Vec<Permutation> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let id = Permutation::identity(first.len());
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = s.then_after(&g);
            if seen.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    let mut out: Vec<Permutation> = seen.into_iter().collect();
    out.sort();
    out
}

/// Closed under composition, contains the identity, and every other element moves every point.
pub fn is_fpf_subgroup(perms: &[Permutation]) -> bool {
    let Some(first) = perms.first() else {
        return false;
    };
    let q = first.len();
    if perms.iter().any(|p| p.len() != q) {
        return false;
    }
    let set: HashSet<&Permutation> = perms.iter().collect();
    if !set.contains(&Permutation::identity(q)) {
        return false;
    }
    if set.iter().any(|p| !p.is_identity() && p.has_fixed_point()) {
        return false;
    }
    set.iter()
        .all(|a| set.iter().all(|b| set.contains(&a.then_after(b))))
}

pub fn is_abelian(perms: &[Permutation]) -> bool {
    perms.iter().enumerate().all(|(i, a)| {
        perms[i + 1..]
            .iter()
            .all(|b| a.then_after(b) == b.then_after(a))
    })
}

/// Recovers an e-Klenian group whose element set is exactly `set`.
pub fn eklenian_structure(field: &Field, set: &[Permutation], e: u32) -> Option<EKlenianGroup> {
    let q = field.q();
    if e > field.r() || set.len() != q || !is_fpf_subgroup(set) || !is_abelian(set) {
        return None;
    }
    if set.iter().collect::<HashSet<_>>().len() != q {
        return None;
    }
    let l = (field.p() as usize).pow(e);
    let t = q / l;
    let orders: Vec<usize> = set.iter().map(Permutation::order).collect();
    for (ia, alpha) in set.iter().enumerate() {
        if orders[ia] != l {
            continue;
        }
        let cyclic: HashSet<Permutation> = (0..l).map(|k| alpha.pow(k)).collect();
        for (ib, beta) in set.iter().enumerate() {
            if orders[ib] != t {
                continue;
            }
            if (1..t).any(|k| cyclic.contains(&beta.pow(k))) {
                continue;
            }
            if let Ok(g) = EKlenianGroup::from_generators(field, alpha, beta) {
                return Some(g);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KlenianWitness {
    pub group: EKlenianGroup,
    /// `μ_0`: every level permutation is `μ_0 ∘ g` for a group element `g`.
    pub base: Permutation,
}

/// Checks whether `{β_0⁻¹ β_i}` is an e-Klenian group.
pub fn tuple_klenian_witness(
    field: &Field,
    tuple: &PermTuple,
    e: u32,
) -> Result<Option<KlenianWitness>> {
    if e > field.r() {
        return Err(Error::BadExponent { e, r: field.r() });
    }
    let mu0 = tuple.get(0).clone();
    let inv = mu0.inverse();
    let quotients: Vec<Permutation> = tuple.perms().iter().map(|b| inv.then_after(b)).collect();
    Ok(eklenian_structure(field, &quotients, e).map(|group| KlenianWitness { group, base: mu0 }))
}

/// True when the tuple's permutations are themselves the elements of an e-Klenian group.
pub fn is_eklenian_tuple(field: &Field, tuple: &PermTuple, e: u32) -> bool {
    eklenian_structure(field, tuple.perms(), e).is_some()
}

/// Decides equivalence to an e-Klenian polynomial, returning the group and `μ_0`.
pub fn is_equivalent_to_eklenian(f: &MPoly, e: u32) -> Result<Option<KlenianWitness>> {
    let tuple = lpp_to_tuple(f)?;
    tuple_klenian_witness(f.field(), &tuple, e)
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

pub fn euler_phi(mut n: usize) -> usize {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// `(q-1)!/φ(q)`: cyclic regular subgroups of `Σ_q`.
pub fn count_0klenian_groups(q: usize) -> BigUint {
    factorial(q.saturating_sub(1)) / BigUint::from(euler_phi(q).max(1))
}

/// `q!(q-1)!/φ(q)`.
pub fn count_0klenian_polys(q: usize) -> BigUint {
    factorial(q) * count_0klenian_groups(q)
}

/// `(q-1)!·N`.
pub fn count_equivalent_to_eklenian(q: usize, n: &BigUint) -> BigUint {
    factorial(q.saturating_sub(1)) * n
}
