//! Finite fields GF(p^r) with an explicit element enumeration.
//!
//! Every element is stored as a coefficient vector in the power basis of a
//! root `u` of the modulus. Downstream code never touches those vectors: it
//! refers to elements by their position in the field's `order`
//! (`c_0, ..., c_{q-1}`), and all arithmetic on positions goes through
//! precomputed tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order; tables are `q * q`.
pub const MAX_FIELD_ORDER: usize = 256;

/// Shared handle to a field. Polynomials, groups and squares all hold one.
pub type Field = Arc<FieldSpec>;

/// A field element as coordinates over F_p, lowest power of `u` first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn new(coeffs: Vec<u32>) -> Self {
        FieldElement { coeffs }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Base-p integer encoding, `sum coeffs[i] * p^i`.
    pub fn code(&self, p: u32) -> usize {
        self.coeffs
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * p as usize + c as usize)
    }

    fn from_code(code: usize, p: u32, r: u32) -> Self {
        let mut coeffs = Vec::with_capacity(r as usize);
        let mut rest = code;
        for _ in 0..r {
            coeffs.push((rest % p as usize) as u32);
            rest /= p as usize;
        }
        FieldElement { coeffs }
    }
}

/// JSON field descriptor: modulus low-to-high degree, order as coefficient vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub r: u32,
    pub modulus: Vec<u32>,
    pub order: Vec<Vec<u32>>,
}

/// GF(p^r) together with the enumeration `c_0..c_{q-1}` of its elements.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    r: u32,
    q: usize,
    modulus: Vec<u32>,
    order: Vec<FieldElement>,
    code_to_index: Vec<usize>,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    inv: Vec<Option<usize>>,
    zero: usize,
    one: usize,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.r == other.r
            && self.modulus == other.modulus
            && self.order == other.order
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {}", self.p, self.r, self.modulus_string())
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Polynomials over F_p as coefficient vectors, lowest degree first.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut rem = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while rem.len() > dm {
        let shift = rem.len() - 1 - dm;
        let factor = rem[rem.len() - 1] * lead_inv % p;
        for (i, &c) in m.iter().enumerate() {
            let sub = factor * c % p;
            rem[shift + i] = (rem[shift + i] + p - sub) % p;
        }
        rem = trim(rem);
    }
    rem
}

fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = base as u64 % p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Trial division by every monic polynomial of degree `1..=r/2`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let r = modulus.len() - 1;
    for d in 1..=r / 2 {
        let count = (p as usize).pow(d as u32);
        for code in 0..count {
            let mut divisor = FieldElement::from_code(code, p, d as u32).coeffs;
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Monic irreducible of degree `r` with the smallest base-p code of its lower coefficients.
pub fn smallest_irreducible(p: u32, r: u32) -> Vec<u32> {
    let count = (p as usize).pow(r);
    for code in 0..count {
        let mut m = FieldElement::from_code(code, p, r).coeffs;
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// Builds GF(p^r). Without a modulus the smallest monic irreducible is used;
    /// without an order elements are listed by base-p code (0, 1, ..., p-1, u, u+1, ...).
    pub fn new(
        p: u32,
        r: u32,
        modulus: Option<Vec<u32>>,
        order: Option<Vec<FieldElement>>,
    ) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u64).checked_pow(r).unwrap_or(u64::MAX);
        if q > MAX_FIELD_ORDER as u64 {
            return Err(Error::FieldTooLarge { p, r });
        }
        let q = q as usize;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != r as usize + 1 || m[r as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus { expected: r });
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus);
                }
                m
            }
            None => smallest_irreducible(p, r),
        };
        let order = match order {
            Some(o) => o,
            None => (0..q).map(|c| FieldElement::from_code(c, p, r)).collect(),
        };
        if order.len() != q {
            return Err(Error::InvalidOrder);
        }
        let mut code_to_index = vec![usize::MAX; q];
        for (i, e) in order.iter().enumerate() {
            if e.coeffs.len() != r as usize || e.coeffs.iter().any(|&c| c >= p) {
                return Err(Error::InvalidOrder);
            }
            let code = e.code(p);
            if code_to_index[code] != usize::MAX {
                return Err(Error::InvalidOrder);
            }
            code_to_index[code] = i;
        }

        let mut spec = FieldSpec {
            p,
            r,
            q,
            modulus,
            order,
            code_to_index,
            add: vec![0; q * q],
            mul: vec![0; q * q],
            neg: vec![0; q],
            inv: vec![None; q],
            zero: 0,
            one: 0,
        };
        spec.zero = spec.code_to_index[0];
        spec.one = spec.code_to_index[1];
        for a in 0..q {
            let ea = spec.order[a].clone();
            spec.neg[a] = spec.index_of_raw(&spec.raw_neg(&ea));
            for b in 0..q {
                let eb = &spec.order[b];
                spec.add[a * q + b] = spec.index_of_raw(&spec.raw_add(&ea, eb));
                spec.mul[a * q + b] = spec.index_of_raw(&spec.raw_mul(&ea, eb));
            }
        }
        for a in 0..q {
            spec.inv[a] = (0..q).find(|&b| spec.mul[a * q + b] == spec.one);
        }
        Ok(Arc::new(spec))
    }

    /// The prime field F_p with elements in natural order.
    pub fn prime(p: u32) -> Result<Field> {
        Self::new(p, 1, None, None)
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field> {
        let order = d.order.iter().cloned().map(FieldElement::new).collect();
        Self::new(d.p, d.r, Some(d.modulus.clone()), Some(order))
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            r: self.r,
            modulus: self.modulus.clone(),
            order: self.order.iter().map(|e| e.coeffs.clone()).collect(),
        }
    }

    /// Same field, elements re-listed. `order` holds labels such as `"2u+1"`.
    pub fn with_order_labels(&self, labels: &[&str]) -> Result<Field> {
        let order = labels
            .iter()
            .map(|s| self.parse_element(s).map(|i| self.order[i].clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.p, self.r, Some(self.modulus.clone()), Some(order))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> &[FieldElement] {
        &self.order
    }

    pub fn element(&self, i: usize) -> &FieldElement {
        &self.order[i]
    }

    pub fn index_of(&self, e: &FieldElement) -> Option<usize> {
        if !self.contains(e) {
            return None;
        }
        Some(self.code_to_index[e.code(self.p)])
    }

    fn contains(&self, e: &FieldElement) -> bool {
        e.coeffs.len() == self.r as usize && e.coeffs.iter().all(|&c| c < self.p)
    }

    fn index_of_raw(&self, e: &FieldElement) -> usize {
        self.code_to_index[e.code(self.p)]
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b])
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn inv(&self, a: usize) -> Result<usize> {
        self.inv[a].ok_or(Error::DivisionByZero)
    }

    pub fn div(&self, a: usize, b: usize) -> Result<usize> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: usize, mut k: u64) -> usize {
        let mut acc = self.one;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, k: i64) -> usize {
        let v = k.rem_euclid(self.p as i64) as usize;
        self.code_to_index[v]
    }

    /// Index of `u`, the root of the modulus (for r = 1 this is the integer `-m_0`).
    pub fn generator_u(&self) -> usize {
        if self.r == 1 {
            return self.from_int(-(self.modulus[0] as i64));
        }
        self.code_to_index[self.p as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: usize) -> Result<usize> {
        if a == self.zero {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        Ok((1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .find(|&d| self.pow(a, d as u64) == self.one)
            .expect("a^(q-1) = 1"))
    }

    /// First generator of F_q^* in the field's element order.
    pub fn primitive_element(&self) -> usize {
        (0..self.q)
            .filter(|&a| a != self.zero)
            .find(|&a| self.multiplicative_order(a) == Ok(self.q - 1))
            .expect("F_q^* is cyclic")
    }

    // Coefficient-vector arithmetic. The tables are built from these and they
    // double as the reference path for `fe_*`.

    fn raw_add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement::new(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        )
    }

    fn raw_neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement::new(a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    fn raw_mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let r = self.r as usize;
        let mut prod = vec![0u32; 2 * r - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let mut rem = poly_rem(&prod, &self.modulus, self.p);
        rem.resize(r, 0);
        FieldElement::new(rem)
    }

    fn check(&self, e: &FieldElement) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn fe_add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.raw_add(a, b))
    }

    pub fn fe_neg(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        Ok(self.raw_neg(a))
    }

    pub fn fe_mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.raw_mul(a, b))
    }

    pub fn fe_pow(&self, a: &FieldElement, mut k: u64) -> Result<FieldElement> {
        self.check(a)?;
        let mut acc = FieldElement::from_code(1, self.p, self.r);
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.raw_mul(&acc, &base);
            }
            base = self.raw_mul(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// a^(q-2), which is the inverse for a != 0.
    pub fn fe_inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.coeffs.iter().all(|&c| c == 0) {
            return Err(Error::DivisionByZero);
        }
        self.fe_pow(a, self.q as u64 - 2)
    }

    /// Human-readable label, e.g. `2u^2+u+1`; plain integers for prime fields.
    pub fn label(&self, i: usize) -> String {
        let coeffs = &self.order[i].coeffs;
        let mut parts = Vec::new();
        for (d, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let part = match (d, c) {
                (0, _) => c.to_string(),
                (1, 1) => "u".to_string(),
                (1, _) => format!("{c}u"),
                (_, 1) => format!("u^{d}"),
                _ => format!("{c}u^{d}"),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    pub fn modulus_string(&self) -> String {
        let mut parts = Vec::new();
        for (d, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match d {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{d}"),
            };
            parts.push(match (c, d) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        parts.join("+")
    }

    /// Parses labels like `2u+1`, `u^2 + 1`, `2*u`, `-1`, `(u+2)`.
    pub fn parse_element(&self, input: &str) -> Result<usize> {
        let err = || Error::Parse {
            what: "field element",
            input: input.to_string(),
        };
        let mut s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        while s.starts_with('(') && s.ends_with(')') && s.len() >= 2 {
            s = s[1..s.len() - 1].to_string();
        }
        if s.is_empty() {
            return Err(err());
        }
        let u = self.generator_u();
        let mut acc = self.zero;
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let negative = match rest.as_bytes()[0] {
                b'-' => {
                    rest = &rest[1..];
                    true
                }
                b'+' => {
                    rest = &rest[1..];
                    false
                }
                _ => false,
            };
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = &rest[..end];
            rest = &rest[end..];
            if term.is_empty() {
                return Err(err());
            }
            let (coef_part, u_part) = match term.find('u') {
                Some(pos) => (&term[..pos], Some(&term[pos + 1..])),
                None => (term, None),
            };
            let coef_part = coef_part.trim_end_matches('*');
            let coef = if coef_part.is_empty() {
                if u_part.is_none() {
                    return Err(err());
                }
                1i64
            } else {
                coef_part.parse::<i64>().map_err(|_| err())?
            };
            let power = match u_part {
                None => 0u64,
                Some("") => 1,
                Some(exp) => exp
                    .strip_prefix('^')
                    .and_then(|e| e.parse::<u64>().ok())
                    .ok_or_else(err)?,
            };
            let mut value = self.mul(self.from_int(coef), self.pow(u, power));
            if negative {
                value = self.neg(value);
            }
            acc = self.add(acc, value);
        }
        Ok(acc)
    }

    /// Parses a comma separated element list, e.g. `0,u,u+1,1`.
    pub fn parse_element_list(&self, input: &str) -> Result<Vec<usize>> {
        input
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| self.parse_element(s))
            .collect()
    }
}
