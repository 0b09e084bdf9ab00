//! Exact arithmetic in `F_{p^k}`.
//!
//! Elements are stored as their index `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, where
//! `c_i` are the coefficients of the polynomial representative modulo the field's
//! defining polynomial. Index 0 is zero and index 1 is one, and the index order is
//! the canonical element order used by every enumeration in the crate.

mod cyclotomic;
mod poly;

pub use cyclotomic::CyclotomicInt;
pub use poly::Poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Raw field element (the canonical index).
pub type Elem = u8;

/// Largest supported field order; elements must fit an [`Elem`].
pub const MAX_ORDER: usize = 256;

struct FieldInner {
    p: u32,
    k: u32,
    q: usize,
    /// Monic defining polynomial over `F_p`, ascending coefficients, length `k + 1`.
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    /// Absolute trace to `F_p`, as an integer in `0..p`.
    trace: Vec<u32>,
}

/// A finite field `F_q`, `q = p^k`, with an explicit modulus. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `n` as `p^k` when it is a prime power.
pub fn prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

// Polynomials over F_p as ascending coefficient vectors; used only while building tables.
fn fp_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = fp_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = (1..p).find(|x| x * m[dm] % p == 1).unwrap();
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        r = fp_trim(r);
    }
    r
}

fn fp_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    // trial division by every monic polynomial of degree 1..=deg/2
    for d in 1..=deg / 2 {
        let count = (p as usize).pow(d as u32);
        for idx in 0..count {
            let mut g = vec![0u32; d + 1];
            let mut t = idx;
            for c in g.iter_mut().take(d) {
                *c = (t % p as usize) as u32;
                t /= p as usize;
            }
            g[d] = 1;
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn decode(idx: usize, p: u32, k: u32) -> Vec<u32> {
    let mut t = idx;
    (0..k)
        .map(|_| {
            let c = (t % p as usize) as u32;
            t /= p as usize;
            c
        })
        .collect()
}

fn encode(c: &[u32], p: u32) -> usize {
    c.iter().rev().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

impl Field {
    /// Builds `F_{p^k}` with the lowest monic irreducible modulus of degree `k`,
    /// ordering candidates by the index of their non-leading coefficients.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::Config("extension degree must be at least 1".into()));
        }
        let q = (p as usize)
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::Config(format!("field order {p}^{k} exceeds {MAX_ORDER}")))?;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|tail| {
                    let mut m = decode(tail, p, k);
                    m.push(1);
                    m
                })
                .find(|m| fp_irreducible(m, p))
                .ok_or_else(|| Error::Internal(format!("no irreducible of degree {k} over F_{p}")))?
        };
        Ok(Self::with_modulus(p, k, q, modulus))
    }

    /// Builds `F_q` from a prime power.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::Config(format!("{q} is not a prime power")))?;
        Self::new(p, k)
    }

    fn with_modulus(p: u32, k: u32, q: usize, modulus: Vec<u32>) -> Self {
        let elems: Vec<Vec<u32>> = (0..q).map(|i| decode(i, p, k)).collect();
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u32> = elems[a].iter().zip(&elems[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&s, p) as Elem;
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in elems[a].iter().enumerate() {
                    for (j, y) in elems[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = if k == 1 { fp_trim(prod) } else { fp_rem(&prod, &modulus, p) };
                r.resize(k as usize, 0);
                mul[a * q + b] = encode(&r, p) as Elem;
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elem)
            .collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as Elem
                }
            })
            .collect();
        let mut inner = FieldInner { p, k, q, modulus, add, mul, neg, inv, trace: Vec::new() };
        let trace = (0..q)
            .map(|a| {
                let mut acc = 0usize;
                let mut x = a;
                for _ in 0..k {
                    acc = inner.add[acc * q + x] as usize;
                    x = pow_raw(&inner, x as Elem, p as u64) as usize;
                }
                debug_assert!(acc < p as usize);
                acc as u32
            })
            .collect();
        inner.trace = trace;
        Field(Arc::new(inner))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> usize {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.0.add[a as usize * self.0.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.0.mul[a as usize * self.0.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.0.inv[a as usize])
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        pow_raw(&self.0, a, e)
    }

    /// Absolute trace `F_q -> F_p`, returned as an integer in `0..p`.
    pub fn trace(&self, a: Elem) -> u32 {
        self.0.trace[a as usize]
    }

    /// `a ↦ a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p() as u64)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p() as i64) as Elem
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q()).map(|i| i as Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.q()).map(|i| i as Elem)
    }

    /// Coefficients of the polynomial representative (length `k`).
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        decode(a as usize, self.p(), self.k())
    }

    pub fn element(&self, a: Elem) -> FieldElement<'_> {
        FieldElement { field: self, value: a }
    }

    pub fn same_as(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.p() == other.p() && self.modulus() == other.modulus())
    }

    /// The `"p^k/modulus-coeffs"` serialization, e.g. `"3^2/1,0,1"`.
    pub fn spec_string(&self) -> String {
        let coeffs: Vec<String> = self.modulus().iter().map(|c| c.to_string()).collect();
        format!("{}^{}/{}", self.p(), self.k(), coeffs.join(","))
    }

    /// Parses a [`Field::spec_string`], rejecting reducible or non-monic moduli.
    pub fn parse_spec(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("field spec {s:?}"));
        let (pk, m) = s.split_once('/').ok_or_else(bad)?;
        let (p, k) = pk.split_once('^').ok_or_else(bad)?;
        let p: u32 = p.parse().map_err(|_| bad())?;
        let k: u32 = k.parse().map_err(|_| bad())?;
        let modulus = m
            .split(',')
            .map(|c| c.parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() != k as usize + 1 || modulus[k as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(bad());
        }
        if k > 1 && !fp_irreducible(&modulus, p) {
            return Err(bad());
        }
        if k == 1 && modulus != [0, 1] {
            return Err(bad());
        }
        let q = (p as usize).checked_pow(k).filter(|&q| q <= MAX_ORDER).ok_or_else(bad)?;
        Ok(Self::with_modulus(p, k, q, modulus))
    }
}

fn pow_raw(f: &FieldInner, a: Elem, mut e: u64) -> Elem {
    let q = f.q;
    let mut base = a as usize;
    let mut acc = 1usize;
    while e > 0 {
        if e & 1 == 1 {
            acc = f.mul[acc * q + base] as usize;
        }
        base = f.mul[base * q + base] as usize;
        e >>= 1;
    }
    acc as Elem
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}({})", self.q(), self.spec_string())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for Field {}

/// An element together with its field, for operator-style arithmetic.
#[derive(Clone, Copy)]
pub struct FieldElement<'a> {
    field: &'a Field,
    value: Elem,
}

impl<'a> FieldElement<'a> {
    pub fn value(self) -> Elem {
        self.value
    }

    pub fn field(self) -> &'a Field {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Option<Self> {
        self.field.inv(self.value).map(|v| self.field.element(v))
    }

    pub fn pow(self, e: u64) -> Self {
        self.field.element(self.field.pow(self.value, e))
    }

    pub fn frobenius(self) -> Self {
        self.field.element(self.field.frobenius(self.value))
    }

    pub fn coeffs(self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field.same_as(other.field)
    }
}

impl Eq for FieldElement<'_> {}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl<'a> Add for FieldElement<'a> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.field.element(self.field.add(self.value, rhs.value))
    }
}

impl<'a> Sub for FieldElement<'a> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.field.element(self.field.sub(self.value, rhs.value))
    }
}

impl<'a> Mul for FieldElement<'a> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.field.element(self.field.mul(self.value, rhs.value))
    }
}

impl<'a> Neg for FieldElement<'a> {
    type Output = Self;
    fn neg(self) -> Self {
        self.field.element(self.field.neg(self.value))
    }
}

/// Additive character `x ↦ ζ_p^{Tr(x)}` with values in `Z[ζ_p]`.
pub fn additive_char(field: &Field, x: Elem) -> CyclotomicInt {
    CyclotomicInt::zeta_power(field.p(), field.trace(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_fields_and_small_extensions() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.q(), 2);
        assert_eq!(f2.spec_string(), "2^1/0,1");
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert_eq!(f9.spec_string(), "3^2/1,0,1");
    }

    #[test]
    fn f9_modulus_has_no_roots_in_f3() {
        // x^2 + 1 over F_3: 0 -> 1, 1 -> 2, 2 -> 2
        for x in 0u32..3 {
            assert_ne!((x * x + 1) % 3, 0);
        }
        // and every lexicographically smaller monic quadratic has a root
        for tail in 0..1u32 {
            let (c0, c1) = (tail % 3, tail / 3);
            assert!((0u32..3).any(|x| (x * x + c1 * x + c0) % 3 == 0));
        }
    }

    #[test]
    fn rejects_non_prime_and_oversized() {
        assert!(matches!(Field::new(4, 1), Err(Error::NotPrime(4))));
        assert!(Field::new(2, 9).is_err());
        assert!(Field::of_order(6).is_err());
    }

    #[test]
    fn spec_string_round_trip() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            let f = Field::of_order(q).unwrap();
            let g = Field::parse_spec(&f.spec_string()).unwrap();
            assert_eq!(f, g);
        }
        assert!(Field::parse_spec("2^2/1,0,1").is_err()); // x^2+1 = (x+1)^2 over F_2
        assert!(Field::parse_spec("4^1/0,1").is_err());
    }

    #[test]
    fn additive_char_values() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(additive_char(&f2, 0), CyclotomicInt::one(2));
        let sum = additive_char(&f2, 0) + additive_char(&f2, 1);
        assert!(sum.is_zero());
        let f4 = Field::new(2, 2).unwrap();
        let zero_trace: Vec<Elem> = f4.elements().filter(|&a| f4.trace(a) == 0).collect();
        assert_eq!(zero_trace.len(), 2);
        for a in zero_trace {
            assert_eq!(additive_char(&f4, a), CyclotomicInt::one(2));
        }
    }

    #[test]
    fn character_sums_vanish() {
        for q in [2, 3, 4, 5, 7, 8, 9, 25] {
            let f = Field::of_order(q).unwrap();
            let total = f
                .elements()
                .fold(CyclotomicInt::zero(f.p()), |acc, x| acc + additive_char(&f, x));
            assert!(total.is_zero(), "q = {q}");
        }
    }

    fn field_strategy() -> impl Strategy<Value = Field> {
        prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9, 16, 27, 49])
            .prop_map(|q| Field::of_order(q).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms(f in field_strategy(), a in any::<u8>(), b in any::<u8>(), c in any::<u8>()) {
            let q = f.q() as u8;
            let (a, b, c) = (f.element(a % q), f.element(b % q), f.element(c % q));
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a - a, f.element(0));
            if !a.is_zero() {
                prop_assert_eq!(a * a.inverse().unwrap(), f.element(1));
            }
            prop_assert_eq!((a + b).frobenius(), a.frobenius() + b.frobenius());
            prop_assert_eq!((a * b).frobenius(), a.frobenius() * b.frobenius());
            let chi = |x: FieldElement| additive_char(&f, x.value());
            prop_assert_eq!(chi(a + b), chi(a) * chi(b));
        }
    }
}
