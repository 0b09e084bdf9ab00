use std::cmp::Ordering;
use std::fmt;

use super::{Elem, Field};
use crate::error::{Error, Result};

/// Univariate polynomial over `F_q`, ascending coefficients, no trailing zeros.
///
/// The zero polynomial has an empty coefficient list and [`Poly::degree`] `None`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1] }
    }

    pub fn constant(c: Elem) -> Self {
        Self::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        Self { coeffs: vec![0, 1] }
    }

    /// `x - a`.
    pub fn linear(field: &Field, a: Elem) -> Self {
        Self::new(vec![field.neg(a), 1])
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                f.add(a, b)
            })
            .collect();
        Poly::new(c)
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        self.add(&other.neg(f), f)
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn scale(&self, c: Elem, f: &Field) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(c)
    }

    pub fn monic(&self, f: &Field) -> Poly {
        match f.inv(self.lead()) {
            Some(inv) => self.scale(inv, f),
            None => Poly::zero(),
        }
    }

    /// Euclidean division; panics on division by zero.
    pub fn div_rem(&self, d: &Poly, f: &Field) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = f.inv(d.lead()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![0; r.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(r[i + dd], lead_inv);
            quot[i] = c;
            if c != 0 {
                for (j, &dj) in d.coeffs.iter().enumerate() {
                    r[i + j] = f.sub(r[i + j], f.mul(c, dj));
                }
            }
        }
        r.truncate(dd);
        (Poly::new(quot), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly, f: &Field) -> Poly {
        self.div_rem(d, f).1
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly, f: &Field) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, f.from_int(i as i64)))
            .collect();
        Poly::new(c)
    }

    pub fn eval(&self, x: Elem, f: &Field) -> Elem {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly, f: &Field) -> Poly {
        self.mul(other, f).rem(m, f)
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly, f: &Field) -> Poly {
        let mut base = self.rem(m, f);
        let mut acc = Poly::one().rem(m, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m, f);
            }
            base = base.mul_mod(&base, m, f);
            e >>= 1;
        }
        acc
    }

    /// Index in the canonical enumeration of polynomials of bounded degree.
    fn from_index(mut idx: usize, len: usize, q: usize) -> Poly {
        let mut c = Vec::with_capacity(len);
        for _ in 0..len {
            c.push((idx % q) as Elem);
            idx /= q;
        }
        Poly::new(c)
    }

    /// All monic polynomials of degree `d`, ordered by the index of their lower coefficients.
    pub fn monics(d: usize, f: &Field) -> impl Iterator<Item = Poly> + '_ {
        let q = f.q();
        (0..q.pow(d as u32)).map(move |idx| {
            let mut c = Self::from_index(idx, d, q).coeffs;
            c.resize(d, 0);
            c.push(1);
            Poly { coeffs: c }
        })
    }

    /// Monic irreducibles of degree `d`, in the order of [`Poly::monics`].
    pub fn irreducibles(d: usize, f: &Field) -> Vec<Poly> {
        Self::monics(d, f).filter(|p| p.is_irreducible(f)).collect()
    }

    /// Irreducibility by the distinct-degree criterion.
    pub fn is_irreducible(&self, f: &Field) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        let m = self.monic(f);
        let x = Poly::x();
        let mut h = x.clone();
        for _ in 1..=d / 2 {
            h = h.pow_mod(f.q() as u64, &m, f);
            if !m.gcd(&h.sub(&x, f), f).is_one() {
                return false;
            }
        }
        true
    }

    /// Ordering used for factor lists: degree, then coefficients from the constant term up.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    /// Factors a monic polynomial into monic irreducibles with multiplicities.
    ///
    /// Squarefree decomposition, then distinct-degree and equal-degree splitting.
    /// Degrees up to 2 are split by an exhaustive root search instead.
    pub fn factor(&self, f: &Field) -> Result<Vec<(Poly, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !self.is_monic() {
            return Err(Error::Config("factorization expects a monic polynomial".into()));
        }
        let mut out: Vec<(Poly, usize)> = Vec::new();
        for (part, mult) in squarefree(self, f) {
            let pieces = if part.degree().unwrap_or(0) <= 2 {
                split_by_roots(&part, f)
            } else {
                distinct_degree(&part, f)
                    .into_iter()
                    .flat_map(|(g, d)| equal_degree(&g, d, f))
                    .collect()
            };
            for piece in pieces {
                match out.iter_mut().find(|(g, _)| *g == piece) {
                    Some((_, m)) => *m += mult,
                    None => out.push((piece, mult)),
                }
            }
        }
        out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        Ok(out)
    }

    /// Product of the distinct irreducible factors.
    pub fn radical(&self, f: &Field) -> Result<Poly> {
        Ok(self
            .monic(f)
            .factor(f)?
            .into_iter()
            .fold(Poly::one(), |acc, (g, _)| acc.mul(&g, f)))
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}{var}"),
                _ => format!("{coef}{var}^{i}"),
            });
        }
        terms.join("+")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("x"))
    }
}

fn pth_root(c: &Poly, f: &Field) -> Poly {
    let p = f.p() as usize;
    // a^{1/p} = a^{p^{k-1}} in F_{p^k}
    let root_exp = (f.p() as u64).pow(f.k() - 1);
    let coeffs = c
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&a| f.pow(a, root_exp))
        .collect();
    Poly::new(coeffs)
}

fn squarefree(poly: &Poly, f: &Field) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if poly.degree() == Some(0) {
        return out;
    }
    let d = poly.derivative(f);
    let mut c = poly.gcd(&d, f);
    let mut w = poly.div_rem(&c, f).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c, f);
        let z = w.div_rem(&y, f).0;
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w, f).0;
    }
    if !c.is_one() {
        let root = pth_root(&c, f);
        for (g, m) in squarefree(&root, f) {
            out.push((g, m * f.p() as usize));
        }
    }
    out
}

fn split_by_roots(g: &Poly, f: &Field) -> Vec<Poly> {
    match g.degree() {
        None | Some(0) => Vec::new(),
        Some(1) => vec![g.clone()],
        _ => match f.elements().find(|&a| g.eval(a, f) == 0) {
            Some(a) => {
                let lin = Poly::linear(f, a);
                let rest = g.div_rem(&lin, f).0;
                let mut v = vec![lin];
                v.extend(split_by_roots(&rest, f));
                v
            }
            None => vec![g.clone()],
        },
    }
}

fn distinct_degree(g: &Poly, f: &Field) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let x = Poly::x();
    let mut rest = g.clone();
    let mut h = x.clone();
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(f.q() as u64, &rest, f);
        let common = rest.gcd(&h.sub(&x, f), f);
        if !common.is_one() {
            rest = rest.div_rem(&common, f).0;
            h = h.rem(&rest, f);
            out.push((common, i));
        }
        i += 1;
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        out.push((rest, d));
    }
    out
}

/// Splits a product of distinct irreducibles of common degree `d`.
/// Candidates are tried in the canonical polynomial order, so the result is deterministic.
fn equal_degree(g: &Poly, d: usize, f: &Field) -> Vec<Poly> {
    let n = g.degree().unwrap_or(0);
    if n == d || n == 0 {
        return if n == 0 { Vec::new() } else { vec![g.clone()] };
    }
    let q = f.q();
    let limit = q.saturating_pow(n as u32);
    for idx in q..limit {
        let a = Poly::from_index(idx, n, q);
        let b = if f.p() == 2 {
            // trace map a + a^2 + ... + a^{2^{kd-1}}
            let mut t = a.clone();
            let mut term = a.clone();
            for _ in 1..(f.k() as usize * d) {
                term = term.mul_mod(&term, g, f);
                t = t.add(&term, f);
            }
            t
        } else {
            // a^{(q^d-1)/2} = (a^{1+q+...+q^{d-1}})^{(q-1)/2}
            let mut norm = Poly::one();
            let mut conj = a.clone();
            for _ in 0..d {
                norm = norm.mul_mod(&conj, g, f);
                conj = conj.pow_mod(q as u64, g, f);
            }
            norm.pow_mod((q as u64 - 1) / 2, g, f).sub(&Poly::one(), f)
        };
        let h = g.gcd(&b, f);
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < n {
            let other = g.div_rem(&h, f).0;
            let mut v = equal_degree(&h, d, f);
            v.extend(equal_degree(&other, d, f));
            return v;
        }
    }
    unreachable!("equal-degree splitting found no separating polynomial")
}
