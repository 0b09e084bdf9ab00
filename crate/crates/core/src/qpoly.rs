//! Univariate polynomials with exact rational coefficients in a formal symbol `q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Coefficients are stored lowest degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

fn r(n: i128) -> Rational {
    Rational::from_integer(n)
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i128]) -> Self {
        Self::new(coeffs.iter().map(|&c| r(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(r(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The symbol `q`.
    pub fn q() -> Self {
        Self::monomial(r(1), 1)
    }

    pub fn monomial(c: Rational, deg: usize) -> Self {
        let mut v = vec![Rational::zero(); deg + 1];
        v[deg] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).copied().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn eval(&self, x: Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, &c| acc * x + c)
    }

    pub fn eval_int(&self, x: i128) -> Rational {
        self.eval(r(x))
    }

    /// Value at an integer, required to be an integer.
    pub fn eval_integer(&self, x: i128) -> Result<i128> {
        let v = self.eval_int(x);
        v.is_integer()
            .then(|| v.to_integer())
            .ok_or_else(|| Error::Invariant(format!("{self} at q = {x} is {v}, not an integer")))
    }

    pub fn scale(&self, c: Rational) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Substitutes `q ↦ q^d`.
    pub fn compose_power(&self, d: usize) -> Self {
        assert!(d >= 1);
        let mut v = vec![Rational::zero(); self.coeffs.len().saturating_sub(1) * d + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * d] = c;
        }
        Self::new(v)
    }

    /// `q^n · p(1/q)`; `n` must be at least the degree.
    pub fn reflect(&self, n: usize) -> Self {
        assert!(self.degree().is_none_or(|d| d <= n), "reflect below degree");
        let mut v = self.coeffs.clone();
        v.resize(n + 1, Rational::zero());
        v.reverse();
        Self::new(v)
    }

    /// Exact division; errors if a remainder is left.
    pub fn div_exact(&self, d: &QPoly) -> Result<QPoly> {
        let dd = d.degree().ok_or_else(|| Error::Invariant("division by zero polynomial".into()))?;
        let lead = d.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return if self.is_zero() { Ok(Self::zero()) } else { Err(Error::Invariant(format!("{d} does not divide {self}"))) };
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd] / lead;
            quot[i] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= c * dc;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::Invariant(format!("{d} does not divide {self}")));
        }
        Ok(Self::new(quot))
    }

    /// Unique polynomial of degree below `points.len()` through the given points.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Result<Self> {
        let mut acc = Self::zero();
        for (i, &(xi, yi)) in points.iter().enumerate() {
            let mut basis = Self::constant(yi);
            for (j, &(xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let denom = xi - xj;
                if denom.is_zero() {
                    return Err(Error::Config(format!("repeated interpolation node {xi}")));
                }
                basis = &basis * &Self::new(vec![-xj / denom, Rational::one() / denom]);
            }
            acc = &acc + &basis;
        }
        Ok(acc)
    }

    /// Formats with the given variable name; see the `Display` impl for the grammar.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let ascending = self.coeffs.last().unwrap().is_negative();
        let mut order: Vec<usize> = (0..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero()).collect();
        if !ascending {
            order.reverse();
        }
        let mut s = String::new();
        for (k, &i) in order.iter().enumerate() {
            let c = self.coeffs[i];
            let a = c.abs();
            if c.is_negative() {
                s.push('-');
            } else if k > 0 {
                s.push('+');
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mono);
            } else if a.is_integer() {
                s.push_str(&format!("{a}{mono}"));
            } else {
                s.push_str(&format!("{a}*{mono}"));
            }
        }
        s
    }

    /// Parses the `Display` grammar with an arbitrary single-letter variable.
    pub fn parse_with(s: &str, var: char) -> Result<Self> {
        let err = || Error::Parse(format!("bad polynomial {s:?}"));
        let s = s.trim();
        if s.is_empty() || s.contains(char::is_whitespace) {
            return Err(err());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in s.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut coeffs: Vec<Rational> = Vec::new();
        for t in terms {
            let (sign, body) = match t.as_bytes().first() {
                Some(b'-') => (-1, &t[1..]),
                Some(b'+') => (1, &t[1..]),
                _ => (1, t),
            };
            if body.is_empty() {
                return Err(err());
            }
            let (coef, deg) = match body.find(var) {
                None => (body.parse::<Rational>().map_err(|_| err())?, 0),
                Some(pos) => {
                    let c = body[..pos].trim_end_matches('*');
                    let c = if c.is_empty() { Rational::one() } else { c.parse::<Rational>().map_err(|_| err())? };
                    let rest = &body[pos + var.len_utf8()..];
                    let d = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(err)?.parse::<usize>().map_err(|_| err())?
                    };
                    (c, d)
                }
            };
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, Rational::zero());
            }
            coeffs[deg] += coef * r(sign);
        }
        Ok(Self::new(coeffs))
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator(&self) -> i128 {
        self.coeffs.iter().fold(1, |acc, c| acc.lcm(c.denom()))
    }
}

/// Descending powers of `q`, integer or `a/b*` coefficients, no spaces; when the leading
/// coefficient is negative the terms are written in ascending order (`1-q`).
impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("q"))
    }
}

impl FromStr for QPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with(s, 'q')
    }
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QPoly::new(v)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        self.scale(r(-1))
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QPoly {
            type Output = QPoly;
            fn $m(self, o: QPoly) -> QPoly {
                (&self).$m(&o)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

impl std::iter::Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::zero(), |a, b| &a + &b)
    }
}

/// `q^k - 1`.
pub fn q_power_minus_one(k: usize) -> QPoly {
    &QPoly::monomial(r(1), k) - &QPoly::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formatting() {
        assert_eq!(QPoly::from_ints(&[-1, 0, 1]).to_string(), "q^2-1");
        assert_eq!(QPoly::from_ints(&[1, -1]).to_string(), "1-q");
        assert_eq!(QPoly::from_ints(&[1, 1]).to_string(), "q+1");
        assert_eq!(QPoly::from_ints(&[0, -2, 2]).to_string(), "2q^2-2q");
        assert_eq!(QPoly::zero().to_string(), "0");
        assert_eq!(QPoly::new(vec![Ratio::new(1, 2), r(0), Ratio::new(-3, 2)]).to_string(), "1/2-3/2*q^2");
    }

    #[test]
    fn parsing() {
        for s in ["q^2-1", "1-q", "q+1", "2q^2-2q", "0", "-q^3+5", "1/2-3/2*q^2", "7"] {
            let p: QPoly = s.parse().unwrap();
            assert_eq!(p.to_string().parse::<QPoly>().unwrap(), p, "{s}");
        }
        assert_eq!("q^2-1".parse::<QPoly>().unwrap(), QPoly::from_ints(&[-1, 0, 1]));
        assert!("q^".parse::<QPoly>().is_err());
        assert!("q + 1".parse::<QPoly>().is_err());
        assert!("".parse::<QPoly>().is_err());
    }

    #[test]
    fn interpolation_examples() {
        let pts = |v: &[(i128, i128)]| v.iter().map(|&(a, b)| (r(a), r(b))).collect::<Vec<_>>();
        let p = QPoly::interpolate(&pts(&[(2, 3), (3, 8), (5, 24)])).unwrap();
        assert_eq!(p.to_string(), "q^2-1");
        assert_eq!(p.eval_integer(7).unwrap(), 48);
        let c = QPoly::interpolate(&pts(&[(2, 1), (3, 1), (5, 1)])).unwrap();
        assert_eq!(c, QPoly::one());
        assert!(QPoly::interpolate(&pts(&[(2, 1), (2, 3)])).is_err());
    }

    #[test]
    fn helpers() {
        let p = QPoly::from_ints(&[1, 2, 3]);
        assert_eq!(p.compose_power(2), QPoly::from_ints(&[1, 0, 2, 0, 3]));
        assert_eq!(p.reflect(3), QPoly::from_ints(&[0, 3, 2, 1]));
        let a = q_power_minus_one(2);
        let b = q_power_minus_one(1);
        assert_eq!(a.div_exact(&b).unwrap(), QPoly::from_ints(&[1, 1]));
        assert!(b.div_exact(&a).is_err());
        assert_eq!(QPoly::new(vec![Ratio::new(1, 6), Ratio::new(1, 4)]).denominator(), 12);
    }

    fn poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec(-20i128..20, 0..5).prop_map(|v| QPoly::from_ints(&v))
    }

    proptest! {
        #[test]
        fn ring_laws_and_eval(a in poly(), b in poly(), c in poly(), x in -6i128..6) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!((&a * &b).eval_int(x), a.eval_int(x) * b.eval_int(x));
            prop_assert_eq!((&a - &b).eval_int(x), a.eval_int(x) - b.eval_int(x));
            prop_assert_eq!(a.to_string().parse::<QPoly>().unwrap(), a.clone());
        }

        #[test]
        fn interpolation_reproduces_points(ys in prop::collection::vec(-50i128..50, 1..6)) {
            let pts: Vec<_> = ys.iter().enumerate().map(|(i, &y)| (r(i as i128 + 2), r(y))).collect();
            let p = QPoly::interpolate(&pts).unwrap();
            prop_assert!(p.degree().is_none_or(|d| d < pts.len()));
            for (x, y) in pts {
                prop_assert_eq!(p.eval(x), y);
            }
        }
    }
}
