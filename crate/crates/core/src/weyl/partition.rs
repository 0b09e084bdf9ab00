use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qpoly::Rational;

/// Integer partition with weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn row(n: usize) -> Self {
        Self::new(vec![n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    pub fn n_lambda(&self) -> usize {
        self.0.iter().enumerate().map(|(i, &p)| i * p).sum()
    }

    pub fn transpose(&self) -> Self {
        let first = self.0.first().copied().unwrap_or(0);
        Self((1..=first).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }

    /// Multiplicity of each part size `1..=max`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let max = self.0.first().copied().unwrap_or(0);
        let mut m = vec![0; max + 1];
        for &p in &self.0 {
            m[p] += 1;
        }
        m
    }

    /// Partitions of `n` in reverse lexicographic order, `(n)` first and `(1^n)` last.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Union of parts.
    pub fn join(parts: &[Partition]) -> Self {
        Self::new(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    /// Dominance order `self ⊴ other`.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        let (mut a, mut b) = (0, 0);
        for i in 0..self.len().max(other.len()) {
            a += self.0.get(i).copied().unwrap_or(0);
            b += other.0.get(i).copied().unwrap_or(0);
            if a > b {
                return false;
            }
        }
        true
    }
}

/// Size of the `S_n`-centralizer of a permutation of cycle type `ρ`: `Π m^{a_m} a_m!`.
pub fn z_order(rho: &Partition) -> u128 {
    rho.multiplicities()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(m, &a)| (m as u128).pow(a as u32) * (1..=a as u128).product::<u128>())
        .product()
}

/// A conjugacy class of `W_L = S_{n_1} × ⋯ × S_{n_k}`: a cycle type per factor, the joint
/// cycle type `ρ` in `S_n` and the class proportion `Π 1/z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylClass {
    pub components: Vec<Partition>,
    pub rho: Partition,
    pub weight: Rational,
}

/// All classes of the Weyl group of the Levi with the given composition; weights sum to 1.
pub fn levi_weyl_classes(composition: &[usize]) -> Vec<WeylClass> {
    let mut out = vec![WeylClass { components: vec![], rho: Partition::default(), weight: Rational::one() }];
    for &n in composition {
        let mut next = Vec::new();
        for c in &out {
            for sigma in Partition::all(n) {
                let mut components = c.components.clone();
                let w = c.weight / Rational::from_integer(z_order(&sigma) as i128);
                components.push(sigma);
                next.push(WeylClass { rho: Partition::join(&components), components, weight: w });
            }
        }
        out = next;
    }
    out
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("partition must be bracketed: {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Self::default());
        }
        let parts = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad part in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("parts must be positive and non-increasing: {s:?}")));
        }
        Ok(Self(parts))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
