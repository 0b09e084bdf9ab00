use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Element of `Z[ζ_p]`, stored in the basis `1, ζ, …, ζ^{p-2}`.
///
/// `ζ^{p-1}` reduces to `-(1 + ζ + … + ζ^{p-2})`, so the representation is unique.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    p: u32,
    coeffs: Vec<i64>,
}

impl CyclotomicInt {
    pub fn zero(p: u32) -> Self {
        Self { p, coeffs: vec![0; (p - 1) as usize] }
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u32, n: i64) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = n;
        z
    }

    /// `ζ^e` for any exponent.
    pub fn zeta_power(p: u32, e: u32) -> Self {
        let mut full = vec![0i64; p as usize];
        full[(e % p) as usize] = 1;
        Self::reduce(p, full)
    }

    fn reduce(p: u32, mut full: Vec<i64>) -> Self {
        debug_assert_eq!(full.len(), p as usize);
        let top = full.pop().unwrap();
        for c in &mut full {
            *c -= top;
        }
        Self { p, coeffs: full }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The value as an integer, if it lies in `Z`.
    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    pub fn scale(&self, n: i64) -> Self {
        Self { p: self.p, coeffs: self.coeffs.iter().map(|c| c * n).collect() }
    }
}

impl Add for CyclotomicInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, rhs: Self) -> CyclotomicInt {
        assert_eq!(self.p, rhs.p, "mixed cyclotomic rings");
        CyclotomicInt {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for CyclotomicInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self + &(-rhs)
    }
}

impl Neg for CyclotomicInt {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1)
    }
}

impl Mul for CyclotomicInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, rhs: Self) -> CyclotomicInt {
        assert_eq!(self.p, rhs.p, "mixed cyclotomic rings");
        let p = self.p as usize;
        let mut full = vec![0i64; p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                full[(i + j) % p] += a * b;
            }
        }
        CyclotomicInt::reduce(self.p, full)
    }
}

impl fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            terms.push(match i {
                0 => c.to_string(),
                1 => format!("{c}z"),
                _ => format!("{c}z^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+").replace("+-", "-"))
        }
    }
}
