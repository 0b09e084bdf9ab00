//! Explicit matrices over `F_q` and the finite groups and Lie algebras built from them.
//!
//! This is the brute-force side of every identity in the crate: all sets are
//! enumerated element by element, in row-major lexicographic order of entries.

mod flags;
mod group;
mod jordan;
mod orbit;

pub use flags::{f_nilradical_lie, f_parabolic_group, f_parabolic_lie, flag_key, Transversal};
pub use group::{Budget, Group, GroupKind, GroupSpec, ParabolicSpec, Pattern};
pub use jordan::{is_nilpotent, is_semisimple, jordan_add, jordan_mult, verify_jordan, JordanPairAdd, JordanPairMult};
pub use orbit::{burnside_count, burnside_count_with, centralizer_order, orbit_representatives, OrbitRecord};

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, Poly};

pub const MAX_N: usize = 4;

/// An `n × n` matrix over a finite field, `n ≤ 4`, stored row-major.
///
/// The field is not stored; every arithmetic method takes it explicitly. The derived
/// ordering is row-major lexicographic on entry indices, the canonical enumeration order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    n: u8,
    e: [Elem; MAX_N * MAX_N],
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_N).contains(&n), "matrix size {n} out of range");
        Self { n: n as u8, e: [0; MAX_N * MAX_N] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1)
    }

    pub fn scalar(n: usize, c: Elem) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Self {
        let n = rows.len();
        let mut m = Self::zero(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Elementary matrix `E_{ij}`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.set(i, j, 1);
        m
    }

    /// Block-diagonal matrix from square blocks.
    pub fn block_diag(blocks: &[Matrix]) -> Self {
        let n = blocks.iter().map(|b| b.n()).sum();
        let mut m = Self::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n() {
                for j in 0..b.n() {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.n();
        }
        m
    }

    /// Companion matrix of a monic polynomial.
    pub fn companion(poly: &Poly, field: &Field) -> Self {
        let d = poly.degree().expect("companion of zero polynomial");
        let mut m = Self::zero(d);
        for i in 1..d {
            m.set(i, i - 1, 1);
        }
        for i in 0..d {
            m.set(i, d - 1, field.neg(poly.coeffs()[i]));
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.e[i * self.n as usize + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        let n = self.n as usize;
        self.e[i * n + j] = v;
    }

    pub fn entries(&self) -> &[Elem] {
        &self.e[..self.n() * self.n()]
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        (0..self.n()).map(|i| (0..self.n()).map(|j| self.get(i, j)).collect()).collect()
    }

    /// Extracts the square block on rows/columns `start..start + size`.
    pub fn block(&self, start: usize, size: usize) -> Matrix {
        let mut m = Matrix::zero(size);
        for i in 0..size {
            for j in 0..size {
                m.set(i, j, self.get(start + i, start + j));
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n())
    }

    pub fn mul(&self, o: &Matrix, f: &Field) -> Matrix {
        let n = self.n();
        debug_assert_eq!(n, o.n());
        let mut m = Matrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    m.e[idx] = f.add(m.e[idx], f.mul(a, o.get(k, j)));
                }
            }
        }
        m
    }

    pub fn add(&self, o: &Matrix, f: &Field) -> Matrix {
        let mut m = *self;
        for idx in 0..self.n() * self.n() {
            m.e[idx] = f.add(self.e[idx], o.e[idx]);
        }
        m
    }

    pub fn sub(&self, o: &Matrix, f: &Field) -> Matrix {
        let mut m = *self;
        for idx in 0..self.n() * self.n() {
            m.e[idx] = f.sub(self.e[idx], o.e[idx]);
        }
        m
    }

    pub fn scale(&self, c: Elem, f: &Field) -> Matrix {
        let mut m = *self;
        for idx in 0..self.n() * self.n() {
            m.e[idx] = f.mul(c, self.e[idx]);
        }
        m
    }

    pub fn commutes_with(&self, o: &Matrix, f: &Field) -> bool {
        self.mul(o, f) == o.mul(self, f)
    }

    /// `h · self · h_inv`.
    pub fn conjugate(&self, h: &Matrix, h_inv: &Matrix, f: &Field) -> Matrix {
        h.mul(self, f).mul(h_inv, f)
    }

    pub fn trace(&self, f: &Field) -> Elem {
        (0..self.n()).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> Matrix {
        let mut base = *self;
        let mut acc = Matrix::identity(self.n());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    /// `poly(self)` by Horner's rule.
    pub fn eval_poly(&self, poly: &Poly, f: &Field) -> Matrix {
        let n = self.n();
        poly.coeffs()
            .iter()
            .rev()
            .fold(Matrix::zero(n), |acc, &c| acc.mul(self, f).add(&Matrix::scalar(n, c), f))
    }

    pub fn det(&self, f: &Field) -> Elem {
        let n = self.n();
        let mut a = self.rows();
        let mut det = 1;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else { return 0 };
            if piv != col {
                a.swap(piv, col);
                det = f.neg(det);
            }
            det = f.mul(det, a[col][col]);
            let inv = f.inv(a[col][col]).unwrap();
            for r in col + 1..n {
                let factor = f.mul(a[r][col], inv);
                if factor != 0 {
                    for c in col..n {
                        a[r][c] = f.sub(a[r][c], f.mul(factor, a[col][c]));
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &Field) -> Result<Matrix> {
        let n = self.n();
        let mut a = self.rows();
        let mut inv = Matrix::identity(n).rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col] != 0).ok_or(Error::Singular)?;
            a.swap(piv, col);
            inv.swap(piv, col);
            let s = f.inv(a[col][col]).unwrap();
            for c in 0..n {
                a[col][c] = f.mul(a[col][c], s);
                inv[col][c] = f.mul(inv[col][c], s);
            }
            for r in 0..n {
                if r != col && a[r][col] != 0 {
                    let factor = a[r][col];
                    for c in 0..n {
                        a[r][c] = f.sub(a[r][c], f.mul(factor, a[col][c]));
                        inv[r][c] = f.sub(inv[r][c], f.mul(factor, inv[col][c]));
                    }
                }
            }
        }
        Ok(Matrix::from_rows(&inv))
    }

    pub fn rank(&self, f: &Field) -> usize {
        rank(self.rows(), f)
    }

    /// Characteristic polynomial `det(x I - self)`.
    pub fn charpoly(&self, f: &Field) -> Poly {
        let n = self.n();
        let entries: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = f.neg(self.get(i, j));
                        if i == j {
                            Poly::new(vec![c, 1])
                        } else {
                            Poly::constant(c)
                        }
                    })
                    .collect()
            })
            .collect();
        poly_det(&entries, f)
    }

    /// Position in the enumeration of all `n × n` matrices (first entry most significant).
    pub fn index(&self, q: usize) -> u64 {
        self.entries().iter().fold(0u64, |acc, &v| acc * q as u64 + v as u64)
    }

    /// Row-major, semicolon-separated entry indices, e.g. `"1;1;0;1"`.
    pub fn serialize(&self) -> String {
        let parts: Vec<String> = self.entries().iter().map(|v| v.to_string()).collect();
        parts.join(";")
    }

    pub fn parse(s: &str, field: &Field) -> Result<Matrix> {
        let vals = s
            .split(';')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("matrix entry {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let n = (1..=MAX_N)
            .find(|n| n * n == vals.len())
            .ok_or_else(|| Error::Parse(format!("{} entries do not form a square matrix", vals.len())))?;
        if vals.iter().any(|&v| v >= field.q()) {
            return Err(Error::Parse(format!("entry out of range for F_{}", field.q())));
        }
        let mut m = Matrix::zero(n);
        for (idx, v) in vals.into_iter().enumerate() {
            m.e[idx] = v as Elem;
        }
        Ok(m)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.serialize())
    }
}

/// Rank of a list of row vectors.
pub fn rank(mut rows: Vec<Vec<Elem>>, f: &Field) -> usize {
    rref(&mut rows, f)
}

/// Reduces rows to reduced row echelon form in place, dropping zero rows; returns the rank.
pub fn rref(rows: &mut Vec<Vec<Elem>>, f: &Field) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(piv, r);
        let s = f.inv(rows[r][col]).unwrap();
        for c in 0..ncols {
            rows[r][c] = f.mul(rows[r][c], s);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let factor = rows[i][col];
                for c in 0..ncols {
                    let sub = f.mul(factor, rows[r][c]);
                    rows[i][c] = f.sub(rows[i][c], sub);
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    r
}

fn poly_det(m: &[Vec<Poly>], f: &Field) -> Poly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = m[0][j].mul(&poly_det(&minor, f), f);
        acc = if j % 2 == 0 { acc.add(&term, f) } else { acc.sub(&term, f) };
    }
    acc
}
