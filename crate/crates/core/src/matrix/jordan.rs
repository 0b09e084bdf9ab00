use super::Matrix;
use crate::error::{Error, Result};
use crate::field::Field;

/// `g = s·u = u·s` with `s` semisimple and `u` unipotent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JordanPairMult {
    pub semisimple: Matrix,
    pub unipotent: Matrix,
}

/// `x = s + n` with `s` semisimple, `n` nilpotent, `[s, n] = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JordanPairAdd {
    pub semisimple: Matrix,
    pub nilpotent: Matrix,
}

fn order(g: &Matrix, f: &Field) -> u64 {
    let id = Matrix::identity(g.n());
    let mut acc = *g;
    let mut k = 1;
    while acc != id {
        acc = acc.mul(g, f);
        k += 1;
    }
    k
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    (1..m).find(|c| a % m * c % m == 1).expect("coprime inverse")
}

/// Multiplicative Jordan decomposition by order splitting: with `ord(g) = s·p^t`,
/// `gcd(s, p) = 1`, the semisimple part is `g^{p^t·c}` where `p^t·c ≡ 1 (mod s)`.
pub fn jordan_mult(g: &Matrix, f: &Field) -> Result<JordanPairMult> {
    if g.det(f) == 0 {
        return Err(Error::Singular);
    }
    let ord = order(g, f);
    let p = f.p() as u64;
    let (mut s, mut pt) = (ord, 1u64);
    while s % p == 0 {
        s /= p;
        pt *= p;
    }
    let c = inverse_mod(pt % s.max(1), s);
    let semisimple = if s == 1 { Matrix::identity(g.n()) } else { g.pow(pt * c, f) };
    let unipotent = semisimple.inverse(f)?.mul(g, f);
    let pair = JordanPairMult { semisimple, unipotent };
    debug_assert!(check_mult(g, &pair, f).is_ok());
    Ok(pair)
}

/// Additive Jordan decomposition: Newton iteration `s ← s - r(s)·r'(s)^{-1}` for the
/// radical `r` of the characteristic polynomial, starting at `x`.
pub fn jordan_add(x: &Matrix, f: &Field) -> JordanPairAdd {
    let rad = x.charpoly(f).radical(f).expect("characteristic polynomial is nonzero");
    let drad = rad.derivative(f);
    let mut s = *x;
    for _ in 0..=2 * x.n() + 2 {
        let r = s.eval_poly(&rad, f);
        if r.is_zero() {
            break;
        }
        let d = s.eval_poly(&drad, f).inverse(f).expect("r'(s) is invertible for separable r");
        s = s.sub(&r.mul(&d, f), f);
    }
    let pair = JordanPairAdd { semisimple: s, nilpotent: x.sub(&s, f) };
    debug_assert!(check_add(x, &pair, f).is_ok());
    pair
}

/// Minimal polynomial is squarefree iff the radical of the characteristic polynomial kills `m`.
pub fn is_semisimple(m: &Matrix, f: &Field) -> bool {
    let rad = m.charpoly(f).radical(f).unwrap();
    m.eval_poly(&rad, f).is_zero()
}

pub fn is_nilpotent(m: &Matrix, f: &Field) -> bool {
    m.pow(m.n() as u64, f).is_zero()
}

fn check_mult(g: &Matrix, pair: &JordanPairMult, f: &Field) -> Result<()> {
    let (s, u) = (&pair.semisimple, &pair.unipotent);
    let ok = s.mul(u, f) == *g
        && s.commutes_with(u, f)
        && is_semisimple(s, f)
        && is_nilpotent(&u.sub(&Matrix::identity(g.n()), f), f);
    ok.then_some(()).ok_or_else(|| Error::Invariant(format!("bad multiplicative Jordan pair for {g:?}")))
}

fn check_add(x: &Matrix, pair: &JordanPairAdd, f: &Field) -> Result<()> {
    let (s, n) = (&pair.semisimple, &pair.nilpotent);
    let ok = s.add(n, f) == *x && s.commutes_with(n, f) && is_semisimple(s, f) && is_nilpotent(n, f);
    ok.then_some(()).ok_or_else(|| Error::Invariant(format!("bad additive Jordan pair for {x:?}")))
}

/// Verifies the Jordan invariants; used by tests and the identity suite.
pub fn verify_jordan(x: &Matrix, f: &Field) -> Result<()> {
    check_add(x, &jordan_add(x, f), f)?;
    if x.det(f) != 0 {
        check_mult(x, &jordan_mult(x, f)?, f)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{Budget, GroupSpec};

    #[test]
    fn documented_multiplicative_examples() {
        let f = Field::new(3, 1).unwrap();
        let u = Matrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(jordan_mult(&u, &f).unwrap(), JordanPairMult { semisimple: Matrix::identity(2), unipotent: u });
        let d = Matrix::from_rows(&[vec![1, 0], vec![0, 2]]);
        assert_eq!(jordan_mult(&d, &f).unwrap(), JordanPairMult { semisimple: d, unipotent: Matrix::identity(2) });
        let g = Matrix::from_rows(&[vec![2, 1], vec![0, 2]]);
        let pair = jordan_mult(&g, &f).unwrap();
        assert_eq!(pair.semisimple, Matrix::scalar(2, 2));
        assert_eq!(pair.unipotent, Matrix::from_rows(&[vec![1, 2], vec![0, 1]]));
        assert!(matches!(jordan_mult(&Matrix::zero(2), &f), Err(Error::Singular)));
    }

    #[test]
    fn documented_additive_examples() {
        let f2 = Field::new(2, 1).unwrap();
        let e12 = Matrix::unit(2, 0, 1);
        assert_eq!(jordan_add(&e12, &f2), JordanPairAdd { semisimple: Matrix::zero(2), nilpotent: e12 });
        let d = Matrix::from_rows(&[vec![0, 0], vec![0, 1]]);
        assert_eq!(jordan_add(&d, &f2), JordanPairAdd { semisimple: d, nilpotent: Matrix::zero(2) });
        let f3 = Field::new(3, 1).unwrap();
        let x = Matrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(jordan_add(&x, &f3), JordanPairAdd { semisimple: Matrix::identity(2), nilpotent: e12 });
    }

    #[test]
    fn exhaustive_invariants_small() {
        for (n, q) in [(2, 2), (2, 3), (2, 4), (3, 2)] {
            let g = GroupSpec::gl(n, q).unwrap();
            for x in g.enumerate_lie(&Budget::default()).unwrap() {
                verify_jordan(&x, &g.field).unwrap();
                if x.det(&g.field) != 0 {
                    // both constructions agree on the semisimple part
                    let m = jordan_mult(&x, &g.field).unwrap();
                    assert_eq!(m.semisimple, jordan_add(&x, &g.field).semisimple);
                }
            }
        }
    }
}
