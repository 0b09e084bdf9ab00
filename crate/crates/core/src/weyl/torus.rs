use super::{z_order, Partition};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, Poly};
use crate::matrix::{Budget, GroupSpec, Matrix};
use crate::qpoly::{q_power_minus_one, QPoly};

/// `|T_w^F| = Π (q^{ρ_i} - 1)`.
pub fn torus_order(rho: &Partition, q: u64) -> u128 {
    rho.parts().iter().map(|&r| (q as u128).pow(r as u32) - 1).product()
}

pub fn torus_order_poly(rho: &Partition) -> QPoly {
    rho.parts().iter().fold(QPoly::one(), |acc, &r| &acc * &q_power_minus_one(r))
}

/// `|𝔱_w^F| = q^{|ρ|}`.
pub fn lie_torus_order(rho: &Partition, q: u64) -> u128 {
    (q as u128).pow(rho.weight() as u32)
}

/// `(ε_G, ε_L)` for split `GL_n` and a split Levi: both equal `n`.
pub fn relative_ranks(g: &GroupSpec, composition: &[usize]) -> (usize, usize) {
    (g.n, composition.iter().sum())
}

/// A class of embeddings of a semisimple element into `T_ρ`: for each centralizer factor
/// `j`, the cycle type `ρ^{(j)}` of the induced torus in `GL_{m_j}(F_{q^{d_j}})`, whose
/// parts are `ρ_i / d_j` over the cycles assigned to `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusAssignment {
    pub parts: Vec<Partition>,
}

/// Every assignment class of cycles of `ρ` to the factors of `shape = [(d_j, m_j)]`, where a
/// cycle of length `r` may go to factor `j` only if `d_j | r`, and factor `j` receives total
/// `Σ r / d_j = m_j`. Factors are indexed by position, so equal `(d, m)` are distinct.
pub fn all_assignment_classes(shape: &[(usize, usize)], rho: &Partition) -> Vec<TorusAssignment> {
    let total: usize = shape.iter().map(|(d, m)| d * m).sum();
    if total != rho.weight() {
        return vec![];
    }
    let mult = rho.multiplicities();
    let lengths: Vec<(usize, usize)> = (1..mult.len()).rev().filter(|&r| mult[r] > 0).map(|r| (r, mult[r])).collect();
    let mut out = Vec::new();
    let mut filled = vec![0usize; shape.len()];
    let mut counts: Vec<Vec<usize>> = Vec::new();
    rec(shape, &lengths, 0, &mut filled, &mut counts, &mut out);
    out
}

fn rec(
    shape: &[(usize, usize)],
    lengths: &[(usize, usize)],
    li: usize,
    filled: &mut Vec<usize>,
    counts: &mut Vec<Vec<usize>>,
    out: &mut Vec<TorusAssignment>,
) {
    if li == lengths.len() {
        if filled.iter().zip(shape).all(|(&f, &(_, m))| f == m) {
            let parts = (0..shape.len())
                .map(|j| {
                    let (d, _) = shape[j];
                    Partition::new(
                        lengths.iter().zip(counts.iter()).flat_map(|(&(r, _), c)| std::iter::repeat_n(r / d, c[j])).collect(),
                    )
                })
                .collect();
            out.push(TorusAssignment { parts });
        }
        return;
    }
    let (r, a) = lengths[li];
    let mut dist = vec![0usize; shape.len()];
    distribute(shape, r, a, 0, &mut dist, filled, &mut |dist, filled| {
        counts.push(dist.to_vec());
        rec(shape, lengths, li + 1, filled, counts, out);
        counts.pop();
    });
}

/// Splits `left` cycles of length `r` among factors `j..`, respecting divisibility and capacity.
fn distribute(
    shape: &[(usize, usize)],
    r: usize,
    left: usize,
    j: usize,
    dist: &mut Vec<usize>,
    filled: &mut Vec<usize>,
    k: &mut dyn FnMut(&[usize], &mut Vec<usize>),
) {
    if j == shape.len() {
        if left == 0 {
            k(dist, filled);
        }
        return;
    }
    let (d, m) = shape[j];
    let max = if r % d == 0 { left.min((m - filled[j]) / (r / d)) } else { 0 };
    for c in 0..=max {
        dist[j] = c;
        filled[j] += c * (r / d);
        distribute(shape, r, left - c, j + 1, dist, filled, k);
        filled[j] -= c * (r / d);
    }
    dist[j] = 0;
}

/// A witness that a semisimple element of the given shape lies in `T_ρ` up to conjugacy.
pub fn delta_membership(shape: &[(usize, usize)], rho: &Partition) -> Option<TorusAssignment> {
    all_assignment_classes(shape, rho).into_iter().next()
}

/// `z_ρ / Π_j z_{ρ^{(j)}}`, checked to be an integer. Summed over all assignment classes this is
/// the number of elements of `T_ρ^F` conjugate to the semisimple element.
pub fn weyl_index(shape: &[(usize, usize)], rho: &Partition, a: &TorusAssignment) -> Result<u128> {
    if a.parts.len() != shape.len() || a.parts.iter().zip(shape).any(|(p, &(_, m))| p.weight() != m) {
        return Err(Error::Invariant(format!("assignment {a:?} does not fit shape {shape:?}")));
    }
    let num = z_order(rho);
    let den: u128 = a.parts.iter().map(z_order).product();
    if num % den != 0 {
        return Err(Error::Invariant(format!("weyl index {num}/{den} is not integral for ρ = {rho}")));
    }
    Ok(num / den)
}

/// Explicit `T_ρ^F` and `𝔱_ρ^F` inside `GL_n(F_q)`, `gl_n(F_q)`: block-diagonal polynomials in
/// companion matrices of irreducibles of degree `ρ_i`, so each block is a copy of `F_{q^{ρ_i}}`.
#[derive(Clone, Debug)]
pub struct TwistedTorus {
    pub rho: Partition,
    pub generators: Vec<Matrix>,
    field: Field,
}

impl TwistedTorus {
    pub fn new(rho: &Partition, field: &Field) -> Result<Self> {
        let generators = rho
            .parts()
            .iter()
            .map(|&r| {
                Poly::irreducibles(r, field)
                    .into_iter()
                    .next()
                    .map(|p| Matrix::companion(&p, field))
                    .ok_or_else(|| Error::Internal(format!("no irreducible of degree {r}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rho: rho.clone(), generators, field: field.clone() })
    }

    /// Elements of `F_q[C]` for one block.
    fn block_field(&self, c: &Matrix) -> Vec<Matrix> {
        let f = &self.field;
        let r = c.n();
        let powers: Vec<Matrix> = (0..r).map(|k| c.pow(k as u64, f)).collect();
        let q = f.q();
        (0..q.pow(r as u32))
            .map(|mut idx| {
                let mut m = Matrix::zero(r);
                for p in &powers {
                    let a = (idx % q) as Elem;
                    idx /= q;
                    m = m.add(&p.scale(a, f), f);
                }
                m
            })
            .collect()
    }

    fn product(&self, nonzero: bool, budget: &Budget) -> Result<Vec<Matrix>> {
        let q = self.field.q() as u128;
        let size: u128 = self.rho.parts().iter().map(|&r| q.pow(r as u32) - u128::from(nonzero)).product();
        budget.check(&format!("torus T_{}", self.rho), size)?;
        let mut acc: Vec<Vec<Matrix>> = vec![vec![]];
        for c in &self.generators {
            let block: Vec<Matrix> = self.block_field(c).into_iter().filter(|m| !nonzero || !m.is_zero()).collect();
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    block.iter().map(move |b| {
                        let mut v = prefix.clone();
                        v.push(*b);
                        v
                    })
                })
                .collect();
        }
        let mut out: Vec<Matrix> = acc.iter().map(|blocks| Matrix::block_diag(blocks)).collect();
        out.sort();
        Ok(out)
    }

    /// `T_ρ^F`.
    pub fn group_elements(&self, budget: &Budget) -> Result<Vec<Matrix>> {
        self.product(true, budget)
    }

    /// `𝔱_ρ^F`.
    pub fn lie_elements(&self, budget: &Budget) -> Result<Vec<Matrix>> {
        self.product(false, budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{centralizer_order, Group};
    use crate::weyl::SpectralData;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn torus_orders() {
        assert_eq!(torus_order(&p(&[1, 1]), 3), 4);
        assert_eq!(torus_order(&p(&[2]), 2), 3);
        assert_eq!(torus_order_poly(&p(&[2, 1])).to_string(), "q^3-q^2-q+1");
        assert_eq!(lie_torus_order(&p(&[2, 1]), 3), 27);
    }

    #[test]
    fn relative_rank_examples() {
        let g2 = GroupSpec::gl(2, 2).unwrap();
        let g3 = GroupSpec::gl(3, 2).unwrap();
        assert_eq!(relative_ranks(&g2, &[1, 1]), (2, 2));
        assert_eq!(relative_ranks(&g3, &[2, 1]), (3, 3));
        assert_eq!(relative_ranks(&g3, &[3]), (3, 3));
    }

    #[test]
    fn delta_examples() {
        let split = [(1, 1), (1, 1)];
        assert!(delta_membership(&split, &p(&[1, 1])).is_some());
        assert!(delta_membership(&split, &p(&[2])).is_none());
        let nonsplit = [(2, 1)];
        assert!(delta_membership(&nonsplit, &p(&[2])).is_some());
        assert!(delta_membership(&nonsplit, &p(&[1, 1])).is_none());
        // central element sits in every torus
        for rho in Partition::all(3) {
            let a = delta_membership(&[(1, 3)], &rho).unwrap();
            assert_eq!(weyl_index(&[(1, 3)], &rho, &a).unwrap(), 1);
        }
    }

    #[test]
    fn weyl_index_examples() {
        let a = delta_membership(&[(2, 1)], &p(&[2])).unwrap();
        assert_eq!(weyl_index(&[(2, 1)], &p(&[2]), &a).unwrap(), 2);
        let a = delta_membership(&[(1, 1), (1, 1)], &p(&[1, 1])).unwrap();
        assert_eq!(weyl_index(&[(1, 1), (1, 1)], &p(&[1, 1]), &a).unwrap(), 2);
        // ρ = (2,1) with a repeated eigenvalue of multiplicity 3 in GL_3? one class
        let classes = all_assignment_classes(&[(1, 2), (1, 1)], &p(&[1, 1, 1]));
        assert_eq!(classes.len(), 1);
        assert_eq!(weyl_index(&[(1, 2), (1, 1)], &p(&[1, 1, 1]), &classes[0]).unwrap(), 3);
        // shape (1,2),(1,2) in GL_4 with ρ = (2,1,1): the 2-cycle may go to either factor
        let classes = all_assignment_classes(&[(1, 2), (1, 2)], &p(&[2, 1, 1]));
        assert_eq!(classes.len(), 2);
    }

    #[test]
    fn torus_sizes_and_fields() {
        for q in [2u32, 3] {
            let f = Field::of_order(q).unwrap();
            for n in 1..=3 {
                for rho in Partition::all(n) {
                    let t = TwistedTorus::new(&rho, &f).unwrap();
                    let g = t.group_elements(&Budget::default()).unwrap();
                    let l = t.lie_elements(&Budget::default()).unwrap();
                    assert_eq!(g.len() as u128, torus_order(&rho, q as u64));
                    assert_eq!(l.len() as u128, lie_torus_order(&rho, q as u64));
                    // closed under multiplication and commutative
                    for a in g.iter().take(6) {
                        for b in g.iter().take(6) {
                            assert!(g.binary_search(&a.mul(b, &f)).is_ok());
                            assert!(a.commutes_with(b, &f));
                        }
                    }
                }
            }
        }
    }

    /// Oracle: `|{h ∈ G^F : h s h⁻¹ ∈ T_ρ^F}| / |C_{G^F}(s)|`, against the sum of weyl indices
    /// over assignment classes (a single class in every case reachable at n ≤ 3).
    #[test]
    fn weyl_index_oracle() {
        for (n, q) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let spec = GroupSpec::gl(n, q).unwrap();
            let f = spec.field.clone();
            let g = Group::new(&spec, &Budget::default()).unwrap();
            for rho in Partition::all(n) {
                let torus = TwistedTorus::new(&rho, &f).unwrap().group_elements(&Budget::default()).unwrap();
                let mut seen = std::collections::HashSet::new();
                for s in &torus {
                    let sd = SpectralData::of_semisimple(s, &f).unwrap();
                    let mut key: Vec<_> = sd.factors.iter().map(|x| x.poly.coeffs().to_vec()).collect();
                    key.sort();
                    if !seen.insert(key) {
                        continue;
                    }
                    let shape = sd.shape();
                    let classes = all_assignment_classes(&shape, &rho);
                    assert!(!classes.is_empty(), "torus element must satisfy δ");
                    if n <= 3 {
                        assert_eq!(classes.len(), 1, "unique assignment class at n ≤ 3");
                    }
                    let idx: u128 = classes.iter().map(|a| weyl_index(&shape, &rho, a).unwrap()).sum();
                    let hits = g
                        .pairs()
                        .filter(|(h, hi)| torus.binary_search(&s.conjugate(h, hi, &f)).is_ok())
                        .count() as u128;
                    let cent = centralizer_order(s, &g) as u128;
                    assert_eq!(hits % cent, 0);
                    assert_eq!(hits / cent, idx, "GL{n}(F_{q}) ρ = {rho} s = {s:?}");
                    // conjugation invariance of δ
                    let (h, hi) = (g.elems[g.order() / 2], g.invs[g.order() / 2]);
                    let conj = SpectralData::of_semisimple(&s.conjugate(&h, &hi, &f), &f).unwrap();
                    assert_eq!(conj.shape(), shape);
                }
            }
        }
    }
}
