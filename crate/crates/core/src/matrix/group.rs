use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Matrix, MAX_N};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    GL,
    SL,
}

/// `GL_n(F_q)` or `SL_n(F_q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub n: usize,
    pub field: Field,
}

/// Element-count ceiling for every enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_elements: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_elements: 10_000_000 }
    }
}

impl Budget {
    pub fn new(max_elements: u64) -> Self {
        Self { max_elements }
    }

    pub fn check(&self, what: &str, size: u128) -> Result<()> {
        if size > self.max_elements as u128 {
            Err(Error::Budget { what: what.to_string(), size, budget: self.max_elements })
        } else {
            Ok(())
        }
    }
}

/// Parabolic given by a composition `(n_1, …, n_k)` of `n`: block upper triangular
/// `P`, block diagonal Levi `L`, strictly block upper unipotent radical `U`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParabolicSpec {
    composition: Vec<usize>,
}

/// Which block pattern to enumerate or test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// Entries with `block(i) <= block(j)`.
    Parabolic,
    /// Entries with `block(i) == block(j)`.
    Levi,
    /// Entries with `block(i) < block(j)`.
    Nilradical,
    /// No constraint.
    Full,
}

impl ParabolicSpec {
    pub fn new(composition: Vec<usize>) -> Result<Self> {
        if composition.is_empty() || composition.contains(&0) {
            return Err(Error::Config(format!("invalid composition {composition:?}")));
        }
        Ok(Self { composition })
    }

    pub fn borel(n: usize) -> Self {
        Self { composition: vec![1; n] }
    }

    pub fn whole(n: usize) -> Self {
        Self { composition: vec![n] }
    }

    pub fn composition(&self) -> &[usize] {
        &self.composition
    }

    pub fn n(&self) -> usize {
        self.composition.iter().sum()
    }

    /// Block index of each row/column.
    pub fn blocks(&self) -> Vec<usize> {
        self.composition
            .iter()
            .enumerate()
            .flat_map(|(b, &size)| std::iter::repeat_n(b, size))
            .collect()
    }

    /// Starting row of each block.
    pub fn offsets(&self) -> Vec<usize> {
        self.composition
            .iter()
            .scan(0, |acc, &s| {
                let start = *acc;
                *acc += s;
                Some(start)
            })
            .collect()
    }

    pub fn allows(&self, pattern: Pattern, i: usize, j: usize) -> bool {
        let b = self.blocks();
        allowed(pattern, b[i], b[j])
    }

    /// True iff every entry outside the pattern vanishes.
    pub fn contains(&self, pattern: Pattern, m: &Matrix) -> bool {
        let b = self.blocks();
        let n = m.n();
        (0..n).all(|i| (0..n).all(|j| allowed(pattern, b[i], b[j]) || m.get(i, j) == 0))
    }

    /// Levi projection: keep the diagonal blocks.
    pub fn levi_part(&self, m: &Matrix) -> Matrix {
        let b = self.blocks();
        let n = m.n();
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                if b[i] == b[j] {
                    out.set(i, j, m.get(i, j));
                }
            }
        }
        out
    }

    /// Diagonal blocks of a matrix as separate matrices.
    pub fn levi_blocks(&self, m: &Matrix) -> Vec<Matrix> {
        self.offsets().iter().zip(&self.composition).map(|(&o, &s)| m.block(o, s)).collect()
    }

    /// Dimension of `U` (and of `𝔫`).
    pub fn nilradical_dim(&self) -> usize {
        let n = self.n();
        let sq: usize = self.composition.iter().map(|s| s * s).sum();
        (n * n - sq) / 2
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.composition.iter().map(|s| s.to_string()).collect();
        parts.join(",")
    }
}

impl FromStr for ParabolicSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("composition {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl fmt::Display for ParabolicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.label())
    }
}

fn allowed(pattern: Pattern, bi: usize, bj: usize) -> bool {
    match pattern {
        Pattern::Parabolic => bi <= bj,
        Pattern::Levi => bi == bj,
        Pattern::Nilradical => bi < bj,
        Pattern::Full => true,
    }
}

fn gl_order(n: usize, q: u128) -> u128 {
    let qn = q.pow(n as u32);
    (0..n).map(|i| qn - q.pow(i as u32)).product()
}

impl GroupSpec {
    pub fn new(kind: GroupKind, n: usize, field: Field) -> Result<Self> {
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::Config(format!("rank {n} outside 1..={MAX_N}")));
        }
        Ok(Self { kind, n, field })
    }

    pub fn gl(n: usize, q: u32) -> Result<Self> {
        Self::new(GroupKind::GL, n, Field::of_order(q)?)
    }

    pub fn sl(n: usize, q: u32) -> Result<Self> {
        Self::new(GroupKind::SL, n, Field::of_order(q)?)
    }

    pub fn q(&self) -> usize {
        self.field.q()
    }

    pub fn label(&self) -> String {
        let k = match self.kind {
            GroupKind::GL => "GL",
            GroupKind::SL => "SL",
        };
        format!("{k}{}(F_{})", self.n, self.q())
    }

    fn check_parabolic(&self, p: &ParabolicSpec) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::Config(format!("composition {p} does not sum to {}", self.n)));
        }
        Ok(())
    }

    fn det_divisor(&self) -> u128 {
        match self.kind {
            GroupKind::GL => 1,
            GroupKind::SL => self.q() as u128 - 1,
        }
    }

    pub fn order(&self) -> u128 {
        gl_order(self.n, self.q() as u128) / self.det_divisor()
    }

    pub fn levi_order(&self, p: &ParabolicSpec) -> u128 {
        let q = self.q() as u128;
        p.composition().iter().map(|&s| gl_order(s, q)).product::<u128>() / self.det_divisor()
    }

    pub fn unipotent_order(&self, p: &ParabolicSpec) -> u128 {
        (self.q() as u128).pow(p.nilradical_dim() as u32)
    }

    pub fn parabolic_order(&self, p: &ParabolicSpec) -> u128 {
        self.levi_order(p) * self.unipotent_order(p)
    }

    pub fn lie_dim(&self) -> usize {
        match self.kind {
            GroupKind::GL => self.n * self.n,
            GroupKind::SL => self.n * self.n - 1,
        }
    }

    pub fn lie_order(&self) -> u128 {
        (self.q() as u128).pow(self.lie_dim() as u32)
    }

    fn in_group(&self, m: &Matrix) -> bool {
        let d = m.det(&self.field);
        match self.kind {
            GroupKind::GL => d != 0,
            GroupKind::SL => d == 1,
        }
    }

    fn in_lie(&self, m: &Matrix) -> bool {
        match self.kind {
            GroupKind::GL => true,
            GroupKind::SL => m.trace(&self.field) == 0,
        }
    }

    /// Enumerates matrices with the given free pattern and fixed diagonal (if any),
    /// in increasing canonical order.
    fn scan(&self, pattern: Pattern, p: &ParabolicSpec, unit_diagonal: bool, keep: impl Fn(&Matrix) -> bool) -> Vec<Matrix> {
        let n = self.n;
        let q = self.q();
        let blocks = p.blocks();
        let free: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| allowed(pattern, blocks[i], blocks[j]) && !(unit_diagonal && i == j))
            .collect();
        let mut base = Matrix::zero(n);
        if unit_diagonal {
            base = Matrix::identity(n);
        }
        let mut out = Vec::new();
        let mut digits = vec![0usize; free.len()];
        loop {
            let mut m = base;
            for (&(i, j), &d) in free.iter().zip(&digits) {
                m.set(i, j, d as Elem);
            }
            if keep(&m) {
                out.push(m);
            }
            // odometer, last free position least significant
            let mut pos = free.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < q {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    pub fn enumerate_group(&self, budget: &Budget) -> Result<Vec<Matrix>> {
        budget.check(&self.label(), self.order())?;
        let whole = ParabolicSpec::whole(self.n);
        Ok(self.scan(Pattern::Full, &whole, false, |m| self.in_group(m)))
    }

    pub fn enumerate_parabolic(&self, p: &ParabolicSpec, budget: &Budget) -> Result<Vec<Matrix>> {
        self.check_parabolic(p)?;
        budget.check("parabolic subgroup", self.parabolic_order(p))?;
        Ok(self.scan(Pattern::Parabolic, p, false, |m| self.in_group(m)))
    }

    pub fn enumerate_levi(&self, p: &ParabolicSpec, budget: &Budget) -> Result<Vec<Matrix>> {
        self.check_parabolic(p)?;
        budget.check("Levi subgroup", self.levi_order(p))?;
        Ok(self.scan(Pattern::Levi, p, false, |m| self.in_group(m)))
    }

    pub fn enumerate_unipotent_radical(&self, p: &ParabolicSpec, budget: &Budget) -> Result<Vec<Matrix>> {
        self.check_parabolic(p)?;
        budget.check("unipotent radical", self.unipotent_order(p))?;
        Ok(self.scan(Pattern::Nilradical, p, true, |_| true))
    }

    pub fn enumerate_lie(&self, budget: &Budget) -> Result<Vec<Matrix>> {
        budget.check("Lie algebra", self.lie_order())?;
        let whole = ParabolicSpec::whole(self.n);
        Ok(self.scan(Pattern::Full, &whole, false, |m| self.in_lie(m)))
    }

    pub fn enumerate_lie_parabolic(&self, p: &ParabolicSpec, budget: &Budget) -> Result<Vec<Matrix>> {
        self.enumerate_lie_pattern(p, Pattern::Parabolic, budget)
    }

    pub fn enumerate_lie_levi(&self, p: &ParabolicSpec, budget: &Budget) -> Result<Vec<Matrix>> {
        self.enumerate_lie_pattern(p, Pattern::Levi, budget)
    }

    pub fn enumerate_nilradical(&self, p: &ParabolicSpec, budget: &Budget) -> Result<Vec<Matrix>> {
        self.enumerate_lie_pattern(p, Pattern::Nilradical, budget)
    }

    fn enumerate_lie_pattern(&self, p: &ParabolicSpec, pattern: Pattern, budget: &Budget) -> Result<Vec<Matrix>> {
        self.check_parabolic(p)?;
        let blocks = p.blocks();
        let dim = (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| allowed(pattern, blocks[i], blocks[j]))
            .count();
        budget.check("Lie subalgebra", (self.q() as u128).pow(dim as u32))?;
        Ok(self.scan(pattern, p, false, |m| self.in_lie(m)))
    }

    /// The trace form on the Lie algebra is nondegenerate. For `gl_n` always; for
    /// `sl_n` exactly when `p ∤ n`. Decided by the rank of the Gram matrix.
    pub fn trace_form_nondegenerate(&self) -> bool {
        let f = &self.field;
        let n = self.n;
        let mut basis: Vec<Matrix> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    basis.push(Matrix::unit(n, i, j));
                }
            }
        }
        match self.kind {
            GroupKind::GL => basis.extend((0..n).map(|i| Matrix::unit(n, i, i))),
            GroupKind::SL => {
                for i in 0..n.saturating_sub(1) {
                    let mut h = Matrix::unit(n, i, i);
                    h.set(i + 1, i + 1, f.neg(1));
                    basis.push(h);
                }
            }
        }
        let gram: Vec<Vec<Elem>> = basis
            .iter()
            .map(|a| basis.iter().map(|b| a.mul(b, f).trace(f)).collect())
            .collect();
        super::rank(gram, f) == basis.len()
    }

    pub fn require_nondegenerate_form(&self) -> Result<()> {
        if self.trace_form_nondegenerate() {
            Ok(())
        } else {
            Err(Error::DegenerateForm { p: self.field.p(), n: self.n })
        }
    }
}

/// An enumerated group with cached inverses.
#[derive(Clone, Debug)]
pub struct Group {
    pub spec: GroupSpec,
    pub elems: Vec<Matrix>,
    pub invs: Vec<Matrix>,
}

impl Group {
    pub fn new(spec: &GroupSpec, budget: &Budget) -> Result<Self> {
        let elems = spec.enumerate_group(budget)?;
        Self::from_elements(spec, elems)
    }

    pub fn from_elements(spec: &GroupSpec, elems: Vec<Matrix>) -> Result<Self> {
        let invs = elems.iter().map(|g| g.inverse(&spec.field)).collect::<Result<Vec<_>>>()?;
        Ok(Self { spec: spec.clone(), elems, invs })
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn field(&self) -> &Field {
        &self.spec.field
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Matrix, &Matrix)> {
        self.elems.iter().zip(&self.invs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        let b = Budget::default();
        assert_eq!(GroupSpec::gl(2, 2).unwrap().enumerate_group(&b).unwrap().len(), 6);
        assert_eq!(GroupSpec::gl(2, 3).unwrap().enumerate_group(&b).unwrap().len(), 48);
        assert_eq!(GroupSpec::gl(3, 2).unwrap().enumerate_group(&b).unwrap().len(), 168);
        assert_eq!(GroupSpec::sl(2, 3).unwrap().enumerate_group(&b).unwrap().len(), 24);
        let g = GroupSpec::gl(2, 4).unwrap();
        assert_eq!(g.enumerate_group(&b).unwrap().len() as u128, g.order());
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let g = GroupSpec::gl(2, 3).unwrap();
        let elems = g.enumerate_group(&Budget::default()).unwrap();
        assert!(elems.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn parabolic_pieces() {
        let b = Budget::default();
        let g = GroupSpec::gl(2, 3).unwrap();
        let borel = ParabolicSpec::borel(2);
        assert_eq!(g.enumerate_parabolic(&borel, &b).unwrap().len(), 12);
        let g2 = GroupSpec::gl(2, 2).unwrap();
        assert_eq!(g2.enumerate_parabolic(&borel, &b).unwrap().len(), 2);
        let nil = g2.enumerate_nilradical(&borel, &b).unwrap();
        assert_eq!(nil, vec![Matrix::zero(2), Matrix::unit(2, 0, 1)]);
        for (n, q, comp) in [(3, 2, vec![2, 1]), (3, 3, vec![1, 1, 1]), (3, 2, vec![1, 2])] {
            let g = GroupSpec::gl(n, q).unwrap();
            let p = ParabolicSpec::new(comp).unwrap();
            let pp = g.enumerate_parabolic(&p, &b).unwrap().len();
            let l = g.enumerate_levi(&p, &b).unwrap().len();
            let u = g.enumerate_unipotent_radical(&p, &b).unwrap().len();
            assert_eq!(pp, l * u);
            assert_eq!(pp as u128, g.parabolic_order(&p));
        }
    }

    #[test]
    fn budget_refusal_reports_order() {
        let g = GroupSpec::gl(3, 3).unwrap();
        let err = g.enumerate_group(&Budget::new(1000)).unwrap_err();
        assert!(err.to_string().contains("11232"), "{err}");
    }

    #[test]
    fn trace_form() {
        assert!(GroupSpec::gl(2, 2).unwrap().trace_form_nondegenerate());
        assert!(!GroupSpec::sl(2, 2).unwrap().trace_form_nondegenerate());
        assert!(GroupSpec::sl(2, 3).unwrap().trace_form_nondegenerate());
        assert!(!GroupSpec::sl(3, 3).unwrap().trace_form_nondegenerate());
        let err = GroupSpec::sl(2, 2).unwrap().require_nondegenerate_form().unwrap_err();
        assert!(err.to_string().starts_with("κ degenerate: p | n"));
    }

    #[test]
    fn composition_parsing() {
        let p: ParabolicSpec = "2,1".parse().unwrap();
        assert_eq!(p.composition(), &[2, 1]);
        assert!("2,0".parse::<ParabolicSpec>().is_err());
        assert!(GroupSpec::gl(2, 2).unwrap().enumerate_parabolic(&p, &Budget::default()).is_err());
    }
}
