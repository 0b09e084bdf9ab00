use std::collections::HashMap;

use super::{rref, Group, Matrix, ParabolicSpec, Pattern};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Key of the coset `hP`: reduced row echelon forms of the spans of the first
/// `n_1`, `n_1 + n_2`, … columns of `h`.
pub fn flag_key(h: &Matrix, p: &ParabolicSpec, f: &Field) -> Vec<Elem> {
    let n = h.n();
    let mut key = Vec::new();
    let mut end = 0;
    for &size in &p.composition()[..p.composition().len() - 1] {
        end += size;
        let mut rows: Vec<Vec<Elem>> = (0..end).map(|j| (0..n).map(|i| h.get(i, j)).collect()).collect();
        rref(&mut rows, f);
        key.extend(rows.into_iter().flatten());
    }
    key
}

/// Left coset representatives of `G/P`, each the least group element of its coset.
#[derive(Clone, Debug)]
pub struct Transversal {
    pub parabolic: ParabolicSpec,
    pub reps: Vec<Matrix>,
    pub invs: Vec<Matrix>,
    field: Field,
}

impl Transversal {
    pub fn new(group: &Group, p: &ParabolicSpec) -> Result<Self> {
        let f = group.field();
        let mut index: HashMap<Vec<Elem>, usize> = HashMap::new();
        let (mut reps, mut invs) = (Vec::new(), Vec::new());
        for (h, hi) in group.pairs() {
            index.entry(flag_key(h, p, f)).or_insert_with(|| {
                reps.push(*h);
                invs.push(*hi);
                reps.len() - 1
            });
        }
        let expected = group.spec.order() / group.spec.parabolic_order(p);
        if reps.len() as u128 != expected {
            return Err(Error::Invariant(format!("found {} cosets of P, expected {expected}", reps.len())));
        }
        Ok(Self { parabolic: p.clone(), reps, invs, field: f.clone() })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Matrix, &Matrix)> {
        self.reps.iter().zip(&self.invs)
    }

    /// Number of cosets `hP` with `h⁻¹xh` inside `pattern`.
    pub fn count(&self, x: &Matrix, pattern: Pattern) -> u64 {
        self.pairs()
            .filter(|(h, hi)| self.parabolic.contains(pattern, &x.conjugate(hi, h, &self.field)))
            .count() as u64
    }

    /// The conjugates `h⁻¹xh` that land inside `pattern`.
    pub fn conjugates_in(&self, x: &Matrix, pattern: Pattern) -> Vec<Matrix> {
        self.pairs()
            .map(|(h, hi)| x.conjugate(hi, h, &self.field))
            .filter(|y| self.parabolic.contains(pattern, y))
            .collect()
    }
}

/// `f_P(g)`: number of `G`-conjugates of `P` containing `g`.
pub fn f_parabolic_group(g: &Matrix, t: &Transversal) -> u64 {
    t.count(g, Pattern::Parabolic)
}

/// `f_𝔭(x)`: number of conjugates of `𝔭` containing `x`.
pub fn f_parabolic_lie(x: &Matrix, t: &Transversal) -> u64 {
    t.count(x, Pattern::Parabolic)
}

/// `f_𝔫(x)`: number of conjugates of `𝔫` containing `x`.
pub fn f_nilradical_lie(x: &Matrix, t: &Transversal) -> u64 {
    t.count(x, Pattern::Nilradical)
}
