//! Green polynomials of `GL_n(F_q)` and the Deligne–Lusztig values built from them.
//!
//! `Q^λ_ρ(q)` is the value of `R_{T_ρ}(1)` at a unipotent element of Jordan type `λ`. It is
//! obtained from the Hall–Littlewood transition matrix as `Q^λ_ρ(q) = q^{n(λ)} X^λ_ρ(1/q)`.
//! Every table is checked on construction: integer coefficients, the trivial-character
//! identity `Σ_ρ Q^λ_ρ / z_ρ = 1`, and the Steinberg column `λ = (1^n)`.

mod symmetric;

pub use symmetric::{character, charge, hall_littlewood_transition, kostka_foulkes, reading_word, ssyt};

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::qpoly::{q_power_minus_one, QPoly, Rational};
use crate::weyl::{all_assignment_classes, torus_order_poly, weyl_index, z_order, Partition, TypeLabel};

pub const DEFAULT_BOUND: usize = 6;

/// Green polynomials `Q[λ][ρ]` for `GL_n`, rows and columns in [`Partition::all`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct GreenTable {
    pub n: usize,
    pub partitions: Vec<Partition>,
    pub entries: Vec<Vec<QPoly>>,
}

impl GreenTable {
    fn index(&self, p: &Partition) -> Result<usize> {
        self.partitions
            .iter()
            .position(|x| x == p)
            .ok_or_else(|| Error::Config(format!("{p} is not a partition of {}", self.n)))
    }

    pub fn get(&self, lambda: &Partition, rho: &Partition) -> Result<&QPoly> {
        Ok(&self.entries[self.index(lambda)?][self.index(rho)?])
    }

    pub fn value(&self, lambda: &Partition, rho: &Partition, q: i128) -> Result<i128> {
        self.get(lambda, rho)?.eval_integer(q)
    }

    /// CSV with `λ` down the rows and `ρ` across; partitions are quoted since they contain commas.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda\\rho");
        for rho in &self.partitions {
            s.push_str(&format!(",\"{rho}\""));
        }
        s.push('\n');
        for (lambda, row) in self.partitions.iter().zip(&self.entries) {
            s.push_str(&format!("\"{lambda}\""));
            for e in row {
                s.push(',');
                s.push_str(&e.to_string());
            }
            s.push('\n');
        }
        s
    }

    fn self_check(&self) -> Result<()> {
        let n = self.n;
        for (lambda, row) in self.partitions.iter().zip(&self.entries) {
            if let Some(bad) = row.iter().find(|e| !e.is_integral()) {
                return Err(Error::Invariant(format!("Green polynomial {bad} at λ = {lambda} is not integral")));
            }
            let avg: QPoly = self
                .partitions
                .iter()
                .zip(row)
                .map(|(rho, e)| e.scale(Rational::new(1, z_order(rho) as i128)))
                .sum();
            if avg != QPoly::one() {
                return Err(Error::Invariant(format!("trivial-character average at λ = {lambda} is {avg}, not 1")));
            }
        }
        for rho in &self.partitions {
            let expect = steinberg_closed_form(rho, n);
            let got = self.get(&Partition::ones(n), rho)?;
            if *got != expect {
                return Err(Error::Invariant(format!("Steinberg column at ρ = {rho}: {got} ≠ {expect}")));
            }
        }
        Ok(())
    }
}

fn build(n: usize, bound: usize) -> Result<GreenTable> {
    let x = hall_littlewood_transition(n, bound)?;
    let partitions = Partition::all(n);
    let entries = partitions
        .iter()
        .zip(x)
        .map(|(lambda, row)| row.into_iter().map(|p| p.reflect(lambda.n_lambda())).collect())
        .collect();
    let table = GreenTable { n, partitions, entries };
    table.self_check()?;
    Ok(table)
}

/// Green table for `GL_n` with the default bound; cached after the first call.
pub fn green_table(n: usize) -> Result<Arc<GreenTable>> {
    green_table_with_bound(n, DEFAULT_BOUND)
}

pub fn green_table_with_bound(n: usize, bound: usize) -> Result<Arc<GreenTable>> {
    if n > bound {
        return Err(Error::Bound { what: "Green table rank".into(), value: n, bound });
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GreenTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return Ok(t.clone());
    }
    let t = Arc::new(build(n, bound)?);
    cache.lock().unwrap().insert(n, t.clone());
    Ok(t)
}

/// `|GL_n(F_q)|_{p'} = Π_{k ≤ n} (q^k - 1)`.
pub fn gl_order_p_prime(n: usize) -> QPoly {
    (1..=n).fold(QPoly::one(), |acc, k| &acc * &q_power_minus_one(k))
}

fn steinberg_closed_form(rho: &Partition, n: usize) -> QPoly {
    let sign: i128 = if (n - rho.len()) % 2 == 0 { 1 } else { -1 };
    gl_order_p_prime(n)
        .div_exact(&torus_order_poly(rho))
        .expect("torus order divides the group order")
        .scale(sign.into())
}

/// `Q[(1^n)][ρ] = dim R_{T_ρ}(1)`, checked against `(-1)^{n-ℓ(ρ)} |GL_n|_{p'} / |T_ρ|`.
pub fn steinberg_value(rho: &Partition, n: usize) -> Result<QPoly> {
    let t = green_table(n)?;
    let v = t.get(&Partition::ones(n), rho)?.clone();
    let closed = steinberg_closed_form(rho, n);
    if v != closed {
        return Err(Error::Invariant(format!("Steinberg value {v} ≠ {closed}")));
    }
    Ok(v)
}

/// `R_{T_ρ}(1)` at an element of the given type, as a polynomial in `q`: a sum over assignment
/// classes of the Weyl index times `Π_j Q^{λ_j}_{ρ^{(j)}}(q^{d_j})`. Zero when the semisimple
/// part does not embed in `T_ρ`.
pub fn dl_value_poly(label: &TypeLabel, rho: &Partition) -> Result<QPoly> {
    let shape = label.shape();
    let mut total = QPoly::zero();
    for a in all_assignment_classes(&shape, rho) {
        let idx = weyl_index(&shape, rho, &a)?;
        let mut term = QPoly::constant((idx as i128).into());
        for (e, sub) in label.entries().iter().zip(&a.parts) {
            let table = green_table(e.m)?;
            term = &term * &table.get(&e.lambda, sub)?.compose_power(e.d);
        }
        total = &total + &term;
    }
    Ok(total)
}

pub fn dl_value(label: &TypeLabel, rho: &Partition, q: u64) -> Result<i128> {
    dl_value_poly(label, rho)?.eval_integer(q as i128)
}

/// `(1/|W_L|) Σ_{w ∈ W_L} R_{T_w}(1)` at a type, for the Levi of the given composition.
pub fn levi_average_poly(label: &TypeLabel, composition: &[usize]) -> Result<QPoly> {
    let mut acc = QPoly::zero();
    for c in crate::weyl::levi_weyl_classes(composition) {
        acc = &acc + &dl_value_poly(label, &c.rho)?.scale(c.weight);
    }
    Ok(acc)
}

/// Exact rational value of the Levi average at `q`.
pub fn levi_average(label: &TypeLabel, composition: &[usize], q: u64) -> Result<Rational> {
    Ok(levi_average_poly(label, composition)?.eval_int(q as i128))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{f_parabolic_group, Budget, Group, GroupSpec, Matrix, ParabolicSpec, Transversal};
    use num_traits::Zero;
    use crate::weyl::{nilpotent_of_type, unipotent_centralizer_order, TypeEntry};

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn gl2_table() {
        let t = green_table(2).unwrap();
        assert_eq!(t.get(&p(&[1, 1]), &p(&[1, 1])).unwrap().to_string(), "q+1");
        assert_eq!(t.get(&p(&[1, 1]), &p(&[2])).unwrap().to_string(), "1-q");
        assert_eq!(t.get(&p(&[2]), &p(&[1, 1])).unwrap().to_string(), "1");
        assert_eq!(t.get(&p(&[2]), &p(&[2])).unwrap().to_string(), "1");
        assert_eq!(t.to_csv(), "lambda\\rho,\"[2]\",\"[1,1]\"\n\"[2]\",1,1\n\"[1,1]\",1-q,q+1\n");
        assert_eq!(green_table(1).unwrap().entries, vec![vec![QPoly::one()]]);
        assert!(matches!(green_table(7), Err(Error::Bound { .. })));
    }

    #[test]
    fn tables_up_to_bound_pass_self_checks() {
        for n in 1..=DEFAULT_BOUND {
            green_table(n).unwrap();
        }
    }

    #[test]
    fn steinberg_examples() {
        assert_eq!(steinberg_value(&p(&[1, 1]), 2).unwrap().to_string(), "q+1");
        assert_eq!(steinberg_value(&p(&[2]), 2).unwrap().to_string(), "1-q");
        assert_eq!(steinberg_value(&p(&[1]), 1).unwrap(), QPoly::one());
    }

    /// `Σ_λ Q^λ_ρ Q^λ_σ / |C(u_λ)| = δ_{ρσ} z_ρ / |T_ρ|` at several q.
    #[test]
    fn green_orthogonality() {
        for n in 1..=5 {
            let t = green_table(n).unwrap();
            for q in [2i128, 3, 4, 5] {
                for (j, rho) in t.partitions.iter().enumerate() {
                    for (k, sigma) in t.partitions.iter().enumerate() {
                        let s: Rational = t
                            .partitions
                            .iter()
                            .enumerate()
                            .map(|(i, lam)| {
                                t.entries[i][j].eval_int(q) * t.entries[i][k].eval_int(q)
                                    / unipotent_centralizer_order(lam).eval_int(q)
                            })
                            .sum();
                        let expect = if j == k {
                            Rational::from_integer(z_order(rho) as i128) / torus_order_poly(rho).eval_int(q)
                        } else {
                            Rational::zero()
                        };
                        assert_eq!(s, expect, "n={n} q={q} ρ={rho} σ={sigma}");
                    }
                }
            }
        }
    }

    fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
        let n = b.len();
        for c in 0..n {
            let piv = (c..n).find(|&r| !a[r][c].is_zero()).expect("invertible system");
            a.swap(piv, c);
            b.swap(piv, c);
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c] / a[c][c];
                    for k in 0..n {
                        let v = a[c][k];
                        a[r][k] -= f * v;
                    }
                    let v = b[c];
                    b[r] -= f * v;
                }
            }
        }
        (0..n).map(|i| b[i] / a[i][i]).collect()
    }

    /// Cycle types of the elements of the Young subgroup `S_μ`, by enumerating permutations.
    fn young_cycle_counts(mu: &Partition, parts: &[Partition]) -> Vec<Rational> {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for pos in 0..=p.len() {
                    let mut v = p.clone();
                    v.insert(pos, k - 1);
                    out.push(v);
                }
            }
            out
        }
        fn cycle_type(perm: &[usize]) -> Partition {
            let mut seen = vec![false; perm.len()];
            let mut v = Vec::new();
            for s in 0..perm.len() {
                let mut len = 0;
                let mut i = s;
                while !seen[i] {
                    seen[i] = true;
                    i = perm[i];
                    len += 1;
                }
                v.push(len);
            }
            Partition::new(v)
        }
        let mut counts = vec![Rational::zero(); parts.len()];
        let mut elems: Vec<Vec<usize>> = vec![vec![]];
        for &b in mu.parts() {
            elems = elems
                .into_iter()
                .flat_map(|e| {
                    perms(b).into_iter().map(move |p| {
                        let off = e.len();
                        let mut v = e.clone();
                        v.extend(p.iter().map(|x| x + off));
                        v
                    })
                })
                .collect();
        }
        let total = elems.len() as i128;
        for e in &elems {
            let ct = cycle_type(e);
            counts[parts.iter().position(|p| *p == ct).unwrap()] += Rational::new(1, total);
        }
        counts
    }

    /// Oracle: for each Young parabolic `P_μ`, `f_{P_μ}(u_λ) = (1/|S_μ|) Σ_{w ∈ S_μ} Q^λ_{ρ(w)}`.
    /// Brute-force coset counts on the left determine every `Q^λ_ρ(q)`.
    #[test]
    fn green_table_matches_flag_counts() {
        for (n, q) in [(2usize, 2u32), (2, 3), (2, 5), (3, 2), (3, 3)] {
            let spec = GroupSpec::gl(n, q).unwrap();
            let g = Group::new(&spec, &Budget::default()).unwrap();
            let parts = Partition::all(n);
            let table = green_table(n).unwrap();
            let transversals: Vec<Transversal> = parts
                .iter()
                .map(|mu| Transversal::new(&g, &ParabolicSpec::new(mu.parts().to_vec()).unwrap()).unwrap())
                .collect();
            let a: Vec<Vec<Rational>> = parts.iter().map(|mu| young_cycle_counts(mu, &parts)).collect();
            for lambda in &parts {
                let u = nilpotent_of_type(lambda).add(&Matrix::identity(n), &spec.field);
                let b: Vec<Rational> =
                    transversals.iter().map(|t| Rational::from_integer(f_parabolic_group(&u, t) as i128)).collect();
                let x = solve(a.clone(), b);
                for (rho, v) in parts.iter().zip(x) {
                    assert_eq!(v, table.get(lambda, rho).unwrap().eval_int(q as i128), "n={n} q={q} λ={lambda} ρ={rho}");
                }
                // Borel column: number of fixed flags
                let borel = &transversals[parts.len() - 1];
                assert_eq!(
                    f_parabolic_group(&u, borel) as i128,
                    table.value(lambda, &Partition::ones(n), q as i128).unwrap()
                );
            }
        }
    }

    #[test]
    fn dl_value_examples() {
        let split: TypeLabel = "{(1,1):[1];(1,1):[1]}".parse().unwrap();
        let nonsplit: TypeLabel = "{(2,1):[1]}".parse().unwrap();
        assert_eq!(dl_value(&split, &p(&[1, 1]), 3).unwrap(), 2);
        assert_eq!(dl_value(&nonsplit, &p(&[1, 1]), 3).unwrap(), 0);
        assert_eq!(dl_value(&nonsplit, &p(&[2]), 3).unwrap(), 2);
        // central types recover the Green polynomial itself
        let central = TypeLabel::new(vec![TypeEntry { d: 1, m: 2, lambda: p(&[1, 1]) }]).unwrap();
        assert_eq!(dl_value_poly(&central, &p(&[2])).unwrap().to_string(), "1-q");
    }

    /// Trivial-character decomposition: the `W_G` average is 1 on every type of `GL_n`, n ≤ 4.
    #[test]
    fn trivial_decomposition_all_types() {
        for n in 1..=4 {
            for t in crate::weyl::enumerate_types(n, None) {
                assert_eq!(levi_average_poly(&t, &[n]).unwrap(), QPoly::one(), "{t}");
            }
        }
    }
}
