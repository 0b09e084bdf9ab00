use crate::error::{Error, Result};
use crate::qpoly::QPoly;
use crate::weyl::Partition;

/// Irreducible character `χ^μ` of `S_n` at cycle type `ρ`, by Murnaghan–Nakayama on beta-sets.
pub fn character(mu: &Partition, rho: &Partition) -> i64 {
    assert_eq!(mu.weight(), rho.weight(), "character needs partitions of the same size");
    let l = mu.len();
    let beta: Vec<usize> = mu.parts().iter().enumerate().map(|(i, &p)| p + l - 1 - i).collect();
    mn(beta, rho.parts())
}

fn mn(beta: Vec<usize>, rho: &[usize]) -> i64 {
    let Some((&r, rest)) = rho.split_first() else { return 1 };
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let between = beta.iter().filter(|&&c| c > b - r && c < b).count();
        let mut next = beta.clone();
        next[i] = b - r;
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * mn(next, rest);
    }
    total
}

/// Semistandard tableaux of shape `μ` and content `λ`, as rows of entries `1..=ℓ(λ)`.
pub fn ssyt(mu: &Partition, content: &Partition) -> Vec<Vec<Vec<usize>>> {
    if mu.weight() != content.weight() {
        return vec![];
    }
    let rows = mu.len();
    let mut out = Vec::new();
    // shapes ν^(0) ⊂ ν^(1) ⊂ … with ν^(i)/ν^(i-1) a horizontal strip of size λ_i
    fn rec(
        i: usize,
        shape: Vec<usize>,
        mu: &[usize],
        content: &[usize],
        tab: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if i == content.len() {
            if shape == mu {
                out.push(tab.clone());
            }
            return;
        }
        let mut add = vec![0; mu.len()];
        strips(0, content[i], &shape, mu, &mut add, &mut |add| {
            let next: Vec<usize> = shape.iter().zip(add).map(|(s, a)| s + a).collect();
            for (r, &a) in add.iter().enumerate() {
                tab[r].extend(std::iter::repeat_n(i + 1, a));
            }
            rec(i + 1, next, mu, content, tab, out);
            for (r, &a) in add.iter().enumerate() {
                let len = tab[r].len();
                tab[r].truncate(len - a);
            }
        });
    }
    fn strips(
        r: usize,
        left: usize,
        shape: &[usize],
        mu: &[usize],
        add: &mut Vec<usize>,
        k: &mut dyn FnMut(&[usize]),
    ) {
        if r == mu.len() {
            if left == 0 {
                k(add);
            }
            return;
        }
        // horizontal strip: row r may grow up to the old length of row r-1
        let cap = if r == 0 { mu[0] } else { shape[r - 1].min(mu[r]) };
        let max = cap.saturating_sub(shape[r]).min(left);
        for a in 0..=max {
            add[r] = a;
            strips(r + 1, left - a, shape, mu, add, k);
        }
        add[r] = 0;
    }
    let mut tab = vec![Vec::new(); rows];
    rec(0, vec![0; rows], mu.parts(), content.parts(), &mut tab, &mut out);
    out
}

/// Charge of a word whose content is a partition, by cyclic extraction of standard subwords.
pub fn charge(word: &[usize]) -> usize {
    let mut alive = vec![true; word.len()];
    let mut remaining = word.len();
    let mut total = 0;
    while remaining > 0 {
        let top = (1..).take_while(|&k| word.iter().zip(&alive).any(|(&w, &a)| a && w == k)).last().unwrap_or(0);
        let mut pos = word.len();
        let mut index = 0;
        for letter in 1..=top {
            // scan leftwards cyclically from pos for the next live occurrence of `letter`
            let mut i = pos;
            let mut wrapped = false;
            loop {
                if i == 0 {
                    i = word.len();
                    wrapped = true;
                }
                i -= 1;
                if alive[i] && word[i] == letter {
                    break;
                }
            }
            if wrapped && letter > 1 {
                index += 1;
            }
            total += index;
            alive[i] = false;
            remaining -= 1;
            pos = i;
        }
    }
    total
}

/// Reading word: rows from bottom to top, each left to right.
pub fn reading_word(tab: &[Vec<usize>]) -> Vec<usize> {
    tab.iter().rev().flatten().copied().collect()
}

/// Kostka–Foulkes polynomial `K_{μλ}(t) = Σ_{T ∈ SSYT(μ, λ)} t^{charge(T)}`.
pub fn kostka_foulkes(mu: &Partition, lambda: &Partition) -> QPoly {
    ssyt(mu, lambda)
        .iter()
        .map(|t| QPoly::monomial(1.into(), charge(&reading_word(t))))
        .sum()
}

/// Transition matrix `X[λ][ρ](t)` with `p_ρ = Σ_λ X^λ_ρ(t) P_λ(x; t)`, computed as
/// `Σ_μ χ^μ_ρ K_{μλ}(t)`. Rows and columns follow [`Partition::all`].
pub fn hall_littlewood_transition(n: usize, bound: usize) -> Result<Vec<Vec<QPoly>>> {
    if n > bound {
        return Err(Error::Bound { what: "Hall–Littlewood rank".into(), value: n, bound });
    }
    let parts = Partition::all(n);
    let chars: Vec<Vec<i64>> = parts.iter().map(|mu| parts.iter().map(|rho| character(mu, rho)).collect()).collect();
    Ok(parts
        .iter()
        .map(|lambda| {
            let k: Vec<QPoly> = parts.iter().map(|mu| kostka_foulkes(mu, lambda)).collect();
            (0..parts.len())
                .map(|j| (0..parts.len()).map(|i| k[i].scale((chars[i][j] as i128).into())).sum())
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::z_order;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn s3_character_table() {
        let parts = Partition::all(3);
        let table: Vec<Vec<i64>> = parts.iter().map(|mu| parts.iter().map(|r| character(mu, r)).collect()).collect();
        assert_eq!(table, vec![vec![1, 1, 1], vec![-1, 0, 2], vec![1, -1, 1]]);
        assert_eq!(character(&p(&[2]), &p(&[2])), 1);
        assert_eq!(character(&p(&[1, 1]), &p(&[2])), -1);
    }

    #[test]
    fn character_orthogonality() {
        for n in 1..=6 {
            let parts = Partition::all(n);
            let fact: i128 = (1..=n as i128).product();
            for a in &parts {
                for b in &parts {
                    let s: i128 = parts
                        .iter()
                        .map(|r| (character(a, r) * character(b, r)) as i128 * fact / z_order(r) as i128)
                        .sum();
                    assert_eq!(s, if a == b { fact } else { 0 });
                }
            }
        }
    }

    #[test]
    fn charge_examples() {
        assert_eq!(charge(&[1, 2]), 1);
        assert_eq!(charge(&[2, 1]), 0);
        assert_eq!(charge(&[3, 1, 2]), 2);
        assert_eq!(charge(&[2, 1, 3]), 1);
        assert_eq!(charge(&[1, 1, 2]), 1);
    }

    #[test]
    fn kostka_foulkes_examples() {
        assert_eq!(kostka_foulkes(&p(&[2, 1]), &p(&[1, 1, 1])).to_string(), "t^2+t".replace('t', "q"));
        assert_eq!(kostka_foulkes(&p(&[3]), &p(&[2, 1])), QPoly::q());
        assert_eq!(kostka_foulkes(&p(&[3]), &p(&[1, 1, 1])), QPoly::monomial(1.into(), 3));
        assert_eq!(kostka_foulkes(&p(&[2, 1]), &p(&[2, 1])), QPoly::one());
        assert_eq!(kostka_foulkes(&p(&[2, 2]), &p(&[2, 1, 1])), QPoly::q());
        assert_eq!(kostka_foulkes(&p(&[3, 1]), &p(&[2, 1, 1])), QPoly::from_ints(&[0, 1, 1]));
    }

    #[test]
    fn kostka_foulkes_structure() {
        for n in 1..=6 {
            for mu in Partition::all(n) {
                for lambda in Partition::all(n) {
                    let k = kostka_foulkes(&mu, &lambda);
                    if mu == lambda {
                        assert_eq!(k, QPoly::one());
                    } else if !lambda.dominated_by(&mu) {
                        assert!(k.is_zero());
                    } else {
                        // monic of degree n(λ) - n(μ), nonnegative coefficients
                        assert_eq!(k.degree(), Some(lambda.n_lambda() - mu.n_lambda()), "{mu} {lambda}");
                        assert!(k.coeffs().iter().all(|c| *c >= 0.into()));
                    }
                    // t = 1 gives the Kostka number: number of SSYT
                    assert_eq!(k.eval_int(1), (ssyt(&mu, &lambda).len() as i128).into());
                }
            }
        }
    }

    /// Coefficient of `m_λ` in `p_ρ`: ordered ways to split the parts of ρ into blocks of sums λ_i.
    fn power_to_monomial(lambda: &Partition, rho: &Partition) -> i128 {
        fn rec(i: usize, rho: &[usize], left: &mut Vec<usize>) -> i128 {
            if i == rho.len() {
                return i128::from(left.iter().all(|&x| x == 0));
            }
            let mut t = 0;
            for b in 0..left.len() {
                if left[b] >= rho[i] {
                    left[b] -= rho[i];
                    t += rec(i + 1, rho, left);
                    left[b] += rho[i];
                }
            }
            t
        }
        rec(0, rho.parts(), &mut lambda.parts().to_vec())
    }

    #[test]
    fn transition_specializations() {
        assert_eq!(hall_littlewood_transition(1, 6).unwrap(), vec![vec![QPoly::one()]]);
        for n in 2..=5 {
            let parts = Partition::all(n);
            let x = hall_littlewood_transition(n, 6).unwrap();
            for (i, lambda) in parts.iter().enumerate() {
                for (j, rho) in parts.iter().enumerate() {
                    assert_eq!(x[i][j].eval_int(0), (character(lambda, rho) as i128).into());
                    assert_eq!(x[i][j].eval_int(1), power_to_monomial(lambda, rho).into());
                }
            }
        }
        assert!(matches!(hall_littlewood_transition(7, 6), Err(Error::Bound { .. })));
    }
}
