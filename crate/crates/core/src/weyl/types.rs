use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::torus::all_assignment_classes;
use super::{levi_weyl_classes, Partition};
use crate::error::{Error, Result};
use crate::field::{Field, Poly};
use crate::matrix::{jordan_add, jordan_mult, rank, Matrix};
use crate::qpoly::{q_power_minus_one, QPoly};

/// Group elements versus Lie-algebra elements. They differ only in whether the
/// eigenvalue `0` (the factor `x`) is allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    Group,
    Lie,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralFactor {
    pub poly: Poly,
    pub d: usize,
    pub m: usize,
}

/// Factorization of the characteristic polynomial of a semisimple element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralData {
    pub factors: Vec<SpectralFactor>,
}

impl SpectralData {
    pub fn of_semisimple(s: &Matrix, f: &Field) -> Result<Self> {
        let factors = s
            .charpoly(f)
            .factor(f)?
            .into_iter()
            .map(|(poly, m)| SpectralFactor { d: poly.degree().unwrap(), poly, m })
            .collect();
        Ok(Self { factors })
    }

    pub fn shape(&self) -> Vec<(usize, usize)> {
        self.factors.iter().map(|s| (s.d, s.m)).collect()
    }
}

/// One centralizer factor `GL_m(F_{q^d})` with the Jordan type of the unipotent part in it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeEntry {
    pub d: usize,
    pub m: usize,
    pub lambda: Partition,
}

/// A point of the type set: multiset of `(d, m, λ)` with `Σ d·m = n`, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeLabel {
    entries: Vec<TypeEntry>,
}

impl TypeLabel {
    pub fn new(mut entries: Vec<TypeEntry>) -> Result<Self> {
        for e in &entries {
            if e.d == 0 || e.m == 0 || e.lambda.weight() != e.m {
                return Err(Error::Invariant(format!("bad type entry {e:?}")));
            }
        }
        entries.sort();
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[TypeEntry] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.iter().map(|e| e.d * e.m).sum()
    }

    pub fn shape(&self) -> Vec<(usize, usize)> {
        self.entries.iter().map(|e| (e.d, e.m)).collect()
    }

    /// Semisimple (all `λ = (1^m)`).
    pub fn is_semisimple(&self) -> bool {
        self.entries.iter().all(|e| e.lambda == Partition::ones(e.m))
    }

    /// Number of distinct irreducible factors of degree `d` the type needs.
    fn needed(&self, d: usize) -> usize {
        self.entries.iter().filter(|e| e.d == d).count()
    }

    /// Whether enough distinct irreducibles exist over `F_q`.
    pub fn realizable(&self, q: u64, ambient: Ambient) -> bool {
        let max_d = self.entries.iter().map(|e| e.d).max().unwrap_or(0);
        (1..=max_d).all(|d| self.needed(d) as u128 <= available(d, q, ambient))
    }
}

fn available(d: usize, q: u64, ambient: Ambient) -> u128 {
    let n = irreducible_count(d, q);
    if d == 1 && ambient == Ambient::Group {
        n - 1
    } else {
        n
    }
}

/// Number of monic irreducible polynomials of degree `d` over `F_q` (Möbius inversion).
pub fn irreducible_count(d: usize, q: u64) -> u128 {
    fn mobius(mut n: usize) -> i128 {
        let mut res = 1;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                res = -res;
            }
            p += 1;
        }
        if n > 1 {
            res = -res;
        }
        res
    }
    let total: i128 = (1..=d).filter(|e| d % e == 0).map(|e| mobius(e) * (q as i128).pow((d / e) as u32)).sum();
    (total / d as i128) as u128
}

/// Number of `G^F`-classes (or adjoint orbits) of the given type:
/// choices of distinct irreducibles per degree, up to permuting identical entries.
pub fn class_count(label: &TypeLabel, q: u64, ambient: Ambient) -> u128 {
    let mut out: u128 = 1;
    let max_d = label.entries.iter().map(|e| e.d).max().unwrap_or(0);
    for d in 1..=max_d {
        let k = label.needed(d) as u128;
        let avail = available(d, q, ambient);
        if k > avail {
            return 0;
        }
        out *= (0..k).map(|i| avail - i).product::<u128>();
    }
    let mut i = 0;
    while i < label.entries.len() {
        let j = (i..label.entries.len()).find(|&j| label.entries[j] != label.entries[i]).unwrap_or(label.entries.len());
        out /= (1..=(j - i) as u128).product::<u128>();
        i = j;
    }
    out
}

/// `|C_{GL_m(F_q)}(u_λ)| = q^{Σ λ'_i²} Π_i Π_{k ≤ m_i(λ)} (1 - q^{-k})` as a polynomial in `q`.
pub fn unipotent_centralizer_order(lambda: &Partition) -> QPoly {
    let sq: usize = lambda.transpose().parts().iter().map(|c| c * c).sum();
    let mut shift = sq;
    let mut acc = QPoly::one();
    for &mi in lambda.multiplicities().iter().skip(1) {
        for k in 1..=mi {
            acc = &acc * &q_power_minus_one(k);
            shift -= k;
        }
    }
    &acc * &QPoly::monomial(1.into(), shift)
}

/// Type of an element: factor the characteristic polynomial of the semisimple part and read
/// the Jordan type of the unipotent (nilpotent) part on each primary component.
pub fn classify(x: &Matrix, f: &Field, ambient: Ambient) -> Result<(TypeLabel, SpectralData)> {
    let n = x.n();
    let (s, nil) = match ambient {
        Ambient::Group => {
            let pair = jordan_mult(x, f)?;
            (pair.semisimple, pair.unipotent.sub(&Matrix::identity(n), f))
        }
        Ambient::Lie => {
            let pair = jordan_add(x, f);
            (pair.semisimple, pair.nilpotent)
        }
    };
    let spectral = SpectralData::of_semisimple(&s, f)?;
    let mut entries = Vec::with_capacity(spectral.factors.len());
    for fac in &spectral.factors {
        let fs = s.eval_poly(&fac.poly, f);
        let mut dual = Vec::new();
        let mut power = Matrix::identity(n);
        let mut prev = 0;
        loop {
            power = power.mul(&nil, f);
            let mut rows = power.rows();
            rows.extend(fs.rows());
            let kernel = n - rank(rows, f);
            if kernel % fac.d != 0 {
                return Err(Error::Invariant(format!("kernel dimension {kernel} not divisible by {}", fac.d)));
            }
            let c = kernel / fac.d;
            if c == prev {
                break;
            }
            dual.push(c - prev);
            prev = c;
        }
        if prev != fac.m {
            return Err(Error::Invariant(format!("primary component of {x:?} has wrong dimension")));
        }
        let lambda = Partition::new(dual).transpose();
        entries.push(TypeEntry { d: fac.d, m: fac.m, lambda });
    }
    Ok((TypeLabel::new(entries)?, spectral))
}

/// Nilpotent matrix in Jordan form with block sizes `λ` (ones on the superdiagonal).
pub fn nilpotent_of_type(lambda: &Partition) -> Matrix {
    let n = lambda.weight();
    let mut m = Matrix::zero(n);
    let mut off = 0;
    for &b in lambda.parts() {
        for i in 0..b - 1 {
            m.set(off + i, off + i + 1, 1);
        }
        off += b;
    }
    m
}

/// Multisets of `(d, m)` with `Σ d·m = n`, sorted.
pub fn enumerate_shapes(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> =
        (1..=n).flat_map(|d| (1..=n / d).map(move |m| (d, m))).collect();
    fn rec(rest: usize, from: usize, pairs: &[(usize, usize)], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for i in from..pairs.len() {
            let (d, m) = pairs[i];
            if d * m <= rest {
                cur.push((d, m));
                rec(rest - d * m, i, pairs, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, 0, &pairs, &mut Vec::new(), &mut out);
    out
}

/// All abstract types of `GL_n`, optionally only those whose semisimple part embeds in some
/// `T_w` with `w` in the Weyl group of the Levi of the given composition.
pub fn enumerate_types(n: usize, restrict_to: Option<&[usize]>) -> Vec<TypeLabel> {
    let rhos: Option<Vec<Partition>> = restrict_to.map(|comp| {
        let mut v: Vec<Partition> = levi_weyl_classes(comp).into_iter().map(|c| c.rho).collect();
        v.sort();
        v.dedup();
        v
    });
    let mut out = BTreeSet::new();
    for shape in enumerate_shapes(n) {
        if let Some(rhos) = &rhos {
            if !rhos.iter().any(|rho| !all_assignment_classes(&shape, rho).is_empty()) {
                continue;
            }
        }
        let mut labels: Vec<Vec<TypeEntry>> = vec![vec![]];
        for &(d, m) in &shape {
            labels = labels
                .into_iter()
                .flat_map(|l| {
                    Partition::all(m).into_iter().map(move |lambda| {
                        let mut l = l.clone();
                        l.push(TypeEntry { d, m, lambda });
                        l
                    })
                })
                .collect();
        }
        for l in labels {
            out.insert(TypeLabel::new(l).expect("well-formed entries"));
        }
    }
    out.into_iter().collect()
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| format!("({},{}):{}", e.d, e.m, e.lambda)).collect();
        write!(f, "{{{}}}", parts.join(";"))
    }
}

impl FromStr for TypeLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("bad type label {s:?}"));
        let inner = s.trim().strip_prefix('{').and_then(|t| t.strip_suffix('}')).ok_or_else(err)?;
        let mut entries = Vec::new();
        for item in inner.split(';').filter(|t| !t.is_empty()) {
            let (dm, lam) = item.split_once(':').ok_or_else(err)?;
            let (d, m) = dm
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .and_then(|t| t.split_once(','))
                .ok_or_else(err)?;
            entries.push(TypeEntry {
                d: d.parse().map_err(|_| err())?,
                m: m.parse().map_err(|_| err())?,
                lambda: lam.parse()?,
            });
        }
        Self::new(entries)
    }
}

impl Serialize for TypeLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TypeLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{centralizer_order, Budget, Group, GroupSpec};
    use std::collections::HashMap;

    fn label(s: &str) -> TypeLabel {
        s.parse().unwrap()
    }

    #[test]
    fn gl2_types() {
        let all = enumerate_types(2, None);
        let names: Vec<String> = all.iter().map(|t| t.to_string()).collect();
        assert_eq!(names, vec!["{(1,1):[1];(1,1):[1]}", "{(1,2):[1,1]}", "{(1,2):[2]}", "{(2,1):[1]}"]);
        let borel = enumerate_types(2, Some(&[1, 1]));
        assert_eq!(borel.len(), 3);
        assert!(!borel.contains(&label("{(2,1):[1]}")));
        assert_eq!(enumerate_types(1, None).len(), 1);
    }

    #[test]
    fn label_round_trip() {
        for t in enumerate_types(4, None) {
            assert_eq!(t.to_string().parse::<TypeLabel>().unwrap(), t);
        }
        assert!("{(1,2):[1]}".parse::<TypeLabel>().is_err());
        assert!("(1,2):[2]".parse::<TypeLabel>().is_err());
    }

    #[test]
    fn irreducible_counts() {
        assert_eq!(irreducible_count(1, 3), 3);
        assert_eq!(irreducible_count(2, 2), 1);
        assert_eq!(irreducible_count(2, 3), 3);
        assert_eq!(irreducible_count(3, 2), 2);
        assert_eq!(irreducible_count(4, 2), 3);
        for (d, q) in [(1, 4), (2, 4), (3, 3), (2, 5)] {
            let f = Field::of_order(q as u32).unwrap();
            assert_eq!(Poly::irreducibles(d, &f).len() as u128, irreducible_count(d, q));
        }
    }

    #[test]
    fn centralizer_order_poly() {
        // (1,1): |GL_2| ; (2): q(q-1)
        assert_eq!(unipotent_centralizer_order(&Partition::ones(2)).to_string(), "q^4-q^3-q^2+q");
        assert_eq!(unipotent_centralizer_order(&Partition::row(2)).to_string(), "q^2-q");
        assert_eq!(unipotent_centralizer_order(&Partition::ones(3)).eval_integer(2).unwrap(), 168);
    }

    /// Exhaustive classification of a group or Lie algebra: elements and classes per type.
    fn census(n: usize, q: u32, ambient: Ambient) -> HashMap<TypeLabel, (u128, u128)> {
        let spec = GroupSpec::gl(n, q).unwrap();
        let g = Group::new(&spec, &Budget::default()).unwrap();
        let set = match ambient {
            Ambient::Group => g.elems.clone(),
            Ambient::Lie => spec.enumerate_lie(&Budget::default()).unwrap(),
        };
        let mut out: HashMap<TypeLabel, (u128, u128)> = HashMap::new();
        for x in &set {
            let (t, _) = classify(x, &spec.field, ambient).unwrap();
            let e = out.entry(t).or_default();
            e.0 += 1;
            // classes counted as Σ 1/|orbit| = Σ |C(x)|/|G|
            e.1 += centralizer_order(x, &g) as u128;
        }
        for v in out.values_mut() {
            assert_eq!(v.1 % g.order() as u128, 0);
            v.1 /= g.order() as u128;
        }
        out
    }

    #[test]
    fn gl2_f3_fiber_sizes() {
        let c = census(2, 3, Ambient::Group);
        let sizes: Vec<u128> = ["{(1,2):[1,1]}", "{(1,2):[2]}", "{(1,1):[1];(1,1):[1]}", "{(2,1):[1]}"]
            .iter()
            .map(|s| c[&label(s)].0)
            .collect();
        assert_eq!(sizes, vec![2, 16, 12, 18]);
        assert_eq!(c.values().map(|v| v.0).sum::<u128>(), 48);
    }

    #[test]
    fn class_counts_match_census() {
        for (n, q, amb) in [(2, 2, Ambient::Group), (2, 3, Ambient::Group), (3, 2, Ambient::Group), (2, 2, Ambient::Lie), (2, 3, Ambient::Lie), (3, 2, Ambient::Lie), (2, 4, Ambient::Lie)] {
            let c = census(n, q, amb);
            for t in enumerate_types(n, None) {
                let expect = class_count(&t, q as u64, amb);
                let got = c.get(&t).map_or(0, |v| v.1);
                assert_eq!(got, expect, "{t} at GL{n}(F_{q}) {amb:?}");
                assert_eq!(t.realizable(q as u64, amb), expect > 0);
            }
        }
    }

    #[test]
    fn fiber_elements_from_centralizers() {
        // elements = classes · |G| / Π |C_{GL_m(q^d)}(u_λ)|
        let (n, q) = (3, 2);
        let c = census(n, q, Ambient::Group);
        let order = GroupSpec::gl(n, q).unwrap().order() as i128;
        for (t, (elems, classes)) in c {
            let cent: i128 = t
                .entries()
                .iter()
                .map(|e| unipotent_centralizer_order(&e.lambda).compose_power(e.d).eval_integer(q as i128).unwrap())
                .product();
            assert_eq!(elems as i128, classes as i128 * order / cent, "{t}");
        }
    }

    #[test]
    fn nilpotent_representatives() {
        let f = Field::new(2, 1).unwrap();
        for n in 1..=4 {
            for lam in Partition::all(n) {
                let x = nilpotent_of_type(&lam);
                let (t, _) = classify(&x, &f, Ambient::Lie).unwrap();
                assert_eq!(t.entries(), &[TypeEntry { d: 1, m: n, lambda: lam.clone() }]);
                let u = x.add(&Matrix::identity(n), &f);
                assert_eq!(classify(&u, &f, Ambient::Group).unwrap().0, t);
            }
        }
    }

    #[test]
    fn gl1_fiber() {
        let c = census(1, 5, Ambient::Group);
        assert_eq!(c.len(), 1);
        assert_eq!(c[&label("{(1,1):[1]}")], (4, 4));
    }
}
