//! Exhaustive checks of the identities the formula engines rest on.
//!
//! Each check returns an [`IdentityReport`]; failures carry witnesses rather than
//! aborting, so a whole suite can be reported at once.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Zero};
use serde::Serialize;

use super::{compositions, k_group_brute, k_lie_brute, k_nil_brute, Context};
use crate::error::{Error, Result};
use crate::field::{additive_char, CyclotomicInt, Field};
use crate::green::{dl_value, green_table, levi_average};
use crate::matrix::{
    f_nilradical_lie, f_parabolic_group, f_parabolic_lie, is_nilpotent, is_semisimple, jordan_add, jordan_mult,
    Budget, Group, GroupKind, GroupSpec, Matrix, ParabolicSpec, Pattern, Transversal,
};
use crate::qpoly::Rational;
use crate::weyl::{
    all_assignment_classes, class_count, classify, enumerate_types, levi_weyl_classes, torus_order, weyl_index,
    Ambient, Partition, TwistedTorus, TypeLabel,
};

const MAX_WITNESSES: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    pub witnesses: Vec<String>,
}

impl IdentityReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), checked: 0, failed: 0, witnesses: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.check_n(1, ok, witness);
    }

    /// Records `n` checked points sharing one verdict.
    pub fn check_n(&mut self, n: u64, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += n;
        if !ok {
            self.failed += n;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }
}

fn rat(n: impl Into<i128>) -> Rational {
    Rational::from_integer(n.into())
}

/// Harish-Chandra induction from `𝔩` to `𝔤` of an `L^F`-invariant function, at `x`:
/// one term `f(π(h⁻¹xh))` per coset `hP^F` with `h⁻¹xh ∈ 𝔭^F`.
pub fn hc_induction_lie(f: impl Fn(&Matrix) -> i128, t: &Transversal, x: &Matrix) -> i128 {
    t.conjugates_in(x, Pattern::Parabolic).iter().map(|y| f(&t.parabolic.levi_part(y))).sum()
}

/// `𝕽(1) = f_𝔭`, `𝕽(|𝔩^F|·δ_0) = |𝔩^F|·f_𝔫`, and induction from `𝔤` itself is the identity.
pub fn verify_hc_induction(ctx: &Context, p: &ParabolicSpec) -> Result<IdentityReport> {
    let f = ctx.group.field();
    let t = Transversal::new(&ctx.group, p)?;
    let whole = Transversal::new(&ctx.group, &ParabolicSpec::whole(ctx.spec.n))?;
    let levi_size = ctx.spec.enumerate_lie_levi(p, &ctx.budget)?.len() as i128;
    let probe = |y: &Matrix| 7 * y.rank(f) as i128 + y.trace(f) as i128;
    let mut rep = IdentityReport::new(format!("HC induction {} {p}", ctx.spec.label()));
    for r in ctx.lie_classes()? {
        let x = &r.representative;
        let one = hc_induction_lie(|_| 1, &t, x);
        rep.check(one == f_parabolic_lie(x, &t) as i128, || format!("R(1) ≠ f_p at {x:?}"));
        let chi = hc_induction_lie(|y| if y.is_zero() { levi_size } else { 0 }, &t, x);
        rep.check(chi == levi_size * f_nilradical_lie(x, &t) as i128, || format!("R(χ_l) ≠ |l| f_n at {x:?}"));
        rep.check(hc_induction_lie(probe, &whole, x) == probe(x), || format!("P = G is not the identity at {x:?}"));
    }
    Ok(rep)
}

/// The three class-sum lemmas: `k(P,G) = Σ f_P`, `k(𝔭,G) = Σ f_𝔭`, `k(𝔫,G) = |L^F| Σ f_𝔫`,
/// sums over `G^F`-classes (adjoint orbits).
pub fn verify_lemma_sums(ctx: &Context, p: &ParabolicSpec) -> Result<IdentityReport> {
    let t = Transversal::new(&ctx.group, p)?;
    let mut rep = IdentityReport::new(format!("class-sum lemmas {} {p}", ctx.spec.label()));
    let kg: i128 = ctx.group_classes()?.iter().map(|r| f_parabolic_group(&r.representative, &t) as i128).sum();
    let brute = k_group_brute(ctx, p)?;
    rep.check(kg == brute, || format!("Σ f_P = {kg}, k(P,G) = {brute}"));
    let lie = ctx.lie_classes()?;
    let kl: i128 = lie.iter().map(|r| f_parabolic_lie(&r.representative, &t) as i128).sum();
    let brute = k_lie_brute(ctx, p)?;
    rep.check(kl == brute, || format!("Σ f_p = {kl}, k(p,G) = {brute}"));
    let levi = ctx.spec.levi_order(p) as i128;
    let kn: i128 = levi * lie.iter().map(|r| f_nilradical_lie(&r.representative, &t) as i128).sum::<i128>();
    let brute = k_nil_brute(ctx, p)?;
    rep.check(kn == brute, || format!("|L| Σ f_n = {kn}, k(n,G) = {brute}"));
    Ok(rep)
}

struct AverageCache<'a> {
    comp: &'a [usize],
    q: u64,
    memo: HashMap<TypeLabel, Rational>,
}

impl AverageCache<'_> {
    fn get(&mut self, label: &TypeLabel) -> Result<Rational> {
        if let Some(v) = self.memo.get(label) {
            return Ok(*v);
        }
        let v = levi_average(label, self.comp, self.q)?;
        self.memo.insert(label.clone(), v);
        Ok(v)
    }
}

/// `f_P = (1/|W_L|) Σ_w R_{T_w}(1)` on every conjugacy class and
/// `f_𝔭 = 𝕽(1) = (1/|W_L|) Σ_w 𝕽_{𝔱_w}(1)` on every adjoint orbit.
pub fn verify_f_identities(ctx: &Context, p: &ParabolicSpec) -> Result<IdentityReport> {
    ctx.require_gl("f-function identities")?;
    let f = ctx.group.field();
    let t = Transversal::new(&ctx.group, p)?;
    let mut avg = AverageCache { comp: p.composition(), q: ctx.q(), memo: HashMap::new() };
    let mut rep = IdentityReport::new(format!("f-identities {} {p}", ctx.spec.label()));
    for r in ctx.group_classes()? {
        let g = &r.representative;
        let (label, _) = classify(g, f, Ambient::Group)?;
        let lhs = f_parabolic_group(g, &t);
        let rhs = avg.get(&label)?;
        rep.check(rat(lhs) == rhs, || format!("f_P = {lhs} but Levi average {rhs} at {label}"));
    }
    for r in ctx.lie_classes()? {
        let x = &r.representative;
        let (label, _) = classify(x, f, Ambient::Lie)?;
        let lhs = hc_induction_lie(|_| 1, &t, x);
        let rhs = avg.get(&label)?;
        rep.check(rat(lhs) == rhs, || format!("f_p = {lhs} but Levi average {rhs} at {label}"));
    }
    Ok(rep)
}

/// `(1/|W|) Σ_w R_{T_w}(1) = 1` on every class of `GL_n(F_q)`.
pub fn verify_trivial_decomposition_group(n: usize, q: u64) -> Result<IdentityReport> {
    let mut rep = IdentityReport::new(format!("trivial decomposition GL{n}(F_{q})"));
    for label in enumerate_types(n, None) {
        let classes = class_count(&label, q, Ambient::Group);
        if classes == 0 {
            continue;
        }
        let v = levi_average(&label, &[n], q)?;
        rep.check_n(classes as u64, v.is_one(), || format!("{label}: {v}"));
    }
    Ok(rep)
}

fn nilpotent_type(x: &Matrix, f: &Field) -> Result<Partition> {
    let (label, _) = classify(x, f, Ambient::Lie)?;
    match label.entries() {
        [e] if e.d == 1 => Ok(e.lambda.clone()),
        _ => Err(Error::Invariant(format!("{x:?} is not nilpotent"))),
    }
}

/// `(1/|W_L|) Σ_{w ∈ W_L} 𝕽_{𝔱_w}^𝔩(1)(x) = 1` at every `x ∈ 𝔩^F` for the split Levi
/// `𝔩 = Π gl_{n_i}`. The `w = 1` term is also computed independently as `Π f_{𝔟_i}(x_i)`
/// from Borel coset sums in each factor.
pub fn verify_trivial_decomposition_additive(comp: &[usize], q: u32, budget: &Budget) -> Result<IdentityReport> {
    let n: usize = comp.iter().sum();
    let spec = GroupSpec::gl(n, q)?;
    let f = spec.field.clone();
    let p = ParabolicSpec::new(comp.to_vec())?;
    let points = spec.enumerate_lie_levi(&p, budget)?;
    let mut borels: HashMap<usize, Transversal> = HashMap::new();
    for &m in comp {
        if !borels.contains_key(&m) {
            let g = Group::new(&GroupSpec::gl(m, q)?, budget)?;
            borels.insert(m, Transversal::new(&g, &ParabolicSpec::borel(m))?);
        }
    }
    let mut memo: HashMap<Matrix, (Rational, i128, i128)> = HashMap::new();
    let mut rep = IdentityReport::new(format!("additive trivial decomposition {p} over F_{q}"));
    for x in &points {
        let (mut avg, mut dl, mut fb) = (Rational::one(), 1i128, 1i128);
        for b in p.levi_blocks(x) {
            let m = b.n();
            let v = match memo.get(&b) {
                Some(v) => *v,
                None => {
                    let (label, _) = classify(&b, &f, Ambient::Lie)?;
                    let v = (
                        levi_average(&label, &[m], q as u64)?,
                        dl_value(&label, &Partition::ones(m), q as u64)?,
                        f_parabolic_lie(&b, &borels[&m]) as i128,
                    );
                    memo.insert(b, v);
                    v
                }
            };
            avg *= v.0;
            dl *= v.1;
            fb *= v.2;
        }
        rep.check(avg.is_one() && dl == fb, || format!("at {x:?}: average {avg}, w=1 term {dl} vs coset sum {fb}"));
    }
    Ok(rep)
}

/// Unnormalized Fourier transform `(ℱf)(x) = Σ_z μ(tr(xz)) f(z)` over the given points of a
/// torus Lie algebra inside `ambient`. Refused when the trace form of `ambient` is degenerate.
pub fn fourier_transform_torus(
    ambient: &GroupSpec,
    points: &[Matrix],
    f: impl Fn(&Matrix) -> i64,
) -> Result<Vec<CyclotomicInt>> {
    ambient.require_nondegenerate_form()?;
    let field = &ambient.field;
    let values: Vec<i64> = points.iter().map(&f).collect();
    Ok(points
        .iter()
        .map(|x| {
            points.iter().zip(&values).filter(|(_, &v)| v != 0).fold(CyclotomicInt::zero(field.p()), |acc, (z, &v)| {
                acc + additive_char(field, x.mul(z, field).trace(field)).scale(v)
            })
        })
        .collect())
}

/// Pointwise check on `𝔩^F` of
/// `|𝔩^F|·δ_0 = (|𝔩^F|/(|W_L||L^F|)) Σ_w dim R_{T_w}^L(1) · |T_w^F| · 𝕽_{𝔱_w}^𝔩(δ_0)`,
/// together with `Σ_y ℱ(δ_y) = |𝔱_w^F|·δ_0` and `ℱ(δ_0) = 1` on every `𝔱_w`.
pub fn verify_regular_decomposition(comp: &[usize], q: u32, budget: &Budget) -> Result<Vec<IdentityReport>> {
    let n: usize = comp.iter().sum();
    let spec = GroupSpec::gl(n, q)?;
    let f = spec.field.clone();
    let p = ParabolicSpec::new(comp.to_vec())?;
    let points = spec.enumerate_lie_levi(&p, budget)?;
    let qi = q as i128;
    let lie_size = points.len() as i128;
    let scale = Rational::new(lie_size, spec.levi_order(&p) as i128);
    let classes = levi_weyl_classes(comp);
    let tables = comp.iter().map(|&m| green_table(m)).collect::<Result<Vec<_>>>()?;
    let mut coeffs = Vec::with_capacity(classes.len());
    for c in &classes {
        let mut a = c.weight * rat(torus_order(&c.rho, q as u64) as i128);
        for ((&m, s), t) in comp.iter().zip(&c.components).zip(&tables) {
            a *= rat(t.value(&Partition::ones(m), s, qi)?);
        }
        coeffs.push(a);
    }

    let mut step2 = IdentityReport::new(format!("regular decomposition {p} over F_{q}"));
    for x in &points {
        let blocks = p.levi_blocks(x);
        let lhs = if x.is_zero() { rat(lie_size) } else { Rational::zero() };
        let rhs = if blocks.iter().all(|b| is_nilpotent(b, &f)) {
            let lambdas = blocks.iter().map(|b| nilpotent_type(b, &f)).collect::<Result<Vec<_>>>()?;
            let mut acc = Rational::zero();
            for (c, a) in classes.iter().zip(&coeffs) {
                let mut term = *a;
                for ((lambda, s), t) in lambdas.iter().zip(&c.components).zip(&tables) {
                    term *= rat(t.value(lambda, s, qi)?);
                }
                acc += term;
            }
            acc * scale
        } else {
            Rational::zero()
        };
        step2.check(lhs == rhs, || format!("at {x:?}: {lhs} ≠ {rhs}"));
    }

    let mut step3 = IdentityReport::new(format!("torus Fourier identities {p} over F_{q}"));
    let mut rhos: Vec<Partition> = classes.iter().map(|c| c.rho.clone()).collect();
    rhos.sort();
    rhos.dedup();
    for rho in rhos {
        let pts = TwistedTorus::new(&rho, &f)?.lie_elements(budget)?;
        let size = pts.len() as i64;
        let sum_all = fourier_transform_torus(&spec, &pts, |_| 1)?;
        let delta0 = fourier_transform_torus(&spec, &pts, |z| i64::from(z.is_zero()))?;
        for ((x, s), d) in pts.iter().zip(&sum_all).zip(&delta0) {
            let expect = CyclotomicInt::from_int(f.p(), if x.is_zero() { size } else { 0 });
            step3.check(*s == expect, || format!("Σ_y F(δ_y) at {x:?} in t_{rho} is {s}"));
            step3.check(*d == CyclotomicInt::one(f.p()), || format!("F(δ_0) at {x:?} in t_{rho} is {d}"));
        }
    }
    Ok(vec![step2, step3])
}

/// `N_{G^F}(P^F) = P^F` and `N_{G^F}(𝔭^F) = P^F`.
pub fn verify_normalizers(ctx: &Context, p: &ParabolicSpec) -> Result<IdentityReport> {
    let f = ctx.group.field();
    let par = ctx.spec.enumerate_parabolic(p, &ctx.budget)?;
    let lie = ctx.spec.enumerate_lie_parabolic(p, &ctx.budget)?;
    let members: HashSet<&Matrix> = par.iter().collect();
    let mut rep = IdentityReport::new(format!("normalizers {} {p}", ctx.spec.label()));
    for (g, gi) in ctx.group.pairs() {
        let inside = members.contains(g);
        let normal_p = par.iter().all(|a| p.contains(Pattern::Parabolic, &a.conjugate(g, gi, f)));
        let normal_lie = lie.iter().all(|x| p.contains(Pattern::Parabolic, &x.conjugate(g, gi, f)));
        rep.check(normal_p == inside && normal_lie == inside, || format!("{g:?}: in P {inside}, normalizes P {normal_p}, normalizes p {normal_lie}"));
    }
    Ok(rep)
}

/// `|G^F : P^F| · |O ∩ 𝔭^F| = |O| · f_𝔭(x)` for every adjoint orbit `O = Ad(G^F)x`, and
/// orbit–stabilizer on classes and orbits.
pub fn verify_double_count(ctx: &Context, p: &ParabolicSpec) -> Result<IdentityReport> {
    let f = ctx.group.field();
    let t = Transversal::new(&ctx.group, p)?;
    let index = t.len() as u128;
    let order = ctx.group.order() as u64;
    let mut rep = IdentityReport::new(format!("double count {} {p}", ctx.spec.label()));
    for r in ctx.lie_classes()? {
        let x = &r.representative;
        let orbit: HashSet<Matrix> = ctx.group.pairs().map(|(h, hi)| x.conjugate(h, hi, f)).collect();
        let inter = orbit.iter().filter(|y| p.contains(Pattern::Parabolic, y)).count() as u128;
        let fp = f_parabolic_lie(x, &t) as u128;
        rep.check(index * inter == orbit.len() as u128 * fp, || format!("at {x:?}: {index}·{inter} ≠ {}·{fp}", orbit.len()));
        rep.check(r.orbit_size * r.centralizer_order == order, || format!("orbit–stabilizer fails at {x:?}"));
    }
    for r in ctx.group_classes()? {
        rep.check(r.orbit_size * r.centralizer_order == order, || format!("orbit–stabilizer fails at {:?}", r.representative));
    }
    Ok(rep)
}

/// Semisimple parts of elements of `P^F` (of `𝔭^F`) are `P^F`-conjugate into `L^F` (into `𝔩^F`).
pub fn verify_levi_conjugation(ctx: &Context, p: &ParabolicSpec) -> Result<Vec<IdentityReport>> {
    let f = ctx.group.field();
    let par = ctx.spec.enumerate_parabolic(p, &ctx.budget)?;
    let inv = par.iter().map(|a| a.inverse(f)).collect::<Result<Vec<_>>>()?;
    let into_levi = |s: &Matrix| par.iter().zip(&inv).any(|(a, ai)| p.contains(Pattern::Levi, &s.conjugate(a, ai, f)));

    let mut group = IdentityReport::new(format!("Levi conjugation (group) {} {p}", ctx.spec.label()));
    let mut memo: HashMap<Matrix, bool> = HashMap::new();
    for y in &par {
        let s = jordan_mult(y, f)?.semisimple;
        let ok = *memo.entry(s).or_insert_with(|| into_levi(&s));
        group.check(ok, || format!("semisimple part of {y:?} is not conjugate into L"));
    }
    let mut lie = IdentityReport::new(format!("Levi conjugation (Lie) {} {p}", ctx.spec.label()));
    memo.clear();
    for x in ctx.spec.enumerate_lie_parabolic(p, &ctx.budget)? {
        let s = jordan_add(&x, f).semisimple;
        let ok = *memo.entry(s).or_insert_with(|| into_levi(&s));
        lie.check(ok, || format!("semisimple part of {x:?} is not conjugate into l"));
    }
    Ok(vec![group, lie])
}

/// Torus membership of semisimple Lie elements is decided up to `G^F`-conjugacy: the number of
/// `h` with `h x h⁻¹ ∈ 𝔱_ρ^F` equals `|C(x)|` times the summed Weyl indices.
pub fn verify_lie_torus_membership(ctx: &Context) -> Result<IdentityReport> {
    ctx.require_gl("torus membership")?;
    let f = ctx.group.field();
    let mut rep = IdentityReport::new(format!("Lie torus membership {}", ctx.spec.label()));
    for rho in Partition::all(ctx.spec.n) {
        let torus: HashSet<Matrix> = TwistedTorus::new(&rho, f)?.lie_elements(&ctx.budget)?.into_iter().collect();
        for r in ctx.lie_classes()? {
            let x = &r.representative;
            if !is_semisimple(x, f) {
                continue;
            }
            let (label, _) = classify(x, f, Ambient::Lie)?;
            let shape = label.shape();
            let mut expected: u128 = 0;
            for a in all_assignment_classes(&shape, &rho) {
                expected += weyl_index(&shape, &rho, &a)?;
            }
            let hits = ctx.group.pairs().filter(|(h, hi)| torus.contains(&x.conjugate(h, hi, f))).count() as u128;
            rep.check(hits == expected * r.centralizer_order as u128, || format!("{label} in t_{rho}: {hits} hits, index {expected}"));
        }
    }
    Ok(rep)
}

/// Every applicable identity for the group of `ctx`, over all compositions.
/// For `SL_n` the trace form must be nondegenerate and only the formula-free checks run.
pub fn verify_suite(ctx: &Context) -> Result<Vec<IdentityReport>> {
    ctx.spec.require_nondegenerate_form()?;
    let n = ctx.spec.n;
    let q = ctx.spec.q() as u32;
    let gl = ctx.spec.kind == GroupKind::GL;
    let mut out = Vec::new();
    for comp in compositions(n) {
        let p = ParabolicSpec::new(comp.clone())?;
        out.push(verify_lemma_sums(ctx, &p)?);
        out.push(verify_hc_induction(ctx, &p)?);
        out.push(verify_normalizers(ctx, &p)?);
        out.push(verify_double_count(ctx, &p)?);
        out.extend(verify_levi_conjugation(ctx, &p)?);
        if gl {
            out.push(verify_f_identities(ctx, &p)?);
            out.push(verify_trivial_decomposition_additive(&comp, q, &ctx.budget)?);
            out.extend(verify_regular_decomposition(&comp, q, &ctx.budget)?);
        }
    }
    if gl {
        out.push(verify_trivial_decomposition_group(n, q as u64)?);
        out.push(verify_lie_torus_membership(ctx)?);
    }
    Ok(out)
}
