//! The headline counts `k(P^F, G^F)`, `k(𝔭^F, G^F)` and `k(𝔫^F, G^F)`, each by brute force
//! and by the type-sum formulas, plus the identity checks behind the formulas.
//!
//! Brute engines work for `GL_n` and `SL_n`. Formula engines are implemented for `GL_n`.

mod fibers;
mod identities;
mod sign;

pub use fibers::{type_partition, type_partition_group, type_partition_lie, TypeFiber};
pub use identities::*;
pub use sign::{calibrate_sign, select_sign, SignConvention, CALIBRATION_CELLS};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::green::{gl_order_p_prime, green_table, levi_average};
use crate::matrix::{
    burnside_count_with, centralizer_order, orbit_representatives, Budget, Group, GroupKind, GroupSpec, Matrix,
    OrbitRecord, ParabolicSpec, Pattern,
};
use crate::qpoly::Rational;
use crate::weyl::{class_count, classify, enumerate_types, levi_weyl_classes, relative_ranks, Ambient, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "group")]
    Group,
    #[serde(rename = "lie")]
    LieParabolic,
    #[serde(rename = "nil")]
    LieNilradical,
}

impl Quantity {
    pub const ALL: [Quantity; 3] = [Quantity::Group, Quantity::LieParabolic, Quantity::LieNilradical];

    pub fn tag(self) -> &'static str {
        match self {
            Quantity::Group => "group",
            Quantity::LieParabolic => "lie",
            Quantity::LieNilradical => "nil",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "group" => Ok(Quantity::Group),
            "lie" | "lie-parabolic" => Ok(Quantity::LieParabolic),
            "nil" | "lie-nilradical" => Ok(Quantity::LieNilradical),
            _ => Err(Error::Parse(format!("unknown quantity {s:?} (group | lie | nil)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Brute,
    Formula,
    Both,
}

impl Engine {
    fn brute(self) -> bool {
        self != Engine::Formula
    }

    fn formula(self) -> bool {
        self != Engine::Brute
    }
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Engine::Brute),
            "formula" => Ok(Engine::Formula),
            "both" => Ok(Engine::Both),
            _ => Err(Error::Parse(format!("unknown engine {s:?} (brute | formula | both)"))),
        }
    }
}

/// An enumerated group with lazily enumerated Lie algebra and orbit lists.
pub struct Context {
    pub spec: GroupSpec,
    pub budget: Budget,
    pub exec: Exec,
    pub group: Group,
    lie: OnceLock<Vec<Matrix>>,
    group_classes: OnceLock<Vec<OrbitRecord>>,
    lie_classes: OnceLock<Vec<OrbitRecord>>,
}

fn cached<T>(cell: &OnceLock<T>, init: impl FnOnce() -> Result<T>) -> Result<&T> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = init()?;
    Ok(cell.get_or_init(|| v))
}

impl Context {
    pub fn new(spec: GroupSpec, budget: Budget) -> Result<Self> {
        let group = Group::new(&spec, &budget)?;
        Ok(Self {
            spec,
            budget,
            exec: Exec::default(),
            group,
            lie: OnceLock::new(),
            group_classes: OnceLock::new(),
            lie_classes: OnceLock::new(),
        })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn q(&self) -> u64 {
        self.spec.q() as u64
    }

    /// `𝔤^F` in canonical order.
    pub fn lie(&self) -> Result<&[Matrix]> {
        cached(&self.lie, || self.spec.enumerate_lie(&self.budget)).map(|v| v.as_slice())
    }

    /// Conjugacy classes of `G^F`.
    pub fn group_classes(&self) -> Result<&[OrbitRecord]> {
        cached(&self.group_classes, || orbit_representatives(&self.group.elems, &self.group, |_| true))
            .map(|v| v.as_slice())
    }

    /// Adjoint orbits on `𝔤^F`.
    pub fn lie_classes(&self) -> Result<&[OrbitRecord]> {
        cached(&self.lie_classes, || orbit_representatives(self.lie()?, &self.group, |_| true)).map(|v| v.as_slice())
    }

    fn require_gl(&self, what: &str) -> Result<()> {
        match self.spec.kind {
            GroupKind::GL => Ok(()),
            GroupKind::SL => Err(Error::Unsupported(format!("{what} for {}", self.spec.label()))),
        }
    }
}

/// All compositions of `n`, in lexicographic order.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// One summand of a formula engine.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Term {
    pub label: String,
    pub fiber: u128,
    pub inner: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub group: String,
    pub field: String,
    pub q: u64,
    pub parabolic: String,
    pub quantity: Quantity,
    pub brute: Option<i128>,
    pub formula: Option<i128>,
    pub agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<SignConvention>,
    pub terms: Vec<Term>,
    pub ms_brute: Option<f64>,
    pub ms_formula: Option<f64>,
}

impl CountReport {
    pub const CSV_HEADER: &'static str = "group,parabolic,quantity,q,brute,formula,agree,ms_brute,ms_formula";

    pub fn value(&self) -> Option<i128> {
        self.brute.or(self.formula)
    }

    pub fn csv_row(&self) -> String {
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        format!(
            "{},\"{}\",{},{},{},{},{},{},{}",
            self.group,
            self.parabolic,
            self.quantity,
            self.q,
            opt(self.brute),
            opt(self.formula),
            opt(self.agree),
            opt(self.ms_brute.map(|m| format!("{m:.3}"))),
            opt(self.ms_formula.map(|m| format!("{m:.3}"))),
        )
    }
}

fn div_exact(total: u128, by: u128, what: &str) -> Result<i128> {
    if by == 0 || total % by != 0 {
        return Err(Error::Invariant(format!("{what}: {total} not divisible by {by}")));
    }
    Ok((total / by) as i128)
}

fn centralizer_sum(ctx: &Context, xs: &[Matrix]) -> u128 {
    ctx.exec.sum(xs, |x| centralizer_order(x, &ctx.group)) as u128
}

/// Burnside count of `P^F` acting on `G^F` by conjugation.
pub fn k_group_brute(ctx: &Context, p: &ParabolicSpec) -> Result<i128> {
    let par = ctx.spec.enumerate_parabolic(p, &ctx.budget)?;
    let f = ctx.group.field();
    Ok(burnside_count_with(ctx.exec, &par, &ctx.group.elems, |a, g| a.commutes_with(g, f))? as i128)
}

/// `(1/|P^F|) Σ_{x ∈ 𝔭^F} |C_{G^F}(x)|`.
pub fn k_lie_brute(ctx: &Context, p: &ParabolicSpec) -> Result<i128> {
    ctx.spec.require_nondegenerate_form()?;
    let xs = ctx.spec.enumerate_lie_parabolic(p, &ctx.budget)?;
    div_exact(centralizer_sum(ctx, &xs), ctx.spec.parabolic_order(p), "k(𝔭,G) brute sum")
}

/// `(1/|U^F|) Σ_{x ∈ 𝔫^F} |C_{G^F}(x)|`.
pub fn k_nil_brute(ctx: &Context, p: &ParabolicSpec) -> Result<i128> {
    let xs = ctx.spec.enumerate_nilradical(p, &ctx.budget)?;
    div_exact(centralizer_sum(ctx, &xs), ctx.spec.unipotent_order(p), "k(𝔫,G) brute sum")
}

fn type_sum(ctx: &Context, p: &ParabolicSpec, ambient: Ambient) -> Result<(i128, Vec<Term>)> {
    ctx.require_gl("type-sum formula")?;
    let q = ctx.q();
    let comp = p.composition();
    let labels = enumerate_types(ctx.spec.n, Some(comp));
    let rows = ctx.exec.map(&labels, |label| -> Result<(Rational, Term)> {
        let classes = class_count(label, q, ambient);
        let avg = levi_average(label, comp, q)?;
        let term = Term { label: label.to_string(), fiber: classes, inner: avg.to_string() };
        Ok((avg * Rational::from_integer(classes as i128), term))
    });
    let mut total = Rational::zero();
    let mut terms = Vec::with_capacity(rows.len());
    for r in rows {
        let (v, t) = r?;
        total += v;
        terms.push(t);
    }
    if !total.is_integer() {
        return Err(Error::Invariant(format!("type sum for {p} is {total}, not an integer")));
    }
    Ok((total.to_integer(), terms))
}

/// Sum over types meeting `L` of (number of classes) × (Levi average of `R_{T_w}(1)`).
pub fn k_group_formula(ctx: &Context, p: &ParabolicSpec) -> Result<(i128, Vec<Term>)> {
    type_sum(ctx, p, Ambient::Group)
}

/// Additive version: types with eigenvalue `0` allowed, nilpotent parts read through `1 + n`.
pub fn k_lie_formula(ctx: &Context, p: &ParabolicSpec) -> Result<(i128, Vec<Term>)> {
    ctx.spec.require_nondegenerate_form()?;
    type_sum(ctx, p, Ambient::Lie)
}

/// Jordan types of the elements of `𝔫^F`.
pub fn nilradical_jordan_types(ctx: &Context, p: &ParabolicSpec) -> Result<BTreeSet<Partition>> {
    let f = ctx.group.field();
    let mut out = BTreeSet::new();
    for x in ctx.spec.enumerate_nilradical(p, &ctx.budget)? {
        let (label, _) = classify(&x, f, Ambient::Lie)?;
        match label.entries() {
            [e] if e.d == 1 => {
                out.insert(e.lambda.clone());
            }
            _ => return Err(Error::Invariant(format!("{x:?} in 𝔫 is not nilpotent"))),
        }
    }
    Ok(out)
}

/// `(|L^F|_{p'}/|W_L|) Σ_w sign(w) Σ_{λ ∈ R(𝔫)} Q^λ_{ρ(w)}(q)` under a given sign convention.
pub fn k_nil_formula_with(ctx: &Context, p: &ParabolicSpec, sign: SignConvention) -> Result<(i128, Vec<Term>)> {
    ctx.require_gl("nilradical formula")?;
    let n = ctx.spec.n;
    let q = ctx.q() as i128;
    let comp = p.composition();
    let table = green_table(n)?;
    let lp: i128 = comp.iter().map(|&m| gl_order_p_prime(m).eval_integer(q)).product::<Result<i128>>()?;
    let (eps_g, eps_l) = relative_ranks(&ctx.spec, comp);
    let classes = levi_weyl_classes(comp);
    let mut total = Rational::zero();
    let mut terms = Vec::new();
    for lambda in nilradical_jordan_types(ctx, p)? {
        let mut inner = Rational::zero();
        for c in &classes {
            let s = sign.sign(eps_g, eps_l, &c.rho);
            inner += c.weight * Rational::from_integer(s * table.value(&lambda, &c.rho, q)?);
        }
        let contribution = inner * Rational::from_integer(lp);
        total += contribution;
        terms.push(Term { label: lambda.to_string(), fiber: 1, inner: contribution.to_string() });
    }
    if !total.is_integer() {
        return Err(Error::Invariant(format!("nilradical sum for {p} is {total}, not an integer")));
    }
    Ok((total.to_integer(), terms))
}

pub fn k_nil_formula(ctx: &Context, p: &ParabolicSpec) -> Result<(i128, Vec<Term>, SignConvention)> {
    let sign = select_sign()?;
    let (v, terms) = k_nil_formula_with(ctx, p, sign)?;
    Ok((v, terms, sign))
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, start.elapsed().as_secs_f64() * 1e3))
}

/// Orbits of `G^F` on `𝔤^F` meeting the given pattern.
fn representatives_meeting(ctx: &Context, p: &ParabolicSpec, pattern: Pattern) -> Result<usize> {
    let reps = orbit_representatives(ctx.lie()?, &ctx.group, |x| p.contains(pattern, x))?;
    Ok(reps.len())
}

pub fn count(ctx: &Context, p: &ParabolicSpec, quantity: Quantity, engine: Engine) -> Result<CountReport> {
    if p.n() != ctx.spec.n {
        return Err(Error::Config(format!("composition {p} does not sum to {}", ctx.spec.n)));
    }
    let mut report = CountReport {
        group: ctx.spec.label(),
        field: ctx.spec.field.spec_string(),
        q: ctx.q(),
        parabolic: p.label(),
        quantity,
        brute: None,
        formula: None,
        agree: None,
        representatives: None,
        sign: None,
        terms: Vec::new(),
        ms_brute: None,
        ms_formula: None,
    };
    if engine.brute() {
        let (v, ms) = timed(|| match quantity {
            Quantity::Group => k_group_brute(ctx, p),
            Quantity::LieParabolic => k_lie_brute(ctx, p),
            Quantity::LieNilradical => k_nil_brute(ctx, p),
        })?;
        report.brute = Some(v);
        report.ms_brute = Some(ms);
        report.representatives = match quantity {
            Quantity::Group => None,
            Quantity::LieParabolic => Some(representatives_meeting(ctx, p, Pattern::Parabolic)?),
            Quantity::LieNilradical => Some(representatives_meeting(ctx, p, Pattern::Nilradical)?),
        };
    }
    if engine.formula() {
        let ((v, terms), ms) = timed(|| match quantity {
            Quantity::Group => k_group_formula(ctx, p),
            Quantity::LieParabolic => k_lie_formula(ctx, p),
            Quantity::LieNilradical => {
                let (v, terms, sign) = k_nil_formula(ctx, p)?;
                report.sign = Some(sign);
                Ok((v, terms))
            }
        })?;
        report.formula = Some(v);
        report.terms = terms;
        report.ms_formula = Some(ms);
    }
    if let (Some(a), Some(b)) = (report.brute, report.formula) {
        report.agree = Some(a == b);
    }
    Ok(report)
}

pub fn k_group(ctx: &Context, p: &ParabolicSpec, engine: Engine) -> Result<CountReport> {
    count(ctx, p, Quantity::Group, engine)
}

pub fn k_lie(ctx: &Context, p: &ParabolicSpec, engine: Engine) -> Result<CountReport> {
    count(ctx, p, Quantity::LieParabolic, engine)
}

pub fn k_nil(ctx: &Context, p: &ParabolicSpec, engine: Engine) -> Result<CountReport> {
    count(ctx, p, Quantity::LieNilradical, engine)
}
