//! Sweeps over `q` and exact per-residue-class polynomial fits.
//!
//! A series is split by `q mod m`. Each class is interpolated exactly over the rationals,
//! the largest `q` of the series is held out and predicted. Fits are empirical evidence,
//! not proofs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::counting::{count, type_partition_lie, Context, Engine, Quantity};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::matrix::{Budget, GroupSpec, ParabolicSpec};
use crate::qpoly::{QPoly, Rational};
use crate::weyl::{enumerate_types, TypeLabel};

pub const DEFAULT_MODULI: [u64; 3] = [1, 2, 6];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSeries {
    pub quantity: String,
    pub n: usize,
    pub composition: Vec<usize>,
    pub points: Vec<(u64, i128)>,
}

impl SweepSeries {
    pub fn new(quantity: impl Into<String>, n: usize, composition: Vec<usize>, mut points: Vec<(u64, i128)>) -> Result<Self> {
        points.sort();
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Config("repeated q in series".into()));
        }
        Ok(Self { quantity: quantity.into(), n, composition, points })
    }

    fn held_out(&self) -> Option<u64> {
        self.points.last().map(|p| p.0)
    }
}

/// Counts one quantity at each `q` with both engines where available; a disagreement is an error.
pub fn sweep(n: usize, comp: &[usize], quantity: Quantity, qs: &[u32], budget: &Budget, exec: Exec) -> Result<SweepSeries> {
    if qs.is_empty() {
        return Err(Error::Config("empty q list".into()));
    }
    let p = ParabolicSpec::new(comp.to_vec())?;
    let mut points = Vec::with_capacity(qs.len());
    for &q in qs {
        let ctx = Context::new(GroupSpec::gl(n, q)?, *budget)?.with_exec(exec);
        let r = count(&ctx, &p, quantity, Engine::Both)?;
        if r.agree != Some(true) {
            return Err(Error::Invariant(format!(
                "engines disagree for {} {} {quantity}: {:?} vs {:?}",
                r.group, r.parabolic, r.brute, r.formula
            )));
        }
        points.push((q as u64, r.brute.expect("brute requested")));
    }
    SweepSeries::new(quantity.tag(), n, comp.to_vec(), points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitStatus {
    /// At least `d + 1` training points, all on one polynomial of degree `≤ d`.
    Fitted,
    /// Fewer than `d + 1` points: the interpolant is the lowest-degree candidate.
    Underdetermined,
    /// Training data not on any polynomial of degree `≤ d`.
    NotPolynomial,
    NoData,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassFit {
    pub class: u64,
    pub poly: Option<QPoly>,
    pub status: FitStatus,
    pub training: Vec<u64>,
    pub verified_at: Vec<u64>,
    pub failed_at: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PorcFit {
    pub modulus: u64,
    pub degree_bound: usize,
    pub held_out: Vec<u64>,
    pub classes: Vec<ClassFit>,
    pub consistent: bool,
}

fn r(n: i128) -> Rational {
    Rational::from_integer(n)
}

fn fit_class(points: &[(u64, i128)], d: usize) -> Result<(Option<QPoly>, FitStatus)> {
    if points.is_empty() {
        return Ok((None, FitStatus::NoData));
    }
    let nodes: Vec<(Rational, Rational)> = points.iter().map(|&(q, v)| (r(q as i128), r(v))).collect();
    let take = nodes.len().min(d + 1);
    let poly = QPoly::interpolate(&nodes[..take])?;
    if poly.degree().unwrap_or(0) > d || nodes[take..].iter().any(|&(x, y)| poly.eval(x) != y) {
        return Ok((None, FitStatus::NotPolynomial));
    }
    let status = if nodes.len() > d { FitStatus::Fitted } else { FitStatus::Underdetermined };
    Ok((Some(poly), status))
}

/// Fits `series` modulo `m` with degree bound `d`, holding out the largest `q`.
pub fn fit(series: &SweepSeries, m: u64, d: usize) -> Result<PorcFit> {
    if m == 0 {
        return Err(Error::Config("modulus must be positive".into()));
    }
    let held = series.held_out().ok_or_else(|| Error::Config("empty series".into()))?;
    let mut classes = Vec::new();
    let mut consistent = true;
    for class in 0..m {
        let train: Vec<(u64, i128)> = series.points.iter().copied().filter(|&(q, _)| q % m == class && q != held).collect();
        let (poly, status) = fit_class(&train, d)?;
        let mut c = ClassFit {
            class,
            poly,
            status,
            training: train.iter().map(|p| p.0).collect(),
            verified_at: vec![],
            failed_at: vec![],
        };
        for &(q, v) in series.points.iter().filter(|&&(q, _)| q == held && q % m == class) {
            match &c.poly {
                Some(p) if p.eval(r(q as i128)) == r(v) => c.verified_at.push(q),
                _ => c.failed_at.push(q),
            }
        }
        consistent &= c.status != FitStatus::NotPolynomial && c.failed_at.is_empty();
        classes.push(c);
    }
    Ok(PorcFit { modulus: m, degree_bound: d, held_out: vec![held], classes, consistent })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PorcSearch {
    pub series: SweepSeries,
    pub fits: Vec<PorcFit>,
    /// Smallest candidate modulus whose fit is consistent.
    pub minimal_modulus: Option<u64>,
}

impl PorcSearch {
    pub fn best(&self) -> Option<&PorcFit> {
        self.minimal_modulus.and_then(|m| self.fits.iter().find(|f| f.modulus == m))
    }
}

/// Tries each modulus in increasing order and records the first consistent one.
pub fn search(series: &SweepSeries, moduli: &[u64], d: usize) -> Result<PorcSearch> {
    let mut moduli = moduli.to_vec();
    moduli.sort_unstable();
    moduli.dedup();
    let fits = moduli.iter().map(|&m| fit(series, m, d)).collect::<Result<Vec<_>>>()?;
    let minimal_modulus = fits.iter().find(|f| f.consistent).map(|f| f.modulus);
    Ok(PorcSearch { series: series.clone(), fits, minimal_modulus })
}

/// Whether every fully determined class of `fine` carries the polynomial of the class of
/// `coarse` it refines. Requires `coarse.modulus | fine.modulus`.
pub fn refines(coarse: &PorcFit, fine: &PorcFit) -> bool {
    if fine.modulus % coarse.modulus != 0 {
        return false;
    }
    fine.classes.iter().filter(|c| c.status == FitStatus::Fitted).all(|c| {
        let parent = &coarse.classes[(c.class % coarse.modulus) as usize];
        parent.status != FitStatus::Fitted || parent.poly == c.poly
    })
}

/// JSON view: one object per class with `class`, `poly` and `verified_at`.
pub fn fit_json(fit: &PorcFit) -> serde_json::Value {
    let classes: Vec<serde_json::Value> = fit
        .classes
        .iter()
        .map(|c| {
            serde_json::json!({
                "class": format!("{} mod {}", c.class, fit.modulus),
                "poly": c.poly.as_ref().map_or("insufficient data".to_string(), |p| p.to_string()),
                "status": c.status,
                "verified_at": c.verified_at,
                "failed_at": c.failed_at,
            })
        })
        .collect();
    serde_json::json!({ "modulus": fit.modulus, "consistent": fit.consistent, "classes": classes })
}

pub fn markdown_table(s: &PorcSearch) -> String {
    let mut out = String::from("| m | class | poly | status | training q | verified at | failed at |\n|---|---|---|---|---|---|---|\n");
    for f in &s.fits {
        for c in &f.classes {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {:?} | {:?} | {:?} | {:?} |",
                f.modulus,
                c.class,
                c.poly.as_ref().map_or("insufficient data".to_string(), |p| p.to_string()),
                c.status,
                c.training,
                c.verified_at,
                c.failed_at
            );
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberProbeEntry {
    pub label: TypeLabel,
    pub elements: PorcSearch,
    pub classes: PorcSearch,
}

/// Empirical PORC test of additive fiber sizes; evidence only.
#[derive(Clone, Debug, Serialize)]
pub struct FiberProbe {
    pub group: String,
    pub qs: Vec<u64>,
    pub entries: Vec<FiberProbeEntry>,
}

impl FiberProbe {
    pub fn all_consistent(&self) -> bool {
        self.entries.iter().all(|e| e.elements.minimal_modulus.is_some() && e.classes.minimal_modulus.is_some())
    }
}

/// Fits the size of every additive fiber `|τ⁻¹(ξ)|` of `gl_n` (elements and orbits) across `qs`.
pub fn additive_fiber_probe(n: usize, qs: &[u32], budget: &Budget, exec: Exec) -> Result<FiberProbe> {
    if qs.len() < 2 {
        return Err(Error::Config("fiber probe needs at least two q".into()));
    }
    let labels = enumerate_types(n, None);
    let mut data: BTreeMap<TypeLabel, (Vec<(u64, i128)>, Vec<(u64, i128)>)> =
        labels.iter().map(|l| (l.clone(), Default::default())).collect();
    for &q in qs {
        let ctx = Context::new(GroupSpec::gl(n, q)?, *budget)?.with_exec(exec);
        let fibers = type_partition_lie(&ctx)?;
        for (label, (els, cls)) in data.iter_mut() {
            let (e, c) = fibers.iter().find(|f| &f.label == label).map_or((0, 0), |f| (f.elements, f.classes));
            els.push((q as u64, e as i128));
            cls.push((q as u64, c as i128));
        }
    }
    let d = n * n;
    let mut entries = Vec::new();
    for (label, (els, cls)) in data {
        let comp = vec![n];
        let es = SweepSeries::new(format!("fiber elements {label}"), n, comp.clone(), els)?;
        let cs = SweepSeries::new(format!("fiber classes {label}"), n, comp, cls)?;
        entries.push(FiberProbeEntry {
            label,
            elements: search(&es, &DEFAULT_MODULI, d)?,
            classes: search(&cs, &DEFAULT_MODULI, d)?,
        });
    }
    Ok(FiberProbe { group: format!("gl{n}"), qs: qs.iter().map(|&q| q as u64).collect(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(points: &[(u64, i128)]) -> SweepSeries {
        SweepSeries::new("test", 2, vec![2], points.to_vec()).unwrap()
    }

    #[test]
    fn class_count_gl2() {
        let s = series(&[(2, 3), (3, 8), (5, 24), (7, 48)]);
        let f = fit(&s, 1, 2).unwrap();
        assert!(f.consistent);
        assert_eq!(f.classes[0].poly.as_ref().unwrap().to_string(), "q^2-1");
        assert_eq!(f.classes[0].status, FitStatus::Fitted);
        assert_eq!(f.classes[0].verified_at, vec![7]);
    }

    #[test]
    fn constant_series() {
        let s = series(&[(2, 1), (3, 1), (5, 1)]);
        let f = fit(&s, 1, 4).unwrap();
        assert_eq!(f.classes[0].poly.as_ref().unwrap().to_string(), "1");
        assert!(f.consistent);
    }

    #[test]
    fn search_prefers_small_modulus_and_flags_failures() {
        let s = series(&[(2, 4), (3, 12), (5, 40), (7, 84)]);
        let res = search(&s, &DEFAULT_MODULI, 4).unwrap();
        assert_eq!(res.minimal_modulus, Some(1));
        assert_eq!(res.best().unwrap().classes[0].poly.as_ref().unwrap().to_string(), "2q^2-2q");
        let m2 = &res.fits[1];
        assert!(!m2.consistent);
        let m6 = &res.fits[2];
        assert!(m6.classes[1].failed_at == vec![7]);
    }

    #[test]
    fn not_polynomial_is_reported() {
        let s = series(&[(2, 1), (3, 2), (4, 5), (5, 3), (7, 0)]);
        let f = fit(&s, 1, 1).unwrap();
        assert_eq!(f.classes[0].status, FitStatus::NotPolynomial);
        assert!(!f.consistent);
    }

    #[test]
    fn json_shape() {
        let s = series(&[(2, 3), (3, 8), (5, 24), (7, 48)]);
        let v = fit_json(&fit(&s, 1, 2).unwrap());
        assert_eq!(v["classes"][0]["poly"], "q^2-1");
        assert_eq!(v["classes"][0]["verified_at"], serde_json::json!([7]));
        assert!(markdown_table(&search(&s, &[1], 2).unwrap()).contains("| 1 | 0 | q^2-1 |"));
    }

    #[test]
    fn gl2_borel_sweep_predicts_q7() {
        let b = Budget::default();
        let s = sweep(2, &[1, 1], Quantity::Group, &[2, 3, 5, 7], &b, Exec::default()).unwrap();
        assert_eq!(s.points.last(), Some(&(7, 84)));
        assert_eq!(search(&s, &DEFAULT_MODULI, 4).unwrap().minimal_modulus, Some(1));
        let s = sweep(2, &[1, 1], Quantity::LieNilradical, &[2, 3, 5, 7], &b, Exec::default()).unwrap();
        assert_eq!(s.points, vec![(2, 4), (3, 20), (5, 112), (7, 324)]);
        // a cubic is not determined by three points
        assert_eq!(search(&s, &DEFAULT_MODULI, 4).unwrap().minimal_modulus, None);
        let s = sweep(2, &[1, 1], Quantity::LieNilradical, &[2, 3, 4, 5, 7], &b, Exec::default()).unwrap();
        let res = search(&s, &DEFAULT_MODULI, 4).unwrap();
        assert_eq!(res.best().unwrap().classes[0].poly.as_ref().unwrap().to_string(), "q^3-3q+2");
    }

    #[test]
    fn empty_sweep_is_config_error() {
        assert!(matches!(sweep(2, &[2], Quantity::Group, &[], &Budget::default(), Exec::default()), Err(Error::Config(_))));
    }

    #[test]
    fn gl1_fiber_probe() {
        let probe = additive_fiber_probe(1, &[2, 3, 4, 5], &Budget::default(), Exec::default()).unwrap();
        let nonzero = probe.entries.iter().find(|e| e.label.to_string() == "{(1,1):[1]}").unwrap();
        // eigenvalue 0 and nonzero eigenvalues share the label; fiber is all of gl_1
        assert_eq!(nonzero.elements.best().unwrap().classes[0].poly.as_ref().unwrap().to_string(), "q");
    }

    proptest! {
        #[test]
        fn interpolation_reproduces_training(coeffs in proptest::collection::vec(-20i128..20, 1..4)) {
            let poly = QPoly::from_ints(&coeffs);
            let pts: Vec<(u64, i128)> = [2u64, 3, 4, 5, 7, 8, 9, 11]
                .iter()
                .map(|&q| (q, poly.eval_integer(q as i128).unwrap()))
                .collect();
            let s = SweepSeries::new("p", 1, vec![1], pts).unwrap();
            for m in DEFAULT_MODULI {
                let f = fit(&s, m, 3).unwrap();
                prop_assert!(m != 1 || f.consistent);
                for c in &f.classes {
                    if let Some(p) = &c.poly {
                        for &q in &c.training {
                            let v = s.points.iter().find(|x| x.0 == q).unwrap().1;
                            prop_assert_eq!(p.eval_integer(q as i128).unwrap(), v);
                        }
                    }
                }
            }
            let res = search(&s, &DEFAULT_MODULI, 3).unwrap();
            prop_assert_eq!(res.minimal_modulus, Some(1));
            prop_assert!(refines(&res.fits[0], &res.fits[1]));
            prop_assert!(refines(&res.fits[1], &res.fits[2]));
        }
    }
}
