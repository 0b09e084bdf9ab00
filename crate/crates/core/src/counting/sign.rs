use std::sync::OnceLock;

use serde::Serialize;

use super::{compositions, k_nil_brute, k_nil_formula_with, Context};
use crate::error::{Error, Result};
use crate::matrix::{Budget, GroupSpec, ParabolicSpec};
use crate::weyl::Partition;

/// Candidate signs attached to `w ∈ W_L` in the nilradical formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignConvention {
    /// `(-1)^{ε_G·ε_L}`
    Product,
    /// `(-1)^{ε_G+ε_L}`
    Sum,
    /// `(-1)^{ε_L + ℓ(ρ(w))}`, i.e. `ε_L·ε_{T_w}`
    TorusRelative,
}

impl SignConvention {
    pub const CANDIDATES: [SignConvention; 3] =
        [SignConvention::Product, SignConvention::Sum, SignConvention::TorusRelative];

    pub fn sign(self, eps_g: usize, eps_l: usize, rho: &Partition) -> i128 {
        let e = match self {
            SignConvention::Product => eps_g * eps_l,
            SignConvention::Sum => eps_g + eps_l,
            SignConvention::TorusRelative => eps_l + rho.len(),
        };
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// `(n, q)` cells used for calibration; every composition of `n` is included.
pub const CALIBRATION_CELLS: [(usize, u32); 3] = [(2, 2), (3, 2), (2, 3)];

/// First candidate reproducing the brute-force count on every calibration cell.
pub fn calibrate_sign(cells: &[(usize, u32)]) -> Result<SignConvention> {
    let mut data = Vec::new();
    for &(n, q) in cells {
        let ctx = Context::new(GroupSpec::gl(n, q)?, Budget::default())?;
        for comp in compositions(n) {
            let p = ParabolicSpec::new(comp)?;
            data.push((k_nil_brute(&ctx, &p)?, ctx_formulae(&ctx, &p)?));
        }
    }
    for (i, cand) in SignConvention::CANDIDATES.iter().enumerate() {
        if data.iter().all(|(brute, formulas)| formulas[i] == *brute) {
            return Ok(*cand);
        }
    }
    Err(Error::Invariant("no sign convention matches the calibration set".into()))
}

fn ctx_formulae(ctx: &Context, p: &ParabolicSpec) -> Result<Vec<i128>> {
    SignConvention::CANDIDATES
        .iter()
        .map(|&s| k_nil_formula_with(ctx, p, s).map(|(v, _)| v))
        .collect()
}

/// The calibrated convention, computed once per process.
pub fn select_sign() -> Result<SignConvention> {
    static CHOICE: OnceLock<std::result::Result<SignConvention, String>> = OnceLock::new();
    CHOICE
        .get_or_init(|| calibrate_sign(&CALIBRATION_CELLS).map_err(|e| e.to_string()))
        .clone()
        .map_err(Error::Invariant)
}
