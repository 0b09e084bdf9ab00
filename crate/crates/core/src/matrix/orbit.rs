use std::collections::HashSet;

use serde::Serialize;

use super::{Group, Matrix};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Number of elements of `group` commuting with `x` (`x` in the group or its Lie algebra).
pub fn centralizer_order(x: &Matrix, group: &Group) -> u64 {
    let f = group.field();
    group.elems.iter().filter(|h| h.commutes_with(x, f)).count() as u64
}

/// Orbit count `(1/|H|) Σ_{h∈H} |Fix(h)|`; a non-integral sum is reported as an invariant violation.
pub fn burnside_count<H, S, F>(acting: &[H], acted: &[S], fixes: F) -> Result<u64>
where
    H: Sync,
    S: Sync,
    F: Fn(&H, &S) -> bool + Sync + Send,
{
    burnside_count_with(Exec::default(), acting, acted, fixes)
}

pub fn burnside_count_with<H, S, F>(exec: Exec, acting: &[H], acted: &[S], fixes: F) -> Result<u64>
where
    H: Sync,
    S: Sync,
    F: Fn(&H, &S) -> bool + Sync + Send,
{
    if acting.is_empty() {
        return Err(Error::Invariant("empty acting set".into()));
    }
    let total = exec.sum(acting, |h| acted.iter().filter(|s| fixes(h, s)).count() as u64);
    let order = acting.len() as u64;
    if total % order != 0 {
        return Err(Error::Invariant(format!("Burnside sum {total} not divisible by |H| = {order}")));
    }
    Ok(total / order)
}

/// One conjugation orbit: its least element, size and the stabilizer order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    #[serde(serialize_with = "ser_matrix")]
    pub representative: Matrix,
    pub orbit_size: u64,
    pub centralizer_order: u64,
}

fn ser_matrix<S: serde::Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&m.serialize())
}

/// Conjugation orbits of `group` on `ambient` (which must be sorted and stable),
/// keeping those that meet `filter`. Representatives are least in enumeration order.
pub fn orbit_representatives(ambient: &[Matrix], group: &Group, filter: impl Fn(&Matrix) -> bool) -> Result<Vec<OrbitRecord>> {
    let f = group.field();
    let order = group.order() as u64;
    let mut seen: HashSet<Matrix> = HashSet::with_capacity(ambient.len());
    let mut out = Vec::new();
    for x in ambient {
        if seen.contains(x) {
            continue;
        }
        let orbit: HashSet<Matrix> = group.pairs().map(|(h, hi)| x.conjugate(h, hi, f)).collect();
        let size = orbit.len() as u64;
        if order % size != 0 {
            return Err(Error::Invariant(format!("orbit size {size} does not divide {order}")));
        }
        let meets = orbit.iter().any(&filter);
        seen.extend(orbit);
        if meets {
            out.push(OrbitRecord { representative: *x, orbit_size: size, centralizer_order: order / size });
        }
    }
    if seen.len() != ambient.len() {
        return Err(Error::Invariant("ambient set is not stable under conjugation".into()));
    }
    Ok(out)
}
