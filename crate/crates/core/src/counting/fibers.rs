use std::collections::BTreeMap;

use serde::Serialize;

use super::Context;
use crate::error::Result;
use crate::weyl::{classify, Ambient, TypeLabel};

/// Elements and conjugacy classes (adjoint orbits) of one type at a fixed `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeFiber {
    pub label: TypeLabel,
    pub elements: u128,
    pub classes: u128,
}

/// Classifies the whole group (or Lie algebra) by scanning orbits and typing one
/// representative per orbit. Fibers are sorted by label and sum to the ambient size.
pub fn type_partition(ctx: &Context, ambient: Ambient) -> Result<Vec<TypeFiber>> {
    let reps = match ambient {
        Ambient::Group => ctx.group_classes()?,
        Ambient::Lie => ctx.lie_classes()?,
    };
    let f = ctx.group.field();
    let mut fibers: BTreeMap<TypeLabel, (u128, u128)> = BTreeMap::new();
    for r in reps.iter() {
        let (label, _) = classify(&r.representative, f, ambient)?;
        let e = fibers.entry(label).or_default();
        e.0 += r.orbit_size as u128;
        e.1 += 1;
    }
    Ok(fibers
        .into_iter()
        .map(|(label, (elements, classes))| TypeFiber { label, elements, classes })
        .collect())
}

pub fn type_partition_group(ctx: &Context) -> Result<Vec<TypeFiber>> {
    type_partition(ctx, Ambient::Group)
}

pub fn type_partition_lie(ctx: &Context) -> Result<Vec<TypeFiber>> {
    type_partition(ctx, Ambient::Lie)
}
