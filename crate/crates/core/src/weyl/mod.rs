//! Combinatorics of the Weyl group `S_n` of `GL_n`: partitions, cycle types of Levi Weyl
//! groups, twisted tori, type labels and the torus-membership data entering the formulas.

mod partition;
mod torus;
mod types;

pub use partition::{levi_weyl_classes, z_order, Partition, WeylClass};
pub use torus::{
    all_assignment_classes, delta_membership, lie_torus_order, relative_ranks, torus_order, torus_order_poly,
    weyl_index, TorusAssignment, TwistedTorus,
};
pub use types::{
    classify, class_count, enumerate_shapes, enumerate_types, irreducible_count, nilpotent_of_type, unipotent_centralizer_order, Ambient,
    SpectralData, SpectralFactor, TypeEntry, TypeLabel,
};
