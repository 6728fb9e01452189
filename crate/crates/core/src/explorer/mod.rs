//! Finite exploration of the modular groupoid: enumeration, orbits, relation
//! certificates, isotropy loops, coverings and unicyclic classification.

mod cache;
mod chark;
mod covering;
mod enumerate;
mod isotropy;
mod orbit;
mod relations;

pub use cache::{cache_dir, cached_forms, cached_forms_in, CACHE_ENV};
pub use chark::{classify_unicyclic, TruncatedGraph, UnicyclicClass};
pub use covering::{double_cover, is_covering, lift_word, CoveringCheck, CoveringMap, Lift};
pub use enumerate::{enumerate_forms, enumerate_types, EnumerateOptions, TypeCensus, TypeClass};
pub use isotropy::{isotropy_generators, IsotropyGenerator};
pub use orbit::{
    doe_word, orbit, orbit_forms, orbit_partition, MoveSet, OrbitArc, OrbitGraph, OrbitNode,
    OrbitOptions,
};
pub use relations::{
    certify_relations, check_involution, check_order4, close_with_doe_word, pentagon_search,
    EdgeCheck, PentagonWitness, RelationReport, SquareCheck,
};
