//! Finite ordered groupoids: validation, functors, quotients, actions,
//! enlargements and mapping cocylinders.

pub mod action;
pub mod builders;
pub mod cocylinder;
pub mod dot;
pub mod enlargement;
pub mod error;
pub mod functor;
pub mod groupoid;
pub mod homotopy;
pub mod ids;
pub mod iso;
pub mod mapping;
pub mod poset;
pub mod quotient;
pub mod relation;
pub mod report;
pub mod search;
pub mod subgroupoid;

pub use action::{semidirect_product, GroupoidAction, SemidirectProduct};
pub use cocylinder::{fibration_theorem_pipeline, mapping_cocylinder, MappingCocylinder};
pub use enlargement::{is_enlargement, maximum_enlargement, MaximumEnlargement};
pub use error::{Error, Result};
pub use functor::{
    kernel, star_class, star_class_at, NaturalTransformation, OrderedFunctor, StarClass,
};
pub use groupoid::{product, validate_ogpd, OrderedGroupoid, RawGroupoid};
pub use homotopy::{find_lift, is_lift, path_lift, Covering, HomotopySquare};
pub use ids::{ArrowId, ObjectId};
pub use poset::Poset;
pub use quotient::{factorize, quotient, Factorization, NormalSubgroupoid, QuotientGroupoid};
pub use report::{Axiom, ValidationReport};
pub use search::Budget;
pub use subgroupoid::Subgroupoid;
