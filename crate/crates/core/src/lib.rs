//! Exact computations with little-cubes operads, the box product of operads,
//! finite simplicial sets and fibered operads.

pub mod boxprod;
pub mod cubes;
pub mod fibered;
pub mod operad;
pub mod schema;
pub mod simplicial;
