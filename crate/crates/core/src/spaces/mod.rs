//! Concrete model geometries: Euclidean space, the hyperboloid model of
//! hyperbolic space, and weighted metric trees. Products are assembled in
//! the [`crate::space`] layer.

pub mod euclidean;
pub mod hyperbolic;
pub mod tree;
