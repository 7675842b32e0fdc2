//! Exact model of the truncated maximal Lie invariance algebra of the
//! rest-frame system and its megaideal structure.

pub mod algebra;
pub mod linalg;
pub mod megaideals;
pub mod poly;
pub mod realize;
pub mod subspace;

pub use algebra::{antisymmetry_check, jacobi_check, AlgVector, Algebra};
pub use megaideals::{compute_chain, megaideal_chain, ChainEntry, MegaidealChain};
pub use poly::{PolyFn, Q};
pub use realize::{isomorphism_check, isomorphism_check_with, IsomorphismReport, realize, realize_redefined, vf_bracket_at, vf_bracket_exact, Realization};
pub use subspace::{center, centralizer, derived, is_ideal, prop1, Subspace};
