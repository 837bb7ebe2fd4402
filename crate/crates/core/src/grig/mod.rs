//! The Grigorchuk group as automorphisms of the binary rooted tree.
//!
//! Only this group's recursion is wired in; see [`Gen::decompose`].

mod activity;
mod tree;
mod word;
mod wreath;

pub use activity::{activity_count, is_subexp_bounded_sample, rigidity_depth, Rigidity, SubexpSample};
pub use tree::{BoundaryPoint, Vertex};
pub use word::{words_up_to, Gen, GroupWord};
pub use wreath::{
    act_boundary, act_boundary_prefix, act_vertex, is_identity, section_at, wreath_decompose,
    RootPerm, WreathDecomposition,
};
