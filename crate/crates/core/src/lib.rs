//! Stable models of normal logic programs, their proof schemes, and the two
//! effective translations between programs and trees: recursive trees into
//! finite predicate programs whose stable models are the tree's infinite
//! paths, and finite programs into trees whose infinite paths encode the
//! program's stable models.

pub mod coding;
pub mod ground;
pub mod harness;
pub mod prog_to_tree;
pub mod schemes;
pub mod semantics;
pub mod syntax;
pub mod tree_to_prog;
pub mod trees;
