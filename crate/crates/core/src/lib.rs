//! Rotation distance between rooted binary trees, computed through
//! Thompson's group F and its tree-pair diagrams.
//!
//! Trees are [`Tree`]s; generators act on them by rotations at spine
//! locations ([`rotation`]); reduced tree pairs and normal forms live in
//! [`group`]; restricted rotation distances and graph searches live in
//! [`distance`]; parameterized extremal pairs live in [`family`].

pub mod cache;
pub mod cli;
pub mod distance;
pub mod error;
pub mod family;
pub mod group;
pub mod rotation;
pub mod tree;
pub mod word;

pub use error::{Error, Result};
pub use tree::{parse_tree, Arm, CaretLocation, GTrace, Side, Tree};
pub use word::{parse_word, Generator, Word};
