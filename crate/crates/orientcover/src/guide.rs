//! The user guide, mirrored from `book/` chapter by chapter.
//!
//! Each submodule's documentation *is* a chapter of the mdbook in the
//! repository's `book/` directory, pulled in verbatim with `include_str!`.
//! Because the chapters live here too, every fenced Rust block in the book
//! runs under `cargo test --doc` — the guide cannot drift from the code it
//! describes. Build the rendered book with `mdbook build book`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/graphs-and-cuts.md")]
pub mod graphs_and_cuts {}

#[doc = include_str!("../../../book/src/partitions.md")]
pub mod partitions {}

#[doc = include_str!("../../../book/src/demands.md")]
pub mod demands {}

#[doc = include_str!("../../../book/src/orientability.md")]
pub mod orientability {}

#[doc = include_str!("../../../book/src/lp-and-separation.md")]
pub mod lp_and_separation {}

#[doc = include_str!("../../../book/src/rounding.md")]
pub mod rounding {}

#[doc = include_str!("../../../book/src/uncrossing.md")]
pub mod uncrossing {}

#[doc = include_str!("../../../book/src/gap.md")]
pub mod gap {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
