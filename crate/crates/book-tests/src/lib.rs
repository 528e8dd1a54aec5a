//! Keeps the guide in `book/` honest: every chapter is attached here as a
//! doc comment, so rustdoc compiles and runs its Rust code blocks under
//! `cargo test`. mdBook alone cannot test snippets against local crates
//! (mdBook issue #394); this crate closes that gap — if the library drifts
//! from the book, the build says so.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/grids-and-lenses.md")]
pub mod grids_and_lenses {}

#[doc = include_str!("../../../book/src/two-photon-states.md")]
pub mod two_photon_states {}

#[doc = include_str!("../../../book/src/masks.md")]
pub mod masks {}

#[doc = include_str!("../../../book/src/the-4f-pipeline.md")]
pub mod the_4f_pipeline {}

#[doc = include_str!("../../../book/src/lattice-oracle.md")]
pub mod lattice_oracle {}

#[doc = include_str!("../../../book/src/scenarios.md")]
pub mod scenarios {}
