//! Knowledge-base engine for the GFO artifact module.
//!
//! A [`kb::KnowledgeBase`] stores ground assertions over a fixed signature,
//! [`folk`] evaluates first-order constraints against it, [`vocab`] holds
//! the GFO vocabulary and axiom catalog, [`turtle`] reads and writes the
//! Turtle encoding and [`modelgen`] searches for small satisfying models.

pub mod folk;
pub mod kb;
pub mod modelgen;
pub mod turtle;
pub mod vocab;
