//! Pure, allocation-only building blocks of the simulation workbench.
//!
//! Everything here is `no_std` (with `alloc`): the widget/parameter model,
//! the `#@IVISIT:` directive parser, runtime widget semantics, the
//! click/drag pointer automaton, a small software renderer, and the numerics
//! used by the bundled demo simulations. IO, persistence, networking and the
//! engine loop live in the `workbench` host crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod automaton;
pub mod directive;
pub mod image;
pub mod model;
pub mod numerics;
pub mod render;
pub mod widget;

pub use image::ImageBuffer;

/// A position in pixel or data coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}
