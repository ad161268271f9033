//! Example simulations shipped with the host.

pub mod classifiers;
pub mod datagen;
pub mod decay;
pub mod lif;
pub mod points;

pub use classifiers::Classifiers;
pub use datagen::DataGen;
pub use decay::Decay;
pub use lif::{LifPlot, LifScope};

use crate::engine::Simulation;

/// Name and one-line summary of every demo.
pub const DEMOS: [(&str, &str); 5] = [
    ("decay", "exponential decay x(n+1) = decay * x(n)"),
    ("lif_scope", "leaky integrate-and-fire neuron on an oscilloscope"),
    ("lif_plot", "leaky integrate-and-fire neuron as a line plot"),
    ("datagen", "draw two-class point clouds with the mouse"),
    ("classifiers", "least-squares and kernel classifiers on editable data"),
];

pub fn create(name: &str, seed: u64) -> Option<Box<dyn Simulation>> {
    Some(match name {
        "decay" => Box::new(Decay::default()),
        "lif_scope" => Box::new(LifScope::new(seed)),
        "lif_plot" => Box::new(LifPlot::new(seed)),
        "datagen" => Box::new(DataGen::new(seed)),
        "classifiers" => Box::new(Classifiers::new(seed)),
        _ => return None,
    })
}
