//! Host side of the simulation workbench: persistence, the engine control
//! loop, the WebSocket protocol, bundled demos and the CLI.

pub mod cli;
pub mod demos;
pub mod engine;
pub mod export;
pub mod protocol;
pub mod store;
