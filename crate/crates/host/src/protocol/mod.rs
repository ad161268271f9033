//! Wire protocol: JSON control messages, binary image frames, the client
//! fan-out hub and the HTTP/WebSocket server.

pub mod frame;
pub mod hub;
pub mod message;
pub mod server;

pub use frame::{decode_image_frame, encode_image_frame, FrameError, FrameHeader};
pub use hub::{ClientQueue, Hub, Outgoing};
pub use message::ClientMessage;
pub use server::{RunningServer, ServerConfig, ServerError, DEFAULT_PORT};
