//! Binary image frames: a 16-byte `IVIM` header followed by row-major
//! 8-bit samples.

use workbench_core::ImageBuffer;

pub const MAGIC: [u8; 4] = *b"IVIM";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrameError {
    #[error("frame too large: {width}x{height} exceeds 65535 per side")]
    TooLarge { width: usize, height: usize },
    #[error("bad frame: {0}")]
    Malformed(&'static str),
}

/// Header fields of one binary frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameHeader {
    pub widget_id: u32,
    pub width: u16,
    pub height: u16,
    pub channels: u8,
}

pub fn encode_image_frame(widget_id: u32, buf: &ImageBuffer<u8>) -> Result<Vec<u8>, FrameError> {
    let (w, h) = (buf.width(), buf.height());
    if w > u16::MAX as usize || h > u16::MAX as usize {
        return Err(FrameError::TooLarge { width: w, height: h });
    }
    let mut out = Vec::with_capacity(HEADER_LEN + buf.data().len());
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&widget_id.to_le_bytes());
    out.extend_from_slice(&(w as u16).to_le_bytes());
    out.extend_from_slice(&(h as u16).to_le_bytes());
    out.push(buf.channels() as u8);
    out.extend_from_slice(&[0, 0]);
    out.extend_from_slice(buf.data());
    Ok(out)
}

pub fn decode_header(bytes: &[u8]) -> Result<FrameHeader, FrameError> {
    if bytes.len() < HEADER_LEN {
        return Err(FrameError::Malformed("short header"));
    }
    if bytes[..4] != MAGIC {
        return Err(FrameError::Malformed("bad magic"));
    }
    if bytes[4] != VERSION {
        return Err(FrameError::Malformed("unsupported version"));
    }
    let header = FrameHeader {
        widget_id: u32::from_le_bytes([bytes[5], bytes[6], bytes[7], bytes[8]]),
        width: u16::from_le_bytes([bytes[9], bytes[10]]),
        height: u16::from_le_bytes([bytes[11], bytes[12]]),
        channels: bytes[13],
    };
    if header.channels != 1 && header.channels != 3 {
        return Err(FrameError::Malformed("bad channel count"));
    }
    Ok(header)
}

pub fn decode_image_frame(bytes: &[u8]) -> Result<(u32, ImageBuffer<u8>), FrameError> {
    let h = decode_header(bytes)?;
    let payload = &bytes[HEADER_LEN..];
    let buf = ImageBuffer::from_vec(h.width as usize, h.height as usize, h.channels as usize, payload.to_vec())
        .map_err(|_| FrameError::Malformed("payload length"))?;
    Ok((h.widget_id, buf))
}
