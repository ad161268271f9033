//! Row-major pixel buffers shared by simulations, renderers and frames.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ImageError {
    #[error("unsupported channel count {0} (expected 1 or 3)")]
    BadChannels(usize),
    #[error("sample count {found} does not match {width}x{height}x{channels}")]
    LengthMismatch {
        width: usize,
        height: usize,
        channels: usize,
        found: usize,
    },
}

/// A `height x width` matrix of pixels with 1 (gray) or 3 (RGB) interleaved
/// channels, stored row by row.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ImageBuffer<T> {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<T>,
}

impl<T: Copy + Default> ImageBuffer<T> {
    /// Allocates a buffer filled with `T::default()`.
    ///
    /// Panics if `channels` is not 1 or 3.
    pub fn new(width: usize, height: usize, channels: usize) -> Self {
        assert!(channels == 1 || channels == 3, "channels must be 1 or 3");
        Self {
            width,
            height,
            channels,
            data: vec![T::default(); width * height * channels],
        }
    }

    pub fn gray(width: usize, height: usize) -> Self {
        Self::new(width, height, 1)
    }

    pub fn rgb(width: usize, height: usize) -> Self {
        Self::new(width, height, 3)
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: T) -> Self {
        let mut buf = Self::new(width, height, channels);
        buf.fill(value);
        buf
    }

    pub fn from_vec(
        width: usize,
        height: usize,
        channels: usize,
        data: Vec<T>,
    ) -> Result<Self, ImageError> {
        if channels != 1 && channels != 3 {
            return Err(ImageError::BadChannels(channels));
        }
        if data.len() != width * height * channels {
            return Err(ImageError::LengthMismatch {
                width,
                height,
                channels,
                found: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn fill(&mut self, value: T) {
        self.data.iter_mut().for_each(|v| *v = value);
    }

    #[inline]
    fn offset(&self, x: usize, y: usize) -> usize {
        (y * self.width + x) * self.channels
    }

    /// Channel values of pixel `(x, y)`, or `None` outside the buffer.
    pub fn pixel(&self, x: usize, y: usize) -> Option<&[T]> {
        if x >= self.width || y >= self.height {
            return None;
        }
        let o = self.offset(x, y);
        Some(&self.data[o..o + self.channels])
    }

    pub fn pixel_mut(&mut self, x: usize, y: usize) -> Option<&mut [T]> {
        if x >= self.width || y >= self.height {
            return None;
        }
        let o = self.offset(x, y);
        let c = self.channels;
        Some(&mut self.data[o..o + c])
    }

    /// First channel of pixel `(x, y)`. Panics when out of bounds.
    pub fn get(&self, x: usize, y: usize) -> T {
        self.pixel(x, y).expect("pixel out of bounds")[0]
    }

    /// Sets every channel of pixel `(x, y)`; out-of-bounds writes are ignored.
    pub fn set(&mut self, x: usize, y: usize, value: T) {
        if let Some(px) = self.pixel_mut(x, y) {
            px.iter_mut().for_each(|v| *v = value);
        }
    }

    /// Applies `f` to every sample, keeping the shape.
    pub fn map<U: Copy + Default>(&self, f: impl Fn(T) -> U) -> ImageBuffer<U> {
        ImageBuffer {
            width: self.width,
            height: self.height,
            channels: self.channels,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl<T> ImageBuffer<T> {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }
}

impl ImageBuffer<u8> {
    /// Replicates a gray buffer into three channels; RGB buffers are cloned.
    pub fn to_rgb(&self) -> ImageBuffer<u8> {
        if self.channels == 3 {
            return self.clone();
        }
        let mut data = Vec::with_capacity(self.data.len() * 3);
        for &v in &self.data {
            data.extend_from_slice(&[v, v, v]);
        }
        ImageBuffer {
            width: self.width,
            height: self.height,
            channels: 3,
            data,
        }
    }

    /// Writes an RGB color, collapsing to its mean on gray buffers.
    pub fn put_rgb(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let channels = self.channels;
        if let Some(px) = self.pixel_mut(x, y) {
            if channels == 3 {
                px.copy_from_slice(&rgb);
            } else {
                px[0] = ((rgb[0] as u16 + rgb[1] as u16 + rgb[2] as u16) / 3) as u8;
            }
        }
    }
}
