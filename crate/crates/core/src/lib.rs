//! Image kernels for building a joint matting/harmonization dataset from a
//! portrait-matting corpus.
//!
//! - [`imgcore`]: real-valued RGB images, lαβ conversion, bilinear resampling, PNG I/O.
//! - [`matting`]: alpha mattes, trimaps, compositing and trimap-guided prediction fusion.
//! - [`adjust`]: background perturbations (Reinhard transfer, illumination, saturation),
//!   seeded adjustment sampling and fast-marching background inpainting.
//! - [`metrics`]: MSE / SAD / Grad / Conn matting errors and MOS aggregation.
//! - [`losses`]: reconstruction and adversarial loss terms as pure functions.
//!
//! Every operation is a pure function over immutable values, so callers may
//! map them over image sets in parallel without coordination.

pub mod adjust;
mod error;
pub mod imgcore;
pub mod losses;
pub mod matting;
pub mod metrics;
pub(crate) mod morphology;

pub use error::{Error, Result};
pub use imgcore::{ChannelStats, LalphabetaImage, RgbImage};
pub use matting::{AlphaMatte, Trimap, TrimapLabel};
