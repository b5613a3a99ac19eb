//! Ordinal regression as three exchangeable parts.
//!
//! A model maps inputs to vectors, a *target function* ([`encoding`]) fixes
//! the vector each class is trained towards, and a *classification
//! function* ([`classify`]) maps a model output back to a class. Swapping
//! either end changes how ordinal structure is exploited without touching
//! the model.
//!
//! Around that core the crate provides weighted Cohen's kappa
//! ([`metrics`]), a small MLP trained with MSE and AdamW ([`model`]),
//! synthetic severity data with patient-wise splits ([`data`]) and a
//! harness that runs the full encoding/classifier comparison ([`harness`]).
//!
//! ```
//! use ordkit::classify::{classify, ClassifierKind};
//! use ordkit::encoding::{Encoding, EncodingKind, OrdinalScale};
//!
//! let scale = OrdinalScale::severity();
//! let soft = Encoding::new(EncodingKind::SoftProgressBar);
//! assert_eq!(soft.encode(&scale, 3).unwrap(), vec![1.0, 1.0, 0.5, 0.0, 0.0]);
//!
//! let targets = soft.target_matrix(&scale).unwrap();
//! let output = [0.9, 0.8, 0.4, 0.1, 0.05];
//! assert_eq!(classify(ClassifierKind::L1Nearest, &output, &targets).unwrap(), 3);
//! ```

pub mod classify;
pub mod data;
pub mod encoding;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod model;

pub use error::{Error, Result};
