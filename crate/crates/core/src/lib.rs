//! Short quasiconvex augmentation of connected polygonal sets.
//!
//! A connected polyline Γ ⊂ R^d is augmented by polygonal bridges into a network
//! Γ̃ whose length stays comparable to ℋ¹(Γ) and whose intrinsic distance is
//! comparable to Euclidean distance. Every stage is exposed together with the
//! audits that check it.

pub mod error;
pub mod geom;
pub mod spatial;

pub mod nets;
pub mod cubes;
pub mod beta;
pub mod classify;
pub mod bridge;
pub mod network;
pub mod augment;
pub mod route;
pub mod synthetic;

pub mod config;
pub mod corpus;
pub mod io;
pub mod dump;
pub mod render;
pub mod oracle;
pub mod report;

pub use augment::{construct, Construction};
pub use config::Config;
pub use error::{Error, Result};
pub use geom::{Point, PolyCurve};
pub use report::{run_pipeline, Report};
