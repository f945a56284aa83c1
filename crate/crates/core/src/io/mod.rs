//! Configuration, artifacts and persistence.

pub mod checkpoint;
pub mod config;
pub mod csv;
pub mod manifest;
pub mod svg;

pub use checkpoint::{read_checkpoint, write_checkpoint, Checkpoint};
pub use config::{ExperimentConfig, PerAxis, Suite};
pub use manifest::{write_json, ManifestBuilder, RunManifest};
