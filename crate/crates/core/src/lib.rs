//! Monochromatic directed paths in edge-colored digraphs.
//!
//! Two sides of the same question live here. The [`adversary`] module
//! colors the edges of a sparse oriented graph so that no long monochromatic
//! directed path survives; the [`builder`] module extracts a long
//! monochromatic path from any coloring of a pseudorandom tournament. The
//! [`oracle`] module settles small instances exhaustively and is the
//! reference both sides are tested against.

pub mod adversary;
pub mod builder;
pub mod classic;
pub mod config;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod oracle;
pub mod pseudorandom;

pub use adversary::{symmetric_adversary, theorem1_adversary, AdversaryOutput, FamilyPartition};
pub use builder::{
    multicolor_path_finder, symmetric_multicolor_finder, two_color_path_finder, Branch, BuilderCertificate,
};
pub use classic::{gallai_roy, raynaud, GallaiRoy, HamiltonDecomposition, BLUE, RED};
pub use config::ConstantsConfig;
pub use error::{Error, Result};
pub use graph::{Color, DirectedPath, EdgeColoring, OrientedGraph, VertexColoring};
pub use harness::{run_experiment, ExperimentManifest, ResultRecord};
pub use oracle::{arrowing_check, longest_mono_path, min_max_mono_path, OracleResult};
pub use pseudorandom::{Counterexample, PseudorandomnessReport, Tournament};
