//! Generators, dataset files, the verification suite and report tables.

pub mod generate;
pub mod io;
pub mod report;
pub mod verify;

use serde::{Deserialize, Serialize};

use crate::complex_plane::DEFAULT_QUADRUPLE_CAP;
use crate::incidence::DEFAULT_TRIPLE_CAP;

/// Settings shared by every command. Equal configs give byte-identical
/// outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentConfig {
    pub seed: u64,
    pub cap_quadruples: usize,
    pub cap_triples: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig { seed: 0, cap_quadruples: DEFAULT_QUADRUPLE_CAP, cap_triples: DEFAULT_TRIPLE_CAP }
    }
}

impl ExperimentConfig {
    pub fn verify_options(&self) -> verify::VerifyOptions {
        verify::VerifyOptions { seed: self.seed, cap_quadruples: self.cap_quadruples, cap_triples: self.cap_triples }
    }
}
