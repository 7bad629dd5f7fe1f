//! Versioned JSON persistence for [`PotentialSpec`].

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use uiscatter::{Block, PotentialSpec};

use crate::CliError;

pub const SPEC_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockEntry {
    pub alpha: f64,
    pub n: u32,
    pub d: f64,
    pub conjugated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub version: u32,
    pub k0: f64,
    pub blocks: Vec<BlockEntry>,
    pub metadata: String,
}

impl SpecFile {
    pub fn from_spec(spec: &PotentialSpec) -> Self {
        let blocks = spec
            .blocks()
            .iter()
            .map(|b| BlockEntry { alpha: b.alpha, n: b.n, d: b.d, conjugated: b.conjugated })
            .collect();
        Self { version: SPEC_VERSION, k0: spec.k0(), blocks, metadata: spec.metadata().to_owned() }
    }

    /// Validates the blocks and their ordering.
    pub fn to_spec(&self) -> Result<PotentialSpec, uiscatter::Error> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| Block::new(b.alpha, b.n, self.k0, b.d, b.conjugated))
            .collect::<Result<Vec<_>, _>>()?;
        PotentialSpec::new(self.k0, blocks, self.metadata.clone())
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: SpecFile =
            serde_json::from_str(text).map_err(|e| CliError::io(format!("invalid spec file: {e}")))?;
        if file.version != SPEC_VERSION {
            return Err(CliError::io(format!(
                "unsupported spec version {} (expected {SPEC_VERSION})",
                file.version
            )));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec file serializes") + "\n"
    }
}

pub fn load_spec(path: &Path) -> Result<PotentialSpec, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read spec {}: {e}", path.display())))?;
    SpecFile::parse(&text)?
        .to_spec()
        .map_err(|e| CliError::io(format!("invalid spec {}: {e}", path.display())))
}

pub fn save_spec(path: &Path, spec: &PotentialSpec) -> Result<(), CliError> {
    fs::write(path, SpecFile::from_spec(spec).to_json())
        .map_err(|e| CliError::io(format!("cannot write spec {}: {e}", path.display())))
}
