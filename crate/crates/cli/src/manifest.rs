//! Run manifests: version, input hash, resolved scenario and artifact hashes.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use nrho_isac::kv;
use sha2::{Digest, Sha256};

use crate::scenario::Scenario;

pub const FILE: &str = "manifest.txt";

pub const VERSION: &str = env!("NRHO_ISAC_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub struct Manifest<'a> {
    pub scenario_sha256: String,
    pub flags: Vec<&'static str>,
    pub scenario: &'a Scenario,
    pub artifacts: Vec<(String, String)>,
}

impl Manifest<'_> {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[manifest]");
        let _ = writeln!(s, "version = {VERSION}");
        let _ = writeln!(s, "scenario_sha256 = {}", self.scenario_sha256);
        let flags = if self.flags.is_empty() { "none".to_string() } else { self.flags.join(", ") };
        let _ = writeln!(s, "flags = {flags}");
        s.push('\n');
        s.push_str(&self.scenario.render());
        let _ = writeln!(s, "[artifacts]");
        for (name, hash) in &self.artifacts {
            let _ = writeln!(s, "{name} = {hash}");
        }
        s
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join(FILE);
        std::fs::write(&path, self.render()).with_context(|| format!("writing {}", path.display()))
    }
}

/// Hashes each artifact as it sits on disk.
pub fn hash_artifacts(dir: &Path, names: &[String]) -> Result<Vec<(String, String)>> {
    names
        .iter()
        .map(|n| {
            let p = dir.join(n);
            let bytes = std::fs::read(&p).with_context(|| format!("reading {}", p.display()))?;
            Ok((n.clone(), sha256_hex(&bytes)))
        })
        .collect()
}

/// `[section] key` lookup in a manifest file.
pub fn lookup(dir: &Path, section: &str, key: &str) -> Result<Option<String>> {
    let path = dir.join(FILE);
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let entries = kv::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(entries.into_iter().find(|e| e.section == section && e.key == key).map(|e| e.value))
}
