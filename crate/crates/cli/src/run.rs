use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::params::Params;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Serialize)]
struct FileHash {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    params: &'a BTreeMap<String, String>,
    inputs: &'a [FileHash],
    outputs: &'a [FileHash],
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Output directory, effective parameters and the files read and written by one command.
pub struct Run {
    pub command: &'static str,
    pub out: PathBuf,
    pub format: Format,
    pub params: Params,
    inputs: Vec<FileHash>,
    outputs: Vec<FileHash>,
}

impl Run {
    pub fn new(command: &'static str, out: PathBuf, format: Format, params: Params) -> Result<Self, CliError> {
        std::fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
        Ok(Self { command, out, format, params, inputs: Vec::new(), outputs: Vec::new() })
    }

    /// Reads an input file and records its content hash.
    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        self.note_input(path, &bytes);
        Ok(bytes)
    }

    pub fn read_text(&mut self, path: &Path) -> Result<String, CliError> {
        String::from_utf8(self.read(path)?).map_err(|_| CliError::input(format!("{}: not valid UTF-8", path.display())))
    }

    /// Records the hash of a file that another component reads.
    pub fn hash_input(&mut self, path: &Path) -> Result<(), CliError> {
        self.read(path).map(|_| ())
    }

    fn note_input(&mut self, path: &Path, bytes: &[u8]) {
        let path = path.display().to_string();
        if !self.inputs.iter().any(|f| f.path == path) {
            self.inputs.push(FileHash { path, sha256: sha256_hex(bytes) });
        }
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.out.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
        std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.outputs.retain(|f| f.path != name);
        self.outputs.push(FileHash { path: name.to_string(), sha256: sha256_hex(bytes) });
        Ok(path)
    }

    /// Records a file that another component wrote under the output directory.
    pub fn track(&mut self, name: &str) -> Result<(), CliError> {
        let path = self.out.join(name);
        let bytes = std::fs::read(&path).map_err(|e| CliError::io(&path, e))?;
        self.outputs.retain(|f| f.path != name);
        self.outputs.push(FileHash { path: name.to_string(), sha256: sha256_hex(&bytes) });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::data(e.to_string()))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// Writes `<stem>.json` and `<stem>.txt`, then prints one of them.
    pub fn report<T: Serialize>(&mut self, stem: &str, value: &T, text: &str) -> Result<(), CliError> {
        self.write_json(&format!("{stem}.json"), value)?;
        self.write(&format!("{stem}.txt"), text.as_bytes())?;
        match self.format {
            Format::Json => println!("{}", serde_json::to_string_pretty(value).map_err(|e| CliError::data(e.to_string()))?),
            Format::Text => print!("{text}"),
        }
        Ok(())
    }

    /// Writes `run_manifest.json`; paths of outputs are relative to the output directory.
    pub fn finish(mut self) -> Result<(), CliError> {
        for k in self.params.unused() {
            eprintln!("warning: config key `{k}` is not used by `{}`", self.command);
        }
        self.outputs.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = RunManifest {
            tool: "lsaw",
            version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            params: self.params.effective(),
            inputs: &self.inputs,
            outputs: &self.outputs,
        };
        let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::data(e.to_string()))?;
        text.push('\n');
        let path = self.out.join("run_manifest.json");
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))
    }
}
