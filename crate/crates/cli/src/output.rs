//! Output bundle: summary JSON, CSV data and plot files, the resolved
//! config and a manifest of SHA-256 hashes. The bundle is assembled in a
//! temporary sibling directory and renamed into place, so a failed run
//! leaves nothing behind.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// Floats are written with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    I(i64),
    U(u64),
    B(bool),
    S(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => fmt_f64(*x),
            Cell::I(x) => x.to_string(),
            Cell::U(x) => x.to_string(),
            Cell::B(b) => (*b as u8).to_string(),
            Cell::S(s) => {
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}
impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::U(x as u64)
    }
}
impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::U(x)
    }
}
impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::I(x)
    }
}
impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::B(x)
    }
}
impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_string())
    }
}
impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::S(x)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len(), "row width in {}", self.name);
        self.rows.push(row);
    }

    /// CSV text; APPROXIMATE labels go on leading `#` lines above the header.
    pub fn render(&self, labels: &[String]) -> String {
        let mut s = String::new();
        for l in labels {
            s.push_str("# APPROXIMATE: ");
            s.push_str(l);
            s.push('\n');
        }
        s.push_str(&self.header.join(","));
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(Cell::render).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// What an experiment produces before it is written out.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub result: Map<String, Value>,
    pub data: Vec<Table>,
    pub plots: Vec<Table>,
    /// APPROXIMATE-mode labels; non-empty marks the whole run.
    pub approximate: Vec<String>,
}

impl Artifacts {
    pub fn set(&mut self, key: &str, v: impl Serialize) {
        self.result.insert(key.to_string(), serde_json::to_value(v).expect("serializable result"));
    }

    pub fn approximate(&mut self, label: impl Into<String>) {
        let l = label.into();
        if !self.approximate.contains(&l) {
            self.approximate.push(l);
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone)]
pub struct Bundle {
    pub dir: PathBuf,
    pub manifest: Vec<ManifestEntry>,
    pub summary: Value,
}

/// Files of a bundle as (relative path, contents), in write order.
pub fn render_files(kind: &str, seed: u64, resolved_toml: &str, art: &Artifacts) -> (Value, Vec<(String, String)>) {
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "seed": seed,
        "approximate": !art.approximate.is_empty(),
        "approximate_labels": art.approximate,
        "result": Value::Object(art.result.clone()),
    });
    let mut files = vec![
        ("summary.json".to_string(), serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"),
        ("config.resolved.toml".to_string(), resolved_toml.to_string()),
    ];
    for t in &art.data {
        files.push((format!("data/{}.csv", t.name), t.render(&art.approximate)));
    }
    for t in &art.plots {
        files.push((format!("plot/{}.csv", t.name), t.render(&art.approximate)));
    }
    (summary, files)
}

pub fn manifest_of(files: &[(String, String)]) -> Vec<ManifestEntry> {
    let mut m: Vec<ManifestEntry> = files
        .iter()
        .map(|(p, c)| ManifestEntry { path: p.clone(), sha256: hex::encode(Sha256::digest(c.as_bytes())), bytes: c.len() as u64 })
        .collect();
    m.sort_by(|a, b| a.path.cmp(&b.path));
    m
}

/// Writes the bundle atomically to `dir`, replacing an earlier bundle there.
pub fn write_bundle(dir: &Path, files: &[(String, String)], summary: Value) -> io::Result<Bundle> {
    let parent = match dir.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent)?;
    let staging = tempfile::Builder::new().prefix(".phasefkg-staging-").tempdir_in(&parent)?;
    for (rel, contents) in files {
        let path = staging.path().join(rel);
        if let Some(p) = path.parent() {
            fs::create_dir_all(p)?;
        }
        fs::write(&path, contents)?;
    }
    let manifest = manifest_of(files);
    let text = serde_json::to_string_pretty(&json!({ "schema_version": SCHEMA_VERSION, "files": manifest }))
        .expect("manifest serializes")
        + "\n";
    fs::write(staging.path().join("manifest.json"), text)?;
    if dir.exists() {
        if dir.join("manifest.json").exists() || is_empty_dir(dir)? {
            fs::remove_dir_all(dir)?;
        } else {
            return Err(io::Error::new(
                io::ErrorKind::AlreadyExists,
                format!("{} exists and is not a phasefkg output directory", dir.display()),
            ));
        }
    }
    let staged = staging.keep();
    if let Err(e) = fs::rename(&staged, dir) {
        let _ = fs::remove_dir_all(&staged);
        return Err(e);
    }
    Ok(Bundle { dir: dir.to_path_buf(), manifest, summary })
}

fn is_empty_dir(p: &Path) -> io::Result<bool> {
    Ok(p.is_dir() && fs::read_dir(p)?.next().is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_formatting() {
        let mut t = Table::new("t", &["a", "b", "c"]);
        t.push(vec![0.1.into(), 3usize.into(), "x,y".into()]);
        assert_eq!(t.render(&[]), "a,b,c\n1.0000000000000001e-1,3,\"x,y\"\n");
        assert!(t.render(&["proxy".into()]).starts_with("# APPROXIMATE: proxy\na,b,c\n"));
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
    }
}
