//! Result artifacts: tables and single-run JSON documents, each carrying a
//! metadata block (tool, version, RNG algorithm, canonical config, config
//! hash, timestamp, runtime) so every run is reproducible from its artifact.
//!
//! Determinism contract: re-running a command with identical config and
//! seed reproduces the artifact byte for byte except for the `timestamp`
//! and `runtime_ms` metadata entries.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde_json::Value;

/// 64-bit FNV-1a over a byte string.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &byte in bytes {
        h ^= u64::from(byte);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Canonical text of a config value: serde_json serializes object keys in
/// sorted order (the default map is a BTreeMap), so equal configs always
/// produce equal text.
pub fn canonical_config(config: &Value) -> String {
    config.to_string()
}

/// Hex config hash used to key artifacts and checkpoint files.
pub fn config_hash(config: &Value) -> String {
    format!("{:016x}", fnv1a64(canonical_config(config).as_bytes()))
}

/// The metadata block attached to every artifact, in a fixed key order.
#[derive(Debug, Clone)]
pub struct Meta {
    entries: Vec<(&'static str, String)>,
}

impl Meta {
    /// Builds the block for one run. `runtime_ms` is measured by the
    /// caller and, like `timestamp`, is excluded from the determinism
    /// contract.
    pub fn new(config: &Value, runtime_ms: u128) -> Meta {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Meta {
            entries: vec![
                ("tool", "cycburst".to_string()),
                ("version", env!("CARGO_PKG_VERSION").to_string()),
                ("rng", cycburst::RNG_ALGORITHM.to_string()),
                ("config", canonical_config(config)),
                ("config_hash", config_hash(config)),
                ("timestamp", timestamp.to_string()),
                ("runtime_ms", runtime_ms.to_string()),
            ],
        }
    }

    fn to_json(&self) -> Value {
        let map: BTreeMap<String, Value> = self
            .entries
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
            .collect();
        Value::Object(map.into_iter().collect())
    }
}

/// A result table: named columns and rows of JSON scalars. Row order is
/// deterministic for a fixed config and seed.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Table {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    /// Appends a row, which must match the column count.
    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width {} does not match {} columns",
            row.len(),
            self.columns.len()
        );
        self.rows.push(row);
    }
}

/// A finished artifact: either a table or a single-run JSON document.
/// JSON documents ignore the `--format` flag (they have no tabular form).
#[derive(Debug, Clone)]
pub enum Artifact {
    Table(Table),
    Json(Value),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(x) => x.to_string(),
        Value::Number(x) => x.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_csv(meta: &Meta, table: &Table) -> Result<String> {
    let mut out = String::new();
    for (k, v) in &meta.entries {
        out.push_str(&format!("# {k}={v}\n"));
    }
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(&table.columns)?;
    for row in &table.rows {
        wtr.write_record(row.iter().map(cell_text))?;
    }
    out.push_str(std::str::from_utf8(&wtr.into_inner()?)?);
    Ok(out)
}

fn render_json(meta: &Meta, artifact: &Artifact) -> Result<String> {
    let body = match artifact {
        Artifact::Table(table) => serde_json::json!({
            "meta": meta.to_json(),
            "columns": table.columns,
            "rows": table.rows,
        }),
        Artifact::Json(doc) => {
            let mut map = doc
                .as_object()
                .cloned()
                .unwrap_or_else(serde_json::Map::new);
            map.insert("meta".to_string(), meta.to_json());
            Value::Object(map)
        }
    };
    Ok(format!("{}\n", serde_json::to_string_pretty(&body)?))
}

/// Renders the artifact and writes it to `out` (or stdout when absent).
pub fn write_artifact(
    artifact: &Artifact,
    meta: &Meta,
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    let text = match (artifact, format) {
        (Artifact::Table(table), Format::Csv) => render_csv(meta, table)?,
        (_, Format::Json) | (Artifact::Json(_), _) => render_json(meta, artifact)?,
    };
    match out {
        Some(path) => {
            std::fs::write(path, text)
                .with_context(|| format!("writing artifact to {}", path.display()))?;
        }
        None => {
            print!("{text}");
            std::io::stdout().flush()?;
        }
    }
    Ok(())
}

/// Checkpoint sidecar for long sweeps: `<out>.progress` holds the config
/// hash followed by one JSON line per completed cell. A rerun with the
/// same config resumes from the completed cells; the sidecar is deleted
/// once the artifact is written. Runs without `--out` have no sidecar.
pub struct Checkpoint {
    path: PathBuf,
    file: File,
    done: BTreeMap<String, Vec<Value>>,
}

impl Checkpoint {
    /// Opens (or creates) the sidecar next to `out`. Existing progress is
    /// loaded only when the recorded config hash matches; otherwise the
    /// sidecar is restarted for the new config.
    pub fn open(out: Option<&Path>, hash: &str) -> Result<Option<Checkpoint>> {
        let Some(out) = out else { return Ok(None) };
        let mut path = out.to_path_buf();
        path.set_file_name(format!(
            "{}.progress",
            out.file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "artifact".to_string())
        ));
        let mut done = BTreeMap::new();
        if let Ok(existing) = File::open(&path) {
            let mut lines = BufReader::new(existing).lines();
            let header = lines.next().transpose()?.unwrap_or_default();
            if header == format!("config_hash={hash}") {
                for line in lines {
                    let line = line?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    let entry: Value = serde_json::from_str(&line)
                        .with_context(|| format!("corrupt checkpoint line: {line}"))?;
                    let key = entry["key"]
                        .as_str()
                        .context("checkpoint entry without key")?
                        .to_string();
                    let row = entry["row"]
                        .as_array()
                        .context("checkpoint entry without row")?
                        .clone();
                    done.insert(key, row);
                }
            }
        }
        // rewrite the header (and any still-valid progress) so a stale or
        // corrupt sidecar never survives into the new run
        let mut file = File::create(&path)
            .with_context(|| format!("creating checkpoint {}", path.display()))?;
        writeln!(file, "config_hash={hash}")?;
        for (key, row) in &done {
            writeln!(
                file,
                "{}",
                serde_json::json!({ "key": key, "row": row })
            )?;
        }
        file.flush()?;
        drop(file);
        let file = OpenOptions::new().append(true).open(&path)?;
        Ok(Some(Checkpoint { path, file, done }))
    }

    /// The stored row for a completed cell, if any.
    pub fn get(&self, key: &str) -> Option<&Vec<Value>> {
        self.done.get(key)
    }

    /// Records a completed cell and flushes it to disk immediately.
    pub fn record(&mut self, key: &str, row: &[Value]) -> Result<()> {
        writeln!(
            self.file,
            "{}",
            serde_json::json!({ "key": key, "row": row })
        )?;
        self.file.flush()?;
        self.done.insert(key.to_string(), row.to_vec());
        Ok(())
    }

    /// Removes the sidecar after the artifact has been written.
    pub fn finish(self) -> Result<()> {
        drop(self.file);
        match std::fs::remove_file(&self.path) {
            Ok(()) => Ok(()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(()),
            Err(e) => Err(e.into()),
        }
    }
}

/// Runs `work` for every cell key in order, resuming completed cells from
/// the checkpoint, and returns the rows in cell order.
pub fn run_cells<F>(
    keys: &[String],
    checkpoint: &mut Option<Checkpoint>,
    mut work: F,
) -> Result<Vec<Vec<Value>>>
where
    F: FnMut(usize, &str) -> Result<Vec<Value>>,
{
    let mut rows = Vec::with_capacity(keys.len());
    for (index, key) in keys.iter().enumerate() {
        if let Some(cp) = checkpoint.as_ref() {
            if let Some(row) = cp.get(key) {
                rows.push(row.clone());
                continue;
            }
        }
        let row = work(index, key)?;
        if let Some(cp) = checkpoint.as_mut() {
            cp.record(key, &row)?;
        }
        rows.push(row);
    }
    Ok(rows)
}
