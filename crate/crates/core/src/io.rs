//! Config files, run records and field snapshots.
//!
//! Structured files are JSON with every float written to 17 significant
//! digits. Time series go to CSV. Snapshots use the little-endian layout
//! described on [`write_snapshot`].

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{preset, presets_of, ExperimentKind, ExperimentSpec, Outcome};
use crate::grid::{Field2D, Grid2D, Space};
use crate::solver::RunRecord;

/// `major.minor`; readers accept any minor of a known major.
pub const SCHEMA_VERSION: &str = "1.0";
const SCHEMA_MAJOR: u32 = 1;

const SNAPSHOT_MAGIC: &[u8; 4] = b"MFNS";
const SNAPSHOT_HEADER: usize = 4 + 4 + 8 + 8 + 8 + 8 + 8;

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigFile {
    pub spec: ExperimentSpec,
    pub output: Option<PathBuf>,
}

fn merge(base: &mut toml::Value, over: toml::Value) {
    match (base, over) {
        (toml::Value::Table(b), toml::Value::Table(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Parses a TOML config. `preset` names the starting point; otherwise `kind`
/// selects the first preset of that kind. Remaining keys override it.
pub fn parse_config_str(text: &str) -> Result<ConfigFile> {
    let mut table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
    let output = match table.remove("output") {
        Some(toml::Value::String(s)) => Some(PathBuf::from(s)),
        Some(_) => return Err(Error::Config("output must be a string path".into())),
        None => None,
    };
    let base = match table.remove("preset") {
        Some(toml::Value::String(name)) => {
            preset(&name).ok_or_else(|| Error::Config(format!("unknown preset '{name}'")))?
        }
        Some(_) => return Err(Error::Config("preset must be a string".into())),
        None => {
            let kind = table
                .get("kind")
                .ok_or_else(|| Error::Config("missing required key: kind (or preset)".into()))?
                .clone()
                .try_into::<ExperimentKind>()
                .map_err(|e| Error::Config(format!("kind: {}", e.message())))?;
            presets_of(kind)
                .into_iter()
                .next()
                .ok_or_else(|| Error::Config(format!("no preset for kind {kind:?}")))?
        }
    };
    let mut value = toml::Value::try_from(&base).map_err(|e| Error::Format(e.to_string()))?;
    merge(&mut value, toml::Value::Table(table));
    let spec: ExperimentSpec = value
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
    spec.solver.validate()?;
    Ok(ConfigFile { spec, output })
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<ConfigFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text)
}

/// Serialises a spec back to TOML, suitable for [`parse_config_str`].
pub fn spec_to_toml(spec: &ExperimentSpec) -> Result<String> {
    toml::to_string(spec).map_err(|e| Error::Format(e.to_string()))
}

/// Compact JSON with floats as `d.dddddddddddddddde±x`.
struct Digits17;

impl serde_json::ser::Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

#[derive(Serialize, Deserialize)]
struct Versioned<T> {
    schema_version: String,
    #[serde(flatten)]
    body: T,
}

fn check_version(v: &str) -> Result<()> {
    let major = v.split('.').next().and_then(|m| m.parse::<u32>().ok());
    match major {
        Some(SCHEMA_MAJOR) => Ok(()),
        _ => Err(Error::Format(format!(
            "unsupported schema version {v}, this reader understands {SCHEMA_MAJOR}.x"
        ))),
    }
}

fn write_versioned<T: Serialize>(path: &Path, body: &T) -> Result<()> {
    let doc = Versioned {
        schema_version: SCHEMA_VERSION.to_string(),
        body,
    };
    write_file(path, to_json_string(&doc)?.as_bytes())
}

fn read_versioned<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raw: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let version = raw
        .get("schema_version")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::Format(format!("{}: missing schema_version", path.display())))?;
    check_version(version)?;
    let doc: Versioned<T> = serde_json::from_value(raw)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    Ok(doc.body)
}

#[derive(Serialize, Deserialize)]
struct RecordBody {
    record: RunRecord,
}

/// Writes `<stem>.json` (full record) and `<stem>.csv` (time series) in `dir`.
pub fn write_record(
    record: &RunRecord,
    dir: impl AsRef<Path>,
    stem: &str,
) -> Result<(PathBuf, PathBuf)> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let json = dir.join(format!("{stem}.json"));
    let csv = dir.join(format!("{stem}.csv"));
    write_versioned(
        &json,
        &RecordBody {
            record: record.clone(),
        },
    )?;
    write_table(record, &csv)?;
    Ok((json, csv))
}

pub fn read_record(path: impl AsRef<Path>) -> Result<RunRecord> {
    read_versioned::<RecordBody>(path.as_ref()).map(|b| b.record)
}

/// Columns `t, mass, energy, hs_alpha_half, sup_norm`, one row per sample.
pub fn write_table(record: &RunRecord, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(["t", "mass", "energy", "hs_alpha_half", "sup_norm"])
        .map_err(|e| csv_error(path, e))?;
    for k in 0..record.times.len() {
        let row = [
            record.times[k],
            record.mass[k],
            record.energy[k],
            record.hs_alpha_half[k],
            record.sup_norm[k],
        ];
        w.write_record(row.iter().map(|v| format!("{v:.16e}")))
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Format(format!("{}: {other:?}", path.display())),
    }
}

#[derive(Serialize, Deserialize)]
struct OutcomeBody {
    spec: ExperimentSpec,
    outcome: Outcome,
}

/// Writes `outcome.json` with the spec echoed for provenance, plus
/// `run-<k>.json` / `run-<k>.csv` for each run record.
pub fn write_outcome(
    spec: &ExperimentSpec,
    outcome: &Outcome,
    dir: impl AsRef<Path>,
) -> Result<PathBuf> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (k, rec) in outcome.records.iter().enumerate() {
        write_record(rec, dir, &format!("run-{k}"))?;
    }
    let mut summary = outcome.clone();
    summary.records.clear();
    let path = dir.join("outcome.json");
    write_versioned(
        &path,
        &OutcomeBody {
            spec: spec.clone(),
            outcome: summary,
        },
    )?;
    Ok(path)
}

/// Layout, all little-endian: `b"MFNS"`, `u32` major version, `u64 nx`,
/// `u64 ny`, `f64 dx`, `f64 dy`, `f64 t`, then `nx * ny` physical samples
/// as `(f64 re, f64 im)` in row-major order (`x` slow, `y` fast).
pub fn write_snapshot(u: &Field2D, t: f64, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let phys = u.physical();
    let g = phys.grid();
    let mut buf = Vec::with_capacity(SNAPSHOT_HEADER + 16 * g.len());
    buf.extend_from_slice(SNAPSHOT_MAGIC);
    buf.extend_from_slice(&SCHEMA_MAJOR.to_le_bytes());
    buf.extend_from_slice(&(g.nx() as u64).to_le_bytes());
    buf.extend_from_slice(&(g.ny() as u64).to_le_bytes());
    for v in [g.dx(), g.dy(), t] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for z in phys.data() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    write_file(path, &buf)
}

fn le_u64(b: &[u8]) -> u64 {
    u64::from_le_bytes(b.try_into().expect("8 bytes"))
}

fn le_f64(b: &[u8]) -> f64 {
    f64::from_le_bytes(b.try_into().expect("8 bytes"))
}

/// Reads a snapshot back as `(field, t)`.
pub fn read_snapshot(path: impl AsRef<Path>) -> Result<(Field2D, f64)> {
    let path = path.as_ref();
    let buf = fs::read(path).map_err(|e| Error::io(path, e))?;
    let bad = |msg: &str| Error::Format(format!("{}: {msg}", path.display()));
    if buf.len() < SNAPSHOT_HEADER || &buf[..4] != SNAPSHOT_MAGIC {
        return Err(bad("not a snapshot file"));
    }
    let major = u32::from_le_bytes(buf[4..8].try_into().expect("4 bytes"));
    if major != SCHEMA_MAJOR {
        return Err(bad(&format!("unsupported snapshot version {major}")));
    }
    let nx = le_u64(&buf[8..16]) as usize;
    let ny = le_u64(&buf[16..24]) as usize;
    let (dx, dy, t) = (
        le_f64(&buf[24..32]),
        le_f64(&buf[32..40]),
        le_f64(&buf[40..48]),
    );
    if buf.len() != SNAPSHOT_HEADER + 16 * nx * ny {
        return Err(bad("payload length does not match the header"));
    }
    let grid = Grid2D::new(nx, ny, 0.5 * nx as f64 * dx, 0.5 * ny as f64 * dy)?;
    let data = buf[SNAPSHOT_HEADER..]
        .chunks_exact(16)
        .map(|c| Complex64::new(le_f64(&c[..8]), le_f64(&c[8..])))
        .collect();
    Ok((Field2D::from_data(&grid, data, Space::Physical)?, t))
}

/// Reads a series where `null` stands for a non-finite value.
pub(crate) fn nullable_series<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<f64>, D::Error> {
    let raw: Vec<Option<f64>> = Deserialize::deserialize(d)?;
    Ok(raw.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect())
}
