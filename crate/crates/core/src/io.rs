//! File formats: dataset, turn log, density spec, samples, saliency table,
//! and run manifest.
//!
//! The dataset is plain text. Line 1 is a JSON header, line 2 the column
//! names, then one row per `(frame, participant)` sorted and dense:
//!
//! ```text
//! {"format":"tempsal-dataset","version":1,"participants":4,"frames":1218,...}
//! frame,participant,qw,qx,qy,qz,speaking
//! 0,0,-1.0000000000000000e0,0.0000000000000000e0,...,1
//! ```
//!
//! Floats are written with 17 significant digits so they parse back exactly.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::density::{
    DiagonalGaussian, FullGaussian, FutureDensity, Gaussian, GaussianMixture, SampleSet,
    StepSequence,
};
use crate::error::{Error, Result};
use crate::saliency::{SaliencyConfig, SaliencyMap};
use crate::sequence::{BehaviorSequence, FEATURE_DIM, FEATURE_NAMES};
use crate::synth::{ConversationConfig, TurnEvent};

pub const DATASET_FORMAT: &str = "tempsal-dataset";
pub const DATASET_VERSION: u32 = 1;
const DATASET_COLUMNS: &str = "frame,participant,qw,qx,qy,qz,speaking";

/// Round-trip-exact float formatting (17 significant digits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetHeader {
    pub format: String,
    pub version: u32,
    pub participants: usize,
    pub frames: usize,
    pub features: Vec<String>,
    /// Generator settings, when the dataset was synthesized.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<ConversationConfig>,
}

pub fn write_dataset<W: Write>(
    out: &mut W,
    sequence: &BehaviorSequence,
    generator: Option<&ConversationConfig>,
) -> Result<()> {
    let header = DatasetHeader {
        format: DATASET_FORMAT.into(),
        version: DATASET_VERSION,
        participants: sequence.participants(),
        frames: sequence.frame_count(),
        features: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        generator: generator.cloned(),
    };
    let json = serde_json::to_string(&header).map_err(|e| schema(e.to_string()))?;
    writeln!(out, "{json}")?;
    writeln!(out, "{DATASET_COLUMNS}")?;
    let mut line = String::with_capacity(128);
    for t in 0..sequence.frame_count() {
        for i in 0..sequence.participants() {
            let f = sequence.features(t, i);
            line.clear();
            write!(line, "{t},{i}").unwrap();
            for v in &f[..4] {
                write!(line, ",{}", fmt_f64(*v)).unwrap();
            }
            write!(line, ",{}", f[4] as u8).unwrap();
            writeln!(out, "{line}")?;
        }
    }
    Ok(())
}

pub fn dataset_to_string(sequence: &BehaviorSequence, generator: Option<&ConversationConfig>) -> String {
    let mut buf = Vec::new();
    write_dataset(&mut buf, sequence, generator).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn read_dataset<R: BufRead>(input: R) -> Result<(DatasetHeader, BehaviorSequence)> {
    let mut lines = input.lines().enumerate();
    let (_, first) = lines.next().ok_or_else(|| schema("dataset is empty"))?;
    let header: DatasetHeader = serde_json::from_str(&first?)
        .map_err(|e| schema(format!("line 1: bad header: {e}")))?;
    if header.format != DATASET_FORMAT {
        return Err(schema(format!("line 1: format is {:?}, expected {DATASET_FORMAT:?}", header.format)));
    }
    if header.version != DATASET_VERSION {
        return Err(schema(format!("line 1: unsupported version {}", header.version)));
    }
    if header.features != FEATURE_NAMES {
        return Err(schema(format!("line 1: features must be {FEATURE_NAMES:?}")));
    }
    let n = header.participants;
    if n == 0 {
        return Err(schema("line 1: participants must be at least 1"));
    }
    let columns = lines.next().map(|(_, l)| l).transpose()?;
    if columns.as_deref().map(str::trim) != Some(DATASET_COLUMNS) {
        return Err(schema(format!("line 2: expected column header {DATASET_COLUMNS:?}")));
    }
    let mut data = Vec::with_capacity(header.frames * n * FEATURE_DIM);
    let mut row = 0usize;
    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 7 {
            return Err(schema(format!("line {lineno}: expected 7 columns, got {}", cols.len())));
        }
        let int = |s: &str, name: &str| -> Result<usize> {
            s.parse().map_err(|_| schema(format!("line {lineno}: bad {name} {s:?}")))
        };
        let (t, i) = (int(cols[0], "frame")?, int(cols[1], "participant")?);
        if (t, i) != (row / n, row % n) {
            return Err(schema(format!(
                "line {lineno}: expected frame {} participant {}, got {t},{i} (rows must be sorted and dense)",
                row / n,
                row % n
            )));
        }
        for (name, s) in FEATURE_NAMES.iter().zip(&cols[2..]) {
            let v: f64 = s
                .parse()
                .map_err(|_| schema(format!("line {lineno}: bad {name} {s:?}")))?;
            data.push(v);
        }
        row += 1;
    }
    if row != header.frames * n {
        return Err(schema(format!(
            "header declares {} frames but found {} rows for {n} participants",
            header.frames, row
        )));
    }
    let seq = BehaviorSequence::new(n, data)?;
    Ok((header, seq))
}

pub fn write_events<W: Write>(out: &mut W, events: &[TurnEvent]) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, events).map_err(|e| schema(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

pub fn read_events(text: &str) -> Result<Vec<TurnEvent>> {
    serde_json::from_str(text).map_err(|e| schema(format!("event log: {e}")))
}

/// JSON description of a [`FutureDensity`], tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensitySpec {
    DiagonalGaussian { means: Vec<f64>, stds: Vec<f64> },
    FullGaussian { mean: Vec<f64>, covariance: Vec<Vec<f64>> },
    GaussianMixture { weights: Vec<f64>, components: Vec<DensitySpec> },
    SampleSet { samples: Vec<Vec<f64>> },
    StepSequence { steps: Vec<DensitySpec> },
}

impl DensitySpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| schema(format!("density spec: {e}")))
    }

    pub fn to_density(&self) -> Result<FutureDensity> {
        self.build("$")
    }

    fn build(&self, path: &str) -> Result<FutureDensity> {
        let at = |e: Error| schema(format!("{path}: {e}"));
        Ok(match self {
            DensitySpec::DiagonalGaussian { means, stds } => {
                DiagonalGaussian::new(means.clone(), stds.clone()).map_err(at)?.into()
            }
            DensitySpec::FullGaussian { mean, covariance } => {
                FullGaussian::from_rows(mean.clone(), covariance)
                    .map_err(|e| schema(format!("{path}.covariance: {e}")))?
                    .into()
            }
            DensitySpec::GaussianMixture { weights, components } => {
                let comps = components
                    .iter()
                    .enumerate()
                    .map(|(i, c)| match c.build(&format!("{path}.components[{i}]"))? {
                        FutureDensity::DiagonalGaussian(g) => Ok(Gaussian::Diagonal(g)),
                        FutureDensity::FullGaussian(g) => Ok(Gaussian::Full(g)),
                        other => Err(schema(format!(
                            "{path}.components[{i}]: kind must be a Gaussian, got {}",
                            other.kind()
                        ))),
                    })
                    .collect::<Result<_>>()?;
                GaussianMixture::new(weights.clone(), comps).map_err(at)?.into()
            }
            DensitySpec::SampleSet { samples } => SampleSet::new(samples).map_err(at)?.into(),
            DensitySpec::StepSequence { steps } => StepSequence::new(
                steps
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.build(&format!("{path}.steps[{i}]")))
                    .collect::<Result<_>>()?,
            )
            .map_err(at)?
            .into(),
        })
    }
}

/// One sample per line, values separated by commas or whitespace; `#` starts a comment.
pub fn parse_samples(text: &str) -> Result<SampleSet> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let row = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| schema(format!("samples line {}: bad value {s:?}", idx + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(schema(format!(
                    "samples line {}: {} values, expected {}",
                    idx + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    SampleSet::new(&rows).map_err(|e| schema(format!("samples: {e}")))
}

/// Columns of a saliency CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyTable {
    pub window_starts: Vec<usize>,
    pub phi: Vec<f64>,
    pub phi_mean: Vec<f64>,
    pub saliency: Vec<f64>,
    pub surprisal: Option<Vec<f64>>,
}

pub const SALIENCY_COLUMNS: [&str; 5] = ["window_start", "phi_nats", "phi_mean_nats", "saliency", "surprisal"];

pub fn saliency_csv(map: &SaliencyMap) -> String {
    let cols = if map.surprisal.is_some() { 5 } else { 4 };
    let mut out = SALIENCY_COLUMNS[..cols].join(",");
    out.push('\n');
    let mean = map.phi_mean().unwrap_or_else(|| vec![f64::NAN; map.len()]);
    for j in 0..map.len() {
        write!(
            out,
            "{},{},{},{}",
            map.window_starts[j],
            fmt_f64(map.phi[j]),
            fmt_f64(mean[j]),
            fmt_f64(map.saliency[j])
        )
        .unwrap();
        if let Some(s) = &map.surprisal {
            write!(out, ",{}", fmt_f64(s[j])).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_saliency_csv(text: &str) -> Result<SaliencyTable> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| schema("saliency table is empty"))?
        .split(',')
        .map(str::trim)
        .collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let mut idx = [0usize; 4];
    for (slot, name) in idx.iter_mut().zip(&SALIENCY_COLUMNS[..4]) {
        *slot = col(name).ok_or_else(|| schema(format!("saliency table: missing column {name:?}")))?;
    }
    let sur = col("surprisal");
    let mut table = SaliencyTable {
        window_starts: vec![],
        phi: vec![],
        phi_mean: vec![],
        saliency: vec![],
        surprisal: sur.map(|_| vec![]),
    };
    for (k, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != header.len() {
            return Err(schema(format!("saliency row {}: {} cells, expected {}", k + 1, cells.len(), header.len())));
        }
        let num = |i: usize| -> Result<f64> {
            cells[i]
                .parse()
                .map_err(|_| schema(format!("saliency row {}: bad {} {:?}", k + 1, header[i], cells[i])))
        };
        table.window_starts.push(
            cells[idx[0]]
                .parse()
                .map_err(|_| schema(format!("saliency row {}: bad window_start", k + 1)))?,
        );
        table.phi.push(num(idx[1])?);
        table.phi_mean.push(num(idx[2])?);
        table.saliency.push(num(idx[3])?);
        if let (Some(i), Some(v)) = (sur, table.surprisal.as_mut()) {
            v.push(num(i)?);
        }
    }
    if table.window_starts.is_empty() {
        return Err(schema("saliency table has no rows"));
    }
    Ok(table)
}

/// Everything needed to reproduce a saliency run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub saliency: SaliencyConfig,
    pub conversation: Option<ConversationConfig>,
    pub oracle_tolerance: f64,
    pub oracle_std_floor: f64,
    /// SHA-256 of the input dataset bytes.
    pub input_digest: String,
    pub created_unix: u64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        write!(s, "{b:02x}").unwrap();
        s
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate, ConversationConfig};

    #[test]
    fn dataset_round_trip_is_exact() {
        let cfg = ConversationConfig { participants: 3, stable_frames: 5, preamble_frames: 2, ..Default::default() };
        let conv = generate(&cfg).unwrap();
        let text = dataset_to_string(&conv.sequence, Some(&cfg));
        let (header, back) = read_dataset(text.as_bytes()).unwrap();
        assert_eq!(back, conv.sequence);
        assert_eq!(header.generator, Some(cfg));
    }

    #[test]
    fn dataset_rejects_gaps_and_bad_header() {
        let conv = generate(&ConversationConfig { stable_frames: 3, preamble_frames: 0, ..Default::default() }).unwrap();
        let text = dataset_to_string(&conv.sequence, None);
        let mut lines: Vec<&str> = text.lines().collect();
        lines.remove(5);
        let err = read_dataset(lines.join("\n").as_bytes()).unwrap_err();
        assert!(err.to_string().contains("sorted and dense"), "{err}");

        let bad = text.replacen("tempsal-dataset", "other", 1);
        assert!(matches!(read_dataset(bad.as_bytes()), Err(Error::Schema(_))));
        assert!(matches!(read_dataset("".as_bytes()), Err(Error::Schema(_))));
    }

    #[test]
    fn density_spec_errors_name_the_field() {
        let err = DensitySpec::parse(r#"{"kind":"diagonal_gaussian","means":[0.0]}"#).unwrap_err();
        assert!(err.to_string().contains("stds"), "{err}");
        let spec = DensitySpec::parse(
            r#"{"kind":"gaussian_mixture","weights":[1.0],
                "components":[{"kind":"diagonal_gaussian","means":[0.0],"stds":[-1.0]}]}"#,
        )
        .unwrap();
        let err = spec.to_density().unwrap_err();
        assert!(err.to_string().contains("components[0]") && err.to_string().contains("stds[0]"), "{err}");
    }

    #[test]
    fn samples_file() {
        let s = parse_samples("# header\n1.0, 2.0\n3 4\n\n5,6 # trailing\n").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.dim(), 2);
        assert!(parse_samples("1,2\n3\n").is_err());
        assert!(parse_samples("x\n").is_err());
    }

    #[test]
    fn saliency_table_requires_columns_and_rows() {
        assert!(parse_saliency_csv("").is_err());
        assert!(parse_saliency_csv("window_start,phi_nats,phi_mean_nats,saliency\n").is_err());
        let err = parse_saliency_csv("window_start,phi_nats\n0,1\n").unwrap_err();
        assert!(err.to_string().contains("phi_mean_nats"));
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
