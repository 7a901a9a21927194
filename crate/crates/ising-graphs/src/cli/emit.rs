//! Output plumbing: deterministic CSV/JSON/SVG emission and the run
//! manifest. Every file is written through [`OutputWriter`] so the
//! manifest can list each artifact with its SHA-256 — the reproducibility
//! contract is "same resolved config, same seed ⇒ byte-identical files",
//! and the hashes make that checkable at a glance.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CliError;

/// Canonical float formatting for CSV cells: 17 significant digits,
/// enough to round-trip any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to audit or replay a run. `config_sha256` is the
/// hash of the persisted resolved config; `tasks` lists the task keys
/// from which per-task RNG streams were derived (stream = ChaCha8 seeded
/// by SHA-256(master_seed ‖ task key)); `outputs` lists every artifact
/// with its hash. Only `timing_ms` varies between identical runs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub config_sha256: String,
    pub rng: String,
    pub master_seed: u64,
    pub jobs: usize,
    pub tasks: Vec<String>,
    pub outputs: Vec<OutputRecord>,
    pub timing_ms: u64,
}

/// Writes artifacts into the run directory, recording name + SHA-256 for
/// the manifest.
pub struct OutputWriter {
    dir: PathBuf,
    outputs: Vec<OutputRecord>,
}

impl OutputWriter {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| {
            CliError::Config(format!("cannot create output dir {}: {e}", dir.display()))
        })?;
        Ok(OutputWriter {
            dir: dir.to_path_buf(),
            outputs: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, content: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, content).map_err(|e| {
            CliError::Config(format!("cannot write {}: {e}", path.display()))
        })?;
        self.outputs.push(OutputRecord {
            path: name.to_string(),
            sha256: sha256_hex(content.as_bytes()),
        });
        Ok(())
    }

    /// Writes `manifest.json` (which lists every other artifact, not
    /// itself) and returns the manifest.
    pub fn finish(
        mut self,
        command: &str,
        config_sha256: String,
        master_seed: u64,
        jobs: usize,
        tasks: Vec<String>,
        timing_ms: u64,
    ) -> Result<RunManifest, CliError> {
        let manifest = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config_sha256,
            rng: "chacha8; stream seed = sha256(master_seed_le || task_key)".to_string(),
            master_seed,
            jobs,
            tasks,
            outputs: std::mem::take(&mut self.outputs),
            timing_ms,
        };
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        let path = self.dir.join("manifest.json");
        std::fs::write(&path, text).map_err(|e| {
            CliError::Config(format!("cannot write {}: {e}", path.display()))
        })?;
        Ok(manifest)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest: [u8; 32] = hasher.finalize().into();
    let mut hex = String::with_capacity(64);
    for b in digest {
        hex.push_str(&format!("{b:02x}"));
    }
    hex
}

/// Builds a CSV from a header and pre-formatted rows. All values this
/// crate emits (integers, floats via [`fmt_f64`], short enum tags) are
/// comma- and quote-free, so no escaping layer is needed.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        debug_assert!(row.iter().all(|cell| !cell.contains([',', '"', '\n'])));
        text.push_str(&row.join(","));
        text.push('\n');
    }
    text
}

pub fn json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

/// A minimal polyline chart: one SVG, multiple named series, linear axes.
/// Plots here are a convenience view of the CSVs, nothing more.
pub fn svg_polyline(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const MARGIN: f64 = 56.0;
    const COLORS: [&str; 6] = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
    ];

    let points: Vec<(f64, f64)> = series.iter().flat_map(|(_, pts)| pts.iter().copied()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if points.is_empty() {
        x0 = 0.0;
        x1 = 1.0;
        y0 = 0.0;
        y1 = 1.0;
    }
    if x1 - x0 < 1e-300 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-300 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" \
         font-family=\"monospace\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.1}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
        W / 2.0
    ));
    // axes
    svg.push_str(&format!(
        "  <line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n  \
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        r = W - MARGIN,
        t = MARGIN,
        b = H - MARGIN
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{x_label}</text>\n",
        W / 2.0,
        H - 14.0
    ));
    svg.push_str(&format!(
        "  <text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{y_label}</text>\n",
        H / 2.0,
        H / 2.0
    ));
    // corner tick labels
    svg.push_str(&format!(
        "  <text x=\"{m}\" y=\"{by}\" text-anchor=\"middle\">{x0:.3}</text>\n  \
         <text x=\"{r}\" y=\"{by}\" text-anchor=\"middle\">{x1:.3}</text>\n  \
         <text x=\"{lx}\" y=\"{b}\" text-anchor=\"end\">{y0:.3}</text>\n  \
         <text x=\"{lx}\" y=\"{t}\" text-anchor=\"end\">{y1:.3}</text>\n",
        m = MARGIN,
        r = W - MARGIN,
        by = H - MARGIN + 16.0,
        lx = MARGIN - 6.0,
        b = H - MARGIN + 4.0,
        t = MARGIN + 4.0
    ));
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        svg.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            path.join(" ")
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" fill=\"{color}\">{name}</text>\n",
            W - MARGIN + 4.0,
            MARGIN + 14.0 * i as f64
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_has_17_significant_digits() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        let x = std::f64::consts::PI;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_shape() {
        let text = csv(
            &["n", "value"],
            &[
                vec!["0".into(), fmt_f64(1.0)],
                vec!["1".into(), fmt_f64(0.5)],
            ],
        );
        assert_eq!(
            text,
            "n,value\n0,1.0000000000000000e0\n1,5.0000000000000000e-1\n"
        );
    }

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let svg = svg_polyline(
            "t",
            "x",
            "y",
            &[("a".into(), vec![(0.0, 0.0), (1.0, 1.0)])],
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("polyline"));
    }
}
