//! Output files. Every file starts with a header line naming the tool
//! version and the config hash; CSV files then carry their column row.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use xwave_core::medium::UnitSystem;
use xwave_core::xwave::FieldEnvelope;

use crate::error::{CliError, CliResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub struct OutputDir {
    root: PathBuf,
    header: String,
}

impl OutputDir {
    pub fn create(root: &Path, hash: &str, units: UnitSystem) -> CliResult<Self> {
        std::fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        let units = match units {
            UnitSystem::Natural => "natural",
            UnitSystem::Si => "si",
        };
        Ok(Self {
            root: root.to_path_buf(),
            header: format!("# xwave {VERSION} config_hash={hash} units={units}"),
        })
    }

    fn open(&self, name: &str) -> CliResult<(PathBuf, BufWriter<File>)> {
        let path = self.root.join(name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        Ok((path, BufWriter::new(file)))
    }

    /// Writes `header`, the column row and one row per record.
    pub fn csv<I>(&self, name: &str, columns: &[&str], rows: I) -> CliResult<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let (path, mut out) = self.open(name)?;
        writeln!(out, "{}", self.header).map_err(|e| CliError::io(&path, e))?;
        let mut writer = csv::Writer::from_writer(out);
        let io = |e: csv::Error| CliError::Input(format!("writing {}: {e}", path.display()));
        writer.write_record(columns).map_err(io)?;
        for row in rows {
            writer.write_record(&row).map_err(io)?;
        }
        writer.flush().map_err(|e| CliError::io(&path, e))?;
        Ok(())
    }

    /// `r,zeta,re,im` for every grid point, radius-major.
    pub fn field(&self, name: &str, field: &FieldEnvelope) -> CliResult<()> {
        let r = field.grid.r.nodes();
        let z = field.grid.zeta.nodes();
        let rows = field.values.indexed_iter().map(|((i, j), a)| {
            vec![num(r[i]), num(z[j]), num(a.re), num(a.im)]
        });
        self.csv(name, &["r", "zeta", "re", "im"], rows)
    }

    pub fn json(&self, name: &str, value: &serde_json::Value) -> CliResult<()> {
        let (path, mut out) = self.open(name)?;
        let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
        writeln!(out, "{text}").map_err(|e| CliError::io(&path, e))?;
        out.flush().map_err(|e| CliError::io(&path, e))
    }
}

/// Shortest round-trip decimal; scientific notation outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
