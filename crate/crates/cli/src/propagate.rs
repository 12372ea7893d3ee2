use std::collections::BTreeMap;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;
use xwave_core::propagate::{l2_discrepancy, propagate_direct, xwave_propagate};
use xwave_core::specfun::QuadratureRule;
use xwave_core::xwave::{
    delta_from_centroid, energy, project_coefficients, xwave_transform, BasisConfig, FieldEnvelope, Spectrum,
};

use crate::config::{extend_hash, load, PropagateRun};
use crate::error::{CliError, CliResult};
use crate::output::{num, OutputDir};
use crate::RunArgs;

/// Reads a `kperp,kz,re,im` table covering a full rectangular grid.
fn read_spectrum(path: &Path) -> CliResult<(Spectrum, Vec<u8>)> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Input(format!("cannot read spectrum {}: {e}", path.display())))?;
    let bad = |msg: String| CliError::Input(format!("{}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(bytes.as_slice());
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["kperp", "kz", "re", "im"] {
        return Err(bad(format!("expected columns kperp,kz,re,im, found {}", headers.iter().collect::<Vec<_>>().join(","))));
    }
    // Keys are bit patterns so that exact grid coordinates are matched.
    let mut samples = BTreeMap::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let mut row = [0.0; 4];
        for (slot, field) in row.iter_mut().zip(record.iter()) {
            *slot = field
                .parse::<f64>()
                .map_err(|e| bad(format!("row {}: {e}", line + 1)))?;
        }
        if record.len() != 4 || row.iter().any(|x| !x.is_finite()) {
            return Err(bad(format!("row {}: expected four finite numbers", line + 1)));
        }
        let key = (OrderedBits(row[0]), OrderedBits(row[1]));
        if samples.insert(key, Complex64::new(row[2], row[3])).is_some() {
            return Err(bad(format!("duplicate sample at kperp={}, kz={}", row[0], row[1])));
        }
    }
    let mut kperp: Vec<f64> = samples.keys().map(|k| k.0 .0).collect();
    let mut kz: Vec<f64> = samples.keys().map(|k| k.1 .0).collect();
    for axis in [&mut kperp, &mut kz] {
        axis.sort_by(f64::total_cmp);
        axis.dedup();
    }
    if kperp.len() * kz.len() != samples.len() {
        return Err(bad(format!(
            "{} samples do not fill the {}×{} grid",
            samples.len(),
            kperp.len(),
            kz.len()
        )));
    }
    let values = Array2::from_shape_fn((kperp.len(), kz.len()), |(i, j)| {
        samples[&(OrderedBits(kperp[i]), OrderedBits(kz[j]))]
    });
    let spectrum = Spectrum::new(kperp, kz, values).map_err(|e| bad(e.to_string()))?;
    Ok((spectrum, bytes))
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrderedBits(f64);

impl Eq for OrderedBits {}

impl PartialOrd for OrderedBits {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderedBits {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

struct Row {
    time: f64,
    discrepancy: f64,
    drift: f64,
    direct: FieldEnvelope,
    xwave: FieldEnvelope,
}

pub fn run(args: &RunArgs) -> CliResult<()> {
    let loaded = load::<PropagateRun>("propagate", &args.config, args.natural_units)?;
    let run = &loaded.config;
    let section = &run.propagate;
    let params = run.medium;
    params.validate()?;
    if section.times.is_empty() || section.times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(CliError::Config("propagate.times must be a non-empty list of non-negative times".into()));
    }
    for (name, tol) in [
        ("l2_tolerance", section.l2_tolerance),
        ("energy_tolerance", section.energy_tolerance),
        ("truncation_tolerance", section.truncation_tolerance),
    ] {
        if !(tol > 0.0) {
            return Err(CliError::Config(format!("propagate.{name} must be positive")));
        }
    }
    let grid = section.grid.build()?;
    let spectrum_path = loaded.base_dir.join(&section.spectrum_file);
    let (spectrum, bytes) = read_spectrum(&spectrum_path)?;
    let spectrum = spectrum.with_interpolation(section.interpolation.into());
    let hash = extend_hash(&loaded.hash, &bytes);

    let delta = match run.basis.delta {
        Some(d) => d,
        None => delta_from_centroid(&spectrum, &params)?,
    };
    let v_grid = run.basis.velocity_grid(&params)?;
    let cfg = BasisConfig::new(delta, run.basis.p_max, v_grid)?
        .with_alpha_rule(QuadratureRule::gauss_laguerre(run.basis.alpha_nodes, delta)?);
    log::info!("propagate: delta = {delta}, {} modes", cfg.n_modes());

    let transform = xwave_transform(&spectrum, &params);
    let projection = project_coefficients(|a, v| transform.eval(a, v), &cfg, &params)?;
    if projection.relative_residual > section.truncation_tolerance {
        log::warn!(
            "truncation residual {:.3e} exceeds {:.1e}; consider a larger p_max",
            projection.relative_residual,
            section.truncation_tolerance
        );
    }
    let coefficients = &projection.coefficients;

    let reference_direct = energy(&propagate_direct(&spectrum, 0.0, &params, &grid)?);
    let reference_xwave = energy(&xwave_propagate(coefficients, &cfg, &params, 0.0, &grid)?);
    let mut rows = Vec::with_capacity(section.times.len());
    for &time in &section.times {
        let direct = propagate_direct(&spectrum, time, &params, &grid)?;
        let xwave = xwave_propagate(coefficients, &cfg, &params, time, &grid)?;
        let discrepancy = l2_discrepancy(&direct, &xwave)?;
        let drift = (energy(&direct) / reference_direct - 1.0)
            .abs()
            .max((energy(&xwave) / reference_xwave - 1.0).abs());
        rows.push(Row {
            time,
            discrepancy,
            drift,
            direct,
            xwave,
        });
    }

    let out = OutputDir::create(&args.out, &hash, loaded.units)?;
    for (i, row) in rows.iter().enumerate() {
        out.field(&format!("direct_t{i}.csv"), &row.direct)?;
        out.field(&format!("xwave_t{i}.csv"), &row.xwave)?;
    }
    out.csv(
        "report.csv",
        &["time", "l2_discrepancy", "energy_drift"],
        rows.iter().map(|r| vec![num(r.time), num(r.discrepancy), num(r.drift)]),
    )?;

    let failures: Vec<String> = rows
        .iter()
        .filter(|r| !(r.discrepancy <= section.l2_tolerance) || !(r.drift <= section.energy_tolerance))
        .map(|r| format!("t={}: discrepancy {:.3e}, energy drift {:.3e}", r.time, r.discrepancy, r.drift))
        .collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "methods disagree beyond tolerance ({:.1e} L², {:.1e} energy): {}",
            section.l2_tolerance,
            section.energy_tolerance,
            failures.join("; ")
        )))
    }
}
