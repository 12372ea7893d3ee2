use num_complex::Complex64;
use serde_json::json;
use xwave_core::opa::{
    fit_power_law, joint_amplitude, schmidt_decompose, schmidt_decompose_combined, velocity_locking_width,
    JointAmplitude, OpaConfig, SMALL_MOMENTA_FRACTION,
};
use xwave_core::xwave::VelocityGrid;

use crate::config::{load, KernelChoice, OpaRun};
use crate::error::{CliError, CliResult};
use crate::output::{num, OutputDir, VERSION};
use crate::RunArgs;

fn build(run: &OpaRun) -> CliResult<OpaConfig> {
    run.field1.validate()?;
    run.field2.validate()?;
    let fraction = run.small_momenta_fraction.unwrap_or(SMALL_MOMENTA_FRACTION);
    let v_max = run
        .uv_grid
        .v_max
        .unwrap_or(fraction * (run.field1.omega1 - run.field2.omega1).abs());
    let grid = VelocityGrid::new(v_max, run.uv_grid.points)?;
    let mut cfg = OpaConfig::new(run.field1, run.field2, run.chi, run.delta, run.p_max, run.map_time, grid)?;
    cfg.small_momenta_fraction = fraction;
    cfg.validate()?;
    if run.p > run.p_max || run.q > run.p_max {
        return Err(CliError::Config(format!(
            "p = {} and q = {} must not exceed p_max = {}",
            run.p, run.q, run.p_max
        )));
    }
    if run.width_times.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(CliError::Config("width_times must be positive and finite".into()));
    }
    Ok(cfg)
}

/// Product of two Gaussians with a linear phase, centred off the origin.
fn separable_amplitude(grid: &VelocityGrid) -> JointAmplitude {
    let s = grid.v_max();
    JointAmplitude::separable(
        grid.clone(),
        |u| Complex64::new((-(u / (0.5 * s)).powi(2)).exp(), 0.0),
        |v| Complex64::from_polar((-((v - 0.1 * s) / (0.4 * s)).powi(2)).exp(), 3.0 * v / s),
    )
}

pub fn run(args: &RunArgs) -> CliResult<()> {
    let loaded = load::<OpaRun>("opa", &args.config, args.natural_units)?;
    let run = &loaded.config;
    let cfg = build(run)?;
    let nodes = cfg.uv_grid.nodes();

    let maps: Vec<JointAmplitude> = match run.kernel {
        KernelChoice::Opa => (0..=run.p_max)
            .flat_map(|p| (0..=run.p_max).map(move |q| (p, q)))
            .map(|(p, q)| joint_amplitude(p, q, &cfg))
            .collect(),
        KernelChoice::Separable => vec![separable_amplitude(&cfg.uv_grid)],
    };

    let schmidt = match (run.kernel, run.combined) {
        (KernelChoice::Opa, true) => schmidt_decompose_combined(&cfg, run.p_max)?,
        (KernelChoice::Opa, false) => {
            let phi = maps
                .iter()
                .find(|m| m.p == run.p && m.q == run.q)
                .expect("every (p, q) pair is mapped");
            schmidt_decompose(phi)?
        }
        (KernelChoice::Separable, _) => schmidt_decompose(&maps[0])?,
    };

    // The locking width is a property of the OPA kernel only.
    let widths: Vec<(f64, f64)> = match run.kernel {
        KernelChoice::Opa => run
            .width_times
            .iter()
            .map(|&t| Ok((t, velocity_locking_width(run.p, run.q, t, &cfg)?)))
            .collect::<CliResult<_>>()?,
        KernelChoice::Separable => Vec::new(),
    };
    let (exponent, stderr) = if widths.len() >= 2 {
        let t: Vec<f64> = widths.iter().map(|w| w.0).collect();
        let w: Vec<f64> = widths.iter().map(|w| w.1).collect();
        let fit = fit_power_law(&t, &w)?;
        (Some(fit.exponent), (widths.len() > 2).then_some(fit.exponent_stderr))
    } else {
        (None, None)
    };

    let out = OutputDir::create(&args.out, &loaded.hash, loaded.units)?;
    for map in &maps {
        let prob = map.probability();
        out.csv(
            &format!("map_p{}_q{}.csv", map.p, map.q),
            &["u", "v", "prob"],
            prob.indexed_iter()
                .map(|((i, j), p)| vec![num(nodes[i]), num(nodes[j]), num(*p)]),
        )?;
    }
    out.csv(
        "widths.csv",
        &["t", "width"],
        widths.iter().map(|(t, w)| vec![num(*t), num(*w)]),
    )?;
    out.csv(
        "schmidt.csv",
        &["i", "lambda"],
        schmidt
            .singular_values
            .iter()
            .enumerate()
            .map(|(i, l)| vec![i.to_string(), num(*l)]),
    )?;
    out.json(
        "summary.json",
        &json!({
            "entropy_nats": schmidt.entropy,
            "schmidt_number": schmidt.schmidt_number,
            "width_exponent": exponent,
            "width_exponent_stderr": stderr,
            "config_hash": loaded.hash,
            "version": VERSION,
        }),
    )?;
    log::info!(
        "opa: entropy {:.6} nats, Schmidt number {:.6}",
        schmidt.entropy,
        schmidt.schmidt_number
    );
    Ok(())
}
