use xwave_core::specfun::QuadratureRule;
use xwave_core::xwave::{eval_field_grid, orthonormality_matrix, BasisConfig, FieldGrid, XWaveSpectrum};

use crate::config::{load, BasisRun};
use crate::error::{CliError, CliResult};
use crate::output::{num, OutputDir};
use crate::RunArgs;

struct Plan {
    cfg: BasisConfig,
    alphas: Vec<f64>,
    field_grid: Option<FieldGrid>,
}

fn plan(run: &BasisRun) -> CliResult<Plan> {
    run.medium.validate()?;
    let delta = run
        .basis
        .delta
        .ok_or_else(|| CliError::Config("basis.delta is required".into()))?;
    let v_grid = run.basis.velocity_grid(&run.medium)?;
    let cfg = BasisConfig::new(delta, run.basis.p_max, v_grid)?
        .with_alpha_rule(QuadratureRule::gauss_laguerre(run.basis.alpha_nodes, delta)?);

    let out = &run.output;
    if out.alpha_points < 2 {
        return Err(CliError::Config("output.alpha_points must be at least 2".into()));
    }
    let alpha_max = out
        .alpha_max
        .unwrap_or((4.0 * (run.basis.p_max as f64 + 1.0) + 40.0) / delta);
    if !(alpha_max > 0.0) || !alpha_max.is_finite() {
        return Err(CliError::Config(format!("output.alpha_max must be positive, got {alpha_max}")));
    }
    let alphas = (0..out.alpha_points)
        .map(|i| alpha_max * i as f64 / (out.alpha_points - 1) as f64)
        .collect();

    let field_grid = if out.fields {
        if out.velocities.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config("output.velocities must be finite".into()));
        }
        let r_max = out.r_max.unwrap_or(5.0 * delta / run.medium.transverse_scale());
        let zeta_max = out.zeta_max.unwrap_or(5.0 * delta);
        if !(r_max > 0.0) || !(zeta_max > 0.0) || out.r_points < 2 || out.zeta_points < 2 {
            return Err(CliError::Config(
                "field grid needs positive extents and at least two points per axis".into(),
            ));
        }
        Some(FieldGrid::uniform(r_max, out.r_points, -zeta_max, zeta_max, out.zeta_points)?)
    } else {
        None
    };
    Ok(Plan { cfg, alphas, field_grid })
}

pub fn run(args: &RunArgs) -> CliResult<()> {
    let loaded = load::<BasisRun>("basis", &args.config, args.natural_units)?;
    let run = &loaded.config;
    let plan = plan(run)?;
    let params = run.medium;
    let cfg = &plan.cfg;

    // Everything is computed before the output directory is touched.
    let specs: Vec<XWaveSpectrum> = (0..cfg.n_modes())
        .map(|p| XWaveSpectrum::new(p, params, cfg.delta))
        .collect::<Result<_, _>>()?;
    let mut spectra = Vec::with_capacity(specs.len() * plan.alphas.len());
    for spec in &specs {
        for &a in &plan.alphas {
            spectra.push(vec![spec.p.to_string(), num(a), num(spec.eval(a)?)]);
        }
    }
    let gram = orthonormality_matrix(cfg, &params)?;
    let mut fields = Vec::new();
    if let Some(grid) = &plan.field_grid {
        for spec in &specs {
            for (j, &v) in run.output.velocities.iter().enumerate() {
                fields.push((spec.p, j, eval_field_grid(spec, v, grid)?));
            }
        }
    }

    let out = OutputDir::create(&args.out, &loaded.hash, loaded.units)?;
    out.csv("spectra.csv", &["p", "alpha", "f"], spectra)?;
    let n = cfg.n_modes();
    out.csv(
        "orthonormality.csv",
        &["p", "q", "value"],
        (0..n).flat_map(|p| (0..n).map(move |q| (p, q))).map(|(p, q)| {
            vec![p.to_string(), q.to_string(), num(gram[[p, q]])]
        }),
    )?;
    for (p, j, field) in &fields {
        out.field(&format!("field_p{p}_v{j}.csv"), field)?;
    }
    log::info!("basis: {} modes written to {}", n, args.out.display());
    Ok(())
}
