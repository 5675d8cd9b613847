//! Batch execution: one row per configured input, errors captured per row.

use num_complex::Complex64;

use campanato::carleson::{carleson_norm, distance_estimate, distance_profile, MeasureDensity};
use campanato::composition::{
    bloch_composition_criterion, counting_checks, mobius_composition_criterion,
    paley_composition_criterion, splitting_ratio, stanton_norm,
};
use campanato::seminorm::{
    bloch_norm, campanato_seminorm, hardy_norm, lp_star_seminorm, mobius_seminorm, IndexParams,
    LpStarVariant,
};
use campanato::{FunctionSpec, GridConfig, SelfMapSpec};

use crate::config::{JobConfig, Task};
use crate::report::{render_witness, Report, Row};
use crate::CliError;

pub fn run_job(config: &JobConfig) -> Result<Report, CliError> {
    let rows = match config.task {
        Task::Norm => norm_job(config)?,
        Task::Carleson => carleson_job(config)?,
        Task::Compose => compose_job(config)?,
        Task::Distance => distance_job(config)?,
        Task::Verify => {
            return Err(CliError::Config(
                "verify configs run through the `verify` subcommand".into(),
            ))
        }
    };
    Ok(Report::new(rows))
}

/// Default derivative-weight exponent for the indices: the one the embedding
/// pairs with `(p, eta)`.
fn default_alpha(config: &JobConfig) -> f64 {
    config
        .alpha
        .unwrap_or((config.p + 1.0 - config.eta) / config.p)
}

fn op_name<'a>(config: &'a JobConfig, default: &'a str) -> &'a str {
    config.op.as_deref().unwrap_or(default)
}

fn require<T>(items: &[T], field: &str, task: &str) -> Result<(), CliError> {
    if items.is_empty() {
        return Err(CliError::Config(format!(
            "field `{field}`: {task} jobs need at least one entry"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- norm ----

fn norm_job(config: &JobConfig) -> Result<Vec<Row>, CliError> {
    let op = op_name(config, "campanato");
    require(&config.functions, "functions", "norm")?;
    let params = IndexParams::new(config.p, config.eta)
        .map_err(|e| CliError::Config(format!("field `p`/`eta`: {e}")))?;
    let mut rows = Vec::new();
    for (k, f) in config.functions.iter().enumerate() {
        let row = Row::new(k, function_label(f), op).with_indices(config.p, config.eta);
        let row = match norm_value(op, f, params, config, &config.grid) {
            Ok((value, witness, flags)) => {
                let mut row = row;
                row.value = Some(value);
                row.witness = witness;
                row.flags = flags;
                if config.refine {
                    match norm_value(op, f, params, config, &config.grid.refined()) {
                        Ok((refined, _, _)) => row.refine(refined),
                        Err(e) => row.error(&e),
                    }
                } else {
                    row
                }
            }
            Err(e) => row.error(&e),
        };
        rows.push(row);
    }
    Ok(rows)
}

fn norm_value(
    op: &str,
    f: &FunctionSpec,
    params: IndexParams,
    config: &JobConfig,
    grid: &GridConfig,
) -> campanato::Result<(f64, String, Vec<String>)> {
    let from_report = |r: campanato::seminorm::SeminormReport| {
        let witness = render_witness(&r.witness);
        let flags = r.flags.iter().map(|f| f.to_string()).collect();
        (r.value, witness, flags)
    };
    match op {
        "campanato" => {
            let report = campanato_seminorm(f, params, &grid.boundary_arcs(), &grid.circle()?)?;
            Ok(from_report(report))
        }
        "mobius" => {
            let report = mobius_seminorm(f, params, &grid.wgrid()?, &grid.circle()?)?;
            Ok(from_report(report))
        }
        "lp_star" => {
            let report = lp_star_seminorm(
                f,
                params,
                LpStarVariant::Analytic,
                &grid.boundary_arcs(),
                &grid.radial()?,
            )?;
            Ok(from_report(report))
        }
        "bloch" => {
            let report = bloch_norm(f, default_alpha(config), &grid.disk()?)?;
            Ok(from_report(report))
        }
        "hardy" => {
            let value = hardy_norm(f, config.p, &grid.circle()?)?;
            Ok((value, String::new(), vec![]))
        }
        other => Err(campanato::Error::InvalidSpec(format!(
            "unknown norm op `{other}` (expected campanato, mobius, lp_star, bloch, or hardy)"
        ))),
    }
}

// ------------------------------------------------------------ carleson ----

fn carleson_job(config: &JobConfig) -> Result<Vec<Row>, CliError> {
    let op = op_name(config, "norm");
    if op != "norm" {
        return Err(CliError::Config(format!(
            "field `op`: unknown carleson op `{op}` (expected norm)"
        )));
    }
    require(&config.densities, "densities", "carleson")?;
    let mut rows = Vec::new();
    for (k, rho) in config.densities.iter().enumerate() {
        let row = Row::new(k, density_label(rho), "carleson-norm")
            .with_indices(f64::NAN, config.eta);
        let sweep = |grid: &GridConfig| -> campanato::Result<_> {
            carleson_norm(rho, config.eta, &grid.box_arcs(), &grid.disk()?)
        };
        let row = match sweep(&config.grid) {
            Ok(report) => {
                let row = row.absorb(&report);
                if config.refine {
                    match sweep(&config.grid.refined()) {
                        Ok(refined) => row.refine(refined.value),
                        Err(e) => row.error(&e),
                    }
                } else {
                    row
                }
            }
            Err(e) => row.error(&e),
        };
        rows.push(row);
    }
    Ok(rows)
}

// ------------------------------------------------------------- compose ----

fn compose_job(config: &JobConfig) -> Result<Vec<Row>, CliError> {
    let op = op_name(config, "stanton");
    require(&config.self_maps, "self_maps", "compose")?;
    match op {
        "stanton" | "splitting" => paired_compose(config, op),
        "counting" => counting_rows(config),
        "mobius-criterion" | "bloch-criterion" | "paley-criterion" => criterion_rows(config, op),
        other => Err(CliError::Config(format!(
            "field `op`: unknown compose op `{other}` (expected stanton, counting, splitting, \
             mobius-criterion, bloch-criterion, or paley-criterion)"
        ))),
    }
}

/// Pairing rule for (function, self-map) operations: a single function fans
/// out over all maps, a single map over all functions, and equal-length
/// lists zip.
fn pair_indices(nf: usize, nm: usize) -> Result<Vec<(usize, usize)>, CliError> {
    if nf == nm {
        Ok((0..nf).map(|k| (k, k)).collect())
    } else if nf == 1 {
        Ok((0..nm).map(|k| (0, k)).collect())
    } else if nm == 1 {
        Ok((0..nf).map(|k| (k, 0)).collect())
    } else {
        Err(CliError::Config(format!(
            "field `functions`/`self_maps`: {nf} functions cannot pair with {nm} self-maps \
             (need equal lengths or a singleton side)"
        )))
    }
}

fn paired_compose(config: &JobConfig, op: &str) -> Result<Vec<Row>, CliError> {
    require(&config.functions, "functions", "compose")?;
    let pairs = pair_indices(config.functions.len(), config.self_maps.len())?;
    let mut rows = Vec::new();
    for (row_idx, (fi, mi)) in pairs.into_iter().enumerate() {
        let f = &config.functions[fi];
        let phi = &config.self_maps[mi];
        let label = format!("{} o {}", function_label(f), map_label(phi));
        let row = Row::new(row_idx, label, op).with_indices(config.p, f64::NAN);
        let run = |grid: &GridConfig| -> campanato::Result<(f64, String)> {
            match op {
                "stanton" => {
                    let report = stanton_norm(f, phi, config.p, &grid.disk()?)?;
                    let detail = if report.skipped_mass > 0.0 {
                        format!("skipped_mass={:.3e}", report.skipped_mass)
                    } else {
                        String::new()
                    };
                    Ok((report.value, detail))
                }
                _ => {
                    let report = splitting_ratio(f, phi, config.p, &grid.circle()?)?;
                    let detail = format!(
                        "composed={:.6e} outer={:.6e} inner={:.6e}",
                        report.composed, report.outer_norm, report.inner_norm
                    );
                    Ok((report.ratio, detail))
                }
            }
        };
        let row = match run(&config.grid) {
            Ok((value, detail)) => {
                let mut row = row;
                row.value = Some(value);
                row.detail = detail;
                if config.refine {
                    match run(&config.grid.refined()) {
                        Ok((refined, _)) => row.refine(refined),
                        Err(e) => row.error(&e),
                    }
                } else {
                    row
                }
            }
            Err(e) => row.error(&e),
        };
        rows.push(row);
    }
    Ok(rows)
}

/// The counting op emits two rows per map: the squared-norm identity gap and
/// the pointwise logarithmic bound ratio.
fn counting_rows(config: &JobConfig) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    for phi in config.self_maps.iter() {
        let label = map_label(phi);
        let gap_row = Row::new(rows.len(), label.clone(), "counting-identity")
            .with_indices(2.0, f64::NAN);
        let run = |grid: &GridConfig| -> campanato::Result<_> {
            counting_checks(phi, &grid.disk()?)
        };
        match run(&config.grid) {
            Ok(checks) => {
                let mut gap_row = gap_row;
                gap_row.value = Some(checks.identity_gap);
                gap_row.detail = format!(
                    "norm_sq={:.6e} counting_integral={:.6e}",
                    checks.norm_sq, checks.counting_integral
                );
                let mut bound_row = Row::new(rows.len() + 1, label.clone(), "counting-bound")
                    .with_indices(2.0, f64::NAN);
                bound_row.value = Some(checks.bound_ratio);
                bound_row.witness = format!(
                    "point({:.6},{:.6})",
                    checks.bound_witness.re, checks.bound_witness.im
                );
                if checks.skipped_mass > 0.0 {
                    bound_row.detail = format!("skipped_mass={:.3e}", checks.skipped_mass);
                }
                if config.refine {
                    match run(&config.grid.refined()) {
                        Ok(refined) => {
                            gap_row = gap_row.refine(refined.identity_gap);
                            bound_row = bound_row.refine(refined.bound_ratio);
                        }
                        Err(e) => {
                            gap_row = gap_row.error(&e);
                        }
                    }
                }
                rows.push(gap_row);
                rows.push(bound_row);
            }
            Err(e) => rows.push(gap_row.error(&e)),
        }
    }
    Ok(rows)
}

fn criterion_rows(config: &JobConfig, op: &str) -> Result<Vec<Row>, CliError> {
    let lambda = config.lambda.unwrap_or(config.eta);
    let alpha = default_alpha(config);
    let mut rows = Vec::new();
    for (k, phi) in config.self_maps.iter().enumerate() {
        let row = Row::new(k, map_label(phi), op).with_indices(config.p, config.eta);
        let run = |grid: &GridConfig| -> campanato::Result<_> {
            match op {
                "mobius-criterion" => mobius_composition_criterion(
                    phi,
                    config.p,
                    config.eta,
                    lambda,
                    &grid.wgrid()?,
                    &grid.circle()?,
                ),
                "bloch-criterion" => {
                    bloch_composition_criterion(phi, alpha, config.p, config.eta, &grid.disk()?)
                }
                _ => paley_composition_criterion(
                    phi,
                    alpha,
                    config.p,
                    config.eta,
                    &grid.boundary_arcs(),
                    &grid.radial()?,
                ),
            }
        };
        let row = match run(&config.grid) {
            Ok(report) => {
                let row = row.absorb(&report);
                if config.refine {
                    match run(&config.grid.refined()) {
                        Ok(refined) => row.refine(refined.value),
                        Err(e) => row.error(&e),
                    }
                } else {
                    row
                }
            }
            Err(e) => row.error(&e),
        };
        rows.push(row);
    }
    Ok(rows)
}

// ------------------------------------------------------------ distance ----

fn distance_job(config: &JobConfig) -> Result<Vec<Row>, CliError> {
    let op = op_name(config, "estimate");
    require(&config.functions, "functions", "distance")?;
    match op {
        "estimate" => estimate_rows(config),
        "profile" => profile_rows(config),
        other => Err(CliError::Config(format!(
            "field `op`: unknown distance op `{other}` (expected estimate or profile)"
        ))),
    }
}

fn estimate_rows(config: &JobConfig) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    for (k, f) in config.functions.iter().enumerate() {
        let row = Row::new(k, function_label(f), "distance")
            .with_indices(f64::NAN, config.eta);
        let run = |grid: &GridConfig| -> campanato::Result<_> {
            distance_estimate(f, config.eta, &grid.box_arcs(), &grid.disk()?)
        };
        let row = match run(&config.grid) {
            Ok(report) => {
                let mut row = row;
                row.value = Some(report.distance);
                row.detail = format!(
                    "lower={:.6e} upper={:.6e} transition={} ceiling={:.3e} evaluations={}",
                    report.lower,
                    report.upper,
                    report.transition,
                    report.ceiling,
                    report.evaluations
                );
                if config.refine {
                    match run(&config.grid.refined()) {
                        Ok(refined) => row.refine(refined.distance),
                        Err(e) => row.error(&e),
                    }
                } else {
                    row
                }
            }
            Err(e) => row.error(&e),
        };
        rows.push(row);
    }
    Ok(rows)
}

/// Profile rows carry the deepened-grid norm in the refinement columns by
/// construction; `--refine` changes nothing further here.
fn profile_rows(config: &JobConfig) -> Result<Vec<Row>, CliError> {
    if config.epsilons.is_empty() {
        return Err(CliError::Config(
            "field `epsilons`: distance profiles need at least one threshold".into(),
        ));
    }
    let mut rows = Vec::new();
    for f in config.functions.iter() {
        let label = function_label(f);
        match distance_profile(
            f,
            config.eta,
            &config.epsilons,
            &config.grid.box_arcs(),
            &config.grid.disk().map_err(|e| CliError::Config(e.to_string()))?,
        ) {
            Ok(profile) => {
                for point in profile {
                    let mut row = Row::new(
                        rows.len(),
                        format!("{label} eps={}", point.epsilon),
                        "profile",
                    )
                    .with_indices(f64::NAN, config.eta);
                    row.value = Some(point.norm);
                    row.flags = vec![point.flag.to_string()];
                    row = row.refine(point.refined_norm);
                    rows.push(row);
                }
            }
            Err(e) => {
                let row = Row::new(rows.len(), label, "profile")
                    .with_indices(f64::NAN, config.eta)
                    .error(&e);
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

// -------------------------------------------------------------- labels ----

fn complex_label(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn function_label(f: &FunctionSpec) -> String {
    match f {
        FunctionSpec::Monomial { n } => format!("z^{n}"),
        FunctionSpec::Polynomial { coeffs } => {
            format!("poly(deg {})", coeffs.len().saturating_sub(1))
        }
        FunctionSpec::CauchyKernel { b } => format!("cauchy({})", complex_label(*b)),
        FunctionSpec::ScaledCauchy { b, .. } => {
            format!("scaled_cauchy({})", complex_label(*b))
        }
        FunctionSpec::LogKernel => "log_kernel".into(),
        FunctionSpec::Lacunary { base, alpha, phase } => {
            if *phase == 0.0 {
                format!("lacunary({base},{alpha})")
            } else {
                format!("lacunary({base},{alpha},{phase})")
            }
        }
        FunctionSpec::MobiusPullback { inner, outer } => format!(
            "{} o sigma({})",
            function_label(outer),
            complex_label(inner.center())
        ),
        FunctionSpec::Sum { terms } => format!("sum({} terms)", terms.len()),
        FunctionSpec::Scale { c, inner } => {
            format!("{}*{}", complex_label(*c), function_label(inner))
        }
    }
}

pub fn map_label(phi: &SelfMapSpec) -> String {
    match phi {
        SelfMapSpec::Mobius { map } => format!("sigma({})", complex_label(map.center())),
        SelfMapSpec::Polynomial { coeffs } => {
            format!("map_poly(deg {})", coeffs.len().saturating_sub(1))
        }
        SelfMapSpec::Blaschke { zeros, .. } => format!("blaschke({} zeros)", zeros.len()),
        SelfMapSpec::Scaled { c, inner } => format!("{c}*{}", map_label(inner)),
    }
}

pub fn density_label(rho: &MeasureDensity) -> String {
    match rho {
        MeasureDensity::Constant { c } => format!("const({c})"),
        MeasureDensity::PowerWeight { s } => format!("power({s})"),
        MeasureDensity::DerivSquared { f, s } => {
            format!("deriv_sq({},{s})", function_label(f))
        }
        MeasureDensity::LevelSet(spec) => format!(
            "level_set({},{},{})",
            function_label(&spec.f),
            spec.eta,
            spec.epsilon
        ),
    }
}
