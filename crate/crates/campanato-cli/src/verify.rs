//! Verification suites: the library's structural invariants, run as checks.
//!
//! Each check produces one report row with a measured value and a frozen
//! threshold in the detail column.  A check that cannot run (library error)
//! fails with the error as its detail — a verification that did not execute
//! is not a pass.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use campanato::carleson::{
    box_mass, carleson_norm, CarlesonBox, LevelSetSpec, MeasureDensity,
};
use campanato::composition::{
    bloch_composition_criterion, counting_checks, mobius_composition_criterion, stanton_norm,
};
use campanato::fourier::{poisson_extension, series_from_samples, szego_project, FourierSeries};
use campanato::grid::{Arc, ArcFamily, DiskGrid};
use campanato::seminorm::{
    bloch_norm, campanato_seminorm, hardy_norm, lp_star_seminorm, mobius_seminorm, Flag,
    IndexParams, LpStarVariant,
};
use campanato::tolerances;
use campanato::{FunctionSpec, GridConfig, MobiusMap, SelfMapSpec};

use crate::config::{JobConfig, Task};
use crate::report::{Report, Row, Status};
use crate::CliError;

/// Möbius involution residual ceiling over random pairs.
const INVOLUTION_TOL: f64 = 1e-12;
/// Finite-difference step and matching relative tolerance for the
/// closed-form derivative cross-check.
const FD_STEP: f64 = 1e-6;
const FD_REL_TOL: f64 = 1e-6;
/// Poisson reproduction of a polynomial through boundary sampling is exact
/// up to rounding in the DFT; 1e-10 absorbs the accumulation.
const POISSON_TOL: f64 = 1e-10;
/// Coefficient-level idempotence of the analytic projection.
const SZEGO_TOL: f64 = 1e-12;
/// Disk quadrature mass defect ceiling.
const DISK_MASS_TOL: f64 = 1e-10;
/// Quadrature error allowance for the closed-form log integral.
const LOG_INTEGRAL_TOL: f64 = 1e-6;
/// Seminorms of constants and homogeneity defects are rounding-level.
const VANISH_TOL: f64 = 1e-10;
const HOMOGENEITY_TOL: f64 = 1e-10;
/// Orbit-invariance ratio bracket at eta = 1, where the invariant weight
/// exponent vanishes: the two sweeps walk the same orbit through different
/// discrete w-grids, so the gap is pure discretization.  Worst measured
/// ratio on the default grid is 1.0056 (at a = 0.875i, the deep center that
/// warps the grid hardest); frozen bracket 5%.
const ORBIT_BRACKET: f64 = 1.05;
/// Closed-form box mass 2h^2 - h^3 tolerance at default resolution.
const BOX_MASS_TOL: f64 = 0.02;
/// Pointwise domination makes the level-set lower bound exact on the grid
/// up to powf rounding along two different evaluation paths.
const LOWER_BOUND_SLACK: f64 = 1e-9;
/// Composition identity tolerances (module acceptance reruns).
const STANTON_HARDY_TOL: f64 = 1e-4;
const COUNTING_IDENTITY_TOL: f64 = 1e-4;
const COUNTING_BOUND_SLACK: f64 = 1e-3;
const SCHWARZ_PICK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Core,
    SeminormEquivalence,
    Carleson,
    Composition,
    All,
}

pub fn parse_suite(name: &str) -> Result<Suite, CliError> {
    match name {
        "core" => Ok(Suite::Core),
        "seminorm-equivalence" => Ok(Suite::SeminormEquivalence),
        "carleson" => Ok(Suite::Carleson),
        "composition" => Ok(Suite::Composition),
        "all" => Ok(Suite::All),
        other => Err(CliError::Config(format!(
            "field `suite`: unknown suite `{other}` (expected core, seminorm-equivalence, \
             carleson, composition, or all)"
        ))),
    }
}

/// Config for `verify --suite <name>` with no config file: defaults all the
/// way down.
pub fn standalone_config() -> JobConfig {
    JobConfig {
        task: Task::Verify,
        op: None,
        functions: vec![],
        self_maps: vec![],
        densities: vec![],
        p: 2.0,
        eta: 1.0,
        lambda: None,
        alpha: None,
        epsilons: vec![],
        suite: None,
        grid: GridConfig::default(),
        out: None,
        refine: false,
    }
}

pub fn run_suite(suite: Suite, config: &JobConfig) -> Result<Report, CliError> {
    let grid = &config.grid;
    let mut rows = Vec::new();
    if matches!(suite, Suite::Core | Suite::All) {
        core_checks(grid, &mut rows);
    }
    if matches!(suite, Suite::SeminormEquivalence | Suite::All) {
        seminorm_checks(grid, &mut rows);
    }
    if matches!(suite, Suite::Carleson | Suite::All) {
        carleson_checks(grid, &mut rows);
    }
    if matches!(suite, Suite::Composition | Suite::All) {
        composition_checks(grid, &mut rows);
    }
    for (k, row) in rows.iter_mut().enumerate() {
        row.index = k;
    }
    Ok(Report::new(rows))
}

/// One check row: `measure` returns (value, pass, threshold description).
fn check(
    rows: &mut Vec<Row>,
    op: &str,
    label: &str,
    measure: impl FnOnce() -> campanato::Result<(f64, bool, String)>,
) {
    let row = Row::new(rows.len(), label, op);
    let row = match measure() {
        Ok((value, pass, detail)) => {
            let mut row = row;
            row.value = Some(value);
            row.detail = detail;
            row.status = if pass { Status::Pass } else { Status::Fail };
            row
        }
        Err(e) => {
            let mut row = row;
            row.status = Status::Fail;
            row.detail = format!("check did not run: {e}");
            row
        }
    };
    rows.push(row);
}

/// Informational row: reported, never failing.
fn info(
    rows: &mut Vec<Row>,
    op: &str,
    label: &str,
    measure: impl FnOnce() -> campanato::Result<(f64, String)>,
) {
    let mut row = Row::new(rows.len(), label, op);
    row.status = Status::Info;
    match measure() {
        Ok((value, detail)) => {
            row.value = Some(value);
            row.detail = detail;
        }
        Err(e) => {
            row.detail = format!("not available: {e}");
        }
    }
    rows.push(row);
}

fn rel_gap(measured: f64, reference: f64) -> f64 {
    if reference.abs() > 1e-8 {
        (measured - reference).abs() / reference.abs()
    } else {
        (measured - reference).abs()
    }
}

// ------------------------------------------------------------------ core --

fn core_checks(grid: &GridConfig, rows: &mut Vec<Row>) {
    check(rows, "mobius-involution", "1000 random (w,z) pairs", || {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let draw = |rng: &mut ChaCha8Rng| loop {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if z.norm() < 0.99 {
                return z;
            }
        };
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let w = draw(&mut rng);
            let z = draw(&mut rng);
            let map = MobiusMap::new(w)?;
            let back = map.apply(map.apply(z)?)?;
            worst = worst.max((back - z).norm());
        }
        Ok((
            worst,
            worst <= INVOLUTION_TOL,
            format!("max |sigma_w(sigma_w(z)) - z| <= {INVOLUTION_TOL:.0e}"),
        ))
    });

    check(rows, "derivative-fd", "all variants, interior points", || {
        let specs = fd_spec_family()?;
        let points = [
            Complex64::new(0.3, 0.2),
            Complex64::new(-0.5, 0.1),
            Complex64::new(0.1, -0.6),
        ];
        let mut worst = 0.0f64;
        for f in &specs {
            for &z in &points {
                let exact = f.derivative_at(z)?;
                let step = Complex64::new(FD_STEP, 0.0);
                let fd = (f.evaluate(z + step)? - f.evaluate(z - step)?) / (2.0 * FD_STEP);
                worst = worst.max((fd - exact).norm() / exact.norm().max(1e-8));
            }
        }
        Ok((
            worst,
            worst <= FD_REL_TOL,
            format!("central difference step {FD_STEP:.0e}, rel tol {FD_REL_TOL:.0e}"),
        ))
    });

    check(rows, "poisson-reproduction", "cubic polynomial", || {
        let f = FunctionSpec::Polynomial {
            coeffs: vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(1.0, -0.5),
                Complex64::new(0.0, 0.25),
                Complex64::new(-0.125, 0.0),
            ],
        };
        let circle = grid.circle()?;
        let series = series_from_samples(&circle.sample(&f)?, &circle, 8)?;
        let mut worst = 0.0f64;
        for z in [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.4, 0.3),
            Complex64::new(0.0, -0.7),
        ] {
            let reproduced = poisson_extension(&series, z)?;
            worst = worst.max((reproduced - f.evaluate(z)?).norm());
        }
        Ok((
            worst,
            worst <= POISSON_TOL,
            format!("interior reproduction abs tol {POISSON_TOL:.0e}"),
        ))
    });

    check(rows, "szego-idempotence", "mixed trig polynomial", || {
        let series = FourierSeries::from_parts(
            &[
                Complex64::new(1.0, 0.5),
                Complex64::new(-0.5, 0.25),
                Complex64::new(0.125, 0.0),
            ],
            &[Complex64::new(0.75, -0.5), Complex64::new(0.0, 0.3)],
        )?;
        let circle = grid.circle()?;
        let once = szego_project(&series);
        let resampled = series_from_samples(&circle.sample(&once)?, &circle, 8)?;
        let twice = szego_project(&resampled);
        let (FunctionSpec::Polynomial { coeffs: a }, FunctionSpec::Polynomial { coeffs: b }) =
            (&once, &twice)
        else {
            return Err(campanato::Error::InvalidSpec(
                "projection must produce polynomials".into(),
            ));
        };
        let mut worst = 0.0f64;
        for k in 0..a.len().max(b.len()) {
            let ca = a.get(k).copied().unwrap_or_default();
            let cb = b.get(k).copied().unwrap_or_default();
            worst = worst.max((ca - cb).norm());
        }
        Ok((
            worst,
            worst <= SZEGO_TOL,
            format!("P(Pf) = Pf coefficientwise, tol {SZEGO_TOL:.0e}"),
        ))
    });

    check(rows, "disk-mass", "normalized area", || {
        let disk = grid.disk()?;
        let defect = (disk.total_weight() - 1.0).abs();
        Ok((
            defect,
            defect <= DISK_MASS_TOL,
            format!("total weight 1 +- {DISK_MASS_TOL:.0e}"),
        ))
    });

    check(rows, "log-integral", "int log(1/|w|) dA = 1/2", || {
        let disk = grid.disk()?;
        let value = disk.integrate(|_, node| -node.r.ln());
        let defect = (value - 0.5).abs();
        Ok((
            defect,
            defect <= LOG_INTEGRAL_TOL,
            format!("closed form 1/2 +- {LOG_INTEGRAL_TOL:.0e}"),
        ))
    });
}

/// One spec per variant, all finite in |z| <= 0.7.
fn fd_spec_family() -> campanato::Result<Vec<FunctionSpec>> {
    Ok(vec![
        FunctionSpec::Monomial { n: 3 },
        FunctionSpec::Polynomial {
            coeffs: vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(-2.0, 1.0),
                Complex64::new(0.0, 0.5),
            ],
        },
        FunctionSpec::CauchyKernel {
            b: Complex64::new(0.6, 0.0),
        },
        FunctionSpec::ScaledCauchy {
            b: Complex64::new(0.5, 0.3),
            p: 2.0,
            eta: 1.0,
        },
        FunctionSpec::LogKernel,
        FunctionSpec::Lacunary {
            base: 2,
            alpha: 0.5,
            phase: 0.0,
        },
        FunctionSpec::MobiusPullback {
            inner: MobiusMap::new(Complex64::new(0.3, 0.0))?,
            outer: Box::new(FunctionSpec::CauchyKernel {
                b: Complex64::new(0.5, 0.0),
            }),
        },
        FunctionSpec::Sum {
            terms: vec![FunctionSpec::Monomial { n: 1 }, FunctionSpec::LogKernel],
        },
        FunctionSpec::Scale {
            c: Complex64::new(2.0, -1.0),
            inner: Box::new(FunctionSpec::Monomial { n: 2 }),
        },
    ])
}

// -------------------------------------------------- seminorm equivalence --

fn seminorm_checks(grid: &GridConfig, rows: &mut Vec<Row>) {
    // The frozen brackets below were measured at p = 2; the suite pins the
    // indices rather than reading them from the config.
    let bmoa = IndexParams::new(2.0, 1.0).expect("fixed indices are valid");

    check(rows, "constants-vanish", "f = 2 - 3i", || {
        let f = FunctionSpec::constant(Complex64::new(2.0, -3.0));
        let circle = grid.circle()?;
        let values = [
            campanato_seminorm(&f, bmoa, &grid.boundary_arcs(), &circle)?.value,
            mobius_seminorm(&f, bmoa, &grid.wgrid()?, &circle)?.value,
            lp_star_seminorm(
                &f,
                bmoa,
                LpStarVariant::Analytic,
                &grid.boundary_arcs(),
                &grid.radial()?,
            )?
            .value,
            bloch_norm(&f, 1.0, &grid.disk()?)?.value,
        ];
        let worst = values.iter().fold(0.0f64, |acc, v| acc.max(*v));
        Ok((
            worst,
            worst <= VANISH_TOL,
            format!("all four seminorms <= {VANISH_TOL:.0e}"),
        ))
    });

    check(rows, "homogeneity", "f = cauchy(0.6), c = 2.5 - 1.5i", || {
        let f = FunctionSpec::CauchyKernel {
            b: Complex64::new(0.6, 0.0),
        };
        let c = Complex64::new(2.5, -1.5);
        let scaled = FunctionSpec::Scale {
            c,
            inner: Box::new(f.clone()),
        };
        let circle = grid.circle()?;
        let arcs = grid.boundary_arcs();
        let radial = grid.radial()?;
        let disk = grid.disk()?;
        let pairs = [
            (
                campanato_seminorm(&scaled, bmoa, &arcs, &circle)?.value,
                campanato_seminorm(&f, bmoa, &arcs, &circle)?.value,
            ),
            (
                lp_star_seminorm(&scaled, bmoa, LpStarVariant::Analytic, &arcs, &radial)?.value,
                lp_star_seminorm(&f, bmoa, LpStarVariant::Analytic, &arcs, &radial)?.value,
            ),
            (
                bloch_norm(&scaled, 1.0, &disk)?.value,
                bloch_norm(&f, 1.0, &disk)?.value,
            ),
        ];
        let mut worst = 0.0f64;
        for (scaled_value, base) in pairs {
            worst = worst.max(rel_gap(scaled_value, c.norm() * base));
        }
        Ok((
            worst,
            worst <= HOMOGENEITY_TOL,
            format!("seminorm(c f) = |c| seminorm(f), rel tol {HOMOGENEITY_TOL:.0e}"),
        ))
    });

    check(rows, "orbit-invariance", "f = cauchy(0.4), a in w-grid", || {
        // At eta = 1 the invariant weight exponent (1 - eta)/p vanishes, so
        // mobius_seminorm(f) and mobius_seminorm(f o sigma_a - f(a)) sweep
        // the same orbit and differ only by grid placement.
        let f = FunctionSpec::CauchyKernel {
            b: Complex64::new(0.4, 0.0),
        };
        let circle = grid.circle()?;
        let wgrid = grid.wgrid()?;
        let base = mobius_seminorm(&f, bmoa, &wgrid, &circle)?.value;
        let mut worst = 1.0f64;
        for a in [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.875)] {
            let shifted = FunctionSpec::Sum {
                terms: vec![
                    FunctionSpec::MobiusPullback {
                        inner: MobiusMap::new(a)?,
                        outer: Box::new(f.clone()),
                    },
                    FunctionSpec::constant(-f.evaluate(a)?),
                ],
            };
            let moved = mobius_seminorm(&shifted, bmoa, &wgrid, &circle)?.value;
            let ratio = moved / base;
            worst = worst.max(ratio.max(1.0 / ratio));
        }
        Ok((
            worst,
            worst <= ORBIT_BRACKET,
            format!("ratio within [1/{ORBIT_BRACKET}, {ORBIT_BRACKET}]"),
        ))
    });

    check(rows, "arc-monotonicity", "log_kernel, depth 6 vs 10", || {
        let f = FunctionSpec::LogKernel;
        let circle = grid.circle()?;
        let radial = grid.radial()?;
        let shallow = ArcFamily::dyadic(grid.circle_n, 6, campanato::config::ARC_MIN_NODES);
        let deep = ArcFamily::dyadic(grid.circle_n, 10, campanato::config::ARC_MIN_NODES);
        let mut margin = f64::INFINITY;
        margin = margin.min(
            campanato_seminorm(&f, bmoa, &deep, &circle)?.value
                - campanato_seminorm(&f, bmoa, &shallow, &circle)?.value,
        );
        margin = margin.min(
            lp_star_seminorm(&f, bmoa, LpStarVariant::Analytic, &deep, &radial)?.value
                - lp_star_seminorm(&f, bmoa, LpStarVariant::Analytic, &shallow, &radial)?.value,
        );
        Ok((
            margin,
            margin >= -1e-12,
            "deeper arc family never decreases the sup".into(),
        ))
    });

    check(rows, "divergence-flag", "non-constant polys, eta > 1 + p", || {
        let params = IndexParams::new(2.0, 3.5)?;
        let circle = grid.circle()?;
        let arcs = grid.boundary_arcs();
        let family = [
            FunctionSpec::Monomial { n: 1 },
            FunctionSpec::Monomial { n: 2 },
            FunctionSpec::Polynomial {
                coeffs: vec![
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                    Complex64::new(1.0, 0.0),
                ],
            },
        ];
        let mut flagged = 0usize;
        for f in &family {
            if campanato_seminorm(f, params, &arcs, &circle)?.has_flag(Flag::Divergent) {
                flagged += 1;
            }
        }
        Ok((
            flagged as f64,
            flagged == family.len(),
            format!("{}/{} flagged DIVERGENT in the constants-only regime", flagged, family.len()),
        ))
    });

    check(rows, "embedding", "derivative sup vs square function", || {
        let circle_arcs = grid.boundary_arcs();
        let radial = grid.radial()?;
        let disk = grid.disk()?;
        let alpha = (bmoa.p() + 1.0 - bmoa.eta()) / bmoa.p();
        let mut worst = 0.0f64;
        for f in embedding_family() {
            let numerator = bloch_norm(&f, alpha, &disk)?.value;
            let denominator =
                lp_star_seminorm(&f, bmoa, LpStarVariant::Analytic, &circle_arcs, &radial)?.value;
            worst = worst.max(numerator / denominator);
        }
        Ok((
            worst,
            worst <= tolerances::EMBEDDING_CONSTANT,
            format!("single constant {} across the family", tolerances::EMBEDDING_CONSTANT),
        ))
    });

    for (op, use_mobius, ceiling) in [
        ("equivalence-mobius", true, tolerances::EQUIVALENCE_SPREAD_MOBIUS),
        ("equivalence-lpstar", false, tolerances::EQUIVALENCE_SPREAD_LPSTAR),
    ] {
        check(rows, op, "kernel family, (p,eta) in {(2,.5),(2,1)}", || {
            let circle = grid.circle()?;
            let arcs = grid.boundary_arcs();
            let radial = grid.radial()?;
            let wgrid = grid.wgrid()?;
            let mut ratios: Vec<f64> = vec![];
            for (p, eta) in [(2.0, 0.5), (2.0, 1.0)] {
                let params = IndexParams::new(p, eta)?;
                for modulus in [0.3, 0.6, 0.9, 0.97] {
                    let f = FunctionSpec::ScaledCauchy {
                        b: Complex64::new(modulus, 0.0),
                        p,
                        eta,
                    };
                    let reference = campanato_seminorm(&f, params, &arcs, &circle)?.value;
                    let other = if use_mobius {
                        mobius_seminorm(&f, params, &wgrid, &circle)?.value
                    } else {
                        lp_star_seminorm(&f, params, LpStarVariant::Analytic, &arcs, &radial)?
                            .value
                    };
                    ratios.push(other / reference);
                }
            }
            let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = ratios.iter().cloned().fold(0.0f64, f64::max);
            let spread = max / min;
            Ok((
                spread,
                spread <= ceiling,
                format!("pooled ratio spread <= {ceiling}"),
            ))
        });
    }
}

fn embedding_family() -> Vec<FunctionSpec> {
    let mut family: Vec<FunctionSpec> = (1..=6)
        .map(|n| FunctionSpec::Monomial { n })
        .collect();
    for modulus in [0.3, 0.6, 0.9, 0.97] {
        family.push(FunctionSpec::CauchyKernel {
            b: Complex64::new(modulus, 0.0),
        });
    }
    family.push(FunctionSpec::LogKernel);
    family
}

// -------------------------------------------------------------- carleson --

fn carleson_checks(grid: &GridConfig, rows: &mut Vec<Row>) {
    check(rows, "density-monotonicity", "pointwise <= densities", || {
        let arcs = grid.box_arcs();
        let disk = grid.disk()?;
        // (1-|z|^2)^2 <= (1-|z|^2) and 0.5 <= 1 pointwise on the disk.
        let pairs = [
            (
                MeasureDensity::PowerWeight { s: 2.0 },
                MeasureDensity::PowerWeight { s: 1.0 },
            ),
            (
                MeasureDensity::Constant { c: 0.5 },
                MeasureDensity::Constant { c: 1.0 },
            ),
        ];
        let mut margin = f64::INFINITY;
        for (small, large) in &pairs {
            let small_norm = carleson_norm(small, 1.0, &arcs, &disk)?.value;
            let large_norm = carleson_norm(large, 1.0, &arcs, &disk)?.value;
            margin = margin.min(large_norm - small_norm);
        }
        Ok((
            margin,
            margin >= 0.0,
            "norm monotone under pointwise density order".into(),
        ))
    });

    check(rows, "homogeneity-exact", "c = 2 scaling", || {
        let arcs = grid.box_arcs();
        let disk = grid.disk()?;
        let single = carleson_norm(&MeasureDensity::Constant { c: 1.0 }, 1.0, &arcs, &disk)?;
        let doubled = carleson_norm(&MeasureDensity::Constant { c: 2.0 }, 1.0, &arcs, &disk)?;
        let defect = (doubled.value - 2.0 * single.value).abs();
        Ok((
            defect,
            defect == 0.0,
            "norm(2 rho) = 2 norm(rho) exactly (power-of-two scaling)".into(),
        ))
    });

    check(rows, "level-set-nesting", "eps 0.4 vs 0.8 on all nodes", || {
        let f = FunctionSpec::CauchyKernel {
            b: Complex64::new(0.7, 0.0),
        };
        let disk = grid.disk()?;
        let loose = LevelSetSpec {
            f: f.clone(),
            eta: 1.0,
            epsilon: 0.4,
        };
        let tight = LevelSetSpec {
            f,
            eta: 1.0,
            epsilon: 0.8,
        };
        let mut violations = 0usize;
        for node in disk.radial() {
            let omr2 = node.one_minus_r * (1.0 + node.r);
            for j in 0..disk.angles() {
                let z = disk.unit(j) * node.r;
                if tight.member(z, omr2)? && !loose.member(z, omr2)? {
                    violations += 1;
                }
            }
        }
        Ok((
            violations as f64,
            violations == 0,
            "higher threshold set contained in lower".into(),
        ))
    });

    check(rows, "box-mass", "rho = 1 vs 2h^2 - h^3", || {
        let disk = grid.disk()?;
        let rho = MeasureDensity::Constant { c: 1.0 };
        let mut worst = 0.0f64;
        for h in [0.5, 0.25, 0.125] {
            let mass = box_mass(&rho, &CarlesonBox::new(Arc::new(0.0, h)?), &disk)?;
            let exact = 2.0 * h * h - h * h * h;
            worst = worst.max(rel_gap(mass, exact));
        }
        Ok((
            worst,
            worst <= BOX_MASS_TOL,
            format!("closed form within {BOX_MASS_TOL}"),
        ))
    });

    check(rows, "level-set-lower-bound", "g = z + 0.5 z^2", || {
        let g = FunctionSpec::Polynomial {
            coeffs: vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        };
        let eta = 1.0;
        let arcs = grid.box_arcs();
        let disk = grid.disk()?;
        let gradient = MeasureDensity::DerivSquared {
            f: g.clone(),
            s: 1.0,
        };
        let gradient_norm = carleson_norm(&gradient, eta, &arcs, &disk)?.value;
        let mut worst = 0.0f64;
        for epsilon in [0.5, 1.0] {
            let level = MeasureDensity::LevelSet(LevelSetSpec {
                f: g.clone(),
                eta,
                epsilon,
            });
            let level_norm = carleson_norm(&level, eta, &arcs, &disk)?.value;
            let bound = gradient_norm / (epsilon * epsilon);
            if bound > 0.0 {
                worst = worst.max(level_norm / bound);
            } else if level_norm > 0.0 {
                worst = f64::INFINITY;
            }
        }
        Ok((
            worst,
            worst <= 1.0 + LOWER_BOUND_SLACK,
            "level-set norm <= eps^-2 gradient norm (pointwise domination)".into(),
        ))
    });
}

// ----------------------------------------------------------- composition --

fn composition_checks(grid: &GridConfig, rows: &mut Vec<Row>) {
    check(rows, "stanton-vs-hardy", "monomials o sigma_a", || {
        // The counting-function route converges slower than the direct
        // pullback; 512 angles with 8-point panels brings the worst pair to
        // 2.4e-5 (defaults leave 7.3e-4, past the 1e-4 contract).
        let fine = DiskGrid::new(512, 20, 8)?;
        let circle = grid.circle()?;
        let mut worst = 0.0f64;
        for n in 1..=3u32 {
            let f = FunctionSpec::Monomial { n };
            for a in [
                Complex64::new(0.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.7),
            ] {
                let phi = SelfMapSpec::mobius(a)?;
                let via_counting = stanton_norm(&f, &phi, 2.0, &fine)?.value;
                let pullback = FunctionSpec::MobiusPullback {
                    inner: MobiusMap::new(a)?,
                    outer: Box::new(f.clone()),
                };
                let direct = hardy_norm(&pullback, 2.0, &circle)?;
                worst = worst.max(rel_gap(via_counting, direct));
            }
        }
        Ok((
            worst,
            worst <= STANTON_HARDY_TOL,
            format!("rel gap <= {STANTON_HARDY_TOL:.0e}"),
        ))
    });

    let family = centered_map_family();
    check(rows, "counting-identity", "centered map family", || {
        let disk = grid.disk()?;
        let mut worst = 0.0f64;
        for phi in &family {
            worst = worst.max(counting_checks(phi, &disk)?.identity_gap);
        }
        Ok((
            worst,
            worst <= COUNTING_IDENTITY_TOL,
            format!("norm identity gap <= {COUNTING_IDENTITY_TOL:.0e}"),
        ))
    });

    check(rows, "counting-bound", "centered map family", || {
        let disk = grid.disk()?;
        let mut worst = 0.0f64;
        for phi in &family {
            worst = worst.max(counting_checks(phi, &disk)?.bound_ratio);
        }
        Ok((
            worst,
            worst <= 1.0 + COUNTING_BOUND_SLACK,
            format!("log-bound ratio <= 1 + {COUNTING_BOUND_SLACK:.0e}"),
        ))
    });

    check(rows, "schwarz-pick", "automorphisms saturate", || {
        let disk = grid.disk()?;
        let mut worst = 0.0f64;
        for a in [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.7),
        ] {
            let phi = SelfMapSpec::mobius(a)?;
            let report = bloch_composition_criterion(&phi, 1.0, 2.0, 1.0, &disk)?;
            worst = worst.max((report.value - 1.0).abs());
        }
        Ok((
            worst,
            worst <= SCHWARZ_PICK_TOL,
            format!("criterion = 1 +- {SCHWARZ_PICK_TOL:.0e}"),
        ))
    });

    info(rows, "necessity-wiring", "criterion vs kernel-family response", || {
        // Ratio of the direct criterion value to the largest invariant-
        // seminorm response of the normalized kernel family under
        // composition: the necessity direction says the criterion cannot
        // exceed a constant times that response.
        let params = IndexParams::new(2.0, 1.0)?;
        let circle = grid.circle()?;
        let wgrid = grid.wgrid()?;
        let mut worst_ratio = 0.0f64;
        let mut detail = String::new();
        for a in [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.7)] {
            let phi = SelfMapSpec::mobius(a)?;
            let criterion =
                mobius_composition_criterion(&phi, 2.0, 1.0, 1.0, &wgrid, &circle)?.value;
            let mut response = 0.0f64;
            for modulus in [0.3, 0.6, 0.9] {
                let kernel = FunctionSpec::ScaledCauchy {
                    b: Complex64::new(modulus, 0.0),
                    p: 2.0,
                    eta: 1.0,
                };
                let composed = FunctionSpec::MobiusPullback {
                    inner: MobiusMap::new(a)?,
                    outer: Box::new(kernel.clone()),
                };
                let num = mobius_seminorm(&composed, params, &wgrid, &circle)?.value;
                let den = mobius_seminorm(&kernel, params, &wgrid, &circle)?.value;
                response = response.max(num / den);
            }
            let ratio = criterion / response;
            worst_ratio = worst_ratio.max(ratio);
            detail.push_str(&format!(
                "a={}: criterion={criterion:.4} response={response:.4} ratio={ratio:.4}; ",
                crate::jobs::map_label(&phi)
            ));
        }
        detail.push_str("reported as a ratio, not asserted");
        Ok((worst_ratio, detail))
    });
}

/// The centered maps the counting identities are pinned on: z, z^2, z^3/2,
/// and (z^2 + z^3)/2.
fn centered_map_family() -> Vec<SelfMapSpec> {
    let c = |re: f64| Complex64::new(re, 0.0);
    vec![
        SelfMapSpec::Polynomial {
            coeffs: vec![c(0.0), c(1.0)],
        },
        SelfMapSpec::Polynomial {
            coeffs: vec![c(0.0), c(0.0), c(1.0)],
        },
        SelfMapSpec::Polynomial {
            coeffs: vec![c(0.0), c(0.0), c(0.0), c(0.5)],
        },
        SelfMapSpec::Polynomial {
            coeffs: vec![c(0.0), c(0.0), c(0.5), c(0.5)],
        },
    ]
}
