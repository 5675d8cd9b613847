//! End-to-end acceptance checks.
//!
//! Each numbered criterion prints one PASS/FAIL line (run with
//! `cargo test --test acceptance -- --nocapture` to see them on success);
//! the suite fails if any criterion fails or a runtime budget is blown.
//! Every tolerance is pinned here or in `campanato::tolerances`.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use campanato::carleson::{carleson_norm, distance_estimate, distance_profile, MeasureDensity};
use campanato::composition::{
    bloch_composition_criterion, counting_checks, mobius_composition_criterion, splitting_ratio,
    stanton_norm,
};
use campanato::fourier::{conjugate_function, szego_project, FourierSeries, HarmonicPoly};
use campanato::function::FunctionSpec;
use campanato::mobius::MobiusMap;
use campanato::selfmap::SelfMapSpec;
use campanato::seminorm::{
    bloch_norm, campanato_seminorm, equivalence_report, lp_star_seminorm, mobius_seminorm,
    IndexParams, LpStarVariant,
};
use campanato::GridConfig;

/// Identity gap allowed for the change-of-variables norm on monomials.
const STANTON_TOL: f64 = 1e-5;
/// Gap allowed between the boundary norm and the counting integral.
const COUNTING_IDENTITY_TOL: f64 = 1e-4;
/// Slack on the pointwise counting bound ratio.
const COUNTING_BOUND_SLACK: f64 = 1e-3;
/// Relative error allowed on the unit-density box-norm closed form.
const CARLESON_CLOSED_FORM_TOL: f64 = 0.02;
/// Window around 1 for the invariant-norm fixed-point values.
const MOBIUS_CRITERION_TOL: f64 = 1e-3;
/// Window around 1 for the derivative-weight fixed-point values.
const BLOCH_CRITERION_TOL: f64 = 1e-8;
/// Coefficientwise tolerance for the projection identity.
const PROJECTION_TOL: f64 = 1e-12;
/// Whole-suite runtime budget.
const TOTAL_BUDGET: Duration = Duration::from_secs(300);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn identity_map() -> SelfMapSpec {
    SelfMapSpec::Polynomial {
        coeffs: vec![c(0.0, 0.0), c(1.0, 0.0)],
    }
}

/// The self-map family shared by the counting-function criteria.
fn counting_family() -> Vec<(&'static str, SelfMapSpec)> {
    vec![
        ("z", identity_map()),
        (
            "z^2",
            SelfMapSpec::Polynomial {
                coeffs: vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            },
        ),
        (
            "z^3/2",
            SelfMapSpec::Polynomial {
                coeffs: vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)],
            },
        ),
        (
            "(z^2+z^3)/2",
            SelfMapSpec::Polynomial {
                coeffs: vec![c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.0)],
            },
        ),
    ]
}

/// Kernel family probing the equivalence constants.
const KERNEL_MODULI: [f64; 4] = [0.3, 0.6, 0.9, 0.97];
/// Index pairs the equivalence criteria sweep.
const INDEX_PAIRS: [(f64, f64); 2] = [(2.0, 0.5), (2.0, 1.0)];

struct Outcome {
    label: &'static str,
    detail: String,
    failures: Vec<String>,
    elapsed: Duration,
    budget: Option<Duration>,
}

fn run(
    label: &'static str,
    budget: Option<Duration>,
    body: impl FnOnce(&mut Vec<String>) -> String,
) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let detail = body(&mut failures);
    let elapsed = start.elapsed();
    if let Some(cap) = budget {
        if elapsed > cap {
            failures.push(format!("runtime {elapsed:.2?} over budget {cap:?}"));
        }
    }
    Outcome {
        label,
        detail,
        failures,
        elapsed,
    budget,
    }
}

/// Base-grid and refined-grid seminorm ratios per family member, pooled
/// over the index pairs, for one numerator seminorm.
fn pooled_ratios(
    cfg: &GridConfig,
    use_mobius: bool,
    failures: &mut Vec<String>,
) -> (Vec<f64>, Vec<f64>) {
    let circle = cfg.circle().expect("default circle grid");
    let arcs = cfg.boundary_arcs();
    let wgrid = cfg.wgrid().expect("default w grid");
    let radial = cfg.radial().expect("default radial grid");
    let mut numerators = Vec::new();
    let mut denominators = Vec::new();
    for &(p, eta) in &INDEX_PAIRS {
        let params = IndexParams::new(p, eta).expect("valid indices");
        for &b in &KERNEL_MODULI {
            let f = FunctionSpec::CauchyKernel { b: c(b, 0.0) };
            let num = if use_mobius {
                mobius_seminorm(&f, params, &wgrid, &circle)
            } else {
                lp_star_seminorm(&f, params, LpStarVariant::Analytic, &arcs, &radial)
            };
            let den = campanato_seminorm(&f, params, &arcs, &circle);
            match (num, den) {
                (Ok(n), Ok(d)) => {
                    numerators.push(n.value);
                    denominators.push(d.value);
                }
                (n, d) => failures.push(format!(
                    "b={b} eta={eta}: seminorm error {:?} / {:?}",
                    n.err(),
                    d.err()
                )),
            }
        }
    }
    (numerators, denominators)
}

fn equivalence_criterion(
    label: &'static str,
    use_mobius: bool,
    ceiling: f64,
) -> Outcome {
    run(label, None, |failures| {
        let cfg = GridConfig::default();
        let (base_num, base_den) = pooled_ratios(&cfg, use_mobius, failures);
        let (fine_num, fine_den) = pooled_ratios(&cfg.refined(), use_mobius, failures);
        if !failures.is_empty() {
            return "seminorm evaluation failed".into();
        }
        let base = equivalence_report(&base_num, &base_den).expect("base ratio report");
        let fine = equivalence_report(&fine_num, &fine_den).expect("refined ratio report");
        if base.spread >= ceiling {
            failures.push(format!("spread {:.4} >= frozen ceiling {ceiling}", base.spread));
        }
        let mut worst_drift = 0.0f64;
        for (r0, r1) in base.ratios.iter().zip(&fine.ratios) {
            worst_drift = worst_drift.max((r1 - r0).abs() / r0);
        }
        if worst_drift >= campanato::tolerances::REFINEMENT_DRIFT {
            failures.push(format!("refinement drift {worst_drift:.4} >= 0.10"));
        }
        format!("spread {:.4} (ceiling {ceiling}), worst drift {:.2}%", base.spread, 100.0 * worst_drift)
    })
}

fn main_suite() -> Vec<Outcome> {
    let cfg = GridConfig::default();
    let mut outcomes = Vec::new();

    outcomes.push(run(
        "01 stanton-identity",
        Some(Duration::from_secs(10)),
        |failures| {
            let disk = cfg.disk().expect("default disk grid");
            let phi = identity_map();
            let mut worst = 0.0f64;
            for n in 1..=4 {
                let f = FunctionSpec::Monomial { n };
                match stanton_norm(&f, &phi, 2.0, &disk) {
                    Ok(rep) => {
                        let gap = (rep.value - 1.0).abs();
                        worst = worst.max(gap);
                        if gap > STANTON_TOL {
                            failures.push(format!("z^{n}: |norm - 1| = {gap:.2e}"));
                        }
                    }
                    Err(e) => failures.push(format!("z^{n}: {e}")),
                }
            }
            format!("max |norm - 1| = {worst:.1e} over z^1..z^4 (tol {STANTON_TOL:.0e})")
        },
    ));

    outcomes.push(run(
        "02 counting-identity",
        Some(Duration::from_secs(30)),
        |failures| {
            let disk = cfg.disk().expect("default disk grid");
            let mut worst = 0.0f64;
            for (name, phi) in counting_family() {
                match counting_checks(&phi, &disk) {
                    Ok(rep) => {
                        let gap = rep.identity_gap.abs();
                        worst = worst.max(gap);
                        if gap > COUNTING_IDENTITY_TOL {
                            failures.push(format!("{name}: identity gap {gap:.2e}"));
                        }
                    }
                    Err(e) => failures.push(format!("{name}: {e}")),
                }
            }
            format!("max identity gap {worst:.1e} (tol {COUNTING_IDENTITY_TOL:.0e})")
        },
    ));

    outcomes.push(run(
        "03 counting-bound",
        Some(Duration::from_secs(30)),
        |failures| {
            let disk = cfg.disk().expect("default disk grid");
            let mut worst = 0.0f64;
            for (name, phi) in counting_family() {
                match counting_checks(&phi, &disk) {
                    Ok(rep) => {
                        worst = worst.max(rep.bound_ratio);
                        if rep.bound_ratio > 1.0 + COUNTING_BOUND_SLACK {
                            failures.push(format!("{name}: bound ratio {:.6}", rep.bound_ratio));
                        }
                    }
                    Err(e) => failures.push(format!("{name}: {e}")),
                }
            }
            format!("max bound ratio {worst:.4} (cap 1 + {COUNTING_BOUND_SLACK:.0e})")
        },
    ));

    outcomes.push(equivalence_criterion(
        "04 invariant-equivalence",
        true,
        campanato::tolerances::EQUIVALENCE_SPREAD_MOBIUS,
    ));

    outcomes.push(equivalence_criterion(
        "05 square-function-equivalence",
        false,
        campanato::tolerances::EQUIVALENCE_SPREAD_LPSTAR,
    ));

    outcomes.push(run("06 bloch-embedding", None, |failures| {
        let ceiling = campanato::tolerances::EMBEDDING_CONSTANT;
        let mut family: Vec<(String, FunctionSpec)> = (1..=6)
            .map(|n| (format!("z^{n}"), FunctionSpec::Monomial { n }))
            .collect();
        for &b in &KERNEL_MODULI {
            family.push((format!("kernel b={b}"), FunctionSpec::CauchyKernel { b: c(b, 0.0) }));
        }
        family.push(("log kernel".into(), FunctionSpec::LogKernel));
        let mut details = Vec::new();
        for (tag, conf) in [("base", cfg.clone()), ("refined", cfg.refined())] {
            let arcs = conf.boundary_arcs();
            let radial = conf.radial().expect("radial grid");
            let disk = conf.disk().expect("disk grid");
            let mut worst: (f64, String) = (0.0, String::new());
            for &(p, eta) in &INDEX_PAIRS {
                let params = IndexParams::new(p, eta).expect("valid indices");
                let alpha = (p + 1.0 - eta) / p;
                for (name, f) in &family {
                    let num = bloch_norm(f, alpha, &disk).map(|r| r.value);
                    let den = lp_star_seminorm(f, params, LpStarVariant::Analytic, &arcs, &radial)
                        .map(|r| r.value);
                    match (num, den) {
                        (Ok(n), Ok(d)) if d > 0.0 => {
                            if n / d > worst.0 {
                                worst = (n / d, format!("{name} at eta={eta}"));
                            }
                        }
                        (n, d) => failures.push(format!(
                            "{name} eta={eta}: {:?} / {:?}",
                            n.err(),
                            d.err()
                        )),
                    }
                }
            }
            if worst.0 >= ceiling {
                failures.push(format!(
                    "[{tag}] ratio {:.4} at {} >= frozen constant {ceiling}",
                    worst.0, worst.1
                ));
            }
            details.push(format!("[{tag}] max {:.4} ({})", worst.0, worst.1));
        }
        format!("{} (ceiling {ceiling})", details.join(", "))
    }));

    outcomes.push(run("07 carleson-closed-form", None, |failures| {
        let arcs = cfg.box_arcs();
        let disk = cfg.disk().expect("disk grid");
        let h_min = arcs
            .layers
            .iter()
            .map(|layer| layer.length)
            .fold(f64::INFINITY, f64::min);
        let expected = 2.0 - h_min;
        match carleson_norm(&MeasureDensity::Constant { c: 1.0 }, 2.0, &arcs, &disk) {
            Ok(rep) => {
                let rel = (rep.value - expected).abs() / expected;
                if rel > CARLESON_CLOSED_FORM_TOL {
                    failures.push(format!(
                        "norm {:.6} vs closed form {expected:.6} (rel err {rel:.2e})",
                        rep.value
                    ));
                }
                format!(
                    "norm {:.6} vs 2 - h_min = {expected:.6} (rel err {rel:.1e}, tol 2%)",
                    rep.value
                )
            }
            Err(e) => {
                failures.push(format!("sweep failed: {e}"));
                "sweep failed".into()
            }
        }
    }));

    outcomes.push(run("08 distance-profile", None, |failures| {
        let arcs = cfg.box_arcs();
        let disk = cfg.disk().expect("disk grid");
        let eta = 1.0;
        let polys = [
            ("z", FunctionSpec::Monomial { n: 1 }),
            ("z^3", FunctionSpec::Monomial { n: 3 }),
            (
                "z/2 + z^2/4",
                FunctionSpec::Polynomial {
                    coeffs: vec![c(0.0, 0.0), c(0.5, 0.0), c(0.25, 0.0)],
                },
            ),
            ("constant", FunctionSpec::constant(c(2.0, -1.0))),
        ];
        for (name, f) in &polys {
            match distance_estimate(f, eta, &arcs, &disk) {
                Ok(rep) if rep.distance != 0.0 || rep.transition => failures.push(format!(
                    "{name}: distance {} transition {}",
                    rep.distance, rep.transition
                )),
                Ok(_) => {}
                Err(e) => failures.push(format!("{name}: {e}")),
            }
        }
        // Gap series with coefficient exponent (3 - eta)/2 = 1.
        let lac = FunctionSpec::Lacunary { base: 2, alpha: 1.0, phase: 0.0 };
        let mut detail = String::new();
        match distance_estimate(&lac, eta, &arcs, &disk) {
            Ok(rep) => {
                if !(rep.transition && rep.distance >= campanato::tolerances::LACUNARY_DISTANCE_FLOOR)
                {
                    failures.push(format!(
                        "lacunary distance {:.4} under floor {}",
                        rep.distance,
                        campanato::tolerances::LACUNARY_DISTANCE_FLOOR
                    ));
                }
                detail = format!("polynomials 0 exactly; lacunary {:.3}", rep.distance);
            }
            Err(e) => failures.push(format!("lacunary: {e}")),
        }
        let epsilons = [1.0, 2.0, 4.0, 8.0];
        match distance_profile(&lac, eta, &epsilons, &arcs, &disk) {
            Ok(profile) => {
                for pair in profile.windows(2) {
                    if pair[1].norm > pair[0].norm || pair[1].refined_norm > pair[0].refined_norm {
                        failures.push(format!(
                            "profile not monotone: {:.4} -> {:.4} at eps {} -> {}",
                            pair[0].norm, pair[1].norm, pair[0].epsilon, pair[1].epsilon
                        ));
                    }
                }
            }
            Err(e) => failures.push(format!("profile: {e}")),
        }
        format!("{detail}; profile monotone over eps {epsilons:?}")
    }));

    outcomes.push(run("09 mobius-fixed-points", None, |failures| {
        let wgrid = cfg.wgrid().expect("w grid");
        let circle = cfg.circle().expect("circle grid");
        let disk = cfg.disk().expect("disk grid");
        let mut worst_inv = 0.0f64;
        let mut worst_bloch = 0.0f64;
        for a in [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.7)] {
            let map = MobiusMap::new(a).expect("|a| < 1");
            let phi = SelfMapSpec::Mobius { map };
            match mobius_composition_criterion(&phi, 2.0, 1.0, 1.0, &wgrid, &circle) {
                Ok(rep) => {
                    let gap = (rep.value - 1.0).abs();
                    worst_inv = worst_inv.max(gap);
                    if gap > MOBIUS_CRITERION_TOL {
                        failures.push(format!("invariant criterion at a={a}: gap {gap:.2e}"));
                    }
                }
                Err(e) => failures.push(format!("invariant criterion at a={a}: {e}")),
            }
            match bloch_composition_criterion(&phi, 1.0, 2.0, 1.0, &disk) {
                Ok(rep) => {
                    let gap = (rep.value - 1.0).abs();
                    worst_bloch = worst_bloch.max(gap);
                    if gap > BLOCH_CRITERION_TOL {
                        failures.push(format!("derivative criterion at a={a}: gap {gap:.2e}"));
                    }
                }
                Err(e) => failures.push(format!("derivative criterion at a={a}: {e}")),
            }
        }
        format!(
            "invariant gap {worst_inv:.1e} (tol {MOBIUS_CRITERION_TOL:.0e}), derivative gap {worst_bloch:.1e} (tol {BLOCH_CRITERION_TOL:.0e})"
        )
    }));

    outcomes.push(run("10 splitting-ceiling", None, |failures| {
        let ceiling = campanato::tolerances::SPLITTING_CEILING;
        let circle = cfg.circle().expect("circle grid");
        let mut worst: (f64, String) = (0.0, String::new());
        for p in [2.0, 4.0] {
            for n in 1..=4u32 {
                for m in 1..=3usize {
                    for &s in &[0.3, 0.7, 0.95] {
                        let f = FunctionSpec::Monomial { n };
                        let mut coeffs = vec![c(0.0, 0.0); m + 1];
                        coeffs[m] = c(s, 0.0);
                        let phi = SelfMapSpec::Polynomial { coeffs };
                        match splitting_ratio(&f, &phi, p, &circle) {
                            Ok(rep) => {
                                if rep.ratio > worst.0 {
                                    worst = (rep.ratio, format!("p={p} z^{n} o {s}z^{m}"));
                                }
                                if rep.ratio > ceiling {
                                    failures.push(format!(
                                        "p={p} f=z^{n} phi={s}z^{m}: ratio {:.4}",
                                        rep.ratio
                                    ));
                                }
                            }
                            Err(e) => failures.push(format!("p={p} z^{n} {s}z^{m}: {e}")),
                        }
                    }
                }
            }
        }
        format!("max ratio {:.4} at {} (ceiling {ceiling})", worst.0, worst.1)
    }));

    outcomes.push(run("11 projection-identity", None, |failures| {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst = 0.0f64;
        for trial in 0..20 {
            let degree = rng.gen_range(1..=32usize);
            let sample = |rng: &mut ChaCha8Rng| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let analytic: Vec<Complex64> = (0..=degree).map(|_| sample(&mut rng)).collect();
            let anti: Vec<Complex64> = (0..degree).map(|_| sample(&mut rng)).collect();
            let series = FourierSeries::from_parts(&analytic, &anti).expect("valid series");
            let lhs = conjugate_function(&series)
                .harmonic_extension()
                .scale(c(0.0, 1.0))
                .add(&series.harmonic_extension());
            let projected = match szego_project(&series) {
                FunctionSpec::Polynomial { coeffs } => coeffs,
                other => {
                    failures.push(format!("trial {trial}: unexpected projection {other:?}"));
                    continue;
                }
            };
            let mut rhs_analytic: Vec<Complex64> = projected.iter().map(|a| 2.0 * a).collect();
            rhs_analytic[0] -= series.coeff(0);
            let rhs = HarmonicPoly { analytic: rhs_analytic, anti: vec![] };
            let dist = lhs.max_coeff_distance(&rhs);
            worst = worst.max(dist);
            if dist > PROJECTION_TOL {
                failures.push(format!("trial {trial} (degree {degree}): coeff gap {dist:.2e}"));
            }
        }
        format!("20 random series to degree 32, max coeff gap {worst:.1e} (tol {PROJECTION_TOL:.0e})")
    }));

    outcomes
}

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let outcomes = main_suite();
    let total = start.elapsed();
    let mut failed = Vec::new();
    for out in &outcomes {
        let status = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        let budget = match out.budget {
            Some(cap) => format!(" [budget {cap:?}]"),
            None => String::new(),
        };
        println!(
            "{status} {:<32} {:>8.2?}{budget}  {}",
            out.label, out.elapsed, out.detail
        );
        for reason in &out.failures {
            println!("     - {reason}");
            failed.push(format!("{}: {reason}", out.label));
        }
    }
    println!("total runtime {total:.2?} (budget {TOTAL_BUDGET:?})");
    if total > TOTAL_BUDGET {
        failed.push(format!("suite runtime {total:.2?} over {TOTAL_BUDGET:?}"));
    }
    assert!(
        failed.is_empty(),
        "{} acceptance failure(s):\n{}",
        failed.len(),
        failed.join("\n")
    );
}
