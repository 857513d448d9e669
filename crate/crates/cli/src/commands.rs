use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use brst_core::brst::{
    brst_cohomology, check_identities, dplus_on_lc_cohomology, hilbert_certificate, lc_invariants_oracle, lc_table,
    random_bihomogeneous, weight_box, BrstComplex, BrstError, CohomologyReport, TruncationSpec,
};
use brst_core::derham::{predicted_dimension_table, predicted_poincare, setup_poincare, Family};
use brst_core::models::{
    build_cm_setup, build_hypertoric_setup, build_preprojective_setup, build_quiver_setup,
    check_hypertoric_smoothness, check_stability_cm, check_stability_preprojective, minimal_imaginary_root, presets,
    HypertoricData, Quiver, ReductionSetup, UNVERIFIED_ASSUMPTIONS,
};
use rand::SeedableRng;
use rayon::prelude::*;

use crate::config::{RunConfig, SetupSpec, WeightSpec};
use crate::report::{Hilbert, Mismatch, Predicted, Report, Status, TableRow, Verdict};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Flatness,
    Brst,
    Oracle,
    Predict,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Flatness => "flatness",
            Command::Brst => "brst",
            Command::Oracle => "oracle",
            Command::Predict => "predict",
            Command::Verify => "verify",
        }
    }
}

/// Extra command-line only options.
#[derive(Debug, Clone, Default)]
pub struct Extras {
    /// Directory for assembled differential matrices (`brst` only).
    pub dump: Option<String>,
}

fn render_list<T: ToString>(v: &[T]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn echo_for(setup: &ReductionSetup) -> BTreeMap<String, String> {
    let mut e: BTreeMap<String, String> = setup.provenance.echo.clone();
    e.insert("kind".into(), setup.provenance.kind.as_str().to_string());
    e.insert("variables".into(), setup.n_vars.to_string());
    e.insert("group_dim".into(), setup.g_dim().to_string());
    e.insert("group_blocks".into(), render_list(&setup.group_blocks));
    e.insert("torus".into(), setup.is_torus().to_string());
    if let Some(t) = setup.flatness_target {
        e.insert("flatness_target".into(), t.to_string());
    }
    if let Some(s) = &setup.shift_vector {
        e.insert("shift_vector".into(), render_list(s));
    }
    e
}

fn diagram(name: &str) -> Result<Quiver, String> {
    presets::by_name(name).map_err(|e| e.to_string())
}

/// Builds the setup, recording every machine-checkable condition.
fn build(spec: &SetupSpec, report: &mut Report) -> Option<ReductionSetup> {
    let built = match spec {
        SetupSpec::Hypertoric { matrix, theta, c } => {
            let h = HypertoricData { m: matrix.clone(), theta: theta.clone(), c: c.clone() };
            match h.check_unimodular() {
                Ok(()) => report.check("unimodular", Status::Pass, ""),
                Err(e) => report.check("unimodular", Status::Fail, e.to_string()),
            }
            if h.check_unimodular().is_ok() && theta.len() == h.d() {
                match check_hypertoric_smoothness(&h) {
                    Ok(()) => report.check("smoothness", Status::Pass, ""),
                    Err(j) => {
                        let one_based: Vec<usize> = j.iter().map(|x| x + 1).collect();
                        let set = format!("{{{}}}", one_based.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
                        report.check("smoothness", Status::Fail, format!("theta lies in the span of columns J = {set}"));
                    }
                }
            }
            build_hypertoric_setup(&h).map_err(|e| e.to_string())
        }
        SetupSpec::Quiver { vertices, arrows, dims, theta, c, distinguished } => Quiver::new(*vertices, arrows.clone())
            .and_then(|q| build_quiver_setup(&q, dims, theta, c, *distinguished))
            .map_err(|e| e.to_string()),
        SetupSpec::Preprojective { diagram: name, theta, c } => diagram(name).and_then(|q| {
            let delta = minimal_imaginary_root(&q).map_err(|e| e.to_string())?;
            match check_stability_preprojective(&q, &delta, theta) {
                Ok(()) => report.check("stability", Status::Pass, format!("delta = {}", render_list(&delta))),
                Err(e) => report.check("stability", Status::Fail, e.to_string()),
            }
            build_preprojective_setup(&q, theta, c).map_err(|e| e.to_string())
        }),
        SetupSpec::CalogeroMoser { diagram: name, n, theta, c } => diagram(name).and_then(|q| {
            match check_stability_cm(&q, *n, theta) {
                Ok(()) => report.check("stability", Status::Pass, ""),
                Err(e) => report.check("stability", Status::Fail, e.to_string()),
            }
            build_cm_setup(&q, *n, theta, c).map_err(|e| e.to_string())
        }),
        SetupSpec::Family { .. } => return None,
    };
    match built {
        Ok(s) => {
            report.check("setup", Status::Pass, "");
            match s.validate() {
                Ok(()) => report.check("moment-map", Status::Pass, "symbols, brackets, Jacobi and character"),
                Err(e) => report.check("moment-map", Status::Fail, e.to_string()),
            }
            report.setup_echo = echo_for(&s);
            Some(s)
        }
        Err(e) => {
            report.check("setup", Status::Fail, e);
            report.verdict = Verdict::ValidationFailure;
            None
        }
    }
}

/// The concrete setup described by a config, or the first failed check.
/// Named families have no setup.
pub fn build_setup(cfg: &RunConfig) -> Result<ReductionSetup, String> {
    let mut scratch = Report::new("build", BTreeMap::new());
    let setup = build(&cfg.setup, &mut scratch);
    if let Some(c) = scratch.checks.iter().find(|c| c.status == Status::Fail) {
        return Err(format!("{}: {}", c.name, c.detail));
    }
    setup.ok_or_else(|| "a named family has no concrete setup".to_string())
}

fn family_echo(spec: &SetupSpec) -> BTreeMap<String, String> {
    let mut e = BTreeMap::new();
    if let SetupSpec::Family { family, l, n } = spec {
        e.insert("kind".into(), "family".into());
        e.insert("family".into(), family.clone());
        e.insert("l".into(), l.to_string());
        e.insert("n".into(), n.to_string());
    }
    e
}

pub fn weights_for(setup: &ReductionSetup, cfg: &RunConfig) -> Result<Vec<Vec<i64>>, CliError> {
    let rank = setup.weight_rank();
    match &cfg.weights {
        WeightSpec::Auto => Ok(weight_box(rank, cfg.weight_radius.max(0))),
        WeightSpec::List(ws) => {
            if let Some(w) = ws.iter().find(|w| w.len() != rank) {
                return Err(CliError::Config(format!("weight {w:?} has length {}, torus rank is {rank}", w.len())));
            }
            Ok(ws.clone())
        }
    }
}

fn spec_for(weight: &[i64], bound: i64) -> Result<TruncationSpec, CliError> {
    TruncationSpec::new(weight.to_vec(), bound).map_err(|e| CliError::Config(e.to_string()))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| CliError::Config(e.to_string()))
}

/// Runs a command; errors are configuration problems (exit 3).
pub fn run(cmd: Command, cfg: &RunConfig, extras: &Extras) -> Result<Report, CliError> {
    let mut report = Report::new(cmd.name(), family_echo(&cfg.setup));
    let setup = build(&cfg.setup, &mut report);
    if cmd == Command::Validate {
        for a in UNVERIFIED_ASSUMPTIONS {
            report.check("assumption", Status::Assumed, *a);
        }
    }
    if report.checks.iter().any(|c| c.status == Status::Fail) {
        report.verdict = Verdict::ValidationFailure;
    }
    if report.verdict == Verdict::ValidationFailure {
        return Ok(report);
    }
    let Some(setup) = setup else {
        // named family: only predictions make sense
        if cmd != Command::Predict {
            report.check("setup", Status::Fail, "a named family has no concrete setup; only `predict` accepts it");
            report.verdict = Verdict::ValidationFailure;
            return Ok(report);
        }
        predict_family(cfg, &mut report)?;
        report.finish();
        return Ok(report);
    };
    match cmd {
        Command::Validate => {}
        Command::Flatness => flatness(&setup, cfg, &mut report),
        Command::Brst => brst(&setup, cfg, extras, &mut report)?,
        Command::Oracle => oracle(&setup, cfg, &mut report)?,
        Command::Predict => predict_setup(&setup, &cfg.setup, &mut report)?,
        Command::Verify => verify(&setup, cfg, &mut report)?,
    }
    report.finish();
    Ok(report)
}

fn flatness_generators(setup: &ReductionSetup, cfg: &RunConfig) -> Result<Vec<brst_core::algebra::PolyElement>, CliError> {
    let mut gens = setup.classical_moments.clone();
    if let Some(i) = cfg.append_square {
        let g = gens.get(i.wrapping_sub(1)).ok_or_else(|| {
            CliError::Config(format!("append_square = {i} but there are {} generators", setup.classical_moments.len()))
        })?;
        gens.push(g.mul(g));
    }
    Ok(gens)
}

fn flatness(setup: &ReductionSetup, cfg: &RunConfig, report: &mut Report) {
    match run_flatness(setup, cfg, report) {
        Ok(()) => {}
        Err(e) => report.check("flatness", Status::Fail, e.to_string()),
    }
}

fn run_flatness(setup: &ReductionSetup, cfg: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let degree = cfg.flatness_degree.unwrap_or(cfg.max_degree.max(0) as usize);
    let gens = flatness_generators(setup, cfg)?;
    let cert = hilbert_certificate(&gens, setup.n_vars, degree).map_err(core_err)?;
    let detail = match cert.first_failure {
        None => format!("Hilbert function matches the complete-intersection series through degree {degree}"),
        Some(k) => format!("Hilbert function departs from the complete-intersection series at degree {k}"),
    };
    if cfg.append_square.is_some() {
        report.notices.push("negative control: a square of a generator was appended".into());
    }
    report.check("flatness", Status::from_bool(cert.passed()), detail);
    report.hilbert = Some(Hilbert::new(&cert, setup.flatness_target));
    Ok(())
}

fn core_err(e: BrstError) -> CliError {
    CliError::Config(e.to_string())
}

fn require_torus(setup: &ReductionSetup, report: &mut Report) -> bool {
    if setup.is_torus() {
        return true;
    }
    report.check("torus", Status::Fail, BrstError::NonabelianInvariants.to_string());
    report.verdict = Verdict::ValidationFailure;
    false
}

fn brst(setup: &ReductionSetup, cfg: &RunConfig, extras: &Extras, report: &mut Report) -> Result<(), CliError> {
    if !require_torus(setup, report) {
        return Ok(());
    }
    let weights = weights_for(setup, cfg)?;
    let complex = BrstComplex::new(setup.clone());
    let specs: Vec<TruncationSpec> = weights.iter().map(|w| spec_for(w, cfg.max_degree)).collect::<Result<_, _>>()?;
    let results: Vec<Result<CohomologyReport, BrstError>> =
        pool(cfg.jobs)?.install(|| specs.par_iter().map(|s| brst_cohomology(&complex, s)).collect());
    for r in results {
        let r = r.map_err(core_err)?;
        report.tables.extend(r.cells.iter().map(|c| TableRow::from_cell("brst", c, None)));
    }
    if let Some(dir) = &extras.dump {
        dump_matrices(&complex, &specs, Path::new(dir))?;
        report.notices.push(format!("differential matrices written to {dir}"));
    }
    Ok(())
}

fn weight_tag(w: &[i64]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")
}

fn dump_matrices(complex: &BrstComplex, specs: &[TruncationSpec], dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let d = complex.g_dim() as i64;
    for spec in specs {
        for n in -d..d {
            let m = complex.assemble_differential(spec, n).map_err(core_err)?;
            let path = dir.join(format!("d_w{}_n{}.txt", weight_tag(&spec.weight), n));
            fs::write(&path, m.to_triplet_text()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(())
}

fn oracle(setup: &ReductionSetup, cfg: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    if !require_torus(setup, report) {
        return Ok(());
    }
    let weights = weights_for(setup, cfg)?;
    let results: Vec<Result<(Vec<usize>, CohomologyReport), BrstError>> = pool(cfg.jobs)?.install(|| {
        weights
            .par_iter()
            .map(|w| {
                let spec = TruncationSpec::new(w.clone(), cfg.max_degree)?;
                Ok((lc_table(setup, w, cfg.max_degree)?, dplus_on_lc_cohomology(setup, &spec)?))
            })
            .collect()
    });
    for (w, r) in weights.iter().zip(results) {
        let (lc, expected) = r.map_err(core_err)?;
        for (k, &dim) in lc.iter().enumerate() {
            report.tables.push(TableRow {
                table: "lc".into(),
                weight: w.clone(),
                ghost_degree: 0,
                bound: k as i64,
                dim,
                stable: k as i64 <= cfg.max_degree - 2,
                expected: None,
            });
        }
        report.tables.extend(expected.cells.iter().map(|c| TableRow::from_cell("oracle", c, None)));
    }
    Ok(())
}

/// Family of a setup for closed-form predictions, where one applies.
fn family_of(spec: &SetupSpec, setup: &ReductionSetup) -> Option<Family> {
    match spec {
        SetupSpec::Hypertoric { matrix, .. } => Some(Family::Hypertoric { d: matrix.len() }),
        SetupSpec::Preprojective { diagram, .. } => {
            let (kind, rank) = diagram.split_at(1.min(diagram.len()));
            let l: usize = rank.parse().ok()?;
            match kind {
                "A" => Some(Family::PreprojectiveA { l }),
                "D" => Some(Family::PreprojectiveD { l }),
                "E" => Some(Family::PreprojectiveE { l }),
                _ => None,
            }
        }
        _ => Some(Family::Blocks { sizes: setup.group_blocks.clone() }),
    }
}

fn family_label(f: &Family) -> String {
    match f {
        Family::PreprojectiveA { l } => format!("preprojective-a{l}"),
        Family::PreprojectiveD { l } => format!("preprojective-d{l}"),
        Family::PreprojectiveE { l } => format!("preprojective-e{l}"),
        Family::SraA { l, n } => format!("sra-a{l}-rank{n}"),
        Family::Hypertoric { d } => format!("hypertoric-d{d}"),
        Family::Blocks { sizes } => format!("blocks{}", render_list(sizes)),
    }
}

fn group_checks(report: &mut Report, label: &str, p: &brst_core::derham::PoincarePolynomial, rank: usize) {
    let expected = 1u64 << rank;
    report.check(
        &format!("{label}:total"),
        Status::from_bool(p.eval_at_one() == expected),
        format!("value at t=1 is {}, 2^rank = {expected}", p.eval_at_one()),
    );
    report.check(&format!("{label}:palindromic"), Status::from_bool(p.is_palindromic()), "");
}

fn predict_setup(setup: &ReductionSetup, spec: &SetupSpec, report: &mut Report) -> Result<(), CliError> {
    let blocks = setup_poincare(setup);
    let rank: usize = setup.group_blocks.iter().sum();
    if let Some(f) = family_of(spec, setup) {
        let label = family_label(&f);
        let p = predicted_poincare(&f).map_err(|e| CliError::Config(e.to_string()))?;
        group_checks(report, &label, &p, rank);
        report.check(
            &format!("{label}:matches-group"),
            Status::from_bool(p == blocks),
            format!("group blocks {}", render_list(&setup.group_blocks)),
        );
        report.predicted.push(Predicted::new(&label, &p));
    }
    if !matches!(family_of(spec, setup), Some(Family::Blocks { .. })) {
        report.predicted.push(Predicted::new("group", &blocks));
    }
    Ok(())
}

fn predict_family(cfg: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let SetupSpec::Family { family, l, n } = &cfg.setup else {
        unreachable!("only called for named families")
    };
    let f = Family::from_name(family, *l, *n).map_err(|e| CliError::Config(e.to_string()))?;
    let p = predicted_poincare(&f).map_err(|e| CliError::Config(e.to_string()))?;
    let label = family_label(&f);
    if let Family::SraA { .. } = f {
        report.notices.push(
            "the generating function for this family is not the Poincare polynomial of a group; \
             palindromicity and the 2^rank total are not expected"
                .into(),
        );
    } else {
        group_checks(report, &label, &p, f.rank().map_err(|e| CliError::Config(e.to_string()))?);
    }
    report.predicted.push(Predicted::new(&label, &p));
    Ok(())
}

fn identity_checks(setup: &ReductionSetup, cfg: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let complex = BrstComplex::new(setup.clone());
    let outcomes: Vec<Result<bool, BrstError>> = pool(cfg.jobs)?.install(|| {
        (0..cfg.samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
                let a = random_bihomogeneous(complex.n_vars(), complex.g_dim(), 3, &mut rng);
                Ok(check_identities(&complex, &a)?.all())
            })
            .collect()
    });
    let mut failed = Vec::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        if !o.map_err(core_err)? {
            failed.push(i);
        }
    }
    let detail = if failed.is_empty() {
        format!("(ad Q)^2 = 0, d+^2 = d-^2 = d+d- + d-d+ = 0, ad Q = d+ + d- on {} random elements", cfg.samples)
    } else {
        format!("failed on samples {failed:?}")
    };
    report.check("identities", Status::from_bool(failed.is_empty()), detail);
    Ok(())
}

fn verify(setup: &ReductionSetup, cfg: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    identity_checks(setup, cfg, report)?;
    run_flatness(setup, cfg, report)?;
    predict_setup(setup, &cfg.setup, report)?;
    if !setup.is_torus() {
        report.notices.push(format!(
            "{}; verify ran identities, flatness and predictions only",
            BrstError::NonabelianInvariants
        ));
        return Ok(());
    }
    let weights = weights_for(setup, cfg)?;
    let n = cfg.max_degree;
    let complex = BrstComplex::new(setup.clone());
    let invariants = lc_invariants_oracle(setup, n).map_err(core_err)?;
    let zero = vec![0; setup.weight_rank()];
    let predicted = predicted_dimension_table(&setup_poincare(setup), &invariants, &zero, n);
    report.check(
        "lc-invariants",
        Status::Pass,
        format!("weight-0 quotient dimensions by level: {}", render_list(&invariants)),
    );
    type Sector = (CohomologyReport, CohomologyReport);
    let results: Vec<Result<Sector, BrstError>> = pool(cfg.jobs)?.install(|| {
        weights
            .par_iter()
            .map(|w| {
                let spec = TruncationSpec::new(w.clone(), n)?;
                Ok((brst_cohomology(&complex, &spec)?, dplus_on_lc_cohomology(setup, &spec)?))
            })
            .collect()
    });
    let mut compared = 0usize;
    for (w, r) in weights.iter().zip(results) {
        let (got, oracle) = r.map_err(core_err)?;
        let is_zero = w.iter().all(|&x| x == 0);
        for cell in &got.cells {
            let expected = if is_zero { predicted.dim(cell.ghost_degree, cell.bound) } else { oracle.dim(cell.ghost_degree, cell.bound) };
            report.tables.push(TableRow::from_cell("brst", cell, Some(expected)));
            if !cell.stable {
                continue;
            }
            compared += 1;
            if cell.dim != expected {
                report.mismatches.push(Mismatch {
                    table: "brst".into(),
                    weight: w.clone(),
                    ghost_degree: cell.ghost_degree,
                    bound: cell.bound,
                    got: cell.dim,
                    expected,
                });
            }
        }
    }
    report.check(
        "cohomology",
        Status::from_bool(report.mismatches.is_empty()),
        format!("{compared} stable cells over {} weight sectors compared", weights.len()),
    );
    Ok(())
}
