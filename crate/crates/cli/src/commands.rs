use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use selfsim_core::grig::act_vertex;
use selfsim_core::grig::{Gen, GroupWord, Vertex};
use selfsim_core::hecke::{
    assemble_level, assemble_orbital, level_generator_matrices, verify_relations, AlgebraElement,
    LevelMatrices, RELATIONS,
};
use selfsim_core::intervals::IntervalUnion;
use selfsim_core::measure::rigidity_statistics;
use selfsim_core::renorm::{curve_invariance_check, lambda_slice, omega_svg, slice_spectrum_samples};
use selfsim_core::schreier::orbital_ball;
use selfsim_core::spectra::{eig_histogram, hausdorff_to_set, sym_eigs, EigReport, SOLVER_TOL};

use crate::config::{Command, RunConfig, Target};
use crate::error::CliError;

/// Result of a command that ran to completion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    /// Whether every invariant checked by the command held.
    pub passed: bool,
    /// One-line human summary.
    pub summary: String,
    /// Artifact file names, relative to the output directory.
    pub files: Vec<String>,
}

/// Collects artifacts written to the output directory.
struct Artifacts {
    dir: PathBuf,
    files: Vec<String>,
}

impl Artifacts {
    fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Artifacts {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
        text.push('\n');
        self.write(name, text)
    }

    fn eigenvalues(&mut self, name: &str, report: &EigReport) -> Result<(), CliError> {
        let mut buf = Vec::new();
        report.write_csv(&mut buf).expect("writing to memory");
        self.write(name, buf)
    }
}

/// Runs a configuration with the level permutations left untouched.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    run_with(config, |_, _| {})
}

/// Runs a configuration. `tamper` sees the level permutations of `verify`
/// before they are checked, which lets tests inject faults.
pub fn run_with(config: &RunConfig, tamper: impl Fn(usize, &mut LevelMatrices)) -> Result<Outcome, CliError> {
    config.validate()?;
    let mut out = Artifacts::new(&config.out)?;
    let (passed, summary) = match &config.command {
        Command::Verify { max_level } => verify(*max_level, &tamper, &mut out)?,
        Command::Spectrum {
            level,
            target,
            bins,
            export_matrix,
        } => spectrum(config, *level, *target, *bins, *export_matrix, &mut out)?,
        Command::Slice { t, max_level } => slice(t, *max_level, config.tol, &mut out)?,
        Command::Omega { max_level, samples, t } => omega(*max_level, *samples, t, config.tol, &mut out)?,
        Command::Orbital { .. } => orbital(config, &mut out)?,
        Command::Rigidity {
            q,
            samples,
            depth,
            seed,
        } => {
            let report = rigidity_statistics(*q, *samples, *depth, *seed)?;
            out.json("rigidity.json", &report)?;
            let summary = match report.min_fraction() {
                Some(f) => format!("{samples} samples, least rigid fraction {f}"),
                None => "no samples drawn".to_string(),
            };
            (true, summary)
        }
    };
    let mut files = out.files.clone();
    files.push("manifest.json".into());
    let manifest = json!({
        "tool": "selfsim",
        "version": env!("CARGO_PKG_VERSION"),
        "core_version": selfsim_core::VERSION,
        "command": config.command.name(),
        "config": config,
        "tolerances": {
            "check": config.tol,
            "solver_relative": SOLVER_TOL,
        },
        "outputs": files,
        "passed": passed,
    });
    out.json("manifest.json", &manifest)?;
    Ok(Outcome {
        passed,
        summary,
        files,
    })
}

#[derive(Serialize)]
struct LevelCheck {
    level: usize,
    passed: bool,
    failed: Option<String>,
}

fn verify(
    max_level: usize,
    tamper: &impl Fn(usize, &mut LevelMatrices),
    out: &mut Artifacts,
) -> Result<(bool, String), CliError> {
    let mut levels = Vec::new();
    for n in 0..=max_level {
        let mut m = level_generator_matrices(n)?;
        tamper(n, &mut m);
        let failed = match verify_relations(&m) {
            Ok(()) => matches_vertex_action(&m).err(),
            Err(failure) => Some(failure.relation.to_string()),
        };
        levels.push(LevelCheck {
            level: n,
            passed: failed.is_none(),
            failed,
        });
    }
    let first_failure = levels.iter().find(|l| !l.passed);
    let summary = match first_failure {
        None => format!("all relations hold at levels 0..={max_level}"),
        Some(l) => format!(
            "relation {} fails at level {}",
            l.failed.as_deref().unwrap_or("?"),
            l.level
        ),
    };
    let passed = first_failure.is_none();
    out.json(
        "verify.json",
        &json!({ "relations": RELATIONS, "levels": levels, "passed": passed }),
    )?;
    Ok((passed, summary))
}

/// Largest level at which the permutations are compared with the vertex
/// action vertex by vertex.
const ACTION_CHECK_LEVEL: usize = 10;

fn matches_vertex_action(m: &LevelMatrices) -> Result<(), String> {
    if m.level > ACTION_CHECK_LEVEL {
        return Ok(());
    }
    for g in Gen::ALL {
        let word = GroupWord::letter(g);
        let perm = m.generator(g);
        for v in Vertex::level_set(m.level) {
            if perm.apply(v.index()) != act_vertex(&word, &v).index() {
                return Err(format!("{g} matches the vertex action"));
            }
        }
    }
    Ok(())
}

fn check_letters(m: &AlgebraElement) -> Result<(), CliError> {
    match m.support().find(|w| w.len() > 1) {
        Some(w) => Err(CliError::Usage(format!(
            "element must be supported on e, a, b, c, d; found the word {w}"
        ))),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct Comparison {
    target: String,
    intervals: IntervalUnion,
    forward: f64,
    backward: f64,
    inside: bool,
}

fn compare(points: &[f64], target: Target, tol: f64) -> Comparison {
    let set = target.set();
    let (forward, backward) = if points.is_empty() {
        (0.0, f64::INFINITY)
    } else {
        hausdorff_to_set(points, &set)
    };
    Comparison {
        target: target.to_string(),
        intervals: set,
        forward,
        backward,
        inside: forward <= tol,
    }
}

fn histogram_csv(points: &[f64], bins: usize, set: &IntervalUnion) -> String {
    let ends = set.endpoints();
    let lo = ends.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = ends.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        hi = lo + 1.0;
    }
    let h = eig_histogram(points, bins, (lo, hi));
    let width = (hi - lo) / bins as f64;
    let mut text = format!("# underflow={} overflow={}\nlo,hi,count\n", h.underflow, h.overflow);
    for (k, count) in h.counts.iter().enumerate() {
        let a = lo + width * k as f64;
        text.push_str(&format!("{a:?},{:?},{count}\n", a + width));
    }
    text
}

fn spectrum(
    config: &RunConfig,
    level: usize,
    target: Target,
    bins: usize,
    export_matrix: bool,
    out: &mut Artifacts,
) -> Result<(bool, String), CliError> {
    let m = config.element_or_delta();
    check_letters(&m)?;
    let matrix = assemble_level(&m, level)?;
    let report = sym_eigs(&matrix)?;
    let comparison = compare(&report.eigenvalues, target, config.tol);
    out.eigenvalues("eigenvalues.csv", &report)?;
    out.write("histogram.csv", histogram_csv(&report.eigenvalues, bins, &comparison.intervals))?;
    if export_matrix {
        let mut buf = Vec::new();
        matrix.write_csv(&mut buf).expect("writing to memory");
        out.write("matrix.csv", buf)?;
        out.json("matrix.meta.json", &matrix.meta(Some(level)))?;
    }
    let passed = report.within_tolerance() && comparison.inside;
    let summary = format!(
        "{} eigenvalues at level {level}; forward {:.3e}, backward {:.3e} to {target}",
        report.dim, comparison.forward, comparison.backward
    );
    out.json(
        "spectrum.json",
        &json!({
            "element": m,
            "level": level,
            "dim": report.dim,
            "method": report.method,
            "residual_bound": report.residual_bound,
            "norm": report.norm,
            "residual_within_tolerance": report.within_tolerance(),
            "comparison": comparison,
            "passed": passed,
        }),
    )?;
    Ok((passed, summary))
}

fn slice(ts: &[f64], max_level: u32, tol: f64, out: &mut Artifacts) -> Result<(bool, String), CliError> {
    let results: Vec<(f64, IntervalUnion, Vec<(u32, Vec<f64>)>)> = ts
        .par_iter()
        .map(|&t| {
            let samples = (0..=max_level).map(|n| (n, slice_spectrum_samples(t, n))).collect();
            (t, lambda_slice(t), samples)
        })
        .collect();

    let mut endpoints = String::from("t,interval,lo,hi\n");
    let mut samples_csv = String::from("t,n,value\n");
    let mut report = Vec::new();
    let mut passed = true;
    for (t, set, per_level) in &results {
        for (k, [lo, hi]) in set.intervals().iter().enumerate() {
            endpoints.push_str(&format!("{t:?},{k},{lo:?},{hi:?}\n"));
        }
        let mut levels = Vec::new();
        for (n, values) in per_level {
            for v in values {
                samples_csv.push_str(&format!("{t:?},{n},{v:?}\n"));
            }
            let (forward, backward) = hausdorff_to_set(values, set);
            passed &= forward <= tol;
            levels.push(json!({ "n": n, "count": values.len(), "forward": forward, "backward": backward }));
        }
        report.push(json!({ "t": t, "intervals": set, "levels": levels }));
    }
    out.write("slice.csv", endpoints)?;
    out.write("samples.csv", samples_csv)?;
    out.write("slice.svg", omega_svg(max_level.min(5), ts))?;
    out.json("slice.json", &json!({ "slices": report, "passed": passed }))?;
    Ok((passed, format!("{} slices, samples to level {max_level}", ts.len())))
}

fn omega(max_level: u32, samples: usize, ts: &[f64], tol: f64, out: &mut Artifacts) -> Result<(bool, String), CliError> {
    let curves: Vec<(u32, u64)> = (1..=max_level)
        .flat_map(|n| (0..1u64 << n).map(move |j| (n, j)))
        .collect();
    let reports: Vec<_> = curves
        .par_iter()
        .map(|&(n, j)| curve_invariance_check(n, j, samples, tol))
        .collect();
    let mut csv = String::from("n,j,evaluated,skipped_near_pole,max_residual,passed\n");
    for r in &reports {
        csv.push_str(&format!(
            "{},{},{},{},{:?},{}\n",
            r.n, r.j, r.evaluated, r.skipped_near_pole, r.max_residual, r.passed
        ));
    }
    let passed = reports.iter().all(|r| r.passed);
    let worst = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    out.write("curves.csv", csv)?;
    out.write("omega.svg", omega_svg(max_level.min(6), ts))?;
    out.json(
        "omega.json",
        &json!({ "curves": reports.len(), "worst_residual": worst, "passed": passed }),
    )?;
    Ok((passed, format!("{} curves, worst residual {worst:.3e}", reports.len())))
}

fn orbital(config: &RunConfig, out: &mut Artifacts) -> Result<(bool, String), CliError> {
    let Command::Orbital {
        x,
        gens,
        radius,
        depth,
        target,
    } = &config.command
    else {
        unreachable!("dispatched on the command");
    };
    let m = config.element_or_delta();
    let ball = orbital_ball(x, gens, *radius, *depth)?;
    let op = assemble_orbital(&m, &ball)?;
    let report = sym_eigs(&op.matrix)?;

    let mut graph = Vec::new();
    ball.write_csv(&mut graph).expect("writing to memory");
    out.write("graph.csv", graph)?;
    out.eigenvalues("eigenvalues.csv", &report)?;
    let mut flags = String::from("vertex,id,boundary\n");
    for (v, flag) in op.boundary.iter().enumerate() {
        flags.push_str(&format!("{v},{},{flag}\n", ball.id(v)));
    }
    out.write("boundary.csv", flags)?;

    let set = target.set();
    let near = report
        .eigenvalues
        .iter()
        .filter(|&&v| set.distance(v) <= 0.05)
        .count();
    let fraction = near as f64 / report.dim.max(1) as f64;
    let comparison = compare(&report.eigenvalues, *target, config.tol);
    let passed = report.within_tolerance();
    out.json(
        "orbital.json",
        &json!({
            "x": x,
            "gens": gens,
            "radius": radius,
            "element": m,
            "vertices": ball.vertex_count(),
            "edges": ball.edge_count(),
            "boundary_rows": op.boundary.iter().filter(|&&b| b).count(),
            "residual_bound": report.residual_bound,
            "min_eigenvalue": report.eigenvalues.first(),
            "max_eigenvalue": report.eigenvalues.last(),
            "fraction_within_0.05": fraction,
            "comparison": comparison,
            "passed": passed,
        }),
    )?;
    Ok((
        passed,
        format!(
            "{} vertices, {:.1}% of eigenvalues within 0.05 of {target}",
            ball.vertex_count(),
            100.0 * fraction
        ),
    ))
}
