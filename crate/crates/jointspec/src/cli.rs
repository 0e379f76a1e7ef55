//! Command-line front end: JSON in, report.json / cloud.csv / plot.svg out.
//!
//! Exit codes: 0 all checks passed, 1 a check failed or was inconclusive,
//! 2 input or schema error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bcl_model::{
    self, bcl_pair_from, distinguished_check, pair_defining_polys, purity_check, sample_variety,
    VarietyPoint, VarietySample, DEFAULT_N_POWERS,
};
use crate::cayley_hamilton::{build_annihilators, moment_curve_alphas, spectrum_as_variety_check};
use crate::error::{Error, Result};
use crate::grid::{DiskGrid, PolyDiskGrid};
use crate::io::{self, BclJson, IdealJson, SymbolFamilyJson, TupleJson};
use crate::matrix_core::{random_complex, CMatrix, C64};
use crate::mpoly::MPoly;
use crate::rational_symbols::{
    nilpotency_annihilation_check, spectrum_union_sample, symbol_level_pa_check,
};
use crate::tuple_spectrum::{joint_eigenvalues_seeded, taylor_singular_at, CommutingTuple};

#[derive(Parser, Debug)]
#[command(name = "jointspec", version, about = "Joint spectra, annihilating families and distinguished varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// input JSON file (schema depends on the subcommand)
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// output directory for report.json / cloud.csv / plot.svg
    #[arg(long, default_value = "out", global = true)]
    pub out: PathBuf,

    /// radial rings of the polar sampling grid
    #[arg(long, default_value_t = crate::grid::DEFAULT_RADII, global = true)]
    pub grid_radii: usize,

    /// angular samples per ring
    #[arg(long, default_value_t = crate::grid::DEFAULT_ANGLES, global = true)]
    pub grid_angles: usize,

    /// seed for all randomized steps (fully deterministic per seed)
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// tolerance overrides, written --tol.<name>=<float>
    #[arg(long = "tol", value_name = "name=float", global = true)]
    pub tol: Vec<String>,

    /// emit plot.svg (default)
    #[arg(long, overrides_with = "no_svg", global = true)]
    pub svg: bool,

    /// suppress plot.svg
    #[arg(long, global = true)]
    pub no_svg: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq)]
pub enum Command {
    /// joint eigenvalues of a commuting tuple (Tuple JSON)
    JointSpectrum,
    /// build the annihilating family and certify the zero-set identity
    Annihilate,
    /// Koszul singularity test vs joint-eigenvalue membership
    KoszulCheck,
    /// sample the variety of a BCL model; purity and distinguished checks
    BclVariety,
    /// defining polynomials p1, p2 and their common factor xi for a pair
    PairXi,
    /// spectrum-union cloud and symbol-level annihilation for rational symbols
    ToeplitzUnion,
    /// support membership for a polynomial ideal at probe points
    SupportCheck,
    /// run every bundled fixture suite and aggregate pass/fail
    VerifyAll,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    pub grid: DiskGrid,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub emit_svg: bool,
}

impl RunConfig {
    pub fn tol(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

/// Accept the documented `--tol.<name>=<float>` spelling by rewriting it to
/// the clap-friendly `--tol <name>=<float>` before parsing.
fn normalize_args(args: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    for a in args {
        if let Some(rest) = a.strip_prefix("--tol.") {
            out.push("--tol".to_string());
            out.push(rest.to_string());
        } else {
            out.push(a);
        }
    }
    out
}

fn parse_tols(items: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for item in items {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("bad tolerance override '{item}', want name=float")))?;
        let v: f64 = value
            .parse()
            .map_err(|_| Error::Invalid(format!("bad tolerance value in '{item}'")))?;
        map.insert(name.to_string(), v);
    }
    Ok(map)
}

pub fn config_from_cli(cli: Cli) -> Result<RunConfig> {
    Ok(RunConfig {
        command: cli.command,
        input: cli.input,
        out: cli.out,
        grid: DiskGrid::new(cli.grid_radii.max(1), cli.grid_angles.max(1)),
        seed: cli.seed,
        tolerances: parse_tols(&cli.tol)?,
        emit_svg: !cli.no_svg,
    })
}

/// Entry point used by the binary. Returns the process exit code.
pub fn run_from_args(args: impl IntoIterator<Item = String>) -> i32 {
    if let Ok(threads) = std::env::var("JOINTSPEC_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = match Cli::try_parse_from(normalize_args(args)) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version through this path too
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let config = match config_from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match run(&config) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Status of a finished run, before becoming an exit code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl RunStatus {
    fn as_str(self) -> &'static str {
        match self {
            RunStatus::Pass => "pass",
            RunStatus::Fail => "fail",
            RunStatus::Inconclusive => "inconclusive",
        }
    }

    fn exit_code(self) -> i32 {
        match self {
            RunStatus::Pass => 0,
            _ => 1,
        }
    }
}

fn require_input(config: &RunConfig) -> Result<&Path> {
    config
        .input
        .as_deref()
        .ok_or_else(|| Error::Invalid("this subcommand requires --input".into()))
}

fn write_report(config: &RunConfig, status: RunStatus, mut body: Value) -> Result<()> {
    if let Value::Object(map) = &mut body {
        map.insert("status".into(), json!(status.as_str()));
        map.insert("seed".into(), json!(config.seed));
    }
    io::write_json(&body, &config.out.join("report.json"))?;
    Ok(())
}

/// Run one configured command; artifacts land in `config.out`.
pub fn run(config: &RunConfig) -> Result<i32> {
    std::fs::create_dir_all(&config.out)?;
    let (status, body) = match config.command {
        Command::JointSpectrum => cmd_joint_spectrum(config)?,
        Command::Annihilate => cmd_annihilate(config)?,
        Command::KoszulCheck => cmd_koszul_check(config)?,
        Command::BclVariety => cmd_bcl_variety(config)?,
        Command::PairXi => cmd_pair_xi(config)?,
        Command::ToeplitzUnion => cmd_toeplitz_union(config)?,
        Command::SupportCheck => cmd_support_check(config)?,
        Command::VerifyAll => cmd_verify_all(config)?,
    };
    write_report(config, status, body)?;
    Ok(status.exit_code())
}

fn load_tuple(config: &RunConfig) -> Result<CommutingTuple> {
    let j: TupleJson = io::read_json(require_input(config)?)?;
    j.to_tuple()
}

fn probes_for(t: &CommutingTuple, count: usize, seed: u64) -> Vec<Vec<C64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd_1234);
    (0..count)
        .map(|_| {
            (0..t.len())
                .map(|_| {
                    let c = random_complex(&mut rng);
                    // spread over the polydisk of radius 2
                    c * (2.0 / (1.0 + c.norm()))
                })
                .collect()
        })
        .collect()
}

fn cmd_joint_spectrum(config: &RunConfig) -> Result<(RunStatus, Value)> {
    let t = load_tuple(config)?;
    let spec = joint_eigenvalues_seeded(&t, config.seed)?;
    io::write_json(&io::spectrum_to_json(&spec), &config.out.join("spectrum.json"))?;
    let body = json!({
        "points": spec.points.len(),
        "residual": spec.residual,
        "commutativity_residual": t.comm_residual(),
    });
    Ok((RunStatus::Pass, body))
}

fn cmd_annihilate(config: &RunConfig) -> Result<(RunStatus, Value)> {
    let t = load_tuple(config)?;
    let tol = config.tol("zero", 1e-6);
    let alphas = moment_curve_alphas(t.len(), t.dim());
    let fam = build_annihilators(&t, &alphas)?;
    let probes = probes_for(&t, 100, config.seed);
    let report = spectrum_as_variety_check(&t, &fam, &probes, tol)?;
    let status = if report.zero_set_pass {
        RunStatus::Pass
    } else {
        RunStatus::Fail
    };
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "point": v.point.iter().map(|c| json!({"re": c.re, "im": c.im})).collect::<Vec<_>>(),
                "residual": v.residual,
                "expected_zero": v.expected_zero,
            })
        })
        .collect();
    let body = json!({
        "alphas": alphas.count(),
        "max_residual": fam.max_residual,
        "max_spectrum_residual": report.max_spectrum_residual,
        "min_probe_residual": report.min_probe_residual,
        "zero_set_pass": report.zero_set_pass,
        "filtered_probes": report.filtered_probes,
        "violations": violations,
    });
    Ok((status, body))
}

fn cmd_koszul_check(config: &RunConfig) -> Result<(RunStatus, Value)> {
    let t = load_tuple(config)?;
    let tol = config.tol("koszul", 1e-6);
    let spec = joint_eigenvalues_seeded(&t, config.seed)?;
    let mut checked = 0usize;
    let mut inconclusive = 0usize;
    let mut disagreements = 0usize;
    let mut test = |point: &[C64], expect: bool| {
        match taylor_singular_at(&t, point, tol) {
            Ok(b) => {
                checked += 1;
                if b != expect {
                    disagreements += 1;
                }
            }
            Err(Error::RankIndeterminate) => inconclusive += 1,
            Err(_) => inconclusive += 1,
        }
    };
    for p in &spec.points {
        test(p, true);
    }
    let delta = 0.05;
    for probe in probes_for(&t, 50, config.seed) {
        let dmin = spec
            .points
            .iter()
            .map(|s| {
                s.iter()
                    .zip(&probe)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        if dmin >= delta {
            test(&probe, false);
        }
    }
    let status = if disagreements > 0 {
        RunStatus::Fail
    } else if checked == 0 {
        RunStatus::Inconclusive
    } else {
        RunStatus::Pass
    };
    let body = json!({
        "checked": checked,
        "inconclusive": inconclusive,
        "disagreements": disagreements,
    });
    Ok((status, body))
}

fn purity_value(b: &crate::bcl_model::BCLData, j: usize) -> (Value, Option<bool>) {
    match purity_check(b, j, DEFAULT_N_POWERS) {
        Ok(r) => (
            json!({"pure": r.pure, "nu": r.nu, "power_norm": r.power_norm}),
            Some(r.pure),
        ),
        Err(Error::PurityInconclusive { nu, power_norm }) => (
            json!({"pure": Value::Null, "nu": nu, "power_norm": power_norm}),
            None,
        ),
        Err(_) => (json!({"pure": Value::Null}), None),
    }
}

fn cmd_bcl_variety(config: &RunConfig) -> Result<(RunStatus, Value)> {
    let j: BclJson = io::read_json(require_input(config)?)?;
    let b = j.to_bcl()?;
    let tol_boundary = config.tol("boundary", 1e-3);
    let sample = sample_variety(&b, &config.grid, config.seed);
    io::write_cloud_csv(&sample, &config.out.join("cloud.csv"))?;
    if config.emit_svg {
        crate::plot::write_cloud_svg(&sample, &config.out.join("plot.svg"))?;
    }
    let product_residual = b.product_law_residual(&config.grid);
    let dist = distinguished_check(&sample, tol_boundary);
    let purity: Vec<Value> = (0..b.d()).map(|j| purity_value(&b, j).0).collect();
    let any_inconclusive = (0..b.d()).any(|j| purity_value(&b, j).1.is_none());
    let sampling_ok = product_residual <= config.tol("product", 1e-10)
        && sample.max_product_residual() <= config.tol("lambda_product", 1e-8);
    let status = if !sampling_ok {
        RunStatus::Fail
    } else if any_inconclusive {
        RunStatus::Inconclusive
    } else {
        RunStatus::Pass
    };
    let body = json!({
        "points": sample.points.len(),
        "skipped": sample.skipped,
        "grid": sample.grid_spec,
        "product_law_residual": product_residual,
        "max_point_residual": sample.max_residual(),
        "max_lambda_product_residual": sample.max_product_residual(),
        "distinguished": dist.is_distinguished,
        "has_interior_point": dist.has_interior_point,
        "boundary_witnesses": dist.witnesses.len(),
        "purity": purity,
    });
    Ok((status, body))
}

fn poly_json(p: &MPoly) -> Value {
    serde_json::to_value(crate::io::PolyJson::from_poly(p)).unwrap_or(Value::Null)
}

fn cmd_pair_xi(config: &RunConfig) -> Result<(RunStatus, Value)> {
    let j: BclJson = io::read_json(require_input(config)?)?;
    let b = j.to_bcl()?;
    let tol = config.tol("xi", 1e-6);
    let (p1, p2, xi) = pair_defining_polys(&b, config.tol("gcd", 1e-9))?;
    let sample = sample_variety(&b, &config.grid, config.seed);
    let residual = bcl_model::xi_vanishing_residual(&sample, &xi)?;
    // a constant xi cannot cut out an infinite sampled cloud
    let contradiction = xi.total_degree() == 0 && sample.points.len() > 1;
    let status = if residual <= tol && !contradiction {
        RunStatus::Pass
    } else {
        RunStatus::Fail
    };
    let body = json!({
        "p1": poly_json(&p1),
        "p2": poly_json(&p2),
        "xi": poly_json(&xi),
        "xi_residual": residual,
        "constant_xi_contradiction": contradiction,
        "points": sample.points.len(),
    });
    Ok((status, body))
}

fn cmd_toeplitz_union(config: &RunConfig) -> Result<(RunStatus, Value)> {
    let j: SymbolFamilyJson = io::read_json(require_input(config)?)?;
    let d = j
        .symbols
        .first()
        .map(|s| s.d)
        .ok_or_else(|| Error::Invalid("empty symbol family".into()))?;
    let per_axis = if d == 1 {
        config.grid.clone()
    } else {
        DiskGrid::new(
            config.grid.radii.min(24).max(2),
            config.grid.angles.min(48).max(4),
        )
    };
    let grid = PolyDiskGrid::new(d, per_axis);
    let fam = j.to_family(&grid)?;
    let cloud = spectrum_union_sample(&fam, &grid, config.seed);
    io::write_union_csv(&cloud, &config.out.join("cloud.csv"))?;
    if config.emit_svg && d == 1 {
        let as_variety = VarietySample {
            points: cloud
                .points
                .iter()
                .map(|p| VarietyPoint {
                    source: p.source[0],
                    lambda: p.lambda.clone(),
                    residual: p.residual,
                    product_residual: 0.0,
                })
                .collect(),
            grid_spec: cloud.grid_spec.clone(),
            skipped: cloud.skipped,
        };
        crate::plot::write_cloud_svg(&as_variety, &config.out.join("plot.svg"))?;
    }
    let alphas = moment_curve_alphas(fam.k(), fam.n());
    let pa = symbol_level_pa_check(&fam, &alphas, &grid, config.tol("pa", 1e-7))?;
    let contractive = cloud
        .points
        .iter()
        .all(|p| p.lambda.iter().all(|l| l.norm() <= 1.0 + 1e-8));
    let status = if pa.passes && contractive {
        RunStatus::Pass
    } else {
        RunStatus::Fail
    };
    let body = json!({
        "points": cloud.points.len(),
        "skipped": cloud.skipped,
        "grid": cloud.grid_spec,
        "commutativity_residual": fam.commutativity_residual(),
        "max_point_residual": cloud.max_residual(),
        "pa_max_residual": pa.max_residual,
        "pa_pass": pa.passes,
        "cloud_contractive": contractive,
    });
    Ok((status, body))
}

fn cmd_support_check(config: &RunConfig) -> Result<(RunStatus, Value)> {
    let j: IdealJson = io::read_json(require_input(config)?)?;
    let ideal = j.to_ideal()?;
    let tol = config.tol("support", 1e-6);
    let mut memberships = Vec::new();
    for probe in j.probe_points() {
        let member = crate::ideal_support::support_membership(&ideal, &probe, tol)?;
        memberships.push(json!({
            "point": probe.iter().map(|c| json!({"re": c.re, "im": c.im})).collect::<Vec<_>>(),
            "member": member,
        }));
    }
    let body = json!({
        "generators": ideal.generators().len(),
        "memberships": memberships,
    });
    Ok((RunStatus::Pass, body))
}

fn fixture_swap_pair() -> crate::bcl_model::BCLData {
    let p = CMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    let u = CMatrix::from_fn(2, |r, c| {
        if r + c == 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    bcl_pair_from(&p, &u).expect("swap fixture")
}

fn fixture_diagonal_tuple() -> CommutingTuple {
    CommutingTuple::new(vec![
        CMatrix::diagonal(&[C64::new(0.1, 0.0), C64::new(0.2, 0.0)]),
        CMatrix::diagonal(&[C64::new(0.3, 0.0), C64::new(0.4, 0.0)]),
    ])
    .expect("diagonal fixture")
}

fn fixture_jordan_family(grid: &PolyDiskGrid) -> Result<crate::rational_symbols::SymbolFamily> {
    use crate::mpoly::PolyMatrix;
    let half = C64::new(0.5, 0.0);
    let z = MPoly::var(1, 0);
    let f1 = PolyMatrix::new(
        2,
        1,
        vec![
            z.scale(half),
            MPoly::constant(1, half),
            MPoly::zero(1),
            z.scale(half),
        ],
    )?;
    let f2 = PolyMatrix::from_fn(2, 1, |r, c| {
        if r == c {
            z.scale(half)
        } else {
            MPoly::zero(1)
        }
    });
    let s1 = crate::rational_symbols::RationalMatrixFunction::new(f1, MPoly::one(1), grid)?;
    let s2 = crate::rational_symbols::RationalMatrixFunction::new(f2, MPoly::one(1), grid)?;
    crate::rational_symbols::SymbolFamily::new(vec![s1, s2], grid)
}

fn cmd_verify_all(config: &RunConfig) -> Result<(RunStatus, Value)> {
    let mut suite = BTreeMap::<String, Value>::new();
    let mut all_pass = true;
    let record = |suite: &mut BTreeMap<String, Value>, name: &str, pass: bool, detail: Value| {
        suite.insert(name.to_string(), json!({"pass": pass, "detail": detail}));
        pass
    };

    // annihilating family of the diagonal fixture
    {
        let t = fixture_diagonal_tuple();
        let fam = build_annihilators(&t, &moment_curve_alphas(t.len(), t.dim()))?;
        let probes = probes_for(&t, 100, config.seed);
        let rep = spectrum_as_variety_check(&t, &fam, &probes, config.tol("zero", 1e-6))?;
        let pass = rep.zero_set_pass && fam.max_residual < 1e-8;
        all_pass &= record(
            &mut suite,
            "annihilate_diagonal",
            pass,
            json!({"max_residual": fam.max_residual, "zero_set_pass": rep.zero_set_pass}),
        );
    }

    // Koszul oracle agreement on the diagonal fixture
    {
        let t = fixture_diagonal_tuple();
        let spec = joint_eigenvalues_seeded(&t, config.seed)?;
        let mut ok = true;
        for p in &spec.points {
            ok &= taylor_singular_at(&t, p, 1e-6).unwrap_or(false);
        }
        ok &= !taylor_singular_at(&t, &[C64::new(0.1, 0.0), C64::new(0.4, 0.0)], 1e-6)
            .unwrap_or(true);
        all_pass &= record(
            &mut suite,
            "koszul_diagonal",
            ok,
            json!({"points": spec.points.len()}),
        );
    }

    // swap BCL pair: product law, distinguished, xi
    {
        let b = fixture_swap_pair();
        let grid = DiskGrid::new(config.grid.radii.min(16), config.grid.angles.min(32));
        let sample = sample_variety(&b, &grid, config.seed);
        let product = b.product_law_residual(&grid);
        let dist = distinguished_check(&sample, config.tol("boundary", 1e-3));
        let (_, _, xi) = pair_defining_polys(&b, config.tol("gcd", 1e-9))?;
        let xi_res = bcl_model::xi_vanishing_residual(&sample, &xi)?;
        let pass = product <= 1e-10
            && sample.max_product_residual() <= 1e-8
            && dist.is_distinguished
            && xi_res <= config.tol("xi", 1e-6);
        all_pass &= record(
            &mut suite,
            "bcl_swap",
            pass,
            json!({
                "product_law_residual": product,
                "distinguished": dist.is_distinguished,
                "xi_residual": xi_res,
            }),
        );
    }

    // rational Jordan family: pa check and nilpotency exponent r = n
    {
        let grid = PolyDiskGrid::new(1, DiskGrid::new(6, 12));
        let fam = fixture_jordan_family(&grid)?;
        let pa = symbol_level_pa_check(
            &fam,
            &moment_curve_alphas(fam.k(), fam.n()),
            &grid,
            config.tol("pa", 1e-7),
        )?;
        let xi = MPoly::var(2, 0).sub(&MPoly::var(2, 1));
        let nil = nilpotency_annihilation_check(&fam, &xi, &grid, config.tol("nilp", 1e-10))?;
        let pass = pa.passes && nil.passes && nil.r_used == fam.n();
        all_pass &= record(
            &mut suite,
            "rational_jordan",
            pass,
            json!({"pa_max_residual": pa.max_residual, "r_used": nil.r_used}),
        );
    }

    // support identity on the diagonal fixture
    {
        let t = fixture_diagonal_tuple();
        let fam = build_annihilators(&t, &moment_curve_alphas(t.len(), t.dim()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5151);
        let probes: Vec<Vec<C64>> = (0..50)
            .map(|_| {
                (0..2)
                    .map(|_| {
                        let c = random_complex(&mut rng);
                        c * (0.9 / (1.0 + c.norm()))
                    })
                    .collect()
            })
            .collect();
        let rep = crate::ideal_support::support_spectrum_identity_check(
            &t,
            &fam,
            &probes,
            config.tol("support", 1e-6),
        )?;
        all_pass &= record(
            &mut suite,
            "support_diagonal",
            rep.passes,
            json!({"checked": rep.checked, "inconclusive": rep.inconclusive}),
        );
    }

    let status = if all_pass {
        RunStatus::Pass
    } else {
        RunStatus::Fail
    };
    Ok((status, json!({ "suites": suite })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn run_args(args: &[&str]) -> i32 {
        run_from_args(
            std::iter::once("jointspec".to_string()).chain(args.iter().map(|s| s.to_string())),
        )
    }

    #[test]
    fn tol_rewrite_and_parse() {
        let args = normalize_args(vec!["--tol.xi=1e-5".to_string(), "x".to_string()]);
        assert_eq!(args, vec!["--tol", "xi=1e-5", "x"]);
        let map = parse_tols(&["xi=1e-5".to_string(), "zero=2e-6".to_string()]).unwrap();
        assert_eq!(map["xi"], 1e-5);
        assert_eq!(map["zero"], 2e-6);
        assert!(parse_tols(&["oops".to_string()]).is_err());
    }

    #[test]
    fn missing_input_is_exit_2() {
        let dir = tempdir().unwrap();
        let out = dir.path().join("out");
        let code = run_args(&[
            "joint-spectrum",
            "--input",
            "/nonexistent/x.json",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn joint_spectrum_end_to_end() {
        let dir = tempdir().unwrap();
        let input = dir.path().join("tuple.json");
        let t = fixture_diagonal_tuple();
        io::write_json(&TupleJson::from_tuple(&t), &input).unwrap();
        let out = dir.path().join("out");
        let code = run_args(&[
            "joint-spectrum",
            "--input",
            input.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let report: Value = io::read_json(&out.join("report.json")).unwrap();
        assert_eq!(report["status"], "pass");
        assert_eq!(report["points"], 2);
        assert!(out.join("spectrum.json").exists());
    }

    #[test]
    fn annihilate_end_to_end() {
        let dir = tempdir().unwrap();
        let input = dir.path().join("tuple.json");
        io::write_json(&TupleJson::from_tuple(&fixture_diagonal_tuple()), &input).unwrap();
        let out = dir.path().join("out");
        let code = run_args(&[
            "annihilate",
            "--input",
            input.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let report: Value = io::read_json(&out.join("report.json")).unwrap();
        assert_eq!(report["zero_set_pass"], true);
        assert!(report["max_residual"].as_f64().unwrap() < 1e-8);
    }

    #[test]
    fn bcl_variety_swap_end_to_end() {
        let dir = tempdir().unwrap();
        let input = dir.path().join("bcl.json");
        io::write_json(&BclJson::from_bcl(&fixture_swap_pair()), &input).unwrap();
        let out = dir.path().join("out");
        let code = run_args(&[
            "bcl-variety",
            "--input",
            input.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--grid-radii",
            "12",
            "--grid-angles",
            "24",
        ]);
        assert_eq!(code, 0);
        let report: Value = io::read_json(&out.join("report.json")).unwrap();
        assert_eq!(report["distinguished"], true);
        assert!(out.join("cloud.csv").exists());
        assert!(out.join("plot.svg").exists());
    }

    #[test]
    fn no_svg_flag_respected() {
        let dir = tempdir().unwrap();
        let input = dir.path().join("bcl.json");
        io::write_json(&BclJson::from_bcl(&fixture_swap_pair()), &input).unwrap();
        let out = dir.path().join("out");
        let code = run_args(&[
            "bcl-variety",
            "--input",
            input.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--grid-radii",
            "6",
            "--grid-angles",
            "8",
            "--no-svg",
        ]);
        assert_eq!(code, 0);
        assert!(!out.join("plot.svg").exists());
    }

    #[test]
    fn pair_xi_swap() {
        let dir = tempdir().unwrap();
        let input = dir.path().join("bcl.json");
        io::write_json(&BclJson::from_bcl(&fixture_swap_pair()), &input).unwrap();
        let out = dir.path().join("out");
        let code = run_args(&[
            "pair-xi",
            "--input",
            input.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--grid-radii",
            "8",
            "--grid-angles",
            "16",
        ]);
        assert_eq!(code, 0);
        let report: Value = io::read_json(&out.join("report.json")).unwrap();
        assert!(report["xi_residual"].as_f64().unwrap() < 1e-6);
    }

    #[test]
    fn support_check_diagonal_ideal() {
        let dir = tempdir().unwrap();
        let input = dir.path().join("ideal.json");
        // <z1 - z2> with two probes: on and off the diagonal
        let ideal = IdealJson {
            nvars: 2,
            generators: vec![crate::io::PolyJson::from_poly(
                &MPoly::var(2, 0).sub(&MPoly::var(2, 1)),
            )],
            probes: vec![
                vec![[0.5, 0.0], [0.5, 0.0]],
                vec![[0.0, 0.0], [1.0, 0.0]],
            ],
        };
        io::write_json(&ideal, &input).unwrap();
        let out = dir.path().join("out");
        let code = run_args(&[
            "support-check",
            "--input",
            input.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let report: Value = io::read_json(&out.join("report.json")).unwrap();
        assert_eq!(report["memberships"][0]["member"], true);
        assert_eq!(report["memberships"][1]["member"], false);
    }

    #[test]
    fn verify_all_passes_and_is_deterministic() {
        let dir = tempdir().unwrap();
        let out1 = dir.path().join("a");
        let out2 = dir.path().join("b");
        for out in [&out1, &out2] {
            let code = run_args(&[
                "verify-all",
                "--out",
                out.to_str().unwrap(),
                "--seed",
                "0",
                "--grid-radii",
                "12",
                "--grid-angles",
                "24",
            ]);
            assert_eq!(code, 0);
        }
        let a = std::fs::read(out1.join("report.json")).unwrap();
        let b = std::fs::read(out2.join("report.json")).unwrap();
        assert_eq!(a, b, "verify-all reports differ between identical runs");
    }
}
