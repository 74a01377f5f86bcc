//! `parrondo` command-line driver. Every subcommand writes CSV whose first
//! line is `# config: …`, the fully resolved argument list; feeding that
//! line back to [`run_command`] reproduces the file byte for byte.

pub mod args;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use rand::Rng;
use thiserror::Error;

use parrondo_core::chaos::{self, Axis, MapKind, MapSpec};
use parrondo_core::oracle::{self, Mixture};
use parrondo_core::presets::{self, ChaoticPreset, FAIR_COMPARISON, HEADLINE};
use parrondo_core::sweeps;
use parrondo_core::switching;
use parrondo_core::{Error as CoreError, GameChoice, GameParams, Policy, SeedSpec};

use args::*;
use output::{fmt_opt, fmt_real, ConfigEcho, Csv};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::UnknownMap(_)
            | CoreError::MalformedPattern(_)
            | CoreError::InvalidParameter(_)
            | CoreError::NondeterministicPolicy
            | CoreError::SequenceTooLong { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parse `argv` (including the program name) and run the subcommand.
pub fn run_command<I, T>(argv: I) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.render().to_string())),
    };
    match cli.command {
        Command::Simulate(a) => with_threads(a.common.threads, || simulate(&a)),
        Command::Compare(a) => with_threads(a.common.threads, || compare(&a)),
        Command::SweepGx(a) => with_threads(a.common.threads, || sweep_gx(&a)),
        Command::SweepAb(a) => with_threads(a.common.threads, || sweep_ab(&a)),
        Command::Bifurcation(a) => with_threads(a.threads, || bifurcation(&a)),
        Command::Histogram(a) => with_threads(a.threads, || histogram(&a)),
        Command::Phase(a) => with_threads(a.threads, || phase(&a)),
        Command::Proportion(a) => with_threads(a.common.threads, || proportion(&a)),
        Command::ExactRate(a) => with_threads(a.common.threads, || exact_rate(&a)),
        Command::ExactTraj(a) => with_threads(a.common.threads, || exact_traj(&a)),
        Command::DetectPeriod(a) => with_threads(a.common.threads, || detect_period(&a)),
    }
}

fn with_threads<F>(threads: Option<usize>, f: F) -> CliResult<()>
where
    F: FnOnce() -> CliResult<()> + Send,
{
    match threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Runtime(e.to_string()))?
            .install(f),
        None => f(),
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, text)?;
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn game_params(common: &Common) -> CliResult<GameParams> {
    Ok(GameParams::canonical(common.modulus, common.epsilon)?)
}

fn echo_common(echo: &mut ConfigEcho, common: &Common) {
    echo.flag("epsilon", common.epsilon)
        .flag("modulus", common.modulus)
        .flag("seed", common.seed);
}

fn default_preset(kind: MapKind) -> ChaoticPreset {
    *FAIR_COMPARISON.iter().find(|p| p.kind == kind).expect("every map has a preset")
}

/// Turn policy flags into a policy. Chaotic fields not given on the command
/// line come from the named preset, or from the map's fair-comparison row.
fn resolve_policy(args: &PolicyArgs) -> CliResult<Policy> {
    let preset = match &args.preset {
        Some(name) => Some(presets::chaotic_preset(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown --preset `{name}` (expected one of: {})",
                presets::preset_names().join(", ")
            ))
        })?),
        None => None,
    };
    let kind = match (args.policy, preset) {
        (Some(k), None) => k,
        (None | Some(PolicyKind::Chaotic), Some(_)) => PolicyKind::Chaotic,
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("--preset only applies to --policy chaotic".into()))
        }
        (None, None) => {
            return Err(CliError::Usage("one of --policy or --preset is required".into()))
        }
    };
    Ok(match kind {
        PolicyKind::AllA => Policy::AllA,
        PolicyKind::AllB => Policy::AllB,
        PolicyKind::Random => Policy::random(args.gamma.unwrap_or(0.5))?,
        PolicyKind::Periodic => Policy::Periodic(
            args.pattern
                .clone()
                .ok_or_else(|| CliError::Usage("--policy periodic needs --pattern".into()))?,
        ),
        PolicyKind::Chaotic => {
            let map_kind = args
                .map
                .or(preset.map(|p| p.kind))
                .ok_or_else(|| CliError::Usage("--policy chaotic needs --map or --preset".into()))?;
            let base = preset.filter(|p| p.kind == map_kind).unwrap_or_else(|| default_preset(map_kind));
            let map = MapSpec::new(map_kind, args.a.unwrap_or(base.a), args.b.unwrap_or(base.b))?;
            Policy::chaotic(
                map,
                args.x0.unwrap_or(base.x0),
                args.y0.unwrap_or(base.y0),
                args.gamma.unwrap_or(base.gamma),
                args.normalize.unwrap_or(true),
            )?
        }
    })
}

fn echo_policy(echo: &mut ConfigEcho, policy: &Policy) {
    match policy {
        Policy::AllA => {
            echo.flag("policy", "allA");
        }
        Policy::AllB => {
            echo.flag("policy", "allB");
        }
        Policy::Random { gamma } => {
            echo.flag("policy", "random").flag("gamma", gamma);
        }
        Policy::Periodic(p) => {
            echo.flag("policy", "periodic").flag("pattern", p);
        }
        Policy::Chaotic(src) => {
            echo.flag("policy", "chaotic")
                .flag("map", src.map.kind)
                .flag("a", src.map.a)
                .flag("b", src.map.b)
                .flag("x0", src.x0)
                .flag("y0", src.y0)
                .flag("gamma", src.gamma)
                .flag("normalize", src.normalize);
        }
    }
}

/// Exact long-run rate when one exists in closed form.
fn long_run_rate(params: &GameParams, policy: &Policy, burn_in: usize) -> CliResult<Option<oracle::RateReport>> {
    let mix = match policy {
        Policy::AllA => Mixture::Game(GameChoice::A),
        Policy::AllB => Mixture::Game(GameChoice::B),
        Policy::Random { gamma } => Mixture::Random { gamma: *gamma },
        Policy::Periodic(p) => return Ok(Some(oracle::periodic_rate(params, p, burn_in)?)),
        Policy::Chaotic(_) => return Ok(None),
    };
    Ok(Some(oracle::exact_rate(&oracle::step_model(params, mix)?)?))
}

fn simulate(a: &SimulateArgs) -> CliResult<()> {
    let params = game_params(&a.common)?;
    let policy = resolve_policy(&a.policy)?;
    let seed = SeedSpec::new(a.common.seed);
    let stats = parrondo_core::run_ensemble(&params, &policy, a.games, a.trials, &seed)?;
    let exact = oracle::policy_expected_trajectory(&params, &policy, a.games)?;
    let exact_final = exact[a.games];
    let exact_rate = match long_run_rate(&params, &policy, oracle::DEFAULT_PERIODIC_BURN_IN)? {
        Some(r) => r.rate,
        None => exact_final / a.games as f64,
    };

    let mut echo = ConfigEcho::new("simulate");
    echo_common(&mut echo, &a.common);
    echo_policy(&mut echo, &policy);
    echo.flag("games", a.games).flag("trials", a.trials);

    let mut csv = Csv::new(echo.args());
    csv.comment(&format!(
        "summary: final_mean={},final_std_err={},rate_estimate={},exact_final={},exact_rate={},proportion_A={}",
        fmt_real(stats.final_mean()),
        fmt_real(stats.final_std_err()),
        fmt_real(stats.rate_estimate),
        fmt_real(exact_final),
        fmt_real(exact_rate),
        fmt_real(stats.proportion_a),
    ));
    write_trajectory(&mut csv, &stats);
    emit(a.out.as_deref(), &csv.into_string())
}

fn write_trajectory(csv: &mut Csv, stats: &parrondo_core::EnsembleStats) {
    csv.row(["step", "mean_capital", "std_err"]);
    for (k, (m, s)) in stats.mean_capital.iter().zip(&stats.std_err).enumerate() {
        csv.row([k.to_string(), fmt_real(*m), fmt_real(*s)]);
    }
}

/// The policy set compared at equal proportion of Game A.
pub fn comparison_policies(include_single: bool) -> Vec<(String, Policy)> {
    let mut configs: Vec<(String, Policy)> = FAIR_COMPARISON
        .iter()
        .chain(std::iter::once(&HEADLINE))
        .map(|p| (p.name.to_string(), p.policy()))
        .collect();
    configs.push(("random".into(), Policy::random(0.5).expect("valid gamma")));
    configs.push(("periodic-AABB".into(), Policy::periodic("AABB").expect("valid pattern")));
    if include_single {
        configs.push(("allA".into(), Policy::AllA));
        configs.push(("allB".into(), Policy::AllB));
    }
    configs
}

fn compare(a: &CompareArgs) -> CliResult<()> {
    let params = game_params(&a.common)?;
    let configs = comparison_policies(a.include_single);
    let results = sweeps::compare_policies(&params, &configs, a.games, a.trials, SeedSpec::new(a.common.seed))?;

    let mut echo = ConfigEcho::new("compare");
    echo_common(&mut echo, &a.common);
    echo.flag("games", a.games)
        .flag("trials", a.trials)
        .flag("include-single", a.include_single);

    let mut summary = Csv::new(echo.args());
    summary.row(["policy", "final_mean", "std_err", "prop_A", "rate_estimate", "exact_final"]);
    fs::create_dir_all(&a.out_dir)?;
    for ((label, stats), (_, policy)) in results.iter().zip(&configs) {
        let mut csv = Csv::new(echo.args());
        csv.comment(&format!("policy: {label}"));
        write_trajectory(&mut csv, stats);
        emit(Some(&a.out_dir.join(format!("{label}.csv"))), &csv.into_string())?;
        let exact = oracle::policy_expected_trajectory(&params, policy, a.games)?[a.games];
        summary.row([
            label.clone(),
            fmt_real(stats.final_mean()),
            fmt_real(stats.final_std_err()),
            fmt_real(stats.proportion_a),
            fmt_real(stats.rate_estimate),
            fmt_real(exact),
        ]);
    }
    emit(Some(&a.out_dir.join("summary.csv")), &summary.into_string())
}

fn resolve_axis(
    name: &str,
    from: Option<f64>,
    to: Option<f64>,
    step: Option<f64>,
    values: &Option<Vec<f64>>,
    defaults: (f64, f64, f64),
    coarse: bool,
) -> CliResult<Axis> {
    if let Some(v) = values {
        return Ok(Axis::from_values(name, v.clone())?);
    }
    let mut step = step.unwrap_or(defaults.2);
    if coarse {
        step *= 2.0;
    }
    Ok(Axis::range(name, from.unwrap_or(defaults.0), to.unwrap_or(defaults.1), step)?)
}

fn grid_trials(trials: Option<usize>, coarse: bool) -> usize {
    trials.unwrap_or(if coarse { presets::COARSE_TRIALS } else { presets::GRID_TRIALS })
}

fn sweep_gx(a: &SweepGxArgs) -> CliResult<()> {
    let params = game_params(&a.common)?;
    let (da, db, x0_step) = presets::gamma_x0_defaults(a.map);
    let map = MapSpec::new(a.map, a.a.unwrap_or(da), a.b.unwrap_or(db))?;
    let g = &a.gamma_axis;
    let gammas = resolve_axis("gamma", g.from, g.to, g.step, &g.values, presets::GAMMA_RANGE, a.coarse)?;
    if gammas.values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(CliError::Usage("--gamma-* values must lie inside [0, 1]".into()));
    }
    let x = &a.x0_axis;
    let x0s = resolve_axis("x0", x.from, x.to, x.step, &x.values, (0.0, 1.0, x0_step), a.coarse)?;
    let trials = grid_trials(a.trials, a.coarse);
    let grid = sweeps::sweep_gamma_x0(
        &params, map, a.y0, a.normalize, &gammas, &x0s, a.games, trials, SeedSpec::new(a.common.seed),
    )?;

    let mut echo = ConfigEcho::new("sweep-gx");
    echo_common(&mut echo, &a.common);
    echo.flag("map", map.kind)
        .flag("a", map.a)
        .flag("b", map.b)
        .flag("y0", a.y0)
        .flag("normalize", a.normalize)
        .list("gamma-values", &gammas.values)
        .list("x0-values", &x0s.values)
        .flag("games", a.games)
        .flag("trials", trials);
    write_grid(echo, &grid, ["gamma", "x0", "gain"], a.out.as_deref())
}

fn write_grid(echo: ConfigEcho, grid: &parrondo_core::GridResult, header: [&str; 3], out: Option<&Path>) -> CliResult<()> {
    let mut csv = Csv::new(echo.args());
    csv.row(header);
    for (x, y, gain) in grid.rows() {
        csv.row([fmt_real(x), fmt_real(y), fmt_opt(gain)]);
    }
    emit(out, &csv.into_string())
}

fn sweep_ab(a: &SweepAbArgs) -> CliResult<()> {
    if !a.map.is_two_dimensional() {
        return Err(CliError::Usage(format!("--map must be henon or lozi for sweep-ab, got {}", a.map)));
    }
    let params = game_params(&a.common)?;
    let ax = &a.a_axis;
    let a_axis = resolve_axis("a", ax.from, ax.to, ax.step, &ax.values, presets::AB_RANGE, a.coarse)?;
    let bx = &a.b_axis;
    let b_axis = resolve_axis("b", bx.from, bx.to, bx.step, &bx.values, presets::AB_RANGE, a.coarse)?;
    let trials = grid_trials(a.trials, a.coarse);
    let grid = sweeps::sweep_ab(
        &params, a.map, &a_axis, &b_axis, a.gamma, a.x0, a.y0, a.normalize, a.games, trials,
        SeedSpec::new(a.common.seed),
    )?;

    let mut echo = ConfigEcho::new("sweep-ab");
    echo_common(&mut echo, &a.common);
    echo.flag("map", a.map)
        .list("a-values", &a_axis.values)
        .list("b-values", &b_axis.values)
        .flag("gamma", a.gamma)
        .flag("x0", a.x0)
        .flag("y0", a.y0)
        .flag("normalize", a.normalize)
        .flag("games", a.games)
        .flag("trials", trials);
    write_grid(echo, &grid, ["a", "b", "gain"], a.out.as_deref())
}

fn bifurcation(a: &BifurcationArgs) -> CliResult<()> {
    let (lo, hi, x0_default) = presets::bifurcation_defaults(a.map);
    let ax = &a.a_axis;
    let axis = resolve_axis("a", ax.from, ax.to, ax.step, &ax.values, (lo, hi, (hi - lo) / 400.0), false)?;
    let x0 = a.x0.unwrap_or(x0_default);
    let rows = if a.map.is_two_dimensional() {
        // 2-D maps keep b fixed while a varies
        let mut rows = Vec::new();
        for &coef in &axis.values {
            let spec = MapSpec::new(a.map, coef, a.b)?;
            let orbit = chaos::generate_orbit(&spec, x0, 0.0, a.samples, a.transient, chaos::DEFAULT_DIVERGENCE_BOUND);
            rows.extend(orbit.values.into_iter().map(|x| (coef, x)));
        }
        rows
    } else {
        chaos::bifurcation_scan(a.map, &axis, x0, a.samples, a.transient)?
    };

    let mut echo = ConfigEcho::new("bifurcation");
    echo.flag("map", a.map)
        .list("a-values", &axis.values)
        .flag("b", a.b)
        .flag("x0", x0)
        .flag("samples", a.samples)
        .flag("transient", a.transient);
    let mut csv = Csv::new(echo.args());
    csv.row(["a", "x"]);
    for (coef, x) in rows {
        csv.row([fmt_real(coef), fmt_real(x)]);
    }
    emit(a.out.as_deref(), &csv.into_string())
}

#[allow(clippy::too_many_arguments)]
fn orbit_values(
    kind: MapKind,
    a: Option<f64>,
    b: f64,
    x0: f64,
    y0: f64,
    samples: usize,
    transient: usize,
    normalize: bool,
) -> CliResult<(MapSpec, Vec<f64>)> {
    let spec = MapSpec::new(kind, a.unwrap_or(presets::gamma_x0_defaults(kind).0), b)?;
    let orbit = chaos::generate_orbit(&spec, x0, y0, samples, transient, chaos::DEFAULT_DIVERGENCE_BOUND);
    if orbit.diverged {
        return Err(CoreError::DivergedOrbit.into());
    }
    let orbit = if normalize { chaos::normalize_orbit(&orbit)? } else { orbit };
    Ok((spec, orbit.values))
}

fn histogram(a: &OrbitArgs) -> CliResult<()> {
    let (spec, values) = orbit_values(a.map, a.a, a.b, a.x0, a.y0, a.samples, a.transient, a.normalize)?;
    let counts = chaos::histogram(&values, a.bins)?;

    let mut echo = ConfigEcho::new("histogram");
    echo.flag("map", spec.kind)
        .flag("a", spec.a)
        .flag("b", spec.b)
        .flag("x0", a.x0)
        .flag("y0", a.y0)
        .flag("samples", a.samples)
        .flag("transient", a.transient)
        .flag("bins", a.bins)
        .flag("normalize", a.normalize);
    let mut csv = Csv::new(echo.args());
    csv.row(["bin_lo", "bin_hi", "count"]);
    let width = 1.0 / a.bins as f64;
    for (i, c) in counts.iter().enumerate() {
        csv.row([fmt_real(i as f64 * width), fmt_real((i + 1) as f64 * width), c.to_string()]);
    }
    emit(a.out.as_deref(), &csv.into_string())
}

fn phase(a: &PhaseArgs) -> CliResult<()> {
    let mut echo = ConfigEcho::new("phase");
    let values = if a.uniform {
        let mut rng = SeedSpec::new(a.seed).trial_rng(0);
        echo.flag("uniform", true).flag("seed", a.seed).flag("samples", a.samples);
        (0..a.samples).map(|_| rng.gen::<f64>()).collect()
    } else {
        let (spec, values) = orbit_values(a.map, a.a, a.b, a.x0, a.y0, a.samples, a.transient, a.normalize)?;
        echo.flag("map", spec.kind)
            .flag("a", spec.a)
            .flag("b", spec.b)
            .flag("x0", a.x0)
            .flag("y0", a.y0)
            .flag("samples", a.samples)
            .flag("transient", a.transient)
            .flag("normalize", a.normalize);
        values
    };
    let mut csv = Csv::new(echo.args());
    csv.row(["x_n", "x_np1"]);
    for (x, y) in chaos::phase_pairs(&values) {
        csv.row([fmt_real(x), fmt_real(y)]);
    }
    emit(a.out.as_deref(), &csv.into_string())
}

fn proportion(a: &ProportionArgs) -> CliResult<()> {
    let params = game_params(&a.common)?;
    let g = &a.gamma_axis;
    let gammas = resolve_axis("gamma", g.from, g.to, g.step, &g.values, presets::GAMMA_RANGE, false)?;
    let mut policies: Vec<(String, Policy)> = FAIR_COMPARISON
        .iter()
        .map(|p| (p.kind.to_string(), p.policy()))
        .collect();
    policies.push(("random".into(), Policy::random(0.5)?));
    let rows = sweeps::proportion_curve(&params, &policies, &gammas, a.games, a.trials, SeedSpec::new(a.common.seed))?;

    let mut echo = ConfigEcho::new("proportion");
    echo_common(&mut echo, &a.common);
    echo.list("gamma-values", &gammas.values)
        .flag("games", a.games)
        .flag("trials", a.trials);
    let mut csv = Csv::new(echo.args());
    csv.row(["policy", "gamma", "prop_A"]);
    for row in rows {
        csv.row([row.label, fmt_real(row.gamma), fmt_opt(row.proportion_a)]);
    }
    emit(a.out.as_deref(), &csv.into_string())
}

fn exact_rate(a: &ExactRateArgs) -> CliResult<()> {
    let params = game_params(&a.common)?;
    let policy = resolve_policy(&a.policy)?;
    let report = long_run_rate(&params, &policy, a.burn_in)?.ok_or_else(|| {
        CliError::Usage("exact-rate supports --policy allA, allB, random or periodic".into())
    })?;

    let mut echo = ConfigEcho::new("exact-rate");
    echo_common(&mut echo, &a.common);
    echo_policy(&mut echo, &policy);
    echo.flag("burn-in", a.burn_in);
    let mut csv = Csv::new(echo.args());
    let mut header = vec!["policy".to_string(), "rate".to_string()];
    header.extend((0..params.modulus).map(|j| format!("pi_{j}")));
    csv.row(header);
    let mut row = vec![policy.label(), fmt_real(report.rate)];
    row.extend(report.stationary.probs.iter().map(|&p| fmt_real(p)));
    csv.row(row);
    emit(a.out.as_deref(), &csv.into_string())
}

fn exact_traj(a: &ExactTrajArgs) -> CliResult<()> {
    let params = game_params(&a.common)?;
    let policy = resolve_policy(&a.policy)?;
    let traj = oracle::policy_expected_trajectory(&params, &policy, a.games)?;

    let mut echo = ConfigEcho::new("exact-traj");
    echo_common(&mut echo, &a.common);
    echo_policy(&mut echo, &policy);
    echo.flag("games", a.games);
    let mut csv = Csv::new(echo.args());
    csv.row(["step", "expected_capital"]);
    for (k, v) in traj.iter().enumerate() {
        csv.row([k.to_string(), fmt_real(*v)]);
    }
    emit(a.out.as_deref(), &csv.into_string())
}

fn detect_period(a: &DetectPeriodArgs) -> CliResult<()> {
    let policy = resolve_policy(&a.policy)?;
    let games = switching::game_sequence(&policy, a.games)?;
    let found = switching::detect_period(&games, a.max_period, a.transient)?;

    let mut echo = ConfigEcho::new("detect-period");
    echo_common(&mut echo, &a.common);
    echo_policy(&mut echo, &policy);
    echo.flag("games", a.games)
        .flag("transient", a.transient)
        .flag("max-period", a.max_period);
    let mut csv = Csv::new(echo.args());
    csv.row(["period", "pattern", "proportion_A"]);
    let prop = fmt_real(switching::proportion_a(&games)?);
    match found {
        Some(p) => csv.row([p.period.to_string(), p.pattern.to_string(), prop]),
        None => csv.row(["none".to_string(), "none".to_string(), prop]),
    };
    emit(a.out.as_deref(), &csv.into_string())
}

/// Re-run a file's `# config:` line, writing to `out`.
pub fn rerun_config_line(line: &str, out: &Path) -> CliResult<()> {
    let config = line
        .strip_prefix("# config: ")
        .ok_or_else(|| CliError::Usage("not a config line".into()))?;
    let mut argv: Vec<String> = vec!["parrondo".into()];
    argv.extend(config.split_whitespace().map(str::to_string));
    let flag = if argv.get(1).map(String::as_str) == Some("compare") { "--out-dir" } else { "--out" };
    argv.push(flag.into());
    argv.push(out.display().to_string());
    run_command(argv)
}
