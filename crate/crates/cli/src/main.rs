//! `tank` — command-line front end for the TANK solver.
//!
//! Exit codes: 0 success, 1 validation error, 2 solve/indeterminacy error,
//! 3 i/o error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tank_core::coeffs::{derive, DeriveError};
use tank_core::csvio;
use tank_core::irf::{irf, Column, IrfPanel, ShockKind, ShockSpec};
use tank_core::params::{ParameterName, Params};
use tank_core::re::{build_system, dump_system, irf_from_policy, solve_re, ReError, Variant};
use tank_core::saddle::{ad_curve_coefficients, comparative_statics, solve, SolveError};
use tank_core::svg::figure_svg;
use tank_core::welfare::{loss, rule_policy, targeting_rule, welfare_weights, Regime};

// ============================================================================
// Argument surface
// ============================================================================

#[derive(Parser)]
#[command(
    name = "tank",
    about = "Analytical TANK model: solves, IRFs, sweeps, welfare reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Parameter file (key = value lines, # comments); flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one parameter, e.g. --set eta_p=50 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    /// Output directory for generated files.
    #[arg(long, default_value = ".", global = true)]
    out: PathBuf,
    /// Also write CSV where it is optional.
    #[arg(long, global = true)]
    csv: bool,
    /// Also write SVG where it is optional.
    #[arg(long, global = true)]
    svg: bool,
    /// Horizon in periods for IRF-producing commands.
    #[arg(long, default_value_t = 40, global = true)]
    horizon: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShockArg {
    Monetary,
    Technology,
}

impl From<ShockArg> for ShockKind {
    fn from(s: ShockArg) -> Self {
        match s {
            ShockArg::Monetary => ShockKind::Monetary,
            ShockArg::Technology => ShockKind::Technology,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Simple,
    General,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Simple => Variant::Simple,
            VariantArg::General => Variant::General,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print derived coefficients, roots, multipliers, and condition flags.
    Solve,
    /// Generate impulse responses (CSV + 3x3 SVG figure).
    Irf {
        #[arg(long, value_enum, default_value = "monetary")]
        shock: ShockArg,
        #[arg(long, value_enum, default_value = "simple")]
        variant: VariantArg,
        /// Shock size in levels (0.01 = 1%).
        #[arg(long, default_value_t = 0.01)]
        size: f64,
        /// Render up to three values of one parameter as separate lines,
        /// e.g. --vary phi_taylor=1.5,3,6.
        #[arg(long, value_name = "KEY=V1,V2[,V3]")]
        vary: Option<String>,
    },
    /// Sweep one parameter and tabulate roots, multipliers, and verdicts.
    Sweep {
        /// Parameter to sweep.
        #[arg(long)]
        param: String,
        /// Grid: comma list `1.5,3,6` or range `lo:hi:count`.
        #[arg(long)]
        grid: String,
    },
    /// Welfare weights, targeting rules, and loss comparison across regimes.
    Welfare {
        #[arg(long, value_enum, default_value = "technology")]
        shock: ShockArg,
        #[arg(long, default_value_t = 0.01)]
        size: f64,
    },
    /// Evaluate every named analytical condition with its numeric margin.
    Check {
        /// Dump the stacked system matrices and eigenvalues to CSV.
        #[arg(long)]
        dump_system: bool,
    },
    /// Compare the simple and general adjustment-cost variants.
    Compare {
        #[arg(long, value_enum, default_value = "monetary")]
        shock: ShockArg,
        #[arg(long, default_value_t = 0.01)]
        size: f64,
    },
}

// ============================================================================
// Errors and exit codes
// ============================================================================

enum CliError {
    Validation(String),
    Solve(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Solve(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Solve(m) | CliError::Io(m) => m,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        CliError::Solve(e.to_string())
    }
}

impl From<DeriveError> for CliError {
    fn from(e: DeriveError) -> Self {
        CliError::Solve(e.to_string())
    }
}

impl From<ReError> for CliError {
    fn from(e: ReError) -> Self {
        CliError::Solve(e.to_string())
    }
}

impl From<tank_core::irf::IrfError> for CliError {
    fn from(e: tank_core::irf::IrfError) -> Self {
        CliError::Solve(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tank: error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

// ============================================================================
// Shared plumbing
// ============================================================================

fn load_params(common: &Common) -> Result<Params, CliError> {
    let mut p = match &common.config {
        Some(path) => Params::from_config_file(path).map_err(|e| match e {
            tank_core::params::ConfigError::Io(m) => CliError::Io(m),
            other => CliError::Validation(other.to_string()),
        })?,
        None => Params::benchmark(),
    };
    for kv in &common.set {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("--set expects key=value, got `{kv}`")))?;
        let name = ParameterName::from_str(key.trim())
            .map_err(|_| CliError::Validation(format!("unknown parameter `{key}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Validation(format!("cannot parse value in `{kv}`")))?;
        p.set(name, value);
    }
    let report = p.validate();
    if !report.is_valid() {
        return Err(CliError::Validation(report.violations.join("; ")));
    }
    for w in &report.warnings {
        eprintln!("tank: warning: {w}");
    }
    Ok(p)
}

fn ensure_out_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |m: String| CliError::Validation(m);
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(format!("grid range must be lo:hi:count, got `{spec}`")));
        }
        let lo: f64 = parts[0]
            .parse()
            .map_err(|_| bad(format!("bad grid lo `{}`", parts[0])))?;
        let hi: f64 = parts[1]
            .parse()
            .map_err(|_| bad(format!("bad grid hi `{}`", parts[1])))?;
        let n: usize = parts[2]
            .parse()
            .map_err(|_| bad(format!("bad grid count `{}`", parts[2])))?;
        if n < 2 {
            return Err(bad("grid count must be >= 2".into()));
        }
        Ok((0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect())
    } else {
        spec.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(format!("bad grid value `{s}`")))
            })
            .collect()
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.6}")
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let params = load_params(&cli.common)?;
    match &cli.command {
        Command::Solve => cmd_solve(&params, &cli.common),
        Command::Irf {
            shock,
            variant,
            size,
            vary,
        } => cmd_irf(
            &params,
            &cli.common,
            (*shock).into(),
            (*variant).into(),
            *size,
            vary.as_deref(),
        ),
        Command::Sweep { param, grid } => cmd_sweep(&params, &cli.common, param, grid),
        Command::Welfare { shock, size } => {
            cmd_welfare(&params, &cli.common, (*shock).into(), *size)
        }
        Command::Check { dump_system } => cmd_check(&params, &cli.common, *dump_system),
        Command::Compare { shock, size } => {
            cmd_compare(&params, &cli.common, (*shock).into(), *size)
        }
    }
}

// ============================================================================
// solve
// ============================================================================

fn cmd_solve(params: &Params, common: &Common) -> Result<(), CliError> {
    let coeffs = derive(params)?;
    let sol = solve(&coeffs, params)?;

    let mut text = String::new();
    let _ = writeln!(text, "Parameters");
    for name in ParameterName::ALL {
        let _ = writeln!(text, "  {:<11} = {}", name.as_str(), params.get(name));
    }
    if params.lambda_h == 0.0 {
        let _ = writeln!(text, "  note: lambda_h = 0 — RANK limit");
    }
    let _ = writeln!(text, "Derived coefficients");
    let pairs = [
        ("kappa1", coeffs.kappa1),
        ("kappa2", coeffs.kappa2),
        ("kappa2/kappa1", coeffs.k2_over_k1()),
        ("delta_c", coeffs.delta_c),
        ("delta_n", coeffs.delta_n),
        ("delta_w", coeffs.delta_w),
        ("delta_p", coeffs.delta_p),
        ("gamma_tilde", coeffs.gamma_tilde),
        ("eta_p_tilde", coeffs.eta_p_tilde),
        ("Xi_a", coeffs.xi_a),
        ("Xi_b", coeffs.xi_b),
        ("Xi_c", coeffs.xi_c),
    ];
    for (k, v) in pairs {
        let _ = writeln!(text, "  {k:<13} = {}", fmt(v));
    }
    let _ = writeln!(text, "Saddle solution");
    let pairs = [
        ("xi1", sol.xi1),
        ("xi2", sol.xi2),
        ("omega_p", sol.omega_p),
        ("omega_x", sol.omega_x),
        ("omega_p_inf", sol.omega_p_inf),
        ("omega_x_inf", sol.omega_x_inf),
    ];
    for (k, v) in pairs {
        let _ = writeln!(text, "  {k:<13} = {}", fmt(v));
    }
    let _ = writeln!(text, "Conditions");
    let _ = writeln!(text, "  determinate      = {}", sol.determinate);
    let _ = writeln!(text, "  ad_condition     = {}", sol.ad_condition);
    let _ = writeln!(text, "  prop1_condition  = {}", sol.prop1_condition);
    match ad_curve_coefficients(&coeffs, params) {
        Ok(ad) => {
            let _ = writeln!(text, "  ad_shock_coef    = {}", fmt(ad.shock_coefficient));
        }
        Err(e) => {
            let _ = writeln!(text, "  ad_shock_coef    = undefined ({e})");
        }
    }
    print!("{text}");

    if common.csv {
        ensure_out_dir(&common.out)?;
        let mut csv = String::from("name,value\n");
        for name in ParameterName::ALL {
            let _ = writeln!(
                csv,
                "{},{}",
                name.as_str(),
                csvio::fmt_f64(params.get(name))
            );
        }
        for (k, v) in [
            ("kappa1", coeffs.kappa1),
            ("kappa2", coeffs.kappa2),
            ("delta_c", coeffs.delta_c),
            ("delta_n", coeffs.delta_n),
            ("delta_w", coeffs.delta_w),
            ("delta_p", coeffs.delta_p),
            ("gamma_tilde", coeffs.gamma_tilde),
            ("eta_p_tilde", coeffs.eta_p_tilde),
            ("xi_a", coeffs.xi_a),
            ("xi_b", coeffs.xi_b),
            ("xi_c", coeffs.xi_c),
            ("xi1", sol.xi1),
            ("xi2", sol.xi2),
            ("omega_p", sol.omega_p),
            ("omega_x", sol.omega_x),
            ("omega_p_inf", sol.omega_p_inf),
            ("omega_x_inf", sol.omega_x_inf),
        ] {
            let _ = writeln!(csv, "{k},{}", csvio::fmt_f64(v));
        }
        fs::write(common.out.join("solve.csv"), csv)?;
    }
    Ok(())
}

// ============================================================================
// irf
// ============================================================================

fn panel_for(params: &Params, variant: Variant, spec: &ShockSpec) -> Result<IrfPanel, CliError> {
    match variant {
        Variant::Simple => Ok(irf(params, spec)?),
        Variant::General => {
            let system = build_system(params, Variant::General, spec.kind)?;
            let policy = solve_re(&system)?;
            Ok(irf_from_policy(&policy, spec, params)?)
        }
    }
}

fn cmd_irf(
    params: &Params,
    common: &Common,
    shock: ShockKind,
    variant: Variant,
    size: f64,
    vary: Option<&str>,
) -> Result<(), CliError> {
    ensure_out_dir(&common.out)?;
    let spec = ShockSpec::new(shock, size, common.horizon)?;
    let shock_name = match shock {
        ShockKind::Monetary => "monetary",
        ShockKind::Technology => "technology",
    };

    let mut labelled: Vec<(String, String, IrfPanel)> = Vec::new(); // (label, file stem, panel)
    match vary {
        None => {
            let panel = panel_for(params, variant, &spec)?;
            labelled.push((
                "benchmark".to_string(),
                format!("irf_{shock_name}_{}", variant.as_str()),
                panel,
            ));
        }
        Some(vary) => {
            let (key, values) = vary.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("--vary expects key=v1,v2[,v3], got `{vary}`"))
            })?;
            let name = ParameterName::from_str(key.trim())
                .map_err(|_| CliError::Validation(format!("unknown parameter `{key}`")))?;
            let values = parse_grid(values)?;
            if values.is_empty() || values.len() > 3 {
                return Err(CliError::Validation(
                    "--vary supports one to three values".into(),
                ));
            }
            for v in values {
                let p = params.with(name, v);
                let report = p.validate();
                if !report.is_valid() {
                    return Err(CliError::Validation(report.violations.join("; ")));
                }
                let panel = panel_for(&p, variant, &spec)?;
                labelled.push((
                    format!("{}={v}", name.as_str()),
                    format!(
                        "irf_{shock_name}_{}_{}_{v}",
                        variant.as_str(),
                        name.as_str()
                    ),
                    panel,
                ));
            }
        }
    }

    for (_, stem, panel) in &labelled {
        let mut buf = Vec::new();
        csvio::write_panel_csv(panel, &mut buf)?;
        fs::write(common.out.join(format!("{stem}.csv")), buf)?;
    }
    let refs: Vec<(String, &IrfPanel)> = labelled
        .iter()
        .map(|(label, _, panel)| (label.clone(), panel))
        .collect();
    let caption = format!(
        "{shock_name} shock, {} variant, responses in percent",
        variant.as_str()
    );
    let svg = figure_svg(&refs, &caption);
    fs::write(
        common
            .out
            .join(format!("irf_{shock_name}_{}.svg", variant.as_str())),
        svg,
    )?;
    println!(
        "wrote {} panel file(s) and irf_{shock_name}_{}.svg to {}",
        labelled.len(),
        variant.as_str(),
        common.out.display()
    );
    Ok(())
}

// ============================================================================
// sweep
// ============================================================================

fn cmd_sweep(params: &Params, common: &Common, param: &str, grid: &str) -> Result<(), CliError> {
    let name = ParameterName::from_str(param)
        .map_err(|_| CliError::Validation(format!("unknown parameter `{param}`")))?;
    let grid = parse_grid(grid)?;
    let table = comparative_statics(params, name, &grid)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    ensure_out_dir(&common.out)?;
    let mut buf = Vec::new();
    csvio::write_sweep_csv(&table, &mut buf)?;
    let file = common.out.join(format!("sweep_{}.csv", name.as_str()));
    fs::write(&file, buf)?;

    println!(
        "sweep of {} over {} points -> {}",
        name.as_str(),
        grid.len(),
        file.display()
    );
    for v in &table.verdicts {
        let status = match (v.applicable, v.holds) {
            (false, _) => "not applicable".to_string(),
            (true, Some(true)) => "holds".to_string(),
            (true, Some(false)) => "VIOLATED".to_string(),
            (true, None) => "not evaluated (solve errors)".to_string(),
        };
        println!(
            "  {} expected {} in {} [{}]: {}",
            v.quantity,
            match v.expected {
                tank_core::saddle::Direction::Increasing => "increasing",
                tank_core::saddle::Direction::Decreasing => "decreasing",
            },
            name.as_str(),
            v.source,
            status
        );
    }
    Ok(())
}

// ============================================================================
// welfare
// ============================================================================

fn cmd_welfare(
    params: &Params,
    common: &Common,
    shock: ShockKind,
    size: f64,
) -> Result<(), CliError> {
    let coeffs = derive(params)?;
    let weights = welfare_weights(&coeffs, params);
    let spec = ShockSpec::new(shock, size, common.horizon.max(200))?;

    println!("Welfare weights");
    println!("  gap (gamma+varphi)   = {}", fmt(weights.gap_weight));
    println!("  wage inflation       = {}", fmt(weights.wage_infl_weight));
    println!(
        "  price inflation      = {}",
        fmt(weights.price_infl_weight)
    );
    println!(
        "  heterogeneity part   = {}",
        fmt(weights.price_infl_surcharge)
    );

    let mut rows: Vec<csvio::LossRow> = Vec::new();
    let taylor_panel = irf(params, &spec)?;
    rows.push(csvio::LossRow {
        regime: "taylor".to_string(),
        lambda_h: params.lambda_h,
        loss: loss(&taylor_panel, &weights, params.beta),
    });

    for regime in [Regime::Discretion, Regime::Commitment] {
        match targeting_rule(params, &coeffs, regime) {
            Ok(rule) => {
                println!("{} rule", regime.as_str());
                println!("  coef_pi     = {}", fmt(rule.coef_pi));
                println!("  coef_pi_lag = {}", fmt(rule.coef_pi_lag));
                println!("  coef_da     = {}", fmt(rule.coef_da));
                let policy = rule_policy(params, &rule, shock)?;
                let panel = irf_from_policy(&policy, &spec, params)?;
                rows.push(csvio::LossRow {
                    regime: regime.as_str().to_string(),
                    lambda_h: params.lambda_h,
                    loss: loss(&panel, &weights, params.beta),
                });
            }
            Err(e) => println!("{} rule: {e}", regime.as_str()),
        }
    }

    println!(
        "Discounted losses ({} shock, horizon {})",
        match shock {
            ShockKind::Monetary => "monetary",
            ShockKind::Technology => "technology",
        },
        spec.horizon
    );
    for r in &rows {
        println!(
            "  {:<11} total = {}  (gap {}, wage {}, price {}, surcharge {})",
            r.regime,
            fmt(r.loss.total),
            fmt(r.loss.gap_term),
            fmt(r.loss.wage_term),
            fmt(r.loss.price_term),
            fmt(r.loss.surcharge)
        );
    }

    ensure_out_dir(&common.out)?;
    let mut buf = Vec::new();
    csvio::write_loss_csv(&rows, &mut buf)?;
    fs::write(common.out.join("welfare.csv"), buf)?;
    Ok(())
}

// ============================================================================
// check
// ============================================================================

fn cmd_check(params: &Params, common: &Common, dump: bool) -> Result<(), CliError> {
    let coeffs = derive(params)?;
    println!("Conditions (value, margin; conditions are reported, not enforced)");
    println!(
        "  taylor_principle  phi - 1 = {:<12} -> {}",
        fmt(params.phi_taylor - 1.0),
        params.phi_taylor > 1.0
    );
    println!(
        "  ad_condition      1 - gamma*delta_p + gamma*kappa1/kappa2 = {:<12} -> {}",
        fmt(coeffs.xi_a),
        coeffs.xi_a > 0.0
    );
    let prop1_margin = params.phi_taylor - 1.0 - coeffs.inv_kappa2;
    println!(
        "  prop1_condition   phi - 1 - 1/kappa2 = {:<12} -> {}",
        fmt(prop1_margin),
        prop1_margin > 0.0
    );
    let restrictive = 1.0 - params.gamma * coeffs.delta_p;
    println!(
        "  ad_curve_domain   1 - gamma*delta_p = {:<12} -> {}",
        fmt(restrictive),
        restrictive > 0.0
    );
    match solve(&coeffs, params) {
        Ok(sol) => {
            println!(
                "  determinacy       xi1 = {}, xi2 = {} -> {}",
                fmt(sol.xi1),
                fmt(sol.xi2),
                sol.determinate
            );
        }
        Err(e) => println!("  determinacy       -> false ({e})"),
    }
    println!("  gamma_tilde       = {}", fmt(coeffs.gamma_tilde));

    if dump {
        ensure_out_dir(&common.out)?;
        let system = build_system(params, Variant::Simple, ShockKind::Monetary)?;
        let eigs = match solve_re(&system) {
            Ok(policy) => Some(policy.eigenvalues),
            Err(_) => None,
        };
        dump_system(&system, eigs.as_deref(), &common.out)?;
        println!(
            "dumped re_system_{{a,b,c}}.csv and re_eigenvalues.csv to {}",
            common.out.display()
        );
    }
    Ok(())
}

// ============================================================================
// compare
// ============================================================================

fn cmd_compare(
    params: &Params,
    common: &Common,
    shock: ShockKind,
    size: f64,
) -> Result<(), CliError> {
    ensure_out_dir(&common.out)?;
    let spec = ShockSpec::new(shock, size, common.horizon)?;
    let shock_name = match shock {
        ShockKind::Monetary => "monetary",
        ShockKind::Technology => "technology",
    };
    let simple = panel_for(params, Variant::Simple, &spec)?;
    let general = panel_for(params, Variant::General, &spec)?;

    for (stem, panel) in [("simple", &simple), ("general", &general)] {
        let mut buf = Vec::new();
        csvio::write_panel_csv(panel, &mut buf)?;
        fs::write(common.out.join(format!("irf_{shock_name}_{stem}.csv")), buf)?;
    }
    let svg = figure_svg(
        &[
            ("general".to_string(), &general),
            ("simple".to_string(), &simple),
        ],
        &format!("{shock_name} shock: general vs simple adjustment costs"),
    );
    fs::write(common.out.join(format!("compare_{shock_name}.svg")), svg)?;

    println!("impact responses ({shock_name} shock)");
    println!(
        "  {:<6} {:>14} {:>14} {:>12}",
        "series", "simple", "general", "rel dev"
    );
    for (col, label) in [(Column::Y, "y"), (Column::X, "x"), (Column::PiP, "pi_p")] {
        let s = simple.get(col, 0);
        let g = general.get(col, 0);
        println!(
            "  {:<6} {:>14} {:>14} {:>11.2}%",
            label,
            fmt(s),
            fmt(g),
            (g - s).abs() / s.abs() * 100.0
        );
    }
    Ok(())
}
