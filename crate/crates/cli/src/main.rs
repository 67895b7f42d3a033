//! `bh`: tables, limit reports, ratio-tail scans, and inequality
//! verification runs over the Bohnenblust-Hille constant families.
//!
//! Every command emits a row-oriented report (CSV by default, JSON-lines or
//! an aligned table via `--format`) and is deterministic for a fixed
//! configuration and seed. Exit status: 0 on success, 1 when an asserted
//! check fails or a resource budget is exceeded, 2 on usage errors.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bh_core::verifier::{complexify, parse_form};
use bh_core::{
    check_claim1, check_contraction, convergence_report, envelope, find_p0, limit_target,
    limit_targets, Error, Extended, Family, FamilySpec, Form, InequalityOptions, KhinchineMode,
    LimitKind, Precision, RealScalar, ScalarField, SupOptions, Table, TailScan, Verdict,
};

use output::{Field, OutFormat, Report};

#[derive(Parser)]
#[command(name = "bh", version, about = "Bohnenblust-Hille constant tables and verification runs")]
struct RunConfig {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,

    /// Output file; stdout when omitted. A relative path is placed under
    /// $BH_OUTPUT_DIR when that variable is set.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Original,
    DavieKaijser,
    Queffelec,
    RecursiveReal,
    RecursiveComplex,
}

impl From<FamilyArg> for Family {
    fn from(a: FamilyArg) -> Family {
        match a {
            FamilyArg::Original => Family::Original,
            FamilyArg::DavieKaijser => Family::DavieKaijser,
            FamilyArg::Queffelec => Family::Queffelec,
            FamilyArg::RecursiveReal => Family::RecursiveReal,
            FamilyArg::RecursiveComplex => Family::RecursiveComplex,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Gamma,
    Haagerup,
}

impl From<ModeArg> for KhinchineMode {
    fn from(a: ModeArg) -> KhinchineMode {
        match a {
            ModeArg::Gamma => KhinchineMode::GammaFormula,
            ModeArg::Haagerup => KhinchineMode::HaagerupPiecewise,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum DistArg {
    SignUniform,
    Gaussian,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PrecisionArg {
    /// Standard double precision.
    Double,
    /// Double-double (~31 significant digits), for oracle cross-checks.
    Extended,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a constant family: one row (m, C_m, ln C_m) per degree.
    Constants {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Khinchine mode feeding the recursive families.
        #[arg(long, value_enum, default_value_t = ModeArg::Gamma)]
        mode: ModeArg,
        /// Largest degree tabulated.
        #[arg(long, default_value_t = 16)]
        max: u32,
    },

    /// Consecutive ratios D_n = C_{n+1}/C_n for n = 2..max-1.
    Ratios {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Gamma)]
        mode: ModeArg,
        #[arg(long, default_value_t = 100)]
        max: u32,
    },

    /// The six closed-form limit targets built from the Euler constant.
    Limits {
        #[arg(long, value_enum, default_value_t = PrecisionArg::Double)]
        precision: PrecisionArg,
    },

    /// Resolve the Khinchine crossover exponent p0 on [1.5, 2].
    P0 {
        /// Width and residual tolerance of the root search.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = PrecisionArg::Double)]
        precision: PrecisionArg,
    },

    /// Ratio-tail scans: claim-1 residuals, the contraction step, threshold
    /// envelopes, and the convergence report. Exits 1 if any check fails.
    Claims {
        #[arg(long, value_enum, default_value_t = FamilyArg::RecursiveReal)]
        family: FamilyArg,
        /// Khinchine mode; both modes are scanned when omitted.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Tail extent (table is built to n_max + 1).
        #[arg(long, default_value_t = 1 << 20)]
        n_max: u32,
        /// Index for the claim-1 residual check.
        #[arg(long, default_value_t = 10_000)]
        claim1_n: u32,
        /// Residual tolerance for claim 1.
        #[arg(long, default_value_t = 1e-3)]
        claim1_tol: f64,
        /// Hypothesis bound K for the contraction scan.
        #[arg(long, default_value_t = 1.5)]
        contraction_k: f64,
        /// Contraction scan range (n_start, n_end].
        #[arg(long, default_value_t = 100)]
        scan_start: u32,
        #[arg(long, default_value_t = 100_000)]
        scan_end: u32,
        /// Envelope base C, thresholds C^(2^-s) for s = 0..=s_max.
        #[arg(long, default_value_t = 1.5)]
        envelope_c: f64,
        #[arg(long, default_value_t = 6)]
        s_max: u32,
        /// Upper bound asserted on the tail sup of D_n.
        #[arg(long, default_value_t = 1.0001)]
        tail_bound: f64,
        /// Relative tolerance for the fitted decay constant.
        #[arg(long, default_value_t = 0.02)]
        fitted_tol: f64,
    },

    /// Check the inequality on explicit forms: the Littlewood fixture, a
    /// form file, and seeded random trials. Bounds for both Khinchine modes
    /// are printed side by side. Exits 1 if any exact-sup check fails.
    Verify {
        /// Degree of the random/fixture forms.
        #[arg(long, default_value_t = 2)]
        m: u32,
        /// Dimension per slot.
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value_t = FieldArg::Real)]
        field: FieldArg,
        /// Number of random forms to test.
        #[arg(long, default_value_t = 0)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = DistArg::Gaussian)]
        dist: DistArg,
        /// Include the 2x2 Littlewood form as a fixture.
        #[arg(long)]
        include_littlewood: bool,
        /// Read one form from a text tensor file.
        #[arg(long)]
        form: Option<PathBuf>,
        /// Constant family providing the bound C_m.
        #[arg(long, value_enum, default_value_t = FamilyArg::RecursiveReal)]
        family: FamilyArg,
        /// Multistart count for the complex phase ascent.
        #[arg(long, default_value_t = 16)]
        restarts: u32,
        /// Sweep limit per ascent start.
        #[arg(long, default_value_t = 100)]
        iters: u32,
        /// Relative slack on the pass condition.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Largest m*N for exact vertex enumeration.
        #[arg(long, default_value_t = 24)]
        budget_bits: u32,
    },

    /// Convergence report: tail bounds and the fitted decay constant.
    Report {
        #[arg(long, value_enum, default_value_t = FamilyArg::RecursiveReal)]
        family: FamilyArg,
        /// Khinchine mode; both modes are reported when omitted.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, default_value_t = 1 << 20)]
        n_max: u32,
    },
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match run(config) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Domain(_) | Error::Parse(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(config: RunConfig) -> bh_core::Result<ExitCode> {
    let (report, exit) = match config.command {
        Command::Constants { family, mode, max } => (constants(family, mode, max)?, ExitCode::SUCCESS),
        Command::Ratios { family, mode, max } => (ratios(family, mode, max)?, ExitCode::SUCCESS),
        Command::Limits { precision } => (limits(precision), ExitCode::SUCCESS),
        Command::P0 { tol, precision } => (p0_report(tol, precision)?, ExitCode::SUCCESS),
        Command::Claims {
            family,
            mode,
            n_max,
            claim1_n,
            claim1_tol,
            contraction_k,
            scan_start,
            scan_end,
            envelope_c,
            s_max,
            tail_bound,
            fitted_tol,
        } => claims(ClaimsConfig {
            family: family.into(),
            mode,
            n_max,
            claim1_n,
            claim1_tol,
            contraction_k,
            scan_start,
            scan_end,
            envelope_c,
            s_max,
            tail_bound,
            fitted_tol,
        })?,
        Command::Verify {
            m,
            n,
            field,
            trials,
            seed,
            dist,
            include_littlewood,
            form,
            family,
            restarts,
            iters,
            tolerance,
            budget_bits,
        } => verify(VerifyConfig {
            degree: m,
            dim: n,
            field,
            trials,
            seed,
            dist,
            include_littlewood,
            form,
            family: family.into(),
            restarts,
            iters,
            tolerance,
            budget_bits,
        })?,
        Command::Report { family, mode, n_max } => (report_cmd(family.into(), mode, n_max)?, ExitCode::SUCCESS),
    };

    emit(&report, config.format, config.output.as_deref())?;
    Ok(exit)
}

fn emit(report: &Report, format: OutFormat, output: Option<&std::path::Path>) -> bh_core::Result<()> {
    match output {
        None => {
            let stdout = std::io::stdout();
            report.write(stdout.lock(), format)?;
        }
        Some(path) => {
            let resolved = match std::env::var_os("BH_OUTPUT_DIR") {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.to_path_buf(),
            };
            let mut buffer = Vec::new();
            report.write(&mut buffer, format)?;
            fs::write(resolved, buffer)?;
        }
    }
    Ok(())
}

fn modes_to_run(family: Family, mode: Option<ModeArg>) -> Vec<KhinchineMode> {
    match mode {
        Some(m) => vec![m.into()],
        None if family.is_recursive() => {
            vec![KhinchineMode::GammaFormula, KhinchineMode::HaagerupPiecewise]
        }
        None => vec![KhinchineMode::GammaFormula],
    }
}

fn constants(family: FamilyArg, mode: ModeArg, max: u32) -> bh_core::Result<Report> {
    let table = Table::build(FamilySpec::new(family.into(), mode.into()), max)?;
    let mut report = Report::new("constants", vec!["m", "c_m", "ln_c_m"]);
    for value in table.values() {
        report.push(vec![
            Field::Int(u64::from(value.m)),
            Field::Num(value.value()),
            Field::Num(value.log_value),
        ]);
    }
    Ok(report)
}

fn ratios(family: FamilyArg, mode: ModeArg, max: u32) -> bh_core::Result<Report> {
    let table = Table::build(FamilySpec::new(family.into(), mode.into()), max)?;
    let series = table.ratio_series(max)?;
    let mut report = Report::new("ratios", vec!["n", "d_n", "below_one"]);
    for (n, d) in series.entries {
        report.push(vec![
            Field::Int(u64::from(n)),
            Field::Num(d),
            Field::Flag(series.below_one.contains(&n)),
        ]);
    }
    Ok(report)
}

fn limits(precision: PrecisionArg) -> Report {
    let mut report = Report::new("limits", vec!["kind", "value"]);
    match precision {
        PrecisionArg::Double => {
            for target in limit_targets::<f64>() {
                report.push(vec![
                    Field::text(target.kind.label()),
                    Field::Num(target.closed_form_value),
                ]);
            }
        }
        PrecisionArg::Extended => {
            for target in limit_targets::<Extended>() {
                report.push(vec![
                    Field::text(target.kind.label()),
                    Field::Ext(target.closed_form_value),
                ]);
            }
        }
    }
    report
}

fn p0_report(tol: f64, precision: PrecisionArg) -> bh_core::Result<Report> {
    // Validates the tolerance pair up front, mirroring the library contract.
    Precision::new(tol, tol)?;
    let mut report = Report::new("p0", vec!["precision", "tol", "p0", "residual"]);
    match precision {
        PrecisionArg::Double => {
            let p0 = find_p0(tol)?;
            let residual = bh_core::specialfn::p0_residual(p0)?;
            report.push(vec![
                Field::text("double"),
                Field::Num(tol),
                Field::Num(p0),
                Field::Num(residual),
            ]);
        }
        PrecisionArg::Extended => {
            let p0 = find_p0(Extended::embed(tol))?;
            let residual = bh_core::specialfn::p0_residual(p0)?;
            report.push(vec![
                Field::text("extended"),
                Field::Num(tol),
                Field::Ext(p0),
                Field::Ext(residual),
            ]);
        }
    }
    Ok(report)
}

struct ClaimsConfig {
    family: Family,
    mode: Option<ModeArg>,
    n_max: u32,
    claim1_n: u32,
    claim1_tol: f64,
    contraction_k: f64,
    scan_start: u32,
    scan_end: u32,
    envelope_c: f64,
    s_max: u32,
    tail_bound: f64,
    fitted_tol: f64,
}

fn claims(cfg: ClaimsConfig) -> bh_core::Result<(Report, ExitCode)> {
    let mut report = Report::new(
        "claims",
        vec!["family", "mode", "check", "param", "value", "threshold", "ok"],
    );
    let mut all_ok = true;
    let table_extent = cfg
        .n_max
        .max(cfg.scan_end)
        .max(2 * cfg.claim1_n)
        .saturating_add(1);

    for mode in modes_to_run(cfg.family, cfg.mode) {
        let spec = FamilySpec::new(cfg.family, mode);
        let table = Table::build(spec, table_extent)?;
        let family_cell = || Field::text(cfg.family.label());
        let mode_cell = || Field::text(mode.label());

        let (odd, even) = check_claim1(&table, cfg.claim1_n)?;
        for (check, value) in [("claim1-odd", odd), ("claim1-even", even)] {
            let ok = value < cfg.claim1_tol;
            all_ok &= ok;
            report.push(vec![
                family_cell(),
                mode_cell(),
                Field::text(check),
                Field::Int(u64::from(cfg.claim1_n)),
                Field::Num(value),
                Field::Num(cfg.claim1_tol),
                Field::Flag(ok),
            ]);
        }

        let (value, ok) = match check_contraction(&table, cfg.contraction_k, cfg.scan_start, cfg.scan_end)
        {
            Ok(TailScan::Holds { from }) => (f64::from(from), true),
            Ok(TailScan::Fails { witness, .. }) => (f64::from(witness), false),
            Err(Error::Hypothesis { witness, .. }) => (f64::from(witness), false),
            Err(other) => return Err(other),
        };
        all_ok &= ok;
        report.push(vec![
            family_cell(),
            mode_cell(),
            Field::text("contraction"),
            Field::text(format!("K={}", cfg.contraction_k)),
            Field::Num(value),
            Field::Num(cfg.contraction_k.powf(0.625)),
            Field::Flag(ok),
        ]);

        for s in 0..=cfg.s_max {
            let threshold = cfg.envelope_c.powf(0.5f64.powi(s as i32));
            let (value, ok) = match envelope(&table, s, cfg.envelope_c, cfg.n_max)? {
                TailScan::Holds { from } => (f64::from(from), true),
                TailScan::Fails { witness, .. } => (f64::from(witness), false),
            };
            all_ok &= ok;
            report.push(vec![
                family_cell(),
                mode_cell(),
                Field::text(format!("envelope-s{s}")),
                Field::text(format!("C={}", cfg.envelope_c)),
                Field::Num(value),
                Field::Num(threshold),
                Field::Flag(ok),
            ]);
        }

        let conv = convergence_report(&table, cfg.n_max)?;
        let fitted_target = limit_target::<f64>(LimitKind::EvenRatio).ln() / std::f64::consts::LN_2;
        let checks: [(&str, f64, f64, bool); 4] = [
            ("tail-sup", conv.tail_sup, cfg.tail_bound, conv.tail_sup < cfg.tail_bound),
            ("tail-inf", conv.tail_inf, 1.0 - 1e-12, conv.tail_inf >= 1.0 - 1e-12),
            (
                "fitted-c",
                conv.fitted_c,
                fitted_target,
                ((conv.fitted_c - fitted_target) / fitted_target).abs() < cfg.fitted_tol,
            ),
            (
                "beats-2^(1/8)",
                conv.tail_sup,
                2f64.powf(0.125),
                conv.beats_conjectured_rate,
            ),
        ];
        for (check, value, threshold, ok) in checks {
            all_ok &= ok;
            report.push(vec![
                family_cell(),
                mode_cell(),
                Field::text(check),
                Field::Int(u64::from(cfg.n_max)),
                Field::Num(value),
                Field::Num(threshold),
                Field::Flag(ok),
            ]);
        }
    }

    let exit = if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
    Ok((report, exit))
}

struct VerifyConfig {
    degree: u32,
    dim: usize,
    field: FieldArg,
    trials: u32,
    seed: u64,
    dist: DistArg,
    include_littlewood: bool,
    form: Option<PathBuf>,
    family: Family,
    restarts: u32,
    iters: u32,
    tolerance: f64,
    budget_bits: u32,
}

fn littlewood_in(field: FieldArg) -> Form {
    match field {
        FieldArg::Real => Form::Real(bh_core::littlewood_form::<f64>()),
        FieldArg::Complex => Form::Complex(complexify(&bh_core::littlewood_form::<f64>())),
    }
}

fn verify(cfg: VerifyConfig) -> bh_core::Result<(Report, ExitCode)> {
    let mut forms: Vec<(String, Form)> = Vec::new();
    if cfg.include_littlewood {
        forms.push(("littlewood".into(), littlewood_in(cfg.field)));
    }
    if let Some(path) = &cfg.form {
        let text = fs::read_to_string(path)?;
        forms.push((format!("file:{}", path.display()), parse_form(&text)?));
    }
    let field = match cfg.field {
        FieldArg::Real => ScalarField::Real,
        FieldArg::Complex => ScalarField::Complex,
    };
    let dist = match cfg.dist {
        DistArg::SignUniform => bh_core::Dist::SignUniform,
        DistArg::Gaussian => bh_core::Dist::Gaussian,
    };
    for index in 0..cfg.trials {
        let form = bh_core::random_form(cfg.degree, cfg.dim, field, dist, cfg.seed, u64::from(index))?;
        forms.push((format!("random-{index}"), form));
    }

    let opts = InequalityOptions {
        sup: SupOptions {
            restarts: cfg.restarts,
            iters: cfg.iters,
            seed: cfg.seed,
            max_vertex_bits: cfg.budget_bits,
        },
        pass_tol: cfg.tolerance,
    };

    let mut report = Report::new(
        "verify",
        vec![
            "form",
            "m",
            "N",
            "field",
            "lhs",
            "sup_norm",
            "sup_exact",
            "ratio",
            "bound_gamma",
            "verdict_gamma",
            "bound_haagerup",
            "verdict_haagerup",
        ],
    );
    let mut any_fail = false;
    for (label, form) in &forms {
        let gamma = form.check(FamilySpec::new(cfg.family, KhinchineMode::GammaFormula), &opts)?;
        let haag = form.check(FamilySpec::new(cfg.family, KhinchineMode::HaagerupPiecewise), &opts)?;
        any_fail |= gamma.verdict == Verdict::Fail || haag.verdict == Verdict::Fail;
        report.push(vec![
            Field::text(label.clone()),
            Field::Int(u64::from(form.degree())),
            Field::Int(form.dim() as u64),
            Field::text(form.field().label()),
            Field::Num(gamma.lhs),
            Field::Num(gamma.sup_norm),
            Field::Flag(gamma.sup_is_exact),
            Field::Num(gamma.ratio),
            Field::Num(gamma.bound),
            Field::text(gamma.verdict.label()),
            Field::Num(haag.bound),
            Field::text(haag.verdict.label()),
        ]);
    }

    let exit = if any_fail { ExitCode::from(1) } else { ExitCode::SUCCESS };
    Ok((report, exit))
}

fn report_cmd(family: Family, mode: Option<ModeArg>, n_max: u32) -> bh_core::Result<Report> {
    let mut report = Report::new(
        "report",
        vec![
            "family",
            "mode",
            "n_max",
            "tail_sup",
            "tail_inf",
            "fitted_c",
            "fitted_target",
            "claim1_odd_max",
            "claim1_even_max",
            "beats_rate",
        ],
    );
    for mode in modes_to_run(family, mode) {
        let table = Table::build(FamilySpec::new(family, mode), n_max.saturating_add(1))?;
        let conv = convergence_report(&table, n_max)?;
        let fitted_target = limit_target::<f64>(LimitKind::EvenRatio).ln() / std::f64::consts::LN_2;
        report.push(vec![
            Field::text(family.label()),
            Field::text(mode.label()),
            Field::Int(u64::from(n_max)),
            Field::Num(conv.tail_sup),
            Field::Num(conv.tail_inf),
            Field::Num(conv.fitted_c),
            Field::Num(fitted_target),
            Field::Num(conv.claim1_odd_max),
            Field::Num(conv.claim1_even_max),
            Field::Flag(conv.beats_conjectured_rate),
        ]);
    }
    Ok(report)
}
