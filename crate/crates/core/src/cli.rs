//! The `sas` command line.
//!
//! Exit codes: 0 on success, 1 for diagnostics, file and domain errors,
//! 2 for usage errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::dsl::{parse, parse_events, serialize, Diagnostic, SourceModel};
use crate::dynamics::{simulate, LvParams, LvState, Trajectory, DEFAULT_N_G0, DEFAULT_N_L0};
use crate::fusion::{fuse, gain_oracle, symbiotic_gain};
use crate::him::taxonomy;
use crate::knowledge::memory_capacity_log10;
use crate::model::{validate_in, System};
use crate::reliability::{report, ErrorProfile};

#[derive(Debug, Parser)]
#[command(
    name = "sas",
    version,
    about = "Symbiotic autonomous system models: algebra, knowledge and dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and link a model file, reporting diagnostics.
    Validate { file: PathBuf },
    /// Fuse named systems left to right and report the symbiotic gain.
    Fuse {
        file: PathBuf,
        /// Two or more system names.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        systems: Vec<String>,
        /// Also count each gain by explicit enumeration.
        #[arg(long)]
        oracle: bool,
    },
    /// Closed-form symbiotic gain for component counts.
    Gain {
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        n2: u64,
    },
    /// Print the layered structure of a model.
    Topology { file: PathBuf },
    /// Collective and summed reliability of independent error rates.
    Reliability {
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
        error_rates: Vec<f64>,
    },
    /// Memory capacity bound, as log10 of a bir count.
    Capacity {
        #[arg(long)]
        neurons: f64,
        #[arg(long)]
        synapses: f64,
    },
    /// Knowledge symbiosis gain between two concept groups, `A+B,C`.
    KnowledgeGain {
        file: PathBuf,
        #[arg(long)]
        concepts: String,
    },
    /// Compose knowledge layers and report their record counts.
    Compose {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        layers: usize,
    },
    /// Dispatch an event stream and write the behavior trace.
    Dispatch {
        file: PathBuf,
        #[arg(long)]
        events: PathBuf,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Integrate the predator-prey system with RK4.
    SimulatePps(SimulateArgs),
    /// The sixteen behavior taxa.
    Taxonomy,
    /// Print a model in canonical form.
    Fmt { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, clap::Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = LvParams::default().b_l)]
    bl: f64,
    #[arg(long, default_value_t = LvParams::default().d_l)]
    dl: f64,
    #[arg(long, default_value_t = LvParams::default().b_g)]
    bg: f64,
    #[arg(long, default_value_t = LvParams::default().d_g)]
    dg: f64,
    #[arg(long, default_value_t = DEFAULT_N_L0)]
    nl0: f64,
    #[arg(long, default_value_t = DEFAULT_N_G0)]
    ng0: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 50_000)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    out: OutFormat,
    /// Write the trajectory here instead of stdout.
    #[arg(long)]
    path: Option<PathBuf>,
}

enum Failure {
    /// Already reported on stderr.
    Reported,
    Message(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Message(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    color: bool,
}

impl Ctx<'_> {
    fn json<T: Serialize + ?Sized>(&mut self, value: &T) -> CmdResult {
        let text = serde_json::to_string(value)?;
        writeln!(self.out, "{text}")?;
        Ok(())
    }

    fn diagnostics(&mut self, path: &Path, diags: &[Diagnostic]) -> std::io::Result<()> {
        for d in diags {
            writeln!(
                self.err,
                "{}",
                d.render(&path.display().to_string(), self.color)
            )?;
        }
        Ok(())
    }

    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Message(format!("{}: {e}", path.display())))
    }

    fn load(&mut self, path: &Path) -> Result<SourceModel, Failure> {
        let text = self.read(path)?;
        match parse(&text) {
            Ok(parsed) => {
                self.diagnostics(path, &parsed.warnings)?;
                Ok(parsed.model.with_path(path))
            }
            Err(diags) => {
                self.diagnostics(path, &diags)?;
                Err(Failure::Reported)
            }
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = if color {
                e.render().ansi().to_string()
            } else {
                e.render().to_string()
            };
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                if !text.contains("Usage:") {
                    let _ = writeln!(err, "\n{}", Cli::command().render_usage());
                }
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let mut ctx = Ctx { out, err, color };
    match dispatch_command(cli.command, &mut ctx) {
        Ok(()) => 0,
        Err(Failure::Reported) => 1,
        Err(Failure::Message(m)) => {
            let label = if color {
                "\x1b[31merror\x1b[0m"
            } else {
                "error"
            };
            let _ = writeln!(ctx.err, "{label}: {m}");
            1
        }
    }
}

fn dispatch_command(command: Command, ctx: &mut Ctx<'_>) -> CmdResult {
    match command {
        Command::Validate { file } => validate_cmd(ctx, &file),
        Command::Fuse {
            file,
            systems,
            oracle,
        } => fuse_cmd(ctx, &file, &systems, oracle),
        Command::Gain { n1, n2 } => ctx.json(&json!({ "gain": symbiotic_gain(n1, n2) })),
        Command::Topology { file } => {
            let model = ctx.load(&file)?;
            for root in model.topology_roots()? {
                write!(ctx.out, "{}", root.render())?;
            }
            Ok(())
        }
        Command::Reliability { error_rates } => ctx.json(&report(&ErrorProfile::new(error_rates)?)),
        Command::Capacity { neurons, synapses } => {
            ctx.json(&json!({ "log10_bir": memory_capacity_log10(neurons, synapses)? }))
        }
        Command::KnowledgeGain { file, concepts } => knowledge_gain_cmd(ctx, &file, &concepts),
        Command::Compose { file, layers } => compose_cmd(ctx, &file, layers),
        Command::Dispatch {
            file,
            events,
            trace,
        } => dispatch_cmd(ctx, &file, &events, &trace),
        Command::SimulatePps(args) => simulate_cmd(ctx, &args),
        Command::Taxonomy => ctx.json(taxonomy()),
        Command::Fmt { file } => {
            let model = ctx.load(&file)?;
            write!(ctx.out, "{}", serialize(&model))?;
            Ok(())
        }
    }
}

fn validate_cmd(ctx: &mut Ctx<'_>, file: &Path) -> CmdResult {
    let model = ctx.load(file)?;
    let mut violations = Vec::new();
    for s in model.systems() {
        let env = model.environment_of(s);
        for v in validate_in(s, &env) {
            violations.push(json!({ "system": s.name(), "code": v.code(), "path": v.path() }));
        }
    }
    ctx.json(&json!({
        "valid": violations.is_empty(),
        "declarations": model.decls().len(),
        "systems": model.systems().count(),
        "concepts": model.concepts().count(),
        "violations": violations,
    }))?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Reported)
    }
}

fn fuse_cmd(ctx: &mut Ctx<'_>, file: &Path, names: &[String], oracle: bool) -> CmdResult {
    if names.len() < 2 {
        return Err(Failure::Message(
            "--systems needs at least two names".into(),
        ));
    }
    let model = ctx.load(file)?;
    let lookup = |n: &str| -> Result<System, Failure> {
        model
            .system(n)
            .cloned()
            .ok_or_else(|| Failure::Message(format!("{}: no system named `{n}`", file.display())))
    };
    let mut acc = lookup(&names[0])?;
    let mut steps = Vec::new();
    let mut total: u64 = 0;
    for name in &names[1..] {
        let next = lookup(name)?;
        let result = fuse(&acc, &next)?;
        let mut step = json!({ "left": acc.name(), "right": next.name(), "gain": result.gain });
        if oracle {
            let counted = gain_oracle(&acc, &next)?;
            step["oracle"] = json!(counted);
            step["agree"] = json!(counted == result.gain);
        }
        total += result.gain;
        steps.push(step);
        acc = result.fused;
    }
    ctx.json(&json!({
        "fused": acc.name(),
        "components": acc.components().len(),
        "behaviors": acc.behaviors().len(),
        "gain": total,
        "steps": steps,
    }))
}

fn knowledge_gain_cmd(ctx: &mut Ctx<'_>, file: &Path, spec: &str) -> CmdResult {
    let Some((left, right)) = spec.split_once(',') else {
        return Err(Failure::Message(format!(
            "--concepts expects `A,B` (groups joined with `+`), got `{spec}`"
        )));
    };
    let left: Vec<&str> = left.split('+').map(str::trim).collect();
    let right: Vec<&str> = right.split('+').map(str::trim).collect();
    let model = ctx.load(file)?;
    let kb = model.knowledge_base()?;
    ctx.json(&kb.symbiosis_gain(&left, &right)?)
}

fn compose_cmd(ctx: &mut Ctx<'_>, file: &Path, layers: usize) -> CmdResult {
    let model = ctx.load(file)?;
    let mut kb = model.knowledge_base()?;
    let mut counts = Vec::with_capacity(layers);
    for k in 1..=layers {
        kb = kb.compose_layer()?;
        counts.push(json!({ "layer": k, "records": kb.top_width() }));
    }
    ctx.json(&json!({
        "concepts": kb.concepts().len(),
        "items": kb.items().len(),
        "layers": counts,
        "entire_measure": kb.entire_knowledge_measure(),
    }))
}

fn dispatch_cmd(ctx: &mut Ctx<'_>, file: &Path, events: &Path, trace_path: &Path) -> CmdResult {
    let model = ctx.load(file)?;
    let text = ctx.read(events)?;
    let occurrences = match parse_events(&text) {
        Ok(o) => o,
        Err(diags) => {
            ctx.diagnostics(events, &diags)?;
            return Err(Failure::Reported);
        }
    };
    let trace = model
        .dispatcher()?
        .dispatch(&occurrences)
        .map_err(|e| Failure::Message(format!("{}: {e}", events.display())))?;
    let mut doc = serde_json::to_string_pretty(&trace)?;
    doc.push('\n');
    std::fs::write(trace_path, doc)
        .map_err(|e| Failure::Message(format!("{}: {e}", trace_path.display())))?;
    ctx.json(&json!({
        "entries": trace.len(),
        "unhandled": trace.unhandled(),
        "trace": trace_path.display().to_string(),
    }))
}

fn simulate_cmd(ctx: &mut Ctx<'_>, a: &SimulateArgs) -> CmdResult {
    let params = LvParams::new(a.bl, a.dl, a.bg, a.dg)?;
    let start = LvState::new(0.0, a.nl0, a.ng0)?;
    let traj = simulate(&params, &start, a.dt, a.steps)?;
    let body = match a.out {
        OutFormat::Csv => trajectory_csv(&traj),
        OutFormat::Json => serde_json::to_string(&traj)? + "\n",
    };
    match &a.path {
        Some(p) => {
            std::fs::write(p, body)
                .map_err(|e| Failure::Message(format!("{}: {e}", p.display())))?;
            ctx.json(&json!({ "samples": traj.samples.len(), "path": p.display().to_string() }))
        }
        None => {
            ctx.out.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

/// `t,N_L,N_G,V` rows; V is blank where undefined.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,N_L,N_G,V\n");
    for s in &traj.samples {
        let v = s.v.map(fmt_g17).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{v}",
            fmt_g17(s.state.t),
            fmt_g17(s.state.n_l),
            fmt_g17(s.state.n_g)
        );
    }
    out
}

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros removed,
/// exponent form outside `1e-4 ≤ |x| < 1e17`.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_printf() {
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        assert_eq!(fmt_g17(200.0), "200");
        assert_eq!(fmt_g17(1e-3), "0.001");
        assert_eq!(fmt_g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(fmt_g17(1e20), "1e+20");
        assert_eq!(fmt_g17(-2.5), "-2.5");
        assert_eq!(fmt_g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(fmt_g17(123456789012345680.0), "1.2345678901234568e+17");
    }

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["sas"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err, false);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn gain_and_usage() {
        assert_eq!(
            run_str(&["gain", "--n1", "3", "--n2", "2"]),
            (0, "{\"gain\":12}\n".into(), String::new())
        );
        let (code, _, err) = run_str(&["gain", "--n1", "x"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn missing_file_names_path() {
        let (code, _, err) = run_str(&["validate", "no/such/missing.sas"]);
        assert_eq!(code, 1);
        assert!(err.contains("no/such/missing.sas"));
    }
}
