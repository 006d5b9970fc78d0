use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use diagramless::checks::{frobenius_suite, run_suite, CheckResult, Suite};
use diagramless::complex::{assemble, homology, laurent_to_string, to_dot, graded_euler_characteristic, ChainComplex, GradingScheme};
use diagramless::diagramless::{diagramless_homology, DiagramClass, DiagramClassSet};
use diagramless::frobenius::FrobeniusSystem;
use diagramless::{catalog, parse_pd, Error, LinkDiagram, SignRule};

#[derive(Parser, Debug)]
#[command(name = "dlkh", version, about = "Enhanced states, Khovanov and diagramless homology of link diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Planar diagram code, e.g. "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]", or a catalog name such as `trefoil-left`.
    #[arg(long, global = true)]
    pd: Option<String>,
    /// File of `label: PD` lines.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Frobenius::F1, global = true)]
    frobenius: Frobenius,
    #[arg(long, value_enum, default_value_t = Sign::Sigma, global = true)]
    sign: Sign,
    /// Shift Khovanov gradings by the writhe so that they are link invariants.
    #[arg(long, global = true)]
    normalize: bool,
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[arg(long, value_enum, default_value_t = SuiteArg::Fast, global = true)]
    suite: SuiteArg,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// List enhanced states with their surface and Khovanov gradings.
    States,
    /// Khovanov homology of one diagram.
    Kh,
    /// Diagramless homology of a set of diagram classes, with the copy count N.
    Dkh,
    /// Run an invariant suite.
    Check,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Frobenius {
    F1,
    F5,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Sigma,
    Alpha,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Table,
    Json,
    Dot,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SuiteArg {
    Fast,
    Full,
}

/// Failure kinds, mapped to exit codes.
enum Failure {
    /// Bad input or a refused precondition.
    Guard(anyhow::Error),
    /// A computation or check did not succeed.
    Failed(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Structural(_) | Error::Internal(_) => Failure::Failed(e.into()),
            _ => Failure::Guard(e.into()),
        }
    }
}

fn guard(msg: impl Into<String>) -> Failure {
    Failure::Guard(anyhow!(msg.into()))
}

impl Cli {
    fn rule(&self) -> SignRule {
        match self.sign {
            Sign::Sigma => SignRule::Sigma,
            Sign::Alpha => SignRule::Alpha,
        }
    }

    fn kh_scheme(&self) -> GradingScheme {
        GradingScheme::Khovanov { normalized: self.normalize }
    }

    fn diagram(&self) -> Result<Option<LinkDiagram>, Failure> {
        let Some(pd) = &self.pd else { return Ok(None) };
        if let Some(d) = catalog::by_name(pd.trim()) {
            return Ok(Some(d));
        }
        Ok(Some(parse_pd(pd)?))
    }

    /// The classes named by `--manifest`, or the single `--pd` diagram.
    fn classes(&self) -> Result<DiagramClassSet, Failure> {
        match (&self.pd, &self.manifest) {
            (Some(_), Some(_)) => Err(guard("give either --pd or --manifest, not both")),
            (None, None) => Err(guard("an input is required: --pd or --manifest")),
            (Some(_), None) => {
                let d = self.diagram()?.expect("pd given");
                Ok(DiagramClassSet::new(vec![DiagramClass { label: "pd".into(), diagram: d }])?)
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::Guard)?;
                Ok(DiagramClassSet::parse_manifest(&text)?)
            }
        }
    }
}

fn complexes(cli: &Cli, ds: &DiagramClassSet) -> Result<Vec<(String, ChainComplex)>, Failure> {
    ds.classes
        .iter()
        .map(|c| Ok((c.label.clone(), assemble(&c.diagram, &FrobeniusSystem::f1(), cli.rule())?)))
        .collect()
}

fn dots(cs: &[(String, ChainComplex)], scheme: GradingScheme) -> String {
    cs.iter().map(|(label, c)| format!("// {label}: {}\n{}", c.diagram, to_dot(c, scheme))).collect()
}

fn cmd_states(cli: &Cli) -> Result<String, Failure> {
    let cs = complexes(cli, &cli.classes()?)?;
    if cli.format == Format::Dot {
        return Ok(dots(&cs, GradingScheme::Surface));
    }
    let mut rows = Vec::new();
    for (label, c) in &cs {
        for g in 0..c.len() {
            let s = c.key(g, GradingScheme::Surface);
            let kh = c.key(g, cli.kh_scheme());
            rows.push((label.clone(), c.state_label(g), s, kh));
        }
    }
    Ok(match cli.format {
        Format::Json => {
            let states: Vec<Value> = rows
                .iter()
                .map(|(label, state, s, kh)| {
                    json!({"class": label, "state": state, "gradings": {"i": s.i, "j": s.j, "k": s.k, "b": s.b}, "khovanov": {"i": kh.i, "j": kh.j}})
                })
                .collect();
            serde_json::to_string_pretty(&json!({"normalized": cli.normalize, "states": states})).expect("json")
        }
        _ => {
            let mut out = format!("{:<8} {:<16} {:>4} {:>4} {:>4} {:>4} {:>5} {:>5}\n", "class", "state", "I", "J", "K", "B", "kh_i", "kh_j");
            for (label, state, s, kh) in &rows {
                out.push_str(&format!("{label:<8} {state:<16} {:>4} {:>4} {:>4} {:>4} {:>5} {:>5}\n", s.i, s.j, s.k, s.b, kh.i, kh.j));
            }
            out
        }
    })
}

fn cmd_kh(cli: &Cli) -> Result<String, Failure> {
    let d = cli.diagram()?.ok_or_else(|| guard("kh needs --pd"))?;
    let c = assemble(&d, &FrobeniusSystem::f1(), cli.rule())?;
    let scheme = cli.kh_scheme();
    if cli.format == Format::Dot {
        return Ok(to_dot(&c, scheme));
    }
    let h = homology(&c, scheme)?;
    let euler = laurent_to_string(&graded_euler_characteristic(&c, scheme));
    Ok(match cli.format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "diagram": d.to_pd(),
            "normalized": cli.normalize,
            "homology": h.to_json(),
            "euler": euler,
        }))
        .expect("json"),
        _ => format!("{}\neuler: {euler}\n", h.to_table()),
    })
}

fn cmd_dkh(cli: &Cli) -> Result<String, Failure> {
    let ds = cli.classes()?;
    if cli.format == Format::Dot {
        return Ok(dots(&complexes(cli, &ds)?, GradingScheme::Surface));
    }
    let report = diagramless_homology(&ds, cli.rule())?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(match cli.format {
        Format::Json => serde_json::to_string_pretty(&report.to_json()).expect("json"),
        _ => report.to_table(),
    })
}

fn cmd_check(cli: &Cli) -> Result<(String, bool), Failure> {
    if cli.format == Format::Dot {
        return Err(guard("check has no dot output"));
    }
    let results: Vec<CheckResult> = match cli.frobenius {
        Frobenius::F5 => frobenius_suite(&FrobeniusSystem::f5()),
        Frobenius::F1 => {
            let suite = match cli.suite {
                SuiteArg::Fast => Suite::Fast,
                SuiteArg::Full => Suite::Full,
            };
            let mut extra: Vec<LinkDiagram> = cli.diagram()?.into_iter().collect();
            if cli.manifest.is_some() {
                extra.extend(cli.classes()?.classes.into_iter().map(|c| c.diagram));
            }
            run_suite(suite, cli.rule(), &extra, 2024)
        }
    };
    let ok = results.iter().all(|r| r.passed);
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&json!({"passed": ok, "checks": results})).expect("json"),
        _ => {
            let mut out = String::new();
            for r in &results {
                let tag = if r.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("{tag}  {:<50} cases={:<4} {:>8.3}s", r.name, r.cases, r.seconds));
                if !r.passed {
                    out.push_str(&format!("  {}", r.detail));
                }
                out.push('\n');
            }
            out
        }
    };
    Ok((text, ok))
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if cli.frobenius == Frobenius::F5 && cli.command != Command::Check {
        return Err(guard("--frobenius f5 is only available for `check`; homology is computed over f1"));
    }
    let (text, ok) = match cli.command {
        Command::States => (cmd_states(cli)?, true),
        Command::Kh => (cmd_kh(cli)?, true),
        Command::Dkh => (cmd_dkh(cli)?, true),
        Command::Check => cmd_check(cli)?,
    };
    print!("{text}");
    if !text.ends_with('\n') {
        println!();
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Failed(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Guard(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
