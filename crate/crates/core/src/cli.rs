//! Command-line front end. `run` never panics on bad input: parse and
//! validation failures exit with 2, computational failures with 1.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog;
use crate::coniveau::{coniveau_slice, dh_report, quotient_by_coniveau, Mode};
use crate::entry::Entry;
use crate::error::{Error, Result};
use crate::margolis::{margolis_homology, safe_max};
use crate::ops::{Check, Operation};
use crate::transfer::{check_frobenius, check_grothendieck, LawReport, TransferModel};

#[derive(Parser, Debug)]
#[command(name = "coniveau", version, about = "Steenrod operations, Margolis homology and coniveau reports on truncated cohomology rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args, Debug)]
struct Input {
    /// Catalog id or presentation file.
    input: Option<String>,
    #[arg(long)]
    entry: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

impl Input {
    fn load(&self) -> Result<Entry> {
        match self.entry.as_deref().or(self.input.as_deref()) {
            Some(s) => catalog::resolve(s),
            None => Err(Error::Presentation("no entry given (pass an id, a file or --entry)".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal-form basis of one degree.
    Basis {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        degree: u32,
    },
    /// Apply beta, Q_n or P^k to an expression.
    Op {
        /// Expression in the entry's generators.
        expr: String,
        #[arg(long, required = true)]
        entry: String,
        #[arg(long, conflicts_with_all = ["beta", "power"])]
        q: Option<u32>,
        #[arg(long, conflicts_with = "power")]
        beta: bool,
        #[arg(long)]
        power: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Margolis homology ker Q_n / im Q_n.
    Margolis {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Check the transfer laws of every model (or one model).
    TransferCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        model: Option<String>,
    },
    /// Dimensions of the weight slice N^c and the quotient H/N^c.
    Coniveau {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        c: u32,
        /// List the quotient basis of one degree.
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Classify classes of low degree against strong coniveau.
    DhReport {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "integral")]
        mode: String,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Structural checks of an entry.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// List catalog ids.
    List {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{s}")?;
    Ok(())
}

#[derive(Serialize)]
struct BasisOut<'a> {
    entry: &'a str,
    degree: u32,
    dim: usize,
    basis: Vec<String>,
}

#[derive(Serialize)]
struct OpOut<'a> {
    entry: &'a str,
    operation: String,
    input: String,
    result: String,
    overflow: bool,
}

#[derive(Serialize)]
struct ConiveauRow {
    degree: u32,
    dim: usize,
    slice: usize,
    quotient: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    quotient_basis: Vec<String>,
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Basis { input, degree } => {
            let e = input.load()?;
            let alg = e.algebra()?;
            let basis: Vec<String> = alg.degree_basis(degree)?.iter().map(|b| alg.format(b)).collect();
            match input.format {
                Format::Text => {
                    for b in &basis {
                        writeln!(out, "{b}")?;
                    }
                }
                Format::Machine => emit_json(
                    out,
                    &BasisOut {
                        entry: &e.id,
                        degree,
                        dim: basis.len(),
                        basis,
                    },
                )?,
            }
        }
        Command::Op {
            expr,
            entry,
            q,
            beta,
            power,
            format,
        } => {
            let e = catalog::resolve(&entry)?;
            let a = e.ops()?;
            let op = match (q, beta, power) {
                (Some(n), _, _) => Operation::Q(n),
                (None, true, _) => Operation::Beta,
                (None, false, Some(k)) => Operation::Power(k),
                _ => return Err(Error::Presentation("choose one of --q, --beta, --power".into())),
            };
            let x = a.algebra().parse(&expr)?;
            let r = a.apply(op, &x)?;
            let result = a.algebra().format(&r.value);
            match format {
                Format::Text => {
                    writeln!(out, "{result}")?;
                    if !r.exact() {
                        writeln!(out, "# terms above the truncation were dropped")?;
                    }
                }
                Format::Machine => emit_json(
                    out,
                    &OpOut {
                        entry: &e.id,
                        operation: op.to_string(),
                        input: a.algebra().format(&x),
                        result,
                        overflow: !r.exact(),
                    },
                )?,
            }
        }
        Command::Margolis { input, n, max_degree } => {
            let e = input.load()?;
            let a = e.ops()?;
            let d_max = match max_degree {
                Some(d) => d,
                None => safe_max(a, n).ok_or(Error::UnsafeWindow { requested: 0, max: 0 })?,
            };
            let r = margolis_homology(a, n, d_max)?;
            let rows = r.rows(a);
            match input.format {
                Format::Text => {
                    writeln!(out, "Margolis homology of Q_{n} on {} (degrees 0..={d_max})", e.id)?;
                    writeln!(out, "degree  ker  im  homology  representatives")?;
                    for row in rows {
                        writeln!(
                            out,
                            "{:>6} {:>4} {:>3} {:>9}  {}",
                            row.degree,
                            row.ker,
                            row.im,
                            row.homology,
                            row.representatives.join(", ")
                        )?;
                    }
                }
                Format::Machine => emit_json(out, &rows)?,
            }
        }
        Command::TransferCheck { input, model } => {
            let e = input.load()?;
            let a = e.ops()?;
            let mut reports: Vec<LawReport> = Vec::new();
            for t in e.transfers() {
                if model.as_deref().is_some_and(|m| m != t.name()) {
                    continue;
                }
                match t {
                    TransferModel::Divisor(d) => {
                        reports.push(check_frobenius(a, d, a.truncation())?);
                        if a.has_powers() && d.source().has_powers() {
                            reports.push(check_grothendieck(a, d)?);
                        }
                    }
                    TransferModel::Table(tm) => reports.push(tm.check_consistency(a)?),
                }
                for n in 0..=a.n_max().min(t.source().n_max()) {
                    reports.push(t.check_qn_commutation(a, n)?);
                }
            }
            if let Some(m) = &model {
                if reports.is_empty() {
                    return Err(Error::UnknownModel(m.clone()));
                }
            }
            let ok = reports.iter().all(|r| r.passed());
            match input.format {
                Format::Text => {
                    for r in &reports {
                        let status = if r.passed() { "pass" } else { "FAIL" };
                        writeln!(
                            out,
                            "{status} {}: {} ({} checked, {} skipped)",
                            r.model, r.law, r.checked, r.skipped
                        )?;
                        for f in r.failures.iter().take(3) {
                            writeln!(out, "    {f}")?;
                        }
                    }
                }
                Format::Machine => emit_json(out, &reports)?,
            }
            return Ok(if ok { 0 } else { 1 });
        }
        Command::Coniveau {
            input,
            c,
            degree,
            max_degree,
        } => {
            let e = input.load()?;
            let alg = e.algebra()?;
            let degrees: Vec<u32> = match degree {
                Some(d) => vec![d],
                None => (0..=max_degree.unwrap_or(alg.truncation()).min(alg.truncation())).collect(),
            };
            let mut rows = Vec::new();
            for d in degrees {
                let q = quotient_by_coniveau(alg, c, d)?;
                rows.push(ConiveauRow {
                    degree: d,
                    dim: alg.dim(d),
                    slice: coniveau_slice(alg, c, d)?.dim(),
                    quotient: q.len(),
                    quotient_basis: if degree.is_some() {
                        q.iter().map(|m| alg.format(m)).collect()
                    } else {
                        Vec::new()
                    },
                });
            }
            match input.format {
                Format::Text => {
                    let kind = if e.meta().weight_exact { "exact" } else { "lower-bound" };
                    writeln!(out, "weight slice N^{c} on {} (weights: {kind})", e.id)?;
                    writeln!(out, "degree  dim  slice  quotient")?;
                    for r in &rows {
                        writeln!(out, "{:>6} {:>4} {:>6} {:>9}", r.degree, r.dim, r.slice, r.quotient)?;
                        for b in &r.quotient_basis {
                            writeln!(out, "    {b}")?;
                        }
                    }
                }
                Format::Machine => emit_json(out, &rows)?,
            }
        }
        Command::DhReport {
            input,
            mode,
            max_degree,
        } => {
            let e = input.load()?;
            let mode: Mode = mode.parse()?;
            let r = dh_report(&e, mode, max_degree)?;
            match input.format {
                Format::Text => write!(out, "{}", r.to_text())?,
                Format::Machine => writeln!(out, "{}", r.to_json())?,
            }
        }
        Command::Validate { input } => {
            let e = input.load()?;
            let checks: Vec<Check> = catalog::validate_entry(&e)?;
            let ok = checks.iter().all(|c| c.passed);
            match input.format {
                Format::Text => {
                    for c in &checks {
                        let status = if c.passed { "pass" } else { "FAIL" };
                        writeln!(out, "{status} {} {}", c.name, c.detail)?;
                    }
                    let failed = checks.iter().filter(|c| !c.passed).count();
                    writeln!(out, "{} checks, {failed} failed", checks.len())?;
                }
                Format::Machine => emit_json(out, &checks)?,
            }
            return Ok(if ok { 0 } else { 2 });
        }
        Command::List { format } => {
            let ids = catalog::list_ids();
            match format {
                Format::Text => {
                    for id in &ids {
                        writeln!(out, "{id}")?;
                    }
                }
                Format::Machine => emit_json(out, &ids)?,
            }
        }
    }
    Ok(0)
}
