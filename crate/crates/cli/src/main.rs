//! `cuspfib`: command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails,
//! 2 for usage or precondition errors.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cuspfib::cuspdual::{self, Triple};
use cuspfib::k3glue::{self, GlueReport, InoseCase, InoseClassification, TableRow};
use cuspfib::milnorfiber::{self, MonodromyReport};
use cuspfib::numcheck::{self, FibrationParams, FibrationReport, NumericalConfig};
use cuspfib::quadlattice::{self, LatticeReport};
use cuspfib::sl2z::{self, HomologyClass, MonodromySummary};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "cuspfib", version, about = "Exact and numerical checks for T_{p,q,r} cusp singularities")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// TOML file with numerical tolerances.
    #[arg(long, global = true, env = numcheck::CONFIG_ENV)]
    tolerance_file: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dual triple, cycles, units and conjugacy certificates.
    Dual(TripleArgs),
    /// The link monodromy A_{p,q,r} and its conjugacy class.
    Monodromy(TripleArgs),
    /// The lattice T(p,q,r) and the monodromy action on the Milnor lattice.
    Lattice(TripleArgs),
    /// Gluing of a dual pair into the K3 lattice.
    K3 {
        /// `p,q,r` (its dual is looked up) or `p,q,r/p',q',r'`.
        #[arg(long)]
        pair: String,
    },
    /// Boundary of a neighbourhood of the Inose fibration's singular fibres.
    Inose {
        /// Quadrant counts `c1,c2,c3,c4`, each 0, 1 or 2.
        #[arg(long)]
        case: String,
        /// Third vanishing curve `m,n`.
        #[arg(long, default_value = "1,-1", allow_hyphen_values = true)]
        gamma: String,
    },
    /// Numerical verification of the Lagrangian Lefschetz fibration.
    VerifyFibration(FibrationArgs),
    /// The strange-duality table with everything recomputed.
    Table,
}

#[derive(Args, Debug)]
struct TripleArgs {
    p: i64,
    q: i64,
    r: i64,
}

#[derive(Args, Debug)]
struct FibrationArgs {
    /// `p,q,r`.
    #[arg(long)]
    pqr: String,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Defaults to the smallest admissible value.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

/// JSON payload of `lattice`.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct LatticeOutput {
    lattice: LatticeReport,
    /// Absent for non-cusp triples.
    milnor: Option<MonodromyReport>,
}

/// A usage or precondition error, reported with exit code 2.
#[derive(Debug)]
struct Usage(anyhow::Error);

fn usage<T, E: Into<anyhow::Error>>(r: std::result::Result<T, E>) -> std::result::Result<T, Usage> {
    r.map_err(|e| Usage(e.into()))
}

fn parse_ints<const N: usize>(text: &str, what: &str) -> Result<[i64; N]> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("{what}: expected {N} comma-separated integers, got {text:?}"))?;
    match <[i64; N]>::try_from(parts) {
        Ok(v) => Ok(v),
        Err(v) => bail!("{what}: expected {N} integers, got {}", v.len()),
    }
}

fn parse_triple(text: &str) -> Result<Triple> {
    let [p, q, r] = parse_ints::<3>(text, "triple")?;
    Ok(Triple::new(p, q, r)?)
}

// A closed stdout (e.g. piped into `head`) is not an error worth reporting.
fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    let out = if json {
        serde_json::to_string(value).expect("reports serialize") + "\n"
    } else {
        text()
    };
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

fn load_config(path: Option<&PathBuf>) -> Result<NumericalConfig> {
    Ok(match path {
        Some(p) => NumericalConfig::load(p)?,
        None => NumericalConfig::default(),
    })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn dual(json: bool, a: &TripleArgs) -> std::result::Result<bool, Usage> {
    let rep = usage(cuspdual::verify_duality(a.p, a.q, a.r))?;
    emit(json, &rep, || {
        let mut s = format!("{} <-> {}{}\n", rep.triple, rep.dual, if rep.self_dual { " (self-dual)" } else { "" });
        for side in [&rep.own, &rep.other] {
            s += &format!(
                "  {}: cusp cycle {}, omega {}, alpha_V {}, module action {} ~ {}\n",
                side.triple, side.cycle, side.omega, side.alpha_v, side.module_action, side.monodromy
            );
        }
        s += &format!("  alpha_V equal: {}\n", rep.alpha_equal);
        if let Some(c) = &rep.inverse_certificate {
            s += &format!("  A ~ A'^-1 via P = {}\n", c.conjugator);
        }
        s += &format!("{}\n", verdict(rep.passed()));
        s
    });
    Ok(rep.passed())
}

fn monodromy(json: bool, a: &TripleArgs) -> std::result::Result<bool, Usage> {
    let rep: MonodromySummary = usage(sl2z::monodromy_summary(a.p, a.q, a.r))?;
    emit(json, &rep, || {
        let mut s = format!("A_{{{},{},{}}} = {}\n  trace {}, {}\n", a.p, a.q, a.r, rep.matrix, rep.trace, rep.class);
        if let Some(w) = &rep.rl_word {
            s += &format!("  RL word {w}\n");
        }
        s
    });
    Ok(true)
}

fn lattice(json: bool, a: &TripleArgs) -> std::result::Result<bool, Usage> {
    let lattice = usage(quadlattice::lattice_report(a.p, a.q, a.r))?;
    let milnor = if Triple::new(a.p, a.q, a.r).is_ok() {
        Some(usage(milnorfiber::monodromy_report(a.p, a.q, a.r))?)
    } else {
        None
    };
    let ok = lattice.passed() && milnor.as_ref().is_none_or(|m| m.is_isometry && m.fixes_fibre);
    let out = LatticeOutput { lattice, milnor };
    emit(json, &out, || {
        let l = &out.lattice;
        let mut s = format!(
            "T({},{},{}): rank {}, discriminant {} (expected {}), signature {}, {:?}\n  Smith factors {:?}\n",
            a.p,
            a.q,
            a.r,
            l.rank,
            l.discriminant,
            l.expected_discriminant,
            l.signature,
            l.parity,
            l.smith_factors.iter().map(ToString::to_string).collect::<Vec<_>>()
        );
        if let Some(m) = &out.milnor {
            s += &format!(
                "  Milnor lattice rank {}: mu* isometry {}, fixes [T^2] {}\n",
                m.labels.len(),
                m.is_isometry,
                m.fixes_fibre
            );
        }
        s += &format!("{}\n", verdict(ok));
        s
    });
    Ok(ok)
}

fn k3(json: bool, pair: &str) -> std::result::Result<bool, Usage> {
    let (a, b) = match pair.split_once('/') {
        Some((x, y)) => (usage(parse_triple(x))?, usage(parse_triple(y))?),
        None => {
            let t = usage(parse_triple(pair))?;
            let row = usage(k3glue::pair_of(&t))?;
            (row.first, row.second)
        }
    };
    let rep: GlueReport = usage(k3glue::glued_lattice(&a, &b))?;
    emit(json, &rep, || {
        format!(
            "{} + {} + H ({} / {})\n  critical points {}, rank {}, signature {}, det {}, {:?}\n  unimodular {}, K3 lattice {}\n  boundaries glue: {}\n{}\n",
            rep.pair.first,
            rep.pair.second,
            rep.pair.labels.0,
            rep.pair.labels.1,
            rep.critical_count,
            rep.rank,
            rep.signature,
            rep.det,
            rep.parity,
            rep.unimodular,
            rep.k3_isomorphic.map_or("n/a".to_string(), |k| k.to_string()),
            rep.boundary_certificate.as_ref().is_some_and(|c| c.verify()),
            verdict(rep.passed())
        )
    });
    Ok(rep.passed())
}

fn inose(json: bool, case: &str, gamma: &str) -> std::result::Result<bool, Usage> {
    let case = usage(InoseCase::new(usage(parse_ints::<4>(case, "case"))?))?;
    let [m, n] = usage(parse_ints::<2>(gamma, "gamma"))?;
    let gamma = usage(HomologyClass::new(m, n))?;
    let rep: InoseClassification = k3glue::classify_inose_boundary_with_gamma(case, gamma);
    let ok = rep.passed();
    emit(json, &rep, || {
        let mut s = format!(
            "case {:?}: monodromy {}, trace {}\n  boundary {}\n",
            rep.case.counts(),
            rep.monodromy,
            rep.trace,
            rep.boundary.as_deref().unwrap_or("none of the table cusps"),
        );
        if let Some(e) = rep.expected {
            s += &format!("  expected {e}\n");
        }
        s += &format!("{}\n", verdict(ok));
        s
    });
    Ok(ok)
}

fn verify_fibration(json: bool, cfg_path: Option<&PathBuf>, a: &FibrationArgs) -> std::result::Result<bool, Usage> {
    let [p, q, r] = usage(parse_ints::<3>(&a.pqr, "pqr"))?;
    let to_u32 = |v: i64| u32::try_from(v).map_err(|_| anyhow::anyhow!("pqr entries must be positive, got {v}"));
    let (p, q, r) = (usage(to_u32(p))?, usage(to_u32(q))?, usage(to_u32(r))?);
    let mut config = usage(load_config(cfg_path))?;
    if let Some(n) = a.samples {
        config.samples = n;
    }
    if let Some(s) = a.seed {
        config.seed = s;
    }
    usage(config.validate())?;
    let params = match a.a {
        Some(value) => usage(FibrationParams::new(p, q, r, value, a.theta, a.t))?,
        None => {
            let base = usage(FibrationParams::minimal(p, q, r, a.t))?;
            usage(FibrationParams::new(p, q, r, base.a, a.theta, a.t))?
        }
    };
    if !params.satisfies_tube_bound() {
        return Err(Usage(anyhow::anyhow!(
            "a = {} does not exceed the required bound {}",
            params.a,
            params.tube_bound()
        )));
    }
    let rep: FibrationReport = usage(numcheck::verify_fibration(&params, &config))?;
    emit(json, &rep, || {
        let c = &rep.critical;
        let mut s = format!(
            "({p},{q},{r}) a = {}, theta = {}, t = {}{}\n",
            params.a,
            params.theta,
            params.t,
            if rep.precision_review { " (flagged for precision review)" } else { "" }
        );
        s += &format!(
            "  critical points {}/{} (residual {:.1e}, rank ratio {:.1e})\n  decoys rejected {}/{}\n",
            c.accepted_count, c.expected_count, c.max_residual, c.max_rank_ratio, rep.decoys_rejected, rep.decoys_total
        );
        if !rep.hessian.is_empty() {
            let worst = rep.hessian.iter().map(|h| h.relative_error).fold(0.0, f64::max);
            let all = rep.hessian.iter().all(|h| h.matches);
            s += &format!("  Hessian model match {all} (max relative error {worst:.1e})\n");
        }
        let sy = &rep.symplectic;
        s += &format!(
            "  symplectic audit: {} samples, {} violations, min margin {:.3e}\n",
            sy.samples,
            sy.violations.len(),
            sy.min_margin
        );
        if let Some(l) = &rep.lagrangian {
            s += &format!("  Lagrangian defect max {:.1e} over {} samples\n", l.max_defect, l.samples);
        }
        if let Some(d) = &rep.domain_y {
            s += &format!("  domain Y audit {}\n", verdict(d.passed()));
        }
        s += &format!("{}\n", verdict(rep.passed()));
        s
    });
    Ok(rep.passed())
}

fn table(json: bool) -> std::result::Result<bool, Usage> {
    let rows: Vec<TableRow> = usage(k3glue::table_report())?;
    let ok = rows.iter().all(TableRow::passed);
    emit(json, &rows, || {
        let mut s = format!(
            "{:<15} {:<11} {:<15} {:<18} {:<8} {}\n",
            "pair", "labels", "cycles", "alpha_V", "A~A'^-1", "count"
        );
        for row in &rows {
            let d = &row.duality;
            s += &format!(
                "{:<15} {:<11} {:<15} {:<18} {:<8} {}\n",
                format!("{}/{}", row.pair.first, row.pair.second),
                format!("{}/{}", row.pair.labels.0, row.pair.labels.1),
                format!("{}/{}", d.own.cycle, d.other.cycle),
                d.own.alpha_v.to_string(),
                d.inverse_certificate.as_ref().is_some_and(|c| c.verify()),
                row.critical_count
            );
        }
        s += &format!("{}\n", verdict(ok));
        s
    });
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Dual(a) => dual(cli.json, a),
        Command::Monodromy(a) => monodromy(cli.json, a),
        Command::Lattice(a) => lattice(cli.json, a),
        Command::K3 { pair } => k3(cli.json, pair),
        Command::Inose { case, gamma } => inose(cli.json, case, gamma),
        Command::VerifyFibration(a) => verify_fibration(cli.json, cli.tolerance_file.as_ref(), a),
        Command::Table => table(cli.json),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
