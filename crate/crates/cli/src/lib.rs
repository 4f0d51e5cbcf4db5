//! The `qknot` command line tool.

pub mod cache;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;
use qknot::ajcheck::{aj_verify, commutative_check, proportional_over_m, resultant_identity, AJReport, Regime};
use qknot::apoly::{a_cable, a_fig8, APoly};
use qknot::jones::{cable_degree_table, fig8_degree_table, jones_unknot, CableParams, DegreeTable, KnotSequence};
use qknot::qtorus::NormalizedOperator;
use qknot::recurrences::{assemble_annihilator, verify, VerifyRow};
use qknot::serialize::to_json;
use qknot::Error;
use serde::Serialize;
use serde_json::json;

use crate::cache::JonesCache;

#[derive(Parser, Debug)]
#[command(name = "qknot", version, about = "Colored Jones recurrences and A-polynomials of figure eight cables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Cache directory for figure eight values; defaults to $QKNOT_CACHE_DIR.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Knot {
    Unknot,
    Fig8,
    Cable,
    /// The auxiliary sequence `T_n` of a cable.
    T,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct CableArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub r: i64,
    #[arg(long)]
    pub s: i64,
}

impl CableArgs {
    fn params(self) -> Result<CableParams, Error> {
        CableParams::new(self.r, self.s)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Colored Jones value at one index.
    Jones {
        #[arg(long, value_enum)]
        knot: Knot,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        #[arg(long)]
        s: Option<i64>,
    },
    /// Computed degrees against the closed forms for n = 1..=n_max.
    Degrees {
        #[arg(long, value_enum, default_value_t = Knot::Fig8)]
        knot: Knot,
        #[arg(long, default_value_t = 8)]
        n_max: i64,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        #[arg(long)]
        s: Option<i64>,
    },
    /// Solved relation and assembled annihilator of a cable.
    Annihilator {
        #[command(flatten)]
        cable: CableArgs,
        /// Check the annihilator on n = 1..=N.
        #[arg(long, default_value_t = 0)]
        verify_n: i64,
    },
    /// A-polynomial with its factors.
    Apoly {
        #[arg(long, value_enum, default_value_t = Knot::Cable)]
        knot: Knot,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        #[arg(long)]
        s: Option<i64>,
    },
    /// Annihilator at t = -1 against the A-polynomial.
    Aj {
        #[command(flatten)]
        cable: CableArgs,
        #[arg(long, default_value_t = 8)]
        verify_n: i64,
    },
    /// Resultant identity for several r at one s, plus the commutative suite.
    ResultantCheck {
        #[arg(long, default_value_t = 3)]
        s: i64,
        #[arg(long = "r", allow_hyphen_values = true, default_values_t = [13, 14])]
        rs: Vec<i64>,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
    },
}

/// Rendered output and the exit code it implies.
pub struct Outcome {
    pub text: String,
    pub json: serde_json::Value,
    pub ok: bool,
}

fn cable_of(r: Option<i64>, s: Option<i64>) -> Result<CableParams, Error> {
    match (r, s) {
        (Some(r), Some(s)) => CableParams::new(r, s),
        _ => Err(Error::Usage("this knot needs --r and --s".into())),
    }
}

fn value_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable value")
}

fn rows_text(rows: &[VerifyRow]) -> String {
    let bad: Vec<i64> = rows.iter().filter(|r| !r.pass).map(|r| r.n).collect();
    let range = match (rows.first(), rows.last()) {
        (Some(a), Some(b)) => format!("n = {}..{}", a.n, b.n),
        _ => "no indices".into(),
    };
    if bad.is_empty() {
        format!("{range}: all pass")
    } else {
        format!("{range}: FAIL at {bad:?}")
    }
}

fn jones(knot: Knot, n: i64, r: Option<i64>, s: Option<i64>) -> Result<Outcome, Error> {
    let v = match knot {
        Knot::Unknot => jones_unknot(n),
        Knot::Fig8 => qknot::jones::fig8().value(n),
        Knot::Cable => KnotSequence::cable(cable_of(r, s)?).value(n),
        Knot::T => KnotSequence::t_seq(cable_of(r, s)?).value(n),
    };
    Ok(Outcome { text: format!("{v}\n"), json: value_json(&v), ok: true })
}

fn table_text(t: &DegreeTable) -> String {
    let mut out = String::from("n\tpredicted\tcomputed\tmatch\n");
    for row in &t.rows {
        let _ = writeln!(
            out,
            "{}\t({}, {})\t({}, {})\t{}",
            row.n,
            row.predicted.0,
            row.predicted.1,
            row.computed.0,
            row.computed.1,
            if row.matches { "yes" } else { "NO" }
        );
    }
    out
}

fn degrees(knot: Knot, n_max: i64, r: Option<i64>, s: Option<i64>) -> Result<Outcome, Error> {
    if n_max < 1 {
        return Err(Error::Usage("--n-max must be at least 1".into()));
    }
    let table = match knot {
        Knot::Fig8 => fig8_degree_table(n_max)?,
        Knot::Cable => cable_degree_table(cable_of(r, s)?, n_max)?,
        _ => return Err(Error::Usage("degrees supports --knot fig8 or cable".into())),
    };
    Ok(Outcome { text: table_text(&table), json: value_json(&table), ok: table.all_match() })
}

fn operator_summary(op: &NormalizedOperator) -> String {
    op.coeffs().map(|(i, c)| format!("L^{i}: {} terms", c.len())).collect::<Vec<_>>().join(", ")
}

fn annihilator(p: CableParams, verify_n: i64) -> Result<Outcome, Error> {
    let ann = assemble_annihilator(p)?;
    let rel = &ann.relation;
    let (rel_rows, r_rows) = if verify_n > 0 {
        let start = if p.s() > 2 { 1 } else { 0 };
        let rr = verify(&rel.q.to_skew(), Some(&rel.rhs()), &*rel.sequence(), start..=verify_n).rows;
        let ar = verify(&ann.r.to_skew(), None, &KnotSequence::cable(p), 1..=verify_n).rows;
        (rr, ar)
    } else {
        (Vec::new(), Vec::new())
    };
    let ok = rel_rows.iter().chain(&r_rows).all(|r| r.pass);
    let mut text = format!("cable {p}\nrelation: rank {}, Q = {}\n", rel.rank, rel.q);
    let _ = writeln!(text, "B = {}", rel.rhs());
    let _ = writeln!(text, "annihilator: L-degree {}, factors [{}]", ann.l_degree, ann.factors.join("] * ["));
    let _ = writeln!(text, "R = {}", ann.r);
    if verify_n > 0 {
        let _ = writeln!(text, "relation check {}", rows_text(&rel_rows));
        let _ = writeln!(text, "annihilator check {}", rows_text(&r_rows));
    }
    let json = json!({
        "params": p,
        "relation": {
            "rank": rel.rank,
            "q": rel.q,
            "b": rel.b,
            "c": rel.c,
            "multiplier": rel.multiplier,
        },
        "annihilator": {
            "l_degree": ann.l_degree,
            "factors": ann.factors,
            "r": ann.r,
        },
        "relation_check": rel_rows,
        "annihilator_check": r_rows,
    });
    Ok(Outcome { text, json, ok })
}

fn apoly_text(a: &APoly) -> String {
    let mut text = format!("A = {}\n", a.poly);
    for (name, f) in &a.factors {
        let _ = writeln!(text, "{name}: {f}");
    }
    text
}

fn apoly(knot: Knot, r: Option<i64>, s: Option<i64>) -> Result<Outcome, Error> {
    let a = match knot {
        Knot::Fig8 => a_fig8(),
        Knot::Cable => a_cable(cable_of(r, s)?)?,
        _ => return Err(Error::Usage("apoly supports --knot fig8 or cable".into())),
    };
    let json = json!({ "provenance": a.provenance, "poly": a.poly, "factors": a.factors });
    Ok(Outcome { text: apoly_text(&a), json, ok: true })
}

pub fn aj_text(rep: &AJReport) -> String {
    let mut text = format!("cable {}\n", rep.params);
    if rep.regime == Regime::OutsideTheorem {
        let _ = writeln!(text, "warning: |r| < 4s lies outside the proven range; results are reported, not covered");
    }
    let _ = writeln!(text, "annihilator: L-degree {}, {} terms ({})", rep.l_degree, rep.annihilator.term_count(), operator_summary(&rep.annihilator));
    let _ = writeln!(text, "factors: [{}]", rep.assembly.join("] * ["));
    let _ = writeln!(text, "empirical check {}", rows_text(&rep.empirical));
    let _ = writeln!(text, "R(t = -1) = {}", rep.t_minus1);
    let _ = writeln!(text, "A = {}", rep.a_poly);
    let _ = writeln!(text, "proportional over Q(M): {}", rep.proportional);
    if let Some(w) = &rep.witness {
        let _ = writeln!(text, "ratio: {w}");
    }
    if let Some(id) = rep.resultant_identity {
        let _ = writeln!(text, "resultant identity: {id}");
    }
    let _ = writeln!(text, "verdict: {}", if rep.verdict { "PASS" } else { "FAIL" });
    text
}

fn aj(p: CableParams, verify_n: i64) -> Result<Outcome, Error> {
    if verify_n < 1 {
        return Err(Error::Usage("--verify-n must be at least 1".into()));
    }
    let rep = aj_verify(p, verify_n)?;
    if rep.regime == Regime::OutsideTheorem {
        warn!("{p} has |r| < 4s; the comparison is outside the proven range");
    }
    let ok = match rep.regime {
        Regime::Proven => rep.verdict,
        Regime::OutsideTheorem => rep.empirical_pass(),
    };
    Ok(Outcome { text: aj_text(&rep), json: value_json(&rep), ok })
}

fn resultant_check(s: i64, rs: &[i64], n_max: usize) -> Result<Outcome, Error> {
    if s < 3 {
        return Err(Error::Usage(format!("resultant-check needs s >= 3, got {s}")));
    }
    let params: Vec<CableParams> = rs.iter().map(|&r| CableParams::new(r, s)).collect::<Result<_, _>>()?;
    let comm = commutative_check(s, n_max)?;
    let mut ids = Vec::new();
    for p in &params {
        ids.push(resultant_identity(*p)?);
    }
    let mut pairwise = Vec::new();
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let pr = proportional_over_m(&ids[i].q_minus1, &ids[j].q_minus1)?;
            pairwise.push((ids[i].params, ids[j].params, pr.proportional));
        }
    }
    let ok = comm.constant
        && comm.distinct_roots
        && ids.iter().all(|id| id.proportionality.proportional && id.t_constant)
        && pairwise.iter().all(|p| p.2);
    let mut text = format!("resultant R(L) = {}\n", comm.resultant);
    let _ = writeln!(text, "R(L) S_(sn) constant for n = 0..{n_max}: {}", comm.constant);
    let _ = writeln!(text, "distinct roots in lambda: {}", comm.distinct_roots);
    for id in &ids {
        let _ = writeln!(
            text,
            "{}: Q(-1) proportional to R: {}; R(L) T_n constant: {}",
            id.params, id.proportionality.proportional, id.t_constant
        );
        for (n, got, closed) in &id.mu_t {
            let _ = writeln!(text, "  mu(T_{n}) = {got} (closed form {closed})");
        }
    }
    for (a, b, pr) in &pairwise {
        let _ = writeln!(text, "{a} ~ {b}: {pr}");
    }
    let _ = writeln!(text, "verdict: {}", if ok { "PASS" } else { "FAIL" });
    let json = json!({
        "s": s,
        "commutative": comm,
        "identities": ids,
        "pairwise": pairwise.iter().map(|(a, b, pr)| json!({"a": a, "b": b, "proportional": pr})).collect::<Vec<_>>(),
        "verdict": ok,
    });
    Ok(Outcome { text, json, ok })
}

pub fn execute(cmd: &Command) -> Result<Outcome, Error> {
    match *cmd {
        Command::Jones { knot, n, r, s } => jones(knot, n, r, s),
        Command::Degrees { knot, n_max, r, s } => degrees(knot, n_max, r, s),
        Command::Annihilator { cable, verify_n } => annihilator(cable.params()?, verify_n),
        Command::Apoly { knot, r, s } => apoly(knot, r, s),
        Command::Aj { cable, verify_n } => aj(cable.params()?, verify_n),
        Command::ResultantCheck { s, ref rs, n_max } => resultant_check(s, rs, n_max),
    }
}

/// Runs the invocation and returns the process exit code.
pub fn dispatch(cli: &Cli) -> i32 {
    let mut cache = JonesCache::configure(cli.cache_dir.clone());
    cache::warm_shared(&mut cache);
    let result = execute(&cli.command);
    cache::persist_shared(&mut cache);
    match result {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => to_json(&out.json) + "\n",
            };
            let written = match &cli.output {
                Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    let mut out = std::io::stdout().lock();
                    match out.write_all(body.as_bytes()).and_then(|_| out.flush()) {
                        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(format!("cannot write output: {e}")),
                        _ => Ok(()),
                    }
                }
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return 1;
            }
            if out.ok {
                0
            } else {
                1
            }
        }
        Err(e @ (Error::Usage(_) | Error::Parse { .. })) => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
