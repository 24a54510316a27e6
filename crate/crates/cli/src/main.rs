mod output;
mod schema;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use excesslab::enumerate::{bridge_count_general, ExcessTable, Restriction};
use excesslab::expect::{alpha_beta_identity_check, alpha_closed, alpha_exact, expectation_report, DEFAULT_SEAM};
use excesslab::process::monte_carlo;
use excesslab::series::tree_polynomial;
use excesslab::verify::{Level, Suite};
use excesslab::wright::{decompose_w, saddle_tree_polynomial, wright_constants};
use excesslab::{Error, LogF64};

use output::{num, Doc, Format};

#[derive(Parser)]
#[command(name = "excesslab", version, about = "Excess components of the random graph process")]
struct Cli {
    /// Output format; defaults to csv, or json for `expect` and `verify`.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, env = "EXCESSLAB_THREADS", global = true)]
    threads: Option<usize>,

    /// Print the versioned output schema and exit.
    #[arg(long)]
    schema: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Counts c(k, k+l) of connected labelled graphs.
    Table {
        #[arg(long, default_value_t = 10)]
        kmax: usize,
        #[arg(long, default_value_t = 3)]
        lmax: i64,
        /// Add the bridge count c^r(k, k+l+1) with this minimum side excess.
        #[arg(long)]
        bridge_r: Option<i64>,
        /// Restrict only the convolution side instead of both sides.
        #[arg(long, requires = "bridge_r")]
        one_sided: bool,
    },
    /// Wright constants b_l, c_l and d_l.
    Constants {
        #[arg(long, default_value_t = 8)]
        lmax: usize,
    },
    /// Coefficients omega(s) of W_l in powers of 1/(1-T).
    Decompose {
        #[arg(long)]
        ell: i64,
        /// Series order used for the fit (default 3l+2).
        #[arg(long)]
        order: Option<usize>,
    },
    /// Tree polynomial t_{a,n}(y), optionally with its saddle-point estimate.
    Treepoly {
        #[arg(long, default_value_t = 0)]
        a: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        y: u32,
        #[arg(long)]
        saddle: bool,
        /// Offset in y = rho n + beta for the estimate.
        #[arg(long, default_value_t = 0.0, requires = "saddle")]
        beta: f64,
    },
    /// Expected number alpha(l; k) of internal edges added to a set of k vertices.
    Alpha {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: i64,
    },
    /// E[Y], E[Z], E[V] by summation over component orders.
    Expect {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: i64,
        #[arg(long, default_value_t = DEFAULT_SEAM)]
        seam: usize,
    },
    /// Monte Carlo runs of the random graph process.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lmax: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cross-verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        /// Add 1 to the table entry c(K, M) before checking; repeatable.
        #[arg(long, value_name = "K:M", value_parser = parse_corrupt)]
        corrupt: Vec<(usize, usize)>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

fn parse_corrupt(s: &str) -> Result<(usize, usize), String> {
    let (k, m) = s.split_once(':').ok_or("expected K:M")?;
    let k = k.parse().map_err(|_| format!("bad K in {s}"))?;
    let m = m.parse().map_err(|_| format!("bad M in {s}"))?;
    Ok((k, m))
}

enum Failure {
    /// Bad flag value; exit 2.
    Usage { flag: String, reason: String },
    /// Failed checks; the document is still written; exit 1.
    Verify(Doc),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn usage(flag: &str, reason: impl Into<String>) -> Failure {
    Failure::Usage {
        flag: flag.to_string(),
        reason: reason.into(),
    }
}

/// Maps a library error to the flag it came from when there is one.
fn lib(e: Error) -> Failure {
    match e {
        Error::InvalidArgument { name, reason } => {
            let flag = match name {
                "l_max" => "lmax".to_string(),
                "k_max" => "kmax".to_string(),
                "rho" => "y".to_string(),
                "r" => "bridge-r".to_string(),
                other => other.replace('_', "-"),
            };
            usage(&flag, reason)
        }
        e @ Error::Inadmissible(_) => usage("n/k/ell", e.to_string()),
        e => Failure::Other(e.into()),
    }
}

fn table_doc(kmax: usize, lmax: i64, bridge: Option<(i64, Restriction)>) -> Result<Doc, Failure> {
    if kmax < 1 {
        return Err(usage("kmax", "must be at least 1"));
    }
    if lmax < -1 {
        return Err(usage("lmax", "must be at least -1"));
    }
    if let Some((r, _)) = bridge {
        if r < 0 || r > lmax / 2 {
            return Err(usage("bridge-r", format!("must be in 0..={}", lmax.max(0) / 2)));
        }
    }
    let table = ExcessTable::build(kmax, lmax).map_err(lib)?;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for k in 1..=kmax {
        for ell in -1..=lmax {
            let count = table.count(k, ell).to_string();
            let mut row = vec![k.to_string(), ell.to_string(), count.clone()];
            let mut obj = json!({"k": k, "ell": ell, "count": count});
            if let Some((r, restriction)) = bridge {
                let b = if ell >= 0 && r <= ell / 2 {
                    Some(bridge_count_general(&table, k, ell, r, restriction).map_err(lib)?.to_string())
                } else {
                    None
                };
                row.push(b.clone().unwrap_or_default());
                obj["bridge_count"] = json!(b);
            }
            rows.push(row);
            json_rows.push(obj);
        }
    }
    let header = if bridge.is_some() { schema::TABLE_BRIDGE } else { schema::TABLE };
    let bridge_json = bridge.map(|(r, s)| {
        json!({"r": r, "restriction": if s == Restriction::OneSide { "one-side" } else { "both-sides" }})
    });
    Ok(Doc {
        header: header.to_vec(),
        rows,
        json: json!({"kmax": kmax, "lmax": lmax, "bridge": bridge_json, "rows": json_rows}),
    })
}

fn constants_doc(lmax: usize) -> Result<Doc, Failure> {
    if lmax < 1 {
        return Err(usage("lmax", "must be at least 1"));
    }
    let w = wright_constants(lmax).map_err(lib)?;
    let rows: Vec<Vec<String>> = w
        .rows()
        .map(|(l, b, c, d)| vec![l.to_string(), b.to_string(), c.to_string(), d.to_string()])
        .collect();
    let json_rows: Vec<Value> = rows
        .iter()
        .zip(w.rows())
        .map(|(r, (l, _, _, d))| json!({"ell": l, "b": r[1], "c": r[2], "d": d}))
        .collect();
    Ok(Doc {
        header: schema::CONSTANTS.to_vec(),
        rows,
        json: json!({ "rows": json_rows }),
    })
}

fn decompose_doc(ell: i64, order: Option<usize>) -> Result<Doc, Failure> {
    if ell < 1 {
        return Err(usage("ell", "must be at least 1"));
    }
    let min = 3 * ell as usize + 2;
    let order = order.unwrap_or(min);
    if order < min {
        return Err(usage("order", format!("must be at least {min}")));
    }
    let d = decompose_w(ell, order).map_err(lib)?;
    let rows = d
        .s_range()
        .map(|s| vec![ell.to_string(), s.to_string(), d.omega(s).to_string()])
        .collect();
    let omega: Vec<Value> = d
        .s_range()
        .map(|s| json!({"s": s, "omega": d.omega(s).to_string()}))
        .collect();
    Ok(Doc {
        header: schema::DECOMPOSE.to_vec(),
        rows,
        json: json!({
            "ell": ell,
            "order": order,
            "s_min": *d.s_range().start(),
            "omega": omega,
            "b": d.b().to_string(),
            "c": d.c().to_string(),
        }),
    })
}

fn treepoly_doc(a: usize, n: usize, y: u32, saddle: bool, beta: f64) -> Result<Doc, Failure> {
    if n < 1 {
        return Err(usage("n", "must be at least 1"));
    }
    let exact = tree_polynomial(a, n, y).map_err(lib)?;
    let mut row = vec![a.to_string(), n.to_string(), y.to_string(), exact.to_string()];
    let mut obj = json!({"a": a, "n": n, "y": y, "value": exact.to_string()});
    if saddle {
        let rho = (y as f64 - beta) / n as f64;
        if !(rho > 0.0 && rho < 1.0) {
            return Err(usage("y", "saddle estimate needs 0 < (y - beta)/n < 1"));
        }
        let est = saddle_tree_polynomial(a as f64, n, rho, beta).map_err(lib)?;
        let ratio = (est.value.ln_abs() - LogF64::from_biguint(&exact).ln_abs()).exp();
        row.extend([rho.to_string(), est.u0.to_string(), est.value.ln_abs().to_string(), ratio.to_string()]);
        obj["rho"] = json!(rho);
        obj["u0"] = json!(est.u0);
        obj["saddle_ln"] = json!(est.value.ln_abs());
        obj["ratio"] = json!(ratio);
    }
    let header = if saddle { schema::TREEPOLY_SADDLE } else { schema::TREEPOLY };
    Ok(Doc {
        header: header.to_vec(),
        rows: vec![row],
        json: obj,
    })
}

fn alpha_doc(n: usize, k: usize, ell: i64) -> Result<Doc, Failure> {
    if n < 1 {
        return Err(usage("n", "must be at least 1"));
    }
    if k < 1 || k > n {
        return Err(usage("k", format!("must be in 1..={n}")));
    }
    if ell < -1 {
        return Err(usage("ell", "must be at least -1"));
    }
    let table = ExcessTable::build(k, ell).map_err(lib)?;
    let count: &BigUint = table.count(k, ell);
    let exact = alpha_exact(n, k, ell, count).map_err(lib)?;
    let float = alpha_closed::<f64>(n, k, ell, LogF64::from_biguint(count)).map_err(lib)?.to_real();
    let identity = alpha_beta_identity_check(&table, n, k, ell).map_err(lib)?;
    let row = vec![
        n.to_string(),
        k.to_string(),
        ell.to_string(),
        count.to_string(),
        exact.to_string(),
        float.to_string(),
        identity.to_string(),
    ];
    Ok(Doc {
        header: schema::ALPHA.to_vec(),
        rows: vec![row],
        json: json!({
            "n": n, "k": k, "ell": ell, "count": count.to_string(),
            "alpha": exact.to_string(), "alpha_float": float, "identity_holds": identity,
        }),
    })
}

fn expect_doc(n: usize, ell: i64, seam: usize) -> Result<Doc, Failure> {
    if n < 2 {
        return Err(usage("n", "must be at least 2"));
    }
    if ell < 0 {
        return Err(usage("ell", "must be at least 0"));
    }
    let r = expectation_report(n, ell, seam).map_err(lib)?;
    let row = vec![
        r.n.to_string(),
        r.ell.to_string(),
        r.e_y.to_string(),
        num(r.e_z),
        num(r.e_v),
        num(r.v_formula_ratio),
        r.cutoff_used.map(|c| c.to_string()).unwrap_or_default(),
        r.cutoff_flagged.to_string(),
        r.exact_k_ceiling.to_string(),
        serde_json::to_value(r.tail_model).unwrap().as_str().unwrap().to_string(),
    ];
    Ok(Doc {
        header: schema::EXPECT.to_vec(),
        rows: vec![row],
        json: serde_json::to_value(&r).context("serializing report")?,
    })
}

fn simulate_doc(n: usize, lmax: usize, trials: usize, seed: u64) -> Result<Doc, Failure> {
    let mc = monte_carlo(n, lmax, trials, seed).map_err(lib)?;
    let rows = mc
        .per_ell
        .iter()
        .map(|e| {
            vec![
                n.to_string(),
                lmax.to_string(),
                trials.to_string(),
                seed.to_string(),
                mc.edges_mean.to_string(),
                e.ell.to_string(),
                e.v_mean.to_string(),
                e.v_se.to_string(),
                e.x_mean.to_string(),
                e.y_mean.to_string(),
                e.y_se.to_string(),
                e.z_mean.to_string(),
                e.z_se.to_string(),
                e.y_fact2_mean.to_string(),
                e.y_eq1_frac.to_string(),
            ]
        })
        .collect();
    Ok(Doc {
        header: schema::SIMULATE.to_vec(),
        rows,
        json: serde_json::to_value(&mc).context("serializing summary")?,
    })
}

fn verify_doc(level: LevelArg, corrupt: &[(usize, usize)]) -> Result<Doc, Failure> {
    let level = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let mut suite = Suite::new();
    for &(k, m) in corrupt {
        if k < 1 || m + 1 < k {
            return Err(usage("corrupt", format!("{k}:{m} is not a table entry (need M >= K-1)")));
        }
        suite = suite.with_fault(k, m as i64 - k as i64);
    }
    let checks = suite.run(level);
    let failures: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.name.to_string(),
                c.criterion.map(|x| x.to_string()).unwrap_or_default(),
                c.passed.to_string(),
                c.seconds.to_string(),
            ]
        })
        .collect();
    let doc = Doc {
        header: schema::VERIFY.to_vec(),
        rows,
        json: json!({
            "level": level,
            "passed": failures.is_empty(),
            "failures": failures,
            "checks": checks,
        }),
    };
    if failures.is_empty() {
        Ok(doc)
    } else {
        Err(Failure::Verify(doc))
    }
}

fn dispatch(command: &Command) -> Result<Doc, Failure> {
    match *command {
        Command::Table { kmax, lmax, bridge_r, one_sided } => {
            let restriction = if one_sided { Restriction::OneSide } else { Restriction::BothSides };
            table_doc(kmax, lmax, bridge_r.map(|r| (r, restriction)))
        }
        Command::Constants { lmax } => constants_doc(lmax),
        Command::Decompose { ell, order } => decompose_doc(ell, order),
        Command::Treepoly { a, n, y, saddle, beta } => treepoly_doc(a, n, y, saddle, beta),
        Command::Alpha { n, k, ell } => alpha_doc(n, k, ell),
        Command::Expect { n, ell, seam } => expect_doc(n, ell, seam),
        Command::Simulate { n, lmax, trials, seed } => simulate_doc(n, lmax, trials, seed),
        Command::Verify { level, ref corrupt } => verify_doc(level, corrupt),
    }
}

fn default_format(command: &Command) -> Format {
    match command {
        Command::Expect { .. } | Command::Verify { .. } => Format::Json,
        _ => Format::Csv,
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> anyhow::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn usage_exit(flag: &str, reason: &str) -> ExitCode {
    let mut cmd = Cli::command();
    eprintln!("error: invalid value for --{flag}: {reason}\n\n{}", cmd.render_usage());
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprint!("{text}");
            if !text.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(2);
        }
    };
    if cli.schema {
        let text = serde_json::to_string_pretty(&schema::document()).unwrap() + "\n";
        return match emit(&text, cli.output.as_ref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::FAILURE
            }
        };
    }
    let Some(command) = cli.command.as_ref() else {
        let mut cmd = Cli::command();
        eprintln!("error: a subcommand is required\n\n{}", cmd.render_usage());
        return ExitCode::from(2);
    };
    if let Some(t) = cli.threads {
        if t < 1 {
            return usage_exit("threads", "must be at least 1");
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    let format = cli.format.unwrap_or_else(|| default_format(command));
    let (doc, code) = match dispatch(command) {
        Ok(doc) => (doc, ExitCode::SUCCESS),
        Err(Failure::Verify(doc)) => (doc, ExitCode::FAILURE),
        Err(Failure::Usage { flag, reason }) => return usage_exit(&flag, &reason),
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::FAILURE;
        }
    };
    if let Err(e) = emit(&doc.render(format), cli.output.as_ref()) {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    code
}
