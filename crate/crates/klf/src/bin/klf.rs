//! Command-line front end: thin dispatch onto the library.

use clap::{Args, Parser, Subcommand};
use klf::config::{OutFormat, RunConfig, SumMethod};
use klf::expsum::Session;
use klf::linop::LinOp;
use klf::{fiber, lfunction, linop, polygon, redcoh, trivial, verify};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "klf", version, about = "Exact symmetric-power L-functions of hyper-Kloosterman families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// characteristic (prime)
    #[arg(long)]
    p: Option<u64>,
    /// base field is F_q with q = p^a
    #[arg(long, default_value = "1")]
    a: u32,
    /// number of torus variables
    #[arg(long, default_value = "1")]
    n: u32,
    /// symmetric power (shorthand for --op sym:k)
    #[arg(long)]
    k: Option<u32>,
    /// linear algebra operation, e.g. sym:3, ext:2*sym:1, tensor:2
    #[arg(long)]
    op: Option<String>,
    /// work cap (modeled character evaluations per invocation)
    #[arg(long)]
    cap: Option<u64>,
    /// field size cap for table-backed fields
    #[arg(long)]
    field_cap: Option<u64>,
    /// cache directory (also via KLF_CACHE_DIR)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// output format
    #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
    out: String,
    /// write an SVG plot of the polygons to this path
    #[arg(long)]
    svg: Option<PathBuf>,
    /// complex precision in bits for Weil checks
    #[arg(long, default_value = "128")]
    precision: u32,
    /// cache-key seed
    #[arg(long, default_value = "0")]
    seed: u64,
    /// sum method selection
    #[arg(long, value_parser = ["auto", "naive", "conv"], default_value = "auto")]
    method: String,
    /// additive character twist c (comma-separated coefficients over F_p)
    #[arg(long)]
    twist: Option<String>,
    /// truncation override for the L-series
    #[arg(long)]
    max_degree: Option<usize>,
    /// include wall-clock timings in reports (breaks byte-identical output)
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification pipeline
    Verify(Common),
    /// Assemble the family L-function
    Lfunction(Common),
    /// Fiber polynomial and eigenvalue checks at one parameter value
    Fiber {
        #[command(flatten)]
        common: Common,
        /// fiber parameter t: comma-separated coefficients over F_p
        /// (little-endian, relative to the defining polynomial of F_{p^(a r)})
        #[arg(long)]
        t: String,
    },
    /// Trivial factor A_0 A_inf / B
    Trivial(Common),
    /// Hodge numbers and Hodge polygon
    Hodge(Common),
    /// Reduced-cohomology structure: injectivity, cokernel dims, constant basis
    Redcoh {
        #[command(flatten)]
        common: Common,
        /// print the constant basis
        #[arg(long)]
        basis: bool,
        /// print the graded cokernel dimensions
        #[arg(long)]
        dims: bool,
    },
    /// Scan primes with nonzero obstruction count
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pmax: u64,
    },
    /// Obstruction count d(L, n, p)
    Dk(Common),
}

/// `need_p`: whether the subcommand runs in a fixed characteristic.
/// `default_op`: operation to assume when neither --op nor --k is given.
fn build_config_with(c: &Common, need_p: bool, default_op: Option<&str>) -> Result<RunConfig, String> {
    let p = match (c.p, need_p) {
        (Some(p), _) => p,
        (None, false) => 0, // not applicable (e.g. prime scans)
        (None, true) => return Err("--p is required".into()),
    };
    let op = match (&c.op, c.k) {
        (Some(op), None) => op.clone(),
        (None, Some(k)) => format!("sym:{k}"),
        (None, None) => match default_op {
            Some(d) => d.to_string(),
            None => return Err("one of --op or --k is required".into()),
        },
        (Some(_), Some(_)) => return Err("--op and --k are mutually exclusive".into()),
    };
    let mut cfg = RunConfig::new(p, c.a, c.n, &op);
    if let Some(cap) = c.cap {
        cfg.caps.work_cap = cap;
    }
    if let Some(cap) = c.field_cap {
        cfg.caps.field_size_cap = cap;
    }
    if c.cache_dir.is_some() {
        cfg.cache_dir = c.cache_dir.clone();
    }
    cfg.out = if c.out == "csv" { OutFormat::Csv } else { OutFormat::Json };
    cfg.precision_bits = c.precision;
    cfg.seed = c.seed;
    cfg.method = match c.method.as_str() {
        "naive" => SumMethod::Naive,
        "conv" => SumMethod::Convolution,
        _ => SumMethod::Auto,
    };
    if let Some(tw) = &c.twist {
        let coeffs: Result<Vec<u64>, _> = tw.split(',').map(|x| x.trim().parse()).collect();
        cfg.twist = Some(coeffs.map_err(|_| "bad --twist coefficient list")?);
    }
    Ok(cfg)
}

fn build_config(c: &Common) -> Result<RunConfig, String> {
    build_config_with(c, true, None)
}

fn parse_coeffs(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| format!("bad coefficient {x}")))
        .collect()
}

fn run() -> Result<bool, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(c) => {
            let cfg = build_config(&c)?;
            let rep = verify::cmd_verify(&cfg, c.timings).map_err(|e| e.to_string())?;
            if let (Some(path), Some(asm)) = (&c.svg, &rep.assembly) {
                if let (Some(np), Some(hp)) = (&asm.newton_polygon_l, &asm.hodge_polygon) {
                    std::fs::write(path, polygon::polygons_svg(np, hp)).map_err(|e| e.to_string())?;
                }
            }
            println!("{}", serde_json::to_string_pretty(&rep).map_err(|e| e.to_string())?);
            Ok(rep.all_passed)
        }
        Command::Lfunction(c) => {
            let cfg = build_config(&c)?;
            let sess = Session::from_config(&cfg);
            let op = LinOp::parse(&cfg.op).map_err(|e| e.to_string())?;
            let asm = lfunction::assemble(&sess, cfg.p, cfg.a, cfg.n, &op).map_err(|e| e.to_string())?;
            if let Some(path) = &c.svg {
                if let (Some(np), Some(hp)) = (&asm.newton_polygon_l, &asm.hodge_polygon) {
                    std::fs::write(path, polygon::polygons_svg(np, hp)).map_err(|e| e.to_string())?;
                }
            }
            match cfg.out {
                OutFormat::Json => {
                    let doc = json!({"config": cfg, "assembly": asm});
                    println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?);
                }
                OutFormat::Csv => {
                    println!("m,a_m");
                    for (i, a) in asm.series.coeffs.iter().enumerate() {
                        println!("{i},{a}");
                    }
                }
            }
            Ok(true)
        }
        Command::Fiber { common: c, t } => {
            let cfg = build_config_with(&c, true, Some("sym:1"))?;
            let sess = Session::from_config(&cfg);
            let coeffs = parse_coeffs(&t)?;
            if coeffs.len() as u32 % cfg.a != 0 {
                return Err(format!("length of --t must be a multiple of a = {}", cfg.a));
            }
            let r = (coeffs.len() as u32 / cfg.a).max(1);
            let field = sess.field(cfg.p, cfg.a * r).map_err(|e| e.to_string())?;
            let elem = field.elem(&coeffs).map_err(|e| e.to_string())?;
            let f = fiber::fiber_polynomial(&sess, cfg.p, cfg.a, r, &elem, cfg.n).map_err(|e| e.to_string())?;
            let report = fiber::fiber_checks(&f, cfg.precision_bits, 1e-9).map_err(|e| e.to_string())?;
            let doc = json!({
                "config": cfg,
                "t": coeffs,
                "degree": r,
                "coefficients": f.coeffs,
                "checks": report,
            });
            println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?);
            Ok(report.all_passed())
        }
        Command::Trivial(c) => {
            let cfg = build_config(&c)?;
            let op = LinOp::parse(&cfg.op).map_err(|e| e.to_string())?;
            let k = op.as_pure_sym().ok_or("trivial factors are defined for symmetric powers")?;
            let t = trivial::trivial_factor(cfg.n, k, cfg.q(), cfg.p, &cfg.caps).map_err(|e| e.to_string())?;
            let doc = json!({"config": cfg, "trivial": t});
            println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?);
            Ok(true)
        }
        Command::Hodge(c) => {
            let cfg = build_config_with(&c, false, None)?;
            let op = LinOp::parse(&cfg.op).map_err(|e| e.to_string())?;
            let r = linop::r_poly(&op, cfg.n).map_err(|e| e.to_string())?;
            let h = polygon::hodge_numbers(&r, cfg.n).map_err(|e| e.to_string())?;
            let hp = if h.exact {
                Some(polygon::hodge_polygon(&h).map_err(|e| e.to_string())?)
            } else {
                None
            };
            if let (Some(path), Some(hp)) = (&c.svg, &hp) {
                std::fs::write(path, polygon::polygons_svg(hp, hp)).map_err(|e| e.to_string())?;
            }
            match cfg.out {
                OutFormat::Csv => {
                    if let Some(hp) = &hp {
                        print!("{}", hp.to_csv());
                    } else {
                        println!("inexact");
                    }
                }
                OutFormat::Json => {
                    let doc = json!({"config": cfg, "r_poly": r, "hodge": h, "polygon": hp});
                    println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?);
                }
            }
            Ok(true)
        }
        Command::Redcoh { common: c, basis, dims } => {
            let cfg = build_config(&c)?;
            let sess = Session::from_config(&cfg);
            let op = LinOp::parse(&cfg.op).map_err(|e| e.to_string())?;
            let k = op
                .as_pure_sym()
                .ok_or("reduced cohomology is computed for symmetric powers")?;
            let field = sess.field(cfg.p, cfg.a).map_err(|e| e.to_string())?;
            let sm = redcoh::GradedSymModule::new(field, cfg.n, k);
            let window = cfg.n * k + cfg.n + 1;
            let inj = redcoh::injectivity_report(&sm, window);
            let dims_v = redcoh::coker_dimensions(&sm, window);
            let basis_v = if inj.injective { redcoh::constant_basis(&sm).ok() } else { None };
            let mut doc = json!({
                "config": cfg,
                "injective": inj.injective,
                "kernel_weights": inj.kernel_weights,
            });
            if dims || !basis {
                doc["coker_dims"] = json!(dims_v);
            }
            if basis {
                doc["constant_basis"] = json!(basis_v);
            }
            println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?);
            Ok(true)
        }
        Command::Scan { common: c, pmax } => {
            let cfg = build_config_with(&c, false, None)?;
            let op = LinOp::parse(&cfg.op).map_err(|e| e.to_string())?;
            let entries = linop::scan_primes(&op, cfg.n, pmax, &cfg.caps).map_err(|e| e.to_string())?;
            let doc = json!({"config": cfg, "pmax": pmax, "nonzero": entries});
            println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?);
            Ok(true)
        }
        Command::Dk(c) => {
            let cfg = build_config(&c)?;
            let op = LinOp::parse(&cfg.op).map_err(|e| e.to_string())?;
            let d = linop::d_obstruction_general(&op, cfg.n, cfg.p, &cfg.caps).map_err(|e| e.to_string())?;
            let doc = json!({"config": cfg, "d": d});
            println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
