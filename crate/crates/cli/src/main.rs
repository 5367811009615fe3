use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cuspidal::arith::{truncation_set, SemigroupPair};
use cuspidal::equivariant::ObservedHomology;
use cuspidal::homology::{homology, HomologyOptions};
use cuspidal::ktheory::fp_square_orders;
use cuspidal::picard::{canonical_cd, image_congruence_cp, lambda_weights, psi_kernel, VirtualRep};
use cuspidal::simplicial::{build_truncated, build_x, fixed_subcomplex};
use cuspidal_cli::output::{self, Format, Table};
use cuspidal_cli::suites::{self, pair};
use cuspidal_cli::{Cache, CliError, CliResult, VerifyReport, CACHE_ENV};

#[derive(Parser)]
#[command(name = "cuspidal", version, about = "Exact computations for the cuspidal curves k[x, y]/(x^b - y^a)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory for cached results.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Do not read or write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Report wall time.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args, Clone, Copy)]
struct PairArgs {
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
}

#[derive(Args, Clone, Copy)]
struct MRange {
    /// A single m.
    #[arg(long, conflicts_with_all = ["m_max", "m_min"])]
    m: Option<u64>,
    #[arg(long)]
    m_min: Option<u64>,
    #[arg(long)]
    m_max: Option<u64>,
}

impl MRange {
    fn values(&self, default_max: u64) -> CliResult<Vec<u64>> {
        if let Some(m) = self.m {
            if m == 0 {
                return Err(CliError::Config("m must be positive".into()));
            }
            return Ok(vec![m]);
        }
        let lo = self.m_min.unwrap_or(1).max(1);
        let hi = self.m_max.unwrap_or(default_max);
        if lo > hi {
            return Err(CliError::Config(format!("empty range {lo}..={hi}")));
        }
        Ok((lo..=hi).collect())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Membership, ℓ(a, b, m) and representation counts.
    Semigroup {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        m_max: Option<u64>,
        /// Also print S(a, b, r).
        #[arg(long)]
        r: Option<u64>,
        /// Also print the set M_i.
        #[arg(long)]
        i: Option<u64>,
    },
    /// Homology with rotation action of one complex.
    Homology {
        #[arg(long, value_enum, default_value_t = Kind::Sigma)]
        kind: Kind,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        s: Option<u64>,
    },
    /// Verification suites; exit code 1 if any case fails.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Same as `verify compare`.
    Compare(CompareArgs),
    /// K-group table: rank of K_2i, order of K_{2i-1} and its factorization.
    Kgroups {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1)]
        i_min: u64,
        #[arg(long, default_value_t = 5)]
        i_max: u64,
        /// Cross-check the valuation identity at every prime p <= abi.
        #[arg(long)]
        crosscheck: bool,
    },
    /// The weights of λ(a, b, m).
    Lambda {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        m: u64,
    },
    /// Dimension-function kernel and image for cyclic groups.
    Picard {
        #[command(subcommand)]
        op: PicardOp,
    },
    /// Cardinalities of S(a, b, r) and its quotients, and the cokernel exponent.
    FpOrders {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 0)]
        r_min: u64,
        #[arg(long, default_value_t = 5)]
        r_max: u64,
        #[arg(long)]
        prime: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Sigma,
    X,
    Truncated,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[command(flatten)]
    range: MRange,
    /// Restrict to the levels of one prime.
    #[arg(long)]
    prime: Option<u64>,
}

#[derive(Subcommand)]
enum Suite {
    /// Homology of Σ(a, b, m) against the four-case prediction.
    Sigma {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        range: MRange,
    },
    /// Homology of X_{s,a} against the prediction.
    Truncated {
        #[arg(long)]
        a: u64,
        #[arg(long, conflicts_with_all = ["s_max", "s_min"])]
        s: Option<u64>,
        #[arg(long)]
        s_min: Option<u64>,
        #[arg(long)]
        s_max: Option<u64>,
    },
    /// X(a, b, m') against Y_β at every fixed-point level, plus the small-complex oracle.
    Compare(CompareArgs),
    /// Valuation identity and product identities.
    Kgroups {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1)]
        i_min: u64,
        #[arg(long, default_value_t = 25)]
        i_max: u64,
    },
    /// Kernel and image claims for the dimension-function map.
    Picard {
        #[arg(long, default_value_t = 32)]
        m_max: u64,
        /// Primes for the parity check of the C_p image.
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5, 7, 11])]
        primes: Vec<u64>,
    },
}

#[derive(Subcommand)]
enum PicardOp {
    /// Lattice basis of the kernel on RO(C_m).
    Kernel {
        #[arg(long)]
        m: u64,
    },
    /// Parity description of the image for C_p.
    Image {
        #[arg(long)]
        p: u64,
    },
}

struct Ctx {
    format: Format,
    cache: Cache,
    jobs: usize,
    timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        format: cli.global.format,
        cache: match (&cli.global.cache_dir, cli.global.no_cache) {
            (Some(d), false) => Cache::at(d),
            _ => Cache::disabled(),
        },
        jobs: cli
            .global
            .jobs
            .map(|j| j as usize)
            .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
        timing: cli.global.timing,
    };
    let start = Instant::now();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = run(cli.command, &ctx, &mut out, start);
    let _ = out.flush();
    if ctx.timing {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("cuspidal: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// `Ok(false)` means a verification failure.
fn run(cmd: Command, ctx: &Ctx, out: &mut dyn Write, start: Instant) -> CliResult<bool> {
    match cmd {
        Command::Semigroup { pair: p, m_max, r, i } => {
            let sg = pair(p.a, p.b)?;
            semigroup(sg, m_max.unwrap_or(2 * sg.ab()), r, i, ctx, out)?;
            Ok(true)
        }
        Command::Homology { kind, a, b, m, s } => {
            homology_cmd(kind, a, b, m, s, ctx, out)?;
            Ok(true)
        }
        Command::Verify { suite } => verify(suite, ctx, out, start),
        Command::Compare(args) => verify(Suite::Compare(args), ctx, out, start),
        Command::Kgroups { pair: p, i_min, i_max, crosscheck } => {
            let sg = pair(p.a, p.b)?;
            if i_min > i_max {
                return Err(CliError::Config(format!("empty range {i_min}..={i_max}")));
            }
            kgroups(sg, i_min, i_max, ctx, out)?;
            if crosscheck {
                let report = kgroups_suite(sg, i_min.max(1), i_max, ctx)?;
                if !report.passed() {
                    output::verify_report(&mut std::io::stderr(), &report, Format::Text)?;
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Command::Lambda { pair: p, m } => {
            let sg = pair(p.a, p.b)?;
            if m == 0 {
                return Err(CliError::Config("m must be positive".into()));
            }
            let (c, d) = canonical_cd(sg);
            let w = lambda_weights(sg, m)?;
            let rep = VirtualRep::from_weights(m, &w)?;
            match ctx.format {
                Format::Json => output::json(
                    out,
                    &json!({"a": sg.a(), "b": sg.b(), "m": m, "c": c, "d": d, "ell": sg.ell(m as i64), "weights": w, "representation": rep}),
                )?,
                f => {
                    let mut t = Table::new(&["j", "weight"]);
                    for (j, x) in w.iter().enumerate() {
                        t.push(vec![(j + 1).to_string(), x.to_string()]);
                    }
                    t.write(out, f)?;
                }
            }
            Ok(true)
        }
        Command::Picard { op } => picard(op, ctx, out),
        Command::FpOrders { pair: p, r_min, r_max, prime } => {
            let sg = pair(p.a, p.b)?;
            if r_min > r_max {
                return Err(CliError::Config(format!("empty range {r_min}..={r_max}")));
            }
            let rows = (r_min..=r_max)
                .map(|r| fp_square_orders(sg, r, prime))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Config(e.to_string()))?;
            match ctx.format {
                Format::Json => output::json(out, &rows)?,
                f => {
                    let mut t = Table::new(&["r", "S", "S/a", "S/b", "S/ab", "exponent"]);
                    for x in &rows {
                        t.push(vec![
                            x.r.to_string(),
                            x.s.to_string(),
                            x.s_a.to_string(),
                            x.s_b.to_string(),
                            x.s_ab.to_string(),
                            x.exponent.to_string(),
                        ]);
                    }
                    t.write(out, f)?;
                }
            }
            Ok(true)
        }
    }
}

fn semigroup(sg: SemigroupPair, m_max: u64, r: Option<u64>, i: Option<u64>, ctx: &Ctx, out: &mut dyn Write) -> CliResult<()> {
    let rows: Vec<_> = (0..=m_max)
        .map(|m| (m, sg.contains(m as i64), sg.ell(m as i64), sg.reps_nonneg(m as i64)))
        .collect();
    let trunc = r.map(|r| truncation_set(sg, r));
    let mset = i.map(|i| sg.m_set(i)).transpose()?;
    match ctx.format {
        Format::Json => output::json(
            out,
            &json!({
                "a": sg.a(),
                "b": sg.b(),
                "gaps": sg.gaps(),
                "rows": rows.iter().map(|(m, s, l, n)| json!({"m": m, "in_semigroup": s, "ell": l, "reps": n})).collect::<Vec<_>>(),
                "truncation_set": trunc.as_ref().map(|t| json!({"r": r, "elements": t.elements()})),
                "m_set": mset.as_ref().map(|s| json!({"i": i, "elements": s})),
            }),
        )?,
        f => {
            if f == Format::Text {
                writeln!(out, "S = <{}, {}>, {} gaps", sg.a(), sg.b(), sg.gaps())?;
                if let (Some(r), Some(t)) = (r, &trunc) {
                    writeln!(out, "S({}, {}, {r}) = {:?}", sg.a(), sg.b(), t.elements())?;
                }
                if let (Some(i), Some(s)) = (i, &mset) {
                    writeln!(out, "M_{i} = {s:?}")?;
                }
            }
            let mut t = Table::new(&["m", "in_semigroup", "ell", "reps"]);
            for (m, s, l, n) in rows {
                t.push(vec![m.to_string(), s.to_string(), l.to_string(), n.to_string()]);
            }
            t.write(out, f)?;
        }
    }
    Ok(())
}

fn homology_cmd(kind: Kind, a: u64, b: Option<u64>, m: Option<u64>, s: Option<u64>, ctx: &Ctx, out: &mut dyn Write) -> CliResult<()> {
    let need = |x: Option<u64>, name: &str| x.ok_or_else(|| CliError::Config(format!("--{name} is required for this kind")));
    let (label, params) = match kind {
        Kind::Truncated => {
            let s = need(s, "s")?;
            (format!("X_{{{s},{a}}}"), json!({"kind": "truncated", "a": a, "s": s}))
        }
        Kind::Sigma | Kind::X => {
            let (b, m) = (need(b, "b")?, need(m, "m")?);
            pair(a, b)?;
            if m == 0 {
                return Err(CliError::Config("m must be positive".into()));
            }
            let name = if matches!(kind, Kind::Sigma) { "Σ" } else { "X" };
            (
                format!("{name}({a}, {b}, {m})"),
                json!({"kind": if matches!(kind, Kind::Sigma) { "sigma" } else { "x" }, "a": a, "b": b, "m": m}),
            )
        }
    };
    let compute = || -> cuspidal::Result<(Vec<usize>, ObservedHomology)> {
        let c = match kind {
            Kind::Sigma => fixed_subcomplex(pair_unchecked(a, b), m.unwrap_or(0), 1)?.complex,
            Kind::X => build_x(pair_unchecked(a, b), m.unwrap_or(0))?,
            Kind::Truncated => build_truncated(a, s.unwrap_or(0))?,
        };
        let h = homology(&c, HomologyOptions::with_action())?;
        Ok((c.dims(), ObservedHomology::from_homology(&h, 0)))
    };
    let (cells, h) = match ctx.cache.get::<(Vec<usize>, ObservedHomology)>("homology", &params) {
        Some(v) => v,
        None => {
            let v = compute().map_err(|e| match e {
                cuspidal::Error::InvalidParameter(_) | cuspidal::Error::OutOfRegime(_) | cuspidal::Error::InvalidPair { .. } => {
                    CliError::Config(e.to_string())
                }
                e => CliError::Core(e),
            })?;
            let _ = ctx.cache.put("homology", &params, &v);
            v
        }
    };
    match ctx.format {
        Format::Json => output::json(out, &json!({"complex": label, "cells": cells, "homology": h}))?,
        f => {
            if f == Format::Text {
                writeln!(out, "{label}: cells per degree {cells:?}")?;
            }
            let mut t = Table::new(&["degree", "rank", "torsion", "tau"]);
            for d in &h.degrees {
                t.push(vec![
                    d.degree.to_string(),
                    d.rank.to_string(),
                    d.torsion.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                    d.tau.as_ref().map(|m| format!("{m:?}")).unwrap_or_default(),
                ]);
            }
            t.write(out, f)?;
        }
    }
    Ok(())
}

fn pair_unchecked(a: u64, b: Option<u64>) -> SemigroupPair {
    SemigroupPair::new(a, b.unwrap_or(0)).expect("validated above")
}

fn kgroups(sg: SemigroupPair, i_min: u64, i_max: u64, ctx: &Ctx, out: &mut dyn Write) -> CliResult<()> {
    let rows = suites::kgroup_rows(sg, i_min, i_max)?;
    match ctx.format {
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "a": r.a, "b": r.b, "i": r.i,
                        "even_rank": r.even_rank,
                        "odd_order": r.odd_order.as_ref().map(|x| x.to_string()),
                        "factorization": r.factorization_string(),
                        "odd_order_factored": r.odd_order_factored,
                    })
                })
                .collect();
            output::json(out, &v)?;
        }
        f => {
            let mut t = Table::new(&["i", "even_rank", "odd_order", "factorization"]);
            for r in &rows {
                t.push(vec![
                    r.i.to_string(),
                    r.even_rank.to_string(),
                    r.odd_order.as_ref().map(|x| x.to_string()).unwrap_or_default(),
                    if r.i == 0 { String::new() } else { r.factorization_string() },
                ]);
            }
            t.write(out, f)?;
        }
    }
    Ok(())
}

fn kgroups_suite(sg: SemigroupPair, i_min: u64, i_max: u64, ctx: &Ctx) -> CliResult<VerifyReport> {
    let is: Vec<u64> = (i_min..=i_max).collect();
    let cases = suites::run_parallel(ctx.jobs, &is, |&i| suites::kgroup_case(&ctx.cache, sg, i))?;
    Ok(suites::report("kgroups", cases))
}

fn verify(suite: Suite, ctx: &Ctx, out: &mut dyn Write, start: Instant) -> CliResult<bool> {
    let mut report = match suite {
        Suite::Sigma { pair: p, range } => {
            let sg = pair(p.a, p.b)?;
            let ms = range.values(if (p.a, p.b) == (2, 3) { 28 } else { 24 })?;
            let cases = suites::run_parallel(ctx.jobs, &ms, |&m| suites::sigma_case(&ctx.cache, sg, m))?;
            suites::report("sigma", cases)
        }
        Suite::Truncated { a, s, s_min, s_max } => {
            if a < 2 {
                return Err(CliError::Config("a must be at least 2".into()));
            }
            let ss = MRange { m: s, m_min: s_min, m_max: s_max }.values(25)?;
            let cases = suites::run_parallel(ctx.jobs, &ss, |&s| suites::truncated_case(&ctx.cache, a, s))?;
            suites::report("truncated", cases)
        }
        Suite::Compare(args) => {
            let sg = pair(args.pair.a, args.pair.b)?;
            if let Some(p) = args.prime {
                if !cuspidal::arith::is_prime(p) {
                    return Err(CliError::Config(format!("{p} is not prime")));
                }
            }
            let ms = args.range.values(18)?;
            let cases = suites::run_parallel(ctx.jobs, &ms, |&m| suites::compare_case(&ctx.cache, sg, m, args.prime))?;
            suites::report("compare", cases)
        }
        Suite::Kgroups { pair: p, i_min, i_max } => {
            let sg = pair(p.a, p.b)?;
            if i_min == 0 || i_min > i_max {
                return Err(CliError::Config(format!("need 1 <= i_min <= i_max, got {i_min}..={i_max}")));
            }
            kgroups_suite(sg, i_min, i_max, ctx)?
        }
        Suite::Picard { m_max, primes } => suites::report("picard", suites::picard_cases(m_max, &primes)),
    };
    if ctx.timing {
        report.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    output::verify_report(out, &report, ctx.format)?;
    Ok(report.passed())
}

fn picard(op: PicardOp, ctx: &Ctx, out: &mut dyn Write) -> CliResult<bool> {
    match op {
        PicardOp::Kernel { m } => {
            if m < 2 {
                return Err(CliError::Config("m must be at least 2".into()));
            }
            let k = psi_kernel(m)?;
            match ctx.format {
                Format::Json => output::json(out, &json!({"m": m, "rank": k.len(), "basis": k}))?,
                f => {
                    let mut t = Table::new(&["generator", "trivial", "sign", "planes"]);
                    for (j, r) in k.iter().enumerate() {
                        let planes: Vec<String> = r.weights.iter().map(|(nu, n)| format!("{n}·C({nu})")).collect();
                        t.push(vec![(j + 1).to_string(), r.trivial.to_string(), r.sign.to_string(), planes.join(" ")]);
                    }
                    t.write(out, f)?;
                }
            }
            Ok(true)
        }
        PicardOp::Image { p } => {
            let ok = image_congruence_cp(p).map_err(|e| CliError::Config(e.to_string()))?;
            match ctx.format {
                Format::Json => output::json(out, &json!({"p": p, "parity_lattice": ok}))?,
                _ => writeln!(out, "C_{p}: image is {{x ≡ y mod 2}}: {ok}")?,
            }
            Ok(ok)
        }
    }
}
