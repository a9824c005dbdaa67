//! Command-line front end: pack streams, verify packings, evaluate weight
//! functions, run the bound engine and build the counter-example inputs.
//!
//! Exit codes: 0 success, 1 a validation or assertion failed (the failing
//! rule is printed), 2 usage errors (from argument parsing).

use clap::{Args, Parser, Subcommand};
use ehpack::adversary::{self, Which};
use ehpack::files;
use ehpack::ip;
use ehpack::packer::PackerState;
use ehpack::params::{self, ParameterSet, Variant};
use ehpack::rat::{to_decimal_string, BigRat};
use ehpack::weights;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ehpack", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dump or validate parameter sets.
    Params(ParamsArgs),
    /// Pack an item stream online.
    Pack(PackArgs),
    /// Verify a packing file geometrically and against its stats footer.
    Verify(VerifyArgs),
    /// Per-case weight totals of an item stream.
    Weigh(WeighArgs),
    /// Solve the per-case bound programs.
    Analyze(AnalyzeArgs),
    /// Build, evaluate and simulate the counter-example inputs.
    Adversary(AdversaryArgs),
}

#[derive(Args)]
struct ParamsArgs {
    /// Print a built-in set (`paper2`, `paper3`, `prior2`, `appendix2`).
    #[arg(long)]
    dump: Option<String>,
    /// Which reading of the two inconsistent beta rows to use.
    #[arg(long, default_value = "as-printed")]
    variant: String,
    /// Validate a parameter file.
    #[arg(long)]
    validate: Option<PathBuf>,
}

#[derive(Args)]
struct PackArgs {
    #[arg(long)]
    dim: u32,
    /// Built-in name or parameter file path.
    #[arg(long)]
    params: String,
    #[arg(long, default_value = "as-printed")]
    variant: String,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the stats block to its own file.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    packing: PathBuf,
    /// Parameter source when the packing's label is not a built-in.
    #[arg(long)]
    params: Option<String>,
}

#[derive(Args)]
struct WeighArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long, default_value = "paper2")]
    params: String,
    #[arg(long, default_value = "as-printed")]
    variant: String,
    /// `1..=17` or `all`.
    #[arg(long, default_value = "all")]
    case: String,
    #[arg(long)]
    input: PathBuf,
    /// Print exact rationals instead of 15-digit decimals.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long, default_value = "all")]
    case: String,
    #[arg(long, default_value = "as-printed")]
    variant: String,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, default_value_t = u64::MAX)]
    budget_nodes: u64,
    /// `table` or `csv`.
    #[arg(long, default_value = "table")]
    emit: String,
    /// Check the validity of the two extra square-packing rows instead.
    #[arg(long)]
    validate_cuts: bool,
}

#[derive(Args)]
struct AdversaryArgs {
    /// `p1`, `p2`, or `generic`.
    #[arg(long)]
    which: String,
    #[arg(long, default_value_t = 2)]
    dim: u32,
    /// Multiple of the minimal admissible scale.
    #[arg(long, default_value_t = 1)]
    scale: u64,
    /// `report` (analytic vs simulated) or `stream` (emit the items).
    #[arg(long, default_value = "report")]
    emit: String,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    match s {
        "as-printed" => Ok(Variant::AsPrinted),
        "corrected" => Ok(Variant::Corrected),
        other => Err(format!("unknown variant `{other}`")),
    }
}

fn load_set(name: &str, variant: &str) -> Result<ParameterSet, String> {
    let v = parse_variant(variant)?;
    params::resolve_params(name, v).map_err(|e| e.to_string())
}

fn dec(x: &BigRat, exact: bool) -> String {
    if exact {
        format!("{}/{}", x.numer(), x.denom())
    } else {
        to_decimal_string(x, 15)
    }
}

fn run() -> Result<(), String> {
    match Cli::parse().cmd {
        Cmd::Params(a) => {
            if let Some(name) = a.dump {
                let p = load_set(&name, &a.variant)?;
                print!("{}", params::params_to_string(&p));
                let viol = params::validate(&p);
                for v in &viol {
                    eprintln!("# note: {}", v);
                }
                return Ok(());
            }
            if let Some(path) = a.validate {
                let p = params::load_params(&path).map_err(|e| e.to_string())?;
                let viol = params::validate(&p);
                if viol.is_empty() {
                    println!("ok: {} types, d={}, M={}", p.n(), p.d(), p.m());
                    return Ok(());
                }
                for v in &viol {
                    println!("{}", v);
                }
                return Err(format!("{} violations", viol.len()));
            }
            Err("nothing to do: pass --dump or --validate".into())
        }
        Cmd::Pack(a) => {
            let p = load_set(&a.params, &a.variant)?;
            if p.d() != a.dim {
                return Err(format!(
                    "parameter set is {}-dimensional, --dim {} given",
                    p.d(),
                    a.dim
                ));
            }
            let sizes = files::read_stream_file(&a.input).map_err(|e| e.to_string())?;
            let mut st = PackerState::new(p, a.output.is_some());
            let stats = st.pack_stream(sizes).map_err(|e| e.to_string())?;
            println!(
                "packed {} items into {} bins (q={}, e={})",
                stats.n.iter().sum::<u64>() + stats.small_count,
                stats.total_bins,
                stats.q,
                stats.e_idx
            );
            if let Some(out) = a.output {
                let mut w = std::io::BufWriter::new(
                    std::fs::File::create(&out).map_err(|e| e.to_string())?,
                );
                files::write_packing(&mut w, &st, &stats).map_err(|e| e.to_string())?;
            }
            if let Some(path) = a.stats {
                let mut w = std::io::BufWriter::new(
                    std::fs::File::create(&path).map_err(|e| e.to_string())?,
                );
                files::StatsBlock::from_stats(&stats)
                    .write(&mut w)
                    .map_err(|e| e.to_string())?;
            }
            Ok(())
        }
        Cmd::Verify(a) => {
            let parsed = files::read_packing_file(&a.packing).map_err(|e| e.to_string())?;
            match parsed.verify_all() {
                Ok(()) => println!("geometry ok: {} bins", parsed.bins.len()),
                Err((bin, v)) => return Err(format!("bin {}: {}", bin, v)),
            }
            let pset = match &a.params {
                Some(name) => Some(load_set(name, "as-printed")?),
                None => match parsed.label.as_str() {
                    "paper2-as-printed" => Some(load_set("paper2", "as-printed")?),
                    "paper2-corrected" => Some(load_set("paper2", "corrected")?),
                    "paper3-as-printed" => Some(load_set("paper3", "as-printed")?),
                    "paper3-corrected" => Some(load_set("paper3", "corrected")?),
                    "prior2" => Some(load_set("prior2", "as-printed")?),
                    "appendix2" => Some(load_set("appendix2", "as-printed")?),
                    _ => None,
                },
            };
            match (pset, &parsed.stats) {
                (Some(p), Some(footer)) => {
                    let derived = parsed.derive_stats(&p);
                    match derived.diff(footer) {
                        None => println!("stats footer ok"),
                        Some(d) => return Err(format!("stats mismatch: {}", d)),
                    }
                }
                (None, Some(_)) => {
                    println!("stats footer present but parameters unknown; skipped")
                }
                _ => println!("no stats footer"),
            }
            Ok(())
        }
        Cmd::Weigh(a) => {
            let p = load_set(&a.params, &a.variant)?;
            if p.d() != a.dim {
                return Err("dimension mismatch".into());
            }
            let sizes = files::read_stream_file(&a.input).map_err(|e| e.to_string())?;
            let cases: Vec<u32> = if a.case == "all" {
                (1..=17).collect()
            } else {
                vec![a.case.parse().map_err(|_| "bad case id")?]
            };
            // classify once, weigh per case
            let mut st = PackerState::new(p.clone(), false);
            let stats = st.pack_stream(sizes).map_err(|e| e.to_string())?;
            println!("case total");
            for c in cases {
                let v = weights::case_vector(c, &p).map_err(|e| e.to_string())?;
                let total = weights::case_total(&v, &stats.n, &stats.small_volume);
                println!("{} {}", c, dec(&total, a.exact));
            }
            Ok(())
        }
        Cmd::Analyze(a) => {
            let name = match a.dim {
                2 => "paper2",
                3 => "paper3",
                d => return Err(format!("unsupported dimension {d}")),
            };
            let p = load_set(name, &a.variant)?;
            if a.validate_cuts {
                let rep = ip::validate_extra_cuts(&p).map_err(|e| e.to_string())?;
                println!(
                    "profiles={} sampled={} sample_violations={} excluded_profiles={}",
                    rep.profiles_checked,
                    rep.samples_checked,
                    rep.sample_violations,
                    rep.excluded_hits.len()
                );
                return if rep.ok {
                    println!("cut rows valid outside the geometrically excluded contents");
                    Ok(())
                } else {
                    Err("cut validation found an unexplained violation".into())
                };
            }
            let cases: Vec<u32> = if a.case == "all" {
                (1..=17).collect()
            } else {
                vec![a.case.parse().map_err(|_| "bad case id")?]
            };
            let res = ip::overall_bound(&p, &cases, a.tol, a.budget_nodes)
                .map_err(|e| e.to_string())?;
            if a.emit == "csv" {
                println!("case,bound,incumbent,gap,nodes,seconds");
                for r in &res.per_case {
                    println!(
                        "{},{:.16},{:.16},{:.3e},{},{:.3}",
                        r.case_id, r.upper_bound, r.incumbent_obj_f, r.gap, r.nodes, r.seconds
                    );
                }
            } else {
                println!(
                    "{:>4} {:>20} {:>20} {:>10} {:>9} {:>8}  flags",
                    "case", "bound", "incumbent", "gap", "nodes", "seconds"
                );
                for r in &res.per_case {
                    println!(
                        "{:>4} {:>20.16} {:>20.16} {:>10.3e} {:>9} {:>8.3}  {}",
                        r.case_id,
                        r.upper_bound,
                        r.incumbent_obj_f,
                        r.gap,
                        r.nodes,
                        r.seconds,
                        if r.budget_exhausted { "budget" } else { "" }
                    );
                }
            }
            println!(
                "overall {:.16} (case {}){}",
                res.max_bound,
                res.max_case,
                if res.any_budget_exhausted {
                    " [budget exhausted on some case]"
                } else {
                    ""
                }
            );
            Ok(())
        }
        Cmd::Adversary(a) => match a.which.as_str() {
            "p1" | "p2" => {
                let which = if a.which == "p1" { Which::P1 } else { Which::P2 };
                if a.emit == "stream" {
                    let input = adversary::build(which, a.scale);
                    let stdout = std::io::stdout();
                    let mut w = std::io::BufWriter::new(stdout.lock());
                    use std::io::Write;
                    for b in &input.batches {
                        if b.role == adversary::BatchRole::Dust {
                            writeln!(
                                w,
                                "# dust: total volume {} of side {} items omitted",
                                dec(&input.dust_total(), false),
                                b.size
                            )
                            .map_err(|e| e.to_string())?;
                            continue;
                        }
                        writeln!(w, "# {}", b.label).map_err(|e| e.to_string())?;
                        let count = b.count(input.m, input.n);
                        for _ in 0..count {
                            writeln!(w, "{}/{}", b.size.numer(), b.size.denom())
                                .map_err(|e| e.to_string())?;
                        }
                    }
                    return Ok(());
                }
                let analytic = adversary::analytic_cost(which);
                println!(
                    "analytic: ratio {} (total/M {}, opt/M {})",
                    dec(&analytic.ratio, false),
                    dec(&analytic.total_per_m, false),
                    dec(&analytic.opt_per_m, false)
                );
                let sim = adversary::simulate(which, a.scale);
                println!(
                    "simulated at M={}: ratio {} / gap {:.3e} / packed bins {} + dust {}",
                    sim.m,
                    dec(&sim.measured_ratio, false),
                    sim.gap,
                    sim.packed_bins,
                    dec(&sim.dust_bins, false)
                );
                println!("per-batch bins:");
                for (label, bins) in &sim.per_batch_bins {
                    println!("  {:<24} {}", label, bins);
                }
                println!(
                    "open acceptors after conversion batch: {}",
                    sim.acceptors_after_conversions
                );
                println!(
                    "red-open leftovers: {:?} (dominant type {:?})",
                    sim.red_open_leftover, sim.dominant_red_open
                );
                Ok(())
            }
            "generic" => {
                let bound = adversary::generic_lower_bound(a.dim);
                println!("generic lower bound d={}: {}", a.dim, dec(&bound, false));
                if a.dim >= 2 && a.dim <= 3 {
                    let p = load_set(if a.dim == 2 { "paper2" } else { "paper3" }, "as-printed")?;
                    let g = adversary::generic_adversary(&p).map_err(|e| e.to_string())?;
                    println!(
                        "streams per N: {:?} + small volume {}, and {:?} + small volume {}",
                        g.stream1,
                        dec(&g.stream1_small_volume, false),
                        g.stream2,
                        dec(&g.stream2_small_volume, false)
                    );
                    println!(
                        "types: 1/3+e -> {} (red fraction {}), 2/3-e -> {}, eps = {}",
                        g.type_third,
                        dec(&g.red_fraction, false),
                        g.type_two_thirds,
                        g.eps
                    );
                    assert_eq!(g.combined, bound);
                    println!("averaging step reproduces the formula exactly");
                }
                Ok(())
            }
            other => Err(format!("unknown input `{other}`")),
        },
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
