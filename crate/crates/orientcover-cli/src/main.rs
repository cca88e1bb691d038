//! Command-line front end: solve augmentation instances, certify results,
//! query the brute-force oracle, orient free graphs, run the
//! integrality-gap experiment, and inspect tight-basis structure.
//!
//! Exit codes: 0 success, 1 usage or malformed input, 2 infeasible
//! instance, 3 size cap exceeded, 4 internal contract violation.

mod format;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use format::{emit_json, parse_instance, parse_result, InstanceFile, ResultFile};
use orientcover::error::Error;
use orientcover::gaplab;
use orientcover::gen;
use orientcover::oracle::{exact_opt, OracleOutcome};
use orientcover::orient::{extract_orientation, orientability_witness};
use orientcover::rat::{fmt_rat, fmt_rat_decimal, Rat};
use orientcover::separation::Lp2System;
use orientcover::setfam::Pocp;
use orientcover::solver::{certify, solve_with_options, Instance, SolveOptions};
use orientcover::uncross::{domination_forest, extract_strongly_crossfree_basis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "orientcover",
    version,
    about = "Minimum-cost orientable augmentation: exact LP rounding, certification, and gap experiments"
)]
struct Cli {
    /// Also render rationals as decimals with this many digits.
    #[arg(long, global = true)]
    decimals: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance by iterative rounding and print the trace.
    Solve {
        instance: PathBuf,
        /// Write the machine-readable result here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Most-violated rows added per separation call.
        #[arg(long, default_value_t = 5)]
        max_violations_per_round: usize,
        /// Print each round's accumulated LP.
        #[arg(long)]
        emit_lp: bool,
        /// Disable the co-partition skip for rooted demands and verify it.
        #[arg(long)]
        audit_copartitions: bool,
    },
    /// Re-verify a result file against its instance.
    Certify { instance: PathBuf, result: PathBuf },
    /// Exact optimum by brute force (desk-scale caps apply).
    Oracle { instance: PathBuf },
    /// Orient the free edges to cover the demand, if possible.
    Orient { instance: PathBuf },
    /// Integrality-gap experiment over a ladder-size range.
    Gap {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Emit machine-readable records instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Tight-basis certificate and domination forest of the first-round
    /// basic solution.
    Analyze { instance: PathBuf },
    /// Generate a random feasible instance.
    Gen {
        /// RNG seed; equal seeds give byte-identical output.
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        nodes: usize,
        #[arg(long, default_value_t = 2)]
        max_k: u32,
        #[arg(long, default_value_t = 10)]
        max_buy: usize,
        /// Restrict to rooted-connectivity demands.
        #[arg(long)]
        kl_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Infeasible(_) => 2,
        Error::CapExceeded { .. } => 3,
        Error::Contract(_) => 4,
        Error::Invalid(_) => 1,
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text)
        .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Error> {
    parse_instance(&read_file(path)?)
}

struct Render {
    decimals: Option<u32>,
}

impl Render {
    fn rat(&self, r: &Rat) -> String {
        match self.decimals {
            None => fmt_rat(r),
            Some(d) => format!("{} ({})", fmt_rat(r), fmt_rat_decimal(r, d)),
        }
    }
}

fn describe_demand(inst: &Instance) -> String {
    match inst.demand() {
        orientcover::demand::Demand::Kl { k, l, root } => {
            format!("rooted connectivity k={k}, l={l} from node {root}")
        }
        orientcover::demand::Demand::Table { values } => {
            format!("tabulated demand on {} sets", values.len())
        }
    }
}

fn describe_family(p: &Pocp) -> String {
    let kind = if p.is_partition() { "partition" } else { "co-partition" };
    let parts: Vec<String> = p
        .parts()
        .iter()
        .map(|s| {
            let nodes: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            format!("{{{}}}", nodes.join(","))
        })
        .collect();
    format!("{kind} {}", parts.join(" "))
}

fn run(cli: Cli) -> Result<u8, Error> {
    let render = Render { decimals: cli.decimals };
    match cli.command {
        Command::Solve {
            instance,
            out,
            max_violations_per_round,
            emit_lp,
            audit_copartitions,
        } => {
            let inst = load_instance(&instance)?;
            let opts = SolveOptions {
                max_violations_per_round,
                audit_copartitions,
                capture_lp: emit_lp,
            };
            let res = solve_with_options(&inst, &opts)?;
            println!(
                "instance: {} nodes, {} free edges, {} purchasable",
                inst.n(),
                inst.free_edges().len(),
                inst.buy_edges().len()
            );
            println!("demand: {}", describe_demand(&inst));
            for (i, round) in res.rounds.iter().enumerate() {
                println!(
                    "round {}: {} variables, objective {}, dropped {}, fixed {}{}",
                    i + 1,
                    round.active.len(),
                    render.rat(&round.objective),
                    round.dropped.len(),
                    round.fixed.len(),
                    round
                        .max_value
                        .as_ref()
                        .map(|m| format!(", peak {}", render.rat(m)))
                        .unwrap_or_default()
                );
                if let Some(dump) = &round.lp_dump {
                    print!("{dump}");
                }
            }
            println!("chosen edges:");
            for &i in &res.chosen {
                let (u, v) = inst.buy_edges()[i];
                println!("  [{i}] ({u},{v}) cost {}", render.rat(&inst.costs()[i]));
            }
            println!("total cost: {}", render.rat(&res.total_cost));
            println!("LP lower bound: {}", render.rat(&res.lp_lower_bound));
            println!("guarantee: cost at most 6 times the bound");
            println!("orientation:");
            let arcs: Vec<String> = res
                .orientation
                .arcs
                .iter()
                .map(|(a, b)| format!("{a}->{b}"))
                .collect();
            println!("  {}", arcs.join(" "));
            if let Some(path) = out {
                write_file(&path, &emit_json(&ResultFile::from_result(&res)))?;
                println!("result written to {}", path.display());
            }
            Ok(0)
        }
        Command::Certify { instance, result } => {
            let inst = load_instance(&instance)?;
            let res = parse_result(&read_file(&result)?)?;
            let report = certify(&inst, &res);
            for check in &report.checks {
                println!(
                    "{} {}{}",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.name,
                    if check.detail.is_empty() {
                        String::new()
                    } else {
                        format!(" ({})", check.detail)
                    }
                );
            }
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Oracle { instance } => {
            let inst = load_instance(&instance)?;
            match exact_opt(&inst, None)? {
                OracleOutcome::Feasible { cost, chosen } => {
                    println!("exact optimum: {}", render.rat(&cost));
                    let edges: Vec<String> = chosen
                        .iter()
                        .map(|&i| {
                            let (u, v) = inst.buy_edges()[i];
                            format!("[{i}] ({u},{v})")
                        })
                        .collect();
                    println!(
                        "optimal purchase: {}",
                        if edges.is_empty() { "nothing".into() } else { edges.join(" ") }
                    );
                    Ok(0)
                }
                OracleOutcome::Infeasible => Err(Error::Infeasible(
                    "no purchase set makes the graph orientable for the demand".into(),
                )),
            }
        }
        Command::Orient { instance } => {
            let inst = load_instance(&instance)?;
            let free = inst.free_graph();
            if let Some(witness) = orientability_witness(&free, inst.demand(), inst.root())? {
                return Err(Error::Infeasible(format!(
                    "free edges cannot cover the demand; violated by {}",
                    describe_family(&witness)
                )));
            }
            let o = extract_orientation(&free, inst.demand(), inst.root())?;
            println!("orientation of the free edges:");
            let arcs: Vec<String> = o.arcs.iter().map(|(a, b)| format!("{a}->{b}")).collect();
            println!("  {}", arcs.join(" "));
            Ok(0)
        }
        Command::Gap { n_min, n_max, k, json } => {
            let rows = gaplab::gap_report(n_min, n_max, k)?;
            if json {
                #[derive(Serialize)]
                struct Row {
                    n: usize,
                    k: u32,
                    lp_value: String,
                    integral_value: String,
                    ratio: String,
                }
                let rendered: Vec<Row> = rows
                    .iter()
                    .map(|r| Row {
                        n: r.n,
                        k: r.k,
                        lp_value: fmt_rat(&r.lp_value),
                        integral_value: fmt_rat(&r.integral_value),
                        ratio: fmt_rat(&r.ratio),
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rendered).unwrap());
            } else {
                println!("{:>4} {:>4} {:>12} {:>10} {:>8}", "n", "k", "lp-value", "integral", "ratio");
                for r in &rows {
                    println!(
                        "{:>4} {:>4} {:>12} {:>10} {:>8}",
                        r.n,
                        r.k,
                        fmt_rat(&r.lp_value),
                        fmt_rat(&r.integral_value),
                        fmt_rat(&r.ratio)
                    );
                }
            }
            Ok(0)
        }
        Command::Analyze { instance } => {
            let inst = load_instance(&instance)?;
            let opts = SolveOptions::default();
            let res = solve_with_options(&inst, &opts)?;
            let Some(round) = res.rounds.first() else {
                println!("nothing purchasable: no LP round to analyze");
                return Ok(0);
            };
            println!("first-round basic solution:");
            for (slot, &i) in round.active.iter().enumerate() {
                let (u, v) = inst.buy_edges()[i];
                println!("  x[({u},{v})] = {}", render.rat(&round.x[slot]));
            }
            let var_edges: Vec<(usize, usize)> = round
                .active
                .iter()
                .map(|&i| inst.buy_edges()[i])
                .collect();
            let sys = Lp2System::new(
                inst.n(),
                inst.root(),
                inst.free_graph(),
                var_edges,
                inst.demand().clone(),
            )?;
            let family = extract_strongly_crossfree_basis(&round.x, &sys)?;
            println!("tight-space dimension: {}", family.tight_dimension);
            println!("certificate family ({} members):", family.members.len());
            for (i, m) in family.members.iter().enumerate() {
                println!("  #{i} {}", describe_family(m));
            }
            let forest = domination_forest(&family.members, inst.n())?;
            println!("domination forest:");
            for (i, parent) in forest.parent.iter().enumerate() {
                match parent {
                    None => println!("  #{i}: root"),
                    Some(p) => println!("  #{i}: child of #{p}"),
                }
            }
            Ok(0)
        }
        Command::Gen { seed, nodes, max_k, max_buy, kl_only, out } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let params = gen::InstanceParams {
                n: nodes,
                free_p: 0.35,
                max_buy,
                max_k,
                table_demands: !kl_only,
            };
            let inst = gen::random_feasible_instance(&mut rng, &params);
            let text = emit_json(&InstanceFile::from_instance(&inst));
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    println!("instance written to {}", path.display());
                }
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}
