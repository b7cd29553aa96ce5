//! Command-line front end.
//!
//! Every result is printed as `key=value`, one fact per line, so output can
//! be grepped and diffed. Exit codes: 0 on success, 1 on a domain error
//! (reported on stderr with an `error:` prefix), 2 on a usage error.
//! `CYCLOID_MAX_AREA` overrides the size caps on net construction, the graph
//! cycle search and the isomorphism oracle.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cycles::{
    self, min_cycle, min_cycle_coregular, min_cycle_direct, min_cycle_enumerated,
    min_cycle_reduced, min_cycle_regular, shortest_graph_cycle_with_cap, CycleWitness,
};
use crate::error::{CycloidError, Result};
use crate::lattice::{CycloidParams, Point};
use crate::net::{self, CycloidNet};
use crate::rng::SplitMix64;
use crate::semantics::Marking;
use crate::transforms::{
    are_isomorphic_by_closure, net_isomorphic, shear, symmetric_params, IsoOptions,
    ShearDirection,
};

#[derive(Parser)]
#[command(
    name = "cycloid",
    version,
    about = "Construct and analyse cycloid nets",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Area, minimal cycle, divisibility flags and parallelogram corners
    Info {
        alpha: i64,
        beta: i64,
        gamma: i64,
        delta: i64,
    },
    /// Export the built net
    Net {
        alpha: i64,
        beta: i64,
        gamma: i64,
        delta: i64,
        #[arg(long, value_enum)]
        format: NetFormat,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether two points fold onto the same transition
    Equiv {
        alpha: i64,
        beta: i64,
        gamma: i64,
        delta: i64,
        /// X1 Y1 X2 Y2; negative values go after `--`
        #[arg(last = true, num_args = 4, allow_hyphen_values = true, required = true)]
        coords: Vec<i64>,
    },
    /// Canonical representative of a point
    Canonical {
        alpha: i64,
        beta: i64,
        gamma: i64,
        delta: i64,
        /// X Y; negative values go after `--`
        #[arg(last = true, num_args = 2, allow_hyphen_values = true, required = true)]
        coords: Vec<i64>,
    },
    /// Minimal cycle length
    Cyc {
        alpha: i64,
        beta: i64,
        gamma: i64,
        delta: i64,
        #[arg(long, value_enum, default_value_t = CycMethod::Formula)]
        method: CycMethod,
    },
    /// Isomorphism between two parameter tuples:
    /// iso A1 B1 G1 D1 -- A2 B2 G2 D2 [--steps N] [--oracle]
    Iso {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, required = true)]
        rest: Vec<String>,
    },
    /// Fire random enabled transitions and print the trace
    Sim {
        alpha: i64,
        beta: i64,
        gamma: i64,
        delta: i64,
        /// Initial marking, e.g. "F:0,0,B:3,2"
        #[arg(long)]
        marking: String,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sweep all parameter tuples in [1,N]^4 against every invariant
    Verify {
        #[arg(long)]
        max: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NetFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CycMethod {
    Formula,
    Lattice,
    Graph,
    All,
}

/// Parses and runs one invocation; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Info {
            alpha,
            beta,
            gamma,
            delta,
        } => cmd_info(CycloidParams::new(alpha, beta, gamma, delta)?),
        Command::Net {
            alpha,
            beta,
            gamma,
            delta,
            format,
            out,
        } => cmd_net(CycloidParams::new(alpha, beta, gamma, delta)?, format, out),
        Command::Equiv {
            alpha,
            beta,
            gamma,
            delta,
            coords,
        } => cmd_equiv(CycloidParams::new(alpha, beta, gamma, delta)?, &coords),
        Command::Canonical {
            alpha,
            beta,
            gamma,
            delta,
            coords,
        } => cmd_canonical(CycloidParams::new(alpha, beta, gamma, delta)?, &coords),
        Command::Cyc {
            alpha,
            beta,
            gamma,
            delta,
            method,
        } => cmd_cyc(CycloidParams::new(alpha, beta, gamma, delta)?, method),
        Command::Iso { rest } => cmd_iso(&rest),
        Command::Sim {
            alpha,
            beta,
            gamma,
            delta,
            marking,
            steps,
            seed,
        } => cmd_sim(
            CycloidParams::new(alpha, beta, gamma, delta)?,
            &marking,
            steps,
            seed,
        ),
        Command::Verify { max } => cmd_verify(max),
    }
}

fn env_cap(name: &'static str) -> Result<Option<i64>> {
    match std::env::var(name) {
        Ok(value) => value
            .trim()
            .parse::<i64>()
            .map(Some)
            .map_err(|_| CycloidError::InvalidEnv { name, value }),
        Err(_) => Ok(None),
    }
}

fn build_cap() -> Result<i64> {
    Ok(env_cap("CYCLOID_MAX_AREA")?.unwrap_or(net::DEFAULT_AREA_CAP))
}

fn graph_cap() -> Result<i64> {
    Ok(env_cap("CYCLOID_MAX_AREA")?.unwrap_or(cycles::DEFAULT_GRAPH_SEARCH_CAP))
}

fn oracle_options() -> Result<IsoOptions> {
    let mut opts = IsoOptions::default();
    if let Some(cap) = env_cap("CYCLOID_MAX_AREA")? {
        opts.max_area = cap;
    }
    Ok(opts)
}

fn print_witness(w: &CycleWitness) {
    println!("witness_i={}", w.i);
    println!("witness_j={}", w.j);
    println!("witness_u={}", w.u);
    println!("witness_v={}", w.v);
}

fn cmd_info(params: CycloidParams) -> Result<i32> {
    let (a, b, g, d) = params.as_tuple();
    println!("params={a},{b},{g},{d}");
    println!("area={}", params.area());
    println!("regular={}", params.is_regular());
    println!("co_regular={}", params.is_coregular());
    let w = min_cycle(&params)?;
    println!("cyc={}", w.length());
    print_witness(&w);
    let c = params.corners();
    println!("corner_o={},{}", c.o.xi, c.o.eta);
    println!("corner_p={},{}", c.p.xi, c.p.eta);
    println!("corner_r={},{}", c.r.xi, c.r.eta);
    println!("corner_q={},{}", c.q.xi, c.q.eta);
    Ok(0)
}

fn cmd_net(params: CycloidParams, format: NetFormat, out: Option<PathBuf>) -> Result<i32> {
    let net = CycloidNet::build_with_cap(&params, build_cap()?)?;
    let text = match format {
        NetFormat::Dot => net.to_dot(),
        NetFormat::Json => net.to_json(),
    };
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_equiv(params: CycloidParams, coords: &[i64]) -> Result<i32> {
    let x1 = Point::new(coords[0], coords[1]);
    let x2 = Point::new(coords[2], coords[3]);
    match params.equivalence_witness(x1, x2) {
        Some(w) => {
            println!("equivalent=true");
            println!("m={}", w.m);
            println!("n={}", w.n);
        }
        None => println!("equivalent=false"),
    }
    Ok(0)
}

fn cmd_canonical(params: CycloidParams, coords: &[i64]) -> Result<i32> {
    let c = params.canonical(Point::new(coords[0], coords[1]));
    println!("canonical={},{}", c.xi, c.eta);
    Ok(0)
}

fn cmd_cyc(params: CycloidParams, method: CycMethod) -> Result<i32> {
    match method {
        CycMethod::Formula => {
            let w = min_cycle(&params)?;
            println!("cyc={}", w.length());
            println!("method=formula");
            print_witness(&w);
        }
        CycMethod::Lattice => {
            let w = min_cycle_enumerated(&params);
            println!("cyc={}", w.length());
            println!("method=lattice");
            print_witness(&w);
        }
        CycMethod::Graph => {
            let net = CycloidNet::build_with_cap(&params, build_cap()?)?;
            let found = shortest_graph_cycle_with_cap(&net, graph_cap()?)?;
            println!("cyc={}", found.length);
            println!("method=graph");
            let steps: Vec<String> = found.cycle.iter().map(|t| t.to_string()).collect();
            println!("cycle={}", steps.join(" "));
        }
        CycMethod::All => {
            let formula = min_cycle(&params)?;
            let lattice = min_cycle_enumerated(&params);
            let net = CycloidNet::build_with_cap(&params, build_cap()?)?;
            let graph = shortest_graph_cycle_with_cap(&net, graph_cap()?)?;
            if formula.length() != lattice.length() || formula.length() != graph.length {
                return Err(CycloidError::MethodDisagreement(format!(
                    "{params}: formula={} lattice={} graph={} (formula witness (i,j)=({},{}), \
                     lattice witness (i,j)=({},{}))",
                    formula.length(),
                    lattice.length(),
                    graph.length,
                    formula.i,
                    formula.j,
                    lattice.i,
                    lattice.j,
                )));
            }
            println!("cyc={}", formula.length());
            println!("formula={}", formula.length());
            println!("lattice={}", lattice.length());
            println!("graph={}", graph.length);
            println!("agreement=ok");
            print_witness(&formula);
        }
    }
    Ok(0)
}

struct IsoArgs {
    left: CycloidParams,
    right: CycloidParams,
    steps: u32,
    oracle: bool,
}

fn parse_iso_args(rest: &[String]) -> std::result::Result<IsoArgs, String> {
    let mut numbers: Vec<i64> = Vec::new();
    let mut steps: u32 = 32;
    let mut oracle = false;
    let mut it = rest.iter();
    while let Some(tok) = it.next() {
        match tok.as_str() {
            "--" => {}
            "--oracle" => oracle = true,
            "--steps" => {
                let value = it.next().ok_or("--steps needs a value")?;
                steps = value
                    .parse()
                    .map_err(|_| format!("invalid --steps value '{value}'"))?;
            }
            other => {
                let n: i64 = other
                    .parse()
                    .map_err(|_| format!("unexpected argument '{other}'"))?;
                numbers.push(n);
            }
        }
    }
    if numbers.len() != 8 {
        return Err(format!(
            "expected 8 parameters (A1 B1 G1 D1 -- A2 B2 G2 D2), got {}",
            numbers.len()
        ));
    }
    let left = CycloidParams::new(numbers[0], numbers[1], numbers[2], numbers[3])
        .map_err(|e| e.to_string())?;
    let right = CycloidParams::new(numbers[4], numbers[5], numbers[6], numbers[7])
        .map_err(|e| e.to_string())?;
    Ok(IsoArgs {
        left,
        right,
        steps,
        oracle,
    })
}

fn cmd_iso(rest: &[String]) -> Result<i32> {
    let args = match parse_iso_args(rest) {
        Ok(args) => args,
        Err(msg) => {
            eprintln!("error: {msg}");
            return Ok(2);
        }
    };
    println!("left={}", args.left);
    println!("right={}", args.right);
    println!("area_left={}", args.left.area());
    println!("area_right={}", args.right.area());
    println!(
        "isomorphic_by_closure={}",
        are_isomorphic_by_closure(&args.left, &args.right, args.steps)
    );
    if args.oracle {
        let opts = oracle_options()?;
        let cap = opts.max_area.min(build_cap()?);
        let n1 = CycloidNet::build_with_cap(&args.left, cap)?;
        let n2 = CycloidNet::build_with_cap(&args.right, cap)?;
        println!("net_isomorphic={}", net_isomorphic(&n1, &n2, &opts)?);
    }
    Ok(0)
}

fn cmd_sim(params: CycloidParams, marking: &str, steps: u64, seed: u64) -> Result<i32> {
    let net = CycloidNet::build_with_cap(&params, build_cap()?)?;
    let mut current = Marking::parse(&net, marking)?;
    let (a, b, g, d) = params.as_tuple();
    println!("params={a},{b},{g},{d}");
    println!("initial_marking={current}");
    let mut rng = SplitMix64::new(seed);
    let mut executed = 0u64;
    for step in 1..=steps {
        let enabled = net.enabled_set(&current);
        if enabled.is_empty() {
            println!("deadlock=true");
            break;
        }
        let t = enabled[rng.below(enabled.len() as u64) as usize];
        current = net.fire(&current, t)?;
        println!("step={step} fired={t} marking={current}");
        executed += 1;
    }
    println!("steps_executed={executed}");
    Ok(0)
}

fn cmd_verify(max: i64) -> Result<i32> {
    if max < 1 {
        return Err(CycloidError::NonPositiveParam {
            name: "max",
            value: max,
        });
    }
    let build_cap = build_cap()?;
    let graph_cap = graph_cap()?;
    println!("verify_max={max}");
    let mut checked = 0u64;
    let mut violations = 0u64;
    let report = |line: String, violations: &mut u64| {
        println!("violation={line}");
        *violations += 1;
    };
    for a in 1..=max {
        for b in 1..=max {
            for g in 1..=max {
                for d in 1..=max {
                    let params = CycloidParams::new(a, b, g, d)?;
                    checked += 1;
                    let net = CycloidNet::build_with_cap(&params, build_cap)?;
                    for v in net.validate() {
                        report(format!("{params}: {v}"), &mut violations);
                    }
                    let reduced = min_cycle_reduced(&params);
                    let enumerated = min_cycle_enumerated(&params);
                    let graph = shortest_graph_cycle_with_cap(&net, graph_cap)?;
                    if reduced.length() != enumerated.length()
                        || reduced.length() != graph.length
                    {
                        report(
                            format!(
                                "{params}: cycle methods disagree formula={} lattice={} graph={}",
                                reduced.length(),
                                enumerated.length(),
                                graph.length
                            ),
                            &mut violations,
                        );
                    }
                    if reduced.length() > params.area() {
                        report(
                            format!("{params}: cyc {} exceeds area", reduced.length()),
                            &mut violations,
                        );
                    }
                    for (name, form) in [
                        ("direct", min_cycle_direct(&params)),
                        ("regular", min_cycle_regular(&params)),
                        ("co-regular", min_cycle_coregular(&params)),
                    ] {
                        if let Some(l) = form {
                            if l != reduced.length() {
                                report(
                                    format!(
                                        "{params}: {name} closed form {l} != general {}",
                                        reduced.length()
                                    ),
                                    &mut violations,
                                );
                            }
                        }
                    }
                    let sym = symmetric_params(&params);
                    if min_cycle_reduced(&sym).length() != reduced.length() {
                        report(
                            format!("{params}: symmetric tuple has different cyc"),
                            &mut violations,
                        );
                    }
                    for dir in [ShearDirection::ReduceGamma, ShearDirection::ReduceDelta] {
                        if let Ok(q) = shear(&params, dir) {
                            if q.area() != params.area() {
                                report(
                                    format!("{params}: shear to {q} changed the area"),
                                    &mut violations,
                                );
                            }
                            if min_cycle_reduced(&q).length() != reduced.length() {
                                report(
                                    format!("{params}: shear to {q} changed cyc"),
                                    &mut violations,
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    println!("params_checked={checked}");
    println!("violations={violations}");
    println!("result={}", if violations == 0 { "ok" } else { "fail" });
    Ok(if violations == 0 { 0 } else { 1 })
}
