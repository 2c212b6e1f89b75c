//! Command-line front end: `simulate`, `bench`, `packet` and `keygen`
//! subcommands, all thin wrappers over the library modules.
//!
//! Exit status: 0 on success (and successful verification), 1 when `packet
//! verify` finds a bad signature, 2 for usage and validation errors.

use crate::auth;
use crate::bench::{emit_csv, emit_table, run_bench};
use crate::crypto::{derive_key, dh_shared, keypair_from_secret, DhParams, SigningKey};
use crate::geo::Position;
use crate::sim::{self, RunMetrics, Scenario};
use crate::wire::{self, Command as WireCommand, GpsrPacket};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use std::io::Read;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "sgpsr",
    version,
    about = "Secured greedy perimeter stateless routing: simulator, cipher benchmark and packet tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file and write a metrics CSV
    Simulate(SimulateArgs),
    /// Time AES-128 against Blowfish across message sizes
    Bench(BenchArgs),
    /// Encode, decode, sign and verify packets
    Packet {
        #[command(subcommand)]
        cmd: PacketCmd,
    },
    /// Diffie-Hellman key tooling: derive publics, complete exchanges
    Keygen(KeygenArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario file (flat `key = value` format)
    config: PathBuf,
    /// Metrics CSV destination; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
    /// Sweep one key over several values: `--sweep key=v1,v2,...`
    /// (repeatable; runs the cartesian product)
    #[arg(long)]
    sweep: Vec<String>,
    /// Override the scenario seed
    #[arg(long)]
    seed: Option<u64>,
    /// Write the per-event trace log here (single runs only)
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Parallel sweep workers
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Message sizes in bytes (multiples of 8)
    #[arg(long, value_delimiter = ',', default_values_t = vec![128usize, 256, 512])]
    sizes: Vec<usize>,
    /// Timed iterations per grid cell
    #[arg(long, default_value_t = 10_000)]
    iterations: u32,
    /// CSV destination; the human-readable table always prints to stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Append the per-cipher key-setup rows to the CSV
    #[arg(long)]
    include_setup: bool,
}

#[derive(Subcommand)]
enum PacketCmd {
    /// Build a packet from `key = value` field lines; prints hex
    Encode {
        /// Field description file; stdin when omitted
        input: Option<PathBuf>,
    },
    /// Parse a hex packet; prints the fields as `key = value` lines
    Decode {
        /// Hex file; stdin when omitted
        input: Option<PathBuf>,
    },
    /// Sign a hex packet; prints the tag and the signed packet hex
    Sign {
        /// Pairwise key as 32 hex chars
        #[arg(long)]
        key: String,
        input: Option<PathBuf>,
    },
    /// Verify a hex packet's signature; exit 0 when valid, 1 when not
    Verify {
        /// Pairwise key as 32 hex chars
        #[arg(long)]
        key: String,
        input: Option<PathBuf>,
    },
}

#[derive(Args)]
struct KeygenArgs {
    /// Named group: modp2048 (default), modp1536, test256, demo23
    #[arg(long, default_value = "modp2048", conflicts_with_all = ["p_hex", "w_hex"])]
    group: String,
    /// Explicit prime modulus (hex)
    #[arg(long, requires = "w_hex")]
    p_hex: Option<String>,
    /// Explicit generator (hex)
    #[arg(long, requires = "p_hex")]
    w_hex: Option<String>,
    /// Secret exponent (decimal, or hex with 0x prefix); random when omitted
    #[arg(long)]
    secret: Option<String>,
    /// Peer public value (hex): complete the exchange and derive the key
    #[arg(long)]
    peer: Option<String>,
    /// Seed for the random secret draw
    #[arg(long)]
    seed: Option<u64>,
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with status 0 and usage
            // errors on stderr with status 2.
            e.exit();
        }
    };
    match cli.command {
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::Bench(args) => cmd_bench(args),
        Cmd::Packet { cmd } => cmd_packet(cmd),
        Cmd::Keygen(args) => cmd_keygen(args),
    }
}

fn fail(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    2
}

fn cmd_simulate(args: SimulateArgs) -> i32 {
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => return fail(format_args!("cannot read {}: {e}", args.config.display())),
    };

    // Expand `--sweep key=v1,v2` flags into the cartesian product of
    // override sets.
    let mut axes: Vec<(String, Vec<String>)> = Vec::new();
    for sweep in &args.sweep {
        let Some((key, values)) = sweep.split_once('=') else {
            return fail(format_args!("--sweep wants key=v1,v2,..., got `{sweep}`"));
        };
        let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
        if values.is_empty() || values.iter().any(|v| v.is_empty()) {
            return fail(format_args!("--sweep `{sweep}` has empty values"));
        }
        axes.push((key.trim().to_string(), values));
    }
    let mut points: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for (key, values) in &axes {
        let mut next = Vec::new();
        for point in &points {
            for value in values {
                let mut p = point.clone();
                p.push((key.clone(), value.clone()));
                next.push(p);
            }
        }
        points = next;
    }
    if points.len() > 1 && args.trace.is_some() {
        return fail("--trace is for single runs; sweeps do not write traces");
    }

    // Parse every sweep point up front so validation failures surface
    // before any run starts.
    let mut scenarios: Vec<(String, Scenario)> = Vec::new();
    for point in &points {
        let mut overrides = point.clone();
        if let Some(seed) = args.seed {
            overrides.push(("seed".into(), seed.to_string()));
        }
        let label = point
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        match Scenario::parse_with_overrides(&text, &overrides) {
            Ok(sc) => scenarios.push((label, sc)),
            Err(e) => return fail(format_args!("{}: {e}", args.config.display())),
        }
    }

    let jobs = args.jobs.max(1);
    let results: Vec<Result<RunMetrics, sim::ScenarioError>> = if jobs == 1 || scenarios.len() == 1
    {
        scenarios.iter().map(|(_, sc)| sim::run(sc)).collect()
    } else {
        // Independent runs; parallelism cannot change any result.
        let mut results: Vec<Option<Result<RunMetrics, sim::ScenarioError>>> =
            (0..scenarios.len()).map(|_| None).collect();
        let next = std::sync::atomic::AtomicUsize::new(0);
        let results_mutex = std::sync::Mutex::new(&mut results);
        std::thread::scope(|scope| {
            for _ in 0..jobs.min(scenarios.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= scenarios.len() {
                        break;
                    }
                    let outcome = sim::run(&scenarios[i].1);
                    results_mutex.lock().unwrap()[i] = Some(outcome);
                });
            }
        });
        results
            .into_iter()
            .map(|r| r.expect("all runs done"))
            .collect()
    };

    let mut csv = format!("scenario,{}\n", RunMetrics::CSV_HEADER);
    for ((label, _), outcome) in scenarios.iter().zip(results) {
        match outcome {
            Ok(metrics) => {
                csv.push_str(&format!("{label},{}\n", metrics.to_csv_row()));
            }
            Err(e) => return fail(format_args!("run `{label}` failed: {e}")),
        }
    }

    if let Some(trace_path) = &args.trace {
        // Single run, re-executed with tracing; determinism makes this the
        // same run.
        let (_, trace) = sim::run_with_trace(&scenarios[0].1).expect("validated above");
        if let Err(e) = std::fs::write(trace_path, trace) {
            return fail(format_args!("cannot write {}: {e}", trace_path.display()));
        }
    }

    match &args.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, csv) {
                return fail(format_args!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{csv}"),
    }
    0
}

fn cmd_bench(args: BenchArgs) -> i32 {
    let report = match run_bench(&args.sizes, args.iterations) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    print!("{}", emit_table(&report));
    if let Some(path) = &args.output {
        if let Err(e) = std::fs::write(path, emit_csv(&report, args.include_setup)) {
            return fail(format_args!("cannot write {}: {e}", path.display()));
        }
    }
    0
}

fn read_input(path: Option<&Path>) -> Result<String, String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))
        }
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("cannot read stdin: {e}"))?;
            Ok(buf)
        }
    }
}

fn parse_hex_packet(text: &str) -> Result<GpsrPacket, String> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bytes = hex::decode(&cleaned).map_err(|e| format!("malformed hex: {e}"))?;
    wire::decode(&bytes).map_err(|e| e.to_string())
}

fn parse_key(key: &str) -> Result<SigningKey, String> {
    SigningKey::from_hex(key).ok_or_else(|| format!("key must be 32 hex chars, got `{key}`"))
}

/// Field-description format accepted by `packet encode`; `packet decode`
/// emits exactly this shape, so the two commands round-trip.
fn packet_from_fields(text: &str) -> Result<GpsrPacket, String> {
    let mut pkt = GpsrPacket::new(WireCommand::GreedyData);
    let mut meters = std::collections::BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "version" => {
                pkt.version = value
                    .parse()
                    .map_err(|_| format!("line {}: bad version", i + 1))?
            }
            "command" => {
                pkt.command = match value {
                    "beacon_request" => WireCommand::BeaconRequest,
                    "beacon_response" => WireCommand::BeaconResponse,
                    "greedy_data" => WireCommand::GreedyData,
                    "perimeter_data" => WireCommand::PerimeterData,
                    other => return Err(format!("line {}: unknown command `{other}`", i + 1)),
                }
            }
            "port" => {
                pkt.port = value
                    .parse()
                    .map_err(|_| format!("line {}: bad port", i + 1))?
            }
            "data" => {
                pkt.data = if value.is_empty() || value == "-" {
                    Vec::new()
                } else {
                    hex::decode(value).map_err(|e| format!("line {}: bad data hex: {e}", i + 1))?
                }
            }
            "auth" => {
                let bytes =
                    hex::decode(value).map_err(|e| format!("line {}: bad auth hex: {e}", i + 1))?;
                pkt.auth = bytes
                    .try_into()
                    .map_err(|_| format!("line {}: auth must be 16 bytes", i + 1))?;
            }
            "source_x" | "source_y" | "dest_x" | "dest_y" | "perimeter_x" | "perimeter_y"
            | "edge1_x" | "edge1_y" | "edge2_x" | "edge2_y" => {
                let v: f64 = value
                    .parse()
                    .map_err(|_| format!("line {}: bad coordinate `{value}`", i + 1))?;
                meters.insert(key.to_string(), v);
            }
            other => return Err(format!("line {}: unknown field `{other}`", i + 1)),
        }
    }
    let coord = |m: &std::collections::BTreeMap<String, f64>, x: &str, y: &str| {
        Position::from_meters(
            m.get(x).copied().unwrap_or(0.0),
            m.get(y).copied().unwrap_or(0.0),
        )
    };
    pkt.source_pos = coord(&meters, "source_x", "source_y");
    pkt.dest_pos = coord(&meters, "dest_x", "dest_y");
    pkt.perimeter_pos = coord(&meters, "perimeter_x", "perimeter_y");
    pkt.edge = (
        coord(&meters, "edge1_x", "edge1_y"),
        coord(&meters, "edge2_x", "edge2_y"),
    );
    Ok(pkt)
}

fn fields_from_packet(pkt: &GpsrPacket) -> String {
    let command = match pkt.command {
        WireCommand::BeaconRequest => "beacon_request",
        WireCommand::BeaconResponse => "beacon_response",
        WireCommand::GreedyData => "greedy_data",
        WireCommand::PerimeterData => "perimeter_data",
    };
    let mut out = String::new();
    out.push_str(&format!("# packet_length = {}\n", pkt.packet_length()));
    out.push_str(&format!("version = {}\n", pkt.version));
    out.push_str(&format!("command = {command}\n"));
    out.push_str(&format!("source_x = {:.2}\n", pkt.source_pos.x_meters()));
    out.push_str(&format!("source_y = {:.2}\n", pkt.source_pos.y_meters()));
    out.push_str(&format!(
        "perimeter_x = {:.2}\n",
        pkt.perimeter_pos.x_meters()
    ));
    out.push_str(&format!(
        "perimeter_y = {:.2}\n",
        pkt.perimeter_pos.y_meters()
    ));
    out.push_str(&format!("dest_x = {:.2}\n", pkt.dest_pos.x_meters()));
    out.push_str(&format!("dest_y = {:.2}\n", pkt.dest_pos.y_meters()));
    out.push_str(&format!("edge1_x = {:.2}\n", pkt.edge.0.x_meters()));
    out.push_str(&format!("edge1_y = {:.2}\n", pkt.edge.0.y_meters()));
    out.push_str(&format!("edge2_x = {:.2}\n", pkt.edge.1.x_meters()));
    out.push_str(&format!("edge2_y = {:.2}\n", pkt.edge.1.y_meters()));
    out.push_str(&format!("port = {}\n", pkt.port));
    out.push_str(&format!("data = {}\n", hex::encode(&pkt.data)));
    out.push_str(&format!("auth = {}\n", hex::encode(pkt.auth)));
    out
}

fn cmd_packet(cmd: PacketCmd) -> i32 {
    match cmd {
        PacketCmd::Encode { input } => {
            let text = match read_input(input.as_deref()) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            let pkt = match packet_from_fields(&text) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            match wire::encode(&pkt) {
                Ok(bytes) => {
                    println!("{}", hex::encode(bytes));
                    0
                }
                Err(e) => fail(e),
            }
        }
        PacketCmd::Decode { input } => {
            let text = match read_input(input.as_deref()) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            match parse_hex_packet(&text) {
                Ok(pkt) => {
                    print!("{}", fields_from_packet(&pkt));
                    0
                }
                Err(e) => fail(e),
            }
        }
        PacketCmd::Sign { key, input } => {
            let key = match parse_key(&key) {
                Ok(k) => k,
                Err(e) => return fail(e),
            };
            let text = match read_input(input.as_deref()) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            let pkt = match parse_hex_packet(&text) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            let signed = auth::sign_packet(&key, &pkt).expect("decoded packets re-encode");
            println!("tag = {}", hex::encode(signed.auth));
            println!(
                "packet = {}",
                hex::encode(wire::encode(&signed).expect("still valid"))
            );
            0
        }
        PacketCmd::Verify { key, input } => {
            let key = match parse_key(&key) {
                Ok(k) => k,
                Err(e) => return fail(e),
            };
            let text = match read_input(input.as_deref()) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            let pkt = match parse_hex_packet(&text) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            if auth::verify_packet(&key, &pkt) {
                println!("valid");
                0
            } else {
                println!("invalid");
                1
            }
        }
    }
}

fn parse_bigint(s: &str) -> Result<BigUint, String> {
    let s = s.trim();
    if let Some(hex) = s.strip_prefix("0x") {
        BigUint::parse_bytes(hex.as_bytes(), 16).ok_or_else(|| format!("bad hex integer `{s}`"))
    } else {
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| format!("bad integer `{s}`"))
    }
}

fn cmd_keygen(args: KeygenArgs) -> i32 {
    let params = match (&args.p_hex, &args.w_hex) {
        (Some(p), Some(w)) => DhParams::from_hex(p, w),
        _ => DhParams::named(&args.group),
    };
    let params = match params {
        Ok(p) => p,
        Err(e) => return fail(e),
    };

    let keypair = match &args.secret {
        Some(s) => {
            let secret = match parse_bigint(s) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            match keypair_from_secret(&params, secret) {
                Ok(kp) => kp,
                Err(e) => return fail(e),
            }
        }
        None => {
            use rand::SeedableRng;
            let mut rng = match args.seed {
                Some(seed) => rand_chacha::ChaCha8Rng::seed_from_u64(seed),
                None => rand_chacha::ChaCha8Rng::from_entropy(),
            };
            crate::crypto::dh_generate(&params, &mut rng)
        }
    };

    println!("p = {}", params.prime().to_str_radix(16));
    println!("w = {}", params.generator().to_str_radix(16));
    println!("secret = {}", keypair.secret.to_str_radix(16));
    println!("public = {}", keypair.public.to_str_radix(16));

    if let Some(peer) = &args.peer {
        let peer = match parse_bigint(&format!("0x{}", peer.trim().trim_start_matches("0x"))) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        match dh_shared(&params, &keypair, &peer) {
            Ok(secret) => {
                println!("s = {}", secret.0.to_str_radix(16));
                println!("key = {}", derive_key(&secret).to_hex());
            }
            Err(e) => return fail(e),
        }
    }
    0
}
