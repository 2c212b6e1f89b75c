//! End-to-end checks of the `sgpsr` binary: exit codes, CSV shapes, and
//! agreement with direct library calls.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sgpsr"))
}

fn scenarios_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sgpsr-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn simulate_two_node_demo_delivers_everything() {
    let out = bin()
        .args(["simulate"])
        .arg(scenarios_dir().join("two_node.cfg"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));
    let csv = stdout_of(&out);
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("scenario,generated,delivered,delivery_ratio"));
    let row = lines.next().unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[1], "10", "generated");
    assert_eq!(fields[2], "10", "delivered");
    assert_eq!(fields[3], "1.000000", "delivery ratio");
}

#[test]
fn simulate_rejects_unknown_keys_with_exit_2() {
    let cfg = scratch("bad.cfg");
    std::fs::write(&cfg, "node_count = 4\nbogus_key = 1\n").unwrap();
    let out = bin().arg("simulate").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("bogus_key"), "{err}");
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn simulate_missing_file_is_exit_2() {
    let out = bin()
        .args(["simulate", "/nonexistent/path.cfg"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_security_toggle_on_tamper_scenario() {
    let out = bin()
        .arg("simulate")
        .arg(scenarios_dir().join("tamper.cfg"))
        .args(["--sweep", "security_on=true,false"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));
    let csv = stdout_of(&out);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    let field = |row: &str, i: usize| row.split(',').nth(i).unwrap().to_string();
    // Column 13 is corrupted_delivered (0-based, after the scenario label).
    let on = rows.iter().find(|r| r.starts_with("security_on=true")).unwrap();
    let off = rows.iter().find(|r| r.starts_with("security_on=false")).unwrap();
    assert_eq!(field(on, 13), "0");
    assert_ne!(field(off, 13), "0");
    // And with security on, the tampered packets died as auth failures.
    assert_ne!(field(on, 4), "0");
}

#[test]
fn sweep_runs_in_parallel_match_sequential() {
    let seq = bin()
        .arg("simulate")
        .arg(scenarios_dir().join("flood.cfg"))
        .args(["--sweep", "adversaries[0].flood_multiplier=1,5,10"])
        .output()
        .unwrap();
    let par = bin()
        .arg("simulate")
        .arg(scenarios_dir().join("flood.cfg"))
        .args(["--sweep", "adversaries[0].flood_multiplier=1,5,10", "--jobs", "3"])
        .output()
        .unwrap();
    assert!(seq.status.success() && par.status.success());
    assert_eq!(stdout_of(&seq), stdout_of(&par));
}

#[test]
fn trace_flag_writes_deterministic_trace() {
    let t1 = scratch("trace1.log");
    let t2 = scratch("trace2.log");
    for t in [&t1, &t2] {
        let out = bin()
            .arg("simulate")
            .arg(scenarios_dir().join("two_node.cfg"))
            .arg("--trace")
            .arg(t)
            .arg("--output")
            .arg(scratch("metrics.csv"))
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr_of(&out));
    }
    let a = std::fs::read(&t1).unwrap();
    let b = std::fs::read(&t2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "traces of identical runs must be byte-identical");
}

#[test]
fn bench_csv_shape_and_bad_flags() {
    let csv_path = scratch("bench.csv");
    let out = bin()
        .args(["bench", "--sizes", "128", "--iterations", "60", "--output"])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert!(stdout_of(&out).contains("reference_ns"));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "algorithm,operation,size,iterations,median_ns,min_ns,max_ns"
    );
    assert_eq!(csv.lines().count(), 5, "header + 2 algos x 2 ops x 1 size");

    let out = bin()
        .args(["bench", "--iterations", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args(["bench", "--sizes", "100", "--iterations", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args(["bench", "--iterations", "notanumber"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn packet_tools_roundtrip_sign_verify() {
    // encode <- field description
    let fields = scratch("fields.txt");
    std::fs::write(
        &fields,
        "command = greedy_data\nsource_x = 100\nsource_y = 200\n\
         dest_x = 300\ndest_y = 50.25\nport = 7\ndata = 68656c6c6f\n",
    )
    .unwrap();
    let out = bin().args(["packet", "encode"]).arg(&fields).output().unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));
    let hex_packet = stdout_of(&out).trim().to_string();
    assert_eq!(hex_packet.len(), 69 * 2, "48 + 5 + 16 bytes as hex");
    let packet_file = scratch("packet.hex");
    std::fs::write(&packet_file, &hex_packet).unwrap();

    // decode -> encode roundtrips through the CLI
    let decoded = bin()
        .args(["packet", "decode"])
        .arg(&packet_file)
        .output()
        .unwrap();
    assert!(decoded.status.success());
    let fields2 = scratch("fields2.txt");
    std::fs::write(&fields2, stdout_of(&decoded)).unwrap();
    let out2 = bin().args(["packet", "encode"]).arg(&fields2).output().unwrap();
    assert_eq!(stdout_of(&out2).trim(), hex_packet);

    // sign, then verify: exit 0; flip a data hex digit: exit 1.
    let key = "000102030405060708090a0b0c0d0e0f";
    let signed_out = bin()
        .args(["packet", "sign", "--key", key])
        .arg(&packet_file)
        .output()
        .unwrap();
    assert!(signed_out.status.success());
    let signed_hex = stdout_of(&signed_out)
        .lines()
        .find_map(|l| l.strip_prefix("packet = ").map(str::to_string))
        .expect("signed packet line");
    let signed_file = scratch("signed.hex");
    std::fs::write(&signed_file, &signed_hex).unwrap();

    let verify = bin()
        .args(["packet", "verify", "--key", key])
        .arg(&signed_file)
        .output()
        .unwrap();
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(stdout_of(&verify).trim(), "valid");

    let tampered = signed_hex.replace("68656c6c6f", "68656c6c6e");
    assert_ne!(tampered, signed_hex);
    let tampered_file = scratch("tampered.hex");
    std::fs::write(&tampered_file, &tampered).unwrap();
    let verify_bad = bin()
        .args(["packet", "verify", "--key", key])
        .arg(&tampered_file)
        .output()
        .unwrap();
    assert_eq!(verify_bad.status.code(), Some(1));
    assert_eq!(stdout_of(&verify_bad).trim(), "invalid");

    // Malformed hex is a usage error, not a verification failure.
    let garbage = scratch("garbage.hex");
    std::fs::write(&garbage, "zz").unwrap();
    let out = bin()
        .args(["packet", "verify", "--key", key])
        .arg(&garbage)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn keygen_worked_example_and_bounds() {
    let out = bin()
        .args(["keygen", "--group", "demo23", "--secret", "6"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("p = 17"), "{text}"); // 23 in hex
    assert!(text.contains("public = 8"), "{text}");

    // Completing with the peer public 19 (0x13) lands on S = 2.
    let out = bin()
        .args(["keygen", "--group", "demo23", "--secret", "6", "--peer", "13"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("s = 2"), "{text}");
    assert!(
        text.contains("key = 9e688c58a5487b8eaf69c9e1005ad0bf"),
        "digest of the single byte 0x02: {text}"
    );

    // Out-of-range secrets are usage errors.
    for bad in ["0", "1", "22"] {
        let out = bin()
            .args(["keygen", "--group", "demo23", "--secret", bad])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(2), "secret {bad}");
    }

    // Same-seed draws are reproducible.
    let a = bin()
        .args(["keygen", "--group", "test256", "--seed", "5"])
        .output()
        .unwrap();
    let b = bin()
        .args(["keygen", "--group", "test256", "--seed", "5"])
        .output()
        .unwrap();
    assert_eq!(stdout_of(&a), stdout_of(&b));
}

#[test]
fn usage_errors_exit_2() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
