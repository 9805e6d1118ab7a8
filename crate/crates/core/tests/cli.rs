//! End-to-end tests of the command-line interface: output formats, exit
//! codes, determinism, and cross-command consistency.

use std::process::{Command, Output};

fn montline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_montline"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("missing field {key} in {text:?}"))
}

#[test]
fn curve_info_named_curve() {
    let out = montline(&["curve-info", "--curve", "curve25519"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(field(&text, "A"), "486662");
    assert_eq!(
        field(&text, "q"),
        "57896044618658097711785492504343953926634992332820282019728792003956564819949"
    );
    assert_eq!(field(&text, "a24"), "121666");
}

#[test]
fn curve_info_rejects_singular_parameters() {
    let out = montline(&["curve-info", "--q", "13", "--A", "2", "--B", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("singular"), "stderr: {err}");
}

#[test]
fn curve_info_small_field_order_matches_oracle() {
    let out = montline(&["curve-info", "--q", "13", "--A", "6", "--B", "1"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let m = montline::modarith::Modulus::prime(13);
    let e = montline::curve::MontgomeryCurve::from_u64(&m, 6, 1).unwrap();
    assert_eq!(
        field(&text, "order"),
        e.group_order_naive().unwrap().to_string()
    );
}

#[test]
fn usage_errors_exit_1() {
    let out = montline(&["mul", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(1));
    let out = montline(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn dh_shared_secrets_agree() {
    let dir = std::env::temp_dir().join(format!("montline-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let alice = dir.join("alice.hex");
    let bob = dir.join("bob.hex");
    let out_a = montline(&[
        "dh",
        "keygen",
        "--curve",
        "curve25519",
        "--seed",
        "11",
        "--secret-file",
        alice.to_str().unwrap(),
    ]);
    assert!(out_a.status.success());
    let pub_a = field(&stdout_of(&out_a), "public").to_string();
    let out_b = montline(&[
        "dh",
        "keygen",
        "--curve",
        "curve25519",
        "--seed",
        "22",
        "--secret-file",
        bob.to_str().unwrap(),
    ]);
    let pub_b = field(&stdout_of(&out_b), "public").to_string();
    assert_ne!(pub_a, pub_b);

    let shared_a = montline(&[
        "dh",
        "shared",
        "--curve",
        "curve25519",
        "--secret-file",
        alice.to_str().unwrap(),
        "--peer",
        &pub_b,
    ]);
    let shared_b = montline(&[
        "dh",
        "shared",
        "--curve",
        "curve25519",
        "--secret-file",
        bob.to_str().unwrap(),
        "--peer",
        &pub_a,
    ]);
    assert_eq!(
        field(&stdout_of(&shared_a), "shared"),
        field(&stdout_of(&shared_b), "shared")
    );

    // pub recomputes the same public key
    let re_pub = montline(&[
        "dh",
        "pub",
        "--curve",
        "curve25519",
        "--secret-file",
        alice.to_str().unwrap(),
    ]);
    assert_eq!(field(&stdout_of(&re_pub), "public"), pub_a);

    // deterministic keygen for a fixed seed
    let again = montline(&["dh", "keygen", "--curve", "curve25519", "--seed", "11"]);
    assert_eq!(field(&stdout_of(&again), "public"), pub_a);

    // zero peer maps to zero shared secret
    let zero = "0".repeat(64);
    let shared_zero = montline(&[
        "dh",
        "shared",
        "--curve",
        "curve25519",
        "--secret-file",
        alice.to_str().unwrap(),
        "--peer",
        &zero,
    ]);
    assert_eq!(field(&stdout_of(&shared_zero), "shared"), zero);

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn dh_rejects_malformed_peer() {
    let dir = std::env::temp_dir().join(format!("montline-cli-peer-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let secret = dir.join("s.hex");
    montline(&[
        "dh",
        "keygen",
        "--curve",
        "curve25519",
        "--seed",
        "3",
        "--secret-file",
        secret.to_str().unwrap(),
    ]);
    for bad in ["zz", "ab", &"0".repeat(62)] {
        let out = montline(&[
            "dh",
            "shared",
            "--curve",
            "curve25519",
            "--secret-file",
            secret.to_str().unwrap(),
            "--peer",
            bad,
        ]);
        assert_eq!(out.status.code(), Some(2), "peer = {bad:?}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn mul_k1_echoes_input() {
    // x = 9 little-endian over 32 bytes
    let mut x = "09".to_string();
    x.push_str(&"0".repeat(62));
    let out = montline(&["mul", "--curve", "curve25519", "--k", "1", "--x", &x]);
    assert!(out.status.success());
    assert_eq!(field(&stdout_of(&out), "x"), x);
}

#[test]
fn mul_uniform_and_prac_agree() {
    for k in ["7", "0x1b3", "123456789"] {
        let mut x = "09".to_string();
        x.push_str(&"0".repeat(62));
        let uniform = montline(&[
            "mul",
            "--curve",
            "curve25519",
            "--k",
            k,
            "--x",
            &x,
            "--uniform",
        ]);
        let chain = montline(&[
            "mul",
            "--curve",
            "curve25519",
            "--k",
            k,
            "--x",
            &x,
            "--prac",
        ]);
        assert_eq!(stdout_of(&uniform), stdout_of(&chain), "k = {k}");
    }
}

#[test]
fn mul_recover_returns_curve_point() {
    // F_13, A = 6, B = 2: (1, 2) is a point of order 4; [3](1, 2) = -(1, 2)
    let out = montline(&[
        "mul",
        "--q",
        "13",
        "--A",
        "6",
        "--B",
        "2",
        "--k",
        "3",
        "--x",
        "01",
        "--recover",
        "--y",
        "02",
    ]);
    assert!(out.status.success(), "{:?}", out);
    let text = stdout_of(&out);
    assert_eq!(field(&text, "x"), "01");
    assert_eq!(field(&text, "recovered"), "(01, 0b)");
    // k = order gives the point at infinity
    let out = montline(&[
        "mul",
        "--q",
        "13",
        "--A",
        "6",
        "--B",
        "2",
        "--k",
        "4",
        "--x",
        "01",
        "--recover",
        "--y",
        "02",
    ]);
    let text = stdout_of(&out);
    assert_eq!(field(&text, "x"), "infinity-or-T");
    assert_eq!(field(&text, "recovered"), "O");
    // off-curve recovery input is a domain error
    let out = montline(&[
        "mul",
        "--q",
        "13",
        "--A",
        "6",
        "--B",
        "2",
        "--k",
        "3",
        "--x",
        "01",
        "--recover",
        "--y",
        "03",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chain_stats_csv_shape_and_determinism() {
    let args = [
        "chain-stats",
        "--curve",
        "curve25519",
        "--bits",
        "32",
        "--samples",
        "25",
        "--seed",
        "7",
    ];
    let out1 = montline(&args);
    assert!(out1.status.success());
    let text = stdout_of(&out1);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "bitlen,algorithm,sample_index,scalar_hex,xadd,xdbl,total,ratio"
    );
    // 2 rows per sample plus header and summary
    assert_eq!(lines.len(), 2 + 2 * 25);
    assert!(lines.last().unwrap().starts_with("# mean_ratio ladder="));
    for line in &lines[1..lines.len() - 1] {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 8);
        assert_eq!(cols[0], "32");
        if cols[1] == "ladder" {
            assert_eq!(cols[6], "63"); // 2 * 32 - 1
        }
    }
    // byte-identical on the same seed
    assert_eq!(stdout_of(&montline(&args)), text);
}

#[test]
fn ecm_factors_and_exit_codes() {
    let out = montline(&[
        "ecm", "--N", "91", "--B1", "20", "--curves", "30", "--seed", "1",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let f = field(&text, "factor");
    assert!(f == "7" || f == "13", "factor = {f}");

    // prime N is a domain error
    let out = montline(&["ecm", "--N", "97"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prime"));

    // even and perfect-power inputs likewise
    assert_eq!(montline(&["ecm", "--N", "100"]).status.code(), Some(2));
    assert_eq!(montline(&["ecm", "--N", "49"]).status.code(), Some(2));

    // exhaustion exits 3: one curve with a hopeless bound on a semiprime
    // whose factors are far beyond B1-smoothness reach
    let out = montline(&[
        "ecm",
        "--N",
        "1000036000099",
        "--B1",
        "2",
        "--curves",
        "1",
        "--seed",
        "0",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn config_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("montline-cli-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("toy.curve");
    std::fs::write(&path, "# toy\nname = toy13\nq = 13\nA = 6\nB = 1\n").unwrap();
    let out = montline(&["curve-info", "--config", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(field(&stdout_of(&out), "name"), "toy13");
    // unknown keys rejected
    std::fs::write(&path, "q = 13\nA = 6\nB = 1\nfoo = 1\n").unwrap();
    let out = montline(&["curve-info", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // composite q rejected
    std::fs::write(&path, "q = 15\nA = 6\nB = 1\n").unwrap();
    let out = montline(&["curve-info", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
