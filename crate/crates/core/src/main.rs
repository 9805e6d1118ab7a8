//! Batch command-line interface: curve inspection, x-only Diffie-Hellman,
//! scalar multiplication, chain statistics, and stage-1 ECM factoring.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error (bad parameters or
//! malformed input), 3 not-found (ECM exhausted its curve budget).

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use montline::chains::{prac, stats_campaign};
use montline::curve::{parse_curve_config, to_edwards, AffinePoint, CurveConfig};
use montline::ecm::{perfect_power, stage1, EcmConfig};
use montline::ladder::{named_curve, scalar_mul, uniform_ladder, DhParams, Scalar, ScalarBits};
use montline::modarith::{decode, is_probable_prime, Element, Modulus, OpCount};
use montline::xline::XZPoint;

#[derive(Parser)]
#[command(
    name = "montline",
    about = "Montgomery-curve x-only arithmetic: ladders, chains, key exchange, ECM",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print curve parameters, j-invariant, torsion classification,
    /// Edwards constants, and (for small fields) the exact group order.
    CurveInfo(CurveSelect),
    /// x-only Diffie-Hellman key exchange.
    Dh {
        #[command(subcommand)]
        action: DhAction,
    },
    /// Scalar pseudomultiplication x(P) -> x([k]P), optionally with
    /// y-recovery to the full point.
    Mul {
        #[command(flatten)]
        curve: CurveSelect,
        /// Scalar, decimal or 0x-hex.
        #[arg(long)]
        k: String,
        /// x-coordinate, fixed-length little-endian hex.
        #[arg(long)]
        x: String,
        /// Use the branch-free uniform ladder (default).
        #[arg(long, conflicts_with = "prac")]
        uniform: bool,
        /// Use the Euclidean chain (variable-time, public scalars only).
        #[arg(long)]
        prac: bool,
        /// Recover the full point [k]P; requires --y.
        #[arg(long, requires = "y")]
        recover: bool,
        /// y-coordinate of P for recovery, little-endian hex.
        #[arg(long)]
        y: Option<String>,
    },
    /// Chain-length statistics (CSV): ladder vs Euclidean chains.
    ChainStats {
        #[command(flatten)]
        curve: CurveSelect,
        /// Scalar bit length.
        #[arg(long, default_value_t = 64)]
        bits: u64,
        /// Number of random scalars.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Stage-1 elliptic curve factoring of an odd composite.
    Ecm {
        /// The number to factor, decimal or 0x-hex.
        #[arg(long = "N", visible_alias = "n")]
        n: String,
        /// Smoothness bound.
        #[arg(long = "B1", visible_alias = "b1", default_value_t = 1000)]
        b1: u64,
        /// Curve attempt budget.
        #[arg(long, default_value_t = 20)]
        curves: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum DhAction {
    /// Generate a key pair; prints the public key and (unless --secret-file
    /// is given) the secret.
    Keygen {
        #[command(flatten)]
        curve: CurveSelect,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the secret (hex) here instead of stdout.
        #[arg(long)]
        secret_file: Option<std::path::PathBuf>,
    },
    /// Recompute the public key of a stored secret.
    Pub {
        #[command(flatten)]
        curve: CurveSelect,
        #[arg(long)]
        secret_file: std::path::PathBuf,
    },
    /// Derive the shared secret from a stored secret and a peer public key.
    Shared {
        #[command(flatten)]
        curve: CurveSelect,
        #[arg(long)]
        secret_file: std::path::PathBuf,
        /// Peer public key, fixed-length little-endian hex.
        #[arg(long)]
        peer: String,
    },
}

/// Curve selection: a named curve, a config file, or raw parameters.
#[derive(Args)]
struct CurveSelect {
    /// Named curve: curve25519 or curve448.
    #[arg(long, conflicts_with_all = ["config", "q"])]
    curve: Option<String>,
    /// Path to a key = value curve configuration file.
    #[arg(long, conflicts_with = "q")]
    config: Option<std::path::PathBuf>,
    /// Field modulus (decimal or 0x-hex); requires --A and --B.
    #[arg(long, requires_all = ["a", "b"])]
    q: Option<String>,
    #[arg(long = "A")]
    a: Option<String>,
    #[arg(long = "B")]
    b: Option<String>,
}

#[derive(Debug)]
enum CliError {
    Domain(String),
    NotFound(String),
}

impl CliError {
    fn domain(msg: impl Into<String>) -> Self {
        CliError::Domain(msg.into())
    }
}

impl From<montline::Error> for CliError {
    fn from(e: montline::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn parse_int_arg(s: &str, what: &str) -> CliResult<BigUint> {
    let parsed = if let Some(h) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        BigUint::parse_bytes(h.as_bytes(), 16)
    } else {
        BigUint::parse_bytes(s.as_bytes(), 10)
    };
    parsed.ok_or_else(|| CliError::domain(format!("bad {what}: {s:?}")))
}

impl CurveSelect {
    fn resolve(&self) -> CliResult<CurveConfig> {
        if let Some(name) = &self.curve {
            return named_curve(name)
                .ok_or_else(|| CliError::domain(format!("unknown curve {name:?}")));
        }
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::domain(format!("cannot read {}: {e}", path.display())))?;
            let cfg = parse_curve_config(&text)?;
            check_q_prime(&cfg.q)?;
            return Ok(cfg);
        }
        match (&self.q, &self.a, &self.b) {
            (Some(q), Some(a), Some(b)) => {
                let q = parse_int_arg(q, "q")?;
                check_q_prime(&q)?;
                Ok(CurveConfig {
                    name: None,
                    q,
                    a: parse_int_arg(a, "A")?,
                    b: parse_int_arg(b, "B")?,
                    r: None,
                    cofactor: None,
                    twist_cofactor: None,
                    base_x: None,
                    scalar_bits: None,
                    q_is_prime: true,
                })
            }
            _ => Err(CliError::domain(
                "no curve selected: use --curve, --config, or --q/--A/--B",
            )),
        }
    }
}

fn check_q_prime(q: &BigUint) -> CliResult<()> {
    if !is_probable_prime(q, 64, 0x7173) {
        return Err(CliError::domain(format!("q = {q} is not prime")));
    }
    Ok(())
}

fn element_from_hex(s: &str, m: &Modulus) -> CliResult<Element> {
    let bytes = hex::decode(s).map_err(|e| CliError::domain(format!("bad hex {s:?}: {e}")))?;
    decode(&bytes, m).map_err(CliError::from)
}

fn hex_of(e: &Element) -> String {
    hex::encode(e.encode())
}

fn scalar_byte_len(bits: u64) -> usize {
    ((bits + 7) / 8) as usize
}

fn secret_to_hex(secret: &Scalar, bits: u64) -> String {
    let mut bytes = secret.value().to_bytes_le();
    bytes.resize(scalar_byte_len(bits), 0);
    hex::encode(bytes)
}

fn secret_from_file(path: &std::path::Path, bits: u64) -> CliResult<Scalar> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::domain(format!("cannot read {}: {e}", path.display())))?;
    let bytes =
        hex::decode(text.trim()).map_err(|e| CliError::domain(format!("bad secret hex: {e}")))?;
    if bytes.len() != scalar_byte_len(bits) {
        return Err(CliError::domain(format!(
            "secret has wrong length: expected {} bytes, got {}",
            scalar_byte_len(bits),
            bytes.len()
        )));
    }
    Ok(Scalar::new(BigUint::from_bytes_le(&bytes)))
}

fn cmd_curve_info(select: &CurveSelect) -> CliResult<()> {
    let cfg = select.resolve()?;
    let curve = cfg.curve()?;
    let m = curve.modulus();
    if let Some(name) = &cfg.name {
        println!("name = {name}");
    }
    println!("q = {}", m.value());
    println!("A = {}", curve.a());
    println!("B = {}", curve.b());
    println!("j = {}", curve.j_invariant()?);
    println!("a24 = {}", curve.a24());
    let report = curve.classify_torsion()?;
    println!(
        "torsion: curve contains {}, twist contains {}",
        report.curve, report.twist
    );
    let ed = to_edwards(&curve)?;
    println!("edwards_a = {}", ed.a);
    println!("edwards_d = {}", ed.d);
    if m.bits() <= 20 {
        println!("order = {}", curve.group_order_naive()?);
    }
    Ok(())
}

fn dh_params(select: &CurveSelect) -> CliResult<DhParams> {
    let cfg = select.resolve()?;
    DhParams::from_config(&cfg).map_err(CliError::from)
}

fn cmd_dh(action: &DhAction) -> CliResult<()> {
    match action {
        DhAction::Keygen {
            curve,
            seed,
            secret_file,
        } => {
            let params = dh_params(curve)?;
            let mut rng = ChaCha20Rng::seed_from_u64(*seed);
            let (secret, public) = params.keypair(&mut rng);
            let secret_hex = secret_to_hex(&secret, params.scalar_bits);
            match secret_file {
                Some(path) => {
                    let mut f = std::fs::File::create(path).map_err(|e| {
                        CliError::domain(format!("cannot write {}: {e}", path.display()))
                    })?;
                    writeln!(f, "{secret_hex}")
                        .map_err(|e| CliError::domain(format!("write failed: {e}")))?;
                }
                None => println!("secret = {secret_hex}"),
            }
            println!("public = {}", hex_of(&public));
            Ok(())
        }
        DhAction::Pub { curve, secret_file } => {
            let params = dh_params(curve)?;
            let secret = secret_from_file(secret_file, params.scalar_bits)?;
            println!("public = {}", hex_of(&params.public_key(&secret)));
            Ok(())
        }
        DhAction::Shared {
            curve,
            secret_file,
            peer,
        } => {
            let params = dh_params(curve)?;
            let secret = secret_from_file(secret_file, params.scalar_bits)?;
            let peer = element_from_hex(peer, params.curve.modulus())?;
            println!("shared = {}", hex_of(&params.shared_secret(&secret, &peer)));
            Ok(())
        }
    }
}

fn cmd_mul(
    select: &CurveSelect,
    k: &str,
    x: &str,
    use_prac: bool,
    want_recover: bool,
    y: Option<&str>,
) -> CliResult<()> {
    let cfg = select.resolve()?;
    let curve = cfg.curve()?;
    let m = curve.modulus().clone();
    let k = parse_int_arg(k, "k")?;
    if k.is_zero() {
        return Err(CliError::domain("k must be at least 1"));
    }
    let x = element_from_hex(x, &m)?;
    let xp = XZPoint::from_affine_x(x.clone());
    let mut ctr = OpCount::new();
    let out = if use_prac {
        prac(&curve, &k, &xp, &mut ctr)
    } else {
        uniform_ladder(
            &curve,
            &ScalarBits::natural(Scalar::new(k.clone())),
            &xp,
            &mut ctr,
        )
    };
    if out.is_sentinel() || out.z.is_zero() {
        println!("x = infinity-or-T");
    } else {
        let affine = out.to_affine_x(&mut ctr).expect("nonzero Z");
        println!("x = {}", hex_of(&affine));
    }
    if want_recover {
        let y = element_from_hex(y.expect("clap enforces --y"), &m)?;
        let p = AffinePoint::Xy(x, y);
        if !curve.is_on_curve(&p) {
            return Err(CliError::domain("(x, y) is not on the curve"));
        }
        match scalar_mul(&curve, &Scalar::new(k), &p)? {
            AffinePoint::Infinity => println!("recovered = O"),
            AffinePoint::Xy(rx, ry) => {
                println!("recovered = ({}, {})", hex_of(&rx), hex_of(&ry))
            }
        }
    }
    Ok(())
}

fn cmd_chain_stats(select: &CurveSelect, bits: u64, samples: usize, seed: u64) -> CliResult<()> {
    if bits < 8 {
        return Err(CliError::domain("--bits must be at least 8"));
    }
    if samples == 0 {
        return Err(CliError::domain("--samples must be at least 1"));
    }
    let cfg = select.resolve()?;
    let curve = cfg.curve()?;
    let m = curve.modulus().clone();
    let base_x = cfg.base_x.clone().unwrap_or_else(|| BigUint::from(9u32));
    let xp = XZPoint::from_affine_x(m.element(base_x));
    let summary = stats_campaign(&curve, &xp, bits, samples, seed);
    let mut out = std::io::stdout().lock();
    summary
        .write_csv(&mut out)
        .map_err(|e| CliError::domain(format!("write failed: {e}")))?;
    Ok(())
}

fn cmd_ecm(n: &str, b1: u64, curves: u32, seed: u64) -> CliResult<()> {
    let n = parse_int_arg(n, "N")?;
    if !n.bit(0) {
        return Err(CliError::domain("N is even"));
    }
    if is_probable_prime(&n, 64, 0xec) {
        return Err(CliError::domain("N is prime"));
    }
    if let Some((base, exp)) = perfect_power(&n) {
        return Err(CliError::domain(format!(
            "N is a perfect power: {base}^{exp}"
        )));
    }
    let cfg = EcmConfig {
        n: n.clone(),
        b1,
        max_curves: curves,
        seed,
    };
    let result = stage1(&cfg)?;
    match result.factor {
        Some(factor) => {
            println!("factor = {factor}");
            println!("cofactor = {}", &n / &factor);
            println!("curves_tried = {}", result.curves_tried);
            println!(
                "curve_seed = {}",
                result.seed_of_success.expect("success carries its seed")
            );
            Ok(())
        }
        None => Err(CliError::NotFound(format!(
            "no factor found after {} curves (B1 = {b1}); try more curves or a larger bound",
            result.curves_tried
        ))),
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::CurveInfo(select) => cmd_curve_info(select),
        Command::Dh { action } => cmd_dh(action),
        Command::Mul {
            curve,
            k,
            x,
            prac,
            recover,
            y,
            ..
        } => cmd_mul(curve, k, x, *prac, *recover, y.as_deref()),
        Command::ChainStats {
            curve,
            bits,
            samples,
            seed,
        } => cmd_chain_stats(curve, *bits, *samples, *seed),
        Command::Ecm {
            n,
            b1,
            curves,
            seed,
        } => cmd_ecm(n, *b1, *curves, *seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::NotFound(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(3)
        }
    }
}
