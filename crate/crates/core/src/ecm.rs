//! Stage-1 elliptic curve factoring over `Z/NZ`.
//!
//! Each attempt draws a Suyama curve parameter `A` (the family whose curves
//! have order divisible by 12), takes `B = A + 2` so that `(1, 1)` is a
//! rational point of order 4 (pinning the rational 4-torsion), and pushes a
//! seed-derived starting x-coordinate through `[L]` with `L = lcm(1..B1)`,
//! one Euclidean chain per prime power. The start must be a generic point,
//! not the 4-torsion one: x-line arithmetic never reads `B`, so any `x0`
//! works; modulo each prime it lifts to the curve or its quadratic twist,
//! whichever, and `gcd(Z, N)` exposes a prime `p | N` exactly when the order
//! of that lift is `B1`-power-smooth. No inversions are needed after curve
//! setup, and setup inversions that fail have already found a factor.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::chains::prac;
use crate::curve::MontgomeryCurve;
use crate::modarith::{gcd, Error, Modulus, OpCount};
use crate::xline::XZPoint;

/// Parameters of a stage-1 run.
#[derive(Debug, Clone)]
pub struct EcmConfig {
    /// The odd composite to factor; must not be a perfect power.
    pub n: BigUint,
    /// Smoothness bound: the run multiplies by every prime power up to `b1`.
    pub b1: u64,
    /// Number of curves to try before giving up.
    pub max_curves: u32,
    /// Seed for the deterministic per-curve parameter stream.
    pub seed: u64,
}

impl EcmConfig {
    /// Validates shape constraints: `N` odd and at least 15, not a perfect
    /// power, `B1 >= 2`. Primality of `N` is the caller's concern (the CLI
    /// runs Miller-Rabin first).
    pub fn validate(&self) -> Result<(), Error> {
        if self.n.is_even() {
            return Err(Error::BadEcmInput("N must be odd".into()));
        }
        if self.n < BigUint::from(15u32) {
            return Err(Error::BadEcmInput("N must be at least 15".into()));
        }
        if let Some((base, exp)) = perfect_power(&self.n) {
            return Err(Error::BadEcmInput(format!(
                "N is a perfect power: {base}^{exp}"
            )));
        }
        if self.b1 < 2 {
            return Err(Error::BadEcmInput("B1 must be at least 2".into()));
        }
        Ok(())
    }
}

/// Outcome of a stage-1 run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcmResult {
    /// A nontrivial divisor of `N`, when one was found.
    pub factor: Option<BigUint>,
    pub curves_tried: u32,
    /// Per-curve seed of the successful attempt.
    pub seed_of_success: Option<u64>,
}

/// `n = base^exp` with `exp >= 2`, if such a decomposition exists.
pub fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    if *n < BigUint::from(4u32) {
        return None;
    }
    for exp in 2..=n.bits() as u32 {
        let root = n.nth_root(exp);
        if root.pow(exp) == *n {
            return Some((root, exp));
        }
    }
    None
}

/// Ascending prime powers `p^e` with `p^e <= b1 < p^(e+1)`, one per prime
/// `p <= b1`; their product is `lcm(1..b1)`.
pub fn lcm_exponent_schedule(b1: u64) -> Vec<u64> {
    assert!(b1 >= 2, "schedule requires B1 >= 2");
    let limit = b1 as usize;
    let mut is_composite = vec![false; limit + 1];
    let mut schedule = Vec::new();
    for p in 2..=limit {
        if is_composite[p] {
            continue;
        }
        let mut multiple = p * p;
        while multiple <= limit {
            is_composite[multiple] = true;
            multiple += p;
        }
        let mut power = p as u64;
        while power <= b1 / p as u64 {
            power *= p as u64;
        }
        schedule.push(power);
    }
    schedule
}

enum Attempt {
    Factor(BigUint),
    NoFactor,
    /// Curve was singular modulo all of `N`; attempt burned.
    BadCurve,
}

/// The `(sigma, x0)` pair a per-curve seed expands to: the Suyama seed for
/// the curve parameter `A` and the starting x-coordinate. Exposed so that a
/// reported `seed_of_success` can be audited (e.g. by recomputing the curve
/// modulo the found factor and checking its order).
pub fn attempt_parameters(n: &BigUint, curve_seed: u64) -> (BigUint, BigUint) {
    let mut rng = ChaCha20Rng::seed_from_u64(curve_seed);
    let lo = BigUint::from(6u32);
    let hi = n - BigUint::from(2u32);
    let sigma = rng.gen_biguint_range(&lo, &hi);
    let x0 = rng.gen_biguint_range(&BigUint::from(2u32), &hi);
    (sigma, x0)
}

/// One curve attempt: derive the Suyama parameter `A` from the seed, set
/// `B = A + 2`, and multiply a seed-derived `(x0 : 1)` through the
/// prime-power schedule. A non-invertible denominator during setup is a
/// factor in itself and short-circuits.
fn try_curve(modulus: &Modulus, n: &BigUint, schedule: &[u64], curve_seed: u64) -> Attempt {
    let (sigma, x0) = attempt_parameters(n, curve_seed);
    let a_seed = modulus.element(sigma);

    // gcd probes on the seed material: a hit is an immediate factor
    let mut ctr = OpCount::new();
    let a2 = a_seed.sqr(&mut ctr);
    let probe = a_seed.mul(&a2.sub(&modulus.one(), &mut ctr), &mut ctr).mul(
        &modulus
            .element_u64(9)
            .mul(&a2, &mut ctr)
            .sub(&modulus.one(), &mut ctr),
        &mut ctr,
    );
    let g = gcd(probe.residue(), n);
    if g > BigUint::one() {
        return if g < *n {
            Attempt::Factor(g)
        } else {
            Attempt::BadCurve
        };
    }

    // A = -(3a^4 + 6a^2 - 1) / 4a^3
    let a4 = a2.sqr(&mut ctr);
    let num = modulus
        .element_u64(3)
        .mul(&a4, &mut ctr)
        .add(&modulus.element_u64(6).mul(&a2, &mut ctr), &mut ctr)
        .sub(&modulus.one(), &mut ctr);
    let four_a3 = modulus
        .element_u64(4)
        .mul(&a2, &mut ctr)
        .mul(&a_seed, &mut ctr);
    let inv = match four_a3.try_inv_ring() {
        Ok(v) => v,
        Err(g) => {
            return if g > BigUint::one() && g < *n {
                Attempt::Factor(g)
            } else {
                Attempt::BadCurve
            }
        }
    };
    let big_a = num.negate().mul(&inv, &mut ctr);

    // B = A + 2 puts (1, 1) on the curve; also probe the singularity locus
    // A^2 - 4: a shared factor there is a find, a full vanish burns the curve
    let g = gcd(
        big_a
            .sqr(&mut ctr)
            .sub(&modulus.element_u64(4), &mut ctr)
            .residue(),
        n,
    );
    if g > BigUint::one() {
        return if g < *n {
            Attempt::Factor(g)
        } else {
            Attempt::BadCurve
        };
    }
    let big_b = big_a.add(&modulus.element_u64(2), &mut ctr);
    let curve = match MontgomeryCurve::new(big_a, big_b) {
        Ok(c) => c,
        Err(_) => return Attempt::BadCurve,
    };

    // generic starting point: (1, 1) itself has order 4 and would always
    // collapse to gcd(Z, N) = N once 4 | L, so multiply a fresh x0 instead
    let mut x = XZPoint::new(modulus.element(x0), modulus.one());
    for &pe in schedule {
        x = prac(&curve, &BigUint::from(pe), &x, &mut ctr);
    }
    let g = gcd(x.z.residue(), n);
    if g > BigUint::one() && g < *n {
        Attempt::Factor(g)
    } else {
        Attempt::NoFactor
    }
}

fn curve_seed(seed: u64, index: u32) -> u64 {
    // splitmix64 of (seed, index): decorrelates per-curve streams
    let mut z = seed ^ (u64::from(index).wrapping_mul(0x9e3779b97f4a7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn stage1_result(cfg: &EcmConfig, found: Option<(u32, BigUint)>) -> EcmResult {
    match found {
        Some((index, factor)) => EcmResult {
            factor: Some(factor),
            curves_tried: index + 1,
            seed_of_success: Some(curve_seed(cfg.seed, index)),
        },
        None => EcmResult {
            factor: None,
            curves_tried: cfg.max_curves,
            seed_of_success: None,
        },
    }
}

fn run_attempt(
    cfg: &EcmConfig,
    modulus: &Modulus,
    schedule: &[u64],
    index: u32,
) -> Option<BigUint> {
    match try_curve(modulus, &cfg.n, schedule, curve_seed(cfg.seed, index)) {
        Attempt::Factor(f) => Some(f),
        Attempt::NoFactor | Attempt::BadCurve => None,
    }
}

/// Stage-1 over `max_curves` independent attempts. With the `parallel`
/// feature the attempts fan out over the rayon pool; the reported result is
/// the first success in attempt order either way, so the outcome matches
/// [`stage1_sequential`] exactly.
pub fn stage1(cfg: &EcmConfig) -> Result<EcmResult, Error> {
    cfg.validate()?;
    let modulus = Modulus::new(cfg.n.clone(), false)?;
    let schedule = lcm_exponent_schedule(cfg.b1);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        // per-attempt granularity: an early success stops the pool instead
        // of letting workers finish prefetched blocks of attempts
        let found = (0..cfg.max_curves)
            .into_par_iter()
            .with_max_len(1)
            .find_map_first(|i| run_attempt(cfg, &modulus, &schedule, i).map(|f| (i, f)));
        return Ok(stage1_result(cfg, found));
    }
    #[cfg(not(feature = "parallel"))]
    {
        let found = (0..cfg.max_curves)
            .find_map(|i| run_attempt(cfg, &modulus, &schedule, i).map(|f| (i, f)));
        Ok(stage1_result(cfg, found))
    }
}

/// Single-threaded stage-1, always available and bit-deterministic.
pub fn stage1_sequential(cfg: &EcmConfig) -> Result<EcmResult, Error> {
    cfg.validate()?;
    let modulus = Modulus::new(cfg.n.clone(), false)?;
    let schedule = lcm_exponent_schedule(cfg.b1);
    let found =
        (0..cfg.max_curves).find_map(|i| run_attempt(cfg, &modulus, &schedule, i).map(|f| (i, f)));
    Ok(stage1_result(cfg, found))
}
