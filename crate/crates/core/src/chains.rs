//! Euclidean differential addition chains: the 2-dimensional subtractive
//! pseudomultiplication (binary transformations only) and its 1-dimensional
//! golden-ratio wrapper, plus a statistics harness comparing chain lengths
//! against the plain ladder.
//!
//! These chains are shorter than the ladder on average but variable-time:
//! the branch taken at each step depends on the scalar. They are meant for
//! public scalars (ECM stage 1, verification workloads) and are kept off
//! every secret-scalar code path.

use num_bigint::{BigUint, RandBigInt};

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::curve::MontgomeryCurve;
use crate::ladder::{x_ladder, Scalar};
use crate::modarith::OpCount;
use crate::xline::{xadd_extended, xdbl, XZPoint};

/// A pair of scalars for 2-dimensional pseudomultiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiScalar {
    pub m: BigUint,
    pub n: BigUint,
}

impl MultiScalar {
    pub fn new(m: BigUint, n: BigUint) -> Self {
        MultiScalar { m, n }
    }

    pub fn from_u64(m: u64, n: u64) -> Self {
        MultiScalar::new(BigUint::from(m), BigUint::from(n))
    }
}

/// The golden-ratio split used by the 1-dimensional wrapper:
/// `r = floor(k / phi)` with `phi = (1 + sqrt 5)/2`, computed exactly as
/// `(isqrt(5 k^2) - k) / 2`. Floating point would be wrong past 53 bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenRatioSplit {
    pub k: BigUint,
    pub r: BigUint,
}

impl GoldenRatioSplit {
    /// Requires odd `k >= 3` so that `0 < r < k` holds.
    pub fn new(k: BigUint) -> Self {
        assert!(
            k.bit(0) && k >= BigUint::from(3u32),
            "split requires odd k >= 3"
        );
        // 1/phi = (sqrt 5 - 1)/2 and 5k^2 is never a perfect square, so
        // floor(k/phi) = (isqrt(5 k^2) - k) >> 1 exactly.
        let s: BigUint = (BigUint::from(5u32) * &k * &k).sqrt();
        let r: BigUint = (s - &k) >> 1;
        debug_assert!(!r.is_zero() && r < k);
        GoldenRatioSplit { k, r }
    }

    /// The complementary part `k - r`.
    pub fn rest(&self) -> BigUint {
        &self.k - &self.r
    }
}

/// 2-dimensional scalar pseudomultiplication:
/// `(m, n, x(P), x(Q), x(Q - P)) -> x([m]P + [n]Q)` by a subtractive
/// Euclidean reduction on the scalar pair. The loop keeps
/// `gcd(s0, s1) = gcd(m, n)` and a register triple
/// `(x(R0), x(R1), x(R1 - R0))` with `[s0]R0 + [s1]R1` invariant; each pass
/// applies the cheapest of four transformations (a Fibonacci step when
/// `s1 <= 4 s0`, an equal-parity step, or a halving of whichever scalar is
/// even). The residual `gcd(m, n)` is finished by doublings and one plain
/// ladder call. Difference arguments degenerate freely here, so all
/// pseudo-additions go through the extended dispatch. Not both of `m`, `n`
/// may be zero.
pub fn euclid(
    e: &MontgomeryCurve,
    scalars: &MultiScalar,
    xp: &XZPoint,
    xq: &XZPoint,
    xq_minus_p: &XZPoint,
    ctr: &mut OpCount,
) -> XZPoint {
    assert!(
        !(scalars.m.is_zero() && scalars.n.is_zero()),
        "euclid requires (m, n) != (0, 0)"
    );
    let mut s0 = scalars.m.clone();
    let mut s1 = scalars.n.clone();
    let mut x0 = xp.clone();
    let mut x1 = xq.clone();
    let mut xd = xq_minus_p.clone();
    let four = BigUint::from(4u32);
    while !s0.is_zero() {
        if s1 < s0 {
            std::mem::swap(&mut s0, &mut s1);
            std::mem::swap(&mut x0, &mut x1);
        }
        if s1 <= &four * &s0 {
            // Fibonacci step: (s0, s1 - s0)
            let sum = xadd_extended(&x1, &x0, &xd, e, ctr);
            s1 -= &s0;
            xd = x0;
            x0 = sum;
        } else if s0.bit(0) == s1.bit(0) {
            // equal parity: (s0, (s1 - s0)/2)
            let sum = xadd_extended(&x1, &x0, &xd, e, ctr);
            let dbl = xdbl(&x1, e, ctr);
            s1 = (&s1 - &s0) >> 1;
            x0 = sum;
            x1 = dbl;
        } else if !s1.bit(0) {
            // s1 even: (s0, s1/2)
            let new_xd = xadd_extended(&x1, &xd, &x0, e, ctr);
            let dbl = xdbl(&x1, e, ctr);
            s1 >>= 1;
            x1 = dbl;
            xd = new_xd;
        } else {
            // s0 even: (s0/2, s1)
            let new_xd = xadd_extended(&x0, &xd, &x1, e, ctr);
            let dbl = xdbl(&x0, e, ctr);
            s0 >>= 1;
            x0 = dbl;
            xd = new_xd;
        }
    }
    // s1 = gcd(m, n): exhaust its powers of two with doublings, then ladder
    while !s1.bit(0) {
        s1 >>= 1;
        x1 = xdbl(&x1, e, ctr);
    }
    if s1 > BigUint::one() {
        // the ladder degenerates on x(O) and x(T); both are fixed by any
        // odd scalar, so pass them through (all-input coverage again)
        if !x1.z.is_zero() && !x1.x.is_zero() {
            x1 = x_ladder(e, &Scalar::new(s1), &x1, ctr).xk;
        }
    }
    x1
}

/// 1-dimensional Euclidean pseudomultiplication: `x(P) -> x([k]P)`.
/// Powers of two are peeled off with doublings; the odd part `s` is split
/// as `(floor(s/phi), s - floor(s/phi))` and handed to [`euclid`] with
/// `P = Q` (difference `x(O)`). Variable-time; public scalars only.
pub fn prac(e: &MontgomeryCurve, k: &BigUint, xp: &XZPoint, ctr: &mut OpCount) -> XZPoint {
    assert!(!k.is_zero(), "prac requires k >= 1");
    let mut s = k.clone();
    let mut x = xp.clone();
    while !s.bit(0) {
        s >>= 1;
        x = xdbl(&x, e, ctr);
    }
    if s.is_one() {
        return x;
    }
    let split = GoldenRatioSplit::new(s);
    euclid(
        e,
        &MultiScalar::new(split.r.clone(), split.rest()),
        &x,
        &x,
        &XZPoint::infinity(e.modulus()),
        ctr,
    )
}

/// Pseudo-operation tallies for one scalar multiplication.
///
/// Derived from the field-operation counters: every pseudo-doubling performs
/// exactly one constant multiplication and every pseudo-addition or
/// pseudo-doubling exactly two squarings, so `xdbl = C` and
/// `xadd = S/2 - C`. The extended dispatch's shortcut returns perform no
/// field operations and correctly count as zero-length steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainStats {
    /// Bit length of the scalar.
    pub bitlen: u64,
    pub xadd_count: u64,
    pub xdbl_count: u64,
}

impl ChainStats {
    fn from_ops(bitlen: u64, ops: &OpCount) -> Self {
        debug_assert!(ops.sqr % 2 == 0);
        let xdbl_count = ops.cmul;
        let xadd_count = ops.sqr / 2 - xdbl_count;
        ChainStats {
            bitlen,
            xadd_count,
            xdbl_count,
        }
    }

    pub fn total(&self) -> u64 {
        self.xadd_count + self.xdbl_count
    }

    /// Differential operations per scalar bit.
    pub fn ratio(&self) -> f64 {
        self.total() as f64 / self.bitlen as f64
    }
}

/// Which pseudomultiplication a statistics row measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainAlgorithm {
    Ladder,
    Prac,
}

impl ChainAlgorithm {
    pub fn name(&self) -> &'static str {
        match self {
            ChainAlgorithm::Ladder => "ladder",
            ChainAlgorithm::Prac => "prac",
        }
    }
}

/// Chain-length measurement of a single `x(P) -> x([k]P)` computation.
pub fn chain_stats(
    e: &MontgomeryCurve,
    algorithm: ChainAlgorithm,
    k: &BigUint,
    xp: &XZPoint,
) -> ChainStats {
    let mut ctr = OpCount::new();
    match algorithm {
        ChainAlgorithm::Ladder => {
            let _ = x_ladder(e, &Scalar::new(k.clone()), xp, &mut ctr);
        }
        ChainAlgorithm::Prac => {
            let _ = prac(e, k, xp, &mut ctr);
        }
    }
    ChainStats::from_ops(k.bits().max(1), &ctr)
}

/// One CSV row of a statistics campaign.
#[derive(Debug, Clone)]
pub struct StatsRow {
    pub bitlen: u64,
    pub algorithm: ChainAlgorithm,
    pub sample_index: usize,
    pub scalar: BigUint,
    pub stats: ChainStats,
}

/// Aggregate of a campaign: per-algorithm mean/min/max operation-per-bit
/// ratios over all samples.
#[derive(Debug, Clone)]
pub struct CampaignSummary {
    pub rows: Vec<StatsRow>,
    pub ladder_mean: f64,
    pub ladder_min: f64,
    pub ladder_max: f64,
    pub prac_mean: f64,
    pub prac_min: f64,
    pub prac_max: f64,
}

impl CampaignSummary {
    /// The CSV table: one header, two rows per sample, plus a trailing
    /// summary comment.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(
            out,
            "bitlen,algorithm,sample_index,scalar_hex,xadd,xdbl,total,ratio"
        )?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{:x},{},{},{},{:.6}",
                row.bitlen,
                row.algorithm.name(),
                row.sample_index,
                row.scalar,
                row.stats.xadd_count,
                row.stats.xdbl_count,
                row.stats.total(),
                row.stats.ratio()
            )?;
        }
        writeln!(
            out,
            "# mean_ratio ladder={:.6} prac={:.6}",
            self.ladder_mean, self.prac_mean
        )
    }
}

fn campaign_scalars(bitlen: u64, samples: usize, seed: u64) -> Vec<BigUint> {
    assert!(bitlen >= 8, "campaign requires bitlen >= 8");
    assert!(samples >= 1, "campaign requires at least one sample");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            // odd, exactly `bitlen` bits
            let middle = rng.gen_biguint(bitlen - 2);
            (BigUint::one() << (bitlen - 1)) | (middle << 1) | BigUint::one()
        })
        .collect()
}

fn sample_rows(e: &MontgomeryCurve, xp: &XZPoint, index: usize, k: &BigUint) -> [StatsRow; 2] {
    let bitlen = k.bits();
    [
        StatsRow {
            bitlen,
            algorithm: ChainAlgorithm::Ladder,
            sample_index: index,
            scalar: k.clone(),
            stats: chain_stats(e, ChainAlgorithm::Ladder, k, xp),
        },
        StatsRow {
            bitlen,
            algorithm: ChainAlgorithm::Prac,
            sample_index: index,
            scalar: k.clone(),
            stats: chain_stats(e, ChainAlgorithm::Prac, k, xp),
        },
    ]
}

fn summarize(rows: Vec<StatsRow>) -> CampaignSummary {
    let fold = |alg: ChainAlgorithm| {
        let ratios: Vec<f64> = rows
            .iter()
            .filter(|r| r.algorithm == alg)
            .map(|r| r.stats.ratio())
            .collect();
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (mean, min, max)
    };
    let (ladder_mean, ladder_min, ladder_max) = fold(ChainAlgorithm::Ladder);
    let (prac_mean, prac_min, prac_max) = fold(ChainAlgorithm::Prac);
    CampaignSummary {
        rows,
        ladder_mean,
        ladder_min,
        ladder_max,
        prac_mean,
        prac_min,
        prac_max,
    }
}

/// Runs ladder and binary-PRAC chain statistics over `samples` random odd
/// scalars of exactly `bitlen` bits, drawn deterministically from `seed`.
/// Samples fan out over the rayon pool when the `parallel` feature is on;
/// the output is identical to [`stats_campaign_seq`] either way, since the
/// per-sample scalars are fixed up front and rows are reassembled in order.
pub fn stats_campaign(
    e: &MontgomeryCurve,
    xp: &XZPoint,
    bitlen: u64,
    samples: usize,
    seed: u64,
) -> CampaignSummary {
    let scalars = campaign_scalars(bitlen, samples, seed);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let rows: Vec<StatsRow> = scalars
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, k)| sample_rows(e, xp, i, k))
            .collect();
        return summarize(rows);
    }
    #[cfg(not(feature = "parallel"))]
    {
        let rows: Vec<StatsRow> = scalars
            .iter()
            .enumerate()
            .flat_map(|(i, k)| sample_rows(e, xp, i, k))
            .collect();
        summarize(rows)
    }
}

/// Sequential variant of [`stats_campaign`], always available; the parallel
/// path must produce byte-identical CSV output.
pub fn stats_campaign_seq(
    e: &MontgomeryCurve,
    xp: &XZPoint,
    bitlen: u64,
    samples: usize,
    seed: u64,
) -> CampaignSummary {
    let scalars = campaign_scalars(bitlen, samples, seed);
    let rows: Vec<StatsRow> = scalars
        .iter()
        .enumerate()
        .flat_map(|(i, k)| sample_rows(e, xp, i, k))
        .collect();
    summarize(rows)
}
