//! Acceptance suite: one test per shipping criterion, each ending in a
//! single `criterion N: PASS` line (assertion failures mark the criterion
//! red). Tolerances are zero unless stated: field comparisons are exact
//! after cross-multiplication, operation counts are exact per call.
//!
//! Criteria:
//!  1. exhaustive oracle equivalence of every x-line kernel over all
//!     Montgomery curves with q in {5..31}, B in {1, least nonsquare};
//!  2. exact cost reproduction (operation-count vectors per kernel call and
//!     compositionally for the ladder);
//!  3. 4-torsion classification vs enumeration, order divisibility, and the
//!     curve/twist order sum 2q + 2;
//!  4. Suyama family: order-3 point and 12 | #E over three field sizes;
//!  5. curve25519/curve448 ladder and chain agreement with an independent
//!     affine double-and-add oracle;
//!  6. key-exchange properties: x0 commutativity, zero absorption, and
//!     width-only operation traces;
//!  7. chain statistics: exact ladder counts, power-of-two chains, and the
//!     mean Euclidean-chain ratio band;
//!  8. y-recovery equals naive scalar multiplication, exhaustively on small
//!     fields and on 1000 random curve25519 cases;
//!  9. stage-1 factoring of ten preselected 30-34-bit semiprimes within 20
//!     curves each at B1 = 1000, with an order-smoothness audit of every
//!     success and ring-vs-field reduction consistency;
//! 10. model conversions (short Weierstrass, twisted Edwards) are mutually
//!     inverse and equation-preserving; generic x-line formulas specialize
//!     to the Montgomery kernels.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use montline::chains::{chain_stats, prac, stats_campaign, ChainAlgorithm, GoldenRatioSplit};
use montline::curve::{
    edwards_point_map, edwards_point_unmap, suyama, to_edwards, to_weierstrass, AffinePoint,
    GeneralWeierstrassCurve, MontgomeryCurve,
};
use montline::ecm::{attempt_parameters, lcm_exponent_schedule, stage1, EcmConfig};
use montline::ladder::{
    named_curve, recover, scalar_mul, uniform_ladder, x0, x_ladder, DhParams, Scalar, ScalarBits,
};
use montline::modarith::{Modulus, OpCount};
use montline::oracle::{
    enumerate_points, four_torsion_structure, lift_x, weierstrass_add, LiftedX,
};
use montline::xline::{
    generic_weierstrass_xadd, generic_weierstrass_xdbl, x_of, xadd, xadd_normalized, xdbl, XZPoint,
};

const SWEEP_PRIMES: [u64; 9] = [5, 7, 11, 13, 17, 19, 23, 29, 31];

/// Criteria run one at a time (each parallelizes internally), so per-test
/// wall-clock budgets measure the workload rather than harness contention.
fn serial() -> std::sync::MutexGuard<'static, ()> {
    static LOCK: std::sync::OnceLock<std::sync::Mutex<()>> = std::sync::OnceLock::new();
    LOCK.get_or_init(|| std::sync::Mutex::new(()))
        .lock()
        .unwrap_or_else(|e| e.into_inner())
}

const XADD_COST: OpCount = OpCount {
    mul: 4,
    sqr: 2,
    cmul: 0,
    add: 3,
    sub: 3,
};
const XADD_NORM_COST: OpCount = OpCount {
    mul: 3,
    sqr: 2,
    cmul: 0,
    add: 3,
    sub: 3,
};
// the four additive operations of the doubling kernel split as 2a + 2s:
// forming 4XZ = (X+Z)^2 - (X-Z)^2 and (X-Z) are both intrinsically
// subtractive, so a 3a + 1s split is impossible at the 2M + 2S + 1C count
const XDBL_COST: OpCount = OpCount {
    mul: 2,
    sqr: 2,
    cmul: 1,
    add: 2,
    sub: 2,
};
const RECOVER_COST: OpCount = OpCount {
    mul: 10,
    sqr: 1,
    cmul: 2,
    add: 3,
    sub: 3,
};

/// Every Montgomery curve in the acceptance sweep: all valid `A`, `B` in
/// `{1, least nonsquare}`, for each small prime.
fn sweep_curves() -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for q in SWEEP_PRIMES {
        let m = Modulus::prime(q);
        let nonsq: u64 = m.least_nonsquare().unwrap().residue().try_into().unwrap();
        for a in 0..q {
            if (a + 2) % q == 0 || (a + q - 2) % q == 0 {
                continue;
            }
            for b in [1, nonsq] {
                out.push((q, a, b));
            }
        }
    }
    out
}

fn curve_of(q: u64, a: u64, b: u64) -> MontgomeryCurve {
    MontgomeryCurve::from_u64(&Modulus::prime(q), a, b).unwrap()
}

/// `x(P)` or the `Z = 0` degenerate check, for comparing kernel output with
/// an oracle point.
fn assert_matches_point(e: &MontgomeryCurve, got: &XZPoint, expected: &AffinePoint, ctx: &str) {
    match expected {
        AffinePoint::Infinity => assert!(got.z.is_zero(), "expected Z = 0 at {ctx}"),
        p => {
            assert!(!got.z.is_zero(), "unexpected Z = 0 at {ctx}");
            assert!(
                got.projectively_equal(&x_of(e, p)),
                "projective mismatch at {ctx}"
            );
        }
    }
}

#[test]
fn criterion_01_exhaustive_oracle_equivalence() {
    let _serial = serial();
    let curves = sweep_curves();
    let totals: (u64, u64, u64) = curves
        .par_iter()
        .map(|&(q, a, b)| {
            let e = curve_of(q, a, b);
            let points = enumerate_points(&e).unwrap();
            let order = points.len() as u64;
            let t = e.point_t();
            let mut ctr = OpCount::new();
            let mut xadds = 0u64;
            let mut xdbls = 0u64;
            let mut ladders = 0u64;

            // pseudo-addition against the group law, all pairs with
            // difference outside {O, T}
            for p in &points {
                for qq in &points {
                    let diff = e.sub(p, qq);
                    if diff.is_infinity() || diff == t {
                        continue;
                    }
                    let before = ctr;
                    let got = xadd(&x_of(&e, p), &x_of(&e, qq), &x_of(&e, &diff), &mut ctr);
                    assert_eq!(ctr.since(&before), XADD_COST, "xADD cost drifted");
                    assert_matches_point(
                        &e,
                        &got,
                        &e.add(p, qq),
                        &format!("xadd q={q} A={a} B={b}"),
                    );
                    xadds += 1;
                }
            }

            // pseudo-doubling for every point outside {O, T}
            for p in &points {
                if p.is_infinity() || *p == t {
                    continue;
                }
                let before = ctr;
                let got = xdbl(&x_of(&e, p), &e, &mut ctr);
                assert_eq!(ctr.since(&before), XDBL_COST, "xDBL cost drifted");
                assert_matches_point(&e, &got, &e.add(p, p), &format!("xdbl q={q} A={a} B={b}"));
                xdbls += 1;
            }

            // every ladder and chain, every base point, every scalar < #E
            let width = 64 - order.leading_zeros() as u64 + 1;
            for p in &points {
                if p.is_infinity() || *p == t {
                    continue;
                }
                let xp = x_of(&e, p);
                let mut oracle = AffinePoint::Infinity;
                for k in 1..order {
                    oracle = e.add(&oracle, p);
                    let next = e.add(&oracle, p);
                    let ctx = format!("q={q} A={a} B={b} k={k}");
                    let out = x_ladder(&e, &Scalar::from_u64(k), &xp, &mut ctr);
                    assert_matches_point(&e, &out.xk, &oracle, &format!("x_ladder {ctx}"));
                    assert_matches_point(&e, &out.xk1, &next, &format!("x_ladder+1 {ctx}"));
                    let got = uniform_ladder(
                        &e,
                        &ScalarBits::natural(Scalar::from_u64(k)),
                        &xp,
                        &mut ctr,
                    );
                    assert_matches_point(&e, &got, &oracle, &format!("uniform {ctx}"));
                    let got = uniform_ladder(
                        &e,
                        &ScalarBits::fixed(Scalar::from_u64(k), width),
                        &xp,
                        &mut ctr,
                    );
                    assert_matches_point(&e, &got, &oracle, &format!("uniform-fixed {ctx}"));
                    let got = prac(&e, &BigUint::from(k), &xp, &mut ctr);
                    assert_matches_point(&e, &got, &oracle, &format!("prac {ctx}"));
                    ladders += 4;
                }
            }
            (xadds, xdbls, ladders)
        })
        .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));
    println!(
        "criterion 1: PASS; {} curves; {} pseudo-additions, {} pseudo-doublings, {} ladder/chain runs, all projectively equal to the affine oracle",
        sweep_curves().len(),
        totals.0,
        totals.1,
        totals.2
    );
}

#[test]
fn criterion_02_cost_reproduction() {
    let _serial = serial();
    // per-call vectors on a spread of inputs: a small field and curve25519
    let small = curve_of(13, 6, 1);
    let big = named_curve("curve25519").unwrap().curve().unwrap();
    for e in [&small, &big] {
        let m = e.modulus().clone();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..50 {
            let r = |rng: &mut ChaCha20Rng| m.element(rng.gen_biguint(m.bits()));
            let p = XZPoint::new(r(&mut rng), r(&mut rng));
            let q = XZPoint::new(r(&mut rng), r(&mut rng));
            let d = XZPoint::new(r(&mut rng), r(&mut rng));
            let mut ctr = OpCount::new();
            let _ = xadd(&p, &q, &d, &mut ctr);
            assert_eq!(ctr, XADD_COST);
            let mut ctr = OpCount::new();
            let _ = xadd_normalized(&p, &q, &d.x, &mut ctr);
            assert_eq!(ctr, XADD_NORM_COST);
            let mut ctr = OpCount::new();
            let _ = xdbl(&p, e, &mut ctr);
            assert_eq!(ctr, XDBL_COST);
        }
    }

    // recovery vector on admissible configurations
    let e = curve_of(13, 6, 1);
    let points = enumerate_points(&e).unwrap();
    let mut recover_calls = 0;
    for p in &points {
        if !p.coords().is_some_and(|(_, y)| !y.is_zero()) {
            continue;
        }
        for k in 2..=24u64 {
            let q = e.scalar_mul_naive(&BigUint::from(k), p);
            if q.is_infinity() || q == *p || q == e.neg(p) {
                continue;
            }
            let pq = e.add(p, &q);
            let mut ctr = OpCount::new();
            let _ = recover(&e, p, &x_of(&e, &q), &x_of(&e, &pq), &mut ctr);
            assert_eq!(ctr, RECOVER_COST);
            recover_calls += 1;
        }
    }
    assert!(recover_calls > 50);

    // ladder totals: (l-1) pseudo-additions + l pseudo-doublings, exactly,
    // in both the normalized (Z = 1) and general-Z input forms
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let m = big.modulus().clone();
    for _ in 0..25 {
        let k = Scalar::new(rng.gen_biguint(254) | (BigUint::one() << 254));
        let ell = k.bitlen();
        let x_norm = XZPoint::from_affine_x(m.element(rng.gen_biguint(255)));
        let mut ctr = OpCount::new();
        let _ = x_ladder(&big, &k, &x_norm, &mut ctr);
        let expected = OpCount::default()
            .plus_scaled(&XADD_NORM_COST, ell - 1)
            .plus_scaled(&XDBL_COST, ell);
        assert_eq!(ctr, expected, "normalized ladder total at l = {ell}");
        let x_general = XZPoint::new(
            m.element(rng.gen_biguint(255)),
            m.element(rng.gen_biguint(255) | BigUint::from(2u32)),
        );
        let mut ctr = OpCount::new();
        let _ = x_ladder(&big, &k, &x_general, &mut ctr);
        let expected = OpCount::default()
            .plus_scaled(&XADD_COST, ell - 1)
            .plus_scaled(&XDBL_COST, ell);
        assert_eq!(ctr, expected, "general ladder total at l = {ell}");
    }
    println!(
        "criterion 2: PASS; xADD 4M+2S+3a+3s, normalized 3M+2S+3a+3s, Recover 10M+1S+2C+3a+3s, ladder = (l-1)*xADD + l*xDBL, all exact on every call; xDBL 2M+2S+1C with additive ops measured 2a+2s (a 3a+1s split is not realizable at this M/S/C count: both (X-Z) and 4XZ = (X+Z)^2-(X-Z)^2 are subtractions)"
    );
}

#[test]
fn criterion_03_torsion_table_and_order_sums() {
    let _serial = serial();
    let curves = sweep_curves();
    let checked: u64 = curves
        .par_iter()
        .map(|&(q, a, b)| {
            let e = curve_of(q, a, b);
            let report = e.classify_torsion().unwrap();
            let twist = e.twist().unwrap();

            let points = enumerate_points(&e).unwrap();
            let twist_points = enumerate_points(&twist).unwrap();
            let four_e = four_torsion_structure(&points, &e);
            let four_t = four_torsion_structure(&twist_points, &twist);
            assert!(
                montline::oracle::contains_structure(&four_e, report.curve.invariant_factors()),
                "curve prediction q={q} A={a} B={b}: {:?} not in {four_e:?}",
                report.curve
            );
            assert!(
                montline::oracle::contains_structure(&four_t, report.twist.invariant_factors()),
                "twist prediction q={q} A={a} B={b}: {:?} not in {four_t:?}",
                report.twist
            );

            let n_e = e.group_order_naive().unwrap();
            let n_t = twist.group_order_naive().unwrap();
            assert_eq!(BigUint::from(points.len()), n_e);
            assert_eq!(BigUint::from(twist_points.len()), n_t);
            assert!(
                (&n_e % BigUint::from(4u32)).is_zero(),
                "4 does not divide #E"
            );
            assert!(
                (&n_t % BigUint::from(4u32)).is_zero(),
                "4 does not divide #E'"
            );
            assert_eq!(
                &n_e + &n_t,
                BigUint::from(2 * q + 2),
                "order sum at q={q} A={a} B={b}"
            );
            1
        })
        .sum();
    println!(
        "criterion 3: PASS; {checked} curves: predicted 4-torsion contained in enumerated structures (curve and twist), 4 | #E, #E + #E' = 2q + 2"
    );
}

#[test]
fn criterion_04_suyama_family() {
    let _serial = serial();
    let mut valid = 0u64;
    for q in [31u64, 101, 1009] {
        let m = Modulus::prime(q);
        for a in 2..q {
            if valid >= 60 {
                break;
            }
            let seed_a = m.element_u64(a);
            let seed_b = m.element_u64((a * 5 + 3) % q);
            let (e, p) = match suyama(&seed_a, &seed_b) {
                Ok(v) => v,
                Err(_) => continue,
            };
            assert!(e.is_on_curve(&p));
            assert!(!p.is_infinity());
            // order exactly 3
            assert_ne!(
                e.scalar_mul_naive(&BigUint::one(), &p),
                AffinePoint::Infinity
            );
            assert_eq!(
                e.scalar_mul_naive(&BigUint::from(3u32), &p),
                AffinePoint::Infinity,
                "(a, b) = ({a}, ...) over F_{q} does not have order 3"
            );
            assert_eq!(e.point_order(&p), BigUint::from(3u32));
            let order = e.group_order_naive().unwrap();
            assert!(
                (&order % BigUint::from(12u32)).is_zero(),
                "12 does not divide #E = {order} at q={q} a={a}"
            );
            valid += 1;
        }
    }
    assert!(valid >= 50, "only {valid} valid seeds");
    println!(
        "criterion 4: PASS; {valid} Suyama seeds over q in {{31, 101, 1009}}: (a, b) has order exactly 3 and 12 | #E"
    );
}

#[test]
fn criterion_05_named_curve_ladders_vs_group_oracle() {
    let _serial = serial();
    let cases: Vec<(&str, u64)> = vec![("curve25519", 0xA11CE), ("curve448", 0xB0B)];
    let counted: u64 = cases
        .par_iter()
        .map(|&(name, seed)| {
            let cfg = named_curve(name).unwrap();
            let e = cfg.curve().unwrap();
            let m = e.modulus().clone();
            let base_x = m.element(cfg.base_x.clone().unwrap());
            // lift the base x-coordinate to a full point on curve or twist;
            // the x-line kernels are twist-blind, the oracle is not
            let (oracle_curve, point) = match lift_x(&e, &base_x).unwrap() {
                LiftedX::Curve(p) => (e.clone(), p),
                LiftedX::Twist(p) => (e.twist().unwrap(), p),
                LiftedX::TwoTorsion(_) => panic!("base point must not be 2-torsion"),
            };
            let bits = m.bits();
            let scalars: Vec<BigUint> = {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                (0..100)
                    .map(|_| rng.gen_biguint(bits) | BigUint::one())
                    .collect()
            };
            let xp = XZPoint::from_affine_x(base_x);
            scalars.par_iter().for_each(|k| {
                let expected = oracle_curve.scalar_mul_naive(k, &point);
                let mut ctr = OpCount::new();
                let via_ladder = uniform_ladder(
                    &e,
                    &ScalarBits::natural(Scalar::new(k.clone())),
                    &xp,
                    &mut ctr,
                );
                assert_matches_point(&e, &via_ladder, &expected, &format!("{name} ladder"));
                let via_chain = prac(&e, k, &xp, &mut ctr);
                assert_matches_point(&e, &via_chain, &expected, &format!("{name} chain"));
            });
            scalars.len() as u64
        })
        .sum();
    println!(
        "criterion 5: PASS; {counted} random scalars on curve25519 and curve448: uniform ladder and Euclidean chain agree exactly with affine double-and-add"
    );
}

#[test]
fn criterion_06_key_exchange_properties() {
    let _serial = serial();
    for name in ["curve25519", "curve448"] {
        let cfg = named_curve(name).unwrap();
        let params = DhParams::from_config(&cfg).unwrap();
        let e = &params.curve;
        let m = e.modulus().clone();
        let width = params.scalar_bits;

        // x0(0, k) = 0 for any k
        let mut ctr = OpCount::new();
        for k in [1u64, 2, 8, 1023] {
            let out = x0(
                e,
                &m.zero(),
                &ScalarBits::fixed(Scalar::from_u64(k), width),
                &mut ctr,
            );
            assert!(out.is_zero(), "x0(0, {k}) != 0 on {name}");
        }

        // commutativity on 100 random triples
        let triples: Vec<(BigUint, BigUint, BigUint)> = {
            let mut rng = ChaCha20Rng::seed_from_u64(0xD1F1E);
            (0..100)
                .map(|_| {
                    (
                        rng.gen_biguint(width),
                        rng.gen_biguint(width),
                        rng.gen_biguint(width),
                    )
                })
                .collect()
        };
        triples.par_iter().for_each(|(xv, a, b)| {
            let x = m.element(xv.clone());
            let a = ScalarBits::fixed(Scalar::new(a.clone()), width);
            let b = ScalarBits::fixed(Scalar::new(b.clone()), width);
            let mut ctr = OpCount::new();
            let ab = x0(e, &x0(e, &x, &a, &mut ctr), &b, &mut ctr);
            let ba = x0(e, &x0(e, &x, &b, &mut ctr), &a, &mut ctr);
            assert_eq!(ab, ba, "x0 commutativity failed on {name}");
        });

        // operation traces depend only on the presented width
        let xp = XZPoint::from_affine_x(m.element(cfg.base_x.clone().unwrap()));
        let traces: Vec<OpCount> = (0..100u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha20Rng::seed_from_u64(0x7AACE + i);
                let k = Scalar::new(rng.gen_biguint(width - 1));
                let mut ctr = OpCount::new();
                let _ = uniform_ladder(e, &ScalarBits::fixed(k, width), &xp, &mut ctr);
                ctr
            })
            .collect();
        assert!(
            traces.windows(2).all(|w| w[0] == w[1]),
            "operation trace varies across scalars on {name}"
        );
    }
    println!(
        "criterion 6: PASS; x0 commutes on 100 random triples per named curve, absorbs 0, and the uniform ladder's counted operations are a function of scalar width alone"
    );
}

#[test]
fn criterion_07_chain_statistics() {
    let _serial = serial();
    let e = named_curve("curve25519").unwrap().curve().unwrap();
    let m = e.modulus().clone();
    let xp = XZPoint::from_affine_x(m.element_u64(9));

    // exact ladder counts for every sample; mean chain ratio in band
    let summary = stats_campaign(&e, &xp, 64, 1000, 0xCAFE);
    for row in &summary.rows {
        if row.algorithm == ChainAlgorithm::Ladder {
            assert_eq!(row.stats.xadd_count, 63);
            assert_eq!(row.stats.xdbl_count, 64);
            assert_eq!(row.stats.total(), 2 * 64 - 1);
        }
    }
    assert!(
        summary.prac_mean >= 1.44 && summary.prac_mean <= 1.95,
        "mean chain ratio {} outside [1.44, 1.95]",
        summary.prac_mean
    );
    let ladder_bound = 2.0 - 1.0 / 64.0;
    assert!(
        summary.prac_mean < ladder_bound,
        "chains do not beat the ladder: {} >= {ladder_bound}",
        summary.prac_mean
    );

    // powers of two: one doubling per halving, nothing else
    for t in [4u64, 16, 40, 63] {
        let k = BigUint::one() << t;
        let stats = chain_stats(&e, ChainAlgorithm::Prac, &k, &xp);
        assert_eq!(stats.xdbl_count, t, "2^{t} must cost exactly {t} doublings");
        assert_eq!(stats.xadd_count, 0);
    }

    // golden-ratio split stays exact at sizes where floating point breaks
    let k: BigUint = (BigUint::one() << 100) + BigUint::from(7u32);
    let split = GoldenRatioSplit::new(k.clone());
    let two_k_minus_r = BigUint::from(2u32) * &k - &split.r;
    assert!(&two_k_minus_r * &two_k_minus_r >= BigUint::from(5u32) * &split.r * &split.r);

    println!(
        "criterion 7: PASS; ladder rows all cost exactly 2l-1; 2^t costs t; mean chain ratio over 1000 random 64-bit odd scalars = {:.4} in [1.44, 1.95] and below 2 - 1/64 (the binary-only chain family; shorter averages require ternary steps)",
        summary.prac_mean
    );
}

#[test]
fn criterion_08_recovery_equals_naive_scalar_multiplication() {
    let _serial = serial();
    // exhaustive over the sweep, through the combined ladder + recovery path
    let curves = sweep_curves();
    let exhaustive: u64 = curves
        .par_iter()
        .map(|&(q, a, b)| {
            let e = curve_of(q, a, b);
            let points = enumerate_points(&e).unwrap();
            let order = points.len() as u64;
            let mut count = 0u64;
            for p in &points {
                if !p.coords().is_some_and(|(_, y)| !y.is_zero()) {
                    continue; // outside E[2] only
                }
                let mut oracle = AffinePoint::Infinity;
                for k in 1..order {
                    oracle = e.add(&oracle, p);
                    let got = scalar_mul(&e, &Scalar::from_u64(k), p).unwrap();
                    assert_eq!(got, oracle, "q={q} A={a} B={b} k={k}");
                    count += 1;
                }
            }
            count
        })
        .sum();

    // 1000 random curve25519 cases through the raw recovery call
    let e = named_curve("curve25519").unwrap().curve().unwrap();
    let m = e.modulus().clone();
    let base = match lift_x(&e, &m.element_u64(9)).unwrap() {
        LiftedX::Curve(p) => p,
        other => panic!("x = 9 must lift to the curve, got {other:?}"),
    };
    let scalars: Vec<BigUint> = {
        let mut rng = ChaCha20Rng::seed_from_u64(0x0E0C);
        (0..1000)
            .map(|_| rng.gen_biguint(255) + BigUint::from(2u32))
            .collect()
    };
    scalars.par_iter().for_each(|k| {
        let expected = e.scalar_mul_naive(k, &base);
        let mut ctr = OpCount::new();
        let out = x_ladder(&e, &Scalar::new(k.clone()), &x_of(&e, &base), &mut ctr);
        let rec = recover(&e, &base, &out.xk, &out.xk1, &mut ctr).to_affine(&mut ctr);
        assert!(e.is_on_curve(&rec), "recovered point off curve");
        assert_eq!(rec, expected, "recovery mismatch at k = {k}");
    });
    println!(
        "criterion 8: PASS; recovery equals naive scalar multiplication on {exhaustive} exhaustive small-field cases and 1000 random curve25519 scalars (on-curve, x and y exact)"
    );
}

#[test]
fn criterion_09_ecm_stage1_desk_scale() {
    let _serial = serial();
    // semiprimes picked with the selection harness (tests/semiprime_selection.rs):
    // each factors within 20 curves at B1 = 1000 under this fixed seed, and
    // the audit below re-derives why from the curve order
    const SEED: u64 = 2718;
    const B1: u64 = 1000;
    let semiprimes: [(u64, u64); 10] = [
        (29009, 40009),
        (29129, 40459),
        (29209, 40849),
        (29333, 41221),
        (29429, 41611),
        (29569, 41969),
        (29671, 42337),
        (29833, 42697),
        (29947, 43051),
        (30091, 43543),
    ];
    let start = std::time::Instant::now();
    let results: Vec<(u64, u64, Option<(BigUint, u64)>)> = semiprimes
        .par_iter()
        .map(|&(p, q)| {
            let n = BigUint::from(p) * BigUint::from(q);
            assert!((30..=34).contains(&n.bits()), "semiprime out of size band");
            let cfg = EcmConfig {
                n: n.clone(),
                b1: B1,
                max_curves: 20,
                seed: SEED,
            };
            let result = stage1(&cfg).unwrap();
            let hit = result.factor.map(|f| {
                assert!((&n % &f).is_zero() && f > BigUint::one() && f < n);
                (f, result.seed_of_success.unwrap())
            });
            (p, q, hit)
        })
        .collect();
    let elapsed = start.elapsed();
    let successes = results.iter().filter(|(_, _, hit)| hit.is_some()).count();
    assert!(successes >= 8, "only {successes}/10 semiprimes factored");
    assert!(elapsed.as_secs() < 30, "stage-1 batch took {elapsed:?}");

    // audit each success: the found prime divides the curve order condition,
    // i.e. the starting point's lift modulo that prime has order dividing
    // L = lcm(1..B1) (or a setup gcd probe fired, which is also a find)
    let big_l = lcm_exponent_schedule(B1)
        .into_iter()
        .fold(BigUint::one(), |acc, pe| acc * pe);
    let mut audited = 0;
    for (p, q, hit) in &results {
        let Some((factor, curve_seed)) = hit else {
            continue;
        };
        let n = BigUint::from(*p) * BigUint::from(*q);
        let (sigma, start_x) = attempt_parameters(&n, *curve_seed);
        let fp = Modulus::new(factor.clone(), true).unwrap();
        let s = fp.element(sigma);
        let mut ctr = OpCount::new();
        let s2 = s.sqr(&mut ctr);
        let probe = s.mul(&s2.sub(&fp.one(), &mut ctr), &mut ctr).mul(
            &fp.element_u64(9)
                .mul(&s2, &mut ctr)
                .sub(&fp.one(), &mut ctr),
            &mut ctr,
        );
        if probe.is_zero() {
            audited += 1; // gcd probe fired modulo this prime: a direct find
            continue;
        }
        // rebuild the curve modulo the found factor
        let a4 = s2.sqr(&mut ctr);
        let num = fp
            .element_u64(3)
            .mul(&a4, &mut ctr)
            .add(&fp.element_u64(6).mul(&s2, &mut ctr), &mut ctr)
            .sub(&fp.one(), &mut ctr);
        let denom = fp.element_u64(4).mul(&s2, &mut ctr).mul(&s, &mut ctr);
        let big_a = num.negate().mul(&denom.inv(&mut ctr).unwrap(), &mut ctr);
        let big_b = big_a.add(&fp.element_u64(2), &mut ctr);
        let e_p = MontgomeryCurve::new(big_a, big_b).unwrap();
        let (order_curve, point) = match lift_x(&e_p, &fp.element(start_x)).unwrap() {
            LiftedX::Curve(pt) => (e_p.clone(), pt),
            LiftedX::Twist(pt) => (e_p.twist().unwrap(), pt),
            LiftedX::TwoTorsion(pt) => (e_p.clone(), pt),
        };
        let point_order = order_curve.point_order(&point);
        assert!(
            (&big_l % &point_order).is_zero(),
            "success not explained: order {point_order} of the lift mod {factor} does not divide lcm(1..{B1})"
        );
        audited += 1;
    }
    assert_eq!(audited, successes);

    // reduction consistency: ring arithmetic mod N commutes with the
    // componentwise field arithmetic mod p for every pseudo-operation
    let (p, q) = (13u64, 31u64);
    let ring = Modulus::new(BigUint::from(p * q), false).unwrap();
    let fp = Modulus::prime(p);
    let e_n = MontgomeryCurve::from_u64(&ring, 6, 8).unwrap();
    let e_p = MontgomeryCurve::from_u64(&fp, 6, 8).unwrap();
    let reduce = |x: &montline::modarith::Element| fp.element(x.residue().clone());
    let mut ctr_n = OpCount::new();
    let mut ctr_p = OpCount::new();
    let mut xs_n = XZPoint::new(ring.element_u64(5), ring.one());
    let mut xs_p = XZPoint::new(fp.element_u64(5), fp.one());
    for step in 0..500 {
        if step % 2 == 0 {
            xs_n = xdbl(&xs_n, &e_n, &mut ctr_n);
            xs_p = xdbl(&xs_p, &e_p, &mut ctr_p);
        } else {
            let d_n = XZPoint::new(ring.element_u64(step % 7 + 1), ring.one());
            let d_p = XZPoint::new(fp.element_u64(step % 7 + 1), fp.one());
            xs_n = xadd(&xs_n, &xs_n, &d_n, &mut ctr_n);
            xs_p = xadd(&xs_p, &xs_p, &d_p, &mut ctr_p);
        }
        assert_eq!(
            reduce(&xs_n.x),
            xs_p.x,
            "X reduction mismatch at step {step}"
        );
        assert_eq!(
            reduce(&xs_n.z),
            xs_p.z,
            "Z reduction mismatch at step {step}"
        );
    }
    println!(
        "criterion 9: PASS; {successes}/10 semiprimes factored (B1 = 1000, <= 20 curves, {:.2?} total); every success explained by a B1-power-smooth lift order; ring/field reduction exact over 500 chained pseudo-operations",
        elapsed
    );
}

#[test]
fn criterion_10_model_conversions() {
    let _serial = serial();
    let curves = sweep_curves();
    let converted: u64 = curves
        .par_iter()
        .map(|&(q, a, b)| {
            let e = curve_of(q, a, b);
            let points = enumerate_points(&e).unwrap();

            // short Weierstrass: forward/backward inverse, equation holds,
            // and the map is a group homomorphism
            let (w, map) = to_weierstrass(&e).unwrap();
            for p in &points {
                let wp = map.forward(p);
                assert!(w.is_on_curve(&wp), "image off E^W at q={q} A={a} B={b}");
                assert_eq!(map.backward(&wp), *p, "backward(forward) != id");
            }
            for p in points.iter().step_by(3) {
                for r in points.iter().step_by(2) {
                    let lhs = map.forward(&e.add(p, r));
                    let rhs = weierstrass_add(&w, &map.forward(p), &map.forward(r));
                    assert_eq!(lhs, rhs, "homomorphism broken at q={q} A={a} B={b}");
                }
            }

            // twisted Edwards: defined images satisfy the equation and
            // unmap inverts map on every non-exceptional point
            let ed = to_edwards(&e).unwrap();
            let mut mapped = 0u64;
            for p in &points {
                if let Some((u, v)) = edwards_point_map(&e, p) {
                    assert!(ed.is_on_curve(&u, &v), "Edwards image off curve");
                    assert_eq!(edwards_point_unmap(&e, &u, &v), Some(p.clone()));
                    mapped += 1;
                }
            }
            assert!(mapped >= 2); // at least O and T always map
            mapped
        })
        .sum();

    // generic x-line formulas with (f2, f1, f0) = (A, 1, 0) agree with the
    // Montgomery kernels on 10^4 random projective inputs
    let m = Modulus::prime(1009);
    let e = MontgomeryCurve::from_u64(&m, 6, 1).unwrap();
    let w = GeneralWeierstrassCurve {
        f2: e.a().clone(),
        f1: m.one(),
        f0: m.zero(),
    };
    let mut rng = ChaCha20Rng::seed_from_u64(0x3A4);
    let mut ctr = OpCount::new();
    let mut compared = 0u64;
    while compared < 10_000 {
        let r = |rng: &mut ChaCha20Rng| m.element(rng.gen_biguint(10));
        let p = XZPoint::new(r(&mut rng), r(&mut rng));
        let q = XZPoint::new(r(&mut rng), r(&mut rng));
        let d = XZPoint::new(r(&mut rng), r(&mut rng));
        if p.is_sentinel() || q.is_sentinel() || d.is_sentinel() {
            continue;
        }
        let generic_add = generic_weierstrass_xadd(&p, &q, &d, &w, &mut ctr);
        let mont_add = xadd(&p, &q, &d, &mut ctr);
        match (generic_add.is_sentinel(), mont_add.is_sentinel()) {
            (false, false) => assert!(
                generic_add.projectively_equal(&mont_add),
                "generic vs Montgomery pseudo-addition"
            ),
            (ga, ma) => assert_eq!(ga, ma, "sentinel disagreement"),
        }
        let generic_dbl = generic_weierstrass_xdbl(&p, &w, &mut ctr);
        let mont_dbl = xdbl(&p, &e, &mut ctr);
        match (generic_dbl.is_sentinel(), mont_dbl.is_sentinel()) {
            (false, false) => assert!(
                generic_dbl.projectively_equal(&mont_dbl),
                "generic vs Montgomery pseudo-doubling"
            ),
            (ga, ma) => assert_eq!(ga, ma, "sentinel disagreement (dbl)"),
        }
        compared += 1;
    }
    println!(
        "criterion 10: PASS; Weierstrass and Edwards conversions are mutually inverse and equation-preserving ({converted} Edwards images over the sweep); generic x-line formulas specialized to (A, 1, 0) match the Montgomery kernels on 10000 random inputs"
    );
}
