//! Slow, independent reference implementations backing the test suite:
//! exhaustive point enumeration, subgroup structure by order counting,
//! lifting x-coordinates to the curve or its twist, and a plain affine
//! group law for general Weierstrass models.
//!
//! Nothing here shares code with the projective x-line kernels beyond the
//! base ring arithmetic; independence from the paths under test is the point.

use num_bigint::BigUint;
use num_traits::One;

use crate::curve::{AffinePoint, GeneralWeierstrassCurve, MontgomeryCurve};
use crate::modarith::{Element, Error, OpCount};

/// All rational points of `E`, including the point at infinity, by scanning
/// every `x` and solving `B y^2 = x(x^2 + Ax + 1)` with a square root.
/// Guarded to `q <= 2^16`; prime moduli.
pub fn enumerate_points(e: &MontgomeryCurve) -> Result<Vec<AffinePoint>, Error> {
    if e.modulus().bits() > 16 {
        return Err(Error::ModulusTooLarge);
    }
    let m = e.modulus();
    let q: u64 = m.value().try_into().expect("guarded to 2^16");
    let mut ctr = OpCount::new();
    let inv_b = e.b().inv(&mut ctr)?;
    let mut points = vec![AffinePoint::Infinity];
    for xv in 0..q {
        let x = m.element_u64(xv);
        let x2 = x.sqr(&mut ctr);
        let ax = e.a().mul(&x, &mut ctr);
        let rhs = x.mul(&x2.add(&ax, &mut ctr).add(&m.one(), &mut ctr), &mut ctr);
        let y2 = rhs.mul(&inv_b, &mut ctr);
        if y2.is_zero() {
            points.push(AffinePoint::Xy(x, m.zero()));
        } else if let Some(y) = y2.sqrt() {
            points.push(AffinePoint::Xy(x.clone(), y.clone()));
            points.push(AffinePoint::Xy(x, y.negate()));
        }
    }
    Ok(points)
}

/// Invariant factors (largest first) of the 4-torsion subgroup of the listed
/// points, determined by counting the points killed by 2 and by 4.
pub fn four_torsion_structure(points: &[AffinePoint], e: &MontgomeryCurve) -> Vec<u64> {
    let mut n2 = 0u64;
    let mut n4 = 0u64;
    for p in points {
        let two_p = e.add(p, p);
        if two_p.is_infinity() {
            n2 += 1;
        }
        if e.add(&two_p, &two_p).is_infinity() {
            n4 += 1;
        }
    }
    // subgroups of Z/4 x Z/4 are determined by (n2, n4)
    match (n2, n4) {
        (1, 1) => vec![],
        (2, 2) => vec![2],
        (2, 4) => vec![4],
        (4, 4) => vec![2, 2],
        (4, 8) => vec![4, 2],
        (4, 16) => vec![4, 4],
        other => unreachable!("impossible 4-torsion point counts {other:?}"),
    }
}

/// True iff a group with invariant factors `have` contains a subgroup with
/// invariant factors `want` (both largest-first, entries dividing 4).
pub fn contains_structure(have: &[u64], want: &[u64]) -> bool {
    if want.len() > have.len() {
        return false;
    }
    want.iter().zip(have.iter()).all(|(w, h)| h % w == 0)
}

/// Invariant-factor decomposition `(n1, n2)` of the full group of rational
/// points, with `n2 | n1` and `n1 * n2 = #E`: the exponent `n1` is the lcm
/// of all point orders, and elliptic curve groups have rank at most 2.
pub fn group_structure(points: &[AffinePoint], e: &MontgomeryCurve) -> (BigUint, BigUint) {
    let total = BigUint::from(points.len());
    let mut exponent = BigUint::one();
    for p in points {
        exponent = num_integer::Integer::lcm(&exponent, &e.point_order(p));
    }
    let second = &total / &exponent;
    (exponent, second)
}

/// Where an x-coordinate lifts: the curve, its fixed quadratic twist
/// (`B' = B * least nonsquare`), or 2-torsion shared by both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftedX {
    /// `(x, y)` on `E` with `y != 0`.
    Curve(AffinePoint),
    /// `(x, y')` on the twist with `y' != 0`.
    Twist(AffinePoint),
    /// `(x, 0)`, a 2-torsion point on both the curve and the twist.
    TwoTorsion(AffinePoint),
}

/// Lifts `x` to a point on `E` or on its quadratic twist. Every field
/// element lands in exactly one of the three cases. Prime moduli.
pub fn lift_x(e: &MontgomeryCurve, x: &Element) -> Result<LiftedX, Error> {
    let m = e.modulus();
    let mut ctr = OpCount::new();
    let x2 = x.sqr(&mut ctr);
    let ax = e.a().mul(x, &mut ctr);
    let rhs = x.mul(&x2.add(&ax, &mut ctr).add(&m.one(), &mut ctr), &mut ctr);
    if rhs.is_zero() {
        return Ok(LiftedX::TwoTorsion(AffinePoint::Xy(x.clone(), m.zero())));
    }
    let y2 = rhs.mul(&e.b().inv(&mut ctr)?, &mut ctr);
    if let Some(y) = y2.sqrt() {
        return Ok(LiftedX::Curve(AffinePoint::Xy(x.clone(), y)));
    }
    let twist = e.twist()?;
    let y2_twist = rhs.mul(&twist.b().inv(&mut ctr)?, &mut ctr);
    let y = y2_twist
        .sqrt()
        .expect("rhs/B' must be square when rhs/B is not");
    Ok(LiftedX::Twist(AffinePoint::Xy(x.clone(), y)))
}

/// Affine chord-and-tangent addition on a general Weierstrass model
/// `y^2 = x^3 + f2 x^2 + f1 x + f0`. Used to cross-check the projective
/// x-only formulas for those models.
pub fn weierstrass_add(
    w: &GeneralWeierstrassCurve,
    p: &AffinePoint,
    q: &AffinePoint,
) -> AffinePoint {
    let m = w.modulus().clone();
    let (xp, yp) = match p {
        AffinePoint::Infinity => return q.clone(),
        AffinePoint::Xy(x, y) => (x, y),
    };
    let (xq, yq) = match q {
        AffinePoint::Infinity => return p.clone(),
        AffinePoint::Xy(x, y) => (x, y),
    };
    let mut ctr = OpCount::new();
    let ctr = &mut ctr;
    let lambda = if xp == xq {
        if *yp == yq.negate() {
            return AffinePoint::Infinity;
        }
        // (3x^2 + 2 f2 x + f1) / 2y
        let num = m
            .element_u64(3)
            .mul(&xp.sqr(ctr), ctr)
            .add(&m.element_u64(2).mul(&w.f2, ctr).mul(xp, ctr), ctr)
            .add(&w.f1, ctr);
        let den = m.element_u64(2).mul(yp, ctr);
        num.mul(&den.inv(ctr).expect("y != 0 in tangent branch"), ctr)
    } else {
        let num = yq.sub(yp, ctr);
        let den = xq.sub(xp, ctr);
        num.mul(&den.inv(ctr).expect("distinct x"), ctr)
    };
    // x3 = l^2 - f2 - xP - xQ
    let x3 = lambda.sqr(ctr).sub(&w.f2, ctr).sub(xp, ctr).sub(xq, ctr);
    let y3 = lambda.mul(&xp.sub(&x3, ctr), ctr).sub(yp, ctr);
    AffinePoint::Xy(x3, y3)
}
