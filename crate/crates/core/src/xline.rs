//! Projective x-line arithmetic: pseudo-addition and pseudo-doubling on
//! `P^1 = E / <negation>`, plus extended variants that tolerate degenerate
//! difference arguments, and the analogous (much more expensive) formulas
//! for general Weierstrass models.
//!
//! Points are classes `(X : Z)`; `(x_P : 1)` for an affine point,
//! `x(O) = (1 : 0)` and `x(T) = (0 : 1)`. The pair `(0, 0)` is not a
//! projective point but is a recognized sentinel produced by the degenerate
//! pseudo-addition cases; callers that require points must check for it. In
//! ECM the degenerate output is the payload, so it is preserved, never
//! normalized away.
//!
//! Neither pseudo-operation reads the twisting parameter `B`, so the same
//! arithmetic serves a curve and all of its quadratic twists. The one place
//! the parameter `A` enters is the single constant multiplication by
//! `(A+2)/4` inside the pseudo-doubling.

use crate::curve::{AffinePoint, GeneralWeierstrassCurve, MontgomeryCurve};
use crate::modarith::{Element, Modulus, OpCount};

/// A projective x-line representative `(X : Z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XZPoint {
    pub x: Element,
    pub z: Element,
}

impl XZPoint {
    pub fn new(x: Element, z: Element) -> Self {
        XZPoint { x, z }
    }

    /// `(x : 1)`.
    pub fn from_affine_x(x: Element) -> Self {
        let one = x.modulus().one();
        XZPoint { x, z: one }
    }

    /// `x(O) = (1 : 0)`.
    pub fn infinity(m: &Modulus) -> Self {
        XZPoint {
            x: m.one(),
            z: m.zero(),
        }
    }

    /// `x(T) = (0 : 1)`.
    pub fn two_torsion(m: &Modulus) -> Self {
        XZPoint {
            x: m.zero(),
            z: m.one(),
        }
    }

    /// The non-point sentinel `(0, 0)`.
    pub fn is_sentinel(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Projective equality `X_p * Z_q = X_q * Z_p`. Panics on the `(0, 0)`
    /// sentinel, which is not a point and compares with nothing.
    pub fn projectively_equal(&self, other: &XZPoint) -> bool {
        assert!(
            !self.is_sentinel() && !other.is_sentinel(),
            "projective comparison with the (0, 0) sentinel"
        );
        let mut scratch = OpCount::new();
        self.x.mul(&other.z, &mut scratch) == other.x.mul(&self.z, &mut scratch)
    }

    /// Normalized affine x-coordinate `X/Z`, or `None` when `Z = 0`.
    /// Prime moduli.
    pub fn to_affine_x(&self, ctr: &mut OpCount) -> Option<Element> {
        if self.z.is_zero() {
            return None;
        }
        let inv = self.z.inv(ctr).expect("nonzero Z on a prime modulus");
        Some(self.x.mul(&inv, ctr))
    }
}

/// `x(P)` for a full point: `(x_P : 1)`, with `x(O) = (1 : 0)`.
pub fn x_of(e: &MontgomeryCurve, p: &AffinePoint) -> XZPoint {
    match p {
        AffinePoint::Infinity => XZPoint::infinity(e.modulus()),
        AffinePoint::Xy(x, _) => XZPoint::from_affine_x(x.clone()),
    }
}

/// Translation by the 2-torsion point `T = (0, 0)` on the x-line: the
/// coordinate swap `(X : Z) -> (Z : X)`, an involution.
pub fn translate_by_t(p: &XZPoint) -> XZPoint {
    XZPoint {
        x: p.z.clone(),
        z: p.x.clone(),
    }
}

/// Differential addition: given `x(P)`, `x(Q)` and the difference
/// `x(P - Q)`, computes `x(P + Q)`.
///
/// ```text
/// X+ = Z- * [(XP - ZP)(XQ + ZQ) + (XP + ZP)(XQ - ZQ)]^2
/// Z+ = X- * [(XP - ZP)(XQ + ZQ) - (XP + ZP)(XQ - ZQ)]^2
/// ```
///
/// When `P - Q` is `O` or `T` the output degenerates (both coordinates zero
/// for the `O` case); the raw field values are returned as computed.
/// Cost: 4M + 2S + 3a + 3s.
pub fn xadd(p: &XZPoint, q: &XZPoint, diff: &XZPoint, ctr: &mut OpCount) -> XZPoint {
    let v0 = p.x.add(&p.z, ctr);
    let v1 = q.x.sub(&q.z, ctr);
    let v1 = v1.mul(&v0, ctr);
    let v0 = p.x.sub(&p.z, ctr);
    let v2 = q.x.add(&q.z, ctr);
    let v2 = v2.mul(&v0, ctr);
    let v3 = v1.add(&v2, ctr);
    let v3 = v3.sqr(ctr);
    let v4 = v1.sub(&v2, ctr);
    let v4 = v4.sqr(ctr);
    let x_out = diff.z.mul(&v3, ctr);
    let z_out = diff.x.mul(&v4, ctr);
    XZPoint { x: x_out, z: z_out }
}

/// [`xadd`] with the difference normalized to `(diff_x : 1)`, saving the
/// multiplication by `Z-`. Cost: 3M + 2S + 3a + 3s.
pub fn xadd_normalized(p: &XZPoint, q: &XZPoint, diff_x: &Element, ctr: &mut OpCount) -> XZPoint {
    let v0 = p.x.add(&p.z, ctr);
    let v1 = q.x.sub(&q.z, ctr);
    let v1 = v1.mul(&v0, ctr);
    let v0 = p.x.sub(&p.z, ctr);
    let v2 = q.x.add(&q.z, ctr);
    let v2 = v2.mul(&v0, ctr);
    let v3 = v1.add(&v2, ctr);
    let v3 = v3.sqr(ctr);
    let v4 = v1.sub(&v2, ctr);
    let v4 = v4.sqr(ctr);
    let z_out = diff_x.mul(&v4, ctr);
    XZPoint { x: v3, z: z_out }
}

/// Pseudo-doubling: `x(P) -> x([2]P)`.
///
/// ```text
/// X2 = (XP + ZP)^2 (XP - ZP)^2
/// Z2 = 4 XP ZP ((XP - ZP)^2 + ((A+2)/4) * 4 XP ZP)
/// ```
///
/// with `4 XP ZP = (XP + ZP)^2 - (XP - ZP)^2`. For `P` in `{O, T}` the
/// output has `Z = 0` (and is in fact exactly `(1 : 0) = x(O)`, the correct
/// image of both). The single `cmul` uses the cached constant `(A+2)/4`,
/// the only appearance of a curve parameter in the x-line arithmetic.
/// Cost: 2M + 2S + 1C + 2a + 2s.
pub fn xdbl(p: &XZPoint, e: &MontgomeryCurve, ctr: &mut OpCount) -> XZPoint {
    let v1 = p.x.add(&p.z, ctr);
    let v1 = v1.sqr(ctr);
    let v2 = p.x.sub(&p.z, ctr);
    let v2 = v2.sqr(ctr);
    let x_out = v1.mul(&v2, ctr);
    let v1 = v1.sub(&v2, ctr);
    let v3 = e.a24().cmul(&v1, ctr);
    let v3 = v3.add(&v2, ctr);
    let z_out = v1.mul(&v3, ctr);
    XZPoint { x: x_out, z: z_out }
}

/// Total pseudo-addition covering the degenerate inputs that arise inside
/// Euclidean chains, where difference arguments vary:
///
/// * `diff = x(O)` means `Q = P`, so the result is `xdbl(p)`;
/// * `diff = x(T)` means `P = Q + T`, so `x(P + Q) = x([2]Q + T)`, the
///   coordinate swap of `xdbl(q)`;
/// * `q = x(O)` returns `p`; `p = x(O)` returns `q`.
///
/// Dispatch uses zero tests on the coordinates only (equality against
/// `(1 : 0)` and `(0 : 1)` is a single zero check each). Variable-time by
/// construction; reserved for chain algorithms over public scalars and never
/// used by the uniform ladder.
pub fn xadd_extended(
    p: &XZPoint,
    q: &XZPoint,
    diff: &XZPoint,
    e: &MontgomeryCurve,
    ctr: &mut OpCount,
) -> XZPoint {
    debug_assert!(!p.is_sentinel() && !q.is_sentinel() && !diff.is_sentinel());
    if diff.z.is_zero() {
        return xdbl(p, e, ctr);
    }
    if diff.x.is_zero() {
        return translate_by_t(&xdbl(q, e, ctr));
    }
    if q.z.is_zero() {
        return p.clone();
    }
    if p.z.is_zero() {
        return q.clone();
    }
    xadd(p, q, diff, ctr)
}

/// Pseudo-addition on a general Weierstrass model
/// `y^2 = x^3 + f2 x^2 + f1 x + f0`:
///
/// ```text
/// X+ = Z- * [(XP XQ - f1 ZP ZQ)^2 - 4 f0 (ZP XQ + XP ZQ + f2 ZP ZQ) ZP ZQ]
/// Z+ = X- * (ZP XQ - XP ZQ)^2
/// ```
///
/// The `f0 = 0` specialization drops the second term of `X+`. Instrumented
/// for op counting but not scheduled for minimal cost; it exists to make the
/// cost gap against the Montgomery-form formulas measurable.
pub fn generic_weierstrass_xadd(
    p: &XZPoint,
    q: &XZPoint,
    diff: &XZPoint,
    w: &GeneralWeierstrassCurve,
    ctr: &mut OpCount,
) -> XZPoint {
    let m = w.modulus().clone();
    let xpxq = p.x.mul(&q.x, ctr);
    let zpzq = p.z.mul(&q.z, ctr);
    let zpxq = p.z.mul(&q.x, ctr);
    let xpzq = p.x.mul(&q.z, ctr);
    let main = xpxq.sub(&w.f1.cmul(&zpzq, ctr), ctr).sqr(ctr);
    let bracket = if w.f0.is_zero() {
        main
    } else {
        let inner = zpxq.add(&xpzq, ctr).add(&w.f2.cmul(&zpzq, ctr), ctr);
        let correction = m
            .element_u64(4)
            .cmul(&w.f0, ctr)
            .mul(&inner, ctr)
            .mul(&zpzq, ctr);
        main.sub(&correction, ctr)
    };
    let x_out = diff.z.mul(&bracket, ctr);
    let z_out = diff.x.mul(&zpxq.sub(&xpzq, ctr).sqr(ctr), ctr);
    XZPoint { x: x_out, z: z_out }
}

/// Pseudo-doubling on a general Weierstrass model:
///
/// ```text
/// X2 = (XP^2 - f1 ZP^2)^2 - 4 f0 (2 XP ZP + f2 ZP^2) ZP^2
/// Z2 = 4 (XP^3 ZP + f2 XP^2 ZP^2 + f1 XP ZP^3 + f0 ZP^4)
/// ```
///
/// (`Z2` is the homogenization of `4 * rhs(x)` by `Z^4`; specializing
/// `(f2, f1, f0) = (A, 1, 0)` recovers `4 XP ZP (XP^2 + A XP ZP + ZP^2)`.)
pub fn generic_weierstrass_xdbl(
    p: &XZPoint,
    w: &GeneralWeierstrassCurve,
    ctr: &mut OpCount,
) -> XZPoint {
    let m = w.modulus().clone();
    let four = m.element_u64(4);
    let xx = p.x.sqr(ctr);
    let zz = p.z.sqr(ctr);
    let xz = p.x.mul(&p.z, ctr);
    let main = xx.sub(&w.f1.cmul(&zz, ctr), ctr).sqr(ctr);
    let x_out = if w.f0.is_zero() {
        main
    } else {
        let inner = xz.add(&xz, ctr).add(&w.f2.cmul(&zz, ctr), ctr);
        let correction = four.cmul(&w.f0, ctr).mul(&inner, ctr).mul(&zz, ctr);
        main.sub(&correction, ctr)
    };
    let mut acc = xx.mul(&xz, ctr);
    acc = acc.add(&w.f2.cmul(&xx.mul(&zz, ctr), ctr), ctr);
    acc = acc.add(&w.f1.cmul(&xz.mul(&zz, ctr), ctr), ctr);
    if !w.f0.is_zero() {
        acc = acc.add(&w.f0.cmul(&zz.sqr(ctr), ctr), ctr);
    }
    let z_out = four.cmul(&acc, ctr);
    XZPoint { x: x_out, z: z_out }
}
