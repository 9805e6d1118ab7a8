//! Scalar pseudomultiplication: the two-register ladder in the group (the
//! analysis model), the x-line ladder, the branch-free uniform ladder with
//! constant-time conditional swaps, y-coordinate recovery, the combined full
//! scalar multiplication, the pseudo-complete `x0` map, and x-only
//! Diffie-Hellman over named curves.
//!
//! Two scalar presentation conventions are supported and selected per call:
//! a scalar taken at its natural bit length with the top bit set (chains and
//! the classic ladder), and a fixed-width bitstring whose leading zeros are
//! absorbed by starting the ladder from `(x(O), x(P))` (key exchange, where
//! the loop length must not depend on the scalar value).

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;

use crate::curve::{AffinePoint, CurveConfig, MontgomeryCurve};
use crate::modarith::{decode, Element, Error, OpCount};
use crate::xline::{xadd, xadd_normalized, xdbl, XZPoint};

/// A nonnegative scalar with a most-significant-first bit view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar(BigUint);

impl Scalar {
    pub fn new(value: BigUint) -> Self {
        Scalar(value)
    }

    pub fn from_u64(value: u64) -> Self {
        Scalar(BigUint::from(value))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// Number of bits; 1 for the value 0 (a single zero bit).
    pub fn bitlen(&self) -> u64 {
        self.0.bits().max(1)
    }

    pub fn bit(&self, i: u64) -> u8 {
        u8::from(self.0.bit(i))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_even(&self) -> bool {
        !self.0.bit(0)
    }
}

impl From<u64> for Scalar {
    fn from(v: u64) -> Self {
        Scalar::from_u64(v)
    }
}

/// Scalar presentation for the uniform ladder and the `x0` map.
#[derive(Debug, Clone)]
pub enum ScalarBits {
    /// `k >= 1` at its natural bit length (top bit set by construction).
    Natural(Scalar),
    /// `k < 2^width` as exactly `width` bits, leading zeros included.
    Fixed { value: Scalar, width: u64 },
}

impl ScalarBits {
    pub fn natural(k: Scalar) -> Self {
        assert!(!k.is_zero(), "natural presentation requires k >= 1");
        ScalarBits::Natural(k)
    }

    pub fn fixed(k: Scalar, width: u64) -> Self {
        assert!(width >= 1, "fixed presentation requires width >= 1");
        assert!(
            k.value().bits() <= width,
            "scalar does not fit in {width} bits"
        );
        ScalarBits::Fixed { value: k, width }
    }

    pub fn scalar(&self) -> &Scalar {
        match self {
            ScalarBits::Natural(k) => k,
            ScalarBits::Fixed { value, .. } => value,
        }
    }

    pub fn width(&self) -> u64 {
        match self {
            ScalarBits::Natural(k) => k.bitlen(),
            ScalarBits::Fixed { width, .. } => *width,
        }
    }
}

/// Result pair of the x-line ladder: `x([k]P)` and `x([k+1]P)`.
#[derive(Debug, Clone)]
pub struct LadderOutput {
    pub xk: XZPoint,
    pub xk1: XZPoint,
}

/// The two-register ladder computed with full group operations, kept as an
/// analysis model: the register difference `R1 - R0 = P` is invariant, and
/// after each step `R0 = [floor(k / 2^i)]P`. Both invariants are checked in
/// debug builds ([k]-multiples only on small fields, where the check is
/// affordable). Requires `k >= 1`; prime moduli.
pub fn group_ladder(e: &MontgomeryCurve, k: &Scalar, p: &AffinePoint) -> AffinePoint {
    assert!(!k.is_zero(), "group ladder requires k >= 1");
    debug_assert!(e.is_on_curve(p));
    let ell = k.bitlen();
    let mut r0 = p.clone();
    let mut r1 = e.add(p, p);
    for i in (0..ell - 1).rev() {
        if k.bit(i) == 0 {
            let new_r1 = e.add(&r0, &r1);
            r0 = e.add(&r0, &r0);
            r1 = new_r1;
        } else {
            let new_r0 = e.add(&r0, &r1);
            r1 = e.add(&r1, &r1);
            r0 = new_r0;
        }
        debug_assert!(e.add(&r0, p) == r1, "register difference invariant broken");
        #[cfg(debug_assertions)]
        if e.modulus().bits() <= 20 {
            let prefix = k.value() >> i;
            debug_assert!(
                e.scalar_mul_naive(&prefix, p) == r0,
                "register value invariant broken at bit {i}"
            );
        }
    }
    r0
}

/// The x-line ladder: `x(P) -> (x([k]P), x([k+1]P))` using one
/// pseudo-doubling per bit and one pseudo-addition per bit after the top
/// bit, all differences being the fixed `x(P)` (normalized away when
/// `Z_P = 1`). If `P` is `O` or `T` the outputs have `Z = 0`. Branches on
/// scalar bits; see [`uniform_ladder`] for the constant-time variant.
/// Requires `k >= 1`.
pub fn x_ladder(e: &MontgomeryCurve, k: &Scalar, xp: &XZPoint, ctr: &mut OpCount) -> LadderOutput {
    assert!(!k.is_zero(), "x-line ladder requires k >= 1");
    let normalized = xp.z.is_one();
    let ell = k.bitlen();
    let mut x0 = xp.clone();
    let mut x1 = xdbl(xp, e, ctr);
    for i in (0..ell - 1).rev() {
        let added = if normalized {
            xadd_normalized(&x0, &x1, &xp.x, ctr)
        } else {
            xadd(&x0, &x1, xp, ctr)
        };
        if k.bit(i) == 0 {
            x0 = xdbl(&x0, e, ctr);
            x1 = added;
        } else {
            x1 = xdbl(&x1, e, ctr);
            x0 = added;
        }
    }
    LadderOutput { xk: x0, xk1: x1 }
}

/// Constant-time conditional swap over the canonical fixed-length
/// little-endian encodings: the selection mask is the all-ones or all-zeros
/// byte extension of `b`, combined with bitwise and/xor only: no branches,
/// no short-circuiting.
pub fn cswap(b: u8, x0: &XZPoint, x1: &XZPoint) -> (XZPoint, XZPoint) {
    debug_assert!(b <= 1);
    let m = x0.x.modulus().clone();
    let mask = 0u8.wrapping_sub(b);
    let swap_words = |a: &Element, b_el: &Element| {
        let mut ab = a.encode();
        let mut bb = b_el.encode();
        for (ai, bi) in ab.iter_mut().zip(bb.iter_mut()) {
            let v = mask & (*ai ^ *bi);
            *ai ^= v;
            *bi ^= v;
        }
        (
            decode(&ab, &m).expect("same fixed length"),
            decode(&bb, &m).expect("same fixed length"),
        )
    };
    let (x0x, x1x) = swap_words(&x0.x, &x1.x);
    let (x0z, x1z) = swap_words(&x0.z, &x1.z);
    (XZPoint::new(x0x, x0z), XZPoint::new(x1x, x1z))
}

/// Branch-free ladder: the bit-dependent register roles of [`x_ladder`] are
/// replaced by conditional swaps keyed on consecutive-bit xors, so the
/// sequence of field operations depends only on the presented width, never
/// on bit values.
///
/// Natural presentation starts from `(x([2]P), x(P))` over the `width - 1`
/// bits below the (set) top bit; fixed presentation starts from
/// `(x(O), x(P))` and runs all `width` iterations, the registers holding
/// their initial values until the first set bit arrives. One final swap on
/// bit 0 puts `x([k]P)` in the first register.
pub fn uniform_ladder(
    e: &MontgomeryCurve,
    k: &ScalarBits,
    xp: &XZPoint,
    ctr: &mut OpCount,
) -> XZPoint {
    let normalized = xp.z.is_one();
    let scalar = k.scalar();
    let (mut x0, mut x1, mut prev, start_bit) = match k {
        ScalarBits::Natural(s) => {
            let ell = s.bitlen();
            (xdbl(xp, e, ctr), xp.clone(), 1u8, ell - 1)
        }
        ScalarBits::Fixed { width, .. } => {
            (XZPoint::infinity(e.modulus()), xp.clone(), 0u8, *width)
        }
    };
    for i in (0..start_bit).rev() {
        let bit = scalar.bit(i);
        let (a, b) = cswap(prev ^ bit, &x0, &x1);
        x0 = a;
        x1 = b;
        let added = if normalized {
            xadd_normalized(&x0, &x1, &xp.x, ctr)
        } else {
            xadd(&x0, &x1, xp, ctr)
        };
        x0 = xdbl(&x0, e, ctr);
        x1 = added;
        prev = bit;
    }
    let (out, _) = cswap(prev, &x0, &x1);
    out
}

/// A projective point `(X : Y : Z)` of the full curve, as produced by
/// y-recovery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectivePoint {
    pub x: Element,
    pub y: Element,
    pub z: Element,
}

impl ProjectivePoint {
    /// Normalizes to affine coordinates; `Z = 0` is the point at infinity.
    /// Prime moduli.
    pub fn to_affine(&self, ctr: &mut OpCount) -> AffinePoint {
        if self.z.is_zero() {
            return AffinePoint::Infinity;
        }
        let inv = self.z.inv(ctr).expect("nonzero Z");
        AffinePoint::Xy(self.x.mul(&inv, ctr), self.y.mul(&inv, ctr))
    }
}

/// Okeya-Sakurai y-coordinate recovery: reconstructs `Q = (X' : Y' : Z')`
/// from the full point `P`, `x(Q)` and `x(P + Q)`, using
///
/// ```text
/// yQ = [(xP xQ + 1)(xP + xQ + 2A) - 2A - (xP - xQ)^2 x+] / (2B yP).
/// ```
///
/// Preconditions (`P` not in `E[2]`; `Q` not in `{P, -P, O}`) are the
/// caller's responsibility: violating them yields an unspecified output.
/// The two constant multiplications use the cached `2A` and `2B`.
/// Cost: 10M + 1S + 2C + 3a + 3s.
pub fn recover(
    e: &MontgomeryCurve,
    p: &AffinePoint,
    xq: &XZPoint,
    xpq: &XZPoint,
    ctr: &mut OpCount,
) -> ProjectivePoint {
    let (xp, yp) = p.coords().expect("P must be affine");
    let v1 = xp.mul(&xq.z, ctr);
    let v2 = xq.x.add(&v1, ctr);
    let v3 = xq.x.sub(&v1, ctr);
    let v3 = v3.sqr(ctr);
    let v3 = v3.mul(&xpq.x, ctr);
    let v1 = e.two_a().cmul(&xq.z, ctr);
    let v2 = v2.add(&v1, ctr);
    let v4 = xp.mul(&xq.x, ctr);
    let v4 = v4.add(&xq.z, ctr);
    let v2 = v2.mul(&v4, ctr);
    let v1 = v1.mul(&xq.z, ctr);
    let v2 = v2.sub(&v1, ctr);
    let v2 = v2.mul(&xpq.z, ctr);
    let y_out = v2.sub(&v3, ctr);
    let v1 = e.two_b().cmul(yp, ctr);
    let v1 = v1.mul(&xq.z, ctr);
    let v1 = v1.mul(&xpq.z, ctr);
    let x_out = v1.mul(&xq.x, ctr);
    let z_out = v1.mul(&xq.z, ctr);
    ProjectivePoint {
        x: x_out,
        y: y_out,
        z: z_out,
    }
}

/// Full scalar multiplication `[k]P` on the curve: one x-line ladder
/// followed by y-recovery, with explicit handling of the cases where the
/// recovery relation degenerates (`[k]P` equal to `O`, `T`, `P` or `-P`).
/// Requires `P` outside `E[2]`; prime moduli.
pub fn scalar_mul(e: &MontgomeryCurve, k: &Scalar, p: &AffinePoint) -> Result<AffinePoint, Error> {
    let (xp, yp) = match p {
        AffinePoint::Infinity => return Err(Error::TwoTorsionInput),
        AffinePoint::Xy(x, y) => (x, y),
    };
    if yp.is_zero() {
        return Err(Error::TwoTorsionInput);
    }
    if k.is_zero() {
        return Ok(AffinePoint::Infinity);
    }
    let mut ctr = OpCount::new();
    let xp_point = XZPoint::from_affine_x(xp.clone());
    let out = x_ladder(e, k, &xp_point, &mut ctr);
    if out.xk.z.is_zero() {
        return Ok(AffinePoint::Infinity);
    }
    if out.xk.x.is_zero() {
        return Ok(e.point_t());
    }
    // x([k]P) = x(P) happens only for [k]P = P or -P; [k+1]P tells which
    if out.xk.projectively_equal(&xp_point) {
        return Ok(if out.xk1.z.is_zero() {
            e.neg(p)
        } else {
            p.clone()
        });
    }
    Ok(recover(e, p, &out.xk, &out.xk1, &mut ctr).to_affine(&mut ctr))
}

/// The pseudo-complete x-coordinate map for key exchange: treats any field
/// element as the x-coordinate of a point on the curve or its twist, runs
/// the uniform ladder on `(x : 1)`, and returns `X_k * Z_k^(q-2)`; the
/// affine x-coordinate of `[k]P`, or 0 when `[k]P` is the point at infinity
/// (and in particular whenever `x` was 0). No point validation is performed
/// or needed. Prime moduli.
pub fn x0(e: &MontgomeryCurve, x: &Element, k: &ScalarBits, ctr: &mut OpCount) -> Element {
    assert!(e.modulus().is_prime_asserted(), "x0 requires a prime field");
    let out = uniform_ladder(e, k, &XZPoint::from_affine_x(x.clone()), ctr);
    let exp = e.modulus().value() - BigUint::from(2u32);
    out.x.mul(&out.z.pow(&exp, ctr), ctr)
}

/// A curve plus the data x-only Diffie-Hellman needs: a base x-coordinate
/// and the cofactors of the curve and its twist.
#[derive(Debug, Clone)]
pub struct DhParams {
    pub curve: MontgomeryCurve,
    pub base_x: Element,
    pub cofactor_lcm: BigUint,
    /// Fixed width of secret scalars (bitstring presentation).
    pub scalar_bits: u64,
}

impl DhParams {
    /// Extracts DH parameters from a curve configuration; requires `base_x`
    /// and cofactor data.
    pub fn from_config(cfg: &CurveConfig) -> Result<Self, Error> {
        let curve = cfg.curve()?;
        let base_x = cfg
            .base_x
            .clone()
            .ok_or_else(|| Error::BadConfig("key exchange needs base_x".into()))?;
        let cofactor_lcm = cfg
            .cofactor_lcm()
            .ok_or_else(|| Error::BadConfig("key exchange needs cofactor data".into()))?;
        let scalar_bits = cfg.scalar_bits.unwrap_or(curve.modulus().bits());
        let base_x = curve.modulus().element(base_x);
        Ok(DhParams {
            curve,
            base_x,
            cofactor_lcm,
            scalar_bits,
        })
    }

    fn bits(&self, secret: &Scalar) -> ScalarBits {
        ScalarBits::fixed(secret.clone(), self.scalar_bits)
    }

    /// Draws a secret scalar: uniform over the multiples of the cofactor
    /// lcm that fit in `scalar_bits` bits. Multiplying out the lcm pins the
    /// secret into the subgroup where small-subgroup leaks are impossible,
    /// on the curve and on the twist alike.
    pub fn keypair<R: Rng + ?Sized>(&self, rng: &mut R) -> (Scalar, Element) {
        let bound = ((BigUint::one() << self.scalar_bits) - BigUint::one()) / &self.cofactor_lcm
            + BigUint::one();
        let secret = Scalar::new(rng.gen_biguint_below(&bound) * &self.cofactor_lcm);
        let public = self.public_key(&secret);
        (secret, public)
    }

    pub fn public_key(&self, secret: &Scalar) -> Element {
        let mut ctr = OpCount::new();
        x0(&self.curve, &self.base_x, &self.bits(secret), &mut ctr)
    }

    pub fn shared_secret(&self, secret: &Scalar, peer_public: &Element) -> Element {
        let mut ctr = OpCount::new();
        x0(&self.curve, peer_public, &self.bits(secret), &mut ctr)
    }
}

/// Registry of curves usable by name. The curve parameters `(q, A, B)` come
/// with subgroup/cofactor data and the conventional base x-coordinates
/// (x = 9 and x = 5), which follow deployed practice.
pub fn named_curve(name: &str) -> Option<CurveConfig> {
    match name {
        "curve25519" => Some(CurveConfig {
            name: Some("curve25519".into()),
            q: (BigUint::one() << 255) - BigUint::from(19u32),
            a: BigUint::from(486662u32),
            b: BigUint::one(),
            r: None,
            cofactor: Some(BigUint::from(8u32)),
            twist_cofactor: Some(BigUint::from(4u32)),
            base_x: Some(BigUint::from(9u32)),
            scalar_bits: Some(255),
            q_is_prime: true,
        }),
        "curve448" => Some(CurveConfig {
            name: Some("curve448".into()),
            q: (BigUint::one() << 448) - (BigUint::one() << 224) - BigUint::one(),
            a: BigUint::from(156326u32),
            b: BigUint::one(),
            r: None,
            cofactor: Some(BigUint::from(4u32)),
            twist_cofactor: Some(BigUint::from(4u32)),
            base_x: Some(BigUint::from(5u32)),
            scalar_bits: Some(448),
            q_is_prime: true,
        }),
        _ => None,
    }
}
