//! Montgomery curve parameters, the affine group law, torsion structure,
//! the Suyama family, and conversions to short Weierstrass and twisted
//! Edwards models.
//!
//! Everything here works in affine coordinates with explicit degenerate-case
//! branches. This module is the readable reference against which the
//! projective x-line kernels are validated; it is deliberately not
//! constant-time and never handles secret data.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::modarith::{Element, Error, Modulus, OpCount};

/// A Montgomery curve `B*y^2 = x*(x^2 + A*x + 1)` over an odd modulus,
/// with the ladder constant `(A+2)/4` and the recovery constants `2A`, `2B`
/// cached at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MontgomeryCurve {
    a: Element,
    b: Element,
    a24: Element,
    two_a: Element,
    two_b: Element,
    modulus: Modulus,
}

/// A point of the full curve: either the point at infinity or an affine pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffinePoint {
    Infinity,
    Xy(Element, Element),
}

impl AffinePoint {
    pub fn xy(x: Element, y: Element) -> Self {
        AffinePoint::Xy(x, y)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, AffinePoint::Infinity)
    }

    pub fn coords(&self) -> Option<(&Element, &Element)> {
        match self {
            AffinePoint::Infinity => None,
            AffinePoint::Xy(x, y) => Some((x, y)),
        }
    }
}

impl MontgomeryCurve {
    /// Validates `B != 0` and `A^2 != 4` and caches the derived constants.
    /// Works over composite moduli too (4 is invertible mod any odd `m`).
    pub fn new(a: Element, b: Element) -> Result<Self, Error> {
        let modulus = a.modulus().clone();
        assert!(
            a.modulus() == b.modulus(),
            "curve parameters over different moduli"
        );
        if b.is_zero() {
            return Err(Error::SingularCurve);
        }
        let two = modulus.element_u64(2);
        let minus_two = two.negate();
        if a == two || a == minus_two {
            return Err(Error::SingularCurve);
        }
        let mut scratch = OpCount::new();
        let inv4 = modulus
            .element_u64(4)
            .try_inv_ring()
            .expect("4 is invertible modulo an odd modulus");
        let a_plus_2 = a.add(&two, &mut scratch);
        let a24 = a_plus_2.mul(&inv4, &mut scratch);
        let two_a = a.add(&a, &mut scratch);
        let two_b = b.add(&b, &mut scratch);
        Ok(MontgomeryCurve {
            a,
            b,
            a24,
            two_a,
            two_b,
            modulus,
        })
    }

    pub fn from_u64(modulus: &Modulus, a: u64, b: u64) -> Result<Self, Error> {
        Self::new(modulus.element_u64(a), modulus.element_u64(b))
    }

    pub fn a(&self) -> &Element {
        &self.a
    }

    pub fn b(&self) -> &Element {
        &self.b
    }

    /// The cached ladder constant `(A+2)/4`.
    pub fn a24(&self) -> &Element {
        &self.a24
    }

    pub fn two_a(&self) -> &Element {
        &self.two_a
    }

    pub fn two_b(&self) -> &Element {
        &self.two_b
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// The rational 2-torsion point `T = (0, 0)`.
    pub fn point_t(&self) -> AffinePoint {
        AffinePoint::Xy(self.modulus.zero(), self.modulus.zero())
    }

    /// `j = 256*(A^2 - 3)^3 / (A^2 - 4)`; independent of `B`. Prime moduli.
    pub fn j_invariant(&self) -> Result<Element, Error> {
        let m = &self.modulus;
        let mut ctr = OpCount::new();
        let a2 = self.a.sqr(&mut ctr);
        let num = a2.sub(&m.element_u64(3), &mut ctr);
        let num = num.sqr(&mut ctr).mul(&num, &mut ctr);
        let num = m.element_u64(256).mul(&num, &mut ctr);
        let den = a2.sub(&m.element_u64(4), &mut ctr);
        Ok(num.mul(&den.inv(&mut ctr)?, &mut ctr))
    }

    /// Right-hand side `x*(x^2 + A*x + 1)`.
    fn rhs(&self, x: &Element, ctr: &mut OpCount) -> Element {
        let x2 = x.sqr(ctr);
        let ax = self.a.mul(x, ctr);
        x.mul(&x2.add(&ax, ctr).add(&self.modulus.one(), ctr), ctr)
    }

    /// True iff `p` is the point at infinity or satisfies the affine equation.
    pub fn is_on_curve(&self, p: &AffinePoint) -> bool {
        match p {
            AffinePoint::Infinity => true,
            AffinePoint::Xy(x, y) => {
                let mut ctr = OpCount::new();
                self.b.mul(&y.sqr(&mut ctr), &mut ctr) == self.rhs(x, &mut ctr)
            }
        }
    }

    /// `-P`: negates the y-coordinate.
    pub fn neg(&self, p: &AffinePoint) -> AffinePoint {
        match p {
            AffinePoint::Infinity => AffinePoint::Infinity,
            AffinePoint::Xy(x, y) => AffinePoint::Xy(x.clone(), y.negate()),
        }
    }

    /// Chord-and-tangent addition with all degenerate branches spelled out:
    /// identity, `P = -Q`, the tangent case `P = Q` (2-torsion doubles to
    /// infinity), and the generic secant case. Prime moduli.
    pub fn add(&self, p: &AffinePoint, q: &AffinePoint) -> AffinePoint {
        debug_assert!(self.is_on_curve(p), "add: first input off curve");
        debug_assert!(self.is_on_curve(q), "add: second input off curve");
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
                // covers P = -Q and the 2-torsion tangent (y = 0)
                return AffinePoint::Infinity;
            }
            // tangent: (3x^2 + 2Ax + 1) / (2By)
            let x2 = xp.sqr(ctr);
            let num = self
                .modulus
                .element_u64(3)
                .mul(&x2, ctr)
                .add(&self.two_a.mul(xp, ctr), ctr)
                .add(&self.modulus.one(), ctr);
            let den = self.two_b.mul(yp, ctr);
            num.mul(&den.inv(ctr).expect("2By != 0 off 2-torsion"), ctr)
        } else {
            // secant: (yQ - yP) / (xQ - xP)
            let num = yq.sub(yp, ctr);
            let den = xq.sub(xp, ctr);
            num.mul(&den.inv(ctr).expect("xQ != xP in secant branch"), ctr)
        };
        // x3 = B*l^2 - (xP + xQ) - A,  y3 = l*(xP - x3) - yP
        let x3 = self
            .b
            .mul(&lambda.sqr(ctr), ctr)
            .sub(&xp.add(xq, ctr), ctr)
            .sub(&self.a, ctr);
        let y3 = lambda.mul(&xp.sub(&x3, ctr), ctr).sub(yp, ctr);
        AffinePoint::Xy(x3, y3)
    }

    /// `P - Q`.
    pub fn sub(&self, p: &AffinePoint, q: &AffinePoint) -> AffinePoint {
        self.add(p, &self.neg(q))
    }

    /// `[k]P` by left-to-right double-and-add built only on `add`/`neg`.
    /// This is the reference oracle for every ladder and chain in the crate.
    pub fn scalar_mul_naive(&self, k: &BigUint, p: &AffinePoint) -> AffinePoint {
        debug_assert!(self.is_on_curve(p), "scalar_mul_naive: input off curve");
        if k.is_zero() {
            return AffinePoint::Infinity;
        }
        let mut acc = p.clone();
        for i in (0..k.bits() - 1).rev() {
            acc = self.add(&acc, &acc);
            if k.bit(i) {
                acc = self.add(&acc, p);
            }
        }
        acc
    }

    /// Order of a point by iterated addition. Test-scale only.
    pub fn point_order(&self, p: &AffinePoint) -> BigUint {
        if p.is_infinity() {
            return BigUint::one();
        }
        let mut acc = p.clone();
        let mut n = BigUint::one();
        while !acc.is_infinity() {
            acc = self.add(&acc, p);
            n += 1u32;
        }
        n
    }

    /// Squareness classification of `B(A+2)`, `B(A-2)` and `A^2 - 4`,
    /// together with the guaranteed 4-torsion subgroups of the curve and its
    /// quadratic twist. Prime moduli.
    pub fn classify_torsion(&self) -> Result<TorsionReport, Error> {
        let mut ctr = OpCount::new();
        let two = self.modulus.element_u64(2);
        let a_plus_2 = self.a.add(&two, &mut ctr);
        let a_minus_2 = self.a.sub(&two, &mut ctr);
        let b_square = self.b.legendre()? == 1;
        let plus = self.b.mul(&a_plus_2, &mut ctr).legendre()? == 1;
        let minus = self.b.mul(&a_minus_2, &mut ctr).legendre()? == 1;
        let full_two_torsion = a_plus_2.mul(&a_minus_2, &mut ctr).legendre()? == 1;
        // B(A+2) * B(A-2) = B^2 (A^2 - 4): the three conditions cannot all fail
        assert!(
            plus || minus || full_two_torsion,
            "at least one of B(A+2), B(A-2), A^2-4 must be square"
        );
        let (curve, twist) = match (plus, minus) {
            (true, true) => (TorsionStructure::Z4xZ2, TorsionStructure::Z2xZ2),
            (false, false) => (TorsionStructure::Z2xZ2, TorsionStructure::Z4xZ2),
            _ => (TorsionStructure::Z4, TorsionStructure::Z4),
        };
        Ok(TorsionReport {
            b_square,
            a_plus_2_square: plus,
            a_minus_2_square: minus,
            full_two_torsion,
            curve,
            twist,
        })
    }

    /// `#E(F_q)` by character sum: `q + 1 + sum_x chi(rhs(x)/B)`. Guarded to
    /// `q <= 2^20`; prime moduli.
    pub fn group_order_naive(&self) -> Result<BigUint, Error> {
        if self.modulus.bits() > 20 {
            return Err(Error::ModulusTooLarge);
        }
        let chi_b = self.b.legendre()?;
        let mut ctr = OpCount::new();
        let q: u64 = self.modulus.value().try_into().expect("guarded to 2^20");
        let mut order: i64 = q as i64 + 1;
        let mut x = self.modulus.zero();
        let one = self.modulus.one();
        for _ in 0..q {
            // chi(rhs/B) = chi(rhs) * chi(B)
            order += (self.rhs(&x, &mut ctr).legendre()? * chi_b) as i64;
            x = x.add(&one, &mut ctr);
        }
        Ok(BigUint::from(order as u64))
    }

    /// The quadratic twist with `B' = B * (least nonsquare)`. Prime moduli.
    pub fn twist(&self) -> Result<MontgomeryCurve, Error> {
        let mut ctr = OpCount::new();
        let u = self.modulus.least_nonsquare()?;
        MontgomeryCurve::new(self.a.clone(), self.b.mul(&u, &mut ctr))
    }
}

/// 4-torsion subgroup shapes that Montgomery curves guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionStructure {
    /// `Z/4 x Z/2`
    Z4xZ2,
    /// `Z/4`
    Z4,
    /// `Z/2 x Z/2`
    Z2xZ2,
}

impl TorsionStructure {
    /// Invariant factors, largest first.
    pub fn invariant_factors(&self) -> &'static [u64] {
        match self {
            TorsionStructure::Z4xZ2 => &[4, 2],
            TorsionStructure::Z4 => &[4],
            TorsionStructure::Z2xZ2 => &[2, 2],
        }
    }
}

impl std::fmt::Display for TorsionStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TorsionStructure::Z4xZ2 => write!(f, "Z/4 x Z/2"),
            TorsionStructure::Z4 => write!(f, "Z/4"),
            TorsionStructure::Z2xZ2 => write!(f, "Z/2 x Z/2"),
        }
    }
}

/// Squareness data behind the 4-torsion classification, plus the guaranteed
/// subgroup of the curve and of its quadratic twist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionReport {
    pub b_square: bool,
    /// `B(A+2)` is a square.
    pub a_plus_2_square: bool,
    /// `B(A-2)` is a square.
    pub a_minus_2_square: bool,
    /// `A^2 - 4` is a square, i.e. the curve has full rational 2-torsion.
    pub full_two_torsion: bool,
    pub curve: TorsionStructure,
    pub twist: TorsionStructure,
}

/// Suyama's rational family: given `a, b` with `a*b*(a^2-1)*(9a^2-1) != 0`,
/// the curve with `A = -(3a^4 + 6a^2 - 1)/(4a^3)` and `B = (a^2-1)^2/(4ab^2)`
/// carries `(a, b)` as a point of order 3, so its order is divisible by 12.
pub fn suyama(a: &Element, b: &Element) -> Result<(MontgomeryCurve, AffinePoint), Error> {
    let m = a.modulus().clone();
    let mut ctr = OpCount::new();
    let ctr = &mut ctr;
    let a2 = a.sqr(ctr);
    let a2_minus_1 = a2.sub(&m.one(), ctr);
    let nine_a2_minus_1 = m.element_u64(9).mul(&a2, ctr).sub(&m.one(), ctr);
    let product = a
        .mul(b, ctr)
        .mul(&a2_minus_1, ctr)
        .mul(&nine_a2_minus_1, ctr);
    if product.is_zero() {
        return Err(Error::InvalidSuyamaSeed);
    }
    // A = -(3a^4 + 6a^2 - 1) / 4a^3
    let a4 = a2.sqr(ctr);
    let num = m
        .element_u64(3)
        .mul(&a4, ctr)
        .add(&m.element_u64(6).mul(&a2, ctr), ctr)
        .sub(&m.one(), ctr);
    let four_a3 = m.element_u64(4).mul(&a2, ctr).mul(a, ctr);
    let inv_4a3 = four_a3
        .try_inv_ring()
        .map_err(|_| Error::InvalidSuyamaSeed)?;
    let big_a = num.negate().mul(&inv_4a3, ctr);
    // B = (a^2 - 1)^2 / 4ab^2
    let four_ab2 = m.element_u64(4).mul(a, ctr).mul(&b.sqr(ctr), ctr);
    let inv_4ab2 = four_ab2
        .try_inv_ring()
        .map_err(|_| Error::InvalidSuyamaSeed)?;
    let big_b = a2_minus_1.sqr(ctr).mul(&inv_4ab2, ctr);
    let curve = MontgomeryCurve::new(big_a, big_b)?;
    let point = AffinePoint::Xy(a.clone(), b.clone());
    debug_assert!(curve.is_on_curve(&point));
    Ok((curve, point))
}

/// A general Weierstrass model `y^2 = x^3 + f2*x^2 + f1*x + f0`. The short
/// model produced by [`to_weierstrass`] has `f2 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralWeierstrassCurve {
    pub f2: Element,
    pub f1: Element,
    pub f0: Element,
}

impl GeneralWeierstrassCurve {
    pub fn modulus(&self) -> &Modulus {
        self.f2.modulus()
    }

    /// `x^3 + f2*x^2 + f1*x + f0`.
    pub fn rhs(&self, x: &Element, ctr: &mut OpCount) -> Element {
        let x2 = x.sqr(ctr);
        x2.mul(x, ctr)
            .add(&self.f2.mul(&x2, ctr), ctr)
            .add(&self.f1.mul(x, ctr), ctr)
            .add(&self.f0, ctr)
    }

    pub fn is_on_curve(&self, p: &AffinePoint) -> bool {
        match p {
            AffinePoint::Infinity => true,
            AffinePoint::Xy(x, y) => {
                let mut ctr = OpCount::new();
                y.sqr(&mut ctr) == self.rhs(x, &mut ctr)
            }
        }
    }
}

/// The coordinate change between a Montgomery curve and its short
/// Weierstrass model: `(x, y) -> (B(x + A/3), B^2 y)`.
#[derive(Debug, Clone)]
pub struct WeierstrassMap {
    b: Element,
    b2: Element,
    a_third: Element,
}

impl WeierstrassMap {
    pub fn forward(&self, p: &AffinePoint) -> AffinePoint {
        match p {
            AffinePoint::Infinity => AffinePoint::Infinity,
            AffinePoint::Xy(x, y) => {
                let mut ctr = OpCount::new();
                let u = self.b.mul(&x.add(&self.a_third, &mut ctr), &mut ctr);
                let v = self.b2.mul(y, &mut ctr);
                AffinePoint::Xy(u, v)
            }
        }
    }

    pub fn backward(&self, p: &AffinePoint) -> AffinePoint {
        match p {
            AffinePoint::Infinity => AffinePoint::Infinity,
            AffinePoint::Xy(u, v) => {
                let mut ctr = OpCount::new();
                let inv_b = self.b.inv(&mut ctr).expect("B != 0 on a valid curve");
                let inv_b2 = self.b2.inv(&mut ctr).expect("B^2 != 0");
                let x = u.mul(&inv_b, &mut ctr).sub(&self.a_third, &mut ctr);
                let y = v.mul(&inv_b2, &mut ctr);
                AffinePoint::Xy(x, y)
            }
        }
    }
}

/// Short Weierstrass model of a Montgomery curve:
/// `v^2 = u^3 + B^2(1 - A^2/3) u + B^3 A/3 (2A^2/9 - 1)`, together with the
/// point map. Requires characteristic different from 3; prime moduli.
pub fn to_weierstrass(
    e: &MontgomeryCurve,
) -> Result<(GeneralWeierstrassCurve, WeierstrassMap), Error> {
    let m = e.modulus();
    if *m.value() == BigUint::from(3u32) {
        return Err(Error::CharacteristicThree);
    }
    let mut ctr = OpCount::new();
    let ctr = &mut ctr;
    let inv3 = m.element_u64(3).inv(ctr)?;
    let a2 = e.a().sqr(ctr);
    let b2 = e.b().sqr(ctr);
    let b3 = b2.mul(e.b(), ctr);
    let a_third = e.a().mul(&inv3, ctr);
    // f1 = B^2 (1 - A^2/3)
    let f1 = b2.mul(&m.one().sub(&a2.mul(&inv3, ctr), ctr), ctr);
    // f0 = B^3 * A/3 * (2A^2/9 - 1)
    let two_a2_ninth = m.element_u64(2).mul(&a2, ctr).mul(&inv3.sqr(ctr), ctr);
    let f0 = b3
        .mul(&a_third, ctr)
        .mul(&two_a2_ninth.sub(&m.one(), ctr), ctr);
    let w = GeneralWeierstrassCurve {
        f2: m.zero(),
        f1,
        f0,
    };
    let map = WeierstrassMap {
        b: e.b().clone(),
        b2,
        a_third,
    };
    Ok((w, map))
}

/// Reverse direction: a short Weierstrass model `v^2 = u^3 + a*u + b` has a
/// Montgomery model iff the cubic has a root `alpha` with `3*alpha^2 + a` a
/// nonzero square `beta^2`; the result is `E_(3*alpha/beta, 1/beta)`. Roots
/// are tried in ascending residue order and the first admissible one wins.
/// Returns `None` when no root qualifies. Prime moduli.
pub fn from_weierstrass(w: &GeneralWeierstrassCurve) -> Result<Option<MontgomeryCurve>, Error> {
    assert!(
        w.f2.is_zero(),
        "from_weierstrass expects a short model (f2 = 0)"
    );
    let m = w.modulus();
    if !m.is_prime_asserted() {
        return Err(Error::NonPrimeModulus);
    }
    let mut roots = cubic_roots(w)?;
    roots.sort_by(|a, b| a.residue().cmp(b.residue()));
    let mut ctr = OpCount::new();
    for alpha in roots {
        let beta2 = m
            .element_u64(3)
            .mul(&alpha.sqr(&mut ctr), &mut ctr)
            .add(&w.f1, &mut ctr);
        if beta2.is_zero() {
            continue;
        }
        if let Some(beta) = beta2.sqrt() {
            let inv_beta = beta.inv(&mut ctr)?;
            let a = m
                .element_u64(3)
                .mul(&alpha, &mut ctr)
                .mul(&inv_beta, &mut ctr);
            return Ok(Some(MontgomeryCurve::new(a, inv_beta)?));
        }
    }
    Ok(None)
}

/// Roots in `F_q` of `x^3 + f1*x + f0`: exhaustive scan for `q <= 2^20`,
/// deterministic gcd-based factoring above that.
fn cubic_roots(w: &GeneralWeierstrassCurve) -> Result<Vec<Element>, Error> {
    let m = w.modulus();
    let mut ctr = OpCount::new();
    if m.bits() <= 20 {
        let q: u64 = m.value().try_into().expect("guarded");
        let mut roots = Vec::new();
        for x in 0..q {
            let e = m.element_u64(x);
            if w.rhs(&e, &mut ctr).is_zero() {
                roots.push(e);
            }
        }
        return Ok(roots);
    }
    Ok(poly::roots_of_cubic(w))
}

/// Dense polynomial arithmetic over `F_q`, used only to find the rational
/// roots of `x^3 + f1 x + f0` over fields too large to scan: the product of
/// the distinct rational linear factors is `gcd(x^q - x, f)`, computed with
/// a modular exponentiation, and multi-root factors are split with
/// `gcd(g, (x + s)^((q-1)/2) - 1)` for shifts `s = 0, 1, 2, ...`, which is
/// deterministic.
mod poly {
    use super::*;

    fn degree(f: &[Element]) -> Option<usize> {
        f.iter().rposition(|c| !c.is_zero())
    }

    /// gcd of dense polynomials, returned monic.
    fn poly_gcd(a: Vec<Element>, b: Vec<Element>, ctr: &mut OpCount) -> Vec<Element> {
        let (mut a, mut b) = (a, b);
        loop {
            let db = match degree(&b) {
                None => {
                    let da = degree(&a).unwrap_or(0);
                    let lead = a[da].clone();
                    if !lead.is_zero() && !lead.is_one() {
                        let inv = lead.inv(ctr).expect("nonzero lead");
                        for c in a.iter_mut() {
                            *c = c.mul(&inv, ctr);
                        }
                    }
                    a.truncate(da + 1);
                    return a;
                }
                Some(d) => d,
            };
            let da = match degree(&a) {
                None => {
                    std::mem::swap(&mut a, &mut b);
                    continue;
                }
                Some(d) => d,
            };
            if da < db {
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            // a -= (lead_a / lead_b) x^(da-db) * b
            let coef = a[da].mul(&b[db].inv(ctr).expect("nonzero lead"), ctr);
            for i in 0..=db {
                let t = coef.mul(&b[i], ctr);
                a[i + da - db] = a[i + da - db].sub(&t, ctr);
            }
        }
    }

    fn poly_div_exact(f: &[Element], g: &[Element], ctr: &mut OpCount) -> Vec<Element> {
        let df = degree(f).expect("nonzero dividend");
        let dg = degree(g).expect("nonzero divisor");
        let m = f[0].modulus().clone();
        let mut rem: Vec<Element> = f.to_vec();
        let mut quot = vec![m.zero(); df - dg + 1];
        let inv_lead = g[dg].inv(ctr).expect("nonzero lead");
        for i in (dg..=df).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let c = rem[i].mul(&inv_lead, ctr);
            quot[i - dg] = c.clone();
            for j in 0..=dg {
                let t = c.mul(&g[j], ctr);
                rem[i - dg + j] = rem[i - dg + j].sub(&t, ctr);
            }
        }
        quot
    }

    fn mul_mod(a: &[Element], b: &[Element], f: &[Element], ctr: &mut OpCount) -> Vec<Element> {
        let m = a[0].modulus().clone();
        let da = degree(a).unwrap_or(0);
        let db = degree(b).unwrap_or(0);
        let mut prod = vec![m.zero(); da + db + 1];
        for i in 0..=da {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..=db {
                if b[j].is_zero() {
                    continue;
                }
                prod[i + j] = prod[i + j].add(&a[i].mul(&b[j], ctr), ctr);
            }
        }
        let df = degree(f).expect("nonzero modulus poly");
        let inv_lead = f[df].inv(ctr).expect("nonzero lead");
        for i in (df..prod.len()).rev() {
            if prod[i].is_zero() {
                continue;
            }
            let c = prod[i].mul(&inv_lead, ctr);
            prod[i] = m.zero();
            for j in 0..df {
                let t = c.mul(&f[j], ctr);
                prod[i - df + j] = prod[i - df + j].sub(&t, ctr);
            }
        }
        prod.truncate(df.max(1));
        prod.resize(df.max(1), m.zero());
        prod
    }

    fn pow_mod(base: &[Element], e: &BigUint, f: &[Element], ctr: &mut OpCount) -> Vec<Element> {
        let m = base[0].modulus().clone();
        let df = degree(f).expect("nonzero modulus poly");
        if e.is_zero() {
            let mut one = vec![m.zero(); df.max(1)];
            one[0] = m.one();
            return one;
        }
        let mut acc = base.to_vec();
        for i in (0..e.bits() - 1).rev() {
            acc = mul_mod(&acc, &acc, f, ctr);
            if e.bit(i) {
                acc = mul_mod(&acc, base, f, ctr);
            }
        }
        acc
    }

    fn roots_of_split_poly(f: Vec<Element>, m: &Modulus, ctr: &mut OpCount) -> Vec<Element> {
        match degree(&f) {
            None | Some(0) => vec![],
            Some(1) => {
                // c1 x + c0 = 0
                let root = f[0].negate().mul(&f[1].inv(ctr).expect("deg 1"), ctr);
                vec![root]
            }
            Some(d) => {
                let exp = (m.value() - BigUint::one()) >> 1;
                let mut shift = 0u64;
                loop {
                    let mut base = vec![m.element_u64(shift), m.one()];
                    base.resize(d.max(2), m.zero());
                    let half = pow_mod(&base, &exp, &f, ctr);
                    let mut half_minus_1 = half;
                    half_minus_1[0] = half_minus_1[0].sub(&m.one(), ctr);
                    let g = poly_gcd(f.clone(), half_minus_1, ctr);
                    let dg = degree(&g).unwrap_or(0);
                    if dg > 0 && dg < d {
                        let h = poly_div_exact(&f, &g, ctr);
                        let mut roots = roots_of_split_poly(g, m, ctr);
                        roots.extend(roots_of_split_poly(h, m, ctr));
                        return roots;
                    }
                    shift += 1;
                }
            }
        }
    }

    pub fn roots_of_cubic(w: &GeneralWeierstrassCurve) -> Vec<Element> {
        let m = w.modulus().clone();
        let mut ctr = OpCount::new();
        let ctr = &mut ctr;
        let cubic = vec![w.f0.clone(), w.f1.clone(), m.zero(), m.one()];
        // x^q mod f
        let x = vec![m.zero(), m.one(), m.zero()];
        let xq = pow_mod(&x, m.value(), &cubic, ctr);
        // gcd(x^q - x, f) = product of the distinct rational linear factors
        let mut diff = xq;
        diff[1] = diff[1].sub(&m.one(), ctr);
        let g = poly_gcd(cubic, diff, ctr);
        roots_of_split_poly(g, &m, ctr)
    }
}

/// A twisted Edwards model `a*u^2 + v^2 = 1 + d*u^2*v^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdwardsCurve {
    pub a: Element,
    pub d: Element,
}

impl EdwardsCurve {
    pub fn is_on_curve(&self, u: &Element, v: &Element) -> bool {
        let mut ctr = OpCount::new();
        let u2 = u.sqr(&mut ctr);
        let v2 = v.sqr(&mut ctr);
        let lhs = self.a.mul(&u2, &mut ctr).add(&v2, &mut ctr);
        let rhs = u2
            .mul(&v2, &mut ctr)
            .mul(&self.d, &mut ctr)
            .add(&u.modulus().one(), &mut ctr);
        lhs == rhs
    }
}

/// The birationally equivalent twisted Edwards model: `a = (A+2)/B`,
/// `d = (A-2)/B`. Always defined for a valid Montgomery curve. Prime moduli.
pub fn to_edwards(e: &MontgomeryCurve) -> Result<EdwardsCurve, Error> {
    let m = e.modulus();
    let mut ctr = OpCount::new();
    let two = m.element_u64(2);
    let inv_b = e.b().inv(&mut ctr)?;
    let a = e.a().add(&two, &mut ctr).mul(&inv_b, &mut ctr);
    let d = e.a().sub(&two, &mut ctr).mul(&inv_b, &mut ctr);
    Ok(EdwardsCurve { a, d })
}

/// Montgomery-to-Edwards point map `(x, y) -> (x/y, (x-1)/(x+1))`, with the
/// special images `O -> (0, 1)` and `T -> (0, -1)`. Points with `y = 0`
/// (other than `T`) or `x = -1` have no affine Edwards image and map to
/// `None`; their images live at infinity in the projective Edwards closure.
pub fn edwards_point_map(e: &MontgomeryCurve, p: &AffinePoint) -> Option<(Element, Element)> {
    let m = e.modulus();
    let (x, y) = match p {
        AffinePoint::Infinity => return Some((m.zero(), m.one())),
        AffinePoint::Xy(x, y) => (x, y),
    };
    if x.is_zero() && y.is_zero() {
        return Some((m.zero(), m.one().negate()));
    }
    let mut ctr = OpCount::new();
    if y.is_zero() || *x == m.one().negate() {
        return None;
    }
    let u = x.mul(&y.inv(&mut ctr).expect("y != 0"), &mut ctr);
    let x_plus_1 = x.add(&m.one(), &mut ctr);
    let v = x
        .sub(&m.one(), &mut ctr)
        .mul(&x_plus_1.inv(&mut ctr).expect("x != -1"), &mut ctr);
    Some((u, v))
}

/// Edwards-to-Montgomery point map `(u, v) -> ((1+v)/(1-v), (1+v)/((1-v)u))`,
/// with `(0, 1) -> O` and `(0, -1) -> T`. Inputs with `v = 1` or `u = 0`
/// outside those two points have no affine preimage and map to `None`.
pub fn edwards_point_unmap(e: &MontgomeryCurve, u: &Element, v: &Element) -> Option<AffinePoint> {
    let m = e.modulus();
    if u.is_zero() {
        if v.is_one() {
            return Some(AffinePoint::Infinity);
        }
        if *v == m.one().negate() {
            return Some(e.point_t());
        }
        return None;
    }
    if v.is_one() {
        return None;
    }
    let mut ctr = OpCount::new();
    let one_plus_v = m.one().add(v, &mut ctr);
    let inv_one_minus_v = m.one().sub(v, &mut ctr).inv(&mut ctr).expect("v != 1");
    let x = one_plus_v.mul(&inv_one_minus_v, &mut ctr);
    let y = x.mul(&u.inv(&mut ctr).expect("u != 0"), &mut ctr);
    Some(AffinePoint::Xy(x, y))
}

/// A parsed curve configuration: `key = value` lines with decimal or 0x-hex
/// integers. Required keys: `q`, `A`, `B`. Optional: `name`, `r` (subgroup
/// order), `cofactor`, `twist_cofactor`, `base_x`, `scalar_bits`
/// (`cofactor`/`twist_cofactor`/`base_x` are what key exchange needs).
/// Unknown keys are rejected.
#[derive(Debug, Clone)]
pub struct CurveConfig {
    pub name: Option<String>,
    pub q: BigUint,
    pub a: BigUint,
    pub b: BigUint,
    pub r: Option<BigUint>,
    pub cofactor: Option<BigUint>,
    pub twist_cofactor: Option<BigUint>,
    pub base_x: Option<BigUint>,
    pub scalar_bits: Option<u64>,
    /// Caller's primality claim for `q`; config files get `true` and the CLI
    /// verifies with Miller-Rabin before using field-only operations.
    pub q_is_prime: bool,
}

impl CurveConfig {
    pub fn curve(&self) -> Result<MontgomeryCurve, Error> {
        let m = Modulus::new(self.q.clone(), self.q_is_prime)?;
        MontgomeryCurve::new(m.element(self.a.clone()), m.element(self.b.clone()))
    }

    /// `lcm(cofactor, twist_cofactor)`, the multiplier that clears both
    /// small subgroups in x-only key exchange.
    pub fn cofactor_lcm(&self) -> Option<BigUint> {
        match (&self.cofactor, &self.twist_cofactor) {
            (Some(c), Some(t)) => Some(num_integer::Integer::lcm(c, t)),
            (Some(c), None) => Some(c.clone()),
            _ => None,
        }
    }
}

fn parse_int(s: &str) -> Result<BigUint, Error> {
    let s = s.trim();
    let parsed = if let Some(hexpart) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        BigUint::parse_bytes(hexpart.as_bytes(), 16)
    } else {
        BigUint::parse_bytes(s.as_bytes(), 10)
    };
    parsed.ok_or_else(|| Error::BadConfig(format!("bad integer literal: {s:?}")))
}

/// Parses the one-`key = value`-per-line curve configuration format.
/// Blank lines and `#` comments are permitted; unknown keys are not.
pub fn parse_curve_config(text: &str) -> Result<CurveConfig, Error> {
    let mut name = None;
    let mut q = None;
    let mut a = None;
    let mut b = None;
    let mut r = None;
    let mut cofactor = None;
    let mut twist_cofactor = None;
    let mut base_x = None;
    let mut scalar_bits = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::BadConfig(format!("line {}: expected key = value", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "name" => name = Some(value.to_string()),
            "q" => q = Some(parse_int(value)?),
            "A" => a = Some(parse_int(value)?),
            "B" => b = Some(parse_int(value)?),
            "r" => r = Some(parse_int(value)?),
            "cofactor" => cofactor = Some(parse_int(value)?),
            "twist_cofactor" => twist_cofactor = Some(parse_int(value)?),
            "base_x" => base_x = Some(parse_int(value)?),
            "scalar_bits" => {
                scalar_bits = Some(
                    value
                        .parse::<u64>()
                        .map_err(|_| Error::BadConfig(format!("bad scalar_bits: {value:?}")))?,
                )
            }
            other => {
                return Err(Error::BadConfig(format!(
                    "line {}: unknown key {other:?}",
                    lineno + 1
                )))
            }
        }
    }
    Ok(CurveConfig {
        name,
        q: q.ok_or_else(|| Error::BadConfig("missing key q".into()))?,
        a: a.ok_or_else(|| Error::BadConfig("missing key A".into()))?,
        b: b.ok_or_else(|| Error::BadConfig("missing key B".into()))?,
        r,
        cofactor,
        twist_cofactor,
        base_x,
        scalar_bits,
        q_is_prime: true,
    })
}
