//! Modular arithmetic over an odd modulus with exact operation accounting.
//!
//! The same types serve prime fields (where inversion, Legendre symbols and
//! square roots are available) and composite residue rings `Z/NZ` (as used
//! by ECM, where none of those are). Every ring operation takes an explicit
//! [`OpCount`] context and bumps exactly one counter, so algorithm costs can
//! be asserted exactly in terms of multiplications `M`, squarings `S`,
//! constant multiplications `C`, additions `a` and subtractions `s`.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Errors reported by the arithmetic layer and the layers built on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Modulus was even or smaller than 3.
    InvalidModulus,
    /// Inverse of zero requested.
    DivisionByZero,
    /// A field-only operation was invoked on a modulus not asserted prime.
    NonPrimeModulus,
    /// Byte string of the wrong length passed to `decode`.
    WrongLength { expected: usize, got: usize },
    /// Curve parameters with `B = 0` or `A^2 = 4`.
    SingularCurve,
    /// Suyama seed violating `a*b*(a^2-1)*(9a^2-1) != 0`.
    InvalidSuyamaSeed,
    /// Conversion to short Weierstrass form requires characteristic != 3.
    CharacteristicThree,
    /// Enumeration-based routine called with a modulus above its guard.
    ModulusTooLarge,
    /// Scalar multiplication with recovery needs a base point outside `E[2]`.
    TwoTorsionInput,
    /// Malformed curve configuration text.
    BadConfig(String),
    /// ECM configuration rejected (even, prime power, tiny, bad bound).
    BadEcmInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidModulus => write!(f, "modulus must be odd and at least 3"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NonPrimeModulus => write!(f, "operation requires a modulus asserted prime"),
            Error::WrongLength { expected, got } => {
                write!(
                    f,
                    "encoding has wrong length: expected {expected} bytes, got {got}"
                )
            }
            Error::SingularCurve => write!(f, "singular curve parameters (B = 0 or A^2 = 4)"),
            Error::InvalidSuyamaSeed => {
                write!(
                    f,
                    "invalid Suyama seed: a*b*(a^2-1)*(9a^2-1) must be nonzero"
                )
            }
            Error::CharacteristicThree => {
                write!(f, "conversion not defined in characteristic 3")
            }
            Error::ModulusTooLarge => write!(f, "modulus exceeds the enumeration guard"),
            Error::TwoTorsionInput => {
                write!(f, "base point lies in E[2]; recovery is undefined")
            }
            Error::BadConfig(msg) => write!(f, "bad curve config: {msg}"),
            Error::BadEcmInput(msg) => write!(f, "bad ECM input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Tallies of counted ring operations.
///
/// `mul`/`sqr`/`cmul` are full multiplications, squarings and multiplications
/// by a per-curve constant; `add`/`sub` are ring additions and subtractions.
/// Counters only ever increase while a computation runs.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCount {
    pub mul: u64,
    pub sqr: u64,
    pub cmul: u64,
    pub add: u64,
    pub sub: u64,
}

impl OpCount {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sum of all counters.
    pub fn total(&self) -> u64 {
        self.mul + self.sqr + self.cmul + self.add + self.sub
    }

    /// Counter-wise difference `self - earlier`; panics if any counter went
    /// backwards (they never should).
    pub fn since(&self, earlier: &OpCount) -> OpCount {
        OpCount {
            mul: self.mul - earlier.mul,
            sqr: self.sqr - earlier.sqr,
            cmul: self.cmul - earlier.cmul,
            add: self.add - earlier.add,
            sub: self.sub - earlier.sub,
        }
    }

    /// Counter-wise `self + n * other`.
    pub fn plus_scaled(&self, other: &OpCount, n: u64) -> OpCount {
        OpCount {
            mul: self.mul + n * other.mul,
            sqr: self.sqr + n * other.sqr,
            cmul: self.cmul + n * other.cmul,
            add: self.add + n * other.add,
            sub: self.sub + n * other.sub,
        }
    }
}

impl fmt::Display for OpCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}M + {}S + {}C + {}a + {}s",
            self.mul, self.sqr, self.cmul, self.add, self.sub
        )
    }
}

#[derive(Debug, PartialEq, Eq)]
struct ModulusRepr {
    value: BigUint,
    is_prime_asserted: bool,
    byte_len: usize,
}

/// An odd modulus `m >= 3`, either a prime `q` (caller-asserted) or a
/// composite `N`. Cheap to clone and share across threads.
#[derive(Debug, Clone)]
pub struct Modulus(Arc<ModulusRepr>);

impl PartialEq for Modulus {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.value == other.0.value
    }
}

impl Eq for Modulus {}

impl Modulus {
    /// Builds a modulus. `is_prime_asserted` is the caller's claim and gates
    /// the field-only operations (`inv`, `legendre`, `sqrt`); it is not
    /// verified here; use [`is_probable_prime`] for a Miller-Rabin check.
    pub fn new(value: BigUint, is_prime_asserted: bool) -> Result<Self, Error> {
        if value.is_even() || value < BigUint::from(3u32) {
            return Err(Error::InvalidModulus);
        }
        let byte_len = ((value.bits() + 7) / 8) as usize;
        Ok(Modulus(Arc::new(ModulusRepr {
            value,
            is_prime_asserted,
            byte_len,
        })))
    }

    pub fn prime(value: u64) -> Self {
        Self::new(BigUint::from(value), true).expect("odd prime >= 3")
    }

    pub fn value(&self) -> &BigUint {
        &self.0.value
    }

    pub fn is_prime_asserted(&self) -> bool {
        self.0.is_prime_asserted
    }

    /// Fixed encoding width: `ceil(bitlen(m) / 8)` bytes.
    pub fn byte_len(&self) -> usize {
        self.0.byte_len
    }

    pub fn bits(&self) -> u64 {
        self.0.value.bits()
    }

    /// Residue of `value` modulo `m`.
    pub fn element(&self, value: BigUint) -> Element {
        let residue = if value < self.0.value {
            value
        } else {
            value % &self.0.value
        };
        Element {
            residue,
            modulus: self.clone(),
        }
    }

    pub fn element_u64(&self, value: u64) -> Element {
        self.element(BigUint::from(value))
    }

    /// Residue of a signed integer (negatives wrap into `[0, m)`).
    pub fn element_i64(&self, value: i64) -> Element {
        if value >= 0 {
            self.element(BigUint::from(value as u64))
        } else {
            self.element_u64(value.unsigned_abs()).negate()
        }
    }

    pub fn zero(&self) -> Element {
        self.element(BigUint::zero())
    }

    pub fn one(&self) -> Element {
        self.element(BigUint::one())
    }

    /// Smallest quadratic nonresidue, by ascending scan. Prime moduli only.
    pub fn least_nonsquare(&self) -> Result<Element, Error> {
        if !self.is_prime_asserted() {
            return Err(Error::NonPrimeModulus);
        }
        let mut g = BigUint::from(2u32);
        while &g < self.value() {
            let e = self.element(g.clone());
            if e.legendre()? == -1 {
                return Ok(e);
            }
            g += 1u32;
        }
        // Reached only for m < 5; m = 3 has nonsquare 2, so never in practice.
        Err(Error::NonPrimeModulus)
    }
}

/// A residue in `[0, m)` tied to its modulus. Binary operations require both
/// operands to share the modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    residue: BigUint,
    modulus: Modulus,
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Element {
    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.residue.is_one()
    }

    fn check_same_modulus(&self, other: &Element) {
        assert!(
            self.modulus == other.modulus,
            "modulus mismatch: {} vs {}",
            self.modulus.value(),
            other.modulus.value()
        );
    }

    /// `self + other mod m`; counts one `a`.
    pub fn add(&self, other: &Element, ctr: &mut OpCount) -> Element {
        self.check_same_modulus(other);
        ctr.add += 1;
        let mut t = &self.residue + &other.residue;
        if t >= *self.modulus.value() {
            t -= self.modulus.value();
        }
        Element {
            residue: t,
            modulus: self.modulus.clone(),
        }
    }

    /// `self - other mod m`; counts one `s`.
    pub fn sub(&self, other: &Element, ctr: &mut OpCount) -> Element {
        self.check_same_modulus(other);
        ctr.sub += 1;
        let residue = if self.residue >= other.residue {
            &self.residue - &other.residue
        } else {
            self.modulus.value() - &other.residue + &self.residue
        };
        Element {
            residue,
            modulus: self.modulus.clone(),
        }
    }

    /// `self * other mod m`; counts one `M`.
    pub fn mul(&self, other: &Element, ctr: &mut OpCount) -> Element {
        self.check_same_modulus(other);
        ctr.mul += 1;
        Element {
            residue: (&self.residue * &other.residue) % self.modulus.value(),
            modulus: self.modulus.clone(),
        }
    }

    /// `self^2 mod m`; counts one `S`.
    pub fn sqr(&self, ctr: &mut OpCount) -> Element {
        ctr.sqr += 1;
        Element {
            residue: (&self.residue * &self.residue) % self.modulus.value(),
            modulus: self.modulus.clone(),
        }
    }

    /// `self * value mod m` where `self` plays the role of a fixed curve
    /// constant; same result as `mul` but counted as one `C`.
    pub fn cmul(&self, value: &Element, ctr: &mut OpCount) -> Element {
        self.check_same_modulus(value);
        ctr.cmul += 1;
        Element {
            residue: (&self.residue * &value.residue) % self.modulus.value(),
            modulus: self.modulus.clone(),
        }
    }

    /// `-self mod m`. Not a counted ring operation (negation is free in the
    /// cost model); used for constructing constants and by the group law
    /// oracle, never inside counted kernels.
    pub fn negate(&self) -> Element {
        if self.residue.is_zero() {
            self.clone()
        } else {
            Element {
                residue: self.modulus.value() - &self.residue,
                modulus: self.modulus.clone(),
            }
        }
    }

    /// `self^e mod m` by left-to-right square-and-multiply over the bits of
    /// `e`: exactly `bitlen(e) - 1` squarings and `popcount(e) - 1`
    /// multiplications (none for `e = 0`, which returns 1).
    pub fn pow(&self, e: &BigUint, ctr: &mut OpCount) -> Element {
        if e.is_zero() {
            return self.modulus.one();
        }
        let bits = e.bits();
        let mut acc = self.clone();
        for i in (0..bits - 1).rev() {
            acc = acc.sqr(ctr);
            if e.bit(i) {
                acc = acc.mul(self, ctr);
            }
        }
        acc
    }

    /// Multiplicative inverse on a prime modulus, computed by Fermat as
    /// `self^(q-2)`. Counted through `ctr` like any `pow`.
    pub fn inv(&self, ctr: &mut OpCount) -> Result<Element, Error> {
        if !self.modulus.is_prime_asserted() {
            return Err(Error::NonPrimeModulus);
        }
        if self.residue.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let e = self.modulus.value() - BigUint::from(2u32);
        Ok(self.pow(&e, ctr))
    }

    /// Inverse in an arbitrary odd residue ring via the extended Euclidean
    /// algorithm. On failure returns the offending `gcd(self, m) > 1`, which
    /// ECM converts directly into a factor probe.
    pub fn try_inv_ring(&self) -> Result<Element, BigUint> {
        if self.residue.is_zero() {
            return Err(self.modulus.value().clone());
        }
        let a = BigInt::from(self.residue.clone());
        let m = BigInt::from(self.modulus.value().clone());
        let ext = a.extended_gcd(&m);
        if !ext.gcd.is_one() {
            return Err(ext.gcd.to_biguint().expect("gcd of nonnegative inputs"));
        }
        let mut x = ext.x % &m;
        if x.sign() == num_bigint::Sign::Minus {
            x += &m;
        }
        Ok(self
            .modulus
            .element(x.to_biguint().expect("normalized to [0, m)")))
    }

    /// Legendre symbol on a prime modulus: 0 for zero, +1 for a nonzero
    /// square, -1 otherwise. Computed as `self^((q-1)/2)`; not counted.
    pub fn legendre(&self) -> Result<i8, Error> {
        if !self.modulus.is_prime_asserted() {
            return Err(Error::NonPrimeModulus);
        }
        if self.residue.is_zero() {
            return Ok(0);
        }
        let e = (self.modulus.value() - BigUint::one()) >> 1;
        let r = self.residue.modpow(&e, self.modulus.value());
        if r.is_one() {
            Ok(1)
        } else {
            Ok(-1)
        }
    }

    /// Square root on a prime modulus, if one exists. Returns the canonical
    /// representative with even residue. Uses the `(q+1)/4` exponent when
    /// `q = 3 (mod 4)` and Tonelli-Shanks otherwise. Not counted.
    pub fn sqrt(&self) -> Option<Element> {
        if !self.modulus.is_prime_asserted() {
            return None;
        }
        if self.residue.is_zero() {
            return Some(self.clone());
        }
        match self.legendre() {
            Ok(1) => {}
            _ => return None,
        }
        let q = self.modulus.value();
        let root = if (q % BigUint::from(4u32)) == BigUint::from(3u32) {
            let e = (q + BigUint::one()) >> 2;
            self.residue.modpow(&e, q)
        } else {
            tonelli_shanks(&self.residue, q)
        };
        let root = if root.is_even() { root } else { q - &root };
        Some(self.modulus.element(root))
    }

    /// Fixed-length little-endian encoding, `byte_len(m)` bytes.
    pub fn encode(&self) -> Vec<u8> {
        let mut bytes = self.residue.to_bytes_le();
        bytes.resize(self.modulus.byte_len(), 0);
        bytes
    }
}

/// Decodes a fixed-length little-endian byte string, reducing out-of-range
/// values modulo `m` rather than rejecting them (mirroring the permissive
/// x-coordinate intake of x-only Diffie-Hellman).
pub fn decode(bytes: &[u8], modulus: &Modulus) -> Result<Element, Error> {
    if bytes.len() != modulus.byte_len() {
        return Err(Error::WrongLength {
            expected: modulus.byte_len(),
            got: bytes.len(),
        });
    }
    Ok(modulus.element(BigUint::from_bytes_le(bytes)))
}

/// `gcd(a, b)` with `gcd(0, b) = b`.
pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

/// Tonelli-Shanks for `q = 1 (mod 4)`; `n` must be a nonzero square mod `q`.
fn tonelli_shanks(n: &BigUint, q: &BigUint) -> BigUint {
    let one = BigUint::one();
    // q - 1 = t * 2^s with t odd
    let mut t = q - &one;
    let mut s = 0u64;
    while t.is_even() {
        t >>= 1;
        s += 1;
    }
    // any quadratic nonresidue z
    let exp_half = (q - &one) >> 1;
    let mut z = BigUint::from(2u32);
    while z.modpow(&exp_half, q) == one {
        z += 1u32;
    }
    let mut c = z.modpow(&t, q);
    let mut x = n.modpow(&((&t + &one) >> 1), q);
    let mut b = n.modpow(&t, q);
    let mut m = s;
    while !b.is_one() {
        // least i with b^(2^i) = 1
        let mut i = 0u64;
        let mut probe = b.clone();
        while !probe.is_one() {
            probe = (&probe * &probe) % q;
            i += 1;
        }
        let gap = m - i - 1;
        let mut cc = c;
        for _ in 0..gap {
            cc = (&cc * &cc) % q;
        }
        c = (&cc * &cc) % q;
        x = (&x * &cc) % q;
        b = (&b * &c) % q;
        m = i;
    }
    x
}

/// Miller-Rabin with `rounds` pseudorandom bases drawn from a seeded
/// generator; deterministic for a given `(n, rounds, seed)`.
pub fn is_probable_prime(n: &BigUint, rounds: u32, seed: u64) -> bool {
    let two = BigUint::from(2u32);
    let three = BigUint::from(3u32);
    if *n < two {
        return false;
    }
    if *n == two || *n == three {
        return true;
    }
    if n.is_even() {
        return false;
    }
    for p in [3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut r = 0u64;
    while d.is_even() {
        d >>= 1;
        r += 1;
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let lo = BigUint::from(2u32);
    let hi = n - &two; // exclusive upper bound for gen_biguint_range
    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&lo, &hi);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
