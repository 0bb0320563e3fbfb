//! Prime-field scalars 𝔽_p.
//!
//! The coefficient field of every module in this crate is a prime field with
//! modulus below 2³², so products fit in `u64` without overflow.

use std::fmt;

use crate::error::{Error, Result};

/// Largest permitted modulus (exclusive). Keeps `a * b` inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 32;

/// Deterministic trial-division primality test; moduli are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Checks that `p` is usable as a field modulus.
pub fn validate_modulus(p: u64) -> Result<()> {
    if p >= MAX_MODULUS {
        return Err(Error::Param(format!("field modulus {p} too large")));
    }
    if !is_prime(p) {
        return Err(Error::Param(format!("field modulus {p} is not prime")));
    }
    Ok(())
}

pub(crate) fn fadd(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

pub(crate) fn fsub(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b % p) % p
}

pub(crate) fn fmul(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub(crate) fn fneg(a: u64, p: u64) -> u64 {
    (p - a % p) % p
}

/// Inverse of `a` mod prime `p` by the extended Euclidean algorithm.
/// Panics on zero; callers check first.
pub(crate) fn finv(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero in F_{p}");
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i128) as u64
}

/// One element of 𝔽_p: a residue in `[0, p)` together with its prime modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    residue: u64,
    modulus: u64,
}

impl FieldElement {
    /// Reduces any signed integer into `[0, p)`.
    pub fn new(value: i64, p: u64) -> Self {
        FieldElement {
            residue: value.rem_euclid(p as i64) as u64,
            modulus: p,
        }
    }

    pub fn from_residue(residue: u64, p: u64) -> Self {
        FieldElement {
            residue: residue % p,
            modulus: p,
        }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    fn check(&self, other: &FieldElement) {
        assert_eq!(
            self.modulus, other.modulus,
            "mixed field moduli {} and {}",
            self.modulus, other.modulus
        );
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.check(other);
        FieldElement::from_residue(
            fadd(self.residue, other.residue, self.modulus),
            self.modulus,
        )
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.check(other);
        FieldElement::from_residue(
            fsub(self.residue, other.residue, self.modulus),
            self.modulus,
        )
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.check(other);
        FieldElement::from_residue(
            fmul(self.residue, other.residue, self.modulus),
            self.modulus,
        )
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement::from_residue(fneg(self.residue, self.modulus), self.modulus)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FieldElement> {
        (!self.is_zero())
            .then(|| FieldElement::from_residue(finv(self.residue, self.modulus), self.modulus))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}
