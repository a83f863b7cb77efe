//! Arithmetic in `GF(p^d)` for odd primes `p`.
//!
//! Elements are polynomials over `Z_p` of degree below `d`, reduced modulo a
//! monic irreducible polynomial. Each element carries a label
//! `Σ c_i p^i` in `[0, p^d)`, which fixes a canonical element order.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::is_prime;

/// Largest field order; elements become permutation points.
pub const MAX_ORDER: u64 = crate::permutation::MAX_DEGREE as u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    label: u32,
}

impl FieldElement {
    pub fn label(self) -> u32 {
        self.label
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    deg: u32,
    /// Constant term first, trailing 1.
    modulus: Vec<u32>,
    order: u32,
}

impl FieldSpec {
    /// `GF(p^deg)` with the canonical modulus from [`find_irreducible`].
    pub fn new(p: u32, deg: u32) -> Result<Self> {
        let modulus = find_irreducible(p, deg)?;
        Self::with_modulus(p, modulus)
    }

    /// `GF(p^d)` with an explicit monic modulus of degree `d`, checked for
    /// irreducibility.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        check_characteristic(p)?;
        let deg = modulus.len().saturating_sub(1) as u32;
        if deg == 0 {
            return Err(Error::InvalidModulus("degree must be at least 1".into()));
        }
        if modulus.last() != Some(&1) {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if let Some(c) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::InvalidModulus(alloc::format!(
                "coefficient {c} not reduced mod {p}"
            )));
        }
        let order = (p as u64).checked_pow(deg).unwrap_or(u64::MAX);
        if order > MAX_ORDER {
            return Err(Error::FieldTooLarge(order));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidModulus("modulus is reducible".into()));
        }
        Ok(FieldSpec {
            p,
            deg,
            modulus,
            order: order as u32,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn deg(&self) -> u32 {
        self.deg
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn element(&self, label: u32) -> Result<FieldElement> {
        if label >= self.order {
            return Err(Error::InvalidElement {
                label,
                order: self.order,
            });
        }
        Ok(FieldElement { label })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { label: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { label: 1 }
    }

    /// Coefficients `c_0, ..., c_{d-1}` of an element.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let mut out = vec![0; self.deg as usize];
        let mut x = a.label;
        for c in out.iter_mut() {
            *c = x % self.p;
            x /= self.p;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElement {
        debug_assert!(coeffs.len() <= self.deg as usize);
        let label = coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c % self.p);
        FieldElement { label }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
        self.from_coeffs(&sum)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let c: Vec<u32> = self
            .coeffs(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.from_coeffs(&c)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let prod = poly_mul(&self.coeffs(a), &self.coeffs(b), self.p);
        let (_, rem) = poly_divmod(&prod, &self.modulus, self.p);
        self.from_coeffs(&rem)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.label == 0 {
            return Err(Error::DivisionByZero);
        }
        // Invariant: s_i * a ≡ r_i (mod modulus).
        let p = self.p;
        let (mut r0, mut r1) = (self.modulus.clone(), trim(self.coeffs(a)));
        let (mut s0, mut s1): (Vec<u32>, Vec<u32>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1, p);
            let s = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant because the modulus is irreducible.
        debug_assert_eq!(r0.len(), 1);
        let scale = inv_mod(r0[0], p);
        let inv: Vec<u32> = s0.iter().map(|&c| c * scale % p).collect();
        Ok(self.from_coeffs(&inv))
    }

    /// All elements by increasing label, zero first.
    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.order)
            .map(|label| FieldElement { label })
            .collect()
    }

    /// From each pair `{x, -x}` of nonzero elements, the smaller label.
    pub fn half_set(&self) -> Vec<FieldElement> {
        self.elements()
            .into_iter()
            .filter(|&x| x.label != 0 && x.label < self.neg(x).label)
            .collect()
    }

    /// Checks that `t` holds exactly one element of every `{x, -x}` pair.
    pub fn validate_half_set(&self, t: &[FieldElement]) -> Result<()> {
        let want = (self.order - 1) / 2;
        if t.len() != want as usize {
            return Err(Error::InvalidHalfSet(alloc::format!(
                "expected {want} elements, got {}",
                t.len()
            )));
        }
        let mut seen = vec![false; self.order as usize];
        for &x in t {
            if x.label >= self.order {
                return Err(Error::InvalidElement {
                    label: x.label,
                    order: self.order,
                });
            }
            if x.label == 0 {
                return Err(Error::InvalidHalfSet("zero is not allowed".into()));
            }
            let nx = self.neg(x).label;
            if seen[x.label as usize] || seen[nx as usize] {
                return Err(Error::InvalidHalfSet(alloc::format!(
                    "label {} repeats or its negative {nx} is also present",
                    x.label
                )));
            }
            seen[x.label as usize] = true;
        }
        Ok(())
    }
}

fn check_characteristic(p: u32) -> Result<()> {
    if p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// The least monic irreducible polynomial of degree `deg` over `Z_p`.
///
/// Candidates are ordered by their non-leading coefficients read from the
/// highest degree down, i.e. by the integer `Σ c_i p^i`. Returned constant
/// term first, trailing 1.
pub fn find_irreducible(p: u32, deg: u32) -> Result<Vec<u32>> {
    check_characteristic(p)?;
    if deg == 0 {
        return Err(Error::InvalidModulus("degree must be at least 1".into()));
    }
    let count = (p as u64).checked_pow(deg).filter(|&c| c <= MAX_ORDER);
    let count = count.ok_or(Error::FieldTooLarge((p as u64).saturating_pow(deg)))?;
    (0..count)
        .map(|m| monic_from_index(m, p, deg))
        .find(|poly| is_irreducible(poly, p))
        .ok_or_else(|| Error::InvalidModulus("no irreducible polynomial found".into()))
}

fn monic_from_index(mut m: u64, p: u32, deg: u32) -> Vec<u32> {
    let mut poly = Vec::with_capacity(deg as usize + 1);
    for _ in 0..deg {
        poly.push((m % p as u64) as u32);
        m /= p as u64;
    }
    poly.push(1);
    poly
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let poly = trim(poly.to_vec());
    let deg = match poly.len() {
        0 | 1 => return false,
        len => len as u32 - 1,
    };
    for d in 1..=deg / 2 {
        for m in 0..(p as u64).pow(d) {
            let divisor = monic_from_index(m, p, d);
            if poly_divmod(&poly, &divisor, p).1.is_empty() {
                return false;
            }
        }
    }
    true
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat in the prime field.
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
fn poly_divmod(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    assert!(!b.is_empty(), "polynomial division by zero");
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = inv_mod(*b.last().unwrap(), p) as u64;
    let mut quot = vec![0u32; rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let factor = (*rem.last().unwrap() as u64 * lead_inv % p as u64) as u32;
        quot[shift] = factor;
        for (i, &c) in b.iter().enumerate() {
            let sub = (c as u64 * factor as u64 % p as u64) as u32;
            rem[shift + i] = (rem[shift + i] + p - sub) % p;
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}
