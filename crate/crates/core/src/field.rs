//! Exact arithmetic in `GF(q)`, `q = p^h`.
//!
//! Elements are stored as integers in `[0, q)`: the element `sum a_i x^i` is
//! encoded by its base-`p` digit string `(a_0, a_1, ...)`. Multiplication and
//! inversion go through log/antilog tables built eagerly from a generator at
//! construction time, so both are O(1) inside the geometry hot loops.
//!
//! The reducing modulus is chosen deterministically: the lexicographically
//! smallest monic irreducible of degree `h` over `GF(p)`, ordered by the
//! coefficient tuple `(c_{h-1}, ..., c_0)` ascending. Two builds of the same
//! field therefore agree bit-for-bit, and so do all point enumerations
//! downstream.

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// A field element, encoded as an integer in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for Fe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrime(u32),
    #[error("extension degree {0} outside supported range 1..=7")]
    DegreeOutOfRange(u32),
    #[error("field order {0} exceeds supported maximum {MAX_ORDER}")]
    OrderTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {0} is not a valid encoding in GF({1})")]
    InvalidElement(u32, u32),
}

/// Immutable description of `GF(p^h)` with precomputed arithmetic tables.
///
/// Safe for unrestricted concurrent reads after construction.
pub struct FieldSpec {
    p: u32,
    h: u32,
    q: u32,
    /// Modulus coefficients `c_0..c_{h-1}`; the leading coefficient 1 is
    /// implicit. For `h = 1` this is `[0]`, i.e. the polynomial `x`.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)` (doubled so products of two logs
    /// need no reduction).
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`; `log[0]` is a sentinel and must not be read.
    log: Vec<u32>,
    /// Additive inverse of every element.
    neg: Vec<u32>,
}

/// Builds `GF(p^h)` with the deterministic smallest irreducible modulus.
///
/// For `h = 1` the modulus is `x` and arithmetic is plain mod-`p`.
pub fn build_field(p: u32, h: u32) -> Result<FieldSpec, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NonPrime(p));
    }
    if !(1..=7).contains(&h) {
        return Err(FieldError::DegreeOutOfRange(h));
    }
    let q_wide = (p as u64).pow(h);
    if q_wide > MAX_ORDER {
        return Err(FieldError::OrderTooLarge(q_wide));
    }
    let q = q_wide as u32;

    let modulus = if h == 1 {
        vec![0]
    } else {
        smallest_irreducible(p, h)
    };

    // Bootstrap multiplication straight from polynomial arithmetic, then
    // freeze it into log/antilog tables.
    let poly_mul = |a: u32, b: u32| poly_mul_mod(a, b, p, h, &modulus);

    let generator = find_generator(q, &poly_mul);
    let mut exp = vec![0u32; 2 * (q as usize - 1).max(1)];
    let mut log = vec![u32::MAX; q as usize];
    let mut acc = 1u32;
    for (i, slot) in exp.iter_mut().enumerate().take(q as usize - 1) {
        *slot = acc;
        log[acc as usize] = i as u32;
        acc = poly_mul(acc, generator);
    }
    debug_assert_eq!(acc, 1, "generator order must be q-1");
    for i in 0..(q as usize - 1) {
        exp[q as usize - 1 + i] = exp[i];
    }

    let mut neg = vec![0u32; q as usize];
    for (a, slot) in neg.iter_mut().enumerate() {
        *slot = digitwise_neg(a as u32, p, h);
    }

    Ok(FieldSpec { p, h, q, modulus, exp, log, neg })
}

impl FieldSpec {
    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.h
    }

    /// Modulus coefficients, constant term first, leading 1 implicit.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Checks a raw encoding and wraps it.
    pub fn element(&self, rep: u32) -> Result<Fe, FieldError> {
        if rep < self.q {
            Ok(Fe(rep))
        } else {
            Err(FieldError::InvalidElement(rep, self.q))
        }
    }

    /// All elements in encoding order `0..q`.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.h == 1 {
            let s = a.0 + b.0;
            Fe(if s >= self.p { s - self.p } else { s })
        } else if self.p == 2 {
            Fe(a.0 ^ b.0)
        } else {
            Fe(digitwise_add(a.0, b.0, self.p, self.h))
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe(0);
        }
        let la = self.log[a.0 as usize] as usize;
        let lb = self.log[b.0 as usize] as usize;
        Fe(self.exp[la + lb])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let order = self.q as usize - 1;
        let la = self.log[a.0 as usize] as usize;
        Ok(Fe(self.exp[(order - la) % order]))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if a.0 == 0 {
            return if e == 0 { Fe(1) } else { Fe(0) };
        }
        let order = (self.q - 1) as u64;
        if order == 0 {
            return Fe(1);
        }
        let la = self.log[a.0 as usize] as u64;
        let le = (la % order) * (e % order) % order;
        Fe(self.exp[le as usize])
    }

    /// Reference multiplication by direct polynomial arithmetic, bypassing
    /// the tables. Kept public so tests can cross-check the table path.
    pub fn mul_poly(&self, a: Fe, b: Fe) -> Fe {
        Fe(poly_mul_mod(a.0, b.0, self.p, self.h, &self.modulus))
    }
}

impl std::fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("h", &self.h)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Decomposes `q` as `p^h` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if !(2..=MAX_ORDER).contains(&q) {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut rest = q;
            let mut h = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                h += 1;
            }
            return if rest == 1 { Some((p as u32, h)) } else { None };
        }
        p += 1;
    }
    Some((q as u32, 1))
}

#[inline]
fn digitwise_add(a: u32, b: u32, p: u32, h: u32) -> u32 {
    let mut out = 0u32;
    let mut scale = 1u32;
    let (mut a, mut b) = (a, b);
    for _ in 0..h {
        let d = (a % p + b % p) % p;
        out += d * scale;
        scale *= p;
        a /= p;
        b /= p;
    }
    out
}

#[inline]
fn digitwise_neg(a: u32, p: u32, h: u32) -> u32 {
    let mut out = 0u32;
    let mut scale = 1u32;
    let mut a = a;
    for _ in 0..h {
        let d = (p - a % p) % p;
        out += d * scale;
        scale *= p;
        a /= p;
    }
    out
}

/// Product of two encoded elements reduced by the modulus, all over `GF(p)`.
fn poly_mul_mod(a: u32, b: u32, p: u32, h: u32, modulus: &[u32]) -> u32 {
    if h == 1 {
        return ((a as u64 * b as u64) % p as u64) as u32;
    }
    let da = digits(a, p, h);
    let db = digits(b, p, h);
    // raw product, degree <= 2h-2
    let mut prod = vec![0u32; 2 * h as usize - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // reduce by x^h = -modulus (leading 1 implicit)
    for i in (h as usize..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (k, &m) in modulus.iter().enumerate() {
            let idx = i - h as usize + k;
            prod[idx] = (prod[idx] + c * (p - m) % p) % p;
        }
    }
    let mut out = 0u32;
    for i in (0..h as usize).rev() {
        out = out * p + prod[i];
    }
    out
}

fn digits(a: u32, p: u32, h: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(h as usize);
    let mut a = a;
    for _ in 0..h {
        out.push(a % p);
        a /= p;
    }
    out
}

/// Lexicographically smallest monic irreducible of degree `h` over `GF(p)`,
/// ordered by the tuple `(c_{h-1}, ..., c_0)` ascending. That ordering makes
/// the candidate's coefficient string, read as a base-`p` integer with
/// `c_{h-1}` most significant, count upward -- which is exactly the element
/// encoding, so a plain scan over `0..p^h` visits candidates in order.
fn smallest_irreducible(p: u32, h: u32) -> Vec<u32> {
    let q = (p as u64).pow(h) as u32;
    for cand in 0..q {
        let coeffs = digits(cand, p, h);
        if is_irreducible(&coeffs, p, h) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over GF(p)")
}

/// Trial division by every monic polynomial of degree `1..=h/2`.
fn is_irreducible(coeffs: &[u32], p: u32, h: u32) -> bool {
    // full dense coefficient vector of f, constant first, including leading 1
    let mut f = coeffs.to_vec();
    f.push(1);
    for d in 1..=(h / 2).max(1) {
        let count = (p as u64).pow(d);
        for t in 0..count {
            let mut g = digits_u64(t, p as u64, d);
            g.push(1);
            if poly_rem_is_zero(&f, &g, p) {
                return false;
            }
        }
    }
    true
}

fn digits_u64(a: u64, p: u64, h: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(h as usize);
    let mut a = a;
    for _ in 0..h {
        out.push((a % p) as u32);
        a /= p;
    }
    out
}

fn poly_rem_is_zero(f: &[u32], g: &[u32], p: u32) -> bool {
    let dg = g.len() - 1;
    let mut r = f.to_vec();
    while r.len() > dg {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let off = r.len() - 1 - dg;
            for (k, &gc) in g.iter().enumerate() {
                r[off + k] = (r[off + k] + lead * (p - gc) % p) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

/// First element (in encoding order) of multiplicative order `q - 1`.
fn find_generator(q: u32, poly_mul: &impl Fn(u32, u32) -> u32) -> u32 {
    let order = q - 1;
    if order == 1 {
        return 1;
    }
    let factors = prime_factors(order);
    'cand: for g in 2..q {
        for &f in &factors {
            if pow_via(poly_mul, g, (order / f) as u64) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("GF(q)* is cyclic, a generator always exists")
}

fn pow_via(poly_mul: &impl Fn(u32, u32) -> u32, base: u32, mut e: u64) -> u32 {
    let mut acc = 1u32;
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul(acc, b);
        }
        b = poly_mul(b, b);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_modulus_is_x2_x_1() {
        let f = build_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1]);
        assert_eq!(f.order(), 4);
    }

    #[test]
    fn gf9_modulus_is_x2_1() {
        // -1 is a non-square mod 3 and (c1,c0) = (0,1) sorts first
        let f = build_field(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0]);
    }

    #[test]
    fn non_prime_characteristic_rejected() {
        assert_eq!(build_field(4, 1).unwrap_err(), FieldError::NonPrime(4));
        assert_eq!(build_field(1, 1).unwrap_err(), FieldError::NonPrime(1));
    }

    #[test]
    fn degree_bounds_enforced() {
        assert_eq!(build_field(2, 0).unwrap_err(), FieldError::DegreeOutOfRange(0));
        assert_eq!(build_field(2, 8).unwrap_err(), FieldError::DegreeOutOfRange(8));
        assert!(matches!(build_field(257, 2), Err(FieldError::OrderTooLarge(_))));
    }

    #[test]
    fn gf4_alpha_squared() {
        // x^2 = x + 1 mod x^2+x+1, i.e. rep 2*2 -> 3
        let f = build_field(2, 2).unwrap();
        assert_eq!(f.mul(Fe(2), Fe(2)), Fe(3));
        assert_eq!(f.mul(Fe(2), Fe(3)), Fe(1)); // alpha * (alpha+1) = 1
        assert_eq!(f.inv(Fe(2)).unwrap(), Fe(3));
    }

    #[test]
    fn gf7_arithmetic() {
        let f = build_field(7, 1).unwrap();
        assert_eq!(f.mul(Fe(3), Fe(5)), Fe(1));
        assert_eq!(f.inv(Fe(3)).unwrap(), Fe(5));
        assert_eq!(f.add(Fe(4), Fe(5)), Fe(2));
        assert_eq!(f.neg(Fe(2)), Fe(5));
    }

    #[test]
    fn identity_and_zero_division() {
        for (p, h) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)] {
            let f = build_field(p, h).unwrap();
            for a in f.elements() {
                assert_eq!(f.mul(a, Fe::ONE), a);
                assert_eq!(f.mul(a, Fe::ZERO), Fe::ZERO);
            }
            assert_eq!(f.inv(Fe::ONE).unwrap(), Fe::ONE);
            assert_eq!(f.inv(Fe::ZERO).unwrap_err(), FieldError::DivisionByZero);
        }
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let f = build_field(3, 2).unwrap();
        for a in f.elements() {
            let mut acc = Fe::ONE;
            for e in 0..12u64 {
                assert_eq!(f.pow(a, e), acc, "a={a:?} e={e}");
                acc = f.mul(acc, a);
            }
        }
    }
}
