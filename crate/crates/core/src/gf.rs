//! Finite field arithmetic GF(p^m) with eagerly materialised discrete-log
//! tables.
//!
//! Elements are stored in the polynomial basis and packed into a single
//! integer with mixed-radix digits base `p` (digit `i` is the coefficient of
//! `x^i`). The chosen modulus is the lexicographically smallest monic
//! irreducible polynomial for which `x` is a primitive element, so identical
//! `(p, m)` inputs always produce bit-identical tables.

use crate::error::{Error, Result};

/// Packed element of a [`FiniteField`] (mixed-radix digits base `p`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

/// GF(p^m) with full log/antilog tables over a fixed primitive element.
///
/// Memory grows linearly with the field order, so while orders up to 2^31
/// are accepted, practical use stays in the few-million range (the largest
/// field the constructions here need is GF(128^3)).
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u64,
    m: u32,
    q: u64,
    /// Monic modulus, coefficients low-to-high, length m+1.
    modulus: Vec<u64>,
    /// log[packed] = exponent of the primitive element; u32::MAX for 0.
    log: Vec<u32>,
    /// antilog[e] = packed value of xi^e, length q-1.
    antilog: Vec<u32>,
}

const LOG_UNSET: u32 = u32::MAX;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Decompose a prime power `q = p^e`; `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut n = q;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            return if n == 1 { Some((p, e)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
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

/// Smallest primitive root mod a prime `p`; for p = 2 the answer is 1.
pub fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
        .expect("a primitive root exists for every prime")
}

impl FiniteField {
    /// Build GF(p^m). See the module docs for the modulus selection rule.
    pub fn new(p: u64, m: u32) -> Result<FiniteField> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m < 1 {
            return Err(Error::PreconditionFailed("degree m must be >= 1".into()));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= 1 << 31)
            .ok_or(Error::FieldTooLarge(p, m))?;

        if m == 1 {
            let g = smallest_primitive_root(p);
            let mut log = vec![LOG_UNSET; q as usize];
            let mut antilog = vec![0u32; (q - 1) as usize];
            let mut state = 1u64;
            for e in 0..q - 1 {
                antilog[e as usize] = state as u32;
                log[state as usize] = e as u32;
                state = state * g % p;
            }
            return Ok(FiniteField {
                p,
                m,
                q,
                modulus: vec![(p - g % p) % p, 1],
                log,
                antilog,
            });
        }

        // Walk the powers of x modulo each candidate modulus. The walk
        // visits all q-1 nonzero elements exactly when the modulus is
        // irreducible and x is primitive, and it fills both tables as a
        // side effect.
        let mut log = vec![LOG_UNSET; q as usize];
        let mut antilog = vec![0u32; (q - 1) as usize];
        let mut coeffs = vec![0u64; m as usize]; // candidate low coefficients
        'candidates: loop {
            if !next_candidate(&mut coeffs, p) {
                return Err(Error::InternalInvariantViolation(format!(
                    "no primitive modulus found for GF({p}^{m})"
                )));
            }
            if coeffs[0] == 0 {
                continue; // divisible by x
            }
            log.fill(LOG_UNSET);
            let mut digits = vec![0u64; m as usize];
            digits[0] = 1; // the element 1
            log[1] = 0;
            antilog[0] = 1;
            for e in 1..q - 1 {
                mul_by_x(&mut digits, &coeffs, p);
                let packed = pack(&digits, p);
                if packed <= 1 || log[packed as usize] != LOG_UNSET {
                    continue 'candidates;
                }
                log[packed as usize] = e as u32;
                antilog[e as usize] = packed as u32;
            }
            mul_by_x(&mut digits, &coeffs, p);
            if pack(&digits, p) != 1 {
                continue 'candidates;
            }
            let mut modulus = coeffs.clone();
            modulus.push(1);
            return Ok(FiniteField {
                p,
                m,
                q,
                modulus,
                log,
                antilog,
            });
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order q = p^m.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Monic modulus polynomial, coefficients low-to-high (length m+1).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The fixed primitive element (x for m > 1, the smallest primitive
    /// root for m = 1).
    pub fn primitive_element(&self) -> FieldElement {
        FieldElement(self.antilog[usize::from(self.q > 2)] as u64)
    }

    /// Pack a coefficient vector (low-to-high, entries reduced mod p).
    pub fn element(&self, coeffs: &[u64]) -> FieldElement {
        assert!(coeffs.len() <= self.m as usize, "too many coefficients");
        let mut digits = vec![0u64; self.m as usize];
        for (d, &c) in digits.iter_mut().zip(coeffs) {
            *d = c % self.p;
        }
        FieldElement(pack(&digits, self.p))
    }

    /// Embed an integer as a prime-field constant.
    pub fn scalar(&self, n: u64) -> FieldElement {
        FieldElement(n % self.p)
    }

    /// Coefficient vector of an element, low-to-high, length m.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        let mut digits = vec![0u64; self.m as usize];
        let mut v = x.0;
        for d in digits.iter_mut() {
            *d = v % self.p;
            v /= self.p;
        }
        digits
    }

    /// Discrete logarithm with respect to the fixed primitive element.
    pub fn dlog(&self, x: FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.log[x.0 as usize] as u64)
    }

    pub fn antilog(&self, e: u64) -> FieldElement {
        FieldElement(self.antilog[(e % (self.q - 1)) as usize] as u64)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut av, mut bv, mut out, mut place) = (a.0, b.0, 0u64, 1u64);
        for _ in 0..self.m {
            out += (av % self.p + bv % self.p) % self.p * place;
            av /= self.p;
            bv /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        let (mut av, mut out, mut place) = (a.0, 0u64, 1u64);
        for _ in 0..self.m {
            out += (self.p - av % self.p) % self.p * place;
            av /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// Table-based multiplication.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let e = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % (self.q - 1);
        FieldElement(self.antilog[e as usize] as u64)
    }

    /// Schoolbook polynomial multiplication mod the modulus. Kept as an
    /// independent route against which the table-based product is checked.
    pub fn mul_poly(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (ad, bd) = (self.coeffs(a), self.coeffs(b));
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &ai) in ad.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in bd.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % self.p;
            }
        }
        // reduce: x^m = -(c_0 + c_1 x + ... + c_{m-1} x^{m-1})
        for deg in (m..prod.len()).rev() {
            let lead = prod[deg];
            if lead == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &ci) in self.modulus.iter().take(m).enumerate() {
                let sub = lead * ci % self.p;
                prod[deg - m + i] = (prod[deg - m + i] + self.p - sub) % self.p;
            }
        }
        prod.truncate(m);
        FieldElement(pack(&prod, self.p))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let e = self.log[a.0 as usize] as u64;
        Ok(self.antilog(self.q - 1 - e))
    }

    pub fn pow(&self, a: FieldElement, n: u64) -> FieldElement {
        if a.is_zero() {
            return if n == 0 { FieldElement::ONE } else { FieldElement::ZERO };
        }
        let e = self.log[a.0 as usize] as u64;
        self.antilog(e % (self.q - 1) * (n % (self.q - 1)) % (self.q - 1))
    }

    /// Membership in the subfield GF(p^r); requires r | m.
    pub fn subfield_test(&self, x: FieldElement, r: u32) -> Result<bool> {
        if r == 0 || !self.m.is_multiple_of(r) {
            return Err(Error::NotASubfield { r, m: self.m });
        }
        if x.is_zero() {
            return Ok(true);
        }
        let sub_order = self.p.pow(r) - 1;
        let step = (self.q - 1) / sub_order;
        Ok(self.dlog(x)? % step == 0)
    }

    /// All elements of the subfield GF(p^r), zero first then by exponent.
    pub fn subfield_elements(&self, r: u32) -> Result<Vec<FieldElement>> {
        if r == 0 || !self.m.is_multiple_of(r) {
            return Err(Error::NotASubfield { r, m: self.m });
        }
        let sub_order = self.p.pow(r) - 1;
        let step = (self.q - 1) / sub_order;
        let mut out = vec![FieldElement::ZERO];
        out.extend((0..sub_order).map(|i| self.antilog(i * step)));
        Ok(out)
    }

    /// Iterate every element of the field, 0 first then by exponent.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        std::iter::once(FieldElement::ZERO)
            .chain(self.antilog.iter().map(|&v| FieldElement(v as u64)))
    }
}

/// Advance `coeffs` to the next tuple in lexicographic order (c_0 varies
/// slowest). Returns false when the space is exhausted.
fn next_candidate(coeffs: &mut [u64], p: u64) -> bool {
    for c in coeffs.iter_mut().rev() {
        *c += 1;
        if *c < p {
            return true;
        }
        *c = 0;
    }
    false
}

#[inline]
fn pack(digits: &[u64], p: u64) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Multiply the digit vector by x modulo the monic polynomial with low
/// coefficients `modulus_low`.
#[inline]
fn mul_by_x(digits: &mut [u64], modulus_low: &[u64], p: u64) {
    let m = digits.len();
    let carry = digits[m - 1];
    for i in (1..m).rev() {
        digits[i] = digits[i - 1];
    }
    digits[0] = 0;
    if carry != 0 {
        for (d, &c) in digits.iter_mut().zip(modulus_low) {
            *d = (*d + (p - carry * c % p)) % p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_trivial() {
        let f = FiniteField::new(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.primitive_element(), FieldElement::ONE);
        assert_eq!(f.dlog(FieldElement::ONE).unwrap(), 0);
    }

    #[test]
    fn gf7_uses_smallest_primitive_root() {
        // brute-force the smallest primitive root of 7
        let g = (2..7)
            .find(|&g| {
                let mut seen = [false; 7];
                let mut x = 1u64;
                for _ in 0..6 {
                    seen[x as usize] = true;
                    x = x * g % 7;
                }
                seen[1..].iter().all(|&s| s)
            })
            .unwrap();
        assert_eq!(g, 3);
        let f = FiniteField::new(7, 1).unwrap();
        assert_eq!(f.primitive_element(), FieldElement(3));
        assert_eq!(f.dlog(FieldElement(1)).unwrap(), 0);
        assert_eq!(f.dlog(FieldElement(3)).unwrap(), 1);
        assert_eq!(f.dlog(FieldElement(2)).unwrap(), 2); // 3^2 = 9 = 2 mod 7
    }

    #[test]
    fn gf81_primitive_element_has_order_80() {
        let f = FiniteField::new(3, 4).unwrap();
        let xi = f.primitive_element();
        let mut seen = std::collections::HashSet::new();
        let mut x = FieldElement::ONE;
        for _ in 0..80 {
            assert!(seen.insert(x));
            x = f.mul(x, xi);
        }
        assert_eq!(x, FieldElement::ONE);
    }

    #[test]
    fn subfield_membership_in_gf81() {
        let f = FiniteField::new(3, 4).unwrap();
        assert!(f.subfield_test(FieldElement::ZERO, 2).unwrap());
        assert!(f.subfield_test(f.antilog(10), 2).unwrap());
        assert!(!f.subfield_test(f.antilog(1), 2).unwrap());
        assert!(f.subfield_test(f.antilog(1), 4).unwrap());
        assert!(matches!(
            f.subfield_test(FieldElement::ONE, 3),
            Err(Error::NotASubfield { .. })
        ));
    }

    #[test]
    fn table_product_matches_polynomial_product_exhaustively() {
        for (p, m) in [(2, 1), (3, 1), (7, 1), (2, 3), (3, 2), (2, 5), (5, 2), (2, 7), (3, 4)] {
            let f = FiniteField::new(p, m).unwrap();
            assert!(f.q() <= 128 || f.q() == 81);
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_poly(a, b), "GF({p}^{m}) {a:?} * {b:?}");
                }
            }
        }
    }

    #[test]
    fn table_product_matches_polynomial_product_sampled() {
        let f = FiniteField::new(5, 4).unwrap(); // q = 625
        let xi = f.primitive_element();
        let mut a = FieldElement::ONE;
        for i in 0..624u64 {
            let b = f.antilog(i * 97 % 624);
            assert_eq!(f.mul(a, b), f.mul_poly(a, b));
            a = f.mul(a, xi);
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let f1 = FiniteField::new(2, 6).unwrap();
        let f2 = FiniteField::new(2, 6).unwrap();
        assert_eq!(f1.modulus(), f2.modulus());
        assert_eq!(f1.antilog, f2.antilog);
    }

    #[test]
    fn composite_characteristic_is_rejected() {
        assert!(matches!(FiniteField::new(6, 1), Err(Error::NotPrime(6))));
        assert!(matches!(FiniteField::new(1, 2), Err(Error::NotPrime(1))));
    }

    #[test]
    fn log_antilog_are_inverse_bijections() {
        let f = FiniteField::new(2, 6).unwrap();
        for e in 0..63 {
            assert_eq!(f.dlog(f.antilog(e)).unwrap(), e);
        }
        // antilog(i)*antilog(j) = antilog(i+j mod q-1)
        for i in (0..63).step_by(5) {
            for j in 0..63 {
                assert_eq!(f.mul(f.antilog(i), f.antilog(j)), f.antilog((i + j) % 63));
            }
        }
    }
}
