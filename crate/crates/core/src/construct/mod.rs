//! Algebraic and geometric generators of rulers and configurations: the
//! Singer (projective plane), Bose (starred affine plane) and Ruzsa rulers,
//! coordinate plane incidences, removal families, and point-orbit
//! constructions. Every generated object is verified by validation, never
//! trusted.

mod plane;
mod points;

pub use plane::{ag_incidence, pg_incidence, removal_family, singer_plane, PlaneIncidence, PlaneKind};
pub use points::{
    baer_partition, baer_union, conic_points, construction_a, hermitian_complement,
    singer_suborbit, ConstructionOutcome, GeneratorTag, PointSet,
};

use crate::error::{Error, Result};
use crate::gf::{prime_power, smallest_primitive_root, FiniteField};
use crate::ruler::ModularRuler;
use std::collections::BTreeSet;

const MAX_RULER_Q: u64 = 128;

fn checked_prime_power(q: u64, cap: u64) -> Result<(u64, u32)> {
    let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if q > cap {
        return Err(Error::PreconditionFailed(format!(
            "q = {q} exceeds the supported cap {cap}"
        )));
    }
    Ok((p, e))
}

/// Perfect difference set of the cyclic projective plane PG(2,q):
/// D = { dlog(z) mod n : z in the GF(q)-span of {1, xi}, z != 0 } with xi
/// primitive in GF(q^3) and n = q^2 + q + 1. A (n, q+1) ruler of
/// deficiency 0.
pub fn singer_ruler(q: u64) -> Result<ModularRuler> {
    let (p, e) = checked_prime_power(q, MAX_RULER_Q)?;
    let field = FiniteField::new(p, 3 * e)?;
    let n = q * q + q + 1;
    let xi = field.primitive_element();
    let subfield = field.subfield_elements(e)?;
    let mut marks = BTreeSet::new();
    for &a in &subfield {
        for &b in &subfield {
            let z = field.add(a, field.mul(b, xi));
            if z.is_zero() {
                continue;
            }
            marks.insert(field.dlog(z)? % n);
        }
    }
    if marks.len() as u64 != q + 1 {
        return Err(Error::InternalInvariantViolation(format!(
            "Singer set for q={q} has {} marks, expected {}",
            marks.len(),
            q + 1
        )));
    }
    ModularRuler::validated(marks.into_iter().collect(), n)
}

/// Bose ruler of the cyclic starred affine plane: D = { dlog(xi + a) :
/// a in GF(q) } with xi primitive in GF(q^2). A (q^2 - 1, q) ruler.
pub fn bose_ruler(q: u64) -> Result<ModularRuler> {
    let (p, e) = checked_prime_power(q, MAX_RULER_Q)?;
    let field = FiniteField::new(p, 2 * e)?;
    let v = q * q - 1;
    let xi = field.primitive_element();
    let mut marks = BTreeSet::new();
    for &a in &field.subfield_elements(e)? {
        let z = field.add(xi, a);
        if z.is_zero() {
            return Err(Error::InternalInvariantViolation(
                "xi + a vanished for a in the base field".into(),
            ));
        }
        marks.insert(field.dlog(z)?);
    }
    if marks.len() as u64 != q {
        return Err(Error::InternalInvariantViolation(format!(
            "Bose set for q={q} has {} marks, expected {q}",
            marks.len()
        )));
    }
    ModularRuler::validated(marks.into_iter().collect(), v)
}

/// Ruzsa's ruler mod p^2 - p: marks e_u = p*u + (p-1)*g^u for u = 1..p-1,
/// with g a primitive root mod p (the smallest when not supplied).
pub fn ruzsa_ruler(p: u64, g: Option<u64>) -> Result<ModularRuler> {
    if !crate::gf::is_prime(p) || p < 3 {
        return Err(Error::PreconditionFailed(format!(
            "Ruzsa's construction needs a prime p >= 3, got {p}"
        )));
    }
    let g = g.unwrap_or_else(|| smallest_primitive_root(p));
    if g == 0 || g.is_multiple_of(p) || !is_primitive_root(g % p, p) {
        return Err(Error::NotPrimitiveRoot { g, p });
    }
    let v = p * p - p;
    let mut marks: Vec<u64> = (1..p)
        .map(|u| {
            // (p-1) * g^u mod p(p-1) only depends on g^u mod p
            let gu = pow_mod(g % p, u, p);
            (p * u + (p - 1) * gu) % v
        })
        .collect();
    marks.sort_unstable();
    ModularRuler::validated(marks, v)
}

fn is_primitive_root(g: u64, p: u64) -> bool {
    let mut order = 1u64;
    let mut x = g % p;
    while x != 1 {
        x = x * g % p;
        order += 1;
        if order > p {
            return false; // not invertible
        }
    }
    order == p - 1
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
