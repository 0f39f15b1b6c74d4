//! Point sets inside a plane and the line-restriction construction: given a
//! point set P and a target degree k, take the lines of the ambient plane
//! meeting P in exactly k points. When the number of such lines through each
//! point of P is the constant k, the result is a symmetric configuration.

use super::plane::{pg_incidence, singer_plane, PlaneIncidence};
use super::checked_prime_power;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FiniteField};
use crate::matrix::IncidenceMatrix;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorTag {
    Baer { index: u64 },
    BaerUnion { c: u64 },
    ConicExternal,
    ConicInternal,
    HermitianComplement,
    SingerSuborbit { t: u64, j: u64 },
}

/// A nonempty subset of the points of a plane, with its generator recorded
/// for provenance.
#[derive(Debug, Clone)]
pub struct PointSet {
    pub plane: Arc<PlaneIncidence>,
    pub indices: Vec<usize>,
    pub tag: GeneratorTag,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[derive(Debug)]
pub enum ConstructionOutcome {
    /// r_k = k: a symmetric configuration v_k.
    Symmetric(IncidenceMatrix),
    /// r_k != k: the labelled (v_{r_k}, b_k) incidence structure.
    NonSymmetric { r: u64, matrix: IncidenceMatrix },
}

/// Restrict the ambient plane to the lines meeting `points` in exactly k
/// points. Verifies that the per-point line count r_k is a constant.
pub fn construction_a(points: &PointSet, k: u64) -> Result<ConstructionOutcome> {
    let plane = &points.plane;
    let mut member = vec![false; plane.n_points()];
    for &p in &points.indices {
        member[p] = true;
    }
    let lines: Vec<usize> = (0..plane.n_lines())
        .filter(|&l| plane.lines[l].iter().filter(|&&p| member[p]).count() as u64 == k)
        .collect();
    if lines.is_empty() {
        return Err(Error::EmptyLineSet { k });
    }
    let point_pos: std::collections::HashMap<usize, usize> = points
        .indices
        .iter()
        .enumerate()
        .map(|(pos, &p)| (p, pos))
        .collect();
    let mut per_point = vec![0u64; points.len()];
    let supports: Vec<Vec<usize>> = lines
        .iter()
        .map(|&l| {
            plane.lines[l]
                .iter()
                .filter_map(|p| point_pos.get(p).copied())
                .inspect(|&pos| per_point[pos] += 1)
                .collect()
        })
        .collect();
    let r = per_point[0];
    if let Some(&other) = per_point.iter().find(|&&x| x != r) {
        return Err(Error::NotConstant(r, other));
    }
    let mut matrix = IncidenceMatrix::from_row_supports(lines.len(), points.len(), &supports);
    matrix.push_provenance(format!(
        "construction_a({:?}, k={k}) on {:?}",
        points.tag, plane.kind
    ));
    if r == k && matrix.is_square() {
        matrix
            .check_configuration(k)
            .map_err(Error::NotAConfiguration)?;
        Ok(ConstructionOutcome::Symmetric(matrix))
    } else {
        Ok(ConstructionOutcome::NonSymmetric { r, matrix })
    }
}

/// Partition of PG(2,q), q a square, into q - sqrt(q) + 1 Baer subplanes:
/// in Singer labelling these are the residue classes mod t = q - sqrt(q) + 1.
pub fn baer_partition(q: u64) -> Result<Vec<PointSet>> {
    let root = exact_sqrt(q)
        .ok_or_else(|| Error::PreconditionFailed(format!("q = {q} is not a square")))?;
    let (plane, _) = singer_plane(q)?;
    let plane = Arc::new(plane);
    let t = q - root + 1;
    Ok((0..t)
        .map(|j| PointSet {
            plane: Arc::clone(&plane),
            indices: (j as usize..plane.n_points())
                .step_by(t as usize)
                .collect(),
            tag: GeneratorTag::Baer { index: j },
        })
        .collect())
}

/// Union of the first c subplanes of the Baer partition; the lines secant to
/// one of them meet the union in sqrt(q) + c points.
pub fn baer_union(q: u64, c: u64) -> Result<PointSet> {
    let root = exact_sqrt(q).unwrap_or(0);
    if c < 1 || (root > 0 && c > q - root) {
        return Err(Error::PreconditionFailed(format!(
            "need 1 <= c <= q - sqrt(q), got c = {c}"
        )));
    }
    let parts = baer_partition(q)?;
    let plane = Arc::clone(&parts[0].plane);
    let mut indices: Vec<usize> = parts[..c as usize]
        .iter()
        .flat_map(|p| p.indices.iter().copied())
        .collect();
    indices.sort_unstable();
    Ok(PointSet {
        plane,
        indices,
        tag: GeneratorTag::BaerUnion { c },
    })
}

/// External and internal points of the conic y^2 = xz in PG(2,q), q odd:
/// external points lie on exactly two tangents (q(q+1)/2 of them), internal
/// points on none (q(q-1)/2).
pub fn conic_points(q: u64) -> Result<(PointSet, PointSet)> {
    let (p, e) = checked_prime_power(q, 64)?;
    if p == 2 {
        return Err(Error::PreconditionFailed(
            "the conic point classes need odd q".into(),
        ));
    }
    let field = FiniteField::new(p, e)?;
    let plane = Arc::new(pg_incidence(q)?);
    let on_conic = conic_indicator(&field, plane.n_points());
    // a tangent line carries exactly one conic point
    let tangent: Vec<bool> = plane
        .lines
        .iter()
        .map(|line| line.iter().filter(|&&pt| on_conic[pt]).count() == 1)
        .collect();
    let mut external = Vec::new();
    let mut internal = Vec::new();
    for (pt, _) in on_conic.iter().enumerate().filter(|&(_, &on)| !on) {
        let tangents = plane.pencils[pt].iter().filter(|&&l| tangent[l]).count();
        match tangents {
            2 => external.push(pt),
            0 => internal.push(pt),
            other => {
                return Err(Error::InternalInvariantViolation(format!(
                    "point off the conic on {other} tangents"
                )))
            }
        }
    }
    if external.len() as u64 != q * (q + 1) / 2 || internal.len() as u64 != q * (q - 1) / 2 {
        return Err(Error::InternalInvariantViolation(format!(
            "conic class sizes {}/{} off the expected q(q+1)/2, q(q-1)/2",
            external.len(),
            internal.len()
        )));
    }
    Ok((
        PointSet {
            plane: Arc::clone(&plane),
            indices: external,
            tag: GeneratorTag::ConicExternal,
        },
        PointSet {
            plane,
            indices: internal,
            tag: GeneratorTag::ConicInternal,
        },
    ))
}

fn conic_indicator(field: &FiniteField, n_points: usize) -> Vec<bool> {
    let q = field.q();
    let mut on = vec![false; n_points];
    // points are (1:a:b) at a*q+b, (0:1:c) at q^2+c, (0:0:1) last
    for a in 0..q {
        for b in 0..q {
            let y2 = field.mul(FieldElement(a), FieldElement(a));
            on[(a * q + b) as usize] = y2 == FieldElement(b); // y^2 = x z with x = 1
        }
    }
    // (0:1:c): y^2 = 1 != 0 = xz, never on the conic
    on[n_points - 1] = true; // (0:0:1): 0 = 0
    on
}

/// Complement of the Hermitian curve x^(s+1) + y^(s+1) + z^(s+1) = 0 in
/// PG(2,q), q = s^2: q^2 + q - q*sqrt(q) points, met by every secant line in
/// q - sqrt(q) points.
pub fn hermitian_complement(q: u64) -> Result<PointSet> {
    let root = exact_sqrt(q)
        .ok_or_else(|| Error::PreconditionFailed(format!("q = {q} is not a square")))?;
    let (p, e) = checked_prime_power(q, 64)?;
    let field = FiniteField::new(p, e)?;
    let plane = Arc::new(pg_incidence(q)?);
    let exp = root + 1;
    let norm_sum = |coords: &[FieldElement; 3]| {
        coords.iter().fold(FieldElement::ZERO, |acc, &c| {
            field.add(acc, field.pow(c, exp))
        })
    };
    let mut indices = Vec::new();
    let reps = super::plane::projective_reps(&field);
    for (i, rep) in reps.iter().enumerate() {
        if !norm_sum(rep).is_zero() {
            indices.push(i);
        }
    }
    if indices.len() as u64 != q * q + q - q * root {
        return Err(Error::InternalInvariantViolation(format!(
            "Hermitian complement has {} points, expected {}",
            indices.len(),
            q * q + q - q * root
        )));
    }
    Ok(PointSet {
        plane,
        indices,
        tag: GeneratorTag::HermitianComplement,
    })
}

/// Point orbit of the cyclic subgroup of order n/t of a Singer cycle:
/// the residue class j mod t, of size (q^2+q+1)/t.
pub fn singer_suborbit(q: u64, t: u64, j: u64) -> Result<PointSet> {
    let n = q * q + q + 1;
    if t == 0 || !n.is_multiple_of(t) {
        return Err(Error::PreconditionFailed(format!(
            "t = {t} does not divide q^2+q+1 = {n}"
        )));
    }
    if j >= t {
        return Err(Error::PreconditionFailed(format!("j = {j} not below t = {t}")));
    }
    let (plane, _) = singer_plane(q)?;
    Ok(PointSet {
        plane: Arc::new(plane),
        indices: (j as usize..n as usize).step_by(t as usize).collect(),
        tag: GeneratorTag::SingerSuborbit { t, j },
    })
}

fn exact_sqrt(q: u64) -> Option<u64> {
    let r = (q as f64).sqrt().round() as u64;
    (r * r == q).then_some(r)
}
