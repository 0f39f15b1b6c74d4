//! Coordinate and Singer-labelled incidence structures of PG(2,q) and
//! AG(2,q), plus the point/line removal families derived from them.

use super::checked_prime_power;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FiniteField};
use crate::matrix::IncidenceMatrix;
use crate::ruler::ModularRuler;

const MAX_PLANE_Q: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneKind {
    Projective(u64),
    Affine(u64),
    StarredAffine(u64),
}

/// A finite plane as explicit incidence lists. Lines are sorted point-index
/// sets; labels keep the provenance of each point (coordinates or Singer
/// exponents).
#[derive(Debug, Clone)]
pub struct PlaneIncidence {
    pub kind: PlaneKind,
    pub point_labels: Vec<String>,
    pub lines: Vec<Vec<usize>>,
    /// lines through each point (inverse incidence), same ordering
    pub pencils: Vec<Vec<usize>>,
}

impl PlaneIncidence {
    fn from_lines(kind: PlaneKind, point_labels: Vec<String>, lines: Vec<Vec<usize>>) -> Self {
        let mut pencils = vec![Vec::new(); point_labels.len()];
        for (li, line) in lines.iter().enumerate() {
            for &p in line {
                pencils[p].push(li);
            }
        }
        PlaneIncidence {
            kind,
            point_labels,
            lines,
            pencils,
        }
    }

    pub fn n_points(&self) -> usize {
        self.point_labels.len()
    }

    pub fn n_lines(&self) -> usize {
        self.lines.len()
    }

    /// Full incidence matrix, rows = lines, columns = points.
    pub fn matrix(&self) -> IncidenceMatrix {
        IncidenceMatrix::from_row_supports(self.n_lines(), self.n_points(), &self.lines)
    }
}

fn label(prefix: &str, field: &FiniteField, coords: &[FieldElement]) -> String {
    let parts: Vec<String> = coords
        .iter()
        .map(|&c| {
            let digits = field.coeffs(c);
            if field.m() == 1 {
                digits[0].to_string()
            } else {
                format!("{digits:?}")
            }
        })
        .collect();
    format!("{prefix}({})", parts.join(":"))
}

/// The projective plane PG(2,q) with canonical coordinate labelling:
/// points (1:a:b), (0:1:c), (0:0:1) in that order, lines dually.
pub fn pg_incidence(q: u64) -> Result<PlaneIncidence> {
    let (p, e) = checked_prime_power(q, MAX_PLANE_Q)?;
    let field = FiniteField::new(p, e)?;
    let n = (q * q + q + 1) as usize;
    let reps = projective_reps(&field);
    debug_assert_eq!(reps.len(), n);
    let point_labels: Vec<String> = reps.iter().map(|c| label("", &field, c)).collect();
    let lines: Vec<Vec<usize>> = reps
        .iter()
        .map(|line| {
            reps.iter()
                .enumerate()
                .filter(|(_, pt)| {
                    let dot = (0..3).fold(FieldElement::ZERO, |acc, i| {
                        field.add(acc, field.mul(line[i], pt[i]))
                    });
                    dot.is_zero()
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    Ok(PlaneIncidence::from_lines(
        PlaneKind::Projective(q),
        point_labels,
        lines,
    ))
}

/// Canonical point representatives of PG(2,q): (1:a:b), then (0:1:c), then
/// (0:0:1); the index order every PG-based generator relies on.
pub(super) fn projective_reps(field: &FiniteField) -> Vec<[FieldElement; 3]> {
    let q = field.q();
    let mut reps = Vec::with_capacity((q * q + q + 1) as usize);
    for a in 0..q {
        for b in 0..q {
            reps.push([FieldElement::ONE, FieldElement(a), FieldElement(b)]);
        }
    }
    for c in 0..q {
        reps.push([FieldElement::ZERO, FieldElement::ONE, FieldElement(c)]);
    }
    reps.push([FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]);
    reps
}

/// The affine plane AG(2,q) (line classes y = wx + u and x = c); with
/// `starred` the origin and the q+1 lines through it are removed, leaving
/// the cyclic (q^2-1)-point structure.
pub fn ag_incidence(q: u64, starred: bool) -> Result<PlaneIncidence> {
    let (p, e) = checked_prime_power(q, MAX_PLANE_Q)?;
    let field = FiniteField::new(p, e)?;
    let point_index = |x: u64, y: u64| (x * q + y) as usize;

    let keep_point = |x: u64, y: u64| !starred || !(x == 0 && y == 0);
    let mut point_ids = vec![usize::MAX; (q * q) as usize];
    let mut point_labels = Vec::new();
    for x in 0..q {
        for y in 0..q {
            if keep_point(x, y) {
                point_ids[point_index(x, y)] = point_labels.len();
                point_labels.push(label("", &field, &[FieldElement(x), FieldElement(y)]));
            }
        }
    }

    let mut lines = Vec::new();
    for w in 0..q {
        for u in 0..q {
            if starred && u == 0 {
                continue; // passes through the origin
            }
            let line: Vec<usize> = (0..q)
                .filter_map(|x| {
                    let y = field
                        .add(field.mul(FieldElement(w), FieldElement(x)), FieldElement(u));
                    keep_point(x, y.0).then(|| point_ids[point_index(x, y.0)])
                })
                .collect();
            lines.push(line);
        }
    }
    for c in 0..q {
        if starred && c == 0 {
            continue;
        }
        let line: Vec<usize> = (0..q)
            .filter(|&y| keep_point(c, y)).map(|y| point_ids[point_index(c, y)])
            .collect();
        lines.push(line);
    }
    for line in &mut lines {
        line.sort_unstable();
    }
    Ok(PlaneIncidence::from_lines(
        if starred {
            PlaneKind::StarredAffine(q)
        } else {
            PlaneKind::Affine(q)
        },
        point_labels,
        lines,
    ))
}

/// PG(2,q) labelled by a Singer cycle: point i is xi^i, and the lines are
/// the cyclic translates of the Singer difference set. Same plane as
/// [`pg_incidence`], but the point orbits of the cyclic subgroups are just
/// residue classes here.
pub fn singer_plane(q: u64) -> Result<(PlaneIncidence, ModularRuler)> {
    let ruler = super::singer_ruler(q)?;
    let n = ruler.v() as usize;
    let point_labels: Vec<String> = (0..n).map(|i| format!("xi^{i}")).collect();
    let lines: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            let mut line: Vec<usize> = ruler
                .marks()
                .iter()
                .map(|&a| (a as usize + u) % n)
                .collect();
            line.sort_unstable();
            line
        })
        .collect();
    Ok((
        PlaneIncidence::from_lines(PlaneKind::Projective(q), point_labels, lines),
        ruler,
    ))
}

/// Removal family: in PG(2,q) select s+1 points and s+1 lines around a flag
/// (`point_on_line` = true) or an anti-flag, then dismiss every line through
/// a selected point and every point on a selected line. Yields a
/// configuration with v = q^2 - qs (flag case) or v = q^2 - (q-1)s - 1
/// (anti-flag case), k = q - s. Selections take the lowest admissible
/// indices, so the output is deterministic.
pub fn removal_family(q: u64, s: u64, point_on_line: bool) -> Result<IncidenceMatrix> {
    if s >= q {
        return Err(Error::BadS { q, s });
    }
    let plane = pg_incidence(q)?;
    let line0 = 0usize;
    let on_line0 = &plane.lines[line0];

    let (sel_points, sel_lines): (Vec<usize>, Vec<usize>) = if point_on_line {
        let p0 = on_line0[0];
        let extra_points: Vec<usize> = on_line0.iter().copied().filter(|&x| x != p0).take(s as usize).collect();
        let extra_lines: Vec<usize> = plane.pencils[p0]
            .iter()
            .copied()
            .filter(|&l| l != line0)
            .take(s as usize)
            .collect();
        (
            std::iter::once(p0).chain(extra_points).collect(),
            std::iter::once(line0).chain(extra_lines).collect(),
        )
    } else {
        let p0 = (0..plane.n_points())
            .find(|p| !on_line0.contains(p))
            .expect("a projective plane has points off any line");
        let chosen: Vec<usize> = on_line0.iter().copied().take(s as usize).collect();
        let connecting: Vec<usize> = chosen
            .iter()
            .map(|&pt| {
                plane.pencils[p0]
                    .iter()
                    .copied()
                    .find(|&l| plane.lines[l].contains(&pt))
                    .expect("two points lie on one line")
            })
            .collect();
        (
            std::iter::once(p0).chain(chosen).collect(),
            std::iter::once(line0).chain(connecting).collect(),
        )
    };

    let mut point_killed = vec![false; plane.n_points()];
    let mut line_killed = vec![false; plane.n_lines()];
    for &l in &sel_lines {
        for &p in &plane.lines[l] {
            point_killed[p] = true;
        }
    }
    for &p in &sel_points {
        for &l in &plane.pencils[p] {
            line_killed[l] = true;
        }
    }
    // The anti-flag case with s = 0 leaves the base point on no surviving
    // line and the base line with no surviving point; drop both kinds of
    // leftover before compacting indices.
    for (p, killed) in point_killed.iter_mut().enumerate() {
        if !*killed && plane.pencils[p].iter().all(|&l| line_killed[l]) {
            *killed = true;
        }
    }
    for (l, killed) in line_killed.iter_mut().enumerate() {
        if !*killed && plane.lines[l].iter().all(|&p| point_killed[p]) {
            *killed = true;
        }
    }
    let point_ids: Vec<Option<usize>> = {
        let mut next = 0usize;
        point_killed
            .iter()
            .map(|&killed| {
                if killed {
                    None
                } else {
                    next += 1;
                    Some(next - 1)
                }
            })
            .collect()
    };
    let n_points = point_ids.iter().flatten().count();
    let supports: Vec<Vec<usize>> = plane
        .lines
        .iter()
        .enumerate()
        .filter(|&(l, _)| !line_killed[l])
        .map(|(_, line)| line.iter().filter_map(|&p| point_ids[p]).collect())
        .collect();
    let mut out = IncidenceMatrix::from_row_supports(supports.len(), n_points, &supports);
    let k = q - s;
    out.push_provenance(format!(
        "removal_family(q={q}, s={s}, point_on_line={point_on_line})"
    ));
    out.check_configuration(k)
        .map_err(Error::NotAConfiguration)?;
    let expected_v = if point_on_line {
        q * q - q * s
    } else {
        q * q - (q - 1) * s - 1
    };
    if out.n_rows() as u64 != expected_v {
        return Err(Error::InternalInvariantViolation(format!(
            "removal family size {} differs from the expected {expected_v}",
            out.n_rows()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fano_counts() {
        let plane = pg_incidence(2).unwrap();
        assert_eq!(plane.n_points(), 7);
        assert_eq!(plane.n_lines(), 7);
        assert!(plane.lines.iter().all(|l| l.len() == 3));
        assert!(plane.matrix().is_configuration(3));
    }

    #[test]
    fn pg9_counts() {
        let plane = pg_incidence(9).unwrap();
        assert_eq!(plane.n_points(), 91);
        assert!(plane.lines.iter().all(|l| l.len() == 10));
    }

    #[test]
    fn two_points_determine_one_line() {
        for q in [2u64, 3, 4, 5, 7, 9] {
            let plane = pg_incidence(q).unwrap();
            let n = plane.n_points();
            let mut seen = vec![0u8; n * n];
            for line in &plane.lines {
                for (i, &a) in line.iter().enumerate() {
                    for &b in &line[i + 1..] {
                        seen[a * n + b] += 1;
                    }
                }
            }
            for a in 0..n {
                for b in a + 1..n {
                    assert_eq!(seen[a * n + b], 1, "q={q} pair ({a},{b})");
                }
            }
        }
    }

    #[test]
    fn starred_affine_counts() {
        let plane = ag_incidence(3, true).unwrap();
        assert_eq!(plane.n_points(), 8);
        assert_eq!(plane.n_lines(), 8);
        assert!(plane.lines.iter().all(|l| l.len() == 3));
        assert!(plane.matrix().is_configuration(3));
        let full = ag_incidence(3, false).unwrap();
        assert_eq!(full.n_points(), 9);
        assert_eq!(full.n_lines(), 12);
    }

    #[test]
    fn singer_plane_matches_coordinate_plane_parameters() {
        let (plane, ruler) = singer_plane(3).unwrap();
        assert_eq!(plane.n_points(), 13);
        assert_eq!(ruler.k(), 4);
        assert!(plane.matrix().is_configuration(4));
    }

    #[test]
    fn removal_family_parameter_grid() {
        // flag case: v = q^2 - qs; anti-flag case: v = q^2 - (q-1)s - 1
        let m = removal_family(3, 0, false).unwrap();
        assert_eq!(m.n_rows(), 8);
        assert!(m.is_configuration(3));
        let m = removal_family(4, 1, true).unwrap();
        assert_eq!(m.n_rows(), 12);
        assert!(m.is_configuration(3));
        let m = removal_family(5, 0, true).unwrap();
        assert_eq!(m.n_rows(), 25);
        assert!(m.is_configuration(5));
        assert!(matches!(removal_family(4, 4, true), Err(Error::BadS { .. })));
    }

    #[test]
    fn removal_family_exhaustive_small_grid() {
        for q in [2u64, 3, 4, 5, 7] {
            for s in 0..q.min(3) {
                for flag in [true, false] {
                    let m = removal_family(q, s, flag).unwrap();
                    assert!(m.is_configuration(q - s), "q={q} s={s} flag={flag}");
                }
            }
        }
    }
}
