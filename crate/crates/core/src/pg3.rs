//! Points, lines and planes of `PG(3,q)` with dense integer indexing.
//!
//! A point is a canonical homogeneous 4-tuple: the leftmost nonzero
//! coordinate equals 1. Canonical tuples are enumerated in lexicographic
//! order over `(x0, x1, x2, x3)`, element reps compared as integers; the
//! index of a point is its rank in that order, computed in closed form (no
//! lookup table). Planes use dual coordinates canonicalized the same way and
//! share the index scheme, so a plane id and a point id with equal value name
//! proportional coefficient vectors.

use crate::field::{Fe, FieldSpec};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("the given points do not span a plane (collinear or repeated)")]
    DegenerateSpan,
    #[error("a line needs two distinct points")]
    DegenerateLine,
    #[error("the zero vector has no projective class")]
    ZeroVector,
    #[error("theta({0},{1}) exceeds 128-bit range")]
    ThetaOverflow(u32, u128),
}

/// Number of points of `PG(N,q)`: `(q^{N+1} - 1) / (q - 1)`, exact.
pub fn theta(n: u32, q: u128) -> Result<u128, GeomError> {
    assert!(q >= 2, "theta requires q >= 2");
    let mut power: u128 = 1;
    for _ in 0..=n {
        power = power.checked_mul(q).ok_or(GeomError::ThetaOverflow(n, q))?;
    }
    Ok((power - 1) / (q - 1))
}

/// Index of a point of `PG(3,q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointId(pub u32);

/// Index of a plane of `PG(3,q)` (dual coordinates, same scheme).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneId(pub u32);

/// A line, canonically represented by its two smallest-index points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjLine {
    pub a: PointId,
    pub b: PointId,
}

pub struct ProjSpace {
    field: FieldSpec,
    q: u32,
    theta2: u32,
    theta3: u32,
}

impl std::fmt::Debug for ProjSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ProjSpace(PG(3,{}))", self.q)
    }
}

impl ProjSpace {
    pub fn new(field: FieldSpec) -> Self {
        let q = field.order();
        let theta2 = q * q + q + 1;
        let theta3 = q * q * q + theta2;
        ProjSpace { field, q, theta2, theta3 }
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// `theta_{2,q}`, the number of points on a plane.
    #[inline]
    pub fn plane_size(&self) -> u32 {
        self.theta2
    }

    /// `theta_{3,q}`, the number of points (and of planes).
    #[inline]
    pub fn n_points(&self) -> u32 {
        self.theta3
    }

    #[inline]
    pub fn n_planes(&self) -> u32 {
        self.theta3
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> {
        (0..self.theta3).map(PointId)
    }

    pub fn planes(&self) -> impl Iterator<Item = PlaneId> {
        (0..self.theta3).map(PlaneId)
    }

    /// Canonical coordinates of a point, by closed-form unranking.
    pub fn coords_of(&self, p: PointId) -> [Fe; 4] {
        self.unrank(p.0)
    }

    pub fn plane_coeffs(&self, pl: PlaneId) -> [Fe; 4] {
        self.unrank(pl.0)
    }

    /// Index of the projective class of any nonzero vector.
    pub fn point_index(&self, v: [Fe; 4]) -> Result<PointId, GeomError> {
        self.class_index(v).map(PointId)
    }

    pub fn plane_index(&self, v: [Fe; 4]) -> Result<PlaneId, GeomError> {
        self.class_index(v).map(PlaneId)
    }

    /// Scales a nonzero vector so its leftmost nonzero coordinate is 1.
    pub fn canonicalize(&self, mut v: [Fe; 4]) -> Result<[Fe; 4], GeomError> {
        let piv = v.iter().position(|c| !c.is_zero()).ok_or(GeomError::ZeroVector)?;
        if v[piv] != Fe::ONE {
            let s = self.field.inv(v[piv]).expect("pivot is nonzero");
            v[piv] = Fe::ONE;
            for c in v.iter_mut().skip(piv + 1) {
                *c = self.field.mul(*c, s);
            }
        }
        Ok(v)
    }

    fn class_index(&self, v: [Fe; 4]) -> Result<u32, GeomError> {
        let c = self.canonicalize(v)?;
        let q = self.q;
        Ok(match c.iter().position(|x| !x.is_zero()).unwrap() {
            3 => 0,
            2 => 1 + c[3].0,
            1 => 1 + q + c[2].0 * q + c[3].0,
            _ => 1 + q + q * q + c[1].0 * q * q + c[2].0 * q + c[3].0,
        })
    }

    fn unrank(&self, i: u32) -> [Fe; 4] {
        let q = self.q;
        if i == 0 {
            return [Fe(0), Fe(0), Fe(0), Fe(1)];
        }
        if i <= q {
            return [Fe(0), Fe(0), Fe(1), Fe(i - 1)];
        }
        if i <= q + q * q {
            let j = i - q - 1;
            return [Fe(0), Fe(1), Fe(j / q), Fe(j % q)];
        }
        let j = i - (q * q + q + 1);
        [Fe(1), Fe(j / (q * q)), Fe(j / q % q), Fe(j % q)]
    }

    /// Dot product of a dual vector and a point vector.
    #[inline]
    pub fn dot(&self, a: &[Fe; 4], x: &[Fe; 4]) -> Fe {
        let f = &self.field;
        let mut s = f.mul(a[0], x[0]);
        s = f.add(s, f.mul(a[1], x[1]));
        s = f.add(s, f.mul(a[2], x[2]));
        f.add(s, f.mul(a[3], x[3]))
    }

    #[inline]
    pub fn incident(&self, pl: PlaneId, p: PointId) -> bool {
        let a = self.plane_coeffs(pl);
        let x = self.coords_of(p);
        self.dot(&a, &x).is_zero()
    }

    /// The unique plane through three non-collinear points: the 1-dimensional
    /// null space of their 3x4 coordinate matrix.
    pub fn plane_through(
        &self,
        p1: PointId,
        p2: PointId,
        p3: PointId,
    ) -> Result<PlaneId, GeomError> {
        let rows = [self.coords_of(p1), self.coords_of(p2), self.coords_of(p3)];
        let kernel = self.kernel_of(&rows)?;
        if kernel.len() != 1 {
            return Err(GeomError::DegenerateSpan);
        }
        self.plane_index(kernel[0])
    }

    pub fn collinear(&self, p1: PointId, p2: PointId, p3: PointId) -> bool {
        if p1 == p2 || p1 == p3 || p2 == p3 {
            return true;
        }
        let mut rows = [self.coords_of(p1), self.coords_of(p2), self.coords_of(p3)];
        rank(&self.field, &mut rows) < 3
    }

    /// Basis of `{ x : M x = 0 }` for the row set `rows`.
    fn kernel_of(&self, rows: &[[Fe; 4]]) -> Result<Vec<[Fe; 4]>, GeomError> {
        let f = &self.field;
        let mut m: Vec<[Fe; 4]> = rows.to_vec();
        let mut pivots: Vec<usize> = Vec::with_capacity(4);
        let mut r = 0usize;
        for col in 0..4 {
            let Some(sel) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(r, sel);
            let inv = f.inv(m[r][col]).expect("pivot nonzero");
            for x in m[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let pivot_row = m[r];
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && !row[col].is_zero() {
                    let factor = row[col];
                    for (x, &pv) in row.iter_mut().zip(pivot_row.iter()) {
                        *x = f.sub(*x, f.mul(factor, pv));
                    }
                }
            }
            pivots.push(col);
            r += 1;
            if r == m.len() {
                break;
            }
        }
        // one kernel vector per free column
        let mut basis = Vec::with_capacity(4 - pivots.len());
        for free in 0..4 {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = [Fe::ZERO; 4];
            v[free] = Fe::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[row][free]);
            }
            basis.push(v);
        }
        Ok(basis)
    }

    /// All points incident with the dual vector `a`, i.e. solutions of
    /// `a . x = 0`, as canonical indices sorted ascending. Exactly
    /// `theta_{2,q}` of them. The solution space is parametrized over the
    /// canonical `(s,t,u)` representatives of `PG(2,q)` on a spanning triple.
    fn incidence_solutions(&self, a: [Fe; 4], out: &mut Vec<u32>) {
        out.clear();
        let basis = self.kernel_of(&[a]).expect("1x4 kernel");
        debug_assert_eq!(basis.len(), 3);
        let f = &self.field;
        let q = self.q;
        let [b1, b2, b3] = [basis[0], basis[1], basis[2]];

        // scaled copies of b2 and b3 for the inner loops
        let mut s2 = vec![[Fe::ZERO; 4]; q as usize];
        let mut s3 = vec![[Fe::ZERO; 4]; q as usize];
        for s in 0..q {
            for c in 0..4 {
                s2[s as usize][c] = f.mul(Fe(s), b2[c]);
                s3[s as usize][c] = f.mul(Fe(s), b3[c]);
            }
        }

        // (0,0,1)
        out.push(self.class_index(b3).unwrap());
        // (0,1,u)
        for s3u in &s3 {
            let mut v = [Fe::ZERO; 4];
            for c in 0..4 {
                v[c] = f.add(b2[c], s3u[c]);
            }
            out.push(self.class_index(v).unwrap());
        }
        // (1,t,u)
        for s2t in &s2 {
            let mut base = [Fe::ZERO; 4];
            for c in 0..4 {
                base[c] = f.add(b1[c], s2t[c]);
            }
            for s3u in &s3 {
                let mut v = [Fe::ZERO; 4];
                for c in 0..4 {
                    v[c] = f.add(base[c], s3u[c]);
                }
                out.push(self.class_index(v).unwrap());
            }
        }
        debug_assert_eq!(out.len(), self.theta2 as usize);
        out.sort_unstable();
    }

    /// Points on a plane, sorted ascending; exactly `theta_{2,q}` of them.
    pub fn points_on_plane(&self, pl: PlaneId) -> Vec<PointId> {
        let mut buf = Vec::new();
        self.points_on_plane_into(pl, &mut buf);
        buf
    }

    /// Buffer-reusing variant for hot loops.
    pub fn points_on_plane_into(&self, pl: PlaneId, out: &mut Vec<PointId>) {
        let mut raw = std::mem::take(out)
            .into_iter()
            .map(|p| p.0)
            .collect::<Vec<_>>();
        self.incidence_solutions(self.plane_coeffs(pl), &mut raw);
        *out = raw.into_iter().map(PointId).collect();
    }

    /// Planes through a point (dual of `points_on_plane`), sorted ascending.
    pub fn planes_through_point(&self, p: PointId) -> Vec<PlaneId> {
        let mut raw = Vec::new();
        self.incidence_solutions(self.coords_of(p), &mut raw);
        raw.into_iter().map(PlaneId).collect()
    }

    /// The line through two distinct points, canonicalized to its two
    /// smallest-index points.
    pub fn line_through(&self, p1: PointId, p2: PointId) -> Result<ProjLine, GeomError> {
        if p1 == p2 {
            return Err(GeomError::DegenerateLine);
        }
        let pts = self.points_on_line_raw(p1, p2);
        let mut ids: Vec<u32> = pts.into_iter().map(|p| p.0).collect();
        ids.sort_unstable();
        Ok(ProjLine { a: PointId(ids[0]), b: PointId(ids[1]) })
    }

    /// The `q + 1` points of the line spanned by two distinct points.
    pub fn points_on_line(&self, line: &ProjLine) -> Vec<PointId> {
        let mut pts = self.points_on_line_raw(line.a, line.b);
        pts.sort_unstable();
        pts
    }

    fn points_on_line_raw(&self, p1: PointId, p2: PointId) -> Vec<PointId> {
        let f = &self.field;
        let x = self.coords_of(p1);
        let y = self.coords_of(p2);
        let mut out = Vec::with_capacity(self.q as usize + 1);
        out.push(self.point_index(y).unwrap());
        for t in 0..self.q {
            let mut v = [Fe::ZERO; 4];
            for c in 0..4 {
                v[c] = f.add(x[c], f.mul(Fe(t), y[c]));
            }
            out.push(self.point_index(v).unwrap());
        }
        out
    }

    /// The line in which two distinct planes meet.
    pub fn intersection_line(&self, pl1: PlaneId, pl2: PlaneId) -> Result<ProjLine, GeomError> {
        if pl1 == pl2 {
            return Err(GeomError::DegenerateLine);
        }
        let rows = [self.plane_coeffs(pl1), self.plane_coeffs(pl2)];
        let basis = self.kernel_of(&rows)?;
        debug_assert_eq!(basis.len(), 2);
        let a = self.point_index(basis[0])?;
        let b = self.point_index(basis[1])?;
        self.line_through(a, b)
    }

    /// The pencil of the `q + 1` planes through a line.
    pub fn pencil_through_line(&self, line: &ProjLine) -> Vec<PlaneId> {
        let mut out = Vec::new();
        self.pencil_of_pair_into(line.a, line.b, &mut out);
        out
    }

    /// Planes through the line spanned by two distinct points; buffer-reusing
    /// variant for the coverage scan.
    pub fn pencil_of_pair_into(&self, p1: PointId, p2: PointId, out: &mut Vec<PlaneId>) {
        out.clear();
        let rows = [self.coords_of(p1), self.coords_of(p2)];
        let basis = self.kernel_of(&rows).expect("2x4 kernel");
        debug_assert_eq!(basis.len(), 2, "pencil needs two distinct points");
        let f = &self.field;
        let [u, v] = [basis[0], basis[1]];
        out.push(self.plane_index(v).unwrap());
        for t in 0..self.q {
            let mut w = [Fe::ZERO; 4];
            for c in 0..4 {
                w[c] = f.add(u[c], f.mul(Fe(t), v[c]));
            }
            out.push(self.plane_index(w).unwrap());
        }
    }
}

/// Row rank of a set of 4-vectors by Gaussian elimination.
pub(crate) fn rank(f: &FieldSpec, rows: &mut [[Fe; 4]]) -> usize {
    let mut r = 0usize;
    for col in 0..4 {
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = f.inv(rows[r][col]).expect("pivot nonzero");
        for x in rows[r][col..].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r];
        for row in rows[(r + 1)..].iter_mut() {
            if !row[col].is_zero() {
                let factor = row[col];
                for (x, &pv) in row[col..].iter_mut().zip(pivot_row[col..].iter()) {
                    *x = f.sub(*x, f.mul(factor, pv));
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn space(p: u32, h: u32) -> ProjSpace {
        ProjSpace::new(build_field(p, h).unwrap())
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(3, 2).unwrap(), 15);
        assert_eq!(theta(2, 3).unwrap(), 13);
        assert_eq!(theta(0, 7).unwrap(), 1);
        assert_eq!(theta(3, 5_000_000).unwrap(), 125000025000005000001);
        assert!(matches!(
            theta(3, 10u128.pow(35)),
            Err(GeomError::ThetaOverflow(3, _))
        ));
    }

    #[test]
    fn rank_unrank_roundtrip() {
        for s in [space(2, 1), space(3, 1), space(2, 2), space(5, 1)] {
            for p in s.points() {
                let c = s.coords_of(p);
                assert_eq!(s.point_index(c).unwrap(), p);
                // canonical form: leftmost nonzero is 1
                let piv = c.iter().position(|x| !x.is_zero()).unwrap();
                assert_eq!(c[piv], Fe::ONE);
            }
            assert_eq!(s.n_points(), theta(3, s.q() as u128).unwrap() as u32);
        }
    }

    #[test]
    fn plane_through_unit_points() {
        // e1,e2,e3 span x3 = 0, whose dual vector is (0,0,0,1), index 0
        let s = space(2, 1);
        let e1 = s.point_index([Fe(1), Fe(0), Fe(0), Fe(0)]).unwrap();
        let e2 = s.point_index([Fe(0), Fe(1), Fe(0), Fe(0)]).unwrap();
        let e3 = s.point_index([Fe(0), Fe(0), Fe(1), Fe(0)]).unwrap();
        let pl = s.plane_through(e1, e2, e3).unwrap();
        assert_eq!(s.plane_coeffs(pl), [Fe(0), Fe(0), Fe(0), Fe(1)]);

        // collinear triple fails
        let e12 = s.point_index([Fe(1), Fe(1), Fe(0), Fe(0)]).unwrap();
        assert_eq!(s.plane_through(e1, e2, e12).unwrap_err(), GeomError::DegenerateSpan);
    }

    #[test]
    fn plane_through_pg3_3() {
        let s = space(3, 1);
        let e1 = s.point_index([Fe(1), Fe(0), Fe(0), Fe(0)]).unwrap();
        let e2 = s.point_index([Fe(0), Fe(1), Fe(0), Fe(0)]).unwrap();
        let e4 = s.point_index([Fe(0), Fe(0), Fe(0), Fe(1)]).unwrap();
        let pl = s.plane_through(e1, e2, e4).unwrap();
        assert_eq!(s.plane_coeffs(pl), [Fe(0), Fe(0), Fe(1), Fe(0)]);
    }

    #[test]
    fn plane_enumeration_sizes() {
        for s in [space(2, 1), space(3, 1), space(2, 2)] {
            let pl = PlaneId(0);
            let pts = s.points_on_plane(pl);
            assert_eq!(pts.len(), s.plane_size() as usize);
            assert!(pts.windows(2).all(|w| w[0] < w[1]), "sorted, no duplicates");
            for &p in &pts {
                assert!(s.incident(pl, p));
            }
        }
    }

    #[test]
    fn pencil_members_contain_line() {
        let s = space(5, 1);
        let line = s.line_through(PointId(3), PointId(77)).unwrap();
        let pts = s.points_on_line(&line);
        assert_eq!(pts.len(), 6);
        let pencil = s.pencil_through_line(&line);
        assert_eq!(pencil.len(), 6);
        let mut seen = pencil.clone();
        seen.sort_unstable_by_key(|p| p.0);
        seen.dedup();
        assert_eq!(seen.len(), pencil.len(), "pencil planes pairwise distinct");
        for pl in pencil {
            for &p in &pts {
                assert!(s.incident(pl, p));
            }
        }
    }

    #[test]
    fn pencil_through_e1_e2_line_q2() {
        // planes through <e1,e2> all have a0 = a1 = 0
        let s = space(2, 1);
        let e1 = s.point_index([Fe(1), Fe(0), Fe(0), Fe(0)]).unwrap();
        let e2 = s.point_index([Fe(0), Fe(1), Fe(0), Fe(0)]).unwrap();
        let line = s.line_through(e1, e2).unwrap();
        let pencil = s.pencil_through_line(&line);
        assert_eq!(pencil.len(), 3);
        for pl in pencil {
            let a = s.plane_coeffs(pl);
            assert_eq!((a[0], a[1]), (Fe(0), Fe(0)));
        }
    }
}
