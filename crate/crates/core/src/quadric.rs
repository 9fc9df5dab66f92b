//! The elliptic quadric `Q` in `PG(3,q)` and its plane sections.
//!
//! The point set is cut out by `x0*x1 = x2^2 + b*x2*x3 + c*x3^2` where
//! `t^2 + b*t + c` is irreducible over `GF(q)`. This shape is elliptic for
//! every q, odd or even, so one code path serves both parities. The pair
//! `(b, c)` is the lexicographically smallest irreducible choice, mirroring
//! the field-modulus rule, so the point set is reproducible across runs.

use crate::bits::BitSet;
use crate::field::Fe;
use crate::pg3::{PlaneId, PointId, ProjSpace};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuadricError {
    #[error("arc intersection needs two distinct planes")]
    EqualPlanes,
}

pub struct EllipticQuadric {
    b: Fe,
    c: Fe,
    points: Vec<PointId>,
    membership: BitSet,
}

impl std::fmt::Debug for EllipticQuadric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EllipticQuadric")
            .field("b", &self.b)
            .field("c", &self.c)
            .field("points", &self.points.len())
            .finish()
    }
}

impl EllipticQuadric {
    /// Builds the deterministic quadric for the given space.
    pub fn build(space: &ProjSpace) -> Self {
        let f = space.field();
        let q = space.q();
        let (b, c) = 'outer: {
            for b in 0..q {
                'next_c: for c in 0..q {
                    // t^2 + b t + c irreducible over GF(q) iff it has no root
                    for t in 0..q {
                        let t = Fe(t);
                        let val = f.add(f.add(f.mul(t, t), f.mul(Fe(b), t)), Fe(c));
                        if val.is_zero() {
                            continue 'next_c;
                        }
                    }
                    break 'outer (Fe(b), Fe(c));
                }
            }
            unreachable!("an irreducible quadratic exists over every GF(q)")
        };

        let mut points = Vec::with_capacity(q as usize * q as usize + 1);
        let mut membership = BitSet::new(space.n_points() as usize);
        for p in space.points() {
            let x = space.coords_of(p);
            if Self::form_holds(space, b, c, &x) {
                points.push(p);
                membership.insert(p.0 as usize);
            }
        }
        assert_eq!(
            points.len(),
            (q as usize) * (q as usize) + 1,
            "elliptic quadric must have q^2 + 1 points"
        );
        EllipticQuadric { b, c, points, membership }
    }

    fn form_holds(space: &ProjSpace, b: Fe, c: Fe, x: &[Fe; 4]) -> bool {
        let f = space.field();
        let lhs = f.mul(x[0], x[1]);
        let rhs = f.add(
            f.mul(x[2], x[2]),
            f.add(f.mul(b, f.mul(x[2], x[3])), f.mul(c, f.mul(x[3], x[3]))),
        );
        lhs == rhs
    }

    /// Form parameters `(b, c)` of `x0*x1 = x2^2 + b*x2*x3 + c*x3^2`.
    pub fn form(&self) -> (Fe, Fe) {
        (self.b, self.c)
    }

    /// Point indices, sorted ascending.
    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    #[inline]
    pub fn contains(&self, p: PointId) -> bool {
        self.membership.contains(p.0 as usize)
    }

    /// The section `plane ∩ Q`; size 1 (tangent plane) or `q + 1` (secant).
    pub fn plane_section(&self, space: &ProjSpace, pl: PlaneId) -> Vec<PointId> {
        space
            .points_on_plane(pl)
            .into_iter()
            .filter(|&p| self.contains(p))
            .collect()
    }

    pub fn is_tangent(&self, space: &ProjSpace, pl: PlaneId) -> bool {
        self.plane_section(space, pl).len() == 1
    }

    /// Size of the intersection of the two plane sections; for distinct
    /// secant planes this is 2, 1 or 0 according as their common line is
    /// bisecant, tangent or external to `Q`.
    pub fn arc_intersection(
        &self,
        space: &ProjSpace,
        pl1: PlaneId,
        pl2: PlaneId,
    ) -> Result<usize, QuadricError> {
        if pl1 == pl2 {
            return Err(QuadricError::EqualPlanes);
        }
        let s1 = self.plane_section(space, pl1);
        let s2 = self.plane_section(space, pl2);
        Ok(s1.iter().filter(|p| s2.contains(p)).count())
    }
}
