//! Plain-text persistence for constructed point sets.
//!
//! Format, one record per line:
//!
//! ```text
//! satset v1
//! q <q> p <p> h <h> modulus <c0,c1,...,c_{h-1}>
//! quadric b <b> c <c>
//! n <n>
//! <x0> <x1> <x2> <x3>        (n lines, canonical coordinates, decimal reps)
//! ```
//!
//! The field and quadric lines pin down the exact geometry the set was built
//! against, so a saved set can be re-verified later byte-for-byte.

use crate::field::build_field;
use crate::pg3::{PointId, ProjSpace};
use crate::quadric::EllipticQuadric;
use crate::field::Fe;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SetFileError {
    #[error("line {0}: {1}")]
    Malformed(usize, String),
    #[error("unsupported header: expected `satset v1`")]
    BadHeader,
    #[error("declared n = {declared} but found {found} point lines")]
    CountMismatch { declared: usize, found: usize },
    #[error("field in file disagrees with the deterministic construction: {0}")]
    FieldMismatch(String),
    #[error("quadric (b,c) in file disagrees with the deterministic construction")]
    QuadricMismatch,
    #[error("point {0:?} is not in canonical form")]
    NonCanonicalPoint([u32; 4]),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFile {
    pub q: u32,
    pub p: u32,
    pub h: u32,
    pub modulus: Vec<u32>,
    pub b: u32,
    pub c: u32,
    pub points: Vec<[u32; 4]>,
}

impl SetFile {
    pub fn from_construction(
        space: &ProjSpace,
        quadric: &EllipticQuadric,
        set: &[PointId],
    ) -> Self {
        let f = space.field();
        let (b, c) = quadric.form();
        SetFile {
            q: f.order(),
            p: f.characteristic(),
            h: f.degree(),
            modulus: f.modulus().to_vec(),
            b: b.0,
            c: c.0,
            points: set
                .iter()
                .map(|&p| {
                    let c = space.coords_of(p);
                    [c[0].0, c[1].0, c[2].0, c[3].0]
                })
                .collect(),
        }
    }

    pub fn render(&self) -> String {
        let modulus = self
            .modulus
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let mut out = String::new();
        out.push_str("satset v1\n");
        out.push_str(&format!(
            "q {} p {} h {} modulus {}\n",
            self.q, self.p, self.h, modulus
        ));
        out.push_str(&format!("quadric b {} c {}\n", self.b, self.c));
        out.push_str(&format!("n {}\n", self.points.len()));
        for pt in &self.points {
            out.push_str(&format!("{} {} {} {}\n", pt[0], pt[1], pt[2], pt[3]));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, SetFileError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| SetFileError::Malformed(1, "empty file".into()))?;
        if header.trim() != "satset v1" {
            return Err(SetFileError::BadHeader);
        }

        let (no, field_line) = lines
            .next()
            .ok_or_else(|| SetFileError::Malformed(2, "missing field line".into()))?;
        let toks: Vec<&str> = field_line.split_whitespace().collect();
        if toks.len() != 8 || toks[0] != "q" || toks[2] != "p" || toks[4] != "h" || toks[6] != "modulus"
        {
            return Err(SetFileError::Malformed(no + 1, "bad field line".into()));
        }
        let parse_u32 = |s: &str, no: usize| {
            s.parse::<u32>()
                .map_err(|e| SetFileError::Malformed(no + 1, e.to_string()))
        };
        let q = parse_u32(toks[1], no)?;
        let p = parse_u32(toks[3], no)?;
        let h = parse_u32(toks[5], no)?;
        let modulus = toks[7]
            .split(',')
            .map(|s| parse_u32(s, no))
            .collect::<Result<Vec<_>, _>>()?;

        let (no, quad_line) = lines
            .next()
            .ok_or_else(|| SetFileError::Malformed(3, "missing quadric line".into()))?;
        let toks: Vec<&str> = quad_line.split_whitespace().collect();
        if toks.len() != 5 || toks[0] != "quadric" || toks[1] != "b" || toks[3] != "c" {
            return Err(SetFileError::Malformed(no + 1, "bad quadric line".into()));
        }
        let b = parse_u32(toks[2], no)?;
        let c = parse_u32(toks[4], no)?;

        let (no, n_line) = lines
            .next()
            .ok_or_else(|| SetFileError::Malformed(4, "missing count line".into()))?;
        let toks: Vec<&str> = n_line.split_whitespace().collect();
        if toks.len() != 2 || toks[0] != "n" {
            return Err(SetFileError::Malformed(no + 1, "bad count line".into()));
        }
        let n = toks[1]
            .parse::<usize>()
            .map_err(|e| SetFileError::Malformed(no + 1, e.to_string()))?;

        let mut points = Vec::with_capacity(n);
        for (no, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let coords: Vec<u32> = line
                .split_whitespace()
                .map(|s| parse_u32(s, no))
                .collect::<Result<Vec<_>, _>>()?;
            if coords.len() != 4 {
                return Err(SetFileError::Malformed(no + 1, "point needs 4 coordinates".into()));
            }
            points.push([coords[0], coords[1], coords[2], coords[3]]);
        }
        if points.len() != n {
            return Err(SetFileError::CountMismatch { declared: n, found: points.len() });
        }
        Ok(SetFile { q, p, h, modulus, b, c, points })
    }

    /// Rebuilds the geometry this file was written against and resolves the
    /// point list to indices. Fails when the recorded field or quadric does
    /// not match the deterministic construction for `(p, h)`.
    pub fn resolve(&self) -> Result<(ProjSpace, EllipticQuadric, Vec<PointId>), SetFileError> {
        let field = build_field(self.p, self.h)?;
        if field.order() != self.q {
            return Err(SetFileError::FieldMismatch(format!(
                "q = {} but p^h = {}",
                self.q,
                field.order()
            )));
        }
        if field.modulus() != self.modulus.as_slice() {
            return Err(SetFileError::FieldMismatch(format!(
                "modulus {:?} is not the deterministic choice {:?}",
                self.modulus,
                field.modulus()
            )));
        }
        let space = ProjSpace::new(field);
        let quadric = EllipticQuadric::build(&space);
        let (b, c) = quadric.form();
        if (b.0, c.0) != (self.b, self.c) {
            return Err(SetFileError::QuadricMismatch);
        }
        let mut ids = Vec::with_capacity(self.points.len());
        for &raw in &self.points {
            let coords = [Fe(raw[0]), Fe(raw[1]), Fe(raw[2]), Fe(raw[3])];
            for x in coords {
                space.field().element(x.0)?;
            }
            let id = space
                .point_index(coords)
                .map_err(|_| SetFileError::NonCanonicalPoint(raw))?;
            if space.coords_of(id) != coords {
                return Err(SetFileError::NonCanonicalPoint(raw));
            }
            ids.push(id);
        }
        Ok((space, quadric, ids))
    }
}
