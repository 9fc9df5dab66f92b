//! Parity-check matrices from point sets, with exhaustive minimum-distance
//! and covering-radius checks at small scale.
//!
//! A point set in `PG(3,q)` becomes the column set of a 4-row parity-check
//! matrix; the set is 2-saturating exactly when the code it defines has
//! covering radius at most 3, and the set is a cap exactly when the minimum
//! distance is at least 4. Both directions are checked here by brute force so
//! the geometric and coding-theoretic views can be tested against each other.

use crate::field::Fe;
use crate::pg3::{rank, PointId, ProjSpace};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("a codimension-4 parity check needs at least 4 columns, got {0}")]
    TooFewColumns(usize),
    #[error("column set has rank {0} < 4 (degenerate set)")]
    DegenerateSet(usize),
    #[error("exhaustive search limit exceeded: {0}")]
    LimitExceeded(&'static str),
}

/// A `4 x n` parity-check matrix over `GF(q)`, columns in set order.
pub struct CodeSpec {
    q: u32,
    columns: Vec<[Fe; 4]>,
}

/// Result of the exhaustive minimum-distance scan over column subsets of
/// size at most 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinDistance {
    Exact(u32),
    AtLeastFive,
}

pub fn parity_check_from_set(space: &ProjSpace, set: &[PointId]) -> Result<CodeSpec, CodeError> {
    if set.len() < 4 {
        return Err(CodeError::TooFewColumns(set.len()));
    }
    let columns: Vec<[Fe; 4]> = set.iter().map(|&p| space.coords_of(p)).collect();
    let mut rows = columns.clone();
    let r = rank(space.field(), &mut rows);
    if r < 4 {
        return Err(CodeError::DegenerateSet(r));
    }
    Ok(CodeSpec { q: space.q(), columns })
}

impl CodeSpec {
    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Smallest size of a linearly dependent column subset, scanning subsets
    /// of size 2, 3, 4; anything beyond is reported as `AtLeastFive`.
    pub fn min_distance(&self, space: &ProjSpace) -> Result<MinDistance, CodeError> {
        if self.columns.len() > 60 || self.q > 13 {
            return Err(CodeError::LimitExceeded("min_distance needs n <= 60 and q <= 13"));
        }
        let f = space.field();
        let n = self.columns.len();
        // size 2: proportional columns
        for i in 0..n {
            for j in (i + 1)..n {
                let mut rows = vec![self.columns[i], self.columns[j]];
                if rank(f, &mut rows) < 2 {
                    return Ok(MinDistance::Exact(2));
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let mut rows = vec![self.columns[i], self.columns[j], self.columns[k]];
                    if rank(f, &mut rows) < 3 {
                        return Ok(MinDistance::Exact(3));
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for l in (k + 1)..n {
                        let mut rows = vec![
                            self.columns[i],
                            self.columns[j],
                            self.columns[k],
                            self.columns[l],
                        ];
                        if rank(f, &mut rows) < 4 {
                            return Ok(MinDistance::Exact(4));
                        }
                    }
                }
            }
        }
        Ok(MinDistance::AtLeastFive)
    }

    /// Exact covering radius by breadth-first search over all `q^4`
    /// syndromes: level `L` holds the syndromes expressible as a combination
    /// of `L` columns and no fewer.
    pub fn covering_radius(&self, space: &ProjSpace) -> Result<u32, CodeError> {
        if self.q > 9 {
            return Err(CodeError::LimitExceeded("covering_radius needs q <= 9"));
        }
        let f = space.field();
        let q = self.q as usize;
        let total = q * q * q * q;

        // every nonzero multiple of every column, as syndrome digit vectors
        let mut moves: Vec<[u32; 4]> = Vec::with_capacity(self.columns.len() * (q - 1));
        for col in &self.columns {
            for a in 1..self.q {
                let s = Fe(a);
                moves.push([
                    f.mul(s, col[0]).0,
                    f.mul(s, col[1]).0,
                    f.mul(s, col[2]).0,
                    f.mul(s, col[3]).0,
                ]);
            }
        }

        let encode = |d: [u32; 4]| -> usize {
            (((d[0] as usize * q + d[1] as usize) * q + d[2] as usize) * q) + d[3] as usize
        };
        let decode = |s: usize| -> [u32; 4] {
            [
                (s / (q * q * q)) as u32,
                (s / (q * q) % q) as u32,
                (s / q % q) as u32,
                (s % q) as u32,
            ]
        };

        let mut dist = vec![u8::MAX; total];
        dist[0] = 0;
        let mut frontier = vec![0usize];
        let mut reached = 1usize;
        let mut level = 0u8;
        while !frontier.is_empty() && reached < total {
            level += 1;
            let mut next = Vec::new();
            for &s in &frontier {
                let d = decode(s);
                for mv in &moves {
                    let t = encode([
                        f.add(Fe(d[0]), Fe(mv[0])).0,
                        f.add(Fe(d[1]), Fe(mv[1])).0,
                        f.add(Fe(d[2]), Fe(mv[2])).0,
                        f.add(Fe(d[3]), Fe(mv[3])).0,
                    ]);
                    if dist[t] == u8::MAX {
                        dist[t] = level;
                        next.push(t);
                        reached += 1;
                    }
                }
            }
            frontier = next;
        }
        debug_assert_eq!(reached, total, "rank-4 columns span every syndrome");
        Ok(dist.iter().map(|&d| d as u32).max().unwrap())
    }

    /// Whether every syndrome is a combination of at most 3 columns; by the
    /// point-set correspondence this is 2-saturation of the column set.
    pub fn covering_radius_le3(&self, space: &ProjSpace) -> Result<bool, CodeError> {
        Ok(self.covering_radius(space)? <= 3)
    }

    /// Rows of the matrix as space-separated element reps, for external
    /// checkers.
    pub fn dump_matrix(&self) -> String {
        let mut out = String::new();
        for r in 0..4 {
            let row: Vec<String> = self.columns.iter().map(|c| c[r].0.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}
