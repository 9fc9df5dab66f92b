//! Iterative construction of 2-saturating subsets of the elliptic quadric.
//!
//! A point `P` is covered by `K` when it lies on a plane through three
//! non-collinear points of `K`. For `K` on the quadric with at least three
//! points this subsumes coverage by lines through two points of `K` (any such
//! line sits inside the plane spanned with a third, necessarily non-collinear
//! point), so the hot path marks planes only; the `line_rule_check` flag
//! re-checks that subsumption explicitly after every step.
//!
//! Each step adds the candidate covering the most new points. The number of
//! new points `delta(H)` has two interchangeable evaluations:
//!
//! * plane marking -- enumerate the planes through `H` and two chosen points
//!   and count fresh points in their union, `O(w^2 q^2)` per candidate;
//! * pencil scan -- for every uncovered `P`, walk the `q+1` planes through
//!   the line `<H,P>` and test whether one already holds two chosen points,
//!   `O(#U q)` per candidate.
//!
//! Whichever is cheaper by those estimates is used; tests assert they agree.

use crate::bits::BitSet;
use crate::bounds;
use crate::pg3::{PlaneId, PointId, ProjSpace};
use crate::quadric::EllipticQuadric;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("point {0:?} is not on the quadric")]
    NotOnQuadric(PointId),
    #[error("point {0:?} is already in the set")]
    AlreadyChosen(PointId),
    #[error("the starting triple must consist of three distinct points")]
    RepeatedPoint,
    #[error("point {0:?} is already covered")]
    PointCovered(PointId),
    #[error("no candidate covers new points while {uncovered} points are uncovered")]
    ConstructionStall { uncovered: u64 },
    #[error("no quadric point covers the final residual point {0:?}")]
    ResidualUncoverable(PointId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Scan every candidate, take the maximum delta (ties to smallest index).
    GreedyMax,
    /// Score a seeded uniform sample of `pool_size` candidates.
    RandomizedGreedy,
    /// Fixed order of points: first candidate with positive delta.
    Fop,
}

#[derive(Debug, Clone, Copy)]
pub struct GreedyConfig {
    pub strategy: Strategy,
    pub seed: u64,
    pub pool_size: usize,
    /// Re-verify after every step that line coverage adds nothing.
    pub line_rule_check: bool,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            strategy: Strategy::GreedyMax,
            seed: 0,
            pool_size: 50,
            line_rule_check: false,
        }
    }
}

/// Which delta evaluation to use; `Auto` picks by cost estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaStrategy {
    #[default]
    Auto,
    PlaneMarking,
    PencilScan,
}

/// One committed step of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepRecord {
    /// Size of the chosen set after this step.
    pub w: u32,
    pub chosen: PointId,
    /// New points covered by this step.
    pub delta: u64,
    pub uncovered_after: u64,
    /// Value of the Bound A recurrence at the same set size.
    pub recurrence_cap: u128,
}

#[derive(Debug, Clone, Default)]
pub struct RunTrace {
    /// Uncovered count right after the starting triple (always `q^3`).
    pub initial_uncovered: u64,
    pub steps: Vec<StepRecord>,
    /// Final point appended to cover a single residual, when one was needed.
    pub augmented: Option<PointId>,
}

impl std::fmt::Debug for CoverageState<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoverageState")
            .field("w", &self.chosen.len())
            .field("uncovered", &self.uncovered_count)
            .finish()
    }
}

pub struct CoverageState<'a> {
    space: &'a ProjSpace,
    quadric: &'a EllipticQuadric,
    chosen: Vec<PointId>,
    covered: BitSet,
    uncovered_count: u64,
    /// Exact list of currently uncovered points, compacted after each commit.
    uncovered: Vec<PointId>,
    /// `plane_count[pi]` = number of chosen points on plane `pi`.
    plane_count: Vec<u8>,
    pub delta_strategy: DeltaStrategy,
}

impl<'a> CoverageState<'a> {
    /// Starts the process from three distinct quadric points (automatically
    /// non-collinear by the cap property). Exactly `q^3` points are left
    /// uncovered.
    pub fn new(
        space: &'a ProjSpace,
        quadric: &'a EllipticQuadric,
        triple: [PointId; 3],
    ) -> Result<Self, SatError> {
        if triple[0] == triple[1] || triple[0] == triple[2] || triple[1] == triple[2] {
            return Err(SatError::RepeatedPoint);
        }
        for &p in &triple {
            if !quadric.contains(p) {
                return Err(SatError::NotOnQuadric(p));
            }
        }
        let n = space.n_points() as usize;
        let mut covered = BitSet::new(n);
        let plane = space
            .plane_through(triple[0], triple[1], triple[2])
            .expect("three quadric points are non-collinear");
        for p in space.points_on_plane(plane) {
            covered.insert(p.0 as usize);
        }
        let uncovered: Vec<PointId> = space
            .points()
            .filter(|p| !covered.contains(p.0 as usize))
            .collect();
        let uncovered_count = uncovered.len() as u64;
        debug_assert_eq!(
            uncovered_count,
            (space.q() as u64).pow(3),
            "a single plane leaves exactly q^3 points uncovered"
        );

        let mut plane_count = vec![0u8; space.n_planes() as usize];
        for &b in &triple {
            for pl in space.planes_through_point(b) {
                plane_count[pl.0 as usize] += 1;
            }
        }
        Ok(CoverageState {
            space,
            quadric,
            chosen: triple.to_vec(),
            covered,
            uncovered_count,
            uncovered,
            plane_count,
            delta_strategy: DeltaStrategy::Auto,
        })
    }

    #[inline]
    pub fn w(&self) -> usize {
        self.chosen.len()
    }

    pub fn chosen(&self) -> &[PointId] {
        &self.chosen
    }

    #[inline]
    pub fn uncovered_count(&self) -> u64 {
        self.uncovered_count
    }

    #[inline]
    pub fn is_covered(&self, p: PointId) -> bool {
        self.covered.contains(p.0 as usize)
    }

    pub fn plane_count_of(&self, pl: PlaneId) -> u8 {
        self.plane_count[pl.0 as usize]
    }

    fn check_candidate(&self, h: PointId) -> Result<(), SatError> {
        if !self.quadric.contains(h) {
            return Err(SatError::NotOnQuadric(h));
        }
        if self.chosen.contains(&h) {
            return Err(SatError::AlreadyChosen(h));
        }
        Ok(())
    }

    /// Number of new points covered if `h` were added. Does not mutate.
    pub fn delta(&self, h: PointId) -> Result<u64, SatError> {
        self.check_candidate(h)?;
        Ok(match self.delta_strategy {
            DeltaStrategy::PlaneMarking => self.delta_plane_marking(h),
            DeltaStrategy::PencilScan => self.delta_pencil_scan(h),
            DeltaStrategy::Auto => {
                if self.pencil_cheaper() {
                    self.delta_pencil_scan(h)
                } else {
                    self.delta_plane_marking(h)
                }
            }
        })
    }

    fn pencil_cheaper(&self) -> bool {
        let w = self.chosen.len() as u64;
        let plane_cost = w * (w - 1) / 2 * self.space.plane_size() as u64;
        let pencil_cost = 2 * self.uncovered_count * (self.space.q() as u64 + 1);
        pencil_cost < plane_cost
    }

    /// Strategy (i): mark the union of the planes through `h` and each pair
    /// of chosen points, counting uncovered hits without double counting.
    pub fn delta_plane_marking(&self, h: PointId) -> u64 {
        let planes = self.candidate_planes(h);
        let mut seen = BitSet::new(self.space.n_points() as usize);
        let mut fresh = 0u64;
        let mut buf = Vec::with_capacity(self.space.plane_size() as usize);
        for pl in planes {
            self.space.points_on_plane_into(pl, &mut buf);
            for &p in &buf {
                if !self.covered.contains(p.0 as usize) && seen.insert(p.0 as usize) {
                    fresh += 1;
                }
            }
        }
        fresh
    }

    /// The distinct planes through `h` and two chosen points.
    fn candidate_planes(&self, h: PointId) -> Vec<PlaneId> {
        let w = self.chosen.len();
        let mut planes = Vec::with_capacity(w * (w - 1) / 2);
        for i in 0..w {
            for j in (i + 1)..w {
                let pl = self
                    .space
                    .plane_through(self.chosen[i], self.chosen[j], h)
                    .expect("distinct quadric points are non-collinear");
                planes.push(pl);
            }
        }
        planes.sort_unstable_by_key(|p| p.0);
        planes.dedup();
        planes
    }

    /// Strategy (ii): for every uncovered `P`, scan the pencil of planes
    /// through the line `<h, P>` for one holding two chosen points.
    pub fn delta_pencil_scan(&self, h: PointId) -> u64 {
        let mut pencil = Vec::with_capacity(self.space.q() as usize + 1);
        let mut fresh = 0u64;
        for &p in &self.uncovered {
            if p == h {
                // h itself: the plane through h and any two chosen points
                // covers it, and w >= 2 always holds here
                fresh += 1;
                continue;
            }
            self.space.pencil_of_pair_into(h, p, &mut pencil);
            if pencil.iter().any(|&pl| self.plane_count[pl.0 as usize] >= 2) {
                fresh += 1;
            }
        }
        fresh
    }

    /// Whether adding `h` would newly cover the uncovered point `p`.
    pub fn newly_covers(&self, h: PointId, p: PointId) -> bool {
        if h == p {
            return self.chosen.len() >= 2;
        }
        let mut pencil = Vec::with_capacity(self.space.q() as usize + 1);
        self.space.pencil_of_pair_into(h, p, &mut pencil);
        pencil.iter().any(|&pl| self.plane_count[pl.0 as usize] >= 2)
    }

    /// `S_w(P)`: over all candidates `H`, how many would newly cover `P`.
    pub fn s_w_of_point(&self, p: PointId) -> Result<u64, SatError> {
        if self.is_covered(p) {
            return Err(SatError::PointCovered(p));
        }
        Ok(self
            .quadric
            .points()
            .iter()
            .filter(|h| !self.chosen.contains(h))
            .filter(|&&h| self.newly_covers(h, p))
            .count() as u64)
    }

    /// Adds `h`, marks its new coverage, and returns the realized delta.
    pub fn commit(&mut self, h: PointId) -> Result<u64, SatError> {
        self.check_candidate(h)?;
        let planes = self.candidate_planes(h);
        let mut fresh = 0u64;
        let mut buf = Vec::with_capacity(self.space.plane_size() as usize);
        for pl in planes {
            self.space.points_on_plane_into(pl, &mut buf);
            for &p in &buf {
                if self.covered.insert(p.0 as usize) {
                    fresh += 1;
                }
            }
        }
        self.uncovered_count -= fresh;
        let covered = &self.covered;
        self.uncovered.retain(|p| !covered.contains(p.0 as usize));
        debug_assert_eq!(self.uncovered.len() as u64, self.uncovered_count);
        self.chosen.push(h);
        for pl in self.space.planes_through_point(h) {
            self.plane_count[pl.0 as usize] += 1;
        }
        Ok(fresh)
    }

    /// Asserts that every point on a line through two chosen points is
    /// already covered by the plane rule.
    pub fn assert_line_rule_subsumed(&self) {
        for i in 0..self.chosen.len() {
            for j in (i + 1)..self.chosen.len() {
                let line = self
                    .space
                    .line_through(self.chosen[i], self.chosen[j])
                    .expect("chosen points are distinct");
                for p in self.space.points_on_line(&line) {
                    assert!(
                        self.is_covered(p),
                        "line {:?}-{:?} reaches uncovered point {:?}",
                        self.chosen[i],
                        self.chosen[j],
                        p
                    );
                }
            }
        }
    }

    /// Runs one selection step under the given strategy.
    pub fn greedy_step(
        &mut self,
        cfg: &GreedyConfig,
        rng: &mut ChaCha8Rng,
    ) -> Result<(PointId, u64), SatError> {
        debug_assert!(self.uncovered_count > 1);
        let candidates: Vec<PointId> = self
            .quadric
            .points()
            .iter()
            .copied()
            .filter(|h| !self.chosen.contains(h))
            .collect();
        if candidates.is_empty() {
            return Err(SatError::ConstructionStall { uncovered: self.uncovered_count });
        }

        let chosen = match cfg.strategy {
            Strategy::GreedyMax => self.best_of(&candidates)?,
            Strategy::RandomizedGreedy => {
                let pool = cfg.pool_size.max(1).min(candidates.len());
                let mut sample = candidates.clone();
                for i in 0..pool {
                    let j = rng.random_range(i..sample.len());
                    sample.swap(i, j);
                }
                sample.truncate(pool);
                sample.sort_unstable_by_key(|p| p.0);
                match self.best_of(&sample) {
                    Ok(best) => best,
                    // unlucky pool: every sampled candidate is useless, so
                    // fall back to a full scan before declaring a stall
                    Err(SatError::ConstructionStall { .. }) => self.best_of(&candidates)?,
                    Err(e) => return Err(e),
                }
            }
            Strategy::Fop => {
                let mut found = None;
                for &h in &candidates {
                    if self.delta(h)? > 0 {
                        found = Some(h);
                        break;
                    }
                }
                found.ok_or(SatError::ConstructionStall { uncovered: self.uncovered_count })?
            }
        };
        let delta = self.commit(chosen)?;
        if cfg.line_rule_check {
            self.assert_line_rule_subsumed();
        }
        Ok((chosen, delta))
    }

    /// Max-delta candidate, ties to the smallest index; error when no
    /// candidate covers anything new.
    fn best_of(&self, candidates: &[PointId]) -> Result<PointId, SatError> {
        let mut best: Option<(PointId, u64)> = None;
        for &h in candidates {
            let d = self.delta(h)?;
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((h, d));
            }
        }
        match best {
            Some((h, d)) if d > 0 => Ok(h),
            _ => Err(SatError::ConstructionStall { uncovered: self.uncovered_count }),
        }
    }
}

/// Runs the full construction: start from the three smallest quadric points,
/// iterate until at most one point is uncovered, then append one more quadric
/// point to cover a single residual if needed. The result is verified
/// 2-saturating before being returned.
pub fn run<'a>(
    space: &'a ProjSpace,
    quadric: &'a EllipticQuadric,
    cfg: &GreedyConfig,
) -> Result<(Vec<PointId>, RunTrace), SatError> {
    let pts = quadric.points();
    let triple = [pts[0], pts[1], pts[2]];
    let mut state = CoverageState::new(space, quadric, triple)?;
    if cfg.line_rule_check {
        state.assert_line_rule_subsumed();
    }
    let recurrence = bounds::bound_a(space.q() as u64)
        .expect("recurrence fits 128-bit for constructible q")
        .trajectory;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut trace = RunTrace { initial_uncovered: state.uncovered_count(), ..Default::default() };

    while state.uncovered_count() > 1 {
        let (chosen, delta) = state.greedy_step(cfg, &mut rng)?;
        let w = state.w();
        let cap = recurrence.get(w - 3).copied().unwrap_or(0);
        trace.steps.push(StepRecord {
            w: w as u32,
            chosen,
            delta,
            uncovered_after: state.uncovered_count(),
            recurrence_cap: cap,
        });
    }

    if state.uncovered_count() == 1 {
        let residual = state.uncovered[0];
        let extra = quadric
            .points()
            .iter()
            .copied()
            .find(|&h| !state.chosen().contains(&h) && state.newly_covers(h, residual))
            .ok_or(SatError::ResidualUncoverable(residual))?;
        state.commit(extra)?;
        if cfg.line_rule_check {
            state.assert_line_rule_subsumed();
        }
        trace.augmented = Some(extra);
    }
    debug_assert_eq!(state.uncovered_count(), 0);
    Ok((state.chosen().to_vec(), trace))
}

/// Verification outcome for a candidate 2-saturating set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyOutcome {
    Saturating,
    NotSaturating { witness: PointId, uncovered: u64 },
}

impl VerifyOutcome {
    pub fn is_saturating(&self) -> bool {
        matches!(self, VerifyOutcome::Saturating)
    }
}

/// Exhaustively checks that every point of the space lies on a plane through
/// three non-collinear points of `set` (which need not be on the quadric).
/// On failure reports the smallest uncovered point and the uncovered count.
pub fn verify_2_saturating(space: &ProjSpace, set: &[PointId]) -> VerifyOutcome {
    let mut covered = BitSet::new(space.n_points() as usize);
    let mut buf = Vec::with_capacity(space.plane_size() as usize);
    for i in 0..set.len() {
        for j in (i + 1)..set.len() {
            for k in (j + 1)..set.len() {
                let Ok(pl) = space.plane_through(set[i], set[j], set[k]) else {
                    continue; // collinear triple spans no plane
                };
                self::mark_plane(space, pl, &mut covered, &mut buf);
            }
        }
    }
    let total = space.n_points() as u64;
    let covered_count = covered.count_ones() as u64;
    if covered_count == total {
        return VerifyOutcome::Saturating;
    }
    let witness = space
        .points()
        .find(|p| !covered.contains(p.0 as usize))
        .expect("uncovered point exists");
    VerifyOutcome::NotSaturating { witness, uncovered: total - covered_count }
}

fn mark_plane(space: &ProjSpace, pl: PlaneId, covered: &mut BitSet, buf: &mut Vec<PointId>) {
    space.points_on_plane_into(pl, buf);
    for &p in buf.iter() {
        covered.insert(p.0 as usize);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use crate::quadric::EllipticQuadric;

    fn setup(p: u32, h: u32) -> (ProjSpace, EllipticQuadric) {
        let space = ProjSpace::new(build_field(p, h).unwrap());
        let quadric = EllipticQuadric::build(&space);
        (space, quadric)
    }

    fn initial_state<'a>(
        space: &'a ProjSpace,
        quadric: &'a EllipticQuadric,
    ) -> CoverageState<'a> {
        let p = quadric.points();
        CoverageState::new(space, quadric, [p[0], p[1], p[2]]).unwrap()
    }

    #[test]
    fn initial_uncovered_is_q_cubed() {
        for (p, h) in [(2, 1), (3, 1), (5, 1), (2, 2)] {
            let (space, quadric) = setup(p, h);
            let state = initial_state(&space, &quadric);
            assert_eq!(state.uncovered_count(), (space.q() as u64).pow(3));
        }
    }

    #[test]
    fn bad_triples_rejected() {
        let (space, quadric) = setup(3, 1);
        let pts = quadric.points();
        assert_eq!(
            CoverageState::new(&space, &quadric, [pts[0], pts[0], pts[1]]).unwrap_err(),
            SatError::RepeatedPoint
        );
        let off = space.points().find(|p| !quadric.contains(*p)).unwrap();
        assert_eq!(
            CoverageState::new(&space, &quadric, [pts[0], pts[1], off]).unwrap_err(),
            SatError::NotOnQuadric(off)
        );
    }

    #[test]
    fn delta_strategies_agree_first_step() {
        let (space, quadric) = setup(3, 1);
        let state = initial_state(&space, &quadric);
        for &h in quadric.points().iter().skip(3) {
            assert_eq!(
                state.delta_plane_marking(h),
                state.delta_pencil_scan(h),
                "candidate {h:?}"
            );
        }
    }

    #[test]
    fn delta_rejects_bad_candidates() {
        let (space, quadric) = setup(3, 1);
        let state = initial_state(&space, &quadric);
        let chosen = state.chosen()[0];
        assert_eq!(state.delta(chosen).unwrap_err(), SatError::AlreadyChosen(chosen));
        let off = space.points().find(|p| !quadric.contains(*p)).unwrap();
        assert_eq!(state.delta(off).unwrap_err(), SatError::NotOnQuadric(off));
    }

    #[test]
    fn run_q2_whole_ovoid_suffices() {
        let (space, quadric) = setup(2, 1);
        let (set, _) = run(&space, &quadric, &GreedyConfig::default()).unwrap();
        assert!(set.len() <= 5);
        assert!(verify_2_saturating(&space, &set).is_saturating());
    }

    #[test]
    fn run_traces_dominate_recurrence_q3() {
        let (space, quadric) = setup(3, 1);
        let (set, trace) = run(&space, &quadric, &GreedyConfig::default()).unwrap();
        assert!(verify_2_saturating(&space, &set).is_saturating());
        for step in &trace.steps {
            assert!(
                (step.uncovered_after as u128) <= step.recurrence_cap,
                "step {step:?}"
            );
        }
        let cap = bounds::bound_a(3).unwrap().n;
        assert!(set.len() as u64 <= cap);
    }

    #[test]
    fn three_points_leave_q_cubed_witnesses() {
        let (space, quadric) = setup(3, 1);
        let pts = &quadric.points()[..3];
        match verify_2_saturating(&space, pts) {
            VerifyOutcome::NotSaturating { uncovered, .. } => {
                assert_eq!(uncovered, 27);
            }
            VerifyOutcome::Saturating => panic!("three points cannot saturate"),
        }
    }

    #[test]
    fn whole_ovoid_saturates_q2() {
        let (space, quadric) = setup(2, 1);
        assert!(verify_2_saturating(&space, quadric.points()).is_saturating());
    }

    #[test]
    fn randomized_runs_are_reproducible() {
        let (space, quadric) = setup(5, 1);
        let cfg = GreedyConfig {
            strategy: Strategy::RandomizedGreedy,
            seed: 12345,
            pool_size: 7,
            line_rule_check: false,
        };
        let (set1, trace1) = run(&space, &quadric, &cfg).unwrap();
        let (set2, trace2) = run(&space, &quadric, &cfg).unwrap();
        assert_eq!(set1, set2);
        assert_eq!(trace1.steps, trace2.steps);
        assert!(verify_2_saturating(&space, &set1).is_saturating());
    }

    #[test]
    fn fop_terminates_and_verifies() {
        let (space, quadric) = setup(2, 2);
        let cfg = GreedyConfig { strategy: Strategy::Fop, ..Default::default() };
        let (set, _) = run(&space, &quadric, &cfg).unwrap();
        assert!(verify_2_saturating(&space, &set).is_saturating());
    }

    #[test]
    fn line_rule_is_subsumed_at_small_q() {
        for (p, h) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)] {
            let (space, quadric) = setup(p, h);
            let cfg = GreedyConfig { line_rule_check: true, ..Default::default() };
            let (set, _) = run(&space, &quadric, &cfg).unwrap();
            assert!(verify_2_saturating(&space, &set).is_saturating());
        }
    }

    #[test]
    fn s_w_rejects_covered_points() {
        let (space, quadric) = setup(3, 1);
        let state = initial_state(&space, &quadric);
        let covered = space.points().find(|&p| state.is_covered(p)).unwrap();
        assert_eq!(state.s_w_of_point(covered).unwrap_err(), SatError::PointCovered(covered));
    }
}
