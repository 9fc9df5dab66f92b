//! Behavioural guarantees of the greedy construction: agreement of the two
//! delta evaluations, the averaging inequality, recurrence dominance, and the
//! per-point inclusion-count lower bound, step by step.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satq::bounds::{bound_a, s_w_min};
use satq::field::build_field;
use satq::pg3::{PointId, ProjSpace};
use satq::quadric::EllipticQuadric;
use satq::saturator::{
    run, verify_2_saturating, CoverageState, GreedyConfig, Strategy,
};

fn setup(p: u32, h: u32) -> (ProjSpace, EllipticQuadric) {
    let space = ProjSpace::new(build_field(p, h).unwrap());
    let quadric = EllipticQuadric::build(&space);
    (space, quadric)
}

fn initial<'a>(space: &'a ProjSpace, quadric: &'a EllipticQuadric) -> CoverageState<'a> {
    let p = quadric.points();
    CoverageState::new(space, quadric, [p[0], p[1], p[2]]).unwrap()
}

fn candidates(quadric: &EllipticQuadric, state: &CoverageState) -> Vec<PointId> {
    quadric
        .points()
        .iter()
        .copied()
        .filter(|h| !state.chosen().contains(h))
        .collect()
}

/// Greedy-max selection done by hand so tests can inspect every step.
fn best_candidate(state: &CoverageState, cands: &[PointId]) -> (PointId, u64) {
    let mut best = (cands[0], 0u64);
    let mut first = true;
    for &h in cands {
        let d = state.delta(h).unwrap();
        if first || d > best.1 {
            best = (h, d);
            first = false;
        }
    }
    best
}

#[test]
fn delta_evaluations_agree_at_every_step() {
    for (p, h) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
        let (space, quadric) = setup(p, h);
        let mut state = initial(&space, &quadric);
        while state.uncovered_count() > 1 {
            let cands = candidates(&quadric, &state);
            let mut chosen = (cands[0], 0u64);
            let mut first = true;
            for &hh in &cands {
                let plane = state.delta_plane_marking(hh);
                let pencil = state.delta_pencil_scan(hh);
                assert_eq!(plane, pencil, "q={} w={} H={hh:?}", space.q(), state.w());
                if first || plane > chosen.1 {
                    chosen = (hh, plane);
                    first = false;
                }
            }
            if chosen.1 == 0 {
                break;
            }
            state.commit(chosen.0).unwrap();
        }
    }
}

#[test]
fn inclusion_counts_sum_to_delta_sum() {
    // multiset identity: sum over uncovered P of S_w(P) equals sum over
    // candidates H of delta(H)
    for (p, h) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)] {
        let (space, quadric) = setup(p, h);
        let mut state = initial(&space, &quadric);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cfg = GreedyConfig::default();
        loop {
            let cands = candidates(&quadric, &state);
            let delta_sum: u64 = cands.iter().map(|&hh| state.delta(hh).unwrap()).sum();
            let s_sum: u64 = space
                .points()
                .filter(|&pt| !state.is_covered(pt))
                .map(|pt| state.s_w_of_point(pt).unwrap())
                .sum();
            assert_eq!(delta_sum, s_sum, "q={} w={}", space.q(), state.w());
            if state.uncovered_count() <= 1 {
                break;
            }
            state.greedy_step(&cfg, &mut rng).unwrap();
        }
    }
}

#[test]
fn greedy_delta_beats_average_lower_bound() {
    for (p, h) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1)] {
        let (space, quadric) = setup(p, h);
        let q = space.q() as u64;
        let mut state = initial(&space, &quadric);
        while state.uncovered_count() > 1 {
            let w = state.w() as u64;
            let u = state.uncovered_count() as u128;
            let floor = s_w_min(w, q)
                .checked_mul(u)
                .unwrap()
                .div_ceil((q * q + 1 - w) as u128);
            let cands = candidates(&quadric, &state);
            let (hh, d) = best_candidate(&state, &cands);
            assert!(
                d as u128 >= floor.min(u),
                "q={q} w={w}: greedy delta {d} below averaged floor {floor}"
            );
            state.commit(hh).unwrap();
        }
    }
}

#[test]
fn uncovered_counts_dominated_by_recurrence() {
    for (p, h) in [(5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
        let (space, quadric) = setup(p, h);
        let q = space.q() as u64;
        let (set, trace) = run(&space, &quadric, &GreedyConfig::default()).unwrap();
        assert_eq!(trace.initial_uncovered, q.pow(3));
        let rec = bound_a(q).unwrap();
        for step in &trace.steps {
            assert!(
                (step.uncovered_after as u128) <= step.recurrence_cap,
                "q={q} step={step:?}"
            );
        }
        assert!(set.len() as u64 <= rec.n);
    }
}

#[test]
fn per_point_inclusion_counts_respect_lower_bound() {
    // odd-q cases plus q = 8 for the even branch of the bound
    for (p, h) in [(5, 1), (7, 1), (3, 2), (2, 3)] {
        let (space, quadric) = setup(p, h);
        let q = space.q() as u64;
        let mut state = initial(&space, &quadric);
        let mut small_w_branch = false;
        let mut forced_branch = false;
        while state.uncovered_count() > 1 {
            let w = state.w() as u64;
            let c2 = w * (w - 1) / 2;
            if 2 * c2 - 1 <= q {
                small_w_branch = true;
            } else {
                forced_branch = true;
            }
            let floor = s_w_min(w, q);
            let min_s = space
                .points()
                .filter(|&pt| !state.is_covered(pt))
                .map(|pt| state.s_w_of_point(pt).unwrap())
                .min()
                .unwrap();
            assert!(
                min_s as u128 >= floor,
                "q={q} w={w}: min S_w(P) = {min_s} < floor {floor}"
            );
            let cands = candidates(&quadric, &state);
            let (hh, _) = best_candidate(&state, &cands);
            state.commit(hh).unwrap();
        }
        assert!(small_w_branch, "q={q}: small-w branch never exercised");
        assert!(forced_branch, "q={q}: forced branch never exercised");
    }
}

#[test]
fn removing_the_last_point_breaks_saturation() {
    for (p, h) in [(3, 1), (2, 2), (5, 1), (7, 1), (3, 2)] {
        let (space, quadric) = setup(p, h);
        let (set, _) = run(&space, &quadric, &GreedyConfig::default()).unwrap();
        assert!(verify_2_saturating(&space, &set).is_saturating());
        let truncated = &set[..set.len() - 1];
        assert!(
            !verify_2_saturating(&space, truncated).is_saturating(),
            "q = {}: set is not minimal at its last point",
            space.q()
        );
    }
}

#[test]
fn outputs_stay_on_the_quadric_and_cap_free() {
    for (p, h) in [(5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
        let (space, quadric) = setup(p, h);
        for strategy in [Strategy::GreedyMax, Strategy::RandomizedGreedy, Strategy::Fop] {
            let cfg = GreedyConfig { strategy, seed: 9, pool_size: 20, ..Default::default() };
            let (set, _) = run(&space, &quadric, &cfg).unwrap();
            assert!(set.iter().all(|&pt| quadric.contains(pt)));
            for i in 0..set.len() {
                for j in (i + 1)..set.len() {
                    for k in (j + 1)..set.len() {
                        assert!(!space.collinear(set[i], set[j], set[k]));
                    }
                }
            }
        }
    }
}

#[test]
fn exhausted_state_has_zero_deltas() {
    let (space, quadric) = setup(3, 1);
    let mut state = initial(&space, &quadric);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let cfg = GreedyConfig::default();
    while state.uncovered_count() > 1 {
        state.greedy_step(&cfg, &mut rng).unwrap();
    }
    if state.uncovered_count() == 1 {
        let residual = space.points().find(|&pt| !state.is_covered(pt)).unwrap();
        let extra = quadric
            .points()
            .iter()
            .copied()
            .find(|&hh| !state.chosen().contains(&hh) && state.newly_covers(hh, residual))
            .unwrap();
        state.commit(extra).unwrap();
    }
    assert_eq!(state.uncovered_count(), 0);
    for &hh in quadric.points() {
        if !state.chosen().contains(&hh) {
            assert_eq!(state.delta(hh).unwrap(), 0);
        }
    }
}
