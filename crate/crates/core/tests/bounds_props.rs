//! Cross-route checks on the bound engine: the real-valued product form
//! dominates the integer recurrence, the bound chain orders correctly, and
//! the recurrence is exactly reproducible.

use satq::bounds::{bound_a, bound_b, s_w_min};

#[test]
fn product_form_dominates_integer_recurrence() {
    for q in [1_000u64, 7951, 100_003, 1_000_003, 5_000_000] {
        let a = bound_a(q).unwrap();
        let qf = q as f64;
        let mut real = qf * qf * qf;
        for (i, &u) in a.trajectory.iter().enumerate().skip(1) {
            let w = 2 + i as u64; // the step that produced trajectory[i]
            real *= 1.0 - s_w_min(w, q) as f64 / (qf * qf + 1.0 - w as f64);
            assert!(
                u as f64 <= real * (1.0 + 1e-9),
                "q={q} w={w}: integer {u} above product form {real}"
            );
        }
    }
}

#[test]
fn bound_chain_a_below_b_across_validity_region() {
    // log-spaced grid of 60 points across [1e5, 5e6]
    let (lf, lt) = ((1e5f64).ln(), (5e6f64).ln());
    let mut checked = 0;
    for i in 0..60 {
        let q = (lf + (lt - lf) * i as f64 / 59.0).exp().round() as u64;
        let a = bound_a(q).unwrap();
        let b = bound_b(q).expect("applicable across the validity region");
        assert!(b.in_validity);
        assert!(a.n <= b.n, "q={q}: nA={} > nB={}", a.n, b.n);
        checked += 1;
    }
    assert!(checked >= 50);
}

#[test]
fn recurrence_identical_under_reformulated_arithmetic() {
    // same recurrence with ceil and binomials computed differently
    fn alt_bound_a(q: u64) -> (u64, Vec<u128>) {
        let q128 = q as u128;
        let mut u = q128.pow(3);
        let mut traj = vec![u];
        let mut w = 3u64;
        loop {
            let mut c2: u128 = 0;
            for i in 1..w {
                c2 += i as u128; // C(w,2) as a running sum
            }
            let s = if 2 * c2 - 1 <= q128 {
                c2 * (q128 - c2)
            } else if q % 2 == 1 {
                (q128 * q128 - 1) / 4
            } else {
                q128 * q128 / 4
            };
            let den = q128 * q128 + 1 - w as u128;
            let num = s * u;
            let delta = if num == 0 { 0 } else { (num - 1) / den + 1 }.min(u);
            u -= delta;
            traj.push(u);
            if u <= 1 {
                return (w, traj);
            }
            w += 1;
        }
    }
    for q in [2u64, 3, 13, 7951, 100_000, 5_000_000] {
        let a = bound_a(q).unwrap();
        let (w_alt, traj_alt) = alt_bound_a(q);
        assert_eq!(a.w, w_alt);
        assert_eq!(a.trajectory, traj_alt);
    }
}
