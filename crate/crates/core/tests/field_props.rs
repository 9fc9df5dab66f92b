//! Field axioms under randomized hammering, plus exhaustive agreement of the
//! table-driven multiplication with plain polynomial arithmetic.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satq::field::{build_field, Fe, FieldSpec};

const FIELDS: [(u32, u32); 13] = [
    (2, 1),
    (3, 1),
    (2, 2),
    (5, 1),
    (7, 1),
    (2, 3),
    (3, 2),
    (11, 1),
    (13, 1),
    (2, 4),
    (5, 2),
    (3, 3),
    (2, 5),
];

fn random_element(f: &FieldSpec, rng: &mut ChaCha8Rng) -> Fe {
    Fe(rng.random_range(0..f.order()))
}

#[test]
fn axioms_on_random_triples() {
    for (p, h) in FIELDS {
        let f = build_field(p, h).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0xf1e1d + f.order() as u64);
        for _ in 0..10_000 {
            let (a, b, c) = (
                random_element(&f, &mut rng),
                random_element(&f, &mut rng),
                random_element(&f, &mut rng),
            );
            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.add(a, b), f.add(b, a));
            assert_eq!(f.mul(a, b), f.mul(b, a));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
            }
        }
    }
}

#[test]
fn multiplicative_group_has_order_q_minus_1() {
    for (p, h) in FIELDS {
        let f = build_field(p, h).unwrap();
        let q = f.order();
        for a in f.elements().skip(1) {
            assert_eq!(f.pow(a, (q - 1) as u64), Fe::ONE, "a = {a} in GF({q})");
        }
    }
}

#[test]
fn table_mul_matches_polynomial_mul_exhaustively() {
    for (p, h) in FIELDS {
        let f = build_field(p, h).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(
                    f.mul(a, b),
                    f.mul_poly(a, b),
                    "GF({}) {a} * {b}",
                    f.order()
                );
            }
        }
    }
}

#[test]
fn subtraction_inverts_addition() {
    for (p, h) in [(3, 1), (2, 3), (5, 2)] {
        let f = build_field(p, h).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let a = random_element(&f, &mut rng);
            let b = random_element(&f, &mut rng);
            assert_eq!(f.sub(f.add(a, b), b), a);
        }
    }
}
