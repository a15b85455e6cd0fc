//! Randomized property suites for the exact arithmetic layers: field axioms
//! in a quadratic extension, polynomial ring laws, normalization invariants,
//! and modular reconstruction round trips.

use birat::groebner::GB_PRIMES;
use birat::mpoly::MPoly;
use birat::nf::{Fe, Field, NumberField};
use birat::rat::{crt, normalize_primitive, rat_int, rational_reconstruct, Int, Rat};
use num_traits::Zero;
use proptest::prelude::*;

fn q() -> Field {
    NumberField::rationals()
}

fn root2() -> Field {
    NumberField::new(&[rat_int(-2), rat_int(0), rat_int(1)], "r2").unwrap()
}

prop_compose! {
    fn quadratic_element()(a in -50i64..=50, b in -50i64..=50) -> Fe {
        Fe::new(&root2(), vec![rat_int(a), rat_int(b)])
    }
}

prop_compose! {
    fn small_poly()(coeffs in prop::collection::vec(-9i64..=9, 10)) -> MPoly {
        // dense quadratic in three variables
        let f = q();
        let vars: Vec<MPoly> = (0..3).map(|i| MPoly::var(&f, 3, i)).collect();
        let mut monos = vec![MPoly::constant(&f, 3, Fe::one(&f))];
        monos.extend(vars.iter().cloned());
        for i in 0..3 {
            for j in i..3 {
                monos.push(vars[i].mul(&vars[j]));
            }
        }
        let mut acc = MPoly::zero(&f, 3);
        for (m, &c) in monos.iter().zip(&coeffs) {
            acc = acc.add(&m.scale(&Fe::from_rat(&f, rat_int(c))));
        }
        acc
    }
}

proptest! {
    #[test]
    fn quadratic_field_axioms(a in quadratic_element(), b in quadratic_element(), c in quadratic_element()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            let inv = a.inverse().unwrap();
            prop_assert_eq!(&a * &inv, Fe::one(&root2()));
        }
    }

    #[test]
    fn trace_and_conjugate(a in quadratic_element(), b in quadratic_element()) {
        prop_assert_eq!((&a + &b).trace(), a.trace() + b.trace());
        // x + conj(x) is rational and equals the trace
        let sym = &a + &a.quadratic_conjugate();
        prop_assert_eq!(sym.as_rat().unwrap(), a.trace());
        prop_assert_eq!(a.quadratic_conjugate().quadratic_conjugate(), a);
    }

    #[test]
    fn mpoly_ring_laws(f in small_poly(), g in small_poly(), h in small_poly()) {
        prop_assert_eq!(f.add(&g), g.add(&f));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert_eq!(f.sub(&f), MPoly::zero(&q(), 3));
    }

    #[test]
    fn product_rule(f in small_poly(), g in small_poly()) {
        for var in 0..3 {
            let lhs = f.mul(&g).derivative(var);
            let rhs = f.derivative(var).mul(&g).add(&f.mul(&g.derivative(var)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn normalize_primitive_invariants(
        nums in prop::collection::vec(-100i64..=100, 1..8),
        scale_n in prop::sample::select(vec![-7i64, -3, -1, 2, 5, 12]),
        scale_d in 1i64..=9,
    ) {
        let xs: Vec<Rat> = nums.iter().map(|&n| rat_int(n)).collect();
        let mut a = xs.clone();
        normalize_primitive(&mut a);
        // idempotent
        let mut twice = a.clone();
        normalize_primitive(&mut twice);
        prop_assert_eq!(&twice, &a);
        // invariant under a common nonzero rational scale
        let s = &rat_int(scale_n) / &rat_int(scale_d);
        let mut b: Vec<Rat> = xs.iter().map(|x| x * &s).collect();
        normalize_primitive(&mut b);
        prop_assert_eq!(&b, &a);
        // first nonzero entry is positive, entries are integral
        if let Some(first) = a.iter().find(|x| !x.is_zero()) {
            prop_assert!(first.numer() > &Int::from(0));
        }
        prop_assert!(a.iter().all(|x| x.denom() == &Int::from(1)));
    }

    #[test]
    fn modular_reconstruction_round_trip(num in -100_000i64..=100_000, den in 1i64..=1000) {
        let r = &rat_int(num) / &rat_int(den);
        let (p1, p2) = (GB_PRIMES[0], GB_PRIMES[1]);
        let residue = |p: u64| -> Int {
            use num_integer::Integer;
            let pi = Int::from(p);
            let d = r.denom().mod_floor(&pi);
            // denominator is far smaller than the 62-bit primes
            let dinv = d.extended_gcd(&pi).x.mod_floor(&pi);
            (r.numer().mod_floor(&pi) * dinv).mod_floor(&pi)
        };
        let m = Int::from(p1) * Int::from(p2);
        let lifted = crt(&residue(p1), &Int::from(p1), &residue(p2), &Int::from(p2));
        prop_assert_eq!(rational_reconstruct(&lifted, &m), Some(r));
    }
}
