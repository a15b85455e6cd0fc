//! Shared arithmetic helpers over the integers and rationals.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// gcd of the numerators divided by lcm of the denominators; zero entries skipped.
pub fn rat_content(xs: &[Rat]) -> Rat {
    let mut num = Int::zero();
    let mut den = Int::one();
    for x in xs {
        if x.is_zero() {
            continue;
        }
        num = num.gcd(x.numer());
        den = den.lcm(x.denom());
    }
    if num.is_zero() {
        Rat::zero()
    } else {
        Rat::new(num, den)
    }
}

/// Scale a rational vector to coprime integers with the first nonzero entry positive.
pub fn normalize_primitive(xs: &mut [Rat]) {
    let c = rat_content(xs);
    if c.is_zero() {
        return;
    }
    let mut sign_fixed = false;
    let mut flip = false;
    for x in xs.iter_mut() {
        *x /= &c;
        if !sign_fixed && !x.is_zero() {
            sign_fixed = true;
            flip = x.is_negative();
        }
        if flip {
            *x = -x.clone();
        }
    }
}

/// Chinese remainder lift of `(r1 mod m1, r2 mod m2)` for coprime moduli.
pub fn crt(r1: &Int, m1: &Int, r2: &Int, m2: &Int) -> Int {
    let ext = Int::extended_gcd(m1, m2);
    debug_assert!(ext.gcd.is_one());
    let m = m1 * m2;
    let mut r = (r1 * ext.y * m2 + r2 * ext.x * m1) % &m;
    if r.is_negative() {
        r += &m;
    }
    r
}

/// Rational reconstruction of `a mod m` with |num|, den <= sqrt(m/2).
/// Returns None when no admissible fraction exists.
pub fn rational_reconstruct(a: &Int, m: &Int) -> Option<Rat> {
    let bound = sqrt_floor(&(m / 2_i32));
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (Int::zero(), Int::one());
    while r1 >= bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if t1.gcd(&r1).is_one() && t1.gcd(m).is_one() {
        if t1.is_negative() {
            Some(Rat::new(-r1, -t1))
        } else {
            Some(Rat::new(r1, t1))
        }
    } else {
        None
    }
}

pub fn sqrt_floor(n: &Int) -> Int {
    if n.is_zero() {
        return Int::zero();
    }
    assert!(n.sign() == Sign::Plus);
    let mut x: Int = Int::one() << (n.bits().div_ceil(2) as usize);
    loop {
        let y = (&x + n / &x) / 2_i32;
        if y >= x {
            return x;
        }
        x = y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn content_and_normalize() {
        let mut v = vec![rat(-4, 6), rat(2, 3), rat(0, 1)];
        normalize_primitive(&mut v);
        assert_eq!(v, vec![rat_int(1), rat_int(-1), rat_int(0)]);
    }

    #[test]
    fn crt_roundtrip() {
        let r = crt(
            &Int::from(2),
            &Int::from(7),
            &Int::from(3),
            &Int::from(11),
        );
        assert_eq!(r.mod_floor(&Int::from(7)), Int::from(2));
        assert_eq!(r.mod_floor(&Int::from(11)), Int::from(3));
    }

    #[test]
    fn reconstruct_fraction() {
        // 2/3 mod 1000003
        let m = Int::from(1000003);
        let inv3 = Int::from(3).modpow(&(&m - 2), &m);
        let a = (Int::from(2) * inv3) % &m;
        assert_eq!(rational_reconstruct(&a, &m), Some(rat(2, 3)));
    }

    #[test]
    fn sqrt_floor_small() {
        assert_eq!(sqrt_floor(&Int::from(99)), Int::from(9));
        assert_eq!(sqrt_floor(&Int::from(100)), Int::from(10));
    }
}
