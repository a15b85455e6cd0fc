//! Simple number fields Q(alpha) and their elements.
//!
//! Only simple extensions of Q are supported; an operation mixing two distinct
//! nontrivial extensions panics, since it would require a composite field.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{rat_int, Rat};

/// A simple extension Q[t]/(min_poly); degree 1 is Q itself.
#[derive(Clone)]
pub struct NumberField {
    /// Monic dense coefficient vector, low to high, length degree + 1.
    min_poly: Vec<Rat>,
    name: String,
}

pub type Field = Arc<NumberField>;

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
    }
}
impl Eq for NumberField {}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({}, deg {})", self.name, self.degree())
    }
}

impl NumberField {
    /// The rationals, as the trivial extension Q[t]/(t).
    pub fn rationals() -> Field {
        Arc::new(NumberField {
            min_poly: vec![Rat::zero(), Rat::one()],
            name: "q".into(),
        })
    }

    /// Builds Q[t]/(min_poly) after monic normalization; fails when the
    /// polynomial is reducible over Q. Coefficients low to high.
    pub fn new(min_poly: &[Rat], name: &str) -> Result<Field> {
        let mut p: Vec<Rat> = min_poly.to_vec();
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        if p.len() < 2 {
            return Err(Error::ReduciblePolynomial(
                "constant polynomial".to_string(),
            ));
        }
        let lead = p.last().unwrap().clone();
        for c in &mut p {
            *c /= &lead;
        }
        if p.len() == 2 {
            // Linear: the field is Q; keep the canonical representative t.
            return Ok(NumberField::rationals());
        }
        if !crate::upoly::is_irreducible_over_q(&p) {
            return Err(Error::ReduciblePolynomial(format!("{p:?}")));
        }
        Ok(Arc::new(NumberField {
            min_poly: p,
            name: name.to_string(),
        }))
    }

    /// Trusted constructor for internal callers that already know irreducibility.
    pub fn new_unchecked(min_poly: Vec<Rat>, name: &str) -> Field {
        debug_assert!(min_poly.last().is_some_and(|c| c.is_one()));
        if min_poly.len() == 2 {
            return NumberField::rationals();
        }
        Arc::new(NumberField {
            min_poly,
            name: name.to_string(),
        })
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn is_q(&self) -> bool {
        self.degree() == 1
    }

    pub fn min_poly(&self) -> &[Rat] {
        &self.min_poly
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// An element of a number field in the power basis of the generator.
#[derive(Clone, PartialEq, Eq)]
pub struct Fe {
    field: Field,
    /// Length = field degree.
    c: Vec<Rat>,
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fe{:?}", self.c)
    }
}

impl Fe {
    pub fn new(field: &Field, coords: Vec<Rat>) -> Fe {
        assert_eq!(coords.len(), field.degree());
        Fe {
            field: field.clone(),
            c: coords,
        }
    }

    pub fn zero(field: &Field) -> Fe {
        Fe {
            field: field.clone(),
            c: vec![Rat::zero(); field.degree()],
        }
    }

    pub fn one(field: &Field) -> Fe {
        Fe::from_rat(field, Rat::one())
    }

    pub fn from_rat(field: &Field, x: Rat) -> Fe {
        let mut c = vec![Rat::zero(); field.degree()];
        c[0] = x;
        Fe {
            field: field.clone(),
            c,
        }
    }

    pub fn from_i64(field: &Field, x: i64) -> Fe {
        Fe::from_rat(field, rat_int(x))
    }

    /// The generator alpha; for Q this is 0 (the class of t).
    pub fn generator(field: &Field) -> Fe {
        let mut c = vec![Rat::zero(); field.degree()];
        if field.degree() > 1 {
            c[1] = Rat::one();
        }
        Fe {
            field: field.clone(),
            c,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &[Rat] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.is_rational() {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Lifts into `target`, which must be Q-compatible with the current field.
    pub fn lift(&self, target: &Field) -> Fe {
        if self.field == *target {
            return self.clone();
        }
        assert!(
            self.field.is_q(),
            "cannot mix distinct nontrivial extensions {:?} and {:?}",
            self.field,
            target
        );
        Fe::from_rat(target, self.c[0].clone())
    }

    fn align(a: &Fe, b: &Fe) -> (Fe, Fe) {
        if a.field == b.field {
            (a.clone(), b.clone())
        } else if a.field.is_q() {
            (a.lift(&b.field), b.clone())
        } else {
            (a.clone(), b.lift(&a.field))
        }
    }

    /// Reduces a raw coefficient vector (any length) modulo the minimal polynomial.
    fn reduce(field: &Field, mut v: Vec<Rat>) -> Fe {
        let n = field.degree();
        let mp = &field.min_poly;
        while v.len() > n {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = v.len() - n;
            for i in 0..n {
                let t = &top * &mp[i];
                v[k + i] -= t;
            }
        }
        v.resize(n, Rat::zero());
        Fe {
            field: field.clone(),
            c: v,
        }
    }

    pub fn mul_rat(&self, x: &Rat) -> Fe {
        Fe {
            field: self.field.clone(),
            c: self.c.iter().map(|a| a * x).collect(),
        }
    }

    /// Trace of the multiplication-by-self endomorphism down to Q.
    pub fn trace(&self) -> Rat {
        let n = self.field.degree();
        if n == 1 {
            return self.c[0].clone();
        }
        // tr(alpha^k) from Newton's identities on the minimal polynomial.
        let mp = &self.field.min_poly;
        let mut power_traces = vec![Rat::zero(); n];
        power_traces[0] = rat_int(n as i64);
        for k in 1..n {
            // p_k + e1 p_{k-1} + ... + e_{k-1} p_1 + k e_k = 0 with
            // min_poly = t^n + a_{n-1} t^{n-1} + ... ; e_i = a_{n-i}.
            let mut s = rat_int(k as i64) * &mp[n - k];
            for j in 1..k {
                s += &mp[n - j] * &power_traces[k - j];
            }
            power_traces[k] = -s;
        }
        let mut t = Rat::zero();
        for (k, coef) in self.c.iter().enumerate() {
            t += coef * &power_traces[k];
        }
        t
    }

    pub fn inverse(&self) -> Option<Fe> {
        if self.is_zero() {
            return None;
        }
        let n = self.field.degree();
        if n == 1 {
            return Some(Fe::from_rat(&self.field, self.c[0].recip()));
        }
        // Extended Euclid of the coordinate polynomial against the minimal polynomial.
        let mut r0 = self.field.min_poly.clone();
        let mut r1 = self.c.clone();
        trim(&mut r1);
        let mut t0: Vec<Rat> = vec![];
        let mut t1: Vec<Rat> = vec![Rat::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t2;
        }
        // r0 = gcd, a nonzero constant since min_poly is irreducible.
        debug_assert_eq!(r0.len(), 1);
        let inv = r0[0].recip();
        let mut c: Vec<Rat> = t0.iter().map(|x| x * &inv).collect();
        c.resize(n, Rat::zero());
        Some(Fe {
            field: self.field.clone(),
            c,
        })
    }

    /// The nontrivial conjugate in a quadratic field: alpha -> s - alpha where
    /// s is the trace of the generator.
    pub fn quadratic_conjugate(&self) -> Fe {
        assert_eq!(self.field.degree(), 2);
        let s = -self.field.min_poly[1].clone();
        Fe {
            field: self.field.clone(),
            c: vec![&self.c[0] + &self.c[1] * &s, -self.c[1].clone()],
        }
    }

    pub fn pow(&self, mut e: u64) -> Fe {
        let mut base = self.clone();
        let mut acc = Fe::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

fn trim(v: &mut Vec<Rat>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![Rat::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r.last().unwrap() / lb;
        q[dr - db] = c.clone();
        for i in 0..=db {
            let t = &c * &b[i];
            r[dr - db + i] -= t;
        }
        trim(&mut r);
    }
    (q, r)
}

impl std::ops::Add for &Fe {
    type Output = Fe;
    fn add(self, rhs: &Fe) -> Fe {
        let (mut a, b) = Fe::align(self, rhs);
        for (x, y) in a.c.iter_mut().zip(&b.c) {
            *x += y;
        }
        a
    }
}

impl std::ops::Sub for &Fe {
    type Output = Fe;
    fn sub(self, rhs: &Fe) -> Fe {
        let (mut a, b) = Fe::align(self, rhs);
        for (x, y) in a.c.iter_mut().zip(&b.c) {
            *x -= y;
        }
        a
    }
}

impl std::ops::Neg for &Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        Fe {
            field: self.field.clone(),
            c: self.c.iter().map(|x| -x.clone()).collect(),
        }
    }
}

impl std::ops::Mul for &Fe {
    type Output = Fe;
    fn mul(self, rhs: &Fe) -> Fe {
        let (a, b) = Fe::align(self, rhs);
        if a.field.degree() == 1 {
            return Fe {
                field: a.field.clone(),
                c: vec![&a.c[0] * &b.c[0]],
            };
        }
        Fe::reduce(&a.field, poly_mul(&a.c, &b.c))
    }
}

impl std::ops::Div for &Fe {
    type Output = Fe;
    fn div(self, rhs: &Fe) -> Fe {
        let inv = rhs.inverse().expect("division by zero field element");
        self * &inv.lift(&Fe::align(self, rhs).0.field)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_q() {
            return write!(f, "{}", self.c[0]);
        }
        let name = self.field.name();
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "{name}")?,
                1 => write!(f, "{a}*{name}")?,
                _ if a.is_one() => write!(f, "{name}^{i}")?,
                _ => write!(f, "{a}*{name}^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn qi() -> Field {
        // t^2 + 1
        NumberField::new_unchecked(vec![rat_int(1), rat_int(0), rat_int(1)], "i")
    }

    #[test]
    fn trace_in_qi() {
        let f = qi();
        // a + b i -> 2a
        let x = Fe::new(&f, vec![rat_int(3), rat_int(5)]);
        assert_eq!(x.trace(), rat_int(6));
    }

    #[test]
    fn trace_of_rational_in_degree_e_field() {
        let f = NumberField::new_unchecked(
            vec![rat_int(1), rat_int(-5), rat_int(1)],
            "a",
        );
        let c = Fe::from_rat(&f, rat(7, 2));
        assert_eq!(c.trace(), rat_int(7));
    }

    #[test]
    fn trace_of_generator() {
        // t^2 - 5t + 1: trace of alpha is the sum of roots, 5
        let f = NumberField::new_unchecked(
            vec![rat_int(1), rat_int(-5), rat_int(1)],
            "a",
        );
        assert_eq!(Fe::generator(&f).trace(), rat_int(5));
        // cross-check against the companion-matrix trace for a cubic field
        let g = NumberField::new_unchecked(
            vec![rat_int(-2), rat_int(-1), rat_int(3), rat_int(1)],
            "b",
        );
        assert_eq!(Fe::generator(&g).trace(), rat_int(-3));
    }

    #[test]
    fn inverse_and_arithmetic() {
        let f = qi();
        let x = Fe::new(&f, vec![rat_int(2), rat_int(3)]);
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, Fe::one(&f));
        let y = &x * &x;
        // (2+3i)^2 = -5 + 12i
        assert_eq!(y, Fe::new(&f, vec![rat_int(-5), rat_int(12)]));
    }

    #[test]
    fn conjugate_quadratic() {
        let f = NumberField::new_unchecked(
            vec![rat_int(1), rat_int(-5), rat_int(1)],
            "a",
        );
        let x = Fe::generator(&f);
        let sum = &x + &x.quadratic_conjugate();
        assert_eq!(sum, Fe::from_rat(&f, rat_int(5)));
        let prod = &x * &x.quadratic_conjugate();
        assert_eq!(prod, Fe::from_rat(&f, rat_int(1)));
    }

    #[test]
    fn mixing_q_with_extension_coerces() {
        let f = qi();
        let a = Fe::from_rat(&NumberField::rationals(), rat(1, 2));
        let b = Fe::generator(&f);
        let s = &a + &b;
        assert_eq!(s, Fe::new(&f, vec![rat(1, 2), rat_int(1)]));
    }
}
