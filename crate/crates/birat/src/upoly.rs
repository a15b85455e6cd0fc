//! Dense univariate polynomials over a number field, rational functions, and
//! factorization over Q.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::nf::{Fe, Field, NumberField};
use crate::rat::{Int, Rat};

/// Dense univariate polynomial over a number field; coefficients low to high,
/// trailing zeros trimmed (zero polynomial has empty coefficients).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly {
    pub field: Field,
    pub c: Vec<Fe>,
}

impl UPoly {
    pub fn new(field: &Field, mut c: Vec<Fe>) -> UPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly {
            field: field.clone(),
            c,
        }
    }

    pub fn zero(field: &Field) -> UPoly {
        UPoly {
            field: field.clone(),
            c: vec![],
        }
    }

    pub fn one(field: &Field) -> UPoly {
        UPoly {
            field: field.clone(),
            c: vec![Fe::one(field)],
        }
    }

    pub fn constant(x: Fe) -> UPoly {
        let field = x.field().clone();
        UPoly::new(&field, vec![x])
    }

    pub fn monomial(field: &Field, coef: Fe, deg: usize) -> UPoly {
        let mut c = vec![Fe::zero(field); deg + 1];
        c[deg] = coef;
        UPoly::new(field, c)
    }

    pub fn from_rats(field: &Field, rs: &[Rat]) -> UPoly {
        UPoly::new(
            field,
            rs.iter()
                .map(|r| Fe::from_rat(field, r.clone()))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn lead(&self) -> &Fe {
        self.c.last().expect("leading coefficient of zero polynomial")
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn eval(&self, x: &Fe) -> Fe {
        let mut acc = Fe::zero(&self.field);
        for c in self.c.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        if self.c.len() <= 1 {
            return UPoly::zero(&self.field);
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| x.mul_rat(&Rat::from_integer(Int::from(i))))
            .collect();
        UPoly::new(&self.field, c)
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inverse().unwrap();
        self.scale(&inv)
    }

    pub fn scale(&self, x: &Fe) -> UPoly {
        UPoly::new(
            &self.field,
            self.c.iter().map(|a| a * x).collect(),
        )
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i);
            let b = other.c.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        UPoly::new(&self.field, c)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            field: self.field.clone(),
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(&self.field);
        }
        let mut c = vec![Fe::zero(&self.field); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        UPoly::new(&self.field, c)
    }

    pub fn divmod(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero());
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        if r.len() <= dd {
            return (UPoly::zero(&self.field), self.clone());
        }
        let inv = d.lead().inverse().unwrap();
        let mut q = vec![Fe::zero(&self.field); r.len() - dd];
        while r.len() > dd {
            let top = r.last().unwrap();
            if top.is_zero() {
                r.pop();
                continue;
            }
            let k = r.len() - 1 - dd;
            let c = top * &inv;
            q[k] = c.clone();
            for i in 0..=dd {
                let t = &c * &d.c[i];
                r[k + i] = &r[k + i] - &t;
            }
            r.pop();
        }
        (UPoly::new(&self.field, q), UPoly::new(&self.field, r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divmod(d).1
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.divmod(d);
        assert!(r.is_zero(), "inexact univariate division");
        q
    }

    pub fn pow(&self, mut e: usize) -> UPoly {
        let mut base = self.clone();
        let mut acc = UPoly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// A rational function num/den over a number field, kept reduced with monic
/// denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFun {
    pub num: UPoly,
    pub den: UPoly,
}

impl RatFun {
    pub fn new(num: UPoly, den: UPoly) -> RatFun {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFun { num, den };
        r.reduce();
        r
    }

    pub fn from_poly(num: UPoly) -> RatFun {
        let field = num.field.clone();
        RatFun {
            num,
            den: UPoly::one(&field),
        }
    }

    pub fn zero(field: &Field) -> RatFun {
        RatFun {
            num: UPoly::zero(field),
            den: UPoly::one(field),
        }
    }

    pub fn one(field: &Field) -> RatFun {
        RatFun {
            num: UPoly::one(field),
            den: UPoly::one(field),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = UPoly::one(&self.den.field);
            return;
        }
        let g = self.num.gcd(&self.den);
        if !g.is_constant() {
            self.num = self.num.div_exact(&g);
            self.den = self.den.div_exact(&g);
        }
        let lead_inv = self.den.lead().inverse().unwrap();
        self.den = self.den.scale(&lead_inv);
        self.num = self.num.scale(&lead_inv);
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        RatFun::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inverse(&self) -> RatFun {
        assert!(!self.is_zero());
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFun) -> RatFun {
        self.mul(&other.inverse())
    }
}

// ---------------------------------------------------------------------------
// Factorization over Q.
// ---------------------------------------------------------------------------

/// Dense integer polynomial helpers for the Zassenhaus pipeline.
fn ztrim(v: &mut Vec<Int>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn zmul(a: &[Int], b: &[Int]) -> Vec<Int> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
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

fn zcontent(a: &[Int]) -> Int {
    let mut g = Int::zero();
    for x in a {
        g = g.gcd(x);
    }
    g
}

fn zprimitive(a: &[Int]) -> Vec<Int> {
    let g = zcontent(a);
    if g.is_zero() || g.is_one() {
        return a.to_vec();
    }
    a.iter().map(|x| x / &g).collect()
}

/// Attempts exact division of integer polynomials; None when not divisible.
fn zdiv_exact(a: &[Int], b: &[Int]) -> Option<Vec<Int>> {
    let mut r = a.to_vec();
    ztrim(&mut r);
    if b.is_empty() {
        return None;
    }
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    if r.is_empty() {
        return Some(vec![]);
    }
    if r.len() <= db {
        return None;
    }
    let mut q = vec![Int::zero(); r.len() - db];
    while r.len() > db {
        let top = r.last().unwrap();
        if top.is_zero() {
            r.pop();
            continue;
        }
        let (c, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        let k = r.len() - 1 - db;
        q[k] = c.clone();
        for i in 0..=db {
            let t = &c * &b[i];
            r[k + i] -= t;
        }
        r.pop();
    }
    ztrim(&mut r);
    if r.is_empty() {
        Some(q)
    } else {
        None
    }
}

// Arithmetic mod a word prime.
fn pmod(a: &Int, p: u64) -> u64 {
    let m = a.mod_floor(&Int::from(p));
    let (_, digits) = m.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn paddm(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

fn psubm(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b) % p
}

fn pmulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn ppow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = pmulm(acc, a, p);
        }
        a = pmulm(a, a, p);
        e >>= 1;
    }
    acc
}

fn pinv(a: u64, p: u64) -> u64 {
    ppow(a, p - 2, p)
}

type PPoly = Vec<u64>;

fn ptrim(v: &mut PPoly) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pmul_poly(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = paddm(out[i + j], pmulm(x, y, p), p);
        }
    }
    ptrim(&mut out);
    out
}

fn pdivmod(a: &PPoly, b: &PPoly, p: u64) -> (PPoly, PPoly) {
    let mut r = a.clone();
    ptrim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![], r);
    }
    let inv = pinv(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let top = *r.last().unwrap();
        if top == 0 {
            r.pop();
            continue;
        }
        let k = r.len() - 1 - db;
        let c = pmulm(top, inv, p);
        q[k] = c;
        for i in 0..=db {
            r[k + i] = psubm(r[k + i], pmulm(c, b[i], p), p);
        }
        r.pop();
    }
    ptrim(&mut r);
    (q, r)
}

fn pgcd(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    ptrim(&mut a);
    ptrim(&mut b);
    while !b.is_empty() {
        let (_, r) = pdivmod(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let inv = pinv(l, p);
        for c in &mut a {
            *c = pmulm(*c, inv, p);
        }
    }
    a
}

fn pderiv(a: &PPoly, p: u64) -> PPoly {
    let mut out: PPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| pmulm(c, (i as u64) % p, p))
        .collect();
    ptrim(&mut out);
    out
}

/// Berlekamp factorization of a squarefree monic polynomial mod a small prime.
fn berlekamp(f: &PPoly, p: u64) -> Vec<PPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    // Matrix of x^(p*i) mod f, i = 0..n-1, as columns of Q - I.
    let mut xp = vec![0u64; 2];
    xp[1] = 1;
    let xp = {
        // x^p mod f by square-and-multiply on exponent p
        let mut acc: PPoly = vec![1];
        let mut base = xp;
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = pdivmod(&pmul_poly(&acc, &base, p), f, p).1;
            }
            base = pdivmod(&pmul_poly(&base, &base, p), f, p).1;
            e >>= 1;
        }
        acc
    };
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut cur: PPoly = vec![1];
    for i in 0..n {
        let mut row = vec![0u64; n];
        for (j, &c) in cur.iter().enumerate() {
            row[j] = c;
        }
        row[i] = psubm(row[i], 1, p);
        rows.push(row);
        cur = pdivmod(&pmul_poly(&cur, &xp, p), f, p).1;
    }
    // Nullspace of the transpose-free system: we built rows = (x^{pi} - x^i)
    // coefficients; kernel vectors v with sum v_i (x^{pi} - x^i) = 0 mod f.
    // Gaussian elimination on the n x n matrix whose i-th ROW is rows[i],
    // solving v^T * M = 0, i.e. kernel of M^T.
    let mut m: Vec<Vec<u64>> = (0..n)
        .map(|j| (0..n).map(|i| rows[i][j]).collect())
        .collect();
    // kernel of m (n x n) over F_p
    let mut pivots: Vec<Option<usize>> = vec![None; n];
    let mut rank = 0;
    for col in 0..n {
        let mut piv = None;
        for r in rank..n {
            if m[r][col] != 0 {
                piv = Some(r);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        m.swap(rank, piv);
        let inv = pinv(m[rank][col], p);
        for c in 0..n {
            m[rank][c] = pmulm(m[rank][c], inv, p);
        }
        for r in 0..n {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..n {
                    m[r][c] = psubm(m[r][c], pmulm(factor, m[rank][c], p), p);
                }
            }
        }
        pivots[col] = Some(rank);
        rank += 1;
    }
    let mut basis: Vec<PPoly> = vec![];
    for col in 0..n {
        if pivots[col].is_some() {
            continue;
        }
        let mut v = vec![0u64; n];
        v[col] = 1;
        for (c, piv) in pivots.iter().enumerate() {
            if let Some(r) = piv {
                v[c] = psubm(0, m[*r][col], p);
            }
        }
        ptrim(&mut v);
        basis.push(v);
    }
    let r = basis.len();
    let mut factors = vec![f.clone()];
    if r <= 1 {
        return factors;
    }
    for v in &basis {
        if factors.len() >= r {
            break;
        }
        if v.len() <= 1 {
            continue; // the constant vector gives no split
        }
        let mut next: Vec<PPoly> = vec![];
        for g in &factors {
            if g.len() - 1 <= 1 {
                next.push(g.clone());
                continue;
            }
            let mut pieces: Vec<PPoly> = vec![];
            let mut rest = g.clone();
            for s in 0..p {
                if rest.len() <= 1 {
                    break;
                }
                let mut shifted = v.clone();
                if shifted.is_empty() {
                    shifted = vec![0];
                }
                shifted[0] = psubm(shifted[0], s, p);
                ptrim(&mut shifted);
                let d = pgcd(&rest, &shifted, p);
                if d.len() > 1 && d.len() < rest.len() {
                    pieces.push(d.clone());
                    rest = pdivmod(&rest, &d, p).0;
                }
            }
            if rest.len() > 1 {
                pieces.push(rest);
            }
            if pieces.is_empty() {
                pieces.push(g.clone());
            }
            next.extend(pieces);
        }
        factors = next;
    }
    factors
}

/// Quadratic Hensel lift: given f = g*h mod m with sg + th = 1 mod m
/// (f, g, h integer polys, g monic considerations handled by caller),
/// produce g', h' with f = g'h' mod m^2.
struct HenselPair {
    g: Vec<Int>,
    h: Vec<Int>,
    s: Vec<Int>,
    t: Vec<Int>,
}

fn zmod(a: &[Int], m: &Int) -> Vec<Int> {
    let mut out: Vec<Int> = a
        .iter()
        .map(|x| {
            let mut r = x.mod_floor(m);
            // symmetric representative
            if &r * 2_i32 > *m {
                r -= m;
            }
            r
        })
        .collect();
    ztrim(&mut out);
    out
}

fn zsub(a: &[Int], b: &[Int]) -> Vec<Int> {
    let mut out = vec![Int::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    ztrim(&mut out);
    out
}

fn zadd(a: &[Int], b: &[Int]) -> Vec<Int> {
    let mut out = vec![Int::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    ztrim(&mut out);
    out
}

/// Division of a by monic b over Z/m (b must be monic).
fn zdivmod_monic_mod(a: &[Int], b: &[Int], m: &Int) -> (Vec<Int>, Vec<Int>) {
    let mut r = zmod(a, m);
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![Int::zero(); r.len() - db];
    while r.len() > db {
        let top = r.last().unwrap().clone();
        if top.is_zero() {
            r.pop();
            continue;
        }
        let k = r.len() - 1 - db;
        q[k] = top.clone();
        for i in 0..=db {
            let t = &top * &b[i];
            r[k + i] -= t;
        }
        r.pop();
        r = zmod(&r, m);
        // preserve length bookkeeping after reduction
        while r.len() > db && r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    (zmod(&q, m), zmod(&r, m))
}

fn hensel_step(f: &[Int], pair: &HenselPair, m: &Int) -> HenselPair {
    let m2 = m * m;
    let HenselPair { g, h, s, t } = pair;
    // e = f - g h mod m^2
    let e = zmod(&zsub(f, &zmul(g, h)), &m2);
    // q, r = divmod(s e, h); g' = g + t e + q g ; h' = h + r
    let se = zmod(&zmul(s, &e), &m2);
    let (q, r) = zdivmod_monic_mod(&se, h, &m2);
    let g1 = zmod(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), &m2);
    let h1 = zmod(&zadd(h, &r), &m2);
    // b = s g' + t h' - 1 mod m^2
    let b = zmod(
        &zsub(&zadd(&zmul(s, &g1), &zmul(t, &h1)), &[Int::one()]),
        &m2,
    );
    let sb = zmod(&zmul(s, &b), &m2);
    let (c, d) = zdivmod_monic_mod(&sb, &h1, &m2);
    let s1 = zmod(&zsub(s, &d), &m2);
    let t1 = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g1)), &m2);
    HenselPair {
        g: g1,
        h: h1,
        s: s1,
        t: t1,
    }
}

/// Extended gcd of two coprime polys mod p: s*a + t*b = 1.
fn pext_gcd(a: &PPoly, b: &PPoly, p: u64) -> (PPoly, PPoly) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0: PPoly = vec![1];
    let mut s1: PPoly = vec![];
    let mut t0: PPoly = vec![];
    let mut t1: PPoly = vec![1];
    while !r1.is_empty() {
        let (q, r) = pdivmod(&r0, &r1, p);
        let s2 = psub_poly(&s0, &pmul_poly(&q, &s1, p), p);
        let t2 = psub_poly(&t0, &pmul_poly(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    assert_eq!(r0.len(), 1, "polynomials not coprime mod p");
    let inv = pinv(r0[0], p);
    let scale = |v: &PPoly| -> PPoly { v.iter().map(|&c| pmulm(c, inv, p)).collect() };
    (scale(&s0), scale(&t0))
}

fn psub_poly(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] = x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] = psubm(out[i], y, p);
    }
    ptrim(&mut out);
    out
}

fn ppoly_to_z(a: &PPoly) -> Vec<Int> {
    a.iter().map(|&c| Int::from(c)).collect()
}

/// Lifts the modular factor list of monic f to factors mod p^(2^k) >= bound,
/// by a balanced product tree. Returns (modulus, lifted monic factors).
fn hensel_lift_tree(f: &[Int], factors: &[PPoly], p: u64, bound: &Int) -> (Int, Vec<Vec<Int>>) {
    if factors.len() == 1 {
        let mut m = Int::from(p);
        while &m < bound {
            m = &m * &m;
        }
        let lifted = zmod(f, &m);
        return (m, vec![lifted]);
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let gp = left
        .iter()
        .fold(vec![1u64], |acc, x| pmul_poly(&acc, x, p));
    let hp = right
        .iter()
        .fold(vec![1u64], |acc, x| pmul_poly(&acc, x, p));
    let (sp, tp) = pext_gcd(&gp, &hp, p);
    let mut pair = HenselPair {
        g: ppoly_to_z(&gp),
        h: ppoly_to_z(&hp),
        s: ppoly_to_z(&sp),
        t: ppoly_to_z(&tp),
    };
    let mut m = Int::from(p);
    while &m < bound {
        pair = hensel_step(f, &pair, &m);
        m = &m * &m;
    }
    let (m1, mut gs) = hensel_lift_tree(&pair.g, left, p, bound);
    let (_, hs) = hensel_lift_tree(&pair.h, right, p, bound);
    debug_assert_eq!(m1, m);
    gs.extend(hs);
    (m, gs)
}

/// Squarefree factorization over Q by Yun's algorithm; returns (factor, mult).
fn yun_squarefree(f: &UPoly) -> Vec<(UPoly, usize)> {
    let fd = f.derivative();
    let g = f.gcd(&fd);
    if g.is_constant() {
        return vec![(f.monic(), 1)];
    }
    let mut out = vec![];
    let mut w = f.div_exact(&g);
    let mut y = fd.div_exact(&g);
    let mut i = 1;
    loop {
        let z = y.sub(&w.derivative());
        if z.is_zero() {
            if !w.is_constant() {
                out.push((w.monic(), i));
            }
            break;
        }
        let g = w.gcd(&z);
        if !g.is_constant() {
            out.push((g.monic(), i));
        }
        w = w.div_exact(&g);
        y = z.div_exact(&g);
        i += 1;
    }
    out
}

/// Factors a squarefree primitive integer polynomial into irreducible
/// primitive integer factors (positive leading coefficients).
///
/// Works on the monic model F(x) = lc^(n-1) f(x/lc): Berlekamp mod a small
/// prime, Hensel lifting past the coefficient bound, exhaustive subset
/// recombination mapped back through x -> lc x.
fn factor_squarefree_z(f: &[Int]) -> Vec<Vec<Int>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();
    let fmonic: Vec<Int> = f
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i == n {
                Int::one()
            } else {
                c * lc.pow((n - 1 - i) as u32)
            }
        })
        .collect();
    const PRIMES: [u64; 20] = [
        3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
    ];
    for &p in &PRIMES {
        let fp: PPoly = {
            let mut v: PPoly = fmonic.iter().map(|c| pmod(c, p)).collect();
            ptrim(&mut v);
            v
        };
        debug_assert_eq!(fp.len(), fmonic.len());
        let d = pgcd(&fp, &pderiv(&fp, p), p);
        if d.len() != 1 {
            continue;
        }
        let modular = berlekamp(&fp, p);
        if modular.len() == 1 {
            return vec![f.to_vec()];
        }
        let height: Int = fmonic.iter().map(|c| c.abs()).max().unwrap();
        let bound: Int = (Int::one() << (2 * n + 4)) * height;
        let (m, lifted) = hensel_lift_tree(&fmonic, &modular, p, &bound);
        return recombine(f, &lifted, &m, &lc);
    }
    // Squarefree f stays squarefree mod all but finitely many primes.
    panic!("no usable small prime for factorization");
}

/// Exhaustive subset recombination of lifted modular factors of the monic model.
fn recombine(f: &[Int], lifted: &[Vec<Int>], m: &Int, lc: &Int) -> Vec<Vec<Int>> {
    let mut remaining: Vec<Vec<Int>> = lifted.to_vec();
    let mut rest = f.to_vec();
    let mut out: Vec<Vec<Int>> = vec![];
    let mut size = 1usize;
    'outer: while 2 * size <= remaining.len() {
        let idx: Vec<usize> = (0..remaining.len()).collect();
        for combo in combinations(&idx, size) {
            let mut prod: Vec<Int> = vec![Int::one()];
            for &i in &combo {
                prod = zmod(&zmul(&prod, &remaining[i]), m);
            }
            // undo the monic substitution: candidate(x) = prod(lc x), primitive part
            let cand: Vec<Int> = prod
                .iter()
                .enumerate()
                .map(|(i, c)| c * lc.pow(i as u32))
                .collect();
            let cand = zprimitive(&cand);
            if cand.len() <= 1 {
                continue;
            }
            if let Some(q) = zdiv_exact(&rest, &cand) {
                let mut cand = cand;
                if cand.last().unwrap().is_negative() {
                    for c in &mut cand {
                        *c = -c.clone();
                    }
                }
                out.push(cand);
                rest = zprimitive(&q);
                let keep: Vec<Vec<Int>> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                remaining = keep;
                continue 'outer;
            }
        }
        size += 1;
    }
    if rest.len() > 1 {
        let mut rest = rest;
        if rest.last().unwrap().is_negative() {
            for c in &mut rest {
                *c = -c.clone();
            }
        }
        out.push(rest);
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = vec![];
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Factors a nonzero univariate polynomial over Q into irreducible factors
/// with multiplicities. Factors are primitive integer polynomials with
/// positive leading coefficients; their product equals the input up to a
/// rational unit.
pub fn factor_rationals(f: &[Rat]) -> Vec<(Vec<Rat>, usize)> {
    let q = NumberField::rationals();
    let fp = UPoly::from_rats(&q, f);
    assert!(!fp.is_zero(), "cannot factor the zero polynomial");
    if fp.is_constant() {
        return vec![];
    }
    let mut out = vec![];
    for (sq, mult) in yun_squarefree(&fp) {
        // convert to primitive integer coefficients
        let rats: Vec<Rat> = sq.c.iter().map(|x| x.as_rat().unwrap()).collect();
        let mut den = Int::one();
        for r in &rats {
            den = den.lcm(r.denom());
        }
        let ints: Vec<Int> = rats.iter().map(|r| (r * &den).to_integer()).collect();
        let ints = zprimitive(&ints);
        for factor in factor_squarefree_z(&ints) {
            let fr: Vec<Rat> = factor.iter().map(|c| Rat::from_integer(c.clone())).collect();
            out.push((fr, mult));
        }
    }
    out
}

/// Irreducibility over Q of a nonconstant polynomial.
pub fn is_irreducible_over_q(f: &[Rat]) -> bool {
    let factors = factor_rationals(f);
    factors.len() == 1 && factors[0].1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_int, Rat};
    use num_traits::Zero;

    fn q() -> Field {
        NumberField::rationals()
    }

    fn upoly(cs: &[i64]) -> UPoly {
        UPoly::from_rats(&q(), &cs.iter().map(|&c| rat_int(c)).collect::<Vec<_>>())
    }

    #[test]
    fn factor_difference_of_squares() {
        // x^2 - 1 = (x-1)(x+1)
        let fs = factor_rationals(&[rat_int(-1), rat_int(0), rat_int(1)]);
        assert_eq!(fs.len(), 2);
        for (f, m) in &fs {
            assert_eq!(*m, 1);
            assert_eq!(f.len(), 2);
        }
    }

    #[test]
    fn x_squared_plus_one_irreducible() {
        assert!(is_irreducible_over_q(&[rat_int(1), rat_int(0), rat_int(1)]));
    }

    #[test]
    fn cubic_from_line_restriction() {
        // 2 - 9t - 3t^2 + t^3  ->  (t+2)(t^2-5t+1)
        let fs = factor_rationals(&[rat_int(2), rat_int(-9), rat_int(-3), rat_int(1)]);
        assert_eq!(fs.len(), 2);
        let mut degs: Vec<usize> = fs.iter().map(|(f, _)| f.len() - 1).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 2]);
        let quad = fs.iter().find(|(f, _)| f.len() == 3).unwrap();
        assert_eq!(
            quad.0,
            vec![rat_int(1), rat_int(-5), rat_int(1)]
        );
    }

    #[test]
    fn factor_with_multiplicity() {
        // (x-1)^2 (x+3)
        let f = upoly(&[-1, 1]).mul(&upoly(&[-1, 1])).mul(&upoly(&[3, 1]));
        let rats: Vec<Rat> = f.c.iter().map(|x| x.as_rat().unwrap()).collect();
        let mut fs = factor_rationals(&rats);
        fs.sort_by_key(|(_, m)| *m);
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].1, 1);
        assert_eq!(fs[1].1, 2);
    }

    #[test]
    fn gcd_and_division() {
        let a = upoly(&[-1, 0, 1]); // x^2-1
        let b = upoly(&[1, 1]); // x+1
        let g = a.gcd(&b);
        assert_eq!(g, b.monic());
        assert_eq!(a.div_exact(&b), upoly(&[-1, 1]));
    }

    #[test]
    fn ratfun_arithmetic() {
        let f = q();
        let x = RatFun::from_poly(upoly(&[0, 1]));
        let one = RatFun::one(&f);
        let r = one.div(&x.add(&one)); // 1/(x+1)
        let s = r.mul(&x.add(&one));
        assert_eq!(s, one);
        let t = r.sub(&r);
        assert!(t.is_zero());
    }

    #[test]
    fn factor_larger_degree() {
        // product of (x^2+1)(x^3 - x + 1)(x - 7) with a content
        let f = upoly(&[1, 0, 1])
            .mul(&upoly(&[1, -1, 0, 1]))
            .mul(&upoly(&[-7, 1]))
            .scale(&Fe::from_rat(&q(), crate::rat::rat(3, 5)));
        let rats: Vec<Rat> = f.c.iter().map(|x| x.as_rat().unwrap()).collect();
        let fs = factor_rationals(&rats);
        assert_eq!(fs.len(), 3);
        // product of factors proportional to f
        let mut prod = UPoly::one(&q());
        for (fc, m) in &fs {
            for _ in 0..*m {
                prod = prod.mul(&UPoly::from_rats(&q(), fc));
            }
        }
        // proportionality
        let ratio = f.lead().as_rat().unwrap() / prod.lead().as_rat().unwrap();
        for (a, b) in f.c.iter().zip(prod.c.iter()) {
            assert_eq!(a.as_rat().unwrap(), b.as_rat().unwrap() * &ratio);
        }
        let _ = Rat::zero();
    }
}
