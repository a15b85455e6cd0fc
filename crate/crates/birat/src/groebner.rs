//! Groebner bases and ideal arithmetic.
//!
//! The Buchberger loop is generic over the coefficient domain and runs either
//! over a number field or over a word-size prime field.  For homogeneous
//! ideals over Q a multimodular strategy reconstructs the reduced basis from
//! several primes and then certifies it exactly: the certified basis G is a
//! Groebner basis with F contained in <G>, and the leading-term agreement with
//! the modular bases pins the Hilbert function, which forces <G> = <F>.

use num_traits::{One, Signed};

use crate::mpoly::{MPoly, Mono, MonoOrd, MAX_VARS};
use crate::nf::{Fe, Field};
use crate::rat::{crt, rational_reconstruct, Int, Rat};

// ---------------------------------------------------------------------------
// coefficient abstraction
// ---------------------------------------------------------------------------

pub trait CoefOps {
    type C: Clone + PartialEq;
    fn is_zero(&self, c: &Self::C) -> bool;
    fn one(&self) -> Self::C;
    fn neg(&self, c: &Self::C) -> Self::C;
    fn add(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn mul(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn inv(&self, c: &Self::C) -> Self::C;
    /// Optional cleanup after a reduction (content stripping over Q).
    fn strip(&self, terms: &mut Vec<(Mono, Self::C)>);
}

pub struct FeOps {
    pub field: Field,
}

impl CoefOps for FeOps {
    type C = Fe;
    fn is_zero(&self, c: &Fe) -> bool {
        c.is_zero()
    }
    fn one(&self) -> Fe {
        Fe::one(&self.field)
    }
    fn neg(&self, c: &Fe) -> Fe {
        -c
    }
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        a + b
    }
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        a * b
    }
    fn inv(&self, c: &Fe) -> Fe {
        c.inverse().unwrap()
    }
    fn strip(&self, terms: &mut Vec<(Mono, Fe)>) {
        if !self.field.is_q() || terms.is_empty() {
            return;
        }
        let mut rats: Vec<Rat> = terms.iter().map(|(_, c)| c.as_rat().unwrap()).collect();
        crate::rat::normalize_primitive(&mut rats);
        for (t, r) in terms.iter_mut().zip(rats) {
            t.1 = Fe::from_rat(&self.field, r);
        }
    }
}

pub struct FpOps {
    pub p: u64,
}

impl FpOps {
    fn addm(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn mulm(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
    fn powm(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mulm(r, b);
            }
            b = self.mulm(b, b);
            e >>= 1;
        }
        r
    }
}

impl CoefOps for FpOps {
    type C = u64;
    fn is_zero(&self, c: &u64) -> bool {
        *c == 0
    }
    fn one(&self) -> u64 {
        1
    }
    fn neg(&self, c: &u64) -> u64 {
        if *c == 0 {
            0
        } else {
            self.p - *c
        }
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.addm(*a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulm(*a, *b)
    }
    fn inv(&self, c: &u64) -> u64 {
        self.powm(*c, self.p - 2)
    }
    fn strip(&self, _terms: &mut Vec<(Mono, u64)>) {}
}

// ---------------------------------------------------------------------------
// order-sorted polynomials
// ---------------------------------------------------------------------------

/// Term list sorted descending w.r.t. the active order.
#[derive(Clone, Debug, PartialEq)]
pub struct GPoly<C> {
    pub terms: Vec<(Mono, C)>,
}

impl<C: Clone + PartialEq> GPoly<C> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn lead(&self) -> &(Mono, C) {
        &self.terms[0]
    }
    pub fn degree(&self) -> u16 {
        self.terms.iter().map(|(m, _)| m.deg).max().unwrap_or(0)
    }
}

fn sort_terms<C>(terms: &mut Vec<(Mono, C)>, ord: MonoOrd, nvars: usize) {
    terms.sort_by(|a, b| ord.cmp(&b.0, &a.0, nvars));
}

/// a + c * x^m * b for sorted term lists; result sorted.
fn add_scaled<O: CoefOps>(
    ops: &O,
    a: &[(Mono, O::C)],
    b: &[(Mono, O::C)],
    c: &O::C,
    m: &Mono,
    ord: MonoOrd,
    nvars: usize,
) -> Vec<(Mono, O::C)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    while i < a.len() || j < b.len() {
        if j == b.len() {
            out.push(a[i].clone());
            i += 1;
            continue;
        }
        let bm = b[j].0.mul(m);
        if i == a.len() {
            let v = ops.mul(&b[j].1, c);
            if !ops.is_zero(&v) {
                out.push((bm, v));
            }
            j += 1;
            continue;
        }
        match ord.cmp(&a[i].0, &bm, nvars) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                let v = ops.mul(&b[j].1, c);
                if !ops.is_zero(&v) {
                    out.push((bm, v));
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = ops.add(&a[i].1, &ops.mul(&b[j].1, c));
                if !ops.is_zero(&v) {
                    out.push((bm, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Full normal form of `f` w.r.t. the (not necessarily complete) basis.
fn reduce_full<O: CoefOps>(
    ops: &O,
    f: GPoly<O::C>,
    basis: &[GPoly<O::C>],
    ord: MonoOrd,
    nvars: usize,
) -> GPoly<O::C> {
    reduce_full_opt(ops, f, basis, ord, nvars, true)
}

/// Full reduction; `strip` allows content normalization (which rescales the
/// result and must be disabled when the exact value of the normal form
/// matters).
fn reduce_full_opt<O: CoefOps>(
    ops: &O,
    f: GPoly<O::C>,
    basis: &[GPoly<O::C>],
    ord: MonoOrd,
    nvars: usize,
    strip: bool,
) -> GPoly<O::C> {
    let mut out: Vec<(Mono, O::C)> = vec![];
    let mut work = f.terms;
    'outer: while let Some((m, c)) = work.first().cloned() {
        for g in basis {
            if g.is_zero() {
                continue;
            }
            let (gm, gc) = g.lead();
            if gm.divides(&m) {
                let q = m.div(gm);
                let factor = ops.neg(&ops.mul(&c, &ops.inv(gc)));
                work = add_scaled(ops, &work, &g.terms, &factor, &q, ord, nvars);
                continue 'outer;
            }
        }
        out.push((m, c));
        work.remove(0);
    }
    if strip {
        ops.strip(&mut out);
    }
    GPoly { terms: out }
}

fn spoly<O: CoefOps>(
    ops: &O,
    f: &GPoly<O::C>,
    g: &GPoly<O::C>,
    ord: MonoOrd,
    nvars: usize,
) -> GPoly<O::C> {
    let (fm, fc) = f.lead();
    let (gm, gc) = g.lead();
    let l = fm.lcm(gm);
    let mf = l.div(fm);
    let mg = l.div(gm);
    let a = add_scaled(
        ops,
        &[],
        &f.terms,
        &ops.inv(fc),
        &mf,
        ord,
        nvars,
    );
    let terms = add_scaled(ops, &a, &g.terms, &ops.neg(&ops.inv(gc)), &mg, ord, nvars);
    GPoly { terms }
}

// ---------------------------------------------------------------------------
// Buchberger with Gebauer-Moeller pruning and sugar selection
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u16,
}

fn buchberger_core<O: CoefOps>(
    ops: &O,
    gens: Vec<GPoly<O::C>>,
    ord: MonoOrd,
    nvars: usize,
    degree_cap: Option<u16>,
) -> Vec<GPoly<O::C>> {
    let mut basis: Vec<GPoly<O::C>> = vec![];
    let mut sugars: Vec<u16> = vec![];
    let mut pairs: Vec<Pair> = vec![];

    let add_poly = |basis: &mut Vec<GPoly<O::C>>,
                        sugars: &mut Vec<u16>,
                        pairs: &mut Vec<Pair>,
                        h: GPoly<O::C>,
                        sugar: u16| {
        let t = basis.len();
        let lt = h.lead().0;
        // drop old pairs made redundant by the new leading term
        pairs.retain(|p| {
            !(lt.divides(&p.lcm)
                && basis[p.i].lead().0.lcm(&lt) != p.lcm
                && basis[p.j].lead().0.lcm(&lt) != p.lcm)
        });
        // candidate new pairs, keeping only minimal lcms
        let cand: Vec<Pair> = (0..t)
            .filter(|&i| !basis[i].is_zero())
            .map(|i| {
                let l = basis[i].lead().0.lcm(&lt);
                let s = (sugars[i] + (l.deg - basis[i].lead().0.deg))
                    .max(sugar + (l.deg - lt.deg));
                Pair {
                    i,
                    j: t,
                    lcm: l,
                    sugar: s,
                }
            })
            .collect();
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            if !keep[a] {
                continue;
            }
            for b in 0..cand.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if cand[b].lcm.divides(&cand[a].lcm)
                    && (cand[b].lcm != cand[a].lcm || b < a)
                {
                    keep[a] = false;
                    break;
                }
            }
        }
        for (k, p) in cand.into_iter().enumerate() {
            if keep[k] && !basis[p.i].lead().0.coprime(&lt) {
                pairs.push(p);
            }
        }
        basis.push(h);
        sugars.push(sugar);
    };

    for g in gens {
        if g.is_zero() {
            continue;
        }
        let s = g.degree();
        let h = reduce_full(ops, g, &basis, ord, nvars);
        if !h.is_zero() {
            let s = s.max(h.degree());
            add_poly(&mut basis, &mut sugars, &mut pairs, h, s);
        }
    }

    while !pairs.is_empty() {
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar
                    .cmp(&b.sugar)
                    .then_with(|| ord.cmp(&a.lcm, &b.lcm, nvars))
            })
            .map(|(k, _)| k)
            .unwrap();
        let p = pairs.swap_remove(best);
        if let Some(cap) = degree_cap {
            if p.lcm.deg > cap {
                continue;
            }
        }
        let s = spoly(ops, &basis[p.i], &basis[p.j], ord, nvars);
        let h = reduce_full(ops, s, &basis, ord, nvars);
        if !h.is_zero() {
            add_poly(&mut basis, &mut sugars, &mut pairs, h, p.sugar);
        }
    }

    autoreduce(ops, basis, ord, nvars)
}

fn autoreduce<O: CoefOps>(
    ops: &O,
    mut basis: Vec<GPoly<O::C>>,
    ord: MonoOrd,
    nvars: usize,
) -> Vec<GPoly<O::C>> {
    // drop polynomials whose lead is divisible by another lead
    let mut keep = vec![true; basis.len()];
    for a in 0..basis.len() {
        for b in 0..basis.len() {
            if a == b || !keep[b] {
                continue;
            }
            let (la, _) = basis[a].lead();
            let (lb, _) = basis[b].lead();
            if lb.divides(la) && (la != lb || b < a) {
                keep[a] = false;
                break;
            }
        }
    }
    let mut kept: Vec<GPoly<O::C>> = basis
        .drain(..)
        .zip(keep)
        .filter_map(|(g, k)| if k { Some(g) } else { None })
        .collect();
    // fully reduce each element against the others
    for i in 0..kept.len() {
        let g = kept[i].clone();
        let others: Vec<GPoly<O::C>> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        kept[i] = reduce_full(ops, g, &others, ord, nvars);
    }
    kept.retain(|g| !g.is_zero());
    // monic leads for canonical form (over Q, strip keeps integers instead)
    for g in &mut kept {
        let inv = ops.inv(&g.lead().1);
        if !matches!(ops_is_identity(ops, &inv), true) {
            for t in &mut g.terms {
                t.1 = ops.mul(&t.1, &inv);
            }
        }
        ops.strip(&mut g.terms);
    }
    kept.sort_by(|a, b| ord.cmp(&b.lead().0, &a.lead().0, nvars));
    kept
}

fn ops_is_identity<O: CoefOps>(ops: &O, c: &O::C) -> bool {
    *c == ops.one()
}

// ---------------------------------------------------------------------------
// public interface over a number field
// ---------------------------------------------------------------------------

fn to_gpoly(p: &MPoly, ord: MonoOrd) -> GPoly<Fe> {
    let mut terms = p.terms.clone();
    sort_terms(&mut terms, ord, p.nvars);
    GPoly { terms }
}

fn from_gpoly(field: &Field, nvars: usize, g: &GPoly<Fe>) -> MPoly {
    MPoly::from_terms(field, nvars, g.terms.clone())
}

/// Reduced Groebner basis via exact arithmetic.
pub fn groebner_basis_exact(gens: &[MPoly], ord: MonoOrd, cap: Option<u16>) -> Vec<MPoly> {
    let live: Vec<&MPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    let Some(first) = live.first() else {
        return vec![];
    };
    let field = first.field.clone();
    let nvars = first.nvars;
    let ops = FeOps {
        field: field.clone(),
    };
    let gp: Vec<GPoly<Fe>> = live.iter().map(|g| to_gpoly(g, ord)).collect();
    let gb = buchberger_core(&ops, gp, ord, nvars, cap);
    gb.iter().map(|g| from_gpoly(&field, nvars, g)).collect()
}

/// Reduced Groebner basis; uses multimodular reconstruction for homogeneous
/// ideals over Q and falls back to exact arithmetic.
pub fn groebner_basis(gens: &[MPoly], ord: MonoOrd) -> Vec<MPoly> {
    let live: Vec<&MPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    let Some(first) = live.first() else {
        return vec![];
    };
    if first.field.is_q()
        && live.iter().all(|g| g.is_homogeneous())
        && live.iter().map(|g| g.terms.len()).sum::<usize>() > 40
    {
        if let Some(gb) = groebner_basis_modular(&live, ord) {
            return gb;
        }
    }
    groebner_basis_exact(gens, ord, None)
}

/// Full normal form of `f` with respect to a Groebner basis.
pub fn normal_form(f: &MPoly, gb: &[MPoly], ord: MonoOrd) -> MPoly {
    if gb.is_empty() {
        return f.clone();
    }
    let field = f.field.clone();
    let nvars = f.nvars;
    let ops = FeOps {
        field: field.clone(),
    };
    let basis: Vec<GPoly<Fe>> = gb.iter().map(|g| to_gpoly(g, ord)).collect();
    let r = reduce_full_opt(&ops, to_gpoly(f, ord), &basis, ord, nvars, false);
    from_gpoly(&field, nvars, &r)
}

pub fn in_ideal(f: &MPoly, gb: &[MPoly], ord: MonoOrd) -> bool {
    normal_form(f, gb, ord).is_zero()
}

pub fn lt_monos(gb: &[MPoly], ord: MonoOrd) -> Vec<Mono> {
    gb.iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            g.terms
                .iter()
                .max_by(|a, b| ord.cmp(&a.0, &b.0, g.nvars))
                .unwrap()
                .0
        })
        .collect()
}

// ---------------------------------------------------------------------------
// multimodular path
// ---------------------------------------------------------------------------

pub const GB_PRIMES: [u64; 24] = [
    2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543, 2147483497,
    2147483489, 2147483477, 2147483423, 2147483399, 2147483353, 2147483323, 2147483269,
    2147483249, 2147483237, 2147483179, 2147483171, 2147483137, 2147483123, 2147483077,
    2147483069, 2147483059, 2147483053,
];

#[derive(Clone, Debug, PartialEq)]
pub struct FpPoly {
    pub terms: Vec<(Mono, u64)>,
}

/// Reduces rational coefficients mod p; None when a denominator vanishes.
pub fn mpoly_mod_p(f: &MPoly, p: u64, ord: MonoOrd) -> Option<FpPoly> {
    let ops = FpOps { p };
    let mut terms = vec![];
    for (m, c) in &f.terms {
        let r = c.as_rat().expect("modular reduction needs Q coefficients");
        let pi = Int::from(p);
        let den = r.denom().mod_floor_u64(p);
        if den == 0 {
            return None;
        }
        let mut num = (r.numer() % &pi).to_i64_checked();
        if num < 0 {
            num += p as i64;
        }
        let v = ops.mulm(num as u64, ops.inv(&den));
        if v != 0 {
            terms.push((*m, v));
        }
        let _ = pi;
    }
    sort_terms(&mut terms, ord, f.nvars);
    Some(FpPoly { terms })
}

trait IntModHelpers {
    fn mod_floor_u64(&self, p: u64) -> u64;
    fn to_i64_checked(&self) -> i64;
}

impl IntModHelpers for Int {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num_integer::Integer;
        let r = self.mod_floor(&Int::from(p));
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }
    fn to_i64_checked(&self) -> i64 {
        
        // value is already reduced into (-p, p)
        let neg = self.is_negative();
        let (_, digits) = self.abs().to_u64_digits();
        let v = digits.first().copied().unwrap_or(0) as i64;
        if neg {
            -v
        } else {
            v
        }
    }
}

/// Reduced Groebner basis mod p; None for a bad prime (vanishing denominator
/// or dropped leading structure is caught by the caller via signatures).
pub fn gb_mod_p(gens: &[MPoly], p: u64, ord: MonoOrd) -> Option<Vec<FpPoly>> {
    let nvars = gens.iter().find(|g| !g.is_zero())?.nvars;
    let ops = FpOps { p };
    let mut gp = vec![];
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let f = mpoly_mod_p(g, p, ord)?;
        gp.push(GPoly { terms: f.terms });
    }
    let gb = buchberger_core(&ops, gp, ord, nvars, None);
    Some(gb.into_iter().map(|g| FpPoly { terms: g.terms }).collect())
}

pub fn fp_normal_form(f: &FpPoly, gb: &[FpPoly], p: u64, ord: MonoOrd, nvars: usize) -> FpPoly {
    let ops = FpOps { p };
    let basis: Vec<GPoly<u64>> = gb
        .iter()
        .map(|g| GPoly {
            terms: g.terms.clone(),
        })
        .collect();
    let r = reduce_full(
        &ops,
        GPoly {
            terms: f.terms.clone(),
        },
        &basis,
        ord,
        nvars,
    );
    FpPoly { terms: r.terms }
}

fn signature(gb: &[FpPoly]) -> Vec<Mono> {
    gb.iter().map(|g| g.terms[0].0).collect()
}

fn groebner_basis_modular(gens: &[&MPoly], ord: MonoOrd) -> Option<Vec<MPoly>> {
    let field = gens[0].field.clone();
    let nvars = gens[0].nvars;
    let owned: Vec<MPoly> = gens.iter().map(|g| (*g).clone()).collect();

    let mut sig: Option<Vec<Mono>> = None;
    // accumulated CRT images per basis element per term
    let mut acc: Vec<Vec<Int>> = vec![];
    let mut modulus = Int::one();
    let mut last_candidate: Option<Vec<Vec<Rat>>> = None;

    for &p in GB_PRIMES.iter() {
        let Some(gbp) = gb_mod_p(&owned, p, ord) else {
            continue;
        };
        let s = signature(&gbp);
        match &sig {
            None => {
                sig = Some(s.clone());
                acc = gbp
                    .iter()
                    .map(|g| g.terms.iter().map(|(_, c)| Int::from(*c)).collect())
                    .collect();
                modulus = Int::from(p);
                continue;
            }
            Some(s0) if *s0 != s => {
                // disagreeing prime: restart from scratch if the new basis is
                // "smaller" (previous prime likely unlucky), else skip prime
                let smaller = s.len() < s0.len()
                    || (s.len() == s0.len()
                        && s.iter().zip(s0).any(|(a, b)| {
                            ord.cmp(a, b, nvars) == std::cmp::Ordering::Less
                        }));
                if smaller {
                    sig = Some(s.clone());
                    acc = gbp
                        .iter()
                        .map(|g| g.terms.iter().map(|(_, c)| Int::from(*c)).collect())
                        .collect();
                    modulus = Int::from(p);
                    last_candidate = None;
                }
                continue;
            }
            _ => {}
        }
        // term supports must agree for coefficient-wise CRT
        let supports_match = gbp
            .iter()
            .zip(&acc)
            .all(|(g, a)| g.terms.len() == a.len());
        if !supports_match {
            continue;
        }
        let pi = Int::from(p);
        for (g, a) in gbp.iter().zip(acc.iter_mut()) {
            for ((_, c), x) in g.terms.iter().zip(a.iter_mut()) {
                *x = crt(x, &modulus, &Int::from(*c), &pi);
            }
        }
        modulus *= &pi;

        // attempt rational reconstruction
        let mut recon: Vec<Vec<Rat>> = vec![];
        let mut ok = true;
        'outer: for a in &acc {
            let mut row = vec![];
            for x in a {
                match rational_reconstruct(x, &modulus) {
                    Some(r) => row.push(r),
                    None => {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            recon.push(row);
        }
        if !ok {
            continue;
        }
        if last_candidate.as_ref() == Some(&recon) {
            // stable over two prime rounds: certify
            let cand = assemble_candidate(&field, nvars, sig.as_ref().unwrap(), &gbp, &recon, ord);
            if certify_basis(&owned, &cand, ord, nvars) {
                return Some(cand);
            }
            last_candidate = None;
        } else {
            last_candidate = Some(recon);
        }
    }
    None
}

fn assemble_candidate(
    field: &Field,
    nvars: usize,
    _sig: &[Mono],
    shape: &[FpPoly],
    coefs: &[Vec<Rat>],
    _ord: MonoOrd,
) -> Vec<MPoly> {
    shape
        .iter()
        .zip(coefs)
        .map(|(g, row)| {
            let terms: Vec<(Mono, Fe)> = g
                .terms
                .iter()
                .zip(row)
                .map(|((m, _), r)| (*m, Fe::from_rat(field, r.clone())))
                .collect();
            MPoly::from_terms(field, nvars, terms).normalized()
        })
        .collect()
}

/// Exact certification: every S-polynomial of the candidate reduces to zero
/// and every original generator reduces to zero.
fn certify_basis(gens: &[MPoly], cand: &[MPoly], ord: MonoOrd, nvars: usize) -> bool {
    let ops = FeOps {
        field: gens[0].field.clone(),
    };
    let basis: Vec<GPoly<Fe>> = cand.iter().map(|g| to_gpoly(g, ord)).collect();
    for g in gens {
        let r = reduce_full(&ops, to_gpoly(g, ord), &basis, ord, nvars);
        if !r.is_zero() {
            return false;
        }
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let (mi, _) = basis[i].lead();
            let (mj, _) = basis[j].lead();
            if mi.coprime(mj) {
                continue;
            }
            let s = spoly(&ops, &basis[i], &basis[j], ord, nvars);
            let r = reduce_full(&ops, s, &basis, ord, nvars);
            if !r.is_zero() {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Hilbert series of monomial quotients
// ---------------------------------------------------------------------------

fn npoly_add_shift(a: &[i64], b: &[i64], shift: usize) -> Vec<i64> {
    let n = a.len().max(b.len() + shift);
    let mut out = vec![0i64; n];
    out[..a.len()].copy_from_slice(a);
    for (i, &x) in b.iter().enumerate() {
        out[i + shift] += x;
    }
    while out.last() == Some(&0) && out.len() > 1 {
        out.pop();
    }
    out
}

fn npoly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn minimalize(mut gens: Vec<Mono>) -> Vec<Mono> {
    gens.sort_by_key(|m| m.deg);
    gens.dedup();
    let mut out: Vec<Mono> = vec![];
    for m in gens {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Numerator N(t) of the Hilbert series N(t)/(1-t)^nvars of R/I for the
/// monomial ideal generated by `gens`.
pub fn hilbert_numerator(gens: &[Mono], nvars: usize) -> Vec<i64> {
    let gens = minimalize(gens.to_vec());
    hilbert_num_rec(gens, nvars)
}

fn hilbert_num_rec(gens: Vec<Mono>, nvars: usize) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.deg == 0) {
        return vec![0];
    }
    // pure powers: product formula
    let pure = gens
        .iter()
        .all(|m| m.e[..nvars].iter().filter(|&&e| e > 0).count() == 1);
    if pure {
        let mut num = vec![1i64];
        for m in &gens {
            let mut f = vec![0i64; m.deg as usize + 1];
            f[0] = 1;
            f[m.deg as usize] = -1;
            num = npoly_mul(&num, &f);
        }
        return num;
    }
    // pivot on the most frequent variable among mixed generators
    let mut count = [0usize; MAX_VARS];
    for m in &gens {
        if m.e[..nvars].iter().filter(|&&e| e > 0).count() > 1 {
            for (v, &e) in m.e[..nvars].iter().enumerate() {
                if e > 0 {
                    count[v] += 1;
                }
            }
        }
    }
    let pivot = (0..nvars).max_by_key(|&v| count[v]).unwrap();
    // I + (x): keep gens without pivot, add the pivot variable
    let mut plus: Vec<Mono> = gens.iter().filter(|m| m.e[pivot] == 0).copied().collect();
    plus.push(Mono::var(pivot));
    // I : x: reduce pivot exponent by one
    let colon: Vec<Mono> = gens
        .iter()
        .map(|m| {
            let mut m2 = *m;
            if m2.e[pivot] > 0 {
                m2.e[pivot] -= 1;
                m2.deg -= 1;
            }
            m2
        })
        .collect();
    let a = hilbert_num_rec(minimalize(plus), nvars);
    let b = hilbert_num_rec(minimalize(colon), nvars);
    npoly_add_shift(&a, &b, 1)
}

/// Projective dimension and degree read off the Hilbert series.
#[derive(Clone, Debug, PartialEq)]
pub struct HilbertData {
    /// Dimension of the projective scheme; -1 for empty, -2 for the zero ring.
    pub proj_dim: i64,
    pub degree: i64,
}

pub fn hilbert_data_from_numerator(num: &[i64], nvars: usize) -> HilbertData {
    let mut n: Vec<i64> = num.to_vec();
    if n.iter().all(|&c| c == 0) {
        return HilbertData {
            proj_dim: -2,
            degree: 0,
        };
    }
    let mut s = 0usize;
    while n.iter().sum::<i64>() == 0 {
        // divide by (1 - t): partial sums
        let mut q = vec![0i64; n.len().saturating_sub(1).max(1)];
        let mut run = 0i64;
        for i in 0..q.len() {
            run += n[i];
            q[i] = run;
        }
        n = q;
        s += 1;
    }
    HilbertData {
        proj_dim: nvars as i64 - s as i64 - 1,
        degree: n.iter().sum(),
    }
}

/// Hilbert data of proj(R/I) for a Groebner basis w.r.t. a degree-compatible
/// order of a homogeneous ideal.
pub fn hilbert_data(gb: &[MPoly], ord: MonoOrd) -> HilbertData {
    let Some(first) = gb.iter().find(|g| !g.is_zero()) else {
        panic!("hilbert_data of the zero ideal; use the ambient data directly");
    };
    let nvars = first.nvars;
    let num = hilbert_numerator(&lt_monos(gb, ord), nvars);
    hilbert_data_from_numerator(&num, nvars)
}

/// All monomials of total degree d in nvars variables.
pub fn monomials_of_degree(nvars: usize, d: u16) -> Vec<Mono> {
    let mut out = vec![];
    let mut cur = Mono::one();
    fn rec(out: &mut Vec<Mono>, cur: &mut Mono, var: usize, left: u16, nvars: usize) {
        if var == nvars - 1 {
            cur.e[var] = left;
            cur.deg = {
                let mut d = 0;
                for i in 0..nvars {
                    d += cur.e[i];
                }
                d
            };
            out.push(*cur);
            cur.e[var] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur.e[var] = e;
            rec(out, cur, var + 1, left - e, nvars);
        }
        cur.e[var] = 0;
    }
    rec(&mut out, &mut cur, 0, d, nvars);
    out
}

/// Standard monomials of degree d (not divisible by any leading term).
pub fn std_monomials_of_degree(gb: &[MPoly], ord: MonoOrd, nvars: usize, d: u16) -> Vec<Mono> {
    let lts = lt_monos(gb, ord);
    monomials_of_degree(nvars, d)
        .into_iter()
        .filter(|m| !lts.iter().any(|l| l.divides(m)))
        .collect()
}

/// Value of the Hilbert function of R/I at degree d.
pub fn hf_value(gb: &[MPoly], ord: MonoOrd, nvars: usize, d: u16) -> usize {
    std_monomials_of_degree(gb, ord, nvars, d).len()
}

/// Monomial basis of the quotient algebra of a zero-dimensional affine ideal;
/// None when the quotient is infinite-dimensional.
pub fn quotient_basis(gb: &[MPoly], ord: MonoOrd) -> Option<Vec<Mono>> {
    let Some(first) = gb.iter().find(|g| !g.is_zero()) else {
        return None;
    };
    let nvars = first.nvars;
    let lts = lt_monos(gb, ord);
    let mut caps = vec![None::<u16>; nvars];
    for m in &lts {
        let nz: Vec<usize> = (0..nvars).filter(|&v| m.e[v] > 0).collect();
        if m.deg == 0 {
            return Some(vec![]);
        }
        if nz.len() == 1 {
            let v = nz[0];
            caps[v] = Some(caps[v].map_or(m.e[v], |c: u16| c.min(m.e[v])));
        }
    }
    if caps.iter().any(|c| c.is_none()) {
        return None;
    }
    let caps: Vec<u16> = caps.into_iter().map(|c| c.unwrap()).collect();
    let mut out = vec![];
    let mut cur = Mono::one();
    fn rec(
        out: &mut Vec<Mono>,
        cur: &mut Mono,
        var: usize,
        nvars: usize,
        caps: &[u16],
        lts: &[Mono],
    ) {
        if var == nvars {
            let mut d = 0;
            for i in 0..nvars {
                d += cur.e[i];
            }
            cur.deg = d;
            if !lts.iter().any(|l| l.divides(cur)) {
                out.push(*cur);
            }
            return;
        }
        for e in 0..caps[var] {
            cur.e[var] = e;
            rec(out, cur, var + 1, nvars, caps, lts);
        }
        cur.e[var] = 0;
    }
    rec(&mut out, &mut cur, 0, nvars, &caps, &lts);
    out.sort_by(|a, b| ord.cmp(a, b, nvars));
    Some(out)
}

// ---------------------------------------------------------------------------
// variable bookkeeping helpers
// ---------------------------------------------------------------------------

/// Inserts a fresh variable slot at position j (exponent zero everywhere).
pub fn insert_var_slot(p: &MPoly, j: usize) -> MPoly {
    assert!(p.nvars < MAX_VARS);
    let terms = p
        .terms
        .iter()
        .map(|(m, c)| {
            let mut e = [0u16; MAX_VARS];
            for v in 0..p.nvars {
                let tgt = if v < j { v } else { v + 1 };
                e[tgt] = m.e[v];
            }
            (Mono { e, deg: m.deg }, c.clone())
        })
        .collect();
    MPoly::from_terms(&p.field, p.nvars + 1, terms)
}

/// Sets variable j to one and removes its slot.
pub fn set_var_one(p: &MPoly, j: usize) -> MPoly {
    let terms = p
        .terms
        .iter()
        .map(|(m, c)| {
            let mut e = [0u16; MAX_VARS];
            for v in 0..p.nvars {
                if v == j {
                    continue;
                }
                let tgt = if v < j { v } else { v - 1 };
                e[tgt] = m.e[v];
            }
            (
                Mono {
                    e,
                    deg: m.deg - m.e[j],
                },
                c.clone(),
            )
        })
        .collect();
    MPoly::from_terms(&p.field, p.nvars - 1, terms)
}

/// Homogenizes with a fresh variable appended as the last slot.
pub fn homogenize(p: &MPoly) -> MPoly {
    let d = p.total_degree().unwrap_or(0);
    let h = p.nvars;
    let q = insert_var_slot(p, h);
    let terms = q
        .terms
        .iter()
        .map(|(m, c)| {
            let mut m2 = *m;
            m2.e[h] = d - m.deg;
            m2.deg = d;
            (m2, c.clone())
        })
        .collect();
    MPoly::from_terms(&q.field, q.nvars, terms)
}

/// Reorders variables: new variable i is old variable perm[i].
pub fn permute_vars(p: &MPoly, perm: &[usize]) -> MPoly {
    assert_eq!(perm.len(), p.nvars);
    let terms = p
        .terms
        .iter()
        .map(|(m, c)| {
            let mut e = [0u16; MAX_VARS];
            for (i, &src) in perm.iter().enumerate() {
                e[i] = m.e[src];
            }
            (Mono { e, deg: m.deg }, c.clone())
        })
        .collect();
    MPoly::from_terms(&p.field, p.nvars, terms)
}

/// Splits into homogeneous components (ascending degree).
pub fn homogeneous_components(p: &MPoly) -> Vec<MPoly> {
    let mut by_deg: std::collections::BTreeMap<u16, Vec<(Mono, Fe)>> = Default::default();
    for (m, c) in &p.terms {
        by_deg.entry(m.deg).or_default().push((*m, c.clone()));
    }
    by_deg
        .into_values()
        .map(|terms| MPoly::from_terms(&p.field, p.nvars, terms))
        .collect()
}

// ---------------------------------------------------------------------------
// ideal operations
// ---------------------------------------------------------------------------

fn split_if_homogeneous(gens: Vec<MPoly>, want: bool) -> Vec<MPoly> {
    if !want {
        return gens;
    }
    let mut out = vec![];
    for g in gens {
        out.extend(homogeneous_components(&g));
    }
    out
}

/// Generators of I ∩ J via a tag variable at the front.
pub fn ideal_intersection(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let first = a
        .iter()
        .chain(b)
        .find(|g| !g.is_zero())
        .expect("intersection of zero ideals");
    let field = first.field.clone();
    let nvars = first.nvars;
    let homog = a.iter().chain(b).all(|g| g.is_homogeneous());
    let u = MPoly::var(&field, nvars + 1, 0);
    let one = MPoly::one(&field, nvars + 1);
    let mut gens = vec![];
    for g in a {
        gens.push(insert_var_slot(g, 0).mul(&u));
    }
    let omu = one.sub(&u);
    for g in b {
        gens.push(insert_var_slot(g, 0).mul(&omu));
    }
    let gb = groebner_basis_exact(&gens, MonoOrd::Elim(1), None);
    let out: Vec<MPoly> = gb
        .iter()
        .filter(|g| g.degree_in(0) == 0)
        .map(|g| set_var_one(g, 0))
        .collect();
    split_if_homogeneous(out, homog)
}

/// Generators of the colon ideal (I : f).
pub fn ideal_colon(i: &[MPoly], f: &MPoly) -> Vec<MPoly> {
    assert!(!f.is_zero());
    let inter = ideal_intersection(i, std::slice::from_ref(f));
    inter.iter().map(|g| g.div_exact(f)).collect()
}

/// Saturation (I : f^∞) via a Rabinowitsch variable.
pub fn saturate(i: &[MPoly], f: &MPoly) -> Vec<MPoly> {
    let first = i.iter().find(|g| !g.is_zero()).expect("saturating zero ideal");
    let field = first.field.clone();
    let nvars = first.nvars;
    let homog = i.iter().all(|g| g.is_homogeneous());
    let u = MPoly::var(&field, nvars + 1, 0);
    let one = MPoly::one(&field, nvars + 1);
    let mut gens: Vec<MPoly> = i.iter().map(|g| insert_var_slot(g, 0)).collect();
    gens.push(insert_var_slot(f, 0).mul(&u).sub(&one));
    let gb = groebner_basis_exact(&gens, MonoOrd::Elim(1), None);
    let out: Vec<MPoly> = gb
        .iter()
        .filter(|g| g.degree_in(0) == 0)
        .map(|g| set_var_one(g, 0))
        .collect();
    split_if_homogeneous(out, homog)
}

/// Saturation of a homogeneous ideal by the irrelevant maximal ideal.
pub fn saturate_irrelevant(i: &[MPoly]) -> Vec<MPoly> {
    let first = i.iter().find(|g| !g.is_zero()).expect("saturating zero ideal");
    let nvars = first.nvars;
    let field = first.field.clone();
    let mut acc: Option<Vec<MPoly>> = None;
    for v in 0..nvars {
        let x = MPoly::var(&field, nvars, v);
        let s = saturate(i, &x);
        acc = Some(match acc {
            None => s,
            Some(a) => ideal_intersection(&a, &s),
        });
    }
    groebner_basis_exact(&acc.unwrap(), MonoOrd::GrevLex, None)
}

/// Eliminates the first k variables: grevlex generators of I ∩ k[x_k..].
/// Output polynomials keep the full variable count with zero exponents in the
/// eliminated block.
pub fn eliminate(gens: &[MPoly], k: usize) -> Vec<MPoly> {
    let gb = groebner_basis_exact(gens, MonoOrd::Elim(k), None);
    gb.into_iter()
        .filter(|g| (0..k).all(|v| g.degree_in(v) == 0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::NumberField;
    use crate::rat::rat_int;

    fn q() -> Field {
        NumberField::rationals()
    }

    fn v(n: usize, i: usize) -> MPoly {
        MPoly::var(&q(), n, i)
    }

    fn c(n: usize, k: i64) -> MPoly {
        MPoly::constant(&q(), n, Fe::from_rat(&q(), rat_int(k)))
    }

    #[test]
    fn gb_of_simple_ideal() {
        // (x^2 + y^2 - 1, x - y): GB contains 2y^2 - 1 up to scaling
        let f1 = v(2, 0).pow(2).add(&v(2, 1).pow(2)).sub(&c(2, 1));
        let f2 = v(2, 0).sub(&v(2, 1));
        let gb = groebner_basis_exact(&[f1.clone(), f2.clone()], MonoOrd::GrevLex, None);
        assert!(in_ideal(&f1, &gb, MonoOrd::GrevLex));
        assert!(in_ideal(&f2, &gb, MonoOrd::GrevLex));
        let probe = v(2, 1).pow(2).scale(&Fe::from_rat(&q(), rat_int(2))).sub(&c(2, 1));
        assert!(in_ideal(&probe, &gb, MonoOrd::GrevLex));
        assert!(!in_ideal(&v(2, 0), &gb, MonoOrd::GrevLex));
    }

    #[test]
    fn eliminate_parametrization() {
        // x = t^2, y = t^3 -> y^2 - x^3 ; variables (t, x, y)
        let f1 = v(3, 1).sub(&v(3, 0).pow(2));
        let f2 = v(3, 2).sub(&v(3, 0).pow(3));
        let el = eliminate(&[f1, f2], 1);
        let target = v(3, 2).pow(2).sub(&v(3, 1).pow(3));
        assert!(in_ideal(&target, &el, MonoOrd::GrevLex));
        for g in &el {
            assert_eq!(g.degree_in(0), 0);
        }
    }

    #[test]
    fn intersection_of_principal_ideals() {
        let x = v(2, 0);
        let y = v(2, 1);
        let inter = ideal_intersection(&[x.clone()], &[y.clone()]);
        let gb = groebner_basis_exact(&inter, MonoOrd::GrevLex, None);
        assert!(in_ideal(&x.mul(&y), &gb, MonoOrd::GrevLex));
        assert!(!in_ideal(&x, &gb, MonoOrd::GrevLex));
        assert!(!in_ideal(&y, &gb, MonoOrd::GrevLex));
    }

    #[test]
    fn colon_and_saturation() {
        let x = v(2, 0);
        let y = v(2, 1);
        let i = vec![x.pow(2), x.mul(&y)];
        let col = ideal_colon(&i, &x);
        let gbc = groebner_basis_exact(&col, MonoOrd::GrevLex, None);
        assert!(in_ideal(&x, &gbc, MonoOrd::GrevLex));
        assert!(in_ideal(&y, &gbc, MonoOrd::GrevLex));
        let sat = saturate(&i, &y);
        let gbs = groebner_basis_exact(&sat, MonoOrd::GrevLex, None);
        assert!(in_ideal(&x, &gbs, MonoOrd::GrevLex));
        assert!(!in_ideal(&y, &gbs, MonoOrd::GrevLex));
        let sat2 = saturate_irrelevant(&i);
        assert!(in_ideal(&x, &sat2, MonoOrd::GrevLex));
        assert!(!in_ideal(&y, &sat2, MonoOrd::GrevLex));
    }

    #[test]
    fn hilbert_twisted_cubic() {
        // (xz - y^2, yw - z^2, xw - yz) in P^3: dimension 1, degree 3
        let x = v(4, 0);
        let y = v(4, 1);
        let z = v(4, 2);
        let w = v(4, 3);
        let gens = vec![
            x.mul(&z).sub(&y.pow(2)),
            y.mul(&w).sub(&z.pow(2)),
            x.mul(&w).sub(&y.mul(&z)),
        ];
        let gb = groebner_basis_exact(&gens, MonoOrd::GrevLex, None);
        let hd = hilbert_data(&gb, MonoOrd::GrevLex);
        assert_eq!(hd.proj_dim, 1);
        assert_eq!(hd.degree, 3);
    }

    #[test]
    fn hilbert_function_of_a_cubic_surface() {
        // one cubic form in P^3: h^0(O(5)) on the coordinate ring = 46
        let f = v(4, 0).pow(3).add(&v(4, 1).pow(3)).add(&v(4, 2).pow(3)).add(&v(4, 3).pow(3));
        let gb = groebner_basis_exact(&[f], MonoOrd::GrevLex, None);
        assert_eq!(hf_value(&gb, MonoOrd::GrevLex, 4, 5), 46);
        assert_eq!(hf_value(&gb, MonoOrd::GrevLex, 4, 2), 10);
    }

    #[test]
    fn zero_dimensional_quotient_basis() {
        let f1 = v(2, 0).pow(2).sub(&c(2, 1));
        let f2 = v(2, 1).pow(3).sub(&c(2, 2));
        let gb = groebner_basis_exact(&[f1, f2], MonoOrd::GrevLex, None);
        let basis = quotient_basis(&gb, MonoOrd::GrevLex).unwrap();
        assert_eq!(basis.len(), 6);
        // not zero-dimensional: single curve
        let gb2 = groebner_basis_exact(
            &[v(2, 0).mul(&v(2, 1)).sub(&c(2, 1))],
            MonoOrd::GrevLex,
            None,
        );
        assert!(quotient_basis(&gb2, MonoOrd::GrevLex).is_none());
    }

    #[test]
    fn homogenize_and_permute() {
        let f = v(2, 0).pow(2).add(&v(2, 1)).add(&c(2, 3));
        let h = homogenize(&f);
        assert!(h.is_homogeneous());
        assert_eq!(set_var_one(&h, 2), f);
        let g = permute_vars(&v(3, 0), &[2, 1, 0]);
        assert_eq!(g, v(3, 2));
    }

    #[test]
    fn modular_matches_exact() {
        // homogeneous ideal with moderately large coefficients
        let x = v(3, 0);
        let y = v(3, 1);
        let z = v(3, 2);
        let f1 = x
            .pow(2)
            .scale(&Fe::from_rat(&q(), rat_int(1234567)))
            .add(&y.mul(&z).scale(&Fe::from_rat(&q(), rat_int(-7654321))))
            .add(&z.pow(2));
        let f2 = x
            .mul(&y)
            .add(&y.pow(2).scale(&Fe::from_rat(&q(), rat_int(999983))))
            .sub(&z.pow(2).scale(&Fe::from_rat(&q(), rat_int(424242))));
        let f3 = x.pow(3).add(&y.pow(3)).add(&z.pow(3));
        let gens = vec![f1, f2, f3];
        let exact = groebner_basis_exact(&gens, MonoOrd::GrevLex, None);
        let modular = groebner_basis_modular(&gens.iter().collect::<Vec<_>>(), MonoOrd::GrevLex)
            .expect("modular reconstruction");
        assert_eq!(exact.len(), modular.len());
        for (a, b) in exact.iter().zip(&modular) {
            assert_eq!(a.normalized(), b.normalized());
        }
    }

    #[test]
    fn normal_form_is_canonical() {
        let f1 = v(2, 0).pow(2).sub(&v(2, 1));
        let gb = groebner_basis_exact(&[f1], MonoOrd::GrevLex, None);
        let f = v(2, 0).pow(4);
        let nf = normal_form(&f, &gb, MonoOrd::GrevLex);
        assert_eq!(nf, v(2, 1).pow(2));
    }
}
