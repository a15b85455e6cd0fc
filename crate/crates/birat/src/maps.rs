//! Birational maps stored as unexpanded composition chains: evaluation,
//! symbolic expansion, base schemes, interpolation of reduced equations, and
//! equality testing on the surface.

use crate::error::{Error, Result};
use crate::groebner::{monomials_of_degree, GB_PRIMES};
use crate::linalg::Echelon;
use crate::mpoly::{MPoly, Mono};
use crate::nf::{Fe, Field};
use crate::rat::{crt, normalize_primitive, rational_reconstruct, Int, Rat};
use num_integer::Integer;
use num_traits::Zero;
use std::cell::OnceCell;
use crate::scheme::{
    decompose_zero_dim, normalize_coords, sample_points, ClosedPoint, Seeded, Surface,
    ZeroDimScheme,
};

/// A birational selfmap of projective space restricted to a surface, stored
/// as a chain of coordinate-form stages applied left to right: evaluation
/// applies stage 0 first.
#[derive(Clone, Debug)]
pub struct BirationalMap {
    pub ambient_dim: usize,
    pub domain_surface: Surface,
    pub stages: Vec<Vec<MPoly>>,
    /// degree of the reduced defining forms on X, set only by interpolation
    pub declared_degree: Option<u16>,
    base_cache: OnceCell<ZeroDimScheme>,
    points_cache: OnceCell<Vec<ClosedPoint>>,
}

impl BirationalMap {
    pub(crate) fn new_unchecked(
        ambient_dim: usize,
        domain_surface: Surface,
        stages: Vec<Vec<MPoly>>,
        declared_degree: Option<u16>,
    ) -> BirationalMap {
        BirationalMap {
            ambient_dim,
            domain_surface,
            stages,
            declared_degree,
            base_cache: OnceCell::new(),
            points_cache: OnceCell::new(),
        }
    }

    pub fn from_stage(surface: &Surface, forms: Vec<MPoly>) -> Result<BirationalMap> {
        let d = surface.ambient_dim;
        if forms.len() != d + 1 {
            return Err(Error::AmbientMismatch(forms.len(), d + 1));
        }
        let deg = forms
            .iter()
            .filter_map(|f| f.total_degree())
            .max()
            .ok_or_else(|| Error::Validation("all stage forms are zero".into()))?;
        for f in &forms {
            if !f.is_zero() && (!f.is_homogeneous() || f.total_degree() != Some(deg)) {
                return Err(Error::Validation(
                    "stage forms must be homogeneous of one degree".into(),
                ));
            }
            if f.nvars != d + 1 {
                return Err(Error::AmbientMismatch(f.nvars, d + 1));
            }
        }
        Ok(BirationalMap::new_unchecked(
            d,
            surface.clone(),
            vec![forms],
            None,
        ))
    }

    pub fn identity(surface: &Surface) -> BirationalMap {
        let d = surface.ambient_dim;
        let forms = (0..=d).map(|i| MPoly::var(&surface.field, d + 1, i)).collect();
        BirationalMap::from_stage(surface, forms).unwrap()
    }

    pub fn stage_degrees(&self) -> Vec<u16> {
        self.stages
            .iter()
            .map(|s| s.iter().filter_map(|f| f.total_degree()).max().unwrap_or(0))
            .collect()
    }
}

/// Concatenates the stage chains: `first` is applied first.
pub fn map_compose(first: &BirationalMap, then: &BirationalMap) -> Result<BirationalMap> {
    if first.ambient_dim != then.ambient_dim {
        return Err(Error::AmbientMismatch(first.ambient_dim, then.ambient_dim));
    }
    let mut stages = first.stages.clone();
    stages.extend(then.stages.iter().cloned());
    Ok(BirationalMap::new_unchecked(
        first.ambient_dim,
        first.domain_surface.clone(),
        stages,
        None,
    ))
}

/// Applies the stages in order; errors if any stage vanishes at the point.
pub fn map_evaluate(map: &BirationalMap, point: &[Fe]) -> Result<Vec<Fe>> {
    let mut cur = point.to_vec();
    for stage in &map.stages {
        let next: Vec<Fe> = stage.iter().map(|f| f.eval(&cur)).collect();
        if next.iter().all(|c| c.is_zero()) {
            return Err(Error::IndeterminacyPoint);
        }
        cur = next;
    }
    Ok(normalize_coords(&cur))
}

/// Symbolic substitution of the stage chain into one stage; no reduction
/// modulo the surface ideal and no common-factor cancellation.
pub fn map_expand(map: &BirationalMap) -> BirationalMap {
    let mut acc = map.stages[0].clone();
    for stage in &map.stages[1..] {
        acc = stage.iter().map(|f| f.substitute(&acc)).collect();
    }
    BirationalMap::new_unchecked(
        map.ambient_dim,
        map.domain_surface.clone(),
        vec![acc],
        None,
    )
}

/// The subscheme of X cut by the (single) stage's forms; may strictly
/// contain the true base locus. Cached on the map: the Groebner basis of the
/// base ideal is expensive for high-degree stages.
pub fn map_base_scheme(map: &BirationalMap) -> ZeroDimScheme {
    map.base_cache
        .get_or_init(|| {
            let stage = map.stages.last().expect("map has at least one stage");
            assert_eq!(map.stages.len(), 1, "base scheme needs reduced equations");
            let mut gens = map.domain_surface.forms.clone();
            gens.extend(stage.iter().filter(|f| !f.is_zero()).cloned());
            ZeroDimScheme::new(gens)
        })
        .clone()
}

/// Decomposition of the base scheme into closed points, cached on the map.
pub fn map_base_points(map: &BirationalMap, rng: &mut Seeded) -> Result<Vec<ClosedPoint>> {
    if let Some(p) = map.points_cache.get() {
        return Ok(p.clone());
    }
    let base = map_base_scheme(map);
    let pts = decompose_zero_dim(&base, rng)?;
    let _ = map.points_cache.set(pts.clone());
    Ok(pts)
}

fn sample_degree_cap(x: &Surface) -> usize {
    if x.ambient_dim == 3 {
        3
    } else {
        4
    }
}

/// True iff f and g agree at 20 sampled points of X where both are defined.
pub fn maps_equal_on_surface(
    x: &Surface,
    f: &BirationalMap,
    g: &BirationalMap,
    rng: &mut Seeded,
) -> Result<bool> {
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 20 {
        attempts += 1;
        if attempts > 60 {
            return Err(Error::IndeterminateAtAllSamples);
        }
        let pts = sample_points(x, rng, 4, sample_degree_cap(x))?;
        for p in pts {
            let (Ok(a), Ok(b)) = (map_evaluate(f, &p.coords), map_evaluate(g, &p.coords)) else {
                continue;
            };
            if normalize_coords(&a) != normalize_coords(&b) {
                return Ok(false);
            }
            checked += 1;
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// modular linear algebra for interpolation
// ---------------------------------------------------------------------------

fn fp_add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn fp_sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let (mut b, mut e, mut r) = (a, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            r = fp_mul(r, b, p);
        }
        b = fp_mul(b, b, p);
        e >>= 1;
    }
    r
}

/// Rational residue mod p; None when the denominator vanishes.
fn rat_mod(r: &Rat, p: u64) -> Option<u64> {
    let pi = Int::from(p);
    let den = r.denom().mod_floor(&pi).to_u64_digits().1;
    let den = den.first().copied().unwrap_or(0);
    if den == 0 {
        return None;
    }
    let num = r.numer().mod_floor(&pi).to_u64_digits().1;
    let num = num.first().copied().unwrap_or(0);
    Some(fp_mul(num, fp_inv(den, p), p))
}

/// Incremental row echelon over Fp (dense rows, leading entries scaled to 1).
struct FpEch {
    p: u64,
    ncols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl FpEch {
    fn new(p: u64, ncols: usize) -> FpEch {
        FpEch {
            p,
            ncols,
            rows: vec![],
            pivots: vec![],
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut row: Vec<u64>) -> bool {
        let p = self.p;
        for (r, &piv) in self.rows.iter().zip(&self.pivots) {
            let f = row[piv];
            if f != 0 {
                for (x, y) in row.iter_mut().zip(r) {
                    if *y != 0 {
                        *x = fp_sub(*x, fp_mul(f, *y, p), p);
                    }
                }
            }
        }
        let Some(piv) = row.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = fp_inv(row[piv], p);
        for x in row.iter_mut() {
            if *x != 0 {
                *x = fp_mul(*x, inv, p);
            }
        }
        self.rows.push(row);
        self.pivots.push(piv);
        true
    }

    /// Kernel vector when the rank is exactly ncols - 1 (unique up to scale).
    fn kernel_single(&self) -> Option<Vec<u64>> {
        let p = self.p;
        if self.rank() + 1 != self.ncols {
            return None;
        }
        let mut is_piv = vec![false; self.ncols];
        for &c in &self.pivots {
            is_piv[c] = true;
        }
        let free = (0..self.ncols).find(|&c| !is_piv[c])?;
        let mut v = vec![0u64; self.ncols];
        v[free] = 1;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by(|&a, &b| self.pivots[b].cmp(&self.pivots[a]));
        for i in order {
            let piv = self.pivots[i];
            let row = &self.rows[i];
            let mut s = 0u64;
            for j in (piv + 1)..self.ncols {
                if row[j] != 0 && v[j] != 0 {
                    s = fp_add(s, fp_mul(row[j], v[j], p), p);
                }
            }
            v[piv] = if s == 0 { 0 } else { p - s };
        }
        Some(v)
    }
}

/// A sampled point with its image, both lifted to the point's field.
type Sample = (Vec<Fe>, Vec<Fe>, Field);

/// Trace rows of the minor conditions g_i(p) q_j - g_j(p) q_i at one sample,
/// reduced mod p; None when p divides a denominator or the minimal polynomial
/// degenerates.
fn sample_rows_mod(
    s: &Sample,
    monos: &[Mono],
    nv: usize,
    p: u64,
) -> Option<Vec<Vec<u64>>> {
    let (coords, q, ki) = s;
    let e = ki.degree();
    let nm = monos.len();
    let ncols = nv * nm;
    // residue field arithmetic: Fp[t]/(min_poly mod p), coords low to high
    let modulus: Vec<u64> = ki
        .min_poly()
        .iter()
        .map(|c| rat_mod(c, p))
        .collect::<Option<_>>()?;
    let ext_mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    prod[i + j] = fp_add(prod[i + j], fp_mul(ai, bj, p), p);
                }
            }
        }
        for k in (e..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..e {
                prod[k - e + i] = fp_sub(prod[k - e + i], fp_mul(c, modulus[i], p), p);
            }
        }
        prod.truncate(e);
        prod
    };
    let fe_mod = |c: &Fe| -> Option<Vec<u64>> { c.coords().iter().map(|r| rat_mod(r, p)).collect() };
    let cm: Vec<Vec<u64>> = coords.iter().map(&fe_mod).collect::<Option<_>>()?;
    let qm: Vec<Vec<u64>> = q.iter().map(&fe_mod).collect::<Option<_>>()?;
    // power tables per variable, then monomial values
    let n = monos.first().map(|m| m.deg).unwrap_or(0) as usize;
    let mut one = vec![0u64; e];
    one[0] = 1;
    let pw: Vec<Vec<Vec<u64>>> = cm
        .iter()
        .map(|c| {
            let mut t = vec![one.clone()];
            for k in 1..=n {
                let prev = t[k - 1].clone();
                t.push(ext_mul(&prev, c));
            }
            t
        })
        .collect();
    let mvals: Vec<Vec<u64>> = monos
        .iter()
        .map(|m| {
            let mut acc = one.clone();
            for (v, pwv) in pw.iter().enumerate() {
                if m.e[v] > 0 {
                    acc = ext_mul(&acc, &pwv[m.e[v] as usize]);
                }
            }
            acc
        })
        .collect();
    let mut rows = vec![];
    for i in 0..nv {
        for j in (i + 1)..nv {
            let bi: Vec<Vec<u64>> = mvals.iter().map(|m| ext_mul(m, &qm[j])).collect();
            let bj: Vec<Vec<u64>> = mvals.iter().map(|m| ext_mul(m, &qm[i])).collect();
            for r in 0..e {
                let mut row = vec![0u64; ncols];
                for k in 0..nm {
                    row[i * nm + k] = bi[k][r];
                    row[j * nm + k] = if bj[k][r] == 0 { 0 } else { p - bj[k][r] };
                }
                if row.iter().any(|&c| c != 0) {
                    rows.push(row);
                }
            }
        }
    }
    Some(rows)
}

/// Exact certification of a reconstructed coefficient vector: builds the
/// candidate forms and checks every stored minor condition over the sample's
/// field with exact arithmetic.
fn certify_candidate(
    field: &Field,
    samples: &[Sample],
    monos: &[Mono],
    nv: usize,
    cand: &[Rat],
) -> Option<Vec<MPoly>> {
    let nm = monos.len();
    let mut rats = cand.to_vec();
    normalize_primitive(&mut rats);
    if rats.iter().all(|r| r.is_zero()) {
        return None;
    }
    let forms: Vec<MPoly> = (0..nv)
        .map(|blk| {
            let terms: Vec<(Mono, Fe)> = monos
                .iter()
                .enumerate()
                .filter(|(k, _)| !rats[blk * nm + k].is_zero())
                .map(|(k, m)| (*m, Fe::from_rat(field, rats[blk * nm + k].clone())))
                .collect();
            MPoly::from_terms(field, nv, terms)
        })
        .collect();
    for (coords, q, ki) in samples {
        let fv: Vec<Fe> = forms.iter().map(|f| f.eval(coords).lift(ki)).collect();
        for i in 0..nv {
            for j in (i + 1)..nv {
                if !(&(&q[j] * &fv[i]) - &(&q[i] * &fv[j])).is_zero() {
                    return None;
                }
            }
        }
    }
    Some(forms)
}

/// Interpolates degree-n defining forms for the map: samples points and
/// images, imposes the 2x2-minor conditions, and succeeds iff the solution
/// space modulo trivial multiples of the surface equations is 1-dimensional.
///
/// The linear algebra runs mod large primes (rank detection and kernel
/// extraction), followed by CRT + rational reconstruction and an *exact*
/// certification of the candidate against every stored sample. Since the
/// Fp-rank is a lower bound for the Q-rank and the trivial subspace plus the
/// certified candidate exhibit tdim + 1 exact kernel vectors, a certified
/// success is rigorous.
pub fn interpolate_map(
    x: &Surface,
    map: &BirationalMap,
    n: u16,
    rng: &mut Seeded,
) -> Result<(bool, Vec<MPoly>)> {
    let d = x.ambient_dim;
    let nv = d + 1;
    let field = x.field.clone();
    let monos = monomials_of_degree(nv, n);
    let nm = monos.len();
    let ncols = nv * nm;
    // trivial subspace: per-block multiples of the surface equations (always
    // contained in the solution space); exact, small entries
    let mut trivial = Echelon::new(&field, ncols);
    for f in &x.forms {
        let df = f.total_degree().unwrap();
        if df > n {
            continue;
        }
        for c in monomials_of_degree(nv, n - df) {
            let prod = f.mul_term(&c, &Fe::one(&field));
            let coeffs: Vec<Fe> = monos.iter().map(|m| prod.coeff_of(m)).collect();
            for blk in 0..nv {
                let mut vec = vec![Fe::zero(&field); ncols];
                vec[blk * nm..(blk + 1) * nm].clone_from_slice(&coeffs);
                trivial.insert(vec);
            }
        }
    }
    let tdim = trivial.rank();
    let tpiv: Vec<usize> = trivial.pivot_cols().to_vec();

    let mut samples: Vec<Sample> = vec![];
    'primes: for pass in 0..3 {
        let p0 = GB_PRIMES[pass];
        let mut ech = FpEch::new(p0, ncols);
        for s in &samples {
            let Some(rows) = sample_rows_mod(s, &monos, nv, p0) else {
                continue 'primes;
            };
            for r in rows {
                ech.insert(r);
            }
        }
        // sample until the Fp-rank stabilizes
        let mut stable = 0;
        let mut batches = 0;
        loop {
            batches += 1;
            if batches > 60 {
                return Err(Error::SamplingExhausted(60));
            }
            let before = ech.rank();
            let pts = sample_points(x, rng, 5, sample_degree_cap(x))?;
            for pt in &pts {
                let Ok(qv) = map_evaluate(map, &pt.coords) else {
                    continue;
                };
                let ki = qv
                    .iter()
                    .chain(pt.coords.iter())
                    .find(|c| !c.field().is_q())
                    .map(|c| c.field().clone())
                    .unwrap_or_else(|| field.clone());
                let coords: Vec<Fe> = pt.coords.iter().map(|c| c.lift(&ki)).collect();
                let q: Vec<Fe> = qv.iter().map(|c| c.lift(&ki)).collect();
                let s = (coords, q, ki);
                let rows = sample_rows_mod(&s, &monos, nv, p0);
                samples.push(s);
                let Some(rows) = rows else {
                    continue 'primes;
                };
                for r in rows {
                    ech.insert(r);
                }
            }
            if ech.rank() + tdim >= ncols {
                // rank mod p bounds the rank over Q from below, so the exact
                // kernel is the trivial subspace: no reduced forms at this n
                return Ok((false, vec![]));
            }
            if ech.rank() == before && before > 0 {
                stable += 1;
                if stable >= 3 {
                    break;
                }
            } else {
                stable = 0;
            }
        }
        if ech.rank() != ncols - tdim - 1 {
            return Ok((false, vec![]));
        }
        // canonicalize: the trivial pivot coordinates of the representative
        // are forced to zero, which pins a unique solution up to scale
        for &c in &tpiv {
            let mut r = vec![0u64; ncols];
            r[c] = 1;
            ech.insert(r);
        }
        // per-prime kernels, CRT, rational reconstruction with stability,
        // then exact certification
        let mut acc: Option<(Vec<Int>, Int, usize)> = None;
        let mut prev: Option<Vec<Rat>> = None;
        for &pk in GB_PRIMES.iter() {
            let kern = if pk == p0 {
                ech.kernel_single()
            } else {
                let mut e2 = FpEch::new(pk, ncols);
                let mut good = true;
                for s in &samples {
                    let Some(rows) = sample_rows_mod(s, &monos, nv, pk) else {
                        good = false;
                        break;
                    };
                    for r in rows {
                        e2.insert(r);
                    }
                }
                if !good {
                    continue;
                }
                for &c in &tpiv {
                    let mut r = vec![0u64; ncols];
                    r[c] = 1;
                    e2.insert(r);
                }
                e2.kernel_single()
            };
            let Some(mut v) = kern else {
                continue;
            };
            let j0 = v.iter().position(|&c| c != 0).expect("nonzero kernel vector");
            let inv = fp_inv(v[j0], pk);
            for c in v.iter_mut() {
                if *c != 0 {
                    *c = fp_mul(*c, inv, pk);
                }
            }
            match &mut acc {
                None => {
                    acc = Some((v.iter().map(|&c| Int::from(c)).collect(), Int::from(pk), j0));
                }
                Some((res, m, pos)) => {
                    if j0 != *pos {
                        continue;
                    }
                    let pi = Int::from(pk);
                    for (r, &c) in res.iter_mut().zip(&v) {
                        *r = crt(r, m, &Int::from(c), &pi);
                    }
                    *m *= pi;
                }
            }
            let (res, m, _) = acc.as_ref().unwrap();
            let cand: Option<Vec<Rat>> = res.iter().map(|r| rational_reconstruct(r, m)).collect();
            match cand {
                Some(cv) => {
                    if prev.as_ref() == Some(&cv) {
                        if let Some(forms) = certify_candidate(&field, &samples, &monos, nv, &cv) {
                            return Ok((true, forms));
                        }
                    }
                    prev = Some(cv);
                }
                None => prev = None,
            }
        }
        return Ok((false, vec![]));
    }
    Ok((false, vec![]))
}

/// Interpolation plus declared-degree bookkeeping: returns a single-stage map
/// with the reduced forms when interpolation succeeds.
pub fn interpolated_stage(
    x: &Surface,
    map: &BirationalMap,
    n: u16,
    rng: &mut Seeded,
) -> Result<Option<BirationalMap>> {
    let (ok, forms) = interpolate_map(x, map, n, rng)?;
    if !ok {
        return Ok(None);
    }
    let mut m = BirationalMap::from_stage(x, forms)?;
    m.declared_degree = Some(n);
    Ok(Some(m))
}
