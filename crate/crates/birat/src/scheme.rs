//! Projective surfaces and zero-dimensional scheme analysis: degree, radical,
//! decomposition into closed points, residual intersection, point splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groebner::{
    self, groebner_basis, groebner_basis_exact, hilbert_data, homogenize, ideal_intersection,
    normal_form, permute_vars, quotient_basis, set_var_one, HilbertData,
};
use crate::linalg::{Echelon, Mat};
use crate::mpoly::{MPoly, Mono, MonoOrd};
use crate::nf::{Fe, Field, NumberField};
use crate::rat::{rat_int, Rat};
use crate::upoly::UPoly;

pub type Seeded = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Seeded {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// surfaces
// ---------------------------------------------------------------------------

/// A del Pezzo surface of degree 3 or 4 in its anticanonical embedding.
#[derive(Clone, Debug)]
pub struct Surface {
    pub field: Field,
    /// ambient projective dimension d (3 or 4); nvars = d + 1
    pub ambient_dim: usize,
    pub forms: Vec<MPoly>,
    pub gb: Vec<MPoly>,
}

impl Surface {
    pub fn new(forms: Vec<MPoly>) -> Result<Surface> {
        let first = forms
            .first()
            .ok_or_else(|| Error::Validation("no defining forms".into()))?;
        let field = first.field.clone();
        let nvars = first.nvars;
        for f in &forms {
            if !f.is_homogeneous() || f.is_zero() {
                return Err(Error::Validation("defining forms must be homogeneous and nonzero".into()));
            }
            if f.nvars != nvars {
                return Err(Error::AmbientMismatch(f.nvars, nvars));
            }
        }
        let gb = groebner_basis(&forms, MonoOrd::GrevLex);
        Ok(Surface {
            field,
            ambient_dim: nvars - 1,
            forms,
            gb,
        })
    }

    pub fn nvars(&self) -> usize {
        self.ambient_dim + 1
    }

    /// Normal form modulo the surface ideal.
    pub fn nf(&self, f: &MPoly) -> MPoly {
        normal_form(f, &self.gb, MonoOrd::GrevLex)
    }

    pub fn contains_form(&self, f: &MPoly) -> bool {
        self.nf(f).is_zero()
    }

    pub fn contains_point(&self, coords: &[Fe]) -> bool {
        self.forms.iter().all(|f| f.eval(coords).is_zero())
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let homog = self.forms.iter().all(|f| f.is_homogeneous());
        rep.check("homogeneous", homog, "all defining forms homogeneous");
        let expected_codim = self.nvars() - 3;
        rep.check(
            "form count",
            self.forms.len() == expected_codim,
            &format!("{} forms for ambient P^{}", self.forms.len(), self.ambient_dim),
        );
        if !rep.pass {
            return rep;
        }
        let hd = hilbert_data(&self.gb, MonoOrd::GrevLex);
        rep.check(
            "dimension 2",
            hd.proj_dim == 2,
            &format!("projective dimension {}", hd.proj_dim),
        );
        rep.check(
            "degree",
            hd.degree == self.ambient_dim as i64,
            &format!("degree {} (expected {})", hd.degree, self.ambient_dim),
        );
        // Jacobian criterion: the ideal of c x c minors plus the forms must
        // cut out the empty projective scheme
        let sing = self.singular_locus_ideal();
        let sgb = groebner_basis(&sing, MonoOrd::GrevLex);
        let shd = hilbert_data(&sgb, MonoOrd::GrevLex);
        rep.check(
            "smooth",
            shd.proj_dim < 0,
            &format!("singular locus dimension {}", shd.proj_dim),
        );
        rep
    }

    fn singular_locus_ideal(&self) -> Vec<MPoly> {
        let c = self.forms.len();
        let n = self.nvars();
        let jac: Vec<Vec<MPoly>> = self
            .forms
            .iter()
            .map(|f| (0..n).map(|v| f.derivative(v)).collect())
            .collect();
        let mut gens = self.forms.clone();
        // all c x c minors of the c x n Jacobian
        let cols = combinations(n, c);
        for sel in cols {
            let minor = det_poly(&jac, &sel);
            if !minor.is_zero() {
                gens.push(minor);
            }
        }
        gens
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, start: usize, n: usize, k: usize) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(out, cur, i + 1, n, k);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, 0, n, k);
    out
}

fn det_poly(rows: &[Vec<MPoly>], cols: &[usize]) -> MPoly {
    let k = cols.len();
    if k == 1 {
        return rows[0][cols[0]].clone();
    }
    let field = rows[0][cols[0]].field.clone();
    let nv = rows[0][cols[0]].nvars;
    let mut acc = MPoly::zero(&field, nv);
    for (i, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().filter(|&&x| x != c).copied().collect();
        let sub = det_poly(&rows[1..], &rest);
        let term = rows[0][c].mul(&sub);
        acc = if i % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

#[derive(Default, Clone, Debug)]
pub struct ValidationReport {
    pub checks: Vec<(String, bool, String)>,
    pub pass: bool,
}

impl ValidationReport {
    fn check(&mut self, name: &str, ok: bool, detail: &str) {
        if self.checks.is_empty() {
            self.pass = true;
        }
        self.checks.push((name.to_string(), ok, detail.to_string()));
        self.pass = self.pass && ok;
    }
}

// ---------------------------------------------------------------------------
// zero-dimensional schemes
// ---------------------------------------------------------------------------

/// A projective scheme expected to be zero-dimensional, with its Groebner
/// basis and Hilbert data (dimension and degree read off the Hilbert
/// polynomial, which does not see irrelevant components).
#[derive(Clone, Debug)]
pub struct ZeroDimScheme {
    pub gens: Vec<MPoly>,
    pub gb: Vec<MPoly>,
    pub hilbert: HilbertData,
}

impl ZeroDimScheme {
    pub fn new(gens: Vec<MPoly>) -> ZeroDimScheme {
        let gb = groebner_basis(&gens, MonoOrd::GrevLex);
        let hilbert = if gb.is_empty() {
            HilbertData {
                proj_dim: gens.first().map(|g| g.nvars as i64).unwrap_or(0) - 1,
                degree: 0,
            }
        } else {
            hilbert_data(&gb, MonoOrd::GrevLex)
        };
        ZeroDimScheme { gens, gb, hilbert }
    }

    pub fn nvars(&self) -> usize {
        self.gens[0].nvars
    }

    pub fn field(&self) -> Field {
        self.gens[0].field.clone()
    }

    pub fn is_empty(&self) -> bool {
        self.hilbert.proj_dim < 0
    }

    pub fn zero_dim_degree(&self) -> Result<i64> {
        if self.hilbert.proj_dim > 0 {
            return Err(Error::NotZeroDimensional(self.hilbert.proj_dim));
        }
        if self.hilbert.proj_dim < 0 {
            return Ok(0);
        }
        Ok(self.hilbert.degree)
    }

    pub fn contains_point(&self, coords: &[Fe]) -> bool {
        self.gens.iter().all(|f| f.eval(coords).is_zero())
    }
}

// ---------------------------------------------------------------------------
// affine quotient algebra with exact + modular minimal polynomials
// ---------------------------------------------------------------------------

struct AffineAlgebra {
    gb: Vec<MPoly>,
    basis: Vec<Mono>,
    field: Field,
    nvars: usize,
}

impl AffineAlgebra {
    fn new(gb: Vec<MPoly>) -> Option<AffineAlgebra> {
        let first = gb.iter().find(|g| !g.is_zero())?;
        let field = first.field.clone();
        let nvars = first.nvars;
        let basis = quotient_basis(&gb, MonoOrd::GrevLex)?;
        Some(AffineAlgebra {
            gb,
            basis,
            field,
            nvars,
        })
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn coords_of(&self, f: &MPoly) -> Vec<Fe> {
        let nf = normal_form(f, &self.gb, MonoOrd::GrevLex);
        let mut v = vec![Fe::zero(&self.field); self.basis.len()];
        for (m, c) in &nf.terms {
            let idx = self
                .basis
                .iter()
                .position(|b| b == m)
                .expect("normal form outside quotient basis");
            v[idx] = c.clone();
        }
        v
    }

    fn elem_poly(&self, v: &[Fe]) -> MPoly {
        let terms: Vec<(Mono, Fe)> = self
            .basis
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        MPoly::from_terms(&self.field, self.nvars, terms)
    }

    fn mul_by(&self, v: &[Fe], f: &MPoly) -> Vec<Fe> {
        self.coords_of(&self.elem_poly(v).mul(f))
    }

    /// Exact minimal polynomial of (multiplication by) f in the quotient.
    fn minpoly_exact(&self, f: &MPoly) -> UPoly {
        let d = self.dim();
        let mut vecs: Vec<Vec<Fe>> = vec![];
        let mut ech = Echelon::new(&self.field, d);
        let mut cur = self.coords_of(&MPoly::one(&self.field, self.nvars));
        loop {
            if !ech.insert(cur.clone()) {
                // dependency: solve for the relation
                let k = vecs.len();
                let mut rows = vec![vec![Fe::zero(&self.field); k]; d];
                for (j, v) in vecs.iter().enumerate() {
                    for i in 0..d {
                        rows[i][j] = v[i].clone();
                    }
                }
                let mat = Mat::new(&self.field, k, rows);
                let sol = mat.solve(&cur).expect("krylov dependency must be solvable");
                let mut coeffs: Vec<Fe> = sol.iter().map(|c| -c).collect();
                coeffs.push(Fe::one(&self.field));
                return UPoly::new(&self.field, coeffs);
            }
            vecs.push(cur.clone());
            cur = self.mul_by(&cur, f);
        }
    }

    /// Minimal polynomial via modular Krylov with exact certification;
    /// falls back to the exact computation.
    fn minpoly(&self, f: &MPoly) -> UPoly {
        if self.dim() > 24 && self.field.is_q() {
            if let Some(m) = self.minpoly_modular(f) {
                return m;
            }
        }
        self.minpoly_exact(f)
    }

    fn minpoly_modular(&self, f: &MPoly) -> Option<UPoly> {
        use crate::groebner::{gb_mod_p, mpoly_mod_p, GB_PRIMES};
        use crate::rat::{crt, rational_reconstruct, Int};
        let mut deg: Option<usize> = None;
        let mut acc: Vec<Int> = vec![];
        let mut modulus = Int::from(1u32);
        let mut last: Option<Vec<Rat>> = None;
        for &p in GB_PRIMES.iter() {
            let Some(gbp) = gb_mod_p(&self.gens_for_modular(), p, MonoOrd::GrevLex) else {
                continue;
            };
            let Some(fp) = mpoly_mod_p(f, p, MonoOrd::GrevLex) else {
                continue;
            };
            let Some(mp) = fp_minpoly(&gbp, &fp, p, self.nvars, &self.basis) else {
                continue;
            };
            let dp = mp.len() - 1;
            match deg {
                None => {
                    deg = Some(dp);
                    acc = mp.iter().map(|&c| Int::from(c)).collect();
                    modulus = Int::from(p);
                    continue;
                }
                Some(d0) if dp > d0 => {
                    // previous primes were unlucky (degree dropped there)
                    deg = Some(dp);
                    acc = mp.iter().map(|&c| Int::from(c)).collect();
                    modulus = Int::from(p);
                    last = None;
                    continue;
                }
                Some(d0) if dp < d0 => continue,
                _ => {}
            }
            let pi = Int::from(p);
            for (x, &c) in acc.iter_mut().zip(&mp) {
                *x = crt(x, &modulus, &Int::from(c), &pi);
            }
            modulus *= &pi;
            let mut recon = vec![];
            let mut ok = true;
            for x in &acc {
                match rational_reconstruct(x, &modulus) {
                    Some(r) => recon.push(r),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            if last.as_ref() == Some(&recon) {
                let cand = UPoly::from_rats(&self.field, &recon);
                if self.certify_annihilates(f, &cand) {
                    // cand annihilates exactly and its degree equals the
                    // minimal polynomial degree mod p, which bounds the true
                    // degree from below: cand is the minimal polynomial
                    return Some(cand);
                }
                last = None;
            } else {
                last = Some(recon);
            }
        }
        None
    }

    fn gens_for_modular(&self) -> Vec<MPoly> {
        self.gb.clone()
    }

    /// Horner evaluation of m at f inside the quotient; true iff zero.
    fn certify_annihilates(&self, f: &MPoly, m: &UPoly) -> bool {
        let d = self.dim();
        let one = self.coords_of(&MPoly::one(&self.field, self.nvars));
        let mut r = vec![Fe::zero(&self.field); d];
        for c in m.c.iter().rev() {
            r = self.mul_by(&r, f);
            for (ri, oi) in r.iter_mut().zip(&one) {
                let t = oi.mul_rat(&c.as_rat().unwrap());
                *ri = &*ri + &t;
            }
        }
        r.iter().all(|x| x.is_zero())
    }
}

/// Krylov minimal polynomial over F_p; coefficients low-to-high, monic.
fn fp_minpoly(
    gb: &[crate::groebner::FpPoly],
    f: &crate::groebner::FpPoly,
    p: u64,
    nvars: usize,
    basis: &[Mono],
) -> Option<Vec<u64>> {
    use crate::groebner::{fp_normal_form, FpPoly};
    let d = basis.len();
    // leading terms must match the exact basis for the chart to be valid mod p
    let coords = |g: &FpPoly| -> Option<Vec<u64>> {
        let mut v = vec![0u64; d];
        for (m, c) in &g.terms {
            let idx = basis.iter().position(|b| b == m)?;
            v[idx] = *c;
        }
        Some(v)
    };
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let subm = |a: u64, b: u64| if a >= b { a - b } else { a + p - b };
    let invm = |a: u64| {
        let mut r = 1u64;
        let mut b = a;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        r
    };
    // incremental echelon over F_p
    let mut rows: Vec<(usize, Vec<u64>)> = vec![]; // (pivot, normalized row)
    let mut vecs: Vec<Vec<u64>> = vec![];
    let mut elem = FpPoly {
        terms: vec![(Mono::one(), 1u64)],
    };
    let mut cur = coords(&fp_normal_form(&elem, gb, p, MonoOrd::GrevLex, nvars))?;
    loop {
        // reduce cur against rows, remembering the combination
        let mut red = cur.clone();
        let mut comb = vec![0u64; vecs.len()];
        for (ri, (piv, row)) in rows.iter().enumerate() {
            if red[*piv] != 0 {
                let fctr = red[*piv];
                for (x, y) in red.iter_mut().zip(row) {
                    *x = subm(*x, mulm(fctr, *y));
                }
                comb[ri] = fctr;
            }
        }
        match red.iter().position(|&x| x != 0) {
            None => {
                // dependency: cur = sum comb_r * row_r; rewrite in terms of
                // the original Krylov vectors by re-solving directly
                let k = vecs.len();
                // solve V c = cur with V columns = vecs, via dense elimination
                let mut aug: Vec<Vec<u64>> = (0..d)
                    .map(|i| {
                        let mut r: Vec<u64> = vecs.iter().map(|v| v[i]).collect();
                        r.push(cur[i]);
                        r
                    })
                    .collect();
                let mut piv_rows = vec![];
                let mut rr = 0usize;
                for col in 0..k {
                    let Some(pr) = (rr..d).find(|&r| aug[r][col] != 0) else {
                        return None;
                    };
                    aug.swap(rr, pr);
                    let inv = invm(aug[rr][col]);
                    for x in aug[rr].iter_mut() {
                        *x = mulm(*x, inv);
                    }
                    for r2 in 0..d {
                        if r2 != rr && aug[r2][col] != 0 {
                            let fctr = aug[r2][col];
                            let src = aug[rr].clone();
                            for (x, y) in aug[r2].iter_mut().zip(&src) {
                                *x = subm(*x, mulm(fctr, *y));
                            }
                        }
                    }
                    piv_rows.push(rr);
                    rr += 1;
                }
                let mut m = vec![0u64; k + 1];
                for (col, &pr) in piv_rows.iter().enumerate() {
                    m[col] = subm(0, aug[pr][k]);
                }
                m[k] = 1;
                return Some(m);
            }
            Some(piv) => {
                let inv = invm(red[piv]);
                let row: Vec<u64> = red.iter().map(|&x| mulm(x, inv)).collect();
                rows.push((piv, row));
                vecs.push(cur.clone());
            }
        }
        // next Krylov vector: multiply by f and normal-form
        elem = FpPoly {
            terms: basis
                .iter()
                .zip(&cur)
                .filter(|(_, &c)| c != 0)
                .map(|(m, &c)| (*m, c))
                .collect(),
        };
        let prod = fp_mul(&elem, f, p, nvars);
        cur = coords(&fp_normal_form(&prod, gb, p, MonoOrd::GrevLex, nvars))?;
        if vecs.len() > d {
            return None;
        }
    }
}

fn fp_mul(
    a: &crate::groebner::FpPoly,
    b: &crate::groebner::FpPoly,
    p: u64,
    nvars: usize,
) -> crate::groebner::FpPoly {
    use std::collections::HashMap;
    let mut map: HashMap<Mono, u64> = HashMap::new();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let m = ma.mul(mb);
            let v = ((*ca as u128 * *cb as u128) % p as u128) as u64;
            let e = map.entry(m).or_insert(0);
            *e = (*e + v) % p;
        }
    }
    let mut terms: Vec<(Mono, u64)> = map.into_iter().filter(|(_, c)| *c != 0).collect();
    terms.sort_by(|x, y| MonoOrd::GrevLex.cmp(&y.0, &x.0, nvars));
    crate::groebner::FpPoly { terms }
}

// ---------------------------------------------------------------------------
// charts, radical, decomposition
// ---------------------------------------------------------------------------

/// Affine chart data for a zero-dimensional projective scheme: an affine
/// Groebner basis whose quotient dimension equals the projective degree
/// (certifying that no point lies at infinity for this chart), plus the
/// bookkeeping to map points back to the original coordinates.
struct Chart {
    algebra: AffineAlgebra,
    /// original-ambient index of each affine variable
    affine_vars: Vec<usize>,
    /// original-ambient index of the dehomogenized variable
    chart_var: usize,
    /// optional linear change: original coords = change * new coords
    change: Option<Mat>,
}

fn find_chart(z: &ZeroDimScheme, rng: &mut Seeded) -> Result<Chart> {
    let deg = z.zero_dim_degree()?;
    let nvars = z.nvars();
    let field = z.field();
    for attempt in 0..9u32 {
        let (gens, change) = if attempt == 0 {
            (z.gens.clone(), None)
        } else {
            let m = random_invertible(&field, nvars, rng);
            let rows: Vec<Vec<Fe>> = m.rows.clone();
            let gens = z
                .gens
                .iter()
                .map(|g| g.linear_substitute(&rows, &field))
                .collect();
            (gens, Some(m))
        };
        for chart_var in (0..nvars).rev() {
            // permute chart variable to the end so dehomogenizing the
            // homogeneous grevlex basis yields an affine grevlex basis
            let mut perm: Vec<usize> = (0..nvars).filter(|&v| v != chart_var).collect();
            perm.push(chart_var);
            let pgens: Vec<MPoly> = gens.iter().map(|g| permute_vars(g, &perm)).collect();
            let hgb = groebner_basis(&pgens, MonoOrd::GrevLex);
            let agb: Vec<MPoly> = hgb
                .iter()
                .map(|g| set_var_one(g, nvars - 1))
                .filter(|g| !g.is_zero())
                .collect();
            let Some(algebra) = AffineAlgebra::new(agb) else {
                continue;
            };
            if algebra.dim() as i64 != deg {
                continue;
            }
            return Ok(Chart {
                algebra,
                affine_vars: perm[..nvars - 1].to_vec(),
                chart_var,
                change,
            });
        }
        if attempt == 0 {
            continue;
        }
    }
    Err(Error::GenericityFailure(8))
}

impl Chart {
    /// Maps affine chart coordinates to original projective coordinates.
    fn to_projective(&self, affine: &[Fe], field: &Field) -> Vec<Fe> {
        let nvars = self.affine_vars.len() + 1;
        let mut coords = vec![Fe::zero(field); nvars];
        for (k, &orig) in self.affine_vars.iter().enumerate() {
            coords[orig] = affine[k].clone();
        }
        coords[self.chart_var] = Fe::one(field);
        match &self.change {
            None => coords,
            Some(m) => {
                let rows = &m.rows;
                (0..nvars)
                    .map(|i| {
                        let mut acc = Fe::zero(field);
                        for j in 0..nvars {
                            if !rows[i][j].is_zero() {
                                let t = coords[j].mul_rat(&rows[i][j].as_rat().unwrap());
                                acc = &acc + &t;
                            }
                        }
                        acc
                    })
                    .collect()
            }
        }
    }
}

fn random_invertible(field: &Field, n: usize, rng: &mut Seeded) -> Mat {
    loop {
        let rows: Vec<Vec<Fe>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Fe::from_rat(field, rat_int(rng.gen_range(-5i64..=5))))
                    .collect()
            })
            .collect();
        let m = Mat::new(field, n, rows);
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

/// The reduced subscheme (radical), via squarefree chart eliminants.
pub fn reduced_subscheme(z: &ZeroDimScheme, rng: &mut Seeded) -> Result<ZeroDimScheme> {
    let deg = z.zero_dim_degree()?;
    if deg == 0 {
        return Ok(z.clone());
    }
    let chart = find_chart(z, rng)?;
    let alg = &chart.algebra;
    let nv = alg.nvars;
    let mut gens = alg.gb.clone();
    for v in 0..nv {
        let x = MPoly::var(&alg.field, nv, v);
        let m = alg.minpoly(&x);
        let sf = squarefree_part(&m);
        if sf.degree() == m.degree() {
            continue;
        }
        // univariate polynomial sf(x_v) as a multivariate generator
        gens.push(upoly_in_var(&sf, nv, v));
    }
    let rgb = groebner_basis_exact(&gens, MonoOrd::GrevLex, None);
    // homogenize back: affine vars keep their slots, chart var is last
    let nvars = z.nvars();
    let mut proj_gens: Vec<MPoly> = rgb
        .iter()
        .map(|g| {
            let h = homogenize(g);
            // variables: affine slots 0..nvars-1 then homogenizing var; map to
            // original ambient positions
            let mut perm_back = vec![0usize; nvars];
            for (k, &orig) in chart.affine_vars.iter().enumerate() {
                perm_back[orig] = k;
            }
            perm_back[chart.chart_var] = nvars - 1;
            permute_vars(&h, &perm_back)
        })
        .collect();
    if let Some(m) = &chart.change {
        // undo the coordinate change: substitute x -> M^{-1} x
        let minv = m.inverse().expect("change of coordinates is invertible");
        proj_gens = proj_gens
            .iter()
            .map(|g| g.linear_substitute(&minv.rows, &z.field()))
            .collect();
    }
    Ok(ZeroDimScheme::new(proj_gens))
}

fn squarefree_part(f: &UPoly) -> UPoly {
    let g = f.gcd(&f.derivative());
    if g.is_constant() {
        f.monic()
    } else {
        f.div_exact(&g).monic()
    }
}

fn upoly_in_var(f: &UPoly, nvars: usize, var: usize) -> MPoly {
    let field = f.field.clone();
    let terms: Vec<(Mono, Fe)> = f
        .c
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let mut m = Mono::one();
            m.e[var] = k as u16;
            m.deg = k as u16;
            (m, c.clone())
        })
        .collect();
    MPoly::from_terms(&field, nvars, terms)
}

// ---------------------------------------------------------------------------
// closed points
// ---------------------------------------------------------------------------

/// An irreducible zero-dimensional subscheme: degree-e point with split field
/// k1 of degree e, a geometric representative over k1, and the vanishing
/// prime ideal over Q.
#[derive(Clone, Debug)]
pub struct ClosedPoint {
    pub field: Field,
    pub coords: Vec<Fe>,
    pub prime: Vec<MPoly>,
    pub degree: usize,
}

impl ClosedPoint {
    pub fn rational(ground: &Field, coords: Vec<Rat>) -> ClosedPoint {
        let fes: Vec<Fe> = coords
            .iter()
            .map(|r| Fe::from_rat(ground, r.clone()))
            .collect();
        let prime = point_ideal(&fes, ground);
        ClosedPoint {
            field: ground.clone(),
            coords: normalize_coords(&fes),
            prime,
            degree: 1,
        }
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    pub fn min_poly(&self) -> Vec<Rat> {
        self.field.min_poly().to_vec()
    }
}

pub fn normalize_coords(coords: &[Fe]) -> Vec<Fe> {
    let Some(first) = coords.iter().find(|c| !c.is_zero()) else {
        return coords.to_vec();
    };
    let inv = first.inverse().unwrap();
    coords.iter().map(|c| c * &inv).collect()
}

/// The homogeneous vanishing ideal over Q of the Galois orbit of a point
/// with coordinates over k1.
pub fn point_ideal(coords: &[Fe], ground: &Field) -> Vec<MPoly> {
    let k1 = coords
        .iter()
        .find(|c| !c.field().is_q())
        .map(|c| c.field().clone())
        .unwrap_or_else(|| ground.clone());
    let e = k1.degree();
    let nvars = coords.len();
    let mut gens: Vec<MPoly> = vec![];
    for d in 1..=(e as u16 + 1) {
        let monos = groebner::monomials_of_degree(nvars, d);
        // condition matrix: each monomial evaluates to an element of k1,
        // giving e rational coordinates; kernel rows are forms over Q
        let rows: Vec<Vec<Fe>> = (0..e)
            .map(|i| {
                monos
                    .iter()
                    .map(|m| {
                        let mono_poly = MPoly::from_terms(
                            ground,
                            nvars,
                            vec![(*m, Fe::one(ground))],
                        );
                        let v = mono_poly.eval(coords);
                        Fe::from_rat(ground, v.coords()[i].clone())
                    })
                    .collect()
            })
            .collect();
        let mat = Mat::new(ground, monos.len(), rows);
        for k in mat.kernel() {
            let terms: Vec<(Mono, Fe)> = monos
                .iter()
                .zip(&k)
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (*m, c.clone()))
                .collect();
            gens.push(MPoly::from_terms(ground, nvars, terms).normalized());
        }
        let gb = groebner_basis_exact(&gens, MonoOrd::GrevLex, None);
        if !gb.is_empty() {
            let hd = hilbert_data(&gb, MonoOrd::GrevLex);
            if hd.proj_dim == 0 && hd.degree == e as i64 {
                return gb;
            }
        }
    }
    panic!("point ideal not generated in low degree");
}

/// Decomposes a zero-dimensional scheme into closed points (reducing first).
pub fn decompose_zero_dim(z: &ZeroDimScheme, rng: &mut Seeded) -> Result<Vec<ClosedPoint>> {
    let red = reduced_subscheme(z, rng)?;
    let deg = red.zero_dim_degree()?;
    if deg == 0 {
        return Ok(vec![]);
    }
    let ground = red.field();
    let chart = find_chart(&red, rng)?;
    let alg = &chart.algebra;
    let nv = alg.nvars;
    let d = alg.dim();
    for attempt in 0..(nv as u32 + 8) {
        // separating coordinate: try the chart coordinates first (giving
        // canonical eliminants), then random combinations
        let lam = if (attempt as usize) < nv {
            MPoly::var(&ground, nv, attempt as usize)
        } else {
            let mut acc = MPoly::zero(&ground, nv);
            for v in 0..nv {
                let c = rat_int(rng.gen_range(-9i64..=9));
                acc = acc.add(&MPoly::var(&ground, nv, v).scale(&Fe::from_rat(&ground, c)));
            }
            acc
        };
        let m = alg.minpoly_exact(&lam);
        if m.degree() != Some(d) {
            continue;
        }
        let sf = squarefree_part(&m);
        if sf.degree() != Some(d) {
            continue;
        }
        // coordinates as polynomials in lambda: solve on the Krylov basis
        let mut pows: Vec<Vec<Fe>> = vec![];
        let mut cur = alg.coords_of(&MPoly::one(&ground, nv));
        for _ in 0..d {
            pows.push(cur.clone());
            cur = alg.mul_by(&cur, &lam);
        }
        let mut rows = vec![vec![Fe::zero(&ground); d]; d];
        for (j, v) in pows.iter().enumerate() {
            for i in 0..d {
                rows[i][j] = v[i].clone();
            }
        }
        let mat = Mat::new(&ground, d, rows);
        let coord_polys: Option<Vec<Vec<Fe>>> = (0..nv)
            .map(|v| mat.solve(&alg.coords_of(&MPoly::var(&ground, nv, v))))
            .collect();
        let Some(coord_polys) = coord_polys else {
            continue;
        };
        // factor the eliminant and build one point per factor
        let m_rats: Vec<Rat> = m.c.iter().map(|c| c.as_rat().unwrap()).collect();
        let factors = crate::upoly::factor_rationals(&m_rats);
        let mut points = vec![];
        for (fac, mult) in factors {
            debug_assert_eq!(mult, 1);
            let e = fac.len() - 1;
            let (k1, root) = if e == 1 {
                // monic-normalize: root = -c0/c1
                let r = -&fac[0] / &fac[1];
                (ground.clone(), Fe::from_rat(&ground, r))
            } else {
                let monic: Vec<Rat> = {
                    let lc = fac[e].clone();
                    fac.iter().map(|c| c / &lc).collect()
                };
                let k1 = NumberField::new_unchecked(monic, "s");
                let root = Fe::generator(&k1);
                (k1, root)
            };
            let affine: Vec<Fe> = coord_polys
                .iter()
                .map(|cp| {
                    // evaluate the coordinate polynomial at the root
                    let mut acc = Fe::zero(&k1);
                    for c in cp.iter().rev() {
                        acc = &(&acc * &root) + &c.lift(&k1);
                    }
                    acc
                })
                .collect();
            let coords = normalize_coords(&chart.to_projective(&affine, &k1));
            let prime = point_ideal(&coords, &ground);
            points.push(ClosedPoint {
                field: k1,
                coords,
                prime,
                degree: e,
            });
        }
        // components must cover the scheme degree and satisfy the equations
        let total: usize = points.iter().map(|p| p.degree).sum();
        if total as i64 != deg {
            continue;
        }
        if !points.iter().all(|p| red.contains_point(&p.coords)) {
            continue;
        }
        points.sort_by_key(|p| p.degree);
        return Ok(points);
    }
    Err(Error::GenericityFailure(8))
}

/// Splits a prime ideal on X into a closed point with split field and
/// geometric representative.
pub fn point_split(x: &Surface, prime_gens: &[MPoly], rng: &mut Seeded) -> Result<ClosedPoint> {
    let mut gens = x.forms.clone();
    gens.extend(prime_gens.iter().cloned());
    let z = ZeroDimScheme::new(gens);
    let points = decompose_zero_dim(&z, rng)?;
    match points.len() {
        1 => Ok(points.into_iter().next().unwrap()),
        _ => Err(Error::NotIrreducible),
    }
}

/// Residual intersection: colon of Ideal(X ∩ L) by the ideal of `remove`,
/// with the degree bookkeeping check deg(X∩L) = deg(remove) + deg(residual).
pub fn residual_intersection(
    x: &Surface,
    linear: &[MPoly],
    remove_ideal: &[MPoly],
    remove_degree: i64,
) -> Result<ZeroDimScheme> {
    let mut gens = x.forms.clone();
    gens.extend(linear.iter().cloned());
    residual_of_scheme(&ZeroDimScheme::new(gens), remove_ideal, remove_degree)
}

/// Colon of a zero-dimensional scheme by the ideal of `remove`, with the
/// degree bookkeeping check deg(Z) = deg(remove) + deg(residual).
pub fn residual_of_scheme(
    z: &ZeroDimScheme,
    remove_ideal: &[MPoly],
    remove_degree: i64,
) -> Result<ZeroDimScheme> {
    let total = z.zero_dim_degree()?;
    let mut acc: Option<Vec<MPoly>> = None;
    for g in remove_ideal {
        if g.is_zero() {
            continue;
        }
        let colon: Vec<MPoly> = ideal_intersection(&z.gb, std::slice::from_ref(g))
            .iter()
            .map(|h| h.div_exact(g))
            .collect();
        acc = Some(match acc {
            None => colon,
            Some(a) => ideal_intersection(&a, &colon),
        });
    }
    let res = ZeroDimScheme::new(acc.expect("empty removal ideal"));
    let rdeg = res.zero_dim_degree()?;
    if rdeg + remove_degree != total {
        return Err(Error::NotContained);
    }
    Ok(res)
}

// ---------------------------------------------------------------------------
// point sampling on a surface
// ---------------------------------------------------------------------------

/// Random linear form with small integer coefficients, optionally through a
/// given point (over Q only when the point is rational).
pub fn random_linear_form(field: &Field, nvars: usize, rng: &mut Seeded, bound: i64) -> MPoly {
    loop {
        let coeffs: Vec<i64> = (0..nvars).map(|_| rng.gen_range(-bound..=bound)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let terms: Vec<(Mono, Fe)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(v, &c)| (Mono::var(v), Fe::from_rat(field, rat_int(c))))
            .collect();
        return MPoly::from_terms(field, nvars, terms);
    }
}

/// Samples closed points of degree <= max_degree on X by cutting with random
/// codimension-2 linear spaces and decomposing.
pub fn sample_points(
    x: &Surface,
    rng: &mut Seeded,
    count: usize,
    max_degree: usize,
) -> Result<Vec<ClosedPoint>> {
    let mut out = vec![];
    let nvars = x.nvars();
    for _attempt in 0..(40 * count as u32) {
        if out.len() >= count {
            break;
        }
        // codimension-2 linear space: a line in P^3, a plane in P^4
        let linear: Vec<MPoly> = (0..2)
            .map(|_| random_linear_form(&x.field, nvars, rng, 20))
            .collect();
        let mut gens = x.forms.clone();
        gens.extend(linear.iter().cloned());
        let z = ZeroDimScheme::new(gens);
        if z.zero_dim_degree().is_err() {
            continue;
        }
        let Ok(points) = decompose_zero_dim(&z, rng) else {
            continue;
        };
        for p in points {
            if p.degree <= max_degree && out.len() < count {
                out.push(p);
            }
        }
    }
    if out.len() < count {
        return Err(Error::SamplingExhausted(40 * count as u32));
    }
    Ok(out)
}

/// Samples closed points by cutting with random codimension-2 linear spaces
/// through `base` and removing `base` from the intersection; the residual has
/// degree deg(X) - deg(base), which keeps sample degrees low on quartic
/// surfaces where generic plane sections are irreducible.
pub fn sample_points_through(
    x: &Surface,
    base: &ClosedPoint,
    rng: &mut Seeded,
    count: usize,
    max_degree: usize,
) -> Result<Vec<ClosedPoint>> {
    let linear_at_base: Vec<&MPoly> = base
        .prime
        .iter()
        .filter(|g| g.total_degree() == Some(1))
        .collect();
    if linear_at_base.len() < 2 {
        return Err(Error::SamplingExhausted(0));
    }
    let field = x.field.clone();
    let mut out = vec![];
    for _attempt in 0..(40 * count as u32) {
        if out.len() >= count {
            break;
        }
        // two independent random combinations of the forms vanishing at base
        let mut cuts = vec![];
        for _ in 0..2 {
            let mut acc = MPoly::zero(&field, x.nvars());
            for g in &linear_at_base {
                let c = rat_int(rng.gen_range(-9i64..=9));
                acc = acc.add(&g.scale(&Fe::from_rat(&field, c)));
            }
            cuts.push(acc);
        }
        if cuts.iter().any(|c| c.is_zero()) {
            continue;
        }
        let Ok(res) = residual_intersection(x, &cuts, &base.prime, base.degree as i64) else {
            continue;
        };
        let Ok(points) = decompose_zero_dim(&res, rng) else {
            continue;
        };
        for p in points {
            if p.degree <= max_degree && out.len() < count {
                out.push(p);
            }
        }
    }
    if out.len() < count {
        return Err(Error::SamplingExhausted(40 * count as u32));
    }
    Ok(out)
}
