//! Multivariate polynomials over a number field.

use std::cmp::Ordering;
use std::fmt;

use crate::nf::{Fe, Field};
use crate::rat::{normalize_primitive, Rat};

pub const MAX_VARS: usize = 8;

/// Exponent vector with cached total degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mono {
    pub e: [u16; MAX_VARS],
    pub deg: u16,
}

impl Mono {
    pub fn one() -> Mono {
        Mono {
            e: [0; MAX_VARS],
            deg: 0,
        }
    }

    pub fn var(i: usize) -> Mono {
        let mut m = Mono::one();
        m.e[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(exps: &[u16]) -> Mono {
        let mut m = Mono::one();
        for (i, &x) in exps.iter().enumerate() {
            m.e[i] = x;
            m.deg += x;
        }
        m
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut e = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.e[i] + other.e[i];
        }
        Mono {
            e,
            deg: self.deg + other.deg,
        }
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.e.iter().zip(&other.e).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Mono) -> Mono {
        let mut e = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.e[i] - other.e[i];
        }
        Mono {
            e,
            deg: self.deg - other.deg,
        }
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        let mut e = [0u16; MAX_VARS];
        let mut deg = 0;
        for i in 0..MAX_VARS {
            e[i] = self.e[i].max(other.e[i]);
            deg += e[i];
        }
        Mono { e, deg }
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.e.iter().zip(&other.e).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Term orders. `Elim(k)` eliminates the first `k` variables (block grevlex).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonoOrd {
    GrevLex,
    Lex,
    Elim(usize),
}

impl MonoOrd {
    pub fn cmp(&self, a: &Mono, b: &Mono, nvars: usize) -> Ordering {
        match self {
            MonoOrd::GrevLex => grevlex_cmp(&a.e[..nvars], a.deg, &b.e[..nvars], b.deg),
            MonoOrd::Lex => {
                for i in 0..nvars {
                    match a.e[i].cmp(&b.e[i]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonoOrd::Elim(k) => {
                let da: u16 = a.e[..*k].iter().sum();
                let db: u16 = b.e[..*k].iter().sum();
                match grevlex_cmp(&a.e[..*k], da, &b.e[..*k], db) {
                    Ordering::Equal => grevlex_cmp(
                        &a.e[*k..nvars],
                        a.deg - da,
                        &b.e[*k..nvars],
                        b.deg - db,
                    ),
                    o => o,
                }
            }
        }
    }
}

fn grevlex_cmp(a: &[u16], da: u16, b: &[u16], db: u16) -> Ordering {
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            // last differing exponent: smaller wins
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

/// Multivariate polynomial; terms kept sorted descending in grevlex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    pub field: Field,
    pub nvars: usize,
    pub terms: Vec<(Mono, Fe)>,
}

impl MPoly {
    pub fn zero(field: &Field, nvars: usize) -> MPoly {
        MPoly {
            field: field.clone(),
            nvars,
            terms: vec![],
        }
    }

    pub fn constant(field: &Field, nvars: usize, x: Fe) -> MPoly {
        let mut p = MPoly::zero(field, nvars);
        if !x.is_zero() {
            p.terms.push((Mono::one(), x));
        }
        p
    }

    pub fn one(field: &Field, nvars: usize) -> MPoly {
        MPoly::constant(field, nvars, Fe::one(field))
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> MPoly {
        assert!(i < nvars);
        MPoly {
            field: field.clone(),
            nvars,
            terms: vec![(Mono::var(i), Fe::one(field))],
        }
    }

    pub fn from_terms(field: &Field, nvars: usize, terms: Vec<(Mono, Fe)>) -> MPoly {
        let mut p = MPoly {
            field: field.clone(),
            nvars,
            terms,
        };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        let nv = self.nvars;
        self.terms
            .sort_by(|a, b| MonoOrd::GrevLex.cmp(&b.0, &a.0, nv));
        let mut out: Vec<(Mono, Fe)> = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms.drain(..) {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = &last.1 + &c;
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        self.terms = out;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u16> {
        self.terms.iter().map(|(m, _)| m.deg).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.deg == m0.deg),
        }
    }

    pub fn lead(&self) -> Option<&(Mono, Fe)> {
        self.terms.first()
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.e[var]).max().unwrap_or(0)
    }

    pub fn coeff_of(&self, m: &Mono) -> Fe {
        for (mm, c) in &self.terms {
            if mm == m {
                return c.clone();
            }
        }
        Fe::zero(&self.field)
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        MPoly::from_terms(&self.field, self.nvars, terms)
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, x: &Fe) -> MPoly {
        if x.is_zero() {
            return MPoly::zero(&self.field, self.nvars);
        }
        MPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, c * x)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(&self.field, self.nvars);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                terms.push((m1.mul(m2), c1 * c2));
            }
        }
        MPoly::from_terms(&self.field, self.nvars, terms)
    }

    pub fn mul_term(&self, m: &Mono, c: &Fe) -> MPoly {
        MPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: usize) -> MPoly {
        let mut acc = MPoly::one(&self.field, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> MPoly {
        let mut terms = vec![];
        for (m, c) in &self.terms {
            if m.e[var] == 0 {
                continue;
            }
            let mut m2 = *m;
            m2.e[var] -= 1;
            m2.deg -= 1;
            terms.push((m2, c.mul_rat(&Rat::from_integer(m.e[var].into()))));
        }
        MPoly::from_terms(&self.field, self.nvars, terms)
    }

    pub fn eval(&self, point: &[Fe]) -> Fe {
        assert_eq!(point.len(), self.nvars);
        let field = if let Some(p) = point.iter().find(|p| !p.field().is_q()) {
            p.field().clone()
        } else {
            point
                .first()
                .map(|p| p.field().clone())
                .unwrap_or_else(|| self.field.clone())
        };
        let mut acc = Fe::zero(&field);
        for (m, c) in &self.terms {
            let mut t = c.lift(&field);
            for (i, p) in point.iter().enumerate() {
                if m.e[i] > 0 {
                    t = &t * &p.lift(&field).pow(m.e[i] as u64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitutes each variable by the given polynomial (all in one ring).
    pub fn substitute(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars);
        let field = images
            .iter()
            .find(|p| !p.field.is_q())
            .map(|p| p.field.clone())
            .unwrap_or_else(|| images[0].field.clone());
        let nv = images[0].nvars;
        // cache powers per variable
        let mut powers: Vec<Vec<MPoly>> = (0..self.nvars)
            .map(|i| vec![MPoly::one(&field, nv), lift_poly(&images[i], &field)])
            .collect();
        let mut acc = MPoly::zero(&field, nv);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(&field, nv, c.lift(&field));
            for i in 0..self.nvars {
                let e = m.e[i] as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&powers[i][1]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Applies a linear change of coordinates: x_i -> sum_j m[i][j] * y_j.
    pub fn linear_substitute(&self, m: &[Vec<Fe>], target_field: &Field) -> MPoly {
        let images: Vec<MPoly> = m
            .iter()
            .map(|row| {
                let terms: Vec<(Mono, Fe)> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (Mono::var(j), c.lift(target_field)))
                    .collect();
                MPoly::from_terms(target_field, row.len(), terms)
            })
            .collect();
        self.substitute(&images)
    }

    /// Exact division in the polynomial ring; panics when not divisible.
    pub fn div_exact(&self, d: &MPoly) -> MPoly {
        assert!(!d.is_zero());
        let mut r = self.clone();
        let mut q = MPoly::zero(&self.field, self.nvars);
        let (dm, dc) = d.lead().unwrap();
        let dc_inv = dc.inverse().unwrap();
        while let Some((rm, rc)) = r.lead() {
            assert!(dm.divides(rm), "inexact multivariate division");
            let m = rm.div(dm);
            let c = rc * &dc_inv;
            q.terms.push((m, c.clone()));
            r = r.sub(&d.mul_term(&m, &c));
        }
        q.normalize();
        q
    }

    /// Scale so coefficients (over Q) are coprime integers with positive lead.
    /// Only meaningful over Q; over extensions, normalizes the lead to 1.
    pub fn normalized(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        if self.field.is_q() {
            let mut rats: Vec<Rat> = self
                .terms
                .iter()
                .map(|(_, c)| c.as_rat().unwrap())
                .collect();
            normalize_primitive(&mut rats);
            MPoly {
                field: self.field.clone(),
                nvars: self.nvars,
                terms: self
                    .terms
                    .iter()
                    .zip(rats)
                    .map(|((m, _), r)| (*m, Fe::from_rat(&self.field, r)))
                    .collect(),
            }
        } else {
            let inv = self.lead().unwrap().1.inverse().unwrap();
            self.scale(&inv)
        }
    }

    /// Views the polynomial as univariate in `var` with MPoly coefficients
    /// (in the same ring, with `var`-exponent zero).
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(&self.field, self.nvars); d + 1];
        for (m, c) in &self.terms {
            let k = m.e[var] as usize;
            let mut m2 = *m;
            m2.deg -= m2.e[var];
            m2.e[var] = 0;
            out[k].terms.push((m2, c.clone()));
        }
        for p in &mut out {
            p.normalize();
        }
        out
    }

    /// Rebuilds from univariate-in-`var` coefficients.
    pub fn from_coeffs_in(field: &Field, nvars: usize, var: usize, coeffs: &[MPoly]) -> MPoly {
        let mut terms = vec![];
        for (k, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                let mut m2 = *m;
                m2.e[var] += k as u16;
                m2.deg += k as u16;
                terms.push((m2, c.clone()));
            }
        }
        MPoly::from_terms(field, nvars, terms)
    }
}

/// Lifts all coefficients into `field` (Q into an extension, or identity).
pub fn lift_poly(p: &MPoly, field: &Field) -> MPoly {
    if p.field == *field {
        return p.clone();
    }
    MPoly {
        field: field.clone(),
        nvars: p.nvars,
        terms: p.terms.iter().map(|(m, c)| (*m, c.lift(field))).collect(),
    }
}

/// Resultant of f and g with respect to `var`, by fraction-free (Bareiss)
/// elimination of the Sylvester matrix. Coefficient rows are laid out in
/// ascending degree with f's rows on top, so Res(x - a, x - b) = b - a.
pub fn resultant(f: &MPoly, g: &MPoly, var: usize) -> MPoly {
    let field = &f.field;
    let nv = f.nvars;
    let fc = f.coeffs_in(var);
    let gc = g.coeffs_in(var);
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    if m == 0 && n == 0 {
        return MPoly::one(field, nv);
    }
    if f.is_zero() || g.is_zero() {
        return MPoly::zero(field, nv);
    }
    if m == 0 {
        return fc[0].pow(n);
    }
    if n == 0 {
        return gc[0].pow(m);
    }
    let size = m + n;
    let mut mat: Vec<Vec<MPoly>> = vec![vec![MPoly::zero(field, nv); size]; size];
    for i in 0..n {
        for (k, c) in fc.iter().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in gc.iter().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    bareiss_determinant(mat, field, nv)
}

/// Fraction-free determinant; exact divisions stay in the polynomial ring.
fn bareiss_determinant(mut m: Vec<Vec<MPoly>>, field: &Field, nv: usize) -> MPoly {
    let n = m.len();
    let mut sign = false;
    let mut prev = MPoly::one(field, nv);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return MPoly::zero(field, nv),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.div_exact(&prev);
            }
            m[i][k] = MPoly::zero(field, nv);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// Pretty-printing with the given variable names.
pub fn format_mpoly(p: &MPoly, vars: &[&str]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms.iter().enumerate() {
        let cs = format!("{c}");
        let neg = cs.starts_with('-');
        let abs = if neg { cs[1..].to_string() } else { cs };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut mono = String::new();
        for v in 0..p.nvars {
            match m.e[v] {
                0 => {}
                1 => {
                    if !mono.is_empty() {
                        mono.push('*');
                    }
                    mono.push_str(vars[v]);
                }
                e => {
                    if !mono.is_empty() {
                        mono.push('*');
                    }
                    mono.push_str(&format!("{}^{}", vars[v], e));
                }
            }
        }
        let coef_needed = abs != "1" || mono.is_empty();
        let wrap = abs.contains(' ');
        if coef_needed {
            if wrap {
                out.push_str(&format!("({abs})"));
            } else {
                out.push_str(&abs);
            }
            if !mono.is_empty() {
                out.push('*');
            }
        }
        out.push_str(&mono);
    }
    out
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", format_mpoly(self, &refs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::NumberField;
    use crate::rat::rat_int;

    fn q() -> Field {
        NumberField::rationals()
    }

    fn x(i: usize) -> MPoly {
        MPoly::var(&q(), 3, i)
    }

    fn c(v: i64) -> MPoly {
        MPoly::constant(&q(), 3, Fe::from_rat(&q(), rat_int(v)))
    }

    #[test]
    fn grevlex_ordering() {
        // x^2 y > x y^2 in grevlex with x > y
        let a = Mono::from_exps(&[2, 1, 0]);
        let b = Mono::from_exps(&[1, 2, 0]);
        assert_eq!(MonoOrd::GrevLex.cmp(&a, &b, 3), Ordering::Greater);
        // x z < y^2 in grevlex (same degree, last diff: z exponent larger -> smaller)
        let a = Mono::from_exps(&[1, 0, 1]);
        let b = Mono::from_exps(&[0, 2, 0]);
        assert_eq!(MonoOrd::GrevLex.cmp(&a, &b, 3), Ordering::Less);
    }

    #[test]
    fn arithmetic_and_division() {
        let f = x(0).add(&x(1)); // x + y
        let g = x(0).sub(&x(1)); // x - y
        let prod = f.mul(&g);
        let expect = x(0).mul(&x(0)).sub(&x(1).mul(&x(1)));
        assert_eq!(prod, expect);
        assert_eq!(prod.div_exact(&f), g);
    }

    #[test]
    fn resultant_linear_convention() {
        // Res(x - a, x - b) = b - a with a = 2, b = 5 constants
        let f = x(0).sub(&c(2));
        let g = x(0).sub(&c(5));
        let r = resultant(&f, &g, 0);
        assert_eq!(r, c(3));
    }

    #[test]
    fn resultant_quadratics() {
        // Res(x^2 - 2, x^2 - 3) = 1
        let f = x(0).mul(&x(0)).sub(&c(2));
        let g = x(0).mul(&x(0)).sub(&c(3));
        assert_eq!(resultant(&f, &g, 0), c(1));
    }

    #[test]
    fn resultant_with_one() {
        let f = x(0).pow(3).add(&x(1).scale(&Fe::from_rat(&q(), rat_int(7))));
        assert_eq!(resultant(&f, &c(1), 0), c(1));
    }

    #[test]
    fn resultant_common_root() {
        // Res((x-y)(x+1), (x-y)(x+2)) = 0 as polynomials in x over Q[y]
        let f = x(0).sub(&x(1)).mul(&x(0).add(&c(1)));
        let g = x(0).sub(&x(1)).mul(&x(0).add(&c(2)));
        assert!(resultant(&f, &g, 0).is_zero());
    }

    #[test]
    fn substitution_and_eval() {
        let f = x(0).mul(&x(0)).add(&x(1).scale(&Fe::from_rat(&q(), rat_int(3))));
        let images = vec![x(1).clone(), x(2).clone(), x(0).clone()];
        let g = f.substitute(&images);
        // f(y, z, x) = y^2 + 3z
        let expect = x(1).mul(&x(1)).add(&x(2).scale(&Fe::from_rat(&q(), rat_int(3))));
        assert_eq!(g, expect);
        let p = vec![
            Fe::from_rat(&q(), rat_int(2)),
            Fe::from_rat(&q(), rat_int(1)),
            Fe::from_rat(&q(), rat_int(0)),
        ];
        assert_eq!(f.eval(&p), Fe::from_rat(&q(), rat_int(7)));
    }

    #[test]
    fn homogeneity() {
        assert!(x(0).mul(&x(1)).add(&x(2).mul(&x(2))).is_homogeneous());
        assert!(!x(0).add(&c(1)).is_homogeneous());
    }
}
