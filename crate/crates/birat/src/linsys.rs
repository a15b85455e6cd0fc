//! Linear systems on a surface: complete systems |nA|, imposing multiplicity
//! at a closed point via power series along the blowup (with trace-down of
//! split-field conditions), an independent saturation oracle, and
//! multiplicity verification.

use crate::blowup::{blowup_chart, ord_along_exceptional, BlowupChart, ExcOrder, WSeries};
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, normal_form, saturate, std_monomials_of_degree};
use crate::linalg::Mat;
use crate::mpoly::{lift_poly, MPoly, MonoOrd};
use crate::nf::{Fe, Field};
use crate::rat::{normalize_primitive, Rat};
use crate::scheme::{ClosedPoint, Seeded, Surface};
use crate::upoly::{RatFun, UPoly};

/// A linear subsystem of |nA| given by a basis of degree-n forms over Q,
/// independent modulo the surface ideal.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub surface: Surface,
    pub degree: u16,
    pub basis: Vec<MPoly>,
}

impl LinearSystem {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// The complete system |nA|: standard monomials of degree n modulo the
/// surface ideal.
pub fn complete_linear_system(x: &Surface, n: u16) -> LinearSystem {
    let monos = std_monomials_of_degree(&x.gb, MonoOrd::GrevLex, x.nvars(), n);
    let basis = monos
        .iter()
        .map(|m| MPoly::from_terms(&x.field, x.nvars(), vec![(*m, Fe::one(&x.field))]))
        .collect();
    LinearSystem {
        surface: x.clone(),
        degree: n,
        basis,
    }
}

/// Pullback of each basis form to the chart's normal coordinates as a
/// truncated series in the series variable.
fn basis_series(h: &LinearSystem, chart: &BlowupChart, prec: usize) -> Vec<WSeries> {
    h.basis
        .iter()
        .map(|b| {
            let pulled = lift_poly(b, &chart.field).substitute(&chart.ambient_map);
            crate::blowup::eval_series(
                &pulled,
                &chart.series,
                &chart.field,
                chart.codim,
                chart.codim + 2,
                prec,
            )
        })
        .collect()
}

/// Reduced echelon form over Q of the span of the given coefficient vectors,
/// with rows cleared to coprime integers and positive first entries.
fn normalized_row_space(field: &Field, ncols: usize, rows: Vec<Vec<Fe>>) -> Vec<Vec<Fe>> {
    if rows.is_empty() {
        return vec![];
    }
    let mut m = Mat::new(field, ncols, rows);
    let pivots = m.rref();
    let mut out = vec![];
    for r in m.rows.into_iter().take(pivots.len()) {
        let mut rats: Vec<Rat> = r.iter().map(|c| c.as_rat().unwrap()).collect();
        normalize_primitive(&mut rats);
        out.push(rats.iter().map(|c| Fe::from_rat(field, c.clone())).collect());
    }
    out
}

fn rows_to_system(h: &LinearSystem, rows: Vec<Vec<Fe>>) -> LinearSystem {
    let field = h.surface.field.clone();
    let rows = normalized_row_space(&field, h.basis.len(), rows);
    let basis = rows
        .iter()
        .map(|r| {
            let mut acc = MPoly::zero(&field, h.surface.nvars());
            for (c, b) in r.iter().zip(&h.basis) {
                if !c.is_zero() {
                    acc = acc.add(&b.scale(c));
                }
            }
            acc
        })
        .collect();
    LinearSystem {
        surface: h.surface.clone(),
        degree: h.degree,
        basis,
    }
}

/// H(-mP): the subsystem of sections with multiplicity at least m at P,
/// computed from the first m series coefficients along the blowup of P's
/// representative, traced down to Q.
pub fn impose_multiplicity(
    h: &LinearSystem,
    p: &ClosedPoint,
    m: usize,
    rng: &mut Seeded,
) -> Result<LinearSystem> {
    if m == 0 {
        return Ok(h.clone());
    }
    match impose_multiplicity_at_precision(h, p, m, m, rng) {
        Err(Error::PrecisionExhausted(_)) => impose_multiplicity_at_precision(h, p, m, 2 * m, rng),
        r => r,
    }
}

fn impose_multiplicity_at_precision(
    h: &LinearSystem,
    p: &ClosedPoint,
    m: usize,
    prec: usize,
    rng: &mut Seeded,
) -> Result<LinearSystem> {
    let chart = blowup_chart(&h.surface, p, prec, rng)?;
    let k1 = chart.field.clone();
    let nb = h.basis.len();
    let series = basis_series(h, &chart, m);
    // coefficient q_i of the generic section is sum_j a_j q_i^(j); clearing
    // the common denominator makes each w-coefficient of the numerator one
    // k1-linear condition on a_1..a_N
    let mut rows_k1: Vec<Vec<Fe>> = vec![];
    for i in 0..m {
        let qs: Vec<&RatFun> = series.iter().map(|s| &s.c[i]).collect();
        if qs.iter().all(|q| q.is_zero()) {
            continue;
        }
        let mut den = UPoly::one(&k1);
        for q in &qs {
            let g = den.gcd(&q.den);
            den = den.mul(&q.den.div_exact(&g));
        }
        let nums: Vec<UPoly> = qs
            .iter()
            .map(|q| q.num.mul(&den.div_exact(&q.den)))
            .collect();
        let maxdeg = nums
            .iter()
            .filter_map(|n| n.degree())
            .max()
            .unwrap_or(0);
        for t in 0..=maxdeg {
            let row: Vec<Fe> = nums
                .iter()
                .map(|n| n.c.get(t).cloned().unwrap_or_else(|| Fe::zero(&k1)))
                .collect();
            if row.iter().any(|c| !c.is_zero()) {
                rows_k1.push(row);
            }
        }
    }
    // trace down: expand each k1-entry in the power basis of k1/Q
    let e = k1.degree();
    let ground = h.surface.field.clone();
    let mut rows_q: Vec<Vec<Fe>> = vec![];
    for row in rows_k1 {
        for r in 0..e {
            let qrow: Vec<Fe> = row
                .iter()
                .map(|c| Fe::from_rat(&ground, c.coords()[r].clone()))
                .collect();
            if qrow.iter().any(|c| !c.is_zero()) {
                rows_q.push(qrow);
            }
        }
    }
    let kernel = Mat::new(&ground, nb, rows_q).kernel();
    Ok(rows_to_system(h, kernel))
}

/// Independent oracle: the degree-n part of the saturation of
/// Ideal(X) + Ideal(P)^m, intersected with span(H).
pub fn impose_multiplicity_oracle(h: &LinearSystem, p: &ClosedPoint, m: usize) -> LinearSystem {
    if m == 0 {
        return h.clone();
    }
    let x = &h.surface;
    let field = x.field.clone();
    let nvars = x.nvars();
    // generators of I_P^m: all m-fold products of the point ideal generators
    let mut powers: Vec<MPoly> = vec![MPoly::one(&field, nvars)];
    for _ in 0..m {
        let mut next = vec![];
        for f in &powers {
            for g in &p.prime {
                next.push(f.mul(g));
            }
        }
        powers = dedup_polys(next);
    }
    let mut gens = x.forms.clone();
    gens.extend(powers);
    let gb = groebner_basis(&gens, MonoOrd::GrevLex);
    // the projective scheme is finite, so saturating by one linear form
    // avoiding all its points removes exactly the irrelevant components;
    // a coordinate not vanishing on any conjugate of P works
    let sat_var = (0..nvars)
        .find(|&i| !p.coords[i].is_zero())
        .expect("zero representative");
    let sat = saturate(&gb, &MPoly::var(&field, nvars, sat_var));
    let sat_gb = groebner_basis(&sat, MonoOrd::GrevLex);
    // h in H lies in H(-mP) iff its normal form vanishes; that is linear in
    // the coefficients
    let nfs: Vec<MPoly> = h
        .basis
        .iter()
        .map(|b| normal_form(b, &sat_gb, MonoOrd::GrevLex))
        .collect();
    // collect all monomials appearing in the normal forms
    let mut monos = vec![];
    for f in &nfs {
        for (mono, _) in &f.terms {
            if !monos.contains(mono) {
                monos.push(*mono);
            }
        }
    }
    let rows: Vec<Vec<Fe>> = monos
        .iter()
        .map(|mono| nfs.iter().map(|f| f.coeff_of(mono)).collect())
        .collect();
    let kernel = Mat::new(&field, h.basis.len(), rows).kernel();
    rows_to_system(h, kernel)
}

fn dedup_polys(polys: Vec<MPoly>) -> Vec<MPoly> {
    let mut out: Vec<MPoly> = vec![];
    for p in polys {
        let n = p.normalized();
        if !out.iter().any(|q| q.terms == n.terms) {
            out.push(n);
        }
    }
    out
}

/// True iff the two systems span the same subspace of forms.
pub fn same_system(a: &LinearSystem, b: &LinearSystem) -> bool {
    if a.degree != b.degree || a.basis.len() != b.basis.len() {
        return false;
    }
    // both are normalized reduced-echelon outputs over the same monomial
    // coordinates, so compare the reduced row spaces of their coefficients
    let monos = std_monomials_of_degree(
        &a.surface.gb,
        MonoOrd::GrevLex,
        a.surface.nvars(),
        a.degree,
    );
    let field = a.surface.field.clone();
    let coords = |ls: &LinearSystem| -> Vec<Vec<Fe>> {
        ls.basis
            .iter()
            .map(|f| {
                let nf = normal_form(f, &a.surface.gb, MonoOrd::GrevLex);
                monos.iter().map(|m| nf.coeff_of(m)).collect()
            })
            .collect()
    };
    let ra = normalized_row_space(&field, monos.len(), coords(a));
    let rb = normalized_row_space(&field, monos.len(), coords(b));
    ra == rb
}

/// True iff every form has multiplicity at least m at P's representative.
pub fn verify_multiplicity(
    forms: &[MPoly],
    x: &Surface,
    p: &ClosedPoint,
    m: usize,
    rng: &mut Seeded,
) -> Result<bool> {
    if m == 0 {
        return Ok(true);
    }
    let chart = blowup_chart(x, p, m, rng)?;
    for f in forms {
        match ord_along_exceptional(&chart, f, m - 1)? {
            ExcOrder::Exact(k) if k < m => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::NumberField;
    use crate::rat::rat_int;
    use crate::scheme::{point_split, seeded_rng};

    fn q() -> Field {
        NumberField::rationals()
    }

    fn v(n: usize, i: usize) -> MPoly {
        MPoly::var(&q(), n, i)
    }

    fn cubic() -> Surface {
        let f = v(4, 0)
            .pow(3)
            .add(&v(4, 1).pow(3).scale(&Fe::from_rat(&q(), rat_int(2))))
            .add(&v(4, 2).pow(3).scale(&Fe::from_rat(&q(), rat_int(3))))
            .add(&v(4, 3).pow(3).scale(&Fe::from_rat(&q(), rat_int(4))));
        Surface::new(vec![f]).unwrap()
    }

    fn dp4() -> Surface {
        let x = v(5, 0);
        let y = v(5, 1);
        let z = v(5, 2);
        let t = v(5, 3);
        let s = v(5, 4);
        let f = x
            .mul(&y)
            .sub(&z.mul(&t))
            .add(&x.pow(2).scale(&Fe::from_rat(&q(), rat_int(2))))
            .add(&s.pow(2));
        let g = x
            .pow(2)
            .neg()
            .add(&y.pow(2))
            .sub(&z.pow(2))
            .add(&t.pow(2))
            .sub(&s.pow(2));
        Surface::new(vec![f, g]).unwrap()
    }

    #[test]
    fn complete_system_dimensions() {
        let c = cubic();
        assert_eq!(complete_linear_system(&c, 2).dim(), 10);
        assert_eq!(complete_linear_system(&c, 5).dim(), 46);
        let d = dp4();
        assert_eq!(complete_linear_system(&d, 7).dim(), 113);
    }

    #[test]
    fn geiser_system_on_cubic() {
        let x = cubic();
        let p = ClosedPoint::rational(
            &q(),
            vec![rat_int(1), rat_int(-1), rat_int(-1), rat_int(1)],
        );
        let h = complete_linear_system(&x, 2);
        let mut rng = seeded_rng(7);
        let g = impose_multiplicity(&h, &p, 3, &mut rng).unwrap();
        assert_eq!(g.dim(), 4);
        // oracle agreement
        let o = impose_multiplicity_oracle(&h, &p, 3);
        assert!(same_system(&g, &o));
    }

    #[test]
    fn geiser_system_on_dp4() {
        let x = dp4();
        let mut rng = seeded_rng(9);
        let p = point_split(&x, &[v(5, 0), v(5, 2), v(5, 4)], &mut rng).unwrap();
        let h = complete_linear_system(&x, 3);
        let g = impose_multiplicity(&h, &p, 4, &mut rng).unwrap();
        assert_eq!(g.dim(), 5);
        let o = impose_multiplicity_oracle(&h, &p, 4);
        assert!(same_system(&g, &o));
    }

    #[test]
    fn multiplicity_zero_and_nesting() {
        let x = cubic();
        let p = ClosedPoint::rational(
            &q(),
            vec![rat_int(1), rat_int(-1), rat_int(-1), rat_int(1)],
        );
        let h = complete_linear_system(&x, 2);
        let mut rng = seeded_rng(3);
        let h0 = impose_multiplicity(&h, &p, 0, &mut rng).unwrap();
        assert_eq!(h0.dim(), h.dim());
        let h1 = impose_multiplicity(&h, &p, 1, &mut rng).unwrap();
        assert_eq!(h1.dim(), h.dim() - 1);
        let h2 = impose_multiplicity(&h, &p, 2, &mut rng).unwrap();
        assert!(h2.dim() < h1.dim());
        // nesting: every section with multiplicity 2 has multiplicity 1
        for f in &h2.basis {
            assert!(verify_multiplicity(
                std::slice::from_ref(f),
                &x,
                &p,
                1,
                &mut rng
            )
            .unwrap());
        }
    }

    #[test]
    fn oracle_with_point_off_surface() {
        let x = cubic();
        // (1:0:0:0) is not on the cubic
        let p = ClosedPoint::rational(
            &q(),
            vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)],
        );
        let h = complete_linear_system(&x, 2);
        for m in 1..=3usize {
            let o = impose_multiplicity_oracle(&h, &p, m);
            assert_eq!(o.dim(), h.dim());
        }
    }

    #[test]
    fn verify_multiplicity_basics() {
        let x = cubic();
        let p = ClosedPoint::rational(
            &q(),
            vec![rat_int(1), rat_int(-1), rat_int(-1), rat_int(1)],
        );
        let mut rng = seeded_rng(5);
        // tangent hyperplane has multiplicity exactly 2
        let t = v(4, 0)
            .add(&v(4, 1).scale(&Fe::from_rat(&q(), rat_int(2))))
            .add(&v(4, 2).scale(&Fe::from_rat(&q(), rat_int(3))))
            .add(&v(4, 3).scale(&Fe::from_rat(&q(), rat_int(4))));
        let forms = vec![t];
        assert!(verify_multiplicity(&forms, &x, &p, 2, &mut rng).unwrap());
        assert!(!verify_multiplicity(&forms, &x, &p, 3, &mut rng).unwrap());
        assert!(verify_multiplicity(&forms, &x, &p, 0, &mut rng).unwrap());
    }
}
