use birat::involution::*;
use birat::linsys::*;
use birat::maps::*;
use birat::nf::{Fe, NumberField};
use birat::rat::rat_int;
use birat::sarkisov::*;
use birat::scheme::*;
use birat::mpoly::MPoly;
use std::time::Instant;

fn q() -> birat::nf::Field {
    NumberField::rationals()
}
fn v(n: usize, i: usize) -> MPoly {
    MPoly::var(&q(), n, i)
}
fn paper_cubic() -> Surface {
    let f = v(4, 0)
        .pow(3)
        .add(&v(4, 1).pow(3).scale(&Fe::from_rat(&q(), rat_int(2))))
        .add(&v(4, 2).pow(3).scale(&Fe::from_rat(&q(), rat_int(3))))
        .add(&v(4, 3).pow(3).scale(&Fe::from_rat(&q(), rat_int(4))));
    Surface::new(vec![f]).unwrap()
}
fn paper_dp4() -> Surface {
    let x = v(5, 0);
    let y = v(5, 1);
    let z = v(5, 2);
    let t = v(5, 3);
    let s = v(5, 4);
    let f1 = x
        .mul(&y)
        .sub(&z.mul(&t))
        .add(&x.pow(2).scale(&Fe::from_rat(&q(), rat_int(2))))
        .add(&s.pow(2));
    let f2 = y
        .pow(2)
        .sub(&x.pow(2))
        .sub(&z.pow(2))
        .add(&t.pow(2))
        .sub(&s.pow(2));
    Surface::new(vec![f1, f2]).unwrap()
}

#[test]
fn timing_dp4_bertini() {
    let x = paper_dp4();
    let mut rng = seeded_rng(101);
    let t0 = Instant::now();
    // centre: degree-3 residual of X cap V(x+y-z, s)
    let l1 = v(5, 0).add(&v(5, 1)).sub(&v(5, 2));
    let l2 = v(5, 4);
    let mut gens = x.forms.clone();
    gens.extend([l1, l2]);
    let z = ZeroDimScheme::new(gens);
    let pts = decompose_zero_dim(&z, &mut rng).unwrap();
    println!("decomp degrees: {:?} in {:?}", pts.iter().map(|p| p.degree).collect::<Vec<_>>(), t0.elapsed());
    let centre = pts.into_iter().find(|p| p.degree == 3).unwrap();
    let t0 = Instant::now();
    let inv = bertini_involution(&x, &centre, &mut rng).unwrap();
    println!("bertini built in {:?}, degrees {:?}", t0.elapsed(), inv.map.stage_degrees());
    let t0 = Instant::now();
    assert!(is_surface_selfmap(&x, &inv.map, &mut rng).unwrap());
    println!("selfmap check in {:?}", t0.elapsed());
}

#[test]
fn timing_cubic_chain() {
    let x = paper_cubic();
    let mut rng = seeded_rng(103);
    let l1 = v(4, 1).add(&v(4, 2)).add(&v(4, 3));
    let l2 = v(4, 0).sub(&v(4, 2)).add(&v(4, 3));
    let mut gens = x.forms.clone();
    gens.extend([l1, l2]);
    let zz = ZeroDimScheme::new(gens);
    let pts = decompose_zero_dim(&zz, &mut rng).unwrap();
    let qpt = pts.into_iter().find(|p| p.degree == 2).unwrap();
    let t0 = Instant::now();
    let b = bertini_involution(&x, &qpt, &mut rng).unwrap();
    println!("cubic bertini in {:?}", t0.elapsed());
    let p1 = ClosedPoint::rational(&q(), vec![rat_int(1), rat_int(-1), rat_int(-1), rat_int(1)]);
    let g = geiser_involution(&x, &p1, &mut rng).unwrap();
    let h = map_compose(&b.map, &g.map).unwrap();
    let t0 = Instant::now();
    let (ok, forms) = interpolate_map(&x, &h, 10, &mut rng).unwrap();
    println!("interpolate deg 10: ok={ok} in {:?}", t0.elapsed());
    assert!(ok);
    let mut hred = BirationalMap::from_stage(&x, forms).unwrap();
    hred.declared_degree = Some(10);
    let t0 = Instant::now();
    let base = map_base_scheme(&hred);
    let deg = base.zero_dim_degree().unwrap();
    println!("base degree {deg} in {:?}", t0.elapsed());
    let t0 = Instant::now();
    let centre = find_maximal_centre(&x, &hred, false, &mut rng).unwrap().unwrap();
    println!("max centre degree {} in {:?}", centre.degree, t0.elapsed());
    let t0 = Instant::now();
    let (h1, link) = untwist_once(&x, &hred, &centre, &mut rng).unwrap();
    println!("untwist1 {} -> {} in {:?}", link.degree_before, link.degree_after, t0.elapsed());
    let t0 = Instant::now();
    let centre2 = find_maximal_centre(&x, &h1, false, &mut rng).unwrap().unwrap();
    let (h2, link2) = untwist_once(&x, &h1, &centre2, &mut rng).unwrap();
    println!("untwist2 {} -> {} in {:?}; forms {:?}", link2.degree_before, link2.degree_after, t0.elapsed(), h2.stages[0]);
}

#[test]
fn timing_oracle_heavy() {
    let x = paper_dp4();
    let mut rng = seeded_rng(107);
    let l1 = v(5, 0).add(&v(5, 1)).sub(&v(5, 2));
    let l2 = v(5, 4);
    let mut gens = x.forms.clone();
    gens.extend([l1, l2]);
    let z = ZeroDimScheme::new(gens);
    let pts = decompose_zero_dim(&z, &mut rng).unwrap();
    let centre = pts.into_iter().find(|p| p.degree == 3).unwrap();
    let h = complete_linear_system(&x, 7);
    let t0 = Instant::now();
    let fast = impose_multiplicity(&h, &centre, 8, &mut rng).unwrap();
    println!("impose m=8 dim {} in {:?}", fast.dim(), t0.elapsed());
    let t0 = Instant::now();
    let oracle = impose_multiplicity_oracle(&h, &centre, 8);
    println!("oracle m=8 dim {} in {:?}", oracle.dim(), t0.elapsed());
    assert!(same_system(&fast, &oracle));
}

#[test]
fn dbg_crit7() {
    use birat::involution::*;
    let x = paper_cubic();
    let mut rng = seeded_rng(31);
    let p1 = ClosedPoint::rational(&q(), vec![rat_int(1), rat_int(-1), rat_int(-1), rat_int(1)]);
    let p2 = ClosedPoint::rational(&q(), vec![rat_int(3), rat_int(1), rat_int(1), rat_int(-2)]);
    let l1 = v(4, 1).add(&v(4, 2)).add(&v(4, 3));
    let l2 = v(4, 0).sub(&v(4, 2)).add(&v(4, 3));
    let mut gens = x.forms.clone();
    gens.extend([l1, l2]);
    let pts = decompose_zero_dim(&ZeroDimScheme::new(gens), &mut rng).unwrap();
    let bq = pts.into_iter().find(|p| p.degree == 2).unwrap();
    let b = bertini_involution(&x, &bq, &mut rng).unwrap();
    let g1 = geiser_involution(&x, &p1, &mut rng).unwrap();
    let e3 = map_evaluate(&g1.map, &p2.coords).unwrap();
    println!("p3 = {:?}", e3.iter().map(|c| c.as_rat().unwrap()).collect::<Vec<_>>());
    let e4 = map_evaluate(&b.map, &p2.coords).unwrap();
    println!("p4 = {:?}", e4.iter().map(|c| c.as_rat().unwrap()).collect::<Vec<_>>());
}

#[test]
fn dbg_crit7b() {
    use birat::involution::*;
    let x = paper_cubic();
    let mut rng = seeded_rng(31);
    let p1 = ClosedPoint::rational(&q(), vec![rat_int(1), rat_int(-1), rat_int(-1), rat_int(1)]);
    let p2 = ClosedPoint::rational(&q(), vec![rat_int(3), rat_int(1), rat_int(1), rat_int(-2)]);
    let l1 = v(4, 1).add(&v(4, 2)).add(&v(4, 3));
    let l2 = v(4, 0).sub(&v(4, 2)).add(&v(4, 3));
    let mut gens = x.forms.clone();
    gens.extend([l1, l2]);
    let pts = decompose_zero_dim(&ZeroDimScheme::new(gens), &mut rng).unwrap();
    let bq = pts.into_iter().find(|p| p.degree == 2).unwrap();
    let b = bertini_involution(&x, &bq, &mut rng).unwrap();
    let g2 = geiser_involution(&x, &p2, &mut rng).unwrap();
    let e3 = map_evaluate(&b.map, &p1.coords).unwrap();
    println!("B(p1) = {:?}", e3.iter().map(|c| c.as_rat().unwrap().to_string()).collect::<Vec<_>>());
    let e4 = map_evaluate(&g2.map, &e3).unwrap();
    println!("G2(B(p1)) = {:?}", e4.iter().map(|c| c.as_rat().unwrap().to_string()).collect::<Vec<_>>());
}

#[test]
fn dbg_crit7c() {
    use birat::involution::*;
    let x = paper_cubic();
    let mut rng = seeded_rng(31);
    let p1 = ClosedPoint::rational(&q(), vec![rat_int(1), rat_int(-1), rat_int(-1), rat_int(1)]);
    let p2 = ClosedPoint::rational(&q(), vec![rat_int(3), rat_int(1), rat_int(1), rat_int(-2)]);
    let l1 = v(4, 1).add(&v(4, 2)).add(&v(4, 3));
    let l2 = v(4, 0).sub(&v(4, 2)).add(&v(4, 3));
    let mut gens = x.forms.clone();
    gens.extend([l1, l2]);
    let pts = decompose_zero_dim(&ZeroDimScheme::new(gens), &mut rng).unwrap();
    let bq = pts.into_iter().find(|p| p.degree == 2).unwrap();
    let b = bertini_involution(&x, &bq, &mut rng).unwrap();
    let p3 = ClosedPoint::rational(&q(),
        map_evaluate(&b.map, &p1.coords).unwrap().iter().map(|c| c.as_rat().unwrap()).collect());
    let centres = [p1, p2, p3];
    let gs: Vec<_> = centres.iter().map(|p| geiser_involution(&x, p, &mut rng).unwrap()).collect();
    let mut maps: Vec<(String, BirationalMap)> = vec![("B".into(), b.map.clone())];
    for (i, g) in gs.iter().enumerate() { maps.push((format!("G{i}"), g.map.clone())); }
    for a in 0..3 { for c in 0..3 { if a != c {
        maps.push((format!("G{a}*G{c}"), map_compose(&gs[a].map, &gs[c].map).unwrap()));
    }}}
    for (name, m) in &maps {
        let t0 = Instant::now();
        let red = reduce_map(&x, m, &mut rng).unwrap();
        let n = red.declared_degree.unwrap() as i64;
        let centre = find_maximal_centre(&x, &red, false, &mut rng).unwrap().unwrap();
        let mut mm = n;
        while birat::linsys::verify_multiplicity(&red.stages[0], &x, &centre, (mm + 1) as usize, &mut rng).unwrap() { mm += 1; }
        let (_, link) = untwist_once(&x, &red, &centre, &mut rng).unwrap();
        println!("{name}: n={n} centre_deg={} m={mm} kind={:?} n'={} [{:?}]",
            centre.degree, link.kind, link.degree_after, t0.elapsed());
    }
}

#[test]
fn dbg_crit4_deg2_sampling() {
    use birat::rat::Rat;
    use rand::Rng;
    let field = q();
    for seed in [19u64, 20, 21] {
        let mut rng = seeded_rng(seed);
        for inst in 0..3 {
            // random smooth dP4 through (1:...:1), same as acceptance
            let nv = 5;
            let x = loop {
                let forms: Vec<MPoly> = (0..2)
                    .map(|_| {
                        let mut f = MPoly::zero(&field, nv);
                        for m in birat::groebner::monomials_of_degree(nv, 2) {
                            let c: i64 = rng.gen_range(-3..=3);
                            if c != 0 {
                                f = f.add(&MPoly::from_terms(&field, nv, vec![(m, Fe::from_rat(&field, rat_int(c)))]));
                            }
                        }
                        let ones: Vec<Fe> = (0..nv).map(|_| Fe::one(&field)).collect();
                        let val = f.eval(&ones);
                        f.sub(&v(nv, 0).pow(2).scale(&val))
                    })
                    .collect();
                let Ok(x) = Surface::new(forms) else { continue };
                break x;
            };
            let base = ClosedPoint::rational(&field, vec![Rat::from_integer(1.into()); nv]);
            let mut histo = [0usize; 5];
            let mut errs = 0usize;
            for _ in 0..15 {
                match sample_points_through(&x, &base, &mut rng, 3, 3) {
                    Ok(pts) => for p in pts { histo[p.degree.min(4)] += 1; },
                    Err(_) => errs += 1,
                }
            }
            println!("seed {seed} inst {inst}: degree histo {:?} errs {errs}", &histo[1..4]);
        }
    }
}
