//! Factorization of birational selfmaps of a minimal cubic surface into
//! Geiser and Bertini involutions followed by a linear automorphism:
//! find a maximal centre in the base locus, untwist, repeat.

use crate::error::{Error, Result};
use crate::involution::{
    bertini_involution, geiser_involution, InvolutionKind, InvolutionResult,
};
use crate::linalg::Mat;
use crate::linsys::verify_multiplicity;
use crate::maps::{
    interpolate_map, map_base_points, map_compose, maps_equal_on_surface, BirationalMap,
};
use crate::mpoly::{MPoly, Mono};
use crate::scheme::{ClosedPoint, Seeded, Surface};

/// One untwisting step: the involution used and the degree drop it achieved.
#[derive(Clone, Debug)]
pub struct LinkRecord {
    pub kind: InvolutionKind,
    pub centre: ClosedPoint,
    pub involution: InvolutionResult,
    pub degree_before: u16,
    pub degree_after: u16,
}

#[derive(Clone, Debug)]
pub struct FactorizationResult {
    pub links: Vec<LinkRecord>,
    pub terminal_automorphism: Mat,
    pub original_map: BirationalMap,
}

/// Reduces a map to a single stage of known degree by interpolating at
/// increasing candidate degrees; the first success is the reduced degree.
pub fn reduce_map(x: &Surface, map: &BirationalMap, rng: &mut Seeded) -> Result<BirationalMap> {
    if map.stages.len() == 1 && map.declared_degree.is_some() {
        return Ok(map.clone());
    }
    let cap: u16 = map.stage_degrees().iter().product::<u16>().max(1);
    // a generic composition reduces to exactly the product of the stage
    // degrees, so try that first before sweeping the smaller candidates
    let candidates = std::iter::once(cap).chain(1..cap);
    let mut tried = vec![];
    for n in candidates {
        let (ok, forms) = interpolate_map(x, map, n, rng)?;
        if ok {
            let mut m = BirationalMap::from_stage(x, forms)?;
            m.declared_degree = Some(n);
            return Ok(m);
        }
        tried.push(n as usize);
    }
    Err(Error::InterpolationFailedAtAllCandidates(tried))
}

/// True iff the centre's multiplicity in the map's reduced forms exceeds the
/// declared degree.
pub fn is_maximal_centre(
    x: &Surface,
    p: &ClosedPoint,
    map: &BirationalMap,
    rng: &mut Seeded,
) -> Result<bool> {
    let n = map
        .declared_degree
        .ok_or_else(|| Error::Validation("map degree not declared".into()))? as usize;
    verify_multiplicity(&map.stages[0], x, p, n + 1, rng)
}

/// Finds a maximal centre in the base locus of a reduced selfmap of a cubic:
/// degree-2 candidates first, then degree-1. Returns None for degree-1 maps.
pub fn find_maximal_centre(
    x: &Surface,
    map: &BirationalMap,
    check: bool,
    rng: &mut Seeded,
) -> Result<Option<ClosedPoint>> {
    let n = map
        .declared_degree
        .ok_or_else(|| Error::Validation("map degree not declared".into()))? as usize;
    if n == 1 {
        return Ok(None);
    }
    let points = map_base_points(map, rng)?;
    for want in [2usize, 1] {
        for p in points.iter().filter(|p| p.degree == want) {
            if !check || is_maximal_centre(x, p, map, rng)? {
                return Ok(Some(p.clone()));
            }
        }
    }
    Err(Error::NoMaximalCentre(n))
}

/// Precomposes the map with the involution at the centre and interpolates the
/// result at the candidate degrees of the drop law (Geiser n' = 2n - m,
/// Bertini n' = 5n - 4m), in increasing order of n'.
pub fn untwist_once(
    x: &Surface,
    map: &BirationalMap,
    centre: &ClosedPoint,
    rng: &mut Seeded,
) -> Result<(BirationalMap, LinkRecord)> {
    let n = map
        .declared_degree
        .ok_or_else(|| Error::Validation("map degree not declared".into()))?;
    let d = x.ambient_dim;
    let (kind, inv) = if centre.degree == d - 2 {
        (InvolutionKind::Geiser, geiser_involution(x, centre, rng)?)
    } else {
        (InvolutionKind::Bertini, bertini_involution(x, centre, rng)?)
    };
    let composed = map_compose(&inv.map, map)?;
    // candidate target degrees: n' = 2n - m (Geiser, step 1) or 5n - 4m
    // (Bertini, step 4) for m > n, smallest n' first
    let step = match kind {
        InvolutionKind::Geiser => 1u16,
        InvolutionKind::Bertini => 4,
    };
    let start = if n > step { ((n - 1) % step) + 1 } else { 1 };
    let mut tried = vec![];
    let mut cand = start;
    while cand < n {
        let (ok, forms) = interpolate_map(x, &composed, cand, rng)?;
        if ok {
            let mut next = BirationalMap::from_stage(x, forms)?;
            next.declared_degree = Some(cand);
            let link = LinkRecord {
                kind,
                centre: centre.clone(),
                involution: inv,
                degree_before: n,
                degree_after: cand,
            };
            return Ok((next, link));
        }
        tried.push(cand as usize);
        cand += step;
    }
    Err(Error::InterpolationFailedAtAllCandidates(tried))
}

/// Extracts the matrix of a degree-1 map: column j holds the coefficients of
/// form j, so points transform as row vectors v -> v M.
fn linear_matrix(map: &BirationalMap) -> Result<Mat> {
    let n = map.ambient_dim + 1;
    let field = map.domain_surface.field.clone();
    let mut m = Mat::zero(&field, n, n);
    for (j, f) in map.stages[0].iter().enumerate() {
        if f.total_degree().is_some_and(|d| d > 1) {
            return Err(Error::Validation("terminal map is not linear".into()));
        }
        for a in 0..n {
            m.rows[a][j] = f.coeff_of(&Mono::var(a));
        }
    }
    if m.inverse().is_none() {
        return Err(Error::Validation("terminal matrix is singular".into()));
    }
    Ok(m)
}

/// Factorizes a birational selfmap of a cubic surface into involutions and a
/// terminal linear automorphism, verifying the round trip on samples.
pub fn factorize(
    x: &Surface,
    map: &BirationalMap,
    check_centres: bool,
    rng: &mut Seeded,
) -> Result<FactorizationResult> {
    let mut current = reduce_map(x, map, rng)?;
    let mut links: Vec<LinkRecord> = vec![];
    let bound = current.declared_degree.unwrap() as usize;
    while current.declared_degree.unwrap() > 1 {
        if links.len() > bound {
            return Err(Error::NonTerminating(
                links.len(),
                current.declared_degree.unwrap() as usize,
            ));
        }
        let n = current.declared_degree.unwrap();
        let centre = find_maximal_centre(x, &current, check_centres, rng)?
            .ok_or(Error::NoMaximalCentre(n as usize))?;
        let (next, link) = untwist_once(x, &current, &centre, rng)?;
        if link.degree_after >= link.degree_before {
            return Err(Error::NonTerminating(
                link.degree_before as usize,
                link.degree_after as usize,
            ));
        }
        links.push(link);
        current = next;
    }
    let terminal = linear_matrix(&current)?;
    // round trip: original = terminal o eps_r o ... o eps_1 as maps on X
    let mut rebuilt_stages: Vec<Vec<MPoly>> = links
        .iter()
        .map(|l| l.involution.map.stages[0].clone())
        .collect();
    rebuilt_stages.push(current.stages[0].clone());
    let rebuilt = BirationalMap::new_unchecked(x.ambient_dim, x.clone(), rebuilt_stages, None);
    if !maps_equal_on_surface(x, &rebuilt, map, rng)? {
        return Err(Error::Validation(
            "factorization round trip failed".into(),
        ));
    }
    Ok(FactorizationResult {
        links,
        terminal_automorphism: terminal,
        original_map: map.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::involution::geiser_involution;
    use crate::mpoly::MPoly;
    use crate::nf::{Fe, Field, NumberField};
    use crate::rat::rat_int;
    use crate::scheme::seeded_rng;

    fn q() -> Field {
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

    fn geiser_map(x: &Surface, rng: &mut Seeded) -> BirationalMap {
        let p =
            ClosedPoint::rational(&q(), vec![rat_int(1), rat_int(-1), rat_int(-1), rat_int(1)]);
        let inv = geiser_involution(x, &p, rng).unwrap();
        let mut m = inv.map;
        m.declared_degree = Some(2);
        m
    }

    #[test]
    fn identity_factorizes_trivially() {
        let x = paper_cubic();
        let mut rng = seeded_rng(41);
        let mut id = BirationalMap::identity(&x);
        id.declared_degree = Some(1);
        let fac = factorize(&x, &id, false, &mut rng).unwrap();
        assert!(fac.links.is_empty());
        assert_eq!(
            fac.terminal_automorphism.rows,
            Mat::identity(&q(), 4).rows
        );
    }

    #[test]
    fn geiser_untwists_at_its_own_centre() {
        let x = paper_cubic();
        let mut rng = seeded_rng(43);
        let g = geiser_map(&x, &mut rng);
        let centre = find_maximal_centre(&x, &g, true, &mut rng)
            .unwrap()
            .expect("centre found");
        assert_eq!(centre.degree, 1);
        let (next, link) = untwist_once(&x, &g, &centre, &mut rng).unwrap();
        assert_eq!(link.degree_before, 2);
        assert_eq!(link.degree_after, 1);
        assert_eq!(next.declared_degree, Some(1));
        let fac = factorize(&x, &g, false, &mut rng).unwrap();
        assert_eq!(fac.links.len(), 1);
        assert_eq!(fac.links[0].kind, InvolutionKind::Geiser);
    }

    #[test]
    fn squared_involution_reduces_to_identity() {
        let x = paper_cubic();
        let mut rng = seeded_rng(47);
        let g = geiser_map(&x, &mut rng);
        let gg = map_compose(&g, &g).unwrap();
        let fac = factorize(&x, &gg, false, &mut rng).unwrap();
        assert!(fac.links.is_empty());
        let red = reduce_map(&x, &gg, &mut rng).unwrap();
        assert_eq!(red.declared_degree, Some(1));
    }
}
