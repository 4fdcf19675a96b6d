#![allow(dead_code)]

use std::sync::Arc;

use coverforge::cover::BranchDatum;
use coverforge::group::{FiniteGroup, GroupElement};
use rand::Rng;

/// Permutation groups with their known irreducible degrees (sorted).
pub struct CatalogGroup {
    pub name: &'static str,
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    pub order: usize,
    pub irreducible_degrees: Vec<usize>,
}

pub fn permutation_catalog() -> Vec<CatalogGroup> {
    let g = |name, degree, generators: &[&[usize]], order, degrees: &[usize]| CatalogGroup {
        name,
        degree,
        generators: generators.iter().map(|x| x.to_vec()).collect(),
        order,
        irreducible_degrees: degrees.to_vec(),
    };
    vec![
        g("S3", 3, &[&[2, 1, 3], &[2, 3, 1]], 6, &[1, 1, 2]),
        g("V4", 4, &[&[2, 1, 4, 3], &[3, 4, 1, 2]], 4, &[1, 1, 1, 1]),
        g("D4", 4, &[&[2, 3, 4, 1], &[3, 2, 1, 4]], 8, &[1, 1, 1, 1, 2]),
        g("Q8", 8, &[&[2, 4, 6, 7, 3, 8, 1, 5], &[3, 5, 4, 8, 7, 2, 6, 1]], 8, &[1, 1, 1, 1, 2]),
        g("C2^3", 6, &[&[2, 1, 3, 4, 5, 6], &[1, 2, 4, 3, 5, 6], &[1, 2, 3, 4, 6, 5]], 8, &[1; 8]),
        g("C3xC3", 6, &[&[2, 3, 1, 4, 5, 6], &[1, 2, 3, 5, 6, 4]], 9, &[1; 9]),
        g("D5", 5, &[&[2, 3, 4, 5, 1], &[1, 5, 4, 3, 2]], 10, &[1, 1, 2, 2]),
        g("A4", 4, &[&[2, 3, 1, 4], &[2, 1, 4, 3]], 12, &[1, 1, 1, 3]),
        g("S3xC2", 5, &[&[2, 3, 1, 4, 5], &[2, 1, 3, 4, 5], &[1, 2, 3, 5, 4]], 12, &[1, 1, 1, 1, 2, 2]),
        g("Dic3", 7, &[&[2, 3, 1, 4, 5, 6, 7], &[1, 3, 2, 5, 6, 7, 4]], 12, &[1, 1, 1, 1, 2, 2]),
        g("F20", 5, &[&[2, 3, 4, 5, 1], &[1, 3, 5, 2, 4]], 20, &[1, 1, 1, 1, 4]),
        g("S4", 4, &[&[2, 1, 3, 4], &[2, 3, 4, 1]], 24, &[1, 1, 2, 3, 3]),
        g("SL(2,3)", 8, &[&[4, 8, 3, 7, 2, 6, 1, 5], &[6, 3, 1, 7, 4, 2, 8, 5]], 24, &[1, 1, 1, 2, 2, 2, 3]),
    ]
}

pub fn catalog_group(name: &str) -> Arc<FiniteGroup> {
    let c = permutation_catalog().into_iter().find(|c| c.name == name).expect("catalog name");
    Arc::new(FiniteGroup::permutation(c.degree, &c.generators).unwrap())
}

fn random_element<R: Rng>(rng: &mut R, g: &FiniteGroup, allow_identity: bool) -> GroupElement {
    loop {
        let x = g.element(rng.gen_range(0..g.order())).unwrap();
        if allow_identity || x != g.identity() {
            return x;
        }
    }
}

/// A random valid datum with `r` branches over a base of the given genus,
/// or `None` if the attempts ran out.
pub fn random_datum<R: Rng>(rng: &mut R, g: &Arc<FiniteGroup>, base_genus: usize, r: usize) -> Option<BranchDatum> {
    for _ in 0..200 {
        let handles: Vec<GroupElement> = (0..2 * base_genus).map(|_| random_element(rng, g, true)).collect();
        let commutators = g.product(handles.chunks(2).map(|ab| g.commutator(ab[0], ab[1])));
        let mut monodromy: Vec<GroupElement> = (0..r.saturating_sub(1)).map(|_| random_element(rng, g, false)).collect();
        if r > 0 {
            let prefix = g.product(monodromy.iter().copied());
            // prefix * closing * commutators = 1
            let closing = g.mul(g.inv(prefix), g.inv(commutators));
            if closing == g.identity() {
                continue;
            }
            monodromy.push(closing);
        } else if commutators != g.identity() {
            continue;
        }
        let d = BranchDatum::from_monodromy(g.clone(), base_genus, handles, &monodromy).ok()?;
        if d.validate().is_valid() {
            return Some(d);
        }
    }
    None
}

/// `2g - 2 = |G|(2g' - 2) + sum (|G| - |G|/m)`, with `m` the order found by repeated multiplication.
pub fn oracle_genus(d: &BranchDatum) -> i64 {
    let g = d.group();
    let order = g.order() as i64;
    let mut euler = order * (2 * d.base_genus() as i64 - 2);
    for b in d.branches() {
        let mut m = 1;
        let mut x = b.monodromy;
        while x != g.identity() {
            x = g.mul(x, b.monodromy);
            m += 1;
        }
        euler += order - order / m;
    }
    assert_eq!(euler % 2, 0);
    euler / 2 + 1
}
