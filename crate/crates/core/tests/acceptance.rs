//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release --test acceptance -- --nocapture` to see the lines.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use coverforge::cover::{quotient_datum, BranchDatum};
use coverforge::cyclotomic::{rational, CycloMatrix, Cyclotomic};
use coverforge::dihedral::{
    dihedral_multiplicity_mu_h, h_range, infinity_ramification_check, DihedralBranchProfile,
};
use coverforge::group::{FiniteGroup, GroupElement, GroupSpec};
use coverforge::hurwitz::{braid_move, hurwitz_orbit, BraidDirection, HurwitzTuple, OrbitBudget};
use coverforge::local_system::{
    chevalley_weil_multiplicity, decompose_direct_image, monodromy_blocks, monodromy_matrix, path_basis_report,
    quotient_monodromy,
};
use coverforge::rep::{burnside_dixon, character_table, rows_match_up_to_permutation, CharacterTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{oracle_genus, permutation_catalog, random_datum};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Case {
    datum: BranchDatum,
    table: Arc<CharacterTable>,
}

/// Seeded random valid data over D3-D8, C2-C9, A4 and Q8.
fn suite() -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let mut groups: Vec<Arc<FiniteGroup>> = Vec::new();
    groups.extend((3..=8).map(|n| Arc::new(FiniteGroup::dihedral(n).unwrap())));
    groups.extend((2..=9).map(|n| Arc::new(FiniteGroup::cyclic(n).unwrap())));
    groups.push(common::catalog_group("A4"));
    groups.push(common::catalog_group("Q8"));
    let mut out = Vec::new();
    for g in &groups {
        let table = Arc::new(character_table(g).unwrap());
        let mut made = 0;
        while made < 14 {
            let base_genus = if made % 5 == 4 { 1 } else { 0 };
            let r = if base_genus == 0 { rng.gen_range(3..=6) } else { rng.gen_range(0..=3) };
            if let Some(datum) = random_datum(&mut rng, g, base_genus, r) {
                out.push(Case { datum, table: table.clone() });
                made += 1;
            }
        }
    }
    out
}

fn dihedral_class_count(n: usize) -> usize {
    if n % 2 == 1 {
        (n + 3) / 2
    } else {
        (n + 6) / 2
    }
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for n in 2..=12 {
        for (g, name) in [
            (FiniteGroup::cyclic(n).unwrap(), format!("C{n}")),
            (FiniteGroup::dihedral(n).unwrap(), format!("D{n}")),
        ] {
            let g = Arc::new(g);
            let closed = character_table(&g).map_err(|e| format!("{name}: {e}"))?;
            closed.verify().map_err(|e| format!("{name}: {e}"))?;
            if let GroupSpec::Dihedral { n } = *g.kind() {
                ensure!(closed.len() == dihedral_class_count(n), "{name}: {} classes", closed.len());
            }
            let generic = burnside_dixon(&g).map_err(|e| format!("{name} (generic): {e}"))?;
            ensure!(rows_match_up_to_permutation(&closed, &generic), "{name}: generic table differs");
            checked += 1;
        }
    }
    for c in permutation_catalog() {
        let g = Arc::new(FiniteGroup::permutation(c.degree, &c.generators).unwrap());
        ensure!(g.order() == c.order, "{}: order {}", c.name, g.order());
        let t = character_table(&g).map_err(|e| format!("{}: {e}", c.name))?;
        t.verify().map_err(|e| format!("{}: {e}", c.name))?;
        let mut degrees: Vec<usize> = t.irreducibles().iter().map(|i| i.degree).collect();
        degrees.sort();
        ensure!(degrees == c.irreducible_degrees, "{}: degrees {degrees:?}", c.name);
        checked += 1;
    }
    Ok(format!("{checked} groups, all table invariants exact"))
}

fn criterion_2(cases: &[Case]) -> Outcome {
    ensure!(cases.len() >= 200, "only {} random data", cases.len());
    for (i, c) in cases.iter().enumerate() {
        let genus = c.datum.riemann_hurwitz_genus().map_err(|e| format!("case {i}: {e}"))?;
        ensure!(genus as i64 == oracle_genus(&c.datum), "case {i}: genus {genus} vs oracle");
        let sum: u64 = (0..c.table.len())
            .map(|r| chevalley_weil_multiplicity(&c.datum, &c.table, r).map(|mu| mu * c.table.degree(r) as u64))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("case {i}: {e}"))?
            .into_iter()
            .sum();
        ensure!(sum == genus as u64, "case {i}: sum d*mu = {sum}, genus {genus}");
    }
    let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let t2 = character_table(&c2).unwrap();
    for r in [4usize, 6, 8, 10] {
        let d = BranchDatum::from_words(c2.clone(), &vec!["g"; r]).unwrap();
        let dec = decompose_direct_image(&d, &t2).map_err(|e| e.to_string())?;
        ensure!(dec.genus == (r - 2) / 2, "hyperelliptic r = {r}: genus {}", dec.genus);
        ensure!(dec.weighted_mu_sum() == dec.genus as u64, "hyperelliptic r = {r}: CW sum");
    }
    Ok(format!("{} random data plus hyperelliptic r = 4, 6, 8, 10", cases.len()))
}

fn criterion_3(cases: &[Case]) -> Outcome {
    let mut checked = 0;
    for (i, c) in cases.iter().enumerate() {
        if let GroupSpec::Dihedral { n } = *c.datum.group().kind() {
            for h in h_range(n) {
                dihedral_multiplicity_mu_h(&c.datum, &c.table, h).map_err(|e| format!("case {i}, h = {h}: {e}"))?;
                checked += 1;
            }
        }
    }
    let g = Arc::new(FiniteGroup::dihedral(3).unwrap());
    let t = character_table(&g).unwrap();
    let d = BranchDatum::from_words(g, &["b", "b", "b", "b", "a", "a^2"]).unwrap();
    let dec = decompose_direct_image(&d, &t).map_err(|e| e.to_string())?;
    let mu: Vec<u64> = dec.summands.iter().map(|s| s.mu).collect();
    ensure!(dec.genus == 5, "worked datum genus {}", dec.genus);
    ensure!(mu == [0, 1, 2], "worked datum mu = {mu:?}");
    ensure!(mu[0] + mu[1] + 2 * mu[2] == 5, "worked datum weighted sum");
    let mu_h = dihedral_multiplicity_mu_h(&d, &t, 1).map_err(|e| e.to_string())?;
    ensure!(mu_h == 2, "worked datum mu_1 = {mu_h}");
    Ok(format!("{checked} (datum, h) pairs agree; worked datum genus 5 with mu = (0, 1, 2)"))
}

/// Multisets of rotation exponents in `1..n` with sum at most `max_sum`.
fn rotation_multisets(n: usize, max_sum: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, min: usize, left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(current.clone());
        for d in min..n {
            if d <= left {
                current.push(d);
                extend(n, d, left - d, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(n, 1, max_sum, &mut Vec::new(), &mut out);
    out
}

fn criterion_4() -> Outcome {
    let mut profiles = 0usize;
    for n in 2..=8 {
        let g = FiniteGroup::dihedral(n).unwrap();
        let multisets = rotation_multisets(n, 4 * n);
        for l in 0..=6 {
            for k in 0..n {
                for rotations in &multisets {
                    let p = DihedralBranchProfile::single_representative(n, k, l, rotations.clone());
                    let predicate = infinity_ramification_check(&p).map_err(|e| e.to_string())?;
                    // Direct evaluation: (a^k b)^l * a^(d_1) * ... with a reflection branch present.
                    let reflection = g.dihedral_element(k as i64, true).unwrap();
                    let mut product = g.identity();
                    for _ in 0..l {
                        product = g.mul(product, reflection);
                    }
                    for &d in rotations {
                        product = g.mul(product, g.dihedral_element(d as i64, false).unwrap());
                    }
                    let oracle = l >= 1 && product == g.identity();
                    ensure!(
                        predicate == oracle,
                        "n = {n}, l = {l}, k = {k}, d = {rotations:?}: predicate {predicate}, product {}",
                        g.label(product)
                    );
                    profiles += 1;
                }
            }
        }
    }
    Ok(format!("{profiles} profiles, n <= 8, l <= 6, sum d <= 4n"))
}

fn criterion_5(cases: &[Case]) -> Outcome {
    let mut checked = 0;
    for (i, c) in cases.iter().enumerate() {
        let d = &c.datum;
        if d.base_genus() != 0 || matches!(d.group().kind(), GroupSpec::Permutation { .. }) {
            continue;
        }
        let size: usize = c.table.irreducibles().iter().map(|r| r.degree).sum();
        let mut product = CycloMatrix::identity(size);
        for k in 0..d.branches().len() {
            product = &product * &monodromy_matrix(d, &c.table, k).map_err(|e| e.to_string())?;
            for (label, block) in monodromy_blocks(d, &c.table, k).map_err(|e| e.to_string())? {
                let m = d.branches()[k].order as u32;
                ensure!(block.pow(m).is_identity(), "case {i}, branch {k}, {label}: order does not divide {m}");
                let det = block.determinant().to_complex();
                ensure!((det.norm() - 1.0).abs() < 1e-9, "case {i}, branch {k}, {label}: |det| = {}", det.norm());
            }
        }
        ensure!(product.is_identity(), "case {i}: product of local monodromies is not the identity");
        checked += 1;
    }
    Ok(format!("{checked} genus-zero catalog data"))
}

fn order_of(g: &FiniteGroup, x: GroupElement) -> usize {
    g.subgroup_generated(&[x]).order()
}

fn criterion_6(cases: &[Case]) -> Outcome {
    let d6 = Arc::new(FiniteGroup::dihedral(6).unwrap());
    let t6 = character_table(&d6).unwrap();
    let mut data: Vec<BranchDatum> = cases
        .iter()
        .filter(|c| *c.datum.group().kind() == GroupSpec::Dihedral { n: 6 })
        .map(|c| c.datum.clone())
        .collect();
    for words in [
        &["b", "b", "a", "a^5"][..],
        &["b", "a*b", "a"],
        &["b", "a*b", "a*b", "b", "a^2", "a^4"],
        &["b", "a^3*b", "a^2", "a"],
        &["b", "a*b", "b", "a*b", "a^2"],
    ] {
        data.push(BranchDatum::from_words(d6.clone(), words).unwrap());
    }
    let mut checked = 0;
    for (i, d) in data.iter().enumerate() {
        ensure!(d.validate().is_valid(), "datum {i} invalid");
        for j in [1, 2, 3] {
            let n = d6.subgroup_generated(&[d6.parse_element(&format!("a^{j}")).unwrap()]);
            let q = quotient_datum(d, &n).map_err(|e| format!("datum {i}, N = <a^{j}>: {e}"))?;
            ensure!(q.datum.validate().is_valid(), "datum {i}, N = <a^{j}>: quotient invalid");
            let original: BTreeSet<&str> = d.branches().iter().map(|b| b.label.as_str()).collect();
            ensure!(
                q.datum.branches().iter().all(|b| original.contains(b.label.as_str())),
                "datum {i}: quotient branch set is not a subset"
            );
            let qt = character_table(q.datum.group()).unwrap();
            for (qk, &k) in q.branch_origin.iter().enumerate() {
                let h = d.branches()[k].monodromy;
                let hs = d6.subgroup_generated(&[h]);
                let meet = hs.members.iter().filter(|x| n.contains(**x)).count();
                let expected = hs.order() / meet;
                ensure!(q.datum.branches()[qk].order == expected, "datum {i}, branch {k}: order mismatch");
                ensure!(order_of(q.datum.group(), q.datum.branches()[qk].monodromy) == expected, "datum {i}: order");
                let upstairs = quotient_monodromy(d, &t6, &n, k).map_err(|e| e.to_string())?;
                let mut up: Vec<String> = upstairs.blocks.iter().map(|m| m.to_string()).collect();
                let mut down: Vec<String> = monodromy_blocks(&q.datum, &qt, qk)
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .map(|(_, m)| m.to_string())
                    .collect();
                up.sort();
                down.sort();
                ensure!(up == down, "datum {i}, N = <a^{j}>, branch {k}: blocks {up:?} vs {down:?}");
            }
            for (k, b) in d.branches().iter().enumerate() {
                if !q.branch_origin.contains(&k) {
                    ensure!(n.contains(b.monodromy), "datum {i}: dropped branch {k} not in N");
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} quotients of D6 data by <a>, <a^2>, <a^3>"))
}

fn product_one_tuples(g: &FiniteGroup, len: usize) -> Vec<Vec<GroupElement>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len - 1 {
        out = out
            .into_iter()
            .flat_map(|t| g.elements().map(move |x| [t.clone(), vec![x]].concat()))
            .collect();
    }
    out.into_iter()
        .map(|mut t| {
            let p = g.product(t.iter().copied());
            t.push(g.inv(p));
            t
        })
        .collect()
}

fn criterion_7() -> Outcome {
    let mut relations = 0usize;
    for g in [FiniteGroup::dihedral(3).unwrap(), FiniteGroup::cyclic(4).unwrap()] {
        let g = Arc::new(g);
        for len in 2..=5 {
            for entries in product_one_tuples(&g, len) {
                let t = HurwitzTuple::new(g.clone(), entries).unwrap();
                let sub = g.subgroup_generated(t.entries());
                let mv = |t: &HurwitzTuple, l| braid_move(t, l, BraidDirection::Forward).unwrap();
                for l in 0..len - 1 {
                    let s = mv(&t, l);
                    ensure!(braid_move(&s, l, BraidDirection::Inverse).unwrap() == t, "inverse law");
                    ensure!(g.product(s.entries().iter().copied()) == g.identity(), "product changed");
                    ensure!(g.subgroup_generated(s.entries()) == sub, "generated subgroup changed");
                    if l + 2 < len {
                        let left = mv(&mv(&mv(&t, l), l + 1), l);
                        let right = mv(&mv(&mv(&t, l + 1), l), l + 1);
                        ensure!(left == right, "braid relation fails at {l} on {:?}", t.labels());
                        relations += 1;
                    }
                    for m in l + 2..len - 1 {
                        ensure!(mv(&mv(&t, l), m) == mv(&mv(&t, m), l), "far commutation fails");
                        relations += 1;
                    }
                }
            }
        }
    }

    // Brute force: all generating product-one triples over D3 with two reflections and one rotation.
    let g = Arc::new(FiniteGroup::dihedral(3).unwrap());
    let is_reflection = |x: GroupElement| g.dihedral_parts(x).unwrap().1 == 1;
    let is_rotation = |x: GroupElement| x != g.identity() && !is_reflection(x);
    let mut brute: BTreeSet<Vec<GroupElement>> = BTreeSet::new();
    for x in g.elements() {
        for y in g.elements() {
            for z in g.elements() {
                let t = [x, y, z];
                let reflections = t.iter().filter(|e| is_reflection(**e)).count();
                let rotations = t.iter().filter(|e| is_rotation(**e)).count();
                if reflections == 2
                    && rotations == 1
                    && g.product(t) == g.identity()
                    && g.subgroup_generated(&t).order() == 6
                {
                    brute.insert(t.to_vec());
                }
            }
        }
    }
    let start = HurwitzTuple::from_words(g.clone(), &["b", "a*b", "a"]).unwrap();
    let census = hurwitz_orbit(&start, None, OrbitBudget::default()).map_err(|e| e.to_string())?;
    let orbit: BTreeSet<Vec<GroupElement>> = census.members.iter().cloned().collect();
    ensure!(orbit == brute, "orbit of size {} vs {} brute-force tuples", orbit.len(), brute.len());
    ensure!(census.fingerprint_constant, "fingerprint varies on the orbit");
    Ok(format!("{relations} braid relations; D3 census: one orbit of {} tuples", census.size))
}

fn criterion_8() -> Outcome {
    let mut dims = Vec::new();
    for (n, r, irr) in [(2usize, 6usize, 1usize), (3, 3, 1)] {
        let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
        let t = character_table(&g).unwrap();
        let d = BranchDatum::from_words(g, &vec!["g"; r]).unwrap();
        let report = path_basis_report(&d, &t, irr).map_err(|e| e.to_string())?;
        // Independent: |support| from the character values, cw from the formula by hand.
        let support = d.branches().iter().filter(|b| !t.value(irr, b.monodromy).is_one()).count();
        ensure!(report.claimed_dim == support as u64, "claimed {} vs support {support}", report.claimed_dim);
        ensure!(!report.consistent, "C{n}, r = {r}: reported consistent");
        dims.push((report.claimed_dim, report.cw_dim));
    }
    ensure!(dims == [(6, 4), (3, 1)], "dimensions {dims:?}");
    Ok("hyperelliptic (6, 4) and cyclic(3) (3, 1), both flagged inconsistent".into())
}

fn random_cyclotomic(rng: &mut ChaCha8Rng, conductor: u32) -> Cyclotomic {
    let divisors: Vec<u32> = (1..=conductor).filter(|d| conductor % d == 0).collect();
    let terms = rng.gen_range(1..=4);
    (0..terms)
        .map(|_| {
            let n = divisors[rng.gen_range(0..divisors.len())];
            let k = rng.gen_range(0..n as i64);
            let c = rational(rng.gen_range(-5..=5), rng.gen_range(1..=4));
            Cyclotomic::zeta(n, k).scale(&c)
        })
        .sum()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let close = |a: num::Complex<f64>, b: num::Complex<f64>| (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()));
    for i in 0..1000 {
        let n = rng.gen_range(1..=24);
        let (x, y, z) = (random_cyclotomic(&mut rng, n), random_cyclotomic(&mut rng, n), random_cyclotomic(&mut rng, n));
        ensure!(&x + &y == &y + &x && &x * &y == &y * &x, "{i}: commutativity");
        ensure!(&(&x + &y) + &z == &x + &(&y + &z), "{i}: additive associativity");
        ensure!(&(&x * &y) * &z == &x * &(&y * &z), "{i}: multiplicative associativity");
        ensure!(&x * &(&y + &z) == &(&x * &y) + &(&x * &z), "{i}: distributivity");
        ensure!((&x - &x).is_zero() && (&x * &Cyclotomic::one()) == x, "{i}: identities");
        if let Some(inv) = x.inverse() {
            ensure!((&x * &inv).is_one(), "{i}: inverse of {x}");
        } else {
            ensure!(x.is_zero(), "{i}: nonzero {x} without inverse");
        }
        ensure!((&x * &y).conj() == &x.conj() * &y.conj(), "{i}: conjugation is multiplicative");
        ensure!(close((&x * &y).to_complex(), x.to_complex() * y.to_complex()), "{i}: embedding of product");
        ensure!(close((&x + &y).to_complex(), x.to_complex() + y.to_complex()), "{i}: embedding of sum");
        ensure!(close(x.conj().to_complex(), x.to_complex().conj()), "{i}: embedding of conjugate");
        let parsed: Cyclotomic = x.to_string().parse().map_err(|e| format!("{i}: {e}"))?;
        ensure!(parsed == x, "{i}: display round trip of {x}");
    }
    Ok("1000 random triples, conductors <= 24".into())
}

fn run(number: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let started = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = started.elapsed().as_secs_f64();
    match &result {
        Ok(detail) => println!("PASS criterion {number} ({name}): {detail} [{secs:.2}s]"),
        Err(detail) => println!("FAIL criterion {number} ({name}): {detail} [{secs:.2}s]"),
    }
    result.is_ok()
}

#[test]
fn acceptance() {
    let started = Instant::now();
    let cases = suite();
    let results = [
        run(1, "character tables", criterion_1),
        run(2, "Chevalley-Weil vs Riemann-Hurwitz", || criterion_2(&cases)),
        run(3, "dihedral multiplicity formula", || criterion_3(&cases)),
        run(4, "unramified-at-infinity criterion", criterion_4),
        run(5, "monodromy relation", || criterion_5(&cases)),
        run(6, "quotient covers", || criterion_6(&cases)),
        run(7, "Hurwitz orbits", criterion_7),
        run(8, "path-basis report", criterion_8),
        run(9, "cyclotomic arithmetic", criterion_9),
    ];
    let total = started.elapsed().as_secs_f64();
    let passed = results.iter().filter(|r| **r).count();
    println!("acceptance: {passed}/{} criteria passed in {total:.2}s", results.len());
    assert_eq!(passed, results.len(), "acceptance criteria failed");
    assert!(total < 60.0, "acceptance suite took {total:.1}s");
}
