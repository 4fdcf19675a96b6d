//! Braid group action on monodromy tuples and Dehn-twist spectra.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cover::BranchDatum;
use crate::cyclotomic::{CycloMatrix, Cyclotomic};
use crate::group::{FiniteGroup, GroupElement};
use crate::local_system::chevalley_weil_multiplicity;
use crate::rep::CharacterTable;

pub const DEFAULT_MAX_ENTRIES: usize = 8;
pub const DEFAULT_MAX_GROUP: usize = 24;
pub const DEFAULT_MAX_ORBIT: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HurwitzError {
    #[error("tuple product is {0}, not 1")]
    ProductNotTrivial(String),
    #[error("element index {0} is not in the group")]
    UnknownElement(usize),
    #[error("braid index {index} out of range for a tuple of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("tuple has {len} entries, limit is {max}")]
    TooManyEntries { len: usize, max: usize },
    #[error("group has order {order}, limit is {max}")]
    GroupTooLarge { order: usize, max: usize },
    #[error("orbit exceeded {max} tuples; census is partial")]
    OrbitBudgetExceeded { max: usize, partial: Box<OrbitCensus> },
    #[error("matrix is not a Dehn twist of the expected shape: {0}")]
    ShapeViolation(String),
}

/// `(g_1, ..., g_r)` with `g_1 ... g_r = 1`, over a base of genus zero.
#[derive(Clone, Debug)]
pub struct HurwitzTuple {
    group: Arc<FiniteGroup>,
    entries: Vec<GroupElement>,
}

impl PartialEq for HurwitzTuple {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for HurwitzTuple {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BraidDirection {
    Forward,
    Inverse,
}

impl HurwitzTuple {
    pub fn new(group: Arc<FiniteGroup>, entries: Vec<GroupElement>) -> Result<Self, HurwitzError> {
        if let Some(bad) = entries.iter().find(|g| !group.contains(**g)) {
            return Err(HurwitzError::UnknownElement(bad.index()));
        }
        let product = group.product(entries.iter().copied());
        if product != group.identity() {
            return Err(HurwitzError::ProductNotTrivial(group.label(product).to_string()));
        }
        Ok(HurwitzTuple { group, entries })
    }

    pub fn from_words(group: Arc<FiniteGroup>, words: &[&str]) -> Result<Self, HurwitzError> {
        let entries = words
            .iter()
            .map(|w| group.parse_element(w).map_err(|_| HurwitzError::UnknownElement(usize::MAX)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(group, entries)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn entries(&self) -> &[GroupElement] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|&g| self.group.label(g).to_string()).collect()
    }

    pub fn generates_group(&self) -> bool {
        self.group.subgroup_generated(&self.entries).order() == self.group.order()
    }

    pub fn to_datum(&self) -> BranchDatum {
        BranchDatum::from_monodromy(self.group.clone(), 0, Vec::new(), &self.entries)
            .expect("tuple entries are group elements")
    }
}

/// `sigma_l`: `(g_l, g_(l+1)) -> (g_(l+1), g_(l+1)^-1 g_l g_(l+1))`; the inverse
/// move is `(g_l, g_(l+1)) -> (g_l g_(l+1) g_l^-1, g_l)`. `l` is 0-based.
pub fn braid_move(t: &HurwitzTuple, l: usize, direction: BraidDirection) -> Result<HurwitzTuple, HurwitzError> {
    if l + 1 >= t.entries.len() {
        return Err(HurwitzError::IndexOutOfRange { index: l, len: t.entries.len() });
    }
    let mut entries = t.entries.clone();
    apply_move(&t.group, &mut entries, l, direction);
    Ok(HurwitzTuple { group: t.group.clone(), entries })
}

fn apply_move(g: &FiniteGroup, entries: &mut [GroupElement], l: usize, direction: BraidDirection) {
    let (x, y) = (entries[l], entries[l + 1]);
    match direction {
        BraidDirection::Forward => {
            entries[l] = y;
            entries[l + 1] = g.conjugate(x, g.inv(y));
        }
        BraidDirection::Inverse => {
            entries[l] = g.conjugate(y, x);
            entries[l + 1] = x;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitBudget {
    pub max_orbit: usize,
    pub max_entries: usize,
    pub max_group: usize,
}

impl Default for OrbitBudget {
    fn default() -> Self {
        OrbitBudget { max_orbit: DEFAULT_MAX_ORBIT, max_entries: DEFAULT_MAX_ENTRIES, max_group: DEFAULT_MAX_GROUP }
    }
}

/// Quantities constant along a braid orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    /// Conjugacy classes of the entries (by class representative), with counts.
    pub classes: Vec<(String, usize)>,
    pub genus: Option<usize>,
    /// Chevalley-Weil multiplicities, for generating tuples.
    pub mu: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCensus {
    pub size: usize,
    pub complete: bool,
    pub fingerprint: Fingerprint,
    pub fingerprint_constant: bool,
    /// Lexicographically least member by element index.
    pub representative: Vec<String>,
    #[serde(skip)]
    pub members: Vec<Vec<GroupElement>>,
}

pub fn fingerprint(t: &HurwitzTuple, table: Option<&CharacterTable>) -> Fingerprint {
    let g = &t.group;
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in &t.entries {
        *counts.entry(g.class_index(x)).or_default() += 1;
    }
    let classes = counts
        .into_iter()
        .map(|(c, n)| (g.label(g.conjugacy_classes()[c].representative).to_string(), n))
        .collect();
    let datum = t.to_datum();
    let genus = datum.riemann_hurwitz_genus().ok();
    let mu = match table {
        Some(table) if t.generates_group() => (0..table.len())
            .map(|i| chevalley_weil_multiplicity(&datum, table, i).ok())
            .collect(),
        _ => None,
    };
    Fingerprint { classes, genus, mu }
}

/// Closure of `t` under all `sigma_l^(+-1)`, members in canonical order.
pub fn hurwitz_orbit(
    t: &HurwitzTuple,
    table: Option<&CharacterTable>,
    budget: OrbitBudget,
) -> Result<OrbitCensus, HurwitzError> {
    let g = &t.group;
    if t.len() > budget.max_entries {
        return Err(HurwitzError::TooManyEntries { len: t.len(), max: budget.max_entries });
    }
    if g.order() > budget.max_group {
        return Err(HurwitzError::GroupTooLarge { order: g.order(), max: budget.max_group });
    }
    let mut seen: HashSet<Vec<GroupElement>> = HashSet::from([t.entries.clone()]);
    let mut queue = VecDeque::from([t.entries.clone()]);
    let mut complete = true;
    'bfs: while let Some(current) = queue.pop_front() {
        for l in 0..current.len().saturating_sub(1) {
            for direction in [BraidDirection::Forward, BraidDirection::Inverse] {
                let mut next = current.clone();
                apply_move(g, &mut next, l, direction);
                if seen.insert(next.clone()) {
                    if seen.len() > budget.max_orbit {
                        complete = false;
                        break 'bfs;
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    let mut members: Vec<Vec<GroupElement>> = seen.into_iter().collect();
    members.sort();
    let first = fingerprint(t, table);
    let fingerprint_constant = members.iter().all(|m| {
        let tuple = HurwitzTuple { group: g.clone(), entries: m.clone() };
        fingerprint(&tuple, table) == first
    });
    let census = OrbitCensus {
        size: members.len(),
        complete,
        fingerprint: first,
        fingerprint_constant,
        representative: members[0].iter().map(|&x| g.label(x).to_string()).collect(),
        members,
    };
    if complete {
        Ok(census)
    } else {
        Err(HurwitzError::OrbitBudgetExceeded { max: budget.max_orbit, partial: Box::new(census) })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistReport {
    pub matrix: CycloMatrix,
    pub diagonal_value: Cyclotomic,
    pub det: Cyclotomic,
    pub eigenvalues: Vec<Cyclotomic>,
    pub diagonalizable: bool,
}

impl TwistReport {
    pub fn is_unipotent(&self) -> bool {
        self.diagonal_value.is_one()
    }
}

/// Spectrum of a twist matrix that differs from the identity only in column
/// `l` (0-based), and there only in rows `l-1`, `l`, `l+1`.
pub fn dehn_twist_spectrum(m: &CycloMatrix, l: usize) -> Result<TwistReport, HurwitzError> {
    let size = m.size();
    if l >= size {
        return Err(HurwitzError::ShapeViolation(format!("column {l} outside a {size}x{size} matrix")));
    }
    for i in 0..size {
        for j in 0..size {
            let allowed = j == l && i + 1 >= l && i <= l + 1;
            if allowed {
                continue;
            }
            let expected = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
            if *m.get(i, j) != expected {
                return Err(HurwitzError::ShapeViolation(format!("unexpected entry at ({i}, {j})")));
            }
        }
    }
    let a = m.get(l, l).clone();
    let det = m.determinant();
    assert_eq!(det, a, "determinant of a single-column perturbation of I");
    let identity = CycloMatrix::identity(size);
    // Squarefree annihilator: (x - 1)(x - a) for a != 1, plain (x - 1) otherwise.
    let diagonalizable = m.is_identity() || (!a.is_one() && (&(m - &identity) * &(m - &identity.scale(&a))).is_zero());
    let mut eigenvalues = vec![Cyclotomic::one(); size - 1];
    eigenvalues.push(a.clone());
    Ok(TwistReport { matrix: m.clone(), diagonal_value: a, det, eigenvalues, diagonalizable })
}

/// Sufficient criterion for infinite monodromy of an eigenspace: type
/// `(1, 1)` and a twist that is unipotent, of determinant one, and not the identity.
/// `false` means the criterion does not apply.
pub fn infinite_monodromy_predicate(hodge_type: (u64, u64), twist: &TwistReport) -> bool {
    hodge_type == (1, 1) && twist.det.is_one() && twist.is_unipotent() && !twist.matrix.is_identity()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::dihedral(3).unwrap())
    }

    fn int(n: i64) -> Cyclotomic {
        Cyclotomic::from_integer(n)
    }

    #[test]
    fn braid_move_example() {
        let t = HurwitzTuple::from_words(d3(), &["b", "a*b", "a"]).unwrap();
        let s = braid_move(&t, 0, BraidDirection::Forward).unwrap();
        assert_eq!(s.labels(), ["a*b", "a^2*b", "a"]);
        let back = braid_move(&s, 0, BraidDirection::Inverse).unwrap();
        assert_eq!(back, t);
        assert!(matches!(braid_move(&t, 2, BraidDirection::Forward), Err(HurwitzError::IndexOutOfRange { .. })));
    }

    #[test]
    fn abelian_moves_swap() {
        let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let t = HurwitzTuple::from_words(g, &["g", "g^3", "g^2", "g^2"]).unwrap();
        let s = braid_move(&t, 0, BraidDirection::Forward).unwrap();
        assert_eq!(s.labels(), ["g^3", "g", "g^2", "g^2"]);
    }

    #[test]
    fn product_checked() {
        assert!(matches!(HurwitzTuple::from_words(d3(), &["b", "a"]), Err(HurwitzError::ProductNotTrivial(_))));
    }

    #[test]
    fn orbits() {
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let t = HurwitzTuple::from_words(g, &["g"; 4]).unwrap();
        assert_eq!(hurwitz_orbit(&t, None, OrbitBudget::default()).unwrap().size, 1);

        let t = HurwitzTuple::from_words(d3(), &["b", "a*b", "a"]).unwrap();
        let census = hurwitz_orbit(&t, None, OrbitBudget::default()).unwrap();
        assert!(census.complete && census.fingerprint_constant);
        assert_eq!(census.fingerprint.genus, Some(0));
        let tight = OrbitBudget { max_orbit: 3, ..OrbitBudget::default() };
        match hurwitz_orbit(&t, None, tight) {
            Err(HurwitzError::OrbitBudgetExceeded { partial, .. }) => assert!(!partial.complete),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn twist_examples() {
        let r = dehn_twist_spectrum(&CycloMatrix::identity(3), 1).unwrap();
        assert!(r.det.is_one() && r.diagonalizable);

        let z = Cyclotomic::zeta(3, 1);
        let m = CycloMatrix::from_rows(vec![
            vec![int(1), int(1), int(0)],
            vec![int(0), z.clone(), int(0)],
            vec![int(0), int(0), int(1)],
        ]);
        let r = dehn_twist_spectrum(&m, 1).unwrap();
        assert_eq!(r.det, z);
        assert_eq!(r.eigenvalues, [int(1), int(1), z]);
        assert!(r.diagonalizable);

        let u = CycloMatrix::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(1)]]);
        let r = dehn_twist_spectrum(&u, 1).unwrap();
        assert!(!r.diagonalizable);
        assert!(infinite_monodromy_predicate((1, 1), &r));
        assert!(!infinite_monodromy_predicate((2, 0), &r));
        let id = dehn_twist_spectrum(&CycloMatrix::identity(2), 1).unwrap();
        assert!(!infinite_monodromy_predicate((1, 1), &id));
    }

    #[test]
    fn twist_shape_enforced() {
        let m = CycloMatrix::from_rows(vec![
            vec![int(1), int(0), int(1)],
            vec![int(0), int(1), int(0)],
            vec![int(0), int(0), int(1)],
        ]);
        assert!(matches!(dehn_twist_spectrum(&m, 1), Err(HurwitzError::ShapeViolation(_))));
        assert!(dehn_twist_spectrum(&m, 2).is_err());
    }
}
