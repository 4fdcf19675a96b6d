//! Finite groups materialized as full multiplication tables.
//!
//! Three constructors cover everything the cover machinery needs: cyclic
//! groups `g^k`, dihedral groups in the normal form `a^k b^e`, and groups
//! generated by permutations. Every derived structure (classes, subgroups,
//! quotients) is computed by exhaustive table scans.

mod identify;
mod quotient;
mod subgroups;

pub use quotient::{EmbeddedSubgroup, QuotientGroup};
pub use subgroups::{dihedral_subgroups, DihedralSubgroup, SubgroupShape};

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest group the constructors will materialize unless told otherwise.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000;

/// Associativity is checked on every triple up to this order, sampled above.
const FULL_AXIOM_SCAN: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid group parameter: {0}")]
    InvalidParameter(String),
    #[error("group has more than {cap} elements (raise the element cap to allow it)")]
    ElementCapExceeded { cap: usize },
    #[error("permutation generator {index} is invalid: {reason}")]
    BadPermutation { index: usize, reason: String },
    #[error("element index {index} is out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("unknown group element `{0}`")]
    UnknownElement(String),
    #[error("subgroup is not normal")]
    NotNormal,
}

/// Index of an element in its parent group's element list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(u32);

impl GroupElement {
    pub const fn from_index(index: usize) -> Self {
        GroupElement(index as u32)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

/// Group descriptor as it appears in datum files.
///
/// Permutation generators use the 1-based image-list convention: `[2,1,3]`
/// sends 1 to 2, 2 to 1 and fixes 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Permutation { degree: usize, generators: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: GroupElement,
    pub members: Vec<GroupElement>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.members.binary_search(&g).is_ok()
    }
}

/// A subgroup given by its (sorted) member list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub members: Vec<GroupElement>,
    pub is_normal: bool,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.members.binary_search(&g).is_ok()
    }
}

#[derive(Clone, Debug)]
struct ClassData {
    classes: Vec<ConjugacyClass>,
    class_of: Vec<u32>,
}

/// A finite group with a materialized Cayley table.
///
/// Element 0 is always the identity.
#[derive(Clone)]
pub struct FiniteGroup {
    kind: GroupSpec,
    labels: Vec<String>,
    lookup: HashMap<String, GroupElement>,
    table: Vec<u32>,
    inverses: Vec<u32>,
    orders: Vec<u32>,
    classes: OnceLock<ClassData>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("kind", &self.kind)
            .field("order", &self.order())
            .finish()
    }
}

impl FiniteGroup {
    pub fn from_spec(spec: &GroupSpec) -> Result<Self, GroupError> {
        Self::from_spec_with_cap(spec, DEFAULT_ELEMENT_CAP)
    }

    pub fn from_spec_with_cap(spec: &GroupSpec, cap: usize) -> Result<Self, GroupError> {
        match spec {
            GroupSpec::Cyclic { n } => Self::cyclic_with_cap(*n, cap),
            GroupSpec::Dihedral { n } => Self::dihedral_with_cap(*n, cap),
            GroupSpec::Permutation { degree, generators } => {
                Self::permutation_with_cap(*degree, generators, cap)
            }
        }
    }

    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        Self::cyclic_with_cap(n, DEFAULT_ELEMENT_CAP)
    }

    pub fn cyclic_with_cap(n: usize, cap: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidParameter("cyclic group needs n >= 1".into()));
        }
        if n > cap {
            return Err(GroupError::ElementCapExceeded { cap });
        }
        let labels = (0..n).map(|k| power_label("g", k)).collect();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(((i + j) % n) as u32);
            }
        }
        Ok(Self::from_parts(GroupSpec::Cyclic { n }, labels, table))
    }

    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        Self::dihedral_with_cap(n, DEFAULT_ELEMENT_CAP)
    }

    /// `D_n = <a, b | a^n = b^2 = 1, ab = ba^-1>` of order `2n`.
    ///
    /// Element `a^k b^e` has index `k + n*e`, so rotations come first.
    pub fn dihedral_with_cap(n: usize, cap: usize) -> Result<Self, GroupError> {
        if n < 2 {
            return Err(GroupError::InvalidParameter("dihedral group needs n >= 2".into()));
        }
        if 2 * n > cap {
            return Err(GroupError::ElementCapExceeded { cap });
        }
        let order = 2 * n;
        let mut labels = Vec::with_capacity(order);
        for eps in 0..2 {
            for k in 0..n {
                labels.push(match (k, eps) {
                    (_, 0) => power_label("a", k),
                    (0, _) => "b".to_string(),
                    (1, _) => "a*b".to_string(),
                    _ => format!("a^{k}*b"),
                });
            }
        }
        let mut table = Vec::with_capacity(order * order);
        for i in 0..order {
            let (k1, e1) = (i % n, i / n);
            for j in 0..order {
                let (k2, e2) = (j % n, j / n);
                let k = if e1 == 0 { (k1 + k2) % n } else { (k1 + n - k2) % n };
                let e = (e1 + e2) % 2;
                table.push((k + n * e) as u32);
            }
        }
        Ok(Self::from_parts(GroupSpec::Dihedral { n }, labels, table))
    }

    pub fn permutation(degree: usize, generators: &[Vec<usize>]) -> Result<Self, GroupError> {
        Self::permutation_with_cap(degree, generators, DEFAULT_ELEMENT_CAP)
    }

    /// Closure of 1-based image-list generators.
    ///
    /// Products compose left to right: `(g*h)(x) = h(g(x))`. Elements are
    /// ordered lexicographically by image list, so the identity is first.
    pub fn permutation_with_cap(
        degree: usize,
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self, GroupError> {
        if degree == 0 {
            return Err(GroupError::InvalidParameter("permutation degree must be >= 1".into()));
        }
        if generators.is_empty() {
            return Err(GroupError::InvalidParameter(
                "permutation group needs at least one generator".into(),
            ));
        }
        let mut gens: Vec<Vec<u32>> = Vec::with_capacity(generators.len());
        for (index, g) in generators.iter().enumerate() {
            gens.push(check_permutation(index, degree, g)?);
        }

        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(identity.clone());
        queue.push_back(identity);
        while let Some(p) = queue.pop_front() {
            for s in &gens {
                let q = compose(&p, s);
                if !seen.contains(&q) {
                    if seen.len() >= cap {
                        return Err(GroupError::ElementCapExceeded { cap });
                    }
                    seen.insert(q.clone());
                    queue.push_back(q);
                }
            }
        }

        let mut perms: Vec<Vec<u32>> = seen.into_iter().collect();
        perms.sort();
        let position: HashMap<&[u32], u32> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i as u32))
            .collect();
        let order = perms.len();
        let mut table = Vec::with_capacity(order * order);
        for p in &perms {
            for q in &perms {
                table.push(position[compose(p, q).as_slice()]);
            }
        }
        let labels = perms.iter().map(|p| image_list_label(p)).collect();
        Ok(Self::from_parts(
            GroupSpec::Permutation { degree, generators: generators.to_vec() },
            labels,
            table,
        ))
    }

    fn from_parts(kind: GroupSpec, labels: Vec<String>, table: Vec<u32>) -> Self {
        let order = labels.len();
        debug_assert_eq!(table.len(), order * order);
        let mut inverses = vec![0u32; order];
        for i in 0..order {
            for j in 0..order {
                if table[i * order + j] == 0 {
                    inverses[i] = j as u32;
                    break;
                }
            }
        }
        let mut orders = vec![1u32; order];
        for (i, slot) in orders.iter_mut().enumerate() {
            let mut x = i;
            let mut k = 1;
            while x != 0 {
                x = table[x * order + i] as usize;
                k += 1;
            }
            *slot = k;
        }
        let lookup = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), GroupElement::from_index(i)))
            .collect();
        FiniteGroup {
            kind,
            labels,
            lookup,
            table,
            inverses,
            orders,
            classes: OnceLock::new(),
        }
    }

    pub fn kind(&self) -> &GroupSpec {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(0)
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = GroupElement> + Clone {
        (0..self.order() as u32).map(GroupElement)
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        g.index() < self.order()
    }

    pub fn element(&self, index: usize) -> Result<GroupElement, GroupError> {
        if index < self.order() {
            Ok(GroupElement::from_index(index))
        } else {
            Err(GroupError::IndexOutOfRange { index, order: self.order() })
        }
    }

    /// Table product. Panics if either element is foreign to this group.
    pub fn mul(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        GroupElement(self.table[g.index() * self.order() + h.index()])
    }

    pub fn try_mul(&self, g: GroupElement, h: GroupElement) -> Result<GroupElement, GroupError> {
        let order = self.order();
        for x in [g, h] {
            if x.index() >= order {
                return Err(GroupError::IndexOutOfRange { index: x.index(), order });
            }
        }
        Ok(self.mul(g, h))
    }

    pub fn inv(&self, g: GroupElement) -> GroupElement {
        GroupElement(self.inverses[g.index()])
    }

    pub fn pow(&self, g: GroupElement, k: i64) -> GroupElement {
        let m = self.element_order(g) as i64;
        let e = k.rem_euclid(m);
        let mut acc = self.identity();
        for _ in 0..e {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn element_order(&self, g: GroupElement) -> usize {
        self.orders[g.index()] as usize
    }

    /// `x g x^-1`.
    pub fn conjugate(&self, g: GroupElement, by: GroupElement) -> GroupElement {
        self.mul(self.mul(by, g), self.inv(by))
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn product<I: IntoIterator<Item = GroupElement>>(&self, elements: I) -> GroupElement {
        elements.into_iter().fold(self.identity(), |acc, g| self.mul(acc, g))
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1usize, |acc, &o| acc.lcm(&(o as usize)))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|g| self.elements().all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    pub fn label(&self, g: GroupElement) -> &str {
        &self.labels[g.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Parses an element word and reduces it to normal form.
    ///
    /// Accepted grammar: `*`-separated factors, each `1` or a generator with
    /// an optional integer exponent (`a^-2*b`, `g^7`). Permutation groups take
    /// 1-based image lists such as `[2,1,3]`.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement, GroupError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(&g) = self.lookup.get(&compact) {
            return Ok(g);
        }
        if compact.is_empty() {
            return Err(GroupError::UnknownElement(text.to_string()));
        }
        let unknown = || GroupError::UnknownElement(text.to_string());
        let mut acc = self.identity();
        for factor in compact.split('*') {
            let g = if factor == "1" {
                self.identity()
            } else if factor.starts_with('[') {
                let images = parse_image_list(factor).ok_or_else(unknown)?;
                *self.lookup.get(&image_list_label_1based(&images)).ok_or_else(unknown)?
            } else {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<i64>().map_err(|_| unknown())?),
                    None => (factor, 1),
                };
                let generator = self.generator_symbol(base).ok_or_else(unknown)?;
                self.pow(generator, exp)
            };
            acc = self.mul(acc, g);
        }
        Ok(acc)
    }

    fn generator_symbol(&self, symbol: &str) -> Option<GroupElement> {
        match (&self.kind, symbol) {
            (GroupSpec::Cyclic { n }, "g") => Some(GroupElement::from_index(1 % n)),
            (GroupSpec::Dihedral { .. }, "a") => Some(GroupElement(1)),
            (GroupSpec::Dihedral { n }, "b") => Some(GroupElement::from_index(*n)),
            _ => None,
        }
    }

    /// `(k, e)` with `g = a^k b^e`, for dihedral groups only.
    pub fn dihedral_parts(&self, g: GroupElement) -> Option<(usize, usize)> {
        match self.kind {
            GroupSpec::Dihedral { n } => Some((g.index() % n, g.index() / n)),
            _ => None,
        }
    }

    pub fn dihedral_element(&self, k: i64, reflection: bool) -> Option<GroupElement> {
        match self.kind {
            GroupSpec::Dihedral { n } => {
                let k = k.rem_euclid(n as i64) as usize;
                Some(GroupElement::from_index(k + if reflection { n } else { 0 }))
            }
            _ => None,
        }
    }

    fn class_data(&self) -> &ClassData {
        self.classes.get_or_init(|| {
            let order = self.order();
            let mut class_of = vec![u32::MAX; order];
            let mut classes = Vec::new();
            for g in self.elements() {
                if class_of[g.index()] != u32::MAX {
                    continue;
                }
                let id = classes.len() as u32;
                let mut members: Vec<GroupElement> =
                    self.elements().map(|x| self.conjugate(g, x)).collect();
                members.sort();
                members.dedup();
                for m in &members {
                    class_of[m.index()] = id;
                }
                classes.push(ConjugacyClass { representative: members[0], members });
            }
            ClassData { classes, class_of }
        })
    }

    /// Conjugacy classes, ordered by least member index (identity class first).
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.class_data().classes
    }

    pub fn class_index(&self, g: GroupElement) -> usize {
        self.class_data().class_of[g.index()] as usize
    }

    /// Smallest subgroup containing `generators`; normality checked exhaustively.
    pub fn subgroup_generated(&self, generators: &[GroupElement]) -> Subgroup {
        let order = self.order();
        let mut inside = vec![false; order];
        inside[0] = true;
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for &s in generators {
                let y = self.mul(x, s);
                if !inside[y.index()] {
                    inside[y.index()] = true;
                    queue.push_back(y);
                }
            }
        }
        let members: Vec<GroupElement> =
            self.elements().filter(|g| inside[g.index()]).collect();
        let is_normal = self.is_normal_set(&inside, &members);
        Subgroup { members, is_normal }
    }

    fn is_normal_set(&self, inside: &[bool], members: &[GroupElement]) -> bool {
        self.elements()
            .all(|x| members.iter().all(|&h| inside[self.conjugate(h, x).index()]))
    }

    /// Checks the group axioms on the table; exhaustive up to order 64.
    pub fn verify_axioms(&self) -> Result<(), String> {
        let order = self.order();
        let e = self.identity();
        for g in self.elements() {
            if self.mul(g, e) != g || self.mul(e, g) != g {
                return Err(format!("identity law fails at {}", self.label(g)));
            }
            let gi = self.inv(g);
            if self.mul(g, gi) != e || self.mul(gi, g) != e {
                return Err(format!("inverse law fails at {}", self.label(g)));
            }
        }
        let triples: Box<dyn Iterator<Item = (usize, usize, usize)>> = if order <= FULL_AXIOM_SCAN {
            Box::new((0..order).flat_map(move |i| {
                (0..order).flat_map(move |j| (0..order).map(move |k| (i, j, k)))
            }))
        } else {
            // Deterministic sample: a linear congruential walk over index triples.
            Box::new((0..20_000u64).map(move |t| {
                let x = t.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let o = order as u64;
                ((x % o) as usize, ((x >> 21) % o) as usize, ((x >> 42) % o) as usize)
            }))
        };
        for (i, j, k) in triples {
            let (g, h, l) = (GroupElement(i as u32), GroupElement(j as u32), GroupElement(k as u32));
            if self.mul(self.mul(g, h), l) != self.mul(g, self.mul(h, l)) {
                return Err(format!(
                    "associativity fails at ({}, {}, {})",
                    self.label(g),
                    self.label(h),
                    self.label(l)
                ));
            }
        }
        Ok(())
    }

    /// True when `self` and `other` are the same group (same descriptor and table).
    pub fn same_group(&self, other: &FiniteGroup) -> bool {
        std::ptr::eq(self, other)
            || (self.kind == other.kind && self.labels == other.labels && self.table == other.table)
    }
}

fn power_label(symbol: &str, k: usize) -> String {
    match k {
        0 => "1".to_string(),
        1 => symbol.to_string(),
        _ => format!("{symbol}^{k}"),
    }
}

fn check_permutation(index: usize, degree: usize, images: &[usize]) -> Result<Vec<u32>, GroupError> {
    let bad = |reason: String| GroupError::BadPermutation { index, reason };
    if images.len() != degree {
        return Err(bad(format!("expected {degree} images, got {}", images.len())));
    }
    let mut seen = vec![false; degree];
    let mut out = Vec::with_capacity(degree);
    for &x in images {
        if x == 0 || x > degree {
            return Err(bad(format!("image {x} outside 1..={degree}")));
        }
        if seen[x - 1] {
            return Err(bad(format!("image {x} repeated")));
        }
        seen[x - 1] = true;
        out.push((x - 1) as u32);
    }
    Ok(out)
}

/// Left-to-right composition: first `p`, then `q`.
fn compose(p: &[u32], q: &[u32]) -> Vec<u32> {
    p.iter().map(|&x| q[x as usize]).collect()
}

fn image_list_label(p: &[u32]) -> String {
    let parts: Vec<String> = p.iter().map(|x| (x + 1).to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn image_list_label_1based(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn parse_image_list(text: &str) -> Option<Vec<usize>> {
    let inner = text.strip_prefix('[')?.strip_suffix(']')?;
    if inner.is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|s| s.parse().ok()).collect()
}
