//! Branch data of Galois covers: validation, genus, fibers, collisions and quotients.

mod operations;

pub use operations::{collide_points, quotient_datum, DescentReport, OrderChange, QuotientCover};

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::group::{FiniteGroup, GroupElement, GroupError};
use crate::rep::RepError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("base genus {base_genus} needs {expected} handle images, got {got}")]
    HandleCount { base_genus: usize, expected: usize, got: usize },
    #[error("invalid datum: {0}")]
    Invalid(ValidationReport),
    #[error("Riemann-Hurwitz gives a non-integral genus")]
    NonIntegralGenus,
    #[error("Riemann-Hurwitz gives negative genus (2g - 2 = {0})")]
    NegativeGenus(i64),
    #[error("branch index {index} out of range for {len} branches")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("only adjacent branches can collide (got {i} and {j})")]
    NonAdjacentMerge { i: usize, j: usize },
    #[error("merge would leave a nontrivial cover of the sphere with no branch points")]
    EmptyAfterMerge,
    #[error("quotient consistency check failed: {0}")]
    Descent(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub label: String,
    pub order: usize,
    pub monodromy: GroupElement,
}

/// A datum `(m, G, Phi)`: `Phi` is stored as the images of the standard
/// generators `alpha_1, beta_1, ..., alpha_g', beta_g', gamma_1, ..., gamma_r`.
#[derive(Clone, Debug)]
pub struct BranchDatum {
    group: Arc<FiniteGroup>,
    base_genus: usize,
    handles: Vec<GroupElement>,
    branches: Vec<Branch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum ValidationIssue {
    OrderMismatch { index: usize, label: String, declared: usize, actual: usize },
    OrderTooSmall { index: usize, label: String, order: usize },
    LongRelation { product: String },
    NotSurjective { generated: usize, group_order: usize },
    DuplicateLabel { index: usize, label: String },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::OrderMismatch { index, label, declared, actual } => write!(
                f,
                "branch {index} ({label}): declared order {declared} but monodromy has order {actual}"
            ),
            ValidationIssue::OrderTooSmall { index, label, order } => {
                write!(f, "branch {index} ({label}): order {order} is below 2")
            }
            ValidationIssue::LongRelation { product } => {
                write!(f, "long relation fails: product is {product}, not 1")
            }
            ValidationIssue::NotSurjective { generated, group_order } => write!(
                f,
                "images generate a subgroup of order {generated}, group has order {group_order}"
            ),
            ValidationIssue::DuplicateLabel { index, label } => {
                write!(f, "branch {index}: label {label} already used")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return f.write_str("valid");
        }
        let parts: Vec<String> = self.issues.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub label: String,
    pub fiber_size: usize,
    /// Distinct conjugates `s h s^-1` of the monodromy, by element index.
    #[serde(skip)]
    pub inertia_generators: Vec<GroupElement>,
    pub inertia_labels: Vec<String>,
    /// The ramification index repeated once per point of the fiber.
    pub cycle_type: Vec<usize>,
}

impl FiberReport {
    /// This fiber's term `(|G|/m)(m - 1)` in Riemann-Hurwitz.
    pub fn ramification_contribution(&self) -> usize {
        self.cycle_type.iter().map(|e| e - 1).sum()
    }
}

impl BranchDatum {
    pub fn new(
        group: Arc<FiniteGroup>,
        base_genus: usize,
        handles: Vec<GroupElement>,
        branches: Vec<Branch>,
    ) -> Result<Self, CoverError> {
        if handles.len() != 2 * base_genus {
            return Err(CoverError::HandleCount {
                base_genus,
                expected: 2 * base_genus,
                got: handles.len(),
            });
        }
        for g in handles.iter().chain(branches.iter().map(|b| &b.monodromy)) {
            group.element(g.index())?;
        }
        Ok(BranchDatum { group, base_genus, handles, branches })
    }

    /// Datum with branches labelled `t1, t2, ...` and orders read off the monodromy.
    pub fn from_monodromy(
        group: Arc<FiniteGroup>,
        base_genus: usize,
        handles: Vec<GroupElement>,
        monodromy: &[GroupElement],
    ) -> Result<Self, CoverError> {
        let branches = monodromy
            .iter()
            .enumerate()
            .map(|(i, &h)| Branch { label: format!("t{}", i + 1), order: group.element_order(h), monodromy: h })
            .collect();
        Self::new(group, base_genus, handles, branches)
    }

    /// Genus-zero datum from element words, e.g. `["b", "a*b", "a"]`.
    pub fn from_words(group: Arc<FiniteGroup>, words: &[&str]) -> Result<Self, CoverError> {
        let monodromy =
            words.iter().map(|w| group.parse_element(w)).collect::<Result<Vec<_>, _>>()?;
        Self::from_monodromy(group, 0, Vec::new(), &monodromy)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn base_genus(&self) -> usize {
        self.base_genus
    }

    pub fn handles(&self) -> &[GroupElement] {
        &self.handles
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn branch(&self, index: usize) -> Result<&Branch, CoverError> {
        self.branches
            .get(index)
            .ok_or(CoverError::IndexOutOfRange { index, len: self.branches.len() })
    }

    pub fn branch_index(&self, label: &str) -> Option<usize> {
        self.branches.iter().position(|b| b.label == label)
    }

    pub fn monodromies(&self) -> Vec<GroupElement> {
        self.branches.iter().map(|b| b.monodromy).collect()
    }

    /// `(prod h_i) * (prod [A_j, B_j])`, which is the identity for a valid datum.
    pub fn long_relation_product(&self) -> GroupElement {
        let g = &self.group;
        let branch_part = g.product(self.branches.iter().map(|b| b.monodromy));
        let handle_part =
            g.product(self.handles.chunks(2).map(|ab| g.commutator(ab[0], ab[1])));
        g.mul(branch_part, handle_part)
    }

    pub fn validate(&self) -> ValidationReport {
        let g = &self.group;
        let mut issues = Vec::new();
        for (index, b) in self.branches.iter().enumerate() {
            if b.order < 2 {
                issues.push(ValidationIssue::OrderTooSmall { index, label: b.label.clone(), order: b.order });
            }
            let actual = g.element_order(b.monodromy);
            if actual != b.order {
                issues.push(ValidationIssue::OrderMismatch {
                    index,
                    label: b.label.clone(),
                    declared: b.order,
                    actual,
                });
            }
        }
        let product = self.long_relation_product();
        if product != g.identity() {
            issues.push(ValidationIssue::LongRelation { product: g.label(product).to_string() });
        }
        let generators: Vec<GroupElement> =
            self.handles.iter().copied().chain(self.monodromies()).collect();
        let generated = g.subgroup_generated(&generators).order();
        if generated != g.order() {
            issues.push(ValidationIssue::NotSurjective { generated, group_order: g.order() });
        }
        let mut seen = HashSet::new();
        for (index, b) in self.branches.iter().enumerate() {
            if !seen.insert(b.label.as_str()) {
                issues.push(ValidationIssue::DuplicateLabel { index, label: b.label.clone() });
            }
        }
        ValidationReport { issues }
    }

    pub(crate) fn require_valid(&self) -> Result<(), CoverError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(CoverError::Invalid(report))
        }
    }

    /// `2 g_C - 2 = |G| (2g' - 2) + sum_i (|G|/m_i)(m_i - 1)`.
    pub fn riemann_hurwitz_genus(&self) -> Result<usize, CoverError> {
        let order = self.group.order() as i64;
        let mut euler = order * (2 * self.base_genus as i64 - 2);
        for b in &self.branches {
            let m = b.order as i64;
            if m == 0 || order % m != 0 {
                return Err(CoverError::NonIntegralGenus);
            }
            euler += (order / m) * (m - 1);
        }
        if euler % 2 != 0 {
            return Err(CoverError::NonIntegralGenus);
        }
        if euler < -2 {
            return Err(CoverError::NegativeGenus(euler));
        }
        Ok((euler / 2 + 1) as usize)
    }

    pub fn fiber_structure(&self, index: usize) -> Result<FiberReport, CoverError> {
        let b = self.branch(index)?;
        let g = &self.group;
        let mut inertia: Vec<GroupElement> =
            g.elements().map(|s| g.conjugate(b.monodromy, s)).collect();
        inertia.sort();
        inertia.dedup();
        let m = g.element_order(b.monodromy);
        let fiber_size = g.order() / m;
        Ok(FiberReport {
            label: b.label.clone(),
            fiber_size,
            inertia_labels: inertia.iter().map(|&x| g.label(x).to_string()).collect(),
            inertia_generators: inertia,
            cycle_type: vec![m; fiber_size],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::dihedral(3).unwrap())
    }

    fn hyperelliptic(r: usize) -> BranchDatum {
        let words = vec!["g"; r];
        BranchDatum::from_words(Arc::new(FiniteGroup::cyclic(2).unwrap()), &words).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(BranchDatum::from_words(d3(), &["b", "a*b", "a"]).unwrap().validate().is_valid());
        assert!(hyperelliptic(6).validate().is_valid());
        let bad = BranchDatum::from_words(d3(), &["b", "a"]).unwrap().validate();
        assert!(matches!(bad.issues[..], [ValidationIssue::LongRelation { .. }]));
    }

    #[test]
    fn validation_reports_each_issue() {
        let g = d3();
        let b = g.parse_element("b").unwrap();
        let branches = vec![
            Branch { label: "t1".into(), order: 3, monodromy: b },
            Branch { label: "t1".into(), order: 1, monodromy: g.identity() },
        ];
        let report = BranchDatum::new(g, 0, vec![], branches).unwrap().validate();
        let kinds: Vec<&str> = report
            .issues
            .iter()
            .map(|i| match i {
                ValidationIssue::OrderMismatch { .. } => "order",
                ValidationIssue::OrderTooSmall { .. } => "small",
                ValidationIssue::LongRelation { .. } => "relation",
                ValidationIssue::NotSurjective { .. } => "surjective",
                ValidationIssue::DuplicateLabel { .. } => "duplicate",
            })
            .collect();
        assert_eq!(kinds, ["order", "small", "relation", "surjective", "duplicate"]);
    }

    #[test]
    fn handle_count_checked() {
        let err = BranchDatum::new(d3(), 1, vec![], vec![]).unwrap_err();
        assert!(matches!(err, CoverError::HandleCount { expected: 2, got: 0, .. }));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(hyperelliptic(6).riemann_hurwitz_genus().unwrap(), 2);
        let trivial = Arc::new(FiniteGroup::cyclic(1).unwrap());
        let id = trivial.identity();
        let torus = BranchDatum::new(trivial, 1, vec![id, id], vec![]).unwrap();
        assert!(torus.validate().is_valid());
        assert_eq!(torus.riemann_hurwitz_genus().unwrap(), 1);
        let d = BranchDatum::from_words(d3(), &["b", "b", "b", "b", "a", "a^2"]).unwrap();
        assert!(d.validate().is_valid());
        assert_eq!(d.riemann_hurwitz_genus().unwrap(), 5);
    }

    #[test]
    fn genus_rejects_impossible_data() {
        let d = BranchDatum::from_words(d3(), &["b"]).unwrap();
        assert_eq!(d.riemann_hurwitz_genus(), Err(CoverError::NonIntegralGenus));
        let d = BranchDatum::from_words(d3(), &[]).unwrap();
        assert_eq!(d.riemann_hurwitz_genus(), Err(CoverError::NegativeGenus(-12)));
    }

    #[test]
    fn fiber_examples() {
        let h = hyperelliptic(6).fiber_structure(3).unwrap();
        assert_eq!((h.fiber_size, h.cycle_type.clone()), (1, vec![2]));
        let d = BranchDatum::from_words(d3(), &["b", "a*b", "a"]).unwrap();
        let rot = d.fiber_structure(2).unwrap();
        assert_eq!(rot.fiber_size, 2);
        assert_eq!(rot.inertia_labels, ["a", "a^2"]);
        let refl = d.fiber_structure(0).unwrap();
        assert_eq!(refl.fiber_size, 3);
        assert_eq!(refl.inertia_labels, ["b", "a*b", "a^2*b"]);
        assert_eq!(refl.ramification_contribution(), 3);
        assert!(matches!(d.fiber_structure(3), Err(CoverError::IndexOutOfRange { .. })));
    }
}
