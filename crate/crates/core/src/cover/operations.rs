use std::sync::Arc;

use serde::Serialize;

use crate::group::{FiniteGroup, GroupElement, QuotientGroup, Subgroup};

use super::{Branch, BranchDatum, CoverError};

/// Merges branches `i` and `i + 1` into one with monodromy `h_i h_(i+1)`.
///
/// A trivial merged monodromy drops the branch. The result lives over the
/// subgroup generated by the remaining images.
pub fn collide_points(d: &BranchDatum, i: usize, j: usize) -> Result<BranchDatum, CoverError> {
    if j != i + 1 {
        return Err(CoverError::NonAdjacentMerge { i, j });
    }
    d.branch(j)?;
    d.require_valid()?;
    let g = d.group();
    let (left, right) = (&d.branches[i], &d.branches[j]);
    let merged = g.mul(left.monodromy, right.monodromy);

    let mut branches: Vec<Branch> = d.branches[..i].to_vec();
    if merged != g.identity() {
        branches.push(Branch {
            label: format!("{}+{}", left.label, right.label),
            order: g.element_order(merged),
            monodromy: merged,
        });
    }
    branches.extend_from_slice(&d.branches[j + 1..]);
    if branches.is_empty() && d.base_genus() == 0 && g.order() > 1 {
        return Err(CoverError::EmptyAfterMerge);
    }

    let generators: Vec<GroupElement> =
        d.handles.iter().copied().chain(branches.iter().map(|b| b.monodromy)).collect();
    let sub = g.subgroup_generated(&generators);
    let out = if sub.order() == g.order() {
        BranchDatum::new(g.clone(), d.base_genus(), d.handles.clone(), branches)?
    } else {
        let embedded = g.subgroup_as_group(&sub);
        let restrict = |x: GroupElement| embedded.restrict(x).expect("image lies in the generated subgroup");
        let branches = branches
            .into_iter()
            .map(|b| Branch { monodromy: restrict(b.monodromy), ..b })
            .collect();
        let handles = d.handles.iter().map(|&x| restrict(x)).collect();
        BranchDatum::new(Arc::new(embedded.group), d.base_genus(), handles, branches)?
    };
    out.require_valid()?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderChange {
    pub label: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub normal_order: usize,
    pub quotient_order: usize,
    /// Branches whose monodromy lies in N: unramified downstairs.
    pub dropped: Vec<String>,
    pub retained: Vec<String>,
    pub order_changes: Vec<OrderChange>,
    pub genus: usize,
    pub quotient_genus: usize,
}

#[derive(Clone, Debug)]
pub struct QuotientCover {
    pub datum: BranchDatum,
    pub report: DescentReport,
    pub quotient: QuotientGroup,
    /// For each retained branch of the quotient, its index in the original datum.
    pub branch_origin: Vec<usize>,
}

/// The intermediate cover `C/N -> Y`: monodromy pushed into `G/N`.
pub fn quotient_datum(d: &BranchDatum, normal: &Subgroup) -> Result<QuotientCover, CoverError> {
    d.require_valid()?;
    let quotient = d.group().quotient_group(normal)?;
    let q: &FiniteGroup = &quotient.group;
    let mut branches = Vec::new();
    let mut branch_origin = Vec::new();
    let mut dropped = Vec::new();
    let mut retained = Vec::new();
    let mut order_changes = Vec::new();
    for (index, b) in d.branches().iter().enumerate() {
        let image = quotient.project(b.monodromy);
        if image == q.identity() {
            dropped.push(b.label.clone());
            continue;
        }
        let order = q.element_order(image);
        if b.order % order != 0 {
            return Err(CoverError::Descent(format!("order of {} grew from {} to {order}", b.label, b.order)));
        }
        if order != b.order {
            order_changes.push(OrderChange { label: b.label.clone(), from: b.order, to: order });
        }
        retained.push(b.label.clone());
        branch_origin.push(index);
        branches.push(Branch { label: b.label.clone(), order, monodromy: image });
    }
    let handles = d.handles().iter().map(|&h| quotient.project(h)).collect();
    let datum = BranchDatum::new(Arc::new(quotient.group.clone()), d.base_genus(), handles, branches)?;
    datum.require_valid()?;
    let genus = d.riemann_hurwitz_genus()?;
    let quotient_genus = datum.riemann_hurwitz_genus()?;
    if quotient_genus > genus {
        return Err(CoverError::Descent(format!("quotient genus {quotient_genus} exceeds {genus}")));
    }
    let report = DescentReport {
        normal_order: normal.order(),
        quotient_order: q.order(),
        dropped,
        retained,
        order_changes,
        genus,
        quotient_genus,
    };
    Ok(QuotientCover { datum, report, quotient, branch_origin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn d3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::dihedral(3).unwrap())
    }

    fn labels(d: &BranchDatum) -> Vec<String> {
        d.branches().iter().map(|b| d.group().label(b.monodromy).to_string()).collect()
    }

    #[test]
    fn merge_to_identity_shrinks_group() {
        let d = BranchDatum::from_words(d3(), &["b", "b", "b", "b", "a", "a^2"]).unwrap();
        let m = collide_points(&d, 4, 5).unwrap();
        assert_eq!(m.group().order(), 2);
        assert_eq!(m.branches().len(), 4);
        assert!(m.branches().iter().all(|b| b.order == 2));
    }

    #[test]
    fn merge_in_hyperelliptic() {
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let d = BranchDatum::from_words(g.clone(), &["g"; 6]).unwrap();
        let m = collide_points(&d, 0, 1).unwrap();
        assert_eq!(m.branches().len(), 4);
        assert_eq!(m.branches()[0].label, "t3");
        let two = BranchDatum::from_words(g, &["g", "g"]).unwrap();
        assert_eq!(collide_points(&two, 0, 1).unwrap_err(), CoverError::EmptyAfterMerge);
    }

    #[test]
    fn merge_reflections_to_rotation() {
        let d = BranchDatum::from_words(d3(), &["b", "a*b", "a"]).unwrap();
        let m = collide_points(&d, 0, 1).unwrap();
        assert_eq!(*m.group().kind(), GroupSpec::Cyclic { n: 3 });
        assert_eq!(m.branches()[0].label, "t1+t2");
        assert_eq!(m.branches().iter().map(|b| b.order).collect::<Vec<_>>(), [3, 3]);
        // b * ab = a^2 and a generate the same cyclic group; their images are inverse.
        let x = m.branches()[0].monodromy;
        let y = m.branches()[1].monodromy;
        assert_eq!(m.group().mul(x, y), m.group().identity());
        assert!(matches!(collide_points(&d, 0, 2), Err(CoverError::NonAdjacentMerge { .. })));
    }

    #[test]
    fn quotient_by_rotations() {
        let g = d3();
        let d = BranchDatum::from_words(g.clone(), &["b", "b", "a", "a^2"]).unwrap();
        let n = g.subgroup_generated(&[g.parse_element("a").unwrap()]);
        let q = quotient_datum(&d, &n).unwrap();
        assert_eq!(q.datum.group().order(), 2);
        assert_eq!(q.report.dropped, ["t3", "t4"]);
        assert_eq!(q.report.retained, ["t1", "t2"]);
        assert_eq!(q.branch_origin, [0, 1]);
        assert_eq!(q.report.quotient_genus, 0);
    }

    #[test]
    fn trivial_and_full_quotients() {
        let g = d3();
        let d = BranchDatum::from_words(g.clone(), &["b", "a*b", "a"]).unwrap();
        let trivial = g.subgroup_generated(&[]);
        let q = quotient_datum(&d, &trivial).unwrap();
        assert_eq!(q.datum.group().order(), 6);
        assert!(q.report.dropped.is_empty() && q.report.order_changes.is_empty());
        let whole = g.subgroup_generated(&g.elements().collect::<Vec<_>>());
        let q = quotient_datum(&d, &whole).unwrap();
        assert_eq!(q.datum.group().order(), 1);
        assert!(q.datum.branches().is_empty());
        assert!(q.datum.validate().is_valid());
    }

    #[test]
    fn order_changes_recorded() {
        let g = Arc::new(FiniteGroup::dihedral(6).unwrap());
        let d = BranchDatum::from_words(g.clone(), &["b", "b", "a", "a^5"]).unwrap();
        let n = g.subgroup_generated(&[g.parse_element("a^3").unwrap()]);
        let q = quotient_datum(&d, &n).unwrap();
        assert_eq!(q.report.order_changes.len(), 2);
        assert_eq!(q.report.order_changes[0], OrderChange { label: "t3".into(), from: 6, to: 3 });
        assert_eq!(labels(&q.datum), ["b", "b", "a", "a^2"]);
    }

    #[test]
    fn non_normal_rejected() {
        let g = d3();
        let d = BranchDatum::from_words(g.clone(), &["b", "a*b", "a"]).unwrap();
        let n = g.subgroup_generated(&[g.parse_element("b").unwrap()]);
        assert!(matches!(quotient_datum(&d, &n), Err(CoverError::Group(_))));
    }
}
