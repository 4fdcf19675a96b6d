//! Dihedral covers: inertia types, the unramified-at-infinity criterion and
//! the closed form for the multiplicity of `rho_h`.

use num::{BigInt, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::cover::{BranchDatum, CoverError};
use crate::cyclotomic::{fractional_part, is_nonnegative_integer, Rational};
use crate::group::{FiniteGroup, GroupElement, GroupSpec};
use crate::local_system::{chevalley_weil_value, LocalSystemError};
use crate::rep::{CharacterTable, IrrepKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DihedralError {
    #[error("datum is not over a dihedral group")]
    NotDihedral,
    #[error("reflection branches use more than one representative a^k*b")]
    AssumptionViolated,
    #[error("h = {h} is outside 1..={max} for D_{n}")]
    HOutOfRange { h: usize, n: usize, max: usize },
    #[error("closed form gives mu_{h} = {corollary}, Chevalley-Weil gives {generic}")]
    MismatchWithGenericCW { h: usize, corollary: String, generic: String },
    #[error("mu_{h} evaluates to {value}, not a nonnegative integer")]
    InvalidMultiplicity { h: usize, value: String },
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    LocalSystem(#[from] LocalSystemError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InertiaClass {
    Identity,
    /// Monodromy `a^d`, `1 <= d <= n-1`, other than the central involution.
    Rotation { exponent: usize },
    /// Monodromy `a^k b`.
    Reflection { exponent: usize },
    /// `a^(n/2)` for even `n`.
    CentralInvolution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReflectionParity {
    Even,
    Odd,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchInertia {
    pub label: String,
    pub class: InertiaClass,
    /// All conjugates of the monodromy generate the same cyclic subgroup.
    pub inertia_subgroup_constant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DihedralBranchProfile {
    pub n: usize,
    /// `l`: number of reflection branches.
    pub reflection_count: usize,
    /// The common `k` when every reflection branch is `a^k b`.
    pub reflection_exponent: Option<usize>,
    /// `d_i` for the rotation branches, central involutions included.
    pub rotation_exponents: Vec<usize>,
    /// Parity of the reflection exponents (even `n` only).
    pub parity_class: Option<ReflectionParity>,
}

impl DihedralBranchProfile {
    pub fn single_representative(n: usize, k: usize, l: usize, rotations: Vec<usize>) -> Self {
        DihedralBranchProfile {
            n,
            reflection_count: l,
            reflection_exponent: (l > 0).then_some(k % n),
            rotation_exponents: rotations,
            parity_class: (n % 2 == 0 && l > 0).then_some(if k % 2 == 0 {
                ReflectionParity::Even
            } else {
                ReflectionParity::Odd
            }),
        }
    }

    /// Monodromy `(a^k b, ..., a^k b, a^d_1, ..., a^d_s)`; `None` with mixed reflections.
    pub fn witness(&self, group: &FiniteGroup) -> Option<Vec<GroupElement>> {
        let k = match (self.reflection_count, self.reflection_exponent) {
            (0, _) => 0,
            (_, Some(k)) => k,
            (_, None) => return None,
        };
        let reflection = group.dihedral_element(k as i64, true)?;
        let mut out = vec![reflection; self.reflection_count];
        for &d in &self.rotation_exponents {
            out.push(group.dihedral_element(d as i64, false)?);
        }
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DihedralAnalysis {
    pub profile: DihedralBranchProfile,
    pub branches: Vec<BranchInertia>,
}

fn dihedral_n(group: &FiniteGroup) -> Result<usize, DihedralError> {
    match *group.kind() {
        GroupSpec::Dihedral { n } => Ok(n),
        _ => Err(DihedralError::NotDihedral),
    }
}

/// Tags each branch by the type of its monodromy and summarizes the profile.
pub fn classify_branch_inertia(d: &BranchDatum) -> Result<DihedralAnalysis, DihedralError> {
    let group = d.group();
    let n = dihedral_n(group)?;
    let mut branches = Vec::with_capacity(d.branches().len());
    let mut reflections = Vec::new();
    let mut rotations = Vec::new();
    for b in d.branches() {
        let (k, e) = group.dihedral_parts(b.monodromy).expect("dihedral element");
        let class = match (k, e) {
            (_, 1) => {
                reflections.push(k);
                InertiaClass::Reflection { exponent: k }
            }
            (0, _) => InertiaClass::Identity,
            (k, _) => {
                rotations.push(k);
                if 2 * k == n {
                    InertiaClass::CentralInvolution
                } else {
                    InertiaClass::Rotation { exponent: k }
                }
            }
        };
        let generated = group.subgroup_generated(&[b.monodromy]);
        let inertia_subgroup_constant = group
            .elements()
            .all(|s| group.subgroup_generated(&[group.conjugate(b.monodromy, s)]) == generated);
        branches.push(BranchInertia { label: b.label.clone(), class, inertia_subgroup_constant });
    }
    let reflection_exponent = match reflections.first() {
        Some(&k) if reflections.iter().all(|&x| x == k) => Some(k),
        _ => None,
    };
    let parity_class = if n % 2 == 0 && !reflections.is_empty() {
        let even = reflections.iter().filter(|k| *k % 2 == 0).count();
        Some(match even {
            0 => ReflectionParity::Odd,
            e if e == reflections.len() => ReflectionParity::Even,
            _ => ReflectionParity::Mixed,
        })
    } else {
        None
    };
    let profile = DihedralBranchProfile {
        n,
        reflection_count: reflections.len(),
        reflection_exponent,
        rotation_exponents: rotations,
        parity_class,
    };
    Ok(DihedralAnalysis { profile, branches })
}

/// True iff `l` is even, `l >= 2` and `n | sum d_i`: then a datum with a
/// single reflection representative and these rotations has trivial product.
pub fn infinity_ramification_check(profile: &DihedralBranchProfile) -> Result<bool, DihedralError> {
    if profile.reflection_count > 0 && profile.reflection_exponent.is_none() {
        return Err(DihedralError::AssumptionViolated);
    }
    let l = profile.reflection_count;
    let total: usize = profile.rotation_exponents.iter().sum();
    Ok(l % 2 == 0 && l >= 2 && total % profile.n == 0)
}

/// The admissible range of `h` for the planar irreducibles of `D_n`.
pub fn h_range(n: usize) -> std::ops::RangeInclusive<usize> {
    1..=(n - 1) / 2
}

fn frac(num: i64, den: i64) -> Rational {
    fractional_part(&Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// `mu_h = 2(g' - 1) + l/2 + sum_i (<-h k_i/n> + <h k_i/n>)`, cross-checked
/// against `2(g'-1) + l/2 + u` and against the generic Chevalley-Weil value.
pub fn dihedral_multiplicity_mu_h(
    d: &BranchDatum,
    table: &CharacterTable,
    h: usize,
) -> Result<u64, DihedralError> {
    let n = dihedral_n(d.group())?;
    if !h_range(n).contains(&h) {
        return Err(DihedralError::HOutOfRange { h, n, max: (n - 1) / 2 });
    }
    let analysis = classify_branch_inertia(d)?;
    let profile = &analysis.profile;
    let base = Rational::from_integer(BigInt::from(2 * (d.base_genus() as i64 - 1)));
    let half_l = Rational::new(BigInt::from(profile.reflection_count), BigInt::from(2));
    let mut corollary = &base + &half_l;
    let mut u = 0usize;
    for &k in &profile.rotation_exponents {
        let hk = (h * k) as i64;
        corollary += frac(-hk, n as i64) + frac(hk, n as i64);
        if (h * k) % n != 0 {
            u += 1;
        }
    }
    let remark = base + half_l + Rational::from_integer(BigInt::from(u));
    let irr = table
        .irreducibles()
        .iter()
        .position(|i| i.kind == IrrepKind::DihedralPlanar { h })
        .ok_or(DihedralError::NotDihedral)?;
    let generic = chevalley_weil_value(d, table, irr)?;
    if corollary != generic || remark != generic {
        return Err(DihedralError::MismatchWithGenericCW {
            h,
            corollary: corollary.to_string(),
            generic: generic.to_string(),
        });
    }
    if !is_nonnegative_integer(&corollary) {
        return Err(DihedralError::InvalidMultiplicity { h, value: corollary.to_string() });
    }
    Ok(corollary.to_integer().to_u64().expect("small multiplicity"))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::rep::character_table;

    fn datum(n: usize, words: &[&str]) -> (BranchDatum, CharacterTable) {
        let g = Arc::new(FiniteGroup::dihedral(n).unwrap());
        let t = character_table(&g).unwrap();
        (BranchDatum::from_words(g, words).unwrap(), t)
    }

    #[test]
    fn classify_d3() {
        let (d, _) = datum(3, &["b", "a*b", "a"]);
        let a = classify_branch_inertia(&d).unwrap();
        let classes: Vec<InertiaClass> = a.branches.iter().map(|b| b.class).collect();
        assert_eq!(
            classes,
            [
                InertiaClass::Reflection { exponent: 0 },
                InertiaClass::Reflection { exponent: 1 },
                InertiaClass::Rotation { exponent: 1 }
            ]
        );
        assert_eq!(a.profile.reflection_count, 2);
        assert_eq!(a.profile.reflection_exponent, None);
        assert_eq!(a.profile.parity_class, None);
        assert!(a.branches[2].inertia_subgroup_constant);
        assert!(!a.branches[0].inertia_subgroup_constant);
    }

    #[test]
    fn central_involution_and_rotations_only() {
        let (d, _) = datum(4, &["b", "b", "a^2", "a^2"]);
        let a = classify_branch_inertia(&d).unwrap();
        assert_eq!(a.branches[2].class, InertiaClass::CentralInvolution);
        assert_eq!(a.profile.rotation_exponents, [2, 2]);
        assert_eq!(a.profile.parity_class, Some(ReflectionParity::Even));
        let (d, _) = datum(4, &["a", "a^3"]);
        assert!(!d.validate().is_valid());
        assert_eq!(classify_branch_inertia(&d).unwrap().profile.reflection_count, 0);
        let c = BranchDatum::from_words(Arc::new(FiniteGroup::cyclic(2).unwrap()), &["g", "g"]).unwrap();
        assert_eq!(classify_branch_inertia(&c).unwrap_err(), DihedralError::NotDihedral);
    }

    #[test]
    fn infinity_examples() {
        let p = DihedralBranchProfile::single_representative(3, 0, 2, vec![1, 2]);
        assert!(infinity_ramification_check(&p).unwrap());
        let g = FiniteGroup::dihedral(3).unwrap();
        let w = p.witness(&g).unwrap();
        assert_eq!(g.product(w), g.identity());
        let p = DihedralBranchProfile::single_representative(3, 0, 1, vec![]);
        assert!(!infinity_ramification_check(&p).unwrap());
        let p = DihedralBranchProfile::single_representative(4, 0, 2, vec![1, 2]);
        assert!(!infinity_ramification_check(&p).unwrap());
        let g4 = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(g4.label(g4.product(p.witness(&g4).unwrap())), "a^3");
        let (d, _) = datum(3, &["b", "a*b", "a"]);
        let mixed = classify_branch_inertia(&d).unwrap().profile;
        assert_eq!(infinity_ramification_check(&mixed), Err(DihedralError::AssumptionViolated));
    }

    #[test]
    fn mu_h_examples() {
        let (d, t) = datum(3, &["b", "b", "a", "a^2"]);
        assert_eq!(dihedral_multiplicity_mu_h(&d, &t, 1).unwrap(), 1);
        let (d, t) = datum(3, &["b", "a*b", "a"]);
        assert_eq!(dihedral_multiplicity_mu_h(&d, &t, 1).unwrap(), 0);
        let (d, t) = datum(3, &["b", "b", "b", "b", "a", "a^2"]);
        assert_eq!(dihedral_multiplicity_mu_h(&d, &t, 1).unwrap(), 2);
        assert!(matches!(dihedral_multiplicity_mu_h(&d, &t, 2), Err(DihedralError::HOutOfRange { .. })));
    }

    #[test]
    fn mu_h_on_even_dihedral() {
        let (d, t) = datum(6, &["b", "b", "a", "a^2", "a^3"]);
        assert!(d.validate().is_valid());
        for h in h_range(6) {
            dihedral_multiplicity_mu_h(&d, &t, h).unwrap();
        }
    }
}
