//! Character tables and explicit representations.
//!
//! Cyclic and dihedral groups get closed-form tables (and explicit matrices);
//! anything else goes through the Burnside-Dixon algorithm over a prime field.

mod dixon;
mod matrices;

pub use matrices::{
    irreducible_image, irreducible_matrices, isotypic_projectors, regular_representation,
    MatrixRep, Projector,
};

use std::sync::Arc;

use num::{BigInt, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{canonical_key, is_nonnegative_integer, Cyclotomic, Rational};
use crate::group::{ConjugacyClass, FiniteGroup, GroupElement, GroupSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("generic character table computation gave up: {0}")]
    TableLimits(String),
    #[error("explicit matrices are only available for cyclic and dihedral groups")]
    UnsupportedGroupKind,
    #[error("multiplicity of {irreducible} is {value}, not a nonnegative integer")]
    NonIntegerMultiplicity { irreducible: String, value: String },
    #[error("eigenvalue count for {irreducible} at exponent {alpha} is {value}, not a nonnegative integer")]
    NonIntegerCount { irreducible: String, alpha: usize, value: String },
    #[error("table invariant violated: {0}")]
    InvariantViolated(String),
    #[error("representation is not multiplicative at ({0}, {1})")]
    NotMultiplicative(String, String),
    #[error("unknown irreducible `{0}`")]
    UnknownIrreducible(String),
    #[error("class function has {got} values, expected {expected}")]
    ClassFunctionLength { got: usize, expected: usize },
}

/// How an irreducible was produced; catalog kinds carry their parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum IrrepKind {
    /// `g^k -> zeta_n^(jk)` on the cyclic group of order n.
    CyclicPower { j: usize },
    /// One-dimensional dihedral character with the given signs on `a` and `b`.
    DihedralLinear { rotation_sign: i8, reflection_sign: i8 },
    /// The two-dimensional `rho_h` of the dihedral group.
    DihedralPlanar { h: usize },
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Irreducible {
    pub label: String,
    pub degree: usize,
    pub kind: IrrepKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableMethod {
    ClosedForm,
    BurnsideDixon,
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    irreducibles: Vec<Irreducible>,
    /// `values[irreducible][class]`.
    values: Vec<Vec<Cyclotomic>>,
    method: TableMethod,
}

/// Character table of `group`, closed form for catalog groups.
///
/// All table invariants (orthogonality, degree sum, class count) are
/// checked exactly before the table is returned.
pub fn character_table(group: &Arc<FiniteGroup>) -> Result<CharacterTable, RepError> {
    let table = match *group.kind() {
        GroupSpec::Cyclic { n } => cyclic_table(group, n),
        GroupSpec::Dihedral { n } => dihedral_table(group, n),
        GroupSpec::Permutation { .. } => return burnside_dixon(group),
    };
    table.verify()?;
    Ok(table)
}

/// Generic table via class multiplication coefficients, for any group.
pub fn burnside_dixon(group: &Arc<FiniteGroup>) -> Result<CharacterTable, RepError> {
    let rows = dixon::dixon_characters(group)?;
    let exponent = group.exponent() as u32;
    let mut rows: Vec<(usize, bool, Vec<Vec<Rational>>, Vec<Cyclotomic>)> = rows
        .into_iter()
        .map(|row| {
            let degree = row[0].as_integer().and_then(|d| d.to_usize()).unwrap_or(0);
            let trivial = row.iter().all(Cyclotomic::is_one);
            let key = row.iter().map(|v| canonical_key(v, exponent)).collect();
            (degree, trivial, key, row)
        })
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)).then(b.2.cmp(&a.2)));
    let irreducibles = rows
        .iter()
        .enumerate()
        .map(|(i, r)| Irreducible {
            label: format!("X{}", i + 1),
            degree: r.0,
            kind: IrrepKind::Generic,
        })
        .collect();
    let table = CharacterTable {
        group: group.clone(),
        irreducibles,
        values: rows.into_iter().map(|r| r.3).collect(),
        method: TableMethod::BurnsideDixon,
    };
    table.verify()?;
    Ok(table)
}

fn cyclic_table(group: &Arc<FiniteGroup>, n: usize) -> CharacterTable {
    let classes = group.conjugacy_classes();
    let irreducibles = (0..n)
        .map(|j| Irreducible { label: format!("chi{j}"), degree: 1, kind: IrrepKind::CyclicPower { j } })
        .collect();
    let values = (0..n)
        .map(|j| {
            classes
                .iter()
                .map(|c| Cyclotomic::zeta(n as u32, (j * c.representative.index()) as i64))
                .collect()
        })
        .collect();
    CharacterTable { group: group.clone(), irreducibles, values, method: TableMethod::ClosedForm }
}

fn dihedral_table(group: &Arc<FiniteGroup>, n: usize) -> CharacterTable {
    let mut irreducibles = vec![
        Irreducible {
            label: "triv".into(),
            degree: 1,
            kind: IrrepKind::DihedralLinear { rotation_sign: 1, reflection_sign: 1 },
        },
        Irreducible {
            label: "sign".into(),
            degree: 1,
            kind: IrrepKind::DihedralLinear { rotation_sign: 1, reflection_sign: -1 },
        },
    ];
    if n % 2 == 0 {
        irreducibles.push(Irreducible {
            label: "alt".into(),
            degree: 1,
            kind: IrrepKind::DihedralLinear { rotation_sign: -1, reflection_sign: 1 },
        });
        irreducibles.push(Irreducible {
            label: "alt_sign".into(),
            degree: 1,
            kind: IrrepKind::DihedralLinear { rotation_sign: -1, reflection_sign: -1 },
        });
    }
    for h in 1..=(n - 1) / 2 {
        irreducibles.push(Irreducible {
            label: format!("rho{h}"),
            degree: 2,
            kind: IrrepKind::DihedralPlanar { h },
        });
    }
    let classes = group.conjugacy_classes();
    let values = irreducibles
        .iter()
        .map(|irr| {
            classes
                .iter()
                .map(|c| {
                    let (k, e) = group.dihedral_parts(c.representative).expect("dihedral group");
                    dihedral_character(&irr.kind, n, k, e)
                })
                .collect()
        })
        .collect();
    CharacterTable { group: group.clone(), irreducibles, values, method: TableMethod::ClosedForm }
}

fn dihedral_character(kind: &IrrepKind, n: usize, k: usize, e: usize) -> Cyclotomic {
    match *kind {
        IrrepKind::DihedralLinear { rotation_sign, reflection_sign } => {
            let mut v = 1i64;
            if rotation_sign < 0 && k % 2 == 1 {
                v = -v;
            }
            if reflection_sign < 0 && e == 1 {
                v = -v;
            }
            Cyclotomic::from_integer(v)
        }
        IrrepKind::DihedralPlanar { h } if e == 0 => {
            let t = (h * k) as i64;
            &Cyclotomic::zeta(n as u32, t) + &Cyclotomic::zeta(n as u32, -t)
        }
        IrrepKind::DihedralPlanar { .. } => Cyclotomic::zero(),
        _ => unreachable!("dihedral table holds dihedral irreducibles only"),
    }
}

impl CharacterTable {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn method(&self) -> TableMethod {
        self.method
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        self.group.conjugacy_classes()
    }

    pub fn irreducibles(&self) -> &[Irreducible] {
        &self.irreducibles
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn irreducible(&self, index: usize) -> &Irreducible {
        &self.irreducibles[index]
    }

    pub fn degree(&self, index: usize) -> usize {
        self.irreducibles[index].degree
    }

    pub fn index_of(&self, label: &str) -> Result<usize, RepError> {
        self.irreducibles
            .iter()
            .position(|i| i.label == label)
            .ok_or_else(|| RepError::UnknownIrreducible(label.to_string()))
    }

    /// Row of class values for one irreducible.
    pub fn row(&self, index: usize) -> &[Cyclotomic] {
        &self.values[index]
    }

    pub fn value(&self, index: usize, g: GroupElement) -> &Cyclotomic {
        &self.values[index][self.group.class_index(g)]
    }

    pub fn trivial_index(&self) -> usize {
        self.values
            .iter()
            .position(|row| row.iter().all(Cyclotomic::is_one))
            .expect("every table has a trivial character")
    }

    pub fn is_trivial(&self, index: usize) -> bool {
        self.values[index].iter().all(Cyclotomic::is_one)
    }

    /// Whether `g` lies in the kernel of the irreducible (`chi(g) = chi(1)`).
    pub fn kernel_contains(&self, index: usize, g: GroupElement) -> bool {
        *self.value(index, g) == Cyclotomic::from_integer(self.degree(index) as i64)
    }

    /// The irreducible whose character is the complex conjugate of this one.
    pub fn conjugate_character(&self, index: usize) -> usize {
        let conj: Vec<Cyclotomic> = self.values[index].iter().map(Cyclotomic::conj).collect();
        self.values
            .iter()
            .position(|row| *row == conj)
            .expect("conjugate of an irreducible character is irreducible")
    }

    /// Multiplicity of each irreducible in the character `chi_v` (one value per class).
    pub fn module_multiplicities(&self, chi_v: &[Cyclotomic]) -> Result<Vec<u64>, RepError> {
        let classes = self.classes();
        if chi_v.len() != classes.len() {
            return Err(RepError::ClassFunctionLength { got: chi_v.len(), expected: classes.len() });
        }
        let order = Rational::from_integer(BigInt::from(self.group.order()));
        let mut out = Vec::with_capacity(self.len());
        for (i, irr) in self.irreducibles.iter().enumerate() {
            let inner: Cyclotomic = classes
                .iter()
                .zip(chi_v)
                .zip(&self.values[i])
                .map(|((c, v), x)| (v * &x.conj()).scale(&Rational::from_integer(c.size().into())))
                .sum();
            let m = inner.scale(&order.recip());
            let value = m.as_rational().filter(is_nonnegative_integer);
            match value.and_then(|q| q.to_integer().to_u64()) {
                Some(m) => out.push(m),
                None => {
                    return Err(RepError::NonIntegerMultiplicity {
                        irreducible: irr.label.clone(),
                        value: m.to_string(),
                    })
                }
            }
        }
        let dim: u64 = out.iter().zip(&self.irreducibles).map(|(m, i)| m * i.degree as u64).sum();
        if Cyclotomic::from_integer(dim as i64) != chi_v[0] {
            return Err(RepError::InvariantViolated(format!(
                "multiplicities give dimension {dim}, character has {}",
                chi_v[0]
            )));
        }
        Ok(out)
    }

    /// `N_alpha`: how many eigenvalues of `rho(g)` equal `zeta_e^alpha`, `e = ord(g)`.
    ///
    /// Computed as `(1/e) sum_k chi(g^k) zeta_e^(-alpha k)`.
    pub fn eigenvalue_counts(&self, index: usize, g: GroupElement) -> Result<Vec<u64>, RepError> {
        let e = self.group.element_order(g);
        let powers: Vec<&Cyclotomic> =
            (0..e).map(|k| self.value(index, self.group.pow(g, k as i64))).collect();
        let inv_e = Rational::new(1.into(), BigInt::from(e));
        let mut counts = Vec::with_capacity(e);
        for alpha in 0..e {
            let s: Cyclotomic = powers
                .iter()
                .enumerate()
                .map(|(k, chi)| *chi * &Cyclotomic::zeta(e as u32, -((alpha * k) as i64)))
                .sum();
            let n = s.scale(&inv_e);
            match n.as_rational().filter(is_nonnegative_integer).and_then(|q| q.to_integer().to_u64()) {
                Some(c) => counts.push(c),
                None => {
                    return Err(RepError::NonIntegerCount {
                        irreducible: self.irreducibles[index].label.clone(),
                        alpha,
                        value: n.to_string(),
                    })
                }
            }
        }
        if counts.iter().sum::<u64>() != self.degree(index) as u64 {
            return Err(RepError::InvariantViolated("eigenvalue counts do not sum to the degree".into()));
        }
        Ok(counts)
    }

    /// Exact check of every table invariant.
    pub fn verify(&self) -> Result<(), RepError> {
        let classes = self.classes();
        let order = self.group.order();
        let fail = |msg: String| Err(RepError::InvariantViolated(msg));
        if self.len() != classes.len() {
            return fail(format!("{} irreducibles for {} classes", self.len(), classes.len()));
        }
        let degree_sum: usize = self.irreducibles.iter().map(|i| i.degree * i.degree).sum();
        if degree_sum != order {
            return fail(format!("sum of squared degrees is {degree_sum}, group order {order}"));
        }
        for (irr, row) in self.irreducibles.iter().zip(&self.values) {
            if row[0] != Cyclotomic::from_integer(irr.degree as i64) {
                return fail(format!("{} at the identity is {}", irr.label, row[0]));
            }
        }
        let sizes: Vec<Rational> =
            classes.iter().map(|c| Rational::from_integer(c.size().into())).collect();
        let conj: Vec<Vec<Cyclotomic>> =
            self.values.iter().map(|r| r.iter().map(Cyclotomic::conj).collect()).collect();
        for i in 0..self.len() {
            for j in i..self.len() {
                let s: Cyclotomic = (0..classes.len())
                    .map(|c| (&self.values[i][c] * &conj[j][c]).scale(&sizes[c]))
                    .sum();
                let expected = if i == j { order as i64 } else { 0 };
                if s != Cyclotomic::from_integer(expected) {
                    return fail(format!(
                        "<{}, {}> = {s}, expected {expected}",
                        self.irreducibles[i].label, self.irreducibles[j].label
                    ));
                }
            }
        }
        Ok(())
    }

    /// Character of the regular representation: `|G|` at the identity, 0 elsewhere.
    pub fn regular_character(&self) -> Vec<Cyclotomic> {
        let mut v = vec![Cyclotomic::zero(); self.classes().len()];
        v[0] = Cyclotomic::from_integer(self.group.order() as i64);
        v
    }
}

/// Whether two tables agree up to a permutation of rows (same group).
pub fn rows_match_up_to_permutation(a: &CharacterTable, b: &CharacterTable) -> bool {
    if a.len() != b.len() || !a.group.same_group(&b.group) {
        return false;
    }
    let mut used = vec![false; b.len()];
    for row in &a.values {
        match (0..b.len()).find(|&j| !used[j] && b.values[j] == *row) {
            Some(j) => used[j] = true,
            None => return false,
        }
    }
    true
}
