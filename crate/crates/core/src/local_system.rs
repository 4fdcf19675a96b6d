//! Isotypic decomposition of the direct image local system and the
//! Chevalley-Weil multiplicities of holomorphic differentials.

use num::{BigInt, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::cover::{quotient_datum, BranchDatum, CoverError};
use crate::cyclotomic::{fractional_part, is_nonnegative_integer, CycloMatrix, Rational};
use crate::group::{GroupElement, Subgroup};
use crate::rep::{irreducible_image, CharacterTable, RepError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalSystemError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("character table belongs to a different group")]
    TableMismatch,
    #[error("Chevalley-Weil multiplicity of {irreducible} is {value}")]
    NonIntegralMultiplicity { irreducible: String, value: String },
    #[error("sum of d * mu is {sum} but Riemann-Hurwitz genus is {genus}")]
    GenusMismatch { sum: u64, genus: usize },
    #[error("branch {0} is unramified in the quotient")]
    BranchDropped(String),
    #[error("path basis needs a rational base curve, base genus is {0}")]
    BaseNotRational(usize),
}

type Result<T> = std::result::Result<T, LocalSystemError>;

fn check_table(d: &BranchDatum, table: &CharacterTable) -> Result<()> {
    if std::sync::Arc::ptr_eq(d.group(), table.group()) || d.group().same_group(table.group()) {
        Ok(())
    } else {
        Err(LocalSystemError::TableMismatch)
    }
}

/// Exact value of `d(g' - 1) + sum_i sum_alpha N_(i,alpha) <-alpha/e_i> + eps`.
pub fn chevalley_weil_value(d: &BranchDatum, table: &CharacterTable, irr: usize) -> Result<Rational> {
    check_table(d, table)?;
    let degree = table.degree(irr) as i64;
    let mut mu = Rational::from_integer(BigInt::from(degree * (d.base_genus() as i64 - 1)));
    for b in d.branches() {
        let counts = table.eigenvalue_counts(irr, b.monodromy)?;
        let e = counts.len() as i64;
        for (alpha, &n) in counts.iter().enumerate() {
            if n > 0 {
                let frac = fractional_part(&Rational::new(BigInt::from(-(alpha as i64)), BigInt::from(e)));
                mu += frac * Rational::from_integer(BigInt::from(n));
            }
        }
    }
    if table.is_trivial(irr) {
        mu += Rational::from_integer(BigInt::from(1));
    }
    Ok(mu)
}

/// Multiplicity of the irreducible in `H^0(C, Omega^1)`.
pub fn chevalley_weil_multiplicity(d: &BranchDatum, table: &CharacterTable, irr: usize) -> Result<u64> {
    let mu = chevalley_weil_value(d, table, irr)?;
    if is_nonnegative_integer(&mu) {
        if let Some(v) = mu.to_integer().to_u64() {
            return Ok(v);
        }
    }
    Err(LocalSystemError::NonIntegralMultiplicity {
        irreducible: table.irreducible(irr).label.clone(),
        value: mu.to_string(),
    })
}

/// `(h^{1,0}, h^{0,1})` of the isotypic part of `H^1`: `(d mu_rho, d mu_rho_bar)`.
pub fn eigenspace_type(d: &BranchDatum, table: &CharacterTable, irr: usize) -> Result<(u64, u64)> {
    let degree = table.degree(irr) as u64;
    let mu = chevalley_weil_multiplicity(d, table, irr)?;
    let mu_bar = chevalley_weil_multiplicity(d, table, table.conjugate_character(irr))?;
    Ok((degree * mu, degree * mu_bar))
}

/// Indices of branches where the irreducible has nontrivial local monodromy.
pub fn local_system_support_indices(d: &BranchDatum, table: &CharacterTable, irr: usize) -> Result<Vec<usize>> {
    check_table(d, table)?;
    let mut out = Vec::new();
    for (i, b) in d.branches().iter().enumerate() {
        let counts = table.eigenvalue_counts(irr, b.monodromy)?;
        if counts.iter().skip(1).any(|&n| n > 0) {
            out.push(i);
        }
    }
    Ok(out)
}

/// `Delta_rho`: labels of branches with nontrivial local monodromy.
pub fn local_system_support(d: &BranchDatum, table: &CharacterTable, irr: usize) -> Result<Vec<String>> {
    Ok(local_system_support_indices(d, table, irr)?
        .into_iter()
        .map(|i| d.branches()[i].label.clone())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub irreducible: String,
    pub rank: usize,
    pub support: Vec<String>,
    pub mu: u64,
    pub hodge_type: (u64, u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalSystemDecomposition {
    pub genus: usize,
    pub summands: Vec<Summand>,
}

impl LocalSystemDecomposition {
    /// `sum_rho d_rho mu_rho`, equal to the genus.
    pub fn weighted_mu_sum(&self) -> u64 {
        self.summands.iter().map(|s| s.rank as u64 * s.mu).sum()
    }
}

/// One summand per irreducible, with the `sum d mu = g` cross-check enforced.
pub fn decompose_direct_image(d: &BranchDatum, table: &CharacterTable) -> Result<LocalSystemDecomposition> {
    check_table(d, table)?;
    d.require_valid()?;
    let genus = d.riemann_hurwitz_genus()?;
    let mus = (0..table.len())
        .map(|i| chevalley_weil_multiplicity(d, table, i))
        .collect::<Result<Vec<u64>>>()?;
    let mut summands = Vec::with_capacity(table.len());
    for (i, irr) in table.irreducibles().iter().enumerate() {
        let degree = irr.degree as u64;
        summands.push(Summand {
            irreducible: irr.label.clone(),
            rank: irr.degree,
            support: local_system_support(d, table, i)?,
            mu: mus[i],
            hodge_type: (degree * mus[i], degree * mus[table.conjugate_character(i)]),
        });
    }
    let out = LocalSystemDecomposition { genus, summands };
    let sum = out.weighted_mu_sum();
    if sum != genus as u64 {
        return Err(LocalSystemError::GenusMismatch { sum, genus });
    }
    Ok(out)
}

/// `rho_1(g) + ... + rho_s(g)` in table order, as labelled blocks.
pub fn element_blocks(table: &CharacterTable, g: GroupElement) -> Result<Vec<(String, CycloMatrix)>> {
    (0..table.len())
        .map(|i| Ok((table.irreducible(i).label.clone(), irreducible_image(table, i, g)?)))
        .collect()
}

pub fn monodromy_blocks(d: &BranchDatum, table: &CharacterTable, k: usize) -> Result<Vec<(String, CycloMatrix)>> {
    check_table(d, table)?;
    let b = d.branch(k)?;
    element_blocks(table, b.monodromy)
}

/// Block-diagonal local monodromy around branch `k`.
pub fn monodromy_matrix(d: &BranchDatum, table: &CharacterTable, k: usize) -> Result<CycloMatrix> {
    let blocks: Vec<CycloMatrix> = monodromy_blocks(d, table, k)?.into_iter().map(|(_, m)| m).collect();
    Ok(CycloMatrix::block_diagonal(&blocks))
}

/// Block-diagonal image of a handle generator (`alpha_1, beta_1, ...` by position).
pub fn handle_matrix(d: &BranchDatum, table: &CharacterTable, j: usize) -> Result<CycloMatrix> {
    check_table(d, table)?;
    let h = *d
        .handles()
        .get(j)
        .ok_or(CoverError::IndexOutOfRange { index: j, len: d.handles().len() })?;
    let blocks: Vec<CycloMatrix> = element_blocks(table, h)?.into_iter().map(|(_, m)| m).collect();
    Ok(CycloMatrix::block_diagonal(&blocks))
}

#[derive(Clone, Debug)]
pub struct QuotientMonodromy {
    /// Irreducibles of `G` trivial on `N`, in table order.
    pub irreducibles: Vec<usize>,
    pub blocks: Vec<CycloMatrix>,
    pub matrix: CycloMatrix,
}

/// Monodromy of the quotient cover around branch `k`, through the
/// irreducibles of `G` whose kernel contains `N`.
pub fn quotient_monodromy(
    d: &BranchDatum,
    table: &CharacterTable,
    normal: &Subgroup,
    k: usize,
) -> Result<QuotientMonodromy> {
    check_table(d, table)?;
    let quotient = quotient_datum(d, normal)?;
    let b = d.branch(k)?;
    if !quotient.branch_origin.contains(&k) {
        return Err(LocalSystemError::BranchDropped(b.label.clone()));
    }
    let irreducibles: Vec<usize> = (0..table.len())
        .filter(|&i| normal.members.iter().all(|&n| table.kernel_contains(i, n)))
        .collect();
    let blocks = irreducibles
        .iter()
        .map(|&i| irreducible_image(table, i, b.monodromy))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let matrix = CycloMatrix::block_diagonal(&blocks);
    Ok(QuotientMonodromy { irreducibles, blocks, matrix })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathBasisReport {
    pub irreducible: String,
    /// `(i, k)` with `1 <= i <= d_rho`, `1 <= k <= |Delta_rho|`.
    pub labels: Vec<(usize, usize)>,
    pub claimed_dim: u64,
    pub cw_dim: u64,
    pub consistent: bool,
}

/// Compares the path-basis count `d |Delta|` with `dim H^1_rho = d (mu + mu_bar)`.
pub fn path_basis_report(d: &BranchDatum, table: &CharacterTable, irr: usize) -> Result<PathBasisReport> {
    if d.base_genus() > 0 {
        return Err(LocalSystemError::BaseNotRational(d.base_genus()));
    }
    let degree = table.degree(irr);
    let support = local_system_support_indices(d, table, irr)?;
    let labels: Vec<(usize, usize)> =
        (1..=degree).flat_map(|i| (1..=support.len()).map(move |k| (i, k))).collect();
    let claimed_dim = (degree * support.len()) as u64;
    let (h10, h01) = eigenspace_type(d, table, irr)?;
    let cw_dim = h10 + h01;
    Ok(PathBasisReport {
        irreducible: table.irreducible(irr).label.clone(),
        labels,
        claimed_dim,
        cw_dim,
        consistent: claimed_dim == cw_dim,
    })
}
