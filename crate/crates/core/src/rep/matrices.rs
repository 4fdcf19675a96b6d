use num::BigInt;

use crate::cyclotomic::{CycloMatrix, Cyclotomic, Rational};
use crate::group::{FiniteGroup, GroupElement, GroupSpec};

use super::{CharacterTable, IrrepKind, RepError};

/// A matrix representation, one matrix per group element (by element index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRep {
    degree: usize,
    images: Vec<CycloMatrix>,
}

impl MatrixRep {
    pub fn new(degree: usize, images: Vec<CycloMatrix>) -> Self {
        assert!(images.iter().all(|m| m.size() == degree), "image has wrong size");
        MatrixRep { degree, images }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn image(&self, g: GroupElement) -> &CycloMatrix {
        &self.images[g.index()]
    }

    pub fn images(&self) -> &[CycloMatrix] {
        &self.images
    }

    /// Checks `rho(g) rho(h) = rho(gh)` for every pair.
    pub fn verify_homomorphism(&self, group: &FiniteGroup) -> Result<(), RepError> {
        if self.images.len() != group.order() {
            return Err(RepError::InvariantViolated("one matrix per element expected".into()));
        }
        for g in group.elements() {
            for h in group.elements() {
                if &self.images[g.index()] * &self.images[h.index()] != self.images[group.mul(g, h).index()] {
                    return Err(RepError::NotMultiplicative(group.label(g).into(), group.label(h).into()));
                }
            }
        }
        Ok(())
    }

    /// Character as class values.
    pub fn character(&self, group: &FiniteGroup) -> Vec<Cyclotomic> {
        group
            .conjugacy_classes()
            .iter()
            .map(|c| self.images[c.representative.index()].trace())
            .collect()
    }

    pub fn direct_sum(parts: &[MatrixRep]) -> MatrixRep {
        let count = parts.first().map_or(0, |p| p.images.len());
        let degree = parts.iter().map(|p| p.degree).sum();
        let images = (0..count)
            .map(|i| {
                let blocks: Vec<CycloMatrix> = parts.iter().map(|p| p.images[i].clone()).collect();
                CycloMatrix::block_diagonal(&blocks)
            })
            .collect();
        MatrixRep { degree, images }
    }
}

/// Explicit matrix of an irreducible at `g`; catalog groups only.
pub fn irreducible_image(
    table: &CharacterTable,
    index: usize,
    g: GroupElement,
) -> Result<CycloMatrix, RepError> {
    let group = table.group();
    let int = Cyclotomic::from_integer;
    match (group.kind(), &table.irreducible(index).kind) {
        (GroupSpec::Cyclic { n }, IrrepKind::CyclicPower { j }) => {
            Ok(CycloMatrix::diagonal(vec![Cyclotomic::zeta(*n as u32, (j * g.index()) as i64)]))
        }
        (GroupSpec::Dihedral { n }, kind) => {
            let (k, e) = group.dihedral_parts(g).expect("dihedral group");
            match *kind {
                IrrepKind::DihedralLinear { rotation_sign, reflection_sign } => {
                    let mut v = 1;
                    if rotation_sign < 0 && k % 2 == 1 {
                        v = -v;
                    }
                    if reflection_sign < 0 && e == 1 {
                        v = -v;
                    }
                    Ok(CycloMatrix::diagonal(vec![int(v)]))
                }
                IrrepKind::DihedralPlanar { h } => {
                    let t = (h * k) as i64;
                    let w = Cyclotomic::zeta(*n as u32, t);
                    let w_bar = Cyclotomic::zeta(*n as u32, -t);
                    Ok(if e == 0 {
                        CycloMatrix::diagonal(vec![w, w_bar])
                    } else {
                        CycloMatrix::from_rows(vec![vec![int(0), w], vec![w_bar, int(0)]])
                    })
                }
                _ => Err(RepError::UnsupportedGroupKind),
            }
        }
        _ => Err(RepError::UnsupportedGroupKind),
    }
}

/// All matrices of an irreducible, checked to be a homomorphism with the tabulated character.
pub fn irreducible_matrices(table: &CharacterTable, index: usize) -> Result<MatrixRep, RepError> {
    let group = table.group();
    let images = group
        .elements()
        .map(|g| irreducible_image(table, index, g))
        .collect::<Result<Vec<_>, _>>()?;
    let rep = MatrixRep::new(table.degree(index), images);
    rep.verify_homomorphism(group)?;
    if rep.character(group) != table.row(index) {
        return Err(RepError::InvariantViolated("matrix traces disagree with the table".into()));
    }
    Ok(rep)
}

/// Left regular representation: `R(g) e_x = e_(gx)`.
pub fn regular_representation(group: &FiniteGroup) -> MatrixRep {
    let n = group.order();
    let images = group
        .elements()
        .map(|g| {
            let mut m = CycloMatrix::zero(n);
            for x in group.elements() {
                m.set(group.mul(g, x).index(), x.index(), Cyclotomic::one());
            }
            m
        })
        .collect();
    MatrixRep { degree: n, images }
}

#[derive(Clone, Debug)]
pub struct Projector {
    pub irreducible: usize,
    pub matrix: CycloMatrix,
    pub rank: usize,
}

/// Isotypic projectors `P_i = (d_i/|G|) sum_g conj(chi_i(g)) rho(g)`.
///
/// Idempotence, mutual orthogonality and completeness are verified; the
/// rank of `P_i` is `d_i` times the multiplicity of irreducible `i`.
pub fn isotypic_projectors(table: &CharacterTable, rep: &MatrixRep) -> Result<Vec<Projector>, RepError> {
    let group = table.group();
    let size = rep.degree();
    let mut out = Vec::with_capacity(table.len());
    for i in 0..table.len() {
        let mut acc = CycloMatrix::zero(size);
        for g in group.elements() {
            let c = table.value(i, g).conj();
            if !c.is_zero() {
                acc = &acc + &rep.image(g).scale(&c);
            }
        }
        let factor = Rational::new(BigInt::from(table.degree(i)), BigInt::from(group.order()));
        let matrix = acc.scale_rational(&factor);
        let rank = matrix.rank();
        out.push(Projector { irreducible: i, matrix, rank });
    }
    let mut total = CycloMatrix::zero(size);
    for (a, p) in out.iter().enumerate() {
        if &p.matrix * &p.matrix != p.matrix {
            return Err(RepError::InvariantViolated(format!("projector {a} is not idempotent")));
        }
        for (b, q) in out.iter().enumerate().skip(a + 1) {
            if !(&p.matrix * &q.matrix).is_zero() {
                return Err(RepError::InvariantViolated(format!("projectors {a} and {b} are not orthogonal")));
            }
        }
        total = &total + &p.matrix;
    }
    if !total.is_identity() {
        return Err(RepError::InvariantViolated("projectors do not sum to the identity".into()));
    }
    Ok(out)
}
