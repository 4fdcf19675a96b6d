use super::identify::recognize;
use super::{FiniteGroup, GroupElement, GroupError, Subgroup};

/// `G/N` realized as a catalog group where possible, with the projection.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub group: FiniteGroup,
    /// Image of every element of the parent group, indexed by element.
    pub projection: Vec<GroupElement>,
}

impl QuotientGroup {
    pub fn project(&self, g: GroupElement) -> GroupElement {
        self.projection[g.index()]
    }
}

/// A subgroup re-materialized as a standalone group.
#[derive(Clone, Debug)]
pub struct EmbeddedSubgroup {
    pub group: FiniteGroup,
    /// Parent element for each element of `group`.
    pub embedding: Vec<GroupElement>,
}

impl EmbeddedSubgroup {
    /// Element of `group` corresponding to a parent element, if it lies in the subgroup.
    pub fn restrict(&self, parent: GroupElement) -> Option<GroupElement> {
        self.embedding
            .iter()
            .position(|&x| x == parent)
            .map(GroupElement::from_index)
    }
}

impl FiniteGroup {
    /// Coset group `G/N`; fails unless `N` is normal in `G`.
    pub fn quotient_group(&self, normal: &Subgroup) -> Result<QuotientGroup, GroupError> {
        let order = self.order();
        let mut inside = vec![false; order];
        for &m in &normal.members {
            if m.index() >= order {
                return Err(GroupError::IndexOutOfRange { index: m.index(), order });
            }
            inside[m.index()] = true;
        }
        if !inside[0] || !self.is_normal_set(&inside, &normal.members) {
            return Err(GroupError::NotNormal);
        }

        let mut coset_of = vec![usize::MAX; order];
        let mut reps: Vec<GroupElement> = Vec::new();
        for g in self.elements() {
            if coset_of[g.index()] != usize::MAX {
                continue;
            }
            for &n in &normal.members {
                coset_of[self.mul(g, n).index()] = reps.len();
            }
            reps.push(g);
        }
        let m = reps.len();
        let mut table = vec![0usize; m * m];
        for i in 0..m {
            for j in 0..m {
                table[i * m + j] = coset_of[self.mul(reps[i], reps[j]).index()];
            }
        }
        let (group, map) = recognize(m, &|i, j| table[i * m + j]);
        let projection = self.elements().map(|g| map[coset_of[g.index()]]).collect();
        Ok(QuotientGroup { group, projection })
    }

    /// The subgroup as a group in its own right, recognized as cyclic or
    /// dihedral when possible.
    pub fn subgroup_as_group(&self, subgroup: &Subgroup) -> EmbeddedSubgroup {
        let members = &subgroup.members;
        let m = members.len();
        let position = |g: GroupElement| {
            members.binary_search(&g).expect("subgroup is closed under products")
        };
        let mut table = vec![0usize; m * m];
        for i in 0..m {
            for j in 0..m {
                table[i * m + j] = position(self.mul(members[i], members[j]));
            }
        }
        let (group, map) = recognize(m, &|i, j| table[i * m + j]);
        let mut embedding = vec![self.identity(); m];
        for (i, image) in map.iter().enumerate() {
            embedding[image.index()] = members[i];
        }
        EmbeddedSubgroup { group, embedding }
    }
}
