use serde::Serialize;

use super::{FiniteGroup, GroupError, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SubgroupShape {
    Cyclic,
    Dihedral,
}

#[derive(Clone, Debug)]
pub struct DihedralSubgroup {
    /// Generator description such as `<a^2>` or `<a^2, a*b>`.
    pub description: String,
    pub shape: SubgroupShape,
    /// Index in `D_n`.
    pub index: usize,
    pub subgroup: Subgroup,
}

/// All subgroups of `D_n`: the rotation subgroups `<a^i>` (`i | n`), the
/// reflection subgroups `<a^i b>` and the dihedral subgroups `<a^j, a^i b>`
/// (`j | n`, `j != n`, `0 <= i < j`), in that order.
pub fn dihedral_subgroups(n: usize) -> Result<Vec<DihedralSubgroup>, GroupError> {
    let group = FiniteGroup::dihedral(n)?;
    let order = group.order();
    let rot = |k: usize| group.dihedral_element(k as i64, false).expect("dihedral");
    let refl = |k: usize| group.dihedral_element(k as i64, true).expect("dihedral");
    let word = |k: usize, reflection: bool| {
        let mut g = match k {
            0 if reflection => String::new(),
            0 => "1".to_string(),
            1 => "a".to_string(),
            _ => format!("a^{k}"),
        };
        if reflection {
            if !g.is_empty() {
                g.push('*');
            }
            g.push('b');
        }
        g
    };
    let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();

    let mut out = Vec::new();
    for &i in &divisors {
        let subgroup = group.subgroup_generated(&[rot(i % n)]);
        out.push(DihedralSubgroup {
            description: format!("<{}>", word(i % n, false)),
            shape: SubgroupShape::Cyclic,
            index: order / subgroup.order(),
            subgroup,
        });
    }
    for i in 0..n {
        let subgroup = group.subgroup_generated(&[refl(i)]);
        out.push(DihedralSubgroup {
            description: format!("<{}>", word(i, true)),
            shape: SubgroupShape::Cyclic,
            index: order / subgroup.order(),
            subgroup,
        });
    }
    for &j in divisors.iter().filter(|&&j| j != n) {
        for i in 0..j {
            let subgroup = group.subgroup_generated(&[rot(j), refl(i)]);
            out.push(DihedralSubgroup {
                description: format!("<{}, {}>", word(j, false), word(i, true)),
                shape: SubgroupShape::Dihedral,
                index: order / subgroup.order(),
                subgroup,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d3_has_six_subgroups() {
        let subs = dihedral_subgroups(3).unwrap();
        let names: Vec<&str> = subs.iter().map(|s| s.description.as_str()).collect();
        assert_eq!(names, ["<a>", "<1>", "<b>", "<a*b>", "<a^2*b>", "<a, b>"]);
        assert_eq!(subs.last().unwrap().subgroup.order(), 6);
    }

    #[test]
    fn dihedral_type_has_index_j() {
        for n in 2..=12 {
            for s in dihedral_subgroups(n).unwrap() {
                if s.shape == SubgroupShape::Dihedral {
                    let rotation = s.description[1..].split(',').next().unwrap();
                    let j: usize = rotation.strip_prefix("a^").map_or(1, |e| e.parse().unwrap());
                    assert_eq!(s.index, j, "{} in D_{n}", s.description);
                }
            }
        }
    }

    #[test]
    fn rejects_small_n() {
        assert!(dihedral_subgroups(1).is_err());
    }
}
