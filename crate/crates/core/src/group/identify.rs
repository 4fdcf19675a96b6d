use super::{FiniteGroup, GroupElement};

/// Realizes an abstract group (given by its product on `0..order`, with 0 the
/// identity) as a catalog group when it is cyclic or dihedral, and as its
/// right regular permutation representation otherwise.
///
/// Returns the group together with the image of each abstract element.
pub(super) fn recognize(
    order: usize,
    mul: &dyn Fn(usize, usize) -> usize,
) -> (FiniteGroup, Vec<GroupElement>) {
    let orders: Vec<usize> = (0..order)
        .map(|x| {
            let (mut y, mut k) = (x, 1);
            while y != 0 {
                y = mul(y, x);
                k += 1;
            }
            k
        })
        .collect();
    let inverse = |x: usize| (0..order).find(|&y| mul(x, y) == 0).unwrap_or(0);

    if let Some(generator) = (0..order).find(|&x| orders[x] == order) {
        let group = FiniteGroup::cyclic_with_cap(order, usize::MAX).expect("order >= 1");
        let mut map = vec![GroupElement::from_index(0); order];
        let mut x = 0;
        for k in 0..order {
            map[x] = GroupElement::from_index(k);
            x = mul(x, generator);
        }
        return (group, map);
    }

    if order >= 4 && order % 2 == 0 {
        let half = order / 2;
        for rot in (0..order).filter(|&x| orders[x] == half) {
            let mut powers = vec![0usize; half];
            for k in 1..half {
                powers[k] = mul(powers[k - 1], rot);
            }
            let inv_rot = inverse(rot);
            let flip = (0..order).find(|&y| {
                orders[y] == 2 && !powers.contains(&y) && mul(mul(y, rot), y) == inv_rot
            });
            if let Some(flip) = flip {
                let group = FiniteGroup::dihedral_with_cap(half, usize::MAX).expect("half >= 2");
                let mut map = vec![GroupElement::from_index(0); order];
                for (k, &p) in powers.iter().enumerate() {
                    map[p] = GroupElement::from_index(k);
                    map[mul(p, flip)] = GroupElement::from_index(k + half);
                }
                return (group, map);
            }
        }
    }

    // Greedy generating set, then the right regular representation x -> (p -> p x).
    let mut generators: Vec<usize> = Vec::new();
    let mut reached = vec![false; order];
    reached[0] = true;
    for candidate in 1..order {
        if reached[candidate] {
            continue;
        }
        generators.push(candidate);
        reached = closure(order, mul, &generators);
    }
    let image_list = |x: usize| -> Vec<usize> { (0..order).map(|p| mul(p, x) + 1).collect() };
    let gens: Vec<Vec<usize>> = if generators.is_empty() {
        vec![image_list(0)]
    } else {
        generators.iter().map(|&g| image_list(g)).collect()
    };
    let group = FiniteGroup::permutation_with_cap(order, &gens, usize::MAX)
        .expect("regular representation is a valid permutation group");
    let map = (0..order)
        .map(|x| {
            let label = super::image_list_label_1based(&image_list(x));
            group.parse_element(&label).expect("regular image lies in the group")
        })
        .collect();
    (group, map)
}

fn closure(order: usize, mul: &dyn Fn(usize, usize) -> usize, gens: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; order];
    inside[0] = true;
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = mul(x, g);
            if !inside[y] {
                inside[y] = true;
                stack.push(y);
            }
        }
    }
    inside
}
