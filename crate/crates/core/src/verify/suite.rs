use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::groups::{FiniteGroup, GroupAction};

/// A faithful permutation group given by generators on `degree` points.
struct Entry {
    name: &'static str,
    degree: usize,
    order: usize,
    gens: &'static [&'static [usize]],
}

const CATALOGUE: &[Entry] = &[
    Entry { name: "C2", degree: 2, order: 2, gens: &[&[1, 0]] },
    Entry { name: "C3", degree: 3, order: 3, gens: &[&[1, 2, 0]] },
    Entry { name: "C4", degree: 4, order: 4, gens: &[&[1, 2, 3, 0]] },
    Entry { name: "C2xC2", degree: 4, order: 4, gens: &[&[1, 0, 2, 3], &[0, 1, 3, 2]] },
    Entry { name: "C5", degree: 5, order: 5, gens: &[&[1, 2, 3, 4, 0]] },
    Entry { name: "C6", degree: 5, order: 6, gens: &[&[1, 0, 3, 4, 2]] },
    Entry { name: "S3", degree: 3, order: 6, gens: &[&[1, 0, 2], &[1, 2, 0]] },
    Entry { name: "C7", degree: 7, order: 7, gens: &[&[1, 2, 3, 4, 5, 6, 0]] },
    Entry { name: "D4", degree: 4, order: 8, gens: &[&[1, 2, 3, 0], &[3, 2, 1, 0]] },
    Entry { name: "C2^3", degree: 6, order: 8, gens: &[&[1, 0, 2, 3, 4, 5], &[0, 1, 3, 2, 4, 5], &[0, 1, 2, 3, 5, 4]] },
    Entry { name: "C8", degree: 8, order: 8, gens: &[&[1, 2, 3, 4, 5, 6, 7, 0]] },
    Entry { name: "C3xC3", degree: 6, order: 9, gens: &[&[1, 2, 0, 3, 4, 5], &[0, 1, 2, 4, 5, 3]] },
    Entry { name: "D5", degree: 5, order: 10, gens: &[&[1, 2, 3, 4, 0], &[0, 4, 3, 2, 1]] },
    Entry { name: "A4", degree: 4, order: 12, gens: &[&[1, 2, 0, 3], &[1, 0, 3, 2]] },
    Entry { name: "S3xC2", degree: 5, order: 12, gens: &[&[1, 0, 2, 3, 4], &[1, 2, 0, 3, 4], &[0, 1, 2, 4, 3]] },
];

/// Largest `|G|·|S|`, which keeps exhaustive four-variable checks on `A*`
/// cheap.
pub const MAX_STAR_SIZE: usize = 64;

/// A member of the random suite.
#[derive(Clone, Debug)]
pub struct SuiteMember {
    pub name: String,
    pub action: GroupAction,
}

/// `count` faithful actions of groups of order at most `max_order`: a
/// catalogue group on its points plus up to two fixed points, with the
/// points shuffled. Deterministic in `seed`.
pub fn random_faithful_actions(seed: u64, count: usize, max_order: usize) -> Result<Vec<SuiteMember>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<&Entry> = CATALOGUE
        .iter()
        .filter(|e| e.order <= max_order && e.order * e.degree <= MAX_STAR_SIZE)
        .collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let e = entries[rng.gen_range(0..entries.len())];
        let room = (MAX_STAR_SIZE / e.order - e.degree).min(2);
        let extra = rng.gen_range(0..=room);
        let degree = e.degree + extra;
        let mut relabel: Vec<usize> = (0..degree).collect();
        relabel.shuffle(&mut rng);
        let gens: Vec<Vec<usize>> = e
            .gens
            .iter()
            .map(|g| {
                let mut p = vec![0; degree];
                for i in 0..degree {
                    let img = if i < e.degree { g[i] } else { i };
                    p[relabel[i]] = relabel[img];
                }
                p
            })
            .collect();
        let (_, action) = FiniteGroup::from_permutations(degree, &gens)?;
        debug_assert_eq!(action.group().size(), e.order);
        let name = if extra == 0 {
            format!("{}@{}", e.name, e.degree)
        } else {
            format!("{}@{}+{}", e.name, e.degree, extra)
        };
        out.push(SuiteMember { name, action });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_orders_and_faithfulness() {
        for e in CATALOGUE {
            let gens: Vec<Vec<usize>> = e.gens.iter().map(|g| g.to_vec()).collect();
            let (g, act) = FiniteGroup::from_permutations(e.degree, &gens).unwrap();
            assert_eq!(g.size(), e.order, "{}", e.name);
            assert!(act.is_faithful());
        }
    }

    #[test]
    fn deterministic_and_bounded() {
        let a = random_faithful_actions(7, 20, 12).unwrap();
        let b = random_faithful_actions(7, 20, 12).unwrap();
        assert_eq!(a.len(), 20);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.action.table(), y.action.table());
            assert!(x.action.is_faithful());
            assert!(x.action.group().size() * x.action.set_size() <= MAX_STAR_SIZE);
        }
        let small = random_faithful_actions(1, 30, 4).unwrap();
        assert!(small.iter().all(|m| m.action.group().size() <= 4));
    }
}
