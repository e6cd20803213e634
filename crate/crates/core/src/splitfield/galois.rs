//! Permutation groups on the distinct roots of a Weil polynomial.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::weil::WeilPolynomial;
use crate::Error;

/// A permutation of root indices: `p[i]` is the image of `i`.
pub type Perm = Vec<usize>;

/// Largest ambient group searched for the Galois group.
pub const AMBIENT_LIMIT: usize = 400;

/// `(a . b)(i) = a(b(i))`.
pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

pub fn invert(a: &[usize]) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j] = i;
    }
    out
}

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Root indices of each irreducible factor, in root order.
pub fn factor_blocks(w: &WeilPolynomial) -> Vec<Vec<usize>> {
    let mut blocks = vec![Vec::new(); w.irreducible_factors().len()];
    for (i, &fi) in w.root_factor().iter().enumerate() {
        blocks[fi].push(i);
    }
    blocks
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Size of the group of block-preserving permutations commuting with the
/// involution.
pub fn ambient_order(w: &WeilPolynomial) -> usize {
    factor_blocks(w)
        .iter()
        .map(|b| {
            if b.len() >= 2 && !w.is_real_root(b[0]) {
                let k = b.len() / 2;
                (1usize << k).saturating_mul(factorial(k))
            } else {
                factorial(b.len())
            }
        })
        .fold(1usize, |a, b| a.saturating_mul(b))
}

/// All permutations of the distinct roots that map every irreducible factor's
/// roots to themselves and commute with the involution. Contains the Galois group.
pub fn ambient_group(w: &WeilPolynomial) -> Result<Vec<Perm>, Error> {
    let size = ambient_order(w);
    if size > AMBIENT_LIMIT {
        return Err(Error::DegreeCapExceeded(size));
    }
    let n = w.num_roots();
    let inv = w.involution();
    let mut group = vec![identity(n)];
    for block in factor_blocks(w) {
        let mut local: Vec<Vec<(usize, usize)>> = Vec::new();
        if block.len() >= 2 && !w.is_real_root(block[0]) {
            let reps: Vec<usize> = block.iter().copied().filter(|&i| inv[i] > i).collect();
            let k = reps.len();
            for p in all_permutations(k) {
                for flips in 0..(1u32 << k) {
                    let mut moves = Vec::with_capacity(2 * k);
                    for j in 0..k {
                        let target = if flips >> j & 1 == 1 { inv[reps[p[j]]] } else { reps[p[j]] };
                        moves.push((reps[j], target));
                        moves.push((inv[reps[j]], inv[target]));
                    }
                    local.push(moves);
                }
            }
        } else {
            for p in all_permutations(block.len()) {
                local.push(block.iter().enumerate().map(|(j, &i)| (i, block[p[j]])).collect());
            }
        }
        let mut next = Vec::with_capacity(group.len() * local.len());
        for g in &group {
            for moves in &local {
                let mut h = g.clone();
                for &(from, to) in moves {
                    h[from] = to;
                }
                next.push(h);
            }
        }
        group = next;
    }
    group.sort();
    Ok(group)
}

/// A finite permutation group with its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisGroup {
    perms: Vec<Perm>,
    table: Vec<Vec<usize>>,
}

impl GaloisGroup {
    /// Builds the group from a list of permutations closed under composition.
    pub fn from_perms(mut perms: Vec<Perm>) -> Result<Self, Error> {
        perms.sort();
        perms.dedup();
        let index: HashMap<&Perm, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut table = vec![vec![0; perms.len()]; perms.len()];
        for (i, a) in perms.iter().enumerate() {
            for (j, b) in perms.iter().enumerate() {
                let c = compose(a, b);
                table[i][j] = *index
                    .get(&c)
                    .ok_or_else(|| Error::InternalInconsistency("permutation set is not closed".into()))?;
            }
        }
        Ok(GaloisGroup { perms, table })
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    /// Permutations in lexicographic order; the identity comes first.
    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    /// `table[i][j]` is the index of `perms[i] . perms[j]`.
    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn contains(&self, p: &[usize]) -> bool {
        self.perms.binary_search_by(|x| x.as_slice().cmp(p)).is_ok()
    }

    /// Orbits of the action on root indices, each sorted, ordered by least element.
    pub fn root_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.perms.first().map_or(0, |p| p.len());
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut orbit: Vec<usize> = self.perms.iter().map(|p| p[i]).collect();
            orbit.sort();
            orbit.dedup();
            for &j in &orbit {
                seen[j] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Checks closure, inverses and that every element commutes with `involution`.
    pub fn verify(&self, involution: &[usize]) -> Result<(), Error> {
        for p in &self.perms {
            if !self.contains(&invert(p)) {
                return Err(Error::InternalInconsistency("group not closed under inverses".into()));
            }
            if compose(p, involution) != compose(involution, p) {
                return Err(Error::InternalInconsistency("automorphism does not commute with q/x".into()));
            }
        }
        if !self.contains(involution) {
            return Err(Error::InternalInconsistency("complex conjugation missing".into()));
        }
        Ok(())
    }
}

/// Subgroups of `ambient` (given as sorted index sets) that contain `seed`,
/// have order at most `cap`, and satisfy `keep`; sorted by order, then indices.
pub fn subgroups_containing(
    ambient: &[Perm],
    seed: &[usize],
    cap: usize,
    keep: impl Fn(&[usize]) -> bool,
) -> Vec<Vec<usize>> {
    let index: HashMap<&Perm, usize> = ambient.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let m = ambient.len();
    let mul: Vec<Vec<usize>> =
        (0..m).map(|i| (0..m).map(|j| index[&compose(&ambient[i], &ambient[j])]).collect()).collect();
    let id = index[&identity(seed.len())];
    let closure = |gens: &[usize]| -> Vec<usize> {
        let mut set = BTreeSet::from([id]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = mul[x][g];
                if set.insert(y) {
                    queue.push_back(y);
                    if set.len() > cap {
                        return set.into_iter().collect();
                    }
                }
            }
        }
        set.into_iter().collect()
    };
    let start = closure(&[index[&seed.to_vec()]]);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    if start.len() <= cap {
        seen.insert(start.clone());
        queue.push_back(start);
    }
    while let Some(h) = queue.pop_front() {
        for t in 0..m {
            if h.binary_search(&t).is_ok() {
                continue;
            }
            let mut gens = h.clone();
            gens.push(t);
            let k = closure(&gens);
            if k.len() <= cap && !seen.contains(&k) {
                seen.insert(k.clone());
                queue.push_back(k);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen.into_iter().filter(|h| keep(h)).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Is the group (index set into `ambient`) transitive on every block?
pub fn transitive_on_blocks(ambient: &[Perm], h: &[usize], blocks: &[Vec<usize>]) -> bool {
    blocks.iter().all(|b| {
        let orbit: BTreeSet<usize> = h.iter().map(|&e| ambient[e][b[0]]).collect();
        orbit.len() == b.len()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wreath_product_order() {
        // X^6 + X^5 + X^4 + X^3 + 2X^2 + 4X + 8 is irreducible with no real roots
        let w = WeilPolynomial::from_i64(2, &[8, 4, 2, 1, 1, 1, 1]).unwrap();
        assert_eq!(w.irreducible_factors().len(), 1);
        let t = ambient_group(&w).unwrap();
        assert_eq!(t.len(), 48);
        let inv = w.involution();
        assert!(t.iter().all(|p| compose(p, inv) == compose(inv, p)));
    }

    #[test]
    fn subgroups_of_klein_four() {
        let w = WeilPolynomial::from_i64(5, &[25, -5, 10, -1, 1]).unwrap();
        let t = ambient_group(&w).unwrap();
        assert_eq!(t.len(), 4);
        let subs = subgroups_containing(&t, w.involution(), 48, |_| true);
        assert_eq!(subs.iter().map(|s| s.len()).collect::<Vec<_>>(), vec![2, 4]);
    }
}
