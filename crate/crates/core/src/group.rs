//! Finite groups as explicit multiplication tables, finite G-sets, and
//! wreath-product elements.
//!
//! Group elements are indices in `[0, order)`. Every table is validated on
//! construction, so downstream code may index freely.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
}

impl GroupTable {
    /// The cyclic group `Z_k` with `i * j = (i + j) mod k`.
    pub fn cyclic(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let mul = (0..k).map(|i| (0..k).map(|j| (i + j) % k).collect()).collect();
        Self::from_table(mul)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("trivial group")
    }

    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if order > u8::MAX as usize {
            return Err(Error::InvalidGroup(format!("order {order} exceeds 255")));
        }
        let mut mul = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!("row {i} has length {}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= order) {
                return Err(Error::InvalidGroup(format!("entry {x} out of range in row {i}")));
            }
            mul.extend_from_slice(row);
        }
        let at = |a: usize, b: usize| mul[a * order + b];

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;

        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }

        let mut inv = Vec::with_capacity(order);
        for a in 0..order {
            let b = (0..order)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
            inv.push(b);
        }

        Ok(Self { order, mul, identity, inv })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inv
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Validates `elements` as a subgroup (nonempty, closed under products
    /// and inverses).
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut mask = vec![false; self.order];
        for &g in elements {
            if g >= self.order {
                return Err(Error::NotSubgroup(format!("element {g} out of range")));
            }
            mask[g] = true;
        }
        if !mask[self.identity] {
            return Err(Error::NotSubgroup("missing the identity".into()));
        }
        for a in 0..self.order {
            if !mask[a] {
                continue;
            }
            if !mask[self.inv(a)] {
                return Err(Error::NotSubgroup(format!("not closed under inverse of {a}")));
            }
            for b in 0..self.order {
                if mask[b] && !mask[self.mul(a, b)] {
                    return Err(Error::NotSubgroup(format!("{a}*{b} escapes the subset")));
                }
            }
        }
        Ok(Subgroup::from_mask(mask))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_mask(vec![true; self.order])
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut mask = vec![false; self.order];
        mask[self.identity] = true;
        Subgroup::from_mask(mask)
    }
}

/// A subgroup as a sorted element list plus membership mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    fn from_mask(mask: Vec<bool>) -> Self {
        let elements = mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect();
        Self { elements, mask }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.mask.get(g).copied().unwrap_or(false)
    }

    /// Re-extracts the subgroup as a standalone table by index compression:
    /// the k-th smallest element of the subgroup becomes index k.
    pub fn as_group(&self, parent: &GroupTable) -> GroupTable {
        let mut compress = vec![usize::MAX; parent.order()];
        for (k, &g) in self.elements.iter().enumerate() {
            compress[g] = k;
        }
        let rows = self
            .elements
            .iter()
            .map(|&a| self.elements.iter().map(|&b| compress[parent.mul(a, b)]).collect())
            .collect();
        GroupTable::from_table(rows).expect("validated subgroup yields a group table")
    }
}

/// A finite G-set `S` with a G-invariant distinguished subset `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSetSpec {
    group: GroupTable,
    size: usize,
    action: Vec<usize>,
    t_subset: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub points: Vec<usize>,
    pub representative: usize,
    pub stabilizer: Subgroup,
}

impl GSetSpec {
    /// `action[g][s]` is the image of point `s` under `g`; `t` lists the
    /// points of `T`.
    pub fn new(group: GroupTable, action: Vec<Vec<usize>>, t: &[usize]) -> Result<Self> {
        let order = group.order();
        if action.len() != order {
            return Err(Error::InvalidGSet(format!(
                "action has {} rows for a group of order {order}",
                action.len()
            )));
        }
        let size = action.first().map_or(0, Vec::len);
        let mut flat = Vec::with_capacity(order * size);
        for (g, row) in action.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidGSet(format!("row {g} has length {}", row.len())));
            }
            let mut seen = vec![false; size];
            for &s in row {
                if s >= size || std::mem::replace(&mut seen[s], true) {
                    return Err(Error::InvalidGSet(format!("row {g} is not a permutation")));
                }
            }
            flat.extend_from_slice(row);
        }
        let act = |g: usize, s: usize| flat[g * size + s];
        for s in 0..size {
            if act(group.identity(), s) != s {
                return Err(Error::InvalidGSet("identity acts nontrivially".into()));
            }
            for g in 0..order {
                for h in 0..order {
                    if act(group.mul(g, h), s) != act(g, act(h, s)) {
                        return Err(Error::InvalidGSet(format!(
                            "not a homomorphism at ({g}, {h}) on point {s}"
                        )));
                    }
                }
            }
        }
        let mut t_subset = vec![false; size];
        for &s in t {
            if s >= size {
                return Err(Error::InvalidGSet(format!("T point {s} out of range")));
            }
            t_subset[s] = true;
        }
        for s in 0..size {
            if t_subset[s] && (0..order).any(|g| !t_subset[act(g, s)]) {
                return Err(Error::InvalidGSet(format!("T is not G-invariant at point {s}")));
            }
        }
        Ok(Self { group, size, action: flat, t_subset })
    }

    /// `size` points on which every element acts trivially.
    pub fn trivial(group: GroupTable, size: usize, t: &[usize]) -> Result<Self> {
        let action = vec![(0..size).collect(); group.order()];
        Self::new(group, action, t)
    }

    pub fn empty(group: GroupTable) -> Self {
        Self::trivial(group, 0, &[]).expect("empty G-set")
    }

    /// Disjoint union of coset spaces `G/H`, one per `(H, in_t)` entry. The
    /// first point of each orbit is the coset of the identity, so its
    /// stabilizer is exactly `H`.
    pub fn from_orbits(group: GroupTable, orbits: &[(Subgroup, bool)]) -> Result<Self> {
        let order = group.order();
        let mut action = vec![Vec::new(); order];
        let mut t = Vec::new();
        let mut offset = 0;
        for (h, in_t) in orbits {
            // Left cosets xH, keyed by their minimal element.
            let mut coset_of = vec![usize::MAX; order];
            let mut reps = Vec::new();
            for x in 0..order {
                if coset_of[x] != usize::MAX {
                    continue;
                }
                let idx = reps.len();
                reps.push(x);
                for &y in h.elements() {
                    coset_of[group.mul(x, y)] = idx;
                }
            }
            // Put the identity coset first.
            let id_coset = coset_of[group.identity()];
            let relabel = |c: usize| {
                if c == id_coset {
                    0
                } else if c < id_coset {
                    c + 1
                } else {
                    c
                }
            };
            let mut ordered = vec![0; reps.len()];
            for (c, &x) in reps.iter().enumerate() {
                ordered[relabel(c)] = x;
            }
            for (g, row) in action.iter_mut().enumerate() {
                for &x in &ordered {
                    row.push(offset + relabel(coset_of[group.mul(g, x)]));
                }
            }
            if *in_t {
                t.extend(offset..offset + reps.len());
            }
            offset += reps.len();
        }
        if offset == 0 {
            return Ok(Self::empty(group));
        }
        Self::new(group, action, &t)
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, g: usize, s: usize) -> usize {
        self.action[g * self.size + s]
    }

    pub fn in_t(&self, s: usize) -> bool {
        self.t_subset[s]
    }

    pub fn t_points(&self) -> Vec<usize> {
        (0..self.size).filter(|&s| self.t_subset[s]).collect()
    }

    pub fn action_table(&self) -> Vec<Vec<usize>> {
        if self.size == 0 {
            return vec![Vec::new(); self.group.order()];
        }
        self.action.chunks(self.size).map(<[usize]>::to_vec).collect()
    }

    /// Orbits in order of their minimal point, each with that minimal point
    /// as representative and its exact stabilizer.
    pub fn orbits_and_stabilizers(&self) -> Vec<Orbit> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for s in 0..self.size {
            if seen[s] {
                continue;
            }
            let mut points: Vec<usize> = self.group.elements().map(|g| self.act(g, s)).collect();
            points.sort_unstable();
            points.dedup();
            for &p in &points {
                seen[p] = true;
            }
            let mask = self.group.elements().map(|g| self.act(g, s) == s).collect();
            out.push(Orbit { points, representative: s, stabilizer: Subgroup::from_mask(mask) });
        }
        out
    }

    /// Orbit index of every point, matching `orbits_and_stabilizers` order.
    pub fn orbit_index(&self) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.size];
        for (k, orbit) in self.orbits_and_stabilizers().iter().enumerate() {
            for &p in &orbit.points {
                idx[p] = k;
            }
        }
        idx
    }
}

/// An element of the wreath product `G^n ⋊ S_n`: a coloring of `[0, n)` by
/// group elements together with a permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WreathElement {
    pub colors: Vec<usize>,
    pub perm: Vec<usize>,
}

impl WreathElement {
    pub fn new(group: &GroupTable, colors: Vec<usize>, perm: Vec<usize>) -> Result<Self> {
        if colors.len() != perm.len() {
            return Err(Error::LengthMismatch { expected: perm.len(), found: colors.len() });
        }
        if colors.iter().any(|&g| g >= group.order()) {
            return Err(Error::InvalidGroup("wreath color out of range".into()));
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidElement("wreath permutation is not a bijection".into()));
            }
        }
        Ok(Self { colors, perm })
    }

    pub fn identity(group: &GroupTable, n: usize) -> Self {
        Self { colors: vec![group.identity(); n], perm: (0..n).collect() }
    }

    /// A pure relabeling with identity colors.
    pub fn permutation(group: &GroupTable, perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        Self::new(group, vec![group.identity(); n], perm)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn inverse(&self, group: &GroupTable) -> Self {
        let n = self.len();
        let mut perm = vec![0; n];
        let mut colors = vec![group.identity(); n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            colors[self.perm[i]] = group.inv(self.colors[i]);
        }
        Self { colors, perm }
    }
}

/// `w2 ∘ w1`: apply `w1` first. Colors pull back along `w1.perm`:
/// `colors[i] = w2.colors[w1.perm[i]] · w1.colors[i]`.
pub fn wreath_compose(
    group: &GroupTable,
    w2: &WreathElement,
    w1: &WreathElement,
) -> Result<WreathElement> {
    if w1.len() != w2.len() {
        return Err(Error::LengthMismatch { expected: w2.len(), found: w1.len() });
    }
    let perm = w1.perm.iter().map(|&p| w2.perm[p]).collect();
    let colors = (0..w1.len())
        .map(|i| group.mul(w2.colors[w1.perm[i]], w1.colors[i]))
        .collect();
    Ok(WreathElement { colors, perm })
}

/// Every element of `G ≀ S_n`, in a fixed order (permutations in
/// lexicographic order, colorings as base-|G| counters).
pub fn wreath_elements(group: &GroupTable, n: usize) -> Vec<WreathElement> {
    let perms = permutations(n);
    let k = group.order();
    let mut out = Vec::new();
    for perm in &perms {
        let total = k.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let colors = (0..n)
                .map(|_| {
                    let g = c % k;
                    c /= k;
                    g
                })
                .collect();
            out.push(WreathElement { colors, perm: perm.clone() });
        }
    }
    out
}

/// All permutations of `[0, n)` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclic_tables() {
        let z1 = GroupTable::cyclic(1).unwrap();
        assert_eq!(z1.identity(), 0);
        assert_eq!(z1.order(), 1);

        let z2 = GroupTable::cyclic(2).unwrap();
        assert_eq!(z2.table(), vec![vec![0, 1], vec![1, 0]]);

        // brute-force inverse search in the table
        let z4 = GroupTable::cyclic(4).unwrap();
        let brute: Vec<usize> = (0..4)
            .map(|a| (0..4).find(|&b| z4.mul(a, b) == z4.identity()).unwrap())
            .collect();
        assert_eq!(brute, vec![0, 3, 2, 1]);
        assert_eq!(z4.inverses(), &[0, 3, 2, 1]);

        assert!(GroupTable::cyclic(0).is_err());
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(GroupTable::from_table(vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(GroupTable::from_table(vec![vec![0, 1], vec![1, 2]]).is_err());
        // a latin square that is not associative
        let quasi = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        assert!(GroupTable::from_table(quasi).is_err());
    }

    #[test]
    fn klein_four_from_table() {
        let v4 = GroupTable::from_table(vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ])
        .unwrap();
        assert_eq!(v4.inverses(), &[0, 1, 2, 3]);
        let h = v4.subgroup(&[0, 3]).unwrap();
        assert_eq!(h.as_group(&v4).table(), vec![vec![0, 1], vec![1, 0]]);
        assert!(v4.subgroup(&[0, 1, 2]).is_err());
    }

    #[test]
    fn trivial_action_on_two_points() {
        let z2 = GroupTable::cyclic(2).unwrap();
        let s = GSetSpec::trivial(z2, 2, &[0, 1]).unwrap();
        let orbits = s.orbits_and_stabilizers();
        assert_eq!(orbits.len(), 2);
        for o in &orbits {
            assert_eq!(o.points.len(), 1);
            assert_eq!(o.stabilizer.elements(), &[0, 1]);
        }
    }

    #[test]
    fn swap_action_is_free_and_transitive() {
        let z2 = GroupTable::cyclic(2).unwrap();
        let s = GSetSpec::new(z2, vec![vec![0, 1], vec![1, 0]], &[]).unwrap();
        let orbits = s.orbits_and_stabilizers();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].points, vec![0, 1]);
        assert_eq!(orbits[0].representative, 0);
        assert_eq!(orbits[0].stabilizer.elements(), &[0]);
    }

    #[test]
    fn z4_quotient_action() {
        let z4 = GroupTable::cyclic(4).unwrap();
        let action: Vec<Vec<usize>> =
            (0..4).map(|g| (0..2).map(|s| (s + g) % 2).collect()).collect();
        let s = GSetSpec::new(z4.clone(), action, &[]).unwrap();
        let orbits = s.orbits_and_stabilizers();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].points.len(), 2);
        // exhaustive fixed-point check
        let fixing: Vec<usize> = (0..4).filter(|&g| s.act(g, 0) == 0).collect();
        assert_eq!(fixing, vec![0, 2]);
        assert_eq!(orbits[0].stabilizer.elements(), &[0, 2]);
    }

    #[test]
    fn t_must_be_invariant() {
        let z2 = GroupTable::cyclic(2).unwrap();
        let err = GSetSpec::new(z2, vec![vec![0, 1], vec![1, 0]], &[0]).unwrap_err();
        assert!(matches!(err, Error::InvalidGSet(_)));
    }

    #[test]
    fn coset_spaces_have_requested_stabilizers() {
        let z4 = GroupTable::cyclic(4).unwrap();
        let h = z4.subgroup(&[0, 2]).unwrap();
        let s = GSetSpec::from_orbits(z4.clone(), &[(h.clone(), true), (z4.whole(), false)])
            .unwrap();
        assert_eq!(s.size(), 3);
        let orbits = s.orbits_and_stabilizers();
        assert_eq!(orbits.len(), 2);
        assert_eq!(orbits[0].stabilizer, h);
        assert_eq!(orbits[1].stabilizer, z4.whole());
        assert!(s.in_t(0) && s.in_t(1) && !s.in_t(2));
    }

    #[test]
    fn wreath_square_of_twisted_swap() {
        let z2 = GroupTable::cyclic(2).unwrap();
        let w = WreathElement::new(&z2, vec![1, 0], vec![1, 0]).unwrap();
        let sq = wreath_compose(&z2, &w, &w).unwrap();
        assert_eq!(sq, WreathElement { colors: vec![1, 1], perm: vec![0, 1] });
        let id = WreathElement::identity(&z2, 2);
        assert_eq!(wreath_compose(&z2, &id, &w).unwrap(), w);
        assert_eq!(wreath_compose(&z2, &w, &id).unwrap(), w);
        let short = WreathElement::identity(&z2, 1);
        assert!(wreath_compose(&z2, &w, &short).is_err());
    }

    #[test]
    fn wreath_group_order_and_closure() {
        let z2 = GroupTable::cyclic(2).unwrap();
        for n in 0..=3 {
            let all = wreath_elements(&z2, n);
            let expected = 2usize.pow(n as u32) * (1..=n).product::<usize>();
            assert_eq!(all.len(), expected);
            let set: std::collections::HashSet<_> = all.iter().cloned().collect();
            for a in &all {
                let ainv = a.inverse(&z2);
                assert_eq!(
                    wreath_compose(&z2, a, &ainv).unwrap(),
                    WreathElement::identity(&z2, n)
                );
                for b in &all {
                    assert!(set.contains(&wreath_compose(&z2, a, b).unwrap()));
                }
            }
        }
    }

    fn arb_wreath(k: usize, n: usize) -> impl Strategy<Value = WreathElement> {
        (
            proptest::collection::vec(0..k, n),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(|(colors, perm)| WreathElement { colors, perm })
    }

    proptest! {
        #[test]
        fn wreath_composition_is_associative(
            (k, a, b, c) in (1usize..=4, 0usize..=4).prop_flat_map(|(k, n)| {
                (Just(k), arb_wreath(k, n), arb_wreath(k, n), arb_wreath(k, n))
            })
        ) {
            let g = GroupTable::cyclic(k).unwrap();
            let left = wreath_compose(&g, &wreath_compose(&g, &a, &b).unwrap(), &c).unwrap();
            let right = wreath_compose(&g, &a, &wreath_compose(&g, &b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn orbit_stabilizer_counts(k in 1usize..=6, m in 0usize..=5, shift in 0usize..6) {
            // Z_k acting on Z_m through the reduction map when m | k, trivially otherwise
            let g = GroupTable::cyclic(k).unwrap();
            let action: Vec<Vec<usize>> = (0..k)
                .map(|x| (0..m).map(|s| if m > 0 && k % m == 0 { (s + x * (shift % m.max(1) + 1)) % m } else { s }).collect())
                .collect();
            if let Ok(gset) = GSetSpec::new(g.clone(), action, &[]) {
                let orbits = gset.orbits_and_stabilizers();
                let total: usize = orbits.iter().map(|o| k / o.stabilizer.order()).sum();
                prop_assert_eq!(total, m);
                for o in &orbits {
                    prop_assert_eq!(o.points.len() * o.stabilizer.order(), k);
                    prop_assert_eq!(o.representative, o.points[0]);
                }
            }
        }
    }
}
