//! Finite posets given by their Hasse diagram.
//!
//! Reachability is stored as two bit-packed tables (up-sets and down-sets) so
//! that interval membership is a word-level AND. Möbius rows are computed on
//! demand and memoized.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub(crate) fn new(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)] }
    }

    #[inline]
    pub(crate) fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub(crate) fn contains(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub(crate) fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub(crate) fn intersection_count(&self, other: &BitSet) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub(crate) fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + bit)
            })
        })
    }

    pub(crate) fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }
}

impl std::fmt::Debug for BitSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug)]
pub struct Poset {
    n: usize,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    above: Vec<BitSet>,
    below: Vec<BitSet>,
    /// A linear extension: every element appears after everything below it.
    linear: Vec<usize>,
    height: Vec<usize>,
    rank: Option<Vec<usize>>,
    labels: Option<Vec<String>>,
    mobius_rows: Vec<OnceLock<Vec<i64>>>,
}

impl Clone for Poset {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            up: self.up.clone(),
            down: self.down.clone(),
            above: self.above.clone(),
            below: self.below.clone(),
            linear: self.linear.clone(),
            height: self.height.clone(),
            rank: self.rank.clone(),
            labels: self.labels.clone(),
            mobius_rows: (0..self.n).map(|_| OnceLock::new()).collect(),
        }
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.up == other.up && self.rank == other.rank
    }
}

impl Eq for Poset {}

impl Poset {
    /// Builds a poset from its cover relations `(lower, upper)`.
    ///
    /// Cycles, duplicate pairs and covers implied by transitivity are errors.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset(format!("cover ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidPoset(format!("self-cover on {a}")));
            }
            up[a].push(b);
            down[b].push(a);
        }
        for list in up.iter_mut().chain(down.iter_mut()) {
            list.sort_unstable();
            let len = list.len();
            list.dedup();
            if list.len() != len {
                return Err(Error::InvalidPoset("duplicate cover".into()));
            }
        }

        // Kahn's algorithm; smallest available index first for determinism.
        let mut indeg: Vec<usize> = down.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&x| indeg[x] == 0).collect();
        let mut linear = Vec::with_capacity(n);
        while let Some(x) = ready.pop_first() {
            linear.push(x);
            for &y in &up[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        if linear.len() != n {
            return Err(Error::InvalidPoset("cover relation has a cycle".into()));
        }

        let mut below: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        let mut height = vec![0; n];
        for &x in &linear {
            let mut set = BitSet::new(n);
            set.insert(x);
            for &y in &down[x] {
                set.union_with(&below[y]);
                height[x] = height[x].max(height[y] + 1);
            }
            below[x] = set;
        }
        let mut above: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for &x in linear.iter().rev() {
            let mut set = BitSet::new(n);
            set.insert(x);
            for &y in &up[x] {
                set.union_with(&above[y]);
            }
            above[x] = set;
        }

        for &(a, b) in covers {
            if above[a].intersection_count(&below[b]) != 2 {
                return Err(Error::InvalidPoset(format!(
                    "cover ({a}, {b}) is implied by transitivity"
                )));
            }
        }

        Ok(Self {
            n,
            up,
            down,
            above,
            below,
            linear,
            height,
            rank: None,
            labels: None,
            mobius_rows: (0..n).map(|_| OnceLock::new()).collect(),
        })
    }

    /// Attaches rank labels; every cover must raise the rank by exactly one.
    pub fn with_rank(mut self, rank: Vec<usize>) -> Result<Self> {
        if rank.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: rank.len() });
        }
        for a in 0..self.n {
            for &b in &self.up[a] {
                if rank[b] != rank[a] + 1 {
                    return Err(Error::InvalidPoset(format!(
                        "cover ({a}, {b}) goes from rank {} to {}",
                        rank[a], rank[b]
                    )));
                }
            }
        }
        self.rank = Some(rank);
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn chain(len: usize) -> Self {
        let covers: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        Self::from_covers(len, &covers)
            .and_then(|p| p.with_rank((0..len).collect()))
            .expect("chain")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_covers(n, &[]).expect("antichain")
    }

    pub fn point() -> Self {
        Self::chain(1)
    }

    /// Subsets of `[k]` ordered by inclusion, indexed by bitmask.
    pub fn boolean(k: usize) -> Self {
        let n = 1usize << k;
        let covers: Vec<_> = (0..n)
            .flat_map(|s| (0..k).filter(move |i| s >> i & 1 == 0).map(move |i| (s, s | 1 << i)))
            .collect();
        let rank = (0..n).map(|s: usize| s.count_ones() as usize).collect();
        Self::from_covers(n, &covers).and_then(|p| p.with_rank(rank)).expect("boolean lattice")
    }

    /// The lattice of set partitions of `[k]` ordered by refinement.
    pub fn partition_lattice(k: usize) -> Self {
        let parts = set_partitions(k);
        let index: HashMap<Vec<usize>, usize> =
            parts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut covers = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            let blocks = p.iter().copied().max().map_or(0, |m| m + 1);
            for a in 0..blocks {
                for b in a + 1..blocks {
                    let merged = restricted_growth(
                        &p.iter().map(|&x| if x == b { a } else { x }).collect::<Vec<_>>(),
                    );
                    covers.push((i, index[&merged]));
                }
            }
        }
        covers.sort_unstable();
        covers.dedup();
        let rank = parts
            .iter()
            .map(|p| k - p.iter().copied().max().map_or(0, |m| m + 1))
            .collect();
        Self::from_covers(parts.len(), &covers)
            .and_then(|p| p.with_rank(rank))
            .expect("partition lattice")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn upper_covers(&self, a: usize) -> &[usize] {
        &self.up[a]
    }

    pub fn lower_covers(&self, a: usize) -> &[usize] {
        &self.down[a]
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|a| self.up[a].iter().map(move |&b| (a, b))).collect()
    }

    pub fn cover_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.above[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// Number of pairs `a ≤ b`, including `a = b`.
    pub fn comparable_pairs(&self) -> usize {
        self.above.iter().map(BitSet::count).sum()
    }

    pub fn linear_extension(&self) -> &[usize] {
        &self.linear
    }

    /// Length of the longest chain ending at `a`.
    pub fn height(&self, a: usize) -> usize {
        self.height[a]
    }

    pub fn rank(&self) -> Option<&[usize]> {
        self.rank.as_deref()
    }

    /// The stored rank if present, otherwise the height.
    pub fn grade(&self, a: usize) -> usize {
        self.rank.as_ref().map_or(self.height[a], |r| r[a])
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.down[x].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.up[x].is_empty()).collect()
    }

    pub fn bottom(&self) -> Option<usize> {
        match self.minimal_elements().as_slice() {
            [b] => Some(*b),
            _ => None,
        }
    }

    pub fn top(&self) -> Option<usize> {
        match self.maximal_elements().as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }

    pub(crate) fn up_set(&self, a: usize) -> &BitSet {
        &self.above[a]
    }

    pub(crate) fn down_set(&self, a: usize) -> &BitSet {
        &self.below[a]
    }

    /// `μ(a, b)`, or an error when `a ≰ b`.
    pub fn mobius(&self, a: usize, b: usize) -> Result<i64> {
        if a >= self.n || b >= self.n {
            return Err(Error::InvalidPoset(format!("element out of range in ({a}, {b})")));
        }
        if !self.leq(a, b) {
            return Err(Error::Incomparable(a, b));
        }
        Ok(self.mobius_row(a)[b])
    }

    /// `μ(a, x)` for every `x` (zero where `a ≰ x`).
    pub fn mobius_row(&self, a: usize) -> &[i64] {
        self.mobius_rows[a].get_or_init(|| {
            let mut row = vec![0i64; self.n];
            // sum[x] accumulates Σ μ(a, c) over a ≤ c < x
            for &x in &self.linear {
                if !self.leq(a, x) {
                    continue;
                }
                row[x] = if x == a {
                    1
                } else {
                    -self.below[x]
                        .intersection(&self.above[a])
                        .iter()
                        .filter(|&c| c != x)
                        .map(|c| row[c])
                        .sum::<i64>()
                };
            }
            row
        })
    }

    /// The induced subposet on `elements` (ascending order, duplicates ignored).
    /// Returns the poset and the map from new to old indices.
    pub fn induced(&self, elements: &[usize]) -> (Poset, Vec<usize>) {
        let mut keep: Vec<usize> = elements.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut new_of = vec![usize::MAX; self.n];
        let mut mask = BitSet::new(self.n);
        for (i, &x) in keep.iter().enumerate() {
            new_of[x] = i;
            mask.insert(x);
        }
        let mut covers = Vec::new();
        for &a in &keep {
            let strictly_above: Vec<usize> =
                self.above[a].intersection(&mask).iter().filter(|&c| c != a).collect();
            for &c in &strictly_above {
                let is_cover = strictly_above.iter().all(|&d| d == c || !self.leq(d, c));
                if is_cover {
                    covers.push((new_of[a], new_of[c]));
                }
            }
        }
        let mut sub = Poset::from_covers(keep.len(), &covers).expect("induced order is a poset");
        if let Some(rank) = &self.rank {
            let r: Vec<usize> = keep.iter().map(|&x| rank[x]).collect();
            if let Ok(ranked) = sub.clone().with_rank(r) {
                sub = ranked;
            }
        }
        if let Some(labels) = &self.labels {
            sub.labels = Some(keep.iter().map(|&x| labels[x].clone()).collect());
        }
        (sub, keep)
    }

    /// `{x : x ≤ b}` with the induced order.
    pub fn lower_interval(&self, b: usize) -> Poset {
        self.lower_interval_with_map(b).0
    }

    pub fn lower_interval_with_map(&self, b: usize) -> (Poset, Vec<usize>) {
        let members: Vec<usize> = self.below[b].iter().collect();
        self.induced(&members)
    }

    /// `[a, b]` with the induced order.
    pub fn interval(&self, a: usize, b: usize) -> Result<(Poset, Vec<usize>)> {
        if !self.leq(a, b) {
            return Err(Error::Incomparable(a, b));
        }
        let members: Vec<usize> = self.above[a].intersection(&self.below[b]).iter().collect();
        Ok(self.induced(&members))
    }

    /// Componentwise order; element `(i, j)` has index `i * |q| + j`.
    pub fn direct_product(&self, q: &Poset) -> Poset {
        let m = q.n;
        let idx = |i: usize, j: usize| i * m + j;
        let mut covers = Vec::new();
        for i in 0..self.n {
            for j in 0..m {
                for &i2 in &self.up[i] {
                    covers.push((idx(i, j), idx(i2, j)));
                }
                for &j2 in &q.up[j] {
                    covers.push((idx(i, j), idx(i, j2)));
                }
            }
        }
        let prod = Poset::from_covers(self.n * m, &covers).expect("product of posets");
        match (&self.rank, &q.rank) {
            (Some(r1), Some(r2)) => {
                let rank = (0..self.n * m).map(|k| r1[k / m] + r2[k % m]).collect();
                prod.with_rank(rank).expect("product rank")
            }
            _ => prod,
        }
    }

    /// Product of a list of posets; the empty product is a point.
    pub fn product_all<'a>(factors: impl IntoIterator<Item = &'a Poset>) -> Poset {
        factors.into_iter().fold(Poset::point(), |acc, p| acc.direct_product(p))
    }

    /// Connected components of the Hasse diagram, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in self.up[x].iter().chain(&self.down[x]) {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Removes the unique minimum and maximum of every connected component.
    pub fn proper_part(&self) -> Result<Poset> {
        Ok(self.proper_part_with_map()?.0)
    }

    pub fn proper_part_with_map(&self) -> Result<(Poset, Vec<usize>)> {
        let mut removed = vec![false; self.n];
        for comp in self.components() {
            let mins: Vec<_> = comp.iter().filter(|&&x| self.down[x].is_empty()).collect();
            let maxs: Vec<_> = comp.iter().filter(|&&x| self.up[x].is_empty()).collect();
            if mins.len() != 1 || maxs.len() != 1 {
                return Err(Error::InvalidPoset(format!(
                    "component containing {} lacks a unique minimum or maximum",
                    comp[0]
                )));
            }
            removed[*mins[0]] = true;
            removed[*maxs[0]] = true;
        }
        let keep: Vec<usize> = (0..self.n).filter(|&x| !removed[x]).collect();
        Ok(self.induced(&keep))
    }

    /// A cover-preserving bijection `self → other`, if one exists.
    pub fn is_isomorphic(&self, other: &Poset) -> Option<Vec<usize>> {
        crate::poset::iso::find_isomorphism(self, other)
    }

    /// Checks that `perm` is an order automorphism.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return false;
            }
        }
        (0..self.n).all(|a| self.up[a].iter().all(|&b| self.up[perm[a]].binary_search(&perm[b]).is_ok()))
    }

    /// Counts of elements per grade, ascending.
    pub fn grade_sizes(&self) -> Vec<usize> {
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for x in 0..self.n {
            *sizes.entry(self.grade(x)).or_default() += 1;
        }
        let top = sizes.keys().next_back().copied().map_or(0, |m| m + 1);
        (0..top).map(|r| sizes.get(&r).copied().unwrap_or(0)).collect()
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            n: self.n,
            covers: self.covers().into_iter().map(|(a, b)| [a, b]).collect(),
            rank: self.rank.clone(),
            elements: self.labels.clone(),
        }
    }

    pub fn from_json(json: &PosetJson) -> Result<Self> {
        let covers: Vec<_> = json.covers.iter().map(|&[a, b]| (a, b)).collect();
        let mut p = Self::from_covers(json.n, &covers)?;
        if let Some(rank) = &json.rank {
            p = p.with_rank(rank.clone())?;
        }
        if let Some(labels) = &json.elements {
            p = p.with_labels(labels.clone())?;
        }
        Ok(p)
    }

    /// Deterministic text form used for content hashing.
    pub fn canonical_serialization(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("poset json")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
}

/// Set partitions of `[k]` as restricted growth strings, in lexicographic order.
pub fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, k: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        let limit = if prefix.is_empty() { 0 } else { max + 1 };
        for b in 0..=limit {
            prefix.push(b);
            rec(prefix, k, max.max(b), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), k, 0, &mut out);
    out
}

fn restricted_growth(labels: &[usize]) -> Vec<usize> {
    let mut relabel = HashMap::new();
    labels
        .iter()
        .map(|&x| {
            let next = relabel.len();
            *relabel.entry(x).or_insert(next)
        })
        .collect()
}

pub(crate) mod iso {
    //! Backtracking isomorphism search with colour-refinement pruning.

    use super::Poset;
    use std::collections::{BTreeMap, HashMap};

    fn refine(p: &Poset, q: &Poset) -> Option<(Vec<usize>, Vec<usize>)> {
        // Joint refinement so that colour ids are comparable across posets.
        let init = |x: &Poset, a: usize| {
            (x.height(a), x.up_set(a).count(), x.down_set(a).count(), x.up[a].len(), x.down[a].len())
        };
        let mut keys: BTreeMap<(usize, usize, usize, usize, usize), usize> = BTreeMap::new();
        for a in 0..p.n {
            keys.entry(init(p, a)).or_insert(0);
        }
        for a in 0..q.n {
            keys.entry(init(q, a)).or_insert(0);
        }
        for (i, v) in keys.values_mut().enumerate() {
            *v = i;
        }
        let mut cp: Vec<usize> = (0..p.n).map(|a| keys[&init(p, a)]).collect();
        let mut cq: Vec<usize> = (0..q.n).map(|a| keys[&init(q, a)]).collect();
        let mut classes = keys.len();
        loop {
            let sig = |x: &Poset, c: &[usize], a: usize| {
                let mut ups: Vec<usize> = x.up[a].iter().map(|&b| c[b]).collect();
                let mut downs: Vec<usize> = x.down[a].iter().map(|&b| c[b]).collect();
                ups.sort_unstable();
                downs.sort_unstable();
                (c[a], ups, downs)
            };
            let mut table: BTreeMap<(usize, Vec<usize>, Vec<usize>), usize> = BTreeMap::new();
            let sp: Vec<_> = (0..p.n).map(|a| sig(p, &cp, a)).collect();
            let sq: Vec<_> = (0..q.n).map(|a| sig(q, &cq, a)).collect();
            for s in sp.iter().chain(&sq) {
                table.entry(s.clone()).or_insert(0);
            }
            for (i, v) in table.values_mut().enumerate() {
                *v = i;
            }
            cp = sp.iter().map(|s| table[s]).collect();
            cq = sq.iter().map(|s| table[s]).collect();
            let mut hp = vec![0usize; table.len()];
            let mut hq = vec![0usize; table.len()];
            for &c in &cp {
                hp[c] += 1;
            }
            for &c in &cq {
                hq[c] += 1;
            }
            if hp != hq {
                return None;
            }
            if table.len() == classes {
                return Some((cp, cq));
            }
            classes = table.len();
        }
    }

    pub(crate) fn find_isomorphism(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
        if p.n != q.n || p.cover_count() != q.cover_count() {
            return None;
        }
        if p.n == 0 {
            return Some(Vec::new());
        }
        let (cp, cq) = refine(p, q)?;
        let mut by_colour: HashMap<usize, Vec<usize>> = HashMap::new();
        for (b, &c) in cq.iter().enumerate() {
            by_colour.entry(c).or_default().push(b);
        }

        // Assign in a linear extension, smallest colour classes breaking ties
        // within equal heights, so lower covers are placed first.
        let mut order: Vec<usize> = p.linear.clone();
        order.sort_by_key(|&a| (p.height(a), by_colour[&cp[a]].len(), a));

        let mut map = vec![usize::MAX; p.n];
        let mut used = vec![false; q.n];
        if search(p, q, &order, 0, &cp, &by_colour, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        p: &Poset,
        q: &Poset,
        order: &[usize],
        depth: usize,
        cp: &[usize],
        by_colour: &HashMap<usize, Vec<usize>>,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&a) = order.get(depth) else {
            return true;
        };
        let candidates: Vec<usize> = match p.down[a].iter().find(|&&d| map[d] != usize::MAX) {
            // restrict to upper covers of an already placed lower cover
            Some(&d) => q.up[map[d]].iter().copied().filter(|&b| !used[b]).collect(),
            None => by_colour[&cp[a]].iter().copied().filter(|&b| !used[b]).collect(),
        };
        'next: for b in candidates {
            if by_colour.get(&cp[a]).is_none_or(|v| v.binary_search(&b).is_err()) {
                continue;
            }
            for &d in &p.down[a] {
                if map[d] != usize::MAX && q.up[map[d]].binary_search(&b).is_err() {
                    continue 'next;
                }
            }
            for &u in &p.up[a] {
                if map[u] != usize::MAX && q.down[map[u]].binary_search(&b).is_err() {
                    continue 'next;
                }
            }
            // q-side covers of b among placed images must come from p-side covers
            let placed_down =
                p.down[a].iter().filter(|&&d| map[d] != usize::MAX).count();
            let image_down = q.down[b].iter().filter(|&&d| used[d]).count();
            if placed_down != image_down {
                continue;
            }
            let placed_up = p.up[a].iter().filter(|&&u| map[u] != usize::MAX).count();
            let image_up = q.up[b].iter().filter(|&&u| used[u]).count();
            if placed_up != image_up {
                continue;
            }
            map[a] = b;
            used[b] = true;
            if search(p, q, order, depth + 1, cp, by_colour, map, used) {
                return true;
            }
            map[a] = usize::MAX;
            used[b] = false;
        }
        false
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_mobius(p: &Poset, a: usize, b: usize) -> i64 {
        // Philip Hall: alternating count of chains a = x0 < ... < xk = b
        fn chains(p: &Poset, cur: usize, b: usize, len: usize, acc: &mut i64) {
            if cur == b {
                *acc += if len.is_multiple_of(2) { 1 } else { -1 };
                return;
            }
            for y in 0..p.len() {
                if p.lt(cur, y) && p.leq(y, b) {
                    chains(p, y, b, len + 1, acc);
                }
            }
        }
        let mut acc = 0;
        chains(p, a, b, 0, &mut acc);
        acc
    }

    #[test]
    fn two_chain() {
        let p = Poset::from_covers(2, &[(0, 1)]).unwrap();
        assert!(p.leq(0, 1) && !p.leq(1, 0));
        assert_eq!(p.mobius(0, 1).unwrap(), -1);
    }

    #[test]
    fn boolean_three_leq_count() {
        let b3 = Poset::boolean(3);
        assert_eq!(b3.cover_count(), 12);
        assert_eq!(b3.comparable_pairs(), 27);
        let direct = (0..8usize).flat_map(|a| (0..8usize).map(move |b| (a, b))).filter(|&(a, b)| a & b == a).count();
        assert_eq!(direct, 27);
        assert_eq!(b3.mobius(0, 7).unwrap(), -1);
    }

    #[test]
    fn antichain_and_rejections() {
        let a = Poset::from_covers(3, &[]).unwrap();
        assert_eq!(a.comparable_pairs(), 3);
        assert!(Poset::from_covers(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Poset::from_covers(3, &[(0, 1), (1, 2), (0, 2)]).is_err());
        assert!(Poset::from_covers(2, &[(0, 1), (0, 1)]).is_err());
        assert!(matches!(a.mobius(0, 1), Err(Error::Incomparable(0, 1))));
    }

    #[test]
    fn partition_lattice_sizes_and_mobius() {
        let bell = [1, 1, 2, 5, 15, 52];
        for (k, &b) in bell.iter().enumerate() {
            let q = Poset::partition_lattice(k);
            assert_eq!(q.len(), b);
            if k >= 1 {
                let bot = q.bottom().unwrap();
                let top = q.top().unwrap();
                let fact: i64 = (1..k as i64).product();
                let sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
                assert_eq!(q.mobius(bot, top).unwrap(), sign * fact);
            }
        }
        let q3 = Poset::partition_lattice(3);
        let (b, t) = (q3.bottom().unwrap(), q3.top().unwrap());
        assert_eq!(q3.mobius(b, t).unwrap(), brute_mobius(&q3, b, t));
        assert_eq!(q3.mobius(q3.bottom().unwrap(), q3.top().unwrap()).unwrap(), 2);
    }

    #[test]
    fn intervals() {
        let b3 = Poset::boolean(3);
        assert_eq!(b3.lower_interval(0).len(), 1);
        let coatom = b3.lower_interval(0b011);
        assert!(coatom.is_isomorphic(&Poset::boolean(2)).is_some());

        let q4 = Poset::partition_lattice(4);
        // 12|34 as a restricted growth string
        let parts = set_partitions(4);
        let idx = parts.iter().position(|p| p == &vec![0, 0, 1, 1]).unwrap();
        let q2 = Poset::partition_lattice(2);
        let lower = q4.lower_interval(idx);
        assert!(lower.is_isomorphic(&q2.direct_product(&q2)).is_some());
    }

    #[test]
    fn products() {
        let c2 = Poset::chain(2);
        let sq = c2.direct_product(&c2);
        assert!(sq.is_isomorphic(&Poset::boolean(2)).is_some());
        let p = Poset::partition_lattice(3);
        assert!(p.direct_product(&Poset::point()).is_isomorphic(&p).is_some());

        let q5 = Poset::partition_lattice(5);
        let idx = set_partitions(5).iter().position(|p| p == &vec![0, 0, 0, 1, 1]).unwrap();
        let lower = q5.lower_interval(idx);
        let prod = Poset::partition_lattice(3).direct_product(&Poset::partition_lattice(2));
        assert_eq!(prod.len(), 10);
        assert!(lower.is_isomorphic(&prod).is_some());
    }

    #[test]
    fn proper_parts() {
        assert!(Poset::chain(2).proper_part().unwrap().is_empty());
        let hex = Poset::boolean(3).proper_part().unwrap();
        assert_eq!(hex.len(), 6);
        assert_eq!(hex.grade_sizes(), vec![0, 3, 3]);
        let q3 = Poset::partition_lattice(3).proper_part().unwrap();
        assert_eq!(q3.len(), 3);
        assert_eq!(q3.cover_count(), 0);
        let vee = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        assert!(vee.proper_part().is_err());
    }

    #[test]
    fn isomorphism_negatives() {
        let p = Poset::partition_lattice(4);
        let id = p.is_isomorphic(&p).unwrap();
        assert!(p.is_automorphism(&id));
        assert!(Poset::boolean(2).is_isomorphic(&Poset::chain(4)).is_none());
        // same size and cover count, different shape
        let a = Poset::from_covers(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let b = Poset::from_covers(4, &[(0, 3), (1, 3), (2, 3)]).unwrap();
        assert!(a.is_isomorphic(&b).is_none());
    }

    #[test]
    fn json_round_trip() {
        let p = Poset::boolean(2);
        let json = p.to_json();
        let back = Poset::from_json(&json).unwrap();
        assert_eq!(back, p);
        let text = serde_json::to_string(&json).unwrap();
        assert!(serde_json::from_str::<PosetJson>(r#"{"n":1,"covers":[],"bogus":1}"#).is_err());
        assert_eq!(serde_json::from_str::<PosetJson>(&text).unwrap(), json);
    }

    /// Random poset: covers of a random DAG's transitive reduction.
    pub(crate) fn arb_poset(max_n: usize) -> impl Strategy<Value = Poset> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(proptest::bool::weighted(0.35), n * n).prop_map(move |bits| {
                let rel = |a: usize, b: usize| a < b && bits[a * n + b];
                let mut reach = vec![vec![false; n]; n];
                for a in (0..n).rev() {
                    reach[a][a] = true;
                    for b in a + 1..n {
                        if rel(a, b) {
                            let below = reach[b].clone();
                            for (r, hit) in reach[a].iter_mut().zip(below) {
                                *r |= hit;
                            }
                        }
                    }
                }
                let mut covers = Vec::new();
                for a in 0..n {
                    for b in 0..n {
                        if a != b
                            && reach[a][b]
                            && !(0..n).any(|c| c != a && c != b && reach[a][c] && reach[c][b])
                        {
                            covers.push((a, b));
                        }
                    }
                }
                Poset::from_covers(n, &covers).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn mobius_matches_chain_count(p in arb_poset(7)) {
            for a in 0..p.len() {
                for b in 0..p.len() {
                    if p.leq(a, b) {
                        prop_assert_eq!(p.mobius(a, b).unwrap(), brute_mobius(&p, a, b));
                    }
                }
            }
        }

        #[test]
        fn mobius_is_multiplicative(p in arb_poset(5), q in arb_poset(4)) {
            let pq = p.direct_product(&q);
            let m = q.len();
            for a in 0..p.len() { for b in 0..p.len() { if !p.leq(a, b) { continue; }
                for c in 0..m { for d in 0..m { if !q.leq(c, d) { continue; }
                    prop_assert_eq!(
                        pq.mobius(a * m + c, b * m + d).unwrap(),
                        p.mobius(a, b).unwrap() * q.mobius(c, d).unwrap()
                    );
                }}
            }}
        }

        #[test]
        fn relabelled_copy_is_isomorphic(p in arb_poset(8), seed in any::<u64>()) {
            let n = p.len();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let covers: Vec<_> = p.covers().into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
            let q = Poset::from_covers(n, &covers).unwrap();
            let f = p.is_isomorphic(&q).expect("relabelling is an isomorphism");
            for (a, b) in p.covers() {
                prop_assert!(q.upper_covers(f[a]).contains(&f[b]));
            }
        }
    }
}
