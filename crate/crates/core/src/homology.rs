//! Reduced homology of order complexes, Whitney homology and Lefschetz
//! numbers, all over ℚ.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseRow};
use crate::poset::Poset;

/// Graded ranks, keyed by homological degree (which may be −1 or −2).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BettiTable(pub BTreeMap<i64, usize>);

impl BettiTable {
    pub fn get(&self, degree: i64) -> usize {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    pub fn add(&mut self, degree: i64, rank: usize) {
        if rank > 0 {
            *self.0.entry(degree).or_default() += rank;
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().map(|(&k, &b)| if k.rem_euclid(2) == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    /// The single nonzero degree, if homology is concentrated.
    pub fn concentrated_degree(&self) -> Option<i64> {
        let mut it = self.0.iter().filter(|(_, &b)| b > 0);
        let (&k, _) = it.next()?;
        it.next().is_none().then_some(k)
    }
}

/// Chains of a poset, augmented by the empty chain in dimension −1.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    /// `chains[k + 1]` lists the k-simplices (strictly increasing chains of
    /// k + 1 elements), sorted lexicographically.
    chains: Vec<Vec<Vec<u32>>>,
}

impl ChainComplex {
    pub fn order_complex(p: &Poset) -> Self {
        let mut chains: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new()]];
        let mut stack: Vec<u32> = Vec::new();
        fn grow(p: &Poset, stack: &mut Vec<u32>, chains: &mut Vec<Vec<Vec<u32>>>) {
            let dim = stack.len();
            if chains.len() <= dim {
                chains.push(Vec::new());
            }
            chains[dim].push(stack.clone());
            let last = *stack.last().expect("nonempty chain") as usize;
            for y in p.up_set(last).iter() {
                if y != last {
                    stack.push(y as u32);
                    grow(p, stack, chains);
                    stack.pop();
                }
            }
        }
        for x in 0..p.len() {
            stack.push(x as u32);
            grow(p, &mut stack, &mut chains);
            stack.pop();
        }
        for level in &mut chains {
            level.sort_unstable();
        }
        Self { chains }
    }

    /// Highest simplex dimension (−1 for the empty complex).
    pub fn top_dimension(&self) -> i64 {
        self.chains.len() as i64 - 2
    }

    pub fn chains(&self, dim: i64) -> &[Vec<u32>] {
        usize::try_from(dim + 1).ok().and_then(|i| self.chains.get(i)).map_or(&[], Vec::as_slice)
    }

    pub fn rank_of_chain_group(&self, dim: i64) -> usize {
        self.chains(dim).len()
    }

    /// Rows of `∂_dim : C_dim → C_{dim−1}`, one per `dim`-chain. Omitting
    /// position `i` carries sign `(−1)^i`.
    pub fn boundary_rows(&self, dim: i64) -> Vec<SparseRow> {
        if dim < 0 {
            return vec![Vec::new(); self.rank_of_chain_group(dim)];
        }
        let faces = self.chains(dim - 1);
        self.chains(dim)
            .iter()
            .map(|chain| {
                let mut row: SparseRow = (0..chain.len())
                    .map(|i| {
                        let mut face = chain.clone();
                        face.remove(i);
                        let col = faces.binary_search(&face).expect("face of a chain is a chain");
                        (col, if i % 2 == 0 { 1 } else { -1 })
                    })
                    .collect();
                row.sort_unstable_by_key(|&(c, _)| c);
                row
            })
            .collect()
    }

    pub fn boundary_rank(&self, dim: i64) -> Result<usize> {
        let mut ech = Echelon::new();
        for row in self.boundary_rows(dim) {
            ech.insert(&row)?;
        }
        Ok(ech.rank())
    }

    pub fn reduced_homology(&self) -> Result<BettiTable> {
        let top = self.top_dimension();
        let ranks: Vec<usize> =
            (-1..=top + 1).map(|k| self.boundary_rank(k)).collect::<Result<_>>()?;
        let rank_at = |k: i64| ranks[(k + 1) as usize];
        let mut table = BettiTable::default();
        for k in -1..=top {
            let b = self.rank_of_chain_group(k) - rank_at(k) - rank_at(k + 1);
            table.add(k, b);
        }
        Ok(table)
    }
}

/// Reduced rational homology of the order complex of `p`; the empty poset
/// has a single class in degree −1.
pub fn reduced_homology(p: &Poset) -> Result<BettiTable> {
    ChainComplex::order_complex(p).reduced_homology()
}

/// `Σ_k (−1)^k · #k-chains`, including the empty chain at k = −1.
pub fn reduced_euler_characteristic(p: &Poset) -> i64 {
    signed_chain_sum(p, |_| true)
}

fn signed_chain_sum(p: &Poset, keep: impl Fn(usize) -> bool) -> i64 {
    // g[x] = signed count of chains whose maximum is x
    let mut g = vec![0i64; p.len()];
    let mut total = -1;
    for &x in p.linear_extension() {
        if !keep(x) {
            continue;
        }
        let below: i64 = p.down_set(x).iter().filter(|&y| y != x && keep(y)).map(|y| g[y]).sum();
        g[x] = 1 - below;
        total += g[x];
    }
    total
}

/// Whitney homology buckets `(rank r, degree k) → dimension`, where the
/// interval `[0̂, x]` contributes `H̃_{k−2}` of its proper part.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WhitneyTable(pub BTreeMap<(usize, i64), usize>);

impl WhitneyTable {
    pub fn get(&self, rank: usize, degree: i64) -> usize {
        self.0.get(&(rank, degree)).copied().unwrap_or(0)
    }

    /// Coefficients of `Σ_r dim(r, r) z^r`.
    pub fn poincare_polynomial(&self) -> Vec<usize> {
        let top = self.0.keys().map(|&(r, _)| r).max().map_or(0, |r| r + 1);
        (0..top).map(|r| self.get(r, r as i64)).collect()
    }

    /// True when each rank appears only in degree equal to the rank.
    pub fn is_diagonal(&self) -> bool {
        self.0.iter().all(|(&(r, k), &d)| d == 0 || r as i64 == k)
    }
}

impl Serialize for WhitneyTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for (&(rank, degree), &dim) in &self.0 {
            seq.serialize_element(&serde_json::json!({"rank": rank, "degree": degree, "dim": dim}))?;
        }
        seq.end()
    }
}

pub fn whitney_homology(p: &Poset) -> Result<WhitneyTable> {
    let bottom = p
        .bottom()
        .ok_or_else(|| Error::InvalidPoset("Whitney homology needs a unique minimum".into()))?;
    let mut table = WhitneyTable::default();
    for x in 0..p.len() {
        let rank = p.grade(x) - p.grade(bottom);
        if x == bottom {
            // the one-point interval: its proper part sits in degree −2
            *table.0.entry((0, 0)).or_default() += 1;
            continue;
        }
        let interval = p.lower_interval(x);
        let betti = reduced_homology(&interval.proper_part()?)?;
        for (&deg, &dim) in &betti.0 {
            *table.0.entry((rank, deg + 2)).or_default() += dim;
        }
    }
    Ok(table)
}

/// Signless Whitney numbers `Σ_{rk x = r} |μ(0̂, x)|`.
pub fn signless_whitney_numbers(p: &Poset) -> Result<Vec<u64>> {
    let bottom = p
        .bottom()
        .ok_or_else(|| Error::InvalidPoset("Whitney numbers need a unique minimum".into()))?;
    let row = p.mobius_row(bottom);
    let mut out: Vec<u64> = Vec::new();
    for (x, mu) in row.iter().enumerate() {
        let r = p.grade(x) - p.grade(bottom);
        if out.len() <= r {
            out.resize(r + 1, 0);
        }
        out[r] += mu.unsigned_abs();
    }
    Ok(out)
}

/// Reduced Lefschetz number of an automorphism on the order complex:
/// `Σ_{k ≥ −1} (−1)^k · #{fixed k-chains}`. An automorphism fixing a chain
/// setwise fixes it pointwise, so every fixed chain has trace +1.
pub fn lefschetz_number(p: &Poset, automorphism: &[usize]) -> Result<i64> {
    if !p.is_automorphism(automorphism) {
        return Err(Error::InvalidPoset("map is not an order automorphism".into()));
    }
    Ok(signed_chain_sum(p, |x| automorphism[x] == x))
}

/// Lefschetz number of `g` acting through `action[g]`, a table of order
/// automorphisms indexed by group element.
pub fn lefschetz_character(p: &Poset, action: &[Vec<usize>], g: usize) -> Result<i64> {
    let auto = action
        .get(g)
        .ok_or_else(|| Error::InvalidPoset(format!("no automorphism for group element {g}")))?;
    lefschetz_number(p, auto)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_dense_bareiss;
    use crate::poset::tests::arb_poset;
    use proptest::prelude::*;

    fn dense(rows: &[SparseRow], cols: usize) -> Vec<Vec<i64>> {
        rows.iter()
            .map(|r| {
                let mut d = vec![0; cols];
                for &(c, v) in r {
                    d[c] = v;
                }
                d
            })
            .collect()
    }

    fn brute_homology(p: &Poset) -> BettiTable {
        let cx = ChainComplex::order_complex(p);
        let mut t = BettiTable::default();
        let rank = |k: i64| {
            let rows = cx.boundary_rows(k);
            rank_dense_bareiss(&dense(&rows, cx.rank_of_chain_group(k - 1))).unwrap()
        };
        for k in -1..=cx.top_dimension() {
            t.add(k, cx.rank_of_chain_group(k) - rank(k) - rank(k + 1));
        }
        t
    }

    #[test]
    fn empty_poset_convention() {
        let h = reduced_homology(&Poset::antichain(0)).unwrap();
        assert_eq!(h.0, BTreeMap::from([(-1, 1)]));
    }

    #[test]
    fn boolean_hexagon_is_a_circle() {
        let hex = Poset::boolean(3).proper_part().unwrap();
        let h = reduced_homology(&hex).unwrap();
        assert_eq!(h.0, BTreeMap::from([(1, 1)]));
        assert_eq!(h, brute_homology(&hex));
    }

    #[test]
    fn partition_lattice_three() {
        let h = reduced_homology(&Poset::partition_lattice(3).proper_part().unwrap()).unwrap();
        assert_eq!(h.0, BTreeMap::from([(0, 2)]));
    }

    #[test]
    fn boundary_squares_to_zero() {
        let p = Poset::partition_lattice(4).proper_part().unwrap();
        let cx = ChainComplex::order_complex(&p);
        for k in 0..=cx.top_dimension() {
            let outer = dense(&cx.boundary_rows(k + 1), cx.rank_of_chain_group(k));
            let inner = dense(&cx.boundary_rows(k), cx.rank_of_chain_group(k - 1));
            for row in &outer {
                for c in 0..cx.rank_of_chain_group(k - 1) {
                    let v: i64 = row.iter().zip(&inner).map(|(&a, r)| a * r[c]).sum();
                    assert_eq!(v, 0);
                }
            }
        }
        // vertices hit the augmentation with coefficient one
        assert!(cx.boundary_rows(0).iter().all(|r| r == &vec![(0, 1)]));
    }

    #[test]
    fn whitney_of_q4() {
        let w = whitney_homology(&Poset::partition_lattice(4)).unwrap();
        assert_eq!(w.poincare_polynomial(), vec![1, 6, 11, 6]);
        assert!(w.is_diagonal());
        assert_eq!(signless_whitney_numbers(&Poset::partition_lattice(4)).unwrap(), vec![1, 6, 11, 6]);
    }

    #[test]
    fn lefschetz_on_q3_atoms() {
        // Q̄_3 is three atoms {12|3, 13|2, 23|1}; S_3 permutes them.
        let p = Poset::antichain(3);
        assert_eq!(lefschetz_number(&p, &[0, 1, 2]).unwrap(), 2);
        assert_eq!(lefschetz_number(&p, &[0, 2, 1]).unwrap(), 0);
        assert_eq!(lefschetz_number(&p, &[1, 2, 0]).unwrap(), -1);
        let chain = Poset::chain(2);
        assert!(lefschetz_number(&chain, &[1, 0]).is_err());
        let cyclic = [vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        assert_eq!(lefschetz_character(&p, &cyclic, 0).unwrap(), 2);
        assert_eq!(lefschetz_character(&p, &cyclic, 2).unwrap(), -1);
        assert!(lefschetz_character(&p, &cyclic, 3).is_err());
    }

    proptest! {
        #[test]
        fn sparse_homology_matches_dense(p in arb_poset(7)) {
            prop_assert_eq!(reduced_homology(&p).unwrap(), brute_homology(&p));
        }

        #[test]
        fn euler_characteristic_two_ways(p in arb_poset(8)) {
            let h = reduced_homology(&p).unwrap();
            prop_assert_eq!(h.euler_characteristic(), reduced_euler_characteristic(&p));
            let id: Vec<usize> = (0..p.len()).collect();
            prop_assert_eq!(lefschetz_number(&p, &id).unwrap(), h.euler_characteristic());
        }

        #[test]
        fn philip_hall(p in arb_poset(6)) {
            // adjoin a bottom and top to get a bounded poset
            let n = p.len();
            let mut covers: Vec<(usize, usize)> = p.covers().into_iter().map(|(a, b)| (a + 1, b + 1)).collect();
            covers.extend(p.minimal_elements().into_iter().map(|m| (0, m + 1)));
            covers.extend(p.maximal_elements().into_iter().map(|m| (m + 1, n + 1)));
            let bounded = Poset::from_covers(n + 2, &covers).unwrap();
            let proper = bounded.proper_part().unwrap();
            let h = reduced_homology(&proper).unwrap();
            prop_assert_eq!(h.euler_characteristic(), bounded.mobius(0, n + 1).unwrap());
        }

        #[test]
        fn wachs_product_rule(p in arb_poset(4), q in arb_poset(4)) {
            let hat = |x: &Poset| {
                let n = x.len();
                let mut covers: Vec<(usize, usize)> = x.covers().into_iter().map(|(a, b)| (a + 1, b + 1)).collect();
                covers.extend(x.minimal_elements().into_iter().map(|m| (0, m + 1)));
                covers.extend(x.maximal_elements().into_iter().map(|m| (m + 1, n + 1)));
                Poset::from_covers(n + 2, &covers).unwrap()
            };
            let (bp, bq) = (hat(&p), hat(&q));
            let hp = reduced_homology(&bp.proper_part().unwrap()).unwrap();
            let hq = reduced_homology(&bq.proper_part().unwrap()).unwrap();
            let hpq = reduced_homology(&bp.direct_product(&bq).proper_part().unwrap()).unwrap();
            let mut expected = BettiTable::default();
            for (&i, &a) in &hp.0 {
                for (&j, &b) in &hq.0 {
                    expected.add(i + j + 2, a * b);
                }
            }
            prop_assert_eq!(hpq, expected);
        }
    }
}
