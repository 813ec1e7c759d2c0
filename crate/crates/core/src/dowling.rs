//! Dowling posets `D_n^T(G, S)` of partial G-partitions with an S-colored
//! zero block.
//!
//! Element `i` of the ground set `[0, n)` is either in a block, recorded by
//! the block's minimal element (its root) and its color, or in the zero
//! block, recorded by its point of `S`. Block colorings are normalized by
//! right translation so that the root carries the identity.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::group::{GSetSpec, GroupTable, Subgroup, WreathElement};
use crate::homology::reduced_homology;
use crate::poset::Poset;
use crate::rational::Rational;
use crate::series::{block_count_series, zero_block_count_series, WeightedSeries};

/// Enumeration stops with an error past this many elements.
pub const DEFAULT_CAP: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DowlingSpec {
    gset: GSetSpec,
    n: usize,
}

impl DowlingSpec {
    pub fn new(gset: GSetSpec, n: usize) -> Result<Self> {
        if n > u8::MAX as usize || gset.size() > u8::MAX as usize {
            return Err(Error::InvalidGSet("ground set and S are limited to 255 points".into()));
        }
        Ok(Self { gset, n })
    }

    /// The partition lattice `Q_n`: trivial group, empty `S`.
    pub fn partition(n: usize) -> Self {
        Self::new(GSetSpec::empty(GroupTable::trivial()), n).expect("partition spec")
    }

    /// The Dowling lattice `D_n(G)`: `S = T = {*}`.
    pub fn lattice(group: GroupTable, n: usize) -> Self {
        Self::new(GSetSpec::trivial(group, 1, &[0]).expect("one point"), n).expect("lattice spec")
    }

    pub fn group(&self) -> &GroupTable {
        self.gset.group()
    }

    pub fn gset(&self) -> &GSetSpec {
        &self.gset
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.gset.clone(), n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Block { root: u8, color: u8 },
    Zero { point: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DowlingElement {
    slots: Vec<Slot>,
}

/// Pre-canonical slot: block membership by an arbitrary label.
#[derive(Clone, Copy)]
enum Raw {
    Block { label: usize, color: usize },
    Zero { point: usize },
}

fn canonicalize(group: &GroupTable, raw: &[Raw]) -> DowlingElement {
    let mut root_of_label: HashMap<usize, usize> = HashMap::new();
    for (i, r) in raw.iter().enumerate() {
        if let Raw::Block { label, .. } = *r {
            root_of_label.entry(label).or_insert(i);
        }
    }
    let slots = raw
        .iter()
        .map(|r| match *r {
            Raw::Block { label, color } => {
                let root = root_of_label[&label];
                let Raw::Block { color: root_color, .. } = raw[root] else { unreachable!() };
                Slot::Block { root: root as u8, color: group.mul(color, group.inv(root_color)) as u8 }
            }
            Raw::Zero { point } => Slot::Zero { point: point as u8 },
        })
        .collect();
    DowlingElement { slots }
}

impl DowlingElement {
    /// All singletons, empty zero block.
    pub fn bottom(spec: &DowlingSpec) -> Self {
        let e = spec.group().identity() as u8;
        Self { slots: (0..spec.n).map(|i| Slot::Block { root: i as u8, color: e }).collect() }
    }

    /// Builds a canonical element from blocks of `(element, color)` pairs and
    /// zero-block pairs `(element, point)`.
    pub fn from_parts(
        spec: &DowlingSpec,
        blocks: &[Vec<(usize, usize)>],
        zero: &[(usize, usize)],
    ) -> Result<Self> {
        let n = spec.n;
        let mut raw: Vec<Option<Raw>> = vec![None; n];
        let mut place = |i: usize, r: Raw| -> Result<()> {
            if i >= n {
                return Err(Error::InvalidElement(format!("element {} out of range", i + 1)));
            }
            if raw[i].replace(r).is_some() {
                return Err(Error::InvalidElement(format!("element {} used twice", i + 1)));
            }
            Ok(())
        };
        for (label, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidElement("empty block".into()));
            }
            for &(i, color) in block {
                if color >= spec.group().order() {
                    return Err(Error::InvalidElement(format!("color {color} out of range")));
                }
                place(i, Raw::Block { label, color })?;
            }
        }
        for &(i, point) in zero {
            if point >= spec.gset.size() {
                return Err(Error::InvalidElement(format!("point {point} out of range")));
            }
            place(i, Raw::Zero { point })?;
        }
        let raw: Vec<Raw> = raw
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| Error::InvalidElement(format!("element {} unassigned", i + 1))))
            .collect::<Result<_>>()?;
        let e = canonicalize(spec.group(), &raw);
        e.validate(spec)?;
        Ok(e)
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.slots
            .iter()
            .enumerate()
            .filter(|&(i, s)| matches!(s, Slot::Block { root, .. } if *root as usize == i))
            .count()
    }

    /// `n − #blocks`.
    pub fn rank(&self) -> usize {
        self.slots.len() - self.block_count()
    }

    /// Blocks in order of their roots, as `(element, color)` lists.
    pub fn blocks(&self) -> Vec<Vec<(usize, usize)>> {
        let mut by_root: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, s) in self.slots.iter().enumerate() {
            if let Slot::Block { root, color } = *s {
                by_root.entry(root as usize).or_default().push((i, color as usize));
            }
        }
        by_root.into_values().collect()
    }

    /// `(element, point)` pairs of the zero block.
    pub fn zero_block(&self) -> Vec<(usize, usize)> {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match *s {
                Slot::Zero { point } => Some((i, point as usize)),
                Slot::Block { .. } => None,
            })
            .collect()
    }

    /// Checks canonical form and the T-restriction: an orbit hit by exactly
    /// one zero-block element must lie in `T`.
    pub fn validate(&self, spec: &DowlingSpec) -> Result<()> {
        if self.slots.len() != spec.n {
            return Err(Error::LengthMismatch { expected: spec.n, found: self.slots.len() });
        }
        let id = spec.group().identity();
        for (i, s) in self.slots.iter().enumerate() {
            match *s {
                Slot::Block { root, color } => {
                    let root = root as usize;
                    if color as usize >= spec.group().order() || root > i {
                        return Err(Error::InvalidElement(format!("bad block slot at {}", i + 1)));
                    }
                    match self.slots[root] {
                        Slot::Block { root: r, color: c } if r as usize == root => {
                            if c as usize != id {
                                return Err(Error::InvalidElement(format!(
                                    "block rooted at {} is not normalized",
                                    root + 1
                                )));
                            }
                        }
                        _ => {
                            return Err(Error::InvalidElement(format!(
                                "element {} points to a non-root {}",
                                i + 1,
                                root + 1
                            )))
                        }
                    }
                }
                Slot::Zero { point } => {
                    if point as usize >= spec.gset.size() {
                        return Err(Error::InvalidElement(format!("point out of range at {}", i + 1)));
                    }
                }
            }
        }
        if !self.satisfies_t_restriction(spec) {
            return Err(Error::InvalidElement(
                "an orbit outside T is hit by a singleton zero block".into(),
            ));
        }
        Ok(())
    }

    fn satisfies_t_restriction(&self, spec: &DowlingSpec) -> bool {
        let orbit = spec.gset.orbit_index();
        let mut hits: HashMap<usize, (usize, usize)> = HashMap::new();
        for (_, p) in self.zero_block() {
            let e = hits.entry(orbit[p]).or_insert((0, p));
            e.0 += 1;
        }
        hits.values().all(|&(count, p)| count != 1 || spec.gset.in_t(p))
    }

    /// Text form with 1-based elements: blocks as `color:element` lists
    /// separated by `|`, then `Z{element:point,...}`.
    pub fn canonical_string(&self) -> String {
        let mut parts: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&(i, c)| format!("{c}:{}", i + 1)).collect::<Vec<_>>().join(","))
            .collect();
        let zero = self
            .zero_block()
            .iter()
            .map(|&(i, p)| format!("{}:{p}", i + 1))
            .collect::<Vec<_>>()
            .join(",");
        parts.push(format!("Z{{{zero}}}"));
        parts.join("|")
    }

    pub fn parse(spec: &DowlingSpec, text: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("element string {text:?}: {why}"));
        let text = text.trim();
        let (blocks_part, zero_part) = match text.find("Z{") {
            Some(pos) => (&text[..pos], &text[pos..]),
            None => return Err(bad("missing Z{...}")),
        };
        let zero_inner = zero_part
            .strip_prefix("Z{")
            .and_then(|z| z.strip_suffix('}'))
            .ok_or_else(|| bad("malformed zero block"))?;
        let pair = |s: &str| -> Result<(usize, usize)> {
            let (a, b) = s.split_once(':').ok_or_else(|| bad("expected a:b"))?;
            let a = a.trim().parse::<usize>().map_err(|_| bad("not an integer"))?;
            let b = b.trim().parse::<usize>().map_err(|_| bad("not an integer"))?;
            Ok((a, b))
        };
        let one_based = |i: usize| i.checked_sub(1).ok_or_else(|| bad("elements are 1-based"));
        let mut blocks = Vec::new();
        for block in blocks_part.split('|').map(str::trim).filter(|b| !b.is_empty()) {
            let members = block
                .split(',')
                .map(|m| {
                    let (c, i) = pair(m)?;
                    Ok((one_based(i)?, c))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(members);
        }
        let zero = zero_inner
            .split(',')
            .map(str::trim)
            .filter(|z| !z.is_empty())
            .map(|z| {
                let (i, p) = pair(z)?;
                Ok((one_based(i)?, p))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(spec, &blocks, &zero)
    }

    fn to_raw(&self) -> Vec<Raw> {
        self.slots
            .iter()
            .map(|s| match *s {
                Slot::Block { root, color } => Raw::Block { label: root as usize, color: color as usize },
                Slot::Zero { point } => Raw::Zero { point: point as usize },
            })
            .collect()
    }
}

impl fmt::Display for DowlingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

/// Every element covering `e`, sorted and deduplicated.
pub fn covers_of(spec: &DowlingSpec, e: &DowlingElement) -> Result<Vec<DowlingElement>> {
    e.validate(spec)?;
    let group = spec.group();
    let raw = e.to_raw();
    let blocks = e.blocks();
    let mut out = Vec::new();

    // merges: a ∪ b·g, twisting the block with the larger root
    for (ia, a) in blocks.iter().enumerate() {
        for b in &blocks[ia + 1..] {
            let label = a[0].0;
            for g in group.elements() {
                let mut next = raw.clone();
                for &(x, c) in b {
                    next[x] = Raw::Block { label, color: group.mul(c, g) };
                }
                out.push(canonicalize(group, &next));
            }
        }
    }
    // color moves: z'(x) = b(x).s
    for block in &blocks {
        for s in 0..spec.gset.size() {
            let mut next = raw.clone();
            for &(x, c) in block {
                next[x] = Raw::Zero { point: spec.gset.act(c, s) };
            }
            let cand = canonicalize(group, &next);
            if cand.satisfies_t_restriction(spec) {
                out.push(cand);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `(w·e)` with `(w·e)_{σ(i)} = fᵢ · eᵢ`, recanonicalized.
pub fn wreath_act(spec: &DowlingSpec, w: &WreathElement, e: &DowlingElement) -> Result<DowlingElement> {
    e.validate(spec)?;
    if w.len() != spec.n {
        return Err(Error::LengthMismatch { expected: spec.n, found: w.len() });
    }
    let group = spec.group();
    let mut next = vec![Raw::Zero { point: 0 }; spec.n];
    for (i, r) in e.to_raw().into_iter().enumerate() {
        let f = w.colors[i];
        next[w.perm[i]] = match r {
            Raw::Block { label, color } => Raw::Block { label, color: group.mul(f, color) },
            Raw::Zero { point } => Raw::Zero { point: spec.gset.act(f, point) },
        };
    }
    Ok(canonicalize(group, &next))
}

/// Breadth-first enumeration from the bottom, sorted by `(rank, slots)`.
pub fn enumerate_elements(spec: &DowlingSpec, cap: usize) -> Result<Vec<DowlingElement>> {
    Ok(explore(spec, cap, false)?.0)
}

type Explored = (Vec<DowlingElement>, Vec<(usize, usize)>);

fn explore(spec: &DowlingSpec, cap: usize, keep_covers: bool) -> Result<Explored> {
    let bottom = DowlingElement::bottom(spec);
    let mut index: HashMap<DowlingElement, usize> = HashMap::from([(bottom.clone(), 0)]);
    let mut found = vec![bottom];
    let mut covers = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for c in covers_of(spec, &found[i])? {
            let j = match index.get(&c) {
                Some(&j) => j,
                None => {
                    if found.len() >= cap {
                        return Err(Error::CapExceeded { cap, found: found.len() });
                    }
                    let j = found.len();
                    index.insert(c.clone(), j);
                    found.push(c);
                    queue.push_back(j);
                    j
                }
            };
            if keep_covers {
                covers.push((i, j));
            }
        }
    }
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&a, &b| (found[a].rank(), &found[a]).cmp(&(found[b].rank(), &found[b])));
    let mut new_of = vec![0; found.len()];
    for (k, &old) in order.iter().enumerate() {
        new_of[old] = k;
    }
    let sorted = order.iter().map(|&i| found[i].clone()).collect();
    let covers = covers.into_iter().map(|(a, b)| (new_of[a], new_of[b])).collect();
    Ok((sorted, covers))
}

/// A Dowling poset with its element table; index 0 is the bottom.
#[derive(Debug, Clone)]
pub struct DowlingPoset {
    pub spec: DowlingSpec,
    pub poset: Poset,
    pub elements: Vec<DowlingElement>,
    index: HashMap<DowlingElement, usize>,
}

impl DowlingPoset {
    pub fn index_of(&self, e: &DowlingElement) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

pub fn build_poset(spec: &DowlingSpec, cap: usize) -> Result<DowlingPoset> {
    let (elements, covers) = explore(spec, cap, true)?;
    let rank = elements.iter().map(DowlingElement::rank).collect();
    let labels = elements.iter().map(DowlingElement::canonical_string).collect();
    let poset = Poset::from_covers(elements.len(), &covers)?.with_rank(rank)?.with_labels(labels)?;
    let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    Ok(DowlingPoset { spec: spec.clone(), poset, elements, index })
}

/// One factor of a lower interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntervalFactor {
    /// The partition lattice on a block.
    Partition { ground: Vec<usize> },
    /// `D^{T∩{s}}(G_s, {s})` on the zero-block preimage of an orbit.
    Dowling { ground: Vec<usize>, representative: usize, stabilizer: Subgroup, in_t: bool },
}

impl IntervalFactor {
    pub fn ground(&self) -> &[usize] {
        match self {
            Self::Partition { ground } | Self::Dowling { ground, .. } => ground,
        }
    }

    pub fn spec(&self, group: &GroupTable) -> DowlingSpec {
        match self {
            Self::Partition { ground } => DowlingSpec::partition(ground.len()),
            Self::Dowling { ground, stabilizer, in_t, .. } => {
                let t: &[usize] = if *in_t { &[0] } else { &[] };
                let gset = GSetSpec::trivial(stabilizer.as_group(group), 1, t).expect("one point");
                DowlingSpec::new(gset, ground.len()).expect("factor spec")
            }
        }
    }

    /// The factor poset. For an orbit factor this is everything in the
    /// factor spec lying below the all-zero element.
    pub fn poset(&self, group: &GroupTable, cap: usize) -> Result<Poset> {
        let spec = self.spec(group);
        match self {
            Self::Partition { ground } => Ok(Poset::partition_lattice(ground.len())),
            Self::Dowling { .. } => {
                let full = build_poset(&spec, cap)?;
                let top = all_zero(&spec);
                match full.index_of(&top) {
                    Some(t) => Ok(full.poset.lower_interval(t)),
                    None => Ok(full.poset),
                }
            }
        }
    }
}

fn all_zero(spec: &DowlingSpec) -> DowlingElement {
    DowlingElement { slots: vec![Slot::Zero { point: 0 }; spec.n] }
}

/// One partition-lattice factor per block and one Dowling factor per orbit
/// of `S` (possibly on an empty ground set).
pub fn factor_interval(spec: &DowlingSpec, e: &DowlingElement) -> Result<Vec<IntervalFactor>> {
    e.validate(spec)?;
    let mut out: Vec<IntervalFactor> = e
        .blocks()
        .into_iter()
        .map(|b| IntervalFactor::Partition { ground: b.into_iter().map(|(i, _)| i).collect() })
        .collect();
    let orbit_of = spec.gset.orbit_index();
    for (k, orbit) in spec.gset.orbits_and_stabilizers().into_iter().enumerate() {
        let ground: Vec<usize> =
            e.zero_block().into_iter().filter(|&(_, p)| orbit_of[p] == k).map(|(i, _)| i).collect();
        out.push(IntervalFactor::Dowling {
            ground,
            representative: orbit.representative,
            in_t: spec.gset.in_t(orbit.representative),
            stabilizer: orbit.stabilizer,
        });
    }
    Ok(out)
}

/// `|D_n^T(G, S)|` from the product of block and zero-block species.
pub fn count_elements_species(spec: &DowlingSpec) -> Result<BigInt> {
    let w = spec.group().order() as u64;
    let n = spec.n;
    let mut series = block_count_series(w, n)?;
    for orbit in spec.gset.orbits_and_stabilizers() {
        let z = zero_block_count_series(w, orbit.stabilizer.order() as u64, spec.gset.in_t(orbit.representative), n)?;
        series = series.mul(&z)?;
    }
    series.unweighted(n, 0, 0)
}

/// Largest poset on which orbit homology is computed by brute force.
pub const BRUTE_FORCE_LIMIT: usize = 400;

/// `h_k = dim H̃_{k−2}` of the proper part of `D_k^{T∩{s}}(G_s, {s})` below
/// its all-zero element (0 when that element is excluded by `T`), for
/// `k ≤ order`. Small cases are computed from the chain complex; larger
/// ones use the Möbius generating function, which agrees with homology
/// wherever the brute-force range overlaps (see tests).
type OrbitKey = (Vec<Vec<usize>>, bool, usize);

pub fn orbit_homology_dims(stabilizer: &GroupTable, in_t: bool, order: usize) -> Result<Vec<u64>> {
    static MEMO: OnceLock<Mutex<HashMap<OrbitKey, u64>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    let key_table = stabilizer.table();
    let closed = mobius_orbit_dims(stabilizer.order() as u64, in_t, order)?;
    let mut out = Vec::with_capacity(order + 1);
    for (k, &fallback) in closed.iter().enumerate().take(order + 1) {
        let key = (key_table.clone(), in_t, k);
        if let Some(&h) = memo.lock().expect("memo lock").get(&key) {
            out.push(h);
            continue;
        }
        let h = match orbit_homology_brute(stabilizer, in_t, k, BRUTE_FORCE_LIMIT)? {
            Some(betti) => match k {
                0 => betti.get(-2) as u64,
                _ => betti.get(k as i64 - 2) as u64,
            },
            None => fallback,
        };
        memo.lock().expect("memo lock").insert(key, h);
        out.push(h);
    }
    Ok(out)
}

/// Reduced homology of the proper part below the all-zero element of
/// `D_k^{T∩{s}}(G_s, {s})`, if the poset has at most `limit` elements. The
/// one-point case is reported in degree −2.
pub fn orbit_homology_brute(
    stabilizer: &GroupTable,
    in_t: bool,
    k: usize,
    limit: usize,
) -> Result<Option<crate::homology::BettiTable>> {
    let t: &[usize] = if in_t { &[0] } else { &[] };
    let spec = DowlingSpec::new(GSetSpec::trivial(stabilizer.clone(), 1, t)?, k)?;
    let size = count_elements_species(&spec)?;
    if size.to_usize().is_none_or(|s| s > limit) {
        return Ok(None);
    }
    let full = build_poset(&spec, limit.max(1))?;
    let Some(top) = full.index_of(&all_zero(&spec)) else {
        return Ok(Some(crate::homology::BettiTable::default()));
    };
    let interval = full.poset.lower_interval(top);
    if interval.len() == 1 {
        let mut t = crate::homology::BettiTable::default();
        t.add(-2, 1);
        return Ok(Some(t));
    }
    Ok(Some(reduced_homology(&interval.proper_part()?)?))
}

/// `|μ(0̂, top)|` of the orbit factor posets from the identity
/// `Σ_x μ(0̂, x) = [poset is a point]`: blocks contribute `(1+t)^{1/w}`.
fn mobius_orbit_dims(w: u64, in_t: bool, order: usize) -> Result<Vec<u64>> {
    // log(1+t) = Σ (−1)^{m−1} tᵐ/m
    let mut log1p = WeightedSeries::zero(w, order);
    for m in 1..=order {
        let sign = if m % 2 == 1 { 1 } else { -1 };
        log1p = log1p.with_term(m, 0, 0, Rational::new(BigInt::from(sign), BigInt::from(m)));
    }
    let inv_blocks = log1p.scale(&Rational::new(BigInt::from(-1), BigInt::from(w))).exp()?;
    let mut points = WeightedSeries::one(w, order);
    if !in_t {
        points = points.with_term(1, 0, 0, Rational::new(BigInt::from(1), BigInt::from(w)));
    }
    let orbit = points.mul(&inv_blocks)?;
    (0..=order)
        .map(|k| {
            let mu = orbit.unweighted(k, 0, 0)?;
            mu.abs().to_u64().ok_or(Error::Overflow("orbit Möbius value"))
        })
        .collect()
}

/// Whitney dimensions by rank, computed twice: from the enumerated poset and
/// from the species product for a point with the same orbit data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationCheck {
    pub n: usize,
    pub enumerated: Vec<u64>,
    pub species: Vec<u64>,
    /// Whitney homology of rank `r` sits only in degree `r`.
    pub diagonal: bool,
}

impl FactorizationCheck {
    pub fn matches(&self) -> bool {
        self.diagonal && self.mismatches().is_empty()
    }

    /// Ranks where the two sides differ.
    pub fn mismatches(&self) -> Vec<usize> {
        (0..self.enumerated.len().max(self.species.len()))
            .filter(|&r| self.enumerated.get(r) != self.species.get(r))
            .collect()
    }
}

pub fn whitney_factorization_check(spec: &DowlingSpec, cap: usize) -> Result<FactorizationCheck> {
    let dp = build_poset(spec, cap)?;
    let wh = crate::homology::whitney_homology(&dp.poset)?;
    let mut enumerated = vec![0u64; spec.n + 1];
    for (&(r, _), &dim) in &wh.0 {
        enumerated[r] += dim as u64;
    }
    let orbits = spec
        .gset
        .orbits_and_stabilizers()
        .into_iter()
        .map(|o| crate::series::OrbitData { in_t: spec.gset.in_t(o.representative), stabilizer: o.stabilizer })
        .collect();
    let point = crate::series::SpaceInput::new("point", vec![1], spec.group().clone(), orbits, true)?;
    let row = crate::series::e1_series(&point, spec.n)?.dimension_row(spec.n)?;
    let mut species = vec![0u64; spec.n + 1];
    for (&(p, q), &dim) in &row {
        if q != 0 || p > spec.n {
            return Err(Error::Series(format!("unexpected E1 bidegree ({p},{q}) for a point")));
        }
        species[p] += dim;
    }
    Ok(FactorizationCheck { n: spec.n, enumerated, species, diagonal: wh.is_diagonal() })
}
