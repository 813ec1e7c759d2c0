//! Symmetric-group characters and decompositions of Whitney homology
//! restricted to `Sₙ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dowling::{wreath_act, DowlingPoset};
use crate::error::{Error, Result};
use crate::group::WreathElement;
use crate::homology::{lefschetz_number, reduced_homology};
use crate::rational::{factorial, fmt as fmt_rat, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Representation(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Representation(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `z_μ = ∏ i^{mᵢ} mᵢ!`.
    pub fn centralizer_order(&self) -> BigInt {
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        for &p in &self.0 {
            *counts.entry(p).or_default() += 1;
        }
        counts
            .into_iter()
            .map(|(i, m)| BigInt::from(i).pow(m) * factorial(m))
            .product()
    }

    pub fn class_size(&self) -> BigInt {
        factorial(self.size() as u32) / self.centralizer_order()
    }

    /// Hook-length dimension formula.
    pub fn hook_dimension(&self) -> BigInt {
        let conj: Vec<usize> = (0..self.0.first().copied().unwrap_or(0))
            .map(|j| self.0.iter().filter(|&&r| r > j).count())
            .collect();
        let mut hooks = BigInt::from(1);
        for (i, &row) in self.0.iter().enumerate() {
            for (j, &col) in conj.iter().enumerate().take(row) {
                hooks *= BigInt::from(row - j + col - i - 1);
            }
        }
        factorial(self.size() as u32) / hooks
    }

    /// A permutation of `[0, |μ|)` with this cycle type.
    pub fn representative(&self) -> Vec<usize> {
        let mut perm = Vec::with_capacity(self.size());
        let mut start = 0;
        for &len in &self.0 {
            for k in 0..len {
                perm.push(start + (k + 1) % len);
            }
            start += len;
        }
        perm
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `m`, in reverse lexicographic order.
pub fn partitions(m: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

pub fn cycle_type(perm: &[usize]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut parts = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        parts.push(len);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition(parts)
}

/// Beta-set of `λ` with `len` beads.
fn beta_set(lambda: &[usize], len: usize) -> Vec<usize> {
    (0..len).map(|i| lambda.get(i).copied().unwrap_or(0) + len - 1 - i).collect()
}

fn from_beta(beta: &[usize]) -> Vec<usize> {
    let mut b = beta.to_vec();
    b.sort_unstable_by(|a, b| b.cmp(a));
    let len = b.len();
    b.iter().enumerate().map(|(i, &x)| x + i + 1 - len).filter(|&p| p > 0).collect()
}

fn mn_rec(lambda: &[usize], mu: &[usize], memo: &mut HashMap<(Vec<usize>, Vec<usize>), i64>) -> i64 {
    let Some((&r, rest)) = mu.split_first() else {
        return i64::from(lambda.is_empty());
    };
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let beta = beta_set(lambda, lambda.len());
    let mut total = 0;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        // height of the removed rim hook
        let between = beta.iter().filter(|&&c| c > b - r && c < b).count();
        let mut next = beta.clone();
        next[idx] = b - r;
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * mn_rec(&from_beta(&next), rest, memo);
    }
    memo.insert(key, total);
    total
}

/// `χ^λ(μ)` by border-strip removal.
pub fn mn_character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::Representation(format!(
            "size mismatch: |{lambda}| = {} but |{mu}| = {}",
            lambda.size(),
            mu.size()
        )));
    }
    Ok(mn_rec(&lambda.0, &mu.0, &mut HashMap::new()))
}

/// The character table of `S_m`; rows are irreducibles, columns classes,
/// both in the order of [`partitions`].
#[derive(Debug)]
pub struct CharacterTable {
    pub m: usize,
    pub partitions: Vec<Partition>,
    pub values: Vec<Vec<i64>>,
}

pub fn character_table(m: usize) -> Arc<CharacterTable> {
    static TABLES: OnceLock<Mutex<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    let mut guard = tables.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(m)
        .or_insert_with(|| {
            let parts = partitions(m);
            let mut memo = HashMap::new();
            let values = parts
                .iter()
                .map(|l| parts.iter().map(|mu| mn_rec(&l.0, &mu.0, &mut memo)).collect())
                .collect();
            Arc::new(CharacterTable { m, partitions: parts, values })
        })
        .clone()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    pub m: usize,
    pub values: BTreeMap<Partition, Rational>,
}

impl ClassFunction {
    pub fn new(m: usize, values: BTreeMap<Partition, Rational>) -> Result<Self> {
        let classes = partitions(m);
        if values.len() != classes.len() || classes.iter().any(|c| !values.contains_key(c)) {
            return Err(Error::Representation(format!(
                "a class function of S_{m} needs exactly the {} classes",
                classes.len()
            )));
        }
        Ok(Self { m, values })
    }

    pub fn from_fn(m: usize, mut f: impl FnMut(&Partition) -> Rational) -> Self {
        let values = partitions(m).into_iter().map(|mu| {
            let v = f(&mu);
            (mu, v)
        });
        Self { m, values: values.collect() }
    }

    pub fn zero(m: usize) -> Self {
        Self::from_fn(m, |_| int(0))
    }

    pub fn irreducible(lambda: &Partition) -> Self {
        let table = character_table(lambda.size());
        let row = table.partitions.iter().position(|p| p == lambda).expect("listed");
        Self::from_fn(lambda.size(), |mu| {
            let col = table.partitions.iter().position(|p| p == mu).expect("listed");
            int(table.values[row][col])
        })
    }

    pub fn value(&self, mu: &Partition) -> Rational {
        self.values.get(mu).cloned().unwrap_or_else(|| int(0))
    }

    /// `⟨f, g⟩ = (1/m!) Σ_μ |C_μ| f(μ) g(μ)`; characters are real.
    pub fn inner(&self, other: &Self) -> Result<Rational> {
        if self.m != other.m {
            return Err(Error::LengthMismatch { expected: self.m, found: other.m });
        }
        let sum: Rational = self
            .values
            .iter()
            .map(|(mu, v)| Rational::from_integer(mu.class_size()) * v * other.value(mu))
            .sum();
        Ok(sum / Rational::from_integer(factorial(self.m as u32)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let values: Vec<serde_json::Value> = self
            .values
            .iter()
            .map(|(mu, v)| serde_json::json!({"class": mu.parts(), "value": fmt_rat(v)}))
            .collect();
        serde_json::json!({"m": self.m, "values": values})
    }
}

/// Irreducible multiplicities, with zero entries omitted.
pub type Decomposition = BTreeMap<Partition, i64>;

pub fn decompose(cf: &ClassFunction) -> Result<Decomposition> {
    let table = character_table(cf.m);
    let mut out = BTreeMap::new();
    for lambda in &table.partitions {
        let chi = ClassFunction::irreducible(lambda);
        let mult = cf.inner(&chi)?;
        if !mult.is_integer() {
            return Err(Error::NonIntegral { value: fmt_rat(&mult), location: format!("multiplicity of {lambda}") });
        }
        let mult = mult.to_integer().to_i64().ok_or(Error::Overflow("multiplicity"))?;
        if mult != 0 {
            out.insert(lambda.clone(), mult);
        }
    }
    let rebuilt = ClassFunction::from_fn(cf.m, |mu| {
        out.iter()
            .map(|(l, &k)| int(k) * ClassFunction::irreducible(l).value(mu))
            .sum()
    });
    if rebuilt != *cf {
        return Err(Error::Representation("decomposition does not reconstruct the class function".into()));
    }
    Ok(out)
}

pub fn decomposition_json(d: &Decomposition) -> serde_json::Value {
    serde_json::Value::Array(
        d.iter()
            .map(|(l, k)| serde_json::json!({"partition": l.parts(), "multiplicity": k}))
            .collect(),
    )
}

/// `λ⟨m⟩ = (m − |λ|, λ₁, …)`.
pub fn pad_partition(lambda: &Partition, m: usize) -> Result<Partition> {
    let top = m.checked_sub(lambda.size()).ok_or_else(|| {
        Error::Representation(format!("cannot pad {lambda} to size {m}"))
    })?;
    let mut parts: Vec<usize> = Some(top).filter(|&t| t > 0).into_iter().collect();
    parts.extend_from_slice(&lambda.0);
    if top == 0 && !lambda.is_empty() {
        return Err(Error::Representation(format!("{m} is too small to pad {lambda}")));
    }
    Partition::new(parts).map_err(|_| Error::Representation(format!("{m} is too small to pad {lambda}")))
}

/// Inverse of [`pad_partition`].
pub fn strip_top_row(lambda: &Partition) -> Partition {
    Partition(lambda.0.iter().skip(1).copied().collect())
}

pub fn regular_character(m: usize) -> ClassFunction {
    let total = Rational::from_integer(factorial(m as u32));
    ClassFunction::from_fn(m, |mu| if mu.0.iter().all(|&p| p == 1) { total.clone() } else { int(0) })
}

/// Permutation character of `Sₙ` on `k`-subsets of `[n]`, by counting
/// subsets that are unions of cycles.
pub fn subset_character(n: usize, k: usize) -> ClassFunction {
    ClassFunction::from_fn(n, |mu| {
        let mut ways = vec![BigInt::zero(); k + 1];
        ways[0] = BigInt::from(1);
        for &c in &mu.0 {
            for s in (c..=k).rev() {
                let add = ways[s - c].clone();
                ways[s] += add;
            }
        }
        Rational::from_integer(ways[k].clone())
    })
}

/// The `Sₙ` character on rank-`r` Whitney homology, `Sₙ` acting by
/// permuting coordinates with trivial colors. Refuses unless each lower
/// interval has homology concentrated in degree `r − 2`.
pub fn whitney_character(dp: &DowlingPoset, rank: usize) -> Result<ClassFunction> {
    let n = dp.spec.n();
    let p = &dp.poset;
    let at_rank: Vec<usize> = (0..p.len()).filter(|&x| p.grade(x) == rank).collect();
    let mut intervals = Vec::with_capacity(at_rank.len());
    for &x in &at_rank {
        if rank == 0 {
            intervals.push(None);
            continue;
        }
        let (lower, map) = p.lower_interval_with_map(x);
        let (proper, pmap) = lower.proper_part_with_map()?;
        let h = reduced_homology(&proper)?;
        let concentrated = h.0.keys().all(|&d| d == rank as i64 - 2);
        if !concentrated {
            return Err(Error::Refused(format!(
                "homology below {} is not concentrated in degree {}",
                dp.elements[x],
                rank as i64 - 2
            )));
        }
        let global: Vec<usize> = pmap.iter().map(|&i| map[i]).collect();
        intervals.push(Some((proper, global)));
    }
    let mut out = BTreeMap::new();
    for mu in partitions(n) {
        let w = WreathElement::permutation(dp.spec.group(), mu.representative())?;
        let mut image = vec![0usize; p.len()];
        for (i, e) in dp.elements.iter().enumerate() {
            let moved = wreath_act(&dp.spec, &w, e)?;
            image[i] = dp.index_of(&moved).ok_or_else(|| Error::InvalidElement(moved.to_string()))?;
        }
        let mut value = 0i64;
        for (k, &x) in at_rank.iter().enumerate() {
            if image[x] != x {
                continue;
            }
            value += match &intervals[k] {
                None => 1,
                Some((proper, global)) => {
                    let local: HashMap<usize, usize> = global.iter().enumerate().map(|(i, &g)| (g, i)).collect();
                    let auto: Vec<usize> = global.iter().map(|g| local[&image[*g]]).collect();
                    let l = lefschetz_number(proper, &auto)?;
                    if rank.is_multiple_of(2) { l } else { -l }
                }
            };
        }
        out.insert(mu, int(value));
    }
    ClassFunction::new(n, out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityReport {
    /// `(n, stripped names with multiplicities)` per window entry.
    pub names: Vec<(usize, Decomposition)>,
    pub stable: bool,
    /// First `n` whose names differ from the previous entry.
    pub first_violation: Option<usize>,
    /// `Σ|λ|` must not exceed this, when known.
    pub size_bound: Option<Rational>,
    pub bound_ok: bool,
}

impl MultiplicityReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "stable": self.stable,
            "firstViolation": self.first_violation,
            "sizeBound": self.size_bound.as_ref().map(fmt_rat),
            "boundOk": self.bound_ok,
            "window": self.names.iter().map(|(n, d)| serde_json::json!({
                "n": n,
                "names": decomposition_json(d),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Decomposes each character, strips top rows and compares across the
/// window. Names are only meaningful when the padded form is a partition,
/// which `strip_top_row` of an actual partition always is.
pub fn stable_multiplicity_check(
    sequence: &[(usize, ClassFunction)],
    size_bound: Option<Rational>,
) -> Result<MultiplicityReport> {
    let mut names = Vec::with_capacity(sequence.len());
    for (n, cf) in sequence {
        if cf.m != *n {
            return Err(Error::LengthMismatch { expected: *n, found: cf.m });
        }
        let d = decompose(cf)?;
        let stripped: Decomposition = d.into_iter().map(|(l, k)| (strip_top_row(&l), k)).collect();
        names.push((*n, stripped));
    }
    let first_violation = names.windows(2).find(|w| w[0].1 != w[1].1).map(|w| w[1].0);
    let bound_ok = match &size_bound {
        None => true,
        Some(b) => names
            .iter()
            .all(|(_, d)| d.keys().all(|l| Rational::from_integer(BigInt::from(l.size())) <= *b)),
    };
    Ok(MultiplicityReport {
        stable: first_violation.is_none(),
        first_violation,
        names,
        size_bound,
        bound_ok,
    })
}

/// Whether every value is a nonnegative integer combination of
/// irreducibles, i.e. an honest character.
pub fn is_character(cf: &ClassFunction) -> bool {
    decompose(cf).is_ok_and(|d| d.values().all(|&k| k >= 0))
}
