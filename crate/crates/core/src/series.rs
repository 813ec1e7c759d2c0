//! Truncated trivariate exponential generating functions.
//!
//! The coefficient of `tⁿ xᵖ y^q` is stored divided by `wⁿ n!`, where `w` is
//! the group order. In that normalization inductions from `G ≀ Sₙ` become
//! plain products and free algebras become exponentials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupTable, Subgroup};
use crate::rational::{factorial, fmt, int, Rational};

pub const DEFAULT_TRUNCATION: usize = 8;

type Poly = BTreeMap<(usize, usize), Rational>;

fn poly_add_assign(a: &mut Poly, b: &Poly, scale: &Rational) {
    for (k, v) in b {
        let e = a.entry(*k).or_insert_with(Rational::zero);
        *e += v * scale;
        if e.is_zero() {
            a.remove(k);
        }
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&(p1, q1), v1) in a {
        for (&(p2, q2), v2) in b {
            let e = out.entry((p1 + p2, q1 + q2)).or_insert_with(Rational::zero);
            *e += v1 * v2;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSeries {
    weight: u64,
    order: usize,
    /// `terms[n]` is the `tⁿ` coefficient as a polynomial in `x, y`.
    terms: Vec<Poly>,
}

impl WeightedSeries {
    pub fn zero(weight: u64, order: usize) -> Self {
        assert!(weight > 0, "series weight must be positive");
        Self { weight, order, terms: vec![Poly::new(); order + 1] }
    }

    pub fn one(weight: u64, order: usize) -> Self {
        Self::zero(weight, order).with_term(0, 0, 0, Rational::one())
    }

    /// `c · tⁿ xᵖ y^q` (dropped when `n` exceeds the truncation).
    pub fn monomial(weight: u64, order: usize, n: usize, p: usize, q: usize, c: Rational) -> Self {
        Self::zero(weight, order).with_term(n, p, q, c)
    }

    pub fn with_term(mut self, n: usize, p: usize, q: usize, c: Rational) -> Self {
        if n <= self.order && !c.is_zero() {
            let mut single = Poly::new();
            single.insert((p, q), Rational::one());
            poly_add_assign(&mut self.terms[n], &single, &c);
        }
        self
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize, p: usize, q: usize) -> Rational {
        self.terms.get(n).and_then(|t| t.get(&(p, q))).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero `((p, q), coeff)` pairs of the `tⁿ` coefficient.
    pub fn row(&self, n: usize) -> impl Iterator<Item = ((usize, usize), &Rational)> {
        self.terms.get(n).into_iter().flat_map(|t| t.iter().map(|(k, v)| (*k, v)))
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.weight, self.order)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.weight != other.weight || self.order != other.order {
            return Err(Error::Series(format!(
                "incompatible series: weight {} vs {}, truncation {} vs {}",
                self.weight, other.weight, self.order, other.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (n, t) in other.terms.iter().enumerate() {
            poly_add_assign(&mut out.terms[n], t, &Rational::one());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.weight, self.order);
        if !c.is_zero() {
            for (n, t) in self.terms.iter().enumerate() {
                poly_add_assign(&mut out.terms[n], t, c);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.weight, self.order);
        for i in 0..=self.order {
            if self.terms[i].is_empty() {
                continue;
            }
            for j in 0..=self.order - i {
                if other.terms[j].is_empty() {
                    continue;
                }
                let prod = poly_mul(&self.terms[i], &other.terms[j]);
                poly_add_assign(&mut out.terms[i + j], &prod, &Rational::one());
            }
        }
        Ok(out)
    }

    pub fn product_all<'a>(
        weight: u64,
        order: usize,
        factors: impl IntoIterator<Item = &'a WeightedSeries>,
    ) -> Result<Self> {
        factors.into_iter().try_fold(Self::one(weight, order), |acc, f| acc.mul(f))
    }

    /// `Σ argᵏ/k!`, via `n gₙ = Σ_k k fₖ g_{n−k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.terms[0].is_empty() {
            return Err(Error::Series("exp of a series with nonzero constant term".into()));
        }
        let mut out = Self::one(self.weight, self.order);
        for n in 1..=self.order {
            let mut acc = Poly::new();
            for k in 1..=n {
                if self.terms[k].is_empty() {
                    continue;
                }
                let prod = poly_mul(&self.terms[k], &out.terms[n - k]);
                poly_add_assign(&mut acc, &prod, &int(k as i64));
            }
            let inv_n = Rational::new(BigInt::one(), BigInt::from(n));
            let mut g = Poly::new();
            poly_add_assign(&mut g, &acc, &inv_n);
            out.terms[n] = g;
        }
        Ok(out)
    }

    /// Inverse of `exp`; requires constant term exactly 1.
    pub fn log(&self) -> Result<Self> {
        let mut unit = Poly::new();
        unit.insert((0, 0), Rational::one());
        if self.terms[0] != unit {
            return Err(Error::Series("log of a series whose constant term is not 1".into()));
        }
        let mut f = Self::zero(self.weight, self.order);
        for n in 1..=self.order {
            // n gₙ = n fₙ + Σ_{k<n} k fₖ g_{n−k}
            let mut acc = Poly::new();
            poly_add_assign(&mut acc, &self.terms[n], &int(n as i64));
            for k in 1..n {
                let prod = poly_mul(&f.terms[k], &self.terms[n - k]);
                poly_add_assign(&mut acc, &prod, &int(-(k as i64)));
            }
            let mut fn_ = Poly::new();
            poly_add_assign(&mut fn_, &acc, &Rational::new(BigInt::one(), BigInt::from(n)));
            f.terms[n] = fn_;
        }
        Ok(f)
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    /// `exp(−log self)`; exact inverse of a series with constant term 1.
    pub fn reciprocal(&self) -> Result<Self> {
        self.log()?.neg().exp()
    }

    /// Substitutes `t → c·t`.
    pub fn rescale_t(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        let mut power = Rational::one();
        for t in out.terms.iter_mut() {
            for v in t.values_mut() {
                *v *= &power;
            }
            power *= c;
        }
        out
    }

    /// Evaluates `x` and `y` at the given values, leaving a series in `t`.
    pub fn eval_xy(&self, x: &Rational, y: &Rational) -> Vec<Rational> {
        self.terms
            .iter()
            .map(|t| {
                t.iter().fold(Rational::zero(), |acc, (&(p, q), v)| {
                    acc + v * pow(x, p) * pow(y, q)
                })
            })
            .collect()
    }

    /// `coeff · wⁿ · n!` at `(n, p, q)`, which must be an integer.
    pub fn unweighted(&self, n: usize, p: usize, q: usize) -> Result<BigInt> {
        let scaled = self.coeff(n, p, q) * self.unweight_factor(n);
        if !scaled.is_integer() {
            return Err(Error::NonIntegral {
                value: fmt(&scaled),
                location: format!("t^{n} x^{p} y^{q}"),
            });
        }
        Ok(scaled.to_integer())
    }

    fn unweight_factor(&self, n: usize) -> Rational {
        Rational::from_integer(BigInt::from(self.weight).pow(n as u32) * factorial(n as u32))
    }

    /// Integer dimension table of row `n`, failing on fractional or
    /// negative entries.
    pub fn dimension_row(&self, n: usize) -> Result<BTreeMap<(usize, usize), u64>> {
        let mut out = BTreeMap::new();
        for ((p, q), _) in self.row(n) {
            let d = self.unweighted(n, p, q)?;
            if d.is_negative() {
                return Err(Error::Series(format!("negative dimension {d} at t^{n} x^{p} y^{q}")));
            }
            out.insert((p, q), d.to_u64().ok_or(Error::Overflow("dimension"))?);
        }
        Ok(out)
    }
}

fn pow(r: &Rational, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * r)
}

/// Homology of one `G`-orbit of special points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitData {
    pub stabilizer: Subgroup,
    pub in_t: bool,
}

/// A space `X` with a `G`-action, described by Borel–Moore Betti numbers
/// and the orbits of its special points.
#[derive(Debug, Clone)]
pub struct SpaceInput {
    pub name: String,
    pub betti: Vec<u64>,
    pub group: GroupTable,
    pub orbits: Vec<OrbitData>,
    pub i_acyclic: bool,
}

impl SpaceInput {
    pub fn new(
        name: impl Into<String>,
        mut betti: Vec<u64>,
        group: GroupTable,
        orbits: Vec<OrbitData>,
        i_acyclic: bool,
    ) -> Result<Self> {
        while betti.last() == Some(&0) {
            betti.pop();
        }
        if betti.is_empty() {
            return Err(Error::Series("space has no nonzero Borel-Moore homology".into()));
        }
        for o in &orbits {
            if o.stabilizer.elements().iter().any(|&g| g >= group.order()) {
                return Err(Error::NotSubgroup("stabilizer element out of range".into()));
            }
            group.subgroup(o.stabilizer.elements())?;
        }
        Ok(Self { name: name.into(), betti, group, orbits, i_acyclic })
    }

    /// Top degree `d` with `b_d > 0`.
    pub fn dimension(&self) -> usize {
        self.betti.len() - 1
    }

    pub fn weight(&self) -> u64 {
        self.group.order() as u64
    }

    /// `χ_c(X) = Σ (−1)^q b_q`.
    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(q, &b)| if q % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    pub fn is_free_and_unpunctured(&self) -> bool {
        self.orbits.is_empty()
    }
}

/// `exp(P_b(y) x^{n−1} tⁿ / (w n))`.
pub fn main_factor(n: usize, space: &SpaceInput, order: usize) -> Result<WeightedSeries> {
    if n == 0 {
        return Err(Error::Series("main factor index must be positive".into()));
    }
    let w = space.weight();
    let mut arg = WeightedSeries::zero(w, order);
    let denom = BigInt::from(w) * BigInt::from(n);
    for (q, &b) in space.betti.iter().enumerate() {
        if b > 0 {
            let c = Rational::new(BigInt::from(b), denom.clone());
            arg = arg.with_term(n, n - 1, q, c);
        }
    }
    arg.exp()
}

/// `Σ_k h_k xᵏ tᵏ / (|G_s|ᵏ k!)` for the given orbit.
pub fn orbit_factor(space: &SpaceInput, orbit: usize, order: usize) -> Result<WeightedSeries> {
    let data = space
        .orbits
        .get(orbit)
        .ok_or_else(|| Error::Series(format!("no orbit with index {orbit}")))?;
    let stab = data.stabilizer.as_group(&space.group);
    let h = crate::dowling::orbit_homology_dims(&stab, data.in_t, order)?;
    let ws = BigInt::from(stab.order());
    let mut out = WeightedSeries::zero(space.weight(), order);
    for (k, &hk) in h.iter().enumerate() {
        let c = Rational::new(BigInt::from(hk), ws.pow(k as u32) * factorial(k as u32));
        out = out.with_term(k, k, 0, c);
    }
    Ok(out)
}

/// Every exponential factor and orbit factor of the E¹ product, in order:
/// main factors `n = 1..=order`, then orbits.
pub fn e1_factors(space: &SpaceInput, order: usize) -> Result<Vec<WeightedSeries>> {
    let mut out = (1..=order).map(|n| main_factor(n, space, order)).collect::<Result<Vec<_>>>()?;
    for k in 0..space.orbits.len() {
        out.push(orbit_factor(space, k, order)?);
    }
    Ok(out)
}

pub fn e1_series(space: &SpaceInput, order: usize) -> Result<WeightedSeries> {
    WeightedSeries::product_all(space.weight(), order, &e1_factors(space, order)?)
}

/// `dim E¹_{p,q}[n]` for `n ≤ order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E1Table {
    pub rows: Vec<BTreeMap<(usize, usize), u64>>,
}

impl E1Table {
    pub fn get(&self, n: usize, p: usize, q: usize) -> u64 {
        self.rows.get(n).and_then(|r| r.get(&(p, q))).copied().unwrap_or(0)
    }

    /// Sums along `p + q = m`.
    pub fn diagonal_sums(&self, n: usize) -> BTreeMap<usize, u64> {
        let mut out = BTreeMap::new();
        for (&(p, q), &d) in self.rows.get(n).into_iter().flatten() {
            *out.entry(p + q).or_default() += d;
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,p,q,dim\n");
        for (n, row) in self.rows.iter().enumerate() {
            for (&(p, q), &d) in row {
                s.push_str(&format!("{n},{p},{q},{d}\n"));
            }
        }
        s
    }
}

impl Serialize for E1Table {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(None)?;
        for (n, row) in self.rows.iter().enumerate() {
            for (&(p, q), &dim) in row {
                seq.serialize_element(&serde_json::json!({"n": n, "p": p, "q": q, "dim": dim}))?;
            }
        }
        seq.end()
    }
}

pub fn e1_table(space: &SpaceInput, order: usize) -> Result<E1Table> {
    let series = e1_series(space, order)?;
    let rows = (0..=order).map(|n| series.dimension_row(n)).collect::<Result<_>>()?;
    Ok(E1Table { rows })
}

/// Borel–Moore Betti numbers of `Conf_G^n(X, T)` by diagonal summation.
/// Only valid when the collision spectral sequence degenerates.
pub fn bm_betti(space: &SpaceInput, n: usize) -> Result<BTreeMap<usize, u64>> {
    if !space.i_acyclic {
        return Err(Error::Refused(format!(
            "{} is not marked i-acyclic; the E1 page does not determine Borel-Moore homology \
             (use the e1 table instead)",
            space.name
        )));
    }
    let table = e1_table(space, n)?;
    Ok(table.diagonal_sums(n))
}

/// `χ_c(Confⁿ)` for `n ≤ order`, from `x = y = −1`.
pub fn euler_series(space: &SpaceInput, order: usize) -> Result<Vec<BigInt>> {
    let series = e1_series(space, order)?;
    let values = series.eval_xy(&int(-1), &int(-1));
    values
        .iter()
        .enumerate()
        .map(|(n, v)| {
            let scaled = v * series.unweight_factor(n);
            if !scaled.is_integer() {
                return Err(Error::NonIntegral { value: fmt(&scaled), location: format!("chi_c at n={n}") });
            }
            Ok(scaled.to_integer())
        })
        .collect()
}

/// `∏_{i<n} (χ_c(X) − i·w)`.
pub fn euler_closed_form(space: &SpaceInput, order: usize) -> Vec<BigInt> {
    let chi = BigInt::from(space.euler_characteristic());
    let w = BigInt::from(space.weight());
    (0..=order)
        .map(|n| (0..n).fold(BigInt::one(), |acc, i| acc * (&chi - &w * BigInt::from(i))))
        .collect()
}

/// `exp(Σ_{m≥1} tᵐ/(w·m!))`: one G-colored block per structure.
pub fn block_count_series(weight: u64, order: usize) -> Result<WeightedSeries> {
    let mut arg = WeightedSeries::zero(weight, order);
    for m in 1..=order {
        let c = Rational::new(BigInt::one(), BigInt::from(weight) * factorial(m as u32));
        arg = arg.with_term(m, 0, 0, c);
    }
    arg.exp()
}

/// `exp(t/|G_s|)`, minus its linear term when the orbit is not in `T`.
pub fn zero_block_count_series(weight: u64, stabilizer_order: u64, in_t: bool, order: usize) -> Result<WeightedSeries> {
    let lin = Rational::new(BigInt::one(), BigInt::from(stabilizer_order));
    let mut s = WeightedSeries::monomial(weight, order, 1, 0, 0, lin.clone()).exp()?;
    if !in_t {
        s = s.add(&WeightedSeries::monomial(weight, order, 1, 0, 0, -lin))?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn line(d: usize) -> SpaceInput {
        let mut b = vec![0; d + 1];
        b[d] = 1;
        SpaceInput::new(format!("R^{d}"), b, GroupTable::trivial(), vec![], true).unwrap()
    }

    #[test]
    fn unit_and_exp_additivity() {
        let t = WeightedSeries::monomial(1, 6, 1, 0, 0, int(1));
        let e = t.exp().unwrap();
        assert_eq!(e.mul(&WeightedSeries::one(1, 6)).unwrap(), e);
        let e2 = t.scale(&int(2)).exp().unwrap();
        assert_eq!(e.mul(&e).unwrap(), e2);
        assert!(WeightedSeries::zero(1, 6).exp().unwrap().is_one());
        assert!(WeightedSeries::one(1, 4).exp().is_err());
        assert!(e.mul(&WeightedSeries::one(2, 6)).is_err());
    }

    #[test]
    fn bell_numbers_from_blocks() {
        let s = block_count_series(1, 6).unwrap();
        let bell: Vec<BigInt> = (0..=6).map(|n| s.unweighted(n, 0, 0).unwrap()).collect();
        assert_eq!(bell, [1, 1, 2, 5, 15, 52, 203].map(BigInt::from));
    }

    #[test]
    fn exp_of_small_arguments() {
        let yt = WeightedSeries::monomial(1, 4, 1, 0, 1, int(1));
        assert_eq!(yt.exp().unwrap().coeff(3, 0, 3), rat(1, 6));

        let arg = WeightedSeries::zero(1, 3)
            .with_term(1, 0, 1, int(1))
            .with_term(2, 1, 1, rat(1, 2))
            .with_term(3, 2, 1, rat(1, 3));
        let e = arg.exp().unwrap();
        assert_eq!(e.unweighted(3, 0, 3).unwrap(), BigInt::from(1));
        assert_eq!(e.unweighted(3, 1, 2).unwrap(), BigInt::from(3));
        assert_eq!(e.unweighted(3, 2, 1).unwrap(), BigInt::from(2));
    }

    #[test]
    fn main_factor_instances() {
        let f = main_factor(2, &line(2), 4).unwrap();
        assert_eq!(f.coeff(2, 1, 2), rat(1, 2));
        let z2 = GroupTable::cyclic(2).unwrap();
        let s = SpaceInput::new("x", vec![0, 1], z2, vec![], false).unwrap();
        let f = main_factor(3, &s, 6).unwrap();
        assert_eq!(f.coeff(3, 2, 1), rat(1, 6));
        assert!(main_factor(0, &s, 6).is_err());
    }

    #[test]
    fn conf_of_the_line() {
        let table = e1_table(&line(1), 7).unwrap();
        assert_eq!(
            table.rows[3],
            BTreeMap::from([((0, 3), 1), ((1, 2), 3), ((2, 1), 2)])
        );
        for n in 0..=7 {
            let sums = table.diagonal_sums(n);
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(sums, BTreeMap::from([(n, fact)]));
        }
        assert_eq!(table.rows[0], BTreeMap::from([((0, 0), 1)]));
    }

    #[test]
    fn conf_two_of_the_plane() {
        let b = bm_betti(&line(2), 2).unwrap();
        assert_eq!(b, BTreeMap::from([(3, 1), (4, 1)]));
    }

    #[test]
    fn refuses_non_acyclic() {
        let mut s = line(1);
        s.i_acyclic = false;
        assert!(matches!(bm_betti(&s, 2), Err(Error::Refused(_))));
    }

    #[test]
    fn orbit_factor_low_degrees() {
        let z2 = GroupTable::cyclic(2).unwrap();
        let whole = z2.whole();
        let c = SpaceInput::new(
            "C",
            vec![0, 0, 1],
            z2.clone(),
            vec![OrbitData { stabilizer: whole.clone(), in_t: true }, OrbitData { stabilizer: whole, in_t: false }],
            true,
        )
        .unwrap();
        let f = orbit_factor(&c, 0, 3).unwrap();
        assert_eq!(f.coeff(1, 1, 0), rat(1, 2));
        assert_eq!(f.coeff(2, 2, 0), rat(3, 8));
        let g = orbit_factor(&c, 1, 3).unwrap();
        assert!(g.coeff(1, 1, 0).is_zero());
    }

    #[test]
    fn euler_free_examples() {
        let z2 = GroupTable::cyclic(2).unwrap();
        let rp = SpaceInput::new("free", vec![0, 1, 1], z2, vec![], true).unwrap();
        let e = euler_series(&rp, 8).unwrap();
        assert_eq!(e[0], BigInt::from(1));
        assert!(e[1..].iter().all(Zero::is_zero));
        assert_eq!(e, euler_closed_form(&rp, 8));
        let plane = euler_series(&line(2), 5).unwrap();
        assert_eq!(plane, [1, 1, 0, 0, 0, 0].map(BigInt::from));
    }

    #[test]
    fn weight_substitution_recovers_plain_egf() {
        // exp(t/w) under t → w t is exp(t)
        let s = WeightedSeries::monomial(3, 5, 1, 0, 0, rat(1, 3)).exp().unwrap();
        let plain = WeightedSeries::monomial(3, 5, 1, 0, 0, int(1)).exp().unwrap();
        assert_eq!(s.rescale_t(&int(3)), plain);
    }

    fn arb_arg() -> impl Strategy<Value = WeightedSeries> {
        proptest::collection::vec((1usize..=5, 0usize..3, 0usize..3, -3i64..=3, 1i64..=4), 0..6)
            .prop_map(|terms| {
                terms.into_iter().fold(WeightedSeries::zero(2, 5), |s, (n, p, q, a, b)| {
                    s.with_term(n, p, q, rat(a, b))
                })
            })
    }

    proptest! {
        #[test]
        fn log_inverts_exp(a in arb_arg()) {
            prop_assert_eq!(a.exp().unwrap().log().unwrap(), a);
        }

        #[test]
        fn exp_is_a_homomorphism(a in arb_arg(), b in arb_arg()) {
            let lhs = a.add(&b).unwrap().exp().unwrap();
            let rhs = a.exp().unwrap().mul(&b.exp().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mul_commutes_and_associates(a in arb_arg(), b in arb_arg(), c in arb_arg()) {
            let (ea, eb, ec) = (a.exp().unwrap(), b.exp().unwrap(), c.exp().unwrap());
            prop_assert_eq!(ea.mul(&eb).unwrap(), eb.mul(&ea).unwrap());
            prop_assert_eq!(
                ea.mul(&eb).unwrap().mul(&ec).unwrap(),
                ea.mul(&eb.mul(&ec).unwrap()).unwrap()
            );
        }

        #[test]
        fn e1_rows_are_integral_and_bounded(
            betti in proptest::collection::vec(0u64..3, 1..4).prop_filter("nonzero", |b| b.iter().any(|&x| x > 0)),
            k in 1usize..=3,
        ) {
            let g = GroupTable::cyclic(k).unwrap();
            let s = SpaceInput::new("r", betti, g, vec![], true).unwrap();
            let t = e1_table(&s, 6).unwrap();
            for n in 1..=6 {
                for &(p, q) in t.rows[n].keys() {
                    prop_assert!(p < n);
                    prop_assert!(q <= s.dimension() * n);
                }
            }
        }
    }
}
