//! The generation locus of the E¹ page and the iterative stabilization
//! procedure.
//!
//! The locus is kept symbolic: one family `{((n−1)/n, i/n) : n ≥ n₀}` per
//! nonzero Betti number `b_i`, plus the accumulation point `(1, 0)`. Every
//! quantity below is an exact rational computed in closed form.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{fmt, int, Rational};
use crate::series::{e1_series, SpaceInput, WeightedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Family {
    /// Homological degree `i`.
    pub degree: usize,
    pub multiplicity: u64,
    /// First remaining member `n₀`.
    pub start: u64,
}

impl Family {
    pub fn point(&self, n: u64) -> (Rational, Rational) {
        let n = BigInt::from(n);
        (
            Rational::new(&n - 1, n.clone()),
            Rational::new(BigInt::from(self.degree), n),
        )
    }

    /// `‖((n−1)/n, i/n)‖ = 1 + (i−1)/n`.
    pub fn norm(&self, n: u64) -> Rational {
        int(1) + Rational::new(BigInt::from(self.degree as i64 - 1), BigInt::from(n))
    }

    /// Largest norm over the remaining members and whether it is attained.
    #[cfg(test)]
    fn sup_norm(&self) -> (Rational, bool) {
        if self.degree == 0 {
            (int(1), false)
        } else {
            (self.norm(self.start), true)
        }
    }

    fn inf_norm(&self) -> (Rational, bool) {
        if self.degree >= 2 {
            (int(1), false)
        } else {
            (self.norm(self.start), true)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenerationLocus {
    pub families: Vec<Family>,
    /// `(1, 0)` is always in the closure; it carries generators of its own
    /// when the space has special orbits.
    pub limit_point: bool,
    pub limit_is_generator: bool,
}

pub fn locus_from_space(space: &SpaceInput) -> GenerationLocus {
    let families = space
        .betti
        .iter()
        .enumerate()
        .filter(|(_, &b)| b > 0)
        .map(|(degree, &multiplicity)| Family { degree, multiplicity, start: 1 })
        .collect();
    GenerationLocus { families, limit_point: true, limit_is_generator: !space.orbits.is_empty() }
}

/// A locus point with its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocusPoint {
    pub x: Rational,
    pub y: Rational,
    pub label: String,
}

impl GenerationLocus {
    /// Members with `n ≤ n_cap` plus the limit point, for display.
    pub fn points_up_to(&self, n_cap: u64) -> Vec<LocusPoint> {
        let mut out = Vec::new();
        for f in &self.families {
            for n in f.start..=n_cap {
                let (x, y) = f.point(n);
                out.push(LocusPoint { x, y, label: format!("main({n},{})", f.degree) });
            }
        }
        if self.limit_point {
            let label = if self.limit_is_generator { "orbit(*)" } else { "limit" };
            out.push(LocusPoint { x: int(1), y: int(0), label: label.into() });
        }
        out
    }

    fn family(&self, degree: usize) -> Option<&Family> {
        self.families.iter().find(|f| f.degree == degree)
    }

    fn remove(&mut self, degree: usize, n: u64) {
        if let Some(f) = self.families.iter_mut().find(|f| f.degree == degree) {
            debug_assert_eq!(f.start, n);
            f.start += 1;
        }
    }
}

/// A norm level and the points attaining it. Family members are listed
/// individually; `infinite_family` marks a whole family at norm 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormLevel {
    pub norm: Rational,
    pub members: Vec<(usize, u64)>,
    pub infinite_family: Option<usize>,
    pub limit_point: bool,
}

/// Levels from the top down to norm 1 inclusive. Below 1 the levels
/// accumulate and are not listed.
pub fn taxicab_extrema(locus: &GenerationLocus) -> Vec<NormLevel> {
    let mut levels: Vec<NormLevel> = Vec::new();
    let mut push = |norm: Rational, member: Option<(usize, u64)>| {
        let idx = match levels.iter().position(|l| l.norm == norm) {
            Some(i) => i,
            None => {
                levels.push(NormLevel { norm, members: vec![], infinite_family: None, limit_point: false });
                levels.len() - 1
            }
        };
        if let Some(m) = member {
            levels[idx].members.push(m);
        }
    };
    for f in &locus.families {
        if f.degree >= 2 {
            // every member lies above norm 1; only the first few levels are
            // ever consulted, so a bounded prefix suffices
            let max_n = f.start + 64 * (f.degree as u64);
            for n in f.start..=max_n {
                push(f.norm(n), Some((f.degree, n)));
            }
        }
    }
    push(int(1), None);
    let one = levels.iter().position(|l| l.norm == int(1)).expect("level one");
    levels[one].limit_point = locus.limit_point;
    if let Some(f) = locus.family(1) {
        levels[one].infinite_family = Some(1);
        levels[one].members.push((1, f.start));
    }
    levels.sort_by(|a, b| b.norm.cmp(&a.norm));
    for l in &mut levels {
        l.members.sort_by(|a, b| {
            let fa = Family { degree: a.0, multiplicity: 0, start: a.1 }.point(a.1);
            let fb = Family { degree: b.0, multiplicity: 0, start: b.1 }.point(b.1);
            (fa.0, a.1, a.0).cmp(&(fb.0, b.1, b.0))
        });
    }
    levels
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Absolute,
    Bounded,
    Truncated,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Absolute => "absolute",
            Self::Bounded => "bounded",
            Self::Truncated => "truncated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Top sweep, ties broken to the left.
    Left,
    /// Top sweep, ties broken to the right.
    Right,
    /// Bottom-corner sweep along `x = 0`.
    Bottom,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Self::Left),
            "right" => Ok(Self::Right),
            "bottom" => Ok(Self::Bottom),
            other => Err(Error::Parse(format!("unknown variant {other:?}"))),
        }
    }
}

/// The line `y = slope·x + intercept`; `locus_below` says which side holds
/// the rest of the locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessLine {
    pub slope: Rational,
    pub intercept: Rational,
    pub locus_below: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityStep {
    pub point: (Rational, Rational),
    /// `(n, i)`: the factor `exp(b_i yⁱ x^{n−1} tⁿ/(w n))`.
    pub factor: (u64, usize),
    pub classification: Classification,
    pub norm: Rational,
    pub epsilon: Option<Rational>,
    pub epsilon_attained: bool,
    pub witness: WitnessLine,
}

impl StabilityStep {
    pub fn factor_label(&self) -> String {
        format!("main({},{})", self.factor.0, self.factor.1)
    }

    /// `(m‖v‖ + j)/ε` for absolute steps.
    pub fn bound(&self, j: u64, m: u64) -> Option<Rational> {
        let eps = self.epsilon.as_ref()?;
        Some((Rational::from_integer(BigInt::from(m)) * &self.norm + Rational::from_integer(BigInt::from(j))) / eps)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let bound = self.epsilon.as_ref().map(|eps| {
            serde_json::json!({
                "m": fmt(&(&self.norm / eps)),
                "j": fmt(&(int(1) / eps)),
            })
        });
        serde_json::json!({
            "point": [fmt(&self.point.0), fmt(&self.point.1)],
            "factor": self.factor_label(),
            "classification": self.classification.as_str(),
            "norm": fmt(&self.norm),
            "epsilon": self.epsilon.as_ref().map(fmt),
            "epsilonAttained": self.epsilon_attained,
            "bound": bound,
            "witness": {
                "slope": fmt(&self.witness.slope),
                "intercept": fmt(&self.witness.intercept),
                "side": if self.witness.locus_below { "below" } else { "above" },
            },
        })
    }
}

/// `L(p) = y − slope·x − intercept`.
fn line_value(line: &WitnessLine, x: &Rational, y: &Rational) -> Rational {
    y - &line.slope * x - &line.intercept
}

/// Checks that every point of the locus except `v₀ = (degree, n)` lies
/// strictly on the required side of the line. `L` is affine in `1/n` along a
/// family, so the first member and the limit point decide.
pub fn separation_holds(locus: &GenerationLocus, chosen: (usize, u64), line: &WitnessLine) -> bool {
    let ok = |v: Rational| if line.locus_below { v.is_negative() } else { v.is_positive() };
    for f in &locus.families {
        let first = if f.degree == chosen.0 { f.start + 1 } else { f.start };
        let (x, y) = f.point(first);
        if !ok(line_value(line, &x, &y)) {
            return false;
        }
    }
    !locus.limit_point || ok(line_value(line, &int(1), &int(0)))
}

fn tilted_line(
    locus: &GenerationLocus,
    chosen: (usize, u64),
    point: &(Rational, Rational),
    steep: bool,
    below: bool,
) -> Result<WitnessLine> {
    for k in 1..=64u32 {
        let delta = Rational::new(BigInt::one(), BigInt::from(2u8).pow(k));
        let slope = match (steep, below) {
            (false, true) => int(-1) + &delta,
            (true, true) => int(-1) - &delta,
            // touching from below: steeper than −1 by a growing margin
            (_, false) => -(Rational::from_integer(BigInt::from(2u8).pow(k))),
        };
        let intercept = &point.1 - &slope * &point.0;
        let line = WitnessLine { slope, intercept, locus_below: below };
        if separation_holds(locus, chosen, &line) {
            return Ok(line);
        }
    }
    Err(Error::Stability("no separating line found".into()))
}

/// Picks the next point and classifies the action of its factor.
pub fn classify_step(locus: &GenerationLocus, variant: Variant) -> Result<StabilityStep> {
    if locus.families.is_empty() {
        return Err(Error::Stability("locus exhausted".into()));
    }
    match variant {
        Variant::Bottom => classify_bottom(locus),
        Variant::Left | Variant::Right => classify_top(locus, variant),
    }
}

fn classify_top(locus: &GenerationLocus, variant: Variant) -> Result<StabilityStep> {
    let levels = taxicab_extrema(locus);
    let top = &levels[0];
    let tie = top.members.len() > 1 || top.infinite_family.is_some() || (top.limit_point && top.norm == int(1));
    let chosen = if !tie {
        top.members[0]
    } else if variant == Variant::Left {
        *top.members.first().ok_or_else(|| {
            Error::Stability("only the limit point attains the maximal norm".into())
        })?
    } else {
        if top.infinite_family.is_some() || top.limit_point {
            return Err(Error::Stability(
                "the maximal norm is attained along a family accumulating at (1,0); \
                 no rightmost generator exists"
                    .into(),
            ));
        }
        *top.members.last().expect("tie has members")
    };
    let fam = locus.family(chosen.0).expect("chosen family");
    let point = fam.point(chosen.1);
    let norm = top.norm.clone();
    if !tie {
        let second = levels.get(1).map(|l| l.norm.clone()).unwrap_or_else(|| int(1));
        let epsilon = &norm - &second;
        let line = WitnessLine {
            slope: int(-1),
            intercept: second.clone(),
            locus_below: true,
        };
        // everything else sits on or below x + y = second
        let relaxed = WitnessLine { intercept: &second + &epsilon / int(2), ..line.clone() };
        if !separation_holds(locus, chosen, &relaxed) {
            return Err(Error::Stability("separation check failed".into()));
        }
        let attained = levels.get(1).is_some_and(|l| !l.members.is_empty() || l.limit_point);
        return Ok(StabilityStep {
            point,
            factor: (chosen.1, chosen.0),
            classification: Classification::Absolute,
            norm,
            epsilon: Some(epsilon),
            epsilon_attained: attained,
            witness: relaxed,
        });
    }
    let steep = variant == Variant::Right;
    let witness = tilted_line(locus, chosen, &point, steep, true)?;
    Ok(StabilityStep {
        point,
        factor: (chosen.1, chosen.0),
        classification: if steep { Classification::Truncated } else { Classification::Bounded },
        norm,
        epsilon: None,
        epsilon_attained: false,
        witness,
    })
}

fn classify_bottom(locus: &GenerationLocus) -> Result<StabilityStep> {
    let f = locus
        .families
        .iter()
        .filter(|f| f.start == 1)
        .min_by_key(|f| f.degree)
        .ok_or_else(|| Error::Stability("no corner left on the y-axis".into()))?;
    let chosen = (f.degree, 1);
    let point = f.point(1);
    let norm = f.norm(1);
    // smallest norm among the remaining points
    let mut others: Vec<(Rational, bool)> = Vec::new();
    for g in &locus.families {
        if g.degree == f.degree {
            others.push(Family { start: 2, ..g.clone() }.inf_norm());
        } else {
            others.push(g.inf_norm());
        }
    }
    if locus.limit_point {
        others.push((int(1), true));
    }
    let (second, attained) = others.iter().min_by(|a, b| a.0.cmp(&b.0)).cloned().expect("nonempty");
    let witness = tilted_line(locus, chosen, &point, true, false)?;
    if norm < second {
        Ok(StabilityStep {
            point,
            factor: (1, f.degree),
            classification: Classification::Absolute,
            epsilon: Some(&second - &norm),
            epsilon_attained: attained,
            norm,
            witness,
        })
    } else {
        Ok(StabilityStep {
            point,
            factor: (1, f.degree),
            classification: Classification::Bounded,
            norm,
            epsilon: None,
            epsilon_attained: false,
            witness,
        })
    }
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub space: String,
    pub variant: Variant,
    pub steps: Vec<StabilityStep>,
    pub homology_level: bool,
}

impl StabilityReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "space": self.space,
            "variant": match self.variant { Variant::Left => "left", Variant::Right => "right", Variant::Bottom => "bottom" },
            "validity": if self.homology_level { "homology-level" } else { "E1-only" },
            "steps": self.steps.iter().map(StabilityStep::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn iterate_report(space: &SpaceInput, variant: Variant, steps: usize) -> Result<StabilityReport> {
    if steps == 0 {
        return Err(Error::Stability("at least one step is required".into()));
    }
    let mut locus = locus_from_space(space);
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let step = classify_step(&locus, variant)?;
        locus.remove(step.factor.1, step.factor.0);
        out.push(step);
    }
    Ok(StabilityReport { space: space.name.clone(), variant, steps: out, homology_level: space.i_acyclic })
}

/// `b_i yⁱ x^{n−1} tⁿ / (w n)`: the exponent of one free factor.
pub fn factor_argument(space: &SpaceInput, factor: (u64, usize), order: usize) -> WeightedSeries {
    let (n, i) = factor;
    let w = space.weight();
    let b = space.betti.get(i).copied().unwrap_or(0);
    WeightedSeries::monomial(
        w,
        order,
        n as usize,
        n as usize - 1,
        i,
        Rational::new(BigInt::from(b), BigInt::from(w) * BigInt::from(n)),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundWitness {
    pub holds: bool,
    pub bound: Rational,
    /// Largest size with a nonzero entry on the tested diagonal.
    pub last_nonzero: Option<usize>,
    pub violations: Vec<(usize, usize, usize)>,
}

/// Divides E¹ by the factors of `steps[..=upto]` and checks that on the
/// diagonal `p + q = ‖v‖(k − m) − j` nothing survives past the bound.
pub fn verify_generator_bound(
    space: &SpaceInput,
    report: &StabilityReport,
    upto: usize,
    j: u64,
    m: u64,
    order: usize,
) -> Result<BoundWitness> {
    let step = report
        .steps
        .get(upto)
        .ok_or_else(|| Error::Stability(format!("report has no step {upto}")))?;
    let bound = step
        .bound(j, m)
        .ok_or_else(|| Error::Stability("only absolute steps carry a generator bound".into()))?;
    let mut quotient = e1_series(space, order)?;
    for s in &report.steps[..=upto] {
        quotient = quotient.mul(&factor_argument(space, s.factor, order).neg().exp()?)?;
    }
    let mut witness = BoundWitness { holds: true, bound: bound.clone(), last_nonzero: None, violations: vec![] };
    for k in 0..=order {
        let row = quotient.dimension_row(k)?;
        let target = &step.norm * Rational::from_integer(BigInt::from(k as i64 - m as i64))
            - Rational::from_integer(BigInt::from(j));
        if !target.is_integer() || target.is_negative() {
            continue;
        }
        let diag = target.to_integer();
        let hits: Vec<(usize, usize)> = row
            .iter()
            .filter(|(&(p, q), &d)| d > 0 && BigInt::from(p + q) == diag)
            .map(|(&k, _)| k)
            .collect();
        if hits.is_empty() {
            continue;
        }
        witness.last_nonzero = Some(k);
        if Rational::from_integer(BigInt::from(k)) > bound {
            witness.holds = false;
            witness.violations.extend(hits.into_iter().map(|(p, q)| (k, p, q)));
        }
    }
    Ok(witness)
}

/// `E¹ · ∏ exp(−arg)` over every main factor and `/ orbit factors`; the
/// result is 1 exactly when the factorization is complete.
pub fn divide_all_factors(space: &SpaceInput, order: usize) -> Result<WeightedSeries> {
    let mut q = e1_series(space, order)?;
    for f in crate::series::e1_factors(space, order)? {
        q = q.mul(&f.reciprocal()?)?;
    }
    Ok(q)
}
