//! Acceptance criteria. Each prints one PASS/FAIL line; the test fails if
//! any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use ocs::dowling::{
    build_poset, count_elements_species, enumerate_elements, factor_interval, orbit_homology_dims,
    whitney_factorization_check, DowlingSpec, DEFAULT_CAP,
};
use ocs::group::{GSetSpec, GroupTable};
use ocs::homology::{reduced_euler_characteristic, reduced_homology, signless_whitney_numbers, whitney_homology};
use ocs::io::bundled;
use ocs::poset::Poset;
use ocs::rational::{int, rat, Rational};
use ocs::series::{bm_betti, euler_series, SpaceInput};
use ocs::stability::{divide_all_factors, iterate_report, verify_generator_bound, Classification, Variant};
use ocs::symm::{stable_multiplicity_check, whitney_character, Partition};
use ocs::Error;

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn space(name: &str) -> SpaceInput {
    bundled(name).unwrap().space(name).unwrap()
}

fn affine(d: usize) -> SpaceInput {
    let mut b = vec![0; d + 1];
    b[d] = 1;
    SpaceInput::new(format!("R^{d}"), b, GroupTable::trivial(), vec![], true).unwrap()
}

/// Polynomial product `∏ (1 + cᵢ z^e)` as a coefficient vector.
fn product_poly(factors: impl IntoIterator<Item = i64>, e: usize) -> Vec<i64> {
    let mut p = vec![1i64];
    for c in factors {
        let mut next = vec![0; p.len() + e];
        for (k, &a) in p.iter().enumerate() {
            next[k] += a;
            next[k + e] += a * c;
        }
        p = next;
    }
    while p.len() > 1 && p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Every `G`-set with at most two points for `G ∈ {1, Z₂, Z₃}`, with every
/// invariant `T`.
fn small_gsets() -> Vec<(String, GSetSpec)> {
    let mut out = Vec::new();
    for k in 1..=3usize {
        let g = GroupTable::cyclic(k).unwrap();
        let mut actions: Vec<(usize, Vec<Vec<usize>>)> = vec![(0, vec![vec![]; k])];
        actions.push((1, vec![vec![0]; k]));
        actions.push((2, vec![vec![0, 1]; k]));
        if k == 2 {
            actions.push((2, vec![vec![0, 1], vec![1, 0]]));
        }
        for (size, action) in actions {
            let swap = size == 2 && action[k - 1] == vec![1, 0];
            for mask in 0..(1u32 << size) {
                let t: Vec<usize> = (0..size).filter(|&i| mask >> i & 1 == 1).collect();
                if swap && t.len() == 1 {
                    continue;
                }
                let label = format!("Z{k} |S|={size}{} T={t:?}", if swap { " swap" } else { "" });
                out.push((label, GSetSpec::new(g.clone(), action.clone(), &t).unwrap()));
            }
        }
    }
    out
}

fn dowling_gset_specs() -> Vec<(&'static str, GSetSpec)> {
    ["dowling_b", "typeB", "typeC", "typeD", "typeC_gset", "dowling_mu3", "punctured_plane"]
        .into_iter()
        .map(|n| (n, bundled(n).unwrap().gset().unwrap()))
        .collect()
}

fn c1_euler_closed_form() -> Result<(), String> {
    let mut cases = vec![space("rp2free")];
    cases.extend((1..=3).map(affine));
    for s in cases {
        let got = euler_series(&s, 8).map_err(|e| e.to_string())?;
        let chi = s.euler_characteristic();
        let w = s.weight() as i64;
        for (n, v) in got.iter().enumerate() {
            let expect: BigInt = (0..n as i64).map(|i| BigInt::from(chi - i * w)).product();
            ensure(*v == expect, || format!("{} n={n}: {v} vs {expect}", s.name))?;
        }
    }
    Ok(())
}

fn c2_type_a_betti() -> Result<(), String> {
    for (d, e) in [(2usize, 1usize), (3, 2)] {
        let s = affine(d);
        for n in 1..=6usize {
            let bm = bm_betti(&s, n).map_err(|e| e.to_string())?;
            let poly = product_poly((1..n as i64).collect::<Vec<_>>(), e);
            // H^k ≅ H^BM_{dn−k}
            let mut dual = vec![0i64; poly.len()];
            for (&deg, &r) in &bm {
                let k = d * n - deg;
                ensure(k < dual.len(), || format!("d={d} n={n}: unexpected BM degree {deg}"))?;
                dual[k] = r as i64;
            }
            ensure(dual == poly, || format!("d={d} n={n}: {dual:?} vs {poly:?}"))?;
            let whitney = signless_whitney_numbers(&Poset::partition_lattice(n)).map_err(|e| e.to_string())?;
            let spread: Vec<i64> = (0..poly.len()).map(|k| if k % e == 0 { whitney[k / e] as i64 } else { 0 }).collect();
            ensure(spread == poly, || format!("Whitney numbers of Q_{n}: {whitney:?}"))?;
        }
    }
    Ok(())
}

fn c3_line_cells() -> Result<(), String> {
    let s = space("line");
    for n in 1..=7usize {
        let bm = bm_betti(&s, n).map_err(|e| e.to_string())?;
        let fact: u64 = (1..=n as u64).product();
        let expect = BTreeMap::from([(n, fact)]);
        ensure(bm == expect, || format!("n={n}: {bm:?}"))?;
    }
    Ok(())
}

fn c4_enumeration_vs_species() -> Result<(), String> {
    for (label, gset) in small_gsets() {
        for n in 0..=5 {
            let spec = DowlingSpec::new(gset.clone(), n).unwrap();
            let counted = enumerate_elements(&spec, DEFAULT_CAP).map_err(|e| format!("{label} n={n}: {e}"))?.len();
            let species = count_elements_species(&spec).map_err(|e| e.to_string())?;
            ensure(species == BigInt::from(counted), || format!("{label} n={n}: {counted} vs {species}"))?;
        }
    }
    Ok(())
}

fn c5_interval_factorization() -> Result<(), String> {
    for (label, gset) in small_gsets() {
        if gset.group().order() > 2 {
            continue;
        }
        for n in 1..=4 {
            let spec = DowlingSpec::new(gset.clone(), n).unwrap();
            let dp = build_poset(&spec, DEFAULT_CAP).map_err(|e| e.to_string())?;
            for (i, e) in dp.elements.iter().enumerate() {
                let factors = factor_interval(&spec, e).map_err(|e| e.to_string())?;
                let posets = factors
                    .iter()
                    .map(|f| f.poset(spec.group(), DEFAULT_CAP))
                    .collect::<Result<Vec<_>, Error>>()
                    .map_err(|e| e.to_string())?;
                let product = Poset::product_all(posets.iter());
                let lower = dp.poset.lower_interval(i);
                ensure(lower.is_isomorphic(&product).is_some(), || format!("{label} n={n} at {e}"))?;
            }
        }
    }
    Ok(())
}

fn c6_whitney_factorization() -> Result<(), String> {
    for name in ["typeB", "typeC", "typeD"] {
        let gset = bundled(name).unwrap().gset().unwrap();
        for n in 1..=4 {
            let spec = DowlingSpec::new(gset.clone(), n).unwrap();
            let c = whitney_factorization_check(&spec, DEFAULT_CAP).map_err(|e| e.to_string())?;
            ensure(c.matches(), || format!("{name} n={n}: {:?} vs {:?}", c.enumerated, c.species))?;
            let w = whitney_homology(&build_poset(&spec, DEFAULT_CAP).unwrap().poset).map_err(|e| e.to_string())?;
            ensure(w.is_diagonal(), || format!("{name} n={n}: Whitney homology off the diagonal"))?;
        }
    }
    Ok(())
}

fn c7_type_b_poincare() -> Result<(), String> {
    for n in 1..=4usize {
        let dp = build_poset(&DowlingSpec::lattice(GroupTable::cyclic(2).unwrap(), n), DEFAULT_CAP)
            .map_err(|e| e.to_string())?;
        let expect = product_poly((1..=n as i64).map(|i| 2 * i - 1), 1);
        let mobius: Vec<i64> = signless_whitney_numbers(&dp.poset).unwrap().into_iter().map(|v| v as i64).collect();
        ensure(mobius == expect, || format!("n={n}: {mobius:?} vs {expect:?}"))?;
        let wh: Vec<i64> = whitney_homology(&dp.poset).unwrap().poincare_polynomial().into_iter().map(|v| v as i64).collect();
        ensure(wh == expect, || format!("n={n}: Whitney homology {wh:?}"))?;
    }
    Ok(())
}

fn hall_on_every_interval(p: &Poset, label: &str) -> Result<(), String> {
    let bottom = p.bottom().ok_or_else(|| format!("{label}: no bottom"))?;
    for x in 0..p.len() {
        if x == bottom {
            continue;
        }
        let proper = p.lower_interval(x).proper_part().map_err(|e| e.to_string())?;
        let mu = p.mobius(bottom, x).map_err(|e| e.to_string())?;
        let h = reduced_homology(&proper).map_err(|e| e.to_string())?;
        ensure(h.euler_characteristic() == mu, || format!("{label}: homology Euler characteristic {} vs μ {mu}", h.euler_characteristic()))?;
        ensure(reduced_euler_characteristic(&proper) == mu, || format!("{label}: chain count vs μ"))?;
    }
    Ok(())
}

fn c8_philip_hall() -> Result<(), String> {
    // Hall's theorem needs 0̂ < 1̂
    for n in 2..=5 {
        let q = Poset::partition_lattice(n);
        let (b, t) = (q.bottom().unwrap(), q.top().unwrap());
        let mu = q.mobius(b, t).unwrap();
        let h = reduced_homology(&q.proper_part().unwrap()).unwrap();
        let top = n as i64 - 3;
        ensure(h.0 == BTreeMap::from([(top, mu.unsigned_abs() as usize)]), || format!("Q_{n}: {:?}, μ={mu}", h.0))?;
        ensure(h.euler_characteristic() == mu, || format!("Q_{n}: Euler characteristic"))?;
    }
    for (name, gset) in dowling_gset_specs() {
        for n in 1..=4 {
            let dp = build_poset(&DowlingSpec::new(gset.clone(), n).unwrap(), DEFAULT_CAP).map_err(|e| e.to_string())?;
            hall_on_every_interval(&dp.poset, &format!("{name} n={n}"))?;
        }
    }
    Ok(())
}

fn step_summary(report: &ocs::stability::StabilityReport) -> Vec<String> {
    const ORDINAL: [&str; 5] = ["primary", "secondary", "tertiary", "quaternary", "quinary"];
    report
        .steps
        .iter()
        .enumerate()
        .map(|(k, s)| match s.classification {
            Classification::Absolute => {
                let coeff = s.bound(1, 0).unwrap();
                let c = if coeff == int(1) { String::new() } else { ocs::rational::fmt(&coeff) };
                format!("{} absolute <={c}j", ORDINAL[k])
            }
            other => format!("{} {}", ORDINAL[k], other.as_str()),
        })
        .collect()
}

fn c9_stability_table() -> Result<(), String> {
    let expected: [(usize, &[&str]); 5] = [
        (1, &["primary bounded"]),
        (2, &["primary absolute <=2j"]),
        (3, &["primary absolute <=j", "secondary bounded"]),
        (4, &["primary absolute <=j", "secondary absolute <=2j"]),
        (5, &["primary absolute <=j", "secondary absolute <=j", "tertiary bounded"]),
    ];
    for (d, lines) in expected {
        let s = SpaceInput::new(format!("X{d}"), vec![1; d + 1], GroupTable::trivial(), vec![], true).unwrap();
        let report = iterate_report(&s, Variant::Left, lines.len()).map_err(|e| e.to_string())?;
        let got = step_summary(&report);
        ensure(got == lines, || format!("d={d}: {got:?}"))?;
        for (k, step) in report.steps.iter().enumerate() {
            // the k-th step stabilizes by H^BM_{d−k}
            ensure(step.factor == (1, d - k), || format!("d={d} step {k}: factor {:?}", step.factor))?;
        }
    }
    let eps = iterate_report(&affine(2), Variant::Left, 1).unwrap().steps[0].epsilon.clone();
    ensure(eps == Some(rat(1, 2)), || format!("R^2 epsilon {eps:?}"))
}

fn c10_series_division() -> Result<(), String> {
    for d in [2usize, 3] {
        let s = affine(d);
        let report = iterate_report(&s, Variant::Left, 1).map_err(|e| e.to_string())?;
        for j in 0..=3 {
            for m in 0..=2 {
                let w = verify_generator_bound(&s, &report, 0, j, m, 8).map_err(|e| e.to_string())?;
                ensure(w.holds, || format!("d={d} j={j} m={m}: {:?}", w.violations))?;
            }
        }
        let q = divide_all_factors(&s, 8).map_err(|e| e.to_string())?;
        ensure(q.is_one(), || format!("d={d}: quotient is not 1"))?;
    }
    Ok(())
}

fn c11_multiplicity_stability() -> Result<(), String> {
    let seq = (4..=6)
        .map(|n| {
            let dp = build_poset(&DowlingSpec::partition(n), DEFAULT_CAP).unwrap();
            whitney_character(&dp, 1).map(|c| (n, c))
        })
        .collect::<Result<Vec<_>, Error>>()
        .map_err(|e| e.to_string())?;
    let report = stable_multiplicity_check(&seq, Some(Rational::from_integer(2.into()))).map_err(|e| e.to_string())?;
    let p = |v: &[usize]| Partition::new(v.to_vec()).unwrap();
    let expect = BTreeMap::from([(Partition::empty(), 1), (p(&[1]), 1), (p(&[2]), 1)]);
    ensure(report.stable && report.bound_ok, || format!("{:?}", report.to_json()))?;
    ensure(report.names.iter().all(|(_, d)| *d == expect), || format!("{:?}", report.names))
}

fn c12_negative_controls() -> Result<(), String> {
    let d = bundled("typeD").unwrap().gset().unwrap();
    let b = bundled("typeB").unwrap().gset().unwrap();
    for n in 1..=4 {
        let de = enumerate_elements(&DowlingSpec::new(d.clone(), n).unwrap(), DEFAULT_CAP).unwrap();
        ensure(de.iter().all(|e| e.zero_block().len() != 1), || format!("type D n={n} has a singleton zero block"))?;
        let be = enumerate_elements(&DowlingSpec::new(b.clone(), n).unwrap(), DEFAULT_CAP).unwrap();
        let singles: Vec<usize> =
            be.iter().filter(|e| e.zero_block().len() == 1).map(|e| e.zero_block()[0].1).collect();
        ensure(!singles.is_empty() && singles.iter().all(|&s| b.in_t(s)), || format!("type B n={n}: {singles:?}"))?;
    }
    let z2 = GroupTable::cyclic(2).unwrap();
    let excluded = orbit_homology_dims(&z2, false, 3).unwrap();
    ensure(excluded[1] == 0, || format!("h_1 with s outside T: {excluded:?}"))?;
    match bm_betti(&space("sphere"), 3) {
        Err(Error::Refused(_)) => Ok(()),
        other => Err(format!("non-i-acyclic request was not refused: {other:?}")),
    }
}

fn main() {
    let criteria: [(&str, Check); 12] = [
        ("Euler characteristic closed form", c1_euler_closed_form),
        ("type A Betti numbers", c2_type_a_betti),
        ("Conf(R) cell count", c3_line_cells),
        ("Dowling enumeration vs species", c4_enumeration_vs_species),
        ("interval factorization", c5_interval_factorization),
        ("Whitney homology factorization", c6_whitney_factorization),
        ("type B Poincare polynomial", c7_type_b_poincare),
        ("homology/Mobius consistency", c8_philip_hall),
        ("stability classification table", c9_stability_table),
        ("generator bounds by series division", c10_series_division),
        ("multiplicity stability", c11_multiplicity_stability),
        ("negative controls", c12_negative_controls),
    ];
    let mut failures = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
                failures.push(i + 1);
            }
        }
    }
    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
