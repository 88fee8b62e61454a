//! Brute-force ground truth on tiny rings: exhaustive enumeration of
//! symmetric invertible matrices and BFS computation of their congruence
//! orbits, independent of the reduction pipeline.
//!
//! Orbits are computed under the elementary congruence generators —
//! row/column scalings by each unit, transpositions, and transvections
//! adding one row/column into another. Over a local ring these generate
//! the full group of invertible matrices (unit-pivot elimination), so the
//! generator orbits are exactly the congruence classes.
//!
//! States are encoded as mixed-radix keys over the upper triangle, which
//! keeps the visited set compact and makes orbit representatives (smallest
//! key) canonical.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::localring::{unit_indices_owned, RingContext, RingElement};
use crate::matrix::Matrix;
use crate::reduction::{classify, realizable_forms, reduce, standard_matrix, StandardForm};

/// Default cap on `|R|^(n(n+1)/2)`, the number of symmetric matrix states.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: Option<String>,
}

impl CheckResult {
    fn ok(name: &'static str) -> Self {
        CheckResult {
            name,
            pass: true,
            detail: None,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        CheckResult {
            name,
            pass: false,
            detail: Some(detail),
        }
    }
}

/// One congruence orbit: its size, canonical representative (the member
/// with the smallest state key), determinant square class, and which
/// standard matrix lies inside, if any.
#[derive(Debug, Clone)]
pub struct OrbitSummary {
    pub size: u64,
    pub representative: Matrix,
    pub det_is_square: bool,
    pub canonical_form: Option<StandardForm>,
}

/// Result of an orbit computation or verification run.
#[derive(Debug, Clone)]
pub struct OrbitReport {
    pub ring: String,
    pub n: usize,
    pub total_symmetric_invertible: u64,
    pub orbit_count: usize,
    pub orbits: Vec<OrbitSummary>,
    pub checks: Vec<CheckResult>,
}

impl OrbitReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Upper-triangle cells in row-major order; the state key is the
/// mixed-radix number over element indices, first cell most significant.
fn cells(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push((i, j));
        }
    }
    out
}

fn state_count(ctx: &Arc<RingContext>, n: usize, budget: u128) -> Result<u128> {
    let t = (n * (n + 1) / 2) as u32;
    let mut states = 1u128;
    for _ in 0..t {
        states = states.checked_mul(ctx.card()).ok_or(Error::BudgetExceeded {
            states: u128::MAX,
            budget,
        })?;
    }
    if states > budget {
        return Err(Error::BudgetExceeded { states, budget });
    }
    Ok(states)
}

fn encode(m: &Matrix, cell_list: &[(usize, usize)]) -> u128 {
    let card = m.ring().card();
    cell_list
        .iter()
        .fold(0u128, |acc, &(i, j)| acc * card + m.get(i, j).index())
}

fn decode(ctx: &Arc<RingContext>, n: usize, cell_list: &[(usize, usize)], mut key: u128) -> Matrix {
    let card = ctx.card();
    let mut m = Matrix::zeros(ctx, n, n);
    for &(i, j) in cell_list.iter().rev() {
        let e = RingElement::from_index(ctx, key % card);
        key /= card;
        if i != j {
            m.set(j, i, e.clone());
        }
        m.set(i, j, e);
    }
    m
}

/// Every symmetric matrix with unit determinant, exactly once, in state-key
/// order. Errors when the state count exceeds the budget.
pub fn enumerate_symmetric_invertible(
    ctx: &Arc<RingContext>,
    n: usize,
    budget: u128,
) -> Result<impl Iterator<Item = Matrix>> {
    let states = state_count(ctx, n, budget)?;
    let cell_list = cells(n);
    let ctx = Arc::clone(ctx);
    Ok((0..states).filter_map(move |key| {
        let m = decode(&ctx, n, &cell_list, key);
        m.is_invertible().then_some(m)
    }))
}

/// The congruence generators, applied in place.
enum Gen {
    Swap(usize, usize),
    AddInto(usize, usize),
    Scale(usize, RingElement),
}

impl Gen {
    fn apply(&self, m: &mut Matrix, one: &RingElement) {
        match self {
            Gen::Swap(i, j) => m.sym_swap(*i, *j),
            Gen::AddInto(i, j) => m.sym_add(*i, *j, one),
            Gen::Scale(i, u) => m.sym_scale(*i, u),
        }
    }
}

fn generator_list(ctx: &Arc<RingContext>, n: usize) -> Vec<Gen> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i < j {
                gens.push(Gen::Swap(i, j));
            }
            if i != j {
                gens.push(Gen::AddInto(i, j));
            }
        }
    }
    // scalings by every unit except 1; products of generators recover the rest
    for idx in unit_indices_owned(ctx) {
        let u = RingElement::from_index(ctx, idx);
        if u.is_one() {
            continue;
        }
        for i in 0..n {
            gens.push(Gen::Scale(i, u.clone()));
        }
    }
    gens
}

struct OrbitPartition {
    /// state key -> orbit id
    membership: HashMap<u128, u32>,
    /// per orbit: (size, smallest key)
    orbits: Vec<(u64, u128)>,
    total: u64,
}

fn compute_partition(ctx: &Arc<RingContext>, n: usize, budget: u128) -> Result<OrbitPartition> {
    let states = state_count(ctx, n, budget)?;
    let cell_list = cells(n);
    let gens = generator_list(ctx, n);
    let one = RingElement::one(ctx);

    let mut membership: HashMap<u128, u32> = HashMap::new();
    let mut orbits: Vec<(u64, u128)> = Vec::new();
    let mut total = 0u64;

    for start in 0..states {
        if membership.contains_key(&start) {
            continue;
        }
        let seed = decode(ctx, n, &cell_list, start);
        if !seed.is_invertible() {
            continue;
        }
        let orbit_id = orbits.len() as u32;
        let mut size = 0u64;
        let mut frontier = vec![seed];
        membership.insert(start, orbit_id);
        size += 1;
        while let Some(mat) = frontier.pop() {
            for g in &gens {
                let mut next = mat.clone();
                g.apply(&mut next, &one);
                let key = encode(&next, &cell_list);
                if let std::collections::hash_map::Entry::Vacant(e) = membership.entry(key) {
                    e.insert(orbit_id);
                    size += 1;
                    frontier.push(next);
                }
            }
        }
        // `start` is the smallest key in its orbit: every smaller key was
        // already claimed by an earlier orbit or is not invertible
        orbits.push((size, start));
        total += size;
    }
    Ok(OrbitPartition {
        membership,
        orbits,
        total,
    })
}

fn summarize(
    ctx: &Arc<RingContext>,
    n: usize,
    part: &OrbitPartition,
) -> Result<(Vec<OrbitSummary>, Vec<CheckResult>)> {
    let cell_list = cells(n);
    let mut checks = Vec::new();

    let mut summaries: Vec<OrbitSummary> = part
        .orbits
        .iter()
        .map(|&(size, min_key)| {
            let rep = decode(ctx, n, &cell_list, min_key);
            let det_is_square = rep
                .det()
                .and_then(|d| d.is_square_unit())
                .expect("orbit members are symmetric invertible");
            OrbitSummary {
                size,
                representative: rep,
                det_is_square,
                canonical_form: None,
            }
        })
        .collect();

    // locate the two standard matrices
    for form in realizable_forms(ctx, n) {
        let key = encode(&standard_matrix(&form), &cell_list);
        match part.membership.get(&key) {
            Some(&id) => {
                let slot = &mut summaries[id as usize].canonical_form;
                if slot.is_some() {
                    checks.push(CheckResult::fail(
                        "each_orbit_contains_one_canonical",
                        format!("two standard matrices share orbit {id}"),
                    ));
                } else {
                    *slot = Some(form);
                }
            }
            None => {
                checks.push(CheckResult::fail(
                    "each_orbit_contains_one_canonical",
                    format!("standard matrix {form:?} not found among enumerated states"),
                ));
            }
        }
    }
    if summaries.iter().all(|s| s.canonical_form.is_some())
        && !checks.iter().any(|c| c.name == "each_orbit_contains_one_canonical")
    {
        checks.push(CheckResult::ok("each_orbit_contains_one_canonical"));
    }

    Ok((summaries, checks))
}

/// Partition all symmetric invertible matrices into congruence orbits.
pub fn congruence_orbits(ctx: &Arc<RingContext>, n: usize, budget: u128) -> Result<OrbitReport> {
    let part = compute_partition(ctx, n, budget)?;
    let (orbits, mut checks) = summarize(ctx, n, &part)?;
    let sizes_sum: u64 = orbits.iter().map(|o| o.size).sum();
    checks.push(if sizes_sum == part.total {
        CheckResult::ok("orbit_sizes_sum_to_total")
    } else {
        CheckResult::fail(
            "orbit_sizes_sum_to_total",
            format!("{sizes_sum} != {}", part.total),
        )
    });
    Ok(OrbitReport {
        ring: ctx.spec_string().to_string(),
        n,
        total_symmetric_invertible: part.total,
        orbit_count: orbits.len(),
        orbits,
        checks,
    })
}

/// Full verification: exactly two orbits; each contains exactly one of the
/// two standard matrices; `classify` is constant on each orbit and names
/// the standard matrix found there; `reduce` produces exact witnesses onto
/// it (sampled when the orbit is large); determinant square class is
/// constant per orbit and separates the two.
pub fn verify_classification(
    ctx: &Arc<RingContext>,
    n: usize,
    budget: u128,
) -> Result<OrbitReport> {
    let part = compute_partition(ctx, n, budget)?;
    let (orbits, mut checks) = summarize(ctx, n, &part)?;
    let cell_list = cells(n);

    checks.push(if orbits.len() == 2 {
        CheckResult::ok("orbit_count_is_two")
    } else {
        CheckResult::fail("orbit_count_is_two", format!("found {} orbits", orbits.len()))
    });

    let sizes_sum: u64 = orbits.iter().map(|o| o.size).sum();
    checks.push(if sizes_sum == part.total {
        CheckResult::ok("orbit_sizes_sum_to_total")
    } else {
        CheckResult::fail(
            "orbit_sizes_sum_to_total",
            format!("{sizes_sum} != {}", part.total),
        )
    });

    // one full sweep: classify everything, compare against the orbit's
    // canonical form and determinant class; reduce on a sampled subset
    let mut classify_fail: Option<String> = None;
    let mut det_fail: Option<String> = None;
    let mut reduce_fail: Option<String> = None;
    let mut seen = vec![0u64; orbits.len()];
    let sample_stride: Vec<u64> = orbits.iter().map(|o| (o.size / 50).max(1)).collect();
    let states = state_count(ctx, n, budget)?;
    for key in 0..states {
        let Some(&id) = part.membership.get(&key) else {
            continue;
        };
        let id = id as usize;
        let m = decode(ctx, n, &cell_list, key);
        let summary = &orbits[id];

        if det_fail.is_none() {
            let det_sq = m.det()?.is_square_unit()?;
            if det_sq != summary.det_is_square {
                det_fail = Some(format!("det class varies inside orbit {id}: key {key}"));
            }
        }
        if classify_fail.is_none() {
            let got = classify(&m)?;
            match &summary.canonical_form {
                Some(expect) if &got == expect => {}
                Some(expect) => {
                    classify_fail = Some(format!(
                        "classify mismatch in orbit {id} at key {key}: got {got:?}, orbit holds {expect:?}"
                    ));
                }
                None => {
                    classify_fail =
                        Some(format!("orbit {id} has no canonical matrix to compare against"));
                }
            }
        }
        if reduce_fail.is_none() && seen[id] % sample_stride[id] == 0 {
            let w = reduce(&m)?;
            if !w.verify(&m) {
                reduce_fail = Some(format!("witness failed re-multiplication at key {key}"));
            } else if Some(w.form()) != summary.canonical_form.as_ref() {
                reduce_fail = Some(format!(
                    "reduce landed on {:?} but orbit {id} holds {:?}",
                    w.form(),
                    summary.canonical_form
                ));
            }
        }
        seen[id] += 1;
    }
    checks.push(match det_fail {
        None => CheckResult::ok("det_square_class_constant_per_orbit"),
        Some(d) => CheckResult::fail("det_square_class_constant_per_orbit", d),
    });
    if orbits.len() == 2 && orbits[0].det_is_square == orbits[1].det_is_square {
        checks.push(CheckResult::fail(
            "det_square_class_separates_orbits",
            "both orbits have the same determinant class".to_string(),
        ));
    } else {
        checks.push(CheckResult::ok("det_square_class_separates_orbits"));
    }
    checks.push(match classify_fail {
        None => CheckResult::ok("classify_constant_and_matches_canonical"),
        Some(d) => CheckResult::fail("classify_constant_and_matches_canonical", d),
    });
    checks.push(match reduce_fail {
        None => CheckResult::ok("reduce_witnesses_land_in_orbit"),
        Some(d) => CheckResult::fail("reduce_witnesses_land_in_orbit", d),
    });

    Ok(OrbitReport {
        ring: ctx.spec_string().to_string(),
        n,
        total_symmetric_invertible: part.total,
        orbit_count: orbits.len(),
        orbits,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::canonical_nonsquare;
    use crate::reduction::DeltaKind;

    fn ctx(spec: &str) -> Arc<RingContext> {
        RingContext::from_spec(spec).unwrap()
    }

    #[test]
    fn enumerate_rank_one_z3() {
        let z3 = ctx("zmod:3");
        let got: Vec<u128> = enumerate_symmetric_invertible(&z3, 1, DEFAULT_BUDGET)
            .unwrap()
            .map(|m| m.get(0, 0).index())
            .collect();
        assert_eq!(got, vec![1, 2]);
    }

    #[test]
    fn enumerate_counts_z3_n2() {
        // hand count: 27 symmetric 2x2 over Z_3, 9 singular, 18 invertible
        let z3 = ctx("zmod:3");
        let n = enumerate_symmetric_invertible(&z3, 2, DEFAULT_BUDGET)
            .unwrap()
            .count();
        assert_eq!(n, 18);
    }

    #[test]
    fn enumerate_contains_spot_member() {
        let z9 = ctx("zmod:3^2");
        let target = Matrix::from_fn(&z9, 2, 2, |i, j| {
            RingElement::from_int(&z9, [[1, 3], [3, 2]][i][j])
        });
        assert!(enumerate_symmetric_invertible(&z9, 2, DEFAULT_BUDGET)
            .unwrap()
            .any(|m| m == target));
    }

    #[test]
    fn budget_is_enforced() {
        let z3 = ctx("zmod:3");
        match enumerate_symmetric_invertible(&z3, 9, DEFAULT_BUDGET) {
            Err(Error::BudgetExceeded { .. }) => {}
            _ => panic!("expected budget error"),
        }
        assert!(congruence_orbits(&z3, 9, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn orbits_z3_n2() {
        let z3 = ctx("zmod:3");
        let report = congruence_orbits(&z3, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.orbit_count, 2);
        assert_eq!(report.total_symmetric_invertible, 18);
        // det class 1 (square): 6 matrices; det class 2: 12 (hand count)
        let mut sizes: Vec<(bool, u64)> = report
            .orbits
            .iter()
            .map(|o| (o.det_is_square, o.size))
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![(false, 12), (true, 6)]);
        assert!(report.pass(), "{:?}", report.checks);
    }

    #[test]
    fn orbits_z5_n2() {
        let z5 = ctx("zmod:5");
        let report = congruence_orbits(&z5, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.orbit_count, 2);
        assert_eq!(report.total_symmetric_invertible, 100);
        // hand count per determinant d of [[a,b],[b,c]]: 30 each for d in
        // {1,4} (squares), 20 each for d in {2,3}
        let mut sizes: Vec<(bool, u64)> = report
            .orbits
            .iter()
            .map(|o| (o.det_is_square, o.size))
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![(false, 40), (true, 60)]);
        // I_2 and diag(1, 2) lie in different orbits
        let i2 = Matrix::identity(&z5, 2);
        let d12 = Matrix::diagonal(
            &z5,
            &[RingElement::one(&z5), canonical_nonsquare(&z5)],
        );
        let cl = cells(2);
        let part = compute_partition(&z5, 2, DEFAULT_BUDGET).unwrap();
        assert_ne!(
            part.membership[&encode(&i2, &cl)],
            part.membership[&encode(&d12, &cl)]
        );
    }

    #[test]
    fn verify_z3_n2_all_checks_pass() {
        let z3 = ctx("zmod:3");
        let report = verify_classification(&z3, 2, DEFAULT_BUDGET).unwrap();
        assert!(report.pass(), "{:?}", report.checks);
        assert_eq!(report.orbit_count, 2);
        // the identity-determinant orbit holds diag(1, -z) = I_2 over Z_3
        let sq_orbit = report.orbits.iter().find(|o| o.det_is_square).unwrap();
        assert_eq!(
            sq_orbit.canonical_form.as_ref().map(|f| f.delta_kind()),
            Some(DeltaKind::DiagOneNegZ)
        );
    }

    #[test]
    fn verify_trunc_field_like() {
        let t = ctx("trunc:3:1:2");
        let report = verify_classification(&t, 2, DEFAULT_BUDGET).unwrap();
        assert!(report.pass(), "{:?}", report.checks);
    }

    #[test]
    fn key_roundtrip() {
        let z9 = ctx("zmod:3^2");
        let cl = cells(3);
        for key in [0u128, 1, 17, 728, 9u128.pow(6) - 1] {
            let m = decode(&z9, 3, &cl, key);
            assert!(m.is_symmetric());
            assert_eq!(encode(&m, &cl), key);
        }
    }
}
