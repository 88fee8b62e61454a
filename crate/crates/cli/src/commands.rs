//! Command implementations behind the CLI front end, separated from
//! argument parsing and file IO so they can be exercised directly.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use cogredient::localring::{canonical_nonsquare, units};
use cogredient::matrix::random_symmetric_invertible;
use cogredient::oracle::{verify_classification, DEFAULT_BUDGET};
use cogredient::reduction::{classify, hyperbolic_witness, z_scaling_block, reduce};
use cogredient::{Error, Matrix, RingContext, RingElement};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::docs::{
    matrix_entries, FormDocument, MatrixDocument, OrbitReportDocument, ResultDocument,
};

/// Errors carrying the stable exit-code contract: 2 parse, 3 invalid
/// matrix, 4 budget exceeded.
#[derive(Debug, Clone)]
pub enum CliError {
    Parse(String),
    Matrix(String),
    Budget(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Matrix(m) => write!(f, "invalid matrix: {m}"),
            CliError::Budget(m) => write!(f, "budget exceeded: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Matrix(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::RingSpec(_) => CliError::Parse(e.to_string()),
            Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Matrix(e.to_string()),
        }
    }
}

/// The document's ring is authoritative; an explicit `--ring` must agree.
fn resolve_ring(
    doc: &MatrixDocument,
    ring_flag: Option<&str>,
) -> Result<(Arc<RingContext>, Matrix), CliError> {
    let (ctx, m) = doc.to_matrix()?;
    if let Some(spec) = ring_flag {
        let flag_ctx = RingContext::from_spec(spec).map_err(|e| CliError::Parse(e.to_string()))?;
        if *flag_ctx != *ctx {
            return Err(CliError::Parse(format!(
                "--ring {spec} does not match document ring {}",
                doc.ring
            )));
        }
    }
    Ok((ctx, m))
}

pub fn cmd_classify(
    doc: &MatrixDocument,
    ring_flag: Option<&str>,
) -> Result<ResultDocument, CliError> {
    let (_ctx, m) = resolve_ring(doc, ring_flag)?;
    let form = classify(&m)?;
    Ok(ResultDocument {
        form: FormDocument::from_form(&form),
        witness: None,
        target: None,
        verified: false,
    })
}

pub fn cmd_reduce(
    doc: &MatrixDocument,
    ring_flag: Option<&str>,
    verify: bool,
    include_witness: bool,
) -> Result<ResultDocument, CliError> {
    let (_ctx, m) = resolve_ring(doc, ring_flag)?;
    let w = reduce(&m)?;
    let verified = verify && w.verify(&m);
    if verify && !verified {
        // cannot happen for a correct pipeline; never report an unverified
        // witness as verified
        return Err(CliError::Matrix(
            "internal: witness failed re-multiplication".into(),
        ));
    }
    Ok(ResultDocument {
        form: FormDocument::from_form(w.form()),
        witness: include_witness.then(|| matrix_entries(w.witness())),
        target: Some(matrix_entries(w.target())),
        verified,
    })
}

pub fn cmd_oracle(ring: &str, n: usize, budget: u128) -> Result<OrbitReportDocument, CliError> {
    let ctx = RingContext::from_spec(ring).map_err(|e| CliError::Parse(e.to_string()))?;
    if n == 0 {
        return Err(CliError::Parse("n must be at least 1".into()));
    }
    let report = verify_classification(&ctx, n, budget)?;
    Ok(OrbitReportDocument::from_report(&report))
}

pub fn cmd_random(
    ring: &str,
    n: usize,
    seed: u64,
    count: u64,
) -> Result<Vec<MatrixDocument>, CliError> {
    let ctx = RingContext::from_spec(ring).map_err(|e| CliError::Parse(e.to_string()))?;
    if n == 0 {
        return Err(CliError::Parse("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| MatrixDocument::from_matrix(&random_symmetric_invertible(&ctx, n, &mut rng)))
        .collect())
}

pub const ORACLE_DEFAULT_BUDGET: u128 = DEFAULT_BUDGET;

fn suite<W: Write>(out: &mut W, name: &str, pass: bool) -> bool {
    let _ = writeln!(out, "{name}: {}", if pass { "PASS" } else { "FAIL" });
    pass
}

/// Fixed self-check battery over a small matrix of ring configurations.
/// Returns true when every suite passes.
pub fn cmd_selftest<W: Write>(out: &mut W) -> bool {
    let rings: Vec<Arc<RingContext>> = ["zmod:3^2", "zmod:5", "gr:3^2:2", "trunc:3:2:2"]
        .iter()
        .map(|s| RingContext::from_spec(s).unwrap())
        .collect();
    let mut all = true;

    // ring axioms on a deterministic sample
    let mut pass = true;
    for ctx in &rings {
        let card = ctx.card();
        let els: Vec<RingElement> = (0..card)
            .step_by((card / 7).max(1) as usize)
            .map(|i| RingElement::from_index(ctx, i))
            .collect();
        for a in &els {
            for b in &els {
                pass &= a.add(b) == b.add(a) && a.mul(b) == b.mul(a);
                for c in &els {
                    pass &= a.mul(&b.add(c)) == a.mul(b).add(&a.mul(c));
                }
            }
        }
    }
    all &= suite(out, "ring axioms", pass);

    // unit-group structure: squares have index 2, coset covers the rest
    let mut pass = true;
    for ctx in &rings {
        let squares: std::collections::BTreeSet<u128> =
            units(ctx).map(|u| u.mul(&u).index()).collect();
        pass &= squares.len() as u128 == ctx.card_units() / 2;
        let z = canonical_nonsquare(ctx);
        pass &= !squares.contains(&z.index());
    }
    all &= suite(out, "unit square classes", pass);

    // congruence block identities
    let mut pass = true;
    for ctx in &rings {
        let z = canonical_nonsquare(ctx);
        let b = z_scaling_block(ctx);
        pass &= b.mul(&b.transpose()) == Matrix::identity(ctx, 2).scalar_mul(&z);
        for nu in 1..=2usize {
            let g = if ctx.minus_one_is_square() {
                Matrix::identity(ctx, 2 * nu)
            } else {
                Matrix::identity(ctx, nu)
                    .direct_sum(&Matrix::identity(ctx, nu).scalar_mul(&z))
            };
            pass &= hyperbolic_witness(ctx, nu).congruence(&g) == Matrix::hyperbolic(ctx, nu);
        }
    }
    all &= suite(out, "congruence blocks", pass);

    // classify/reduce agreement with exact witnesses on a seeded corpus
    let mut pass = true;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f);
    for ctx in &rings {
        for n in 1..=4usize {
            for _ in 0..25 {
                let s = random_symmetric_invertible(ctx, n, &mut rng);
                match (reduce(&s), classify(&s)) {
                    (Ok(w), Ok(f)) => pass &= w.verify(&s) && *w.form() == f,
                    _ => pass = false,
                }
            }
        }
    }
    all &= suite(out, "classify/reduce agreement", pass);

    // exhaustive orbit oracle on the smallest configurations
    let mut pass = true;
    for (spec, n) in [("zmod:3", 2usize), ("trunc:3:1:2", 2)] {
        let ctx = RingContext::from_spec(spec).unwrap();
        match verify_classification(&ctx, n, ORACLE_DEFAULT_BUDGET) {
            Ok(report) => pass &= report.pass() && report.orbit_count == 2,
            Err(_) => pass = false,
        }
    }
    all &= suite(out, "orbit oracle", pass);

    let _ = writeln!(out, "selftest: {}", if all { "PASS" } else { "FAIL" });
    all
}
