//! JSON document schemas: matrix input/output, classification results and
//! orbit reports. Element encodings mirror the canonical ring encodings,
//! so parsing an emitted document reproduces the value bit for bit.

use std::sync::Arc;

use cogredient::localring::Family;
use cogredient::reduction::StandardForm;
use cogredient::{Matrix, OrbitReport, RingContext, RingElement};
use serde::{Deserialize, Serialize};

use crate::commands::CliError;

/// One matrix entry: an integer for `zmod`, a coefficient array for `gr`,
/// an array of blocks for `trunc`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(u64),
    Coeffs(Vec<u64>),
    Blocks(Vec<Vec<u64>>),
}

impl Entry {
    pub fn from_element(e: &RingElement) -> Entry {
        let ctx = e.ring();
        match ctx.family() {
            Family::Zmod => Entry::Int(e.repr()[0]),
            Family::Galois => Entry::Coeffs(e.repr().to_vec()),
            Family::Trunc => Entry::Blocks(
                e.repr()
                    .chunks(ctx.degree() as usize)
                    .map(|b| b.to_vec())
                    .collect(),
            ),
        }
    }

    pub fn to_element(&self, ctx: &Arc<RingContext>) -> Result<RingElement, CliError> {
        let repr = match (ctx.family(), self) {
            (Family::Zmod, Entry::Int(v)) => vec![*v],
            (Family::Galois, Entry::Coeffs(c)) => c.clone(),
            (Family::Trunc, Entry::Blocks(blocks)) => {
                if blocks.len() != ctx.truncation() as usize {
                    return Err(CliError::Parse(format!(
                        "entry needs {} blocks, got {}",
                        ctx.truncation(),
                        blocks.len()
                    )));
                }
                let r = ctx.degree() as usize;
                let mut flat = Vec::with_capacity(blocks.len() * r);
                for b in blocks {
                    if b.len() != r {
                        return Err(CliError::Parse(format!(
                            "entry block needs {r} coefficients, got {}",
                            b.len()
                        )));
                    }
                    flat.extend_from_slice(b);
                }
                flat
            }
            _ => {
                return Err(CliError::Parse(format!(
                    "entry shape does not match ring family {:?}",
                    ctx.family()
                )))
            }
        };
        RingElement::from_repr(ctx, repr).map_err(|e| CliError::Parse(e.to_string()))
    }
}

/// A matrix tied to a ring spec. Round-trips bit-exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub ring: String,
    pub n: usize,
    pub entries: Vec<Vec<Entry>>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixDocument {
            ring: m.ring().spec_string().to_string(),
            n: m.n_rows(),
            entries: (0..m.n_rows())
                .map(|i| {
                    (0..m.n_cols())
                        .map(|j| Entry::from_element(m.get(i, j)))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<(Arc<RingContext>, Matrix), CliError> {
        let ctx =
            RingContext::from_spec(&self.ring).map_err(|e| CliError::Parse(e.to_string()))?;
        if self.n == 0 {
            return Err(CliError::Parse("rank must be at least 1".into()));
        }
        if self.entries.len() != self.n
            || self.entries.iter().any(|row| row.len() != self.n)
        {
            return Err(CliError::Parse(format!(
                "entries must form an {0}x{0} array",
                self.n
            )));
        }
        let mut flat = Vec::with_capacity(self.n * self.n);
        for row in &self.entries {
            for e in row {
                flat.push(e.to_element(&ctx)?);
            }
        }
        Ok((Arc::clone(&ctx), Matrix::new(&ctx, self.n, self.n, flat)))
    }
}

pub fn matrix_entries(m: &Matrix) -> Vec<Vec<Entry>> {
    MatrixDocument::from_matrix(m).entries
}

/// The invariant triple plus the ring's canonical non-square unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDocument {
    pub nu: usize,
    pub delta: usize,
    pub delta_kind: String,
    pub z: Entry,
}

impl FormDocument {
    pub fn from_form(form: &StandardForm) -> Self {
        FormDocument {
            nu: form.nu(),
            delta: form.delta(),
            delta_kind: form.delta_kind().name().to_string(),
            z: Entry::from_element(&form.z()),
        }
    }
}

/// Output of `classify` and `reduce`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub form: FormDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<Entry>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<Vec<Entry>>>,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckDocument {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitSummaryDocument {
    pub size: u64,
    pub representative: Vec<Vec<Entry>>,
    pub det_is_square: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_form: Option<FormDocument>,
}

/// JSON form of an orbit computation or verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitReportDocument {
    pub ring: String,
    pub n: usize,
    pub total_symmetric_invertible: u64,
    pub orbit_count: usize,
    pub orbits: Vec<OrbitSummaryDocument>,
    pub checks: Vec<CheckDocument>,
    pub pass: bool,
}

impl OrbitReportDocument {
    pub fn from_report(report: &OrbitReport) -> Self {
        OrbitReportDocument {
            ring: report.ring.clone(),
            n: report.n,
            total_symmetric_invertible: report.total_symmetric_invertible,
            orbit_count: report.orbit_count,
            orbits: report
                .orbits
                .iter()
                .map(|o| OrbitSummaryDocument {
                    size: o.size,
                    representative: matrix_entries(&o.representative),
                    det_is_square: o.det_is_square,
                    canonical_form: o.canonical_form.as_ref().map(FormDocument::from_form),
                })
                .collect(),
            checks: report
                .checks
                .iter()
                .map(|c| CheckDocument {
                    name: c.name.to_string(),
                    pass: c.pass,
                    detail: c.detail.clone(),
                })
                .collect(),
            pass: report.pass(),
        }
    }
}
