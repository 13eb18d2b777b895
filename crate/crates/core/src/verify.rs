//! The identity harness: named reproductions of the vanishing and dimension
//! claims on concrete models, with per-seed pass/fail reports.
//!
//! Claims are reproducible bit for bit from (claim id, field, seed); a
//! failing seed is reported individually and never aborts a suite. A seed
//! whose model builds cleanly but violates a vanishing assertion is flagged
//! as a special-member candidate rather than as an error: one passing seed
//! certifies the generic statement by semicontinuity, and failing seeds are
//! data.

use crate::betti::{
    betti_table, binomial, hilbert_strand_consistency, kpq_dim_cached, BettiTable, RankCache,
    TableOptions, DEFAULT_BUDGET_MB,
};
use crate::field::FieldSpec;
use crate::models::{hyperplane_section, ModelError, ModelKind, ModelSpec, SplitMix64};
use crate::ring::Presentation;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("claim `{0}` needs a K3 model")]
    NeedsK3(String),
    #[error("unsupported k = {0} (expected 2, 3, or 4)")]
    UnsupportedK(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Assertion {
    fn eq_usize(name: impl Into<String>, expected: usize, computed: usize) -> Assertion {
        Assertion {
            name: name.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            status: if expected == computed {
                Status::Pass
            } else {
                Status::Fail
            },
            note: None,
        }
    }

    fn info(name: impl Into<String>, computed: impl ToString) -> Assertion {
        Assertion {
            name: name.into(),
            expected: "(reported, not asserted)".to_string(),
            computed: computed.to_string(),
            status: Status::Info,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Assertion {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub model: String,
    pub field: String,
    pub seeds: Vec<u64>,
    pub assertions: Vec<Assertion>,
    pub wall_ms: u128,
    pub passed: bool,
}

impl VerificationReport {
    fn finish(mut self, start: Instant) -> VerificationReport {
        self.wall_ms = start.elapsed().as_millis();
        self.passed = self
            .assertions
            .iter()
            .all(|a| a.status != Status::Fail);
        self
    }
}

/// Builds a model, reseeding on degeneracy, and checks the declared Hilbert
/// function as far as the table range needs it.
fn build_checked(
    spec: &ModelSpec,
    q_max: usize,
    log: &mut Vec<Assertion>,
) -> Result<(Presentation, u64), ModelError> {
    let (pres, used) = spec.build_with_reseed(16)?;
    if used != spec.seed {
        log.push(
            Assertion::info(
                format!("seed {} degenerate", spec.seed),
                format!("regenerated to seed {used}"),
            )
            .with_note("random slice failed its Hilbert check; derived seed used".to_string()),
        );
    }
    if q_max >= 3 {
        if let Err(m) = pres.check_hilbert(4) {
            return Err(ModelError::Degenerate {
                seed: used,
                mismatch: m,
            });
        }
    }
    Ok((pres, used))
}

fn field_admits(k: usize, field: FieldSpec) -> Option<String> {
    let c = field.characteristic();
    if c == 0 {
        return None;
    }
    if c <= k as u64 {
        return Some(format!("characteristic {c} must be 0 or exceed k = {k}"));
    }
    if (k as u64 + 1).is_multiple_of(c) {
        return Some(format!("characteristic {c} divides k+1 = {}", k + 1));
    }
    None
}

pub fn model_for_k(k: usize) -> Result<ModelKind, VerifyError> {
    match k {
        2 => Ok(ModelKind::CiK3 {
            degrees: vec![2, 3],
        }),
        3 => Ok(ModelKind::MukaiK3 { genus: 6 }),
        4 => Ok(ModelKind::MukaiK3 { genus: 8 }),
        _ => Err(VerifyError::UnsupportedK(k)),
    }
}

/// The even-genus vanishing suite at k in {2,3,4}: on each seed's model,
/// K_{k-2,2} = 0, K_{k-1,1} = C(2k-1,k-2), and K_{k,1} = 0.
pub fn verify_theorem45(
    k: usize,
    field: FieldSpec,
    seeds: &[u64],
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let kind = model_for_k(k)?;
    let mut report = VerificationReport {
        claim: format!("thm45-k{k}"),
        model: kind.to_string(),
        field: field.to_string(),
        seeds: seeds.to_vec(),
        assertions: Vec::new(),
        wall_ms: 0,
        passed: false,
    };
    if let Some(reason) = field_admits(k, field) {
        report.assertions.push(Assertion {
            name: "working field admissible".to_string(),
            expected: "char 0, or char > k and char not dividing k+1".to_string(),
            computed: reason,
            status: Status::Fail,
            note: None,
        });
        return Ok(report.finish(start));
    }
    let expected_k11 = binomial(2 * k as u64 - 1, k as u64 - 2) as usize;
    let per_seed: Vec<Vec<Assertion>> = seeds
        .par_iter()
        .map(|&seed| {
            let mut entries = Vec::new();
            let spec = ModelSpec::new(kind.clone(), field, seed);
            let (pres, used) = match build_checked(&spec, 2, &mut entries) {
                Ok(v) => v,
                Err(e) => {
                    entries.push(Assertion {
                        name: format!("seed {seed}: model build"),
                        expected: "generic model".to_string(),
                        computed: e.to_string(),
                        status: Status::Fail,
                        note: None,
                    });
                    return entries;
                }
            };
            let mut cache = RankCache::new(DEFAULT_BUDGET_MB);
            let cells = [
                (k - 2, 2usize, 0usize, "K_{k-2,2}"),
                (k - 1, 1, expected_k11, "K_{k-1,1}"),
                (k, 1, 0, "K_{k,1}"),
            ];
            for (p, q, expected, label) in cells {
                let computed = kpq_dim_cached(&pres, p, q, &mut cache)
                    .expect("default budget covers the vanishing suites");
                let mut a = Assertion::eq_usize(
                    format!("seed {used}: {label} = dim K_{{{p},{q}}}"),
                    expected,
                    computed,
                );
                if a.status == Status::Fail {
                    a = a.with_note("special member candidate: build was generic but the table differs");
                }
                entries.push(a);
            }
            entries
        })
        .collect();
    for entries in per_seed {
        report.assertions.extend(entries);
    }
    Ok(report.finish(start))
}

/// Odd-genus bookkeeping on the genus-5 complete intersection (k = 3):
/// the section split of wedge^k H^0(L), the middle-term dimension from its
/// resolution, the computed K_{1,1}, and the cokernel dimension the Euler
/// characteristic would force. Whether the boundary map is onto is left
/// open, so those two numbers are reported side by side without a verdict.
pub fn verify_remark46(field: FieldSpec, seeds: &[u64]) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let kind = ModelKind::CiK3 {
        degrees: vec![2, 2, 2],
    };
    let spec0 = ModelSpec::new(kind.clone(), field, seeds.first().copied().unwrap_or(0));
    let inv = spec0.lm_invariants().map_err(VerifyError::Model)?;
    let (k, e, g) = (inv.k, inv.e, inv.genus);
    let mut report = VerificationReport {
        claim: "rem46-genus5".to_string(),
        model: kind.to_string(),
        field: field.to_string(),
        seeds: seeds.to_vec(),
        assertions: Vec::new(),
        wall_ms: 0,
        passed: false,
    };
    let sym = |a: usize, n: usize| binomial((n + a - 1) as u64, a as u64) as usize;
    let dim_wedge_k = binomial(g as u64 + 1, k as u64) as usize;
    let dim_sym_km1 = sym(k - 1, e);
    let dim_top_sections = binomial((2 * k - 1) as u64, k as u64) as usize;
    report.assertions.push(Assertion::eq_usize(
        format!("wedge^{k} H0(L) splits: C({},{k}) = C({},{}) + C({},{k})", g + 1, 2 * k - 1, k - 1, 2 * k - 1),
        dim_wedge_k,
        dim_sym_km1 + dim_top_sections,
    ));
    // alternating sum over the middle-term resolution: the S^{k-2}(x)H0(E)
    // summand cancels against the kernel term
    let dim_m = (g + 1) * sym(k - 3, e) + sym(k - 1, e) + sym(k - 2, e) * e - sym(k - 2, e) * e;
    report.assertions.push(Assertion::eq_usize(
        "dim M from its resolution (alternating sum), frozen for k=3, e=4",
        16,
        dim_m,
    ));
    let dim_target = sym(k - 3, e) * (g + 1);
    report.assertions.push(Assertion::info(
        format!("dim S^{}H0(E) = {}, dim M = {}, dim S^{}H0(E)(x)H0(L) = {}", k - 1, dim_sym_km1, dim_m, k - 3, dim_target),
        "boundary dimensions of the kernel strand",
    ));
    let implied_coker = dim_target as i64 - dim_m as i64 + dim_sym_km1 as i64;
    report.assertions.push(
        Assertion::info(
            "cokernel dimension of M -> S^{k-3}H0(E) (x) H0(L) implied by exactness",
            implied_coker,
        )
        .with_note("no verdict: whether the map is onto is left open"),
    );
    for &seed in seeds {
        let spec = ModelSpec::new(kind.clone(), field, seed);
        let (pres, used) = match build_checked(&spec, 1, &mut report.assertions) {
            Ok(v) => v,
            Err(e) => {
                report.assertions.push(Assertion {
                    name: format!("seed {seed}: model build"),
                    expected: "generic model".to_string(),
                    computed: e.to_string(),
                    status: Status::Fail,
                    note: None,
                });
                continue;
            }
        };
        let mut cache = RankCache::new(DEFAULT_BUDGET_MB);
        let k11 = kpq_dim_cached(&pres, 1, 1, &mut cache).expect("small model");
        report.assertions.push(Assertion::eq_usize(
            format!("seed {used}: computed K_{{1,1}} (quadric count of the genus-5 model)"),
            3,
            k11,
        ));
        report.assertions.push(
            Assertion::info(
                format!("seed {used}: computed K_{{1,1}} vs euler-implied cokernel {implied_coker}"),
                k11,
            )
            .with_note("reported side by side; the identification is not asserted"),
        );
        let k31 = kpq_dim_cached(&pres, 3, 1, &mut cache).expect("small model");
        report.assertions.push(Assertion::info(
            format!("seed {used}: computed K_{{3,1}} (odd-case top vanishing, unproven)"),
            k31,
        ));
    }
    Ok(report.finish(start))
}

/// Table symmetry on a K3 model: dim K_{p,1} = dim K_{r-2-p,2} wherever both
/// cells were computed.
pub fn verify_duality(table: &BettiTable) -> VerificationReport {
    let start = Instant::now();
    let r = table.ambient_dim;
    let mut report = VerificationReport {
        claim: "duality".to_string(),
        model: table.model.clone(),
        field: table.field.clone(),
        seeds: vec![table.seed],
        assertions: Vec::new(),
        wall_ms: 0,
        passed: false,
    };
    for p in 0..=r.saturating_sub(2) {
        let dual_p = r - 2 - p;
        match (table.get(p, 1), table.get(dual_p, 2)) {
            (Some(a), Some(b)) => {
                report.assertions.push(Assertion::eq_usize(
                    format!("dim K_{{{p},1}} = dim K_{{{dual_p},2}}"),
                    a,
                    b,
                ));
            }
            _ => {
                report.assertions.push(Assertion::info(
                    format!("K_{{{p},1}} vs K_{{{dual_p},2}}"),
                    "skipped: cell outside the computed range",
                ));
            }
        }
    }
    report.finish(start)
}

/// Computes a model's table together with the strand-consistency identity.
pub fn table_for_model(
    spec: &ModelSpec,
    p_max: usize,
    q_max: usize,
    budget_mb: usize,
) -> Result<(Presentation, BettiTable, Vec<Assertion>), VerifyError> {
    let mut log = Vec::new();
    let (pres, used) = build_checked(spec, q_max, &mut log)?;
    let table = betti_table(
        &pres,
        &TableOptions {
            p_max,
            q_max,
            budget_mb,
            seed: used,
        },
    );
    Ok((pres, table, log))
}

/// The section principle: the table of a K3 model and the table of its
/// random hyperplane-section canonical curve agree on the computed range.
pub fn verify_hyperplane_principle(
    spec: &ModelSpec,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let Some(g) = spec.kind.genus() else {
        return Err(VerifyError::NeedsK3(spec.kind.to_string()));
    };
    let mut report = VerificationReport {
        claim: "hyperplane-section".to_string(),
        model: spec.kind.to_string(),
        field: spec.field.to_string(),
        seeds: vec![seed],
        assertions: Vec::new(),
        wall_ms: 0,
        passed: false,
    };
    let surface_spec = ModelSpec::new(spec.kind.clone(), spec.field, seed);
    let (surface, used) = match build_checked(&surface_spec, 3, &mut report.assertions) {
        Ok(v) => v,
        Err(e) => {
            report.assertions.push(Assertion {
                name: format!("seed {seed}: model build"),
                expected: "generic model".to_string(),
                computed: e.to_string(),
                status: Status::Fail,
                note: None,
            });
            return Ok(report.finish(start));
        }
    };
    // section with derived seeds until the curve passes its Hilbert check
    let mut section_seed = used;
    let mut curve = None;
    for _ in 0..16 {
        match hyperplane_section(&surface, section_seed) {
            Ok(c) => {
                if c.check_hilbert(4).is_ok() {
                    curve = Some(c);
                    break;
                }
                section_seed = SplitMix64::new(section_seed).next_u64();
            }
            Err(_) => {
                section_seed = SplitMix64::new(section_seed).next_u64();
            }
        }
    }
    let Some(curve) = curve else {
        report.assertions.push(Assertion {
            name: "hyperplane section".to_string(),
            expected: "generic section".to_string(),
            computed: "sixteen section seeds were degenerate".to_string(),
            status: Status::Fail,
            note: None,
        });
        return Ok(report.finish(start));
    };
    let (p_max, q_max) = (g - 2, 3usize);
    let opts = TableOptions {
        p_max,
        q_max,
        budget_mb: DEFAULT_BUDGET_MB,
        seed: used,
    };
    let surface_table = betti_table(&surface, &opts);
    let curve_table = betti_table(&curve, &opts);
    for p in 0..=p_max {
        for q in 0..=q_max {
            match (surface_table.get(p, q), curve_table.get(p, q)) {
                (Some(a), Some(b)) => report.assertions.push(Assertion::eq_usize(
                    format!("K_{{{p},{q}}}: surface = curve"),
                    a,
                    b,
                )),
                _ => report.assertions.push(Assertion::info(
                    format!("K_{{{p},{q}}}"),
                    "skipped: hole in one of the tables",
                )),
            }
        }
    }
    for (m, lhs, rhs) in hilbert_strand_consistency(&surface, &surface_table) {
        if lhs != rhs {
            report.assertions.push(Assertion {
                name: format!("surface strand {m} consistency"),
                expected: rhs.to_string(),
                computed: lhs.to_string(),
                status: Status::Fail,
                note: None,
            });
        }
    }
    Ok(report.finish(start))
}

/// Renders a report as aligned text lines, one per assertion.
pub fn render_report(report: &VerificationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "claim {} on {} over {} ({} ms): {}\n",
        report.claim,
        report.model,
        report.field,
        report.wall_ms,
        if report.passed { "PASS" } else { "FAIL" }
    ));
    for a in &report.assertions {
        let tag = match a.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Info => "info",
        };
        out.push_str(&format!(
            "  [{tag}] {}: expected {}, computed {}{}\n",
            a.name,
            a.expected,
            a.computed,
            a.note
                .as_ref()
                .map(|n| format!(" ({n})"))
                .unwrap_or_default()
        ));
    }
    out
}
