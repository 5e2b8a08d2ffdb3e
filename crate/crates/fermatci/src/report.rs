//! The report schema: deterministic, exact, versioned. Every number is an
//! integer or a rational rendered as `a/b`; field elements are rendered in
//! canonical form, so identical jobs produce byte-identical reports.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Jacobian-style matrices are printed up to this many rows/columns;
/// larger ones are summarized by their rank.
pub const MATRIX_PRINT_CAP: usize = 6;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub schema: u32,
    pub job: JobEcho,
    pub results: Vec<CommandResult>,
    pub overall_pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct JobEcho {
    pub prime: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambient_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codim: Option<usize>,
    pub params: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub coeff_rows: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conic: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub avoid: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    pub commands: Vec<String>,
    pub search_bound: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum CommandResult {
    Validate(ValidateResult),
    Chain(ChainResult),
    Invariants(InvariantsResult),
    GenusChange(GenusChangeResult),
    ClassifyConic(ConicResult),
    Pfermat(PfermatResult),
    Bounds(BoundsResult),
}

impl CommandResult {
    pub fn pass(&self) -> bool {
        match self {
            CommandResult::Validate(r) => r.valid,
            CommandResult::Chain(r) => r.all_certificates_pass,
            CommandResult::Invariants(r) => r.checks.iter().all(|c| c.pass),
            CommandResult::GenusChange(r) => r.consistent,
            CommandResult::ClassifyConic(r) => !r.tag.starts_with("not-applicable"),
            CommandResult::Pfermat(r) => r.identity_pass && r.fingerprint_on_curve,
            CommandResult::Bounds(r) => r.table_check.as_ref().map(|t| t.pass).unwrap_or(true),
        }
    }
}

/// A matrix of rendered field elements, or a rank summary when larger than
/// the print cap.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatrixOrSummary {
    Matrix { rows: Vec<Vec<String>> },
    Summary { rows: usize, cols: usize, rank: usize },
}

impl MatrixOrSummary {
    pub fn from_rendered(rows: Vec<Vec<String>>, rank: usize) -> Self {
        let r = rows.len();
        let c = rows.first().map(|r| r.len()).unwrap_or(0);
        if r > MATRIX_PRINT_CAP || c > MATRIX_PRINT_CAP {
            MatrixOrSummary::Summary { rows: r, cols: c, rank }
        } else {
            MatrixOrSummary::Matrix { rows }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ValidateResult {
    pub valid: bool,
    pub independence_rank: usize,
    pub independence_expected: usize,
    pub coeff_rank: usize,
    pub coeff_rank_expected: usize,
    pub independence_jacobian: MatrixOrSummary,
    pub jacobian_minor_is_identity: bool,
    pub jacobian_minor: MatrixOrSummary,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct StepSummary {
    pub index: usize,
    pub internal_field_gens: Vec<String>,
    pub external_field_gens: Vec<String>,
    pub internal_degree_log: u64,
    pub external_degree_log: u64,
    pub t10: String,
    pub identity_pass: bool,
    pub independence_rank: usize,
    pub independence_expected: usize,
    pub child_valid: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ChainResult {
    pub steps: Vec<StepSummary>,
    pub terminal_field_gens: Vec<String>,
    pub terminal_dim: usize,
    pub external_degree_log_sum: u64,
    pub all_certificates_pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct NamedCheck {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReductionStageSummary {
    pub d: u32,
    pub e_remaining: u32,
    pub linear: bool,
    pub valid: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct InvariantsResult {
    pub epsilon: u64,
    pub gamma_lower: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_upper: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_exact: Option<u64>,
    pub ell_f: u32,
    pub m_f: u32,
    pub deg_imperfection: u64,
    /// n·p^{ℓ_F} with n = 1 (regular input), as a decimal string.
    pub qgor_index: String,
    pub reduction_trail: Vec<ReductionStageSummary>,
    pub checks: Vec<NamedCheck>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GenusChangeResult {
    pub p: u64,
    pub epsilon: u64,
    pub gamma: u64,
    pub g_x: u64,
    pub g_y: u64,
    /// Σ deg D_i as an exact rational string.
    pub sum_deg: String,
    pub consistent: bool,
    pub integrality: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConicResult {
    pub tag: String,
    pub regular_dim_one_asserted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixed_terms_zero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagonal_nonzero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independence_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independence_jacobian: Option<MatrixOrSummary>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RejectedSummary {
    pub a: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PfermatResult {
    pub a: String,
    pub internal_field_gens: Vec<String>,
    pub external_field_gens: Vec<String>,
    pub identity_pass: bool,
    pub fingerprint: Vec<String>,
    pub fingerprint_on_curve: bool,
    pub rejected: Vec<RejectedSummary>,
    pub candidates_tried: usize,
    pub internal_degree_log: u64,
    pub external_degree_log: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableCheckSummary {
    pub gamma: u64,
    pub ell_f: u64,
    pub m_f: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BoundsResult {
    pub p: u64,
    pub deg_imperfection: u64,
    /// 5·([k:k²])² or (5/3)·[k:k³] as an exact rational string; absent for
    /// p ≥ 5 where no such curve exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus_one_degree_bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_check: Option<TableCheckSummary>,
    pub qgor_index: String,
}

/// Exact rational rendered as `a` or `a/b`.
pub fn render_ratio(r: &Ratio<i64>) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Stable text rendering of a report: one section per command with one
/// pass/fail line per certificate.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let push = |out: &mut String, s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push(&mut out, format!("schema: {}", report.schema));
    push(
        &mut out,
        format!(
            "job: p={} e={} N={} r={} params=[{}]",
            report.job.prime,
            report.job.e.map(|e| e.to_string()).unwrap_or_else(|| "-".into()),
            report
                .job
                .ambient_dim
                .map(|n| n.to_string())
                .unwrap_or_else(|| "-".into()),
            report
                .job
                .codim
                .map(|r| r.to_string())
                .unwrap_or_else(|| "-".into()),
            report.job.params.join(", ")
        ),
    );
    for res in &report.results {
        match res {
            CommandResult::Validate(v) => {
                push(&mut out, "[validate]".into());
                push(
                    &mut out,
                    format!(
                        "  independence rank {}/{}; coefficient rank {}/{}; jacobian minor identity: {}",
                        v.independence_rank,
                        v.independence_expected,
                        v.coeff_rank,
                        v.coeff_rank_expected,
                        v.jacobian_minor_is_identity
                    ),
                );
                push(&mut out, format!("  valid: {}", pass_str(v.valid)));
            }
            CommandResult::Chain(c) => {
                push(&mut out, "[chain]".into());
                for s in &c.steps {
                    push(
                        &mut out,
                        format!(
                            "  step {}: l = F_p({}), k' = F_p({}), log[l:k]={}, log[k':l]={}, t10 = {}",
                            s.index,
                            s.internal_field_gens.join(","),
                            s.external_field_gens.join(","),
                            s.internal_degree_log,
                            s.external_degree_log,
                            s.t10
                        ),
                    );
                    push(
                        &mut out,
                        format!(
                            "    identities: {}; independence rank {}/{}; child valid: {}",
                            pass_str(s.identity_pass),
                            s.independence_rank,
                            s.independence_expected,
                            pass_str(s.child_valid)
                        ),
                    );
                }
                push(
                    &mut out,
                    format!(
                        "  terminal: P^{} over F_p({}); sum log[k':l] = {}",
                        c.terminal_dim,
                        c.terminal_field_gens.join(","),
                        c.external_degree_log_sum
                    ),
                );
            }
            CommandResult::Invariants(i) => {
                push(&mut out, "[invariants]".into());
                let gamma = match (i.gamma_exact, i.gamma_upper) {
                    (Some(g), _) => format!("{} (exact)", g),
                    (None, Some(u)) => format!("[{}, {}]", i.gamma_lower, u),
                    (None, None) => format!(">= {}", i.gamma_lower),
                };
                push(
                    &mut out,
                    format!(
                        "  epsilon = {}, gamma = {}, ell_F = {}, m_F = {}, log_p[k:k^p] = {}, qgor index = {}",
                        i.epsilon, gamma, i.ell_f, i.m_f, i.deg_imperfection, i.qgor_index
                    ),
                );
                for st in &i.reduction_trail {
                    push(
                        &mut out,
                        format!(
                            "  reduction d={}: e->{} linear={} valid={}",
                            st.d, st.e_remaining, st.linear, st.valid
                        ),
                    );
                }
                for ch in &i.checks {
                    push(&mut out, format!("  check {}: {}", ch.name, pass_str(ch.pass)));
                }
            }
            CommandResult::GenusChange(g) => {
                push(&mut out, "[genus-change]".into());
                push(
                    &mut out,
                    format!(
                        "  p={} epsilon={} gamma={} g_X={} g_Y={} sum deg D_i = {}",
                        g.p, g.epsilon, g.gamma, g.g_x, g.g_y, g.sum_deg
                    ),
                );
                push(&mut out, format!("  integrality: {}", g.integrality));
                push(&mut out, format!("  consistent: {}", pass_str(g.consistent)));
            }
            CommandResult::ClassifyConic(c) => {
                push(&mut out, "[classify-conic]".into());
                push(&mut out, format!("  tag: {}", c.tag));
                if let Some(r) = c.independence_rank {
                    push(&mut out, format!("  derivation rank: {}", r));
                }
            }
            CommandResult::Pfermat(p) => {
                push(&mut out, "[pfermat]".into());
                push(
                    &mut out,
                    format!(
                        "  a = {}; l = F_p({}); k' = F_p({})",
                        p.a,
                        p.internal_field_gens.join(","),
                        p.external_field_gens.join(",")
                    ),
                );
                push(
                    &mut out,
                    format!(
                        "  identity: {}; fingerprint [{}] on curve: {}",
                        pass_str(p.identity_pass),
                        p.fingerprint.join(" : "),
                        pass_str(p.fingerprint_on_curve)
                    ),
                );
                for r in &p.rejected {
                    push(&mut out, format!("  rejected a = {}: {}", r.a, r.reason));
                }
            }
            CommandResult::Bounds(b) => {
                push(&mut out, "[bounds]".into());
                if let Some(d) = &b.genus_one_degree_bound {
                    push(&mut out, format!("  genus-one degree bound: {}", d));
                }
                if let Some(t) = &b.table_check {
                    push(
                        &mut out,
                        format!(
                            "  table check (gamma,ell,m)=({},{},{}): {}",
                            t.gamma,
                            t.ell_f,
                            t.m_f,
                            pass_str(t.pass)
                        ),
                    );
                }
                push(&mut out, format!("  qgor index: {}", b.qgor_index));
            }
        }
    }
    push(
        &mut out,
        format!("overall: {}", pass_str(report.overall_pass)),
    );
    out
}

fn pass_str(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}
