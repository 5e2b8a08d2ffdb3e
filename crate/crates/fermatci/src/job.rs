//! Declarative job input (line-oriented key=value format) and pipeline
//! orchestration: validate → chain → invariants → curve checks, with
//! dependencies resolved in a fixed order.

use crate::curves::{
    ci_curve_genus, classify_conic, genus_change_check, genus_one_degree_bound,
    genus_one_table_check, integrality_criteria, pfermat_decomposition, ConicForm,
    ConicClassTag, IntegralityVerdict,
};
use crate::error::{Error, Result};
use crate::expr::parse_expr_at;
use crate::fermat::{
    build_chain, homogenize_parameters, jacobian_regularity_certificate, validate,
    ExtensionChain, FermatCI,
};
use crate::field::{FieldElement, PrimeField, RatFunc, TowerRegistry};
use crate::invariants::{invariant_report, qgor_index, InvariantReport};
use crate::report::{
    render_ratio, render_text, BoundsResult, ChainResult, CommandResult, ConicResult,
    GenusChangeResult, InvariantsResult, JobEcho, MatrixOrSummary, NamedCheck, PfermatResult,
    RejectedSummary, Report, ReductionStageSummary, StepSummary, TableCheckSummary,
    ValidateResult, SCHEMA_VERSION,
};

pub const DEFAULT_SEARCH_BOUND: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Validate,
    Chain,
    Invariants,
    GenusChange,
    ClassifyConic,
    Pfermat,
    Bounds,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Chain => "chain",
            Command::Invariants => "invariants",
            Command::GenusChange => "genus-change",
            Command::ClassifyConic => "classify-conic",
            Command::Pfermat => "pfermat",
            Command::Bounds => "bounds",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Some(match name {
            "validate" => Command::Validate,
            "chain" => Command::Chain,
            "invariants" => Command::Invariants,
            "genus-change" => Command::GenusChange,
            "classify-conic" => Command::ClassifyConic,
            "pfermat" => Command::Pfermat,
            "bounds" => Command::Bounds,
            _ => return None,
        })
    }
}

/// Output format for rendered reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

/// A fully validated job: parsed expressions plus the raw text for echoing.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub prime: PrimeField,
    pub e: Option<u32>,
    pub ambient_dim: Option<usize>,
    pub codim: Option<usize>,
    pub params: Vec<String>,
    pub coeff_rows_raw: Vec<Vec<String>>,
    pub coeff_rows: Vec<Vec<RatFunc>>,
    pub conic_raw: Option<Vec<String>>,
    pub conic: Option<[RatFunc; 6]>,
    pub avoid_raw: Vec<String>,
    pub avoid: Vec<[RatFunc; 3]>,
    pub a_raw: Option<String>,
    pub a: Option<RatFunc>,
    pub commands: Vec<Command>,
    pub search_bound: usize,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Split a value into whitespace-separated fields with their column offsets.
fn fields_with_cols(value: &str, col0: usize) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    let mut col = col0;
    let mut cur = String::new();
    let mut cur_col = col0;
    for c in value.chars() {
        if c.is_whitespace() {
            if !cur.is_empty() {
                out.push((std::mem::take(&mut cur), cur_col));
            }
        } else {
            if cur.is_empty() {
                cur_col = col;
            }
            cur.push(c);
        }
        col += 1;
    }
    if !cur.is_empty() {
        out.push((cur, cur_col));
    }
    out
}

/// Parse the line-oriented job format. Keys: prime, e, N, r, params,
/// coeff[i], conic, avoid (repeatable), a, search-bound. `#` starts a
/// comment. Expressions are whitespace-free tokens in the shared grammar.
pub fn parse_job(text: &str) -> Result<JobSpec> {
    let mut prime: Option<(PrimeField, usize)> = None;
    let mut e: Option<u32> = None;
    let mut ambient_dim: Option<usize> = None;
    let mut codim: Option<usize> = None;
    let mut params: Option<(Vec<String>, usize)> = None;
    let mut coeff_lines: Vec<(usize, usize, String, usize)> = Vec::new(); // (row, line, value, col)
    let mut conic_line: Option<(usize, String, usize)> = None;
    let mut avoid_lines: Vec<(usize, String, usize)> = Vec::new();
    let mut a_line: Option<(usize, String, usize)> = None;
    let mut search_bound = DEFAULT_SEARCH_BOUND;

    for (lineno0, raw) in text.lines().enumerate() {
        let lineno = lineno0 + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let eq = line.find('=').ok_or(Error::Parse {
            line: lineno,
            col: 1,
            msg: "expected key = value".into(),
        })?;
        let key = line[..eq].trim();
        let value = line[eq + 1..].trim().to_string();
        let value_col = eq + 2 + (line[eq + 1..].len() - line[eq + 1..].trim_start().len());
        let parse_usize = |v: &str| -> Result<usize> {
            v.parse().map_err(|_| Error::Parse {
                line: lineno,
                col: value_col,
                msg: format!("expected a non-negative integer, got '{}'", v),
            })
        };
        match key {
            "prime" => {
                let p: u64 = value.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    col: value_col,
                    msg: format!("expected a prime number, got '{}'", value),
                })?;
                let field = PrimeField::new(p).map_err(|_| Error::Parse {
                    line: lineno,
                    col: value_col,
                    msg: format!("{} is not prime", p),
                })?;
                prime = Some((field, lineno));
            }
            "e" => e = Some(parse_usize(&value)? as u32),
            "N" => ambient_dim = Some(parse_usize(&value)?),
            "r" => codim = Some(parse_usize(&value)?),
            "params" => {
                let names: Vec<String> = fields_with_cols(&value, value_col)
                    .into_iter()
                    .map(|(name, col)| {
                        if !is_identifier(&name) {
                            return Err(Error::Parse {
                                line: lineno,
                                col,
                                msg: format!("invalid generator name '{}'", name),
                            });
                        }
                        Ok(name)
                    })
                    .collect::<Result<_>>()?;
                for (i, n) in names.iter().enumerate() {
                    if names[..i].contains(n) {
                        return Err(Error::Parse {
                            line: lineno,
                            col: value_col,
                            msg: format!("duplicate generator name '{}'", n),
                        });
                    }
                }
                params = Some((names, lineno));
            }
            k if k.starts_with("coeff[") && k.ends_with(']') => {
                let idx: usize = k["coeff[".len()..k.len() - 1]
                    .parse()
                    .map_err(|_| Error::Parse {
                        line: lineno,
                        col: 1,
                        msg: format!("bad coefficient row index in '{}'", k),
                    })?;
                if idx == 0 {
                    return Err(Error::Parse {
                        line: lineno,
                        col: 1,
                        msg: "coefficient rows are numbered from 1".into(),
                    });
                }
                coeff_lines.push((idx, lineno, value, value_col));
            }
            "conic" => conic_line = Some((lineno, value, value_col)),
            "avoid" => avoid_lines.push((lineno, value, value_col)),
            "a" => a_line = Some((lineno, value, value_col)),
            "search-bound" => search_bound = parse_usize(&value)?,
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    col: 1,
                    msg: format!("unknown key '{}'", other),
                })
            }
        }
    }

    let (prime, _) = prime.ok_or(Error::Parse {
        line: 1,
        col: 1,
        msg: "missing required key 'prime'".into(),
    })?;
    let (params, _) = params.ok_or(Error::Parse {
        line: 1,
        col: 1,
        msg: "missing required key 'params'".into(),
    })?;

    // Coefficient rows.
    let mut coeff_rows_raw = Vec::new();
    let mut coeff_rows = Vec::new();
    if !coeff_lines.is_empty() {
        let (n, r) = match (ambient_dim, codim) {
            (Some(n), Some(r)) => (n, r),
            _ => {
                let (_, lineno, _, _) = coeff_lines[0];
                return Err(Error::Parse {
                    line: lineno,
                    col: 1,
                    msg: "coefficient rows require N and r".into(),
                });
            }
        };
        coeff_lines.sort_by_key(|&(idx, _, _, _)| idx);
        if coeff_lines.len() != r
            || coeff_lines
                .iter()
                .enumerate()
                .any(|(i, &(idx, _, _, _))| idx != i + 1)
        {
            let (_, lineno, _, _) = coeff_lines[0];
            return Err(Error::Parse {
                line: lineno,
                col: 1,
                msg: format!("expected coefficient rows 1..{} exactly once each", r),
            });
        }
        for (_, lineno, value, col0) in &coeff_lines {
            let fields = fields_with_cols(value, *col0);
            if fields.len() != n + 1 {
                return Err(Error::Parse {
                    line: *lineno,
                    col: *col0,
                    msg: format!("expected {} coefficients, got {}", n + 1, fields.len()),
                });
            }
            let mut raw = Vec::with_capacity(fields.len());
            let mut parsed = Vec::with_capacity(fields.len());
            for (text, col) in fields {
                parsed.push(parse_expr_at(&text, prime, &params, *lineno, col)?);
                raw.push(text);
            }
            coeff_rows_raw.push(raw);
            coeff_rows.push(parsed);
        }
    }

    // Conic coefficients: a b c alpha beta gamma.
    let (conic_raw, conic) = match conic_line {
        None => (None, None),
        Some((lineno, value, col0)) => {
            let fields = fields_with_cols(&value, col0);
            if fields.len() != 6 {
                return Err(Error::Parse {
                    line: lineno,
                    col: col0,
                    msg: format!("expected 6 conic coefficients, got {}", fields.len()),
                });
            }
            let mut raw = Vec::with_capacity(6);
            let mut parsed = Vec::with_capacity(6);
            for (text, col) in fields {
                parsed.push(parse_expr_at(&text, prime, &params, lineno, col)?);
                raw.push(text);
            }
            let arr: [RatFunc; 6] = parsed.try_into().expect("length checked");
            (Some(raw), Some(arr))
        }
    };

    // Avoid entries: colon-separated projective triples over params ∪ {v}.
    let mut avoid_names = params.clone();
    if !avoid_names.iter().any(|n| n == "v") {
        avoid_names.push("v".to_string());
    }
    let mut avoid_raw = Vec::new();
    let mut avoid = Vec::new();
    for (lineno, value, col0) in &avoid_lines {
        let parts: Vec<&str> = value.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse {
                line: *lineno,
                col: *col0,
                msg: "expected a colon-separated triple expr:expr:expr".into(),
            });
        }
        let mut col = *col0;
        let mut coords = Vec::with_capacity(3);
        for part in &parts {
            coords.push(parse_expr_at(part, prime, &avoid_names, *lineno, col)?);
            col += part.chars().count() + 1;
        }
        avoid_raw.push(value.clone());
        avoid.push(<[RatFunc; 3]>::try_from(coords).expect("length checked"));
    }

    let (a_raw, a) = match a_line {
        None => (None, None),
        Some((lineno, value, col0)) => {
            let parsed = parse_expr_at(&value, prime, &params, lineno, col0)?;
            (Some(value), Some(parsed))
        }
    };

    Ok(JobSpec {
        prime,
        e,
        ambient_dim,
        codim,
        params,
        coeff_rows_raw,
        coeff_rows,
        conic_raw,
        conic,
        avoid_raw,
        avoid,
        a_raw,
        a,
        commands: Vec::new(),
        search_bound,
    })
}

fn echo(job: &JobSpec) -> JobEcho {
    JobEcho {
        prime: job.prime.p(),
        e: job.e,
        ambient_dim: job.ambient_dim,
        codim: job.codim,
        params: job.params.clone(),
        coeff_rows: job.coeff_rows_raw.clone(),
        conic: job.conic_raw.clone(),
        avoid: job.avoid_raw.clone(),
        a: job.a_raw.clone(),
        commands: job.commands.iter().map(|c| c.name().to_string()).collect(),
        search_bound: job.search_bound,
    }
}

struct Pipeline<'a> {
    registry: TowerRegistry,
    job: &'a JobSpec,
    ci: Option<FermatCI>,
    chain: Option<ExtensionChain>,
    invariants: Option<InvariantReport>,
    genus: Option<u64>,
}

impl<'a> Pipeline<'a> {
    fn require_ci(&mut self) -> Result<FermatCI> {
        if let Some(ci) = &self.ci {
            return Ok(ci.clone());
        }
        let (e, n, r) = match (self.job.e, self.job.ambient_dim, self.job.codim) {
            (Some(e), Some(n), Some(r)) => (e, n, r),
            _ => {
                return Err(Error::Structural(
                    "this command needs e, N, r, and coefficient rows".into(),
                ))
            }
        };
        if self.job.coeff_rows.len() != r {
            return Err(Error::Structural(format!(
                "expected {} coefficient rows, got {}",
                r,
                self.job.coeff_rows.len()
            )));
        }
        let field = self
            .registry
            .base_field(self.job.prime, self.job.params.clone());
        let coeffs: Vec<Vec<FieldElement>> = self
            .job
            .coeff_rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| FieldElement::new(field, v.clone()))
                    .collect()
            })
            .collect();
        let raw = FermatCI::new(&self.registry, field, e, n, r, coeffs)?;
        // Rows sharing a unit column get one fresh transcendental each;
        // strict inputs pass through unchanged.
        let ci = homogenize_parameters(&mut self.registry, &raw)?;
        self.ci = Some(ci.clone());
        Ok(ci)
    }

    fn require_chain(&mut self) -> Result<ExtensionChain> {
        if let Some(c) = &self.chain {
            return Ok(c.clone());
        }
        let ci = self.require_ci()?;
        let chain = build_chain(&mut self.registry, &ci)?;
        self.chain = Some(chain.clone());
        Ok(chain)
    }

    fn require_invariants(&mut self) -> Result<InvariantReport> {
        if let Some(i) = &self.invariants {
            return Ok(i.clone());
        }
        let ci = self.require_ci()?;
        let chain = self.require_chain()?;
        let inv = invariant_report(&mut self.registry, &ci, &chain)?;
        self.invariants = Some(inv.clone());
        Ok(inv)
    }

    fn curve_genus(&mut self) -> Result<u64> {
        if let Some(g) = self.genus {
            return Ok(g);
        }
        let ci = self.require_ci()?;
        let p = ci.prime(&self.registry)?;
        let g = ci_curve_genus(p, ci.e, ci.ambient_dim, ci.codim)?;
        self.genus = Some(g);
        Ok(g)
    }

    fn run_validate(&mut self) -> Result<CommandResult> {
        let ci = self.require_ci()?;
        let cert = validate(&self.registry, &ci)?;
        let gens = self.registry.gen_names(ci.field)?.to_vec();
        let (ind_rank, ind_expected, ind_matrix) = match &cert.independence {
            Some(c) => {
                let rendered: Vec<Vec<String>> = c
                    .jacobian
                    .iter()
                    .map(|row| row.iter().map(|e| e.render(&gens)).collect())
                    .collect();
                (
                    c.rank,
                    c.elements.len(),
                    MatrixOrSummary::from_rendered(rendered, c.rank),
                )
            }
            None => (0, 0, MatrixOrSummary::Matrix { rows: vec![] }),
        };
        let (minor, minor_identity) = if cert.valid {
            let jac = jacobian_regularity_certificate(&self.registry, &ci)?;
            let coord_names: Vec<String> =
                (0..=ci.ambient_dim).map(|i| format!("x{}", i)).collect();
            let rendered: Vec<Vec<String>> = jac
                .minor
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| e.render(&coord_names, &gens))
                        .collect()
                })
                .collect();
            let rank = if jac.is_identity { ci.codim } else { 0 };
            (
                MatrixOrSummary::from_rendered(rendered, rank),
                jac.is_identity,
            )
        } else {
            (MatrixOrSummary::Matrix { rows: vec![] }, false)
        };
        Ok(CommandResult::Validate(ValidateResult {
            valid: cert.valid && (ci.codim == 0 || minor_identity),
            independence_rank: ind_rank,
            independence_expected: ind_expected,
            coeff_rank: cert.coeff_rank,
            coeff_rank_expected: cert.expected_rank,
            independence_jacobian: ind_matrix,
            jacobian_minor_is_identity: minor_identity,
            jacobian_minor: minor,
        }))
    }

    fn run_chain(&mut self) -> Result<CommandResult> {
        let chain = self.require_chain()?;
        let mut steps = Vec::with_capacity(chain.steps.len());
        for (i, s) in chain.steps.iter().enumerate() {
            let l_gens = self.registry.gen_names(s.l)?.to_vec();
            let kp_gens = self.registry.gen_names(s.k_prime)?.to_vec();
            steps.push(StepSummary {
                index: i + 1,
                internal_degree_log: s.internal_degree_log,
                external_degree_log: s.external_degree_log,
                t10: s.t10.value.render(&l_gens),
                identity_pass: s.identities.pass,
                independence_rank: s.independence.rank,
                independence_expected: s.parent.ambient_dim * (s.parent.codim - 1) + 1,
                child_valid: s.child_validity.valid,
                internal_field_gens: l_gens,
                external_field_gens: kp_gens,
            });
        }
        let all_pass = chain.steps.iter().all(|s| {
            s.identities.pass && s.independence.independent && s.child_validity.valid
        });
        Ok(CommandResult::Chain(ChainResult {
            steps,
            terminal_field_gens: self.registry.gen_names(chain.terminal_field)?.to_vec(),
            terminal_dim: chain.terminal_dim,
            external_degree_log_sum: chain
                .steps
                .iter()
                .map(|s| s.external_degree_log)
                .sum(),
            all_certificates_pass: all_pass,
        }))
    }

    fn run_invariants(&mut self) -> Result<CommandResult> {
        let ci = self.require_ci()?;
        let inv = self.require_invariants()?;
        let p = ci.prime(&self.registry)?;
        Ok(CommandResult::Invariants(InvariantsResult {
            epsilon: inv.epsilon,
            gamma_lower: inv.gamma_lower,
            gamma_upper: inv.gamma_upper,
            gamma_exact: inv.gamma_exact,
            ell_f: inv.ell_f,
            m_f: inv.m_f,
            deg_imperfection: inv.deg_imperfection,
            qgor_index: qgor_index(inv.ell_f, p, 1).to_string(),
            reduction_trail: inv
                .reduction_trail
                .iter()
                .map(|st| ReductionStageSummary {
                    d: st.d,
                    e_remaining: st.ci.e,
                    linear: st.linear,
                    valid: st.validity.valid,
                })
                .collect(),
            checks: inv
                .checks
                .iter()
                .map(|c| NamedCheck {
                    name: c.name.clone(),
                    pass: c.pass,
                })
                .collect(),
        }))
    }

    fn run_genus_change(&mut self) -> Result<CommandResult> {
        let ci = self.require_ci()?;
        if ci.codim + 1 != ci.ambient_dim {
            return Err(Error::Structural(
                "genus-change requires a curve (r = N−1)".into(),
            ));
        }
        let inv = self.require_invariants()?;
        let g_x = self.curve_genus()?;
        let p = ci.prime(&self.registry)?;
        let gamma = inv.gamma_exact.unwrap_or(inv.gamma_lower);
        let check = genus_change_check(p, inv.epsilon, gamma, g_x, 0)?;
        let integrality = match integrality_criteria(p, g_x) {
            IntegralityVerdict::GuaranteedGeometricallyIntegral { reason } => {
                format!("guaranteed ({})", reason)
            }
            IntegralityVerdict::Inconclusive => "inconclusive".to_string(),
        };
        Ok(CommandResult::GenusChange(GenusChangeResult {
            p,
            epsilon: check.epsilon,
            gamma: check.gamma,
            g_x,
            g_y: 0,
            sum_deg: render_ratio(&check.sum_deg),
            consistent: check.consistent,
            integrality,
        }))
    }

    fn run_classify_conic(&mut self) -> Result<CommandResult> {
        let coeffs = self
            .job
            .conic
            .clone()
            .ok_or_else(|| Error::Structural("classify-conic needs a 'conic' line".into()))?;
        let field = self
            .registry
            .base_field(self.job.prime, self.job.params.clone());
        let elems = coeffs.map(|v| FieldElement::new(field, v));
        let form = ConicForm::new(field, elems)?;
        let class = classify_conic(&self.registry, &form, true)?;
        let gens = self.registry.gen_names(field)?.to_vec();
        let tag = match &class.tag {
            ConicClassTag::SmoothOddChar => "smooth-odd-char".to_string(),
            ConicClassTag::SmoothMixedTerm => "smooth-mixed-term".to_string(),
            ConicClassTag::NonSmoothRegular => "non-smooth-regular".to_string(),
            ConicClassTag::NotReduced => "not-reduced".to_string(),
            ConicClassTag::IntermediateDegree2 => "intermediate-degree-2".to_string(),
            ConicClassTag::NotApplicable(why) => format!("not-applicable: {}", why),
        };
        let (rank, matrix) = match &class.evidence.independence {
            Some(c) => {
                let rendered: Vec<Vec<String>> = c
                    .jacobian
                    .iter()
                    .map(|row| row.iter().map(|e| e.render(&gens)).collect())
                    .collect();
                (
                    Some(c.rank),
                    Some(MatrixOrSummary::from_rendered(rendered, c.rank)),
                )
            }
            None => (None, None),
        };
        Ok(CommandResult::ClassifyConic(ConicResult {
            tag,
            regular_dim_one_asserted: class.evidence.regular_dim_one_asserted,
            mixed_terms_zero: class.evidence.mixed_terms_zero,
            diagonal_nonzero: class.evidence.diagonal_nonzero,
            independence_rank: rank,
            independence_jacobian: matrix,
        }))
    }

    fn run_pfermat(&mut self) -> Result<CommandResult> {
        if self.job.params != ["s".to_string(), "t".to_string()] {
            return Err(Error::Structural(
                "pfermat requires params = s t (the plane curve s·x^p + t·y^p + z^p)".into(),
            ));
        }
        let report = pfermat_decomposition(
            &mut self.registry,
            self.job.prime.p(),
            self.job.a.clone(),
            &self.job.avoid,
            self.job.search_bound,
        )?;
        let base_gens = self.registry.gen_names(report.base_field)?.to_vec();
        let l_gens = self.registry.gen_names(report.l)?.to_vec();
        let kp_gens = self.registry.gen_names(report.k_prime)?.to_vec();
        Ok(CommandResult::Pfermat(PfermatResult {
            a: report.a.value.render(&base_gens),
            identity_pass: report.identity_pass,
            fingerprint: report
                .fingerprint
                .iter()
                .map(|c| c.value.render(&l_gens))
                .collect(),
            fingerprint_on_curve: report.fingerprint_on_curve,
            rejected: report
                .rejected
                .iter()
                .map(|r| RejectedSummary {
                    a: r.a.render(&base_gens),
                    reason: r.reason.clone(),
                })
                .collect(),
            candidates_tried: report.candidates_tried,
            internal_degree_log: report.internal_degree_log,
            external_degree_log: report.external_degree_log,
            internal_field_gens: l_gens,
            external_field_gens: kp_gens,
        }))
    }

    fn run_bounds(&mut self) -> Result<CommandResult> {
        let ci = self.require_ci()?;
        let inv = self.require_invariants()?;
        let p = ci.prime(&self.registry)?;
        let deg_bound = match genus_one_degree_bound(p, inv.deg_imperfection as u32) {
            Ok(b) => Some(render_ratio(&b)),
            Err(Error::NotApplicable(_)) => None,
            Err(e) => return Err(e),
        };
        let table_check = if ci.codim + 1 == ci.ambient_dim && self.curve_genus()? == 1 {
            let gamma = inv.gamma_exact.unwrap_or(inv.gamma_lower);
            Some(TableCheckSummary {
                gamma,
                ell_f: inv.ell_f as u64,
                m_f: inv.m_f as u64,
                pass: genus_one_table_check(p, gamma, inv.ell_f as u64, inv.m_f as u64),
            })
        } else {
            None
        };
        Ok(CommandResult::Bounds(BoundsResult {
            p,
            deg_imperfection: inv.deg_imperfection,
            genus_one_degree_bound: deg_bound,
            table_check,
            qgor_index: qgor_index(inv.ell_f, p, 1).to_string(),
        }))
    }
}

/// Expand a requested command set with its dependencies and put everything
/// in canonical execution order.
fn execution_plan(requested: &[Command]) -> Vec<Command> {
    let mut wanted: Vec<Command> = Vec::new();
    let add = |c: Command, wanted: &mut Vec<Command>| {
        if !wanted.contains(&c) {
            wanted.push(c);
        }
    };
    for c in requested {
        match c {
            Command::Validate => add(Command::Validate, &mut wanted),
            Command::Chain => {
                add(Command::Validate, &mut wanted);
                add(Command::Chain, &mut wanted);
            }
            Command::Invariants => {
                add(Command::Validate, &mut wanted);
                add(Command::Chain, &mut wanted);
                add(Command::Invariants, &mut wanted);
            }
            Command::GenusChange => {
                add(Command::Validate, &mut wanted);
                add(Command::Chain, &mut wanted);
                add(Command::Invariants, &mut wanted);
                add(Command::GenusChange, &mut wanted);
            }
            Command::Bounds => {
                add(Command::Validate, &mut wanted);
                add(Command::Chain, &mut wanted);
                add(Command::Invariants, &mut wanted);
                add(Command::Bounds, &mut wanted);
            }
            Command::ClassifyConic => add(Command::ClassifyConic, &mut wanted),
            Command::Pfermat => add(Command::Pfermat, &mut wanted),
        }
    }
    let order = [
        Command::Validate,
        Command::Chain,
        Command::Invariants,
        Command::GenusChange,
        Command::ClassifyConic,
        Command::Pfermat,
        Command::Bounds,
    ];
    order.into_iter().filter(|c| wanted.contains(c)).collect()
}

/// The `report` meta-command: everything applicable to the job's data.
pub fn applicable_commands(job: &JobSpec) -> Vec<Command> {
    let mut cmds = Vec::new();
    if !job.coeff_rows.is_empty() || job.codim == Some(0) {
        cmds.push(Command::Validate);
        cmds.push(Command::Chain);
        cmds.push(Command::Invariants);
        if job.ambient_dim.is_some()
            && job.codim.is_some()
            && job.codim.unwrap() + 1 == job.ambient_dim.unwrap()
            && job.codim.unwrap() >= 1
        {
            cmds.push(Command::GenusChange);
            cmds.push(Command::Bounds);
        }
    }
    if job.conic.is_some() {
        cmds.push(Command::ClassifyConic);
    }
    cmds
}

/// Run a job: execute its commands in dependency order and assemble the
/// deterministic report. Hard certificate failures abort with the failing
/// certificate named.
pub fn run(job: &JobSpec) -> Result<Report> {
    let mut pipeline = Pipeline {
        registry: TowerRegistry::new(),
        job,
        ci: None,
        chain: None,
        invariants: None,
        genus: None,
    };
    let plan = execution_plan(&job.commands);
    let mut results = Vec::with_capacity(plan.len());
    for cmd in plan {
        let result = match cmd {
            Command::Validate => pipeline.run_validate()?,
            Command::Chain => pipeline.run_chain()?,
            Command::Invariants => pipeline.run_invariants()?,
            Command::GenusChange => pipeline.run_genus_change()?,
            Command::ClassifyConic => pipeline.run_classify_conic()?,
            Command::Pfermat => pipeline.run_pfermat()?,
            Command::Bounds => pipeline.run_bounds()?,
        };
        results.push(result);
    }
    let overall_pass = results.iter().all(|r| r.pass());
    Ok(Report {
        schema: SCHEMA_VERSION,
        job: echo(job),
        results,
        overall_pass,
    })
}

/// Render a report in the requested format.
pub fn render(report: &Report, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(report)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| Error::Structural(format!("serialization failed: {}", e))),
        OutputFormat::Text => Ok(render_text(report)),
    }
}
