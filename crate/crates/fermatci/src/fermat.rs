//! q-Fermat complete intersections: the data model, validity and Jacobian
//! regularity certificates, the elemental extension step with its exact
//! identity checks, chain construction, and Frobenius reduction.

use crate::error::{Error, Result};
use crate::field::{
    checked_pow, rank_over_field, solve, FieldElement, FieldId, Form, IndependenceCertificate,
    RatFunc, TowerRegistry,
};

/// The data of a q-Fermat complete intersection: r forms
/// f_i = Σ_j c_ij·x_j^q in ℙ^N over a tower field, with q = p^e.
/// r = 0 stands for ℙ^N itself.
#[derive(Debug, Clone)]
pub struct FermatCI {
    pub field: FieldId,
    /// q = p^e.
    pub e: u32,
    /// Ambient projective dimension N.
    pub ambient_dim: usize,
    /// Codimension r with 0 ≤ r < N.
    pub codim: usize,
    /// r × (N+1) coefficient matrix.
    pub coeffs: Vec<Vec<FieldElement>>,
}

/// Bundled validity evidence: p-independence of all r(N+1) coefficients and
/// the coefficient-matrix rank check. Failed checks are reported, not thrown.
#[derive(Debug, Clone)]
pub struct ValidityCertificate {
    pub independence: Option<IndependenceCertificate>,
    pub coeff_rank: usize,
    pub expected_rank: usize,
    pub valid: bool,
}

/// The r×r minor of the Jacobian on the chart x_0 = 1, taken with respect to
/// the derivations dual to the column-0 coefficients. Regularity holds when
/// the minor is exactly the identity matrix.
#[derive(Debug, Clone)]
pub struct JacobianCertificate {
    /// Entry (i, i′) as a polynomial in the chart coordinates; for a valid
    /// input every entry is the constant δ_{i,i′}.
    pub minor: Vec<Vec<Form>>,
    pub is_identity: bool,
}

/// Result of the exact symbolic checks σ(s11⁻¹f₁) = g₁ and
/// σ(f_i) = s_{i0}·t10⁻¹·g₁ + g_i.
#[derive(Debug, Clone)]
pub struct IdentityCertificate {
    pub g1_matches: bool,
    pub row_matches: Vec<bool>,
    pub pass: bool,
}

/// One application of the elemental extension step to a valid CI, with its
/// certificates and both degree logs.
#[derive(Debug, Clone)]
pub struct ElementalStep {
    pub parent: FermatCI,
    /// Internal field l = k(c11^{1/q}, …, c1N^{1/q}).
    pub l: FieldId,
    /// External field k′ = l(t10^{1/q}).
    pub k_prime: FieldId,
    /// t10 = c11⁻¹·c10 in l.
    pub t10: FieldElement,
    /// (r−1) × N matrix of t_ij in l (rows i = 2..r, columns j = 1..N).
    pub t_matrix: Vec<Vec<FieldElement>>,
    /// Coefficients σ1⁻¹σ_j (j = 2..N) of the linear substitution
    /// x1 ↦ y1 − Σ σ1⁻¹σ_j y_j, as elements of l.
    pub sigma_coeffs: Vec<FieldElement>,
    /// Coefficient of the normalization map y0 ↦ −t10^{−1/q}·y1 in k′.
    pub normalization_coeff: FieldElement,
    pub child: FermatCI,
    /// log_p [l:k] = N·e.
    pub internal_degree_log: u64,
    /// log_p [k′:l] = e.
    pub external_degree_log: u64,
    pub identities: IdentityCertificate,
    /// Independence of {t10} ∪ T over l; rank must be N(r−1)+1.
    pub independence: IndependenceCertificate,
    pub child_validity: ValidityCertificate,
}

/// A full chain of elemental steps from a CI down to projective space.
#[derive(Debug, Clone)]
pub struct ExtensionChain {
    pub root: FermatCI,
    pub steps: Vec<ElementalStep>,
    pub terminal_field: FieldId,
    /// Dimension of the terminal projective space ℙ^{N−r}.
    pub terminal_dim: usize,
}

/// One stage of a Frobenius reduction trail: the reduced CI over k^{1/p^d}
/// with its re-verified validity certificate.
#[derive(Debug, Clone)]
pub struct ReductionStage {
    pub d: u32,
    pub ci: FermatCI,
    pub validity: ValidityCertificate,
    /// Set when the defining forms have become linear (e − d = 0), so the
    /// reduced locus is ℙ^{N−r}.
    pub linear: bool,
}

impl FermatCI {
    /// Structural construction; use [`validate`] for the certificates.
    pub fn new(
        registry: &TowerRegistry,
        field: FieldId,
        e: u32,
        ambient_dim: usize,
        codim: usize,
        coeffs: Vec<Vec<FieldElement>>,
    ) -> Result<Self> {
        if codim >= ambient_dim {
            return Err(Error::Structural(format!(
                "codimension {} must be smaller than the ambient dimension {}",
                codim, ambient_dim
            )));
        }
        if coeffs.len() != codim {
            return Err(Error::Structural(format!(
                "expected {} coefficient rows, got {}",
                codim,
                coeffs.len()
            )));
        }
        for (i, row) in coeffs.iter().enumerate() {
            if row.len() != ambient_dim + 1 {
                return Err(Error::RaggedMatrix {
                    row: i,
                    got: row.len(),
                    expected: ambient_dim + 1,
                });
            }
        }
        let fld = registry.field(field)?;
        for row in &coeffs {
            for c in row {
                if c.field != field {
                    return Err(Error::WrongField {
                        expected: field.0,
                        got: c.field.0,
                    });
                }
                if c.value.nvars() != fld.gens.len() {
                    return Err(Error::NvarsMismatch(fld.gens.len(), c.value.nvars()));
                }
            }
        }
        Ok(FermatCI {
            field,
            e,
            ambient_dim,
            codim,
            coeffs,
        })
    }

    pub fn prime(&self, registry: &TowerRegistry) -> Result<u64> {
        Ok(registry.field(self.field)?.prime.p())
    }

    /// q = p^e.
    pub fn q(&self, registry: &TowerRegistry) -> Result<u64> {
        checked_pow(self.prime(registry)?, self.e)
    }

    /// Defining forms are linear (q = 1), so the locus is ℙ^{N−r}.
    pub fn is_linear(&self) -> bool {
        self.e == 0
    }

    /// Materialize f_i = Σ_j c_ij·x_j^q as a form over the base field.
    pub fn form(&self, registry: &TowerRegistry, row: usize) -> Result<Form> {
        let fld = registry.field(self.field)?;
        let q = u32::try_from(self.q(registry)?).map_err(|_| Error::Overflow("q".into()))?;
        let nx = self.ambient_dim + 1;
        let mut f = Form::zero(fld.prime, nx, fld.gens.len());
        for (j, c) in self.coeffs[row].iter().enumerate() {
            f = f.add(&Form::coord_power(fld.prime, nx, c.value.clone(), j, q)?)?;
        }
        Ok(f)
    }
}

/// A CI with a generic coefficient matrix of fresh transcendentals: the base
/// field is 𝔽_p(a0..aN, b0..bN, …) with one letter per row, and c_ij is the
/// corresponding generator.
pub fn generic_ci(
    registry: &mut TowerRegistry,
    p: u64,
    e: u32,
    ambient_dim: usize,
    codim: usize,
) -> Result<FermatCI> {
    let prime = crate::field::PrimeField::new(p)?;
    let n1 = ambient_dim + 1;
    let mut gens = Vec::with_capacity(codim * n1);
    for i in 0..codim {
        let letter = (b'a' + i as u8) as char;
        for j in 0..n1 {
            gens.push(format!("{}{}", letter, j));
        }
    }
    let field = registry.base_field(prime, gens);
    let mut coeffs = Vec::with_capacity(codim);
    for i in 0..codim {
        let mut row = Vec::with_capacity(n1);
        for j in 0..n1 {
            row.push(registry.gen_element(field, i * n1 + j)?);
        }
        coeffs.push(row);
    }
    FermatCI::new(registry, field, e, ambient_dim, codim, coeffs)
}

/// Certify Definition-level validity: p-independence of all r(N+1)
/// coefficients and coefficient-matrix rank r. r = 0 is trivially valid.
pub fn validate(registry: &TowerRegistry, ci: &FermatCI) -> Result<ValidityCertificate> {
    if ci.codim == 0 {
        return Ok(ValidityCertificate {
            independence: None,
            coeff_rank: 0,
            expected_rank: 0,
            valid: true,
        });
    }
    let flat: Vec<FieldElement> = ci.coeffs.iter().flatten().cloned().collect();
    let independence = registry.p_independence(ci.field, &flat)?;
    let matrix: Vec<Vec<RatFunc>> = ci
        .coeffs
        .iter()
        .map(|row| row.iter().map(|c| c.value.clone()).collect())
        .collect();
    let coeff_rank = rank_over_field(&matrix)?;
    let valid = independence.independent && coeff_rank == ci.codim;
    Ok(ValidityCertificate {
        independence: Some(independence),
        coeff_rank,
        expected_rank: ci.codim,
        valid,
    })
}

/// Regularity certificate on the chart x_0 = 1: construct the derivations
/// dual to the column-0 coefficients (solving against the full coefficient
/// Jacobian, which exists exactly when the coefficients are p-independent),
/// apply them to the dehomogenized forms, and verify the resulting r×r minor
/// is the identity matrix.
pub fn jacobian_regularity_certificate(
    registry: &TowerRegistry,
    ci: &FermatCI,
) -> Result<JacobianCertificate> {
    if ci.codim == 0 {
        return Ok(JacobianCertificate {
            minor: Vec::new(),
            is_identity: true,
        });
    }
    let fld = registry.field(ci.field)?;
    let ngens = fld.gens.len();
    let n1 = ci.ambient_dim + 1;
    let q = u32::try_from(ci.q(registry)?).map_err(|_| Error::Overflow("q".into()))?;

    // Full coefficient Jacobian: one row per coefficient (row-major), one
    // column per generator.
    let mut jac: Vec<Vec<RatFunc>> = Vec::with_capacity(ci.codim * n1);
    for row in &ci.coeffs {
        for c in row {
            let mut r = Vec::with_capacity(ngens);
            for v in 0..ngens {
                r.push(c.value.partial(v)?);
            }
            jac.push(r);
        }
    }

    let mut minor: Vec<Vec<Form>> = vec![Vec::with_capacity(ci.codim); ci.codim];
    let mut is_identity = true;
    for iprime in 0..ci.codim {
        // Derivation dual to c_{iprime,0}: λ with jac·λ = e_{(iprime,0)}.
        let mut rhs = vec![RatFunc::zero(fld.prime, ngens); ci.codim * n1];
        rhs[iprime * n1] = RatFunc::one(fld.prime, ngens);
        let lambda = match solve(&jac, &rhs)? {
            Some(l) => l,
            None => {
                // Dual derivation does not exist; record a failed entry.
                is_identity = false;
                for row in minor.iter_mut() {
                    row.push(Form::zero(fld.prime, n1, ngens));
                }
                continue;
            }
        };
        // Apply the derivation to each dehomogenized form
        // f_i|_{x0=1} = c_i0 + Σ_{j≥1} c_ij·x_j^q; x-powers are q-th powers,
        // so the derivation only acts on the coefficients.
        for i in 0..ci.codim {
            let mut entry = Form::zero(fld.prime, n1, ngens);
            for j in 0..n1 {
                let mut dc = RatFunc::zero(fld.prime, ngens);
                for (v, lv) in lambda.iter().enumerate() {
                    dc = dc.add(&lv.mul(&jac[i * n1 + j][v])?)?;
                }
                if dc.is_zero() {
                    continue;
                }
                let t = if j == 0 {
                    Form::constant(fld.prime, n1, dc)
                } else {
                    Form::coord_power(fld.prime, n1, dc, j, q)?
                };
                entry = entry.add(&t)?;
            }
            let expect = if i == iprime {
                Form::constant(fld.prime, n1, RatFunc::one(fld.prime, ngens))
            } else {
                Form::zero(fld.prime, n1, ngens)
            };
            if entry != expect {
                is_identity = false;
            }
            minor[i].push(entry);
        }
    }
    Ok(JacobianCertificate { minor, is_identity })
}

fn root_name(registry: &TowerRegistry, field: FieldId, slot_hint: &str) -> Result<String> {
    let gens = registry.gen_names(field)?;
    let mut name = format!("{}'", slot_hint);
    while gens.contains(&name) {
        name.push('\'');
    }
    Ok(name)
}

/// The elemental extension step applied to a valid CI with r ≥ 1, e ≥ 1.
/// Aborts with a diagnostic when any certificate fails.
pub fn elemental_step(registry: &mut TowerRegistry, ci: &FermatCI) -> Result<ElementalStep> {
    if ci.codim == 0 {
        return Err(Error::Structural(
            "elemental step needs codimension at least one".into(),
        ));
    }
    if ci.e == 0 {
        return Err(Error::Structural(
            "elemental step needs e ≥ 1; a linear CI is already projective space".into(),
        ));
    }
    let validity = validate(registry, ci)?;
    if !validity.valid {
        return Err(Error::Certificate(format!(
            "parent CI is not valid (independence rank {}, coefficient rank {} of {})",
            validity
                .independence
                .as_ref()
                .map(|c| c.rank)
                .unwrap_or(0),
            validity.coeff_rank,
            validity.expected_rank
        )));
    }
    if ci.coeffs[0][1].value.is_zero() {
        return Err(Error::Certificate("pivot coefficient c11 is zero".into()));
    }

    let n = ci.ambient_dim;
    let r = ci.codim;
    let e = ci.e;
    let prime = registry.field(ci.field)?.prime;
    let q = u32::try_from(ci.q(registry)?).map_err(|_| Error::Overflow("q".into()))?;

    // (1) l = k(c11^{1/q}, …, c1N^{1/q}); roots are named after the
    // generator slots they replace.
    let targets: Vec<FieldElement> = (1..=n).map(|j| ci.coeffs[0][j].clone()).collect();
    let gens_of_k = registry.gen_names(ci.field)?.to_vec();
    let assoc = registry.associate_target_generators(ci.field, &targets)?;
    let names: Vec<String> = assoc
        .iter()
        .map(|&v| root_name(registry, ci.field, &gens_of_k[v]))
        .collect::<Result<_>>()?;
    let (l, slots) = registry.adjoin_qth_roots(ci.field, &targets, e, &names)?;
    let ngens_l = registry.gen_names(l)?.len();

    // σ_j = c_1j^{1/q} as elements of l.
    let sigma: Vec<RatFunc> = slots
        .iter()
        .map(|&v| RatFunc::gen(prime, ngens_l, v))
        .collect::<Result<_>>()?;

    // (2) the t-coefficients over l.
    let lift = |c: &FieldElement| registry.lift_to_child(c, l);
    let c10 = lift(&ci.coeffs[0][0])?;
    let sigma1_q = sigma[0].pow(q)?;
    let t10 = FieldElement::new(l, c10.value.mul(&sigma1_q.inv()?)?);
    let mut t_matrix: Vec<Vec<FieldElement>> = Vec::with_capacity(r - 1);
    for i in 1..r {
        let ci0 = lift(&ci.coeffs[i][0])?;
        let ci1 = lift(&ci.coeffs[i][1])?;
        let mut row = Vec::with_capacity(n);
        // t_i1 = c_i1 − c_i0·t10^{-1}
        row.push(FieldElement::new(
            l,
            ci1.value.sub(&ci0.value.mul(&t10.value.inv()?)?)?,
        ));
        for j in 2..=n {
            let cij = lift(&ci.coeffs[i][j])?;
            let c1j_img = sigma[j - 1].pow(q)?;
            // t_ij = c_ij − c_i1·c11^{-1}·c1j
            let sub = ci1.value.mul(&sigma1_q.inv()?)?.mul(&c1j_img)?;
            row.push(FieldElement::new(l, cij.value.sub(&sub)?));
        }
        t_matrix.push(row);
    }

    // (3) symbolic identities in l[y0..yN].
    let nx = n + 1;
    let lift_form = |row: usize| -> Result<Form> {
        let f = ci.form(registry, row)?;
        f.map_coeffs(ngens_l, |c| {
            Ok(registry
                .lift_to_child(&FieldElement::new(ci.field, c.clone()), l)?
                .value)
        })
    };
    // x1 ↦ y1 − Σ_{j≥2} σ1^{-1}σ_j·y_j
    let mut x1_image = Form::coord_power(prime, nx, RatFunc::one(prime, ngens_l), 1, 1)?;
    let mut sigma_coeffs = Vec::with_capacity(n.saturating_sub(1));
    for j in 2..=n {
        let cj = sigma[0].inv()?.mul(&sigma[j - 1])?;
        sigma_coeffs.push(FieldElement::new(l, cj.clone()));
        x1_image = x1_image.sub(&Form::coord_power(prime, nx, cj, j, 1)?)?;
    }
    let mut images: Vec<Option<Form>> = vec![None; nx];
    images[1] = Some(x1_image);

    // g_1 = t10·y0^q + y1^q
    let g1 = Form::coord_power(prime, nx, t10.value.clone(), 0, q)?.add(&Form::coord_power(
        prime,
        nx,
        RatFunc::one(prime, ngens_l),
        1,
        q,
    )?)?;
    let f1 = lift_form(0)?;
    let lhs1 = f1.scale(&sigma1_q.inv()?)?.substitute(&images)?;
    let g1_matches = lhs1 == g1;

    let mut row_matches = Vec::with_capacity(r.saturating_sub(1));
    for i in 1..r {
        let fi = lift_form(i)?;
        let lhs = fi.substitute(&images)?;
        // g_i = Σ_{j=1..N} t_ij·y_j^q
        let mut gi = Form::zero(prime, nx, ngens_l);
        for j in 1..=n {
            gi = gi.add(&Form::coord_power(
                prime,
                nx,
                t_matrix[i - 1][j - 1].value.clone(),
                j,
                q,
            )?)?;
        }
        let ci0 = lift(&ci.coeffs[i][0])?;
        let factor = ci0.value.mul(&t10.value.inv()?)?;
        let rhs = g1.scale(&factor)?.add(&gi)?;
        row_matches.push(lhs == rhs);
    }
    let identities = IdentityCertificate {
        g1_matches,
        pass: g1_matches && row_matches.iter().all(|&b| b),
        row_matches,
    };
    if !identities.pass {
        return Err(Error::Certificate(format!(
            "elemental step identity failed (g1: {}, rows: {:?})",
            identities.g1_matches, identities.row_matches
        )));
    }

    // (6) independence of {t10} ∪ T over l with rank N(r−1)+1.
    let mut tested = vec![t10.clone()];
    tested.extend(t_matrix.iter().flatten().cloned());
    let independence = registry.p_independence(l, &tested)?;
    let expected_rank = n * (r - 1) + 1;
    if !independence.independent || independence.rank != expected_rank {
        return Err(Error::Certificate(format!(
            "independence of {{t10}} ∪ T failed: rank {} expected {}",
            independence.rank, expected_rank
        )));
    }

    // (4) k′ = l(t10^{1/q}) by swapping the associated generator for τ.
    let t10_slot = registry.associate_target_generators(l, std::slice::from_ref(&t10))?[0];
    let tau_name = root_name(registry, l, &registry.gen_names(l)?[t10_slot].clone())?;
    let (k_prime, tau_slots) = registry.adjoin_qth_roots(l, &[t10.clone()], e, &[tau_name])?;
    let ngens_kp = registry.gen_names(k_prime)?.len();
    let tau = RatFunc::gen(prime, ngens_kp, tau_slots[0])?;
    let normalization_coeff = FieldElement::new(k_prime, tau.inv()?.neg());

    // (5) the child CI over k′ with coefficient matrix T.
    let mut child_coeffs = Vec::with_capacity(r - 1);
    for row in &t_matrix {
        let mut out = Vec::with_capacity(n);
        for t in row {
            out.push(registry.lift_to_child(t, k_prime)?);
        }
        child_coeffs.push(out);
    }
    let child = FermatCI::new(registry, k_prime, e, n - 1, r - 1, child_coeffs)?;
    let child_validity = validate(registry, &child)?;
    if !child_validity.valid {
        return Err(Error::Certificate(format!(
            "child CI invalid: independence rank {:?}, coefficient rank {} of {}",
            child_validity.independence.as_ref().map(|c| c.rank),
            child_validity.coeff_rank,
            child_validity.expected_rank
        )));
    }

    Ok(ElementalStep {
        parent: ci.clone(),
        l,
        k_prime,
        t10,
        t_matrix,
        sigma_coeffs,
        normalization_coeff,
        child,
        internal_degree_log: n as u64 * e as u64,
        external_degree_log: e as u64,
        identities,
        independence,
        child_validity,
    })
}

/// Apply the elemental step r times, ending at ℙ^{N−r} over the final field.
pub fn build_chain(registry: &mut TowerRegistry, ci: &FermatCI) -> Result<ExtensionChain> {
    let validity = validate(registry, ci)?;
    if !validity.valid {
        return Err(Error::Certificate("chain root CI is not valid".into()));
    }
    let mut steps = Vec::with_capacity(ci.codim);
    let mut current = ci.clone();
    while current.codim > 0 {
        let step = elemental_step(registry, &current)?;
        let next = step.child.clone();
        steps.push(step);
        current = next;
    }
    let total: u64 = steps.iter().map(|s| s.external_degree_log).sum();
    if total != ci.e as u64 * ci.codim as u64 {
        return Err(Error::Certificate(format!(
            "external degree sum {} differs from e·r = {}",
            total,
            ci.e as u64 * ci.codim as u64
        )));
    }
    Ok(ExtensionChain {
        root: ci.clone(),
        steps,
        terminal_field: current.field,
        terminal_dim: ci.ambient_dim - ci.codim,
    })
}

/// Reduce over k^{1/p^d}: every generator g is replaced by a fresh one with
/// g ↦ (new)^{p^d}, coefficients become their p^d-th roots, and the exponent
/// drops to e − d. At d = e the forms are linear and the reduced locus is
/// ℙ^{N−r}. Validity is re-verified.
pub fn frobenius_reduction(
    registry: &mut TowerRegistry,
    ci: &FermatCI,
    d: u32,
) -> Result<ReductionStage> {
    if d > ci.e {
        return Err(Error::Structural(format!(
            "reduction depth {} exceeds e = {}",
            d, ci.e
        )));
    }
    if d == 0 {
        let validity = validate(registry, ci)?;
        return Ok(ReductionStage {
            d,
            ci: ci.clone(),
            linear: ci.is_linear(),
            validity,
        });
    }
    let fld = registry.field(ci.field)?.clone();
    let ngens = fld.gens.len();
    let targets: Vec<FieldElement> = (0..ngens)
        .map(|v| registry.gen_element(ci.field, v))
        .collect::<Result<_>>()?;
    let names: Vec<String> = fld.gens.iter().map(|g| format!("{}~", g)).collect();
    let (root_field, _) = registry.adjoin_qth_roots(ci.field, &targets, d, &names)?;

    let mut coeffs = Vec::with_capacity(ci.codim);
    for row in &ci.coeffs {
        let mut out = Vec::with_capacity(row.len());
        for c in row {
            let lifted = registry.lift_to_child(c, root_field)?;
            let rooted = lifted.value.pth_root(d).ok_or_else(|| Error::NotAPower {
                exponent: d,
                what: "lifted coefficient".into(),
            })?;
            out.push(FieldElement::new(root_field, rooted));
        }
        coeffs.push(out);
    }
    let reduced = FermatCI::new(
        registry,
        root_field,
        ci.e - d,
        ci.ambient_dim,
        ci.codim,
        coeffs,
    )?;
    let validity = validate(registry, &reduced)?;
    Ok(ReductionStage {
        d,
        linear: reduced.is_linear(),
        ci: reduced,
        validity,
    })
}

/// Adjoin one fresh transcendental u per row and multiply the row through,
/// turning a matrix with a shared unit column into a strict instance. Input
/// with no unit entries is returned unchanged.
pub fn homogenize_parameters(registry: &mut TowerRegistry, ci: &FermatCI) -> Result<FermatCI> {
    let unit_cols: Vec<Vec<usize>> = ci
        .coeffs
        .iter()
        .map(|row| {
            (0..row.len())
                .filter(|&j| row[j].value.is_one())
                .collect()
        })
        .collect();
    if unit_cols.iter().all(|cols| cols.is_empty()) {
        return Ok(ci.clone());
    }
    if unit_cols.iter().any(|cols| cols.is_empty()) {
        return Err(Error::Structural(
            "some rows have a unit coefficient and some do not".into(),
        ));
    }
    let mut common: Vec<usize> = unit_cols[0].clone();
    for cols in &unit_cols[1..] {
        common.retain(|c| cols.contains(c));
    }
    if common.len() != 1 {
        return Err(Error::Structural(format!(
            "ambiguous unit column: candidates {:?}",
            common
        )));
    }

    let existing = registry.gen_names(ci.field)?.to_vec();
    let names: Vec<String> = (0..ci.codim)
        .map(|i| {
            let mut n = format!("u{}", i);
            while existing.contains(&n) {
                n.push('_');
            }
            n
        })
        .collect();
    let big = registry.extend_with_transcendentals(ci.field, &names)?;
    let ngens_big = registry.gen_names(big)?.len();
    let prime = registry.field(big)?.prime;

    let mut coeffs = Vec::with_capacity(ci.codim);
    for (i, row) in ci.coeffs.iter().enumerate() {
        let u = RatFunc::gen(prime, ngens_big, ngens_big - ci.codim + i)?;
        let mut out = Vec::with_capacity(row.len());
        for c in row {
            let lifted = registry.lift_to_child(c, big)?;
            out.push(FieldElement::new(big, lifted.value.mul(&u)?));
        }
        coeffs.push(out);
    }
    FermatCI::new(registry, big, ci.e, ci.ambient_dim, ci.codim, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn example_fermat22(registry: &mut TowerRegistry) -> FermatCI {
        // Two quadrics in ℙ³ over 𝔽_2(s0..s3, t0..t3).
        let prime = PrimeField::new(2).unwrap();
        let gens: Vec<String> = (0..4)
            .map(|j| format!("s{}", j))
            .chain((0..4).map(|j| format!("t{}", j)))
            .collect();
        let field = registry.base_field(prime, gens);
        let coeffs: Vec<Vec<FieldElement>> = (0..2)
            .map(|i| {
                (0..4)
                    .map(|j| registry.gen_element(field, i * 4 + j).unwrap())
                    .collect()
            })
            .collect();
        FermatCI::new(registry, field, 1, 3, 2, coeffs).unwrap()
    }

    #[test]
    fn validate_generic_hypersurface() {
        let mut reg = TowerRegistry::new();
        let ci = generic_ci(&mut reg, 2, 1, 2, 1).unwrap();
        let cert = validate(&reg, &ci).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.coeff_rank, 1);
        assert_eq!(cert.independence.unwrap().rank, 3);
    }

    #[test]
    fn validate_fermat22() {
        let mut reg = TowerRegistry::new();
        let ci = example_fermat22(&mut reg);
        let cert = validate(&reg, &ci).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.independence.unwrap().rank, 8);
        assert_eq!(cert.coeff_rank, 2);
    }

    #[test]
    fn validate_reports_duplicate_coefficients() {
        // (s, s, t) over 𝔽_2(s,t): independence rank 2 < 3, reported not thrown.
        let prime = PrimeField::new(2).unwrap();
        let mut reg = TowerRegistry::new();
        let field = reg.base_field(prime, vec!["s".into(), "t".into()]);
        let s = reg.gen_element(field, 0).unwrap();
        let t = reg.gen_element(field, 1).unwrap();
        let ci = FermatCI::new(&reg, field, 1, 2, 1, vec![vec![s.clone(), s, t]]).unwrap();
        let cert = validate(&reg, &ci).unwrap();
        assert!(!cert.valid);
        assert_eq!(cert.independence.unwrap().rank, 2);
    }

    #[test]
    fn jacobian_certificate_is_identity() {
        let mut reg = TowerRegistry::new();
        let ci = generic_ci(&mut reg, 2, 1, 2, 1).unwrap();
        let cert = jacobian_regularity_certificate(&reg, &ci).unwrap();
        assert!(cert.is_identity);
        assert_eq!(cert.minor.len(), 1);

        let ci22 = example_fermat22(&mut reg);
        let cert22 = jacobian_regularity_certificate(&reg, &ci22).unwrap();
        assert!(cert22.is_identity);
        assert_eq!(cert22.minor.len(), 2);
    }

    #[test]
    fn jacobian_certificate_vacuous_for_projective_space() {
        let prime = PrimeField::new(3).unwrap();
        let mut reg = TowerRegistry::new();
        let field = reg.base_field(prime, vec!["s".into()]);
        let ci = FermatCI::new(&reg, field, 1, 2, 0, vec![]).unwrap();
        let cert = jacobian_regularity_certificate(&reg, &ci).unwrap();
        assert!(cert.is_identity);
        assert!(cert.minor.is_empty());
    }

    #[test]
    fn elemental_step_on_plane_hypersurface() {
        // (2,1,2,1) with coefficients (a0,a1,a2): l = 𝔽_2(a0,σ1,σ2),
        // t10 = a0/σ1², child is ℙ¹ over k′, external degree log 1.
        let mut reg = TowerRegistry::new();
        let ci = generic_ci(&mut reg, 2, 1, 2, 1).unwrap();
        let step = elemental_step(&mut reg, &ci).unwrap();
        assert_eq!(step.external_degree_log, 1);
        assert_eq!(step.internal_degree_log, 2);
        assert_eq!(step.child.codim, 0);
        assert_eq!(step.child.ambient_dim, 1);
        assert!(step.identities.pass);

        let prime = PrimeField::new(2).unwrap();
        let sigma1 = RatFunc::gen(prime, 3, 1).unwrap();
        let a0 = RatFunc::gen(prime, 3, 0).unwrap();
        assert_eq!(
            step.t10.value,
            a0.div(&sigma1.pow(2).unwrap()).unwrap()
        );
        assert_eq!(reg.gen_names(step.l).unwrap(), &["a0", "a1'", "a2'"]);
        assert_eq!(reg.gen_names(step.k_prime).unwrap(), &["a0'", "a1'", "a2'"]);
    }

    #[test]
    fn elemental_step_fermat22_certificates() {
        // First step of the (2,2)-intersection: child is a 2-Fermat
        // hypersurface in ℙ² and {t10} ∪ T has rank 4 over l.
        let mut reg = TowerRegistry::new();
        let ci = example_fermat22(&mut reg);
        let step = elemental_step(&mut reg, &ci).unwrap();
        assert_eq!(step.child.ambient_dim, 2);
        assert_eq!(step.child.codim, 1);
        assert_eq!(step.t_matrix.len(), 1);
        assert_eq!(step.t_matrix[0].len(), 3);
        assert_eq!(step.independence.rank, 4);
        assert!(step.independence.independent);
        assert!(step.child_validity.valid);
        assert_eq!(step.internal_degree_log, 3);
    }

    #[test]
    fn elemental_step_uses_qth_power_expansion() {
        // q = 4 (p = 2, e = 2): the identity check relies on
        // (x1 + c^{1/q}x2)^q = x1^q + c·x2^q.
        let mut reg = TowerRegistry::new();
        let ci = generic_ci(&mut reg, 2, 2, 2, 1).unwrap();
        let step = elemental_step(&mut reg, &ci).unwrap();
        assert!(step.identities.pass);
        assert_eq!(step.external_degree_log, 2);
        assert_eq!(step.internal_degree_log, 4);
    }

    #[test]
    fn elemental_step_rejects_linear_input() {
        let mut reg = TowerRegistry::new();
        let ci = generic_ci(&mut reg, 2, 0, 2, 1).unwrap();
        assert!(matches!(
            elemental_step(&mut reg, &ci),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn build_chain_lengths_and_terminals() {
        let mut reg = TowerRegistry::new();
        let ci = generic_ci(&mut reg, 2, 1, 2, 1).unwrap();
        let chain = build_chain(&mut reg, &ci).unwrap();
        assert_eq!(chain.steps.len(), 1);
        assert_eq!(chain.terminal_dim, 1);

        let mut reg = TowerRegistry::new();
        let ci = example_fermat22(&mut reg);
        let chain = build_chain(&mut reg, &ci).unwrap();
        assert_eq!(chain.steps.len(), 2);
        assert_eq!(chain.terminal_dim, 1);

        // r = 0: empty chain, terminal ℙ^N.
        let prime = PrimeField::new(2).unwrap();
        let mut reg = TowerRegistry::new();
        let field = reg.base_field(prime, vec!["s".into()]);
        let ci = FermatCI::new(&reg, field, 1, 3, 0, vec![]).unwrap();
        let chain = build_chain(&mut reg, &ci).unwrap();
        assert!(chain.steps.is_empty());
        assert_eq!(chain.terminal_dim, 3);
    }

    #[test]
    fn frobenius_reduction_halves_exponent() {
        // (p,e) = (2,2), d = 1: a 2-Fermat CI with coefficients σ where
        // σ² = original coefficient.
        let mut reg = TowerRegistry::new();
        let ci = generic_ci(&mut reg, 2, 2, 2, 1).unwrap();
        let stage = frobenius_reduction(&mut reg, &ci, 1).unwrap();
        assert_eq!(stage.ci.e, 1);
        assert!(!stage.linear);
        assert!(stage.validity.valid);
        for (j, c) in stage.ci.coeffs[0].iter().enumerate() {
            let lifted = reg.lift_to_child(&ci.coeffs[0][j], stage.ci.field).unwrap();
            assert_eq!(c.value.frobenius_power(1).unwrap(), lifted.value);
        }
    }

    #[test]
    fn frobenius_reduction_identity_and_terminal() {
        let mut reg = TowerRegistry::new();
        let ci = generic_ci(&mut reg, 2, 1, 2, 1).unwrap();
        let stage0 = frobenius_reduction(&mut reg, &ci, 0).unwrap();
        assert_eq!(stage0.ci.field, ci.field);
        assert!(!stage0.linear);

        let stage1 = frobenius_reduction(&mut reg, &ci, 1).unwrap();
        assert!(stage1.linear);
        assert_eq!(stage1.ci.e, 0);
        assert!(stage1.validity.valid);
    }

    #[test]
    fn frobenius_reduction_composes() {
        // Reducing by d1 then d2 equals reducing by d1+d2 up to renaming.
        let mut reg = TowerRegistry::new();
        let ci = generic_ci(&mut reg, 3, 2, 2, 1).unwrap();
        let once = frobenius_reduction(&mut reg, &ci, 1).unwrap();
        let twice = frobenius_reduction(&mut reg, &once.ci, 1).unwrap();
        let direct = frobenius_reduction(&mut reg, &ci, 2).unwrap();
        assert_eq!(twice.ci.e, direct.ci.e);
        for (r1, r2) in twice.ci.coeffs.iter().zip(&direct.ci.coeffs) {
            for (c1, c2) in r1.iter().zip(r2) {
                assert_eq!(c1.value, c2.value);
            }
        }
    }

    #[test]
    fn homogenize_unit_column() {
        // (s, t, 1) over 𝔽_2(s,t) → (u·s, u·t, u) over 𝔽_2(s,t,u), valid.
        let prime = PrimeField::new(2).unwrap();
        let mut reg = TowerRegistry::new();
        let field = reg.base_field(prime, vec!["s".into(), "t".into()]);
        let s = reg.gen_element(field, 0).unwrap();
        let t = reg.gen_element(field, 1).unwrap();
        let one = reg.constant(field, 1).unwrap();
        let ci = FermatCI::new(&reg, field, 1, 2, 1, vec![vec![s, t, one]]).unwrap();
        let strict = homogenize_parameters(&mut reg, &ci).unwrap();
        assert_eq!(reg.gen_names(strict.field).unwrap(), &["s", "t", "u0"]);
        let cert = validate(&reg, &strict).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.independence.unwrap().rank, 3);

        let u = RatFunc::gen(prime, 3, 2).unwrap();
        assert_eq!(strict.coeffs[0][2].value, u);
    }

    #[test]
    fn homogenize_strict_input_is_identity() {
        let mut reg = TowerRegistry::new();
        let ci = generic_ci(&mut reg, 3, 1, 2, 1).unwrap();
        let out = homogenize_parameters(&mut reg, &ci).unwrap();
        assert_eq!(out.field, ci.field);
        assert_eq!(out.coeffs[0][1].value, ci.coeffs[0][1].value);
    }

    #[test]
    fn homogenize_plane_cubic_shape() {
        // (s, t, 1) over 𝔽_3 with e = 1: strict 3-Fermat plane cubic data.
        let prime = PrimeField::new(3).unwrap();
        let mut reg = TowerRegistry::new();
        let field = reg.base_field(prime, vec!["s".into(), "t".into()]);
        let s = reg.gen_element(field, 0).unwrap();
        let t = reg.gen_element(field, 1).unwrap();
        let one = reg.constant(field, 1).unwrap();
        let ci = FermatCI::new(&reg, field, 1, 2, 1, vec![vec![s, t, one]]).unwrap();
        let strict = homogenize_parameters(&mut reg, &ci).unwrap();
        let cert = validate(&reg, &strict).unwrap();
        assert!(cert.valid);
        assert_eq!(strict.e, 1);
        assert_eq!(strict.prime(&reg).unwrap(), 3);
    }
}
