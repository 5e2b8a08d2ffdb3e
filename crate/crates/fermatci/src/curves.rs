//! Curve-level arithmetic: genus of Fermat CI curves, the genus-change
//! identity, geometric-integrality criteria, the conic classifier, genus-one
//! constraint tables and degree bounds, and the explicit decomposition
//! family for the plane p-Fermat curve.

use crate::error::{Error, Result};
use crate::field::{
    eval_ratfunc_at, FieldElement, FieldId, Form, IndependenceCertificate, PrimeField, RatFunc,
    RebaseGen, TowerRegistry,
};
use num_rational::Ratio;
use num_traits::Signed;

/// The genus-change identity solved for the conductor degree sum:
/// (p−1)·Σ deg D_i = (2g_X−2)/p^ε − (2g_Y−2).
#[derive(Debug, Clone)]
pub struct GenusChangeCheck {
    pub p: u64,
    pub epsilon: u64,
    pub gamma: u64,
    pub g_x: u64,
    pub g_y: u64,
    /// Solved Σ deg D_i as an exact rational.
    pub sum_deg: Ratio<i64>,
    pub consistent: bool,
}

/// Genus of a q-Fermat complete-intersection curve (r = N−1 forms of degree
/// q in ℙ^N): adjunction gives 2g−2 = q^{N−1}·((N−1)q − (N+1)).
pub fn ci_curve_genus(p: u64, e: u32, ambient_dim: usize, codim: usize) -> Result<u64> {
    if codim + 1 != ambient_dim {
        return Err(Error::Structural(format!(
            "not a curve: r = {} must equal N−1 = {}",
            codim,
            ambient_dim - 1
        )));
    }
    let q = p
        .checked_pow(e)
        .ok_or_else(|| Error::Overflow("q".into()))? as i64;
    let n = ambient_dim as i64;
    let deg_k = q
        .checked_pow(u32::try_from(n - 1).map_err(|_| Error::Overflow("N".into()))?)
        .ok_or_else(|| Error::Overflow("q^{N-1}".into()))?
        .checked_mul((n - 1) * q - (n + 1))
        .ok_or_else(|| Error::Overflow("2g-2".into()))?;
    debug_assert_eq!(deg_k.rem_euclid(2), 0);
    let g = (deg_k + 2) / 2;
    u64::try_from(g).map_err(|_| Error::Structural(format!("negative genus {}", g)))
}

/// Solve the genus-change identity for the conductor degree sum and check
/// consistency: the division by p^ε must be exact, and the sum must be a
/// positive integer at least γ. Requires γ ≥ 1 (the non-smooth hypothesis).
pub fn genus_change_check(
    p: u64,
    epsilon: u64,
    gamma: u64,
    g_x: u64,
    g_y: u64,
) -> Result<GenusChangeCheck> {
    if gamma == 0 {
        return Err(Error::NotApplicable(
            "genus change needs a non-geometrically-normal curve (gamma >= 1)".into(),
        ));
    }
    let p_eps = (p as i64)
        .checked_pow(u32::try_from(epsilon).map_err(|_| Error::Overflow("epsilon".into()))?)
        .ok_or_else(|| Error::Overflow("p^epsilon".into()))?;
    let two_gx = 2 * g_x as i64 - 2;
    let two_gy = 2 * g_y as i64 - 2;
    let rhs = Ratio::new(two_gx, p_eps) - Ratio::from_integer(two_gy);
    let sum_deg = rhs / Ratio::from_integer(p as i64 - 1);
    let exact_division = two_gx % p_eps == 0;
    let consistent = exact_division
        && sum_deg.is_integer()
        && sum_deg.is_positive()
        && sum_deg >= Ratio::from_integer(gamma as i64);
    Ok(GenusChangeCheck {
        p,
        epsilon,
        gamma,
        g_x,
        g_y,
        sum_deg,
        consistent,
    })
}

/// Verdict of the geometric-integrality criteria, with the reason recorded
/// so reports stay auditable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegralityVerdict {
    GuaranteedGeometricallyIntegral { reason: String },
    Inconclusive,
}

/// Geometrically integral is guaranteed when p ∤ 2g−2, or when the genus is
/// below the threshold (p−1)(p−2)/2.
pub fn integrality_criteria(p: u64, g: u64) -> IntegralityVerdict {
    let two_g_minus_2 = 2 * g as i64 - 2;
    if two_g_minus_2.rem_euclid(p as i64) != 0 {
        return IntegralityVerdict::GuaranteedGeometricallyIntegral {
            reason: format!("p = {} does not divide 2g-2 = {}", p, two_g_minus_2),
        };
    }
    let threshold = (p - 1) * (p - 2) / 2;
    if g < threshold {
        return IntegralityVerdict::GuaranteedGeometricallyIntegral {
            reason: format!("genus {} below threshold (p-1)(p-2)/2 = {}", g, threshold),
        };
    }
    IntegralityVerdict::Inconclusive
}

/// A plane conic a·x² + b·y² + c·z² + α·yz + β·zx + γ·xy with coefficients
/// in one field of the tower.
#[derive(Debug, Clone)]
pub struct ConicForm {
    pub field: FieldId,
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub gamma_coef: FieldElement,
}

impl ConicForm {
    pub fn new(
        field: FieldId,
        coeffs: [FieldElement; 6],
    ) -> Result<Self> {
        for c in &coeffs {
            if c.field != field {
                return Err(Error::WrongField {
                    expected: field.0,
                    got: c.field.0,
                });
            }
        }
        let [a, b, c, alpha, beta, gamma_coef] = coeffs;
        Ok(ConicForm {
            field,
            a,
            b,
            c,
            alpha,
            beta,
            gamma_coef,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConicClassTag {
    /// p ≠ 2: a regular conic of dimension one is smooth.
    SmoothOddChar,
    /// p = 2 with a nonzero mixed term: smooth.
    SmoothMixedTerm,
    /// p = 2, diagonal, {a/c, b/c} of derivation rank 2: regular, not smooth,
    /// not geometrically reduced.
    NonSmoothRegular,
    /// Diagonal form is a square: not reduced.
    NotReduced,
    /// Derivation rank 1: the regularity/H⁰ = k assumption fails.
    IntermediateDegree2,
    NotApplicable(String),
}

/// What the classifier actually checked.
#[derive(Debug, Clone)]
pub struct ConicEvidence {
    /// Caller-supplied assertion that the conic is regular of dimension one.
    pub regular_dim_one_asserted: bool,
    pub mixed_terms_zero: Option<bool>,
    pub diagonal_nonzero: Option<bool>,
    pub independence: Option<IndependenceCertificate>,
}

#[derive(Debug, Clone)]
pub struct ConicClass {
    pub tag: ConicClassTag,
    pub evidence: ConicEvidence,
}

/// Classify a conic per characteristic and the derivation rank of
/// {a/c, b/c}: see [`ConicClassTag`] for the cases.
pub fn classify_conic(
    registry: &TowerRegistry,
    form: &ConicForm,
    regular_dim_one_asserted: bool,
) -> Result<ConicClass> {
    let p = registry.field(form.field)?.prime.p();
    let mut evidence = ConicEvidence {
        regular_dim_one_asserted,
        mixed_terms_zero: None,
        diagonal_nonzero: None,
        independence: None,
    };
    if p != 2 {
        return Ok(ConicClass {
            tag: ConicClassTag::SmoothOddChar,
            evidence,
        });
    }
    let mixed_zero = form.alpha.value.is_zero()
        && form.beta.value.is_zero()
        && form.gamma_coef.value.is_zero();
    evidence.mixed_terms_zero = Some(mixed_zero);
    if !mixed_zero {
        return Ok(ConicClass {
            tag: ConicClassTag::SmoothMixedTerm,
            evidence,
        });
    }
    let diag_nonzero =
        !form.a.value.is_zero() && !form.b.value.is_zero() && !form.c.value.is_zero();
    evidence.diagonal_nonzero = Some(diag_nonzero);
    if !diag_nonzero {
        return Ok(ConicClass {
            tag: ConicClassTag::NotApplicable(
                "diagonal conic with a vanishing coefficient is not regular of dimension one"
                    .into(),
            ),
            evidence,
        });
    }
    let a_over_c = FieldElement::new(form.field, form.a.value.div(&form.c.value)?);
    let b_over_c = FieldElement::new(form.field, form.b.value.div(&form.c.value)?);
    let cert = registry.p_independence(form.field, &[a_over_c, b_over_c])?;
    let tag = match cert.rank {
        2 => ConicClassTag::NonSmoothRegular,
        0 => ConicClassTag::NotReduced,
        1 => ConicClassTag::IntermediateDegree2,
        _ => unreachable!("rank of a 2-row jacobian is at most 2"),
    };
    evidence.independence = Some(cert);
    Ok(ConicClass { tag, evidence })
}

/// Allowed (γ, ℓ_F, m_F) triples for non-smooth regular genus-one curves:
/// only p ≤ 3 occurs, with two triples at p = 3 and five at p = 2.
pub fn genus_one_table_check(p: u64, gamma: u64, ell_f: u64, m_f: u64) -> bool {
    let triple = (gamma, ell_f, m_f);
    match p {
        3 => matches!(triple, (1, 1, 0) | (1, 1, 1)),
        2 => matches!(
            triple,
            (1, 1, 0) | (1, 1, 1) | (2, 1, 1) | (2, 2, 1) | (2, 2, 2)
        ),
        _ => false,
    }
}

/// Very-ample degree bound for non-smooth regular genus-one curves over a
/// field with [k:k^p] = p^M: 5·([k:k²])² for p = 2 and (5/3)·[k:k³] for
/// p = 3. No such curve exists for p ≥ 5.
pub fn genus_one_degree_bound(p: u64, deg_imperfection: u32) -> Result<Ratio<i64>> {
    if deg_imperfection < 1 {
        return Err(Error::Structural(
            "degree of imperfection must be at least one".into(),
        ));
    }
    let k_kp = (p as i64)
        .checked_pow(deg_imperfection)
        .ok_or_else(|| Error::Overflow("[k:k^p]".into()))?;
    match p {
        2 => {
            let sq = k_kp
                .checked_mul(k_kp)
                .ok_or_else(|| Error::Overflow("[k:k^2]^2".into()))?;
            Ok(Ratio::from_integer(5) * Ratio::from_integer(sq))
        }
        3 => Ok(Ratio::new(5, 3) * Ratio::from_integer(k_kp)),
        _ => Err(Error::NotApplicable(format!(
            "no non-smooth regular genus-one curve exists for p = {}",
            p
        ))),
    }
}

/// One candidate parameter rejected during the decomposition search.
#[derive(Debug, Clone)]
pub struct RejectedCandidate {
    pub a: RatFunc,
    pub reason: String,
}

/// The decomposition data for the plane curve s·x^p + t·y^p + z^p: the
/// intermediate field l = k((s−a^p t)^{1/p}), the verified coordinate-change
/// identity, the unique non-regular point's image fingerprint, and the
/// external field k′ = l(t^{1/p}).
#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub base_field: FieldId,
    /// The accepted parameter a as an element of the base field.
    pub a: FieldElement,
    pub l: FieldId,
    pub k_prime: FieldId,
    pub identity_pass: bool,
    /// Image [x : y : z] of the unique non-regular point, normalized so the
    /// first coordinate is 1, as elements of l.
    pub fingerprint: [FieldElement; 3],
    pub fingerprint_on_curve: bool,
    pub rejected: Vec<RejectedCandidate>,
    pub candidates_tried: usize,
    /// log_p [l:k] = log_p [k′:l] = 1.
    pub internal_degree_log: u64,
    pub external_degree_log: u64,
}

/// Candidate parameters in deterministic order: 0, 1, …, p−1, then graded
/// monomials in s, t (s-degree first within a grade).
fn candidate_params(prime: PrimeField, bound: usize) -> Vec<RatFunc> {
    let mut out = Vec::with_capacity(bound);
    for c in 0..prime.p() {
        if out.len() >= bound {
            return out;
        }
        out.push(RatFunc::constant(prime, 2, c as i64));
    }
    let mut degree = 1u32;
    while out.len() < bound {
        for i in (0..=degree).rev() {
            if out.len() >= bound {
                break;
            }
            let exps = vec![i, degree - i];
            out.push(RatFunc::from_poly(crate::field::MultiPoly::monomial(
                prime, exps, 1,
            )));
        }
        degree += 1;
    }
    out
}

fn normalize_point(coords: [RatFunc; 3]) -> Result<[RatFunc; 3]> {
    let lead = coords
        .iter()
        .find(|c| !c.is_zero())
        .cloned()
        .ok_or_else(|| Error::Structural("zero projective point".into()))?;
    let inv = lead.inv()?;
    Ok([
        coords[0].mul(&inv)?,
        coords[1].mul(&inv)?,
        coords[2].mul(&inv)?,
    ])
}

/// Run the decomposition for s·x^p + t·y^p + z^p over 𝔽_p(s, t).
///
/// `explicit_a` is tried first when given; the deterministic candidate list
/// follows. `avoid` entries are projective triples written over the
/// variables (s, t, v), where v stands for the candidate's adjoined root
/// (s − a^p t)^{1/p}; a candidate whose non-regular-point fingerprint lands
/// on an avoided point is rejected and the search moves on.
pub fn pfermat_decomposition(
    registry: &mut TowerRegistry,
    p: u64,
    explicit_a: Option<RatFunc>,
    avoid: &[[RatFunc; 3]],
    search_bound: usize,
) -> Result<DecompositionReport> {
    let prime = PrimeField::new(p)?;
    let base_field = registry.base_field(prime, vec!["s".into(), "t".into()]);
    let p32 = u32::try_from(p).map_err(|_| Error::Overflow("p".into()))?;

    let mut candidates = Vec::new();
    if let Some(a) = explicit_a {
        candidates.push(a);
    }
    candidates.extend(candidate_params(prime, search_bound));
    candidates.dedup();

    let s = RatFunc::gen(prime, 2, 0)?;
    let t = RatFunc::gen(prime, 2, 1)?;
    let mut rejected = Vec::new();
    let mut tried = 0usize;

    for a in candidates.into_iter().take(search_bound) {
        tried += 1;
        // w = s − a^p·t must rewrite triangularly with s's slot replaced and
        // t kept, so that t stays a generator for the k′ = l(t^{1/p}) step.
        let w = s.sub(&a.pow(p32)?.mul(&t)?)?;
        let slots = [
            RebaseGen::Root {
                name: "v".into(),
                pth_power: w,
            },
            RebaseGen::Keep,
        ];
        let (l, _cert) = match registry.rebase(base_field, &slots) {
            Ok(ok) => ok,
            Err(Error::NotPBasis { rank, expected }) => {
                rejected.push(RejectedCandidate {
                    a,
                    reason: format!("not a p-basis (rank {} of {})", rank, expected),
                });
                continue;
            }
            Err(Error::NoRewriting(what)) => {
                rejected.push(RejectedCandidate {
                    a,
                    reason: format!("no triangular rewriting ({})", what),
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let ngens = 2;
        let v = RatFunc::gen(prime, ngens, 0)?;
        let t_in_l = RatFunc::gen(prime, ngens, 1)?;
        let lift = |x: &RatFunc| -> Result<RatFunc> {
            Ok(registry
                .lift_to_child(&FieldElement::new(base_field, x.clone()), l)?
                .value)
        };
        let s_in_l = lift(&s)?;
        let a_in_l = lift(&a)?;

        // Exact identity: s·x^p + t·y^p + z^p = (v·x + z)^p + t·(a·x + y)^p.
        let one_l = RatFunc::one(prime, ngens);
        let lhs = Form::coord_power(prime, 3, s_in_l.clone(), 0, p32)?
            .add(&Form::coord_power(prime, 3, t_in_l.clone(), 1, p32)?)?
            .add(&Form::coord_power(prime, 3, one_l.clone(), 2, p32)?)?;
        let vx_plus_z = Form::coord_power(prime, 3, v.clone(), 0, 1)?
            .add(&Form::coord_power(prime, 3, one_l.clone(), 2, 1)?)?;
        let ax_plus_y = Form::coord_power(prime, 3, a_in_l.clone(), 0, 1)?
            .add(&Form::coord_power(prime, 3, one_l.clone(), 1, 1)?)?;
        let rhs = vx_plus_z
            .pow(p32)?
            .add(&ax_plus_y.pow(p32)?.scale(&t_in_l)?)?;
        let identity_pass = lhs == rhs;
        if !identity_pass {
            return Err(Error::Certificate(format!(
                "decomposition identity failed for a = {}",
                a
            )));
        }

        // Unique non-regular point [x′:y′:z′] = [1:0:0] maps to
        // [x : y : z] = [1 : −a : −v].
        let fingerprint = normalize_point([one_l.clone(), a_in_l.neg(), v.neg()])?;
        let on_curve = {
            let at_point = lhs
                .eval_coord(0, &fingerprint[0])?
                .eval_coord(1, &fingerprint[1])?
                .eval_coord(2, &fingerprint[2])?;
            at_point.is_zero()
        };
        if !on_curve {
            return Err(Error::Certificate(format!(
                "non-regular point fingerprint is not on the curve for a = {}",
                a
            )));
        }

        // Collision with the avoid list (entries over (s, t, v)).
        let args = [s_in_l.clone(), t_in_l.clone(), v.clone()];
        let mut collided = false;
        for entry in avoid {
            let mapped = normalize_point([
                eval_ratfunc_at(&entry[0], &args)?,
                eval_ratfunc_at(&entry[1], &args)?,
                eval_ratfunc_at(&entry[2], &args)?,
            ])?;
            if mapped == fingerprint {
                collided = true;
                break;
            }
        }
        if collided {
            rejected.push(RejectedCandidate {
                a,
                reason: "fingerprint collides with an avoided point".into(),
            });
            continue;
        }

        // k′ = l(t^{1/p}); t is still a generator of l.
        let t_elem = FieldElement::new(l, t_in_l.clone());
        let (k_prime, _) =
            registry.adjoin_qth_roots(l, &[t_elem], 1, &["t'".to_string()])?;

        return Ok(DecompositionReport {
            base_field,
            a: FieldElement::new(base_field, a),
            l,
            k_prime,
            identity_pass,
            fingerprint: [
                FieldElement::new(l, fingerprint[0].clone()),
                FieldElement::new(l, fingerprint[1].clone()),
                FieldElement::new(l, fingerprint[2].clone()),
            ],
            fingerprint_on_curve: on_curve,
            rejected,
            candidates_tried: tried,
            internal_degree_log: 1,
            external_degree_log: 1,
        });
    }
    Err(Error::SearchExhausted(tried))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_of_named_curves() {
        // Two quadrics in ℙ³ at p = 2 and the plane cubic at p = 3 both have
        // genus one; the plane degree-p curve satisfies 2g−2 = p(p−3).
        assert_eq!(ci_curve_genus(2, 1, 3, 2).unwrap(), 1);
        assert_eq!(ci_curve_genus(3, 1, 2, 1).unwrap(), 1);
        for p in [2i64, 3, 5, 7, 11, 13] {
            let g = ci_curve_genus(p as u64, 1, 2, 1).unwrap();
            assert_eq!(2 * g as i64 - 2, p * (p - 3));
        }
    }

    #[test]
    fn genus_rejects_non_curves() {
        assert!(matches!(
            ci_curve_genus(2, 1, 3, 1),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn genus_change_plane_degree_p() {
        for p in [2u64, 3, 5, 7] {
            let g_x = ci_curve_genus(p, 1, 2, 1).unwrap();
            let check = genus_change_check(p, 1, 1, g_x, 0).unwrap();
            assert!(check.consistent, "p = {}", p);
            assert_eq!(check.sum_deg, Ratio::from_integer(1));
        }
    }

    #[test]
    fn genus_change_fermat22() {
        let check = genus_change_check(2, 2, 2, 1, 0).unwrap();
        assert!(check.consistent);
        assert_eq!(check.sum_deg, Ratio::from_integer(2));
    }

    #[test]
    fn genus_change_cubic() {
        let check = genus_change_check(3, 1, 1, 1, 0).unwrap();
        assert!(check.consistent);
        assert_eq!(check.sum_deg, Ratio::from_integer(1));
    }

    #[test]
    fn genus_change_requires_gamma() {
        assert!(matches!(
            genus_change_check(2, 0, 0, 1, 0),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn integrality_examples() {
        assert!(matches!(
            integrality_criteria(5, 2),
            IntegralityVerdict::GuaranteedGeometricallyIntegral { .. }
        ));
        assert!(matches!(
            integrality_criteria(5, 5),
            IntegralityVerdict::GuaranteedGeometricallyIntegral { .. }
        ));
        assert_eq!(integrality_criteria(5, 6), IntegralityVerdict::Inconclusive);
        assert_eq!(integrality_criteria(2, 0), IntegralityVerdict::Inconclusive);
    }

    fn conic_over_f2st(
        registry: &mut TowerRegistry,
        diag: [&str; 3],
    ) -> (FieldId, ConicForm) {
        let prime = PrimeField::new(2).unwrap();
        let field = registry.base_field(prime, vec!["s".into(), "t".into()]);
        let parse = |name: &str| -> FieldElement {
            let v = match name {
                "s" => RatFunc::gen(prime, 2, 0).unwrap(),
                "t" => RatFunc::gen(prime, 2, 1).unwrap(),
                "1" => RatFunc::one(prime, 2),
                _ => unreachable!(),
            };
            FieldElement::new(field, v)
        };
        let zero = FieldElement::new(field, RatFunc::zero(prime, 2));
        let form = ConicForm::new(
            field,
            [
                parse(diag[0]),
                parse(diag[1]),
                parse(diag[2]),
                zero.clone(),
                zero.clone(),
                zero,
            ],
        )
        .unwrap();
        (field, form)
    }

    #[test]
    fn conic_classification_cases() {
        let mut reg = TowerRegistry::new();
        let (_, form) = conic_over_f2st(&mut reg, ["s", "t", "1"]);
        let class = classify_conic(&reg, &form, true).unwrap();
        assert_eq!(class.tag, ConicClassTag::NonSmoothRegular);
        assert_eq!(class.evidence.independence.unwrap().rank, 2);

        let mut reg = TowerRegistry::new();
        let (_, form) = conic_over_f2st(&mut reg, ["1", "1", "1"]);
        let class = classify_conic(&reg, &form, true).unwrap();
        assert_eq!(class.tag, ConicClassTag::NotReduced);

        let mut reg = TowerRegistry::new();
        let (_, form) = conic_over_f2st(&mut reg, ["s", "s", "1"]);
        let class = classify_conic(&reg, &form, true).unwrap();
        assert_eq!(class.tag, ConicClassTag::IntermediateDegree2);
    }

    #[test]
    fn conic_odd_characteristic_is_smooth() {
        let prime = PrimeField::new(3).unwrap();
        let mut reg = TowerRegistry::new();
        let field = reg.base_field(prime, vec!["s".into(), "t".into()]);
        let s = reg.gen_element(field, 0).unwrap();
        let t = reg.gen_element(field, 1).unwrap();
        let one = reg.constant(field, 1).unwrap();
        let zero = reg.constant(field, 0).unwrap();
        let form = ConicForm::new(field, [s, t, one, zero.clone(), zero.clone(), zero]).unwrap();
        let class = classify_conic(&reg, &form, true).unwrap();
        assert_eq!(class.tag, ConicClassTag::SmoothOddChar);
    }

    #[test]
    fn conic_mixed_term_is_smooth() {
        let prime = PrimeField::new(2).unwrap();
        let mut reg = TowerRegistry::new();
        let field = reg.base_field(prime, vec!["s".into(), "t".into()]);
        let s = reg.gen_element(field, 0).unwrap();
        let t = reg.gen_element(field, 1).unwrap();
        let one = reg.constant(field, 1).unwrap();
        let zero = reg.constant(field, 0).unwrap();
        let form =
            ConicForm::new(field, [s, t, one.clone(), one, zero.clone(), zero]).unwrap();
        let class = classify_conic(&reg, &form, true).unwrap();
        assert_eq!(class.tag, ConicClassTag::SmoothMixedTerm);
    }

    #[test]
    fn table_counts() {
        let all: Vec<(u64, u64, u64)> = (0..4)
            .flat_map(|g| (0..4).flat_map(move |l| (0..4).map(move |m| (g, l, m))))
            .collect();
        let p2: Vec<_> = all
            .iter()
            .filter(|&&(g, l, m)| genus_one_table_check(2, g, l, m))
            .collect();
        let p3: Vec<_> = all
            .iter()
            .filter(|&&(g, l, m)| genus_one_table_check(3, g, l, m))
            .collect();
        let p5: Vec<_> = all
            .iter()
            .filter(|&&(g, l, m)| genus_one_table_check(5, g, l, m))
            .collect();
        assert_eq!(p2.len(), 5);
        assert_eq!(p3.len(), 2);
        assert!(p5.is_empty());
        assert!(genus_one_table_check(2, 2, 1, 1));
        assert!(genus_one_table_check(3, 1, 1, 1));
    }

    #[test]
    fn degree_bounds() {
        assert_eq!(
            genus_one_degree_bound(2, 1).unwrap(),
            Ratio::from_integer(20)
        );
        assert_eq!(
            genus_one_degree_bound(3, 1).unwrap(),
            Ratio::from_integer(5)
        );
        assert_eq!(
            genus_one_degree_bound(2, 2).unwrap(),
            Ratio::from_integer(80)
        );
        assert!(matches!(
            genus_one_degree_bound(5, 1),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn decomposition_with_a_zero() {
        // a = 0: l = 𝔽_2(v, t) with v² = s; fingerprint [1 : 0 : v].
        let mut reg = TowerRegistry::new();
        let report = pfermat_decomposition(&mut reg, 2, None, &[], 64).unwrap();
        assert!(report.identity_pass);
        assert!(report.fingerprint_on_curve);
        assert!(report.a.value.is_zero());
        let prime = PrimeField::new(2).unwrap();
        let v = RatFunc::gen(prime, 2, 0).unwrap();
        assert_eq!(report.fingerprint[1].value, RatFunc::zero(prime, 2));
        assert_eq!(report.fingerprint[2].value, v);
        assert_eq!(reg.gen_names(report.l).unwrap(), &["v", "t"]);
        assert_eq!(reg.gen_names(report.k_prime).unwrap(), &["v", "t'"]);
    }

    #[test]
    fn decomposition_avoids_points() {
        // Avoiding [1 : 0 : v] rejects a = 0 and accepts a = 1.
        let prime = PrimeField::new(2).unwrap();
        let avoid = [[
            RatFunc::one(prime, 3),
            RatFunc::zero(prime, 3),
            RatFunc::gen(prime, 3, 2).unwrap(),
        ]];
        let mut reg = TowerRegistry::new();
        let report = pfermat_decomposition(&mut reg, 2, None, &avoid, 64).unwrap();
        assert_eq!(report.a.value, RatFunc::one(prime, 2));
        assert_eq!(report.rejected.len(), 1);
        assert!(report.rejected[0].a.is_zero());
        assert_eq!(report.candidates_tried, 2);
        // v² = s + t now, and the identity still holds exactly.
        assert!(report.identity_pass);
    }

    #[test]
    fn decomposition_explicit_a_and_odd_p() {
        let prime = PrimeField::new(3).unwrap();
        let a = RatFunc::one(prime, 2);
        let mut reg = TowerRegistry::new();
        let report = pfermat_decomposition(&mut reg, 3, Some(a.clone()), &[], 64).unwrap();
        assert_eq!(report.a.value, a);
        assert!(report.identity_pass);
        assert!(report.fingerprint_on_curve);
        // Fingerprint is [1 : −a : −v] and −1 ≠ 1 in 𝔽_3.
        let minus_one = RatFunc::constant(prime, 2, -1);
        assert_eq!(report.fingerprint[1].value, minus_one);
    }

    #[test]
    fn decomposition_search_exhaustion() {
        // Bound 0 exhausts immediately.
        let mut reg = TowerRegistry::new();
        assert!(matches!(
            pfermat_decomposition(&mut reg, 2, None, &[], 0),
            Err(Error::SearchExhausted(0))
        ));
    }
}
