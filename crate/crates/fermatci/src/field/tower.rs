//! Towers of purely inseparable extensions of rational function fields.
//!
//! Every field in a tower is 𝔽_p(g_1, …, g_M) for named generators treated
//! as algebraically independent transcendentals. An extension is recorded as
//! an embedding that rewrites each parent generator as a rational function in
//! the child's generators, so elements stay plain rational functions and
//! derivations, p-th roots, and membership are exact.

use crate::error::{Error, Result};
use crate::field::linalg::rank_over_field;
use crate::field::poly::MultiPoly;
use crate::field::prime::PrimeField;
use crate::field::ratfunc::{eval_ratfunc_at, RatFunc};
use serde::Serialize;

/// Identifier of a field inside a [`TowerRegistry`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FieldId(pub usize);

/// One node of a tower: generators plus an optional embedding of the parent.
#[derive(Debug, Clone)]
pub struct TowerField {
    pub id: FieldId,
    pub prime: PrimeField,
    pub gens: Vec<String>,
    /// Parent field and the image of each parent generator in this field.
    pub parent: Option<(FieldId, Vec<RatFunc>)>,
}

/// An element of a specific field of the tower.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub field: FieldId,
    pub value: RatFunc,
}

impl FieldElement {
    pub fn new(field: FieldId, value: RatFunc) -> Self {
        FieldElement { field, value }
    }
}

/// Outcome of a p-independence test: the Jacobian of formal partials of the
/// tested elements with respect to the field's own generators, its exact
/// rank, and the verdict.
#[derive(Debug, Clone)]
pub struct IndependenceCertificate {
    pub field: FieldId,
    pub elements: Vec<FieldElement>,
    pub jacobian: Vec<Vec<RatFunc>>,
    pub rank: usize,
    pub independent: bool,
}

/// How one generator slot is treated by [`TowerRegistry::rebase`].
#[derive(Debug, Clone)]
pub enum RebaseGen {
    /// Keep the old generator in this slot.
    Keep,
    /// Replace the slot by a new generator whose p-th power is the given
    /// element of the old field.
    Root { name: String, pth_power: RatFunc },
}

/// Allocates field ids and stores the tower.
#[derive(Debug, Default)]
pub struct TowerRegistry {
    fields: Vec<TowerField>,
}

impl TowerRegistry {
    pub fn new() -> Self {
        TowerRegistry { fields: Vec::new() }
    }

    pub fn field(&self, id: FieldId) -> Result<&TowerField> {
        self.fields.get(id.0).ok_or(Error::UnknownField(id.0))
    }

    pub fn gen_names(&self, id: FieldId) -> Result<&[String]> {
        Ok(&self.field(id)?.gens)
    }

    /// A base field 𝔽_p(gens…) with no parent.
    pub fn base_field(&mut self, prime: PrimeField, gens: Vec<String>) -> FieldId {
        let id = FieldId(self.fields.len());
        self.fields.push(TowerField {
            id,
            prime,
            gens,
            parent: None,
        });
        id
    }

    fn push_child(
        &mut self,
        parent: FieldId,
        prime: PrimeField,
        gens: Vec<String>,
        embedding: Vec<RatFunc>,
    ) -> FieldId {
        let id = FieldId(self.fields.len());
        self.fields.push(TowerField {
            id,
            prime,
            gens,
            parent: Some((parent, embedding)),
        });
        id
    }

    /// The i-th generator as an element.
    pub fn gen_element(&self, id: FieldId, i: usize) -> Result<FieldElement> {
        let fld = self.field(id)?;
        Ok(FieldElement::new(
            id,
            RatFunc::gen(fld.prime, fld.gens.len(), i)?,
        ))
    }

    pub fn constant(&self, id: FieldId, c: i64) -> Result<FieldElement> {
        let fld = self.field(id)?;
        Ok(FieldElement::new(
            id,
            RatFunc::constant(fld.prime, fld.gens.len(), c),
        ))
    }

    fn check_member(&self, id: FieldId, e: &FieldElement) -> Result<()> {
        if e.field != id {
            return Err(Error::WrongField {
                expected: id.0,
                got: e.field.0,
            });
        }
        let fld = self.field(id)?;
        if e.value.nvars() != fld.gens.len() {
            return Err(Error::NvarsMismatch(fld.gens.len(), e.value.nvars()));
        }
        Ok(())
    }

    /// Rewrite an element of `child`'s parent as an element of `child`.
    pub fn lift_to_child(&self, e: &FieldElement, child: FieldId) -> Result<FieldElement> {
        let c = self.field(child)?;
        let (parent, embedding) = c
            .parent
            .as_ref()
            .ok_or_else(|| Error::Structural(format!("field {} has no parent", child.0)))?;
        self.check_member(*parent, e)?;
        let value = eval_ratfunc_at(&e.value, embedding)?;
        Ok(FieldElement::new(child, value))
    }

    /// Lift an element through the tower to a descendant field.
    pub fn lift(&self, e: &FieldElement, target: FieldId) -> Result<FieldElement> {
        if e.field == target {
            return Ok(e.clone());
        }
        // Walk the parent chain from target up to e.field.
        let mut chain = Vec::new();
        let mut cur = target;
        loop {
            if cur == e.field {
                break;
            }
            let f = self.field(cur)?;
            match &f.parent {
                Some((parent, _)) => {
                    chain.push(cur);
                    cur = *parent;
                }
                None => {
                    return Err(Error::Structural(format!(
                        "field {} is not a descendant of field {}",
                        target.0, e.field.0
                    )))
                }
            }
        }
        let mut out = e.clone();
        for id in chain.into_iter().rev() {
            out = self.lift_to_child(&out, id)?;
        }
        Ok(out)
    }

    /// Formal partials of each element with respect to the field's own
    /// generators; rank decides p-independence. Exact because the generators
    /// form a p-basis of a purely transcendental field.
    pub fn p_independence(
        &self,
        id: FieldId,
        elems: &[FieldElement],
    ) -> Result<IndependenceCertificate> {
        let fld = self.field(id)?;
        let ngens = fld.gens.len();
        let mut jacobian = Vec::with_capacity(elems.len());
        for e in elems {
            self.check_member(id, e)?;
            let mut row = Vec::with_capacity(ngens);
            for v in 0..ngens {
                row.push(e.value.partial(v)?);
            }
            jacobian.push(row);
        }
        let rank = rank_over_field(&jacobian)?;
        Ok(IndependenceCertificate {
            field: id,
            elements: elems.to_vec(),
            rank,
            independent: rank == elems.len(),
            jacobian,
        })
    }

    /// Pick a distinct generator for each adjunction target: it must appear
    /// linearly in the numerator and not at all in the denominator. A
    /// generator private to its target is preferred so that the freeness
    /// check across targets can succeed on chain-shaped inputs.
    pub fn associate_target_generators(
        &self,
        id: FieldId,
        targets: &[FieldElement],
    ) -> Result<Vec<usize>> {
        let fld = self.field(id)?;
        let ngens = fld.gens.len();
        let mut assoc: Vec<usize> = Vec::with_capacity(targets.len());
        for (ti, t) in targets.iter().enumerate() {
            let candidates: Vec<usize> = (0..ngens)
                .filter(|&v| t.value.num().degree_in(v) == 1 && !t.value.den().uses_var(v))
                .filter(|v| !assoc.contains(v))
                .collect();
            let private = candidates.iter().copied().find(|&v| {
                targets.iter().enumerate().all(|(tj, other)| {
                    tj == ti
                        || !(other.value.num().uses_var(v) || other.value.den().uses_var(v))
                })
            });
            let v = private.or_else(|| candidates.first().copied()).ok_or_else(|| {
                Error::UnsupportedAdjunction(format!(
                    "no generator appears linearly in target {}",
                    t.value.render(&fld.gens)
                ))
            })?;
            assoc.push(v);
        }
        Ok(assoc)
    }

    /// Adjoin q-th roots (q = p^e) of the given targets, keeping the field
    /// purely transcendental with the same generator count.
    ///
    /// Each target must be linear in some generator g: t = A·g + B with A
    /// nonzero and A, B free of every target's associated generator. The
    /// associated slot is replaced by a fresh generator σ with σ^q = t, and
    /// g is rewritten as (σ^q − B)/A. Pure generators (A = 1, B = 0) and
    /// generator-times-q-th-power targets (B = 0) are the common special
    /// cases.
    pub fn adjoin_qth_roots(
        &mut self,
        id: FieldId,
        targets: &[FieldElement],
        e: u32,
        new_names: &[String],
    ) -> Result<(FieldId, Vec<usize>)> {
        let fld = self.field(id)?.clone();
        if targets.is_empty() || e == 0 {
            // Trivial adjunction: a child equal to the parent.
            let ngens = fld.gens.len();
            let embedding: Vec<RatFunc> = (0..ngens)
                .map(|i| RatFunc::gen(fld.prime, ngens, i))
                .collect::<Result<_>>()?;
            let child = self.push_child(id, fld.prime, fld.gens.clone(), embedding);
            return Ok((child, Vec::new()));
        }
        if new_names.len() != targets.len() {
            return Err(Error::Structural(
                "one new generator name per target required".into(),
            ));
        }
        for t in targets {
            self.check_member(id, t)?;
        }
        let q = checked_pow(fld.prime.p(), e)?;
        let ngens = fld.gens.len();

        let assoc = self.associate_target_generators(id, targets)?;

        // Split each target as A·g + B and validate freeness.
        let mut splits: Vec<(RatFunc, RatFunc)> = Vec::with_capacity(targets.len());
        for (t, &v) in targets.iter().zip(&assoc) {
            let num = t.value.num();
            let den = t.value.den();
            let by_deg = num.coeffs_in_var(v);
            let a_poly = by_deg.get(&1).cloned().unwrap_or_else(|| {
                MultiPoly::zero(fld.prime, ngens)
            });
            let b_poly = by_deg
                .get(&0)
                .cloned()
                .unwrap_or_else(|| MultiPoly::zero(fld.prime, ngens));
            if by_deg.keys().any(|&d| d > 1) || a_poly.is_zero() {
                return Err(Error::UnsupportedAdjunction(format!(
                    "target {} is not linear in {}",
                    t.value.render(&fld.gens),
                    fld.gens[v]
                )));
            }
            let free = |p: &MultiPoly| assoc.iter().all(|&w| !p.uses_var(w));
            if !free(&a_poly) || !free(&b_poly) || !free(den) {
                return Err(Error::UnsupportedAdjunction(format!(
                    "target {} mixes the generators being replaced",
                    t.value.render(&fld.gens)
                )));
            }
            let a = RatFunc::new(a_poly, den.clone())?;
            let b = RatFunc::new(b_poly, den.clone())?;
            splits.push((a, b));
        }

        // New generator list: associated slots renamed.
        let mut gens = fld.gens.clone();
        for (&v, name) in assoc.iter().zip(new_names) {
            gens[v] = name.clone();
        }

        // Embedding: non-target generators map to themselves; the associated
        // generator of target i maps to (σ_i^q − B_i)/A_i.
        let mut embedding: Vec<RatFunc> = (0..ngens)
            .map(|i| RatFunc::gen(fld.prime, ngens, i))
            .collect::<Result<_>>()?;
        let q32 = u32::try_from(q).map_err(|_| Error::Overflow("q exponent".into()))?;
        for (k, &v) in assoc.iter().enumerate() {
            let sigma_q = RatFunc::gen(fld.prime, ngens, v)?.pow(q32)?;
            let (a, b) = &splits[k];
            // A and B are free of all replaced slots, so reading them in the
            // new variable indexing is exact.
            embedding[v] = sigma_q.sub(b)?.div(a)?;
        }

        let child = self.push_child(id, fld.prime, gens, embedding);

        // Sanity: each target lifts to σ^q.
        for (k, t) in targets.iter().enumerate() {
            let lifted = self.lift_to_child(t, child)?;
            let sigma = RatFunc::gen(fld.prime, ngens, assoc[k])?.pow(q32)?;
            if lifted.value != sigma {
                return Err(Error::Certificate(format!(
                    "adjoined root of target {} does not satisfy σ^q = target",
                    k
                )));
            }
        }
        Ok((child, assoc))
    }

    /// Rebase the field on a new p-basis: each `Root` slot introduces a new
    /// generator v with v^p equal to the given element; `Keep` slots pass the
    /// old generator through. The listed p-th powers (with kept generators)
    /// must be p-independent, and old generators must admit a triangular
    /// rewriting in the new ones.
    pub fn rebase(
        &mut self,
        id: FieldId,
        slots: &[RebaseGen],
    ) -> Result<(FieldId, IndependenceCertificate)> {
        let fld = self.field(id)?.clone();
        let ngens = fld.gens.len();
        if slots.len() != ngens {
            return Err(Error::Structural(format!(
                "rebase needs exactly {} slots, got {}",
                ngens,
                slots.len()
            )));
        }
        // Independence of the candidate p-th powers (kept generators stand
        // for themselves).
        let mut tested = Vec::with_capacity(ngens);
        for (i, slot) in slots.iter().enumerate() {
            let value = match slot {
                RebaseGen::Keep => RatFunc::gen(fld.prime, ngens, i)?,
                RebaseGen::Root { pth_power, .. } => pth_power.clone(),
            };
            tested.push(FieldElement::new(id, value));
        }
        let cert = self.p_independence(id, &tested)?;
        if !cert.independent {
            return Err(Error::NotPBasis {
                rank: cert.rank,
                expected: ngens,
            });
        }

        let mut gens = fld.gens.clone();
        for (i, slot) in slots.iter().enumerate() {
            if let RebaseGen::Root { name, .. } = slot {
                gens[i] = name.clone();
            }
        }

        // Triangular rewriting: old generator of a Root slot i satisfies
        // w_i = A·g_i + B, so g_i = (v_i^p − B)/A once A and B are known in
        // the new generators.
        let mut embedding: Vec<Option<RatFunc>> = vec![None; ngens];
        for (i, slot) in slots.iter().enumerate() {
            if matches!(slot, RebaseGen::Keep) {
                embedding[i] = Some(RatFunc::gen(fld.prime, ngens, i)?);
            }
        }
        let p32 = u32::try_from(fld.prime.p()).map_err(|_| Error::Overflow("p".into()))?;
        loop {
            let mut progressed = false;
            for (i, slot) in slots.iter().enumerate() {
                if embedding[i].is_some() {
                    continue;
                }
                let w = match slot {
                    RebaseGen::Root { pth_power, .. } => pth_power,
                    RebaseGen::Keep => unreachable!(),
                };
                let num = w.num();
                let den = w.den();
                if num.degree_in(i) != 1 || den.uses_var(i) {
                    return Err(Error::NoRewriting(format!(
                        "slot {} ({}) is not linear in the old generator {}",
                        i,
                        w.render(&fld.gens),
                        fld.gens[i]
                    )));
                }
                let by_deg = num.coeffs_in_var(i);
                let a_poly = by_deg.get(&1).cloned().unwrap();
                let b_poly = by_deg
                    .get(&0)
                    .cloned()
                    .unwrap_or_else(|| MultiPoly::zero(fld.prime, ngens));
                // All old generators showing up in A, B, den must already be
                // resolved.
                let deps_ready = (0..ngens).all(|v| {
                    v == i
                        || embedding[v].is_some()
                        || !(a_poly.uses_var(v) || b_poly.uses_var(v) || den.uses_var(v))
                });
                if !deps_ready {
                    continue;
                }
                let args: Vec<RatFunc> = (0..ngens)
                    .map(|v| {
                        embedding[v]
                            .clone()
                            .unwrap_or_else(|| RatFunc::gen(fld.prime, ngens, v).unwrap())
                    })
                    .collect();
                let a = eval_ratfunc_at(&RatFunc::new(a_poly, den.clone())?, &args)?;
                let b = eval_ratfunc_at(&RatFunc::new(b_poly, den.clone())?, &args)?;
                let vp = RatFunc::gen(fld.prime, ngens, i)?.pow(p32)?;
                embedding[i] = Some(vp.sub(&b)?.div(&a)?);
                progressed = true;
            }
            if embedding.iter().all(|e| e.is_some()) {
                break;
            }
            if !progressed {
                let stuck: Vec<&str> = (0..ngens)
                    .filter(|&i| embedding[i].is_none())
                    .map(|i| fld.gens[i].as_str())
                    .collect();
                return Err(Error::NoRewriting(stuck.join(", ")));
            }
        }
        let embedding: Vec<RatFunc> = embedding.into_iter().map(|e| e.unwrap()).collect();
        let child = self.push_child(id, fld.prime, gens, embedding);

        // Sanity: each Root slot's p-th power lifts to v^p.
        for (i, slot) in slots.iter().enumerate() {
            if let RebaseGen::Root { pth_power, .. } = slot {
                let lifted = self.lift_to_child(&FieldElement::new(id, pth_power.clone()), child)?;
                let vp = RatFunc::gen(fld.prime, ngens, i)?.pow(p32)?;
                if lifted.value != vp {
                    return Err(Error::Certificate(format!(
                        "rebase slot {} does not satisfy v^p = target",
                        i
                    )));
                }
            }
        }
        Ok((child, cert))
    }

    /// Extend the field by fresh transcendentals appended after the existing
    /// generators (a purely transcendental, separable-style enlargement).
    pub fn extend_with_transcendentals(
        &mut self,
        id: FieldId,
        names: &[String],
    ) -> Result<FieldId> {
        let fld = self.field(id)?.clone();
        let old_n = fld.gens.len();
        let new_n = old_n + names.len();
        let mut gens = fld.gens.clone();
        gens.extend(names.iter().cloned());
        let embedding: Vec<RatFunc> = (0..old_n)
            .map(|i| RatFunc::gen(fld.prime, new_n, i))
            .collect::<Result<_>>()?;
        Ok(self.push_child(id, fld.prime, gens, embedding))
    }
}

pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{}^{}", base, exp)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(p: u64, gens: &[&str]) -> (TowerRegistry, FieldId, PrimeField) {
        let prime = PrimeField::new(p).unwrap();
        let mut reg = TowerRegistry::new();
        let id = reg.base_field(prime, gens.iter().map(|s| s.to_string()).collect());
        (reg, id, prime)
    }

    #[test]
    fn adjoin_square_roots_of_generators() {
        // 𝔽_2(s0,s1,s2), targets {s1,s2}, q=2 → s1 ↦ σ1², s2 ↦ σ2².
        let (mut reg, k, prime) = setup(2, &["s0", "s1", "s2"]);
        let targets = vec![
            reg.gen_element(k, 1).unwrap(),
            reg.gen_element(k, 2).unwrap(),
        ];
        let (l, slots) = reg
            .adjoin_qth_roots(k, &targets, 1, &["sig1".into(), "sig2".into()])
            .unwrap();
        assert_eq!(slots, vec![1, 2]);
        assert_eq!(reg.gen_names(l).unwrap(), &["s0", "sig1", "sig2"]);
        let s1 = reg.gen_element(k, 1).unwrap();
        let lifted = reg.lift_to_child(&s1, l).unwrap();
        let sigma1 = RatFunc::gen(prime, 3, 1).unwrap();
        assert_eq!(lifted.value, sigma1.pow(2).unwrap());
    }

    #[test]
    fn empty_adjunction_is_identity() {
        let (mut reg, k, _) = setup(2, &["s", "t"]);
        let (l, _) = reg.adjoin_qth_roots(k, &[], 1, &[]).unwrap();
        let st = FieldElement::new(
            k,
            RatFunc::gen(PrimeField::new(2).unwrap(), 2, 0)
                .unwrap()
                .mul(&RatFunc::gen(PrimeField::new(2).unwrap(), 2, 1).unwrap())
                .unwrap(),
        );
        let lifted = reg.lift_to_child(&st, l).unwrap();
        assert_eq!(lifted.value, st.value);
    }

    #[test]
    fn adjoin_fourth_root() {
        // 𝔽_2(s,t), target {t}, q=4: t ↦ τ⁴ and lift(st) = s·τ⁴.
        let (mut reg, k, prime) = setup(2, &["s", "t"]);
        let t = reg.gen_element(k, 1).unwrap();
        let (l, _) = reg
            .adjoin_qth_roots(k, &[t.clone()], 2, &["tau".into()])
            .unwrap();
        let s = RatFunc::gen(prime, 2, 0).unwrap();
        let tau = RatFunc::gen(prime, 2, 1).unwrap();
        let st = FieldElement::new(k, s.mul(&RatFunc::gen(prime, 2, 1).unwrap()).unwrap());
        let lifted = reg.lift_to_child(&st, l).unwrap();
        assert_eq!(lifted.value, s.mul(&tau.pow(4).unwrap()).unwrap());
        // τ⁴ lifts back the image of t.
        let t_img = reg.lift_to_child(&t, l).unwrap();
        assert_eq!(t_img.value.pth_root(2).unwrap(), tau);
    }

    #[test]
    fn adjoin_generator_times_qth_power() {
        // t10 = s0·σ1^{-q} over 𝔽_2(s0, sig1): swap s0 for τ, s0 ↦ τ²σ1².
        let (mut reg, k, prime) = setup(2, &["s0", "sig1"]);
        let s0 = RatFunc::gen(prime, 2, 0).unwrap();
        let sig1 = RatFunc::gen(prime, 2, 1).unwrap();
        let t10 = FieldElement::new(k, s0.div(&sig1.pow(2).unwrap()).unwrap());
        let (kp, slots) = reg
            .adjoin_qth_roots(k, &[t10.clone()], 1, &["tau".into()])
            .unwrap();
        assert_eq!(slots, vec![0]);
        let s0_lift = reg
            .lift_to_child(&FieldElement::new(k, s0.clone()), kp)
            .unwrap();
        let tau = RatFunc::gen(prime, 2, 0).unwrap();
        assert_eq!(
            s0_lift.value,
            tau.pow(2).unwrap().mul(&sig1.pow(2).unwrap()).unwrap()
        );
        // t10 itself lifts to τ².
        let t10_lift = reg.lift_to_child(&t10, kp).unwrap();
        assert_eq!(t10_lift.value, tau.pow(2).unwrap());
    }

    #[test]
    fn unsupported_adjunction_rejected() {
        // s²t has no generator of degree one.
        let (mut reg, k, prime) = setup(2, &["s", "t"]);
        let s = RatFunc::gen(prime, 2, 0).unwrap();
        let t = RatFunc::gen(prime, 2, 1).unwrap();
        let bad = FieldElement::new(k, s.pow(2).unwrap().mul(&t.pow(2).unwrap()).unwrap());
        assert!(matches!(
            reg.adjoin_qth_roots(k, &[bad], 1, &["v".into()]),
            Err(Error::UnsupportedAdjunction(_))
        ));
    }

    #[test]
    fn p_independence_of_generators() {
        let (reg, k, _) = setup(2, &["s", "t"]);
        let elems = vec![
            reg.gen_element(k, 0).unwrap(),
            reg.gen_element(k, 1).unwrap(),
        ];
        let cert = reg.p_independence(k, &elems).unwrap();
        assert_eq!(cert.rank, 2);
        assert!(cert.independent);
    }

    #[test]
    fn p_independence_detects_pth_powers() {
        // {s, s²t²} over 𝔽_2: exponent vectors (1,0),(2,2) ≡ (1,0),(0,0) mod 2.
        let (reg, k, prime) = setup(2, &["s", "t"]);
        let s = RatFunc::gen(prime, 2, 0).unwrap();
        let t = RatFunc::gen(prime, 2, 1).unwrap();
        let elems = vec![
            FieldElement::new(k, s.clone()),
            FieldElement::new(k, s.pow(2).unwrap().mul(&t.pow(2).unwrap()).unwrap()),
        ];
        let cert = reg.p_independence(k, &elems).unwrap();
        assert_eq!(cert.rank, 1);
        assert!(!cert.independent);
    }

    #[test]
    fn p_independence_monomials() {
        // {st, s}: exponent vectors (1,1),(1,0) independent mod 2.
        let (reg, k, prime) = setup(2, &["s", "t"]);
        let s = RatFunc::gen(prime, 2, 0).unwrap();
        let t = RatFunc::gen(prime, 2, 1).unwrap();
        let elems = vec![
            FieldElement::new(k, s.mul(&t).unwrap()),
            FieldElement::new(k, s.clone()),
        ];
        let cert = reg.p_independence(k, &elems).unwrap();
        assert_eq!(cert.rank, 2);
        assert!(cert.independent);
    }

    #[test]
    fn rebase_fermat_shape() {
        // 𝔽_2(s,t): v² = s + a²t (a = 1), keep t → s ↦ v² + t, t ↦ t.
        let (mut reg, k, prime) = setup(2, &["s", "t"]);
        let s = RatFunc::gen(prime, 2, 0).unwrap();
        let t = RatFunc::gen(prime, 2, 1).unwrap();
        let w = s.add(&t).unwrap();
        let (l, cert) = reg
            .rebase(
                k,
                &[
                    RebaseGen::Root {
                        name: "v".into(),
                        pth_power: w,
                    },
                    RebaseGen::Keep,
                ],
            )
            .unwrap();
        assert!(cert.independent);
        assert_eq!(reg.gen_names(l).unwrap(), &["v", "t"]);
        let s_img = reg
            .lift_to_child(&FieldElement::new(k, s), l)
            .unwrap();
        let v = RatFunc::gen(prime, 2, 0).unwrap();
        assert_eq!(s_img.value, v.pow(2).unwrap().add(&t).unwrap());
        let t_img = reg.lift_to_child(&FieldElement::new(k, t.clone()), l).unwrap();
        assert_eq!(t_img.value, t);
    }

    #[test]
    fn rebase_identity() {
        let (mut reg, k, prime) = setup(3, &["s", "t"]);
        let (l, _) = reg.rebase(k, &[RebaseGen::Keep, RebaseGen::Keep]).unwrap();
        let s = FieldElement::new(k, RatFunc::gen(prime, 2, 0).unwrap());
        assert_eq!(reg.lift_to_child(&s, l).unwrap().value, s.value);
        assert_eq!(reg.gen_names(l).unwrap(), reg.gen_names(k).unwrap());
    }

    #[test]
    fn rebase_rejects_dependent_candidates() {
        // {s²t², t} has derivation rank 1.
        let (mut reg, k, prime) = setup(2, &["s", "t"]);
        let s = RatFunc::gen(prime, 2, 0).unwrap();
        let t = RatFunc::gen(prime, 2, 1).unwrap();
        let w = s.pow(2).unwrap().mul(&t.pow(2).unwrap()).unwrap();
        let err = reg
            .rebase(
                k,
                &[
                    RebaseGen::Root {
                        name: "v".into(),
                        pth_power: w,
                    },
                    RebaseGen::Keep,
                ],
            )
            .unwrap_err();
        assert_eq!(
            err,
            Error::NotPBasis {
                rank: 1,
                expected: 2
            }
        );
    }

    #[test]
    fn independence_invariant_under_pth_power_scaling() {
        // Replacing x by x·h^p keeps the rank.
        let (reg, k, prime) = setup(3, &["s", "t"]);
        let s = RatFunc::gen(prime, 2, 0).unwrap();
        let t = RatFunc::gen(prime, 2, 1).unwrap();
        let h = s.add(&t).unwrap();
        let elems1 = vec![
            FieldElement::new(k, s.mul(&t).unwrap()),
            FieldElement::new(k, s.clone()),
        ];
        let elems2 = vec![
            FieldElement::new(
                k,
                s.mul(&t).unwrap().mul(&h.pow(3).unwrap()).unwrap(),
            ),
            FieldElement::new(k, s.clone()),
        ];
        let c1 = reg.p_independence(k, &elems1).unwrap();
        let c2 = reg.p_independence(k, &elems2).unwrap();
        assert_eq!(c1.rank, c2.rank);
    }
}
