use crate::error::{Error, Result};
use crate::field::prime::PrimeField;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// One term of a sparse polynomial: a nonzero coefficient and an exponent
/// vector of length `nvars`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub exps: Vec<u32>,
    pub coeff: u64,
}

/// Graded-lexicographic comparison of exponent vectors: total degree first,
/// then lexicographic with earlier variables weighing more.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// A sparse multivariate polynomial over 𝔽_p.
///
/// Terms are kept sorted in descending graded-lex order with no zero
/// coefficients and no duplicate exponent vectors, so equal polynomials have
/// identical representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    pub field: PrimeField,
    pub nvars: usize,
    pub terms: Vec<Term>,
}

impl MultiPoly {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        MultiPoly {
            field,
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: i64) -> Self {
        let c = field.reduce(c);
        if c == 0 {
            return Self::zero(field, nvars);
        }
        MultiPoly {
            field,
            nvars,
            terms: vec![Term {
                exps: vec![0; nvars],
                coeff: c,
            }],
        }
    }

    pub fn one(field: PrimeField, nvars: usize) -> Self {
        Self::constant(field, nvars, 1)
    }

    /// The monomial `x_i`.
    pub fn gen(field: PrimeField, nvars: usize, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::VarOutOfRange {
                index: i,
                nvars,
            });
        }
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Ok(MultiPoly {
            field,
            nvars,
            terms: vec![Term { exps, coeff: 1 }],
        })
    }

    /// A single monomial `c · ∏ x_i^{exps_i}`.
    pub fn monomial(field: PrimeField, exps: Vec<u32>, c: i64) -> Self {
        let nvars = exps.len();
        let c = field.reduce(c);
        if c == 0 {
            return Self::zero(field, nvars);
        }
        MultiPoly {
            field,
            nvars,
            terms: vec![Term { exps, coeff: c }],
        }
    }

    /// Build from raw (exponents, coefficient) pairs, merging duplicates.
    pub fn from_terms(field: PrimeField, nvars: usize, raw: Vec<(Vec<u32>, i64)>) -> Self {
        let mut map: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (exps, c) in raw {
            debug_assert_eq!(exps.len(), nvars);
            let c = field.reduce(c);
            let entry = map.entry(exps).or_insert(0);
            *entry = field.add(*entry, c);
        }
        let mut terms: Vec<Term> = map
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(exps, coeff)| Term { exps, coeff })
            .collect();
        terms.sort_by(|a, b| grlex(&b.exps, &a.exps));
        MultiPoly { field, nvars, terms }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].coeff == 1
            && self.terms[0].exps.iter().all(|&e| e == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|t| t.exps.iter().all(|&e| e == 0))
    }

    /// The leading term in graded-lex order, if any.
    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .first()
            .map(|t| t.exps.iter().map(|&e| e as u64).sum())
            .unwrap_or(0)
    }

    /// Degree in one variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|t| t.exps[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|t| t.exps[var] > 0)
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        if self.field.p() != other.field.p() {
            return Err(Error::PrimeMismatch(self.field.p(), other.field.p()));
        }
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    /// Merge two sorted term lists with a sign on the second.
    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let f = self.field;
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => match grlex(&a.exps, &b.exps) {
                    Ordering::Greater => Some(true),
                    Ordering::Less => Some(false),
                    Ordering::Equal => None,
                },
                (Some(_), None) => Some(true),
                (None, Some(_)) => Some(false),
                (None, None) => unreachable!(),
            };
            match take_left {
                Some(true) => {
                    terms.push(self.terms[i].clone());
                    i += 1;
                }
                Some(false) => {
                    let t = &other.terms[j];
                    let c = if negate_other { f.neg(t.coeff) } else { t.coeff };
                    if c != 0 {
                        terms.push(Term {
                            exps: t.exps.clone(),
                            coeff: c,
                        });
                    }
                    j += 1;
                }
                None => {
                    let a = &self.terms[i];
                    let b = &other.terms[j];
                    let bc = if negate_other { f.neg(b.coeff) } else { b.coeff };
                    let c = f.add(a.coeff, bc);
                    if c != 0 {
                        terms.push(Term {
                            exps: a.exps.clone(),
                            coeff: c,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MultiPoly {
            field: f,
            nvars: self.nvars,
            terms,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        Ok(self.merge(other, true))
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        MultiPoly {
            field: f,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps.clone(),
                    coeff: f.neg(t.coeff),
                })
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field, self.nvars));
        }
        let f = self.field;
        let mut map: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let exps: Vec<u32> = a
                    .exps
                    .iter()
                    .zip(&b.exps)
                    .map(|(&x, &y)| x + y)
                    .collect();
                let c = f.mul(a.coeff, b.coeff);
                let entry = map.entry(exps).or_insert(0);
                *entry = f.add(*entry, c);
            }
        }
        let mut terms: Vec<Term> = map
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(exps, coeff)| Term { exps, coeff })
            .collect();
        terms.sort_by(|a, b| grlex(&b.exps, &a.exps));
        Ok(MultiPoly {
            field: f,
            nvars: self.nvars,
            terms,
        })
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        let c = c % f.p();
        if c == 0 {
            return Self::zero(f, self.nvars);
        }
        MultiPoly {
            field: f,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps.clone(),
                    coeff: f.mul(t.coeff, c),
                })
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::one(self.field, self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let f = self.field;
        let lead = other.leading().unwrap();
        let lead_inv = f.inv(lead.coeff).ok()?;
        let mut rem = self.clone();
        let mut quot_terms: Vec<(Vec<u32>, i64)> = Vec::new();
        while !rem.is_zero() {
            let rl = rem.leading().unwrap();
            let mut q_exps = Vec::with_capacity(self.nvars);
            for (&a, &b) in rl.exps.iter().zip(&lead.exps) {
                if a < b {
                    return None;
                }
                q_exps.push(a - b);
            }
            let q_coeff = f.mul(rl.coeff, lead_inv);
            let q_mono = MultiPoly::monomial(f, q_exps.clone(), q_coeff as i64);
            rem = rem.sub(&q_mono.mul(other).ok()?).ok()?;
            quot_terms.push((q_exps, q_coeff as i64));
        }
        Some(MultiPoly::from_terms(f, self.nvars, quot_terms))
    }

    /// Formal partial derivative with respect to one variable.
    pub fn partial(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::VarOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let f = self.field;
        let raw: Vec<(Vec<u32>, i64)> = self
            .terms
            .iter()
            .filter(|t| t.exps[var] > 0)
            .map(|t| {
                let mut exps = t.exps.clone();
                let e = exps[var];
                exps[var] = e - 1;
                let c = f.mul(t.coeff, (e as u64) % f.p());
                (exps, c as i64)
            })
            .collect();
        Ok(MultiPoly::from_terms(f, self.nvars, raw))
    }

    /// Raise to the p^d-th power: coefficients are fixed, exponents scale.
    pub fn frobenius(&self, d: u32) -> Result<Self> {
        if d == 0 {
            return Ok(self.clone());
        }
        let q = (self.field.p() as u128)
            .checked_pow(d)
            .ok_or_else(|| Error::Overflow("frobenius exponent".into()))?;
        let q: u32 = u32::try_from(q).map_err(|_| Error::Overflow("frobenius exponent".into()))?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut exps = Vec::with_capacity(t.exps.len());
            for &e in &t.exps {
                exps.push(
                    e.checked_mul(q)
                        .ok_or_else(|| Error::Overflow("frobenius exponent".into()))?,
                );
            }
            terms.push(Term {
                exps,
                coeff: t.coeff,
            });
        }
        // Exponent scaling preserves the graded-lex order.
        Ok(MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms,
        })
    }

    /// Extract the p^d-th root when every exponent is divisible by p^d.
    /// Coefficients are p^d-th powers automatically over 𝔽_p.
    pub fn pth_root(&self, d: u32) -> Option<Self> {
        if d == 0 {
            return Some(self.clone());
        }
        let q = (self.field.p() as u64).checked_pow(d)?;
        let q: u32 = u32::try_from(q).ok()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut exps = Vec::with_capacity(t.exps.len());
            for &e in &t.exps {
                if e % q != 0 {
                    return None;
                }
                exps.push(e / q);
            }
            terms.push(Term {
                exps,
                coeff: t.coeff,
            });
        }
        Some(MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms,
        })
    }

    /// Scale so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(t) => {
                let inv = self.field.inv(t.coeff).expect("leading coeff nonzero");
                self.scale(inv)
            }
        }
    }

    /// Reinterpret over a wider variable set (new variables appended).
    pub fn extend_vars(&self, new_nvars: usize) -> Self {
        debug_assert!(new_nvars >= self.nvars);
        MultiPoly {
            field: self.field,
            nvars: new_nvars,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut exps = t.exps.clone();
                    exps.resize(new_nvars, 0);
                    Term {
                        exps,
                        coeff: t.coeff,
                    }
                })
                .collect(),
        }
    }

    /// View as univariate in `var`: coefficient polynomials keyed by degree.
    pub fn coeffs_in_var(&self, var: usize) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, Vec<(Vec<u32>, i64)>> = BTreeMap::new();
        for t in &self.terms {
            let d = t.exps[var];
            let mut exps = t.exps.clone();
            exps[var] = 0;
            out.entry(d).or_default().push((exps, t.coeff as i64));
        }
        out.into_iter()
            .map(|(d, raw)| (d, MultiPoly::from_terms(self.field, self.nvars, raw)))
            .collect()
    }

    /// Multiply by `var^k`.
    pub fn mul_var_pow(&self, var: usize, k: u32) -> Self {
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut exps = t.exps.clone();
                    exps[var] += k;
                    Term {
                        exps,
                        coeff: t.coeff,
                    }
                })
                .collect(),
        }
    }

    /// The monomial gcd of all terms together with its coefficient gcd slot
    /// left at 1; used to strip cheap common factors.
    pub fn monomial_content(&self) -> Option<Vec<u32>> {
        let first = self.terms.first()?;
        let mut exps = first.exps.clone();
        for t in &self.terms[1..] {
            for (e, &te) in exps.iter_mut().zip(&t.exps) {
                *e = (*e).min(te);
            }
        }
        Some(exps)
    }

    /// Divide out a monomial known to divide every term.
    pub fn div_monomial(&self, exps: &[u32]) -> Self {
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t
                        .exps
                        .iter()
                        .zip(exps)
                        .map(|(&a, &b)| a - b)
                        .collect(),
                    coeff: t.coeff,
                })
                .collect(),
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            for (v, &e) in t.exps.iter().enumerate() {
                if e == 1 {
                    factors.push(names[v].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", names[v], e));
                }
            }
            if factors.is_empty() {
                out.push_str(&t.coeff.to_string());
            } else {
                if t.coeff != 1 {
                    out.push_str(&format!("{}*", t.coeff));
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{}", i)).collect();
        write!(f, "{}", self.render(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn x(field: PrimeField, nvars: usize, i: usize) -> MultiPoly {
        MultiPoly::gen(field, nvars, i).unwrap()
    }

    #[test]
    fn add_in_char_two_cancels() {
        let f = fp(2);
        let s = x(f, 2, 0);
        assert!(s.add(&s).unwrap().is_zero());
    }

    #[test]
    fn freshmans_dream() {
        let f = fp(2);
        let s = x(f, 2, 0);
        let t = x(f, 2, 1);
        let st = s.add(&t).unwrap();
        let sq = st.mul(&st).unwrap();
        let expect = s.mul(&s).unwrap().add(&t.mul(&t).unwrap()).unwrap();
        assert_eq!(sq, expect);
    }

    #[test]
    fn monomial_product() {
        let f = fp(3);
        let s = x(f, 2, 0);
        let t = x(f, 2, 1);
        let st = s.mul(&t).unwrap();
        assert_eq!(st.terms.len(), 1);
        assert_eq!(st.terms[0].exps, vec![1, 1]);
    }

    #[test]
    fn mismatched_nvars_rejected() {
        let f = fp(2);
        let a = x(f, 2, 0);
        let b = x(f, 3, 0);
        assert!(matches!(a.add(&b), Err(Error::NvarsMismatch(2, 3))));
    }

    #[test]
    fn exact_division() {
        let f = fp(5);
        let s = x(f, 2, 0);
        let t = x(f, 2, 1);
        let prod = s
            .add(&t)
            .unwrap()
            .mul(&s.sub(&t).unwrap())
            .unwrap();
        let q = prod.div_exact(&s.add(&t).unwrap()).unwrap();
        assert_eq!(q, s.sub(&t).unwrap());
        assert!(prod.div_exact(&s.mul(&s).unwrap()).is_none());
    }

    #[test]
    fn partial_derivative_power_rule() {
        // ∂(st + t³)/∂t over 𝔽_3 = s (3t² vanishes).
        let f = fp(3);
        let s = x(f, 2, 0);
        let t = x(f, 2, 1);
        let expr = s
            .mul(&t)
            .unwrap()
            .add(&t.pow(3).unwrap())
            .unwrap();
        assert_eq!(expr.partial(1).unwrap(), s);
    }

    #[test]
    fn partial_of_pth_power_vanishes() {
        let f = fp(2);
        let s = x(f, 1, 0);
        let s2 = s.pow(2).unwrap();
        assert!(s2.partial(0).unwrap().is_zero());
    }

    #[test]
    fn frobenius_and_root_roundtrip() {
        let f = fp(2);
        let s = x(f, 2, 0);
        let t = x(f, 2, 1);
        let g = s.add(&t).unwrap();
        let g2 = g.frobenius(1).unwrap();
        let expect = s.pow(2).unwrap().add(&t.pow(2).unwrap()).unwrap();
        assert_eq!(g2, expect);
        assert_eq!(g2.pth_root(1).unwrap(), g);
        assert!(s.pth_root(1).is_none());
    }

    #[test]
    fn grlex_ordering_is_canonical() {
        let f = fp(5);
        let a = MultiPoly::from_terms(f, 2, vec![(vec![0, 2], 1), (vec![1, 0], 1), (vec![2, 0], 1)]);
        let b = MultiPoly::from_terms(f, 2, vec![(vec![2, 0], 1), (vec![0, 2], 1), (vec![1, 0], 1)]);
        assert_eq!(a, b);
        assert_eq!(a.terms[0].exps, vec![2, 0]);
        assert_eq!(a.terms[1].exps, vec![0, 2]);
        assert_eq!(a.terms[2].exps, vec![1, 0]);
    }
}
