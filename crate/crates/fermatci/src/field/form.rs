//! Polynomials in the projective coordinates x_0, …, x_N with coefficients
//! in a rational function field. Used to materialize defining forms and to
//! verify substitution identities exactly.

use crate::error::{Error, Result};
use crate::field::prime::PrimeField;
use crate::field::ratfunc::RatFunc;
use std::collections::BTreeMap;

/// A sparse polynomial in the coordinate variables with `RatFunc`
/// coefficients. Keys are exponent vectors; zero coefficients are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    pub prime: PrimeField,
    /// Number of coordinate variables.
    pub nxvars: usize,
    /// Number of field generators the coefficients live over.
    pub ngens: usize,
    pub terms: BTreeMap<Vec<u32>, RatFunc>,
}

impl Form {
    pub fn zero(prime: PrimeField, nxvars: usize, ngens: usize) -> Self {
        Form {
            prime,
            nxvars,
            ngens,
            terms: BTreeMap::new(),
        }
    }

    /// c·x_i^e
    pub fn coord_power(prime: PrimeField, nxvars: usize, coeff: RatFunc, i: usize, e: u32) -> Result<Self> {
        if i >= nxvars {
            return Err(Error::VarOutOfRange {
                index: i,
                nvars: nxvars,
            });
        }
        let ngens = coeff.nvars();
        let mut f = Form::zero(prime, nxvars, ngens);
        if !coeff.is_zero() {
            let mut exps = vec![0; nxvars];
            exps[i] = e;
            f.terms.insert(exps, coeff);
        }
        Ok(f)
    }

    pub fn constant(prime: PrimeField, nxvars: usize, coeff: RatFunc) -> Self {
        let ngens = coeff.nvars();
        let mut f = Form::zero(prime, nxvars, ngens);
        if !coeff.is_zero() {
            f.terms.insert(vec![0; nxvars], coeff);
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, exps: Vec<u32>, c: RatFunc) -> Result<()> {
        match self.terms.remove(&exps) {
            None => {
                if !c.is_zero() {
                    self.terms.insert(exps, c);
                }
            }
            Some(old) => {
                let sum = old.add(&c)?;
                if !sum.is_zero() {
                    self.terms.insert(exps, sum);
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.neg())?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Form::zero(self.prime, self.nxvars, self.ngens);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(&x, &y)| x + y).collect();
                out.insert_add(exps, ca.mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RatFunc) -> Result<Self> {
        let mut out = Form::zero(self.prime, self.nxvars, self.ngens);
        for (e, v) in &self.terms {
            let w = v.mul(c)?;
            if !w.is_zero() {
                out.terms.insert(e.clone(), w);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Form::constant(
            self.prime,
            self.nxvars,
            RatFunc::one(self.prime, self.ngens),
        );
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

    /// Substitute each coordinate by a form (identity where `None`).
    pub fn substitute(&self, images: &[Option<Form>]) -> Result<Self> {
        if images.len() != self.nxvars {
            return Err(Error::NvarsMismatch(self.nxvars, images.len()));
        }
        let mut out = Form::zero(self.prime, self.nxvars, self.ngens);
        for (exps, c) in &self.terms {
            let mut term = Form::constant(self.prime, self.nxvars, c.clone());
            for (v, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = match &images[v] {
                    None => Form::coord_power(
                        self.prime,
                        self.nxvars,
                        RatFunc::one(self.prime, self.ngens),
                        v,
                        1,
                    )?,
                    Some(img) => img.clone(),
                };
                term = term.mul(&factor.pow(e)?)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Map every coefficient (e.g. lift it into an extension field).
    pub fn map_coeffs<F>(&self, ngens: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&RatFunc) -> Result<RatFunc>,
    {
        let mut out = Form::zero(self.prime, self.nxvars, ngens);
        for (e, c) in &self.terms {
            let w = f(c)?;
            if !w.is_zero() {
                out.terms.insert(e.clone(), w);
            }
        }
        Ok(out)
    }

    /// Substitute a field element for one coordinate (dehomogenization).
    pub fn eval_coord(&self, var: usize, value: &RatFunc) -> Result<Self> {
        let mut out = Form::zero(self.prime, self.nxvars, self.ngens);
        for (exps, c) in &self.terms {
            let e = exps[var];
            let mut new_exps = exps.clone();
            new_exps[var] = 0;
            let coeff = if e == 0 { c.clone() } else { c.mul(&value.pow(e)?)? };
            out.insert_add(new_exps, coeff)?;
        }
        Ok(out)
    }

    pub fn render(&self, coord_names: &[String], gen_names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (exps, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (v, &e) in exps.iter().enumerate() {
                if e == 1 {
                    factors.push(coord_names[v].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", coord_names[v], e));
                }
            }
            let cs = c.render(gen_names);
            if factors.is_empty() {
                parts.push(cs);
            } else if c.is_one() {
                parts.push(factors.join("*"));
            } else {
                parts.push(format!("({})*{}", cs, factors.join("*")));
            }
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qth_power_expansion_is_additive_in_char_p() {
        // (x1 + c·x2)^q = x1^q + c^q·x2^q for q = p^e.
        let prime = PrimeField::new(2).unwrap();
        let c = RatFunc::gen(prime, 2, 0)
            .unwrap()
            .div(&RatFunc::gen(prime, 2, 1).unwrap())
            .unwrap();
        let x1 = Form::coord_power(prime, 3, RatFunc::one(prime, 2), 1, 1).unwrap();
        let cx2 = Form::coord_power(prime, 3, c.clone(), 2, 1).unwrap();
        let lin = x1.add(&cx2).unwrap();
        let q = 4u32;
        let lhs = lin.pow(q).unwrap();
        let rhs = Form::coord_power(prime, 3, RatFunc::one(prime, 2), 1, q)
            .unwrap()
            .add(&Form::coord_power(prime, 3, c.pow(q).unwrap(), 2, q).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution() {
        // f = x0·x1, x1 ↦ x1 + x2 gives x0·x1 + x0·x2.
        let prime = PrimeField::new(3).unwrap();
        let one = RatFunc::one(prime, 1);
        let x0 = Form::coord_power(prime, 3, one.clone(), 0, 1).unwrap();
        let x1 = Form::coord_power(prime, 3, one.clone(), 1, 1).unwrap();
        let x2 = Form::coord_power(prime, 3, one.clone(), 2, 1).unwrap();
        let f = x0.mul(&x1).unwrap();
        let image = x1.add(&x2).unwrap();
        let g = f
            .substitute(&[None, Some(image), None])
            .unwrap();
        let expect = x0.mul(&x1).unwrap().add(&x0.mul(&x2).unwrap()).unwrap();
        assert_eq!(g, expect);
    }
}
