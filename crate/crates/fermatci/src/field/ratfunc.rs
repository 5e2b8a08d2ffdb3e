use crate::error::{Error, Result};
use crate::field::gcd::poly_gcd;
use crate::field::poly::MultiPoly;
use crate::field::prime::PrimeField;
use std::fmt;

/// A reduced fraction of multivariate polynomials over 𝔽_p.
///
/// Invariants: the denominator is nonzero and monic under graded-lex, and
/// `gcd(num, den) = 1`, so equality is representational equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    /// Canonicalize a fraction: reduce by the gcd, make the denominator monic.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.field.p() != den.field.p() {
            return Err(Error::PrimeMismatch(num.field.p(), den.field.p()));
        }
        if num.nvars != den.nvars {
            return Err(Error::NvarsMismatch(num.nvars, den.nvars));
        }
        if num.is_zero() {
            return Ok(RatFunc {
                den: MultiPoly::one(num.field, num.nvars),
                num,
            });
        }
        let g = poly_gcd(&num, &den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        let lc = den.leading().expect("nonzero denominator").coeff;
        if lc != 1 {
            let inv = den.field.inv(lc)?;
            num = num.scale(inv);
            den = den.scale(inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.field, p.nvars);
        RatFunc { num: p, den }
    }

    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        Self::from_poly(MultiPoly::zero(field, nvars))
    }

    pub fn one(field: PrimeField, nvars: usize) -> Self {
        Self::from_poly(MultiPoly::one(field, nvars))
    }

    pub fn constant(field: PrimeField, nvars: usize, c: i64) -> Self {
        Self::from_poly(MultiPoly::constant(field, nvars, c))
    }

    pub fn gen(field: PrimeField, nvars: usize, i: usize) -> Result<Self> {
        Ok(Self::from_poly(MultiPoly::gen(field, nvars, i)?))
    }

    #[inline]
    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    #[inline]
    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.num.field
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    /// Exact zero test on the reduced numerator.
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    /// If the value lies in 𝔽_p, return the residue.
    pub fn as_constant(&self) -> Option<u64> {
        if !self.is_constant() {
            return None;
        }
        Some(self.num.leading().map(|t| t.coeff).unwrap_or(0))
    }

    /// Wrap parts already known to be coprime; only the monic normalization
    /// of the denominator is applied.
    fn from_coprime(num: MultiPoly, mut den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                den: MultiPoly::one(num.field, num.nvars),
                num,
            });
        }
        debug_assert!(poly_gcd(&num, &den).is_one(), "parts are not coprime");
        let lc = den.leading().expect("nonzero denominator").coeff;
        let num = if lc != 1 {
            let inv = den.field.inv(lc)?;
            den = den.scale(inv);
            num.scale(inv)
        } else {
            num
        };
        Ok(RatFunc { num, den })
    }

    fn add_signed(&self, other: &Self, negate: bool) -> Result<Self> {
        // With both inputs reduced and g = gcd(d1, d2), any common factor of
        // t = n1·(d2/g) ± n2·(d1/g) and d1·(d2/g) divides g, so one more gcd
        // against g finishes the reduction.
        let g = poly_gcd(&self.den, &other.den);
        let e1 = self.den.div_exact(&g).expect("gcd divides");
        let e2 = other.den.div_exact(&g).expect("gcd divides");
        let left = self.num.mul(&e2)?;
        let right = other.num.mul(&e1)?;
        let t = if negate {
            left.sub(&right)?
        } else {
            left.add(&right)?
        };
        if t.is_zero() {
            return Ok(Self::zero(self.field(), self.nvars()));
        }
        let h = poly_gcd(&t, &g);
        let num = t.div_exact(&h).expect("gcd divides");
        let den = g
            .div_exact(&h)
            .expect("gcd divides")
            .mul(&e1)?
            .mul(&e2)?;
        Self::from_coprime(num, den)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_signed(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_signed(other, true)
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        // Cross-reduction leaves the product fully reduced: after dividing
        // out gcd(n1, d2) and gcd(n2, d1), no prime can survive on both
        // sides.
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field(), self.nvars()));
        }
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = other.den.div_exact(&g1).expect("gcd divides");
        let n2 = other.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        Self::from_coprime(n1.mul(&n2)?, d1.mul(&d2)?)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // A reduced fraction stays reduced when flipped.
        Self::from_coprime(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.field(), self.nvars());
        let mut base = self.clone();
        let mut e = e;
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

    /// Formal partial derivative by the quotient rule. The denominator is
    /// den², so the reduction runs as two gcds against den instead of one
    /// against the square.
    pub fn partial(&self, var: usize) -> Result<Self> {
        let dn = self.num.partial(var)?;
        let dd = self.den.partial(var)?;
        let t = dn.mul(&self.den)?.sub(&self.num.mul(&dd)?)?;
        if t.is_zero() {
            return Ok(Self::zero(self.field(), self.nvars()));
        }
        let g1 = poly_gcd(&t, &self.den);
        let t1 = t.div_exact(&g1).expect("gcd divides");
        let d1 = self.den.div_exact(&g1).expect("gcd divides");
        let g2 = poly_gcd(&t1, &self.den);
        let num = t1.div_exact(&g2).expect("gcd divides");
        let d2 = self.den.div_exact(&g2).expect("gcd divides");
        Self::from_coprime(num, d1.mul(&d2)?)
    }

    /// f^{p^d}; exponents scale by p^d, coefficients are fixed.
    pub fn frobenius_power(&self, d: u32) -> Result<Self> {
        Ok(RatFunc {
            num: self.num.frobenius(d)?,
            den: self.den.frobenius(d)?,
        })
    }

    /// The p^d-th root inside the same rational function field, if it exists.
    ///
    /// Writes f = (num·den^{p^d−1})/den^{p^d} so the denominator is a perfect
    /// power, then roots the numerator exponent-wise.
    pub fn pth_root(&self, d: u32) -> Option<Self> {
        if d == 0 {
            return Some(self.clone());
        }
        let q = (self.field().p() as u64).checked_pow(d)?;
        let q: u32 = u32::try_from(q).ok()?;
        let shifted_num = self.num.mul(&self.den.pow(q - 1).ok()?).ok()?;
        let root_num = shifted_num.pth_root(d)?;
        RatFunc::new(root_num, self.den.clone()).ok()
    }

    /// Cross-multiplication equality test (used by property tests to confirm
    /// that representational equality is the right notion).
    pub fn eq_cross(&self, other: &Self) -> Result<bool> {
        Ok(self.num.mul(&other.den)? == other.num.mul(&self.den)?)
    }

    /// Total degree of num plus den; the pivot-selection weight.
    pub fn complexity(&self) -> u64 {
        self.num.total_degree() + self.den.total_degree()
    }

    /// Reinterpret over a wider variable set (new variables appended).
    pub fn extend_vars(&self, new_nvars: usize) -> Self {
        RatFunc {
            num: self.num.extend_vars(new_nvars),
            den: self.den.extend_vars(new_nvars),
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.den.is_one() {
            self.num.render(names)
        } else {
            format!("({})/({})", self.num.render(names), self.den.render(names))
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars()).map(|i| format!("v{}", i)).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// Evaluate a polynomial at rational-function arguments (one per variable).
pub fn eval_poly_at(p: &MultiPoly, args: &[RatFunc]) -> Result<RatFunc> {
    if args.len() != p.nvars {
        return Err(Error::NvarsMismatch(p.nvars, args.len()));
    }
    let (field, out_nvars) = match args.first() {
        Some(a) => (a.field(), a.nvars()),
        None => (p.field, 0),
    };
    let mut acc = RatFunc::zero(field, out_nvars);
    for t in &p.terms {
        let mut term = RatFunc::constant(field, out_nvars, t.coeff as i64);
        for (v, &e) in t.exps.iter().enumerate() {
            if e > 0 {
                term = term.mul(&args[v].pow(e)?)?;
            }
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Evaluate a reduced fraction at rational-function arguments.
pub fn eval_ratfunc_at(f: &RatFunc, args: &[RatFunc]) -> Result<RatFunc> {
    let n = eval_poly_at(f.num(), args)?;
    let d = eval_poly_at(f.den(), args)?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    n.div(&d)
}
