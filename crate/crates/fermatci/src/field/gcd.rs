//! Multivariate polynomial gcd over 𝔽_p by a recursive primitive-part
//! Euclidean algorithm: pick a main variable, split content and primitive
//! part, run a pseudo-remainder sequence on primitive parts, recurse on the
//! contents.

use crate::field::poly::MultiPoly;
use std::collections::BTreeMap;

/// Greatest common divisor, normalized monic under graded-lex.
/// `gcd(0, 0) = 0`, `gcd(f, 0) = monic(f)`.
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    debug_assert_eq!(a.field.p(), b.field.p());
    debug_assert_eq!(a.nvars, b.nvars);
    gcd_inner(a, b).monic()
}

fn gcd_inner(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    // Strip the cheap monomial factor first.
    let ma = a.monomial_content().unwrap();
    let mb = b.monomial_content().unwrap();
    let mg: Vec<u32> = ma.iter().zip(&mb).map(|(&x, &y)| x.min(y)).collect();
    let a = a.div_monomial(&ma);
    let b = b.div_monomial(&mb);

    if a == b {
        return mul_monomial(&a, &mg);
    }
    // Main variable: shortest expected remainder sequence, i.e. smallest
    // minimum degree across the two inputs.
    let mut best: Option<(u32, u32, usize)> = None;
    for v in 0..a.nvars {
        let (da, db) = (a.degree_in(v), b.degree_in(v));
        if da == 0 && db == 0 {
            continue;
        }
        if da == 0 || db == 0 {
            // One input is free of v, so the gcd is too; v is still usable
            // via the content path but never a good main variable.
            continue;
        }
        let key = (da.min(db), da.max(db), v);
        if best.map(|b| key < b).unwrap_or(true) {
            best = Some(key);
        }
    }
    let main = match best {
        Some((_, _, v)) => gcd_in_var(&a, &b, v),
        // No variable occurs in both inputs, so the gcd is constant.
        None => MultiPoly::one(a.field, a.nvars),
    };
    mul_monomial(&main, &mg)
}

fn mul_monomial(f: &MultiPoly, exps: &[u32]) -> MultiPoly {
    let mut out = f.clone();
    for (v, &e) in exps.iter().enumerate() {
        if e > 0 {
            out = out.mul_var_pow(v, e);
        }
    }
    out
}

/// Content of `f` with respect to `var`: gcd of its coefficient polynomials.
fn content_in_var(f: &MultiPoly, var: usize) -> MultiPoly {
    let coeffs: BTreeMap<u32, MultiPoly> = f.coeffs_in_var(var);
    let mut acc = MultiPoly::zero(f.field, f.nvars);
    for c in coeffs.values() {
        acc = gcd_inner(&acc, c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn primitive_part(f: &MultiPoly, var: usize) -> (MultiPoly, MultiPoly) {
    let cont = content_in_var(f, var);
    let pp = f.div_exact(&cont).expect("content divides");
    (cont, pp)
}

/// Exact pseudo-remainder lc(b)^{δ+1}·a mod b in `var`, with
/// δ = deg(a) − deg(b).
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, var: usize) -> MultiPoly {
    let db = b.degree_in(var);
    let delta = a.degree_in(var) - db;
    let lb = b
        .coeffs_in_var(var)
        .remove(&db)
        .expect("nonzero divisor");
    let mut r = a.clone();
    let mut scalings = 0u32;
    while !r.is_zero() {
        let dr = r.degree_in(var);
        if dr < db {
            break;
        }
        let lr = r.coeffs_in_var(var).remove(&dr).expect("nonzero");
        // r := lb·r − lr·var^{dr−db}·b
        let left = lb.mul(&r).unwrap();
        let right = lr.mul_var_pow(var, dr - db).mul(b).unwrap();
        r = left.sub(&right).unwrap();
        scalings += 1;
    }
    // The subresultant divisions need the multiplier to be exactly
    // lc(b)^{δ+1}.
    if scalings < delta + 1 {
        r = r.mul(&lb.pow(delta + 1 - scalings).unwrap()).unwrap();
    }
    r
}

/// Subresultant polynomial remainder sequence in `var`: exact divisions by
/// g·h^δ keep coefficient growth polynomial without any content gcds along
/// the way; content is split off once at the start and once at the end.
fn gcd_in_var(a: &MultiPoly, b: &MultiPoly, var: usize) -> MultiPoly {
    let (cont_a, mut r0) = primitive_part(a, var);
    let (cont_b, mut r1) = primitive_part(b, var);
    let cont_gcd = gcd_inner(&cont_a, &cont_b);

    if r1.degree_in(var) > r0.degree_in(var) {
        std::mem::swap(&mut r0, &mut r1);
    }
    let one = MultiPoly::one(a.field, a.nvars);
    let mut g = one.clone();
    let mut h = one;
    while !r1.is_zero() {
        let d0 = r0.degree_in(var);
        let d1 = r1.degree_in(var);
        let delta = d0 - d1;
        let rem = pseudo_rem(&r0, &r1, var);
        r0 = r1;
        if rem.is_zero() {
            r1 = rem;
            break;
        }
        let divisor = g.mul(&h.pow(delta).unwrap()).unwrap();
        r1 = rem.div_exact(&divisor).expect("subresultant division is exact");
        g = r0
            .coeffs_in_var(var)
            .remove(&r0.degree_in(var))
            .expect("nonzero");
        h = if delta == 0 {
            h
        } else {
            // h := g^δ / h^{δ−1}
            g.pow(delta)
                .unwrap()
                .div_exact(&h.pow(delta - 1).unwrap())
                .expect("subresultant h-update is exact")
        };
    }
    let pp = if r0.is_zero() {
        r0
    } else {
        primitive_part(&r0, var).1
    };
    cont_gcd.mul(&pp).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::prime::PrimeField;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn x(field: PrimeField, nvars: usize, i: usize) -> MultiPoly {
        MultiPoly::gen(field, nvars, i).unwrap()
    }

    /// Brute-force gcd oracle: enumerate every polynomial of bounded degree
    /// over 𝔽_2 in two variables and keep the largest common divisor.
    fn brute_force_gcd_f2(a: &MultiPoly, b: &MultiPoly, max_deg: u32) -> MultiPoly {
        let f = fp(2);
        let monos: Vec<Vec<u32>> = (0..=max_deg)
            .flat_map(|i| (0..=max_deg).map(move |j| vec![i, j]))
            .filter(|e| e[0] + e[1] <= max_deg)
            .collect();
        let mut best = MultiPoly::one(f, 2);
        for mask in 1u32..(1 << monos.len()) {
            let raw: Vec<(Vec<u32>, i64)> = monos
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| (e.clone(), 1))
                .collect();
            let cand = MultiPoly::from_terms(f, 2, raw);
            if cand.is_zero() {
                continue;
            }
            if a.div_exact(&cand).is_some()
                && b.div_exact(&cand).is_some()
                && grlex_gt(&cand, &best)
            {
                best = cand;
            }
        }
        best.monic()
    }

    fn grlex_gt(a: &MultiPoly, b: &MultiPoly) -> bool {
        use crate::field::poly::grlex;
        match (a.leading(), b.leading()) {
            (Some(x), Some(y)) => grlex(&x.exps, &y.exps) == std::cmp::Ordering::Greater,
            _ => false,
        }
    }

    #[test]
    fn monomial_gcd() {
        let f = fp(5);
        let s = x(f, 2, 0);
        let t = x(f, 2, 1);
        let a = s.pow(2).unwrap().mul(&t).unwrap();
        let b = s.mul(&t.pow(2).unwrap()).unwrap();
        assert_eq!(poly_gcd(&a, &b), s.mul(&t).unwrap());
    }

    #[test]
    fn gcd_with_zero_is_monic_identity() {
        let f = fp(3);
        let s = x(f, 2, 0);
        let two_s = s.scale(2);
        let z = MultiPoly::zero(f, 2);
        assert_eq!(poly_gcd(&two_s, &z), s);
        assert!(poly_gcd(&z, &z).is_zero());
    }

    #[test]
    fn gcd_of_powers_matches_brute_force() {
        // gcd((x+y)², (x+y)·x) over 𝔽_2 → x+y.
        let f = fp(2);
        let s = x(f, 2, 0);
        let t = x(f, 2, 1);
        let st = s.add(&t).unwrap();
        let a = st.pow(2).unwrap();
        let b = st.mul(&s).unwrap();
        let g = poly_gcd(&a, &b);
        assert_eq!(g, st);
        assert_eq!(g, brute_force_gcd_f2(&a, &b, 2));
    }

    #[test]
    fn gcd_divides_both() {
        let f = fp(3);
        let s = x(f, 3, 0);
        let t = x(f, 3, 1);
        let u = x(f, 3, 2);
        let common = s.add(&t.mul(&u).unwrap()).unwrap();
        let a = common.mul(&s.add(&u).unwrap()).unwrap();
        let b = common.mul(&t.pow(2).unwrap()).unwrap();
        let g = poly_gcd(&a, &b);
        assert!(a.div_exact(&g).is_some());
        assert!(b.div_exact(&g).is_some());
        assert!(g.div_exact(&common.monic()).is_some());
    }
}
