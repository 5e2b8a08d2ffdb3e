//! Exact linear algebra over rational function fields.
//!
//! Rank runs fraction-free: each row is cleared to a common polynomial
//! denominator (scaling a row by a nonzero element preserves rank), then a
//! Bareiss-style elimination with exact divisions and cheap monomial-content
//! stripping keeps intermediate entries polynomial.

use crate::error::{Error, Result};
use crate::field::poly::MultiPoly;
use crate::field::ratfunc::RatFunc;

fn check_rect(m: &[Vec<RatFunc>]) -> Result<()> {
    if m.is_empty() {
        return Ok(());
    }
    let w = m[0].len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != w {
            return Err(Error::RaggedMatrix {
                row: i,
                got: row.len(),
                expected: w,
            });
        }
    }
    Ok(())
}

/// Clear denominators row by row: multiply each row by the product of its
/// entries' denominators.
fn clear_rows(m: &[Vec<RatFunc>]) -> Result<Vec<Vec<MultiPoly>>> {
    let mut out = Vec::with_capacity(m.len());
    for row in m {
        let mut cleared = Vec::with_capacity(row.len());
        for (j, entry) in row.iter().enumerate() {
            let mut v = entry.num().clone();
            for (j2, other) in row.iter().enumerate() {
                if j2 != j {
                    v = v.mul(other.den())?;
                }
            }
            cleared.push(v);
        }
        out.push(cleared);
    }
    Ok(out)
}

/// Divide a row by the monomial gcd of its entries. Returns true when a
/// nontrivial factor was removed.
fn strip_row_content(row: &mut [MultiPoly]) -> bool {
    let mut content: Option<Vec<u32>> = None;
    for e in row.iter() {
        if e.is_zero() {
            continue;
        }
        let m = e.monomial_content().unwrap();
        content = Some(match content {
            None => m,
            Some(c) => c.iter().zip(&m).map(|(&a, &b)| a.min(b)).collect(),
        });
    }
    match content {
        Some(c) if c.iter().any(|&e| e > 0) => {
            for e in row.iter_mut() {
                if !e.is_zero() {
                    *e = e.div_monomial(&c);
                }
            }
            true
        }
        _ => false,
    }
}

/// Rank of a matrix of field elements by Bareiss fraction-free elimination
/// with exact zero tests. Pivots on the entry with the fewest terms, ties
/// broken by lowest total degree. Stripping a row's monomial content restarts
/// the division chain, which keeps both operations exact.
pub fn rank_over_field(m: &[Vec<RatFunc>]) -> Result<usize> {
    check_rect(m)?;
    if m.is_empty() || m[0].is_empty() {
        return Ok(0);
    }
    let mut a = clear_rows(m)?;
    let rows = a.len();
    let cols = a[0].len();
    for row in a.iter_mut() {
        strip_row_content(row);
    }

    let mut rank = 0;
    let mut prev: Option<MultiPoly> = None;
    while rank < rows && rank < cols {
        // Lowest-complexity nonzero pivot in the trailing submatrix.
        let mut pivot: Option<(usize, usize, usize, u64)> = None;
        for i in rank..rows {
            for j in rank..cols {
                if a[i][j].is_zero() {
                    continue;
                }
                let key = (a[i][j].terms.len(), a[i][j].total_degree());
                let better = match pivot {
                    None => true,
                    Some((_, _, t, d)) => key < (t, d),
                };
                if better {
                    pivot = Some((i, j, key.0, key.1));
                }
            }
        }
        let (pi, pj) = match pivot {
            None => break,
            Some((i, j, _, _)) => (i, j),
        };
        a.swap(rank, pi);
        if pj != rank {
            for row in a.iter_mut() {
                row.swap(rank, pj);
            }
        }

        let pivot_entry = a[rank][rank].clone();
        let pivot_row = a[rank].clone();
        let mut stripped_any = false;
        for i in rank + 1..rows {
            if a[i][rank..].iter().all(|e| e.is_zero()) {
                continue;
            }
            let factor = a[i][rank].clone();
            for j in rank + 1..cols {
                // Sylvester identity: prev divides exactly.
                let mut v = pivot_entry.mul(&a[i][j])?.sub(&factor.mul(&pivot_row[j])?)?;
                if let Some(p) = &prev {
                    v = v.div_exact(p).expect("bareiss division is exact");
                }
                a[i][j] = v;
            }
            a[i][rank] = MultiPoly::zero(pivot_entry.field, pivot_entry.nvars);
            stripped_any |= strip_row_content(&mut a[i][rank..]);
        }
        rank += 1;
        prev = if stripped_any { None } else { Some(pivot_entry) };
    }
    Ok(rank)
}

/// Solve A·x = b over the rational function field by Gauss-Jordan
/// elimination with exact arithmetic. Returns `None` when inconsistent;
/// free variables are set to zero.
pub fn solve(a: &[Vec<RatFunc>], b: &[RatFunc]) -> Result<Option<Vec<RatFunc>>> {
    check_rect(a)?;
    let rows = a.len();
    if rows == 0 {
        return Ok(Some(Vec::new()));
    }
    let cols = a[0].len();
    if b.len() != rows {
        return Err(Error::RaggedMatrix {
            row: 0,
            got: b.len(),
            expected: rows,
        });
    }
    let field = b
        .first()
        .map(|e| (e.field(), e.nvars()))
        .unwrap_or_else(|| (a[0][0].field(), a[0][0].nvars()));

    let mut m: Vec<Vec<RatFunc>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut used_rows = vec![false; rows];

    for _ in 0..cols.min(rows) {
        // Lowest-complexity pivot in the coefficient block.
        let mut pivot: Option<(usize, usize, u64)> = None;
        for i in 0..rows {
            if used_rows[i] {
                continue;
            }
            for (j, p) in pivot_of_col.iter().enumerate() {
                if p.is_some() || m[i][j].is_zero() {
                    continue;
                }
                let c = m[i][j].complexity();
                if pivot.map(|(_, _, pc)| c < pc).unwrap_or(true) {
                    pivot = Some((i, j, c));
                }
            }
        }
        let (pi, pj) = match pivot {
            None => break,
            Some((i, j, _)) => (i, j),
        };
        used_rows[pi] = true;
        pivot_of_col[pj] = Some(pi);

        let inv = m[pi][pj].inv()?;
        for j in 0..=cols {
            m[pi][j] = m[pi][j].mul(&inv)?;
        }
        let pivot_row = m[pi].clone();
        for i in 0..rows {
            if i == pi || m[i][pj].is_zero() {
                continue;
            }
            let factor = m[i][pj].clone();
            for j in 0..=cols {
                let delta = factor.mul(&pivot_row[j])?;
                m[i][j] = m[i][j].sub(&delta)?;
            }
        }
    }

    // Inconsistency: a zero coefficient row with nonzero rhs.
    for i in 0..rows {
        if used_rows[i] {
            continue;
        }
        if m[i][..cols].iter().all(|e| e.is_zero()) && !m[i][cols].is_zero() {
            return Ok(None);
        }
    }

    let mut x = vec![RatFunc::zero(field.0, field.1); cols];
    for (j, p) in pivot_of_col.iter().enumerate() {
        if let Some(i) = p {
            x[j] = m[*i][cols].clone();
        }
    }
    // Confirm non-pivot rows are consistent with the solution (free vars = 0).
    for i in 0..rows {
        if used_rows[i] {
            continue;
        }
        let mut acc = RatFunc::zero(field.0, field.1);
        for j in 0..cols {
            acc = acc.add(&m[i][j].mul(&x[j])?)?;
        }
        if acc != m[i][cols] {
            return Ok(None);
        }
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::prime::PrimeField;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn gen(field: PrimeField, nvars: usize, i: usize) -> RatFunc {
        RatFunc::gen(field, nvars, i).unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        let f = fp(2);
        for r in 1..=4 {
            let m: Vec<Vec<RatFunc>> = (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| RatFunc::constant(f, 1, (i == j) as i64))
                        .collect()
                })
                .collect();
            assert_eq!(rank_over_field(&m).unwrap(), r);
        }
    }

    #[test]
    fn proportional_rows_rank_one() {
        // [[s, t], [s², st]] over 𝔽_3: second row = s·first row.
        let f = fp(3);
        let s = gen(f, 2, 0);
        let t = gen(f, 2, 1);
        let m = vec![
            vec![s.clone(), t.clone()],
            vec![s.mul(&s).unwrap(), s.mul(&t).unwrap()],
        ];
        assert_eq!(rank_over_field(&m).unwrap(), 1);
    }

    #[test]
    fn generic_transcendental_matrix_full_rank() {
        // r×(N+1) matrix of distinct independent transcendentals.
        let f = fp(5);
        let (r, n1) = (3, 5);
        let m: Vec<Vec<RatFunc>> = (0..r)
            .map(|i| (0..n1).map(|j| gen(f, r * n1, i * n1 + j)).collect())
            .collect();
        assert_eq!(rank_over_field(&m).unwrap(), r);
    }

    #[test]
    fn ragged_matrix_rejected() {
        let f = fp(2);
        let m = vec![
            vec![RatFunc::one(f, 1), RatFunc::one(f, 1)],
            vec![RatFunc::one(f, 1)],
        ];
        assert!(matches!(
            rank_over_field(&m),
            Err(Error::RaggedMatrix { .. })
        ));
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let f = fp(2);
        let s = gen(f, 2, 0);
        let t = gen(f, 2, 1);
        let one = RatFunc::one(f, 2);
        let m = vec![
            vec![s.clone(), t.clone(), one.clone()],
            vec![t.clone(), s.clone(), one.clone()],
        ];
        let mt: Vec<Vec<RatFunc>> = (0..3).map(|j| (0..2).map(|i| m[i][j].clone()).collect()).collect();
        assert_eq!(
            rank_over_field(&m).unwrap(),
            rank_over_field(&mt).unwrap()
        );
    }

    #[test]
    fn solve_simple_system() {
        // [[s, 0], [1, t]]·x = [s², s/t + t] → x = [s, 1] free of surprises.
        let f = fp(5);
        let s = gen(f, 2, 0);
        let t = gen(f, 2, 1);
        let a = vec![
            vec![s.clone(), RatFunc::zero(f, 2)],
            vec![RatFunc::one(f, 2), t.clone()],
        ];
        let b = vec![
            s.mul(&s).unwrap(),
            s.div(&t).unwrap().add(&t).unwrap(),
        ];
        let x = solve(&a, &b).unwrap().unwrap();
        assert_eq!(x[0], s);
        assert_eq!(x[1], s.div(&t).unwrap().add(&t).unwrap().sub(&s).unwrap().div(&t).unwrap());
    }

    #[test]
    fn solve_detects_inconsistency() {
        let f = fp(2);
        let s = gen(f, 1, 0);
        let a = vec![vec![s.clone()], vec![s.clone()]];
        let b = vec![RatFunc::one(f, 1), RatFunc::zero(f, 1)];
        assert!(solve(&a, &b).unwrap().is_none());
    }
}
