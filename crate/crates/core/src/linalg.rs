//! Exact linear algebra over the rationals.
//!
//! Rows are cleared of denominators first (row scaling does not change the
//! nullspace or the rank), then reduced with Bareiss fraction-free
//! elimination over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Row echelon form over the integers plus the pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect()
}

/// Bareiss elimination of a rational matrix given as rows.
pub fn bareiss(matrix: &[Vec<Rational>], ncols: usize) -> Echelon {
    let mut m: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| {
            assert_eq!(row.len(), ncols, "ragged matrix");
            integer_row(row)
        })
        .filter(|row| row.iter().any(|v| !v.is_zero()))
        .collect();
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in col + 1..ncols {
                let num = &m[r][col] * &m[i][j] - &m[i][col] * &m[r][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[r][col].clone();
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    Echelon { rows: m, pivots, ncols }
}

pub fn rank(matrix: &[Vec<Rational>], ncols: usize) -> usize {
    bareiss(matrix, ncols).pivots.len()
}

/// A basis of `{v : M v = 0}`, one vector per free column.
pub fn nullspace(matrix: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let ech = bareiss(matrix, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); ncols];
            v[fc] = Rational::one();
            for (row, &pc) in ech.rows.iter().zip(&ech.pivots).rev() {
                let mut s = Rational::zero();
                for j in pc + 1..ncols {
                    if !row[j].is_zero() && !v[j].is_zero() {
                        s += Rational::from_integer(row[j].clone()) * &v[j];
                    }
                }
                v[pc] = -s / Rational::from_integer(row[pc].clone());
            }
            v
        })
        .collect()
}

/// Reduced row echelon form over the rationals; zero rows are dropped.
pub fn rref(matrix: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = matrix.to_vec();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][col];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in col..ncols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    fn apply(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
        m.iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m, 3), 2);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let m = vec![
            vec![rat(1, 2), int(1), int(0), rat(-3, 4)],
            vec![int(2), int(4), int(1), int(0)],
        ];
        let ns = nullspace(&m, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(apply(&m, v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(rank(&ns, 4), 2);
    }

    #[test]
    fn skipped_columns_keep_divisions_exact() {
        let m = mat(&[&[0, 3, 1, 7], &[0, 6, 2, 5], &[0, 9, 4, 1], &[0, 1, 1, 1]]);
        let ech = bareiss(&m, 4);
        assert_eq!(ech.pivots, vec![1, 2, 3]);
        let ns = nullspace(&m, 4);
        assert_eq!(ns, vec![vec![int(1), int(0), int(0), int(0)]]);
    }

    #[test]
    fn rref_is_canonical() {
        let a = mat(&[&[2, 4, 0], &[1, 2, 1]]);
        let b = mat(&[&[3, 6, 1], &[0, 0, 5]]);
        assert_eq!(rref(&a, 3), rref(&b, 3));
        assert_eq!(rref(&a, 3), mat(&[&[1, 2, 0], &[0, 0, 1]]));
    }

    #[test]
    fn empty_and_zero_matrices() {
        assert_eq!(nullspace(&[], 2).len(), 2);
        assert_eq!(rank(&mat(&[&[0, 0]]), 2), 0);
    }
}
