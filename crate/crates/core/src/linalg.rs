//! Small dense linear algebra over Gaussian rationals (exact) and f64
//! (rank estimation via singular values). Matrices here are tiny: at most
//! eight basis fields by ten jet columns.

use crate::scalar::Scalar;

/// Exact rank by Gaussian elimination over the Gaussian rationals.
pub fn exact_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&i| !m[i][col].is_zero());
        match pivot {
            None => {
                col += 1;
                continue;
            }
            Some(p) => {
                m.swap(rank, p);
                let inv = m[rank][col].inv().unwrap();
                for j in col..ncols {
                    m[rank][j] = &m[rank][j] * &inv;
                }
                for i in 0..nrows {
                    if i != rank && !m[i][col].is_zero() {
                        let f = m[i][col].clone();
                        for j in col..ncols {
                            let sub = &f * &m[rank][j];
                            m[i][j] = &m[i][j] - &sub;
                        }
                    }
                }
                rank += 1;
                col += 1;
            }
        }
    }
    rank
}

/// Exact determinant of a square Scalar matrix.
pub fn exact_det(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut det = Scalar::one();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !a[i][k].is_zero());
        let Some(p) = pivot else {
            return Scalar::zero();
        };
        if p != k {
            a.swap(k, p);
            det = -det;
        }
        det = &det * &a[k][k];
        let inv = a[k][k].inv().unwrap();
        for i in k + 1..n {
            if !a[i][k].is_zero() {
                let f = &a[i][k] * &inv;
                for j in k..n {
                    let sub = &f * &a[k][j];
                    a[i][j] = &a[i][j] - &sub;
                }
            }
        }
    }
    det
}

/// Exact solve of a (possibly overdetermined but consistent) system
/// `A c = b`. Returns `None` when the system has no unique solution on the
/// sampled rows (rank-deficient) or is inconsistent.
pub fn exact_solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let nrows = a.len();
    let ncols = if nrows == 0 { return None } else { a[0].len() };
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].inv().unwrap();
        for j in col..=ncols {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for i in 0..nrows {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=ncols {
                    let sub = &f * &m[rank][j];
                    m[i][j] = &m[i][j] - &sub;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    if rank < ncols {
        return None;
    }
    // Inconsistent rows mean the right-hand side leaves the span.
    for row in m.iter().skip(rank) {
        if !row[ncols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Scalar::zero(); ncols];
    for (r, &col) in pivots.iter().enumerate() {
        sol[col] = m[r][ncols].clone();
    }
    Some(sol)
}

/// Exact inverse of a square matrix; `None` when singular.
pub fn exact_inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { Scalar::one() } else { Scalar::zero() });
            }
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, p);
        let inv = a[k][k].inv().unwrap();
        for j in k..2 * n {
            a[k][j] = &a[k][j] * &inv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in k..2 * n {
                    let sub = &f * &a[k][j];
                    a[i][j] = &a[i][j] - &sub;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Numeric rank at a relative tolerance against the largest singular value.
/// One-sided (Hestenes) Jacobi orthogonalization of the shorter side; avoids
/// forming a Gram matrix, whose squared conditioning would leak spurious
/// rank on badly scaled entries.
pub fn f64_rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    let m = rows.len();
    if m == 0 {
        return 0;
    }
    let n = rows[0].len();
    // Work with whichever family of vectors is smaller.
    let mut v: Vec<Vec<f64>> = if m <= n {
        rows.to_vec()
    } else {
        (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect()
    };
    // Rank is invariant under row scaling; normalizing evens out the wild
    // scale spread between, say, a bare coordinate row and a Wronskian row
    // full of factorial coefficients.
    for row in v.iter_mut() {
        let max = row.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if max > 0.0 {
            for x in row.iter_mut() {
                *x /= max;
            }
        }
    }
    let k = v.len();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for d in 0..v[p].len() {
                    app += v[p][d] * v[p][d];
                    aqq += v[q][d] * v[q][d];
                    apq += v[p][d] * v[q][d];
                }
                if apq.abs() <= 1e-15 * (app * aqq).sqrt() || apq == 0.0 {
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for d in 0..v[p].len() {
                    let vp = v[p][d];
                    let vq = v[q][d];
                    v[p][d] = c * vp - s * vq;
                    v[q][d] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigmas: Vec<f64> = v
        .iter()
        .map(|row| row.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let max = sigmas.iter().cloned().fold(0.0f64, f64::max);
    if max <= 0.0 {
        return 0;
    }
    sigmas.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Rank of a complex matrix through the real block embedding
/// `a+bi -> [[a, -b], [b, a]]`, whose real rank is twice the complex rank.
pub fn complex_rank(rows: &[Vec<num_complex::Complex64>], rel_tol: f64) -> usize {
    let m = rows.len();
    if m == 0 {
        return 0;
    }
    let n = rows[0].len();
    let mut big = vec![vec![0.0f64; 2 * n]; 2 * m];
    for (i, row) in rows.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            big[2 * i][2 * j] = z.re;
            big[2 * i][2 * j + 1] = -z.im;
            big[2 * i + 1][2 * j] = z.im;
            big[2 * i + 1][2 * j + 1] = z.re;
        }
    }
    f64_rank(&big, rel_tol) / 2
}

/// Least-squares solve of `A c = b` via normal equations (tiny systems).
pub fn f64_lstsq(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let m = a.len();
    if m == 0 {
        return None;
    }
    let n = a[0].len();
    let mut ata = vec![vec![0.0f64; n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for aik in a.iter().zip(b.iter()) {
                s += aik.0[i] * aik.0[j];
            }
            ata[i][j] = s;
        }
        let mut s = 0.0;
        for (row, rhs) in a.iter().zip(b.iter()) {
            s += row[i] * rhs;
        }
        ata[i][n] = s;
    }
    // Gaussian elimination with partial pivoting.
    for k in 0..n {
        let (p, maxv) = (k..n)
            .map(|i| (i, ata[i][k].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if maxv < 1e-12 {
            return None;
        }
        ata.swap(k, p);
        let piv = ata[k][k];
        for j in k..=n {
            ata[k][j] /= piv;
        }
        for i in 0..n {
            if i != k {
                let f = ata[i][k];
                if f != 0.0 {
                    for j in k..=n {
                        ata[i][j] -= f * ata[k][j];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| ata[i][n]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn exact_rank_detects_dependence() {
        let rows = vec![
            vec![s(1), s(2), s(3)],
            vec![s(2), s(4), s(6)],
            vec![s(0), s(1), s(1)],
        ];
        assert_eq!(exact_rank(&rows), 2);
    }

    #[test]
    fn exact_det_and_inverse() {
        let m = vec![vec![s(2), s(1)], vec![s(5), s(3)]];
        assert_eq!(exact_det(&m), s(1));
        let inv = exact_inverse(&m).unwrap();
        assert_eq!(inv[0], vec![s(3), s(-1)]);
        assert_eq!(inv[1], vec![s(-5), s(2)]);
    }

    #[test]
    fn exact_solve_consistency() {
        // Overdetermined consistent system.
        let a = vec![vec![s(1), s(0)], vec![s(0), s(1)], vec![s(1), s(1)]];
        let b = vec![s(2), s(3), s(5)];
        assert_eq!(exact_solve(&a, &b), Some(vec![s(2), s(3)]));
        // Inconsistent right-hand side.
        let b = vec![s(2), s(3), s(6)];
        assert_eq!(exact_solve(&a, &b), None);
    }

    #[test]
    fn f64_rank_with_tolerance() {
        let rows = vec![
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 1.0, 2.0 + 1e-13],
        ];
        assert_eq!(f64_rank(&rows, 1e-8), 2);
        let rows = vec![vec![1.0, 0.0], vec![0.0, 1e-3]];
        assert_eq!(f64_rank(&rows, 1e-8), 2);
    }

    #[test]
    fn lstsq_recovers_exact_solutions() {
        let a = vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]];
        let b = vec![5.0, 11.0, 17.0];
        let c = f64_lstsq(&a, &b).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-9 && (c[1] - 2.0).abs() < 1e-9);
    }
}
