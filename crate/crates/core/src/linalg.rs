//! Small dense helpers over `nalgebra` shared by the rank and determinant
//! checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Singular values below this fraction of the largest one count as zero.
pub const RANK_REL_TOL: f64 = 1e-9;

/// Numerical rank of a complex matrix given as rows.
pub fn rank(rows: &[Vec<Complex64>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let m = DMatrix::from_fn(rows.len(), first.len(), |i, j| rows[i][j]);
    rank_of(&m)
}

pub fn rank_of(m: &DMatrix<Complex64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_REL_TOL * max).count()
}

/// Determinant of a square complex matrix given as rows.
pub fn det(rows: &[Vec<Complex64>]) -> Complex64 {
    let n = rows.len();
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    m.determinant()
}

/// Determinant after scaling every row to unit Euclidean norm.
pub fn normalized_det(rows: &[Vec<Complex64>]) -> Complex64 {
    let scaled: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| {
            let n = r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if n == 0.0 {
                r.clone()
            } else {
                r.iter().map(|c| c / n).collect()
            }
        })
        .collect();
    det(&scaled)
}

/// Hermitian norm of a complex vector.
pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// All `size`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.clone());
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn rank_detects_dependence() {
        assert_eq!(rank(&[r(&[1.0, 0.0]), r(&[0.0, 1.0]), r(&[1.0, 1.0])]), 2);
        assert_eq!(rank(&[r(&[1.0, 2.0]), r(&[2.0, 4.0])]), 1);
        assert_eq!(rank(&[r(&[0.0, 0.0])]), 0);
    }

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(7, 3).len(), 35);
        assert_eq!(combinations(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
        assert_eq!(combinations(4, 2)[5], vec![2, 3]);
    }
}
