//! Small dense helpers for hyperplane fitting.

use crate::scalar::Scalar;

/// Unit normal of the affine hull of `points` (n points in n dimensions),
/// or `None` when the points are affinely dependent.
pub fn hyperplane_normal<T: Scalar>(points: &[&[T]]) -> Option<Vec<T>> {
    let n = points.len();
    if n < 2 || points.iter().any(|p| p.len() != n) {
        return None;
    }
    let rows = n - 1;
    let mut m: Vec<Vec<T>> = (1..n)
        .map(|j| (0..n).map(|c| points[j][c] - points[0][c]).collect())
        .collect();

    let scale = m
        .iter()
        .flatten()
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    if scale <= T::zero() {
        return None;
    }
    let tol = scale * T::epsilon() * T::of(1e3);

    // Reduced row echelon form with partial pivoting.
    let mut pivot_cols = Vec::with_capacity(rows);
    let mut r = 0;
    for c in 0..n {
        if r == rows {
            break;
        }
        let (best, best_abs) = (r..rows)
            .map(|i| (i, m[i][c].abs()))
            .fold((r, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_abs <= tol {
            continue;
        }
        m.swap(r, best);
        let p = m[r][c];
        for v in m[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            let f = row[c];
            if i != r && f != T::zero() {
                for (v, &p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if pivot_cols.len() < rows {
        return None;
    }
    let free = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut normal = vec![T::zero(); n];
    normal[free] = T::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        normal[pc] = -m[row][free];
    }
    let norm = normal.iter().map(|&v| v * v).sum::<T>().sqrt();
    Some(normal.into_iter().map(|v| v / norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_through_two_points() {
        let n = hyperplane_normal::<f64>(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let s = 0.5f64.sqrt();
        assert!((n[0].abs() - s).abs() < 1e-12 && (n[1].abs() - s).abs() < 1e-12);
        assert!(n[0] * n[1] > 0.0);
    }

    #[test]
    fn collinear_points_in_3d_are_degenerate() {
        let pts: [&[f64]; 3] = [&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0]];
        assert!(hyperplane_normal(&pts).is_none());
    }

    #[test]
    fn coincident_points_are_degenerate() {
        let pts: [&[f64]; 2] = [&[0.5, 0.5], &[0.5, 0.5]];
        assert!(hyperplane_normal(&pts).is_none());
    }
}
