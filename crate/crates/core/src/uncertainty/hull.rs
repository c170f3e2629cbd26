//! Convex-hull membership by a phase-one simplex.
//!
//! Solves `sum_k w_k p_k = x`, `sum_k w_k = 1`, `w >= 0`. A basic feasible
//! solution has at most `d + 1` positive weights, so the returned
//! decomposition is a Carathéodory one.

/// Feasibility tolerance on the phase-one objective, relative to the
/// coordinate scale.
pub const LP_TOL: f64 = 1e-9;

/// Pivot tolerance.
const PIVOT_EPS: f64 = 1e-12;

/// Consecutive degenerate pivots before switching to Bland's rule.
const BLAND_AFTER: usize = 8;

/// Weights `(index, w)` with `w > 0` expressing `x` as a convex combination
/// of `points`, or `None` when `x` lies outside their hull.
pub fn hull_weights(points: &[Vec<f64>], x: &[f64]) -> Option<Vec<(usize, f64)>> {
    let n = points.len();
    if n == 0 {
        return None;
    }
    let d = x.len();
    if let Some(i) = points.iter().position(|p| p.as_slice() == x) {
        return Some(vec![(i, 1.0)]);
    }
    let scale = points
        .iter()
        .flatten()
        .chain(x)
        .fold(1.0f64, |m, v| m.max(v.abs()));
    for j in 0..d {
        let (lo, hi) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p[j]), hi.max(p[j]))
            });
        if x[j] < lo - LP_TOL * scale || x[j] > hi + LP_TOL * scale {
            return None;
        }
    }

    // Rows: d coordinates (scaled) and the weight sum. Columns: n weights,
    // m artificials, right-hand side.
    let m = d + 1;
    let width = n + m + 1;
    let mut tab = vec![0.0; m * width];
    for i in 0..m {
        let rhs = if i < d { x[i] / scale } else { 1.0 };
        let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
        let row = &mut tab[i * width..(i + 1) * width];
        for (k, p) in points.iter().enumerate() {
            row[k] = sign * if i < d { p[i] / scale } else { 1.0 };
        }
        row[n + i] = 1.0;
        row[width - 1] = sign * rhs;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs of the phase-one objective `sum of artificials`.
    let mut cost = vec![0.0; width];
    for i in 0..m {
        for j in 0..width {
            if j < n || j == width - 1 {
                cost[j] -= tab[i * width + j];
            }
        }
    }

    // Steepest reduced cost while the objective improves; Bland's rule,
    // which never cycles, after a run of degenerate pivots. The iteration
    // cap is a safeguard.
    let mut degenerate = 0usize;
    for _ in 0..(50 * (n + m)) {
        let enter = if degenerate < BLAND_AFTER {
            (0..n + m)
                .filter(|&j| cost[j] < -PIVOT_EPS)
                .min_by(|&a, &b| cost[a].total_cmp(&cost[b]))
        } else {
            (0..n + m).find(|&j| cost[j] < -PIVOT_EPS)
        };
        let Some(enter) = enter else {
            break;
        };
        let before = cost[width - 1];
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = tab[i * width + enter];
            if a > PIVOT_EPS {
                let ratio = tab[i * width + width - 1] / a;
                leave = match leave {
                    Some((r, best)) if ratio > best + PIVOT_EPS => Some((r, best)),
                    Some((r, best)) if (ratio - best).abs() <= PIVOT_EPS && basis[r] < basis[i] => {
                        Some((r, best))
                    }
                    _ => Some((i, ratio)),
                };
            }
        }
        let Some((r, _)) = leave else { break };
        pivot(&mut tab, &mut cost, width, m, r, enter);
        basis[r] = enter;
        if (cost[width - 1] - before).abs() <= PIVOT_EPS {
            degenerate += 1;
        } else {
            degenerate = 0;
        }
    }

    if -cost[width - 1] > LP_TOL {
        return None;
    }
    let mut weights: Vec<(usize, f64)> = basis
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b < n)
        .map(|(i, &b)| (b, tab[i * width + width - 1].max(0.0)))
        .filter(|&(_, w)| w > 0.0)
        .collect();
    let total: f64 = weights.iter().map(|w| w.1).sum();
    if total <= 0.0 {
        return None;
    }
    for w in &mut weights {
        w.1 /= total;
    }
    weights.sort_by_key(|w| w.0);
    Some(weights)
}

fn pivot(tab: &mut [f64], cost: &mut [f64], width: usize, m: usize, r: usize, c: usize) {
    let p = tab[r * width + c];
    for j in 0..width {
        tab[r * width + j] /= p;
    }
    let pivot_row: Vec<f64> = tab[r * width..(r + 1) * width].to_vec();
    for i in 0..m {
        if i == r {
            continue;
        }
        let f = tab[i * width + c];
        if f != 0.0 {
            for j in 0..width {
                tab[i * width + j] -= f * pivot_row[j];
            }
        }
    }
    let f = cost[c];
    if f != 0.0 {
        for j in 0..width {
            cost[j] -= f * pivot_row[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ]
    }

    #[test]
    fn interior_point_has_caratheodory_decomposition() {
        let pts = square();
        let x = [0.3, 0.6];
        let w = hull_weights(&pts, &x).unwrap();
        assert!(w.len() <= 3);
        let sum: f64 = w.iter().map(|p| p.1).sum();
        assert!((sum - 1.0).abs() < 1e-12);
        for j in 0..2 {
            let c: f64 = w.iter().map(|&(k, wk)| wk * pts[k][j]).sum();
            assert!((c - x[j]).abs() < 1e-9);
        }
    }

    #[test]
    fn point_outside_triangle_is_rejected() {
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(hull_weights(&tri, &[0.6, 0.6]).is_none());
        assert!(hull_weights(&tri, &[0.5, 0.5]).is_some());
    }

    #[test]
    fn member_point_is_returned_directly() {
        assert_eq!(hull_weights(&square(), &[1.0, 0.0]), Some(vec![(1, 1.0)]));
    }

    #[test]
    fn segment_in_three_dimensions() {
        let seg = vec![vec![0.0, 0.0, 0.0], vec![2.0, 2.0, 2.0]];
        let w = hull_weights(&seg, &[0.5, 0.5, 0.5]).unwrap();
        assert_eq!(w.len(), 2);
        assert!((w[0].1 - 0.75).abs() < 1e-12);
        assert!(hull_weights(&seg, &[0.5, 0.5, 0.6]).is_none());
    }
}
