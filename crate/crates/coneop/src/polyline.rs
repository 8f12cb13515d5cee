//! Low-level breakpoint arithmetic for piecewise-linear functions.
//!
//! A polyline is a pair of parallel vectors `(xs, ys)` with `xs` strictly
//! increasing; the function is linear between nodes and zero outside
//! `[xs[0], xs[last]]`. The empty polyline is the zero function.
//!
//! Everything here works on raw vectors; the cone-membership rules
//! (nonnegativity, vanishing endpoints) live in `cone`.

/// Evaluate at `x` (zero outside the node range).
pub fn eval(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if xs.is_empty() || x < xs[0] || x > xs[xs.len() - 1] {
        return 0.0;
    }
    match xs.binary_search_by(|probe| probe.partial_cmp(&x).unwrap()) {
        Ok(i) => ys[i],
        Err(i) => {
            // xs[i-1] < x < xs[i]
            let (x0, x1) = (xs[i - 1], xs[i]);
            let (y0, y1) = (ys[i - 1], ys[i]);
            let t = (x - x0) / (x1 - x0);
            y0 + t * (y1 - y0)
        }
    }
}

/// Sorted union of two strictly increasing node sets (exact f64 dedup).
pub fn merge_grids(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => {
                if x < y {
                    i += 1;
                    x
                } else if y < x {
                    j += 1;
                    y
                } else {
                    i += 1;
                    j += 1;
                    x
                }
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => break,
        };
        if out.last().map_or(true, |&l| l < next) {
            out.push(next);
        }
    }
    out
}

/// Combine two polylines node-wise with `op`, on the merged grid.
/// With `insert_crossings`, a node is added wherever `f - g` changes sign
/// strictly inside a segment, so min/max stay exactly piecewise linear.
pub fn combine(
    fx: &[f64],
    fy: &[f64],
    gx: &[f64],
    gy: &[f64],
    op: impl Fn(f64, f64) -> f64,
    insert_crossings: bool,
) -> (Vec<f64>, Vec<f64>) {
    let grid = merge_grids(fx, gx);
    let mut xs = Vec::with_capacity(grid.len() + 4);
    let mut ys = Vec::with_capacity(grid.len() + 4);
    let mut prev: Option<(f64, f64, f64)> = None; // (x, f(x), g(x))
    for &x in &grid {
        let fv = eval(fx, fy, x);
        let gv = eval(gx, gy, x);
        if insert_crossings {
            if let Some((px, pf, pg)) = prev {
                let d0 = pf - pg;
                let d1 = fv - gv;
                if d0 * d1 < 0.0 {
                    // strict sign change: both linear on [px, x]
                    let t = d0 / (d0 - d1);
                    let xc = px + t * (x - px);
                    if xc > px && xc < x {
                        let vc = pf + t * (fv - pf);
                        xs.push(xc);
                        ys.push(op(vc, vc));
                    }
                }
            }
        }
        xs.push(x);
        ys.push(op(fv, gv));
        prev = Some((x, fv, gv));
    }
    (xs, ys)
}

/// Canonical form: strip identically-zero tails and interior nodes that are
/// exactly collinear with their neighbors. All-zero input becomes empty.
pub fn canonicalize(mut xs: Vec<f64>, mut ys: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(xs.len(), ys.len());
    if ys.iter().all(|&v| v == 0.0) {
        return (Vec::new(), Vec::new());
    }
    // zero tails: a leading/trailing segment with both ends at 0 is the
    // zero function there, so the outer node is redundant
    while ys.len() >= 2 && ys[0] == 0.0 && ys[1] == 0.0 {
        xs.remove(0);
        ys.remove(0);
    }
    while ys.len() >= 2 && ys[ys.len() - 1] == 0.0 && ys[ys.len() - 2] == 0.0 {
        xs.pop();
        ys.pop();
    }
    // collinear interior nodes
    let mut out_x = Vec::with_capacity(xs.len());
    let mut out_y = Vec::with_capacity(ys.len());
    for i in 0..xs.len() {
        out_x.push(xs[i]);
        out_y.push(ys[i]);
        while out_x.len() >= 3 {
            let n = out_x.len();
            let (x0, x1, x2) = (out_x[n - 3], out_x[n - 2], out_x[n - 1]);
            let (y0, y1, y2) = (out_y[n - 3], out_y[n - 2], out_y[n - 1]);
            if (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0) {
                out_x.remove(n - 2);
                out_y.remove(n - 2);
            } else {
                break;
            }
        }
    }
    (out_x, out_y)
}

/// `max(0, f - eps)` with exact zero crossings inserted as nodes.
pub fn shift_down_clamp(xs: &[f64], ys: &[f64], eps: f64) -> (Vec<f64>, Vec<f64>) {
    let mut out_x = Vec::with_capacity(xs.len() + 4);
    let mut out_y = Vec::with_capacity(ys.len() + 4);
    for i in 0..xs.len() {
        let d = ys[i] - eps;
        if i > 0 {
            let d0 = ys[i - 1] - eps;
            if d0 * d < 0.0 {
                let t = d0 / (d0 - d);
                let xc = xs[i - 1] + t * (xs[i] - xs[i - 1]);
                if xc > xs[i - 1] && xc < xs[i] {
                    out_x.push(xc);
                    out_y.push(0.0);
                }
            }
        }
        out_x.push(xs[i]);
        out_y.push(d.max(0.0));
    }
    (out_x, out_y)
}

/// Max of `|f - g|`; attained at a merged node because the difference is
/// linear on every merged segment.
pub fn sup_distance(fx: &[f64], fy: &[f64], gx: &[f64], gy: &[f64]) -> f64 {
    let grid = merge_grids(fx, gx);
    grid.iter()
        .map(|&x| (eval(fx, fy, x) - eval(gx, gy, x)).abs())
        .fold(0.0, f64::max)
}

/// Maximal open intervals where the polyline is strictly positive.
pub fn positive_intervals(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<f64> = None;
    for i in 0..xs.len() {
        let here_positive = ys[i] > 0.0;
        if open.is_none() && here_positive {
            // positivity began at the previous zero node (or at this node
            // if it is the first); the set {f > 0} is open so the zero
            // endpoint is excluded
            let start = if i == 0 { xs[0] } else { xs[i - 1] };
            open = Some(start);
        }
        if let Some(start) = open {
            if !here_positive {
                out.push((start, xs[i]));
                open = None;
            }
        }
    }
    if let Some(start) = open {
        // cone functions end at 0, but tolerate open-ended data
        out.push((start, xs[xs.len() - 1]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_interpolates_and_vanishes_outside() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.0, 2.0, 0.0];
        assert_eq!(eval(&xs, &ys, 0.5), 1.0);
        assert_eq!(eval(&xs, &ys, 1.0), 2.0);
        assert_eq!(eval(&xs, &ys, -1.0), 0.0);
        assert_eq!(eval(&xs, &ys, 3.0), 0.0);
    }

    #[test]
    fn canonicalize_strips_collinear_and_zero_tails() {
        let (xs, ys) = canonicalize(
            vec![-1.0, 0.0, 0.5, 1.0, 2.0, 3.0],
            vec![0.0, 0.0, 1.0, 2.0, 0.0, 0.0],
        );
        assert_eq!(xs, vec![0.0, 1.0, 2.0]);
        assert_eq!(ys, vec![0.0, 2.0, 0.0]);
    }

    #[test]
    fn min_crossing_inserted() {
        // f: tent peaking at 1, g: mirror tent; crossing at x = 1 is a node
        // already, so use shifted tents crossing at 1.5
        let f = (vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]);
        let g = (vec![0.0, 2.0, 3.0], vec![0.0, 2.0, 0.0]);
        let (xs, ys) = combine(&f.0, &f.1, &g.0, &g.1, f64::min, true);
        // f(1.5)=1.5, g(1.5)=1.5 -> crossing node present
        let idx = xs.iter().position(|&x| x == 1.5).expect("crossing node");
        assert_eq!(ys[idx], 1.5);
    }

    #[test]
    fn positive_intervals_split_at_interior_zeros() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let ys = [0.0, 1.0, 0.0, 1.0, 0.0];
        assert_eq!(positive_intervals(&xs, &ys), vec![(0.0, 2.0), (2.0, 4.0)]);
    }
}
