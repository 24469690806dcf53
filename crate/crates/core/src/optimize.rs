//! Small derivative-free and projection helpers for the synchronization
//! minimizations.

/// Euclidean projection onto the probability simplex (sort-based).
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &x) in u.iter().enumerate() {
        cumulative += x;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            shift = t;
        }
    }
    v.iter().map(|x| (x - shift).max(0.0)).collect()
}

/// Box-constrained Nelder-Mead maximization in two dimensions. Trial points
/// are clamped into `[lo, hi]`; iteration stops once the simplex diameter
/// drops below `tol` or after `max_iter` iterations.
pub fn nelder_mead_max_2d(
    f: impl Fn([f64; 2]) -> f64,
    start: [f64; 2],
    step: [f64; 2],
    lo: [f64; 2],
    hi: [f64; 2],
    tol: f64,
    max_iter: usize,
) -> ([f64; 2], f64) {
    let clamp = |p: [f64; 2]| [p[0].clamp(lo[0], hi[0]), p[1].clamp(lo[1], hi[1])];
    let eval = |p: [f64; 2]| {
        let v = f(p);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let mut pts = [
        clamp(start),
        clamp([start[0] + step[0], start[1]]),
        clamp([start[0], start[1] + step[1]]),
    ];
    let mut vals = pts.map(eval);
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    for _ in 0..max_iter {
        // order best .. worst (descending value; ties keep index order)
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
        pts = idx.map(|i| pts[i]);
        vals = idx.map(|i| vals[i]);

        let diameter = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| (pts[i][0] - pts[j][0]).hypot(pts[i][1] - pts[j][1]))
            .fold(0.0, f64::max);
        if diameter < tol {
            break;
        }

        let centroid = lerp(pts[0], pts[1], 0.5);
        let reflected = clamp(lerp(centroid, pts[2], -1.0));
        let fr = eval(reflected);
        if fr > vals[0] {
            let expanded = clamp(lerp(centroid, pts[2], -2.0));
            let fe = eval(expanded);
            if fe > fr {
                pts[2] = expanded;
                vals[2] = fe;
            } else {
                pts[2] = reflected;
                vals[2] = fr;
            }
            continue;
        }
        if fr > vals[1] {
            pts[2] = reflected;
            vals[2] = fr;
            continue;
        }
        let (target, ft) = if fr > vals[2] { (reflected, fr) } else { (pts[2], vals[2]) };
        let contracted = clamp(lerp(centroid, target, 0.5));
        let fc = eval(contracted);
        if fc > ft {
            pts[2] = contracted;
            vals[2] = fc;
            continue;
        }
        for k in 1..3 {
            pts[k] = clamp(lerp(pts[0], pts[k], 0.5));
            vals[k] = eval(pts[k]);
        }
    }
    let best = (0..3).fold(0, |b, k| if vals[k] > vals[b] { k } else { b });
    (pts[best], vals[best])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn projection_examples() {
        assert_eq!(project_simplex(&[0.2, 0.8]), vec![0.2, 0.8]);
        assert_eq!(project_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
        let p = project_simplex(&[0.5, 0.5, 0.5]);
        assert!(p.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn nelder_mead_finds_interior_and_boundary_maxima() {
        let f = |p: [f64; 2]| -(p[0] - 0.3).powi(2) - 2.0 * (p[1] + 0.1).powi(2);
        let (x, v) = nelder_mead_max_2d(f, [0.0, 0.0], [0.1, 0.1], [-1.0, -1.0], [1.0, 1.0], 1e-10, 5000);
        assert!((x[0] - 0.3).abs() < 1e-8 && (x[1] + 0.1).abs() < 1e-8);
        assert!(v.abs() < 1e-15);
        let (x, _) = nelder_mead_max_2d(|p| p[0] + p[1], [0.0, 0.0], [0.1, 0.1], [0.0, 0.0], [1.0, 0.5], 1e-12, 5000);
        assert!((x[0] - 1.0).abs() < 1e-10 && (x[1] - 0.5).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn projection_lands_on_simplex_and_is_idempotent(v in prop::collection::vec(-3.0f64..3.0, 1..8)) {
            let p = project_simplex(&v);
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let again = project_simplex(&p);
            prop_assert!(p.iter().zip(&again).all(|(a, b)| (a - b).abs() < 1e-12));
        }

        #[test]
        fn projection_is_nearest_among_vertices(v in prop::collection::vec(-3.0f64..3.0, 2..6)) {
            let p = project_simplex(&v);
            let dist = |q: &[f64]| q.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
            for k in 0..v.len() {
                let mut e = vec![0.0; v.len()];
                e[k] = 1.0;
                prop_assert!(dist(&p) <= dist(&e) + 1e-12);
            }
        }
    }
}
