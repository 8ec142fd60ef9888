use alloc::vec;
use alloc::vec::Vec;

use super::{AttainmentSet, Mode, Operator, SetForm};
use crate::error::{Error, Result};
use crate::linalg;
use crate::norm::{Exponent, NormSpace};
use crate::search::{bisect_sign_change, golden_section};

/// Parameters `t` where `t ↦ ‖a + t d‖` may have a kink, when the codomain
/// ball is a polytope; `None` for strictly convex codomains.
fn kink_parameters(cod: &NormSpace, a: &[f64], d: &[f64]) -> Option<Vec<f64>> {
    let mut ts = Vec::new();
    let dd = linalg::dot(d, d);
    if dd > 0.0 {
        // closest approach to the origin
        ts.push(-linalg::dot(a, d) / dd);
    }
    if let Some(poly) = cod.as_polygon() {
        for w in poly.vertices() {
            let c1 = a[0] * w[1] - a[1] * w[0];
            let c2 = d[0] * w[1] - d[1] * w[0];
            if c2 != 0.0 {
                ts.push(-c1 / c2);
            }
        }
        return Some(ts);
    }
    match cod {
        NormSpace::Lp { p: Exponent::Finite(p), .. } if *p == 1.0 => {
            ts.extend((0..a.len()).filter(|&j| d[j] != 0.0).map(|j| -a[j] / d[j]));
            Some(ts)
        }
        NormSpace::Lp { p: Exponent::Infinity, .. } => {
            ts.extend((0..a.len()).filter(|&j| d[j] != 0.0).map(|j| -a[j] / d[j]));
            for j in 0..a.len() {
                for k in j + 1..a.len() {
                    for s in [-1.0, 1.0] {
                        let den = d[j] - s * d[k];
                        if den != 0.0 {
                            ts.push(-(a[j] - s * a[k]) / den);
                        }
                    }
                }
            }
            Some(ts)
        }
        _ => None,
    }
}

/// Exact `M_T` / `m_T` for a polygonal domain (including ℓ1² and ℓ∞²).
///
/// `x ↦ ‖Tx‖` is convex, so its maximum over the polygon sits on vertices
/// and an edge belongs to `M_T` exactly when both endpoints and the midpoint
/// do. For the minimum each edge is searched separately: piecewise-linear
/// edge profiles (polyhedral codomains) are evaluated at every kink, smooth
/// ones by bisecting the sign change of their derivative.
pub fn attain_polygon(op: &Operator, mode: Mode, tol: f64) -> Result<AttainmentSet> {
    let poly = op
        .domain()
        .as_polygon()
        .ok_or_else(|| Error::Unsupported("the polygon solver needs a polygonal domain".into()))?;
    let verts: Vec<Vec<f64>> = poly.vertices().iter().map(|v| v.to_vec()).collect();
    let n = verts.len();
    let h = |x: &[f64]| op.image_norm(x);

    // attaining parameter interval [t_lo, t_hi] on each edge, if any
    let mut pieces: Vec<(usize, f64, f64)> = Vec::new();
    let value;
    match mode {
        Mode::Max => {
            let vals: Vec<f64> = verts.iter().map(|v| h(v)).collect();
            value = vals.iter().cloned().fold(0.0, f64::max);
            let slack = tol * value.max(1.0);
            let hit = |v: f64| v >= value - slack;
            for i in 0..n {
                let j = (i + 1) % n;
                if hit(vals[i]) && hit(vals[j]) && hit(h(&linalg::lerp(&verts[i], &verts[j], 0.5))) {
                    pieces.push((i, 0.0, 1.0));
                } else if hit(vals[i]) {
                    pieces.push((i, 0.0, 0.0));
                }
            }
        }
        Mode::Min => {
            let mut per_edge: Vec<Vec<(f64, f64)>> = Vec::with_capacity(n);
            for i in 0..n {
                let (a, b) = (&verts[i], &verts[(i + 1) % n]);
                let (ta, tb) = (op.apply(a), op.apply(b));
                let d = linalg::sub(&tb, &ta);
                let mut cands: Vec<(f64, f64)> = vec![(0.0, h(a)), (1.0, h(b))];
                if linalg::max_abs(&d) <= 1e-14 * linalg::max_abs(&ta).max(linalg::max_abs(&tb)) {
                    cands.push((0.5, h(&linalg::lerp(a, b, 0.5))));
                } else {
                    match kink_parameters(op.codomain(), &ta, &d) {
                        Some(ts) => {
                            for t in ts.into_iter().filter(|t| *t > 0.0 && *t < 1.0) {
                                cands.push((t, op.codomain().norm(&linalg::axpy(&ta, t, &d))));
                            }
                        }
                        None => {
                            let cod = op.codomain();
                            // derivative of t ↦ ‖Ta + t Td‖ from the unique support functional
                            let slope = |t: f64| {
                                let y = linalg::axpy(&ta, t, &d);
                                let ny = cod.norm(&y);
                                if ny == 0.0 {
                                    return 0.0;
                                }
                                cod.support_set(&linalg::scale(&y, 1.0 / ny), tol)
                                    .map(|s| s.canonical().apply(&d))
                                    .unwrap_or(0.0)
                            };
                            let t = if slope(0.0) < 0.0 && slope(1.0) > 0.0 {
                                bisect_sign_change(slope, 0.0, 1.0, 200)
                            } else {
                                golden_section(|t| cod.norm(&linalg::axpy(&ta, t, &d)), 0.0, 1.0, 200).0
                            };
                            cands.push((t, cod.norm(&linalg::axpy(&ta, t, &d))));
                        }
                    }
                }
                per_edge.push(cands);
            }
            value = per_edge.iter().flatten().map(|c| c.1).fold(f64::INFINITY, f64::min);
            let slack = tol * value.max(1.0);
            let strictly_convex = op.codomain().properties().strictly_convex;
            for (i, cands) in per_edge.iter().enumerate() {
                let hits: Vec<f64> = cands.iter().filter(|c| c.1 <= value + slack).map(|c| c.0).collect();
                if hits.is_empty() {
                    continue;
                }
                let lo = hits.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = hits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let mid = linalg::lerp(&verts[i], &verts[(i + 1) % n], 0.5 * (lo + hi));
                let flat = hi - lo > 1e-9 && h(&mid) <= value + slack;
                if flat && !(strictly_convex && hi - lo < 1.0) {
                    pieces.push((i, lo, hi));
                } else {
                    let best = cands
                        .iter()
                        .filter(|c| c.1 <= value + slack)
                        .min_by(|x, y| x.1.total_cmp(&y.1))
                        .expect("nonempty");
                    pieces.push((i, best.0, best.0));
                }
            }
        }
    }

    let slack = tol * value.max(1.0);
    let all_flat = (0..n).all(|i| pieces.iter().any(|&(e, lo, hi)| e == i && lo == 0.0 && hi == 1.0));
    let form = if all_flat {
        SetForm::WholeSphere
    } else {
        let at = |i: usize, t: f64| {
            let x = linalg::lerp(&verts[i], &verts[(i + 1) % n], t);
            op.domain().normalize(&x).expect("boundary point")
        };
        let mut segments: Vec<[Vec<f64>; 2]> = Vec::new();
        let mut points: Vec<Vec<f64>> = Vec::new();
        for &(i, lo, hi) in &pieces {
            if hi > lo {
                let (mut a, mut b) = (at(i, lo), at(i, hi));
                if !linalg::is_lex_positive(&linalg::lerp(&a, &b, 0.5)) {
                    a = linalg::neg(&a);
                    b = linalg::neg(&b);
                }
                if linalg::lex_cmp(&a, &b).is_lt() {
                    core::mem::swap(&mut a, &mut b);
                }
                if !segments.iter().any(|s| linalg::dist_inf(&s[0], &a) <= 1e-12 && linalg::dist_inf(&s[1], &b) <= 1e-12)
                {
                    segments.push([a, b]);
                }
            } else {
                points.push(linalg::antipodal_representative(&at(i, lo)));
            }
        }
        points.retain(|p| (h(p) - value).abs() <= slack);
        let mut unique: Vec<Vec<f64>> = Vec::new();
        for p in points {
            let on_segment = segments.iter().any(|[a, b]| {
                [p.clone(), linalg::neg(&p)].iter().any(|q| {
                    let d = linalg::sub(b, a);
                    let t = (linalg::dot(&linalg::sub(q, a), &d) / linalg::dot(&d, &d)).clamp(0.0, 1.0);
                    linalg::dist_inf(&linalg::axpy(a, t, &d), q) <= 1e-12
                })
            });
            if !on_segment && !unique.iter().any(|u| linalg::dist_inf(u, &p) <= 1e-9) {
                unique.push(p);
            }
        }
        unique.sort_by(|a, b| linalg::lex_cmp(a, b));
        segments.sort_by(|a, b| linalg::lex_cmp(&a[0], &b[0]).then(linalg::lex_cmp(&a[1], &b[1])));
        if segments.is_empty() {
            SetForm::FinitePairs { points: unique }
        } else {
            SetForm::Segments { segments, points: unique }
        }
    };
    Ok(AttainmentSet::new(mode, value, false, form, "polygon vertex and edge scan"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::DEFAULT_TOL;
    use approx::assert_abs_diff_eq;

    fn s3() -> f64 {
        libm::sqrt(3.0)
    }

    fn assert_pairs(set: &AttainmentSet, space: &NormSpace, expected: &[[f64; 2]]) {
        let SetForm::FinitePairs { points } = &set.form else {
            panic!("expected finite pairs, got {:?}", set.form);
        };
        assert_eq!(points.len(), expected.len(), "{points:?}");
        for e in expected {
            assert!(set.contains(space, e, 1e-12), "{e:?} missing from {points:?}");
        }
    }

    #[test]
    fn hexagon_rank_one_diagonal() {
        let hex = NormSpace::regular_hexagon();
        let op = Operator::endo(Matrix::diag(&[1.0, 0.0]), hex.clone()).unwrap();
        let hi = attain_polygon(&op, Mode::Max, DEFAULT_TOL).unwrap();
        assert_eq!(hi.value, 1.0);
        assert_pairs(&hi, &hex, &[[1.0, 0.0]]);
        let lo = attain_polygon(&op, Mode::Min, DEFAULT_TOL).unwrap();
        assert_eq!(lo.value, 0.0);
        assert_pairs(&lo, &hex, &[[0.0, s3() / 2.0]]);
    }

    #[test]
    fn hexagon_rotation() {
        let hex = NormSpace::regular_hexagon();
        let t = Matrix::from_rows(&[vec![0.75, -s3() / 4.0], vec![s3() / 4.0, 0.75]]).unwrap();
        let op = Operator::endo(t, hex.clone()).unwrap();
        let hi = attain_polygon(&op, Mode::Max, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(hi.value, 1.0, epsilon = 1e-12);
        assert_pairs(&hi, &hex, &[[1.0, 0.0], [0.5, s3() / 2.0], [-0.5, s3() / 2.0]]);
        let lo = attain_polygon(&op, Mode::Min, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(lo.value, 0.75, epsilon = 1e-12);
        assert_pairs(&lo, &hex, &[[0.75, s3() / 4.0], [0.0, s3() / 2.0], [-0.75, s3() / 4.0]]);
    }

    #[test]
    fn sup_norm_remark_operator() {
        let sup = NormSpace::sup(2).unwrap();
        let t = Matrix::from_rows(&[vec![0.5, -0.5], vec![0.5, 0.5]]).unwrap();
        let op = Operator::endo(t, sup.clone()).unwrap();
        let hi = attain_polygon(&op, Mode::Max, DEFAULT_TOL).unwrap();
        assert_eq!(hi.value, 1.0);
        assert_pairs(&hi, &sup, &[[1.0, 1.0], [-1.0, 1.0]]);
    }

    #[test]
    fn flat_edges_become_segments() {
        let sup = NormSpace::sup(2).unwrap();
        let op = Operator::endo(Matrix::diag(&[1.0, 0.0]), sup.clone()).unwrap();
        let hi = attain_polygon(&op, Mode::Max, DEFAULT_TOL).unwrap();
        assert_eq!(
            hi.form,
            SetForm::Segments { segments: vec![[vec![1.0, 1.0], vec![1.0, -1.0]]], points: vec![] }
        );
        let lo = attain_polygon(&op, Mode::Min, DEFAULT_TOL).unwrap();
        assert_eq!(lo.form, SetForm::FinitePairs { points: vec![vec![0.0, 1.0]] });
    }

    #[test]
    fn flat_part_of_an_edge_under_min() {
        // T maps the right edge of the square across a flat stretch of the
        // codomain square: ‖T(1, t)‖∞ = max(1, |2t|) is 1 for |t| ≤ 1/2
        let sup = NormSpace::sup(2).unwrap();
        let op = Operator::endo(Matrix::diag(&[1.0, 2.0]), sup.clone()).unwrap();
        let lo = attain_polygon(&op, Mode::Min, DEFAULT_TOL).unwrap();
        assert_eq!(lo.value, 1.0);
        assert_eq!(
            lo.form,
            SetForm::Segments { segments: vec![[vec![1.0, 0.5], vec![1.0, -0.5]]], points: vec![] }
        );
    }

    #[test]
    fn polygon_isometry_is_whole_sphere() {
        let hex = NormSpace::regular_hexagon();
        let r = Matrix::from_rows(&[vec![0.5, -s3() / 2.0], vec![s3() / 2.0, 0.5]]).unwrap();
        let op = Operator::endo(r, hex).unwrap();
        for mode in [Mode::Max, Mode::Min] {
            let s = attain_polygon(&op, mode, DEFAULT_TOL).unwrap();
            assert_eq!(s.form, SetForm::WholeSphere, "{mode:?}");
        }
    }

    #[test]
    fn smooth_codomain_uses_line_search() {
        let hex = NormSpace::regular_hexagon();
        let op = Operator::new(Matrix::diag(&[1.0, 0.0]), hex, NormSpace::euclidean(2)).unwrap();
        let lo = attain_polygon(&op, Mode::Min, DEFAULT_TOL).unwrap();
        assert!(lo.value < 1e-12);
        assert_eq!(lo.cardinality(), Some(2));
    }
}
