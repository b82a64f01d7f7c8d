use nalgebra::DMatrix;

use super::C;
use crate::{Error, Result};

/// Roots of `coeffs[0] z^n + ... + coeffs[n]` from the eigenvalues of the companion matrix.
/// Isolated roots are Newton-polished; members of tight groups are left alone, since polishing
/// a multiple root moves its members asymmetrically and spoils the cluster mean.
pub fn poly_roots(coeffs: &[C]) -> Result<Vec<C>> {
    let lead = coeffs.first().copied().unwrap_or_default();
    if lead.norm() == 0.0 {
        return Err(Error::InvalidInput("leading coefficient is zero".into()));
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let mut m = DMatrix::<C>::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -coeffs[j + 1] / lead;
    }
    for i in 1..n {
        m[(i, i - 1)] = C::new(1.0, 0.0);
    }
    let t = m.schur().unpack().1;
    let raw: Vec<C> = (0..n).map(|i| t[(i, i)]).collect();
    if raw.iter().any(|r| !super::is_finite(*r)) {
        return Err(Error::numerical(
            "companion eigenvalues not finite",
            f64::INFINITY,
        ));
    }
    let roots = raw
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let gap = raw
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, w)| (z - w).norm())
                .fold(f64::INFINITY, f64::min);
            if gap > 1e-3 * (1.0 + z.norm()) {
                polish(coeffs, z)
            } else {
                z
            }
        })
        .collect();
    Ok(roots)
}

pub fn horner(coeffs: &[C], z: C) -> (C, C) {
    let mut p = C::default();
    let mut dp = C::default();
    for &a in coeffs {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Taylor coefficients of the polynomial about `z`, lowest order first.
pub fn taylor_shift(coeffs: &[C], z: C) -> Vec<C> {
    let mut work = coeffs.to_vec();
    let n = work.len();
    let mut out = Vec::with_capacity(n);
    for len in (1..=n).rev() {
        for i in 1..len {
            let prev = work[i - 1];
            work[i] += prev * z;
        }
        out.push(work[len - 1]);
    }
    out
}

fn polish(coeffs: &[C], mut z: C) -> C {
    for _ in 0..8 {
        let (p, dp) = horner(coeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        if horner(coeffs, next).0.norm() < p.norm() {
            z = next;
        } else {
            break;
        }
    }
    z
}

/// A group of numerically coincident roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub center: C,
    pub multiplicity: usize,
}

/// Groups the computed roots of `coeffs` into multiple roots.
///
/// A k-fold root splits under rounding into a ring of radius about eps^(1/k), so a fixed
/// distance threshold cannot serve every multiplicity. Candidate groups are formed by
/// single linkage at a coarse radius and accepted when the Taylor coefficients of orders
/// below k vanish at the group mean (relative to `tol`); rejected groups are re-split at a
/// finer radius.
pub fn cluster_roots(coeffs: &[C], roots: &[C], tol: f64) -> Vec<RootCluster> {
    let scale = coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let spread = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    let mut out = Vec::new();
    split(coeffs, roots, tol, scale, spread * tol.powf(0.2), &mut out);
    out.sort_by(|a, b| {
        b.multiplicity
            .cmp(&a.multiplicity)
            .then(a.center.re.total_cmp(&b.center.re))
            .then(a.center.im.total_cmp(&b.center.im))
    });
    out
}

fn split(coeffs: &[C], roots: &[C], tol: f64, scale: f64, radius: f64, out: &mut Vec<RootCluster>) {
    for group in linkage(roots, radius) {
        let k = group.len();
        let center = group.iter().sum::<C>() / k as f64;
        let accept = k == 1
            || radius <= tol
            || taylor_shift(coeffs, center)[..k]
                .iter()
                .all(|b| b.norm() <= tol * scale);
        if accept {
            out.push(RootCluster {
                center,
                multiplicity: k,
            });
        } else {
            split(coeffs, &group, tol, scale, radius / 4.0, out);
        }
    }
}

fn linkage(roots: &[C], radius: f64) -> Vec<Vec<C>> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= radius {
                let (a, b) = (label[i], label[j]);
                if a != b {
                    for l in label.iter_mut() {
                        if *l == b {
                            *l = a;
                        }
                    }
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<C>)> = Vec::new();
    for (i, &r) in roots.iter().enumerate() {
        match groups.iter_mut().find(|(l, _)| *l == label[i]) {
            Some((_, g)) => g.push(r),
            None => groups.push((label[i], vec![r])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::real;

    fn expand(roots: &[C]) -> Vec<C> {
        let mut p = vec![real(1.0)];
        for &r in roots {
            let mut q = vec![C::default(); p.len() + 1];
            for (i, &a) in p.iter().enumerate() {
                q[i] += a;
                q[i + 1] -= a * r;
            }
            p = q;
        }
        p
    }

    #[test]
    fn simple_roots_recovered() {
        let rs = [
            C::new(1.0, 0.5),
            C::new(-0.3, 0.2),
            C::new(2.0, -1.0),
            C::new(-1.7, 0.0),
        ];
        let mut found = poly_roots(&expand(&rs)).unwrap();
        for r in rs {
            let (k, _) = found
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - r).norm().total_cmp(&(b.1 - r).norm()))
                .unwrap();
            assert!((found[k] - r).norm() < 1e-12);
            found.remove(k);
        }
    }

    #[test]
    fn double_root_clusters_to_accurate_center() {
        let a = C::new(0.7, -0.2);
        let rs = [a, a, C::new(-1.0, 0.3), C::new(0.3, 1.1), C::new(0.0, -0.9)];
        let found = poly_roots(&expand(&rs)).unwrap();
        let cl = cluster_roots(&expand(&rs), &found, 1e-6);
        assert_eq!(cl.len(), 4);
        assert_eq!(cl[0].multiplicity, 2);
        assert!((cl[0].center - a).norm() < 1e-12);
    }

    #[test]
    fn quintuple_root_at_origin() {
        let p = expand(&[C::default(); 5]);
        let cl = cluster_roots(&p, &poly_roots(&p).unwrap(), 1e-6);
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].multiplicity, 5);
    }

    #[test]
    fn mixed_multiplicities() {
        let a = C::new(0.4, 0.1);
        let b = C::new(-0.8, -0.05);
        for (roots, want) in [
            (vec![a, a, a, b, b], vec![3, 2]),
            (vec![a, a, a, a, b], vec![4, 1]),
            (vec![a, a, b, b, C::new(0.0, 0.9)], vec![2, 2, 1]),
        ] {
            let p = expand(&roots);
            let cl = cluster_roots(&p, &poly_roots(&p).unwrap(), 1e-6);
            assert_eq!(cl.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), want);
            assert!(cl.iter().any(|c| (c.center - a).norm() < 1e-9), "{cl:?}");
        }
    }

    #[test]
    fn taylor_shift_matches_derivatives() {
        let p = [real(2.0), real(-1.0), C::new(0.0, 3.0), real(5.0)];
        let z = C::new(0.3, -0.7);
        let t = taylor_shift(&p, z);
        let (v, dv) = horner(&p, z);
        assert!((t[0] - v).norm() < 1e-14 && (t[1] - dv).norm() < 1e-14);
        assert!((t[3] - p[0]).norm() < 1e-14);
    }
}
