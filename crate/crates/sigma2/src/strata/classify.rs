use super::charts::{gamma_from_mu, lambda0_chart, lambda1_chart};
use super::tables::{delta_poly, gamma_polys};
use super::G2Params;
use crate::elliptic::EllipticCurveParams;
use crate::numerics::real;
use crate::numerics::roots::{cluster_roots, horner, poly_roots, RootCluster};
use crate::{Error, NumericsConfig, Result, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stratum {
    Lambda2,
    Lambda1 { a2: C, gamma: EllipticCurveParams },
    Lambda0 { a2: C, b2: C },
}

impl Stratum {
    pub fn name(&self) -> &'static str {
        match self {
            Stratum::Lambda2 => "Lambda2",
            Stratum::Lambda1 { .. } => "Lambda1",
            Stratum::Lambda0 { .. } => "Lambda0",
        }
    }
}

/// |Δ| and max|Γₖ| after weight normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    pub delta_abs: f64,
    pub gamma_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StratumClassification {
    pub stratum: Stratum,
    /// Root multiplicities of the quintic, non-increasing.
    pub partition: Vec<usize>,
    pub rank: usize,
    pub residuals: Residuals,
}

/// Rank of the period lattice for a root-multiplicity pattern: one less than the number
/// of distinct roots.
pub fn rank_of_partition(partition: &[usize]) -> usize {
    partition.len().saturating_sub(1)
}

/// Weight scale s = max |λᵢ|^{1/i}, with i the Sato weight.
pub fn weight_scale(lambda: &G2Params) -> f64 {
    lambda
        .to_array()
        .iter()
        .zip([4.0, 6.0, 8.0, 10.0])
        .map(|(l, w)| l.norm().powf(1.0 / w))
        .fold(0.0, f64::max)
}

pub fn normalized(lambda: &G2Params, s: f64) -> [C; 4] {
    let l = lambda.to_array();
    [
        l[0] / s.powi(4),
        l[1] / s.powi(6),
        l[2] / s.powi(8),
        l[3] / s.powi(10),
    ]
}

fn derivative(coeffs: &[C]) -> Vec<C> {
    let n = coeffs.len() - 1;
    coeffs[..n]
        .iter()
        .enumerate()
        .map(|(i, a)| a * (n - i) as f64)
        .collect()
}

/// A root of multiplicity m is a simple root of the (m−1)-th derivative; Newton there
/// recovers full precision from the cluster mean.
fn refine(coeffs: &[C], cluster: RootCluster) -> C {
    let mut d = coeffs.to_vec();
    for _ in 1..cluster.multiplicity {
        d = derivative(&d);
    }
    let mut z = cluster.center;
    for _ in 0..6 {
        let (p, dp) = horner(&d, z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        if (next - z).norm() > 1e-3 {
            break;
        }
        z = next;
    }
    z
}

/// Root clusters of the weight-normalized quintic, centers in normalized units.
fn quintic_clusters(ln: &[C; 4], cfg: &NumericsConfig) -> Result<(Vec<C>, Vec<RootCluster>)> {
    let coeffs = [real(1.0), C::default(), ln[0], ln[1], ln[2], ln[3]];
    let roots = poly_roots(&coeffs)?;
    let mut cl = cluster_roots(&coeffs, &roots, cfg.cluster_tol);
    for c in cl.iter_mut() {
        c.center = refine(&coeffs, *c);
    }
    Ok((coeffs.to_vec(), cl))
}

fn lex(a: &C, b: &C) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Stratum of λ from the multiplicities of the quintic's roots, cross-checked against the
/// sizes of Δ and Γ.
pub fn classify(lambda: &G2Params, cfg: &NumericsConfig) -> Result<StratumClassification> {
    let la = lambda.to_array();
    if la.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::InvalidInput("non-finite λ".into()));
    }
    let s = weight_scale(lambda);
    if s == 0.0 {
        return Ok(StratumClassification {
            stratum: Stratum::Lambda0 {
                a2: C::default(),
                b2: C::default(),
            },
            partition: vec![5],
            rank: 0,
            residuals: Residuals {
                delta_abs: 0.0,
                gamma_norm: 0.0,
            },
        });
    }
    let ln = normalized(lambda, s);
    let (_, clusters) = quintic_clusters(&ln, cfg)?;
    let partition: Vec<usize> = clusters.iter().map(|c| c.multiplicity).collect();
    let residuals = Residuals {
        delta_abs: delta_poly().eval(&ln).norm(),
        gamma_norm: gamma_polys()
            .iter()
            .map(|g| g.eval(&ln).norm())
            .fold(0.0, f64::max),
    };
    // Inconclusive band between tol² and √tol; only a value outside it contradicts the
    // root-cluster verdict.
    let (lo, hi) = (cfg.cluster_tol * cfg.cluster_tol, cfg.cluster_tol.sqrt());
    let disagree = |what: &str| {
        Err(Error::AmbiguousClassification(format!(
            "partition {partition:?} but {what} (|Δ| = {:.3e}, |Γ| = {:.3e})",
            residuals.delta_abs, residuals.gamma_norm
        )))
    };
    // x has weight 2, so roots scale by s²
    let centers: Vec<C> = clusters.iter().map(|c| c.center * (s * s)).collect();
    let stratum = match partition.as_slice() {
        [1, 1, 1, 1, 1] => {
            if residuals.delta_abs < lo {
                return disagree("Δ vanishes");
            }
            Stratum::Lambda2
        }
        [2, 1, 1, 1] | [3, 1, 1] => {
            if residuals.delta_abs > hi {
                return disagree("Δ is not small");
            }
            if residuals.gamma_norm < lo {
                return disagree("Γ vanishes");
            }
            let a2 = centers[0];
            let mu4 = la[0] + a2 * a2 * 3.0;
            let mu6 = la[1] + a2 * mu4 * 2.0 - a2.powi(3) * 2.0;
            let (g4, g6) = gamma_from_mu(a2, mu4, mu6);
            Stratum::Lambda1 {
                a2,
                gamma: EllipticCurveParams::new(g4, g6),
            }
        }
        [2, 2, 1] | [3, 2] | [4, 1] | [5] => {
            if residuals.delta_abs > hi || residuals.gamma_norm > hi {
                return disagree("Δ or Γ is not small");
            }
            let (mut a2, mut b2) = match partition.as_slice() {
                [2, 2, 1] | [3, 2] => (centers[0], centers[1]),
                _ => (centers[0], centers[0]),
            };
            if lex(&b2, &a2).is_lt() {
                std::mem::swap(&mut a2, &mut b2);
            }
            Stratum::Lambda0 { a2, b2 }
        }
        _ => return Err(Error::numerical("unexpected root pattern", f64::NAN)),
    };
    let rank = rank_of_partition(&partition);
    let out = StratumClassification {
        stratum,
        partition,
        rank,
        residuals,
    };
    check_roundtrip(lambda, &out, s, cfg)?;
    Ok(out)
}

/// The recovered chart point must reproduce λ.
fn check_roundtrip(
    lambda: &G2Params,
    c: &StratumClassification,
    s: f64,
    cfg: &NumericsConfig,
) -> Result<()> {
    let back = match c.stratum {
        Stratum::Lambda2 => return Ok(()),
        Stratum::Lambda1 { a2, gamma } => lambda1_chart(a2, gamma.gamma4, gamma.gamma6),
        Stratum::Lambda0 { a2, b2 } => lambda0_chart(a2, b2),
    };
    let la = lambda.to_array();
    let err = la
        .iter()
        .zip(&back)
        .zip([4, 6, 8, 10])
        .map(|((x, y), w)| (x - y).norm() / s.powi(w))
        .fold(0.0, f64::max);
    if err > cfg.cluster_tol.sqrt() {
        return Err(Error::AmbiguousClassification(format!(
            "{} parameters reproduce λ only to {err:.3e}",
            c.stratum.name()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::charts::{lambda_from_lambda0, lambda_from_lambda1};

    fn g(l4: f64, l6: f64, l8: f64, l10: f64) -> G2Params {
        G2Params::from_array([real(l4), real(l6), real(l8), real(l10)])
    }

    #[test]
    fn worked_examples() {
        let cfg = NumericsConfig::default();
        let c = classify(&g(0.0, 0.0, 0.0, 0.0), &cfg).unwrap();
        assert_eq!((c.partition.clone(), c.rank), (vec![5], 0));
        let c = classify(&g(0.0, 1.0, 0.0, 0.0), &cfg).unwrap();
        assert_eq!((c.partition.clone(), c.rank), (vec![2, 1, 1, 1], 3));
        match c.stratum {
            Stratum::Lambda1 { a2, gamma } => {
                assert!(a2.norm() < 1e-12);
                assert!(gamma.gamma4.norm() < 1e-12 && (gamma.gamma6 - 1.0).norm() < 1e-12);
            }
            s => panic!("{s:?}"),
        }
        let c = classify(&g(-3.0, 2.0, 0.0, 0.0), &cfg).unwrap();
        assert_eq!((c.partition.clone(), c.rank), (vec![2, 2, 1], 2));
        match c.stratum {
            Stratum::Lambda0 { a2, b2 } => assert!(
                b2.norm() < 1e-12 && (a2 - 1.0).norm() < 1e-12
                    || (a2.norm() < 1e-12 && (b2 - 1.0).norm() < 1e-12)
            ),
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn all_seven_partitions() {
        let cfg = NumericsConfig::default();
        let a = C::new(0.7, 0.2);
        let gm = EllipticCurveParams::new(C::new(0.3, -0.4), C::new(0.5, 0.1));
        // (3,1,1): a₂ is a root of the cubic factor, i.e. 5a₂/3 = e_i of γ
        let e = crate::elliptic::EllipticContext::new(gm).unwrap().roots[0];
        let cases: Vec<(G2Params, Vec<usize>)> = vec![
            (g(0.3, -0.7, 1.1, 0.4), vec![1, 1, 1, 1, 1]),
            (lambda_from_lambda1(a, gm).unwrap(), vec![2, 1, 1, 1]),
            (lambda_from_lambda1(e * 0.6, gm).unwrap(), vec![3, 1, 1]),
            (lambda_from_lambda0(a, C::new(-0.4, 0.5)), vec![2, 2, 1]),
            (lambda_from_lambda0(a, a * -1.5), vec![3, 2]),
            (lambda_from_lambda0(a, a), vec![4, 1]),
            (lambda_from_lambda0(C::default(), C::default()), vec![5]),
        ];
        for (lam, want) in cases {
            let c = classify(&lam, &cfg).unwrap();
            assert_eq!(c.partition, want);
            assert_eq!(c.rank, want.len() - 1);
        }
    }
}
