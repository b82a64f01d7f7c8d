use super::C;
use crate::{Error, NumericsConfig, Result};

/// Central stencils `(offset, weight)` for the k-th derivative; all have even error series.
fn stencil(k: usize) -> &'static [(i32, f64)] {
    match k {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        4 => &[(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)],
        _ => &[],
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Differ {
    /// Base step; a derivative of total order n starts from `step^(1/(n+1))`, which keeps
    /// roundoff (growing like eps/h^n) in check for the higher orders.
    pub step: f64,
    /// Richardson extrapolation levels.
    pub levels: usize,
}

impl From<&NumericsConfig> for Differ {
    fn from(c: &NumericsConfig) -> Self {
        Differ {
            step: c.fd_step,
            levels: c.fd_order,
        }
    }
}

impl Default for Differ {
    fn default() -> Self {
        Self::from(&NumericsConfig::default())
    }
}

impl Differ {
    pub fn with_step(self, step: f64) -> Self {
        Differ { step, ..self }
    }

    /// Mixed partial derivative of a holomorphic `f` at `x`, differencing along the real
    /// direction in each variable. Returns the extrapolated value and the last Richardson
    /// correction as an error estimate.
    pub fn partial<F>(&self, f: F, x: &[C], orders: &[usize]) -> Result<(C, f64)>
    where
        F: Fn(&[C]) -> Result<C>,
    {
        if orders.len() != x.len() || orders.iter().any(|&k| k > 4) {
            return Err(Error::InvalidInput(
                "derivative orders must be at most 4 per variable".into(),
            ));
        }
        let n: usize = orders.iter().sum();
        if n == 0 {
            return Ok((f(x)?, 0.0));
        }
        let h0 = self.step.powf(1.0 / (n as f64 + 1.0)).max(self.step);
        let levels = self.levels.max(1);
        let mut table: Vec<Vec<C>> = Vec::with_capacity(levels + 1);
        for i in 0..=levels {
            let h = h0 / (1u64 << i) as f64;
            let mut row = vec![tensor(&f, x, orders, h)?];
            for j in 1..=i {
                let r = 4f64.powi(j as i32);
                let v = row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / (r - 1.0);
                row.push(v);
            }
            table.push(row);
        }
        let best = table[levels][levels];
        let err = (best - table[levels][levels - 1]).norm();
        Ok((best, err))
    }

    pub fn derivative<F>(&self, f: F, x: C, order: usize) -> Result<C>
    where
        F: Fn(C) -> Result<C>,
    {
        Ok(self.partial(|v: &[C]| f(v[0]), &[x], &[order])?.0)
    }
}

fn tensor<F>(f: &F, x: &[C], orders: &[usize], h: f64) -> Result<C>
where
    F: Fn(&[C]) -> Result<C>,
{
    let dims: Vec<&[(i32, f64)]> = orders.iter().map(|&k| stencil(k)).collect();
    let mut idx = vec![0usize; x.len()];
    let mut point = x.to_vec();
    let mut sum = C::default();
    loop {
        let mut w = 1.0;
        for (d, s) in dims.iter().enumerate() {
            let (off, c) = s[idx[d]];
            w *= c;
            point[d] = x[d] + off as f64 * h;
        }
        sum += f(&point)? * w;
        let mut d = 0;
        loop {
            if d == x.len() {
                let n: i32 = orders.iter().sum::<usize>() as i32;
                return Ok(sum / h.powi(n));
            }
            idx[d] += 1;
            if idx[d] < dims[d].len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_exp() {
        let d = Differ::default();
        let z = C::new(0.3, -0.4);
        for k in 1..=4 {
            let v = d.derivative(|t| Ok(t.exp()), z, k).unwrap();
            // roundoff floor grows like eps / h^k
            let tol = [0.0, 1e-11, 1e-10, 1e-9, 1e-7][k];
            assert!(
                (v - z.exp()).norm() < tol,
                "order {k}: {}",
                (v - z.exp()).norm()
            );
        }
    }

    #[test]
    fn mixed_partial_of_product() {
        let d = Differ::default();
        let f = |v: &[C]| Ok((v[0] * v[1]).sin() + v[0].powi(3) * v[1]);
        let x = [C::new(0.2, 0.1), C::new(-0.5, 0.3)];
        let (a, b) = (x[0], x[1]);
        // d/db d2/da2 of sin(ab) + a^3 b
        let (v, _) = d.partial(f, &x, &[2, 1]).unwrap();
        let want = -b * (a * b).sin() * 2.0 - a * b * b * (a * b).cos() + a * 6.0;
        assert!((v - want).norm() < 1e-8, "{v} vs {want}");
    }
}
