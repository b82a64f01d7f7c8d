/// Tolerances and step sizes shared by every numerical routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsConfig {
    /// Base step for finite differences.
    pub fd_step: f64,
    /// Number of Richardson extrapolation levels, 1..=4.
    pub fd_order: usize,
    /// Gauss-Legendre nodes per quadrature segment.
    pub quad_nodes: usize,
    /// Default verification tolerance.
    pub tol: f64,
    /// Radius used when clustering polynomial roots and detecting poles.
    pub cluster_tol: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            fd_step: 1e-4,
            fd_order: 3,
            quad_nodes: 64,
            tol: 1e-10,
            cluster_tol: 1e-6,
        }
    }
}

impl NumericsConfig {
    pub fn validate(&self) -> crate::Result<()> {
        let ok = self.fd_step > 0.0
            && (1..=4).contains(&self.fd_order)
            && self.quad_nodes > 0
            && self.tol > 0.0
            && self.cluster_tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(crate::Error::InvalidInput(format!(
                "invalid numerics config {self:?}"
            )))
        }
    }
}
