/// Numerical tolerances shared by the float code paths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Margin by which strict inequalities on angles must hold.
    pub realizability: f64,
    /// Smallest magnitude accepted for determinants and cofactors before
    /// a tetrahedron is treated as degenerate.
    pub degeneration: f64,
    /// Slack in the segment test `<p, q> < -1`.
    pub segment: f64,
    /// Residual tolerance for float-mode verification.
    pub verify: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            realizability: 1e-12,
            degeneration: 1e-9,
            segment: 1e-10,
            verify: 1e-12,
        }
    }
}

impl Tolerances {
    pub const ENV_VAR: &'static str = "ANGLERS_TOL";

    /// Defaults, with `verify` taken from `ANGLERS_TOL` when it parses as a
    /// positive float.
    pub fn from_env() -> Self {
        let mut tol = Tolerances::default();
        if let Some(v) = std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| *v > 0.0 && v.is_finite())
        {
            tol.verify = v;
        }
        tol
    }
}
