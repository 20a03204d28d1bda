//! Forecasting methods behind one trait, registered by name, so callers
//! can swap the nonlinear predictor and the linear baseline at runtime.

use super::ar::ar_rho_curve;
use super::rho::{rho_curve, RhoCurve};
use super::{EmbeddingConfig, ForecastError, Protocol, Series};

pub trait ForecastMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn rho_curve(&self, series: &Series, p_max: usize) -> Result<RhoCurve, ForecastError>;
}

/// Simplex projection with a fixed embedding configuration.
pub struct SimplexMethod {
    pub config: EmbeddingConfig,
}

impl ForecastMethod for SimplexMethod {
    fn name(&self) -> &'static str {
        "simplex"
    }

    fn rho_curve(&self, series: &Series, p_max: usize) -> Result<RhoCurve, ForecastError> {
        rho_curve(series, &self.config, p_max)
    }
}

/// Global linear autoregression of fixed order.
pub struct ArBaselineMethod {
    pub order: usize,
    pub protocol: Protocol,
}

impl ForecastMethod for ArBaselineMethod {
    fn name(&self) -> &'static str {
        "ar"
    }

    fn rho_curve(&self, series: &Series, p_max: usize) -> Result<RhoCurve, ForecastError> {
        ar_rho_curve(series, self.order, self.protocol, p_max)
    }
}

/// Instantiate a registered method by name.
pub fn method(
    name: &str,
    config: EmbeddingConfig,
    order: usize,
) -> Result<Box<dyn ForecastMethod>, ForecastError> {
    match name {
        "simplex" => Ok(Box::new(SimplexMethod { config })),
        "ar" => Ok(Box::new(ArBaselineMethod {
            order,
            protocol: config.protocol,
        })),
        other => Err(ForecastError::UnknownMethod(other.to_string())),
    }
}

pub fn method_names() -> [&'static str; 2] {
    ["simplex", "ar"]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forecasting::synthetic::sine_series;

    #[test]
    fn registry_dispatches_both_methods() {
        let series = sine_series(600, 20.0).unwrap();
        let config = EmbeddingConfig::new(3, 1, 0, Protocol::HalfSplitForward);
        for name in method_names() {
            let m = method(name, config, 3).unwrap();
            assert_eq!(m.name(), name);
            let curve = m.rho_curve(&series, 5).unwrap();
            assert!(curve.rho_at(1).unwrap() > 0.95, "{name}");
        }
        assert!(matches!(
            method("wavelet", config, 3),
            Err(ForecastError::UnknownMethod(_))
        ));
    }
}
