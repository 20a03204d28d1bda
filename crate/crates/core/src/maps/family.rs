//! The map family: each variant implements [`DifferenceMap`] and is
//! registered by name for runtime selection.
//!
//! Maps may iterate in an internal state variable that differs from the
//! observed one. The Ricker map uses the canonical coordinate
//! `y = scale * x`, in which the dynamics are `y' = r0 * y * exp(-y)`
//! independent of `scale`; orbits for any two scales are then the same
//! canonical trajectory observed through different divisions, which makes
//! the scale conjugacy hold to rounding over arbitrarily long chaotic
//! runs instead of drifting apart.

use serde::Serialize;

use super::MapError;

/// One first-order map `x_{t+1} = F(x_t)`, iterated in an internal state
/// coordinate chosen by the implementation.
pub trait DifferenceMap: Send + Sync {
    fn kind(&self) -> &'static str;

    /// Validate an external initial state and convert it to internal state.
    fn init(&self, x0: f64) -> Result<f64, MapError>;

    /// One internal-state step.
    fn step(&self, state: f64) -> f64;

    /// External observable for an internal state.
    fn observe(&self, state: f64) -> f64;

    /// `|dF/dx|` of the external map, evaluated at an internal state.
    fn slope_abs(&self, state: f64) -> f64;

    /// Confirm an internal state is finite and inside the invariant domain.
    fn check(&self, state: f64, index: usize) -> Result<(), MapError>;
}

/// Quadratic map `x' = a x (1 - x)` on [0, 1]; requires `0 < a <= 4`.
pub struct Logistic {
    pub a: f64,
}

impl DifferenceMap for Logistic {
    fn kind(&self) -> &'static str {
        "logistic"
    }

    fn init(&self, x0: f64) -> Result<f64, MapError> {
        if !(0.0..=1.0).contains(&x0) || !x0.is_finite() {
            return Err(MapError::InvalidInitialState {
                map: "logistic",
                x0,
            });
        }
        Ok(x0)
    }

    fn step(&self, x: f64) -> f64 {
        self.a * x * (1.0 - x)
    }

    fn observe(&self, x: f64) -> f64 {
        x
    }

    fn slope_abs(&self, x: f64) -> f64 {
        (self.a * (1.0 - 2.0 * x)).abs()
    }

    fn check(&self, x: f64, index: usize) -> Result<(), MapError> {
        if !x.is_finite() {
            return Err(MapError::NonFinite { index });
        }
        if !(0.0..=1.0).contains(&x) {
            return Err(MapError::DomainEscape {
                map: "logistic",
                x,
                index,
            });
        }
        Ok(())
    }
}

/// Overcompensating recruitment map `x' = r0 x exp(-scale x)` on
/// densities `x >= 0`; requires `r0 > 0` and `scale > 0`.
pub struct Ricker {
    pub r0: f64,
    pub scale: f64,
}

impl DifferenceMap for Ricker {
    fn kind(&self) -> &'static str {
        "ricker"
    }

    fn init(&self, x0: f64) -> Result<f64, MapError> {
        if x0 < 0.0 || !x0.is_finite() {
            return Err(MapError::InvalidInitialState { map: "ricker", x0 });
        }
        Ok(self.scale * x0)
    }

    fn step(&self, y: f64) -> f64 {
        self.r0 * y * (-y).exp()
    }

    fn observe(&self, y: f64) -> f64 {
        y / self.scale
    }

    fn slope_abs(&self, y: f64) -> f64 {
        // d/dx [r0 x e^{-scale x}] = r0 e^{-y} (1 - y) at y = scale x.
        (self.r0 * (-y).exp() * (1.0 - y)).abs()
    }

    fn check(&self, y: f64, index: usize) -> Result<(), MapError> {
        if !y.is_finite() {
            return Err(MapError::NonFinite { index });
        }
        if y < 0.0 {
            return Err(MapError::DomainEscape {
                map: "ricker",
                x: self.observe(y),
                index,
            });
        }
        Ok(())
    }
}

/// Validated parameters for one member of the map family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapSpec {
    Logistic { a: f64 },
    Ricker { r0: f64, scale: f64 },
}

impl MapSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            MapSpec::Logistic { .. } => "logistic",
            MapSpec::Ricker { .. } => "ricker",
        }
    }

    pub fn validate(&self) -> Result<(), MapError> {
        match *self {
            MapSpec::Logistic { a } => {
                if !a.is_finite() || a <= 0.0 || a > 4.0 {
                    return Err(MapError::InvalidParameter {
                        map: "logistic",
                        detail: format!("a = {a} outside (0, 4]"),
                    });
                }
            }
            MapSpec::Ricker { r0, scale } => {
                if !r0.is_finite() || r0 <= 0.0 {
                    return Err(MapError::InvalidParameter {
                        map: "ricker",
                        detail: format!("r0 = {r0} must be positive"),
                    });
                }
                if !scale.is_finite() || scale <= 0.0 {
                    return Err(MapError::InvalidParameter {
                        map: "ricker",
                        detail: format!("scale = {scale} must be positive"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Box<dyn DifferenceMap>, MapError> {
        self.validate()?;
        Ok(match *self {
            MapSpec::Logistic { a } => Box::new(Logistic { a }),
            MapSpec::Ricker { r0, scale } => Box::new(Ricker { r0, scale }),
        })
    }

    /// The parameter a bifurcation scan sweeps: `a` for logistic, `r0`
    /// for Ricker.
    pub fn control_parameter(&self) -> f64 {
        match *self {
            MapSpec::Logistic { a } => a,
            MapSpec::Ricker { r0, .. } => r0,
        }
    }

    pub fn with_control_parameter(&self, value: f64) -> MapSpec {
        match *self {
            MapSpec::Logistic { .. } => MapSpec::Logistic { a: value },
            MapSpec::Ricker { scale, .. } => MapSpec::Ricker { r0: value, scale },
        }
    }
}

/// Registry entry: builds a spec from loosely typed CLI/config parameters.
pub struct MapFamily {
    pub name: &'static str,
    pub build_spec: fn(&MapParams) -> Result<MapSpec, MapError>,
}

/// Optional parameters as they arrive from a command line; absent values
/// fall back to the family defaults.
#[derive(Clone, Copy, Debug, Default)]
pub struct MapParams {
    pub a: Option<f64>,
    pub r0: Option<f64>,
    pub scale: Option<f64>,
}

static FAMILIES: &[MapFamily] = &[
    MapFamily {
        name: "logistic",
        build_spec: |p| {
            let spec = MapSpec::Logistic {
                a: p.a.unwrap_or(4.0),
            };
            spec.validate()?;
            Ok(spec)
        },
    },
    MapFamily {
        name: "ricker",
        build_spec: |p| {
            let spec = MapSpec::Ricker {
                r0: p.r0.unwrap_or(20.0),
                scale: p.scale.unwrap_or(1.0),
            };
            spec.validate()?;
            Ok(spec)
        },
    },
];

/// Look a family up by its registered name.
pub fn family(name: &str) -> Result<&'static MapFamily, MapError> {
    FAMILIES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| MapError::UnknownKind(name.to_string()))
}

pub fn family_names() -> Vec<&'static str> {
    FAMILIES.iter().map(|f| f.name).collect()
}
