//! Per-patch host-parasitoid dynamics and its interior equilibrium.

use super::{LatticeError, PatchParams};

/// One generation of within-patch dynamics:
///
/// ```text
/// H' = r0 * H * exp(-attack * P)
/// P' = c  * H * (1 - exp(-attack * P))
/// ```
///
/// The escape factor underflows to 0 for enormous parasitoid loads, which
/// is the correct limit (every host is found). The parasitized fraction
/// is evaluated as `-exp_m1(-attack * P)`: the naive `1 - exp(...)`
/// flushes to zero already near P ~ 1e-16 and would wipe out parasitoid
/// troughs three hundred decades above true underflow, breaking the
/// divergence route to extinction.
pub fn local_update(h: f64, p: f64, params: &PatchParams) -> (f64, f64) {
    let exponent = -params.attack * p;
    (
        params.r0 * h * exponent.exp(),
        params.c * h * -exponent.exp_m1(),
    )
}

/// The positive fixed point of [`local_update`]:
/// `P* = ln(r0) / attack`, `H* = r0 ln(r0) / (attack c (r0 - 1))`.
/// Exists only for `r0 > 1`.
pub fn nb_equilibrium(params: &PatchParams) -> Result<(f64, f64), LatticeError> {
    params.validate()?;
    if params.r0 <= 1.0 {
        return Err(LatticeError::NoEquilibrium { r0: params.r0 });
    }
    let ln_r0 = params.r0.ln();
    let p_star = ln_r0 / params.attack;
    let h_star = params.r0 * ln_r0 / (params.attack * params.c * (params.r0 - 1.0));
    Ok((h_star, p_star))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(r0: f64, attack: f64, c: f64) -> PatchParams {
        PatchParams { r0, attack, c }
    }

    #[test]
    fn no_parasitoids_means_pure_growth() {
        let (h, p) = local_update(3.0, 0.0, &params(2.0, 1.0, 1.0));
        assert_eq!(h, 6.0);
        assert_eq!(p, 0.0);
    }

    #[test]
    fn no_hosts_means_nothing() {
        let (h, p) = local_update(0.0, 5.0, &params(2.0, 1.0, 1.0));
        assert_eq!(h, 0.0);
        assert_eq!(p, 0.0);
    }

    #[test]
    #[allow(clippy::approx_constant)] // rounded reference values
    fn equilibrium_is_a_fixed_point() {
        // Solve by substitution independently of nb_equilibrium:
        // exp(-P*) = 1/r0 gives P*, then P* = c H* (1 - 1/r0) gives H*.
        let r0: f64 = 2.0;
        let p_star = r0.ln();
        let h_star = p_star / (1.0 - 1.0 / r0);
        assert!((h_star - 2.0 * std::f64::consts::LN_2).abs() < 1e-15);

        let pp = params(r0, 1.0, 1.0);
        let (h_eq, p_eq) = nb_equilibrium(&pp).unwrap();
        assert!((h_eq - h_star).abs() < 1e-12);
        assert!((p_eq - p_star).abs() < 1e-12);
        assert!((h_eq - 1.3863).abs() < 1e-4);
        assert!((p_eq - 0.6931).abs() < 1e-4);

        let (h_next, p_next) = local_update(h_eq, p_eq, &pp);
        assert!((h_next - h_eq).abs() < 1e-12);
        assert!((p_next - p_eq).abs() < 1e-12);
    }

    #[test]
    fn equilibrium_with_general_parameters() {
        let pp = params(std::f64::consts::E, 1.0, 1.0);
        let (h_eq, p_eq) = nb_equilibrium(&pp).unwrap();
        assert!((p_eq - 1.0).abs() < 1e-12);
        let e = std::f64::consts::E;
        assert!((h_eq - e / (e - 1.0)).abs() < 1e-12);
        assert!((h_eq - 1.5820).abs() < 1e-4);

        // Scaled parameters still fix their own equilibrium.
        let pp = params(7.0, 2.0, 3.0);
        let (h_eq, p_eq) = nb_equilibrium(&pp).unwrap();
        let (h_next, p_next) = local_update(h_eq, p_eq, &pp);
        assert!((h_next - h_eq).abs() < 1e-12 * h_eq);
        assert!((p_next - p_eq).abs() < 1e-12 * p_eq);
    }

    #[test]
    fn boundary_r0_has_no_equilibrium() {
        assert!(matches!(
            nb_equilibrium(&params(1.0, 1.0, 1.0)),
            Err(LatticeError::NoEquilibrium { .. })
        ));
        assert!(matches!(
            nb_equilibrium(&params(0.5, 1.0, 1.0)),
            Err(LatticeError::NoEquilibrium { .. })
        ));
    }

    #[test]
    fn huge_parasitoid_load_underflows_cleanly() {
        let (h, p) = local_update(1.0, 1e6, &params(2.0, 1.0, 1.0));
        assert_eq!(h, 0.0);
        assert_eq!(p, 1.0);
    }
}
