use super::{
    DynamicSurgeParams, DynamicSwayYawParams, OperatingRegion, PwmFrame, StaticSurgeParams,
    StaticSwayYawParams,
};
use crate::error::{ensure_finite, Error, Result};

fn thrust_terms(frame: &PwmFrame, x: [f64; 4]) -> f64 {
    let s = frame.region().asymmetry_sign();
    let (mean, diff) = (frame.delta_mean(), frame.delta_diff());
    s * x[0] * frame.quadratic_term() + x[1] * mean * diff + s * x[2] * mean + x[3] * 0.5 * diff
}

/// Surge input gain `x(6)(δ̄² + Δδ²/4) + x(7)δ̄`, valid on FF only.
pub fn input_gain_static_u(frame: &PwmFrame, p: &StaticSurgeParams) -> Result<f64> {
    if frame.region() != OperatingRegion::FF {
        return Err(Error::Domain {
            region: frame.region(),
            context: "the surge input gain",
        });
    }
    Ok(p.at(6) * frame.quadratic_term() + p.at(7) * frame.delta_mean())
}

/// Sway or yaw input gain. FF drops the asymmetric terms 10 and 12, FR
/// adds them and RF subtracts them.
pub fn input_gain_static_p(frame: &PwmFrame, p: &StaticSwayYawParams) -> Result<f64> {
    if frame.region() == OperatingRegion::RR {
        return Err(Error::Domain {
            region: frame.region(),
            context: "the sway/yaw input gain",
        });
    }
    Ok(thrust_terms(
        frame,
        [p.at(10), p.at(11), p.at(12), p.at(13)],
    ))
}

/// Parameter vector feeding one dynamic input-gain recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DynamicGainParams {
    Surge(DynamicSurgeParams),
    SwayYaw(DynamicSwayYawParams),
}

/// `G(k) = α G(k−1) + thrust terms of δ(k−1)`.
///
/// The surge form uses entries 10 and 11 and, like its static counterpart,
/// is only defined on FF. The sway/yaw form uses entries 18..21 with the
/// same region signs as the static map.
pub fn input_gain_dynamic_step(
    g_prev: f64,
    frame_prev: &PwmFrame,
    alpha: f64,
    p: &DynamicGainParams,
) -> Result<f64> {
    ensure_finite("g_prev", g_prev)?;
    ensure_finite("alpha", alpha)?;
    let region = frame_prev.region();
    let forced = match p {
        DynamicGainParams::Surge(x) => {
            if region != OperatingRegion::FF {
                return Err(Error::Domain {
                    region,
                    context: "the dynamic surge input gain",
                });
            }
            x.at(10) * frame_prev.quadratic_term() + x.at(11) * frame_prev.delta_mean()
        }
        DynamicGainParams::SwayYaw(x) => {
            if region == OperatingRegion::RR {
                return Err(Error::Domain {
                    region,
                    context: "the dynamic sway/yaw input gain",
                });
            }
            thrust_terms(frame_prev, [x.at(18), x.at(19), x.at(20), x.at(21)])
        }
    };
    Ok(alpha * g_prev + forced)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surge(x6: f64, x7: f64) -> StaticSurgeParams {
        let mut x = [0.0; 7];
        x[5] = x6;
        x[6] = x7;
        StaticSurgeParams(x)
    }

    #[test]
    fn surge_table_value() {
        let f = PwmFrame::from_mean_diff(1.0, 0.0).unwrap();
        let g = input_gain_static_u(&f, &surge(-0.0145, 0.1403)).unwrap();
        assert!((g - 0.1258).abs() < 1e-12);
        let zero = PwmFrame::from_mean_diff(0.0, 0.0).unwrap();
        assert_eq!(
            input_gain_static_u(&zero, &surge(-0.0145, 0.1403)).unwrap(),
            0.0
        );
    }

    #[test]
    fn surge_rejects_turning_regions() {
        let f = PwmFrame::new(0.3, -0.3).unwrap();
        assert!(matches!(
            input_gain_static_u(&f, &surge(1.0, 1.0)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn sway_ff_value() {
        let mut x = [0.0; 13];
        x[9] = 123.0;
        x[10] = -0.0381;
        x[11] = 456.0;
        x[12] = -0.0505;
        let f = PwmFrame::from_mean_diff(0.5, 0.2).unwrap();
        let g = input_gain_static_p(&f, &StaticSwayYawParams(x)).unwrap();
        assert!((g + 0.00886).abs() < 1e-12, "{g}");
    }

    #[test]
    fn sway_fr_rf_difference() {
        let x = StaticSwayYawParams(std::array::from_fn(|i| 0.1 * (i as f64 + 1.0)));
        let fr = PwmFrame::from_mean_diff(0.2, 0.6).unwrap();
        let rf = PwmFrame::from_mean_diff(0.2, -0.6).unwrap();
        assert_eq!(fr.region(), OperatingRegion::FR);
        assert_eq!(rf.region(), OperatingRegion::RF);
        // Compare at equal (mean, diff): build the RF frame with a flipped
        // region by negating the asymmetric terms by hand.
        let s = fr.quadratic_term();
        let m = fr.delta_mean();
        let d = fr.delta_diff();
        let g_fr = input_gain_static_p(&fr, &x).unwrap();
        let g_rf_same_inputs = -x.at(10) * s + x.at(11) * m * d - x.at(12) * m + x.at(13) * d / 2.0;
        assert!((g_fr - g_rf_same_inputs - 2.0 * (x.at(10) * s + x.at(12) * m)).abs() < 1e-15);
    }

    #[test]
    fn rr_is_outside_domain() {
        let f = PwmFrame::new(-0.2, -0.4).unwrap();
        let x = StaticSwayYawParams::default();
        assert!(input_gain_static_p(&f, &x).is_err());
        let p = DynamicGainParams::SwayYaw(DynamicSwayYawParams::default());
        assert!(input_gain_dynamic_step(0.0, &f, 0.5, &p).is_err());
    }

    #[test]
    fn dynamic_memoryless_matches_static_form() {
        let x = DynamicSwayYawParams(std::array::from_fn(|i| (i as f64 - 10.0) * 0.01));
        let f = PwmFrame::new(0.6, -0.2).unwrap();
        let g = input_gain_dynamic_step(5.0, &f, 0.0, &DynamicGainParams::SwayYaw(x)).unwrap();
        let mut st = [0.0; 13];
        st[9..13].copy_from_slice(&x.0[17..21]);
        let g_st = input_gain_static_p(&f, &StaticSwayYawParams(st)).unwrap();
        assert!((g - g_st).abs() < 1e-15);
    }

    #[test]
    fn dynamic_homogeneous_decay() {
        let p = DynamicGainParams::Surge(DynamicSurgeParams(std::array::from_fn(|i| i as f64)));
        let mut g = 2.0;
        let alpha: f64 = 0.9;
        for k in 1..=50 {
            g = input_gain_dynamic_step(g, &PwmFrame::NEUTRAL, alpha, &p).unwrap();
            assert!((g - 2.0 * alpha.powi(k)).abs() < 1e-14);
        }
    }
}
