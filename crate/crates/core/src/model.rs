//! Canonical parameterization of the two-user relay network and the
//! deterministic SINR mappings shared by the analytic and Monte Carlo paths.
//!
//! The base station superimposes both users' signals with power split
//! `a1 < a2`; the near user decodes the far user's message first (SIC),
//! then its own, and decode-and-forwards the far message. In FD mode the
//! relay suffers residual loop interference with average power `omega_li`;
//! in HD mode the loop term vanishes and every rate carries a 1/2 prefactor.

use crate::{Error, Result};

/// Relay duplexing mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Duplex {
    /// Full duplex: simultaneous receive/forward, loop interference active.
    Fd,
    /// Half duplex: two-slot relaying, no loop interference, 1/2 rate factor.
    Hd,
}

/// How the HD target SINR is derived from the target rate R.
///
/// The conventional half-duplex penalty gives `2^(2R) - 1`. The literal
/// reading of the source expression is `2^(2R - 1)`; it is kept selectable
/// for reproduction experiments but is not the default because it conflicts
/// with the FD convention `2^R - 1` at the continuity point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HdThresholdConvention {
    #[default]
    Standard,
    PaperLiteral,
}

/// Static system parameters.
///
/// All channel statistics are linear average power gains; `r1`/`r2` are the
/// target rates in bits per channel use for the near and far user.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Power allocation coefficient of the near user D1.
    pub a1: f64,
    /// Power allocation coefficient of the far user D2 (`a1 + a2 = 1`).
    pub a2: f64,
    /// Average power gain of the BS -> D2 direct link.
    pub omega0: f64,
    /// Average power gain of the BS -> D1 link.
    pub omega1: f64,
    /// Average power gain of the D1 -> D2 relay link.
    pub omega2: f64,
    /// Average residual loop-interference power at the FD relay (>= 0).
    pub omega_li: f64,
    /// Residual-interference coupling level between relay and direct links.
    pub kappa: f64,
    /// Target rate of D1 in BPCU.
    pub r1: f64,
    /// Target rate of D2 in BPCU.
    pub r2: f64,
    pub duplex: Duplex,
    /// Whether the BS -> D2 direct link participates.
    pub direct_link: bool,
    pub hd_convention: HdThresholdConvention,
}

impl SystemConfig {
    /// Reference scenario: D2 at unit distance from the BS, D1 at normalized
    /// distance 0.3 with path-loss exponent 2, power split 0.2/0.8, loop
    /// interference at -15 dB. Target rates are (3, 0.5) BPCU without the
    /// direct link and (2, 1) BPCU with it.
    pub fn reference(duplex: Duplex, direct_link: bool) -> Self {
        let d = 0.3f64;
        let alpha = 2.0f64;
        let (r1, r2) = if direct_link { (2.0, 1.0) } else { (3.0, 0.5) };
        Self {
            a1: 0.2,
            a2: 0.8,
            omega0: 1.0,
            omega1: d.powf(-alpha),
            omega2: (1.0 - d).powf(-alpha),
            omega_li: crate::db_to_linear(-15.0),
            kappa: 0.0,
            r1,
            r2,
            duplex,
            direct_link,
            hd_convention: HdThresholdConvention::Standard,
        }
    }

    pub fn with_omega_li_db(mut self, db: f64) -> Self {
        self.omega_li = crate::db_to_linear(db);
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_rates(mut self, r1: f64, r2: f64) -> Self {
        self.r1 = r1;
        self.r2 = r2;
        self
    }

    /// Switching operation factor: 1 in FD mode, 0 in HD mode.
    pub fn switching_factor(&self) -> f64 {
        match self.duplex {
            Duplex::Fd => 1.0,
            Duplex::Hd => 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let close = (self.a1 + self.a2 - 1.0).abs() <= 1e-12;
        if !close {
            return Err(Error::InvalidConfig(format!(
                "power allocation must satisfy a1 + a2 = 1, got {} + {}",
                self.a1, self.a2
            )));
        }
        if !(self.a1 > 0.0 && self.a1 < self.a2) {
            return Err(Error::InvalidConfig(format!(
                "power allocation must satisfy 0 < a1 < a2, got a1={}, a2={}",
                self.a1, self.a2
            )));
        }
        for (name, v) in [
            ("omega0", self.omega0),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.omega_li >= 0.0 && self.omega_li.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "omega_li must be non-negative, got {}",
                self.omega_li
            )));
        }
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "kappa must be non-negative, got {}",
                self.kappa
            )));
        }
        if !(self.r1 > 0.0 && self.r2 > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "target rates must be positive, got r1={}, r2={}",
                self.r1, self.r2
            )));
        }
        Ok(())
    }
}

/// Target SINRs and the derived outage-threshold quantities of the active
/// duplex mode at a given transmit SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Target SINR for the near user's own message.
    pub gamma_th1: f64,
    /// Target SINR for the far user's message.
    pub gamma_th2: f64,
    /// Far-message threshold on the BS -> D1 gain; `+inf` when infeasible.
    pub tau: f64,
    /// Own-message threshold on the BS -> D1 gain.
    pub beta: f64,
    /// `max(tau, beta)`.
    pub theta: f64,
    /// True iff `a2 > a1 * gamma_th2`; otherwise the far message can never
    /// be decoded and the outage probability is 1.
    pub feasible: bool,
}

/// Thresholds for an explicit duplex mode, ignoring `cfg.duplex`.
pub fn thresholds_for(cfg: &SystemConfig, rho: f64, duplex: Duplex) -> Thresholds {
    debug_assert!(rho > 0.0);
    let (gamma_th1, gamma_th2) = match duplex {
        Duplex::Fd => (2f64.powf(cfg.r1) - 1.0, 2f64.powf(cfg.r2) - 1.0),
        Duplex::Hd => match cfg.hd_convention {
            HdThresholdConvention::Standard => {
                (2f64.powf(2.0 * cfg.r1) - 1.0, 2f64.powf(2.0 * cfg.r2) - 1.0)
            }
            HdThresholdConvention::PaperLiteral => (
                2f64.powf(2.0 * cfg.r1 - 1.0),
                2f64.powf(2.0 * cfg.r2 - 1.0),
            ),
        },
    };
    let feasible = cfg.a2 > cfg.a1 * gamma_th2;
    let tau = if feasible {
        gamma_th2 / (rho * (cfg.a2 - cfg.a1 * gamma_th2))
    } else {
        f64::INFINITY
    };
    let beta = gamma_th1 / (cfg.a1 * rho);
    Thresholds {
        gamma_th1,
        gamma_th2,
        tau,
        beta,
        theta: tau.max(beta),
        feasible,
    }
}

/// Thresholds of the configured duplex mode.
pub fn derive_thresholds(cfg: &SystemConfig, rho: f64) -> Thresholds {
    thresholds_for(cfg, rho, cfg.duplex)
}

/// One joint realization of the four channel power gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDraw {
    /// |h0|^2, BS -> D2 direct link.
    pub g0: f64,
    /// |h1|^2, BS -> D1.
    pub g1: f64,
    /// |h2|^2, D1 -> D2.
    pub g2: f64,
    /// |h_LI|^2, residual loop interference at D1.
    pub gli: f64,
}

/// SINR at D1 while detecting the far user's message (SIC first stage).
pub fn sinr_d1_detect_x2(draw: &ChannelDraw, cfg: &SystemConfig, rho: f64) -> f64 {
    let w = cfg.switching_factor();
    draw.g1 * cfg.a2 * rho / (draw.g1 * cfg.a1 * rho + w * draw.gli * rho + 1.0)
}

/// SINR at D1 for its own message after SIC.
pub fn sinr_d1_own(draw: &ChannelDraw, cfg: &SystemConfig, rho: f64) -> f64 {
    let w = cfg.switching_factor();
    draw.g1 * cfg.a1 * rho / (w * draw.gli * rho + 1.0)
}

/// Direct-link SINR at D2 including residual interference from the relay
/// link, scaled by `kappa`.
pub fn sinr_d2_direct_ri(draw: &ChannelDraw, cfg: &SystemConfig, rho: f64) -> f64 {
    draw.g0 * cfg.a2 * rho / (draw.g0 * cfg.a1 * rho + cfg.kappa * draw.g2 * rho + 1.0)
}

/// Relay-link SINR at D2 including residual interference from the direct
/// link, scaled by `kappa`.
pub fn sinr_d2_relay_ri(draw: &ChannelDraw, cfg: &SystemConfig, rho: f64) -> f64 {
    draw.g2 * rho / (cfg.kappa * draw.g0 * rho + 1.0)
}

/// Interference-free upper bound of the direct-link SINR at D2.
pub fn sinr_d2_direct_ub(draw: &ChannelDraw, cfg: &SystemConfig, rho: f64) -> f64 {
    draw.g0 * cfg.a2 * rho / (draw.g0 * cfg.a1 * rho + 1.0)
}

/// Interference-free upper bound of the relay-link SINR at D2.
pub fn sinr_d2_relay_ub(draw: &ChannelDraw, _cfg: &SystemConfig, rho: f64) -> f64 {
    draw.g2 * rho
}

/// SINR after maximal ratio combining of the relay and direct copies at D2.
pub fn sinr_d2_mrc(draw: &ChannelDraw, cfg: &SystemConfig, rho: f64) -> f64 {
    sinr_d2_relay_ub(draw, cfg, rho) + sinr_d2_direct_ub(draw, cfg, rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn fd_cfg() -> SystemConfig {
        SystemConfig::reference(Duplex::Fd, false)
    }

    #[test]
    fn reference_geometry() {
        let cfg = fd_cfg();
        assert!(cfg.validate().is_ok());
        assert_relative_eq!(cfg.omega1, 1.0 / 0.09, max_relative = 1e-14);
        assert_relative_eq!(cfg.omega2, 1.0 / 0.49, max_relative = 1e-14);
        assert_eq!(cfg.omega0, 1.0);
    }

    #[test]
    fn fd_thresholds_reference_rates() {
        // R1 = 3, R2 = 0.5 -> gamma_th1 = 7, gamma_th2 = sqrt(2) - 1
        let th = derive_thresholds(&fd_cfg(), 1.0);
        assert_abs_diff_eq!(th.gamma_th1, 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(th.gamma_th2, std::f64::consts::SQRT_2 - 1.0, epsilon = 1e-12);
        assert!(th.feasible);
    }

    #[test]
    fn infeasible_split_flagged_not_error() {
        // gamma_th2 = 2^3 - 1 = 7 > a2/a1 = 4
        let cfg = fd_cfg().with_rates(3.0, 3.0);
        let th = derive_thresholds(&cfg, 10.0);
        assert!(!th.feasible);
        assert!(th.tau.is_infinite());
        assert!(th.theta.is_infinite());
    }

    #[test]
    fn threshold_arithmetic() {
        // FD, a1=0.2, a2=0.8, R1=2, R2=1, rho=10: tau = 1/6, beta = 3/2
        let cfg = fd_cfg().with_rates(2.0, 1.0);
        let th = derive_thresholds(&cfg, 10.0);
        assert_relative_eq!(th.tau, 1.0 / 6.0, max_relative = 1e-12);
        assert_relative_eq!(th.beta, 1.5, max_relative = 1e-12);
        assert_relative_eq!(th.theta, 1.5, max_relative = 1e-12);
    }

    #[test]
    fn hd_threshold_conventions() {
        let mut cfg = SystemConfig::reference(Duplex::Hd, false).with_rates(1.0, 1.0);
        let std_th = derive_thresholds(&cfg, 1.0);
        assert_abs_diff_eq!(std_th.gamma_th1, 3.0, epsilon = 1e-12);
        cfg.hd_convention = HdThresholdConvention::PaperLiteral;
        let lit_th = derive_thresholds(&cfg, 1.0);
        assert_abs_diff_eq!(lit_th.gamma_th1, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn hd_own_sinr_drops_loop_term() {
        let cfg = SystemConfig::reference(Duplex::Hd, false);
        let draw = ChannelDraw {
            g0: 0.0,
            g1: 1.0,
            g2: 0.0,
            gli: 123.0,
        };
        assert_abs_diff_eq!(sinr_d1_own(&draw, &cfg, 10.0), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn fd_with_zero_loop_gain_equals_hd() {
        let fd = fd_cfg();
        let hd = SystemConfig::reference(Duplex::Hd, false);
        let draw = ChannelDraw {
            g0: 0.3,
            g1: 1.7,
            g2: 0.4,
            gli: 0.0,
        };
        for rho in [0.5, 1.0, 100.0] {
            assert_eq!(
                sinr_d1_detect_x2(&draw, &fd, rho),
                sinr_d1_detect_x2(&draw, &hd, rho)
            );
            assert_eq!(sinr_d1_own(&draw, &fd, rho), sinr_d1_own(&draw, &hd, rho));
        }
    }

    #[test]
    fn zero_kappa_reduces_ri_to_upper_bounds() {
        let cfg = fd_cfg(); // kappa = 0
        let draw = ChannelDraw {
            g0: 0.9,
            g1: 2.0,
            g2: 0.7,
            gli: 0.1,
        };
        let rho = 25.0;
        assert_eq!(
            sinr_d2_direct_ri(&draw, &cfg, rho),
            sinr_d2_direct_ub(&draw, &cfg, rho)
        );
        assert_eq!(
            sinr_d2_relay_ri(&draw, &cfg, rho),
            sinr_d2_relay_ub(&draw, &cfg, rho)
        );
    }

    #[test]
    fn config_validation_rejects_bad_parameters() {
        let mut cfg = fd_cfg();
        cfg.a1 = 0.6;
        cfg.a2 = 0.4;
        assert!(cfg.validate().is_err());

        let mut cfg = fd_cfg();
        cfg.a1 = 0.3;
        assert!(cfg.validate().is_err()); // sum != 1

        let mut cfg = fd_cfg();
        cfg.omega2 = 0.0;
        assert!(cfg.validate().is_err());

        let mut cfg = fd_cfg();
        cfg.kappa = -0.1;
        assert!(cfg.validate().is_err());

        let mut cfg = fd_cfg();
        cfg.r2 = 0.0;
        assert!(cfg.validate().is_err());
    }

    fn arb_draw() -> impl Strategy<Value = ChannelDraw> {
        (0.0f64..20.0, 0.0f64..20.0, 0.0f64..20.0, 0.0f64..5.0).prop_map(|(g0, g1, g2, gli)| {
            ChannelDraw { g0, g1, g2, gli }
        })
    }

    proptest! {
        #[test]
        fn sic_sinrs_are_interference_limited(draw in arb_draw(), rho in 0.01f64..1e5) {
            let cfg = fd_cfg().with_kappa(0.3);
            let bound = cfg.a2 / cfg.a1;
            prop_assert!(sinr_d1_detect_x2(&draw, &cfg, rho) < bound);
            prop_assert!(sinr_d2_direct_ub(&draw, &cfg, rho) < bound);
        }

        #[test]
        fn mrc_is_exact_sum_of_branches(draw in arb_draw(), rho in 0.01f64..1e5) {
            let cfg = fd_cfg();
            let mrc = sinr_d2_mrc(&draw, &cfg, rho);
            let sum = sinr_d2_relay_ub(&draw, &cfg, rho) + sinr_d2_direct_ub(&draw, &cfg, rho);
            prop_assert_eq!(mrc, sum);
        }

        #[test]
        fn ri_sinrs_bounded_by_upper_bounds(draw in arb_draw(), rho in 0.01f64..1e5, kappa in 0.0f64..3.0) {
            let cfg = fd_cfg().with_kappa(kappa);
            prop_assert!(sinr_d2_direct_ri(&draw, &cfg, rho) <= sinr_d2_direct_ub(&draw, &cfg, rho));
            prop_assert!(sinr_d2_relay_ri(&draw, &cfg, rho) <= sinr_d2_relay_ub(&draw, &cfg, rho));
        }

        #[test]
        fn sinrs_monotone_in_gains(draw in arb_draw(), rho in 0.01f64..1e4, bump in 0.0f64..5.0) {
            let cfg = fd_cfg().with_kappa(0.5);
            // more signal gain never hurts
            let better = ChannelDraw { g1: draw.g1 + bump, ..draw };
            prop_assert!(sinr_d1_own(&better, &cfg, rho) >= sinr_d1_own(&draw, &cfg, rho));
            prop_assert!(sinr_d1_detect_x2(&better, &cfg, rho) >= sinr_d1_detect_x2(&draw, &cfg, rho));
            // more interference gain never helps
            let noisier = ChannelDraw { gli: draw.gli + bump, ..draw };
            prop_assert!(sinr_d1_own(&noisier, &cfg, rho) <= sinr_d1_own(&draw, &cfg, rho));
            let cross = ChannelDraw { g0: draw.g0 + bump, ..draw };
            prop_assert!(sinr_d2_relay_ri(&cross, &cfg, rho) <= sinr_d2_relay_ri(&draw, &cfg, rho));
        }
    }
}
