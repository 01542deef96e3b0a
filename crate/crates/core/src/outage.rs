//! Closed-form and asymptotic outage probabilities for both users, both
//! duplex modes, with and without the direct link, plus a log-log diversity
//! order estimator.
//!
//! Conventions: an infeasible power split (`a2 <= a1 * gamma_th2`) yields
//! outage probability 1, not an error. Exact results are clamped to [0, 1]
//! only against round-off; a violation beyond 1e-9 indicates a formula bug
//! and panics. Asymptotic and Gauss-Chebyshev results are reported raw
//! because they are high-SNR expansions, not probabilities.

use crate::model::{thresholds_for, Duplex, SystemConfig};
use crate::special::{
    expint_ei, integrate_finite, sum_series, QuadratureControl, SeriesControl,
};
use crate::{Error, Result};

/// Evaluation route that produced an [`OutageResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutageMethod {
    ExactClosedForm,
    SeriesTruncated,
    GaussChebyshev,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageResult {
    pub probability: f64,
    pub method: OutageMethod,
    /// Series terms or Gauss-Chebyshev order actually used; 0 otherwise.
    pub terms_used: usize,
}

/// Round-off tolerance for the [0, 1] clamp on exact probabilities.
const CLAMP_SLACK: f64 = 1e-9;

fn clamp_probability(raw: f64) -> f64 {
    assert!(
        (-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&raw),
        "probability {raw} violates [0,1] beyond round-off; formula bug"
    );
    raw.clamp(0.0, 1.0)
}

/// Outage probability of the near user D1 in the configured duplex mode.
pub fn outage_d1(cfg: &SystemConfig, rho: f64) -> OutageResult {
    let th = thresholds_for(cfg, rho, cfg.duplex);
    let p = if !th.feasible {
        1.0
    } else {
        match cfg.duplex {
            Duplex::Fd => {
                let chi = cfg.omega1 / (cfg.omega1 + rho * th.theta * cfg.omega_li);
                1.0 - chi * (-th.theta / cfg.omega1).exp()
            }
            Duplex::Hd => 1.0 - (-th.theta / cfg.omega1).exp(),
        }
    };
    OutageResult {
        probability: clamp_probability(p),
        method: OutageMethod::ExactClosedForm,
        terms_used: 0,
    }
}

/// Outage probability of the far user D2 without the direct link.
pub fn outage_d2_nodir(cfg: &SystemConfig, rho: f64) -> OutageResult {
    let th = thresholds_for(cfg, rho, cfg.duplex);
    let p = if !th.feasible {
        1.0
    } else {
        let hop2 = th.gamma_th2 / (rho * cfg.omega2);
        match cfg.duplex {
            Duplex::Fd => {
                let chi = cfg.omega1 / (cfg.omega1 + rho * th.tau * cfg.omega_li);
                1.0 - chi * (-(th.tau / cfg.omega1 + hop2)).exp()
            }
            Duplex::Hd => 1.0 - (-(th.tau / cfg.omega1 + hop2)).exp(),
        }
    };
    OutageResult {
        probability: clamp_probability(p),
        method: OutageMethod::ExactClosedForm,
        terms_used: 0,
    }
}

/// Shared pieces of the FD direct-link outage expression.
struct DirParts {
    tau1: f64,
    /// Pr(D1 decodes the far message) = chi * exp(-tau1/omega1).
    relay_ok: f64,
    /// Pr(direct-link SINR below target) = 1 - exp(-tau1/omega0).
    direct_fail: f64,
}

fn dir_parts(cfg: &SystemConfig, rho: f64) -> Option<DirParts> {
    let th = thresholds_for(cfg, rho, Duplex::Fd);
    if !th.feasible {
        return None;
    }
    let chi = cfg.omega1 / (cfg.omega1 + th.tau * rho * cfg.omega_li);
    Some(DirParts {
        tau1: th.tau,
        relay_ok: chi * (-th.tau / cfg.omega1).exp(),
        direct_fail: 1.0 - (-th.tau / cfg.omega0).exp(),
    })
}

/// Outage probability of D2 with the direct link under FD relaying, using
/// the maximal-ratio-combining upper-bound SINRs: the exact closed form as a
/// truncated double series over incomplete-integral kernels.
///
/// The inner-sum denominator is the falling factorial `(n+1)!/(n-k)!` (the
/// `k = 0` term divides by `n+1`), validated against direct quadrature of
/// the same kernel.
pub fn outage_d2_dir_fd(cfg: &SystemConfig, rho: f64, ctl: &SeriesControl) -> Result<OutageResult> {
    ctl.validate()?;
    let Some(parts) = dir_parts(cfg, rho) else {
        return Ok(OutageResult {
            probability: 1.0,
            method: OutageMethod::SeriesTruncated,
            terms_used: 0,
        });
    };
    let th2 = thresholds_for(cfg, rho, Duplex::Fd).gamma_th2;
    let tau1 = parts.tau1;

    let phi1 = -cfg.a2 / (cfg.a1 * rho * cfg.omega2);
    let phi2 = cfg.a1 * rho * cfg.omega0;
    let growth = 1.0 + cfg.a1 * rho * tau1;
    let psi = phi1 / growth;
    let phi = 1.0 / (rho * cfg.a1 * cfg.omega0) - th2 / (rho * cfg.omega2) - phi1;

    let ei_gap = expint_ei(psi)? - expint_ei(phi1)?;
    let exp_psi = psi.exp();
    let exp_phi1 = phi1.exp();

    // running outer-term state
    let mut outer = phi.exp() / phi2; // e^phi / (n! phi2^{n+1}) with sign
    let mut phi1_pow_np1 = phi1; // phi1^{n+1}
    let mut growth_pow_np1 = growth; // (1 + a1 rho tau1)^{n+1}
    let mut fact_np1 = 1.0; // (n+1)!

    let series = sum_series(ctl, |n| {
        if n > 0 {
            outer *= -1.0 / (n as f64 * phi2);
            phi1_pow_np1 *= phi1;
            growth_pow_np1 *= growth;
        }
        fact_np1 *= (n + 1) as f64;

        let ei_term = -phi1_pow_np1 / fact_np1 * ei_gap;
        let mut inner = 0.0;
        let mut denom = (n + 1) as f64; // (n+1) n ... (n+1-k)
        let mut psi_pow = 1.0;
        let mut phi1_pow = 1.0;
        for k in 0..=n {
            if k > 0 {
                denom *= (n + 1 - k) as f64;
                psi_pow *= psi;
                phi1_pow *= phi1;
            }
            inner += (growth_pow_np1 * exp_psi * psi_pow - exp_phi1 * phi1_pow) / denom;
        }
        outer * (ei_term + inner)
    });

    let theta1 = series.value;
    let mrc_fail = parts.direct_fail - theta1;
    let p = mrc_fail * parts.relay_ok + parts.direct_fail * (1.0 - parts.relay_ok);
    if !series.converged {
        return Err(Error::SeriesNotConverged {
            partial: p,
            terms: series.terms_used,
        });
    }
    Ok(OutageResult {
        probability: clamp_probability(p),
        method: OutageMethod::SeriesTruncated,
        terms_used: series.terms_used,
    })
}

/// Reference evaluation of the same FD direct-link outage probability with
/// the series kernel replaced by direct adaptive quadrature. Kept as an
/// independent route for cross-validation; the two must agree to ~1e-8.
pub fn outage_d2_dir_fd_quadrature(
    cfg: &SystemConfig,
    rho: f64,
    ctl: &QuadratureControl,
) -> Result<f64> {
    let Some(parts) = dir_parts(cfg, rho) else {
        return Ok(1.0);
    };
    let th2 = thresholds_for(cfg, rho, Duplex::Fd).gamma_th2;
    let integrand = |y: f64| {
        (-y / cfg.omega0).exp() / cfg.omega0
            * (-(th2 / rho - y * cfg.a2 / (y * cfg.a1 * rho + 1.0)) / cfg.omega2).exp()
    };
    let theta1 = integrate_finite(integrand, 0.0, parts.tau1, ctl)?.value;
    let mrc_fail = parts.direct_fail - theta1;
    Ok(clamp_probability(
        mrc_fail * parts.relay_ok + parts.direct_fail * (1.0 - parts.relay_ok),
    ))
}

/// Gauss-Chebyshev high-SNR approximation of the FD direct-link outage
/// probability of D2, with `ctl.gc_points` nodes.
///
/// This is an expansion around large SNR: at low SNR the raw value may leave
/// [0, 1] and is reported unclamped.
pub fn outage_d2_dir_fd_gc(
    cfg: &SystemConfig,
    rho: f64,
    ctl: &QuadratureControl,
) -> Result<OutageResult> {
    ctl.validate()?;
    let th = thresholds_for(cfg, rho, Duplex::Fd);
    if !th.feasible {
        return Ok(OutageResult {
            probability: 1.0,
            method: OutageMethod::GaussChebyshev,
            terms_used: 0,
        });
    }
    let n = ctl.gc_points;
    let tau1 = th.tau;
    let chi = cfg.omega1 / (cfg.omega1 + tau1 * rho * cfg.omega_li);
    let edge = (cfg.omega2 * tau1
        + 2.0 * cfg.omega0 * tau1 * (cfg.a2 - cfg.a1 * th.gamma_th2))
        / (2.0 * cfg.omega0 * cfg.omega2);
    let sum: f64 = crate::special::gauss_chebyshev_nodes(n)
        .iter()
        .map(|&(s, w)| {
            let relay_gain = (s + 1.0) * tau1 * cfg.a2
                / (cfg.omega2 * ((s + 1.0) * tau1 * cfg.a1 * rho + 2.0));
            (1.0 + relay_gain - s * tau1 / (2.0 * cfg.omega0)) * w
        })
        .sum();
    let bracket = tau1 / cfg.omega0
        - (1.0 - edge) * tau1 * std::f64::consts::PI / (2.0 * n as f64 * cfg.omega0) * sum;
    Ok(OutageResult {
        probability: bracket * chi + (1.0 - chi) * tau1 / cfg.omega0,
        method: OutageMethod::GaussChebyshev,
        terms_used: n,
    })
}

/// Which high-SNR outage expansion to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticOutage {
    D1Fd,
    D1Hd,
    D2NodirFd,
    D2NodirHd,
}

/// High-SNR outage expansions, evaluated verbatim. FD expressions tend to a
/// loop-interference error floor; HD expressions decay as 1/rho. The
/// no-direct-link FD expansion can go negative at moderate SNR and is
/// reported raw.
pub fn asymptotic_outage(cfg: &SystemConfig, rho: f64, which: AsymptoticOutage) -> OutageResult {
    let duplex = match which {
        AsymptoticOutage::D1Fd | AsymptoticOutage::D2NodirFd => Duplex::Fd,
        AsymptoticOutage::D1Hd | AsymptoticOutage::D2NodirHd => Duplex::Hd,
    };
    let th = thresholds_for(cfg, rho, duplex);
    let p = if !th.feasible {
        1.0
    } else {
        match which {
            AsymptoticOutage::D1Fd => {
                1.0 - cfg.omega1 / (cfg.omega1 + rho * th.theta * cfg.omega_li)
            }
            AsymptoticOutage::D1Hd => th.theta / cfg.omega1,
            AsymptoticOutage::D2NodirFd => {
                let num = cfg.omega1 * cfg.omega2 * rho
                    - cfg.omega1 * th.gamma_th2
                    - th.tau * rho * cfg.omega2;
                let den = cfg.omega2 * rho * (cfg.omega1 + th.tau * rho * cfg.omega_li);
                1.0 - num / den
            }
            AsymptoticOutage::D2NodirHd => {
                th.gamma_th2 / (rho * cfg.omega2) + th.tau / cfg.omega1
            }
        }
    };
    OutageResult {
        probability: p,
        method: OutageMethod::Asymptotic,
        terms_used: 0,
    }
}

/// Log-log slope estimate of a positive outage curve over its last two
/// points: `-(dlog P)/(dlog rho)`.
pub fn diversity_order_estimate(curve: &[(f64, f64)]) -> Result<f64> {
    if curve.len() < 2 {
        return Err(Error::Domain(
            "diversity estimate needs at least two (rho, probability) points".into(),
        ));
    }
    let (rho_a, p_a) = curve[curve.len() - 2];
    let (rho_b, p_b) = curve[curve.len() - 1];
    if !(rho_b > rho_a && rho_a > 0.0) {
        return Err(Error::Domain(
            "diversity estimate needs strictly increasing positive SNRs".into(),
        ));
    }
    if !(p_a > 0.0 && p_b > 0.0) {
        return Err(Error::Domain(
            "diversity estimate needs strictly positive probabilities".into(),
        ));
    }
    Ok(-((p_b.ln() - p_a.ln()) / (rho_b.ln() - rho_a.ln())))
}
