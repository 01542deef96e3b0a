//! The analytic-vs-Monte-Carlo agreement suite: every closed-form or
//! quadrature expression in [`crate::outage`] and [`crate::rate`] checked
//! against its simulated counterpart on an SNR grid under the reference
//! scenarios.
//!
//! A check passes when `|analytic - mc.mean| <= 3 * mc.std_error`.

use crate::mc::{self, McControl, OutageKind, RateKind};
use crate::model::{Duplex, SystemConfig};
use crate::outage;
use crate::rate;
use crate::special::{QuadratureControl, SeriesControl};
use crate::{db_to_linear, Result};

/// One analytic-vs-MC comparison.
#[derive(Debug, Clone)]
pub struct AgreementCheck {
    pub name: &'static str,
    pub snr_db: f64,
    pub analytic: f64,
    pub mc: mc::McEstimate,
}

impl AgreementCheck {
    pub fn passes(&self) -> bool {
        (self.analytic - self.mc.mean).abs() <= 3.0 * self.mc.std_error
    }

    /// |analytic - mc| / (3 se); < 1 passes.
    pub fn margin(&self) -> f64 {
        (self.analytic - self.mc.mean).abs() / (3.0 * self.mc.std_error)
    }
}

/// Fault hook for exercising the failure path end to end: scales the BS->D1
/// average gain in the *analytic* route only, leaving the simulator alone.
#[derive(Debug, Clone, Copy)]
pub struct FaultInjection {
    pub scale_omega1: f64,
}

fn analytic_cfg(cfg: &SystemConfig, fault: Option<&FaultInjection>) -> SystemConfig {
    let mut out = cfg.clone();
    if let Some(f) = fault {
        out.omega1 *= f.scale_omega1;
    }
    out
}

/// Run the standard agreement suite on the given dB grid.
///
/// Outage checks use the reference scenarios as-is (loop interference at
/// -15 dB); rate checks lift the loop interference to -10 dB, matching the
/// operating points the rate expressions are exercised at.
pub fn standard_checks(
    grid_db: &[f64],
    samples: u64,
    seed: u64,
    fault: Option<&FaultInjection>,
) -> Result<Vec<AgreementCheck>> {
    let sctl = SeriesControl::default();
    let qctl = QuadratureControl::default();

    let fd_out = SystemConfig::reference(Duplex::Fd, false);
    let hd_out = SystemConfig::reference(Duplex::Hd, false);
    let fd_dir_out = SystemConfig::reference(Duplex::Fd, true);
    let fd_rate = fd_out.clone().with_omega_li_db(-10.0);
    let hd_rate = hd_out.clone();
    let hd_dir_rate = SystemConfig::reference(Duplex::Hd, true);

    let mut checks = Vec::new();
    for &snr_db in grid_db {
        let rho = db_to_linear(snr_db);
        let ctl = McControl::with_samples(samples, seed ^ (snr_db.to_bits().rotate_left(17)));

        let mut push = |name: &'static str, analytic: f64, mc: mc::McEstimate| {
            checks.push(AgreementCheck {
                name,
                snr_db,
                analytic,
                mc,
            });
        };

        push(
            "fd_outage_d1",
            outage::outage_d1(&analytic_cfg(&fd_out, fault), rho).probability,
            mc::estimate_outage(&fd_out, rho, OutageKind::D1, &ctl),
        );
        push(
            "hd_outage_d1",
            outage::outage_d1(&analytic_cfg(&hd_out, fault), rho).probability,
            mc::estimate_outage(&hd_out, rho, OutageKind::D1, &ctl),
        );
        push(
            "fd_outage_d2_nodir",
            outage::outage_d2_nodir(&analytic_cfg(&fd_out, fault), rho).probability,
            mc::estimate_outage(&fd_out, rho, OutageKind::D2Nodir, &ctl),
        );
        push(
            "hd_outage_d2_nodir",
            outage::outage_d2_nodir(&analytic_cfg(&hd_out, fault), rho).probability,
            mc::estimate_outage(&hd_out, rho, OutageKind::D2Nodir, &ctl),
        );
        push(
            "fd_outage_d2_dir",
            outage::outage_d2_dir_fd(&analytic_cfg(&fd_dir_out, fault), rho, &sctl)?.probability,
            mc::estimate_outage(&fd_dir_out, rho, OutageKind::D2DirUb, &ctl),
        );
        push(
            "fd_rate_d1",
            rate::rate_d1(&analytic_cfg(&fd_rate, fault), rho)?.rate,
            mc::estimate_ergodic(&fd_rate, rho, RateKind::D1, &ctl),
        );
        push(
            "hd_rate_d1",
            rate::rate_d1(&analytic_cfg(&hd_rate, fault), rho)?.rate,
            mc::estimate_ergodic(&hd_rate, rho, RateKind::D1, &ctl),
        );
        push(
            "fd_rate_d2_nodir",
            rate::rate_d2_nodir(&analytic_cfg(&fd_rate, fault), rho, &qctl)?.rate,
            mc::estimate_ergodic(&fd_rate, rho, RateKind::D2Nodir, &ctl),
        );
        push(
            "hd_rate_d2_nodir",
            rate::rate_d2_nodir(&analytic_cfg(&hd_rate, fault), rho, &qctl)?.rate,
            mc::estimate_ergodic(&hd_rate, rho, RateKind::D2Nodir, &ctl),
        );
        push(
            "hd_rate_d2_dir",
            rate::rate_d2_dir(&analytic_cfg(&hd_dir_rate, fault), rho, &qctl, &ctl)?.rate,
            mc::estimate_ergodic(&hd_dir_rate, rho, RateKind::D2DirUb, &ctl),
        );
    }
    Ok(checks)
}

/// Default validation grid: five points over the swept SNR range.
pub fn default_grid_db() -> Vec<f64> {
    vec![0.0, 10.0, 20.0, 30.0, 40.0]
}
