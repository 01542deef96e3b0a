//! Delay-limited and delay-tolerant system throughput and the energy
//! efficiency derived from them.
//!
//! The transmit SNR `rho` used by the outage/rate expressions and the
//! wattages of [`PowerBudget`] are independent knobs: sweeps vary `rho` in
//! dB while the consumed power stays at its configured value. Keep them
//! consistent yourself if you need a physically coupled sweep.

use crate::mc::{self, McControl, OutageKind};
use crate::model::{Duplex, SystemConfig};
use crate::outage;
use crate::rate::{self, RateMethod, RateResult};
use crate::special::{QuadratureControl, SeriesControl};
use crate::Result;

/// Transmit power budget for the energy-efficiency ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBudget {
    /// BS transmit power, watts.
    pub ps: f64,
    /// Relay transmit power, watts.
    pub pr: f64,
    /// Transmission time for the whole communication process, seconds.
    pub t: f64,
}

impl Default for PowerBudget {
    fn default() -> Self {
        Self {
            ps: 10.0,
            pr: 10.0,
            t: 1.0,
        }
    }
}

impl PowerBudget {
    pub fn validate(&self) -> Result<()> {
        if !(self.ps > 0.0 && self.pr > 0.0 && self.t > 0.0) {
            return Err(crate::Error::InvalidConfig(
                "power budget entries must be strictly positive".into(),
            ));
        }
        Ok(())
    }
}

/// Transmission mode selecting which throughput feeds the EE ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransmissionMode {
    /// Fixed-rate transmission discounted by outage.
    DelayLimited,
    /// Ergodic-rate transmission.
    DelayTolerant,
}

/// Accuracy/sampling controls shared by the composite operations.
#[derive(Debug, Clone, Default)]
pub struct EvalControls {
    pub series: SeriesControl,
    pub quadrature: QuadratureControl,
    pub mc: McControl,
}

/// Delay-limited system throughput `(1 - P_out,1) R1 + (1 - P_out,2) R2`
/// for the configured duplex mode and link scenario.
///
/// The HD-with-direct-link far-user outage has no in-scope closed form and
/// is estimated by Monte Carlo, which taints the method tag.
pub fn throughput_delay_limited(
    cfg: &SystemConfig,
    rho: f64,
    ctls: &EvalControls,
) -> Result<RateResult> {
    let p1 = outage::outage_d1(cfg, rho).probability;
    let (p2, method, bound) = match (cfg.direct_link, cfg.duplex) {
        (false, _) => (
            outage::outage_d2_nodir(cfg, rho).probability,
            RateMethod::ClosedForm,
            0.0,
        ),
        (true, Duplex::Fd) => (
            outage::outage_d2_dir_fd(cfg, rho, &ctls.series)?.probability,
            RateMethod::ClosedForm,
            0.0,
        ),
        (true, Duplex::Hd) => {
            let est = mc::estimate_outage(cfg, rho, OutageKind::D2DirHd, &ctls.mc);
            (est.mean, RateMethod::MonteCarlo, est.std_error * cfg.r2)
        }
    };
    Ok(RateResult {
        rate: (1.0 - p1) * cfg.r1 + (1.0 - p2) * cfg.r2,
        method,
        error_bound: bound,
    })
}

/// Delay-tolerant system throughput: sum of the two users' ergodic rates
/// for the configured scenario.
pub fn throughput_delay_tolerant(
    cfg: &SystemConfig,
    rho: f64,
    ctls: &EvalControls,
) -> Result<RateResult> {
    let d1 = rate::rate_d1(cfg, rho)?;
    let d2 = if cfg.direct_link {
        rate::rate_d2_dir(cfg, rho, &ctls.quadrature, &ctls.mc)?
    } else {
        rate::rate_d2_nodir(cfg, rho, &ctls.quadrature)?
    };
    let method = match d2.method {
        RateMethod::MonteCarlo => RateMethod::MonteCarlo,
        _ => RateMethod::Quadrature,
    };
    Ok(RateResult {
        rate: d1.rate + d2.rate,
        method,
        error_bound: d1.error_bound + d2.error_bound,
    })
}

/// System energy efficiency in bits per joule: throughput divided by the
/// consumed transmit energy `T (Ps + Pr)`.
///
/// The HD expression carries an explicit factor 2 on the throughput (the
/// rate is delivered over two slots and the ratio is normalized per slot);
/// it is applied verbatim.
pub fn energy_efficiency(
    cfg: &SystemConfig,
    rho: f64,
    budget: &PowerBudget,
    mode: TransmissionMode,
    ctls: &EvalControls,
) -> Result<f64> {
    budget.validate()?;
    let throughput = match mode {
        TransmissionMode::DelayLimited => throughput_delay_limited(cfg, rho, ctls)?,
        TransmissionMode::DelayTolerant => throughput_delay_tolerant(cfg, rho, ctls)?,
    };
    let duplex_factor = match cfg.duplex {
        Duplex::Fd => 1.0,
        Duplex::Hd => 2.0,
    };
    Ok(duplex_factor * throughput.rate / (budget.t * (budget.ps + budget.pr)))
}
