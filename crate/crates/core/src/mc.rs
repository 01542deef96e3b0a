//! Independent Monte Carlo oracle: draws the four exponential channel power
//! gains, evaluates outage events and instantaneous rates per realization,
//! and reports estimates with standard errors.
//!
//! Reproducibility contract: a fixed `(seed, samples, chunk_size)` triple
//! produces bit-identical estimates regardless of how many workers evaluate
//! the chunks. Each chunk owns a counter-derived RNG stream and accumulates
//! sequentially; chunk partials are reduced in chunk-index order.

use crate::model::{
    self, thresholds_for, ChannelDraw, Duplex, SystemConfig, Thresholds,
};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sampling controls for one Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McControl {
    pub samples: u64,
    pub seed: u64,
    /// Draws per RNG chunk; partials reduce in chunk order.
    pub chunk_size: u64,
}

impl Default for McControl {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 42,
            chunk_size: 1 << 16,
        }
    }
}

impl McControl {
    pub fn with_samples(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            ..Self::default()
        }
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation divided by sqrt(samples).
    pub std_error: f64,
    pub samples: u64,
}

/// Outage events the simulator can measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutageKind {
    /// Near user fails SIC on either message.
    D1,
    /// Far user fails without the direct link (either hop below target).
    D2Nodir,
    /// Far user fails with the direct link, interference-free MRC bounds.
    D2DirUb,
    /// Far user fails with the direct link, residual-interference SINRs.
    D2DirRi,
    /// Far user fails under HD relaying with the direct link (the benchmark
    /// with no in-scope closed form); always evaluated with HD thresholds.
    D2DirHd,
    /// Orthogonal baseline, near user: three-slot schedule, full power per
    /// slot, per-slot target rate 3 R1.
    OmaD1,
    /// Orthogonal baseline, far user via relay only: both hops at per-slot
    /// target rate 3 R2.
    OmaD2Nodir,
    /// Orthogonal baseline, far user with direct link: two-phase relaying
    /// with MRC, per-phase target rate 2 R2.
    OmaD2Dir,
}

/// Instantaneous-rate metrics the simulator can average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateKind {
    D1,
    D2Nodir,
    /// Far user with direct link, interference-free MRC bounds.
    D2DirUb,
    /// Far user with direct link, residual-interference SINRs.
    D2DirRi,
    SumNodir,
    SumDir,
}

/// Draw one joint channel realization from the configured exponential
/// marginals (inverse-CDF sampling).
pub fn draw_channels(cfg: &SystemConfig, rng: &mut impl Rng) -> ChannelDraw {
    let mut exp = |omega: f64| -> f64 {
        let u: f64 = rng.random();
        -omega * (1.0 - u).ln()
    };
    ChannelDraw {
        g0: exp(cfg.omega0),
        g1: exp(cfg.omega1),
        g2: exp(cfg.omega2),
        gli: exp(cfg.omega_li),
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn chunk_rng(seed: u64, chunk_index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(chunk_index)))
}

#[derive(Debug, Clone, Copy, Default)]
struct Partial {
    sum: f64,
    sum_sq: f64,
}

/// Accumulate one chunk. Never inlined so the parallel and sequential
/// drivers execute the same machine code and stay bit-identical.
#[inline(never)]
fn chunk_partial<F: Fn(&ChannelDraw) -> f64>(
    cfg: &SystemConfig,
    eval: &F,
    seed: u64,
    chunk_index: u64,
    len: u64,
) -> Partial {
    let mut rng = chunk_rng(seed, chunk_index);
    let mut acc = Partial::default();
    for _ in 0..len {
        let draw = draw_channels(cfg, &mut rng);
        let v = eval(&draw);
        acc.sum += v;
        acc.sum_sq += v * v;
    }
    acc
}

fn reduce(partials: Vec<Partial>, samples: u64) -> McEstimate {
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for p in partials {
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    let n = samples as f64;
    let mean = sum / n;
    let variance = if samples > 1 {
        ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    McEstimate {
        mean,
        std_error: (variance / n).sqrt(),
        samples,
    }
}

fn chunk_lengths(ctl: &McControl) -> impl Iterator<Item = (u64, u64)> + '_ {
    let chunks = ctl.samples.div_ceil(ctl.chunk_size);
    (0..chunks).map(move |i| {
        let start = i * ctl.chunk_size;
        (i, ctl.samples.min(start + ctl.chunk_size) - start)
    })
}

fn run_sequential<F>(cfg: &SystemConfig, ctl: &McControl, eval: F) -> McEstimate
where
    F: Fn(&ChannelDraw) -> f64 + Sync,
{
    assert!(ctl.samples >= 1 && ctl.chunk_size >= 1);
    let partials = chunk_lengths(ctl)
        .map(|(i, len)| chunk_partial(cfg, &eval, ctl.seed, i, len))
        .collect();
    reduce(partials, ctl.samples)
}

#[cfg(feature = "parallel")]
fn run_parallel<F>(cfg: &SystemConfig, ctl: &McControl, eval: F) -> McEstimate
where
    F: Fn(&ChannelDraw) -> f64 + Sync,
{
    assert!(ctl.samples >= 1 && ctl.chunk_size >= 1);
    let jobs: Vec<(u64, u64)> = chunk_lengths(ctl).collect();
    let partials = jobs
        .into_par_iter()
        .map(|(i, len)| chunk_partial(cfg, &eval, ctl.seed, i, len))
        .collect();
    reduce(partials, ctl.samples)
}

#[cfg(not(feature = "parallel"))]
fn run_parallel<F>(cfg: &SystemConfig, ctl: &McControl, eval: F) -> McEstimate
where
    F: Fn(&ChannelDraw) -> f64 + Sync,
{
    run_sequential(cfg, ctl, eval)
}

fn half_factor(cfg: &SystemConfig) -> f64 {
    match cfg.duplex {
        Duplex::Fd => 1.0,
        Duplex::Hd => 0.5,
    }
}

#[derive(Clone, Copy)]
struct EventContext {
    th: Thresholds,
    oma_main: f64,
    oma_dir: f64,
}

fn outage_event(
    kind: OutageKind,
    ctx: EventContext,
    cfg: &SystemConfig,
    rho: f64,
) -> impl Fn(&ChannelDraw) -> f64 + Sync {
    let th = ctx.th;
    let (oma_main, oma_dir) = (ctx.oma_main, ctx.oma_dir);
    let cfg = cfg.clone();
    move |draw: &ChannelDraw| -> f64 {
        let outage = match kind {
            OutageKind::D1 => {
                model::sinr_d1_detect_x2(draw, &cfg, rho) <= th.gamma_th2
                    || model::sinr_d1_own(draw, &cfg, rho) <= th.gamma_th1
            }
            OutageKind::D2Nodir => {
                model::sinr_d1_detect_x2(draw, &cfg, rho) <= th.gamma_th2
                    || model::sinr_d2_relay_ub(draw, &cfg, rho) <= th.gamma_th2
            }
            OutageKind::D2DirUb => {
                let relay_chain = model::sinr_d1_detect_x2(draw, &cfg, rho) > th.gamma_th2;
                if relay_chain {
                    model::sinr_d2_mrc(draw, &cfg, rho) < th.gamma_th2
                } else {
                    model::sinr_d2_direct_ub(draw, &cfg, rho) < th.gamma_th2
                }
            }
            OutageKind::D2DirRi => {
                let relay_chain = model::sinr_d1_detect_x2(draw, &cfg, rho) > th.gamma_th2;
                if relay_chain {
                    model::sinr_d2_direct_ri(draw, &cfg, rho)
                        + model::sinr_d2_relay_ri(draw, &cfg, rho)
                        < th.gamma_th2
                } else {
                    model::sinr_d2_direct_ri(draw, &cfg, rho) < th.gamma_th2
                }
            }
            OutageKind::D2DirHd => {
                // forced HD: no loop interference on the first hop
                let chain = draw.g1 * cfg.a2 * rho / (draw.g1 * cfg.a1 * rho + 1.0);
                if chain > th.gamma_th2 {
                    model::sinr_d2_mrc(draw, &cfg, rho) < th.gamma_th2
                } else {
                    model::sinr_d2_direct_ub(draw, &cfg, rho) < th.gamma_th2
                }
            }
            OutageKind::OmaD1 => draw.g1 * rho < oma_main,
            OutageKind::OmaD2Nodir => draw.g1 * rho < oma_main || draw.g2 * rho < oma_main,
            OutageKind::OmaD2Dir => {
                if draw.g1 * rho >= oma_dir {
                    (draw.g0 + draw.g2) * rho < oma_dir
                } else {
                    draw.g0 * rho < oma_dir
                }
            }
        };
        outage as u8 as f64
    }
}

fn event_context(cfg: &SystemConfig, rho: f64, kind: OutageKind) -> EventContext {
    let th = match kind {
        OutageKind::D2DirHd => thresholds_for(cfg, rho, Duplex::Hd),
        _ => thresholds_for(cfg, rho, cfg.duplex),
    };
    EventContext {
        th,
        oma_main: match kind {
            OutageKind::OmaD1 => 2f64.powf(3.0 * cfg.r1) - 1.0,
            _ => 2f64.powf(3.0 * cfg.r2) - 1.0,
        },
        oma_dir: 2f64.powf(2.0 * cfg.r2) - 1.0,
    }
}

/// Monte Carlo outage frequency for the given event.
pub fn estimate_outage(cfg: &SystemConfig, rho: f64, kind: OutageKind, ctl: &McControl) -> McEstimate {
    let ctx = event_context(cfg, rho, kind);
    run_parallel(cfg, ctl, outage_event(kind, ctx, cfg, rho))
}

/// Sequential reference driver for [`estimate_outage`]; bit-identical.
pub fn estimate_outage_seq(
    cfg: &SystemConfig,
    rho: f64,
    kind: OutageKind,
    ctl: &McControl,
) -> McEstimate {
    let ctx = event_context(cfg, rho, kind);
    run_sequential(cfg, ctl, outage_event(kind, ctx, cfg, rho))
}

fn rate_value(kind: RateKind, cfg: &SystemConfig, rho: f64) -> impl Fn(&ChannelDraw) -> f64 + Sync {
    let half = half_factor(cfg);
    let cfg = cfg.clone();
    move |draw: &ChannelDraw| -> f64 {
        let d1 = || model::sinr_d1_own(draw, &cfg, rho);
        let d2_nodir = || {
            model::sinr_d1_detect_x2(draw, &cfg, rho).min(model::sinr_d2_relay_ub(draw, &cfg, rho))
        };
        let d2_dir_ub = || {
            model::sinr_d1_detect_x2(draw, &cfg, rho).min(model::sinr_d2_mrc(draw, &cfg, rho))
        };
        let sinr = match kind {
            RateKind::D1 => d1(),
            RateKind::D2Nodir => d2_nodir(),
            RateKind::D2DirUb => d2_dir_ub(),
            RateKind::D2DirRi => model::sinr_d1_detect_x2(draw, &cfg, rho).min(
                model::sinr_d2_direct_ri(draw, &cfg, rho)
                    + model::sinr_d2_relay_ri(draw, &cfg, rho),
            ),
            RateKind::SumNodir => return half * ((1.0 + d1()).log2() + (1.0 + d2_nodir()).log2()),
            RateKind::SumDir => return half * ((1.0 + d1()).log2() + (1.0 + d2_dir_ub()).log2()),
        };
        half * (1.0 + sinr).log2()
    }
}

/// Monte Carlo mean of the instantaneous rate in BPCU (with the 1/2 factor
/// in HD mode).
pub fn estimate_ergodic(cfg: &SystemConfig, rho: f64, kind: RateKind, ctl: &McControl) -> McEstimate {
    run_parallel(cfg, ctl, rate_value(kind, cfg, rho))
}

/// Sequential reference driver for [`estimate_ergodic`]; bit-identical.
pub fn estimate_ergodic_seq(
    cfg: &SystemConfig,
    rho: f64,
    kind: RateKind,
    ctl: &McControl,
) -> McEstimate {
    run_sequential(cfg, ctl, rate_value(kind, cfg, rho))
}
