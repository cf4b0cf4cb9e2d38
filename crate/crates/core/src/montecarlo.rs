//! Pulse-by-pulse stochastic simulation of the full protocol, used as the
//! independent oracle for every analytic formula in the crate.
//!
//! Each pulse draws Alice's state choice, applies the configured attack at
//! the channel input, scales the amplitude by the square root of the
//! transmission, and gives Bob a Gaussian homodyne outcome with variance 1/4
//! around the projected amplitude. Homodyne statistics of coherent states are
//! exactly Gaussian, so sampling the outcome directly is exact, not an
//! approximation.
//!
//! Pulses are processed in fixed-size shards, each with its own stream of a
//! counter-based generator, and shard tallies are merged by integer addition,
//! so a result is bit-identical for a given seed regardless of how many
//! threads run the shards.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::attacks::AttackModel;
use crate::protocol::{
    decide_bit, sift, BasisMatch, BitDecision, MeasuredQuadrature, ProtocolParams, StateChoice,
};

/// Pulses per independent RNG stream.
const SHARD: u64 = 1 << 16;

/// A simulation request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub pulses: u64,
    pub params: ProtocolParams,
    pub attack: Option<AttackModel>,
    pub rng_seed: u64,
}

/// Binned wrong-basis outcomes: 200 bins of width 0.05 covering [-5, 5],
/// plus a count of outcomes falling outside that range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrongBasisHistogram {
    counts: Vec<u64>,
    outside: u64,
}

impl WrongBasisHistogram {
    pub const BINS: usize = 200;
    pub const LO: f64 = -5.0;
    pub const HI: f64 = 5.0;
    pub const WIDTH: f64 = 0.05;

    fn new() -> Self {
        Self {
            counts: vec![0; Self::BINS],
            outside: 0,
        }
    }

    fn record(&mut self, x: f64) {
        if x.is_nan() || !(Self::LO..Self::HI).contains(&x) {
            self.outside += 1;
        } else {
            let idx = (((x - Self::LO) / Self::WIDTH) as usize).min(Self::BINS - 1);
            self.counts[idx] += 1;
        }
    }

    fn merge(&mut self, other: &Self) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.outside += other.outside;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn outside(&self) -> u64 {
        self.outside
    }

    /// Bin edges `[lo, hi)` of bin `i`.
    pub fn bin_range(i: usize) -> (f64, f64) {
        (
            Self::LO + i as f64 * Self::WIDTH,
            Self::LO + (i + 1) as f64 * Self::WIDTH,
        )
    }

    /// Total recorded outcomes including out-of-range ones.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.outside
    }
}

/// Tallies and rates estimated from one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Correct-basis pulses.
    pub sifted: u64,
    /// Correct-basis pulses that cleared the threshold.
    pub conclusive: u64,
    /// Conclusive pulses whose bit disagreed with Alice's.
    pub errors: u64,
    /// conclusive / sifted.
    pub empirical_p: f64,
    /// errors / conclusive (0 if nothing was conclusive).
    pub empirical_q: f64,
    /// Binomial standard error of `empirical_p`.
    pub std_err_p: f64,
    /// Binomial standard error of `empirical_q`.
    pub std_err_q: f64,
    pub wrong_basis_histogram: WrongBasisHistogram,
}

struct Tally {
    sifted: u64,
    conclusive: u64,
    errors: u64,
    histogram: WrongBasisHistogram,
}

impl Tally {
    fn new() -> Self {
        Self {
            sifted: 0,
            conclusive: 0,
            errors: 0,
            histogram: WrongBasisHistogram::new(),
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.sifted += other.sifted;
        self.conclusive += other.conclusive;
        self.errors += other.errors;
        self.histogram.merge(&other.histogram);
        self
    }
}

fn shard_rng(seed: u64, shard_index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(shard_index);
    rng
}

fn draw_choice(rng: &mut ChaCha12Rng) -> StateChoice {
    StateChoice::from_index(rng.gen_range(0..4usize)).expect("index in 0..4")
}

fn gaussian_outcome(rng: &mut ChaCha12Rng, mean: f64) -> f64 {
    mean + 0.5 * rng.sample::<f64, _>(StandardNormal)
}

/// The state Eve injects back into the channel, as (amplitude, phase).
fn apply_attack(
    rng: &mut ChaCha12Rng,
    attack: &AttackModel,
    amplitude: f64,
    phase: f64,
) -> (f64, f64) {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
    match attack {
        AttackModel::SimultaneousMeasurement => {
            // 50:50 split, both quadratures measured on half-intensity copies
            let split = amplitude / SQRT_2;
            let x1 = gaussian_outcome(rng, split * phase.cos());
            let x2 = gaussian_outcome(rng, split * phase.sin());
            // most probable state by the cone the outcome pair lands in,
            // with ties resolved exactly as the decision rule is written
            let resend_phase = if x1 >= x2.abs() {
                0.0
            } else if x2 > x1.abs() {
                FRAC_PI_2
            } else if -x1 >= x2.abs() {
                PI
            } else {
                -FRAC_PI_2
            };
            (amplitude, resend_phase)
        }
        AttackModel::IntermediateBasis => {
            let outcome = gaussian_outcome(rng, amplitude * (phase - FRAC_PI_4).cos());
            let resend_phase = if outcome >= 0.0 {
                FRAC_PI_4
            } else {
                FRAC_PI_4 - PI
            };
            (amplitude, resend_phase)
        }
        // the tap only realizes the channel loss; Bob's share is undisturbed
        AttackModel::BeamSplitting { .. } => (amplitude, phase),
    }
}

fn run_shard(config: &SimConfig, shard_index: u64, count: u64) -> Tally {
    let mut rng = shard_rng(config.rng_seed, shard_index);
    let mut tally = Tally::new();
    let amplitude = config.params.intensity().sqrt();
    let root_transmission = config.params.transmission().sqrt();
    let threshold = config.params.threshold();

    for _ in 0..count {
        let choice = draw_choice(&mut rng);
        let (sent_amp, sent_phase) = match &config.attack {
            Some(attack) => apply_attack(&mut rng, attack, amplitude, choice.phase()),
            None => (amplitude, choice.phase()),
        };
        let received_amp = root_transmission * sent_amp;

        let basis = if rng.gen::<bool>() {
            MeasuredQuadrature::X1
        } else {
            MeasuredQuadrature::X2
        };
        let mean = received_amp * (sent_phase - basis.basis_angle()).cos();
        let outcome = gaussian_outcome(&mut rng, mean);

        match sift(choice, basis) {
            BasisMatch::Correct => {
                tally.sifted += 1;
                match decide_bit(outcome, threshold) {
                    BitDecision::One => {
                        tally.conclusive += 1;
                        if choice.bit() != 1 {
                            tally.errors += 1;
                        }
                    }
                    BitDecision::Zero => {
                        tally.conclusive += 1;
                        if choice.bit() != 0 {
                            tally.errors += 1;
                        }
                    }
                    BitDecision::Inconclusive => {}
                }
            }
            BasisMatch::Wrong => tally.histogram.record(outcome),
        }
    }
    tally
}

fn binomial_std_err(successes: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let p = successes as f64 / trials as f64;
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Runs the full protocol simulation. Deterministic for a fixed
/// `config.rng_seed`, independent of thread count.
pub fn simulate(config: &SimConfig) -> SimResult {
    let shards = config.pulses.div_ceil(SHARD);
    let tally = (0..shards)
        .into_par_iter()
        .map(|i| {
            let count = SHARD.min(config.pulses - i * SHARD);
            run_shard(config, i, count)
        })
        .reduce(Tally::new, Tally::merge);

    let empirical_p = if tally.sifted == 0 {
        0.0
    } else {
        tally.conclusive as f64 / tally.sifted as f64
    };
    let empirical_q = if tally.conclusive == 0 {
        0.0
    } else {
        tally.errors as f64 / tally.conclusive as f64
    };
    SimResult {
        sifted: tally.sifted,
        conclusive: tally.conclusive,
        errors: tally.errors,
        empirical_p,
        empirical_q,
        std_err_p: binomial_std_err(tally.conclusive, tally.sifted),
        std_err_q: binomial_std_err(tally.errors, tally.conclusive),
        wrong_basis_histogram: tally.histogram,
    }
}

/// Empirical bit error rate of a beam-splitting eavesdropper who taps the
/// stated loss fraction, stores her share, and measures it in the announced
/// basis with threshold zero (she cannot postselect). Converges to
/// `q(0, loss * n)`.
pub fn simulate_eve_bs(config: &SimConfig, loss: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&loss));
    let eve_amplitude = (loss * config.params.intensity()).sqrt();
    let shards = config.pulses.div_ceil(SHARD);
    let errors: u64 = (0..shards)
        .into_par_iter()
        .map(|i| {
            let count = SHARD.min(config.pulses - i * SHARD);
            let mut rng = shard_rng(config.rng_seed, i);
            let mut errors = 0u64;
            for _ in 0..count {
                let choice = draw_choice(&mut rng);
                let announced = choice.encoding_basis();
                let mean = eve_amplitude * (choice.phase() - announced.basis_angle()).cos();
                let outcome = gaussian_outcome(&mut rng, mean);
                let eve_bit = u8::from(outcome > 0.0);
                if eve_bit != choice.bit() {
                    errors += 1;
                }
            }
            errors
        })
        .sum();
    errors as f64 / config.pulses as f64
}
