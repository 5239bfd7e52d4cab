//! BPSK over AWGN, Monte-Carlo frame-error counting and mrl classification.
//!
//! A frame is *mrl* ("more likely") when the decoder returns a valid codeword
//! other than the transmitted one that is strictly closer to the received
//! vector. A maximum-likelihood decoder errs on every such frame too, so the
//! mrl frame-error rate is a lower bound on ML performance.
//!
//! Every frame draws its message, noise and decoder seed from a ChaCha stream
//! keyed by `(master_seed, frame_index)`, so results do not depend on how many
//! worker threads process the frames.

use std::fmt::Write as _;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::codegen::CodeSpec;
use crate::decoder::{euclidean_distance, DecodeOutcome, Decoder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub ebno_db: f64,
    pub rate: f64,
    /// Per-dimension noise variance for unit-energy symbols.
    pub sigma2: f64,
}

impl ChannelParams {
    /// `sigma^2 = 1 / (2 R 10^(Eb/N0 / 10))`.
    pub fn new(ebno_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "code rate {rate} outside (0, 1]"
            )));
        }
        if !ebno_db.is_finite() {
            return Err(Error::InvalidParameter("Eb/N0 must be finite".into()));
        }
        let sigma2 = 1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0));
        Ok(Self {
            ebno_db,
            rate,
            sigma2,
        })
    }
}

/// Map 0 -> -1, 1 -> +1 and add white Gaussian noise of variance `sigma2`.
pub fn transmit<R: Rng + ?Sized>(codeword: &[u8], params: &ChannelParams, rng: &mut R) -> Vec<f64> {
    let sigma = params.sigma2.sqrt();
    codeword
        .iter()
        .map(|&b| {
            let s = if b == 0 { -1.0 } else { 1.0 };
            let z: f64 = rng.sample(StandardNormal);
            s + sigma * z
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameClass {
    Correct,
    Mrl,
    OtherError,
    DetectedFailure,
}

pub fn classify_frame(output: &DecodeOutcome, transmitted: &[u8], received: &[f64]) -> FrameClass {
    if output.hard_decision == transmitted {
        return FrameClass::Correct;
    }
    if !output.valid {
        return FrameClass::DetectedFailure;
    }
    let d_out = euclidean_distance(&output.hard_decision, received).expect("lengths checked by decoder");
    let d_tx = euclidean_distance(transmitted, received).expect("lengths checked by decoder");
    if d_out < d_tx {
        FrameClass::Mrl
    } else {
        FrameClass::OtherError
    }
}

/// Accumulated statistics at one Eb/N0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimPoint {
    pub ebno_db: f64,
    pub frames: u64,
    pub errors: u64,
    pub mrl_errors: u64,
    pub detected_failures: u64,
}

impl SimPoint {
    pub fn new(ebno_db: f64) -> Self {
        Self {
            ebno_db,
            frames: 0,
            errors: 0,
            mrl_errors: 0,
            detected_failures: 0,
        }
    }

    pub fn record(&mut self, class: FrameClass) {
        self.frames += 1;
        match class {
            FrameClass::Correct => {}
            FrameClass::Mrl => {
                self.errors += 1;
                self.mrl_errors += 1;
            }
            FrameClass::OtherError => self.errors += 1,
            FrameClass::DetectedFailure => {
                self.errors += 1;
                self.detected_failures += 1;
            }
        }
    }

    pub fn fer(&self) -> f64 {
        ratio(self.errors, self.frames)
    }

    pub fn mrl_fer(&self) -> f64 {
        ratio(self.mrl_errors, self.frames)
    }

    /// Percentage of erroneous frames that were mrl; `None` without errors.
    pub fn mrl_pct(&self) -> Option<f64> {
        (self.errors > 0).then(|| 100.0 * self.mrl_errors as f64 / self.errors as f64)
    }

    /// Normal-approximation 95% confidence interval on the FER.
    pub fn fer_ci95(&self) -> (f64, f64) {
        let p = self.fer();
        let half = 1.96 * (p * (1.0 - p) / self.frames.max(1) as f64).sqrt();
        ((p - half).max(0.0), (p + half).min(1.0))
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Halt at `min_errors` error events or `max_frames` frames, whichever comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_errors: 100,
            max_frames: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimOptions {
    /// Parallel workers; 0 uses rayon's global pool.
    pub workers: usize,
    /// Send the all-zero codeword instead of random messages.
    pub all_zero: bool,
    /// Frames decoded per scheduling round.
    pub batch: usize,
    /// Progress callback interval in frames; 0 disables it.
    pub progress_every: u64,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            workers: 0,
            all_zero: false,
            batch: 256,
            progress_every: 0,
        }
    }
}

/// Outcome of a single simulated frame.
#[derive(Debug, Clone)]
pub struct FrameResult {
    pub class: FrameClass,
    pub transmitted: Vec<u8>,
    pub received: Vec<f64>,
    pub output: DecodeOutcome,
}

/// RNG stream of frame `index` under `master_seed`.
pub fn frame_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Encode, transmit, decode and classify one frame.
pub fn simulate_frame(
    spec: &CodeSpec,
    decoder: &Decoder,
    params: &ChannelParams,
    master_seed: u64,
    index: u64,
    all_zero: bool,
) -> Result<FrameResult> {
    let mut rng = frame_rng(master_seed, index);
    let message: Vec<u8> = if all_zero {
        vec![0; spec.k]
    } else {
        (0..spec.k).map(|_| (rng.next_u32() & 1) as u8).collect()
    };
    let transmitted = spec.encode(&message);
    debug_assert!(decoder.parity_matrix().syndrome_is_zero(&transmitted));
    let received = transmit(&transmitted, params, &mut rng);
    let output = decoder.decode(&received, params.sigma2, rng.next_u64())?;
    let class = classify_frame(&output, &transmitted, &received);
    Ok(FrameResult {
        class,
        transmitted,
        received,
        output,
    })
}

/// Simulate frames at one Eb/N0 until the stop rule fires.
pub fn run_point(
    spec: &CodeSpec,
    decoder: &Decoder,
    params: &ChannelParams,
    stop: StopRule,
    master_seed: u64,
    opts: &SimOptions,
    mut progress: impl FnMut(&SimPoint),
) -> Result<SimPoint> {
    if stop.min_errors == 0 && stop.max_frames == 0 {
        return Err(Error::InvalidParameter(
            "stop rule needs min_errors or max_frames".into(),
        ));
    }
    let pool = if opts.workers > 0 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.workers)
                .build()
                .map_err(|e| Error::InvalidParameter(e.to_string()))?,
        )
    } else {
        None
    };
    let max_frames = if stop.max_frames == 0 {
        u64::MAX
    } else {
        stop.max_frames
    };
    let min_errors = if stop.min_errors == 0 {
        u64::MAX
    } else {
        stop.min_errors
    };
    let batch = opts.batch.max(1) as u64;

    let mut point = SimPoint::new(params.ebno_db);
    let mut next = 0u64;
    while point.frames < max_frames && point.errors < min_errors {
        let end = (next + batch).min(max_frames);
        let work = || -> Result<Vec<FrameClass>> {
            (next..end)
                .into_par_iter()
                .map(|i| {
                    simulate_frame(spec, decoder, params, master_seed, i, opts.all_zero).map(|f| f.class)
                })
                .collect()
        };
        let classes = match &pool {
            Some(p) => p.install(work)?,
            None => work()?,
        };
        for class in classes {
            point.record(class);
            if opts.progress_every > 0 && point.frames.is_multiple_of(opts.progress_every) {
                progress(&point);
            }
            if point.errors >= min_errors {
                break;
            }
        }
        next = end;
    }
    Ok(point)
}

/// One `run_point` per Eb/N0 with the same master seed; `on_point` sees each result as it completes.
#[allow(clippy::too_many_arguments)]
pub fn run_sweep(
    spec: &CodeSpec,
    decoder: &Decoder,
    ebno_db: &[f64],
    stop: StopRule,
    master_seed: u64,
    opts: &SimOptions,
    mut on_point: impl FnMut(&SimPoint),
    mut progress: impl FnMut(&SimPoint),
) -> Result<Vec<SimPoint>> {
    if ebno_db.is_empty() {
        return Err(Error::InvalidParameter("empty Eb/N0 list".into()));
    }
    let mut out = Vec::with_capacity(ebno_db.len());
    for &e in ebno_db {
        let params = ChannelParams::new(e, spec.rate())?;
        let p = run_point(spec, decoder, &params, stop, master_seed, opts, &mut progress)?;
        on_point(&p);
        out.push(p);
    }
    Ok(out)
}

pub const CSV_HEADER: &str =
    "ebno_db,frames,errors,mrl_errors,detected_failures,fer,mrl_fer,mrl_pct,decoder,psi,trials,seed";

/// One CSV data row (no trailing newline) matching [`CSV_HEADER`].
pub fn csv_row(point: &SimPoint, decoder: &crate::decoder::DecoderConfig, seed: u64) -> String {
    let (psi, trials) = match decoder.kind {
        crate::decoder::DecoderKind::Standard => (0, 0),
        crate::decoder::DecoderKind::Modified => (decoder.psi, decoder.trials),
    };
    let mut s = String::new();
    let _ = write!(
        s,
        "{},{},{},{},{},{:.6e},{:.6e},",
        point.ebno_db,
        point.frames,
        point.errors,
        point.mrl_errors,
        point.detected_failures,
        point.fer(),
        point.mrl_fer()
    );
    match point.mrl_pct() {
        Some(p) => {
            let _ = write!(s, "{p:.2}");
        }
        None => s.push_str("nan"),
    }
    let _ = write!(s, ",{},{psi},{trials},{seed}", decoder.name());
    s
}
