//! Sum-product decoding on the circulant Tanner graph and the substitution variant.
//!
//! The substitution decoder first runs ordinary BP. It then runs `trials` fresh
//! decoding attempts in which, at every iteration, `psi` rows of H are replaced
//! by rows drawn from an extended pool of dual codewords (sums of H rows). Each
//! attempt stops once its hard decision satisfies every row of the original H,
//! and the valid output closest to the received vector in Euclidean distance wins.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codegen::{CodeSpec, SparseParityMatrix};
use crate::error::{Error, Result};

/// Default bound on check-to-variable and channel LLR magnitudes.
pub const DEFAULT_CLIP: f64 = 25.0;

/// Per-bit log-likelihood ratios `log P(0)/P(1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector(Vec<f64>);

impl LlrVector {
    /// Wraps raw values, clipping them to `[-clip, clip]`.
    pub fn new(values: Vec<f64>, clip: f64) -> Self {
        Self(values.into_iter().map(|v| v.clamp(-clip, clip)).collect())
    }

    /// Channel LLRs for BPSK (0 -> -1, 1 -> +1) over AWGN: `-2 r / sigma^2`.
    pub fn from_channel(received: &[f64], sigma2: f64, clip: f64) -> Self {
        Self::new(received.iter().map(|&r| -2.0 * r / sigma2).collect(), clip)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn hard_decision(&self) -> Vec<u8> {
        self.0.iter().map(|&v| (v < 0.0) as u8).collect()
    }
}

/// Squared Euclidean distance between the BPSK image of `bits` and `received`.
pub fn euclidean_distance(bits: &[u8], received: &[f64]) -> Result<f64> {
    if bits.len() != received.len() {
        return Err(Error::LengthMismatch {
            left: bits.len(),
            right: received.len(),
        });
    }
    Ok(distance_unchecked(bits, received))
}

#[inline]
fn distance_unchecked(bits: &[u8], received: &[f64]) -> f64 {
    bits.iter()
        .zip(received)
        .map(|(&b, &r)| {
            let s = if b == 0 { -1.0 } else { 1.0 };
            (s - r) * (s - r)
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub hard_decision: Vec<u8>,
    /// Hard decision satisfies every row of the original H.
    pub valid: bool,
    /// Flooding iterations of the run that produced this output (at least 1).
    pub iterations_used: usize,
    /// Distance to the received vector; `None` when decoding from bare LLRs.
    pub euclidean_distance: Option<f64>,
    /// Substitution trials executed (0 for standard BP).
    pub trials_run: usize,
}

/// Dual codewords formed as GF(2) sums of H rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedPool {
    pub rows: Vec<Vec<usize>>,
    /// H row indices summed to form each pool row.
    pub provenance: Vec<Vec<usize>>,
    /// False when redraws ran out before reaching the requested size.
    pub complete: bool,
}

impl ExtendedPool {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Checks every row against the k basis codewords `x^i g(x)`.
    pub fn is_dual_to(&self, spec: &CodeSpec) -> bool {
        let basis: Vec<Vec<u8>> = (0..spec.k)
            .map(|i| {
                let mut m = vec![0u8; spec.k];
                m[i] = 1;
                spec.encode(&m)
            })
            .collect();
        self.rows
            .iter()
            .all(|row| basis.iter().all(|c| SparseParityMatrix::row_check(row, c)))
    }
}

fn xor_rows(rows: &[&[usize]], n: usize) -> Vec<usize> {
    let mut acc = vec![false; n];
    for row in rows {
        for &j in *row {
            acc[j] ^= true;
        }
    }
    acc.iter()
        .enumerate()
        .filter_map(|(j, &b)| b.then_some(j))
        .collect()
}

/// Draw `count` distinct equations, each the sum of `order` distinct H rows.
///
/// Sums that vanish or repeat an H row or an earlier pool row are redrawn, up to
/// `64 * count` draws in total.
pub fn gen_extended(h: &SparseParityMatrix, count: usize, order: usize, seed: u64) -> Result<ExtendedPool> {
    if count == 0 {
        return Err(Error::InvalidParameter("pool size must be at least 1".into()));
    }
    if order < 2 || order > h.num_rows() {
        return Err(Error::InvalidParameter(format!(
            "combination order {order} must lie in 2..={}",
            h.num_rows()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Vec<usize>> = h.rows.iter().cloned().collect();
    let mut rows = Vec::with_capacity(count);
    let mut provenance = Vec::with_capacity(count);
    let budget = count.saturating_mul(64);
    let mut draws = 0;
    while rows.len() < count && draws < budget {
        draws += 1;
        let mut pick = sample(&mut rng, h.num_rows(), order).into_vec();
        pick.sort_unstable();
        let parts: Vec<&[usize]> = pick.iter().map(|&i| h.rows[i].as_slice()).collect();
        let row = xor_rows(&parts, h.n);
        if row.is_empty() || !seen.insert(row.clone()) {
            continue;
        }
        rows.push(row);
        provenance.push(pick);
    }
    let complete = rows.len() == count;
    Ok(ExtendedPool {
        rows,
        provenance,
        complete,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderKind {
    Standard,
    Modified,
}

/// How rows are chosen for substitution each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// Fresh uniform draws of slots and pool rows.
    Random,
    /// Consecutive blocks of slots and pool rows, advancing every iteration.
    Sequential,
}

/// What a valid hard decision inside a trial ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopScope {
    /// End the current trial; later trials still run.
    Trial,
    /// End the whole decode.
    Global,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoderConfig {
    pub kind: DecoderKind,
    pub max_iter: usize,
    pub trials: usize,
    pub psi: usize,
    pub pool_size: usize,
    pub pool_order: usize,
    pub pool_seed: u64,
    pub clip: f64,
    pub selection: Selection,
    pub stop: StopScope,
    pub early_stop_on_valid: bool,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            kind: DecoderKind::Standard,
            max_iter: 50,
            trials: 50,
            psi: 1,
            pool_size: 1024,
            pool_order: 2,
            pool_seed: 0,
            clip: DEFAULT_CLIP,
            selection: Selection::Random,
            stop: StopScope::Trial,
            early_stop_on_valid: false,
        }
    }
}

impl DecoderConfig {
    pub fn standard(max_iter: usize) -> Self {
        Self {
            kind: DecoderKind::Standard,
            max_iter,
            ..Self::default()
        }
    }

    pub fn modified(psi: usize, trials: usize, max_iter: usize) -> Self {
        Self {
            kind: DecoderKind::Modified,
            psi,
            trials,
            max_iter,
            ..Self::default()
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            DecoderKind::Standard => "bp",
            DecoderKind::Modified => "modbp",
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        if !(self.clip > 0.0 && self.clip.is_finite()) {
            return Err(Error::InvalidParameter("clip must be positive and finite".into()));
        }
        if self.kind == DecoderKind::Modified && self.psi > 0 && self.pool_size < self.psi {
            return Err(Error::PoolTooSmall {
                psi: self.psi,
                pool: self.pool_size,
            });
        }
        Ok(())
    }

    /// `key=value` lines covering every setting.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "decoder={}", self.name());
        let _ = writeln!(s, "max_iter={}", self.max_iter);
        let _ = writeln!(s, "trials={}", self.trials);
        let _ = writeln!(s, "psi={}", self.psi);
        let _ = writeln!(s, "pool_size={}", self.pool_size);
        let _ = writeln!(s, "pool_order={}", self.pool_order);
        let _ = writeln!(s, "pool_seed={}", self.pool_seed);
        let _ = writeln!(s, "clip={}", self.clip);
        let _ = writeln!(
            s,
            "selection={}",
            match self.selection {
                Selection::Random => "random",
                Selection::Sequential => "sequential",
            }
        );
        let _ = writeln!(
            s,
            "stop={}",
            match self.stop {
                StopScope::Trial => "trial",
                StopScope::Global => "global",
            }
        );
        let _ = writeln!(s, "early_stop_on_valid={}", self.early_stop_on_valid);
        s
    }

    /// Parses `key=value` lines; missing keys keep their defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{line}`")))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Parse(format!("bad value `{v}` for {key}")))
        }
        match key {
            "decoder" => {
                self.kind = match value {
                    "bp" | "standard" => DecoderKind::Standard,
                    "modbp" | "modified" => DecoderKind::Modified,
                    _ => return Err(Error::Parse(format!("unknown decoder `{value}`"))),
                }
            }
            "max_iter" => self.max_iter = num(key, value)?,
            "trials" => self.trials = num(key, value)?,
            "psi" => self.psi = num(key, value)?,
            "pool_size" => self.pool_size = num(key, value)?,
            "pool_order" => self.pool_order = num(key, value)?,
            "pool_seed" => self.pool_seed = num(key, value)?,
            "clip" => self.clip = num(key, value)?,
            "selection" => {
                self.selection = match value {
                    "random" => Selection::Random,
                    "sequential" => Selection::Sequential,
                    _ => return Err(Error::Parse(format!("unknown selection `{value}`"))),
                }
            }
            "stop" => {
                self.stop = match value {
                    "trial" => StopScope::Trial,
                    "global" => StopScope::Global,
                    _ => return Err(Error::Parse(format!("unknown stop scope `{value}`"))),
                }
            }
            "early_stop_on_valid" => self.early_stop_on_valid = num(key, value)?,
            _ => return Err(Error::Parse(format!("unknown decoder key `{key}`"))),
        }
        Ok(())
    }
}

/// Message storage for one flooding decoder run; slots map one-to-one onto H rows.
struct Workspace {
    msgs: Vec<Vec<f64>>,
    post: Vec<f64>,
    hard: Vec<u8>,
    tanh: Vec<f64>,
    suffix: Vec<f64>,
}

impl Workspace {
    fn new(h: &SparseParityMatrix) -> Self {
        Self {
            msgs: h.rows.iter().map(|r| vec![0.0; r.len()]).collect(),
            post: vec![0.0; h.n],
            hard: vec![0; h.n],
            tanh: Vec::new(),
            suffix: Vec::new(),
        }
    }

    fn reset(&mut self, llr: &[f64]) {
        for m in &mut self.msgs {
            m.fill(0.0);
        }
        self.post.copy_from_slice(llr);
    }

    fn recompute_posterior<'a>(&mut self, llr: &[f64], rows: impl Iterator<Item = &'a [usize]>) {
        self.post.copy_from_slice(llr);
        for (row, m) in rows.zip(&self.msgs) {
            for (&j, &v) in row.iter().zip(m) {
                self.post[j] += v;
            }
        }
    }

    /// One flooding pass: every check updates from the current posterior, then the
    /// posterior is rebuilt from the new messages.
    fn flood<'a, I>(&mut self, llr: &[f64], rows: I, clip: f64)
    where
        I: Iterator<Item = &'a [usize]> + Clone,
    {
        for (row, m) in rows.clone().zip(self.msgs.iter_mut()) {
            let d = row.len();
            self.tanh.clear();
            for (&j, &old) in row.iter().zip(m.iter()) {
                self.tanh.push(((self.post[j] - old) * 0.5).tanh());
            }
            self.suffix.resize(d + 1, 1.0);
            self.suffix[d] = 1.0;
            for k in (0..d).rev() {
                self.suffix[k] = self.suffix[k + 1] * self.tanh[k];
            }
            let mut prefix = 1.0;
            for (k, mk) in m.iter_mut().enumerate().take(d) {
                let p = prefix * self.suffix[k + 1];
                let v = 2.0 * p.atanh();
                *mk = if v.is_nan() { 0.0 } else { v.clamp(-clip, clip) };
                prefix *= self.tanh[k];
            }
        }
        self.recompute_posterior(llr, rows);
    }

    fn harden(&mut self) {
        for (h, &p) in self.hard.iter_mut().zip(&self.post) {
            *h = (p < 0.0) as u8;
        }
    }
}

/// Standard flooding sum-product decoding over all rows of `h`.
///
/// The channel hard decision is tested before any message update; an input that
/// already satisfies every check is returned as is and reports one iteration.
pub fn bp_decode(llr: &LlrVector, h: &SparseParityMatrix, max_iter: usize) -> DecodeOutcome {
    bp_decode_clipped(llr, h, max_iter, DEFAULT_CLIP)
}

pub fn bp_decode_clipped(
    llr: &LlrVector,
    h: &SparseParityMatrix,
    max_iter: usize,
    clip: f64,
) -> DecodeOutcome {
    assert_eq!(llr.len(), h.n, "LLR length must equal the code length");
    let mut ws = Workspace::new(h);
    run_bp(&mut ws, llr.values(), h, max_iter.max(1), clip)
}

fn run_bp(
    ws: &mut Workspace,
    llr: &[f64],
    h: &SparseParityMatrix,
    max_iter: usize,
    clip: f64,
) -> DecodeOutcome {
    ws.reset(llr);
    ws.harden();
    let mut iterations = 1;
    let mut valid = h.syndrome_is_zero(&ws.hard);
    if !valid {
        for it in 1..=max_iter {
            ws.flood(llr, h.rows.iter().map(Vec::as_slice), clip);
            ws.harden();
            iterations = it;
            valid = h.syndrome_is_zero(&ws.hard);
            if valid {
                break;
            }
        }
    }
    DecodeOutcome {
        hard_decision: ws.hard.clone(),
        valid,
        iterations_used: iterations,
        euclidean_distance: None,
        trials_run: 0,
    }
}

/// The incumbent after one substitution trial, for tracing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub candidate_valid: bool,
    pub candidate_distance: f64,
    pub incumbent_valid: bool,
    pub incumbent_distance: f64,
}

/// Substitution-modified BP decoding of a received BPSK vector.
///
/// Returns the valid candidate of smallest Euclidean distance to `received`
/// among the standard BP output and the `trials` substitution runs. An invalid
/// standard output is displaced by any valid candidate.
pub fn modified_bp(
    received: &[f64],
    sigma2: f64,
    h: &SparseParityMatrix,
    pool: &ExtendedPool,
    cfg: &DecoderConfig,
    seed: u64,
) -> Result<DecodeOutcome> {
    modified_bp_traced(received, sigma2, h, pool, cfg, seed, None)
}

pub fn modified_bp_traced(
    received: &[f64],
    sigma2: f64,
    h: &SparseParityMatrix,
    pool: &ExtendedPool,
    cfg: &DecoderConfig,
    seed: u64,
    mut trace: Option<&mut Vec<TrialRecord>>,
) -> Result<DecodeOutcome> {
    if received.len() != h.n {
        return Err(Error::LengthMismatch {
            left: received.len(),
            right: h.n,
        });
    }
    if cfg.psi > pool.len() {
        return Err(Error::PoolTooSmall {
            psi: cfg.psi,
            pool: pool.len(),
        });
    }
    if cfg.psi > h.num_rows() {
        return Err(Error::InvalidParameter(format!(
            "cannot substitute {} of {} rows",
            cfg.psi,
            h.num_rows()
        )));
    }
    let max_iter = cfg.max_iter.max(1);
    let llr = LlrVector::from_channel(received, sigma2, cfg.clip);
    let llr = llr.values();
    let mut ws = Workspace::new(h);

    let mut best = run_bp(&mut ws, llr, h, max_iter, cfg.clip);
    best.euclidean_distance = Some(distance_unchecked(&best.hard_decision, received));

    // With nothing substituted every trial would repeat the standard schedule.
    if cfg.trials == 0 || cfg.psi == 0 || (cfg.early_stop_on_valid && best.valid) {
        return Ok(best);
    }

    let n_rows = h.num_rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // slot -> pool row currently substituted there
    let mut slot_pool: Vec<Option<usize>> = vec![None; n_rows];
    let mut active: Vec<usize> = Vec::with_capacity(cfg.psi);
    let mut cursor = 0usize;
    let mut trials_run = 0;

    for trial in 1..=cfg.trials {
        trials_run = trial;
        ws.reset(llr);
        for s in active.drain(..) {
            slot_pool[s] = None;
            ws.msgs[s].clear();
            ws.msgs[s].resize(h.rows[s].len(), 0.0);
        }
        let mut valid = false;
        let mut iterations = 0;
        for it in 1..=max_iter {
            iterations = it;
            for s in active.drain(..) {
                slot_pool[s] = None;
                ws.msgs[s].clear();
                ws.msgs[s].resize(h.rows[s].len(), 0.0);
            }
            let (slots, picks): (Vec<usize>, Vec<usize>) = match cfg.selection {
                Selection::Random => (
                    sample(&mut rng, n_rows, cfg.psi).into_vec(),
                    sample(&mut rng, pool.len(), cfg.psi).into_vec(),
                ),
                Selection::Sequential => {
                    let base = cursor * cfg.psi;
                    cursor += 1;
                    (
                        (0..cfg.psi).map(|t| (base + t) % n_rows).collect(),
                        (0..cfg.psi).map(|t| (base + t) % pool.len()).collect(),
                    )
                }
            };
            for (&s, &p) in slots.iter().zip(&picks) {
                slot_pool[s] = Some(p);
                ws.msgs[s].clear();
                ws.msgs[s].resize(pool.rows[p].len(), 0.0);
                active.push(s);
            }
            let rows = slot_pool.iter().enumerate().map(|(s, p)| match p {
                Some(p) => pool.rows[*p].as_slice(),
                None => h.rows[s].as_slice(),
            });
            ws.recompute_posterior(llr, rows.clone());
            ws.flood(llr, rows, cfg.clip);
            ws.harden();
            // Validity is always judged against the original H.
            if h.syndrome_is_zero(&ws.hard) {
                valid = true;
                break;
            }
        }

        let dist = distance_unchecked(&ws.hard, received);
        let improves = valid && (!best.valid || dist < best.euclidean_distance.unwrap_or(f64::INFINITY));
        if improves {
            best = DecodeOutcome {
                hard_decision: ws.hard.clone(),
                valid: true,
                iterations_used: iterations,
                euclidean_distance: Some(dist),
                trials_run: 0,
            };
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(TrialRecord {
                trial,
                candidate_valid: valid,
                candidate_distance: dist,
                incumbent_valid: best.valid,
                incumbent_distance: best.euclidean_distance.unwrap_or(f64::INFINITY),
            });
        }
        if valid && cfg.stop == StopScope::Global {
            break;
        }
    }
    best.trials_run = trials_run;
    Ok(best)
}

/// A parity-check matrix, optional extended pool and configuration bundled for repeated use.
#[derive(Debug, Clone)]
pub struct Decoder {
    h: SparseParityMatrix,
    pool: Option<ExtendedPool>,
    cfg: DecoderConfig,
}

impl Decoder {
    pub fn new(spec: &CodeSpec, cfg: DecoderConfig) -> Result<Self> {
        cfg.validate()?;
        let h = spec.parity_matrix();
        let pool = match cfg.kind {
            DecoderKind::Modified if cfg.psi > 0 => {
                let pool = gen_extended(&h, cfg.pool_size, cfg.pool_order, cfg.pool_seed)?;
                if pool.len() < cfg.psi {
                    return Err(Error::PoolTooSmall {
                        psi: cfg.psi,
                        pool: pool.len(),
                    });
                }
                Some(pool)
            }
            _ => None,
        };
        Ok(Self { h, pool, cfg })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.cfg
    }

    pub fn parity_matrix(&self) -> &SparseParityMatrix {
        &self.h
    }

    pub fn pool(&self) -> Option<&ExtendedPool> {
        self.pool.as_ref()
    }

    /// Decode one received vector; `seed` drives substitution choices.
    pub fn decode(&self, received: &[f64], sigma2: f64, seed: u64) -> Result<DecodeOutcome> {
        match (&self.cfg.kind, &self.pool) {
            (DecoderKind::Modified, Some(pool)) => {
                modified_bp(received, sigma2, &self.h, pool, &self.cfg, seed)
            }
            _ => {
                if received.len() != self.h.n {
                    return Err(Error::LengthMismatch {
                        left: received.len(),
                        right: self.h.n,
                    });
                }
                let llr = LlrVector::from_channel(received, sigma2, self.cfg.clip);
                let mut out = bp_decode_clipped(&llr, &self.h, self.cfg.max_iter, self.cfg.clip);
                out.euclidean_distance = Some(distance_unchecked(&out.hard_decision, received));
                Ok(out)
            }
        }
    }
}
