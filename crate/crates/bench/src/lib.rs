//! Shared fixtures for the benchmarks.

use msldpc::simchan::simulate_frame;
use msldpc::{catalog_code, ChannelParams, CodeSpec, Decoder, DecoderConfig};

pub fn code(name: &str) -> CodeSpec {
    catalog_code(name).expect("catalog code")
}

/// Received vectors of `count` random codewords at `ebno_db`, with the channel noise variance.
pub fn received_frames(spec: &CodeSpec, ebno_db: f64, count: u64, seed: u64) -> (Vec<Vec<f64>>, f64) {
    let params = ChannelParams::new(ebno_db, spec.rate()).expect("valid channel");
    let dec = Decoder::new(spec, DecoderConfig::standard(1)).expect("decoder");
    let frames = (0..count)
        .map(|i| {
            simulate_frame(spec, &dec, &params, seed, i, false)
                .expect("frame")
                .received
        })
        .collect();
    (frames, params.sigma2)
}
