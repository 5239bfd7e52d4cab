use msldpc::simchan::{simulate_frame, SimOptions};
use msldpc::*;

fn code() -> CodeSpec {
    catalog_code("63_37").unwrap()
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let spec = code();
    let dec = Decoder::new(&spec, DecoderConfig::modified(2, 5, 20)).unwrap();
    let params = ChannelParams::new(2.0, spec.rate()).unwrap();
    let stop = StopRule {
        min_errors: 20,
        max_frames: 2000,
    };
    let run = |workers, batch| {
        let opts = SimOptions {
            workers,
            batch,
            ..SimOptions::default()
        };
        run_point(&spec, &dec, &params, stop, 42, &opts, |_| {}).unwrap()
    };
    let a = run(1, 16);
    let b = run(3, 64);
    let c = run(2, 1);
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a.errors, 20);
}

#[test]
fn sweep_of_one_point_matches_run_point() {
    let spec = code();
    let dec = Decoder::new(&spec, DecoderConfig::standard(50)).unwrap();
    let stop = StopRule {
        min_errors: 30,
        max_frames: 100_000,
    };
    let opts = SimOptions::default();
    let mut seen = Vec::new();
    let sweep = run_sweep(&spec, &dec, &[2.0], stop, 5, &opts, |p| seen.push(*p), |_| {}).unwrap();
    let params = ChannelParams::new(2.0, spec.rate()).unwrap();
    let point = run_point(&spec, &dec, &params, stop, 5, &opts, |_| {}).unwrap();
    assert_eq!(sweep, vec![point]);
    assert_eq!(seen, sweep);
    assert!(run_sweep(&spec, &dec, &[], stop, 5, &opts, |_| {}, |_| {}).is_err());
}

#[test]
fn high_snr_has_no_errors() {
    let spec = code();
    let dec = Decoder::new(&spec, DecoderConfig::standard(50)).unwrap();
    let params = ChannelParams::new(60.0, spec.rate()).unwrap();
    let stop = StopRule {
        min_errors: 1,
        max_frames: 2000,
    };
    let p = run_point(&spec, &dec, &params, stop, 1, &SimOptions::default(), |_| {}).unwrap();
    assert_eq!(p.frames, 2000);
    assert_eq!(p.fer(), 0.0);
}

#[test]
fn progress_callback_fires() {
    let spec = code();
    let dec = Decoder::new(&spec, DecoderConfig::standard(10)).unwrap();
    let params = ChannelParams::new(3.0, spec.rate()).unwrap();
    let opts = SimOptions {
        progress_every: 100,
        ..SimOptions::default()
    };
    let mut calls = 0;
    let stop = StopRule {
        min_errors: 0,
        max_frames: 1000,
    };
    run_point(&spec, &dec, &params, stop, 1, &opts, |p| {
        calls += 1;
        assert_eq!(p.frames % 100, 0);
    })
    .unwrap();
    assert_eq!(calls, 10);
}

#[test]
fn fer_decreases_with_snr() {
    let spec = code();
    let dec = Decoder::new(&spec, DecoderConfig::standard(50)).unwrap();
    let stop = StopRule {
        min_errors: 100,
        max_frames: 10_000_000,
    };
    let pts = run_sweep(
        &spec,
        &dec,
        &[1.5, 2.5, 3.5],
        stop,
        3,
        &SimOptions::default(),
        |_| {},
        |_| {},
    )
    .unwrap();
    for w in pts.windows(2) {
        assert!(w[1].fer() < w[0].fer(), "{:?}", pts);
    }
    for p in &pts {
        assert!(p.mrl_fer() <= p.fer());
        assert!(p.mrl_errors <= p.errors && p.errors <= p.frames);
    }
}

#[test]
fn all_zero_codeword_matches_random_messages() {
    let spec = code();
    let dec = Decoder::new(&spec, DecoderConfig::standard(50)).unwrap();
    let params = ChannelParams::new(2.0, spec.rate()).unwrap();
    let stop = StopRule {
        min_errors: 0,
        max_frames: 20_000,
    };
    let random = run_point(&spec, &dec, &params, stop, 9, &SimOptions::default(), |_| {}).unwrap();
    let zero_opts = SimOptions {
        all_zero: true,
        ..SimOptions::default()
    };
    let zero = run_point(&spec, &dec, &params, stop, 10, &zero_opts, |_| {}).unwrap();
    let (p, q) = (random.fer(), zero.fer());
    let se = ((p * (1.0 - p) + q * (1.0 - q)) / 20_000.0).sqrt();
    assert!((p - q).abs() < 4.0 * se, "random {p} vs all-zero {q}");
}

#[test]
fn modified_output_never_farther_than_standard() {
    let spec = code();
    let std = Decoder::new(&spec, DecoderConfig::standard(50)).unwrap();
    let modi = Decoder::new(&spec, DecoderConfig::modified(8, 10, 50)).unwrap();
    let params = ChannelParams::new(2.0, spec.rate()).unwrap();
    for i in 0..300 {
        let a = simulate_frame(&spec, &std, &params, 77, i, false).unwrap();
        let b = simulate_frame(&spec, &modi, &params, 77, i, false).unwrap();
        assert_eq!(a.received, b.received);
        assert!(std.parity_matrix().syndrome_is_zero(&a.transmitted));
        if a.output.valid {
            assert!(b.output.valid);
            assert!(b.output.euclidean_distance.unwrap() <= a.output.euclidean_distance.unwrap());
        }
    }
}
