//! Binary cyclic LDPC codes built from idempotents in the Mattson-Solomon
//! domain, decoded with standard and substitution-modified belief propagation.
//!
//! * [`galois`]: GF(2^m) exp/log tables.
//! * [`polyring`]: binary polynomials, cyclotomic cosets, factors of `1+z^n`.
//! * [`msdomain`]: primitive idempotents and the Mattson-Solomon transform.
//! * [`codegen`]: code construction, orthogonality, parity-check matrices, catalog.
//! * [`decoder`]: sum-product BP and the row-substitution decoder.
//! * [`simchan`]: BPSK/AWGN Monte-Carlo with mrl classification.

pub mod codegen;
pub mod decoder;
pub mod error;
pub mod galois;
pub mod msdomain;
pub mod polyring;
pub mod simchan;

pub use codegen::{
    build_code, build_parity_matrix, catalog, catalog_code, check_orthogonality, search_orthogonal, CodeSpec,
    SparseParityMatrix,
};
pub use decoder::{
    bp_decode, euclidean_distance, gen_extended, modified_bp, DecodeOutcome, Decoder, DecoderConfig,
    DecoderKind, ExtendedPool, LlrVector,
};
pub use error::{Error, Result};
pub use galois::{build_field, splitting_degree, FieldElem, FieldTable};
pub use msdomain::{ms_forward, ms_inverse, primitive_idempotent, Idempotent};
pub use polyring::{cyclotomic_cosets, factorize_xn_plus_1, formal_derivative, gcd, BinPoly, FactorSet};
pub use simchan::{
    classify_frame, run_point, run_sweep, transmit, ChannelParams, FrameClass, SimPoint, StopRule,
};
