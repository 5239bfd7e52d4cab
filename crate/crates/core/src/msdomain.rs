//! Primitive idempotents and the Mattson-Solomon transform pair on binary idempotents.
//!
//! With `beta` a primitive n-th root of unity:
//!
//! * forward: `A_j = a(beta^-j)`
//! * inverse: `a_i = A(beta^i)` (the `1/n` factor is 1 for odd n in characteristic 2)
//!
//! Only binary idempotents are transformed; their images are binary idempotents.

use crate::error::{Error, Result};
use crate::galois::FieldTable;
use crate::polyring::{formal_derivative, BinPoly};

/// A binary polynomial `e` with `e(z)^2 = e(z) mod 1+z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Idempotent {
    poly: BinPoly,
    n: usize,
}

impl Idempotent {
    /// Wrap `poly` after checking that its support is closed under doubling mod n.
    pub fn new(poly: BinPoly, n: usize) -> Result<Self> {
        let poly = poly.reduce_cyclic(n);
        if !is_idempotent(&poly, n) {
            return Err(Error::InvalidParameter(format!(
                "{poly} is not idempotent mod 1+z^{n}"
            )));
        }
        Ok(Self { poly, n })
    }

    pub fn poly(&self) -> &BinPoly {
        &self.poly
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> usize {
        self.poly.weight()
    }

    pub fn into_poly(self) -> BinPoly {
        self.poly
    }
}

pub fn is_idempotent(p: &BinPoly, n: usize) -> bool {
    p.square_cyclic(n) == p.reduce_cyclic(n)
}

/// Primitive idempotent of an irreducible factor `f` of `1+z^n`:
/// `z (1+z^n)/f * f' + delta (1+z^n)`, with `delta = 1` when deg f is odd, reduced mod `1+z^n`.
pub fn primitive_idempotent(f: &BinPoly, n: usize) -> Result<Idempotent> {
    let xn1 = BinPoly::xn_plus_one(n);
    let deg = f.degree().ok_or_else(|| Error::NotAFactor(f.to_string(), n))?;
    let (quot, rem) = xn1.div_rem(f);
    if !rem.is_zero() {
        return Err(Error::NotAFactor(f.to_string(), n));
    }
    let mut theta = quot.mul(&formal_derivative(f)).shl(1);
    if deg % 2 == 1 {
        theta.add_assign(&xn1);
    }
    let theta = theta.reduce_cyclic(n);
    if !is_idempotent(&theta, n) {
        return Err(Error::Internal(format!(
            "primitive idempotent {theta} of {f} fails e^2 = e"
        )));
    }
    Ok(Idempotent { poly: theta, n })
}

fn transform(a: &BinPoly, n: usize, field: &FieldTable, sign: i64) -> Result<BinPoly> {
    let beta = field.root_of_unity(n)?;
    let log_beta = field.log_of(beta).expect("root of unity is nonzero") as i64;
    let support = a.reduce_cyclic(n).support();
    let mut out = BinPoly::zero();
    for j in 0..n {
        // a(beta^(sign*j)) as a sum of powers of alpha
        let step = sign * j as i64 * log_beta;
        let mut acc = 0u32;
        for &e in &support {
            acc ^= field.exp_of(step * e as i64).bits();
        }
        match acc {
            0 => {}
            1 => out.set(j, true),
            _ => return Err(Error::NotIdempotent { index: j }),
        }
    }
    Ok(out)
}

/// Forward transform `A_j = a(beta^-j)`.
pub fn ms_forward(a: &BinPoly, n: usize, field: &FieldTable) -> Result<BinPoly> {
    transform(a, n, field, -1)
}

/// Inverse transform `a_i = A(beta^i)`.
pub fn ms_inverse(a: &BinPoly, n: usize, field: &FieldTable) -> Result<BinPoly> {
    transform(a, n, field, 1)
}
