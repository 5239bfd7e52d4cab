//! GF(2^m) arithmetic through exponential and logarithm tables.

use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::polyring::BinPoly;

/// Default primitive polynomials for m = 1..=16, as bit patterns (bit i is z^i).
const DEFAULT_PRIMITIVE: [u32; 17] = [
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003,
    0x1100B,
];

/// An element of GF(2^m) written in the polynomial basis of alpha.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn from_bits(bits: u32) -> Self {
        FieldElem(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// Addition in characteristic 2 is XOR of the basis coordinates.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for FieldElem {
    type Output = FieldElem;

    fn add(self, rhs: FieldElem) -> FieldElem {
        FieldElem(self.0 ^ rhs.0)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}

/// Exp/log tables for GF(2^m) generated by a primitive polynomial.
#[derive(Clone)]
pub struct FieldTable {
    m: u32,
    primitive_poly: BinPoly,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTable")
            .field("m", &self.m)
            .field("primitive_poly", &self.primitive_poly)
            .finish()
    }
}

/// Build GF(2^m). Without an explicit polynomial the built-in default for `m`
/// is used (for example `1+z+z^6` when m = 6).
pub fn build_field(m: u32, primitive_poly: Option<&BinPoly>) -> Result<FieldTable> {
    if !(1..=16).contains(&m) {
        return Err(Error::DegreeOutOfRange(m));
    }
    let poly = match primitive_poly {
        Some(p) => {
            if p.degree() != Some(m as usize) {
                return Err(Error::WrongDegree {
                    poly: p.to_string(),
                    degree: p.degree().map_or(-1, |d| d as i64),
                    expected: m,
                });
            }
            p.clone()
        }
        None => BinPoly::from_u64(DEFAULT_PRIMITIVE[m as usize] as u64),
    };
    let bits = poly.low_u64() as u32;
    let order = (1usize << m) - 1;
    let top = 1u32 << m;

    let mut exp = Vec::with_capacity(order);
    let mut log = vec![u32::MAX; 1 << m];
    let mut x = 1u32;
    for i in 0..order {
        if log[x as usize] != u32::MAX {
            return Err(Error::NotPrimitive {
                poly: poly.to_string(),
                cycle: i,
                order,
            });
        }
        exp.push(x);
        log[x as usize] = i as u32;
        x <<= 1;
        if x & top != 0 {
            x ^= bits;
        }
    }
    if x != 1 {
        // Cannot happen for a degree-m modulus once all nonzero elements were visited.
        return Err(Error::Internal(format!("alpha^{order} != 1 for {poly}")));
    }
    Ok(FieldTable {
        m,
        primitive_poly: poly,
        exp,
        log,
    })
}

/// Smallest m with 2^m = 1 (mod n), i.e. the degree of the splitting field of 1+x^n.
pub fn splitting_degree(n: usize) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenLength(n));
    }
    let mut m = 1u32;
    let mut pow = 2 % n;
    while pow != 1 % n {
        pow = (pow * 2) % n;
        m += 1;
    }
    Ok(m)
}

impl FieldTable {
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Multiplicative order 2^m - 1.
    pub fn order(&self) -> usize {
        self.exp.len()
    }

    pub fn primitive_poly(&self) -> &BinPoly {
        &self.primitive_poly
    }

    /// The generator alpha.
    pub fn alpha(&self) -> FieldElem {
        self.exp_of(1)
    }

    /// alpha^i for any integer exponent.
    pub fn exp_of(&self, i: i64) -> FieldElem {
        let ord = self.order() as i64;
        FieldElem(self.exp[i.rem_euclid(ord) as usize])
    }

    /// Discrete log base alpha; `None` for zero.
    pub fn log_of(&self, a: FieldElem) -> Option<usize> {
        if a.is_zero() {
            None
        } else {
            Some(self.log[a.0 as usize] as usize)
        }
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        let s = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        let ord = self.exp.len();
        FieldElem(self.exp[if s >= ord { s - ord } else { s }])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        let l = self.log_of(a)?;
        Some(self.exp_of(-(l as i64)))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        match self.log_of(a) {
            None if e == 0 => FieldElem::ONE,
            None => FieldElem::ZERO,
            Some(l) => {
                let ord = self.order() as u64;
                FieldElem(self.exp[((l as u64 * (e % ord)) % ord) as usize])
            }
        }
    }

    /// beta = alpha^((2^m - 1)/n), an element of multiplicative order exactly n.
    pub fn root_of_unity(&self, n: usize) -> Result<FieldElem> {
        if n == 0 || !self.order().is_multiple_of(n) {
            return Err(Error::FieldMismatch { n, m: self.m });
        }
        Ok(self.exp_of((self.order() / n) as i64))
    }
}

pub use crate::polyring::eval_at;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gf8_sequence() {
        let f = build_field(3, Some(&BinPoly::from_exponents([0, 1, 3]))).unwrap();
        assert_eq!(f.exp_table(), &[0b001, 0b010, 0b100, 0b011, 0b110, 0b111, 0b101]);
        assert_eq!(f.order(), 7);
    }

    #[test]
    fn base_field() {
        let f = build_field(1, None).unwrap();
        assert_eq!(f.order(), 1);
        assert_eq!(f.alpha(), FieldElem::ONE);
        assert_eq!(f.mul(FieldElem::ONE, FieldElem::ONE), FieldElem::ONE);
    }

    #[test]
    fn defaults_are_primitive() {
        for m in 1..=16 {
            let f = build_field(m, None).unwrap();
            assert_eq!(f.order(), (1 << m) - 1);
        }
        assert_eq!(
            build_field(6, None).unwrap().primitive_poly().to_string(),
            "1+z+z^6"
        );
    }

    #[test]
    fn rejects_non_primitive() {
        // 1+z+z^2+z^3+z^4 is irreducible but alpha has order 5.
        let err = build_field(4, Some(&BinPoly::from_exponents([0, 1, 2, 3, 4]))).unwrap_err();
        assert_eq!(
            err,
            Error::NotPrimitive {
                poly: "1+z+z^2+z^3+z^4".into(),
                cycle: 5,
                order: 15
            }
        );
        assert!(matches!(
            build_field(4, Some(&BinPoly::from_exponents([0, 3]))),
            Err(Error::WrongDegree { .. })
        ));
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(build_field(0, None).unwrap_err(), Error::DegreeOutOfRange(0));
        assert_eq!(build_field(17, None).unwrap_err(), Error::DegreeOutOfRange(17));
    }

    #[test]
    fn splitting_degrees() {
        assert_eq!(splitting_degree(7).unwrap(), 3);
        assert_eq!(splitting_degree(1).unwrap(), 1);
        assert_eq!(splitting_degree(63).unwrap(), 6);
        assert_eq!(splitting_degree(21).unwrap(), 6);
        assert_eq!(splitting_degree(73).unwrap(), 9);
        assert_eq!(splitting_degree(341).unwrap(), 10);
        assert_eq!(splitting_degree(511).unwrap(), 9);
        assert_eq!(splitting_degree(10), Err(Error::EvenLength(10)));
    }

    #[test]
    fn evaluation() {
        let f = build_field(3, Some(&BinPoly::from_exponents([0, 1, 3]))).unwrap();
        let p = BinPoly::from_exponents([0, 1, 3]);
        assert_eq!(eval_at(&p, f.alpha(), &f), FieldElem::ZERO);
        assert_eq!(eval_at(&p, FieldElem::ZERO, &f), FieldElem::ONE);
        let q = BinPoly::from_exponents([1, 3]);
        assert_eq!(eval_at(&q, FieldElem::ZERO, &f), FieldElem::ZERO);
    }

    #[test]
    fn root_of_unity_order() {
        for n in [7usize, 21, 63, 73, 93, 105] {
            let f = build_field(splitting_degree(n).unwrap(), None).unwrap();
            let beta = f.root_of_unity(n).unwrap();
            let ones: Vec<usize> = (1..=n)
                .filter(|&i| f.pow(beta, i as u64) == FieldElem::ONE)
                .collect();
            assert_eq!(ones, vec![n]);
            let xn1 = BinPoly::xn_plus_one(n);
            for i in 0..n {
                assert!(eval_at(&xn1, f.pow(beta, i as u64), &f).is_zero());
            }
        }
    }

    #[test]
    fn only_identity_has_log_zero() {
        let f = build_field(8, None).unwrap();
        let ones = (0..f.order())
            .filter(|&i| f.exp_of(i as i64) == FieldElem::ONE)
            .count();
        assert_eq!(ones, 1);
    }

    proptest! {
        #[test]
        fn log_of_product(m in 2u32..=12, a in 1u32..u32::MAX, b in 1u32..u32::MAX) {
            let f = build_field(m, None).unwrap();
            let mask = (1u32 << m) - 1;
            let (a, b) = (FieldElem::from_bits((a & mask).max(1)), FieldElem::from_bits((b & mask).max(1)));
            let lp = f.log_of(f.mul(a, b)).unwrap();
            prop_assert_eq!(lp, (f.log_of(a).unwrap() + f.log_of(b).unwrap()) % f.order());
            prop_assert!((a + a).is_zero());
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
        }

        #[test]
        fn exp_is_homomorphic(i in 0i64..1000, j in 0i64..1000) {
            let f = build_field(9, None).unwrap();
            prop_assert_eq!(f.mul(f.exp_of(i), f.exp_of(j)), f.exp_of(i + j));
        }

        #[test]
        fn eval_is_additive(p in any::<u64>(), q in any::<u64>(), x in 0u32..256) {
            let f = build_field(8, None).unwrap();
            let (p, q) = (BinPoly::from_u64(p), BinPoly::from_u64(q));
            let x = FieldElem::from_bits(x);
            prop_assert_eq!(eval_at(&p.add(&q), x, &f), eval_at(&p, x, &f) + eval_at(&q, x, &f));
        }
    }
}
