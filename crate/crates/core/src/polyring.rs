//! Binary polynomials and the ring GF(2)[z]/(1+z^n).
//!
//! [`BinPoly`] is a dense little-endian bitset of coefficients. The ring helpers
//! split `1+z^n` (n odd) into its irreducible factors by expanding
//! `prod (z + beta^j)` over each cyclotomic coset in the splitting field.

use std::fmt;

use crate::error::{Error, Result};
use crate::galois::{FieldElem, FieldTable};

const WORD: usize = 64;

/// Polynomial over GF(2), coefficient `i` stored in bit `i % 64` of word `i / 64`.
///
/// The word vector never carries trailing zero words, so structural equality is
/// polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BinPoly {
    words: Vec<u64>,
}

impl BinPoly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(exp: usize) -> Self {
        let mut p = Self::zero();
        p.set(exp, true);
        p
    }

    /// `1 + z^n`.
    pub fn xn_plus_one(n: usize) -> Self {
        let mut p = Self::monomial(n);
        p.flip(0);
        p
    }

    /// Sum of `z^e` over the given exponents; repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = Self::zero();
        for e in exps {
            p.flip(e);
        }
        p
    }

    /// Polynomial whose coefficient bits are the low bits of `bits`.
    pub fn from_u64(bits: u64) -> Self {
        let mut p = Self { words: vec![bits] };
        p.normalize();
        p
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Self { words };
        p.normalize();
        p
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Low 64 coefficients as an integer (truncating).
    pub fn low_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * WORD + (WORD - 1 - last.leading_zeros() as usize))
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / WORD)
            .is_some_and(|w| (w >> (i % WORD)) & 1 == 1)
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let (w, b) = (i / WORD, i % WORD);
        if value {
            if self.words.len() <= w {
                self.words.resize(w + 1, 0);
            }
            self.words[w] |= 1 << b;
        } else if w < self.words.len() {
            self.words[w] &= !(1 << b);
            self.normalize();
        }
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.coeff(i);
        self.set(i, !v);
    }

    /// Exponents with a nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * WORD + b);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        Self::from_words(words)
    }

    pub fn add_assign(&mut self, other: &Self) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (w, s) in self.words.iter_mut().zip(&other.words) {
            *w ^= s;
        }
        self.normalize();
    }

    /// Multiply by `z^k`.
    pub fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = (k / WORD, k % WORD);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] |= w << bs;
            if bs != 0 {
                words[i + ws + 1] |= w >> (WORD - bs);
            }
        }
        Self::from_words(words)
    }

    /// Carry-less product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (a, b) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Self::zero();
        for e in a.support() {
            acc.add_assign(&b.shl(e));
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quot.flip(shift);
            rem.add_assign(&divisor.shl(shift));
        }
        (quot, rem)
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Reduce modulo `1 + z^n` by folding exponent `e` onto `e mod n`.
    pub fn reduce_cyclic(&self, n: usize) -> Self {
        let mut out = Self::zero();
        for e in self.support() {
            out.flip(e % n);
        }
        out
    }

    /// Product in GF(2)[z]/(1+z^n).
    pub fn mul_cyclic(&self, other: &Self, n: usize) -> Self {
        self.mul(other).reduce_cyclic(n)
    }

    /// `p(z^2) mod (1+z^n)`, which equals `p(z)^2` in characteristic 2.
    pub fn square_cyclic(&self, n: usize) -> Self {
        Self::from_exponents(self.support().into_iter().map(|e| (2 * e) % n))
    }

    /// `z^n p(z^{-1})` reduced mod `1+z^n`, i.e. exponent `e` maps to `-e mod n`.
    pub fn reciprocal_cyclic(&self, n: usize) -> Self {
        Self::from_exponents(self.support().into_iter().map(|e| (n - e % n) % n))
    }

    /// Horner evaluation at a field element.
    pub fn eval(&self, x: FieldElem, field: &FieldTable) -> FieldElem {
        eval_at(self, x, field)
    }
}

impl fmt::Display for BinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, e) in self.support().into_iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match e {
                0 => write!(f, "1")?,
                1 => write!(f, "z")?,
                _ => write!(f, "z^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinPoly({self})")
    }
}

/// Evaluate `p` at `x` by Horner's rule.
pub fn eval_at(p: &BinPoly, x: FieldElem, field: &FieldTable) -> FieldElem {
    let Some(deg) = p.degree() else {
        return FieldElem::ZERO;
    };
    let mut acc = FieldElem::ZERO;
    for i in (0..=deg).rev() {
        acc = field.mul(acc, x);
        if p.coeff(i) {
            acc = acc + FieldElem::ONE;
        }
    }
    acc
}

/// Monic gcd by Euclid's algorithm. Over GF(2) every nonzero polynomial is monic.
pub fn gcd(a: &BinPoly, b: &BinPoly) -> Result<BinPoly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.rem(&y);
        x = y;
        y = r;
    }
    Ok(x)
}

/// Formal derivative: odd-exponent terms drop one degree, even ones vanish.
pub fn formal_derivative(f: &BinPoly) -> BinPoly {
    BinPoly::from_exponents(f.support().into_iter().filter(|e| e % 2 == 1).map(|e| e - 1))
}

fn check_odd(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroLength)
    } else if n.is_multiple_of(2) {
        Err(Error::EvenLength(n))
    } else {
        Ok(())
    }
}

/// A cyclotomic coset of 2 modulo n, members listed in doubling order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coset {
    members: Vec<usize>,
}

impl Coset {
    /// Smallest member.
    pub fn representative(&self) -> usize {
        self.members[0]
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.members.contains(&e)
    }
}

/// Partition of `0..n` into orbits of `i -> 2i mod n`, ordered by representative.
pub fn cyclotomic_cosets(n: usize) -> Result<Vec<Coset>> {
    check_odd(n)?;
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut e = start;
        while !seen[e] {
            seen[e] = true;
            members.push(e);
            e = (2 * e) % n;
        }
        out.push(Coset { members });
    }
    Ok(out)
}

/// The irreducible factorization of `1+z^n`, one factor per cyclotomic coset.
#[derive(Debug, Clone)]
pub struct FactorSet {
    n: usize,
    factors: Vec<BinPoly>,
    cosets: Vec<Coset>,
}

impl FactorSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[BinPoly] {
        &self.factors
    }

    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Index of the factor whose coset has representative `rep`.
    pub fn index_of_rep(&self, rep: usize) -> Option<usize> {
        self.cosets.iter().position(|c| c.representative() == rep)
    }

    /// Factor paired with the coset containing exponent `e`.
    pub fn factor_containing(&self, e: usize) -> Option<(usize, &BinPoly)> {
        let i = self.cosets.iter().position(|c| c.contains(e % self.n))?;
        Some((i, &self.factors[i]))
    }
}

/// Factor `1+z^n` as `prod_C prod_{j in C} (z + beta^j)` with `beta` the field's
/// n-th root of unity.
pub fn factorize_xn_plus_1(n: usize, field: &FieldTable) -> Result<FactorSet> {
    let cosets = cyclotomic_cosets(n)?;
    let beta = field.root_of_unity(n)?;
    let mut factors = Vec::with_capacity(cosets.len());
    for coset in &cosets {
        // Field-coefficient polynomial, ascending powers.
        let mut coeffs = vec![FieldElem::ONE];
        for &j in coset.members() {
            let root = field.pow(beta, j as u64);
            let mut next = vec![FieldElem::ZERO; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1] + c;
                next[i] = next[i] + field.mul(c, root);
            }
            coeffs = next;
        }
        let mut f = BinPoly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            match c.bits() {
                0 => {}
                1 => f.set(i, true),
                _ => {
                    return Err(Error::Internal(format!(
                        "factor for coset {} has a non-binary coefficient at z^{i}",
                        coset.representative()
                    )))
                }
            }
        }
        factors.push(f);
    }
    let product = factors.iter().fold(BinPoly::one(), |acc, f| acc.mul(f));
    if product != BinPoly::xn_plus_one(n) {
        return Err(Error::Internal(format!(
            "factor product {product} differs from 1+z^{n}"
        )));
    }
    Ok(FactorSet { n, factors, cosets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{build_field, splitting_degree};
    use proptest::prelude::*;

    fn p(exps: &[usize]) -> BinPoly {
        BinPoly::from_exponents(exps.iter().copied())
    }

    #[test]
    fn degree_and_weight() {
        assert_eq!(BinPoly::zero().degree(), None);
        assert_eq!(p(&[0, 64, 130]).degree(), Some(130));
        assert_eq!(p(&[0, 64, 130]).weight(), 3);
        let mut q = p(&[200]);
        q.set(200, false);
        assert!(q.is_zero());
        assert_eq!(q.words().len(), 0);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[0, 1, 3]).to_string(), "1+z+z^3");
        assert_eq!(BinPoly::zero().to_string(), "0");
    }

    #[test]
    fn cosets_mod_7() {
        let c = cyclotomic_cosets(7).unwrap();
        let m: Vec<&[usize]> = c.iter().map(|c| c.members()).collect();
        assert_eq!(m, vec![&[0][..], &[1, 2, 4][..], &[3, 6, 5][..]]);
    }

    #[test]
    fn cosets_mod_3_and_21() {
        let c = cyclotomic_cosets(3).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[1].members(), &[1, 2]);
        let c = cyclotomic_cosets(21).unwrap();
        let sizes: Vec<usize> = c.iter().map(Coset::len).collect();
        let reps: Vec<usize> = c.iter().map(Coset::representative).collect();
        assert_eq!(sizes, vec![1, 6, 3, 6, 2, 3]);
        assert_eq!(reps, vec![0, 1, 3, 5, 7, 9]);
    }

    #[test]
    fn cosets_reject_even() {
        assert_eq!(cyclotomic_cosets(8), Err(Error::EvenLength(8)));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&p(&[0, 2]), &p(&[0, 1])).unwrap(), p(&[0, 1]));
        assert_eq!(gcd(&p(&[0, 1, 3]), &BinPoly::zero()).unwrap(), p(&[0, 1, 3]));
        assert_eq!(gcd(&BinPoly::zero(), &BinPoly::zero()), Err(Error::GcdOfZeros));
        let f = p(&[0, 1, 3]);
        assert_eq!(gcd(&f, &BinPoly::xn_plus_one(7)).unwrap(), f);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(formal_derivative(&p(&[0, 1, 6])), BinPoly::one());
        assert_eq!(formal_derivative(&p(&[0, 2, 4])), BinPoly::zero());
        assert_eq!(formal_derivative(&p(&[0, 1, 3])), p(&[0, 2]));
    }

    #[test]
    fn factorize_7() {
        let field = build_field(3, None).unwrap();
        let fs = factorize_xn_plus_1(7, &field).unwrap();
        let mut got: Vec<BinPoly> = fs.factors().to_vec();
        got.sort_by_key(|f| (f.degree(), f.low_u64()));
        assert_eq!(got, vec![p(&[0, 1]), p(&[0, 1, 3]), p(&[0, 2, 3])]);
    }

    #[test]
    fn factorize_63_degrees() {
        let field = build_field(6, None).unwrap();
        let fs = factorize_xn_plus_1(63, &field).unwrap();
        assert_eq!(fs.len(), 13);
        let mut degs: Vec<usize> = fs.factors().iter().map(|f| f.degree().unwrap()).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 2, 3, 3, 6, 6, 6, 6, 6, 6, 6, 6, 6]);
        assert_eq!(degs.iter().sum::<usize>(), 63);
    }

    #[test]
    fn factors_are_irreducible() {
        for n in [7usize, 9, 15, 21, 31, 63, 73] {
            let field = build_field(splitting_degree(n).unwrap(), None).unwrap();
            let fs = factorize_xn_plus_1(n, &field).unwrap();
            for (f, c) in fs.factors().iter().zip(fs.cosets()) {
                let d = f.degree().unwrap();
                assert_eq!(d, c.len());
                // z^(2^e) - z shares a factor with f only if f has a factor of degree dividing e.
                for e in 1..d {
                    let mut t = BinPoly::monomial(1);
                    for _ in 0..e {
                        t = t.mul(&t).rem(f);
                    }
                    let g = gcd(&t.add(&BinPoly::monomial(1)).rem(f), f).unwrap();
                    assert!(g.is_one(), "n={n} factor {f} has a degree-{e} divisor");
                }
            }
        }
    }

    fn arb_poly() -> impl Strategy<Value = BinPoly> {
        proptest::collection::vec(any::<u64>(), 0..3).prop_map(BinPoly::from_words)
    }

    proptest! {
        #[test]
        fn product_rule(a in arb_poly(), b in arb_poly()) {
            let lhs = formal_derivative(&a.mul(&b));
            let rhs = formal_derivative(&a).mul(&b).add(&a.mul(&formal_derivative(&b)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn gcd_divides_both(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!(a.is_zero() && b.is_zero()));
            let g = gcd(&a, &b).unwrap();
            prop_assert!(a.rem(&g).is_zero());
            prop_assert!(b.rem(&g).is_zero());
        }

        #[test]
        fn div_rem_reconstructs(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.degree() < b.degree());
        }
    }
}
