//! Cyclic LDPC code construction from sums of primitive idempotents.
//!
//! A set of cyclotomic cosets `I` selects factors `f_i` of `1+z^n`. Their
//! primitive idempotents sum to `theta`, whose transform is the binary
//! idempotent `u(x)` with `u_i = theta(beta^i)`, i.e. `u_i = 1` exactly when
//! `beta^i` is a root of `prod_{i in I} f_i`. The parity-check matrix is the
//! n cyclic shifts of `x^n u(x^-1)`; `h = gcd(u, 1+x^n)` has degree k.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::galois::{build_field, splitting_degree, FieldTable};
use crate::msdomain::{ms_inverse, primitive_idempotent, Idempotent};
use crate::polyring::{factorize_xn_plus_1, gcd, BinPoly, FactorSet};

/// Largest information length for which `build_code` enumerates codewords to find d_min.
pub const BRUTE_FORCE_MAX_K: usize = 22;

/// Largest total factor degree `search_orthogonal` accepts.
pub const SEARCH_MAX_WEIGHT: usize = 20;

/// Result of the pairwise-difference test on the support of `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub orthogonal: bool,
    /// A difference `d` realised by two distinct ordered pairs of support positions.
    pub collision: Option<Collision>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Collision {
    pub difference: usize,
    pub first: (usize, usize),
    pub second: (usize, usize),
}

/// Checks that all differences `s - t mod n` (s != t in the support) are distinct,
/// which is the same as any two rows of the circulant parity-check matrix sharing
/// at most one position.
pub fn check_orthogonality(u: &BinPoly, n: usize) -> OrthogonalityReport {
    support_orthogonality(&u.reduce_cyclic(n).support(), n)
}

fn support_orthogonality(support: &[usize], n: usize) -> OrthogonalityReport {
    let mut seen: Vec<Option<(usize, usize)>> = vec![None; n];
    for &s in support {
        for &t in support {
            if s == t {
                continue;
            }
            let d = (s + n - t) % n;
            if let Some(first) = seen[d] {
                return OrthogonalityReport {
                    orthogonal: false,
                    collision: Some(Collision {
                        difference: d,
                        first,
                        second: (s, t),
                    }),
                };
            }
            seen[d] = Some((s, t));
        }
    }
    OrthogonalityReport {
        orthogonal: true,
        collision: None,
    }
}

/// An (n, k) binary cyclic code described by its idempotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    pub n: usize,
    pub k: usize,
    /// Selected cosets, by representative, ascending.
    pub coset_reps: Vec<usize>,
    pub u: Idempotent,
    /// Parity-check polynomial, degree k.
    pub h: BinPoly,
    /// Generator polynomial, degree n - k.
    pub g: BinPoly,
    pub row_weight: usize,
    /// `None` when the code is not orthogonal and too large to enumerate.
    pub d_min: Option<usize>,
    pub orthogonal: bool,
}

/// Precomputed field and factorization for one code length.
#[derive(Debug, Clone)]
pub struct CodeBuilder {
    n: usize,
    field: FieldTable,
    factors: FactorSet,
}

impl CodeBuilder {
    pub fn new(n: usize) -> Result<Self> {
        let m = splitting_degree(n)?;
        let field = build_field(m, None)?;
        let factors = factorize_xn_plus_1(n, &field)?;
        Ok(Self { n, field, factors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    pub fn factors(&self) -> &FactorSet {
        &self.factors
    }

    fn indices(&self, coset_reps: &[usize]) -> Result<Vec<usize>> {
        if coset_reps.is_empty() {
            return Err(Error::EmptyCosetSet);
        }
        let mut idx = coset_reps
            .iter()
            .map(|&r| self.factors.index_of_rep(r).ok_or(Error::UnknownCoset(r)))
            .collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }

    pub fn build(&self, coset_reps: &[usize]) -> Result<CodeSpec> {
        let n = self.n;
        let idx = self.indices(coset_reps)?;

        let mut theta = BinPoly::zero();
        for &i in &idx {
            theta.add_assign(primitive_idempotent(&self.factors.factors()[i], n)?.poly());
        }
        let u = ms_inverse(&theta, n, &self.field)?;

        let expected = BinPoly::from_exponents(
            idx.iter()
                .flat_map(|&i| self.factors.cosets()[i].members().iter().copied()),
        );
        if u != expected {
            return Err(Error::Internal(format!(
                "u = {u} is not supported on the selected cosets"
            )));
        }

        let xn1 = BinPoly::xn_plus_one(n);
        let h = gcd(&u, &xn1)?;
        let (g, rem) = xn1.div_rem(&h);
        if !rem.is_zero() {
            return Err(Error::Internal("h does not divide 1+x^n".into()));
        }
        let k = h.degree().unwrap_or(0);
        let row_weight = u.weight();
        let orthogonal = check_orthogonality(&u, n).orthogonal;

        let mut spec = CodeSpec {
            n,
            k,
            coset_reps: idx
                .iter()
                .map(|&i| self.factors.cosets()[i].representative())
                .collect(),
            u: Idempotent::new(u, n)?,
            h,
            g,
            row_weight,
            d_min: None,
            orthogonal,
        };
        spec.d_min = if orthogonal {
            Some(row_weight + 1)
        } else if k <= BRUTE_FORCE_MAX_K {
            brute_force_dmin(&spec)
        } else {
            None
        };
        Ok(spec)
    }

    /// Every coset subset of total degree at most `max_weight` whose `u` is orthogonal,
    /// in lexicographic order of coset index.
    pub fn search_orthogonal(&self, max_weight: usize) -> Result<Vec<(Vec<usize>, CodeSpec)>> {
        if max_weight > SEARCH_MAX_WEIGHT {
            return Err(Error::InvalidParameter(format!(
                "search weight {max_weight} exceeds {SEARCH_MAX_WEIGHT}"
            )));
        }
        let mut hits = Vec::new();
        let mut chosen = Vec::new();
        let mut support = Vec::new();
        self.search_from(0, max_weight, &mut chosen, &mut support, &mut hits)?;
        Ok(hits)
    }

    fn search_from(
        &self,
        start: usize,
        budget: usize,
        chosen: &mut Vec<usize>,
        support: &mut Vec<usize>,
        hits: &mut Vec<(Vec<usize>, CodeSpec)>,
    ) -> Result<()> {
        let cosets = self.factors.cosets();
        for (i, c) in cosets.iter().enumerate().skip(start) {
            if c.len() > budget {
                continue;
            }
            let mark = support.len();
            support.extend_from_slice(c.members());
            // Supersets of a non-orthogonal support stay non-orthogonal.
            if support_orthogonality(support, self.n).orthogonal {
                chosen.push(c.representative());
                let spec = self.build(chosen)?;
                hits.push((chosen.clone(), spec));
                self.search_from(i + 1, budget - c.len(), chosen, support, hits)?;
                chosen.pop();
            }
            support.truncate(mark);
        }
        Ok(())
    }
}

/// Build the code selected by `coset_reps` (cosets of 2 mod n, by smallest member).
pub fn build_code(n: usize, coset_reps: &[usize]) -> Result<CodeSpec> {
    CodeBuilder::new(n)?.build(coset_reps)
}

pub fn search_orthogonal(n: usize, max_weight: usize) -> Result<Vec<(Vec<usize>, CodeSpec)>> {
    CodeBuilder::new(n)?.search_orthogonal(max_weight)
}

impl CodeSpec {
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Catalog-style name such as `63_37`.
    pub fn name(&self) -> String {
        format!("{}_{}", self.n, self.k)
    }

    /// Non-systematic encoding `c(x) = m(x) g(x)`; `message` holds k bits (0/1).
    pub fn encode(&self, message: &[u8]) -> Vec<u8> {
        assert_eq!(message.len(), self.k, "message length must equal k");
        let m = BinPoly::from_exponents(
            message
                .iter()
                .enumerate()
                .filter(|(_, &b)| b != 0)
                .map(|(i, _)| i),
        );
        let c = m.mul(&self.g);
        (0..self.n).map(|i| c.coeff(i) as u8).collect()
    }

    pub fn parity_matrix(&self) -> SparseParityMatrix {
        build_parity_matrix(self)
    }

    /// Plain-text form: `n=`, `k=`, `cosets=`, `u=` (hex, bit i = coefficient of x^i), `dmin=`.
    pub fn to_text(&self) -> String {
        let reps: Vec<String> = self.coset_reps.iter().map(|r| r.to_string()).collect();
        let mut s = String::new();
        let _ = writeln!(s, "n={}", self.n);
        let _ = writeln!(s, "k={}", self.k);
        let _ = writeln!(s, "cosets={}", reps.join(","));
        let _ = writeln!(s, "u={}", poly_to_hex(self.u.poly()));
        let _ = writeln!(
            s,
            "dmin={}",
            self.d_min.map_or("unknown".to_string(), |d| d.to_string())
        );
        s
    }

    /// Parse the text form and rebuild the code, verifying every stored field.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut n = None;
        let mut k = None;
        let mut cosets = None;
        let mut u = None;
        let mut dmin = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{line}`")))?;
            let value = value.trim();
            match key.trim() {
                "n" => n = Some(parse_usize(value)?),
                "k" => k = Some(parse_usize(value)?),
                "cosets" => {
                    cosets = Some(
                        value
                            .split(',')
                            .map(|s| parse_usize(s.trim()))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                "u" => u = Some(poly_from_hex(value)?),
                "dmin" => {
                    dmin = Some(if value == "unknown" {
                        None
                    } else {
                        Some(parse_usize(value)?)
                    })
                }
                other => return Err(Error::Parse(format!("unknown key `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing n".into()))?;
        let cosets = cosets.ok_or_else(|| Error::Parse("missing cosets".into()))?;
        let spec = build_code(n, &cosets)?;
        if let Some(k) = k {
            if k != spec.k {
                return Err(Error::Parse(format!("stored k={k}, rebuilt k={}", spec.k)));
            }
        }
        if let Some(u) = u {
            if &u != spec.u.poly() {
                return Err(Error::Parse("stored u does not match the cosets".into()));
            }
        }
        if let Some(d) = dmin {
            if d != spec.d_min {
                return Err(Error::Parse("stored dmin does not match the rebuilt code".into()));
            }
        }
        Ok(spec)
    }
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Parse(format!("`{s}` is not a non-negative integer")))
}

pub fn poly_to_hex(p: &BinPoly) -> String {
    let words = p.words();
    if words.is_empty() {
        return "0".into();
    }
    let mut s = format!("{:x}", words[words.len() - 1]);
    for w in words.iter().rev().skip(1) {
        let _ = write!(s, "{w:016x}");
    }
    s
}

pub fn poly_from_hex(s: &str) -> Result<BinPoly> {
    let s = s.trim_start_matches("0x");
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(Error::Parse(format!("`{s}` is not a hex bitset")));
    }
    let mut words = Vec::new();
    let bytes = s.as_bytes();
    let mut end = bytes.len();
    while end > 0 {
        let start = end.saturating_sub(16);
        let chunk = std::str::from_utf8(&bytes[start..end]).expect("ascii");
        words.push(u64::from_str_radix(chunk, 16).expect("validated hex"));
        end = start;
    }
    Ok(BinPoly::from_words(words))
}

/// Minimum nonzero codeword weight by Gray-code enumeration of all 2^k messages.
pub fn brute_force_dmin(spec: &CodeSpec) -> Option<usize> {
    let k = spec.k;
    if k == 0 {
        return None;
    }
    let words = spec.n.div_ceil(64);
    let basis: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            let mut w = spec.g.shl(i).words().to_vec();
            w.resize(words, 0);
            w
        })
        .collect();
    let mut cur = vec![0u64; words];
    let mut best = usize::MAX;
    for step in 1u64..(1u64 << k) {
        let bit = step.trailing_zeros() as usize;
        for (c, b) in cur.iter_mut().zip(&basis[bit]) {
            *c ^= b;
        }
        let w: usize = cur.iter().map(|x| x.count_ones() as usize).sum();
        best = best.min(w);
    }
    Some(best)
}

/// n circulant parity checks, row r = `{ (r - s) mod n : s in supp(u) }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseParityMatrix {
    pub n: usize,
    pub rows: Vec<Vec<usize>>,
    pub row_weight: usize,
}

pub fn build_parity_matrix(spec: &CodeSpec) -> SparseParityMatrix {
    let n = spec.n;
    let support = spec.u.poly().support();
    let rows = (0..n)
        .map(|r| {
            let mut row: Vec<usize> = support.iter().map(|&s| (r + n - s) % n).collect();
            row.sort_unstable();
            row
        })
        .collect();
    SparseParityMatrix {
        n,
        rows,
        row_weight: support.len(),
    }
}

impl SparseParityMatrix {
    pub fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Self {
        let row_weight = rows.first().map_or(0, Vec::len);
        Self { n, rows, row_weight }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn row_check(row: &[usize], bits: &[u8]) -> bool {
        row.iter().fold(0u8, |acc, &j| acc ^ bits[j]) == 0
    }

    /// True when every row has even parity over `bits`.
    pub fn syndrome_is_zero(&self, bits: &[u8]) -> bool {
        self.rows.iter().all(|r| Self::row_check(r, bits))
    }

    pub fn syndrome(&self, bits: &[u8]) -> Vec<u8> {
        self.rows
            .iter()
            .map(|r| r.iter().fold(0u8, |acc, &j| acc ^ bits[j]))
            .collect()
    }

    /// Rows containing each column.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.n];
        for (r, row) in self.rows.iter().enumerate() {
            for &j in row {
                cols[j].push(r);
            }
        }
        cols
    }

    /// Largest number of positions shared by two distinct rows; at most 1 means no 4-cycles.
    pub fn max_row_overlap(&self) -> usize {
        let mut best = 0;
        let mut mark = vec![false; self.n];
        for (i, a) in self.rows.iter().enumerate() {
            for &j in a {
                mark[j] = true;
            }
            for b in &self.rows[i + 1..] {
                best = best.max(b.iter().filter(|&&j| mark[j]).count());
            }
            for &j in a {
                mark[j] = false;
            }
        }
        best
    }

    pub fn rank(&self) -> usize {
        gf2_rank(&self.rows, self.n)
    }
}

/// Rank over GF(2) of rows given as position lists.
pub fn gf2_rank(rows: &[Vec<usize>], n: usize) -> usize {
    let words = n.div_ceil(64);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut w = vec![0u64; words];
            for &j in r {
                w[j / 64] ^= 1 << (j % 64);
            }
            w
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let (wi, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..m.len()).find(|&r| m[r][wi] & bit != 0) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[wi] & bit != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A catalog entry: stored coset subset and the parameters it must reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub n: usize,
    pub k: usize,
    pub d_min: usize,
    pub coset_reps: &'static [usize],
}

impl CatalogEntry {
    pub fn name(&self) -> String {
        format!("{}_{}", self.n, self.k)
    }
}

/// Coset subsets for the built-in codes, found with `search_orthogonal`.
pub const CATALOG: [CatalogEntry; 10] = [
    CatalogEntry {
        n: 21,
        k: 11,
        d_min: 6,
        coset_reps: &[3, 7],
    },
    CatalogEntry {
        n: 63,
        k: 31,
        d_min: 7,
        coset_reps: &[1],
    },
    CatalogEntry {
        n: 63,
        k: 37,
        d_min: 9,
        coset_reps: &[1, 21],
    },
    CatalogEntry {
        n: 73,
        k: 45,
        d_min: 10,
        coset_reps: &[1],
    },
    CatalogEntry {
        n: 93,
        k: 47,
        d_min: 8,
        coset_reps: &[3, 31],
    },
    CatalogEntry {
        n: 105,
        k: 53,
        d_min: 8,
        coset_reps: &[7, 15],
    },
    CatalogEntry {
        n: 255,
        k: 175,
        d_min: 17,
        coset_reps: &[1, 27],
    },
    CatalogEntry {
        n: 341,
        k: 205,
        d_min: 16,
        coset_reps: &[1, 55],
    },
    CatalogEntry {
        n: 511,
        k: 199,
        d_min: 19,
        coset_reps: &[1, 83],
    },
    CatalogEntry {
        n: 511,
        k: 259,
        d_min: 13,
        coset_reps: &[1, 219],
    },
];

/// Build one catalog entry, failing if it no longer reproduces its stored parameters.
pub fn build_catalog_entry(entry: &CatalogEntry) -> Result<CodeSpec> {
    let spec = build_code(entry.n, entry.coset_reps)?;
    if spec.k != entry.k || spec.d_min != Some(entry.d_min) || !spec.orthogonal {
        return Err(Error::Internal(format!(
            "catalog entry ({},{}) rebuilt as ({},{}) d_min {:?} orthogonal {}",
            entry.n, entry.k, spec.n, spec.k, spec.d_min, spec.orthogonal
        )));
    }
    Ok(spec)
}

/// All built-in codes.
pub fn catalog() -> Result<Vec<CodeSpec>> {
    CATALOG.iter().map(build_catalog_entry).collect()
}

/// Look up a catalog code by name (`63_37` or `63,37`).
pub fn catalog_code(name: &str) -> Result<CodeSpec> {
    let norm = name.trim().replace([',', '-'], "_");
    let entry = CATALOG
        .iter()
        .find(|e| e.name() == norm)
        .ok_or_else(|| Error::InvalidParameter(format!("no catalog code named `{name}`")))?;
    build_catalog_entry(entry)
}
