//! Linear codes over prime fields (binary dominant): spanning, duality,
//! weight distribution by full codeword enumeration, and the code
//! predicates used throughout (self-orthogonal, doubly even, projective,
//! two-weight) plus the Rains bound and the embedded optimality table.
//!
//! Codes are held as canonical reduced-row-echelon generator matrices
//! with sorted pivot columns, so code equality is matrix equality.

use std::collections::HashSet;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Serialize;

use crate::bits::{dot2, weight, words_for, xor_into, BitMatrix};
use crate::design::IncidenceStructure;
use crate::error::Error;
use crate::exec::{chunk_ranges, map_ranges, Execution};
use crate::Result;

pub const SUPPORTED_PRIMES: [u8; 4] = [2, 3, 5, 7];

/// Default guard on the enumeration dimension: `analyze` walks all p^k
/// codewords.
pub const DEFAULT_MAX_ENUM_DIM: usize = 28;

/// A linear code over GF(p), stored as a canonical RREF generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFieldCode {
    p: u8,
    n: usize,
    gen: Vec<Vec<u8>>,
}

fn check_prime(p: u8) -> Result<()> {
    if SUPPORTED_PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(Error::UnsupportedPrime(p))
    }
}

/// RREF over GF(p) for odd p, in place. Returns pivot columns.
fn rref_mod_p(rows: &mut Vec<Vec<u8>>, n: usize, p: u8) -> Vec<usize> {
    let pi = p as u16;
    let inv = |a: u8| (1..p).find(|&b| (a as u16 * b as u16) % pi == 1).unwrap();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..n {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let scale = inv(rows[rank][c]) as u16;
        for x in rows[rank].iter_mut() {
            *x = ((*x as u16 * scale) % pi) as u8;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let factor = rows[r][c] as u16;
                for j in 0..n {
                    let sub = (factor * rows[rank][j] as u16) % pi;
                    rows[r][j] = ((rows[r][j] as u16 + pi - sub) % pi) as u8;
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

impl PrimeFieldCode {
    /// Span of integer rows over GF(p); entries are reduced mod p first.
    pub fn span(rows: &[Vec<i64>], n: usize, p: u8) -> Result<PrimeFieldCode> {
        check_prime(p)?;
        for row in rows {
            if row.len() != n {
                return Err(Error::UnsupportedParameter(format!(
                    "row of length {} in a span of length {n}",
                    row.len()
                )));
            }
        }
        if p == 2 {
            let mut m = BitMatrix::zero(rows.len(), n);
            for (ri, row) in rows.iter().enumerate() {
                for (ci, &x) in row.iter().enumerate() {
                    if x.rem_euclid(2) == 1 {
                        m.set(ri, ci, true);
                    }
                }
            }
            let pivots = m.rref();
            let k = pivots.len();
            let gen = (0..k)
                .map(|r| (0..n).map(|c| m.get(r, c) as u8).collect())
                .collect();
            Ok(PrimeFieldCode { p, n, gen })
        } else {
            let mut m: Vec<Vec<u8>> = rows
                .iter()
                .map(|row| row.iter().map(|&x| x.rem_euclid(p as i64) as u8).collect())
                .collect();
            rref_mod_p(&mut m, n, p);
            Ok(PrimeFieldCode { p, n, gen: m })
        }
    }

    /// Span of the rows of a packed 0/1 matrix over GF(2).
    pub fn span_binary(m: &BitMatrix) -> PrimeFieldCode {
        let mut m = m.clone();
        let pivots = m.rref();
        let n = m.cols();
        let gen = (0..pivots.len())
            .map(|r| (0..n).map(|c| m.get(r, c) as u8).collect())
            .collect();
        PrimeFieldCode { p: 2, n, gen }
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.gen.len()
    }

    pub fn generator(&self) -> &[Vec<u8>] {
        &self.gen
    }

    /// Generator rows packed into u64 words (p = 2 only).
    pub fn packed_rows(&self) -> Vec<Vec<u64>> {
        assert_eq!(self.p, 2);
        let w = words_for(self.n);
        self.gen
            .iter()
            .map(|row| {
                let mut packed = vec![0u64; w];
                for (c, &x) in row.iter().enumerate() {
                    if x == 1 {
                        packed[c / 64] |= 1 << (c % 64);
                    }
                }
                packed
            })
            .collect()
    }

    /// C is self-orthogonal iff G * G^T = 0 over GF(p).
    pub fn is_self_orthogonal(&self) -> bool {
        if self.p == 2 {
            let rows = self.packed_rows();
            for i in 0..rows.len() {
                for j in i..rows.len() {
                    if dot2(&rows[i], &rows[j]) {
                        return false;
                    }
                }
            }
            true
        } else {
            let p = self.p as u64;
            for i in 0..self.gen.len() {
                for j in i..self.gen.len() {
                    let dot: u64 = self.gen[i]
                        .iter()
                        .zip(&self.gen[j])
                        .map(|(&a, &b)| a as u64 * b as u64)
                        .sum();
                    if dot % p != 0 {
                        return false;
                    }
                }
            }
            true
        }
    }

    /// Sufficient doubly-even test without enumeration: self-orthogonal
    /// with every generator row weight divisible by four.
    pub fn doubly_even_by_generators(&self) -> bool {
        self.p == 2
            && self.is_self_orthogonal()
            && self
                .gen
                .iter()
                .map(|row| row.iter().filter(|&&x| x == 1).count())
                .all(|w| w % 4 == 0)
    }

    /// The dual code under the standard inner product; dimension n - k.
    pub fn dual(&self) -> PrimeFieldCode {
        let pivots: Vec<usize> = {
            // pivot columns of a canonical RREF: first nonzero in each row
            self.gen
                .iter()
                .map(|row| row.iter().position(|&x| x != 0).unwrap())
                .collect()
        };
        let pivot_set: HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.n).filter(|c| !pivot_set.contains(c)).collect();
        let p = self.p as i64;
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut w = vec![0i64; self.n];
            w[f] = 1;
            for (row, &pc) in self.gen.iter().zip(&pivots) {
                w[pc] = (-(row[f] as i64)).rem_euclid(p);
            }
            basis.push(w);
        }
        PrimeFieldCode::span(&basis, self.n, self.p).expect("kernel basis spans the dual")
    }

    /// True when the dual minimum distance is at least 3: no zero column
    /// and no two linearly dependent columns in the generator matrix.
    pub fn is_projective(&self) -> bool {
        if self.k() == 0 {
            return false;
        }
        let p = self.p as u16;
        let inv = |a: u8| (1..self.p).find(|&b| (a as u16 * b as u16) % p == 1).unwrap();
        let mut seen = HashSet::with_capacity(self.n);
        for c in 0..self.n {
            let mut col: Vec<u8> = self.gen.iter().map(|row| row[c]).collect();
            let Some(first) = col.iter().position(|&x| x != 0) else {
                return false; // zero column: dual distance 1
            };
            let scale = inv(col[first]) as u16;
            for x in col.iter_mut() {
                *x = ((*x as u16 * scale) % p) as u8;
            }
            if !seen.insert(col) {
                return false; // dependent columns: dual distance 2
            }
        }
        true
    }
}

/// Exact weight distribution by enumeration of all p^k codewords,
/// chunked over the message space. Entries with zero count are omitted;
/// weights ascend.
pub fn weight_distribution_exec(
    c: &PrimeFieldCode,
    max_enum_dim: usize,
    mode: Execution,
) -> Result<Vec<(u32, u64)>> {
    let k = c.k();
    if k > max_enum_dim {
        return Err(Error::DimensionGuard {
            k,
            guard: max_enum_dim,
        });
    }
    let counts = if c.p == 2 {
        binary_weight_counts(c, mode)
    } else {
        odd_weight_counts(c, mode)
    };
    Ok(counts
        .into_iter()
        .enumerate()
        .filter(|&(_, cnt)| cnt > 0)
        .map(|(w, cnt)| (w as u32, cnt))
        .collect())
}

pub fn weight_distribution(c: &PrimeFieldCode, max_enum_dim: usize) -> Result<Vec<(u32, u64)>> {
    weight_distribution_exec(c, max_enum_dim, Execution::default())
}

/// Gray-code sweep: the codeword at step i is G * gray(i), and
/// consecutive steps differ in exactly one generator row.
fn binary_weight_counts(c: &PrimeFieldCode, mode: Execution) -> Vec<u64> {
    let k = c.k();
    let n = c.n;
    let rows = c.packed_rows();
    let total = 1usize << k;
    let encode = |m: usize| {
        let mut cw = vec![0u64; words_for(n)];
        for (j, row) in rows.iter().enumerate() {
            if m >> j & 1 == 1 {
                xor_into(&mut cw, row);
            }
        }
        cw
    };
    let ranges = chunk_ranges(total, 1 << 16);
    let partials = map_ranges(mode, ranges, |range| {
        let mut counts = vec![0u64; n + 1];
        let mut cw = encode(range.start ^ (range.start >> 1));
        counts[weight(&cw)] += 1;
        for i in range.start + 1..range.end {
            xor_into(&mut cw, &rows[i.trailing_zeros() as usize]);
            counts[weight(&cw)] += 1;
        }
        counts
    });
    let mut counts = vec![0u64; n + 1];
    for partial in partials {
        for (acc, x) in counts.iter_mut().zip(partial) {
            *acc += x;
        }
    }
    counts
}

/// Odometer sweep over p^k messages for odd p: every digit that changes
/// between consecutive messages contributes its generator row once
/// (a roll-over from p-1 to 0 is -(p-1) = +1 mod p).
fn odd_weight_counts(c: &PrimeFieldCode, mode: Execution) -> Vec<u64> {
    let k = c.k();
    let n = c.n;
    let p = c.p;
    let total = (p as usize).pow(k as u32);
    let add_row = |cw: &mut [u8], row: &[u8]| {
        for (x, &r) in cw.iter_mut().zip(row) {
            *x = (*x + r) % p;
        }
    };
    let encode = |m: usize| {
        let mut cw = vec![0u8; n];
        let mut rest = m;
        for row in &c.gen {
            let digit = rest % p as usize;
            rest /= p as usize;
            for _ in 0..digit {
                add_row(&mut cw, row);
            }
        }
        cw
    };
    let digits_of = |m: usize| {
        let mut d = vec![0u8; k];
        let mut rest = m;
        for slot in d.iter_mut() {
            *slot = (rest % p as usize) as u8;
            rest /= p as usize;
        }
        d
    };
    let ranges = chunk_ranges(total, 1 << 14);
    let partials = map_ranges(mode, ranges, |range| {
        let mut counts = vec![0u64; n + 1];
        let mut cw = encode(range.start);
        let mut digits = digits_of(range.start);
        counts[cw.iter().filter(|&&x| x != 0).count()] += 1;
        for _ in range.start + 1..range.end {
            for (pos, digit) in digits.iter_mut().enumerate() {
                add_row(&mut cw, &c.gen[pos]);
                *digit += 1;
                if *digit == p {
                    *digit = 0;
                } else {
                    break;
                }
            }
            counts[cw.iter().filter(|&&x| x != 0).count()] += 1;
        }
        counts
    });
    let mut counts = vec![0u64; n + 1];
    for partial in partials {
        for (acc, x) in counts.iter_mut().zip(partial) {
            *acc += x;
        }
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimality {
    Optimal,
    NotOptimal,
    Unknown,
}

/// Lookup against the embedded table of known classifications; anything
/// absent is `Unknown`.
pub fn optimality_check(n: usize, k: usize, d: usize) -> Optimality {
    // (64,13,24) meets the best known minimum distance for its length
    // and dimension.
    const TABLE: [(usize, usize, usize, Optimality); 7] = [
        (32, 5, 16, Optimality::Optimal),
        (32, 4, 16, Optimality::Optimal),
        (28, 6, 12, Optimality::Optimal),
        (28, 5, 12, Optimality::NotOptimal),
        (24, 4, 12, Optimality::Optimal),
        (24, 3, 12, Optimality::NotOptimal),
        (64, 13, 24, Optimality::Optimal),
    ];
    TABLE
        .iter()
        .find(|&&(tn, tk, td, _)| (tn, tk, td) == (n, k, d))
        .map(|&(_, _, _, o)| o)
        .unwrap_or(Optimality::Unknown)
}

/// Upper bound on the minimum weight of a self-dual code of length n:
/// 4*floor(n/24) + 4, or + 6 when n = 22 mod 24.
pub fn rains_bound(n: usize) -> usize {
    if n % 24 == 22 {
        4 * (n / 24) + 6
    } else {
        4 * (n / 24) + 4
    }
}

/// Full analysis of a code: exact distance and weight distribution plus
/// the predicate flags. The doubly/singly-even flags are binary-only and
/// reported as absent for odd p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub length: usize,
    pub dimension: usize,
    pub min_distance: usize,
    pub weight_distribution: Vec<(u32, u64)>,
    pub self_orthogonal: bool,
    pub doubly_even: Option<bool>,
    pub singly_even: Option<bool>,
    pub projective: bool,
    pub two_weight: bool,
    pub weights: Option<(u32, u32)>,
    pub optimality: Optimality,
}

pub fn analyze(c: &PrimeFieldCode, max_enum_dim: usize) -> Result<CodeReport> {
    analyze_exec(c, max_enum_dim, Execution::default())
}

pub fn analyze_exec(
    c: &PrimeFieldCode,
    max_enum_dim: usize,
    mode: Execution,
) -> Result<CodeReport> {
    let dist = weight_distribution_exec(c, max_enum_dim, mode)?;
    let nonzero: Vec<u32> = dist.iter().map(|&(w, _)| w).filter(|&w| w != 0).collect();
    let min_distance = nonzero.first().copied().unwrap_or(0) as usize;
    let (doubly_even, singly_even) = if c.p() == 2 {
        let all_div4 = nonzero.iter().all(|&w| w % 4 == 0);
        let all_even = nonzero.iter().all(|&w| w % 2 == 0);
        (
            Some(all_div4),
            Some(all_even && nonzero.iter().any(|&w| w % 4 == 2)),
        )
    } else {
        (None, None)
    };
    let two_weight = nonzero.len() == 2;
    Ok(CodeReport {
        length: c.n(),
        dimension: c.k(),
        min_distance,
        self_orthogonal: c.is_self_orthogonal(),
        doubly_even,
        singly_even,
        projective: c.is_projective(),
        two_weight,
        weights: if two_weight {
            Some((nonzero[0], nonzero[1]))
        } else {
            None
        },
        optimality: optimality_check(c.n(), c.k(), min_distance),
        weight_distribution: dist,
    })
}

/// Binary span of the block-by-point incidence matrix, or of its
/// transpose (point-by-block).
pub fn code_from_incidence(inc: &IncidenceStructure, transpose: bool) -> PrimeFieldCode {
    if transpose {
        PrimeFieldCode::span_binary(&inc.point_rows())
    } else {
        PrimeFieldCode::span_binary(inc.incidence())
    }
}

/// Read a `.gen` file: `GEN 1`, `p=<int> n=<int> k=<int>`, then k rows of
/// n digit characters.
pub fn read_gen(path: &Path) -> Result<PrimeFieldCode> {
    let file = std::fs::File::open(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let name = path.display().to_string();
    let parse = |line: usize, msg: String| Error::Parse {
        path: name.clone(),
        line,
        msg,
    };
    let mut lines = Vec::new();
    for line in BufReader::new(file).lines() {
        lines.push(line.map_err(|e| Error::Io {
            path: name.clone(),
            source: e,
        })?);
    }
    if lines.is_empty() || lines[0].trim() != "GEN 1" {
        return Err(parse(1, "expected 'GEN 1'".into()));
    }
    let mut p = None;
    let mut n = None;
    let mut k = None;
    for field in lines
        .get(1)
        .ok_or_else(|| parse(2, "missing header".into()))?
        .split_whitespace()
    {
        let (key, val) = field
            .split_once('=')
            .ok_or_else(|| parse(2, format!("bad header field '{field}'")))?;
        let val: usize = val
            .parse()
            .map_err(|_| parse(2, format!("bad integer '{val}'")))?;
        match key {
            "p" => p = Some(val as u8),
            "n" => n = Some(val),
            "k" => k = Some(val),
            _ => return Err(parse(2, format!("unknown header key '{key}'"))),
        }
    }
    let (p, n, k) = match (p, n, k) {
        (Some(p), Some(n), Some(k)) => (p, n, k),
        _ => return Err(parse(2, "header must set p=, n= and k=".into())),
    };
    check_prime(p)?;
    let mut rows = Vec::with_capacity(k);
    for (idx, line) in lines.iter().enumerate().skip(2) {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.len() != n {
            return Err(parse(idx + 1, format!("row has {} digits, expected {n}", line.len())));
        }
        let row: Vec<i64> = line
            .chars()
            .map(|ch| {
                ch.to_digit(10)
                    .filter(|&d| d < p as u32)
                    .map(|d| d as i64)
                    .ok_or_else(|| parse(idx + 1, format!("bad digit '{ch}' for p={p}")))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    if rows.len() != k {
        return Err(parse(
            0,
            format!("header promises k={k} rows, found {}", rows.len()),
        ));
    }
    PrimeFieldCode::span(&rows, n, p)
}

pub fn write_gen(c: &PrimeFieldCode, path: &Path) -> Result<()> {
    let mut out = format!("GEN 1\np={} n={} k={}\n", c.p(), c.n(), c.k());
    for row in c.generator() {
        for &x in row {
            out.push(char::from_digit(x as u32, 10).unwrap());
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(rows: &[&[i64]], n: usize, p: u8) -> PrimeFieldCode {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        PrimeFieldCode::span(&rows, n, p).unwrap()
    }

    #[test]
    fn span_rank_cases() {
        let zero = code(&[&[0, 0, 0], &[0, 0, 0]], 3, 2);
        assert_eq!(zero.k(), 0);
        let id4 = code(
            &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]],
            4,
            2,
        );
        assert_eq!(id4.k(), 4);
        // entries reduced mod p before elimination
        let reduced = code(&[&[2, 4, 6], &[-1, 1, 3]], 3, 2);
        assert_eq!(reduced.k(), 1);
        assert_eq!(reduced.generator()[0], vec![1, 1, 1]);
    }

    #[test]
    fn dual_of_full_space_is_zero() {
        let full = code(&[&[1, 0], &[0, 1]], 2, 2);
        assert_eq!(full.dual().k(), 0);
        let z = code(&[], 2, 2);
        assert_eq!(z.dual().k(), 2);
    }

    #[test]
    fn dual_dual_is_identity() {
        let c = code(&[&[1, 1, 0, 1, 0, 0], &[0, 1, 1, 0, 1, 0], &[1, 0, 1, 0, 0, 1]], 6, 2);
        assert_eq!(c.dual().dual(), c);
        let c3 = code(&[&[1, 2, 0, 1], &[0, 1, 1, 2]], 4, 3);
        assert_eq!(c3.dual().dual(), c3);
        assert_eq!(c3.dual().k(), 2);
    }

    #[test]
    fn dual_orthogonality() {
        let c = code(&[&[1, 1, 1, 1, 0, 0], &[0, 0, 1, 1, 1, 1]], 6, 2);
        let d = c.dual();
        assert_eq!(d.k(), 4);
        for g in c.generator() {
            for h in d.generator() {
                let dot: u32 = g.iter().zip(h).map(|(&a, &b)| (a & b) as u32).sum();
                assert_eq!(dot % 2, 0);
            }
        }
    }

    #[test]
    fn repetition_code_flags() {
        let rep = code(&[&[1, 1]], 2, 2);
        let report = analyze(&rep, DEFAULT_MAX_ENUM_DIM).unwrap();
        assert_eq!(report.weight_distribution, vec![(0, 1), (2, 1)]);
        assert!(report.self_orthogonal);
        assert_eq!(report.doubly_even, Some(false));
        assert_eq!(report.singly_even, Some(true));
        assert_eq!(report.min_distance, 2);
    }

    #[test]
    fn odd_prime_distribution_matches_brute_force() {
        // ternary tetracode-ish [4,2] code
        let c = code(&[&[1, 0, 1, 1], &[0, 1, 1, 2]], 4, 3);
        let dist = weight_distribution(&c, 10).unwrap();
        let total: u64 = dist.iter().map(|&(_, cnt)| cnt).sum();
        assert_eq!(total, 9);
        // brute force by direct message encoding
        let mut counts = std::collections::BTreeMap::new();
        for a in 0u16..3 {
            for b in 0u16..3 {
                let cw: Vec<u16> = (0..4)
                    .map(|j| (a * c.generator()[0][j] as u16 + b * c.generator()[1][j] as u16) % 3)
                    .collect();
                *counts.entry(cw.iter().filter(|&&x| x != 0).count() as u32).or_insert(0u64) += 1;
            }
        }
        let expected: Vec<(u32, u64)> = counts.into_iter().collect();
        assert_eq!(dist, expected);
        assert_eq!(report_no_evenness(&c), (None, None));
    }

    fn report_no_evenness(c: &PrimeFieldCode) -> (Option<bool>, Option<bool>) {
        let r = analyze(c, 10).unwrap();
        (r.doubly_even, r.singly_even)
    }

    #[test]
    fn rains_values() {
        assert_eq!(rains_bound(64), 12);
        assert_eq!(rains_bound(22), 6);
        assert_eq!(rains_bound(24), 8);
    }

    #[test]
    fn optimality_table() {
        assert_eq!(optimality_check(32, 5, 16), Optimality::Optimal);
        assert_eq!(optimality_check(28, 5, 12), Optimality::NotOptimal);
        assert_eq!(optimality_check(40, 10, 9), Optimality::Unknown);
        assert_eq!(optimality_check(64, 13, 24), Optimality::Optimal);
    }

    #[test]
    fn guard_blocks_large_enumeration() {
        let c = code(
            &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]],
            4,
            2,
        );
        assert!(matches!(
            weight_distribution(&c, 3),
            Err(Error::DimensionGuard { k: 4, guard: 3 })
        ));
        assert!(weight_distribution(&c, 4).is_ok());
    }

    #[test]
    fn projective_detection() {
        // distinct nonzero columns
        let proj = code(&[&[1, 0, 1], &[0, 1, 1]], 3, 2);
        assert!(proj.is_projective());
        // duplicated column
        let dup = code(&[&[1, 1, 0, 0], &[0, 0, 1, 1]], 4, 2);
        assert!(!dup.is_projective());
        // zero column
        let zc = code(&[&[1, 0, 0], &[0, 1, 0]], 3, 2);
        assert!(!zc.is_projective());
    }

    #[test]
    fn gen_io_roundtrip() {
        let dir = std::env::temp_dir().join("qsc-f2code-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.gen");
        let c = code(&[&[1, 0, 1, 1, 0], &[0, 1, 1, 0, 1]], 5, 2);
        write_gen(&c, &path).unwrap();
        assert_eq!(read_gen(&path).unwrap(), c);

        let bad = dir.join("bad.gen");
        std::fs::write(&bad, "GEN 1\np=2 n=3 k=1\n012\n").unwrap();
        assert!(matches!(read_gen(&bad), Err(Error::Parse { .. })));
    }

    #[test]
    fn doubly_even_by_generators_agrees() {
        // extended Hamming [8,4,4]: doubly even self-dual
        let c = code(
            &[
                &[1, 0, 0, 0, 0, 1, 1, 1],
                &[0, 1, 0, 0, 1, 0, 1, 1],
                &[0, 0, 1, 0, 1, 1, 0, 1],
                &[0, 0, 0, 1, 1, 1, 1, 0],
            ],
            8,
            2,
        );
        assert!(c.doubly_even_by_generators());
        let r = analyze(&c, 10).unwrap();
        assert_eq!(r.doubly_even, Some(true));
        assert_eq!(r.min_distance, 4);
    }
}
