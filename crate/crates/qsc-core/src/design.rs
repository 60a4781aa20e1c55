//! Incidence structures, t-design and quasi-symmetry verification,
//! complements, the Shrikhande-Raghavarao composition and the
//! Blokhuis-Haemers construction.
//!
//! All arithmetic here is exact integer arithmetic.


use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::bits::{and_weight, BitMatrix};
use crate::error::Error;
use crate::exec::{chunk_ranges, map_ranges, Execution};
use crate::galois::{ag3_lines, denniston_arc, point_coords, point_index, quotient_labeling, Gf,
    LineSystem, QuotientLabeling};
use crate::Result;

/// Points, blocks and a packed block-by-point incidence matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceStructure {
    v: usize,
    blocks: Vec<Vec<u32>>,
    incidence: BitMatrix,
}

impl IncidenceStructure {
    /// Build from block point-sets; blocks are sorted and checked for
    /// range and duplicates.
    pub fn new(v: usize, mut blocks: Vec<Vec<u32>>) -> Result<IncidenceStructure> {
        for (bi, block) in blocks.iter_mut().enumerate() {
            block.sort_unstable();
            for w in block.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DuplicatePoint {
                        block: bi,
                        point: w[0] as usize,
                    });
                }
            }
            if let Some(&last) = block.last() {
                if last as usize >= v {
                    return Err(Error::PointOutOfRange {
                        index: last as usize,
                        v,
                    });
                }
            }
        }
        let mut incidence = BitMatrix::zero(blocks.len(), v);
        for (bi, block) in blocks.iter().enumerate() {
            for &p in block {
                incidence.set(bi, p as usize, true);
            }
        }
        Ok(IncidenceStructure {
            v,
            blocks,
            incidence,
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[u32] {
        &self.blocks[i]
    }

    /// Block-by-point packed incidence matrix (row = block).
    pub fn incidence(&self) -> &BitMatrix {
        &self.incidence
    }

    /// Point-by-block packed matrix (row = point).
    pub fn point_rows(&self) -> BitMatrix {
        self.incidence.transpose()
    }

    /// True when two blocks share the same point set.
    pub fn has_repeated_blocks(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.blocks.iter().any(|b| !seen.insert(b.clone()))
    }

    /// Flip every incidence bit.
    pub fn complement(&self) -> IncidenceStructure {
        let blocks = self
            .blocks
            .iter()
            .map(|block| {
                let mut it = block.iter().peekable();
                (0..self.v as u32)
                    .filter(|p| {
                        if it.peek() == Some(&p) {
                            it.next();
                            false
                        } else {
                            true
                        }
                    })
                    .collect()
            })
            .collect();
        IncidenceStructure::new(self.v, blocks).expect("complement of a valid structure is valid")
    }
}

/// Verified parameters of a t-design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct DesignParams {
    pub t: usize,
    pub v: usize,
    pub k: usize,
    pub lambda: u64,
    pub b: usize,
    pub r: u64,
}

/// Check the t-design property (t in {1,2}) by exhaustive counting and
/// return the verified parameters.
pub fn verify_design(inc: &IncidenceStructure, t: usize) -> Result<DesignParams> {
    if t != 1 && t != 2 {
        return Err(Error::UnsupportedParameter(format!(
            "design strength t={t}; supported: 1, 2"
        )));
    }
    if inc.b() == 0 {
        return Err(Error::TooFewBlocks(0, 1));
    }
    let k = inc.block(0).len();
    for (bi, block) in inc.blocks().iter().enumerate() {
        if block.len() != k {
            return Err(Error::BlockSize {
                block: bi,
                expected: k,
                got: block.len(),
            });
        }
    }
    let v = inc.v();
    let points = inc.point_rows();
    let r = points.row_weight(0) as u64;
    for p in 1..v {
        let rp = points.row_weight(p) as u64;
        if rp != r {
            return Err(Error::NotBalanced {
                t: 1,
                subset: vec![p],
                expected: r as usize,
                got: rp as usize,
            });
        }
    }
    let lambda = if t == 1 {
        r
    } else {
        if v < 2 {
            return Err(Error::UnsupportedParameter(
                "2-design verification needs at least two points".into(),
            ));
        }
        let (r0, r1) = points.two_rows(0, 1);
        let lambda = and_weight(r0, r1) as u64;
        // Exhaustive sweep over all point pairs; first violation in
        // (i,j)-lexicographic order is reported.
        let ranges = chunk_ranges(v, 16);
        let results = map_ranges(Execution::default(), ranges, |range| {
            for i in range {
                for j in i + 1..v {
                    let (ri, rj) = points.two_rows(i, j);
                    let l = and_weight(ri, rj) as u64;
                    if l != lambda {
                        return Some((i, j, l));
                    }
                }
            }
            None
        });
        if let Some((i, j, l)) = results.into_iter().flatten().next() {
            return Err(Error::NotBalanced {
                t: 2,
                subset: vec![i, j],
                expected: lambda as usize,
                got: l as usize,
            });
        }
        // replication identity r = lambda (v-1) / (k-1), exactly
        let num = lambda * (v as u64 - 1);
        if k < 2 || num % (k as u64 - 1) != 0 || num / (k as u64 - 1) != r {
            return Err(Error::NonIntegralReplication {
                lhs: num,
                rhs: k as u64 - 1,
            });
        }
        lambda
    };
    debug_assert_eq!(inc.b() as u64 * k as u64, v as u64 * r);
    Ok(DesignParams {
        t,
        v,
        k,
        lambda,
        b: inc.b(),
        r,
    })
}

/// Sorted block intersection numbers and, when there are exactly two,
/// the quasi-symmetric pair (x, y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionProfile {
    pub numbers: Vec<usize>,
    pub qs_pair: Option<(usize, usize)>,
}

pub fn intersection_profile(inc: &IncidenceStructure) -> Result<IntersectionProfile> {
    intersection_profile_exec(inc, Execution::default())
}

/// As [`intersection_profile`] with an explicit execution mode; results
/// are identical in either mode.
pub fn intersection_profile_exec(
    inc: &IncidenceStructure,
    mode: Execution,
) -> Result<IntersectionProfile> {
    let b = inc.b();
    if b < 2 {
        return Err(Error::TooFewBlocks(b, 2));
    }
    let rows = inc.incidence();
    let ranges = chunk_ranges(b, 32);
    let masks = map_ranges(mode, ranges, |range| {
        // intersection sizes are < v <= 512: a bitmask per chunk
        let mut seen = vec![false; inc.v() + 1];
        for i in range {
            for j in i + 1..b {
                let (ri, rj) = rows.two_rows(i, j);
                seen[and_weight(ri, rj)] = true;
            }
        }
        seen
    });
    let mut numbers = Vec::new();
    for s in 0..=inc.v() {
        if masks.iter().any(|m| m[s]) {
            numbers.push(s);
        }
    }
    let qs_pair = match numbers.as_slice() {
        [x, y] => Some((*x, *y)),
        _ => None,
    };
    Ok(IntersectionProfile { numbers, qs_pair })
}

/// Shrikhande-Raghavarao composition: for every parallel class of the
/// line system and every block of `d1`, emit the union of the lines
/// whose labels lie in that block. The 2-design property of the result,
/// with lambda = r1*lambda2 + lambda1*(r2 - lambda2), is verified before
/// returning.
pub fn sr_compose(
    d1: &IncidenceStructure,
    d1_params: &DesignParams,
    lines: &LineSystem,
    labelings: &[QuotientLabeling],
) -> Result<IncidenceStructure> {
    let q = lines.q as usize;
    let v2 = q * q * q;
    let k2 = q;
    if v2 != d1.v() * k2 {
        return Err(Error::ComposeDimension {
            v2,
            expected: d1.v() * k2,
        });
    }
    if labelings.len() != lines.classes.len() {
        return Err(Error::ComposeLabeling(format!(
            "{} labelings for {} parallel classes",
            labelings.len(),
            lines.classes.len()
        )));
    }
    let mut blocks = Vec::with_capacity(d1.b() * lines.classes.len());
    for (class, labeling) in lines.classes.iter().zip(labelings) {
        if labeling.direction != class.direction {
            return Err(Error::ComposeLabeling(format!(
                "labeling direction {:?} does not match class direction {:?}",
                labeling.direction, class.direction
            )));
        }
        // label of a line = common label of its points
        let line_labels: Vec<u32> = class
            .lines
            .iter()
            .map(|line| labeling.label[line[0] as usize])
            .collect();
        for d1_block in d1.blocks() {
            let mut new_block = Vec::with_capacity(d1_block.len() * k2);
            for (line, &label) in class.lines.iter().zip(&line_labels) {
                if d1_block.binary_search(&label).is_ok() {
                    new_block.extend_from_slice(line);
                }
            }
            blocks.push(new_block);
        }
    }
    let composed = IncidenceStructure::new(v2, blocks)?;
    // Theorem parameters, recounted independently by full verification.
    let r2 = lines.classes.len() as u64; // lambda2 = 1 for a line system
    let lambda = d1_params.r * 1 + d1_params.lambda * (r2 - 1);
    let params = verify_design(&composed, 2).map_err(|e| Error::BaseDesign(Box::new(e)))?;
    if params.k != d1_params.k * k2 || params.lambda != lambda {
        return Err(Error::NotBalanced {
            t: 2,
            subset: vec![],
            expected: lambda as usize,
            got: params.lambda as usize,
        });
    }
    Ok(composed)
}

/// The canonical quasi-symmetric design of Blokhuis-Haemers type on q^3
/// points: translates of a Denniston arc composed with the lines of
/// AG(3,q). Quasi-symmetry with intersection numbers q^2(q-2)/4 and
/// q^2(q-1)/4 is verified by full pairwise enumeration before returning.
pub fn blokhuis_haemers(q: u16) -> Result<IncidenceStructure> {
    if q != 4 && q != 8 {
        return Err(Error::UnsupportedParameter(format!(
            "Blokhuis-Haemers construction requires q in {{4, 8}}, got {q}"
        )));
    }
    let gf = Gf::new(q)?;
    let qs = q as usize;
    let arc = denniston_arc(q)?;

    // D1: the q^2 translates of the arc in AG(2,q), in translation order.
    let d1_blocks: Vec<Vec<u32>> = (0..qs * qs)
        .map(|t| {
            let tv = point_coords(t, 2, q);
            arc.points
                .iter()
                .map(|&p| {
                    let pc = point_coords(p as usize, 2, q);
                    point_index(&[gf.add(pc[0], tv[0]), gf.add(pc[1], tv[1])], q) as u32
                })
                .collect()
        })
        .collect();
    let d1 = IncidenceStructure::new(qs * qs, d1_blocks)?;
    let d1_params = verify_design(&d1, 2).map_err(|e| Error::BaseDesign(Box::new(e)))?;
    let expected_k1 = qs * (qs - 1) / 2;
    let expected_l1 = (qs * (qs - 2) / 4) as u64;
    if d1_params.b != d1_params.v || d1_params.k != expected_k1 || d1_params.lambda != expected_l1 {
        return Err(Error::BaseDesign(Box::new(Error::NotBalanced {
            t: 2,
            subset: vec![],
            expected: expected_l1 as usize,
            got: d1_params.lambda as usize,
        })));
    }

    let lines = ag3_lines(q)?;
    let labelings: Vec<QuotientLabeling> = lines
        .classes
        .iter()
        .map(|c| quotient_labeling(q, c.direction))
        .collect::<Result<_>>()?;
    let composed = sr_compose(&d1, &d1_params, &lines, &labelings)?;

    let profile = intersection_profile(&composed)?;
    let x = qs * qs * (qs - 2) / 4;
    let y = qs * qs * (qs - 1) / 4;
    if profile.qs_pair != Some((x, y)) {
        return Err(Error::QuasiSymmetryMismatch {
            expected: (x, y),
            found: profile.numbers,
        });
    }
    if composed.has_repeated_blocks() {
        return Err(Error::ComposeLabeling(
            "composition produced repeated blocks".into(),
        ));
    }
    Ok(composed)
}

/// Read a `.inc` file: `QSINC 1`, `v=<int> b=<int>`, then one line of
/// sorted 0-based point indices per block. `#` lines after the header
/// are comments.
pub fn read_inc(path: &Path) -> Result<IncidenceStructure> {
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
    let mut lines = BufReader::new(file).lines().enumerate();
    let (_, magic) = lines
        .next()
        .ok_or_else(|| parse(1, "empty file".into()))?;
    let magic = magic.map_err(|e| Error::Io {
        path: name.clone(),
        source: e,
    })?;
    if magic.trim() != "QSINC 1" {
        return Err(parse(1, format!("expected 'QSINC 1', got '{magic}'")));
    }
    let mut v: Option<usize> = None;
    let mut b: Option<usize> = None;
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    for (idx, line) in lines {
        let line = line.map_err(|e| Error::Io {
            path: name.clone(),
            source: e,
        })?;
        let line = line.trim();
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        if v.is_none() {
            for field in line.split_whitespace() {
                let (key, val) = field
                    .split_once('=')
                    .ok_or_else(|| parse(idx + 1, format!("bad header field '{field}'")))?;
                let val: usize = val
                    .parse()
                    .map_err(|_| parse(idx + 1, format!("bad integer '{val}'")))?;
                match key {
                    "v" => v = Some(val),
                    "b" => b = Some(val),
                    _ => return Err(parse(idx + 1, format!("unknown header key '{key}'"))),
                }
            }
            if v.is_none() || b.is_none() {
                return Err(parse(idx + 1, "header must set v= and b=".into()));
            }
            continue;
        }
        let block: Vec<u32> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse()
                    .map_err(|_| parse(idx + 1, format!("bad point index '{tok}'")))
            })
            .collect::<Result<_>>()?;
        blocks.push(block);
    }
    let v = v.ok_or_else(|| parse(2, "missing header".into()))?;
    let b = b.unwrap();
    if blocks.len() != b {
        return Err(parse(
            0,
            format!("header promises b={b} blocks, found {}", blocks.len()),
        ));
    }
    IncidenceStructure::new(v, blocks)
}

/// Write the `.inc` format; the inverse of [`read_inc`].
pub fn write_inc(inc: &IncidenceStructure, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("QSINC 1\n");
    out.push_str(&format!("v={} b={}\n", inc.v(), inc.b()));
    for block in inc.blocks() {
        let strs: Vec<String> = block.iter().map(|p| p.to_string()).collect();
        out.push_str(&strs.join(" "));
        out.push('\n');
    }
    let mut file = std::fs::File::create(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    file.write_all(out.as_bytes()).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::IncidenceStructure;

    /// Fano plane: lines of PG(2,2), points = nonzero vectors of F_2^3
    /// minus one (indices 0..6 map to 1..7 as bit patterns).
    pub fn fano() -> IncidenceStructure {
        let mut blocks = Vec::new();
        for a in 1u32..8 {
            for b in a + 1..8 {
                let c = a ^ b;
                if c > b {
                    blocks.push(vec![a - 1, b - 1, c - 1]);
                }
            }
        }
        IncidenceStructure::new(7, blocks).unwrap()
    }

    /// All 2-subsets of a 4-set: the 2-(4,2,1) design.
    pub fn pair_design4() -> IncidenceStructure {
        let blocks = (0..4u32)
            .flat_map(|a| ((a + 1)..4).map(move |b| vec![a, b]))
            .collect();
        IncidenceStructure::new(4, blocks).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fixtures::{fano, pair_design4};

    /// Brute-force oracle: count blocks through every point pair directly
    /// from the block lists, no bit tricks.
    fn pair_lambdas(inc: &IncidenceStructure) -> Vec<usize> {
        let v = inc.v();
        let mut out = Vec::new();
        for i in 0..v as u32 {
            for j in i + 1..v as u32 {
                out.push(
                    inc.blocks()
                        .iter()
                        .filter(|b| b.contains(&i) && b.contains(&j))
                        .count(),
                );
            }
        }
        out
    }

    #[test]
    fn fano_is_2_7_3_1() {
        let f = fano();
        assert_eq!(f.b(), 7);
        let oracle = pair_lambdas(&f);
        assert_eq!(oracle.len(), 21);
        assert!(oracle.iter().all(|&l| l == 1));
        let p = verify_design(&f, 2).unwrap();
        assert_eq!(
            p,
            DesignParams {
                t: 2,
                v: 7,
                k: 3,
                lambda: 1,
                b: 7,
                r: 3
            }
        );
        assert_eq!(p.b as u64 * p.k as u64, p.v as u64 * p.r);
        assert_eq!(p.r * (p.k as u64 - 1), p.lambda * (p.v as u64 - 1));
    }

    #[test]
    fn wrong_block_size_is_named() {
        let mut blocks: Vec<Vec<u32>> = fano().blocks().to_vec();
        blocks[3].pop();
        let inc = IncidenceStructure::new(7, blocks).unwrap();
        match verify_design(&inc, 2) {
            Err(Error::BlockSize { block: 3, .. }) => {}
            other => panic!("expected BlockSize error, got {other:?}"),
        }
    }

    #[test]
    fn non_constant_lambda_reports_witness() {
        // constant point degree, unbalanced pairs
        let blocks = vec![vec![0u32, 1], vec![2, 3], vec![0, 1], vec![2, 3]];
        let inc = IncidenceStructure::new(4, blocks).unwrap();
        match verify_design(&inc, 2) {
            Err(Error::NotBalanced { t: 2, subset, .. }) => assert_eq!(subset.len(), 2),
            other => panic!("expected NotBalanced, got {other:?}"),
        }
        // the same structure is a valid 1-design
        let p1 = verify_design(&inc, 1).unwrap();
        assert_eq!((p1.r, p1.lambda), (2, 2));
    }

    #[test]
    fn intersection_profiles() {
        let f = fano();
        let prof = intersection_profile(&f).unwrap();
        assert_eq!(prof.numbers, vec![1]);
        assert_eq!(prof.qs_pair, None);

        let p4 = pair_design4();
        let prof = intersection_profile(&p4).unwrap();
        assert_eq!(prof.numbers, vec![0, 1]);
        assert_eq!(prof.qs_pair, Some((0, 1)));

        let one = IncidenceStructure::new(3, vec![vec![0, 1]]).unwrap();
        assert!(matches!(
            intersection_profile(&one),
            Err(Error::TooFewBlocks(1, 2))
        ));
    }

    #[test]
    fn complement_involution_and_params() {
        let f = fano();
        assert_eq!(f.complement().complement(), f);
        let fc = f.complement();
        let p = verify_design(&fc, 2).unwrap();
        assert_eq!((p.v, p.k, p.lambda), (7, 4, 2));
        // intersection numbers shift by v - 2k: 1 -> 2
        let prof = intersection_profile(&fc).unwrap();
        assert_eq!(prof.numbers, vec![2]);
    }

    #[test]
    fn complement_shift_exhaustive_small() {
        // s' = v - 2k + s for every block pair, checked pairwise
        let d = pair_design4();
        let dc = d.complement();
        for i in 0..d.b() {
            for j in i + 1..d.b() {
                let s = and_weight(d.incidence().row(i), d.incidence().row(j));
                let sc = and_weight(dc.incidence().row(i), dc.incidence().row(j));
                assert_eq!(sc, d.v() - 2 * d.block(i).len() + s);
            }
        }
    }

    #[test]
    fn incidence_io_roundtrip_and_errors() {
        let dir = std::env::temp_dir().join("qsc-design-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("fano.inc");
        let f = fano();
        write_inc(&f, &path).unwrap();
        let back = read_inc(&path).unwrap();
        assert_eq!(back, f);

        let bad = dir.join("bad.inc");
        std::fs::write(&bad, "QSINC 1\nv=4 b=1\n0 3 7\n").unwrap();
        assert!(matches!(
            read_inc(&bad),
            Err(Error::PointOutOfRange { index: 7, v: 4 })
        ));

        let commented = dir.join("comments.inc");
        std::fs::write(
            &commented,
            "QSINC 1\n# a comment\nv=3 b=2\n# another\n0 1\n1 2\n",
        )
        .unwrap();
        let inc = read_inc(&commented).unwrap();
        assert_eq!(inc.b(), 2);

        let dup = dir.join("dup.inc");
        std::fs::write(&dup, "QSINC 1\nv=3 b=1\n1 1\n").unwrap();
        assert!(matches!(read_inc(&dup), Err(Error::DuplicatePoint { .. })));
    }

    #[test]
    fn sr_dimension_mismatch_rejected() {
        let lines = ag3_lines(2).unwrap();
        let labelings: Vec<_> = lines
            .classes
            .iter()
            .map(|c| quotient_labeling(2, c.direction).unwrap())
            .collect();
        let d1 = fano(); // v1 = 7, but 2^3 != 7 * 2
        let p1 = verify_design(&d1, 2).unwrap();
        assert!(matches!(
            sr_compose(&d1, &p1, &lines, &labelings),
            Err(Error::ComposeDimension { .. })
        ));
    }

    #[test]
    fn bh4_parameters_and_profile() {
        let d = blokhuis_haemers(4).unwrap();
        let p = verify_design(&d, 2).unwrap();
        assert_eq!(
            p,
            DesignParams {
                t: 2,
                v: 64,
                k: 24,
                lambda: 46,
                b: 336,
                r: 126
            }
        );
        let prof = intersection_profile(&d).unwrap();
        assert_eq!(prof.qs_pair, Some((8, 12)));
        assert!(!d.has_repeated_blocks());
        assert!(blokhuis_haemers(2).is_err());
        assert!(blokhuis_haemers(16).is_err());
    }

    #[test]
    fn bh4_complement_is_quasi_symmetric() {
        let d = blokhuis_haemers(4).unwrap();
        let dc = d.complement();
        let p = verify_design(&dc, 2).unwrap();
        // lambda' = b - 2r + lambda
        assert_eq!(p.lambda, 336 - 2 * 126 + 46);
        let prof = intersection_profile(&dc).unwrap();
        // s -> v - 2k + s
        assert_eq!(prof.qs_pair, Some((24, 28)));
    }

    #[test]
    fn profile_execution_modes_agree() {
        let d = blokhuis_haemers(4).unwrap();
        let seq = intersection_profile_exec(&d, Execution::Sequential).unwrap();
        let par = intersection_profile_exec(&d, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
    }
}
