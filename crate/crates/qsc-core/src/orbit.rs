//! Automorphism actions on incidence structures, point orbit matrices and
//! their defining equations, block-graph quotient matrices, the
//! quasi-symmetric coupling equation, orbit-matrix code constructions and
//! the involution search over affine semilinear maps.
//!
//! The orbit-matrix equations are implemented as executable checks with
//! exact integer arithmetic (cross-multiplied by orbit lengths), so the
//! theorems they come from double as test oracles.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::design::{DesignParams, IncidenceStructure};
use crate::error::Error;
use crate::exec::{chunk_ranges, map_ranges, Execution};
use crate::f2code::PrimeFieldCode;
use crate::galois::{point_coords, point_index, Gf};
use crate::srg::{Graph, SrgParams};
use crate::Result;

/// A design automorphism: compatible permutations of points and blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignAction {
    pub point_perm: Vec<u32>,
    pub block_perm: Vec<u32>,
}

fn check_permutation(perm: &[u32], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::BadPermutation {
            n,
            reason: format!("has {} images", perm.len()),
        });
    }
    let mut seen = vec![false; n];
    for &img in perm {
        if img as usize >= n || seen[img as usize] {
            return Err(Error::BadPermutation {
                n,
                reason: format!("image {img} repeated or out of range"),
            });
        }
        seen[img as usize] = true;
    }
    Ok(())
}

/// Lookup table from block point-sets to block indices (ascending), used
/// to induce block permutations from point permutations. Duplicate block
/// point-sets map to their index lists.
pub(crate) struct BlockIndex(HashMap<Vec<u32>, Vec<u32>>);

impl BlockIndex {
    pub(crate) fn new(inc: &IncidenceStructure) -> BlockIndex {
        let mut map: HashMap<Vec<u32>, Vec<u32>> = HashMap::with_capacity(inc.b());
        for (bi, block) in inc.blocks().iter().enumerate() {
            map.entry(block.clone()).or_default().push(bi as u32);
        }
        BlockIndex(map)
    }
}

/// Induce the block permutation of a point permutation, verifying that
/// every block image is again a block.
pub fn induced_action(inc: &IncidenceStructure, point_perm: Vec<u32>) -> Result<DesignAction> {
    check_permutation(&point_perm, inc.v())?;
    let index = BlockIndex::new(inc);
    induce(inc, &index, point_perm)
}

pub(crate) fn induce(
    inc: &IncidenceStructure,
    index: &BlockIndex,
    point_perm: Vec<u32>,
) -> Result<DesignAction> {
    let mut used_per_set: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut block_perm = Vec::with_capacity(inc.b());
    for (bi, block) in inc.blocks().iter().enumerate() {
        let mut image: Vec<u32> = block.iter().map(|&p| point_perm[p as usize]).collect();
        image.sort_unstable();
        let Some(candidates) = index.0.get(&image) else {
            return Err(Error::NotAutomorphism { block: bi });
        };
        let used = used_per_set.entry(image).or_insert(0);
        if *used >= candidates.len() {
            return Err(Error::NotAutomorphism { block: bi });
        }
        block_perm.push(candidates[*used]);
        *used += 1;
    }
    Ok(DesignAction {
        point_perm,
        block_perm,
    })
}

/// Numbers of fixed points and fixed blocks of an action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct FixedStructure {
    pub f: usize,
    pub h: usize,
}

impl DesignAction {
    pub fn fixed_structure(&self) -> FixedStructure {
        FixedStructure {
            f: self
                .point_perm
                .iter()
                .enumerate()
                .filter(|&(i, &img)| i as u32 == img)
                .count(),
            h: self
                .block_perm
                .iter()
                .enumerate()
                .filter(|&(i, &img)| i as u32 == img)
                .count(),
        }
    }

    pub fn is_involution(&self) -> bool {
        let id_sq = |perm: &[u32]| {
            perm.iter()
                .enumerate()
                .all(|(i, &img)| perm[img as usize] as usize == i)
        };
        self.point_perm.iter().enumerate().any(|(i, &img)| i as u32 != img)
            && id_sq(&self.point_perm)
            && id_sq(&self.block_perm)
    }
}

/// Point orbit matrix of a design under a permutation group: entry (i,j)
/// counts the blocks of block orbit j through a representative of point
/// orbit i. Orbits are ordered fixed-first, then by ascending minimum
/// index. The partitions are present when the matrix was computed from
/// an action (they are not part of the `.om` serialization).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitMatrix {
    pub point_orbit_lengths: Vec<u32>,
    pub block_orbit_lengths: Vec<u32>,
    /// m x n count matrix.
    pub counts: Vec<Vec<u32>>,
    pub point_orbits: Option<Vec<Vec<u32>>>,
    pub block_orbits: Option<Vec<Vec<u32>>>,
}

impl OrbitMatrix {
    pub fn m(&self) -> usize {
        self.point_orbit_lengths.len()
    }

    pub fn n(&self) -> usize {
        self.block_orbit_lengths.len()
    }

    pub fn fixed_structure(&self) -> FixedStructure {
        FixedStructure {
            f: self.point_orbit_lengths.iter().filter(|&&l| l == 1).count(),
            h: self.block_orbit_lengths.iter().filter(|&&l| l == 1).count(),
        }
    }

    /// Indices of point orbits of length > 1.
    pub fn nonfixed_rows(&self) -> Vec<usize> {
        (0..self.m())
            .filter(|&i| self.point_orbit_lengths[i] > 1)
            .collect()
    }

    /// Indices of block orbits of length > 1.
    pub fn nonfixed_cols(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&j| self.block_orbit_lengths[j] > 1)
            .collect()
    }
}

/// Orbit partition of {0..n-1} under the group generated by the given
/// permutations; singleton orbits first, then ascending minimum element.
fn orbit_partition(n: usize, perms: &[&Vec<u32>]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; n];
    let mut orbits: Vec<Vec<u32>> = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start as u32];
        let mut queue = vec![start];
        while let Some(x) = queue.pop() {
            for perm in perms {
                let y = perm[x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y as u32);
                    queue.push(y);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    let (fixed, moved): (Vec<_>, Vec<_>) = orbits.into_iter().partition(|o| o.len() == 1);
    fixed.into_iter().chain(moved).collect()
}

/// Compute the point orbit matrix for the group generated by the given
/// actions (the empty slice gives the identity group, whose orbit matrix
/// is the point-by-block incidence matrix). Counts are taken from the
/// minimum-index representative and cross-checked against a second
/// representative on every non-trivial orbit.
pub fn orbit_matrix(inc: &IncidenceStructure, actions: &[DesignAction]) -> Result<OrbitMatrix> {
    for a in actions {
        check_permutation(&a.point_perm, inc.v())?;
        check_permutation(&a.block_perm, inc.b())?;
    }
    let point_perms: Vec<&Vec<u32>> = actions.iter().map(|a| &a.point_perm).collect();
    let block_perms: Vec<&Vec<u32>> = actions.iter().map(|a| &a.block_perm).collect();
    let point_orbits = orbit_partition(inc.v(), &point_perms);
    let block_orbits = orbit_partition(inc.b(), &block_perms);
    let mut block_orbit_of = vec![0u32; inc.b()];
    for (j, orbit) in block_orbits.iter().enumerate() {
        for &b in orbit {
            block_orbit_of[b as usize] = j as u32;
        }
    }
    let point_rows = inc.point_rows();
    let n = block_orbits.len();
    let count_row = |rep: u32| {
        let mut row = vec![0u32; n];
        for b in point_rows.row_support(rep as usize) {
            row[block_orbit_of[b] as usize] += 1;
        }
        row
    };
    let mut counts = Vec::with_capacity(point_orbits.len());
    for (i, orbit) in point_orbits.iter().enumerate() {
        let row = count_row(orbit[0]);
        if orbit.len() > 1 && count_row(orbit[1]) != row {
            return Err(Error::RepresentativeInconsistency { orbit: i });
        }
        counts.push(row);
    }
    Ok(OrbitMatrix {
        point_orbit_lengths: point_orbits.iter().map(|o| o.len() as u32).collect(),
        block_orbit_lengths: block_orbits.iter().map(|o| o.len() as u32).collect(),
        counts,
        point_orbits: Some(point_orbits),
        block_orbits: Some(block_orbits),
    })
}

fn lcm_u64(values: impl Iterator<Item = u64>) -> Result<u64> {
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let mut acc = 1u64;
    for v in values {
        acc = acc
            .checked_mul(v / gcd(acc, v))
            .ok_or(Error::Overflow)?;
        if acc > 1 << 40 {
            return Err(Error::Overflow);
        }
    }
    Ok(acc)
}

/// Violations of the four point-orbit-matrix equations: entry bounds, row
/// sums equal to r, length-weighted column sums equal to k, and the
/// quadratic identity over all point-orbit pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct OmReport {
    pub bound_violations: Vec<(usize, usize)>,
    pub row_sum_violations: Vec<usize>,
    pub col_sum_violations: Vec<usize>,
    pub quadratic_violations: Vec<(usize, usize)>,
}

impl OmReport {
    pub fn all_pass(&self) -> bool {
        self.bound_violations.is_empty()
            && self.row_sum_violations.is_empty()
            && self.col_sum_violations.is_empty()
            && self.quadratic_violations.is_empty()
    }
}

/// Check the orbit-matrix equations against verified design parameters.
/// Violations are report content, not errors.
pub fn verify_om(om: &OrbitMatrix, params: &DesignParams) -> Result<OmReport> {
    let m = om.m();
    let n = om.n();
    let omega = &om.point_orbit_lengths;
    let cap = &om.block_orbit_lengths;
    let mut report = OmReport::default();
    for i in 0..m {
        for j in 0..n {
            if om.counts[i][j] > cap[j] {
                report.bound_violations.push((i, j));
            }
        }
    }
    for i in 0..m {
        let sum: u64 = om.counts[i].iter().map(|&x| x as u64).sum();
        if sum != params.r {
            report.row_sum_violations.push(i);
        }
    }
    for j in 0..n {
        let sum: u64 = (0..m)
            .map(|i| omega[i] as u64 * om.counts[i][j] as u64)
            .sum();
        if sum != params.k as u64 * cap[j] as u64 {
            report.col_sum_violations.push(j);
        }
    }
    // quadratic identity, cross-multiplied by L = lcm of block orbit
    // lengths to stay in integers
    let scale = lcm_u64(cap.iter().map(|&x| x as u64))?;
    let weights: Vec<i128> = cap.iter().map(|&x| (scale / x as u64) as i128).collect();
    let ranges = chunk_ranges(m, 8);
    let chunks = map_ranges(Execution::default(), ranges, |range| {
        let mut bad = Vec::new();
        for s in range {
            for t in 0..m {
                let lhs: i128 = (0..n)
                    .map(|j| {
                        om.counts[s][j] as i128 * om.counts[t][j] as i128 * weights[j]
                    })
                    .sum::<i128>()
                    * omega[t] as i128;
                let delta = if s == t { 1 } else { 0 };
                let rhs = scale as i128
                    * (params.lambda as i128 * omega[t] as i128
                        + delta * (params.r as i128 - params.lambda as i128));
                if lhs != rhs {
                    bad.push((s, t));
                }
            }
        }
        bad
    });
    report.quadratic_violations = chunks.into_iter().flatten().collect();
    Ok(report)
}

/// Block graph of a quasi-symmetric design: vertices are blocks, adjacent
/// iff they intersect in y points, and the exhaustive strong-regularity
/// check of the result.
#[derive(Debug, Clone)]
pub struct BlockGraph {
    pub graph: Graph,
    pub connected: bool,
    /// Present iff the graph passed the exhaustive SRG check.
    pub srg: Option<SrgParams>,
}

pub fn block_graph(inc: &IncidenceStructure, y: usize) -> Result<BlockGraph> {
    let profile = crate::design::intersection_profile(inc)?;
    let Some((_, larger)) = profile.qs_pair else {
        return Err(Error::NotQuasiSymmetric(profile.numbers));
    };
    if larger != y {
        return Err(Error::UnsupportedParameter(format!(
            "y={y} is not the larger intersection number {larger}"
        )));
    }
    let b = inc.b();
    let rows = inc.incidence();
    let mut graph = Graph::new(b);
    for i in 0..b {
        for j in i + 1..b {
            let (ri, rj) = rows.two_rows(i, j);
            if crate::bits::and_weight(ri, rj) == y {
                graph.add_edge(i, j);
            }
        }
    }
    let connected = graph.is_connected();
    let srg = graph.srg_params().ok();
    Ok(BlockGraph {
        graph,
        connected,
        srg,
    })
}

/// Quotient of a graph by a vertex partition: entry (i,j) counts the
/// orbit-j vertices adjacent to a representative of orbit i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMatrix {
    pub orbit_lengths: Vec<u32>,
    pub counts: Vec<Vec<u32>>,
}

pub fn quotient_matrix(graph: &Graph, orbits: &[Vec<u32>]) -> Result<QuotientMatrix> {
    let n = orbits.len();
    let mut orbit_of = vec![u32::MAX; graph.n()];
    for (j, orbit) in orbits.iter().enumerate() {
        for &v in orbit {
            orbit_of[v as usize] = j as u32;
        }
    }
    if orbit_of.iter().any(|&x| x == u32::MAX) {
        return Err(Error::UnsupportedParameter(
            "orbits do not partition the vertex set".into(),
        ));
    }
    let count_row = |rep: u32| {
        let mut row = vec![0u32; n];
        for w in graph.adjacency().row_support(rep as usize) {
            row[orbit_of[w] as usize] += 1;
        }
        row
    };
    let mut counts = Vec::with_capacity(n);
    for (i, orbit) in orbits.iter().enumerate() {
        let row = count_row(orbit[0]);
        if orbit.len() > 1 && count_row(orbit[1]) != row {
            return Err(Error::RepresentativeInconsistency { orbit: i });
        }
        counts.push(row);
    }
    Ok(QuotientMatrix {
        orbit_lengths: orbits.iter().map(|o| o.len() as u32).collect(),
        counts,
    })
}

/// Violations of the row-orbit-matrix equations of a strongly regular
/// graph: entry bounds, plain and length-weighted row sums equal to the
/// degree, and the quadratic identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct QuotientReport {
    pub bound_violations: Vec<(usize, usize)>,
    pub row_sum_violations: Vec<usize>,
    pub weighted_sum_violations: Vec<usize>,
    pub quadratic_violations: Vec<(usize, usize)>,
}

impl QuotientReport {
    pub fn all_pass(&self) -> bool {
        self.bound_violations.is_empty()
            && self.row_sum_violations.is_empty()
            && self.weighted_sum_violations.is_empty()
            && self.quadratic_violations.is_empty()
    }
}

pub fn verify_quotient(qm: &QuotientMatrix, srg: &SrgParams) -> QuotientReport {
    let n = qm.counts.len();
    let lens = &qm.orbit_lengths;
    let a = srg.k as i128;
    let c = srg.lambda as i128;
    let d = srg.mu as i128;
    let mut report = QuotientReport::default();
    for i in 0..n {
        for j in 0..n {
            let delta = (i == j) as u32;
            if qm.counts[i][j] > lens[j] - delta {
                report.bound_violations.push((i, j));
            }
        }
    }
    for i in 0..n {
        let sum: u64 = qm.counts[i].iter().map(|&x| x as u64).sum();
        if sum as i128 != a {
            report.row_sum_violations.push(i);
        }
    }
    for j in 0..n {
        let sum: i128 = (0..n)
            .map(|i| lens[i] as i128 * qm.counts[i][j] as i128)
            .sum();
        if sum != a * lens[j] as i128 {
            report.weighted_sum_violations.push(j);
        }
    }
    // sum_s (Omega_s / Omega_j) r_si r_sj
    //   = delta_ij (a - d) + d Omega_i + (c - d) r_ji,
    // cross-multiplied by Omega_j.
    let ranges = chunk_ranges(n, 16);
    let chunks = map_ranges(Execution::default(), ranges, |range| {
        let mut bad = Vec::new();
        for i in range {
            for j in 0..n {
                let lhs: i128 = (0..n)
                    .map(|s| {
                        lens[s] as i128 * qm.counts[s][i] as i128 * qm.counts[s][j] as i128
                    })
                    .sum();
                let delta = (i == j) as i128;
                let rhs = lens[j] as i128
                    * (delta * (a - d) + d * lens[i] as i128
                        + (c - d) * qm.counts[j][i] as i128);
                if lhs != rhs {
                    bad.push((i, j));
                }
            }
        }
        bad
    });
    report.quadratic_violations = chunks.into_iter().flatten().collect();
    report
}

/// Violations of the quasi-symmetric coupling between a point orbit
/// matrix and the block-graph quotient matrix, over all block-orbit
/// pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct Eq8Report {
    pub violations: Vec<(usize, usize)>,
}

impl Eq8Report {
    pub fn all_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check, for every pair (j, j') of block orbits:
/// (1/Omega_j) sum_i omega_i gamma_ij gamma_ij'
///   = r_jj' (y - x) + Omega_j' x + (k - x) delta_jj'.
pub fn verify_eq8(
    om: &OrbitMatrix,
    qm: &QuotientMatrix,
    x: usize,
    y: usize,
    k: usize,
) -> Eq8Report {
    verify_eq8_exec(om, qm, x, y, k, Execution::default())
}

pub fn verify_eq8_exec(
    om: &OrbitMatrix,
    qm: &QuotientMatrix,
    x: usize,
    y: usize,
    k: usize,
    mode: Execution,
) -> Eq8Report {
    let m = om.m();
    let n = om.n();
    debug_assert_eq!(n, qm.counts.len());
    let omega = &om.point_orbit_lengths;
    let cap = &om.block_orbit_lengths;
    let ranges = chunk_ranges(n, 8);
    let chunks = map_ranges(mode, ranges, |range| {
        let mut bad = Vec::new();
        for j in range {
            for jp in 0..n {
                let lhs: i128 = (0..m)
                    .map(|i| {
                        omega[i] as i128 * om.counts[i][j] as i128 * om.counts[i][jp] as i128
                    })
                    .sum();
                let delta = (j == jp) as i128;
                let rhs = cap[j] as i128
                    * (qm.counts[j][jp] as i128 * (y as i128 - x as i128)
                        + cap[jp] as i128 * x as i128
                        + (k as i128 - x as i128) * delta);
                if lhs != rhs {
                    bad.push((j, jp));
                }
            }
        }
        bad
    });
    Eq8Report {
        violations: chunks.into_iter().flatten().collect(),
    }
}

/// Design-side numbers quantified over by the orbit-code theorems.
#[derive(Debug, Clone, Copy)]
pub struct QsDesignInfo {
    pub params: DesignParams,
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Columns,
    Rows,
}

/// Code spanned by the non-fixed part of an orbit matrix, with ambient
/// and zero-coordinate-deleted effective lengths and the hypothesis
/// notes of the covering theorem (unmet hypotheses are warnings: the
/// code is still computed, the theorem guarantee is withdrawn).
#[derive(Debug, Clone)]
pub struct NonfixedCode {
    pub code: PrimeFieldCode,
    pub axis: Axis,
    pub ambient_len: usize,
    pub effective_len: usize,
    /// Coordinates (positions within the non-fixed part) deleted because
    /// every spanning vector is 0 mod p there.
    pub dropped_coords: Vec<usize>,
    pub hypothesis_notes: Vec<String>,
}

/// Span the columns (or rows) of the non-fixed part of an orbit matrix
/// over GF(p). With `drop_zero_coords`, coordinates at which every
/// spanning vector vanishes mod p are deleted from the result.
pub fn nonfixed_code(
    om: &OrbitMatrix,
    axis: Axis,
    p: u8,
    drop_zero_coords: bool,
    info: Option<&QsDesignInfo>,
) -> Result<NonfixedCode> {
    let rows_idx = om.nonfixed_rows();
    let cols_idx = om.nonfixed_cols();
    if rows_idx.is_empty() || cols_idx.is_empty() {
        return Err(Error::EmptyNonfixedPart);
    }
    let mut notes = Vec::new();
    let lens: Vec<u32> = rows_idx
        .iter()
        .map(|&i| om.point_orbit_lengths[i])
        .chain(cols_idx.iter().map(|&j| om.block_orbit_lengths[j]))
        .collect();
    let omega = lens[0];
    if lens.iter().any(|&l| l != omega) {
        notes.push(format!(
            "non-fixed orbits do not all share one length: {lens:?}"
        ));
    }
    match axis {
        Axis::Columns => {
            if omega % p as u32 != 0 {
                notes.push(format!("p={p} does not divide the orbit length {omega}"));
            }
            if let Some(info) = info {
                let (x, y, k) = (info.x, info.y, info.params.k);
                if (y - x) % p as usize != 0 {
                    notes.push(format!("p={p} does not divide y-x={}", y - x));
                }
                if (k - x) % p as usize != 0 {
                    notes.push(format!("p={p} does not divide k-x={}", k - x));
                }
            } else {
                notes.push("design numbers not supplied; divisibility hypotheses unchecked".into());
            }
        }
        Axis::Rows => {
            if p != 2 {
                notes.push(format!("row-code guarantee is stated for p=2, got p={p}"));
            }
            if omega != 2 {
                notes.push(format!("row-code guarantee needs orbit length 2, got {omega}"));
            }
            if let Some(info) = info {
                let lam = info.params.lambda;
                let diff = info.params.r - lam;
                if (2 * lam) % 4 != 0 || diff % 4 != 0 {
                    notes.push(format!(
                        "2*lambda={} or r-lambda={diff} not divisible by 4",
                        2 * lam
                    ));
                }
            }
        }
    }
    // spanning vectors
    let vectors: Vec<Vec<i64>> = match axis {
        Axis::Columns => cols_idx
            .iter()
            .map(|&j| rows_idx.iter().map(|&i| om.counts[i][j] as i64).collect())
            .collect(),
        Axis::Rows => rows_idx
            .iter()
            .map(|&i| cols_idx.iter().map(|&j| om.counts[i][j] as i64).collect())
            .collect(),
    };
    let ambient_len = match axis {
        Axis::Columns => rows_idx.len(),
        Axis::Rows => cols_idx.len(),
    };
    let code = PrimeFieldCode::span(&vectors, ambient_len, p)?;
    let (code, dropped) = if drop_zero_coords {
        let zero_cols: Vec<usize> = (0..ambient_len)
            .filter(|&c| code.generator().iter().all(|row| row[c] == 0))
            .collect();
        if zero_cols.is_empty() {
            (code, Vec::new())
        } else {
            let keep: Vec<usize> = (0..ambient_len)
                .filter(|c| !zero_cols.contains(c))
                .collect();
            let trimmed: Vec<Vec<i64>> = code
                .generator()
                .iter()
                .map(|row| keep.iter().map(|&c| row[c] as i64).collect())
                .collect();
            (PrimeFieldCode::span(&trimmed, keep.len(), p)?, zero_cols)
        }
    } else {
        (code, Vec::new())
    };
    let effective_len = code.n();
    Ok(NonfixedCode {
        code,
        axis,
        ambient_len,
        effective_len,
        dropped_coords: dropped,
        hypothesis_notes: notes,
    })
}

/// Span of all columns of the orbit matrix over GF(p), under the
/// equal-orbit-length hypothesis (the same length for point and block
/// orbits) with p dividing k, x and y. Self-orthogonality of the result
/// is verified.
pub fn equal_orbit_code(om: &OrbitMatrix, p: u8, info: &QsDesignInfo) -> Result<PrimeFieldCode> {
    let mut lens: Vec<u32> = om.point_orbit_lengths.clone();
    lens.extend_from_slice(&om.block_orbit_lengths);
    let omega = lens[0];
    if lens.iter().any(|&l| l != omega) {
        lens.sort_unstable();
        lens.dedup();
        return Err(Error::UnequalOrbitLengths(lens));
    }
    for (name, value) in [("k", info.params.k), ("x", info.x), ("y", info.y)] {
        if value % p as usize != 0 {
            return Err(Error::Divisibility(format!(
                "p={p} does not divide {name}={value}"
            )));
        }
    }
    let m = om.m();
    let vectors: Vec<Vec<i64>> = (0..om.n())
        .map(|j| (0..m).map(|i| om.counts[i][j] as i64).collect())
        .collect();
    let code = PrimeFieldCode::span(&vectors, m, p)?;
    if !code.is_self_orthogonal() {
        return Err(Error::TheoremCheck(format!(
            "equal-orbit column span of length {m} is not self-orthogonal over GF({p})"
        )));
    }
    Ok(code)
}

/// Which field automorphism a semilinear map applies before the linear
/// part: none, or x -> x^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum FieldAut {
    Identity,
    Frobenius,
}

/// Affine semilinear map x -> A x^sigma + t on GF(q)^3.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct SemilinearMap {
    pub q: u16,
    pub matrix: [[u8; 3]; 3],
    pub field_aut: FieldAut,
    pub translation: [u8; 3],
}

impl SemilinearMap {
    fn sigma(&self, gf: &Gf, x: u8) -> u8 {
        match self.field_aut {
            FieldAut::Identity => x,
            FieldAut::Frobenius => gf.frob(x),
        }
    }

    pub fn apply(&self, gf: &Gf, p: [u8; 3]) -> [u8; 3] {
        let s = [self.sigma(gf, p[0]), self.sigma(gf, p[1]), self.sigma(gf, p[2])];
        let mut out = self.translation;
        for r in 0..3 {
            for c in 0..3 {
                out[r] ^= gf.mul(self.matrix[r][c], s[c]);
            }
        }
        out
    }

    /// Permutation of the canonical AG(3,q) point order.
    pub fn point_perm(&self, gf: &Gf) -> Vec<u32> {
        let q = gf.q();
        let total = (q as usize).pow(3);
        (0..total)
            .map(|idx| {
                let c = point_coords(idx, 3, q);
                let img = self.apply(gf, [c[0], c[1], c[2]]);
                point_index(&img, q) as u32
            })
            .collect()
    }

    /// The involution condition: A A^sigma = I and A t^sigma + t = 0,
    /// excluding the identity map.
    pub fn is_involution(&self, gf: &Gf) -> bool {
        let id = self.field_aut == FieldAut::Identity
            && self.translation == [0, 0, 0]
            && self.matrix == [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        if id {
            return false;
        }
        let a = &self.matrix;
        for r in 0..3 {
            for c in 0..3 {
                let mut entry = 0u8;
                for s in 0..3 {
                    entry ^= gf.mul(a[r][s], self.sigma(gf, a[s][c]));
                }
                if entry != (r == c) as u8 {
                    return false;
                }
            }
        }
        let ts = [
            self.sigma(gf, self.translation[0]),
            self.sigma(gf, self.translation[1]),
            self.sigma(gf, self.translation[2]),
        ];
        (0..3).all(|r| {
            let mut at = 0u8;
            for c in 0..3 {
                at ^= gf.mul(a[r][c], ts[c]);
            }
            at == self.translation[r]
        })
    }
}

/// One involution acting on the design: the semilinear map, the design
/// action it induces, and its fixed-point structure.
#[derive(Debug, Clone)]
pub struct InvolutionFind {
    pub map: SemilinearMap,
    pub action: DesignAction,
    pub fixed: FixedStructure,
}

/// Exhaustively enumerate the involutions of the affine semilinear group
/// of GF(q)^3 that preserve the block set of `inc` (assumed to live on
/// the canonical AG(3,q) point order). The scan iterates all q^9
/// matrices and filters by the involution conditions; results come back
/// in matrix-then-translation lexicographic order, identity-sigma
/// branch first.
pub fn find_involutions(q: u16, inc: &IncidenceStructure) -> Result<Vec<InvolutionFind>> {
    find_involutions_exec(q, inc, Execution::default())
}

pub fn find_involutions_exec(
    q: u16,
    inc: &IncidenceStructure,
    mode: Execution,
) -> Result<Vec<InvolutionFind>> {
    let gf = Gf::new(q)?;
    let total_points = (q as usize).pow(3);
    if inc.v() != total_points {
        return Err(Error::UnsupportedParameter(format!(
            "design has v={} points, expected q^3={total_points}",
            inc.v()
        )));
    }
    let index = BlockIndex::new(inc);
    let sigmas: &[FieldAut] = if q == 4 {
        &[FieldAut::Identity, FieldAut::Frobenius]
    } else {
        // Frobenius on GF(8) has order 3: no involutions arise from it.
        &[FieldAut::Identity]
    };
    let matrix_count = (q as usize).pow(9);
    let mut found = Vec::new();
    for &field_aut in sigmas {
        let ranges = chunk_ranges(matrix_count, 4096);
        let chunks = map_ranges(mode, ranges, |range| {
            let mut local = Vec::new();
            for code in range {
                let digits = point_coords(code, 9, q);
                let matrix = [
                    [digits[0], digits[1], digits[2]],
                    [digits[3], digits[4], digits[5]],
                    [digits[6], digits[7], digits[8]],
                ];
                for t_code in 0..total_points {
                    let tc = point_coords(t_code, 3, q);
                    let map = SemilinearMap {
                        q,
                        matrix,
                        field_aut,
                        translation: [tc[0], tc[1], tc[2]],
                    };
                    if !map.is_involution(&gf) {
                        continue;
                    }
                    let perm = map.point_perm(&gf);
                    if let Ok(action) = induce(inc, &index, perm) {
                        let fixed = action.fixed_structure();
                        local.push(InvolutionFind { map, action, fixed });
                    }
                }
            }
            local
        });
        found.extend(chunks.into_iter().flatten());
    }
    Ok(found)
}

/// Keep the first involution of each (f, h) signature, preserving order.
pub fn dedup_by_fixed_structure(found: &[InvolutionFind]) -> Vec<&InvolutionFind> {
    let mut seen = std::collections::HashSet::new();
    found
        .iter()
        .filter(|inv| seen.insert(inv.fixed))
        .collect()
}

/// Read a `.perm` file: `PERM 1`, `n=<int>`, then n space-separated
/// 0-based images; validated as a bijection.
pub fn read_perm(path: &Path) -> Result<Vec<u32>> {
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
    if lines.is_empty() || lines[0].trim() != "PERM 1" {
        return Err(parse(1, "expected 'PERM 1'".into()));
    }
    let header = lines.get(1).ok_or_else(|| parse(2, "missing n=".into()))?;
    let n: usize = header
        .trim()
        .strip_prefix("n=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| parse(2, format!("expected 'n=<int>', got '{header}'")))?;
    let images = lines.get(2).ok_or_else(|| parse(3, "missing images".into()))?;
    let perm: Vec<u32> = images
        .split_whitespace()
        .map(|tok| {
            tok.parse()
                .map_err(|_| parse(3, format!("bad image '{tok}'")))
        })
        .collect::<Result<_>>()?;
    check_permutation(&perm, n)?;
    Ok(perm)
}

pub fn write_perm(perm: &[u32], path: &Path) -> Result<()> {
    let strs: Vec<String> = perm.iter().map(|x| x.to_string()).collect();
    let out = format!("PERM 1\nn={}\n{}\n", perm.len(), strs.join(" "));
    std::fs::write(path, out).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Read a `.om` file; the orbit partitions are not part of the format,
/// so the result carries lengths and counts only.
pub fn read_om(path: &Path) -> Result<OrbitMatrix> {
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
    if lines.is_empty() || lines[0].trim() != "OM 1" {
        return Err(parse(1, "expected 'OM 1'".into()));
    }
    let header = lines.get(1).ok_or_else(|| parse(2, "missing header".into()))?;
    let mut m = None;
    let mut n = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("m", val)) => m = val.parse().ok(),
            Some(("n", val)) => n = val.parse().ok(),
            _ => return Err(parse(2, format!("bad header field '{field}'"))),
        }
    }
    let (m, n): (usize, usize) = match (m, n) {
        (Some(m), Some(n)) => (m, n),
        _ => return Err(parse(2, "header must set m= and n=".into())),
    };
    let ints = |line_no: usize, prefix: &str, expected: usize| -> Result<Vec<u32>> {
        let line = lines
            .get(line_no)
            .ok_or_else(|| parse(line_no + 1, format!("missing '{prefix}' line")))?;
        let rest = line
            .trim()
            .strip_prefix(prefix)
            .ok_or_else(|| parse(line_no + 1, format!("expected '{prefix}'")))?;
        let vals: Vec<u32> = rest
            .split_whitespace()
            .map(|tok| {
                tok.parse()
                    .map_err(|_| parse(line_no + 1, format!("bad integer '{tok}'")))
            })
            .collect::<Result<_>>()?;
        if vals.len() != expected {
            return Err(parse(
                line_no + 1,
                format!("expected {expected} integers, found {}", vals.len()),
            ));
        }
        Ok(vals)
    };
    let omega = ints(2, "omega:", m)?;
    let cap = ints(3, "Omega:", n)?;
    let mut counts = Vec::with_capacity(m);
    for i in 0..m {
        let line = lines
            .get(4 + i)
            .ok_or_else(|| parse(5 + i, "missing matrix row".into()))?;
        let row: Vec<u32> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse()
                    .map_err(|_| parse(5 + i, format!("bad integer '{tok}'")))
            })
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(parse(5 + i, format!("row has {} entries, expected {n}", row.len())));
        }
        counts.push(row);
    }
    Ok(OrbitMatrix {
        point_orbit_lengths: omega,
        block_orbit_lengths: cap,
        counts,
        point_orbits: None,
        block_orbits: None,
    })
}

pub fn write_om(om: &OrbitMatrix, path: &Path) -> Result<()> {
    let join = |v: &[u32]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = format!("OM 1\nm={} n={}\n", om.m(), om.n());
    out.push_str(&format!("omega: {}\n", join(&om.point_orbit_lengths)));
    out.push_str(&format!("Omega: {}\n", join(&om.block_orbit_lengths)));
    for row in &om.counts {
        out.push_str(&join(row));
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
