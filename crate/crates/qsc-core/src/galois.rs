//! Arithmetic in GF(2^m) for m in {1,2,3} and the affine geometries
//! AG(2,q), AG(3,q): points, lines, parallel classes, quotient labelings
//! and Denniston maximal arcs.
//!
//! Field elements are bit patterns of polynomials over GF(2) reduced by a
//! fixed modulus: x^2+x+1 for m=2 and x^3+x+1 for m=3. The moduli are not
//! configurable, so every downstream structure is byte-for-byte
//! reproducible. Points of AG(n,q) are ordered lexicographically on their
//! coordinate bit patterns with the first coordinate most significant;
//! all incidence and orbit matrices inherit this order.

use crate::error::Error;
use crate::Result;

const MODULUS: [u16; 4] = [0, 0b10, 0b111, 0b1011];

fn degree_of(q: u16) -> Result<u8> {
    match q {
        2 => Ok(1),
        4 => Ok(2),
        8 => Ok(3),
        _ => Err(Error::UnsupportedField(q)),
    }
}

/// Carry-less multiply of two polynomials over GF(2), reduced modulo the
/// fixed irreducible polynomial of degree `m`.
fn mul_reduce(a: u8, b: u8, m: u8) -> u8 {
    let mut acc: u16 = 0;
    let mut x = a as u16;
    let mut y = b;
    while y != 0 {
        if y & 1 == 1 {
            acc ^= x;
        }
        x <<= 1;
        y >>= 1;
    }
    let modulus = MODULUS[m as usize];
    let mdeg = m as u32;
    while acc >> mdeg != 0 {
        let shift = 15 - acc.leading_zeros() - mdeg;
        acc ^= modulus << shift;
    }
    acc as u8
}

/// One element of GF(2^m), m in {1,2,3}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u8,
    m: u8,
}

impl FieldElem {
    pub fn new(value: u8, m: u8) -> Result<FieldElem> {
        let q = 1u16 << m;
        degree_of(q)?;
        if (value as u16) >= q {
            return Err(Error::UnsupportedParameter(format!(
                "bit pattern {value} is not an element of GF({q})"
            )));
        }
        Ok(FieldElem { value, m })
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn m(self) -> u8 {
        self.m
    }

    fn check(self, rhs: FieldElem) -> Result<()> {
        if self.m != rhs.m {
            return Err(Error::FieldMismatch(self.m, rhs.m));
        }
        Ok(())
    }

    /// Addition is XOR of bit patterns.
    pub fn add(self, rhs: FieldElem) -> Result<FieldElem> {
        self.check(rhs)?;
        Ok(FieldElem {
            value: self.value ^ rhs.value,
            m: self.m,
        })
    }

    pub fn mul(self, rhs: FieldElem) -> Result<FieldElem> {
        self.check(rhs)?;
        Ok(FieldElem {
            value: mul_reduce(self.value, rhs.value, self.m),
            m: self.m,
        })
    }

    pub fn inv(self) -> Result<FieldElem> {
        let q = 1u16 << self.m;
        if self.value == 0 {
            return Err(Error::ZeroInverse(q));
        }
        // q <= 8: scan for the inverse.
        for cand in 1..q as u8 {
            if mul_reduce(self.value, cand, self.m) == 1 {
                return Ok(FieldElem {
                    value: cand,
                    m: self.m,
                });
            }
        }
        unreachable!("every nonzero element of a field has an inverse");
    }
}

/// Table-driven context for one field; the hot loops work on raw `u8`
/// values through this.
#[derive(Debug, Clone)]
pub struct Gf {
    q: u16,
    m: u8,
    mul: Vec<u8>,
    inv: Vec<u8>,
}

impl Gf {
    pub fn new(q: u16) -> Result<Gf> {
        let m = degree_of(q)?;
        let n = q as usize;
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = mul_reduce(a as u8, b as u8, m);
            }
        }
        let mut inv = vec![0u8; n];
        for a in 1..n {
            inv[a] = (1..n as u8)
                .find(|&b| mul[a * n + b as usize] == 1)
                .expect("nonzero element has an inverse");
        }
        Ok(Gf { q, m, mul, inv })
    }

    #[inline]
    pub fn q(&self) -> u16 {
        self.q
    }

    #[inline]
    pub fn m(&self) -> u8 {
        self.m
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u8) -> Result<u8> {
        if a == 0 {
            return Err(Error::ZeroInverse(self.q));
        }
        Ok(self.inv[a as usize])
    }

    /// Frobenius x -> x^2.
    #[inline]
    pub fn frob(&self, a: u8) -> u8 {
        self.mul(a, a)
    }
}

/// A point of AG(n,q), n in {2,3}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffinePoint {
    pub coords: Vec<FieldElem>,
}

/// Index of the point with the given coordinates in the canonical
/// (lexicographic, first coordinate most significant) point order.
#[inline]
pub fn point_index(coords: &[u8], q: u16) -> usize {
    coords
        .iter()
        .fold(0usize, |acc, &c| acc * q as usize + c as usize)
}

/// Coordinates of the point at `index` in the canonical order.
pub fn point_coords(index: usize, n: usize, q: u16) -> Vec<u8> {
    let mut idx = index;
    let mut out = vec![0u8; n];
    for slot in out.iter_mut().rev() {
        *slot = (idx % q as usize) as u8;
        idx /= q as usize;
    }
    out
}

/// All q^n points of AG(n,q) in the canonical order.
pub fn ag_points(n: usize, q: u16) -> Result<Vec<AffinePoint>> {
    if n != 2 && n != 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    let m = degree_of(q)?;
    let total = (q as usize).pow(n as u32);
    let mut out = Vec::with_capacity(total);
    for idx in 0..total {
        let coords = point_coords(idx, n, q)
            .into_iter()
            .map(|v| FieldElem { value: v, m })
            .collect();
        out.push(AffinePoint { coords });
    }
    Ok(out)
}

/// One parallel class of AG(3,q): the q^2 lines with a common direction.
/// Lines are sorted point-index sets; the class partitions the point set.
#[derive(Debug, Clone)]
pub struct ParallelClass {
    pub direction: [u8; 3],
    pub lines: Vec<Vec<u32>>,
}

/// The resolvable 2-(q^3, q, 1) line system of AG(3,q): one class per
/// direction, q^2+q+1 classes, q^2(q^2+q+1) lines in total.
#[derive(Debug, Clone)]
pub struct LineSystem {
    pub q: u16,
    pub classes: Vec<ParallelClass>,
}

impl LineSystem {
    pub fn line_count(&self) -> usize {
        self.classes.iter().map(|c| c.lines.len()).sum()
    }
}

/// Normalized direction representatives: first nonzero coordinate scaled
/// to 1, enumerated in lexicographic order. There are q^2+q+1 of them.
fn directions(gf: &Gf) -> Vec<[u8; 3]> {
    let q = gf.q() as usize;
    let mut out = Vec::with_capacity(q * q + q + 1);
    for idx in 1..q * q * q {
        let c = point_coords(idx, 3, gf.q());
        let d = [c[0], c[1], c[2]];
        let pivot = d.iter().position(|&x| x != 0).unwrap();
        if d[pivot] == 1 {
            out.push(d);
        }
    }
    out
}

/// The lines of AG(3,q) grouped into parallel classes.
pub fn ag3_lines(q: u16) -> Result<LineSystem> {
    let gf = Gf::new(q)?;
    let qs = q as usize;
    let total = qs * qs * qs;
    let mut classes = Vec::new();
    for d in directions(&gf) {
        let mut seen = vec![false; total];
        let mut lines = Vec::with_capacity(qs * qs);
        for start in 0..total {
            if seen[start] {
                continue;
            }
            let p = point_coords(start, 3, q);
            let mut line: Vec<u32> = (0..q as u8)
                .map(|t| {
                    let pt = [
                        gf.add(p[0], gf.mul(t, d[0])),
                        gf.add(p[1], gf.mul(t, d[1])),
                        gf.add(p[2], gf.mul(t, d[2])),
                    ];
                    point_index(&pt, q) as u32
                })
                .collect();
            line.sort_unstable();
            for &pt in &line {
                seen[pt as usize] = true;
            }
            lines.push(line);
        }
        debug_assert_eq!(lines.len(), qs * qs);
        classes.push(ParallelClass { direction: d, lines });
    }
    Ok(LineSystem { q, classes })
}

/// Labeling of AG(3,q) points by AG(2,q) points whose fibers are the lines
/// of one parallel class: project along the normalized direction and drop
/// its pivot coordinate.
#[derive(Debug, Clone)]
pub struct QuotientLabeling {
    pub q: u16,
    pub direction: [u8; 3],
    /// label[point index in AG(3,q)] = point index in AG(2,q)
    pub label: Vec<u32>,
}

pub fn quotient_labeling(q: u16, direction: [u8; 3]) -> Result<QuotientLabeling> {
    let gf = Gf::new(q)?;
    if direction == [0, 0, 0] {
        return Err(Error::ZeroDirection);
    }
    let pivot = direction.iter().position(|&x| x != 0).unwrap();
    let scale = gf.inv(direction[pivot])?;
    let d: Vec<u8> = direction.iter().map(|&x| gf.mul(scale, x)).collect();
    let qs = q as usize;
    let label = (0..qs * qs * qs)
        .map(|idx| {
            let p = point_coords(idx, 3, q);
            let t = p[pivot];
            // p + t*d has zero pivot coordinate; drop it.
            let mut proj = [0u8; 2];
            let mut slot = 0;
            for i in 0..3 {
                if i == pivot {
                    continue;
                }
                proj[slot] = gf.add(p[i], gf.mul(t, d[i]));
                slot += 1;
            }
            point_index(&proj, q) as u32
        })
        .collect();
    Ok(QuotientLabeling {
        q,
        direction,
        label,
    })
}

/// A Denniston maximal arc of degree q/2 in AG(2,q), together with the
/// quadratic form and additive subgroup that define it.
#[derive(Debug, Clone)]
pub struct DennistonArc {
    pub q: u16,
    /// Q(x,y) = x^2 + b*xy + c*y^2
    pub form_b: u8,
    pub form_c: u8,
    /// Additive subgroup A of GF(q), |A| = q/2; the arc is {p : Q(p) in A}.
    pub subgroup: Vec<u8>,
    /// Sorted AG(2,q) point indices; |points| = q(q-1)/2.
    pub points: Vec<u32>,
}

/// All q(q+1) lines of AG(2,q) as sorted point-index sets.
pub fn ag2_lines(q: u16) -> Result<Vec<Vec<u32>>> {
    let gf = Gf::new(q)?;
    let qs = q as usize;
    let mut dirs = Vec::new();
    for idx in 1..qs * qs {
        let c = point_coords(idx, 2, q);
        let pivot = c.iter().position(|&x| x != 0).unwrap();
        if c[pivot] == 1 {
            dirs.push([c[0], c[1]]);
        }
    }
    let mut lines = Vec::with_capacity(qs * (qs + 1));
    for d in dirs {
        let mut seen = vec![false; qs * qs];
        for start in 0..qs * qs {
            if seen[start] {
                continue;
            }
            let p = point_coords(start, 2, q);
            let mut line: Vec<u32> = (0..q as u8)
                .map(|t| {
                    let pt = [gf.add(p[0], gf.mul(t, d[0])), gf.add(p[1], gf.mul(t, d[1]))];
                    point_index(&pt, q) as u32
                })
                .collect();
            line.sort_unstable();
            for &pt in &line {
                seen[pt as usize] = true;
            }
            lines.push(line);
        }
    }
    Ok(lines)
}

/// First (lexicographically) anisotropic monic binary quadratic form
/// Q(x,y) = x^2 + b*xy + c*y^2 over GF(q).
fn anisotropic_form(gf: &Gf) -> (u8, u8) {
    let q = gf.q() as u8;
    for b in 0..q {
        for c in 0..q {
            let isotropic = (1..gf.q() as usize * gf.q() as usize).any(|idx| {
                let p = point_coords(idx, 2, gf.q());
                eval_form(gf, b, c, p[0], p[1]) == 0
            });
            if !isotropic {
                return (b, c);
            }
        }
    }
    unreachable!("an anisotropic binary quadratic form exists over every GF(2^m)");
}

#[inline]
fn eval_form(gf: &Gf, b: u8, c: u8, x: u8, y: u8) -> u8 {
    let xx = gf.mul(x, x);
    let xy = gf.mul(b, gf.mul(x, y));
    let yy = gf.mul(c, gf.mul(y, y));
    xx ^ xy ^ yy
}

/// Additive subgroup of GF(q) of order q/2 generated greedily by the
/// lexicographically smallest elements.
fn half_subgroup(q: u16) -> Vec<u8> {
    let target = q as usize / 2;
    let mut span = vec![0u8];
    for cand in 1..q as u8 {
        if span.len() == target {
            break;
        }
        if span.contains(&cand) {
            continue;
        }
        let mut next = span.clone();
        for &s in &span {
            next.push(s ^ cand);
        }
        span = next;
    }
    span.sort_unstable();
    debug_assert_eq!(span.len(), target);
    span
}

/// Build the degree-q/2 Denniston arc in AG(2,q) and verify the
/// maximal-arc property (every line meets it in 0 or q/2 points)
/// exhaustively before returning.
pub fn denniston_arc(q: u16) -> Result<DennistonArc> {
    if q != 4 && q != 8 {
        return Err(Error::UnsupportedParameter(format!(
            "denniston_arc requires q in {{4, 8}}, got {q}"
        )));
    }
    let gf = Gf::new(q)?;
    let (form_b, form_c) = anisotropic_form(&gf);
    let subgroup = half_subgroup(q);
    let qs = q as usize;
    let points: Vec<u32> = (0..qs * qs)
        .filter(|&idx| {
            let p = point_coords(idx, 2, q);
            subgroup.contains(&eval_form(&gf, form_b, form_c, p[0], p[1]))
        })
        .map(|idx| idx as u32)
        .collect();
    let expected = qs * (qs - 1) / 2;
    if points.len() != expected {
        return Err(Error::ArcVerification {
            q,
            line: Vec::new(),
            got: points.len(),
            degree: expected,
        });
    }
    let degree = qs / 2;
    for line in ag2_lines(q)? {
        let hits = line.iter().filter(|p| points.binary_search(p).is_ok()).count();
        if hits != 0 && hits != degree {
            return Err(Error::ArcVerification {
                q,
                line,
                got: hits,
                degree,
            });
        }
    }
    Ok(DennistonArc {
        q,
        form_b,
        form_c,
        subgroup,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elems(q: u16) -> Vec<FieldElem> {
        let m = degree_of(q).unwrap();
        (0..q as u8).map(|v| FieldElem::new(v, m).unwrap()).collect()
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [2u16, 4, 8] {
            let es = elems(q);
            for &a in &es {
                assert_eq!(a.add(a).unwrap().value(), 0, "char 2");
                for &b in &es {
                    assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                    assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                    for &c in &es {
                        assert_eq!(
                            a.mul(b.add(c).unwrap()).unwrap(),
                            a.mul(b).unwrap().add(a.mul(c).unwrap()).unwrap(),
                            "distributivity in GF({q})"
                        );
                        assert_eq!(
                            a.mul(b).unwrap().mul(c).unwrap(),
                            a.mul(b.mul(c).unwrap()).unwrap(),
                            "associativity in GF({q})"
                        );
                    }
                }
                if a.value() != 0 {
                    assert_eq!(a.mul(a.inv().unwrap()).unwrap().value(), 1);
                }
            }
        }
    }

    #[test]
    fn fixed_modulus_products() {
        // GF(4): alpha * alpha = alpha + 1, forced by x^2+x+1.
        let a = FieldElem::new(2, 2).unwrap();
        assert_eq!(a.mul(a).unwrap().value(), 3);
        // GF(8): x * x^2 = x + 1, forced by x^3+x+1.
        let x = FieldElem::new(2, 3).unwrap();
        let x2 = FieldElem::new(4, 3).unwrap();
        assert_eq!(x.mul(x2).unwrap().value(), 3);
        // GF(4): inv(alpha+1) = alpha.
        let a1 = FieldElem::new(3, 2).unwrap();
        assert_eq!(a1.inv().unwrap().value(), 2);
    }

    #[test]
    fn mismatched_degrees_rejected() {
        let a = FieldElem::new(1, 2).unwrap();
        let b = FieldElem::new(1, 3).unwrap();
        assert!(matches!(a.add(b), Err(Error::FieldMismatch(2, 3))));
        assert!(matches!(
            FieldElem::new(0, 2).unwrap().inv(),
            Err(Error::ZeroInverse(4))
        ));
    }

    #[test]
    fn point_counts_and_order() {
        assert_eq!(ag_points(2, 4).unwrap().len(), 16);
        assert_eq!(ag_points(3, 4).unwrap().len(), 64);
        assert_eq!(ag_points(3, 8).unwrap().len(), 512);
        assert!(matches!(ag_points(4, 4), Err(Error::UnsupportedDimension(4))));
        // index round trip
        for idx in 0..64 {
            let c = point_coords(idx, 3, 4);
            assert_eq!(point_index(&c, 4), idx);
        }
    }

    #[test]
    fn ag3_line_system_counts() {
        let ls = ag3_lines(4).unwrap();
        assert_eq!(ls.classes.len(), 21);
        assert!(ls.classes.iter().all(|c| c.lines.len() == 16));
        assert_eq!(ls.line_count(), 336);

        let ls2 = ag3_lines(2).unwrap();
        assert_eq!(ls2.classes.len(), 7);
        assert_eq!(ls2.line_count(), 28);
    }

    #[test]
    fn every_pair_on_exactly_one_line() {
        for q in [2u16, 4] {
            let ls = ag3_lines(q).unwrap();
            let total = (q as usize).pow(3);
            let mut pair_count = vec![0u32; total * total];
            for class in &ls.classes {
                let mut covered = vec![false; total];
                for line in &class.lines {
                    assert_eq!(line.len(), q as usize);
                    for &p in line {
                        assert!(!covered[p as usize], "class must partition the points");
                        covered[p as usize] = true;
                    }
                    for i in 0..line.len() {
                        for j in i + 1..line.len() {
                            pair_count[line[i] as usize * total + line[j] as usize] += 1;
                        }
                    }
                }
                assert!(covered.iter().all(|&c| c));
            }
            for i in 0..total {
                for j in i + 1..total {
                    assert_eq!(pair_count[i * total + j], 1, "pair ({i},{j}) at q={q}");
                }
            }
        }
    }

    #[test]
    fn quotient_labeling_fibers_are_lines() {
        let q = 4;
        let ls = ag3_lines(q).unwrap();
        for class in &ls.classes {
            let lab = quotient_labeling(q, class.direction).unwrap();
            let mut labels = std::collections::HashSet::new();
            for line in &class.lines {
                let l0 = lab.label[line[0] as usize];
                assert!(line.iter().all(|&p| lab.label[p as usize] == l0));
                assert!(labels.insert(l0), "labels must differ across lines");
            }
            assert_eq!(labels.len(), 16);
        }
    }

    #[test]
    fn quotient_labeling_translation_invariance() {
        let q = 4;
        let gf = Gf::new(q).unwrap();
        let d = [0u8, 1, 2];
        let lab = quotient_labeling(q, d).unwrap();
        for idx in 0..64 {
            let p = point_coords(idx, 3, q);
            let shifted = [gf.add(p[0], d[0]), gf.add(p[1], d[1]), gf.add(p[2], d[2])];
            assert_eq!(lab.label[idx], lab.label[point_index(&shifted, q)]);
        }
        assert!(matches!(
            quotient_labeling(4, [0, 0, 0]),
            Err(Error::ZeroDirection)
        ));
    }

    #[test]
    fn denniston_arc_q4() {
        let arc = denniston_arc(4).unwrap();
        assert_eq!(arc.points.len(), 6);
        // origin is in the arc: Q(0,0) = 0 lies in the subgroup
        assert_eq!(arc.points[0], 0);
        let lines = ag2_lines(4).unwrap();
        assert_eq!(lines.len(), 20);
        for line in lines {
            let hits = line.iter().filter(|p| arc.points.contains(p)).count();
            assert!(hits == 0 || hits == 2, "line {line:?} hits {hits}");
        }
    }

    #[test]
    fn denniston_arc_q8() {
        let arc = denniston_arc(8).unwrap();
        assert_eq!(arc.points.len(), 28);
        assert_eq!(arc.points[0], 0);
        for line in ag2_lines(8).unwrap() {
            let hits = line.iter().filter(|p| arc.points.contains(p)).count();
            assert!(hits == 0 || hits == 4);
        }
        assert!(denniston_arc(2).is_err());
    }
}
