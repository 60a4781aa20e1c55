//! Dense bit-packed matrices over GF(2).
//!
//! Rows are stored as contiguous `u64` words. This is the carrier for
//! incidence matrices, generator matrices and adjacency matrices; the
//! pairwise sweeps elsewhere in the crate reduce to AND + popcount over
//! row slices.

/// Number of 64-bit words needed for `bits` bits.
#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// Popcount of `a & b`.
#[inline]
pub fn and_weight(a: &[u64], b: &[u64]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// Parity of `<a, b>` over GF(2).
#[inline]
pub fn dot2(a: &[u64], b: &[u64]) -> bool {
    and_weight(a, b) % 2 == 1
}

/// Popcount of a row slice.
#[inline]
pub fn weight(a: &[u64]) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

#[inline]
pub fn xor_into(dst: &mut [u64], src: &[u64]) {
    debug_assert_eq!(dst.len(), src.len());
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let wpr = words_for(cols);
        BitMatrix {
            rows,
            cols,
            wpr,
            data: vec![0; rows * wpr],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row(r)[c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let wpr = self.wpr;
        let w = &mut self.data[r * wpr + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row_weight(&self, r: usize) -> usize {
        weight(self.row(r))
    }

    /// Two distinct rows of `self` and `other`, borrowable simultaneously.
    pub fn two_rows(&self, a: usize, b: usize) -> (&[u64], &[u64]) {
        (self.row(a), self.row(b))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let wpr = self.wpr;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * wpr);
        head[lo * wpr..(lo + 1) * wpr].swap_with_slice(&mut tail[..wpr]);
    }

    /// XOR row `src` into row `dst`.
    pub fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let wpr = self.wpr;
        let (lo, hi) = if dst < src { (dst, src) } else { (src, dst) };
        let (head, tail) = self.data.split_at_mut(hi * wpr);
        let low = &mut head[lo * wpr..(lo + 1) * wpr];
        let high = &mut tail[..wpr];
        if dst < src {
            xor_into(low, high);
        } else {
            xor_into(high, low);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            for (w, &word) in row.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let c = w * 64 + bits.trailing_zeros() as usize;
                    t.set(c, r, true);
                    bits &= bits - 1;
                }
            }
        }
        t
    }

    /// In-place reduction to reduced row echelon form over GF(2).
    /// Returns the pivot columns in increasing order; the rank is their count.
    /// Rows below the rank are zero afterwards.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(pivot_row) = (rank..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(rank, pivot_row);
            for r in 0..self.rows {
                if r != rank && self.get(r, c) {
                    self.xor_rows(r, rank);
                }
            }
            pivots.push(c);
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        pivots
    }

    /// Iterate the column indices of the set bits in row `r`.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.row(r).iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                out.push(w * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_roundtrip() {
        let mut m = BitMatrix::zero(3, 130);
        m.set(0, 0, true);
        m.set(1, 64, true);
        m.set(2, 129, true);
        assert!(m.get(0, 0) && m.get(1, 64) && m.get(2, 129));
        assert!(!m.get(0, 1));
        m.set(2, 129, false);
        assert!(!m.get(2, 129));
    }

    #[test]
    fn transpose_involution() {
        let mut m = BitMatrix::zero(5, 70);
        for (r, c) in [(0, 0), (1, 65), (4, 69), (2, 33), (3, 1)] {
            m.set(r, c, true);
        }
        assert_eq!(m.transpose().transpose(), m);
        assert!(m.transpose().get(65, 1));
    }

    #[test]
    fn rref_identity_rank() {
        let mut m = BitMatrix::zero(4, 4);
        for i in 0..4 {
            m.set(i, i, true);
        }
        assert_eq!(m.rref(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn rref_dependent_rows() {
        // rows: 110, 011, 101 (third = first + second)
        let mut m = BitMatrix::zero(3, 3);
        for (r, c) in [(0, 0), (0, 1), (1, 1), (1, 2), (2, 0), (2, 2)] {
            m.set(r, c, true);
        }
        let pivots = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.row_weight(2), 0);
        // reduced form: 101, 011
        assert_eq!(m.row_support(0), vec![0, 2]);
        assert_eq!(m.row_support(1), vec![1, 2]);
    }

    #[test]
    fn and_weight_counts() {
        let mut a = BitMatrix::zero(2, 128);
        a.set(0, 3, true);
        a.set(0, 100, true);
        a.set(1, 100, true);
        let (r0, r1) = a.two_rows(0, 1);
        assert_eq!(and_weight(r0, r1), 1);
        assert!(dot2(r0, r1));
    }
}
