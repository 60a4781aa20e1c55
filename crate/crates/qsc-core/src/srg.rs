//! Strongly regular graphs from projective two-weight codes, and the
//! SRG(v,k,lambda,lambda) -> symmetric design identification.

use std::io::Write;
use std::path::Path;

use crate::bits::{and_weight, BitMatrix};
use crate::design::{verify_design, IncidenceStructure};
use crate::error::Error;
use crate::f2code::{weight_distribution, PrimeFieldCode};
use crate::Result;

/// Parameters (v, K, lambda, mu) of a strongly regular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct SrgParams {
    pub v: u64,
    pub k: u64,
    pub lambda: i64,
    pub mu: i64,
}

impl SrgParams {
    /// Standard feasibility identity K(K - lambda - 1) = (v - K - 1) mu.
    pub fn feasibility_holds(&self) -> bool {
        let k = self.k as i64;
        (self.v as i64 - k - 1) * self.mu == k * (k - self.lambda - 1)
    }
}

/// Simple graph as a packed symmetric adjacency matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: BitMatrix,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        Graph {
            n,
            adj: BitMatrix::zero(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert_ne!(a, b, "no loops");
        self.adj.set(a, b, true);
        self.adj.set(b, a, true);
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj.get(a, b)
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adj.row_weight(a)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut found = 1;
        while let Some(u) = stack.pop() {
            for w in self.adj.row_support(u) {
                if !seen[w] {
                    seen[w] = true;
                    found += 1;
                    stack.push(w);
                }
            }
        }
        found == self.n
    }

    /// Exhaustive strong-regularity check over all vertex pairs.
    /// Returns the verified parameters or a reason for failure.
    pub fn srg_params(&self) -> Result<SrgParams> {
        if self.n < 2 {
            return Err(Error::NotStronglyRegular("fewer than two vertices".into()));
        }
        let k = self.degree(0);
        for u in 1..self.n {
            if self.degree(u) != k {
                return Err(Error::NotStronglyRegular(format!(
                    "vertex {u} has degree {} but vertex 0 has degree {k}",
                    self.degree(u)
                )));
            }
        }
        let mut lambda: Option<usize> = None;
        let mut mu: Option<usize> = None;
        for u in 0..self.n {
            for w in u + 1..self.n {
                let (ru, rw) = self.adj.two_rows(u, w);
                let common = and_weight(ru, rw);
                let slot = if self.adjacent(u, w) { &mut lambda } else { &mut mu };
                match slot {
                    None => *slot = Some(common),
                    Some(x) if *x == common => {}
                    Some(x) => {
                        return Err(Error::NotStronglyRegular(format!(
                            "pair ({u},{w}) has {common} common neighbours, expected {x}"
                        )))
                    }
                }
            }
        }
        let (Some(lambda), Some(mu)) = (lambda, mu) else {
            return Err(Error::NotStronglyRegular(
                "graph is complete or empty; lambda and mu are not both determined".into(),
            ));
        };
        Ok(SrgParams {
            v: self.n as u64,
            k: k as u64,
            lambda: lambda as i64,
            mu: mu as i64,
        })
    }
}

/// SRG parameters of the graph built from a projective two-weight
/// [n,k]_q code with weights w1 < w2, by the standard formulas;
/// both expressions for mu are evaluated and must agree.
pub fn tw_srg_params(n: usize, k: usize, q: u8, w1: u32, w2: u32) -> Result<SrgParams> {
    if w1 >= w2 {
        return Err(Error::WeightOrder(w1, w2));
    }
    let qn = q as i64;
    let v = (qn as u64).pow(k as u32);
    let cap_k = n as i64 * (qn - 1);
    let (w1, w2) = (w1 as i64, w2 as i64);
    let lambda =
        cap_k * cap_k + 3 * cap_k - qn * (w1 + w2) - cap_k * qn * (w1 + w2) + qn * qn * w1 * w2;
    let mu_quadratic = cap_k * cap_k + cap_k - cap_k * qn * (w1 + w2) + qn * qn * w1 * w2;
    // mu = w1 w2 q^(2-k), evaluated exactly: w1 w2 q^2 must be divisible
    // by q^k.
    let numerator = w1 as i128 * w2 as i128 * (qn as i128) * (qn as i128);
    let denominator = (qn as i128).pow(k as u32);
    let mu_direct = if numerator % denominator == 0 {
        Some((numerator / denominator) as i64)
    } else {
        None
    };
    if mu_direct != Some(mu_quadratic) {
        return Err(Error::MuMismatch {
            direct: mu_direct,
            quadratic: mu_quadratic,
        });
    }
    Ok(SrgParams {
        v,
        k: cap_k as u64,
        lambda,
        mu: mu_quadratic,
    })
}

/// Build the graph on the codewords of a projective two-weight code,
/// adjacent iff their distance is the smaller weight. The empirical
/// strong-regularity check always runs and must match the formula
/// parameters exactly.
pub fn srg_from_code(c: &PrimeFieldCode) -> Result<(Graph, SrgParams)> {
    let dist = weight_distribution(c, crate::f2code::DEFAULT_MAX_ENUM_DIM)?;
    let nonzero: Vec<u32> = dist.iter().map(|&(w, _)| w).filter(|&w| w != 0).collect();
    if nonzero.len() != 2 {
        return Err(Error::NotTwoWeight(nonzero));
    }
    if !c.is_projective() {
        return Err(Error::NotProjective(format!(
            "[{},{}] code has dual distance < 3",
            c.n(),
            c.k()
        )));
    }
    let (w1, w2) = (nonzero[0], nonzero[1]);
    let expected = tw_srg_params(c.n(), c.k(), c.p(), w1, w2)?;
    let p = c.p() as usize;
    let total = p.pow(c.k() as u32);
    if total as u64 > 1 << 20 {
        return Err(Error::VertexBudget(total as u64));
    }

    // weight of the codeword of every message, message index ascending
    let weights = message_weights(c, total);
    let mut graph = Graph::new(total);
    for m in 0..total {
        for m2 in m + 1..total {
            let diff = message_diff(m, m2, p, c.k());
            if weights[diff] == w1 as u16 {
                graph.add_edge(m, m2);
            }
        }
    }
    let empirical = graph.srg_params()?;
    if empirical != expected {
        return Err(Error::SrgMismatch {
            expected: (expected.v, expected.k, expected.lambda, expected.mu),
            found: (empirical.v, empirical.k, empirical.lambda, empirical.mu),
        });
    }
    debug_assert!(empirical.feasibility_holds());
    Ok((graph, empirical))
}

fn message_weights(c: &PrimeFieldCode, total: usize) -> Vec<u16> {
    let p = c.p() as usize;
    let mut weights = vec![0u16; total];
    let mut cw = vec![0u8; c.n()];
    // odometer over messages in index order
    let mut digits = vec![0u8; c.k()];
    for (m, slot) in weights.iter_mut().enumerate() {
        if m > 0 {
            for (pos, digit) in digits.iter_mut().enumerate() {
                for (x, &r) in cw.iter_mut().zip(&c.generator()[pos]) {
                    *x = (*x + r) % c.p();
                }
                *digit += 1;
                if *digit as usize == p {
                    *digit = 0;
                } else {
                    break;
                }
            }
        }
        *slot = cw.iter().filter(|&&x| x != 0).count() as u16;
    }
    weights
}

/// Message index of the digitwise difference m - m2 mod p.
fn message_diff(m: usize, m2: usize, p: usize, k: usize) -> usize {
    if p == 2 {
        return m ^ m2;
    }
    let mut out = 0;
    let mut place = 1;
    let (mut a, mut b) = (m, m2);
    for _ in 0..k {
        let d = (a % p + p - b % p) % p;
        out += d * place;
        place *= p;
        a /= p;
        b /= p;
    }
    out
}

/// Reinterpret the adjacency matrix of an SRG with lambda = mu as the
/// block-by-point incidence matrix of a symmetric 2-design, verified.
pub fn graph_to_symmetric_design(g: &Graph, params: &SrgParams) -> Result<IncidenceStructure> {
    if params.lambda != params.mu {
        return Err(Error::LambdaMuDiffer(params.lambda, params.mu));
    }
    let blocks: Vec<Vec<u32>> = (0..g.n())
        .map(|u| g.adjacency().row_support(u).iter().map(|&x| x as u32).collect())
        .collect();
    let inc = IncidenceStructure::new(g.n(), blocks)?;
    let p = verify_design(&inc, 2).map_err(|e| Error::BaseDesign(Box::new(e)))?;
    if p.b != p.v || p.k as u64 != params.k || p.lambda != params.lambda as u64 {
        return Err(Error::BaseDesign(Box::new(Error::NotBalanced {
            t: 2,
            subset: vec![],
            expected: params.lambda as usize,
            got: p.lambda as usize,
        })));
    }
    Ok(inc)
}

/// Adjacency-list text export: `GRAPH 1`, `n=<int>`, then one line
/// `i: j1 j2 ...` per vertex with neighbours ascending.
pub fn write_graph(g: &Graph, path: &Path) -> Result<()> {
    let mut out = format!("GRAPH 1\nn={}\n", g.n());
    for u in 0..g.n() {
        let neigh: Vec<String> = g
            .adjacency()
            .row_support(u)
            .iter()
            .map(|x| x.to_string())
            .collect();
        out.push_str(&format!("{u}: {}\n", neigh.join(" ")));
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
mod tests {
    use super::*;
    use crate::f2code::analyze;

    #[test]
    fn example_formula_values() {
        let p = tw_srg_params(28, 6, 2, 12, 16).unwrap();
        assert_eq!(
            p,
            SrgParams {
                v: 64,
                k: 28,
                lambda: 12,
                mu: 12
            }
        );
        assert!(p.feasibility_holds());
        assert!(matches!(
            tw_srg_params(28, 6, 2, 16, 12),
            Err(Error::WeightOrder(16, 12))
        ));
    }

    #[test]
    fn one_weight_code_rejected() {
        // simplex [7,3]: all nonzero words have weight 4
        let rows: Vec<Vec<i64>> = vec![
            vec![1, 0, 0, 1, 1, 0, 1],
            vec![0, 1, 0, 1, 0, 1, 1],
            vec![0, 0, 1, 0, 1, 1, 1],
        ];
        let c = PrimeFieldCode::span(&rows, 7, 2).unwrap();
        assert!(matches!(srg_from_code(&c), Err(Error::NotTwoWeight(_))));
    }

    #[test]
    fn non_projective_two_weight_rejected() {
        // duplicated pair of columns: weights {2,4}, dual distance 2
        let rows: Vec<Vec<i64>> = vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]];
        let c = PrimeFieldCode::span(&rows, 4, 2).unwrap();
        let r = analyze(&c, 10).unwrap();
        assert!(r.two_weight);
        assert!(matches!(srg_from_code(&c), Err(Error::NotProjective(_))));
    }

    #[test]
    fn petersen_parameters_rejected_as_design() {
        let g = Graph::new(3);
        let params = SrgParams {
            v: 10,
            k: 3,
            lambda: 0,
            mu: 1,
        };
        assert!(matches!(
            graph_to_symmetric_design(&g, &params),
            Err(Error::LambdaMuDiffer(0, 1))
        ));
    }

    #[test]
    fn pentagon_is_srg() {
        let mut g = Graph::new(5);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
        }
        let p = g.srg_params().unwrap();
        assert_eq!(
            p,
            SrgParams {
                v: 5,
                k: 2,
                lambda: 0,
                mu: 1
            }
        );
        assert!(g.is_connected());
        assert!(p.feasibility_holds());
    }

    #[test]
    fn path_is_not_srg() {
        let mut g = Graph::new(4);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 3);
        assert!(matches!(g.srg_params(), Err(Error::NotStronglyRegular(_))));
    }
}
