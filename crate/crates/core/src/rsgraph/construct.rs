use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ratio, serialize_rational, Rational};

use super::graph::Graph;

/// Largest vertex count `Λ^z` that [`rs_construct`] will enumerate.
pub const RS_VERTEX_CAP: u64 = 4096;

/// Vertices `{0..Λ-1}^z`; edges join vectors whose squared distance lies
/// within `z` of its mean `μ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RsConstructionParams {
    lambda: u32,
    z: u32,
}

impl RsConstructionParams {
    /// Requires `Λ ≥ 2` and `z` even with `z ≥ 2Λ`.
    pub fn new(lambda: u32, z: u32) -> Result<Self> {
        if lambda < 2 {
            return Err(Error::InvalidParams(format!("Λ must be ≥ 2, got {lambda}")));
        }
        if z % 2 != 0 || z < 2 * lambda {
            return Err(Error::InvalidParams(format!(
                "z must be even and ≥ 2Λ = {}, got {z}",
                2 * lambda
            )));
        }
        Ok(Self { lambda, z })
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    /// `n = Λ^z`, if it fits in a `u64`.
    pub fn vertices(&self) -> Option<u64> {
        (self.lambda as u64).checked_pow(self.z)
    }

    /// `Σ_{a,b∈[Λ]} (a-b)²`.
    fn pair_sum(&self) -> u64 {
        let l = self.lambda as i64;
        (0..l)
            .flat_map(|a| (0..l).map(move |b| ((a - b) * (a - b)) as u64))
            .sum()
    }

    /// `μ = E‖x-y‖² = z·Σ(a-b)²/Λ²` over uniform vertex pairs.
    pub fn mu(&self) -> Rational {
        ratio(
            (self.z as u64 * self.pair_sum()) as i64,
            (self.lambda as i64).pow(2),
        )
    }
}

fn digits(mut index: u64, lambda: u64, z: usize) -> Vec<i64> {
    let mut out = vec![0; z];
    for d in out.iter_mut().rev() {
        *d = (index % lambda) as i64;
        index /= lambda;
    }
    out
}

/// Enumerates the graph; vertex `i` is the base-`Λ` expansion of `i`.
pub fn rs_construct(params: &RsConstructionParams) -> Result<Graph> {
    let n = match params.vertices() {
        Some(n) if n <= RS_VERTEX_CAP => n as usize,
        other => {
            return Err(Error::TooLarge {
                what: "RS vertex set",
                size: other.map_or_else(
                    || format!("{}^{}", params.lambda, params.z),
                    |n| n.to_string(),
                ),
                cap: RS_VERTEX_CAP,
            })
        }
    };
    let lambda = params.lambda as i64;
    let z = params.z as i64;
    // |d² - z·S/Λ²| ≤ z  ⇔  |d²·Λ² - z·S| ≤ z·Λ²
    let scaled_mu = z * params.pair_sum() as i64;
    let scaled_tol = z * lambda * lambda;
    let points: Vec<Vec<i64>> = (0..n as u64)
        .map(|i| digits(i, lambda as u64, params.z as usize))
        .collect();
    let mut graph = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            let d2: i64 = points[u]
                .iter()
                .zip(&points[v])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if (d2 * lambda * lambda - scaled_mu).abs() <= scaled_tol {
                graph.add_edge(u, v)?;
            }
        }
    }
    Ok(graph)
}

/// `n(1 - 2n^{-1/(2Λ⁴ ln Λ)})`.
pub fn degree_lower_bound(lambda: f64, vertices: f64) -> f64 {
    vertices * (1.0 - 2.0 * vertices.powf(-1.0 / (2.0 * lambda.powi(4) * lambda.ln())))
}

/// Cache-size formula `2m·n^{-1/(2Λ⁴ ln Λ)}` and whether it fits in `m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MemoryBound {
    pub formula: f64,
    pub feasible: bool,
    /// Exact `m(n - d_min)/n` when a graph was supplied.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_opt_rational")]
    pub graph_required: Option<Rational>,
}

fn serialize_opt_rational<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => serialize_rational(r, s),
        None => s.serialize_none(),
    }
}

pub fn rs_memory_bound(params: &RsConstructionParams, files: usize, graph: Option<&Graph>) -> MemoryBound {
    let lambda = params.lambda as f64;
    let n = lambda.powi(params.z as i32);
    let formula = 2.0 * files as f64 * n.powf(-1.0 / (2.0 * lambda.powi(4) * lambda.ln()));
    MemoryBound {
        formula,
        feasible: formula <= files as f64,
        graph_required: graph.map(|g| super::scheme::graph_memory(g, files)),
    }
}

/// Leading-order exponents of the construction, `o(1)` terms dropped.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RsAsymptotics {
    pub lambda: f64,
    /// `δ = 2 ln 10.5 / ln Λ`.
    pub delta: f64,
    /// `τ ≈ n^f` with `f = 1 + δ`.
    pub f: f64,
    /// Each matching family misses at most `n^k` edges, `k = 2 - 1/(2Λ⁴ ln Λ)`.
    pub k: f64,
    /// `log_Λ τ = z·f`.
    pub tau_exponent: f64,
    /// Exponent `2Λ⁴(ln Λ - 2 ln 10.5)` of `2m/M` in the uncoded gap.
    pub gap_exponent: f64,
}

pub fn rs_asymptotics(lambda: f64, z: f64) -> RsAsymptotics {
    let ln = lambda.ln();
    let delta = 2.0 * 10.5f64.ln() / ln;
    let f = 1.0 + delta;
    RsAsymptotics {
        lambda,
        delta,
        f,
        k: 2.0 - 1.0 / (2.0 * lambda.powi(4) * ln),
        tau_exponent: z * f,
        gap_exponent: 2.0 * lambda.powi(4) * (ln - 2.0 * 10.5f64.ln()),
    }
}

/// Uncoded-to-RS rate ratio `(2γ-1)/(2γ)·(2m/M)^{gap exponent}·(1 - M/m)`.
pub fn rs_uncoded_gap(lambda: f64, gamma: f64, memory_ratio: f64) -> f64 {
    let a = rs_asymptotics(lambda, 0.0);
    (2.0 * gamma - 1.0) / (2.0 * gamma) * (2.0 / memory_ratio).powf(a.gap_exponent) * (1.0 - memory_ratio)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_construction_is_complete() {
        let p = RsConstructionParams::new(2, 4).unwrap();
        assert_eq!(p.mu(), ratio(2, 1));
        let g = rs_construct(&p).unwrap();
        assert_eq!(g, Graph::complete(16));
        let bound = degree_lower_bound(2.0, 16.0);
        assert!((0..16).all(|v| g.degree(v) as f64 >= bound));
    }

    #[test]
    fn parameter_checks() {
        assert!(RsConstructionParams::new(1, 4).is_err());
        assert!(RsConstructionParams::new(3, 5).is_err());
        assert!(RsConstructionParams::new(3, 4).is_err());
        assert!(rs_construct(&RsConstructionParams::new(3, 8).unwrap()).is_err());
    }

    #[test]
    fn mu_for_three_symbols() {
        // Σ(a-b)² over {0,1,2}² = 12
        let p = RsConstructionParams::new(3, 6).unwrap();
        assert_eq!(p.mu(), ratio(6 * 12, 9));
    }

    #[test]
    fn calculators() {
        let crossover = 10.5f64 * 10.5;
        let a = rs_asymptotics(crossover, 4.0);
        assert!((a.delta - 1.0).abs() < 1e-12);
        assert!((a.f - 1.0 - a.delta).abs() < 1e-15);
        assert!(rs_asymptotics(crossover * 0.99, 4.0).gap_exponent < 0.0);
        assert!(rs_asymptotics(crossover * 1.01, 4.0).gap_exponent > 0.0);
        let m = rs_memory_bound(&RsConstructionParams::new(2, 4).unwrap(), 10, None);
        assert!((m.formula / 10.0 - 1.765).abs() < 1e-3);
        assert!(!m.feasible);
    }
}
