//! Local independent-set rules and density estimates.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ball, GroupCtx, Window};
use crate::instances::GraphInstance;
use crate::local_rule::{check_limit, gather, ClopenSet};
use crate::rational::Rational;
use crate::rng;

const SAMPLE_CHUNK: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub std_error: f64,
    pub samples: u64,
    pub rule_id: String,
    pub instance_id: String,
    pub seed: u64,
}

impl DensityEstimate {
    /// From the number of hits among `samples` Bernoulli trials.
    pub fn from_hits(hits: u64, samples: u64, seed: u64) -> Self {
        assert!(samples >= 1, "at least one sample is required");
        let n = samples as f64;
        let mean = hits as f64 / n;
        let var = if samples > 1 {
            mean * (1.0 - mean) * n / (n - 1.0)
        } else {
            0.0
        };
        DensityEstimate {
            mean,
            std_error: (var / n).sqrt(),
            samples,
            rule_id: String::new(),
            instance_id: String::new(),
            seed,
        }
    }

    pub fn with_ids(mut self, rule_id: impl Into<String>, instance_id: impl Into<String>) -> Self {
        self.rule_id = rule_id.into();
        self.instance_id = instance_id.into();
        self
    }
}

/// The points whose ball pattern, read as an integer with the identity as
/// most significant bit, strictly beats that of every `F ∪ F⁻¹`-neighbor.
pub fn hashmax_rule(ctx: GroupCtx, f: &Window, radius: usize, limit: usize) -> Result<ClopenSet> {
    if f.ctx() != ctx {
        return Err(Error::ContextMismatch(ctx, f.ctx()));
    }
    if f.contains_identity() {
        return Err(Error::IdentityInF);
    }
    let b = ball(ctx, radius, &ctx.generators())?;
    let neighbors = f.union(&f.inverse())?;
    let mut window = b.clone();
    for sigma in &neighbors {
        window = window.union(&b.right_translate(sigma)?)?;
    }
    check_limit(window.len(), limit)?;
    let width = b.len();
    let own: Vec<usize> = b
        .iter()
        .map(|e| window.index_of(e).expect("ball in window"))
        .collect();
    // (σ·x)(β) = x(βσ)
    let shifted = neighbors
        .iter()
        .map(|sigma| {
            b.iter()
                .map(|e| {
                    Ok(window
                        .index_of(&e.mul(sigma)?)
                        .expect("translate in window"))
                })
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    // canonical order starts at the identity, which becomes the top bit
    let value = |p: u64, pos: &[usize]| gather(p, pos).reverse_bits() >> (64 - width);
    let patterns: Vec<u64> = (0..1u64 << window.len())
        .filter(|&p| {
            let mine = value(p, &own);
            shifted.iter().all(|pos| mine > value(p, pos))
        })
        .collect();
    ClopenSet::new(window, patterns)
}

/// Monte Carlo estimate of `β(I)` from uniform window patterns.
pub fn estimate_density(set: &ClopenSet, samples: u64, seed: u64) -> Result<DensityEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParameters(
            "samples must be at least 1".into(),
        ));
    }
    let width = set.window().len();
    let mask = if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng::stream(seed, c);
            let len = SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK);
            (0..len)
                .filter(|_| set.contains_pattern(rng.random::<u64>() & mask))
                .count() as u64
        })
        .sum();
    Ok(DensityEstimate::from_hits(hits, samples, seed).with_ids("clopen", set.ctx().to_string()))
}

/// The result of iterated local-minimum selection.
#[derive(Clone, Debug, PartialEq)]
pub struct GreedyRun {
    pub set: Vec<usize>,
    /// Density after each executed round.
    pub density_by_round: Vec<f64>,
    pub estimate: DensityEstimate,
}

/// Each round draws fresh labels, selects every live vertex whose label is
/// below all live neighbors' labels, then retires the selected vertices and
/// their neighbors. Stops early once no vertex is live.
pub fn multiround_greedy(g: &GraphInstance, rounds: usize, seed: u64) -> Result<GreedyRun> {
    if rounds == 0 {
        return Err(Error::InvalidParameters("rounds must be at least 1".into()));
    }
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut live = vec![true; n];
    let mut chosen = vec![false; n];
    let mut density_by_round = Vec::new();
    for round in 0..rounds {
        if !live.iter().any(|&l| l) {
            break;
        }
        let mut rng = rng::stream(seed, round as u64);
        let labels: Vec<(u64, usize)> = (0..n).map(|v| (rng.random::<u64>(), v)).collect();
        let picked: Vec<usize> = (0..n)
            .filter(|&v| {
                live[v]
                    && adj[v]
                        .iter()
                        .all(|&u| u == v || !live[u] || labels[v] < labels[u])
            })
            .collect();
        for &v in &picked {
            chosen[v] = true;
            live[v] = false;
            for &u in &adj[v] {
                live[u] = false;
            }
        }
        density_by_round.push(chosen.iter().filter(|&&c| c).count() as f64 / n.max(1) as f64);
    }
    let set: Vec<usize> = (0..n).filter(|&v| chosen[v]).collect();
    if let Some(&(u, v)) = g
        .edges()
        .iter()
        .find(|&&(u, v)| chosen[u as usize] && chosen[v as usize])
    {
        return Err(Error::InvalidParameters(format!(
            "greedy selected both ends of edge {u}-{v}"
        )));
    }
    let estimate = DensityEstimate::from_hits(set.len() as u64, n.max(1) as u64, seed)
        .with_ids(format!("multiround:{rounds}"), "");
    Ok(GreedyRun {
        set,
        density_by_round,
        estimate,
    })
}

/// Expected density of one local-minimum round on a long cycle: a vertex is
/// chosen iff its label is the smallest of three, so the value is the
/// fraction of the 3! label orders that put it first.
pub fn single_round_cycle_density() -> Rational {
    let orders = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let wins = orders.iter().filter(|o| o[1] < o[0] && o[1] < o[2]).count();
    Rational::new(wins as i64, orders.len() as i64)
}

/// `ln d / d`, the leading term of the asymptotic independence ratio bound
/// for random `d`-regular graphs. An asymptotic reference only.
pub fn rv_reference(d: usize) -> f64 {
    let d = d as f64;
    d.ln() / d
}

/// One line of the density CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityRow {
    pub rule_id: String,
    pub instance_id: String,
    pub d: usize,
    pub samples: u64,
    pub mean: f64,
    pub stderr: f64,
    pub rv_reference: f64,
    /// Exact `k/ℓ` of the synthesized coloring, which equals `β(I)`.
    pub engine_ratio_inverse: Option<Rational>,
}

impl DensityRow {
    pub fn new(
        estimate: &DensityEstimate,
        d: usize,
        engine_ratio_inverse: Option<Rational>,
    ) -> Self {
        DensityRow {
            rule_id: estimate.rule_id.clone(),
            instance_id: estimate.instance_id.clone(),
            d,
            samples: estimate.samples,
            mean: estimate.mean,
            stderr: estimate.std_error,
            rv_reference: rv_reference(d),
            engine_ratio_inverse,
        }
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "rule_id",
    "instance_id",
    "d",
    "samples",
    "mean",
    "stderr",
    "rv_reference",
    "engine_ratio_inverse",
];

/// Rows with a header line, even when there are no rows.
pub fn rows_to_csv(rows: &[DensityRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(CSV_HEADER).map_err(fail)?;
    for r in rows {
        w.serialize(r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
