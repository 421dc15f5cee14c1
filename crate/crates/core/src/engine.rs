//! Turning an independent clopen set into an exact k-fold coloring.
//!
//! Properly color the auxiliary graph `H = G(X, DD⁻¹)` with `f: X → N`. For
//! every `φ: N → 2` the map `x ↦ (γ ↦ φ(f(γ·x)))` pulls `I` back to a set
//! `I_φ`. Because `f` is injective on every orbit window `D·x`, each vertex
//! lies in exactly `|Φ|·2^{N−|D|}` of the `2^N` sets.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoration::WeightedMeasure;
use crate::error::{Error, Result};
use crate::group::{ProductKind, Window};
use crate::instances::{girth, schreier_graph, GraphInstance, SchreierInstance};
use crate::local_rule::{is_independent, ClopenSet, DEFAULT_ENUMERATION_LIMIT};
use crate::rational::Rational;

pub const DEFAULT_N_CAP: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineOptions {
    /// Refuse palettes with more than this many colors.
    pub n_cap: usize,
    pub enumeration_limit: usize,
    /// Use the number of colors actually used instead of `|DD⁻¹|`.
    pub compact_colors: bool,
    /// Permit `F = ∅`, which makes every set independent.
    pub allow_empty_f: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            n_cap: DEFAULT_N_CAP,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
            compact_colors: false,
            allow_empty_f: false,
        }
    }
}

/// A proper coloring `f` of the auxiliary graph with palette `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxColoring {
    colors: Vec<u32>,
    n: usize,
}

impl AuxColoring {
    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Palette size `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colors_used(&self) -> usize {
        self.colors.iter().max().map_or(0, |&c| c as usize + 1)
    }

    /// Widens the palette without recoloring.
    pub fn with_palette(mut self, n: usize) -> Result<Self> {
        if n < self.colors_used() {
            return Err(Error::InvalidParameters(format!(
                "palette {n} is smaller than the {} colors in use",
                self.colors_used()
            )));
        }
        self.n = n;
        Ok(self)
    }

    pub fn is_proper(&self, g: &GraphInstance) -> bool {
        g.edges()
            .iter()
            .all(|&(u, v)| u == v || self.colors[u as usize] != self.colors[v as usize])
    }
}

/// `G(X, DD⁻¹)`: `u ~ w·u` for `w ∈ DD⁻¹`, wherever defined and distinct.
pub fn auxiliary_graph(s: &SchreierInstance, d: &Window) -> Result<GraphInstance> {
    if d.ctx() != s.ctx() {
        return Err(Error::ContextMismatch(s.ctx(), d.ctx()));
    }
    let dd = d.product(d, ProductKind::Inverse)?;
    let mut edges = Vec::new();
    for w in dd.iter().filter(|w| !w.is_identity()) {
        for u in 0..s.vertex_count() {
            if let Some(v) = s.act(w, u) {
                if v != u {
                    edges.push((u.min(v), u.max(v)));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    GraphInstance::simple(s.vertex_count(), edges)
}

/// First-fit coloring along `order`. The palette is the number of colors used.
pub fn greedy_coloring(g: &GraphInstance, order: &[usize]) -> Result<AuxColoring> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    if order.len() != n
        || order
            .iter()
            .any(|&v| v >= n || std::mem::replace(&mut seen[v], true))
    {
        return Err(Error::InvalidParameters(
            "order is not a permutation of the vertices".into(),
        ));
    }
    let adj = g.adjacency();
    let mut colors = vec![u32::MAX; n];
    let mut taken = Vec::new();
    for &v in order {
        taken.clear();
        taken.resize(adj[v].len() + 1, false);
        for &u in &adj[v] {
            let c = colors[u] as usize;
            if u != v && c < taken.len() {
                taken[c] = true;
            }
        }
        colors[v] = taken.iter().position(|&t| !t).unwrap_or(taken.len()) as u32;
    }
    let used = colors.iter().max().map_or(0, |&c| c as usize + 1);
    Ok(AuxColoring { colors, n: used })
}

/// `ℓ` vertex sets covering each vertex of `domain` exactly `k` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KFoldColoring {
    sets: Vec<FixedBitSet>,
    k: u64,
    domain: FixedBitSet,
}

impl KFoldColoring {
    pub fn new(sets: Vec<FixedBitSet>, k: u64, domain: FixedBitSet) -> Result<Self> {
        if let Some(s) = sets.iter().find(|s| s.len() != domain.len()) {
            return Err(Error::InvalidParameters(format!(
                "set over {} vertices in a coloring of {}",
                s.len(),
                domain.len()
            )));
        }
        Ok(KFoldColoring { sets, k, domain })
    }

    pub fn sets(&self) -> &[FixedBitSet] {
        &self.sets
    }

    pub fn sets_mut(&mut self) -> &mut [FixedBitSet] {
        &mut self.sets
    }

    pub fn ell(&self) -> usize {
        self.sets.len()
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn domain(&self) -> &FixedBitSet {
        &self.domain
    }

    pub fn vertex_count(&self) -> usize {
        self.domain.len()
    }

    /// `ℓ/k`, undefined when `k = 0`.
    pub fn ratio(&self) -> Option<Rational> {
        (self.k > 0).then(|| Rational::new(self.sets.len() as i64, self.k as i64))
    }

    pub fn domain_fraction(&self) -> f64 {
        if self.domain.is_empty() {
            return 0.0;
        }
        self.domain.count_ones(..) as f64 / self.domain.len() as f64
    }

    pub fn coverage(&self) -> Vec<u64> {
        let mut count = vec![0u64; self.vertex_count()];
        for s in &self.sets {
            for v in s.ones() {
                count[v] += 1;
            }
        }
        count
    }
}

/// The full output of [`synthesize`].
#[derive(Clone, Debug)]
pub struct Synthesis {
    pub coloring: KFoldColoring,
    pub aux: AuxColoring,
    /// `|DD⁻¹|`
    pub dd_size: usize,
    /// The instance's generator graph has a cycle no longer than twice the
    /// radius of the buffer window.
    pub wraparound_risk: bool,
}

/// The `2^N` sets `I_φ`, restricted to the vertices where the buffer window
/// `D ∪ ⋃_σ Dσ` is defined and `γ ↦ γ·x` is injective on `D`.
pub fn synthesize(
    s: &SchreierInstance,
    set: &ClopenSet,
    f: &Window,
    opts: &EngineOptions,
) -> Result<Synthesis> {
    let ctx = s.ctx();
    if set.ctx() != ctx {
        return Err(Error::ContextMismatch(ctx, set.ctx()));
    }
    if f.ctx() != ctx {
        return Err(Error::ContextMismatch(ctx, f.ctx()));
    }
    if f.is_empty() && !opts.allow_empty_f {
        return Err(Error::EmptyF);
    }
    if !f.is_empty() {
        let check = is_independent(set, f, opts.enumeration_limit)?;
        if let Some(w) = check.witness {
            return Err(Error::NotIndependent {
                sigma: w.sigma,
                witness: format!("{} on {}", w.assignment, w.window.join(" ")),
            });
        }
    }
    let d = set.window();
    let dd_size = d.product(d, ProductKind::Inverse)?.len();
    if dd_size > opts.n_cap {
        return Err(Error::PaletteCap {
            n: dd_size,
            cap: opts.n_cap,
        });
    }
    let h = auxiliary_graph(s, d)?;
    let order: Vec<usize> = (0..s.vertex_count()).collect();
    let aux = greedy_coloring(&h, &order)?;
    let aux = if opts.compact_colors {
        aux
    } else {
        aux.with_palette(dd_size)?
    };
    let n = aux.n();
    if n > opts.n_cap {
        return Err(Error::PaletteCap { n, cap: opts.n_cap });
    }

    let mut buffer = d.clone();
    for sigma in f {
        buffer = buffer.union(&d.right_translate(sigma)?)?;
    }
    let table = set.membership_table(opts.enumeration_limit)?;
    let vertices = s.vertex_count();
    let mut domain = FixedBitSet::with_capacity(vertices);
    let mut windows: Vec<(usize, Vec<u32>)> = Vec::new();
    'vertex: for x in 0..vertices {
        if buffer.iter().any(|g| s.act(g, x).is_none()) {
            continue;
        }
        let mut orbit = Vec::with_capacity(d.len());
        for g in d {
            let y = s.act(g, x).expect("buffer covers D");
            if orbit.contains(&y) {
                continue 'vertex;
            }
            orbit.push(y);
        }
        let cols: Vec<u32> = orbit.iter().map(|&y| aux.color(y)).collect();
        let mut sorted = cols.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != cols.len() {
            return Err(Error::ColoringNotInjective { vertex: x });
        }
        domain.insert(x);
        windows.push((x, cols));
    }

    let ell = 1usize << n;
    let sets: Vec<FixedBitSet> = (0..ell as u64)
        .into_par_iter()
        .map(|phi| {
            let mut members = FixedBitSet::with_capacity(vertices);
            for (x, cols) in &windows {
                let pattern = cols.iter().enumerate().fold(0usize, |acc, (i, &c)| {
                    acc | (((phi >> c) & 1) as usize) << i
                });
                if table.contains(pattern) {
                    members.insert(*x);
                }
            }
            members
        })
        .collect();
    let k = (set.patterns().len() as u64) << (n - d.len().min(n));
    let wraparound_risk = match schreier_graph(s, &ctx.generators()) {
        Ok(g) => girth(&g).is_some_and(|c| c <= 2 * buffer.radius()),
        Err(_) => true,
    };
    Ok(Synthesis {
        coloring: KFoldColoring::new(sets, k, domain)?,
        aux,
        dd_size,
        wraparound_risk,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Counterexample {
    /// A domain vertex not covered exactly `k` times.
    Coverage {
        vertex: usize,
        count: u64,
        expected: u64,
    },
    /// Both ends of an edge lie in one set.
    Independence { set: usize, u: usize, v: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub verified: bool,
    pub counterexample: Option<Counterexample>,
}

/// Recomputes coverage on the domain and independence of every set in `g`.
pub fn verify(coloring: &KFoldColoring, g: &GraphInstance) -> VerifyReport {
    let fail = |c| VerifyReport {
        verified: false,
        counterexample: Some(c),
    };
    let coverage = coloring.coverage();
    for v in coloring.domain().ones() {
        if coverage[v] != coloring.k() {
            return fail(Counterexample::Coverage {
                vertex: v,
                count: coverage[v],
                expected: coloring.k(),
            });
        }
    }
    for (i, s) in coloring.sets().iter().enumerate() {
        for &(u, v) in g.edges() {
            let (u, v) = (u as usize, v as usize);
            if s.contains(u) && s.contains(v) {
                return fail(Counterexample::Independence { set: i, u, v });
            }
        }
    }
    VerifyReport {
        verified: true,
        counterexample: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AverageDensity {
    /// `Σ_φ μ(I_φ) / ℓ`
    pub average: Rational,
    pub max: Rational,
    pub argmax: usize,
}

/// Average and largest `μ`-mass over the sets of the coloring.
pub fn average_density_bound(
    coloring: &KFoldColoring,
    mu: &WeightedMeasure,
) -> Result<AverageDensity> {
    if mu.len() != coloring.vertex_count() {
        return Err(Error::InvalidMeasure(format!(
            "measure has {} weights for {} vertices",
            mu.len(),
            coloring.vertex_count()
        )));
    }
    if coloring.ell() == 0 {
        return Err(Error::InvalidParameters("coloring has no sets".into()));
    }
    // integer weights over a common denominator keep the per-set sums cheap
    let lcm = mu
        .weights()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, w| {
            num_integer::Integer::lcm(&acc, w.denom())
        });
    let too_big = || Error::InvalidMeasure("common denominator exceeds 128 bits".into());
    u128::try_from(&lcm).map_err(|_| too_big())?;
    let weights = mu
        .weights()
        .iter()
        .map(|w| u128::try_from(w.numer() * (&lcm / w.denom())).map_err(|_| too_big()))
        .collect::<Result<Vec<u128>>>()?;
    let masses: Vec<u128> = coloring
        .sets()
        .par_iter()
        .map(|s| s.ones().map(|v| weights[v]).sum())
        .collect();
    let (argmax, &best) = masses
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("nonempty");
    let to_rational = |x: u128| Rational::new(x, lcm.clone());
    let total: u128 = masses.iter().sum();
    let average = &to_rational(total) / &Rational::from_int(coloring.ell() as i64);
    let max = to_rational(best);
    assert!(max >= average);
    Ok(AverageDensity {
        average,
        max,
        argmax,
    })
}

/// The JSON report of a synthesis run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthReport {
    pub ell: u64,
    pub k: u64,
    /// `ℓ/k` as `"p/q"`; absent when `k = 0`.
    pub ratio: Option<Rational>,
    pub domain_fraction: f64,
    pub verified: bool,
    pub counterexample: Option<Counterexample>,
    pub density: Rational,
    pub n: usize,
    pub dd_size: usize,
    pub colors_used: usize,
    pub window_size: usize,
    pub patterns: usize,
    pub vertices: usize,
    pub domain_size: usize,
    pub wraparound_risk: bool,
}

impl SynthReport {
    pub fn new(syn: &Synthesis, set: &ClopenSet, check: &VerifyReport) -> Self {
        let c = &syn.coloring;
        SynthReport {
            ell: c.ell() as u64,
            k: c.k(),
            ratio: c.ratio(),
            domain_fraction: c.domain_fraction(),
            verified: check.verified,
            counterexample: check.counterexample.clone(),
            density: set.density(),
            n: syn.aux.n(),
            dd_size: syn.dd_size,
            colors_used: syn.aux.colors_used(),
            window_size: set.window().len(),
            patterns: set.patterns().len(),
            vertices: c.vertex_count(),
            domain_size: c.domain().count_ones(..),
            wraparound_risk: syn.wraparound_risk,
        }
    }
}
