//! Exact α, χ^k and χ* on small graphs.
//!
//! Vertex sets are `u64` masks. χ* comes from an exact simplex over the
//! rationals: it solves the fractional clique LP and reads the fractional
//! coloring off the reduced costs. Both are returned, and their values match.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::GraphInstance;
use crate::rational::Rational;

pub const DEFAULT_SIZE_CAP: usize = 30;
pub const TRANSITIVITY_CAP: usize = 12;

fn adjacency_masks(g: &GraphInstance, cap: usize) -> Result<Vec<u64>> {
    let n = g.vertex_count();
    if n > cap.min(63) {
        return Err(Error::SizeCap {
            vertices: n,
            cap: cap.min(63),
        });
    }
    let mut adj = vec![0u64; n];
    for &(u, v) in g.edges() {
        if u == v {
            return Err(Error::LoopInSimpleGraph(u as usize));
        }
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }
    Ok(adj)
}

fn to_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn lowest(mask: u64) -> usize {
    mask.trailing_zeros() as usize
}

fn bron_kerbosch(nonadj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = to_vertices(p | x)
        .into_iter()
        .max_by_key(|&u| ((p & nonadj[u]).count_ones(), std::cmp::Reverse(u)))
        .expect("p is nonempty");
    let mut candidates = p & !nonadj[pivot];
    while candidates != 0 {
        let v = lowest(candidates);
        candidates &= candidates - 1;
        bron_kerbosch(nonadj, r | 1 << v, p & nonadj[v], x & nonadj[v], out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

fn maximal_masks(adj: &[u64]) -> Vec<u64> {
    let n = adj.len();
    let all = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let nonadj: Vec<u64> = (0..n).map(|v| all & !adj[v] & !(1 << v)).collect();
    let mut out = Vec::new();
    bron_kerbosch(&nonadj, 0, all, 0, &mut out);
    out.sort_by_key(|&m| to_vertices(m));
    out
}

/// All maximal independent sets, each as a sorted vertex list, in
/// lexicographic order.
pub fn max_independent_sets(g: &GraphInstance, cap: usize) -> Result<Vec<Vec<usize>>> {
    let adj = adjacency_masks(g, cap)?;
    let sets = maximal_masks(&adj);
    debug_assert!(sets
        .iter()
        .all(|&s| to_vertices(s).iter().all(|&v| adj[v] & s == 0)));
    Ok(sets.into_iter().map(to_vertices).collect())
}

/// `α(G)` together with the first maximum independent set.
pub fn independence_number(g: &GraphInstance, cap: usize) -> Result<(usize, Vec<usize>)> {
    let sets = max_independent_sets(g, cap)?;
    let best = sets.iter().map(Vec::len).max().unwrap_or(0);
    let witness = sets
        .into_iter()
        .find(|s| s.len() == best)
        .unwrap_or_default();
    Ok((best, witness))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    PrimalDual,
    Enumeration,
}

/// An optimal fractional coloring with a matching fractional clique.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LPResult {
    pub value: Rational,
    /// Independent sets with positive weight.
    pub support: Vec<(Vec<usize>, Rational)>,
    /// Per-vertex weights of the fractional clique.
    pub dual: Vec<Rational>,
    pub certificate: CertificateKind,
}

impl LPResult {
    /// Re-checks feasibility of both solutions and equality of their values.
    pub fn check(&self, g: &GraphInstance) -> bool {
        let n = g.vertex_count();
        let Ok(adj) = adjacency_masks(g, 63) else {
            return false;
        };
        let mut cover = vec![Rational::zero(); n];
        let mut primal = Rational::zero();
        for (set, w) in &self.support {
            if w.is_negative()
                || set
                    .iter()
                    .any(|&v| v >= n || set.iter().any(|&u| adj[v] >> u & 1 == 1))
            {
                return false;
            }
            for &v in set {
                cover[v] = &cover[v] + w;
            }
            primal = &primal + w;
        }
        if cover.iter().any(|c| *c < Rational::one()) {
            return false;
        }
        if self.dual.len() != n || self.dual.iter().any(Rational::is_negative) {
            return false;
        }
        let dual: Rational = self.dual.iter().sum();
        let dual_ok = maximal_masks(&adj).into_iter().all(|s| {
            to_vertices(s)
                .iter()
                .map(|&v| &self.dual[v])
                .sum::<Rational>()
                <= Rational::one()
        });
        dual_ok && primal == self.value && dual == self.value
    }
}

/// Maximizes `Σ y` subject to `A y ≤ 1`, `y ≥ 0`, with Bland's rule. Returns
/// the optimal `y` and the reduced costs of the slack columns, which form an
/// optimal solution of the dual covering problem.
fn simplex_packing(rows: &[Vec<bool>], cols: usize) -> (Vec<BigRational>, Vec<BigRational>) {
    let m = rows.len();
    let width = cols + m + 1;
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut t: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = vec![zero.clone(); width];
            for (j, &a) in row.iter().enumerate() {
                if a {
                    r[j] = one.clone();
                }
            }
            r[cols + i] = one.clone();
            r[width - 1] = one.clone();
            r
        })
        .collect();
    let mut obj = vec![zero.clone(); width];
    for c in obj.iter_mut().take(cols) {
        *c = -one.clone();
    }
    let mut basis: Vec<usize> = (cols..cols + m).collect();
    while let Some(enter) = (0..width - 1).find(|&j| obj[j].is_negative()) {
        let leave = (0..m)
            .filter(|&i| t[i][enter].is_positive())
            .min_by(|&a, &b| {
                let ra = &t[a][width - 1] / &t[a][enter];
                let rb = &t[b][width - 1] / &t[b][enter];
                ra.cmp(&rb).then(basis[a].cmp(&basis[b]))
            })
            .expect("packing LP is bounded");
        let pivot = t[leave][enter].clone();
        for v in t[leave].iter_mut() {
            *v = &*v / &pivot;
        }
        let pivot_row = t[leave].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != leave && !row[enter].is_zero() {
                let factor = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v = &*v - &(&factor * p);
                }
            }
        }
        let factor = obj[enter].clone();
        for (v, p) in obj.iter_mut().zip(&pivot_row) {
            *v = &*v - &(&factor * p);
        }
        basis[leave] = enter;
    }
    let mut y = vec![zero; cols];
    for (i, &b) in basis.iter().enumerate() {
        if b < cols {
            y[b] = t[i][width - 1].clone();
        }
    }
    (y, obj[cols..cols + m].to_vec())
}

/// `χ*(G)` via the LP over maximal independent sets.
pub fn fractional_chromatic(g: &GraphInstance, cap: usize) -> Result<LPResult> {
    let adj = adjacency_masks(g, cap)?;
    let n = adj.len();
    let sets = maximal_masks(&adj);
    let rows: Vec<Vec<bool>> = if n == 0 {
        Vec::new()
    } else {
        sets.iter()
            .map(|&s| (0..n).map(|v| s >> v & 1 == 1).collect())
            .collect()
    };
    let (y, w) = simplex_packing(&rows, n);
    let wrap = |q: BigRational| Rational::new(q.numer().clone(), q.denom().clone());
    let dual: Vec<Rational> = y.into_iter().map(wrap).collect();
    let support: Vec<(Vec<usize>, Rational)> = if n == 0 {
        Vec::new()
    } else {
        sets.iter()
            .zip(w)
            .filter(|(_, w)| !w.is_zero())
            .map(|(&s, w)| (to_vertices(s), wrap(w)))
            .collect()
    };
    let value = dual.iter().sum();
    let result = LPResult {
        value,
        support,
        dual,
        certificate: CertificateKind::PrimalDual,
    };
    assert!(result.check(g), "simplex certificate failed to verify");
    Ok(result)
}

/// The least `ℓ` admitting `ℓ` independent sets that cover every vertex
/// `k` times, with a witness family of `(set, multiplicity)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KFoldResult {
    pub k: usize,
    pub ell: usize,
    pub witness: Vec<(Vec<usize>, usize)>,
}

struct CoverSearch<'a> {
    sets: &'a [u64],
    last_use: Vec<usize>,
    suffix_max: Vec<u32>,
    counts: Vec<usize>,
}

impl CoverSearch<'_> {
    fn run(&mut self, i: usize, budget: usize, demand: &mut [usize]) -> bool {
        let remaining: usize = demand.iter().sum();
        if remaining == 0 {
            return true;
        }
        if i == self.sets.len() || remaining > budget * self.suffix_max[i] as usize {
            return false;
        }
        if demand.iter().any(|&d| d > budget) {
            return false;
        }
        let s = self.sets[i];
        let members = to_vertices(s);
        let most = members
            .iter()
            .map(|&v| demand[v])
            .max()
            .unwrap_or(0)
            .min(budget);
        // vertices seen for the last time here must be finished now
        let least = members
            .iter()
            .filter(|&&v| self.last_use[v] == i)
            .map(|&v| demand[v])
            .max()
            .unwrap_or(0);
        if least > most {
            return false;
        }
        for c in (least..=most).rev() {
            let saved: Vec<usize> = members.iter().map(|&v| demand[v]).collect();
            for &v in &members {
                demand[v] = demand[v].saturating_sub(c);
            }
            self.counts[i] = c;
            if self.run(i + 1, budget - c, demand) {
                return true;
            }
            for (&v, d) in members.iter().zip(saved) {
                demand[v] = d;
            }
        }
        self.counts[i] = 0;
        false
    }
}

/// `χ^k(G)`, searching upward from `⌈k·χ*⌉`.
pub fn kfold_chromatic(g: &GraphInstance, k: usize, cap: usize) -> Result<KFoldResult> {
    if k == 0 {
        return Err(Error::InvalidParameters("k must be at least 1".into()));
    }
    let adj = adjacency_masks(g, cap)?;
    let n = adj.len();
    if n == 0 {
        return Ok(KFoldResult {
            k,
            ell: 0,
            witness: Vec::new(),
        });
    }
    let sets = maximal_masks(&adj);
    let chi_star = fractional_chromatic(g, cap)?.value;
    let start = (&chi_star * &Rational::from_int(k as i64)).ceil();
    let start = usize::try_from(start).unwrap_or(usize::MAX);
    let mut last_use = vec![0; n];
    for (i, &s) in sets.iter().enumerate() {
        for v in to_vertices(s) {
            last_use[v] = i;
        }
    }
    let mut suffix_max = vec![0u32; sets.len() + 1];
    for i in (0..sets.len()).rev() {
        suffix_max[i] = suffix_max[i + 1].max(sets[i].count_ones());
    }
    for ell in start.. {
        let mut search = CoverSearch {
            sets: &sets,
            last_use: last_use.clone(),
            suffix_max: suffix_max.clone(),
            counts: vec![0; sets.len()],
        };
        if search.run(0, ell, &mut vec![k; n]) {
            let witness: Vec<(Vec<usize>, usize)> = sets
                .iter()
                .zip(&search.counts)
                .filter(|(_, &c)| c > 0)
                .map(|(&s, &c)| (to_vertices(s), c))
                .collect();
            let used: usize = witness.iter().map(|(_, c)| c).sum();
            debug_assert_eq!(used, ell);
            return Ok(KFoldResult { k, ell, witness });
        }
    }
    unreachable!("k·χ(G) sets always suffice")
}

/// Whether the automorphism group acts transitively, by backtracking search
/// for an automorphism sending vertex 0 to each other vertex.
pub fn is_vertex_transitive(g: &GraphInstance) -> Result<bool> {
    let adj = adjacency_masks(g, TRANSITIVITY_CAP)?;
    let n = adj.len();
    let degree: Vec<u32> = adj.iter().map(|a| a.count_ones()).collect();
    fn extend(adj: &[u64], degree: &[u32], map: &mut Vec<usize>, used: u64) -> bool {
        let v = map.len();
        if v == adj.len() {
            return true;
        }
        for t in 0..adj.len() {
            if used >> t & 1 == 1 || degree[t] != degree[v] {
                continue;
            }
            let consistent = map
                .iter()
                .enumerate()
                .all(|(u, &mu)| (adj[v] >> u & 1) == (adj[t] >> mu & 1));
            if consistent {
                map.push(t);
                if extend(adj, degree, map, used | 1 << t) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    Ok((1..n).all(|t| {
        let mut map = vec![t];
        degree[0] == degree[t] && extend(&adj, &degree, &mut map, 1 << t)
    }))
}

/// Exact rationals print as `p/q`; this adds a decimal approximation.
pub fn describe(q: &Rational) -> String {
    format!("{q} ({:.6})", q.to_f64())
}
