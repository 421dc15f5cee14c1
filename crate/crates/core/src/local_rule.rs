//! Clopen subsets of the shift space `2^Γ`.
//!
//! A [`ClopenSet`] is a window `D` together with the set `Φ` of admissible
//! patterns on it: `I = {x : x|D ∈ Φ}`. Patterns are integers whose bit `i`
//! is the value at the `i`-th window element. All checks here are exact and
//! work by enumerating patterns on finite joint windows, up to a configurable
//! bit limit.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupCtx, GroupElement, Window};
use crate::rational::Rational;

/// Largest joint window (in bits) enumerated by default.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 24;

/// Hard ceiling: patterns are stored in a `u64`.
const MAX_WINDOW_BITS: usize = 63;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClopenSet {
    window: Window,
    patterns: Vec<u64>,
}

pub fn pattern_string(p: u64, width: usize) -> String {
    (0..width)
        .map(|i| if p >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_pattern(s: &str, width: usize) -> Result<u64> {
    if s.len() != width {
        return Err(Error::PatternWidth {
            pattern: s.to_string(),
            got: s.len(),
            expected: width,
        });
    }
    let mut p = 0u64;
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => p |= 1 << i,
            _ => return Err(Error::PatternSyntax(s.to_string())),
        }
    }
    Ok(p)
}

/// Reads the bits of `p` at `positions` into a compact pattern.
#[inline]
pub(crate) fn gather(p: u64, positions: &[usize]) -> u64 {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &pos)| acc | ((p >> pos & 1) << i))
}

#[inline]
fn scatter(p: u64, positions: &[usize]) -> u64 {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &pos)| acc | ((p >> i & 1) << pos))
}

/// Calls `f` on every pattern over `width` bits that restricts to `pattern`
/// on `positions`.
fn for_each_extension(width: usize, positions: &[usize], pattern: u64, mut f: impl FnMut(u64)) {
    let fixed = scatter(pattern, positions);
    let fixed_mask = positions.iter().fold(0u64, |acc, &pos| acc | 1 << pos);
    let full = if width == 0 {
        0
    } else {
        u64::MAX >> (64 - width)
    };
    let free = full & !fixed_mask;
    let mut sub = 0u64;
    loop {
        f(fixed | sub);
        if sub == free {
            break;
        }
        sub = (sub.wrapping_sub(free)) & free;
    }
}

pub(crate) fn check_limit(bits: usize, limit: usize) -> Result<()> {
    if bits > limit.min(MAX_WINDOW_BITS) {
        Err(Error::EnumerationLimit { bits, limit })
    } else {
        Ok(())
    }
}

fn positions_in(sub: &Window, sup: &Window) -> Vec<usize> {
    sub.iter()
        .map(|e| {
            sup.index_of(e)
                .expect("sub-window is contained in the joint window")
        })
        .collect()
}

/// Positions in `joint` of the elements `δσ`, `δ ∈ window`, in window order.
fn translated_positions(
    window: &Window,
    sigma: &GroupElement,
    joint: &Window,
) -> Result<Vec<usize>> {
    window
        .iter()
        .map(|d| {
            let ds = d.mul(sigma)?;
            Ok(joint
                .index_of(&ds)
                .expect("translate is contained in the joint window"))
        })
        .collect()
}

fn check_f(set_ctx: GroupCtx, f: &Window) -> Result<()> {
    if f.ctx() != set_ctx {
        return Err(Error::ContextMismatch(set_ctx, f.ctx()));
    }
    if f.contains_identity() {
        return Err(Error::IdentityInF);
    }
    Ok(())
}

impl ClopenSet {
    pub fn new(window: Window, patterns: impl IntoIterator<Item = u64>) -> Result<Self> {
        let width = window.len();
        check_limit(width, MAX_WINDOW_BITS)?;
        let set: BTreeSet<u64> = patterns.into_iter().collect();
        if let Some(&p) = set.iter().next_back() {
            if width < 64 && p >> width != 0 {
                return Err(Error::PatternWidth {
                    pattern: format!("{p:#b}"),
                    got: 64 - p.leading_zeros() as usize,
                    expected: width,
                });
            }
        }
        Ok(ClopenSet {
            window,
            patterns: set.into_iter().collect(),
        })
    }

    pub fn from_strings<S: AsRef<str>>(window: Window, patterns: &[S]) -> Result<Self> {
        let width = window.len();
        let ps = patterns
            .iter()
            .map(|s| parse_pattern(s.as_ref(), width))
            .collect::<Result<Vec<_>>>()?;
        ClopenSet::new(window, ps)
    }

    pub fn empty(window: Window) -> Self {
        ClopenSet {
            window,
            patterns: Vec::new(),
        }
    }

    /// The whole space, written on `window`.
    pub fn full(window: Window) -> Result<Self> {
        check_limit(window.len(), DEFAULT_ENUMERATION_LIMIT)?;
        let n = 1u64 << window.len();
        ClopenSet::new(window, 0..n)
    }

    /// `{x : x(element) = value}`.
    pub fn cylinder(element: GroupElement, value: bool) -> Self {
        ClopenSet {
            window: Window::singleton(element),
            patterns: vec![value as u64],
        }
    }

    pub fn ctx(&self) -> GroupCtx {
        self.window.ctx()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn patterns(&self) -> &[u64] {
        &self.patterns
    }

    pub fn pattern_strings(&self) -> Vec<String> {
        self.patterns
            .iter()
            .map(|&p| pattern_string(p, self.window.len()))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn contains_pattern(&self, p: u64) -> bool {
        self.patterns.binary_search(&p).is_ok()
    }

    /// Membership of a point given by its coordinate function.
    pub fn contains_point(&self, x: impl Fn(&GroupElement) -> bool) -> bool {
        let p = self
            .window
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, e)| acc | ((x(e) as u64) << i));
        self.contains_pattern(p)
    }

    /// Dense lookup table over all `2^|D|` patterns.
    pub fn membership_table(&self, limit: usize) -> Result<FixedBitSet> {
        check_limit(self.window.len(), limit)?;
        let mut table = FixedBitSet::with_capacity(1usize << self.window.len());
        for &p in &self.patterns {
            table.insert(p as usize);
        }
        Ok(table)
    }

    /// Exact Bernoulli measure `|Φ| / 2^|D|`.
    pub fn density(&self) -> Rational {
        Rational::dyadic(self.patterns.len() as u64, self.window.len())
    }

    /// The same set written on a larger window.
    pub fn lift(&self, window: &Window, limit: usize) -> Result<ClopenSet> {
        if window.ctx() != self.ctx() {
            return Err(Error::ContextMismatch(self.ctx(), window.ctx()));
        }
        let joint = self.window.union(window)?;
        if joint.len() != window.len() {
            return Err(Error::InvalidParameters(
                "lift target must contain the set's window".into(),
            ));
        }
        check_limit(window.len(), limit)?;
        let pos = positions_in(&self.window, window);
        let mut out = Vec::new();
        for &p in &self.patterns {
            for_each_extension(window.len(), &pos, p, |q| out.push(q));
        }
        ClopenSet::new(window.clone(), out)
    }
}

/// `{x : σ·x ∈ I}`, written on the window `Dσ`.
///
/// With the shift `(σ·x)(δ) = x(δσ)`, the pattern of `σ·x` on `D` is read
/// from `x` at the translated coordinates `Dσ`.
pub fn shift_pullback(set: &ClopenSet, sigma: &GroupElement) -> Result<ClopenSet> {
    if sigma.ctx() != set.ctx() {
        return Err(Error::ContextMismatch(set.ctx(), sigma.ctx()));
    }
    let window = set.window.right_translate(sigma)?;
    let pos = translated_positions(&set.window, sigma, &window)?;
    ClopenSet::new(window, set.patterns.iter().map(|&p| scatter(p, &pos)))
}

/// A pair of overlapping translates, as a full assignment on the joint
/// window `D ∪ Dσ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceWitness {
    pub sigma: String,
    pub window: Vec<String>,
    pub assignment: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceCheck {
    pub independent: bool,
    pub witness: Option<IndependenceWitness>,
}

/// Decides `I ∩ {x : σ·x ∈ I} = ∅` for every `σ ∈ F`.
///
/// This is equivalent to `I ∩ σ·I = ∅`. Exactness of the finite check rests
/// on every pattern on the joint window extending to a point of the free
/// part.
pub fn is_independent(set: &ClopenSet, f: &Window, limit: usize) -> Result<IndependenceCheck> {
    check_f(set.ctx(), f)?;
    for sigma in f {
        let shifted = set.window.right_translate(sigma)?;
        let joint = set.window.union(&shifted)?;
        check_limit(joint.len(), limit)?;
        let pos_d = positions_in(&set.window, &joint);
        let pos_s = translated_positions(&set.window, sigma, &joint)?;
        let mut hit = None;
        for &p in &set.patterns {
            for_each_extension(joint.len(), &pos_d, p, |q| {
                if hit.is_none() && set.contains_pattern(gather(q, &pos_s)) {
                    hit = Some(q);
                }
            });
            if hit.is_some() {
                break;
            }
        }
        if let Some(q) = hit {
            return Ok(IndependenceCheck {
                independent: false,
                witness: Some(IndependenceWitness {
                    sigma: sigma.to_string(),
                    window: joint.iter().map(ToString::to_string).collect(),
                    assignment: pattern_string(q, joint.len()),
                }),
            });
        }
    }
    Ok(IndependenceCheck {
        independent: true,
        witness: None,
    })
}

/// `C \ ⋃_{σ∈F} {x : σ·x ∈ C}` on the window `D ∪ ⋃ Dσ`. Always independent.
pub fn prune(set: &ClopenSet, f: &Window, limit: usize) -> Result<ClopenSet> {
    check_f(set.ctx(), f)?;
    let mut joint = set.window.clone();
    for sigma in f {
        joint = joint.union(&set.window.right_translate(sigma)?)?;
    }
    check_limit(joint.len(), limit)?;
    let pos_d = positions_in(&set.window, &joint);
    let pos_sigmas = f
        .iter()
        .map(|s| translated_positions(&set.window, s, &joint))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for &p in &set.patterns {
        for_each_extension(joint.len(), &pos_d, p, |q| {
            if pos_sigmas
                .iter()
                .all(|pos| !set.contains_pattern(gather(q, pos)))
            {
                out.push(q);
            }
        });
    }
    ClopenSet::new(joint, out)
}

/// Exact measures behind the regularity step of the clopen approximation
/// argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityLossReport {
    pub beta_j: Rational,
    pub beta_c: Rational,
    pub beta_sym_diff: Rational,
    pub beta_pruned: Rational,
    /// `β(J) − (|F|+1) β(J △ C)`
    pub lower_bound: Rational,
    pub j_independent: bool,
    pub holds: bool,
}

/// Compares `β(prune(C, F))` with `β(J) − (|F|+1) β(J △ C)`.
///
/// `j` plays the role of the measurable independent set, given exactly as a
/// pattern table on its own window.
pub fn density_loss_check(
    j: &ClopenSet,
    c: &ClopenSet,
    f: &Window,
    limit: usize,
) -> Result<DensityLossReport> {
    if j.ctx() != c.ctx() {
        return Err(Error::ContextMismatch(j.ctx(), c.ctx()));
    }
    let pruned = prune(c, f, limit)?;
    let j_independent = is_independent(j, f, limit)?.independent;
    let joint = j.window.union(&c.window)?.union(&pruned.window)?;
    check_limit(joint.len(), limit)?;
    let pos_j = positions_in(&j.window, &joint);
    let pos_c = positions_in(&c.window, &joint);
    let pos_i = positions_in(&pruned.window, &joint);
    let (mut nj, mut nc, mut nd, mut ni) = (0u64, 0u64, 0u64, 0u64);
    for q in 0..(1u64 << joint.len()) {
        let in_j = j.contains_pattern(gather(q, &pos_j));
        let in_c = c.contains_pattern(gather(q, &pos_c));
        nj += in_j as u64;
        nc += in_c as u64;
        nd += (in_j != in_c) as u64;
        ni += pruned.contains_pattern(gather(q, &pos_i)) as u64;
    }
    let bits = joint.len();
    let beta_j = Rational::dyadic(nj, bits);
    let beta_sym_diff = Rational::dyadic(nd, bits);
    let beta_pruned = Rational::dyadic(ni, bits);
    let factor = Rational::from_int(f.len() as i64 + 1);
    let lower_bound = &beta_j - &(&factor * &beta_sym_diff);
    Ok(DensityLossReport {
        holds: beta_pruned >= lower_bound,
        beta_j,
        beta_c: Rational::dyadic(nc, bits),
        beta_sym_diff,
        beta_pruned,
        lower_bound,
        j_independent,
    })
}

/// Drops every window coordinate the membership function ignores.
///
/// Coordinate `i` is irrelevant exactly when `Φ` is closed under flipping
/// bit `i`; irrelevance of one coordinate is unaffected by dropping others,
/// so a single pass finds them all.
pub fn minimize_window(set: &ClopenSet) -> ClopenSet {
    let mut window: Vec<GroupElement> = set.window.elements().to_vec();
    let mut patterns: BTreeSet<u64> = set.patterns.iter().copied().collect();
    let mut i = 0;
    while i < window.len() {
        let bit = 1u64 << i;
        let closed = patterns.iter().all(|p| patterns.contains(&(p ^ bit)));
        if closed {
            let low = bit - 1;
            patterns = patterns
                .iter()
                .map(|p| (p & low) | ((p >> (i + 1)) << i))
                .collect();
            window.remove(i);
        } else {
            i += 1;
        }
    }
    let window = Window::new(set.ctx(), window).expect("subset of a window");
    ClopenSet {
        window,
        patterns: patterns.into_iter().collect(),
    }
}

/// Do two clopen sets have the same members? Decided on the union window.
pub fn same_set(a: &ClopenSet, b: &ClopenSet, limit: usize) -> Result<bool> {
    let joint = a.window.union(&b.window)?;
    check_limit(joint.len(), limit)?;
    let pa = positions_in(&a.window, &joint);
    let pb = positions_in(&b.window, &joint);
    Ok((0..(1u64 << joint.len()))
        .all(|q| a.contains_pattern(gather(q, &pa)) == b.contains_pattern(gather(q, &pb))))
}

/// On-disk form: `{"window": [element, …], "patterns": ["0101…", …]}`.
///
/// `ctx` is optional on input; when absent the caller supplies it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClopenSetFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ctx: Option<GroupCtx>,
    pub window: Vec<Vec<i64>>,
    pub patterns: Vec<String>,
}

impl ClopenSet {
    pub fn to_file(&self) -> ClopenSetFile {
        ClopenSetFile {
            ctx: None,
            window: self.window.to_ints(),
            patterns: self.pattern_strings(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    /// Reads the file form. The window may be listed in any order; patterns
    /// are re-indexed to the canonical order.
    pub fn from_file(file: &ClopenSetFile, fallback_ctx: Option<GroupCtx>) -> Result<Self> {
        let ctx = file
            .ctx
            .or(fallback_ctx)
            .ok_or_else(|| Error::Parse("rule file has no `ctx` and none was given".into()))?
            .validate()?;
        let listed = file
            .window
            .iter()
            .map(|l| ctx.element(l))
            .collect::<Result<Vec<_>>>()?;
        let window = Window::new(ctx, listed.clone())?;
        if window.len() != listed.len() {
            return Err(Error::Parse("rule window lists an element twice".into()));
        }
        check_limit(window.len(), MAX_WINDOW_BITS)?;
        let pos: Vec<usize> = listed.iter().map(|e| window.index_of(e).unwrap()).collect();
        let patterns = file
            .patterns
            .iter()
            .map(|s| parse_pattern(s, listed.len()).map(|p| scatter(p, &pos)))
            .collect::<Result<Vec<_>>>()?;
        ClopenSet::new(window, patterns)
    }

    pub fn from_json(text: &str, fallback_ctx: Option<GroupCtx>) -> Result<Self> {
        let file: ClopenSetFile = serde_json::from_str(text)?;
        ClopenSet::from_file(&file, fallback_ctx)
    }
}
