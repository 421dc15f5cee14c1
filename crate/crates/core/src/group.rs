//! Group contexts: free groups `F_n` and finite tori `Z_m^d`.
//!
//! Elements are kept canonical (reduced words, coordinates in `[0, m)`), so
//! structural equality is group equality. Windows are duplicate-free element
//! lists in a fixed total order; pattern bit `i` always refers to the `i`-th
//! element of a window.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupCtx {
    /// Free group on `n` generators.
    Free { n: u32 },
    /// `Z_m^d` with the standard basis as generators.
    Torus { d: u32, m: u32 },
}

impl GroupCtx {
    pub fn free(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidContext("free group needs n >= 1".into()));
        }
        Ok(GroupCtx::Free { n })
    }

    pub fn torus(d: u32, m: u32) -> Result<Self> {
        if d == 0 || m < 2 {
            return Err(Error::InvalidContext(format!(
                "torus needs d >= 1 and m >= 2, got d={d} m={m}"
            )));
        }
        Ok(GroupCtx::Torus { d, m })
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            GroupCtx::Free { n } => GroupCtx::free(n),
            GroupCtx::Torus { d, m } => GroupCtx::torus(d, m),
        }
    }

    pub fn generator_count(self) -> usize {
        match self {
            GroupCtx::Free { n } => n as usize,
            GroupCtx::Torus { d, .. } => d as usize,
        }
    }

    pub fn identity(self) -> GroupElement {
        let repr = match self {
            GroupCtx::Free { .. } => Repr::Word(Vec::new()),
            GroupCtx::Torus { d, .. } => Repr::Vector(vec![0; d as usize]),
        };
        GroupElement { ctx: self, repr }
    }

    /// The `i`-th standard generator (0-based).
    pub fn generator(self, i: usize) -> GroupElement {
        assert!(i < self.generator_count(), "generator index out of range");
        let repr = match self {
            GroupCtx::Free { .. } => Repr::Word(vec![i as i32 + 1]),
            GroupCtx::Torus { d, m } => {
                let mut v = vec![0; d as usize];
                v[i] = 1 % m;
                Repr::Vector(v)
            }
        };
        GroupElement { ctx: self, repr }
    }

    pub fn generators(self) -> Window {
        Window::new(self, (0..self.generator_count()).map(|i| self.generator(i)))
            .expect("generators share the context")
    }

    /// Builds a reduced word from signed 1-based generator indices.
    pub fn word(self, letters: &[i32]) -> Result<GroupElement> {
        let GroupCtx::Free { n } = self else {
            return Err(self.bad("words need a free-group context"));
        };
        let mut out: Vec<i32> = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 || l.unsigned_abs() > n {
                return Err(self.bad(&format!("letter {l} outside 1..={n}")));
            }
            push_letter(&mut out, l);
        }
        Ok(GroupElement {
            ctx: self,
            repr: Repr::Word(out),
        })
    }

    /// Builds a torus element; coordinates are reduced mod `m`.
    pub fn vector(self, coords: &[i64]) -> Result<GroupElement> {
        let GroupCtx::Torus { d, m } = self else {
            return Err(self.bad("vectors need a torus context"));
        };
        if coords.len() != d as usize {
            return Err(self.bad(&format!("expected {d} coordinates, got {}", coords.len())));
        }
        let v = coords
            .iter()
            .map(|&c| c.rem_euclid(m as i64) as u32)
            .collect();
        Ok(GroupElement {
            ctx: self,
            repr: Repr::Vector(v),
        })
    }

    /// Element from its integer-list form (signed letters or coordinates).
    pub fn element(self, ints: &[i64]) -> Result<GroupElement> {
        match self {
            GroupCtx::Free { .. } => {
                let letters: Vec<i32> = ints
                    .iter()
                    .map(|&i| i32::try_from(i).map_err(|_| self.bad("letter overflow")))
                    .collect::<Result<_>>()?;
                self.word(&letters)
            }
            GroupCtx::Torus { .. } => self.vector(ints),
        }
    }

    /// Parses `[+1,-2]` / `[3,4]`.
    pub fn parse_element(self, text: &str) -> Result<GroupElement> {
        let ints = parse_int_list(text)?;
        self.element(&ints)
    }

    pub fn mul(self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        a.mul(b)
    }

    fn bad(self, reason: &str) -> Error {
        Error::InvalidElement {
            ctx: self,
            reason: reason.to_string(),
        }
    }
}

impl fmt::Display for GroupCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupCtx::Free { n } => write!(f, "free:{n}"),
            GroupCtx::Torus { d, m } => write!(f, "torus:{d}:{m}"),
        }
    }
}

impl FromStr for GroupCtx {
    type Err = Error;

    /// `free:N` or `torus:D:M`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |p: &str| {
            p.parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad number `{p}` in context `{s}`")))
        };
        match parts.as_slice() {
            ["free", n] => GroupCtx::free(num(n)?),
            ["torus", d, m] => GroupCtx::torus(num(d)?, num(m)?),
            _ => Err(Error::Parse(format!(
                "unknown group context `{s}` (expected free:N or torus:D:M)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced word; letter `+i` is the generator `i`, `-i` its inverse.
    Word(Vec<i32>),
    Vector(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    ctx: GroupCtx,
    repr: Repr,
}

fn push_letter(word: &mut Vec<i32>, l: i32) {
    if word.last() == Some(&-l) {
        word.pop();
    } else {
        word.push(l);
    }
}

fn letter_key(l: i32) -> (u32, bool) {
    (l.unsigned_abs(), l < 0)
}

impl GroupElement {
    pub fn ctx(&self) -> GroupCtx {
        self.ctx
    }

    pub fn is_identity(&self) -> bool {
        match &self.repr {
            Repr::Word(w) => w.is_empty(),
            Repr::Vector(v) => v.iter().all(|&c| c == 0),
        }
    }

    /// Signed letters of a reduced word; `None` for torus elements.
    pub fn letters(&self) -> Option<&[i32]> {
        match &self.repr {
            Repr::Word(w) => Some(w),
            Repr::Vector(_) => None,
        }
    }

    /// Coordinates in `[0, m)`; `None` for free-group elements.
    pub fn coords(&self) -> Option<&[u32]> {
        match &self.repr {
            Repr::Vector(v) => Some(v),
            Repr::Word(_) => None,
        }
    }

    pub fn to_ints(&self) -> Vec<i64> {
        match &self.repr {
            Repr::Word(w) => w.iter().map(|&l| l as i64).collect(),
            Repr::Vector(v) => v.iter().map(|&c| c as i64).collect(),
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(self.ctx, other.ctx));
        }
        let repr = match (&self.repr, &other.repr) {
            (Repr::Word(a), Repr::Word(b)) => {
                let mut w = a.clone();
                for &l in b {
                    push_letter(&mut w, l);
                }
                Repr::Word(w)
            }
            (Repr::Vector(a), Repr::Vector(b)) => {
                let GroupCtx::Torus { m, .. } = self.ctx else {
                    unreachable!()
                };
                Repr::Vector(a.iter().zip(b).map(|(x, y)| (x + y) % m).collect())
            }
            _ => unreachable!("representation follows the context"),
        };
        Ok(GroupElement {
            ctx: self.ctx,
            repr,
        })
    }

    pub fn inv(&self) -> GroupElement {
        let repr = match &self.repr {
            Repr::Word(w) => Repr::Word(w.iter().rev().map(|l| -l).collect()),
            Repr::Vector(v) => {
                let GroupCtx::Torus { m, .. } = self.ctx else {
                    unreachable!()
                };
                Repr::Vector(v.iter().map(|&c| (m - c) % m).collect())
            }
        };
        GroupElement {
            ctx: self.ctx,
            repr,
        }
    }

    /// Word norm with respect to the standard generators.
    pub fn norm(&self) -> usize {
        match (&self.repr, self.ctx) {
            (Repr::Word(w), _) => w.len(),
            (Repr::Vector(v), GroupCtx::Torus { m, .. }) => {
                v.iter().map(|&c| c.min(m - c) as usize).sum()
            }
            _ => unreachable!(),
        }
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ctx
            .cmp(&other.ctx)
            .then_with(|| match (&self.repr, &other.repr) {
                (Repr::Word(a), Repr::Word(b)) => a.len().cmp(&b.len()).then_with(|| {
                    a.iter()
                        .map(|&l| letter_key(l))
                        .cmp(b.iter().map(|&l| letter_key(l)))
                }),
                (Repr::Vector(a), Repr::Vector(b)) => a.cmp(b),
                _ => unreachable!(),
            })
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        match &self.repr {
            Repr::Word(w) => {
                for (i, l) in w.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{l:+}")?;
                }
            }
            Repr::Vector(v) => {
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
            }
        }
        f.write_str("]")
    }
}

pub(crate) fn parse_int_list(text: &str) -> Result<Vec<i64>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected `[...]`, got `{text}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|p| {
            let p = p.trim();
            let p = p.strip_prefix('+').unwrap_or(p);
            p.parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer `{p}` in `{text}`")))
        })
        .collect()
}

/// A finite, duplicate-free, canonically ordered set of group elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    ctx: GroupCtx,
    elems: Vec<GroupElement>,
}

/// Which product set [`Window::product`] forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductKind {
    /// `{d e : d in D, e in E}`
    Direct,
    /// `{d e^-1 : d in D, e in E}`
    Inverse,
}

impl Window {
    pub fn new(ctx: GroupCtx, elems: impl IntoIterator<Item = GroupElement>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for e in elems {
            if e.ctx != ctx {
                return Err(Error::ContextMismatch(ctx, e.ctx));
            }
            set.insert(e);
        }
        Ok(Window {
            ctx,
            elems: set.into_iter().collect(),
        })
    }

    pub fn empty(ctx: GroupCtx) -> Self {
        Window {
            ctx,
            elems: Vec::new(),
        }
    }

    pub fn singleton(e: GroupElement) -> Self {
        Window {
            ctx: e.ctx,
            elems: vec![e],
        }
    }

    pub fn from_ints(ctx: GroupCtx, lists: &[Vec<i64>]) -> Result<Self> {
        let elems = lists
            .iter()
            .map(|l| ctx.element(l))
            .collect::<Result<Vec<_>>>()?;
        Window::new(ctx, elems)
    }

    pub fn to_ints(&self) -> Vec<Vec<i64>> {
        self.elems.iter().map(GroupElement::to_ints).collect()
    }

    pub fn ctx(&self) -> GroupCtx {
        self.ctx
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElement> {
        self.elems.iter()
    }

    pub fn index_of(&self, e: &GroupElement) -> Option<usize> {
        self.elems.binary_search(e).ok()
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.index_of(e).is_some()
    }

    pub fn contains_identity(&self) -> bool {
        self.elems.iter().any(GroupElement::is_identity)
    }

    pub fn union(&self, other: &Window) -> Result<Window> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(self.ctx, other.ctx));
        }
        Window::new(self.ctx, self.elems.iter().chain(&other.elems).cloned())
    }

    /// `D sigma`.
    pub fn right_translate(&self, sigma: &GroupElement) -> Result<Window> {
        let elems = self
            .elems
            .iter()
            .map(|d| d.mul(sigma))
            .collect::<Result<Vec<_>>>()?;
        Window::new(self.ctx, elems)
    }

    pub fn inverse(&self) -> Window {
        Window::new(self.ctx, self.elems.iter().map(GroupElement::inv)).expect("same context")
    }

    pub fn product(&self, other: &Window, kind: ProductKind) -> Result<Window> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(self.ctx, other.ctx));
        }
        let mut set = BTreeSet::new();
        for d in &self.elems {
            for e in &other.elems {
                let rhs = match kind {
                    ProductKind::Direct => e.clone(),
                    ProductKind::Inverse => e.inv(),
                };
                set.insert(d.mul(&rhs)?);
            }
        }
        Ok(Window {
            ctx: self.ctx,
            elems: set.into_iter().collect(),
        })
    }

    /// Largest word norm among the elements (0 for the empty window).
    pub fn radius(&self) -> usize {
        self.elems.iter().map(GroupElement::norm).max().unwrap_or(0)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl<'a> IntoIterator for &'a Window {
    type Item = &'a GroupElement;
    type IntoIter = std::slice::Iter<'a, GroupElement>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// All elements of word norm at most `radius` with respect to `gens ∪ gens⁻¹`.
pub fn ball(ctx: GroupCtx, radius: usize, gens: &Window) -> Result<Window> {
    if gens.ctx != ctx {
        return Err(Error::ContextMismatch(ctx, gens.ctx));
    }
    let steps: Vec<GroupElement> = gens.iter().flat_map(|g| [g.clone(), g.inv()]).collect();
    let mut seen = BTreeSet::from([ctx.identity()]);
    let mut frontier = vec![ctx.identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &steps {
                let y = x.mul(s)?;
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(Window {
        ctx,
        elems: seen.into_iter().collect(),
    })
}

/// `D E⁻¹`; with `E = D` this is the difference window `DD⁻¹`.
pub fn window_product(d: &Window, e: &Window) -> Result<Window> {
    d.product(e, ProductKind::Inverse)
}

/// Parses an `F` specification in the context `ctx`.
///
/// Accepted forms: `std` (the standard generators), a flat list of signed
/// 1-based generator indices such as `[1,-2]`, or a JSON list of elements
/// such as `[[1,0],[0,1]]`.
pub fn parse_window_spec(ctx: GroupCtx, spec: &str) -> Result<Window> {
    let spec = spec.trim();
    if spec == "std" {
        return Ok(ctx.generators());
    }
    if let Ok(lists) = serde_json::from_str::<Vec<Vec<i64>>>(spec) {
        return Window::from_ints(ctx, &lists);
    }
    let flat = parse_int_list(spec)?;
    let mut elems = Vec::with_capacity(flat.len());
    for l in flat {
        let i = l.unsigned_abs() as usize;
        if l == 0 || i > ctx.generator_count() {
            return Err(Error::Parse(format!(
                "generator index {l} out of range for {ctx}"
            )));
        }
        let g = ctx.generator(i - 1);
        elems.push(if l < 0 { g.inv() } else { g });
    }
    Window::new(ctx, elems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn free2() -> GroupCtx {
        GroupCtx::free(2).unwrap()
    }

    fn free_ball_size(n: u64, r: u32) -> u64 {
        1 + (1..=r).map(|j| 2 * n * (2 * n - 1).pow(j - 1)).sum::<u64>()
    }

    #[test]
    fn inverse_cancellation() {
        let g = free2();
        let s1 = g.word(&[1]).unwrap();
        assert!(s1.mul(&s1.inv()).unwrap().is_identity());
    }

    #[test]
    fn reduction_in_product() {
        let g = free2();
        let a = g.word(&[1, 2]).unwrap();
        let b = g.word(&[-2, 1]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), g.word(&[1, 1]).unwrap());
    }

    #[test]
    fn torus_arithmetic() {
        let t = GroupCtx::torus(1, 5).unwrap();
        let p = t
            .vector(&[3])
            .unwrap()
            .mul(&t.vector(&[4]).unwrap())
            .unwrap();
        assert_eq!(p, t.vector(&[2]).unwrap());
        assert_eq!(t.vector(&[-1]).unwrap(), t.vector(&[4]).unwrap());
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = free2().identity();
        let b = GroupCtx::torus(1, 5).unwrap().identity();
        assert!(matches!(a.mul(&b), Err(Error::ContextMismatch(..))));
    }

    #[test]
    fn invalid_contexts() {
        assert!(GroupCtx::free(0).is_err());
        assert!(GroupCtx::torus(1, 1).is_err());
        assert!(GroupCtx::torus(0, 3).is_err());
        assert!("torus:2:x".parse::<GroupCtx>().is_err());
        assert_eq!(
            "torus:2:7".parse::<GroupCtx>().unwrap(),
            GroupCtx::Torus { d: 2, m: 7 }
        );
    }

    #[test]
    fn free_ball_sizes() {
        let g = free2();
        let gens = g.generators();
        assert_eq!(ball(g, 0, &gens).unwrap().len(), 1);
        assert_eq!(ball(g, 1, &gens).unwrap().len(), 5);
        assert_eq!(ball(g, 2, &gens).unwrap().len(), 17);
        for n in 1..=3u32 {
            let ctx = GroupCtx::free(n).unwrap();
            let gens = ctx.generators();
            for r in 0..=4u32 {
                let b = ball(ctx, r as usize, &gens).unwrap();
                assert_eq!(b.len() as u64, free_ball_size(n as u64, r), "n={n} r={r}");
                let bigger = ball(ctx, r as usize + 1, &gens).unwrap();
                assert!(b.iter().all(|e| bigger.contains(e)));
            }
        }
    }

    #[test]
    fn radius_zero_is_identity() {
        let t = GroupCtx::torus(2, 4).unwrap();
        let b = ball(t, 0, &t.generators()).unwrap();
        assert_eq!(b.elements(), &[t.identity()]);
    }

    #[test]
    fn difference_windows() {
        let g = free2();
        let d = ball(g, 1, &g.generators()).unwrap();
        assert_eq!(window_product(&d, &d).unwrap().len(), 17);

        let t = GroupCtx::torus(1, 5).unwrap();
        let d = Window::from_ints(t, &[vec![0], vec![1]]).unwrap();
        let dd = window_product(&d, &d).unwrap();
        assert_eq!(dd.to_ints(), vec![vec![0], vec![1], vec![4]]);

        let id = Window::singleton(t.identity());
        assert_eq!(window_product(&id, &id).unwrap(), id);
    }

    #[test]
    fn canonical_order_is_length_lex() {
        let g = free2();
        let w = ball(g, 1, &g.generators()).unwrap();
        let shown: Vec<String> = w.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["[]", "[+1]", "[-1]", "[+2]", "[-2]"]);
    }

    #[test]
    fn text_forms() {
        let g = free2();
        let e = g.parse_element("[+1,-2]").unwrap();
        assert_eq!(e.to_string(), "[+1,-2]");
        assert_eq!(e.to_ints(), vec![1, -2]);
        let t = GroupCtx::torus(2, 5).unwrap();
        assert_eq!(t.parse_element("[3, 7]").unwrap().to_string(), "[3,2]");
        assert!(g.parse_element("[3]").is_err());
        assert!(t.parse_element("[1]").is_err());
    }

    #[test]
    fn window_specs() {
        let t = GroupCtx::torus(1, 5).unwrap();
        assert_eq!(
            parse_window_spec(t, "[1]").unwrap().to_ints(),
            vec![vec![1]]
        );
        assert_eq!(
            parse_window_spec(t, "[[2]]").unwrap().to_ints(),
            vec![vec![2]]
        );
        let g = free2();
        assert_eq!(parse_window_spec(g, "std").unwrap(), g.generators());
        assert_eq!(
            parse_window_spec(g, "[+1,-2]").unwrap().to_ints(),
            vec![vec![1], vec![-2]]
        );
        assert!(parse_window_spec(g, "[3]").is_err());
    }

    fn arb_word() -> impl Strategy<Value = Vec<i32>> {
        prop::collection::vec(
            prop_oneof![Just(1), Just(-1), Just(2), Just(-2), Just(3), Just(-3)],
            0..8,
        )
    }

    proptest! {
        #[test]
        fn free_group_laws(a in arb_word(), b in arb_word(), c in arb_word()) {
            let g = GroupCtx::free(3).unwrap();
            let (a, b, c) = (g.word(&a).unwrap(), g.word(&b).unwrap(), g.word(&c).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert!(a.mul(&a.inv()).unwrap().is_identity());
            prop_assert_eq!(a.mul(&g.identity()).unwrap(), a.clone());
            let w = a.letters().unwrap();
            prop_assert!(w.windows(2).all(|p| p[0] != -p[1]));
        }

        #[test]
        fn torus_group_laws(a in prop::collection::vec(-20i64..20, 2), b in prop::collection::vec(-20i64..20, 2), c in prop::collection::vec(-20i64..20, 2)) {
            let t = GroupCtx::torus(2, 7).unwrap();
            let (a, b, c) = (t.vector(&a).unwrap(), t.vector(&b).unwrap(), t.vector(&c).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert!(a.mul(&a.inv()).unwrap().is_identity());
            prop_assert!(a.coords().unwrap().iter().all(|&x| x < 7));
        }

        #[test]
        fn window_product_ignores_input_order(words in prop::collection::vec(arb_word(), 1..5)) {
            let g = GroupCtx::free(3).unwrap();
            let elems: Vec<GroupElement> = words.iter().map(|w| g.word(w).unwrap()).collect();
            let fwd = Window::new(g, elems.clone()).unwrap();
            let rev = Window::new(g, elems.into_iter().rev()).unwrap();
            prop_assert_eq!(window_product(&fwd, &fwd).unwrap(), window_product(&rev, &rev).unwrap());
        }
    }
}
