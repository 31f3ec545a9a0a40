//! Whitehead automorphisms, Whitehead minimization and primitivity.
//!
//! A second-kind automorphism `(x, Z)` fixes `x^±1` and sends a letter
//! `y` to `x^[y∈Z] · y · x^-[y^-1∈Z]`. Its effect on cyclic length is read
//! off the Whitehead graph: with `A = Z ∪ {x}`,
//! `||α(w)|| = ||w|| + cap(A) - deg(x)`, where `cap(A)` counts the edges
//! leaving `A`. The Whitehead graph has an edge `{x^-1, y}` for each cyclic
//! adjacency `x·y`; under this convention the commutator `abAB` gives a
//! 4-cycle.

use std::fmt;

use crate::error::{invalid, Result};
use crate::word::{CyclicWord, Letter, Rank, Word};

/// `x_i -> x_{σ(i)}^{ε_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WhiteheadFirstKind {
    /// `images[i]` is the image of generator `i+1`.
    images: Vec<Letter>,
}

impl WhiteheadFirstKind {
    /// `permutation[i] = σ(i+1)` (1-based values), `positive[i] = (ε_{i+1} == +1)`.
    pub fn new(permutation: &[usize], positive: &[bool]) -> Result<WhiteheadFirstKind> {
        let r = permutation.len();
        if positive.len() != r || r == 0 {
            return Err(invalid("permutation and sign vectors must have equal nonzero length"));
        }
        let mut seen = vec![false; r];
        for &p in permutation {
            if p == 0 || p > r || std::mem::replace(&mut seen[p - 1], true) {
                return Err(invalid(format!("{permutation:?} is not a permutation of 1..={r}")));
            }
        }
        Ok(WhiteheadFirstKind {
            images: permutation
                .iter()
                .zip(positive)
                .map(|(&p, &s)| Letter::new(p, s))
                .collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, x: Letter) -> Letter {
        let y = self.images[x.generator() - 1];
        if x.is_positive() {
            y
        } else {
            y.inverse()
        }
    }

    pub fn inverse(&self) -> WhiteheadFirstKind {
        let mut images = vec![Letter::new(1, true); self.images.len()];
        for (i, &y) in self.images.iter().enumerate() {
            images[y.generator() - 1] = Letter::new(i + 1, y.is_positive());
        }
        WhiteheadFirstKind { images }
    }
}

impl fmt::Display for WhiteheadFirstKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perm: Vec<String> = self.images.iter().map(|x| x.generator().to_string()).collect();
        let signs: Vec<&str> = self
            .images
            .iter()
            .map(|x| if x.is_positive() { "+" } else { "-" })
            .collect();
        write!(f, "W1[{};{}]", perm.join(","), signs.join(","))
    }
}

/// Second-kind automorphism `(x, Z)`, `Z ⊂ X^± \ {x, x^-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WhiteheadSecondKind {
    rank: Rank,
    multiplier: Letter,
    /// Bit `y.index()` set iff `y ∈ Z`.
    zset: u32,
}

impl WhiteheadSecondKind {
    pub fn new(rank: Rank, multiplier: Letter, zset: &[Letter]) -> Result<WhiteheadSecondKind> {
        let mut mask = 0u32;
        for &y in std::iter::once(&multiplier).chain(zset) {
            if y.generator() > rank.get() {
                return Err(invalid(format!("letter {y} exceeds rank {rank}")));
            }
        }
        for &y in zset {
            if y.generator() == multiplier.generator() {
                return Err(invalid(format!("Z may not contain {multiplier} or its inverse")));
            }
            mask |= 1 << y.index();
        }
        Ok(WhiteheadSecondKind { rank, multiplier, zset: mask })
    }

    pub(crate) fn from_mask(rank: Rank, multiplier: Letter, zset: u32) -> WhiteheadSecondKind {
        debug_assert_eq!(zset & (0b11 << (2 * (multiplier.generator() - 1))), 0);
        WhiteheadSecondKind { rank, multiplier, zset }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn multiplier(&self) -> Letter {
        self.multiplier
    }

    pub fn zset(&self) -> Vec<Letter> {
        self.rank.letters().filter(|y| self.contains(*y)).collect()
    }

    pub(crate) fn zmask(&self) -> u32 {
        self.zset
    }

    fn contains(&self, y: Letter) -> bool {
        self.zset >> y.index() & 1 == 1
    }

    pub fn is_identity(&self) -> bool {
        self.zset == 0
    }

    /// Push the image of `y` (unreduced) onto `out`.
    fn push_image(&self, y: Letter, out: &mut Vec<Letter>) {
        let x = self.multiplier;
        if y.generator() == x.generator() {
            out.push(y);
            return;
        }
        if self.contains(y) {
            out.push(x);
        }
        out.push(y);
        if self.contains(y.inverse()) {
            out.push(x.inverse());
        }
    }

    /// Inverse automorphism: multiplier `x^-1`, same `Z`.
    pub fn inverse(&self) -> WhiteheadSecondKind {
        WhiteheadSecondKind {
            multiplier: self.multiplier.inverse(),
            ..*self
        }
    }
}

impl fmt::Display for WhiteheadSecondKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W2[{};", self.multiplier)?;
        for y in self.zset() {
            write!(f, "{y}")?;
        }
        write!(f, "]")
    }
}

/// Either kind of Whitehead automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WhiteheadAutomorphism {
    First(WhiteheadFirstKind),
    Second(WhiteheadSecondKind),
}

impl WhiteheadAutomorphism {
    pub fn rank(&self) -> usize {
        match self {
            WhiteheadAutomorphism::First(a) => a.rank(),
            WhiteheadAutomorphism::Second(a) => a.rank.get(),
        }
    }

    /// Image of `w`, freely reduced. Fails if `w` uses generators above the
    /// automorphism's rank.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.max_generator() > self.rank() {
            return Err(invalid(format!(
                "word {w} has generators beyond automorphism rank {}",
                self.rank()
            )));
        }
        Ok(self.apply_letters(w.letters()))
    }

    pub(crate) fn apply_letters(&self, w: &[Letter]) -> Word {
        match self {
            WhiteheadAutomorphism::First(a) => Word::from_reduced(w.iter().map(|&x| a.image(x)).collect()),
            WhiteheadAutomorphism::Second(a) => apply_second_kind(a, w),
        }
    }

    pub fn inverse(&self) -> WhiteheadAutomorphism {
        match self {
            WhiteheadAutomorphism::First(a) => WhiteheadAutomorphism::First(a.inverse()),
            WhiteheadAutomorphism::Second(a) => WhiteheadAutomorphism::Second(a.inverse()),
        }
    }
}

impl From<WhiteheadFirstKind> for WhiteheadAutomorphism {
    fn from(a: WhiteheadFirstKind) -> Self {
        WhiteheadAutomorphism::First(a)
    }
}

impl From<WhiteheadSecondKind> for WhiteheadAutomorphism {
    fn from(a: WhiteheadSecondKind) -> Self {
        WhiteheadAutomorphism::Second(a)
    }
}

impl fmt::Display for WhiteheadAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WhiteheadAutomorphism::First(a) => a.fmt(f),
            WhiteheadAutomorphism::Second(a) => a.fmt(f),
        }
    }
}

pub(crate) fn apply_second_kind(a: &WhiteheadSecondKind, w: &[Letter]) -> Word {
    let mut raw = Vec::with_capacity(w.len() * 3);
    for &y in w {
        a.push_image(y, &mut raw);
    }
    Word::reduce(raw)
}

/// A sequence of Whitehead automorphisms, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AutomorphismChain {
    pub steps: Vec<WhiteheadAutomorphism>,
}

impl AutomorphismChain {
    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.steps.iter().try_fold(w.clone(), |acc, a| a.apply(&acc))
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for AutomorphismChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// All `(x, Z)` of the given rank: multiplier in base order, then `Z` by a
/// binary counter over the remaining letters in base order. Includes the
/// identities `Z = ∅`; `2r · 2^(2r-2)` in total.
pub fn enumerate_second_kind(rank: Rank) -> impl Iterator<Item = WhiteheadSecondKind> {
    rank.letters().flat_map(move |x| {
        let others: Vec<Letter> = rank.letters().filter(|y| y.generator() != x.generator()).collect();
        let count = 1u32 << others.len();
        (0..count).map(move |bits| {
            let mask = others
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .fold(0u32, |m, (_, y)| m | 1 << y.index());
            WhiteheadSecondKind::from_mask(rank, x, mask)
        })
    })
}

/// All `2^r · r!` first-kind automorphisms of the given rank.
pub fn enumerate_first_kind(rank: Rank) -> Vec<WhiteheadFirstKind> {
    let r = rank.get();
    let mut perms = vec![Vec::new()];
    for _ in 0..r {
        let mut next = Vec::new();
        for p in &perms {
            for g in 1..=r {
                if !p.contains(&g) {
                    let mut q = p.clone();
                    q.push(g);
                    next.push(q);
                }
            }
        }
        perms = next;
    }
    let mut out = Vec::new();
    for p in &perms {
        for signs in 0..1u32 << r {
            let pos: Vec<bool> = (0..r).map(|i| signs >> i & 1 == 0).collect();
            out.push(WhiteheadFirstKind::new(p, &pos).expect("valid permutation"));
        }
    }
    out
}

/// Capacities of every cut of the Whitehead graph of a cyclic word,
/// `cap[A]` for each subset `A` of the `2r` vertices.
pub(crate) struct CutTable {
    degree: Vec<u32>,
    cap: Vec<u32>,
    n: usize,
}

impl CutTable {
    pub(crate) fn new(letters: &[Letter], rank: usize) -> CutTable {
        let n = 2 * rank;
        let mut adj = vec![0u32; n * n];
        let mut degree = vec![0u32; n];
        let len = letters.len();
        for i in 0..len {
            let u = letters[i].inverse().index();
            let v = letters[(i + 1) % len].index();
            adj[u * n + v] += 1;
            adj[v * n + u] += 1;
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut cap = vec![0u32; 1 << n];
        for a in 1usize..1 << n {
            let v = a.trailing_zeros() as usize;
            let rest = a & (a - 1);
            let mut inner = 0;
            let mut bits = rest;
            while bits != 0 {
                let u = bits.trailing_zeros() as usize;
                inner += adj[v * n + u];
                bits &= bits - 1;
            }
            cap[a] = cap[rest] + degree[v] - 2 * inner;
        }
        CutTable { degree, cap, n }
    }

    /// `||α(w)|| - ||w||` for `α = (x, Z)`.
    pub(crate) fn length_change(&self, x: Letter, zmask: u32) -> i64 {
        let a = zmask as usize | 1 << x.index();
        self.cap[a] as i64 - self.degree[x.index()] as i64
    }

    /// Some second-kind automorphism strictly shortens the word.
    pub(crate) fn has_shortening(&self) -> bool {
        for xi in 0..self.n {
            let deg = self.degree[xi];
            if deg == 0 {
                continue;
            }
            let forbidden = 1usize << (xi ^ 1);
            let xbit = 1usize << xi;
            // subsets containing x and not x^-1
            let free = (self.cap.len() - 1) & !(forbidden | xbit);
            let mut sub = free;
            loop {
                if self.cap[sub | xbit] < deg {
                    return true;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
        }
        false
    }
}

fn rank_of(letters: &[Letter]) -> usize {
    letters.iter().map(|x| x.generator()).max().unwrap_or(1).max(1)
}

/// No Whitehead automorphism strictly decreases the cyclic length.
pub fn is_whitehead_minimal(w: &CyclicWord) -> bool {
    is_whitehead_minimal_letters(w.letters())
}

pub(crate) fn is_whitehead_minimal_letters(letters: &[Letter]) -> bool {
    if letters.is_empty() {
        return true;
    }
    !CutTable::new(letters, rank_of(letters)).has_shortening()
}

/// Greedy Whitehead descent. At each step the first strictly shortening
/// second-kind automorphism in [`enumerate_second_kind`] order is applied.
pub fn whitehead_minimize(w: &Word) -> (CyclicWord, AutomorphismChain) {
    let mut current = w.cyclic_reduce().core;
    let mut chain = AutomorphismChain::default();
    if current.is_empty() {
        return (CyclicWord::default(), chain);
    }
    let rank = Rank::new(rank_of(w.letters())).expect("word rank within MAX_RANK");
    'descent: loop {
        let table = CutTable::new(current.letters(), rank.get());
        if !table.has_shortening() {
            break;
        }
        for aut in enumerate_second_kind(rank) {
            if table.length_change(aut.multiplier, aut.zset) < 0 {
                let image = apply_second_kind(&aut, current.letters());
                debug_assert!(image.cyclic_length() < current.len());
                current = image.cyclic_reduce().core;
                chain.steps.push(aut.into());
                continue 'descent;
            }
        }
        unreachable!("cut table reported a shortening automorphism");
    }
    (current.to_cyclic(), chain)
}

/// Primitive iff Whitehead minimization reaches cyclic length 1.
pub fn is_primitive(w: &Word) -> bool {
    !w.is_empty() && whitehead_minimize(w).0.len() == 1
}

/// Number of generators occurring in the Whitehead-minimal form, which is
/// the rank of the smallest free factor containing `w`.
pub fn minimal_free_factor_rank(w: &Word) -> usize {
    whitehead_minimize(w).0.support_size()
}

/// Whitehead graph on `X^±` of a cyclic word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadGraph {
    rank: usize,
    /// Symmetric `2r × 2r` multiplicity matrix.
    mult: Vec<u32>,
    reduced: bool,
}

/// Whitehead graph of `w` over generators `1..=max_generator(w)`.
pub fn whitehead_graph(w: &CyclicWord, reduced: bool) -> Result<WhiteheadGraph> {
    WhiteheadGraph::new(w, w.max_generator(), reduced)
}

impl WhiteheadGraph {
    pub fn new(w: &CyclicWord, rank: usize, reduced: bool) -> Result<WhiteheadGraph> {
        if w.is_empty() {
            return Err(invalid("Whitehead graph of the trivial word"));
        }
        if w.max_generator() > rank {
            return Err(invalid(format!("word {w} exceeds rank {rank}")));
        }
        let n = 2 * rank;
        let mut mult = vec![0u32; n * n];
        let l = w.letters();
        for i in 0..l.len() {
            let u = l[i].inverse().index();
            let v = l[(i + 1) % l.len()].index();
            if u == v {
                // impossible for cyclically reduced words
                continue;
            }
            mult[u * n + v] += 1;
            mult[v * n + u] += 1;
        }
        if reduced {
            for m in &mut mult {
                *m = (*m).min(1);
            }
        }
        Ok(WhiteheadGraph { rank, mult, reduced })
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.rank
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn multiplicity(&self, u: Letter, v: Letter) -> u32 {
        self.mult[u.index() * self.vertex_count() + v.index()]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.mult[u * self.vertex_count() + v] > 0
    }

    /// Edges `{u, v}` with `u < v` in base order, with multiplicity.
    pub fn edges(&self) -> Vec<(Letter, Letter, u32)> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let m = self.mult[u * n + v];
                if m > 0 {
                    let (a, b) = (Letter::from_index(u), Letter::from_index(v));
                    out.push((a.min(b), a.max(b), m));
                }
            }
        }
        out.sort();
        out
    }

    /// Total edge multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges().iter().map(|e| e.2 as usize).sum()
    }

    /// Length of a shortest cycle, ignoring multiplicities. `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        for u in 0..n {
            for v in u + 1..n {
                if !self.adjacent(u, v) {
                    continue;
                }
                // shortest u-v path avoiding the edge {u, v}
                let mut dist = vec![usize::MAX; n];
                let mut queue = std::collections::VecDeque::new();
                dist[u] = 0;
                queue.push_back(u);
                while let Some(p) = queue.pop_front() {
                    for q in 0..n {
                        if !self.adjacent(p, q) || dist[q] != usize::MAX {
                            continue;
                        }
                        if (p == u && q == v) || (p == v && q == u) {
                            continue;
                        }
                        dist[q] = dist[p] + 1;
                        queue.push_back(q);
                    }
                }
                if dist[v] != usize::MAX {
                    let len = dist[v] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
        best
    }

    /// Length of a shortest closed walk of length at least 3 that never
    /// turns back along the edge it arrived on. This is what `T(q)` needs:
    /// two parallel edges already give such a walk of length 4. Only
    /// meaningful on an unreduced graph. `None` if there is none.
    pub fn shortest_closed_walk(&self) -> Option<usize> {
        if !self.triangles().is_empty() {
            return Some(3);
        }
        let parallel = self.mult.iter().any(|&m| m > 1);
        match (parallel, self.girth()) {
            (true, g) => Some(g.map_or(4, |g| g.min(4))),
            (false, g) => g,
        }
    }

    /// Vertex triples spanning a triangle, each listed once.
    pub fn triangles(&self) -> Vec<[Letter; 3]> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !self.adjacent(u, v) {
                    continue;
                }
                for t in v + 1..n {
                    if self.adjacent(u, t) && self.adjacent(v, t) {
                        out.push([Letter::from_index(u), Letter::from_index(v), Letter::from_index(t)]);
                    }
                }
            }
        }
        out
    }
}
