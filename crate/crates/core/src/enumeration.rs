//! Orbit enumeration.
//!
//! Words are enumerated by an [`Odometer`] over fixed-length letter
//! sequences. A prefix is abandoned as soon as some subword `v` of it (or
//! `v^-1`) can be relabelled by a first-kind automorphism into something
//! lexicographically smaller than the prefix of the same length, since then
//! no completion is shortlex-least in its PCI± class (generator
//! permutations, generator inversions, cyclic permutations, group
//! inversion). The odometer then advances at the last position of `v`.
//!
//! Survivors that are Whitehead minimal are the vertices of the SLPCI±
//! graph; edges come from length-preserving second-kind automorphisms
//! followed by PCI± minimization. Each connected component is one
//! `Aut(F_r)`-orbit of cyclic subgroups, represented by its shortlex-least
//! vertex.
//!
//! A word whose support has `s` generators is represented over generators
//! `1..=s`: the least relabelling assigns first-seen generators to
//! `s, s-1, ...`, each as an inverse letter.

use std::collections::{BTreeMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::whitehead::{apply_second_kind, enumerate_second_kind, is_whitehead_minimal_letters, CutTable};
use crate::word::{CyclicWord, Letter, Rank};

/// Which operations generate the class: PCI, or PCI± with group inversion.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct PciClassSpec {
    pub include_group_inverse: bool,
}

impl PciClassSpec {
    pub const PCI: PciClassSpec = PciClassSpec { include_group_inverse: false };
    pub const PCI_PM: PciClassSpec = PciClassSpec { include_group_inverse: true };
}

impl Default for PciClassSpec {
    fn default() -> Self {
        PciClassSpec::PCI_PM
    }
}

/// Least first-kind relabelling, built one letter at a time.
#[derive(Clone, Copy)]
struct Relabel {
    /// `map[g]`: signed image generator of `x_g`, 0 if unassigned.
    map: [i8; 16],
    next: i8,
}

impl Relabel {
    fn new(top: usize) -> Relabel {
        Relabel { map: [0; 16], next: top as i8 }
    }

    #[inline]
    fn image(&mut self, x: Letter) -> Letter {
        let raw = x.raw();
        let g = raw.unsigned_abs() as usize;
        if self.map[g] == 0 {
            self.map[g] = if raw > 0 { -self.next } else { self.next };
            self.next -= 1;
        }
        Letter::from_raw(if raw > 0 { self.map[g] } else { -self.map[g] })
    }
}

/// Iterate the letters of a rotation of `l` (or of `l^-1`).
#[inline]
fn rotated(l: &[Letter], start: usize, inverse: bool, k: usize) -> Letter {
    let n = l.len();
    if inverse {
        l[(start + n - k % n) % n].inverse()
    } else {
        l[(start + k) % n]
    }
}

/// Shortlex-least element of the PCI (or PCI±) class of `w`.
pub fn slpci_minimal_rep(w: &CyclicWord, spec: PciClassSpec) -> CyclicWord {
    CyclicWord::from_canonical(slpci_rep_letters(w.letters(), spec))
}

pub(crate) fn slpci_rep_letters(l: &[Letter], spec: PciClassSpec) -> Vec<Letter> {
    let n = l.len();
    if n == 0 {
        return Vec::new();
    }
    let top = crate::word::support_mask(l).count_ones() as usize;
    let mut best: Vec<Letter> = Vec::with_capacity(n);
    let mut buf: Vec<Letter> = Vec::with_capacity(n);
    let directions: &[bool] = if spec.include_group_inverse { &[false, true] } else { &[false] };
    for &inverse in directions {
        for start in 0..n {
            let mut relabel = Relabel::new(top);
            buf.clear();
            let mut state = if best.is_empty() { std::cmp::Ordering::Less } else { std::cmp::Ordering::Equal };
            for k in 0..n {
                let y = relabel.image(rotated(l, start, inverse, k));
                if state == std::cmp::Ordering::Equal {
                    state = y.cmp(&best[k]);
                    if state == std::cmp::Ordering::Greater {
                        break;
                    }
                }
                buf.push(y);
            }
            if state == std::cmp::Ordering::Less {
                std::mem::swap(&mut best, &mut buf);
            }
        }
    }
    best
}

/// `w` equals its PCI(±) representative. Decided by the subword test: some
/// rotation of `w` (or `w^-1`), relabelled, beats `w` on a prefix.
pub fn is_slpci_minimal(w: &CyclicWord, spec: PciClassSpec) -> bool {
    is_slpci_minimal_letters(w.letters(), spec)
}

pub(crate) fn is_slpci_minimal_letters(l: &[Letter], spec: PciClassSpec) -> bool {
    let n = l.len();
    let top = crate::word::support_mask(l).count_ones() as usize;
    let directions: &[bool] = if spec.include_group_inverse { &[false, true] } else { &[false] };
    for &inverse in directions {
        for start in 0..n {
            let mut relabel = Relabel::new(top);
            for (k, &target) in l.iter().enumerate() {
                let y = relabel.image(rotated(l, start, inverse, k));
                if y != target {
                    if y < target {
                        return false;
                    }
                    break;
                }
            }
        }
    }
    true
}

/// Fixed-length letter sequences over the `2s` letters of rank `s`, in
/// lexicographic order. Digit `d` is the `d`-th letter in base order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Odometer {
    rank: usize,
    digits: Vec<u8>,
}

impl Odometer {
    pub fn new(rank: Rank, length: usize) -> Odometer {
        Odometer { rank: rank.get(), digits: vec![0; length] }
    }

    /// Odometer positioned at `letters` (which must lie in `rank`).
    pub fn at(rank: Rank, letters: &[Letter]) -> Result<Odometer> {
        let r = rank.get() as i8;
        let digits = letters
            .iter()
            .map(|x| {
                let raw = x.raw();
                if raw.unsigned_abs() as i8 > r {
                    Err(invalid(format!("letter {x} exceeds rank {rank}")))
                } else if raw < 0 {
                    Ok((raw + r) as u8)
                } else {
                    Ok((raw + r - 1) as u8)
                }
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Odometer { rank: rank.get(), digits })
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    #[inline]
    fn letter_of(&self, d: u8) -> Letter {
        let r = self.rank as i8;
        let d = d as i8;
        Letter::from_raw(if d < r { d - r } else { d - r + 1 })
    }

    #[inline]
    pub fn letter(&self, pos: usize) -> Letter {
        self.letter_of(self.digits[pos])
    }

    pub fn current(&self) -> Vec<Letter> {
        self.digits.iter().map(|&d| self.letter_of(d)).collect()
    }

    /// Increment the digit at `pos`, carrying leftwards and resetting every
    /// later digit to the least letter. Positions below `floor` never change:
    /// a carry into them exhausts the odometer. Returns the leftmost changed
    /// position, or `None` when exhausted.
    pub fn increment_at(&mut self, pos: usize, floor: usize) -> Option<usize> {
        let base = 2 * self.rank as u8;
        for d in &mut self.digits[pos + 1..] {
            *d = 0;
        }
        let mut p = pos;
        loop {
            if self.digits[p] + 1 < base {
                self.digits[p] += 1;
                return Some(p);
            }
            self.digits[p] = 0;
            if p == floor {
                return None;
            }
            p -= 1;
        }
    }
}

/// Partition of the odometer space by length-`prefix_depth` prefixes.
/// A prefix with lexicographic index `i` belongs to shard `i % total_shards`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ShardSpec {
    pub total_shards: usize,
    pub shard_index: usize,
    pub prefix_depth: usize,
}

impl ShardSpec {
    pub fn single() -> ShardSpec {
        ShardSpec { total_shards: 1, shard_index: 0, prefix_depth: 1 }
    }

    pub fn new(total_shards: usize, shard_index: usize, prefix_depth: usize) -> Result<ShardSpec> {
        if total_shards == 0 || shard_index >= total_shards {
            return Err(invalid(format!("shard index {shard_index} not below shard count {total_shards}")));
        }
        if prefix_depth == 0 {
            return Err(invalid("prefix depth must be positive"));
        }
        Ok(ShardSpec { total_shards, shard_index, prefix_depth })
    }

    fn owns(&self, digits: &[u8], base: u64) -> bool {
        if self.total_shards == 1 {
            return true;
        }
        let index = digits.iter().fold(0u64, |acc, &d| acc.wrapping_mul(base).wrapping_add(d as u64));
        index % self.total_shards as u64 == self.shard_index as u64
    }
}

/// Full-support candidate search in one rank.
struct CandidateSearch {
    rank: usize,
    length: usize,
}

impl CandidateSearch {
    /// Can the word with positions `..=j` fixed still be a candidate?
    fn position_ok(&self, od: &Odometer, j: usize) -> bool {
        let x = od.letter(j);
        if j > 0 && x == od.letter(j - 1).inverse() {
            return false;
        }
        if j + 1 == self.length && self.length > 1 && x == od.letter(0).inverse() {
            return false;
        }
        // enough room left to introduce every generator
        let mut used = 0u64;
        for p in 0..=j {
            used |= 1 << (od.letter(p).generator() - 1);
        }
        if (self.rank - used.count_ones() as usize) > self.length - 1 - j {
            return false;
        }
        // forward subwords v = w[i..=j]
        for i in 0..=j {
            let mut relabel = Relabel::new(self.rank);
            for k in 0..=j - i {
                let y = relabel.image(od.letter(i + k));
                let t = od.letter(k);
                if y != t {
                    if y < t {
                        return false;
                    }
                    break;
                }
            }
        }
        // inverse subwords v^-1 with v ending at j
        let mut relabel = Relabel::new(self.rank);
        for k in 0..=j {
            let y = relabel.image(od.letter(j - k).inverse());
            let t = od.letter(k);
            if y != t {
                if y < t {
                    return false;
                }
                break;
            }
        }
        true
    }

    /// Visit the candidates whose first `prefix.len()` letters are fixed by
    /// `od`, starting at its current state. `verified` positions are known good.
    fn run(
        &self,
        od: &mut Odometer,
        floor: usize,
        mut verified: usize,
        shard: Option<&ShardSpec>,
        emit: &mut dyn FnMut(&[Letter]),
    ) {
        let n = self.length;
        let base = 2 * self.rank as u64;
        if n == 0 {
            return;
        }
        let mut letters = Vec::with_capacity(n);
        loop {
            let mut failed = None;
            for j in verified..n {
                let mut ok = self.position_ok(od, j);
                if ok {
                    if let Some(s) = shard {
                        if j + 1 == s.prefix_depth.min(n) && !s.owns(&od.digits[..=j], base) {
                            ok = false;
                        }
                    }
                }
                if !ok {
                    failed = Some(j);
                    break;
                }
            }
            let bump = match failed {
                Some(j) => j,
                None => {
                    letters.clear();
                    letters.extend(od.current());
                    if is_slpci_minimal_letters(&letters, PciClassSpec::PCI_PM)
                        && is_whitehead_minimal_letters(&letters)
                    {
                        emit(&letters);
                    }
                    n - 1
                }
            };
            match od.increment_at(bump, floor) {
                Some(p) => verified = p,
                None => return,
            }
        }
    }

    /// Valid prefixes of length `depth` (each passing every position test).
    fn prefixes(&self, depth: usize) -> Vec<Odometer> {
        let mut out = Vec::new();
        if depth == 0 {
            out.push(Odometer { rank: self.rank, digits: vec![0; self.length] });
            return out;
        }
        let mut od = Odometer { rank: self.rank, digits: vec![0; self.length] };
        let mut verified = 0;
        loop {
            let mut failed = None;
            for j in verified..depth {
                if !self.position_ok(&od, j) {
                    failed = Some(j);
                    break;
                }
            }
            let bump = match failed {
                Some(j) => j,
                None => {
                    out.push(od.clone());
                    depth - 1
                }
            };
            match od.increment_at(bump, 0) {
                Some(p) => verified = p,
                None => return out,
            }
        }
    }
}

/// Split depth giving enough independent subtrees for the thread pool.
fn parallel_depth(search: &CandidateSearch) -> usize {
    let mut depth = 0;
    while depth < search.length.saturating_sub(2) && depth < 8 {
        depth += 1;
        if search.prefixes(depth).len() >= 256 {
            break;
        }
    }
    depth
}

/// Full-support candidates of rank `s` and length `length`, in shortlex
/// order, optionally restricted to one shard.
pub fn full_support_candidates(rank: Rank, length: usize, shard: Option<&ShardSpec>) -> Vec<CyclicWord> {
    let mut out = Vec::new();
    for_each_full_support_candidate(rank, length, shard, &mut |l| out.push(CyclicWord::from_canonical(l.to_vec())));
    out
}

/// Sequential visit of full-support candidates.
pub fn for_each_full_support_candidate(
    rank: Rank,
    length: usize,
    shard: Option<&ShardSpec>,
    emit: &mut dyn FnMut(&[Letter]),
) {
    let search = CandidateSearch { rank: rank.get(), length };
    if length == 0 || rank.get() > length {
        return;
    }
    let mut od = Odometer { rank: rank.get(), digits: vec![0; length] };
    search.run(&mut od, 0, 0, shard, emit);
}

/// Blocks of the candidate space: valid prefixes at a fixed depth, each an
/// independent unit of work. Used for parallel and resumable runs.
#[derive(Clone, Debug)]
pub struct CandidateBlocks {
    rank: Rank,
    length: usize,
    depth: usize,
    prefixes: Vec<Odometer>,
}

impl CandidateBlocks {
    pub fn new(rank: Rank, length: usize, shard: Option<&ShardSpec>) -> CandidateBlocks {
        let search = CandidateSearch { rank: rank.get(), length };
        if length == 0 || rank.get() > length {
            return CandidateBlocks { rank, length, depth: 0, prefixes: Vec::new() };
        }
        let mut depth = parallel_depth(&search);
        if let Some(s) = shard {
            depth = depth.max(s.prefix_depth.min(length));
        }
        let base = 2 * rank.get() as u64;
        let prefixes = search
            .prefixes(depth)
            .into_iter()
            .filter(|od| match shard {
                Some(s) if depth > 0 => {
                    let k = s.prefix_depth.min(length);
                    s.owns(&od.digits[..k], base)
                }
                _ => true,
            })
            .collect();
        CandidateBlocks { rank, length, depth, prefixes }
    }

    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    /// Letters of the prefix of block `i`.
    pub fn prefix(&self, i: usize) -> Vec<Letter> {
        self.prefixes[i].current()[..self.depth].to_vec()
    }

    /// Candidates of block `i`, in shortlex order.
    pub fn candidates(&self, i: usize) -> Vec<CyclicWord> {
        let search = CandidateSearch { rank: self.rank.get(), length: self.length };
        let mut od = self.prefixes[i].clone();
        let mut out = Vec::new();
        if self.depth == self.length {
            let l = od.current();
            if is_slpci_minimal_letters(&l, PciClassSpec::PCI_PM) && is_whitehead_minimal_letters(&l) {
                out.push(CyclicWord::from_canonical(l));
            }
            return out;
        }
        search.run(&mut od, self.depth, self.depth, None, &mut |l| {
            out.push(CyclicWord::from_canonical(l.to_vec()))
        });
        out
    }
}

/// Cyclically reduced, SLPCI± minimal, Whitehead minimal words of length
/// `length` over every support size up to `rank`, in shortlex order.
pub fn enumerate_candidates(rank: Rank, length: usize) -> Vec<CyclicWord> {
    let mut out: Vec<CyclicWord> = (1..=rank.get())
        .flat_map(|s| full_support_candidates_parallel(Rank::new(s).expect("s <= rank"), length))
        .collect();
    out.sort();
    out
}

fn full_support_candidates_parallel(rank: Rank, length: usize) -> Vec<CyclicWord> {
    let blocks = CandidateBlocks::new(rank, length, None);
    (0..blocks.len())
        .into_par_iter()
        .flat_map_iter(|i| blocks.candidates(i))
        .collect()
}

/// Vertices of one SLPCI± graph component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitComponent {
    pub members: Vec<CyclicWord>,
    pub minimum: CyclicWord,
}

impl OrbitComponent {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Result of [`explore_component`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exploration {
    /// `w` is the least vertex of its component.
    Minimum(OrbitComponent),
    /// A shortlex predecessor of `w` was met.
    EarlyExit { predecessor: CyclicWord },
}

impl Exploration {
    pub fn is_global_min(&self) -> bool {
        matches!(self, Exploration::Minimum(_))
    }
}

/// SLPCI± neighbours of a vertex, in automorphism enumeration order.
pub fn slpci_neighbours(w: &CyclicWord) -> Vec<CyclicWord> {
    let mut out = Vec::new();
    for_each_neighbour(w.letters(), &mut |n| {
        out.push(n);
        true
    });
    out
}

fn for_each_neighbour(l: &[Letter], visit: &mut dyn FnMut(CyclicWord) -> bool) {
    let s = crate::word::support_mask(l).count_ones() as usize;
    if l.is_empty() || s == 0 {
        return;
    }
    let rank = Rank::new(s).expect("support within MAX_RANK");
    let table = CutTable::new(l, s);
    for aut in enumerate_second_kind(rank) {
        if aut.is_identity() || table.length_change(aut.multiplier(), aut.zmask()) != 0 {
            continue;
        }
        let image = apply_second_kind(&aut, l);
        let core = image.cyclic_reduce().core;
        debug_assert_eq!(core.len(), l.len());
        let rep = CyclicWord::from_canonical(slpci_rep_letters(core.letters(), PciClassSpec::PCI_PM));
        if !visit(rep) {
            return;
        }
    }
}

/// Breadth-first search of the component of `w` (which must be SLPCI± and
/// Whitehead minimal), abandoning it as soon as a shortlex predecessor of
/// `w` appears.
pub fn explore_component(w: &CyclicWord) -> Exploration {
    bfs(w, true)
}

/// The whole component containing `w`, with no early exit.
pub fn component_of(w: &CyclicWord) -> OrbitComponent {
    let start = slpci_minimal_rep(w, PciClassSpec::PCI_PM);
    match bfs(&start, false) {
        Exploration::Minimum(c) => c,
        Exploration::EarlyExit { .. } => unreachable!("early exit disabled"),
    }
}

fn bfs(w: &CyclicWord, early_exit: bool) -> Exploration {
    let mut seen: HashSet<CyclicWord> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(w.clone());
    queue.push_back(w.clone());
    let mut predecessor = None;
    while let Some(u) = queue.pop_front() {
        for_each_neighbour(u.letters(), &mut |n| {
            if early_exit && n < *w {
                predecessor = Some(n);
                return false;
            }
            if !seen.contains(&n) {
                seen.insert(n.clone());
                queue.push_back(n);
            }
            true
        });
        if let Some(p) = predecessor.take() {
            return Exploration::EarlyExit { predecessor: p };
        }
    }
    let mut members: Vec<CyclicWord> = seen.into_iter().collect();
    members.sort();
    let minimum = members[0].clone();
    Exploration::Minimum(OrbitComponent { members, minimum })
}

/// One representative per orbit, with the size of its component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRep {
    pub word: CyclicWord,
    pub component_size: usize,
}

/// Orbit representatives of full support `rank` among the candidates of
/// the given shard, in shortlex order.
pub fn orbit_reps_in_shard(rank: Rank, length: usize, shard: Option<&ShardSpec>) -> Vec<OrbitRep> {
    let blocks = CandidateBlocks::new(rank, length, shard);
    (0..blocks.len())
        .into_par_iter()
        .flat_map_iter(|i| reps_of_block(&blocks, i))
        .collect()
}

pub(crate) fn reps_of_block(blocks: &CandidateBlocks, i: usize) -> Vec<OrbitRep> {
    blocks
        .candidates(i)
        .into_iter()
        .filter_map(|c| match explore_component(&c) {
            Exploration::Minimum(comp) => Some(OrbitRep { word: c, component_size: comp.len() }),
            Exploration::EarlyExit { .. } => None,
        })
        .collect()
}

/// Shortlex-least generator of each `Aut(F_r)`-orbit of cyclic subgroups
/// whose minimal generator length is `length`. With `full_support_only`,
/// only orbits not contained in a proper free factor.
pub fn enumerate_orbit_reps(rank: Rank, length: usize, full_support_only: bool) -> Vec<CyclicWord> {
    let supports = if full_support_only { rank.get()..=rank.get() } else { 1..=rank.get() };
    let mut out: Vec<CyclicWord> = supports
        .flat_map(|s| orbit_reps_in_shard(Rank::new(s).expect("s <= rank"), length, None))
        .map(|r| r.word)
        .collect();
    out.sort();
    out
}

/// Number of SLPCI± components of each size, over every support size up
/// to `rank`.
pub fn component_size_histogram(rank: Rank, length: usize) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for s in 1..=rank.get() {
        for rep in orbit_reps_in_shard(Rank::new(s).expect("s <= rank"), length, None) {
            *hist.entry(rep.component_size).or_insert(0) += 1;
        }
    }
    hist
}
