//! Naive reference implementations and proptest strategies shared by the
//! integration tests. Nothing here reuses the search code under test.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use proptest::prelude::*;
use relcensus::whitehead::{enumerate_first_kind, enumerate_second_kind, is_primitive, WhiteheadAutomorphism};
use relcensus::{CyclicWord, Letter, Rank, Word};

pub mod props;

pub fn rank(r: usize) -> Rank {
    Rank::new(r).unwrap()
}

pub fn all_letters(r: usize) -> Vec<Letter> {
    (0..2 * r).map(Letter::from_index).collect()
}

/// Generator images of an endomorphism: `images[g - 1]` is the image of `x_g`.
pub type Images = Vec<Vec<Letter>>;

pub fn apply_images(images: &Images, w: &[Letter]) -> Word {
    Word::reduce(w.iter().flat_map(|&x| {
        let img = &images[x.generator() - 1];
        let v: Vec<Letter> =
            if x.is_positive() { img.clone() } else { img.iter().rev().map(|y| y.inverse()).collect() };
        v
    }))
}

/// Every second-kind Whitehead automorphism, identities included.
pub fn second_kind_images(r: usize) -> Vec<Images> {
    let mut out = Vec::new();
    for a in all_letters(r) {
        let others: Vec<usize> = (1..=r).filter(|&g| g != a.generator()).collect();
        for choice in 0..4usize.pow(others.len() as u32) {
            let mut images: Images = (1..=r).map(|g| vec![Letter::new(g, true)]).collect();
            let mut c = choice;
            for &g in &others {
                let x = Letter::new(g, true);
                images[g - 1] = match c % 4 {
                    0 => vec![x],
                    1 => vec![x, a],
                    2 => vec![a.inverse(), x],
                    _ => vec![a.inverse(), x, a],
                };
                c /= 4;
            }
            out.push(images);
        }
    }
    out
}

/// Every signed permutation of the generators.
pub fn first_kind_images(r: usize) -> Vec<Images> {
    fn perms(r: usize) -> Vec<Vec<usize>> {
        if r == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(r - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, r);
                out.push(q);
            }
        }
        out
    }
    let mut out = Vec::new();
    for p in perms(r) {
        for signs in 0..1usize << r {
            out.push((0..r).map(|i| vec![Letter::new(p[i], signs >> i & 1 == 0)]).collect());
        }
    }
    out
}

pub fn is_cyclically_reduced(w: &[Letter]) -> bool {
    let n = w.len();
    (0..n).all(|i| n < 2 || w[(i + 1) % n] != w[i].inverse())
}

pub fn support_size(w: &[Letter]) -> usize {
    w.iter().map(|x| x.generator()).collect::<BTreeSet<_>>().len()
}

/// No second-kind automorphism shortens the cyclic length.
pub fn naive_is_whitehead_minimal(w: &[Letter], r: usize) -> bool {
    second_kind_images(r).iter().all(|im| apply_images(im, w).cyclic_length() >= w.len())
}

pub fn inverse_of(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|x| x.inverse()).collect()
}

/// Least word among all images under signed generator permutations,
/// rotations and inversion.
pub fn naive_slpci_min(w: &[Letter], r: usize) -> Vec<Letter> {
    let n = w.len();
    let mut best: Option<Vec<Letter>> = None;
    for im in first_kind_images(r) {
        let relabelled: Vec<Letter> = apply_images(&im, w).letters().to_vec();
        for base in [relabelled.clone(), inverse_of(&relabelled)] {
            for k in 0..n {
                let mut rot = base.clone();
                rot.rotate_left(k);
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
    }
    best.unwrap_or_default()
}

/// All words of length `n` over the `2r` letters with no cancelling pair,
/// cyclically included.
pub fn cyclically_reduced_words(r: usize, n: usize) -> Vec<Vec<Letter>> {
    let letters = all_letters(r);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(letters: &[Letter], n: usize, cur: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if cur.len() == n {
            if n < 2 || cur[0] != cur[n - 1].inverse() {
                out.push(cur.clone());
            }
            return;
        }
        for &x in letters {
            if cur.last().is_some_and(|&y| y == x.inverse()) {
                continue;
            }
            cur.push(x);
            rec(letters, n, cur, out);
            cur.pop();
        }
    }
    rec(&letters, n, &mut cur, &mut out);
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut x = x;
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.0[a.max(b)] = a.min(b);
        true
    }
}

/// Partition of the Whitehead-minimal cyclic words of length `n` in `F_r`
/// into classes joined by length-preserving Whitehead automorphisms,
/// rotation and inversion. Only classes with every member of full support
/// are kept; each is returned as its set of PCI±-least members.
pub fn naive_orbit_partition(r: usize, n: usize) -> BTreeSet<BTreeSet<Vec<Letter>>> {
    let words: Vec<Vec<Letter>> =
        cyclically_reduced_words(r, n).into_iter().filter(|w| naive_is_whitehead_minimal(w, r)).collect();
    let index: HashMap<Vec<Letter>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut uf = UnionFind::new(words.len());
    let mut autos = first_kind_images(r);
    autos.extend(second_kind_images(r));
    for (i, w) in words.iter().enumerate() {
        let mut rot = w.clone();
        rot.rotate_left(1);
        uf.union(i, index[&rot]);
        uf.union(i, index[&inverse_of(w)]);
        for im in &autos {
            let image = apply_images(im, w);
            let core = image.cyclic_reduce().core;
            if core.len() == n {
                uf.union(i, index[core.letters()]);
            }
        }
    }
    let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..words.len() {
        classes.entry(uf.find(i)).or_default().push(i);
    }
    classes
        .into_values()
        .filter(|c| c.iter().all(|&i| support_size(&words[i]) == r))
        .map(|c| c.into_iter().filter(|&i| naive_slpci_min(&words[i], r) == words[i]).map(|i| words[i].clone()).collect())
        .collect()
}

/// Folded quotient of the cycle reading `w`, with cycle positions glued
/// according to `block`. Returns the position-to-vertex map and the edge
/// list `(from, to, generator)`.
fn fold_cycle(w: &[Letter], block: &[usize]) -> (Vec<usize>, Vec<(usize, usize, usize)>) {
    let n = w.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        uf.union(i, block[i]);
    }
    let edges: Vec<(usize, usize, usize)> = (0..n)
        .map(|i| {
            let (u, v) = (i, (i + 1) % n);
            if w[i].is_positive() {
                (u, v, w[i].generator())
            } else {
                (v, u, w[i].generator())
            }
        })
        .collect();
    loop {
        let mut changed = false;
        let mut out: HashMap<(usize, usize), usize> = HashMap::new();
        let mut inc: HashMap<(usize, usize), usize> = HashMap::new();
        for &(u, v, g) in &edges {
            let (fu, fv) = (uf.find(u), uf.find(v));
            if let Some(&t) = out.get(&(fu, g)) {
                changed |= uf.union(t, fv);
            } else {
                out.insert((fu, g), fv);
            }
            let fu = uf.find(u);
            if let Some(&s) = inc.get(&(uf.find(v), g)) {
                changed |= uf.union(s, fu);
            } else {
                inc.insert((uf.find(v), g), fu);
            }
        }
        if !changed {
            break;
        }
    }
    let pos: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    let mut e: Vec<(usize, usize, usize)> = edges.iter().map(|&(u, v, g)| (pos[u], pos[v], g)).collect();
    e.sort_unstable();
    e.dedup();
    (pos, e)
}

/// `w` read in the spanning-tree basis of the folded quotient, and the rank.
fn word_in_quotient(w: &[Letter], pos: &[usize], edges: &[(usize, usize, usize)]) -> (Word, usize) {
    let vertices: BTreeSet<usize> = edges.iter().flat_map(|&(u, v, _)| [u, v]).chain([pos[0]]).collect();
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, &(u, v, _)) in edges.iter().enumerate() {
        adj.entry(u).or_default().push(k);
        adj.entry(v).or_default().push(k);
    }
    let mut tree = vec![false; edges.len()];
    let mut seen: BTreeSet<usize> = [pos[0]].into();
    let mut queue = VecDeque::from([pos[0]]);
    while let Some(x) = queue.pop_front() {
        for &k in &adj[&x] {
            let (u, v, _) = edges[k];
            let y = if u == x { v } else { u };
            if seen.insert(y) {
                tree[k] = true;
                queue.push_back(y);
            }
        }
    }
    let mut id = vec![0usize; edges.len()];
    let mut next = 0;
    for k in 0..edges.len() {
        if !tree[k] {
            next += 1;
            id[k] = next;
        }
    }
    let n = w.len();
    let mut image = Vec::new();
    for i in 0..n {
        let (a, b) = (pos[i], pos[(i + 1) % n]);
        let g = w[i].generator();
        let key = if w[i].is_positive() { (a, b, g) } else { (b, a, g) };
        let k = edges.binary_search(&key).expect("edge of the quotient");
        if !tree[k] {
            image.push(Letter::new(id[k], w[i].is_positive()));
        }
    }
    debug_assert_eq!(next, edges.len() + 1 - vertices.len());
    (Word::reduce(image), next)
}

/// Imprimitivity rank by brute force over every gluing of the positions of
/// the cycle reading `w`: each subgroup containing `w` restricts to such a
/// quotient, whose fundamental group is a free factor of it. `None` means
/// primitive.
pub fn naive_irank(w: &[Letter]) -> Option<usize> {
    let n = w.len();
    let mut best: Option<usize> = None;
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, w: &[Letter], best: &mut Option<usize>) {
        let n = w.len();
        if i == n {
            let mut first = HashMap::new();
            let block: Vec<usize> = (0..n).map(|j| *first.entry(rgs[j]).or_insert(j)).collect();
            let (pos, edges) = fold_cycle(w, &block);
            let vertices: BTreeSet<usize> = edges.iter().flat_map(|&(u, v, _)| [u, v]).collect();
            let r = edges.len() + 1 - vertices.len();
            if best.is_some_and(|b| r >= b) {
                return;
            }
            let (image, k) = word_in_quotient(w, &pos, &edges);
            debug_assert_eq!(k, r);
            if !is_primitive(&image) {
                *best = Some(r);
            }
            return;
        }
        for b in 0..=max + 1 {
            rgs[i] = b;
            rec(i + 1, max.max(b), rgs, w, best);
        }
    }
    if n == 0 {
        return Some(0);
    }
    rgs[0] = 0;
    rec(1, 0, &mut rgs, w, &mut best);
    best
}

pub fn letter_strategy(r: usize) -> impl Strategy<Value = Letter> {
    (0..2 * r).prop_map(Letter::from_index)
}

/// Freely reduced word in rank `r` from up to `max_len` raw letters.
pub fn word_strategy(r: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter_strategy(r), 0..=max_len).prop_map(Word::reduce)
}

/// Nontrivial cyclic word that is not a proper power.
pub fn checkable_strategy(r: usize, max_len: usize) -> impl Strategy<Value = CyclicWord> {
    word_strategy(r, max_len).prop_map(|w| w.to_cyclic()).prop_filter("checkable", |c| !c.is_empty() && !c.is_proper_power())
}

pub fn automorphism_strategy(r: usize) -> impl Strategy<Value = WhiteheadAutomorphism> {
    let mut all: Vec<WhiteheadAutomorphism> = enumerate_first_kind(rank(r)).into_iter().map(Into::into).collect();
    all.extend(enumerate_second_kind(rank(r)).map(Into::into));
    prop::sample::select(all)
}

/// Compare the enumerated orbit partition with the naive one.
pub fn compare_orbit_partition(r: usize, n: usize) -> Result<usize, String> {
    use relcensus::enumeration::{component_of, enumerate_orbit_reps};
    let naive = naive_orbit_partition(r, n);
    let ours: BTreeSet<BTreeSet<Vec<Letter>>> = enumerate_orbit_reps(rank(r), n, true)
        .iter()
        .map(|w| component_of(w).members.iter().map(|m| m.letters().to_vec()).collect())
        .collect();
    if naive == ours {
        Ok(ours.len())
    } else {
        let extra = ours.difference(&naive).next().map(|c| format!("{:?}", c.iter().next()));
        let missing = naive.difference(&ours).next().map(|c| format!("{:?}", c.iter().next()));
        Err(format!("r={r} L={n}: {} vs naive {}; extra {extra:?}, missing {missing:?}", ours.len(), naive.len()))
    }
}

/// Compare the odometer candidates with a filter over all words.
pub fn compare_candidates(r: usize, n: usize) -> Result<usize, String> {
    use relcensus::enumeration::full_support_candidates;
    let naive: BTreeSet<Vec<Letter>> = cyclically_reduced_words(r, n)
        .into_iter()
        .filter(|w| support_size(w) == r && naive_slpci_min(w, r) == *w && naive_is_whitehead_minimal(w, r))
        .collect();
    let ours: BTreeSet<Vec<Letter>> =
        full_support_candidates(rank(r), n, None).iter().map(|w| w.letters().to_vec()).collect();
    if naive == ours {
        Ok(ours.len())
    } else {
        Err(format!(
            "r={r} L={n}: {} vs naive {}; extra {:?}, missing {:?}",
            ours.len(),
            naive.len(),
            ours.difference(&naive).next(),
            naive.difference(&ours).next()
        ))
    }
}

/// Compare the irank search with the brute-force gluing search on every
/// candidate of every support.
pub fn compare_irank(r: usize, n: usize) -> Result<usize, String> {
    use relcensus::enumeration::enumerate_candidates;
    use relcensus::stallings::{imprimitivity_rank, Irank};
    let words = enumerate_candidates(rank(r), n);
    for w in &words {
        let ours = imprimitivity_rank(&w.to_word(), None).value;
        let naive = match naive_irank(w.letters()) {
            Some(k) => Irank::Finite(k),
            None => Irank::Infinite,
        };
        if ours != naive {
            return Err(format!("{w}: search {ours}, brute force {naive}"));
        }
    }
    Ok(words.len())
}
