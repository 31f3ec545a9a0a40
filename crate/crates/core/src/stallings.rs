//! Stallings graphs and imprimitivity rank.
//!
//! The imprimitivity rank of `w` is found by growing folded graphs along
//! the loop read by `w` at the base vertex. A minimal-rank subgroup
//! containing `w` as an imprimitive element can be taken to be the one
//! carried by the subgraph `w` traverses, and then `w` traverses every edge
//! at least twice, so at most `floor(|w|_g / 2)` edges carry label `g`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{invalid, precondition, Error, Result};
use crate::whitehead::{is_primitive, minimal_free_factor_rank};
use crate::word::{Letter, Rank, Word, MAX_RANK};

const SLOTS: usize = 2 * MAX_RANK;
const NONE: u32 = u32::MAX;

/// An arbitrary finite labelled graph with a base vertex, before folding.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelledGraph {
    pub vertex_count: usize,
    pub base: usize,
    /// `(from, to, label)`; a negative label is an edge read backwards.
    pub edges: Vec<(usize, usize, Letter)>,
}

impl LabelledGraph {
    pub fn new(vertex_count: usize, base: usize) -> LabelledGraph {
        LabelledGraph { vertex_count: vertex_count.max(1), base, edges: Vec::new() }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, label: Letter) -> &mut Self {
        self.edges.push((from, to, label));
        self
    }

    /// One loop at the base per word, each subdivided into single letters.
    pub fn wedge_of_loops(words: &[Word]) -> LabelledGraph {
        let mut g = LabelledGraph::new(1, 0);
        for w in words {
            let l = w.letters();
            let mut prev = 0;
            for (i, &x) in l.iter().enumerate() {
                let next = if i + 1 == l.len() {
                    0
                } else {
                    g.vertex_count += 1;
                    g.vertex_count - 1
                };
                g.edges.push((prev, next, x));
                prev = next;
            }
        }
        g
    }
}

/// A based, folded, core graph with edges labelled by generators.
///
/// Vertices are numbered in breadth-first order from the base (vertex 0),
/// exploring labels in base order, so equal subgroups give equal values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StallingsGraph {
    /// `out[v][x.index()]`: endpoint of the `x`-edge leaving `v`.
    out: Vec<[u32; SLOTS]>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn letters_in_base_order() -> impl Iterator<Item = Letter> {
    Rank::new(MAX_RANK).expect("MAX_RANK is a valid rank").letters()
}

/// Fold a labelled graph and trim it to its core at the base.
pub fn fold(g: &LabelledGraph) -> Result<StallingsGraph> {
    let order: Vec<usize> = (0..g.edges.len()).collect();
    fold_in_order(g, &order)
}

/// [`fold`], identifying edge pairs as they are met in `order` (a
/// permutation of the edge indices). The result does not depend on it.
pub fn fold_in_order(g: &LabelledGraph, order: &[usize]) -> Result<StallingsGraph> {
    let n = g.vertex_count;
    if g.base >= n {
        return Err(invalid(format!("base {} outside {} vertices", g.base, n)));
    }
    for &(u, v, x) in &g.edges {
        if u >= n || v >= n {
            return Err(invalid(format!("edge ({u}, {v}) outside {n} vertices")));
        }
        if x.generator() > MAX_RANK {
            return Err(invalid(format!("label {x} exceeds rank {MAX_RANK}")));
        }
    }
    let mut check = order.to_vec();
    check.sort_unstable();
    if check != (0..g.edges.len()).collect::<Vec<_>>() {
        return Err(invalid("fold order is not a permutation of the edges"));
    }

    let mut parent: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        let mut slot: HashMap<(usize, usize), usize> = HashMap::new();
        for &e in order {
            let (u, v, x) = g.edges[e];
            for (a, b, l) in [(u, v, x), (v, u, x.inverse())] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                match slot.get(&(ra, l.index())) {
                    None => {
                        slot.insert((ra, l.index()), rb);
                    }
                    Some(&t) => {
                        let rt = find(&mut parent, t);
                        if rt != rb {
                            parent[rt] = rb;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut out = vec![[NONE; SLOTS]; n];
    for &(u, v, x) in &g.edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        out[ru][x.index()] = rv as u32;
        out[rv][x.inverse().index()] = ru as u32;
    }
    let base = find(&mut parent, g.base);
    Ok(StallingsGraph::canonical(out, base))
}

impl StallingsGraph {
    /// The trivial subgroup: one vertex, no edges.
    pub fn trivial() -> StallingsGraph {
        StallingsGraph { out: vec![[NONE; SLOTS]] }
    }

    /// The rose with one petal per generator `1..=rank`.
    pub fn rose(rank: Rank) -> StallingsGraph {
        let mut out = [NONE; SLOTS];
        for x in rank.letters() {
            out[x.index()] = 0;
        }
        StallingsGraph { out: vec![out] }
    }

    /// Trim hairs away from `base`, then renumber.
    fn canonical(mut out: Vec<[u32; SLOTS]>, base: usize) -> StallingsGraph {
        let degree = |o: &[u32; SLOTS]| o.iter().filter(|&&t| t != NONE).count();
        let mut stack: Vec<usize> = (0..out.len()).filter(|&v| v != base && degree(&out[v]) == 1).collect();
        while let Some(v) = stack.pop() {
            if degree(&out[v]) != 1 {
                continue;
            }
            let i = out[v].iter().position(|&t| t != NONE).expect("degree one");
            let u = out[v][i] as usize;
            out[v][i] = NONE;
            out[u][Letter::from_index(i).inverse().index()] = NONE;
            if u != base && degree(&out[u]) == 1 {
                stack.push(u);
            }
        }

        let mut id = vec![NONE; out.len()];
        let mut order = vec![base];
        id[base] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for x in letters_in_base_order() {
                let t = out[v][x.index()];
                if t != NONE && id[t as usize] == NONE {
                    id[t as usize] = order.len() as u32;
                    order.push(t as usize);
                }
            }
        }
        let renumbered = order
            .iter()
            .map(|&v| {
                let mut row = [NONE; SLOTS];
                for (i, &t) in out[v].iter().enumerate() {
                    if t != NONE {
                        row[i] = id[t as usize];
                    }
                }
                row
            })
            .collect();
        StallingsGraph { out: renumbered }
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    /// Positive edges `(from, to, generator)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut e = Vec::new();
        for (v, row) in self.out.iter().enumerate() {
            for g in 1..=MAX_RANK {
                let t = row[Letter::new(g, true).index()];
                if t != NONE {
                    e.push((v, t as usize, g));
                }
            }
        }
        e.sort_unstable();
        e
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Endpoint of the `x`-edge leaving `v`, if any.
    pub fn follow(&self, v: usize, x: Letter) -> Option<usize> {
        if x.generator() > MAX_RANK {
            return None;
        }
        let t = self.out.get(v)?[x.index()];
        (t != NONE).then_some(t as usize)
    }

    /// Does `w` label a closed path at the base?
    pub fn contains_loop(&self, w: &Word) -> bool {
        self.read(w.letters(), 0) == Some(0)
    }

    fn read(&self, l: &[Letter], start: usize) -> Option<usize> {
        l.iter().try_fold(start, |v, &x| self.follow(v, x))
    }

    /// Rank of the subgroup, `E - V + 1`.
    pub fn graph_rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// Tree edges chosen by breadth-first search from the base in label
    /// order; `parent[v] = (u, x)` means `v` is reached from `u` by `x`.
    fn spanning_tree(&self) -> Vec<Option<(usize, Letter)>> {
        let mut parent = vec![None; self.out.len()];
        let mut seen = vec![false; self.out.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for x in letters_in_base_order() {
                if let Some(t) = self.follow(v, x) {
                    if !seen[t] {
                        seen[t] = true;
                        parent[t] = Some((v, x));
                        queue.push_back(t);
                    }
                }
            }
        }
        parent
    }

    /// Non-tree positive edges, in the order that numbers the basis.
    fn basis_edges(&self) -> Vec<(usize, usize, usize)> {
        let tree = self.spanning_tree();
        self.edges()
            .into_iter()
            .filter(|&(u, v, g)| tree[v] != Some((u, Letter::new(g, true))) && tree[u] != Some((v, Letter::new(g, false))))
            .collect()
    }

    fn tree_path(&self, tree: &[Option<(usize, Letter)>], mut v: usize) -> Vec<Letter> {
        let mut path = Vec::new();
        while let Some((u, x)) = tree[v] {
            path.push(x);
            v = u;
        }
        path.reverse();
        path
    }

    /// The free basis read off the spanning tree, as words in `F_r`.
    pub fn basis(&self) -> Vec<Word> {
        let tree = self.spanning_tree();
        self.basis_edges()
            .into_iter()
            .map(|(u, v, g)| {
                let mut l = self.tree_path(&tree, u);
                l.push(Letter::new(g, true));
                l.extend(Word::reduce(self.tree_path(&tree, v)).inverse().into_letters());
                Word::reduce(l)
            })
            .collect()
    }

    /// Rewrite a loop at the base as a word in [`StallingsGraph::basis`].
    pub fn express_in_basis(&self, w: &Word) -> Result<Word> {
        let basis = self.basis_edges();
        let index: HashMap<(usize, usize), usize> =
            basis.iter().enumerate().map(|(i, &(u, _, g))| ((u, g), i + 1)).collect();
        let mut v = 0;
        let mut image = Vec::new();
        for &x in w.letters() {
            let t = self
                .follow(v, x)
                .ok_or_else(|| precondition(format!("{w} does not label a loop at the base")))?;
            let (from, g) = if x.is_positive() { (v, x.generator()) } else { (t, x.generator()) };
            if let Some(&i) = index.get(&(from, g)) {
                image.push(Letter::new(i, x.is_positive()));
            }
            v = t;
        }
        if v != 0 {
            return Err(precondition(format!("{w} does not label a loop at the base")));
        }
        if image.is_empty() {
            return Ok(Word::identity());
        }
        let rank = Rank::new(basis.len())?;
        Word::free_reduce(&image, rank)
    }

    /// `w` lies in the subgroup and is neither trivial nor primitive there.
    pub fn is_imprimitive_in(&self, w: &Word) -> Result<bool> {
        let image = self.express_in_basis(w)?;
        Ok(!image.is_empty() && !is_primitive(&image))
    }

    /// Subgroup inclusion: every basis element of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &StallingsGraph) -> bool {
        self.basis().iter().all(|b| other.contains_loop(b))
    }

    /// One line per positive edge, `from to generator`; the base is 0.
    pub fn to_text(&self) -> String {
        self.edges().iter().map(|(u, v, g)| format!("{u} {v} {g}\n")).collect()
    }

    /// Inverse of [`StallingsGraph::to_text`]; the graph is folded on input.
    pub fn from_text(s: &str) -> Result<StallingsGraph> {
        let mut g = LabelledGraph::new(1, 0);
        for (n, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_error = |m: &str| Error::Parse { location: format!("line {}", n + 1), message: m.to_string() };
            let fields: Vec<usize> = line
                .split_whitespace()
                .map(|f| f.parse::<usize>().map_err(|_| parse_error("expected nonnegative integers")))
                .collect::<Result<_>>()?;
            let [u, v, label] = fields[..] else {
                return Err(parse_error("expected `from to generator`"));
            };
            if label == 0 || label > MAX_RANK {
                return Err(parse_error("generator out of range"));
            }
            g.vertex_count = g.vertex_count.max(u + 1).max(v + 1);
            g.edges.push((u, v, Letter::new(label, true)));
        }
        fold(&g)
    }
}

impl fmt::Debug for StallingsGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StallingsGraph{:?}", self.edges())
    }
}

impl fmt::Display for StallingsGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edges()
            .iter()
            .map(|&(u, v, g)| format!("{u}-{}->{v}", Letter::new(g, true)))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Value of the imprimitivity rank.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Irank {
    Finite(usize),
    /// Above the cap passed to the search.
    GreaterThan(usize),
    Infinite,
}

impl fmt::Display for Irank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Irank::Finite(n) => write!(f, "{n}"),
            Irank::GreaterThan(c) => write!(f, ">{c}"),
            Irank::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Irank {
    type Err = Error;

    fn from_str(s: &str) -> Result<Irank> {
        let bad = || invalid(format!("bad imprimitivity rank {s:?}"));
        if s == "inf" {
            Ok(Irank::Infinite)
        } else if let Some(c) = s.strip_prefix('>') {
            c.parse().map(Irank::GreaterThan).map_err(|_| bad())
        } else {
            s.parse().map(Irank::Finite).map_err(|_| bad())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrankReport {
    pub value: Irank,
    /// Every minimal-rank graph found (empty on the fast paths).
    pub witnesses: Vec<StallingsGraph>,
    /// `w` rewritten in each witness's basis.
    pub witness_basis_words: Vec<Word>,
}

/// Inclusion-maximal witness of minimal rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WSubgroup {
    pub graph: StallingsGraph,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Report `GreaterThan(cap)` instead of distinguishing larger values.
    /// `None` means the minimal free factor rank.
    pub cap: Option<usize>,
    /// Added to every per-label edge budget.
    pub budget_slack: usize,
}


/// Imprimitivity rank of `w`, searched up to `cap` (default: the rank of
/// the smallest free factor containing `w`, which is an upper bound).
pub fn imprimitivity_rank(w: &Word, cap: Option<usize>) -> IrankReport {
    imprimitivity_rank_with(w, SearchOptions { cap, ..SearchOptions::default() })
}

pub fn imprimitivity_rank_with(w: &Word, opts: SearchOptions) -> IrankReport {
    let core = w.cyclic_reduce().core;
    let bare = |value| IrankReport { value, witnesses: Vec::new(), witness_basis_words: Vec::new() };
    if core.is_empty() {
        return bare(Irank::Finite(0));
    }
    if core.is_proper_power() {
        return bare(Irank::Finite(1));
    }
    if is_primitive(&core) {
        return bare(Irank::Infinite);
    }
    let upper = minimal_free_factor_rank(&core);
    let bound = opts.cap.map_or(upper, |c| c.min(upper));
    if bound < 2 {
        return bare(Irank::GreaterThan(bound));
    }
    let report = search(&core, bound, opts.budget_slack);
    if report.witnesses.is_empty() {
        assert!(bound < upper, "no witness of rank {upper} found for {w}");
        return bare(Irank::GreaterThan(bound));
    }
    report
}

/// Only the value, skipping witness bookkeeping where the bounds decide it.
pub fn irank_value(w: &Word, cap: Option<usize>) -> Irank {
    let core = w.cyclic_reduce().core;
    if core.is_empty() {
        return Irank::Finite(0);
    }
    if core.is_proper_power() {
        return Irank::Finite(1);
    }
    if is_primitive(&core) {
        return Irank::Infinite;
    }
    let upper = minimal_free_factor_rank(&core);
    let bound = cap.map_or(upper, |c| c.min(upper));
    if bound < 2 {
        return Irank::GreaterThan(bound);
    }
    if upper == 2 {
        return Irank::Finite(2);
    }
    let report = search(&core, bound, 0);
    if report.witnesses.is_empty() {
        Irank::GreaterThan(bound)
    } else {
        report.value
    }
}

struct Builder<'a> {
    w: &'a [Letter],
    out: Vec<[u32; SLOTS]>,
    /// `edge_id[v][x.index()]` for traversal counts.
    edge_id: Vec<[u32; SLOTS]>,
    traversals: Vec<u32>,
    label_edges: [usize; MAX_RANK + 1],
    budget: [usize; MAX_RANK + 1],
    best: usize,
    found: Vec<StallingsGraph>,
}

impl Builder<'_> {
    fn rank(&self) -> usize {
        self.traversals.len() + 1 - self.out.len()
    }

    fn add_edge(&mut self, u: usize, v: usize, x: Letter) {
        let id = self.traversals.len() as u32;
        self.out[u][x.index()] = v as u32;
        self.out[v][x.inverse().index()] = u as u32;
        self.edge_id[u][x.index()] = id;
        self.edge_id[v][x.inverse().index()] = id;
        // the traversal that creates the edge
        self.traversals.push(1);
        self.label_edges[x.generator()] += 1;
    }

    fn remove_edge(&mut self, u: usize, v: usize, x: Letter) {
        self.out[u][x.index()] = NONE;
        self.out[v][x.inverse().index()] = NONE;
        self.edge_id[u][x.index()] = NONE;
        self.edge_id[v][x.inverse().index()] = NONE;
        self.traversals.pop();
        self.label_edges[x.generator()] -= 1;
    }

    fn complete(&mut self) {
        if self.traversals.iter().any(|&t| t < 2) {
            return;
        }
        let rank = self.rank();
        if rank > self.best {
            return;
        }
        let graph = StallingsGraph::canonical(self.out.clone(), 0);
        let w = Word::reduce(self.w.iter().copied());
        if !graph.is_imprimitive_in(&w).unwrap_or(false) {
            return;
        }
        if rank < self.best {
            self.best = rank;
            self.found.clear();
        }
        if !self.found.contains(&graph) {
            self.found.push(graph);
        }
    }

    fn extend(&mut self, pos: usize, cur: usize) {
        if pos == self.w.len() {
            if cur == 0 {
                self.complete();
            }
            return;
        }
        let x = self.w[pos];
        let t = self.out[cur][x.index()];
        if t != NONE {
            let id = self.edge_id[cur][x.index()] as usize;
            self.traversals[id] += 1;
            self.extend(pos + 1, t as usize);
            self.traversals[id] -= 1;
            return;
        }
        // a new edge can only keep the rank at `best` if it is never closed
        if self.rank() >= self.best || self.label_edges[x.generator()] >= self.budget[x.generator()] {
            return;
        }
        let fresh = self.out.len();
        self.out.push([NONE; SLOTS]);
        self.edge_id.push([NONE; SLOTS]);
        self.add_edge(cur, fresh, x);
        self.extend(pos + 1, fresh);
        self.remove_edge(cur, fresh, x);
        self.out.pop();
        self.edge_id.pop();

        for v in 0..self.out.len() {
            let free = self.out[v][x.inverse().index()] == NONE && (v != cur || self.out[v][x.index()] == NONE);
            if free {
                self.add_edge(cur, v, x);
                self.extend(pos + 1, v);
                self.remove_edge(cur, v, x);
            }
        }
    }
}

/// Every graph of rank at most `bound` (and minimal among those found)
/// containing the cyclically reduced `w` as an imprimitive element.
fn search(w: &Word, bound: usize, slack: usize) -> IrankReport {
    let mut budget = [0; MAX_RANK + 1];
    for (g, b) in budget.iter_mut().enumerate().skip(1) {
        *b = w.occurrence_count(g) / 2 + slack;
    }
    let mut b = Builder {
        w: w.letters(),
        out: vec![[NONE; SLOTS]],
        edge_id: vec![[NONE; SLOTS]],
        traversals: Vec::new(),
        label_edges: [0; MAX_RANK + 1],
        budget,
        best: bound,
        found: Vec::new(),
    };
    b.extend(0, 0);
    let mut witnesses = b.found;
    witnesses.sort();
    let value = Irank::Finite(b.best);
    let witness_basis_words = witnesses
        .iter()
        .map(|g| g.express_in_basis(w).expect("witness contains w"))
        .collect();
    IrankReport { value, witnesses, witness_basis_words }
}

/// The `w`-subgroups: minimal-rank subgroups containing `w` imprimitively
/// that are maximal under inclusion.
pub fn w_subgroups(w: &Word) -> Result<Vec<WSubgroup>> {
    let core = w.cyclic_reduce();
    let report = imprimitivity_rank_with(&core.core, SearchOptions::default());
    match report.value {
        Irank::Finite(0) => return Err(precondition("trivial word has no w-subgroup")),
        Irank::Infinite => return Err(precondition(format!("{w} is primitive"))),
        Irank::Finite(1) => {
            let root = core.core.power_decompose()?.root;
            let g = fold(&LabelledGraph::wedge_of_loops(&[root]))?;
            return Ok(vec![WSubgroup { graph: conjugate_graph(&g, &core.conjugator)? }]);
        }
        _ => {}
    }
    let pool = report.witnesses;
    let maximal: Vec<&StallingsGraph> = pool
        .iter()
        .filter(|h| !pool.iter().any(|k| k != *h && h.is_subgroup_of(k)))
        .collect();
    maximal
        .into_iter()
        .map(|g| Ok(WSubgroup { graph: conjugate_graph(g, &core.conjugator)? }))
        .collect()
}

/// Graph of `c H c^-1`, given the graph of `H`.
fn conjugate_graph(g: &StallingsGraph, c: &Word) -> Result<StallingsGraph> {
    if c.is_empty() {
        return Ok(g.clone());
    }
    let basis: Vec<Word> = g.basis().iter().map(|b| b.conjugate_by(c)).collect();
    fold(&LabelledGraph::wedge_of_loops(&basis))
}
