//! Certifying hyperbolicity of one-relator groups `F_r / <<w>>`.
//!
//! Four native checks run in order; the first definitive answer wins.
//! Only the cyclically pinched and Ivanov–Schupp checks can answer
//! "not hyperbolic". Anything left over may be handed to an external
//! prover.

mod prover;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{precondition, Error, Result};
use crate::whitehead::{is_whitehead_minimal, WhiteheadGraph};
use crate::word::{CyclicWord, Letter, Word};

pub use prover::{ProverConfig, ProverOutcome};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Hyperbolic,
    NonHyperbolic,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Hyperbolic => "hyperbolic",
            Status::NonHyperbolic => "nonhyperbolic",
            Status::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Status> {
        match s {
            "hyperbolic" => Ok(Status::Hyperbolic),
            "nonhyperbolic" => Ok(Status::NonHyperbolic),
            "inconclusive" => Ok(Status::Inconclusive),
            _ => Err(crate::error::invalid(format!("unknown status {s:?}"))),
        }
    }
}

/// Which stage produced a verdict.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecidedBy {
    Pinched,
    IvanovSchupp,
    SmallCancellation,
    BlufsteinMinian,
    External,
    /// Proper powers and primitive words, outside the cascade's domain:
    /// one-relator groups with torsion and free groups are hyperbolic.
    Structural,
    None,
}

impl DecidedBy {
    pub fn as_str(self) -> &'static str {
        match self {
            DecidedBy::Pinched => "pinched",
            DecidedBy::IvanovSchupp => "ivanov_schupp",
            DecidedBy::SmallCancellation => "small_cancellation",
            DecidedBy::BlufsteinMinian => "blufstein_minian",
            DecidedBy::External => "external",
            DecidedBy::Structural => "structural",
            DecidedBy::None => "none",
        }
    }
}

impl fmt::Display for DecidedBy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for DecidedBy {
    type Err = Error;

    fn from_str(s: &str) -> Result<DecidedBy> {
        [
            DecidedBy::Pinched,
            DecidedBy::IvanovSchupp,
            DecidedBy::SmallCancellation,
            DecidedBy::BlufsteinMinian,
            DecidedBy::External,
            DecidedBy::Structural,
            DecidedBy::None,
        ]
        .into_iter()
        .find(|d| d.as_str() == s)
        .ok_or_else(|| crate::error::invalid(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub decided_by: DecidedBy,
    pub certificate: String,
}

impl Verdict {
    pub fn inconclusive(note: impl Into<String>) -> Verdict {
        Verdict { status: Status::Inconclusive, decided_by: DecidedBy::None, certificate: note.into() }
    }

    fn decided(status: Status, by: DecidedBy, certificate: String) -> Verdict {
        Verdict { status, decided_by: by, certificate }
    }

    pub fn is_conclusive(&self) -> bool {
        self.status != Status::Inconclusive
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.status, self.decided_by)?;
        if !self.certificate.is_empty() {
            write!(f, ": {}", self.certificate)?;
        }
        Ok(())
    }
}

fn require_checkable(w: &CyclicWord) -> Result<()> {
    if w.is_empty() {
        return Err(precondition("the trivial word"));
    }
    if w.is_proper_power() {
        return Err(precondition(format!("{w} is a proper power")));
    }
    Ok(())
}

/// `w ~ u v` with `u`, `v` over disjoint sets of generators.
pub fn check_cyclically_pinched(w: &CyclicWord) -> Result<Verdict> {
    require_checkable(w)?;
    let n = w.len();
    let mut split = None;
    for rot in w.rotations() {
        let l = rot.letters();
        for k in 1..n {
            let (u, v) = (&l[..k], &l[k..]);
            if crate::word::support_mask(u) & crate::word::support_mask(v) != 0 {
                continue;
            }
            let (u, v) = (Word::reduce(u.iter().copied()), Word::reduce(v.iter().copied()));
            if u.is_proper_power() && v.is_proper_power() {
                return Ok(Verdict::decided(
                    Status::NonHyperbolic,
                    DecidedBy::Pinched,
                    format!("u={u} v={v}, both proper powers"),
                ));
            }
            split.get_or_insert((u, v));
        }
    }
    Ok(match split {
        Some((u, v)) => Verdict::decided(Status::Hyperbolic, DecidedBy::Pinched, format!("u={u} v={v}")),
        None => Verdict::inconclusive("no disjoint-support split"),
    })
}

/// Syntactic shape matched by the Ivanov–Schupp criteria, with `a` the
/// distinguished letter (which may be written inverted).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum IsForm {
    /// `a u a v`
    AuaV,
    /// `a u a^-1 v`
    AuAv,
    /// `a t a u a v`
    AtauaV,
    /// `a t a u a^-1 v`
    AtauAv,
    /// `a u1 a u2 a u3 a u4`
    FourPositive,
}

impl IsForm {
    pub fn as_str(self) -> &'static str {
        match self {
            IsForm::AuaV => "aua v",
            IsForm::AuAv => "aua^-1v",
            IsForm::AtauaV => "atauav",
            IsForm::AtauAv => "ataua^-1v",
            IsForm::FourPositive => "four_positive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsDecomposition {
    pub letter: Letter,
    pub form: IsForm,
    pub parts: Vec<Word>,
    pub z: Option<Word>,
    pub m: Option<i64>,
    pub n: Option<i64>,
    /// Which criterion fired, if nonhyperbolic.
    pub case: Option<&'static str>,
}

impl IsDecomposition {
    /// The word spelled by the form; a rotation of `w` or `w^-1`.
    pub fn reassemble(&self) -> Word {
        let a = self.letter;
        let signs: &[Letter] = &match self.form {
            IsForm::AuaV => vec![a, a],
            IsForm::AuAv => vec![a, a.inverse()],
            IsForm::AtauaV => vec![a, a, a],
            IsForm::AtauAv => vec![a, a, a.inverse()],
            IsForm::FourPositive => vec![a, a, a, a],
        };
        let mut l = Vec::new();
        for (x, p) in signs.iter().zip(&self.parts) {
            l.push(*x);
            l.extend_from_slice(p.letters());
        }
        Word::reduce(l)
    }
}

impl fmt::Display for IsDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: &[&str] = match self.form {
            IsForm::AuaV | IsForm::AuAv => &["u", "v"],
            IsForm::AtauaV | IsForm::AtauAv => &["t", "u", "v"],
            IsForm::FourPositive => &["u1", "u2", "u3", "u4"],
        };
        write!(f, "a={} form={}", self.letter, self.form.as_str())?;
        if let Some(c) = self.case {
            write!(f, " case={c}")?;
        }
        for (name, p) in names.iter().zip(&self.parts) {
            write!(f, " {name}={p}")?;
        }
        if let Some(z) = &self.z {
            write!(f, " z={z}")?;
        }
        if let (Some(m), Some(n)) = (self.m, self.n) {
            write!(f, " m={m} n={n}")?;
        }
        Ok(())
    }
}

fn word_of(l: &[Letter]) -> Word {
    Word::reduce(l.iter().copied())
}

/// Write `x = z^m`, `y = z^n` with `z` not a proper power.
fn common_root(x: &Word, y: &Word) -> Option<(Word, i64, i64)> {
    let root = |w: &Word| w.power_decompose().expect("nontrivial");
    match (x.is_empty(), y.is_empty()) {
        (true, true) => Some((Word::identity(), 0, 0)),
        (true, false) => {
            let d = root(y);
            Some((d.root, 0, d.exponent as i64))
        }
        (false, true) => {
            let d = root(x);
            Some((d.root, d.exponent as i64, 0))
        }
        (false, false) => {
            let (dx, dy) = (root(x), root(y));
            if dx.root == dy.root {
                Some((dx.root, dx.exponent as i64, dy.exponent as i64))
            } else if dx.root == dy.root.inverse() {
                Some((dx.root, dx.exponent as i64, -(dy.exponent as i64)))
            } else {
                None
            }
        }
    }
}

/// Root of the cyclic reduction, as a conjugacy class.
fn cyclic_root(w: &Word) -> CyclicWord {
    let core = w.cyclic_reduce().core;
    core.power_decompose().expect("nontrivial").root.to_cyclic()
}

/// Decision for one rotation already matched to a form. Returns the
/// decomposition, with `case` set when the nonhyperbolicity criterion holds.
fn evaluate_form(letter: Letter, form: IsForm, parts: Vec<Word>) -> IsDecomposition {
    let mut d = IsDecomposition { letter, form, parts, z: None, m: None, n: None, case: None };
    match form {
        IsForm::AuaV => {
            let (u, v) = (&d.parts[0], &d.parts[1]);
            if u.concat(&v.inverse()).is_proper_power() {
                d.case = Some("1");
            }
        }
        IsForm::AuAv => {
            let (u, v) = (&d.parts[0], &d.parts[1]);
            let (ru, rv) = (cyclic_root(u), cyclic_root(v));
            if ru == rv || ru == rv.inverse() {
                d.case = Some("2");
                d.z = Some(ru.to_word());
            } else if u.is_proper_power() && v.is_proper_power() {
                d.case = Some("2");
            }
        }
        IsForm::AtauaV => {
            let (t, u, v) = (&d.parts[0], &d.parts[1], &d.parts[2]);
            let ti = t.inverse();
            if let Some((z, m, n)) = common_root(&u.concat(&ti), &v.concat(&ti)) {
                let (lo, hi) = (m.abs().min(n.abs()), m.abs().max(n.abs()));
                d.case = if lo == 0 && hi > 1 {
                    Some("3a")
                } else if lo > 0 && m.abs() == n.abs() && m.abs() != 1 {
                    Some("3b")
                } else if lo > 0 && m == -n {
                    Some("3c")
                } else if lo > 0 && (m == 2 * n || n == 2 * m) {
                    Some("3d")
                } else {
                    None
                };
                d.z = Some(z);
                d.m = Some(m);
                d.n = Some(n);
            }
        }
        IsForm::AtauAv => {
            let (t, u, v) = (&d.parts[0], &d.parts[1], &d.parts[2]);
            let x = t.inverse().concat(u).concat(t);
            if let Some((z, m, n)) = common_root(&x, v) {
                if m.abs() == n.abs() || m == -2 * n || n == -2 * m {
                    d.case = Some("4");
                }
                d.z = Some(z);
                d.m = Some(m);
                d.n = Some(n);
            }
        }
        IsForm::FourPositive => {
            let u = &d.parts;
            for i in 0..4 {
                let p = u[i]
                    .concat(&u[(i + 1) % 4].inverse())
                    .concat(&u[(i + 2) % 4])
                    .concat(&u[(i + 3) % 4].inverse());
                if p.is_empty() {
                    d.case = Some(["thm4 i=1", "thm4 i=2", "thm4 i=3", "thm4 i=4"][i]);
                    break;
                }
            }
        }
    }
    d
}

/// Verdict of the criteria for generator `g`, or `None` if they do not apply.
fn ivanov_schupp_for(w: &CyclicWord, g: usize) -> Option<(Status, IsDecomposition)> {
    let count = w.occurrence_count(g);
    if count == 0 || count > 4 {
        return None;
    }
    if count == 1 {
        // no form has a single occurrence, so the group is hyperbolic
        let d = IsDecomposition {
            letter: Letter::new(g, true),
            form: IsForm::AuaV,
            parts: Vec::new(),
            z: None,
            m: None,
            n: None,
            case: None,
        };
        return Some((Status::Hyperbolic, d));
    }
    let forward = w.letters().to_vec();
    let backward: Vec<Letter> = forward.iter().rev().map(|x| x.inverse()).collect();
    let mut fallback = None;
    for l in [&forward, &backward] {
        let n = l.len();
        for start in 0..n {
            let a = l[start];
            if a.generator() != g {
                continue;
            }
            let rot: Vec<Letter> = (0..n).map(|k| l[(start + k) % n]).collect();
            let cuts: Vec<usize> = (0..n).filter(|&k| rot[k].generator() == g).collect();
            let signs: Vec<bool> = cuts.iter().map(|&k| rot[k] == a).collect();
            let parts: Vec<Word> = (0..cuts.len())
                .map(|i| word_of(&rot[cuts[i] + 1..cuts.get(i + 1).copied().unwrap_or(n)]))
                .collect();
            let form = match (count, signs.as_slice()) {
                (2, [true, true]) => IsForm::AuaV,
                (2, [true, false]) => IsForm::AuAv,
                (3, [true, true, true]) => IsForm::AtauaV,
                (3, [true, true, false]) => IsForm::AtauAv,
                (4, [true, true, true, true]) => IsForm::FourPositive,
                _ => continue,
            };
            if form == IsForm::FourPositive {
                let distinct: BTreeSet<&Word> = parts.iter().collect();
                if distinct.len() < 4 {
                    continue;
                }
            }
            let d = evaluate_form(a, form, parts);
            if d.case.is_some() {
                return Some((Status::NonHyperbolic, d));
            }
            fallback.get_or_insert(d);
        }
    }
    fallback.map(|d| (Status::Hyperbolic, d))
}

/// The Ivanov–Schupp criteria: exact when some generator occurs one to
/// three times, and when one occurs exactly four times with a common sign
/// and pairwise different gaps.
pub fn check_ivanov_schupp(w: &CyclicWord) -> Result<Verdict> {
    require_checkable(w)?;
    let mut first: Option<(Status, IsDecomposition)> = None;
    for g in 1..=w.max_generator() {
        if let Some((status, d)) = ivanov_schupp_for(w, g) {
            match &first {
                Some((s, prev)) if *s != status => {
                    return Err(Error::InvariantViolation(format!(
                        "Ivanov-Schupp verdicts disagree on {w}: {s} via [{prev}], {status} via [{d}]"
                    )));
                }
                Some(_) => {}
                None => first = Some((status, d)),
            }
        }
    }
    Ok(match first {
        Some((status, d)) => Verdict::decided(status, DecidedBy::IvanovSchupp, d.to_string()),
        None => Verdict::inconclusive("no generator occurs 1-3 times, or 4 times in the required shape"),
    })
}

/// Pieces of the symmetrized relator set of a cyclic word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceAnalysis {
    word: CyclicWord,
    /// Longest piece starting at each position of `w` (first `n`) and of
    /// `w^-1` (last `n`), reading cyclically.
    piece_lengths: Vec<usize>,
    pub max_piece_length: usize,
    /// Fewest pieces whose product is a cyclic permutation of `w`; `None`
    /// if some letter lies in no piece.
    pub min_factorization: Option<usize>,
    /// Least `h >= 3` admitting a cycle of `h` relators with cancellation
    /// at every junction (shortest non-backtracking closed walk in the
    /// Whitehead graph, parallel edges counted); `None` if there is none,
    /// so `T(q)` holds exactly for `q <= t_value`.
    pub t_value: Option<usize>,
}

impl PieceAnalysis {
    /// Longest piece read from position `start` of `w` (or of `w^-1`).
    pub fn piece_length_at(&self, start: usize, inverse: bool) -> usize {
        self.piece_lengths[start + if inverse { self.word.len() } else { 0 }]
    }

    /// Every piece, as a word.
    pub fn pieces(&self) -> BTreeSet<Word> {
        let n = self.word.len();
        let mut out = BTreeSet::new();
        for (p, &len) in self.piece_lengths.iter().enumerate() {
            let r = relator_at(self.word.letters(), p);
            for k in 1..=len {
                out.insert(word_of(&r[..k]));
            }
        }
        debug_assert!(out.iter().all(|p| p.len() < n));
        out
    }

    /// Longest piece starting with `x`.
    pub fn max_piece_starting_with(&self, x: Letter) -> usize {
        (0..self.piece_lengths.len())
            .filter(|&p| relator_at(self.word.letters(), p)[0] == x)
            .map(|p| self.piece_lengths[p])
            .max()
            .unwrap_or(0)
    }
}

/// Locus `p < n` reads `w` from `p`; locus `n + p` reads `w^-1` from `p`.
fn relator_at(l: &[Letter], p: usize) -> Vec<Letter> {
    let n = l.len();
    if p < n {
        (0..n).map(|k| l[(p + k) % n]).collect()
    } else {
        let p = p - n;
        (0..n).map(|k| l[(2 * n - 1 - p - k) % n].inverse()).collect()
    }
}

pub fn compute_pieces(w: &CyclicWord) -> Result<PieceAnalysis> {
    if w.is_empty() {
        return Err(precondition("the trivial word has no pieces"));
    }
    let n = w.len();
    let relators: Vec<Vec<Letter>> = (0..2 * n).map(|p| relator_at(w.letters(), p)).collect();
    let mut piece_lengths = vec![0; 2 * n];
    for p in 0..2 * n {
        for q in 0..2 * n {
            if p == q || relators[p] == relators[q] {
                continue;
            }
            let lcp = relators[p].iter().zip(&relators[q]).take_while(|(x, y)| x == y).count();
            piece_lengths[p] = piece_lengths[p].max(lcp);
        }
    }
    let max_piece_length = piece_lengths.iter().copied().max().unwrap_or(0);
    let min_factorization = min_factorization(&piece_lengths[..n]);
    let t_value = WhiteheadGraph::new(w, w.max_generator(), false)?.shortest_closed_walk();
    Ok(PieceAnalysis { word: w.clone(), piece_lengths, max_piece_length, min_factorization, t_value })
}

/// Cover the cycle `0..n` by arcs `[i, i + reach[i])`, fewest arcs.
/// Any subword of a piece is a piece, so from a fixed start the greedy
/// longest jump is optimal.
fn min_factorization(reach: &[usize]) -> Option<usize> {
    let n = reach.len();
    if reach.contains(&0) {
        return None;
    }
    (0..n)
        .map(|s| {
            let (mut covered, mut count) = (0, 0);
            while covered < n {
                covered += reach[(s + covered) % n];
                count += 1;
            }
            count
        })
        .min()
}

/// `C(7)`, `C(5)-T(4)`, `C(4)-T(5)` or `C(3)-T(7)`.
pub fn check_small_cancellation(w: &CyclicWord) -> Result<Verdict> {
    require_checkable(w)?;
    Ok(small_cancellation_from(&compute_pieces(w)?))
}

fn small_cancellation_from(p: &PieceAnalysis) -> Verdict {
    // absent factorization or forest means the condition holds for every value
    let c = p.min_factorization.unwrap_or(usize::MAX);
    let t = p.t_value.unwrap_or(usize::MAX);
    let show = |v: Option<usize>| v.map_or("inf".to_string(), |x| x.to_string());
    let pair = [(7, 0), (5, 4), (4, 5), (3, 7)].into_iter().find(|&(cp, tq)| c >= cp && t >= tq);
    let detail = format!("C({}) T({})", show(p.min_factorization), show(p.t_value));
    match pair {
        Some((cp, 0)) => Verdict::decided(Status::Hyperbolic, DecidedBy::SmallCancellation, format!("C({cp}); {detail}")),
        Some((cp, tq)) => {
            Verdict::decided(Status::Hyperbolic, DecidedBy::SmallCancellation, format!("C({cp})-T({tq}); {detail}"))
        }
        None => Verdict::inconclusive(detail),
    }
}

/// `C'(1/4)` with strict inequality, plus `T'` bounded through the
/// triangles of the reduced Whitehead graph: each corner letter `x` of a
/// triangle contributes the longest piece starting with `x`.
pub fn check_blufstein_minian(w: &CyclicWord) -> Result<Verdict> {
    require_checkable(w)?;
    blufstein_minian_from(w, &compute_pieces(w)?)
}

fn blufstein_minian_from(w: &CyclicWord, p: &PieceAnalysis) -> Result<Verdict> {
    let n = w.len();
    if 4 * p.max_piece_length >= n {
        return Ok(Verdict::inconclusive(format!("piece of length {} not below |w|/4", p.max_piece_length)));
    }
    let graph = WhiteheadGraph::new(w, w.max_generator(), true)?;
    let mut worst = 0;
    for tri in graph.triangles() {
        let sum: usize = tri.iter().map(|&x| p.max_piece_starting_with(x)).sum();
        if 2 * sum >= n {
            return Ok(Verdict::inconclusive(format!(
                "tripod at {}{}{} of length {sum} not below |w|/2",
                tri[0], tri[1], tri[2]
            )));
        }
        worst = worst.max(sum);
    }
    Ok(Verdict::decided(
        Status::Hyperbolic,
        DecidedBy::BlufsteinMinian,
        format!("max piece {} < {n}/4, max tripod {worst} < {n}/2", p.max_piece_length),
    ))
}

/// Results of the four native checks, in cascade order.
pub fn run_all_checks(w: &CyclicWord) -> Result<[Verdict; 4]> {
    require_checkable(w)?;
    let pieces = compute_pieces(w)?;
    Ok([
        check_cyclically_pinched(w)?,
        check_ivanov_schupp(w)?,
        small_cancellation_from(&pieces),
        blufstein_minian_from(w, &pieces)?,
    ])
}

/// Run the checks in order on a Whitehead-minimal, imprimitive word that
/// is not a proper power, falling back to `prover` if all abstain.
pub fn cascade(w: &CyclicWord, prover: Option<&ProverConfig>) -> Result<Verdict> {
    require_checkable(w)?;
    if !is_whitehead_minimal(w) {
        return Err(precondition(format!("{w} is not Whitehead minimal")));
    }
    if w.len() == 1 {
        return Err(precondition(format!("{w} is primitive")));
    }
    let native = native_cascade(w)?;
    if native.is_conclusive() {
        return Ok(native);
    }
    match prover {
        None => Ok(native),
        Some(p) => Ok(p.decide(w)),
    }
}

fn native_cascade(w: &CyclicWord) -> Result<Verdict> {
    let v = check_cyclically_pinched(w)?;
    if v.is_conclusive() {
        return Ok(v);
    }
    let v = check_ivanov_schupp(w)?;
    if v.is_conclusive() {
        return Ok(v);
    }
    let pieces = compute_pieces(w)?;
    let v = small_cancellation_from(&pieces);
    if v.is_conclusive() {
        return Ok(v);
    }
    let v = blufstein_minian_from(w, &pieces)?;
    if v.is_conclusive() {
        return Ok(v);
    }
    Ok(Verdict::inconclusive("no native check applies"))
}

/// Verdict for any orbit representative: the cascade where it applies,
/// and the structural answer for proper powers and primitive words.
pub fn classify(w: &CyclicWord, prover: Option<&ProverConfig>) -> Result<Verdict> {
    if w.is_empty() {
        return Err(precondition("the trivial word"));
    }
    if w.is_proper_power() {
        return Ok(Verdict::decided(Status::Hyperbolic, DecidedBy::Structural, "proper power, torsion".into()));
    }
    if w.len() == 1 {
        return Ok(Verdict::decided(Status::Hyperbolic, DecidedBy::Structural, "primitive, free group".into()));
    }
    cascade(w, prover)
}
