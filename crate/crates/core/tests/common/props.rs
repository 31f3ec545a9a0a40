//! Invariants checked on random inputs, both by the property-test target
//! and, at full case count, by the acceptance runner.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use relcensus::enumeration::{component_of, full_support_candidates, slpci_minimal_rep, PciClassSpec, ShardSpec};
use relcensus::hyperbolicity::{check_ivanov_schupp, run_all_checks, Status};
use relcensus::stallings::irank_value;
use relcensus::whitehead::{whitehead_minimize, WhiteheadAutomorphism};
use relcensus::{CyclicWord, Error, Word};

use super::{automorphism_strategy, checkable_strategy, letter_strategy, rank, word_strategy};

type Outcome = Result<(), TestCaseError>;

/// Run `test` on `cases` inputs from `strategy`, returning the failure
/// message if any case fails.
pub fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Outcome) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn ranked_word(max_len: usize) -> impl Strategy<Value = (usize, Word)> {
    (1usize..=3).prop_flat_map(move |r| (Just(r), word_strategy(r, max_len)))
}

pub fn ranked_auto_word(max_len: usize) -> impl Strategy<Value = (WhiteheadAutomorphism, Word, Word)> {
    (1usize..=3).prop_flat_map(move |r| (automorphism_strategy(r), word_strategy(r, max_len), word_strategy(r, max_len)))
}

pub fn free_reduction_idempotent(raw: Vec<relcensus::Letter>) -> Outcome {
    let w = Word::reduce(raw.iter().copied());
    prop_assert_eq!(Word::reduce(w.letters().iter().copied()), w.clone());
    prop_assert!(w.letters().windows(2).all(|p| p[1] != p[0].inverse()));
    let c = w.cyclic_reduce();
    prop_assert_eq!(c.conjugator.concat(&c.core).concat(&c.conjugator.inverse()), w.clone());
    prop_assert_eq!(c.core.cyclic_reduce().core, c.core.clone());
    Ok(())
}

pub fn raw_letters() -> impl Strategy<Value = Vec<relcensus::Letter>> {
    (1usize..=4).prop_flat_map(|r| prop::collection::vec(letter_strategy(r), 0..40))
}

pub fn automorphism_laws((phi, u, v): (WhiteheadAutomorphism, Word, Word)) -> Outcome {
    let image = phi.apply(&u).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(phi.inverse().apply(&image).unwrap(), u.clone());
    let uv = u.concat(&v);
    prop_assert_eq!(phi.apply(&uv).unwrap(), image.concat(&phi.apply(&v).unwrap()));
    Ok(())
}

/// The orbit of the cyclic subgroup, as the least vertex of its component.
fn orbit_key(w: &Word) -> (usize, Option<CyclicWord>) {
    let (min, _) = whitehead_minimize(w);
    if min.is_empty() {
        return (0, None);
    }
    let rep = slpci_minimal_rep(&min, PciClassSpec::PCI_PM);
    (min.len(), Some(component_of(&rep).minimum))
}

pub fn minimization_orbit_invariant((phi, u, _): (WhiteheadAutomorphism, Word, Word)) -> Outcome {
    let (min, chain) = whitehead_minimize(&u);
    prop_assert_eq!(chain.apply(&u).unwrap().to_cyclic(), min);
    let image = phi.apply(&u).unwrap();
    prop_assert_eq!(orbit_key(&u), orbit_key(&image));
    Ok(())
}

pub fn irank_aut_invariant((phi, u, _): (WhiteheadAutomorphism, Word, Word)) -> Outcome {
    let image = phi.apply(&u).unwrap();
    prop_assert_eq!(irank_value(&u, None), irank_value(&image, None), "image {}", image);
    Ok(())
}

pub fn checkable_word() -> impl Strategy<Value = CyclicWord> {
    (2usize..=3).prop_flat_map(|r| checkable_strategy(r, 16))
}

pub fn ivanov_schupp_letters_agree(w: CyclicWord) -> Outcome {
    match check_ivanov_schupp(&w) {
        Err(Error::InvariantViolation(m)) => Err(TestCaseError::fail(m)),
        Err(e) => Err(TestCaseError::fail(format!("{w}: {e}"))),
        Ok(_) => Ok(()),
    }
}

fn statuses(w: &CyclicWord) -> Result<Vec<Status>, TestCaseError> {
    let v = run_all_checks(w).map_err(|e| TestCaseError::fail(format!("{w}: {e}")))?;
    Ok(v.iter().map(|v| v.status).collect())
}

pub fn checks_rotation_inversion_invariant((w, k): (CyclicWord, usize)) -> Outcome {
    let base = statuses(&w)?;
    let mut rot = w.letters().to_vec();
    rot.rotate_left(k % w.len());
    let rotated = Word::reduce(rot).to_cyclic();
    prop_assert_eq!(statuses(&rotated)?, base.clone());
    prop_assert_eq!(statuses(&w.inverse())?, base.clone());
    let relabelled = slpci_minimal_rep(&w, PciClassSpec::PCI_PM);
    prop_assert_eq!(statuses(&relabelled)?, base);
    Ok(())
}

pub fn checks_never_contradict(w: CyclicWord) -> Outcome {
    let s = statuses(&w)?;
    prop_assert!(
        !(s.contains(&Status::Hyperbolic) && s.contains(&Status::NonHyperbolic)),
        "{} gives {:?}",
        w,
        s
    );
    Ok(())
}

pub fn shard_case() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    prop_oneof![(Just(2usize), 4usize..=8), (Just(3usize), 6usize..=7)]
        .prop_flat_map(|(r, l)| (Just(r), Just(l), 1usize..=7, 1usize..=4))
}

pub fn shard_merge_deterministic((r, l, total, depth): (usize, usize, usize, usize)) -> Outcome {
    let whole = full_support_candidates(rank(r), l, None);
    let mut merged = Vec::new();
    for i in 0..total {
        let spec = ShardSpec::new(total, i, depth).unwrap();
        let part = full_support_candidates(rank(r), l, Some(&spec));
        prop_assert!(part.windows(2).all(|p| p[0] < p[1]));
        merged.extend(part);
    }
    merged.sort();
    let n = merged.len();
    merged.dedup();
    prop_assert_eq!(n, merged.len(), "shards overlap");
    prop_assert_eq!(merged, whole);
    Ok(())
}

pub fn rotation_case() -> impl Strategy<Value = (CyclicWord, usize)> {
    (checkable_word(), 0usize..16)
}

pub fn short_ranked_auto_word() -> impl Strategy<Value = (WhiteheadAutomorphism, Word, Word)> {
    ranked_auto_word(10)
}

pub fn irank_case() -> impl Strategy<Value = (WhiteheadAutomorphism, Word, Word)> {
    (2usize..=3).prop_flat_map(|r| (automorphism_strategy(r), word_strategy(r, 9), Just(Word::identity())))
}

/// Every invariant with its name and a runner at the given case count.
pub fn all(cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    vec![
        ("free reduction idempotence", run(cases, raw_letters(), free_reduction_idempotent)),
        ("automorphism invertibility and homomorphism", run(cases, ranked_auto_word(20), automorphism_laws)),
        ("minimization orbit invariance", run(cases, short_ranked_auto_word(), minimization_orbit_invariant)),
        ("irank Aut invariance", run(cases, irank_case(), irank_aut_invariant)),
        ("per-letter Ivanov-Schupp agreement", run(cases, checkable_word(), ivanov_schupp_letters_agree)),
        ("checks invariant under rotation and inversion", run(cases, rotation_case(), checks_rotation_inversion_invariant)),
        ("checks never contradict", run(cases, checkable_word(), checks_never_contradict)),
        ("shard merge determinism", run(cases, shard_case(), shard_merge_deterministic)),
    ]
}
