mod common;

use std::collections::{BTreeSet, HashMap};

use common::{checkable_strategy, inverse_of, rank};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use relcensus::enumeration::{enumerate_orbit_reps, full_support_candidates};
use relcensus::hyperbolicity::{
    cascade, check_blufstein_minian, check_cyclically_pinched, check_ivanov_schupp, check_small_cancellation,
    compute_pieces, DecidedBy, Status,
};
use relcensus::stallings::{irank_value, Irank};
use relcensus::whitehead::whitehead_graph;
use relcensus::{CyclicWord, Letter, Word};

fn c(s: &str) -> CyclicWord {
    CyclicWord::parse(s).unwrap()
}

/// Pieces by listing every subword at every locus of `w` and `w^-1`.
fn naive_pieces(w: &[Letter]) -> BTreeSet<Vec<Letter>> {
    let n = w.len();
    let inv = inverse_of(w);
    let mut loci: Vec<Vec<Letter>> = Vec::new();
    for base in [w.to_vec(), inv] {
        for p in 0..n {
            let mut r = base.clone();
            r.rotate_left(p);
            loci.push(r);
        }
    }
    let mut seen: HashMap<Vec<Letter>, Vec<usize>> = HashMap::new();
    for (i, r) in loci.iter().enumerate() {
        for k in 1..=n {
            seen.entry(r[..k].to_vec()).or_default().push(i);
        }
    }
    seen.into_iter()
        .filter(|(_, at)| at.iter().any(|&i| at.iter().any(|&j| loci[i] != loci[j])))
        .map(|(s, _)| s)
        .collect()
}

/// Fewest pieces concatenating to some rotation of `w`, by dynamic programming.
fn naive_min_factorization(w: &[Letter], pieces: &BTreeSet<Vec<Letter>>) -> Option<usize> {
    let n = w.len();
    let mut best: Option<usize> = None;
    for s in 0..n {
        let mut r = w.to_vec();
        r.rotate_left(s);
        let mut dp = vec![usize::MAX; n + 1];
        dp[0] = 0;
        for i in 0..n {
            if dp[i] == usize::MAX {
                continue;
            }
            for j in i + 1..=n {
                if pieces.contains(&r[i..j]) {
                    dp[j] = dp[j].min(dp[i] + 1);
                }
            }
        }
        if dp[n] != usize::MAX {
            best = Some(best.map_or(dp[n], |b| b.min(dp[n])));
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pieces_match_naive(w in (2usize..=3).prop_flat_map(|r| checkable_strategy(r, 14))) {
        let p = compute_pieces(&w).unwrap();
        let naive = naive_pieces(w.letters());
        let pieces: BTreeSet<Vec<Letter>> = p.pieces().iter().map(|x| x.letters().to_vec()).collect();
        prop_assert_eq!(&pieces, &naive);
        prop_assert_eq!(p.max_piece_length, naive.iter().map(|x| x.len()).max().unwrap_or(0));
        prop_assert_eq!(p.min_factorization, naive_min_factorization(w.letters(), &naive));
    }

    #[test]
    fn whitehead_graph_counts_adjacencies(w in (1usize..=3).prop_flat_map(|r| checkable_strategy(r, 20))) {
        let g = whitehead_graph(&w, false).unwrap();
        prop_assert_eq!(g.edge_count(), w.len());
    }
}

#[test]
fn cascade_stage_examples() {
    let status = |v: relcensus::Result<relcensus::hyperbolicity::Verdict>| v.unwrap().status;
    assert_eq!(status(check_cyclically_pinched(&c("aabb"))), Status::NonHyperbolic);
    assert_eq!(status(check_cyclically_pinched(&c("aabbcc"))), Status::Hyperbolic);
    assert_eq!(status(check_cyclically_pinched(&c("abAB"))), Status::Inconclusive);
    assert_eq!(status(check_ivanov_schupp(&c("abAB"))), Status::NonHyperbolic);
    assert_eq!(status(check_ivanov_schupp(&c("abbbAB"))), Status::NonHyperbolic);
    assert_eq!(status(check_ivanov_schupp(&c("ababbabbbabbbb"))), Status::Hyperbolic);
    assert_eq!(status(check_small_cancellation(&c("abAB"))), Status::Inconclusive);
    assert_eq!(status(check_small_cancellation(&c("aabb"))), Status::Inconclusive);
    assert_eq!(status(check_blufstein_minian(&c("abAB"))), Status::Inconclusive);

    let v = cascade(&c("aabb"), None).unwrap();
    assert_eq!((v.status, v.decided_by), (Status::NonHyperbolic, DecidedBy::Pinched));
    let v = cascade(&c("abAB"), None).unwrap();
    assert_eq!((v.status, v.decided_by), (Status::NonHyperbolic, DecidedBy::IvanovSchupp));
    assert!(cascade(&c("aaa"), None).is_err());
    assert!(cascade(&c("ababbabbbabbbb"), None).is_err());

    let p = compute_pieces(&c("ababbabbbabbbb")).unwrap();
    let naive = naive_pieces(c("ababbabbbabbbb").letters());
    assert_eq!(p.max_piece_length, naive.iter().map(|x| x.len()).max().unwrap());
    assert_eq!(p.min_factorization, naive_min_factorization(c("ababbabbbabbbb").letters(), &naive));
}

fn random_cyclic_word(rng: &mut StdRng, r: usize, n: usize) -> CyclicWord {
    loop {
        let mut l: Vec<Letter> = Vec::with_capacity(n);
        while l.len() < n {
            let x = Letter::from_index(rng.gen_range(0..2 * r));
            if l.last().is_none_or(|&y| y != x.inverse()) {
                l.push(x);
            }
        }
        if l[0] != l[n - 1].inverse() {
            let w = Word::reduce(l).to_cyclic();
            if !w.is_proper_power() {
                return w;
            }
        }
    }
}

#[test]
fn long_random_words_are_seven_small() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let samples = 1000;
    let hits = (0..samples)
        .filter(|_| {
            let w = random_cyclic_word(&mut rng, 2, 40);
            let v = check_small_cancellation(&w).unwrap();
            v.status == Status::Hyperbolic && v.certificate.starts_with("C(7)")
        })
        .count();
    assert!(hits * 100 >= 95 * samples, "only {hits} of {samples} satisfy C(7)");
}

#[test]
fn blufstein_minian_decides_beyond_small_cancellation() {
    let w = c("Abcaabbbc");
    let p = compute_pieces(&w).unwrap();
    assert_eq!((p.min_factorization, p.t_value), (Some(6), Some(3)));
    assert_eq!(check_small_cancellation(&w).unwrap().status, Status::Inconclusive);
    assert_eq!(check_blufstein_minian(&w).unwrap().status, Status::Hyperbolic);
    assert_eq!(check_ivanov_schupp(&w).unwrap().status, Status::Hyperbolic);
}

/// Observed, not a theorem: among Whitehead-minimal rank-2 words the
/// fourth check never settles anything the third leaves open.
#[test]
fn rank_two_candidates_never_need_blufstein_minian() {
    for l in 4..=14 {
        for w in full_support_candidates(rank(2), l, None) {
            if w.is_proper_power() || check_small_cancellation(&w).unwrap().is_conclusive() {
                continue;
            }
            assert_eq!(check_blufstein_minian(&w).unwrap().status, Status::Inconclusive, "{w}");
        }
    }
}

/// Nonhyperbolicity certified by the first two checks forces imprimitivity rank 2.
#[test]
fn nonhyperbolic_certificates_have_irank_two() {
    for r in 2..=3 {
        for l in 1..=8 {
            for w in enumerate_orbit_reps(rank(r), l, true) {
                if w.is_proper_power() {
                    continue;
                }
                let pinched = check_cyclically_pinched(&w).unwrap().status;
                let is = check_ivanov_schupp(&w).unwrap().status;
                if pinched == Status::NonHyperbolic || is == Status::NonHyperbolic {
                    assert_eq!(irank_value(&w.to_word(), None), Irank::Finite(2), "{w}");
                }
            }
        }
    }
}
