use gamesolve::closedforms::*;
use gamesolve::solver::*;
use gamesolve::theorems::{run, SweepOptions, TheoremId};
use gamesolve::{
    canonicalize, Family, GrundyValue, MemoTable, Outcome, PlayConvention, Position, RuleSet,
};
use proptest::prelude::*;

const ACYCLIC: [RuleSet; 6] = [
    RuleSet::Nim,
    RuleSet::SlowNim { k: 2 },
    RuleSet::MonotonicNim,
    RuleSet::MonotonicSlowNim { k: 1 },
    RuleSet::MonotonicSlowNim { k: 3 },
    RuleSet::DietChomp { k: 2 },
];

#[test]
fn nimber_zero_iff_normal_p() {
    let mut memo = MemoTable::new();
    for rules in ACYCLIC {
        for p in enumerate_positions(Domain::new(3, 9)) {
            let g = memo.grundy(rules, &p).unwrap();
            let o = memo.outcome(rules, PlayConvention::Normal, &p).unwrap();
            assert_eq!(g == GrundyValue(0), o == Outcome::P, "{rules} at {p}");
        }
    }
}

#[test]
fn outcomes_stable_after_clearing() {
    let domain = Domain::new(3, 8);
    let mut memo = MemoTable::new();
    let collect = |memo: &mut MemoTable| {
        let mut out = Vec::new();
        for rules in ACYCLIC {
            for conv in [PlayConvention::Normal, PlayConvention::Misere] {
                for p in enumerate_positions(domain) {
                    out.push(memo.outcome(rules, conv, &p).unwrap());
                }
            }
        }
        out
    };
    let first = collect(&mut memo);
    memo.clear();
    // Visit in a different order: large positions first.
    let mut reversed = MemoTable::new();
    let all: Vec<Position> = enumerate_positions(domain).collect();
    for p in all.iter().rev() {
        reversed
            .outcome(RuleSet::DietChomp { k: 2 }, PlayConvention::Misere, p)
            .unwrap();
    }
    assert_eq!(collect(&mut memo), first);
    assert_eq!(collect(&mut reversed), first);
}

#[test]
fn nim_grundy_matches_xor() {
    let mut memo = MemoTable::new();
    for p in enumerate_positions(Domain::new(4, 15)) {
        assert_eq!(
            memo.grundy(RuleSet::Nim, &p).unwrap(),
            nim_grundy_formula(&p),
            "at {p}"
        );
        assert_eq!(
            memo.outcome(RuleSet::Nim, PlayConvention::Misere, &p)
                .unwrap()
                .is_p(),
            nim_p_misere(&p),
            "misère at {p}"
        );
    }
}

#[test]
fn slow_nim_matches_mod_formula() {
    let mut memo = MemoTable::new();
    for k in 1..=3 {
        let rules = RuleSet::SlowNim { k };
        for p in enumerate_positions(Domain::new(3, 15)) {
            assert_eq!(
                memo.grundy(rules, &p).unwrap(),
                slow_nim_grundy_formula(k, &p)
            );
            assert_eq!(
                memo.outcome(rules, PlayConvention::Misere, &p)
                    .unwrap()
                    .is_p(),
                slow_nim_p_misere(k, &p),
                "k={k} at {p}"
            );
        }
    }
}

#[test]
fn slow_nim_misere_examples_confirmed_by_solver() {
    let mut memo = MemoTable::new();
    let rules = RuleSet::SlowNim { k: 2 };
    for (raw, expected) in [
        (&[3u64, 3][..], false),
        (&[1, 3], true),
        (&[2, 5, 7], false),
    ] {
        let p = canonicalize(raw, Family::SlowNim).unwrap();
        assert_eq!(
            memo.outcome(rules, PlayConvention::Misere, &p)
                .unwrap()
                .is_p(),
            expected
        );
    }
}

#[test]
fn monotonic_examples_confirmed_by_solver() {
    let mut memo = MemoTable::new();
    let at = |raw: &[u64]| canonicalize(raw, Family::MonotonicNim).unwrap();
    assert_eq!(
        memo.outcome(RuleSet::MonotonicNim, PlayConvention::Normal, &at(&[2, 2]))
            .unwrap(),
        Outcome::P
    );
    assert_eq!(
        memo.outcome(RuleSet::MonotonicNim, PlayConvention::Normal, &at(&[1, 2]))
            .unwrap(),
        Outcome::N
    );
    assert_eq!(
        memo.outcome(RuleSet::MonotonicNim, PlayConvention::Misere, &at(&[1, 2]))
            .unwrap(),
        Outcome::P
    );
}

#[test]
fn diet2_normal_depends_only_on_total_mod_three() {
    let mut memo = MemoTable::new();
    let rules = RuleSet::DietChomp { k: 2 };
    for p in enumerate_positions(Domain::new(4, 12)) {
        let solved = memo.outcome(rules, PlayConvention::Normal, &p).unwrap();
        assert_eq!(solved.is_p(), diet2_normal_p(&p), "at {p}");
        // Same outcome as one 2-Slow Nim heap of the same size.
        let heap = canonicalize(&[p.total()], Family::SlowNim).unwrap();
        let single = memo
            .outcome(RuleSet::SlowNim { k: 2 }, PlayConvention::Normal, &heap)
            .unwrap();
        assert_eq!(solved, single);
    }
}

#[test]
fn narrow_misere_diet_chomp() {
    let mut memo = MemoTable::new();
    let rules = RuleSet::DietChomp { k: 2 };
    for p in enumerate_positions(Domain::new(2, 30)) {
        let solved = memo
            .outcome(rules, PlayConvention::Misere, &p)
            .unwrap()
            .is_p();
        assert_eq!(solved, diet2_misere_p_narrow(&p).unwrap(), "at {p}");
    }
}

#[test]
fn local_verifier_examples() {
    let nim = verify_pset(
        RuleSet::Nim,
        PlayConvention::Normal,
        |p| nim_grundy_formula(p).0 == 0,
        Domain::new(3, 7),
    );
    assert!(nim.passed());
    assert_eq!(nim.checked, 120);

    let slow = verify_pset(
        RuleSet::SlowNim { k: 2 },
        PlayConvention::Misere,
        |p| slow_nim_p_misere(2, p),
        Domain::new(3, 10),
    );
    assert!(slow.passed(), "{:?}", slow.counterexamples);

    let ext = verify_pset(
        RuleSet::ExtendedSlowNim { k: 2 },
        PlayConvention::Normal,
        |p| slow_nim_grundy_formula(2, p).0 == 0,
        Domain::new(2, 9),
    );
    assert!(ext.passed());

    for (rules, domain) in [
        (RuleSet::ExtendedSlowNim { k: 1 }, Domain::new(1, 20)),
        (RuleSet::ExtendedSlowNim { k: 3 }, Domain::new(2, 12)),
    ] {
        let k = match rules {
            RuleSet::ExtendedSlowNim { k } => k,
            _ => unreachable!(),
        };
        let r = verify_grundy_consistency(rules, |p| slow_nim_grundy_formula(k, p), domain);
        assert!(r.passed(), "{rules}: {:?}", r.counterexamples);
        assert!(r.checked > 0 && r.skipped_boundary > 0);
    }
    let r = verify_grundy_consistency(
        RuleSet::ExtendedNim { add_limit: 2 },
        nim_grundy_formula,
        Domain::new(2, 10),
    );
    assert!(r.passed());
}

#[test]
fn one_heap_extended_slow_nim_skips_only_the_top() {
    // Heaps 19 and 20 can grow past 20 with k = 1: only 20 leaves the box.
    let r = verify_grundy_consistency(
        RuleSet::ExtendedSlowNim { k: 1 },
        |p| slow_nim_grundy_formula(1, p),
        Domain::new(1, 20),
    );
    assert_eq!((r.checked, r.skipped_boundary), (20, 1));
}

#[test]
fn verifiers_notice_a_flipped_label() {
    let target = canonicalize(&[1, 2, 3], Family::Nim).unwrap();
    let report = verify_pset(
        RuleSet::Nim,
        PlayConvention::Normal,
        |p| (nim_grundy_formula(p).0 == 0) != (*p == target),
        Domain::new(3, 7),
    );
    assert!(!report.passed());
    assert!(report
        .counterexamples
        .iter()
        .any(|c| c.position == vec![1, 2, 3]));

    let report = verify_grundy_consistency(
        RuleSet::ExtendedSlowNim { k: 2 },
        |p| {
            let g = slow_nim_grundy_formula(2, p);
            if p.entries() == [2, 4] {
                GrundyValue(g.0 + 1)
            } else {
                g
            }
        },
        Domain::new(2, 12),
    );
    assert!(!report.passed());
}

#[test]
fn parallel_sweeps_match_serial() {
    for id in [TheoremId::Thm1, TheoremId::Thm7, TheoremId::Lemma8] {
        let serial = run(id, &SweepOptions::defaults(id)).unwrap();
        let mut opts = SweepOptions::defaults(id);
        opts.threads = 4;
        assert_eq!(run(id, &opts).unwrap(), serial);
    }
    let mut serial = SweepOptions::defaults(TheoremId::Thm3);
    serial.flip = Some(vec![1, 1, 1]);
    let mut parallel = serial.clone();
    parallel.threads = 3;
    assert_eq!(
        run(TheoremId::Thm3, &serial).unwrap(),
        run(TheoremId::Thm3, &parallel).unwrap()
    );
}

proptest! {
    #[test]
    fn grundy_is_mex_of_successors(raw in prop::collection::vec(0u64..10, 0..4), k in 1u32..4) {
        let mut memo = MemoTable::new();
        let mut sorted = raw.clone();
        sorted.sort_unstable();
        for rules in [RuleSet::SlowNim { k }, RuleSet::MonotonicSlowNim { k }, RuleSet::DietChomp { k }] {
            let p = canonicalize(&sorted, rules.family()).unwrap();
            let g = memo.grundy(rules, &p).unwrap();
            let next: Vec<u32> = gamesolve::successors(rules, &p)
                .iter()
                .map(|q| memo.grundy(rules, q).unwrap().0)
                .collect();
            prop_assert_eq!(g.0, mex(next));
        }
    }

    #[test]
    fn misere_outcome_rule(raw in prop::collection::vec(0u64..9, 0..4)) {
        let mut memo = MemoTable::new();
        let mut sorted = raw.clone();
        sorted.sort_unstable();
        let rules = RuleSet::DietChomp { k: 2 };
        let p = canonicalize(&sorted, rules.family()).unwrap();
        let o = memo.outcome(rules, PlayConvention::Misere, &p).unwrap();
        let next = gamesolve::successors(rules, &p);
        // Terminal positions are N; otherwise N iff some move reaches a P-position.
        let reaches_p = next.iter().any(|q| memo.outcome(rules, PlayConvention::Misere, q).unwrap().is_p());
        let expected = if next.is_empty() || reaches_p { Outcome::N } else { Outcome::P };
        prop_assert_eq!(o, expected);
    }
}
