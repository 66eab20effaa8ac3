//! Brute-force Sprague-Grundy and outcome computation, plus the local
//! verifiers used for families whose move graph has cycles.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::position::{
    successors, GrundyValue, Outcome, PlayConvention, Position, RuleSet, MAX_ENTRIES,
};

/// Smallest non-negative integer absent from `values`.
pub fn mex<I: IntoIterator<Item = u32>>(values: I) -> u32 {
    let values: Vec<u32> = values.into_iter().collect();
    let mut seen = vec![false; values.len() + 1];
    for v in values {
        if let Some(slot) = seen.get_mut(v as usize) {
            *slot = true;
        }
    }
    seen.iter().position(|&s| !s).unwrap_or(seen.len()) as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Entry {
    outcome: Outcome,
    grundy: Option<GrundyValue>,
}

/// Transposition table keyed by rule set, convention and canonical position.
///
/// Entries are write-once. Normal-play entries also carry the nimber;
/// misère entries hold only the outcome.
#[derive(Debug, Default, Clone)]
pub struct MemoTable {
    tables: HashMap<(RuleSet, PlayConvention), HashMap<Position, Entry>>,
    hits: u64,
    misses: u64,
    max_states: Option<usize>,
}

impl MemoTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// A table that refuses to grow past `max_states` positions per game.
    pub fn with_state_limit(max_states: usize) -> Self {
        MemoTable {
            max_states: Some(max_states),
            ..Self::default()
        }
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    /// Number of stored positions across all games.
    pub fn len(&self) -> usize {
        self.tables.values().map(HashMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&mut self) {
        self.tables.clear();
        self.hits = 0;
        self.misses = 0;
    }

    /// Folds another worker's table into this one. Positions present in both
    /// must agree.
    pub fn merge(&mut self, other: MemoTable) {
        self.hits += other.hits;
        self.misses += other.misses;
        for (key, table) in other.tables {
            let mine = self.tables.entry(key).or_default();
            for (p, e) in table {
                let prev = mine.entry(p).or_insert(e);
                assert_eq!(*prev, e, "memo tables disagree");
            }
        }
    }

    pub fn grundy(&mut self, rules: RuleSet, p: &Position) -> Result<GrundyValue> {
        let entry = self.solve(rules, PlayConvention::Normal, p)?;
        Ok(entry.grundy.expect("normal-play entries carry a nimber"))
    }

    pub fn outcome(
        &mut self,
        rules: RuleSet,
        convention: PlayConvention,
        p: &Position,
    ) -> Result<Outcome> {
        Ok(self.solve(rules, convention, p)?.outcome)
    }

    fn solve(
        &mut self,
        rules: RuleSet,
        convention: PlayConvention,
        root: &Position,
    ) -> Result<Entry> {
        if rules.family().is_loopy() {
            return Err(Error::LoopyFamily(rules.family()));
        }
        if root.len() > MAX_ENTRIES {
            return Err(Error::BoundsExceeded(format!(
                "position has {} entries, at most {MAX_ENTRIES} allowed",
                root.len()
            )));
        }
        let limit = self.max_states;
        let table = self.tables.entry((rules, convention)).or_default();
        if let Some(e) = table.get(root) {
            self.hits += 1;
            return Ok(*e);
        }
        self.misses += 1;

        // Post-order walk with an explicit stack; the move graph is acyclic
        // because every move lowers the token count.
        let mut stack = vec![root.clone()];
        while let Some(top) = stack.last().cloned() {
            if table.contains_key(&top) {
                stack.pop();
                continue;
            }
            let next = successors(rules, &top);
            let before = stack.len();
            stack.extend(next.iter().filter(|q| !table.contains_key(*q)).cloned());
            if stack.len() > before {
                continue;
            }
            let entry = match convention {
                PlayConvention::Normal => {
                    let g = mex(next.iter().map(|q| table[q].grundy.unwrap().0));
                    Entry {
                        outcome: Outcome::from_is_p(g == 0),
                        grundy: Some(GrundyValue(g)),
                    }
                }
                PlayConvention::Misere => {
                    let outcome = if next.is_empty() {
                        convention.terminal_outcome()
                    } else {
                        Outcome::from_is_p(next.iter().all(|q| !table[q].outcome.is_p()))
                    };
                    Entry {
                        outcome,
                        grundy: None,
                    }
                }
            };
            if limit.is_some_and(|max| table.len() >= max) {
                return Err(Error::BoundsExceeded(format!(
                    "memo table for {rules} exceeded {} positions",
                    limit.unwrap()
                )));
            }
            table.insert(top, entry);
            stack.pop();
        }
        Ok(table[root])
    }
}

/// A finite box of canonical positions: at most `max_piles` entries, each in
/// `1..=max_entry`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Domain {
    pub max_piles: usize,
    pub max_entry: u32,
}

impl Domain {
    pub fn new(max_piles: usize, max_entry: u32) -> Self {
        Domain {
            max_piles,
            max_entry,
        }
    }

    pub fn contains(&self, p: &Position) -> bool {
        p.len() <= self.max_piles && p.max_entry() <= self.max_entry
    }
}

/// Canonical positions of `domain` in lexicographic order.
///
/// Canonical positions are non-decreasing for ordered and order-free families
/// alike (heap multisets are stored sorted), so one enumeration serves both.
pub fn enumerate_positions(domain: Domain) -> Positions {
    Positions {
        domain,
        current: Some(Vec::new()),
    }
}

pub struct Positions {
    domain: Domain,
    current: Option<Vec<u32>>,
}

impl Iterator for Positions {
    type Item = Position;

    fn next(&mut self) -> Option<Position> {
        let current = self.current.as_mut()?;
        let out = Position::from_ordered(current.clone());

        let Domain {
            max_piles,
            max_entry,
        } = self.domain;
        if current.len() < max_piles && max_entry >= 1 {
            let last = current.last().copied().unwrap_or(1);
            current.push(last);
        } else {
            loop {
                match current.pop() {
                    None => {
                        self.current = None;
                        break;
                    }
                    Some(v) if v < max_entry => {
                        current.push(v + 1);
                        break;
                    }
                    Some(_) => {}
                }
            }
        }
        Some(out)
    }
}

/// Non-decreasing sequences of length `0..=max_len` over `0..=max_entry`,
/// zeros included, in lexicographic order. These are the raw inputs whose
/// length parity matters to the difference-position map.
pub fn enumerate_raw_monotone(max_len: usize, max_entry: u32) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, max_len: usize, max_entry: u32, out: &mut Vec<Vec<u32>>) {
        out.push(prefix.clone());
        if prefix.len() == max_len {
            return;
        }
        let start = prefix.last().copied().unwrap_or(0);
        for v in start..=max_entry {
            prefix.push(v);
            extend(prefix, max_len, max_entry, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), max_len, max_entry, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub position: Vec<u32>,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checked: usize,
    pub skipped_boundary: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn fail(&mut self, position: impl Into<Vec<u32>>, reason: impl Into<String>) {
        self.counterexamples.push(Counterexample {
            position: position.into(),
            reason: reason.into(),
        });
    }

    pub fn absorb(&mut self, other: VerificationReport) {
        self.checked += other.checked;
        self.skipped_boundary += other.skipped_boundary;
        self.counterexamples.extend(other.counterexamples);
    }
}

/// Checks that `claimed_p` is a consistent P-set on `domain`: terminals get
/// the convention's outcome, no claimed P-position moves to another inside
/// the domain, and every other position has a claimed P-successor.
///
/// A position without an in-domain P-successor that has moves leaving the
/// domain is counted as skipped rather than failed. Works for loopy
/// families, since only single moves are examined.
pub fn verify_pset<F>(
    rules: RuleSet,
    convention: PlayConvention,
    claimed_p: F,
    domain: Domain,
) -> VerificationReport
where
    F: Fn(&Position) -> bool,
{
    let mut report = VerificationReport::default();
    for p in enumerate_positions(domain) {
        report.checked += 1;
        let is_p = claimed_p(&p);
        let next = successors(rules, &p);
        if next.is_empty() {
            let expected = convention.terminal_outcome().is_p();
            if is_p != expected {
                report.fail(
                    p.entries(),
                    format!(
                        "terminal labelled {} under {convention} play",
                        Outcome::from_is_p(is_p)
                    ),
                );
            }
            continue;
        }
        let mut p_successor = None;
        let mut leaves_domain = false;
        for q in &next {
            if !domain.contains(q) {
                leaves_domain = true;
            } else if claimed_p(q) {
                p_successor = Some(q);
                break;
            }
        }
        match (is_p, p_successor) {
            (true, Some(q)) => {
                report.fail(p.entries(), format!("P-position moves to P-position {q}"))
            }
            (false, None) if leaves_domain => report.skipped_boundary += 1,
            (false, None) => report.fail(p.entries(), "N-position has no move to a P-position"),
            _ => {}
        }
    }
    report
}

/// Checks that `labeling` satisfies the mex rule under the (possibly loopy)
/// move set of `rules`, for every domain position whose successors all stay
/// in the domain. Other positions are counted as skipped.
pub fn verify_grundy_consistency<F>(
    rules: RuleSet,
    labeling: F,
    domain: Domain,
) -> VerificationReport
where
    F: Fn(&Position) -> GrundyValue,
{
    let mut report = VerificationReport::default();
    for p in enumerate_positions(domain) {
        let next = successors(rules, &p);
        if !next.iter().all(|q| domain.contains(q)) {
            report.skipped_boundary += 1;
            continue;
        }
        report.checked += 1;
        let label = labeling(&p).0;
        let m = mex(next.iter().map(|q| labeling(q).0));
        if m != label {
            report.fail(
                p.entries(),
                format!("label {label} but mex of successors is {m}"),
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::position::{canonicalize, Family};

    fn heaps(e: &[u64]) -> Position {
        canonicalize(e, Family::Nim).unwrap()
    }

    #[test]
    fn mex_examples() {
        assert_eq!(mex([]), 0);
        assert_eq!(mex([0, 1, 2]), 3);
        assert_eq!(mex([0, 2]), 1);
        assert_eq!(mex([5, 0, 0, 1]), 2);
    }

    #[test]
    fn grundy_examples() {
        let mut memo = MemoTable::new();
        assert_eq!(
            memo.grundy(RuleSet::Nim, &heaps(&[1, 2, 3])).unwrap(),
            GrundyValue(0)
        );
        assert_eq!(
            memo.grundy(RuleSet::SlowNim { k: 2 }, &heaps(&[4, 5]))
                .unwrap(),
            GrundyValue(3)
        );
        let g = memo
            .grundy(RuleSet::DietChomp { k: 2 }, &heaps(&[1, 1]))
            .unwrap();
        assert_ne!(g, GrundyValue(0));
    }

    #[test]
    fn terminal_outcomes() {
        let mut memo = MemoTable::new();
        for rules in [
            RuleSet::Nim,
            RuleSet::MonotonicNim,
            RuleSet::DietChomp { k: 2 },
        ] {
            let t = Position::terminal();
            assert_eq!(
                memo.outcome(rules, PlayConvention::Normal, &t).unwrap(),
                Outcome::P
            );
            assert_eq!(
                memo.outcome(rules, PlayConvention::Misere, &t).unwrap(),
                Outcome::N
            );
        }
        let one = canonicalize(&[0, 1], Family::DietChomp).unwrap();
        assert_eq!(
            memo.outcome(RuleSet::DietChomp { k: 2 }, PlayConvention::Misere, &one)
                .unwrap(),
            Outcome::P
        );
    }

    #[test]
    fn loopy_families_are_refused() {
        let mut memo = MemoTable::new();
        let p = heaps(&[2]);
        assert_eq!(
            memo.grundy(RuleSet::ExtendedNim { add_limit: 1 }, &p),
            Err(Error::LoopyFamily(Family::ExtendedNim))
        );
        assert!(memo
            .outcome(
                RuleSet::ExtendedSlowNim { k: 2 },
                PlayConvention::Misere,
                &p
            )
            .is_err());
    }

    #[test]
    fn state_limit_is_enforced() {
        let mut memo = MemoTable::with_state_limit(10);
        let err = memo.grundy(RuleSet::Nim, &heaps(&[5, 6, 7])).unwrap_err();
        assert!(matches!(err, Error::BoundsExceeded(_)));
    }

    #[test]
    fn memo_counts_hits_and_survives_clearing() {
        let mut memo = MemoTable::new();
        let p = heaps(&[3, 5, 6]);
        let first = memo.grundy(RuleSet::Nim, &p).unwrap();
        assert_eq!(memo.misses(), 1);
        memo.grundy(RuleSet::Nim, &p).unwrap();
        assert_eq!(memo.hits(), 1);
        memo.clear();
        assert!(memo.is_empty());
        assert_eq!(memo.grundy(RuleSet::Nim, &p).unwrap(), first);
    }

    #[test]
    fn merged_tables_agree() {
        let mut a = MemoTable::new();
        let mut b = MemoTable::new();
        a.grundy(RuleSet::Nim, &heaps(&[2, 3])).unwrap();
        b.grundy(RuleSet::Nim, &heaps(&[3, 4])).unwrap();
        let before = a.len();
        a.merge(b);
        assert!(a.len() > before);
    }

    #[test]
    fn enumeration_examples() {
        let got: Vec<_> = enumerate_positions(Domain::new(1, 2)).collect();
        assert_eq!(got, vec![Position::terminal(), heaps(&[1]), heaps(&[2])]);
        let got: Vec<_> = enumerate_positions(Domain::new(2, 1)).collect();
        assert_eq!(got, vec![Position::terminal(), heaps(&[1]), heaps(&[1, 1])]);
        assert_eq!(enumerate_positions(Domain::new(2, 3)).count(), 10);
        assert_eq!(enumerate_positions(Domain::new(3, 0)).count(), 1);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let all: Vec<_> = enumerate_positions(Domain::new(3, 5)).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        // Multisets of size <= 3 over 1..=5: 1 + 5 + 15 + 35.
        assert_eq!(all.len(), 56);
    }

    #[test]
    fn raw_enumeration_counts() {
        // Non-decreasing sequences over 0..=2 of length <= 2: 1 + 3 + 6.
        assert_eq!(enumerate_raw_monotone(2, 2).len(), 10);
        assert_eq!(enumerate_raw_monotone(0, 5), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn pset_verifier_flags_bad_terminal() {
        let report = verify_pset(
            RuleSet::Nim,
            PlayConvention::Misere,
            |p| p.is_empty(),
            Domain::new(1, 2),
        );
        assert!(report.counterexamples.iter().any(|c| c.position.is_empty()));
    }
}
