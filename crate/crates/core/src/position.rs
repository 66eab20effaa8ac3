//! Positions, rule sets and play conventions shared by every game family.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::games;

/// Longest entry sequence a position may hold.
pub const MAX_ENTRIES: usize = 64;

/// A game position: a non-decreasing sequence of positive heap sizes or
/// column heights. Zero entries are stripped, so the empty sequence is the
/// unique terminal position of every family.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Position(Vec<u32>);

impl Position {
    pub fn terminal() -> Self {
        Position(Vec::new())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&a| u64::from(a)).sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.0.last().copied().unwrap_or(0)
    }

    /// Parses the comma-separated text form and canonicalizes it for `family`.
    pub fn parse(text: &str, family: Family) -> Result<Self> {
        canonicalize(&parse_entries(text)?, family)
    }

    /// Canonical form of a sequence already known to be non-decreasing.
    pub(crate) fn from_ordered(mut entries: Vec<u32>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0] <= w[1]));
        let zeros = entries.iter().take_while(|&&a| a == 0).count();
        entries.drain(..zeros);
        Position(entries)
    }

    /// Canonical form of an unordered heap multiset.
    pub(crate) fn from_multiset(mut entries: Vec<u32>) -> Self {
        entries.retain(|&a| a != 0);
        entries.sort_unstable();
        Position(entries)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Splits position text (`1,3,4`; empty or `0` for the terminal) into raw
/// entries without canonicalizing.
pub fn parse_entries(text: &str) -> Result<Vec<u64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad entry {tok:?}: {e}")))
        })
        .collect()
}

/// Canonicalizes a raw entry sequence for `family`.
///
/// Order-free families sort the entries; ordered families require the input
/// to be non-decreasing already. Zero entries are dropped in both cases.
pub fn canonicalize(entries: &[u64], family: Family) -> Result<Position> {
    if entries.len() > MAX_ENTRIES {
        return Err(Error::BoundsExceeded(format!(
            "{} entries, at most {MAX_ENTRIES} allowed",
            entries.len()
        )));
    }
    if family.is_ordered() && entries.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::NonMonotoneInput(entries.to_vec()));
    }
    let narrowed = entries
        .iter()
        .map(|&a| {
            u32::try_from(a)
                .map_err(|_| Error::BoundsExceeded(format!("entry {a} is not below 2^32")))
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(if family.is_ordered() {
        Position::from_ordered(narrowed)
    } else {
        Position::from_multiset(narrowed)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PlayConvention {
    /// The player without a move loses.
    Normal,
    /// The player who makes the last move loses.
    Misere,
}

impl PlayConvention {
    /// Outcome of a position with no moves.
    pub fn terminal_outcome(self) -> Outcome {
        match self {
            PlayConvention::Normal => Outcome::P,
            PlayConvention::Misere => Outcome::N,
        }
    }
}

impl fmt::Display for PlayConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlayConvention::Normal => "normal",
            PlayConvention::Misere => "misere",
        })
    }
}

impl FromStr for PlayConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normal" => Ok(PlayConvention::Normal),
            "misere" | "misère" => Ok(PlayConvention::Misere),
            other => Err(Error::Parse(format!("unknown convention {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    /// The previous player wins.
    P,
    /// The next player wins.
    N,
}

impl Outcome {
    pub fn is_p(self) -> bool {
        self == Outcome::P
    }

    pub fn from_is_p(is_p: bool) -> Self {
        if is_p {
            Outcome::P
        } else {
            Outcome::N
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::P => "P",
            Outcome::N => "N",
        })
    }
}

/// Normal-play nimber.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct GrundyValue(pub u32);

impl fmt::Display for GrundyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "*{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Nim,
    SlowNim,
    ExtendedNim,
    ExtendedSlowNim,
    MonotonicNim,
    MonotonicSlowNim,
    DietChomp,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Nim,
        Family::SlowNim,
        Family::ExtendedNim,
        Family::ExtendedSlowNim,
        Family::MonotonicNim,
        Family::MonotonicSlowNim,
        Family::DietChomp,
    ];

    /// Ordered families treat the position as a monotone sequence rather
    /// than a multiset of heaps.
    pub fn is_ordered(self) -> bool {
        matches!(
            self,
            Family::MonotonicNim | Family::MonotonicSlowNim | Family::DietChomp
        )
    }

    /// Families with add-moves, whose move graph contains cycles.
    pub fn is_loopy(self) -> bool {
        matches!(self, Family::ExtendedNim | Family::ExtendedSlowNim)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Nim => "nim",
            Family::SlowNim => "slow-nim",
            Family::ExtendedNim => "extended-nim",
            Family::ExtendedSlowNim => "extended-slow-nim",
            Family::MonotonicNim => "monotonic-nim",
            Family::MonotonicSlowNim => "monotonic-slow-nim",
            Family::DietChomp => "diet-chomp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown game family {s:?}")))
    }
}

/// A game family together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RuleSet {
    Nim,
    /// Subtract 1..=k from one heap.
    SlowNim {
        k: u32,
    },
    /// Nim plus adding 1..=add_limit tokens to one existing heap.
    ExtendedNim {
        add_limit: u32,
    },
    /// k-Slow Nim plus adding 1..=k tokens to one existing heap.
    ExtendedSlowNim {
        k: u32,
    },
    MonotonicNim,
    MonotonicSlowNim {
        k: u32,
    },
    /// Chomp on a Young diagram, at most k squares per bite.
    DietChomp {
        k: u32,
    },
}

impl RuleSet {
    /// Builds a validated rule set. `k` is required by the slow, monotonic
    /// slow and Diet Chomp families, `add_limit` by Extended Nim.
    pub fn new(family: Family, k: Option<u32>, add_limit: Option<u32>) -> Result<Self> {
        let need = |v: Option<u32>, what: &str| match v {
            Some(0) => Err(Error::InvalidParameter(format!(
                "{what} must be at least 1"
            ))),
            Some(v) => Ok(v),
            None => Err(Error::InvalidParameter(format!("{family} requires {what}"))),
        };
        let rules = match family {
            Family::Nim => RuleSet::Nim,
            Family::SlowNim => RuleSet::SlowNim { k: need(k, "k")? },
            Family::ExtendedNim => RuleSet::ExtendedNim {
                add_limit: need(add_limit, "add-limit")?,
            },
            Family::ExtendedSlowNim => RuleSet::ExtendedSlowNim { k: need(k, "k")? },
            Family::MonotonicNim => RuleSet::MonotonicNim,
            Family::MonotonicSlowNim => RuleSet::MonotonicSlowNim { k: need(k, "k")? },
            Family::DietChomp => RuleSet::DietChomp { k: need(k, "k")? },
        };
        Ok(rules)
    }

    pub fn family(self) -> Family {
        match self {
            RuleSet::Nim => Family::Nim,
            RuleSet::SlowNim { .. } => Family::SlowNim,
            RuleSet::ExtendedNim { .. } => Family::ExtendedNim,
            RuleSet::ExtendedSlowNim { .. } => Family::ExtendedSlowNim,
            RuleSet::MonotonicNim => Family::MonotonicNim,
            RuleSet::MonotonicSlowNim { .. } => Family::MonotonicSlowNim,
            RuleSet::DietChomp { .. } => Family::DietChomp,
        }
    }

    pub fn validate(self) -> Result<Self> {
        let (k, add_limit) = match self {
            RuleSet::SlowNim { k }
            | RuleSet::ExtendedSlowNim { k }
            | RuleSet::MonotonicSlowNim { k }
            | RuleSet::DietChomp { k } => (Some(k), None),
            RuleSet::ExtendedNim { add_limit } => (None, Some(add_limit)),
            RuleSet::Nim | RuleSet::MonotonicNim => (None, None),
        };
        RuleSet::new(self.family(), k, add_limit)
    }

    pub fn canonicalize(self, entries: &[u64]) -> Result<Position> {
        canonicalize(entries, self.family())
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RuleSet::Nim | RuleSet::MonotonicNim => write!(f, "{}", self.family()),
            RuleSet::SlowNim { k }
            | RuleSet::ExtendedSlowNim { k }
            | RuleSet::MonotonicSlowNim { k }
            | RuleSet::DietChomp { k } => write!(f, "{}(k={k})", self.family()),
            RuleSet::ExtendedNim { add_limit } => {
                write!(f, "{}(add-limit={add_limit})", self.family())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MoveKind {
    Subtract,
    Add,
    Chomp,
}

/// One legal move with enough detail to explain it.
///
/// `index` is the 1-based pile (or chomp column) in the canonical source
/// position. `amount` is the tokens taken or added, or for a chomp the
/// height of the bitten square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub index: usize,
    pub amount: u32,
    pub result: Position,
}

impl fmt::Display for MoveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MoveKind::Subtract => write!(f, "take {} from pile {}", self.amount, self.index)?,
            MoveKind::Add => write!(f, "add {} to pile {}", self.amount, self.index)?,
            MoveKind::Chomp => write!(f, "chomp at column {} height {}", self.index, self.amount)?,
        }
        write!(f, " -> {}", self.result)
    }
}

/// Every legal move from `p`, in generation order.
pub fn moves(rules: RuleSet, p: &Position) -> Vec<MoveRecord> {
    match rules {
        RuleSet::Nim => games::nim_move_records(p, u32::MAX),
        RuleSet::SlowNim { k } => games::nim_move_records(p, k),
        RuleSet::ExtendedNim { add_limit } => {
            let mut out = games::nim_move_records(p, u32::MAX);
            out.extend(games::add_move_records(p, add_limit));
            out
        }
        RuleSet::ExtendedSlowNim { k } => {
            let mut out = games::nim_move_records(p, k);
            out.extend(games::add_move_records(p, k));
            out
        }
        RuleSet::MonotonicNim => games::monotonic_move_records(p, u32::MAX),
        RuleSet::MonotonicSlowNim { k } => games::monotonic_move_records(p, k),
        RuleSet::DietChomp { k } => games::chomp_move_records(p, k),
    }
}

/// The deduplicated successor set of `p`, sorted lexicographically.
pub fn successors(rules: RuleSet, p: &Position) -> Vec<Position> {
    games::distinct_results(moves(rules, p))
}

/// True iff `p` has no moves. With k and add-limit at least 1, every family
/// has a move from any nonempty position.
pub fn is_terminal(_rules: RuleSet, p: &Position) -> bool {
    p.is_empty()
}
