//! Sweeps that check each closed-form result against the solver.
//!
//! Every sweep can be told to invert its closed form at a single entry
//! sequence ([`SweepOptions::flip`]), which must then surface as a
//! counterexample. That keeps the sweeps themselves honest.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::analysis::{figure_points, lattice_outcome, Margins};
use crate::closedforms::{
    diet2_misere_bulk_conjecture, diet2_misere_p_narrow, diet2_normal_p, is_perfect_stairs,
    monotonic_p, nim_grundy_formula, nim_p_misere, slow_nim_grundy_formula, slow_nim_p_misere,
    stairs_mod3_fact, MonotonicVariant,
};
use crate::error::{Error, Result};
use crate::games::diet_chomp_moves;
use crate::position::{canonicalize, Family, GrundyValue, PlayConvention, Position, RuleSet};
use crate::solver::{
    enumerate_positions, enumerate_raw_monotone, verify_grundy_consistency, verify_pset,
    Counterexample, Domain, MemoTable, VerificationReport,
};
use crate::sweep::par_map;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremId {
    Thm1,
    Cor2,
    Thm3,
    Thm4,
    Thm5,
    Thm6Grundy,
    Thm6Pset,
    Thm7,
    Lemma8,
    Lemma9,
    BulkConjecture,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::Thm1,
        TheoremId::Cor2,
        TheoremId::Thm3,
        TheoremId::Thm4,
        TheoremId::Thm5,
        TheoremId::Thm6Grundy,
        TheoremId::Thm6Pset,
        TheoremId::Thm7,
        TheoremId::Lemma8,
        TheoremId::Lemma9,
        TheoremId::BulkConjecture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Thm1 => "thm1",
            TheoremId::Cor2 => "cor2",
            TheoremId::Thm3 => "thm3",
            TheoremId::Thm4 => "thm4",
            TheoremId::Thm5 => "thm5",
            TheoremId::Thm6Grundy => "thm6-grundy",
            TheoremId::Thm6Pset => "thm6-pset",
            TheoremId::Thm7 => "thm7",
            TheoremId::Lemma8 => "lemma8",
            TheoremId::Lemma9 => "lemma9",
            TheoremId::BulkConjecture => "bulk-conjecture",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            TheoremId::Thm1 => "Nim nimber is the XOR of the heaps",
            TheoremId::Cor2 => "normal Nim P-positions have XOR 0 (local P-set check)",
            TheoremId::Thm3 => "misère Nim P-positions",
            TheoremId::Thm4 => "k-Slow Nim nimber is the XOR of heaps mod k+1",
            TheoremId::Thm5 => "misère k-Slow Nim P-positions",
            TheoremId::Thm6Grundy => "extended games keep the non-extended nimbers (mex check)",
            TheoremId::Thm6Pset => "extended games keep the non-extended P-positions",
            TheoremId::Thm7 => "monotonic P-positions via the difference position",
            TheoremId::Lemma8 => "normal 2-Diet Chomp P iff squares divisible by 3",
            TheoremId::Lemma9 => "misère 2-Diet Chomp on 1 and 2 columns",
            TheoremId::BulkConjecture => "misère 3-column 2-Diet Chomp bulk formula",
        }
    }

    /// `(max_piles, max_entry)` used when the caller does not override them.
    pub fn default_bounds(self) -> (usize, u32) {
        match self {
            TheoremId::Thm1 | TheoremId::Cor2 | TheoremId::Thm3 => (4, 15),
            TheoremId::Thm4 | TheoremId::Thm5 => (3, 15),
            TheoremId::Thm6Grundy | TheoremId::Thm6Pset => (2, 12),
            TheoremId::Thm7 | TheoremId::Lemma8 => (4, 12),
            TheoremId::Lemma9 => (2, 30),
            TheoremId::BulkConjecture => (3, 30),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown theorem id {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    pub max_piles: usize,
    pub max_entry: u32,
    /// Restrict to one k; otherwise k = 1, 2, 3.
    pub k: Option<u32>,
    /// Restrict Extended Nim to one add-limit; otherwise 1 and 2.
    pub add_limit: Option<u32>,
    /// Restrict to one convention where a theorem covers both.
    pub convention: Option<PlayConvention>,
    pub threads: usize,
    /// Invert the closed form at this entry sequence (raw for thm7 and the
    /// bulk formula, canonical elsewhere).
    pub flip: Option<Vec<u32>>,
    pub margins: Margins,
}

impl SweepOptions {
    pub fn defaults(id: TheoremId) -> Self {
        let (max_piles, max_entry) = id.default_bounds();
        SweepOptions {
            max_piles,
            max_entry,
            k: None,
            add_limit: None,
            convention: None,
            threads: 1,
            flip: None,
            margins: Margins::PINNED,
        }
    }

    fn flipped(&self, entries: &[u32]) -> bool {
        self.flip.as_deref() == Some(entries)
    }

    fn ks(&self) -> Vec<u32> {
        self.k.map_or_else(|| vec![1, 2, 3], |k| vec![k])
    }

    fn conventions(&self) -> Vec<PlayConvention> {
        self.convention.map_or_else(
            || vec![PlayConvention::Normal, PlayConvention::Misere],
            |c| vec![c],
        )
    }
}

/// One sub-sweep (a single rule set and convention) of a theorem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub theorem: TheoremId,
    pub case: String,
    #[serde(flatten)]
    pub report: VerificationReport,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

impl Serialize for TheoremId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Solver-vs-formula comparison over `positions`, sharded across workers.
/// `check` returns a failure reason, or `None` when the position agrees.
fn solver_sweep<T, F>(items: &[T], threads: usize, check: F) -> Result<VerificationReport>
where
    T: Sync,
    F: Fn(&mut MemoTable, &T) -> Result<Option<Counterexample>> + Sync,
{
    let results = par_map(items, threads, MemoTable::new, check);
    let mut report = VerificationReport::default();
    for r in results {
        report.checked += 1;
        if let Some(c) = r? {
            report.counterexamples.push(c);
        }
    }
    Ok(report)
}

fn mismatch(p: &[u32], reason: String) -> Counterexample {
    Counterexample {
        position: p.to_vec(),
        reason,
    }
}

fn extended_cases(opts: &SweepOptions) -> Vec<RuleSet> {
    let mut cases = Vec::new();
    let slow = opts.k.is_some() || opts.add_limit.is_none();
    let plain = opts.add_limit.is_some() || opts.k.is_none();
    if slow {
        cases.extend(
            opts.ks()
                .into_iter()
                .map(|k| RuleSet::ExtendedSlowNim { k }),
        );
    }
    if plain {
        let limits = opts.add_limit.map_or_else(|| vec![1, 2], |a| vec![a]);
        cases.extend(
            limits
                .into_iter()
                .map(|add_limit| RuleSet::ExtendedNim { add_limit }),
        );
    }
    cases
}

/// Non-extended nimber formula matching an extended rule set.
fn base_formula(rules: RuleSet, p: &Position) -> GrundyValue {
    match rules {
        RuleSet::ExtendedSlowNim { k } => slow_nim_grundy_formula(k, p),
        _ => nim_grundy_formula(p),
    }
}

/// Runs every sub-sweep of `id`.
pub fn run(id: TheoremId, opts: &SweepOptions) -> Result<Vec<SweepReport>> {
    if opts.max_piles == 0 || opts.max_entry == 0 {
        return Err(Error::InvalidParameter(
            "domain bounds must be at least 1".into(),
        ));
    }
    if opts.k == Some(0) || opts.add_limit == Some(0) {
        return Err(Error::InvalidParameter(
            "k and add-limit must be at least 1".into(),
        ));
    }
    let domain = Domain::new(opts.max_piles, opts.max_entry);
    let positions = || enumerate_positions(domain).collect::<Vec<_>>();
    let mut out = Vec::new();
    let mut push = |case: String, report: VerificationReport| {
        out.push(SweepReport {
            theorem: id,
            case,
            report,
        })
    };

    match id {
        TheoremId::Thm1 => {
            let report = solver_sweep(&positions(), opts.threads, |memo, p| {
                let solved = memo.grundy(RuleSet::Nim, p)?;
                let mut formula = nim_grundy_formula(p);
                if opts.flipped(p.entries()) {
                    formula.0 ^= 1;
                }
                Ok((solved != formula)
                    .then(|| mismatch(p.entries(), format!("solver {solved}, formula {formula}"))))
            })?;
            push("nim normal".into(), report);
        }
        TheoremId::Cor2 => {
            let report = verify_pset(
                RuleSet::Nim,
                PlayConvention::Normal,
                |p| (nim_grundy_formula(p).0 == 0) != opts.flipped(p.entries()),
                domain,
            );
            push("nim normal".into(), report);
        }
        TheoremId::Thm3 => {
            let report = solver_sweep(&positions(), opts.threads, |memo, p| {
                compare_outcome(memo, RuleSet::Nim, PlayConvention::Misere, p, |p| {
                    nim_p_misere(p) != opts.flipped(p.entries())
                })
            })?;
            push("nim misere".into(), report);
        }
        TheoremId::Thm4 => {
            let all = positions();
            for k in opts.ks() {
                let rules = RuleSet::SlowNim { k };
                let report = solver_sweep(&all, opts.threads, |memo, p| {
                    let solved = memo.grundy(rules, p)?;
                    let mut formula = slow_nim_grundy_formula(k, p);
                    if opts.flipped(p.entries()) {
                        formula.0 ^= 1;
                    }
                    Ok((solved != formula).then(|| {
                        mismatch(p.entries(), format!("solver {solved}, formula {formula}"))
                    }))
                })?;
                push(format!("{rules} normal"), report);
            }
        }
        TheoremId::Thm5 => {
            let all = positions();
            for k in opts.ks() {
                let rules = RuleSet::SlowNim { k };
                let report = solver_sweep(&all, opts.threads, |memo, p| {
                    compare_outcome(memo, rules, PlayConvention::Misere, p, |p| {
                        slow_nim_p_misere(k, p) != opts.flipped(p.entries())
                    })
                })?;
                push(format!("{rules} misere"), report);
            }
        }
        TheoremId::Thm6Grundy => {
            for rules in extended_cases(opts) {
                let report = verify_grundy_consistency(
                    rules,
                    |p| {
                        let g = base_formula(rules, p);
                        if opts.flipped(p.entries()) {
                            GrundyValue(g.0 + 1)
                        } else {
                            g
                        }
                    },
                    domain,
                );
                push(rules.to_string(), report);
            }
        }
        TheoremId::Thm6Pset => {
            for rules in extended_cases(opts) {
                for conv in opts.conventions() {
                    let claimed = |p: &Position| {
                        let is_p = match (rules, conv) {
                            (RuleSet::ExtendedSlowNim { k }, PlayConvention::Misere) => {
                                slow_nim_p_misere(k, p)
                            }
                            (_, PlayConvention::Misere) => nim_p_misere(p),
                            (_, PlayConvention::Normal) => base_formula(rules, p).0 == 0,
                        };
                        is_p != opts.flipped(p.entries())
                    };
                    push(
                        format!("{rules} {conv}"),
                        verify_pset(rules, conv, claimed, domain),
                    );
                }
            }
        }
        TheoremId::Thm7 => {
            let raws = enumerate_raw_monotone(opts.max_piles, opts.max_entry);
            let mut variants = Vec::new();
            if opts.k.is_none() {
                variants.push((RuleSet::MonotonicNim, MonotonicVariant::Nim));
            }
            for k in opts.ks() {
                variants.push((
                    RuleSet::MonotonicSlowNim { k },
                    MonotonicVariant::SlowNim { k },
                ));
            }
            for (rules, variant) in variants {
                for conv in opts.conventions() {
                    let report = solver_sweep(&raws, opts.threads, |memo, raw| {
                        let wide: Vec<u64> = raw.iter().map(|&a| u64::from(a)).collect();
                        let p = canonicalize(&wide, Family::MonotonicNim)?;
                        let solved = memo.outcome(rules, conv, &p)?.is_p();
                        let claimed = monotonic_p(raw, variant, conv)? != opts.flipped(raw);
                        Ok((solved != claimed).then(|| {
                            mismatch(
                                raw,
                                format!("solver P={solved}, difference form P={claimed}"),
                            )
                        }))
                    })?;
                    push(format!("{rules} {conv}"), report);
                }
            }
        }
        TheoremId::Lemma8 => {
            let rules = RuleSet::DietChomp { k: 2 };
            let mut report = solver_sweep(&positions(), opts.threads, |memo, p| {
                if let Some(c) = compare_outcome(memo, rules, PlayConvention::Normal, p, |p| {
                    diet2_normal_p(p) != opts.flipped(p.entries())
                })? {
                    return Ok(Some(c));
                }
                // Only perfect stairs lack a 2-square bite.
                let total = p.total();
                let has_double = diet_chomp_moves(2, p)
                    .iter()
                    .any(|q| q.total() + 2 == total);
                let stairs = is_perfect_stairs(p);
                Ok((!p.is_empty() && has_double == stairs).then(|| {
                    mismatch(
                        p.entries(),
                        format!("2-square bite {has_double}, perfect stairs {stairs}"),
                    )
                }))
            })?;
            for n in 0..=1000u64 {
                report.checked += 1;
                if stairs_mod3_fact(n) == 2 {
                    report.fail(Vec::new(), format!("triangular number T({n}) is 2 mod 3"));
                }
            }
            push(format!("{rules} normal"), report);
        }
        TheoremId::Lemma9 => {
            if opts.max_piles > 2 {
                return Err(Error::TooWide(opts.max_piles));
            }
            let rules = RuleSet::DietChomp { k: 2 };
            let report = solver_sweep(&positions(), opts.threads, |memo, p| {
                compare_outcome(memo, rules, PlayConvention::Misere, p, |p| {
                    diet2_misere_p_narrow(p).expect("at most two columns")
                        != opts.flipped(p.entries())
                })
            })?;
            push(format!("{rules} misere"), report);
        }
        TheoremId::BulkConjecture => {
            let rules = RuleSet::DietChomp { k: 2 };
            let side = opts.max_entry;
            let points: Vec<[u32; 3]> = figure_points(0..12, side, side).collect();
            let mut report = solver_sweep(&points, opts.threads, |memo, &point| {
                if opts.margins.excludes(point) {
                    return Ok(None);
                }
                let solved = lattice_outcome(memo, rules, PlayConvention::Misere, &point)?.is_p();
                let claimed = diet2_misere_bulk_conjecture(point) != opts.flipped(&point);
                Ok((solved != claimed)
                    .then(|| mismatch(&point, format!("solver P={solved}, formula P={claimed}"))))
            })?;
            let excluded = points
                .iter()
                .filter(|&&pt| opts.margins.excludes(pt))
                .count();
            report.checked -= excluded;
            report.skipped_boundary = excluded;
            push(
                format!(
                    "{rules} misere, margins corner={} bottom={} top={}",
                    opts.margins.corner_radius,
                    opts.margins.bottom_rows,
                    opts.margins.top_diagonals
                ),
                report,
            );
        }
    }
    Ok(out)
}

fn compare_outcome<F>(
    memo: &mut MemoTable,
    rules: RuleSet,
    convention: PlayConvention,
    p: &Position,
    claimed_p: F,
) -> Result<Option<Counterexample>>
where
    F: Fn(&Position) -> bool,
{
    let solved = memo.outcome(rules, convention, p)?.is_p();
    let claimed = claimed_p(p);
    Ok((solved != claimed).then(|| {
        mismatch(
            p.entries(),
            format!("solver P={solved}, closed form P={claimed}"),
        )
    }))
}
