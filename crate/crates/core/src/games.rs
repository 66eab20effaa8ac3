//! Move generators for each game family.
//!
//! Every public `*_moves` function returns canonical successors, sorted
//! lexicographically and deduplicated.

use crate::position::{MoveKind, MoveRecord, Position};

pub(crate) fn distinct_results(records: Vec<MoveRecord>) -> Vec<Position> {
    let mut out: Vec<Position> = records.into_iter().map(|m| m.result).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Subtractions of 1..=limit tokens from one heap of an order-free position.
pub(crate) fn nim_move_records(p: &Position, limit: u32) -> Vec<MoveRecord> {
    let heaps = p.entries();
    let mut out = Vec::new();
    for (i, &a) in heaps.iter().enumerate() {
        for take in 1..=a.min(limit) {
            let mut next = heaps.to_vec();
            next[i] = a - take;
            out.push(MoveRecord {
                kind: MoveKind::Subtract,
                index: i + 1,
                amount: take,
                result: Position::from_multiset(next),
            });
        }
    }
    out
}

/// Additions of 1..=limit tokens to one existing heap. No new heap is created.
pub(crate) fn add_move_records(p: &Position, limit: u32) -> Vec<MoveRecord> {
    let heaps = p.entries();
    let mut out = Vec::new();
    for (i, &a) in heaps.iter().enumerate() {
        for put in 1..=limit {
            let Some(grown) = a.checked_add(put) else {
                break;
            };
            let mut next = heaps.to_vec();
            next[i] = grown;
            out.push(MoveRecord {
                kind: MoveKind::Add,
                index: i + 1,
                amount: put,
                result: Position::from_multiset(next),
            });
        }
    }
    out
}

/// Subtractions of 1..=limit from one pile, keeping the sequence non-decreasing.
pub(crate) fn monotonic_move_records(p: &Position, limit: u32) -> Vec<MoveRecord> {
    let piles = p.entries();
    let mut out = Vec::new();
    for (i, &a) in piles.iter().enumerate() {
        let floor = if i == 0 { 0 } else { piles[i - 1] };
        let lowest = floor.max(a.saturating_sub(limit));
        for target in lowest..a {
            let mut next = piles.to_vec();
            next[i] = target;
            out.push(MoveRecord {
                kind: MoveKind::Subtract,
                index: i + 1,
                amount: a - target,
                result: Position::from_ordered(next),
            });
        }
    }
    out
}

/// Quadrant bites removing at most `k` squares.
///
/// A bite at column `j`, height `r` (both 1-based) cuts columns `1..=j` down
/// to height `r - 1`.
pub(crate) fn chomp_move_records(p: &Position, k: u32) -> Vec<MoveRecord> {
    let cols = p.entries();
    let mut out = Vec::new();
    for j in 0..cols.len() {
        for r in (1..=cols[j]).rev() {
            let cut = r - 1;
            let removed: u64 = cols[..=j]
                .iter()
                .map(|&a| u64::from(a.saturating_sub(cut)))
                .sum();
            // Lower bites only remove more.
            if removed > u64::from(k) {
                break;
            }
            let mut next = cols.to_vec();
            for a in &mut next[..=j] {
                *a = (*a).min(cut);
            }
            out.push(MoveRecord {
                kind: MoveKind::Chomp,
                index: j + 1,
                amount: r,
                result: Position::from_ordered(next),
            });
        }
    }
    out
}

pub fn nim_moves(p: &Position) -> Vec<Position> {
    distinct_results(nim_move_records(p, u32::MAX))
}

pub fn slow_nim_moves(k: u32, p: &Position) -> Vec<Position> {
    distinct_results(nim_move_records(p, k))
}

pub fn extended_nim_moves(add_limit: u32, p: &Position) -> Vec<Position> {
    let mut records = nim_move_records(p, u32::MAX);
    records.extend(add_move_records(p, add_limit));
    distinct_results(records)
}

pub fn extended_slow_nim_moves(k: u32, p: &Position) -> Vec<Position> {
    let mut records = nim_move_records(p, k);
    records.extend(add_move_records(p, k));
    distinct_results(records)
}

pub fn monotonic_nim_moves(p: &Position) -> Vec<Position> {
    distinct_results(monotonic_move_records(p, u32::MAX))
}

pub fn monotonic_slow_nim_moves(k: u32, p: &Position) -> Vec<Position> {
    distinct_results(monotonic_move_records(p, k))
}

pub fn diet_chomp_moves(k: u32, p: &Position) -> Vec<Position> {
    distinct_results(chomp_move_records(p, k))
}

/// 2-Diet Chomp moves from the three explicit rules, with `a_0 = 0`:
/// take one from a column taller than its left neighbour, take two from a
/// column at least two taller, or take one from each of two equal columns
/// that stand above their left neighbour.
pub fn diet_chomp2_moves_explicit(p: &Position) -> Vec<Position> {
    let a = p.entries();
    let mut out = Vec::new();
    for i in 0..a.len() {
        let left = if i == 0 { 0 } else { a[i - 1] };
        if a[i] > left {
            let mut next = a.to_vec();
            next[i] -= 1;
            out.push(Position::from_ordered(next));
        }
        if a[i] > left + 1 {
            let mut next = a.to_vec();
            next[i] -= 2;
            out.push(Position::from_ordered(next));
        }
        if i + 1 < a.len() && a[i + 1] == a[i] && a[i] > left {
            let mut next = a.to_vec();
            next[i] -= 1;
            next[i + 1] -= 1;
            out.push(Position::from_ordered(next));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}
