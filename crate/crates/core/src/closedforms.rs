//! Closed-form nimbers and P-position predicates.
//!
//! These are the formulas the solver is checked against. They take any
//! entry slice (a canonical [`Position`], a raw sequence, or a
//! [`DifferencePosition`]) so that zero entries are harmless.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::position::{GrundyValue, PlayConvention, Position};

impl AsRef<[u32]> for Position {
    fn as_ref(&self) -> &[u32] {
        self.entries()
    }
}

fn xor(entries: &[u32]) -> u32 {
    entries.iter().fold(0, |acc, &a| acc ^ a)
}

/// XOR of all heaps.
pub fn nim_grundy_formula<P: AsRef<[u32]> + ?Sized>(p: &P) -> GrundyValue {
    GrundyValue(xor(p.as_ref()))
}

/// Misère Nim: XOR zero when some heap exceeds 1, otherwise an odd count of
/// 1-heaps.
pub fn nim_p_misere<P: AsRef<[u32]> + ?Sized>(p: &P) -> bool {
    let heaps = p.as_ref();
    let x = xor(heaps);
    if heaps.iter().any(|&a| a > 1) {
        x == 0
    } else {
        x == 1
    }
}

fn reduce(k: u32, p: &[u32]) -> Vec<u32> {
    let modulus = u64::from(k) + 1;
    p.iter().map(|&a| (u64::from(a) % modulus) as u32).collect()
}

/// XOR of heaps reduced modulo `k + 1`.
pub fn slow_nim_grundy_formula<P: AsRef<[u32]> + ?Sized>(k: u32, p: &P) -> GrundyValue {
    GrundyValue(xor(&reduce(k, p.as_ref())))
}

/// Misère k-Slow Nim: the misère Nim rule applied to heaps reduced modulo
/// `k + 1`.
pub fn slow_nim_p_misere<P: AsRef<[u32]> + ?Sized>(k: u32, p: &P) -> bool {
    nim_p_misere(&reduce(k, p.as_ref()))
}

/// Pairwise differences `a[2i] - a[2i-1]` of a monotone sequence, after
/// padding odd-length input with a leading zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DifferencePosition(Vec<u32>);

impl DifferencePosition {
    pub fn entries(&self) -> &[u32] {
        &self.0
    }
}

impl AsRef<[u32]> for DifferencePosition {
    fn as_ref(&self) -> &[u32] {
        &self.0
    }
}

/// Computed from the raw sequence: stripping zeros first can change the
/// padding parity.
pub fn difference_position(raw: &[u32]) -> Result<DifferencePosition> {
    if raw.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::NonMonotoneInput(
            raw.iter().map(|&a| u64::from(a)).collect(),
        ));
    }
    let padded: Vec<u32> = if raw.len() % 2 == 1 {
        std::iter::once(0).chain(raw.iter().copied()).collect()
    } else {
        raw.to_vec()
    };
    Ok(DifferencePosition(
        padded
            .chunks_exact(2)
            .map(|pair| pair[1] - pair[0])
            .collect(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MonotonicVariant {
    Nim,
    SlowNim { k: u32 },
}

/// P-position test for monotonic games via the difference position, which
/// is judged by the (extended) Nim or Slow Nim closed form.
pub fn monotonic_p(
    raw: &[u32],
    variant: MonotonicVariant,
    convention: PlayConvention,
) -> Result<bool> {
    let b = difference_position(raw)?;
    Ok(match (variant, convention) {
        (MonotonicVariant::Nim, PlayConvention::Normal) => nim_grundy_formula(&b).0 == 0,
        (MonotonicVariant::Nim, PlayConvention::Misere) => nim_p_misere(&b),
        (MonotonicVariant::SlowNim { k }, PlayConvention::Normal) => {
            slow_nim_grundy_formula(k, &b).0 == 0
        }
        (MonotonicVariant::SlowNim { k }, PlayConvention::Misere) => slow_nim_p_misere(k, &b),
    })
}

/// Normal-play 2-Diet Chomp: P iff the square count is divisible by 3.
pub fn diet2_normal_p<P: AsRef<[u32]> + ?Sized>(p: &P) -> bool {
    p.as_ref().iter().map(|&a| u64::from(a)).sum::<u64>() % 3 == 0
}

/// True iff `p` is `(1, 2, ..., n)` for some `n >= 1`.
pub fn is_perfect_stairs<P: AsRef<[u32]> + ?Sized>(p: &P) -> bool {
    let p = p.as_ref();
    !p.is_empty() && p.iter().zip(1..).all(|(&a, i)| a == i)
}

/// Residue of the `n`-th triangular number modulo 3.
pub fn stairs_mod3_fact(n: u64) -> u64 {
    let t = u128::from(n) * (u128::from(n) + 1) / 2;
    (t % 3) as u64
}

/// Misère 2-Diet Chomp on at most two columns: one column `a` is P iff
/// `a ≡ 1 (mod 3)`; two columns are P iff `a2 - a1 ≡ 1 (mod 3)`.
pub fn diet2_misere_p_narrow<P: AsRef<[u32]> + ?Sized>(p: &P) -> Result<bool> {
    let cols: Vec<u32> = p.as_ref().iter().copied().filter(|&a| a != 0).collect();
    match cols.as_slice() {
        [] => Ok(false),
        [a] => Ok(a % 3 == 1),
        [a1, a2] => Ok((a2 - a1) % 3 == 1),
        wide => Err(Error::TooWide(wide.len())),
    }
}

/// `a1 + a3 - a2 ≡ 1 (mod 3)`, with no guard for the boundary regions where
/// it fails.
pub fn diet2_misere_bulk_conjecture(p: [u32; 3]) -> bool {
    let [a1, a2, a3] = p.map(u64::from);
    (a1 + a3 - a2) % 3 == 1
}
