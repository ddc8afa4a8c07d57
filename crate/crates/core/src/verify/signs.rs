//! Sign assignments on the symmetric group and the collapse of the
//! candidate coefficient sets to the trivial and signature characters.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::permutation::{all_permutations, Permutation};

pub const MAX_CHARACTER_N: usize = 6;

/// A map from the permutations of `n` points to `±1`, stored by
/// lexicographic rank. The identity always maps to `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignAssignment {
    n: usize,
    signs: Vec<i8>,
}

impl SignAssignment {
    pub fn new(n: usize, signs: Vec<i8>) -> Result<Self> {
        let expected = crate::permutation::factorial(n) as usize;
        if signs.len() != expected {
            return Err(Error::Validation(format!(
                "sign assignment on S_{n} needs {expected} values, got {}",
                signs.len()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Validation("signs must be +1 or -1".into()));
        }
        if signs[0] != 1 {
            return Err(Error::Validation("identity must map to +1".into()));
        }
        Ok(SignAssignment { n, signs })
    }

    /// All `+1`: the symmetric (boson) coefficients.
    pub fn trivial(n: usize) -> Self {
        SignAssignment { n, signs: vec![1; crate::permutation::factorial(n) as usize] }
    }

    /// The permutation sign: the antisymmetric (fermion) coefficients.
    pub fn signature(n: usize) -> Self {
        SignAssignment { n, signs: all_permutations(n).iter().map(Permutation::sign).collect() }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn sign_of(&self, p: &Permutation) -> i8 {
        self.signs[p.rank()]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `c(στ) = c(σ)c(τ)` over the whole multiplication table.
    pub fn is_multiplicative(&self, table: &MultiplicationTable) -> bool {
        let size = self.signs.len();
        (0..size).all(|a| (0..size).all(|b| self.signs[table.product(a, b)] == self.signs[a] * self.signs[b]))
    }
}

impl fmt::Display for SignAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = all_permutations(self.n)
            .iter()
            .zip(&self.signs)
            .map(|(p, s)| format!("{p}:{}", if *s > 0 { "+" } else { "-" }))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Cayley table of `S_n` on lexicographic ranks.
pub struct MultiplicationTable {
    size: usize,
    entries: Vec<u16>,
}

impl MultiplicationTable {
    pub fn new(n: usize) -> Self {
        let perms = all_permutations(n);
        let size = perms.len();
        let mut entries = Vec::with_capacity(size * size);
        for a in &perms {
            for b in &perms {
                entries.push(a.compose(b).rank() as u16);
            }
        }
        MultiplicationTable { size, entries }
    }

    /// Rank of `perm(a) ∘ perm(b)`.
    #[inline]
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.entries[a * self.size + b] as usize
    }
}

/// Survivors of each filter over the `2⁵` candidate coefficient sets of
/// three particles.
#[derive(Debug, Clone)]
pub struct N3SignAnalysis {
    pub candidates: usize,
    /// Consistent with iterating and reordering the product rule.
    pub multiplicative: BTreeSet<SignAssignment>,
    /// Satisfying the single twinned-pair probability equation.
    pub twinned_pair: BTreeSet<SignAssignment>,
    /// Satisfying the equation for every relabeling of the twinned pair.
    pub relabeled_pairs: BTreeSet<SignAssignment>,
    /// Passing both the multiplicative and relabeled-pair filters.
    pub survivors: BTreeSet<SignAssignment>,
}

fn n3_candidates() -> Vec<SignAssignment> {
    (0u32..32)
        .map(|mask| {
            let mut signs = vec![1i8; 6];
            for (k, s) in signs.iter_mut().skip(1).enumerate() {
                if mask & (1 << k) != 0 {
                    *s = -1;
                }
            }
            SignAssignment { n: 3, signs }
        })
        .collect()
}

fn pair_weight(c: &SignAssignment, a: &Permutation, b: &Permutation) -> i32 {
    let s = (c.sign_of(a) + c.sign_of(b)) as i32;
    s * s
}

/// The identity twinned with the transposition of the last two particles,
/// and the pair it becomes when the first two labels at the later
/// measurement are switched.
fn twinned_pairs() -> [(Permutation, Permutation); 2] {
    let id = Permutation::identity(3);
    let t23 = Permutation::transposition(3, 1, 2);
    let t12 = Permutation::transposition(3, 0, 1);
    let relabeled = (t12.compose(&id), t12.compose(&t23));
    [(id, t23), relabeled]
}

fn satisfies_twinned_pair(c: &SignAssignment) -> bool {
    let [(a, b), (x, y)] = twinned_pairs();
    pair_weight(c, &a, &b) == pair_weight(c, &x, &y)
}

fn satisfies_relabeled_pairs(c: &SignAssignment) -> bool {
    let [(a, b), _] = twinned_pairs();
    let base = pair_weight(c, &a, &b);
    let perms = all_permutations(3);
    perms.iter().all(|later| {
        perms.iter().all(|earlier| {
            let x = later.compose(&a).compose(earlier);
            let y = later.compose(&b).compose(earlier);
            pair_weight(c, &x, &y) == base
        })
    })
}

pub fn analyze_n3_signs() -> N3SignAnalysis {
    let table = MultiplicationTable::new(3);
    let candidates = n3_candidates();
    let keep = |pred: &dyn Fn(&SignAssignment) -> bool| -> BTreeSet<SignAssignment> {
        candidates.iter().filter(|c| pred(c)).cloned().collect()
    };
    let multiplicative = keep(&|c| c.is_multiplicative(&table));
    let twinned_pair = keep(&satisfies_twinned_pair);
    let relabeled_pairs = keep(&satisfies_relabeled_pairs);
    let survivors = multiplicative.intersection(&relabeled_pairs).cloned().collect();
    N3SignAnalysis {
        candidates: candidates.len(),
        multiplicative,
        twinned_pair,
        relabeled_pairs,
        survivors,
    }
}

/// Coefficient sets for three particles that survive both the product-rule
/// consistency and the twinned-pair probability equality.
pub fn enumerate_n3_signs() -> BTreeSet<SignAssignment> {
    analyze_n3_signs().survivors
}

/// Every multiplicative sign assignment on `S_n`, `2 ≤ n ≤ 6`.
///
/// Candidates are generated from independent signs on the adjacent
/// transpositions, extended along a bubble-sort word for each permutation,
/// then checked against the full multiplication table.
pub fn enumerate_sn_characters(n: usize) -> Result<BTreeSet<SignAssignment>> {
    if n > MAX_CHARACTER_N {
        return Err(Error::TooLarge { n, max: MAX_CHARACTER_N });
    }
    if n < 2 {
        return Err(Error::Validation(format!("S_{n} has no transpositions")));
    }
    let perms = all_permutations(n);
    let words: Vec<Vec<usize>> = perms.iter().map(|p| bubble_word(p.images())).collect();
    let table = MultiplicationTable::new(n);
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << (n - 1)) {
        let generator_sign = |k: usize| if mask & (1 << k) != 0 { -1i8 } else { 1 };
        let signs = words
            .iter()
            .map(|w| w.iter().map(|&k| generator_sign(k)).product())
            .collect();
        let candidate = SignAssignment { n, signs };
        if candidate.is_multiplicative(&table) {
            out.insert(candidate);
        }
    }
    Ok(out)
}

/// Positions of the adjacent swaps that bubble-sort `images`.
fn bubble_word(images: &[usize]) -> Vec<usize> {
    let mut v = images.to_vec();
    let mut word = Vec::new();
    for pass in 0..v.len() {
        for k in 0..v.len() - 1 - pass {
            if v[k] > v[k + 1] {
                v.swap(k, k + 1);
                word.push(k);
            }
        }
    }
    word
}
