//! Permutations of `{0, .., n-1}` in one-line notation.

use std::fmt;

/// A permutation stored in one-line notation: `p[i]` is the image of `i`.
///
/// The derived ordering is lexicographic on the one-line form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Builds a permutation from its one-line form, or `None` if `images`
    /// is not a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Permutation(images))
    }

    /// Transposition of `i` and `j` acting on `n` points.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p: Vec<usize> = (0..n).collect();
        p.swap(i, j);
        Permutation(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`, i.e. `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// +1 for even permutations, -1 for odd, by counting cycles.
    pub fn sign(&self) -> i8 {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Position of this permutation in lexicographic order (Lehmer code).
    pub fn rank(&self) -> usize {
        let n = self.len();
        let mut rank = 0;
        for i in 0..n {
            let smaller = self.0[i + 1..].iter().filter(|&&x| x < self.0[i]).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// All permutations of `n` points in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::with_capacity(factorial(n) as usize);
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation(current.clone()));
        if !next_lexicographic(&mut current) {
            break;
        }
    }
    out
}

/// Advances `p` to the next permutation in lexicographic order. Returns
/// `false` (leaving `p` unchanged) when `p` is already the last one.
pub fn next_lexicographic(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
