//! Permutations on `0..n` and unordered transpositions.
//!
//! Composition is right-to-left: `compose(p, q)(x) = p(q(x))`. A qubit order
//! maps locations to qubits, so relabelling qubits is `compose(a, tau)` and
//! relabelling locations is `compose(tau, inverse(b))`.

use std::fmt;

use crate::{Error, Result};

/// A bijection on `0..n` in one-line form.
///
/// Ordering is lexicographic on the one-line form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Builds a permutation from its 0-based one-line form.
    pub fn from_vec(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection on 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation from a 1-based one-line form.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(format!(
                "{images:?} contains 0 in 1-based notation"
            )));
        }
        Self::from_vec(images.iter().map(|&x| x - 1).collect())
    }

    pub(crate) fn from_vec_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_vec(images.clone()).is_ok());
        Permutation(images)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// `self ∘ t`, i.e. exchanges the images at positions `t.lo()` and `t.hi()`.
    pub fn then_swap(&self, t: Transposition) -> Self {
        let mut out = self.0.clone();
        out.swap(t.lo(), t.hi());
        Permutation(out)
    }

    /// Lexicographic rank in `0..n!`.
    pub fn rank(&self) -> usize {
        let n = self.0.len();
        let mut rank = 0;
        for i in 0..n {
            let smaller = self.0[i + 1..].iter().filter(|&&y| y < self.0[i]).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    /// Inverse of [`Permutation::rank`].
    pub fn unrank(n: usize, mut rank: usize) -> Self {
        let mut digits = vec![0; n];
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut pool: Vec<usize> = (0..n).collect();
        Permutation(digits.into_iter().map(|d| pool.remove(d)).collect())
    }

    /// Cycle notation with 1-based points; fixed points are omitted.
    pub fn cycle_notation(&self) -> String {
        let mut seen = vec![false; self.0.len()];
        let mut out = String::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push((x + 1).to_string());
                x = self.0[x];
            }
            out.push('(');
            out.push_str(&cycle.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x + 1)?;
        }
        write!(f, ")")
    }
}

/// `p ∘ q`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.len() != q.len() {
        return Err(Error::DegreeMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    Ok(Permutation(q.0.iter().map(|&x| p.0[x]).collect()))
}

pub fn inverse(p: &Permutation) -> Permutation {
    p.inverse()
}

/// An unordered pair `{lo, hi}` with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transposition {
    lo: usize,
    hi: usize,
}

impl Transposition {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidPermutation(format!(
                "transposition needs two distinct points, got {i} twice"
            )));
        }
        Ok(Transposition {
            lo: i.min(j),
            hi: i.max(j),
        })
    }

    #[inline]
    pub fn lo(self) -> usize {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> usize {
        self.hi
    }

    pub fn as_permutation(self, n: usize) -> Permutation {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(self.lo, self.hi);
        Permutation(v)
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.lo + 1, self.hi + 1)
    }
}

/// `b ∘ (i j) ∘ b⁻¹ = (b(i) b(j))`.
pub fn conjugate_transposition(t: Transposition, b: &Permutation) -> Transposition {
    Transposition::new(b.apply(t.lo), b.apply(t.hi)).expect("bijection keeps points distinct")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(Permutation)
    }

    fn triple(n: usize) -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
        (perm_strategy(n), perm_strategy(n), perm_strategy(n))
    }

    #[test]
    fn swap_on_the_right_exchanges_locations() {
        let tau = Permutation::from_one_based(&[2, 3, 1, 4]).unwrap();
        let sigma = Transposition::new(0, 1).unwrap();
        let out = compose(&tau, &sigma.as_permutation(4)).unwrap();
        assert_eq!(out, Permutation::from_one_based(&[3, 2, 1, 4]).unwrap());
        assert_eq!(out, tau.then_swap(sigma));
    }

    #[test]
    fn display_forms() {
        let p = Permutation::from_one_based(&[3, 1, 2]).unwrap();
        assert_eq!(p.to_string(), "(3,1,2)");
        assert_eq!(p.cycle_notation(), "(1 3 2)");
        assert_eq!(Permutation::identity(3).cycle_notation(), "()");
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_vec(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_vec(vec![0, 3, 1]).is_err());
        assert!(Transposition::new(2, 2).is_err());
        let a = Permutation::identity(3);
        let b = Permutation::identity(4);
        assert!(matches!(compose(&a, &b), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn rank_round_trip_small() {
        for r in 0..120 {
            assert_eq!(Permutation::unrank(5, r).rank(), r);
        }
        assert_eq!(Permutation::unrank(4, 0), Permutation::identity(4));
        assert_eq!(Permutation::unrank(3, 5).as_slice(), &[2, 1, 0]);
    }

    proptest! {
        #[test]
        fn associativity((p, q, r) in triple(7)) {
            let left = compose(&compose(&p, &q).unwrap(), &r).unwrap();
            let right = compose(&p, &compose(&q, &r).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn inverse_of_product((p, q, _r) in triple(6)) {
            let lhs = compose(&p, &q).unwrap().inverse();
            let rhs = compose(&q.inverse(), &p.inverse()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert!(compose(&p, &p.inverse()).unwrap().is_identity());
        }

        #[test]
        fn conjugation_respects_products((b1, b2, _r) in triple(6), i in 0usize..6, j in 0usize..6) {
            prop_assume!(i != j);
            let t = Transposition::new(i, j).unwrap();
            let both = conjugate_transposition(t, &compose(&b1, &b2).unwrap());
            let stepwise = conjugate_transposition(conjugate_transposition(t, &b2), &b1);
            prop_assert_eq!(both, stepwise);
            // b t b^-1 as permutations
            let direct = compose(&compose(&b1, &t.as_permutation(6)).unwrap(), &b1.inverse()).unwrap();
            prop_assert_eq!(direct, conjugate_transposition(t, &b1).as_permutation(6));
        }

        #[test]
        fn rank_is_bijective(p in perm_strategy(7)) {
            prop_assert_eq!(Permutation::unrank(7, p.rank()), p);
        }
    }
}
