//! Permutations of `{0, ..., n-1}`.

use crate::cyclo::CycloMatrix;
use std::fmt;

/// A permutation of `{0, ..., n-1}` stored by its image vector.
///
/// The derived ordering is lexicographic on images, which makes sorted
/// collections of permutations reproducible.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Self {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            assert!(i < n && !seen[i], "images are not a bijection");
            seen[i] = true;
        }
        Perm { images }
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Composite that applies `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inv(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    /// The 0/1 matrix whose column `j` is the basis vector at the image of
    /// `j`, so that matrix multiplication mirrors [`Perm::compose`].
    pub fn matrix(&self) -> CycloMatrix {
        CycloMatrix::from_permutation(&self.images)
    }

    /// All permutations of degree `n`, in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Perm> {
        fn rec(n: usize, prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
            if prefix.len() == n {
                out.push(Perm {
                    images: prefix.clone(),
                });
                return;
            }
            for i in 0..n {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i);
                    rec(n, prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = vec![];
        rec(n, &mut vec![], &mut vec![false; n], &mut out);
        out
    }
}

impl fmt::Display for Perm {
    /// Cycle notation over `0..n`, fixed points omitted; identity prints `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            write!(f, "({start}")?;
            seen[start] = true;
            let mut i = self.images[start];
            while i != start {
                write!(f, " {i}")?;
                seen[i] = true;
                i = self.images[i];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}
