use super::{Quality, SquareMatrix};
use crate::Scalar;

pub const PITCH_CLASSES: usize = 12;

/// Semitones in the third that defines each quality's neighbors: `[minor, major]`.
pub const THIRD_SIZES: [usize; 2] = [3, 4];

/// Row/column index of triad `(p, q)`: row-major over a `12 x 2` array.
pub fn vertex_index(p: usize, q: usize) -> usize {
    (p % PITCH_CLASSES) * 2 + q
}

/// Unnormalized Laplacian `3I - A` of the 24-vertex Tonnetz.
#[derive(Debug, Clone, PartialEq)]
pub struct TonnetzLaplacian<T> {
    pub matrix: SquareMatrix<T>,
}

/// Whether major triad `p_major` and minor triad `p_minor` are P/L/R neighbors.
///
/// The three membership terms are evaluated from the major vertex: the parallel
/// term `p - p' = 0`, and the two thirds `-(p - p') = J_1` and `p - p' = J_0`,
/// all mod 12.
fn major_minor_adjacent(p_major: usize, p_minor: usize) -> bool {
    let d = (p_major + PITCH_CLASSES - p_minor) % PITCH_CLASSES;
    let major_third = THIRD_SIZES[Quality::Major.index()];
    let minor_third = THIRD_SIZES[Quality::Minor.index()];
    d == 0 || (PITCH_CLASSES - d) % PITCH_CLASSES == major_third || d == minor_third
}

pub fn tonnetz_laplacian<T: Scalar>() -> TonnetzLaplacian<T> {
    let n = 2 * PITCH_CLASSES;
    let mut matrix = SquareMatrix::zeros(n);
    for p in 0..PITCH_CLASSES {
        for p2 in 0..PITCH_CLASSES {
            if major_minor_adjacent(p, p2) {
                let major = vertex_index(p, Quality::Major.index());
                let minor = vertex_index(p2, Quality::Minor.index());
                matrix[(major, minor)] = -T::one();
                matrix[(minor, major)] = -T::one();
            }
        }
    }
    for i in 0..n {
        let degree = (0..n).filter(|&j| matrix[(i, j)] != T::zero()).count();
        matrix[(i, i)] = T::from_usize_lossy(degree);
    }
    TonnetzLaplacian { matrix }
}

impl<T: Scalar> TonnetzLaplacian<T> {
    /// Neighbors of `(p, q)` as `(p', q')` pairs in index order.
    pub fn neighbors(&self, p: usize, q: usize) -> Vec<(usize, usize)> {
        let i = vertex_index(p, q);
        (0..2 * PITCH_CLASSES)
            .filter(|&j| j != i && self.matrix[(i, j)] != T::zero())
            .map(|j| (j / 2, j % 2))
            .collect()
    }

    pub fn degree(&self, p: usize, q: usize) -> usize {
        self.neighbors(p, q).len()
    }
}
