//! Sobol low-discrepancy sequences.
//!
//! Gray-code construction with 32 bits of resolution, direction numbers from
//! the standard primitive-polynomial tables for up to 21 dimensions. The
//! origin (index 0) is skipped so the first emitted point is (0.5, ..., 0.5).

/// Degree, coefficient word and initial direction numbers per dimension.
/// Dimension 1 is the plain van der Corput sequence and needs no entry.
const DIRECTIONS: &[(u32, u32, &[u32])] = &[
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
    (5, 4, &[1, 1, 5, 5, 5]),
    (5, 7, &[1, 1, 7, 11, 19]),
    (5, 11, &[1, 1, 5, 1, 1]),
    (5, 13, &[1, 1, 1, 3, 11]),
    (5, 14, &[1, 3, 5, 5, 31]),
    (6, 1, &[1, 3, 3, 9, 7, 49]),
    (6, 13, &[1, 1, 1, 15, 21, 21]),
    (6, 16, &[1, 3, 1, 13, 27, 49]),
    (6, 19, &[1, 1, 1, 15, 7, 5]),
    (6, 22, &[1, 3, 1, 15, 13, 25]),
    (6, 25, &[1, 1, 5, 5, 19, 61]),
    (7, 1, &[1, 3, 7, 11, 23, 15, 103]),
    (7, 4, &[1, 3, 7, 13, 13, 15, 69]),
];

/// Highest dimension supported by the embedded direction-number table.
pub const MAX_DIMENSION: usize = DIRECTIONS.len() + 1;

const BITS: u32 = 32;

/// Stateful Sobol point generator.
pub struct Sobol {
    dim: usize,
    index: u64,
    state: Vec<u32>,
    directions: Vec<[u32; BITS as usize]>,
}

impl Sobol {
    /// Create a generator for `dim` dimensions.
    ///
    /// Panics if `dim` is zero or exceeds [`MAX_DIMENSION`].
    pub fn new(dim: usize) -> Self {
        assert!(
            dim >= 1 && dim <= MAX_DIMENSION,
            "sobol dimension {dim} outside supported range 1..={MAX_DIMENSION}"
        );
        let mut directions = Vec::with_capacity(dim);
        // First dimension: v_k = 2^(32-k).
        let mut v = [0u32; BITS as usize];
        for (k, slot) in v.iter_mut().enumerate() {
            *slot = 1 << (BITS - 1 - k as u32);
        }
        directions.push(v);
        for &(degree, coeffs, init) in DIRECTIONS.iter().take(dim.saturating_sub(1)) {
            let s = degree as usize;
            let mut v = [0u32; BITS as usize];
            for k in 0..s {
                debug_assert!(init[k] % 2 == 1 && init[k] < (2 << k));
                v[k] = init[k] << (BITS - 1 - k as u32);
            }
            for k in s..BITS as usize {
                let mut value = v[k - s] ^ (v[k - s] >> degree);
                for i in 1..s {
                    if (coeffs >> (s - 1 - i)) & 1 == 1 {
                        value ^= v[k - i];
                    }
                }
                v[k] = value;
            }
            directions.push(v);
        }
        Sobol { dim, index: 0, state: vec![0; dim], directions }
    }

    /// Next point in [0,1)^dim.
    pub fn next_point(&mut self) -> Vec<f64> {
        self.index += 1;
        let bit = self.index.trailing_zeros() as usize;
        assert!(bit < BITS as usize, "sobol sequence exhausted");
        let mut point = Vec::with_capacity(self.dim);
        for (state, dirs) in self.state.iter_mut().zip(&self.directions) {
            *state ^= dirs[bit];
            point.push(*state as f64 / (1u64 << BITS) as f64);
        }
        point
    }
}

/// First `n` Sobol points in [0,1)^dim (origin skipped).
pub fn sample(dim: usize, n: usize) -> Vec<Vec<f64>> {
    let mut gen = Sobol::new(dim);
    (0..n).map(|_| gen.next_point()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_points_match_reference_sequence() {
        let pts = sample(3, 3);
        assert_eq!(pts[0], vec![0.5, 0.5, 0.5]);
        assert_eq!(pts[1], vec![0.75, 0.25, 0.25]);
        assert_eq!(pts[2], vec![0.25, 0.75, 0.75]);
    }

    #[test]
    fn one_dimensional_projections_are_dyadically_balanced() {
        // Every dimension of a digital (0,1)-sequence puts exactly 2^(k-j)
        // of the first 2^k points into each dyadic interval of width 2^-j.
        let n = 256;
        let pts = sample(MAX_DIMENSION, n);
        for d in 0..MAX_DIMENSION {
            for j in [4usize, 8] {
                let mut counts = vec![0usize; j];
                for p in &pts {
                    let cell = ((p[d] * j as f64) as usize).min(j - 1);
                    counts[cell] += 1;
                }
                assert!(
                    counts.iter().all(|&c| c == n / j),
                    "dim {d} not balanced at resolution {j}: {counts:?}"
                );
            }
        }
    }

    #[test]
    fn first_pair_fills_the_sixteen_cell_grid() {
        let pts = sample(2, 16);
        let mut seen = [[false; 4]; 4];
        for p in &pts {
            let i = ((p[0] * 4.0) as usize).min(3);
            let j = ((p[1] * 4.0) as usize).min(3);
            assert!(!seen[i][j], "cell ({i},{j}) hit twice");
            seen[i][j] = true;
        }
    }

    #[test]
    #[should_panic]
    fn rejects_unsupported_dimension() {
        Sobol::new(MAX_DIMENSION + 1);
    }
}
