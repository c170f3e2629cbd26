//! Deterministic sample grids over the simplex, boxes and intervals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "kebab-case")]
pub enum Space {
    /// Lotteries over `n_prizes` prizes.
    Simplex {
        n_prizes: usize,
    },
    /// `[0, bound]^dim`.
    Box {
        dim: usize,
        bound: f64,
    },
    Interval {
        lo: f64,
        hi: f64,
    },
}

/// Grid resolution plus an optional number of seeded random points.
///
/// For the simplex, `resolution` is the number of subdivisions of each edge
/// (points are exact multiples of `1/resolution`). For boxes and intervals it
/// is the number of points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sampler {
    pub resolution: usize,
    #[serde(default)]
    pub random_points: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Sampler {
    pub fn new(resolution: usize) -> Self {
        Self {
            resolution,
            random_points: 0,
            seed: 0,
        }
    }

    pub fn with_random(mut self, count: usize, seed: u64) -> Self {
        self.random_points = count;
        self.seed = seed;
        self
    }

    /// Grid points in a fixed order: the lattice first, then the barycenter
    /// or midpoint if the lattice misses it, then the random points.
    pub fn points(&self, space: &Space) -> Vec<Vec<f64>> {
        assert!(self.resolution >= 2, "resolution must be at least 2");
        let mut pts = match *space {
            Space::Simplex { n_prizes } => {
                let mut pts = simplex_lattice(n_prizes, self.resolution);
                let center = vec![1.0 / n_prizes as f64; n_prizes];
                if !pts.contains(&center) {
                    pts.push(center);
                }
                pts
            }
            Space::Box { dim, bound } => {
                let axis = linspace(0.0, bound, self.resolution);
                let mut pts = cartesian(&axis, dim);
                let center = vec![0.5 * bound; dim];
                if !pts.contains(&center) {
                    pts.push(center);
                }
                pts
            }
            Space::Interval { lo, hi } => {
                let mut pts: Vec<Vec<f64>> = linspace(lo, hi, self.resolution)
                    .into_iter()
                    .map(|x| vec![x])
                    .collect();
                let center = vec![0.5 * (lo + hi)];
                if !pts.contains(&center) {
                    pts.push(center);
                }
                pts
            }
        };
        pts.extend(random_points(space, self.random_points, self.seed));
        pts
    }
}

/// Lattice grid with no random points.
pub fn grid_sample(space: &Space, resolution: usize, seed: u64) -> Vec<Vec<f64>> {
    Sampler {
        resolution,
        random_points: 0,
        seed,
    }
    .points(space)
}

/// Evenly spaced points with exact endpoints.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / last)
            }
        })
        .collect()
}

/// All compositions `k` of `resolution` into `n_prizes` parts, as lotteries
/// `k / resolution`. Lexicographically descending, so `e_1` comes first.
pub fn simplex_lattice(n_prizes: usize, resolution: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut parts = vec![0usize; n_prizes];
    compositions(resolution, 0, &mut parts, &mut |k| {
        out.push(k.iter().map(|&ki| ki as f64 / resolution as f64).collect());
    });
    out
}

/// Integer compositions of `resolution` into `n_prizes` parts, same order as
/// [`simplex_lattice`].
pub fn simplex_compositions(n_prizes: usize, resolution: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut parts = vec![0usize; n_prizes];
    compositions(resolution, 0, &mut parts, &mut |k| out.push(k.to_vec()));
    out
}

fn compositions(
    remaining: usize,
    index: usize,
    parts: &mut [usize],
    emit: &mut dyn FnMut(&[usize]),
) {
    if index == parts.len() - 1 {
        parts[index] = remaining;
        emit(parts);
        return;
    }
    for k in (0..=remaining).rev() {
        parts[index] = k;
        compositions(remaining - k, index + 1, parts, emit);
    }
}

fn cartesian(axis: &[f64], dim: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::with_capacity(dim)];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

fn random_points(space: &Space, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| match *space {
            Space::Simplex { n_prizes } => {
                // Uniform on the simplex via normalized exponentials.
                let e: Vec<f64> = (0..n_prizes)
                    .map(|_| -(1.0 - rng.random::<f64>()).ln())
                    .collect();
                let s: f64 = e.iter().sum();
                e.into_iter().map(|x| x / s).collect()
            }
            Space::Box { dim, bound } => (0..dim).map(|_| bound * rng.random::<f64>()).collect(),
            Space::Interval { lo, hi } => vec![lo + (hi - lo) * rng.random::<f64>()],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_lattice_count_and_vertices() {
        let lattice = simplex_lattice(3, 2);
        assert_eq!(lattice.len(), 6);
        for i in 0..3 {
            let mut v = vec![0.0; 3];
            v[i] = 1.0;
            assert!(lattice.contains(&v));
        }
        // barycenter is appended because the lattice misses it
        let grid = grid_sample(&Space::Simplex { n_prizes: 3 }, 2, 0);
        assert_eq!(grid.len(), 7);
        assert_eq!(&grid[..6], &lattice[..]);
        assert_eq!(grid[6], vec![1.0 / 3.0; 3]);
    }

    #[test]
    fn barycenter_not_duplicated_when_on_lattice() {
        let grid = grid_sample(&Space::Simplex { n_prizes: 3 }, 3, 0);
        assert_eq!(grid.len(), 10);
    }

    #[test]
    fn box_grid_includes_corners() {
        let grid = grid_sample(
            &Space::Box {
                dim: 2,
                bound: 10.0,
            },
            3,
            0,
        );
        assert_eq!(grid.len(), 9);
        assert!(grid.contains(&vec![0.0, 0.0]));
        assert!(grid.contains(&vec![10.0, 10.0]));
        assert!(grid.contains(&vec![5.0, 5.0]));
    }

    #[test]
    fn repeated_calls_are_identical() {
        let s = Sampler::new(4).with_random(5, 42);
        for space in [
            Space::Simplex { n_prizes: 4 },
            Space::Box { dim: 3, bound: 2.0 },
            Space::Interval { lo: -1.0, hi: 1.0 },
        ] {
            assert_eq!(s.points(&space), s.points(&space));
        }
    }

    #[test]
    fn random_simplex_points_are_lotteries() {
        let pts = Sampler::new(2)
            .with_random(20, 1)
            .points(&Space::Simplex { n_prizes: 3 });
        for p in pts {
            let s: f64 = p.iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
            assert!(p.iter().all(|x| *x >= 0.0));
        }
    }
}
