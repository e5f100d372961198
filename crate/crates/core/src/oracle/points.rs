use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Points of projective 3-space over `F_p`.
///
/// The first `fundamental` points are the coordinate points, the rest have
/// last coordinate 1 and pseudo-random affine part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointSet {
    pub prime: u64,
    pub seed: u64,
    pub fundamental: usize,
    pub coords: Vec<[u64; 4]>,
}

impl PointSet {
    /// `n` points: up to four coordinate points, then seeded random ones.
    pub fn generic(n: usize, prime: u64, seed: u64) -> Self {
        let fundamental = n.min(4);
        let mut coords: Vec<[u64; 4]> = (0..fundamental)
            .map(|i| {
                let mut c = [0; 4];
                c[i] = 1;
                c
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while coords.len() < n {
            let c = [
                rng.gen_range(0..prime),
                rng.gen_range(0..prime),
                rng.gen_range(0..prime),
                1,
            ];
            if c[..3] == [0, 0, 0] || coords.contains(&c) {
                continue;
            }
            coords.push(c);
        }
        PointSet {
            prime,
            seed,
            fundamental,
            coords,
        }
    }

    /// Only seeded random points, no coordinate points.
    pub fn random(n: usize, prime: u64, seed: u64) -> Self {
        let mut s = PointSet::generic(n + 4, prime, seed);
        s.coords.drain(..s.fundamental);
        s.fundamental = 0;
        s
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_first_and_distinct() {
        let pts = PointSet::generic(11, 32003, 1);
        assert_eq!(pts.fundamental, 4);
        assert_eq!(pts.coords[2], [0, 0, 1, 0]);
        for (i, a) in pts.coords.iter().enumerate() {
            assert!(a.iter().any(|&x| x != 0));
            assert!(pts.coords[..i].iter().all(|b| b != a));
        }
        assert_eq!(pts, PointSet::generic(11, 32003, 1));
        assert_ne!(pts, PointSet::generic(11, 32003, 2));
    }

    #[test]
    fn random_has_no_coordinate_points() {
        let pts = PointSet::random(3, 101, 5);
        assert_eq!(pts.fundamental, 0);
        assert!(pts.coords.iter().all(|c| c[3] == 1));
    }
}
