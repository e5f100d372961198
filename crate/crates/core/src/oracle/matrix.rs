use rayon::prelude::*;

use super::points::PointSet;

/// Exponent vectors of all degree-`t` monomials in four variables.
pub fn monomials(t: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in (0..=t).rev() {
        for b in (0..=t - a).rev() {
            for c in (0..=t - a - b).rev() {
                out.push([a, b, c, t - a - b - c]);
            }
        }
    }
    out
}

/// Multi-indices `beta` in three variables with `|beta| <= d`.
fn derivative_indices(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for total in 0..=d {
        for a in (0..=total).rev() {
            for b in (0..=total - a).rev() {
                out.push([a, b, total - a - b]);
            }
        }
    }
    out
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Dense matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionsMatrix {
    pub rows: usize,
    pub cols: usize,
    pub prime: u64,
    data: Vec<u64>,
}

impl ConditionsMatrix {
    pub fn zeros(rows: usize, cols: usize, prime: u64) -> Self {
        Self {
            rows,
            cols,
            prime,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, cols: usize, prime: u64) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r.into_iter().map(|x| x % prime));
        }
        Self {
            rows: n,
            cols,
            prime,
            data,
        }
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    /// Vanishing conditions of order `m_j` at every point, against the
    /// monomials in `columns`.
    pub fn build(mults: &[i64], columns: &[[u32; 4]], pts: &PointSet, skip: &[bool]) -> Self {
        let p = pts.prime;
        let t = columns.first().map(|c| c.iter().sum::<u32>()).unwrap_or(0);
        let binom = binom_table(t as usize, p);
        let blocks: Vec<Vec<u64>> = mults
            .par_iter()
            .zip(pts.coords.par_iter())
            .zip(skip.par_iter())
            .map(|((&m, pt), &skip)| {
                if m <= 0 || skip {
                    return Vec::new();
                }
                point_rows(m as u32, columns, pt, p, &binom)
            })
            .collect();
        let cols = columns.len();
        let mut data = Vec::new();
        for b in blocks {
            data.extend(b);
        }
        let rows = data.len().checked_div(cols).unwrap_or(0);
        if cols == 0 {
            let n: usize = mults
                .iter()
                .zip(skip)
                .filter(|(m, s)| **m > 0 && !**s)
                .map(|(m, _)| crate::systems::conditions_count(*m) as usize)
                .sum();
            return Self { rows: n, cols, prime: p, data };
        }
        Self {
            rows,
            cols,
            prime: p,
            data,
        }
    }

    /// Rank by Gaussian elimination; consumes the matrix.
    pub fn rank(mut self) -> usize {
        let (p, cols) = (self.prime, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            if rank == self.rows {
                break;
            }
            let Some(piv) = (rank..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if piv != rank {
                for j in c..cols {
                    self.data.swap(piv * cols + j, rank * cols + j);
                }
            }
            let (head, tail) = self.data.split_at_mut((rank + 1) * cols);
            let prow = &mut head[rank * cols..];
            let inv = inv_mod(prow[c], p);
            for x in prow[c..].iter_mut() {
                *x = *x * inv % p;
            }
            let prow = &*prow;
            tail.par_chunks_mut(cols).for_each(|row| {
                let f = row[c];
                if f == 0 {
                    return;
                }
                let nf = p - f;
                for j in c..cols {
                    row[j] = (row[j] + nf * prow[j]) % p;
                }
            });
            rank += 1;
        }
        rank
    }
}

fn binom_table(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1 % p;
        for j in 1..=i {
            t[i][j] = (t[i - 1][j - 1] + if j < i { t[i - 1][j] } else { 0 }) % p;
        }
    }
    t
}

// Taylor coefficients of each monomial at the point, after setting the
// first nonzero coordinate (from the end) to 1.
fn point_rows(m: u32, columns: &[[u32; 4]], pt: &[u64; 4], p: u64, binom: &[Vec<u64>]) -> Vec<u64> {
    let h = (0..4).rev().find(|&i| !pt[i].is_multiple_of(p)).expect("zero point");
    let inv = inv_mod(pt[h] % p, p);
    let affine: Vec<usize> = (0..4).filter(|&i| i != h).collect();
    let u: Vec<u64> = affine.iter().map(|&i| pt[i] % p * inv % p).collect();
    let t = columns.first().map(|c| c.iter().sum::<u32>()).unwrap_or(0) as usize;
    let powers: Vec<Vec<u64>> = u
        .iter()
        .map(|&x| {
            let mut v = vec![1 % p; t + 1];
            for e in 1..=t {
                v[e] = v[e - 1] * x % p;
            }
            v
        })
        .collect();
    let betas = derivative_indices(m - 1);
    let mut out = Vec::with_capacity(betas.len() * columns.len());
    for beta in &betas {
        for alpha in columns {
            let mut e = 1u64;
            for k in 0..3 {
                let (a, b) = (alpha[affine[k]] as usize, beta[k] as usize);
                if a < b {
                    e = 0;
                    break;
                }
                e = e * binom[a][b] % p * powers[k][a - b] % p;
            }
            out.push(e);
        }
    }
    out
}
