//! Oracles shared by the integration targets. They are written from first
//! principles and never call into the functions they check.
#![allow(dead_code)]

use monadforge::{MultiDegree, SpaceParams};
use num_bigint::BigInt;

/// Number of monomials of degree `d` in `vars` variables, by enumeration.
pub fn count_monomials(vars: u32, d: i64) -> u64 {
    if d < 0 {
        return 0;
    }
    if vars == 1 {
        return 1;
    }
    (0..=d).map(|e| count_monomials(vars - 1, d - e)).sum()
}

/// Cohomology of `O(d)` on `Pⁿ` by counting: sections are monomials, the top
/// group is dual to sections of `O(−d−n−1)`.
pub fn factor_table(n: u32, d: i64) -> Vec<u64> {
    let mut v = vec![0; n as usize + 1];
    v[0] += count_monomials(n + 1, d);
    v[n as usize] += count_monomials(n + 1, -d - i64::from(n) - 1);
    v
}

pub fn convolve(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn naive_kunneth(params: &SpaceParams, deg: MultiDegree) -> Vec<u64> {
    let dims = params.factor_dims();
    (0..4).fold(vec![1], |acc, s| convolve(&acc, &factor_table(dims[s], deg.0[s])))
}

/// `c1 · L^{D−1}` by expanding `L^{D−1} = (a+b+c+d)^{D−1}` as all `4^{D−1}`
/// words and keeping those whose product with a hyperplane class lands
/// exactly on the point class `aⁿbⁿcᵐdᵐ`.
pub fn word_expansion_degree(c1: MultiDegree, params: &SpaceParams) -> BigInt {
    let top = params.factor_dims();
    let len = params.dim() - 1;
    let mut total = BigInt::from(0);
    let words = 4usize.pow(len as u32);
    for w in 0..words {
        let mut exps = [0u32; 4];
        let mut x = w;
        for _ in 0..len {
            exps[x % 4] += 1;
            x /= 4;
        }
        for s in 0..4 {
            let mut e = exps;
            e[s] += 1;
            if e == top {
                total += c1.0[s];
            }
        }
    }
    total
}

/// Independent statement of `c1(T)`: summands of the middle term minus `k·(1,1,1,1)`.
pub fn c1_t_oracle(params: &SpaceParams) -> MultiDegree {
    let (n, m, k) = (i64::from(params.n()), i64::from(params.m()), i64::from(params.k()));
    let mid = MultiDegree::new(-(n + k), -(n + k), -(m + k), -(m + k));
    mid - MultiDegree::splat(k)
}
