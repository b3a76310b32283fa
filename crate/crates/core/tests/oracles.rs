//! Independent oracles. Nothing here calls the closed forms under test to
//! produce an expected value: counts come from enumeration, intersection
//! numbers from word expansion, ranks from minors.

use monadforge::chow::{degree_l, invariants_of_t, polarization_volume};
use monadforge::cohomology::{bott_h, kunneth_h};
use monadforge::les::twisted_dual_sequence;
use monadforge::{
    CohProfile, FieldMatrix, Interval, LineBundleSum, MultiDegree, PrimeField, ShortExactSeq, SpaceParams,
};
use num_bigint::{BigInt, BigUint};

mod common;

use common::{c1_t_oracle, count_monomials, naive_kunneth, word_expansion_degree};

fn p(n: u32, m: u32, k: u32) -> SpaceParams {
    SpaceParams::new(n, m, k).unwrap()
}

#[test]
fn h0_matches_monomial_count() {
    for n in 1..=5 {
        for d in -8..=8 {
            let expected = BigUint::from(count_monomials(n + 1, d));
            assert_eq!(bott_h(n, d, 0).unwrap(), expected, "n={n} d={d}");
        }
    }
}

#[test]
fn top_cohomology_matches_dual_count() {
    for n in 1..=5 {
        for d in -12..=4 {
            let expected = BigUint::from(count_monomials(n + 1, -d - i64::from(n) - 1));
            assert_eq!(bott_h(n, d, n).unwrap(), expected, "n={n} d={d}");
            for i in 1..n {
                assert_eq!(bott_h(n, d, i).unwrap(), BigUint::from(0u8));
            }
        }
    }
}

#[test]
fn kunneth_matches_convolution() {
    for params in [p(1, 1, 1), p(1, 2, 1), p(2, 1, 1), p(2, 3, 1)] {
        for a in -5..=2 {
            for b in -4..=2 {
                for c in -5..=1 {
                    for d in [-6, -1, 0, 2] {
                        let deg = MultiDegree::new(a, b, c, d);
                        let table = naive_kunneth(&params, deg);
                        for (t, &h) in table.iter().enumerate() {
                            assert_eq!(kunneth_h(&params, deg, t).unwrap(), BigUint::from(h), "{params} {deg} t={t}");
                        }
                    }
                }
            }
        }
    }
}

/// `χ(O(d))` on `Pⁿ` is the polynomial `(d+1)⋯(d+n)/n!`, valid for every `d`.
fn euler_factor(n: u32, d: i64) -> BigInt {
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 1..=i64::from(n) {
        num *= d + i;
        den *= i;
    }
    num / den
}

#[test]
fn euler_characteristic_is_a_product_of_polynomials() {
    let params = p(2, 1, 1);
    let dims = params.factor_dims();
    for a in -6..=3 {
        for b in -4..=2 {
            for c in -4..=2 {
                for d in -3..=3 {
                    let deg = MultiDegree::new(a, b, c, d);
                    let chi: BigInt = (0..=params.dim())
                        .map(|t| {
                            let h = BigInt::from(kunneth_h(&params, deg, t).unwrap());
                            if t % 2 == 0 {
                                h
                            } else {
                                -h
                            }
                        })
                        .sum();
                    let expected: BigInt = (0..4).map(|s| euler_factor(dims[s], deg.0[s])).product();
                    assert_eq!(chi, expected, "{deg}");
                }
            }
        }
    }
}

#[test]
fn degree_of_t_matches_word_expansion() {
    let params = p(1, 2, 3);
    let c1 = c1_t_oracle(&params);
    assert_eq!(c1, MultiDegree::new(-7, -7, -8, -8));
    let oracle = word_expansion_degree(c1, &params);
    assert_eq!(oracle, BigInt::from(-1380));
    assert_eq!(degree_l(c1, params), oracle);
    assert_eq!(invariants_of_t(params).degree_l, oracle);

    for params in SpaceParams::grid(3).filter(|q| q.dim() <= 10) {
        let c1 = c1_t_oracle(&params);
        let inv = invariants_of_t(params);
        assert_eq!(inv.c1, c1);
        assert_eq!(inv.degree_l, word_expansion_degree(c1, &params), "{params}");
    }
}

#[test]
fn degree_is_linear_against_word_expansion() {
    let params = p(2, 1, 1);
    for c1 in [
        MultiDegree::new(1, 0, 0, 0),
        MultiDegree::new(0, 0, 1, 0),
        MultiDegree::new(3, -2, 5, -1),
        MultiDegree::splat(-1),
    ] {
        assert_eq!(degree_l(c1, params), word_expansion_degree(c1, &params), "{c1}");
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

#[test]
fn polarization_volume_is_a_multinomial() {
    for params in SpaceParams::grid(4) {
        let (n, m) = (params.n(), params.m());
        let d = 2 * n + 2 * m;
        let expected = factorial(d) / (factorial(n) * factorial(n) * factorial(m) * factorial(m));
        assert_eq!(polarization_volume(params), expected, "{params}");
    }
}

/// Determinant by cofactor expansion over `F_p`.
fn det(field: PrimeField, m: &[Vec<u64>]) -> u64 {
    let size = m.len();
    if size == 1 {
        return m[0][0];
    }
    let mut acc = 0;
    for j in 0..size {
        let minor: Vec<Vec<u64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
            .collect();
        let term = field.mul(m[0][j], det(field, &minor));
        acc = if j % 2 == 0 { field.add(acc, term) } else { field.sub(acc, term) };
    }
    acc
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|mask| mask.count_ones() as usize == r)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect()
}

/// Largest `r` with a nonzero `r × r` minor.
fn minor_rank(field: PrimeField, rows: usize, cols: usize, data: &[u64]) -> usize {
    for r in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, r) {
            for cs in subsets(cols, r) {
                let m: Vec<Vec<u64>> = rs.iter().map(|&i| cs.iter().map(|&j| data[i * cols + j]).collect()).collect();
                if det(field, &m) != 0 {
                    return r;
                }
            }
        }
    }
    0
}

#[test]
fn gaussian_rank_matches_minors() {
    let field = PrimeField::new(101).unwrap();
    // small LCG, so rank-deficient matrices show up often with the 0..4 range
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) % 4
    };
    for _ in 0..3000 {
        let rows = 1 + (next() as usize);
        let cols = 1 + (next() as usize);
        let data: Vec<u64> = (0..rows * cols).map(|_| if next() == 0 { 0 } else { next() * 33 % 101 }).collect();
        let expected = minor_rank(field, rows, cols, &data);
        let m = FieldMatrix::new(field, rows, cols, data.clone());
        assert_eq!(m.rank(), expected, "{rows}x{cols} {data:?}");
    }
}

#[test]
fn dual_middle_sections_count() {
    // h⁰((𝒢ₙ⊕𝒢ₘ)^∨) = 2(n+k)(n+1) + 2(m+k)(m+1): each summand dual is a
    // hyperplane class on one factor
    for params in SpaceParams::grid(3) {
        let (n, m, k) = (u64::from(params.n()), u64::from(params.m()), u64::from(params.k()));
        let expected =
            2 * (n + k) * count_monomials(params.n() + 1, 1) + 2 * (m + k) * count_monomials(params.m() + 1, 1);
        assert_eq!(expected, 2 * (n + k) * (n + 1) + 2 * (m + k) * (m + 1));
        assert_eq!(LineBundleSum::monad_middle(params).dual().h0(), BigUint::from(expected));
    }
}

#[test]
fn untwisted_dual_sequence_gives_h0_of_t_dual() {
    // 0 → O(−1,−1,−1,−1)^k → (𝒢ₙ⊕𝒢ₘ)^∨ → T^∨ → 0; the left term is acyclic
    let params = p(1, 2, 3);
    let left = LineBundleSum::line(params, MultiDegree::splat(-1), 3);
    assert!(naive_kunneth(&params, MultiDegree::splat(-1)).iter().all(|&h| h == 0));
    let middle = LineBundleSum::monad_middle(params).dual();
    let seq = ShortExactSeq::new(
        CohProfile::exact(left.cohomology()),
        CohProfile::exact(middle.cohomology()),
        CohProfile::Unknown,
        params.dim(),
    );
    let out = seq.propagate().unwrap();
    assert_eq!(out.right.at(0).unwrap(), Interval::exact(BigUint::from(16u32 + 30)));
}

#[test]
fn twisted_dual_sequence_is_acyclic_in_low_degrees() {
    for params in SpaceParams::grid(3) {
        let seq = twisted_dual_sequence(params);
        let mid: Vec<u64> = LineBundleSum::monad_middle(params).dual().twist(MultiDegree::splat(-1)).summands().fold(
            vec![0; params.dim() + 1],
            |mut acc, (d, r)| {
                for (t, h) in naive_kunneth(&params, d).into_iter().enumerate() {
                    acc[t] += h * r;
                }
                acc
            },
        );
        assert_eq!(mid[0], 0);
        assert_eq!(mid[1], 0);
        let out = seq.propagate().unwrap();
        assert!(out.right.at(0).unwrap().is_zero());
        assert!(out.right.at(1).unwrap().is_zero());
    }
}
