//! Intersection numbers on `X` through its Chow ring
//! `ℤ[a,b,c,d] / (aⁿ⁺¹, bⁿ⁺¹, cᵐ⁺¹, dᵐ⁺¹)`, normalized by `aⁿbⁿcᵐdᵐ = 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cohomology::LineBundleSum;
use crate::error::{Error, Result};
use crate::mring::{MultiDegree, SpaceParams};

type Exponent = [u32; 4];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowClass {
    params: SpaceParams,
    terms: BTreeMap<Exponent, BigInt>,
}

impl ChowClass {
    pub fn zero(params: SpaceParams) -> Self {
        ChowClass { params, terms: BTreeMap::new() }
    }

    pub fn one(params: SpaceParams) -> Self {
        ChowClass::monomial(params, [0; 4], BigInt::one())
    }

    /// `coeff · a^e₀ b^e₁ c^e₂ d^e₃`, already truncated.
    pub fn monomial(params: SpaceParams, exp: Exponent, coeff: BigInt) -> Self {
        let mut c = ChowClass::zero(params);
        c.add_term(exp, coeff);
        c
    }

    /// Pullback of the hyperplane class of factor `slot` (0..4).
    pub fn hyperplane(params: SpaceParams, slot: usize) -> Self {
        let mut exp = [0; 4];
        exp[slot] = 1;
        ChowClass::monomial(params, exp, BigInt::one())
    }

    /// Divisor class `a·[a] + b·[b] + c·[c] + d·[d]` of `O_X(a,b,c,d)`.
    pub fn divisor(params: SpaceParams, deg: MultiDegree) -> Self {
        let mut c = ChowClass::zero(params);
        for slot in 0..4 {
            let mut exp = [0; 4];
            exp[slot] = 1;
            c.add_term(exp, BigInt::from(deg.0[slot]));
        }
        c
    }

    /// The polarization `L = O_X(1,1,1,1)`.
    pub fn polarization(params: SpaceParams) -> Self {
        ChowClass::divisor(params, MultiDegree::splat(1))
    }

    fn in_range(&self, exp: &Exponent) -> bool {
        let dims = self.params.factor_dims();
        exp.iter().zip(dims).all(|(&e, d)| e <= d)
    }

    fn add_term(&mut self, exp: Exponent, c: BigInt) {
        if c.is_zero() || !self.in_range(&exp) {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn params(&self) -> SpaceParams {
        self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: Exponent) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &ChowClass) -> Result<ChowClass> {
        if self.params != other.params {
            return Err(Error::ParamsMismatch);
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigInt) -> ChowClass {
        let mut out = ChowClass::zero(self.params);
        for (e, c) in &self.terms {
            out.add_term(*e, c * s);
        }
        out
    }

    pub fn mul(&self, other: &ChowClass) -> Result<ChowClass> {
        if self.params != other.params {
            return Err(Error::ParamsMismatch);
        }
        let mut out = ChowClass::zero(self.params);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = std::array::from_fn(|i| ea[i] + eb[i]);
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> ChowClass {
        let mut acc = ChowClass::one(self.params);
        for _ in 0..exp {
            acc = acc.mul(self).expect("same params");
        }
        acc
    }

    /// Degree of the zero-cycle part: the coefficient of `aⁿbⁿcᵐdᵐ`.
    pub fn top_coefficient(&self) -> BigInt {
        self.coefficient(self.params.factor_dims())
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .zip(['a', 'b', 'c', 'd'])
                    .filter(|(&p, _)| p > 0)
                    .map(|(&p, v)| if p == 1 { v.to_string() } else { format!("{v}^{p}") })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `c₁ = Σ rᵢ dᵢ` of a sum of line bundles.
pub fn c1_of_sum(s: &LineBundleSum) -> MultiDegree {
    s.summands().map(|(d, r)| (r as i64) * d).sum()
}

/// `deg_L = c₁ · L^{dim X − 1}` evaluated on the fundamental class.
pub fn degree_l(c1: MultiDegree, params: SpaceParams) -> BigInt {
    let l_pow = ChowClass::polarization(params).pow(params.dim() as u32 - 1);
    ChowClass::divisor(params, c1).mul(&l_pow).expect("same params").top_coefficient()
}

/// `δ_L(B) = deg_L O_X(B)`, a linear functional on `Pic X`.
pub fn delta_l(b: MultiDegree, params: SpaceParams) -> BigInt {
    degree_l(b, params)
}

/// `L^{dim X}`, the volume of the polarization.
pub fn polarization_volume(params: SpaceParams) -> BigInt {
    ChowClass::polarization(params).pow(params.dim() as u32).top_coefficient()
}

/// Rank, first Chern class, `deg_L` and `μ_L` of a bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleInvariants {
    pub rank: u64,
    pub c1: MultiDegree,
    pub degree_l: BigInt,
    pub slope_l: BigRational,
}

impl BundleInvariants {
    pub fn from_c1(rank: u64, c1: MultiDegree, params: SpaceParams) -> Self {
        let degree_l = degree_l(c1, params);
        let slope_l = BigRational::new(degree_l.clone(), BigInt::from(rank));
        BundleInvariants { rank, c1, degree_l, slope_l }
    }
}

/// Serialized as `{"rank": r, "c1": [a,b,c,d], "degree": "<int>", "slope": "p/q"}`.
impl Serialize for BundleInvariants {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BundleInvariants", 4)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("c1", &self.c1)?;
        st.serialize_field("degree", &self.degree_l.to_string())?;
        st.serialize_field("slope", &rational_string(&self.slope_l))?;
        st.end()
    }
}

/// `p/q` in lowest terms, with `q = 1` written out.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Invariants of `T = ker g`: rank `2n+2m+3k` and `c₁(T) = c₁(𝒢ₙ⊕𝒢ₘ) − c₁(O(1,1,1,1)^k)`.
pub fn invariants_of_t(params: SpaceParams) -> BundleInvariants {
    let middle = LineBundleSum::monad_middle(params);
    let target = LineBundleSum::line(params, MultiDegree::splat(1), u64::from(params.k()));
    let rank = middle.rank() - target.rank();
    let c1 = c1_of_sum(&middle) - c1_of_sum(&target);
    let inv = BundleInvariants::from_c1(rank, c1, params);
    assert!(inv.degree_l < BigInt::zero(), "deg_L T must be negative");
    inv
}

/// Invariants of `E = T / O(−1,−1,−1,−1)^k`: rank drops by `k`, `c₁` gains `(k,k,k,k)`.
pub fn invariants_of_e(params: SpaceParams) -> BundleInvariants {
    let t = invariants_of_t(params);
    let k = i64::from(params.k());
    let source = LineBundleSum::line(params, MultiDegree::splat(-1), k as u64);
    BundleInvariants::from_c1(t.rank - source.rank(), t.c1 - c1_of_sum(&source), params)
}

/// Comparison of the exact `deg_L T` with the closed form
/// `−(n+m+4k)·L^{dim X}` that is sometimes quoted for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeDiscrepancy {
    pub exact: BigInt,
    pub closed_form: BigInt,
}

impl DegreeDiscrepancy {
    pub fn for_t(params: SpaceParams) -> Self {
        let factor = -BigInt::from(params.n() + params.m() + 4 * params.k());
        DegreeDiscrepancy { exact: invariants_of_t(params).degree_l, closed_form: factor * polarization_volume(params) }
    }

    pub fn agrees(&self) -> bool {
        self.exact == self.closed_form
    }

    pub fn same_sign(&self) -> bool {
        self.exact.sign() == self.closed_form.sign()
    }
}

impl Serialize for DegreeDiscrepancy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DegreeDiscrepancy", 4)?;
        st.serialize_field("exact_degree", &self.exact.to_string())?;
        st.serialize_field("closed_form_degree", &self.closed_form.to_string())?;
        st.serialize_field("agrees", &self.agrees())?;
        st.serialize_field("same_sign", &self.same_sign())?;
        st.end()
    }
}
