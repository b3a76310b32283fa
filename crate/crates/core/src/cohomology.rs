//! Sheaf cohomology of line bundles, and of direct sums and exterior powers
//! of line bundles, on `X = Pⁿ × Pⁿ × Pᵐ × Pᵐ`.
//!
//! On a single factor `Pʳ` the only nonzero groups of `O(d)` sit in degree 0
//! (`d ≥ 0`) and degree `r` (`d ≤ −r−1`). Künneth then makes `hᵗ(X, O(a,b,c,d))`
//! a convolution of four such profiles, which we evaluate by running over the
//! sixteen choices of "bottom or top" per factor rather than over all
//! compositions of `t`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mring::{MultiDegree, SpaceParams};

/// `C(n, k)`, extended by zero when `k < 0` or `n < k`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 || n < k {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from((n - i) as u64);
        acc /= BigUint::from((i + 1) as u64);
    }
    acc
}

/// `hⁱ(Pⁿ, O(d))`.
pub fn bott_h(n: u32, d: i64, i: u32) -> Result<BigUint> {
    if i > n {
        return Err(Error::DegreeOutOfRange { t: i as usize, dim: n as usize });
    }
    Ok(bott_unchecked(n, d, i))
}

fn bott_unchecked(n: u32, d: i64, i: u32) -> BigUint {
    let n64 = i64::from(n);
    if i == 0 && d >= 0 {
        binomial(n64 + d, n64)
    } else if i == n && d < -n64 {
        binomial(-d - 1, n64)
    } else {
        BigUint::zero()
    }
}

/// `hᵗ(X, O_X(deg))` by Künneth.
pub fn kunneth_h(params: &SpaceParams, deg: MultiDegree, t: usize) -> Result<BigUint> {
    let dim = params.dim();
    if t > dim {
        return Err(Error::DegreeOutOfRange { t, dim });
    }
    Ok(kunneth_unchecked(params, deg, t))
}

fn kunneth_unchecked(params: &SpaceParams, deg: MultiDegree, t: usize) -> BigUint {
    if t == 0 {
        return h0_line(params, deg);
    }
    let dims = params.factor_dims();
    let mut total = BigUint::zero();
    // bit i of `top` selects degree dims[i] (instead of 0) on factor i
    for top in 0u32..16 {
        let shift: usize = (0..4).filter(|i| top >> i & 1 == 1).map(|i| dims[i] as usize).sum();
        if shift != t {
            continue;
        }
        let mut prod = BigUint::one();
        for (i, (&dim, &d)) in dims.iter().zip(&deg.0).enumerate() {
            let deg_i = if top >> i & 1 == 1 { dim } else { 0 };
            let h = bott_unchecked(dim, d, deg_i);
            if h.is_zero() {
                prod = h;
                break;
            }
            prod *= h;
        }
        total += prod;
    }
    total
}

/// `h⁰(X, O_X(deg))`; zero as soon as any component is negative.
pub fn h0_line(params: &SpaceParams, deg: MultiDegree) -> BigUint {
    if deg.has_negative_component() {
        return BigUint::zero();
    }
    let dims = params.factor_dims();
    (0..4).map(|i| binomial(i64::from(dims[i]) + deg.0[i], i64::from(dims[i]))).product()
}

/// Full cohomology table of `O_X(deg)`.
pub fn line_cohomology(params: &SpaceParams, deg: MultiDegree) -> CohTable {
    CohTable { dims: (0..=params.dim()).map(|t| kunneth_unchecked(params, deg, t)).collect() }
}

/// Table `t ↦ hᵗ(X, ·)` for `t = 0..=dim X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CohTable {
    dims: Vec<BigUint>,
}

impl CohTable {
    pub fn zero(dim_x: usize) -> Self {
        CohTable { dims: vec![BigUint::zero(); dim_x + 1] }
    }

    pub fn from_dims(dims: Vec<BigUint>) -> Self {
        CohTable { dims }
    }

    pub fn dims(&self) -> &[BigUint] {
        &self.dims
    }

    pub fn h(&self, t: usize) -> &BigUint {
        &self.dims[t]
    }

    /// `dim X`, i.e. one less than the table length.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(Zero::is_zero)
    }

    /// Componentwise sum; tables must have equal length.
    pub fn add(&self, other: &CohTable) -> CohTable {
        assert_eq!(self.dims.len(), other.dims.len());
        CohTable { dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect() }
    }

    fn scale(&self, s: &BigUint) -> CohTable {
        CohTable { dims: self.dims.iter().map(|a| a * s).collect() }
    }
}

/// Serialized as `{"0": "<h0>", "1": "<h1>", ...}` with decimal-string values.
impl Serialize for CohTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.dims.len()))?;
        for (t, d) in self.dims.iter().enumerate() {
            map.serialize_entry(&t.to_string(), &d.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for CohTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut dims = vec![None; raw.len()];
        for (key, val) in raw {
            let t: usize = key.parse().map_err(|_| D::Error::custom(format!("bad degree key {key:?}")))?;
            let slot = dims.get_mut(t).ok_or_else(|| D::Error::custom(format!("degree {t} out of range")))?;
            *slot = Some(val.parse::<BigUint>().map_err(|_| D::Error::custom(format!("bad dimension {val:?}")))?);
        }
        if dims.is_empty() {
            return Err(D::Error::custom("empty cohomology table"));
        }
        Ok(CohTable { dims: dims.into_iter().map(Option::unwrap).collect() })
    }
}

/// A direct sum `⊕ O_X(dᵢ)^{rᵢ}` of line bundles on a fixed `X`, kept sorted
/// by degree with duplicate degrees merged.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LineBundleSum {
    params: SpaceParams,
    summands: BTreeMap<MultiDegree, u64>,
}

impl LineBundleSum {
    pub fn empty(params: SpaceParams) -> Self {
        LineBundleSum { params, summands: BTreeMap::new() }
    }

    pub fn new<I: IntoIterator<Item = (MultiDegree, u64)>>(params: SpaceParams, summands: I) -> Self {
        let mut s = LineBundleSum::empty(params);
        for (d, r) in summands {
            s.insert(d, r);
        }
        s
    }

    /// `O_X(deg)^{mult}`.
    pub fn line(params: SpaceParams, deg: MultiDegree, mult: u64) -> Self {
        LineBundleSum::new(params, [(deg, mult)])
    }

    /// `𝒢ₙ ⊕ 𝒢ₘ = O(0,−1,0,0)^{n+k} ⊕ O(−1,0,0,0)^{n+k} ⊕ O(0,0,−1,0)^{m+k} ⊕ O(0,0,0,−1)^{m+k}`.
    pub fn monad_middle(params: SpaceParams) -> Self {
        let (n, m, k) = (u64::from(params.n()), u64::from(params.m()), u64::from(params.k()));
        LineBundleSum::new(
            params,
            [
                (MultiDegree::new(0, -1, 0, 0), n + k),
                (MultiDegree::new(-1, 0, 0, 0), n + k),
                (MultiDegree::new(0, 0, -1, 0), m + k),
                (MultiDegree::new(0, 0, 0, -1), m + k),
            ],
        )
    }

    fn insert(&mut self, d: MultiDegree, r: u64) {
        if r > 0 {
            *self.summands.entry(d).or_insert(0) += r;
        }
    }

    pub fn params(&self) -> SpaceParams {
        self.params
    }

    pub fn summands(&self) -> impl Iterator<Item = (MultiDegree, u64)> + '_ {
        self.summands.iter().map(|(&d, &r)| (d, r))
    }

    pub fn num_distinct(&self) -> usize {
        self.summands.len()
    }

    pub fn multiplicity(&self, d: MultiDegree) -> u64 {
        self.summands.get(&d).copied().unwrap_or(0)
    }

    pub fn rank(&self) -> u64 {
        self.summands.values().sum()
    }

    /// `S ⊗ O_X(d)`.
    pub fn twist(&self, d: MultiDegree) -> LineBundleSum {
        LineBundleSum { params: self.params, summands: self.summands.iter().map(|(&e, &r)| (e + d, r)).collect() }
    }

    /// `S^∨`: every summand degree negated.
    pub fn dual(&self) -> LineBundleSum {
        LineBundleSum { params: self.params, summands: self.summands.iter().map(|(&e, &r)| (-e, r)).collect() }
    }

    pub fn direct_sum(&self, other: &LineBundleSum) -> Result<LineBundleSum> {
        if self.params != other.params {
            return Err(Error::ParamsMismatch);
        }
        let mut out = self.clone();
        for (d, r) in other.summands() {
            out.insert(d, r);
        }
        Ok(out)
    }

    /// `Λ^q S`. Choosing `qᵢ` copies out of the summand `O(dᵢ)^{rᵢ}` contributes
    /// `O(Σ qᵢ dᵢ)` with multiplicity `Π C(rᵢ, qᵢ)`; we enumerate the bounded
    /// compositions `(qᵢ)` of `q`.
    pub fn exterior_power(&self, q: u64) -> Result<LineBundleSum> {
        let rank = self.rank();
        if q > rank {
            return Err(Error::ExteriorPowerTooLarge { q, rank });
        }
        let parts: Vec<(MultiDegree, u64)> = self.summands().collect();
        let mut out = LineBundleSum::empty(self.params);
        let mut overflow = false;
        compose(&parts, q, MultiDegree::ZERO, 1, &mut |d, mult| out.insert(d, mult), &mut overflow);
        if overflow {
            return Err(Error::Overflow);
        }
        Ok(out)
    }

    /// Componentwise `Σ rᵢ · h^t(O(dᵢ))`.
    pub fn cohomology(&self) -> CohTable {
        let mut table = CohTable::zero(self.params.dim());
        for (d, r) in self.summands() {
            table = table.add(&line_cohomology(&self.params, d).scale(&BigUint::from(r)));
        }
        table
    }

    /// `h⁰` alone, without building the whole table.
    pub fn h0(&self) -> BigUint {
        self.summands()
            .filter(|(d, _)| !d.has_negative_component())
            .map(|(d, r)| h0_line(&self.params, d) * BigUint::from(r))
            .sum()
    }
}

fn compose(
    parts: &[(MultiDegree, u64)],
    remaining: u64,
    deg: MultiDegree,
    mult: u64,
    emit: &mut impl FnMut(MultiDegree, u64),
    overflow: &mut bool,
) {
    let Some((&(d, r), rest)) = parts.split_first() else {
        if remaining == 0 {
            emit(deg, mult);
        }
        return;
    };
    let capacity: u64 = rest.iter().map(|&(_, r)| r).sum();
    let lo = remaining.saturating_sub(capacity);
    for take in lo..=remaining.min(r) {
        let choose = small_binomial(r, take);
        let Some(next) = choose.and_then(|c| c.checked_mul(mult)) else {
            *overflow = true;
            continue;
        };
        compose(rest, remaining - take, deg + (take as i64) * d, next, emit, overflow);
    }
}

fn small_binomial(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// Prints e.g. `O(-1,0,0,0)^2 + O(0,-1,0,0)^2`.
impl fmt::Display for LineBundleSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.summands().map(|(d, r)| format!("O{d}^{r}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSummand {
    degree: MultiDegree,
    multiplicity: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSum {
    params: SpaceParams,
    summands: Vec<RawSummand>,
}

/// Serialized as `{"params": {...}, "summands": [{"degree": [a,b,c,d], "multiplicity": r}, ...]}`.
impl Serialize for LineBundleSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let summands: Vec<RawSummand> =
            self.summands().map(|(degree, multiplicity)| RawSummand { degree, multiplicity }).collect();
        let mut st = s.serialize_struct("LineBundleSum", 2)?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("summands", &summands)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for LineBundleSum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSum::deserialize(d)?;
        if raw.summands.iter().any(|s| s.multiplicity == 0) {
            return Err(D::Error::custom("summand multiplicities must be positive"));
        }
        Ok(LineBundleSum::new(raw.params, raw.summands.into_iter().map(|s| (s.degree, s.multiplicity))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, m: u32, k: u32) -> SpaceParams {
        SpaceParams::new(n, m, k).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn binomial_zero_extension() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(2, 5), big(0));
        assert_eq!(binomial(-3, 1), big(0));
        assert_eq!(binomial(4, -1), big(0));
        assert_eq!(binomial(0, 0), big(1));
    }

    #[test]
    fn bott_examples() {
        assert_eq!(bott_h(2, 2, 0).unwrap(), big(6));
        for j in 0..=2 {
            assert_eq!(bott_h(2, -1, j).unwrap(), big(0));
        }
        assert_eq!(bott_h(1, -2, 1).unwrap(), big(1));
        assert_eq!(bott_h(3, -5, 3).unwrap(), big(4));
        assert!(bott_h(2, 0, 3).is_err());
    }

    #[test]
    fn kunneth_examples() {
        let params = p(1, 2, 3);
        assert_eq!(kunneth_h(&params, MultiDegree::splat(1), 0).unwrap(), big(36));
        assert_eq!(kunneth_h(&params, MultiDegree::new(-2, -2, -3, -3), 6).unwrap(), big(1));
        assert_eq!(kunneth_h(&params, MultiDegree::ZERO, 0).unwrap(), big(1));
        assert!(kunneth_h(&params, MultiDegree::ZERO, 7).is_err());
        // mixed: h¹ on the first P¹ factor times h⁰ elsewhere
        assert_eq!(kunneth_h(&params, MultiDegree::new(-3, 0, 1, 0), 1).unwrap(), big(2 * 3));
    }

    #[test]
    fn sum_cohomology_examples() {
        let params = p(1, 2, 3);
        let middle = LineBundleSum::monad_middle(params);
        assert_eq!(middle.cohomology().h(0), &big(0));
        assert!(middle.cohomology().is_zero());
        let target = LineBundleSum::line(params, MultiDegree::splat(1), 3);
        assert_eq!(target.cohomology().h(0), &big(108));
        assert_eq!(target.h0(), big(108));
        let a = LineBundleSum::line(params, MultiDegree::splat(-2), 3);
        let table = a.cohomology();
        assert_eq!(table.h(0), &big(0));
        assert_eq!(table.h(1), &big(0));
    }

    #[test]
    fn exterior_power_examples() {
        let params = p(1, 1, 1);
        let s = LineBundleSum::new(params, [(MultiDegree::new(-1, 0, 0, 0), 2), (MultiDegree::new(0, -1, 0, 0), 1)]);
        assert_eq!(s.exterior_power(1).unwrap(), s);
        let only = LineBundleSum::line(params, MultiDegree::new(-1, 0, 0, 0), 2);
        assert_eq!(only.exterior_power(2).unwrap(), LineBundleSum::line(params, MultiDegree::new(-2, 0, 0, 0), 1));
        let w2 = s.exterior_power(2).unwrap();
        assert_eq!(
            w2,
            LineBundleSum::new(params, [(MultiDegree::new(-2, 0, 0, 0), 1), (MultiDegree::new(-1, -1, 0, 0), 2)])
        );
        assert_eq!(w2.rank(), 3);
        assert!(s.exterior_power(4).is_err());
        assert_eq!(s.exterior_power(0).unwrap(), LineBundleSum::line(params, MultiDegree::ZERO, 1));
    }

    #[test]
    fn twist_examples() {
        let params = p(2, 3, 2);
        let middle = LineBundleSum::monad_middle(params);
        assert_eq!(middle.twist(MultiDegree::ZERO), middle);
        let bar = middle.twist(MultiDegree::new(-1, -2, -3, -4));
        assert_eq!(bar.multiplicity(MultiDegree::new(-2, -2, -3, -4)), 4);
        assert_eq!(bar.multiplicity(MultiDegree::new(-1, -3, -3, -4)), 4);
        assert_eq!(bar.multiplicity(MultiDegree::new(-1, -2, -4, -4)), 5);
        assert_eq!(bar.multiplicity(MultiDegree::new(-1, -2, -3, -5)), 5);
        let target = LineBundleSum::line(params, MultiDegree::splat(1), 2);
        assert_eq!(target.twist(MultiDegree::splat(-1)), LineBundleSum::line(params, MultiDegree::ZERO, 2));
    }

    #[test]
    fn monad_middle_multiplicities() {
        let middle = LineBundleSum::monad_middle(p(1, 2, 3));
        assert_eq!(middle.rank(), 18);
        assert_eq!(middle.multiplicity(MultiDegree::new(0, -1, 0, 0)), 4);
        assert_eq!(middle.multiplicity(MultiDegree::new(-1, 0, 0, 0)), 4);
        assert_eq!(middle.multiplicity(MultiDegree::new(0, 0, -1, 0)), 5);
        assert_eq!(middle.multiplicity(MultiDegree::new(0, 0, 0, -1)), 5);
    }

    #[test]
    fn json_round_trip() {
        let s = LineBundleSum::monad_middle(p(1, 2, 3));
        let text = serde_json::to_string(&s).unwrap();
        let back: LineBundleSum = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let table = s.twist(MultiDegree::splat(2)).cohomology();
        let text = serde_json::to_string(&table).unwrap();
        assert!(text.starts_with(r#"{"0":""#));
        let back: CohTable = serde_json::from_str(&text).unwrap();
        assert_eq!(back, table);
    }
}
