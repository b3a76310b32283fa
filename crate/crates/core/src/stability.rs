//! Stability of the kernel bundle `T = ker g` through the generalized Hoppe
//! criterion: `T` is stable once `h⁰(Λ^q T ⊗ O(−p)) = 0` for the relevant
//! twists. `Λ^q T(−p)` injects into `Λ^q(𝒢ₙ⊕𝒢ₘ)(−p)`, a sum of line bundles,
//! so its `h⁰` is bounded by an exact Künneth count.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::chow::{delta_l, BundleInvariants};
use crate::cohomology::LineBundleSum;
use crate::error::{Error, Result};
use crate::mring::{MultiDegree, SpaceParams};

/// `rank T = 2n + 2m + 3k`.
pub fn rank_of_t(params: &SpaceParams) -> u32 {
    2 * params.n() + 2 * params.m() + 3 * params.k()
}

/// `k_E = ⌈μ_L(E) / δ_L(1,0,0,0)⌉`, the twist in the first factor that
/// normalizes `E`.
pub fn normalization_shift(inv: &BundleInvariants, params: SpaceParams) -> BigInt {
    let d = delta_l(MultiDegree::new(1, 0, 0, 0), params);
    ceil_div(&inv.slope_l, &d)
}

fn ceil_div(r: &BigRational, d: &BigInt) -> BigInt {
    let num = r.numer().clone();
    let den = r.denom() * d;
    Integer::div_ceil(&num, &den)
}

/// Exact `h⁰(Λ^q(𝒢ₙ⊕𝒢ₘ) ⊗ O(twist))`, an upper bound for `h⁰(Λ^q T ⊗ O(twist))`.
pub fn h0_wedge_t_upper(params: SpaceParams, q: u32, twist: MultiDegree) -> Result<BigUint> {
    let max = rank_of_t(&params);
    if q == 0 || q > max {
        return Err(Error::WedgeIndexOutOfRange { q, max });
    }
    let wedge = LineBundleSum::monad_middle(params).exterior_power(u64::from(q))?;
    Ok(wedge.twist(twist).h0())
}

/// Bounds of the scan over `(q, twist = −p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StabilityScanConfig {
    pub params: SpaceParams,
    /// Largest exterior power `q`, at most `rank T − 1`.
    pub max_q: u32,
    /// Twists `−p` with `min_psum ≤ Σ pᵢ ≤ max_psum` are scanned.
    pub max_psum: i64,
    /// Each `|pᵢ|` is at most this.
    pub component_bound: i64,
    /// Normally 0. Negative values admit twists the criterion does not ask
    /// about, which is only useful to show the scan can fail.
    pub min_psum: i64,
}

impl StabilityScanConfig {
    pub fn new(params: SpaceParams, max_q: u32, max_psum: i64, component_bound: i64) -> Result<Self> {
        let max = rank_of_t(&params) - 1;
        if max_q == 0 || max_q > max {
            return Err(Error::WedgeIndexOutOfRange { q: max_q, max });
        }
        Ok(StabilityScanConfig { params, max_q, max_psum, component_bound, min_psum: 0 })
    }

    /// `max_q = min(8, rank T − 1)`, `max_psum = 4`, `component_bound = 4`.
    pub fn defaults(params: SpaceParams) -> Self {
        let max_q = 8.min(rank_of_t(&params) - 1);
        StabilityScanConfig { params, max_q, max_psum: 4, component_bound: 4, min_psum: 0 }
    }

    pub fn with_min_psum(self, min_psum: i64) -> Self {
        StabilityScanConfig { min_psum, ..self }
    }

    /// All twists `−p` in the box, sorted.
    pub fn twists(&self) -> Vec<MultiDegree> {
        let b = self.component_bound;
        let mut out = Vec::new();
        for p1 in -b..=b {
            for p2 in -b..=b {
                for p3 in -b..=b {
                    for p4 in -b..=b {
                        let s = p1 + p2 + p3 + p4;
                        if (self.min_psum..=self.max_psum).contains(&s) {
                            out.push(-MultiDegree::new(p1, p2, p3, p4));
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanEntry {
    pub q: u32,
    pub twist: MultiDegree,
    pub h0: BigUint,
}

impl Serialize for ScanEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ScanEntry", 3)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("twist", &self.twist)?;
        st.serialize_field("h0", &self.h0.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanVerdict {
    AllVanish,
    Counterexample { q: u32, twist: MultiDegree },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub config: StabilityScanConfig,
    /// Every `(q, twist)` examined, sorted by `(q, twist)`.
    pub checked: Vec<ScanEntry>,
    /// Every summand of every scanned `Λ^q(𝒢ₙ⊕𝒢ₘ)(twist)` has a negative component.
    pub negative_component_invariant: bool,
    pub verdict: ScanVerdict,
}

impl StabilityReport {
    pub fn all_vanish(&self) -> bool {
        self.verdict == ScanVerdict::AllVanish
    }
}

/// Runs the `(q, twist)` grid. The first nonvanishing entry in sorted order,
/// if any, is reported as the counterexample.
pub fn run_stability_scan(cfg: &StabilityScanConfig) -> Result<StabilityReport> {
    let middle = LineBundleSum::monad_middle(cfg.params);
    let twists = cfg.twists();
    let per_q = (1..=cfg.max_q)
        .into_par_iter()
        .map(|q| {
            let wedge = middle.exterior_power(u64::from(q))?;
            let summands: Vec<MultiDegree> = wedge.summands().map(|(d, _)| d).collect();
            let rows: Vec<(ScanEntry, bool)> = twists
                .iter()
                .map(|&twist| {
                    let negative = summands.iter().all(|&d| (d + twist).has_negative_component());
                    let h0 = if negative { BigUint::zero() } else { wedge.twist(twist).h0() };
                    (ScanEntry { q, twist, h0 }, negative)
                })
                .collect();
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut checked = Vec::with_capacity(per_q.iter().map(Vec::len).sum());
    let mut invariant = true;
    for (entry, negative) in per_q.into_iter().flatten() {
        invariant &= negative;
        checked.push(entry);
    }
    let verdict = checked
        .iter()
        .find(|e| !e.h0.is_zero())
        .map_or(ScanVerdict::AllVanish, |e| ScanVerdict::Counterexample { q: e.q, twist: e.twist });
    Ok(StabilityReport { config: *cfg, checked, negative_component_invariant: invariant, verdict })
}
