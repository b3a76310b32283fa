//! The linear monad
//!
//! ```text
//! 0 → O(−1,−1,−1,−1)^k --f--> 𝒢ₙ ⊕ 𝒢ₘ --g--> O(1,1,1,1)^k → 0
//! ```
//!
//! on `X = Pⁿ × Pⁿ × Pᵐ × Pᵐ`, with `f = [f₁ | −f₂ | f₃ | −f₄]` built from
//! Hankel blocks and `g = [g₁; g₂; g₃; g₄]` from Toeplitz blocks.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::LineBundleSum;
use crate::error::{Error, Result};
use crate::mring::{
    FieldMatrix, Group, MultiDegree, PolyMatrix, Polynomial, PrimeField, SpaceParams, Variable, MERSENNE_31,
};

/// One of the four block positions of `f` and `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    One,
    Two,
    Three,
    Four,
}

impl Block {
    pub const ALL: [Block; 4] = [Block::One, Block::Two, Block::Three, Block::Four];

    /// Variable group of the entries of `f_i`.
    pub fn f_group(self) -> Group {
        match self {
            Block::One => Group::Y,
            Block::Two => Group::X,
            Block::Three => Group::T,
            Block::Four => Group::Z,
        }
    }

    /// Variable group of the entries of `g_i`.
    pub fn g_group(self) -> Group {
        match self {
            Block::One => Group::X,
            Block::Two => Group::Y,
            Block::Three => Group::Z,
            Block::Four => Group::T,
        }
    }

    /// `n` for blocks 1 and 2, `m` for blocks 3 and 4.
    pub fn factor_dim(self, params: &SpaceParams) -> u32 {
        match self {
            Block::One | Block::Two => params.n(),
            Block::Three | Block::Four => params.m(),
        }
    }

    /// Sign with which `f_i` enters `f`.
    pub fn sign(self) -> i32 {
        match self {
            Block::One | Block::Three => 1,
            Block::Two | Block::Four => -1,
        }
    }

    /// Summand of `𝒢ₙ ⊕ 𝒢ₘ` indexed by this block, in the order
    /// `O(0,−1,0,0), O(−1,0,0,0), O(0,0,−1,0), O(0,0,0,−1)`.
    pub fn middle_degree(self) -> MultiDegree {
        match self {
            Block::One => MultiDegree::new(0, -1, 0, 0),
            Block::Two => MultiDegree::new(-1, 0, 0, 0),
            Block::Three => MultiDegree::new(0, 0, -1, 0),
            Block::Four => MultiDegree::new(0, 0, 0, -1),
        }
    }

    /// Block size `n + k` or `m + k`.
    pub fn width(self, params: &SpaceParams) -> usize {
        (self.factor_dim(params) + params.k()) as usize
    }
}

/// The `k × (r+k)` Hankel block `f_i` (`r = n` or `m`): entry `(i, j)` is
/// `v_{r+k−1−i−j}` when that index lies in `0..=r`, else zero.
pub fn build_f_block(block: Block, params: &SpaceParams) -> PolyMatrix {
    let r = block.factor_dim(params) as i64;
    let k = params.k() as usize;
    let group = block.f_group();
    PolyMatrix::from_fn(k, block.width(params), |i, j| {
        let idx = r + k as i64 - 1 - i as i64 - j as i64;
        if (0..=r).contains(&idx) {
            Polynomial::var(Variable::new(group, idx as u32))
        } else {
            Polynomial::zero()
        }
    })
}

/// The `(r+k) × k` Toeplitz block `g_i`: entry `(i, j)` is `v_{i−j}` when
/// `0 ≤ i − j ≤ r`, else zero.
pub fn build_g_block(block: Block, params: &SpaceParams) -> PolyMatrix {
    let r = block.factor_dim(params) as i64;
    let group = block.g_group();
    PolyMatrix::from_fn(block.width(params), params.k() as usize, |i, j| {
        let idx = i as i64 - j as i64;
        if (0..=r).contains(&idx) {
            Polynomial::var(Variable::new(group, idx as u32))
        } else {
            Polynomial::zero()
        }
    })
}

/// A monad `source --f--> middle --g--> target` together with its maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonadSpec {
    params: SpaceParams,
    f: PolyMatrix,
    g: PolyMatrix,
    source: LineBundleSum,
    middle: LineBundleSum,
    target: LineBundleSum,
}

impl MonadSpec {
    /// Assembles `f = [f₁ | −f₂ | f₃ | −f₄]` and `g = [g₁; g₂; g₃; g₄]`.
    pub fn assemble(params: SpaceParams) -> Self {
        let f_blocks: Vec<PolyMatrix> = Block::ALL
            .iter()
            .map(|&b| {
                let blk = build_f_block(b, &params);
                if b.sign() < 0 {
                    blk.neg()
                } else {
                    blk
                }
            })
            .collect();
        let g_blocks: Vec<PolyMatrix> = Block::ALL.iter().map(|&b| build_g_block(b, &params)).collect();
        let k = u64::from(params.k());
        MonadSpec {
            params,
            f: PolyMatrix::hconcat(&f_blocks).expect("blocks share k rows"),
            g: PolyMatrix::vstack(&g_blocks).expect("blocks share k columns"),
            source: LineBundleSum::line(params, MultiDegree::splat(-1), k),
            middle: LineBundleSum::monad_middle(params),
            target: LineBundleSum::line(params, MultiDegree::splat(1), k),
        }
    }

    /// A spec with arbitrary maps, e.g. for negative controls.
    pub fn with_maps(&self, f: PolyMatrix, g: PolyMatrix) -> Self {
        MonadSpec { f, g, ..self.clone() }
    }

    pub fn params(&self) -> SpaceParams {
        self.params
    }

    pub fn f(&self) -> &PolyMatrix {
        &self.f
    }

    pub fn g(&self) -> &PolyMatrix {
        &self.g
    }

    pub fn source(&self) -> &LineBundleSum {
        &self.source
    }

    pub fn middle(&self) -> &LineBundleSum {
        &self.middle
    }

    pub fn target(&self) -> &LineBundleSum {
        &self.target
    }

    /// Column ranges of `f` (equivalently row ranges of `g`) for each block.
    pub fn block_ranges(&self) -> [(Block, std::ops::Range<usize>); 4] {
        let mut start = 0;
        Block::ALL.map(|b| {
            let w = b.width(&self.params);
            let r = start..start + w;
            start += w;
            (b, r)
        })
    }

    /// Bundles are the expected ones for `params`, and `f`, `g` have shapes
    /// `k × rank(middle)` and `rank(middle) × k`.
    pub fn check_structure(&self) -> bool {
        let k = self.params.k() as usize;
        let mid = LineBundleSum::monad_middle(self.params);
        let w = mid.rank() as usize;
        let kk = u64::from(self.params.k());
        self.middle == mid
            && self.source == LineBundleSum::line(self.params, MultiDegree::splat(-1), kk)
            && self.target == LineBundleSum::line(self.params, MultiDegree::splat(1), kk)
            && self.f.shape() == (k, w)
            && self.g.shape() == (w, k)
    }

    /// Every nonzero entry in column block `i` of `f` is a linear form in the
    /// variables of `f_group(i)`, and likewise for row block `i` of `g`.
    pub fn check_block_gradings(&self) -> bool {
        if !self.check_structure() {
            return false;
        }
        self.block_ranges().iter().all(|(b, range)| {
            let f_ok = (0..self.f.rows())
                .flat_map(|i| range.clone().map(move |j| (i, j)))
                .all(|(i, j)| graded_as(self.f.get(i, j), b.f_group()));
            let g_ok = range
                .clone()
                .flat_map(|i| (0..self.g.cols()).map(move |j| (i, j)))
                .all(|(i, j)| graded_as(self.g.get(i, j), b.g_group()));
            f_ok && g_ok
        })
    }

    /// `f · g`, or `None` when the shapes do not compose.
    pub fn composition(&self) -> Option<PolyMatrix> {
        self.f.matrix_mul(&self.g).ok()
    }

    /// `f · g = 0`, checked symbolically.
    pub fn verify_composition(&self) -> bool {
        self.composition().is_some_and(|p| p.is_zero())
    }

    /// Ranks of `f` and `g` at one point.
    pub fn ranks_at(&self, point: &BTreeMap<Variable, u64>, field: PrimeField) -> Result<(usize, usize)> {
        let f = self.f.evaluate(point, field)?;
        let g = self.g.evaluate(point, field)?;
        Ok((f.rank(), g.rank()))
    }

    /// Evaluations of `f` and `g` at one point.
    pub fn evaluate_at(
        &self,
        point: &BTreeMap<Variable, u64>,
        field: PrimeField,
    ) -> Result<(FieldMatrix, FieldMatrix)> {
        Ok((self.f.evaluate(point, field)?, self.g.evaluate(point, field)?))
    }

    /// Monte Carlo check that `f` and `g` have rank `k` away from the
    /// irrelevant locus, over `F_{2³¹−1}`.
    pub fn verify_maximal_rank(&self, trials: u32, seed: u64) -> Result<RankReport> {
        self.verify_maximal_rank_in(trials, seed, MERSENNE_31)
    }

    /// Trial `i` draws its point from a ChaCha stream keyed by `(seed, i)`, so
    /// the report does not depend on how trials are scheduled.
    pub fn verify_maximal_rank_in(&self, trials: u32, seed: u64, field: PrimeField) -> Result<RankReport> {
        if trials == 0 {
            return Err(Error::NoTrials);
        }
        let vars = Variable::all(&self.params);
        let expected = self.params.k() as usize;
        let samples = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let point = random_point(&vars, field, seed, u64::from(trial), None);
                let (rank_f, rank_g) = self.ranks_at(&point, field)?;
                Ok(TrialRank { trial, rank_f, rank_g })
            })
            .collect::<Result<Vec<_>>>()?;

        let origin: BTreeMap<Variable, u64> = vars.iter().map(|&v| (v, 0)).collect();
        let (of, og) = self.ranks_at(&origin, field)?;

        let group_zeroed = Group::ALL
            .iter()
            .enumerate()
            .map(|(slot, &group)| {
                let stream = u64::MAX - slot as u64;
                let point = random_point(&vars, field, seed, stream, Some(group));
                let (rank_f, rank_g) = self.ranks_at(&point, field)?;
                Ok(GroupZeroed { group, rank_f, rank_g })
            })
            .collect::<Result<Vec<_>>>()?;

        let maximal = samples.iter().all(|s| s.rank_f == expected && s.rank_g == expected);
        Ok(RankReport {
            characteristic: field.characteristic(),
            seed,
            expected_rank: expected,
            samples,
            origin: OriginRank { rank_f: of, rank_g: og },
            group_zeroed,
            verdict: if maximal { RankVerdict::Maximal } else { RankVerdict::Deficient },
        })
    }
}

fn graded_as(p: &Polynomial, group: Group) -> bool {
    p.is_zero() || (p.multidegree() == Some(group.unit()) && p.variables().all(|v| v.group == group))
}

/// A point with every coordinate group nonzero, except `zero_group` which is
/// set identically to zero.
fn random_point(
    vars: &[Variable],
    field: PrimeField,
    seed: u64,
    stream: u64,
    zero_group: Option<Group>,
) -> BTreeMap<Variable, u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let p = field.characteristic();
    let mut point = BTreeMap::new();
    for group in Group::ALL {
        let members: Vec<Variable> = vars.iter().copied().filter(|v| v.group == group).collect();
        if Some(group) == zero_group {
            point.extend(members.iter().map(|&v| (v, 0)));
            continue;
        }
        loop {
            let values: Vec<u64> = members.iter().map(|_| rng.gen_range(0..p)).collect();
            if values.iter().any(|&x| x != 0) {
                point.extend(members.iter().copied().zip(values));
                break;
            }
        }
    }
    point
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialRank {
    pub trial: u32,
    pub rank_f: usize,
    pub rank_g: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OriginRank {
    pub rank_f: usize,
    pub rank_g: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupZeroed {
    #[serde(with = "group_letter")]
    pub group: Group,
    pub rank_f: usize,
    pub rank_g: usize,
}

mod group_letter {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::mring::Group;

    pub fn serialize<S: Serializer>(g: &Group, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&g.letter().to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Group, D::Error> {
        let s = String::deserialize(d)?;
        Group::ALL
            .into_iter()
            .find(|g| g.letter().to_string() == s)
            .ok_or_else(|| D::Error::custom(format!("unknown group {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankVerdict {
    Maximal,
    Deficient,
}

/// Sampled ranks of `f` and `g`. Only `samples` decides the verdict; the
/// origin and single-group-zeroed ranks are diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankReport {
    pub characteristic: u64,
    pub seed: u64,
    pub expected_rank: usize,
    pub samples: Vec<TrialRank>,
    pub origin: OriginRank,
    pub group_zeroed: Vec<GroupZeroed>,
    pub verdict: RankVerdict,
}

/// Multiplicities of a candidate linear monad
/// `O(−1)^a → O^b → O(1)^c` on `P^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloystadInput {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub k: u64,
}

/// Existence test for linear monads on `P^k`:
/// `(b ≥ 2c + k − 1 and b ≥ a + c) or b ≥ a + c + k`.
pub fn floystad_check(inp: FloystadInput) -> bool {
    let FloystadInput { a, b, c, k } = inp;
    (b + 1 >= 2 * c + k && b >= a + c) || b >= a + c + k
}
