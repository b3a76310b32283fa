//! Exact multigraded polynomial arithmetic over the coordinate ring of
//! `X = Pⁿ × Pⁿ × Pᵐ × Pᵐ`.
//!
//! The four coordinate groups are `x₀..xₙ`, `y₀..yₙ`, `z₀..zₘ`, `t₀..tₘ`; a
//! monomial's multidegree counts the total exponent in each group, in that
//! order.

mod field;
mod matrix;
mod poly;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use field::{FieldMatrix, PrimeField, MERSENNE_31, PRIME_1E9_7};
pub use matrix::PolyMatrix;
pub use poly::{Monomial, Polynomial};

/// Dimensions of the ambient product and the width `k` of the monad.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpaceParams {
    n: u32,
    m: u32,
    k: u32,
}

impl SpaceParams {
    pub fn new(n: u32, m: u32, k: u32) -> Result<Self> {
        if n == 0 || m == 0 || k == 0 {
            return Err(Error::InvalidParams { n, m, k });
        }
        Ok(SpaceParams { n, m, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `dim X = 2n + 2m`.
    pub fn dim(&self) -> usize {
        2 * self.n as usize + 2 * self.m as usize
    }

    /// Dimensions of the four projective factors, in grading order.
    pub fn factor_dims(&self) -> [u32; 4] {
        [self.n, self.n, self.m, self.m]
    }

    /// Largest admissible index for variables of `group`.
    pub fn max_index(&self, group: Group) -> u32 {
        self.factor_dims()[group.slot()]
    }

    /// Every parameter triple with entries in `1..=bound`, in lexicographic order.
    pub fn grid(bound: u32) -> impl Iterator<Item = SpaceParams> {
        (1..=bound).flat_map(move |n| (1..=bound).flat_map(move |m| (1..=bound).map(move |k| SpaceParams { n, m, k })))
    }
}

impl<'de> Deserialize<'de> for SpaceParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            n: u32,
            m: u32,
            k: u32,
        }
        let raw = Raw::deserialize(d)?;
        SpaceParams::new(raw.n, raw.m, raw.k).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for SpaceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, m={}, k={})", self.n, self.m, self.k)
    }
}

/// Coordinate group. The derived order `X < Y < Z < T` is the canonical
/// variable order used for term storage and serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    X,
    Y,
    Z,
    T,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::X, Group::Y, Group::Z, Group::T];

    /// Position of this group in a [`MultiDegree`].
    pub fn slot(self) -> usize {
        match self {
            Group::X => 0,
            Group::Y => 1,
            Group::Z => 2,
            Group::T => 3,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Group::X => 'x',
            Group::Y => 'y',
            Group::Z => 'z',
            Group::T => 't',
        }
    }

    /// Unit multidegree of a single variable of this group.
    pub fn unit(self) -> MultiDegree {
        let mut d = [0; 4];
        d[self.slot()] = 1;
        MultiDegree(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub group: Group,
    pub index: u32,
}

impl Variable {
    pub fn new(group: Group, index: u32) -> Self {
        Variable { group, index }
    }

    pub fn x(index: u32) -> Self {
        Variable::new(Group::X, index)
    }

    pub fn y(index: u32) -> Self {
        Variable::new(Group::Y, index)
    }

    pub fn z(index: u32) -> Self {
        Variable::new(Group::Z, index)
    }

    pub fn t(index: u32) -> Self {
        Variable::new(Group::T, index)
    }

    pub fn is_valid_for(&self, params: &SpaceParams) -> bool {
        self.index <= params.max_index(self.group)
    }

    /// All variables of `X` in canonical order.
    pub fn all(params: &SpaceParams) -> Vec<Variable> {
        Group::ALL.iter().flat_map(|&g| (0..=params.max_index(g)).map(move |i| Variable::new(g, i))).collect()
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.group.letter(), self.index)
    }
}

impl FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        let group = match chars.next() {
            Some('x') => Group::X,
            Some('y') => Group::Y,
            Some('z') => Group::Z,
            Some('t') => Group::T,
            _ => return Err(Error::Parse(format!("bad variable name {s:?}"))),
        };
        let rest = chars.as_str();
        // reject signs and leading zeros so that names round-trip exactly
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || (rest.len() > 1 && rest.starts_with('0')) {
            return Err(Error::Parse(format!("bad variable name {s:?}")));
        }
        let index = rest.parse().map_err(|_| Error::Parse(format!("bad variable index in {s:?}")))?;
        Ok(Variable { group, index })
    }
}

/// A class `(a, b, c, d)` in `Pic(X) ≅ ℤ⁴`, i.e. the line bundle `O_X(a,b,c,d)`.
/// Also used for twist vectors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(pub [i64; 4]);

impl MultiDegree {
    pub const ZERO: MultiDegree = MultiDegree([0; 4]);

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        MultiDegree([a, b, c, d])
    }

    /// `(v, v, v, v)`.
    pub fn splat(v: i64) -> Self {
        MultiDegree([v; 4])
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn has_negative_component(&self) -> bool {
        self.0.iter().any(|&c| c < 0)
    }

    pub fn scale(self, s: i64) -> Self {
        MultiDegree(self.0.map(|c| c * s))
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl FromStr for MultiDegree {
    type Err = Error;

    /// Parses `a,b,c,d`, optionally wrapped in parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<i64> = inner
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("bad multidegree {s:?}: {e}")))?;
        let arr: [i64; 4] =
            parts.try_into().map_err(|_| Error::Parse(format!("multidegree {s:?} must have four components")))?;
        Ok(MultiDegree(arr))
    }
}

impl Add for MultiDegree {
    type Output = MultiDegree;
    fn add(self, rhs: MultiDegree) -> MultiDegree {
        MultiDegree(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for MultiDegree {
    fn add_assign(&mut self, rhs: MultiDegree) {
        *self = *self + rhs;
    }
}

impl Sub for MultiDegree {
    type Output = MultiDegree;
    fn sub(self, rhs: MultiDegree) -> MultiDegree {
        self + (-rhs)
    }
}

impl Neg for MultiDegree {
    type Output = MultiDegree;
    fn neg(self) -> MultiDegree {
        MultiDegree(self.0.map(|c| -c))
    }
}

impl Mul<MultiDegree> for i64 {
    type Output = MultiDegree;
    fn mul(self, rhs: MultiDegree) -> MultiDegree {
        rhs.scale(self)
    }
}

impl std::iter::Sum for MultiDegree {
    fn sum<I: Iterator<Item = MultiDegree>>(iter: I) -> Self {
        iter.fold(MultiDegree::ZERO, Add::add)
    }
}
