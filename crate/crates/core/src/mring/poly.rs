use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::{SerializeMap, SerializeSeq, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{MultiDegree, Variable};

/// A monomial stored as `(variable, exponent)` pairs sorted by variable, with
/// every exponent at least 1. The empty monomial is `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(Variable, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Variable) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (Variable, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<Variable, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn exponents(&self) -> &[(Variable, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: Variable) -> u32 {
        self.0.binary_search_by(|(w, _)| w.cmp(&v)).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn multidegree(&self) -> MultiDegree {
        let mut d = MultiDegree::ZERO;
        for (v, e) in &self.0 {
            d.0[v.group.slot()] += i64::from(*e);
        }
        d
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        // merge of two sorted lists
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with arbitrary-precision integer coefficients. Zero
/// coefficients are never stored, so the zero polynomial has no terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Polynomial::from_terms([(Monomial::one(), c.into())])
    }

    pub fn var(v: Variable) -> Self {
        Polynomial::from_terms([(Monomial::var(v), BigInt::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (mono, c) in terms {
            p.add_term(mono, c);
        }
        p
    }

    fn add_term(&mut self, mono: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn variables(&self) -> impl Iterator<Item = Variable> + '_ {
        self.terms.keys().flat_map(|m| m.exponents().iter().map(|&(v, _)| v))
    }

    /// Common multidegree of all terms; `None` for the zero polynomial or when
    /// the terms disagree.
    pub fn multidegree(&self) -> Option<MultiDegree> {
        let mut it = self.terms.keys().map(Monomial::multidegree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.exponents().is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

struct Exps<'a>(&'a Monomial);

impl Serialize for Exps<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.exponents().len()))?;
        for (v, e) in self.0.exponents() {
            map.serialize_entry(&v.to_string(), e)?;
        }
        map.end()
    }
}

struct Term<'a>(&'a Monomial, &'a BigInt);

impl Serialize for Term<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 2)?;
        st.serialize_field("coeff", &self.1.to_string())?;
        st.serialize_field("exps", &Exps(self.0))?;
        st.end()
    }
}

/// Serialized as a list of `{"coeff": "<decimal>", "exps": {"x0": 1, ...}}`
/// in canonical term order, with exponent keys in variable order.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&Term(m, c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct RawTerm {
            coeff: String,
            exps: BTreeMap<String, u32>,
        }
        let raw = Vec::<RawTerm>::deserialize(d)?;
        let mut p = Polynomial::zero();
        for t in raw {
            let c: BigInt = t.coeff.parse().map_err(|_| D::Error::custom(format!("bad coefficient {:?}", t.coeff)))?;
            let pairs = t
                .exps
                .iter()
                .map(|(name, &e)| name.parse::<Variable>().map(|v| (v, e)))
                .collect::<crate::Result<Vec<_>>>()
                .map_err(D::Error::custom)?;
            p.add_term(Monomial::from_pairs(pairs), c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Polynomial {
        Polynomial::var(Variable::x(i))
    }
    fn y(i: u32) -> Polynomial {
        Polynomial::var(Variable::y(i))
    }
    fn z(i: u32) -> Polynomial {
        Polynomial::var(Variable::z(i))
    }
    fn t(i: u32) -> Polynomial {
        Polynomial::var(Variable::t(i))
    }

    #[test]
    fn single_term_product() {
        let p = &x(0) * &y(0);
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.multidegree(), Some(MultiDegree::new(1, 1, 0, 0)));
        assert_eq!(p.to_string(), "x0*y0");
    }

    #[test]
    fn zero_absorbs() {
        let p = &x(0) + &z(2);
        assert!((&p * &Polynomial::zero()).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x(0) + &x(1)) * &(&x(0) - &x(1));
        let expected = &(&x(0) * &x(0)) - &(&x(1) * &x(1));
        assert_eq!(p, expected);
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn multidegree_examples() {
        assert_eq!((&x(0) * &y(1)).multidegree(), Some(MultiDegree::new(1, 1, 0, 0)));
        assert_eq!((&x(0) + &y(0)).multidegree(), None);
        assert_eq!((&z(2) * &t(0)).multidegree(), Some(MultiDegree::new(0, 0, 1, 1)));
        assert_eq!(Polynomial::zero().multidegree(), None);
        assert_eq!(Polynomial::constant(5).multidegree(), Some(MultiDegree::ZERO));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = &(&x(0) + &y(0)) - &x(0);
        assert_eq!(p, y(0));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn json_shape() {
        let p = &(&x(0) * &x(0)).scale(&BigInt::from(-3)) + &(&t(1) * &y(0));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"[{"coeff":"-3","exps":{"x0":2}},{"coeff":"1","exps":{"y0":1,"t1":1}}]"#);
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn json_rejects_garbage() {
        assert!(serde_json::from_str::<Polynomial>(r#"[{"coeff":"1.5","exps":{}}]"#).is_err());
        assert!(serde_json::from_str::<Polynomial>(r#"[{"coeff":"1","exps":{"q0":1}}]"#).is_err());
        assert!(serde_json::from_str::<Polynomial>(r#"[{"coeff":"1","exps":{},"x":1}]"#).is_err());
    }
}
