use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Matrix, GR};
use crate::error::Error;

/// Exponent vector of a monomial.
///
/// Ordered graded-lexicographically: lower total degree first, and within a
/// degree the lexicographically larger exponent vector first. For three
/// variables this lists `1, x, y, z, x², xy, xz, y², yz, z², …`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with Gaussian-rational coefficients.
///
/// Terms are kept sorted in [`Monomial`] order with nonzero coefficients,
/// so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(Monomial, GR)>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exponents: Vec<u32>,
    coeff: GR,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: GR) -> Self {
        Self::from_map(nvars, BTreeMap::from([(Monomial(vec![0; nvars]), c)]))
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GR::one())
    }

    /// The coordinate function `x_i`. Panics if `i >= nvars`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiPoly { nvars, terms: vec![(Monomial(e), GR::one())] }
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Vec<u32>, GR)>,
    {
        let mut map: BTreeMap<Monomial, GR> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Dimension { expected: nvars, got: e.len() });
            }
            let slot = map.entry(Monomial(e)).or_default();
            *slot = &*slot + &c;
        }
        Ok(Self::from_map(nvars, map))
    }

    fn from_map(nvars: usize, map: BTreeMap<Monomial, GR>) -> Self {
        let terms = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        MultiPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, GR)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.last().map_or(0, |(m, _)| m.degree())
    }

    pub fn coeff(&self, exponents: &[u32]) -> GR {
        let key = Monomial(exponents.to_vec());
        self.terms
            .binary_search_by(|(m, _)| m.cmp(&key))
            .map(|k| self.terms[k].1.clone())
            .unwrap_or_default()
    }

    fn check_same(&self, other: &Self) -> Result<(), Error> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::Dimension { expected: self.nvars, got: other.nvars })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check_same(other)?;
        let mut map: BTreeMap<Monomial, GR> = self.terms.iter().cloned().collect();
        for (m, c) in &other.terms {
            let slot = map.entry(m.clone()).or_default();
            *slot = &*slot + c;
        }
        Ok(Self::from_map(self.nvars, map))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-GR::one())
    }

    pub fn scale(&self, k: &GR) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_same(other)?;
        let mut map: BTreeMap<Monomial, GR> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                let slot = map.entry(Monomial(e)).or_default();
                *slot = &*slot + &(ca * cb);
            }
        }
        Ok(Self::from_map(self.nvars, map))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self).expect("same arity");
        }
        acc
    }

    pub fn eval(&self, point: &[GR]) -> Result<GR, Error> {
        if point.len() != self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: point.len() });
        }
        let max_deg = self.terms.iter().flat_map(|(m, _)| m.0.iter().copied()).max().unwrap_or(0);
        // powers[i][k] = point[i]^k
        let powers: Vec<Vec<GR>> = point
            .iter()
            .map(|x| {
                let mut v = Vec::with_capacity(max_deg as usize + 1);
                v.push(GR::one());
                for k in 1..=max_deg as usize {
                    let next = &v[k - 1] * x;
                    v.push(next);
                }
                v
            })
            .collect();
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(c.clone(), |acc, (i, &e)| &acc * &powers[i][e as usize])
            })
            .sum())
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut map = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            map.insert(Monomial(exps), c * &GR::from_int(e as i64));
        }
        Self::from_map(self.nvars, map)
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// Substitutes `subs[i]` for variable `i`. All substituted polynomials
    /// must share one arity, which becomes the arity of the result.
    pub fn substitute(&self, subs: &[MultiPoly]) -> Result<Self, Error> {
        if subs.len() != self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: subs.len() });
        }
        let out_vars = match subs.first() {
            Some(s) => s.nvars,
            None => return Ok(MultiPoly::constant(0, self.coeff(&[]))),
        };
        if let Some(bad) = subs.iter().find(|s| s.nvars != out_vars) {
            return Err(Error::Dimension { expected: out_vars, got: bad.nvars });
        }
        let mut cache: Vec<Vec<MultiPoly>> = subs.iter().map(|s| vec![MultiPoly::one(s.nvars), s.clone()]).collect();
        let mut acc = MultiPoly::zero(out_vars);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(out_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul(&subs[i])?;
                    cache[i].push(next);
                }
                term = term.mul(&cache[i][e as usize])?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// `g(v) = f(map·v + offset)`; `map` has one row per variable of `f`.
    pub fn affine_compose(&self, map: &Matrix, offset: &[GR]) -> Result<Self, Error> {
        if map.rows() != self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: map.rows() });
        }
        if offset.len() != self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: offset.len() });
        }
        let m = map.cols();
        let subs: Vec<MultiPoly> = (0..self.nvars)
            .map(|r| {
                let terms = (0..m)
                    .map(|c| {
                        let mut e = vec![0; m];
                        e[c] = 1;
                        (e, map[(r, c)].clone())
                    })
                    .chain(std::iter::once((vec![0; m], offset[r].clone())));
                MultiPoly::from_terms(m, terms).expect("arity")
            })
            .collect();
        self.substitute(&subs)
    }

    /// Groups terms by the exponents of the last `outer` variables. Each
    /// value is the coefficient polynomial in the remaining variables.
    pub fn split_outer(&self, outer: usize) -> BTreeMap<Vec<u32>, MultiPoly> {
        assert!(outer <= self.nvars);
        let inner = self.nvars - outer;
        let mut groups: BTreeMap<Vec<u32>, Vec<(Vec<u32>, GR)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups
                .entry(m.0[inner..].to_vec())
                .or_default()
                .push((m.0[..inner].to_vec(), c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, ts)| (k, MultiPoly::from_terms(inner, ts).expect("arity")))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr { exponents: m.0.clone(), coeff: c.clone() })
            .collect();
        serde_json::to_value(terms).expect("serializable")
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·x{}", i + 1)?,
                    _ => write!(f, "·x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// Free-function forms of the core polynomial operations.
pub fn poly_eval(f: &MultiPoly, p: &[GR]) -> Result<GR, Error> {
    f.eval(p)
}

pub fn poly_gradient(f: &MultiPoly) -> Vec<MultiPoly> {
    f.gradient()
}

pub fn poly_affine_compose(f: &MultiPoly, map: &Matrix, offset: &[GR]) -> Result<MultiPoly, Error> {
    f.affine_compose(map, offset)
}
