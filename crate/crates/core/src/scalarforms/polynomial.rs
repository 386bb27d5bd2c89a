//! Sparse multivariate polynomials over the Gaussian rationals.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::scalar::GaussianRational;
use super::variable::Variable;

/// A power product `Π v^e`, stored sorted by variable with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Variable, u32)>,
    degree: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Variable) -> Self {
        Monomial {
            factors: vec![(v, 1)],
            degree: 1,
        }
    }

    pub fn from_factors<I: IntoIterator<Item = (Variable, u32)>>(it: I) -> Self {
        let mut map: BTreeMap<Variable, u32> = BTreeMap::new();
        for (v, e) in it {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        let degree = map.values().sum();
        Monomial {
            factors: map.into_iter().collect(),
            degree,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Variable, u32)] {
        &self.factors
    }

    pub fn exponent(&self, v: Variable) -> u32 {
        self.factors
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial {
            factors: out,
            degree: self.degree + other.degree,
        }
    }

    /// `∂/∂v` of the monomial as `(exponent, m / v)`; `None` if `v` is absent.
    pub fn derivative(&self, v: Variable) -> Option<(u32, Monomial)> {
        let idx = self.factors.binary_search_by(|(w, _)| w.cmp(&v)).ok()?;
        let e = self.factors[idx].1;
        let mut factors = self.factors.clone();
        if e == 1 {
            factors.remove(idx);
        } else {
            factors[idx].1 = e - 1;
        }
        Some((
            e,
            Monomial {
                factors,
                degree: self.degree - 1,
            },
        ))
    }
}

/// Graded lexicographic: higher total degree is greater; ties are broken by
/// the exponent of the smallest variable where the two differ.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree.cmp(&other.degree) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (a, b) = (&self.factors, &other.factors);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match a[i].1.cmp(&b[j].1) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    ord => return ord,
                },
            }
        }
        // equal degree and an exhausted side means both are exhausted
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Polynomial with no stored zero coefficients; the map order is the monomial
/// order, so two equal polynomials have identical representations.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Polynomial {
    pub fn constant(c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    pub fn var(v: Variable) -> Self {
        Polynomial::monomial(GaussianRational::one(), Monomial::var(v))
    }

    pub fn monomial(c: GaussianRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussianRational)>>(it: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coefficient(&Monomial::one())
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map(|m| m.degree()).unwrap_or(0)
    }

    /// Smallest degree of a stored term, `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| *v))
            .collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Polynomial) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Polynomial) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), &-c);
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Product keeping only monomials of degree `≤ max_degree` when given.
    pub fn mul_trunc(&self, other: &Polynomial, max_degree: Option<u32>) -> Polynomial {
        let mut out = Polynomial::zero();
        if self.is_zero() || other.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(d) = max_degree {
                    if ma.degree() + mb.degree() > d {
                        // terms are sorted by degree
                        break;
                    }
                }
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Keeps monomials of degree `≤ d`.
    pub fn truncate(&self, d: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Degree-`d` homogeneous component.
    pub fn homogeneous(&self, d: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn partial(&self, v: Variable) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.derivative(v) {
                out.add_term(rest, &(c * &GaussianRational::from_integer(e as i64)));
            }
        }
        out
    }

    /// Replaces variables present in `map` by polynomials, truncating the
    /// result to degree `≤ max_degree` when given. Unmapped variables stay.
    pub fn substitute(
        &self,
        map: &BTreeMap<Variable, Polynomial>,
        max_degree: Option<u32>,
    ) -> Polynomial {
        let mut out = Polynomial::zero();
        let mut powers: BTreeMap<(Variable, u32), Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            for &(v, e) in m.factors() {
                let factor = match map.get(&v) {
                    Some(p) => powers
                        .entry((v, e))
                        .or_insert_with(|| {
                            let mut acc = Polynomial::one();
                            for _ in 0..e {
                                acc = acc.mul_trunc(p, max_degree);
                            }
                            acc
                        })
                        .clone(),
                    None => Polynomial::monomial(
                        GaussianRational::one(),
                        Monomial::from_factors([(v, e)]),
                    ),
                };
                term = term.mul_trunc(&factor, max_degree);
                if term.is_zero() {
                    break;
                }
            }
            out.add_assign_ref(&term);
        }
        out
    }

    /// Evaluates at an assignment; unassigned variables count as zero.
    pub fn evaluate(&self, at: &BTreeMap<Variable, GaussianRational>) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let x = at.get(&v).cloned().unwrap_or_else(GaussianRational::zero);
                for _ in 0..e {
                    t = &t * &x;
                }
            }
            acc += &t;
        }
        acc
    }

    /// Renames variables; the map must be injective on the variables present.
    pub fn rename(&self, map: &BTreeMap<Variable, Variable>) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| {
            (
                Monomial::from_factors(
                    m.factors()
                        .iter()
                        .map(|&(v, e)| (*map.get(&v).unwrap_or(&v), e)),
                ),
                c.clone(),
            )
        }))
    }
}

impl Zero for Polynomial {
    fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Polynomial {
    fn one() -> Self {
        Polynomial::constant(GaussianRational::one())
    }
}

impl From<GaussianRational> for Polynomial {
    fn from(c: GaussianRational) -> Self {
        Polynomial::constant(c)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_trunc(rhs, None)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self.sub_assign_ref(&rhs);
        self
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.clone().neg()
    }
}

/// Canonical text, monomials in decreasing order. Parsing the output gives
/// back the same polynomial.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.leading_negative();
            let mag = if negative { -c } else { c.clone() };
            match (k == 0, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            let compound = !mag.re().is_zero() && !mag.im().is_zero();
            if m.is_one() {
                if compound {
                    write!(f, "({})", mag)?;
                } else {
                    write!(f, "{}", mag)?;
                }
            } else if mag.is_one() {
                write!(f, "{}", m)?;
            } else if compound {
                write!(f, "({})*{}", mag, m)?;
            } else {
                write!(f, "{}*{}", mag, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: u32) -> Polynomial {
        Polynomial::var(Variable::Param(n))
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::from_factors([(Variable::Param(1), 2)]);
        let b = Monomial::from_factors([(Variable::Param(1), 1), (Variable::Param(2), 1)]);
        let c = Monomial::from_factors([(Variable::Param(2), 3)]);
        assert!(a > b);
        assert!(c > a);
        assert!(Monomial::var(Variable::Param(1)) > Monomial::var(Variable::Param(2)));
    }

    #[test]
    fn ring_basics() {
        let p = &x(1) + &x(2);
        let sq = &p * &p;
        let expect = &(&(&x(1) * &x(1)) + &(&x(1) * &x(2)).scale(&2.into())) + &(&x(2) * &x(2));
        assert_eq!(sq, expect);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn truncated_product_drops_high_degree() {
        let p = &x(1) + &Polynomial::one();
        let q = p.pow(3).truncate(1);
        assert_eq!(q, &x(1).scale(&3.into()) + &Polynomial::one());
        assert_eq!(p.pow(2).mul_trunc(&p, Some(1)), q);
    }

    #[test]
    fn substitution() {
        let mut map = BTreeMap::new();
        map.insert(Variable::Param(1), &x(2) + &Polynomial::one());
        let p = &x(1) * &x(1);
        assert_eq!(p.substitute(&map, None), (&x(2) + &Polynomial::one()).pow(2));
    }

    #[test]
    fn printing() {
        let p = &(&x(1) * &x(1)).scale(&GaussianRational::from_ratio(-3, 2))
            + &x(2).scale(&GaussianRational::from_parts((1, 1), (1, 1)));
        assert_eq!(p.to_string(), "-3/2*x1^2 + (1+i)*x2");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }
}
