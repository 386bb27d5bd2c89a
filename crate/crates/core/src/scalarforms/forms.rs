//! Polynomial differential one- and two-forms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use super::polynomial::{Monomial, Polynomial};
use super::scalar::GaussianRational;
use super::variable::Variable;
use crate::error::{Error, Result};

/// `Σ a_v dv`; identically-zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct OneForm {
    coeffs: BTreeMap<Variable, Polynomial>,
}

/// `Σ_{u<v} a_{uv} du∧dv`, stored with ordered pairs only so antisymmetry
/// holds by construction.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct TwoForm {
    coeffs: BTreeMap<(Variable, Variable), Polynomial>,
}

impl OneForm {
    /// `dv`.
    pub fn basis(v: Variable) -> Self {
        OneForm::term(v, Polynomial::one())
    }

    pub fn term(v: Variable, a: Polynomial) -> Self {
        let mut coeffs = BTreeMap::new();
        if !a.is_zero() {
            coeffs.insert(v, a);
        }
        OneForm { coeffs }
    }

    pub fn coefficient(&self, v: Variable) -> Polynomial {
        self.coeffs.get(&v).cloned().unwrap_or_else(Polynomial::zero)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Variable, &Polynomial)> {
        self.coeffs.iter()
    }

    pub fn add_term(&mut self, v: Variable, a: &Polynomial) {
        if a.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(v).or_insert_with(Polynomial::zero);
        slot.add_assign_ref(a);
        if slot.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn add_assign_ref(&mut self, other: &OneForm) {
        for (v, a) in &other.coeffs {
            self.add_term(*v, a);
        }
    }

    /// `p · self`, truncating coefficients to degree `≤ max_degree`.
    pub fn mul_poly(&self, p: &Polynomial, max_degree: Option<u32>) -> OneForm {
        let mut out = OneForm::zero();
        for (v, a) in &self.coeffs {
            out.add_term(*v, &p.mul_trunc(a, max_degree));
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> OneForm {
        let mut out = OneForm::zero();
        for (v, a) in &self.coeffs {
            out.add_term(*v, &a.scale(c));
        }
        out
    }

    /// Keeps coefficient monomials of degree `≤ d`.
    pub fn truncate(&self, d: u32) -> OneForm {
        let mut out = OneForm::zero();
        for (v, a) in &self.coeffs {
            out.add_term(*v, &a.truncate(d));
        }
        out
    }

    /// Coefficient-degree-`d` component.
    pub fn homogeneous(&self, d: u32) -> OneForm {
        let mut out = OneForm::zero();
        for (v, a) in &self.coeffs {
            out.add_term(*v, &a.homogeneous(d));
        }
        out
    }

    /// Exterior derivative `d(Σ a_v dv) = Σ ∂a_v/∂u du∧dv`.
    pub fn exterior_derivative(&self) -> TwoForm {
        let mut out = TwoForm::zero();
        for (v, a) in &self.coeffs {
            for u in a.variables() {
                out.add_wedge_term(u, *v, &a.partial(u));
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.exterior_derivative().is_zero()
    }

    /// Pulls back along `v ↦ map[v]`; every variable carrying a coefficient
    /// must be mapped. Coefficients are truncated to degree `≤ max_degree`.
    pub fn pullback(&self, map: &BTreeMap<Variable, Polynomial>, max_degree: Option<u32>) -> OneForm {
        let mut out = OneForm::zero();
        for (v, a) in &self.coeffs {
            let image = map
                .get(v)
                .cloned()
                .unwrap_or_else(|| Polynomial::var(*v));
            let a_star = a.substitute(map, max_degree);
            out.add_assign_ref(&exterior_derivative(&image).mul_poly(&a_star, max_degree));
        }
        out
    }

    /// Largest coefficient degree present.
    pub fn degree(&self) -> u32 {
        self.coeffs.values().map(|a| a.degree()).max().unwrap_or(0)
    }

    /// First nonzero coefficient in variable order.
    pub fn first_nonzero(&self) -> Option<(Variable, Polynomial)> {
        self.coeffs.iter().next().map(|(v, a)| (*v, a.clone()))
    }
}

impl Zero for OneForm {
    fn zero() -> Self {
        OneForm {
            coeffs: BTreeMap::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl TwoForm {
    /// Adds `a du∧dv`, reordering the pair (with a sign) when `u > v`.
    pub fn add_wedge_term(&mut self, u: Variable, v: Variable, a: &Polynomial) {
        if u == v || a.is_zero() {
            return;
        }
        let (key, a) = if u < v { ((u, v), a.clone()) } else { ((v, u), -a) };
        let slot = self.coeffs.entry(key).or_insert_with(Polynomial::zero);
        slot.add_assign_ref(&a);
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    /// Coefficient of `u∧v`; `coefficient(v,u) = -coefficient(u,v)`.
    pub fn coefficient(&self, u: Variable, v: Variable) -> Polynomial {
        match u.cmp(&v) {
            std::cmp::Ordering::Equal => Polynomial::zero(),
            std::cmp::Ordering::Less => self.coeffs.get(&(u, v)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => -self.coeffs.get(&(v, u)).cloned().unwrap_or_default(),
        }
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&(Variable, Variable), &Polynomial)> {
        self.coeffs.iter()
    }

    pub fn add_assign_ref(&mut self, other: &TwoForm) {
        for ((u, v), a) in &other.coeffs {
            self.add_wedge_term(*u, *v, a);
        }
    }

    pub fn truncate(&self, d: u32) -> TwoForm {
        let mut out = TwoForm::zero();
        for ((u, v), a) in &self.coeffs {
            out.add_wedge_term(*u, *v, &a.truncate(d));
        }
        out
    }

    pub fn first_nonzero(&self) -> Option<((Variable, Variable), Polynomial)> {
        self.coeffs.iter().next().map(|(k, a)| (*k, a.clone()))
    }

    /// Pullback along `v ↦ map[v]`.
    pub fn pullback(&self, map: &BTreeMap<Variable, Polynomial>, max_degree: Option<u32>) -> TwoForm {
        let mut out = TwoForm::zero();
        for ((u, v), a) in &self.coeffs {
            let du = exterior_derivative(&map.get(u).cloned().unwrap_or_else(|| Polynomial::var(*u)));
            let dv = exterior_derivative(&map.get(v).cloned().unwrap_or_else(|| Polynomial::var(*v)));
            let a_star = a.substitute(map, max_degree);
            let w = wedge_trunc(&du.mul_poly(&a_star, max_degree), &dv, max_degree);
            out.add_assign_ref(&w);
        }
        out
    }
}

impl Zero for TwoForm {
    fn zero() -> Self {
        TwoForm {
            coeffs: BTreeMap::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// `dp = Σ ∂p/∂v dv`.
pub fn exterior_derivative(p: &Polynomial) -> OneForm {
    let mut out = OneForm::zero();
    for v in p.variables() {
        out.add_term(v, &p.partial(v));
    }
    out
}

/// `a ∧ b`.
pub fn wedge(a: &OneForm, b: &OneForm) -> TwoForm {
    wedge_trunc(a, b, None)
}

/// `a ∧ b` keeping coefficient monomials of degree `≤ max_degree`.
pub fn wedge_trunc(a: &OneForm, b: &OneForm, max_degree: Option<u32>) -> TwoForm {
    let mut out = TwoForm::zero();
    for (u, p) in &a.coeffs {
        for (v, q) in &b.coeffs {
            if u != v {
                out.add_wedge_term(*u, *v, &p.mul_trunc(q, max_degree));
            }
        }
    }
    out
}

/// Solves `dF = form` with `F(0) = 0` by the radial homotopy: each
/// coefficient monomial `c·m` of degree `k` in front of `dv` contributes
/// `c·m·v/(k+1)`.
pub fn radial_integrate(form: &OneForm) -> Result<Polynomial> {
    let d = form.exterior_derivative();
    if let Some(((u, v), a)) = d.first_nonzero() {
        return Err(Error::NotClosed {
            witness: format!("coefficient of d{}∧d{} is {}", u, v, a),
        });
    }
    let mut out = Polynomial::zero();
    for (v, a) in &form.coeffs {
        for (m, c) in a.terms() {
            let scale = GaussianRational::from_ratio(1, m.degree() as i64 + 1);
            out.add_term(m.mul(&Monomial::var(*v)), &(c * &scale));
        }
    }
    Ok(out)
}

impl Add for OneForm {
    type Output = OneForm;
    fn add(mut self, rhs: OneForm) -> OneForm {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for OneForm {
    type Output = OneForm;
    fn sub(mut self, rhs: OneForm) -> OneForm {
        self.add_assign_ref(&-rhs);
        self
    }
}

impl<'a> Add<&'a OneForm> for &'a OneForm {
    type Output = OneForm;
    fn add(self, rhs: &OneForm) -> OneForm {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Sub<&'a OneForm> for &'a OneForm {
    type Output = OneForm;
    fn sub(self, rhs: &OneForm) -> OneForm {
        let mut out = self.clone();
        out.add_assign_ref(&-rhs);
        out
    }
}

impl Neg for OneForm {
    type Output = OneForm;
    fn neg(self) -> OneForm {
        OneForm {
            coeffs: self.coeffs.into_iter().map(|(v, a)| (v, -a)).collect(),
        }
    }
}

impl Neg for &OneForm {
    type Output = OneForm;
    fn neg(self) -> OneForm {
        self.clone().neg()
    }
}

impl Add for TwoForm {
    type Output = TwoForm;
    fn add(mut self, rhs: TwoForm) -> TwoForm {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Neg for TwoForm {
    type Output = TwoForm;
    fn neg(self) -> TwoForm {
        TwoForm {
            coeffs: self.coeffs.into_iter().map(|(k, a)| (k, -a)).collect(),
        }
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (v, a)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*d{}", a, v)?;
        }
        Ok(())
    }
}

impl fmt::Debug for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, ((u, v), a)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*d{}^d{}", a, u, v)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TwoForm {
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
    fn dx(n: u32) -> OneForm {
        OneForm::basis(Variable::Param(n))
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        assert!(exterior_derivative(&Polynomial::constant(5.into())).is_zero());
    }

    #[test]
    fn product_rule_on_monomial() {
        let d = exterior_derivative(&(&x(1) * &x(2)));
        let expect = OneForm::term(Variable::Param(1), x(2)) + OneForm::term(Variable::Param(2), x(1));
        assert_eq!(d, expect);
    }

    #[test]
    fn d_squared_vanishes_on_square() {
        let d = exterior_derivative(&(&x(1) * &x(1)));
        assert_eq!(d, OneForm::term(Variable::Param(1), x(1).scale(&2.into())));
        assert!(d.exterior_derivative().is_zero());
    }

    #[test]
    fn wedge_sign_rules() {
        assert!(wedge(&dx(1), &dx(1)).is_zero());
        let w = wedge(&dx(1), &dx(2));
        assert_eq!(w.coefficient(Variable::Param(1), Variable::Param(2)), Polynomial::one());
        let w = wedge(&dx(2), &dx(1));
        assert_eq!(w.coefficient(Variable::Param(1), Variable::Param(2)), -Polynomial::one());
    }

    #[test]
    fn wedge_bilinear_example() {
        // (x dy) ∧ (y dx) = -xy dx∧dy
        let a = OneForm::term(Variable::Param(2), x(1));
        let b = OneForm::term(Variable::Param(1), x(2));
        let w = wedge(&a, &b);
        assert_eq!(w.coefficient(Variable::Param(1), Variable::Param(2)), -(&x(1) * &x(2)));
    }

    #[test]
    fn radial_integration() {
        assert!(radial_integrate(&OneForm::zero()).unwrap().is_zero());
        let form = OneForm::term(Variable::Param(1), x(2)) + OneForm::term(Variable::Param(2), x(1));
        assert_eq!(radial_integrate(&form).unwrap(), &x(1) * &x(2));
        let open = OneForm::term(Variable::Param(1), x(2));
        assert!(matches!(radial_integrate(&open), Err(Error::NotClosed { .. })));
    }
}
