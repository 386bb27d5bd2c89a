//! The classical contact system and the coupled matrix-valued contact
//! systems on the submanifold `W` of blocks `Y_{j+1,j}`, `Y_{j+2,j}`.
//!
//! Contact coordinates are `x<i>` ([`Variable::Param`]), `y<i>`
//! ([`Variable::Dual`]) and `z` ([`Variable::Height`]), with contact form
//! `ω = dz + Σ x_i dy_i`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hodgedomain::HodgeNumbers;
use crate::linalg::{product, Matrix};
use crate::nilalgebra::{complete_group, BlockMatrix};
use crate::scalarforms::{
    exterior_derivative, parse_polynomial, parse_variable, wedge, OneForm, ParseContext, Polynomial,
    TwoForm, Variable,
};

/// A form attached to entry `(r, c)` of block `(i, j)`.
pub type Located<F> = ((usize, usize), (usize, usize), F);

pub fn contact_form(n: u32) -> OneForm {
    let mut omega = OneForm::basis(Variable::Height);
    for i in 1..=n {
        omega.add_term(Variable::Dual(i), &Polynomial::var(Variable::Param(i)));
    }
    omega
}

/// A partition `I + J = {1..n}`: `x_i` (`i ∈ I`) and `y_j` (`j ∈ J`) are the
/// free coordinates of an Arnold chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub i: BTreeSet<u32>,
    pub j: BTreeSet<u32>,
}

impl Partition {
    pub fn new(n: u32, i: BTreeSet<u32>, j: BTreeSet<u32>) -> Result<Self> {
        if let Some(x) = i.intersection(&j).next() {
            return Err(Error::Invalid(format!("partition is not disjoint: {} in both I and J", x)));
        }
        for x in 1..=n {
            if !i.contains(&x) && !j.contains(&x) {
                return Err(Error::Invalid(format!("partition misses index {}", x)));
            }
        }
        if let Some(x) = i.iter().chain(&j).find(|&&x| x == 0 || x > n) {
            return Err(Error::Invalid(format!("index {} outside 1..{}", x, n)));
        }
        Ok(Partition { i, j })
    }

    /// The partition with `I = mask` bits (bit `t` ↔ index `t+1`).
    pub fn from_mask(n: u32, mask: u32) -> Self {
        let i = (1..=n).filter(|t| mask & (1 << (t - 1)) != 0).collect();
        let j = (1..=n).filter(|t| mask & (1 << (t - 1)) == 0).collect();
        Partition { i, j }
    }

    pub fn free_variables(&self) -> Vec<Variable> {
        let mut out: Vec<Variable> = self.i.iter().map(|&t| Variable::Param(t)).collect();
        out.extend(self.j.iter().map(|&t| Variable::Dual(t)));
        out
    }
}

/// A parameterized submanifold of contact space: every coordinate as a
/// polynomial in the declared free coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactChart {
    pub n: u32,
    pub free: Vec<Variable>,
    pub coords: BTreeMap<Variable, Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactChartJson {
    pub n: u32,
    pub free: Vec<String>,
    pub coords: BTreeMap<String, String>,
}

impl ContactChart {
    pub fn coordinates(n: u32) -> Vec<Variable> {
        let mut out: Vec<Variable> = (1..=n).map(Variable::Param).collect();
        out.extend((1..=n).map(Variable::Dual));
        out.push(Variable::Height);
        out
    }

    pub fn from_json(json: &ContactChartJson) -> Result<Self> {
        let ctx = ParseContext::contact(json.n);
        let free = json
            .free
            .iter()
            .map(|s| parse_variable(s, &ctx))
            .collect::<Result<Vec<_>>>()?;
        let mut coords = BTreeMap::new();
        for (k, v) in &json.coords {
            coords.insert(parse_variable(k, &ctx)?, parse_polynomial(v, &ctx)?);
        }
        let chart = ContactChart {
            n: json.n,
            free,
            coords,
        };
        chart.validate()?;
        Ok(chart)
    }

    pub fn to_json(&self) -> ContactChartJson {
        ContactChartJson {
            n: self.n,
            free: self.free.iter().map(|v| v.to_string()).collect(),
            coords: self
                .coords
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        let allowed: BTreeSet<Variable> = self.free.iter().copied().collect();
        for (k, p) in &self.coords {
            if let Some(bad) = p.variables().into_iter().find(|v| !allowed.contains(v)) {
                return Err(Error::Invalid(format!(
                    "coordinate {} depends on {}, which is not declared free",
                    k, bad
                )));
            }
        }
        Ok(())
    }

    /// Coordinate `v` as a polynomial in the free variables; undeclared
    /// coordinates are identically zero.
    pub fn coordinate(&self, v: Variable) -> Polynomial {
        self.coords.get(&v).cloned().unwrap_or_else(Polynomial::zero)
    }
}

/// Arnold's parameterization: for `f(x_I, y_J)`,
/// `y_i = ∂f/∂x_i`, `x_j = -∂f/∂y_j`, `z = f - Σ_{i∈I} x_i ∂f/∂x_i`.
pub fn arnold_chart(n: u32, partition: &Partition, f: &Polynomial) -> Result<ContactChart> {
    let free = partition.free_variables();
    if let Some(bad) = f.variables().into_iter().find(|v| !free.contains(v)) {
        return Err(Error::Invalid(format!(
            "generating function mentions {}, which is not free for this partition",
            bad
        )));
    }
    let mut coords = BTreeMap::new();
    let mut z = f.clone();
    for &i in &partition.i {
        let xi = Variable::Param(i);
        let fi = f.partial(xi);
        z.sub_assign_ref(&(&Polynomial::var(xi) * &fi));
        coords.insert(xi, Polynomial::var(xi));
        coords.insert(Variable::Dual(i), fi);
    }
    for &j in &partition.j {
        let yj = Variable::Dual(j);
        coords.insert(Variable::Param(j), -f.partial(yj));
        coords.insert(yj, Polynomial::var(yj));
    }
    coords.insert(Variable::Height, z);
    let chart = ContactChart { n, free, coords };
    let report = verify_contact_chart(&chart);
    if !report.is_integral {
        return Err(Error::Constraint(format!(
            "Arnold chart is not integral: {}",
            report.witness.unwrap_or_default()
        )));
    }
    Ok(chart)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContactReport {
    pub is_integral: bool,
    pub omega_vanishes: bool,
    pub domega_vanishes: bool,
    pub disjoint_free_indices: bool,
    pub witness: Option<String>,
}

/// Pulls `ω` and `dω` back to the chart's free variables and checks that
/// the free `x` and `y` indices are disjoint.
pub fn verify_contact_chart(chart: &ContactChart) -> ContactReport {
    let map: BTreeMap<Variable, Polynomial> = ContactChart::coordinates(chart.n)
        .into_iter()
        .map(|v| (v, chart.coordinate(v)))
        .collect();
    let omega = contact_form(chart.n).pullback(&map, None);
    let mut domega = TwoForm::zero();
    for i in 1..=chart.n {
        let dx = exterior_derivative(&map[&Variable::Param(i)]);
        let dy = exterior_derivative(&map[&Variable::Dual(i)]);
        domega.add_assign_ref(&wedge(&dx, &dy));
    }
    let xs: BTreeSet<u32> = chart
        .free
        .iter()
        .filter_map(|v| if let Variable::Param(i) = v { Some(*i) } else { None })
        .collect();
    let ys: BTreeSet<u32> = chart
        .free
        .iter()
        .filter_map(|v| if let Variable::Dual(i) = v { Some(*i) } else { None })
        .collect();
    let clash = xs.intersection(&ys).next().copied();
    let z_free = chart.free.contains(&Variable::Height);

    let mut witness = None;
    if let Some((v, a)) = omega.first_nonzero() {
        witness = Some(format!("pullback of ω: coefficient of d{} is {}", v, a));
    } else if let Some(((u, v), a)) = domega.first_nonzero() {
        witness = Some(format!("pullback of dω: coefficient of d{}∧d{} is {}", u, v, a));
    } else if let Some(i) = clash {
        witness = Some(format!("x{} and y{} are both free", i, i));
    } else if z_free {
        witness = Some("z is declared free".into());
    }
    let disjoint = clash.is_none() && !z_free;
    ContactReport {
        is_integral: omega.is_zero() && domega.is_zero() && disjoint,
        omega_vanishes: omega.is_zero(),
        domega_vanishes: domega.is_zero(),
        disjoint_free_indices: disjoint,
        witness,
    }
}

/// One matrix of generator one-forms attached to block `(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub block: (usize, usize),
    pub entries: Matrix<OneForm>,
    /// Entries that carry independent equations (all entries, or the strict
    /// upper triangle of the even-weight symmetric-part equation).
    pub effective: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoupledSystem {
    pub hodge: HodgeNumbers,
    pub reduced: bool,
    pub generators: Vec<Generator>,
    pub constraints: Vec<String>,
    /// Free coordinates of the system.
    pub variables: Vec<Variable>,
}

impl CoupledSystem {
    /// Number of independent scalar equations.
    pub fn num_equations(&self) -> usize {
        self.generators.iter().map(|g| g.effective.len()).sum()
    }

    /// Effective generator forms pulled back along `map`, in order.
    pub fn pullback(&self, map: &BTreeMap<Variable, Polynomial>, max_degree: Option<u32>) -> Vec<Located<OneForm>> {
        let mut out = Vec::new();
        for g in &self.generators {
            for &(r, c) in &g.effective {
                out.push((g.block, (r, c), g.entries.get(r, c).pullback(map, max_degree)));
            }
        }
        out
    }
}

pub(crate) fn d_matrix(m: &Matrix<Polynomial>) -> Matrix<OneForm> {
    m.map(exterior_derivative)
}

/// `P · Ω` for a polynomial matrix `P` and a one-form matrix `Ω`.
pub(crate) fn poly_times_forms(p: &Matrix<Polynomial>, f: &Matrix<OneForm>, max_degree: Option<u32>) -> Matrix<OneForm> {
    product(p, f, |a, b| b.mul_poly(a, max_degree))
}

/// `dY_{j+2,j} - Y_{j+2,j+1} dY_{j+1,j}` for a block matrix of polynomials.
pub fn generator_matrix(y: &BlockMatrix<Polynomial>, j: usize, max_degree: Option<u32>) -> Matrix<OneForm> {
    let d_low = d_matrix(&y.block(j + 1, j));
    let top = d_matrix(&y.block(j + 2, j));
    top.sub(&poly_times_forms(&y.block(j + 2, j + 1), &d_low, max_degree))
}

/// The block matrix whose canonical free entries of gap ≤ 2 are their own
/// coordinate variables, completed so that it lies in `G⁻` to gap 2.
pub fn generic_reduced_matrix(h: &HodgeNumbers) -> BlockMatrix<Polynomial> {
    let mut y = BlockMatrix::zeros(h.shape());
    for v in h.reduced_variables() {
        let (a, b, r, c) = v.as_entry().unwrap();
        y.set_entry(a, b, r, c, Polynomial::var(v));
    }
    complete_group(h, &mut y, None);
    y
}

/// The block matrix with every entry of gap 1 and 2 an independent variable.
pub fn generic_raw_matrix(h: &HodgeNumbers) -> BlockMatrix<Polynomial> {
    let w = h.weight();
    let mut y = BlockMatrix::identity(h.shape());
    for a in 1..=w {
        for b in a.saturating_sub(2)..a {
            let (nr, nc) = h.block_size(a, b);
            for r in 0..nr {
                for c in 0..nc {
                    y.set_entry(a, b, r, c, Polynomial::var(Variable::entry(a, b, r, c)));
                }
            }
        }
    }
    y
}

/// The coupled contact system of `h`.
///
/// The full system has one generator `dY_{j+2,j} - Y_{j+2,j+1}dY_{j+1,j}`
/// per `j = 0..w-2` over independent entries. The reduced system keeps
/// `j < k` for odd `w = 2k+1` (with `Y_{k+1,k}` symmetric) and `j < k-1`
/// plus `dY_{k+1,k-1} - Y_{k,k-1}^t dY_{k,k-1}` for even `w = 2k` (with
/// `Y_{k+1,k-1} + Y_{k+1,k-1}^t = Y_{k,k-1}^t Y_{k,k-1}`), over the
/// canonical free coordinates.
pub fn coupled_generators(h: &HodgeNumbers, reduced: bool) -> Result<CoupledSystem> {
    let w = h.weight();
    if w < 2 {
        return Err(Error::Invalid(format!("coupled contact systems need weight ≥ 2, got {}", w)));
    }
    let k = h.k();
    if !reduced {
        let y = generic_raw_matrix(h);
        let generators = (0..=w - 2)
            .map(|j| {
                let entries = generator_matrix(&y, j, None);
                let effective = all_positions(&entries);
                Generator {
                    block: (j + 2, j),
                    entries,
                    effective,
                }
            })
            .collect();
        let mut variables: Vec<Variable> = Vec::new();
        for a in 1..=w {
            for b in a.saturating_sub(2)..a {
                let (nr, nc) = h.block_size(a, b);
                for r in 0..nr {
                    for c in 0..nc {
                        variables.push(Variable::entry(a, b, r, c));
                    }
                }
            }
        }
        variables.sort();
        return Ok(CoupledSystem {
            hodge: h.clone(),
            reduced: false,
            generators,
            constraints: vec!["all entries of blocks (j+1,j), (j+2,j) independent".into()],
            variables,
        });
    }
    let y = generic_reduced_matrix(h);
    let mut generators = Vec::new();
    let mut constraints = Vec::new();
    if h.is_odd() {
        for j in 0..k {
            let entries = generator_matrix(&y, j, None);
            let effective = all_positions(&entries);
            generators.push(Generator {
                block: (j + 2, j),
                entries,
                effective,
            });
        }
        constraints.push(format!("Y[{},{}] symmetric", k + 1, k));
    } else {
        for j in 0..k.saturating_sub(1) {
            let entries = generator_matrix(&y, j, None);
            let effective = all_positions(&entries);
            generators.push(Generator {
                block: (j + 2, j),
                entries,
                effective,
            });
        }
        let b = y.block(k, k - 1);
        let entries = d_matrix(&y.block(k + 1, k - 1)).sub(&poly_times_forms(&b.transpose(), &d_matrix(&b), None));
        let n = entries.rows();
        let effective = (0..n).flat_map(|r| (r + 1..n).map(move |c| (r, c))).collect();
        generators.push(Generator {
            block: (k + 1, k - 1),
            entries,
            effective,
        });
        constraints.push(format!(
            "Y[{a},{b}] + Y[{a},{b}]^t = Y[{k},{b}]^t Y[{k},{b}]",
            a = k + 1,
            b = k - 1,
            k = k
        ));
    }
    Ok(CoupledSystem {
        hodge: h.clone(),
        reduced: true,
        generators,
        constraints,
        variables: h.reduced_variables(),
    })
}

fn all_positions<T>(m: &Matrix<T>) -> Vec<(usize, usize)>
where
    T: crate::linalg::Entry,
{
    (0..m.rows())
        .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
        .collect()
}

/// Two-form closure conditions of the reduced system: for each generator
/// `dY_{j+2,j} - A dB` the matrix `dA ∧ dB`, and for the even symmetric-part
/// generator the strict upper triangle of `dB^t ∧ dB`. They vanish exactly
/// when the gap-2 blocks can be integrated.
pub fn closure_forms(h: &HodgeNumbers, y: &BlockMatrix<Polynomial>, max_degree: Option<u32>) -> Vec<Located<TwoForm>> {
    let k = h.k();
    let mut out = Vec::new();
    let last = if h.is_odd() { k } else { k.saturating_sub(1) };
    let wedge_mat = |a: &Matrix<Polynomial>, b: &Matrix<Polynomial>, r: usize, c: usize| {
        let mut t = TwoForm::zero();
        for l in 0..a.cols() {
            let da = exterior_derivative(a.get(r, l));
            let db = exterior_derivative(b.get(l, c));
            t.add_assign_ref(&crate::scalarforms::wedge_trunc(&da, &db, max_degree));
        }
        t
    };
    for j in 0..last {
        let a = y.block(j + 2, j + 1);
        let b = y.block(j + 1, j);
        for r in 0..a.rows() {
            for c in 0..b.cols() {
                out.push(((j + 2, j), (r, c), wedge_mat(&a, &b, r, c)));
            }
        }
    }
    if !h.is_odd() && k >= 1 {
        let b = y.block(k, k - 1);
        let bt = b.transpose();
        for r in 0..b.cols() {
            for c in r + 1..b.cols() {
                out.push(((k + 1, k - 1), (r, c), wedge_mat(&bt, &b, r, c)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalarforms::ParseContext;

    fn p(s: &str, n: u32) -> Polynomial {
        parse_polynomial(s, &ParseContext::contact(n)).unwrap()
    }

    fn hodge(h: &[usize]) -> HodgeNumbers {
        HodgeNumbers::new(h.len() - 1, h.to_vec()).unwrap()
    }

    #[test]
    fn zero_generating_function() {
        let part = Partition::from_mask(2, 0b01);
        let chart = arnold_chart(2, &part, &Polynomial::zero()).unwrap();
        assert!(chart.coordinate(Variable::Dual(1)).is_zero());
        assert!(chart.coordinate(Variable::Param(2)).is_zero());
        assert!(chart.coordinate(Variable::Height).is_zero());
    }

    #[test]
    fn square_generating_function() {
        let part = Partition::from_mask(1, 0b1);
        let chart = arnold_chart(1, &part, &p("x1^2", 1)).unwrap();
        assert_eq!(chart.coordinate(Variable::Dual(1)), p("2*x1", 1));
        assert_eq!(chart.coordinate(Variable::Height), p("-x1^2", 1));
    }

    #[test]
    fn mixed_partition() {
        let part = Partition::new(2, [1].into(), [2].into()).unwrap();
        let chart = arnold_chart(2, &part, &p("x1*y2", 2)).unwrap();
        assert_eq!(chart.coordinate(Variable::Dual(1)), p("y2", 2));
        assert_eq!(chart.coordinate(Variable::Param(2)), p("-x1", 2));
        assert!(chart.coordinate(Variable::Height).is_zero());
        assert!(arnold_chart(2, &part, &p("x2", 2)).is_err());
    }

    #[test]
    fn failing_charts_have_witnesses() {
        let mut coords = BTreeMap::new();
        coords.insert(Variable::Height, p("y1", 1));
        coords.insert(Variable::Dual(1), p("y1", 1));
        let chart = ContactChart {
            n: 1,
            free: vec![Variable::Dual(1)],
            coords,
        };
        let r = verify_contact_chart(&chart);
        assert!(!r.is_integral);
        assert_eq!(r.witness.unwrap(), "pullback of ω: coefficient of dy1 is 1");

        let mut coords = BTreeMap::new();
        coords.insert(Variable::Param(1), p("x1", 1));
        coords.insert(Variable::Dual(1), p("y1", 1));
        let chart = ContactChart {
            n: 1,
            free: vec![Variable::Param(1), Variable::Dual(1)],
            coords,
        };
        let r = verify_contact_chart(&chart);
        assert!(!r.domega_vanishes);
        assert!(!r.disjoint_free_indices);
    }

    #[test]
    fn reduced_weight_three() {
        let sys = coupled_generators(&hodge(&[1, 2, 2, 1]), true).unwrap();
        assert_eq!(sys.generators.len(), 1);
        assert_eq!(sys.generators[0].block, (2, 0));
        // Y[2,1][2,1] is replaced by Y[2,1][1,2]
        let g = sys.generators[0].entries.get(1, 0);
        let lower = Variable::entry(2, 1, 1, 0);
        assert!(g.coefficients().all(|(_, a)| !a.variables().contains(&lower)));
    }

    #[test]
    fn reduced_weight_four() {
        let sys = coupled_generators(&hodge(&[1, 1, 2, 1, 1]), true).unwrap();
        let blocks: Vec<_> = sys.generators.iter().map(|g| g.block).collect();
        assert_eq!(blocks, vec![(2, 0), (3, 1)]);
        assert_eq!(sys.generators[1].effective.len(), 0);
    }

    #[test]
    fn weight_two_is_classical_contact() {
        let m = 3;
        let sys = coupled_generators(&hodge(&[2, m, 2]), true).unwrap();
        assert_eq!(sys.num_equations(), 1);
        let g = &sys.generators[0];
        let form = g.entries.get(0, 1);
        // dz - Σ_l Y[1,0][l,1] dY[1,0][l,2]
        let mut expected = OneForm::basis(Variable::entry(2, 0, 0, 1));
        for l in 0..m {
            expected.add_term(
                Variable::entry(1, 0, l, 1),
                &-Polynomial::var(Variable::entry(1, 0, l, 0)),
            );
        }
        assert_eq!(form, &expected);
    }

    /// Every full generator of the reconstructed chart is a reduced generator
    /// or minus the transpose of one.
    #[test]
    fn reconstruction_satisfies_full_system() {
        for hv in [&[1, 2, 2, 1][..], &[2, 1, 1, 2], &[1, 2, 2, 2, 1], &[1, 1, 2, 2, 1, 1], &[2, 1, 2, 2, 1, 2]] {
            let h = hodge(hv);
            let w = h.weight();
            let y = generic_reduced_matrix(&h);
            let full: Vec<Matrix<OneForm>> = (0..=w - 2).map(|j| generator_matrix(&y, j, None)).collect();
            for j in 0..=w - 2 {
                let partner = &full[w - 2 - j];
                assert_eq!(full[j], partner.transpose().negated(), "h={:?} j={}", hv, j);
            }
        }
    }
}
