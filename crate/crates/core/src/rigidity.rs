//! Order-by-order jet prolongation of the reduced coupled system in graph
//! form, and a scan for uniqueness of maximal coordinate patterns.
//!
//! The independent entries of a [`CoordinatePattern`] are the parameters.
//! Every other free entry of the first sub-diagonal is an unknown power
//! series whose linear part comes from an integral element. At degree `d`
//! the closure conditions `dY_{j+2,j+1} ∧ dY_{j+1,j} = 0` (and, for even
//! weight, the strict upper part of `dB^t ∧ dB` for the middle block `B`)
//! are linear in the degree-`d` coefficients.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{pattern_search, CoordinatePattern};
use crate::contact::{d_matrix, poly_times_forms};
use crate::error::{Error, Result};
use crate::germs::{extend_contact, flexibility_family, GermChart, WChart};
pub use crate::germs::{compare_germs, Comparison};
use crate::hodgedomain::HodgeNumbers;
use crate::linalg::{inverse, Matrix, SparseSystem};
use crate::nilalgebra::{check_integral_element, AlgebraElement, BlockMatrix};
use crate::par::Exec;
use crate::scalarforms::{
    exterior_derivative, radial_integrate, wedge_trunc, GaussianRational as GR, Monomial, Polynomial,
    TwoForm, Variable,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JetLevel {
    pub degree: u32,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub freedom: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Rigid,
    Flexible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityReport {
    pub hodge: String,
    pub pattern: Vec<String>,
    pub max_degree: u32,
    pub levels: Vec<JetLevel>,
    pub verdict: Verdict,
    pub first_flexible_degree: Option<u32>,
    /// The verdict concerns jets up to `max_degree` only.
    pub label: String,
    /// For a flexible verdict: whether a second jet with a nonzero free
    /// coefficient was extended and found integral and distinct.
    pub alternative_found: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JetResult {
    pub report: RigidityReport,
    pub canonical: GermChart,
    pub alternative: Option<GermChart>,
}

/// The closure conditions as sums of `d(left) ∧ d(right)` over pairs of
/// free coordinates.
struct Closure {
    entries: Vec<Vec<(Variable, Variable)>>,
}

/// Free coordinate holding entry `(a,b,r,c)` of a canonical block of gap
/// one (the lower triangle of a symmetric block reads the upper one).
fn slot(h: &HodgeNumbers, a: usize, b: usize, r: usize, c: usize) -> Variable {
    if h.partner(a, b) == (a, b) && r > c {
        Variable::entry(a, b, c, r)
    } else {
        Variable::entry(a, b, r, c)
    }
}

fn closure(h: &HodgeNumbers) -> Closure {
    let w = h.weight();
    let k = h.k();
    let mut entries = Vec::new();
    let last = if h.is_odd() { k } else { k.saturating_sub(1) };
    for j in 0..last.min(w.saturating_sub(1)) {
        let (rows, mid) = h.block_size(j + 2, j + 1);
        let cols = h.block_dim(j);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(
                    (0..mid)
                        .map(|l| (slot(h, j + 2, j + 1, r, l), slot(h, j + 1, j, l, c)))
                        .collect(),
                );
            }
        }
    }
    if !h.is_odd() && k >= 1 {
        let (rows, cols) = h.block_size(k, k - 1);
        for a in 0..cols {
            for b in a + 1..cols {
                entries.push(
                    (0..rows)
                        .map(|l| (slot(h, k, k - 1, l, a), slot(h, k, k - 1, l, b)))
                        .collect(),
                );
            }
        }
    }
    Closure { entries }
}

/// Monomials of degree `d` in `x1..xn`, ascending.
fn monomials(n: u32, d: u32) -> Vec<Monomial> {
    fn rec(n: u32, d: u32, start: u32, acc: &mut Vec<(Variable, u32)>, out: &mut Vec<Monomial>) {
        if d == 0 {
            out.push(Monomial::from_factors(acc.iter().copied()));
            return;
        }
        for v in start..=n {
            for e in (1..=d).rev() {
                acc.push((Variable::Param(v), e));
                rec(n, d - e, v + 1, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    rec(n, d, 1, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// `Σ coeff · du∧dv` for constant one-form coefficients.
fn linear_coeffs(p: &Polynomial) -> Vec<(Variable, GR)> {
    p.homogeneous(1)
        .terms()
        .map(|(m, c)| (m.factors()[0].0, c.clone()))
        .collect()
}

type RowKey = (usize, Variable, Variable, Monomial);

struct Problem {
    hodge: HodgeNumbers,
    params: u32,
    pattern: Vec<Variable>,
    dependent: Vec<Variable>,
    closure: Closure,
    /// Current values of every free coordinate of the first sub-diagonal.
    values: BTreeMap<Variable, Polynomial>,
}

impl Problem {
    fn new(pattern: &CoordinatePattern, element: &[AlgebraElement]) -> Result<Self> {
        let h = &pattern.hodge;
        let n = pattern.dim();
        if element.len() != n {
            return Err(Error::Invalid(format!(
                "element has dimension {} but the pattern has {} entries",
                element.len(),
                n
            )));
        }
        check_integral_element(h, element)?;
        let p = Matrix::from_fn(n, n, |a, b| element[a].value(pattern.entries[b]));
        let pinv = inverse(&p).ok_or_else(|| {
            Error::IncompatibleGraph("the element does not project isomorphically onto the pattern entries".into())
        })?;
        let mut values = BTreeMap::new();
        let dependent: Vec<Variable> = h
            .horizontal_variables()
            .into_iter()
            .filter(|v| !pattern.entries.contains(v))
            .collect();
        for (a, v) in pattern.entries.iter().enumerate() {
            values.insert(*v, Polynomial::var(Variable::Param(a as u32 + 1)));
        }
        // graph-normalized basis e'_b = Σ_a pinv[b,a] e_a has e'_b(pattern_c) = δ_bc
        for v in &dependent {
            let mut lin = Polynomial::zero();
            for b in 0..n {
                let coeff = (0..n).fold(GR::zero(), |acc, a| &acc + &(pinv.get(b, a) * &element[a].value(*v)));
                lin.add_assign_ref(&Polynomial::var(Variable::Param(b as u32 + 1)).scale(&coeff));
            }
            values.insert(*v, lin);
        }
        Ok(Problem {
            hodge: h.clone(),
            params: n as u32,
            pattern: pattern.entries.clone(),
            dependent,
            closure: closure(h),
            values,
        })
    }

    /// Rows of the degree-`d` system for closure entries, keyed for a
    /// deterministic order. Each row maps unknown columns to coefficients
    /// and carries the known part.
    fn rows(&self, d: u32, exec: Exec) -> BTreeMap<RowKey, (Vec<(usize, GR)>, GR)> {
        assert!(d >= 2, "degree-{} systems would contain products of unknowns", d);
        let monos = monomials(self.params, d);
        let mono_index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let dep_index: HashMap<Variable, usize> = self.dependent.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let col = |v: Variable, m: &Monomial| dep_index[&v] * monos.len() + mono_index[m];
        let lin: HashMap<Variable, Vec<(Variable, GR)>> =
            self.values.iter().map(|(v, p)| (*v, linear_coeffs(p))).collect();
        let per_entry = exec.map_range(self.closure.entries.len(), |e| {
            let mut rows: BTreeMap<RowKey, (Vec<(usize, GR)>, GR)> = BTreeMap::new();
            let mut known = TwoForm::zero();
            for &(l, r) in &self.closure.entries[e] {
                let dl = exterior_derivative(&self.values[&l]);
                let dr = exterior_derivative(&self.values[&r]);
                known.add_assign_ref(&wedge_trunc(&dl, &dr, Some(d - 1)));
            }
            for ((u, v), p) in known.coefficients() {
                for (m, c) in p.homogeneous(d - 1).terms() {
                    rows.entry((e, *u, *v, m.clone()))
                        .or_insert_with(|| (Vec::new(), GR::zero()))
                        .1 -= c;
                }
            }
            let mut push = |u: Variable, v: Variable, m: Monomial, column: usize, c: GR| {
                let (u, v, c) = if u < v { (u, v, c) } else { (v, u, -c) };
                rows.entry((e, u, v, m))
                    .or_insert_with(|| (Vec::new(), GR::zero()))
                    .0
                    .push((column, c));
            };
            for &(l, r) in &self.closure.entries[e] {
                // d(unknown) ∧ d(linear part of the partner), in both slots
                for (unknown, partner, sign) in [(l, r, GR::one()), (r, l, -GR::one())] {
                    if !dep_index.contains_key(&unknown) {
                        continue;
                    }
                    for m in &monos {
                        let column = col(unknown, m);
                        for &(x, _) in m.factors() {
                            let (k, dm) = m.derivative(x).expect("factor present");
                            for (y, cy) in &lin[&partner] {
                                if x == *y {
                                    continue;
                                }
                                let c = &(&GR::from_integer(k as i64) * cy) * &sign;
                                push(x, *y, dm.clone(), column, c);
                            }
                        }
                    }
                }
            }
            rows
        });
        let mut out = BTreeMap::new();
        for rows in per_entry {
            out.extend(rows);
        }
        out
    }

    /// Solves degree `d`; `choice` fixes one free column to one.
    fn step(&mut self, d: u32, choice: Option<usize>, exec: Exec) -> Result<(JetLevel, Vec<usize>)> {
        let monos = monomials(self.params, d);
        let unknowns = self.dependent.len() * monos.len();
        let rows = self.rows(d, exec);
        let mut system = SparseSystem::new(unknowns);
        let equations = rows.len();
        for (_, (coeffs, rhs)) in rows {
            system.add_equation(coeffs, rhs);
            if !system.is_consistent() {
                return Err(Error::Inconsistent { degree: d });
            }
        }
        let free = system.free_columns();
        let mut fixed = HashMap::new();
        if let Some(c) = choice {
            fixed.insert(free[c], GR::one());
        }
        let x = system.solve_with(&fixed).map_err(|_| Error::Inconsistent { degree: d })?;
        for (i, v) in self.dependent.iter().enumerate() {
            let mut add = Polynomial::zero();
            for (j, m) in monos.iter().enumerate() {
                let c = &x[i * monos.len() + j];
                if !c.is_zero() {
                    add.add_term(m.clone(), c);
                }
            }
            self.values.get_mut(v).unwrap().add_assign_ref(&add);
        }
        let level = JetLevel {
            degree: d,
            unknowns,
            equations,
            rank: system.rank(),
            freedom: free.len(),
        };
        Ok((level, free))
    }

    /// Checks the commutation of the linear data (the degree-one closure).
    fn check_linear(&self) -> Result<()> {
        for entry in &self.closure.entries {
            let mut t = TwoForm::zero();
            for &(l, r) in entry {
                t.add_assign_ref(&wedge_trunc(
                    &exterior_derivative(&self.values[&l]),
                    &exterior_derivative(&self.values[&r]),
                    Some(0),
                ));
            }
            if !t.is_zero() {
                return Err(Error::Inconsistent { degree: 1 });
            }
        }
        Ok(())
    }

    /// Integrates the gap-two blocks and extends to a full chart.
    fn chart(&self, truncation: u32) -> Result<GermChart> {
        let h = &self.hodge;
        let k = h.k();
        let mut y = BlockMatrix::<Polynomial>::zeros(h.shape());
        for a in 1..=h.weight() {
            let b = a - 1;
            if !h.is_canonical(a, b) {
                continue;
            }
            let (rows, cols) = h.block_size(a, b);
            for r in 0..rows {
                for c in 0..cols {
                    y.set_entry(a, b, r, c, self.values[&slot(h, a, b, r, c)].clone());
                }
            }
        }
        let cap = Some(truncation.saturating_sub(1));
        let mut reduced: BTreeMap<Variable, Polynomial> = BTreeMap::new();
        for (v, p) in &self.values {
            reduced.insert(*v, p.truncate(truncation));
        }
        let last = if h.is_odd() { k } else { k.saturating_sub(1) };
        for j in 0..last.min(h.weight().saturating_sub(1)) {
            let rhs = poly_times_forms(&y.block(j + 2, j + 1), &d_matrix(&y.block(j + 1, j)), cap);
            for (r, c, f) in rhs.entries() {
                reduced.insert(Variable::entry(j + 2, j, r, c), radial_integrate(f)?);
            }
        }
        if !h.is_odd() && k >= 1 {
            let b = y.block(k, k - 1);
            let rhs = poly_times_forms(&b.transpose(), &d_matrix(&b), cap);
            for r in 0..rhs.rows() {
                for c in r + 1..rhs.cols() {
                    reduced.insert(Variable::entry(k + 1, k - 1, r, c), radial_integrate(rhs.get(r, c))?);
                }
            }
        }
        let w_chart = WChart::from_reduced(h, self.params, &reduced, truncation)?;
        let chart = extend_contact(&w_chart)?;
        GermChart::new(h.clone(), self.params, chart.y, Some(self.pattern.clone()), truncation)
    }
}

/// Prolongs the reduced system through degree `max_degree` starting from
/// the linear data of `element` in graph form over `pattern`. Without an
/// element the pattern's own coordinate vectors are used.
pub fn jet_probe(
    pattern: &CoordinatePattern,
    element: Option<&[AlgebraElement]>,
    max_degree: u32,
    exec: Exec,
) -> Result<JetResult> {
    let own;
    let element = match element {
        Some(e) => e,
        None => {
            own = pattern.vectors();
            &own
        }
    };
    let mut problem = Problem::new(pattern, element)?;
    problem.check_linear()?;
    let start = problem.values.clone();
    let truncation = max_degree.max(1);
    let mut levels = Vec::new();
    let mut first_flexible = None;
    for d in 2..=max_degree {
        let (level, _) = problem.step(d, None, exec)?;
        if level.freedom > 0 && first_flexible.is_none() {
            first_flexible = Some(d);
        }
        levels.push(level);
    }
    let canonical = problem.chart(truncation)?;
    let mut alternative = None;
    if let Some(d0) = first_flexible {
        let free = levels[(d0 - 2) as usize].freedom;
        for choice in 0..free.min(8) {
            let mut alt = Problem {
                values: start.clone(),
                ..Problem::new(pattern, element)?
            };
            let mut ok = true;
            for d in 2..=max_degree {
                let pick = if d == d0 { Some(choice) } else { None };
                if alt.step(d, pick, exec).is_err() {
                    ok = false;
                    break;
                }
            }
            if ok {
                if let Ok(chart) = alt.chart(truncation) {
                    if !compare_germs(&canonical, &chart)?.equal {
                        alternative = Some(chart);
                        break;
                    }
                }
            }
        }
    }
    let report = RigidityReport {
        hodge: pattern.hodge.to_string(),
        pattern: pattern.entries.iter().map(|v| v.to_string()).collect(),
        max_degree,
        levels,
        verdict: if first_flexible.is_some() { Verdict::Flexible } else { Verdict::Rigid },
        first_flexible_degree: first_flexible,
        label: "jet verdict".into(),
        alternative_found: first_flexible.map(|_| alternative.is_some()),
    };
    Ok(JetResult {
        report,
        canonical,
        alternative,
    })
}

/// Tangent vectors `∂Y/∂x_a` at the origin.
pub fn tangent_element(chart: &GermChart) -> Result<Vec<AlgebraElement>> {
    (1..=chart.params)
        .map(|a| {
            let m = Monomial::var(Variable::Param(a));
            AlgebraElement::from_matrix(&chart.hodge, chart.y.map(|p| p.coefficient(&m)))
        })
        .collect()
}

/// The maximal element of the even-weight flexible family with every last
/// row function equal to `x1`, with its graph entries as a pattern.
pub fn flexible_element(h: &HodgeNumbers) -> Result<(CoordinatePattern, Vec<AlgebraElement>)> {
    let k = h.k();
    let t = Polynomial::var(Variable::Param(1));
    let f = vec![t; h.h(k + 1).saturating_sub(1)];
    let chart = flexibility_family(h, &f, 2)?;
    let graph = chart.graph.clone().expect("family charts carry a graph");
    let element = tangent_element(&chart)?;
    let pattern = CoordinatePattern {
        hodge: h.clone(),
        entries: graph,
    };
    // keep the parameter order of the family rather than sorting
    Ok((pattern, element))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitEvidence {
    pub samples: usize,
    pub seed: u64,
    /// Classes of the listed maximal patterns under the sampled block
    /// permutations; an upper bound on the true number of orbits.
    pub classes_found: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub hodge: String,
    pub max_dim: usize,
    pub num_maximum: usize,
    pub unique: bool,
    pub patterns: Vec<Vec<String>>,
    pub listed_all: bool,
    pub orbit: OrbitEvidence,
}

/// Enumerates the maximal coordinate patterns and samples block-permutation
/// conjugations to group them.
pub fn element_uniqueness_scan(
    h: &HodgeNumbers,
    budget: usize,
    keep: usize,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<ScanReport> {
    let n = h.horizontal_variables().len();
    if n > budget || n > crate::bounds::MAX_EXHAUSTIVE {
        return Err(Error::BudgetExceeded { needed: n, budget });
    }
    let search = pattern_search(h, budget, keep, exec)?;
    let patterns = &search.maximum_patterns;
    let index: HashMap<&[Variable], usize> = patterns.iter().enumerate().map(|(i, p)| (&p.entries[..], i)).collect();
    let mut parent: Vec<usize> = (0..patterns.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = h.weight();
    for _ in 0..samples {
        let mut perms: Vec<Vec<usize>> = vec![Vec::new(); w + 1];
        for i in 0..=w {
            if i <= w - i {
                let mut p: Vec<usize> = (0..h.block_dim(i)).collect();
                p.shuffle(&mut rng);
                perms[w - i] = p.clone();
                perms[i] = p;
            }
        }
        for (i, pat) in patterns.iter().enumerate() {
            let mut image: Vec<Variable> = pat
                .entries
                .iter()
                .map(|v| {
                    let (a, b, r, c) = v.as_entry().unwrap();
                    slot(h, a, b, perms[a][r], perms[b][c])
                })
                .collect();
            image.sort();
            if let Some(&j) = index.get(&image[..]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let classes = (0..patterns.len()).filter(|&i| find(&mut parent, i) == i).count();
    Ok(ScanReport {
        hodge: h.to_string(),
        max_dim: search.best,
        num_maximum: search.num_maximum,
        unique: search.num_maximum == 1,
        patterns: patterns
            .iter()
            .map(|p| p.entries.iter().map(|v| v.to_string()).collect())
            .collect(),
        listed_all: patterns.len() == search.num_maximum,
        orbit: OrbitEvidence {
            samples,
            seed,
            classes_found: classes,
            label: "sampled evidence, not a certificate".into(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germs::{exp_construct, verify_horizontal};

    fn hodge(h: &[usize]) -> HodgeNumbers {
        HodgeNumbers::new(h.len() - 1, h.to_vec()).unwrap()
    }

    fn middle_pattern(h: &HodgeNumbers) -> CoordinatePattern {
        let k = h.k();
        let entries = h
            .horizontal_variables()
            .into_iter()
            .filter(|v| v.as_entry().unwrap().0 == k + 1)
            .collect();
        CoordinatePattern::new(h, entries).unwrap()
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(6, 3).len(), 56);
        assert_eq!(monomials(0, 0).len(), 1);
    }

    #[test]
    fn rigid_weight_three() {
        let h = hodge(&[1, 3, 3, 1]);
        let p = middle_pattern(&h);
        let r = jet_probe(&p, None, 4, Exec::default()).unwrap();
        assert_eq!(r.report.verdict, Verdict::Rigid);
        assert!(r.report.levels.iter().all(|l| l.freedom == 0));
        assert!(verify_horizontal(&r.canonical).is_horizontal);
        let exp = exp_construct(&h, &p.vectors(), 4).unwrap();
        assert!(compare_germs(&exp, &r.canonical).unwrap().equal);
    }

    #[test]
    fn weight_three_small_middle_block() {
        let h = hodge(&[1, 2, 2, 1]);
        let r = jet_probe(&middle_pattern(&h), None, 4, Exec::default()).unwrap();
        assert_eq!(r.report.verdict, Verdict::Rigid);
        let first = h
            .horizontal_variables()
            .into_iter()
            .filter(|v| v.as_entry().unwrap().0 == 1)
            .collect();
        let p = CoordinatePattern::new(&h, first).unwrap();
        let r = jet_probe(&p, None, 3, Exec::default()).unwrap();
        assert_eq!(r.report.verdict, Verdict::Flexible);
        assert_eq!(r.report.first_flexible_degree, Some(2));
        // the middle block is the Hessian of a free potential
        assert_eq!(r.report.levels[0].freedom, 5);
        let alt = r.alternative.expect("second chart");
        assert!(verify_horizontal(&alt).is_horizontal);
        assert!(!compare_germs(&r.canonical, &alt).unwrap().equal);
    }

    #[test]
    fn flexible_even_weight() {
        let h = hodge(&[2, 4, 5, 4, 2]);
        let (p, e) = flexible_element(&h).unwrap();
        let r = jet_probe(&p, Some(&e), 3, Exec::default()).unwrap();
        assert_eq!(r.report.verdict, Verdict::Flexible);
        assert_eq!(r.report.first_flexible_degree, Some(2));
        let family = flexibility_family(&h, &vec![Polynomial::var(Variable::Param(1)); 3], 3).unwrap();
        assert!(compare_germs(&family, &r.canonical).unwrap().equal);
        assert!(verify_horizontal(&r.alternative.unwrap()).is_horizontal);
    }

    #[test]
    fn degree_one_is_trivially_rigid() {
        let h = hodge(&[1, 3, 3, 1]);
        let r = jet_probe(&middle_pattern(&h), None, 1, Exec::Sequential).unwrap();
        assert!(r.report.levels.is_empty());
        assert_eq!(r.report.verdict, Verdict::Rigid);
    }

    #[test]
    fn non_commuting_pattern_is_rejected() {
        let h = hodge(&[1, 1, 1, 1]);
        let p = CoordinatePattern::new(&h, h.horizontal_variables()).unwrap();
        assert!(matches!(jet_probe(&p, None, 3, Exec::Sequential), Err(Error::NonCommuting { .. })));
    }

    #[test]
    fn scans() {
        let r = element_uniqueness_scan(&hodge(&[1, 3, 3, 1]), 64, 100, 10, 1, Exec::Sequential).unwrap();
        assert!(r.unique);
        assert_eq!(r.max_dim, 6);
        let r = element_uniqueness_scan(&hodge(&[2, 4, 2]), 64, 100, 50, 1, Exec::Sequential).unwrap();
        assert!(!r.unique);
        assert_eq!(r.max_dim, 4);
        assert!(r.orbit.classes_found <= r.patterns.len());
        let r = element_uniqueness_scan(&hodge(&[2, 0, 2]), 64, 100, 5, 1, Exec::Sequential).unwrap();
        assert!(r.unique);
        assert!(matches!(
            element_uniqueness_scan(&hodge(&[1, 3, 3, 1]), 2, 1, 1, 1, Exec::Sequential),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
