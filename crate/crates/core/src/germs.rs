//! Polynomial germs of horizontal maps into the unipotent chart `G⁻`.
//!
//! A chart is a block matrix `Y(x)` with polynomial entries in parameters
//! `x1..xn`, kept modulo monomials of degree above its truncation.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::contact::{coupled_generators, d_matrix, poly_times_forms};
use crate::error::{Error, Result};
use crate::hodgedomain::HodgeNumbers;
use crate::linalg::{inverse, product, Matrix};
use crate::nilalgebra::json::{assemble, BlocksJson};
use crate::nilalgebra::{check_integral_element, complete_group, group_defect, AlgebraElement, BlockMatrix};
use crate::scalarforms::{
    parse_polynomial, parse_variable, radial_integrate, GaussianRational as GR, Monomial, OneForm,
    ParseContext, Polynomial, Variable,
};

#[derive(Clone, Debug, PartialEq)]
pub struct GermChart {
    pub hodge: HodgeNumbers,
    pub params: u32,
    pub y: BlockMatrix<Polynomial>,
    /// `graph[a]` is the block entry that equals parameter `x{a+1}`.
    pub graph: Option<Vec<Variable>>,
    pub truncation: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermJson {
    pub hodge: HodgeNumbers,
    pub params: Vec<String>,
    pub blocks: BTreeMap<String, Vec<Vec<String>>>,
    pub truncation: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<Vec<String>>,
}

pub fn param_variables(n: u32) -> Vec<Variable> {
    (1..=n).map(Variable::Param).collect()
}

/// Parameter names must be `x1, x2, ...` in order.
fn parse_params(names: &[String]) -> Result<u32> {
    for (a, name) in names.iter().enumerate() {
        if name != &format!("x{}", a + 1) {
            return Err(Error::Invalid(format!(
                "parameter {} is `{}`; parameters must be x1, x2, ... in order",
                a + 1,
                name
            )));
        }
    }
    Ok(names.len() as u32)
}

fn param_names(n: u32) -> Vec<String> {
    (1..=n).map(|a| format!("x{}", a)).collect()
}

fn poly_eq_mod(a: &Polynomial, b: &Polynomial, d: u32) -> bool {
    (a - b).truncate(d).is_zero()
}

/// Reads canonical blocks and completes the rest inside `G⁻` modulo the
/// truncation; derived blocks that are supplied must agree with the
/// completion.
fn parse_group_blocks(
    h: &HodgeNumbers,
    params: u32,
    blocks: &BTreeMap<String, Vec<Vec<String>>>,
    truncation: u32,
    max_gap: usize,
) -> Result<BlockMatrix<Polynomial>> {
    let ctx = ParseContext::params(params);
    let json = BlocksJson {
        blocks: blocks.clone(),
    };
    let supplied = json.parse_blocks(h, |s| parse_polynomial(s, &ctx))?;
    if let Some(&(a, b)) = supplied.keys().find(|(a, b)| a - b > max_gap) {
        return Err(Error::ShapeMismatch(format!(
            "block ({},{}) has gap {} but at most {} is allowed here",
            a,
            b,
            a - b,
            max_gap
        )));
    }
    let mut y = assemble(
        h,
        &supplied,
        |y| complete_group(h, y, Some(truncation)),
        |a, b| poly_eq_mod(a, b, truncation),
    )?;
    keep_gaps(h, &mut y, max_gap);
    Ok(y)
}

fn keep_gaps(h: &HodgeNumbers, y: &mut BlockMatrix<Polynomial>, max_gap: usize) {
    let w = h.weight();
    for a in 0..=w {
        for b in 0..a {
            if a - b > max_gap {
                y.set_block(a, b, &Matrix::zeros(h.block_dim(a), h.block_dim(b)));
            }
        }
    }
}

fn blocks_to_json(h: &HodgeNumbers, y: &BlockMatrix<Polynomial>) -> BTreeMap<String, Vec<Vec<String>>> {
    BlocksJson::from_matrix(h, y).blocks
}

impl GermChart {
    /// Validates and wraps a chart; entries are truncated first.
    pub fn new(
        hodge: HodgeNumbers,
        params: u32,
        y: BlockMatrix<Polynomial>,
        graph: Option<Vec<Variable>>,
        truncation: u32,
    ) -> Result<Self> {
        if y.shape() != &hodge.shape() {
            return Err(Error::ShapeMismatch(format!("chart does not have the block shape of {}", hodge)));
        }
        let y = y.map(|p| p.truncate(truncation));
        let chart = GermChart {
            hodge,
            params,
            y,
            graph,
            truncation,
        };
        chart.validate()?;
        Ok(chart)
    }

    fn validate(&self) -> Result<()> {
        let h = &self.hodge;
        let w = h.weight();
        let allowed = param_variables(self.params);
        for a in 0..=w {
            for b in 0..=w {
                let m = self.y.block(a, b);
                for (r, c, p) in m.entries() {
                    let expected = if a == b && r == c { GR::one() } else { GR::zero() };
                    if a < b && !p.is_zero() {
                        return Err(Error::Constraint(format!(
                            "block ({},{}) above the diagonal is nonzero",
                            a, b
                        )));
                    }
                    if a == b && p != &Polynomial::constant(expected.clone()) {
                        return Err(Error::Constraint(format!(
                            "diagonal block ({},{}) is not the identity",
                            a, a
                        )));
                    }
                    if p.constant_term() != expected {
                        return Err(Error::Constraint(format!(
                            "Y(0) is not the identity at block ({},{}) entry [{},{}]",
                            a,
                            b,
                            r + 1,
                            c + 1
                        )));
                    }
                    if let Some(v) = p.variables().into_iter().find(|v| !allowed.contains(v)) {
                        return Err(Error::UnknownVariable(v.to_string()));
                    }
                }
            }
        }
        let defect = group_defect(h, &self.y, Some(self.truncation));
        if let Some((a, b)) = defect.nonzero_blocks().first() {
            return Err(Error::Orthogonality(format!(
                "Y^t Q Y - Q has nonzero block ({},{})",
                a, b
            )));
        }
        if let Some(graph) = &self.graph {
            if graph.len() != self.params as usize {
                return Err(Error::Invalid(format!(
                    "graph lists {} entries for {} parameters",
                    graph.len(),
                    self.params
                )));
            }
            for (a, v) in graph.iter().enumerate() {
                let (i, j, r, c) = v
                    .as_entry()
                    .ok_or_else(|| Error::Invalid(format!("graph entry {} is not a block entry", v)))?;
                let got = self.y.entry(i, j, r, c);
                if got != &Polynomial::var(Variable::Param(a as u32 + 1)) {
                    return Err(Error::Constraint(format!(
                        "graph entry {} is {} rather than x{}",
                        v,
                        got,
                        a + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(json: &GermJson) -> Result<Self> {
        let h = &json.hodge;
        let params = parse_params(&json.params)?;
        let y = parse_group_blocks(h, params, &json.blocks, json.truncation, h.weight())?;
        let graph = match &json.graph {
            Some(names) => {
                let ctx = ParseContext::with_hodge(h);
                Some(names.iter().map(|s| parse_variable(s, &ctx)).collect::<Result<Vec<_>>>()?)
            }
            None => None,
        };
        GermChart::new(h.clone(), params, y, graph, json.truncation)
    }

    pub fn to_json(&self) -> GermJson {
        GermJson {
            hodge: self.hodge.clone(),
            params: param_names(self.params),
            blocks: blocks_to_json(&self.hodge, &self.y),
            truncation: self.truncation,
            graph: self
                .graph
                .as_ref()
                .map(|g| g.iter().map(|v| v.to_string()).collect()),
        }
    }

    /// Value of the block entry named by `v`.
    pub fn entry(&self, v: Variable) -> &Polynomial {
        let (a, b, r, c) = v.as_entry().expect("block entry variable");
        self.y.entry(a, b, r, c)
    }

    /// Linear part of the chart restricted to `entries`: row `e`, column `a`
    /// is the coefficient of `x{a+1}`.
    pub fn linear_part(&self, entries: &[Variable]) -> Matrix<GR> {
        Matrix::from_fn(entries.len(), self.params as usize, |e, a| {
            self.entry(entries[e])
                .coefficient(&Monomial::var(Variable::Param(a as u32 + 1)))
        })
    }
}

/// `Y^{-1} dY`, with one-form coefficients kept to degree `truncation - 1`.
pub fn maurer_cartan(chart: &GermChart) -> BlockMatrix<OneForm> {
    let d = chart.truncation;
    let inv = chart.y.unipotent_inverse(Some(d));
    let dy = d_matrix(chart.y.matrix());
    let cap = d.checked_sub(1);
    let m = match cap {
        Some(cap) => poly_times_forms(inv.matrix(), &dy, Some(cap)),
        None => Matrix::zeros(dy.rows(), dy.cols()),
    };
    BlockMatrix::from_matrix(chart.y.shape().clone(), m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub block: (usize, usize),
    pub entry: (usize, usize),
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HorizontalReport {
    pub is_horizontal: bool,
    pub checked_to_degree: u32,
    pub violations: Vec<Violation>,
}

/// Checks that `Y^{-1}dY` vanishes on every block of gap at least two.
pub fn verify_horizontal(chart: &GermChart) -> HorizontalReport {
    let omega = maurer_cartan(chart);
    let h = &chart.hodge;
    let w = h.weight();
    let mut violations = Vec::new();
    for a in 2..=w {
        for b in 0..=a - 2 {
            let m = omega.block(a, b);
            for (r, c, f) in m.entries() {
                if let Some((v, p)) = f.first_nonzero() {
                    violations.push(Violation {
                        block: (a, b),
                        entry: (r + 1, c + 1),
                        coefficient: format!("coefficient of d{} is {}", v, p),
                    });
                }
            }
        }
    }
    HorizontalReport {
        is_horizontal: violations.is_empty(),
        checked_to_degree: chart.truncation,
        violations,
    }
}

/// `exp(x1 e1) ··· exp(xk ek)` for a basis `e` of an abelian subalgebra of
/// horizontal vectors; equal to `exp(Σ x_a e_a)` because the basis commutes.
pub fn exp_construct(h: &HodgeNumbers, basis: &[AlgebraElement], truncation: u32) -> Result<GermChart> {
    check_integral_element(h, basis)?;
    exp_chart_from_vectors(h, basis, truncation)
}

/// Same product of exponentials without checking that the vectors span an
/// integral element. The truncation is raised to the weight so that the
/// chart is exact.
pub fn exp_chart_from_vectors(h: &HodgeNumbers, vectors: &[AlgebraElement], truncation: u32) -> Result<GermChart> {
    let truncation = truncation.max(h.weight() as u32);
    let mut y = BlockMatrix::<Polynomial>::identity(h.shape());
    for (a, e) in vectors.iter().enumerate() {
        if e.hodge() != h {
            return Err(Error::ShapeMismatch(format!("vector {} has Hodge numbers {}", a, e.hodge())));
        }
        let x = Polynomial::var(Variable::Param(a as u32 + 1));
        let n = e.matrix().map(|c| x.scale(c));
        y = y.mul(&n.exp_nilpotent(Some(truncation)), Some(truncation));
    }
    GermChart::new(h.clone(), vectors.len() as u32, y, None, truncation)
}

/// The blocks `Y_{j+1,j}` and `Y_{j+2,j}` of a chart, completed inside
/// `G⁻` modulo the truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct WChart {
    pub hodge: HodgeNumbers,
    pub params: u32,
    pub y: BlockMatrix<Polynomial>,
    pub truncation: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WChartJson {
    pub hodge: HodgeNumbers,
    pub params: Vec<String>,
    pub blocks: BTreeMap<String, Vec<Vec<String>>>,
    pub truncation: u32,
}

impl WChart {
    pub fn project(chart: &GermChart) -> Self {
        let mut y = chart.y.clone();
        keep_gaps(&chart.hodge, &mut y, 2);
        WChart {
            hodge: chart.hodge.clone(),
            params: chart.params,
            y,
            truncation: chart.truncation,
        }
    }

    /// Builds the chart from values of the reduced coordinates.
    pub fn from_reduced(
        h: &HodgeNumbers,
        params: u32,
        values: &BTreeMap<Variable, Polynomial>,
        truncation: u32,
    ) -> Result<Self> {
        let reduced = h.reduced_variables();
        let mut y = BlockMatrix::zeros(h.shape());
        for (v, p) in values {
            if !reduced.contains(v) {
                return Err(Error::Invalid(format!("{} is not a reduced coordinate", v)));
            }
            let (a, b, r, c) = v.as_entry().unwrap();
            y.set_entry(a, b, r, c, p.truncate(truncation));
        }
        complete_group(h, &mut y, Some(truncation));
        keep_gaps(h, &mut y, 2);
        Ok(WChart {
            hodge: h.clone(),
            params,
            y,
            truncation,
        })
    }

    pub fn from_json(json: &WChartJson) -> Result<Self> {
        let params = parse_params(&json.params)?;
        let y = parse_group_blocks(&json.hodge, params, &json.blocks, json.truncation, 2)?;
        Ok(WChart {
            hodge: json.hodge.clone(),
            params,
            y,
            truncation: json.truncation,
        })
    }

    pub fn to_json(&self) -> WChartJson {
        WChartJson {
            hodge: self.hodge.clone(),
            params: param_names(self.params),
            blocks: blocks_to_json(&self.hodge, &self.y),
            truncation: self.truncation,
        }
    }

    /// Reduced coordinates of the chart.
    pub fn reduced_values(&self) -> BTreeMap<Variable, Polynomial> {
        self.hodge
            .reduced_variables()
            .into_iter()
            .map(|v| {
                let (a, b, r, c) = v.as_entry().unwrap();
                (v, self.y.entry(a, b, r, c).clone())
            })
            .collect()
    }

    /// Pulls the reduced coupled system back to the chart; returns the first
    /// nonvanishing generator entry, if any.
    pub fn coupled_witness(&self) -> Result<Option<String>> {
        if self.hodge.weight() < 2 {
            return Ok(None);
        }
        let sys = coupled_generators(&self.hodge, true)?;
        let map = self.reduced_values();
        let cap = self.truncation.saturating_sub(1);
        for ((a, b), (r, c), f) in sys.pullback(&map, Some(cap)) {
            if let Some((v, p)) = f.truncate(cap).first_nonzero() {
                return Ok(Some(format!(
                    "generator ({},{}) entry [{},{}]: coefficient of d{} is {}",
                    a,
                    b,
                    r + 1,
                    c + 1,
                    v,
                    p
                )));
            }
        }
        Ok(None)
    }
}

/// Solves `dY_{a,b} = Y_{a,b+1} dY_{b+1,b}` for the blocks of gap three and
/// more, by increasing gap, and checks the result.
pub fn extend_contact(w_chart: &WChart) -> Result<GermChart> {
    let h = &w_chart.hodge;
    let w = h.weight();
    let d = w_chart.truncation;
    if let Some(witness) = w_chart.coupled_witness()? {
        return Err(Error::Constraint(format!(
            "chart does not satisfy the coupled contact system: {}",
            witness
        )));
    }
    let mut y = w_chart.y.clone();
    let cap = d.saturating_sub(1);
    for gap in 3..=w {
        for b in 0..=w - gap {
            let a = b + gap;
            let rhs = poly_times_forms(&y.block(a, b + 1), &d_matrix(&y.block(b + 1, b)), Some(cap));
            let mut block = Matrix::<Polynomial>::zeros(rhs.rows(), rhs.cols());
            for (r, c, f) in rhs.entries() {
                let f = if d == 0 { OneForm::zero() } else { f.truncate(cap) };
                let p = radial_integrate(&f).map_err(|e| match e {
                    Error::NotClosed { witness } => Error::NotClosed {
                        witness: format!("block ({},{}) entry [{},{}]: {}", a, b, r + 1, c + 1, witness),
                    },
                    other => other,
                })?;
                block.set(r, c, p);
            }
            y.set_block(a, b, &block);
        }
    }
    let chart = GermChart::new(h.clone(), w_chart.params, y, None, d)?;
    let report = verify_horizontal(&chart);
    if let Some(v) = report.violations.first() {
        return Err(Error::Constraint(format!(
            "extension is not horizontal at block ({},{}) entry [{},{}]: {}",
            v.block.0, v.block.1, v.entry.0, v.entry.1, v.coefficient
        )));
    }
    Ok(chart)
}

/// A horizontal family through the identity for even weight `2k` with
/// `h^k` odd and `h^{k+1} ≥ 2`.
///
/// The middle block `B = Y_{k,k-1}` has its first `m = (h^k-1)/2` rows free,
/// the next `m` rows equal to `i` times them, and last row
/// `(x1, f_1(x1), ..., f_{h^{k+1}-1}(x1))`, so that `B^t B` and `dB^t∧dB`
/// depend on `x1` alone. Blocks `(j+1,j)` alternate zero and free going
/// down from `j = k-2`.
pub fn flexibility_family(h: &HodgeNumbers, f_choices: &[Polynomial], truncation: u32) -> Result<GermChart> {
    let w = h.weight();
    if h.is_odd() || w < 2 {
        return Err(Error::Invalid(format!("{} does not have even positive weight", h)));
    }
    let k = w / 2;
    let hk = h.h(k);
    let hk1 = h.h(k + 1);
    if hk.is_multiple_of(2) {
        return Err(Error::Invalid(format!("h^{} = {} is even", k, hk)));
    }
    if hk1 < 2 {
        return Err(Error::Invalid(format!("h^{} = {} is below 2", k + 1, hk1)));
    }
    if f_choices.len() != hk1 - 1 {
        return Err(Error::Invalid(format!(
            "expected {} functions, got {}",
            hk1 - 1,
            f_choices.len()
        )));
    }
    let t = Variable::Param(1);
    for (c, f) in f_choices.iter().enumerate() {
        if let Some(v) = f.variables().into_iter().find(|&v| v != t) {
            return Err(Error::Invalid(format!("function {} mentions {}; only x1 is allowed", c + 1, v)));
        }
        if !f.constant_term().is_zero() {
            return Err(Error::Invalid(format!("function {} has a nonzero constant term", c + 1)));
        }
    }
    let m = (hk - 1) / 2;
    let mut next = 2u32;
    let mut fresh = |graph: &mut Vec<Variable>, v: Variable| {
        let x = Variable::Param(next);
        next += 1;
        graph.push(v);
        Polynomial::var(x)
    };
    let mut graph = vec![Variable::entry(k, k - 1, 2 * m, 0)];
    let mut y = BlockMatrix::<Polynomial>::zeros(h.shape());
    let i_unit = GR::i();
    for r in 0..m {
        for c in 0..hk1 {
            let p = fresh(&mut graph, Variable::entry(k, k - 1, r, c));
            y.set_entry(k, k - 1, r + m, c, p.scale(&i_unit));
            y.set_entry(k, k - 1, r, c, p);
        }
    }
    y.set_entry(k, k - 1, 2 * m, 0, Polynomial::var(t));
    for (c, f) in f_choices.iter().enumerate() {
        y.set_entry(k, k - 1, 2 * m, c + 1, f.truncate(truncation));
    }
    let mut j = k as i64 - 3;
    while j >= 0 {
        let ju = j as usize;
        for (r, c) in h.free_positions(ju + 1, ju) {
            let p = fresh(&mut graph, Variable::entry(ju + 1, ju, r, c));
            y.set_entry(ju + 1, ju, r, c, p);
        }
        j -= 2;
    }
    // strict upper part of Y_{k+1,k-1} integrates B^t dB
    let b = y.block(k, k - 1);
    let cap = truncation.saturating_sub(1);
    let form = poly_times_forms(&b.transpose(), &d_matrix(&b), Some(cap));
    for r in 0..hk1 {
        for c in r + 1..hk1 {
            let p = radial_integrate(form.get(r, c))?;
            y.set_entry(k + 1, k - 1, r, c, p);
        }
    }
    complete_group(h, &mut y, Some(truncation));
    keep_gaps(h, &mut y, 2);
    let params = graph.len() as u32;
    let w_chart = WChart {
        hodge: h.clone(),
        params,
        y,
        truncation,
    };
    let chart = extend_contact(&w_chart)?;
    GermChart::new(h.clone(), params, chart.y, Some(graph), truncation)
}

/// Picks block entries of gap one whose linear parts are independent, one
/// per parameter.
pub fn choose_graph(chart: &GermChart) -> Result<Vec<Variable>> {
    let n = chart.params as usize;
    let candidates = chart.hodge.horizontal_variables();
    let mut chosen = Vec::new();
    let mut rows: Vec<Vec<GR>> = Vec::new();
    for v in candidates {
        if chosen.len() == n {
            break;
        }
        let row = chart.linear_part(&[v]).row(0).to_vec();
        let mut trial = rows.clone();
        trial.push(row.clone());
        let m = Matrix::from_rows(trial)?;
        if crate::linalg::rank(&m) == rows.len() + 1 {
            rows.push(row);
            chosen.push(v);
        }
    }
    if chosen.len() < n {
        return Err(Error::IncompatibleGraph(format!(
            "linear part has rank {} < {} parameters",
            chosen.len(),
            n
        )));
    }
    Ok(chosen)
}

/// Reparameterizes so that the entries in `graph` become the parameters.
pub fn to_graph(chart: &GermChart, graph: &[Variable]) -> Result<GermChart> {
    if chart.graph.as_deref() == Some(graph) {
        return Ok(chart.clone());
    }
    let n = chart.params as usize;
    if graph.len() != n {
        return Err(Error::IncompatibleGraph(format!(
            "{} graph entries for {} parameters",
            graph.len(),
            n
        )));
    }
    let d = chart.truncation;
    let lin = chart.linear_part(graph);
    let lin_inv = inverse(&lin).ok_or_else(|| {
        Error::IncompatibleGraph(format!(
            "linear part on {} is singular",
            graph.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
        ))
    })?;
    let params = param_variables(chart.params);
    let phi: Vec<Polynomial> = graph.iter().map(|&v| chart.entry(v).clone()).collect();
    let apply_inv = |rhs: &[Polynomial]| -> Vec<Polynomial> {
        let col = Matrix::from_fn(n, 1, |r, _| rhs[r].clone());
        let lp = lin_inv.map(|c| Polynomial::constant(c.clone()));
        let out = product(&lp, &col, |a, b| a.mul_trunc(b, Some(d)));
        (0..n).map(|r| out.get(r, 0).clone()).collect()
    };
    let u: Vec<Polynomial> = params.iter().map(|&v| Polynomial::var(v)).collect();
    let mut psi = apply_inv(&u);
    for _ in 1..d.max(1) {
        let map: BTreeMap<Variable, Polynomial> = params.iter().copied().zip(psi.iter().cloned()).collect();
        let residual: Vec<Polynomial> = (0..n)
            .map(|a| &u[a] - &phi[a].substitute(&map, Some(d)))
            .collect();
        let step = apply_inv(&residual);
        psi = psi.iter().zip(&step).map(|(p, s)| (p + s).truncate(d)).collect();
    }
    let map: BTreeMap<Variable, Polynomial> = params.iter().copied().zip(psi).collect();
    let y = chart.y.map(|p| p.substitute(&map, Some(d)));
    GermChart::new(chart.hodge.clone(), chart.params, y, Some(graph.to_vec()), d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Difference {
    pub degree: u32,
    pub block: (usize, usize),
    pub entry: (usize, usize),
    pub monomial: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub equal: bool,
    pub compared_to_degree: u32,
    pub graph: Vec<String>,
    pub first_difference: Option<Difference>,
}

/// Brings both charts to a common graph form and compares them degree by
/// degree up to the smaller truncation.
pub fn compare_germs(a: &GermChart, b: &GermChart) -> Result<Comparison> {
    if a.hodge != b.hodge {
        return Err(Error::ShapeMismatch(format!("Hodge numbers {} and {} differ", a.hodge, b.hodge)));
    }
    if a.params != b.params {
        return Err(Error::IncompatibleGraph(format!(
            "{} and {} parameters",
            a.params, b.params
        )));
    }
    let graph = match (&a.graph, &b.graph) {
        (Some(g), _) | (None, Some(g)) => g.clone(),
        (None, None) => choose_graph(a)?,
    };
    let ga = to_graph(a, &graph)?;
    let gb = to_graph(b, &graph)?;
    let d = a.truncation.min(b.truncation);
    let w = a.hodge.weight();
    let mut first = None;
    'outer: for deg in 1..=d {
        for i in 0..=w {
            for j in 0..i {
                let (ma, mb) = (ga.y.block(i, j), gb.y.block(i, j));
                for (r, c, pa) in ma.entries() {
                    let ha = pa.homogeneous(deg);
                    let hb = mb.get(r, c).homogeneous(deg);
                    if ha != hb {
                        let diff = &ha - &hb;
                        let (mono, _) = diff.terms().next().expect("nonzero difference");
                        first = Some(Difference {
                            degree: deg,
                            block: (i, j),
                            entry: (r + 1, c + 1),
                            monomial: mono.to_string(),
                            left: ha.to_string(),
                            right: hb.to_string(),
                        });
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(Comparison {
        equal: first.is_none(),
        compared_to_degree: d,
        graph: graph.iter().map(|v| v.to_string()).collect(),
        first_difference: first,
    })
}
