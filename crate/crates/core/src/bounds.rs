//! Dimension bounds for integral elements: the closed-form `q` quantities,
//! the box-constrained quadratic bound functions, and constructive lower
//! bounds from coordinate patterns.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hodgedomain::HodgeNumbers;
use crate::linalg::{nullspace, rank, rref, Matrix};
use crate::nilalgebra::{basis_of_g11, check_integral_element, AlgebraElement, IntegralElement};
use crate::par::Exec;
use crate::scalarforms::{GaussianRational as GR, Polynomial, Variable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QMode {
    AsPrinted,
    ProofDerived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QReport {
    pub mode: QMode,
    pub values: Vec<NamedValue>,
    pub max: i64,
    pub argmax: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q2bar_branch: Option<String>,
}

fn hu(h: &HodgeNumbers, l: usize) -> i64 {
    h.h(l) as i64
}

/// `Σ_{i≥0} h^{s+2i} h^{s+1+2i}`.
fn alternating_sum(h: &HodgeNumbers, start: usize) -> i64 {
    let w = h.weight();
    let mut s = 0;
    let mut l = start;
    while l <= w {
        s += hu(h, l) * hu(h, l + 1);
        l += 2;
    }
    s
}

/// `q̄₂` and the name of the branch used.
pub fn q2bar(h: &HodgeNumbers) -> (i64, &'static str) {
    let k = h.k();
    let (hk, hk1) = (hu(h, k), hu(h, k + 1));
    if hk1 == 0 {
        (0, "h^{k+1} = 0")
    } else if hk1 == 1 {
        (hk, "h^{k+1} = 1")
    } else if hk % 2 == 0 {
        (hk1 * hk / 2, "h^k even")
    } else {
        (hk1 * (hk - 1) / 2 + 1, "h^k odd")
    }
}

fn report(mode: QMode, values: Vec<NamedValue>, q2bar_branch: Option<String>) -> QReport {
    let best = values
        .iter()
        .fold(None::<&NamedValue>, |acc, v| match acc {
            Some(a) if a.value >= v.value => Some(a),
            _ => Some(v),
        })
        .cloned()
        .unwrap_or(NamedValue {
            name: "none".into(),
            value: 0,
        });
    QReport {
        mode,
        values,
        max: best.value,
        argmax: best.name,
        q2bar_branch,
    }
}

/// The closed-form quantities, evaluated literally with `h^l = 0` for
/// `l > w`.
pub fn q_printed(h: &HodgeNumbers) -> QReport {
    let k = h.k();
    let nv = |name: &str, value| NamedValue {
        name: name.into(),
        value,
    };
    if h.is_odd() {
        let hk1 = hu(h, k + 1);
        let q1 = alternating_sum(h, k + 2);
        let q2 = hk1 * (hk1 + 1) / 2 + alternating_sum(h, k + 3);
        report(QMode::AsPrinted, vec![nv("q_odd_1", q1), nv("q_odd_2", q2)], None)
    } else {
        let (bar, branch) = q2bar(h);
        let mut values = vec![
            nv("q_even_1", alternating_sum(h, k + 1)),
            nv("q_even_2", bar + alternating_sum(h, k + 2)),
        ];
        if h.weight() >= 4 && h.h(k + 1) >= 1 {
            let q3 = hu(h, k) + hu(h, k + 2) * (hu(h, k + 1) - 1) + alternating_sum(h, k + 3);
            values.push(nv("q_even_3", q3));
        }
        report(QMode::AsPrinted, values, Some(branch.into()))
    }
}

/// Maximizes each bound function over its box and reports the branch maxima.
pub fn q_proof(h: &HodgeNumbers) -> QReport {
    let values = proof_qps(h)
        .iter()
        .map(|qp| NamedValue {
            name: qp.label.clone(),
            value: solve_box_qp(qp, Exec::default()).max,
        })
        .collect();
    report(QMode::ProofDerived, values, None)
}

pub fn q_values(h: &HodgeNumbers, mode: QMode) -> QReport {
    match mode {
        QMode::AsPrinted => q_printed(h),
        QMode::ProofDerived => q_proof(h),
    }
}

/// Adds `delta` to the objective where variable `var` equals `at`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Correction {
    pub var: usize,
    pub at: i64,
    pub delta: i64,
}

/// Maximize a quadratic polynomial in `x1..xm` over an integer box.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxQP {
    pub label: String,
    pub names: Vec<String>,
    pub ranges: Vec<(i64, i64)>,
    #[serde(serialize_with = "display")]
    pub objective: Polynomial,
    pub correction: Option<Correction>,
}

fn display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl BoxQP {
    pub fn evaluate(&self, point: &[i64]) -> i64 {
        let at: BTreeMap<Variable, GR> = point
            .iter()
            .enumerate()
            .map(|(i, &v)| (Variable::Param(i as u32 + 1), GR::from_integer(v)))
            .collect();
        let mut value = self
            .objective
            .evaluate(&at)
            .to_i64()
            .expect("bound functions are integral at integer points");
        if let Some(c) = &self.correction {
            if point[c.var] == c.at {
                value += c.delta;
            }
        }
        value
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPoint {
    pub point: Vec<String>,
    pub value: String,
    pub inside: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QpSolution {
    pub label: String,
    pub max: i64,
    /// All maximizing vertices, lexicographically sorted.
    pub vertices: Vec<Vec<i64>>,
    pub interior_critical: Option<CriticalPoint>,
}

pub fn solve_box_qp(qp: &BoxQP, exec: Exec) -> QpSolution {
    let m = qp.ranges.len();
    let vertices: BTreeSet<Vec<i64>> = (0..1usize << m)
        .map(|mask| {
            (0..m)
                .map(|i| if mask >> i & 1 == 1 { qp.ranges[i].1 } else { qp.ranges[i].0 })
                .collect()
        })
        .collect();
    let vertices: Vec<Vec<i64>> = vertices.into_iter().collect();
    let values = exec.map(&vertices, |v| qp.evaluate(v));
    let max = values.iter().copied().max().unwrap_or(0);
    let best = vertices
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v == max)
        .map(|(p, _)| p.clone())
        .collect();
    QpSolution {
        label: qp.label.clone(),
        max,
        vertices: best,
        interior_critical: critical_point(qp),
    }
}

/// The unique solution of `∇f = 0`, if the gradient system is nonsingular.
fn critical_point(qp: &BoxQP) -> Option<CriticalPoint> {
    let m = qp.ranges.len();
    if m == 0 {
        return None;
    }
    let zero: BTreeMap<Variable, GR> = (1..=m as u32).map(|i| (Variable::Param(i), GR::zero())).collect();
    let mut aug = Matrix::<GR>::zeros(m, m + 1);
    for i in 0..m {
        let g = qp.objective.partial(Variable::Param(i as u32 + 1));
        let c0 = g.evaluate(&zero);
        for j in 0..m {
            let coeff = g.partial(Variable::Param(j as u32 + 1)).evaluate(&zero);
            aug.set(i, j, coeff);
        }
        aug.set(i, m, -c0);
    }
    let pivots = rref(&mut aug);
    if pivots.len() < m || pivots.contains(&m) {
        return None;
    }
    let point: Vec<GR> = (0..m).map(|i| aug.get(i, m).clone()).collect();
    let at: BTreeMap<Variable, GR> = point
        .iter()
        .enumerate()
        .map(|(i, v)| (Variable::Param(i as u32 + 1), v.clone()))
        .collect();
    let inside = point.iter().zip(&qp.ranges).all(|(p, &(lo, hi))| {
        let re = p.re();
        p.is_real() && re > &BigRational::from_integer(lo.into()) && re < &BigRational::from_integer(hi.into())
    });
    Some(CriticalPoint {
        point: point.iter().map(|p| p.to_string()).collect(),
        value: qp.objective.evaluate(&at).to_string(),
        inside,
    })
}

fn y(i: usize) -> Polynomial {
    Polynomial::var(Variable::Param(i as u32 + 1))
}

fn c(n: i64) -> Polynomial {
    Polynomial::constant(GR::from_integer(n))
}

fn half() -> GR {
    GR::from_ratio(1, 2)
}

/// The bound functions: one for odd weight, branches (a) and (b) for even.
///
/// Variable `i` is `y_{i+1,i}`, the largest number of pattern coordinates in
/// a column of block `(i+1,i)`, ranging over `[0, h^{w-i-1}]`.
pub fn proof_qps(h: &HodgeNumbers) -> Vec<BoxQP> {
    let w = h.weight();
    let k = h.k();
    let name = |j: usize| format!("y[{},{}]", j + 1, j);
    let range = |j: usize| (0, hu(h, w - j - 1));
    if w == 0 {
        return vec![BoxQP {
            label: "trivial".into(),
            names: vec![],
            ranges: vec![],
            objective: Polynomial::zero(),
            correction: None,
        }];
    }
    // Σ_{j=lo}^{hi} y_{j+1,j} (h^{w-j} - y_{j,j-1}), with y_{0,-1} = 0
    let chain = |hi: usize| {
        let mut f = Polynomial::zero();
        for j in 0..hi {
            let prev = if j == 0 { Polynomial::zero() } else { y(j - 1) };
            f = f + y(j) * (c(hu(h, w - j)) - prev);
        }
        f
    };
    if h.is_odd() {
        let mut f = chain(k);
        if k == 0 {
            let a = hu(h, 1);
            f = c(a * (a + 1) / 2);
        } else {
            let t = c(hu(h, w - k)) - y(k - 1);
            f = f + (t.clone() * (t + c(1))).scale(&half());
        }
        return vec![BoxQP {
            label: "odd".into(),
            names: (0..k).map(name).collect(),
            ranges: (0..k).map(range).collect(),
            objective: f,
            correction: None,
        }];
    }
    let hk = hu(h, k);
    let hk1 = hu(h, k + 1);
    // branch (a): y_{j+1,j} free for j ≤ k-2, c = h^{k+1} - y_{k-1,k-2}
    let m = k - 1;
    let cvar = if k >= 2 { c(hk1) - y(k - 2) } else { c(hk1) };
    let dim_y = if hk % 2 == 0 {
        cvar.scale(&GR::from_integer(hk)).scale(&half())
    } else {
        cvar.scale(&GR::from_integer(hk - 1)).scale(&half()) + c(1)
    };
    let mut objective = chain(m) + dim_y;
    // dim Y is 0, not 1, when c = 0 and h^k is odd
    let mut correction = None;
    if hk % 2 == 1 {
        if k >= 2 {
            correction = Some(Correction {
                var: k - 2,
                at: hk1,
                delta: -1,
            });
        } else if hk1 == 0 {
            objective = objective - c(1);
        }
    }
    let mut out = vec![BoxQP {
        label: "even_a".into(),
        names: (0..m).map(name).collect(),
        ranges: (0..m).map(range).collect(),
        objective,
        correction,
    }];
    // branch (b): y_{k-1,k-2} = h^{k+1} - 1, the middle block contributes h^k
    if hk1 >= 1 {
        let mut ranges: Vec<(i64, i64)> = (0..m).map(range).collect();
        if k >= 2 {
            ranges[k - 2] = (hk1 - 1, hk1 - 1);
        } else if hk1 != 1 {
            return out;
        }
        out.push(BoxQP {
            label: "even_b".into(),
            names: (0..m).map(name).collect(),
            ranges,
            objective: chain(m) + c(hk),
            correction: None,
        });
    }
    out
}

/// A set of free coordinates of `g^{-1,1}` declared independent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoordinatePattern {
    pub hodge: HodgeNumbers,
    pub entries: Vec<Variable>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternJson {
    pub hodge: HodgeNumbers,
    pub entries: Vec<String>,
}

impl CoordinatePattern {
    pub fn new(h: &HodgeNumbers, mut entries: Vec<Variable>) -> Result<Self> {
        let free = h.horizontal_variables();
        for v in &entries {
            if free.binary_search(v).is_err() {
                return Err(Error::EntryOutOfRange {
                    name: v.to_string(),
                    reason: "not a free coordinate of a first sub-diagonal block (lower triangle of a symmetric block is identified with the upper)".into(),
                });
            }
        }
        entries.sort();
        entries.dedup();
        Ok(CoordinatePattern {
            hodge: h.clone(),
            entries,
        })
    }

    pub fn from_json(json: &PatternJson) -> Result<Self> {
        let ctx = crate::scalarforms::ParseContext::with_hodge(&json.hodge);
        let entries = json
            .entries
            .iter()
            .map(|s| crate::scalarforms::parse_variable(s, &ctx))
            .collect::<Result<Vec<_>>>()?;
        CoordinatePattern::new(&json.hodge, entries)
    }

    pub fn to_json(&self) -> PatternJson {
        PatternJson {
            hodge: self.hodge.clone(),
            entries: self.entries.iter().map(|v| v.to_string()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn vectors(&self) -> Vec<AlgebraElement> {
        self.entries
            .iter()
            .map(|&v| AlgebraElement::coordinate_vector(&self.hodge, v).expect("validated entry"))
            .collect()
    }

    pub fn integral_element(&self) -> Result<IntegralElement> {
        check_integral_element(&self.hodge, &self.vectors())
    }
}

/// Pairs of free horizontal coordinates whose coordinate vectors do not
/// commute.
pub struct ConflictGraph {
    pub vertices: Vec<Variable>,
    adjacency: Vec<u128>,
}

pub const MAX_EXHAUSTIVE: usize = 128;

impl ConflictGraph {
    pub fn new(h: &HodgeNumbers, exec: Exec) -> Self {
        let vertices = h.horizontal_variables();
        let basis = basis_of_g11(h);
        let n = vertices.len();
        let rows = exec.map_range(n, |a| {
            let mut bits = 0u128;
            for b in 0..n.min(MAX_EXHAUSTIVE) {
                if a != b && !basis[a].bracket(&basis[b]).expect("same hodge").is_zero() {
                    bits |= 1 << b;
                }
            }
            bits
        });
        ConflictGraph {
            vertices,
            adjacency: rows,
        }
    }

    pub fn conflicts(&self, a: usize, b: usize) -> bool {
        self.adjacency[a] >> b & 1 == 1
    }

    /// Maximum independent sets as bitmasks (at most `cap` kept), their
    /// size and their total number. Bron–Kerbosch with pivoting on the
    /// commuting graph, pruned by size.
    fn maximum_sets(&self, cap: usize) -> (usize, Vec<u128>, usize) {
        let n = self.vertices.len();
        let all = if n >= 128 { u128::MAX } else { (1u128 << n) - 1 };
        let commuting: Vec<u128> = (0..n).map(|v| all & !self.adjacency[v] & !(1u128 << v)).collect();
        let mut s = Search {
            commuting: &commuting,
            best: 0,
            sets: Vec::new(),
            count: 0,
            cap,
        };
        s.expand(0, all, 0);
        s.sets.sort();
        (s.best, s.sets, s.count)
    }
}

struct Search<'a> {
    commuting: &'a [u128],
    best: usize,
    sets: Vec<u128>,
    count: usize,
    cap: usize,
}

impl Search<'_> {
    fn expand(&mut self, r: u128, mut p: u128, mut x: u128) {
        let size = r.count_ones() as usize;
        if p == 0 {
            if x == 0 {
                if size > self.best {
                    self.best = size;
                    self.sets.clear();
                    self.count = 0;
                }
                if size == self.best {
                    self.count += 1;
                    if self.sets.len() < self.cap {
                        self.sets.push(r);
                    }
                }
            }
            return;
        }
        if size + (p.count_ones() as usize) < self.best {
            return;
        }
        let px = p | x;
        let pivot = (0..128)
            .filter(|&u| px >> u & 1 == 1)
            .max_by_key(|&u| (p & self.commuting[u]).count_ones())
            .unwrap();
        let mut todo = p & !self.commuting[pivot];
        while todo != 0 {
            let v = todo.trailing_zeros() as usize;
            let bit = 1u128 << v;
            todo &= !bit;
            self.expand(r | bit, p & self.commuting[v], x & self.commuting[v]);
            p &= !bit;
            x |= bit;
        }
    }
}

/// Bracket structure of `g^{-1,1}` in its coordinate basis. Brackets of
/// horizontal vectors live in the blocks of gap two, flattened here into
/// one index space.
pub struct HorizontalAlgebra {
    pub hodge: HodgeNumbers,
    pub vars: Vec<Variable>,
    /// Gap-one blocks `(a+1, a)` of each coordinate vector.
    blocks: Vec<Vec<Matrix<GR>>>,
    gap2_offsets: Vec<usize>,
    gap2_len: usize,
    /// `table[i][j]` is `[b_i, b_j]` as a sparse vector.
    table: Vec<Vec<Vec<(usize, GR)>>>,
}

impl HorizontalAlgebra {
    pub fn new(h: &HodgeNumbers, exec: Exec) -> Self {
        let w = h.weight();
        let vars = h.horizontal_variables();
        let basis = basis_of_g11(h);
        let blocks: Vec<Vec<Matrix<GR>>> = basis
            .iter()
            .map(|e| (0..w).map(|a| e.matrix().block(a + 1, a)).collect())
            .collect();
        let mut gap2_offsets = Vec::new();
        let mut total = 0;
        for a in 0..w.saturating_sub(1) {
            gap2_offsets.push(total);
            total += h.block_dim(a + 2) * h.block_dim(a);
        }
        let mut alg = HorizontalAlgebra {
            hodge: h.clone(),
            vars,
            blocks,
            gap2_offsets,
            gap2_len: total,
            table: Vec::new(),
        };
        let n = alg.vars.len();
        let table = exec.map_range(n, |i| (0..n).map(|j| alg.bracket_blocks(&alg.blocks[i], &alg.blocks[j])).collect());
        alg.table = table;
        alg
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// `[X, Y]` on gap-two blocks: `X_{a+2,a+1}Y_{a+1,a} - Y_{a+2,a+1}X_{a+1,a}`.
    fn bracket_blocks(&self, x: &[Matrix<GR>], y: &[Matrix<GR>]) -> Vec<(usize, GR)> {
        let mut out = Vec::new();
        for a in 0..self.gap2_offsets.len() {
            let m = crate::linalg::mul_scalar(&x[a + 1], &y[a]).sub(&crate::linalg::mul_scalar(&y[a + 1], &x[a]));
            for (r, c, v) in m.entries() {
                if !v.is_zero() {
                    out.push((self.gap2_offsets[a] + r * m.cols() + c, v.clone()));
                }
            }
        }
        out
    }

    pub fn commute(&self, i: usize, j: usize) -> bool {
        self.table[i][j].is_empty()
    }

    /// `[Σ c_i b_i, Σ d_j b_j]` flattened.
    pub fn bracket(&self, c: &[GR], d: &[GR]) -> Vec<GR> {
        let mut out = vec![GR::zero(); self.gap2_len];
        for (i, ci) in c.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, dj) in d.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let f = ci * dj;
                for (pos, v) in &self.table[i][j] {
                    out[*pos] += &(&f * v);
                }
            }
        }
        out
    }

    /// Coordinates of `g^{-1,1}` commuting with every vector of `family`.
    pub fn centralizer(&self, family: &[Vec<GR>]) -> Vec<Vec<GR>> {
        let n = self.dim();
        if family.is_empty() {
            return (0..n).map(|i| unit(n, i)).collect();
        }
        let rows = family.len() * self.gap2_len;
        let mut m = Matrix::<GR>::zeros(rows.max(1), n);
        for i in 0..n {
            let b = unit(n, i);
            for (f, e) in family.iter().enumerate() {
                for (pos, v) in self.bracket(&b, e).into_iter().enumerate() {
                    if !v.is_zero() {
                        m.set(f * self.gap2_len + pos, i, v);
                    }
                }
            }
        }
        nullspace(&m)
    }

    pub fn to_elements(&self, family: &[Vec<GR>]) -> Result<Vec<AlgebraElement>> {
        family
            .iter()
            .map(|c| {
                let values: BTreeMap<Variable, GR> = self
                    .vars
                    .iter()
                    .zip(c)
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, v)| (*k, v.clone()))
                    .collect();
                AlgebraElement::from_free(&self.hodge, &values)
            })
            .collect()
    }

    fn conflict_graph(&self) -> ConflictGraph {
        let n = self.dim().min(MAX_EXHAUSTIVE);
        let adjacency = (0..n)
            .map(|a| {
                (0..n)
                    .filter(|&b| a != b && !self.commute(a, b))
                    .fold(0u128, |acc, b| acc | 1 << b)
            })
            .collect();
        ConflictGraph {
            vertices: self.vars[..n].to_vec(),
            adjacency,
        }
    }
}

fn unit(n: usize, i: usize) -> Vec<GR> {
    let mut v = vec![GR::zero(); n];
    v[i] = GR::one();
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub hodge: HodgeNumbers,
    pub best: usize,
    pub exhaustive: bool,
    /// Set when the entry count exceeded the budget and the heuristic ran.
    pub fallback: bool,
    pub witness: CoordinatePattern,
    /// Number of maximum patterns (exhaustive mode only).
    pub num_maximum: usize,
    /// The first maximum patterns in sorted order.
    pub maximum_patterns: Vec<CoordinatePattern>,
}

/// Largest abelian coordinate patterns of `g^{-1,1}`.
///
/// Exhaustive when the number of free horizontal coordinates is at most
/// `budget` (and at most 128); otherwise tries every choice of full or empty
/// sub-diagonal blocks, completed greedily, and sets `fallback`.
pub fn pattern_search(h: &HodgeNumbers, budget: usize, keep: usize, exec: Exec) -> Result<SearchResult> {
    let n = h.horizontal_variables().len();
    if n <= budget && n <= MAX_EXHAUSTIVE {
        let alg = HorizontalAlgebra::new(h, exec);
        exhaustive_search(&alg, keep)
    } else {
        heuristic_search(h)
    }
}

fn exhaustive_search(alg: &HorizontalAlgebra, keep: usize) -> Result<SearchResult> {
    let h = &alg.hodge;
    let graph = alg.conflict_graph();
    let (best, sets, count) = graph.maximum_sets(keep.max(1));
    let patterns: Vec<CoordinatePattern> = sets
        .iter()
        .map(|&bits| {
            let entries = (0..graph.vertices.len())
                .filter(|&i| bits >> i & 1 == 1)
                .map(|i| graph.vertices[i])
                .collect();
            CoordinatePattern::new(h, entries)
        })
        .collect::<Result<_>>()?;
    let mut patterns = patterns;
    patterns.sort();
    let witness = patterns.first().cloned().unwrap_or(CoordinatePattern {
        hodge: h.clone(),
        entries: vec![],
    });
    witness.integral_element()?;
    Ok(SearchResult {
        hodge: h.clone(),
        best,
        exhaustive: true,
        fallback: false,
        witness,
        num_maximum: count,
        maximum_patterns: patterns,
    })
}

fn heuristic_search(h: &HodgeNumbers) -> Result<SearchResult> {
    let w = h.weight();
    let canonical: Vec<usize> = (0..w).filter(|&j| h.is_canonical(j + 1, j)).collect();
    let vars = h.horizontal_variables();
    let vectors: Vec<AlgebraElement> = vars
        .iter()
        .map(|&v| AlgebraElement::coordinate_vector(h, v).expect("free variable"))
        .collect();
    let mut best: Option<Vec<usize>> = None;
    for mask in 0..1usize << canonical.len() {
        let mut chosen: Vec<usize> = Vec::new();
        for (i, v) in vars.iter().enumerate() {
            let (a, b, _, _) = v.as_entry().unwrap();
            let Some(pos) = canonical.iter().position(|&j| (j + 1, j) == (a, b)) else {
                continue;
            };
            if mask >> pos & 1 == 0 {
                continue;
            }
            let ok = chosen
                .iter()
                .all(|&c| vectors[c].bracket(&vectors[i]).map(|x| x.is_zero()).unwrap_or(false));
            if ok {
                chosen.push(i);
            }
        }
        if best.as_ref().is_none_or(|b| chosen.len() > b.len()) {
            best = Some(chosen);
        }
    }
    let entries = best.unwrap_or_default().into_iter().map(|i| vars[i]).collect();
    let witness = CoordinatePattern::new(h, entries)?;
    witness.integral_element()?;
    Ok(SearchResult {
        hodge: h.clone(),
        best: witness.dim(),
        exhaustive: false,
        fallback: true,
        num_maximum: 0,
        maximum_patterns: vec![witness.clone()],
        witness,
    })
}

/// A random invertible integer matrix with determinant one.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Matrix<GR> {
    let mut lower = Matrix::<GR>::identity(n);
    let mut upper = Matrix::<GR>::identity(n);
    for r in 0..n {
        for c in 0..r {
            lower.set(r, c, GR::from_integer(rng.gen_range(-2..=2)));
            upper.set(c, r, GR::from_integer(rng.gen_range(-2..=2)));
        }
    }
    crate::linalg::mul_scalar(&lower, &upper)
}

/// A random element of the grading group: `g_i` unimodular for `i < w-i`,
/// `g_{w-i} = g_i^{-t}`, and a signed permutation on a middle block.
pub fn random_grading_element(h: &HodgeNumbers, rng: &mut ChaCha8Rng) -> Vec<(Matrix<GR>, Matrix<GR>)> {
    let w = h.weight();
    let mut g: Vec<Option<(Matrix<GR>, Matrix<GR>)>> = vec![None; w + 1];
    for i in 0..=w {
        let n = h.block_dim(i);
        if i < w - i {
            let m = random_unimodular(rng, n);
            let inv = crate::linalg::inverse(&m).expect("unimodular");
            g[w - i] = Some((inv.transpose(), m.transpose()));
            g[i] = Some((m, inv));
        } else if i == w - i {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            let mut p = Matrix::<GR>::zeros(n, n);
            for (r, &c) in perm.iter().enumerate() {
                let s = if rng.gen_bool(0.5) { 1 } else { -1 };
                p.set(r, c, GR::from_integer(s));
            }
            let t = p.transpose();
            g[i] = Some((p, t));
        }
    }
    g.into_iter().map(|x| x.expect("every block assigned")).collect()
}

impl HorizontalAlgebra {
    /// Coordinates of `g X g^{-1}` for `X` given by coordinates.
    pub fn conjugate(&self, g: &[(Matrix<GR>, Matrix<GR>)], c: &[GR]) -> Vec<GR> {
        let mut out = Vec::with_capacity(self.dim());
        let mut cache: HashMap<(usize, usize), Matrix<GR>> = HashMap::new();
        for v in &self.vars {
            let (a, b, r, col) = v.as_entry().unwrap();
            let m = cache.entry((a, b)).or_insert_with(|| {
                let mut x = Matrix::<GR>::zeros(self.hodge.block_dim(a), self.hodge.block_dim(b));
                for (i, ci) in c.iter().enumerate() {
                    if !ci.is_zero() {
                        x = x.add(&self.blocks[i][b].map(|e| e * ci));
                    }
                }
                let left = crate::linalg::mul_scalar(&g[a].0, &x);
                crate::linalg::mul_scalar(&left, &g[b].1)
            });
            out.push(m.get(r, col).clone());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeFamily {
    pub hodge: String,
    pub pattern_dim: usize,
    pub final_dim: usize,
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub seed: u64,
    pub families: usize,
    pub exceeded: Vec<ProbeFamily>,
    pub largest_ratio_family: Option<ProbeFamily>,
    /// How many families were enlarged beyond their starting pattern.
    pub enlarged: usize,
}

/// Builds random commuting families: a random coordinate pattern, a random
/// change of basis, conjugation by a random grading-group element, then
/// greedy enlargement inside the centralizer. Every family is validated and
/// compared with the proof bound.
pub fn random_commuting_probe(hs: &[HodgeNumbers], families: usize, seed: u64, exec: Exec) -> Result<ProbeReport> {
    if hs.is_empty() {
        return Err(Error::Invalid("no Hodge numbers to sample from".into()));
    }
    let algebras: Vec<HorizontalAlgebra> = hs.iter().map(|h| HorizontalAlgebra::new(h, exec)).collect();
    let bounds: Vec<i64> = hs.iter().map(|h| q_proof(h).max).collect();
    let results = exec.map_range(families, |f| -> Result<ProbeFamily> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (f as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let which = rng.gen_range(0..hs.len());
        let alg = &algebras[which];
        let family = random_family(alg, &mut rng);
        let pattern_dim = family.0;
        let vectors = family.1;
        check_integral_element(&alg.hodge, &alg.to_elements(&vectors)?)?;
        Ok(ProbeFamily {
            hodge: hs[which].to_string(),
            pattern_dim,
            final_dim: vectors.len(),
            bound: bounds[which],
        })
    });
    let results: Vec<ProbeFamily> = results.into_iter().collect::<Result<_>>()?;
    let exceeded = results.iter().filter(|r| r.final_dim as i64 > r.bound).cloned().collect();
    let largest = results
        .iter()
        .filter(|r| r.bound > 0)
        .max_by(|a, b| {
            (a.final_dim as i64 * b.bound)
                .cmp(&(b.final_dim as i64 * a.bound))
                .then_with(|| b.hodge.cmp(&a.hodge))
        })
        .cloned();
    Ok(ProbeReport {
        seed,
        families,
        exceeded,
        largest_ratio_family: largest,
        enlarged: results.iter().filter(|r| r.final_dim > r.pattern_dim).count(),
    })
}

fn random_family(alg: &HorizontalAlgebra, rng: &mut ChaCha8Rng) -> (usize, Vec<Vec<GR>>) {
    let n = alg.dim();
    if n == 0 {
        return (0, vec![]);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        if chosen.iter().all(|&c| alg.commute(c, i)) {
            chosen.push(i);
        }
    }
    let keep = rng.gen_range(1..=chosen.len());
    chosen.truncate(keep);
    let d = chosen.len();
    let a = random_unimodular(rng, d);
    let mut family: Vec<Vec<GR>> = (0..d)
        .map(|r| {
            let mut v = vec![GR::zero(); n];
            for (s, &c) in chosen.iter().enumerate() {
                v[c] = a.get(r, s).clone();
            }
            v
        })
        .collect();
    let g = random_grading_element(&alg.hodge, rng);
    family = family.iter().map(|v| alg.conjugate(&g, v)).collect();
    for _ in 0..n {
        let cent = alg.centralizer(&family);
        if cent.len() <= family.len() {
            break;
        }
        let coeffs: Vec<GR> = cent.iter().map(|_| GR::from_integer(rng.gen_range(-3..=3))).collect();
        let candidate: Vec<GR> = (0..n)
            .map(|i| cent.iter().zip(&coeffs).fold(GR::zero(), |acc, (b, c)| &acc + &(&b[i] * c)))
            .collect();
        let mut trial = family.clone();
        trial.push(candidate);
        let m = Matrix::from_rows(trial.clone()).expect("rectangular");
        if rank(&m) == trial.len() {
            family = trial;
        }
    }
    (d, family)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub hodge: Vec<usize>,
    pub printed_max: i64,
    pub proof_max: i64,
    pub pattern_best: usize,
    pub exhaustive: bool,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub max_weight: usize,
    pub max_h: usize,
    pub budget: usize,
    pub entries: Vec<SweepEntry>,
    /// Hodge vectors carrying at least one flag.
    pub flagged: Vec<String>,
}

/// Every symmetric Hodge vector of weight `1..=max_weight` with entries in
/// `0..=max_h`, not all zero.
pub fn sweep_hodge_numbers(max_weight: usize, max_h: usize) -> Vec<HodgeNumbers> {
    let mut out = Vec::new();
    for w in 1..=max_weight {
        let half = w / 2 + 1;
        let total = (max_h + 1).pow(half as u32);
        for code in 0..total {
            let mut first = Vec::with_capacity(half);
            let mut c = code;
            for _ in 0..half {
                first.push(c % (max_h + 1));
                c /= max_h + 1;
            }
            if first.iter().all(|&x| x == 0) {
                continue;
            }
            let h: Vec<usize> = (0..=w).map(|l| first[l.min(w - l)]).collect();
            out.push(HodgeNumbers::new(w, h).expect("symmetric by construction"));
        }
    }
    out.sort();
    out
}

/// Compares the closed forms, the proof bound and the best coordinate
/// pattern for each Hodge vector and flags every strict disagreement.
pub fn sweep(max_weight: usize, max_h: usize, budget: usize, exec: Exec) -> Result<SweepReport> {
    let hs = sweep_hodge_numbers(max_weight, max_h);
    let entries = exec.map(&hs, |h| -> Result<SweepEntry> {
        let printed = q_printed(h).max;
        let proof = q_proof(h).max;
        let search = pattern_search(h, budget, 1, Exec::Sequential)?;
        let best = search.best as i64;
        let mut flags = Vec::new();
        if printed < best {
            flags.push("printed_below_witness".to_string());
        }
        if printed < proof {
            flags.push("printed_below_proof".to_string());
        }
        if printed > proof {
            flags.push("printed_above_proof".to_string());
        }
        if best > proof {
            flags.push("witness_above_proof".to_string());
        }
        Ok(SweepEntry {
            hodge: h.values().to_vec(),
            printed_max: printed,
            proof_max: proof,
            pattern_best: search.best,
            exhaustive: search.exhaustive,
            flags,
        })
    });
    let entries: Vec<SweepEntry> = entries.into_iter().collect::<Result<_>>()?;
    let flagged = entries
        .iter()
        .filter(|e| !e.flags.is_empty())
        .map(|e| HodgeNumbers::new(e.hodge.len() - 1, e.hodge.clone()).unwrap().to_string())
        .collect();
    Ok(SweepReport {
        max_weight,
        max_h,
        budget,
        entries,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hodge(h: &[usize]) -> HodgeNumbers {
        HodgeNumbers::new(h.len() - 1, h.to_vec()).unwrap()
    }

    #[test]
    fn printed_values() {
        let r = q_printed(&hodge(&[2, 4, 2]));
        assert_eq!(r.values[0].value, 0);
        assert_eq!(r.values[1].value, 4);
        assert_eq!(r.max, 4);
        assert_eq!(q_printed(&hodge(&[2, 3, 2])).max, 3);
        assert_eq!(q_printed(&hodge(&[2, 3, 2])).q2bar_branch.as_deref(), Some("h^k odd"));
        let r = q_printed(&hodge(&[1, 2, 2, 1]));
        assert_eq!((r.values[0].value, r.values[1].value, r.max), (0, 3, 3));
        assert_eq!(q_printed(&hodge(&[3, 2, 2, 3])).max, 3);
        assert_eq!(q_printed(&hodge(&[1, 5, 1])).max, 5);
    }

    #[test]
    fn proof_values() {
        assert_eq!(q_proof(&hodge(&[2, 4, 2])).max, 4);
        assert_eq!(q_proof(&hodge(&[2, 3, 2])).max, 3);
        assert_eq!(q_proof(&hodge(&[1, 2, 2, 1])).max, 3);
        assert_eq!(q_proof(&hodge(&[3, 2, 2, 3])).max, 6);
        assert_eq!(q_proof(&hodge(&[1, 1, 1, 1, 1])).max, 1);
        assert_eq!(q_proof(&hodge(&[1, 4, 1])).max, 4);
    }

    #[test]
    fn qp_vertices() {
        let qp = &proof_qps(&hodge(&[3, 2, 2, 3]))[0];
        assert_eq!(qp.evaluate(&[0]), 3);
        assert_eq!(qp.evaluate(&[2]), 6);
        let sol = solve_box_qp(qp, Exec::Sequential);
        assert_eq!(sol.vertices, vec![vec![2]]);
        let crit = sol.interior_critical.unwrap();
        assert!(!crit.inside);
        let degenerate = &proof_qps(&hodge(&[1, 0, 0, 1]))[0];
        assert_eq!(solve_box_qp(degenerate, Exec::Sequential).vertices, vec![vec![0]]);
    }

    #[test]
    fn exhaustive_patterns() {
        let r = pattern_search(&hodge(&[2, 4, 2]), 64, 100, Exec::Sequential).unwrap();
        assert_eq!(r.best, 4);
        assert!(r.exhaustive);
        assert!(r.num_maximum > 1);
        let r = pattern_search(&hodge(&[1, 2, 2, 1]), 64, 100, Exec::Sequential).unwrap();
        assert_eq!(r.best, 3);
        assert_eq!(r.num_maximum, 1);
        assert!(r.witness.entries.iter().all(|v| v.as_entry().unwrap().0 == 2));
        let r = pattern_search(&hodge(&[1, 3, 3, 1]), 64, 100, Exec::Sequential).unwrap();
        assert_eq!((r.best, r.num_maximum), (6, 1));
        assert_eq!(pattern_search(&hodge(&[1, 5, 1]), 64, 1, Exec::Sequential).unwrap().best, 5);
    }

    #[test]
    fn heuristic_fallback() {
        let h = hodge(&[1, 3, 3, 1]);
        let r = pattern_search(&h, 2, 1, Exec::Sequential).unwrap();
        assert!(r.fallback);
        assert_eq!(r.best, 6);
    }

    #[test]
    fn erratum_class() {
        let h = hodge(&[3, 2, 2, 3]);
        let r = pattern_search(&h, 64, 1, Exec::Sequential).unwrap();
        assert_eq!(r.best, 6);
        assert!(r.witness.entries.iter().all(|v| v.as_entry().unwrap().0 == 1));
    }

    #[test]
    fn sweep_is_deterministic() {
        let a = sweep(3, 2, 64, Exec::Parallel).unwrap();
        let b = sweep(3, 2, 64, Exec::Sequential).unwrap();
        assert_eq!(a, b);
        assert!(a.entries.iter().all(|e| e.pattern_best as i64 <= e.proof_max));
    }

    #[test]
    fn random_probe_stays_below_bound() {
        let hs = vec![hodge(&[2, 4, 2]), hodge(&[1, 2, 2, 1]), hodge(&[1, 2, 2, 2, 1])];
        let r = random_commuting_probe(&hs, 40, 7, Exec::default()).unwrap();
        assert!(r.exceeded.is_empty());
        assert_eq!(r, random_commuting_probe(&hs, 40, 7, Exec::Sequential).unwrap());
    }
}
