#![allow(dead_code)]

use periodforge::bounds::{random_grading_element, HorizontalAlgebra};
use periodforge::nilalgebra::{basis_of_gminus, AlgebraElement};
use periodforge::scalarforms::Monomial;
use periodforge::{Exec, GaussianRational as GR, HodgeNumbers, Polynomial, Variable};
use rand::seq::SliceRandom;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn hodge(h: &[usize]) -> HodgeNumbers {
    HodgeNumbers::new(h.len() - 1, h.to_vec()).unwrap()
}

pub fn small_gr(rng: &mut ChaCha8Rng) -> GR {
    GR::from_parts((rng.gen_range(-3..=3), rng.gen_range(1..=3)), (rng.gen_range(-2..=2), 1))
}

pub fn random_poly(rng: &mut ChaCha8Rng, vars: &[Variable], max_degree: u32, terms: usize) -> Polynomial {
    let mut p = Polynomial::zero();
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_degree);
        let factors: Vec<(Variable, u32)> = (0..deg).map(|_| (*vars.choose(rng).unwrap(), 1)).collect();
        p.add_term(Monomial::from_factors(factors), &small_gr(rng));
    }
    p
}

/// Symmetric Hodge vector of weight `1..=max_w` with entries `≤ max_h` and
/// at least one horizontal coordinate.
pub fn random_hodge(rng: &mut ChaCha8Rng, weights: std::ops::RangeInclusive<usize>, max_h: usize) -> HodgeNumbers {
    loop {
        let w = rng.gen_range(weights.clone());
        let first: Vec<usize> = (0..=w / 2).map(|_| rng.gen_range(0..=max_h)).collect();
        let h: Vec<usize> = (0..=w).map(|l| first[l.min(w - l)]).collect();
        if let Ok(h) = HodgeNumbers::new(w, h) {
            if !h.horizontal_variables().is_empty() {
                return h;
            }
        }
    }
}

pub fn random_gminus(rng: &mut ChaCha8Rng, h: &HodgeNumbers) -> AlgebraElement {
    let mut x = AlgebraElement::zero(h);
    for b in basis_of_gminus(h) {
        if rng.gen_bool(0.5) {
            x = x.add(&b.scale(&small_gr(rng)));
        }
    }
    x
}

pub fn random_horizontal(rng: &mut ChaCha8Rng, h: &HodgeNumbers) -> AlgebraElement {
    let alg = HorizontalAlgebra::new(h, Exec::Sequential);
    let c: Vec<GR> = (0..alg.dim()).map(|_| GR::from_integer(rng.gen_range(-2..=2))).collect();
    alg.to_elements(&[c]).unwrap().remove(0)
}

/// A random basis of an integral element of dimension at most `max_dim`:
/// a greedy abelian coordinate pattern, a unimodular change of basis and a
/// grading-group conjugation.
pub fn random_integral_element(rng: &mut ChaCha8Rng, h: &HodgeNumbers, max_dim: usize) -> Vec<AlgebraElement> {
    let alg = HorizontalAlgebra::new(h, Exec::Sequential);
    let n = alg.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let target = rng.gen_range(1..=max_dim);
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        if chosen.len() == target {
            break;
        }
        if chosen.iter().all(|&j| alg.commute(i, j)) {
            chosen.push(i);
        }
    }
    let m = chosen.len();
    let mut family: Vec<Vec<GR>> = chosen
        .iter()
        .map(|&i| (0..n).map(|j| GR::from_integer((i == j) as i64)).collect())
        .collect();
    for a in 0..m {
        for b in 0..a {
            let c = GR::from_integer(rng.gen_range(-2..=2));
            let row: Vec<GR> = family[a].iter().zip(&family[b]).map(|(x, y)| x + &(y * &c)).collect();
            family[a] = row;
        }
    }
    let g = random_grading_element(h, rng);
    let family: Vec<Vec<GR>> = family.iter().map(|c| alg.conjugate(&g, c)).collect();
    alg.to_elements(&family).unwrap()
}
