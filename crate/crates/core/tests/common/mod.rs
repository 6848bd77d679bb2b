#![allow(dead_code)]

use rand::Rng;
use splitreduc::{Assignment, Monomial, Polynomial, VarId};

pub fn v(i: u32) -> VarId {
    VarId(i)
}

/// Terms with up to `max_degree` distinct variables drawn from `0..vars`.
pub fn random_polynomial(
    rng: &mut impl Rng,
    vars: u32,
    terms: usize,
    max_degree: usize,
    coeff: i64,
) -> Polynomial {
    let raw: Vec<(i64, Vec<VarId>)> = (0..terms)
        .map(|_| {
            let degree = rng.gen_range(0..=max_degree);
            let vs = (0..degree).map(|_| VarId(rng.gen_range(0..vars))).collect();
            (rng.gen_range(-coeff..=coeff), vs)
        })
        .collect();
    Polynomial::canonicalize(raw).unwrap()
}

/// Every assignment of `vars`, in binary counting order.
pub fn assignments(vars: &[VarId]) -> impl Iterator<Item = Assignment> + '_ {
    (0u64..1 << vars.len()).map(move |bits| {
        vars.iter()
            .enumerate()
            .map(|(k, &x)| (x, bits >> k & 1 == 1))
            .collect()
    })
}

/// Minimum over `vars` and every minimizer, by direct evaluation.
pub fn brute_min(p: &Polynomial, vars: &[VarId]) -> (i64, Vec<Assignment>) {
    let mut best = i64::MAX;
    let mut argmin = Vec::new();
    for a in assignments(vars) {
        let e = p.evaluate(&a).unwrap();
        if e < best {
            best = e;
            argmin.clear();
        }
        if e == best {
            argmin.push(a);
        }
    }
    (best, argmin)
}

/// `sum_{k=1}^{L} (1 - a_k) + prod_{k=1}^{L} a_k` with `L = C(m, 2)`.
pub fn clique_family(m: usize) -> Polynomial {
    let l = (m * (m - 1) / 2) as u32;
    let mut raw: Vec<(i64, Vec<VarId>)> = vec![(l as i64, vec![])];
    raw.extend((0..l).map(|k| (-1, vec![VarId(k)])));
    raw.push((1, (0..l).map(VarId).collect()));
    Polynomial::canonicalize(raw).unwrap()
}

/// `1 + sum_{k>i} (1 - a_k)` over `a_0 .. a_{l-1}`, with `i` 1-based.
pub fn clique_family_linear_leaf(l: u32, i: u32) -> Polynomial {
    let mut raw: Vec<(i64, Vec<VarId>)> = vec![(1 + (l - i) as i64, vec![])];
    raw.extend((i..l).map(|k| (-1, vec![VarId(k)])));
    Polynomial::canonicalize(raw).unwrap()
}

/// `2 - a - b + a*b` on the last two variables.
pub fn clique_family_last_leaf(l: u32) -> Polynomial {
    let (a, b) = (VarId(l - 2), VarId(l - 1));
    Polynomial::canonicalize([(2, vec![]), (-1, vec![a]), (-1, vec![b]), (1, vec![a, b])]).unwrap()
}

pub fn monomial(vars: &[u32]) -> Monomial {
    Monomial::new(vars.iter().map(|&i| VarId(i)))
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
