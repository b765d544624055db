//! Monomial bases and structure constants for exterior, symmetric and divided powers
//! of a free abelian group `Z^r`.
//!
//! Generators are indexed from 0 internally and printed from 1.

mod element;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::numtheory::binomial;

pub use element::{
    gamma_of_vector, gamma_power_identity_check, induced_gamma_map, wedge_of_vectors,
    GammaElement, LambdaGammaElement,
};

/// `b_{j_1} ∧ … ∧ b_{j_i}` with `j_1 < … < j_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WedgeIndex(pub Vec<usize>);

/// `∏_k γ_{e_k}(x_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DividedMonomial(pub Vec<u32>);

/// `∏_k x_k^{e_k}` in the symmetric algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SymMonomial(pub Vec<u32>);

impl WedgeIndex {
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    /// Deletes the factor at 0-based position `pos`.
    pub fn without(&self, pos: usize) -> WedgeIndex {
        let mut v = self.0.clone();
        v.remove(pos);
        WedgeIndex(v)
    }
}

impl DividedMonomial {
    pub fn unit(rank: usize) -> Self {
        DividedMonomial(vec![0; rank])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

impl SymMonomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl fmt::Display for WedgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|j| format!("x{}", j + 1)).collect();
        write!(f, "{}", parts.join("∧"))
    }
}

impl fmt::Display for DividedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, e)| format!("γ{}(x{})", e, k + 1))
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(""))
        }
    }
}

impl fmt::Display for SymMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, &e)| if e == 1 { format!("x{}", k + 1) } else { format!("x{}^{}", k + 1, e) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(""))
        }
    }
}

/// An ordered basis with reverse lookup.
#[derive(Clone, Debug)]
pub struct Basis<T> {
    elements: Vec<T>,
    index: HashMap<T, usize>,
}

impl<T: Clone + Eq + Hash> Basis<T> {
    pub fn new(elements: Vec<T>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Basis { elements, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> &T {
        &self.elements[i]
    }

    pub fn index_of(&self, e: &T) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.elements.iter()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Functor {
    Wedge,
    Sym,
    Gamma,
}

#[derive(Clone, Debug)]
pub enum FunctorBasis {
    Wedge(Basis<WedgeIndex>),
    Sym(Basis<SymMonomial>),
    Gamma(Basis<DividedMonomial>),
}

impl FunctorBasis {
    pub fn len(&self) -> usize {
        match self {
            FunctorBasis::Wedge(b) => b.len(),
            FunctorBasis::Sym(b) => b.len(),
            FunctorBasis::Gamma(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn labels(&self) -> Vec<String> {
        match self {
            FunctorBasis::Wedge(b) => b.iter().map(ToString::to_string).collect(),
            FunctorBasis::Sym(b) => b.iter().map(ToString::to_string).collect(),
            FunctorBasis::Gamma(b) => b.iter().map(ToString::to_string).collect(),
        }
    }
}

pub fn enumerate_basis(functor: Functor, degree: usize, rank: usize) -> FunctorBasis {
    match functor {
        Functor::Wedge => FunctorBasis::Wedge(wedge_basis(degree, rank)),
        Functor::Sym => FunctorBasis::Sym(Basis::new(
            exponent_vectors(degree, rank).into_iter().map(SymMonomial).collect(),
        )),
        Functor::Gamma => FunctorBasis::Gamma(gamma_basis(degree, rank)),
    }
}

/// Strictly increasing `degree`-subsets of `0..rank`, lexicographic.
pub fn wedge_basis(degree: usize, rank: usize) -> Basis<WedgeIndex> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(degree);
    fn rec(start: usize, left: usize, rank: usize, cur: &mut Vec<usize>, out: &mut Vec<WedgeIndex>) {
        if left == 0 {
            out.push(WedgeIndex(cur.clone()));
            return;
        }
        for j in start..rank {
            if rank - j < left {
                break;
            }
            cur.push(j);
            rec(j + 1, left - 1, rank, cur, out);
            cur.pop();
        }
    }
    rec(0, degree, rank, &mut current, &mut out);
    Basis::new(out)
}

/// Exponent vectors of total degree `degree` in `rank` variables, in decreasing
/// lexicographic order (`x1^d` first).
pub fn exponent_vectors(degree: usize, rank: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if rank == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0u32; rank];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
    }
    rec(0, degree as u32, &mut cur, &mut out);
    out
}

pub fn gamma_basis(degree: usize, rank: usize) -> Basis<DividedMonomial> {
    Basis::new(
        exponent_vectors(degree, rank)
            .into_iter()
            .map(DividedMonomial)
            .collect(),
    )
}

pub fn sym_basis(degree: usize, rank: usize) -> Basis<SymMonomial> {
    Basis::new(exponent_vectors(degree, rank).into_iter().map(SymMonomial).collect())
}

/// `γ_e · γ_f = ∏_k C(e_k + f_k, e_k) · γ_{e+f}`.
pub fn gamma_product(a: &DividedMonomial, b: &DividedMonomial) -> (BigInt, DividedMonomial) {
    assert_eq!(a.rank(), b.rank(), "divided monomials of different rank");
    let mut coeff = BigInt::one();
    let mut exps = Vec::with_capacity(a.rank());
    for (&e, &f) in a.0.iter().zip(&b.0) {
        if e > 0 && f > 0 {
            coeff *= binomial(u64::from(e + f), u64::from(e)).expect("e <= e + f");
        }
        exps.push(e + f);
    }
    (coeff, DividedMonomial(exps))
}

/// `x_j · m`: coefficient `e_j + 1`, exponent `e_j` incremented.
pub fn gamma_module_action(j: usize, m: &DividedMonomial) -> (BigInt, DividedMonomial) {
    let mut exps = m.0.clone();
    exps[j] += 1;
    (BigInt::from(exps[j]), DividedMonomial(exps))
}

/// `x_j ∧ w` rewritten in increasing order. `None` when `j` already occurs;
/// otherwise the sign is `(−1)^{#factors before the insertion slot}`.
pub fn wedge_insert(j: usize, w: &WedgeIndex) -> Option<(i32, WedgeIndex)> {
    match w.0.binary_search(&j) {
        Ok(_) => None,
        Err(pos) => {
            let mut v = w.0.clone();
            v.insert(pos, j);
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            Some((sign, WedgeIndex(v)))
        }
    }
}

pub fn sym_multiply(j: usize, m: &SymMonomial) -> SymMonomial {
    let mut exps = m.0.clone();
    exps[j] += 1;
    SymMonomial(exps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dm(v: &[u32]) -> DividedMonomial {
        DividedMonomial(v.to_vec())
    }

    #[test]
    fn basis_examples() {
        let w = wedge_basis(2, 3);
        let got: Vec<Vec<usize>> = w.iter().map(|x| x.0.clone()).collect();
        assert_eq!(got, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        let g = gamma_basis(3, 2);
        let got: Vec<Vec<u32>> = g.iter().map(|x| x.0.clone()).collect();
        assert_eq!(got, vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
        let unit = gamma_basis(0, 4);
        assert_eq!(unit.len(), 1);
        assert_eq!(unit.get(0), &DividedMonomial::unit(4));
        assert_eq!(wedge_basis(0, 0).len(), 1);
        assert_eq!(wedge_basis(3, 2).len(), 0);
        assert_eq!(gamma_basis(2, 0).len(), 0);
        assert_eq!(gamma_basis(0, 0).len(), 1);
    }

    #[test]
    fn basis_sizes_match_binomials() {
        for r in 0..5u64 {
            for d in 0..7u64 {
                let w = enumerate_basis(Functor::Wedge, d as usize, r as usize).len();
                let expect_w = if d <= r { binomial(r, d).unwrap() } else { 0.into() };
                assert_eq!(BigInt::from(w), expect_w);
                let s = enumerate_basis(Functor::Sym, d as usize, r as usize).len();
                let g = enumerate_basis(Functor::Gamma, d as usize, r as usize).len();
                let expect = if r == 0 {
                    BigInt::from(u32::from(d == 0))
                } else {
                    binomial(r + d - 1, d).unwrap()
                };
                assert_eq!(BigInt::from(s), expect);
                assert_eq!(BigInt::from(g), expect);
            }
        }
    }

    #[test]
    fn product_examples() {
        let m = dm(&[2, 1]);
        assert_eq!(gamma_product(&m, &dm(&[0, 0])), (BigInt::from(1), m.clone()));
        assert_eq!(gamma_product(&dm(&[1]), &dm(&[2])), (BigInt::from(3), dm(&[3])));
        assert_eq!(gamma_product(&m, &dm(&[1, 1])), (BigInt::from(6), dm(&[3, 2])));
    }

    #[test]
    fn module_action_examples() {
        assert_eq!(gamma_module_action(0, &dm(&[0])), (BigInt::from(1), dm(&[1])));
        assert_eq!(gamma_module_action(0, &dm(&[2])), (BigInt::from(3), dm(&[3])));
        assert_eq!(
            gamma_module_action(0, &dm(&[0, 2])),
            (BigInt::from(1), dm(&[1, 2]))
        );
    }

    #[test]
    fn insert_examples() {
        // 1-based {2,5} ↦ 0-based {1,4}
        assert_eq!(wedge_insert(1, &WedgeIndex(vec![1, 4])), None);
        assert_eq!(
            wedge_insert(0, &WedgeIndex(vec![1, 2])),
            Some((1, WedgeIndex(vec![0, 1, 2])))
        );
        assert_eq!(
            wedge_insert(2, &WedgeIndex(vec![0, 1, 3])),
            Some((1, WedgeIndex(vec![0, 1, 2, 3])))
        );
        assert_eq!(
            wedge_insert(3, &WedgeIndex(vec![0, 1, 2, 4])),
            Some((-1, WedgeIndex(vec![0, 1, 2, 3, 4])))
        );
    }

    #[test]
    fn sym_multiply_examples() {
        assert_eq!(sym_multiply(0, &SymMonomial(vec![0, 0])), SymMonomial(vec![1, 0]));
        assert_eq!(sym_multiply(0, &SymMonomial(vec![1, 1])), SymMonomial(vec![2, 1]));
        assert_eq!(sym_multiply(0, &SymMonomial(vec![2])), SymMonomial(vec![3]));
    }

    #[test]
    fn product_is_commutative_and_associative() {
        for d1 in 0..=5 {
            for d2 in 0..=5 - d1 {
                for d3 in 0..=5 - d1 - d2 {
                    for a in gamma_basis(d1, 2).iter() {
                        for b in gamma_basis(d2, 2).iter() {
                            assert_eq!(gamma_product(a, b), gamma_product(b, a));
                            for c in gamma_basis(d3, 2).iter() {
                                let (c1, ab) = gamma_product(a, b);
                                let (c2, ab_c) = gamma_product(&ab, c);
                                let (c3, bc) = gamma_product(b, c);
                                let (c4, a_bc) = gamma_product(a, &bc);
                                assert_eq!(ab_c, a_bc);
                                assert_eq!(c1 * c2, c3 * c4);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(WedgeIndex(vec![0, 2]).to_string(), "x1∧x3");
        assert_eq!(dm(&[2, 0, 1]).to_string(), "γ2(x1)γ1(x3)");
        assert_eq!(SymMonomial(vec![2, 1]).to_string(), "x1^2x2");
    }
}
