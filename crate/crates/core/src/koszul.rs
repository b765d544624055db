//! Koszul complexes `Λ^a(V) ⊗ SP^{n−a}(V)` over `F_p` and the derived symmetric powers
//! `L_i SP^n(V)` of `V = (F_p)^r` computed from them.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linear::{fp_cokernel_basis, fp_rank, reduce, IntMatrix};
use crate::numtheory::is_prime;
use crate::poly::{sym_basis, sym_multiply, wedge_basis, Basis, SymMonomial, WedgeIndex};

/// Basis of `Λ^a ⊗ SP^{n−a}` ordered lexicographically by (wedge, monomial).
#[derive(Clone, Debug)]
pub struct KoszulTerm {
    pub wedges: Basis<WedgeIndex>,
    pub monomials: Basis<SymMonomial>,
}

impl KoszulTerm {
    fn new(a: usize, n: usize, r: usize) -> Self {
        KoszulTerm {
            wedges: wedge_basis(a, r),
            monomials: sym_basis(n - a, r),
        }
    }

    pub fn dim(&self) -> usize {
        self.wedges.len() * self.monomials.len()
    }

    pub fn index(&self, w: usize, m: usize) -> usize {
        w * self.monomials.len() + m
    }

    pub fn element(&self, idx: usize) -> (WedgeIndex, SymMonomial) {
        let w = idx / self.monomials.len();
        let m = idx % self.monomials.len();
        (self.wedges.get(w).clone(), self.monomials.get(m).clone())
    }
}

#[derive(Clone, Debug)]
pub struct KoszulComplexFp {
    pub p: u64,
    pub n: usize,
    pub r: usize,
    pub terms: Vec<KoszulTerm>,
    /// `differentials[a]` is `κ_a: term a → term a−1` with entries in `0..p`;
    /// `differentials[0]` is the zero map out of term 0.
    pub differentials: Vec<IntMatrix>,
}

impl KoszulComplexFp {
    pub fn kappa(&self, a: usize) -> &IntMatrix {
        &self.differentials[a]
    }

    /// `κ_{a−1} κ_a ≡ 0 (mod p)` for every `a`.
    pub fn is_complex(&self) -> bool {
        (2..=self.n).all(|a| {
            let prod = self.differentials[a - 1]
                .mul(&self.differentials[a])
                .expect("composable");
            prod.entries().iter().all(|x| reduce(x, self.p) == 0)
        })
    }
}

/// `κ_a(w ⊗ m) = Σ_k (−1)^{k−1} (w with its k-th factor removed) ⊗ x_{w_k} m`.
pub fn build_koszul(n: usize, r: usize, p: u64) -> Result<KoszulComplexFp> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let terms: Vec<KoszulTerm> = (0..=n).map(|a| KoszulTerm::new(a, n, r)).collect();
    let mut differentials = vec![IntMatrix::zeros(0, terms[0].dim())];
    for a in 1..=n {
        let (src, dst) = (&terms[a], &terms[a - 1]);
        let mut kappa = IntMatrix::zeros(dst.dim(), src.dim());
        for (wi, w) in src.wedges.iter().enumerate() {
            for (mi, m) in src.monomials.iter().enumerate() {
                let col = src.index(wi, mi);
                for (pos, &j) in w.0.iter().enumerate() {
                    let w2 = dst.wedges.index_of(&w.without(pos)).expect("wedge basis");
                    let m2 = dst.monomials.index_of(&sym_multiply(j, m)).expect("sym basis");
                    let sign = if pos % 2 == 0 { 1 } else { p as i64 - 1 };
                    kappa.add_to(dst.index(w2, m2), col, &BigInt::from(sign));
                }
            }
        }
        differentials.push(kappa);
    }
    Ok(KoszulComplexFp {
        p,
        n,
        r,
        terms,
        differentials,
    })
}

/// `L_i SP^n((F_p)^r)` as an `F_p`-vector space with coset representatives
/// in `Λ^{i+1} ⊗ SP^{n−i−1}`.
#[derive(Clone, Debug, Serialize)]
pub struct DerivedSpGroup {
    pub i: usize,
    pub n: usize,
    pub p: u64,
    pub r: usize,
    pub dimension: usize,
    pub representatives: Vec<(WedgeIndex, SymMonomial)>,
}

fn check_degrees(i: usize, n: usize, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 || i >= n {
        return Err(Error::DegreeOutOfRange(format!(
            "need 0 <= i <= n - 1, got i = {i}, n = {n}"
        )));
    }
    Ok(())
}

/// Top case `i = n − 1` is `Λ^n`; otherwise `coker κ_{i+2}`.
pub fn derived_sp(i: usize, n: usize, p: u64, r: usize) -> Result<DerivedSpGroup> {
    check_degrees(i, n, p)?;
    let representatives: Vec<(WedgeIndex, SymMonomial)> = if i + 1 == n {
        wedge_basis(n, r)
            .iter()
            .map(|w| (w.clone(), SymMonomial(vec![0; r])))
            .collect()
    } else {
        let kx = build_koszul(n, r, p)?;
        let term = &kx.terms[i + 1];
        fp_cokernel_basis(kx.kappa(i + 2), p)?
            .into_iter()
            .map(|e| {
                let idx = e.iter().position(|&x| x == 1).expect("unit vector");
                term.element(idx)
            })
            .collect()
    };
    Ok(DerivedSpGroup {
        i,
        n,
        p,
        r,
        dimension: representatives.len(),
        representatives,
    })
}

/// Generators `β_p(x_1,…,x_{i+1}) ⊗ x_{i+2}⋯x_n` (β identified with the sorted wedge)
/// modulo the Jacobi elements, as columns over `F_p`.
#[derive(Clone, Debug)]
pub struct GeneratorPresentation {
    pub i: usize,
    pub n: usize,
    pub p: u64,
    pub r: usize,
    pub generators: Vec<(WedgeIndex, SymMonomial)>,
    pub relations: IntMatrix,
}

impl GeneratorPresentation {
    pub fn quotient_dimension(&self) -> usize {
        let rank = fp_rank(&self.relations, self.p).expect("prime checked");
        self.generators.len() - rank
    }
}

/// Sorts a tuple of generator indices; `None` if any index repeats, else the
/// sorted wedge and the permutation sign.
fn normalize_wedge(mut xs: Vec<usize>) -> Option<(i64, WedgeIndex)> {
    let mut sign = 1i64;
    // insertion sort counting transpositions
    for a in 1..xs.len() {
        let mut b = a;
        while b > 0 && xs[b - 1] > xs[b] {
            xs.swap(b - 1, b);
            sign = -sign;
            b -= 1;
        }
    }
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, WedgeIndex(xs)))
}

fn all_tuples(len: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..r).map(move |j| {
                    let mut t = t.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
    }
    out
}

/// Jacobi relations `Σ_{k=1}^{i+2} (−1)^k β(x_1,…,x̂_k,…,x_{i+2}) ⊗ x_k y` over every
/// ordered tuple `x` of generators and every monomial `y` of degree `n − i − 2`.
pub fn generator_presentation(i: usize, n: usize, p: u64, r: usize) -> Result<GeneratorPresentation> {
    check_degrees(i, n, p)?;
    let wedges = wedge_basis(i + 1, r);
    let monomials = sym_basis(n - i - 1, r);
    let generators: Vec<(WedgeIndex, SymMonomial)> = wedges
        .iter()
        .flat_map(|w| monomials.iter().map(move |m| (w.clone(), m.clone())))
        .collect();
    let gen_index = |w: &WedgeIndex, m: &SymMonomial| -> usize {
        wedges.index_of(w).expect("wedge") * monomials.len() + monomials.index_of(m).expect("monomial")
    };
    let mut relations: BTreeSet<Vec<u64>> = BTreeSet::new();
    if i + 2 <= n {
        for xs in all_tuples(i + 2, r) {
            for y in sym_basis(n - i - 2, r).iter() {
                let mut rel = vec![0u64; generators.len()];
                for k in 0..i + 2 {
                    let rest: Vec<usize> = xs
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| t != k)
                        .map(|(_, &x)| x)
                        .collect();
                    let Some((sign, w)) = normalize_wedge(rest) else { continue };
                    // (−1)^k with k 1-based
                    let sign = if (k + 1) % 2 == 0 { sign } else { -sign };
                    let idx = gen_index(&w, &sym_multiply(xs[k], y));
                    rel[idx] = (rel[idx] as i64 + sign).rem_euclid(p as i64) as u64;
                }
                if rel.iter().any(|&x| x != 0) {
                    relations.insert(rel);
                }
            }
        }
    }
    let columns: Vec<Vec<BigInt>> = relations
        .into_iter()
        .map(|rel| rel.into_iter().map(BigInt::from).collect())
        .collect();
    Ok(GeneratorPresentation {
        i,
        n,
        p,
        r,
        relations: IntMatrix::from_columns(generators.len(), &columns),
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_is_identity() {
        for r in 0..4 {
            let k = build_koszul(1, r, 3).unwrap();
            assert_eq!(k.kappa(1), &IntMatrix::identity(r));
        }
    }

    #[test]
    fn dimensions_for_n2_r2() {
        let k = build_koszul(2, 2, 2).unwrap();
        let dims: Vec<usize> = k.terms.iter().map(KoszulTerm::dim).collect();
        assert_eq!(dims, vec![3, 4, 1]);
    }

    #[test]
    fn square_zero() {
        for p in [2, 3] {
            for n in 1..=8 {
                for r in 0..=4 {
                    assert!(build_koszul(n, r, p).unwrap().is_complex(), "n={n} r={r} p={p}");
                }
            }
        }
    }

    #[test]
    fn derived_sp_examples() {
        assert_eq!(derived_sp(1, 2, 2, 1).unwrap().dimension, 0);
        let l3 = derived_sp(1, 3, 2, 2).unwrap();
        assert_eq!(l3.dimension, 2);
        assert_eq!(derived_sp(2, 3, 3, 3).unwrap().dimension, 1);
        assert!(matches!(derived_sp(3, 3, 2, 2), Err(Error::DegreeOutOfRange(_))));
        assert_eq!(derived_sp(0, 2, 4, 2).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn third_lie_dimension() {
        // dim 𝓛^3(V) = (r^3 − r)/3
        for p in [2, 3, 5] {
            for r in 0..=4usize {
                assert_eq!(derived_sp(1, 3, p, r).unwrap().dimension, (r.pow(3) - r) / 3);
            }
        }
    }

    #[test]
    fn presentation_examples() {
        for n in 1..5 {
            let g = generator_presentation(n - 1, n, 2, 3).unwrap();
            assert_eq!(g.relations.cols(), 0);
            assert_eq!(g.generators.len(), wedge_basis(n, 3).len());
        }
        let g = generator_presentation(1, 2, 2, 2).unwrap();
        assert_eq!(g.generators.len(), 1);
        assert_eq!(g.quotient_dimension(), 1);
        let g = generator_presentation(1, 4, 2, 2).unwrap();
        assert_eq!(g.quotient_dimension(), derived_sp(1, 4, 2, 2).unwrap().dimension);
    }

    #[test]
    fn cross_effect_of_l1sp2() {
        for p in [2, 3] {
            for a in 0..=3 {
                for b in 0..=3 {
                    let d = |r| derived_sp(1, 2, p, r).unwrap().dimension;
                    assert_eq!(d(a + b) - d(a) - d(b), a * b);
                }
            }
        }
    }
}
