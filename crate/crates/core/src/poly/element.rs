use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use super::{exponent_vectors, gamma_basis, gamma_module_action, gamma_product, DividedMonomial, WedgeIndex};
use crate::linear::IntMatrix;

/// Finite integer combination of divided monomials in a fixed rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaElement {
    rank: usize,
    terms: BTreeMap<DividedMonomial, BigInt>,
}

impl GammaElement {
    pub fn zero(rank: usize) -> Self {
        GammaElement {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(DividedMonomial::unit(rank), BigInt::one())
    }

    pub fn monomial(m: DividedMonomial, coeff: BigInt) -> Self {
        let mut e = Self::zero(m.rank());
        e.add_term(m, coeff);
        e
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DividedMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &DividedMonomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: DividedMonomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &GammaElement) -> GammaElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> GammaElement {
        let mut out = GammaElement::zero(self.rank);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &GammaElement) -> GammaElement {
        let mut out = GammaElement::zero(self.rank);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let (c, m) = gamma_product(a, b);
                out.add_term(m, c * x * y);
            }
        }
        out
    }

    /// `x_j · self`.
    pub fn act(&self, j: usize) -> GammaElement {
        let mut out = GammaElement::zero(self.rank);
        for (m, x) in &self.terms {
            let (c, m2) = gamma_module_action(j, m);
            out.add_term(m2, c * x);
        }
        out
    }
}

/// `γ_k(Σ_j v_j x_j) = Σ_{|a| = k} ∏_j v_j^{a_j} γ_{a_j}(x_j)`.
pub fn gamma_of_vector(k: usize, v: &[BigInt]) -> GammaElement {
    let mut out = GammaElement::zero(v.len());
    for a in exponent_vectors(k, v.len()) {
        let mut coeff = BigInt::one();
        for (&e, x) in a.iter().zip(v) {
            if e > 0 {
                coeff *= Pow::pow(x, e);
            }
        }
        out.add_term(DividedMonomial(a), coeff);
    }
    out
}

/// Expands `v_1 ∧ … ∧ v_i` over the wedge basis.
pub fn wedge_of_vectors(vs: &[Vec<BigInt>]) -> BTreeMap<WedgeIndex, BigInt> {
    let mut out: BTreeMap<WedgeIndex, BigInt> = BTreeMap::new();
    let rank = vs.first().map_or(0, Vec::len);
    let mut chosen = Vec::with_capacity(vs.len());
    fn rec(
        vs: &[Vec<BigInt>],
        rank: usize,
        chosen: &mut Vec<usize>,
        coeff: BigInt,
        out: &mut BTreeMap<WedgeIndex, BigInt>,
    ) {
        let t = chosen.len();
        if t == vs.len() {
            // sign of the sorting permutation = parity of inversions
            let mut inversions = 0;
            for a in 0..t {
                for b in a + 1..t {
                    if chosen[a] > chosen[b] {
                        inversions += 1;
                    }
                }
            }
            let mut sorted = chosen.clone();
            sorted.sort_unstable();
            let c = if inversions % 2 == 0 { coeff } else { -coeff };
            *out.entry(WedgeIndex(sorted)).or_default() += c;
            return;
        }
        for j in 0..rank {
            if vs[t][j].is_zero() || chosen.contains(&j) {
                continue;
            }
            chosen.push(j);
            rec(vs, rank, chosen, &coeff * &vs[t][j], out);
            chosen.pop();
        }
    }
    rec(vs, rank, &mut chosen, BigInt::one(), &mut out);
    out.retain(|_, c| !c.is_zero());
    out
}

/// Integer combination of `wedge ⊗ divided monomial` basis tensors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LambdaGammaElement {
    terms: BTreeMap<(WedgeIndex, DividedMonomial), BigInt>,
}

impl LambdaGammaElement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(WedgeIndex, DividedMonomial), &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, w: WedgeIndex, m: DividedMonomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let key = (w, m);
        let entry = self.terms.entry(key.clone()).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Adds `c · (wedge ⊗ gamma)` for expanded factors.
    pub fn add_product(
        &mut self,
        wedge: &BTreeMap<WedgeIndex, BigInt>,
        gamma: &GammaElement,
        c: &BigInt,
    ) {
        for (w, x) in wedge {
            for (m, y) in gamma.terms() {
                self.add_term(w.clone(), m.clone(), c * x * y);
            }
        }
    }

    pub fn add(&mut self, other: &LambdaGammaElement) {
        for ((w, m), c) in &other.terms {
            self.add_term(w.clone(), m.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &BigInt) -> LambdaGammaElement {
        let mut out = LambdaGammaElement::new();
        for ((w, m), x) in &self.terms {
            out.add_term(w.clone(), m.clone(), x * c);
        }
        out
    }
}

/// Matrix of `Γ_n(T): Γ_n(Z^r) → Γ_n(Z^s)` for `T: Z^r → Z^s` (an `s × r` matrix),
/// in the divided monomial bases.
pub fn induced_gamma_map(t: &IntMatrix, n: usize) -> IntMatrix {
    let (s, r) = (t.rows(), t.cols());
    let source = gamma_basis(n, r);
    let target = gamma_basis(n, s);
    let images: Vec<Vec<BigInt>> = (0..r).map(|k| t.column(k)).collect();
    let mut out = IntMatrix::zeros(target.len(), source.len());
    for (col, e) in source.iter().enumerate() {
        let mut prod = GammaElement::one(s);
        for (k, &ek) in e.0.iter().enumerate() {
            if ek > 0 {
                prod = prod.mul(&gamma_of_vector(ek as usize, &images[k]));
            }
        }
        for (m, c) in prod.terms() {
            let row = target.index_of(m).expect("degree preserved");
            out.set(row, col, c.clone());
        }
    }
    out
}

/// Checks `x^r = r! γ_r(x)` through repeated module action and
/// `γ_d(n x) = n^d γ_d(x)` through the substitution `x ↦ n x` on every
/// degree-`d` monomial, for `r, d <= r_max`, `|n| <= 4`.
pub fn gamma_power_identity_check(r_max: usize, rank: usize) -> bool {
    for j in 0..rank {
        let mut e = GammaElement::one(rank);
        let mut factorial = BigInt::one();
        for r in 1..=r_max {
            e = e.act(j);
            factorial *= BigInt::from(r);
            let mut exps = vec![0; rank];
            exps[j] = r as u32;
            let expected = GammaElement::monomial(DividedMonomial(exps), factorial.clone());
            if e != expected {
                return false;
            }
        }
    }
    for n in -4i64..=4 {
        let scalar = IntMatrix::identity(rank).scale(&BigInt::from(n));
        for d in 0..=r_max {
            let size = gamma_basis(d, rank).len();
            let expected = IntMatrix::identity(size).scale(&Pow::pow(BigInt::from(n), d as u32));
            if induced_gamma_map(&scalar, d) != expected {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn sign_rule() {
        let neg = IntMatrix::from_rows(&[vec![-1]]);
        assert_eq!(induced_gamma_map(&neg, 2), IntMatrix::from_rows(&[vec![1]]));
        assert_eq!(induced_gamma_map(&neg, 3), IntMatrix::from_rows(&[vec![-1]]));
    }

    #[test]
    fn power_identities() {
        assert!(gamma_power_identity_check(1, 1));
        assert!(gamma_power_identity_check(6, 2));
        let x4 = (0..4).fold(GammaElement::one(1), |e, _| e.act(0));
        assert_eq!(x4.coefficient(&DividedMonomial(vec![4])), BigInt::from(24));
    }

    #[test]
    fn exponential_law_on_sum() {
        // γ_2(x + y) = γ_2(x) + x y + γ_2(y)
        let g = gamma_of_vector(2, &v(&[1, 1]));
        let terms: Vec<(Vec<u32>, BigInt)> =
            g.terms().map(|(m, c)| (m.0.clone(), c.clone())).collect();
        assert_eq!(
            terms,
            vec![
                (vec![0, 2], BigInt::from(1)),
                (vec![1, 1], BigInt::from(1)),
                (vec![2, 0], BigInt::from(1))
            ]
        );
    }

    #[test]
    fn wedge_expansion() {
        // (x1 + x2) ∧ (x1 − x2) = −2 x1∧x2
        let w = wedge_of_vectors(&[v(&[1, 1]), v(&[1, -1])]);
        assert_eq!(w.len(), 1);
        assert_eq!(w[&WedgeIndex(vec![0, 1])], BigInt::from(-2));
        let w = wedge_of_vectors(&[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(w[&WedgeIndex(vec![0, 1])], BigInt::from(-1));
        assert!(wedge_of_vectors(&[v(&[1, 2]), v(&[2, 4])]).is_empty());
    }

    #[test]
    fn substitution_is_functorial() {
        let mats = [
            IntMatrix::from_rows(&[vec![1, 2], vec![0, 1]]),
            IntMatrix::from_rows(&[vec![2, -1], vec![3, 1]]),
            IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
            IntMatrix::from_rows(&[vec![1, 1], vec![-1, 2]]),
        ];
        for d in 0..=4 {
            for a in &mats {
                for b in &mats {
                    let ab = a.mul(b).unwrap();
                    let lhs = induced_gamma_map(&ab, d);
                    let rhs = induced_gamma_map(a, d).mul(&induced_gamma_map(b, d)).unwrap();
                    assert_eq!(lhs, rhs, "degree {d}");
                }
            }
        }
        // rectangular: Z^1 → Z^2 → Z^1
        let s = IntMatrix::from_rows(&[vec![1], vec![3]]);
        let t = IntMatrix::from_rows(&[vec![2, -1]]);
        for d in 0..=4 {
            assert_eq!(
                induced_gamma_map(&t.mul(&s).unwrap(), d),
                induced_gamma_map(&t, d).mul(&induced_gamma_map(&s, d)).unwrap()
            );
        }
    }
}
