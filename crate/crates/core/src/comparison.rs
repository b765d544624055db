//! Comparison maps from functors of `A ⊗ Z/p` into the homology of `C^n(A)` for
//! `A = Z^r`: the map `q_n` on `H_0` and the maps `f_i^{n,p}` built from the cycles `η_i`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::abelian::{expected_h0, expected_table_entry};
use crate::derham::{build_c, BoundaryTest, ChainComplexZ, ChainVector, Family, HomologyCycles};
use crate::error::{Error, Result};
use crate::koszul::generator_presentation;
use crate::linear::{
    check_well_defined, invariants_of_cokernel, serialize_big, presented_map_is_iso, GroupInvariants, IntMatrix,
    PresentedGroup,
};
use crate::numtheory::{binomial, padic_valuation, prime_divisors};
use crate::poly::{
    gamma_basis, gamma_of_vector, wedge_basis, wedge_of_vectors, Basis, DividedMonomial,
    GammaElement, LambdaGammaElement, SymMonomial, WedgeIndex,
};

/// One cyclic generator `γ_f(x̄)` of `Γ_{n/p}((Z/p)^r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QTarget {
    pub p: u64,
    pub monomial: DividedMonomial,
    #[serde(serialize_with = "serialize_big")]
    pub order: BigInt,
}

/// Matrix of `q_n: Γ_n(Z^r) → ⊕_{p | n} Γ_{n/p}((Z/p)^r)` on divided monomials.
#[derive(Clone, Debug)]
pub struct QMap {
    pub n: usize,
    pub r: usize,
    pub source: Basis<DividedMonomial>,
    pub targets: Vec<QTarget>,
    pub matrix: IntMatrix,
    rows: HashMap<(u64, DividedMonomial), usize>,
}

/// Order of `γ_f(x̄)` in `Γ((Z/p)^r)`: `p^{1 + min v_p(f_k)}` over the nonzero `f_k`.
fn generator_order(p: u64, f: &DividedMonomial) -> BigInt {
    let v = f
        .0
        .iter()
        .filter(|&&e| e > 0)
        .map(|&e| padic_valuation(&BigInt::from(e), p).expect("nonzero").value)
        .min()
        .unwrap_or(0);
    Pow::pow(BigInt::from(p), v + 1)
}

impl QMap {
    pub fn orders(&self) -> Vec<BigInt> {
        self.targets.iter().map(|t| t.order.clone()).collect()
    }

    /// The target as `⊕ Z/order`, one generator per row.
    pub fn target(&self) -> PresentedGroup {
        PresentedGroup::cyclic_sum(&self.orders())
    }

    pub fn row_of(&self, p: u64, f: &DividedMonomial) -> Option<usize> {
        self.rows.get(&(p, f.clone())).copied()
    }

    /// Reduces each coordinate modulo the order of its generator.
    pub fn reduce(&self, v: &mut [BigInt]) {
        for (x, t) in v.iter_mut().zip(&self.targets) {
            *x = x.mod_floor(&t.order);
        }
    }

    /// `q_n` of an element of `Γ_n(Z^r)` through the matrix.
    pub fn apply(&self, e: &GammaElement) -> Vec<BigInt> {
        let mut x = vec![BigInt::zero(); self.source.len()];
        for (m, c) in e.terms() {
            x[self.source.index_of(m).expect("degree n monomial")] = c.clone();
        }
        let mut out = self.matrix.mul_vec(&x).expect("shapes agree");
        self.reduce(&mut out);
        out
    }

    /// `q_n(γ_{j_1}(a_1)⋯γ_{j_t}(a_t))` by the defining formula: for each `p` dividing
    /// every `j_k`, the product `∏ γ_{j_k/p}(ā_k)` expanded in `Γ_{n/p}((Z/p)^r)`.
    pub fn apply_symbol(&self, factors: &[(u32, Vec<BigInt>)]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.targets.len()];
        for p in prime_divisors(self.n as u64) {
            if factors.iter().any(|(j, _)| u64::from(*j) % p != 0) {
                continue;
            }
            let mut prod = GammaElement::one(self.r);
            for (j, a) in factors {
                prod = prod.mul(&gamma_of_vector((u64::from(*j) / p) as usize, a));
            }
            for (f, c) in prod.terms() {
                let row = self.row_of(p, f).expect("degree n/p monomial");
                out[row] += c;
            }
        }
        self.reduce(&mut out);
        out
    }
}

pub fn q_matrix(n: usize, r: usize) -> Result<QMap> {
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    let source = gamma_basis(n, r);
    let mut targets = Vec::new();
    let mut rows = HashMap::new();
    let primes = prime_divisors(n as u64);
    for &p in &primes {
        for f in gamma_basis(n / p as usize, r).iter() {
            rows.insert((p, f.clone()), targets.len());
            targets.push(QTarget {
                p,
                monomial: f.clone(),
                order: generator_order(p, f),
            });
        }
    }
    let mut matrix = IntMatrix::zeros(targets.len(), source.len());
    for (col, e) in source.iter().enumerate() {
        for &p in &primes {
            if e.0.iter().all(|&x| u64::from(x) % p == 0) {
                let f = DividedMonomial(e.0.iter().map(|&x| x / p as u32).collect());
                matrix.set(rows[&(p, f)], col, BigInt::one());
            }
        }
    }
    Ok(QMap {
        n,
        r,
        source,
        targets,
        matrix,
        rows,
    })
}

/// Whether `q_n ∘ d_1 = 0` modulo the orders of the target generators.
pub fn q_kills_boundaries(q: &QMap, cx: &ChainComplexZ) -> Result<bool> {
    let images = q.matrix.mul(&cx.d(1))?;
    Ok((0..images.rows()).all(|i| {
        let order = &q.targets[i].order;
        images.row(i).iter().all(|x| x.is_multiple_of(order))
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QRelationReport {
    pub n: usize,
    pub r: usize,
    pub q2_checked: usize,
    pub q3_checked: usize,
    pub q4_checked: usize,
    pub consistency_checked: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
    pub pass: bool,
}

type Symbol = Vec<(u32, Vec<BigInt>)>;

fn substitution_vectors(r: usize) -> Vec<Vec<BigInt>> {
    let unit = |k: usize| -> Vec<BigInt> {
        (0..r).map(|j| BigInt::from(u8::from(j == k))).collect()
    };
    let mut out: Vec<Vec<BigInt>> = (0..r).map(unit).collect();
    for k in 0..r {
        for l in k + 1..r {
            out.push(unit(k).iter().zip(unit(l)).map(|(a, b)| a + b).collect());
        }
    }
    out
}

/// All sequences of at most `max_factors` factors `γ_j(v)`, `j >= 1`, `v` from `vectors`,
/// of total degree `degree`.
fn tails(degree: u32, max_factors: usize, vectors: &[Vec<BigInt>]) -> Vec<Symbol> {
    if degree == 0 {
        return vec![Vec::new()];
    }
    if max_factors == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for j in 1..=degree {
        for v in vectors {
            for mut rest in tails(degree - j, max_factors - 1, vectors) {
                rest.insert(0, (j, v.clone()));
                out.push(rest);
            }
        }
    }
    out
}

fn expand_symbol(r: usize, factors: &[(u32, Vec<BigInt>)]) -> GammaElement {
    factors.iter().fold(GammaElement::one(r), |acc, (j, v)| {
        acc.mul(&gamma_of_vector(*j as usize, v))
    })
}

fn describe(factors: &[(u32, Vec<BigInt>)]) -> String {
    factors
        .iter()
        .map(|(j, v)| {
            let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
            format!("γ{}({})", j, parts.join(","))
        })
        .collect()
}

struct RelationSweep<'a> {
    q: &'a QMap,
    consistency_checked: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl RelationSweep<'_> {
    fn fail(&mut self, what: String) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(what);
        }
    }

    /// The formula value, checked against the matrix on the expanded element.
    fn value(&mut self, sym: &[(u32, Vec<BigInt>)]) -> Vec<BigInt> {
        let by_formula = self.q.apply_symbol(sym);
        let by_matrix = self.q.apply(&expand_symbol(self.q.r, sym));
        self.consistency_checked += 1;
        if by_formula != by_matrix {
            self.fail(format!("formula and matrix disagree on {}", describe(sym)));
        }
        by_formula
    }

    fn compare(&mut self, name: &str, sym: &[(u32, Vec<BigInt>)], mut lhs: Vec<BigInt>, mut rhs: Vec<BigInt>) {
        self.q.reduce(&mut lhs);
        self.q.reduce(&mut rhs);
        if lhs != rhs {
            self.fail(format!("{name} fails at {}", describe(sym)));
        }
    }
}

fn add_vec(a: &mut [BigInt], b: &[BigInt]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn scale_vec(a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    a.iter().map(|x| x * c).collect()
}

fn concat(head: Symbol, tail: &Symbol) -> Symbol {
    let mut s = head;
    s.extend(tail.iter().cloned());
    s
}

/// Checks the three defining relations of divided powers against `q_n`, plus agreement
/// of the symbol formula with the matrix on every symbol involved.
///
/// Substitutions: the basis vectors `e_k` and the sums `e_k + e_l`, every exponent split of
/// the leading factors, and tails of up to two further factors (one when `n > 8`).
pub fn verify_q_relations(n: usize, r: usize) -> Result<QRelationReport> {
    let q = q_matrix(n, r)?;
    let vectors = substitution_vectors(r);
    let max_tail = if n <= 8 { 2 } else { 1 };
    let n32 = n as u32;
    let mut sweep = RelationSweep {
        q: &q,
        consistency_checked: 0,
        failures: 0,
        first_failure: None,
    };
    let (mut q2, mut q3, mut q4) = (0, 0, 0);
    let tail_cache: Vec<Vec<Symbol>> = (0..=n32).map(|d| tails(d, max_tail, &vectors)).collect();

    for x in &vectors {
        for j1 in 1..n32 {
            for j2 in 1..=n32 - j1 {
                for tail in &tail_cache[(n32 - j1 - j2) as usize] {
                    let lhs_sym = concat(vec![(j1, x.clone()), (j2, x.clone())], tail);
                    let rhs_sym = concat(vec![(j1 + j2, x.clone())], tail);
                    let lhs = sweep.value(&lhs_sym);
                    let c = binomial(u64::from(j1 + j2), u64::from(j1))?;
                    let rhs = scale_vec(&sweep.value(&rhs_sym), &c);
                    sweep.compare("(q2)", &lhs_sym, lhs, rhs);
                    q2 += 1;
                }
            }
        }
    }

    for (a, x) in vectors.iter().enumerate() {
        for y in &vectors[a..] {
            let sum: Vec<BigInt> = x.iter().zip(y).map(|(s, t)| s + t).collect();
            for j1 in 1..=n32 {
                for tail in &tail_cache[(n32 - j1) as usize] {
                    let lhs_sym = concat(vec![(j1, sum.clone())], tail);
                    let lhs = sweep.value(&lhs_sym);
                    let mut rhs = vec![BigInt::zero(); q.targets.len()];
                    for k in 0..=j1 {
                        let part = sweep.value(&concat(vec![(k, x.clone()), (j1 - k, y.clone())], tail));
                        add_vec(&mut rhs, &part);
                    }
                    sweep.compare("(q3)", &lhs_sym, lhs, rhs);
                    q3 += 1;
                }
            }
        }
    }

    for x in &vectors {
        let neg: Vec<BigInt> = x.iter().map(|c| -c).collect();
        for j1 in 1..=n32 {
            for tail in &tail_cache[(n32 - j1) as usize] {
                let lhs_sym = concat(vec![(j1, neg.clone())], tail);
                let lhs = sweep.value(&lhs_sym);
                let sign = if j1 % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let rhs = scale_vec(&sweep.value(&concat(vec![(j1, x.clone())], tail)), &sign);
                sweep.compare("(q4)", &lhs_sym, lhs, rhs);
                q4 += 1;
            }
        }
    }

    Ok(QRelationReport {
        n,
        r,
        q2_checked: q2,
        q3_checked: q3,
        q4_checked: q4,
        consistency_checked: sweep.consistency_checked,
        failures: sweep.failures,
        pass: sweep.failures == 0,
        first_failure: sweep.first_failure,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H0IsoReport {
    pub n: usize,
    pub r: usize,
    pub computed: GroupInvariants,
    pub expected: GroupInvariants,
    pub kills_boundaries: bool,
    pub iso: bool,
    pub pass: bool,
}

/// `q_n` induces an isomorphism `H_0 C^n(Z^r) → ⊕_{p | n} Γ_{n/p}((Z/p)^r)`.
pub fn verify_h0_iso(n: usize, r: usize) -> Result<H0IsoReport> {
    let q = q_matrix(n, r)?;
    let cx = build_c(n, r);
    let source = PresentedGroup::new(cx.dim(0), cx.d(1))?;
    let target = q.target();
    let kills_boundaries = q_kills_boundaries(&q, &cx)?;
    let iso = match presented_map_is_iso(&q.matrix, &source, &target) {
        Ok(b) => b,
        Err(Error::NotWellDefined(_)) => false,
        Err(e) => return Err(e),
    };
    let computed = source.invariants();
    let expected = expected_h0(n, r).invariants();
    Ok(H0IsoReport {
        n,
        r,
        pass: kills_boundaries && iso && computed == expected && target.invariants() == expected,
        computed,
        expected,
        kills_boundaries,
        iso,
    })
}

/// `η_i(x_1, …, x_{n/p}) = Σ_{t=1}^{i+1} (−1)^t x_1∧…x̂_t…∧x_{i+1} ⊗
/// ∏_{l≠t} γ_{p−1}(x_l) · γ_p(x_t) · γ_p(x_{i+2})⋯γ_p(x_{n/p})` for arbitrary vectors.
pub fn eta_vectors(i: usize, p: u64, xs: &[Vec<BigInt>]) -> LambdaGammaElement {
    let rank = xs.first().map_or(0, Vec::len);
    let p = p as usize;
    let mut tail = GammaElement::one(rank);
    for x in xs.iter().skip(i + 1) {
        tail = tail.mul(&gamma_of_vector(p, x));
    }
    let mut out = LambdaGammaElement::new();
    for t in 0..=i {
        let others: Vec<Vec<BigInt>> = (0..=i).filter(|&l| l != t).map(|l| xs[l].clone()).collect();
        let wedge = wedge_of_vectors(&others);
        if wedge.is_empty() {
            continue;
        }
        let mut gamma = tail.mul(&gamma_of_vector(p, &xs[t]));
        for x in &others {
            gamma = gamma.mul(&gamma_of_vector(p - 1, x));
        }
        let sign = if (t + 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        out.add_product(&wedge, &gamma, &sign);
    }
    out
}

fn unit_vector(r: usize, k: usize) -> Vec<BigInt> {
    (0..r).map(|j| BigInt::from(u8::from(j == k))).collect()
}

/// The cycle `η_i` at standard basis lifts, as an element of degree `i` of `C^n(Z^r)`.
#[derive(Clone, Debug)]
pub struct EtaCycle {
    pub i: usize,
    pub n: usize,
    pub p: u64,
    pub r: usize,
    pub lifts: Vec<usize>,
    pub element: LambdaGammaElement,
    pub vector: ChainVector,
    pub is_cycle: bool,
}

fn check_eta_shape(cx: &ChainComplexZ, i: usize, p: u64, slots: usize) -> Result<()> {
    if cx.family != Family::C {
        return Err(Error::DegreeMismatch("η lives in the dual de Rham complex".into()));
    }
    let n = cx.n;
    if p == 0 || !n.is_multiple_of(p as usize) {
        return Err(Error::DegreeMismatch(format!("{p} does not divide {n}")));
    }
    let m = n / p as usize;
    if slots != m {
        return Err(Error::DegreeMismatch(format!("{slots} arguments, expected {m}")));
    }
    if i + 1 > m || i == 0 {
        return Err(Error::DegreeMismatch(format!("need 1 <= i <= {} for n/p = {m}", m.saturating_sub(1))));
    }
    Ok(())
}

/// `η_i` of vectors inside `cx`, with its boundary checked.
pub fn eta_of_vectors_in(cx: &ChainComplexZ, i: usize, p: u64, xs: &[Vec<BigInt>]) -> Result<(LambdaGammaElement, ChainVector, bool)> {
    check_eta_shape(cx, i, p, xs.len())?;
    let element = eta_vectors(i, p, xs);
    let vector = cx.vector_of(i, &element)?;
    let is_cycle = cx.apply_d(&vector)?.is_zero();
    Ok((element, vector, is_cycle))
}

pub fn eta_in(cx: &ChainComplexZ, i: usize, p: u64, lifts: &[usize]) -> Result<EtaCycle> {
    if let Some(&bad) = lifts.iter().find(|&&k| k >= cx.r) {
        return Err(Error::DegreeMismatch(format!("generator index {bad} out of rank {}", cx.r)));
    }
    let xs: Vec<Vec<BigInt>> = lifts.iter().map(|&k| unit_vector(cx.r, k)).collect();
    let (element, vector, is_cycle) = eta_of_vectors_in(cx, i, p, &xs)?;
    Ok(EtaCycle {
        i,
        n: cx.n,
        p,
        r: cx.r,
        lifts: lifts.to_vec(),
        element,
        vector,
        is_cycle,
    })
}

pub fn eta(i: usize, p: u64, n: usize, r: usize, lifts: &[usize]) -> Result<EtaCycle> {
    eta_in(&build_c(n, r), i, p, lifts)
}

/// Standard lifts of `β_p(x̄_w) ⊗ x̄^m`: the wedge indices, then the monomial's factors.
fn generator_lifts(w: &WedgeIndex, m: &SymMonomial) -> Vec<usize> {
    let mut lifts = w.0.clone();
    for (j, &e) in m.0.iter().enumerate() {
        lifts.extend(std::iter::repeat_n(j, e as usize));
    }
    lifts
}

/// Presentation of `L_i SP^m((Z/p)^r)` over `Z`: order `p` on every generator plus the
/// Jacobi relations lifted to `0..p`.
fn source_presentation(i: usize, m: usize, p: u64, r: usize) -> Result<(Vec<(WedgeIndex, SymMonomial)>, PresentedGroup)> {
    let gp = generator_presentation(i, m, p, r)?;
    let g = gp.generators.len();
    let torsion = IntMatrix::identity(g).scale(&BigInt::from(p));
    Ok((gp.generators, PresentedGroup::new(g, torsion.hstack(&gp.relations)?)?))
}

/// `f_i^{n,p}` on generators, in the generator coordinates of `H_i C^n(Z^r)`.
#[derive(Clone, Debug)]
pub struct FMap {
    pub i: usize,
    pub n: usize,
    pub p: u64,
    pub r: usize,
    pub generators: Vec<(WedgeIndex, SymMonomial)>,
    pub source: PresentedGroup,
    pub matrix: IntMatrix,
}

pub fn f_matrix_in(cx: &ChainComplexZ, cycles: &HomologyCycles, i: usize, p: u64) -> Result<FMap> {
    let (n, r) = (cx.n, cx.r);
    if p == 0 || n % p as usize != 0 {
        return Err(Error::DegreeMismatch(format!("{p} does not divide {n}")));
    }
    let m = n / p as usize;
    let (generators, source) = source_presentation(i, m, p, r)?;
    let mut columns = Vec::with_capacity(generators.len());
    for (w, mono) in &generators {
        let cycle = eta_in(cx, i, p, &generator_lifts(w, mono))?;
        columns.push(cycles.coordinates(&cycle.vector.to_dense())?);
    }
    Ok(FMap {
        i,
        n,
        p,
        r,
        generators,
        source,
        matrix: IntMatrix::from_columns(cycles.gens(), &columns),
    })
}

/// `f_i^{n,p}` together with the presentation of its target `H_i C^n(Z^r)`.
pub fn f_matrix(i: usize, n: usize, p: u64, r: usize) -> Result<(FMap, PresentedGroup)> {
    let cx = build_c(n, r);
    let cycles = cx.homology_cycles(i)?;
    let f = f_matrix_in(&cx, &cycles, i, p)?;
    Ok((f, cycles.presentation().clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub i: usize,
    pub n: usize,
    pub r: usize,
    pub primes: Vec<u64>,
    pub source: GroupInvariants,
    pub computed: GroupInvariants,
    pub expected: Option<GroupInvariants>,
    pub well_defined: bool,
    pub iso: bool,
    pub pass: bool,
}

/// Whether `⊕_{p | n} f_i^{n,p}` is an isomorphism onto `H_i C^n(Z^r)`; also compares the
/// homology with the tabulated value when one exists.
pub fn verify_theorem(i: usize, n: usize, r: usize) -> Result<TheoremReport> {
    if i == 0 || n < 2 {
        return Err(Error::OutOfRange(format!("need i >= 1 and n >= 2, got i = {i}, n = {n}")));
    }
    let expected = if i <= 3 && n <= 7 {
        Some(expected_table_entry(n, i, r)?.invariants())
    } else {
        None
    };
    if i > n {
        // the complex stops in degree n
        let computed = GroupInvariants::trivial();
        return Ok(TheoremReport {
            i,
            n,
            r,
            primes: Vec::new(),
            source: GroupInvariants::trivial(),
            pass: expected.as_ref().is_none_or(|e| *e == computed),
            computed,
            expected,
            well_defined: true,
            iso: true,
        });
    }
    let cx = build_c(n, r);
    let cycles = cx.homology_cycles(i)?;
    let target = cycles.presentation();
    let mut source = PresentedGroup::free(0);
    let mut matrix = IntMatrix::zeros(target.gens, 0);
    let mut primes = Vec::new();
    for p in prime_divisors(n as u64) {
        if i >= n / p as usize {
            continue;
        }
        let f = f_matrix_in(&cx, &cycles, i, p)?;
        source = source.direct_sum(&f.source);
        matrix = matrix.hstack(&f.matrix)?;
        primes.push(p);
    }
    let (well_defined, iso) = match presented_map_is_iso(&matrix, &source, target) {
        Ok(b) => (true, b),
        Err(Error::NotWellDefined(_)) => (false, false),
        Err(e) => return Err(e),
    };
    let computed = target.invariants();
    let pass = iso && expected.as_ref().is_none_or(|e| *e == computed);
    Ok(TheoremReport {
        i,
        n,
        r,
        primes,
        source: source.invariants(),
        computed,
        expected,
        well_defined,
        iso,
        pass,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WellDefinedReport {
    pub i: usize,
    pub n: usize,
    pub p: u64,
    pub r: usize,
    pub cycles_checked: usize,
    pub cycle_failures: usize,
    pub lift_scalings_checked: usize,
    pub lift_scaling_failures: usize,
    pub lift_shifts_checked: usize,
    pub lift_shift_failures: usize,
    pub jacobi_checked: usize,
    pub jacobi_nonzero: usize,
    pub jacobi_outside_boundary: usize,
    pub pass: bool,
}

fn ordered_tuples(len: usize, r: usize) -> Vec<Vec<usize>> {
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

fn difference(a: &ChainVector, b: &ChainVector) -> Vec<BigInt> {
    a.to_dense().iter().zip(b.to_dense()).map(|(x, y)| x - y).collect()
}

/// Checks behind the well-definedness of `f_i^{n,p}`:
/// every `η` at standard lifts is a cycle; `η(…, p x_k, …)` and
/// `η(…, x_k + p x_m, …) − η(…, x_k, …)` are boundaries; every Jacobi element maps to
/// zero (or, failing that, to a boundary).
pub fn verify_f_welldefined(i: usize, n: usize, p: u64, r: usize) -> Result<WellDefinedReport> {
    if i == 0 || p == 0 || !n.is_multiple_of(p as usize) {
        return Err(Error::DegreeMismatch(format!("need i >= 1 and {p} | {n}")));
    }
    let m = n / p as usize;
    let mut report = WellDefinedReport {
        i,
        n,
        p,
        r,
        ..Default::default()
    };
    if i >= m {
        report.pass = true;
        return Ok(report);
    }
    let cx = build_c(n, r);
    let boundaries: BoundaryTest = cx.boundary_test(i)?;
    let gp = generator_presentation(i, m, p, r)?;
    let big_p = BigInt::from(p);

    for (w, mono) in &gp.generators {
        let lifts = generator_lifts(w, mono);
        let base = eta_in(&cx, i, p, &lifts)?;
        report.cycles_checked += 1;
        if !base.is_cycle {
            report.cycle_failures += 1;
        }
        let xs: Vec<Vec<BigInt>> = lifts.iter().map(|&k| unit_vector(r, k)).collect();
        for k in 0..m {
            let mut scaled = xs.clone();
            scaled[k] = scaled[k].iter().map(|c| c * &big_p).collect();
            let (_, v, _) = eta_of_vectors_in(&cx, i, p, &scaled)?;
            report.lift_scalings_checked += 1;
            if !boundaries.contains(&v.to_dense())? {
                report.lift_scaling_failures += 1;
            }
            for shift in 0..r {
                let mut moved = xs.clone();
                moved[k][shift] += &big_p;
                let (_, v, _) = eta_of_vectors_in(&cx, i, p, &moved)?;
                report.lift_shifts_checked += 1;
                if !boundaries.contains(&difference(&v, &base.vector))? {
                    report.lift_shift_failures += 1;
                }
            }
        }
    }

    if i + 2 <= m {
        let ys = crate::poly::sym_basis(m - i - 2, r);
        for xs in ordered_tuples(i + 2, r) {
            for y in ys.iter() {
                let mut image = LambdaGammaElement::new();
                for k in 0..i + 2 {
                    let mut lifts: Vec<usize> =
                        xs.iter().enumerate().filter(|&(t, _)| t != k).map(|(_, &x)| x).collect();
                    lifts.push(xs[k]);
                    lifts.extend(generator_lifts(&WedgeIndex(Vec::new()), y));
                    let e = eta_in(&cx, i, p, &lifts)?.element;
                    let sign = if (k + 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                    image.add(&e.scale(&sign));
                }
                report.jacobi_checked += 1;
                if !image.is_zero() {
                    report.jacobi_nonzero += 1;
                    if !boundaries.contains(&cx.vector_of(i, &image)?.to_dense())? {
                        report.jacobi_outside_boundary += 1;
                    }
                }
            }
        }
    }
    report.pass = report.cycle_failures == 0
        && report.lift_scaling_failures == 0
        && report.lift_shift_failures == 0
        && report.jacobi_outside_boundary == 0;
    Ok(report)
}

/// `β_2(ā, b̄) ⊗ c̄ d̄ ↦ a ⊗ a γ_2(b)γ_2(c)γ_2(d) − b ⊗ b γ_2(a)γ_2(c)γ_2(d)`.
pub fn f18_formula(a: &[BigInt], b: &[BigInt], c: &[BigInt], d: &[BigInt]) -> LambdaGammaElement {
    let g2 = |v: &[BigInt]| gamma_of_vector(2, v);
    let common = g2(c).mul(&g2(d));
    let mut out = LambdaGammaElement::new();
    let first = gamma_of_vector(1, a).mul(&g2(b)).mul(&common);
    out.add_product(&wedge_of_vectors(&[a.to_vec()]), &first, &BigInt::one());
    let second = gamma_of_vector(1, b).mul(&g2(a)).mul(&common);
    out.add_product(&wedge_of_vectors(&[b.to_vec()]), &second, &-BigInt::one());
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct F18Report {
    pub r: usize,
    pub source: GroupInvariants,
    #[serde(serialize_with = "serialize_big")]
    pub source_exponent: BigInt,
    pub target_invariants: GroupInvariants,
    pub contains_order4: bool,
    pub well_defined: bool,
    pub surjective: bool,
    pub injective: bool,
}

/// `f_1^8: L_1 SP^4((Z/2)^r) → H_1 C^8(Z^r)` built from the explicit formula.
pub fn f18_counterexample(r: usize) -> Result<F18Report> {
    let cx = build_c(8, r);
    let cycles = cx.homology_cycles(1)?;
    let target = cycles.presentation();
    let (generators, source) = source_presentation(1, 4, 2, r)?;
    let mut columns = Vec::with_capacity(generators.len());
    for (w, mono) in &generators {
        let l = generator_lifts(w, mono);
        let v: Vec<Vec<BigInt>> = l.iter().map(|&k| unit_vector(r, k)).collect();
        let e = f18_formula(&v[0], &v[1], &v[2], &v[3]);
        columns.push(cycles.coordinates(&cx.vector_of(1, &e)?.to_dense())?);
    }
    let matrix = IntMatrix::from_columns(target.gens, &columns);
    let well_defined = match check_well_defined(&matrix, &source, target) {
        Ok(()) => true,
        Err(Error::NotWellDefined(_)) => false,
        Err(e) => return Err(e),
    };
    let source_inv = source.invariants();
    let target_inv = target.invariants();
    let coker = invariants_of_cokernel(&matrix.hstack(&target.relations)?);
    let surjective = coker.is_trivial();
    let injective = match (target_inv.order(), coker.order(), source_inv.order()) {
        (Some(t), Some(c), Some(s)) => well_defined && t / c == s,
        _ => false,
    };
    Ok(F18Report {
        r,
        source_exponent: source_inv.exponent().unwrap_or_else(BigInt::one),
        contains_order4: target_inv.has_element_of_order(4),
        source: source_inv,
        target_invariants: target_inv,
        well_defined,
        surjective,
        injective,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct C4Report {
    pub r: usize,
    pub checked: usize,
    pub failures: usize,
    pub pass: bool,
}

/// `ā ∧ b̄ ↦ a ⊗ aγ_2(b) − b ⊗ bγ_2(a)`.
pub fn c4_formula(a: &[BigInt], b: &[BigInt]) -> LambdaGammaElement {
    let mut out = LambdaGammaElement::new();
    out.add_product(
        &wedge_of_vectors(&[a.to_vec()]),
        &gamma_of_vector(1, a).mul(&gamma_of_vector(2, b)),
        &BigInt::one(),
    );
    out.add_product(
        &wedge_of_vectors(&[b.to_vec()]),
        &gamma_of_vector(1, b).mul(&gamma_of_vector(2, a)),
        &-BigInt::one(),
    );
    out
}

/// For all pairs of lifts `a, b` drawn from `vectors`, the class of the explicit formula
/// agrees in `H_1 C^4(Z^r)` with `f_1^{4,2}` applied to `ā ∧ b̄` expanded over `F_2`.
pub fn c4_agreement(r: usize, vectors: &[Vec<BigInt>]) -> Result<C4Report> {
    let cx = build_c(4, r);
    let boundaries = cx.boundary_test(1)?;
    let basis = wedge_basis(2, r);
    let images: Vec<ChainVector> = basis
        .iter()
        .map(|w| eta_in(&cx, 1, 2, &w.0).map(|e| e.vector))
        .collect::<Result<_>>()?;
    let two = BigInt::from(2);
    let mut report = C4Report {
        r,
        checked: 0,
        failures: 0,
        pass: true,
    };
    for a in vectors {
        for b in vectors {
            let lhs = cx.vector_of(1, &c4_formula(a, b))?.to_dense();
            let mut diff = lhs;
            for (w, c) in wedge_of_vectors(&[a.clone(), b.clone()]) {
                if c.mod_floor(&two).is_zero() {
                    continue;
                }
                let k = basis.index_of(&w).expect("wedge basis");
                for (x, y) in diff.iter_mut().zip(images[k].to_dense()) {
                    *x -= y;
                }
            }
            report.checked += 1;
            if !boundaries.contains(&diff)? {
                report.failures += 1;
            }
        }
    }
    report.pass = report.failures == 0;
    Ok(report)
}

/// All vectors of length `r` with entries in `values`.
pub fn vectors_with_entries(r: usize, values: &[i64]) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|v: Vec<BigInt>| {
                values.iter().map(move |&x| {
                    let mut v = v.clone();
                    v.push(BigInt::from(x));
                    v
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|x| !x.is_zero()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn q_prime_degree() {
        let q = q_matrix(3, 2).unwrap();
        assert_eq!(q.targets.len(), 2);
        for (col, e) in q.source.iter().enumerate() {
            let hits: Vec<usize> = (0..2).filter(|&row| q.matrix.get(row, col).is_one()).collect();
            if e.0.contains(&3) {
                assert_eq!(hits.len(), 1);
            } else {
                assert!(hits.is_empty(), "mixed monomial {e} must vanish");
            }
        }
    }

    #[test]
    fn q_rank_one_examples() {
        let q = q_matrix(4, 1).unwrap();
        assert_eq!(q.targets.len(), 1);
        assert_eq!(q.targets[0].order, BigInt::from(4));
        assert_eq!(q.matrix, IntMatrix::from_rows(&[vec![1]]));
        let q = q_matrix(6, 1).unwrap();
        let orders: Vec<(u64, BigInt)> = q.targets.iter().map(|t| (t.p, t.order.clone())).collect();
        assert_eq!(orders, vec![(2, BigInt::from(2)), (3, BigInt::from(3))]);
        assert_eq!(q.matrix, IntMatrix::from_rows(&[vec![1], vec![1]]));
    }

    #[test]
    fn q_target_matches_expected_h0() {
        for n in 2..=8 {
            for r in 0..=3 {
                let q = q_matrix(n, r).unwrap();
                assert_eq!(q.target().invariants(), expected_h0(n, r).invariants());
            }
        }
    }

    #[test]
    fn q_kills_d1() {
        for n in 2..=8 {
            for r in 1..=2 {
                let q = q_matrix(n, r).unwrap();
                assert!(q_kills_boundaries(&q, &build_c(n, r)).unwrap());
            }
        }
    }

    #[test]
    fn q2_instance_in_z4() {
        // q_4(γ_2(x)γ_2(x)) = 6 γ_2(x̄) = 2 γ_2(x̄) in Z/4
        let q = q_matrix(4, 1).unwrap();
        let x = v(&[1]);
        assert_eq!(q.apply_symbol(&[(2, x.clone()), (2, x.clone())]), v(&[2]));
        let mut six = q.apply_symbol(&[(4, x)]);
        six[0] *= 6;
        q.reduce(&mut six);
        assert_eq!(six, v(&[2]));
    }

    #[test]
    fn relation_suite_small() {
        for n in 2..=6 {
            for r in 1..=2 {
                let rep = verify_q_relations(n, r).unwrap();
                assert!(rep.pass, "{rep:?}");
                assert!(rep.q2_checked > 0 && rep.q3_checked > 0 && rep.q4_checked > 0);
            }
        }
    }

    #[test]
    fn h0_iso_examples() {
        for n in 2..=6 {
            let rep = verify_h0_iso(n, 1).unwrap();
            assert!(rep.pass);
            assert_eq!(rep.computed, GroupInvariants::new(0, [n as u64]));
        }
        let rep = verify_h0_iso(4, 2).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.computed, GroupInvariants::new(0, [2, 4, 4]));
    }

    #[test]
    fn eta_one_example() {
        // η_1(x1, x2) = x1 ⊗ x1γ2(x2) − x2 ⊗ x2γ2(x1)
        let e = eta(1, 2, 4, 2, &[0, 1]).unwrap();
        assert!(e.is_cycle);
        let mut expected = LambdaGammaElement::new();
        expected.add_term(WedgeIndex(vec![0]), DividedMonomial(vec![1, 2]), BigInt::from(1));
        expected.add_term(WedgeIndex(vec![1]), DividedMonomial(vec![2, 1]), BigInt::from(-1));
        assert_eq!(e.element, expected);
    }

    #[test]
    fn eta_two_example() {
        let e = eta(2, 2, 6, 3, &[0, 1, 2]).unwrap();
        assert!(e.is_cycle);
        let mut expected = LambdaGammaElement::new();
        expected.add_term(WedgeIndex(vec![0, 1]), DividedMonomial(vec![1, 1, 2]), BigInt::from(-1));
        expected.add_term(WedgeIndex(vec![0, 2]), DividedMonomial(vec![1, 2, 1]), BigInt::from(1));
        expected.add_term(WedgeIndex(vec![1, 2]), DividedMonomial(vec![2, 1, 1]), BigInt::from(-1));
        assert_eq!(e.element, expected);
    }

    #[test]
    fn eta_repeated_lift() {
        let e = eta(1, 2, 4, 2, &[0, 0]).unwrap();
        assert!(e.element.is_zero());
        assert!(e.is_cycle);
        let e = eta(1, 2, 6, 2, &[0, 1, 0]).unwrap();
        assert!(e.is_cycle);
        assert!(matches!(eta(1, 2, 4, 2, &[0]), Err(Error::DegreeMismatch(_))));
        assert!(matches!(eta(2, 2, 4, 2, &[0, 1]), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn eta_is_alternating() {
        let a = eta(1, 2, 6, 3, &[0, 1, 2]).unwrap().element;
        let b = eta(1, 2, 6, 3, &[1, 0, 2]).unwrap().element;
        assert_eq!(a, b.scale(&BigInt::from(-1)));
    }

    #[test]
    fn f_matrix_examples() {
        let (f, target) = f_matrix(1, 4, 2, 2).unwrap();
        assert_eq!(f.generators.len(), 1);
        assert_eq!(target.invariants(), GroupInvariants::new(0, [2]));
        assert!(presented_map_is_iso(&f.matrix, &f.source, &target).unwrap());
        let (f, target) = f_matrix(2, 6, 2, 3).unwrap();
        assert_eq!(f.generators.len(), 1);
        assert!(presented_map_is_iso(&f.matrix, &f.source, &target).unwrap());
        let (f, _) = f_matrix(1, 6, 3, 2).unwrap();
        assert_eq!(f.source.invariants(), GroupInvariants::new(0, [3]));
    }

    #[test]
    fn theorem_small() {
        for r in 1..=2 {
            for n in 2..=6 {
                for i in 1..=3 {
                    let rep = verify_theorem(i, n, r).unwrap();
                    assert!(rep.pass, "{rep:?}");
                }
            }
        }
    }

    #[test]
    fn welldefined_small() {
        let rep = verify_f_welldefined(1, 4, 2, 2).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.cycles_checked, 1);
        let rep = verify_f_welldefined(1, 6, 2, 3).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.jacobi_checked > 0);
        assert_eq!(rep.jacobi_nonzero, 0);
        // top case: no Jacobi relations
        let rep = verify_f_welldefined(2, 6, 2, 3).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.jacobi_checked, 0);
    }

    #[test]
    fn f18_formula_is_eta() {
        let xs = [v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), v(&[2, -1])];
        assert_eq!(f18_formula(&xs[0], &xs[1], &xs[2], &xs[3]), eta_vectors(1, 2, &xs));
    }

    #[test]
    fn f18_examples() {
        let rep = f18_counterexample(1).unwrap();
        assert!(!rep.contains_order4);
        let rep = f18_counterexample(2).unwrap();
        assert!(rep.contains_order4);
        assert!(rep.source_exponent <= BigInt::from(2));
    }

    #[test]
    fn c4_with_general_lifts() {
        let vs = vectors_with_entries(2, &[-1, 0, 1, 2]);
        let rep = c4_agreement(2, &vs).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.checked, vs.len() * vs.len());
    }
}
