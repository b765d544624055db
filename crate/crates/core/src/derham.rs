//! The dual de Rham complexes `C^n(Z^r)` with terms `Λ^i ⊗ Γ_{n−i}` and the classical
//! de Rham complexes `D^n(Z^r)` with terms `SP^i ⊗ Λ^{n−i}`, as explicit integer matrices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::abelian::{tensor, tor, FgAbelian};
use crate::error::{Error, Result};
use crate::linear::{
    coordinates_in_lattice, exchange, homology_invariants, homology_presentation,
    GroupInvariants, IntMatrix, IntegerSolver, LatticeBasis, PresentedGroup,
};
use crate::poly::{
    gamma_basis, gamma_module_action, sym_basis, wedge_basis, wedge_insert, DividedMonomial,
    LambdaGammaElement, SymMonomial, WedgeIndex,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    C,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::C => write!(f, "C"),
            Family::D => write!(f, "D"),
        }
    }
}

/// A basis tensor of one term of the complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    /// `wedge ⊗ divided monomial` in `Λ^i ⊗ Γ_{n−i}`.
    LambdaGamma(WedgeIndex, DividedMonomial),
    /// `monomial ⊗ wedge` in `SP^i ⊗ Λ^{n−i}`.
    SymLambda(SymMonomial, WedgeIndex),
}

impl Cell {
    /// Multidegree: how often each generator occurs. The differentials preserve it.
    pub fn weight(&self) -> Vec<u32> {
        let (w, exps) = match self {
            Cell::LambdaGamma(w, m) => (w, &m.0),
            Cell::SymLambda(m, w) => (w, &m.0),
        };
        let mut out = exps.clone();
        for &j in &w.0 {
            out[j] += 1;
        }
        out
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::LambdaGamma(w, m) => write!(f, "{w} ⊗ {m}"),
            Cell::SymLambda(m, w) => write!(f, "{m} ⊗ {w}"),
        }
    }
}

/// Based free chain complex over `Z` with differentials `d_i: degree i → degree i−1`.
#[derive(Clone, Debug)]
pub struct ChainComplexZ {
    pub family: Family,
    pub n: usize,
    pub r: usize,
    cells: Vec<Vec<Cell>>,
    index: Vec<HashMap<Cell, usize>>,
    /// `differentials[0]` is the zero map out of degree 0.
    differentials: Vec<IntMatrix>,
}

/// Sparse element of one term of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChainVector {
    pub degree: usize,
    pub dim: usize,
    pub coeffs: BTreeMap<usize, BigInt>,
}

impl ChainVector {
    pub fn to_dense(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim];
        for (&i, c) in &self.coeffs {
            v[i] = c.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl ChainComplexZ {
    fn from_parts(family: Family, n: usize, r: usize, cells: Vec<Vec<Cell>>, differentials: Vec<IntMatrix>) -> Self {
        let index = cells
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
            .collect();
        ChainComplexZ {
            family,
            n,
            r,
            cells,
            index,
            differentials,
        }
    }

    /// Top degree (the complex lives in degrees `0..=len`).
    pub fn len(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(Vec::is_empty)
    }

    pub fn dim(&self, i: usize) -> usize {
        self.cells.get(i).map_or(0, Vec::len)
    }

    pub fn cells(&self, i: usize) -> &[Cell] {
        &self.cells[i]
    }

    pub fn cell_index(&self, i: usize, c: &Cell) -> Option<usize> {
        self.index.get(i)?.get(c).copied()
    }

    /// `d_i`; `d_0` and `d_{top+1}` are zero maps of the right shape.
    pub fn d(&self, i: usize) -> IntMatrix {
        if i <= self.len() {
            self.differentials[i].clone()
        } else {
            IntMatrix::zeros(self.dim(i - 1), 0)
        }
    }

    pub fn d_ref(&self, i: usize) -> Option<&IntMatrix> {
        self.differentials.get(i)
    }

    /// `d_{i−1} d_i = 0` for every `i`.
    pub fn is_complex(&self) -> bool {
        (2..=self.len()).all(|i| {
            self.differentials[i - 1]
                .mul(&self.differentials[i])
                .map(|m| m.is_zero())
                .unwrap_or(false)
        })
    }

    fn check_degree(&self, i: usize) -> Result<()> {
        if i > self.len() {
            return Err(Error::DegreeOutOfRange(format!(
                "degree {i} in a complex of length {}",
                self.len()
            )));
        }
        Ok(())
    }

    /// Homology from the full matrices.
    pub fn homology_full(&self, i: usize) -> Result<GroupInvariants> {
        self.check_degree(i)?;
        homology_invariants(&self.d(i + 1), &self.d(i))
    }

    /// Homology computed blockwise over the multidegree decomposition.
    pub fn homology(&self, i: usize) -> Result<GroupInvariants> {
        self.check_degree(i)?;
        let mut total = GroupInvariants::trivial();
        for block in self.weight_blocks() {
            if block.dim(i) == 0 {
                continue;
            }
            total = total.direct_sum(&block.homology_full(i)?);
        }
        Ok(total)
    }

    pub fn homology_presentation(&self, i: usize) -> Result<(PresentedGroup, LatticeBasis)> {
        self.check_degree(i)?;
        homology_presentation(&self.d(i + 1), &self.d(i))
    }

    /// Subcomplex spanned by the cells accepted by `keep` (must be a union of
    /// multidegree blocks to be a direct summand).
    pub fn restrict<F: Fn(&Cell) -> bool>(&self, keep: F) -> ChainComplexZ {
        let kept: Vec<Vec<usize>> = self
            .cells
            .iter()
            .map(|cs| (0..cs.len()).filter(|&k| keep(&cs[k])).collect())
            .collect();
        self.restrict_indices(&kept)
    }

    fn restrict_indices(&self, kept: &[Vec<usize>]) -> ChainComplexZ {
        let cells = kept
            .iter()
            .zip(&self.cells)
            .map(|(ks, cs)| ks.iter().map(|&k| cs[k].clone()).collect())
            .collect();
        let mut differentials = vec![IntMatrix::zeros(0, kept[0].len())];
        for i in 1..self.cells.len() {
            differentials.push(self.differentials[i].select(&kept[i - 1], &kept[i]));
        }
        ChainComplexZ::from_parts(self.family, self.n, self.r, cells, differentials)
    }

    /// Cell indices per degree for each multidegree, ordered by multidegree.
    fn weight_partition(&self) -> Vec<Vec<Vec<usize>>> {
        let mut parts: BTreeMap<Vec<u32>, Vec<Vec<usize>>> = BTreeMap::new();
        for (i, cs) in self.cells.iter().enumerate() {
            for (k, c) in cs.iter().enumerate() {
                parts
                    .entry(c.weight())
                    .or_insert_with(|| vec![Vec::new(); self.cells.len()])[i]
                    .push(k);
            }
        }
        parts.into_values().collect()
    }

    /// Splits into the direct summands of fixed multidegree, ordered by multidegree.
    pub fn weight_blocks(&self) -> Vec<ChainComplexZ> {
        self.weight_partition()
            .iter()
            .map(|kept| self.restrict_indices(kept))
            .collect()
    }

    /// Presentation of `H_i` together with a way to read off the class of a cycle,
    /// assembled from the multidegree blocks.
    pub fn homology_cycles(&self, i: usize) -> Result<HomologyCycles> {
        self.check_degree(i)?;
        let mut blocks = Vec::new();
        let mut block_of_cell = vec![usize::MAX; self.dim(i)];
        let mut presentation = PresentedGroup::free(0);
        for kept in self.weight_partition() {
            if kept[i].is_empty() {
                continue;
            }
            let sub = self.restrict_indices(&kept);
            let (group, kernel) = sub.homology_presentation(i)?;
            for &c in &kept[i] {
                block_of_cell[c] = blocks.len();
            }
            blocks.push(CycleBlock {
                cells: kept[i].clone(),
                offset: presentation.gens,
                kernel,
            });
            presentation = presentation.direct_sum(&group);
        }
        Ok(HomologyCycles {
            degree: i,
            dim: self.dim(i),
            presentation,
            blocks,
            block_of_cell,
        })
    }

    /// Membership test for the image of `d_{i+1}` in degree `i`.
    pub fn boundary_test(&self, i: usize) -> Result<BoundaryTest> {
        self.check_degree(i)?;
        let mut blocks = Vec::new();
        let mut block_of_cell = vec![usize::MAX; self.dim(i)];
        for kept in self.weight_partition() {
            if kept[i].is_empty() {
                continue;
            }
            let above = kept.get(i + 1).cloned().unwrap_or_default();
            let d = if i < self.len() {
                self.differentials[i + 1].select(&kept[i], &above)
            } else {
                IntMatrix::zeros(kept[i].len(), 0)
            };
            for &c in &kept[i] {
                block_of_cell[c] = blocks.len();
            }
            blocks.push((kept[i].clone(), IntegerSolver::new(&d)));
        }
        Ok(BoundaryTest {
            dim: self.dim(i),
            blocks,
            block_of_cell,
        })
    }

    /// Dense coordinates of a `Λ ⊗ Γ` element in degree `i`.
    pub fn vector_of(&self, i: usize, e: &LambdaGammaElement) -> Result<ChainVector> {
        self.check_degree(i)?;
        let mut coeffs = BTreeMap::new();
        for ((w, m), c) in e.terms() {
            let cell = Cell::LambdaGamma(w.clone(), m.clone());
            let k = self.cell_index(i, &cell).ok_or_else(|| {
                Error::DegreeMismatch(format!("{cell} is not a basis tensor in degree {i}"))
            })?;
            coeffs.insert(k, c.clone());
        }
        Ok(ChainVector {
            degree: i,
            dim: self.dim(i),
            coeffs,
        })
    }

    pub fn apply_d(&self, v: &ChainVector) -> Result<ChainVector> {
        let image = self.d(v.degree).mul_vec(&v.to_dense())?;
        let coeffs = image
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(ChainVector {
            degree: v.degree.saturating_sub(1),
            dim: self.dim(v.degree.saturating_sub(1)),
            coeffs,
        })
    }

    /// Writes `d_1 … d_top` as `d{i}.txt` in the text exchange format.
    pub fn dump_matrices(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for i in 1..=self.len() {
            std::fs::write(dir.join(format!("d{i}.txt")), exchange::to_text(&self.differentials[i]))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct CycleBlock {
    cells: Vec<usize>,
    offset: usize,
    kernel: LatticeBasis,
}

/// `H_i` of a complex as a presented group whose generators are the kernel
/// basis vectors of the multidegree blocks.
#[derive(Clone, Debug)]
pub struct HomologyCycles {
    pub degree: usize,
    dim: usize,
    presentation: PresentedGroup,
    blocks: Vec<CycleBlock>,
    block_of_cell: Vec<usize>,
}

fn split_by_block(
    v: &[BigInt],
    dim: usize,
    nblocks: usize,
    block_of_cell: &[usize],
) -> Result<Vec<Vec<(usize, BigInt)>>> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} in a term of rank {dim}",
            v.len()
        )));
    }
    let mut parts = vec![Vec::new(); nblocks];
    for (k, c) in v.iter().enumerate() {
        if !c.is_zero() {
            parts[block_of_cell[k]].push((k, c.clone()));
        }
    }
    Ok(parts)
}

impl HomologyCycles {
    pub fn presentation(&self) -> &PresentedGroup {
        &self.presentation
    }

    pub fn invariants(&self) -> GroupInvariants {
        self.presentation.invariants()
    }

    pub fn gens(&self) -> usize {
        self.presentation.gens
    }

    /// Generator coordinates of a cycle; `NotInLattice` if `v` is not a cycle.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        let parts = split_by_block(v, self.dim, self.blocks.len(), &self.block_of_cell)?;
        let mut out = vec![BigInt::zero(); self.gens()];
        for (block, entries) in self.blocks.iter().zip(parts) {
            if entries.is_empty() {
                continue;
            }
            let mut local = vec![BigInt::zero(); block.cells.len()];
            for (k, c) in entries {
                let pos = block.cells.binary_search(&k).expect("cell in block");
                local[pos] = c;
            }
            let coords = coordinates_in_lattice(&local, &block.kernel)?;
            for (j, c) in coords.into_iter().enumerate() {
                out[block.offset + j] = c;
            }
        }
        Ok(out)
    }

    /// The cycle with the given generator coordinates.
    pub fn cycle(&self, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        if coords.len() != self.gens() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for {} generators",
                coords.len(),
                self.gens()
            )));
        }
        let mut out = vec![BigInt::zero(); self.dim];
        for block in &self.blocks {
            let k = block.kernel.rank();
            let local = block.kernel.basis().mul_vec(&coords[block.offset..block.offset + k])?;
            for (pos, c) in local.into_iter().enumerate() {
                out[block.cells[pos]] += c;
            }
        }
        Ok(out)
    }
}

/// Decides membership in `im d_{i+1}` block by block.
#[derive(Clone, Debug)]
pub struct BoundaryTest {
    dim: usize,
    blocks: Vec<(Vec<usize>, IntegerSolver)>,
    block_of_cell: Vec<usize>,
}

impl BoundaryTest {
    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        let parts = split_by_block(v, self.dim, self.blocks.len(), &self.block_of_cell)?;
        for ((cells, solver), entries) in self.blocks.iter().zip(parts) {
            if entries.is_empty() {
                continue;
            }
            let mut local = vec![BigInt::zero(); cells.len()];
            for (k, c) in entries {
                local[cells.binary_search(&k).expect("cell in block")] = c;
            }
            if !solver.contains(&local)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `C^n(Z^r)`: `d_i(b_1∧…∧b_i ⊗ X) = Σ_k (−1)^k b_1∧…b̂_k…∧b_i ⊗ b_k X`.
pub fn build_c(n: usize, r: usize) -> ChainComplexZ {
    let mut cells = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let wedges = wedge_basis(i, r);
        let gammas = gamma_basis(n - i, r);
        cells.push(
            wedges
                .iter()
                .flat_map(|w| gammas.iter().map(move |m| Cell::LambdaGamma(w.clone(), m.clone())))
                .collect::<Vec<_>>(),
        );
    }
    let index: Vec<HashMap<Cell, usize>> = cells
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect())
        .collect();
    let mut differentials = vec![IntMatrix::zeros(0, cells[0].len())];
    for i in 1..=n {
        let mut d = IntMatrix::zeros(cells[i - 1].len(), cells[i].len());
        for (col, cell) in cells[i].iter().enumerate() {
            let Cell::LambdaGamma(w, m) = cell else { unreachable!() };
            for (pos, &j) in w.0.iter().enumerate() {
                let (coeff, m2) = gamma_module_action(j, m);
                let target = Cell::LambdaGamma(w.without(pos), m2);
                let row = index[i - 1][&target];
                // k = pos + 1
                let signed = if (pos + 1) % 2 == 0 { coeff } else { -coeff };
                d.add_to(row, col, &signed);
            }
        }
        differentials.push(d);
    }
    ChainComplexZ::from_parts(Family::C, n, r, cells, differentials)
}

/// `D^n(Z^r)`: `d^i(b_1⋯b_i ⊗ w) = Σ_k b_1⋯b̂_k⋯b_i ⊗ b_k ∧ w`; extracting `x_j` from
/// `x_j^{e}` contributes `e` equal terms.
pub fn build_d(n: usize, r: usize) -> ChainComplexZ {
    let mut cells = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let syms = sym_basis(i, r);
        let wedges = wedge_basis(n - i, r);
        cells.push(
            syms.iter()
                .flat_map(|m| wedges.iter().map(move |w| Cell::SymLambda(m.clone(), w.clone())))
                .collect::<Vec<_>>(),
        );
    }
    let index: Vec<HashMap<Cell, usize>> = cells
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect())
        .collect();
    let mut differentials = vec![IntMatrix::zeros(0, cells[0].len())];
    for i in 1..=n {
        let mut d = IntMatrix::zeros(cells[i - 1].len(), cells[i].len());
        for (col, cell) in cells[i].iter().enumerate() {
            let Cell::SymLambda(m, w) = cell else { unreachable!() };
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let Some((sign, w2)) = wedge_insert(j, w) else { continue };
                let mut exps = m.0.clone();
                exps[j] -= 1;
                let row = index[i - 1][&Cell::SymLambda(SymMonomial(exps), w2)];
                d.add_to(row, col, &BigInt::from(i64::from(e) * i64::from(sign)));
            }
        }
        differentials.push(d);
    }
    ChainComplexZ::from_parts(Family::D, n, r, cells, differentials)
}

pub fn build(family: Family, n: usize, r: usize) -> ChainComplexZ {
    match family {
        Family::C => build_c(n, r),
        Family::D => build_d(n, r),
    }
}

/// Tensor product complex with `d(x ⊗ y) = dx ⊗ y + (−1)^{deg x} x ⊗ dy`,
/// basis ordered by total degree and then lexicographically by (x, y).
/// Returns the differentials and, per total degree, the (x-degree, x-index, y-index) triples.
fn tensor_complex(
    a: &ChainComplexZ,
    b: &ChainComplexZ,
) -> (Vec<IntMatrix>, Vec<Vec<(usize, usize, usize)>>) {
    let top = a.len() + b.len();
    let mut bases: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); top + 1];
    for s in 0..=a.len() {
        for t in 0..=b.len() {
            for x in 0..a.dim(s) {
                for y in 0..b.dim(t) {
                    bases[s + t].push((s, x, y));
                }
            }
        }
    }
    let lookup: Vec<HashMap<(usize, usize, usize), usize>> = bases
        .iter()
        .map(|bs| bs.iter().enumerate().map(|(k, &t)| (t, k)).collect())
        .collect();
    let mut ds = vec![IntMatrix::zeros(0, bases[0].len())];
    for k in 1..=top {
        let mut d = IntMatrix::zeros(bases[k - 1].len(), bases[k].len());
        for (col, &(s, x, y)) in bases[k].iter().enumerate() {
            let t = k - s;
            if s > 0 {
                let da = a.d_ref(s).expect("degree");
                for x2 in 0..da.rows() {
                    let c = da.get(x2, x);
                    if !c.is_zero() {
                        d.add_to(lookup[k - 1][&(s - 1, x2, y)], col, c);
                    }
                }
            }
            if t > 0 {
                let db = b.d_ref(t).expect("degree");
                for y2 in 0..db.rows() {
                    let c = db.get(y2, y);
                    if !c.is_zero() {
                        let c = if s % 2 == 0 { c.clone() } else { -c.clone() };
                        d.add_to(lookup[k - 1][&(s, x, y2)], col, &c);
                    }
                }
            }
        }
        ds.push(d);
    }
    (ds, bases)
}

fn split_cell(cell: &Cell, a: usize) -> (Cell, Cell) {
    let Cell::LambdaGamma(w, m) = cell else { panic!("only C-family cells split") };
    let wa = WedgeIndex(w.0.iter().copied().filter(|&j| j < a).collect());
    let wb = WedgeIndex(w.0.iter().copied().filter(|&j| j >= a).map(|j| j - a).collect());
    (
        Cell::LambdaGamma(wa, DividedMonomial(m.0[..a].to_vec())),
        Cell::LambdaGamma(wb, DividedMonomial(m.0[a..].to_vec())),
    )
}

fn cell_degree(cell: &Cell) -> usize {
    match cell {
        Cell::LambdaGamma(w, m) => w.degree() + m.degree() as usize,
        Cell::SymLambda(m, w) => w.degree() + m.degree() as usize,
    }
}

/// Checks entry for entry that `C^n(Z^{a+b}) = ⊕_{i+j=n} C^i(Z^a) ⊗ C^j(Z^b)`:
/// each basis tensor splits along the two generator sets, the differential has no
/// entries between different summands, and on each summand it equals the tensor
/// product differential.
pub fn check_sum_decomposition(n: usize, a: usize, b: usize) -> bool {
    let whole = build_c(n, a + b);
    let pieces_a: Vec<ChainComplexZ> = (0..=n).map(|i| build_c(i, a)).collect();
    let pieces_b: Vec<ChainComplexZ> = (0..=n).map(|j| build_c(j, b)).collect();
    // (summand i, position in the tensor complex basis) for every cell of `whole`
    let mut location: Vec<Vec<(usize, usize)>> = Vec::new();
    let tensors: Vec<_> = (0..=n)
        .map(|i| tensor_complex(&pieces_a[i], &pieces_b[n - i]))
        .collect();
    for k in 0..=n {
        let mut locs = Vec::with_capacity(whole.dim(k));
        for cell in whole.cells(k) {
            let (ca, cb) = split_cell(cell, a);
            let i = cell_degree(&ca);
            let s = match &ca {
                Cell::LambdaGamma(w, _) => w.degree(),
                _ => unreachable!(),
            };
            let Some(x) = pieces_a[i].cell_index(s, &ca) else { return false };
            let Some(y) = pieces_b[n - i].cell_index(k - s, &cb) else { return false };
            let (_, bases) = &tensors[i];
            let Some(pos) = bases[k].iter().position(|&t| t == (s, x, y)) else { return false };
            locs.push((i, pos));
        }
        location.push(locs);
    }
    // every tensor basis element is hit exactly once
    for k in 0..=n {
        let total: usize = tensors.iter().map(|(_, bases)| bases[k].len()).sum();
        if total != whole.dim(k) {
            return false;
        }
    }
    for k in 1..=n {
        let d = whole.d(k);
        for col in 0..d.cols() {
            let (ic, pc) = location[k][col];
            for row in 0..d.rows() {
                let (ir, pr) = location[k - 1][row];
                let expected = if ir == ic {
                    tensors[ic].0[k].get(pr, pc).clone()
                } else {
                    BigInt::zero()
                };
                if d.get(row, col) != &expected {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KunnethReport {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub k: usize,
    pub computed: GroupInvariants,
    pub expected: GroupInvariants,
    pub pass: bool,
}

/// Homology table `H_r C^i(Z^a)` for `0 <= r <= i <= n`, with `C^0 = Z` in degree 0.
fn homology_table(n: usize, a: usize) -> Result<Vec<Vec<FgAbelian>>> {
    (0..=n)
        .map(|i| {
            let cx = build_c(i, a);
            (0..=i)
                .map(|r| cx.homology(r).map(|h| FgAbelian::from_invariants(&h)))
                .collect()
        })
        .collect()
}

fn lookup(table: &[Vec<FgAbelian>], i: usize, r: usize) -> FgAbelian {
    table[i].get(r).cloned().unwrap_or_default()
}

/// `H_k C^n(Z^{a+b})` against the split Künneth formula over all `i + j = n`.
pub fn kunneth_check(n: usize, a: usize, b: usize, k: usize) -> Result<KunnethReport> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("Künneth check needs n >= 2, got {n}")));
    }
    let computed = build_c(n, a + b).homology(k)?;
    let ha = homology_table(n, a)?;
    let hb = homology_table(n, b)?;
    let mut expected = FgAbelian::trivial();
    for i in 0..=n {
        let j = n - i;
        for r in 0..=k {
            expected = expected.direct_sum(&tensor(&lookup(&ha, i, r), &lookup(&hb, j, k - r)));
        }
        for r in 0..k {
            expected = expected.direct_sum(&tor(&lookup(&ha, i, r), &lookup(&hb, j, k - 1 - r)));
        }
    }
    let expected = expected.invariants();
    Ok(KunnethReport {
        n,
        a,
        b,
        k,
        pass: computed == expected,
        computed,
        expected,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossEffectReport {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub computed: GroupInvariants,
    pub expected: GroupInvariants,
    pub pass: bool,
}

/// `H_0` of the cross-effect summand of `C^n(Z^a ⊕ Z^b)` (cells involving generators
/// from both sides) against `⊕_{i+j=n, i,j>0} H_0 C^i(Z^a) ⊗ H_0 C^j(Z^b)`.
pub fn cross_effect_h0(n: usize, a: usize, b: usize) -> Result<CrossEffectReport> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("cross-effect needs n >= 2, got {n}")));
    }
    let cross = build_c(n, a + b).restrict(|c| {
        let w = c.weight();
        w[..a].iter().any(|&x| x > 0) && w[a..].iter().any(|&x| x > 0)
    });
    let computed = cross.homology(0)?;
    let mut expected = FgAbelian::trivial();
    for i in 1..n {
        let hi = FgAbelian::from_invariants(&build_c(i, a).homology(0)?);
        let hj = FgAbelian::from_invariants(&build_c(n - i, b).homology(0)?);
        expected = expected.direct_sum(&tensor(&hi, &hj));
    }
    let expected = expected.invariants();
    Ok(CrossEffectReport {
        n,
        a,
        b,
        pass: computed == expected,
        computed,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c2_rank1_is_multiplication_by_two() {
        let c = build_c(2, 1);
        assert_eq!(c.d(1), IntMatrix::from_rows(&[vec![-2]]));
        assert_eq!(c.d(2).rows(), 1);
        assert_eq!(c.d(2).cols(), 0);
    }

    #[test]
    fn rank_zero_is_trivial() {
        for n in 1..5 {
            let c = build_c(n, 0);
            for i in 0..=n {
                assert_eq!(c.dim(i), 0);
                assert!(c.homology(i).unwrap().is_trivial());
            }
        }
    }

    #[test]
    fn c4_r2_shape() {
        let c = build_c(4, 2);
        let d1 = c.d(1);
        assert_eq!((d1.rows(), d1.cols()), (5, 8));
    }

    #[test]
    fn term_dimensions() {
        use crate::numtheory::binomial;
        let b = |n: usize, k: usize| -> usize {
            if k > n { 0 } else { binomial(n as u64, k as u64).unwrap().try_into().unwrap() }
        };
        for r in 1..4usize {
            for n in 1..6usize {
                let c = build_c(n, r);
                let d = build_d(n, r);
                for i in 0..=n {
                    assert_eq!(c.dim(i), b(r, i) * b(r + n - i - 1, n - i));
                    assert_eq!(d.dim(i), b(r + i - 1, i) * b(r, n - i));
                }
            }
        }
    }

    #[test]
    fn d1_is_identity() {
        for r in 0..4 {
            assert_eq!(build_d(1, r).d(1), IntMatrix::identity(r));
        }
    }

    #[test]
    fn d2_rank1_multiplicity() {
        let d = build_d(2, 1);
        // SP^2 ⊗ Λ^0 → SP^1 ⊗ Λ^1: x^2 ↦ 2 x ⊗ x
        assert_eq!(d.d(2), IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(d.dim(0), 0);
    }

    #[test]
    fn square_zero_small() {
        for n in 1..=6 {
            for r in 0..=3 {
                assert!(build_c(n, r).is_complex());
                assert!(build_d(n, r).is_complex());
            }
        }
    }

    #[test]
    fn homology_examples() {
        let three = build_c(3, 2);
        assert_eq!(three.homology(0).unwrap(), GroupInvariants::new(0, [3, 3]));
        let five = build_c(5, 3);
        for i in 1..=3 {
            assert!(five.homology(i).unwrap().is_trivial());
        }
        assert_eq!(
            build_c(4, 2).homology(0).unwrap(),
            GroupInvariants::new(0, [2, 4, 4])
        );
        assert!(three.homology(4).is_err());
    }

    #[test]
    fn blockwise_matches_full() {
        for n in 1..=6 {
            for r in 1..=2 {
                let c = build_c(n, r);
                let d = build_d(n, r);
                for i in 0..=n {
                    assert_eq!(c.homology(i).unwrap(), c.homology_full(i).unwrap());
                    assert_eq!(d.homology(i).unwrap(), d.homology_full(i).unwrap());
                }
            }
        }
    }

    #[test]
    fn c1_is_acyclic() {
        for r in 1..4 {
            let c = build_c(1, r);
            assert!(c.homology(0).unwrap().is_trivial());
            assert!(c.homology(1).unwrap().is_trivial());
        }
    }

    #[test]
    fn sum_decomposition_small() {
        assert!(check_sum_decomposition(2, 1, 1));
        assert!(check_sum_decomposition(4, 1, 1));
        assert!(check_sum_decomposition(3, 1, 2));
    }

    #[test]
    fn kunneth_examples() {
        let r = kunneth_check(2, 1, 1, 0).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.computed, GroupInvariants::new(0, [2, 2]));
        let r = kunneth_check(4, 1, 1, 1).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.computed.has_element_of_order(2));
        for k in 1..=3 {
            assert!(kunneth_check(3, 1, 2, k).unwrap().computed.is_trivial());
        }
    }

    #[test]
    fn cross_effect_examples() {
        let r = cross_effect_h0(2, 1, 1).unwrap();
        assert!(r.pass);
        assert!(r.computed.is_trivial());
        let r = cross_effect_h0(4, 1, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.computed, GroupInvariants::new(0, [2]));
        let r = cross_effect_h0(6, 1, 1).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn cycles_and_boundaries() {
        let c = build_c(4, 2);
        let h = c.homology_cycles(1).unwrap();
        assert_eq!(h.invariants(), GroupInvariants::new(0, [2]));
        assert_eq!(h.invariants(), c.homology(1).unwrap());
        let b = c.boundary_test(1).unwrap();
        for g in 0..h.gens() {
            let mut e = vec![BigInt::zero(); h.gens()];
            e[g] = BigInt::from(1);
            let z = h.cycle(&e).unwrap();
            assert!(c.d(1).mul_vec(&z).unwrap().iter().all(Zero::is_zero));
            assert_eq!(h.coordinates(&z).unwrap(), e);
        }
        for col in 0..c.dim(2) {
            assert!(b.contains(&c.d(2).column(col)).unwrap());
        }
        let mut not_cycle = vec![BigInt::zero(); c.dim(1)];
        not_cycle[0] = BigInt::from(1);
        assert_eq!(h.coordinates(&not_cycle), Err(Error::NotInLattice));
    }
}
