//! Smith normal form by elimination with a minimal-absolute-value pivot.
//!
//! The elimination runs first over checked `i64` and restarts over `BigInt`
//! as soon as any entry (of the matrix or of a tracked transform) overflows,
//! so every result is exact.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal in divisor-chain order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|k| self.d.get(k, k).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !Zero::is_zero(*x)).count()
    }

    /// Recomposes `U * M * V` and compares with `D`; checks the diagonal shape,
    /// the divisor chain, and `|det| = 1` of both transforms.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let Ok(um) = self.u.mul(m) else { return false };
        let Ok(umv) = um.mul(&self.v) else { return false };
        if umv != self.d {
            return false;
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                if i != j && !Zero::is_zero(self.d.get(i, j)) {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        if diag.iter().any(Signed::is_negative) {
            return false;
        }
        for w in diag.windows(2) {
            if Zero::is_zero(&w[0]) && !Zero::is_zero(&w[1]) {
                return false;
            }
            if !Zero::is_zero(&w[1]) && !w[1].is_multiple_of(&w[0]) {
                return false;
            }
        }
        [&self.u, &self.v]
            .iter()
            .all(|t| t.determinant().map(|d| d.abs().is_one()).unwrap_or(false))
    }
}

/// Which transforms to accumulate alongside the diagonalization.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Track {
    pub left: bool,
    pub right: bool,
    pub right_inverse: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct SnfParts {
    pub diagonal: Vec<BigInt>,
    pub u: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
}

impl SnfParts {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|x| !Zero::is_zero(*x)).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let parts = snf_parts(
        m,
        Track {
            left: true,
            right: true,
            right_inverse: false,
        },
    );
    SnfResult {
        u: parts.u.expect("left transform tracked"),
        d: IntMatrix::diagonal(m.rows(), m.cols(), &parts.diagonal),
        v: parts.v.expect("right transform tracked"),
    }
}

pub(crate) fn snf_parts(m: &IntMatrix, track: Track) -> SnfParts {
    if let Some(small) = to_small(m) {
        if let Some(parts) = Elimination::new(small, m.rows(), m.cols(), track).run() {
            return parts.into_parts(m.rows(), m.cols());
        }
    }
    let big = m.entries().to_vec();
    Elimination::new(big, m.rows(), m.cols(), track)
        .run()
        .expect("bigint elimination cannot overflow")
        .into_parts(m.rows(), m.cols())
}

/// Invariant factors only: the nonzero diagonal of the Smith form.
pub(crate) fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    snf_parts(m, Track::default())
        .diagonal
        .into_iter()
        .filter(|x| !Zero::is_zero(x))
        .collect()
}

fn to_small(m: &IntMatrix) -> Option<Vec<i64>> {
    m.entries().iter().map(|x| x.to_i64()).collect()
}

trait Scalar: Clone + Debug {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn divides(&self, x: &Self) -> bool;
    /// Quotient of `self / d` rounded to nearest; `None` on overflow.
    fn quotient(&self, d: &Self) -> Option<Self>;
    /// `self -= q * b`; false on overflow.
    fn sub_mul(&mut self, q: &Self, b: &Self) -> bool;
    fn add_assign(&mut self, b: &Self) -> bool;
    fn negate(&mut self) -> bool;
    fn into_big(self) -> BigInt;
}

impl Scalar for i64 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn divides(&self, x: &Self) -> bool {
        (*x as i128) % (*self as i128) == 0
    }
    fn quotient(&self, d: &Self) -> Option<Self> {
        let (a, b) = (*self as i128, *d as i128);
        let mut q = a / b;
        let r = a - q * b;
        if 2 * r.abs() > b.abs() {
            q += r.signum() * b.signum();
        }
        i64::try_from(q).ok()
    }
    fn sub_mul(&mut self, q: &Self, b: &Self) -> bool {
        let v = *self as i128 - (*q as i128) * (*b as i128);
        match i64::try_from(v) {
            Ok(v) => {
                *self = v;
                true
            }
            Err(_) => false,
        }
    }
    fn add_assign(&mut self, b: &Self) -> bool {
        match self.checked_add(*b) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn negate(&mut self) -> bool {
        match self.checked_neg() {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Scalar for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn divides(&self, x: &Self) -> bool {
        x.is_multiple_of(self)
    }
    fn quotient(&self, d: &Self) -> Option<Self> {
        let (mut q, r) = self.div_rem(d);
        if r.magnitude() * 2u32 > *d.magnitude() {
            q += r.signum() * d.signum();
        }
        Some(q)
    }
    fn sub_mul(&mut self, q: &Self, b: &Self) -> bool {
        *self -= q * b;
        true
    }
    fn add_assign(&mut self, b: &Self) -> bool {
        *self += b;
        true
    }
    fn negate(&mut self) -> bool {
        *self = -std::mem::take(self);
        true
    }
    fn into_big(self) -> BigInt {
        self
    }
}

/// Square transform stored row-major.
struct Square<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Square<T> {
    fn identity(n: usize) -> Self {
        let mut data = vec![T::nil(); n * n];
        for i in 0..n {
            data[i * n + i] = T::unit();
        }
        Square { n, data }
    }

    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &T) -> bool {
        let n = self.n;
        for c in 0..n {
            let b = self.data[t * n + c].clone();
            if !b.is_nil() && !self.data[i * n + c].sub_mul(q, &b) {
                return false;
            }
        }
        true
    }

    fn row_add(&mut self, t: usize, i: usize) -> bool {
        let n = self.n;
        for c in 0..n {
            let b = self.data[i * n + c].clone();
            if !b.is_nil() && !self.data[t * n + c].add_assign(&b) {
                return false;
            }
        }
        true
    }

    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &T) -> bool {
        let n = self.n;
        for r in 0..n {
            let b = self.data[r * n + t].clone();
            if !b.is_nil() && !self.data[r * n + j].sub_mul(q, &b) {
                return false;
            }
        }
        true
    }

    fn negate_row(&mut self, i: usize) -> bool {
        let n = self.n;
        self.data[i * n..(i + 1) * n].iter_mut().all(|x| x.negate())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            let n = self.n;
            for c in 0..n {
                self.data.swap(a * n + c, b * n + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            let n = self.n;
            for r in 0..n {
                self.data.swap(r * n + a, r * n + b);
            }
        }
    }

    fn into_matrix(self) -> IntMatrix {
        let data = self.data.into_iter().map(Scalar::into_big).collect();
        IntMatrix::from_data(self.n, self.n, data).expect("square shape")
    }
}

/// Elimination state. Invariants: `U * M0 * V = A` and `V_inv = V^{-1}`.
struct Elimination<T> {
    rows: usize,
    cols: usize,
    a: Vec<T>,
    u: Option<Square<T>>,
    v: Option<Square<T>>,
    v_inv: Option<Square<T>>,
}

struct Finished<T> {
    diagonal: Vec<T>,
    u: Option<Square<T>>,
    v: Option<Square<T>>,
    v_inv: Option<Square<T>>,
}

impl<T: Scalar> Finished<T> {
    fn into_parts(self, rows: usize, cols: usize) -> SnfParts {
        let mut diagonal: Vec<BigInt> = self.diagonal.into_iter().map(Scalar::into_big).collect();
        diagonal.resize(rows.min(cols), <BigInt as Zero>::zero());
        SnfParts {
            diagonal,
            u: self.u.map(Square::into_matrix),
            v: self.v.map(Square::into_matrix),
            v_inv: self.v_inv.map(Square::into_matrix),
        }
    }
}

impl<T: Scalar> Elimination<T> {
    fn new(a: Vec<T>, rows: usize, cols: usize, track: Track) -> Self {
        Elimination {
            rows,
            cols,
            a,
            u: track.left.then(|| Square::identity(rows)),
            v: track.right.then(|| Square::identity(cols)),
            v_inv: track.right_inverse.then(|| Square::identity(cols)),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> &T {
        &self.a[i * self.cols + j]
    }

    fn swap_rows(&mut self, x: usize, y: usize) {
        if x == y {
            return;
        }
        for c in 0..self.cols {
            self.a.swap(x * self.cols + c, y * self.cols + c);
        }
        if let Some(u) = &mut self.u {
            u.swap_rows(x, y);
        }
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        if x == y {
            return;
        }
        for r in 0..self.rows {
            self.a.swap(r * self.cols + x, r * self.cols + y);
        }
        if let Some(v) = &mut self.v {
            v.swap_cols(x, y);
        }
        if let Some(w) = &mut self.v_inv {
            w.swap_rows(x, y);
        }
    }

    /// row_i -= q * row_t, touching only columns >= t (the rest are zero).
    fn row_sub(&mut self, i: usize, t: usize, q: &T) -> bool {
        for c in t..self.cols {
            let b = self.a[t * self.cols + c].clone();
            if !b.is_nil() && !self.a[i * self.cols + c].sub_mul(q, &b) {
                return false;
            }
        }
        match &mut self.u {
            Some(u) => u.row_sub(i, t, q),
            None => true,
        }
    }

    /// col_j -= q * col_t, touching only rows >= t.
    fn col_sub(&mut self, j: usize, t: usize, q: &T) -> bool {
        for r in t..self.rows {
            let b = self.a[r * self.cols + t].clone();
            if !b.is_nil() && !self.a[r * self.cols + j].sub_mul(q, &b) {
                return false;
            }
        }
        if let Some(v) = &mut self.v {
            if !v.col_sub(j, t, q) {
                return false;
            }
        }
        if let Some(w) = &mut self.v_inv {
            // inverse of (col_j -= q col_t) applied on the left: row_t += q row_j
            let mut neg = q.clone();
            if !neg.negate() || !w.row_sub(t, j, &neg) {
                return false;
            }
        }
        true
    }

    fn row_add(&mut self, t: usize, i: usize) -> bool {
        for c in t..self.cols {
            let b = self.a[i * self.cols + c].clone();
            if !b.is_nil() && !self.a[t * self.cols + c].add_assign(&b) {
                return false;
            }
        }
        match &mut self.u {
            Some(u) => u.row_add(t, i),
            None => true,
        }
    }

    fn min_in_submatrix(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = self.at(i, j);
                if x.is_nil() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if !x.abs_lt(self.at(bi, bj)) => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn min_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        for i in t + 1..self.rows {
            let x = self.at(i, t);
            if !x.is_nil() && (self.at(best.0, best.1).is_nil() || x.abs_lt(self.at(best.0, best.1))) {
                best = (i, t);
            }
        }
        for j in t + 1..self.cols {
            let x = self.at(t, j);
            if !x.is_nil() && (self.at(best.0, best.1).is_nil() || x.abs_lt(self.at(best.0, best.1))) {
                best = (t, j);
            }
        }
        best
    }

    fn non_divisible(&self, t: usize) -> Option<usize> {
        let p = self.at(t, t);
        for i in t + 1..self.rows {
            for j in t + 1..self.cols {
                let x = self.at(i, j);
                if !x.is_nil() && !p.divides(x) {
                    return Some(i);
                }
            }
        }
        None
    }

    fn run(mut self) -> Option<Finished<T>> {
        let steps = self.rows.min(self.cols);
        let mut diagonal = Vec::with_capacity(steps);
        for t in 0..steps {
            let Some((pi, pj)) = self.min_in_submatrix(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if self.at(i, t).is_nil() {
                        continue;
                    }
                    let q = self.at(i, t).quotient(self.at(t, t))?;
                    if !self.row_sub(i, t, &q) {
                        return None;
                    }
                    dirty |= !self.at(i, t).is_nil();
                }
                for j in t + 1..self.cols {
                    if self.at(t, j).is_nil() {
                        continue;
                    }
                    let q = self.at(t, j).quotient(self.at(t, t))?;
                    if !self.col_sub(j, t, &q) {
                        return None;
                    }
                    dirty |= !self.at(t, j).is_nil();
                }
                if dirty {
                    let (bi, bj) = self.min_in_cross(t);
                    self.swap_rows(t, bi);
                    self.swap_cols(t, bj);
                    continue;
                }
                match self.non_divisible(t) {
                    Some(i) => {
                        if !self.row_add(t, i) {
                            return None;
                        }
                    }
                    None => break,
                }
            }
            if self.at(t, t).is_negative() {
                let idx = t * self.cols + t;
                if !self.a[idx].negate() {
                    return None;
                }
                if let Some(u) = &mut self.u {
                    if !u.negate_row(t) {
                        return None;
                    }
                }
            }
            diagonal.push(self.at(t, t).clone());
        }
        Some(Finished {
            diagonal,
            u: self.u,
            v: self.v,
            v_inv: self.v_inv,
        })
    }
}
