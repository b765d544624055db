//! Closed-form functors on finitely generated abelian groups written as sums of cyclics.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::koszul::derived_sp;
use crate::linear::GroupInvariants;
use crate::numtheory::{binomial, gcd_stable, prime_divisors};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cyclic {
    Free,
    /// `Z/m`, `m >= 2`.
    Finite(u64),
}

/// Direct sum of cyclic groups, kept in its natural summand order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FgAbelian {
    summands: Vec<Cyclic>,
}

impl FgAbelian {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbelian {
            summands: vec![Cyclic::Free; rank],
        }
    }

    /// `Z/m`; `m = 1` gives the trivial group, `m = 0` gives `Z`.
    pub fn cyclic(m: u64) -> Self {
        let mut g = Self::trivial();
        g.push_order(m);
        g
    }

    /// `(Z/m)^count`.
    pub fn elementary(m: u64, count: usize) -> Self {
        let mut g = Self::trivial();
        for _ in 0..count {
            g.push_order(m);
        }
        g
    }

    fn push_order(&mut self, m: u64) {
        match m {
            0 => self.summands.push(Cyclic::Free),
            1 => {}
            m => self.summands.push(Cyclic::Finite(m)),
        }
    }

    pub fn summands(&self) -> &[Cyclic] {
        &self.summands
    }

    pub fn is_trivial(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn direct_sum(&self, other: &FgAbelian) -> FgAbelian {
        let mut summands = self.summands.clone();
        summands.extend_from_slice(&other.summands);
        FgAbelian { summands }
    }

    /// Canonical cyclic decomposition of the given invariants.
    pub fn from_invariants(g: &GroupInvariants) -> Self {
        let mut out = FgAbelian::free(g.free_rank);
        for m in &g.torsion {
            out.push_order(m.try_into().expect("torsion order fits in u64"));
        }
        out
    }

    pub fn invariants(&self) -> GroupInvariants {
        let free = self.summands.iter().filter(|c| **c == Cyclic::Free).count();
        GroupInvariants::new(
            free,
            self.summands.iter().filter_map(|c| match c {
                Cyclic::Finite(m) => Some(*m),
                Cyclic::Free => None,
            }),
        )
    }
}

impl fmt::Display for FgAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        let free = self.summands.iter().filter(|c| **c == Cyclic::Free).count();
        match free {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        for c in &self.summands {
            if let Cyclic::Finite(m) = c {
                parts.push(format!("Z/{m}"));
            }
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

fn tensor_cyclic(a: Cyclic, b: Cyclic) -> Option<Cyclic> {
    match (a, b) {
        (Cyclic::Free, x) | (x, Cyclic::Free) => Some(x),
        (Cyclic::Finite(m), Cyclic::Finite(n)) => {
            let g = m.gcd(&n);
            (g > 1).then_some(Cyclic::Finite(g))
        }
    }
}

fn tor_cyclic(a: Cyclic, b: Cyclic) -> Option<Cyclic> {
    match (a, b) {
        (Cyclic::Free, _) | (_, Cyclic::Free) => None,
        (Cyclic::Finite(m), Cyclic::Finite(n)) => {
            let g = m.gcd(&n);
            (g > 1).then_some(Cyclic::Finite(g))
        }
    }
}

pub fn tensor(a: &FgAbelian, b: &FgAbelian) -> FgAbelian {
    let summands = a
        .summands
        .iter()
        .flat_map(|&x| b.summands.iter().filter_map(move |&y| tensor_cyclic(x, y)))
        .collect();
    FgAbelian { summands }
}

pub fn tor(a: &FgAbelian, b: &FgAbelian) -> FgAbelian {
    let summands = a
        .summands
        .iter()
        .flat_map(|&x| b.summands.iter().filter_map(move |&y| tor_cyclic(x, y)))
        .collect();
    FgAbelian { summands }
}

/// `Γ_r(Z/n) = Z/(n · (r, n^∞))`, with `Γ_0 = Z`.
pub fn gamma_cyclic(r: usize, n: u64) -> FgAbelian {
    assert!(n >= 2, "gamma_cyclic needs n >= 2");
    if r == 0 {
        return FgAbelian::free(1);
    }
    FgAbelian::cyclic(n * gcd_stable(r as u64, n))
}

fn gamma_of_summand(r: usize, c: Cyclic) -> FgAbelian {
    match c {
        Cyclic::Free => FgAbelian::free(1),
        Cyclic::Finite(m) => gamma_cyclic(r, m),
    }
}

/// `Γ_n(A)` through `Γ_n(B ⊕ C) = ⊕_{i+j=n} Γ_i(B) ⊗ Γ_j(C)` over the cyclic summands.
pub fn gamma_group(n: usize, a: &FgAbelian) -> FgAbelian {
    // graded pieces Γ_0..Γ_n of the summands processed so far
    let mut pieces: Vec<FgAbelian> = (0..=n)
        .map(|d| if d == 0 { FgAbelian::free(1) } else { FgAbelian::trivial() })
        .collect();
    for &c in &a.summands {
        let mut next = vec![FgAbelian::trivial(); n + 1];
        for (d, slot) in next.iter_mut().enumerate() {
            for i in 0..=d {
                if pieces[i].is_trivial() {
                    continue;
                }
                *slot = slot.direct_sum(&tensor(&pieces[i], &gamma_of_summand(d - i, c)));
            }
        }
        pieces = next;
    }
    pieces.swap_remove(n)
}

/// Degree-indexed list of groups, e.g. `Γ_0(A), …, Γ_n(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedGroupList {
    pub groups: Vec<FgAbelian>,
}

impl GradedGroupList {
    pub fn divided_powers(a: &FgAbelian, max_degree: usize) -> Self {
        GradedGroupList {
            groups: (0..=max_degree).map(|d| gamma_group(d, a)).collect(),
        }
    }

    pub fn degree(&self, d: usize) -> FgAbelian {
        self.groups.get(d).cloned().unwrap_or_default()
    }
}

/// Iterated torsion product with `Tor^[2](A) = Tor(A, A)`.
pub fn tor_power(n: usize, a: &FgAbelian) -> Result<FgAbelian> {
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    let mut acc = tor(a, a);
    for _ in 2..n {
        acc = tor(&acc, a);
    }
    Ok(acc)
}

/// `⊕_{p | n} Γ_{n/p}((Z/p)^r)`.
pub fn expected_h0(n: usize, r: usize) -> FgAbelian {
    assert!(n >= 2, "expected_h0 needs n >= 2");
    prime_divisors(n as u64)
        .into_iter()
        .fold(FgAbelian::trivial(), |acc, p| {
            acc.direct_sum(&gamma_group(n / p as usize, &FgAbelian::elementary(p, r)))
        })
}

fn exterior_mod_p(p: u64, degree: usize, r: usize) -> FgAbelian {
    let dim = if degree <= r {
        binomial(r as u64, degree as u64)
            .expect("degree <= r")
            .try_into()
            .expect("small dimension")
    } else {
        0
    };
    FgAbelian::elementary(p, dim)
}

/// Third Lie functor of `(Z/p)^r`, read off the Koszul model `L_1 SP^3`.
fn lie3_mod_p(p: u64, r: usize) -> FgAbelian {
    let dim = derived_sp(1, 3, p, r).expect("valid degrees").dimension;
    FgAbelian::elementary(p, dim)
}

/// Predicted `H_i C^q(Z^r)` for `2 <= q <= 7`, `0 <= i <= 3`.
pub fn expected_table_entry(q: usize, i: usize, r: usize) -> Result<FgAbelian> {
    if !(2..=7).contains(&q) || i > 3 {
        return Err(Error::OutOfTable { q, i });
    }
    if i == 0 {
        return Ok(expected_h0(q, r));
    }
    Ok(match (q, i) {
        (4, 1) => exterior_mod_p(2, 2, r),
        (6, 1) => exterior_mod_p(3, 2, r).direct_sum(&lie3_mod_p(2, r)),
        (6, 2) => exterior_mod_p(2, 3, r),
        _ => FgAbelian::trivial(),
    })
}
