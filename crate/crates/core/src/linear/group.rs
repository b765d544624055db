use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::IntMatrix;
use super::snf::invariant_factors;
use crate::error::{Error, Result};

/// Isomorphism type of a finitely generated abelian group:
/// `Z^free_rank ⊕ Z/m_1 ⊕ … ⊕ Z/m_k` with `m_1 | m_2 | … | m_k`, every `m_j >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl GroupInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        GroupInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Normalizes an arbitrary list of cyclic orders. Entries equal to 0 count
    /// as free summands, entries equal to ±1 are dropped.
    pub fn new<I>(free_rank: usize, orders: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
    {
        let mut free = free_rank;
        let mut torsion = Vec::new();
        for m in orders {
            let m: BigInt = m.into();
            let m = m.abs();
            if m.is_zero() {
                free += 1;
            } else if !m.is_one() {
                torsion.push(m);
            }
        }
        GroupInvariants {
            free_rank: free,
            torsion: divisor_chain(torsion),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, or `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.iter().fold(BigInt::one(), |acc, m| acc * m))
    }

    /// Largest invariant factor (1 for the trivial group), `None` when infinite.
    pub fn exponent(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.last().cloned().unwrap_or_else(BigInt::one))
    }

    pub fn direct_sum(&self, other: &GroupInvariants) -> GroupInvariants {
        GroupInvariants::new(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
    }

    /// True when some element has order divisible by `m`.
    pub fn has_element_of_order(&self, m: u64) -> bool {
        let m = BigInt::from(m);
        self.free_rank > 0 || self.torsion.iter().any(|t| t.is_multiple_of(&m))
    }
}

/// Pairwise gcd/lcm passes: afterwards entry `i` divides every later entry.
fn divisor_chain(mut list: Vec<BigInt>) -> Vec<BigInt> {
    let n = list.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = list[i].gcd(&list[j]);
            let l = list[i].lcm(&list[j]);
            list[i] = g;
            list[j] = l;
        }
    }
    list.retain(|m| !m.is_one());
    list
}

impl fmt::Display for GroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        // group equal factors: Z/2 ⊕ Z/2 ⊕ Z/4 → (Z/2)^2 ⊕ Z/4
        let mut i = 0;
        while i < self.torsion.len() {
            let m = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && &self.torsion[j] == m {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z/{m}"));
            } else {
                parts.push(format!("(Z/{m})^{}", j - i));
            }
            i = j;
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

#[derive(Serialize, Deserialize)]
struct InvariantsRepr {
    free_rank: usize,
    torsion: Vec<serde_json::Value>,
}

pub(crate) fn big_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

/// `serialize_with` adapter writing a `BigInt` like `big_to_json`.
pub(crate) fn serialize_big<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    big_to_json(x).serialize(s)
}

pub(crate) fn big_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for GroupInvariants {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InvariantsRepr {
            free_rank: self.free_rank,
            torsion: self.torsion.iter().map(big_to_json).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupInvariants {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = InvariantsRepr::deserialize(d)?;
        let torsion = repr
            .torsion
            .iter()
            .map(|v| big_from_json(v).ok_or_else(|| serde::de::Error::custom("bad torsion entry")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(GroupInvariants::new(repr.free_rank, torsion))
    }
}

/// Invariants of `Z^rows / (column span of m)`.
pub fn invariants_of_cokernel(m: &IntMatrix) -> GroupInvariants {
    let factors = invariant_factors(m);
    GroupInvariants::new(m.rows() - factors.len(), factors)
}

/// `Z^gens / (column span of relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedGroup {
    pub gens: usize,
    pub relations: IntMatrix,
}

impl PresentedGroup {
    pub fn new(gens: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != gens {
            return Err(Error::DimensionMismatch(format!(
                "relation matrix has {} rows for {} generators",
                relations.rows(),
                gens
            )));
        }
        Ok(PresentedGroup { gens, relations })
    }

    pub fn free(gens: usize) -> Self {
        PresentedGroup {
            gens,
            relations: IntMatrix::zeros(gens, 0),
        }
    }

    /// `⊕ Z/orders[k]`, one generator per order.
    pub fn cyclic_sum(orders: &[BigInt]) -> Self {
        let n = orders.len();
        PresentedGroup {
            gens: n,
            relations: IntMatrix::diagonal(n, n, orders),
        }
    }

    pub fn invariants(&self) -> GroupInvariants {
        invariants_of_cokernel(&self.relations)
    }

    /// Block-diagonal direct sum of presentations.
    pub fn direct_sum(&self, other: &PresentedGroup) -> PresentedGroup {
        let gens = self.gens + other.gens;
        let cols = self.relations.cols() + other.relations.cols();
        let mut rel = IntMatrix::zeros(gens, cols);
        for i in 0..self.gens {
            for j in 0..self.relations.cols() {
                rel.set(i, j, self.relations.get(i, j).clone());
            }
        }
        for i in 0..other.gens {
            for j in 0..other.relations.cols() {
                rel.set(
                    self.gens + i,
                    self.relations.cols() + j,
                    other.relations.get(i, j).clone(),
                );
            }
        }
        PresentedGroup {
            gens,
            relations: rel,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_to_divisor_chain() {
        let g = GroupInvariants::new(0, [2, 3]);
        assert_eq!(g.torsion, vec![BigInt::from(6)]);
        let g = GroupInvariants::new(1, [4, 2, 1, 0, 6]);
        assert_eq!(g.free_rank, 2);
        assert_eq!(
            g.torsion,
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(12)]
        );
        assert_eq!(g.to_string(), "Z^2 ⊕ (Z/2)^2 ⊕ Z/12");
    }

    #[test]
    fn cokernel_examples() {
        let m = IntMatrix::from_rows(&[vec![5]]);
        assert_eq!(invariants_of_cokernel(&m), GroupInvariants::new(0, [5]));
        assert_eq!(
            invariants_of_cokernel(&IntMatrix::zeros(3, 2)),
            GroupInvariants::free(3)
        );
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(invariants_of_cokernel(&m), GroupInvariants::new(0, [6]));
    }

    #[test]
    fn json_shape() {
        let g = GroupInvariants::new(1, [2, 4]);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"free_rank":1,"torsion":[2,4]}"#);
        let back: GroupInvariants = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn order_and_exponent() {
        let g = GroupInvariants::new(0, [2, 4, 4]);
        assert_eq!(g.order(), Some(BigInt::from(32)));
        assert_eq!(g.exponent(), Some(BigInt::from(4)));
        assert!(g.has_element_of_order(4));
        assert!(!g.has_element_of_order(8));
        assert_eq!(GroupInvariants::free(1).order(), None);
    }
}
