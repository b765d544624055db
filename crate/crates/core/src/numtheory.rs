//! p-adic valuations, stabilized gcds and binomial congruences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `v_p(x)` of a nonzero integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PAdicData {
    pub p: u64,
    pub value: u32,
}

pub fn padic_valuation(x: &BigInt, p: u64) -> Result<PAdicData> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if x.is_zero() {
        return Err(Error::OutOfRange("valuation of zero".into()));
    }
    let p_big = BigInt::from(p);
    let mut x = x.clone();
    let mut value = 0;
    loop {
        let (q, r) = x.div_rem(&p_big);
        if !r.is_zero() {
            break;
        }
        x = q;
        value += 1;
    }
    Ok(PAdicData { p, value })
}

/// `lim_m gcd(r, n^m)`: the largest divisor of `r` supported on primes dividing `n`.
pub fn gcd_stable(r: u64, n: u64) -> u64 {
    assert!(r >= 1 && n >= 1, "gcd_stable needs positive arguments");
    // gcd(r, n^m) = gcd(r, gcd(r, n^(m-1)) * n), iterate until fixed
    let mut g = 1u64;
    loop {
        let next = gcd_with_product(r, g, n);
        if next == g {
            return g;
        }
        g = next;
    }
}

/// gcd(r, g*n) without overflow.
fn gcd_with_product(r: u64, g: u64, n: u64) -> u64 {
    let prod = (g as u128) * (n as u128);
    (r as u128).gcd(&prod) as u64
}

pub fn binomial(n: u64, k: u64) -> Result<BigInt> {
    if k > n {
        return Err(Error::OutOfRange(format!("binomial({n}, {k})")));
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialLemmaReport {
    pub p: u64,
    pub n: u64,
    pub k: u64,
    /// `C(pn, pk)`
    pub lhs: String,
    /// `C(n, k)`
    pub rhs: String,
    /// `p^r` with `r = v_p(p n k (n-k))`
    pub modulus: String,
    pub holds: bool,
}

/// Checks `C(pn, pk) ≡ C(n, k) mod p^r`, `r = v_p(p·n·k·(n−k))`.
pub fn check_binomial_lemma(p: u64, n: u64, k: u64) -> Result<BinomialLemmaReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 || k >= n {
        return Err(Error::OutOfRange(format!("need 0 < k < n, got n = {n}, k = {k}")));
    }
    let product = BigInt::from(p) * BigInt::from(n) * BigInt::from(k) * BigInt::from(n - k);
    let r = padic_valuation(&product, p)?.value;
    let modulus: BigInt = Pow::pow(BigInt::from(p), r);
    let lhs = binomial(p * n, p * k)?;
    let rhs = binomial(n, k)?;
    let holds = (&lhs - &rhs).is_multiple_of(&modulus);
    Ok(BinomialLemmaReport {
        p,
        n,
        k,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        modulus: modulus.to_string(),
        holds,
    })
}

/// `n / gcd(n, k)` divides `C(n, k)`.
pub fn check_central_divisibility(n: u64, k: u64) -> Result<bool> {
    if k == 0 || k > n {
        return Err(Error::OutOfRange(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let d = BigInt::from(n / n.gcd(&k));
    Ok(binomial(n, k)?.is_multiple_of(&d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaSweep {
    pub p: u64,
    pub max_n: u64,
    pub checked: u64,
    pub failed: u64,
    pub first_counterexample: Option<BinomialLemmaReport>,
}

/// All `1 <= k < n <= max_n` for one prime.
pub fn sweep_binomial_lemma(p: u64, max_n: u64) -> Result<LemmaSweep> {
    let mut sweep = LemmaSweep {
        p,
        max_n,
        checked: 0,
        failed: 0,
        first_counterexample: None,
    };
    for n in 2..=max_n {
        for k in 1..n {
            let report = check_binomial_lemma(p, n, k)?;
            sweep.checked += 1;
            if !report.holds {
                sweep.failed += 1;
                sweep.first_counterexample.get_or_insert(report);
            }
        }
    }
    Ok(sweep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_gcd_examples() {
        assert_eq!(gcd_stable(3, 2), 1);
        assert_eq!(gcd_stable(2, 2), 2);
        assert_eq!(gcd_stable(4, 6), 4);
        assert_eq!(gcd_stable(12, 2), 4);
        assert_eq!(gcd_stable(1, 1), 1);
    }

    #[test]
    fn stable_gcd_properties() {
        for r in 1..200u64 {
            for n in 1..40u64 {
                let g = gcd_stable(r, n);
                assert_eq!(r % g, 0);
                assert_eq!(gcd_stable(g, n), g);
                // brute force limit over m <= log2(r) + 1
                let mut power = 1u128;
                let mut brute = 1u128;
                for _ in 0..=(64 - r.leading_zeros()) {
                    power = power * n as u128 % r as u128;
                    brute = (r as u128).gcd(&power).max(brute);
                }
                assert_eq!(g as u128, brute, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(9, 0).unwrap(), BigInt::from(1));
        assert_eq!(binomial(6, 2).unwrap(), BigInt::from(15));
        assert_eq!(binomial(7, 3).unwrap(), BigInt::from(35));
        assert_eq!(binomial(7, 4).unwrap(), BigInt::from(35));
        assert!(binomial(3, 4).is_err());
    }

    #[test]
    fn lemma_examples() {
        let r = check_binomial_lemma(2, 3, 1).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs.as_str(), r.modulus.as_str()), ("15", "3", "4"));
        assert!(r.holds);
        let r = check_binomial_lemma(3, 2, 1).unwrap();
        assert_eq!((r.lhs.as_str(), r.modulus.as_str()), ("20", "3"));
        assert!(r.holds);
        let r = check_binomial_lemma(2, 2, 1).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs.as_str(), r.modulus.as_str()), ("6", "2", "4"));
        assert!(r.holds);
        assert!(check_binomial_lemma(4, 3, 1).is_err());
        assert!(check_binomial_lemma(2, 3, 3).is_err());
    }

    #[test]
    fn central_divisibility_examples() {
        assert!(check_central_divisibility(5, 5).unwrap());
        assert!(check_central_divisibility(6, 2).unwrap());
        assert!(check_central_divisibility(8, 6).unwrap());
        assert!(check_central_divisibility(3, 0).is_err());
    }

    #[test]
    fn sweep_count() {
        let s = sweep_binomial_lemma(2, 40).unwrap();
        assert_eq!(s.checked, 780);
        assert_eq!(s.failed, 0);
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_valuation(&BigInt::from(48), 2).unwrap().value, 4);
        assert_eq!(padic_valuation(&BigInt::from(-45), 3).unwrap().value, 2);
        assert!(padic_valuation(&BigInt::from(0), 3).is_err());
        assert_eq!(prime_divisors(12), vec![2, 3]);
        assert_eq!(prime_divisors(7), vec![7]);
        assert!(prime_divisors(1).is_empty());
    }
}
