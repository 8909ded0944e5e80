//! Exact binomial arithmetic and the coefficient vector `u_1..u_{p+1}` that
//! appears when the image of the last defining relation under σ is expanded.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("p must be an odd prime, got {0}")]
    NotOddPrime(u64),
    #[error("u_{index} mismatch for p={p}: table sum {table}, closed form {closed}")]
    Mismatch {
        p: u64,
        index: usize,
        table: BigInt,
        closed: BigInt,
    },
}

/// Deterministic trial division; inputs here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn is_odd_prime(n: u64) -> bool {
    n != 2 && is_prime(n)
}

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binom(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    // acc stays integral: after step i it equals C(n - k + i, i).
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// Which of the four classical identities a violation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinomialIdentity {
    /// `C(n, m) = C(n, n - m)`
    Symmetry,
    /// `C(n + 2, m + 1) = C(n + 1, m + 1) + C(n + 1, m)`
    Pascal,
    /// `C(n, m) C(m, k) = C(n, k) C(n - k, m - k)`
    SubsetOfSubset,
    /// `sum_{k=0}^{m} (-1)^k C(n, k) = (-1)^m C(n - 1, m)`
    AlternatingSum,
    /// `C(n, m) = 0` for `m < 0`
    NegativeLower,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityViolation {
    pub identity: BinomialIdentity,
    pub n: u64,
    pub m: i64,
    pub k: i64,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

/// Exhaustively checks the identities for `0 <= k <= m <= n <= n_max`.
/// An empty result means every instance held.
pub fn check_binomial_identities(n_max: u64) -> Vec<IdentityViolation> {
    let mut out = Vec::new();
    let mut record = |identity, n, m, k, lhs: BigInt, rhs: BigInt| {
        if lhs != rhs {
            out.push(IdentityViolation {
                identity,
                n,
                m,
                k,
                lhs,
                rhs,
            });
        }
    };

    for n in 0..=n_max {
        for m in 0..=n as i64 {
            let c = binom(n, m);
            record(
                BinomialIdentity::Symmetry,
                n,
                m,
                0,
                c.clone(),
                binom(n, n as i64 - m),
            );
            record(
                BinomialIdentity::Pascal,
                n,
                m,
                0,
                binom(n + 2, m + 1),
                binom(n + 1, m + 1) + binom(n + 1, m),
            );
            for k in 0..=m {
                record(
                    BinomialIdentity::SubsetOfSubset,
                    n,
                    m,
                    k,
                    &c * binom(m as u64, k),
                    binom(n, k) * binom(n - k as u64, m - k),
                );
            }
            // n - 1 must stay a valid upper index.
            if n >= 1 {
                let lhs: BigInt = (0..=m)
                    .map(|k| {
                        let t = binom(n, k);
                        if k % 2 == 0 {
                            t
                        } else {
                            -t
                        }
                    })
                    .sum();
                let tail = binom(n - 1, m);
                let rhs = if m % 2 == 0 { tail } else { -tail };
                record(BinomialIdentity::AlternatingSum, n, m, 0, lhs, rhs);
            }
        }
        for m in -3..0 {
            record(
                BinomialIdentity::NegativeLower,
                n,
                m,
                0,
                binom(n, m),
                BigInt::zero(),
            );
        }
    }
    out
}

/// The vector `u_1..u_{p+1}` for an odd prime `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UCoefficients {
    p: u64,
    u: Vec<BigInt>,
}

impl UCoefficients {
    /// Wraps an arbitrary vector (length `p + 1`). Used to feed deliberately
    /// wrong coefficients into the group-level checks.
    pub fn from_values(p: u64, u: Vec<BigInt>) -> Self {
        assert_eq!(u.len() as u64, p + 1, "need p + 1 coefficients");
        UCoefficients { p, u }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `u_i` with 1-based index `i` in `1..=p+1`.
    pub fn get(&self, i: usize) -> &BigInt {
        &self.u[i - 1]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.u
    }

    pub fn with_value(mut self, i: usize, value: BigInt) -> Self {
        self.u[i - 1] = value;
        self
    }
}

/// Row sums of the expansion table.
///
/// Column `j` holds the exponents of `(s_j^σ)^{-C(p,j)}` written over
/// `s_1..s_{p+1}`. Column 1 is `s_1^{-p}` on its own because σ fixes `s_1`;
/// for `2 <= j <= p-1` the column entry in row `i` is
/// `(-1)^j C(p+1-j, i-j) C(p, j)`.
pub fn u_table_sum(p: u64) -> Vec<BigInt> {
    let mut u = vec![BigInt::zero(); p as usize + 1];
    u[0] = -binom(p, 1);
    for i in 2..=p + 1 {
        let mut acc = BigInt::zero();
        for j in 2..=i.min(p - 1) {
            let term = binom(p + 1 - j, (i - j) as i64) * binom(p, j as i64);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        u[i as usize - 1] = acc;
    }
    u
}

/// `u_1 = -p`, `u_i = -C(p,i) + (p-1) C(p,i-1)` for `2 <= i <= p-1`,
/// `u_p = (p-1) C(p,p-1)`, `u_{p+1} = p`.
pub fn u_closed_form(p: u64) -> Vec<BigInt> {
    let pm1 = BigInt::from(p - 1);
    let mut u = Vec::with_capacity(p as usize + 1);
    u.push(-binom(p, 1));
    for i in 2..p {
        u.push(-binom(p, i as i64) + &pm1 * binom(p, i as i64 - 1));
    }
    u.push(&pm1 * binom(p, p as i64 - 1));
    u.push(BigInt::from(p));
    u
}

/// Computes the coefficients by the table summation and by the closed form,
/// and returns them only when both agree.
pub fn u_coefficients(p: u64) -> Result<UCoefficients, ArithError> {
    if !is_odd_prime(p) {
        return Err(ArithError::NotOddPrime(p));
    }
    let table = u_table_sum(p);
    let closed = u_closed_form(p);
    for (idx, (t, c)) in table.iter().zip(&closed).enumerate() {
        if t != c {
            return Err(ArithError::Mismatch {
                p,
                index: idx + 1,
                table: t.clone(),
                closed: c.clone(),
            });
        }
    }
    Ok(UCoefficients { p, u: table })
}

/// Non-negative residue of `x` modulo `m` (`m > 0`).
pub(crate) fn residue(x: &BigInt, m: &num_bigint::BigUint) -> num_bigint::BigUint {
    let m = BigInt::from(m.clone());
    let r = x % &m;
    let r = if r.is_negative() { r + m } else { r };
    r.to_biguint().expect("residue is non-negative")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal_row(n: usize) -> Vec<u128> {
        let mut row = vec![1u128];
        for _ in 0..n {
            let mut next = vec![1u128; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        row
    }

    #[test]
    fn binom_small_values() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(7, -1), BigInt::zero());
        assert_eq!(binom(7, 8), BigInt::zero());
        assert_eq!(binom(0, 0), BigInt::one());
    }

    #[test]
    fn binom_matches_pascal_triangle() {
        for n in 0..=40usize {
            let row = pascal_row(n);
            for (k, v) in row.iter().enumerate() {
                assert_eq!(binom(n as u64, k as i64), BigInt::from(*v), "C({n},{k})");
            }
        }
        // frozen from the Pascal oracle above
        assert_eq!(binom(30, 15), BigInt::from(155_117_520u64));
    }

    #[test]
    fn binom_is_exact_beyond_u64() {
        let row = pascal_row(120);
        assert_eq!(binom(120, 60), BigInt::from(row[60]));
    }

    #[test]
    fn identities_hold_to_thirty() {
        assert!(check_binomial_identities(30).is_empty());
    }

    #[test]
    fn identity_instances() {
        assert_eq!(binom(5, 2), binom(4, 2) + binom(4, 1));
        assert_eq!(binom(5, 2), BigInt::from(10));
        // 1 - 5 + 10 = 6 = C(4, 2)
        let lhs = binom(5, 0) - binom(5, 1) + binom(5, 2);
        assert_eq!(lhs, BigInt::from(6));
        assert_eq!(lhs, binom(4, 2));
    }

    #[test]
    fn middle_binomials_divisible_by_p() {
        for p in [3u64, 5, 7, 11, 13, 17] {
            for i in 1..p {
                assert!((binom(p, i as i64) % BigInt::from(p)).is_zero());
            }
        }
    }

    #[test]
    fn u_coefficients_known_values() {
        // Independently tabulated by expanding each column of the table.
        let expect: &[(u64, &[i64])] = &[
            (3, &[-3, 3, 6, 3]),
            (5, &[-5, 10, 30, 35, 20, 5]),
            (7, &[-7, 21, 91, 175, 189, 119, 42, 7]),
        ];
        for (p, vals) in expect {
            let u = u_coefficients(*p).unwrap();
            let want: Vec<BigInt> = vals.iter().map(|&v| BigInt::from(v)).collect();
            assert_eq!(u.values(), &want[..], "p={p}");
            assert_eq!(u.get(1), &BigInt::from(-(*p as i64)));
            assert_eq!(u.get(*p as usize + 1), &BigInt::from(*p));
        }
    }

    #[test]
    fn u_table_agrees_with_closed_form() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            assert_eq!(u_table_sum(p), u_closed_form(p), "p={p}");
        }
    }

    #[test]
    fn u_coefficients_rejects_non_odd_primes() {
        assert_eq!(u_coefficients(2), Err(ArithError::NotOddPrime(2)));
        assert_eq!(u_coefficients(9), Err(ArithError::NotOddPrime(9)));
        assert_eq!(u_coefficients(1), Err(ArithError::NotOddPrime(1)));
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
        );
        assert!(!is_odd_prime(2));
    }

    #[test]
    fn residue_of_negative() {
        let m = num_bigint::BigUint::from(9u32);
        assert_eq!(
            residue(&BigInt::from(-3), &m),
            num_bigint::BigUint::from(6u32)
        );
        assert_eq!(
            residue(&BigInt::from(-18), &m),
            num_bigint::BigUint::from(0u32)
        );
    }
}
