//! Exact Chebyshev coefficients and the V. A. Markov coefficient bounds.
//!
//! `T_{p+1} = 2x T_p - T_{p-1}` is run in `i128`, which holds every coefficient
//! up to degree [`MAX_EXACT_DEGREE`]. Derivative values at zero and the integer
//! forms of the case identities are checked in arbitrary precision.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest degree handled in exact arithmetic.
pub const MAX_EXACT_DEGREE: u32 = 60;

fn check_degree(n: u32) -> Result<()> {
    if n > MAX_EXACT_DEGREE {
        Err(Error::InvalidInput(format!(
            "exact Chebyshev arithmetic supports n <= {MAX_EXACT_DEGREE}, got {n}"
        )))
    } else {
        Ok(())
    }
}

fn check_order(n: u32, k: u32) -> Result<()> {
    if k > n {
        Err(Error::InvalidInput(format!("derivative order k = {k} exceeds n = {n}")))
    } else {
        Ok(())
    }
}

/// Coefficients of `T_n` in ascending powers of `x`.
pub fn chebyshev_coefficients(n: u32) -> Result<Vec<i128>> {
    check_degree(n)?;
    let mut prev = vec![1i128];
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = vec![0i128, 1];
    for _ in 1..n {
        let mut next = vec![0i128; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn factorial(k: u32) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i)) / factorial(k)
}

fn coefficient_magnitude(n: u32, k: u32) -> Result<BigUint> {
    let c = chebyshev_coefficients(n)?;
    Ok(BigUint::from(c[k as usize].unsigned_abs()))
}

/// `|T_n^{(k)}(0)| = k!·|coefficient of x^k in T_n|`; zero when `n - k` is odd.
pub fn chebyshev_derivative_at_zero(n: u32, k: u32) -> Result<BigUint> {
    check_order(n, k)?;
    Ok(factorial(k) * coefficient_magnitude(n, k)?)
}

/// `|T_{n'}^{(k)}(0)| / k!` where `n' = n` for even `n - k` and `n' = n - 1` otherwise.
fn sharp_coefficient(n: u32, k: u32) -> Result<BigUint> {
    check_order(n, k)?;
    check_degree(n)?;
    if (n - k).is_multiple_of(2) {
        coefficient_magnitude(n, k)
    } else {
        coefficient_magnitude(n - 1, k)
    }
}

/// Sharp bound on the `k`-th coefficient of a degree-`n` polynomial with sup norm `M` on `[-a, a]`.
pub fn vam_coefficient_bound(n: u32, k: u32, a: f64, sup: f64) -> Result<f64> {
    check_bound_args(a, sup)?;
    let c = sharp_coefficient(n, k)?.to_f64().unwrap_or(f64::INFINITY);
    Ok(sup * c / a.powi(k as i32))
}

/// Relaxed bound `M n^k / (k! a^k)`.
pub fn relaxed_coefficient_bound(n: u32, k: u32, a: f64, sup: f64) -> Result<f64> {
    check_order(n, k)?;
    check_bound_args(a, sup)?;
    let ratio: f64 = (1..=k).map(|i| f64::from(n) / f64::from(i)).product();
    Ok(sup * ratio / a.powi(k as i32))
}

fn check_bound_args(a: f64, sup: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidInput(format!("interval half-length must be positive, got {a}")));
    }
    if !(sup.is_finite() && sup >= 0.0) {
        return Err(Error::InvalidInput(format!("sup norm must be nonnegative, got {sup}")));
    }
    Ok(())
}

/// Exact check `k!·sharp ≤ n^k`, i.e. the relaxed bound dominates the sharp one.
pub fn relaxed_dominates_sharp(n: u32, k: u32) -> Result<bool> {
    let lhs = factorial(k) * sharp_coefficient(n, k)?;
    Ok(lhs <= BigUint::from(n).pow(k))
}

/// Checks, in exact integers, the closed forms and chain of inequalities that
/// reduce the sharp coefficient bound to the relaxed one. Three cases:
/// even `k = 2p`; odd `k = 2p+1` with odd `n = 2N+1`; odd `k` with even `n = 2N`.
pub fn coefficient_case_identities(n: u32, k: u32) -> Result<bool> {
    check_order(n, k)?;
    check_degree(n)?;
    let sharp = sharp_coefficient(n, k)?;
    let two_pow = |e: u32| BigUint::one() << e as usize;
    let nn = BigUint::from(n);
    if k.is_multiple_of(2) {
        let p = k / 2;
        let big_n = n / 2;
        if big_n == 0 {
            return Ok(sharp == BigUint::one());
        }
        // (N+p)|d| = 2^{2p} N C(N+p, 2p)
        let closed = (sharp.clone() * (big_n + p)) == two_pow(2 * p) * big_n * binomial(big_n + p, 2 * p);
        let product = if p == 0 {
            sharp == BigUint::one()
        } else {
            let prod = (0..p).fold(BigUint::one(), |acc, l| acc * (big_n * big_n - l * l));
            factorial(2 * p) * &sharp == two_pow(2 * p) * prod
        };
        let ineq = factorial(2 * p) * &sharp <= BigUint::from(2 * big_n).pow(2 * p)
            && BigUint::from(2 * big_n).pow(2 * p) <= nn.pow(2 * p);
        Ok(closed && product && ineq)
    } else {
        let p = (k - 1) / 2;
        // Case 3 replaces N by N - 1, i.e. uses T_{n-1} with n - 1 odd.
        let odd = if n % 2 == 1 { n } else { n - 1 };
        let big_n = (odd - 1) / 2;
        if p > big_n {
            return Ok(false);
        }
        let closed = sharp.clone() * (2 * p + 1) == two_pow(2 * p) * odd * binomial(big_n + p, 2 * p);
        let prod = (1..=p).fold(BigUint::one(), |acc, l| acc * (big_n * big_n - l * l + big_n + l));
        let product = factorial(2 * p + 1) * &sharp == two_pow(2 * p) * odd * prod;
        let ineq = factorial(2 * p + 1) * &sharp <= BigUint::from(odd).pow(2 * p + 1)
            && BigUint::from(odd).pow(2 * p + 1) <= nn.pow(2 * p + 1);
        Ok(closed && product && ineq)
    }
}

/// Values `T_0(x), …, T_n(x)` by the three-term recurrence.
pub fn chebyshev_values(x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for k in 2..=n {
        let next = 2.0 * x * out[k - 1] - out[k - 2];
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_coefficients() {
        assert_eq!(chebyshev_coefficients(0).unwrap(), vec![1]);
        assert_eq!(chebyshev_coefficients(2).unwrap(), vec![-1, 0, 2]);
        assert_eq!(chebyshev_coefficients(3).unwrap(), vec![0, -3, 0, 4]);
        assert_eq!(chebyshev_coefficients(4).unwrap(), vec![1, 0, -8, 0, 8]);
        assert!(chebyshev_coefficients(61).is_err());
    }

    #[test]
    fn derivative_at_zero_examples() {
        assert_eq!(chebyshev_derivative_at_zero(2, 2).unwrap(), BigUint::from(4u32));
        assert_eq!(chebyshev_derivative_at_zero(3, 1).unwrap(), BigUint::from(3u32));
        assert_eq!(chebyshev_derivative_at_zero(4, 1).unwrap(), BigUint::zero());
        assert!(chebyshev_derivative_at_zero(2, 3).is_err());
    }

    #[test]
    fn coefficient_bound_examples() {
        assert_eq!(vam_coefficient_bound(2, 2, 1.0, 1.0).unwrap(), 2.0);
        assert_eq!(vam_coefficient_bound(3, 1, 1.0, 1.0).unwrap(), 3.0);
        for n in (0..=20).step_by(2) {
            assert_eq!(vam_coefficient_bound(n, 0, 1.0, 1.0).unwrap(), 1.0);
        }
        assert!(vam_coefficient_bound(3, 1, 0.0, 1.0).is_err());
        assert!((relaxed_coefficient_bound(3, 2, 1.0, 1.0).unwrap() - 4.5).abs() < 1e-15);
    }

    #[test]
    fn relaxed_dominates_sharp_up_to_sixty() {
        for n in 0..=MAX_EXACT_DEGREE {
            for k in 0..=n {
                assert!(relaxed_dominates_sharp(n, k).unwrap(), "n = {n}, k = {k}");
                assert!(coefficient_case_identities(n, k).unwrap(), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn recurrence_values_match_trig_form() {
        for &x in &[-0.9, -0.3, 0.0, 0.5, 0.99] {
            let vals = chebyshev_values(x, 30);
            for (k, v) in vals.iter().enumerate() {
                let exact = (k as f64 * f64::acos(x)).cos();
                assert!((v - exact).abs() < 1e-12);
            }
        }
    }
}
