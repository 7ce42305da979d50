//! Small integer helpers shared by the parameter layers.

pub use num_integer::Integer;

pub fn gcd(a: usize, b: usize) -> usize {
    a.gcd(&b)
}

pub fn gcd3(a: usize, b: usize, c: usize) -> usize {
    gcd(gcd(a, b), c)
}

/// Least non-negative residue of `a` modulo `m`.
pub fn modulo(a: i64, m: usize) -> usize {
    a.rem_euclid(m as i64) as usize
}

/// Inverse of `a` modulo `m` via extended Euclid, if `gcd(a,m) = 1`.
/// Modulo 1 every residue is 0 and 0 is its own inverse.
pub fn mod_inverse(a: usize, m: usize) -> Option<usize> {
    if m == 1 {
        return Some(0);
    }
    let eg = (a as i64).extended_gcd(&(m as i64));
    (eg.gcd == 1).then(|| modulo(eg.x, m))
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(mod_inverse(5, 1), Some(0));
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(modulo(-3, 5), 2);
    }
}
