//! Square-free splitting of positive integers.
//!
//! Trial division runs over a sieved prime table up to 10⁶; whatever cofactor
//! survives is split with Brent's variant of Pollard's rho. Only the parity of
//! each prime exponent matters for the split, so no full factorization is kept.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rug::integer::IsPrime;
use rug::ops::Pow;
use rug::Integer;

const SIEVE_LIMIT: u32 = 1_000_000;
const PRIME_CHECK_INTERVAL: usize = 2048;

fn primes() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let limit = SIEVE_LIMIT as usize;
        let mut composite = vec![false; limit + 1];
        let mut out = Vec::with_capacity(78_498);
        for p in 2..=limit {
            if composite[p] {
                continue;
            }
            out.push(p as u32);
            let mut q = p * p;
            while q <= limit {
                composite[q] = true;
                q += p;
            }
        }
        out
    })
}

/// Splits `n > 0` as `n = square² · kernel` with `kernel` square-free.
pub(crate) fn squarefree_split(n: &Integer) -> (Integer, Integer) {
    debug_assert!(*n > 0);
    let mut rem = n.clone();
    let mut square = Integer::from(1);
    let mut kernel = Integer::from(1);

    for (idx, &p) in primes().iter().enumerate() {
        if rem == 1 {
            break;
        }
        if let Some(r) = rem.to_u64() {
            if u64::from(p) * u64::from(p) > r {
                break;
            }
        }
        if rem.is_divisible_u(p) {
            let mut exp = 0u32;
            while rem.is_divisible_u(p) {
                rem.div_exact_u_mut(p);
                exp += 1;
            }
            square *= Integer::from(p).pow(exp / 2);
            if exp % 2 == 1 {
                kernel *= p;
            }
        }
        if idx % PRIME_CHECK_INTERVAL == PRIME_CHECK_INTERVAL - 1
            && rem.is_probably_prime(30) != IsPrime::No
        {
            break;
        }
    }

    if rem > 1 {
        let mut large = BTreeMap::new();
        factor_large(rem, &mut large);
        for (p, exp) in large {
            if exp % 2 == 1 {
                kernel *= &p;
            }
            square *= p.pow(exp / 2);
        }
    }
    (square, kernel)
}

fn factor_large(n: Integer, out: &mut BTreeMap<Integer, u32>) {
    if n == 1 {
        return;
    }
    if n.is_probably_prime(30) != IsPrime::No {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    if n.is_perfect_square() {
        let root = n.sqrt();
        let mut inner = BTreeMap::new();
        factor_large(root, &mut inner);
        for (p, e) in inner {
            *out.entry(p).or_insert(0) += 2 * e;
        }
        return;
    }
    let d = pollard_brent(&n);
    let rest = Integer::from(&n / &d);
    factor_large(d, out);
    factor_large(rest, out);
}

/// Returns a nontrivial divisor of the composite `n`.
fn pollard_brent(n: &Integer) -> Integer {
    if n.is_even() {
        return Integer::from(2);
    }
    let mut c = Integer::from(1);
    loop {
        let f = |x: &Integer| -> Integer { (Integer::from(x * x) + &c) % n };
        let mut y = Integer::from(2);
        let mut r: u64 = 1;
        let mut q = Integer::from(1);
        let mut g = Integer::from(1);
        let mut x = Integer::new();
        let mut ys = Integer::new();
        let m = 128u64;
        while g == 1 {
            x.clone_from(&y);
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys.clone_from(&y);
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * Integer::from(&x - &y).abs()) % n;
                }
                g = q.clone().gcd(n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = Integer::from(&x - &ys).abs().gcd(n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(n: u64) -> (u64, u64) {
        let (s, k) = squarefree_split(&Integer::from(n));
        (s.to_u64().unwrap(), k.to_u64().unwrap())
    }

    #[test]
    fn small_values() {
        assert_eq!(split(1), (1, 1));
        assert_eq!(split(8), (2, 2));
        assert_eq!(split(30), (1, 30));
        assert_eq!(split(72), (6, 2));
        assert_eq!(split(49), (7, 1));
    }

    #[test]
    fn large_prime_cofactors() {
        // 1000003 and 1000033 are both above the sieve limit.
        let p = Integer::from(1_000_003u64);
        let q = Integer::from(1_000_033u64);
        let n = Integer::from(&p * &p) * &q * 12u32;
        let (s, k) = squarefree_split(&n);
        assert_eq!(s, Integer::from(&p * 2u32));
        assert_eq!(k, Integer::from(&q * 3u32));
    }

    #[test]
    fn composite_cofactor_needs_rho() {
        let p = Integer::from(2_147_483_647u64); // 2^31 - 1
        let q = Integer::from(1_000_000_007u64);
        let n = Integer::from(&p * &q) * &q;
        let (s, k) = squarefree_split(&n);
        assert_eq!(s, q);
        assert_eq!(k, p);
    }

    #[test]
    fn brute_force_agreement() {
        for n in 1u64..3000 {
            let (s, k) = split(n);
            assert_eq!(s * s * k, n);
            // brute-force: k has no square divisor
            for d in 2..=k {
                if d * d > k {
                    break;
                }
                assert_ne!(k % (d * d), 0, "kernel {k} of {n} not square-free");
            }
        }
    }
}
