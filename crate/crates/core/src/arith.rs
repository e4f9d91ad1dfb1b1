//! Integer helpers: trial-division factorization and divisor lists.

/// Prime factorization `n = p_1^a_1 ... p_m^a_m`, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut exp = 0;
            while n.is_multiple_of(p) {
                n /= p;
                exp += 1;
            }
            factors.push((p, exp));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// All divisors of `n >= 1`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, a) in factorize(n) {
        let len = divs.len();
        let mut power = 1;
        for _ in 0..a {
            power *= p;
            for k in 0..len {
                divs.push(divs[k] * power);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// `n = 2^k` for some `k >= 1`, returning `k`.
pub fn power_of_two_exponent(n: u64) -> Option<u32> {
    (n >= 2 && n.is_power_of_two()).then(|| n.trailing_zeros())
}

pub fn factorial(k: u64) -> num_bigint::BigUint {
    (1..=k).fold(num_bigint::BigUint::from(1u32), |acc, i| acc * i)
}
