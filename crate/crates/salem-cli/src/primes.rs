//! `salemlab primes`: suggest grid sides near a target that are prime and
//! coprime to 𝔫! (a prime p > 𝔫 always is).

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3usize;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

/// Nearest prime to `near` that exceeds both 𝔫 and 2𝔫 (the side-length
/// constraint N > 2·ell_max), searching outward.
pub fn nearest_admissible_prime(near: usize, ell_max: usize) -> usize {
    let floor = 2 * ell_max + 1;
    let mut offset = 0usize;
    loop {
        for candidate in [near.saturating_sub(offset), near + offset] {
            if candidate > floor && candidate > ell_max && is_prime(candidate) {
                return candidate;
            }
        }
        offset += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(1009));
        assert!(!is_prime(1));
        assert!(!is_prime(1001)); // 7·11·13
    }

    #[test]
    fn nearest_prime_examples() {
        assert_eq!(nearest_admissible_prime(1000, 3), 997);
        assert_eq!(nearest_admissible_prime(1009, 3), 1009);
        // constraint N > 2·ell_max kicks in for tiny targets
        assert_eq!(nearest_admissible_prime(2, 3), 11);
    }
}
