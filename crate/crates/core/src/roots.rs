//! Rational root finding for rational polynomials: clear denominators, apply
//! the rational root theorem on the primitive integer polynomial, deflate
//! found roots to full multiplicity. Divisor enumeration factors the edge
//! coefficients by trial division with a Brent-rho fallback.

use crate::funcring::poly::{self, Rat};
use num::bigint::Sign;
use num::{BigInt, Integer, One, Signed, Zero};

/// All rational roots with multiplicities, sorted ascending, plus the degree
/// of the root-free remainder (nonzero iff irrational or complex roots exist).
pub fn rational_roots(p: &[Rat]) -> (Vec<(Rat, usize)>, usize) {
    let mut p = p.to_vec();
    poly::trim(&mut p);
    if p.len() <= 1 {
        return (Vec::new(), 0);
    }

    let mut roots: Vec<(Rat, usize)> = Vec::new();

    // factor out x^k
    let zeros = p.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.push((Rat::zero(), zeros));
        p.drain(..zeros);
    }
    if p.len() <= 1 {
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        return (roots, 0);
    }

    // clear denominators to a primitive integer polynomial
    let mut denom_lcm = BigInt::one();
    for c in &p {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rat::from_integer(denom_lcm.clone())).to_integer()).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    let ints: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();

    let lead = ints.last().unwrap().abs();
    let constant = ints.first().unwrap().abs();
    let ps = divisors(&constant);
    let qs = divisors(&lead);

    let mut candidates: Vec<Rat> = Vec::new();
    for num in &ps {
        for den in &qs {
            let r = Rat::new(num.clone(), den.clone());
            if !candidates.contains(&r) {
                candidates.push(r);
            }
        }
    }
    let mut signed: Vec<Rat> = Vec::with_capacity(candidates.len() * 2);
    for c in candidates {
        signed.push(-c.clone());
        signed.push(c);
    }
    signed.sort();
    signed.dedup();

    for cand in signed {
        if p.len() <= 1 {
            break;
        }
        if !poly::eval(&p, &cand).is_zero() {
            continue;
        }
        let mut mult = 0;
        while let Some(q) = poly::deflate_root(&p, &cand) {
            p = q;
            mult += 1;
            if p.len() <= 1 {
                break;
            }
        }
        roots.push((cand, mult));
    }

    roots.sort_by(|a, b| a.0.cmp(&b.0));
    let residual = p.len().saturating_sub(1);
    (roots, residual)
}

/// Positive divisors of `|n|` (with `divisors(0) = [1]` so a zero edge
/// coefficient cannot arise here: it is stripped by the caller).
fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let factors = factorize(&n.abs());
    let mut out = vec![BigInt::one()];
    for (prime, exp) in factors {
        let mut next = Vec::with_capacity(out.len() * (exp + 1));
        for d in &out {
            let mut power = BigInt::one();
            for _ in 0..=exp {
                next.push(d * &power);
                power *= &prime;
            }
        }
        out = next;
    }
    out.sort();
    out
}

fn factorize(n: &BigInt) -> Vec<(BigInt, usize)> {
    let mut n = n.clone();
    let mut out: Vec<(BigInt, usize)> = Vec::new();
    let push = |p: BigInt, out: &mut Vec<(BigInt, usize)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    let small_limit = BigInt::from(1_000_000u64);
    let mut d = BigInt::from(2u8);
    while &d * &d <= n && d <= small_limit {
        while (&n % &d).is_zero() {
            n /= &d;
            push(d.clone(), &mut out);
        }
        d += 1u8;
    }
    // anything left is prime or needs rho
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            push(m, &mut out);
            continue;
        }
        let f = brent_rho(&m);
        stack.push(m / &f);
        stack.push(f);
    }
    out.sort();
    out
}

fn mod_pow(base: &BigInt, exp: &BigInt, modulus: &BigInt) -> BigInt {
    base.modpow(exp, modulus)
}

/// Deterministic Miller–Rabin for the sizes reachable here.
fn is_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2u8);
    if n < &two {
        return false;
    }
    for p in [2u8, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - BigInt::one();
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d /= 2u8;
        s += 1;
    }
    'witness: for a in [2u8, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(&BigInt::from(a), &d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; `n` must be composite and odd-ish.
fn brent_rho(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2u8);
    }
    for c in 1u64.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut x = BigInt::from(2u8);
        let mut y = BigInt::from(2u8);
        let mut d = BigInt::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x >= y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break; // cycle without factor; retry with another c
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && &d != n && d.sign() == Sign::Plus {
            return d;
        }
    }
    unreachable!("composite input always yields a factor")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn roots_with_multiplicity() {
        // -a(a-1)^2 has roots 0 (x1) and 1 (x2)
        let p = poly::mul(
            &[rat(0, 1), rat(-1, 1)],
            &poly::mul(&[rat(-1, 1), rat(1, 1)], &[rat(-1, 1), rat(1, 1)]),
        );
        let (roots, residual) = rational_roots(&p);
        assert_eq!(residual, 0);
        assert_eq!(roots, vec![(rat(0, 1), 1), (rat(1, 1), 2)]);
    }

    #[test]
    fn fractional_root() {
        // (2x - 1)(x + 3)
        let p = poly::mul(&[rat(-1, 1), rat(2, 1)], &[rat(3, 1), rat(1, 1)]);
        let (roots, residual) = rational_roots(&p);
        assert_eq!(residual, 0);
        assert_eq!(roots, vec![(rat(-3, 1), 1), (rat(1, 2), 1)]);
    }

    #[test]
    fn irrational_residual() {
        // (x^2 - 2)(x - 1)
        let p = poly::mul(&[rat(-2, 1), rat(0, 1), rat(1, 1)], &[rat(-1, 1), rat(1, 1)]);
        let (roots, residual) = rational_roots(&p);
        assert_eq!(roots, vec![(rat(1, 1), 1)]);
        assert_eq!(residual, 2);
    }

    #[test]
    fn factor_larger_composite() {
        let n = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        let f = factorize(&n);
        assert_eq!(
            f,
            vec![(BigInt::from(1_000_003u64), 1), (BigInt::from(1_000_033u64), 1)]
        );
    }
}
