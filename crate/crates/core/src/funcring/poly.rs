//! Dense univariate polynomials over exact rationals, coefficients stored
//! ascending. The zero polynomial is the empty vector.

use num::{BigRational, One, Zero};

pub type Rat = BigRational;

pub fn trim(p: &mut Vec<Rat>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn deg(p: &[Rat]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(&mut out);
    out
}

pub fn neg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|c| -c).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    add(a, &neg(b))
}

pub fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    trim(&mut out);
    out
}

pub fn scale(a: &[Rat], c: &Rat) -> Vec<Rat> {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

pub fn derivative(a: &[Rat]) -> Vec<Rat> {
    let mut out: Vec<Rat> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rat::from_integer(k.into()))
        .collect();
    trim(&mut out);
    out
}

/// Euclidean division: `a = q*b + r` with `deg r < deg b`. Panics if `b` is zero.
pub fn divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    let mut q = vec![Rat::zero(); a.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r.last().unwrap() / lead;
        q[dr - db] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            let idx = dr - db + i;
            let t = bc * &c;
            r[idx] -= t;
        }
        trim(&mut r);
        if r.len() > dr {
            unreachable!("division failed to reduce degree");
        }
        if r.len() == dr + 1 {
            // leading term should have cancelled exactly
            unreachable!("leading term not eliminated");
        }
    }
    trim(&mut q);
    (q, r)
}

/// Exact division; returns `None` when the remainder is nonzero.
pub fn div_exact(a: &[Rat], b: &[Rat]) -> Option<Vec<Rat>> {
    let (q, r) = divrem(a, b);
    if r.is_empty() {
        Some(q)
    } else {
        None
    }
}

/// Monic greatest common divisor via the Euclidean algorithm.
pub fn gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        if !l.is_one() {
            x = scale(&x, &l.recip());
        }
    }
    x
}

pub fn eval(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Divides by `(x - r)`; returns `None` if `r` is not a root.
pub fn deflate_root(p: &[Rat], r: &Rat) -> Option<Vec<Rat>> {
    if p.is_empty() {
        return None;
    }
    let mut q = vec![Rat::zero(); p.len() - 1];
    let mut carry = Rat::zero();
    for i in (0..p.len()).rev() {
        let c = &p[i] + &carry;
        if i == 0 {
            if !c.is_zero() {
                return None;
            }
        } else {
            q[i - 1] = c.clone();
            carry = c * r;
        }
    }
    trim(&mut q);
    Some(q)
}
