//! Deterministic random data for the acceptance suite: a fixed-seed ChaCha
//! stream, so reruns are byte-identical.
#![allow(dead_code)]

use num::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superline::funcring::{GrassmannMono, OddContext, ScalarFn, ScalarFrac, SuperFn};
use superline::superop::SuperOp;

pub type Rat = BigRational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn gen_rat(r: &mut ChaCha8Rng) -> Rat {
    rat(r.gen_range(-4..=4), r.gen_range(1..=3))
}

pub fn gen_rat_nonzero(r: &mut ChaCha8Rng) -> Rat {
    loop {
        let c = gen_rat(r);
        if !num::Zero::is_zero(&c) {
            return c;
        }
    }
}

/// Polynomial of degree <= max_deg, not identically zero.
pub fn gen_poly(r: &mut ChaCha8Rng, max_deg: usize) -> Vec<Rat> {
    let deg = r.gen_range(0..=max_deg);
    let mut p: Vec<Rat> = (0..deg).map(|_| gen_rat(r)).collect();
    p.push(gen_rat_nonzero(r));
    p
}

/// Up to `max_terms` exponential terms with small distinct frequencies.
pub fn gen_scalar_fn(r: &mut ChaCha8Rng, max_terms: usize, max_deg: usize) -> ScalarFn {
    let n = r.gen_range(1..=max_terms);
    let mut acc = ScalarFn::zero();
    for _ in 0..n {
        let freq = rat(r.gen_range(-2..=2), 1);
        acc = acc.add(&ScalarFn::mono(freq, gen_poly(r, max_deg)));
    }
    if acc.is_zero() {
        ScalarFn::one()
    } else {
        acc
    }
}

pub fn gen_frac(r: &mut ChaCha8Rng, max_terms: usize, max_deg: usize) -> ScalarFrac {
    let num = gen_scalar_fn(r, max_terms, max_deg);
    let den = match r.gen_range(0..4) {
        0 => ScalarFn::x(),
        1 => ScalarFn::x().add(&ScalarFn::one()),
        _ => ScalarFn::one(),
    };
    ScalarFrac::new(num, den).expect("nonzero denominator")
}

pub fn monomials(ctx: OddContext) -> Vec<GrassmannMono> {
    ctx.all_monomials()
}

/// Random function with a few Grassmann-monomial entries.
pub fn gen_superfn(r: &mut ChaCha8Rng, ctx: OddContext) -> SuperFn {
    let monos = monomials(ctx);
    let entries = r.gen_range(0..=3.min(monos.len()));
    let mut f = SuperFn::zero(ctx);
    for _ in 0..entries {
        let m = monos[r.gen_range(0..monos.len())];
        let part = SuperFn::mono(ctx, m, gen_frac(r, 2, 3)).expect("theta within context");
        f = f.checked_add(&part).expect("same context");
    }
    f
}

pub fn gen_superfn_invertible(r: &mut ChaCha8Rng, ctx: OddContext) -> SuperFn {
    let mut f = gen_superfn(r, ctx);
    if !f.is_invertible() {
        let body = SuperFn::from_frac(
            ctx,
            ScalarFrac::from_fn(ScalarFn::exp(rat(r.gen_range(-2..=2), 1))),
        );
        f = f.checked_add(&body).expect("same context");
    }
    if f.is_invertible() {
        f
    } else {
        SuperFn::one(ctx)
    }
}

/// Even invertible function: nonzero body plus optional even nilpotent terms.
pub fn gen_even_invertible(r: &mut ChaCha8Rng, ctx: OddContext) -> SuperFn {
    let body = match r.gen_range(0..3) {
        0 => ScalarFrac::from_rat(gen_rat_nonzero(r)),
        1 => ScalarFrac::from_fn(ScalarFn::exp(rat(r.gen_range(-2..=2), 1))),
        _ => gen_frac(r, 1, 1),
    };
    let body = if body.is_zero() {
        ScalarFrac::one()
    } else {
        body
    };
    let mut f = SuperFn::from_frac(ctx, body);
    let evens: Vec<GrassmannMono> = monomials(ctx)
        .into_iter()
        .filter(|m| !m.is_empty() && m.parity() == 0)
        .collect();
    if !evens.is_empty() && r.gen_bool(0.5) {
        let m = evens[r.gen_range(0..evens.len())];
        let part = SuperFn::mono(ctx, m, gen_frac(r, 1, 2)).expect("theta within context");
        f = f.checked_add(&part).expect("same context");
    }
    f
}

/// Random operator of order <= max_ord (possibly lower, never zero).
pub fn gen_operator(r: &mut ChaCha8Rng, ctx: OddContext, max_ord: usize) -> SuperOp {
    let ord = r.gen_range(0..=max_ord);
    let mut coeffs: Vec<SuperFn> = (0..ord).map(|_| gen_superfn(r, ctx)).collect();
    coeffs.push(gen_superfn_invertible(r, ctx));
    SuperOp::from_coeffs(ctx, coeffs).expect("same context")
}

/// Nondegenerate operator of exactly the given order.
pub fn gen_nondegenerate(r: &mut ChaCha8Rng, ctx: OddContext, ord: usize) -> SuperOp {
    let mut coeffs: Vec<SuperFn> = (0..ord).map(|_| gen_superfn(r, ctx)).collect();
    coeffs.push(gen_even_invertible(r, ctx));
    SuperOp::from_coeffs(ctx, coeffs).expect("same context")
}
