//! Functions of `(x, xi, theta_1..theta_N)`: finite sums of Grassmann
//! monomials with [`ScalarFrac`] coefficients. Operator coefficients,
//! eigenfunctions and kernel elements are all values of this type.

use super::grassmann::GrassmannMono;
use super::poly::Rat;
use super::scalar::{ScalarFn, ScalarFrac};
use super::superconst::SuperConst;
use super::{FuncRingError, OddContext};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperFn {
    ctx: OddContext,
    entries: BTreeMap<GrassmannMono, ScalarFrac>,
}

impl SuperFn {
    pub fn zero(ctx: OddContext) -> Self {
        SuperFn {
            ctx,
            entries: BTreeMap::new(),
        }
    }

    pub fn one(ctx: OddContext) -> Self {
        Self::from_frac(ctx, ScalarFrac::one())
    }

    pub fn constant(ctx: OddContext, c: Rat) -> Self {
        Self::from_frac(ctx, ScalarFrac::from_rat(c))
    }

    pub fn x(ctx: OddContext) -> Self {
        Self::from_frac(ctx, ScalarFrac::from_fn(ScalarFn::x()))
    }

    pub fn exp(ctx: OddContext, freq: Rat) -> Self {
        Self::from_frac(ctx, ScalarFrac::from_fn(ScalarFn::exp(freq)))
    }

    pub fn xi(ctx: OddContext) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(GrassmannMono::xi(), ScalarFrac::one());
        SuperFn { ctx, entries }
    }

    pub fn theta(ctx: OddContext, k: usize) -> Result<Self, FuncRingError> {
        if k == 0 || k > ctx.n {
            return Err(FuncRingError::UnknownGenerator { index: k, max: ctx.n });
        }
        let mut entries = BTreeMap::new();
        entries.insert(GrassmannMono::theta(k), ScalarFrac::one());
        Ok(SuperFn { ctx, entries })
    }

    /// The term `c * mono`.
    pub fn mono(ctx: OddContext, mono: GrassmannMono, c: ScalarFrac) -> Result<Self, FuncRingError> {
        if mono.max_theta() > ctx.n {
            return Err(FuncRingError::UnknownGenerator {
                index: mono.max_theta(),
                max: ctx.n,
            });
        }
        let mut entries = BTreeMap::new();
        if !c.is_zero() {
            entries.insert(mono, c);
        }
        Ok(SuperFn { ctx, entries })
    }

    pub fn from_frac(ctx: OddContext, c: ScalarFrac) -> Self {
        Self::mono(ctx, GrassmannMono::EMPTY, c).unwrap()
    }

    pub fn from_entries(
        ctx: OddContext,
        entries: impl IntoIterator<Item = (GrassmannMono, ScalarFrac)>,
    ) -> Result<Self, FuncRingError> {
        let mut out = Self::zero(ctx);
        for (m, c) in entries {
            out = out.checked_add(&Self::mono(ctx, m, c)?)?;
        }
        Ok(out)
    }

    pub fn from_const(c: &SuperConst) -> Self {
        let ctx = c.ctx();
        SuperFn {
            ctx,
            entries: c
                .entries()
                .map(|(m, v)| (*m, ScalarFrac::from_rat(v.clone())))
                .collect(),
        }
    }

    pub fn ctx(&self) -> OddContext {
        self.ctx
    }

    pub fn entries(&self) -> impl Iterator<Item = (&GrassmannMono, &ScalarFrac)> {
        self.entries.iter()
    }

    pub fn coeff(&self, m: GrassmannMono) -> ScalarFrac {
        self.entries.get(&m).cloned().unwrap_or_else(ScalarFrac::zero)
    }

    /// The coefficient of the empty monomial: the non-nilpotent part.
    pub fn body(&self) -> ScalarFrac {
        self.coeff(GrassmannMono::EMPTY)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.entries.len() == 1 && self.body().is_one()
    }

    fn insert(&mut self, m: GrassmannMono, c: ScalarFrac) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&m) {
            Some(e) => {
                let s = e.add(&c);
                if s.is_zero() {
                    self.entries.remove(&m);
                } else {
                    *e = s;
                }
            }
            None => {
                self.entries.insert(m, c);
            }
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<(), FuncRingError> {
        if self.ctx != other.ctx {
            return Err(FuncRingError::ContextMismatch {
                left: self.ctx.n,
                right: other.ctx.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FuncRingError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (m, c) in &other.entries {
            out.insert(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FuncRingError> {
        self.checked_add(&other.neg())
    }

    /// Grassmann product with Koszul signs: monomials with a common generator
    /// annihilate, the rest merge into canonical order with a sign.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, FuncRingError> {
        self.check_ctx(other)?;
        let mut out = Self::zero(self.ctx);
        for (ma, ca) in &self.entries {
            for (mb, cb) in &other.entries {
                if let Some((sign, m)) = ma.mul(*mb) {
                    let mut c = ca.mul(cb);
                    if sign < 0 {
                        c = c.neg();
                    }
                    out.insert(m, c);
                }
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        SuperFn {
            ctx: self.ctx,
            entries: self.entries.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn scale_frac(&self, c: &ScalarFrac) -> Self {
        if c.is_zero() {
            return Self::zero(self.ctx);
        }
        SuperFn {
            ctx: self.ctx,
            entries: self.entries.iter().map(|(m, v)| (*m, v.mul(c))).collect(),
        }
    }

    pub fn scale_rat(&self, c: &Rat) -> Self {
        self.scale_frac(&ScalarFrac::from_rat(c.clone()))
    }

    /// The component free of external odd constants (entries on the empty
    /// monomial and on bare `xi`). An element with zero theta-free part is a
    /// torsion element over the Grassmann constants: multiplying by the
    /// complementary theta product annihilates it.
    pub fn theta_free_part(&self) -> Self {
        SuperFn {
            ctx: self.ctx,
            entries: self
                .entries
                .iter()
                .filter(|(m, _)| m.theta_degree() == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// `(even part, odd part)` by monomial parity.
    pub fn parity_split(&self) -> (Self, Self) {
        let mut even = Self::zero(self.ctx);
        let mut odd = Self::zero(self.ctx);
        for (m, c) in &self.entries {
            if m.parity() == 0 {
                even.entries.insert(*m, c.clone());
            } else {
                odd.entries.insert(*m, c.clone());
            }
        }
        (even, odd)
    }

    pub fn is_even(&self) -> bool {
        self.entries.keys().all(|m| m.parity() == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.entries.keys().all(|m| m.parity() == 1)
    }

    /// `Some(parity)` when homogeneous (zero counts as even).
    pub fn parity(&self) -> Option<u8> {
        let mut p = None;
        for m in self.entries.keys() {
            match p {
                None => p = Some(m.parity()),
                Some(q) if q == m.parity() => {}
                _ => return None,
            }
        }
        Some(p.unwrap_or(0))
    }

    /// Parity involution `sigma(f) = f_even - f_odd`.
    pub fn sigma(&self) -> Self {
        SuperFn {
            ctx: self.ctx,
            entries: self
                .entries
                .iter()
                .map(|(m, c)| (*m, if m.parity() == 1 { c.neg() } else { c.clone() }))
                .collect(),
        }
    }

    pub fn sigma_pow(&self, k: usize) -> Self {
        if k % 2 == 1 {
            self.sigma()
        } else {
            self.clone()
        }
    }

    /// Even derivative in `x`, entrywise on the scalar fractions.
    pub fn d_x(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for (m, c) in &self.entries {
            out.insert(*m, c.d_x());
        }
        out
    }

    /// Odd derivative `D = d/dxi + xi*d/dx`. With `xi` first in the canonical
    /// generator order both contributions carry sign +1: an entry containing
    /// `xi` loses it, an entry without `xi` gains it on the `x`-derivative.
    pub fn d_super(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for (m, c) in &self.entries {
            if m.has_xi() {
                out.insert(m.without_xi(), c.clone());
            } else {
                out.insert(m.with_xi(), c.d_x());
            }
        }
        out
    }

    /// Invertible iff the body is nonzero: scalar bodies live in a field and
    /// everything else is nilpotent.
    pub fn is_invertible(&self) -> bool {
        !self.body().is_zero()
    }

    /// Writes `f = b(1 + n)` with `b` the body and `n` nilpotent, and sums the
    /// geometric series, iterating until the power of `n` vanishes.
    pub fn invert(&self) -> Result<Self, FuncRingError> {
        let b = self.body();
        if b.is_zero() {
            return Err(FuncRingError::NotInvertible);
        }
        let b_inv = b.inv()?;
        let mut nil = self.clone();
        nil.entries.remove(&GrassmannMono::EMPTY);
        let n = nil.scale_frac(&b_inv).neg(); // -n
        let mut acc = Self::one(self.ctx);
        let mut pow = n.clone();
        while !pow.is_zero() {
            acc = acc.checked_add(&pow).expect("same ctx");
            pow = pow.checked_mul(&n).expect("same ctx");
        }
        Ok(acc.scale_frac(&b_inv))
    }

    /// True iff no monomial contains `xi` and every coefficient is a rational
    /// constant (zero `x`-derivative).
    pub fn is_constant(&self) -> bool {
        self.entries
            .iter()
            .all(|(m, c)| !m.has_xi() && c.is_rational_const())
    }

    pub fn as_const(&self) -> Result<SuperConst, FuncRingError> {
        let mut entries = Vec::new();
        for (m, c) in &self.entries {
            if m.has_xi() {
                return Err(FuncRingError::NotConstant);
            }
            match c.as_rat() {
                Some(r) => entries.push((*m, r)),
                None => return Err(FuncRingError::NotConstant),
            }
        }
        SuperConst::from_entries(self.ctx, entries)
    }

    pub fn max_theta_degree(&self) -> u32 {
        self.entries
            .keys()
            .map(|m| m.theta_degree())
            .max()
            .unwrap_or(0)
    }
}

impl std::ops::Add for &SuperFn {
    type Output = SuperFn;
    fn add(self, rhs: &SuperFn) -> SuperFn {
        self.checked_add(rhs).expect("context mismatch")
    }
}

impl std::ops::Sub for &SuperFn {
    type Output = SuperFn;
    fn sub(self, rhs: &SuperFn) -> SuperFn {
        self.checked_sub(rhs).expect("context mismatch")
    }
}

impl std::ops::Mul for &SuperFn {
    type Output = SuperFn;
    fn mul(self, rhs: &SuperFn) -> SuperFn {
        self.checked_mul(rhs).expect("context mismatch")
    }
}

impl std::ops::Neg for &SuperFn {
    type Output = SuperFn;
    fn neg(self) -> SuperFn {
        SuperFn::neg(self)
    }
}
