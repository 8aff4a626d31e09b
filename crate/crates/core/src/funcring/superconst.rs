//! Constants of the external Grassmann algebra: rational combinations of
//! theta monomials, with no `x` or `xi` dependence. Eigenvalues and expansion
//! coefficients live here.

use super::grassmann::GrassmannMono;
use super::poly::Rat;
use super::{FuncRingError, OddContext};
use num::{One, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperConst {
    ctx: OddContext,
    entries: BTreeMap<GrassmannMono, Rat>,
}

impl SuperConst {
    pub fn zero(ctx: OddContext) -> Self {
        SuperConst {
            ctx,
            entries: BTreeMap::new(),
        }
    }

    pub fn one(ctx: OddContext) -> Self {
        Self::rat(ctx, Rat::one())
    }

    pub fn rat(ctx: OddContext, c: Rat) -> Self {
        let mut entries = BTreeMap::new();
        if !c.is_zero() {
            entries.insert(GrassmannMono::EMPTY, c);
        }
        SuperConst { ctx, entries }
    }

    pub fn theta(ctx: OddContext, k: usize) -> Result<Self, FuncRingError> {
        if k == 0 || k > ctx.n {
            return Err(FuncRingError::UnknownGenerator { index: k, max: ctx.n });
        }
        let mut entries = BTreeMap::new();
        entries.insert(GrassmannMono::theta(k), Rat::one());
        Ok(SuperConst { ctx, entries })
    }

    pub fn from_entries(
        ctx: OddContext,
        entries: impl IntoIterator<Item = (GrassmannMono, Rat)>,
    ) -> Result<Self, FuncRingError> {
        let mut out = Self::zero(ctx);
        for (m, c) in entries {
            if m.has_xi() {
                return Err(FuncRingError::NotConstant);
            }
            if m.max_theta() > ctx.n {
                return Err(FuncRingError::UnknownGenerator {
                    index: m.max_theta(),
                    max: ctx.n,
                });
            }
            if c.is_zero() {
                continue;
            }
            let entry = out.entries.entry(m).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                out.entries.remove(&m);
            }
        }
        Ok(out)
    }

    pub fn ctx(&self) -> OddContext {
        self.ctx
    }

    pub fn entries(&self) -> impl Iterator<Item = (&GrassmannMono, &Rat)> {
        self.entries.iter()
    }

    pub fn coeff(&self, m: GrassmannMono) -> Rat {
        self.entries.get(&m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn body(&self) -> Rat {
        self.coeff(GrassmannMono::EMPTY)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn neg(&self) -> Self {
        SuperConst {
            ctx: self.ctx,
            entries: self
                .entries
                .iter()
                .map(|(m, c)| (*m, -c))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ctx, other.ctx, "odd-constant context mismatch");
        let mut out = self.clone();
        for (m, c) in &other.entries {
            let entry = out.entries.entry(*m).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                out.entries.remove(m);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ctx, other.ctx, "odd-constant context mismatch");
        let mut out = Self::zero(self.ctx);
        for (ma, ca) in &self.entries {
            for (mb, cb) in &other.entries {
                if let Some((sign, m)) = ma.mul(*mb) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    let entry = out.entries.entry(m).or_insert_with(Rat::zero);
                    *entry += c;
                    if entry.is_zero() {
                        out.entries.remove(&m);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.ctx);
        }
        SuperConst {
            ctx: self.ctx,
            entries: self.entries.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Parity involution: negates the odd part.
    pub fn sigma(&self) -> Self {
        SuperConst {
            ctx: self.ctx,
            entries: self
                .entries
                .iter()
                .map(|(m, c)| (*m, if m.parity() == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// `Some(0)` or `Some(1)` when all monomials share one parity (zero is
    /// reported as even), `None` when mixed.
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

    /// The component of the given theta degree.
    pub fn theta_degree_part(&self, d: u32) -> Self {
        SuperConst {
            ctx: self.ctx,
            entries: self
                .entries
                .iter()
                .filter(|(m, _)| m.theta_degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn max_theta_degree(&self) -> u32 {
        self.entries
            .keys()
            .map(|m| m.theta_degree())
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> OddContext {
        OddContext::new(2)
    }

    fn rat(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    #[test]
    fn odd_constants_square_to_zero() {
        let t1 = SuperConst::theta(ctx(), 1).unwrap();
        assert!(t1.mul(&t1).is_zero());
    }

    #[test]
    fn theta_out_of_context() {
        assert!(matches!(
            SuperConst::theta(ctx(), 3),
            Err(FuncRingError::UnknownGenerator { .. })
        ));
    }

    #[test]
    fn product_anticommutes() {
        let t1 = SuperConst::theta(ctx(), 1).unwrap();
        let t2 = SuperConst::theta(ctx(), 2).unwrap();
        assert_eq!(t1.mul(&t2), t2.mul(&t1).neg());
    }

    #[test]
    fn sigma_negates_odd() {
        let v = SuperConst::rat(ctx(), rat(3)).add(&SuperConst::theta(ctx(), 1).unwrap());
        let s = v.sigma();
        assert_eq!(s.body(), rat(3));
        assert_eq!(s.coeff(GrassmannMono::theta(1)), rat(-1));
    }
}
