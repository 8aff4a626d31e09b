//! Differential operators `A = a_m D^m + ... + a_0` on the superline, with
//! noncommutative composition, application, monic normalization, two-sided
//! division with remainder, the first-order operators `M_phi`, and full
//! factorization into first-order operators.
//!
//! Order counts powers of `D`, so `ord D = 1` while the even derivative
//! `D^2` has order 2. An operator is nondegenerate when its top coefficient is
//! invertible (hence even); exactly those admit division with remainder.

use crate::funcring::{FuncRingError, OddContext, SuperFn};
use crate::kernel::{self, KernelBasis};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SuperOpError {
    #[error("the zero operator has no order")]
    ZeroOperator,
    #[error("operator is degenerate: top coefficient is not invertible and even")]
    Degenerate,
    #[error("context mismatch: {left} odd constants vs {right}")]
    ContextMismatch { left: usize, right: usize },
    #[error("function is not in the kernel: division leaves remainder")]
    NotInKernel,
    #[error("no even invertible kernel element found by the deterministic search")]
    NoInvertibleKernelElement,
    #[error("kernel basis does not belong to this operator")]
    KernelMismatch,
    #[error("kernel basis has dimension {got} but {expected} is required")]
    KernelDeficient { expected: String, got: String },
    #[error("function must be even (zero odd part)")]
    NotEven,
    #[error(transparent)]
    Ring(#[from] FuncRingError),
}

/// `sum a_k D^k`; `coeffs[k]` is `a_k`, the top coefficient is nonzero, and
/// the zero operator is the empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperOp {
    ctx: OddContext,
    coeffs: Vec<SuperFn>,
}

impl SuperOp {
    pub fn zero(ctx: OddContext) -> Self {
        SuperOp {
            ctx,
            coeffs: Vec::new(),
        }
    }

    pub fn one(ctx: OddContext) -> Self {
        Self::from_fn(SuperFn::one(ctx))
    }

    /// The odd derivative as an operator.
    pub fn d(ctx: OddContext) -> Self {
        SuperOp {
            ctx,
            coeffs: vec![SuperFn::zero(ctx), SuperFn::one(ctx)],
        }
    }

    pub fn d_pow(ctx: OddContext, k: usize) -> Self {
        let mut coeffs = vec![SuperFn::zero(ctx); k + 1];
        coeffs[k] = SuperFn::one(ctx);
        SuperOp { ctx, coeffs }
    }

    /// Multiplication operator by a function (order 0).
    pub fn from_fn(f: SuperFn) -> Self {
        let ctx = f.ctx();
        let mut op = SuperOp {
            ctx,
            coeffs: vec![f],
        };
        op.trim();
        op
    }

    pub fn from_coeffs(ctx: OddContext, coeffs: Vec<SuperFn>) -> Result<Self, SuperOpError> {
        for c in &coeffs {
            if c.ctx() != ctx {
                return Err(SuperOpError::ContextMismatch {
                    left: ctx.n,
                    right: c.ctx().n,
                });
            }
        }
        let mut op = SuperOp { ctx, coeffs };
        op.trim();
        Ok(op)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> OddContext {
        self.ctx
    }

    pub fn coeffs(&self) -> &[SuperFn] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> SuperFn {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| SuperFn::zero(self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Index of the highest nonzero coefficient, or `None` for zero.
    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn order(&self) -> Result<usize, SuperOpError> {
        self.deg().ok_or(SuperOpError::ZeroOperator)
    }

    pub fn top(&self) -> Result<&SuperFn, SuperOpError> {
        self.coeffs.last().ok_or(SuperOpError::ZeroOperator)
    }

    /// Top coefficient invertible and even.
    pub fn is_nondegenerate(&self) -> Result<bool, SuperOpError> {
        let top = self.top()?;
        Ok(top.is_invertible() && top.is_even())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Homogeneous parity of the operator (a term `a_k D^k` has parity
    /// `parity(a_k) + k`), or `None` when mixed.
    pub fn parity(&self) -> Option<u8> {
        let mut p = None;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cp = c.parity()?;
            let tp = (cp + (k % 2) as u8) % 2;
            match p {
                None => p = Some(tp),
                Some(q) if q == tp => {}
                _ => return None,
            }
        }
        Some(p.unwrap_or(0))
    }

    fn check_ctx(&self, other: &Self) -> Result<(), SuperOpError> {
        if self.ctx != other.ctx {
            return Err(SuperOpError::ContextMismatch {
                left: self.ctx.n,
                right: other.ctx.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SuperOpError> {
        self.check_ctx(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for k in 0..len {
            coeffs.push(self.coeff(k).checked_add(&other.coeff(k))?);
        }
        let mut op = SuperOp {
            ctx: self.ctx,
            coeffs,
        };
        op.trim();
        Ok(op)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SuperOpError> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SuperOp {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    /// Coefficientwise left multiplication by a function.
    pub fn left_mul_fn(&self, f: &SuperFn) -> Self {
        let mut op = SuperOp {
            ctx: self.ctx,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| f.checked_mul(c).expect("context"))
                .collect(),
        };
        op.trim();
        op
    }

    /// `D` composed with this operator: pushing `D` across a coefficient uses
    /// `D(f g) = (Df) g + sigma(f) (Dg)`, i.e. `D . f = d_super(f) + sigma(f) D`.
    fn d_compose(&self) -> Self {
        let mut coeffs = vec![SuperFn::zero(self.ctx); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k] = coeffs[k].checked_add(&c.d_super()).expect("ctx");
            coeffs[k + 1] = coeffs[k + 1].checked_add(&c.sigma()).expect("ctx");
        }
        let mut op = SuperOp {
            ctx: self.ctx,
            coeffs,
        };
        op.trim();
        op
    }

    /// Operator composition: `apply(mul(A,B), f) = apply(A, apply(B, f))`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, SuperOpError> {
        self.check_ctx(other)?;
        let mut result = Self::zero(self.ctx);
        if self.is_zero() || other.is_zero() {
            return Ok(result);
        }
        let mut cur = other.clone(); // D^k . B
        let top = self.coeffs.len() - 1;
        for (k, a_k) in self.coeffs.iter().enumerate() {
            if !a_k.is_zero() {
                result = result.checked_add(&cur.left_mul_fn(a_k))?;
            }
            if k < top {
                cur = cur.d_compose();
            }
        }
        Ok(result)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.ctx);
        for _ in 0..k {
            acc = acc.checked_mul(self).expect("ctx");
        }
        acc
    }

    /// `sum a_k D^k f`.
    pub fn apply(&self, f: &SuperFn) -> Result<SuperFn, SuperOpError> {
        if f.ctx() != self.ctx {
            return Err(SuperOpError::ContextMismatch {
                left: self.ctx.n,
                right: f.ctx().n,
            });
        }
        let mut acc = SuperFn::zero(self.ctx);
        let mut g = f.clone();
        for (k, a_k) in self.coeffs.iter().enumerate() {
            if !a_k.is_zero() {
                acc = acc.checked_add(&a_k.checked_mul(&g)?)?;
            }
            if k + 1 < self.coeffs.len() {
                g = g.d_super();
            }
        }
        Ok(acc)
    }

    /// Splits a nondegenerate operator as `A = a_m * B` with `B` monic;
    /// `B = invert(a_m) * A` coefficientwise on the left.
    pub fn monic_normalize(&self) -> Result<(SuperFn, SuperOp), SuperOpError> {
        if !self.is_nondegenerate()? {
            return Err(SuperOpError::Degenerate);
        }
        let top = self.top()?.clone();
        let inv = top.invert()?;
        Ok((top, self.left_mul_fn(&inv)))
    }

    /// Right division: `N = Q*M + R` with `ord R < ord M`; unique for
    /// nondegenerate `M`. Leading-term elimination takes
    /// `q = r_top * invert(sigma^{n-r}(m_top))` at each step.
    pub fn divmod_right(&self, m: &Self) -> Result<(SuperOp, SuperOp), SuperOpError> {
        self.check_ctx(m)?;
        if !m.is_nondegenerate()? {
            return Err(SuperOpError::Degenerate);
        }
        let r = m.deg().unwrap();
        let mut rem = self.clone();
        let mut q_coeffs = vec![
            SuperFn::zero(self.ctx);
            self.deg().map_or(0, |n| n.saturating_sub(r) + 1)
        ];
        // D^i . M, extended on demand
        let mut shifted: Vec<SuperOp> = vec![m.clone()];
        while let Some(n) = rem.deg() {
            if n < r {
                break;
            }
            let i = n - r;
            while shifted.len() <= i {
                let next = shifted.last().unwrap().d_compose();
                shifted.push(next);
            }
            let twisted_top = m.top()?.sigma_pow(i);
            let q_i = rem.top()?.checked_mul(&twisted_top.invert()?)?;
            rem = rem.checked_sub(&shifted[i].left_mul_fn(&q_i))?;
            debug_assert!(rem.deg().is_none_or(|d| d < n));
            q_coeffs[i] = q_i;
        }
        let q = SuperOp::from_coeffs(self.ctx, q_coeffs)?;
        Ok((q, rem))
    }

    /// Left division: `N = M*Q + R` with `ord R < ord M`.
    pub fn divmod_left(&self, m: &Self) -> Result<(SuperOp, SuperOp), SuperOpError> {
        self.check_ctx(m)?;
        if !m.is_nondegenerate()? {
            return Err(SuperOpError::Degenerate);
        }
        let r = m.deg().unwrap();
        let m_top_inv = m.top()?.invert()?;
        let mut rem = self.clone();
        let mut q_coeffs = vec![
            SuperFn::zero(self.ctx);
            self.deg().map_or(0, |n| n.saturating_sub(r) + 1)
        ];
        while let Some(n) = rem.deg() {
            if n < r {
                break;
            }
            let i = n - r;
            // top of M*(q D^i) is m_top * sigma^r(q) D^{n}
            let q_i = m_top_inv
                .checked_mul(rem.top()?)?
                .sigma_pow(r);
            let mut term_coeffs = vec![SuperFn::zero(self.ctx); i + 1];
            term_coeffs[i] = q_i.clone();
            let term = SuperOp::from_coeffs(self.ctx, term_coeffs)?;
            rem = rem.checked_sub(&m.checked_mul(&term)?)?;
            debug_assert!(rem.deg().is_none_or(|d| d < n));
            q_coeffs[i] = q_i;
        }
        let q = SuperOp::from_coeffs(self.ctx, q_coeffs)?;
        Ok((q, rem))
    }
}

impl std::ops::Add for &SuperOp {
    type Output = SuperOp;
    fn add(self, rhs: &SuperOp) -> SuperOp {
        self.checked_add(rhs).expect("context mismatch")
    }
}

impl std::ops::Sub for &SuperOp {
    type Output = SuperOp;
    fn sub(self, rhs: &SuperOp) -> SuperOp {
        self.checked_sub(rhs).expect("context mismatch")
    }
}

impl std::ops::Mul for &SuperOp {
    type Output = SuperOp;
    fn mul(self, rhs: &SuperOp) -> SuperOp {
        self.checked_mul(rhs).expect("context mismatch")
    }
}

/// The elementary first-order operator `M_phi = D - D(phi)/phi`, annihilating
/// `phi`; requires an even invertible `phi`.
pub fn m_phi(phi: &SuperFn) -> Result<SuperOp, SuperOpError> {
    if !phi.is_invertible() {
        return Err(FuncRingError::NotInvertible.into());
    }
    if !phi.is_even() {
        return Err(SuperOpError::NotEven);
    }
    let ctx = phi.ctx();
    let c = phi.d_super().checked_mul(&phi.invert()?)?;
    SuperOp::from_coeffs(ctx, vec![c.neg(), SuperFn::one(ctx)])
}

/// The quotient `L'` with `L = L' * M_phi`, defined when `phi` is an even
/// invertible kernel element of `L`; the remainder of the right division must
/// vanish, otherwise `phi` was not in the kernel.
pub fn bezout_quotient(l: &SuperOp, phi: &SuperFn) -> Result<SuperOp, SuperOpError> {
    if !l.is_nondegenerate()? {
        return Err(SuperOpError::Degenerate);
    }
    let m = m_phi(phi)?;
    let (q, r) = l.divmod_right(&m)?;
    if !r.is_zero() {
        return Err(SuperOpError::NotInKernel);
    }
    Ok(q)
}

/// Deterministic search for an even invertible element of the span of the
/// basis: first the basis elements in order, then sums `e_i + c*e_j` of two
/// even elements with `c` in `{1, -1, 2}`.
fn select_even_invertible(elems: &[SuperFn]) -> Result<SuperFn, SuperOpError> {
    for e in elems {
        if e.is_even() && e.is_invertible() {
            return Ok(e.clone());
        }
    }
    let evens: Vec<&SuperFn> = elems.iter().filter(|e| e.is_even()).collect();
    for (i, a) in evens.iter().enumerate() {
        for (j, b) in evens.iter().enumerate() {
            if i == j {
                continue;
            }
            for c in [1i64, -1, 2] {
                let cand = a
                    .checked_add(&b.scale_rat(&crate::funcring::Rat::from_integer(c.into())))
                    .expect("ctx");
                if cand.is_invertible() {
                    return Ok(cand);
                }
            }
        }
    }
    Err(SuperOpError::NoInvertibleKernelElement)
}

/// Full factorization `L = a * M_{phi_1} * ... * M_{phi_m}` from a verified
/// kernel basis of full dimension: pick an even invertible kernel element as
/// the rightmost factor, divide it out, push the kernel forward through it,
/// and repeat.
pub fn factor_first_order(
    l: &SuperOp,
    kb: &KernelBasis,
) -> Result<(SuperFn, Vec<SuperOp>), SuperOpError> {
    if !l.is_nondegenerate()? {
        return Err(SuperOpError::Degenerate);
    }
    if kb.op() != l {
        return Err(SuperOpError::KernelMismatch);
    }
    let m = l.order()?;
    if m == 0 {
        return Ok((l.coeff(0), Vec::new()));
    }
    let expected = kernel::expected_kernel_dim(m).expect("m >= 1");
    if kb.dims() != expected {
        return Err(SuperOpError::KernelDeficient {
            expected: expected.to_string(),
            got: kb.dims().to_string(),
        });
    }
    let mut factors_rev: Vec<SuperOp> = Vec::with_capacity(m);
    let mut cur = l.clone();
    let mut elems: Vec<SuperFn> = kb.elems().to_vec();
    while cur.deg().is_some_and(|d| d > 0) {
        let phi = select_even_invertible(&elems)?;
        let mop = m_phi(&phi)?;
        let (q, r) = cur.divmod_right(&mop)?;
        if !r.is_zero() {
            return Err(SuperOpError::NotInKernel);
        }
        let mut images = Vec::new();
        for e in &elems {
            let img = mop.apply(e)?;
            if !img.is_zero() {
                images.push(img);
            }
        }
        elems = if q.deg().is_some_and(|d| d > 0) {
            kernel::select_free_basis(&q, &images)
        } else {
            Vec::new()
        };
        factors_rev.push(mop);
        cur = q;
    }
    let a = cur.coeff(0);
    factors_rev.reverse();
    Ok((a, factors_rev))
}
