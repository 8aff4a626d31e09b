//! Darboux transformations `L0 -> L1` defined by the intertwining relation
//! `M L0 = L1 M`: eigenfunction checking, the elementary first-order step
//! built by changing order in the incomplete factorization
//! `L0 = Q M_phi + lambda  ->  L1 = M_phi Q + lambda`, transformation by an
//! arbitrary operator via division, chain composition, and the factorization
//! of any order-`r` transformation into `r` elementary steps.

use crate::funcring::{FuncRingError, SuperConst, SuperFn};
use crate::kernel::{self, KernelBasis, KernelError};
use crate::superop::{self, SuperOp, SuperOpError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DarbouxError {
    #[error("function is not an eigenfunction: the quotient is not constant")]
    NotEigenfunction,
    #[error("division remainder is not the eigenvalue constant")]
    NonConstantRemainder,
    #[error("the operator does not define a Darboux transformation: nonzero remainder")]
    NoDarbouxTransform,
    #[error("step {0} is incompatible with its predecessor")]
    IncompatibleSteps(usize),
    #[error("no kernel basis: the operator has non-constant coefficients, supply one")]
    MissingKernel,
    #[error("kernel basis has dimension {got}, expected {expected}")]
    KernelDeficient {
        expected: kernel::KernelDim,
        got: kernel::KernelDim,
    },
    #[error("pushed-forward kernel has dimension {got}, expected {expected}")]
    KernelPushforwardDeficient {
        expected: kernel::KernelDim,
        got: kernel::KernelDim,
    },
    #[error("no even invertible eigenfunction found after {} completed steps", partial.len())]
    NoEigenvector { partial: Vec<DarbouxStep> },
    #[error("operator must be monic")]
    NotMonic,
    #[error("eigenfunction of step {index} rejected: {source}")]
    ChainStep {
        index: usize,
        source: Box<DarbouxError>,
    },
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Op(#[from] SuperOpError),
    #[error(transparent)]
    Ring(#[from] FuncRingError),
}

/// One elementary transformation: `m_op = M_phi` intertwines `source` and
/// `target`, and `phi` is an eigenfunction of `source` with eigenvalue
/// `lambda`. Constructed only through [`elementary`], which verifies the
/// invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxStep {
    phi: SuperFn,
    lambda: SuperConst,
    m_op: SuperOp,
    source: SuperOp,
    target: SuperOp,
}

impl DarbouxStep {
    pub fn phi(&self) -> &SuperFn {
        &self.phi
    }

    pub fn lambda(&self) -> &SuperConst {
        &self.lambda
    }

    pub fn m_op(&self) -> &SuperOp {
        &self.m_op
    }

    pub fn source(&self) -> &SuperOp {
        &self.source
    }

    pub fn target(&self) -> &SuperOp {
        &self.target
    }
}

/// An ordered sequence of elementary steps with the composed operator
/// `M = M_r ... M_1`; the empty chain is the identity transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxChain {
    source: SuperOp,
    target: SuperOp,
    steps: Vec<DarbouxStep>,
    composed: SuperOp,
}

impl DarbouxChain {
    pub fn source(&self) -> &SuperOp {
        &self.source
    }

    pub fn target(&self) -> &SuperOp {
        &self.target
    }

    pub fn steps(&self) -> &[DarbouxStep] {
        &self.steps
    }

    pub fn composed(&self) -> &SuperOp {
        &self.composed
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// The eigenvalue of an even invertible eigenfunction:
/// `lambda = (L0 phi) phi^{-1}` when that quotient is constant.
pub fn eigencheck(l0: &SuperOp, phi: &SuperFn) -> Result<SuperConst, DarbouxError> {
    if !phi.is_invertible() {
        return Err(FuncRingError::NotInvertible.into());
    }
    if !phi.is_even() {
        return Err(SuperOpError::NotEven.into());
    }
    let q = l0.apply(phi)?.checked_mul(&phi.invert()?)?;
    if !q.is_constant() {
        return Err(DarbouxError::NotEigenfunction);
    }
    Ok(q.as_const()?)
}

/// The elementary transformation of a monic operator by an even invertible
/// eigenfunction: divide `L0 = Q M_phi + R`, check `R = lambda`, and change
/// the order: `L1 = M_phi Q + sigma(lambda)`. The parity twist on the
/// constant is forced by `M_phi . lambda = sigma(lambda) . M_phi` (an odd
/// eigenvalue anticommutes with the odd operator); it is what makes the
/// intertwining identity `M_phi L0 = L1 M_phi` hold, and that identity is
/// verified exactly.
pub fn elementary(l0: &SuperOp, phi: &SuperFn) -> Result<DarbouxStep, DarbouxError> {
    if !l0.is_monic() {
        return Err(DarbouxError::NotMonic);
    }
    let lambda = eigencheck(l0, phi)?;
    let m_op = superop::m_phi(phi)?;
    let (q, r) = l0.divmod_right(&m_op)?;
    let lambda_op = SuperOp::from_fn(SuperFn::from_const(&lambda));
    if r != lambda_op {
        return Err(DarbouxError::NonConstantRemainder);
    }
    let twisted = SuperOp::from_fn(SuperFn::from_const(&lambda.sigma()));
    let target = m_op.checked_mul(&q)?.checked_add(&twisted)?;
    let step = DarbouxStep {
        phi: phi.clone(),
        lambda,
        m_op,
        source: l0.clone(),
        target,
    };
    if step.m_op.checked_mul(&step.source)? != step.target.checked_mul(&step.m_op)? {
        return Err(DarbouxError::Internal("intertwining identity failed"));
    }
    debug_assert!(step.target.is_monic());
    debug_assert_eq!(step.target.deg(), step.source.deg());
    Ok(step)
}

/// The transformed operator `L_r` with `M L0 = L_r M`, obtained as the
/// quotient of `M L0` by `M` from the right; a nonzero remainder means `M`
/// defines no Darboux transformation of `L0`.
pub fn transform(l0: &SuperOp, m: &SuperOp) -> Result<SuperOp, DarbouxError> {
    if !l0.is_monic() {
        return Err(DarbouxError::NotMonic);
    }
    if !m.is_nondegenerate()? {
        return Err(SuperOpError::Degenerate.into());
    }
    let prod = m.checked_mul(l0)?;
    let (q, r) = prod.divmod_right(m)?;
    if !r.is_zero() {
        return Err(DarbouxError::NoDarbouxTransform);
    }
    Ok(q)
}

/// Composes verified steps around `l0` into a chain; the empty list yields
/// the identity chain with composed operator 1.
pub fn compose(l0: &SuperOp, steps: Vec<DarbouxStep>) -> Result<DarbouxChain, DarbouxError> {
    let ctx = l0.ctx();
    let mut composed = SuperOp::one(ctx);
    let mut cur = l0.clone();
    for (i, s) in steps.iter().enumerate() {
        if s.source != cur {
            return Err(DarbouxError::IncompatibleSteps(i));
        }
        composed = s.m_op.checked_mul(&composed)?;
        cur = s.target.clone();
    }
    if composed.checked_mul(l0)? != cur.checked_mul(&composed)? {
        return Err(DarbouxError::Internal("chain intertwining failed"));
    }
    Ok(DarbouxChain {
        source: l0.clone(),
        target: cur,
        steps,
        composed,
    })
}

/// Builds a chain by applying [`elementary`] with each supplied function in
/// turn; each one must be an eigenfunction of the operator produced by the
/// previous step.
pub fn chain_from_eigenfunctions(
    l0: &SuperOp,
    phis: &[SuperFn],
) -> Result<DarbouxChain, DarbouxError> {
    let mut steps = Vec::with_capacity(phis.len());
    let mut cur = l0.clone();
    for (i, phi) in phis.iter().enumerate() {
        let step = elementary(&cur, phi).map_err(|e| DarbouxError::ChainStep {
            index: i,
            source: Box::new(e),
        })?;
        cur = step.target.clone();
        steps.push(step);
    }
    compose(l0, steps)
}

fn first_even_invertible(elems: &[SuperFn]) -> Option<SuperFn> {
    elems
        .iter()
        .find(|e| e.is_even() && e.is_invertible())
        .cloned()
}

/// Factorizes a Darboux transformation of order `r` into `r` elementary
/// steps. The kernel of `M` is computed when the coefficients are rational
/// constants and must be supplied otherwise. Each round takes an even
/// invertible eigenfunction of the current operator inside the current
/// kernel (the intertwining relation makes the kernel invariant), divides
/// `M = M' M_phi`, and pushes the kernel forward through `M_phi`.
pub fn factorize_chain(
    l0: &SuperOp,
    m: &SuperOp,
    kb: Option<KernelBasis>,
) -> Result<DarbouxChain, DarbouxError> {
    if !l0.is_monic() || !m.is_monic() {
        return Err(DarbouxError::NotMonic);
    }
    let r = m.order()?;
    let expected_target = transform(l0, m)?;
    if r == 0 {
        return compose(l0, Vec::new());
    }
    let kb = match kb {
        Some(kb) => {
            if kb.op() != m {
                return Err(SuperOpError::KernelMismatch.into());
            }
            // re-certify: the basis type guarantees the invariants, but the
            // dimension must be full for the induction to go through
            let expected = kernel::expected_kernel_dim(r)?;
            if kb.dims() != expected {
                return Err(DarbouxError::KernelDeficient {
                    expected,
                    got: kb.dims(),
                });
            }
            kb
        }
        None => match kernel::solve_kernel_constant(m) {
            Ok(kb) => kb,
            Err(KernelError::NonConstantCoefficients) => {
                // first-order operators admit a direct solve
                if r == 1 {
                    kernel::solve_kernel_first_order(m)
                        .map_err(|_| DarbouxError::MissingKernel)?
                } else {
                    return Err(DarbouxError::MissingKernel);
                }
            }
            Err(e) => return Err(e.into()),
        },
    };

    let mut steps: Vec<DarbouxStep> = Vec::with_capacity(r);
    let mut cur_l = l0.clone();
    let mut cur_m = m.clone();
    let mut cur_kb = kb;
    while let Some(order) = cur_m.deg() {
        if order == 0 {
            break;
        }
        let phi = if order == 1 {
            match first_even_invertible(cur_kb.elems()) {
                Some(phi) => phi,
                None => return Err(DarbouxError::NoEigenvector { partial: steps }),
            }
        } else {
            let im = kernel::induced_matrix(&cur_l, &cur_kb)?;
            match kernel::eigen_even_invertible(&im, &cur_kb) {
                Ok((phi, _lambda)) => phi,
                Err(KernelError::NoEigenvector) => {
                    return Err(DarbouxError::NoEigenvector { partial: steps })
                }
                Err(e) => return Err(e.into()),
            }
        };
        let step = elementary(&cur_l, &phi)?;
        let (m_next, rem) = cur_m.divmod_right(step.m_op())?;
        if !rem.is_zero() {
            return Err(DarbouxError::Internal("factor split left a remainder"));
        }
        if m_next.deg().is_some_and(|d| d > 0) {
            let mut images = Vec::new();
            for e in cur_kb.elems() {
                let img = step.m_op().apply(e)?;
                if !img.is_zero() {
                    images.push(img);
                }
            }
            let pruned = kernel::select_free_basis(&m_next, &images);
            let next_kb = kernel::verify_kernel(&m_next, &pruned)?;
            let expected = kernel::expected_kernel_dim(order - 1)?;
            if next_kb.dims() != expected {
                return Err(DarbouxError::KernelPushforwardDeficient {
                    expected,
                    got: next_kb.dims(),
                });
            }
            cur_kb = next_kb;
        }
        cur_l = step.target().clone();
        cur_m = m_next;
        steps.push(step);
    }
    let chain = compose(l0, steps)?;
    if chain.composed != *m {
        return Err(DarbouxError::Internal("composed operator differs from input"));
    }
    if chain.target != expected_target {
        return Err(DarbouxError::Internal("final operator differs from transform"));
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcring::{OddContext, Rat, ScalarFn, ScalarFrac};

    fn ctx0() -> OddContext {
        OddContext::new(0)
    }

    fn ctx1() -> OddContext {
        OddContext::new(1)
    }

    fn rat(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn d2(c: OddContext) -> SuperOp {
        SuperOp::d_pow(c, 2)
    }

    fn d_minus_xi(c: OddContext) -> SuperOp {
        SuperOp::from_coeffs(c, vec![SuperFn::xi(c).neg(), SuperFn::one(c)]).unwrap()
    }

    fn xi_over_x(c: OddContext) -> SuperFn {
        SuperFn::mono(
            c,
            crate::funcring::GrassmannMono::xi(),
            ScalarFrac::new(ScalarFn::one(), ScalarFn::x()).unwrap(),
        )
        .unwrap()
    }

    fn one_plus_xi_theta(c: OddContext) -> SuperFn {
        &SuperFn::one(c) + &(&SuperFn::xi(c) * &SuperFn::theta(c, 1).unwrap())
    }

    #[test]
    fn eigencheck_examples() {
        let c = ctx0();
        assert_eq!(
            eigencheck(&d2(c), &SuperFn::exp(c, rat(3))).unwrap(),
            SuperConst::rat(c, rat(3))
        );
        let c1 = ctx1();
        assert_eq!(
            eigencheck(&SuperOp::d(c1), &one_plus_xi_theta(c1)).unwrap(),
            SuperConst::theta(c1, 1).unwrap()
        );
        assert!(matches!(
            eigencheck(&d2(c), &SuperFn::x(c)),
            Err(DarbouxError::NotEigenfunction)
        ));
    }

    #[test]
    fn elementary_exponential() {
        let c = ctx0();
        let step = elementary(&d2(c), &SuperFn::exp(c, rat(1))).unwrap();
        assert_eq!(step.m_op(), &d_minus_xi(c));
        assert_eq!(step.lambda(), &SuperConst::rat(c, rat(1)));
        assert_eq!(step.target(), &d2(c));
    }

    #[test]
    fn elementary_with_rational_coefficients() {
        // L0 = D^2 + (xi/x) D - 1/x, phi = x -> (D - xi/x, 0, D^2 - (xi/x) D)
        let c = ctx0();
        let inv_x =
            SuperFn::from_frac(c, ScalarFrac::new(ScalarFn::one(), ScalarFn::x()).unwrap());
        let l0 = SuperOp::from_coeffs(c, vec![inv_x.neg(), xi_over_x(c), SuperFn::one(c)]).unwrap();
        let step = elementary(&l0, &SuperFn::x(c)).unwrap();
        let m_expect =
            SuperOp::from_coeffs(c, vec![xi_over_x(c).neg(), SuperFn::one(c)]).unwrap();
        assert_eq!(step.m_op(), &m_expect);
        assert!(step.lambda().is_zero());
        let l1_expect = SuperOp::from_coeffs(
            c,
            vec![SuperFn::zero(c), xi_over_x(c).neg(), SuperFn::one(c)],
        )
        .unwrap();
        assert_eq!(step.target(), &l1_expect);
    }

    #[test]
    fn elementary_with_odd_eigenvalue() {
        let c = ctx1();
        let step = elementary(&SuperOp::d(c), &one_plus_xi_theta(c)).unwrap();
        let m_expect = SuperOp::from_coeffs(
            c,
            vec![SuperFn::theta(c, 1).unwrap().neg(), SuperFn::one(c)],
        )
        .unwrap();
        assert_eq!(step.m_op(), &m_expect);
        assert_eq!(step.lambda(), &SuperConst::theta(c, 1).unwrap());
        // the odd eigenvalue anticommutes with M_phi, so the target picks up
        // the twisted constant: D - 2*theta1, the unique intertwining target
        let l1_expect = SuperOp::from_coeffs(
            c,
            vec![
                SuperFn::theta(c, 1).unwrap().scale_rat(&rat(-2)),
                SuperFn::one(c),
            ],
        )
        .unwrap();
        assert_eq!(step.target(), &l1_expect);
        assert_eq!(transform(&SuperOp::d(c), step.m_op()).unwrap(), l1_expect);
    }

    #[test]
    fn transform_examples() {
        let c = ctx0();
        assert_eq!(transform(&d2(c), &d_minus_xi(c)).unwrap(), d2(c));

        let inv_x =
            SuperFn::from_frac(c, ScalarFrac::new(ScalarFn::one(), ScalarFn::x()).unwrap());
        let l0 = SuperOp::from_coeffs(c, vec![inv_x.neg(), xi_over_x(c), SuperFn::one(c)]).unwrap();
        let m = SuperOp::from_coeffs(c, vec![xi_over_x(c).neg(), SuperFn::one(c)]).unwrap();
        let l1 = SuperOp::from_coeffs(
            c,
            vec![SuperFn::zero(c), xi_over_x(c).neg(), SuperFn::one(c)],
        )
        .unwrap();
        assert_eq!(transform(&l0, &m).unwrap(), l1);

        // order-2 intertwiner (D - 4 xi)(D - xi) = D^2 - 3 xi D - 1 fixes D^2
        let m2 = SuperOp::from_coeffs(
            c,
            vec![
                SuperFn::one(c).neg(),
                SuperFn::xi(c).scale_rat(&rat(-3)),
                SuperFn::one(c),
            ],
        )
        .unwrap();
        assert_eq!(transform(&d2(c), &m2).unwrap(), d2(c));
    }

    #[test]
    fn transform_rejects_non_intertwiner() {
        let c = ctx0();
        // M = D - x*xi: remainder of the Lemma division is x, not a constant
        let xxi = &SuperFn::x(c) * &SuperFn::xi(c);
        let m = SuperOp::from_coeffs(c, vec![xxi.neg(), SuperFn::one(c)]).unwrap();
        assert!(matches!(
            transform(&d2(c), &m),
            Err(DarbouxError::NoDarbouxTransform)
        ));
    }

    #[test]
    fn compose_examples() {
        let c = ctx0();
        let chain = compose(&d2(c), Vec::new()).unwrap();
        assert!(chain.composed().is_one());
        assert_eq!(chain.target(), &d2(c));

        let step = elementary(&d2(c), &SuperFn::exp(c, rat(1))).unwrap();
        let m1 = step.m_op().clone();
        let chain = compose(&d2(c), vec![step]).unwrap();
        assert_eq!(chain.composed(), &m1);

        let chain = chain_from_eigenfunctions(
            &d2(c),
            &[SuperFn::exp(c, rat(1)), SuperFn::exp(c, rat(4))],
        )
        .unwrap();
        let m_expect = SuperOp::from_coeffs(
            c,
            vec![
                SuperFn::one(c).neg(),
                SuperFn::xi(c).scale_rat(&rat(-3)),
                SuperFn::one(c),
            ],
        )
        .unwrap();
        assert_eq!(chain.composed(), &m_expect);
        assert_eq!(chain.target(), &d2(c));
        assert_eq!(transform(&d2(c), chain.composed()).unwrap(), *chain.target());
    }

    #[test]
    fn compose_rejects_incompatible_steps() {
        let c = ctx0();
        let d2m1 = SuperOp::from_coeffs(
            c,
            vec![SuperFn::one(c).neg(), SuperFn::zero(c), SuperFn::one(c)],
        )
        .unwrap();
        let step = elementary(&d2m1, &SuperFn::exp(c, rat(1))).unwrap();
        assert!(matches!(
            compose(&d2(c), vec![step]),
            Err(DarbouxError::IncompatibleSteps(0))
        ));
    }

    #[test]
    fn factorize_rejects_deficient_or_foreign_kernels() {
        let c = ctx0();
        let m = SuperOp::from_coeffs(
            c,
            vec![
                SuperFn::one(c).neg(),
                SuperFn::xi(c).scale_rat(&rat(-3)),
                SuperFn::one(c),
            ],
        )
        .unwrap();
        // under-dimensioned kernel basis
        let kb = kernel::verify_kernel(&m, &[SuperFn::exp(c, rat(1))]).unwrap();
        assert!(matches!(
            factorize_chain(&d2(c), &m, Some(kb)),
            Err(DarbouxError::KernelDeficient { .. })
        ));
        // kernel basis of a different operator
        let kb = kernel::solve_kernel_constant(&d2(c)).unwrap();
        assert!(matches!(
            factorize_chain(&d2(c), &m, Some(kb)),
            Err(DarbouxError::Op(SuperOpError::KernelMismatch))
        ));
        // M = D - 1 intertwines D^2 with itself but its kernel has no
        // parity-homogeneous basis over this function class
        let m = SuperOp::from_coeffs(c, vec![SuperFn::one(c).neg(), SuperFn::one(c)]).unwrap();
        assert_eq!(transform(&d2(c), &m).unwrap(), d2(c));
        assert!(factorize_chain(&d2(c), &m, None).is_err());
    }

    #[test]
    fn chain_rejects_non_eigenfunction() {
        let c = ctx0();
        let err = chain_from_eigenfunctions(&d2(c), &[SuperFn::x(c)]).unwrap_err();
        match err {
            DarbouxError::ChainStep { index, source } => {
                assert_eq!(index, 0);
                assert!(matches!(*source, DarbouxError::NotEigenfunction));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn factorize_first_order() {
        let c = ctx0();
        let chain = factorize_chain(&d2(c), &d_minus_xi(c), None).unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!(chain.composed(), &d_minus_xi(c));
        assert_eq!(chain.steps()[0].lambda(), &SuperConst::rat(c, rat(1)));
        // the recovered eigenfunction spans the kernel of D - xi
        assert!(d_minus_xi(c)
            .apply(chain.steps()[0].phi())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn factorize_order_two() {
        let c = ctx0();
        let m = SuperOp::from_coeffs(
            c,
            vec![
                SuperFn::one(c).neg(),
                SuperFn::xi(c).scale_rat(&rat(-3)),
                SuperFn::one(c),
            ],
        )
        .unwrap();
        let ex = SuperFn::exp(c, rat(1));
        let xie4 = &SuperFn::xi(c) * &SuperFn::exp(c, rat(4));
        let kb = kernel::verify_kernel(&m, &[ex.clone(), xie4]).unwrap();
        let chain = factorize_chain(&d2(c), &m, Some(kb)).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain.composed(), &m);
        assert_eq!(chain.target(), &d2(c));
        assert_eq!(chain.steps()[0].phi(), &ex);
        assert_eq!(chain.steps()[0].lambda(), &SuperConst::rat(c, rat(1)));
        let m2_expect = SuperOp::from_coeffs(
            c,
            vec![SuperFn::xi(c).scale_rat(&rat(-4)), SuperFn::one(c)],
        )
        .unwrap();
        assert_eq!(chain.steps()[1].m_op(), &m2_expect);
        assert_eq!(chain.steps()[1].lambda(), &SuperConst::rat(c, rat(4)));
    }

    #[test]
    fn factorize_odd_constant_step() {
        let c = ctx1();
        let phi = one_plus_xi_theta(c);
        let m = SuperOp::from_coeffs(
            c,
            vec![SuperFn::theta(c, 1).unwrap().neg(), SuperFn::one(c)],
        )
        .unwrap();
        let kb = kernel::verify_kernel(&m, std::slice::from_ref(&phi)).unwrap();
        let chain = factorize_chain(&SuperOp::d(c), &m, Some(kb)).unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!(chain.steps()[0].phi(), &phi);
        assert_eq!(chain.steps()[0].lambda(), &SuperConst::theta(c, 1).unwrap());
    }

    #[test]
    fn factorize_with_two_odd_constants() {
        // two-step chain on D with distinct odd constants: the recovered
        // second step carries the mixed odd eigenvalue -2*theta1 + 2*theta2
        let c = crate::funcring::OddContext::new(2);
        let phi1 = one_plus_xi_theta(c);
        let phi2 = &SuperFn::one(c)
            + &(&SuperFn::xi(c) * &SuperFn::theta(c, 2).unwrap()).scale_rat(&rat(2));
        let chain = chain_from_eigenfunctions(&SuperOp::d(c), &[phi1.clone(), phi2]).unwrap();
        let m = chain.composed().clone();

        // kernel of M: 1 + xi*theta1 and xi/2 - (x/2) theta1 + x theta2
        //              + x xi theta1 theta2 (checked by application below)
        let x = SuperFn::x(c);
        let t1 = SuperFn::theta(c, 1).unwrap();
        let t2 = SuperFn::theta(c, 2).unwrap();
        let odd = &(&(&SuperFn::xi(c).scale_rat(&rat(1)) - &(&x * &t1)).scale_rat(&Rat::new(1.into(), 2.into()))
            + &(&x * &t2))
            + &(&(&x * &SuperFn::xi(c)) * &(&t1 * &t2));
        assert!(m.apply(&odd).unwrap().is_zero());
        let kb = kernel::verify_kernel(&m, &[phi1.clone(), odd]).unwrap();
        assert!(kb.is_full());

        let redone = factorize_chain(&SuperOp::d(c), &m, Some(kb)).unwrap();
        assert_eq!(redone.len(), 2);
        assert_eq!(redone.composed(), &m);
        assert_eq!(redone.target(), chain.target());
        assert_eq!(redone.steps()[0].phi(), &phi1);
        let lambda2 = redone.steps()[1].lambda();
        let expect = SuperConst::theta(c, 1)
            .unwrap()
            .scale(&rat(-2))
            .add(&SuperConst::theta(c, 2).unwrap().scale(&rat(2)));
        assert_eq!(lambda2, &expect);
    }

    #[test]
    fn factorize_requires_kernel_for_non_constant_m() {
        let c = ctx0();
        assert!(factorize_chain(&d2(c), &d_minus_xi(c), None).is_ok());
        // order-2 composed operator has a xi coefficient: kernel required
        let m = SuperOp::from_coeffs(
            c,
            vec![
                SuperFn::one(c).neg(),
                SuperFn::xi(c).scale_rat(&rat(-3)),
                SuperFn::one(c),
            ],
        )
        .unwrap();
        assert!(matches!(
            factorize_chain(&d2(c), &m, None),
            Err(DarbouxError::MissingKernel)
        ));
    }
}
