//! The scalar part of the coefficient ring: exponential polynomials
//! `sum p_i(x) e^{a_i x}` with rational frequencies, closed into a fraction
//! field so that the linear solves elsewhere in the crate never leave the
//! class.

use super::poly::{self, Rat};
use super::FuncRingError;
use num::{One, Signed, Zero};

/// A single term `p(x) * e^{freq*x}`; `poly` is dense ascending and its
/// leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpMono {
    pub freq: Rat,
    pub poly: Vec<Rat>,
}

impl ExpMono {
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn leading(&self) -> &Rat {
        self.poly.last().unwrap()
    }
}

/// A finite sum of [`ExpMono`] terms with pairwise distinct frequencies,
/// sorted by strictly increasing frequency. Zero is the empty sum.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScalarFn {
    terms: Vec<ExpMono>,
}

impl ScalarFn {
    pub fn zero() -> Self {
        ScalarFn { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::mono(Rat::zero(), vec![c])
    }

    pub fn x() -> Self {
        Self::mono(Rat::zero(), vec![Rat::zero(), Rat::one()])
    }

    pub fn x_pow(k: usize) -> Self {
        let mut p = vec![Rat::zero(); k + 1];
        p[k] = Rat::one();
        Self::mono(Rat::zero(), p)
    }

    pub fn exp(freq: Rat) -> Self {
        Self::mono(freq, vec![Rat::one()])
    }

    /// Single term `p(x) e^{freq*x}`; the polynomial is trimmed and a zero
    /// polynomial yields the zero function.
    pub fn mono(freq: Rat, mut p: Vec<Rat>) -> Self {
        poly::trim(&mut p);
        if p.is_empty() {
            return Self::zero();
        }
        ScalarFn {
            terms: vec![ExpMono { freq, poly: p }],
        }
    }

    pub fn from_terms(terms: Vec<ExpMono>) -> Self {
        let mut acc = Self::zero();
        for t in terms {
            acc = acc.add(&Self::mono(t.freq, t.poly));
        }
        acc
    }

    pub fn terms(&self) -> &[ExpMono] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self == &Self::one()
    }

    pub fn min_freq(&self) -> Option<&Rat> {
        self.terms.first().map(|t| &t.freq)
    }

    pub fn term_at_freq(&self, freq: &Rat) -> Option<&ExpMono> {
        self.terms
            .binary_search_by(|t| t.freq.cmp(freq))
            .ok()
            .map(|i| &self.terms[i])
    }

    pub fn neg(&self) -> Self {
        ScalarFn {
            terms: self
                .terms
                .iter()
                .map(|t| ExpMono {
                    freq: t.freq.clone(),
                    poly: poly::neg(&t.poly),
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out: Vec<ExpMono> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => {
                    if a.freq == b.freq {
                        let p = poly::add(&a.poly, &b.poly);
                        if !p.is_empty() {
                            out.push(ExpMono {
                                freq: a.freq.clone(),
                                poly: p,
                            });
                        }
                        i += 1;
                        j += 1;
                        continue;
                    }
                    a.freq < b.freq
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if take_left {
                out.push(self.terms[i].clone());
                i += 1;
            } else {
                out.push(other.terms[j].clone());
                j += 1;
            }
        }
        ScalarFn { terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        for a in &self.terms {
            for b in &other.terms {
                acc = acc.add(&Self::mono(
                    &a.freq + &b.freq,
                    poly::mul(&a.poly, &b.poly),
                ));
            }
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ScalarFn {
            terms: self
                .terms
                .iter()
                .map(|t| ExpMono {
                    freq: t.freq.clone(),
                    poly: poly::scale(&t.poly, c),
                })
                .collect(),
        }
    }

    /// Multiplies by `e^{delta*x}`.
    pub fn shift_freq(&self, delta: &Rat) -> Self {
        ScalarFn {
            terms: self
                .terms
                .iter()
                .map(|t| ExpMono {
                    freq: &t.freq + delta,
                    poly: t.poly.clone(),
                })
                .collect(),
        }
    }

    /// Derivative in `x`: `(p e^{ax})' = (p' + a p) e^{ax}`.
    pub fn d_x(&self) -> Self {
        let mut acc = Self::zero();
        for t in &self.terms {
            let p = poly::add(&poly::derivative(&t.poly), &poly::scale(&t.poly, &t.freq));
            acc = acc.add(&Self::mono(t.freq.clone(), p));
        }
        acc
    }

    /// Antiderivative with constant term 0; exponential polynomials are
    /// closed under integration (`q' + a q = p` solves termwise).
    pub fn antiderivative(&self) -> Self {
        let mut acc = Self::zero();
        for t in &self.terms {
            if t.freq.is_zero() {
                let mut q = vec![Rat::zero(); t.poly.len() + 1];
                for (k, c) in t.poly.iter().enumerate() {
                    q[k + 1] = c / Rat::from_integer((k as i64 + 1).into());
                }
                acc = acc.add(&Self::mono(Rat::zero(), q));
            } else {
                let mut q = vec![Rat::zero(); t.poly.len()];
                for k in (0..t.poly.len()).rev() {
                    let above = if k + 1 < q.len() {
                        q[k + 1].clone() * Rat::from_integer((k as i64 + 1).into())
                    } else {
                        Rat::zero()
                    };
                    q[k] = (&t.poly[k] - &above) / &t.freq;
                }
                acc = acc.add(&Self::mono(t.freq.clone(), q));
            }
        }
        acc
    }

    pub fn as_rat(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let t = &self.terms[0];
                if t.freq.is_zero() && t.poly.len() == 1 {
                    Some(t.poly[0].clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

/// A quotient of two [`ScalarFn`]s kept in a canonical representation:
/// the denominator is nonzero, its minimal frequency is 0, and its
/// lowest-frequency leading coefficient is 1. Remaining common polynomial
/// factors may survive; equality is decided by cross-multiplication.
#[derive(Debug, Clone)]
pub struct ScalarFrac {
    num: ScalarFn,
    den: ScalarFn,
}

impl ScalarFrac {
    pub fn new(num: ScalarFn, den: ScalarFn) -> Result<Self, FuncRingError> {
        if den.is_zero() {
            return Err(FuncRingError::DivisionByZero);
        }
        let mut f = ScalarFrac { num, den };
        f.normalize();
        Ok(f)
    }

    pub fn from_fn(f: ScalarFn) -> Self {
        let mut out = ScalarFrac {
            num: f,
            den: ScalarFn::one(),
        };
        out.normalize();
        out
    }

    pub fn from_rat(c: Rat) -> Self {
        Self::from_fn(ScalarFn::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_fn(ScalarFn::zero())
    }

    pub fn one() -> Self {
        Self::from_fn(ScalarFn::one())
    }

    pub fn num(&self) -> &ScalarFn {
        &self.num
    }

    pub fn den(&self) -> &ScalarFn {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = ScalarFn::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mu = self.den.min_freq().unwrap().clone();
        if !mu.is_zero() {
            let d = -mu;
            self.num = self.num.shift_freq(&d);
            self.den = self.den.shift_freq(&d);
        }
        self.reduce();
        let c = self.den.terms()[0].leading().clone();
        if !c.is_one() {
            let inv = c.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    /// Cancels a common polynomial factor when either side is a single
    /// exponential term. Full multi-term gcd cancellation is not attempted;
    /// equality does not rely on it.
    fn reduce(&mut self) {
        let g = if self.den.terms().len() == 1 {
            let mut g = self.den.terms()[0].poly.clone();
            for t in self.num.terms() {
                if g.len() <= 1 {
                    break;
                }
                g = poly::gcd(&g, &t.poly);
            }
            g
        } else if self.num.terms().len() == 1 {
            let mut g = self.num.terms()[0].poly.clone();
            for t in self.den.terms() {
                if g.len() <= 1 {
                    break;
                }
                g = poly::gcd(&g, &t.poly);
            }
            g
        } else {
            return;
        };
        if g.len() <= 1 {
            return;
        }
        let divide = |f: &ScalarFn| -> ScalarFn {
            ScalarFn::from_terms(
                f.terms()
                    .iter()
                    .map(|t| ExpMono {
                        freq: t.freq.clone(),
                        poly: poly::div_exact(&t.poly, &g).expect("gcd divides"),
                    })
                    .collect(),
            )
        };
        self.num = divide(&self.num);
        self.den = divide(&self.den);
    }

    pub fn neg(&self) -> Self {
        ScalarFrac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone())
                .expect("denominator nonzero");
        }
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::new(num, den).expect("denominators nonzero")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("denominators nonzero")
    }

    pub fn inv(&self) -> Result<Self, FuncRingError> {
        if self.is_zero() {
            return Err(FuncRingError::NotInvertible);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, FuncRingError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ScalarFrac {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Quotient-rule derivative in `x`.
    pub fn d_x(&self) -> Self {
        let num = self
            .num
            .d_x()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.d_x()));
        let den = self.den.mul(&self.den);
        Self::new(num, den).expect("denominator nonzero")
    }

    /// Exact rational value when the fraction is a constant function.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.num.is_zero() {
            return Some(Rat::zero());
        }
        if self.den.is_one() {
            return self.num.as_rat();
        }
        // constant iff num = c * den; the candidate comes from the
        // lowest-frequency leading coefficients (den's is 1 after
        // normalization)
        let nt = &self.num.terms()[0];
        let dt = &self.den.terms()[0];
        if nt.freq != dt.freq || nt.degree() != dt.degree() {
            return None;
        }
        let c = nt.leading() / dt.leading();
        if self.num == self.den.scale(&c) {
            Some(c)
        } else {
            None
        }
    }

    pub fn is_rational_const(&self) -> bool {
        self.as_rat().is_some()
    }

    /// Canonical sign used by the printer: the sign of the numerator's
    /// lowest-frequency leading coefficient.
    pub fn is_negative(&self) -> bool {
        self.num
            .terms()
            .first()
            .is_some_and(|t| t.leading().is_negative())
    }
}

impl PartialEq for ScalarFrac {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for ScalarFrac {}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn add_cancels() {
        let x = ScalarFn::x();
        assert!(x.add(&x.neg()).is_zero());
    }

    #[test]
    fn mul_exponentials() {
        let a = ScalarFn::exp(rat(2, 1));
        let b = ScalarFn::exp(rat(3, 1));
        assert_eq!(a.mul(&b), ScalarFn::exp(rat(5, 1)));
    }

    #[test]
    fn d_x_of_exp_poly() {
        // (x e^{3x})' = (1 + 3x) e^{3x}
        let f = ScalarFn::mono(rat(3, 1), vec![rat(0, 1), rat(1, 1)]);
        let expect = ScalarFn::mono(rat(3, 1), vec![rat(1, 1), rat(3, 1)]);
        assert_eq!(f.d_x(), expect);
    }

    #[test]
    fn frac_normalization_shifts_den_freq() {
        // 1 / e^{3x} = e^{-3x}
        let f = ScalarFrac::new(ScalarFn::one(), ScalarFn::exp(rat(3, 1))).unwrap();
        assert_eq!(f.num(), &ScalarFn::exp(rat(-3, 1)));
        assert!(f.den().is_one());
    }

    #[test]
    fn frac_equality_cross_multiplies() {
        // (x^2 - 1)/(x - 1) == (x + 1)/1
        let num = ScalarFn::mono(rat(0, 1), vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        let den = ScalarFn::mono(rat(0, 1), vec![rat(-1, 1), rat(1, 1)]);
        let a = ScalarFrac::new(num, den).unwrap();
        let b = ScalarFrac::from_fn(ScalarFn::mono(rat(0, 1), vec![rat(1, 1), rat(1, 1)]));
        assert_eq!(a, b);
    }

    #[test]
    fn frac_derivative_of_inverse_x() {
        // (1/x)' = -1/x^2
        let f = ScalarFrac::new(ScalarFn::one(), ScalarFn::x()).unwrap();
        let expect = ScalarFrac::new(
            ScalarFn::constant(rat(-1, 1)),
            ScalarFn::x_pow(2),
        )
        .unwrap();
        assert_eq!(f.d_x(), expect);
    }

    #[test]
    fn frac_constant_detection() {
        let x = ScalarFn::x();
        let two_x = x.scale(&rat(2, 1));
        let f = ScalarFrac::new(two_x, x).unwrap();
        assert_eq!(f.as_rat(), Some(rat(2, 1)));
        let g = ScalarFrac::new(ScalarFn::one(), ScalarFn::x()).unwrap();
        assert_eq!(g.as_rat(), None);
    }

    #[test]
    fn antiderivative_inverts_d_x() {
        // (3x^2 + 1) + (x - 2) e^{-2x}
        let f = ScalarFn::mono(rat(0, 1), vec![rat(1, 1), rat(0, 1), rat(3, 1)])
            .add(&ScalarFn::mono(rat(-2, 1), vec![rat(-2, 1), rat(1, 1)]));
        assert_eq!(f.antiderivative().d_x(), f);
    }

    #[test]
    fn frac_inverse_roundtrip() {
        let f = ScalarFrac::new(
            ScalarFn::x().add(&ScalarFn::one()),
            ScalarFn::exp(rat(1, 2)),
        )
        .unwrap();
        assert!(f.mul(&f.inv().unwrap()).is_one());
    }
}
