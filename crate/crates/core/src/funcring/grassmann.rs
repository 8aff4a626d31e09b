//! Grassmann monomials in the odd generators `xi, theta_1, ..., theta_N`,
//! encoded as a bitmask with `xi` at bit 0 and `theta_k` at bit `k`. The
//! canonical generator order inside a monomial is `xi` first, then thetas by
//! ascending index; the derived `Ord` on the mask gives the deterministic
//! monomial order used everywhere.

/// Product of distinct odd generators in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GrassmannMono(u64);

pub const MAX_THETAS: usize = 63;

impl GrassmannMono {
    pub const EMPTY: GrassmannMono = GrassmannMono(0);

    pub fn xi() -> Self {
        GrassmannMono(1)
    }

    /// `theta_k` with 1-based index `k`.
    pub fn theta(k: usize) -> Self {
        assert!((1..=MAX_THETAS).contains(&k), "theta index out of range");
        GrassmannMono(1 << k)
    }

    pub fn from_parts(has_xi: bool, thetas: &[usize]) -> Self {
        let mut m = if has_xi { 1u64 } else { 0 };
        for &k in thetas {
            assert!((1..=MAX_THETAS).contains(&k));
            m |= 1 << k;
        }
        GrassmannMono(m)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn has_xi(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn thetas(self) -> impl Iterator<Item = usize> {
        let bits = self.0 >> 1;
        (0..MAX_THETAS).filter(move |k| bits & (1 << k) != 0).map(|k| k + 1)
    }

    pub fn max_theta(self) -> usize {
        (64 - (self.0 >> 1).leading_zeros()) as usize
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn theta_degree(self) -> u32 {
        (self.0 >> 1).count_ones()
    }

    /// 0 for even, 1 for odd.
    pub fn parity(self) -> u8 {
        (self.degree() % 2) as u8
    }

    pub fn without_xi(self) -> Self {
        GrassmannMono(self.0 & !1)
    }

    pub fn with_xi(self) -> Self {
        GrassmannMono(self.0 | 1)
    }

    pub fn contains(self, other: Self) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn difference(self, other: Self) -> Self {
        GrassmannMono(self.0 & !other.0)
    }

    /// Product with the Koszul sign, or `None` when a generator repeats.
    /// The sign counts the transpositions needed to merge the two canonical
    /// sequences into one. Partial, so not expressible as `std::ops::Mul`.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Option<(i8, Self)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut b = other.0;
        while b != 0 {
            let j = b.trailing_zeros();
            // generators of `self` above position j must move past this one
            inversions += (self.0 >> (j + 1)).count_ones();
            b &= b - 1;
        }
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((sign, GrassmannMono(self.0 | other.0)))
    }
}

impl std::fmt::Display for GrassmannMono {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        if self.has_xi() {
            write!(f, "xi")?;
            first = false;
        }
        for k in self.thetas() {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "theta{}", k)?;
            first = false;
        }
        Ok(())
    }
}
