use std::fmt;

/// Minimal commutative-ring interface used by the generic elimination
/// routines. Elements that need a context (polynomials over a variable
/// list, germs at a base point) produce zero and one from an existing value.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

/// Integral domain with exact division (`None` when the quotient does not
/// exist in the ring). Needed by fraction-free elimination.
pub trait Domain: Ring {
    fn div_exact(&self, d: &Self) -> Option<Self>;
}

/// Derives owned/borrowed operator combinations from the `&T op &T` impls.
macro_rules! forward_owned_ops {
    ($t:ty) => {
        impl std::ops::Add<$t> for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl std::ops::Add<&$t> for $t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                &self + o
            }
        }
        impl std::ops::Sub<$t> for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl std::ops::Sub<&$t> for $t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                &self - o
            }
        }
        impl std::ops::Mul<$t> for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl std::ops::Mul<&$t> for $t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                &self * o
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
pub(crate) use forward_owned_ops;

/// Implements [`Ring`] for a type that already has `&T op &T` operators
/// and inherent `zero_like`/`one_like`/`is_zero`.
macro_rules! ring_via_ops {
    ($t:ty) => {
        impl $crate::algebra::ring::Ring for $t {
            fn zero_like(&self) -> Self {
                <$t>::zero_like(self)
            }
            fn one_like(&self) -> Self {
                <$t>::one_like(self)
            }
            fn is_zero(&self) -> bool {
                <$t>::is_zero(self)
            }
            fn add_ref(&self, o: &Self) -> Self {
                self + o
            }
            fn sub_ref(&self, o: &Self) -> Self {
                self - o
            }
            fn mul_ref(&self, o: &Self) -> Self {
                self * o
            }
            fn neg_ref(&self) -> Self {
                -self
            }
        }
    };
}
pub(crate) use ring_via_ops;
