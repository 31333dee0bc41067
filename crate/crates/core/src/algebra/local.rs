//! Germs of rational functions in one variable that are regular at a base
//! point, i.e. elements of the local ring `ℚ(i)[ζ]` localized at `ζ = ξ`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::ring::{forward_owned_ops, ring_via_ops, Domain};
use super::scalar::Scalar;
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// `numerator / denominator` in lowest terms with a monic denominator that
/// does not vanish at `base`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointedRational {
    num: UPoly,
    den: UPoly,
    base: Scalar,
}

impl PointedRational {
    pub fn new(num: UPoly, den: UPoly, base: Scalar) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        let f = Self::reduced(num, den, base);
        if f.den.eval(&f.base).is_zero() {
            return Err(Error::Precondition(format!("{} is not regular at {}", f, f.base)));
        }
        Ok(f)
    }

    fn reduced(num: UPoly, den: UPoly, base: Scalar) -> Self {
        if num.is_zero() {
            return PointedRational { num, den: UPoly::one(), base };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num.divrem(&g).0, den.divrem(&g).0);
        let l = den.lead().cloned().expect("nonzero denominator");
        if !l.is_one() {
            let li = l.inv().expect("nonzero");
            num = num.scale(&li);
            den = den.scale(&li);
        }
        PointedRational { num, den, base }
    }

    pub fn from_poly(p: UPoly, base: Scalar) -> Self {
        PointedRational { num: p, den: UPoly::one(), base }
    }

    pub fn constant(c: Scalar, base: Scalar) -> Self {
        PointedRational::from_poly(UPoly::constant(c), base)
    }

    pub fn zero(base: Scalar) -> Self {
        PointedRational::from_poly(UPoly::zero(), base)
    }

    pub fn one(base: Scalar) -> Self {
        PointedRational::from_poly(UPoly::one(), base)
    }

    /// `(ζ - ξ)^k` at base `ξ`.
    pub fn local_power(base: Scalar, k: u32) -> Self {
        let lin = UPoly::linear(-&base, Scalar::one());
        PointedRational::from_poly(lin.pow(k), base)
    }

    pub fn numerator(&self) -> &UPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UPoly {
        &self.den
    }

    pub fn base(&self) -> &Scalar {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn value_at_base(&self) -> Scalar {
        &self.num.eval(&self.base) / &self.den.eval(&self.base)
    }

    /// Value at `x`, if the denominator does not vanish there.
    pub fn eval(&self, x: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| &self.num.eval(x) / &d)
    }

    /// Order of vanishing at the base point; `None` means infinite order
    /// (the zero germ).
    pub fn vanishing_order(&self) -> Option<u32> {
        self.num.order_at(&self.base)
    }

    pub fn is_unit(&self) -> bool {
        self.vanishing_order() == Some(0)
    }

    /// Quotient in the local ring: exists iff `d ≠ 0` and
    /// `ord(d) ≤ ord(self)`.
    pub fn checked_div(&self, d: &PointedRational) -> Option<PointedRational> {
        self.check_base(d);
        let od = d.vanishing_order()?;
        if let Some(os) = self.vanishing_order() {
            if os < od {
                return None;
            }
        }
        let f = Self::reduced(&self.num * &d.den, &self.den * &d.num, self.base.clone());
        debug_assert!(!f.den.eval(&f.base).is_zero());
        Some(f)
    }

    pub fn inv(&self) -> Option<PointedRational> {
        PointedRational::one(self.base.clone()).checked_div(self)
    }

    fn check_base(&self, o: &PointedRational) {
        assert_eq!(self.base, o.base, "germs at different base points");
    }

    fn zero_like(&self) -> Self {
        PointedRational::zero(self.base.clone())
    }

    fn one_like(&self) -> Self {
        PointedRational::one(self.base.clone())
    }
}

impl<'a> Add<&'a PointedRational> for &'a PointedRational {
    type Output = PointedRational;
    fn add(self, o: &PointedRational) -> PointedRational {
        self.check_base(o);
        if self.den == o.den {
            return PointedRational::reduced(&self.num + &o.num, self.den.clone(), self.base.clone());
        }
        PointedRational::reduced(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den, self.base.clone())
    }
}

impl<'a> Sub<&'a PointedRational> for &'a PointedRational {
    type Output = PointedRational;
    fn sub(self, o: &PointedRational) -> PointedRational {
        self + &(-o)
    }
}

impl<'a> Mul<&'a PointedRational> for &'a PointedRational {
    type Output = PointedRational;
    fn mul(self, o: &PointedRational) -> PointedRational {
        self.check_base(o);
        PointedRational::reduced(&self.num * &o.num, &self.den * &o.den, self.base.clone())
    }
}

impl Neg for &PointedRational {
    type Output = PointedRational;
    fn neg(self) -> PointedRational {
        PointedRational { num: -&self.num, den: self.den.clone(), base: self.base.clone() }
    }
}

forward_owned_ops!(PointedRational);
ring_via_ops!(PointedRational);

impl Domain for PointedRational {
    fn div_exact(&self, d: &Self) -> Option<Self> {
        self.checked_div(d)
    }
}

impl fmt::Display for PointedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num.fmt_var("z"))
        } else {
            write!(f, "({})/({})", self.num.fmt_var("z"), self.den.fmt_var("z"))
        }
    }
}

impl fmt::Debug for PointedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}@{}", self.base)
    }
}
