//! Exact real-root counting with Sturm sequences.

use num_traits::{One, Signed, Zero};

use super::scalar::{Rational, Scalar};
use super::upoly::UPoly;

/// Sturm sequence of a polynomial with real coefficients.
pub fn sturm_sequence(p: &UPoly) -> Vec<UPoly> {
    debug_assert!(p.is_real(), "Sturm sequence needs real coefficients");
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].divrem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq
}

fn sign_changes(seq: &[UPoly], x: &Rational) -> usize {
    let xs = Scalar::real(x.clone());
    let signs: Vec<i8> = seq
        .iter()
        .map(|q| {
            let v = q.eval(&xs);
            let re = v.re();
            if re.is_zero() {
                0
            } else if re.is_positive() {
                1
            } else {
                -1
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of a real polynomial in the closed
/// interval `[a, b]`.
pub fn count_real_roots(p: &UPoly, a: &Rational, b: &Rational) -> usize {
    assert!(!p.is_zero(), "root count of the zero polynomial");
    // with repeated roots every Sturm polynomial vanishes there
    let p = &p.squarefree_part();
    let mut extra = 0;
    let at = |x: &Rational| p.eval(&Scalar::real(x.clone())).is_zero();
    if at(a) {
        extra += 1;
    }
    if a == b {
        return extra;
    }
    let seq = sturm_sequence(p);
    // V(a) - V(b) counts roots in (a, b]; a root at `a` is excluded there.
    extra + sign_changes(&seq, a) - sign_changes(&seq, b)
}

/// Decides exactly whether `p(t) ≠ 0` for all real `t ∈ [0, 1]`, where `p`
/// may have Gaussian-rational coefficients. Works on the real polynomial
/// `p·p̄ = |p(t)|²`.
pub fn certify_nonvanishing_on_segment(p: &UPoly) -> bool {
    certify_nonvanishing_on(p, &Rational::zero(), &Rational::one())
}

pub fn certify_nonvanishing_on(p: &UPoly, a: &Rational, b: &Rational) -> bool {
    if p.is_zero() {
        return false;
    }
    let q = p * &p.conj();
    debug_assert!(q.is_real());
    count_real_roots(&q, a, b) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;

    #[test]
    fn segment_examples() {
        assert!(certify_nonvanishing_on_segment(&UPoly::one()));
        assert!(!certify_nonvanishing_on_segment(&UPoly::linear(Scalar::from_ratio(-1, 2), Scalar::one())));
        assert!(certify_nonvanishing_on_segment(&UPoly::from_i64(&[1, 0, 1])));
        assert!(!certify_nonvanishing_on_segment(&UPoly::zero()));
    }

    #[test]
    fn endpoint_roots_count() {
        assert!(!certify_nonvanishing_on_segment(&UPoly::x()));
        assert!(!certify_nonvanishing_on_segment(&UPoly::from_i64(&[-1, 1])));
    }

    #[test]
    fn complex_linear_factor() {
        // t - (1/2 + i/10) never vanishes for real t
        let p = UPoly::linear(-Scalar::new(rat(1, 2), rat(1, 10)), Scalar::one());
        assert!(certify_nonvanishing_on_segment(&p));
    }

    #[test]
    fn double_root_at_endpoint() {
        let p = &UPoly::x().pow(2) * &UPoly::from_i64(&[1, 2, 3]);
        assert_eq!(count_real_roots(&p, &Rational::zero(), &Rational::one()), 1);
        assert!(!certify_nonvanishing_on_segment(&UPoly::from_i64(&[0, -1, -2, -3])));
    }

    #[test]
    fn counts_multiple_roots_once() {
        let p = &UPoly::from_i64(&[-1, 3]).pow(2) * &UPoly::from_i64(&[-2, 3]);
        assert_eq!(count_real_roots(&p, &Rational::zero(), &Rational::one()), 2);
    }
}
