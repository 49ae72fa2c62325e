//! Dense univariate polynomials, generic over the coefficient scalar.
//!
//! The kernel machinery instantiates these with `f64` for the analytic
//! layer and with `BigRational` for the exact coefficient-identity checks,
//! so the arithmetic here stays ring-generic via `num-traits`.

use num_traits::{One, Zero};
use std::ops::{Add, Mul, Neg, Sub};

use crate::Cplx;

/// Coefficient ring bound shared by every polynomial operation.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + std::fmt::Debug
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + std::fmt::Debug
{
}

/// Polynomial with coefficients stored lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![T::zero()] }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Poly<T> {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        let mut k = T::one();
        for c in &self.coeffs[1..] {
            out.push(c.clone() * k.clone());
            k = k + T::one();
        }
        Poly::new(out)
    }

    pub fn mul(&self, other: &Poly<T>) -> Poly<T> {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// b^2 - 4ac, the discriminant combination used by the kernel.
    pub fn discriminant_combination(a: &Poly<T>, b: &Poly<T>, c: &Poly<T>) -> Poly<T> {
        let four = T::one() + T::one() + T::one() + T::one();
        b.mul(b).sub(&a.mul(c).scale(four))
    }
}

impl Poly<f64> {
    /// Horner evaluation at a complex point.
    pub fn eval_complex(&self, x: Cplx) -> Cplx {
        let mut acc = Cplx::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Coefficients reversed: x^n * p(1/x) for n = deg p.
    pub fn reversed(&self) -> Poly<f64> {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Poly::new(coeffs)
    }

    /// Evaluate the rational function p/q at a sphere point, using the
    /// reversed polynomials at 1/x when |x| > 1 so poles and the point at
    /// infinity come out right.
    pub fn eval_ratio(p: &Poly<f64>, q: &Poly<f64>, x: crate::SpherePoint) -> crate::SpherePoint {
        use crate::SpherePoint;
        let (np, nq) = (p.degree() as i64, q.degree() as i64);
        match x {
            SpherePoint::Infinity => {
                // ratio of leading coefficients, degree-aware
                match np.cmp(&nq) {
                    std::cmp::Ordering::Greater => SpherePoint::Infinity,
                    std::cmp::Ordering::Less => SpherePoint::finite(0.0, 0.0),
                    std::cmp::Ordering::Equal => {
                        SpherePoint::classify(Cplx::new(p.leading() / q.leading(), 0.0))
                    }
                }
            }
            SpherePoint::Finite(v) if v.norm() > 1.0 => {
                let u = v.inv();
                let pn = p.reversed().eval_complex(u);
                let qn = q.reversed().eval_complex(u);
                // p(x)/q(x) = x^(np-nq) * p_rev(u)/q_rev(u)
                let qabs = qn.norm();
                if qabs < crate::tol::MOEBIUS_POLE * (1.0 + pn.norm()) {
                    return SpherePoint::Infinity;
                }
                let mut r = pn / qn;
                let mut k = np - nq;
                while k > 0 {
                    r *= v;
                    k -= 1;
                }
                while k < 0 {
                    r *= u;
                    k += 1;
                }
                SpherePoint::classify(r)
            }
            SpherePoint::Finite(v) => {
                let pn = p.eval_complex(v);
                let qn = q.eval_complex(v);
                if qn.norm() < crate::tol::MOEBIUS_POLE * (1.0 + pn.norm()) {
                    return SpherePoint::Infinity;
                }
                SpherePoint::classify(pn / qn)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SpherePoint;

    #[test]
    fn eval_and_derivative() {
        // p(x) = 1 + 2x + 3x^2
        let p = Poly::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(p.eval(2.0), 17.0);
        assert_eq!(p.derivative().coeffs(), &[2.0, 6.0]);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Poly::new(vec![1.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 0);
        let z: Poly<f64> = Poly::new(vec![]);
        assert!(z.is_zero());
    }

    #[test]
    fn discriminant_combination_matches_hand_expansion() {
        // a = x, b = 1 + x, c = 2: b^2 - 4ac = 1 + 2x + x^2 - 8x = 1 - 6x + x^2
        let a = Poly::new(vec![0.0, 1.0]);
        let b = Poly::new(vec![1.0, 1.0]);
        let c = Poly::new(vec![2.0]);
        let d = Poly::discriminant_combination(&a, &b, &c);
        assert_eq!(d.coeffs(), &[1.0, -6.0, 1.0]);
    }

    #[test]
    fn ratio_at_infinity_uses_degrees() {
        let p = Poly::new(vec![0.0, 0.0, 2.0]); // 2x^2
        let q = Poly::new(vec![1.0, 1.0]); // 1 + x
        assert!(Poly::eval_ratio(&p, &q, SpherePoint::Infinity).is_infinite());
        let r = Poly::eval_ratio(&q, &p, SpherePoint::Infinity);
        assert_eq!(r, SpherePoint::finite(0.0, 0.0));
        let s = Poly::eval_ratio(&p, &p, SpherePoint::Infinity);
        assert_eq!(s, SpherePoint::finite(1.0, 0.0));
    }

    #[test]
    fn ratio_large_argument_matches_direct() {
        let p = Poly::new(vec![1.0, -2.0, 0.5]);
        let q = Poly::new(vec![0.3, 1.0, 1.0]);
        let x = Cplx::new(37.5, -12.0);
        let direct = p.eval_complex(x) / q.eval_complex(x);
        match Poly::eval_ratio(&p, &q, SpherePoint::Finite(x)) {
            SpherePoint::Finite(v) => assert!((v - direct).norm() < 1e-12 * direct.norm()),
            SpherePoint::Infinity => panic!("unexpected infinity"),
        }
    }
}
