//! Exact rational numbers and polynomials in λ with rational coefficients.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{Context, Real};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rising factorial `(x)_n` of a rational.
pub fn rat_pochhammer(x: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

pub fn rat_factorial(n: u32) -> Rational {
    rat_pochhammer(&Rational::one(), n)
}

pub fn bigint_to_real(n: &BigInt, ctx: &Context) -> Real {
    let (sign, digits) = n.to_u64_digits();
    let mut acc = ctx.zero();
    for &d in digits.iter().rev() {
        acc = acc.ldexp(64);
        // split the limb so each piece is exact in an i64
        let hi = ctx.int((d >> 32) as i64).ldexp(32);
        let lo = ctx.int((d & 0xffff_ffff) as i64);
        acc = acc + hi + lo;
    }
    if sign == Sign::Minus {
        -acc
    } else {
        acc
    }
}

/// Value of a rational at context precision (one rounding in the division).
pub fn rational_to_real(r: &Rational, ctx: &Context) -> Real {
    let num = bigint_to_real(r.numer(), ctx);
    if r.denom().is_one() {
        return num;
    }
    num / bigint_to_real(r.denom(), ctx)
}

/// Polynomial in λ with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn zero() -> RatPoly {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> RatPoly {
        RatPoly::from_coeffs(vec![c])
    }

    /// `c·λ^deg`.
    pub fn monomial(c: Rational, deg: usize) -> RatPoly {
        let mut coeffs = vec![Rational::zero(); deg + 1];
        coeffs[deg] = c;
        RatPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> RatPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    /// Shorthand for tests and tables: integer numerator/denominator pairs.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> RatPoly {
        RatPoly::from_coeffs(pairs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn scale(&self, c: &Rational) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Exact value at a rational λ.
    pub fn eval_rational(&self, lambda: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * lambda + c;
        }
        acc
    }

    /// Horner evaluation at context precision.
    pub fn eval(&self, lambda: &Real, ctx: &Context) -> Real {
        let mut acc = ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * lambda + rational_to_real(c, ctx);
        }
        acc
    }

    /// Human-readable form in the variable `var`, e.g. `15/4 - 5λ + λ^2`.
    pub fn to_string_in(&self, var: &str) -> String {
        use core::fmt::Write;
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                let _ = write!(out, "{mag}");
            }
            match k {
                0 => {}
                1 => out.push_str(var),
                _ => {
                    let _ = write!(out, "{var}^{k}");
                }
            }
        }
        out
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("λ"))
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_arithmetic_and_display() {
        let p = RatPoly::from_pairs(&[(3, 2), (-1, 1)]);
        let q = &p * &p;
        assert_eq!(q, RatPoly::from_pairs(&[(9, 4), (-3, 1), (1, 1)]));
        assert_eq!(p.to_string_in("x"), "3/2 - x");
        assert_eq!(RatPoly::zero().degree(), None);
        assert_eq!((&p - &p), RatPoly::zero());
        assert_eq!(q.eval_rational(&rat(3, 2)), rat(0, 1));
    }

    #[test]
    fn big_rational_to_real() {
        let ctx = Context::new(40).unwrap();
        let f30 = rat_factorial(30);
        let x = rational_to_real(&f30, &ctx);
        let expect = ctx.parse("265252859812191058636308480000000").unwrap();
        assert_eq!(x, expect);
        let third = rational_to_real(&rat(-1, 3), &ctx);
        assert!((third * 3 + 1).abs() < ctx.eps());
    }
}
