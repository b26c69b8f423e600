//! Working-precision arithmetic.
//!
//! Every top-level computation runs under one [`Context`], which fixes the
//! number of decimal digits the caller wants plus a number of guard digits
//! used internally. Values ([`Real`], [`Complex`]) remember the binary
//! precision they were created with; binary operations run at the larger of
//! the two operand precisions, and transcendental functions run at the
//! precision of the context passed to them.

use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::RefCell;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::{Error, Result};
use crate::quadrature::NodeCache;
use crate::specfun::BernoulliTable;

const RM: RoundingMode = RoundingMode::ToEven;

/// Smallest accepted working precision, in decimal digits.
pub const MIN_DIGITS: u32 = 16;
/// Guard digits added on top of the requested precision by default.
pub const DEFAULT_GUARD: u32 = 10;

/// Caches shared by every context derived from the same root context.
pub(crate) struct Cache {
    pub bernoulli: BernoulliTable,
    pub nodes: NodeCache,
    pub euler: Option<Real>,
    /// Stirling coefficients and the precision they were computed at.
    pub stirling: Option<(usize, Vec<Real>)>,
}

/// Precision context. One per top-level call.
///
/// A context is cheap to clone; clones share the constant caches. It is not
/// `Sync`: concurrent evaluations each build their own context.
#[derive(Clone)]
pub struct Context {
    digits: u32,
    guard: u32,
    bits: usize,
    consts: Rc<RefCell<Consts>>,
    pub(crate) cache: Rc<RefCell<Cache>>,
}

fn digits_to_bits(digits: u32) -> usize {
    // log2(10) = 3.32193 (rounded up), then a word of slack
    let raw = (digits as usize * 33220).div_ceil(10000) + 8;
    raw.div_ceil(64) * 64
}

impl Context {
    /// Context with `decimal_digits` of requested precision and the default guard.
    pub fn new(decimal_digits: u32) -> Result<Self> {
        Self::with_guard(decimal_digits, DEFAULT_GUARD)
    }

    pub fn with_guard(decimal_digits: u32, guard_digits: u32) -> Result<Self> {
        if decimal_digits < MIN_DIGITS {
            return Err(Error::PrecisionTooLow {
                digits: decimal_digits,
                min: MIN_DIGITS,
            });
        }
        let consts = Consts::new().map_err(|e| Error::Domain(alloc::format!("{e:?}")))?;
        Ok(Context {
            digits: decimal_digits,
            guard: guard_digits,
            bits: digits_to_bits(decimal_digits + guard_digits),
            consts: Rc::new(RefCell::new(consts)),
            cache: Rc::new(RefCell::new(Cache {
                bernoulli: BernoulliTable::new(),
                nodes: NodeCache::default(),
                euler: None,
                stirling: None,
            })),
        })
    }

    /// A context carrying `extra` more decimal digits, sharing this context's caches.
    pub fn widened(&self, extra: u32) -> Context {
        Context {
            digits: self.digits + extra,
            guard: self.guard,
            bits: digits_to_bits(self.digits + extra + self.guard),
            consts: Rc::clone(&self.consts),
            cache: Rc::clone(&self.cache),
        }
    }

    /// Requested decimal digits.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard
    }

    /// Digits actually carried by every operation.
    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard
    }

    /// Binary precision of values created by this context.
    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn zero(&self) -> Real {
        Real::from_big(BigFloat::from_i64(0, self.bits), self.bits)
    }

    pub fn one(&self) -> Real {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Real {
        Real::from_big(BigFloat::from_i64(n, self.bits), self.bits)
    }

    /// Exact value of the rational `num/den`, rounded once.
    pub fn ratio(&self, num: i64, den: i64) -> Real {
        self.int(num) / self.int(den)
    }

    /// The binary value of `x`, exactly.
    pub fn from_f64(&self, x: f64) -> Real {
        Real::from_big(BigFloat::from_f64(x, self.bits), self.bits)
    }

    /// Parse a decimal literal such as `0.7`, `-2`, or `1.5e-3`.
    pub fn parse(&self, text: &str) -> Result<Real> {
        let v = BigFloat::parse(text.trim(), Radix::Dec, self.bits, RM, &mut self.consts.borrow_mut());
        if v.is_nan() || v.is_inf() {
            return Err(Error::Parse(alloc::format!("not a finite number: {text:?}")));
        }
        Ok(Real::from_big(v, self.bits))
    }

    pub fn pi(&self) -> Real {
        let v = self.consts.borrow_mut().pi(self.bits, RM);
        Real::from_big(v, self.bits)
    }

    pub fn ln2(&self) -> Real {
        let v = self.consts.borrow_mut().ln_2(self.bits, RM);
        Real::from_big(v, self.bits)
    }

    /// Euler–Mascheroni constant.
    pub fn euler_gamma(&self) -> Real {
        if let Some(g) = self.cache.borrow().euler.as_ref() {
            if g.prec() >= self.bits {
                return g.clone().with_prec(self.bits);
            }
        }
        let g = -crate::specfun::digamma(&self.one(), self).expect("digamma(1) is regular");
        self.cache.borrow_mut().euler = Some(g.clone());
        g
    }

    /// Relative tolerance corresponding to the requested digits, `10^-digits`.
    pub fn eps(&self) -> Real {
        self.pow10(-(self.digits as i64))
    }

    /// Relative tolerance at full working precision, `10^-(digits+guard)`.
    pub fn working_eps(&self) -> Real {
        self.pow10(-(self.working_digits() as i64))
    }

    pub fn pow10(&self, e: i64) -> Real {
        let ten = self.int(10);
        if e >= 0 {
            ten.powi(e as u64)
        } else {
            self.one() / ten.powi(e.unsigned_abs())
        }
    }

    /// Round a value to this context's precision.
    pub fn round(&self, x: &Real) -> Real {
        x.clone().with_prec(self.bits)
    }

    fn with_consts<T>(&self, f: impl FnOnce(&mut Consts) -> T) -> T {
        f(&mut self.consts.borrow_mut())
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Context")
            .field("digits", &self.digits)
            .field("guard", &self.guard)
            .field("bits", &self.bits)
            .finish()
    }
}

/// Real number at a fixed binary precision.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    p: usize,
}

impl Real {
    fn from_big(v: BigFloat, p: usize) -> Real {
        Real { v, p }
    }

    pub(crate) fn prec(&self) -> usize {
        self.p
    }

    /// Zero carrying this value's precision.
    pub fn zero_like(&self) -> Real {
        Real::from_big(BigFloat::from_word(0, self.p), self.p)
    }

    /// One carrying this value's precision.
    pub fn one_like(&self) -> Real {
        Real::from_big(BigFloat::from_word(1, self.p), self.p)
    }

    pub(crate) fn with_prec(mut self, p: usize) -> Real {
        if p < self.p && !self.v.is_zero() {
            let _ = self.v.set_precision(p, RM);
        }
        self.p = p;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    /// `Ok(self)` if finite, otherwise an overflow error tagged with `what`.
    pub fn finite(self, what: &str) -> Result<Real> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::Overflow(what.to_string()))
        }
    }

    pub fn abs(&self) -> Real {
        Real::from_big(self.v.abs(), self.p)
    }

    /// The integer value if `self` is an exact integer representable as `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.v.is_zero() {
            return Some(0);
        }
        if !self.v.is_int() {
            return None;
        }
        let e = self.v.exponent()?;
        if !(1..=62).contains(&e) {
            return None;
        }
        let top = *self.v.mantissa_digits()?.last()?;
        let mag = (top >> (64 - e)) as i64;
        Some(if self.v.is_negative() { -mag } else { mag })
    }

    pub fn is_integer(&self) -> bool {
        self.v.is_zero() || self.v.is_int()
    }

    pub fn floor(&self) -> Real {
        Real::from_big(self.v.floor(), self.p)
    }

    pub fn ceil(&self) -> Real {
        Real::from_big(self.v.ceil(), self.p)
    }

    /// Nearest integer (ties away from zero is not needed; ties go up).
    pub fn round_int(&self) -> Real {
        let half = Real::from_big(BigFloat::from_f64(0.5, self.p), self.p);
        (self + &half).floor()
    }

    /// Nearest `f64` (truncated mantissa). For heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        if !self.is_finite() {
            return f64::NAN;
        }
        let e = self.v.exponent().unwrap_or(0);
        let top = self.v.mantissa_digits().and_then(|w| w.last().copied()).unwrap_or(0);
        let m = (top >> 11) as f64 / (1u64 << 53) as f64;
        let r = libm::ldexp(m, e);
        if self.v.is_negative() {
            -r
        } else {
            r
        }
    }

    /// Approximate `log10 |self|`, valid far outside the `f64` range. `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.v.is_zero() {
            return f64::NEG_INFINITY;
        }
        let e = self.v.exponent().unwrap_or(0) as f64;
        // top word is normalized: its high bit is set, so m ∈ [½, 1)
        let top = self.v.mantissa_digits().and_then(|w| w.last().copied()).unwrap_or(0);
        let m = if top == 0 { 0.5 } else { top as f64 / libm::exp2(astro_float::WORD_BIT_SIZE as f64) };
        e * core::f64::consts::LOG10_2 + libm::log10(m)
    }

    pub fn sqrt(&self) -> Real {
        debug_assert!(!self.is_negative(), "sqrt of a negative value");
        Real::from_big(self.v.sqrt(self.p, RM), self.p)
    }

    pub fn recip(&self) -> Real {
        Real::from_big(self.v.reciprocal(self.p, RM), self.p)
    }

    /// Non-negative integer power by repeated squaring.
    pub fn powi(&self, n: u64) -> Real {
        Real::from_big(self.v.powi(n as usize, self.p, RM), self.p)
    }

    /// Signed integer power.
    pub fn powi_signed(&self, n: i64) -> Real {
        if n >= 0 {
            self.powi(n as u64)
        } else {
            self.powi(n.unsigned_abs()).recip()
        }
    }

    pub fn exp(&self, ctx: &Context) -> Real {
        let p = ctx.bits;
        Real::from_big(ctx.with_consts(|cc| self.v.exp(p, RM, cc)), p)
    }

    pub fn ln(&self, ctx: &Context) -> Real {
        debug_assert!(self.is_positive(), "ln of a non-positive value");
        let p = ctx.bits;
        Real::from_big(ctx.with_consts(|cc| self.v.ln(p, RM, cc)), p)
    }

    pub fn sin(&self, ctx: &Context) -> Real {
        let p = ctx.bits;
        Real::from_big(ctx.with_consts(|cc| self.v.sin(p, RM, cc)), p)
    }

    pub fn cos(&self, ctx: &Context) -> Real {
        let p = ctx.bits;
        Real::from_big(ctx.with_consts(|cc| self.v.cos(p, RM, cc)), p)
    }

    pub fn atan(&self, ctx: &Context) -> Real {
        let p = ctx.bits;
        Real::from_big(ctx.with_consts(|cc| self.v.atan(p, RM, cc)), p)
    }

    pub fn sinh(&self, ctx: &Context) -> Real {
        let p = ctx.bits;
        Real::from_big(ctx.with_consts(|cc| self.v.sinh(p, RM, cc)), p)
    }

    pub fn cosh(&self, ctx: &Context) -> Real {
        let p = ctx.bits;
        Real::from_big(ctx.with_consts(|cc| self.v.cosh(p, RM, cc)), p)
    }

    /// `self^e` for `self > 0`; integer exponents also accept negative bases.
    pub fn pow(&self, e: &Real, ctx: &Context) -> Real {
        if let Some(n) = e.to_i64() {
            return self.clone().with_prec(ctx.bits.max(self.p)).powi_signed(n).with_prec(ctx.bits);
        }
        debug_assert!(!self.is_negative(), "non-integer power of a negative value");
        if self.is_zero() {
            return ctx.zero();
        }
        (e.clone() * self.ln(ctx)).exp(ctx)
    }

    /// Multiply by `2^k` exactly.
    pub fn ldexp(&self, k: i32) -> Real {
        let mut v = self.v.clone();
        if let Some(e) = v.exponent() {
            if !v.is_zero() {
                v.set_exponent(e + k);
            }
        }
        Real::from_big(v, self.p)
    }

    pub fn max(self, other: Real) -> Real {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Real) -> Real {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Scientific notation with `sig` significant digits, e.g. `-9.78e-22`.
    pub fn to_sci_string(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.v.is_zero() {
            return "0".to_string();
        }
        if !self.is_finite() {
            return if self.v.is_nan() { "NaN".into() } else { "inf".into() };
        }
        // One spare guard digit is plenty: the binary value is correctly rounded.
        let mut cc = Consts::new().expect("constant cache");
        let raw = self.v.format(Radix::Dec, RM, &mut cc).unwrap_or_default();
        format_sci(&raw, sig)
    }
}

/// Re-round astro-float's decimal output (`d.ddd…e±x`) to `sig` digits.
fn format_sci(raw: &str, sig: usize) -> String {
    let (neg, body) = match raw.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, raw),
    };
    let (mant, exp) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let mut digits: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
    let mut exp10 = exp + int_part.len() as i64 - 1;
    while digits.len() > 1 && digits[0] == 0 {
        digits.remove(0);
        exp10 -= 1;
    }
    if digits.len() > sig {
        let round_up = digits[sig] >= 5;
        digits.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    digits.truncate(sig);
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    while digits.len() < sig {
        digits.push(0);
    }
    let mut out = String::with_capacity(sig + 8);
    if neg {
        out.push('-');
    }
    out.push((b'0' + digits[0]) as char);
    if sig > 1 {
        out.push('.');
        for d in &digits[1..] {
            out.push((b'0' + d) as char);
        }
    }
    out.push('e');
    out.push_str(&exp10.to_string());
    out
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or((self.p as f64 * core::f64::consts::LOG10_2) as usize);
        f.write_str(&self.to_sci_string(sig))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_sci_string(24))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($tr:ident, $method:ident, $op:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let p = self.p.max(rhs.p);
                Real::from_big(self.v.$op(&rhs.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
        impl $tr<i64> for &Real {
            type Output = Real;
            fn $method(self, rhs: i64) -> Real {
                let r = Real::from_big(BigFloat::from_i64(rhs, self.p), self.p);
                self.$method(&r)
            }
        }
        impl $tr<i64> for Real {
            type Output = Real;
            fn $method(self, rhs: i64) -> Real {
                (&self).$method(rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::from_big(self.v.neg(), self.p)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::from_big(self.v.clone().neg(), self.p)
    }
}

impl AddAssign<&Real> for Real {
    fn add_assign(&mut self, rhs: &Real) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Real> for Real {
    fn add_assign(&mut self, rhs: Real) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Real> for Real {
    fn sub_assign(&mut self, rhs: &Real) {
        *self = &*self - rhs;
    }
}

impl SubAssign<Real> for Real {
    fn sub_assign(&mut self, rhs: Real) {
        *self = &*self - &rhs;
    }
}

impl MulAssign<&Real> for Real {
    fn mul_assign(&mut self, rhs: &Real) {
        *self = &*self * rhs;
    }
}

impl MulAssign<Real> for Real {
    fn mul_assign(&mut self, rhs: Real) {
        *self = &*self * &rhs;
    }
}

/// Complex number, used for `a` inside the sector `|arg a| < π/4`.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Complex {
        Complex { re, im }
    }

    /// `r·e^{iθ}`.
    pub fn from_polar(r: &Real, theta: &Real, ctx: &Context) -> Complex {
        Complex::new(r * theta.cos(ctx), r * theta.sin(ctx))
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Principal argument in `(-π, π]`.
    pub fn arg(&self, ctx: &Context) -> Real {
        atan2(&self.im, &self.re, ctx)
    }

    pub fn recip(&self) -> Complex {
        let d = self.norm_sqr();
        Complex::new(&self.re / &d, -(&self.im / &d))
    }

    pub fn exp(&self, ctx: &Context) -> Complex {
        let m = self.re.exp(ctx);
        Complex::new(&m * self.im.cos(ctx), &m * self.im.sin(ctx))
    }

    /// Principal logarithm.
    pub fn ln(&self, ctx: &Context) -> Complex {
        Complex::new(self.norm_sqr().ln(ctx).ldexp(-1), self.arg(ctx))
    }

    pub fn sin(&self, ctx: &Context) -> Complex {
        Complex::new(
            self.re.sin(ctx) * self.im.cosh(ctx),
            self.re.cos(ctx) * self.im.sinh(ctx),
        )
    }

    pub fn powi(&self, n: u64) -> Complex {
        let mut base = self.clone();
        let mut acc = Complex::new(self.re.one_like(), self.im.zero_like());
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    pub fn scale(&self, r: &Real) -> Complex {
        Complex::new(&self.re * r, &self.im * r)
    }
}

/// Four-quadrant arctangent of `y/x`.
pub fn atan2(y: &Real, x: &Real, ctx: &Context) -> Real {
    if x.is_positive() {
        (y / x).atan(ctx)
    } else if x.is_negative() {
        let base = (y / x).atan(ctx);
        if y.is_negative() {
            base - ctx.pi()
        } else {
            base + ctx.pi()
        }
    } else if y.is_positive() {
        ctx.pi().ldexp(-1)
    } else if y.is_negative() {
        -ctx.pi().ldexp(-1)
    } else {
        ctx.zero()
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex({}, {})", self.re.to_sci_string(24), self.im.to_sci_string(24))
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        Complex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for Complex {
    type Output = Complex;
    fn div(self, rhs: Complex) -> Complex {
        #[allow(clippy::suspicious_arithmetic_impl)]
        let q = self * rhs.recip();
        q
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

/// `true` iff `|arg a| < π/4` strictly. Values within a few ulps of the
/// sector boundary count as on it.
pub fn in_sector(a: &Complex) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::Domain("sector test of a = 0".into()));
    }
    if !a.re.is_positive() {
        return Ok(false);
    }
    let slack = a.re.ldexp(-(a.re.prec() as i32 - 8));
    Ok(a.im.abs() + slack < a.re)
}

/// Field operations shared by real and complex `a`.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_real(x: Real) -> Self;
    fn real_part(&self) -> Real;
    fn imag_part(&self) -> Real;
    fn modulus(&self) -> Real;
    fn exp(&self, ctx: &Context) -> Self;
    fn ln(&self, ctx: &Context) -> Self;
    /// Principal-branch real power.
    fn powr(&self, e: &Real, ctx: &Context) -> Self;
    fn powi(&self, n: u64) -> Self;
    fn scale(&self, r: &Real) -> Self;
    fn is_zero(&self) -> bool;
    /// Reject values outside the sector `|arg a| < π/4`.
    fn check_sector(&self) -> Result<()>;
}

impl Scalar for Real {
    fn from_real(x: Real) -> Self {
        x
    }
    fn real_part(&self) -> Real {
        self.clone()
    }
    fn imag_part(&self) -> Real {
        self.zero_like()
    }
    fn modulus(&self) -> Real {
        self.abs()
    }
    fn exp(&self, ctx: &Context) -> Self {
        Real::exp(self, ctx)
    }
    fn ln(&self, ctx: &Context) -> Self {
        Real::ln(self, ctx)
    }
    fn powr(&self, e: &Real, ctx: &Context) -> Self {
        self.pow(e, ctx)
    }
    fn powi(&self, n: u64) -> Self {
        Real::powi(self, n)
    }
    fn scale(&self, r: &Real) -> Self {
        self * r
    }
    fn is_zero(&self) -> bool {
        Real::is_zero(self)
    }
    fn check_sector(&self) -> Result<()> {
        if self.is_positive() {
            Ok(())
        } else {
            Err(Error::Domain("a must be positive".into()))
        }
    }
}

impl Scalar for Complex {
    fn from_real(x: Real) -> Self {
        let z = x.zero_like();
        Complex::new(x, z)
    }
    fn real_part(&self) -> Real {
        self.re.clone()
    }
    fn imag_part(&self) -> Real {
        self.im.clone()
    }
    fn modulus(&self) -> Real {
        self.abs()
    }
    fn exp(&self, ctx: &Context) -> Self {
        Complex::exp(self, ctx)
    }
    fn ln(&self, ctx: &Context) -> Self {
        Complex::ln(self, ctx)
    }
    fn powr(&self, e: &Real, ctx: &Context) -> Self {
        if self.im.is_zero() && self.re.is_positive() {
            return Complex::from_real(self.re.pow(e, ctx));
        }
        if let Some(n) = e.to_i64() {
            return if n >= 0 {
                Complex::powi(self, n as u64)
            } else {
                Complex::powi(self, n.unsigned_abs()).recip()
            };
        }
        let l = Complex::ln(self, ctx);
        l.scale(e).exp(ctx)
    }
    fn powi(&self, n: u64) -> Self {
        Complex::powi(self, n)
    }
    fn scale(&self, r: &Real) -> Self {
        Complex::scale(self, r)
    }
    fn is_zero(&self) -> bool {
        Complex::is_zero(self)
    }
    fn check_sector(&self) -> Result<()> {
        if in_sector(self)? {
            Ok(())
        } else {
            Err(Error::Domain("a must satisfy |arg a| < pi/4".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_floor_and_guard() {
        let ctx = Context::new(50).unwrap();
        assert!(ctx.working_digits() >= 60);
        assert_eq!(ctx.guard_digits(), DEFAULT_GUARD);
        assert!(Context::new(16).is_ok());
        assert_eq!(
            Context::new(8).unwrap_err(),
            Error::PrecisionTooLow { digits: 8, min: 16 }
        );
    }

    #[test]
    fn sector_membership() {
        let ctx = Context::new(30).unwrap();
        let three = ctx.int(3);
        let a = Complex::from_real(three.clone());
        assert!(in_sector(&a).unwrap());
        let quarter = ctx.pi().ldexp(-2);
        assert!(!in_sector(&Complex::from_polar(&three, &quarter, &ctx)).unwrap());
        assert!(!in_sector(&Complex::from_polar(&three, &-quarter.clone(), &ctx)).unwrap());
        let eighth = ctx.pi().ldexp(-3);
        assert!(in_sector(&Complex::from_polar(&three, &eighth, &ctx)).unwrap());
        assert!(in_sector(&Complex::new(ctx.zero(), ctx.zero())).is_err());
        assert!(!in_sector(&Complex::new(ctx.int(-1), ctx.zero())).unwrap());
    }

    #[test]
    fn integer_extraction() {
        let ctx = Context::new(20).unwrap();
        assert_eq!(ctx.int(-7).to_i64(), Some(-7));
        assert_eq!(ctx.int(0).to_i64(), Some(0));
        assert_eq!(ctx.ratio(1, 2).to_i64(), None);
        assert_eq!(ctx.int(1 << 40).to_i64(), Some(1 << 40));
    }

    #[test]
    fn sci_formatting_rounds() {
        assert_eq!(format_sci("9.9996e-3", 4), "1.000e-2");
        assert_eq!(format_sci("-9.78222265e-22", 8), "-9.7822227e-22");
        assert_eq!(format_sci("1.e+0", 3), "1.00e0");
        let ctx = Context::new(20).unwrap();
        assert_eq!(ctx.ratio(1, 3).to_sci_string(5), "3.3333e-1");
    }

    #[test]
    fn deterministic_digits() {
        let a = Context::new(50).unwrap();
        let b = Context::new(50).unwrap();
        let x = a.parse("0.7").unwrap().exp(&a).ln(&a);
        let y = b.parse("0.7").unwrap().exp(&b).ln(&b);
        assert_eq!(x.to_sci_string(60), y.to_sci_string(60));
    }

    #[test]
    fn complex_log_exp_roundtrip() {
        let ctx = Context::new(30).unwrap();
        let z = Complex::new(ctx.int(3), ctx.ratio(1, 2));
        let back = z.ln(&ctx).exp(&ctx);
        let err = (back - z.clone()).abs() / z.abs();
        assert!(err < ctx.eps());
    }

    #[test]
    fn to_f64_and_log10() {
        let ctx = Context::new(20).unwrap();
        assert_eq!(ctx.ratio(3, 4).to_f64(), 0.75);
        assert_eq!(ctx.int(-6).to_f64(), -6.0);
        let tiny = ctx.pow10(-500);
        assert!((tiny.log10_abs() + 500.0).abs() < 1e-9);
    }
}
