//! Ground truth: direct summation of
//! `S_{μ,γ}(a;λ) = Σ_{n≥1} n^γ e^{-λn²/a²} / (n²+a²)^μ`, its alternating
//! variant, the Mellin transform `H(s)`, and the regularized combination
//! `G(s)` whose zeros show `H` has no poles at `s = ±2k + δ`.

use alloc::format;

use crate::arith::{Context, Real, Scalar};
use crate::error::{Error, Result};
use crate::quadrature::{self, Domain};
use crate::specfun;

/// How γ enters the pole structure of the Mellin integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaClass {
    /// γ = 2p.
    Even(i64),
    /// γ = -1: double pole at s = 1.
    MinusOne,
    /// γ = -3, -5, …; not supported by the expansions.
    OddNegative(i64),
    General,
}

/// `(μ, γ, λ, a)` with `μ ≥ 0`, `λ > 0` and `|arg a| < π/4`.
#[derive(Clone, Debug)]
pub struct SeriesParams<T: Scalar = Real> {
    pub mu: Real,
    pub gamma: Real,
    pub lambda: Real,
    pub a: T,
}

impl<T: Scalar> SeriesParams<T> {
    pub fn new(mu: Real, gamma: Real, lambda: Real, a: T) -> Result<Self> {
        if mu.is_negative() {
            return Err(Error::Domain(format!("mu must be >= 0, got {mu}")));
        }
        if !lambda.is_positive() {
            return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
        }
        a.check_sector()?;
        Ok(SeriesParams { mu, gamma, lambda, a })
    }

    /// δ = 2μ − γ.
    pub fn delta(&self) -> Real {
        &self.mu * 2 - &self.gamma
    }

    pub fn class(&self) -> GammaClass {
        match self.gamma.to_i64() {
            Some(g) if g % 2 == 0 => GammaClass::Even(g / 2),
            Some(-1) => GammaClass::MinusOne,
            Some(g) if g < 0 => GammaClass::OddNegative(g),
            _ => GammaClass::General,
        }
    }

    /// μ as an integer, if it is one.
    pub fn mu_integer(&self) -> Option<i64> {
        self.mu.to_i64()
    }

    pub fn with_a(&self, a: T) -> Self {
        SeriesParams { a, ..self.clone() }
    }
}

fn log10_majorant(n: f64, beta: f64, kappa: f64) -> f64 {
    beta * libm::log10(n) - kappa * n * n / core::f64::consts::LN_10
}

/// `log10` of a bound on `Σ_{n>N} n^β e^{-κn²}`, or `None` while the
/// majorant is not yet decreasing geometrically.
fn log10_tail_bound(big_n: f64, beta: f64, kappa: f64) -> Option<f64> {
    let n1 = big_n + 1.0;
    let growth = if beta > 0.0 { beta * libm::log((n1 + 1.0) / n1) } else { 0.0 };
    let log_ratio = growth - kappa * (2.0 * n1 + 1.0);
    if log_ratio >= -1e-3 {
        return None;
    }
    let ratio = libm::exp(log_ratio);
    Some(log10_majorant(n1, beta, kappa) - libm::log10(1.0 - ratio))
}

/// `Σ_{n≥1} sign(n) · term(n)` with the tail certified below
/// `10^-(working digits + 2)` of the partial sum.
fn certified_sum<T: Scalar>(p: &SeriesParams<T>, alternating: bool, ctx: &Context) -> Result<(T, u64)> {
    let one = T::from_real(ctx.one());
    let a2 = p.a.clone() * p.a.clone();
    let inv_a2 = one / a2.clone();
    // on the sector |n² + a²| ≥ n², so |term| ≤ n^{γ-2μ} e^{-λ Re(1/a²) n²}
    let kappa = (&p.lambda * inv_a2.real_part()).to_f64();
    if kappa <= 0.0 {
        return Err(Error::Domain("lambda * Re(1/a^2) must be positive".into()));
    }
    let beta = (&p.gamma - &p.mu * 2).to_f64();
    let target = -(ctx.working_digits() as f64 + 2.0);
    let scaled_lambda = inv_a2.scale(&p.lambda);
    let mut sum = T::from_real(ctx.zero());
    let mut n: u64 = 1;
    loop {
        let nr = ctx.int(n as i64);
        let n2 = &nr * &nr;
        let mut log_term = -scaled_lambda.scale(&n2);
        if !p.mu.is_zero() {
            let base = a2.clone() + T::from_real(n2.clone());
            log_term = log_term - base.ln(ctx).scale(&p.mu);
        }
        let mut term = log_term.exp(ctx);
        if !p.gamma.is_zero() {
            term = term.scale(&nr.pow(&p.gamma, ctx));
        }
        if alternating && n.is_multiple_of(2) {
            sum = sum - term;
        } else {
            sum = sum + term;
        }
        let mag = sum.modulus().log10_abs();
        if let Some(tail) = log10_tail_bound(n as f64, beta, kappa) {
            if tail < mag + target {
                return Ok((sum, n));
            }
        }
        n += 1;
        if n > 50_000_000 {
            return Err(Error::NonConvergence("direct sum".into()));
        }
    }
}

/// `S_{μ,γ}(a;λ)` by direct summation.
pub fn direct_sum<T: Scalar>(p: &SeriesParams<T>, ctx: &Context) -> Result<T> {
    certified_sum(p, false, ctx).map(|(s, _)| s)
}

/// Direct sum together with the number of terms taken.
pub fn direct_sum_counted<T: Scalar>(p: &SeriesParams<T>, ctx: &Context) -> Result<(T, u64)> {
    certified_sum(p, false, ctx)
}

/// `Σ (−1)^{n−1} n^γ e^{-λn²/a²}/(n²+a²)^μ`, summed directly and checked
/// against `S(a) − 2^{1−δ} S(a/2)`.
pub fn alternating_sum<T: Scalar>(p: &SeriesParams<T>, ctx: &Context) -> Result<T> {
    let (direct, _) = certified_sum(p, true, ctx)?;
    let reduced = alternating_by_reduction(p, ctx)?;
    let diff = (direct.clone() - reduced).modulus();
    let tol = ctx.pow10(-(ctx.digits() as i64 - 3)) * direct.modulus();
    if diff > tol {
        return Err(Error::NonConvergence(format!(
            "alternating sum: direct and reduced forms differ by {}",
            diff.to_sci_string(5)
        )));
    }
    Ok(direct)
}

/// `S(a) − 2^{1−δ} S(a/2)`.
pub fn alternating_by_reduction<T: Scalar>(p: &SeriesParams<T>, ctx: &Context) -> Result<T> {
    let full = direct_sum(p, ctx)?;
    let half = direct_sum(&p.with_a(p.a.scale(&ctx.ratio(1, 2))), ctx)?;
    let factor = ctx.int(2).pow(&(ctx.one() - p.delta()), ctx);
    Ok(full - half.scale(&factor))
}

fn near_pole(x: &Real, ctx: &Context) -> bool {
    if x.is_positive() {
        return false;
    }
    let nearest = x.round_int();
    let gap = (x - &nearest).abs();
    gap < ctx.pow10(-(ctx.digits() as i64 / 2))
}

/// `H(s) = ½ Γ((γ+s)/2) U((γ+s)/2, 1+(γ+s)/2−μ, λ)`.
pub fn mellin_h(s: &Real, mu: &Real, gamma: &Real, lambda: &Real, ctx: &Context) -> Result<Real> {
    let x = (gamma + s).ldexp(-1);
    if near_pole(&x, ctx) {
        return Err(Error::Pole(format!("H(s) has a pole near s = {}", s.to_sci_string(12))));
    }
    let b = &x + 1 - mu;
    let g = specfun::gamma(&x, ctx)?;
    let u = specfun::tricomi_u(&x, &b, lambda, ctx)?;
    Ok((g * u).ldexp(-1))
}

/// `H(s)` from its defining integral `∫_0^∞ x^{γ+s−1} e^{−λx²} (1+x²)^{−μ} dx`
/// (requires `γ + s > 0`).
pub fn mellin_h_quadrature(s: &Real, mu: &Real, gamma: &Real, lambda: &Real, ctx: &Context) -> Result<Real> {
    let e = gamma + s - 1;
    if !(&e + 1).is_positive() {
        return Err(Error::Domain("defining integral of H(s) needs gamma + s > 0".into()));
    }
    let f = |x: &Real| {
        if !x.is_positive() {
            return Ok(alloc::vec![ctx.zero()]);
        }
        let x2 = x * x;
        let lg = &e * x.ln(ctx) - lambda * &x2 - mu * (x2 + 1).ln(ctx);
        Ok(alloc::vec![quadrature::exp_or_zero(&lg, ctx)])
    };
    let v = quadrature::integrate(f, 1, &Domain::HalfLine { lo: ctx.zero() }, ctx)?;
    Ok(v[0].clone())
}

/// `G(s) = Γ(x)/Γ(μ) F(x; 1+x−μ; λ) − λ^{μ−x} F(μ; 1−x+μ; λ)`, `x = (γ+s)/2`,
/// with `F` the normalized ₁F₁. Vanishes at `s = ±2k + δ`.
pub fn mellin_g(s: &Real, mu: &Real, gamma: &Real, lambda: &Real, ctx: &Context) -> Result<Real> {
    if mu.is_integer() {
        return Err(Error::Domain("G(s) is only meaningful for non-integer mu".into()));
    }
    let x = (gamma + s).ldexp(-1);
    let one = ctx.one();
    let first = specfun::gamma(&x, ctx)? / specfun::gamma(mu, ctx)?
        * specfun::kummer_1f1_regularized(&x, &(&one + &x - mu), lambda, ctx)?;
    let second = lambda.pow(&(mu - &x), ctx)
        * specfun::kummer_1f1_regularized(mu, &(&one - &x + mu), lambda, ctx)?;
    Ok(first - second)
}
