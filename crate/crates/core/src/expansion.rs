//! Large-`a` machinery for `S_{μ,γ}(a;λ)`.
//!
//! * general γ: leading term `a^{1−δ}H(1)` plus the algebraic series in `a^{-2k}`;
//! * γ = 2p: finite pole part `H_{μ,γ}` plus the exponentially small part `J`,
//!   either exactly via Laplace-type integrals (μ ≥ 0, p ≥ 0, real `a`) or,
//!   for integer μ = m, as `J₁` (exact, `e^{−2πka}`) plus the asymptotic `J₂`
//!   (`e^{−π²k²a²/λ}`);
//! * γ = −1: the double-pole expansion.
//!
//! The coefficient families are exact rationals or polynomials in λ with
//! rational coefficients.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{Context, Real, Scalar};
use crate::error::{Error, Result};
use crate::oracle::{self, GammaClass, SeriesParams};
use crate::quadrature::{self, PeakedFamily};
use crate::rational::{rat, rat_factorial, rat_int, rat_pochhammer, rational_to_real, RatPoly, Rational};
use crate::specfun;

// ---------------------------------------------------------------- results

/// One indexed contribution (a `k`-block, an `r`-term, …).
#[derive(Clone, Debug, PartialEq)]
pub struct Term<T> {
    pub label: String,
    pub index: usize,
    pub value: T,
}

/// Truncation indices actually used.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Truncation {
    pub k_max: Option<usize>,
    pub r_max: Option<usize>,
    pub j_max: Option<usize>,
}

/// A value together with the itemized pieces it was summed from.
#[derive(Clone, Debug)]
pub struct ExpansionResult<T: Scalar = Real> {
    pub value: T,
    pub algebraic_terms: Vec<(String, T)>,
    pub exponential_terms: Vec<Term<T>>,
    pub truncation: Truncation,
    /// Heuristic: magnitude of the first omitted term (zero when exact).
    pub est_truncation_error: Real,
}

impl<T: Scalar> ExpansionResult<T> {
    fn assemble(
        algebraic_terms: Vec<(String, T)>,
        exponential_terms: Vec<Term<T>>,
        truncation: Truncation,
        est_truncation_error: Real,
        ctx: &Context,
    ) -> Self {
        let mut r = ExpansionResult {
            value: T::from_real(ctx.zero()),
            algebraic_terms,
            exponential_terms,
            truncation,
            est_truncation_error,
        };
        r.value = r.resum(ctx);
        r
    }

    /// Sum of the ledger in its fixed order (algebraic, then exponential).
    pub fn resum(&self, ctx: &Context) -> T {
        let mut acc = T::from_real(ctx.zero());
        for (_, v) in &self.algebraic_terms {
            acc = acc + v.clone();
        }
        for t in &self.exponential_terms {
            acc = acc + t.value.clone();
        }
        acc
    }

    /// Sum of the exponential entries only.
    pub fn exponential_sum(&self, ctx: &Context) -> T {
        self.exponential_terms
            .iter()
            .fold(T::from_real(ctx.zero()), |acc, t| acc + t.value.clone())
    }
}

// ----------------------------------------------------------- coefficients

fn half() -> Rational {
    rat(1, 2)
}

fn pow_rat(x: &Rational, n: u32) -> Rational {
    (0..n).fold(Rational::one(), |acc, _| acc * x)
}

/// `c_j = (−p)_j (−p+½)_j / j!`, checked against `(−2p)_{2j} / (2^{2j} j!)`.
pub fn coeff_c(j: u32, p: i64) -> Rational {
    let pr = rat_int(p);
    let first = rat_pochhammer(&-pr.clone(), j) * rat_pochhammer(&(half() - pr), j) / rat_factorial(j);
    let second = rat_pochhammer(&rat_int(-2 * p), 2 * j) / (pow_rat(&rat_int(4), j) * rat_factorial(j));
    assert_eq!(first, second, "closed forms of c_j disagree at j={j}, p={p}");
    first
}

/// `ĉ_j(r) = (m−p+r)_j (m−p+r+½)_j / j!`, checked against
/// `(2m−2p+2r)_{2j} / (2^{2j} j!)`.
pub fn coeff_c_hat(j: u32, r: u32, m: i64, p: i64) -> Rational {
    let base = rat_int(m - p + r as i64);
    let first = rat_pochhammer(&base, j) * rat_pochhammer(&(&base + half()), j) / rat_factorial(j);
    let second = rat_pochhammer(&(&base * rat_int(2)), 2 * j) / (pow_rat(&rat_int(4), j) * rat_factorial(j));
    assert_eq!(first, second, "closed forms of c-hat disagree at j={j}, r={r}");
    first
}

/// `C_r = Σ_{n=0}^r (−λ)^n (m)_n / n! · ĉ_{r−n}(n)` as a polynomial in λ.
pub fn coeff_big_c_convolution(r: u32, m: i64, p: i64) -> RatPoly {
    let coeffs = (0..=r)
        .map(|n| {
            let sign = if n % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            sign * rat_pochhammer(&rat_int(m), n) / rat_factorial(n) * coeff_c_hat(r - n, n, m, p)
        })
        .collect();
    RatPoly::from_coeffs(coeffs)
}

/// `C_r = (2m−2p)_{2r}/(2^{2r} r!) · ₂F₂(−r, m; m−p, m−p+½; λ)`, or `None`
/// when a lower parameter hits zero before the series terminates.
pub fn coeff_big_c_2f2(r: u32, m: i64, p: i64) -> Option<RatPoly> {
    let mp = rat_int(m - p);
    let pre = rat_pochhammer(&(&mp * rat_int(2)), 2 * r) / (pow_rat(&rat_int(4), r) * rat_factorial(r));
    let mut coeffs = Vec::with_capacity(r as usize + 1);
    for n in 0..=r {
        let den = rat_pochhammer(&mp, n) * rat_pochhammer(&(&mp + half()), n) * rat_factorial(n);
        let num = rat_pochhammer(&rat_int(-(r as i64)), n) * rat_pochhammer(&rat_int(m), n);
        if den.is_zero() {
            if num.is_zero() {
                break;
            }
            return None;
        }
        coeffs.push(&pre * num / den);
    }
    Some(RatPoly::from_coeffs(coeffs))
}

/// `C_r(m, p, λ)` as an exact polynomial; both routes are compared when the
/// ₂F₂ form is defined.
pub fn coeff_big_c(r: u32, m: i64, p: i64) -> RatPoly {
    let conv = coeff_big_c_convolution(r, m, p);
    if let Some(hyp) = coeff_big_c_2f2(r, m, p) {
        assert_eq!(conv, hyp, "C_{r} routes disagree at m={m}, p={p}");
    }
    conv
}

/// `A_ℓ = (−1)^ℓ λ^{m−1−ℓ} / ((m−1−ℓ)! ℓ!)`.
pub fn coeff_a(l: u32, m: i64) -> Result<RatPoly> {
    if m < 1 || l as i64 > m - 1 {
        return Err(Error::Domain(format!("A_l needs 0 <= l <= m-1, got l={l}, m={m}")));
    }
    let deg = (m - 1) as u32 - l;
    let sign = if l.is_multiple_of(2) { rat_int(1) } else { rat_int(-1) };
    Ok(RatPoly::monomial(sign / (rat_factorial(deg) * rat_factorial(l)), deg as usize))
}

/// Row `ℓ` of the basis change `(1−p+s/2)_ℓ = Σ_r B_{rℓ} (s+1)_r`.
pub fn coeff_b_row(l: u32, p: i64) -> Vec<Rational> {
    // left side as a polynomial in s
    let mut lhs = RatPoly::constant(Rational::one());
    for i in 0..l as i64 {
        lhs = &lhs * &RatPoly::from_coeffs(vec![rat_int(1 - p + i), half()]);
    }
    let rising = |r: u32| {
        let mut q = RatPoly::constant(Rational::one());
        for i in 0..r as i64 {
            q = &q * &RatPoly::from_coeffs(vec![rat_int(1 + i), Rational::one()]);
        }
        q
    };
    // (s+1)_r is monic of degree r: peel off the top coefficient each step
    let mut row = vec![Rational::zero(); l as usize + 1];
    let mut rest = lhs;
    for r in (0..=l).rev() {
        let c = rest.coeff(r as usize);
        if !c.is_zero() {
            rest = &rest - &rising(r).scale(&c);
        }
        row[r as usize] = c;
    }
    debug_assert!(rest.is_zero());
    row
}

/// `B_{rℓ}`.
pub fn coeff_b(r: u32, l: u32, p: i64) -> Result<Rational> {
    if r > l {
        return Err(Error::Domain(format!("B_(r,l) needs r <= l, got r={r}, l={l}")));
    }
    Ok(coeff_b_row(l, p).swap_remove(r as usize))
}

/// `R_k(μ, q) = (−1)^{q−k}/(q−k)! · U(k−q, 1+k−q−μ, λ)` for rational μ, as a
/// polynomial in λ.
pub fn residue_r_poly(k: u32, q: u32, mu: &Rational) -> Result<RatPoly> {
    if k > q {
        return Err(Error::Domain(format!("R_k needs k <= q, got k={k}, q={q}")));
    }
    // U(−n, b, λ) = (−1)^n Σ_i C(n,i) (b+i)_{n−i} (−λ)^i, and (−1)^n cancels
    let n = q - k;
    let b = rat_int(1 - n as i64) - mu;
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut binom = Rational::one();
    for i in 0..=n {
        let sign = if i % 2 == 0 { rat_int(1) } else { rat_int(-1) };
        coeffs.push(sign * &binom * rat_pochhammer(&(&b + rat_int(i as i64)), n - i));
        binom = binom * rat_int((n - i) as i64) / rat_int(i as i64 + 1);
    }
    Ok(RatPoly::from_coeffs(coeffs).scale(&(Rational::one() / rat_factorial(n))))
}

/// `R_k(μ, q)` at real μ, λ.
pub fn residue_r(k: u32, q: u32, mu: &Real, lambda: &Real, ctx: &Context) -> Result<Real> {
    if k > q {
        return Err(Error::Domain(format!("R_k needs k <= q, got k={k}, q={q}")));
    }
    let n = (q - k) as i64;
    let b = ctx.int(1 - n) - mu;
    let u = specfun::tricomi_u(&ctx.int(-n), &b, lambda, ctx)?;
    let fact = specfun::pochhammer(&ctx.one(), n as u32);
    let v = u / fact;
    Ok(if n % 2 == 1 { -v } else { v })
}

/// `σ_r(a) = e^{2πa} Σ_{k≥1} k^r e^{−2πka}` by its defining sum.
pub fn sigma_r<T: Scalar>(r: u32, a: &T, ctx: &Context) -> Result<T> {
    if !a.real_part().is_positive() {
        return Err(Error::Domain("sigma_r needs Re(a) > 0".into()));
    }
    let q = a.scale(&-(ctx.pi() * 2)).exp(ctx);
    let peak = (r as f64) / (2.0 * core::f64::consts::PI * a.real_part().to_f64());
    let eps = ctx.working_eps();
    let mut sum = T::from_real(ctx.one());
    let mut qk = T::from_real(ctx.one());
    let mut k: i64 = 1;
    loop {
        k += 1;
        qk = qk * q.clone();
        let term = qk.scale(&ctx.int(k).powi(r as u64));
        let small = term.modulus() < &eps * &sum.modulus();
        sum = sum + term;
        if small && (k as f64) > peak {
            return Ok(sum);
        }
        if k > 10_000_000 {
            return Err(Error::NonConvergence("sigma_r".into()));
        }
    }
}

/// Closed forms of `σ_r(a)` for `r ≤ 3` and real `a`:
/// `e^{πa}/(2 sinh πa)`, `e^{2πa}/(4 sinh²πa)`, `e^{2πa} cosh πa/(4 sinh³πa)`,
/// `e^{2πa}(2 + cosh 2πa)/(8 sinh⁴πa)`.
pub fn sigma_closed(r: u32, a: &Real, ctx: &Context) -> Option<Real> {
    let x = ctx.pi() * a;
    let sh = x.sinh(ctx);
    let e1 = x.exp(ctx);
    let e2 = &e1 * &e1;
    Some(match r {
        0 => e1 / (sh * 2),
        1 => e2 / (&sh * &sh * 4),
        2 => e2 * x.cosh(ctx) / (sh.powi(3) * 4),
        3 => e2 * ((&x * 2).cosh(ctx) + 2) / (sh.powi(4) * 8),
        _ => return None,
    })
}

/// Exact coefficient tables, as served to `coeffs`-style consumers.
#[derive(Clone, Debug, Default)]
pub struct CoefficientSet {
    pub c: Vec<(u32, Rational)>,
    pub c_hat: Vec<((u32, u32), Rational)>,
    pub big_c: Vec<(u32, RatPoly)>,
    pub a: Vec<(u32, RatPoly)>,
    pub b: Vec<((u32, u32), Rational)>,
    pub r: Vec<(u32, RatPoly)>,
}

impl CoefficientSet {
    /// All families for `μ = m`, `γ = 2p`, up to the given orders.
    pub fn build(m: i64, p: i64, r_max: u32, mu: &Rational) -> CoefficientSet {
        let mut set = CoefficientSet::default();
        let j_top = if p >= 0 { p as u32 } else { r_max };
        set.c = (0..=j_top).map(|j| (j, coeff_c(j, p))).collect();
        for r in 0..=r_max {
            for j in 0..=r_max {
                set.c_hat.push(((j, r), coeff_c_hat(j, r, m, p)));
            }
            set.big_c.push((r, coeff_big_c(r, m, p)));
        }
        if m >= 1 {
            set.a = (0..m as u32).map(|l| (l, coeff_a(l, m).expect("in range"))).collect();
            for l in 0..m as u32 {
                for (r, b) in coeff_b_row(l, p).into_iter().enumerate() {
                    set.b.push(((r as u32, l), b));
                }
            }
        }
        if p < 0 {
            let q = (-p) as u32;
            set.r = (0..=q).map(|k| (k, residue_r_poly(k, q, mu).expect("k <= q"))).collect();
        }
        set
    }
}

// --------------------------------------------------------------- helpers

fn t_real<T: Scalar>(x: Real) -> T {
    T::from_real(x)
}

fn t_recip<T: Scalar>(x: &T, ctx: &Context) -> T {
    t_real::<T>(ctx.one()) / x.clone()
}

fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `P_k = (μ)_k/k! · ₁F₁(−k; 1−μ−k; λ) = Σ_{n≤k} (μ)_{k−n}/(k−n)! · λ^n/n!`,
/// which stays finite for integer μ.
pub fn algebraic_coefficient(k: usize, mu: &Real, lambda: &Real, ctx: &Context) -> Real {
    let mut u = vec![ctx.one()];
    for i in 1..=k {
        let next = &u[i - 1] * (mu + (i as i64 - 1)) / i as i64;
        u.push(next);
    }
    let mut acc = ctx.zero();
    let mut v = ctx.one();
    for n in 0..=k {
        acc += &u[k - n] * &v;
        v = v * lambda / (n as i64 + 1);
    }
    acc
}

/// Kept `(k, term)` pairs, first omitted magnitude, last kept index.
type Truncated<T> = (Vec<(usize, T)>, Real, usize);

/// Terms `k = start, start+1, …` of an asymptotic series, truncated either at
/// `fixed` or just before the smallest term (or once terms drop below
/// `floor`). Returns the kept terms and the first omitted magnitude.
fn truncate_series<T: Scalar>(
    mut term: impl FnMut(usize) -> Result<T>,
    start: usize,
    fixed: Option<usize>,
    floor: &Real,
) -> Result<Truncated<T>> {
    if let Some(kmax) = fixed {
        let kept = (start..=kmax).map(|k| term(k).map(|t| (k, t))).collect::<Result<Vec<_>>>()?;
        let omitted = term(kmax + 1)?.modulus();
        return Ok((kept, omitted, kmax));
    }
    let mut all: Vec<(usize, T)> = Vec::new();
    let mut best: Option<(usize, Real)> = None;
    let mut k = start;
    loop {
        let t = term(k)?;
        let mag = t.modulus();
        if mag <= *floor {
            let last = k.saturating_sub(1).max(start);
            return Ok((all, mag, last));
        }
        if k > start && best.as_ref().is_none_or(|(_, m)| mag < *m) {
            best = Some((k, mag.clone()));
        }
        all.push((k, t));
        if let Some((kb, mb)) = &best {
            let rising = k >= kb + 3 && all[all.len() - 3..].iter().all(|(_, v)| v.modulus() > *mb);
            if rising {
                let kb = *kb;
                let omitted = mb.clone();
                all.truncate(kb - start);
                return Ok((all, omitted, kb - 1));
            }
        }
        k += 1;
        if k > start + 20_000 {
            return Err(Error::NonConvergence("asymptotic series did not reach its smallest term".into()));
        }
    }
}

// ------------------------------------------------------------- expansions

/// `a^{1−δ} H(1)` with `H(1) = ½ Γ((1+γ)/2) U((1+γ)/2, 1+(1+γ)/2−μ, λ)`.
pub fn leading_term<T: Scalar>(p: &SeriesParams<T>, ctx: &Context) -> Result<T> {
    if matches!(p.class(), GammaClass::MinusOne | GammaClass::OddNegative(_)) {
        return Err(Error::Pole("odd negative gamma: s = 1 is a double pole (see gamma_minus1_expansion)".into()));
    }
    let h1 = oracle::mellin_h(&ctx.one(), &p.mu, &p.gamma, &p.lambda, ctx)?;
    Ok(p.a.powr(&(ctx.one() - p.delta()), ctx).scale(&h1))
}

/// Term `k` of `a^{−2μ} Σ_k (−1)^k a^{−2k} ζ(−2k−γ) P_k(μ, λ)`.
pub fn algebraic_term<T: Scalar>(p: &SeriesParams<T>, k: usize, ctx: &Context) -> Result<T> {
    let z = specfun::zeta(&(-(&p.gamma) - (2 * k as i64)), ctx)?;
    if z.is_zero() {
        return Ok(t_real(ctx.zero()));
    }
    let coeff = z * algebraic_coefficient(k, &p.mu, &p.lambda, ctx) * sign(k as i64);
    let apow = p.a.powr(&(-(&p.mu * 2) - (2 * k as i64)), ctx);
    Ok(apow.scale(&coeff))
}

/// Leading term plus the algebraic series, truncated at `k_max` or optimally.
pub fn algebraic_expansion_general<T: Scalar>(
    p: &SeriesParams<T>,
    k_max: Option<usize>,
    ctx: &Context,
) -> Result<ExpansionResult<T>> {
    let lead = leading_term(p, ctx)?;
    let floor = ctx.eps() * lead.modulus();
    let (kept, omitted, last) = truncate_series(|k| algebraic_term(p, k, ctx), 0, k_max, &floor)?;
    let mut algebraic = vec![(String::from("leading"), lead)];
    for (k, t) in kept {
        if !t.is_zero() {
            algebraic.push((format!("k={k}"), t));
        }
    }
    let trunc = Truncation { k_max: Some(last), ..Default::default() };
    Ok(ExpansionResult::assemble(algebraic, Vec::new(), trunc, omitted, ctx))
}

fn even_p<T: Scalar>(p: &SeriesParams<T>) -> Result<i64> {
    match p.class() {
        GammaClass::Even(pp) => Ok(pp),
        _ => Err(Error::Domain(format!("gamma must be an even integer, got {}", p.gamma))),
    }
}

/// `H_{μ,γ}(a;λ)` for γ = 2p.
pub fn finite_pole_part<T: Scalar>(p: &SeriesParams<T>, ctx: &Context) -> Result<T> {
    let pp = even_p(p)?;
    let a_delta = p.a.powr(&-p.delta(), ctx);
    if pp >= 1 {
        return Ok(t_real(ctx.zero()));
    }
    if pp == 0 {
        return Ok(a_delta.scale(&ctx.ratio(-1, 2)));
    }
    let q = (-pp) as u32;
    let a2 = p.a.clone() * p.a.clone();
    let mut acc = t_real::<T>(ctx.zero());
    let mut a2k = t_real::<T>(ctx.one());
    for k in 0..=q {
        let c = specfun::zeta(&ctx.int(2 * k as i64), ctx)? * residue_r(k, q, &p.mu, &p.lambda, ctx)?;
        acc = acc + a2k.scale(&c);
        a2k = a2k * a2.clone();
    }
    Ok(a_delta * acc)
}

fn real_a<T: Scalar>(p: &SeriesParams<T>) -> Result<Real> {
    if !p.a.imag_part().is_zero() {
        return Err(Error::Domain("the integral form of J needs real a".into()));
    }
    Ok(p.a.real_part())
}

/// Per-`k` blocks of the Theorem-1 double sum, and the individual `j`-terms of
/// the `k = 1` block (with one extra term beyond `j_count`).
fn theorem1_blocks(
    p: &SeriesParams<Real>,
    pp: i64,
    j_count: usize,
    k_max: Option<usize>,
    ctx: &Context,
) -> Result<(Vec<Real>, Vec<Real>)> {
    let a = real_a(p)?;
    let lam = &p.lambda;
    let pi = ctx.pi();
    let half = ctx.ratio(1, 2);
    let mu_zero = p.mu.is_zero();
    let prefactor = if mu_zero {
        (lam / (&pi * &a * &a)).pow(&(ctx.int(-2 * pp) - &half), ctx) * sign(pp)
    } else {
        let base = lam / (&pi * &a * &a);
        pi.pow(&p.mu, ctx) * lam.exp(ctx) / specfun::gamma(&p.mu, ctx)?
            * base.pow(&(&p.mu - 2 * pp - &half), ctx)
            * sign(pp)
    };
    let c: Vec<Real> = (0..=j_count).map(|j| rational_to_real(&coeff_c(j as u32, pp), ctx)).collect();
    let tol = ctx.working_eps().ldexp(-17);
    let mut blocks = Vec::new();
    let mut first_block_terms = Vec::new();
    let mut partial = ctx.zero();
    let mut k: usize = 1;
    loop {
        let kr = ctx.int(k as i64);
        let ka = &kr * &a;
        let x = lam / (&pi * &pi * &ka * &ka);
        let count = if k == 1 { j_count + 1 } else { j_count };
        let integrals = if mu_zero {
            vec![ctx.one(); count]
        } else {
            let fam = PeakedFamily {
                mu: p.mu.clone(),
                lambda: lam.clone(),
                t_peak: &pi * &ka / lam - 1,
                nu0: ctx.int(2 * pp) + &half,
                count,
            };
            quadrature::peaked_integrals(&fam, ctx)?
        };
        let outer = if mu_zero {
            (-(&pi * &pi * &ka * &ka / lam)).exp(ctx)
        } else {
            (-(&pi * &ka * 2)).exp(ctx)
        } * kr.powi_signed(2 * pp);
        let mut inner = ctx.zero();
        let mut xj = ctx.one();
        for (j, ij) in integrals.iter().enumerate() {
            let t = &c[j] * &xj * ij * sign(j as i64) * &outer * &prefactor;
            if j < j_count {
                inner += &t;
            }
            if k == 1 {
                first_block_terms.push(t);
            }
            xj *= &x;
        }
        partial += &inner;
        let negligible = inner.abs() <= &tol * &partial.abs();
        blocks.push(inner);
        if k_max.is_some_and(|km| k >= km) || (k_max.is_none() && negligible) {
            return Ok((blocks, first_block_terms));
        }
        k += 1;
        if k > 10_000 {
            return Err(Error::NonConvergence("k-sum of the exponential contribution".into()));
        }
    }
}

/// Exact `J(a;λ)` for γ = 2p, p ≥ 0, real `a`: closed form when μ = 0,
/// Laplace-type integrals `I_{jk}` when μ > 0.
pub fn j_theorem1(p: &SeriesParams<Real>, k_max: Option<usize>, ctx: &Context) -> Result<ExpansionResult<Real>> {
    let pp = even_p(p)?;
    if pp < 0 {
        return Err(Error::Domain("p < 0: use j_theorem1_negative_p or the theorem-2 form".into()));
    }
    let (blocks, _) = theorem1_blocks(p, pp, pp as usize + 1, k_max, ctx)?;
    let n = blocks.len();
    let terms = blocks
        .into_iter()
        .enumerate()
        .map(|(i, v)| Term { label: String::from("k"), index: i + 1, value: v })
        .collect();
    let trunc = Truncation { k_max: Some(n), j_max: Some(pp as usize), ..Default::default() };
    Ok(ExpansionResult::assemble(Vec::new(), terms, trunc, ctx.zero(), ctx))
}

/// `J(a;λ)` for p ≤ −1, μ > 0: the inner sum no longer terminates and is cut
/// at `j_max`.
pub fn j_theorem1_negative_p(
    p: &SeriesParams<Real>,
    k_max: Option<usize>,
    j_max: usize,
    ctx: &Context,
) -> Result<ExpansionResult<Real>> {
    let pp = even_p(p)?;
    if pp >= 0 {
        return Err(Error::Domain("j_theorem1_negative_p needs p <= -1".into()));
    }
    if p.mu.is_zero() {
        return Err(Error::Domain("mu = 0 with p <= -1: use the theorem-2 form".into()));
    }
    let (blocks, first) = theorem1_blocks(p, pp, j_max + 1, k_max, ctx)?;
    let n = blocks.len();
    let omitted = first.last().map(Real::abs).unwrap_or_else(|| ctx.zero());
    let terms = blocks
        .into_iter()
        .enumerate()
        .map(|(i, v)| Term { label: String::from("k"), index: i + 1, value: v })
        .collect();
    let trunc = Truncation { k_max: Some(n), j_max: Some(j_max), ..Default::default() };
    Ok(ExpansionResult::assemble(Vec::new(), terms, trunc, omitted, ctx))
}

/// `a^{1−δ}H(1) + H_{μ,γ} + J` with `J` from the integral form: exact for
/// p ≥ 0, cut at `j_max` (required) for p < 0.
pub fn theorem1_total(
    p: &SeriesParams<Real>,
    k_max: Option<usize>,
    j_max: Option<usize>,
    ctx: &Context,
) -> Result<ExpansionResult<Real>> {
    let pp = even_p(p)?;
    let j = if pp >= 0 {
        j_theorem1(p, k_max, ctx)?
    } else {
        let jm = j_max.ok_or_else(|| Error::Domain("p < 0 needs an explicit j_max".into()))?;
        j_theorem1_negative_p(p, k_max, jm, ctx)?
    };
    let algebraic = vec![
        (String::from("leading"), leading_term(p, ctx)?),
        (String::from("finite pole part"), finite_pole_part(p, ctx)?),
    ];
    Ok(ExpansionResult::assemble(algebraic, j.exponential_terms, j.truncation, j.est_truncation_error, ctx))
}

/// Exact `J₁` for integer μ = m ≥ 1:
/// `(−1)^{m−p−1} π a^{2p+1} e^{λ−2πa} Σ_{r<m} Σ_{r≤ℓ<m} A_ℓ B_{rℓ} σ_r(a) (2π)^r / a^{2m−r}`.
pub fn j1_exact<T: Scalar>(m: i64, p: i64, lambda: &Real, a: &T, ctx: &Context) -> Result<T> {
    if m < 0 {
        return Err(Error::Domain("J1 needs m >= 0".into()));
    }
    if m == 0 {
        return Ok(t_real(ctx.zero()));
    }
    let two_pi = ctx.pi() * 2;
    let rows: Vec<Vec<Rational>> = (0..m as u32).map(|l| coeff_b_row(l, p)).collect();
    let mut acc = t_real::<T>(ctx.zero());
    for r in 0..m as u32 {
        let mut coeff = ctx.zero();
        for l in r..m as u32 {
            let a_l = coeff_a(l, m)?.eval(lambda, ctx);
            coeff += a_l * rational_to_real(&rows[l as usize][r as usize], ctx);
        }
        if coeff.is_zero() {
            continue;
        }
        let sig = sigma_r(r, a, ctx)?;
        let apow = t_recip(&a.powi((2 * m) as u64 - r as u64), ctx);
        acc = acc + (sig * apow).scale(&(coeff * two_pi.powi(r as u64)));
    }
    let e = (a.scale(&-two_pi) + t_real(lambda.clone())).exp(ctx);
    let a_pow = a.powr(&ctx.int(2 * p + 1), ctx);
    Ok((a_pow * e * acc).scale(&(ctx.pi() * sign(m - p - 1))))
}

/// `Σ_k e^{−X k²} / k^e` with `X = π²a²/λ`.
fn gaussian_k_sum<T: Scalar>(x: &T, e: i64, ctx: &Context) -> T {
    let eps = ctx.working_eps();
    let mut sum = t_real::<T>(ctx.zero());
    let mut k: i64 = 1;
    loop {
        let kr = ctx.int(k);
        let term = x.scale(&-(&kr * &kr)).exp(ctx).scale(&kr.powi_signed(-e));
        let small = term.modulus() <= &eps * &sum.modulus();
        sum = sum + term;
        if small || k > 100_000 {
            return sum;
        }
        k += 1;
    }
}

/// `J₂` through `r_max`:
/// `(−1)^{m−p} (λ/(πa²))^{δ−½} Σ_r (−1)^r C_r (λ/(π²a²))^r Σ_k e^{−π²k²a²/λ}/k^{2r+δ}`.
pub fn j2_asymptotic<T: Scalar>(
    m: i64,
    p: i64,
    lambda: &Real,
    a: &T,
    r_max: usize,
    ctx: &Context,
) -> Result<ExpansionResult<T>> {
    if m < 0 {
        return Err(Error::Domain("J2 needs m >= 0".into()));
    }
    let delta = 2 * (m - p);
    let pi = ctx.pi();
    let a2 = a.clone() * a.clone();
    let base = t_real::<T>(lambda.clone()) / a2.scale(&pi);
    let prefactor = base.powr(&(ctx.int(delta) - ctx.ratio(1, 2)), ctx).scale(&ctx.int(sign(m - p)));
    let y = t_real::<T>(lambda.clone()) / a2.scale(&(&pi * &pi));
    let x = t_recip(&y, ctx);
    let term = |r: usize| -> T {
        let c = coeff_big_c(r as u32, m, p).eval(lambda, ctx) * sign(r as i64);
        let ks = gaussian_k_sum(&x, 2 * r as i64 + delta, ctx);
        (prefactor.clone() * y.powi(r as u64) * ks).scale(&c)
    };
    let terms: Vec<Term<T>> =
        (0..=r_max).map(|r| Term { label: String::from("r"), index: r, value: term(r) }).collect();
    let omitted = term(r_max + 1).modulus();
    let trunc = Truncation { r_max: Some(r_max), ..Default::default() };
    Ok(ExpansionResult::assemble(Vec::new(), terms, trunc, omitted, ctx))
}

/// The `r_max` that stops `J₂` just before its smallest term among `1..=cap`
/// (or `cap` when the terms keep shrinking).
pub fn j2_optimal_r_max<T: Scalar>(m: i64, p: i64, lambda: &Real, a: &T, cap: usize, ctx: &Context) -> Result<usize> {
    let j2 = j2_asymptotic(m, p, lambda, a, cap, ctx)?;
    let mut best: Option<(usize, Real)> = None;
    for t in j2.exponential_terms.iter().skip(1) {
        let mag = t.value.modulus();
        if mag.is_zero() {
            return Ok(t.index - 1);
        }
        if best.as_ref().is_none_or(|(_, b)| mag < *b) {
            best = Some((t.index, mag));
        }
    }
    Ok(match best {
        Some((r, _)) if r < cap => r - 1,
        _ => cap,
    })
}

fn integer_mu<T: Scalar>(p: &SeriesParams<T>) -> Result<i64> {
    p.mu_integer()
        .ok_or_else(|| Error::Domain(format!("mu must be a non-negative integer, got {}", p.mu)))
}

/// `a^{1−δ}H(1) + H_{μ,γ} + J₁ + J₂(r_max)` for μ = m, γ = 2p.
pub fn theorem2_total<T: Scalar>(p: &SeriesParams<T>, r_max: usize, ctx: &Context) -> Result<ExpansionResult<T>> {
    let pp = even_p(p)?;
    let m = integer_mu(p)?;
    let lead = leading_term(p, ctx)?;
    let fin = finite_pole_part(p, ctx)?;
    let j1 = j1_exact(m, pp, &p.lambda, &p.a, ctx)?;
    let j2 = j2_asymptotic(m, pp, &p.lambda, &p.a, r_max, ctx)?;
    let mut exponential = vec![Term { label: String::from("J1"), index: 0, value: j1 }];
    exponential.extend(j2.exponential_terms.into_iter().map(|t| Term { label: String::from("J2"), ..t }));
    let algebraic = vec![(String::from("leading"), lead), (String::from("finite pole part"), fin)];
    Ok(ExpansionResult::assemble(algebraic, exponential, j2.truncation, j2.est_truncation_error, ctx))
}

/// `Ŝ = S − {a^{1−δ}H(1) + H_{μ,γ} + J₁}`: what is left for `J₂` to describe.
pub fn s_hat<T: Scalar>(p: &SeriesParams<T>, ctx: &Context) -> Result<T> {
    let pp = even_p(p)?;
    let m = integer_mu(p)?;
    let s = oracle::direct_sum(p, ctx)?;
    let known = leading_term(p, ctx)? + finite_pole_part(p, ctx)? + j1_exact(m, pp, &p.lambda, &p.a, ctx)?;
    Ok(s - known)
}

/// `τ(n) = Σ_{r=1}^n 1/(r+1)`.
pub fn tau(n: u32) -> Rational {
    (1..=n).fold(Rational::zero(), |acc, r| acc + rat(1, r as i64 + 1))
}

/// `e_k(λ) = ₁F₁(−k; −k; λ) = Σ_{n≤k} λ^n/n!`.
pub fn e_k(k: u32) -> RatPoly {
    RatPoly::from_coeffs((0..=k).map(|n| Rational::one() / rat_factorial(n)).collect())
}

/// `Σ_{n≥1} λ^n τ(n)/(2)_n`.
fn tau_series(lambda: &Real, ctx: &Context) -> Real {
    let eps = ctx.working_eps();
    let mut acc = ctx.zero();
    let mut t = ctx.zero();
    let mut pw = ctx.one();
    let mut n: i64 = 0;
    loop {
        n += 1;
        t += ctx.one() / (n + 1);
        pw = pw * lambda / (n + 1);
        let term = &pw * &t;
        acc += &term;
        if n as f64 > lambda.to_f64() && term < &eps * &acc {
            return acc;
        }
    }
}

/// Expansion of `S_{μ,−1}(a;λ)`: double-pole part at `s = 1` plus the tail
/// `a^{−2μ} Σ_{k≥1} (−1)^k ζ(1−2k) P_k(μ,λ) a^{−2k}`, cut at `k_max` or at
/// the smallest term.
pub fn gamma_minus1_expansion<T: Scalar>(
    mu: &Real,
    lambda: &Real,
    a: &T,
    k_max: Option<usize>,
    ctx: &Context,
) -> Result<ExpansionResult<T>> {
    let params = SeriesParams::new(mu.clone(), ctx.int(-1), lambda.clone(), a.clone())?;
    if let Some(m) = mu.to_i64() {
        if m >= 2 {
            return Err(Error::Domain("gamma = -1 expansion supports mu = 1 and non-integer mu only".into()));
        }
    }
    let one = ctx.one();
    let half = ctx.ratio(1, 2);
    let eg = ctx.euler_gamma();
    let scale = a.powr(&-(mu * 2), ctx);
    let ln_a = a.ln(ctx);
    let mut algebraic = Vec::new();
    if mu.is_zero() {
        // limit μ → 0: ln a + γ_E/2 − ½ ln λ
        let c = eg.ldexp(-1) - lambda.ln(ctx).ldexp(-1);
        algebraic.push((String::from("double pole"), scale.clone() * (ln_a + t_real(c))));
    } else if mu == &one {
        let c = lambda.exp(ctx) * (lambda.ln(ctx) + &eg - 1) - lambda.ln(ctx) + &eg + 1
            - lambda * tau_series(lambda, ctx);
        let v = (ln_a.scale(&ctx.int(2)) + t_real(c)).scale(&half);
        algebraic.push((String::from("double pole"), scale.clone() * v));
    } else {
        let two_minus = ctx.int(2) - mu;
        let f22 = specfun::hypergeometric_pfq(&[one.clone(), one.clone()], &[ctx.int(2), two_minus], lambda, ctx)?;
        let c = eg.ldexp(-1) - specfun::digamma(mu, ctx)?.ldexp(-1) + lambda / ((&one - mu) * 2) * f22;
        algebraic.push((String::from("double pole"), scale.clone() * (ln_a + t_real(c))));
        let h2 = lambda.pow(mu, ctx)
            * specfun::gamma(&-mu.clone(), ctx)?
            * specfun::kummer_1f1(mu, &(&one + mu), lambda, ctx)?;
        algebraic.push((String::from("simple pole"), scale.scale(&h2.ldexp(-1))));
    }
    let head = algebraic.iter().fold(t_real::<T>(ctx.zero()), |acc, (_, v)| acc + v.clone());
    let floor = ctx.eps() * head.modulus();
    let (kept, omitted, last) = truncate_series(|k| algebraic_term(&params, k, ctx), 1, k_max, &floor)?;
    for (k, t) in kept {
        algebraic.push((format!("k={k}"), t));
    }
    let trunc = Truncation { k_max: Some(last), ..Default::default() };
    Ok(ExpansionResult::assemble(algebraic, Vec::new(), trunc, omitted, ctx))
}
