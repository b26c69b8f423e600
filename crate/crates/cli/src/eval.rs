use std::time::Instant;

use mathieu_core::expansion::{self, ExpansionResult};
use mathieu_core::oracle::{self, GammaClass, SeriesParams};
use mathieu_core::{Complex, Context, Error, Real, Result, Scalar};
use rayon::prelude::*;

use crate::args::{Method, SeriesArgs, SweepArgs, Truncations};
use crate::report::{EvalReport, LedgerEntry, Summary, Table1Cell};

/// Largest J2 index scanned when looking for the smallest term.
const R_SCAN: usize = 60;

pub fn fmt_scalar<T: Scalar>(x: &T, digits: usize) -> String {
    let re = x.real_part().to_sci_string(digits);
    let im = x.imag_part();
    if im.is_zero() {
        return re;
    }
    let sign = if im.is_negative() { '-' } else { '+' };
    format!("{re}{sign}{}i", im.abs().to_sci_string(digits))
}

/// Scalars that can also take the integral (Theorem-1) route.
pub trait Evaluable: Scalar + Send + Sync {
    fn theorem1(p: &SeriesParams<Self>, t: &Truncations, ctx: &Context) -> Result<ExpansionResult<Self>>;
}

impl Evaluable for Real {
    fn theorem1(p: &SeriesParams<Real>, t: &Truncations, ctx: &Context) -> Result<ExpansionResult<Real>> {
        expansion::theorem1_total(p, t.k_max, t.j_max, ctx)
    }
}

impl Evaluable for Complex {
    fn theorem1(_: &SeriesParams<Complex>, _: &Truncations, _: &Context) -> Result<ExpansionResult<Complex>> {
        Err(Error::Domain("the integral route needs real a".into()))
    }
}

pub fn resolve_method<T: Scalar>(p: &SeriesParams<T>, requested: Method, j_max: Option<usize>) -> Result<Method> {
    if requested != Method::Auto {
        return Ok(requested);
    }
    Ok(match p.class() {
        GammaClass::MinusOne => Method::GammaMinus1,
        GammaClass::OddNegative(g) => {
            return Err(Error::Domain(format!("gamma = {g}: odd negative values below -1 are not supported")))
        }
        GammaClass::General => Method::Algebraic,
        GammaClass::Even(pp) => {
            let real_a = p.a.imag_part().is_zero();
            if p.mu.is_zero() && real_a && pp >= 0 {
                // closed form, no quadrature needed
                Method::Theorem1
            } else if p.mu_integer().is_some() {
                Method::Theorem2
            } else if real_a && (pp >= 0 || j_max.is_some()) {
                Method::Theorem1
            } else {
                return Err(Error::Domain(
                    "even gamma with non-integer mu needs real a (and --j-max when gamma < 0)".into(),
                ));
            }
        }
    })
}

fn expand<T: Evaluable>(
    p: &SeriesParams<T>,
    method: Method,
    t: &Truncations,
    ctx: &Context,
) -> Result<(ExpansionResult<T>, Option<T>)> {
    match method {
        Method::Auto => unreachable!("resolved before expansion"),
        Method::Algebraic => Ok((expansion::algebraic_expansion_general(p, t.k_max, ctx)?, None)),
        Method::GammaMinus1 => {
            if p.class() != GammaClass::MinusOne {
                return Err(Error::Domain("gamma-minus1 needs gamma = -1".into()));
            }
            Ok((expansion::gamma_minus1_expansion(&p.mu, &p.lambda, &p.a, t.k_max, ctx)?, None))
        }
        Method::Theorem1 => Ok((T::theorem1(p, t, ctx)?, None)),
        Method::Theorem2 => {
            let m = p.mu_integer().ok_or_else(|| Error::Domain("theorem2 needs integer mu".into()))?;
            let GammaClass::Even(pp) = p.class() else {
                return Err(Error::Domain("theorem2 needs even gamma".into()));
            };
            let r_max = match t.r_max {
                Some(r) => r,
                None => expansion::j2_optimal_r_max(m, pp, &p.lambda, &p.a, R_SCAN, ctx)?,
            };
            let total = expansion::theorem2_total(p, r_max, ctx)?;
            Ok((total, Some(expansion::s_hat(p, ctx)?)))
        }
    }
}

fn report_for<T: Evaluable>(
    p: &SeriesParams<T>,
    series: &SeriesArgs,
    t: &Truncations,
    ctx: &Context,
) -> Result<EvalReport> {
    let start = Instant::now();
    let method = resolve_method(p, t.method, t.j_max)?;
    let d = ctx.digits() as usize;
    let (truth, oracle_terms) = oracle::direct_sum_counted(p, ctx)?;
    let (e, s_hat) = expand(p, method, t, ctx)?;
    let diff = (truth.clone() - e.value.clone()).modulus();
    let rel = if truth.is_zero() { diff.clone() } else { &diff / &truth.modulus() };
    let rel_hat = s_hat.as_ref().map(|s| (&diff / &s.modulus()).to_sci_string(d));
    let mut ledger: Vec<LedgerEntry> = e
        .algebraic_terms
        .iter()
        .map(|(label, v)| LedgerEntry { label: label.clone(), value: fmt_scalar(v, d) })
        .collect();
    ledger.extend(
        e.exponential_terms
            .iter()
            .map(|term| LedgerEntry { label: format!("{} {}", term.label, term.index), value: fmt_scalar(&term.value, d) }),
    );
    let summary = Summary {
        method: method.name().to_string(),
        digits: ctx.digits(),
        mu: series.mu.clone(),
        gamma: series.gamma.clone(),
        lambda: series.lambda.clone(),
        a: match &series.a_imag {
            Some(im) => format!("{}{}{}i", series.a, if im.starts_with('-') { "" } else { "+" }, im),
            None => series.a.clone(),
        },
        oracle_value: fmt_scalar(&truth, d),
        expansion_value: fmt_scalar(&e.value, d),
        abs_err: diff.to_sci_string(d),
        rel_err: rel.to_sci_string(d),
        est_truncation_error: e.est_truncation_error.to_sci_string(d),
        s_hat: s_hat.as_ref().map(|s| fmt_scalar(s, d)),
        rel_err_vs_s_hat: rel_hat,
        k_max: e.truncation.k_max,
        r_max: e.truncation.r_max,
        j_max: e.truncation.j_max,
        oracle_terms,
        terms_used: ledger.len(),
        wall_time_ms: t.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    };
    Ok(EvalReport { summary, ledger })
}

/// One evaluation with its own precision context.
pub fn eval_point(series: &SeriesArgs, t: &Truncations, digits: u32) -> Result<EvalReport> {
    let ctx = Context::new(digits)?;
    let mu = ctx.parse(&series.mu)?;
    let gamma = ctx.parse(&series.gamma)?;
    let lambda = ctx.parse(&series.lambda)?;
    let re = ctx.parse(&series.a)?;
    match &series.a_imag {
        Some(im) => {
            let a = Complex::new(re, ctx.parse(im)?);
            report_for(&SeriesParams::new(mu, gamma, lambda, a)?, series, t, &ctx)
        }
        None => report_for(&SeriesParams::new(mu, gamma, lambda, re)?, series, t, &ctx),
    }
}

/// Grid in the order a, λ, r_max (outermost first); rows come back in that order.
pub fn sweep(args: &SweepArgs, digits: u32) -> Result<Vec<EvalReport>> {
    let r_axis: Vec<Option<usize>> =
        if args.r_max.is_empty() { vec![None] } else { args.r_max.iter().copied().map(Some).collect() };
    let mut points = Vec::new();
    for a in &args.a {
        for lambda in &args.lambda {
            for r in &r_axis {
                let series = SeriesArgs {
                    mu: args.mu.clone(),
                    gamma: args.gamma.clone(),
                    lambda: lambda.clone(),
                    a: a.clone(),
                    a_imag: None,
                };
                let t = Truncations {
                    method: args.method,
                    k_max: args.k_max,
                    r_max: *r,
                    j_max: args.j_max,
                    timing: args.timing,
                };
                points.push((series, t));
            }
        }
    }
    if points.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    points.par_iter().map(|(s, t)| eval_point(s, t, digits)).collect()
}

pub const TABLE1_ROWS: [usize; 7] = [0, 1, 2, 5, 10, 15, 20];
pub const TABLE1_COLUMNS: [(i64, i64); 3] = [(0, -2), (1, 0), (2, 0)];

fn table1_column(m: i64, gamma: i64, digits: u32) -> Result<Vec<Table1Cell>> {
    let ctx = Context::new(digits)?;
    let (lambda, a) = (ctx.int(2), ctx.int(3));
    let p = SeriesParams::new(ctx.int(m), ctx.int(gamma), lambda.clone(), a.clone())?;
    let s_hat = expansion::s_hat(&p, &ctx)?;
    let j2 = expansion::j2_asymptotic(m, gamma / 2, &lambda, &a, TABLE1_ROWS[6], &ctx)?;
    let d = digits as usize;
    let cell = |row: String, value: String| Table1Cell { mu: m.to_string(), gamma: gamma.to_string(), row, value };
    let mut out = Vec::new();
    let mut partial = ctx.zero();
    for t in &j2.exponential_terms {
        partial += &t.value;
        if TABLE1_ROWS.contains(&t.index) {
            let rel = (&partial - &s_hat).abs() / s_hat.abs();
            out.push(cell(t.index.to_string(), rel.to_sci_string(d)));
        }
    }
    out.push(cell("S_hat".into(), s_hat.to_sci_string(d)));
    Ok(out)
}

/// The 7×3 grid plus the Ŝ row, column by column.
pub fn table1(digits: u32) -> Result<Vec<Table1Cell>> {
    let cols: Vec<Vec<Table1Cell>> =
        TABLE1_COLUMNS.par_iter().map(|&(m, g)| table1_column(m, g, digits)).collect::<Result<_>>()?;
    Ok(cols.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(mu: &str, gamma: &str) -> SeriesParams<Real> {
        let c = Context::new(20).unwrap();
        SeriesParams::new(c.parse(mu).unwrap(), c.parse(gamma).unwrap(), c.int(2), c.int(3)).unwrap()
    }

    #[test]
    fn auto_method_by_class() {
        let pick = |mu, g, j| resolve_method(&params(mu, g), Method::Auto, j).unwrap();
        assert_eq!(pick("0", "0", None), Method::Theorem1);
        assert_eq!(pick("1", "0", None), Method::Theorem2);
        assert_eq!(pick("0", "-2", None), Method::Theorem2);
        assert_eq!(pick("0.5", "2", None), Method::Theorem1);
        assert_eq!(pick("0.5", "-2", Some(3)), Method::Theorem1);
        assert_eq!(pick("0.5", "0.3", None), Method::Algebraic);
        assert_eq!(pick("1", "-1", None), Method::GammaMinus1);
        assert!(resolve_method(&params("0.5", "-2"), Method::Auto, None).is_err());
        assert!(resolve_method(&params("1", "-5"), Method::Auto, None).is_err());
        assert_eq!(resolve_method(&params("1", "0"), Method::Algebraic, None).unwrap(), Method::Algebraic);
    }

    #[test]
    fn scalar_formatting() {
        let c = Context::new(20).unwrap();
        assert_eq!(fmt_scalar(&c.ratio(-1, 4), 3), "-2.50e-1");
        let z = Complex::new(c.one(), c.ratio(-1, 2));
        assert_eq!(fmt_scalar(&z, 2), "1.0e0-5.0e-1i");
    }
}
