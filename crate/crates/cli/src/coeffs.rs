use mathieu_core::expansion::{self as ex};
use mathieu_core::rational::{rational_to_real, RatPoly, Rational};
use mathieu_core::{Context, Error, Result};
use num_bigint::BigInt;

use crate::args::{CoeffArgs, Family};
use crate::report::CoeffRow;

/// Accepts `7/10`, `-3`, `0.35` or `2.5e-1`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(digits * ten.pow(scale as u32))
    } else {
        Rational::new(digits, ten.pow((-scale) as u32))
    })
}

pub fn coeffs(args: &CoeffArgs, digits: u32) -> Result<Vec<CoeffRow>> {
    let ctx = Context::new(digits)?;
    let lambda = ctx.parse(&args.lambda)?;
    let d = digits as usize;
    let rat_row = |family: &str, index: String, v: &Rational| CoeffRow {
        family: family.into(),
        index,
        exact: v.to_string(),
        value: rational_to_real(v, &ctx).to_sci_string(d),
    };
    let poly_row = |family: &str, index: String, v: &RatPoly| CoeffRow {
        family: family.into(),
        index,
        exact: v.to_string(),
        value: v.eval(&lambda, &ctx).to_sci_string(d),
    };
    let (m, p, n) = (args.m, args.p, args.order);
    let mut rows = Vec::new();
    match args.family {
        Family::C => {
            for j in 0..=n {
                rows.push(rat_row("c", format!("j={j}"), &ex::coeff_c(j, p)));
            }
        }
        Family::CHat => {
            for r in 0..=n {
                for j in 0..=n {
                    rows.push(rat_row("chat", format!("j={j},r={r}"), &ex::coeff_c_hat(j, r, m, p)));
                }
            }
        }
        Family::BigC => {
            for r in 0..=n {
                rows.push(poly_row("C", format!("r={r}"), &ex::coeff_big_c(r, m, p)));
            }
        }
        Family::A => {
            if m < 1 {
                return Err(Error::Domain("A_l needs m >= 1".into()));
            }
            for l in 0..m as u32 {
                rows.push(poly_row("A", format!("l={l}"), &ex::coeff_a(l, m)?));
            }
        }
        Family::B => {
            for l in 0..=n {
                for (r, b) in ex::coeff_b_row(l, p).iter().enumerate() {
                    rows.push(rat_row("B", format!("r={r},l={l}"), b));
                }
            }
        }
        Family::R => {
            let mu = parse_rational(&args.mu)?;
            for k in 0..=args.q {
                rows.push(poly_row("R", format!("k={k},q={}", args.q), &ex::residue_r_poly(k, args.q, &mu)?));
            }
        }
        Family::Sigma => {
            let a = ctx.parse(&args.a)?;
            for r in 0..=n {
                let v = ex::sigma_r(r, &a, &ctx)?;
                if let Some(c) = ex::sigma_closed(r, &a, &ctx) {
                    let tol = ctx.pow10(-(digits as i64 - 3));
                    if (&v - &c).abs() > tol * c.abs() {
                        return Err(Error::NonConvergence(format!("sigma_{r}: sum and closed form disagree")));
                    }
                }
                rows.push(CoeffRow { family: "sigma".into(), index: format!("r={r}"), exact: String::new(), value: v.to_sci_string(d) });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mathieu_core::rational::rat;

    #[test]
    fn rationals_from_text() {
        assert_eq!(parse_rational("7/10").unwrap(), rat(7, 10));
        assert_eq!(parse_rational("0.7").unwrap(), rat(7, 10));
        assert_eq!(parse_rational("-3").unwrap(), rat(-3, 1));
        assert_eq!(parse_rational("2.5e-1").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("1.5E2").unwrap(), rat(150, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
