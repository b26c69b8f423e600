use mathieu_core::expansion as ex;
use mathieu_core::oracle::{self, SeriesParams};
use mathieu_core::rational::{rat, rat_int, RatPoly, Rational};
use mathieu_core::{Context, Real, Result};

use crate::report::VerifyRow;

struct Suite {
    ctx: Context,
    rows: Vec<VerifyRow>,
}

impl Suite {
    fn tol(&self, loss: i64) -> Real {
        self.ctx.pow10(-(self.ctx.digits() as i64 - loss))
    }

    fn numeric(&mut self, check: &str, case: String, measured: Real, threshold: Real) {
        self.rows.push(VerifyRow {
            check: check.into(),
            case,
            measured: measured.to_sci_string(6),
            threshold: threshold.to_sci_string(3),
            pass: measured <= threshold,
        });
    }

    fn exact(&mut self, check: &str, case: String, ok: bool) {
        let verdict = if ok { "equal" } else { "differ" };
        self.rows.push(VerifyRow {
            check: check.into(),
            case,
            measured: verdict.into(),
            threshold: "equal".into(),
            pass: ok,
        });
    }

    fn sum(&self, mu: i64, gamma: i64, lambda: &Real, a: &Real) -> Result<Real> {
        let c = &self.ctx;
        oracle::direct_sum(&SeriesParams::new(c.int(mu), c.int(gamma), lambda.clone(), a.clone())?, c)
    }
}

fn rel(x: &Real, y: &Real) -> Real {
    (x - y).abs() / y.abs()
}

fn rising(s: &Rational, r: usize) -> Rational {
    (0..r).fold(rat(1, 1), |acc, i| acc * (s + rat_int(1 + i as i64)))
}

/// The invariant suite. Thresholds scale with the working precision.
pub fn verify(digits: u32, perturb: bool) -> Result<Vec<VerifyRow>> {
    let mut s = Suite { ctx: Context::new(digits)?, rows: Vec::new() };
    let c = s.ctx.clone();

    // G(±2k+δ) = 0
    for (mu, gamma, lam) in [("0.3", "0.7", "1.5"), ("1.7", "-0.4", "0.6"), ("2.45", "2.2", "3.1")] {
        let (mu_r, g_r, l_r) = (c.parse(mu)?, c.parse(gamma)?, c.parse(lam)?);
        let delta = &mu_r * 2 - &g_r;
        for k in 0..4i64 {
            for sign in [1i64, -1] {
                let at = &delta + 2 * k * sign;
                let g = oracle::mellin_g(&at, &mu_r, &g_r, &l_r, &c)?.abs();
                let tol = s.tol(8);
                s.numeric("G regular", format!("mu={mu} gamma={gamma} lambda={lam} s=delta{:+}", 2 * k * sign), g, tol);
            }
        }
    }

    // exact J at μ = 0
    for pp in 0..3i64 {
        for (a, lam) in [("2", "1"), ("3", "2"), ("5", "0.5")] {
            let p = SeriesParams::new(c.zero(), c.int(2 * pp), c.parse(lam)?, c.parse(a)?)?;
            let truth = oracle::direct_sum(&p, &c)?;
            let e = ex::theorem1_total(&p, None, None, &c)?;
            let tol = s.tol(5);
            s.numeric("exact J mu=0", format!("p={pp} a={a} lambda={lam}"), rel(&e.value, &truth), tol);
        }
    }

    // series identities
    for (a, lam) in [("2.5", "0.7"), ("4", "2")] {
        let (a_r, l_r) = (c.parse(a)?, c.parse(lam)?);
        let a2 = &a_r * &a_r;
        let a4 = &a2 * &a2;
        let s00 = s.sum(0, 0, &l_r, &a_r)?;
        let s10 = s.sum(1, 0, &l_r, &a_r)?;
        let s20 = s.sum(2, 0, &l_r, &a_r)?;
        let s22 = s.sum(2, 2, &l_r, &a_r)?;
        let s12 = s.sum(1, 2, &l_r, &a_r)?;
        let s24 = s.sum(2, 4, &l_r, &a_r)?;
        let case = format!("a={a} lambda={lam}");
        let tol = s.tol(3);
        s.numeric("S(1,2) = S(0,0) - a^2 S(1,0)", case.clone(), rel(&(&s00 - &a2 * &s10), &s12), tol.clone());
        s.numeric("S(2,2) = S(1,0) - a^2 S(2,0)", case.clone(), rel(&(&s10 - &a2 * &s20), &s22), tol.clone());
        s.numeric(
            "S(2,4) = S(0,0) - 2a^2 S(2,2) - a^4 S(2,0)",
            case.clone(),
            rel(&(&s00 - &a2 * &s22 * 2 - &a4 * &s20), &s24),
            tol.clone(),
        );
        let p = SeriesParams::new(c.parse("0.8")?, c.parse("0.5")?, l_r.clone(), a_r.clone())?;
        let alt = oracle::alternating_sum(&p, &c)?;
        let red = oracle::alternating_by_reduction(&p, &c)?;
        s.numeric("alternating reduction", case, rel(&red, &alt), tol);
    }

    // coefficient dualities
    for m in 0..5i64 {
        for p in -3..5i64 {
            for r in 0..7u32 {
                if let Some(h) = ex::coeff_big_c_2f2(r, m, p) {
                    let mut conv = ex::coeff_big_c_convolution(r, m, p);
                    if perturb && (m, p, r) == (2, 0, 3) {
                        conv = &conv + &RatPoly::constant(rat(1, 1000));
                    }
                    s.exact("C two routes", format!("m={m} p={p} r={r}"), h == conv);
                }
            }
        }
    }
    for l in 0..6u32 {
        for p in -3..4i64 {
            let row = ex::coeff_b_row(l, p);
            let ok = [rat(-7, 3), rat(0, 1), rat(5, 2), rat(11, 1)].iter().all(|x| {
                let rhs = row.iter().enumerate().fold(rat(0, 1), |acc, (r, b)| acc + b * rising(x, r));
                let base = rat_int(1 - p) + x / rat_int(2);
                let lhs = (0..l).fold(rat(1, 1), |acc, i| acc * (&base + rat_int(i as i64)));
                lhs == rhs
            });
            s.exact("B basis change", format!("l={l} p={p}"), ok);
        }
    }

    // σ_r closed forms
    for a in [1i64, 3, 10] {
        for r in 0..4u32 {
            let a_r = c.int(a);
            let sum = ex::sigma_r(r, &a_r, &c)?;
            let closed = ex::sigma_closed(r, &a_r, &c).expect("r <= 3");
            let tol = s.tol(3);
            s.numeric("sigma closed form", format!("r={r} a={a}"), rel(&sum, &closed), tol);
        }
    }
    Ok(s.rows)
}
