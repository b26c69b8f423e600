//! Double-exponential quadrature: tanh-sinh on finite intervals and
//! exp-sinh on half-lines, with level-by-level step halving.
//!
//! Integrands are vector valued so that a family of integrals sharing the
//! same expensive factor (e.g. `e^{-ψ(t)}`) is evaluated on one set of nodes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{Context, Real};
use crate::error::{Error, Result};
use crate::specfun;

const MAX_LEVEL: u32 = 12;
/// Consecutive negligible contributions before a side of the sum is cut.
const TAIL_RUN: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rule {
    TanhSinh,
    ExpSinh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Pos,
    Neg,
}

/// Abscissa-like quantity and weight of one node.
///
/// Tanh-sinh stores the complement `1 - |u|` so points near an endpoint keep
/// their full relative accuracy; exp-sinh stores the offset `e^s` itself.
#[derive(Clone)]
struct Node {
    x: Real,
    w: Real,
}

struct NodeList {
    rule: Rule,
    side: Side,
    level: u32,
    bits: usize,
    nodes: Vec<Node>,
    /// Set once the list reaches the cut-off in `s`.
    complete: bool,
}

/// Lazily grown abscissae and weights, shared per context.
#[derive(Default)]
pub struct NodeCache {
    lists: Vec<NodeList>,
}

fn node_t(level: u32, idx: usize, ctx: &Context) -> Real {
    if level == 0 {
        ctx.int(idx as i64 + 1)
    } else {
        ctx.int(2 * idx as i64 + 1).ldexp(-(level as i32))
    }
}

fn s_cutoff(ctx: &Context) -> Real {
    ctx.int(20 * ctx.working_digits() as i64)
}

fn make_node(rule: Rule, side: Side, t: &Real, ctx: &Context) -> Option<Node> {
    let half_pi = ctx.pi().ldexp(-1);
    let s = &half_pi * t.sinh(ctx);
    if s > s_cutoff(ctx) {
        return None;
    }
    let ch = t.cosh(ctx);
    match rule {
        Rule::TanhSinh => {
            // 1 - tanh s = 2 / (1 + e^{2s}),  weight (π/2) cosh t / cosh² s
            let e2s = (&s * 2).exp(ctx);
            let c = ctx.int(2) / (e2s + 1);
            let chs = s.cosh(ctx);
            let w = &half_pi * ch / (&chs * &chs);
            Some(Node { x: c, w })
        }
        Rule::ExpSinh => {
            let es = match side {
                Side::Pos => s.exp(ctx),
                Side::Neg => (-s).exp(ctx),
            };
            let w = &half_pi * ch * &es;
            Some(Node { x: es, w })
        }
    }
}

/// Node `idx` of the given level and side, or `None` past the cut-off.
fn node(rule: Rule, side: Side, level: u32, idx: usize, ctx: &Context) -> Option<Node> {
    let bits = ctx.bits();
    {
        let cache = ctx.cache.borrow();
        if let Some(list) = cache
            .nodes
            .lists
            .iter()
            .find(|l| l.rule == rule && l.side == side && l.level == level && l.bits == bits)
        {
            if idx < list.nodes.len() {
                return Some(list.nodes[idx].clone());
            }
            if list.complete {
                return None;
            }
        }
    }
    let made = make_node(rule, side, &node_t(level, idx, ctx), ctx);
    let mut cache = ctx.cache.borrow_mut();
    let lists = &mut cache.nodes.lists;
    let pos = match lists
        .iter()
        .position(|l| l.rule == rule && l.side == side && l.level == level && l.bits == bits)
    {
        Some(p) => p,
        None => {
            lists.push(NodeList { rule, side, level, bits, nodes: Vec::new(), complete: false });
            lists.len() - 1
        }
    };
    let list = &mut lists[pos];
    // nodes are requested in order, so `idx` is the next one to append
    match made {
        Some(n) => {
            if list.nodes.len() == idx {
                list.nodes.push(n.clone());
            }
            Some(n)
        }
        None => {
            list.complete = true;
            None
        }
    }
}

/// Integration domain.
#[derive(Clone, Debug)]
pub enum Domain {
    /// `[lo, hi]`, endpoint singularities allowed.
    Finite { lo: Real, hi: Real },
    /// `[lo, ∞)`.
    HalfLine { lo: Real },
}

/// `e^{x}` that flushes to zero instead of leaving the exponent range.
pub fn exp_or_zero(x: &Real, ctx: &Context) -> Real {
    if x.to_f64() < -1.0e8 {
        ctx.zero()
    } else {
        x.exp(ctx)
    }
}

fn accumulate(acc: &mut [Real], vals: &[Real]) {
    for (a, v) in acc.iter_mut().zip(vals) {
        *a += v;
    }
}

/// Integrate a vector-valued `f` of dimension `dim` over `domain`.
///
/// Each component is driven to a relative accuracy of `10^-digits` of the
/// context; the level loop stops when successive estimates agree to that
/// accuracy with a factor of 100 to spare.
pub fn integrate<F>(mut f: F, dim: usize, domain: &Domain, ctx: &Context) -> Result<Vec<Real>>
where
    F: FnMut(&Real) -> Result<Vec<Real>>,
{
    let rule = match domain {
        Domain::Finite { .. } => Rule::TanhSinh,
        Domain::HalfLine { .. } => Rule::ExpSinh,
    };
    let half_width = match domain {
        Domain::Finite { lo, hi } => (hi - lo).ldexp(-1),
        Domain::HalfLine { .. } => ctx.one(),
    };
    let eps = ctx.eps();
    let node_tol = ctx.working_eps();
    let mut raw = vec![ctx.zero(); dim];
    let mut prev: Option<Vec<Real>> = None;

    // evaluate at the point(s) belonging to node n, returning the weighted values
    let mut eval = |n: &Node| -> Result<Vec<Real>> {
        match domain {
            Domain::Finite { lo, hi } => {
                let d = &half_width * &n.x;
                let left = f(&(lo + &d))?;
                let right = f(&(hi - &d))?;
                Ok(left.into_iter().zip(right).map(|(l, r)| (l + r) * &n.w).collect())
            }
            Domain::HalfLine { lo } => {
                let vals = f(&(lo + &n.x))?;
                Ok(vals.into_iter().map(|v| v * &n.w).collect())
            }
        }
    };

    for level in 0..=MAX_LEVEL {
        let h = ctx.one().ldexp(-(level as i32));
        let mut level_sum = vec![ctx.zero(); dim];
        if level == 0 {
            // t = 0 has weight π/2; the finite rule visits the midpoint from both sides
            let w = match rule {
                Rule::TanhSinh => ctx.pi().ldexp(-2),
                Rule::ExpSinh => ctx.pi().ldexp(-1),
            };
            let v = eval(&Node { x: ctx.one(), w })?;
            accumulate(&mut level_sum, &v);
        }
        let sides: &[Side] = match rule {
            Rule::TanhSinh => &[Side::Pos],
            Rule::ExpSinh => &[Side::Pos, Side::Neg],
        };
        for &side in sides {
            let mut run = 0usize;
            let mut idx = 0usize;
            while let Some(n) = node(rule, side, level, idx, ctx) {
                let v = eval(&n)?;
                let scale: Vec<Real> = match &prev {
                    Some(p) => p.iter().map(Real::abs).collect(),
                    None => raw.iter().zip(&level_sum).map(|(r, l)| (r + l).abs()).collect(),
                };
                let negligible = v
                    .iter()
                    .zip(&scale)
                    .all(|(x, s)| (x * &h * &half_width).abs() <= &node_tol * s);
                accumulate(&mut level_sum, &v);
                run = if negligible { run + 1 } else { 0 };
                if run >= TAIL_RUN {
                    break;
                }
                idx += 1;
            }
        }
        for (r, l) in raw.iter_mut().zip(&level_sum) {
            *r += l;
        }
        let est: Vec<Real> = raw.iter().map(|r| r * &h * &half_width).collect();
        if let Some(p) = &prev {
            let done = est
                .iter()
                .zip(p)
                .all(|(e, q)| (e - q).abs() * 100 <= &eps * &e.abs());
            if done && level >= 3 {
                return Ok(est);
            }
        }
        prev = Some(est);
    }
    Err(Error::NonConvergence(format!(
        "double-exponential quadrature did not settle after {MAX_LEVEL} levels"
    )))
}

/// Parameters of the family
/// `∫_0^∞ t^{μ-1} exp(-λ (t - t_s)² / (1+t)) (1+t)^{-ν_j} dt`, `ν_j = ν_0 - j`.
///
/// The exponent is the non-negative form of `λ(1+t) + X/(1+t) - 2√(λX)`,
/// which vanishes at its minimum `t_s = √(X/λ) - 1`.
#[derive(Clone, Debug)]
pub struct PeakedFamily {
    pub mu: Real,
    pub lambda: Real,
    pub t_peak: Real,
    pub nu0: Real,
    pub count: usize,
}

/// All members `j = 0..count` of a [`PeakedFamily`], split at the peak.
pub fn peaked_integrals(fam: &PeakedFamily, ctx: &Context) -> Result<Vec<Real>> {
    if !fam.mu.is_positive() || !fam.lambda.is_positive() {
        return Err(Error::Domain("peaked integrals need mu > 0 and lambda > 0".into()));
    }
    let one = ctx.one();
    let mu_m1 = &fam.mu - &one;
    let unit_power = mu_m1.is_zero();
    let f = |t: &Real| -> Result<Vec<Real>> {
        if !t.is_positive() {
            return Ok(vec![ctx.zero(); fam.count]);
        }
        let u = &one + t;
        let d = t - &fam.t_peak;
        let psi = &fam.lambda * &d * &d / &u;
        let ln_u = u.ln(ctx);
        let mut log_common = -psi - &fam.nu0 * &ln_u;
        if !unit_power {
            log_common += &mu_m1 * t.ln(ctx);
        }
        let mut cur = exp_or_zero(&log_common, ctx);
        let mut out = Vec::with_capacity(fam.count);
        for _ in 0..fam.count {
            out.push(cur.clone());
            cur *= &u;
        }
        Ok(out)
    };
    if !fam.t_peak.is_positive() {
        return integrate(f, fam.count, &Domain::HalfLine { lo: ctx.zero() }, ctx);
    }
    let left = integrate(&f, fam.count, &Domain::Finite { lo: ctx.zero(), hi: fam.t_peak.clone() }, ctx)?;
    let right = integrate(&f, fam.count, &Domain::HalfLine { lo: fam.t_peak.clone() }, ctx)?;
    Ok(left.into_iter().zip(right).map(|(l, r)| l + r).collect())
}

/// `U(a, b, z) = Γ(a)^{-1} ∫_0^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt` for `a, z > 0`.
pub fn integral_u(a: &Real, b: &Real, z: &Real, ctx: &Context) -> Result<Real> {
    if !a.is_positive() || !z.is_positive() {
        return Err(Error::Domain("integral representation of U needs a, z > 0".into()));
    }
    let one = ctx.one();
    let am1 = a - &one;
    let c = b - a - &one;
    let f = |t: &Real| -> Result<Vec<Real>> {
        if !t.is_positive() {
            return Ok(vec![ctx.zero()]);
        }
        let mut e = -(z * t) + &c * (&one + t).ln(ctx);
        if !am1.is_zero() {
            e += &am1 * t.ln(ctx);
        }
        Ok(vec![exp_or_zero(&e, ctx)])
    };
    let v = integrate(f, 1, &Domain::HalfLine { lo: ctx.zero() }, ctx)?;
    Ok(v[0].clone() * specfun::rgamma(a, ctx))
}
