use super::ast::{EntireFunction, ExprNode};
use crate::{Complex, LOG_OVERFLOW_CAP, OVERFLOW_CAP};

/// A point value in one of two representations.
///
/// Values whose modulus sits in `[1/OVERFLOW_CAP, OVERFLOW_CAP]` (or is
/// exactly zero) are rectangular. Outside that range they are carried as
/// `log|v|` plus argument, which keeps iterated exponentials meaningful far
/// beyond double range. Once a computation promotes to log-polar it stays
/// there; orbits that leave double range never come back in practice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PointState {
    Rect(Complex),
    LogPolar { log_mag: f64, arg: f64 },
}

impl PointState {
    /// `log|v|`. Exact zero gives `-inf`; values whose log-magnitude
    /// itself left double range give `±inf` (or NaN when the phase made
    /// the magnitude undecidable).
    pub fn log_mag(&self) -> f64 {
        match self {
            PointState::Rect(v) => {
                let n = v.norm();
                if n == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    n.ln()
                }
            }
            PointState::LogPolar { log_mag, .. } => *log_mag,
        }
    }

    pub fn arg(&self) -> f64 {
        match self {
            PointState::Rect(v) => v.im.atan2(v.re),
            PointState::LogPolar { arg, .. } => *arg,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, PointState::Rect(v) if v.norm() == 0.0)
    }
}

/// Result of rectangular evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvalValue {
    Finite(Complex),
    /// The value's modulus exceeded [`OVERFLOW_CAP`]; only the signs of the
    /// real and imaginary parts survive.
    Overflow { re_sign: f64, im_sign: f64 },
}

/// Value of the function at `z`, with the overflow sentinel once any
/// magnitude exceeds [`OVERFLOW_CAP`].
pub fn evaluate(f: &EntireFunction, z: Complex) -> EvalValue {
    match eval_state(f.ast(), &PointState::Rect(z)) {
        PointState::Rect(v) => EvalValue::Finite(v),
        PointState::LogPolar { log_mag, arg } => {
            if log_mag <= LOG_OVERFLOW_CAP {
                // representable after all (tiny values promoted for
                // precision); reconstruct
                let m = log_mag.exp();
                EvalValue::Finite(Complex::new(m * arg.cos(), m * arg.sin()))
            } else {
                EvalValue::Overflow {
                    re_sign: sign_of(arg.cos()),
                    im_sign: sign_of(arg.sin()),
                }
            }
        }
    }
}

/// `log|f(z)|`. Exact zeros of `f` give `-inf`. For `exp` nodes the value
/// is `Re` of the argument, computed without forming `e^w`.
pub fn log_magnitude(f: &EntireFunction, z: Complex) -> f64 {
    eval_state(f.ast(), &PointState::Rect(z)).log_mag()
}

/// Evaluate at a point in either representation. This is the entry point
/// orbit iteration and circle sampling share, so that both sides of an
/// escape comparison go through bit-identical arithmetic.
pub fn evaluate_state(f: &EntireFunction, z: &PointState) -> PointState {
    eval_state(f.ast(), z)
}

fn sign_of(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn in_rect_range(v: Complex) -> bool {
    if !v.re.is_finite() || !v.im.is_finite() {
        return false;
    }
    let n = v.norm();
    n == 0.0 || (n >= 1.0 / OVERFLOW_CAP && n <= OVERFLOW_CAP)
}

fn promote(v: Complex) -> (f64, f64) {
    (v.norm().ln(), v.im.atan2(v.re))
}

fn rect_or_promote(v: Complex) -> PointState {
    if in_rect_range(v) {
        PointState::Rect(v)
    } else {
        let (log_mag, arg) = promote(v);
        PointState::LogPolar { log_mag, arg }
    }
}

fn eval_state(node: &ExprNode, z: &PointState) -> PointState {
    use ExprNode::*;
    match node {
        Variable => *z,
        Constant(c) => PointState::Rect(*c),
        Add(l, r) => add_states(eval_state(l, z), eval_state(r, z), 1.0),
        Sub(l, r) => add_states(eval_state(l, z), eval_state(r, z), -1.0),
        Mul(l, r) => mul_states(eval_state(l, z), eval_state(r, z)),
        DivByConst(n, c) => div_const(eval_state(n, z), *c),
        Pow(n, k) => pow_state(eval_state(n, z), *k),
        Exp(n) => exp_state(eval_state(n, z)),
        Sin(n) => trig_state(eval_state(n, z), Trig::Sin),
        Cos(n) => trig_state(eval_state(n, z), Trig::Cos),
        Sinh(n) => trig_state(eval_state(n, z), Trig::Sinh),
        Cosh(n) => trig_state(eval_state(n, z), Trig::Cosh),
    }
}

fn mul_states(a: PointState, b: PointState) -> PointState {
    if a.is_zero() || b.is_zero() {
        return PointState::Rect(Complex::new(0.0, 0.0));
    }
    match (a, b) {
        (PointState::Rect(x), PointState::Rect(y)) => {
            let v = x * y;
            if in_rect_range(v) {
                PointState::Rect(v)
            } else {
                let (la, ta) = promote(x);
                let (lb, tb) = promote(y);
                PointState::LogPolar {
                    log_mag: la + lb,
                    arg: ta + tb,
                }
            }
        }
        _ => {
            let (la, ta) = log_polar_of(a);
            let (lb, tb) = log_polar_of(b);
            PointState::LogPolar {
                log_mag: la + lb,
                arg: ta + tb,
            }
        }
    }
}

fn div_const(a: PointState, c: Complex) -> PointState {
    match a {
        PointState::Rect(x) => {
            let v = x / c;
            rect_or_promote(v)
        }
        PointState::LogPolar { log_mag, arg } => PointState::LogPolar {
            log_mag: log_mag - c.norm().ln(),
            arg: arg - c.im.atan2(c.re),
        },
    }
}

/// `a ± b` with the factored-out-maximum trick in log-polar form.
fn add_states(a: PointState, b: PointState, sign: f64) -> PointState {
    if b.is_zero() {
        return a;
    }
    if a.is_zero() {
        return match b {
            PointState::Rect(y) => PointState::Rect(sign * y),
            PointState::LogPolar { log_mag, arg } => PointState::LogPolar {
                log_mag,
                arg: if sign < 0.0 {
                    arg + std::f64::consts::PI
                } else {
                    arg
                },
            },
        };
    }
    if let (PointState::Rect(x), PointState::Rect(y)) = (a, b) {
        let v = x + sign * y;
        if in_rect_range(v) {
            return PointState::Rect(v);
        }
    }
    let (la, ta) = log_polar_of(a);
    let (lb0, tb) = log_polar_of(b);
    let lb = lb0;
    let lmax = la.max(lb);
    if lmax == f64::NEG_INFINITY {
        return PointState::Rect(Complex::new(0.0, 0.0));
    }
    // components of e^{-lmax} (a ± b); both scale factors are <= 1
    let sa = (la - lmax).exp();
    let sb = (lb - lmax).exp() * sign;
    let u = Complex::new(
        sa * ta.cos() + sb * tb.cos(),
        sa * ta.sin() + sb * tb.sin(),
    );
    let n = u.norm();
    if n == 0.0 {
        // cancellation below representable resolution
        return PointState::Rect(Complex::new(0.0, 0.0));
    }
    PointState::LogPolar {
        log_mag: lmax + n.ln(),
        arg: u.im.atan2(u.re),
    }
}

fn pow_state(a: PointState, k: u32) -> PointState {
    if k == 0 {
        return PointState::Rect(Complex::new(1.0, 0.0));
    }
    match a {
        PointState::Rect(x) => {
            let v = x.powu(k);
            if in_rect_range(v) {
                PointState::Rect(v)
            } else {
                let (l, t) = promote(x);
                PointState::LogPolar {
                    log_mag: k as f64 * l,
                    arg: k as f64 * t,
                }
            }
        }
        PointState::LogPolar { log_mag, arg } => PointState::LogPolar {
            log_mag: k as f64 * log_mag,
            arg: k as f64 * arg,
        },
    }
}

fn exp_state(w: PointState) -> PointState {
    match w {
        PointState::Rect(x) => {
            if x.re.abs() <= LOG_OVERFLOW_CAP {
                PointState::Rect(x.exp())
            } else {
                // log|e^w| = Re w, arg e^w = Im w — exact
                PointState::LogPolar {
                    log_mag: x.re,
                    arg: x.im,
                }
            }
        }
        PointState::LogPolar { .. } => match rect_of_log_polar(w) {
            Some(x) => exp_state(PointState::Rect(x)),
            None => saturated(w),
        },
    }
}

enum Trig {
    Sin,
    Cos,
    Sinh,
    Cosh,
}

fn trig_state(w: PointState, which: Trig) -> PointState {
    let x = match w {
        PointState::Rect(x) => x,
        PointState::LogPolar { .. } => match rect_of_log_polar(w) {
            Some(x) => x,
            None => return saturated(w),
        },
    };
    // the hyperbolic direction drives growth: |Im| for sin/cos, |Re| for
    // sinh/cosh; below the cut plain rectangular evaluation is safe
    let hyp = match which {
        Trig::Sin | Trig::Cos => x.im.abs(),
        Trig::Sinh | Trig::Cosh => x.re.abs(),
    };
    if hyp <= 300.0 {
        let v = match which {
            Trig::Sin => x.sin(),
            Trig::Cos => x.cos(),
            Trig::Sinh => x.sinh(),
            Trig::Cosh => x.cosh(),
        };
        return rect_or_promote(v);
    }
    // factored form: value = e^{hyp} * u with |u| <= 1, computed stably.
    // cosh t = e^{|t|} (1+q)/2, sinh t = sign(t) e^{|t|} (1-q)/2, q=e^{-2|t|}
    let q = (-2.0 * hyp).exp();
    let cosh_scaled = 0.5 * (1.0 + q);
    let sinh_scaled = 0.5 * (1.0 - q);
    let u = match which {
        Trig::Sin => {
            let s = sign_of(x.im);
            Complex::new(x.re.sin() * cosh_scaled, x.re.cos() * sinh_scaled * s)
        }
        Trig::Cos => {
            let s = sign_of(x.im);
            Complex::new(x.re.cos() * cosh_scaled, -x.re.sin() * sinh_scaled * s)
        }
        Trig::Sinh => {
            let s = sign_of(x.re);
            Complex::new(s * sinh_scaled * x.im.cos(), cosh_scaled * x.im.sin())
        }
        Trig::Cosh => {
            let s = sign_of(x.re);
            Complex::new(cosh_scaled * x.im.cos(), s * sinh_scaled * x.im.sin())
        }
    };
    let n = u.norm();
    if n == 0.0 {
        return PointState::Rect(Complex::new(0.0, 0.0));
    }
    PointState::LogPolar {
        log_mag: hyp + n.ln(),
        arg: u.im.atan2(u.re),
    }
}

/// Rectangular coordinates of a log-polar value, when they fit in doubles.
fn rect_of_log_polar(w: PointState) -> Option<Complex> {
    if let PointState::LogPolar { log_mag, arg } = w {
        let m = log_mag.exp();
        if m.is_finite() {
            return Some(Complex::new(m * arg.cos(), m * arg.sin()));
        }
        None
    } else if let PointState::Rect(x) = w {
        Some(x)
    } else {
        None
    }
}

/// Argument so large its exponential image has no representable
/// log-magnitude. The direction of blow-up decides the sign of the result:
/// growth toward `+inf` log-magnitude (definite divergence) or `-inf`
/// (collapse to zero).
fn saturated(w: PointState) -> PointState {
    let arg = w.arg();
    let c = arg.cos();
    let log_mag = if c > 0.0 {
        f64::INFINITY
    } else if c < 0.0 {
        f64::NEG_INFINITY
    } else {
        f64::NAN
    };
    PointState::LogPolar { log_mag, arg: 0.0 }
}

fn log_polar_of(s: PointState) -> (f64, f64) {
    match s {
        PointState::Rect(v) => promote(v),
        PointState::LogPolar { log_mag, arg } => (log_mag, arg),
    }
}
