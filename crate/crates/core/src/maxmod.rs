//! Maximum modulus on circles, threshold radii, and iterated towers.
//!
//! `M(r) = max over |z| = r of |f(z)|` is approximated by equispaced
//! sampling of the circle followed by golden-section refinement around the
//! best angle. The result is reported in log scale and is a lower bound on
//! the true maximum by construction.
//!
//! Towers `M^k(R)` grow doubly exponentially, so the iteration tracks the
//! circle radius in three regimes: an exact linear radius while the
//! maximum itself fits in doubles, a log-space radius while `exp` of the
//! stored log still fits, and saturation beyond that. In the log-radius
//! regime the sample points are fed to the evaluator in log-polar form,
//! which for an outermost `exp` reproduces the exact rule
//! `log M(e^rho) = e^rho` without ever forming the radius.

use crate::expr::PointState;
use crate::semigroup::CompositeFn;
use crate::{Complex, LOG_OVERFLOW_CAP, OVERFLOW_CAP};

const TAU: f64 = std::f64::consts::TAU;

/// How circles are sampled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleSampling {
    pub sample_count: usize,
    pub refinement_iters: usize,
}

impl CircleSampling {
    /// `sample_count` below 64 gives useless maxima and is rejected.
    pub fn new(sample_count: usize, refinement_iters: usize) -> Option<Self> {
        if sample_count < 64 {
            return None;
        }
        Some(CircleSampling {
            sample_count,
            refinement_iters,
        })
    }
}

impl Default for CircleSampling {
    fn default() -> Self {
        CircleSampling {
            sample_count: 4096,
            refinement_iters: 32,
        }
    }
}

/// No radius on the scan grid passed the threshold test.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdNotFound {
    pub r_start: f64,
}

impl std::fmt::Display for ThresholdNotFound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "no threshold radius with M(r) > r found within 60 doublings of {}",
            self.r_start
        )
    }
}

impl std::error::Error for ThresholdNotFound {}

/// Per-word threshold radius and iterated max-modulus tower, in log scale.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxModulusTable {
    /// Function or word this tower belongs to.
    pub label: String,
    /// Base radius `R`.
    pub r: f64,
    /// `tower_log[k] = log M^k(R)`; `tower_log[0] = log R`.
    pub tower_log: Vec<f64>,
    /// First index whose value left representable log range, if any.
    pub saturated_at: Option<usize>,
}

impl MaxModulusTable {
    pub fn len(&self) -> usize {
        self.tower_log.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tower_log.is_empty()
    }
}

/// `log M(r)` by circle sampling plus refinement.
pub fn max_modulus(target: &CompositeFn<'_>, r: f64, s: &CircleSampling) -> f64 {
    sample_circle_rect(target, r, s).0
}

/// One circle in the ordinary regime: points are built rectangular, so a
/// maximum attained at a sampled angle is the exact evaluator output there.
fn sample_circle_rect(target: &CompositeFn<'_>, r: f64, s: &CircleSampling) -> (f64, Option<f64>) {
    let eval = |theta: f64| {
        let p = Complex::new(r * theta.cos(), r * theta.sin());
        let state = target.apply(&PointState::Rect(p));
        let lin = match state {
            PointState::Rect(v) => Some(v.norm()),
            _ => None,
        };
        (state.log_mag(), lin)
    };
    sample_circle_with(eval, s)
}

/// One circle at log-radius `rho` (radius `e^rho`, typically beyond double
/// range): points are fed to the evaluator in log-polar form.
fn sample_circle_log_radius(target: &CompositeFn<'_>, rho: f64, s: &CircleSampling) -> f64 {
    let eval = |theta: f64| {
        let state = target.apply(&PointState::LogPolar {
            log_mag: rho,
            arg: theta,
        });
        (state.log_mag(), None)
    };
    sample_circle_with(eval, s).0
}

fn sample_circle_with<F>(eval: F, s: &CircleSampling) -> (f64, Option<f64>)
where
    F: Fn(f64) -> (f64, Option<f64>),
{
    let n = s.sample_count;
    let mut best_g = f64::NEG_INFINITY;
    let mut best_theta = 0.0;
    let mut best_lin = None;
    for j in 0..n {
        let theta = TAU * (j as f64) / (n as f64);
        let (g, lin) = eval(theta);
        if g > best_g {
            best_g = g;
            best_theta = theta;
            best_lin = lin;
        }
    }
    if best_g.is_finite() && s.refinement_iters > 0 {
        let delta = TAU / n as f64;
        // Refinement may only replace the sampled maximum when it is a
        // genuine improvement, not rounding noise: ties at sampled angles
        // must survive so that orbits riding the maximum ray compare
        // bit-exactly against the tower.
        let guard = 4.0 * f64::EPSILON * best_g.abs().max(1.0);
        let (g2, lin2) = golden_max(&eval, best_theta - delta, best_theta + delta, s.refinement_iters);
        if g2 > best_g + guard {
            best_g = g2;
            best_lin = lin2;
        }
    }
    (best_g, best_lin)
}

/// Golden-section search for a maximum of `eval` on `[a, b]`.
fn golden_max<F>(eval: &F, a: f64, b: f64, iters: usize) -> (f64, Option<f64>)
where
    F: Fn(f64) -> (f64, Option<f64>),
{
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut a = a;
    let mut b = b;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let (mut f1, mut l1) = eval(x1);
    let (mut f2, mut l2) = eval(x2);
    let mut best = if f1 >= f2 { (f1, l1) } else { (f2, l2) };
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            l1 = l2;
            x2 = a + INVPHI * (b - a);
            let r = eval(x2);
            f2 = r.0;
            l2 = r.1;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            l2 = l1;
            x1 = b - INVPHI * (b - a);
            let r = eval(x1);
            f1 = r.0;
            l1 = r.1;
        }
        let cand = if f1 >= f2 { (f1, l1) } else { (f2, l2) };
        if cand.0 > best.0 {
            best = cand;
        }
    }
    best
}

/// Smallest radius on the geometric grid `r_start * 2^k`, `k = 0..=60`,
/// such that `M(r) > r` there and at the next 8 grid points, with
/// `log M` convex in `log r` across the window (three-circles check).
/// This certifies the threshold heuristically, not rigorously.
pub fn find_threshold_r(
    target: &CompositeFn<'_>,
    r_start: f64,
    s: &CircleSampling,
) -> Result<f64, ThresholdNotFound> {
    const MAX_DOUBLINGS: usize = 60;
    const LOOKAHEAD: usize = 8;
    let radius = |k: usize| r_start * (2.0f64).powi(k as i32);
    let mut memo: Vec<Option<f64>> = vec![None; MAX_DOUBLINGS + LOOKAHEAD + 1];
    let log_m = |k: usize, memo: &mut Vec<Option<f64>>| -> f64 {
        if let Some(v) = memo[k] {
            return v;
        }
        let v = max_modulus(target, radius(k), s);
        memo[k] = Some(v);
        v
    };
    'grid: for k in 0..=MAX_DOUBLINGS {
        for j in k..=k + LOOKAHEAD {
            let lm = log_m(j, &mut memo);
            if lm == f64::INFINITY {
                continue; // beyond log range, certainly above the radius
            }
            // sampled maxima carry rounding noise of a few ulps; ties such
            // as M(1) = 1 for z^2 must not count as strict growth
            let guard = 4.0 * f64::EPSILON * lm.abs().max(1.0);
            if !(lm > radius(j).ln() + guard) {
                continue 'grid;
            }
        }
        for j in k..=k + LOOKAHEAD - 2 {
            let lo = log_m(j, &mut memo);
            let mid = log_m(j + 1, &mut memo);
            let hi = log_m(j + 2, &mut memo);
            if lo.is_infinite() || mid.is_infinite() || hi.is_infinite() {
                continue; // beyond log range; growth is not in question there
            }
            // grid radii are equispaced in log r, so the chord midpoint is
            // the average
            let defect = mid - 0.5 * (lo + hi);
            if defect > 1e-9 * hi.abs().max(1.0) {
                continue 'grid;
            }
        }
        return Ok(radius(k));
    }
    Err(ThresholdNotFound { r_start })
}

/// Build the tower `M^k(R)` for `k = 0..=n_max` (fewer on saturation).
pub fn mm_tower(
    target: &CompositeFn<'_>,
    label: String,
    r: f64,
    n_max: usize,
    s: &CircleSampling,
) -> MaxModulusTable {
    let mut tower_log = Vec::with_capacity(n_max + 1);
    tower_log.push(r.ln());
    // exact linear radius, kept as long as the previous maximum was
    // evaluated rectangularly; this is what lets real orbits sitting on the
    // maximum ray compare against the tower with zero slack
    let mut linear: Option<f64> = Some(r);
    let mut saturated_at = None;
    for k in 0..n_max {
        let rho = tower_log[k];
        let (log_m, lin_next) = match linear {
            Some(rl) if rl <= OVERFLOW_CAP => sample_circle_rect(target, rl, s),
            _ if rho <= LOG_OVERFLOW_CAP => sample_circle_rect(target, rho.exp(), s),
            _ => (sample_circle_log_radius(target, rho, s), None),
        };
        if !log_m.is_finite() {
            saturated_at = Some(k + 1);
            break;
        }
        tower_log.push(log_m);
        linear = lin_next;
    }
    MaxModulusTable {
        label,
        r,
        tower_log,
        saturated_at,
    }
}
