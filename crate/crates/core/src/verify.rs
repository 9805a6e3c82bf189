//! Empirical checks of the structural properties the classifier is
//! expected to satisfy.
//!
//! Every check samples points, gates them on certification margins where
//! numerical borderline flips would otherwise masquerade as mathematical
//! violations, and reports counts instead of asserting. The one exception
//! is nesting, which holds by construction and is promoted to a hard
//! assertion in the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{Classifier, ClassifierConfig, EngineError, Verdict};
use crate::expr::{evaluate, EvalValue};
use crate::grid::Window;
use crate::maxmod::find_threshold_r;
use crate::semigroup::Semigroup;
use crate::Complex;

/// Outcome of one property check.
#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub property_id: String,
    pub samples: usize,
    /// Samples meeting the check's margin preconditions.
    pub applicable: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub notes: String,
}

impl PropertyReport {
    /// The one-line report format shared by all checks.
    pub fn line(&self) -> String {
        format!(
            "PROP {} samples={} applicable={} violations={} worst_margin={:.6} notes={}",
            self.property_id,
            self.samples,
            self.applicable,
            self.violations,
            self.worst_margin,
            self.notes
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum VerifyError {
    /// The alternative radius failed the threshold test for some word.
    InvalidThreshold { label: String, r2: f64 },
    Engine(EngineError),
}

impl std::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyError::InvalidThreshold { label, r2 } => {
                write!(f, "radius {} is not a valid threshold for word {}", r2, label)
            }
            VerifyError::Engine(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for VerifyError {}

impl From<EngineError> for VerifyError {
    fn from(e: EngineError) -> Self {
        VerifyError::Engine(e)
    }
}

/// Uniform sample over the window. Deterministic for a given seed: the
/// ChaCha8 stream is consumed as re, im pairs in order.
pub fn sample_points(window: &Window, n: usize, seed: u64) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let re = rng.gen_range(window.re_min..window.re_max);
            let im = rng.gen_range(window.im_min..window.im_max);
            Complex::new(re, im)
        })
        .collect()
}

/// Membership at the reported level must survive at level - 1. Holds by
/// construction of the level as a maximum; reported violations indicate an
/// implementation defect, not a property of the semigroup.
pub fn check_nesting(
    s: &Semigroup,
    points: &[Complex],
    cfg: &ClassifierConfig,
) -> Result<PropertyReport, EngineError> {
    let classifier = Classifier::new(s.clone(), cfg.clone())?;
    let mut applicable = 0;
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for &z in points {
        let cl = classifier.classify(z);
        if let Verdict::FastEscaping { level } = cl.verdict {
            applicable += 1;
            let (member, margin) = classifier.membership_at_level(z, level - 1);
            if !member {
                violations += 1;
            } else {
                worst = worst.min(margin);
            }
        }
    }
    Ok(PropertyReport {
        property_id: "nesting".into(),
        samples: points.len(),
        applicable,
        violations,
        worst_margin: if worst.is_finite() { worst } else { 0.0 },
        notes: "level-L membership re-tested at L-1".into(),
    })
}

/// Images of certified fast-escaping points under each generator should
/// land one level higher at word depth W-1. Tested, not assumed.
pub fn check_forward_invariance(
    s: &Semigroup,
    points: &[Complex],
    cfg: &ClassifierConfig,
) -> Result<PropertyReport, EngineError> {
    if cfg.max_word_len < 2 {
        return Ok(PropertyReport {
            property_id: "forward_invariance".into(),
            samples: points.len(),
            applicable: 0,
            violations: 0,
            worst_margin: 0.0,
            notes: "requires word depth >= 2".into(),
        });
    }
    let classifier = Classifier::new(s.clone(), cfg.clone())?;
    let shallow_cfg = ClassifierConfig {
        max_word_len: cfg.max_word_len - 1,
        ..cfg.clone()
    };
    let shallow = Classifier::new(s.clone(), shallow_cfg)?;
    let mut applicable = 0;
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    let mut skipped_images = 0usize;
    for &z in points {
        let cl = classifier.classify(z);
        let level = match cl.verdict {
            Verdict::FastEscaping { level } if cl.margin_log >= cfg.margin_log => level,
            _ => continue,
        };
        applicable += 1;
        let mut violated = false;
        for g in s.generators() {
            let image = match evaluate(g, z) {
                EvalValue::Finite(v) => v,
                EvalValue::Overflow { .. } => {
                    // image left double range; nothing to classify
                    skipped_images += 1;
                    continue;
                }
            };
            let icl = shallow.classify(image);
            match icl.verdict {
                Verdict::FastEscaping { level: il } if il >= level + 1 => {
                    worst = worst.min(icl.margin_log);
                }
                _ => violated = true,
            }
        }
        if violated {
            violations += 1;
        }
    }
    Ok(PropertyReport {
        property_id: "forward_invariance".into(),
        samples: points.len(),
        applicable,
        violations,
        worst_margin: if worst.is_finite() { worst } else { 0.0 },
        notes: format!(
            "images rechecked at depth {}; {} images out of range",
            cfg.max_word_len - 1,
            skipped_images
        ),
    })
}

/// Fast escape under the semigroup must imply escape under every cyclic
/// subsemigroup generated by a single generator.
pub fn check_subset_classical(
    s: &Semigroup,
    points: &[Complex],
    cfg: &ClassifierConfig,
) -> Result<PropertyReport, EngineError> {
    let classifier = Classifier::new(s.clone(), cfg.clone())?;
    let mut cyclic = Vec::new();
    for g in s.generators() {
        let cs = Semigroup::cyclic(g.clone());
        match cs {
            Ok(cs) => cyclic.push(Some(Classifier::new(cs, cfg.clone())?)),
            // a polynomial generator alone is not a transcendental
            // semigroup; the classical comparison is skipped for it
            Err(_) => cyclic.push(None),
        }
    }
    let mut applicable = 0;
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for &z in points {
        let cl = classifier.classify(z);
        if !(cl.verdict.is_fast() && cl.margin_log >= cfg.margin_log) {
            continue;
        }
        applicable += 1;
        let mut violated = false;
        for cyc in cyclic.iter().flatten() {
            let ccl = cyc.classify(z);
            if ccl.verdict == Verdict::NonEscaping {
                violated = true;
            } else {
                worst = worst.min(ccl.margin_log);
            }
        }
        if violated {
            violations += 1;
        }
    }
    Ok(PropertyReport {
        property_id: "subset_classical".into(),
        samples: points.len(),
        applicable,
        violations,
        worst_margin: if worst.is_finite() { worst } else { 0.0 },
        notes: "semigroup fast escape vs cyclic classification per generator".into(),
    })
}

/// Fast-escaping membership should not depend on the threshold radius.
/// Compares membership under the per-word default radii and under `r2`,
/// counting disagreements among points certified under both.
pub fn check_r_independence(
    s: &Semigroup,
    points: &[Complex],
    cfg: &ClassifierConfig,
    r2: f64,
) -> Result<PropertyReport, VerifyError> {
    let default_cfg = ClassifierConfig {
        r_override: None,
        ..cfg.clone()
    };
    let classifier_a = Classifier::new(s.clone(), default_cfg)?;
    // r2 must itself pass the threshold test for every word
    for word in classifier_a.words() {
        let composite = s.composite(word);
        match find_threshold_r(&composite, r2, &cfg.sampling) {
            Ok(r) if r == r2 => {}
            _ => {
                return Err(VerifyError::InvalidThreshold {
                    label: format!("[{}]", word),
                    r2,
                })
            }
        }
    }
    let override_cfg = ClassifierConfig {
        r_override: Some(r2),
        ..cfg.clone()
    };
    let classifier_b = Classifier::new(s.clone(), override_cfg)?;
    let mut applicable = 0;
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for &z in points {
        let ca = classifier_a.classify(z);
        let cb = classifier_b.classify(z);
        if ca.margin_log < cfg.margin_log || cb.margin_log < cfg.margin_log {
            continue;
        }
        applicable += 1;
        worst = worst.min(ca.margin_log.min(cb.margin_log));
        if ca.verdict.is_fast() != cb.verdict.is_fast() {
            violations += 1;
        }
    }
    Ok(PropertyReport {
        property_id: "r_independence".into(),
        samples: points.len(),
        applicable,
        violations,
        worst_margin: if worst.is_finite() { worst } else { 0.0 },
        notes: format!("membership compared against R2={}", r2),
    })
}

/// Probe unboundedness along the ray `t e^{i theta}`: sample a geometric
/// grid of `t` and report whether fast-escaping membership, once attained,
/// persists to the end of the grid. A sampling probe, not a proof.
pub fn check_unbounded_ray(
    s: &Semigroup,
    cfg: &ClassifierConfig,
    direction: f64,
    t_max: f64,
) -> Result<PropertyReport, EngineError> {
    let classifier = Classifier::new(s.clone(), cfg.clone())?;
    let mut ts = Vec::new();
    let mut t = 1.0f64;
    while t <= t_max {
        ts.push(t);
        t *= 2.0;
    }
    let mut first_hit: Option<f64> = None;
    let mut last_member: Option<f64> = None;
    let mut applicable = 0;
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for &t in &ts {
        let z = Complex::new(t * direction.cos(), t * direction.sin());
        let cl = classifier.classify(z);
        let member = cl.verdict.is_fast();
        if member {
            first_hit.get_or_insert(t);
            last_member = Some(t);
            worst = worst.min(cl.margin_log);
        }
        if first_hit.is_some() {
            applicable += 1;
            if !member {
                violations += 1;
            }
        }
    }
    let notes = match (first_hit, last_member) {
        (Some(f), Some(l)) => format!(
            "theta={:.6} first_hit={} last_member={} persistent={}",
            direction,
            f,
            l,
            violations == 0
        ),
        _ => format!("theta={:.6} no members on the ray", direction),
    };
    Ok(PropertyReport {
        property_id: "unbounded_ray".into(),
        samples: ts.len(),
        applicable,
        violations,
        worst_margin: if worst.is_finite() { worst } else { 0.0 },
        notes,
    })
}
