//! Per-point classification into non-escaping, escaping, and fast
//! escaping with a level.
//!
//! The exact sets quantify over every element of the semigroup and every
//! iterate; this engine truncates both: words up to length `W`, orbits up
//! to `N` steps. Verdicts are therefore `W`-certified approximations.
//! Truncation only removes constraints, so the estimated escaping set
//! shrinks as `W` grows.
//!
//! Each word gets its own threshold radius and max-modulus tower. Orbit
//! log-magnitudes and tower entries are produced by the same evaluation
//! routine at the same points, so an orbit that rides a word's maximum ray
//! (real orbits of `λ e^z`, for instance) compares against the tower with
//! exactly zero slack.

use crate::expr::{EntireFunction, PointState};
use crate::maxmod::{find_threshold_r, mm_tower, CircleSampling, MaxModulusTable};
use crate::semigroup::{enumerate_words, CapacityError, Semigroup, SemigroupError, Word};
use crate::Complex;

/// Truncation and certification parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierConfig {
    /// Maximum word length `W`.
    pub max_word_len: usize,
    /// Maximum orbit iterations `N` per word.
    pub max_iter: usize,
    /// Escape bound in log scale (default `ln 1e50`).
    pub escape_log: f64,
    /// Level search clamp: levels are reported within `[-bound, bound]`.
    pub level_bound: i64,
    /// Certification margin in log scale (default `ln 2`); verification
    /// only trusts verdicts whose margin reaches this.
    pub margin_log: f64,
    pub sampling: CircleSampling,
    /// Replaces every per-word threshold radius when set.
    pub r_override: Option<f64>,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            max_word_len: 3,
            max_iter: 64,
            escape_log: 1e50f64.ln(),
            level_bound: 8,
            margin_log: 2.0f64.ln(),
            sampling: CircleSampling::default(),
            r_override: None,
        }
    }
}

/// One word's orbit at one point, in log magnitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRecord {
    pub word: Word,
    /// `log|w^n(z)|` for `n = 1..=n_stop()`; always finite.
    pub log_mags: Vec<f64>,
    /// The orbit crossed the escape bound while increasing, or blew past
    /// representable log range upward.
    pub escaped: bool,
    /// The orbit hit exactly zero.
    pub zero_hit: bool,
    /// The orbit left representable log range (either direction) and could
    /// not be followed further.
    pub saturated: bool,
}

impl OrbitRecord {
    pub fn n_stop(&self) -> usize {
        self.log_mags.len()
    }

    fn max_log(&self) -> f64 {
        self.log_mags.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Verdict for a single point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    FastEscaping { level: i64 },
    Escaping,
    NonEscaping,
}

impl Verdict {
    /// Fixed three-letter code used in all text output.
    pub fn code(&self) -> &'static str {
        match self {
            Verdict::FastEscaping { .. } => "FAST",
            Verdict::Escaping => "ESC",
            Verdict::NonEscaping => "NON",
        }
    }

    pub fn level(&self) -> Option<i64> {
        match self {
            Verdict::FastEscaping { level } => Some(*level),
            _ => None,
        }
    }

    /// Membership in the escaping-set estimate (every tested word's orbit
    /// diverged).
    pub fn is_escaping_evidence(&self) -> bool {
        !matches!(self, Verdict::NonEscaping)
    }

    /// Membership in the fast-escaping-set estimate.
    pub fn is_fast(&self) -> bool {
        matches!(self, Verdict::FastEscaping { .. })
    }
}

/// The word whose evidence decided a verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessInfo {
    pub word: Word,
    pub n_stop: usize,
}

/// Classification of one point, with the worst-case slack of the deciding
/// inequalities.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    /// For `FastEscaping`: minimum slack of `log|w^n(z)| >= log M^{n+L}(R)`
    /// across all words and compared iterates. For `Escaping`: minimum
    /// excess of the final log magnitude over the escape bound. For
    /// `NonEscaping`: minimum distance of a failing word's orbit below the
    /// escape bound.
    pub margin_log: f64,
    pub witness: Option<WitnessInfo>,
    /// Set when classification was degraded (threshold search failed for
    /// some word).
    pub diagnostic: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EngineError {
    Semigroup(SemigroupError),
    Capacity(CapacityError),
}

impl std::fmt::Display for EngineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EngineError::Semigroup(e) => e.fmt(f),
            EngineError::Capacity(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for EngineError {}

impl From<SemigroupError> for EngineError {
    fn from(e: SemigroupError) -> Self {
        EngineError::Semigroup(e)
    }
}

impl From<CapacityError> for EngineError {
    fn from(e: CapacityError) -> Self {
        EngineError::Capacity(e)
    }
}

/// Words, thresholds, and towers prepared once; classification of points
/// is then pure and reentrant, safe to run from many threads.
#[derive(Clone, Debug)]
pub struct Classifier {
    semigroup: Semigroup,
    cfg: ClassifierConfig,
    words: Vec<Word>,
    /// One table per word; `None` when no threshold radius was found.
    tables: Vec<Option<MaxModulusTable>>,
}

impl Classifier {
    pub fn new(semigroup: Semigroup, cfg: ClassifierConfig) -> Result<Self, EngineError> {
        // A cyclic semigroup is classified by the classical single-function
        // criterion: every element is an iterate of the generator, so the
        // word f^m adds no information beyond the orbit of f itself, while
        // its composite steps can jump the escape window in one go and
        // saturate with an unknowable phase. Lengths collapse to iterates.
        let words = if semigroup.generator_count() == 1 {
            vec![Word::new(vec![0])]
        } else {
            enumerate_words(&semigroup, cfg.max_word_len)?
        };
        // towers must cover every index n + L reachable by the level search
        let n_max = cfg.max_iter + cfg.level_bound.unsigned_abs() as usize;
        let mut tables = Vec::with_capacity(words.len());
        for word in &words {
            let composite = semigroup.composite(word);
            let r = match cfg.r_override {
                Some(r) => Some(r),
                None => find_threshold_r(&composite, 1.0, &cfg.sampling).ok(),
            };
            tables.push(r.map(|r| {
                mm_tower(&composite, format!("[{}]", word), r, n_max, &cfg.sampling)
            }));
        }
        Ok(Classifier {
            semigroup,
            cfg,
            words,
            tables,
        })
    }

    pub fn semigroup(&self) -> &Semigroup {
        &self.semigroup
    }

    pub fn cfg(&self) -> &ClassifierConfig {
        &self.cfg
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn tables(&self) -> &[Option<MaxModulusTable>] {
        &self.tables
    }

    /// Iterate one word's composite at `z`, recording log magnitudes.
    ///
    /// The orbit stops early on divergence (log magnitude beyond the
    /// escape bound with the last three steps strictly increasing, or a
    /// blow-up past representable range), on an exact zero, or on leaving
    /// representable log range downward.
    pub fn orbit(&self, word: &Word, z: Complex) -> OrbitRecord {
        let composite = self.semigroup.composite(word);
        let mut state = PointState::Rect(z);
        let mut log_mags = Vec::new();
        let mut escaped = false;
        let mut zero_hit = false;
        let mut saturated = false;
        let base_log = state.log_mag();
        for _ in 0..self.cfg.max_iter {
            state = composite.apply(&state);
            let lm = state.log_mag();
            if lm == f64::NEG_INFINITY {
                // exact zero (or collapse below representable range)
                zero_hit = matches!(state, PointState::Rect(v) if v.norm() == 0.0);
                saturated = !zero_hit;
                break;
            }
            if !lm.is_finite() {
                // +inf: definite blow-up; NaN: direction undecidable
                escaped = lm == f64::INFINITY;
                saturated = true;
                break;
            }
            log_mags.push(lm);
            if lm > self.cfg.escape_log && tail_increasing(base_log, &log_mags, 3) {
                escaped = true;
                break;
            }
        }
        OrbitRecord {
            word: word.clone(),
            log_mags,
            escaped,
            zero_hit,
            saturated,
        }
    }

    /// Classify one point.
    pub fn classify(&self, z: Complex) -> Classification {
        if let Some(i) = self.tables.iter().position(|t| t.is_none()) {
            return Classification {
                verdict: Verdict::NonEscaping,
                margin_log: 0.0,
                witness: Some(WitnessInfo {
                    word: self.words[i].clone(),
                    n_stop: 0,
                }),
                diagnostic: Some(format!(
                    "no threshold radius for word [{}]; growth comparisons unavailable",
                    self.words[i]
                )),
            };
        }

        let orbits: Vec<OrbitRecord> = self.words.iter().map(|w| self.orbit(w, z)).collect();

        // (a) escaping evidence: every word's orbit must have diverged
        if orbits.iter().any(|o| !o.escaped) {
            let mut margin = f64::INFINITY;
            let mut witness = None;
            for o in orbits.iter().filter(|o| !o.escaped) {
                let slack = self.cfg.escape_log - o.max_log();
                if slack < margin {
                    margin = slack;
                    witness = Some(WitnessInfo {
                        word: o.word.clone(),
                        n_stop: o.n_stop(),
                    });
                }
            }
            return Classification {
                verdict: Verdict::NonEscaping,
                margin_log: margin,
                witness,
                diagnostic: None,
            };
        }

        // (b) level: each word against its own tower; the verdict level is
        // the minimum over words
        let mut level = i64::MAX;
        let mut margin = f64::INFINITY;
        let mut witness = None;
        let mut unleveled = false;
        for (o, table) in orbits.iter().zip(&self.tables) {
            let table = table.as_ref().unwrap();
            match word_level(o, table, self.cfg.level_bound) {
                Some((l, slack)) => {
                    if l < level || (l == level && slack < margin) {
                        witness = Some(WitnessInfo {
                            word: o.word.clone(),
                            n_stop: o.n_stop(),
                        });
                    }
                    level = level.min(l);
                    margin = margin.min(slack);
                }
                None => {
                    unleveled = true;
                    witness = Some(WitnessInfo {
                        word: o.word.clone(),
                        n_stop: o.n_stop(),
                    });
                    break;
                }
            }
        }
        if unleveled {
            // all orbits escaped but some word admits no certified level;
            // an orbit that blew past representable range before recording
            // anything has unboundedly strong escape evidence
            let margin = orbits
                .iter()
                .map(|o| {
                    if o.n_stop() == 0 {
                        f64::INFINITY
                    } else {
                        o.max_log() - self.cfg.escape_log
                    }
                })
                .fold(f64::INFINITY, f64::min);
            return Classification {
                verdict: Verdict::Escaping,
                margin_log: margin,
                witness,
                diagnostic: None,
            };
        }
        Classification {
            verdict: Verdict::FastEscaping { level },
            margin_log: margin,
            witness,
            diagnostic: None,
        }
    }

    /// Membership in the level-`level` set estimate: every word's orbit
    /// escaped and every word certifies at some level `>= level`. Returns
    /// the membership flag and the minimum slack backing the certificates.
    ///
    /// Levels nest by construction under this predicate: membership at
    /// `level` trivially implies membership at `level - 1`. The probe may
    /// be placed below the search clamp.
    pub fn membership_at_level(&self, z: Complex, level: i64) -> (bool, f64) {
        if self.tables.iter().any(|t| t.is_none()) {
            return (false, 0.0);
        }
        let mut margin = f64::INFINITY;
        for (word, table) in self.words.iter().zip(&self.tables) {
            let o = self.orbit(word, z);
            if !o.escaped {
                return (false, self.cfg.escape_log - o.max_log());
            }
            match word_level(&o, table.as_ref().unwrap(), self.cfg.level_bound) {
                Some((l, slack)) if l >= level => margin = margin.min(slack),
                Some((_, slack)) => return (false, slack),
                None => return (false, f64::NEG_INFINITY),
            }
        }
        (true, margin)
    }
}

/// Strictly increasing over the last `steps` intervals ending at the most
/// recent entry, counting the seed's log magnitude as the base.
fn tail_increasing(base_log: f64, log_mags: &[f64], steps: usize) -> bool {
    let mut seq = Vec::with_capacity(steps + 1);
    let n = log_mags.len();
    let take = steps.min(n);
    if take < n {
        seq.extend_from_slice(&log_mags[n - take - 1..]);
    } else {
        seq.push(base_log);
        seq.extend_from_slice(log_mags);
    }
    seq.windows(2).all(|w| w[1] > w[0])
}

/// Greatest level in `[-bound, bound]` whose inequalities all hold for
/// this word, with the minimum slack. A level needs at least one
/// comparable (orbit index, tower index) pair to count as evidence; pairs
/// lost to tower truncation are skipped.
fn word_level(orbit: &OrbitRecord, table: &MaxModulusTable, bound: i64) -> Option<(i64, f64)> {
    let mut l = bound;
    while l >= -bound {
        if let Some(slack) = level_slack(orbit, table, l) {
            if slack >= 0.0 {
                return Some((l, slack));
            }
        }
        l -= 1;
    }
    None
}

/// Minimum slack of `log|w^n(z)| - log M^{n+level}(R)` over comparable
/// pairs; `None` when no pair is comparable.
fn level_slack(orbit: &OrbitRecord, table: &MaxModulusTable, level: i64) -> Option<f64> {
    let tower = &table.tower_log;
    let mut min_slack = f64::INFINITY;
    let mut pairs = 0usize;
    for (i, &lm) in orbit.log_mags.iter().enumerate() {
        let n = (i + 1) as i64;
        let idx = n + level;
        if idx < 0 {
            continue;
        }
        let idx = idx as usize;
        if idx >= tower.len() {
            continue;
        }
        min_slack = min_slack.min(lm - tower[idx]);
        pairs += 1;
    }
    if pairs == 0 {
        None
    } else {
        Some(min_slack)
    }
}

/// One-shot classification; builds the word tables and throws them away.
/// Use [`Classifier`] directly when classifying many points.
pub fn classify_point(
    s: &Semigroup,
    z: Complex,
    cfg: &ClassifierConfig,
) -> Classification {
    match Classifier::new(s.clone(), cfg.clone()) {
        Ok(c) => c.classify(z),
        Err(e) => Classification {
            verdict: Verdict::NonEscaping,
            margin_log: 0.0,
            witness: None,
            diagnostic: Some(e.to_string()),
        },
    }
}

/// The level extraction of [`classify_point`], absent unless the verdict
/// is fast-escaping.
pub fn level_of(s: &Semigroup, z: Complex, cfg: &ClassifierConfig) -> Option<i64> {
    classify_point(s, z, cfg).verdict.level()
}

/// Classification under the cyclic semigroup generated by `f` alone; the
/// classical single-function criterion.
pub fn classify_cyclic(
    f: &EntireFunction,
    z: Complex,
    cfg: &ClassifierConfig,
) -> Result<Classification, EngineError> {
    let s = Semigroup::cyclic(f.clone())?;
    Ok(classify_point(&s, z, cfg))
}
