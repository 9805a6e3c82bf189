//! Generator sets, words over them, and composite application.

use crate::expr::{evaluate_state, EntireFunction, PointState};

/// Hard cap on enumerated words.
pub const WORD_CAPACITY: usize = 1_000_000;

/// A finitely generated semigroup of entire functions. At least one
/// generator must be transcendental, otherwise none of the growth
/// comparisons downstream make sense.
#[derive(Clone, Debug, PartialEq)]
pub struct Semigroup {
    generators: Vec<EntireFunction>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SemigroupError {
    NoGenerators,
    NoTranscendentalGenerator,
}

impl std::fmt::Display for SemigroupError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SemigroupError::NoGenerators => write!(f, "semigroup needs at least one generator"),
            SemigroupError::NoTranscendentalGenerator => {
                write!(f, "semigroup needs at least one transcendental generator")
            }
        }
    }
}

impl std::error::Error for SemigroupError {}

impl Semigroup {
    pub fn new(generators: Vec<EntireFunction>) -> Result<Self, SemigroupError> {
        if generators.is_empty() {
            return Err(SemigroupError::NoGenerators);
        }
        if !generators.iter().any(|g| g.is_transcendental()) {
            return Err(SemigroupError::NoTranscendentalGenerator);
        }
        Ok(Semigroup { generators })
    }

    /// The cyclic semigroup generated by a single function.
    pub fn cyclic(f: EntireFunction) -> Result<Self, SemigroupError> {
        Semigroup::new(vec![f])
    }

    pub fn generators(&self) -> &[EntireFunction] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// The composite map of a word, ready to apply to points.
    pub fn composite(&self, word: &Word) -> CompositeFn<'_> {
        // last index acts first
        let funcs = word
            .indices()
            .iter()
            .rev()
            .map(|&i| &self.generators[i])
            .collect();
        CompositeFn { funcs }
    }
}

/// A finite composition of generators, stored as indices. `[i1, ..., im]`
/// denotes `f_{i1} ∘ f_{i2} ∘ ... ∘ f_{im}`: the last index acts first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    indices: Vec<usize>,
}

impl Word {
    pub fn new(indices: Vec<usize>) -> Self {
        assert!(!indices.is_empty(), "words are nonempty");
        Word { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for i in &self.indices {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{}", i)?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapacityError {
    pub requested: usize,
    pub limit: usize,
}

impl std::fmt::Display for CapacityError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "word enumeration would produce {} words (limit {})",
            self.requested, self.limit
        )
    }
}

impl std::error::Error for CapacityError {}

/// All words of length 1..=max_len over `k` generators, ordered by
/// (length, indices) lexicographically.
pub fn enumerate_words(s: &Semigroup, max_len: usize) -> Result<Vec<Word>, CapacityError> {
    enumerate_words_k(s.generator_count(), max_len)
}

/// Same as [`enumerate_words`] but over an abstract generator count.
pub fn enumerate_words_k(k: usize, max_len: usize) -> Result<Vec<Word>, CapacityError> {
    assert!(max_len >= 1, "word depth must be at least 1");
    let total = word_count(k, max_len).ok_or(CapacityError {
        requested: usize::MAX,
        limit: WORD_CAPACITY,
    })?;
    if total > WORD_CAPACITY {
        return Err(CapacityError {
            requested: total,
            limit: WORD_CAPACITY,
        });
    }
    let mut words = Vec::with_capacity(total);
    for len in 1..=max_len {
        let mut current = vec![0usize; len];
        loop {
            words.push(Word::new(current.clone()));
            // odometer increment
            let mut pos = len;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                current[pos] += 1;
                if current[pos] < k {
                    break;
                }
                current[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX; // signal wrap-around of the whole word
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
    }
    debug_assert_eq!(words.len(), total);
    Ok(words)
}

/// `k + k^2 + ... + k^W`, None on overflow.
pub fn word_count(k: usize, max_len: usize) -> Option<usize> {
    let mut total = 0usize;
    let mut pow = 1usize;
    for _ in 0..max_len {
        pow = pow.checked_mul(k)?;
        total = total.checked_add(pow)?;
    }
    Some(total)
}

/// A word's composite map with generator references resolved, in
/// application order.
#[derive(Clone, Debug)]
pub struct CompositeFn<'a> {
    funcs: Vec<&'a EntireFunction>,
}

impl<'a> CompositeFn<'a> {
    /// A single function as a length-one composite.
    pub fn single(f: &'a EntireFunction) -> Self {
        CompositeFn { funcs: vec![f] }
    }

    pub fn len(&self) -> usize {
        self.funcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.funcs.is_empty()
    }

    /// Functions in the order they are applied.
    pub fn funcs(&self) -> &[&'a EntireFunction] {
        &self.funcs
    }

    /// One application of the whole composite.
    pub fn apply(&self, state: &PointState) -> PointState {
        let mut s = *state;
        for f in &self.funcs {
            s = evaluate_state(f, &s);
        }
        s
    }

    /// Short label for diagnostics: the source texts joined in composition
    /// order (first applied last, as written mathematically).
    pub fn label(&self) -> String {
        let parts: Vec<&str> = self
            .funcs
            .iter()
            .rev()
            .map(|f| f.source_text())
            .collect();
        parts.join(" . ")
    }
}
