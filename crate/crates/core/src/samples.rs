use std::collections::BTreeMap;
use std::ops::Bound::{Excluded, Unbounded};

/// Evaluated grid indices (1-based) and their true values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SampleSet {
    values: BTreeMap<usize, f64>,
}

impl SampleSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false if `i` was already present (the value is left unchanged).
    pub fn insert(&mut self, i: usize, value: f64) -> bool {
        if self.values.contains_key(&i) {
            return false;
        }
        self.values.insert(i, value);
        true
    }

    pub fn contains(&self, i: usize) -> bool {
        self.values.contains_key(&i)
    }

    pub fn get(&self, i: usize) -> Option<f64> {
        self.values.get(&i).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Indices in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().map(|(&i, &v)| (i, v))
    }

    /// Lowest true value; the smallest index wins ties.
    pub fn best(&self) -> Option<(usize, f64)> {
        self.iter().fold(None, |acc, (i, v)| match acc {
            Some((_, bv)) if bv <= v => acc,
            _ => Some((i, v)),
        })
    }

    /// Nearest sampled index strictly left of `i`.
    pub fn left_of(&self, i: usize) -> Option<usize> {
        self.values.range(..i).next_back().map(|(&k, _)| k)
    }

    /// Nearest sampled index strictly right of `i`.
    pub fn right_of(&self, i: usize) -> Option<usize> {
        self.values
            .range((Excluded(i), Unbounded))
            .next()
            .map(|(&k, _)| k)
    }

    /// Number of sampled indices in `[i - radius, i + radius]`.
    pub fn count_within(&self, i: usize, radius: usize) -> usize {
        let lo = i.saturating_sub(radius);
        self.values.range(lo..=i + radius).count()
    }
}
