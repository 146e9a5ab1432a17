//! Finite discrete probability distributions and the generating-function
//! kernel: products of per-trial factors `(1 - p + p x)` expanded by
//! coefficient convolution.

use thiserror::Error;

/// Probabilities this close to zero are pruned from supports.
const PRUNE_EPS: f64 = 0.0;
/// Normalization slack accepted by [`Pmf::new`].
const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum DistError {
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("support must be strictly increasing at index {0}")]
    SupportNotIncreasing(usize),
    #[error("negative probability {0}")]
    NegativeProbability(f64),
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("support and probability lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("empty distribution")]
    Empty,
    #[error("convolution requires integer supports")]
    NonIntegerSupport,
    #[error("class has no members: {0}")]
    EmptyClass(&'static str),
    #[error("sample count must be positive")]
    ZeroSamples,
}

/// A finite discrete distribution over a strictly increasing support.
///
/// CNS distributions have integer supports; similarity-score distributions
/// may have arbitrary real supports.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    support: Vec<f64>,
    probs: Vec<f64>,
}

impl Pmf {
    /// Validates and builds a distribution. Zero-probability entries are
    /// pruned; the probabilities must already sum to 1 within `1e-9`.
    pub fn new(support: Vec<f64>, probs: Vec<f64>) -> Result<Self, DistError> {
        if support.len() != probs.len() {
            return Err(DistError::LengthMismatch(support.len(), probs.len()));
        }
        for (i, w) in support.windows(2).enumerate() {
            // NaNs are incomparable and must be rejected here too
            if w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less) {
                return Err(DistError::SupportNotIncreasing(i + 1));
            }
        }
        let mut total = 0.0;
        for &p in &probs {
            if p < 0.0 {
                return Err(DistError::NegativeProbability(p));
            }
            total += p;
        }
        if (total - 1.0).abs() > NORM_TOL {
            return Err(DistError::NotNormalized(total));
        }
        let (support, probs) = prune(support, probs);
        if support.is_empty() {
            return Err(DistError::Empty);
        }
        Ok(Self { support, probs })
    }

    /// Builds a distribution from nonnegative weights, normalizing them.
    pub fn from_weights(support: Vec<f64>, weights: Vec<f64>) -> Result<Self, DistError> {
        if support.len() != weights.len() {
            return Err(DistError::LengthMismatch(support.len(), weights.len()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(DistError::Empty);
        }
        let probs = weights.into_iter().map(|w| w / total).collect();
        Self::new(support, probs)
    }

    /// Distribution over `0..weights.len()` from dense nonnegative weights.
    pub fn from_dense_weights(weights: &[f64]) -> Result<Self, DistError> {
        let support = (0..weights.len()).map(|w| w as f64).collect();
        Self::from_weights(support, weights.to_vec())
    }

    /// Point mass at `value`.
    pub fn point_mass(value: f64) -> Self {
        Self {
            support: vec![value],
            probs: vec![1.0],
        }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.support.iter().copied().zip(self.probs.iter().copied())
    }

    /// Probability of exactly `value` (exact match on the support).
    pub fn prob_of(&self, value: f64) -> f64 {
        match self
            .support
            .binary_search_by(|s| s.partial_cmp(&value).expect("finite support"))
        {
            Ok(i) => self.probs[i],
            Err(_) => 0.0,
        }
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(w, p)| w * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.iter().map(|(w, p)| (w - m) * (w - m) * p).sum()
    }

    /// Smallest support value whose CDF reaches at least 1/2.
    pub fn median(&self) -> f64 {
        let mut cum = 0.0;
        for (w, p) in self.iter() {
            cum += p;
            if cum >= 0.5 {
                return w;
            }
        }
        *self.support.last().expect("nonempty distribution")
    }

    /// True when every support value is an exact integer.
    pub fn is_integer_valued(&self) -> bool {
        self.support.iter().all(|w| w.fract() == 0.0 && w.is_finite())
    }

    /// Total variation distance, `max_A |P(A) - Q(A)| = Σ|p - q| / 2`.
    pub fn total_variation(&self, other: &Pmf) -> f64 {
        let mut sum = 0.0;
        let (mut i, mut j) = (0, 0);
        while i < self.len() || j < other.len() {
            let a = self.support.get(i).copied().unwrap_or(f64::INFINITY);
            let b = other.support.get(j).copied().unwrap_or(f64::INFINITY);
            if a < b {
                sum += self.probs[i];
                i += 1;
            } else if b < a {
                sum += other.probs[j];
                j += 1;
            } else {
                sum += (self.probs[i] - other.probs[j]).abs();
                i += 1;
                j += 1;
            }
        }
        sum / 2.0
    }

    /// Translates the support by `delta`, leaving probabilities untouched.
    pub fn shift(&self, delta: f64) -> Pmf {
        Pmf {
            support: self.support.iter().map(|w| w + delta).collect(),
            probs: self.probs.clone(),
        }
    }
}

fn prune(support: Vec<f64>, probs: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    support
        .into_iter()
        .zip(probs)
        .filter(|&(_, p)| p > PRUNE_EPS)
        .unzip()
}

/// Distribution of the number of successes among independent Bernoulli
/// trials with the given probabilities: the coefficients of
/// `Π (1 - p + p x)`, computed by iterative convolution.
pub fn poisson_binomial(probabilities: &[f64]) -> Result<Pmf, DistError> {
    let coeffs = bernoulli_product(probabilities, None)?;
    Pmf::from_dense_weights(&coeffs)
}

/// Like [`poisson_binomial`] but drops trailing coefficients below
/// `tail_eps` relative to the running maximum, bounding support growth.
/// Total truncated mass stays below `len * tail_eps`.
pub(crate) fn poisson_binomial_trimmed(
    probabilities: &[f64],
    tail_eps: f64,
) -> Result<Pmf, DistError> {
    let coeffs = bernoulli_product(probabilities, Some(tail_eps))?;
    Pmf::from_dense_weights(&coeffs)
}

fn bernoulli_product(probabilities: &[f64], tail_eps: Option<f64>) -> Result<Vec<f64>, DistError> {
    for &p in probabilities {
        if !(0.0..=1.0).contains(&p) {
            return Err(DistError::ProbabilityOutOfRange(p));
        }
    }
    let mut coeffs: Vec<f64> = Vec::with_capacity(probabilities.len() + 1);
    coeffs.push(1.0);
    for &p in probabilities {
        let q = 1.0 - p;
        let len = coeffs.len();
        coeffs.push(0.0);
        for w in (0..=len).rev() {
            let keep = if w < len { coeffs[w] * q } else { 0.0 };
            let carry = if w > 0 { coeffs[w - 1] * p } else { 0.0 };
            coeffs[w] = keep + carry;
        }
        if let Some(eps) = tail_eps {
            let cutoff = coeffs.iter().cloned().fold(0.0, f64::max) * eps;
            while coeffs.len() > 1 && *coeffs.last().unwrap() < cutoff {
                coeffs.pop();
            }
        }
    }
    Ok(coeffs)
}

/// Distribution of the sum of independent draws from `a` and `b`.
/// Defined for integer supports only.
pub fn convolve(a: &Pmf, b: &Pmf) -> Result<Pmf, DistError> {
    if !a.is_integer_valued() || !b.is_integer_valued() {
        return Err(DistError::NonIntegerSupport);
    }
    let a_min = a.support[0] as i64;
    let b_min = b.support[0] as i64;
    let a_max = *a.support.last().unwrap() as i64;
    let b_max = *b.support.last().unwrap() as i64;
    let len = (a_max + b_max - a_min - b_min + 1) as usize;
    let mut dense = vec![0.0; len];
    for (wa, pa) in a.iter() {
        for (wb, pb) in b.iter() {
            let idx = (wa as i64 + wb as i64 - a_min - b_min) as usize;
            dense[idx] += pa * pb;
        }
    }
    let support = (0..len).map(|i| (i as i64 + a_min + b_min) as f64).collect();
    Pmf::from_weights(support, dense)
}
