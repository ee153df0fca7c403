//! Symbiotic error cancellation over independent per-subsystem error rates.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReliabilityError {
    #[error("error profile is empty")]
    Empty,
    #[error("error rate #{index} = {value} is not strictly between 0 and 1")]
    InvalidRate { index: usize, value: f64 },
    #[error("{labels} labels given for {rates} rates")]
    LabelMismatch { rates: usize, labels: usize },
}

/// Error rates `r_e(k)`, each in the open interval (0, 1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorProfile {
    rates: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl ErrorProfile {
    pub fn new(rates: Vec<f64>) -> Result<Self, ReliabilityError> {
        if rates.is_empty() {
            return Err(ReliabilityError::Empty);
        }
        if let Some((index, &value)) = rates
            .iter()
            .enumerate()
            .find(|(_, r)| !(**r > 0.0 && **r < 1.0))
        {
            return Err(ReliabilityError::InvalidRate { index, value });
        }
        Ok(ErrorProfile {
            rates,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, ReliabilityError> {
        if labels.len() != self.rates.len() {
            return Err(ReliabilityError::LabelMismatch {
                rates: self.rates.len(),
                labels: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    fn sum(&self) -> f64 {
        self.rates.iter().sum()
    }

    fn product(&self) -> f64 {
        self.rates.iter().product()
    }
}

/// `1 − Π r_e(k)`.
pub fn collective_reliability(profile: &ErrorProfile) -> f64 {
    1.0 - profile.product()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummedReliability {
    pub value: f64,
    /// Set when `Σ r_e > 1`, i.e. the value is negative. The value is never
    /// clamped.
    pub saturated: bool,
}

/// `1 − Σ r_e(k)`.
pub fn summed_reliability(profile: &ErrorProfile) -> SummedReliability {
    let sum = profile.sum();
    SummedReliability {
        value: 1.0 - sum,
        saturated: sum > 1.0,
    }
}

/// `Σ r_e(k) − Π r_e(k)`, the reliability surplus of the composed system
/// over the summed model. Zero for a single subsystem, positive otherwise.
pub fn cancellation_delta(profile: &ErrorProfile) -> f64 {
    profile.sum() - profile.product()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReliabilityReport {
    pub collective: f64,
    pub summed: f64,
    pub saturated: bool,
    pub cancellation_delta: f64,
}

pub fn report(profile: &ErrorProfile) -> ReliabilityReport {
    let summed = summed_reliability(profile);
    ReliabilityReport {
        collective: collective_reliability(profile),
        summed: summed.value,
        saturated: summed.saturated,
        cancellation_delta: cancellation_delta(profile),
    }
}
