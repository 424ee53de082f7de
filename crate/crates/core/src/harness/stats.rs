use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Summary of final errors over repeated runs. `std` is the population
/// standard deviation (divide by `R`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub mean: f64,
    pub std: f64,
    pub best: f64,
    pub worst: f64,
    pub median: f64,
}

impl StatsSummary {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("statistics input"));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            (sorted[mid - 1] + sorted[mid]) / 2.0
        };
        Ok(Self {
            mean,
            std: var.sqrt(),
            best: sorted[0],
            worst: sorted[sorted.len() - 1],
            median,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_two_three() {
        let s = StatsSummary::from_values(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.median, 2.0);
        assert_eq!(s.best, 1.0);
        assert_eq!(s.worst, 3.0);
        assert!((s.std - 0.816_496_580_927_726).abs() < 1e-12);
    }

    #[test]
    fn single_run() {
        let s = StatsSummary::from_values(&[4.5]).unwrap();
        assert_eq!((s.mean, s.std, s.best, s.worst, s.median), (4.5, 0.0, 4.5, 4.5, 4.5));
    }

    #[test]
    fn even_count_median() {
        let s = StatsSummary::from_values(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.median, 2.5);
    }

    #[test]
    fn empty_rejected() {
        assert!(StatsSummary::from_values(&[]).is_err());
    }
}
