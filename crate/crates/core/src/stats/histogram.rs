use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform-width histogram. Bins are half-open `[lo, hi)` except the last,
/// which also takes values equal to the upper edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bin_width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }

    /// Counts divided by `total · width`, so that the histogram integrates to
    /// one over its range. All zeros when empty.
    pub fn density(&self) -> Vec<f64> {
        let norm = self.total() as f64 * self.bin_width();
        self.counts
            .iter()
            .map(|&c| if norm > 0.0 { c as f64 / norm } else { 0.0 })
            .collect()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

pub fn histogram(samples: &[f64], n_bins: usize, range: (f64, f64)) -> Result<Histogram> {
    if n_bins == 0 {
        return Err(Error::Domain("histogram needs at least one bin".into()));
    }
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Domain(format!("invalid histogram range [{lo}, {hi}]")));
    }
    let width = (hi - lo) / n_bins as f64;
    let edges = (0..=n_bins)
        .map(|i| if i == n_bins { hi } else { lo + i as f64 * width })
        .collect();
    let mut counts = vec![0u64; n_bins];
    for &x in samples {
        if !(x >= lo && x <= hi) {
            continue;
        }
        let idx = (((x - lo) / width) as usize).min(n_bins - 1);
        counts[idx] += 1;
    }
    Ok(Histogram { edges, counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placement() {
        let h = histogram(&[0.5, 1.5], 2, (0.0, 2.0)).unwrap();
        assert_eq!(h.counts, vec![1, 1]);
        assert_eq!(h.edges, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn upper_edge_and_out_of_range() {
        let h = histogram(&[2.0, -0.1, 2.1, 0.0], 4, (0.0, 2.0)).unwrap();
        assert_eq!(h.counts, vec![1, 0, 0, 1]);
    }

    #[test]
    fn empty_is_not_an_error() {
        let h = histogram(&[], 3, (0.0, 1.0)).unwrap();
        assert_eq!(h.total(), 0);
        assert_eq!(h.density(), vec![0.0; 3]);
    }

    #[test]
    fn density_integrates_to_one() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.618).fract()).collect();
        let h = histogram(&xs, 7, (0.0, 1.0)).unwrap();
        let integral: f64 = h.density().iter().map(|d| d * h.bin_width()).sum();
        assert!((integral - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_arguments() {
        assert!(histogram(&[1.0], 0, (0.0, 1.0)).is_err());
        assert!(histogram(&[1.0], 2, (1.0, 1.0)).is_err());
    }
}
