//! Exploration, around-the-bend placement and candidate ordering.

use crate::error::{Error, Result};
use crate::samples::SampleSet;
use crate::surrogate::Fit;

/// Bisect the widest gap between consecutive samples.
///
/// Ties on width go to the gap whose fit dips lowest over `[i, R_i]`, then
/// to the leftmost gap.
pub fn find_largest_unexplored_interval(samples: &SampleSet, fit: &Fit) -> Result<usize> {
    let idx: Vec<usize> = samples.indices().collect();
    let mut best: Option<(usize, usize, f64)> = None; // (left, width, min f)
    for w in idx.windows(2) {
        let (i, r) = (w[0], w[1]);
        let width = r - i;
        if width < 2 {
            continue;
        }
        let better = match best {
            None => true,
            Some((_, bw, bf)) => {
                width > bw || (width == bw && {
                    let low = window_min(fit, i, r);
                    low < bf
                })
            }
        };
        if better {
            best = Some((i, width, window_min(fit, i, r)));
        }
    }
    match best {
        Some((i, width, _)) => Ok(i + width / 2),
        None => Err(Error::NoUnexploredInterval),
    }
}

fn window_min(fit: &Fit, lo: usize, hi: usize) -> f64 {
    fit.values()[lo - 1..hi]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Move `j` towards the midpoint of its bracketing samples while the fit stays
/// within `theta · range` of `fit[j]`, on whichever side has more room.
pub fn sample_around_the_bend(j: usize, fit: &Fit, samples: &SampleSet, theta: f64) -> usize {
    let (Some(l), Some(r)) = (samples.left_of(j), samples.right_of(j)) else {
        return j;
    };
    let m = l + (r - l).div_ceil(2);
    let band = theta * fit.range();
    let fj = fit.at(j);
    let ok = |i: usize| (fit.at(i) - fj).abs() <= band;
    if r - j >= j - l {
        (j..=m).rev().find(|&i| ok(i)).unwrap_or(j)
    } else {
        (m..=j).find(|&i| ok(i)).unwrap_or(j)
    }
}

/// Ascending by fit value, then by index.
pub fn sort_candidates(candidates: &[usize], fit: &Fit) -> Vec<usize> {
    let mut v = candidates.to_vec();
    v.sort_by(|&a, &b| fit.at(a).total_cmp(&fit.at(b)).then(a.cmp(&b)));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(idx: &[usize]) -> SampleSet {
        let mut s = SampleSet::new();
        for &i in idx {
            s.insert(i, 0.0);
        }
        s
    }

    #[test]
    fn exploration_flat_takes_first_gap() {
        let fit = Fit::zeros(21);
        assert_eq!(
            find_largest_unexplored_interval(&samples(&[1, 11, 21]), &fit).unwrap(),
            6
        );
    }

    #[test]
    fn exploration_prefers_lower_gap() {
        let mut v = vec![0.0; 21];
        v[14] = -1.0;
        let fit = Fit::from_values(v, 0, 0);
        assert_eq!(
            find_largest_unexplored_interval(&samples(&[1, 11, 21]), &fit).unwrap(),
            16
        );
    }

    #[test]
    fn exploration_prefers_wider_gap() {
        let mut v = vec![0.0; 21];
        v[2] = -5.0;
        let fit = Fit::from_values(v, 0, 0);
        assert_eq!(
            find_largest_unexplored_interval(&samples(&[1, 5, 21]), &fit).unwrap(),
            13
        );
    }

    #[test]
    fn exploration_fails_when_everything_sampled() {
        let fit = Fit::zeros(4);
        assert!(matches!(
            find_largest_unexplored_interval(&samples(&[1, 2, 3, 4]), &fit),
            Err(Error::NoUnexploredInterval)
        ));
    }

    #[test]
    fn bend_steep_fit_stays_put() {
        let fit = Fit::from_values((0..21).map(|k| ((k as f64) - 8.0).powi(2)).collect(), 0, 0);
        assert_eq!(sample_around_the_bend(9, &fit, &samples(&[1, 21]), 0.001), 9);
    }

    #[test]
    fn bend_flat_fit_walks_to_midpoint() {
        let fit = Fit::from_values(vec![0.0; 21], 0, 0);
        // L=1, R=12, M=1+round(5.5)=7; j=6 has more room to the right
        assert_eq!(sample_around_the_bend(6, &fit, &samples(&[1, 12]), 0.01), 7);
        // j=8: left side larger, walk left down to M
        assert_eq!(sample_around_the_bend(8, &fit, &samples(&[1, 12]), 0.01), 7);
    }

    #[test]
    fn bend_respects_theta_band() {
        // fit rises linearly: only indices within 0.5 of fit[j] qualify
        let fit = Fit::from_values((0..101).map(f64::from).collect(), 0, 0);
        // range 100, theta 0.03 -> band 3
        let k = sample_around_the_bend(20, &fit, &samples(&[1, 101]), 0.03);
        assert_eq!(k, 23);
        let k = sample_around_the_bend(90, &fit, &samples(&[1, 101]), 0.03);
        assert_eq!(k, 87);
    }

    #[test]
    fn sorting() {
        let mut v = vec![0.0; 6];
        v[4] = -1.0;
        v[2] = 1.0;
        let fit = Fit::from_values(v, 0, 0);
        assert_eq!(sort_candidates(&[5, 3], &fit), vec![5, 3]);
        assert_eq!(sort_candidates(&[6, 2, 4], &fit), vec![2, 4, 6]);
        assert!(sort_candidates(&[], &fit).is_empty());
    }
}
