//! Prior (and importance-proposal) densities over parameter space.

use crate::rng::StreamRng;
use rand::Rng;

/// A density we can evaluate and sample. Used for priors and for
/// importance-sampling proposals.
pub trait Density: Sync {
    fn dim(&self) -> usize;
    /// Density at `theta`. May be unnormalized for discrete supports; only
    /// ratios enter the samplers.
    fn density(&self, theta: &[f64]) -> f64;
    fn sample(&self, rng: &mut StreamRng) -> Vec<f64>;
}

/// Independent uniform prior on a box.
#[derive(Clone, Debug)]
pub struct UniformBoxPrior {
    lo: Vec<f64>,
    hi: Vec<f64>,
    density: f64,
}

impl UniformBoxPrior {
    pub fn new(bounds: &[(f64, f64)]) -> Self {
        assert!(!bounds.is_empty());
        let mut vol = 1.0;
        for &(lo, hi) in bounds {
            assert!(hi > lo, "degenerate prior bound ({lo}, {hi})");
            vol *= hi - lo;
        }
        UniformBoxPrior {
            lo: bounds.iter().map(|b| b.0).collect(),
            hi: bounds.iter().map(|b| b.1).collect(),
            density: 1.0 / vol,
        }
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.lo.iter().cloned().zip(self.hi.iter().cloned()).collect()
    }

    pub fn contains(&self, theta: &[f64]) -> bool {
        theta.len() == self.lo.len()
            && theta
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(t, (lo, hi))| t >= lo && t <= hi)
    }
}

impl Density for UniformBoxPrior {
    fn dim(&self) -> usize {
        self.lo.len()
    }

    fn density(&self, theta: &[f64]) -> f64 {
        if self.contains(theta) {
            self.density
        } else {
            0.0
        }
    }

    fn sample(&self, rng: &mut StreamRng) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&lo, &hi)| lo + (hi - lo) * rng.random::<f64>())
            .collect()
    }
}

/// Uniform prior over a finite set of 1-D atoms. Test apparatus for the
/// discrete oracle models; the density is the (unnormalized) indicator of
/// the support.
#[derive(Clone, Debug)]
pub struct GridPrior {
    atoms: Vec<f64>,
}

impl GridPrior {
    pub fn new(atoms: Vec<f64>) -> Self {
        assert!(!atoms.is_empty());
        GridPrior { atoms }
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn nearest_index(&self, value: f64) -> usize {
        let mut best = 0usize;
        let mut best_dist = f64::INFINITY;
        for (i, &a) in self.atoms.iter().enumerate() {
            let d = (a - value).abs();
            if d < best_dist {
                best_dist = d;
                best = i;
            }
        }
        best
    }
}

impl Density for GridPrior {
    fn dim(&self) -> usize {
        1
    }

    fn density(&self, theta: &[f64]) -> f64 {
        if self.atoms.iter().any(|&a| a == theta[0]) {
            1.0
        } else {
            0.0
        }
    }

    fn sample(&self, rng: &mut StreamRng) -> Vec<f64> {
        let i = rng.random_range(0..self.atoms.len());
        vec![self.atoms[i]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RngStream, StreamPurpose};

    #[test]
    fn box_density_inside_and_outside() {
        let p = UniformBoxPrior::new(&[(-2.0, 2.0), (0.0, 1.0)]);
        assert!((p.density(&[0.0, 0.5]) - 0.25).abs() < 1e-15);
        assert_eq!(p.density(&[3.0, 0.5]), 0.0);
        assert_eq!(p.density(&[0.0, -0.1]), 0.0);
    }

    #[test]
    fn box_samples_inside() {
        let p = UniformBoxPrior::new(&[(0.1, 3.0), (2.0, 6.0)]);
        let mut rng = RngStream::new(5).derive(StreamPurpose::Init, 0, 0).rng();
        for _ in 0..100 {
            let t = p.sample(&mut rng);
            assert!(p.contains(&t));
        }
    }
}
