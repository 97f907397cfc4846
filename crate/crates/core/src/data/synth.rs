use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Dataset, Features};
use crate::error::{Error, Result};

/// Two unit-variance Gaussian blobs centred at `±separation/2` on every
/// coordinate. Positives come first.
pub fn synth_gaussians(
    n_per_class: usize,
    separation: f64,
    dim: usize,
    seed: u64,
) -> Result<Dataset> {
    if n_per_class == 0 || dim == 0 {
        return Err(Error::InvalidParameter(
            "n_per_class and dim must be positive".into(),
        ));
    }
    if !separation.is_finite() {
        return Err(Error::InvalidParameter("separation must be finite".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(2 * n_per_class * dim);
    let mut labels = Vec::with_capacity(2 * n_per_class);
    for y in [1i8, -1] {
        let centre = f64::from(y) * separation / 2.0;
        for _ in 0..n_per_class {
            for _ in 0..dim {
                let z: f64 = StandardNormal.sample(&mut rng);
                data.push(centre + z);
            }
            labels.push(y);
        }
    }
    Dataset::new(Features::new(2 * n_per_class, dim, data)?, labels)
}

/// Four unit-variance clusters centred at `(±2, ±2)`. Each sample is
/// labelled by the sign of its own coordinate product, so the classes are
/// the quadrant pairs and the problem is not linearly separable.
pub fn synth_xor(n_per_cluster: usize, seed: u64) -> Result<Dataset> {
    if n_per_cluster == 0 {
        return Err(Error::InvalidParameter(
            "n_per_cluster must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(8 * n_per_cluster);
    let mut labels = Vec::with_capacity(4 * n_per_cluster);
    for (cx, cy) in [(2.0, 2.0), (-2.0, -2.0), (2.0, -2.0), (-2.0, 2.0)] {
        for _ in 0..n_per_cluster {
            let zx: f64 = StandardNormal.sample(&mut rng);
            let zy: f64 = StandardNormal.sample(&mut rng);
            let (x, y) = (cx + zx, cy + zy);
            data.push(x);
            data.push(y);
            labels.push(if x * y >= 0.0 { 1 } else { -1 });
        }
    }
    Dataset::new(Features::new(4 * n_per_cluster, 2, data)?, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussians_shape_and_balance() {
        let d = synth_gaussians(50, 8.0, 3, 1).unwrap();
        assert_eq!(d.len(), 100);
        assert_eq!(d.n_features(), 3);
        assert_eq!(d.count_positive(), 50);
        assert_eq!(d, synth_gaussians(50, 8.0, 3, 1).unwrap());
    }

    #[test]
    fn wide_separation_is_separable_along_diagonal() {
        let d = synth_gaussians(200, 10.0, 2, 4).unwrap();
        for (row, &y) in d.features().rows().zip(d.labels()) {
            assert_eq!((row[0] + row[1]).signum() as i8, y);
        }
    }

    #[test]
    fn xor_labels_follow_quadrants() {
        let d = synth_xor(25, 2).unwrap();
        assert_eq!(d.len(), 100);
        for (row, &y) in d.features().rows().zip(d.labels()) {
            assert_eq!(row[0] * row[1] >= 0.0, y == 1);
        }
        assert!(d.has_both_classes());
    }
}
