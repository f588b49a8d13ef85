//! Seeded random problem generators for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::matops::{self, Mat, SymMat};
use crate::structure::BlockPartition;
use crate::synthesis::Plant;

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// `GGᵀ + shift·I` for Gaussian `G`.
pub fn posdef<R: Rng + ?Sized>(rng: &mut R, n: usize, shift: f64) -> SymMat {
    let g = gaussian(rng, n, n);
    SymMat::new(&g * g.transpose() + Mat::identity(n, n) * shift).expect("finite")
}

/// Gaussian matrix shifted so its spectral abscissa equals `abscissa`.
pub fn with_abscissa<R: Rng + ?Sized>(rng: &mut R, n: usize, abscissa: f64) -> Result<Mat> {
    let m = gaussian(rng, n, n);
    let current = matops::eig_max_real(&m)?;
    Ok(m + Mat::identity(n, n) * (abscissa - current))
}

/// Random split of `n` into `blocks` positive sizes.
pub fn split<R: Rng + ?Sized>(rng: &mut R, n: usize, blocks: usize) -> Vec<usize> {
    assert!(blocks >= 1 && blocks <= n);
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(blocks - 1).collect();
    cuts.sort_unstable();
    cuts.push(n);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let d = c - prev;
            prev = c;
            d
        })
        .collect()
}

/// Block-diagonal `A` with Gaussian blocks and a sparse Gaussian `B` in
/// which each input block touches at least one state block.
pub fn network_plant<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    density: f64,
) -> Result<(Plant, BlockPartition)> {
    let (ns, ni) = (rng.random_range(1..=n), rng.random_range(1..=m));
    let state_dims = split(rng, n, ns);
    let input_dims = split(rng, m, ni);
    let part = BlockPartition::new(state_dims, input_dims)?;
    let mut a = Mat::zeros(n, n);
    for (&s0, &sd) in part.state_offsets().iter().zip(part.state_dims()) {
        a.view_mut((s0, s0), (sd, sd)).copy_from(&gaussian(rng, sd, sd));
    }
    let mut b = Mat::zeros(n, m);
    let blocks = part.state_dims().len();
    for (&i0, &id) in part.input_offsets().iter().zip(part.input_dims()) {
        let forced = rng.random_range(0..blocks);
        for (s, (&s0, &sd)) in part.state_offsets().iter().zip(part.state_dims()).enumerate() {
            if s == forced || rng.random_bool(density) {
                b.view_mut((s0, i0), (sd, id)).copy_from(&gaussian(rng, sd, id));
            }
        }
    }
    Ok((Plant::new(a, b)?, part))
}
