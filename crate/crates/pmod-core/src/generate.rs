//! Deterministic random instance generation.
//!
//! Same seed and parameters always produce the same artifact, bit for bit;
//! the seeded stream cipher RNG guarantees that across platforms. Two
//! flavors: interval-sum modules built from random barcodes, and raw modules
//! with arbitrary random matrices.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::barcode::{from_barcode, Barcode};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::module::{IndexKind, TameModule};
use crate::rational::{Extended, Rational};

// Denominators used for random real endpoints; small and varied enough to
// land both on and off any ε-lattice in the test ranges.
const DENOMINATORS: [i64; 5] = [1, 2, 3, 4, 6];

/// Random barcode with `bars` bars, endpoints in `[0, max_endpoint]`
/// (integers for natural barcodes, small-denominator rationals for real
/// ones). With `allow_infinite`, roughly one bar in eight is infinite.
pub fn random_barcode(
    seed: u64,
    bars: usize,
    max_endpoint: u64,
    kind: IndexKind,
    allow_infinite: bool,
) -> Barcode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(bars);
    for _ in 0..bars {
        let (birth, length) = match kind {
            IndexKind::Nat => {
                let birth = rng.random_range(0..=max_endpoint) as i64;
                let length = rng.random_range(1..=max_endpoint.max(1)) as i64;
                (Rational::from_int(birth), Rational::from_int(length))
            }
            IndexKind::Real => {
                let den = DENOMINATORS[rng.random_range(0..DENOMINATORS.len())];
                let birth = rng.random_range(0..=max_endpoint * den as u64) as i64;
                let len = rng.random_range(1..=(max_endpoint * den as u64).max(1)) as i64;
                (
                    Rational::new(birth.into(), den.into()).expect("den nonzero"),
                    Rational::new(len.into(), den.into()).expect("den nonzero"),
                )
            }
        };
        let death = if allow_infinite && rng.random_range(0..8) == 0 {
            Extended::Infinity
        } else {
            Extended::Finite(&birth + &length)
        };
        out.push((birth, death, 1));
    }
    Barcode::new(kind, out).expect("generated bars are valid")
}

/// Interval-sum module realizing `random_barcode`.
pub fn random_interval_module(
    seed: u64,
    bars: usize,
    max_endpoint: u64,
    kind: IndexKind,
    p: u64,
    allow_infinite: bool,
) -> Result<TameModule> {
    from_barcode(
        &random_barcode(seed, bars, max_endpoint, kind, allow_infinite),
        p,
    )
}

/// Raw module: random grid of at most `max_grid` points, dimensions at most
/// `max_dim`, and uniformly random transition matrices over 𝔽_p.
pub fn random_raw_module(
    seed: u64,
    max_grid: usize,
    max_dim: usize,
    kind: IndexKind,
    p: u64,
) -> Result<TameModule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = rng.random_range(0..=max_grid);
    let mut grid = Vec::with_capacity(points);
    let mut cursor = match kind {
        IndexKind::Nat => Rational::from_int(rng.random_range(0..3)),
        IndexKind::Real => {
            let den = DENOMINATORS[rng.random_range(0..DENOMINATORS.len())];
            Rational::new(rng.random_range(0..6).into(), den.into()).expect("den nonzero")
        }
    };
    for _ in 0..points {
        grid.push(cursor.clone());
        let step = match kind {
            IndexKind::Nat => Rational::from_int(rng.random_range(1..=3)),
            IndexKind::Real => {
                let den = DENOMINATORS[rng.random_range(0..DENOMINATORS.len())];
                Rational::new(rng.random_range(1..=3 * den).into(), den.into())
                    .expect("den nonzero")
            }
        };
        cursor = &cursor + &step;
    }
    let dims: Vec<usize> = (0..points).map(|_| rng.random_range(0..=max_dim)).collect();
    let mut maps = Vec::with_capacity(points.saturating_sub(1));
    for i in 1..points {
        let (rows, cols) = (dims[i], dims[i - 1]);
        let entries = (0..rows * cols).map(|_| rng.random_range(0..p)).collect();
        maps.push(Matrix::from_entries(rows, cols, p, entries)?);
    }
    TameModule::new(kind, p, grid, dims, maps)
}
