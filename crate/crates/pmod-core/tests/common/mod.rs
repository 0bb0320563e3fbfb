//! Shared corpus builders for the integration and acceptance suites.
//! Everything is seeded, so every run sees the same instances.

#![allow(dead_code)]

use pmod_core::barcode::{from_barcode, Barcode};
use pmod_core::generate::{random_barcode, random_interval_module, random_raw_module};
use pmod_core::graded::{GradedPresentation, Relation};
use pmod_core::module::{IndexKind, TameModule};
use pmod_core::rational::{Extended, Rational};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn interval(kind: IndexKind, b: &str, d: &str) -> TameModule {
    let bc = Barcode::new(kind, vec![(r(b), Extended::Finite(r(d)), 1)]).unwrap();
    from_barcode(&bc, 2).unwrap()
}

/// Seeded real modules: interval sums (some shifted below 0, so not all are
/// lower stable at 0) and raw random-matrix modules.
pub fn real_corpus(count: usize) -> Vec<TameModule> {
    (0..count)
        .map(|i| {
            let seed = 0x5eed_0000 + i as u64;
            match i % 4 {
                0 | 1 => {
                    random_interval_module(seed, 1 + i % 5, 8, IndexKind::Real, 2, true).unwrap()
                }
                2 => {
                    let m = random_interval_module(seed, 1 + i % 5, 8, IndexKind::Real, 2, true)
                        .unwrap();
                    // push part of the corpus below zero
                    m.translate(&r("3/2")).unwrap()
                }
                _ => random_raw_module(seed, 5, 3, IndexKind::Real, 2).unwrap(),
            }
        })
        .collect()
}

/// The sub-corpus the pixelization and composite-functor claims apply to.
pub fn stable_real_corpus(count: usize) -> Vec<TameModule> {
    real_corpus(count)
        .into_iter()
        .filter(|m| m.is_lower_stable(&Rational::zero()).unwrap())
        .collect()
}

/// Seeded natural modules with at most 8 bars and endpoints at most 20.
pub fn nat_corpus(count: usize) -> Vec<TameModule> {
    (0..count)
        .map(|i| {
            let seed = 0x0a70_0000 + i as u64;
            random_interval_module(seed, i % 9, 20, IndexKind::Nat, 2, true).unwrap()
        })
        .collect()
}

pub fn nat_barcode_corpus(count: usize) -> Vec<Barcode> {
    (0..count)
        .map(|i| random_barcode(0x0a70_0000 + i as u64, i % 9, 20, IndexKind::Nat, true))
        .collect()
}

/// Seeded random homogeneous presentations over small prime fields.
pub fn presentation_corpus(count: usize) -> Vec<GradedPresentation> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6e_0000 + i as u64);
            let p = if i % 3 == 0 { 3 } else { 2 };
            let n_gens = rng.random_range(0..=6);
            let gens: Vec<usize> = (0..n_gens).map(|_| rng.random_range(0..=10)).collect();
            let n_rels = if n_gens == 0 {
                0
            } else {
                rng.random_range(0..=4)
            };
            let rels = (0..n_rels)
                .map(|_| {
                    let degree = rng.random_range(0..=12);
                    let coeffs = gens
                        .iter()
                        .map(|&e| {
                            if e <= degree {
                                rng.random_range(0..p)
                            } else {
                                0
                            }
                        })
                        .collect();
                    Relation { degree, coeffs }
                })
                .collect();
            GradedPresentation::new(p, gens, rels).unwrap()
        })
        .collect()
}

/// Exhaustive raw modules over F_2: every dims vector up to `max_dim` on a
/// grid of up to `max_grid` points, with every possible matrix chain.
pub fn exhaustive_small_modules(max_grid: usize, max_dim: usize) -> Vec<TameModule> {
    let mut out = vec![TameModule::zero(IndexKind::Real, 2)];
    for points in 1..=max_grid {
        let grid: Vec<Rational> = (0..points).map(|i| Rational::from_int(i as i64)).collect();
        let mut dims = vec![0usize; points];
        loop {
            // enumerate all map chains for this dims vector
            let shapes: Vec<(usize, usize)> = (1..points).map(|i| (dims[i], dims[i - 1])).collect();
            for assignment in MatrixChain::new(&shapes) {
                out.push(
                    TameModule::new(IndexKind::Real, 2, grid.clone(), dims.clone(), assignment)
                        .unwrap(),
                );
            }
            // next dims vector
            let mut idx = 0;
            loop {
                if idx == points {
                    break;
                }
                dims[idx] += 1;
                if dims[idx] <= max_dim {
                    break;
                }
                dims[idx] = 0;
                idx += 1;
            }
            if idx == points {
                break;
            }
        }
    }
    out
}

/// Iterator over all chains of F_2 matrices with the given shapes.
pub struct MatrixChain {
    shapes: Vec<(usize, usize)>,
    state: Vec<u64>,
    done: bool,
}

impl MatrixChain {
    pub fn new(shapes: &[(usize, usize)]) -> Self {
        MatrixChain {
            shapes: shapes.to_vec(),
            state: vec![0; shapes.len()],
            done: false,
        }
    }
}

impl Iterator for MatrixChain {
    type Item = Vec<pmod_core::matrix::Matrix>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = self
            .shapes
            .iter()
            .zip(&self.state)
            .map(|(&(rows, cols), &bits)| {
                let entries = (0..rows * cols).map(|i| (bits >> i) & 1).collect();
                pmod_core::matrix::Matrix::from_entries(rows, cols, 2, entries).unwrap()
            })
            .collect();
        // advance mixed-radix counter over 2^(r*c) states per position
        let mut idx = 0;
        loop {
            if idx == self.shapes.len() {
                self.done = true;
                break;
            }
            let (rows, cols) = self.shapes[idx];
            self.state[idx] += 1;
            if self.state[idx] < (1u64 << (rows * cols)) {
                break;
            }
            self.state[idx] = 0;
            idx += 1;
        }
        Some(item)
    }
}

/// Dimension and pairwise-rank agreement over the union of both grids; the
/// exact isomorphism criterion for this module class.
pub fn rank_invariant_eq(a: &TameModule, b: &TameModule) -> bool {
    let mut pts: Vec<Rational> = a.grid().to_vec();
    pts.extend_from_slice(b.grid());
    pts.sort();
    pts.dedup();
    for x in &pts {
        if a.eval(x).unwrap() != b.eval(x).unwrap() {
            return false;
        }
    }
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let ra = a.structure_map(&pts[i], &pts[j]).unwrap().rank();
            let rb = b.structure_map(&pts[i], &pts[j]).unwrap().rank();
            if ra != rb {
                return false;
            }
        }
    }
    true
}
