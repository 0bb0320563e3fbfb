//! Tame persistence modules over (ℝ, ≤) and (ℕ, ≤).
//!
//! A [`TameModule`] is the computable stand-in for a persistence module: a
//! finite strictly ascending critical grid, a dimension per grid point, and
//! exact transition matrices between consecutive points. Evaluation is zero
//! below the grid, constant between grid points, and eventually constant
//! (via identity maps) above the last one. That class is closed under every
//! operation in this crate and admits an exact isomorphism invariant, the
//! rank table.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::validate_modulus;
use crate::matrix::Matrix;
use crate::rational::Rational;

/// Bound on the number of grid points any operation may synthesize; guards
/// pixelization and friends against absurd ε.
pub const MAX_SYNTH_GRID: usize = 1 << 20;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum IndexKind {
    Real,
    Nat,
}

impl IndexKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IndexKind::Real => "real",
            IndexKind::Nat => "nat",
        }
    }
}

impl std::str::FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(IndexKind::Real),
            "nat" => Ok(IndexKind::Nat),
            other => Err(Error::Param(format!("unknown index kind `{other}`"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct TameModule {
    kind: IndexKind,
    p: u64,
    grid: Vec<Rational>,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl TameModule {
    pub fn new(
        kind: IndexKind,
        p: u64,
        grid: Vec<Rational>,
        dims: Vec<usize>,
        maps: Vec<Matrix>,
    ) -> Result<Self> {
        validate_modulus(p)?;
        if dims.len() != grid.len() {
            return Err(Error::Validation(format!(
                "{} grid points but {} dimensions",
                grid.len(),
                dims.len()
            )));
        }
        if maps.len() != grid.len().saturating_sub(1) {
            return Err(Error::Validation(format!(
                "{} grid points need {} maps, got {}",
                grid.len(),
                grid.len().saturating_sub(1),
                maps.len()
            )));
        }
        for w in grid.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Validation(format!(
                    "grid not strictly ascending at {} >= {}",
                    w[0], w[1]
                )));
            }
        }
        if kind == IndexKind::Nat {
            if let Some(bad) = grid.iter().find(|t| !t.is_integer() || t.is_negative()) {
                return Err(Error::Validation(format!(
                    "natural grid value {bad} is not a non-negative integer"
                )));
            }
        }
        for (i, m) in maps.iter().enumerate() {
            if m.rows() != dims[i + 1] || m.cols() != dims[i] {
                return Err(Error::Validation(format!(
                    "map {i} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
            if m.modulus() != p {
                return Err(Error::Validation(format!(
                    "map {i} uses modulus {}, module uses {p}",
                    m.modulus()
                )));
            }
        }
        Ok(TameModule {
            kind,
            p,
            grid,
            dims,
            maps,
        })
    }

    /// The zero module: empty grid, zero everywhere.
    pub fn zero(kind: IndexKind, p: u64) -> Self {
        TameModule {
            kind,
            p,
            grid: Vec::new(),
            dims: Vec::new(),
            maps: Vec::new(),
        }
    }

    pub fn kind(&self) -> IndexKind {
        self.kind
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn grid(&self) -> &[Rational] {
        &self.grid
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn is_zero_module(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    fn check_point(&self, x: &Rational) -> Result<()> {
        if self.kind == IndexKind::Nat && !x.is_integer() {
            return Err(Error::Param(format!(
                "natural modules are evaluated at integers, got {x}"
            )));
        }
        Ok(())
    }

    /// Index of the grid cell containing `x`, or `None` below the grid.
    pub fn cell_index(&self, x: &Rational) -> Option<usize> {
        let n = self.grid.partition_point(|t| t <= x);
        n.checked_sub(1)
    }

    /// Dimension of the evaluation at `x`.
    pub fn eval(&self, x: &Rational) -> Result<usize> {
        self.check_point(x)?;
        Ok(match self.cell_index(x) {
            None => 0,
            Some(i) => self.dims[i],
        })
    }

    /// The composite transition matrix from the evaluation at `x` to the
    /// evaluation at `y`; identity when no grid point lies in `(x, y]`.
    pub fn structure_map(&self, x: &Rational, y: &Rational) -> Result<Matrix> {
        self.check_point(x)?;
        self.check_point(y)?;
        if x > y {
            return Err(Error::Order(format!("structure map needs {x} <= {y}")));
        }
        let ci = self.cell_index(x);
        let cj = self.cell_index(y);
        match (ci, cj) {
            (None, None) => Ok(Matrix::identity(0, self.p)),
            (None, Some(j)) => Ok(Matrix::zero(self.dims[j], 0, self.p)),
            (Some(i), Some(j)) => {
                let mut acc = Matrix::identity(self.dims[i], self.p);
                for k in i..j {
                    acc = self.maps[k].try_mul(&acc)?;
                }
                Ok(acc)
            }
            (Some(_), None) => unreachable!("cells are monotone in x"),
        }
    }

    /// The shifted module `q ↦ M(p + q)`, realized as a grid shift by `−p`.
    /// Natural modules require a non-negative integer `p` and clamp at 0 by
    /// composing the leading structure maps.
    pub fn translate(&self, p: &Rational) -> Result<TameModule> {
        match self.kind {
            IndexKind::Real => {
                let grid = self.grid.iter().map(|t| t - p).collect();
                TameModule::new(
                    self.kind,
                    self.p,
                    grid,
                    self.dims.clone(),
                    self.maps.clone(),
                )
            }
            IndexKind::Nat => {
                if !p.is_integer() || p.is_negative() {
                    return Err(Error::Param(format!(
                        "natural translation needs a non-negative integer, got {p}"
                    )));
                }
                if self.grid.is_empty() {
                    return Ok(self.clone());
                }
                if &self.grid[0] > p {
                    let grid = self.grid.iter().map(|t| t - p).collect();
                    return TameModule::new(
                        self.kind,
                        self.p,
                        grid,
                        self.dims.clone(),
                        self.maps.clone(),
                    );
                }
                // Clamp: everything at or below p collapses onto grid value 0.
                let c = self.cell_index(p).expect("grid[0] <= p");
                let mut grid = vec![Rational::zero()];
                let mut dims = vec![self.dims[c]];
                for i in c + 1..self.grid.len() {
                    grid.push(&self.grid[i] - p);
                    dims.push(self.dims[i]);
                }
                let maps = self.maps[c..].to_vec();
                Ok(TameModule::new(self.kind, self.p, grid, dims, maps)?.canonicalize())
            }
        }
    }

    /// The module constant on each lattice cell `[x0+kε, x0+(k+1)ε)` whose
    /// value there is the evaluation at the cell's own lattice point.
    pub fn pixelize(&self, x0: &Rational, eps: &Rational) -> Result<TameModule> {
        if self.kind != IndexKind::Real {
            return Err(Error::Param("pixelize needs a real-indexed module".into()));
        }
        if !eps.is_positive() {
            return Err(Error::Param(format!("pixelize needs ε > 0, got {eps}")));
        }
        if self.grid.is_empty() {
            return Ok(self.clone());
        }
        let k_min = (&self.grid[0] - x0).ceil_div(eps)?;
        let k_max = (self.grid.last().unwrap() - x0).ceil_div(eps)?;
        let lattice = lattice_range(x0, eps, &k_min, &k_max)?;
        let mut dims = Vec::with_capacity(lattice.len());
        for pt in &lattice {
            dims.push(self.eval(pt)?);
        }
        let mut maps = Vec::with_capacity(lattice.len().saturating_sub(1));
        for w in lattice.windows(2) {
            maps.push(self.structure_map(&w[0], &w[1])?);
        }
        Ok(TameModule::new(self.kind, self.p, lattice, dims, maps)?.canonicalize())
    }

    /// True iff every structure map strictly below `x0` is an isomorphism.
    /// With zero-below-grid semantics that holds exactly when every grid
    /// point below `x0` carries dimension zero.
    pub fn is_lower_stable(&self, x0: &Rational) -> Result<bool> {
        if self.kind != IndexKind::Real {
            return Err(Error::Param(
                "lower stability is defined for real-indexed modules".into(),
            ));
        }
        Ok(self
            .grid
            .iter()
            .zip(&self.dims)
            .all(|(t, &d)| t >= x0 || d == 0))
    }

    /// Removes grid points that carry no information: leading zero-dimension
    /// points, and points whose incoming map is a square identity.
    pub fn canonicalize(&self) -> TameModule {
        let mut grid = self.grid.clone();
        let mut dims = self.dims.clone();
        let mut maps = self.maps.clone();
        while !dims.is_empty() && dims[0] == 0 {
            grid.remove(0);
            dims.remove(0);
            if !maps.is_empty() {
                maps.remove(0);
            }
        }
        let mut i = 1;
        while i < dims.len() {
            if dims[i] == dims[i - 1] && maps[i - 1].is_identity() {
                grid.remove(i);
                dims.remove(i);
                maps.remove(i - 1);
            } else {
                i += 1;
            }
        }
        TameModule {
            kind: self.kind,
            p: self.p,
            grid,
            dims,
            maps,
        }
    }

    /// Equality after canonicalization.
    pub fn canonical_eq(&self, other: &TameModule) -> bool {
        self.canonicalize() == other.canonicalize()
    }

    /// Exact ranks of all composite structure maps between grid points.
    pub fn rank_table(&self) -> RankTable {
        let m = self.grid.len();
        let mut ranks = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = Vec::with_capacity(m - i);
            row.push(self.dims[i]);
            let mut acc = Matrix::identity(self.dims[i], self.p);
            for j in i + 1..m {
                acc = &self.maps[j - 1] * &acc;
                row.push(acc.rank());
            }
            ranks.push(row);
        }
        RankTable { ranks }
    }
}

impl std::fmt::Debug for TameModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "TameModule({}, p={}, grid={:?}, dims={:?})",
            self.kind.as_str(),
            self.p,
            self.grid,
            self.dims
        )
    }
}

/// The points `x0 + k·ε` for `k` in `[k_min, k_max]`, guarded against
/// synthesizing absurdly many of them.
pub(crate) fn lattice_range(
    x0: &Rational,
    eps: &Rational,
    k_min: &BigInt,
    k_max: &BigInt,
) -> Result<Vec<Rational>> {
    if k_min > k_max {
        return Ok(Vec::new());
    }
    let count = (k_max - k_min + 1u8)
        .to_usize()
        .filter(|&c| c <= MAX_SYNTH_GRID)
        .ok_or_else(|| {
            Error::Resource(format!(
                "lattice from {k_min} to {k_max} exceeds {MAX_SYNTH_GRID} points"
            ))
        })?;
    let mut pts = Vec::with_capacity(count);
    let mut k = k_min.clone();
    while &k <= k_max {
        pts.push(x0 + &(Rational::from_bigint(k.clone()) * eps.clone()));
        k += 1u8;
    }
    Ok(pts)
}

/// The table of ranks `rank M(t_i ≤ t_j)` for all `i ≤ j`; a complete
/// isomorphism invariant for this module class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankTable {
    ranks: Vec<Vec<usize>>,
}

impl RankTable {
    pub fn size(&self) -> usize {
        self.ranks.len()
    }

    pub fn rank(&self, i: usize, j: usize) -> usize {
        assert!(i <= j && j < self.size(), "rank table index out of range");
        self.ranks[i][j - i]
    }
}
