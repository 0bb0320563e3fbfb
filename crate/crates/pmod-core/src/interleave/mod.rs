//! ε-shifted module maps, interleaving certificates, and exact verifiers.
//!
//! A [`ModuleMap`] stores an ε-shifted natural transformation `f: M → T_εN`
//! as piecewise-constant matrix blocks over a cell grid refining the grids
//! of both modules; its component at `x` is `f_x: M(x) → N(x+ε)`. A
//! [`InterleavingCertificate`] pairs two such maps in opposite directions
//! and is checked by [`verify_strong`] and [`verify_weak`]. Verification is
//! exact: the data is piecewise constant, so checking naturality on
//! consecutive cells and the composite identities at the refined grid's
//! left endpoints covers every index.

mod bottleneck;
mod brute;
mod canonical;
mod report;

pub use bottleneck::bottleneck_distance;
pub use brute::{brute_force_interleaving_exists, DEFAULT_BRUTE_BUDGET};
pub use canonical::{
    canonical_fg_interleaving, canonical_gf_interleaving, canonical_pixel_interleaving,
    canonical_shift_interleaving, promote_weak_to_strong,
};
pub use report::{equivalence_report, EquivalenceReport, ReportSide};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{lattice_range, IndexKind, TameModule};
use crate::rational::Rational;

/// An ε-shifted map between tame modules, given per-cell.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleMap {
    source: TameModule,
    target: TameModule,
    shift: Rational,
    cells: Vec<Rational>,
    blocks: Vec<Matrix>,
}

impl ModuleMap {
    /// Validates the cell grid (a refinement of `source.grid ∪ (target.grid
    /// − shift)` with one extra point below) and the block shapes.
    pub fn new(
        source: TameModule,
        target: TameModule,
        shift: Rational,
        cells: Vec<Rational>,
        blocks: Vec<Matrix>,
    ) -> Result<Self> {
        if shift.is_negative() {
            return Err(Error::Validation(format!(
                "map shift must be non-negative, got {shift}"
            )));
        }
        if source.kind() != target.kind() {
            return Err(Error::Validation(
                "map endpoints have different index kinds".into(),
            ));
        }
        if source.modulus() != target.modulus() {
            return Err(Error::Validation(
                "map endpoints have different field moduli".into(),
            ));
        }
        if source.kind() == IndexKind::Nat {
            if !shift.is_integer() {
                return Err(Error::Validation(format!(
                    "natural map shift must be an integer, got {shift}"
                )));
            }
            if let Some(bad) = cells.iter().find(|c| !c.is_integer()) {
                return Err(Error::Validation(format!(
                    "natural map cell {bad} is not an integer"
                )));
            }
        }
        if cells.is_empty() {
            return Err(Error::Validation("map needs at least one cell".into()));
        }
        for w in cells.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Validation(format!(
                    "cell grid not strictly ascending at {} >= {}",
                    w[0], w[1]
                )));
            }
        }
        let mut required: Vec<Rational> = source.grid().to_vec();
        required.extend(target.grid().iter().map(|t| t - &shift));
        for pt in &required {
            if !cells.contains(pt) {
                return Err(Error::Validation(format!(
                    "cell grid misses the critical value {pt}"
                )));
            }
            if pt <= &cells[0] {
                return Err(Error::Validation(format!(
                    "cell grid needs one point strictly below {pt}"
                )));
            }
        }
        if blocks.len() != cells.len() {
            return Err(Error::Validation(format!(
                "{} cells but {} blocks",
                cells.len(),
                blocks.len()
            )));
        }
        for (k, (cell, block)) in cells.iter().zip(&blocks).enumerate() {
            let rows = target.eval(&(cell + &shift))?;
            let cols = source.eval(cell)?;
            if block.rows() != rows || block.cols() != cols {
                return Err(Error::Validation(format!(
                    "block {k} at cell {cell} has shape {}x{}, expected {rows}x{cols}",
                    block.rows(),
                    block.cols()
                )));
            }
            if block.modulus() != source.modulus() {
                return Err(Error::Validation(format!(
                    "block {k} uses modulus {}, module uses {}",
                    block.modulus(),
                    source.modulus()
                )));
            }
        }
        Ok(ModuleMap {
            source,
            target,
            shift,
            cells,
            blocks,
        })
    }

    /// The all-zero map between two modules, on the minimal cell grid.
    pub fn zero(source: TameModule, target: TameModule, shift: Rational) -> Result<Self> {
        let cells = standard_cells(&source, &target, &shift);
        let blocks = cells
            .iter()
            .map(|c| {
                Ok(Matrix::zero(
                    target.eval(&(c + &shift))?,
                    source.eval(c)?,
                    source.modulus(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        ModuleMap::new(source, target, shift, cells, blocks)
    }

    pub fn source(&self) -> &TameModule {
        &self.source
    }

    pub fn target(&self) -> &TameModule {
        &self.target
    }

    pub fn shift(&self) -> &Rational {
        &self.shift
    }

    pub fn cells(&self) -> &[Rational] {
        &self.cells
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    /// The same map with replaced blocks, revalidated; used to build
    /// corrupted certificates in tests.
    pub fn with_blocks(&self, blocks: Vec<Matrix>) -> Result<Self> {
        ModuleMap::new(
            self.source.clone(),
            self.target.clone(),
            self.shift.clone(),
            self.cells.clone(),
            blocks,
        )
    }

    /// The component at `x`: the block of the cell containing `x`, or the
    /// unique map out of the zero space below the first cell.
    pub fn map_at(&self, x: &Rational) -> Matrix {
        match self.cells.partition_point(|c| c <= x).checked_sub(1) {
            Some(k) => self.blocks[k].clone(),
            None => {
                let rows = self
                    .target
                    .eval(&(x + &self.shift))
                    .expect("cells validated against module kinds");
                Matrix::zero(rows, 0, self.source.modulus())
            }
        }
    }

    /// Checks every consecutive-cell naturality square by exact matrix
    /// equality; sufficient for all x ≤ y by piecewise constancy.
    pub fn check_natural(&self) -> Result<Verdict> {
        for k in 0..self.cells.len() - 1 {
            let (a, b) = (&self.cells[k], &self.cells[k + 1]);
            let target_step = self
                .target
                .structure_map(&(a + &self.shift), &(b + &self.shift))?;
            let source_step = self.source.structure_map(a, b)?;
            let lhs = target_step.try_mul(&self.blocks[k])?;
            let rhs = self.blocks[k + 1].try_mul(&source_step)?;
            if lhs != rhs {
                return Ok(Verdict::rejected(Witness {
                    check: CheckKind::Naturality,
                    point: a.clone(),
                    left: lhs,
                    right: rhs,
                }));
            }
        }
        Ok(Verdict::Accepted)
    }
}

/// Minimal legal cell grid for a map `source → T_shift target`.
pub(crate) fn standard_cells(
    source: &TameModule,
    target: &TameModule,
    shift: &Rational,
) -> Vec<Rational> {
    let mut cells: Vec<Rational> = source.grid().to_vec();
    cells.extend(target.grid().iter().map(|t| t - shift));
    cells.sort();
    cells.dedup();
    let below = match cells.first() {
        Some(first) => first - &Rational::one(),
        None => Rational::zero(),
    };
    cells.insert(0, below);
    cells
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CertificateKind {
    Strong,
    /// Weak with the given basepoint x₀.
    Weak(Rational),
}

/// A pair of ε-shifted maps in opposite directions, claimed to interleave.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InterleavingCertificate {
    f: ModuleMap,
    g: ModuleMap,
    kind: CertificateKind,
}

impl InterleavingCertificate {
    pub fn new(f: ModuleMap, g: ModuleMap, kind: CertificateKind) -> Result<Self> {
        if f.shift != g.shift {
            return Err(Error::Validation(format!(
                "certificate maps disagree on the shift: {} vs {}",
                f.shift, g.shift
            )));
        }
        if f.source != g.target || f.target != g.source {
            return Err(Error::Validation(
                "certificate maps do not connect the same module pair in opposite directions"
                    .into(),
            ));
        }
        if let CertificateKind::Weak(x0) = &kind {
            if f.source.kind() == IndexKind::Nat && !x0.is_integer() {
                return Err(Error::Validation(format!(
                    "weak basepoint for natural modules must be an integer, got {x0}"
                )));
            }
        }
        Ok(InterleavingCertificate { f, g, kind })
    }

    pub fn f(&self) -> &ModuleMap {
        &self.f
    }

    pub fn g(&self) -> &ModuleMap {
        &self.g
    }

    pub fn kind(&self) -> &CertificateKind {
        &self.kind
    }

    pub fn shift(&self) -> &Rational {
        &self.f.shift
    }

    /// Source of `f` (the first module of the pair).
    pub fn left_module(&self) -> &TameModule {
        &self.f.source
    }

    /// Target of `f` (the second module of the pair).
    pub fn right_module(&self) -> &TameModule {
        &self.f.target
    }

    /// The same maps reinterpreted as a weak certificate at `x0`.
    pub fn as_weak(&self, x0: Rational) -> Result<InterleavingCertificate> {
        InterleavingCertificate::new(self.f.clone(), self.g.clone(), CertificateKind::Weak(x0))
    }

    /// The same maps reinterpreted as a strong certificate.
    pub fn as_strong(&self) -> InterleavingCertificate {
        InterleavingCertificate {
            f: self.f.clone(),
            g: self.g.clone(),
            kind: CertificateKind::Strong,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckKind {
    Naturality,
    /// g∘f against the source module's 2ε structure map.
    CompositeLeft,
    /// f∘g against the target module's 2ε structure map.
    CompositeRight,
}

impl CheckKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckKind::Naturality => "naturality",
            CheckKind::CompositeLeft => "composite-gf",
            CheckKind::CompositeRight => "composite-fg",
        }
    }
}

/// Where and how a certificate failed: the point and the two matrices that
/// should have been equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub check: CheckKind,
    pub point: Rational,
    pub left: Matrix,
    pub right: Matrix,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Accepted,
    Rejected(Box<Witness>),
}

impl Verdict {
    pub fn rejected(witness: Witness) -> Self {
        Verdict::Rejected(Box::new(witness))
    }

    pub fn accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Accepted => None,
            Verdict::Rejected(w) => Some(w),
        }
    }
}

// Both composite conditions at one point.
fn composites_at(cert: &InterleavingCertificate, x: &Rational) -> Result<Verdict> {
    let eps = cert.shift();
    let two_eps = eps + eps;
    let gf = cert.g.map_at(&(x + eps)).try_mul(&cert.f.map_at(x))?;
    let expected = cert.left_module().structure_map(x, &(x + &two_eps))?;
    if gf != expected {
        return Ok(Verdict::rejected(Witness {
            check: CheckKind::CompositeLeft,
            point: x.clone(),
            left: gf,
            right: expected,
        }));
    }
    let fg = cert.f.map_at(&(x + eps)).try_mul(&cert.g.map_at(x))?;
    let expected = cert.right_module().structure_map(x, &(x + &two_eps))?;
    if fg != expected {
        return Ok(Verdict::rejected(Witness {
            check: CheckKind::CompositeRight,
            point: x.clone(),
            left: fg,
            right: expected,
        }));
    }
    Ok(Verdict::Accepted)
}

fn naturality_both(cert: &InterleavingCertificate) -> Result<Verdict> {
    let f = cert.f.check_natural()?;
    if !f.accepted() {
        return Ok(f);
    }
    cert.g.check_natural()
}

/// Accepts iff both maps are natural and, at the left endpoint of every
/// cell of the joint refined grid (both cell grids and their ±ε, ±2ε
/// shifts), `g_{x+ε}·f_x` equals the source's 2ε structure map and
/// `f_{x+ε}·g_x` the target's. Exact equality throughout.
pub fn verify_strong(cert: &InterleavingCertificate) -> Result<Verdict> {
    if cert.kind != CertificateKind::Strong {
        return Err(Error::Usage(
            "verify_strong takes a strong certificate".into(),
        ));
    }
    let natural = naturality_both(cert)?;
    if !natural.accepted() {
        return Ok(natural);
    }
    let eps = cert.shift();
    let two_eps = eps + eps;
    let mut joint: Vec<Rational> = Vec::new();
    for base in cert.f.cells.iter().chain(&cert.g.cells) {
        for delta in [
            -&two_eps,
            -eps,
            Rational::zero(),
            eps.clone(),
            two_eps.clone(),
        ] {
            joint.push(base + &delta);
        }
    }
    joint.sort();
    joint.dedup();
    if let Some(first) = joint.first() {
        joint.insert(0, first - &Rational::one());
    }
    for x in &joint {
        let verdict = composites_at(cert, x)?;
        if !verdict.accepted() {
            return Ok(verdict);
        }
    }
    Ok(Verdict::Accepted)
}

/// Accepts iff both maps are natural everywhere and the composite
/// conditions hold at the lattice points `x0 + kε`, `k ∈ ℕ`, up to the
/// stabilization bound beyond which every structure map involved is
/// constant.
pub fn verify_weak(cert: &InterleavingCertificate) -> Result<Verdict> {
    let CertificateKind::Weak(x0) = &cert.kind else {
        return Err(Error::Usage("verify_weak takes a weak certificate".into()));
    };
    let natural = naturality_both(cert)?;
    if !natural.accepted() {
        return Ok(natural);
    }
    let eps = cert.shift();
    if eps.is_zero() {
        // Degenerate lattice: every x0 + kε is x0 itself.
        return composites_at(cert, x0);
    }
    let max_crit = cert
        .left_module()
        .grid()
        .iter()
        .chain(cert.right_module().grid())
        .max()
        .cloned()
        .unwrap_or_else(|| x0.clone());
    let two_eps = eps + eps;
    let horizon = (&(&max_crit + &two_eps) - x0).ceil_div(eps)? + BigInt::from(1);
    let top = horizon.max(BigInt::from(0));
    let points = lattice_range(x0, eps, &BigInt::from(0), &top)?;
    for x in &points {
        let verdict = composites_at(cert, x)?;
        if !verdict.accepted() {
            return Ok(verdict);
        }
    }
    Ok(Verdict::Accepted)
}


#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;

    #[test]
    fn map_at_identity_certificate() {
        let m = interval(IndexKind::Real, "0", "10");
        let cert = identity_certificate(&m);
        for x in ["-5", "0", "1/2", "9", "10", "11"] {
            let block = cert.f().map_at(&r(x));
            assert!(block.is_identity(), "identity at {x}");
            assert_eq!(block.rows(), m.eval(&r(x)).unwrap());
        }
        // Below all grids the component is the unique map out of zero.
        let low = cert.f().map_at(&r("-100"));
        assert_eq!((low.rows(), low.cols()), (0, 0));
    }

    #[test]
    fn identity_certificate_is_a_strong_zero_interleaving() {
        let m = interval(IndexKind::Real, "0", "10");
        let cert = identity_certificate(&m);
        assert!(verify_strong(&cert).unwrap().accepted());
    }

    #[test]
    fn zero_map_is_natural() {
        let m = interval(IndexKind::Real, "0", "2");
        let n = interval(IndexKind::Real, "1", "3");
        let f = ModuleMap::zero(m, n, r("1")).unwrap();
        assert!(f.check_natural().unwrap().accepted());
    }

    #[test]
    fn corrupted_block_is_rejected_with_witness() {
        let m = interval(IndexKind::Real, "0", "10");
        let n = interval(IndexKind::Real, "1", "11");
        // f_x: M(x) → N(x+1) is the identity wherever both are alive; the
        // bars are translates so this is natural. The live region is split
        // across two cells (extra cell point 5) so one block can be
        // corrupted independently of the other.
        let cells = vec![r("-1"), r("0"), r("5"), r("10")];
        let blocks: Vec<Matrix> = cells
            .iter()
            .map(|c| {
                let rows = n.eval(&(c + &r("1"))).unwrap();
                let cols = m.eval(c).unwrap();
                if rows == 1 && cols == 1 {
                    Matrix::identity(1, 2)
                } else {
                    Matrix::zero(rows, cols, 2)
                }
            })
            .collect();
        let f =
            ModuleMap::new(m.clone(), n.clone(), r("1"), cells.clone(), blocks.clone()).unwrap();
        assert!(f.check_natural().unwrap().accepted());

        // Corrupt the block on [5, 10): the square across x = 5 breaks.
        let mut corrupted = blocks;
        corrupted[2] = Matrix::zero(1, 1, 2);
        let bad = f.with_blocks(corrupted).unwrap();
        let verdict = bad.check_natural().unwrap();
        let witness = verdict.witness().expect("rejection carries a witness");
        assert_eq!(witness.check, CheckKind::Naturality);
        assert_eq!(witness.point, r("0"));
        assert_ne!(witness.left, witness.right);
    }

    // The bar [1/4, 11/4) is longer than 2ε = 2, but M(x ≤ x+2) is nonzero
    // only for x in [1/4, 3/4), which misses every integer. The zero pair
    // is therefore a genuine weak 1-interleaving at basepoint 0 while the
    // pointwise strong conditions fail, and shifting the basepoint onto the
    // live window makes the weak verifier fail too.
    #[test]
    fn weak_holds_where_strong_fails_and_depends_on_the_basepoint() {
        let m = interval(IndexKind::Real, "1/4", "11/4");
        let f = ModuleMap::zero(m.clone(), m.clone(), r("1")).unwrap();
        let g = f.clone();
        let weak_at_zero =
            InterleavingCertificate::new(f, g, CertificateKind::Weak(r("0"))).unwrap();
        assert!(verify_weak(&weak_at_zero).unwrap().accepted());

        let strong = weak_at_zero.as_strong();
        let verdict = verify_strong(&strong).unwrap();
        let witness = verdict.witness().expect("strong conditions fail");
        assert_eq!(witness.point, r("1/4"));

        let weak_on_the_window = weak_at_zero.as_weak(r("1/4")).unwrap();
        let verdict = verify_weak(&weak_on_the_window).unwrap();
        let witness = verdict.witness().expect("basepoint 1/4 hits the window");
        assert_eq!(witness.point, r("1/4"));
        assert_eq!(witness.check, CheckKind::CompositeLeft);
    }

    #[test]
    fn odd_characteristic_certificates_verify() {
        use crate::generate::random_raw_module;
        for seed in 0..10u64 {
            let m = random_raw_module(seed, 5, 3, IndexKind::Real, 1009).unwrap();
            let cert = super::canonical_shift_interleaving(&m, &r("1/2")).unwrap();
            assert!(verify_strong(&cert).unwrap().accepted(), "seed {seed}");
        }
    }

    #[test]
    fn strong_verifier_zero_module_examples() {
        let m = interval(IndexKind::Real, "0", "10");
        let zero = TameModule::zero(IndexKind::Real, 2);

        // 2ε = 10 equals the bar length: gf must equal M(x ≤ x+10) = 0.
        let f = ModuleMap::zero(m.clone(), zero.clone(), r("5")).unwrap();
        let g = ModuleMap::zero(zero.clone(), m.clone(), r("5")).unwrap();
        let cert = InterleavingCertificate::new(f, g, CertificateKind::Strong).unwrap();
        assert!(verify_strong(&cert).unwrap().accepted());

        // ε = 1: M(0 ≤ 2) has rank 1 ≠ 0, witnessed at x = 0.
        let f = ModuleMap::zero(m.clone(), zero.clone(), r("1")).unwrap();
        let g = ModuleMap::zero(zero, m, r("1")).unwrap();
        let cert = InterleavingCertificate::new(f, g, CertificateKind::Strong).unwrap();
        let verdict = verify_strong(&cert).unwrap();
        let witness = verdict.witness().expect("must reject");
        assert_eq!(witness.point, r("0"));
        assert_eq!(witness.check, CheckKind::CompositeLeft);
    }

    #[test]
    fn strong_verifier_is_symmetric_under_swapping_sides() {
        let m = interval(IndexKind::Real, "0", "10");
        let zero = TameModule::zero(IndexKind::Real, 2);
        let f = ModuleMap::zero(m.clone(), zero.clone(), r("5")).unwrap();
        let g = ModuleMap::zero(zero, m, r("5")).unwrap();
        let fwd =
            InterleavingCertificate::new(f.clone(), g.clone(), CertificateKind::Strong).unwrap();
        let swapped = InterleavingCertificate::new(g, f, CertificateKind::Strong).unwrap();
        assert_eq!(
            verify_strong(&fwd).unwrap().accepted(),
            verify_strong(&swapped).unwrap().accepted()
        );
    }

    #[test]
    fn verifier_kind_mismatch_is_a_usage_error() {
        let m = interval(IndexKind::Real, "0", "2");
        let cert = identity_certificate(&m);
        assert!(matches!(verify_weak(&cert), Err(Error::Usage(_))));
        let weak = cert.as_weak(r("0")).unwrap();
        assert!(matches!(verify_strong(&weak), Err(Error::Usage(_))));
    }

    #[test]
    fn strong_accepted_reinterprets_as_weak_anywhere() {
        let m = interval(IndexKind::Real, "0", "10");
        let zero = TameModule::zero(IndexKind::Real, 2);
        let f = ModuleMap::zero(m.clone(), zero.clone(), r("5")).unwrap();
        let g = ModuleMap::zero(zero, m, r("5")).unwrap();
        let cert = InterleavingCertificate::new(f, g, CertificateKind::Strong).unwrap();
        assert!(verify_strong(&cert).unwrap().accepted());
        for x0 in ["0", "-1", "1/2", "7"] {
            let weak = cert.as_weak(r(x0)).unwrap();
            assert!(
                verify_weak(&weak).unwrap().accepted(),
                "weak at basepoint {x0}"
            );
        }
    }

    #[test]
    fn module_map_validation_rejects_bad_cell_grids() {
        let m = interval(IndexKind::Real, "0", "2");
        let n = interval(IndexKind::Real, "1", "3");
        // Missing the target critical value 3 − 1 = 2.
        let err = ModuleMap::new(
            m.clone(),
            n.clone(),
            r("1"),
            vec![r("-1"), r("0")],
            vec![Matrix::zero(0, 0, 2), Matrix::zero(1, 1, 2)],
        );
        assert!(matches!(err, Err(Error::Validation(_))));
        // No point below the first critical value.
        let err = ModuleMap::new(
            m,
            n,
            r("1"),
            vec![r("0"), r("2")],
            vec![Matrix::zero(1, 1, 2), Matrix::zero(0, 0, 2)],
        );
        assert!(matches!(err, Err(Error::Validation(_))));
    }
}
