//! End-to-end equivalence report for one module at one scale.
//!
//! Runs the canonical certificate pipeline for the module's side of the
//! equivalence — weak at 2ε with basepoint 0 for real modules, strong at
//! shift 2 for natural ones — then promotes to a strong certificate at the
//! doubled shift, and cross-checks the barcodes with the bottleneck oracle.

use crate::barcode::decompose;
use crate::bridge::{compose_fg, compose_gf};
use crate::error::Result;
use crate::module::{IndexKind, TameModule};
use crate::rational::{Extended, Rational};

use super::{
    bottleneck_distance, canonical_fg_interleaving, canonical_gf_interleaving,
    promote_weak_to_strong, verify_strong, verify_weak, Verdict,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReportSide {
    Real,
    Nat,
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub side: ReportSide,
    pub epsilon: Rational,
    /// Weak verdict at 2ε, basepoint 0 (real) / strong verdict at shift 2 (nat).
    pub primary: Verdict,
    /// The same canonical maps checked against the pointwise strong
    /// conditions; informational on the real side, where only the weak
    /// claim is part of the contract.
    pub strong_informational: Verdict,
    /// Strong verdict after promotion: shift 4ε (real) / 4 (nat).
    pub promoted: Verdict,
    /// Natural side only: the composite functor equals the 2-shift.
    pub shift_equality: Option<bool>,
    pub bottleneck: Extended,
    pub bottleneck_bound: Rational,
}

impl EquivalenceReport {
    pub fn all_accepted(&self) -> bool {
        self.primary.accepted()
            && self.promoted.accepted()
            && self.shift_equality.unwrap_or(true)
            && self.bottleneck_within_bound()
    }

    pub fn bottleneck_within_bound(&self) -> bool {
        match &self.bottleneck {
            Extended::Finite(d) => d <= &self.bottleneck_bound,
            Extended::Infinity => false,
        }
    }
}

pub fn equivalence_report(module: &TameModule, eps: &Rational) -> Result<EquivalenceReport> {
    match module.kind() {
        IndexKind::Real => real_side(module, eps),
        IndexKind::Nat => nat_side(module, eps),
    }
}

fn real_side(module: &TameModule, eps: &Rational) -> Result<EquivalenceReport> {
    let cert = canonical_gf_interleaving(module, eps)?;
    let primary = verify_weak(&cert)?;
    let strong_informational = verify_strong(&cert.as_strong())?;
    let promoted = if primary.accepted() {
        verify_strong(&promote_weak_to_strong(&cert)?)?
    } else {
        primary.clone()
    };
    let composite = compose_gf(module, eps)?;
    let bottleneck = bottleneck_distance(&decompose(module)?, &decompose(&composite)?)?;
    Ok(EquivalenceReport {
        side: ReportSide::Real,
        epsilon: eps.clone(),
        primary,
        strong_informational,
        promoted,
        shift_equality: None,
        bottleneck,
        bottleneck_bound: eps + eps,
    })
}

fn nat_side(module: &TameModule, eps: &Rational) -> Result<EquivalenceReport> {
    let cert = canonical_fg_interleaving(module, eps)?;
    let primary = verify_strong(&cert)?;
    let strong_informational = primary.clone();
    let promoted = if primary.accepted() {
        let weak = cert.as_weak(Rational::zero())?;
        verify_strong(&promote_weak_to_strong(&weak)?)?
    } else {
        primary.clone()
    };
    let composite = compose_fg(module, eps)?;
    let two = Rational::from_int(2);
    let shift_equality = composite.canonical_eq(&module.translate(&two)?);
    let bottleneck = bottleneck_distance(&decompose(module)?, &decompose(&composite)?)?;
    Ok(EquivalenceReport {
        side: ReportSide::Nat,
        epsilon: eps.clone(),
        primary,
        strong_informational,
        promoted,
        shift_equality: Some(shift_equality),
        bottleneck,
        bottleneck_bound: two,
    })
}
