//! Canonical interleaving certificates.
//!
//! Each construction here packages a family of structure maps as an explicit
//! [`ModuleMap`] pair: a module against its own shift (strong), against its
//! pixelization (weak), against the discretize-then-realify composite (weak),
//! and the natural-module counterpart (strong, shift 2). `promote_weak_to_strong`
//! turns any verified weak certificate into a strong one at twice the shift
//! by routing through the nearest lattice point above each index.

use num_bigint::BigInt;

use crate::bridge::{compose_fg, compose_gf};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{lattice_range, IndexKind, TameModule};
use crate::rational::Rational;

use super::{standard_cells, verify_weak, CertificateKind, InterleavingCertificate, ModuleMap};

// f: S → T_w T with f_s = S(s ≤ s+2w), g: T → T_w S with g_s = 1 on
// S(s+w), valid whenever T(x) = S(x+w) wherever T is nonzero (exact
// translates, and clamped natural translates).
fn shift_certificate(
    source: &TameModule,
    target: &TameModule,
    w: &Rational,
) -> Result<InterleavingCertificate> {
    let p = source.modulus();
    let two_w = w + w;

    let f_cells = standard_cells(source, target, w);
    let mut f_blocks = Vec::with_capacity(f_cells.len());
    for s in &f_cells {
        let block = if source.eval(s)? == 0 {
            Matrix::zero(target.eval(&(s + w))?, 0, p)
        } else {
            source.structure_map(s, &(s + &two_w))?
        };
        f_blocks.push(block);
    }
    let f = ModuleMap::new(source.clone(), target.clone(), w.clone(), f_cells, f_blocks)?;

    let g_cells = standard_cells(target, source, w);
    let mut g_blocks = Vec::with_capacity(g_cells.len());
    for s in &g_cells {
        let block = if target.eval(s)? == 0 {
            Matrix::zero(source.eval(&(s + w))?, 0, p)
        } else {
            Matrix::identity(source.eval(&(s + w))?, p)
        };
        g_blocks.push(block);
    }
    let g = ModuleMap::new(target.clone(), source.clone(), w.clone(), g_cells, g_blocks)?;

    InterleavingCertificate::new(f, g, CertificateKind::Strong)
}

/// Strong ε-certificate between a real module and its ε-shift: one
/// direction is the 2ε structure map, the other the identity.
pub fn canonical_shift_interleaving(
    module: &TameModule,
    eps: &Rational,
) -> Result<InterleavingCertificate> {
    if eps.is_negative() {
        return Err(Error::Param(format!(
            "shift interleaving needs ε ≥ 0, got {eps}"
        )));
    }
    let shifted = module.translate(eps)?;
    shift_certificate(module, &shifted, eps)
}

/// Strong certificate at shift 2 between a natural module and its
/// realify-then-discretize composite, which is its 2-shift.
pub fn canonical_fg_interleaving(
    module: &TameModule,
    eps: &Rational,
) -> Result<InterleavingCertificate> {
    if module.kind() != IndexKind::Nat {
        return Err(Error::Param(
            "the natural-side certificate takes a natural module".into(),
        ));
    }
    let composite = compose_fg(module, eps)?;
    shift_certificate(module, &composite, &Rational::from_int(2))
}

// Lattice point at or below y.
fn lattice_below(y: &Rational, x0: &Rational, eps: &Rational) -> Result<Rational> {
    let k = (y - x0).floor_div(eps)?;
    Ok(x0 + &(Rational::from_bigint(k) * eps.clone()))
}

// Lattice point at or above y.
fn lattice_above(y: &Rational, x0: &Rational, eps: &Rational) -> Result<Rational> {
    let k = (y - x0).ceil_div(eps)?;
    Ok(x0 + &(Rational::from_bigint(k) * eps.clone()))
}

/// Weak ε-certificate with basepoint x₀ between a module (lower stable at
/// x₀) and its pixelization: both directions are structure maps of the
/// module routed through the lattice point below the relevant index.
pub fn canonical_pixel_interleaving(
    module: &TameModule,
    x0: &Rational,
    eps: &Rational,
) -> Result<InterleavingCertificate> {
    if !eps.is_positive() {
        return Err(Error::Param(format!(
            "pixel interleaving needs ε > 0, got {eps}"
        )));
    }
    if !module.is_lower_stable(x0)? {
        return Err(Error::Stability(format!(
            "module is not lower stable at the basepoint {x0}"
        )));
    }
    let pixel = module.pixelize(x0, eps)?;

    let f_cells = standard_cells(module, &pixel, eps);
    let mut f_blocks = Vec::with_capacity(f_cells.len());
    for s in &f_cells {
        f_blocks.push(module.structure_map(s, &lattice_below(&(s + eps), x0, eps)?)?);
    }
    let f = ModuleMap::new(
        module.clone(),
        pixel.clone(),
        eps.clone(),
        f_cells,
        f_blocks,
    )?;

    let g_cells = standard_cells(&pixel, module, eps);
    let mut g_blocks = Vec::with_capacity(g_cells.len());
    for s in &g_cells {
        g_blocks.push(module.structure_map(&lattice_below(s, x0, eps)?, &(s + eps))?);
    }
    let g = ModuleMap::new(
        pixel.clone(),
        module.clone(),
        eps.clone(),
        g_cells,
        g_blocks,
    )?;

    InterleavingCertificate::new(f, g, CertificateKind::Weak(x0.clone()))
}

/// Weak certificate at shift 2ε with basepoint 0 between a 0-lower-stable
/// real module and its discretize-then-realify composite.
pub fn canonical_gf_interleaving(
    module: &TameModule,
    eps: &Rational,
) -> Result<InterleavingCertificate> {
    if !eps.is_positive() {
        return Err(Error::Param(format!(
            "the composite certificate needs ε > 0, got {eps}"
        )));
    }
    if !module.is_lower_stable(&Rational::zero())? {
        return Err(Error::Stability("module is not lower stable at 0".into()));
    }
    let composite = compose_gf(module, eps)?;
    let zero = Rational::zero();
    let two_eps = eps + eps;
    let p = module.modulus();

    // f_s: M(s) → GF(s+2ε) = M(lat(s) + 4ε); zero columns below the support.
    let f_cells = standard_cells(module, &composite, &two_eps);
    let mut f_blocks = Vec::with_capacity(f_cells.len());
    for s in &f_cells {
        let block = if module.eval(s)? == 0 {
            Matrix::zero(composite.eval(&(s + &two_eps))?, 0, p)
        } else {
            let lat = lattice_below(s, &zero, eps)?;
            module.structure_map(s, &(&lat + &(&two_eps + &two_eps)))?
        };
        f_blocks.push(block);
    }
    let f = ModuleMap::new(
        module.clone(),
        composite.clone(),
        two_eps.clone(),
        f_cells,
        f_blocks,
    )?;

    // g_s: GF(s) = M(lat(s) + 2ε) → M(s+2ε).
    let g_cells = standard_cells(&composite, module, &two_eps);
    let mut g_blocks = Vec::with_capacity(g_cells.len());
    for s in &g_cells {
        let block = if composite.eval(s)? == 0 {
            Matrix::zero(module.eval(&(s + &two_eps))?, 0, p)
        } else {
            let lat = lattice_below(s, &zero, eps)?;
            module.structure_map(&(&lat + &two_eps), &(s + &two_eps))?
        };
        g_blocks.push(block);
    }
    let g = ModuleMap::new(
        composite.clone(),
        module.clone(),
        two_eps.clone(),
        g_cells,
        g_blocks,
    )?;

    InterleavingCertificate::new(f, g, CertificateKind::Weak(zero))
}

/// Builds a strong certificate at shift 2ε from a verified weak
/// ε-certificate: each component detours through the lattice point above
/// its index, applies the weak map there, and comes back down by structure
/// maps.
pub fn promote_weak_to_strong(cert: &InterleavingCertificate) -> Result<InterleavingCertificate> {
    let CertificateKind::Weak(x0) = cert.kind() else {
        return Err(Error::Usage("promotion takes a weak certificate".into()));
    };
    let w = cert.shift().clone();
    if !w.is_positive() {
        return Err(Error::Param(format!(
            "promotion needs a positive shift, got {w}"
        )));
    }
    if !verify_weak(cert)?.accepted() {
        return Err(Error::Precondition(
            "promotion input fails weak verification".into(),
        ));
    }
    let m = cert.left_module().clone();
    let n = cert.right_module().clone();
    let two_w = &w + &w;

    let f = promoted_map(cert.f(), &m, &n, x0, &w, &two_w)?;
    let g = promoted_map(cert.g(), &n, &m, x0, &w, &two_w)?;
    InterleavingCertificate::new(f, g, CertificateKind::Strong)
}

// source --structure--> source(λ) --weak map--> target(λ+w) --structure--> target(x+2w)
fn promoted_map(
    weak: &ModuleMap,
    source: &TameModule,
    target: &TameModule,
    x0: &Rational,
    w: &Rational,
    two_w: &Rational,
) -> Result<ModuleMap> {
    let cells = promoted_cells(weak, source, target, x0, w, two_w)?;
    let mut blocks = Vec::with_capacity(cells.len());
    for s in &cells {
        let lat = lattice_above(s, x0, w)?;
        let up = source.structure_map(s, &lat)?;
        let across = weak.map_at(&lat);
        let down = target.structure_map(&(&lat + w), &(s + two_w))?;
        blocks.push(down.try_mul(&across.try_mul(&up)?)?);
    }
    ModuleMap::new(source.clone(), target.clone(), two_w.clone(), cells, blocks)
}

fn promoted_cells(
    weak: &ModuleMap,
    source: &TameModule,
    target: &TameModule,
    x0: &Rational,
    w: &Rational,
    two_w: &Rational,
) -> Result<Vec<Rational>> {
    let mut pts: Vec<Rational> = source.grid().to_vec();
    pts.extend(target.grid().iter().map(|t| t - two_w));
    let mut extremes: Vec<Rational> = pts.clone();
    extremes.extend_from_slice(weak.cells());
    extremes.extend(target.grid().iter().cloned());
    if let (Some(lo), Some(hi)) = (
        extremes.iter().min().cloned(),
        extremes.iter().max().cloned(),
    ) {
        let k_lo = (&lo - x0).floor_div(w)? - BigInt::from(1);
        let k_hi = (&hi - x0).ceil_div(w)? + BigInt::from(1);
        pts.extend(lattice_range(x0, w, &k_lo, &k_hi)?);
    }
    pts.sort();
    pts.dedup();
    let below = match pts.first() {
        Some(first) => first - &Rational::one(),
        None => Rational::zero(),
    };
    pts.insert(0, below);
    Ok(pts)
}
