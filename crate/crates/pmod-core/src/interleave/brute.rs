//! Exhaustive search for strong interleavings over 𝔽₂.
//!
//! Enumerates all block assignments for both directions, pruning by
//! naturality square by square, then tests every surviving pair with the
//! strong verifier. Exists to validate the verifiers and the bottleneck
//! oracle at desk scale; the budget rejects anything bigger.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::TameModule;
use crate::rational::Rational;

use super::{standard_cells, verify_strong, CertificateKind, InterleavingCertificate, ModuleMap};

/// Default cap on naturality-filtered candidate pairs (and on enumeration
/// work), 2²⁴.
pub const DEFAULT_BRUTE_BUDGET: u64 = 1 << 24;

/// True iff some pair of natural maps passes the strong verifier at ε.
/// `budget` bounds both the enumeration work and the number of candidate
/// pairs; exceeding it is a resource error, not a verdict.
pub fn brute_force_interleaving_exists(
    m: &TameModule,
    n: &TameModule,
    eps: &Rational,
    budget: u64,
) -> Result<bool> {
    if m.modulus() != 2 || n.modulus() != 2 {
        return Err(Error::Param(
            "the brute-force oracle is restricted to p = 2".into(),
        ));
    }
    if eps.is_negative() {
        return Err(Error::Param(format!("negative shift {eps}")));
    }
    let forward = enumerate_natural_maps(m, n, eps, budget)?;
    let backward = enumerate_natural_maps(n, m, eps, budget)?;
    let pairs = (forward.len() as u64)
        .checked_mul(backward.len() as u64)
        .filter(|&p| p <= budget);
    if pairs.is_none() {
        return Err(Error::Resource(format!(
            "{} x {} candidate pairs exceed the budget {budget}",
            forward.len(),
            backward.len()
        )));
    }
    for f in &forward {
        for g in &backward {
            let cert = InterleavingCertificate::new(f.clone(), g.clone(), CertificateKind::Strong)?;
            if verify_strong(&cert)?.accepted() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

// All natural maps source → T_eps target, found by depth-first assignment
// of blocks over the standard cell grid with per-square pruning.
fn enumerate_natural_maps(
    source: &TameModule,
    target: &TameModule,
    eps: &Rational,
    budget: u64,
) -> Result<Vec<ModuleMap>> {
    let cells = standard_cells(source, target, eps);
    let mut shapes = Vec::with_capacity(cells.len());
    for c in &cells {
        let rows = target.eval(&(c + eps))?;
        let cols = source.eval(c)?;
        if rows * cols > 24 {
            return Err(Error::Resource(format!(
                "block of {rows}x{cols} bits is beyond the brute-force scale"
            )));
        }
        shapes.push((rows, cols));
    }
    let mut source_steps = Vec::with_capacity(cells.len().saturating_sub(1));
    let mut target_steps = Vec::with_capacity(cells.len().saturating_sub(1));
    for w in cells.windows(2) {
        source_steps.push(source.structure_map(&w[0], &w[1])?);
        target_steps.push(target.structure_map(&(&w[0] + eps), &(&w[1] + eps))?);
    }

    let mut work = 0u64;
    let mut found: Vec<Vec<Matrix>> = Vec::new();
    let mut stack: Vec<Matrix> = Vec::new();
    search(
        &shapes,
        &source_steps,
        &target_steps,
        &mut stack,
        &mut found,
        &mut work,
        budget,
    )?;
    found
        .into_iter()
        .map(|blocks| {
            ModuleMap::new(
                source.clone(),
                target.clone(),
                eps.clone(),
                cells.clone(),
                blocks,
            )
        })
        .collect()
}

fn search(
    shapes: &[(usize, usize)],
    source_steps: &[Matrix],
    target_steps: &[Matrix],
    stack: &mut Vec<Matrix>,
    found: &mut Vec<Vec<Matrix>>,
    work: &mut u64,
    budget: u64,
) -> Result<()> {
    let k = stack.len();
    if k == shapes.len() {
        found.push(stack.clone());
        if found.len() as u64 > budget {
            return Err(Error::Resource(format!(
                "more than {budget} natural candidates on one side"
            )));
        }
        return Ok(());
    }
    let (rows, cols) = shapes[k];
    for bits in 0u64..(1 << (rows * cols)) {
        *work += 1;
        if *work > budget {
            return Err(Error::Resource(format!(
                "brute-force enumeration exceeded the budget {budget}"
            )));
        }
        let candidate = matrix_from_bits(rows, cols, bits);
        if k > 0 {
            let lhs = &target_steps[k - 1] * &stack[k - 1];
            let rhs = &candidate * &source_steps[k - 1];
            if lhs != rhs {
                continue;
            }
        }
        stack.push(candidate);
        search(
            shapes,
            source_steps,
            target_steps,
            stack,
            found,
            work,
            budget,
        )?;
        stack.pop();
    }
    Ok(())
}

fn matrix_from_bits(rows: usize, cols: usize, bits: u64) -> Matrix {
    let entries = (0..rows * cols).map(|i| (bits >> i) & 1).collect();
    Matrix::from_entries(rows, cols, 2, entries).expect("bits are reduced mod 2")
}
