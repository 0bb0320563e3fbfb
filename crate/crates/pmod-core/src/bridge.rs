//! Functors between real and natural persistence modules.
//!
//! Fixing a scale ε > 0: `discretize` samples a real module at the points
//! `(n+1)·ε`, `realify` spreads a natural module back out as the piecewise
//! constant module `x ↦ N(⌊x/ε⌋ + 1)` (zero at negative arguments). Their
//! composites shift by two sample steps, which is what the interleaving
//! certificates in [`crate::interleave`] witness.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::module::{lattice_range, IndexKind, TameModule};
use crate::rational::Rational;

fn require_positive(eps: &Rational) -> Result<()> {
    if !eps.is_positive() {
        return Err(Error::Param(format!("scale must be positive, got {eps}")));
    }
    Ok(())
}

/// Natural module with `(ℱM)(n) = M((n+1)·ε)`. Requires `M` lower stable
/// at 0; the grid is truncated at the stabilization index `⌈t_max/ε⌉`.
pub fn discretize(module: &TameModule, eps: &Rational) -> Result<TameModule> {
    require_positive(eps)?;
    if !module.is_lower_stable(&Rational::zero())? {
        return Err(Error::Stability(
            "discretize needs a module lower stable at 0".into(),
        ));
    }
    discretize_unchecked(module, eps)
}

// The sampling functor itself; `compose_fg` also routes through here on
// inputs that are only lower stable at −ε, where the samples `(n+1)·ε > 0`
// never look below zero.
fn discretize_unchecked(module: &TameModule, eps: &Rational) -> Result<TameModule> {
    if module.kind() != IndexKind::Real {
        return Err(Error::Param("discretize takes a real module".into()));
    }
    let Some(t_max) = module.grid().last() else {
        return Ok(TameModule::zero(IndexKind::Nat, module.modulus()));
    };
    let mut top = t_max.ceil_div(eps)?;
    if top.is_negative() {
        top = BigInt::from(0);
    }
    let steps = lattice_range(&Rational::zero(), &Rational::one(), &BigInt::from(0), &top)?;
    let mut dims = Vec::with_capacity(steps.len());
    let mut sample_points = Vec::with_capacity(steps.len());
    for n in &steps {
        let at = (n + &Rational::one()) * eps.clone();
        dims.push(module.eval(&at)?);
        sample_points.push(at);
    }
    let mut maps = Vec::with_capacity(steps.len().saturating_sub(1));
    for w in sample_points.windows(2) {
        maps.push(module.structure_map(&w[0], &w[1])?);
    }
    Ok(TameModule::new(IndexKind::Nat, module.modulus(), steps, dims, maps)?.canonicalize())
}

/// Real module with `(𝒢N)(x) = N(⌊x/ε⌋ + 1)`, extending `N` by zero at
/// negative arguments. The output grid lies in ℤ·ε and the module is lower
/// stable at −ε.
pub fn realify(module: &TameModule, eps: &Rational) -> Result<TameModule> {
    require_positive(eps)?;
    if module.kind() != IndexKind::Nat {
        return Err(Error::Param("realify takes a natural module".into()));
    }
    let Some(n_last) = module.grid().last() else {
        return Ok(TameModule::zero(IndexKind::Real, module.modulus()));
    };
    let k_min = BigInt::from(-1);
    let k_max = n_last.to_integer().expect("natural grid is integral") - 1;
    let lattice = lattice_range(&Rational::zero(), eps, &k_min, &k_max)?;
    let mut dims = Vec::with_capacity(lattice.len());
    let mut samples = Vec::with_capacity(lattice.len());
    for k in &lattice {
        let at = &(k / eps) + &Rational::one();
        dims.push(module.eval(&at)?);
        samples.push(at);
    }
    let mut maps = Vec::with_capacity(lattice.len().saturating_sub(1));
    for w in samples.windows(2) {
        maps.push(module.structure_map(&w[0], &w[1])?);
    }
    Ok(TameModule::new(IndexKind::Real, module.modulus(), lattice, dims, maps)?.canonicalize())
}

/// `realify(discretize(M, ε), ε)`: pointwise `x ↦ M((⌊x/ε⌋ + 2)·ε)` away
/// from the zero-extension region.
pub fn compose_gf(module: &TameModule, eps: &Rational) -> Result<TameModule> {
    require_positive(eps)?;
    if !module.is_lower_stable(&Rational::zero())? {
        return Err(Error::Stability(
            "the composite functor needs a module lower stable at 0".into(),
        ));
    }
    realify(&discretize_unchecked(module, eps)?, eps)
}

/// `discretize(realify(N, ε), ε)`: pointwise the two-step shift `N(n + 2)`,
/// independent of ε. Negative shifted indices clamp to empty support, so the
/// stability gate of `discretize` is not applied here.
pub fn compose_fg(module: &TameModule, eps: &Rational) -> Result<TameModule> {
    require_positive(eps)?;
    discretize_unchecked(&realify(module, eps)?, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcode::{from_barcode, Barcode};
    use crate::rational::Extended;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn interval(kind: IndexKind, b: &str, d: &str) -> TameModule {
        let bc = Barcode::new(kind, vec![(r(b), Extended::Finite(r(d)), 1)]).unwrap();
        from_barcode(&bc, 2).unwrap()
    }

    #[test]
    fn discretize_examples() {
        // M(n+1) ≠ 0 iff n+1 ∈ {1, 2}.
        let m = interval(IndexKind::Real, "1/2", "5/2");
        let d = discretize(&m, &r("1")).unwrap();
        assert_eq!(d, interval(IndexKind::Nat, "0", "2"));
        // (n+1)/2 ∈ [1/2, 5/2) iff n ∈ {0,1,2,3}.
        let d = discretize(&m, &r("1/2")).unwrap();
        assert_eq!(d, interval(IndexKind::Nat, "0", "4"));

        let zero = TameModule::zero(IndexKind::Real, 2);
        assert!(discretize(&zero, &r("1")).unwrap().is_zero_module());
    }

    #[test]
    fn discretize_rejects_unstable_or_bad_scale() {
        let m = interval(IndexKind::Real, "-1", "5");
        assert!(matches!(discretize(&m, &r("1")), Err(Error::Stability(_))));
        let ok = interval(IndexKind::Real, "0", "5");
        assert!(matches!(discretize(&ok, &r("0")), Err(Error::Param(_))));
    }

    #[test]
    fn realify_examples() {
        // ⌊x⌋+1 ∈ {0, 1} iff x ∈ [−1, 1).
        let n = interval(IndexKind::Nat, "0", "2");
        assert_eq!(
            realify(&n, &r("1")).unwrap(),
            interval(IndexKind::Real, "-1", "1")
        );
        // ⌊2x⌋+1 ∈ {0, 1} iff x ∈ [−1/2, 1/2).
        assert_eq!(
            realify(&n, &r("1/2")).unwrap(),
            interval(IndexKind::Real, "-1/2", "1/2")
        );
        let zero = TameModule::zero(IndexKind::Nat, 2);
        assert!(realify(&zero, &r("1")).unwrap().is_zero_module());
    }

    #[test]
    fn realify_output_is_lower_stable_at_minus_eps() {
        let n = interval(IndexKind::Nat, "0", "7");
        let real = realify(&n, &r("1/3")).unwrap();
        assert!(real.is_lower_stable(&r("-1/3")).unwrap());
        assert!(!real.is_lower_stable(&r("0")).unwrap());
    }

    #[test]
    fn compose_gf_example() {
        // (⌊x⌋+2) ∈ {1, 2} iff ⌊x⌋ ∈ {−1, 0}.
        let m = interval(IndexKind::Real, "1/2", "5/2");
        let gf = compose_gf(&m, &r("1")).unwrap();
        assert_eq!(gf, interval(IndexKind::Real, "-1", "1"));

        let zero = TameModule::zero(IndexKind::Real, 2);
        assert!(compose_gf(&zero, &r("1")).unwrap().is_zero_module());
    }

    #[test]
    fn compose_gf_matches_the_pointwise_formula() {
        let m = interval(IndexKind::Real, "1/2", "5/2");
        for eps in ["1", "1/2", "1/3"] {
            let eps = r(eps);
            let gf = compose_gf(&m, &eps).unwrap();
            // at lattice points n·ε with n ≥ −1 the sample formula applies
            for n in -1i64..8 {
                let x = Rational::from_int(n) * eps.clone();
                let shifted = Rational::from_int(n + 2) * eps.clone();
                assert_eq!(
                    gf.eval(&x).unwrap(),
                    m.eval(&shifted).unwrap(),
                    "n = {n}, eps = {eps}"
                );
            }
        }
    }

    #[test]
    fn compose_fg_examples() {
        // ℱ𝒢N(n) = N(n+2): births and deaths drop by 2, clamped at 0.
        let n = interval(IndexKind::Nat, "3", "6");
        assert_eq!(
            compose_fg(&n, &r("1")).unwrap(),
            interval(IndexKind::Nat, "1", "4")
        );
        // N(n+2) = 0 for all n ≥ 0 when the bar is [0, 2).
        let early = interval(IndexKind::Nat, "0", "2");
        assert!(compose_fg(&early, &r("1")).unwrap().is_zero_module());
    }

    #[test]
    fn compose_fg_is_independent_of_eps_and_equals_the_shift() {
        let n = interval(IndexKind::Nat, "3", "6");
        let reference = compose_fg(&n, &r("1")).unwrap();
        for eps in ["1/3", "1/2", "2", "7/5"] {
            assert_eq!(compose_fg(&n, &r(eps)).unwrap(), reference);
        }
        assert!(reference.canonical_eq(&n.translate(&r("2")).unwrap()));
    }
}
