//! Graded `𝕜[t]`-modules presented by homogeneous generators and relations.
//!
//! A presentation lists generator degrees `e_i` and relation columns of
//! degree `d_j` with coefficients `c_ij`; the presented module is the
//! cokernel of the relation map between graded free modules. Natural
//! persistence modules and such presentations carry the same data, and the
//! two conversions here realize that equivalence exactly.

use crate::barcode::decompose;
use crate::error::{Error, Result};
use crate::field::{finv, fmul, fsub, validate_modulus};
use crate::matrix::Matrix;
use crate::module::{IndexKind, TameModule};
use crate::rational::{Extended, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    pub degree: usize,
    /// One coefficient per generator, residues in `[0, p)`.
    pub coeffs: Vec<u64>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedPresentation {
    p: u64,
    generator_degrees: Vec<usize>,
    relations: Vec<Relation>,
}

impl GradedPresentation {
    pub fn new(p: u64, generator_degrees: Vec<usize>, relations: Vec<Relation>) -> Result<Self> {
        validate_modulus(p)?;
        for (j, rel) in relations.iter().enumerate() {
            if rel.coeffs.len() != generator_degrees.len() {
                return Err(Error::Validation(format!(
                    "relation {j} has {} coefficients for {} generators",
                    rel.coeffs.len(),
                    generator_degrees.len()
                )));
            }
            for (i, &c) in rel.coeffs.iter().enumerate() {
                if c >= p {
                    return Err(Error::Validation(format!(
                        "relation {j} coefficient {c} outside [0, {p})"
                    )));
                }
                if c != 0 && rel.degree < generator_degrees[i] {
                    return Err(Error::Validation(format!(
                        "relation {j} of degree {} hits generator {i} of higher degree {}",
                        rel.degree, generator_degrees[i]
                    )));
                }
            }
        }
        Ok(GradedPresentation {
            p,
            generator_degrees,
            relations,
        })
    }

    pub fn empty(p: u64) -> Self {
        GradedPresentation {
            p,
            generator_degrees: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn generator_degrees(&self) -> &[usize] {
        &self.generator_degrees
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Largest degree mentioned anywhere; 0 for the empty presentation.
    pub fn max_degree(&self) -> usize {
        let gens = self.generator_degrees.iter().copied().max().unwrap_or(0);
        let rels = self.relations.iter().map(|r| r.degree).max().unwrap_or(0);
        gens.max(rels)
    }

    /// Sorted generators, relations sorted by (degree, coefficients).
    pub fn canonicalize(&self) -> GradedPresentation {
        let mut order: Vec<usize> = (0..self.generator_degrees.len()).collect();
        order.sort_by_key(|&i| self.generator_degrees[i]);
        let generator_degrees: Vec<usize> =
            order.iter().map(|&i| self.generator_degrees[i]).collect();
        let mut relations: Vec<Relation> = self
            .relations
            .iter()
            .map(|rel| Relation {
                degree: rel.degree,
                coeffs: order.iter().map(|&i| rel.coeffs[i]).collect(),
            })
            .collect();
        relations.sort_by(|a, b| (a.degree, &a.coeffs).cmp(&(b.degree, &b.coeffs)));
        GradedPresentation {
            p: self.p,
            generator_degrees,
            relations,
        }
    }

    /// Dimension of the degree-`n` homogeneous component of the presented
    /// module.
    pub fn degree_dimension(&self, n: usize) -> usize {
        let active = self.generator_degrees.iter().filter(|&&e| e <= n).count();
        active - self.relation_matrix_at(n).rank()
    }

    /// Rank of the multiplication-by-t map from degree `n` to degree `n+1`.
    pub fn t_action_rank(&self, n: usize) -> usize {
        // image of F_n inside M_{n+1}: rank [R(n+1) | E_n] − rank R(n+1)
        let next = self.relation_matrix_at(n + 1);
        let mut cols: Vec<Vec<u64>> = (0..next.cols()).map(|j| next.column(j)).collect();
        for (i, &e) in self.generator_degrees.iter().enumerate() {
            if e <= n {
                let mut v = vec![0u64; self.generator_degrees.len()];
                v[i] = 1;
                cols.push(v);
            }
        }
        let stacked = Matrix::from_columns(self.p, self.generator_degrees.len(), &cols)
            .expect("columns built with generator length");
        stacked.rank() - next.rank()
    }

    // Columns = relations of degree ≤ n, in full generator coordinates.
    fn relation_matrix_at(&self, n: usize) -> Matrix {
        let cols: Vec<Vec<u64>> = self
            .relations
            .iter()
            .filter(|rel| rel.degree <= n)
            .map(|rel| rel.coeffs.clone())
            .collect();
        Matrix::from_columns(self.p, self.generator_degrees.len(), &cols)
            .expect("relation coefficient length validated")
    }
}

/// Presents a natural persistence module, one generator per bar birth and
/// one relation per finite bar death. Goes through the barcode, which makes
/// the presentation minimal and the roundtrip canonical.
pub fn nat_to_graded(module: &TameModule) -> Result<GradedPresentation> {
    if module.kind() != IndexKind::Nat {
        return Err(Error::Param(
            "graded presentations come from natural modules".into(),
        ));
    }
    let bars = decompose(module)?.expanded();
    let mut gens = Vec::with_capacity(bars.len());
    let mut rels = Vec::new();
    for (i, (birth, death)) in bars.iter().enumerate() {
        let e = birth.to_i64().expect("natural grid values fit in i64") as usize;
        gens.push(e);
        if let Extended::Finite(d) = death {
            let mut coeffs = vec![0u64; bars.len()];
            coeffs[i] = 1;
            rels.push(Relation {
                degree: d.to_i64().expect("natural grid values fit in i64") as usize,
                coeffs,
            });
        }
    }
    GradedPresentation::new(module.modulus(), gens, rels).map(|p| p.canonicalize())
}

/// Realizes a presentation as a natural persistence module by exact linear
/// algebra per degree: the degree-`n` component is the cokernel of the
/// degree-≤n relations, and t acts by inclusion of free-module coordinates.
pub fn graded_to_nat(pres: &GradedPresentation, horizon: usize) -> Result<TameModule> {
    if horizon < pres.max_degree() {
        return Err(Error::Param(format!(
            "horizon {horizon} below the largest degree {}",
            pres.max_degree()
        )));
    }
    let p = pres.p;
    let gens = &pres.generator_degrees;
    let n_gens = gens.len();

    // Reduced column-echelon basis of the degree-≤n relation span, plus the
    // induced quotient basis (active non-pivot generator coordinates).
    struct DegreeState {
        pivots: Vec<Option<Vec<u64>>>, // pivot row -> echelon column
        quotient_rows: Vec<usize>,
    }

    let state_at = |n: usize| -> DegreeState {
        let mut pivots: Vec<Option<Vec<u64>>> = vec![None; n_gens];
        for rel in pres.relations.iter().filter(|rel| rel.degree <= n) {
            let mut v = rel.coeffs.clone();
            reduce(&mut v, &pivots, p);
            if let Some(pr) = first_nonzero(&v) {
                normalize(&mut v, pr, p);
                pivots[pr] = Some(v);
            }
        }
        let quotient_rows = (0..n_gens)
            .filter(|&i| gens[i] <= n && pivots[i].is_none())
            .collect();
        DegreeState {
            pivots,
            quotient_rows,
        }
    };

    let mut grid = Vec::with_capacity(horizon + 1);
    let mut dims = Vec::with_capacity(horizon + 1);
    let mut maps = Vec::with_capacity(horizon);
    let mut prev: Option<DegreeState> = None;
    for n in 0..=horizon {
        let cur = state_at(n);
        if let Some(prev) = &prev {
            // image of each degree-(n-1) basis vector, reduced mod the
            // degree-n relations and read off in the quotient basis
            let mut m = Matrix::zero(cur.quotient_rows.len(), prev.quotient_rows.len(), p);
            for (col, &q) in prev.quotient_rows.iter().enumerate() {
                let mut v = vec![0u64; n_gens];
                v[q] = 1;
                reduce(&mut v, &cur.pivots, p);
                for (row, &q2) in cur.quotient_rows.iter().enumerate() {
                    m.set(row, col, v[q2]);
                }
            }
            maps.push(m);
        }
        grid.push(Rational::from_int(n as i64));
        dims.push(cur.quotient_rows.len());
        prev = Some(cur);
    }
    Ok(TameModule::new(IndexKind::Nat, p, grid, dims, maps)?.canonicalize())
}

fn first_nonzero(v: &[u64]) -> Option<usize> {
    v.iter().position(|&e| e != 0)
}

fn normalize(v: &mut [u64], pr: usize, p: u64) {
    let inv = finv(v[pr], p);
    for e in v.iter_mut() {
        *e = fmul(*e, inv, p);
    }
}

fn reduce(v: &mut [u64], pivots: &[Option<Vec<u64>>], p: u64) {
    for pr in 0..v.len() {
        if v[pr] == 0 {
            continue;
        }
        if let Some(col) = &pivots[pr] {
            let factor = v[pr]; // pivot columns are normalized to 1 at pr
            for (slot, &c) in v.iter_mut().zip(col) {
                *slot = fsub(*slot, fmul(factor, c, p), p);
            }
        }
    }
}

/// Interval summand `[b, d)` as a presentation fragment is exercised in
/// tests; this helper builds the module side for them.
#[cfg(test)]
pub(crate) fn nat_interval(b: i64, d: Option<i64>, p: u64) -> TameModule {
    let death = match d {
        Some(d) => Extended::Finite(Rational::from_int(d)),
        None => Extended::Infinity,
    };
    let bc = crate::barcode::Barcode::new(IndexKind::Nat, vec![(Rational::from_int(b), death, 1)])
        .unwrap();
    crate::barcode::from_barcode(&bc, p).unwrap()
}
