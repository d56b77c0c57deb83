//! Margolis homology `ker Q_n / im Q_n`, degree by degree.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fplinalg::{FpMatrix, Subspace};
use crate::gralg::Element;
use crate::ops::{OperatedAlgebra, Operation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MargolisDegree {
    pub degree: u32,
    pub ker_dim: usize,
    /// Image of Q_n arriving from degree `degree - |Q_n|`.
    pub im_dim: usize,
    pub homology_dim: usize,
    pub representatives: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MargolisResult {
    pub n: u32,
    /// Largest degree whose kernel is exact under the truncation.
    pub safe_max: Option<u32>,
    pub degrees: Vec<MargolisDegree>,
}

impl MargolisResult {
    pub fn homology_dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.homology_dim).collect()
    }
}

/// Serializable summary row.
#[derive(Serialize)]
pub struct MargolisRow {
    pub degree: u32,
    pub ker: usize,
    pub im: usize,
    pub homology: usize,
    pub representatives: Vec<String>,
}

fn q_subspaces(a: &OperatedAlgebra, n: u32, d: u32) -> Result<(Subspace, Vec<Vec<u32>>)> {
    let alg = a.algebra();
    let f = alg.field();
    let s = a.q_degree(n);
    let cols = a.matrix_columns(Operation::Q(n), d)?;
    let m = FpMatrix::from_columns(f, alg.dim(d + s), &cols);
    let ker = Subspace::from_vectors(f, alg.dim(d), m.kernel_basis().iter());
    Ok((ker, cols))
}

/// Largest safe degree for Q_n, if any.
pub fn safe_max(a: &OperatedAlgebra, n: u32) -> Option<u32> {
    a.truncation().checked_sub(a.q_degree(n))
}

pub fn margolis_homology(a: &OperatedAlgebra, n: u32, d_max: u32) -> Result<MargolisResult> {
    if n > a.n_max() {
        return Err(Error::NMaxExceeded { n, n_max: a.n_max() });
    }
    let safe = safe_max(a, n);
    match safe {
        Some(m) if d_max <= m => {}
        _ => {
            return Err(Error::UnsafeWindow {
                requested: d_max,
                max: safe.unwrap_or(0),
            })
        }
    }
    let alg = a.algebra();
    let f = alg.field();
    let s = a.q_degree(n);
    let mut degrees = Vec::new();
    for d in 0..=d_max {
        let (ker, _) = q_subspaces(a, n, d)?;
        let im = if d >= s {
            let (_, cols) = q_subspaces(a, n, d - s)?;
            Subspace::from_vectors(f, alg.dim(d), cols.iter())
        } else {
            Subspace::zero(f, alg.dim(d))
        };
        debug_assert!(im.is_subspace_of(&ker));
        let reps = im
            .complement_in(&ker)
            .iter()
            .map(|v| alg.from_coords(d, v))
            .collect::<Vec<_>>();
        degrees.push(MargolisDegree {
            degree: d,
            ker_dim: ker.dim(),
            im_dim: im.dim(),
            homology_dim: ker.dim() - im.dim(),
            representatives: reps,
        });
    }
    Ok(MargolisResult {
        n,
        safe_max: safe,
        degrees,
    })
}

/// Degrees `d` in the safe window where `Q_n Q_n` is not the zero matrix.
pub fn square_zero_failures(a: &OperatedAlgebra, n: u32) -> Result<Vec<u32>> {
    let s = a.q_degree(n);
    let Some(top) = a.truncation().checked_sub(2 * s) else {
        return Ok(Vec::new());
    };
    let mut bad = Vec::new();
    for d in 0..=top {
        for b in a.algebra().degree_basis(d)? {
            let once = a.apply_q(n, &b)?;
            let twice = a.apply_q(n, &once.value)?;
            if !twice.value.is_zero() {
                bad.push(d);
                break;
            }
        }
    }
    Ok(bad)
}

impl MargolisResult {
    pub fn rows(&self, a: &OperatedAlgebra) -> Vec<MargolisRow> {
        self.degrees
            .iter()
            .map(|d| MargolisRow {
                degree: d.degree,
                ker: d.ker_dim,
                im: d.im_dim,
                homology: d.homology_dim,
                representatives: d.representatives.iter().map(|e| a.algebra().format(e)).collect(),
            })
            .collect()
    }
}
