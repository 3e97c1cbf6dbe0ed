//! Exact linear algebra for Kleene stars of nonnegative rational matrices.

use std::collections::BTreeMap;
use std::ops::{Index, IndexMut};

use num_traits::{One, Signed, Zero};

use crate::error::{PgaError, Result};
use crate::rational::Rational;

/// Dense square matrix of rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(dim: usize) -> Self {
        RationalMatrix {
            dim,
            data: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(PgaError::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RationalMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.dim + j]
    }
}

/// Dense vector of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn zeros(dim: usize) -> Self {
        RationalVector(vec![Rational::zero(); dim])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, other: &RationalVector) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }
}

impl From<Vec<Rational>> for RationalVector {
    fn from(v: Vec<Rational>) -> Self {
        RationalVector(v)
    }
}

/// Sparse nonnegative matrix, one `(column, value)` list per row.
pub(crate) type SparseRows = Vec<Vec<(usize, Rational)>>;

/// LU factorization of `I - N` for a nonnegative `N`, computed without
/// pivoting.
///
/// `I - N` is a Z-matrix, and a Z-matrix is a nonsingular M-matrix exactly
/// when all its leading principal minors are positive, i.e. when elimination
/// in natural order produces only positive pivots. A nonsingular M-matrix has
/// an entrywise-nonnegative inverse, which for nonnegative `N` is the same as
/// `Σ Nⁱ` converging. So construction doubles as the divergence check.
#[derive(Debug, Clone)]
pub(crate) struct StarFactor {
    dim: usize,
    /// Strictly lower part of `L` (unit diagonal implied), by row.
    lower: SparseRows,
    /// Strictly upper part of `U`, by row.
    upper: SparseRows,
    pivots: Vec<Rational>,
}

impl StarFactor {
    pub(crate) fn new(dim: usize, scalar: &SparseRows) -> Result<Self> {
        debug_assert_eq!(scalar.len(), dim);
        let mut lower: SparseRows = Vec::with_capacity(dim);
        let mut upper: SparseRows = Vec::with_capacity(dim);
        let mut pivots = Vec::with_capacity(dim);

        for i in 0..dim {
            let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
            row.insert(i, Rational::one());
            for (j, w) in &scalar[i] {
                let e = row.entry(*j).or_insert_with(Rational::zero);
                *e -= w;
            }
            let mut l_row = Vec::new();
            while let Some((&k, _)) = row.range(..i).next() {
                let v = row.remove(&k).expect("present");
                if v.is_zero() {
                    continue;
                }
                let factor = v / &pivots[k];
                for (j, u) in &upper[k] {
                    let e = row.entry(*j).or_insert_with(Rational::zero);
                    *e -= &factor * u;
                }
                l_row.push((k, factor));
            }
            let pivot = row.remove(&i).unwrap_or_else(Rational::zero);
            if !pivot.is_positive() {
                return Err(PgaError::DivergentAutomaton);
            }
            pivots.push(pivot);
            lower.push(l_row);
            upper.push(row.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(StarFactor {
            dim,
            lower,
            upper,
            pivots,
        })
    }

    /// Column solve: returns `(I - N)⁻¹ · rhs`.
    pub(crate) fn solve_right(&self, rhs: &[Rational]) -> Vec<Rational> {
        assert_eq!(rhs.len(), self.dim);
        // L z = rhs
        let mut z: Vec<Rational> = rhs.to_vec();
        for i in 0..self.dim {
            let mut acc = std::mem::take(&mut z[i]);
            for (k, l) in &self.lower[i] {
                if !z[*k].is_zero() {
                    acc -= l * &z[*k];
                }
            }
            z[i] = acc;
        }
        // U x = z
        for i in (0..self.dim).rev() {
            let mut acc = std::mem::take(&mut z[i]);
            for (j, u) in &self.upper[i] {
                if !z[*j].is_zero() {
                    acc -= u * &z[*j];
                }
            }
            z[i] = acc / &self.pivots[i];
        }
        z
    }

    /// Row solve: returns `rhs · (I - N)⁻¹`.
    pub(crate) fn solve_left(&self, rhs: &[Rational]) -> Vec<Rational> {
        assert_eq!(rhs.len(), self.dim);
        // w U = rhs
        let mut w: Vec<Rational> = rhs.to_vec();
        for k in 0..self.dim {
            if w[k].is_zero() {
                continue;
            }
            let wk = std::mem::take(&mut w[k]) / &self.pivots[k];
            for (j, u) in &self.upper[k] {
                w[*j] -= &wk * u;
            }
            w[k] = wk;
        }
        // y L = w
        for k in (0..self.dim).rev() {
            if w[k].is_zero() {
                continue;
            }
            let yk = w[k].clone();
            for (j, l) in &self.lower[k] {
                w[*j] -= &yk * l;
            }
        }
        w
    }
}

pub(crate) fn sparse_rows(n: &RationalMatrix) -> SparseRows {
    (0..n.dim())
        .map(|i| {
            n.row(i)
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j, v.clone()))
                .collect()
        })
        .collect()
}

/// Computes `(I - n)⁻¹ · rhs = n* · rhs` exactly.
///
/// Fails with [`PgaError::DivergentAutomaton`] unless `I - n` is a nonsingular
/// M-matrix, which for entrywise nonnegative `n` is equivalent to convergence
/// of `Σ nⁱ`.
pub fn star_solve(n: &RationalMatrix, rhs: &RationalVector) -> Result<RationalVector> {
    if rhs.len() != n.dim() {
        return Err(PgaError::DimensionMismatch {
            expected: n.dim(),
            found: rhs.len(),
        });
    }
    if n.data.iter().any(|v| v.is_negative()) {
        return Err(PgaError::ContractViolation(
            "star_solve requires an entrywise nonnegative matrix".into(),
        ));
    }
    let factor = StarFactor::new(n.dim(), &sparse_rows(n))?;
    Ok(RationalVector(factor.solve_right(&rhs.0)))
}
