//! Queries against the series `I·M*·F` of a PGA: total mass, individual
//! coefficients, marginal tables, expectations and normalization.
//!
//! Everything reduces to solving linear systems with `I - N`, where `N` is
//! the scalar part of the transition matrix once every variable that is not
//! being counted has been set to one.

mod linalg;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

pub use linalg::{star_solve, RationalMatrix, RationalVector};
use linalg::{SparseRows, StarFactor};

use crate::automata::{scale_initial, trim, Pga, VarId};
use crate::error::{PgaError, Result};
use crate::rational::Rational;

/// Assignment of natural numbers to variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation(BTreeMap<VarId, u64>);

impl Valuation {
    pub fn new() -> Self {
        Valuation::default()
    }

    pub fn from_pairs<V: Into<VarId>>(pairs: impl IntoIterator<Item = (V, u64)>) -> Self {
        Valuation(pairs.into_iter().map(|(v, n)| (v.into(), n)).collect())
    }

    /// Value of `var`, reading absent variables as zero.
    pub fn get(&self, var: &VarId) -> u64 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn contains(&self, var: &VarId) -> bool {
        self.0.contains_key(var)
    }

    pub fn set(&mut self, var: VarId, value: u64) {
        self.0.insert(var, value);
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarId> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, u64)> {
        self.0.iter().map(|(v, n)| (v, *n))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.values().sum()
    }

    /// Drops variables mapped to zero, giving a canonical key under the
    /// absent-means-zero reading.
    pub fn without_zeros(&self) -> Valuation {
        Valuation(self.0.iter().filter(|(_, n)| **n != 0).map(|(v, n)| (v.clone(), *n)).collect())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, n) in &self.0 {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{v}={n}")?;
        }
        Ok(())
    }
}

/// Finite table of probabilities with an exact bound on the mass it omits.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DistTable {
    pub entries: BTreeMap<Valuation, Rational>,
    pub residual: Rational,
}

impl DistTable {
    pub fn get(&self, v: &Valuation) -> Rational {
        self.entries.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn mass(&self) -> Rational {
        self.entries.values().sum()
    }
}

/// The automaton's transitions split into the scalar part and one
/// coefficient matrix per counted variable.
struct Split {
    dim: usize,
    initial: Vec<Rational>,
    final_weights: Vec<Rational>,
    scalar: SparseRows,
    counted: Vec<SparseRows>,
}

impl Split {
    /// Every variable not in `counted` is evaluated at one.
    fn new(a: &Pga, counted: &[VarId]) -> Self {
        let a = trim(a);
        let dim = a.num_states();
        let mut scalar: SparseRows = vec![Vec::new(); dim];
        let mut per_var: Vec<SparseRows> = vec![vec![Vec::new(); dim]; counted.len()];
        for t in a.transitions() {
            let slot = t.var.and_then(|v| counted.iter().position(|c| c == v));
            let rows = match slot {
                Some(i) => &mut per_var[i],
                None => &mut scalar,
            };
            let row = &mut rows[t.source];
            match row.iter_mut().find(|(j, _)| *j == t.target) {
                Some((_, w)) => *w += t.weight,
                None => row.push((t.target, t.weight.clone())),
            }
        }
        Split {
            dim,
            initial: a.initial_weights().to_vec(),
            final_weights: a.final_weights().to_vec(),
            scalar,
            counted: per_var,
        }
    }

    fn factor(&self) -> Result<StarFactor> {
        StarFactor::new(self.dim, &self.scalar)
    }
}

fn dot(row: &[Rational], col: &[Rational]) -> Rational {
    row.iter()
        .zip(col)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

fn row_times(row: &[Rational], m: &SparseRows, acc: &mut [Rational]) -> bool {
    let mut touched = false;
    for (q, r) in row.iter().enumerate() {
        if r.is_zero() {
            continue;
        }
        for (t, w) in &m[q] {
            acc[*t] += r * w;
            touched = true;
        }
    }
    touched
}

/// Sum of all coefficients: `I·(I - M₁)⁻¹·F` with every variable set to one.
pub fn total_mass(a: &Pga) -> Result<Rational> {
    let split = Split::new(a, &[]);
    let s = split.factor()?;
    Ok(dot(&split.initial, &s.solve_right(&split.final_weights)))
}

/// All coefficients of the monomials `Π varsᵢ^cᵢ` with `cᵢ ≤ boundsᵢ`,
/// marginalizing every other variable. Zero coefficients are omitted.
///
/// Rows `I·S·(B·S)^…` are computed layer by layer in increasing total
/// degree; only the previous layer is kept alive.
pub fn joint_coefficients(a: &Pga, vars: &[VarId], bounds: &[u64]) -> Result<HashMap<Vec<u64>, Rational>> {
    assert_eq!(vars.len(), bounds.len());
    let split = Split::new(a, vars);
    let s = split.factor()?;
    let mut out = HashMap::new();

    let origin = vec![0u64; vars.len()];
    let row0 = s.solve_left(&split.initial);
    let c0 = dot(&row0, &split.final_weights);
    if !c0.is_zero() {
        out.insert(origin.clone(), c0);
    }
    let mut layer: HashMap<Vec<u64>, Vec<Rational>> = HashMap::new();
    if row0.iter().any(|r| !r.is_zero()) {
        layer.insert(origin, row0);
    }

    let max_degree: u64 = bounds.iter().sum();
    for _ in 0..max_degree {
        if layer.is_empty() {
            break;
        }
        let mut next: HashMap<Vec<u64>, Vec<Rational>> = HashMap::new();
        for (c, row) in &layer {
            for (i, b) in split.counted.iter().enumerate() {
                if c[i] >= bounds[i] {
                    continue;
                }
                let mut key = c.clone();
                key[i] += 1;
                let acc = next
                    .entry(key)
                    .or_insert_with(|| vec![Rational::zero(); split.dim]);
                row_times(row, b, acc);
            }
        }
        layer = next
            .into_iter()
            .filter(|(_, pre)| pre.iter().any(|r| !r.is_zero()))
            .map(|(c, pre)| (c, s.solve_left(&pre)))
            .collect();
        for (c, row) in &layer {
            let v = dot(row, &split.final_weights);
            if !v.is_zero() {
                out.insert(c.clone(), v);
            }
        }
    }
    Ok(out)
}

/// Exact probability of the monomial described by `v`. Variables of `a`
/// absent from `v` are marginalized out.
pub fn coefficient(a: &Pga, v: &Valuation) -> Result<Rational> {
    let vars: Vec<VarId> = v.vars().cloned().collect();
    let bounds: Vec<u64> = vars.iter().map(|x| v.get(x)).collect();
    let table = joint_coefficients(a, &vars, &bounds)?;
    Ok(table.get(&bounds).cloned().unwrap_or_else(Rational::zero))
}

/// Joint table over `vars` with every degree at most `degree_bound`; other
/// variables are marginalized. `residual` is the exact mass outside the table.
pub fn marginal_table(a: &Pga, vars: &[VarId], degree_bound: u64) -> Result<DistTable> {
    let mut vars = vars.to_vec();
    vars.sort();
    vars.dedup();
    let bounds = vec![degree_bound; vars.len()];
    let coeffs = joint_coefficients(a, &vars, &bounds)?;
    let mut entries = BTreeMap::new();
    let mut point = vec![0u64; vars.len()];
    loop {
        let key = Valuation(vars.iter().cloned().zip(point.iter().copied()).collect());
        let value = coeffs.get(&point).cloned().unwrap_or_else(Rational::zero);
        entries.insert(key, value);
        // odometer increment
        let mut i = 0;
        while i < point.len() && point[i] == degree_bound {
            point[i] = 0;
            i += 1;
        }
        if i == point.len() {
            break;
        }
        point[i] += 1;
    }
    let listed: Rational = entries.values().sum();
    let residual = total_mass(a)? - listed;
    Ok(DistTable { entries, residual })
}

/// `Σ_v v(x)·coefficient(a, v)`, the derivative of the series in `x` at one.
/// Not rescaled by the total mass.
pub fn expectation(a: &Pga, x: &VarId) -> Result<Rational> {
    let split = Split::new(a, std::slice::from_ref(x));
    // Star of the full matrix with every variable at one.
    let mut full = split.scalar.clone();
    for (q, row) in split.counted[0].iter().enumerate() {
        for (t, w) in row {
            match full[q].iter_mut().find(|(j, _)| j == t) {
                Some((_, acc)) => *acc += w,
                None => full[q].push((*t, w.clone())),
            }
        }
    }
    let s = StarFactor::new(split.dim, &full)?;
    let left = s.solve_left(&split.initial);
    let right = s.solve_right(&split.final_weights);
    let mut mid = vec![Rational::zero(); split.dim];
    row_times(&left, &split.counted[0], &mut mid);
    Ok(dot(&mid, &right))
}

/// Rescales the initial weights so that the total mass becomes exactly one.
pub fn normalize(a: &Pga) -> Result<Pga> {
    let z = total_mass(a)?;
    if z.is_zero() {
        return Err(PgaError::ZeroMass);
    }
    Ok(scale_initial(a, &(Rational::one() / z)))
}
