//! Random programs and automata for property and acceptance tests.
//!
//! Enabled by the `testgen` feature.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::automata::{Label, Pga, VarId};
use crate::guard::{Cmp, Guard};
use crate::lang::{Program, Rhs, Stmt};
use crate::rational::{rat, Rational};

#[derive(Debug, Clone)]
pub struct ProgramParams {
    pub vars: Vec<VarId>,
    /// Maximum nesting depth of `if` statements.
    pub max_depth: usize,
    pub max_const: u64,
    pub probabilities: Vec<Rational>,
    /// Upper bound on `geometric` sampling sites; zero disables them.
    pub max_geometric: usize,
    pub max_top_level: usize,
    pub max_block: usize,
    /// Guarantee at least one `observe` statement.
    pub require_observe: bool,
}

impl Default for ProgramParams {
    fn default() -> Self {
        ProgramParams {
            vars: ["X", "Y", "Z"].into_iter().map(VarId::from).collect(),
            max_depth: 4,
            max_const: 5,
            probabilities: vec![rat(1, 4), rat(1, 3), rat(1, 2), rat(2, 3)],
            max_geometric: 0,
            max_top_level: 5,
            max_block: 3,
            require_observe: false,
        }
    }
}

struct ProgramGen<'a, R> {
    rng: &'a mut R,
    params: &'a ProgramParams,
    geometric_left: usize,
}

impl<R: Rng> ProgramGen<'_, R> {
    fn var(&mut self) -> VarId {
        self.params.vars.choose(self.rng).expect("at least one variable").clone()
    }

    fn prob(&mut self) -> Rational {
        self.params.probabilities.choose(self.rng).expect("nonempty").clone()
    }

    fn constant(&mut self) -> u64 {
        self.rng.gen_range(0..=self.params.max_const)
    }

    fn guard(&mut self, depth: usize) -> Guard {
        let roll = self.rng.gen_range(0..10);
        match roll {
            0 if depth > 0 => self.guard(depth - 1).negate(),
            1 | 2 if depth > 0 => self.guard(depth - 1).and(self.guard(depth - 1)),
            3 if depth > 0 => self.guard(depth - 1).or(self.guard(depth - 1)),
            4 if depth == 0 => Guard::True,
            _ => {
                let cmp = *[Cmp::Eq, Cmp::Ne, Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge]
                    .choose(self.rng)
                    .expect("nonempty");
                let c = self.rng.gen_range(0..=self.params.max_const.min(3));
                Guard::Atom(self.var(), cmp, c)
            }
        }
    }

    fn rhs(&mut self) -> Rhs {
        loop {
            return match self.rng.gen_range(0..7) {
                0 => Rhs::Const(self.constant()),
                1 => Rhs::Var(self.var()),
                2 => Rhs::VarPlus(self.var(), self.rng.gen_range(1..=self.params.max_const.max(1))),
                3 | 4 => Rhs::Bernoulli(self.prob()),
                5 if self.geometric_left > 0 => {
                    self.geometric_left -= 1;
                    Rhs::Geometric(self.prob())
                }
                6 => Rhs::Const(self.rng.gen_range(0..=1)),
                _ => continue,
            };
        }
    }

    /// Opening assignment that gives a variable a nontrivial distribution.
    fn seed_rhs(&mut self) -> Rhs {
        match self.rng.gen_range(0..6) {
            0 if self.geometric_left > 0 => {
                self.geometric_left -= 1;
                Rhs::Geometric(self.prob())
            }
            1 => Rhs::Const(self.constant()),
            2 => Rhs::VarPlus(self.var(), self.rng.gen_range(1..=self.params.max_const.max(1))),
            _ => Rhs::Bernoulli(self.prob()),
        }
    }

    fn stmt(&mut self, depth: usize) -> Stmt {
        match self.rng.gen_range(0..12) {
            0 => Stmt::Skip,
            1..=6 => Stmt::Assign(self.var(), self.rhs()),
            7..=9 if depth < self.params.max_depth => {
                let g = self.guard(1);
                let a = self.block(depth + 1);
                let b = self.block(depth + 1);
                Stmt::IfElse(g, a, b)
            }
            _ => Stmt::Observe(self.guard(1)),
        }
    }

    fn block(&mut self, depth: usize) -> Program {
        let n = self.rng.gen_range(1..=self.params.max_block);
        Program::new((0..n).map(|_| self.stmt(depth)).collect())
    }
}

/// Draws a random program; every `if` is nested at most `max_depth` deep.
pub fn random_program<R: Rng>(rng: &mut R, params: &ProgramParams) -> Program {
    let mut gen = ProgramGen {
        rng,
        params,
        geometric_left: params.max_geometric,
    };
    let mut stmts: Vec<Stmt> = Vec::new();
    for v in params.vars.clone() {
        if gen.rng.gen_bool(0.8) {
            let rhs = gen.seed_rhs();
            stmts.push(Stmt::Assign(v, rhs));
        }
    }
    let n = gen.rng.gen_range(1..=params.max_top_level);
    stmts.extend((0..n).map(|_| gen.stmt(0)));
    let program = Program::new(stmts.clone());
    if params.require_observe && !program.has_observe() {
        stmts.push(Stmt::Observe(gen.guard(1)));
    }
    Program::new(stmts)
}

#[derive(Debug, Clone)]
pub struct PgaParams {
    pub vars: Vec<VarId>,
    pub max_states: usize,
    pub max_out_degree: usize,
    /// Only forward transitions: every variable has bounded degree.
    pub acyclic: bool,
}

impl Default for PgaParams {
    fn default() -> Self {
        PgaParams {
            vars: ["X", "Y"].into_iter().map(VarId::from).collect(),
            max_states: 5,
            max_out_degree: 3,
            acyclic: false,
        }
    }
}

fn small_weight<R: Rng>(rng: &mut R) -> Rational {
    let den = rng.gen_range(2..=6);
    rat(rng.gen_range(1..den), den)
}

/// Random PGA with total mass at most one.
///
/// Each state's outgoing weights are scaled to sum to at most 9/10, so the
/// all-variables-at-one matrix has spectral radius below one; the final
/// weight gets at most the remainder.
pub fn random_pga<R: Rng>(rng: &mut R, params: &PgaParams) -> Pga {
    let n = rng.gen_range(1..=params.max_states);
    let mut a = Pga::new();
    for _ in 0..n {
        a.add_state(Rational::zero(), Rational::zero());
    }
    let cap = rat(9, 10);
    for q in 0..n {
        let targets: Vec<usize> = if params.acyclic { (q + 1..n).collect() } else { (0..n).collect() };
        let k = if targets.is_empty() { 0 } else { rng.gen_range(0..=params.max_out_degree) };
        let mut edges = Vec::new();
        for _ in 0..k {
            let t = *targets.choose(rng).expect("nonempty");
            let var = if rng.gen_bool(0.6) {
                params.vars.choose(rng).cloned()
            } else {
                None
            };
            edges.push((t, var, small_weight(rng)));
        }
        let total: Rational = edges.iter().map(|(_, _, w)| w.clone()).sum();
        let scale = if total > cap { &cap / &total } else { Rational::one() };
        for (t, var, w) in edges {
            a.add_transition(q, Label { weight: w * &scale, var }, t);
        }
        let used = &total * &scale;
        let room = Rational::one() - used;
        if rng.gen_bool(0.6) {
            a.set_final(q, room * small_weight(rng));
        }
    }
    // initial distribution with mass at most one
    let mut left = Rational::one();
    for q in 0..n {
        if q == 0 || rng.gen_bool(0.3) {
            let w = &left * small_weight(rng);
            left -= &w;
            a.set_initial(q, w);
        }
    }
    a
}
