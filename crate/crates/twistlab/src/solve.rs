//! Exact solving of small polynomial systems by elimination and branching.
//!
//! The solver substitutes variables that occur only as a bare linear
//! monomial, branches on the roots of univariate equations, and splits on
//! variables dividing every monomial of an equation. Systems it cannot
//! reduce this way are reported as stalled rather than guessed at.

use crate::error::Result;
use crate::linalg::Rref;
use crate::poly::MPoly;
use crate::roots::roots;
use crate::scalar::{FieldSpec, Scalar};

/// A polynomial parametrization of part of the solution set: the point
/// with coordinates `coords[v](t₁, …, t_k)` solves the system for all t.
#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    pub nparams: usize,
    pub coords: Vec<MPoly>,
}

impl Family {
    pub fn point(&self, params: &[Scalar]) -> Vec<Scalar> {
        self.coords.iter().map(|c| c.eval(params)).collect()
    }

    /// Largest total degree among the coordinates.
    pub fn degree(&self) -> u32 {
        self.coords.iter().map(|c| c.total_degree()).max().unwrap_or(0)
    }

    /// Membership test for families with affine coordinates; None otherwise.
    pub fn contains(&self, point: &[Scalar]) -> Option<bool> {
        if self.degree() > 1 {
            return None;
        }
        let field = point.first().map(|s| s.field())?;
        let mut sys = Rref::new(field, self.nparams);
        for (c, p) in self.coords.iter().zip(point) {
            let mut row = std::collections::BTreeMap::new();
            let mut constant = Scalar::zero(field);
            for (m, v) in c.terms() {
                match m.iter().position(|&e| e > 0) {
                    Some(i) => {
                        row.insert(i, v.clone());
                    }
                    None => constant = v.clone(),
                }
            }
            sys.add(row, p - &constant);
        }
        Some(sys.is_consistent())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    /// Complete description of the solutions; empty means none exist.
    Solved(Vec<Family>),
    Stalled(String),
}

#[derive(Clone)]
struct State {
    eqs: Vec<MPoly>,
    subst: Vec<Option<MPoly>>,
}

impl State {
    fn assign(&mut self, var: usize, value: &MPoly) {
        for e in &mut self.eqs {
            if e.degree_in(var) > 0 {
                *e = e.substitute(var, value);
            }
        }
        for s in self.subst.iter_mut().flatten() {
            if s.degree_in(var) > 0 {
                *s = s.substitute(var, value);
            }
        }
        self.subst[var] = Some(value.clone());
    }
}

struct Solver {
    field: FieldSpec,
    nvars: usize,
    budget: usize,
    out: Vec<Family>,
    stalled: Option<String>,
}

/// Solve eqs = 0 in `nvars` unknowns, exploring at most `max_branches`
/// branch points.
pub fn solve(eqs: &[MPoly], nvars: usize, field: FieldSpec, max_branches: usize) -> Result<Outcome> {
    let mut solver = Solver {
        field,
        nvars,
        budget: max_branches,
        out: Vec::new(),
        stalled: None,
    };
    let state = State {
        eqs: eqs.to_vec(),
        subst: vec![None; nvars],
    };
    solver.run(state)?;
    if let Some(reason) = solver.stalled {
        return Ok(Outcome::Stalled(reason));
    }
    Ok(Outcome::Solved(prune(solver.out)))
}

fn prune(families: Vec<Family>) -> Vec<Family> {
    let mut kept: Vec<Family> = Vec::new();
    for f in families {
        if kept.contains(&f) {
            continue;
        }
        if f.nparams == 0 {
            let p = f.point(&[]);
            if kept.iter().any(|k| k.nparams > 0 && k.contains(&p) == Some(true)) {
                continue;
            }
        }
        kept.push(f);
    }
    let points: Vec<Family> = kept.iter().filter(|f| f.nparams > 0).cloned().collect();
    kept.retain(|f| {
        f.nparams > 0 || !points.iter().any(|k| k.contains(&f.point(&[])) == Some(true))
    });
    kept
}

impl Solver {
    fn spend(&mut self) -> bool {
        if self.budget == 0 {
            self.stalled = Some("branch budget exhausted".into());
            return false;
        }
        self.budget -= 1;
        true
    }

    fn run(&mut self, mut st: State) -> Result<()> {
        loop {
            if self.stalled.is_some() {
                return Ok(());
            }
            st.eqs.retain(|e| !e.is_zero());
            if st.eqs.iter().any(|e| e.as_constant().is_some()) {
                return Ok(());
            }
            st.eqs.sort_by_key(|e| (e.total_degree(), e.terms().len()));
            st.eqs.dedup();
            if st.eqs.is_empty() {
                self.record(&st);
                return Ok(());
            }
            if let Some((ei, var, c)) = find_isolated(&st.eqs) {
                let eq = st.eqs.remove(ei);
                let mut rest = eq.clone();
                let mut mono = vec![0; self.nvars];
                mono[var] = 1;
                rest.add_term(mono, -&c);
                let value = rest.scale(&-&c.inv()?);
                st.assign(var, &value);
                continue;
            }
            if let Some((ei, var)) = find_univariate(&st.eqs) {
                let u = st.eqs[ei].as_univariate(var).expect("single variable");
                let rts = roots(&u)?;
                if !self.spend() {
                    return Ok(());
                }
                for r in rts {
                    let mut next = st.clone();
                    next.assign(var, &MPoly::constant(r, self.nvars));
                    self.run(next)?;
                }
                return Ok(());
            }
            if let Some((ei, var, e)) = find_common_factor(&st.eqs) {
                if !self.spend() {
                    return Ok(());
                }
                let mut zero = st.clone();
                zero.assign(var, &MPoly::zero(self.field, self.nvars));
                self.run(zero)?;
                let mut quotient = MPoly::zero(self.field, self.nvars);
                for (m, c) in st.eqs[ei].terms() {
                    let mut m = m.clone();
                    m[var] -= e;
                    quotient.add_term(m, c.clone());
                }
                st.eqs[ei] = quotient;
                continue;
            }
            self.stalled = Some(format!(
                "{} equations left without a linear, univariate or factorable one",
                st.eqs.len()
            ));
            return Ok(());
        }
    }

    fn record(&mut self, st: &State) {
        let free: Vec<usize> = (0..self.nvars).filter(|&v| st.subst[v].is_none()).collect();
        let k = free.len();
        let mut slot = vec![None; self.nvars];
        for (i, &v) in free.iter().enumerate() {
            slot[v] = Some(i);
        }
        let coords = (0..self.nvars)
            .map(|v| match &st.subst[v] {
                None => MPoly::var(self.field, k, slot[v].unwrap()),
                Some(p) => {
                    let mut q = MPoly::zero(self.field, k);
                    for (m, c) in p.terms() {
                        let mut nm = vec![0; k];
                        for (i, &e) in m.iter().enumerate() {
                            if e > 0 {
                                nm[slot[i].expect("substituted values use free variables only")] = e;
                            }
                        }
                        q.add_term(nm, c.clone());
                    }
                    q
                }
            })
            .collect();
        self.out.push(Family { nparams: k, coords });
    }
}

fn find_isolated(eqs: &[MPoly]) -> Option<(usize, usize, Scalar)> {
    for (i, e) in eqs.iter().enumerate() {
        for v in e.variables() {
            if let Some(c) = e.isolated_linear_coeff(v) {
                return Some((i, v, c));
            }
        }
    }
    None
}

fn find_univariate(eqs: &[MPoly]) -> Option<(usize, usize)> {
    eqs.iter().enumerate().find_map(|(i, e)| {
        let vars = e.variables();
        (vars.len() == 1).then(|| (i, vars[0]))
    })
}

fn find_common_factor(eqs: &[MPoly]) -> Option<(usize, usize, u32)> {
    for (i, e) in eqs.iter().enumerate() {
        for v in e.variables() {
            let min = e.terms().keys().map(|m| m[v]).min().unwrap_or(0);
            if min > 0 {
                return Some((i, v, min));
            }
        }
    }
    None
}
