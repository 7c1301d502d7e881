use std::f64::consts::PI;

use serde::Serialize;

use super::{BranchAssignment, ExprError, RadicalExpr};
use crate::monodromy::EngineError;
use crate::monodromy::{kth_root_branch, nearest_kth_root};
use crate::paths::{PathBundle, PathSpec};
use crate::{Tolerances, C64};

#[derive(Debug, Clone, Copy)]
enum Op {
    Const(f64),
    Coef(usize),
    Add,
    Sub,
    Mul,
    Div,
    Root { k: u32, slot: usize },
}

/// Role of an intermediate value, reported to evaluation observers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Role {
    Value,
    Divisor,
    Radicand,
}

enum Stop {
    Divide,
    BranchPoint,
    Refine,
}

/// Postorder stack program; `Root` nodes own state slots numbered in pre-order.
#[derive(Debug, Clone)]
pub(crate) struct Program {
    ops: Vec<Op>,
    slots: usize,
}

/// Per-slot state carried between continuation steps.
#[derive(Debug, Clone)]
struct State {
    roots: Vec<C64>,
    radicands: Vec<C64>,
}

impl Program {
    pub(crate) fn compile(e: &RadicalExpr) -> Program {
        fn emit(e: &RadicalExpr, ops: &mut Vec<Op>, next: &mut usize) {
            match e {
                RadicalExpr::Integer { value } => ops.push(Op::Const(*value as f64)),
                RadicalExpr::Coefficient { index } => ops.push(Op::Coef(*index)),
                RadicalExpr::Add { left, right }
                | RadicalExpr::Subtract { left, right }
                | RadicalExpr::Multiply { left, right }
                | RadicalExpr::Divide { left, right } => {
                    emit(left, ops, next);
                    emit(right, ops, next);
                    ops.push(match e {
                        RadicalExpr::Add { .. } => Op::Add,
                        RadicalExpr::Subtract { .. } => Op::Sub,
                        RadicalExpr::Multiply { .. } => Op::Mul,
                        _ => Op::Div,
                    });
                }
                RadicalExpr::Root { k, radicand } => {
                    let slot = *next;
                    *next += 1;
                    emit(radicand, ops, next);
                    ops.push(Op::Root { k: *k, slot });
                }
            }
        }
        let mut ops = Vec::new();
        let mut slots = 0;
        emit(e, &mut ops, &mut slots);
        Program { ops, slots }
    }

    /// Runs the program; `choose(slot, k, radicand)` picks each root value.
    fn run(
        &self,
        coeffs: &[C64],
        guard: f64,
        stack: &mut Vec<C64>,
        mut choose: impl FnMut(usize, u32, C64) -> Result<C64, Stop>,
        mut observe: impl FnMut(Role, C64),
    ) -> Result<C64, Stop> {
        stack.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Const(x) => C64::new(x, 0.0),
                Op::Coef(i) => coeffs[i],
                Op::Root { k, slot } => {
                    let x = stack.pop().expect("radicand");
                    observe(Role::Radicand, x);
                    if x.norm() <= guard {
                        return Err(Stop::BranchPoint);
                    }
                    choose(slot, k, x)?
                }
                Op::Add | Op::Sub | Op::Mul | Op::Div => {
                    let b = stack.pop().expect("right operand");
                    let a = stack.pop().expect("left operand");
                    match op {
                        Op::Add => a + b,
                        Op::Sub => a - b,
                        Op::Mul => a * b,
                        _ => {
                            observe(Role::Divisor, b);
                            if b.norm() <= guard {
                                return Err(Stop::Divide);
                            }
                            a / b
                        }
                    }
                }
            };
            observe(Role::Value, v);
            stack.push(v);
        }
        Ok(stack.pop().expect("result"))
    }

    /// Value at `coeffs` under fixed initial branches; `zero_guard` is relative
    /// to `1 + max |cᵢ|`.
    pub(crate) fn eval_initial(
        &self,
        coeffs: &[C64],
        branches: &BranchAssignment,
        zero_guard: f64,
        param: f64,
    ) -> Result<C64, ExprError> {
        self.eval_observed(coeffs, branches, zero_guard, param, |_, _| {})
    }

    pub(crate) fn eval_observed(
        &self,
        coeffs: &[C64],
        branches: &BranchAssignment,
        zero_guard: f64,
        param: f64,
        observe: impl FnMut(Role, C64),
    ) -> Result<C64, ExprError> {
        let guard = zero_guard * scale(coeffs);
        let mut stack = Vec::with_capacity(self.ops.len());
        self.run(
            coeffs,
            guard,
            &mut stack,
            |slot, k, x| Ok(kth_root_branch(x, k, branches.0[slot])),
            observe,
        )
        .map_err(|s| stop_error(s, param))
    }

    fn initial_state(
        &self,
        coeffs: &[C64],
        branches: &BranchAssignment,
        guard: f64,
    ) -> Result<(C64, State), ExprError> {
        let mut state = State {
            roots: vec![C64::new(0.0, 0.0); self.slots],
            radicands: vec![C64::new(0.0, 0.0); self.slots],
        };
        let mut stack = Vec::with_capacity(self.ops.len());
        let v = self
            .run(
                coeffs,
                guard * scale(coeffs),
                &mut stack,
                |slot, k, x| {
                    let r = kth_root_branch(x, k, branches.0[slot]);
                    state.roots[slot] = r;
                    state.radicands[slot] = x;
                    Ok(r)
                },
                |_, _| {},
            )
            .map_err(|s| stop_error(s, 0.0))?;
        Ok((v, state))
    }

    /// Value at `coeffs` continued from `prev`, or `Refine` when some
    /// radicand turned by `π/2` or more.
    fn step(
        &self,
        coeffs: &[C64],
        prev: &State,
        guard: f64,
        stack: &mut Vec<C64>,
    ) -> Result<(C64, State), Stop> {
        let mut next = prev.clone();
        let v = self.run(
            coeffs,
            guard * scale(coeffs),
            stack,
            |slot, k, x| {
                if (x / prev.radicands[slot]).arg().abs() >= PI / 2.0 {
                    return Err(Stop::Refine);
                }
                let r = nearest_kth_root(x, k, prev.roots[slot]);
                next.roots[slot] = r;
                next.radicands[slot] = x;
                Ok(r)
            },
            |_, _| {},
        )?;
        Ok((v, next))
    }
}

fn scale(coeffs: &[C64]) -> f64 {
    1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn stop_error(s: Stop, param: f64) -> ExprError {
    match s {
        Stop::Divide => ExprError::DivisionNearZero { param },
        Stop::BranchPoint => ExprError::RootAtBranchPoint { param },
        Stop::Refine => ExprError::RefinementExhausted { param },
    }
}

/// Value path of an expression continued along a coefficient loop.
#[derive(Debug, Clone, Serialize)]
pub struct ExprContinuation {
    pub values: PathSpec,
    /// `|end − start| ≤ closure · (1 + |start|)`.
    pub returns_to_start: bool,
    /// `|end − start|`.
    pub closure_error: f64,
    /// `|end − start| / (1 + |start|)`.
    pub relative_error: f64,
    pub refinements: usize,
}

struct Walker<'a> {
    program: &'a Program,
    guard: f64,
    stack: Vec<C64>,
    refinements: usize,
}

impl Walker<'_> {
    fn advance(
        &mut self,
        a: &[C64],
        b: &[C64],
        state: &State,
        levels: u32,
        param: f64,
    ) -> Result<(C64, State), ExprError> {
        match self.program.step(b, state, self.guard, &mut self.stack) {
            Ok(out) => Ok(out),
            Err(Stop::Refine) if levels > 0 => {
                self.refinements += 1;
                let mid: Vec<C64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
                let (_, half) = self.advance(a, &mid, state, levels - 1, param)?;
                self.advance(&mid, b, &half, levels - 1, param)
            }
            Err(s) => Err(stop_error(s, param)),
        }
    }
}

/// Continues `e` along the closed coefficient bundle from the given initial
/// branches. Arithmetic is pointwise; each root follows the branch nearest
/// its previous value, with steps bisected while any radicand turns by `π/2`.
pub fn continue_expr(
    e: &RadicalExpr,
    coeffs: &PathBundle,
    branches: &BranchAssignment,
    tol: &Tolerances,
) -> Result<ExprContinuation, ExprError> {
    e.validate(coeffs.width())?;
    branches.validate(e)?;
    if coeffs.closure_error() > tol.closure {
        return Err(EngineError::BundleNotClosed.into());
    }
    let program = Program::compile(e);
    let first = coeffs.starts();
    let (v0, mut state) = program.initial_state(&first, branches, tol.zero_guard)?;
    let mut walker = Walker {
        program: &program,
        guard: tol.zero_guard,
        stack: Vec::with_capacity(program.ops.len()),
        refinements: 0,
    };
    let mut values = Vec::with_capacity(coeffs.samples());
    values.push(v0);
    let mut a = first;
    for step in 1..coeffs.samples() {
        let b = coeffs.values_at(step);
        let (v, next) = walker.advance(&a, &b, &state, tol.max_bisections, coeffs.param(step))?;
        values.push(v);
        state = next;
        a = b;
    }
    let end = values[values.len() - 1];
    let closure_error = (end - v0).norm();
    let relative_error = closure_error / (1.0 + v0.norm());
    let returns_to_start = relative_error <= tol.closure;
    Ok(ExprContinuation {
        values: PathSpec::on_grid_of(coeffs.grid(), values, returns_to_start),
        returns_to_start,
        closure_error,
        relative_error,
        refinements: walker.refinements,
    })
}
