//! Expressions over the coefficients built from integers, `+ − × ÷` and
//! k-th roots, with branch-continuous evaluation along coefficient loops.

mod continuation;
mod parse;
mod random;

pub use continuation::{continue_expr, ExprContinuation};
pub use random::{random_expr, GeneratorLimits};

use std::fmt;
use std::ops;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monodromy::EngineError;
use crate::{Tolerances, C64};

pub(crate) use continuation::Program;
pub(crate) use random::derive_seed;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("division near zero at t = {param}")]
    DivisionNearZero { param: f64 },
    #[error("root at branch point at t = {param}")]
    RootAtBranchPoint { param: f64 },
    #[error("refinement exhausted at t = {param}")]
    RefinementExhausted { param: f64 },
    #[error("coefficient c{index} out of range for degree {degree}")]
    CoefficientOutOfRange { index: usize, degree: usize },
    #[error("root index {0} must be at least 2")]
    BadRootIndex(u32),
    #[error("expected {expected} branch choices, got {got}")]
    BranchCount { expected: usize, got: usize },
    #[error("branch {branch} out of range for a root of index {k}")]
    BranchOutOfRange { branch: u32, k: u32 },
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Expression tree. Depth counts `Root` nodes along the deepest branch.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadicalExpr {
    Integer {
        value: i64,
    },
    Coefficient {
        index: usize,
    },
    Add {
        left: Box<RadicalExpr>,
        right: Box<RadicalExpr>,
    },
    Subtract {
        left: Box<RadicalExpr>,
        right: Box<RadicalExpr>,
    },
    Multiply {
        left: Box<RadicalExpr>,
        right: Box<RadicalExpr>,
    },
    Divide {
        left: Box<RadicalExpr>,
        right: Box<RadicalExpr>,
    },
    Root {
        k: u32,
        radicand: Box<RadicalExpr>,
    },
}

/// Ingredient class by nesting depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IngredientClass {
    F,
    G,
    H,
    Deeper(usize),
}

impl fmt::Display for IngredientClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IngredientClass::F => f.write_str("F"),
            IngredientClass::G => f.write_str("G"),
            IngredientClass::H => f.write_str("H"),
            IngredientClass::Deeper(d) => write!(f, "depth-{d}"),
        }
    }
}

pub fn int(value: i64) -> RadicalExpr {
    RadicalExpr::Integer { value }
}

pub fn coeff(index: usize) -> RadicalExpr {
    RadicalExpr::Coefficient { index }
}

pub fn root(k: u32, radicand: RadicalExpr) -> RadicalExpr {
    RadicalExpr::Root {
        k,
        radicand: Box::new(radicand),
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl ops::$trait for RadicalExpr {
            type Output = RadicalExpr;

            fn $method(self, rhs: RadicalExpr) -> RadicalExpr {
                RadicalExpr::$variant {
                    left: Box::new(self),
                    right: Box::new(rhs),
                }
            }
        }
    };
}

binary_op!(Add, add, Add);
binary_op!(Sub, sub, Subtract);
binary_op!(Mul, mul, Multiply);
binary_op!(Div, div, Divide);

impl RadicalExpr {
    pub fn parse(text: &str) -> Result<Self, ExprError> {
        parse::parse(text)
    }

    fn children(&self) -> (Option<&RadicalExpr>, Option<&RadicalExpr>) {
        match self {
            RadicalExpr::Integer { .. } | RadicalExpr::Coefficient { .. } => (None, None),
            RadicalExpr::Add { left, right }
            | RadicalExpr::Subtract { left, right }
            | RadicalExpr::Multiply { left, right }
            | RadicalExpr::Divide { left, right } => (Some(left), Some(right)),
            RadicalExpr::Root { radicand, .. } => (Some(radicand), None),
        }
    }

    pub fn depth(&self) -> usize {
        let (l, r) = self.children();
        let below = l.map_or(0, Self::depth).max(r.map_or(0, Self::depth));
        match self {
            RadicalExpr::Root { .. } => below + 1,
            _ => below,
        }
    }

    pub fn class(&self) -> IngredientClass {
        match self.depth() {
            0 => IngredientClass::F,
            1 => IngredientClass::G,
            2 => IngredientClass::H,
            d => IngredientClass::Deeper(d),
        }
    }

    pub fn node_count(&self) -> usize {
        let (l, r) = self.children();
        1 + l.map_or(0, Self::node_count) + r.map_or(0, Self::node_count)
    }

    /// Number of `Root` nodes, i.e. the length of a [`BranchAssignment`].
    pub fn root_count(&self) -> usize {
        let (l, r) = self.children();
        let own = usize::from(matches!(self, RadicalExpr::Root { .. }));
        own + l.map_or(0, Self::root_count) + r.map_or(0, Self::root_count)
    }

    /// Root indices `k` in pre-order.
    pub fn root_indices(&self) -> Vec<u32> {
        fn walk(e: &RadicalExpr, out: &mut Vec<u32>) {
            if let RadicalExpr::Root { k, .. } = e {
                out.push(*k);
            }
            let (l, r) = e.children();
            if let Some(l) = l {
                walk(l, out);
            }
            if let Some(r) = r {
                walk(r, out);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Highest coefficient index referenced, if any.
    pub fn max_coefficient(&self) -> Option<usize> {
        let (l, r) = self.children();
        let own = match self {
            RadicalExpr::Coefficient { index } => Some(*index),
            _ => None,
        };
        own.max(l.and_then(Self::max_coefficient))
            .max(r.and_then(Self::max_coefficient))
    }

    /// Checks root indices and that every coefficient exists for `degree`.
    pub fn validate(&self, degree: usize) -> Result<(), ExprError> {
        if let Some(k) = self.root_indices().into_iter().find(|&k| k < 2) {
            return Err(ExprError::BadRootIndex(k));
        }
        match self.max_coefficient() {
            Some(index) if index >= degree => {
                Err(ExprError::CoefficientOutOfRange { index, degree })
            }
            _ => Ok(()),
        }
    }

    /// Bottom-up value at `coeffs` with the given initial branches.
    pub fn eval(
        &self,
        coeffs: &[C64],
        branches: &BranchAssignment,
        zero_guard: f64,
    ) -> Result<C64, ExprError> {
        self.validate(coeffs.len())?;
        branches.validate(self)?;
        Program::compile(self).eval_initial(coeffs, branches, zero_guard, 0.0)
    }
}

/// Bottom-up value at `coeffs` with the default zero guard.
pub fn eval_initial(
    e: &RadicalExpr,
    coeffs: &[C64],
    branches: &BranchAssignment,
) -> Result<C64, ExprError> {
    e.eval(coeffs, branches, Tolerances::default().zero_guard)
}

/// Initial branch index for every `Root` node, in pre-order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchAssignment(pub Vec<u32>);

impl BranchAssignment {
    pub fn zeros(e: &RadicalExpr) -> Self {
        BranchAssignment(vec![0; e.root_count()])
    }

    /// Every assignment, in lexicographic order.
    pub fn all(e: &RadicalExpr) -> Vec<BranchAssignment> {
        let ks = e.root_indices();
        let mut out = vec![Vec::new()];
        for k in ks {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..k).map(move |l| {
                        let mut v = prefix.clone();
                        v.push(l);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(BranchAssignment).collect()
    }

    /// Number of distinct assignments, `∏ k`.
    pub fn count(e: &RadicalExpr) -> u64 {
        e.root_indices().iter().map(|&k| u64::from(k)).product()
    }

    pub fn random<R: Rng>(e: &RadicalExpr, rng: &mut R) -> Self {
        BranchAssignment(
            e.root_indices()
                .iter()
                .map(|&k| rng.gen_range(0..k))
                .collect(),
        )
    }

    pub fn validate(&self, e: &RadicalExpr) -> Result<(), ExprError> {
        let ks = e.root_indices();
        if ks.len() != self.0.len() {
            return Err(ExprError::BranchCount {
                expected: ks.len(),
                got: self.0.len(),
            });
        }
        for (&k, &branch) in ks.iter().zip(&self.0) {
            if branch >= k {
                return Err(ExprError::BranchOutOfRange { branch, k });
            }
        }
        Ok(())
    }
}
