//! End-to-end runs: a commutator word becomes a sequence of root swaps, the
//! swaps become a coefficient loop through Vieta's formulas, and random
//! radical expressions are continued around that loop.
//!
//! Permutations act on root *positions*: a stage `(x y)` carries whatever
//! root sits at position `x` to position `y` and back, so following a
//! sequence of stages composes their permutations left to right.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::monodromy::{
    all_roots, coefficient_paths_from_root_paths, coefficients_from_roots, sort_roots,
    trace_roots_from, MonodromyTrace, Polynomial,
};
use crate::paths::{swap_arcs, PathBundle, PathError};
use crate::perm::{
    double_transposition_commutator, evaluate_sequence, expand_to_depth, transposition_commutator,
    CommutatorWord, Permutation, SignedCycle,
};
use crate::radical::{
    continue_expr, random_expr, BranchAssignment, ExprError, GeneratorLimits, RadicalExpr,
};
use crate::solvers::{cubic_formula_expr, quadratic_formula_expr};
use crate::{Tolerances, C64};

/// Whether a failure came from the request or from the numerics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Input,
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("witness stage '{stage}' failed: {message}")]
pub struct WitnessError {
    pub stage: &'static str,
    pub kind: FailureKind,
    pub message: String,
}

impl WitnessError {
    fn input(stage: &'static str, message: impl ToString) -> Self {
        WitnessError {
            stage,
            kind: FailureKind::Input,
            message: message.to_string(),
        }
    }

    fn numerical(stage: &'static str, message: impl ToString) -> Self {
        WitnessError {
            stage,
            kind: FailureKind::Numerical,
            message: message.to_string(),
        }
    }
}

/// Shape of each swap stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageGeometry {
    pub bulge: f64,
    /// Grid samples per stage.
    pub samples: usize,
}

impl Default for StageGeometry {
    fn default() -> Self {
        StageGeometry {
            bulge: 1.0,
            samples: 65,
        }
    }
}

/// One swap of two positions; `reversed` stages replay the swap backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub x: usize,
    pub y: usize,
    pub reversed: bool,
}

/// Paths realizing a leaf sequence from fixed start positions.
#[derive(Debug, Clone)]
pub struct Realization {
    pub positions: Vec<C64>,
    pub stages: Vec<Stage>,
    /// Per stage, root paths indexed by label; stage `k + 1` starts where
    /// stage `k` ends, exactly.
    pub root_stages: Vec<PathBundle>,
    /// Per stage, the coefficient loop (each stage returns the root set onto itself).
    pub coefficient_stages: Vec<PathBundle>,
}

impl Realization {
    pub fn root_paths(&self, tol: f64) -> Result<PathBundle, PathError> {
        PathBundle::concat_all(&self.root_stages, tol)
    }

    pub fn coefficient_loop(&self, tol: f64) -> Result<PathBundle, PathError> {
        PathBundle::concat_all(&self.coefficient_stages, tol)
    }

    /// Left-to-right product of the stage transpositions.
    pub fn permutation(&self) -> Permutation {
        let n = self.positions.len();
        let mut images: Vec<usize> = (0..n).collect();
        for s in &self.stages {
            for p in images.iter_mut() {
                if *p == s.x {
                    *p = s.y;
                } else if *p == s.y {
                    *p = s.x;
                }
            }
        }
        Permutation::from_images(images).expect("swaps are bijective")
    }
}

/// Two transpositions on the leaf's points whose left-to-right product is
/// the forward leaf.
fn three_cycle_stages(leaf: &SignedCycle, degree: usize) -> [(usize, usize); 2] {
    let p = leaf.points();
    let target = Permutation::cycle(degree, p).expect("valid leaf");
    let pairs = [(p[0], p[1]), (p[1], p[2]), (p[0], p[2])];
    for a in pairs {
        for b in pairs {
            let ta = Permutation::transposition(degree, a.0, a.1).expect("valid");
            let tb = Permutation::transposition(degree, b.0, b.1).expect("valid");
            if ta.compose(&tb).expect("same degree") == target {
                return [a, b];
            }
        }
    }
    unreachable!("every 3-cycle is a product of two of its transpositions")
}

/// Stage list for a leaf sequence. Inverted leaves replay their forward
/// stages in reverse order and direction.
pub fn stages_for_sequence(seq: &[SignedCycle], degree: usize) -> Vec<Stage> {
    let mut out = Vec::new();
    for leaf in seq {
        let forward: Vec<(usize, usize)> = if leaf.is_three_cycle() {
            three_cycle_stages(leaf, degree).to_vec()
        } else {
            vec![(leaf.points()[0], leaf.points()[1])]
        };
        if leaf.is_inverted() {
            out.extend(forward.iter().rev().map(|&(x, y)| Stage {
                x,
                y,
                reversed: true,
            }));
        } else {
            out.extend(forward.iter().map(|&(x, y)| Stage {
                x,
                y,
                reversed: false,
            }));
        }
    }
    out
}

/// `(a₁ a₂ … a_k) = (a₁ a₂)(a₁ a₃)…(a₁ a_k)`, cycle by cycle.
pub fn stages_for_permutation(perm: &Permutation) -> Vec<Stage> {
    let mut out = Vec::new();
    for cycle in perm.cycles() {
        for &b in &cycle[1..] {
            out.push(Stage {
                x: cycle[0],
                y: b,
                reversed: false,
            });
        }
    }
    out
}

/// Builds root and coefficient paths for `stages` from `positions`.
pub fn realize_stages(
    stages: &[Stage],
    positions: &[C64],
    geometry: &StageGeometry,
    tol: &Tolerances,
) -> Result<Realization, PathError> {
    let n = positions.len();
    // position-indexed swap bundle and its coefficient loop, per unordered pair
    let mut cache: BTreeMap<(usize, usize), (PathBundle, PathBundle)> = BTreeMap::new();
    let mut cur_pos: Vec<usize> = (0..n).collect();
    let mut root_stages = Vec::with_capacity(stages.len());
    let mut coefficient_stages = Vec::with_capacity(stages.len());
    for s in stages {
        let key = (s.x.min(s.y), s.x.max(s.y));
        if let std::collections::btree_map::Entry::Vacant(slot) = cache.entry(key) {
            let b = swap_arcs(
                positions,
                key.0,
                key.1,
                geometry.bulge,
                geometry.samples,
                tol.collision,
            )?;
            let c = coefficient_paths_from_root_paths(&b, tol.closure)
                .map_err(|e| PathError::InvalidArgument(e.to_string()))?;
            slot.insert((b, c));
        }
        let (base, coeffs) = &cache[&key];
        let swap = |p: usize| {
            if p == key.0 {
                key.1
            } else if p == key.1 {
                key.0
            } else {
                p
            }
        };
        // reversed: the path leaving position q is base[swap(q)] run backwards
        let by_label = cur_pos
            .iter()
            .map(|&p| {
                if s.reversed {
                    base.path(swap(p)).reverse()
                } else {
                    base.path(p).clone()
                }
            })
            .collect();
        root_stages.push(PathBundle::new(by_label)?);
        coefficient_stages.push(if s.reversed {
            coeffs.reverse()
        } else {
            coeffs.clone()
        });
        for p in cur_pos.iter_mut() {
            *p = swap(*p);
        }
    }
    Ok(Realization {
        positions: positions.to_vec(),
        stages: stages.to_vec(),
        root_stages,
        coefficient_stages,
    })
}

/// Realizes the flattened word.
pub fn realize_word(
    word: &CommutatorWord,
    positions: &[C64],
    geometry: &StageGeometry,
    tol: &Tolerances,
) -> Result<Realization, PathError> {
    if positions.len() != word.degree() {
        return Err(PathError::InvalidArgument(format!(
            "{} positions for a degree-{} word",
            positions.len(),
            word.degree()
        )));
    }
    realize_stages(
        &stages_for_sequence(&word.flatten(), word.degree()),
        positions,
        geometry,
        tol,
    )
}

pub fn realize_permutation(
    perm: &Permutation,
    positions: &[C64],
    geometry: &StageGeometry,
    tol: &Tolerances,
) -> Result<Realization, PathError> {
    realize_stages(&stages_for_permutation(perm), positions, geometry, tol)
}

/// How the loop is built from the configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// Picked from degree and depth.
    Auto,
    /// Depth 0: the target permutation as plain transpositions.
    Direct,
    /// The target 3-cycle expanded `depth` times by `[(ijk),(kℓm)] = (jkm)`.
    Expansion,
    /// `[(1 2),(2 3)] = (1 2 3)`, depth 1, degree ≥ 3.
    TranspositionCommutator,
    /// `[[(1 2),(2 3)],[(2 3),(3 4)]] = (1 4)(2 3)`, depth 2, degree ≥ 4.
    DoubleCommutator,
}

/// An expression supplied in addition to the generated suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtraExpression {
    pub label: String,
    pub expr: RadicalExpr,
    /// Explicit initial branches; `None` applies the sampling policy.
    pub branches: Option<Vec<BranchAssignment>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessConfig {
    pub degree: usize,
    /// `c₀ … c_{n−1}`; `None` means `zⁿ − 1`.
    pub start_coefficients: Option<Vec<C64>>,
    /// `None` takes the permutation of the construction.
    pub target: Option<Permutation>,
    pub depth: usize,
    pub construction: Construction,
    /// Generated expressions per depth.
    pub expr_count: usize,
    pub expr_max_depth: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub geometry: StageGeometry,
    #[serde(skip)]
    pub generator: GeneratorLimits,
    /// Resampling cap for expressions that hit a guard along the loop.
    pub max_resamples: usize,
    pub extra_expressions: Vec<ExtraExpression>,
}

impl WitnessConfig {
    pub fn new(degree: usize, depth: usize) -> Self {
        WitnessConfig {
            degree,
            start_coefficients: None,
            target: None,
            depth,
            construction: Construction::Auto,
            expr_count: 20,
            expr_max_depth: depth,
            seed: 0,
            tolerances: Tolerances::default(),
            geometry: StageGeometry::default(),
            generator: GeneratorLimits::default(),
            max_resamples: 20,
            extra_expressions: Vec::new(),
        }
    }

    fn resolved_construction(&self) -> Result<Construction, WitnessError> {
        let (n, d) = (self.degree, self.depth);
        let c = match self.construction {
            Construction::Auto => match (n, d) {
                (_, 0) => Construction::Direct,
                (5.., _) => Construction::Expansion,
                (3..=4, 1) => Construction::TranspositionCommutator,
                (4, 2) => Construction::DoubleCommutator,
                _ => {
                    return Err(WitnessError::input(
                        "config",
                        format!("no commutator word of depth {d} in degree {n}; depth ≥ 1 needs degree ≥ 5 beyond the table constructions"),
                    ))
                }
            },
            c => c,
        };
        let fixed_depth = match c {
            Construction::TranspositionCommutator => Some((1, 3)),
            Construction::DoubleCommutator => Some((2, 4)),
            _ => None,
        };
        if let Some((depth, degree)) = fixed_depth {
            if d != depth || n < degree {
                return Err(WitnessError::input(
                    "config",
                    format!("{c:?} has depth {depth} and needs degree ≥ {degree}"),
                ));
            }
        }
        if c == Construction::Expansion && n < 5 {
            return Err(WitnessError::input(
                "config",
                "insufficient degree for expansion (needs 5 symbols)",
            ));
        }
        Ok(c)
    }
}

/// Start positions: `e^{2πik/n}` for the default polynomial, otherwise the
/// sorted roots of the given one.
fn start_positions(config: &WitnessConfig) -> Result<Vec<C64>, WitnessError> {
    let n = config.degree;
    match &config.start_coefficients {
        None => Ok((0..n)
            .map(|k| C64::from_polar(1.0, TAU * k as f64 / n as f64))
            .collect()),
        Some(c) => {
            if c.len() != n {
                return Err(WitnessError::input(
                    "config",
                    format!("{} start coefficients for degree {n}", c.len()),
                ));
            }
            let poly = Polynomial::new(c.clone()).map_err(|e| WitnessError::input("config", e))?;
            let mut r = all_roots(&poly, config.tolerances.root_residual)
                .map_err(|e| WitnessError::numerical("roots", e))?;
            sort_roots(&mut r);
            Ok(r)
        }
    }
}

/// The word (if any), its leaf sequence and the stages of a configuration.
struct Plan {
    construction: Construction,
    word: Option<CommutatorWord>,
    sequence: Vec<SignedCycle>,
    stages: Vec<Stage>,
    word_permutation: Permutation,
    target: Permutation,
}

fn single_cycle_leaf(p: &Permutation) -> Option<SignedCycle> {
    match p.cycles().as_slice() {
        [c] if (2..=3).contains(&c.len()) => SignedCycle::new(c.clone(), p.degree()).ok(),
        _ => None,
    }
}

fn plan(config: &WitnessConfig) -> Result<Plan, WitnessError> {
    let n = config.degree;
    if n < 2 {
        return Err(WitnessError::input("config", "degree must be at least 2"));
    }
    let construction = config.resolved_construction()?;
    let default_target = if n == 2 {
        Permutation::transposition(2, 0, 1)
    } else {
        Permutation::cycle(n, &[0, 1, 2])
    }
    .expect("valid default target");
    let word_err = |e: crate::perm::PermError| WitnessError::input("word", e);
    let (word, sequence, stages, target) = match construction {
        Construction::Direct | Construction::Auto => {
            let target = config.target.clone().unwrap_or(default_target);
            if target.degree() != n {
                return Err(WitnessError::input("config", "target degree differs"));
            }
            match single_cycle_leaf(&target) {
                Some(leaf) => {
                    let word = CommutatorWord::leaf(leaf.clone(), n).map_err(word_err)?;
                    let stages = stages_for_sequence(std::slice::from_ref(&leaf), n);
                    (Some(word), vec![leaf], stages, target)
                }
                None => (None, Vec::new(), stages_for_permutation(&target), target),
            }
        }
        Construction::Expansion => {
            let target = config.target.clone().unwrap_or(default_target);
            let leaf = single_cycle_leaf(&target)
                .filter(SignedCycle::is_three_cycle)
                .ok_or_else(|| WitnessError::input("config", "expansion needs a 3-cycle target"))?;
            let word = expand_to_depth(&leaf, config.depth, n).map_err(word_err)?;
            let seq = word.flatten();
            let stages = stages_for_sequence(&seq, n);
            (Some(word), seq, stages, target)
        }
        Construction::TranspositionCommutator | Construction::DoubleCommutator => {
            let word = if construction == Construction::TranspositionCommutator {
                transposition_commutator(0, 1, 2, n)
            } else {
                double_transposition_commutator(n)
            }
            .map_err(word_err)?;
            let seq = word.flatten();
            let stages = stages_for_sequence(&seq, n);
            let target = config.target.clone().unwrap_or_else(|| word.evaluate());
            (Some(word), seq, stages, target)
        }
    };
    if stages.is_empty() {
        return Err(WitnessError::input(
            "config",
            "the target permutation is the identity",
        ));
    }
    let word_permutation = match &word {
        Some(_) => evaluate_sequence(&sequence, n).map_err(word_err)?,
        None => target.clone(),
    };
    Ok(Plan {
        construction,
        word,
        sequence,
        stages,
        word_permutation,
        target,
    })
}

/// Loop and trace for a configuration, before any expression is continued.
pub struct PreparedLoop {
    pub construction: Construction,
    pub word: Option<CommutatorWord>,
    pub sequence: Vec<SignedCycle>,
    pub realization: Realization,
    pub coefficient_loop: PathBundle,
    pub trace: MonodromyTrace,
    pub target: Permutation,
    pub word_permutation: Permutation,
}

pub fn prepare_loop(config: &WitnessConfig) -> Result<PreparedLoop, WitnessError> {
    let plan = plan(config)?;
    let positions = start_positions(config)?;
    let tol = &config.tolerances;
    let realization = realize_stages(&plan.stages, &positions, &config.geometry, tol)
        .map_err(|e| WitnessError::numerical("realize", e))?;
    let coefficient_loop = realization
        .coefficient_loop(tol.closure)
        .map_err(|e| WitnessError::numerical("concat", e))?;
    let trace = trace_roots_from(&positions, &coefficient_loop, tol)
        .map_err(|e| WitnessError::numerical("trace", e))?;
    Ok(PreparedLoop {
        construction: plan.construction,
        word: plan.word,
        sequence: plan.sequence,
        realization,
        coefficient_loop,
        trace,
        target: plan.target,
        word_permutation: plan.word_permutation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    Exhaustive,
    Sampled,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Generated,
    Extra(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpressionRecord {
    pub text: String,
    pub depth: usize,
    pub origin: Origin,
    pub seed: Option<u64>,
    pub sampling: Sampling,
    /// Branch assignments continued.
    pub assignments: usize,
    /// Worst `|end − start|` over assignments.
    pub closure_error: f64,
    /// Worst `|end − start| / (1 + |start|)` over assignments.
    pub relative_error: f64,
    pub returns_to_start: bool,
    /// Candidates discarded because a guard fired along the loop.
    pub resampled: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthSummary {
    pub depth: usize,
    pub count: usize,
    pub returned: usize,
    pub max_relative_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceSummary {
    pub steps: usize,
    pub refinements: usize,
    pub min_separation: f64,
    pub closure_error: f64,
    pub endpoint_error: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Verdicts {
    pub induced_matches_target: bool,
    pub induced_matches_word: bool,
    /// Every expression of depth ≤ N returned to its start.
    pub closure_law: bool,
    pub witness_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub schema: &'static str,
    pub config: WitnessConfig,
    pub construction: Construction,
    pub word: String,
    pub flattened: Vec<String>,
    pub stage_count: usize,
    pub target: Permutation,
    pub word_permutation: Permutation,
    pub induced: Permutation,
    pub trace: TraceSummary,
    pub expressions: Vec<ExpressionRecord>,
    pub per_depth: Vec<DepthSummary>,
    /// Worst relative error among expressions that returned.
    pub max_closing_error: f64,
    pub verdicts: Verdicts,
}

impl WitnessReport {
    pub const SCHEMA: &'static str = "witness-v1";

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn record(&self, label: &str) -> Option<&ExpressionRecord> {
        self.expressions
            .iter()
            .find(|r| matches!(&r.origin, Origin::Extra(l) if l == label))
    }
}

struct Outcome {
    assignments: usize,
    closure_error: f64,
    relative_error: f64,
    returns: bool,
}

fn continue_all(
    e: &RadicalExpr,
    loop_: &PathBundle,
    branches: &[BranchAssignment],
    tol: &Tolerances,
) -> Result<Outcome, ExprError> {
    let mut out = Outcome {
        assignments: branches.len(),
        closure_error: 0.0,
        relative_error: 0.0,
        returns: true,
    };
    for b in branches {
        let c = continue_expr(e, loop_, b, tol)?;
        out.closure_error = out.closure_error.max(c.closure_error);
        out.relative_error = out.relative_error.max(c.relative_error);
        out.returns &= c.returns_to_start;
    }
    Ok(out)
}

/// Exhaustive for at most two root nodes, else one seeded random assignment.
fn sample_branches(e: &RadicalExpr, seed: u64) -> (Sampling, Vec<BranchAssignment>) {
    if e.root_count() <= 2 {
        (Sampling::Exhaustive, BranchAssignment::all(e))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (
            Sampling::Sampled,
            vec![BranchAssignment::random(e, &mut rng)],
        )
    }
}

fn generated_record(
    depth: usize,
    index: usize,
    config: &WitnessConfig,
    loop_: &PathBundle,
    start: &[C64],
) -> ExpressionRecord {
    let mut resampled = 0;
    let mut last_error = String::new();
    for attempt in 0..=config.max_resamples {
        let seed = crate::radical::derive_seed(
            config.seed,
            depth as u64,
            (index as u64) | ((attempt as u64) << 32),
        );
        let e = match random_expr(depth, config.degree, &config.generator, seed, start) {
            Ok(e) => e,
            Err(err) => {
                return ExpressionRecord {
                    text: String::new(),
                    depth,
                    origin: Origin::Generated,
                    seed: Some(seed),
                    sampling: Sampling::Sampled,
                    assignments: 0,
                    closure_error: f64::NAN,
                    relative_error: f64::NAN,
                    returns_to_start: false,
                    resampled,
                    error: Some(err.to_string()),
                }
            }
        };
        let (sampling, branches) = sample_branches(&e, seed);
        match continue_all(&e, loop_, &branches, &config.tolerances) {
            Ok(o) => {
                return ExpressionRecord {
                    text: e.to_string(),
                    depth,
                    origin: Origin::Generated,
                    seed: Some(seed),
                    sampling,
                    assignments: o.assignments,
                    closure_error: o.closure_error,
                    relative_error: o.relative_error,
                    returns_to_start: o.returns,
                    resampled,
                    error: None,
                }
            }
            Err(err) => {
                resampled += 1;
                last_error = format!("{e}: {err}");
            }
        }
    }
    ExpressionRecord {
        text: String::new(),
        depth,
        origin: Origin::Generated,
        seed: None,
        sampling: Sampling::Sampled,
        assignments: 0,
        closure_error: f64::NAN,
        relative_error: f64::NAN,
        returns_to_start: false,
        resampled,
        error: Some(last_error),
    }
}

fn extra_record(
    x: &ExtraExpression,
    config: &WitnessConfig,
    loop_: &PathBundle,
) -> ExpressionRecord {
    let (sampling, branches) = match &x.branches {
        Some(b) => (Sampling::Explicit, b.clone()),
        None => sample_branches(&x.expr, config.seed),
    };
    let mut rec = ExpressionRecord {
        text: x.expr.to_string(),
        depth: x.expr.depth(),
        origin: Origin::Extra(x.label.clone()),
        seed: None,
        sampling,
        assignments: branches.len(),
        closure_error: f64::NAN,
        relative_error: f64::NAN,
        returns_to_start: false,
        resampled: 0,
        error: None,
    };
    match continue_all(&x.expr, loop_, &branches, &config.tolerances) {
        Ok(o) => {
            rec.closure_error = o.closure_error;
            rec.relative_error = o.relative_error;
            rec.returns_to_start = o.returns;
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

/// Full pipeline: word, stages, coefficient loop, trace, expression suite.
pub fn run_witness(config: &WitnessConfig) -> Result<WitnessReport, WitnessError> {
    let prepared = prepare_loop(config)?;
    Ok(assemble(config, &prepared))
}

/// Expression suite and verdicts over an already prepared loop.
pub fn assemble(config: &WitnessConfig, prepared: &PreparedLoop) -> WitnessReport {
    let loop_ = &prepared.coefficient_loop;
    let start = loop_.starts();
    let jobs: Vec<(usize, usize)> = (0..=config.expr_max_depth)
        .flat_map(|d| (0..config.expr_count).map(move |i| (d, i)))
        .collect();
    let mut expressions: Vec<ExpressionRecord> = jobs
        .par_iter()
        .map(|&(d, i)| generated_record(d, i, config, loop_, &start))
        .collect();
    expressions.extend(
        config
            .extra_expressions
            .par_iter()
            .map(|x| extra_record(x, config, loop_))
            .collect::<Vec<_>>(),
    );

    let mut per_depth: BTreeMap<usize, DepthSummary> = BTreeMap::new();
    for r in &expressions {
        let s = per_depth.entry(r.depth).or_insert(DepthSummary {
            depth: r.depth,
            count: 0,
            returned: 0,
            max_relative_error: 0.0,
        });
        s.count += 1;
        if r.returns_to_start {
            s.returned += 1;
        }
        if r.relative_error.is_finite() {
            s.max_relative_error = s.max_relative_error.max(r.relative_error);
        }
    }
    let max_closing_error = expressions
        .iter()
        .filter(|r| r.returns_to_start)
        .map(|r| r.relative_error)
        .fold(0.0, f64::max);
    let induced = prepared.trace.induced().clone();
    let closure_law = expressions
        .iter()
        .filter(|r| r.depth <= config.depth)
        .all(|r| r.returns_to_start);
    let induced_matches_target = induced == prepared.target;
    let verdicts = Verdicts {
        induced_matches_target,
        induced_matches_word: induced == prepared.word_permutation,
        closure_law,
        witness_holds: induced_matches_target && closure_law,
    };
    let word = match &prepared.word {
        Some(w) => w.to_string(),
        None => prepared.target.to_string(),
    };
    let t = &prepared.trace;
    WitnessReport {
        schema: WitnessReport::SCHEMA,
        config: config.clone(),
        construction: prepared.construction,
        word,
        flattened: prepared.sequence.iter().map(ToString::to_string).collect(),
        stage_count: prepared.realization.stages.len(),
        target: prepared.target.clone(),
        word_permutation: prepared.word_permutation.clone(),
        induced,
        trace: TraceSummary {
            steps: t.steps(),
            refinements: t.refinements(),
            min_separation: t.min_separation(),
            closure_error: t.closure_error(),
            endpoint_error: t.endpoint_error(),
        },
        expressions,
        per_depth: per_depth.into_values().collect(),
        max_closing_error,
        verdicts,
    }
}

/// Where one continued formula value ended up.
#[derive(Debug, Clone, Serialize)]
pub struct Landing {
    pub branches: BranchAssignment,
    pub start: C64,
    pub end: C64,
    /// Label of the start root nearest the start value.
    pub start_root: usize,
    /// Label of the start root nearest the end value.
    pub end_root: usize,
    /// Distance from the end value to that root.
    pub end_gap: f64,
    pub moved: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ControlReport {
    pub name: &'static str,
    pub formula: String,
    pub formula_depth: usize,
    pub word: String,
    pub induced: Permutation,
    pub landings: Vec<Landing>,
    /// Some branch choice of the formula ended on a different root.
    pub formula_moved: bool,
    /// Every generated expression of depth ≤ the word depth returned.
    pub shallow_closed: bool,
    pub witness: WitnessReport,
}

fn nearest(roots: &[C64], z: C64) -> (usize, f64) {
    roots
        .iter()
        .enumerate()
        .map(|(i, r)| (i, (r - z).norm()))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
}

fn control(
    name: &'static str,
    config: WitnessConfig,
    formula: RadicalExpr,
    branches: Vec<BranchAssignment>,
    landing_tol: f64,
) -> Result<ControlReport, WitnessError> {
    let prepared = prepare_loop(&config)?;
    let report = assemble(&config, &prepared);
    let roots = &prepared.realization.positions;
    let mut landings = Vec::new();
    for b in branches {
        // branch choices that hit a guard at the start point are not roots
        let Ok(c) = continue_expr(&formula, &prepared.coefficient_loop, &b, &config.tolerances)
        else {
            continue;
        };
        let (start_root, start_gap) = nearest(roots, c.values.start());
        if start_gap > landing_tol {
            continue;
        }
        let (end_root, end_gap) = nearest(roots, c.values.end());
        landings.push(Landing {
            branches: b,
            start: c.values.start(),
            end: c.values.end(),
            start_root,
            end_root,
            end_gap,
            moved: end_root != start_root && end_gap <= landing_tol,
        });
    }
    if landings.is_empty() {
        return Err(WitnessError::numerical(
            "control",
            format!("no branch choice of the {name} formula starts on a root"),
        ));
    }
    let shallow_closed = report.verdicts.closure_law;
    Ok(ControlReport {
        name,
        formula: formula.to_string(),
        formula_depth: formula.depth(),
        word: report.word.clone(),
        induced: report.induced.clone(),
        formula_moved: landings.iter().any(|l| l.moved),
        landings,
        shallow_closed,
        witness: report,
    })
}

/// Quadratic formula under the swap `(1 2)` of the roots of `z² − 1`.
pub fn quadratic_control(expr_count: usize, seed: u64) -> Result<ControlReport, WitnessError> {
    let mut config = WitnessConfig::new(2, 0);
    config.expr_count = expr_count;
    config.seed = seed;
    let f = quadratic_formula_expr();
    let branches = BranchAssignment::all(&f);
    control("quadratic-formula", config, f, branches, 1e-6)
}

/// Cubic formula (depth 2) under the single commutator `[(1 2),(2 3)]` on
/// the roots of `z³ + z − 1`. Both copies of `v` get the same branches.
///
/// `z³ − 1` is unusable here: its `P` vanishes, so after one swap flips
/// `√D` the radicand `−Q + √D` is exactly zero.
pub fn cubic_control(expr_count: usize, seed: u64) -> Result<ControlReport, WitnessError> {
    let mut config = WitnessConfig::new(3, 1);
    config.start_coefficients = Some(vec![
        C64::new(-1.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
    ]);
    config.expr_count = expr_count;
    config.seed = seed;
    let f = cubic_formula_expr();
    let branches = (0..3)
        .flat_map(|l| (0..2).map(move |m| BranchAssignment(vec![l, m, l, m])))
        .collect();
    control("cubic-formula", config, f, branches, 1e-6)
}

/// Both controls with their default suites.
pub fn positive_controls(seed: u64) -> Result<Vec<ControlReport>, WitnessError> {
    Ok(vec![quadratic_control(20, seed)?, cubic_control(20, seed)?])
}

/// Coefficients of the default start polynomial as the loop sees them.
pub fn default_start_coefficients(n: usize) -> Vec<C64> {
    let pos: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(1.0, TAU * k as f64 / n as f64))
        .collect();
    coefficients_from_roots(&pos).coefficients().to_vec()
}
