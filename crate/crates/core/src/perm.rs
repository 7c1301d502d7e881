//! Permutations of solution indices, commutator words over signed cycles, and
//! derived series of small symmetric groups.
//!
//! Products are read left to right: `a.compose(&b)` performs `a` first and
//! then `b`, so `(1 2)(2 3) = (1 3 2)`. Indices are 0-based in the API and
//! 1-based in cycle notation.
//!
//! ```
//! use arlab::perm::Permutation;
//!
//! let a: Permutation = Permutation::parse("(1 2)", 3).unwrap();
//! let b = Permutation::parse("(2 3)", 3).unwrap();
//! assert_eq!(a.commutator(&b).unwrap().to_string(), "(1 2 3)");
//! ```

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("images do not form a bijection on {0} points")]
    NotBijective(usize),
    #[error("index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("cycle indices must be distinct")]
    RepeatedIndex,
    #[error("a leaf cycle must have 2 or 3 points, got {0}")]
    LeafLength(usize),
    #[error("expansion needs a 3-cycle leaf")]
    NotThreeCycle,
    #[error("insufficient degree for expansion: five symbols are needed, have {0}")]
    InsufficientDegree(usize),
    #[error("enumeration scale exceeded: derived series supports 2 <= n <= 5, got {0}")]
    EnumerationScaleExceeded(usize),
    #[error("malformed notation: {0}")]
    Parse(String),
}

/// A bijection of `0..degree`. `images[i]` is where the point `i` goes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(PermError::NotBijective(n));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// The cycle `points[0] -> points[1] -> ... -> points[0]`.
    pub fn cycle(degree: usize, points: &[usize]) -> Result<Self, PermError> {
        check_points(degree, points)?;
        let mut images: Vec<usize> = (0..degree).collect();
        for (w, &p) in points.iter().enumerate() {
            images[p] = points[(w + 1) % points.len()];
        }
        Ok(Permutation { images })
    }

    pub fn transposition(degree: usize, i: usize, j: usize) -> Result<Self, PermError> {
        Self::cycle(degree, &[i, j])
    }

    /// Left-to-right product of (possibly overlapping) cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut acc = Self::identity(degree);
        for c in cycles {
            acc = acc.compose(&Self::cycle(degree, c)?)?;
        }
        Ok(acc)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`, read left to right.
    pub fn commutator(&self, other: &Permutation) -> Result<Permutation, PermError> {
        self.compose(other)?
            .compose(&self.inverse())?
            .compose(&other.inverse())
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                c.push(p);
                p = self.images[p];
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    /// Parses cycle notation such as `"(1 2)(3 4 5)"` or `"()"`. Adjacent
    /// cycles multiply left to right. For degree ≤ 9 the compact form
    /// `"(123)"` is also accepted.
    pub fn parse(text: &str, degree: usize) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let cycles = parse_cycles(text, degree)?;
        let cycles: Vec<Vec<usize>> = cycles.into_iter().filter(|c| c.len() > 1).collect();
        Self::from_cycles(degree, &cycles)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            write_points(f, &c)?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn write_points(f: &mut fmt::Formatter<'_>, points: &[usize]) -> fmt::Result {
    f.write_str("(")?;
    for (w, p) in points.iter().enumerate() {
        if w > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{}", p + 1)?;
    }
    f.write_str(")")
}

fn check_points(degree: usize, points: &[usize]) -> Result<(), PermError> {
    if degree == 0 {
        return Err(PermError::ZeroDegree);
    }
    let mut seen = BTreeSet::new();
    for &p in points {
        if p >= degree {
            return Err(PermError::IndexOutOfRange { index: p, degree });
        }
        if !seen.insert(p) {
            return Err(PermError::RepeatedIndex);
        }
    }
    Ok(())
}

/// Splits `"(1 2)(3 4 5)"` into 0-based point lists (empty for `"()"`).
fn parse_cycles(text: &str, degree: usize) -> Result<Vec<Vec<usize>>, PermError> {
    let text = text.trim();
    let mut out = Vec::new();
    let mut rest = text;
    if rest.is_empty() {
        return Err(PermError::Parse("empty input".into()));
    }
    while !rest.is_empty() {
        rest = rest.trim_start();
        if !rest.starts_with('(') {
            return Err(PermError::Parse(format!("expected '(' in {text:?}")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| PermError::Parse(format!("unclosed cycle in {text:?}")))?;
        out.push(parse_points(&rest[1..close], degree)?);
        rest = rest[close + 1..].trim_start();
    }
    Ok(out)
}

fn parse_points(body: &str, degree: usize) -> Result<Vec<usize>, PermError> {
    let tokens: Vec<&str> = body.split_whitespace().collect();
    let digits: Vec<String> = if tokens.len() == 1 && tokens[0].len() > 1 && degree <= 9 {
        tokens[0].chars().map(|c| c.to_string()).collect()
    } else {
        tokens.iter().map(|t| t.to_string()).collect()
    };
    let mut points = Vec::with_capacity(digits.len());
    for t in digits {
        let v: usize = t
            .parse()
            .map_err(|_| PermError::Parse(format!("bad index {t:?}")))?;
        if v == 0 || v > degree {
            return Err(PermError::IndexOutOfRange {
                index: v.wrapping_sub(1),
                degree,
            });
        }
        points.push(v - 1);
    }
    check_points(degree, &points)?;
    Ok(points)
}

/// A transposition or 3-cycle used as a word leaf, with an orientation flag.
///
/// The flag matters beyond the permutation it denotes: an inverted leaf is
/// realized by replaying the forward leaf's motion backwards.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedCycle {
    points: Vec<usize>,
    inverted: bool,
}

impl SignedCycle {
    pub fn new(points: Vec<usize>, degree: usize) -> Result<Self, PermError> {
        if !(2..=3).contains(&points.len()) {
            return Err(PermError::LeafLength(points.len()));
        }
        check_points(degree, &points)?;
        Ok(SignedCycle {
            points,
            inverted: false,
        })
    }

    pub fn three(i: usize, j: usize, k: usize, degree: usize) -> Result<Self, PermError> {
        Self::new(vec![i, j, k], degree)
    }

    pub fn transposition(i: usize, j: usize, degree: usize) -> Result<Self, PermError> {
        Self::new(vec![i, j], degree)
    }

    /// Points in the order they were written (forward orientation).
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    pub fn is_three_cycle(&self) -> bool {
        self.points.len() == 3
    }

    pub fn inverse(&self) -> Self {
        SignedCycle {
            points: self.points.clone(),
            inverted: !self.inverted,
        }
    }

    /// Points of the permutation actually denoted (reversed when inverted).
    pub fn effective_points(&self) -> Vec<usize> {
        let mut p = self.points.clone();
        if self.inverted {
            p.reverse();
        }
        p
    }

    pub fn to_permutation(&self, degree: usize) -> Result<Permutation, PermError> {
        Permutation::cycle(degree, &self.effective_points())
    }
}

impl fmt::Display for SignedCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_points(f, &self.effective_points())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WordNode {
    Leaf(SignedCycle),
    Commutator(Box<WordNode>, Box<WordNode>),
}

impl WordNode {
    fn depth(&self) -> usize {
        match self {
            WordNode::Leaf(_) => 0,
            WordNode::Commutator(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn flatten_into(&self, inverted: bool, out: &mut Vec<SignedCycle>) {
        match (self, inverted) {
            (WordNode::Leaf(c), false) => out.push(c.clone()),
            (WordNode::Leaf(c), true) => out.push(c.inverse()),
            // [a,b] = a b a⁻¹ b⁻¹
            (WordNode::Commutator(a, b), false) => {
                a.flatten_into(false, out);
                b.flatten_into(false, out);
                a.flatten_into(true, out);
                b.flatten_into(true, out);
            }
            // [a,b]⁻¹ = b a b⁻¹ a⁻¹
            (WordNode::Commutator(a, b), true) => {
                b.flatten_into(false, out);
                a.flatten_into(false, out);
                b.flatten_into(true, out);
                a.flatten_into(true, out);
            }
        }
    }

    fn fmt_into(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordNode::Leaf(c) => write!(f, "{c}"),
            WordNode::Commutator(a, b) => {
                f.write_str("[")?;
                a.fmt_into(f)?;
                f.write_str(",")?;
                b.fmt_into(f)?;
                f.write_str("]")
            }
        }
    }
}

/// A nested commutator expression over signed cycle leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommutatorWord {
    degree: usize,
    root: WordNode,
}

impl CommutatorWord {
    pub fn leaf(cycle: SignedCycle, degree: usize) -> Result<Self, PermError> {
        check_points(degree, cycle.points())?;
        Ok(CommutatorWord {
            degree,
            root: WordNode::Leaf(cycle),
        })
    }

    pub fn commutator(a: CommutatorWord, b: CommutatorWord) -> Result<Self, PermError> {
        if a.degree != b.degree {
            return Err(PermError::DegreeMismatch(a.degree, b.degree));
        }
        Ok(CommutatorWord {
            degree: a.degree,
            root: WordNode::Commutator(Box::new(a.root), Box::new(b.root)),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn root(&self) -> &WordNode {
        &self.root
    }

    /// Maximum number of commutator nodes on a root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// Linearizes `[a, b]` into `a, b, a⁻¹, b⁻¹` recursively.
    pub fn flatten(&self) -> Vec<SignedCycle> {
        let mut out = Vec::new();
        self.root.flatten_into(false, &mut out);
        out
    }

    pub fn evaluate(&self) -> Permutation {
        evaluate_sequence(&self.flatten(), self.degree)
            .expect("leaves are validated against the word degree")
    }

    /// Parses nested-bracket notation, e.g. `"[(4 1 2),(2 5 3)]"`.
    pub fn parse(text: &str, degree: usize) -> Result<Self, PermError> {
        let mut p = WordParser {
            src: text.as_bytes(),
            pos: 0,
            degree,
        };
        let root = p.node()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(PermError::Parse(format!("trailing input in {text:?}")));
        }
        Ok(CommutatorWord { degree, root })
    }
}

impl fmt::Display for CommutatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt_into(f)
    }
}

struct WordParser<'a> {
    src: &'a [u8],
    pos: usize,
    degree: usize,
}

impl WordParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), PermError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(PermError::Parse(format!(
                "expected '{}' at offset {}",
                c as char, self.pos
            )))
        }
    }

    fn node(&mut self) -> Result<WordNode, PermError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'[') => {
                self.pos += 1;
                let a = self.node()?;
                self.expect(b',')?;
                let b = self.node()?;
                self.expect(b']')?;
                Ok(WordNode::Commutator(Box::new(a), Box::new(b)))
            }
            Some(b'(') => {
                let close = self.src[self.pos..]
                    .iter()
                    .position(|&c| c == b')')
                    .ok_or_else(|| PermError::Parse("unclosed leaf".into()))?;
                let body = std::str::from_utf8(&self.src[self.pos + 1..self.pos + close])
                    .map_err(|e| PermError::Parse(e.to_string()))?;
                self.pos += close + 1;
                let points = parse_points(body, self.degree)?;
                Ok(WordNode::Leaf(SignedCycle::new(points, self.degree)?))
            }
            _ => Err(PermError::Parse(format!(
                "expected '[' or '(' at offset {}",
                self.pos
            ))),
        }
    }
}

/// Left-to-right product of a leaf sequence.
pub fn evaluate_sequence(seq: &[SignedCycle], degree: usize) -> Result<Permutation, PermError> {
    let mut acc = Permutation::identity(degree);
    for c in seq {
        acc = acc.compose(&c.to_permutation(degree)?)?;
    }
    Ok(acc)
}

/// Writes the 3-cycle `(j k m)` as `[(i j k), (k ℓ m)]`, where `i < ℓ` are
/// the two smallest points not in the cycle.
pub fn expand_three_cycle(c: &SignedCycle, degree: usize) -> Result<CommutatorWord, PermError> {
    if !c.is_three_cycle() {
        return Err(PermError::NotThreeCycle);
    }
    if degree < 5 {
        return Err(PermError::InsufficientDegree(degree));
    }
    let (a, b) = expansion_pair(c, degree)?;
    CommutatorWord::commutator(
        CommutatorWord::leaf(a, degree)?,
        CommutatorWord::leaf(b, degree)?,
    )
}

fn expansion_pair(c: &SignedCycle, degree: usize) -> Result<(SignedCycle, SignedCycle), PermError> {
    let p = c.effective_points();
    check_points(degree, &p)?;
    let (j, k, m) = (p[0], p[1], p[2]);
    let mut unused = (0..degree).filter(|x| !p.contains(x));
    let i = unused.next().ok_or(PermError::InsufficientDegree(degree))?;
    let l = unused.next().ok_or(PermError::InsufficientDegree(degree))?;
    Ok((
        SignedCycle::three(i, j, k, degree)?,
        SignedCycle::three(k, l, m, degree)?,
    ))
}

/// Applies [`expand_three_cycle`] recursively `levels` times. The result has
/// `4^levels` leaves and still evaluates to `c`.
pub fn expand_to_depth(
    c: &SignedCycle,
    levels: usize,
    degree: usize,
) -> Result<CommutatorWord, PermError> {
    if !c.is_three_cycle() {
        return Err(PermError::NotThreeCycle);
    }
    if levels > 0 && degree < 5 {
        return Err(PermError::InsufficientDegree(degree));
    }
    check_points(degree, c.points())?;
    fn go(c: &SignedCycle, levels: usize, degree: usize) -> Result<WordNode, PermError> {
        if levels == 0 {
            return Ok(WordNode::Leaf(c.clone()));
        }
        let (a, b) = expansion_pair(c, degree)?;
        Ok(WordNode::Commutator(
            Box::new(go(&a, levels - 1, degree)?),
            Box::new(go(&b, levels - 1, degree)?),
        ))
    }
    Ok(CommutatorWord {
        degree,
        root: go(c, levels, degree)?,
    })
}

/// `[(i j), (j k)] = (i j k)`, the single commutator of transpositions.
pub fn transposition_commutator(
    i: usize,
    j: usize,
    k: usize,
    degree: usize,
) -> Result<CommutatorWord, PermError> {
    CommutatorWord::commutator(
        CommutatorWord::leaf(SignedCycle::transposition(i, j, degree)?, degree)?,
        CommutatorWord::leaf(SignedCycle::transposition(j, k, degree)?, degree)?,
    )
}

/// `[[(1 2),(2 3)],[(2 3),(3 4)]] = (1 4)(2 3)`, a commutator of commutators
/// of transpositions on four points.
pub fn double_transposition_commutator(degree: usize) -> Result<CommutatorWord, PermError> {
    if degree < 4 {
        return Err(PermError::IndexOutOfRange { index: 3, degree });
    }
    CommutatorWord::commutator(
        transposition_commutator(0, 1, 2, degree)?,
        transposition_commutator(1, 2, 3, degree)?,
    )
}

/// A subgroup in a derived series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupDescriptor {
    pub order: usize,
    pub generators: Vec<Permutation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedSeries {
    pub degree: usize,
    pub groups: Vec<SubgroupDescriptor>,
}

impl DerivedSeries {
    pub fn orders(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.order).collect()
    }

    /// True when the series reaches the trivial group.
    pub fn is_solvable(&self) -> bool {
        self.groups.last().is_some_and(|g| g.order == 1)
    }
}

/// Derived series `Sₙ ⊇ Sₙ' ⊇ Sₙ'' ⊇ …` by exhaustive commutator closure.
///
/// Stops at the trivial group, or records the first repeated order when the
/// series stalls at a perfect group.
pub fn derived_series(n: usize) -> Result<DerivedSeries, PermError> {
    if !(2..=5).contains(&n) {
        return Err(PermError::EnumerationScaleExceeded(n));
    }
    let mut current: Vec<Permutation> = all_permutations(n);
    let mut groups = vec![SubgroupDescriptor {
        order: current.len(),
        generators: minimal_generators(&current, n),
    }];
    while current.len() > 1 {
        let mut comms = BTreeSet::new();
        for a in &current {
            for b in &current {
                comms.insert(a.commutator(b)?);
            }
        }
        let comms: Vec<Permutation> = comms.into_iter().collect();
        let next = closure(&comms, n);
        let stalled = next.len() == current.len();
        groups.push(SubgroupDescriptor {
            order: next.len(),
            generators: minimal_generators(&comms, n),
        });
        current = next;
        if stalled {
            break;
        }
    }
    Ok(DerivedSeries { degree: n, groups })
}

fn all_permutations(n: usize) -> Vec<Permutation> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if prefix.len() == used.len() {
            out.push(Permutation {
                images: prefix.clone(),
            });
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Subgroup generated by `gens`, sorted.
fn closure(gens: &[Permutation], n: usize) -> Vec<Permutation> {
    let id = Permutation::identity(n);
    let mut set: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = p.compose(g).expect("same degree");
            if set.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    let mut v: Vec<Permutation> = set.into_iter().collect();
    v.sort();
    v
}

/// Greedy generating set: keep an element only if it enlarges the span.
fn minimal_generators(elements: &[Permutation], n: usize) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(n)]);
    for e in elements {
        if !span.contains(e) {
            gens.push(e.clone());
            span = closure(&gens, n).into_iter().collect();
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, n).unwrap()
    }

    #[test]
    fn left_to_right_products() {
        assert_eq!(
            p("(1 2)", 3).compose(&p("(2 3)", 3)).unwrap(),
            p("(1 3 2)", 3)
        );
        assert_eq!(
            p("(2 3)", 3).compose(&p("(1 2)", 3)).unwrap(),
            p("(1 2 3)", 3)
        );
    }

    #[test]
    fn compose_rejects_mixed_degrees() {
        assert_eq!(
            p("(1 2)", 3).compose(&p("(1 2)", 4)),
            Err(PermError::DegreeMismatch(3, 4))
        );
        assert!(p("(1 2)", 3).commutator(&p("(1 2)", 4)).is_err());
    }

    #[test]
    fn inverses() {
        assert_eq!(p("(1 2)", 2).inverse(), p("(1 2)", 2));
        assert_eq!(p("(1 2 3)", 3).inverse(), p("(1 3 2)", 3));
        assert!(Permutation::identity(4).inverse().is_identity());
    }

    #[test]
    fn worked_commutators() {
        assert_eq!(
            p("(1 2)", 3).commutator(&p("(2 3)", 3)).unwrap(),
            p("(1 2 3)", 3)
        );
        assert_eq!(
            p("(1 2 3)", 4).commutator(&p("(2 3 4)", 4)).unwrap(),
            p("(1 4)(2 3)", 4)
        );
        assert_eq!(
            p("(1 2 3)", 5).commutator(&p("(3 4 5)", 5)).unwrap(),
            p("(2 3 5)", 5)
        );
    }

    #[test]
    fn notation_round_trip_and_compact_form() {
        for s in ["()", "(1 2)", "(1 4)(2 3)", "(1 3 5 2)"] {
            assert_eq!(p(s, 5).to_string(), s);
        }
        assert_eq!(p("(123)", 3).to_string(), "(1 2 3)");
        assert_eq!(p("(3 1)", 3).to_string(), "(1 3)");
        assert!(Permutation::parse("(1 1)", 3).is_err());
        assert!(Permutation::parse("(1 4)", 3).is_err());
        assert!(Permutation::parse("1 2", 3).is_err());
        assert!(Permutation::parse("", 3).is_err());
    }

    #[test]
    fn from_images_validates() {
        assert!(Permutation::from_images(vec![1, 0, 2]).is_ok());
        assert_eq!(
            Permutation::from_images(vec![1, 1, 2]),
            Err(PermError::NotBijective(3))
        );
        assert_eq!(Permutation::from_images(vec![]), Err(PermError::ZeroDegree));
    }

    #[test]
    fn expansion_of_123_matches_worked_instance() {
        let c = SignedCycle::three(0, 1, 2, 5).unwrap();
        let w = expand_three_cycle(&c, 5).unwrap();
        assert_eq!(w.to_string(), "[(4 1 2),(2 5 3)]");
        assert_eq!(w.evaluate(), p("(1 2 3)", 5));
    }

    #[test]
    fn expansion_needs_five_symbols() {
        let c = SignedCycle::three(0, 1, 2, 4).unwrap();
        assert_eq!(
            expand_three_cycle(&c, 4),
            Err(PermError::InsufficientDegree(4))
        );
        assert!(expand_to_depth(&c, 1, 4).is_err());
        assert_eq!(expand_to_depth(&c, 0, 4).unwrap().depth(), 0);
    }

    #[test]
    fn flatten_of_single_commutator() {
        let w = CommutatorWord::parse("[(4 1 2),(2 5 3)]", 5).unwrap();
        let flat: Vec<String> = w.flatten().iter().map(|c| c.to_string()).collect();
        assert_eq!(flat, ["(4 1 2)", "(2 5 3)", "(2 1 4)", "(3 5 2)"]);
        assert_eq!(evaluate_sequence(&w.flatten(), 5).unwrap(), p("(1 2 3)", 5));
    }

    #[test]
    fn expand_to_depth_leaf_counts() {
        let c = SignedCycle::three(0, 1, 2, 5).unwrap();
        for n in 0..=3 {
            let w = expand_to_depth(&c, n, 5).unwrap();
            assert_eq!(w.depth(), n);
            assert_eq!(w.flatten().len(), 4usize.pow(n as u32));
            assert_eq!(w.evaluate(), p("(1 2 3)", 5));
        }
    }

    #[test]
    fn word_parse_print_round_trip() {
        let s = "[[(3 4 1),(1 5 2)],[(4 2 5),(5 1 3)]]";
        let w = CommutatorWord::parse(s, 5).unwrap();
        assert_eq!(w.to_string(), s);
        assert_eq!(w.depth(), 2);
        assert!(CommutatorWord::parse("[(1 2),(2 3)", 3).is_err());
        assert!(CommutatorWord::parse("[(1 2 3 4),(2 3)]", 4).is_err());
    }

    #[test]
    fn table_words() {
        assert_eq!(
            transposition_commutator(0, 1, 2, 3).unwrap().evaluate(),
            p("(1 2 3)", 3)
        );
        let w = double_transposition_commutator(4).unwrap();
        assert_eq!(w.to_string(), "[[(1 2),(2 3)],[(2 3),(3 4)]]");
        assert_eq!(w.evaluate(), p("(1 4)(2 3)", 4));
    }

    #[test]
    fn derived_series_small() {
        assert_eq!(derived_series(2).unwrap().orders(), [2, 1]);
        assert_eq!(derived_series(3).unwrap().orders(), [6, 3, 1]);
        assert!(derived_series(1).is_err());
        assert_eq!(
            derived_series(6),
            Err(PermError::EnumerationScaleExceeded(6))
        );
    }
}
