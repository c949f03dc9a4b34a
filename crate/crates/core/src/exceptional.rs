//! Exceptional sequences, mutations, helices, and norm descent.
//!
//! An exceptional basis is an ordered family with unit self-pairing and
//! `chi(later, earlier) = 0` spanning the lattice; left and right mutations
//! act on adjacent pairs and are mutually inverse. The norm of a basis is
//! the sum of squared ranks; greedy descent over elementary mutations,
//! with a bounded equal-norm plateau search, certifies a local minimum.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::lattice::{Pseudolattice, SurfaceStructure};
use crate::linalg::{vec_neg, vec_scale, vec_sub, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExceptionalError {
    /// chi(e, e) != 1
    NotExceptional,
    /// mutation index out of range
    BadIndex(usize),
    /// a mutated family stopped being exceptional (internal consistency)
    MutationBrokeSequence,
    /// helix extension needs an integral Serre operator
    NoSerreOperator,
}

impl fmt::Display for ExceptionalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExceptionalError::NotExceptional => write!(f, "element is not exceptional"),
            ExceptionalError::BadIndex(i) => write!(f, "mutation index {i} out of range"),
            ExceptionalError::MutationBrokeSequence => {
                write!(f, "internal: mutation produced a non-exceptional sequence")
            }
            ExceptionalError::NoSerreOperator => write!(f, "no integral Serre operator"),
        }
    }
}

/// Ordered family of coordinate vectors whose Gram under `chi` is
/// unitriangular.
#[derive(Clone, PartialEq, Eq)]
pub struct ExceptionalBasis {
    vectors: Vec<Vec<BigInt>>,
    gram: IntMatrix,
}

impl ExceptionalBasis {
    pub fn new(l: &Pseudolattice, vectors: Vec<Vec<BigInt>>) -> Result<Self, ExceptionalError> {
        let report = is_exceptional_sequence(l, &vectors);
        if report.failure.is_some() {
            return Err(ExceptionalError::NotExceptional);
        }
        let gram = gram_of(l, &vectors);
        Ok(ExceptionalBasis { vectors, gram })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[BigInt] {
        &self.vectors[i]
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn ranks(&self, s: &SurfaceStructure) -> Vec<BigInt> {
        self.vectors.iter().map(|v| s.rank_of(v)).collect()
    }
}

impl fmt::Debug for ExceptionalBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExceptionalBasis{:?}", self.vectors)
    }
}

fn gram_of(l: &Pseudolattice, vectors: &[Vec<BigInt>]) -> IntMatrix {
    IntMatrix::from_fn(vectors.len(), vectors.len(), |i, j| {
        l.chi(&vectors[i], &vectors[j])
    })
}

/// Verification report for a candidate exceptional sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceReport {
    /// first violated pair, 1-based: `(i, i)` for a non-unit diagonal,
    /// `(i, j)` with `i > j` for nonzero lower-triangular pairing
    pub failure: Option<(usize, usize)>,
    /// the sequence has full length `rk G`
    pub full_length: bool,
    /// full length only: the vectors form a Z-basis (then G is unimodular)
    pub is_basis: Option<bool>,
}

impl SequenceReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn is_exceptional_sequence(l: &Pseudolattice, vectors: &[Vec<BigInt>]) -> SequenceReport {
    let mut failure = None;
    'scan: for i in 0..vectors.len() {
        if !l.chi(&vectors[i], &vectors[i]).is_one() {
            failure = Some((i + 1, i + 1));
            break 'scan;
        }
        for j in 0..i {
            if !l.chi(&vectors[i], &vectors[j]).is_zero() {
                failure = Some((i + 1, j + 1));
                break 'scan;
            }
        }
    }
    let full_length = vectors.len() == l.rank();
    let is_basis = if full_length && failure.is_none() {
        let coord = IntMatrix::from_rows(vectors.to_vec());
        Some(coord.det().magnitude().is_one())
    } else {
        None
    };
    SequenceReport { failure, full_length, is_basis }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
}

/// `L_e(v) = v - chi(e, v) e` and `R_e(v) = v - chi(v, e) e`.
pub fn mutate_element(
    l: &Pseudolattice,
    e: &[BigInt],
    v: &[BigInt],
    dir: Direction,
) -> Result<Vec<BigInt>, ExceptionalError> {
    if !l.chi(e, e).is_one() {
        return Err(ExceptionalError::NotExceptional);
    }
    let c = match dir {
        Direction::Left => l.chi(e, v),
        Direction::Right => l.chi(v, e),
    };
    Ok(vec_sub(v, &vec_scale(&c, e)))
}

/// One replayable step: an elementary mutation at a 1-based adjacent-pair
/// index, or a sign flip of a single element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MutationStep {
    Left(usize),
    Right(usize),
    Flip(usize),
}

impl fmt::Display for MutationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MutationStep::Left(i) => write!(f, "L{i}"),
            MutationStep::Right(i) => write!(f, "R{i}"),
            MutationStep::Flip(i) => write!(f, "F{i}"),
        }
    }
}

/// Comma-separated mutation word, e.g. `L2,R1,F3`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MutationWord(pub Vec<MutationStep>);

impl MutationWord {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for MutationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordParseError(pub String);

impl fmt::Display for WordParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad mutation word token: {}", self.0)
    }
}

impl FromStr for MutationWord {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(MutationWord(Vec::new()));
        }
        let mut steps = Vec::new();
        for token in s.split(',') {
            let token = token.trim();
            let (kind, idx) = token.split_at(1.min(token.len()));
            let i: usize = idx.parse().map_err(|_| WordParseError(token.to_string()))?;
            if i == 0 {
                return Err(WordParseError(token.to_string()));
            }
            steps.push(match kind {
                "L" => MutationStep::Left(i),
                "R" => MutationStep::Right(i),
                "F" => MutationStep::Flip(i),
                _ => return Err(WordParseError(token.to_string())),
            });
        }
        Ok(MutationWord(steps))
    }
}

/// Elementary mutation of an adjacent pair, 1-based index `1 <= i <= n-1`:
/// left replaces `(e_i, e_{i+1})` by `(L_{e_i} e_{i+1}, e_i)`, right by
/// `(e_{i+1}, R_{e_{i+1}} e_i)`. The result is verified exceptional.
pub fn mutate_basis(
    l: &Pseudolattice,
    basis: &ExceptionalBasis,
    i: usize,
    dir: Direction,
) -> Result<ExceptionalBasis, ExceptionalError> {
    let n = basis.len();
    if i == 0 || i >= n {
        return Err(ExceptionalError::BadIndex(i));
    }
    let a = basis.vector(i - 1).to_vec();
    let b = basis.vector(i).to_vec();
    let mut vectors = basis.vectors().to_vec();
    match dir {
        Direction::Left => {
            vectors[i - 1] = mutate_element(l, &a, &b, Direction::Left)?;
            vectors[i] = a;
        }
        Direction::Right => {
            vectors[i] = mutate_element(l, &b, &a, Direction::Right)?;
            vectors[i - 1] = b;
        }
    }
    ExceptionalBasis::new(l, vectors).map_err(|_| ExceptionalError::MutationBrokeSequence)
}

pub fn apply_step(
    l: &Pseudolattice,
    basis: &ExceptionalBasis,
    step: MutationStep,
) -> Result<ExceptionalBasis, ExceptionalError> {
    match step {
        MutationStep::Left(i) => mutate_basis(l, basis, i, Direction::Left),
        MutationStep::Right(i) => mutate_basis(l, basis, i, Direction::Right),
        MutationStep::Flip(i) => {
            let n = basis.len();
            if i == 0 || i > n {
                return Err(ExceptionalError::BadIndex(i));
            }
            let mut vectors = basis.vectors().to_vec();
            vectors[i - 1] = vec_neg(&vectors[i - 1]);
            ExceptionalBasis::new(l, vectors).map_err(|_| ExceptionalError::MutationBrokeSequence)
        }
    }
}

pub fn apply_word(
    l: &Pseudolattice,
    basis: &ExceptionalBasis,
    word: &MutationWord,
) -> Result<ExceptionalBasis, ExceptionalError> {
    let mut current = basis.clone();
    for &step in &word.0 {
        current = apply_step(l, &current, step)?;
    }
    Ok(current)
}

/// Element `e_k` of the helix through a full exceptional basis, any
/// `k` in `Z`: `e_i = S(e_{i+n})`, so indices below 1 apply `S` and
/// indices above `n` apply `S^{-1}`.
pub fn helix_element(
    l: &Pseudolattice,
    basis: &ExceptionalBasis,
    k: i64,
) -> Result<Vec<BigInt>, ExceptionalError> {
    let n = basis.len() as i64;
    assert_eq!(n as usize, l.rank(), "helix needs a full basis");
    if k >= 1 && k <= n {
        return Ok(basis.vector((k - 1) as usize).to_vec());
    }
    let serre = l.serre_operator().ok_or(ExceptionalError::NoSerreOperator)?;
    let serre_inv = l.serre_inverse().ok_or(ExceptionalError::NoSerreOperator)?;
    let mut idx = k;
    let mut v;
    if k < 1 {
        let shifts = (1 - k + n - 1) / n;
        idx = k + shifts * n;
        v = basis.vector((idx - 1) as usize).to_vec();
        for _ in 0..shifts {
            v = serre.mul_vec(&v);
        }
    } else {
        let shifts = (k - n + n - 1) / n;
        idx -= shifts * n;
        v = basis.vector((idx - 1) as usize).to_vec();
        for _ in 0..shifts {
            v = serre_inv.mul_vec(&v);
        }
    }
    Ok(v)
}

/// Norm of a basis relative to a surface structure: the sum of squared
/// ranks.
pub fn basis_norm(s: &SurfaceStructure, basis: &ExceptionalBasis) -> BigInt {
    basis
        .vectors()
        .iter()
        .map(|v| {
            let r = s.rank_of(v);
            &r * &r
        })
        .sum()
}

#[derive(Debug, Clone, Copy)]
pub struct DescentOptions {
    /// breadth-first depth for exploring equal-norm plateaus
    pub plateau_depth: usize,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions { plateau_depth: 3 }
    }
}

/// Greedy steepest descent of the norm over the `2(n-1)` elementary
/// mutations; ties broken by smaller index, left before right. At a local
/// minimum a breadth-first search over the equal-norm plateau (up to
/// `plateau_depth`) either escapes to a strictly smaller norm or settles
/// on the plateau basis with the lexicographically least rank profile.
pub fn norm_minimize(
    s: &SurfaceStructure,
    basis: &ExceptionalBasis,
    opts: DescentOptions,
) -> (ExceptionalBasis, MutationWord) {
    let l = s.lattice();
    let mut current = basis.clone();
    let mut word: Vec<MutationStep> = Vec::new();
    loop {
        let cur_norm = basis_norm(s, &current);
        let mut best: Option<(BigInt, MutationStep, ExceptionalBasis)> = None;
        for step in elementary_steps(current.len()) {
            let cand = apply_step(l, &current, step).expect("elementary mutation is defined");
            let norm = basis_norm(s, &cand);
            if norm < cur_norm && best.as_ref().map(|(b, _, _)| norm < *b).unwrap_or(true) {
                best = Some((norm, step, cand));
            }
        }
        if let Some((_, step, next)) = best {
            word.push(step);
            current = next;
            continue;
        }
        match plateau_probe(s, &current, &cur_norm, opts.plateau_depth) {
            PlateauOutcome::Escape(path) => {
                for &step in &path {
                    current = apply_step(l, &current, step).expect("replay");
                }
                word.extend(path);
            }
            PlateauOutcome::Settle(path) => {
                for &step in &path {
                    current = apply_step(l, &current, step).expect("replay");
                }
                word.extend(path);
                return (current, MutationWord(word));
            }
        }
    }
}

fn elementary_steps(n: usize) -> impl Iterator<Item = MutationStep> {
    (1..n).flat_map(|i| [MutationStep::Left(i), MutationStep::Right(i)])
}

enum PlateauOutcome {
    /// path whose final step strictly decreases the norm
    Escape(Vec<MutationStep>),
    /// no escape within depth; path to the least rank profile on the plateau
    Settle(Vec<MutationStep>),
}

fn plateau_probe(
    s: &SurfaceStructure,
    start: &ExceptionalBasis,
    level: &BigInt,
    depth: usize,
) -> PlateauOutcome {
    let l = s.lattice();
    let key = |b: &ExceptionalBasis| format!("{:?}", b.vectors());
    let profile = |b: &ExceptionalBasis| -> Vec<BigInt> {
        b.vectors().iter().map(|v| s.rank_of(v).abs()).collect()
    };
    let mut visited: HashMap<String, Vec<MutationStep>> = HashMap::new();
    let mut queue: VecDeque<(ExceptionalBasis, Vec<MutationStep>)> = VecDeque::new();
    visited.insert(key(start), Vec::new());
    queue.push_back((start.clone(), Vec::new()));
    let mut best_profile = profile(start);
    let mut best_path: Vec<MutationStep> = Vec::new();
    while let Some((node, path)) = queue.pop_front() {
        if path.len() >= depth {
            continue;
        }
        for step in elementary_steps(node.len()) {
            let cand = apply_step(l, &node, step).expect("elementary mutation is defined");
            let norm = basis_norm(s, &cand);
            let mut cand_path = path.clone();
            cand_path.push(step);
            if norm < *level {
                return PlateauOutcome::Escape(cand_path);
            }
            if norm == *level {
                let k = key(&cand);
                if !visited.contains_key(&k) {
                    visited.insert(k, cand_path.clone());
                    let p = profile(&cand);
                    if p < best_profile {
                        best_profile = p;
                        best_path = cand_path.clone();
                    }
                    queue.push_back((cand, cand_path));
                }
            }
        }
    }
    PlateauOutcome::Settle(best_path)
}

// ---------------------------------------------------------------------------
// Rank reduction pipeline.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceError {
    GeometricityRequired,
    /// a reduced basis violated the guaranteed 0/1 pattern
    RankPatternViolation(String),
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::GeometricityRequired => write!(f, "geometricity required"),
            ReduceError::RankPatternViolation(s) => write!(f, "rank pattern violation: {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceStatus {
    /// every rank equals one
    AllRanksOne,
    /// nonzero defect: stopped at the zeros-then-ones pattern
    StoppedAtZeroOnePattern,
}

#[derive(Debug, Clone)]
pub struct ReduceReport {
    /// number of rank-zero elements after the sorting stage
    pub zero_count: usize,
    /// number of rank-one elements (3 or 4)
    pub nonzero_count: usize,
    pub stage4_ran: bool,
    pub status: ReduceStatus,
    pub final_ranks: Vec<BigInt>,
}

/// Stages shared by rank reduction and the minimal model program:
/// norm-minimize, bubble rank-zero elements to the front (right mutations
/// of (nonzero, zero) pairs preserve the nonzero rank), then flip signs so
/// every nonzero rank is positive. Returns the basis, the replayable word,
/// and the number of leading zero ranks.
pub fn normalize_to_zero_one(
    s: &SurfaceStructure,
    basis: &ExceptionalBasis,
) -> Result<(ExceptionalBasis, MutationWord, usize), ReduceError> {
    let l = s.lattice();
    let (mut current, mut word) = norm_minimize(s, basis, DescentOptions::default());

    loop {
        let ranks = current.ranks(s);
        let swap_at = (1..current.len())
            .find(|&i| !ranks[i - 1].is_zero() && ranks[i].is_zero());
        match swap_at {
            Some(i) => {
                current = mutate_basis(l, &current, i, Direction::Right)
                    .map_err(|e| ReduceError::RankPatternViolation(e.to_string()))?;
                word.0.push(MutationStep::Right(i));
            }
            None => break,
        }
    }

    let ranks = current.ranks(s);
    for (i, r) in ranks.iter().enumerate() {
        if r.is_negative() {
            current = apply_step(l, &current, MutationStep::Flip(i + 1))
                .map_err(|e| ReduceError::RankPatternViolation(e.to_string()))?;
            word.0.push(MutationStep::Flip(i + 1));
        }
    }
    let zero_count = current
        .ranks(s)
        .iter()
        .take_while(|r| r.is_zero())
        .count();
    Ok((current, word, zero_count))
}

/// Transform an exceptional basis of a geometric lattice into the
/// canonical rank pattern: norm-minimize, bubble rank-zero elements to the
/// front, make nonzero ranks `+1`, and, when the defect vanishes,
/// eliminate the zero-rank elements entirely.
pub fn reduce_ranks(
    s: &SurfaceStructure,
    basis: &ExceptionalBasis,
) -> Result<(ExceptionalBasis, MutationWord, ReduceReport), ReduceError> {
    if !s.is_geometric() {
        return Err(ReduceError::GeometricityRequired);
    }
    let l = s.lattice();
    let (mut current, mut word, zero_count) = normalize_to_zero_one(s, basis)?;
    let ranks = current.ranks(s);
    let nonzero_count = current.len() - zero_count;
    if !ranks[zero_count..].iter().all(|r| r.is_one()) {
        return Err(ReduceError::RankPatternViolation(format!(
            "expected zeros then ones, got {ranks:?}"
        )));
    }
    if !(3..=4).contains(&nonzero_count) {
        return Err(ReduceError::RankPatternViolation(format!(
            "expected 3 or 4 nonzero ranks, got {nonzero_count}"
        )));
    }

    // Stage 4: with zero defect, each leading zero admits a right mutation
    // through its rank-one neighbor whose new rank is forced to be a unit.
    let defect_zero = s
        .defect()
        .map(|d| d.defect.is_zero())
        .unwrap_or(false);
    let mut stage4_ran = false;
    if defect_zero {
        let mut k = zero_count;
        while k > 0 {
            stage4_ran = true;
            current = mutate_basis(l, &current, k, Direction::Right)
                .map_err(|e| ReduceError::RankPatternViolation(e.to_string()))?;
            word.0.push(MutationStep::Right(k));
            let r = s.rank_of(current.vector(k));
            if r.magnitude() != BigInt::one().magnitude() {
                return Err(ReduceError::RankPatternViolation(format!(
                    "stage-4 rank not a unit: {r}"
                )));
            }
            if r.is_negative() {
                current = apply_step(l, &current, MutationStep::Flip(k + 1))
                    .map_err(|e| ReduceError::RankPatternViolation(e.to_string()))?;
                word.0.push(MutationStep::Flip(k + 1));
            }
            k -= 1;
        }
    }

    let final_ranks = current.ranks(s);
    let status = if final_ranks.iter().all(|r| r.is_one()) {
        ReduceStatus::AllRanksOne
    } else {
        ReduceStatus::StoppedAtZeroOnePattern
    };
    let report = ReduceReport {
        zero_count,
        nonzero_count,
        stage4_ran,
        status,
        final_ranks,
    };
    Ok((current, MutationWord(word.0), report))
}
