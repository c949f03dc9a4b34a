//! Contraction and the minimal model program for surface-like
//! pseudolattices, classification of the minimal ones, and the numerical
//! existence criterion for exceptional bases.
//!
//! Contraction passes to the right orthogonal of a rank-zero exceptional
//! vector, the lattice analogue of blowing down a (-1)-curve. Iterating
//! drives any surface-like pseudolattice to a minimal one; for geometric
//! lattices the defect never decreases along the way.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exceptional::{
    apply_step, normalize_to_zero_one, norm_minimize, DescentOptions, ExceptionalBasis,
    MutationStep, MutationWord, ReduceError,
};
use crate::lattice::{
    coords_in_row_basis, Minimality, Pseudolattice, StructureError, SurfaceStructure,
};
use crate::linalg::{row_hermite_normal_form, vec_scale, vec_sub, IntMatrix};
use crate::models::ModelSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractError {
    NotRankZeroExceptional,
    Structure(StructureError),
    /// a contraction invariant failed (internal consistency)
    Inconsistent(String),
}

impl std::fmt::Display for ContractError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ContractError::NotRankZeroExceptional => {
                write!(f, "contraction needs a rank-zero exceptional vector")
            }
            ContractError::Structure(e) => write!(f, "contracted lattice rejected: {e}"),
            ContractError::Inconsistent(s) => write!(f, "contraction inconsistency: {s}"),
        }
    }
}

/// Record of one contraction: the vector, its pairing with the canonical
/// class, defects on both sides (when defined), and the basis of the
/// contracted sublattice in the old coordinates.
#[derive(Debug, Clone)]
pub struct ContractionStep {
    pub contracted: Vec<BigInt>,
    pub k_dot_e: BigInt,
    pub defect_before: Option<BigInt>,
    pub defect_after: Option<BigInt>,
    pub basis_rows: IntMatrix,
}

/// Contract along `e` with `r(e) = 0`, `chi(e, e) = 1`: the new lattice is
/// the right orthogonal of `e`, the point-like element carries over, and
/// `v -> v - chi(e, v) e` projects onto it. Every structural invariant is
/// re-verified and violations are surfaced as errors.
pub fn contract(
    s: &SurfaceStructure,
    e: &[BigInt],
) -> Result<(SurfaceStructure, ContractionStep), ContractError> {
    let l = s.lattice();
    let n = l.rank();
    if e.len() != n || !s.rank_of(e).is_zero() || !l.chi(e, e).is_one() {
        return Err(ContractError::NotRankZeroExceptional);
    }
    let e_ns = s.project(e);
    debug_assert_eq!(
        s.q_rat(&e_ns, &e_ns),
        BigRational::from(BigInt::from(-1)),
        "rank-zero exceptional vectors have square -1"
    );

    // G_e is the image lattice of the projection along e.
    let images = IntMatrix::from_rows(
        (0..n)
            .map(|i| {
                let b = crate::lattice::unit_vector(n, i);
                let c = l.chi(e, &b);
                vec_sub(&b, &vec_scale(&c, e))
            })
            .collect(),
    );
    let basis_rows = row_hermite_normal_form(&images);
    if basis_rows.rows() != n - 1 {
        return Err(ContractError::Inconsistent(format!(
            "projection image has rank {}, expected {}",
            basis_rows.rows(),
            n - 1
        )));
    }
    let gram = IntMatrix::from_fn(n - 1, n - 1, |i, j| {
        l.chi(&basis_rows.row(i), &basis_rows.row(j))
    });
    let point = coords_in_row_basis(&basis_rows, s.point())
        .ok_or_else(|| ContractError::Inconsistent("point does not lie in e-orthogonal".into()))?;
    let lattice = Pseudolattice::new(gram)
        .map_err(|e| ContractError::Inconsistent(format!("contracted gram: {e}")))?;
    let after = SurfaceStructure::new(lattice, point).map_err(ContractError::Structure)?;

    let k_dot_e_rat = s.q_rat(s.canonical_class(), &e_ns);
    if !k_dot_e_rat.is_integer() {
        return Err(ContractError::Inconsistent(format!(
            "K.e = {k_dot_e_rat} is not an integer"
        )));
    }
    let k_dot_e = k_dot_e_rat.to_integer();

    // invariants of the contraction
    if after.ns_rank() + 1 != s.ns_rank() {
        return Err(ContractError::Inconsistent("NS rank did not drop by one".into()));
    }
    // K = K' + (-K.e) e with K' orthogonal to e and e^2 = -1
    let expected = s.k_squared() + BigRational::from(&k_dot_e * &k_dot_e);
    if after.k_squared() != expected {
        return Err(ContractError::Inconsistent(format!(
            "K^2 after contraction is {}, expected {}",
            after.k_squared(),
            expected
        )));
    }
    if after.is_unimodular() != s.is_unimodular() {
        return Err(ContractError::Inconsistent("unimodularity not preserved".into()));
    }
    if s.is_geometric() {
        if (&k_dot_e % BigInt::from(2)).is_zero() {
            return Err(ContractError::Inconsistent(format!("K.e = {k_dot_e} is even")));
        }
        if !after.is_geometric() {
            return Err(ContractError::Inconsistent("geometricity not inherited".into()));
        }
    }
    let defect_before = s.defect().ok().map(|d| d.defect);
    let defect_after = after.defect().ok().map(|d| d.defect);
    if let (Some(before), Some(after_d)) = (&defect_before, &defect_after) {
        if *before != after_d + (BigInt::one() - &k_dot_e * &k_dot_e) {
            return Err(ContractError::Inconsistent("defect relation fails".into()));
        }
    }

    let step = ContractionStep {
        contracted: e.to_vec(),
        k_dot_e,
        defect_before,
        defect_after,
        basis_rows,
    };
    Ok((after, step))
}

// ---------------------------------------------------------------------------
// Iterated minimal model program.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MmpStatus {
    Minimal,
    UnknownAtBound(u64),
}

#[derive(Debug, Clone)]
pub struct MinimalModelRun {
    pub steps: Vec<ContractionStep>,
    pub final_structure: SurfaceStructure,
    /// survives only along basis-driven contractions
    pub final_basis: Option<ExceptionalBasis>,
    /// mutation word applied to the input basis before contracting
    pub preparation: Option<MutationWord>,
    pub status: MmpStatus,
}

#[derive(Debug, Clone)]
pub enum MmpError {
    Contract(ContractError),
    Reduce(ReduceError),
    /// images of the surviving basis vectors failed to stay exceptional
    BasisLost(String),
}

impl std::fmt::Display for MmpError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MmpError::Contract(e) => write!(f, "{e}"),
            MmpError::Reduce(e) => write!(f, "{e}"),
            MmpError::BasisLost(s) => write!(f, "basis lost under contraction: {s}"),
        }
    }
}

impl From<ContractError> for MmpError {
    fn from(e: ContractError) -> Self {
        MmpError::Contract(e)
    }
}

/// Iterate contractions until minimality is certified or the search bound
/// is exhausted. With a basis, rank-zero vectors are produced by the
/// norm-descent stages and the basis survives into the final lattice;
/// without one, witnesses `q(v, v) = -1` are searched in NS coordinates.
pub fn minimal_model(
    s: &SurfaceStructure,
    basis: Option<&ExceptionalBasis>,
    bound: u64,
) -> Result<MinimalModelRun, MmpError> {
    let mut steps = Vec::new();
    let mut current = s.clone();
    let mut surviving: Option<ExceptionalBasis> = None;
    let mut preparation = None;

    if let Some(b) = basis {
        let (sorted, word, _) = normalize_to_zero_one(&current, b).map_err(MmpError::Reduce)?;
        preparation = Some(word);
        let mut b = sorted;
        while !b.is_empty() && current.rank_of(b.vector(0)).is_zero() {
            let e = b.vector(0).to_vec();
            let (next, step) = contract(&current, &e)?;
            let l = current.lattice();
            let mut new_vectors = Vec::with_capacity(b.len() - 1);
            for j in 1..b.len() {
                let v = b.vector(j);
                let c = l.chi(&e, v);
                let image = vec_sub(v, &vec_scale(&c, &e));
                let coords = coords_in_row_basis(&step.basis_rows, &image)
                    .ok_or_else(|| MmpError::BasisLost("image has no integral coordinates".into()))?;
                new_vectors.push(coords);
            }
            b = ExceptionalBasis::new(next.lattice(), new_vectors)
                .map_err(|e| MmpError::BasisLost(e.to_string()))?;
            steps.push(step);
            current = next;
        }
        surviving = Some(b);
    }

    let status = loop {
        match current.minimality(bound) {
            Minimality::Yes => break MmpStatus::Minimal,
            Minimality::UnknownAtBound(b) => break MmpStatus::UnknownAtBound(b),
            Minimality::No(witness) => {
                let e = current.lift_ns(&witness);
                let (next, step) = contract(&current, &e)?;
                steps.push(step);
                current = next;
                surviving = None;
            }
        }
    };

    Ok(MinimalModelRun {
        steps,
        final_structure: current,
        final_basis: surviving,
        preparation,
        status,
    })
}

// ---------------------------------------------------------------------------
// Classification of minimal geometric pseudolattices.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalKind {
    P2,
    /// the matched shift parameter before normalizing it to zero
    P1xP1 { c_found: BigInt },
    Unknown { diagnostics: String },
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub kind: MinimalKind,
    /// word taking the input basis to the canonical representative
    pub word: MutationWord,
    pub normalized: ExceptionalBasis,
    pub k_squared: BigRational,
    /// `12 - n` when a model matched
    pub expected_k_squared: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    /// norm descent produced a rank-zero element: contract first
    RanksNotNonzero,
    NotFullBasis,
}

impl std::fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassifyError::RanksNotNonzero => {
                write!(f, "ranks not all nonzero after minimization; contract first")
            }
            ClassifyError::NotFullBasis => write!(f, "classification needs a full basis"),
        }
    }
}

fn p2_gram() -> IntMatrix {
    IntMatrix::from_i64(&[&[1, 3, 6], &[0, 1, 3], &[0, 0, 1]])
}

fn p1xp1_gram(c: &BigInt) -> IntMatrix {
    let base = ModelSpec::P1xP1 { c: 0 }.build().unwrap().lattice.gram().clone();
    let two_c = BigInt::from(2) * c;
    IntMatrix::from_fn(4, 4, |i, j| match (i, j) {
        (0, 2) | (0, 3) | (1, 2) | (1, 3) => base.at(i, j) + &two_c,
        _ => base.at(i, j).clone(),
    })
}

/// Does the Gram match the quadric pattern for some shift `c`?
fn match_p1xp1_shift(gram: &IntMatrix) -> Option<BigInt> {
    let entry = gram.at(1, 2);
    if (entry % BigInt::from(2)).is_zero() {
        let c = entry / BigInt::from(2);
        if *gram == p1xp1_gram(&c) {
            return Some(c);
        }
    }
    None
}

/// Flip the sign of every negative-rank vector, appending steps.
fn flip_to_positive(
    s: &SurfaceStructure,
    mut basis: ExceptionalBasis,
    word: &mut Vec<MutationStep>,
) -> ExceptionalBasis {
    let l = s.lattice();
    loop {
        let ranks = basis.ranks(s);
        match ranks.iter().position(|r| r.is_negative()) {
            Some(i) => {
                basis = apply_step(l, &basis, MutationStep::Flip(i + 1)).expect("flip");
                word.push(MutationStep::Flip(i + 1));
            }
            None => return basis,
        }
    }
}

/// Decide whether the lattice of a norm-minimal nonzero-rank basis is the
/// plane or the quadric, by canonical-form comparison after mutation
/// normalization. For `n = 4` all four cyclic helix rotations are tried
/// and the shift parameter is then mutated down to zero.
pub fn classify_minimal(
    s: &SurfaceStructure,
    basis: &ExceptionalBasis,
) -> Result<Classification, ClassifyError> {
    let l = s.lattice();
    if basis.len() != l.rank() {
        return Err(ClassifyError::NotFullBasis);
    }
    let (minimized, word) = norm_minimize(s, basis, DescentOptions::default());
    if minimized.ranks(s).iter().any(|r| r.is_zero()) {
        return Err(ClassifyError::RanksNotNonzero);
    }
    let mut word = word.0;
    let minimized = flip_to_positive(s, minimized, &mut word);
    let k_squared = s.k_squared();
    let n = minimized.len();

    if minimized.ranks(s).iter().any(|r| !r.is_one()) {
        return Ok(Classification {
            kind: MinimalKind::Unknown {
                diagnostics: format!("ranks {:?} are not all units", minimized.ranks(s)),
            },
            word: MutationWord(word),
            normalized: minimized,
            k_squared,
            expected_k_squared: None,
        });
    }

    match n {
        3 => {
            if *minimized.gram() == p2_gram() {
                Ok(Classification {
                    kind: MinimalKind::P2,
                    word: MutationWord(word),
                    normalized: minimized,
                    k_squared,
                    expected_k_squared: Some(BigInt::from(9)),
                })
            } else {
                Ok(Classification {
                    kind: MinimalKind::Unknown {
                        diagnostics: "rank-3 Gram does not match the plane".into(),
                    },
                    word: MutationWord(word),
                    normalized: minimized,
                    k_squared,
                    expected_k_squared: None,
                })
            }
        }
        4 => {
            // try each cyclic rotation (e_2, e_3, e_4, S^{-1} e_1), realized
            // by the elementary word R1 R2 R3
            let mut candidate = minimized.clone();
            let mut candidate_word = word.clone();
            for _rotation in 0..4 {
                if let Some(c_found) = match_p1xp1_shift(candidate.gram()) {
                    let (normalized, extra) = shift_to_zero(s, candidate, &c_found);
                    candidate_word.extend(extra);
                    debug_assert_eq!(*normalized.gram(), p1xp1_gram(&BigInt::zero()));
                    return Ok(Classification {
                        kind: MinimalKind::P1xP1 { c_found },
                        word: MutationWord(candidate_word),
                        normalized,
                        k_squared,
                        expected_k_squared: Some(BigInt::from(8)),
                    });
                }
                for step in [MutationStep::Right(1), MutationStep::Right(2), MutationStep::Right(3)] {
                    candidate = apply_step(l, &candidate, step).expect("rotation");
                    candidate_word.push(step);
                }
                candidate = flip_to_positive(s, candidate, &mut candidate_word);
            }
            Ok(Classification {
                kind: MinimalKind::Unknown {
                    diagnostics: "rank-4 Gram matches no quadric shift in any rotation".into(),
                },
                word: MutationWord(word),
                normalized: minimized,
                k_squared,
                expected_k_squared: None,
            })
        }
        _ => Ok(Classification {
            kind: MinimalKind::Unknown {
                diagnostics: format!("rank {n} is not 3 or 4"),
            },
            word: MutationWord(word),
            normalized: minimized,
            k_squared,
            expected_k_squared: None,
        }),
    }
}

/// Mutate the quadric shift parameter to zero: a left mutation at the
/// third pair lowers `c` by one, a right mutation raises it, each followed
/// by a sign flip of the moved vector.
fn shift_to_zero(
    s: &SurfaceStructure,
    mut basis: ExceptionalBasis,
    c: &BigInt,
) -> (ExceptionalBasis, Vec<MutationStep>) {
    let l = s.lattice();
    let mut word = Vec::new();
    let mut c = c.clone();
    while !c.is_zero() {
        let step = if c.is_positive() {
            MutationStep::Left(3)
        } else {
            MutationStep::Right(3)
        };
        basis = apply_step(l, &basis, step).expect("shift");
        word.push(step);
        basis = flip_to_positive(s, basis, &mut word);
        if c.is_positive() {
            c -= 1;
        } else {
            c += 1;
        }
        debug_assert_eq!(match_p1xp1_shift(basis.gram()), Some(c.clone()));
    }
    (basis, word)
}

// ---------------------------------------------------------------------------
// Existence criterion.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionCase {
    /// `n = 3` and `K = -3H`
    P2Case,
    /// `n = 4`, NS even and `K = -2H`
    P1xP1Case,
    /// `n >= 4`, NS odd and `K` primitive
    BlowupCase,
    NoCase,
}

#[derive(Debug, Clone)]
pub struct CriterionVerdict {
    pub case: CriterionCase,
    pub n: usize,
    pub ns_even: bool,
    pub k_primitive: bool,
    pub k_divisible_by_three: bool,
    pub k_divisible_by_two: bool,
    /// a vector with `r(v) = 1` and `chi(v, v) = 1`
    pub unit_vector: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CriterionError {
    NotUnimodular,
    NotGeometric,
    NonzeroDefect(BigInt),
    RankTooSmall(usize),
    DoesNotRepresentOne,
}

impl std::fmt::Display for CriterionError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CriterionError::NotUnimodular => write!(f, "hypothesis unmet: not unimodular"),
            CriterionError::NotGeometric => write!(f, "hypothesis unmet: not geometric"),
            CriterionError::NonzeroDefect(d) => {
                write!(f, "hypothesis unmet: defect {d} is nonzero")
            }
            CriterionError::RankTooSmall(n) => {
                write!(f, "hypothesis unmet: rank {n} is less than 3")
            }
            CriterionError::DoesNotRepresentOne => {
                write!(f, "hypothesis unmet: does not represent 1 by a rank-1 vector")
            }
        }
    }
}

/// The numerical existence criterion: for a unimodular geometric
/// pseudolattice of zero defect and rank at least 3 that represents 1 by
/// a rank-1 vector, an exceptional basis exists exactly in the three cases
/// distinguished by `n`, the parity of NS, and the divisibility of `K`.
pub fn vial_criterion(s: &SurfaceStructure) -> Result<CriterionVerdict, CriterionError> {
    if !s.is_unimodular() {
        return Err(CriterionError::NotUnimodular);
    }
    if !s.is_geometric() {
        return Err(CriterionError::NotGeometric);
    }
    let defect = s.defect().expect("unimodular").defect;
    if !defect.is_zero() {
        return Err(CriterionError::NonzeroDefect(defect));
    }
    let n = s.ambient_rank();
    if n < 3 {
        return Err(CriterionError::RankTooSmall(n));
    }

    // r is surjective for unimodular lattices: solve r(v) = 1 exactly.
    let rank_row = IntMatrix::from_rows(vec![s
        .lattice()
        .gram()
        .mul_vec(s.point())]);
    let snf = crate::linalg::smith_normal_form(&rank_row);
    debug_assert!(snf.d.at(0, 0).is_one(), "rank functional must be surjective");
    let mut v = snf.v.col(0);
    if s.rank_of(&v).is_negative() {
        v = v.iter().map(|x| -x).collect();
    }
    debug_assert!(s.rank_of(&v).is_one());
    let chi_vv = s.lattice().chi(&v, &v);
    if ((&chi_vv - BigInt::one()) % BigInt::from(2)).is_zero() {
        // chi(v + t p, v + t p) = chi(v, v) + 2 t
        let t = (BigInt::one() - &chi_vv) / BigInt::from(2);
        for (out, p) in v.iter_mut().zip(s.point()) {
            *out += &t * p;
        }
        debug_assert!(s.lattice().chi(&v, &v).is_one());
    } else {
        return Err(CriterionError::DoesNotRepresentOne);
    }

    let k = s.ns_rank();
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let ns_even = (0..k).all(|i| (s.ns_gram().at(i, i) % &two).is_zero());
    let k_int: Vec<BigInt> = s.canonical_class().iter().map(|x| x.to_integer()).collect();
    let k_gcd = k_int.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let k_primitive = k_gcd.is_one();
    let k_divisible_by_three = k_int.iter().all(|x| (x % &three).is_zero());
    let k_divisible_by_two = k_int.iter().all(|x| (x % &two).is_zero());

    let case = if n == 3 && k_divisible_by_three {
        CriterionCase::P2Case
    } else if n == 4 && ns_even && k_divisible_by_two {
        CriterionCase::P1xP1Case
    } else if n >= 4 && !ns_even && k_primitive {
        CriterionCase::BlowupCase
    } else {
        CriterionCase::NoCase
    };

    Ok(CriterionVerdict {
        case,
        n,
        ns_even,
        k_primitive,
        k_divisible_by_three,
        k_divisible_by_two,
        unit_vector: v,
    })
}
