//! Pseudolattices and surface-like structures.
//!
//! A pseudolattice is a nondegenerate integer bilinear form `chi` on `Z^n`,
//! generally neither symmetric nor skew. A surface-like structure is a
//! choice of point-like vector `p` (primitive, isotropic, central for the
//! skew part, with `chi` symmetric on `p`-orthogonal). From it we derive
//! the rank functional, the Neron-Severi lattice with its intersection
//! form `q = -chi`, the canonical class, and the defect.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::{
    self, complete_primitive_row, dot, is_primitive, normalize_sign, saturated_kernel,
    shell_vectors, signature, solve_rational, IntMatrix, RatMatrix, RatVector, Signature,
};

/// A free abelian group of finite rank with a nondegenerate bilinear form,
/// stored as the Gram matrix `X[i][j] = chi(b_i, b_j)`.
#[derive(Clone)]
pub struct Pseudolattice {
    gram: IntMatrix,
    name: Option<String>,
}

impl std::fmt::Debug for Pseudolattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Pseudolattice({:?}, {:?})", self.name, self.gram)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    NotSquare,
    Degenerate,
}

impl std::fmt::Display for LatticeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LatticeError::NotSquare => write!(f, "gram matrix must be square"),
            LatticeError::Degenerate => write!(f, "bilinear form is degenerate"),
        }
    }
}

impl Pseudolattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_square() {
            return Err(LatticeError::NotSquare);
        }
        if gram.det().is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(Pseudolattice { gram, name: None })
    }

    pub fn named(gram: IntMatrix, name: impl Into<String>) -> Result<Self, LatticeError> {
        let mut l = Self::new(gram)?;
        l.name = Some(name.into());
        Ok(l)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn chi(&self, v: &[BigInt], w: &[BigInt]) -> BigInt {
        self.gram.bilinear(v, w)
    }

    pub fn chi_rat(&self, v: &[BigRational], w: &[BigRational]) -> BigRational {
        self.gram.bilinear_rat(v, w)
    }

    /// Skew-symmetrization `X - X^T`.
    pub fn chi_minus(&self) -> IntMatrix {
        self.gram.sub(&self.gram.transpose())
    }

    pub fn is_unimodular(&self) -> bool {
        self.gram.det().magnitude().is_one()
    }

    /// Serre operator `S = X^{-1} X^T` when integral (always for
    /// unimodular lattices); satisfies `chi(v, w) = chi(w, S v)`.
    pub fn serre_operator(&self) -> Option<IntMatrix> {
        let inv = self.gram.inverse_rational()?;
        inv.mul(&RatMatrix::from_int(&self.gram.transpose())).to_int()
    }

    /// Inverse Serre operator `(X^T)^{-1} X` when integral.
    pub fn serre_inverse(&self) -> Option<IntMatrix> {
        let inv = self.gram.transpose().inverse_rational()?;
        inv.mul(&RatMatrix::from_int(&self.gram)).to_int()
    }
}

// ---------------------------------------------------------------------------
// Surface-like detection.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceCase {
    /// `chi` symmetric; point-like vectors are the primitive isotropic ones.
    Symmetric,
    /// `rank(chi_-) = 2`; point-like vectors span the kernel of the
    /// restriction of `chi` to `Ker chi_-`.
    SkewRankTwo,
}

/// Result of point-like search. With `candidates.len() > 1` no canonical
/// choice exists and the caller must pick one.
#[derive(Debug, Clone)]
pub struct Detection {
    pub case: SurfaceCase,
    pub candidates: Vec<Vec<BigInt>>,
    /// Rank of `Ker(chi | Ker chi_-)` in the skew-rank-two case.
    pub kernel_rank: Option<usize>,
}

impl Detection {
    pub fn unique_point(&self) -> Option<&Vec<BigInt>> {
        if self.candidates.len() == 1 {
            self.candidates.first()
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DetectError {
    /// rank of the skew part is neither 0 nor 2
    SkewRank(usize),
    /// skew rank 2 but `chi` restricted to `Ker chi_-` is nondegenerate
    RestrictionNondegenerate,
    /// symmetric case: no isotropic vector found within the search box
    InconclusiveAtBound(u64),
    /// a kernel-derived candidate failed direct verification
    CandidateRejected,
}

impl std::fmt::Display for DetectError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DetectError::SkewRank(r) => {
                write!(f, "not surface-like: rank of the skew part is {r}, expected 0 or 2")
            }
            DetectError::RestrictionNondegenerate => write!(
                f,
                "not surface-like: restriction of chi to the skew kernel is nondegenerate"
            ),
            DetectError::InconclusiveAtBound(b) => write!(
                f,
                "inconclusive at bound {b}: symmetric form with no isotropic vector found"
            ),
            DetectError::CandidateRejected => {
                write!(f, "internal: kernel candidate failed point-like verification")
            }
        }
    }
}

/// Find point-like vectors. In the skew-rank-two case the answer is exact
/// (a kernel computation); in the symmetric case primitive isotropic
/// vectors are enumerated over the box `|x|_inf <= bound`.
pub fn detect_surface_like(l: &Pseudolattice, bound: u64) -> Result<Detection, DetectError> {
    let skew = l.chi_minus();
    let skew_rank = skew.rank();
    match skew_rank {
        0 => {
            let mut candidates = Vec::new();
            for v in shell_vectors(l.rank(), bound) {
                if is_primitive(&v) && l.chi(&v, &v).is_zero() {
                    debug_assert!(verify_point_like(l, &v).is_ok());
                    candidates.push(v);
                }
            }
            if candidates.is_empty() {
                return Err(DetectError::InconclusiveAtBound(bound));
            }
            Ok(Detection {
                case: SurfaceCase::Symmetric,
                candidates,
                kernel_rank: None,
            })
        }
        2 => {
            let ker = saturated_kernel(&skew);
            let m = ker.rows();
            let restricted = IntMatrix::from_fn(m, m, |i, j| l.chi(&ker.row(i), &ker.row(j)));
            let inner = saturated_kernel(&restricted);
            if inner.rows() == 0 {
                return Err(DetectError::RestrictionNondegenerate);
            }
            let mut candidates = Vec::new();
            for t in 0..inner.rows() {
                let mut v = vec![BigInt::zero(); l.rank()];
                for i in 0..m {
                    let ki = ker.row(i);
                    for (out, x) in v.iter_mut().zip(&ki) {
                        *out += inner.at(t, i) * x;
                    }
                }
                let v = normalize_sign(&v);
                if verify_point_like(l, &v).is_err() {
                    return Err(DetectError::CandidateRejected);
                }
                candidates.push(v);
            }
            Ok(Detection {
                case: SurfaceCase::SkewRankTwo,
                candidates,
                kernel_rank: Some(inner.rows()),
            })
        }
        r => Err(DetectError::SkewRank(r)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointError {
    WrongLength,
    NotPrimitive,
    NotIsotropic,
    NotCentral,
    SkewOnOrthogonal,
}

impl std::fmt::Display for PointError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointError::WrongLength => write!(f, "point has wrong coordinate length"),
            PointError::NotPrimitive => write!(f, "point is not primitive"),
            PointError::NotIsotropic => write!(f, "chi(p, p) != 0"),
            PointError::NotCentral => write!(f, "chi(p, -) != chi(-, p)"),
            PointError::SkewOnOrthogonal => {
                write!(f, "chi is not symmetric on the orthogonal of p")
            }
        }
    }
}

/// Direct check of the three point-like axioms plus primitivity.
pub fn verify_point_like(l: &Pseudolattice, p: &[BigInt]) -> Result<(), PointError> {
    if p.len() != l.rank() {
        return Err(PointError::WrongLength);
    }
    if !is_primitive(p) {
        return Err(PointError::NotPrimitive);
    }
    if !l.chi(p, p).is_zero() {
        return Err(PointError::NotIsotropic);
    }
    // chi(p, v) = chi(v, p) for all v  <=>  X^T p = X p
    let xp = l.gram().mul_vec(p);
    let xtp = l.gram().transpose().mul_vec(p);
    if xp != xtp {
        return Err(PointError::NotCentral);
    }
    // chi symmetric on p-perp
    let rank_row = IntMatrix::from_rows(vec![xp]);
    let perp = saturated_kernel(&rank_row);
    let skew = l.chi_minus();
    for i in 0..perp.rows() {
        for j in 0..perp.rows() {
            if !skew.bilinear(&perp.row(i), &perp.row(j)).is_zero() {
                return Err(PointError::SkewOnOrthogonal);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Surface structure: NS lattice, canonical class, invariants.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureError {
    Point(PointError),
    /// induced form on the Neron-Severi lattice is degenerate
    DegenerateNs,
    /// the defining system of the canonical class is inconsistent
    CanonicalInconsistent,
}

impl std::fmt::Display for StructureError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StructureError::Point(e) => write!(f, "not a point-like element: {e}"),
            StructureError::DegenerateNs => write!(f, "degenerate Neron-Severi form"),
            StructureError::CanonicalInconsistent => {
                write!(f, "canonical class system inconsistent")
            }
        }
    }
}

impl From<PointError> for StructureError {
    fn from(e: PointError) -> Self {
        StructureError::Point(e)
    }
}

/// A pseudolattice with a chosen point-like element and the derived data:
/// rank functional, a lifted basis of `NS = p-perp / p`, the intersection
/// form `q = -chi` on it, and the canonical class in NS coordinates.
#[derive(Clone)]
pub struct SurfaceStructure {
    /// the ambient pseudolattice
    lattice: Pseudolattice,
    point: Vec<BigInt>,
    /// row vector of the rank functional, `r(v) = rank_row . v`
    rank_row: Vec<BigInt>,
    /// lifts of the NS basis into p-perp (ambient coordinates)
    ns_lifts: Vec<Vec<BigInt>>,
    ns_gram: IntMatrix,
    /// rational projection p-perp -> NS coordinates
    projection: RatMatrix,
    canonical: RatVector,
    canonical_integral: bool,
}

impl std::fmt::Debug for SurfaceStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SurfaceStructure(lattice: {:?}, point: {:?})",
            self.lattice, self.point
        )
    }
}

impl SurfaceStructure {
    pub fn new(lattice: Pseudolattice, point: Vec<BigInt>) -> Result<Self, StructureError> {
        verify_point_like(&lattice, &point)?;
        let n = lattice.rank();
        let rank_row = lattice.gram().mul_vec(&point);

        // p-perp as a saturated sublattice, then a basis of it starting with p.
        let perp = saturated_kernel(&IntMatrix::from_rows(vec![rank_row.clone()]));
        let p_coords = integral_coords(&perp, &point).expect("point lies in its saturated orthogonal");
        let t = complete_primitive_row(&p_coords);
        let adapted = t.mul(&perp);
        debug_assert_eq!(adapted.row(0), point);
        let ns_lifts: Vec<Vec<BigInt>> = (1..adapted.rows()).map(|i| adapted.row(i)).collect();

        let ns_rank = ns_lifts.len();
        let ns_gram = IntMatrix::from_fn(ns_rank, ns_rank, |i, j| {
            -lattice.chi(&ns_lifts[i], &ns_lifts[j])
        });
        if ns_rank > 0 && ns_gram.det().is_zero() {
            return Err(StructureError::DegenerateNs);
        }

        // Left inverse of adapted^T: coordinates of any v in p-perp in the
        // adapted basis are L v; NS coordinates drop the leading p-entry.
        let adapted_rat = RatMatrix::from_int(&adapted);
        let gram_basis = RatMatrix::from_int(&adapted.mul(&adapted.transpose()));
        let left_inverse = gram_basis
            .inverse()
            .expect("basis rows are linearly independent")
            .mul(&adapted_rat);
        let projection = RatMatrix::from_rows(
            (1..adapted.rows())
                .map(|i| (0..n).map(|j| left_inverse.at(i, j).clone()).collect())
                .collect(),
        );

        let mut s = SurfaceStructure {
            lattice,
            point,
            rank_row,
            ns_lifts,
            ns_gram,
            projection,
            canonical: Vec::new(),
            canonical_integral: true,
        };
        let (canonical, integral) = s.solve_canonical_class()?;
        s.canonical = canonical;
        s.canonical_integral = integral;
        Ok(s)
    }

    /// Unique `K` with `chi(v, w) - chi(w, v) = -q(K, lambda(v, w))` where
    /// `lambda(v, w) = r(v) w - r(w) v`, solved over all basis pairs.
    fn solve_canonical_class(&self) -> Result<(RatVector, bool), StructureError> {
        let n = self.lattice.rank();
        let k = self.ns_rank();
        if k == 0 {
            return Ok((Vec::new(), true));
        }
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        let mut rhs: Vec<BigRational> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let bi = unit_vector(n, i);
                let bj = unit_vector(n, j);
                let ri = self.rank_of(&bi);
                let rj = self.rank_of(&bj);
                let lambda = linalg::vec_sub(&linalg::vec_scale(&ri, &bj), &linalg::vec_scale(&rj, &bi));
                if lambda.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let lam_ns = self.project(&lambda);
                // q(K, lam) row: (Q lam)^T
                let mut row = vec![BigRational::zero(); k];
                for (a, item) in row.iter_mut().enumerate() {
                    for (b, lam_b) in lam_ns.iter().enumerate() {
                        *item += BigRational::from(self.ns_gram.at(a, b).clone()) * lam_b;
                    }
                }
                let skew = self.lattice.chi(&bi, &bj) - self.lattice.chi(&bj, &bi);
                rows.push(row);
                rhs.push(BigRational::from(-skew));
            }
        }
        // Scale each equation to integers and solve exactly.
        let mut int_rows = Vec::with_capacity(rows.len());
        let mut scaled_rhs = Vec::with_capacity(rows.len());
        for (row, r) in rows.iter().zip(&rhs) {
            let lcm = row
                .iter()
                .chain(std::iter::once(r))
                .fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            let lcm_rat = BigRational::from(lcm);
            int_rows.push(
                row.iter()
                    .map(|x| (x * &lcm_rat).to_integer())
                    .collect::<Vec<_>>(),
            );
            scaled_rhs.push(r * &lcm_rat);
        }
        let a = IntMatrix::from_rows(int_rows);
        let solution =
            solve_rational(&a, &scaled_rhs).ok_or(StructureError::CanonicalInconsistent)?;
        let integral = solution.iter().all(|x| x.is_integer());
        Ok((solution, integral))
    }

    pub fn lattice(&self) -> &Pseudolattice {
        &self.lattice
    }

    pub fn point(&self) -> &[BigInt] {
        &self.point
    }

    pub fn ambient_rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn ns_rank(&self) -> usize {
        self.ns_lifts.len()
    }

    /// Gram matrix of the intersection form `q` on NS coordinates.
    pub fn ns_gram(&self) -> &IntMatrix {
        &self.ns_gram
    }

    /// Lift of the i-th NS basis vector into the ambient lattice.
    pub fn ns_lift(&self, i: usize) -> &[BigInt] {
        &self.ns_lifts[i]
    }

    /// Lift an integral NS vector into p-perp.
    pub fn lift_ns(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ns_rank());
        let mut out = vec![BigInt::zero(); self.ambient_rank()];
        for (c, lift) in v.iter().zip(&self.ns_lifts) {
            for (o, x) in out.iter_mut().zip(lift) {
                *o += c * x;
            }
        }
        out
    }

    /// `r(v) = chi(p, v) = chi(v, p)`.
    pub fn rank_of(&self, v: &[BigInt]) -> BigInt {
        dot(&self.rank_row, v)
    }

    pub fn rank_of_rat(&self, v: &[BigRational]) -> BigRational {
        self.rank_row
            .iter()
            .zip(v)
            .map(|(a, b)| BigRational::from(a.clone()) * b)
            .sum()
    }

    /// NS coordinates of a vector in p-perp (modulo p).
    pub fn project(&self, v: &[BigInt]) -> RatVector {
        assert!(self.rank_of(v).is_zero(), "projection requires r(v) = 0");
        self.projection.mul_vec(&linalg::to_rational(v))
    }

    pub fn project_rat(&self, v: &[BigRational]) -> RatVector {
        assert!(self.rank_of_rat(v).is_zero(), "projection requires r(v) = 0");
        self.projection.mul_vec(v)
    }

    /// `q` on integral NS coordinate vectors.
    pub fn q(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        self.ns_gram.bilinear(a, b)
    }

    pub fn q_rat(&self, a: &[BigRational], b: &[BigRational]) -> BigRational {
        self.ns_gram.bilinear_rat(a, b)
    }

    /// Canonical class in NS coordinates (rational in general).
    pub fn canonical_class(&self) -> &RatVector {
        &self.canonical
    }

    pub fn canonical_integral(&self) -> bool {
        self.canonical_integral
    }

    pub fn k_squared(&self) -> BigRational {
        self.q_rat(&self.canonical, &self.canonical)
    }

    /// `q(K, v)` for an integral NS vector.
    pub fn k_dot(&self, v: &[BigInt]) -> BigRational {
        self.q_rat(&self.canonical, &linalg::to_rational(v))
    }

    /// `lambda(v, w) = r(v) w - r(w) v`, a vector in p-perp.
    pub fn lambda(&self, v: &[BigInt], w: &[BigInt]) -> Vec<BigInt> {
        let rv = self.rank_of(v);
        let rw = self.rank_of(w);
        linalg::vec_sub(&linalg::vec_scale(&rv, w), &linalg::vec_scale(&rw, v))
    }

    /// NS coordinates of `lambda(v, w)`.
    pub fn lambda_ns(&self, v: &[BigInt], w: &[BigInt]) -> RatVector {
        self.project(&self.lambda(v, w))
    }

    pub fn is_unimodular(&self) -> bool {
        self.lattice.is_unimodular()
    }

    pub fn ns_signature(&self) -> Signature {
        signature(&self.ns_gram)
    }

    /// Geometricity: integral canonical class, hyperbolic signature
    /// `(1, rk - 1)`, and `K` characteristic (`q(D, D) = q(K, D) mod 2`).
    pub fn is_geometric(&self) -> bool {
        if !self.canonical_integral {
            return false;
        }
        let k = self.ns_rank();
        if k == 0 {
            return false;
        }
        let sig = self.ns_signature();
        if sig != (Signature { positive: 1, negative: k - 1, zero: 0 }) {
            return false;
        }
        let two = BigInt::from(2);
        (0..k).all(|i| {
            let d = unit_vector(k, i);
            let qd = self.q(&d, &d);
            let kd = self.k_dot(&d).to_integer();
            ((qd - kd) % &two).is_zero()
        })
    }

    /// Search NS vectors with `q(v, v) = -1` over sup-norm shells.
    pub fn minimality(&self, bound: u64) -> Minimality {
        let k = self.ns_rank();
        if k == 0 {
            return Minimality::Yes;
        }
        let minus_one = BigInt::from(-1);
        for v in shell_vectors(k, bound) {
            if self.q(&v, &v) == minus_one {
                return Minimality::No(v);
            }
        }
        let sig = self.ns_signature();
        if sig.negative == 0 {
            return Minimality::Yes; // positive semidefinite
        }
        let two = BigInt::from(2);
        if (0..k).all(|i| (self.ns_gram.at(i, i) % &two).is_zero()) {
            return Minimality::Yes; // even form never represents -1
        }
        if k == 1 && bound >= 1 {
            return Minimality::Yes; // rank one: only q = <-1> represents -1
        }
        Minimality::UnknownAtBound(bound)
    }

    /// Defect `K^2 + rk NS - 10`; defined for unimodular lattices only.
    pub fn defect(&self) -> Result<DefectReport, DefectError> {
        if !self.is_unimodular() {
            return Err(DefectError::NotUnimodular);
        }
        let k2 = self.k_squared();
        debug_assert!(k2.is_integer());
        let k_squared = k2.to_integer();
        let ns_rank = self.ns_rank();
        let defect = &k_squared + BigInt::from(ns_rank as i64) - BigInt::from(10);
        Ok(DefectReport { k_squared, ns_rank, defect })
    }

    pub fn invariants_report(&self, bound: u64) -> InvariantsReport {
        InvariantsReport {
            unimodular: self.is_unimodular(),
            geometric: self.is_geometric(),
            canonical_integral: self.canonical_integral,
            ns_signature: self.ns_signature(),
            minimal: self.minimality(bound),
            defect: self.defect().ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Minimality {
    Yes,
    /// NS witness with `q(v, v) = -1`
    No(Vec<BigInt>),
    UnknownAtBound(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectReport {
    pub k_squared: BigInt,
    pub ns_rank: usize,
    pub defect: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DefectError {
    NotUnimodular,
}

impl std::fmt::Display for DefectError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "defect undefined: lattice is not unimodular")
    }
}

#[derive(Debug, Clone)]
pub struct InvariantsReport {
    pub unimodular: bool,
    pub geometric: bool,
    pub canonical_integral: bool,
    pub ns_signature: Signature,
    pub minimal: Minimality,
    pub defect: Option<DefectReport>,
}

pub fn unit_vector(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

/// Integral coordinates of `v` in the row basis `rows`, if any.
fn integral_coords(rows: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let bt = rows.transpose();
    let sol = solve_rational(&bt, &linalg::to_rational(v))?;
    if sol.iter().all(|x| x.is_integer()) {
        Some(sol.iter().map(|x| x.to_integer()).collect())
    } else {
        None
    }
}

/// Integral coordinates of `v` in the lattice spanned by `rows`; exposed
/// for contraction bookkeeping.
pub fn coords_in_row_basis(rows: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    integral_coords(rows, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Pseudolattice {
        Pseudolattice::new(IntMatrix::from_i64(&[&[1, 3, 6], &[0, 1, 3], &[0, 0, 1]])).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn detect_p2_point() {
        // Koszul class of a point: [O] - 2[O(1)] + [O(2)].
        let det = detect_surface_like(&p2(), 10).unwrap();
        assert_eq!(det.case, SurfaceCase::SkewRankTwo);
        assert_eq!(det.kernel_rank, Some(1));
        assert_eq!(det.candidates, vec![big(&[1, -2, 1])]);
    }

    #[test]
    fn detect_rejects_definite_symmetric() {
        let l = Pseudolattice::new(IntMatrix::from_i64(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(
            detect_surface_like(&l, 8).unwrap_err(),
            DetectError::InconclusiveAtBound(8)
        );
    }

    #[test]
    fn p2_surface_structure() {
        let s = SurfaceStructure::new(p2(), big(&[1, -2, 1])).unwrap();
        assert_eq!(s.rank_of(&unit_vector(3, 0)), BigInt::one());
        assert_eq!(s.rank_of(&big(&[1, -2, 1])), BigInt::zero());
        assert_eq!(s.ns_rank(), 1);
        assert_eq!(*s.ns_gram(), IntMatrix::from_i64(&[&[1]]));
        assert_eq!(s.k_squared(), BigRational::from(BigInt::from(9)));
        assert!(s.canonical_integral());
        // K = ±3 * generator
        assert_eq!(
            num_traits::Signed::abs(&s.canonical_class()[0]),
            BigRational::from(BigInt::from(3))
        );
        let report = s.invariants_report(10);
        assert!(report.unimodular);
        assert!(report.geometric);
        assert_eq!(report.minimal, Minimality::Yes);
        assert_eq!(report.defect.unwrap().defect, BigInt::zero());
    }

    #[test]
    fn serre_operator_p2() {
        let l = p2();
        let s = l.serre_operator().unwrap();
        // S [O(2)] = [O(-1)] = 3[O] - 3[O(1)] + [O(2)]
        assert_eq!(s.mul_vec(&unit_vector(3, 2)), big(&[3, -3, 1]));
        // (1 - S)^3 = 0
        let one_minus = IntMatrix::identity(3).sub(&s);
        assert!(one_minus.mul(&one_minus).mul(&one_minus).is_zero());
        // S p = p
        assert_eq!(s.mul_vec(&big(&[1, -2, 1])), big(&[1, -2, 1]));
    }

    #[test]
    fn serre_of_symmetric_is_identity() {
        let l = Pseudolattice::new(IntMatrix::from_i64(&[&[2, 1], &[1, 2]])).unwrap();
        assert_eq!(l.serre_operator().unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn canonical_class_identity_on_pairs() {
        // chi_-(b_i, b_j) = -q(K, lambda(b_i, b_j)) exactly, for all pairs.
        let s = SurfaceStructure::new(p2(), big(&[1, -2, 1])).unwrap();
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                let bi = unit_vector(n, i);
                let bj = unit_vector(n, j);
                let skew = s.lattice().chi(&bi, &bj) - s.lattice().chi(&bj, &bi);
                let lambda = linalg::vec_sub(
                    &linalg::vec_scale(&s.rank_of(&bi), &bj),
                    &linalg::vec_scale(&s.rank_of(&bj), &bi),
                );
                let lam_ns = s.project(&lambda);
                let rhs = -s.q_rat(s.canonical_class(), &lam_ns);
                assert_eq!(BigRational::from(skew), rhs);
            }
        }
    }

    #[test]
    fn degenerate_gram_rejected() {
        let err = Pseudolattice::new(IntMatrix::from_i64(&[&[1, 1], &[1, 1]]));
        assert!(matches!(err, Err(LatticeError::Degenerate)));
    }
}
