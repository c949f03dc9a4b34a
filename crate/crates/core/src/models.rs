//! Built-in pseudolattice models: the projective plane, the quadric,
//! the first Hirzebruch surface, blowups of the plane, ruled surfaces,
//! and the untwisted K3 Mukai lattice. These are the test corpus; each
//! comes with its point-like element and, where known, an exceptional
//! basis.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::lattice::{LatticeError, Pseudolattice};
use crate::linalg::IntMatrix;

/// Stable identifiers for the built-in models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSpec {
    P2,
    P1xP1 { c: i64 },
    F1 { c: i64 },
    BlowupP2 { k: usize },
    RuledSurface { genus: u32 },
    K3Mukai { ns_gram: IntMatrix },
    SurfaceModel {
        ns_gram: IntMatrix,
        canonical: Vec<BigInt>,
        chi0: BigInt,
    },
}

#[derive(Debug, Clone)]
pub struct Model {
    pub lattice: Pseudolattice,
    pub point: Vec<BigInt>,
    pub basis: Option<Vec<Vec<BigInt>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    InvalidParameter(String),
    DegenerateNs,
}

impl std::fmt::Display for ModelError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelError::InvalidParameter(s) => write!(f, "invalid parameter: {s}"),
            ModelError::DegenerateNs => write!(f, "degenerate NS gram matrix"),
        }
    }
}

/// `chi` on the standard surface coordinates `(r, D, s)`:
///
/// `chi((r1,D1,s1),(r2,D2,s2)) = r1 s2 + r2 s1 - r1 r2 chi0 - D1.D2 + r2 (K.D1)`
///
/// This is the unique bilinear extension with `chi((0,D1,s1),(0,D2,s2)) =
/// -D1.D2`, `chi` of the rank-one class `(1,0,chi0)` with itself equal to
/// `chi0`, and skew part represented by `K` through the intersection form.
/// The point-like element is `(0, ..., 0, 1)`.
pub fn surface_model(
    ns_gram: &IntMatrix,
    canonical: &[BigInt],
    chi0: &BigInt,
) -> Result<Pseudolattice, ModelError> {
    if !ns_gram.is_symmetric() {
        return Err(ModelError::InvalidParameter("ns_gram must be symmetric".into()));
    }
    if ns_gram.rows() > 0 && ns_gram.det().is_zero() {
        return Err(ModelError::DegenerateNs);
    }
    if canonical.len() != ns_gram.rows() {
        return Err(ModelError::InvalidParameter(
            "canonical class length must match ns_gram rank".into(),
        ));
    }
    let k = ns_gram.rows();
    let n = k + 2;
    // coordinate order: (r, D_1..D_k, s)
    let split = |i: usize| -> (BigInt, Vec<BigInt>, BigInt) {
        let mut d = vec![BigInt::zero(); k];
        let mut r = BigInt::zero();
        let mut s = BigInt::zero();
        if i == 0 {
            r = BigInt::one();
        } else if i == n - 1 {
            s = BigInt::one();
        } else {
            d[i - 1] = BigInt::one();
        }
        (r, d, s)
    };
    let gram = IntMatrix::from_fn(n, n, |i, j| {
        let (r1, d1, s1) = split(i);
        let (r2, d2, s2) = split(j);
        let dd = ns_gram.bilinear(&d1, &d2);
        let kd1 = ns_gram.bilinear(canonical, &d1);
        &r1 * &s2 + &r2 * &s1 - &r1 * &r2 * chi0 - dd + &r2 * kd1
    });
    Pseudolattice::new(gram).map_err(|e| match e {
        LatticeError::Degenerate => ModelError::DegenerateNs,
        LatticeError::NotSquare => unreachable!(),
    })
}

/// Evaluate the surface-model form on explicit `(r, D, s)` class vectors;
/// used to build Gram matrices of chosen collections.
pub fn surface_chi(
    ns_gram: &IntMatrix,
    canonical: &[BigInt],
    chi0: &BigInt,
    v1: &(BigInt, Vec<BigInt>, BigInt),
    v2: &(BigInt, Vec<BigInt>, BigInt),
) -> BigInt {
    let (r1, d1, s1) = v1;
    let (r2, d2, s2) = v2;
    let dd = ns_gram.bilinear(d1, d2);
    let kd1 = ns_gram.bilinear(canonical, d1);
    r1 * s2 + r2 * s1 - r1 * r2 * chi0 - dd + r2 * kd1
}

impl ModelSpec {
    pub fn build(&self) -> Result<Model, ModelError> {
        match self {
            ModelSpec::P2 => {
                let gram = IntMatrix::from_i64(&[&[1, 3, 6], &[0, 1, 3], &[0, 0, 1]]);
                Ok(Model {
                    lattice: Pseudolattice::named(gram, "P2").unwrap(),
                    point: ivec(&[1, -2, 1]),
                    basis: Some(standard_basis(3)),
                })
            }
            ModelSpec::P1xP1 { c } => {
                let c = *c;
                let gram = IntMatrix::from_i64(&[
                    &[1, 2, 2 * c + 2, 2 * c + 4],
                    &[0, 1, 2 * c, 2 * c + 2],
                    &[0, 0, 1, 2],
                    &[0, 0, 0, 1],
                ]);
                Ok(Model {
                    lattice: Pseudolattice::named(gram, format!("P1xP1({c})")).unwrap(),
                    point: ivec(&[1, -1, -1, 1]),
                    basis: Some(standard_basis(4)),
                })
            }
            ModelSpec::F1 { c } => {
                let c = *c;
                let gram = IntMatrix::from_i64(&[
                    &[1, 2, 2 * c + 1, 2 * c + 3],
                    &[0, 1, 2 * c - 1, 2 * c + 1],
                    &[0, 0, 1, 2],
                    &[0, 0, 0, 1],
                ]);
                Ok(Model {
                    lattice: Pseudolattice::named(gram, format!("F1({c})")).unwrap(),
                    point: ivec(&[1, -1, -1, 1]),
                    basis: Some(standard_basis(4)),
                })
            }
            ModelSpec::BlowupP2 { k } => {
                let k = *k;
                // NS = <H, E_1, .., E_k>, H^2 = 1, E_i^2 = -1, K = -3H + sum E_i
                let ns = IntMatrix::from_fn(k + 1, k + 1, |i, j| {
                    if i != j {
                        BigInt::zero()
                    } else if i == 0 {
                        BigInt::one()
                    } else {
                        BigInt::from(-1)
                    }
                });
                let mut canonical = vec![BigInt::one(); k + 1];
                canonical[0] = BigInt::from(-3);
                let lattice = surface_model(&ns, &canonical, &BigInt::one())?;
                let n = k + 3;
                let mut point = vec![BigInt::zero(); n];
                point[n - 1] = BigInt::one();
                Ok(Model {
                    lattice: Pseudolattice::named(lattice.gram().clone(), format!("BlowupP2({k})"))
                        .unwrap(),
                    point,
                    basis: Some(blowup_basis(k)),
                })
            }
            ModelSpec::RuledSurface { genus } => {
                let g = *genus as i64;
                // NS = <f, s>, f^2 = 0, f.s = 1, s^2 = -1, K = (2g-3) f - 2 s
                let ns = IntMatrix::from_i64(&[&[0, 1], &[1, -1]]);
                let canonical = ivec(&[2 * g - 3, -2]);
                let chi0 = BigInt::from(1 - g);
                let lattice = surface_model(&ns, &canonical, &chi0)?;
                Ok(Model {
                    lattice: Pseudolattice::named(lattice.gram().clone(), format!("Ruled({g})"))
                        .unwrap(),
                    point: ivec(&[0, 0, 0, 1]),
                    basis: None,
                })
            }
            ModelSpec::K3Mukai { ns_gram } => {
                // Mukai pairing r1 s2 + s1 r2 - D1.D2: the surface model with
                // zero canonical class and chi0 = 0.
                let canonical = vec![BigInt::zero(); ns_gram.rows()];
                let lattice = surface_model(ns_gram, &canonical, &BigInt::zero())?;
                let n = ns_gram.rows() + 2;
                let mut point = vec![BigInt::zero(); n];
                point[n - 1] = BigInt::one();
                Ok(Model {
                    lattice: Pseudolattice::named(lattice.gram().clone(), "K3Mukai").unwrap(),
                    point,
                    basis: None,
                })
            }
            ModelSpec::SurfaceModel { ns_gram, canonical, chi0 } => {
                let lattice = surface_model(ns_gram, canonical, chi0)?;
                let n = ns_gram.rows() + 2;
                let mut point = vec![BigInt::zero(); n];
                point[n - 1] = BigInt::one();
                Ok(Model { lattice, point, basis: None })
            }
        }
    }

    /// The known exceptional basis, when the model has one.
    pub fn known_basis(&self) -> Option<Vec<Vec<BigInt>>> {
        self.build().ok().and_then(|m| m.basis)
    }
}

fn ivec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn standard_basis(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::one();
            v
        })
        .collect()
}

/// Classes of `(O_{E_1}(-1), .., O_{E_k}(-1), O, O(H), O(2H))` in the
/// `(r, H, E_1..E_k, s)` coordinates of the blowup model. The rank-zero
/// classes come first.
fn blowup_basis(k: usize) -> Vec<Vec<BigInt>> {
    let n = k + 3;
    let mut basis = Vec::with_capacity(n);
    for i in 0..k {
        let mut v = vec![BigInt::zero(); n];
        v[2 + i] = BigInt::one(); // (0, E_i, 0)
        basis.push(v);
    }
    // (1, 0, 1)
    let mut o = vec![BigInt::zero(); n];
    o[0] = BigInt::one();
    o[n - 1] = BigInt::one();
    basis.push(o);
    // (1, H, 3)
    let mut oh = vec![BigInt::zero(); n];
    oh[0] = BigInt::one();
    oh[1] = BigInt::one();
    oh[n - 1] = BigInt::from(3);
    basis.push(oh);
    // (1, 2H, 6)
    let mut o2h = vec![BigInt::zero(); n];
    o2h[0] = BigInt::one();
    o2h[1] = BigInt::from(2);
    o2h[n - 1] = BigInt::from(6);
    basis.push(o2h);
    basis
}
