//! Toric systems and their rank-2 fans.
//!
//! An exceptional basis with nonzero ranks determines a cyclic family of
//! rational NS vectors `lambda_{i,i+1} = e_{i+1}/r_{i+1} - e_i/r_i` (the
//! basis is extended one step by the inverse Serre operator). The family
//! satisfies six axioms; its kernel inside `Z^n` is a rank-2 lattice whose
//! dual images give the fan rays `l_{i,i+1}`, normalized so consecutive
//! determinants are positive.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exceptional::ExceptionalBasis;
use crate::lattice::SurfaceStructure;
use crate::linalg::{saturated_kernel, IntMatrix, RatVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ToricError {
    ZeroRank(usize),
    NotUnimodular,
    NotFullBasis,
    /// an axiom that must hold by construction failed (internal consistency)
    AxiomViolation(String),
    KernelRank(usize),
    HNotConstant,
    DegenerateRays,
}

impl std::fmt::Display for ToricError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ToricError::ZeroRank(i) => write!(f, "zero rank at position {i}"),
            ToricError::NotUnimodular => write!(f, "ambient lattice is not unimodular"),
            ToricError::NotFullBasis => write!(f, "basis length must equal the lattice rank"),
            ToricError::AxiomViolation(s) => write!(f, "axiom violation: {s}"),
            ToricError::KernelRank(r) => write!(f, "fan kernel rank {r}, expected 2"),
            ToricError::HNotConstant => write!(f, "determinant ratio h is not constant"),
            ToricError::DegenerateRays => write!(f, "adjacent rays are linearly dependent"),
        }
    }
}

/// Cyclic toric system data. `lambdas[i]` is `lambda_{i+1,i+2}` in NS
/// coordinates, indices mod `n`; the `a` and `n` tables are keyed by
/// 1-based pairs `(i, j)` with `i < j < i + n`.
#[derive(Debug, Clone)]
pub struct ToricSystem {
    pub lambdas: Vec<RatVector>,
    pub ranks: Vec<BigInt>,
    pub a_table: BTreeMap<(usize, usize), BigInt>,
    pub n_table: BTreeMap<(usize, usize), BigInt>,
}

impl ToricSystem {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// `a_{i,i+1}` for 1-based cyclic `i`.
    pub fn a_adjacent(&self, i: usize) -> &BigInt {
        &self.a_table[&(i, i + 1)]
    }
}

/// Construct the toric system of a full exceptional basis with nonzero
/// ranks. Cross-checks `n_{i,j} = chi(e_i, e_j)` on the helix extension.
pub fn toric_system_of(
    s: &SurfaceStructure,
    basis: &ExceptionalBasis,
) -> Result<ToricSystem, ToricError> {
    let l = s.lattice();
    let n = basis.len();
    if n != l.rank() {
        return Err(ToricError::NotFullBasis);
    }
    if !l.is_unimodular() {
        return Err(ToricError::NotUnimodular);
    }
    let ranks = basis.ranks(s);
    for (i, r) in ranks.iter().enumerate() {
        if r.is_zero() {
            return Err(ToricError::ZeroRank(i + 1));
        }
    }
    let serre_inv = l.serre_inverse().ok_or(ToricError::NotUnimodular)?;

    // helix extension e_{i+n} = S^{-1} e_i, enough for all pairs i < j < i+n
    let mut extended: Vec<Vec<BigInt>> = basis.vectors().to_vec();
    for i in 0..n {
        let v = serre_inv.mul_vec(&extended[i]);
        extended.push(v);
    }
    let rank_at = |i: usize| -> BigInt { ranks[i % n].clone() };

    // lambda_{i,j} in ambient rational coordinates, then projected to NS
    let lambda_ambient = |i: usize, j: usize| -> Vec<BigRational> {
        let ri = rank_at(i);
        let rj = rank_at(j);
        extended[j]
            .iter()
            .zip(&extended[i])
            .map(|(ej, ei)| {
                BigRational::new(ej.clone(), rj.clone()) - BigRational::new(ei.clone(), ri.clone())
            })
            .collect()
    };

    let lambdas: Vec<RatVector> = (0..n)
        .map(|i| s.project_rat(&lambda_ambient(i, i + 1)))
        .collect();

    let mut a_table = BTreeMap::new();
    let mut n_table = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..i + n {
            let lam = s.project_rat(&lambda_ambient(i, j));
            let ri = rank_at(i);
            let rj = rank_at(j);
            let scale = BigRational::from(&ri * &rj);
            let scaled: Vec<BigRational> = lam.iter().map(|x| x * &scale).collect();
            if !scaled.iter().all(|x| x.is_integer()) {
                return Err(ToricError::AxiomViolation(format!(
                    "r_i r_j lambda_{{{},{}}} is not integral",
                    i + 1,
                    j + 1
                )));
            }
            let a = s.q_rat(&scaled, &scaled);
            debug_assert!(a.is_integer());
            let a = a.to_integer();
            let num = &a + &ri * &ri + &rj * &rj;
            let den = &ri * &rj;
            if !(&num % &den).is_zero() {
                return Err(ToricError::AxiomViolation(format!(
                    "n_{{{},{}}} is not an integer",
                    i + 1,
                    j + 1
                )));
            }
            let n_val = num / den;
            let chi = l.chi(&extended[i], &extended[j]);
            if n_val != chi {
                return Err(ToricError::AxiomViolation(format!(
                    "n_{{{},{}}} = {} but chi(e_i, e_j) = {}",
                    i + 1,
                    j + 1,
                    n_val,
                    chi
                )));
            }
            a_table.insert((i + 1, j + 1), a);
            n_table.insert((i + 1, j + 1), n_val);
        }
    }

    Ok(ToricSystem { lambdas, ranks, a_table, n_table })
}

/// Per-axiom verification report; `markov` carries the `n = 3` identity
/// `r1^2 + r2^2 + r3^2 = gamma r1 r2 r3` when the ratio is integral.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub adjacent_products: bool,
    pub distant_orthogonality: bool,
    pub integrality: bool,
    pub n_integrality: bool,
    pub sum_is_minus_k: bool,
    pub ranks_coprime: bool,
    pub failures: Vec<String>,
    pub markov_gamma: Option<BigInt>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.adjacent_products
            && self.distant_orthogonality
            && self.integrality
            && self.n_integrality
            && self.sum_is_minus_k
            && self.ranks_coprime
    }
}

/// Verify the toric-system axioms against a quadratic form `q` and a
/// canonical vector `k` in the same coordinates.
pub fn verify_toric_system(q: &IntMatrix, k: &[BigRational], ts: &ToricSystem) -> AxiomReport {
    let n = ts.len();
    let lam = |i: usize| -> &RatVector { &ts.lambdas[i % n] };
    let pair = |a: &RatVector, b: &RatVector| q.bilinear_rat(a, b);
    let mut failures = Vec::new();

    // (1) adjacent products 1/r_i^2
    let mut adjacent_products = true;
    for i in 0..n {
        let r = &ts.ranks[i % n];
        let expected = BigRational::new(BigInt::one(), r * r);
        if pair(lam((i + n - 1) % n), lam(i)) != expected {
            adjacent_products = false;
            failures.push(format!("axiom 1 fails at i = {}", i + 1));
        }
    }

    // (2) distant pairs orthogonal
    let mut distant_orthogonality = true;
    for i in 0..n {
        for j in 0..n {
            let d = (j + n - i) % n;
            if d >= 2 && d <= n - 2 && !pair(lam(i), lam(j)).is_zero() {
                distant_orthogonality = false;
                failures.push(format!("axiom 2 fails at ({}, {})", i + 1, j + 1));
            }
        }
    }

    // (3) + (4) integrality of r_i r_j lambda_{i,j} and of n_{i,j}
    let mut integrality = true;
    let mut n_integrality = true;
    for i in 0..n {
        for j in i + 1..i + n {
            let mut acc = vec![BigRational::zero(); lam(0).len()];
            for t in i..j {
                for (o, x) in acc.iter_mut().zip(lam(t % n)) {
                    *o += x;
                }
            }
            let ri = &ts.ranks[i % n];
            let rj = &ts.ranks[j % n];
            let scale = BigRational::from(ri * rj);
            let scaled: Vec<BigRational> = acc.iter().map(|x| x * &scale).collect();
            if !scaled.iter().all(|x| x.is_integer()) {
                integrality = false;
                failures.push(format!("axiom 3 fails at ({}, {})", i + 1, j + 1));
                continue;
            }
            let a = pair(&scaled, &scaled);
            if !a.is_integer() {
                integrality = false;
                failures.push(format!("axiom 3 (square) fails at ({}, {})", i + 1, j + 1));
                continue;
            }
            let num = a.to_integer() + ri * ri + rj * rj;
            let den = ri * rj;
            if !(num % den).is_zero() {
                n_integrality = false;
                failures.push(format!("axiom 4 fails at ({}, {})", i + 1, j + 1));
            }
        }
    }

    // (5) sum of lambdas is -K
    let mut total = vec![BigRational::zero(); lam(0).len()];
    for i in 0..n {
        for (o, x) in total.iter_mut().zip(lam(i)) {
            *o += x;
        }
    }
    let sum_is_minus_k = total.iter().zip(k).all(|(t, ki)| *t == -ki);
    if !sum_is_minus_k {
        failures.push("axiom 5 fails: sum of lambdas differs from -K".to_string());
    }

    // (6) gcd of ranks
    let gcd = ts.ranks.iter().fold(BigInt::zero(), |acc, r| acc.gcd(r));
    let ranks_coprime = gcd.is_one();
    if !ranks_coprime {
        failures.push(format!("axiom 6 fails: gcd of ranks is {gcd}"));
    }

    let markov_gamma = if n == 3 {
        let sum: BigInt = ts.ranks.iter().map(|r| r * r).sum();
        let prod: BigInt = ts.ranks.iter().product();
        if !prod.is_zero() && (&sum % &prod).is_zero() {
            Some(sum / prod)
        } else {
            None
        }
    } else {
        None
    };

    AxiomReport {
        adjacent_products,
        distant_orthogonality,
        integrality,
        n_integrality,
        sum_is_minus_k,
        ranks_coprime,
        failures,
        markov_gamma,
    }
}

/// Fan rays in `Z^2` with the volume normalization constant `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    pub rays: Vec<(BigInt, BigInt)>,
    pub h: BigInt,
    /// sign applied to the raw kernel volume form to make dets positive
    pub orientation: i8,
}

fn det2(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> BigInt {
    &a.0 * &b.1 - &a.1 * &b.0
}

/// Build the fan: rays come from the kernel of `Z^n -> NS_Q`, `e_i ->
/// lambda_{i,i+1}`, oriented so `det(l_{n,1}, l_{1,2}) > 0`, with `h`
/// verified constant over `det(l_{i-1,i}, l_{i,i+1}) = h r_i^2`. A
/// unimodular display normalization maps the first ray to `(g, 0)`.
pub fn fan_of(ts: &ToricSystem) -> Result<Fan, ToricError> {
    let n = ts.len();
    if n < 3 {
        return Err(ToricError::KernelRank(0));
    }
    let dim = ts.lambdas[0].len();
    // integer matrix whose columns are the lambdas
    let mut denom = BigInt::one();
    for lam in &ts.lambdas {
        for x in lam {
            denom = denom.lcm(x.denom());
        }
    }
    let denom_rat = BigRational::from(denom);
    let mat = IntMatrix::from_fn(dim, n, |i, j| (&ts.lambdas[j][i] * &denom_rat).to_integer());
    let kernel = saturated_kernel(&mat);
    if kernel.rows() != 2 {
        return Err(ToricError::KernelRank(kernel.rows()));
    }
    let mut rays: Vec<(BigInt, BigInt)> = (0..n)
        .map(|i| (kernel.at(0, i).clone(), kernel.at(1, i).clone()))
        .collect();

    // orientation: det(l_{n,1}, l_{1,2}) > 0
    let d = det2(&rays[n - 1], &rays[0]);
    if d.is_zero() {
        return Err(ToricError::DegenerateRays);
    }
    let orientation = if d.is_negative() {
        for r in rays.iter_mut() {
            r.1 = -r.1.clone();
        }
        -1
    } else {
        1
    };

    // h r_i^2 = det(l_{i-1,i}, l_{i,i+1}), constant positive integer
    let mut h: Option<BigRational> = None;
    for i in 0..n {
        let prev = &rays[(i + n - 1) % n];
        let cur = &rays[i];
        let d = det2(prev, cur);
        if d.is_zero() {
            return Err(ToricError::DegenerateRays);
        }
        let r = &ts.ranks[i];
        let candidate = BigRational::new(d, r * r);
        match &h {
            None => h = Some(candidate),
            Some(existing) if *existing == candidate => {}
            Some(_) => return Err(ToricError::HNotConstant),
        }
    }
    let h = h.expect("n >= 3");
    if !h.is_integer() || !h.is_positive() {
        return Err(ToricError::HNotConstant);
    }
    let h = h.to_integer();

    // cross-check det(l_{i+1,i+2}, l_{i-1,i}) = h a_{i,i+1}
    for i in 0..n {
        let prev = &rays[(i + n - 1) % n];
        let next = &rays[(i + 1) % n];
        let a = ts.a_adjacent(i + 1);
        if det2(next, prev) != &h * a {
            return Err(ToricError::AxiomViolation(format!(
                "det relation with a_{{{},{}}} fails",
                i + 1,
                i + 2
            )));
        }
    }

    // display normalization in SL2(Z): first ray to (g, 0), then shear so
    // the second ray's x-coordinate is reduced modulo its y-coordinate
    let (x1, y1) = rays[0].clone();
    let g = x1.gcd(&y1);
    let e = x1.extended_gcd(&y1);
    debug_assert_eq!(e.gcd, g);
    let (u, v) = (e.x, e.y);
    let apply = |t: &[[BigInt; 2]; 2], r: &(BigInt, BigInt)| -> (BigInt, BigInt) {
        (
            &t[0][0] * &r.0 + &t[0][1] * &r.1,
            &t[1][0] * &r.0 + &t[1][1] * &r.1,
        )
    };
    let t1 = [
        [u.clone(), v.clone()],
        [-(&y1 / &g), (&x1 / &g)],
    ];
    let mut rays: Vec<(BigInt, BigInt)> = rays.iter().map(|r| apply(&t1, r)).collect();
    let (x2, y2) = rays[1].clone();
    debug_assert!(y2.is_positive());
    let shear = -(x2.div_floor(&y2));
    let t2 = [
        [BigInt::one(), shear],
        [BigInt::zero(), BigInt::one()],
    ];
    rays = rays.iter().map(|r| apply(&t2, r)).collect();

    Ok(Fan { rays, h, orientation })
}

/// Exact predicates every relation the fan must satisfy; used by callers
/// and the test suites.
pub fn check_fan_relations(ts: &ToricSystem, fan: &Fan) -> Result<(), ToricError> {
    let n = ts.len();
    // sum l_i (x) lambda_i = 0
    let dim = ts.lambdas[0].len();
    for coord in 0..2 {
        for d in 0..dim {
            let mut acc = BigRational::zero();
            for i in 0..n {
                let li = if coord == 0 { &fan.rays[i].0 } else { &fan.rays[i].1 };
                acc += BigRational::from(li.clone()) * &ts.lambdas[i][d];
            }
            if !acc.is_zero() {
                return Err(ToricError::AxiomViolation("tensor relation fails".into()));
            }
        }
    }
    // r_{i+1}^2 l_{i-1,i} + a_{i,i+1} l_{i,i+1} + r_i^2 l_{i+1,i+2} = 0
    for i in 0..n {
        let prev = &fan.rays[(i + n - 1) % n];
        let cur = &fan.rays[i];
        let next = &fan.rays[(i + 1) % n];
        let ri = &ts.ranks[i];
        let rn = &ts.ranks[(i + 1) % n];
        let a = ts.a_adjacent(i + 1);
        let zero0 = rn * rn * &prev.0 + a * &cur.0 + ri * ri * &next.0;
        let zero1 = rn * rn * &prev.1 + a * &cur.1 + ri * ri * &next.1;
        if !zero0.is_zero() || !zero1.is_zero() {
            return Err(ToricError::AxiomViolation("three-term ray relation fails".into()));
        }
        // det form of the same relation
        let d0 = det2(cur, next);
        let d1 = det2(next, prev);
        let d2 = det2(prev, cur);
        let z0 = &d0 * &prev.0 + &d1 * &cur.0 + &d2 * &next.0;
        let z1 = &d0 * &prev.1 + &d1 * &cur.1 + &d2 * &next.1;
        if !z0.is_zero() || !z1.is_zero() {
            return Err(ToricError::AxiomViolation("determinant ray relation fails".into()));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Polygon geometry (exact integer predicates).
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct PolygonReport {
    /// convex hull vertices in counterclockwise order
    pub hull: Vec<(BigInt, BigInt)>,
    pub origin_strictly_interior: bool,
    /// 1-based indices of extremal rays (not in the hull of the others)
    pub extremal: Vec<usize>,
    /// for every `i` with `a_{i,i+1} < 0`: is `l_{i,i+1}` inside
    /// `Conv(0, l_{i-1,i}, l_{i+1,i+2})`?
    pub negative_a_containment: Vec<(usize, bool)>,
}

fn cross(o: &(BigInt, BigInt), a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> BigInt {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Monotone-chain convex hull; returns vertices in ccw order without
/// collinear interior points.
fn convex_hull(points: &[(BigInt, BigInt)]) -> Vec<(BigInt, BigInt)> {
    let mut pts: Vec<(BigInt, BigInt)> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<(BigInt, BigInt)> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<(BigInt, BigInt)> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn on_segment(p: &(BigInt, BigInt), a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> bool {
    if !cross(a, b, p).is_zero() {
        return false;
    }
    let within = |x: &BigInt, lo: &BigInt, hi: &BigInt| {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        lo <= x && x <= hi
    };
    within(&p.0, &a.0, &b.0) && within(&p.1, &a.1, &b.1)
}

/// Inclusive membership of `p` in the convex hull of `pts`.
fn in_convex_hull(p: &(BigInt, BigInt), pts: &[(BigInt, BigInt)]) -> bool {
    let hull = convex_hull(pts);
    match hull.len() {
        0 => false,
        1 => *p == hull[0],
        2 => on_segment(p, &hull[0], &hull[1]),
        _ => (0..hull.len()).all(|i| {
            let a = &hull[i];
            let b = &hull[(i + 1) % hull.len()];
            !cross(a, b, p).is_negative()
        }),
    }
}

fn strictly_interior(p: &(BigInt, BigInt), hull: &[(BigInt, BigInt)]) -> bool {
    hull.len() >= 3
        && (0..hull.len()).all(|i| {
            let a = &hull[i];
            let b = &hull[(i + 1) % hull.len()];
            cross(a, b, p).is_positive()
        })
}

/// `p` in the triangle `Conv(0, u, w)` with `u`, `w` independent: solve
/// `alpha u + beta w = p` and require `alpha, beta >= 0`, `alpha + beta <= 1`.
fn in_origin_triangle(p: &(BigInt, BigInt), u: &(BigInt, BigInt), w: &(BigInt, BigInt)) -> bool {
    let det = det2(u, w);
    if det.is_zero() {
        return false;
    }
    let alpha = BigRational::new(det2(p, w), det.clone());
    let beta = BigRational::new(det2(u, p), det);
    !alpha.is_negative() && !beta.is_negative() && alpha + beta <= BigRational::one()
}

pub fn polygon_report(ts: &ToricSystem, fan: &Fan) -> PolygonReport {
    let n = fan.rays.len();
    let hull = convex_hull(&fan.rays);
    let origin = (BigInt::zero(), BigInt::zero());
    let origin_strictly_interior = strictly_interior(&origin, &hull);
    let mut extremal = Vec::new();
    for i in 0..n {
        let others: Vec<(BigInt, BigInt)> = (0..n)
            .filter(|&j| j != i)
            .map(|j| fan.rays[j].clone())
            .collect();
        if !in_convex_hull(&fan.rays[i], &others) {
            extremal.push(i + 1);
        }
    }
    let mut negative_a_containment = Vec::new();
    for i in 0..n {
        if ts.a_adjacent(i + 1).is_negative() {
            let prev = &fan.rays[(i + n - 1) % n];
            let next = &fan.rays[(i + 1) % n];
            negative_a_containment.push((i + 1, in_origin_triangle(&fan.rays[i], prev, next)));
        }
    }
    PolygonReport {
        hull,
        origin_strictly_interior,
        extremal,
        negative_a_containment,
    }
}

/// Decorative SVG of the rays and their convex hull.
pub fn fan_svg(fan: &Fan, report: &PolygonReport) -> String {
    let to_f = |x: &BigInt| x.to_string().parse::<f64>().unwrap_or(0.0);
    let max = fan
        .rays
        .iter()
        .flat_map(|(x, y)| [to_f(x).abs(), to_f(y).abs()])
        .fold(1.0_f64, f64::max);
    let scale = 180.0 / max;
    let px = |x: &BigInt| 200.0 + to_f(x) * scale;
    let py = |y: &BigInt| 200.0 - to_f(y) * scale;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 400 400\">"
    );
    let _ = writeln!(svg, "  <circle cx=\"200\" cy=\"200\" r=\"3\" fill=\"black\"/>");
    let hull_path: Vec<String> = report
        .hull
        .iter()
        .map(|(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
        .collect();
    if !hull_path.is_empty() {
        let _ = writeln!(
            svg,
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"#999\"/>",
            hull_path.join(" ")
        );
    }
    for (i, (x, y)) in fan.rays.iter().enumerate() {
        let _ = writeln!(
            svg,
            "  <line x1=\"200\" y1=\"200\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#3366cc\"/>",
            px(x),
            py(y)
        );
        let marker = if report.extremal.contains(&(i + 1)) { "#cc3333" } else { "#3366cc" };
        let _ = writeln!(
            svg,
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{}\"/>",
            px(x),
            py(y),
            marker
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">l{}</text>",
            px(x) + 6.0,
            py(y) - 6.0,
            i + 1
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exceptional::{apply_word, ExceptionalBasis};
    use crate::models::ModelSpec;

    fn setup(spec: ModelSpec) -> (SurfaceStructure, ExceptionalBasis) {
        let model = spec.build().unwrap();
        let basis = ExceptionalBasis::new(&model.lattice, model.basis.clone().unwrap()).unwrap();
        let s = SurfaceStructure::new(model.lattice, model.point).unwrap();
        (s, basis)
    }

    #[test]
    fn p2_toric_system() {
        let (s, basis) = setup(ModelSpec::P2);
        let ts = toric_system_of(&s, &basis).unwrap();
        assert_eq!(ts.ranks, vec![BigInt::one(); 3]);
        // lambda = (H, H, H): all three equal with square 1
        for i in 0..3 {
            assert_eq!(ts.lambdas[i], ts.lambdas[0]);
            assert_eq!(*ts.a_adjacent(i + 1), BigInt::one());
        }
        let report = verify_toric_system(s.ns_gram(), s.canonical_class(), &ts);
        assert!(report.all_pass(), "{:?}", report.failures);
        assert_eq!(report.markov_gamma, Some(BigInt::from(3)));
    }

    #[test]
    fn p2_fan_and_polygon() {
        let (s, basis) = setup(ModelSpec::P2);
        let ts = toric_system_of(&s, &basis).unwrap();
        let fan = fan_of(&ts).unwrap();
        check_fan_relations(&ts, &fan).unwrap();
        assert_eq!(fan.h, BigInt::one());
        // rays sum to zero (r = 1, a = 1 instance of the three-term relation)
        let sum0: BigInt = fan.rays.iter().map(|r| r.0.clone()).sum();
        let sum1: BigInt = fan.rays.iter().map(|r| r.1.clone()).sum();
        assert!(sum0.is_zero() && sum1.is_zero());
        let report = polygon_report(&ts, &fan);
        assert_eq!(report.extremal.len(), 3);
        assert!(report.origin_strictly_interior);
        assert!(report.negative_a_containment.is_empty());
    }

    #[test]
    fn p1xp1_fan_pairs_opposite() {
        for c in [0i64, 1] {
            let (s, basis) = setup(ModelSpec::P1xP1 { c });
            let ts = toric_system_of(&s, &basis).unwrap();
            let report = verify_toric_system(s.ns_gram(), s.canonical_class(), &ts);
            assert!(report.all_pass(), "{:?}", report.failures);
            let fan = fan_of(&ts).unwrap();
            check_fan_relations(&ts, &fan).unwrap();
            // a_{1,2} = a_{3,4} = 0 forces l_{i-1,i} = -l_{i+1,i+2}
            for i in 0..4 {
                if ts.a_adjacent(i + 1).is_zero() {
                    let prev = &fan.rays[(i + 3) % 4];
                    let next = &fan.rays[(i + 1) % 4];
                    assert_eq!(prev.0, -next.0.clone());
                    assert_eq!(prev.1, -next.1.clone());
                }
            }
            let poly = polygon_report(&ts, &fan);
            // c = 1 is the fully degenerate two-opposite-pairs configuration;
            // c = 0 has a_{2,3} = -2 < 0 whose ray is swallowed by its neighbors
            let expected_extremal = if c == 1 { 4 } else { 3 };
            assert_eq!(poly.extremal.len(), expected_extremal, "c = {c}");
            assert!(poly.origin_strictly_interior);
            for (_, contained) in &poly.negative_a_containment {
                assert!(contained);
            }
        }
    }

    #[test]
    fn scaled_lambda_breaks_sum_axiom() {
        let (s, basis) = setup(ModelSpec::P2);
        let mut ts = toric_system_of(&s, &basis).unwrap();
        for lam in ts.lambdas.iter_mut() {
            for x in lam.iter_mut() {
                *x *= BigRational::from(BigInt::from(2));
            }
        }
        let report = verify_toric_system(s.ns_gram(), s.canonical_class(), &ts);
        assert!(!report.sum_is_minus_k);
    }

    #[test]
    fn non_markov_ranks_fail_axioms() {
        // a hand-built candidate with ranks (1, 1, 2) in NS = <1>
        let q = IntMatrix::from_i64(&[&[1]]);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let one = BigRational::from(BigInt::one());
        let ts = ToricSystem {
            lambdas: vec![vec![one.clone()], vec![half.clone()], vec![half.clone()]],
            ranks: vec![BigInt::one(), BigInt::one(), BigInt::from(2)],
            a_table: BTreeMap::new(),
            n_table: BTreeMap::new(),
        };
        let k = vec![-BigRational::from(BigInt::from(2))];
        let report = verify_toric_system(&q, &k, &ts);
        assert!(!report.all_pass());
        assert!(!report.adjacent_products);
    }

    #[test]
    fn f1_zero_c_has_negative_a_with_containment() {
        // the standard F1(0) basis is a local norm minimum with a_{2,3} < 0;
        // its ray must then lie in the triangle spanned by its neighbors
        let (s, basis) = setup(ModelSpec::F1 { c: 0 });
        let ts = toric_system_of(&s, &basis).unwrap();
        assert_eq!(*ts.a_adjacent(2), BigInt::from(-3));
        let fan = fan_of(&ts).unwrap();
        check_fan_relations(&ts, &fan).unwrap();
        let report = polygon_report(&ts, &fan);
        assert_eq!(report.negative_a_containment, vec![(2, true)]);
        assert!(!report.extremal.contains(&2));
    }

    #[test]
    fn round_trip_mutation_preserves_system() {
        let (s, basis) = setup(ModelSpec::P2);
        let mutated = apply_word(s.lattice(), &basis, &"L1,R1".parse().unwrap()).unwrap();
        assert_eq!(mutated, basis);
        let t1 = toric_system_of(&s, &basis).unwrap();
        let t2 = toric_system_of(&s, &mutated).unwrap();
        assert_eq!(t1.lambdas, t2.lambdas);
    }

    #[test]
    fn lambda_gram_is_cyclically_tridiagonal() {
        for spec in [ModelSpec::P2, ModelSpec::P1xP1 { c: 1 }, ModelSpec::F1 { c: 0 }] {
            let (s, basis) = setup(spec);
            let ts = toric_system_of(&s, &basis).unwrap();
            let n = ts.len();
            for i in 0..n {
                for j in 0..n {
                    let d = (j + n - i) % n;
                    let v = s.q_rat(&ts.lambdas[i], &ts.lambdas[j]);
                    if d >= 2 && d <= n - 2 {
                        assert!(v.is_zero());
                    } else if d == 1 {
                        let r = &ts.ranks[j];
                        assert_eq!(v, BigRational::new(BigInt::one(), r * r));
                    }
                }
            }
        }
    }
}
