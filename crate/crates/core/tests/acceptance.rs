//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line. All comparisons are exact; there are no tolerances.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pseudolattice::exceptional::{
    apply_word, basis_norm, is_exceptional_sequence, norm_minimize, reduce_ranks, DescentOptions,
    ExceptionalBasis, MutationStep, MutationWord, ReduceStatus,
};
use pseudolattice::lattice::SurfaceStructure;
use pseudolattice::linalg::IntMatrix;
use pseudolattice::mmp::{
    classify_minimal, contract, minimal_model, vial_criterion, CriterionCase, CriterionError,
    MinimalKind, MmpStatus,
};
use pseudolattice::models::{surface_chi, ModelSpec};
use pseudolattice::toric::{
    check_fan_relations, fan_of, polygon_report, toric_system_of, verify_toric_system,
};

struct Criterion {
    name: &'static str,
    checks: Vec<(String, bool)>,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Criterion { name, checks: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.checks.push((label.into(), ok));
    }

    fn finish(self) {
        let failed: Vec<&(String, bool)> = self.checks.iter().filter(|(_, ok)| !ok).collect();
        if failed.is_empty() {
            println!("criterion {}: PASS ({} checks)", self.name, self.checks.len());
        } else {
            println!("criterion {}: FAIL", self.name);
            for (label, _) in &failed {
                println!("  failed: {label}");
            }
        }
        assert!(failed.is_empty(), "criterion {} failed", self.name);
    }
}

fn setup(spec: &ModelSpec) -> (SurfaceStructure, Option<ExceptionalBasis>) {
    let model = spec.build().unwrap();
    let basis = model
        .basis
        .clone()
        .map(|b| ExceptionalBasis::new(&model.lattice, b).unwrap());
    let s = SurfaceStructure::new(model.lattice, model.point).unwrap();
    (s, basis)
}

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

fn rat(x: i64) -> BigRational {
    BigRational::from(BigInt::from(x))
}

#[test]
fn criterion_01_model_invariants() {
    let mut c = Criterion::new("01 model invariants");
    let (s, _) = setup(&ModelSpec::P2);
    c.check("P2 NS rank 1", s.ns_rank() == 1);
    c.check("P2 K^2 = 9", s.k_squared() == rat(9));
    c.check("P2 defect 0", s.defect().unwrap().defect.is_zero());
    for cc in [-2i64, 0, 3] {
        let (s, _) = setup(&ModelSpec::P1xP1 { c: cc });
        c.check(format!("P1xP1({cc}) K^2 = 8"), s.k_squared() == rat(8));
        c.check(
            format!("P1xP1({cc}) defect 0"),
            s.defect().unwrap().defect.is_zero(),
        );
    }
    for cc in [0i64, 1, 2] {
        let (s, _) = setup(&ModelSpec::F1 { c: cc });
        c.check(format!("F1({cc}) K^2 = 8"), s.k_squared() == rat(8));
        c.check(
            format!("F1({cc}) defect 0"),
            s.defect().unwrap().defect.is_zero(),
        );
    }
    c.finish();
}

#[test]
fn criterion_02_standard_model_oracle() {
    let mut c = Criterion::new("02 standard-model oracle");
    let ivec = |v: &[i64]| -> Vec<BigInt> { v.iter().map(|&x| int(x)).collect() };

    let ns = IntMatrix::from_i64(&[&[1]]);
    let canonical = ivec(&[-3]);
    let classes = [
        (int(1), ivec(&[0]), int(1)),
        (int(1), ivec(&[1]), int(3)),
        (int(1), ivec(&[2]), int(6)),
    ];
    let gram = IntMatrix::from_fn(3, 3, |i, j| {
        surface_chi(&ns, &canonical, &int(1), &classes[i], &classes[j])
    });
    c.check(
        "line-bundle classes on the plane give chi_P2 bit-exactly",
        &gram == ModelSpec::P2.build().unwrap().lattice.gram(),
    );

    let ns = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
    let canonical = ivec(&[-2, -2]);
    for cc in [-2i64, 0, 3] {
        let classes = [
            (int(1), ivec(&[0, 0]), int(1)),
            (int(1), ivec(&[1, 0]), int(2)),
            (int(1), ivec(&[cc, 1]), int(2 * cc + 2)),
            (int(1), ivec(&[cc + 1, 1]), int(2 * cc + 4)),
        ];
        let gram = IntMatrix::from_fn(4, 4, |i, j| {
            surface_chi(&ns, &canonical, &int(1), &classes[i], &classes[j])
        });
        c.check(
            format!("quadric classes (c = {cc}) reproduce the model matrix"),
            &gram == ModelSpec::P1xP1 { c: cc }.build().unwrap().lattice.gram(),
        );
    }

    let ns = IntMatrix::from_i64(&[&[0, 1], &[1, -1]]);
    let canonical = ivec(&[-3, -2]);
    for cc in [0i64, 1, 2] {
        let classes = [
            (int(1), ivec(&[0, 0]), int(1)),
            (int(1), ivec(&[1, 0]), int(2)),
            (int(1), ivec(&[cc, 1]), int(2 * cc + 1)),
            (int(1), ivec(&[cc + 1, 1]), int(2 * cc + 3)),
        ];
        let gram = IntMatrix::from_fn(4, 4, |i, j| {
            surface_chi(&ns, &canonical, &int(1), &classes[i], &classes[j])
        });
        c.check(
            format!("F1 classes (c = {cc}) reproduce the model matrix"),
            &gram == ModelSpec::F1 { c: cc }.build().unwrap().lattice.gram(),
        );
    }
    c.finish();
}

#[test]
fn criterion_03_serre_suite() {
    let mut c = Criterion::new("03 Serre operator suite");
    let specs: Vec<(String, ModelSpec)> = vec![
        ("P2".into(), ModelSpec::P2),
        ("P1xP1(0)".into(), ModelSpec::P1xP1 { c: 0 }),
        ("P1xP1(3)".into(), ModelSpec::P1xP1 { c: 3 }),
        ("F1(1)".into(), ModelSpec::F1 { c: 1 }),
        ("BlowupP2(3)".into(), ModelSpec::BlowupP2 { k: 3 }),
        ("Ruled(2)".into(), ModelSpec::RuledSurface { genus: 2 }),
        (
            "K3Mukai".into(),
            ModelSpec::K3Mukai { ns_gram: IntMatrix::from_i64(&[&[0, 1], &[1, 0]]) },
        ),
    ];
    for (name, spec) in specs {
        let (s, _) = setup(&spec);
        let l = s.lattice();
        c.check(format!("{name} unimodular"), l.is_unimodular());
        let serre = l.serre_operator().unwrap();
        let n = l.rank();
        let one_minus = IntMatrix::identity(n).sub(&serre);
        c.check(
            format!("{name}: (1 - S)^3 = 0"),
            one_minus.mul(&one_minus).mul(&one_minus).is_zero(),
        );
        c.check(
            format!("{name}: S p = p"),
            serre.mul_vec(s.point()) == s.point().to_vec(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..8 {
            let v: Vec<BigInt> = (0..n).map(|_| int(rng.gen_range(-9..=9))).collect();
            c.check(
                format!("{name}: r(S v) = r(v), trial {trial}"),
                s.rank_of(&serre.mul_vec(&v)) == s.rank_of(&v),
            );
        }
    }
    let (_, _) = setup(&ModelSpec::P2);
    let p2 = ModelSpec::P2.build().unwrap();
    let serre = p2.lattice.serre_operator().unwrap();
    let e3: Vec<BigInt> = vec![int(0), int(0), int(1)];
    c.check(
        "P2: S [O(2)] = [O(-1)] = (3, -3, 1)",
        serre.mul_vec(&e3) == vec![int(3), int(-3), int(1)],
    );
    c.finish();
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> MutationWord {
    let len = rng.gen_range(0..=max_len);
    let steps = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..n);
            match rng.gen_range(0..5) {
                0 | 1 => MutationStep::Left(i),
                2 | 3 => MutationStep::Right(i),
                _ => MutationStep::Flip(rng.gen_range(1..=n)),
            }
        })
        .collect();
    MutationWord(steps)
}

/// `q` on p-perp vectors computed through `chi` (integer arithmetic).
fn q_bar(s: &SurfaceStructure, v: &[BigInt], w: &[BigInt]) -> BigInt {
    debug_assert!(s.rank_of(v).is_zero() && s.rank_of(w).is_zero());
    -s.lattice().chi(v, w)
}

#[test]
fn criterion_04_mutation_property_suite() {
    let mut c = Criterion::new("04 mutation property suite");
    let specs = vec![
        ModelSpec::P2,
        ModelSpec::P1xP1 { c: 0 },
        ModelSpec::P1xP1 { c: -2 },
        ModelSpec::F1 { c: 0 },
        ModelSpec::F1 { c: 1 },
        ModelSpec::BlowupP2 { k: 1 },
        ModelSpec::BlowupP2 { k: 3 },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(20240808);
    for spec in &specs {
        let (s, basis) = setup(spec);
        let basis = basis.unwrap();
        let l = s.lattice();
        let n = basis.len();
        let mut all_ok = true;
        let mut roundtrip_ok = true;
        let mut replay_ok = true;
        let mut identities_ok = true;
        for _ in 0..1000 {
            let word = random_word(&mut rng, n, 12);
            // exceptionality is re-verified inside every step
            let end = match apply_word(l, &basis, &word) {
                Ok(b) => b,
                Err(_) => {
                    all_ok = false;
                    break;
                }
            };
            // LR / RL round trips at a random index
            let i = rng.gen_range(1..n);
            let lr = apply_word(
                l,
                &end,
                &MutationWord(vec![MutationStep::Left(i), MutationStep::Right(i)]),
            )
            .unwrap();
            let rl = apply_word(
                l,
                &end,
                &MutationWord(vec![MutationStep::Right(i), MutationStep::Left(i)]),
            )
            .unwrap();
            roundtrip_ok &= lr == end && rl == end;
            // bit-exact replay
            replay_ok &= apply_word(l, &basis, &word).unwrap() == end;

            // numerical identities on the end basis
            let vectors = end.vectors();
            let ranks: Vec<BigInt> = vectors.iter().map(|v| s.rank_of(v)).collect();
            let lam = |a: usize, b: usize| s.lambda(&vectors[a], &vectors[b]);
            for i in 0..n {
                for j in i + 1..n {
                    // exceptional pairs with nonzero ranks
                    if !ranks[i].is_zero() && !ranks[j].is_zero() {
                        let lhs = (l.chi(&vectors[i], &vectors[j])
                            + l.chi(&vectors[j], &vectors[i]))
                            * &ranks[i]
                            * &ranks[j];
                        let rhs = q_bar(&s, &lam(i, j), &lam(i, j))
                            + &ranks[i] * &ranks[i]
                            + &ranks[j] * &ranks[j];
                        identities_ok &= lhs == rhs;
                    }
                    // zero-rank elements and pairs
                    if ranks[i].is_zero() && ranks[j].is_zero() {
                        identities_ok &=
                            q_bar(&s, &vectors[i], &vectors[j]) == -l.chi(&vectors[i], &vectors[j]);
                    }
                }
            }
            for i in 0..n {
                if ranks[i].is_zero() {
                    identities_ok &= q_bar(&s, &vectors[i], &vectors[i]) == int(-1);
                }
                for j in i + 1..n {
                    for k in j + 1..n {
                        if !ranks[j].is_zero() {
                            // chi(e_k, e_i) = 0 inside an exceptional sequence
                            identities_ok &= q_bar(&s, &lam(i, j), &lam(j, k))
                                == &ranks[i] * &ranks[k];
                        }
                        for t in k + 1..n {
                            identities_ok &= q_bar(&s, &lam(i, j), &lam(k, t)).is_zero();
                        }
                    }
                }
            }
        }
        let name = format!("{spec:?}");
        c.check(format!("{name}: 1000 words preserve exceptionality"), all_ok);
        c.check(format!("{name}: LR/RL round trips"), roundtrip_ok);
        c.check(format!("{name}: replay bit-exact"), replay_ok);
        c.check(format!("{name}: pair/triple/quadruple/zero-rank identities"), identities_ok);
    }
    c.finish();
}

#[test]
fn criterion_05_norm_descent() {
    let mut c = Criterion::new("05 norm descent");
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (s, basis) = setup(&ModelSpec::P2);
    let basis = basis.unwrap();
    let mut recovered = 0;
    for _ in 0..100 {
        let word = random_word(&mut rng, 3, 10);
        let scrambled = apply_word(s.lattice(), &basis, &word).unwrap();
        let (minimized, descent) = norm_minimize(&s, &scrambled, DescentOptions::default());
        if basis_norm(&s, &minimized) == int(3)
            && apply_word(s.lattice(), &scrambled, &descent).unwrap() == minimized
        {
            recovered += 1;
        }
    }
    c.check(format!("P2 scrambles recover norm 3 ({recovered}/100)"), recovered == 100);

    let (s, basis) = setup(&ModelSpec::P1xP1 { c: 0 });
    let basis = basis.unwrap();
    let mut recovered = 0;
    for _ in 0..100 {
        let word = random_word(&mut rng, 4, 10);
        let scrambled = apply_word(s.lattice(), &basis, &word).unwrap();
        let (minimized, _) = norm_minimize(&s, &scrambled, DescentOptions::default());
        if basis_norm(&s, &minimized) == int(4) {
            recovered += 1;
        }
    }
    c.check(
        format!("P1xP1(0) scrambles recover norm 4 ({recovered}/100)"),
        recovered == 100,
    );
    c.finish();
}

#[test]
fn criterion_06_toric_fan_suite() {
    let mut c = Criterion::new("06 toric and fan suite");

    let (s, basis) = setup(&ModelSpec::P2);
    let ts = toric_system_of(&s, &basis.unwrap()).unwrap();
    c.check(
        "P2 lambdas all equal with square 1 (lambda = (H, H, H))",
        ts.lambdas.iter().all(|l| *l == ts.lambdas[0])
            && s.q_rat(&ts.lambdas[0], &ts.lambdas[0]) == rat(1),
    );
    c.check(
        "P2 a_{i,i+1} = 1",
        (1..=3).all(|i| *ts.a_adjacent(i) == int(1)),
    );
    let report = verify_toric_system(s.ns_gram(), s.canonical_class(), &ts);
    c.check("P2 all six axioms", report.all_pass());
    c.check("P2 Markov gamma = 3", report.markov_gamma == Some(int(3)));
    let fan = fan_of(&ts).unwrap();
    c.check("P2 fan relations hold with one constant", check_fan_relations(&ts, &fan).is_ok());
    c.check("P2 h positive", fan.h.is_positive());
    let poly = polygon_report(&ts, &fan);
    c.check("P2 at least 3 extremal rays", poly.extremal.len() >= 3);
    c.check("P2 origin strictly interior", poly.origin_strictly_interior);

    for cc in [0i64, 1] {
        let (s, basis) = setup(&ModelSpec::P1xP1 { c: cc });
        let ts = toric_system_of(&s, &basis.unwrap()).unwrap();
        let report = verify_toric_system(s.ns_gram(), s.canonical_class(), &ts);
        c.check(format!("P1xP1({cc}) all six axioms"), report.all_pass());
        let fan = fan_of(&ts).unwrap();
        c.check(
            format!("P1xP1({cc}) fan relations with single h"),
            check_fan_relations(&ts, &fan).is_ok(),
        );
        c.check(format!("P1xP1({cc}) h positive"), fan.h.is_positive());
        let poly = polygon_report(&ts, &fan);
        c.check(format!("P1xP1({cc}) >= 3 extremal"), poly.extremal.len() >= 3);
        c.check(
            format!("P1xP1({cc}) origin strictly interior"),
            poly.origin_strictly_interior,
        );
    }
    c.finish();
}

#[test]
fn criterion_07_minimal_model_program() {
    let mut c = Criterion::new("07 minimal model program");

    let (s, basis) = setup(&ModelSpec::F1 { c: 1 });
    let run = minimal_model(&s, basis.as_ref(), 10).unwrap();
    c.check("F1(1): exactly one contraction", run.steps.len() == 1);
    c.check(
        "F1(1): K.e = ±1",
        run.steps[0].k_dot_e.magnitude() == BigInt::one().magnitude(),
    );
    c.check(
        "F1(1): defect preserved at 0",
        run.steps[0].defect_before == Some(BigInt::zero())
            && run.steps[0].defect_after == Some(BigInt::zero()),
    );
    c.check("F1(1): reached a minimal lattice", run.status == MmpStatus::Minimal);
    let class = classify_minimal(&run.final_structure, run.final_basis.as_ref().unwrap()).unwrap();
    c.check("F1(1): classification is the plane", class.kind == MinimalKind::P2);

    for k in 1..=5usize {
        let (s, basis) = setup(&ModelSpec::BlowupP2 { k });
        let run = minimal_model(&s, basis.as_ref(), 10).unwrap();
        c.check(format!("BlowupP2({k}): {k} contractions"), run.steps.len() == k);
        c.check(
            format!("BlowupP2({k}): final K^2 = 9"),
            run.final_structure.k_squared() == rat(9),
        );
        c.check(
            format!("BlowupP2({k}): every step has K.e = ±1"),
            run.steps
                .iter()
                .all(|st| st.k_dot_e.magnitude() == BigInt::one().magnitude()),
        );
    }
    c.finish();
}

#[test]
fn criterion_08_rank_reduction() {
    let mut c = Criterion::new("08 rank reduction theorems");
    let mut specs: Vec<(String, ModelSpec)> = vec![("F1(1)".into(), ModelSpec::F1 { c: 1 })];
    for k in 1..=5usize {
        specs.push((format!("BlowupP2({k})"), ModelSpec::BlowupP2 { k }));
    }
    for (name, spec) in specs {
        let (s, basis) = setup(&spec);
        let basis = basis.unwrap();
        let (final_basis, word, report) = reduce_ranks(&s, &basis).unwrap();
        c.check(
            format!("{name}: all final ranks are 1"),
            report.status == ReduceStatus::AllRanksOne
                && final_basis.ranks(&s).iter().all(|r| r.is_one()),
        );
        c.check(
            format!("{name}: intermediate pattern has 3 or 4 nonzero ranks"),
            (3..=4).contains(&report.nonzero_count),
        );
        c.check(
            format!("{name}: word replays to the final basis"),
            apply_word(s.lattice(), &basis, &word).unwrap() == final_basis,
        );
        c.check(
            format!("{name}: final family is an exceptional basis"),
            is_exceptional_sequence(s.lattice(), final_basis.vectors()).is_basis == Some(true),
        );
    }
    c.finish();
}

#[test]
fn criterion_09_existence_criterion() {
    let mut c = Criterion::new("09 existence criterion");
    let (s, _) = setup(&ModelSpec::P2);
    c.check(
        "P2 falls in case 1",
        vial_criterion(&s).unwrap().case == CriterionCase::P2Case,
    );
    let (s, _) = setup(&ModelSpec::P1xP1 { c: 0 });
    c.check(
        "P1xP1(0) falls in case 2",
        vial_criterion(&s).unwrap().case == CriterionCase::P1xP1Case,
    );
    for k in 1..=5usize {
        let (s, _) = setup(&ModelSpec::BlowupP2 { k });
        c.check(
            format!("BlowupP2({k}) falls in case 3"),
            vial_criterion(&s).unwrap().case == CriterionCase::BlowupCase,
        );
    }
    let (s, _) = setup(&ModelSpec::RuledSurface { genus: 2 });
    c.check(
        "ruled surface of genus 2 is refused: defect -16",
        vial_criterion(&s).unwrap_err() == CriterionError::NonzeroDefect(int(-16)),
    );
    c.finish();
}

#[test]
fn criterion_10_defect_arithmetic() {
    let mut c = Criterion::new("10 defect arithmetic");
    for g in 0..=4i64 {
        let (s, _) = setup(&ModelSpec::RuledSurface { genus: g as u32 });
        c.check(
            format!("Ruled({g}): defect = -8g = {}", -8 * g),
            s.defect().unwrap().defect == int(-8 * g),
        );
        let e: Vec<BigInt> = vec![int(0), int(0), int(1), int(0)];
        let (_, step) = contract(&s, &e).unwrap();
        let expected = int(4 * g * (g - 3));
        c.check(
            format!("Ruled({g}): contracted defect = 4g(g-3) = {expected}"),
            step.defect_after == Some(expected.clone()),
        );
        let sign_ok = match g {
            1 | 2 => expected.is_negative(),
            0 | 3 => expected.is_zero(),
            _ => expected.is_positive(),
        };
        c.check(format!("Ruled({g}): sign pattern"), sign_ok);
    }
    c.finish();
}
