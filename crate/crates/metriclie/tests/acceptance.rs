//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Every tolerance is exact (rational or Q(sqrt(6)) arithmetic) unless noted.

mod common;

use metriclie::catalog::{self, InstStructure};
use metriclie::curvature::MetricLieAlgebra;
use metriclie::exactnum::{basis_vector, scale_vector, Matrix, Scalar};
use metriclie::extensions::{
    build_kahler_einstein, build_sasaki_einstein, build_z_standard_sasaki,
    check_generalized_nilsoliton, kahler_reduction, standard_extension, ZStandardData,
};
use metriclie::liealg::LieAlgebra;
use metriclie::nikolayevsky::{
    constrained_derivations, nikolayevsky_derivation, symmetric_part_identity_family, HKind,
    NikOutcome,
};
use metriclie::notation::{parse_algebra, print_algebra, print_metric};
use metriclie::structures::{
    check_sasaki, check_standard_decomposition, check_z_standard, is_pseudo_iwasawa,
    kahler_quotient, orthogonal_complement, quotient_ricci_relation,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn entry_instances(id: &str) -> Vec<catalog::EntryInstance> {
    let entry = catalog::find(id).expect("catalog entry");
    entry
        .parameter_samples()
        .expect("parameter samples")
        .iter()
        .map(|p| entry.instantiate(p).expect("instantiation"))
        .collect()
}

fn last_basis_decomposition(
    mla: &MetricLieAlgebra,
) -> metriclie::structures::StandardDecomposition {
    let n = mla.dim();
    let e0 = basis_vector(n, n - 1);
    let ideal = orthogonal_complement(mla, &[e0.clone()]);
    check_standard_decomposition(mla, &ideal, &e0).expect("standard decomposition at e_n")
}

/// Criterion: the two printed Ricci operators reproduce bit-exactly in
/// rational mode.
#[test]
fn ricci_golden_matrices() {
    let ex1 = &entry_instances("ex1")[0];
    let op = ex1.mla().unwrap().ricci().operator;
    let mut want = Matrix::zeros(4, 4);
    want[(2, 3)] = Scalar::rat(-1, 2);
    assert_eq!(op, want, "first golden Ricci operator");

    let ex2 = &entry_instances("ex2")[0];
    let op = ex2.mla().unwrap().ricci().operator;
    let mut want = Matrix::zeros(4, 4);
    want[(0, 0)] = Scalar::rat(-1, 2);
    want[(2, 2)] = Scalar::rat(-1, 2);
    want[(3, 3)] = Scalar::rat(1, 2);
    assert_eq!(op, want, "second golden Ricci operator");
    println!("[PASS] Ricci golden matrices reproduced bit-exactly");
}

/// Criterion: the generalized nilsoliton identity verified exactly on the
/// first worked family (6 samples x tau = +-1, lambda = 0) and the second
/// (mu in 0,1,2 over Q(sqrt 6), lambda = -1/2).
#[test]
fn nilsoliton_verification() {
    let mut count = 0;
    for inst in entry_instances("ex1") {
        let tau = inst.params["tau"].clone();
        let tau_i = if tau.is_one() { 1 } else { -1 };
        let base = inst.mla().unwrap();
        let d = inst.derivation().unwrap();
        let ds = base.symmetric_part(d);
        assert!((&ds * &ds).trace().is_zero(), "Tr((D^s)^2) = 0");
        let rep = check_generalized_nilsoliton(base, d, tau_i).unwrap();
        assert!(rep.equation_holds && rep.einstein && rep.minus_trace_not_eigenvalue);
        assert_eq!(rep.lambda, s(0));
        count += 1;
    }
    assert_eq!(count, 12, "6 parameter samples x tau = +-1");
    for inst in entry_instances("ex2") {
        let base = inst.mla().unwrap();
        let d = inst.derivation().unwrap();
        let ds = base.symmetric_part(d);
        assert_eq!(ds.trace(), Scalar::surd(1, 2, 6), "Tr(D^s) in Q(sqrt 6)");
        assert_eq!((&ds * &ds).trace(), Scalar::rat(1, 2));
        let rep = check_generalized_nilsoliton(base, d, 1).unwrap();
        assert!(rep.equation_holds && rep.einstein && rep.minus_trace_not_eigenvalue);
        assert_eq!(rep.lambda, Scalar::rat(-1, 2));
        count += 1;
    }
    assert_eq!(count, 15);
    println!("[PASS] generalized nilsoliton identity exact at all {count} samples");
}

/// Criterion: every low-dimensional and dimension-7 classification entry is
/// Sasaki, z-standard, and Einstein with lambda = dim - 1, exactly.
#[test]
fn classification_entries() {
    let ids = [
        "prop5-dim3",
        "prop5-dim5-pos",
        "prop5-dim5-neg",
        "thm4.1-family1",
        "thm4.1-family2",
        "thm4.1-family3",
    ];
    let mut count = 0;
    for id in ids {
        for inst in entry_instances(id) {
            let sas = match &inst.structure {
                Some(InstStructure::Sasaki(acm)) => acm,
                _ => panic!("{id} should carry a Sasaki structure"),
            };
            let verdict = check_sasaki(sas);
            assert!(verdict.ok, "{id}: {}", verdict.failure_summary());
            let dec = last_basis_decomposition(&sas.mla);
            let z = check_z_standard(sas, &dec);
            assert!(z.ok, "{id}: {}", z.failure_summary());
            let lambda = sas.mla.is_einstein().expect("Einstein");
            assert_eq!(lambda, s(sas.mla.dim() as i64 - 1), "{id}");
            count += 1;
        }
    }
    assert_eq!(count, 3 + 4 + 5 + 25, "sample count over the grids");
    println!("[PASS] classification entries: Sasaki + z-standard + Einstein at {count} samples");
}

/// Criterion: reduction inverts the Sasaki-Einstein builder on the nose, and
/// the Kahler-Einstein output equals the Sasaki output quotiented by its
/// center, for every pseudo-Kahler catalog seed.
#[test]
fn reduction_extension_roundtrips() {
    let ids = [
        "prop5-dim3",
        "prop5-dim5-pos",
        "prop5-dim5-neg",
        "abelian-r2",
        "abelian-r4",
        "abelian-r6",
        "thm4.1-family1",
        "thm4.1-family2",
        "thm4.1-family3",
        "h11-omega1",
        "dim9-final",
    ];
    let mut count = 0;
    for id in ids {
        for inst in entry_instances(id) {
            let seed = inst.seed().unwrap();
            let (acm, dec) = build_sasaki_einstein(&seed.reduction, &seed.d_check)
                .unwrap_or_else(|e| panic!("{id}: build failed: {e}"));
            let red = kahler_reduction(&acm, &dec).unwrap();
            assert_eq!(red.data.tau, seed.tau, "{id}: tau");
            assert_eq!(red.data.h, seed.h, "{id}: h");
            assert_eq!(red.data.d_check, seed.d_check, "{id}: D_check");
            assert_eq!(
                print_algebra(red.data.reduction.mla.algebra()),
                print_algebra(seed.reduction.mla.algebra()),
                "{id}: reduced structure constants"
            );
            assert_eq!(
                red.data.reduction.mla.metric(),
                seed.reduction.mla.metric(),
                "{id}: reduced metric"
            );
            assert_eq!(red.data.reduction.j, seed.reduction.j, "{id}: reduced J");

            let (ke, _) = build_kahler_einstein(&seed.reduction, &seed.d_check).unwrap();
            let q = kahler_quotient(&acm).unwrap();
            assert_eq!(
                print_algebra(q.reduction.mla.algebra()),
                print_algebra(ke.mla.algebra()),
                "{id}: quotient constants"
            );
            assert_eq!(q.reduction.mla.metric(), ke.mla.metric(), "{id}: quotient metric");
            assert_eq!(q.reduction.j, ke.j, "{id}: quotient J");
            count += 1;
        }
    }
    println!("[PASS] reduction/extension round-trips exact on {count} seeds");
}

/// Criterion: the feasibility dichotomy on the six-dimensional nilpotent
/// pair, and the conformal-unitary canonical derivation of abelian spaces.
#[test]
fn feasibility_dichotomy() {
    for inst in entry_instances("h11-omega1") {
        let pk = inst.kahler().unwrap();
        let (particular, kernel) =
            symmetric_part_identity_family(&pk.mla, &pk.j).expect("nonempty family");
        let mut want = Matrix::zeros(6, 6);
        want[(0, 0)] = Scalar::rat(1, 2);
        want[(1, 1)] = Scalar::rat(1, 2);
        want[(2, 2)] = s(1);
        want[(3, 3)] = s(1);
        want[(4, 4)] = Scalar::rat(3, 2);
        want[(5, 5)] = Scalar::rat(3, 2);
        // diag(1/2,1/2,1,1,3/2,3/2) is in the affine family
        let diff = &want - &particular;
        let n = 6;
        let flat: Vec<Scalar> = (0..n * n).map(|i| diff[(i / n, i % n)].clone()).collect();
        let inside = if kernel.is_empty() {
            diff.is_zero()
        } else {
            let cols: Vec<Vec<Scalar>> = kernel
                .iter()
                .map(|k| (0..n * n).map(|i| k[(i / n, i % n)].clone()).collect())
                .collect();
            Matrix::from_columns(&cols, n * n).affine_solve(&flat).is_some()
        };
        assert!(inside, "printed solution belongs to the family");
    }
    for inst in entry_instances("h11-omega2") {
        let pk = inst.kahler().unwrap();
        assert!(
            symmetric_part_identity_family(&pk.mla, &pk.j).is_none(),
            "the second structure admits no derivation with symmetric part id"
        );
    }
    // cu-canonical derivation of abelian R^{2n} is the identity, n = 1, 2, 3
    for id in ["abelian-r2", "abelian-r4", "abelian-r6"] {
        for inst in entry_instances(id) {
            let pk = inst.kahler().unwrap();
            let space = constrained_derivations(&pk.mla, HKind::Cu, Some(&pk.j)).unwrap();
            match nikolayevsky_derivation(&pk.mla, &space).unwrap() {
                NikOutcome::Derivation(res) => {
                    assert_eq!(res.n, Matrix::identity(pk.mla.dim()), "{id}");
                }
                NikOutcome::UnresolvedFamily { .. } => panic!("{id}: unresolved"),
            }
        }
    }
    // three-way equivalence on every pseudo-Kahler catalog entry:
    // family nonempty <=> the cu space contains a nonzero-trace element
    //                 <=> the canonical derivation is nonzero
    for id in ["abelian-r2", "abelian-r4", "abelian-r6", "h11-omega1", "h11-omega2", "dim9-final"]
    {
        for inst in entry_instances(id) {
            let pk = inst.kahler().unwrap();
            let family_nonempty = symmetric_part_identity_family(&pk.mla, &pk.j).is_some();
            let space = constrained_derivations(&pk.mla, HKind::Cu, Some(&pk.j)).unwrap();
            let has_trace = space.basis.iter().any(|b| !b.trace().is_zero());
            let nik_nonzero = match nikolayevsky_derivation(&pk.mla, &space).unwrap() {
                NikOutcome::Derivation(res) => !res.n.is_zero(),
                NikOutcome::UnresolvedFamily { .. } => panic!("{id}: unresolved"),
            };
            assert_eq!(family_nonempty, has_trace, "{id}");
            assert_eq!(family_nonempty, nik_nonzero, "{id}");
        }
    }
    println!("[PASS] feasibility dichotomy and abelian canonical derivations");
}

/// Criterion: the algebraic property suites with no catalog-scale numbers.
#[test]
fn algebraic_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(417);

    // d^2 = 0 iff Jacobi, on 100 random (mostly invalid) constant sets
    let mut invalid_seen = 0;
    for _ in 0..100 {
        let dim = 3 + (invalid_seen % 3) as usize;
        let table = common::random_constants(&mut rng, dim);
        let alg = LieAlgebra::new_unchecked(dim, table);
        let jacobi = alg.jacobi_defect().is_none();
        let dd = alg.d_squared_vanishes();
        assert_eq!(jacobi, dd, "the two predicates must agree");
        if !jacobi {
            invalid_seen += 1;
        }
    }
    assert!(invalid_seen >= 50, "the perturbed sets are mostly invalid");

    // blockwise vs direct Ricci on 30 random (nilpotent base, derivation, tau)
    for k in 0..30 {
        let base = common::random_nilpotent_metric(&mut rng);
        let d = common::random_derivation(&mut rng, base.algebra());
        let tau = if k % 2 == 0 { 1 } else { -1 };
        let (ext, _) = standard_extension(&base, &d, tau).unwrap();
        let block = base.ricci_of_standard_extension_blockwise(&d, tau).unwrap();
        assert_eq!(block.ric, ext.ricci().ric, "blockwise = direct");
    }

    // and on random central extensions by closed cocycles
    use metriclie::extensions::{central_extension, CentralCocycle, CentralExtensionSpec};
    use metriclie::exterior::{binomial, KForm};
    use rand::Rng;
    for k in 0..10 {
        let base = common::random_nilpotent_metric(&mut rng);
        let n = base.dim();
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        // closed 2-forms = kernel of d on degree 2, columns over the pairs
        let triples = binomial(n, 3);
        let closed: Vec<Vec<Scalar>> = if triples == 0 {
            (0..pairs.len())
                .map(|c| {
                    let mut v = vec![s(0); pairs.len()];
                    v[c] = s(1);
                    v
                })
                .collect()
        } else {
            let cols: Vec<Vec<Scalar>> = pairs
                .iter()
                .map(|&(i, j)| {
                    let mut f = KForm::zero(n, 2);
                    f.add_term(&[i, j], &s(1));
                    let df = base.algebra().cedifferential(&f);
                    let mut dense = Vec::with_capacity(triples);
                    for a in 0..n {
                        for b in (a + 1)..n {
                            for c in (b + 1)..n {
                                dense.push(df.coeff(&[a, b, c]).clone());
                            }
                        }
                    }
                    dense
                })
                .collect();
            Matrix::from_columns(&cols, triples).nullspace()
        };
        if closed.is_empty() {
            continue;
        }
        // one or two random closed cocycles with random signs
        let count = 1 + (k % 2);
        let cocycles: Vec<CentralCocycle> = (0..count)
            .map(|c| {
                let mut f = KForm::zero(n, 2);
                for basis_vec in &closed {
                    if rng.gen_bool(0.5) {
                        let coeff = common::small_scalar(&mut rng);
                        for (pos, &(i, j)) in pairs.iter().enumerate() {
                            if !basis_vec[pos].is_zero() {
                                f.add_term(&[i, j], &(&coeff * &basis_vec[pos]));
                            }
                        }
                    }
                }
                CentralCocycle {
                    label: format!("z{c}"),
                    epsilon: if rng.gen_bool(0.5) { 1 } else { -1 },
                    sigma: f,
                }
            })
            .collect();
        let pairs_spec: Vec<(i8, KForm)> =
            cocycles.iter().map(|c| (c.epsilon, c.sigma.clone())).collect();
        let ext = central_extension(&base, &CentralExtensionSpec { cocycles }).unwrap();
        let block = base.ricci_of_central_extension_blockwise(&pairs_spec).unwrap();
        assert_eq!(block.ric, ext.ricci().ric, "central blockwise = direct");
    }

    // every nilpotent pseudo-Kahler catalog entry is Ricci-flat
    for id in ["abelian-r2", "abelian-r4", "abelian-r6", "h11-omega1", "h11-omega2", "dim9-final"]
    {
        for inst in entry_instances(id) {
            let pk = inst.kahler().unwrap();
            assert!(pk.mla.algebra().nilpotency_step().is_some());
            assert!(pk.mla.is_ricci_flat(), "{id} must be Ricci-flat");
        }
    }

    // nilpotency forces unimodularity and a vanishing Killing form, on every
    // nilpotent catalog algebra
    for entry in catalog::entries().unwrap() {
        let sample = &entry.parameter_samples().unwrap()[0];
        let inst = entry.instantiate(sample).unwrap();
        let Ok(mla) = inst.mla() else { continue };
        if mla.algebra().nilpotency_step().is_some() {
            assert!(mla.algebra().is_unimodular(), "{}", entry.id);
            assert!(mla.algebra().killing_form().is_zero(), "{}", entry.id);
        }
    }

    // Einstein outcomes on the (tau, c, h) grid: exactly tau = -1, c = +-1,
    // h = 2c (the bullet forces h = 2c for scalar parts)
    let seed_pk = || {
        let inst = &entry_instances("abelian-r2")[0];
        inst.kahler().unwrap().clone()
    };
    let grid = [s(-2), s(-1), Scalar::rat(-1, 2), Scalar::rat(1, 2), s(1), s(2)];
    for tau in [1i8, -1] {
        for c in &grid {
            let data = ZStandardData {
                reduction: seed_pk(),
                d_check: Matrix::identity(2).scale(c),
                tau,
                h: &s(2) * c,
            };
            let (acm, _) = build_z_standard_sasaki(&data).unwrap();
            let expected = tau == -1 && (*c == s(1) || *c == s(-1));
            assert_eq!(acm.mla.is_einstein().is_some(), expected, "tau={tau}, c={c}");
        }
        for h in [s(-2), s(0), s(2)] {
            let pk = seed_pk();
            let data =
                ZStandardData { reduction: pk.clone(), d_check: pk.j.clone(), tau, h };
            let (acm, _) = build_z_standard_sasaki(&data).unwrap();
            assert!(acm.mla.is_einstein().is_none(), "c = 0 is never Einstein");
        }
    }

    // quotient Ricci relation and Ric(xi) = (dim - 1) xi on all Sasaki entries
    let sasaki_ids = [
        "prop5-dim3",
        "prop5-dim5-pos",
        "prop5-dim5-neg",
        "thm4.1-family1",
        "thm4.1-family2",
        "thm4.1-family3",
    ];
    for id in sasaki_ids {
        for inst in entry_instances(id) {
            let sas = inst.sasaki().unwrap();
            let out = sas.mla.ricci().operator.apply(&sas.xi);
            assert_eq!(out, scale_vector(&s(sas.mla.dim() as i64 - 1), &sas.xi), "{id}");
            let q = kahler_quotient(sas).unwrap();
            assert!(quotient_ricci_relation(sas, &q), "{id}");
        }
    }

    // rational eigenvalues of every computed cu-canonical derivation
    for id in ["abelian-r2", "abelian-r4", "abelian-r6", "h11-omega1", "h11-omega2", "dim9-final"]
    {
        for inst in entry_instances(id) {
            let pk = inst.kahler().unwrap();
            let space = constrained_derivations(&pk.mla, HKind::Cu, Some(&pk.j)).unwrap();
            match nikolayevsky_derivation(&pk.mla, &space).unwrap() {
                NikOutcome::Derivation(res) => {
                    assert!(res.semisimple, "{id}");
                    assert!(res.eigenvalues.is_some(), "{id}: rational eigenvalues");
                }
                NikOutcome::UnresolvedFamily { .. } => panic!("{id}: unresolved"),
            }
        }
    }

    // Sasaki-Einstein outputs over non-abelian reductions are never
    // pseudo-Iwasawa
    for id in ["thm4.1-family2", "thm4.1-family3", "h11-omega1", "dim9-final"] {
        for inst in entry_instances(id) {
            let seed = inst.seed().unwrap();
            assert!(seed.reduction.mla.algebra().nilpotency_step() > Some(1));
            let (acm, dec) = build_sasaki_einstein(&seed.reduction, &seed.d_check).unwrap();
            assert!(!is_pseudo_iwasawa(&acm.mla, &dec), "{id}");
        }
    }

    println!("[PASS] algebraic property suites");
}

/// Criterion: parser round-trip identity on the catalog and on 100 random
/// valid algebras; single-constant mutations that break the Jacobi identity
/// are rejected with a located diagnostic.
#[test]
fn parser_roundtrip_and_fuzz() {
    // catalog round-trips (algebra and metric text of every instance)
    for entry in catalog::entries().unwrap() {
        for sample in entry.parameter_samples().unwrap() {
            let inst = entry.instantiate(&sample).unwrap();
            if let Ok(mla) = inst.mla() {
                let canon = print_algebra(mla.algebra());
                let reparsed = parse_algebra(&canon).unwrap();
                assert_eq!(print_algebra(&reparsed), canon, "{}", entry.id);
                assert_eq!(
                    reparsed.basis_bracket(0, 1),
                    mla.algebra().basis_bracket(0, 1)
                );
                let mcanon = print_metric(mla.metric());
                if mcanon != "0" {
                    let m = metriclie::notation::parse_metric(&mcanon, mla.dim()).unwrap();
                    assert_eq!(&m, mla.metric(), "{}", entry.id);
                }
            }
        }
    }

    // 100 random valid algebras
    let mut rng = ChaCha8Rng::seed_from_u64(1105);
    for _ in 0..100 {
        let alg = common::random_valid_algebra(&mut rng);
        let canon = print_algebra(&alg);
        let reparsed = parse_algebra(&canon).unwrap();
        assert_eq!(print_algebra(&reparsed), canon);
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                assert_eq!(alg.basis_bracket(i, j), reparsed.basis_bracket(i, j));
            }
        }
    }

    // mutation fuzz: perturb one constant of a catalog algebra; whenever the
    // mutation breaks Jacobi the parser must reject with a located triple
    use rand::Rng;
    let texts = [
        "(0,0,e12,e13)",
        "(0,0,0,e12,e13,e14-e23)",
        "(2/3*e17,2/3*e27,e12+1/3*e27+4/3*e37,-1/3*e17+4/3*e47,2*e12+2*e13+2*e24+2*e57,2*e12+2*e13+2*e24+2*e57,0)",
    ];
    let mut rejected = 0;
    let mut attempts = 0;
    while rejected < 30 && attempts < 3000 {
        attempts += 1;
        let text = texts[rng.gen_range(0..texts.len())];
        let alg = parse_algebra(text).unwrap();
        let dim = alg.dim();
        // mutate: add a random term to one differential
        let mut diffs = alg.differentials();
        let slot = rng.gen_range(0..dim);
        let i = rng.gen_range(0..dim - 1);
        let j = rng.gen_range(i + 1..dim);
        diffs[slot].add_term(&[i, j], &common::nonzero_small_scalar(&mut rng));
        let mutated = {
            // print the mutated tuple through a throwaway unchecked algebra
            let mut table = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
            for (k, dk) in diffs.iter().enumerate() {
                for (idx, c) in dk.terms() {
                    table[idx[0]][idx[1]][k] = -c;
                    table[idx[1]][idx[0]][k] = c.clone();
                }
            }
            let unchecked = LieAlgebra::new_unchecked(dim, table);
            if unchecked.jacobi_defect().is_none() {
                continue; // mutation kept Jacobi; irrelevant
            }
            print_algebra(&unchecked)
        };
        match parse_algebra(&mutated) {
            Err(metriclie::notation::ParseError::Jacobi { i, j, k }) => {
                assert!(i >= 1 && j > i && k > j && k <= dim, "located triple");
                rejected += 1;
            }
            other => panic!("expected a located Jacobi rejection, got {other:?}"),
        }
    }
    assert!(rejected >= 30, "found {rejected} Jacobi-breaking mutants");
    println!("[PASS] parser round-trips and mutation fuzz ({rejected} mutants rejected)");
}

/// The full catalog re-verification itself: every declarative claim passes.
#[test]
fn catalog_verification_passes() {
    let report = catalog::verify::run(&catalog::verify::Filter::default()).unwrap();
    assert!(report.total >= 60, "at least 60 checks, got {}", report.total);
    for r in &report.records {
        assert!(r.pass, "{} [{}] {}: {}", r.entry, r.params, r.claim, r.detail);
    }
    println!("[PASS] catalog verification: {} checks", report.total);
}

/// Determinism: two runs produce byte-identical reports.
#[test]
fn catalog_verification_deterministic() {
    let a = catalog::verify::run(&catalog::verify::Filter::default()).unwrap();
    let b = catalog::verify::run(&catalog::verify::Filter::default()).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    println!("[PASS] verification report is deterministic");
}
