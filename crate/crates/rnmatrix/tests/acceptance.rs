//! End-to-end acceptance gate. Each test covers one contract of the crate
//! and prints a single PASS line (visible with `--nocapture`); a panic is
//! the corresponding FAIL.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rnmatrix::config::Budgets;
use rnmatrix::formula::{enumerate_corpus, Closure, Formula, ModalIndex, Signature, Substitution};
use rnmatrix::hilbert::{check_proof, search_proof, ProofSystem};
use rnmatrix::kripke::{cross_validate, curated_formulas};
use rnmatrix::levels::{check_validity_n, compute_levels, default_fragment};
use rnmatrix::matrix::{matrix_for, Connective, MatrixSpec, Snapshot, SystemName};
use rnmatrix::parser::parse;
use rnmatrix::restriction::{check_structurality, Engine, Restriction, RnSystem};
use rnmatrix::valuation::{check_validity, refutation_extending};

fn pass(n: usize, title: &str, start: Instant) {
    println!("acceptance {n} ({title}): PASS [{:.1?}]", start.elapsed());
}

fn uf(s: &str) -> Formula {
    parse(s, Signature::Unimodal).expect("fixture parses")
}

fn bf(s: &str) -> Formula {
    parse(s, Signature::Bimodal).expect("fixture parses")
}

fn pair(z1: u8, z2: u8) -> Snapshot {
    Snapshot::pair(z1 == 1, z2 == 1)
}

#[test]
fn a1_base_system_refutes_k_t_and_four_with_the_pinned_witnesses() {
    let start = Instant::now();
    let m = matrix_for(SystemName::M);
    let bits = Budgets::default().free_bits;

    let cases: [(&str, Vec<(Formula, Snapshot)>); 3] = [
        (
            "#(p -> q) -> (#p -> #q)",
            vec![(uf("p"), pair(1, 1)), (uf("q"), pair(1, 0))],
        ),
        ("#p -> p", vec![(uf("p"), pair(0, 1))]),
        ("#p -> ##p", vec![(uf("#p"), pair(1, 0))]),
    ];
    for (goal, pins) in &cases {
        let goal = uf(goal);
        let v = refutation_extending(&m, &goal, pins, bits)
            .expect("within budget")
            .unwrap_or_else(|| panic!("{goal} should be refutable with the pinned values"));
        for (f, z) in pins {
            assert_eq!(v.snapshot(f), Some(*z), "pin on {f} in the witness for {goal}");
        }
        assert!(v.is_legal(&m));
        assert!(!v.snapshot(&goal).unwrap().is_designated());
    }
    pass(1, "pinned refutations of K, T, 4 in M", start);
}

/// Expands a cell spec over a system's value set: "1*" is the fiber over
/// first coordinate 1, "10" the single snapshot (1,0), and so on.
fn expand(m: &MatrixSpec, spec: &str) -> BTreeSet<Snapshot> {
    let b = spec.as_bytes();
    m.values()
        .iter()
        .copied()
        .filter(|z| {
            z.truth() == (b[0] == b'1')
                && (b[1] == b'*' || z.modal1() == (b[1] == b'1'))
        })
        .collect()
}

fn cell(m: &MatrixSpec, conn: Connective, args: &[Snapshot]) -> BTreeSet<Snapshot> {
    m.apply_multiop(conn, args)
        .expect("arguments lie in the matrix")
        .iter()
        .copied()
        .collect()
}

#[test]
fn a2_tables_are_bit_for_bit_exact_and_satisfy_the_side_conditions() {
    let start = Instant::now();
    let v4 = [pair(1, 1), pair(1, 0), pair(0, 1), pair(0, 0)];
    let v3 = [pair(1, 1), pair(1, 0), pair(0, 0)];

    struct Fixture {
        system: SystemName,
        rows: Vec<Snapshot>,
        neg: &'static [&'static str],
        mod1: &'static [&'static str],
        imp: &'static [&'static [&'static str]],
    }
    let fixtures = [
        Fixture {
            system: SystemName::M,
            rows: v4.to_vec(),
            neg: &["0*", "0*", "1*", "1*"],
            mod1: &["1*", "0*", "1*", "0*"],
            imp: &[
                &["1*", "1*", "0*", "0*"],
                &["1*", "1*", "0*", "0*"],
                &["1*", "1*", "1*", "1*"],
                &["1*", "1*", "1*", "1*"],
            ],
        },
        Fixture {
            system: SystemName::Mk,
            rows: v4.to_vec(),
            neg: &["0*", "0*", "1*", "1*"],
            mod1: &["1*", "0*", "1*", "0*"],
            imp: &[
                &["1*", "10", "0*", "00"],
                &["1*", "1*", "0*", "0*"],
                &["1*", "10", "1*", "10"],
                &["1*", "1*", "1*", "1*"],
            ],
        },
        Fixture {
            system: SystemName::Mkt,
            rows: v3.to_vec(),
            neg: &["0*", "0*", "1*"],
            mod1: &["1*", "0*", "0*"],
            imp: &[
                &["1*", "10", "00"],
                &["1*", "1*", "0*"],
                &["1*", "1*", "1*"],
            ],
        },
        Fixture {
            system: SystemName::Mkt4,
            rows: v3.to_vec(),
            neg: &["0*", "0*", "1*"],
            mod1: &["11", "0*", "0*"],
            imp: &[
                &["1*", "10", "00"],
                &["1*", "1*", "0*"],
                &["1*", "1*", "1*"],
            ],
        },
    ];

    for fx in &fixtures {
        let m = matrix_for(fx.system);
        let got: BTreeSet<Snapshot> = m.values().iter().copied().collect();
        let want: BTreeSet<Snapshot> = fx.rows.iter().copied().collect();
        assert_eq!(got, want, "value set of {}", fx.system);
        for (i, &z) in fx.rows.iter().enumerate() {
            assert_eq!(
                cell(&m, Connective::Neg, &[z]),
                expand(&m, fx.neg[i]),
                "{}: ~{z}",
                fx.system
            );
            assert_eq!(
                cell(&m, Connective::Mod(ModalIndex::One), &[z]),
                expand(&m, fx.mod1[i]),
                "{}: #{z}",
                fx.system
            );
            for (j, &w) in fx.rows.iter().enumerate() {
                assert_eq!(
                    cell(&m, Connective::Imp, &[z, w]),
                    expand(&m, fx.imp[i][j]),
                    "{}: {z} -> {w}",
                    fx.system
                );
            }
        }
    }

    // side condition on MK's implication: x2 <= z2 => w2 for every option
    let mk = matrix_for(SystemName::Mk);
    for &z in &v4 {
        for &w in &v4 {
            for x in mk.apply_multiop(Connective::Imp, &[z, w]).unwrap() {
                assert!(
                    !x.modal1() || !z.modal1() || w.modal1(),
                    "MK {z} -> {w} admits {x}, breaking x2 <= z2 => w2"
                );
            }
        }
    }
    // side condition on MKT4's box: output second coordinate dominates the
    // input's
    let mkt4 = matrix_for(SystemName::Mkt4);
    for &z in &v3 {
        for w in mkt4.apply_multiop(Connective::Mod(ModalIndex::One), &[z]).unwrap() {
            assert!(
                !z.modal1() || w.modal1(),
                "MKT4 #{z} admits {w}, breaking w2 >= z2"
            );
        }
    }
    pass(2, "table fidelity and side conditions", start);
}

fn two_var_corpus(max_connectives: usize) -> Vec<Formula> {
    enumerate_corpus(
        &["p".to_string(), "q".to_string()],
        max_connectives,
        Signature::Unimodal,
        Budgets::default().corpus_cap,
    )
    .expect("corpus within cap")
}

#[test]
fn a3_nmatrix_and_rn_verdicts_agree_across_the_corpus() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let corpus = two_var_corpus(4);
    assert_eq!(corpus.len(), 3290);
    let lines: Vec<String> = corpus.iter().map(|f| f.to_string()).collect();
    for system in [SystemName::Mk, SystemName::Mkt, SystemName::Mkt4] {
        let report = rnmatrix::runner::compare_engines(system, &budgets, &lines);
        assert_eq!(report.total, 3290);
        assert_eq!(report.errors, 0, "{system}: no formula may error");
        assert!(
            report.disagreements.is_empty(),
            "{system}: {} verdict disagreement(s), first on {}",
            report.disagreements.len(),
            report.disagreements[0].formula
        );
    }
    pass(3, "refined matrices match their restriction systems on 3290 formulas", start);
}

#[test]
fn a4_validity_grows_along_the_system_chain() {
    let start = Instant::now();
    let bits = Budgets::default().free_bits;
    let corpus = two_var_corpus(4);
    let valid_set = |name: SystemName| -> BTreeSet<usize> {
        let m = matrix_for(name);
        corpus
            .iter()
            .enumerate()
            .filter(|(_, f)| check_validity(&m, f, bits).unwrap().is_valid())
            .map(|(i, _)| i)
            .collect()
    };
    let m = valid_set(SystemName::M);
    let mk = valid_set(SystemName::Mk);
    let mkt = valid_set(SystemName::Mkt);
    let mkt4 = valid_set(SystemName::Mkt4);
    assert!(m.is_subset(&mk), "M proves something MK does not");
    assert!(mk.is_subset(&mkt), "MK proves something MKT does not");
    assert!(mkt.is_subset(&mkt4), "MKT proves something MKT4 does not");
    // the shortest formula separating M from MK has more than 4
    // connectives, so only the upper steps are strict on this corpus
    assert!(mkt.len() > mk.len() && mkt4.len() > mkt.len());
    pass(4, "validity chain M <= MK < MKT < MKT4 on 3290 formulas", start);
}

fn stagewise_inclusion(trace: &rnmatrix::levels::LevelTrace) {
    let stages = trace.stages();
    for pair in stages.windows(2) {
        let prev: BTreeSet<usize> = pair[0].survivors.iter().copied().collect();
        let next: BTreeSet<usize> = pair[1].survivors.iter().copied().collect();
        assert!(
            next.is_subset(&prev),
            "level {} is not contained in level {}",
            pair[1].level,
            pair[0].level
        );
    }
}

#[test]
fn a5_level_fixpoints_validate_necessitation_and_only_shrink() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let engine = Engine::Nmatrix(matrix_for(SystemName::Mk));
    let goal = uf("#(p -> p)");

    let out = check_validity_n(&engine, &goal, &budgets).unwrap();
    assert!(out.verdict.is_valid(), "#(p -> p) holds once levels settle");
    let trace = &out.trace;
    assert!(
        trace.refuter_at(0, &goal).is_some(),
        "#(p -> p) must fail at level 0"
    );
    assert_eq!(trace.level_of_forcing(&uf("p -> p")), Some(1));
    assert_eq!(trace.level_of_forcing(&goal), Some(2));
    let sizes: Vec<usize> = trace.stages().iter().map(|s| s.survivors.len()).collect();
    assert_eq!(sizes, vec![16, 8, 4]);
    stagewise_inclusion(trace);

    // the hierarchy only ever shrinks, whatever the goal or engine
    let engines = [
        Engine::Nmatrix(matrix_for(SystemName::M)),
        Engine::Nmatrix(matrix_for(SystemName::Mk)),
        Engine::Nmatrix(matrix_for(SystemName::Mkt)),
        Engine::Nmatrix(matrix_for(SystemName::Mkt4)),
        Engine::Rn(RnSystem::rn_k()),
    ];
    for engine in &engines {
        for f in two_var_corpus(2) {
            let fragment = default_fragment(engine, &f, &budgets).unwrap();
            let trace = compute_levels(engine, &fragment, budgets.level_free_bits).unwrap();
            stagewise_inclusion(&trace);
        }
    }
    pass(5, "level hierarchy shrinks and forces #(p -> p) by level 2", start);
}

#[test]
fn a6_level_verdicts_match_the_kripke_oracle_on_the_curated_list() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let curated = curated_formulas();
    assert_eq!(curated.len(), 20);
    assert_eq!(curated.iter().filter(|(_, expected)| *expected).count(), 10);
    let formulas: Vec<Formula> = curated.iter().map(|(f, _)| f.clone()).collect();

    for system in [SystemName::Mk, SystemName::Mkt, SystemName::Mkt4] {
        let report = cross_validate(system, &formulas, 4, &budgets).unwrap();
        assert_eq!(report.entries.len(), 20);
        let disagreements = report.disagreements();
        assert!(
            disagreements.is_empty(),
            "{system}: {} disagreement(s), first on {}",
            disagreements.len(),
            disagreements[0].formula
        );
        for (entry, (_, expected)) in report.entries.iter().zip(&curated) {
            assert_eq!(
                entry.level_valid, *expected,
                "{system}: {} has the wrong verdict",
                entry.formula
            );
        }
    }
    pass(6, "level engine vs Kripke oracle, 60 comparisons, 0 disagreements", start);
}

#[test]
fn a7_every_theorem_found_by_search_is_semantically_valid() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let corpus = two_var_corpus(4);

    struct Case {
        system: &'static str,
        engines: Vec<Engine>,
        level: bool,
    }
    let rn = |r: Vec<Restriction>| Engine::Rn(RnSystem::new(matrix_for(SystemName::M), r).unwrap());
    let nm = |s: SystemName| Engine::Nmatrix(matrix_for(s));
    let cases = [
        Case { system: "H", engines: vec![nm(SystemName::M), rn(vec![])], level: false },
        Case { system: "HK", engines: vec![nm(SystemName::Mk), Engine::Rn(RnSystem::rn_k())], level: false },
        Case { system: "HKT", engines: vec![nm(SystemName::Mkt), Engine::Rn(RnSystem::rn_kt())], level: false },
        Case { system: "HKT4", engines: vec![nm(SystemName::Mkt4), Engine::Rn(RnSystem::rn_kt4())], level: false },
        Case { system: "HN", engines: vec![nm(SystemName::M)], level: true },
        Case { system: "HKN", engines: vec![nm(SystemName::Mk)], level: true },
        Case { system: "HKTN", engines: vec![nm(SystemName::Mkt)], level: true },
        Case { system: "HKT4N", engines: vec![nm(SystemName::Mkt4)], level: true },
    ];

    // the systems are independent; check them in parallel
    let counts: Vec<usize> = std::thread::scope(|scope| {
        let handles: Vec<_> = cases
            .iter()
            .map(|case| {
                let corpus = &corpus;
                let budgets = &budgets;
                scope.spawn(move || {
                    let system: ProofSystem = case.system.parse().unwrap();
                    let mut found = 0usize;
                    for goal in corpus {
                        let Some(proof) = search_proof(&system, goal, 8, budgets).unwrap() else {
                            continue;
                        };
                        found += 1;
                        check_proof(&system, &proof, &[], goal).unwrap_or_else(|d| {
                            panic!("{}: search emitted a bad proof of {goal}: {d}", case.system)
                        });
                        for engine in &case.engines {
                            if case.level {
                                assert!(
                                    check_validity_n(engine, goal, budgets)
                                        .unwrap()
                                        .verdict
                                        .is_valid(),
                                    "{}: proved {goal}, refuted by levels",
                                    case.system
                                );
                            } else {
                                assert!(
                                    engine
                                        .check_validity(goal, budgets.free_bits)
                                        .unwrap()
                                        .is_valid(),
                                    "{}: proved {goal}, refuted by {}",
                                    case.system,
                                    engine.base().name()
                                );
                            }
                        }
                    }
                    assert!(found > 0, "{}: search should find at least one theorem", case.system);
                    found
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let total_found: usize = counts.iter().sum();
    pass(
        7,
        &format!("search at depth 8 found {total_found} theorems, all semantically valid"),
        start,
    );
}

fn random_formula(rng: &mut ChaCha8Rng, vars: &[&str], budget: usize) -> Formula {
    if budget == 0 {
        return Formula::var(vars[rng.gen_range(0..vars.len())]);
    }
    match rng.gen_range(0..4u8) {
        0 => Formula::var(vars[rng.gen_range(0..vars.len())]),
        1 => Formula::neg(random_formula(rng, vars, budget - 1)),
        2 => Formula::mod1(random_formula(rng, vars, budget - 1)),
        _ => {
            let left = rng.gen_range(0..budget);
            Formula::imp(
                random_formula(rng, vars, left),
                random_formula(rng, vars, budget - 1 - left),
            )
        }
    }
}

#[test]
fn a8_admitted_valuations_are_closed_under_substitution() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let systems = [RnSystem::rn_k(), RnSystem::rn_kt(), RnSystem::rn_kt4()];
    let vars = ["p", "q", "r"];
    for (si, sys) in systems.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE97 + si as u64);
        for trial in 0..1000 {
            let a = random_formula(&mut rng, &vars, 3);
            let mut subst = Substitution::new();
            for v in a.variables() {
                subst = subst.bind(&v, random_formula(&mut rng, &["p", "q"], 2));
            }
            let template_closure = Closure::of(&a);
            let instance_closure = Closure::of(&subst.apply(&a));
            let sampled: Vec<_> = Engine::Rn(sys.clone())
                .valuations(&instance_closure, budgets.free_bits)
                .unwrap()
                .take(16)
                .collect();
            for v in &sampled {
                assert!(
                    check_structurality(sys, v, &subst, &template_closure).unwrap(),
                    "trial {trial}: composing an admitted valuation with {subst:?} left {a} unadmitted"
                );
            }
        }
    }
    pass(8, "3000 substitution-composition trials admitted", start);
}

#[test]
fn a9_bimodal_tables_dualities_and_swap() {
    let start = Instant::now();
    let bits = Budgets::default().free_bits;
    let m2 = matrix_for(SystemName::M2);
    assert_eq!(m2.values().len(), 8);

    // every cell of every connective is the fiber over the dictated bit
    let fiber = |b: bool| -> BTreeSet<Snapshot> {
        m2.values().iter().copied().filter(|x| x.truth() == b).collect()
    };
    for &z in m2.values() {
        assert_eq!(cell(&m2, Connective::Neg, &[z]), fiber(!z.truth()), "M2 ~{z}");
        assert_eq!(
            cell(&m2, Connective::Mod(ModalIndex::One), &[z]),
            fiber(z.modal1()),
            "M2 #1 {z}"
        );
        assert_eq!(
            cell(&m2, Connective::Mod(ModalIndex::Two), &[z]),
            fiber(z.modal2()),
            "M2 #2 {z}"
        );
        for &w in m2.values() {
            assert_eq!(
                cell(&m2, Connective::Imp, &[z, w]),
                fiber(!z.truth() || w.truth()),
                "M2 {z} -> {w}"
            );
        }
    }

    let dual = Engine::Rn(
        RnSystem::new(m2.clone(), vec![Restriction::Dual21, Restriction::Dual12]).unwrap(),
    );
    for goal in ["#2 p <-> ~#1 ~p", "#1 p <-> ~#2 ~p"] {
        assert!(
            dual.check_validity(&bf(goal), bits).unwrap().is_valid(),
            "{goal} should hold under the duality restrictions"
        );
    }

    let swap = Engine::Rn(RnSystem::new(m2.clone(), vec![Restriction::Swap]).unwrap());
    assert!(
        swap.check_validity(&bf("#2 #1 p -> #1 #2 p"), bits).unwrap().is_valid(),
        "modality swap should hold under the swap restriction"
    );
    pass(9, "bimodal tables, dualities, swap", start);
}
