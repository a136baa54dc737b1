//! Fixture checks with exact expected values, one function per criterion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use posslog::frontend::{
    parse_interpretation, parse_program, parse_rules, parse_task, TaskDocument,
};
use posslog::induction::{existence, ilpsm, pne, ppe, Obstacle};
use posslog::minimal::{neg_space_atom, pos_space, pos_space_atom};
use posslog::semantics::{cn, is_poss_stable_model, poss_stable_models, reduct, tp_step};
use posslog::variants::{
    complete_existence, lsm_existence, partial_obstacles, transform_partial, verify_partial,
};
use posslog::{
    atom_set, ilpsmmin, verify_solution, AtomSet, Caps, Outcome, PossAtom, PossInterpretation,
    PossProgram, SolveConfig, WeightLattice,
};

pub type Check = fn() -> Result<(), String>;

pub const FIXTURE_CRITERIA: &[(&str, Check)] = &[
    ("semantics fixtures", semantics),
    ("PPE/PNE fixtures", ppe_pne),
    ("existence fixtures", existence_fixtures),
    ("ilpsm on T31", ilpsm_t31),
    ("ilpsmmin fixtures", ilpsmmin_fixtures),
    ("solution-space cardinalities", space_counts),
    ("partial-task fixtures", partial_fixtures),
    ("LSM end-to-end fixtures", lsm_fixtures),
];

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> Result<T, String> {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    ensure(took < limit, || {
        format!("{what} took {took:?}, limit {limit:?}")
    })?;
    Ok(out)
}

fn fixture(name: &str) -> TaskDocument {
    let text = match name {
        "t1" => include_str!("../../fixtures/tasks/t1.task"),
        "t2" => include_str!("../../fixtures/tasks/t2.task"),
        "t3" => include_str!("../../fixtures/tasks/t3.task"),
        "t4" => include_str!("../../fixtures/tasks/t4.task"),
        "t5" => include_str!("../../fixtures/tasks/t5.task"),
        "t21" => include_str!("../../fixtures/tasks/t21.task"),
        "t21b" => include_str!("../../fixtures/tasks/t21b.task"),
        "t22" => include_str!("../../fixtures/tasks/t22.task"),
        "t23" => include_str!("../../fixtures/tasks/t23.task"),
        "t24" => include_str!("../../fixtures/tasks/t24.task"),
        "t25" => include_str!("../../fixtures/tasks/t25.task"),
        "t26" => include_str!("../../fixtures/tasks/t26.task"),
        "t31" => include_str!("../../fixtures/tasks/t31.task"),
        "t41" => include_str!("../../fixtures/tasks/t41.task"),
        "t42" => include_str!("../../fixtures/tasks/t42.task"),
        "t42b" => include_str!("../../fixtures/tasks/t42b.task"),
        "t43" => include_str!("../../fixtures/tasks/t43.task"),
        "lpasm" => include_str!("../../fixtures/tasks/lpasm.task"),
        "med11" => include_str!("../../fixtures/tasks/med11.task"),
        "med13" => include_str!("../../fixtures/tasks/med13.task"),
        other => panic!("no fixture {other}"),
    };
    parse_task(text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn lattice(labels: &[&str]) -> WeightLattice {
    WeightLattice::new(labels.iter().copied()).unwrap()
}

fn interp(text: &str, lattice: &WeightLattice) -> PossInterpretation {
    parse_interpretation(text, lattice).unwrap()
}

fn program(text: &str, lattice: &WeightLattice) -> PossProgram {
    parse_program(text, lattice).unwrap()
}

pub fn semantics() -> Result<(), String> {
    let q = lattice(&["0.7", "0.9"]);
    let p = program(
        "0.9 :: p :- q, s.\n0.9 :: p :- not r.\n0.7 :: p :- not s.\n0.7 :: p :- r.\n",
        &q,
    );
    let i = interp("{ q@0.9, s@0.7 }", &q);
    let step = timed(Duration::from_millis(1), "consequence step", || {
        tp_step(&p, &i)
    })?;
    ensure(step == interp("{ p@0.9 }", &q), || {
        format!("consequence step gave {}", step.display(&q))
    })?;

    let q = lattice(&["0.6", "0.8", "0.9"]);
    let p = program(
        "0.6 :: a :- not b.\n0.9 :: a.\n0.6 :: b.\n0.8 :: c :- a, b.\n",
        &q,
    );
    let s = interp("{ a@0.9, b@0.6, c@0.6 }", &q);
    let trace = timed(Duration::from_millis(1), "fixpoint trace", || {
        cn(&reduct(&p, &s.projection()))
    })?
    .map_err(fail)?;
    let first = interp("{ a@0.9, b@0.6 }", &q);
    let expected = vec![PossInterpretation::new(), first, s.clone(), s.clone()];
    ensure(trace.iterates == expected, || {
        let shown: Vec<String> = trace
            .iterates
            .iter()
            .map(|i| i.display(&q).to_string())
            .collect();
        format!("iterates {shown:?}")
    })?;
    let stable = timed(Duration::from_millis(1), "stability check", || {
        is_poss_stable_model(&p, &s)
    })?;
    ensure(stable, || "S is not accepted as a poss-stable model".into())
}

pub fn ppe_pne() -> Result<(), String> {
    let doc = fixture("t22");
    let task = doc.to_induction_task().map_err(fail)?;
    let q = task.lattice();
    let built = ppe(task.positives(), task.alphabet());
    let expected = program(
        "0.5 :: p :- not q.\n0.5 :: r :- not q.\n0.3 :: q :- not p.\n0.8 :: r :- not p.\n",
        q,
    );
    ensure(built == expected, || {
        format!("PPE is\n{}", built.display(q))
    })?;
    let models: BTreeSet<_> = poss_stable_models(&built, &Caps::default())
        .map_err(fail)?
        .into_iter()
        .collect();
    let positives: BTreeSet<_> = task.positives().iter().cloned().collect();
    ensure(models == positives, || {
        "PSM(PPE(E+)) differs from E+".into()
    })?;

    let q = lattice(&["0.3", "0.5", "0.8"]);
    let alphabet = atom_set(["p", "q", "r"]).unwrap();
    let i1 = interp("{ p@0.3, q@0.3, r@0.5 }", &q);
    let i2 = interp("{ p@0.5, r@0.5 }", &q);
    let i3 = interp("{ q@0.3, r@0.8 }", &q);
    let i4 = interp("{ r@0.5 }", &q);
    let j = [interp("{ p@0.3 }", &q)];
    let built = pne(&[i1, i2, i3.clone()], &j, &alphabet, &q);
    ensure(built == program("0.8 :: p :- q, r, not p.\n", &q), || {
        format!("PNE is\n{}", built.display(&q))
    })?;
    let built = pne(&[i3, i4], &j, &alphabet, &q);
    let expected = program(
        "0.8 :: p :- q, r, not p.\n0.8 :: p :- r, not p, not q.\n",
        &q,
    );
    ensure(built == expected, || {
        format!("two-member PNE is\n{}", built.display(&q))
    })
}

pub fn existence_fixtures() -> Result<(), String> {
    let caps = Caps::default();
    let decide = |name: &str| -> Result<bool, String> {
        let task = fixture(name).to_induction_task().map_err(fail)?;
        existence(&task, &caps).map_err(fail)
    };
    for name in ["t1", "t3", "t5", "t23", "t42"] {
        ensure(decide(name)?, || format!("{name} should have a solution"))?;
    }
    for name in ["t2", "t4", "t24", "t25", "t26", "t21", "t21b", "t42b"] {
        ensure(!decide(name)?, || format!("{name} should have no solution"))?;
    }
    for name in ["t42", "t42b"] {
        let task = fixture(name).to_induction_task().map_err(fail)?;
        ensure(lsm_existence(&task).map_err(fail)? == decide(name)?, || {
            format!("{name}: ordinary check disagrees")
        })?;
    }
    let t41 = fixture("t41").to_induction_task().map_err(fail)?;
    let complete = complete_existence(
        t41.background(),
        t41.positives(),
        t41.alphabet(),
        t41.lattice(),
    );
    ensure(complete, || {
        "t41 in complete form should have a solution".into()
    })
}

pub fn ilpsm_t31() -> Result<(), String> {
    let task = fixture("t31").to_induction_task().map_err(fail)?;
    let report = timed(Duration::from_millis(10), "ilpsm on T31", || {
        ilpsm(&task, &SolveConfig::default())
    })?
    .map_err(fail)?;
    let Outcome::Solution(h) = report.outcome else {
        return Err("ilpsm found no solution for T31".into());
    };
    let expected = program(
        "0.3 :: r :- not p, not q.\n0.5 :: r :- p, q, not r.\n",
        task.lattice(),
    );
    ensure(h == expected, || {
        format!("ilpsm returned\n{}", h.display(task.lattice()))
    })?;
    ensure(verify_solution(&task, &h), || {
        "T31 solution does not verify".into()
    })
}

fn minimal(name: &str) -> Result<(posslog::InductionTask, PossProgram), String> {
    let task = fixture(name).to_induction_task().map_err(fail)?;
    let report = timed(Duration::from_secs(5), name, || {
        ilpsmmin(&task, &SolveConfig::default())
    })?
    .map_err(fail)?;
    match report.outcome {
        Outcome::Solution(h) => {
            ensure(verify_solution(&task, &h), || {
                format!("{name}: minimal solution does not verify")
            })?;
            Ok((task, h))
        }
        _ => Err(format!("{name}: no minimal solution")),
    }
}

pub fn ilpsmmin_fixtures() -> Result<(), String> {
    let (t31, h) = minimal("t31")?;
    ensure(h == program("0.3 :: r.\n", t31.lattice()), || {
        format!("T31 gave\n{}", h.display(t31.lattice()))
    })?;
    let (t1, h) = minimal("t1")?;
    ensure(h.len() == 1, || format!("T1 gave {} rules", h.len()))?;
    let witness = program("1 :: medA :- vomiting, not medB.\n", t1.lattice());
    ensure(verify_solution(&t1, &witness), || {
        "T1 witness does not verify".into()
    })?;
    let (_, h) = minimal("t3")?;
    ensure(h.len() == 2, || format!("T3 gave {} rules", h.len()))
}

pub fn space_counts() -> Result<(), String> {
    let q = lattice(&["0.3", "0.5"]);
    let alphabet = atom_set(["p", "q", "r"]).unwrap();
    let i = interp("{ r@0.3 }", &q);
    let j = interp("{ q@0.5, r@0.3 }", &q);
    let at = |name: &str, label: &str| PossAtom {
        atom: posslog::Atom::new(name).unwrap(),
        weight: q.resolve(label).unwrap(),
    };
    let count = |x: &PossInterpretation, a: PossAtom| {
        pos_space_atom(x, &a, &alphabet, &q).map(Iterator::count)
    };
    let counts = [
        count(&i, at("r", "0.3")).map_err(fail)?,
        count(&j, at("q", "0.5")).map_err(fail)?,
        count(&j, at("r", "0.3")).map_err(fail)?,
        pos_space(&j, &alphabet, &q).map_err(fail)?.count(),
        neg_space_atom(&i, &at("r", "0.3"), &alphabet, &q)
            .map_err(fail)?
            .count(),
    ];
    ensure(counts == [12, 4, 12, 48, 4], || {
        format!("counts {counts:?}")
    })
}

pub fn partial_fixtures() -> Result<(), String> {
    let caps = Caps::default();
    let sets = |v: &[PossInterpretation]| -> BTreeSet<AtomSet> {
        v.iter().map(PossInterpretation::projection).collect()
    };
    let named = |v: &[&[&str]]| -> BTreeSet<AtomSet> {
        v.iter()
            .map(|s| atom_set(s.iter().copied()).unwrap())
            .collect()
    };

    let t43 = fixture("t43").to_partial_task().map_err(fail)?;
    let branches = transform_partial(&t43, &caps).map_err(fail)?;
    let want = (
        named(&[&["p"], &["q", "r"]]),
        named(&[&["p", "q"], &["p", "q", "r"]]),
    );
    let found = branches
        .iter()
        .any(|t| (sets(t.positives()), sets(t.negatives())) == want);
    ensure(found, || "T43 transform lacks the expected task".into())?;
    let h1 = parse_rules("p :- not r.\nr :- not p.\n").map_err(fail)?;
    let h2 = parse_rules("p :- r.\nr.\n").map_err(fail)?;
    ensure(verify_partial(&t43, &h1, &caps).map_err(fail)?, || {
        "H1 is rejected".into()
    })?;
    ensure(!verify_partial(&t43, &h2, &caps).map_err(fail)?, || {
        "H2 is accepted".into()
    })?;

    let lpasm = fixture("lpasm").to_partial_task().map_err(fail)?;
    let branches: Vec<(BTreeSet<AtomSet>, Option<Obstacle>)> = partial_obstacles(&lpasm, &caps)
        .map_err(fail)?
        .into_iter()
        .map(|(t, o)| (sets(t.positives()), o))
        .collect();
    let expected = vec![
        (named(&[&["p"]]), Some(Obstacle::IncoherentPositives)),
        (named(&[&["p", "q"]]), Some(Obstacle::SharedExamples)),
    ];
    ensure(branches == expected, || format!("branches {branches:?}"))
}

pub fn lsm_fixtures() -> Result<(), String> {
    let (task, h) = minimal("med11")?;
    ensure(h.len() == 4, || format!("med11 gave {} rules", h.len()))?;
    let witness = program("f.\ne.\nc.\nb.\n", task.lattice());
    ensure(verify_solution(&task, &witness), || {
        "med11 witness does not verify".into()
    })?;
    let (_, h) = minimal("med13")?;
    ensure(h.len() == 3, || format!("med13 gave {} rules", h.len()))
}
