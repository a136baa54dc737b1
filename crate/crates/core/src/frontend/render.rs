//! Canonical text output; every renderer is a right inverse of the parser.

use std::fmt::Write;

use super::{TaskBody, TaskDocument};
use crate::types::{PossInterpretation, PossProgram, WeightLattice};
use crate::variants::PartialInterpretation;

/// One `W :: rule` line per rule, in rule order.
pub fn render_program(program: &PossProgram, lattice: &WeightLattice) -> String {
    program.display(lattice).to_string()
}

pub fn render_interpretation(interp: &PossInterpretation, lattice: &WeightLattice) -> String {
    interp.display(lattice).to_string()
}

pub fn render_partial(partial: &PartialInterpretation) -> String {
    let words =
        |set: &crate::types::AtomSet| set.iter().map(|a| format!(" {a}")).collect::<String>();
    format!(
        "{{ inc:{} ; exc:{} }}",
        words(partial.included()),
        words(partial.excluded())
    )
}

pub fn render_task(doc: &TaskDocument) -> String {
    let mut out = String::new();
    if let Some(name) = &doc.name {
        let _ = writeln!(out, "#name {name}");
    }
    if let Some(profile) = &doc.profile {
        let _ = writeln!(out, "#profile {profile}");
    }
    if let Some(seed) = doc.seed {
        let _ = writeln!(out, "#seed {seed}");
    }
    if !doc.is_partial() {
        let _ = writeln!(out, "#order {}", doc.lattice.labels().join(" < "));
    }
    let atoms = doc.alphabet();
    if !atoms.is_empty() {
        let names: Vec<&str> = atoms.iter().map(|a| a.name()).collect();
        let _ = writeln!(out, "#atoms {}", names.join(" "));
    }
    out.push('\n');
    match &doc.body {
        TaskBody::Total {
            background,
            positives,
            negatives,
        } => {
            out.push_str("[background]\n");
            out.push_str(&render_program(background, &doc.lattice));
            for (header, examples) in [("positive", positives), ("negative", negatives)] {
                let _ = writeln!(out, "[{header}]");
                for e in examples {
                    let _ = writeln!(out, "{}", render_interpretation(e, &doc.lattice));
                }
            }
        }
        TaskBody::Partial(task) => {
            out.push_str("[background]\n");
            for r in task.background() {
                let _ = writeln!(out, "{r}");
            }
            for (header, examples) in [
                ("positive-partial", task.positives()),
                ("negative-partial", task.negatives()),
            ] {
                let _ = writeln!(out, "[{header}]");
                for o in examples {
                    let _ = writeln!(out, "{}", render_partial(o));
                }
            }
        }
    }
    out
}
