//! Least models of Horn programs, Gelfond-Lifschitz reducts and stable models.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ground::{AtomId, GroundClause, GroundProgram};

/// Default guard on the number of atoms for subset enumeration.
pub const DEFAULT_ATOM_LIMIT: usize = 22;

/// A set of ground atoms of a program, by code. Builtin atoms are never
/// members: their truth is fixed by the oracle at grounding time.
pub type Interpretation = BTreeSet<AtomId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("clause {0} has constraints; a Horn program was expected")]
    NotHorn(usize),
    #[error("{atoms} atoms exceed the enumeration limit of {limit}")]
    TooLarge { atoms: usize, limit: usize },
}

fn check_horn(g: &GroundProgram) -> Result<(), SemanticsError> {
    match g.clauses().iter().position(|c| !c.is_horn()) {
        Some(i) => Err(SemanticsError::NotHorn(i)),
        None => Ok(()),
    }
}

/// One application of the provability operator.
pub fn tp_step(g: &GroundProgram, s: &Interpretation) -> Result<Interpretation, SemanticsError> {
    check_horn(g)?;
    Ok(g.clauses().iter().filter(|c| c.premises.iter().all(|p| s.contains(p))).map(|c| c.head).collect())
}

/// Least fixpoint of [`tp_step`] from the empty set.
pub fn least_model(g: &GroundProgram) -> Result<Interpretation, SemanticsError> {
    check_horn(g)?;
    Ok(horn_closure(g.clauses().iter()))
}

/// Least model of the Horn clauses obtained by ignoring constraints.
pub(crate) fn horn_closure<'a, I>(clauses: I) -> Interpretation
where
    I: IntoIterator<Item = &'a GroundClause>,
    I::IntoIter: Clone,
{
    let clauses = clauses.into_iter();
    let mut model = Interpretation::new();
    loop {
        let before = model.len();
        for c in clauses.clone() {
            if !model.contains(&c.head) && c.premises.iter().all(|p| model.contains(p)) {
                model.insert(c.head);
            }
        }
        if model.len() == before {
            return model;
        }
    }
}

/// The reduct `P_M`: drop clauses with a constraint in `M`, strip the rest.
/// Atom codes are preserved.
pub fn gl_reduct(g: &GroundProgram, m: &Interpretation) -> GroundProgram {
    let mut out = g.clone();
    out.retain_clauses(|c| c.constraints.iter().all(|b| !m.contains(b)));
    out.map_clauses(|c| GroundClause::new(c.head, c.premises.clone(), Vec::new()));
    out
}

/// Least model of `P_M` without materializing the reduct.
pub fn reduct_least_model(g: &GroundProgram, m: &Interpretation) -> Interpretation {
    horn_closure(g.clauses().iter().filter(|c| c.constraints.iter().all(|b| !m.contains(b))))
}

pub fn is_stable(g: &GroundProgram, m: &Interpretation) -> bool {
    reduct_least_model(g, m) == *m
}

/// Every subset of the Herbrand base, as sorted sets, in binary counting
/// order of their characteristic vectors.
pub(crate) fn all_subsets(n: usize, limit: usize) -> Result<impl Iterator<Item = Interpretation>, SemanticsError> {
    if n > limit || n >= 64 {
        return Err(SemanticsError::TooLarge { atoms: n, limit });
    }
    Ok((0..(1u64 << n)).map(move |mask| (0..n as AtomId).filter(|&i| mask >> i & 1 == 1).collect()))
}

/// Brute force over all `2^n` candidate sets.
pub fn enumerate_stable(g: &GroundProgram, atom_limit: usize) -> Result<Vec<Interpretation>, SemanticsError> {
    let mut out: Vec<Interpretation> = all_subsets(g.atom_count(), atom_limit)?.filter(|m| is_stable(g, m)).collect();
    out.sort();
    Ok(out)
}

/// `M` satisfies every clause of `g` read classically.
pub fn is_model(g: &GroundProgram, m: &Interpretation) -> bool {
    g.clauses().iter().all(|c| {
        m.contains(&c.head) || !c.premises.iter().all(|p| m.contains(p)) || c.constraints.iter().any(|b| m.contains(b))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::ground;
    use crate::syntax::parse_program;

    fn prog(text: &str) -> GroundProgram {
        ground(&parse_program(text).unwrap(), 0).unwrap()
    }

    fn set(g: &GroundProgram, names: &[&str]) -> Interpretation {
        names.iter().map(|n| g.id(n).unwrap()).collect()
    }

    #[test]
    fn tp_step_examples() {
        let g = prog("p. q :- p.");
        assert_eq!(tp_step(&g, &Interpretation::new()).unwrap(), set(&g, &["p"]));
        assert_eq!(tp_step(&g, &set(&g, &["p"])).unwrap(), set(&g, &["p", "q"]));
        let empty = GroundProgram::new();
        assert!(tp_step(&empty, &Interpretation::new()).unwrap().is_empty());
        assert_eq!(tp_step(&prog("p :- not q."), &Interpretation::new()), Err(SemanticsError::NotHorn(0)));
    }

    #[test]
    fn least_model_examples() {
        let g = prog("p. q :- p.");
        assert_eq!(least_model(&g).unwrap(), set(&g, &["p", "q"]));
        assert!(least_model(&prog("q :- p.")).unwrap().is_empty());
        let ex = prog("p. q :- p, not r. r :- not q. s :- not t.");
        let reduct = gl_reduct(&ex, &set(&ex, &["p", "q", "s"]));
        assert_eq!(reduct.to_program().to_string(), "p.\nq :- p.\ns.\n");
        assert_eq!(least_model(&reduct).unwrap(), set(&ex, &["p", "q", "s"]));
    }

    #[test]
    fn reduct_of_example_with_subprogram() {
        let g = prog("a :- not a, not b. b.");
        let reduct = gl_reduct(&g, &set(&g, &["b"]));
        assert_eq!(reduct.to_program().to_string(), "b.\n");
        let horn = prog("p. q :- p.");
        assert_eq!(gl_reduct(&horn, &set(&horn, &["q"])), horn);
    }

    #[test]
    fn stability_examples() {
        let g = prog("a :- not a, not b. b.");
        assert!(is_stable(&g, &set(&g, &["b"])));
        let q = prog("a :- not a, not b.");
        assert!(!is_stable(&q, &Interpretation::new()));
        assert!(!is_stable(&q, &set(&q, &["a"])));
        let ex = prog("p. q :- p, not r. r :- not q. s :- not t.");
        assert!(is_stable(&ex, &set(&ex, &["p", "q", "s"])));
        assert!(is_stable(&ex, &set(&ex, &["p", "r", "s"])));
    }

    #[test]
    fn enumeration_examples() {
        let ex = prog("p. q :- p, not r. r :- not q. s :- not t.");
        assert_eq!(
            enumerate_stable(&ex, DEFAULT_ATOM_LIMIT).unwrap(),
            vec![set(&ex, &["p", "q", "s"]), set(&ex, &["p", "r", "s"])]
        );
        let g = prog("a :- not a, not b. b.");
        assert_eq!(enumerate_stable(&g, DEFAULT_ATOM_LIMIT).unwrap(), vec![set(&g, &["b"])]);
        let sw = prog("a :- not b. b :- not a.");
        assert_eq!(enumerate_stable(&sw, DEFAULT_ATOM_LIMIT).unwrap(), vec![set(&sw, &["a"]), set(&sw, &["b"])]);
        assert_eq!(enumerate_stable(&ex, 4), Err(SemanticsError::TooLarge { atoms: 5, limit: 4 }));
    }
}
