//! Ground programs and grounding.
//!
//! Ground atoms get codes `0..n` in first-occurrence order over the clauses
//! as written (head, then premises, then constraints). Builtin atoms never
//! enter a ground program: the grounder evaluates them with a [`Builtins`]
//! oracle, dropping instances whose builtin premises fail (or whose builtin
//! constraints hold) and erasing the remaining builtin literals.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::coding::{self, Code};
use crate::syntax::{Atom, Clause, Program, Term};

/// Code of a ground atom within a [`GroundProgram`].
pub type AtomId = u32;

/// Index of a clause within a [`GroundProgram`].
pub type ClauseId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundClause {
    pub head: AtomId,
    /// Sorted and deduplicated.
    pub premises: Vec<AtomId>,
    /// Sorted and deduplicated.
    pub constraints: Vec<AtomId>,
}

impl GroundClause {
    pub fn new(head: AtomId, mut premises: Vec<AtomId>, mut constraints: Vec<AtomId>) -> Self {
        premises.sort_unstable();
        premises.dedup();
        constraints.sort_unstable();
        constraints.dedup();
        GroundClause { head, premises, constraints }
    }

    pub fn is_horn(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn code(&self) -> Code {
        coding::clause_code(
            u64::from(self.head),
            self.premises.iter().map(|&a| u64::from(a)),
            self.constraints.iter().map(|&a| u64::from(a)),
        )
    }

    /// Largest atom code mentioned by the clause.
    pub fn max_atom(&self) -> AtomId {
        self.premises.iter().chain(&self.constraints).copied().fold(self.head, AtomId::max)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundProgram {
    atoms: Vec<Atom>,
    index: HashMap<Atom, AtomId>,
    clauses: Vec<GroundClause>,
    clause_set: HashSet<GroundClause>,
    exact: bool,
}

impl GroundProgram {
    pub fn new() -> Self {
        GroundProgram { exact: true, ..Default::default() }
    }

    /// Returns the code of `atom`, assigning the next free code if it is new.
    pub fn intern(&mut self, atom: Atom) -> AtomId {
        if let Some(&id) = self.index.get(&atom) {
            return id;
        }
        let id = AtomId::try_from(self.atoms.len()).expect("more than u32::MAX atoms");
        self.index.insert(atom.clone(), id);
        self.atoms.push(atom);
        id
    }

    /// Adds a clause over already-ground atoms. Duplicate clauses are ignored;
    /// returns whether the clause was new.
    pub fn add_clause(&mut self, head: Atom, premises: Vec<Atom>, constraints: Vec<Atom>) -> bool {
        let head = self.intern(head);
        let premises = premises.into_iter().map(|a| self.intern(a)).collect();
        let constraints = constraints.into_iter().map(|a| self.intern(a)).collect();
        self.push(GroundClause::new(head, premises, constraints))
    }

    fn push(&mut self, clause: GroundClause) -> bool {
        if !self.clause_set.insert(clause.clone()) {
            return false;
        }
        self.clauses.push(clause);
        true
    }

    pub fn retain_clauses<F: FnMut(&GroundClause) -> bool>(&mut self, keep: F) {
        self.clauses.retain(keep);
        self.clause_set = self.clauses.iter().cloned().collect();
    }

    /// Rewrites every clause, dropping rewrites that collide with earlier ones.
    pub fn map_clauses<F: FnMut(&GroundClause) -> GroundClause>(&mut self, f: F) {
        let mapped: Vec<GroundClause> = self.clauses.iter().map(f).collect();
        self.clauses.clear();
        self.clause_set.clear();
        for c in mapped {
            self.push(c);
        }
    }

    pub fn clauses(&self) -> &[GroundClause] {
        &self.clauses
    }

    pub fn clause(&self, id: ClauseId) -> &GroundClause {
        &self.clauses[id]
    }

    /// The ordered Herbrand base; positions are atom codes.
    pub fn herbrand_base(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, id: AtomId) -> &Atom {
        &self.atoms[id as usize]
    }

    pub fn lookup(&self, atom: &Atom) -> Option<AtomId> {
        self.index.get(atom).copied()
    }

    /// Looks up a propositional atom by name.
    pub fn id(&self, name: &str) -> Option<AtomId> {
        self.lookup(&Atom::prop(name))
    }

    /// `true` when the program is all of `ground(P)`, i.e. `P` had no variables.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn set_exact(&mut self, exact: bool) {
        self.exact = exact;
    }

    pub fn is_horn(&self) -> bool {
        self.clauses.iter().all(GroundClause::is_horn)
    }

    /// Back to the surface syntax (a variable-free program).
    pub fn to_program(&self) -> Program {
        let atom = |id: &AtomId| self.atom(*id).clone();
        Program::new(
            self.clauses
                .iter()
                .map(|c| {
                    Clause::new(
                        atom(&c.head),
                        c.premises.iter().map(atom).collect(),
                        c.constraints.iter().map(atom).collect(),
                    )
                })
                .collect(),
        )
    }

    /// Builds a propositional program directly from clause triples over
    /// atom codes `0..atoms`. Atoms are named `a0, a1, ...`.
    pub fn from_codes(atoms: usize, clauses: &[(AtomId, Vec<AtomId>, Vec<AtomId>)]) -> Self {
        let mut g = GroundProgram::new();
        for i in 0..atoms {
            g.intern(Atom::prop(format!("a{i}")));
        }
        for (head, premises, constraints) in clauses {
            assert!((*head as usize) < atoms, "atom code out of range");
            g.push(GroundClause::new(*head, premises.clone(), constraints.clone()));
        }
        g
    }

    /// Renders a set of atom codes as `{p, q}`.
    pub fn show_set<'a, I>(&self, set: I) -> String
    where
        I: IntoIterator<Item = &'a AtomId>,
    {
        let names: Vec<String> = set.into_iter().map(|&id| self.atom(id).to_string()).collect();
        format!("{{{}}}", names.join(", "))
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_program())
    }
}

/// Truth values of builtin predicates.
pub trait Builtins {
    /// `None` when the oracle does not know the predicate.
    fn holds(&self, atom: &Atom) -> Option<bool>;
}

/// No builtins at all.
pub struct NoBuiltins;

impl Builtins for NoBuiltins {
    fn holds(&self, _atom: &Atom) -> Option<bool> {
        None
    }
}

/// Builtins over codes of finite sequences: `num`, `seq`, `samelength`,
/// `diff`, `shorter`, `length` and `notincluded`. Arguments that are not
/// numerals make every builtin fail.
#[derive(Clone, Copy, Debug, Default)]
pub struct SequenceBuiltins;

impl SequenceBuiltins {
    fn seq(t: &Term) -> Option<Vec<BigUint>> {
        coding::seq_decode(t.as_nat()?).ok()
    }
}

impl Builtins for SequenceBuiltins {
    fn holds(&self, atom: &Atom) -> Option<bool> {
        let args = &atom.args;
        let two = |f: &dyn Fn(Vec<BigUint>, Vec<BigUint>) -> bool| match (Self::seq(&args[0]), Self::seq(&args[1])) {
            (Some(x), Some(y)) => f(x, y),
            _ => false,
        };
        let value = match (atom.pred.as_str(), args.len()) {
            ("num", 1) => args[0].as_nat().is_some(),
            ("seq", 1) => Self::seq(&args[0]).is_some(),
            ("samelength", 2) => two(&|x, y| x.len() == y.len()),
            ("diff", 2) => two(&|x, y| x != y),
            ("shorter", 2) => two(&|x, y| x.len() < y.len()),
            ("notincluded", 2) => two(&|x, y| !(x.len() <= y.len() && y[..x.len()] == x[..])),
            ("length", 2) => match (Self::seq(&args[0]), args[1].as_nat()) {
                (Some(x), Some(n)) => BigUint::from(x.len()) == *n,
                _ => false,
            },
            _ => return None,
        };
        Some(value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("no oracle for builtin predicate {0}/{1}")]
    UnknownBuiltin(String, usize),
    #[error("builtin predicate {0} may not occur in a clause head")]
    BuiltinHead(String),
}

/// Ground terms of nesting depth at most `depth` over the program's
/// signature, always including `0` and `s`, ordered by depth.
pub fn universe(program: &Program, depth: u64) -> Vec<Term> {
    let (consts, funcs) = program.signature();
    let mut levels: Vec<Vec<Term>> = Vec::new();
    let mut base = vec![Term::nat(0)];
    base.extend(consts.into_iter().map(Term::Const));
    levels.push(base);
    for d in 1..=depth {
        let all: Vec<Term> = levels.iter().flatten().cloned().collect();
        let prev = &levels[(d - 1) as usize];
        let mut next = Vec::new();
        let mut symbols: Vec<(String, usize)> = vec![("s".into(), 1)];
        symbols.extend(funcs.iter().cloned());
        for (f, arity) in symbols {
            // Tuples over `all` that use at least one term of depth d - 1.
            let mut tuple = vec![0usize; arity];
            loop {
                let args: Vec<Term> = tuple.iter().map(|&i| all[i].clone()).collect();
                if args.iter().any(|t| prev.contains(t)) {
                    next.push(Term::app(&f, args));
                }
                if !advance(&mut tuple, all.len()) {
                    break;
                }
            }
        }
        levels.push(next);
    }
    levels.into_iter().flatten().collect()
}

// Odometer increment; returns false after the last tuple.
fn advance(tuple: &mut [usize], base: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// `ground(P)` restricted to substitutions from `universe(P, depth)`.
///
/// The result is exact (all of `ground(P)`) iff `P` has no variables.
pub fn ground(program: &Program, depth: u64) -> Result<GroundProgram, GroundError> {
    ground_with(program, depth, &SequenceBuiltins)
}

pub fn ground_with(program: &Program, depth: u64, builtins: &dyn Builtins) -> Result<GroundProgram, GroundError> {
    let domain = universe(program, depth);
    let mut g = ground_over(program, &domain, builtins, |_| true)?;
    g.exact = program.is_ground();
    Ok(g)
}

/// Grounds `program` with variables ranging over `domain`, keeping only
/// instances whose head satisfies `keep_head`.
pub fn ground_over<F>(
    program: &Program,
    domain: &[Term],
    builtins: &dyn Builtins,
    keep_head: F,
) -> Result<GroundProgram, GroundError>
where
    F: Fn(&Atom) -> bool,
{
    let mut g = GroundProgram::new();
    g.exact = false;
    let mut seen = HashSet::new();
    for clause in &program.clauses {
        if program.is_builtin(&clause.head) {
            return Err(GroundError::BuiltinHead(clause.head.pred.clone()));
        }
        let vars = clause.variables();
        if !vars.is_empty() && domain.is_empty() {
            continue;
        }
        let mut tuple = vec![0usize; vars.len()];
        loop {
            let binding: BTreeMap<String, Term> =
                vars.iter().cloned().zip(tuple.iter().map(|&i| domain[i].clone())).collect();
            let head = clause.head.substitute(&binding);
            if keep_head(&head) {
                if let Some((premises, constraints)) = instantiate_body(program, clause, &binding, builtins)? {
                    let key = (head.clone(), premises.clone(), constraints.clone());
                    if seen.insert(key) {
                        g.add_clause(head, premises, constraints);
                    }
                }
            }
            if !advance(&mut tuple, domain.len()) {
                break;
            }
        }
    }
    Ok(g)
}

type Body = (Vec<Atom>, Vec<Atom>);

fn instantiate_body(
    program: &Program,
    clause: &Clause,
    binding: &BTreeMap<String, Term>,
    builtins: &dyn Builtins,
) -> Result<Option<Body>, GroundError> {
    let eval =
        |atom: &Atom| builtins.holds(atom).ok_or_else(|| GroundError::UnknownBuiltin(atom.pred.clone(), atom.arity()));
    let mut premises = Vec::new();
    for atom in &clause.premises {
        let atom = atom.substitute(binding);
        if program.is_builtin(&atom) {
            if !eval(&atom)? {
                return Ok(None);
            }
        } else {
            premises.push(atom);
        }
    }
    let mut constraints = Vec::new();
    for atom in &clause.constraints {
        let atom = atom.substitute(binding);
        if program.is_builtin(&atom) {
            if eval(&atom)? {
                return Ok(None);
            }
        } else {
            constraints.push(atom);
        }
    }
    Ok(Some((premises, constraints)))
}
