//! Proof schemes: conditional derivations carrying their own support.
//!
//! A minimal scheme is determined by its clause set, and the clause sets of
//! minimal schemes for an atom `a` are exactly the acyclic choices of one
//! clause per needed atom, starting from `a` and closing under premises.
//! Two such choices are never comparable under inclusion (the needed atoms
//! are determined by the clauses chosen for them), so every choice found by
//! backward chaining is minimal. Each clause set is turned into a single
//! scheme by a canonical step order, which is what the scheme codes use.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::coding::{self, Code};
use crate::ground::{AtomId, ClauseId, GroundProgram};
use crate::semantics::{self, horn_closure, Interpretation, SemanticsError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub clause: ClauseId,
    pub atom: AtomId,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofScheme {
    pub steps: Vec<Step>,
    pub support: BTreeSet<AtomId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("malformed proof scheme: {0}")]
    MalformedScheme(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("blocking-set check over {{0..{0}}} is too large (m must be at most {MAX_BLOCKING_M})")]
    TooLarge(usize),
}

/// Largest `m` accepted by the blocking-set checks.
pub const MAX_BLOCKING_M: usize = 20;

impl ProofScheme {
    pub fn conclusion(&self) -> Option<AtomId> {
        self.steps.last().map(|s| s.atom)
    }

    pub fn clause_set(&self) -> BTreeSet<ClauseId> {
        self.steps.iter().map(|s| s.clause).collect()
    }

    /// Checks the inductive definition: each step's clause concludes its atom,
    /// its premises were derived by earlier steps, and the support is the
    /// union of all constraints.
    pub fn check(&self, g: &GroundProgram) -> Result<(), SchemeError> {
        let bad = |msg: String| Err(SchemeError::MalformedScheme(msg));
        if self.steps.is_empty() {
            return bad("no steps".into());
        }
        let mut derived = BTreeSet::new();
        let mut support = BTreeSet::new();
        for (j, step) in self.steps.iter().enumerate() {
            if step.clause >= g.clauses().len() {
                return bad(format!("step {j} names unknown clause {}", step.clause));
            }
            let clause = g.clause(step.clause);
            if clause.head != step.atom {
                return bad(format!("step {j} derives {} but its clause concludes {}", step.atom, clause.head));
            }
            if let Some(p) = clause.premises.iter().find(|p| !derived.contains(*p)) {
                return bad(format!("step {j} uses premise {p} before it is derived"));
            }
            derived.insert(step.atom);
            support.extend(clause.constraints.iter().copied());
        }
        if support != self.support {
            return bad("support is not the union of the constraints".into());
        }
        Ok(())
    }

    pub fn code(&self, g: &GroundProgram) -> Code {
        let steps: Vec<(Code, u64)> =
            self.steps.iter().map(|s| (g.clause(s.clause).code(), u64::from(s.atom))).collect();
        coding::scheme_code(&steps, self.support.iter().map(|&a| u64::from(a)))
    }

    /// The scheme over `clauses` in canonical order: repeatedly take the
    /// usable clause with the smallest head code (then smallest clause index).
    /// Returns `None` if some clause can never be used.
    pub fn from_clauses(g: &GroundProgram, clauses: &BTreeSet<ClauseId>) -> Option<ProofScheme> {
        let mut remaining: Vec<ClauseId> = clauses.iter().copied().collect();
        let mut derived = BTreeSet::new();
        let mut steps = Vec::with_capacity(remaining.len());
        let mut support = BTreeSet::new();
        while !remaining.is_empty() {
            let (pos, &id) = remaining
                .iter()
                .enumerate()
                .filter(|(_, &id)| g.clause(id).premises.iter().all(|p| derived.contains(p)))
                .min_by_key(|(_, &id)| (g.clause(id).head, id))?;
            remaining.remove(pos);
            let clause = g.clause(id);
            derived.insert(clause.head);
            support.extend(clause.constraints.iter().copied());
            steps.push(Step { clause: id, atom: clause.head });
        }
        Some(ProofScheme { steps, support })
    }

    pub fn admitted_by(&self, m: &Interpretation) -> bool {
        admits(m, self)
    }

    pub fn display<'a>(&'a self, g: &'a GroundProgram) -> SchemeDisplay<'a> {
        SchemeDisplay { scheme: self, g }
    }
}

pub struct SchemeDisplay<'a> {
    scheme: &'a ProofScheme,
    g: &'a GroundProgram,
}

impl fmt::Display for SchemeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for step in &self.scheme.steps {
            let clause = &self.g.to_program().clauses[step.clause];
            write!(f, "<{clause} , {}>, ", self.g.atom(step.atom))?;
        }
        write!(f, "{}>", self.g.show_set(&self.scheme.support))
    }
}

/// `M` admits `PS` iff `M ∩ supp(PS) = ∅`.
pub fn admits(m: &Interpretation, scheme: &ProofScheme) -> bool {
    scheme.support.is_disjoint(m)
}

/// A minimal scheme together with its code and the largest atom mentioned by
/// any clause it uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeInfo {
    pub scheme: ProofScheme,
    pub code: Code,
    pub max_atom: AtomId,
}

impl SchemeInfo {
    fn new(g: &GroundProgram, scheme: ProofScheme) -> Self {
        let code = scheme.code(g);
        let max_atom = scheme.steps.iter().map(|s| g.clause(s.clause).max_atom()).max().unwrap_or(0);
        SchemeInfo { scheme, code, max_atom }
    }

    pub fn support(&self) -> &BTreeSet<AtomId> {
        &self.scheme.support
    }
}

/// Result of a bounded minimal-scheme search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeSearch {
    /// Sorted by code.
    pub schemes: Vec<SchemeInfo>,
    /// `false` when the clause budget cut the search short or the program is
    /// only a bounded part of `ground(P)`.
    pub saturated: bool,
}

struct Chainer<'a> {
    g: &'a GroundProgram,
    by_head: BTreeMap<AtomId, Vec<ClauseId>>,
    budget: usize,
    truncated: bool,
    found: BTreeSet<BTreeSet<ClauseId>>,
}

impl Chainer<'_> {
    // `chosen` maps each needed atom to its clause; `pending` lists needed
    // atoms still without a clause.
    fn search(&mut self, chosen: &mut BTreeMap<AtomId, ClauseId>, pending: &mut BTreeSet<AtomId>) {
        let Some(&atom) = pending.iter().next() else {
            let clauses: BTreeSet<ClauseId> = chosen.values().copied().collect();
            if ProofScheme::from_clauses(self.g, &clauses).is_some() {
                self.found.insert(clauses);
            }
            return;
        };
        if chosen.len() >= self.budget {
            self.truncated = true;
            return;
        }
        pending.remove(&atom);
        let options = self.by_head.get(&atom).cloned().unwrap_or_default();
        for id in options {
            let clause = self.g.clause(id);
            if clause.premises.contains(&atom) {
                continue;
            }
            let added: Vec<AtomId> =
                clause.premises.iter().copied().filter(|p| !chosen.contains_key(p) && !pending.contains(p)).collect();
            chosen.insert(atom, id);
            pending.extend(added.iter().copied());
            self.search(chosen, pending);
            for p in &added {
                pending.remove(p);
            }
            chosen.remove(&atom);
        }
        pending.insert(atom);
    }
}

/// All minimal schemes concluding `atom` that use at most `clause_budget`
/// clauses. Complete when the budget is at least the number of clauses.
pub fn enumerate_min_schemes(g: &GroundProgram, atom: AtomId, clause_budget: usize) -> SchemeSearch {
    let mut by_head: BTreeMap<AtomId, Vec<ClauseId>> = BTreeMap::new();
    for (id, c) in g.clauses().iter().enumerate() {
        by_head.entry(c.head).or_default().push(id);
    }
    let mut chainer = Chainer { g, by_head, budget: clause_budget.max(1), truncated: false, found: BTreeSet::new() };
    chainer.search(&mut BTreeMap::new(), &mut BTreeSet::from([atom]));
    let mut schemes: Vec<SchemeInfo> = chainer
        .found
        .iter()
        .filter_map(|clauses| ProofScheme::from_clauses(g, clauses))
        .map(|s| SchemeInfo::new(g, s))
        .collect();
    schemes.sort_by(|a, b| a.code.cmp(&b.code));
    SchemeSearch { schemes, saturated: g.is_exact() && !chainer.truncated }
}

/// No proper subset of the scheme's clauses derives its conclusion.
pub fn is_minimal(g: &GroundProgram, scheme: &ProofScheme) -> Result<bool, SchemeError> {
    scheme.check(g)?;
    let goal = scheme.conclusion().expect("checked schemes are nonempty");
    let clauses = scheme.clause_set();
    Ok(clauses.iter().all(|&drop| {
        let rest = clauses.iter().filter(|&&c| c != drop).map(|&c| g.clause(c));
        !horn_closure(rest.collect::<Vec<_>>()).contains(&goal)
    }))
}

/// Minimal schemes of every atom of a finite ground program.
#[derive(Clone, Debug)]
pub struct SchemeTable {
    per_atom: Vec<SchemeSearch>,
}

impl SchemeTable {
    pub fn build(g: &GroundProgram) -> Self {
        Self::with_budget(g, g.clauses().len())
    }

    pub fn with_budget(g: &GroundProgram, clause_budget: usize) -> Self {
        let per_atom = (0..g.atom_count() as AtomId).map(|a| enumerate_min_schemes(g, a, clause_budget)).collect();
        SchemeTable { per_atom }
    }

    pub fn schemes(&self, atom: AtomId) -> &[SchemeInfo] {
        self.per_atom.get(atom as usize).map_or(&[], |s| &s.schemes)
    }

    pub fn saturated(&self, atom: AtomId) -> bool {
        self.per_atom.get(atom as usize).is_none_or(|s| s.saturated)
    }

    pub fn atom_count(&self) -> usize {
        self.per_atom.len()
    }

    /// Distinct supports of the minimal schemes of `atom`.
    pub fn supports(&self, atom: AtomId) -> BTreeSet<&BTreeSet<AtomId>> {
        self.schemes(atom).iter().map(SchemeInfo::support).collect()
    }

    /// The schemes of `atom` whose code is least among those with the same
    /// support, in code order.
    pub fn least_per_support(&self, atom: AtomId) -> Vec<&SchemeInfo> {
        let mut seen = BTreeSet::new();
        self.schemes(atom).iter().filter(|s| seen.insert(s.support())).collect()
    }

    /// The least-code minimal scheme of `atom` admitted by `m`.
    pub fn least_admitted(&self, atom: AtomId, m: &Interpretation) -> Option<&SchemeInfo> {
        self.schemes(atom).iter().find(|s| admits(m, &s.scheme))
    }

    pub fn has_admitted(&self, atom: AtomId, m: &Interpretation) -> bool {
        self.least_admitted(atom, m).is_some()
    }
}

/// Stability via admitted minimal schemes: every member has one, no
/// non-member does.
pub fn stable_by_schemes(g: &GroundProgram, m: &Interpretation) -> bool {
    stable_by_table(&SchemeTable::build(g), m)
}

pub fn stable_by_table(table: &SchemeTable, m: &Interpretation) -> bool {
    (0..table.atom_count() as AtomId).all(|a| table.has_admitted(a, m) == m.contains(&a))
}

/// Codes of minimal schemes all of whose clauses mention only atoms below `k`.
pub fn n_k(g: &GroundProgram, k: u64) -> BTreeSet<Code> {
    n_k_table(&SchemeTable::build(g), k)
}

pub fn n_k_table(table: &SchemeTable, k: u64) -> BTreeSet<Code> {
    (0..table.atom_count() as AtomId)
        .flat_map(|a| table.schemes(a))
        .filter(|s| u64::from(s.max_atom) < k)
        .map(|s| s.code.clone())
        .collect()
}

/// The total order on finite atom sets used to list supports: the empty set
/// first, then by largest element, then by size, then lexicographically.
pub fn support_order(u: &BTreeSet<AtomId>, v: &BTreeSet<AtomId>) -> Ordering {
    match (u.last(), v.last()) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(a), Some(b)) => a.cmp(b).then(u.len().cmp(&v.len())).then_with(|| u.iter().cmp(v.iter())),
    }
}

/// Keeps the inclusion-minimal sets.
pub fn inclusion_minimal(sets: &[BTreeSet<AtomId>]) -> Vec<BTreeSet<AtomId>> {
    sets.iter().filter(|u| !sets.iter().any(|v| v != *u && v.is_subset(u))).cloned().collect()
}

/// `atom ⇔ ¬U1 ∨ ¬U2 ∨ ...` with supports listed in [`support_order`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningEquation {
    pub atom: AtomId,
    pub supports: Vec<BTreeSet<AtomId>>,
    pub reduced: bool,
    pub saturated: bool,
}

impl DefiningEquation {
    /// Truth of the right-hand side under `m`.
    pub fn body_holds(&self, m: &Interpretation) -> bool {
        self.supports.iter().any(|u| u.is_disjoint(m))
    }

    pub fn satisfied_by(&self, m: &Interpretation) -> bool {
        m.contains(&self.atom) == self.body_holds(m)
    }

    pub fn is_top(&self) -> bool {
        self.supports.iter().any(BTreeSet::is_empty)
    }

    pub fn is_bottom(&self) -> bool {
        self.supports.is_empty()
    }

    pub fn render(&self, g: &GroundProgram) -> String {
        let rhs = if self.supports.is_empty() {
            "F".to_string()
        } else {
            self.supports
                .iter()
                .map(|u| {
                    if u.is_empty() {
                        "T".to_string()
                    } else {
                        let lits: Vec<String> = u.iter().map(|&a| format!("~{}", g.atom(a))).collect();
                        format!("({})", lits.join(" & "))
                    }
                })
                .collect::<Vec<_>>()
                .join(" | ")
        };
        format!("{} <=> {}", g.atom(self.atom), rhs)
    }
}

pub fn defining_equation(g: &GroundProgram, atom: AtomId, reduced: bool) -> DefiningEquation {
    let search = enumerate_min_schemes(g, atom, g.clauses().len());
    equation_from(atom, search.schemes.iter().map(SchemeInfo::support), reduced, search.saturated)
}

fn equation_from<'a, I>(atom: AtomId, supports: I, reduced: bool, saturated: bool) -> DefiningEquation
where
    I: IntoIterator<Item = &'a BTreeSet<AtomId>>,
{
    let distinct: BTreeSet<BTreeSet<AtomId>> = supports.into_iter().cloned().collect();
    let mut supports: Vec<BTreeSet<AtomId>> = distinct.into_iter().collect();
    if reduced {
        supports = inclusion_minimal(&supports);
    }
    supports.sort_by(support_order);
    DefiningEquation { atom, supports, reduced, saturated }
}

/// The defining equations of every atom.
pub fn theory(g: &GroundProgram, reduced: bool) -> Vec<DefiningEquation> {
    let table = SchemeTable::build(g);
    (0..g.atom_count() as AtomId)
        .map(|a| equation_from(a, table.schemes(a).iter().map(SchemeInfo::support), reduced, table.saturated(a)))
        .collect()
}

/// Propositional models of the (reduced) defining equations.
pub fn models_of_theory(
    g: &GroundProgram,
    reduced: bool,
    atom_limit: usize,
) -> Result<Vec<Interpretation>, SchemeError> {
    let subsets = semantics::all_subsets(g.atom_count(), atom_limit)?;
    let equations = theory(g, reduced);
    let mut out: Vec<Interpretation> = subsets.filter(|m| equations.iter().all(|e| e.satisfied_by(m))).collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FsProbe {
    pub supports_found: usize,
    pub saturated: bool,
}

/// Counts inclusion-minimal supports of minimal schemes for `atom` found
/// within `budget` clauses.
pub fn fs_probe(g: &GroundProgram, atom: AtomId, budget: usize) -> FsProbe {
    let search = enumerate_min_schemes(g, atom, budget);
    let supports: BTreeSet<BTreeSet<AtomId>> = search.schemes.iter().map(|s| s.support().clone()).collect();
    let supports: Vec<_> = supports.into_iter().collect();
    FsProbe { supports_found: inclusion_minimal(&supports).len(), saturated: search.saturated }
}

/// Which blocking-set notion to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Blocking {
    /// Conditions (1) and (2): every code up to `m` is a non-atom or an atom
    /// with finitely many inclusion-minimal supports, and every subset passes.
    Explicit,
    /// Condition (2) only.
    Initial,
}

/// Checks whether `{0, ..., m}` is a (explicit) initial blocking set.
///
/// For every `S ⊆ {0..m}` one of the following must hold:
/// (a) some `i ∈ S` is not an atom code;
/// (b) some atom `i ∈ {0..m} \ S` has a minimal scheme with support inside
///     `{0..m} \ S`;
/// (c) some atom `i ∈ S` has no minimal scheme whose support misses `S`.
pub fn blocking_set(g: &GroundProgram, m: usize, kind: Blocking) -> Result<bool, SchemeError> {
    if m > MAX_BLOCKING_M {
        return Err(SchemeError::TooLarge(m));
    }
    let n = g.atom_count();
    let table = SchemeTable::build(g);
    if kind == Blocking::Explicit && (0..=m).any(|i| i < n && !table.saturated(i as AtomId)) {
        return Ok(false);
    }
    let window: u32 = (m + 1) as u32;
    let full: u32 = if window == 32 { u32::MAX } else { (1u32 << window) - 1 };
    // Supports as bitmasks over the window; supports reaching past `m` never
    // fit inside `{0..m} \ S` and are kept aside for (c).
    let masks: Vec<Vec<(u32, bool)>> = (0..=m)
        .map(|i| {
            if i >= n {
                return Vec::new();
            }
            table
                .schemes(i as AtomId)
                .iter()
                .map(|s| {
                    let inside = s.support().iter().all(|&a| (a as usize) <= m);
                    let mask = s.support().iter().filter(|&&a| (a as usize) <= m).fold(0u32, |acc, &a| acc | 1 << a);
                    (mask, inside)
                })
                .collect()
        })
        .collect();
    let is_atom = |i: usize| i < n;
    for s in 0..=full {
        let member = |i: usize| s >> i & 1 == 1;
        let cond_a = (0..=m).any(|i| member(i) && !is_atom(i));
        if cond_a {
            continue;
        }
        let outside = full & !s;
        let cond_b =
            (0..=m).any(|i| !member(i) && masks[i].iter().any(|&(mask, inside)| inside && mask & !outside == 0));
        if cond_b {
            continue;
        }
        let cond_c = (0..=m).any(|i| member(i) && masks[i].iter().all(|&(mask, _)| mask & s != 0));
        if !cond_c {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn explicit_blocking_set(g: &GroundProgram, m: usize) -> Result<bool, SchemeError> {
    blocking_set(g, m, Blocking::Explicit)
}

/// Smallest `m ≤ max_m` for which `{0..m}` is an explicit initial blocking set.
pub fn minimal_blocking_m(g: &GroundProgram, max_m: usize) -> Result<Option<usize>, SchemeError> {
    for m in 0..=max_m.min(MAX_BLOCKING_M) {
        if explicit_blocking_set(g, m)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Is there a stable model containing every pinned atom, with the pinned
/// scheme as that atom's least-code admitted minimal scheme, and containing
/// no unpinned atom whose code is below the largest pinned code?
pub fn exists_constrained_stable(
    g: &GroundProgram,
    pins: &[(AtomId, ProofScheme)],
    atom_limit: usize,
) -> Result<bool, SchemeError> {
    let table = SchemeTable::build(g);
    let mut pinned = Vec::with_capacity(pins.len());
    for (atom, scheme) in pins {
        scheme.check(g)?;
        if scheme.conclusion() != Some(*atom) {
            return Err(SchemeError::MalformedScheme(format!("pinned scheme does not conclude atom {atom}")));
        }
        if !is_minimal(g, scheme)? {
            return Err(SchemeError::MalformedScheme(format!("pinned scheme for atom {atom} is not minimal")));
        }
        pinned.push((*atom, scheme.code(g)));
    }
    let max_pin = pinned.iter().map(|(a, _)| *a).max();
    let stable = semantics::enumerate_stable(g, atom_limit)?;
    Ok(stable.iter().any(|m| {
        let a1 = pinned
            .iter()
            .all(|(atom, code)| m.contains(atom) && table.least_admitted(*atom, m).map(|s| &s.code) == Some(code));
        let a2 = max_pin.is_none_or(|top| m.iter().all(|b| *b >= top || pinned.iter().any(|(a, _)| a == b)));
        a1 && a2
    }))
}
