//! Verification campaigns: random programs, the switch gadget, a golden
//! suite of trees, and per-subject reports.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coding::Code;
use crate::ground::{ground, GroundError, GroundProgram};
use crate::prog_to_tree::{ProgramTree, SchemeBound};
use crate::schemes::{self, explicit_blocking_set, fs_probe, n_k_table, SchemeTable};
use crate::semantics::{all_subsets, enumerate_stable, Interpretation, SemanticsError};
use crate::syntax::{Atom, Clause, Program};
use crate::tree_to_prog::{
    bound_for_depth, compile, finitely_branching_to, m_beta, mutations, scheme_census, FragmentChecker, FragmentError,
    TreeAtom, Verdict,
};
use crate::trees::{examples, Edge, Guard, Paths, StateId, TreeSpec};

/// Largest `m` tried by the blocking-set check in campaigns.
pub const BLOCKING_M: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    pub max_atoms: usize,
    pub max_clauses: usize,
}

/// A random propositional program over atoms `p0 .. p(n-1)`. Premise and
/// constraint lists have at most three atoms; about three clauses in four
/// get at least one constraint.
pub fn random_program<R: Rng>(rng: &mut R, max_atoms: usize, max_clauses: usize) -> Program {
    let n = rng.gen_range(1..=max_atoms.max(1));
    let m = rng.gen_range(0..=max_clauses);
    let atom = |i: usize| Atom::prop(format!("p{i}"));
    let pick = |rng: &mut R, lo: usize| -> Vec<Atom> {
        let k = rng.gen_range(lo..=3).min(n);
        let mut idx = sample(rng, n, k).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(atom).collect()
    };
    let clauses = (0..m)
        .map(|_| {
            let head = atom(rng.gen_range(0..n));
            let premises = pick(rng, 0);
            let negated = rng.gen_bool(0.75);
            let constraints = pick(rng, usize::from(negated));
            Clause::new(head, premises, constraints)
        })
        .collect();
    Program::new(clauses)
}

/// The programs of a campaign, deterministic in the seed.
pub fn corpus(cfg: &FuzzConfig) -> Vec<Program> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.count).map(|_| random_program(&mut rng, cfg.max_atoms, cfg.max_clauses)).collect()
}

/// Names of the two switch atoms: the first `swN`, `swN_bar` unused by `p`.
pub fn switch_names(p: &Program) -> (String, String) {
    let used: BTreeSet<String> = p
        .clauses
        .iter()
        .flat_map(|c| c.atoms())
        .map(|a| a.pred.clone())
        .chain(p.builtins.iter().map(|(name, _)| name.clone()))
        .collect();
    (0..)
        .map(|i| if i == 0 { "sw".to_string() } else { format!("sw{i}") })
        .map(|s| (s.clone(), format!("{s}_bar")))
        .find(|(a, b)| !used.contains(a) && !used.contains(b))
        .expect("some name is free")
}

/// Adds a fresh atom `a` as a premise of every clause, together with
/// `a :- not a_bar` and `a_bar :- not a`. The stable models become `{a_bar}`
/// and `M ∪ {a}` for every stable `M` of `p`.
pub fn add_switch(p: &Program) -> Program {
    let (on, off) = switch_names(p);
    let (on, off) = (Atom::prop(on), Atom::prop(off));
    let mut out = p.clone();
    for c in &mut out.clauses {
        c.premises.push(on.clone());
    }
    out.clauses.push(Clause::new(on.clone(), vec![], vec![off.clone()]));
    out.clauses.push(Clause::new(off, vec![], vec![on]));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Results of the checks run on one subject.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub bounds: BTreeMap<String, String>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport { subject: subject.into(), ..Default::default() }
    }

    pub fn bound(&mut self, name: &str, value: impl ToString) {
        self.bounds.insert(name.to_string(), value.to_string());
    }

    pub fn record(&mut self, name: &str, passed: bool, witness: impl FnOnce() -> String) {
        let witness = if passed { None } else { Some(witness()) };
        self.checks.push(Check { name: name.to_string(), passed, witness });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Fragment(#[from] FragmentError),
}

fn show_models(g: &GroundProgram, models: &[Interpretation]) -> String {
    let shown: Vec<String> = models.iter().map(|m| g.show_set(m)).collect();
    format!("[{}]", shown.join(", "))
}

/// The four characterizations of stable models agree.
pub fn check_four_way(
    report: &mut VerificationReport,
    g: &GroundProgram,
    stable: &[Interpretation],
    limit: usize,
) -> Result<(), HarnessError> {
    let table = SchemeTable::build(g);
    let by_schemes: Vec<Interpretation> =
        all_subsets(g.atom_count(), limit)?.filter(|m| schemes::stable_by_table(&table, m)).collect();
    let theory = schemes::models_of_theory(g, false, limit).map_err(scheme_err)?;
    let reduced = schemes::models_of_theory(g, true, limit).map_err(scheme_err)?;
    for (name, got) in
        [("stable_by_schemes", by_schemes), ("models_of_theory", theory), ("models_of_reduced_theory", reduced)]
    {
        report.record(name, got == stable, || {
            format!("expected {} got {}", show_models(g, stable), show_models(g, &got))
        });
    }
    Ok(())
}

fn scheme_err(e: schemes::SchemeError) -> HarnessError {
    match e {
        schemes::SchemeError::Semantics(s) => HarnessError::Semantics(s),
        other => panic!("unexpected scheme error in a campaign: {other}"),
    }
}

/// Exact path enumeration and the encode/decode round trip.
pub fn check_tree_of_program(
    report: &mut VerificationReport,
    g: &GroundProgram,
    stable: &[Interpretation],
    limit: usize,
) -> Result<(), HarnessError> {
    let tree = ProgramTree::new(g);
    let paths = tree.enumerate_paths_exact(limit).map_err(|e| match e {
        crate::prog_to_tree::TreeBuildError::Semantics(s) => HarnessError::Semantics(s),
        other => panic!("unexpected tree error: {other}"),
    })?;
    report.record("paths_equal_stable_models", paths == stable, || {
        format!("paths {} stable {}", show_models(g, &paths), show_models(g, stable))
    });
    let mut bad = None;
    for m in stable {
        let ok =
            tree.encode_path(m).and_then(|p| tree.decode_path(&p, tree.check_depth())).is_ok_and(|back| back == *m);
        if !ok {
            bad = Some(g.show_set(m));
            break;
        }
    }
    report
        .record("encode_decode_round_trip", bad.is_none(), || format!("fails on {}", bad.clone().unwrap_or_default()));
    let wide = ProgramTree::with_bound(g, SchemeBound::Length);
    let agree = wide.enumerate_paths_exact(limit).is_ok_and(|p| p == paths);
    report.record("scheme_bound_readings_agree", agree, || "half-length and length bounds give different paths".into());
    Ok(())
}

/// A blocking set over `{0..m}` for any `m ≤ BLOCKING_M` rules out stable
/// models.
pub fn check_blocking(report: &mut VerificationReport, g: &GroundProgram, stable: &[Interpretation]) {
    let mut witness = None;
    let mut found = None;
    for m in 0..=BLOCKING_M.min(g.atom_count()) {
        if explicit_blocking_set(g, m).expect("m is within range") {
            found.get_or_insert(m);
            if !stable.is_empty() {
                witness = Some(m);
                break;
            }
        }
    }
    if let Some(m) = found {
        report.bound("blocking_m", m);
    }
    report.record("blocking_set_implies_no_model", witness.is_none(), || {
        format!("{{0..{}}} blocks yet models exist: {}", witness.unwrap_or_default(), show_models(g, stable))
    });
}

/// `N_k` grows with `k` and reaches every minimal scheme at `k = n`.
pub fn check_n_k(report: &mut VerificationReport, g: &GroundProgram) {
    let table = SchemeTable::build(g);
    let n = g.atom_count() as u64;
    let levels: Vec<BTreeSet<Code>> = (0..=n + 1).map(|k| n_k_table(&table, k)).collect();
    let monotone = levels.windows(2).all(|w| w[0].is_subset(&w[1]));
    let all: BTreeSet<Code> =
        (0..g.atom_count() as u32).flat_map(|a| table.schemes(a)).map(|s| s.code.clone()).collect();
    report.record("n_k_monotone", monotone && levels[n as usize] == all, || {
        "N_k is not an increasing chain up to all schemes".into()
    });
}

/// The switch adds exactly one stable model and keeps support censuses.
pub fn check_switch(
    report: &mut VerificationReport,
    p: &Program,
    g: &GroundProgram,
    stable: &[Interpretation],
    limit: usize,
) -> Result<(), HarnessError> {
    let switched = add_switch(p);
    let sg = ground(&switched, 0)?;
    let count = enumerate_stable(&sg, limit)?.len();
    report.record("switch_adds_one_model", count == stable.len() + 1, || {
        format!("{} models before, {count} after", stable.len())
    });
    let budget = sg.clauses().len();
    let mut moved = None;
    for (id, atom) in g.herbrand_base().iter().enumerate() {
        let before = fs_probe(g, id as u32, g.clauses().len()).supports_found;
        let after = sg.lookup(atom).map_or(0, |a| fs_probe(&sg, a, budget).supports_found);
        if before != after {
            moved = Some(format!("{atom}: {before} supports before, {after} after"));
            break;
        }
    }
    report.record("switch_keeps_support_census", moved.is_none(), || moved.clone().unwrap_or_default());
    Ok(())
}

/// The full invariant suite on one ground program.
pub fn check_program(subject: &str, p: &Program, limit: usize) -> Result<VerificationReport, HarnessError> {
    let g = ground(p, 0)?;
    let mut report = VerificationReport::new(subject);
    report.bound("atoms", g.atom_count());
    report.bound("clauses", g.clauses().len());
    let stable = enumerate_stable(&g, limit)?;
    report.bound("stable_models", stable.len());
    check_four_way(&mut report, &g, &stable, limit)?;
    check_tree_of_program(&mut report, &g, &stable, limit)?;
    check_blocking(&mut report, &g, &stable);
    check_n_k(&mut report, &g);
    check_switch(&mut report, p, &g, &stable, limit)?;
    Ok(report)
}

/// Runs `check_program` on every subject across worker threads. Reports
/// come back in subject order.
pub fn run_campaign(programs: &[Program], limit: usize) -> Vec<Result<VerificationReport, HarnessError>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(programs.len().max(1));
    let chunk = programs.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = programs
            .chunks(chunk)
            .enumerate()
            .map(|(c, part)| {
                s.spawn(move || {
                    part.iter()
                        .enumerate()
                        .map(|(i, p)| check_program(&format!("fuzz-{}", c * chunk + i), p, limit))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("campaign worker panicked")).collect()
    })
}

fn edge(from: StateId, guard: Guard, to: StateId) -> Edge {
    Edge { from, guard, to }
}

fn regular(states: u32, edges: &[(StateId, Guard, StateId)]) -> TreeSpec {
    TreeSpec::regular((0..states).collect(), 0, edges.iter().map(|&(f, g, t)| edge(f, g, t)))
        .expect("golden trees are valid")
}

/// Regular trees with finitely many infinite paths, plus one explicit
/// finite tree.
pub fn golden_trees() -> Vec<(&'static str, TreeSpec)> {
    use Guard::*;
    vec![
        ("only-zeros", examples::only_zeros()),
        ("two-paths", regular(3, &[(0, Exact(0), 1), (0, Exact(1), 2), (1, Exact(0), 1), (2, Exact(1), 2)])),
        ("finite-regular", regular(3, &[(0, Range(0, 1), 1), (1, Exact(0), 2)])),
        ("alternating", regular(2, &[(0, Exact(0), 1), (1, Exact(1), 0)])),
        ("dead-side-branches", regular(3, &[(0, Exact(0), 0), (0, Exact(1), 1), (1, Range(0, 2), 2)])),
        ("stem-then-zeros", regular(3, &[(0, Exact(2), 1), (1, Exact(1), 2), (2, Exact(0), 2)])),
        (
            "three-paths",
            regular(
                5,
                &[
                    (0, Exact(0), 1),
                    (0, Exact(1), 2),
                    (0, Exact(2), 4),
                    (1, Exact(0), 1),
                    (2, Exact(1), 3),
                    (3, Exact(0), 2),
                    (4, Exact(3), 4),
                ],
            ),
        ),
        ("period-three", regular(4, &[(0, Exact(0), 1), (1, Exact(1), 2), (2, Exact(2), 0), (0, Range(3, 4), 3)])),
        ("wide-root", regular(2, &[(0, Range(0, 3), 1), (1, Exact(0), 1)])),
        ("late-fork", regular(3, &[(0, Exact(0), 1), (1, Range(0, 1), 2), (2, Exact(0), 2)])),
        ("unreachable-cycle", regular(3, &[(0, Exact(1), 1), (2, Exact(0), 2)])),
        ("explicit-finite", TreeSpec::explicit([vec![], vec![0], vec![1], vec![0, 0]]).expect("valid")),
    ]
}

/// Trees with an infinite level, for the census checks.
pub fn infinitely_branching_trees() -> Vec<(&'static str, TreeSpec)> {
    use Guard::*;
    vec![
        ("unbounded-root", examples::unbounded_root()),
        ("full", examples::full()),
        ("late-unbounded", regular(3, &[(0, Exact(0), 1), (1, AtLeast(0), 2), (2, Exact(0), 2)])),
    ]
}

/// Depth whose node codes the fragment checks cover.
pub const TREE_DEPTH: usize = 4;

/// Bounded verification of the tree program of `tree`.
pub fn check_tree(subject: &str, tree: &TreeSpec, depth: usize) -> Result<VerificationReport, HarnessError> {
    let tp = compile(tree);
    let mut report = VerificationReport::new(subject);
    let bound = bound_for_depth(tree, depth)?;
    let checker = FragmentChecker::new(&tp, &bound)?;
    report.bound("atom_bound", &bound);
    report.bound("region_depth", checker.region.depth);
    report.bound("region_atoms", checker.region.atoms().len());
    let paths = match tree.paths() {
        Paths::Finite(paths) => paths,
        other => {
            report.record("finite_path_set", false, || format!("{other:?}"));
            return Ok(report);
        }
    };
    report.bound("paths", paths.len());
    let mut mutation_count = usize::MAX;
    for beta in &paths {
        let m = m_beta(&tp, beta, &bound)?;
        let verdict = checker.check(&m).verdict;
        let grounded = checker.grounded(&m);
        report.record(&format!("fragment_passes {beta}"), verdict.passed() && grounded, || {
            format!("{verdict:?}, grounded route says {grounded}")
        });
        let one_each = checker
            .region
            .nodes()
            .all(|(_, c)| m.contains(&TreeAtom::Ipath(c.clone())) != m.contains(&TreeAtom::Notpath(c.clone())));
        report.record(&format!("ipath_notpath_dichotomy {beta}"), one_each, || "a node has both or neither".into());
        let muts = mutations(&checker.region, &m);
        mutation_count = mutation_count.min(muts.len());
        let survivor = muts.iter().find(|x| checker.check(x).verdict.passed() || checker.grounded(x));
        report.record(&format!("mutations_fail {beta}"), survivor.is_none(), || {
            let shown: Vec<String> = survivor.unwrap().iter().map(ToString::to_string).collect();
            format!("mutated fragment passes: {{{}}}", shown.join(", "))
        });
    }
    if mutation_count != usize::MAX {
        report.bound("mutations_per_path", mutation_count);
    }
    if paths.is_empty() {
        check_no_fragment(&mut report, &tp, tree)?;
    }
    let mut unsaturated = None;
    for a in checker.region.atoms() {
        if !scheme_census(&tp, &a, 10_000).saturated {
            unsaturated = Some(a);
            break;
        }
    }
    report.record("census_saturates", unsaturated.is_none(), || format!("{}", unsaturated.clone().unwrap()));
    Ok(report)
}

/// A finite tree of height `h` has no stable fragment once the region
/// reaches level `h + 1`, and no fragment claiming `control(h+1)` passes.
pub fn check_no_fragment(
    report: &mut VerificationReport,
    tp: &crate::tree_to_prog::TreeProgram,
    tree: &TreeSpec,
) -> Result<(), HarnessError> {
    let Some(h) = tree.height() else {
        report.record("finite_tree_height", false, || "tree without paths has no height".into());
        return Ok(());
    };
    let bound = bound_for_depth(tree, h + 1)?;
    let checker = FragmentChecker::new(tp, &bound)?;
    let fragments = checker.stable_fragments(crate::semantics::DEFAULT_ATOM_LIMIT)?;
    report.record("no_stable_fragment", fragments.is_empty(), || format!("{} stable fragments", fragments.len()));
    let top = TreeAtom::Control(h as u64 + 1);
    let only_self = checker.region.supports(&top) == vec![BTreeSet::from([top.clone()])];
    report.record("control_beyond_height_underivable", only_self, || format!("{top} has other supports"));
    let claim: crate::tree_to_prog::Fragment =
        (0..=h as u64 + 1).map(TreeAtom::Control).chain([TreeAtom::Ipath(Code::default())]).collect();
    let verdict = checker.check(&claim).verdict;
    report.record("claim_of_control_fails", matches!(verdict, Verdict::Fail { .. }), || format!("{verdict:?}"));
    Ok(())
}

/// Probes the census at every atom of the first `depth` levels, taking only
/// labels up to `max_label` on infinite levels. Returns whether every
/// probe saturated.
pub fn census_saturates(tree: &TreeSpec, depth: usize, max_label: u64, budget: usize) -> bool {
    let tp = compile(tree);
    let mut atoms: Vec<TreeAtom> = (0..=depth as u64).map(TreeAtom::Control).collect();
    for d in 0..=depth {
        for node in tree.nodes_at_depth_upto(d, max_label) {
            let c = crate::coding::seq_code_u64(&node);
            atoms.push(TreeAtom::Ipath(c.clone()));
            atoms.push(TreeAtom::Notpath(c));
        }
    }
    atoms.iter().all(|a| scheme_census(&tp, a, budget).saturated)
}

/// Whether the census verdict matches finite branching of the first levels.
pub fn census_matches_branching(tree: &TreeSpec, depth: usize) -> bool {
    census_saturates(tree, depth, 3, 200) == finitely_branching_to(tree, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::DEFAULT_ATOM_LIMIT;
    use crate::syntax::parse_program;

    #[test]
    fn corpus_is_deterministic_and_bounded() {
        let cfg = FuzzConfig { seed: 7, count: 40, max_atoms: 6, max_clauses: 8 };
        let a = corpus(&cfg);
        assert_eq!(a, corpus(&cfg));
        for p in &a {
            assert!(p.clauses.len() <= 8);
            let g = ground(p, 0).unwrap();
            assert!(g.atom_count() <= 6);
        }
        let negated = a.iter().flat_map(|p| &p.clauses).filter(|c| !c.constraints.is_empty()).count();
        let total: usize = a.iter().map(|p| p.clauses.len()).sum();
        assert!(negated * 2 > total);
    }

    #[test]
    fn switch_examples() {
        let count = |text: &str| {
            let p = add_switch(&parse_program(text).unwrap());
            enumerate_stable(&ground(&p, 0).unwrap(), DEFAULT_ATOM_LIMIT).unwrap().len()
        };
        assert_eq!(count("a :- not a."), 1);
        assert_eq!(count("p. q :- p, not r. r :- not q. s :- not t."), 3);
        assert_eq!(count(""), 2);
        let p = parse_program("sw :- not sw_bar.").unwrap();
        assert_eq!(switch_names(&p), ("sw1".to_string(), "sw1_bar".to_string()));
        let g = ground(&add_switch(&Program::default()), 0).unwrap();
        let models = enumerate_stable(&g, DEFAULT_ATOM_LIMIT).unwrap();
        let shown: Vec<String> = models.iter().map(|m| g.show_set(m)).collect();
        assert_eq!(shown, vec!["{sw}", "{sw_bar}"]);
    }

    #[test]
    fn program_reports_pass() {
        let p = parse_program("p. q :- p, not r. r :- not q. s :- not t.").unwrap();
        let r = check_program("ex", &p, DEFAULT_ATOM_LIMIT).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        let odd = parse_program("a :- not a.").unwrap();
        let r = check_program("odd", &odd, DEFAULT_ATOM_LIMIT).unwrap();
        assert!(r.passed());
        assert_eq!(r.bounds["blocking_m"], "0");
    }

    #[test]
    fn golden_tree_reports_pass() {
        for (name, t) in golden_trees().iter().take(3) {
            let r = check_tree(name, t, TREE_DEPTH).unwrap();
            assert!(r.passed(), "{}", r.to_json());
        }
    }

    #[test]
    fn census_linkage() {
        for (_, t) in golden_trees() {
            assert!(census_matches_branching(&t, 3));
        }
        for (_, t) in infinitely_branching_trees() {
            assert!(census_matches_branching(&t, 3));
            assert!(!census_saturates(&t, 3, 3, 200));
        }
    }
}
