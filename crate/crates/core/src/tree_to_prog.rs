//! Trees to programs: a finite predicate program whose stable models
//! correspond to the infinite paths through a tree.
//!
//! The program consists of seven clauses over three predicates, `ipath`,
//! `notpath` and `control`, on top of a layer of builtin predicates about
//! sequence codes and tree membership. The builtins are supplied by an
//! oracle ([`TreeBuiltins`]) rather than by Horn clauses.
//!
//! Clauses are numbered (1) to (7) in the order they appear in the program
//! text.
//!
//! Stable models are infinite, so checks run on a finite region: every
//! node of the first `D` levels plus `control(0..=D)`. Each region atom's
//! proof schemes only mention region atoms, so stability restricted to the
//! region is decided exactly.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coding::{self, Code};
use crate::ground::{ground_over, AtomId, Builtins, GroundError, GroundProgram, SequenceBuiltins};
use crate::semantics::{self, Interpretation, SemanticsError};
use crate::syntax::{parse_program, Atom, Program, Term};
use crate::trees::{Level, PathDesc, TreeSpec};

/// Levels wider than this are reported as overflow.
pub const WIDTH_CAP: usize = 1 << 14;

const PROGRAM: &str = "\
% builtin: tree/1, seq/1, samelength/2, diff/2, shorter/2, length/2, notincluded/2, num/1
ipath(X) :- tree(X), not notpath(X).
notpath(X) :- tree(X), not ipath(X).
ipath(0).
notpath(X) :- tree(X), ipath(Y), tree(Y), samelength(X, Y), diff(X, Y).
notpath(X) :- tree(X), tree(Y), ipath(Y), shorter(Y, X), notincluded(Y, X).
control(X) :- ipath(Y), length(Y, X).
control(X) :- not control(X), num(X).
";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FragmentError {
    #[error("{0} is not an infinite path through the tree")]
    NotAPath(PathDesc),
    #[error("level {depth} of the tree is infinite or wider than {WIDTH_CAP} nodes")]
    Overflow { depth: usize },
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// A compiled tree program.
#[derive(Clone, Debug)]
pub struct TreeProgram {
    pub tree: TreeSpec,
    pub program: Program,
}

pub fn compile(tree: &TreeSpec) -> TreeProgram {
    let program = parse_program(PROGRAM).expect("the tree program is well formed");
    TreeProgram { tree: tree.clone(), program }
}

/// The builtin layer: `tree(n)` holds iff `n` codes a node, the rest as in
/// [`SequenceBuiltins`].
pub struct TreeBuiltins<'a> {
    pub tree: &'a TreeSpec,
}

impl Builtins for TreeBuiltins<'_> {
    fn holds(&self, atom: &Atom) -> Option<bool> {
        if atom.pred == "tree" && atom.args.len() == 1 {
            let node = atom.args[0].as_nat().and_then(coding::seq_decode_u64);
            return Some(node.is_some_and(|n| self.tree.member(&n)));
        }
        SequenceBuiltins.holds(atom)
    }
}

/// A non-builtin ground atom of the tree program.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeAtom {
    Ipath(Code),
    Notpath(Code),
    Control(u64),
}

impl TreeAtom {
    pub fn to_atom(&self) -> Atom {
        match self {
            TreeAtom::Ipath(c) => Atom::new("ipath", vec![Term::Nat(c.clone())]),
            TreeAtom::Notpath(c) => Atom::new("notpath", vec![Term::Nat(c.clone())]),
            TreeAtom::Control(n) => Atom::new("control", vec![Term::nat(*n)]),
        }
    }

    pub fn from_atom(atom: &Atom) -> Option<TreeAtom> {
        let [arg] = atom.args.as_slice() else { return None };
        let n = arg.as_nat()?.clone();
        match atom.pred.as_str() {
            "ipath" => Some(TreeAtom::Ipath(n)),
            "notpath" => Some(TreeAtom::Notpath(n)),
            "control" => n.to_u64().map(TreeAtom::Control),
            _ => None,
        }
    }
}

impl fmt::Display for TreeAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_atom())
    }
}

/// A finite part of an interpretation of the tree program.
pub type Fragment = BTreeSet<TreeAtom>;

/// The first `depth + 1` levels of the tree, with node codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub bound: Code,
    pub depth: usize,
    pub levels: Vec<Vec<(Vec<u64>, Code)>>,
}

fn zeros_code(d: usize) -> Code {
    coding::seq_code_u64(&vec![0; d])
}

impl Region {
    /// The largest `D` such that levels `0..=D` are finite with every node
    /// code at most `bound`. Level `d` is only looked at while the least
    /// code of that length, `c(0^d)`, is within the bound.
    pub fn new(tree: &TreeSpec, bound: &Code) -> Result<Region, FragmentError> {
        let mut levels = Vec::new();
        for d in 0.. {
            if zeros_code(d) > *bound {
                break;
            }
            let nodes = match tree.nodes_at_depth(d, WIDTH_CAP) {
                Level::Nodes(nodes) => nodes,
                Level::Overflow => return Err(FragmentError::Overflow { depth: d }),
            };
            let coded: Vec<(Vec<u64>, Code)> = nodes
                .into_iter()
                .map(|n| {
                    let c = coding::seq_code_u64(&n);
                    (n, c)
                })
                .collect();
            if coded.iter().any(|(_, c)| c > bound) {
                break;
            }
            levels.push(coded);
        }
        Ok(Region { bound: bound.clone(), depth: levels.len() - 1, levels })
    }

    pub fn nodes(&self) -> impl Iterator<Item = &(Vec<u64>, Code)> {
        self.levels.iter().flatten()
    }

    pub fn node(&self, code: &Code) -> Option<&[u64]> {
        self.nodes().find(|(_, c)| c == code).map(|(n, _)| n.as_slice())
    }

    /// Every atom of the region, in a fixed order.
    pub fn atoms(&self) -> Vec<TreeAtom> {
        let mut out = Vec::new();
        for (_, c) in self.nodes() {
            out.push(TreeAtom::Ipath(c.clone()));
            out.push(TreeAtom::Notpath(c.clone()));
        }
        out.extend((0..=self.depth as u64).map(TreeAtom::Control));
        out
    }

    pub fn contains(&self, atom: &TreeAtom) -> bool {
        match atom {
            TreeAtom::Ipath(c) | TreeAtom::Notpath(c) => self.node(c).is_some(),
            TreeAtom::Control(n) => *n <= self.depth as u64,
        }
    }

    /// Supports of the minimal proof schemes of a region atom. Builtin
    /// premises contribute empty supports, so only the clauses for the three
    /// head predicates matter:
    /// `ipath(0)` by the fact and by clause (1); `ipath(c)` by clause (1);
    /// `notpath(c)` by clause (2) and, through the schemes of `ipath` of
    /// another node of the same length or of a shorter node that is not a
    /// prefix, by clauses (4) and (5); `control(n)` by clause (7) and,
    /// through the schemes of `ipath` of a node of length `n`, by clause (6).
    pub fn supports(&self, atom: &TreeAtom) -> Vec<BTreeSet<TreeAtom>> {
        let ipath_supports = |c: &Code| -> Vec<BTreeSet<TreeAtom>> {
            let mut out = Vec::new();
            if c.is_zero() {
                out.push(BTreeSet::new());
            }
            if self.node(c).is_some() {
                out.push(BTreeSet::from([TreeAtom::Notpath(c.clone())]));
            }
            out
        };
        let mut out = match atom {
            TreeAtom::Ipath(c) => ipath_supports(c),
            TreeAtom::Notpath(c) => match self.node(c) {
                None => Vec::new(),
                Some(sigma) => {
                    let mut out = vec![BTreeSet::from([TreeAtom::Ipath(c.clone())])];
                    for (tau, d) in self.levels[..=sigma.len()].iter().flatten() {
                        let same_length = tau.len() == sigma.len() && tau.as_slice() != sigma;
                        let shorter_off = tau.len() < sigma.len() && !sigma.starts_with(tau);
                        if same_length || shorter_off {
                            out.extend(ipath_supports(d));
                        }
                    }
                    out
                }
            },
            TreeAtom::Control(n) => {
                let mut out = vec![BTreeSet::from([TreeAtom::Control(*n)])];
                if let Some(level) = self.levels.get(*n as usize) {
                    for (_, d) in level {
                        out.extend(ipath_supports(d));
                    }
                }
                out
            }
        };
        out.sort();
        out.dedup();
        out
    }

    /// The region's ground instance of the program: variables range over
    /// the region's node codes and the numerals `0..=D`, and only instances
    /// with a region atom as head are kept.
    pub fn ground(&self, tp: &TreeProgram) -> Result<GroundProgram, FragmentError> {
        let mut domain: BTreeSet<Code> = self.nodes().map(|(_, c)| c.clone()).collect();
        domain.extend((0..=self.depth as u64).map(BigUint::from));
        let domain: Vec<Term> = domain.into_iter().map(Term::Nat).collect();
        let builtins = TreeBuiltins { tree: &tp.tree };
        let keep = |head: &Atom| TreeAtom::from_atom(head).is_some_and(|a| self.contains(&a));
        Ok(ground_over(&tp.program, &domain, &builtins, keep)?)
    }
}

/// Smallest bound whose region reaches depth `d`: the largest node code of
/// length at most `d`, or `c(0^d)` if that is larger.
pub fn bound_for_depth(tree: &TreeSpec, d: usize) -> Result<Code, FragmentError> {
    let mut bound = zeros_code(d);
    for k in 0..=d {
        match tree.nodes_at_depth(k, WIDTH_CAP) {
            Level::Nodes(nodes) => {
                for n in nodes {
                    bound = bound.max(coding::seq_code_u64(&n));
                }
            }
            Level::Overflow => return Err(FragmentError::Overflow { depth: k }),
        }
    }
    Ok(bound)
}

/// `M_β` restricted to the region of `bound`: `control(n)` for every level,
/// `ipath` of the prefixes of `β`, `notpath` of every other node.
pub fn m_beta(tp: &TreeProgram, beta: &PathDesc, bound: &Code) -> Result<Fragment, FragmentError> {
    if !tp.tree.contains_path(beta) {
        return Err(FragmentError::NotAPath(beta.clone()));
    }
    let region = Region::new(&tp.tree, bound)?;
    let mut out: Fragment = (0..=region.depth as u64).map(TreeAtom::Control).collect();
    for (node, code) in region.nodes() {
        if beta.prefix(node.len()) == *node {
            out.insert(TreeAtom::Ipath(code.clone()));
        } else {
            out.insert(TreeAtom::Notpath(code.clone()));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail { atom: String, reason: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        *self == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FragmentReport {
    pub bound: String,
    pub region_depth: usize,
    pub atoms_checked: usize,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// A region together with its grounded program, for checking many
/// fragments against the same bound.
pub struct FragmentChecker {
    pub region: Region,
    grounded: GroundProgram,
}

impl FragmentChecker {
    pub fn new(tp: &TreeProgram, bound: &Code) -> Result<Self, FragmentError> {
        let region = Region::new(&tp.tree, bound)?;
        let grounded = region.ground(tp)?;
        Ok(FragmentChecker { region, grounded })
    }

    /// Checks that `m` is the restriction of a stable model to the region:
    /// a region atom is in `m` iff one of its minimal schemes is admitted
    /// by `m`.
    pub fn check(&self, m: &Fragment) -> FragmentReport {
        let region = &self.region;
        let atoms = region.atoms();
        let report = |verdict| FragmentReport {
            bound: region.bound.to_string(),
            region_depth: region.depth,
            atoms_checked: atoms.len(),
            verdict,
        };
        if let Some(a) = m.iter().find(|a| !region.contains(a)) {
            return report(Verdict::Fail { atom: a.to_string(), reason: "outside the verified region".into() });
        }
        for a in &atoms {
            let supports = region.supports(a);
            let admitted = supports.iter().find(|u| u.is_disjoint(m));
            match (m.contains(a), admitted) {
                (true, None) => {
                    let reason = if supports.is_empty() {
                        "in the fragment but has no proof scheme".to_string()
                    } else {
                        "in the fragment but every proof scheme's support meets it".to_string()
                    };
                    return report(Verdict::Fail { atom: a.to_string(), reason });
                }
                (false, Some(u)) => {
                    let shown: Vec<String> = u.iter().map(ToString::to_string).collect();
                    let reason = format!("missing although a scheme with support {{{}}} is admitted", shown.join(", "));
                    return report(Verdict::Fail { atom: a.to_string(), reason });
                }
                _ => {}
            }
        }
        report(Verdict::Pass)
    }

    /// The same question answered on the grounded region program: is `m`
    /// the least model of its reduct?
    pub fn grounded(&self, m: &Fragment) -> bool {
        let ids: Option<Interpretation> = m.iter().map(|a| self.grounded.lookup(&a.to_atom())).collect();
        ids.is_some_and(|ids| semantics::is_stable(&self.grounded, &ids))
    }

    /// Every stable fragment of the region, by brute force over the
    /// grounded region program.
    pub fn stable_fragments(&self, atom_limit: usize) -> Result<Vec<Fragment>, FragmentError> {
        let g = &self.grounded;
        let models = semantics::enumerate_stable(g, atom_limit)?;
        let back = |id: &AtomId| TreeAtom::from_atom(g.atom(*id)).expect("region programs only have tree atoms");
        Ok(models.iter().map(|m| m.iter().map(back).collect()).collect())
    }

    pub fn grounded_program(&self) -> &GroundProgram {
        &self.grounded
    }
}

pub fn check_stable_fragment(tp: &TreeProgram, m: &Fragment, bound: &Code) -> Result<FragmentReport, FragmentError> {
    Ok(FragmentChecker::new(tp, bound)?.check(m))
}

pub fn grounded_check(tp: &TreeProgram, m: &Fragment, bound: &Code) -> Result<bool, FragmentError> {
    Ok(FragmentChecker::new(tp, bound)?.grounded(m))
}

pub fn stable_fragments(tp: &TreeProgram, bound: &Code, atom_limit: usize) -> Result<Vec<Fragment>, FragmentError> {
    FragmentChecker::new(tp, bound)?.stable_fragments(atom_limit)
}

/// Single-atom mutations of a fragment within the region: every flip of
/// one region atom, then every swap of one member for one non-member.
pub fn mutations(region: &Region, m: &Fragment) -> Vec<Fragment> {
    let atoms = region.atoms();
    let mut out = Vec::new();
    for a in &atoms {
        let mut flipped = m.clone();
        if !flipped.remove(a) {
            flipped.insert(a.clone());
        }
        out.push(flipped);
    }
    for gone in atoms.iter().filter(|a| m.contains(*a)) {
        for added in atoms.iter().filter(|a| !m.contains(*a)) {
            let mut swapped = m.clone();
            swapped.remove(gone);
            swapped.insert(added.clone());
            out.push(swapped);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub count: usize,
    pub saturated: bool,
}

/// Counts inclusion-minimal supports of minimal schemes of `atom`, stopping
/// at `budget`. Not saturated when the count reached the budget before the
/// supports were exhausted.
pub fn scheme_census(tp: &TreeProgram, atom: &TreeAtom, budget: usize) -> Census {
    let tree = &tp.tree;
    let node_of = |c: &Code| coding::seq_decode_u64(c).filter(|n| tree.member(n));
    // Nodes of length `d`, with a flag telling whether the list is complete.
    let level = |d: usize, want: usize| -> (Vec<Vec<u64>>, bool) {
        if tree.level_is_infinite(d) {
            let mut max_label = 0;
            loop {
                let nodes = tree.nodes_at_depth_upto(d, max_label);
                if nodes.len() >= want {
                    return (nodes, false);
                }
                max_label = max_label.saturating_mul(2).max(1);
            }
        }
        match tree.nodes_at_depth(d, want) {
            Level::Nodes(nodes) => (nodes, true),
            Level::Overflow => (tree.nodes_at_depth_upto(d, u64::MAX).into_iter().take(want + 1).collect(), false),
        }
    };
    let finish = |count: usize, complete: bool| {
        if count > budget || (count == budget && !complete) {
            Census { count: budget, saturated: false }
        } else {
            Census { count, saturated: complete }
        }
    };
    match atom {
        TreeAtom::Ipath(c) => {
            // The fact's empty support subsumes clause (1) at the root.
            let count = usize::from(c.is_zero() || node_of(c).is_some());
            finish(count, true)
        }
        TreeAtom::Notpath(c) => {
            let Some(sigma) = node_of(c) else { return finish(0, true) };
            // {ipath(c)} plus one singleton {notpath(c(τ))} per other node
            // of the same length and per shorter node off the prefix chain.
            let mut count = 1;
            let mut complete = true;
            for d in 1..=sigma.len() {
                let (nodes, full) = level(d, budget + sigma.len() + 1);
                complete &= full;
                count += nodes
                    .iter()
                    .filter(|t| if d == sigma.len() { **t != sigma } else { !sigma.starts_with(t) })
                    .count();
                if count > budget {
                    break;
                }
            }
            finish(count, complete)
        }
        TreeAtom::Control(n) => {
            if *n == 0 {
                // ipath(0) by the fact: the empty support subsumes the rest.
                return finish(1, true);
            }
            let (nodes, full) = level(*n as usize, budget + 1);
            finish(nodes.len() + 1, full)
        }
    }
}

/// Whether every node code of the first `d` levels is finite in number,
/// i.e. the region up to `d` is finitely branching.
pub fn finitely_branching_to(tree: &TreeSpec, d: usize) -> bool {
    (0..=d).all(|k| !tree.level_is_infinite(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::examples::*;
    use crate::trees::{Edge, Guard};

    fn n(x: u64) -> Code {
        BigUint::from(x)
    }

    fn code(node: &[u64]) -> Code {
        coding::seq_code_u64(node)
    }

    #[test]
    fn compiled_program_shape() {
        let tp = compile(&only_zeros());
        assert_eq!(tp.program.clauses.len(), 7);
        let text = tp.program.to_string();
        assert!(text.lines().any(|l| l == "ipath(0)."), "{text}");
        assert!(text.starts_with("% builtin:"));
        for pred in ["ipath", "notpath", "control"] {
            assert!(tp.program.clauses.iter().any(|c| c.head.pred == pred));
            assert!(!tp.program.builtins.iter().any(|(p, _)| p == pred));
        }
    }

    #[test]
    fn tree_builtin() {
        let t = only_zeros();
        let b = TreeBuiltins { tree: &t };
        let tree = |c: Code| b.holds(&Atom::new("tree", vec![Term::Nat(c)])).unwrap();
        assert!(tree(n(0)));
        assert!(tree(n(2)));
        assert!(!tree(code(&[1])));
        assert!(!tree(n(1)));
        assert_eq!(b.holds(&Atom::new("num", vec![Term::nat(7)])), Some(true));
    }

    #[test]
    fn m_beta_of_the_single_path_tree() {
        let tp = compile(&only_zeros());
        let m = m_beta(&tp, &PathDesc::constant(0), &n(5)).unwrap();
        let expected: Fragment = [
            TreeAtom::Ipath(n(0)),
            TreeAtom::Ipath(n(2)),
            TreeAtom::Ipath(n(5)),
            TreeAtom::Control(0),
            TreeAtom::Control(1),
            TreeAtom::Control(2),
        ]
        .into_iter()
        .collect();
        assert_eq!(m, expected);
        assert!(check_stable_fragment(&tp, &m, &n(5)).unwrap().verdict.passed());
        assert!(grounded_check(&tp, &m, &n(5)).unwrap());
    }

    #[test]
    fn m_beta_of_the_binary_tree() {
        let tp = compile(&binary());
        let bound = bound_for_depth(&tp.tree, 2).unwrap();
        let m = m_beta(&tp, &PathDesc::constant(0), &bound).unwrap();
        assert!(m.contains(&TreeAtom::Notpath(code(&[1]))));
        assert!(m.contains(&TreeAtom::Notpath(code(&[0, 1]))));
        assert!(m.contains(&TreeAtom::Ipath(code(&[0, 0]))));
        assert!(check_stable_fragment(&tp, &m, &bound).unwrap().verdict.passed());
        assert!(grounded_check(&tp, &m, &bound).unwrap());
        let alt = m_beta(&tp, &PathDesc::new(vec![], vec![0, 1]), &bound).unwrap();
        assert!(check_stable_fragment(&tp, &alt, &bound).unwrap().verdict.passed());
        assert_eq!(m_beta(&tp, &PathDesc::constant(2), &bound), Err(FragmentError::NotAPath(PathDesc::constant(2))));
    }

    #[test]
    fn broken_fragments_fail() {
        let tp = compile(&only_zeros());
        let mut m = m_beta(&tp, &PathDesc::constant(0), &n(5)).unwrap();
        m.remove(&TreeAtom::Ipath(n(2)));
        let report = check_stable_fragment(&tp, &m, &n(5)).unwrap();
        assert!(!report.verdict.passed());
        assert!(!grounded_check(&tp, &m, &n(5)).unwrap());

        let leaf = compile(&single_leaf());
        let claim: Fragment = [
            TreeAtom::Ipath(n(0)),
            TreeAtom::Ipath(n(2)),
            TreeAtom::Control(0),
            TreeAtom::Control(1),
            TreeAtom::Control(2),
        ]
        .into_iter()
        .collect();
        let report = check_stable_fragment(&leaf, &claim, &n(5)).unwrap();
        assert_eq!(report.region_depth, 2);
        assert!(matches!(report.verdict, Verdict::Fail { ref atom, .. } if atom == "control(2)"));
        assert!(stable_fragments(&leaf, &n(5), 22).unwrap().is_empty());
    }

    #[test]
    fn stable_fragments_are_the_chains() {
        let tp = compile(&binary());
        let bound = bound_for_depth(&tp.tree, 1).unwrap();
        let all = stable_fragments(&tp, &bound, 22).unwrap();
        let region = Region::new(&tp.tree, &bound).unwrap();
        assert_eq!(all.len(), 2usize.pow(region.depth as u32));
        for m in &all {
            assert!(check_stable_fragment(&tp, m, &bound).unwrap().verdict.passed());
        }
    }

    #[test]
    fn unbounded_levels_overflow() {
        let tp = compile(&unbounded_root());
        assert_eq!(Region::new(&tp.tree, &n(10)), Err(FragmentError::Overflow { depth: 1 }));
        assert_eq!(Region::new(&tp.tree, &n(1)).unwrap().depth, 0);
    }

    #[test]
    fn census_examples() {
        let bin = compile(&binary());
        assert_eq!(scheme_census(&bin, &TreeAtom::Control(2), 100), Census { count: 5, saturated: true });
        assert_eq!(scheme_census(&bin, &TreeAtom::Ipath(n(0)), 100), Census { count: 1, saturated: true });
        assert_eq!(scheme_census(&bin, &TreeAtom::Control(0), 100), Census { count: 1, saturated: true });
        // {ipath}, the other length-2 nodes, and (1).
        assert_eq!(scheme_census(&bin, &TreeAtom::Notpath(code(&[0, 0])), 100), Census { count: 5, saturated: true });
        let unb = compile(&unbounded_root());
        assert_eq!(scheme_census(&unb, &TreeAtom::Control(1), 25), Census { count: 25, saturated: false });
        assert_eq!(scheme_census(&unb, &TreeAtom::Ipath(n(0)), 25), Census { count: 1, saturated: true });
        assert_eq!(scheme_census(&bin, &TreeAtom::Control(3), 4), Census { count: 4, saturated: false });
    }

    #[test]
    fn census_matches_region_supports() {
        let t = TreeSpec::regular(
            vec![0, 1],
            0,
            [Edge { from: 0, guard: Guard::Range(0, 2), to: 1 }, Edge { from: 1, guard: Guard::Exact(0), to: 0 }],
        )
        .unwrap();
        let tp = compile(&t);
        let bound = bound_for_depth(&t, 3).unwrap();
        let region = Region::new(&t, &bound).unwrap();
        for a in region.atoms() {
            let sets = region.supports(&a);
            let count = sets.iter().filter(|u| !sets.iter().any(|v| v != *u && v.is_subset(u))).count();
            assert_eq!(scheme_census(&tp, &a, 1000), Census { count, saturated: true }, "{a}");
        }
    }
}
