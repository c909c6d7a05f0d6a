//! Programs to trees: a tree whose infinite paths encode the stable models
//! of a finite ground program.
//!
//! A stable model `M` of a program with atoms `0..n` is encoded by the path
//! `f_M`: position `2i` holds 1 or 0 as `i ∈ M`, and position `2i + 1` holds
//! the least code of a minimal proof scheme of `i` admitted by `M` (0 when
//! `i ∉ M`). Codes `n, n+1, ...` are not atoms, so every path ends in zeros.
//!
//! Node membership looks at the node's complete pairs `(σ(2i), σ(2i+1))`,
//! `i < p` with `p = ⌊k/2⌋` and `k = |σ|`. With `I` and `O` the pairs marked
//! 1 and 0, and `N` the codes of minimal schemes all of whose clauses only
//! mention atoms below `p`, a node is accepted iff
//!
//! * every even entry is 0 or 1;
//! * (a) `σ(2i) = 0` implies `σ(2i+1) = 0`;
//! * (b) `σ(2i) = 1` implies `σ(2i+1)` is the least code of a minimal scheme
//!   for `i` among those with the same support, and that support misses `I`;
//! * (c) `σ(2i) = 1` implies no code in `N` below `σ(2i+1)` belongs to a
//!   scheme for `i` with support inside `O`;
//! * (d) `σ(2i) = 0` implies no code in `N` belongs to a scheme for `i` with
//!   support inside `O`;
//! * (e) the last complete pair, if marked 1, carries a least code for its
//!   support.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::coding::Code;
use crate::ground::{AtomId, GroundProgram};
use crate::schemes::{SchemeInfo, SchemeTable};
use crate::semantics::{self, Interpretation, SemanticsError};

/// Extra pairs of zeros checked past the last atom.
pub const SLACK: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeBuildError {
    #[error("the set is not a stable model of the program")]
    NotStable,
    #[error("prefix of length {length} is not a node: condition {condition} fails")]
    NotANode { length: usize, condition: Condition },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// Which scheme codes the bounded conditions (c) and (d) consult.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeBound {
    /// Schemes over atoms below `⌊k/2⌋`.
    HalfLength,
    /// Schemes over atoms below `k`.
    Length,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// An even entry other than 0 or 1.
    Binary,
    A,
    B,
    C,
    D,
    E,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::Binary => "binary",
            Condition::A => "(a)",
            Condition::B => "(b)",
            Condition::C => "(c)",
            Condition::D => "(d)",
            Condition::E => "(e)",
        };
        f.write_str(s)
    }
}

/// The first failing condition of a node, with the pair index it concerns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub condition: Condition,
    pub pair: usize,
}

/// A path that is zero from `stem.len()` on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroTailPath {
    pub stem: Vec<Code>,
}

impl ZeroTailPath {
    pub fn at(&self, i: usize) -> Code {
        self.stem.get(i).cloned().unwrap_or_default()
    }

    pub fn prefix(&self, len: usize) -> Vec<Code> {
        (0..len).map(|i| self.at(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCensus {
    pub depth: usize,
    pub nodes: usize,
    pub children: usize,
    pub max_children: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchingCensus {
    Levels(Vec<LevelCensus>),
    Overflow { depth: usize },
}

/// The tree of a finite ground program.
#[derive(Clone, Debug)]
pub struct ProgramTree {
    program: GroundProgram,
    table: SchemeTable,
    /// Per atom: least code per support, in code order.
    canonical: Vec<Vec<SchemeInfo>>,
    bound: SchemeBound,
}

impl ProgramTree {
    pub fn new(program: &GroundProgram) -> Self {
        Self::with_bound(program, SchemeBound::HalfLength)
    }

    pub fn with_bound(program: &GroundProgram, bound: SchemeBound) -> Self {
        let table = SchemeTable::build(program);
        let canonical = (0..program.atom_count() as AtomId)
            .map(|a| table.least_per_support(a).into_iter().cloned().collect())
            .collect();
        ProgramTree { program: program.clone(), table, canonical, bound }
    }

    pub fn program(&self) -> &GroundProgram {
        &self.program
    }

    pub fn atom_count(&self) -> usize {
        self.program.atom_count()
    }

    fn schemes(&self, i: usize) -> &[SchemeInfo] {
        if i < self.atom_count() {
            self.table.schemes(i as AtomId)
        } else {
            &[]
        }
    }

    fn canonical_for(&self, i: usize, code: &Code) -> Option<&SchemeInfo> {
        self.canonical.get(i)?.iter().find(|s| s.code == *code)
    }

    pub fn node_member(&self, node: &[Code]) -> bool {
        self.check_node(node).is_none()
    }

    /// `None` if the node belongs to the tree, else the first failure.
    pub fn check_node(&self, node: &[Code]) -> Option<Failure> {
        let one = BigUint::one();
        if let Some(pos) = node.iter().step_by(2).position(|x| !x.is_zero() && *x != one) {
            return Some(Failure { condition: Condition::Binary, pair: pos });
        }
        let k = node.len();
        let pairs = k / 2;
        let limit = match self.bound {
            SchemeBound::HalfLength => pairs,
            SchemeBound::Length => k,
        };
        let marked = |i: usize| node[2 * i] == one;
        let inside: BTreeSet<AtomId> = (0..pairs).filter(|&i| marked(i)).map(|i| i as AtomId).collect();
        let outside: BTreeSet<AtomId> = (0..pairs).filter(|&i| !marked(i)).map(|i| i as AtomId).collect();
        let in_n = |s: &SchemeInfo| (s.max_atom as usize) < limit;
        let fail = |condition, pair| Some(Failure { condition, pair });
        for i in 0..pairs {
            let q = &node[2 * i + 1];
            if !marked(i) {
                if !q.is_zero() {
                    return fail(Condition::A, i);
                }
                if self.schemes(i).iter().any(|s| in_n(s) && s.support().is_subset(&outside)) {
                    return fail(Condition::D, i);
                }
                continue;
            }
            let Some(scheme) = self.canonical_for(i, q) else {
                let condition = if i + 1 == pairs { Condition::E } else { Condition::B };
                return fail(condition, i);
            };
            if !scheme.support().is_disjoint(&inside) {
                return fail(Condition::B, i);
            }
            let smaller =
                self.schemes(i).iter().take_while(|s| s.code < *q).any(|s| in_n(s) && s.support().is_subset(&outside));
            if smaller {
                return fail(Condition::C, i);
            }
        }
        None
    }

    /// Candidate children of a node: the only labels that can pass.
    fn candidates(&self, node: &[Code]) -> Vec<Code> {
        let k = node.len();
        if k.is_multiple_of(2) {
            return vec![BigUint::zero(), BigUint::one()];
        }
        let i = k / 2;
        if node[k - 1].is_zero() {
            return vec![BigUint::zero()];
        }
        self.canonical.get(i).map_or_else(Vec::new, |c| c.iter().map(|s| s.code.clone()).collect())
    }

    /// Children of a node in code order. Labels outside the candidates fail
    /// (a), (b) or the binary condition, so the list is exact.
    pub fn children(&self, node: &[Code]) -> Vec<Code> {
        self.candidates(node)
            .into_iter()
            .filter(|c| {
                let mut child = node.to_vec();
                child.push(c.clone());
                self.node_member(&child)
            })
            .collect()
    }

    /// The path `f_M`.
    pub fn encode_path(&self, m: &Interpretation) -> Result<ZeroTailPath, TreeBuildError> {
        if !semantics::is_stable(&self.program, m) {
            return Err(TreeBuildError::NotStable);
        }
        let mut stem = Vec::with_capacity(2 * self.atom_count());
        for i in 0..self.atom_count() as AtomId {
            if m.contains(&i) {
                let q = self.table.least_admitted(i, m).ok_or(TreeBuildError::NotStable)?;
                stem.push(BigUint::one());
                stem.push(q.code.clone());
            } else {
                stem.push(BigUint::zero());
                stem.push(BigUint::zero());
            }
        }
        Ok(ZeroTailPath { stem })
    }

    /// Reads `{i : β(2i) = 1}` off a path after checking its prefixes up to
    /// length `check_depth`.
    pub fn decode_path(&self, beta: &ZeroTailPath, check_depth: usize) -> Result<Interpretation, TreeBuildError> {
        for length in 0..=check_depth {
            if let Some(f) = self.check_node(&beta.prefix(length)) {
                return Err(TreeBuildError::NotANode { length, condition: f.condition });
            }
        }
        let one = BigUint::one();
        Ok((0..self.atom_count()).filter(|&i| beta.at(2 * i) == one).map(|i| i as AtomId).collect())
    }

    /// Depth to which prefixes are verified: all atoms plus the slack pairs.
    pub fn check_depth(&self) -> usize {
        2 * (self.atom_count() + SLACK)
    }

    /// Decoded infinite paths: every node of length `2n` extended by zeros,
    /// with every prefix up to [`Self::check_depth`] verified.
    pub fn enumerate_paths_exact(&self, atom_limit: usize) -> Result<Vec<Interpretation>, TreeBuildError> {
        let n = self.atom_count();
        if n > atom_limit {
            return Err(SemanticsError::TooLarge { atoms: n, limit: atom_limit }.into());
        }
        let mut out = Vec::new();
        let mut node = Vec::new();
        self.walk(&mut node, 2 * n, &mut |leaf| {
            let path = ZeroTailPath { stem: leaf.to_vec() };
            if let Ok(m) = self.decode_path(&path, self.check_depth()) {
                out.push(m);
            }
        });
        out.sort();
        Ok(out)
    }

    fn walk(&self, node: &mut Vec<Code>, depth: usize, visit: &mut dyn FnMut(&[Code])) {
        if node.len() == depth {
            visit(node);
            return;
        }
        for c in self.children(node) {
            node.push(c);
            self.walk(node, depth, visit);
            node.pop();
        }
    }

    /// Child counts level by level, stopping with `Overflow` when a level
    /// has more than `cap` children in total.
    pub fn branching_census(&self, depth: usize, cap: usize) -> BranchingCensus {
        let mut level: Vec<Vec<Code>> = vec![Vec::new()];
        let mut out = Vec::new();
        for d in 0..depth {
            let mut next = Vec::new();
            let mut max_children = 0;
            for node in &level {
                let children = self.children(node);
                max_children = max_children.max(children.len());
                for c in children {
                    let mut child = node.clone();
                    child.push(c);
                    next.push(child);
                }
                if next.len() > cap {
                    return BranchingCensus::Overflow { depth: d };
                }
            }
            out.push(LevelCensus { depth: d, nodes: level.len(), children: next.len(), max_children });
            level = next;
        }
        BranchingCensus::Levels(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::ground;
    use crate::semantics::{enumerate_stable, DEFAULT_ATOM_LIMIT};
    use crate::syntax::parse_program;

    fn prog(text: &str) -> GroundProgram {
        ground(&parse_program(text).unwrap(), 0).unwrap()
    }

    fn b(x: u64) -> Code {
        BigUint::from(x)
    }

    fn only_code(t: &ProgramTree, atom: AtomId) -> Code {
        let c = &t.canonical[atom as usize];
        assert_eq!(c.len(), 1);
        c[0].code.clone()
    }

    #[test]
    fn switch_program_nodes() {
        let g = prog("a :- not b. b :- not a.");
        let t = ProgramTree::new(&g);
        let qa = only_code(&t, 0);
        let qb = only_code(&t, 1);
        assert!(t.node_member(&[]));
        assert!(t.node_member(&[b(1), qa.clone(), b(0), b(0)]));
        assert_eq!(
            t.check_node(&[b(1), qa.clone(), b(1), qb.clone()]),
            Some(Failure { condition: Condition::B, pair: 0 })
        );
        assert!(t.node_member(&[b(1), qa.clone(), b(1)]));
        assert_eq!(t.check_node(&[b(0), b(5)]), Some(Failure { condition: Condition::A, pair: 0 }));
        assert_eq!(t.check_node(&[b(2)]), Some(Failure { condition: Condition::Binary, pair: 0 }));
        assert_eq!(t.check_node(&[b(1), qb]), Some(Failure { condition: Condition::E, pair: 0 }));
    }

    #[test]
    fn encoding_examples() {
        let fact = prog("a.");
        let t = ProgramTree::new(&fact);
        let q = only_code(&t, 0);
        let m: Interpretation = [0].into_iter().collect();
        assert_eq!(t.encode_path(&m).unwrap(), ZeroTailPath { stem: vec![b(1), q] });
        assert_eq!(t.encode_path(&Interpretation::new()), Err(TreeBuildError::NotStable));

        let g = prog("a :- not b. b :- not a.");
        let t = ProgramTree::new(&g);
        let qb = only_code(&t, 1);
        let mb: Interpretation = [1].into_iter().collect();
        let path = t.encode_path(&mb).unwrap();
        assert_eq!(path.stem, vec![b(0), b(0), b(1), qb]);
        assert_eq!(t.decode_path(&path, t.check_depth()).unwrap(), mb);
    }

    #[test]
    fn decoding_rejects_bad_prefixes() {
        let g = prog("a :- not b. b :- not a.");
        let t = ProgramTree::new(&g);
        let bad = ZeroTailPath { stem: vec![b(0), b(0), b(0), b(0)] };
        assert!(matches!(
            t.decode_path(&bad, t.check_depth()),
            Err(TreeBuildError::NotANode { condition: Condition::D, .. })
        ));
    }

    #[test]
    fn exact_enumeration_matches_stable_models() {
        for text in [
            "p. q :- p, not r. r :- not q. s :- not t.",
            "a :- not a.",
            "p. q :- p.",
            "a :- not b. b :- not a.",
            "a :- not a, not b. b.",
            "",
        ] {
            let g = prog(text);
            let t = ProgramTree::new(&g);
            assert_eq!(
                t.enumerate_paths_exact(DEFAULT_ATOM_LIMIT).unwrap(),
                enumerate_stable(&g, DEFAULT_ATOM_LIMIT).unwrap(),
                "{text}"
            );
        }
    }

    #[test]
    fn census_examples() {
        let g = prog("p. q :- p, not r. r :- not q. s :- not t.");
        let t = ProgramTree::new(&g);
        let BranchingCensus::Levels(levels) = t.branching_census(10, 1000) else { panic!() };
        assert_eq!(levels.len(), 10);
        assert_eq!(levels[0].children, 2);

        let odd = ProgramTree::new(&prog("a :- not a."));
        let BranchingCensus::Levels(levels) = odd.branching_census(4, 1000) else { panic!() };
        // (1, q) dies at (b), (0, 0) at (d): nothing of length 2 survives.
        assert_eq!(levels[1].children, 0);

        let empty = ProgramTree::new(&GroundProgram::new());
        let BranchingCensus::Levels(levels) = empty.branching_census(6, 10) else { panic!() };
        // A trailing 1 lives until its pair is complete; only zeros go on.
        assert!(levels.iter().all(|l| l.nodes == if l.depth % 2 == 0 { 1 } else { 2 }));
        assert!(empty.node_member(&vec![b(0); 6]));
        assert!(!empty.node_member(&[b(1), b(0)]));

        assert_eq!(t.branching_census(10, 1), BranchingCensus::Overflow { depth: 0 });
    }

    #[test]
    fn both_scheme_bounds_agree_on_examples() {
        let g = prog("p. q :- p, not r. r :- not q. s :- not t.");
        let half = ProgramTree::with_bound(&g, SchemeBound::HalfLength);
        let full = ProgramTree::with_bound(&g, SchemeBound::Length);
        assert_eq!(half.enumerate_paths_exact(22).unwrap(), full.enumerate_paths_exact(22).unwrap());
    }
}
