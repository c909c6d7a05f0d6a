//! `stabletree`: stable models, proof schemes, and the tree/program
//! correspondences from the command line.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use stabletree_core::coding::Code;
use stabletree_core::ground::{ground, AtomId, GroundProgram};
use stabletree_core::harness::{
    add_switch, check_four_way, check_no_fragment, corpus, run_campaign, FuzzConfig, VerificationReport,
};
use stabletree_core::prog_to_tree::{BranchingCensus, ProgramTree};
use stabletree_core::schemes::{
    blocking_set, fs_probe, is_minimal, models_of_theory, theory, Blocking, SchemeTable, MAX_BLOCKING_M,
};
use stabletree_core::semantics::{enumerate_stable, Interpretation};
use stabletree_core::syntax::{parse_program, Program};
use stabletree_core::tree_to_prog::{bound_for_depth, compile, m_beta, mutations, FragmentChecker};
use stabletree_core::trees::{PathDesc, TreeSpec};

#[derive(Parser)]
#[command(name = "stabletree", version, about = "Stable models of normal programs and their trees")]
struct Cli {
    /// Largest Herbrand base enumerated by brute force.
    #[arg(long, global = true, default_value_t = 22)]
    atom_limit: usize,
    /// Term depth used to ground programs with variables.
    #[arg(long, global = true, default_value_t = 3)]
    depth: u64,
    /// Clause budget for scheme searches (default: all clauses).
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Print JSON lines instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stable models by all four characterizations.
    Stable { file: PathBuf },
    /// Minimal proof schemes of each atom.
    Schemes {
        file: PathBuf,
        #[arg(long)]
        atom: Option<String>,
    },
    /// Defining equations of the atoms.
    Defeq {
        file: PathBuf,
        /// Keep only inclusion-minimal supports.
        #[arg(long)]
        reduced: bool,
    },
    /// Emit the program of a tree and optionally verify path fragments.
    Tree2prog {
        file: PathBuf,
        /// Paths to verify, written `(stem)(cycle)^w`.
        #[arg(long)]
        verify: Vec<String>,
        /// Largest node code covered by the checks.
        #[arg(long)]
        atom_bound: Option<String>,
        /// Tree depth whose node codes the checks cover, when no bound is given.
        #[arg(long, default_value_t = 4)]
        region_depth: usize,
    },
    /// Paths, branching and blocking sets of the tree of a program.
    Prog2tree {
        file: PathBuf,
        /// Compare decoded paths with the stable models.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 4)]
        census_depth: usize,
        #[arg(long, default_value_t = 4096)]
        census_cap: usize,
    },
    /// Smallest explicit and initial blocking sets.
    Blockingset {
        file: PathBuf,
        #[arg(long)]
        max_m: Option<usize>,
    },
    /// Inclusion-minimal support counts.
    Fsprobe {
        file: PathBuf,
        #[arg(long)]
        atom: Option<String>,
    },
    /// Add a fresh switch and compare model counts.
    Switch { file: PathBuf },
    /// Run the invariant suite on random programs.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        max_atoms: usize,
        #[arg(long, default_value_t = 10)]
        max_clauses: usize,
    },
}

/// Largest atom count accepted by `fuzz`.
const FUZZ_MAX_ATOMS: usize = 14;

/// Largest `m` scanned by `prog2tree`.
const PROG2TREE_MAX_M: usize = 16;

struct Output {
    data: Vec<Value>,
    text: Vec<String>,
    reports: Vec<VerificationReport>,
}

impl Output {
    fn new(report: VerificationReport) -> Self {
        Output { data: Vec::new(), text: Vec::new(), reports: vec![report] }
    }

    fn report(&mut self) -> &mut VerificationReport {
        self.reports.last_mut().expect("one report")
    }

    fn emit(&mut self, data: Value, text: String) {
        self.data.push(data);
        self.text.push(text);
    }
}

type CmdResult = Result<Output, String>;

fn load_program(path: &Path) -> Result<Program, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_program(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_ground(path: &Path, depth: u64) -> Result<(Program, GroundProgram), String> {
    let p = load_program(path)?;
    let g = ground(&p, depth).map_err(|e| e.to_string())?;
    Ok((p, g))
}

fn subject(path: &Path) -> String {
    path.display().to_string()
}

fn names(g: &GroundProgram, set: &BTreeSet<AtomId>) -> Vec<String> {
    set.iter().map(|&a| g.atom(a).to_string()).collect()
}

fn find_atom(g: &GroundProgram, name: &str) -> Result<AtomId, String> {
    (0..g.atom_count() as AtomId)
        .find(|&a| g.atom(a).to_string() == name)
        .ok_or_else(|| format!("no atom {name} in the program"))
}

fn selected_atoms(g: &GroundProgram, atom: Option<&str>) -> Result<Vec<AtomId>, String> {
    match atom {
        Some(name) => Ok(vec![find_atom(g, name)?]),
        None => Ok((0..g.atom_count() as AtomId).collect()),
    }
}

fn stable(cli: &Cli, file: &Path) -> CmdResult {
    let (_, g) = load_ground(file, cli.depth)?;
    let models = enumerate_stable(&g, cli.atom_limit).map_err(|e| e.to_string())?;
    let mut out = Output::new(VerificationReport::new(subject(file)));
    out.report().bound("atoms", g.atom_count());
    out.report().bound("exact_grounding", g.is_exact());
    check_four_way(out.report(), &g, &models, cli.atom_limit).map_err(|e| e.to_string())?;
    for m in &models {
        out.emit(json!({ "model": names(&g, m) }), format!("model {}", g.show_set(m)));
    }
    out.emit(json!({ "stable_models": models.len() }), format!("{} stable models", models.len()));
    Ok(out)
}

fn schemes(cli: &Cli, file: &Path, atom: Option<&str>) -> CmdResult {
    let (_, g) = load_ground(file, cli.depth)?;
    let budget = cli.budget.unwrap_or(g.clauses().len());
    let table = SchemeTable::with_budget(&g, budget);
    let mut out = Output::new(VerificationReport::new(subject(file)));
    out.report().bound("budget", budget);
    let mut bad = None;
    for a in selected_atoms(&g, atom)? {
        for info in table.schemes(a) {
            let ok = info.scheme.check(&g).is_ok() && is_minimal(&g, &info.scheme).unwrap_or(false);
            if !ok && bad.is_none() {
                bad = Some(info.scheme.display(&g).to_string());
            }
            out.emit(
                json!({
                    "atom": g.atom(a).to_string(),
                    "code": info.code.to_string(),
                    "support": names(&g, info.support()),
                    "scheme": info.scheme.display(&g).to_string(),
                }),
                format!("{}: {}  code {}", g.atom(a), info.scheme.display(&g), info.code),
            );
        }
        let saturated = table.saturated(a);
        out.emit(
            json!({ "atom": g.atom(a).to_string(), "schemes": table.schemes(a).len(), "saturated": saturated }),
            format!(
                "{}: {} minimal schemes{}",
                g.atom(a),
                table.schemes(a).len(),
                if saturated { "" } else { " (search cut short)" }
            ),
        );
    }
    out.report().record("schemes_are_minimal", bad.is_none(), || bad.clone().unwrap_or_default());
    Ok(out)
}

fn defeq(cli: &Cli, file: &Path, reduced: bool) -> CmdResult {
    let (_, g) = load_ground(file, cli.depth)?;
    let mut out = Output::new(VerificationReport::new(subject(file)));
    out.report().bound("reduced", reduced);
    for eq in theory(&g, reduced) {
        let supports: Vec<Vec<String>> = eq.supports.iter().map(|s| names(&g, s)).collect();
        out.emit(
            json!({
                "atom": g.atom(eq.atom).to_string(),
                "equation": eq.render(&g),
                "supports": supports,
                "saturated": eq.saturated,
            }),
            eq.render(&g),
        );
    }
    if g.atom_count() <= cli.atom_limit {
        let models = enumerate_stable(&g, cli.atom_limit).map_err(|e| e.to_string())?;
        let theory_models = models_of_theory(&g, reduced, cli.atom_limit).map_err(|e| e.to_string())?;
        out.report().record("models_of_theory_are_stable", theory_models == models, || {
            format!("{} theory models, {} stable models", theory_models.len(), models.len())
        });
    }
    Ok(out)
}

fn tree2prog(file: &Path, verify: &[String], atom_bound: Option<&str>, region_depth: usize) -> CmdResult {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    let tree = TreeSpec::from_json(&text).map_err(|e| format!("{}: {e}", file.display()))?;
    let tp = compile(&tree);
    let mut out = Output::new(VerificationReport::new(subject(file)));
    let program = tp.program.to_string();
    out.emit(json!({ "program": program }), program.trim_end().to_string());
    let paths: Vec<PathDesc> =
        verify.iter().map(|s| s.parse::<PathDesc>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    if !paths.is_empty() {
        let bound: Code = match atom_bound {
            Some(b) => b.parse().map_err(|_| format!("--atom-bound {b} is not a natural number"))?,
            None => bound_for_depth(&tree, region_depth)
                .map_err(|e| format!("{e}; fragment checks need every level below the bound to be finite"))?,
        };
        let checker = FragmentChecker::new(&tp, &bound)
            .map_err(|e| format!("{e}; fragment checks need every level below the bound to be finite"))?;
        out.report().bound("atom_bound", &bound);
        out.report().bound("region_depth", checker.region.depth);
        out.report().bound("region_atoms", checker.region.atoms().len());
        for beta in &paths {
            let m = match m_beta(&tp, beta, &bound) {
                Ok(m) => m,
                Err(e) => {
                    out.report().record(&format!("fragment {beta}"), false, || e.to_string());
                    continue;
                }
            };
            let fragment = checker.check(&m);
            let grounded = checker.grounded(&m);
            let muts = mutations(&checker.region, &m);
            let survivors = muts.iter().filter(|x| checker.check(x).verdict.passed() || checker.grounded(x)).count();
            let passed = fragment.verdict.passed();
            out.report().record(&format!("fragment {beta}"), passed && grounded, || {
                format!("{:?}; grounded route says {grounded}", fragment.verdict)
            });
            out.report().record(&format!("mutations {beta}"), survivors == 0, || {
                format!("{survivors} of {} mutations pass", muts.len())
            });
            out.emit(
                json!({ "path": beta.to_string(), "fragment": fragment, "grounded": grounded, "mutations": muts.len(), "mutations_passing": survivors }),
                format!(
                    "{beta}: {} ({} atoms), grounded {}, {}/{} mutations fail",
                    if passed { "pass" } else { "FAIL" },
                    fragment.atoms_checked,
                    if grounded { "pass" } else { "FAIL" },
                    muts.len() - survivors,
                    muts.len()
                ),
            );
        }
    }
    if tree.height().is_some() {
        check_no_fragment(out.report(), &tp, &tree).map_err(|e| e.to_string())?;
    }
    Ok(out)
}

fn show_models(g: &GroundProgram, models: &[Interpretation]) -> Vec<Vec<String>> {
    models.iter().map(|m| names(g, m)).collect()
}

fn first_blocking(g: &GroundProgram, max_m: usize, kind: Blocking) -> Result<Option<usize>, String> {
    for m in 0..=max_m {
        if blocking_set(g, m, kind).map_err(|e| e.to_string())? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

fn prog2tree(cli: &Cli, file: &Path, exact: bool, census_depth: usize, census_cap: usize) -> CmdResult {
    let (_, g) = load_ground(file, cli.depth)?;
    let tree = ProgramTree::new(&g);
    let mut out = Output::new(VerificationReport::new(subject(file)));
    out.report().bound("atoms", g.atom_count());
    out.report().bound("exact_grounding", g.is_exact());
    let models = if g.atom_count() <= cli.atom_limit {
        Some(enumerate_stable(&g, cli.atom_limit).map_err(|e| e.to_string())?)
    } else {
        None
    };
    if exact {
        let paths = tree.enumerate_paths_exact(cli.atom_limit).map_err(|e| e.to_string())?;
        let models = models.as_ref().expect("within the atom limit");
        out.report().record("paths_equal_stable_models", paths == *models, || {
            format!("{} paths, {} stable models", paths.len(), models.len())
        });
        let mut round_trip = true;
        for m in &paths {
            let beta = tree.encode_path(m).map_err(|e| e.to_string())?;
            round_trip &= tree.decode_path(&beta, tree.check_depth()).is_ok_and(|back| back == *m);
            let prefix: Vec<String> = beta.prefix(2 * g.atom_count()).iter().map(ToString::to_string).collect();
            out.emit(
                json!({ "path": names(&g, m), "prefix": prefix }),
                format!("path {} = ({}, ...)", g.show_set(m), prefix.join(", ")),
            );
        }
        out.report().record("encode_decode_round_trip", round_trip, || "a path does not decode to its model".into());
        out.emit(json!({ "paths": paths.len(), "models": show_models(&g, models) }), format!("{} paths", paths.len()));
    }
    out.report().bound("census_depth", census_depth);
    out.report().bound("census_cap", census_cap);
    match tree.branching_census(census_depth, census_cap) {
        BranchingCensus::Levels(levels) => {
            for l in &levels {
                out.emit(
                    json!({ "level": l }),
                    format!(
                        "level {}: {} nodes, {} children, at most {} per node",
                        l.depth, l.nodes, l.children, l.max_children
                    ),
                );
            }
        }
        BranchingCensus::Overflow { depth } => {
            out.emit(json!({ "census_overflow": depth }), format!("level {depth} has more than {census_cap} children"));
        }
    }
    let max_m = g.atom_count().min(PROG2TREE_MAX_M);
    let found = first_blocking(&g, max_m, Blocking::Explicit)?;
    out.report().bound("blocking_max_m", max_m);
    out.emit(
        json!({ "blocking_m": found }),
        match found {
            Some(m) => format!("explicit blocking set {{0..{m}}}"),
            None => format!("no explicit blocking set up to m = {max_m}"),
        },
    );
    if let (Some(_), Some(models)) = (found, &models) {
        out.report()
            .record("blocking_set_implies_no_model", models.is_empty(), || format!("{} stable models", models.len()));
    }
    Ok(out)
}

fn blockingset(cli: &Cli, file: &Path, max_m: Option<usize>) -> CmdResult {
    let (_, g) = load_ground(file, cli.depth)?;
    let max_m = max_m.unwrap_or(g.atom_count().min(PROG2TREE_MAX_M));
    if max_m > MAX_BLOCKING_M {
        return Err(format!("--max-m must be at most {MAX_BLOCKING_M}"));
    }
    let mut out = Output::new(VerificationReport::new(subject(file)));
    out.report().bound("max_m", max_m);
    let explicit = first_blocking(&g, max_m, Blocking::Explicit)?;
    let initial = first_blocking(&g, max_m, Blocking::Initial)?;
    out.emit(
        json!({ "explicit_m": explicit, "initial_m": initial }),
        format!("explicit blocking m: {}; initial blocking m: {}", show_m(explicit), show_m(initial)),
    );
    if initial.is_some() && g.atom_count() <= cli.atom_limit {
        let models = enumerate_stable(&g, cli.atom_limit).map_err(|e| e.to_string())?;
        out.report()
            .record("blocking_set_implies_no_model", models.is_empty(), || format!("{} stable models", models.len()));
    }
    Ok(out)
}

fn show_m(m: Option<usize>) -> String {
    m.map_or_else(|| "none".to_string(), |m| m.to_string())
}

fn fsprobe(cli: &Cli, file: &Path, atom: Option<&str>) -> CmdResult {
    let (_, g) = load_ground(file, cli.depth)?;
    let budget = cli.budget.unwrap_or(g.clauses().len());
    let mut out = Output::new(VerificationReport::new(subject(file)));
    out.report().bound("budget", budget);
    out.report().bound("exact_grounding", g.is_exact());
    for a in selected_atoms(&g, atom)? {
        let probe = fs_probe(&g, a, budget);
        out.emit(
            json!({ "atom": g.atom(a).to_string(), "supports": probe.supports_found, "saturated": probe.saturated }),
            format!(
                "{}: {} inclusion-minimal supports{}",
                g.atom(a),
                probe.supports_found,
                if probe.saturated { "" } else { " (lower bound)" }
            ),
        );
    }
    Ok(out)
}

fn switch(cli: &Cli, file: &Path) -> CmdResult {
    let (p, g) = load_ground(file, cli.depth)?;
    let switched = add_switch(&p);
    let mut out = Output::new(VerificationReport::new(subject(file)));
    let text = switched.to_string();
    out.emit(json!({ "program": text }), text.trim_end().to_string());
    let sg = ground(&switched, cli.depth).map_err(|e| e.to_string())?;
    if sg.atom_count() <= cli.atom_limit {
        let before = enumerate_stable(&g, cli.atom_limit).map_err(|e| e.to_string())?;
        let after = enumerate_stable(&sg, cli.atom_limit).map_err(|e| e.to_string())?;
        out.report().record("switch_adds_one_model", after.len() == before.len() + 1, || {
            format!("{} models before, {} after", before.len(), after.len())
        });
        out.emit(
            json!({ "models_before": before.len(), "models_after": show_models(&sg, &after) }),
            format!("{} stable models before, {} after", before.len(), after.len()),
        );
    }
    Ok(out)
}

fn fuzz(cli: &Cli, cfg: FuzzConfig) -> CmdResult {
    if cfg.max_atoms == 0 || cfg.max_atoms > FUZZ_MAX_ATOMS {
        return Err(format!("--max-atoms must be between 1 and {FUZZ_MAX_ATOMS}"));
    }
    let programs = corpus(&cfg);
    let reports = run_campaign(&programs, cli.atom_limit)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let failing = reports.iter().filter(|r| !r.passed()).count();
    let summary = format!("{} programs from seed {}, {failing} failing", reports.len(), cfg.seed);
    Ok(Output {
        data: vec![json!({ "programs": reports.len(), "seed": cfg.seed, "failing": failing })],
        text: vec![summary],
        reports,
    })
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Stable { file } => stable(cli, file),
        Command::Schemes { file, atom } => schemes(cli, file, atom.as_deref()),
        Command::Defeq { file, reduced } => defeq(cli, file, *reduced),
        Command::Tree2prog { file, verify, atom_bound, region_depth } => {
            tree2prog(file, verify, atom_bound.as_deref(), *region_depth)
        }
        Command::Prog2tree { file, exact, census_depth, census_cap } => {
            prog2tree(cli, file, *exact, *census_depth, *census_cap)
        }
        Command::Blockingset { file, max_m } => blockingset(cli, file, *max_m),
        Command::Fsprobe { file, atom } => fsprobe(cli, file, atom.as_deref()),
        Command::Switch { file } => switch(cli, file),
        Command::Fuzz { seed, count, max_atoms, max_clauses } => {
            fuzz(cli, FuzzConfig { seed: *seed, count: *count, max_atoms: *max_atoms, max_clauses: *max_clauses })
        }
    }
}

fn print(out: &Output, json: bool) {
    if json {
        for line in &out.data {
            println!("{line}");
        }
        for r in &out.reports {
            println!("{}", r.to_json());
        }
        return;
    }
    for line in &out.text {
        println!("{line}");
    }
    let checks: usize = out.reports.iter().map(|r| r.checks.len()).sum();
    let failed: Vec<_> = out.reports.iter().flat_map(|r| r.failures().map(move |c| (r, c))).collect();
    if let [report] = out.reports.as_slice() {
        for c in &report.checks {
            match &c.witness {
                None => println!("ok   {}", c.name),
                Some(w) => println!("FAIL {}: {w}", c.name),
            }
        }
    } else {
        for (r, c) in &failed {
            println!("FAIL {} {}: {}", r.subject, c.name, c.witness.as_deref().unwrap_or(""));
        }
    }
    println!("{} of {checks} checks passed", checks - failed.len());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print(&out, cli.json);
            if out.reports.iter().all(VerificationReport::passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
