//! The `homcount` command line.
//!
//! Every subcommand writes deterministic TSV (or structure blocks) to
//! standard output and diagnostics to standard error. Exit codes: 0 success,
//! 1 a witness separated the inputs, 2 usage or parse error, 3 a cap was
//! exceeded.

pub mod desk;
pub mod formats;

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homcount::cklogic::{
    ck_profile_equal_with, test_family_preset, tree_decomposition, treewidth_with, wl_equivalent,
};
use homcount::lovasz::{distinguish, DistinguishOptions, TestFamily};
use homcount::profinite::{
    abelian_groups, continuous_hom_count, distinguish_towers, surjection_profile, FiniteGroup,
    Tower,
};
use homcount::quotposet::QuotientPoset;
use homcount::sigstruct::{are_isomorphic, StructureClass};
use homcount::stirling::{falling_factorial, kernel_decomposition, stirling_number};
use homcount::trees::{
    count_tree_morphisms, distinguish_trees_with, truncate, FiniteTree, RationalTreeSpec,
};
use homcount::{
    count_morphisms, Count, FactorisationSystem, Limits, MorphismClass, Side, Structure,
};

use desk::{DeskLab, Level};
use formats::{
    compact_relations, parse_document, parse_one_structure, write_group, write_structure,
    write_tree, Document,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_WITNESS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "homcount",
    version,
    about = "Counts homomorphisms between finite relational structures and uses the counts to decide isomorphism"
)]
struct Cli {
    /// Cap on the number of canonical structures any enumeration may produce.
    #[arg(long, global = true, env = "HOMCOUNT_CAP", value_name = "N")]
    cap: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Counts the morphisms c → a of one class.
    ///
    /// Every hom factors as a quotient followed by an embedding; the class
    /// and the factorisation system choose which kind of arrow is counted.
    Count {
        #[command(flatten)]
        morph: MorphArgs,
        /// Also print up to N of the morphisms, one map per line.
        #[arg(long, value_name = "N")]
        limit: Option<usize>,
        c: PathBuf,
        a: PathBuf,
    },
    /// Prints the hom-count profile of a structure against all test structures up to the budget.
    ///
    /// Lovász: finite structures with equal profiles against every finite
    /// structure (on either side) are isomorphic.
    Profile {
        #[command(flatten)]
        test: TestArgs,
        a: PathBuf,
    },
    /// Searches for a test structure whose hom counts separate two structures.
    ///
    /// Lovász: finite structures a and b are isomorphic if and only if
    /// |hom(c, a)| = |hom(c, b)| for every finite c, and dually
    /// |hom(a, c)| = |hom(b, c)|. Exits 1 when a witness is found.
    Distinguish {
        #[command(flatten)]
        test: TestArgs,
        a: PathBuf,
        b: PathBuf,
    },
    /// Decides isomorphism by canonical labeling. Exits 1 if not isomorphic.
    Iso { a: PathBuf, b: PathBuf },
    /// Prints the quotient poset Q(c) with Möbius values μ(q, top).
    ///
    /// Möbius inversion over the quotients of c: the number of embeddings
    /// c ↣ a is Σ_q μ(q, top)·|hom(cod q, a)|. With a second structure the
    /// embedding count obtained this way is printed too.
    Mobius {
        #[arg(long, value_enum, default_value_t = SystemArg::SeM)]
        system: SystemArg,
        c: PathBuf,
        a: Option<PathBuf>,
    },
    /// Splits hom(c, a) by the quotient of c each hom factors through.
    ///
    /// Stirling kernel: hom(c, a) is the disjoint union, over quotients q of
    /// c, of the generic homs out of cod q, and a hom is generic exactly when
    /// it is an embedding.
    Kernel {
        #[arg(long, value_enum, default_value_t = SystemArg::SeM)]
        system: SystemArg,
        c: PathBuf,
        a: PathBuf,
    },
    /// Stirling numbers of the second kind and the finite-set hom count.
    ///
    /// |hom(n, a)| = a^n = Σ_m S(n, m)·a(a−1)…(a−m+1): a map from an n-set
    /// is a partition into m blocks followed by an injection of the blocks.
    Stirling {
        n: usize,
        m: Option<usize>,
        /// Expand a^n as the sum over m of S(n, m) times the falling factorial.
        #[arg(long, value_name = "A")]
        a: Option<usize>,
    },
    /// Exact tree-width of the Gaifman graph.
    Treewidth {
        /// Also print an optimal tree decomposition.
        #[arg(long)]
        decomposition: bool,
        a: PathBuf,
    },
    /// Compares two structures in k-variable counting logic.
    ///
    /// Structures satisfy the same sentences of k-variable counting logic if
    /// and only if they have the same number of homs from every structure of
    /// tree-width below k. Exits 1 when a witness of small tree-width is found.
    Ck {
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Largest test structure size.
        #[arg(long, default_value_t = 5)]
        budget: usize,
        a: PathBuf,
        b: PathBuf,
    },
    /// Rooted finite trees and their morphisms.
    ///
    /// Rooted finite trees are isomorphic if and only if they receive the same
    /// number of tree morphisms from every finite rooted tree.
    Trees {
        #[command(subcommand)]
        command: TreesCommand,
    },
    /// Towers of finite groups standing for profinite groups.
    ///
    /// Topologically finitely generated profinite groups are isomorphic if
    /// and only if they have the same number of continuous homomorphisms
    /// into every finite group.
    Tower {
        #[command(subcommand)]
        command: TowerCommand,
    },
    /// Runs the exact desk-scale checks of the counting theorems.
    ///
    /// Lovász completeness on both sides, Möbius inversion, the Stirling
    /// kernel, generic homs, counting logic, trees, group towers and
    /// pushout amalgamation. Exits 1 if any check fails.
    Selftest {
        #[arg(long, value_enum, default_value_t = LevelArg::Desk)]
        level: LevelArg,
        /// Run only the given check (1 to 8).
        #[arg(long, value_name = "ID")]
        only: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum TreesCommand {
    /// Counts tree morphisms r → p (root to root, parent to parent).
    Count { r: PathBuf, p: PathBuf },
    /// Searches trees up to the budget for one receiving different morphism counts.
    ///
    /// Rooted finite trees are isomorphic if and only if they receive the
    /// same number of tree morphisms from every finite rooted tree.
    Distinguish {
        #[arg(long, default_value_t = 5)]
        budget: usize,
        p: PathBuf,
        q: PathBuf,
    },
    /// Cuts a rational tree (the unfolding of a finite state graph) at a depth.
    Truncate {
        #[arg(long)]
        depth: usize,
        spec: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum TowerCommand {
    /// Hom counts from every level into each family group.
    ///
    /// Continuous homs from the limit into a finite group are the direct limit
    /// of the level hom-sets, so the level counts never decrease.
    Count {
        #[command(flatten)]
        family: FamilyArgs,
        towers: PathBuf,
    },
    /// Separates the first two towers of a file by a finite group.
    ///
    /// Topologically finitely generated profinite groups are isomorphic if
    /// and only if they have the same number of continuous homomorphisms
    /// into every finite group. Exits 1 when a witness is found.
    Distinguish {
        #[command(flatten)]
        family: FamilyArgs,
        towers: PathBuf,
    },
    /// Whether some level surjects onto each family group.
    ///
    /// A surjection from a level gives a continuous surjection from the limit.
    Surjections {
        #[command(flatten)]
        family: FamilyArgs,
        towers: PathBuf,
    },
}

#[derive(Args, Debug)]
struct MorphArgs {
    #[arg(long, value_enum, default_value_t = ClassArg::Hom)]
    class: ClassArg,
    #[arg(long, value_enum, default_value_t = SystemArg::SeM)]
    system: SystemArg,
}

#[derive(Args, Debug)]
struct TestArgs {
    #[command(flatten)]
    morph: MorphArgs,
    #[arg(long, value_enum, default_value_t = SideArg::Right)]
    side: SideArg,
    /// Largest test structure size.
    #[arg(long, default_value_t = 3)]
    budget: usize,
    /// Test structures: all structures, simple graphs, or simple graphs when every input is one.
    #[arg(long, value_enum, default_value_t = FamilyArg::Auto)]
    family: FamilyArg,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// Comma-separated group names; defaults to the abelian groups up to the budget.
    #[arg(long, value_delimiter = ',')]
    family: Vec<String>,
    /// Largest order of the default abelian family.
    #[arg(long, default_value_t = 8)]
    budget: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SystemArg {
    #[value(name = "se-m")]
    SeM,
    #[value(name = "e-sm")]
    ESm,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SideArg {
    Left,
    Right,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ClassArg {
    Hom,
    Mono,
    StrongMono,
    Surjection,
    Quotient,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Auto,
    All,
    Graphs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LevelArg {
    Desk,
    Smoke,
}

impl From<SystemArg> for FactorisationSystem {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::SeM => FactorisationSystem::SeM,
            SystemArg::ESm => FactorisationSystem::ESm,
        }
    }
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

impl From<ClassArg> for MorphismClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Hom => MorphismClass::Hom,
            ClassArg::Mono => MorphismClass::Mono,
            ClassArg::StrongMono => MorphismClass::StrongMono,
            ClassArg::Surjection => MorphismClass::Surjection,
            ClassArg::Quotient => MorphismClass::Quotient,
        }
    }
}

impl FamilyArg {
    fn resolve(self, inputs: &[&Structure]) -> StructureClass {
        match self {
            FamilyArg::All => StructureClass::All,
            FamilyArg::Graphs => StructureClass::SimpleGraphs,
            FamilyArg::Auto => match inputs {
                [a] => test_family_preset(a, a),
                [a, b, ..] => test_family_preset(a, b),
                [] => StructureClass::All,
            },
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(homcount::Error),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<homcount::Error> for CliError {
    fn from(e: homcount::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type Outcome = Result<i32, CliError>;

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut limits = Limits::default();
    if let Some(cap) = cli.cap {
        limits = limits.with_structure_count(cap);
    }
    match execute(cli.command, &limits, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "homcount: {e}");
            match e {
                CliError::Lib(e) if e.is_limit() => EXIT_CAP,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_structure(path: &Path) -> Result<Structure, CliError> {
    parse_one_structure(&read(path)?)
        .map(|n| n.structure)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_document(path: &Path) -> Result<Document, CliError> {
    parse_document(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_tree(path: &Path) -> Result<FiniteTree, CliError> {
    let doc = load_document(path)?;
    doc.trees
        .into_iter()
        .next()
        .map(|(_, t)| t)
        .ok_or_else(|| CliError::Usage(format!("{}: no tree defined", path.display())))
}

fn load_rational(path: &Path) -> Result<RationalTreeSpec, CliError> {
    let doc = load_document(path)?;
    doc.rationals
        .into_iter()
        .next()
        .map(|(_, t)| t)
        .ok_or_else(|| CliError::Usage(format!("{}: no rational tree defined", path.display())))
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn execute(command: Command, limits: &Limits, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Count { morph, limit, c, a } => {
            let (c, a) = (load_structure(&c)?, load_structure(&a)?);
            if limit == Some(0) {
                return Err(CliError::Usage("--limit must be at least 1".into()));
            }
            let r = count_morphisms(
                &c,
                &a,
                morph.class.into(),
                morph.system.into(),
                limit.is_some(),
                limit,
            )?;
            writeln!(out, "{}", r.count)?;
            for m in r.witnesses.iter().flatten() {
                writeln!(out, "map\t{}", join(m.map(), "\t"))?;
            }
            Ok(EXIT_OK)
        }
        Command::Profile { test, a } => {
            let a = load_structure(&a)?;
            let family = TestFamily::new(
                a.signature(),
                test.budget,
                test.family.resolve(&[&a]),
                test.morph.class.into(),
                test.morph.system.into(),
                limits,
            )?;
            let profile = family.profile(&a, test.side.into())?;
            for ((code, _), count) in family.members().iter().zip(&profile.counts) {
                writeln!(out, "{}\t{count}", hex::encode(code.as_bytes()))?;
            }
            Ok(EXIT_OK)
        }
        Command::Distinguish { test, a, b } => {
            let (a, b) = (load_structure(&a)?, load_structure(&b)?);
            let options = DistinguishOptions::new(test.budget)
                .side(test.side.into())
                .class(test.morph.class.into())
                .system(test.morph.system.into())
                .family(test.family.resolve(&[&a, &b]))
                .limits(limits.clone());
            let r = distinguish(&a, &b, &options)?;
            match r.witness {
                Some(w) => {
                    out.write_all(write_structure("witness", &w.test).as_bytes())?;
                    writeln!(out, "counts\t{}\t{}", w.counts.0, w.counts.1)?;
                    writeln!(out, "tested\t{}", r.tested)?;
                    Ok(EXIT_WITNESS)
                }
                None => {
                    writeln!(out, "profiles-equal-within-budget\t{}", r.tested)?;
                    Ok(EXIT_OK)
                }
            }
        }
        Command::Iso { a, b } => {
            let (a, b) = (load_structure(&a)?, load_structure(&b)?);
            if are_isomorphic(&a, &b)? {
                writeln!(out, "isomorphic")?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "not-isomorphic")?;
                Ok(EXIT_WITNESS)
            }
        }
        Command::Mobius { system, c, a } => {
            let c = load_structure(&c)?;
            let q = QuotientPoset::new(&c, system.into(), limits)?;
            let mu = q.mobius_to_top()?;
            for (i, e) in q.elements().enumerate() {
                writeln!(
                    out,
                    "element\t{i}\t{}\t{}\t{}",
                    e.partition,
                    compact_relations(&e.codomain),
                    mu[i]
                )?;
            }
            for (x, y) in q.hasse_edges()? {
                writeln!(out, "edge\t{x}\t{y}")?;
            }
            if let Some(a) = a {
                let a = load_structure(&a)?;
                let n =
                    homcount::lovasz::embeddings_via_mobius_with(&c, &a, system.into(), limits)?;
                writeln!(out, "embeddings\t{n}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Kernel { system, c, a } => {
            let (c, a) = (load_structure(&c)?, load_structure(&a)?);
            let k = kernel_decomposition(&c, &a, system.into())?;
            for row in &k.rows {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    row.partition,
                    row.partition.block_count(),
                    compact_relations(&row.codomain),
                    row.generic
                )?;
            }
            writeln!(out, "total\t{}", k.total)?;
            writeln!(out, "hom\t{}", k.homcount)?;
            Ok(EXIT_OK)
        }
        Command::Stirling { n, m, a } => {
            if let Some(m) = m {
                writeln!(out, "{}", stirling_number(n, m))?;
                return Ok(EXIT_OK);
            }
            match a {
                None => {
                    for m in 0..=n {
                        writeln!(out, "{m}\t{}", stirling_number(n, m))?;
                    }
                }
                Some(a) => {
                    let mut total = Count::from(0u32);
                    for m in 0..=n {
                        let (s, f) = (stirling_number(n, m), falling_factorial(a, m));
                        let term = &s * &f;
                        writeln!(out, "{m}\t{s}\t{f}\t{term}")?;
                        total += term;
                    }
                    writeln!(out, "total\t{total}")?;
                    writeln!(out, "power\t{}", Count::from(a).pow(n as u32))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Treewidth { decomposition, a } => {
            let a = load_structure(&a)?;
            writeln!(out, "{}", treewidth_with(&a, limits)?)?;
            if decomposition {
                let d = tree_decomposition(&a)?;
                for (i, bag) in d.bags.iter().enumerate() {
                    writeln!(out, "bag\t{i}\t{}", join(bag, "\t"))?;
                }
                for (x, y) in &d.edges {
                    writeln!(out, "edge\t{x}\t{y}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Ck { k, budget, a, b } => {
            let (a, b) = (load_structure(&a)?, load_structure(&b)?);
            let v = ck_profile_equal_with(&a, &b, k, budget, limits)?;
            if let Some(w) = &v.witness {
                out.write_all(write_structure("witness", &w.test).as_bytes())?;
                writeln!(out, "counts\t{}\t{}", w.counts.0, w.counts.1)?;
            }
            let verdict = if v.equivalent {
                "equal"
            } else {
                "distinguished"
            };
            writeln!(out, "{}\t{verdict}\t{}", v.method, v.tested)?;
            if k >= 2 {
                match wl_equivalent(&a, &b, k) {
                    Ok(eq) => writeln!(
                        out,
                        "wl-oracle\t{}",
                        if eq { "equal" } else { "distinguished" }
                    )?,
                    Err(e) if e.is_limit() => writeln!(out, "wl-oracle\tskipped")?,
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(if v.equivalent { EXIT_OK } else { EXIT_WITNESS })
        }
        Command::Trees { command } => trees(command, limits, out),
        Command::Tower { command } => tower(command, out),
        Command::Selftest { level, only } => {
            let level = match level {
                LevelArg::Desk => Level::Desk,
                LevelArg::Smoke => Level::Smoke,
            };
            let ids: Vec<usize> = match only {
                Some(id) if (1..=8).contains(&id) => vec![id],
                Some(id) => {
                    return Err(CliError::Usage(format!("no check {id}; checks are 1 to 8")))
                }
                None => (1..=8).collect(),
            };
            let lab = DeskLab::new(level).map_err(CliError::Usage)?;
            let mut failed = 0;
            for id in ids {
                let start = Instant::now();
                let o = lab.run(id);
                writeln!(out, "{}", o.line())?;
                writeln!(err, "check {id}: {:.2}s", start.elapsed().as_secs_f64())?;
                failed += usize::from(!o.passed);
            }
            Ok(if failed == 0 { EXIT_OK } else { EXIT_WITNESS })
        }
    }
}

fn trees(command: TreesCommand, limits: &Limits, out: &mut dyn Write) -> Outcome {
    match command {
        TreesCommand::Count { r, p } => {
            let (r, p) = (load_tree(&r)?, load_tree(&p)?);
            writeln!(out, "{}", count_tree_morphisms(&r, &p))?;
            Ok(EXIT_OK)
        }
        TreesCommand::Distinguish { budget, p, q } => {
            let (p, q) = (load_tree(&p)?, load_tree(&q)?);
            let r = distinguish_trees_with(&p, &q, budget, limits)?;
            match r.witness {
                Some(w) => {
                    out.write_all(write_tree("witness", &w.test).as_bytes())?;
                    writeln!(out, "counts\t{}\t{}", w.counts.0, w.counts.1)?;
                    writeln!(out, "tested\t{}", r.tested)?;
                    Ok(EXIT_WITNESS)
                }
                None => {
                    writeln!(out, "profiles-equal-within-budget\t{}", r.tested)?;
                    Ok(EXIT_OK)
                }
            }
        }
        TreesCommand::Truncate { depth, spec } => {
            let t = truncate(&load_rational(&spec)?, depth, limits)?;
            out.write_all(write_tree(&format!("depth{depth}"), &t).as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn family_groups(args: &FamilyArgs, doc: &Document) -> Result<Vec<FiniteGroup>, CliError> {
    if args.family.is_empty() {
        return Ok(abelian_groups(args.budget));
    }
    args.family
        .iter()
        .map(|name| {
            doc.group(name)
                .ok_or_else(|| CliError::Usage(format!("unknown group `{name}`")))
        })
        .collect()
}

fn load_towers(
    path: &Path,
    family: &FamilyArgs,
) -> Result<(Vec<Tower>, Vec<FiniteGroup>), CliError> {
    let doc = load_document(path)?;
    let groups = family_groups(family, &doc)?;
    if doc.towers.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: no tower defined",
            path.display()
        )));
    }
    Ok((doc.towers, groups))
}

fn tower(command: TowerCommand, out: &mut dyn Write) -> Outcome {
    match command {
        TowerCommand::Count { family, towers } => {
            let (towers, groups) = load_towers(&towers, &family)?;
            for t in &towers {
                for c in &groups {
                    let n = continuous_hom_count(t, c)?;
                    let stable = if n.stabilized {
                        "stabilized"
                    } else {
                        "unstable"
                    };
                    writeln!(
                        out,
                        "{t}\t{c}\t{}\t{stable}\t{}",
                        n.count,
                        join(&n.levels, ",")
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
        TowerCommand::Distinguish { family, towers } => {
            let (towers, groups) = load_towers(&towers, &family)?;
            let [t1, t2, ..] = towers.as_slice() else {
                return Err(CliError::Usage("distinguish needs two towers".into()));
            };
            let d = distinguish_towers(t1, t2, &groups)?;
            if !d.unstable.is_empty() {
                writeln!(
                    out,
                    "unstable\t{}",
                    join(d.unstable.iter().map(|&i| groups[i].name()), ",")
                )?;
            }
            match d.result.witness {
                Some(w) => {
                    out.write_all(write_group(&w.test).as_bytes())?;
                    writeln!(out, "counts\t{}\t{}", w.counts.0, w.counts.1)?;
                    writeln!(out, "tested\t{}", d.result.tested)?;
                    Ok(EXIT_WITNESS)
                }
                None => {
                    writeln!(out, "profiles-equal-within-budget\t{}", d.result.tested)?;
                    Ok(EXIT_OK)
                }
            }
        }
        TowerCommand::Surjections { family, towers } => {
            let (towers, groups) = load_towers(&towers, &family)?;
            for t in &towers {
                for (c, onto) in groups.iter().zip(surjection_profile(t, &groups)) {
                    writeln!(out, "{t}\t{c}\t{onto}")?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}
