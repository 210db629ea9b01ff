//! Command-line front end. Subcommands wrap the library searches and
//! checks; all artifacts are the JSON file formats, written to --out or
//! standard output. Exit codes: 0 success, 2 honest exhaustion or
//! refutation within the stated bound, 1 malformed input or failure.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use locword::carlson::{carlson_search, fu_homog_search};
use locword::coloring::FnSetColorMap;
use locword::dynamics::{
    build_proximal_schedule, build_recurrent_schedule, check_proximality, check_recurrence,
    extract_from_proximal, extract_from_recurrent, flim_search, minimal_check, orbit_tree,
    strengthen_proximality,
};
use locword::hales_jewett::{hj_number, hj_witness};
use locword::transport::{collapse_to_words, iota_fu, iota_located, nat_to_finset};
use locword::word::{window_size, word_at_index};
use locword::{
    verify, Alphabet, Arity, BlockSequence, BoundedOutcome, Cell, CertificateFile, ColorMap,
    ColorSet, Coloring, ColoringFile, Error, FinSetSequence, LocatedWord, ProximalityKind,
    RecurrenceKind, Result, ScheduleClaim, SetColorMap, WeakBlockSequence,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "locword", version, about = "Ramsey searches over located words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker thread count; defaults to all cores.
    #[arg(long, global = true, env = "LOCWORD_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Hales-Jewett witnesses and numbers.
    Hj {
        #[command(subcommand)]
        command: HjCommand,
    },
    /// Search for a monochromatic m-block span certificate.
    Carlson(CarlsonArgs),
    /// Search for monochromatic finite unions under the letter embedding.
    Fut(FutArgs),
    /// Apply an embedding to a coloring file, emitting the pulled-back table.
    Transport(TransportArgs),
    /// Bounded topological-dynamics checks and extractions.
    Dynamics {
        #[command(subcommand)]
        command: DynamicsCommand,
    },
    /// Recheck a certificate against its instance by direct enumeration.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum HjCommand {
    /// Find a variable word whose instantiations are monochromatic.
    Search(HjSearchArgs),
    /// Least window at which every coloring admits a witness.
    Number(HjNumberArgs),
}

#[derive(Args)]
struct HjSearchArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Window to search; defaults to the coloring's own window.
    #[arg(long)]
    window: Option<u32>,
    /// Write the certificate here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HjNumberArgs {
    /// Alphabet size.
    #[arg(short)]
    k: u8,
    /// Color count.
    #[arg(short)]
    c: u64,
    /// Give up past this window.
    #[arg(long)]
    max: u32,
}

#[derive(Args)]
struct CarlsonArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Number of blocks the certificate must carry.
    #[arg(long)]
    blocks: usize,
    /// Span arity bound: a positive integer or "all".
    #[arg(long, default_value = "all", value_parser = parse_arity)]
    arity: Arity,
    /// Window cap for the growth policy; defaults to the coloring's window.
    #[arg(long)]
    window: Option<u32>,
    /// Write the certificate here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FutArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Number of pairwise-below unions to find.
    #[arg(long)]
    blocks: usize,
    /// Union arity bound: a positive integer or "all".
    #[arg(long, default_value = "all", value_parser = parse_arity)]
    arity: Arity,
    /// Ground singletons 0..window; defaults to the coloring's window.
    #[arg(long)]
    window: Option<u32>,
    /// Write the certificate here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A coloring instance: a file, or a seeded random table for suites.
#[derive(Args)]
struct InstanceArgs {
    /// Path to a coloring file.
    #[arg(long, conflicts_with = "seed")]
    coloring: Option<PathBuf>,
    /// Sample a random table coloring from this seed instead.
    #[arg(long, requires = "sample_window")]
    seed: Option<u64>,
    /// Window of the sampled coloring.
    #[arg(long = "sample-window")]
    sample_window: Option<u32>,
    /// Alphabet size of the sampled coloring.
    #[arg(long, default_value_t = 2)]
    sample_k: u8,
    /// Color count of the sampled coloring.
    #[arg(long, default_value_t = 2)]
    sample_c: u64,
    /// Also write the sampled coloring file here.
    #[arg(long)]
    emit_coloring: Option<PathBuf>,
}

#[derive(Args)]
struct TransportArgs {
    /// Which embedding to pull back along.
    #[arg(long, value_parser = ["binary", "fu", "located", "collapse"])]
    iota: String,
    /// Path to the coloring file being transported.
    #[arg(long)]
    coloring: PathBuf,
    /// Ground block, repeated: a comma-separated set for fu, a word for located.
    #[arg(long = "block")]
    blocks: Vec<String>,
    /// Output index window (binary) or canonical star word count (collapse).
    #[arg(long)]
    window: Option<u32>,
    /// Write the transported coloring here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DynamicsCommand {
    /// Does the level factor recur under shifts within the bound?
    Recurrence(RecurrenceArgs),
    /// Do two colorings share a shifted factor within the bound?
    Proximality(ProximalityArgs),
    /// Materialize the bounded orbit-closure tree.
    OrbitTree(OrbitTreeArgs),
    /// Finite limit factor along a weak block sequence.
    Flim(FlimArgs),
    /// Extract span certificates from a recurrence or proximality schedule.
    Extract(ExtractArgs),
    /// Upgrade plain proximality to a strong witness.
    Strengthen(StrengthenArgs),
}

#[derive(Args)]
struct RecurrenceArgs {
    #[arg(long)]
    coloring: PathBuf,
    /// Factor level to test.
    #[arg(long)]
    level: u32,
    /// Search witnesses below this position.
    #[arg(long)]
    bound: u32,
    #[arg(long, default_value = "plain", value_parser = ["weak", "plain", "uniform"])]
    kind: String,
    /// Modulus for the uniform kind.
    #[arg(long, default_value_t = 1)]
    modulus: u32,
}

#[derive(Args)]
struct ProximalityArgs {
    #[arg(long)]
    coloring: PathBuf,
    /// The second coloring.
    #[arg(long = "coloring-g")]
    coloring_g: PathBuf,
    #[arg(long)]
    level: u32,
    #[arg(long)]
    bound: u32,
    #[arg(long, default_value = "plain", value_parser = ["weak", "plain", "strong"])]
    kind: String,
}

#[derive(Args)]
struct OrbitTreeArgs {
    #[arg(long)]
    coloring: PathBuf,
    /// Deepest factor level to materialize.
    #[arg(long)]
    depth: u32,
    #[arg(long)]
    bound: u32,
    /// Also sweep for a minimal subtree within this budget.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct FlimArgs {
    #[arg(long)]
    coloring: PathBuf,
    /// Factor level the limit must reach.
    #[arg(long)]
    level: u32,
    /// Blocks of the iterated search.
    #[arg(long, default_value_t = 4)]
    blocks: usize,
    /// Length of the canonical pair sequence used as ground blocks.
    #[arg(long, default_value_t = 6)]
    pairs: u32,
    /// Ground block, repeated: a star-free word. Overrides --pairs.
    #[arg(long = "block")]
    ground: Vec<String>,
    /// Write the limit factor as a coloring file here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    coloring: PathBuf,
    /// Second coloring: extract from a proximality schedule instead.
    #[arg(long = "coloring-g")]
    coloring_g: Option<PathBuf>,
    /// Number of blocks the certificate must carry.
    #[arg(long)]
    blocks: usize,
    /// Schedule witnesses are searched below this position.
    #[arg(long)]
    bound: u32,
    /// Write the span certificate here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the twin certificate here (proximal extraction only).
    #[arg(long)]
    out_twin: Option<PathBuf>,
    /// Emit the schedule itself instead of the extracted span certificate.
    #[arg(long)]
    schedule: bool,
}

#[derive(Args)]
struct StrengthenArgs {
    #[arg(long)]
    coloring: PathBuf,
    #[arg(long = "coloring-g")]
    coloring_g: PathBuf,
    #[arg(long)]
    level: u32,
    /// Uniformity modulus of the second coloring's recurrence.
    #[arg(long)]
    modulus: u32,
    #[arg(long)]
    bound: u32,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate file to recheck.
    cert: PathBuf,
    /// The instance the certificate claims to certify.
    #[arg(long)]
    coloring: PathBuf,
    /// Second instance, for strong-proximality schedules.
    #[arg(long = "coloring-g")]
    coloring_g: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.threads {
            builder = builder.num_threads(n);
        }
        match builder.build() {
            Ok(pool) => pool,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

/// Exhaustion and refutation within a stated bound are honest outcomes,
/// distinct from bad input.
fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Exhausted
        | Error::ExceedsBound { .. }
        | Error::BudgetExhausted { .. }
        | Error::AmbiguousLimit
        | Error::PreconditionFailed(_) => 2,
        _ => 1,
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Hj { command: HjCommand::Search(args) } => hj_search_cmd(args),
        Command::Hj { command: HjCommand::Number(args) } => hj_number_cmd(args),
        Command::Carlson(args) => carlson_cmd(args),
        Command::Fut(args) => fut_cmd(args),
        Command::Transport(args) => transport_cmd(args),
        Command::Dynamics { command } => dynamics_cmd(command),
        Command::Verify(args) => verify_cmd(args),
    }
}

fn parse_arity(s: &str) -> std::result::Result<Arity, String> {
    if s == "all" {
        return Ok(Arity::All);
    }
    match s.parse::<u64>() {
        Ok(r) if r > 0 => Ok(Arity::AtMost(r)),
        _ => Err("expected a positive integer or \"all\"".into()),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn read_coloring(path: &Path) -> Result<Coloring> {
    ColoringFile::from_json(&read_text(path)?)?.into_coloring()
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

impl InstanceArgs {
    fn load(&self) -> Result<Coloring> {
        let f = match (&self.coloring, self.seed) {
            (Some(path), _) => read_coloring(path)?,
            (None, Some(seed)) => {
                let window = self.sample_window.expect("clap requires --sample-window");
                sampled_coloring(seed, self.sample_k, self.sample_c, window)?
            }
            (None, None) => {
                return Err(Error::InvalidInput("pass --coloring or --seed".into()))
            }
        };
        if let Some(path) = &self.emit_coloring {
            emit(Some(path), &ColoringFile::from_coloring(&f).to_json())?;
        }
        Ok(f)
    }
}

fn sampled_coloring(seed: u64, k: u8, c: u64, window: u32) -> Result<Coloring> {
    let letters: Vec<char> = (0..k).map(|i| (b'a' + i) as char).collect();
    let alphabet = Alphabet::new(&letters, '*')?;
    let len = window_size(k, window)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = (0..len).map(|_| rng.gen_range(0..c)).collect();
    Coloring::from_table(alphabet, ColorSet::new(c)?, window, table)
}

fn hj_search_cmd(args: HjSearchArgs) -> Result<u8> {
    let f = args.instance.load()?;
    let window = args.window.unwrap_or_else(|| f.window());
    match hj_witness(&f, f.alphabet(), window)? {
        Some(w) => {
            emit(args.out.as_deref(), &CertificateFile::from_hj(&w, &f).to_json())?;
            Ok(0)
        }
        None => {
            eprintln!("no witness within window {window}");
            Ok(2)
        }
    }
}

fn hj_number_cmd(args: HjNumberArgs) -> Result<u8> {
    let n = hj_number(args.k, args.c, args.max)?;
    println!("{n}");
    Ok(0)
}

/// Growth policy: search at the smallest window that can host the
/// blocks, widening on exhaustion up to the cap.
fn carlson_cmd(args: CarlsonArgs) -> Result<u8> {
    let f = args.instance.load()?;
    let cap = args.window.unwrap_or_else(|| f.window());
    let mut window = (args.blocks as u32).min(cap);
    let cert = loop {
        match carlson_search(&f, args.blocks, args.arity, window) {
            Err(Error::Exhausted) if window < cap => window += 1,
            Err(Error::Exhausted) => {
                eprintln!("no certificate within window {cap}");
                return Ok(2);
            }
            other => break other?,
        }
    };
    emit(args.out.as_deref(), &CertificateFile::from_carlson(&cert, &f).to_json())?;
    Ok(0)
}

fn fut_cmd(args: FutArgs) -> Result<u8> {
    let f = args.instance.load()?;
    let window = args.window.unwrap_or_else(|| f.window());
    let ground = FinSetSequence::new((0..window).map(|i| BTreeSet::from([i])).collect())?;
    let g = set_view(&f);
    match fu_homog_search(&g, &ground, args.blocks, args.arity) {
        Ok(sets) => {
            let color = g.color_of(sets.items().first().expect("nonempty certificate"))?;
            let file =
                CertificateFile::from_fu(sets.items(), color, args.arity, &f, window);
            emit(args.out.as_deref(), &file.to_json())?;
            Ok(0)
        }
        Err(Error::Exhausted) => {
            eprintln!("no homogeneous unions within window {window}");
            Ok(2)
        }
        Err(e) => Err(e),
    }
}

/// Finite sets colored through the first-letter embedding, the same
/// reading the verifier applies to fu certificates.
fn set_view(f: &Coloring) -> FnSetColorMap<impl Fn(&BTreeSet<u32>) -> Result<u64> + '_> {
    FnSetColorMap::new(f.colors().count(), move |e: &BTreeSet<u32>| {
        f.color_of(&LocatedWord::from_cells(e.iter().map(|&i| (i, Cell::Letter(0)))))
    })
}

fn transport_cmd(args: TransportArgs) -> Result<u8> {
    let f = read_coloring(&args.coloring)?;
    let k = f.alphabet().k();
    let transported = match args.iota.as_str() {
        "binary" => {
            require_unary(&f)?;
            let m = args
                .window
                .ok_or_else(|| Error::InvalidInput("binary needs --window".into()))?;
            if m >= 26 {
                return Err(Error::Overflow("binary transport window"));
            }
            let mut table = Vec::with_capacity(1usize << m);
            for n in 0..(1u64 << m) {
                let set = if n == 0 { BTreeSet::new() } else { nat_to_finset(n)? };
                table.push(f.color_of(&unary_word(&set))?);
            }
            Coloring::from_table(f.alphabet().clone(), f.colors(), m, table)?
        }
        "fu" => {
            require_unary(&f)?;
            let x = FinSetSequence::new(
                args.blocks.iter().map(|s| parse_set(s)).collect::<Result<_>>()?,
            )?;
            let m = x.len() as u32;
            let mut table = Vec::with_capacity(1usize << m);
            for n in 0..(1u64 << m) {
                let e: BTreeSet<u32> = (0..m).filter(|i| n >> i & 1 == 1).collect();
                table.push(f.color_of(&unary_word(&iota_fu(&x, &e)?))?);
            }
            Coloring::from_table(f.alphabet().clone(), f.colors(), m, table)?
        }
        "located" => {
            let x = BlockSequence::new(
                args.blocks
                    .iter()
                    .map(|s| f.alphabet().parse_word(s))
                    .collect::<Result<_>>()?,
            )?;
            let m = x.len() as u32;
            let size = window_size(k, m)?;
            let mut table = Vec::with_capacity(size as usize);
            for idx in 0..size {
                let q = word_at_index(idx, k, m)?;
                table.push(f.color_of(&iota_located(&x, &q)?)?);
            }
            Coloring::from_table(f.alphabet().clone(), f.colors(), m, table)?
        }
        "collapse" => {
            let count = args
                .window
                .ok_or_else(|| Error::InvalidInput("collapse needs --window".into()))?;
            let ws = locword::transport::canonical_star_words(count);
            let size = window_size(k, count)?;
            let mut table = Vec::with_capacity(size as usize);
            for idx in 0..size {
                let p = word_at_index(idx, k, count)?;
                let u = collapse_to_words(&p, &ws)?;
                let w = LocatedWord::from_cells(
                    u.iter().enumerate().map(|(i, &c)| (i as u32, c)),
                );
                table.push(f.color_of(&w)?);
            }
            Coloring::from_table(f.alphabet().clone(), f.colors(), count, table)?
        }
        other => return Err(Error::InvalidInput(format!("unknown embedding {other}"))),
    };
    emit(args.out.as_deref(), &ColoringFile::from_coloring(&transported).to_json())?;
    Ok(0)
}

fn require_unary(f: &Coloring) -> Result<()> {
    if f.alphabet().k() != 1 {
        return Err(Error::InvalidInput(
            "finite-set colorings use a single-letter alphabet".into(),
        ));
    }
    Ok(())
}

fn unary_word(set: &BTreeSet<u32>) -> LocatedWord {
    LocatedWord::from_cells(set.iter().map(|&i| (i, Cell::Letter(0))))
}

fn parse_set(s: &str) -> Result<BTreeSet<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| Error::InvalidInput(format!("bad set element {t:?}: {e}")))
        })
        .collect()
}

fn dynamics_cmd(command: DynamicsCommand) -> Result<u8> {
    match command {
        DynamicsCommand::Recurrence(args) => {
            let f = read_coloring(&args.coloring)?;
            let kind = match args.kind.as_str() {
                "weak" => RecurrenceKind::Weak,
                "plain" => RecurrenceKind::Plain,
                _ => RecurrenceKind::Uniform(args.modulus),
            };
            let outcome = check_recurrence(&f, f.alphabet(), args.level, args.bound, kind)?;
            report_outcome(&f, outcome)
        }
        DynamicsCommand::Proximality(args) => {
            let f = read_coloring(&args.coloring)?;
            let g = read_coloring(&args.coloring_g)?;
            let kind = match args.kind.as_str() {
                "weak" => ProximalityKind::Weak,
                "strong" => ProximalityKind::Strong,
                _ => ProximalityKind::Plain,
            };
            let outcome =
                check_proximality(&f, &g, f.alphabet(), args.level, args.bound, kind)?;
            report_outcome(&f, outcome)
        }
        DynamicsCommand::OrbitTree(args) => {
            let f = read_coloring(&args.coloring)?;
            let tree = orbit_tree(&f, f.alphabet(), args.depth, args.bound)?;
            for (ell, level) in tree.levels.iter().enumerate() {
                println!("level {ell}: {} factors", level.len());
            }
            if let Some(budget) = args.budget {
                let minimal = minimal_check(&tree, f.alphabet(), budget)?;
                let sizes: Vec<String> =
                    minimal.iter().map(|l| l.len().to_string()).collect();
                println!("minimal subtree levels: {}", sizes.join(", "));
            }
            Ok(0)
        }
        DynamicsCommand::Flim(args) => {
            let f = read_coloring(&args.coloring)?;
            let ground = if args.ground.is_empty() {
                canonical_pairs(args.pairs)?
            } else {
                WeakBlockSequence::new(
                    args.ground
                        .iter()
                        .map(|s| f.alphabet().parse_word(s))
                        .collect::<Result<_>>()?,
                )?
            };
            let lim = flim_search(&f, &ground, args.level, args.blocks, f.alphabet())?;
            let offsets: Vec<String> =
                lim.level_offsets.iter().map(|o| o.to_string()).collect();
            eprintln!("level offsets: {}", offsets.join(", "));
            let limit = Coloring::from_table(
                f.alphabet().clone(),
                f.colors(),
                args.level,
                lim.g.table().to_vec(),
            )?;
            emit(args.out.as_deref(), &ColoringFile::from_coloring(&limit).to_json())?;
            Ok(0)
        }
        DynamicsCommand::Extract(args) => extract_cmd(args),
        DynamicsCommand::Strengthen(args) => {
            let f = read_coloring(&args.coloring)?;
            let g = read_coloring(&args.coloring_g)?;
            let w = strengthen_proximality(
                &f,
                &g,
                f.alphabet(),
                args.level,
                args.modulus,
                args.bound,
            )?;
            println!("{}", f.alphabet().render(&w));
            Ok(0)
        }
    }
}

fn report_outcome(f: &Coloring, outcome: BoundedOutcome) -> Result<u8> {
    match outcome {
        BoundedOutcome::Witness(p) => {
            println!("witness {}", f.alphabet().render(&p));
            Ok(0)
        }
        BoundedOutcome::UniversalHolds => {
            println!("holds for every word within the bound");
            Ok(0)
        }
        BoundedOutcome::Refuted { bound, failing } => {
            match failing {
                Some(p) => eprintln!(
                    "refuted within bound {bound}: {} fails",
                    f.alphabet().render(&p)
                ),
                None => eprintln!("refuted within bound {bound}"),
            }
            Ok(2)
        }
    }
}

fn canonical_pairs(n: u32) -> Result<WeakBlockSequence> {
    WeakBlockSequence::new(
        (0..n)
            .map(|i| {
                LocatedWord::from_cells([
                    (2 * i, Cell::Letter(0)),
                    (2 * i + 1, Cell::Letter(0)),
                ])
            })
            .collect(),
    )
}

fn extract_cmd(args: ExtractArgs) -> Result<u8> {
    let f = read_coloring(&args.coloring)?;
    match &args.coloring_g {
        None => {
            let sched = build_recurrent_schedule(&f, f.alphabet(), args.blocks, args.bound)?;
            if args.schedule {
                let file = CertificateFile::from_schedule(
                    &sched,
                    ScheduleClaim::PlainRecurrence,
                    &f,
                    None,
                    args.bound,
                );
                emit(args.out.as_deref(), &file.to_json())?;
                return Ok(0);
            }
            let cert = extract_from_recurrent(&f, &sched, args.blocks)?;
            emit(args.out.as_deref(), &CertificateFile::from_carlson(&cert, &f).to_json())?;
            Ok(0)
        }
        Some(path) => {
            let g = read_coloring(path)?;
            let sched =
                build_proximal_schedule(&f, &g, f.alphabet(), args.blocks, args.bound)?;
            if args.schedule {
                let file = CertificateFile::from_schedule(
                    &sched,
                    ScheduleClaim::StrongProximality,
                    &f,
                    Some(&g),
                    args.bound,
                );
                emit(args.out.as_deref(), &file.to_json())?;
                return Ok(0);
            }
            let (main, twin) = extract_from_proximal(&f, &g, &sched, args.blocks)?;
            emit(args.out.as_deref(), &CertificateFile::from_carlson(&main, &f).to_json())?;
            let twin_json = CertificateFile::from_carlson(&twin, &g).to_json();
            match &args.out_twin {
                Some(path) => emit(Some(path), &twin_json)?,
                None => print!("{twin_json}"),
            }
            Ok(0)
        }
    }
}

fn verify_cmd(args: VerifyArgs) -> Result<u8> {
    let cert = CertificateFile::from_json(&read_text(&args.cert)?)?;
    let f = read_coloring(&args.coloring)?;
    let g = match &args.coloring_g {
        Some(path) => Some(read_coloring(path)?),
        None => None,
    };
    let report = verify(&cert, &f, g.as_ref())?;
    for ob in &report.obligations {
        println!("{} {}", if ob.ok { "ok  " } else { "FAIL" }, ob.description);
    }
    if report.ok {
        println!("certificate verifies: {} obligations hold", report.obligations.len());
        Ok(0)
    } else {
        eprintln!("certificate fails");
        Ok(1)
    }
}
