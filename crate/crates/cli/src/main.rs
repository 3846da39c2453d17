use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adaptabar::{parse_trace, ProfileStore, Session, SessionDefs, TraceEvent, UserId};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "adaptabar", version, about = "Deterministic adaptive-toolbar engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a JSONL trace and write the final snapshot.
    Replay(ReplayArgs),
    /// Answer each NDJSON trace event on stdin with a snapshot line on stdout.
    Serve(ServeArgs),
}

#[derive(Args)]
struct EngineArgs {
    /// Toolbar, chain and palette definitions (JSON).
    #[arg(long)]
    defs: PathBuf,
    /// Profile directory; without one, profiles live in memory only.
    #[arg(long, env = "ADAPTABAR_PROFILES")]
    profiles: Option<PathBuf>,
    /// User the session starts as.
    #[arg(long, default_value = "default")]
    user: String,
}

#[derive(Args)]
struct ReplayArgs {
    #[command(flatten)]
    engine: EngineArgs,
    /// JSONL trace, `-` for stdin.
    #[arg(long)]
    trace: PathBuf,
    /// Overrides the primary toolbar's available width.
    #[arg(long)]
    width: Option<u32>,
    /// Where to write the snapshot; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave the profile directory untouched.
    #[arg(long)]
    no_save: bool,
}

#[derive(Args)]
struct ServeArgs {
    #[command(flatten)]
    engine: EngineArgs,
    /// Use stdin/stdout as the transport.
    #[arg(long, required = true)]
    stdio: bool,
}

fn io_err(path: &Path, source: io::Error) -> adaptabar::Error {
    adaptabar::Error::Io { path: path.to_path_buf(), source }
}

fn read_input(path: &Path) -> Result<String> {
    let text = if path == Path::new("-") {
        io::read_to_string(io::stdin()).map_err(|e| io_err(path, e))?
    } else {
        fs::read_to_string(path).map_err(|e| io_err(path, e))?
    };
    Ok(text)
}

fn open_session(engine: &EngineArgs, width: Option<u32>) -> Result<Session> {
    let mut defs = SessionDefs::from_json(&read_input(&engine.defs)?)
        .with_context(|| format!("loading {}", engine.defs.display()))?;
    if let Some(w) = width {
        defs.primary_mut().config.available_width = w;
    }
    let store = match &engine.profiles {
        Some(dir) => ProfileStore::with_dir(dir),
        None => ProfileStore::in_memory(),
    };
    Ok(Session::new(defs, store, UserId::new(engine.user.clone()))?)
}

fn replay(args: ReplayArgs) -> Result<()> {
    let mut session = open_session(&args.engine, args.width)?;
    let trace = parse_trace(&read_input(&args.trace)?)
        .with_context(|| format!("reading {}", args.trace.display()))?;
    for event in &trace {
        session.apply(event)?;
    }
    let mut body = session.snapshot().to_canonical_json();
    body.push('\n');
    match &args.out {
        Some(path) => fs::write(path, body).map_err(|e| io_err(path, e))?,
        None => io::stdout().write_all(body.as_bytes()).map_err(|e| io_err(Path::new("<stdout>"), e))?,
    }
    if !args.no_save {
        session.into_profiles().save_all()?;
    }
    Ok(())
}

fn serve(args: ServeArgs) -> Result<()> {
    let mut session = open_session(&args.engine, None)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let stdio = Path::new("<stdio>");
    for (n, line) in io::stdin().lock().lines().enumerate() {
        let line = line.map_err(|e| io_err(stdio, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let before = session.profile().clone();
        let reply = TraceEvent::parse_line(&line, n + 1).and_then(|event| session.apply(&event));
        match reply {
            Ok(()) => writeln!(out, "{}", session.snapshot().to_canonical_json()),
            Err(e) => writeln!(out, "{}", json!({ "error": { "line": n + 1, "message": e.to_string() } })),
        }
        .and_then(|()| out.flush())
        .map_err(|e| io_err(stdio, e))?;
        if *session.profile() != before {
            save_profiles(&mut session)?;
        }
    }
    save_profiles(&mut session)
}

fn save_profiles(session: &mut Session) -> Result<()> {
    session.profiles_mut().save_all()?;
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use adaptabar::Error as E;
    match err.chain().find_map(|c| c.downcast_ref::<E>()) {
        Some(E::Io { .. }) => 3,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Replay(args) => replay(args),
        Command::Serve(args) => serve(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("adaptabar: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
