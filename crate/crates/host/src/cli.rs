//! Command-line entry point.
//!
//! ```text
//! workbench list-demos
//! workbench parse <file> [--db PATH] [--overwrite]
//! workbench contexts <db>
//! workbench copy-context <db> <src> <dst>
//! workbench <demo> [dbfile] [--port N] [--headless --steps K] [--seed S] [--static DIR] [--export DIR]
//! ```

use std::ffi::OsString;
use std::io::Write;
use std::net::IpAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use workbench_core::directive::{merge_into_collection, parse_source, DirectiveRecord, MergeOptions};
use workbench_core::model::DEFAULT_CONTEXT;

use crate::demos::{self, DEMOS};
use crate::engine::{Command, Engine};
use crate::export::save_png;
use crate::protocol::{RunningServer, ServerConfig, DEFAULT_PORT};
use crate::store::{default_db_path, Store};

/// Exit code for usage errors such as an unknown demo.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "workbench", version, about = "Interactive simulation workbench")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Print the registered demos.
    ListDemos,
    /// Scan a source file for directives and merge them into a store.
    Parse {
        file: PathBuf,
        /// Store file; defaults to the source path with a `.db` extension.
        #[arg(long)]
        db: Option<PathBuf>,
        /// Reset stored values to the declared initial values.
        #[arg(long)]
        overwrite: bool,
    },
    /// List the contexts saved in a store.
    Contexts { db: PathBuf },
    /// Copy a saved context under a new name.
    CopyContext { db: PathBuf, src: String, dst: String },
    /// Run a demo: `<demo> [dbfile] [options]`.
    #[command(external_subcommand)]
    Demo(Vec<OsString>),
}

#[derive(Debug, Parser)]
#[command(name = "workbench <demo>", no_binary_name = true)]
struct DemoArgs {
    demo: String,
    /// Store file; defaults to `<demo>.db`.
    dbfile: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_PORT)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    addr: IpAddr,
    /// Run parse, init and `--steps` steps without a server, then print the
    /// text outputs.
    #[arg(long)]
    headless: bool,
    #[arg(long, default_value_t = 0, requires = "headless")]
    steps: u64,
    /// Seed for the demo's random number generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory with the UI bundle to serve.
    #[arg(long = "static")]
    static_dir: Option<PathBuf>,
    /// Write the final image outputs of a headless run as PNG files.
    #[arg(long, requires = "headless")]
    export: Option<PathBuf>,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => return clap_exit(e, out, err),
    };
    let result = match cli.command {
        Cmd::ListDemos => {
            for (name, summary) in DEMOS {
                let _ = writeln!(out, "{name:<12} {summary}");
            }
            Ok(())
        }
        Cmd::Parse { file, db, overwrite } => parse_file(&file, db.as_deref(), overwrite, out),
        Cmd::Contexts { db } => list_contexts(&db, out),
        Cmd::CopyContext { db, src, dst } => copy_context(&db, &src, &dst, out),
        Cmd::Demo(args) => {
            let args = match DemoArgs::try_parse_from(args) {
                Ok(a) => a,
                Err(e) => return clap_exit(e, out, err),
            };
            if demos::create(&args.demo, args.seed).is_none() {
                let names: Vec<&str> = DEMOS.iter().map(|(n, _)| *n).collect();
                let _ = writeln!(err, "unknown demo `{}`; available: {}", args.demo, names.join(", "));
                return EXIT_USAGE;
            }
            if args.headless {
                headless(&args, out)
            } else {
                serve(&args, out)
            }
        }
    };
    match result {
        Ok(()) => 0,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn clap_exit(e: clap::Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = e.render().to_string();
    if e.use_stderr() {
        let _ = write!(err, "{text}");
        EXIT_USAGE
    } else {
        let _ = write!(out, "{text}");
        0
    }
}

fn parse_file(file: &Path, db: Option<&Path>, overwrite: bool, out: &mut dyn Write) -> Result<(), String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let records = parse_source(&text).map_err(|e| format!("{}: {e}", file.display()))?;
    let declared = records.iter().find_map(|r| match r {
        DirectiveRecord::Context(name) => Some(name.clone()),
        _ => None,
    });
    let db_path = default_db_path(file, db);
    let mut store = Store::open(&db_path).map_err(|e| e.to_string())?;
    let base_name = match &declared {
        Some(name) if store.has_context(name).map_err(|e| e.to_string())? => name.as_str(),
        _ => DEFAULT_CONTEXT,
    };
    let base = store.load_collection(base_name).map_err(|e| e.to_string())?;
    let opts = MergeOptions {
        preserve_state: !overwrite,
    };
    let (coll, report) = merge_into_collection(&records, &base, opts).map_err(|e| e.to_string())?;
    store.save_collection(&coll).map_err(|e| e.to_string())?;
    let _ = writeln!(
        out,
        "{}: context `{}`: {} created, {} updated, {} unchanged",
        db_path.display(),
        coll.context.name,
        report.created,
        report.updated,
        report.unchanged
    );
    Ok(())
}

fn list_contexts(db: &Path, out: &mut dyn Write) -> Result<(), String> {
    if !db.exists() {
        return Err(format!("no store at {}", db.display()));
    }
    let store = Store::open(db).map_err(|e| e.to_string())?;
    for name in store.list_contexts().map_err(|e| e.to_string())? {
        let _ = writeln!(out, "{name}");
    }
    Ok(())
}

fn copy_context(db: &Path, src: &str, dst: &str, out: &mut dyn Write) -> Result<(), String> {
    if !db.exists() {
        return Err(format!("no store at {}", db.display()));
    }
    let mut store = Store::open(db).map_err(|e| e.to_string())?;
    store.copy_context(src, dst).map_err(|e| e.to_string())?;
    let _ = writeln!(out, "copied `{src}` to `{dst}`");
    Ok(())
}

fn db_path(args: &DemoArgs) -> PathBuf {
    default_db_path(Path::new(&args.demo), args.dbfile.as_deref())
}

fn headless(args: &DemoArgs, out: &mut dyn Write) -> Result<(), String> {
    let sim = demos::create(&args.demo, args.seed).expect("checked by caller");
    // A headless run only reads an existing store; it never creates one.
    let path = db_path(args);
    let store = if path.exists() {
        Some(Store::open(&path).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let mut engine = Engine::new(sim, store).map_err(|e| e.to_string())?;
    engine.control(Command::Parse).map_err(|e| e.to_string())?;
    engine.control(Command::Init).map_err(|e| e.to_string())?;
    for _ in 0..args.steps {
        engine.control(Command::Step).map_err(|e| e.to_string())?;
    }
    let _ = writeln!(out, "step={}", engine.step_count());
    for (name, text) in engine.texts() {
        let _ = writeln!(out, "[{name}]\n{text}");
    }
    if let Some(dir) = &args.export {
        export_images(&engine, dir, out)?;
    }
    Ok(())
}

fn export_images(engine: &Engine, dir: &Path, out: &mut dyn Write) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let frame = engine.snapshot();
    let layout = engine.layout();
    for (id, img) in &frame.images {
        let name = layout
            .widgets
            .iter()
            .find(|w| w.id == *id)
            .map_or_else(|| format!("widget{id}"), |w| w.entry.name().to_string());
        let file = dir.join(format!("{}.png", sanitize(&name)));
        save_png(&file, img).map_err(|e| e.to_string())?;
        let _ = writeln!(out, "wrote {}", file.display());
    }
    Ok(())
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn serve(args: &DemoArgs, out: &mut dyn Write) -> Result<(), String> {
    let sim = demos::create(&args.demo, args.seed).expect("checked by caller");
    let store = Store::open(db_path(args)).map_err(|e| e.to_string())?;
    let engine = Engine::new(sim, Some(store)).map_err(|e| e.to_string())?;
    let config = ServerConfig {
        addr: args.addr,
        port: args.port,
        static_dir: args.static_dir.clone(),
    };
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    rt.block_on(async {
        let server = RunningServer::start(engine, config).await.map_err(|e| e.to_string())?;
        let _ = writeln!(out, "listening on http://{}", server.local_addr);
        let _ = out.flush();
        server.wait().await.map_err(|e| e.to_string())?;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("workbench").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn list_demos_names_every_demo() {
        let (code, out, _) = run_capture(&["list-demos"]);
        assert_eq!(code, 0);
        for (name, _) in DEMOS {
            assert!(out.contains(name));
        }
    }

    #[test]
    fn unknown_demo_exits_with_usage_code() {
        let (code, _, err) = run_capture(&["warp_drive", "--headless"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("unknown demo `warp_drive`"));
    }

    #[test]
    fn steps_require_headless() {
        let (code, _, _) = run_capture(&["decay", "--steps", "3"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn sanitize_names() {
        assert_eq!(sanitize("Delay [msec]"), "Delay__msec_");
    }
}
