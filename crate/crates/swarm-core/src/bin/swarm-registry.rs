use clap::Parser;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use swarm_core::registry::{JournalStore, MemoryStore, RecordStore, RegistryService};

/// DID document registry over HTTP.
///
/// POST /dids takes a self-signed enrollment envelope; GET /dids/{did}
/// serves the document back in any supported serialization.
#[derive(Parser)]
#[command(name = "swarm-registry", version)]
struct Args {
    /// Address to listen on. Port 0 picks a free port; the bound address
    /// is printed on startup either way.
    #[arg(long, default_value = "127.0.0.1:8820", env = "SWARM_REGISTRY_LISTEN")]
    listen: SocketAddr,

    /// Append-only journal file backing the records. Without it the
    /// registry runs in memory and forgets everything on exit.
    #[arg(long, env = "SWARM_REGISTRY_STORE")]
    store: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();

    let store: Arc<dyn RecordStore> = match &args.store {
        Some(path) => match JournalStore::open(path) {
            Ok(journal) => Arc::new(journal),
            Err(e) => {
                eprintln!("swarm-registry: cannot open journal {path:?}: {e}");
                return ExitCode::FAILURE;
            }
        },
        None => Arc::new(MemoryStore::new()),
    };

    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("swarm-registry: cannot start runtime: {e}");
            return ExitCode::FAILURE;
        }
    };

    let result = runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(args.listen).await?;
        // Printed before serving so scripts binding port 0 can read the
        // real address from the first line of stdout.
        println!("listening on http://{}", listener.local_addr()?);
        swarm_core::registry::serve(listener, RegistryService::new(store)).await
    });

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("swarm-registry: {e}");
            ExitCode::FAILURE
        }
    }
}
