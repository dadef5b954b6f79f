use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use swarm_core::agentstore::{AgentStore, StoreError};
use swarm_core::client::{ClientError, RegistryClient};
use swarm_core::codec::{self, WireFormat};
use swarm_core::did::SwarmDid;
use swarm_core::document::DidDocument;
use swarm_core::{bench, diotcomm, jose, AgentIdentity};

/// Agent-side command line: identity lifecycle, registry interaction,
/// secure messaging between stores, and the size benchmark.
#[derive(Parser)]
#[command(name = "swarm-agent", version)]
struct Cli {
    /// Agent state directory.
    #[arg(long, global = true, env = "SWARM_AGENT_STORE", default_value = ".swarm-agent")]
    store: PathBuf,

    /// Registry base URL, e.g. http://127.0.0.1:8820.
    #[arg(long, global = true, env = "SWARM_REGISTRY_URL")]
    registry: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Identity(IdentityCommand),
    /// Publish this agent's document to the registry.
    Register,
    /// Fetch a peer's document and cache it locally.
    Resolve {
        did: String,
        /// Output serialization: json, cbor, or cbor-di.
        #[arg(long, default_value = "cbor-di", value_parser = parse_format)]
        format: WireFormat,
        /// Answer from the peer cache only; never touch the network.
        #[arg(long)]
        offline: bool,
        /// Write the document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Wrap a payload file in an envelope addressed to a peer.
    Msg {
        #[arg(long)]
        to: String,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Unwrap an envelope, authenticate the sender, recover the payload.
    Open {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure document and envelope sizes; write them as CSV.
    Bench {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum IdentityCommand {
    /// Generate a fresh identity in the store directory.
    New {
        /// Service endpoint URL published in the document.
        #[arg(long)]
        endpoint: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sign,
    Encrypt,
    SignEncrypt,
    BaselineSign,
    BaselineEncrypt,
    BaselineSignEncrypt,
}

fn parse_format(s: &str) -> Result<WireFormat, codec::UnknownFormat> {
    s.parse()
}

/// Exit codes: 0 ok, 1 usage or local failure, 2 crypto rejection,
/// 3 network trouble, 4 nothing by that name.
struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        fail(1, e.to_string())
    }
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Failure {
        fail(1, e.to_string())
    }
}

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Failure {
        let code = match &e {
            ClientError::Network(_) => 3,
            ClientError::NotFound(_) => 4,
            ClientError::Refused { status: 401, .. } => 2,
            _ => 1,
        };
        fail(code, e.to_string())
    }
}

impl From<diotcomm::EnvelopeError> for Failure {
    fn from(e: diotcomm::EnvelopeError) -> Failure {
        fail(2, e.to_string())
    }
}

impl From<jose::BaselineError> for Failure {
    fn from(e: jose::BaselineError) -> Failure {
        fail(2, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help and --version land here.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("swarm-agent: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let store = AgentStore::at(&cli.store);
    match cli.command {
        Command::Identity(IdentityCommand::New { endpoint }) => {
            if store.is_initialized() {
                return Err(fail(
                    1,
                    format!("{:?} already holds an identity", store.root()),
                ));
            }
            let identity = AgentIdentity::generate(&endpoint, &mut rand::rng())
                .map_err(|e| fail(1, e.to_string()))?;
            store.save_identity(&identity)?;
            println!("{}", identity.did());
            Ok(())
        }
        Command::Register => {
            let identity = store.load_identity()?;
            let doc_bytes = codec::encode(identity.document(), WireFormat::CborDi);
            let envelope = diotcomm::sign(&identity, &doc_bytes);
            let did = registry(&cli.registry)?.register(&envelope)?;
            println!("registered {did}");
            Ok(())
        }
        Command::Resolve { did, format, offline, out } => {
            let did = parse_did(&did)?;
            let doc = if offline {
                store
                    .cached_peer(&did)?
                    .ok_or_else(|| fail(4, format!("{did} is not in the peer cache")))?
            } else {
                fetch_and_cache(&store, &registry(&cli.registry)?, &did)?
            };
            write_output(out.as_deref(), &codec::encode(&doc, format))?;
            Ok(())
        }
        Command::Msg { to, mode, input, out } => {
            let identity = store.load_identity()?;
            let payload = std::fs::read(&input)?;
            let envelope = match mode {
                Mode::Sign => diotcomm::sign(&identity, &payload),
                Mode::BaselineSign => jose::sign(&identity, &payload),
                Mode::Encrypt | Mode::SignEncrypt | Mode::BaselineEncrypt
                | Mode::BaselineSignEncrypt => {
                    let peer = peer_document(&store, &cli.registry, &parse_did(&to)?)?;
                    let rng = &mut rand::rng();
                    match mode {
                        Mode::Encrypt => diotcomm::encrypt(&identity, &peer, &payload, rng)?,
                        Mode::SignEncrypt => {
                            diotcomm::sign_encrypt(&identity, &peer, &payload, rng)?
                        }
                        Mode::BaselineEncrypt => jose::encrypt(&identity, &peer, &payload, rng)?,
                        _ => jose::sign_encrypt(&identity, &peer, &payload, rng)?,
                    }
                }
            };
            std::fs::write(&out, envelope)?;
            Ok(())
        }
        Command::Open { input, out } => {
            let identity = store.load_identity()?;
            let envelope = std::fs::read(&input)?;
            let baseline = envelope.first() == Some(&b'{');
            let sender = if baseline {
                jose::peek_sender(&envelope)?
            } else {
                diotcomm::peek_sender(&envelope)?
            };
            let sender_doc = if sender == *identity.did() {
                identity.document().clone()
            } else {
                peer_document(&store, &cli.registry, &sender)?
            };
            let resolver: std::collections::HashMap<SwarmDid, DidDocument> =
                [(sender, sender_doc)].into();
            let opened = if baseline {
                jose::open(&identity, &resolver, &envelope)?
            } else {
                diotcomm::open(&identity, &resolver, &envelope)?
            };
            std::fs::write(&out, &opened.payload)?;
            println!("{}", opened.sender);
            Ok(())
        }
        Command::Bench { out, seed } => {
            let rows = bench::run(seed);
            let file = std::fs::File::create(&out)?;
            bench::write_csv(&rows, file).map_err(|e| fail(1, e.to_string()))?;
            print!("{}", bench::render_table(&rows));
            Ok(())
        }
    }
}

fn parse_did(text: &str) -> Result<SwarmDid, Failure> {
    text.parse::<SwarmDid>().map_err(|e| fail(1, e.to_string()))
}

fn registry(base: &Option<String>) -> Result<RegistryClient, Failure> {
    let base = base
        .as_deref()
        .ok_or_else(|| fail(1, "no registry configured; pass --registry or set SWARM_REGISTRY_URL"))?;
    Ok(RegistryClient::new(base)?)
}

fn fetch_and_cache(
    store: &AgentStore,
    client: &RegistryClient,
    did: &SwarmDid,
) -> Result<DidDocument, Failure> {
    let doc = client.resolve_document(did)?;
    store.cache_peer(&doc)?;
    Ok(doc)
}

/// Peer lookup order: cache, then registry (caching the answer). With no
/// registry configured a cache miss is a plain not-found.
fn peer_document(
    store: &AgentStore,
    registry_url: &Option<String>,
    did: &SwarmDid,
) -> Result<DidDocument, Failure> {
    if let Some(doc) = store.cached_peer(did)? {
        return Ok(doc);
    }
    match registry_url {
        Some(_) => fetch_and_cache(store, &registry(registry_url)?, did),
        None => Err(fail(
            4,
            format!("{did} is not in the peer cache and no registry is configured"),
        )),
    }
}

fn write_output(path: Option<&std::path::Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}
