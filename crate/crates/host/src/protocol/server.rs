//! HTTP + WebSocket front: `/ws` speaks the protocol, everything else is
//! served from the static directory.

use std::io;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::{Html, IntoResponse};
use axum::routing::get;
use axum::Router;
use crossbeam_channel::Sender;
use futures_util::{SinkExt, StreamExt};
use tokio::net::TcpListener;
use tokio::task::JoinHandle;
use tower_http::services::ServeDir;

use super::hub::{Hub, Outgoing};
use super::message::{error_json, ClientMessage};
use crate::engine::runner::{Control, EngineHandle};
use crate::engine::Engine;

pub const DEFAULT_PORT: u16 = 8008;

const INDEX: &str = "<!doctype html>\n<title>workbench</title>\n\
<p>Simulation workbench. Connect a client to <code>/ws</code>, or start the host with \
<code>--static DIR</code> to serve a UI bundle.</p>\n";

#[derive(Debug, thiserror::Error)]
pub enum ServerError {
    #[error("cannot listen on port {port}: address already in use")]
    PortInUse { port: u16 },
    #[error("cannot listen on {addr}: {source}")]
    Bind { addr: SocketAddr, source: io::Error },
    #[error("server failed: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub addr: IpAddr,
    /// 0 picks a free port.
    pub port: u16,
    pub static_dir: Option<PathBuf>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            addr: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: DEFAULT_PORT,
            static_dir: None,
        }
    }
}

#[derive(Clone)]
struct AppState {
    hub: Arc<Hub>,
    tx: Sender<Control>,
}

pub async fn bind(addr: IpAddr, port: u16) -> Result<TcpListener, ServerError> {
    let sock = SocketAddr::new(addr, port);
    TcpListener::bind(sock).await.map_err(|e| match e.kind() {
        io::ErrorKind::AddrInUse => ServerError::PortInUse { port },
        _ => ServerError::Bind { addr: sock, source: e },
    })
}

pub fn router(hub: Arc<Hub>, tx: Sender<Control>, static_dir: Option<PathBuf>) -> Router {
    let routes = Router::new().route("/ws", get(ws_handler));
    let routes = match static_dir {
        Some(dir) => routes.fallback_service(ServeDir::new(dir)),
        None => routes.route("/", get(|| async { Html(INDEX) })),
    };
    routes.with_state(AppState { hub, tx })
}

async fn ws_handler(ws: WebSocketUpgrade, State(app): State<AppState>) -> impl IntoResponse {
    ws.on_upgrade(move |socket| client_session(socket, app))
}

async fn client_session(socket: WebSocket, app: AppState) {
    let (mut sink, mut stream) = socket.split();
    let q = app.hub.subscribe();
    let out = q.clone();
    let mut writer = tokio::spawn(async move {
        while let Some(batch) = out.next_batch().await {
            for o in batch {
                let msg = match o {
                    Outgoing::Text(t) => Message::Text(t.to_string()),
                    Outgoing::Binary(b) => Message::Binary(b.to_vec()),
                };
                if sink.send(msg).await.is_err() {
                    return;
                }
            }
        }
        let _ = sink.send(Message::Close(None)).await;
    });
    loop {
        tokio::select! {
            msg = stream.next() => match msg {
                Some(Ok(Message::Text(text))) => {
                    match ClientMessage::parse(&text).and_then(ClientMessage::into_control) {
                        Ok(ctrl) => {
                            if app.tx.send(ctrl).is_err() {
                                break;
                            }
                        }
                        Err(rejected) => q.push_text(rejected.to_json().into()),
                    }
                }
                Some(Ok(Message::Binary(_))) => {
                    q.push_text(error_json("bad_message", "binary client messages are not accepted").into());
                }
                Some(Ok(Message::Ping(_) | Message::Pong(_))) => {}
                Some(Ok(Message::Close(_))) | Some(Err(_)) | None => break,
            },
            _ = &mut writer => break,
        }
    }
    app.hub.unsubscribe(&q);
    q.close();
    if tokio::time::timeout(std::time::Duration::from_secs(2), &mut writer).await.is_err() {
        writer.abort();
    }
}

/// A server whose engine loop and HTTP task are running.
pub struct RunningServer {
    pub local_addr: SocketAddr,
    pub hub: Arc<Hub>,
    engine: EngineHandle,
    task: JoinHandle<io::Result<()>>,
}

impl RunningServer {
    /// Binds, starts the engine loop and serves until the engine quits.
    pub async fn start(engine: Engine, config: ServerConfig) -> Result<Self, ServerError> {
        let listener = bind(config.addr, config.port).await?;
        let local_addr = listener.local_addr()?;
        let hub = Hub::new();
        let publisher = hub.clone();
        let engine = EngineHandle::spawn(engine, move |ev| publisher.publish(ev));
        let app = router(hub.clone(), engine.sender(), config.static_dir);
        let closed = hub.clone();
        let task = tokio::spawn(async move {
            axum::serve(listener, app)
                .with_graceful_shutdown(async move { closed.wait_closed().await })
                .await
        });
        Ok(Self {
            local_addr,
            hub,
            engine,
            task,
        })
    }

    pub fn sender(&self) -> Sender<Control> {
        self.engine.sender()
    }

    /// Waits until a client sent `quit` (or [`quit`](Self::quit) was
    /// called) and hands back the engine.
    pub async fn wait(self) -> Result<Engine, ServerError> {
        let RunningServer { hub, engine, task, .. } = self;
        hub.wait_closed().await;
        match tokio::time::timeout(std::time::Duration::from_secs(5), task).await {
            Ok(joined) => joined.map_err(io::Error::other)??,
            Err(_) => {}
        }
        Ok(tokio::task::spawn_blocking(move || engine.shutdown())
            .await
            .map_err(io::Error::other)?)
    }

    pub async fn quit(self) -> Result<Engine, ServerError> {
        self.engine.send(Control::Command(crate::engine::Command::Quit));
        self.wait().await
    }
}
