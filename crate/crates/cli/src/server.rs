//! Session-based HTTP play service with JSON bodies.

use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use indexmap::IndexMap;
use juniper_core::{GraphDocument, Position};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use crate::engine::{Engine, Hint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    First,
    Second,
}

impl Side {
    fn as_str(self) -> &'static str {
        match self {
            Side::First => "first",
            Side::Second => "second",
        }
    }

    fn parse(s: &str) -> Option<Side> {
        [Side::First, Side::Second].into_iter().find(|side| side.as_str() == s)
    }

    fn other(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ongoing,
    HumanWon,
    EngineWon,
}

pub struct GameSession {
    pub id: String,
    pub n: u32,
    pub human_side: Side,
    pub history: Vec<u32>,
    pub position: Position,
}

impl GameSession {
    fn side_to_move(&self) -> Side {
        if self.history.len().is_multiple_of(2) {
            Side::First
        } else {
            Side::Second
        }
    }

    fn human_to_move(&self) -> bool {
        self.side_to_move() == self.human_side
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameView {
    pub id: String,
    pub n: u32,
    pub human_side: Side,
    pub engine_side: Side,
    pub history: Vec<u32>,
    pub current: Option<u32>,
    pub legal_moves: Vec<u32>,
    /// `"human"`, `"engine"`, or absent once the game is over.
    pub to_move: Option<String>,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CreateGame {
    pub n: u32,
    pub human_side: Side,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PostMove {
    pub number: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoveReply {
    pub accepted: bool,
    pub engine_move: Option<u32>,
    #[serde(flatten)]
    pub game: GameView,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationSummary {
    pub n: u32,
    pub verdict: Option<String>,
    pub cell: String,
    pub method: Option<String>,
    pub verified: bool,
    pub evidence: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub legal_moves: Option<Vec<u32>>,
}

pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, error: impl Into<String>) -> Self {
        Self { status, body: ErrorBody { error: error.into(), legal_moves: None } }
    }

    fn conflict(error: impl Into<String>, legal_moves: Vec<u32>) -> Self {
        Self { status: StatusCode::CONFLICT, body: ErrorBody { error: error.into(), legal_moves: Some(legal_moves) } }
    }
}

impl From<juniper_core::Error> for ApiError {
    fn from(e: juniper_core::Error) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub struct AppState {
    engine: Arc<Engine>,
    sessions: Mutex<IndexMap<String, Arc<Mutex<GameSession>>>>,
    capacity: usize,
    history_dir: Option<PathBuf>,
}

impl AppState {
    pub fn new(engine: Arc<Engine>, capacity: usize, history_dir: Option<PathBuf>) -> Self {
        Self { engine, sessions: Mutex::default(), capacity: capacity.max(1), history_dir }
    }

    fn insert(&self, session: GameSession) -> Arc<Mutex<GameSession>> {
        let id = session.id.clone();
        let session = Arc::new(Mutex::new(session));
        let mut sessions = self.sessions.lock().unwrap();
        sessions.insert(id, session.clone());
        while sessions.len() > self.capacity {
            sessions.shift_remove_index(0);
        }
        session
    }

    /// Looks a session up, marking it most recently used, and falls back to
    /// the history log when it was evicted or the service restarted.
    fn get(&self, id: &str) -> ApiResult<Arc<Mutex<GameSession>>> {
        {
            let mut sessions = self.sessions.lock().unwrap();
            if let Some(i) = sessions.get_index_of(id) {
                let last = sessions.len() - 1;
                sessions.move_index(i, last);
                return Ok(sessions[last].clone());
            }
        }
        match self.restore(id) {
            Some(session) => Ok(self.insert(session)),
            None => Err(ApiError::new(StatusCode::NOT_FOUND, format!("unknown game {id}"))),
        }
    }

    fn log_path(&self, id: &str) -> Option<PathBuf> {
        let safe = !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-');
        self.history_dir.as_ref().filter(|_| safe).map(|d| d.join(format!("{id}.log")))
    }

    fn append(&self, id: &str, record: &str) {
        let Some(path) = self.log_path(id) else { return };
        let written = OpenOptions::new().create(true).append(true).open(&path).and_then(|mut f| writeln!(f, "{record}"));
        if let Err(e) = written {
            eprintln!("cannot append to {}: {e}", path.display());
        }
    }

    fn restore(&self, id: &str) -> Option<GameSession> {
        let text = fs::read_to_string(self.log_path(id)?).ok()?;
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next()?.split_whitespace().collect();
        let (n, human_side) = match header.as_slice() {
            ["game", n, side] => (n.parse().ok()?, Side::parse(side)?),
            _ => return None,
        };
        let history: Vec<u32> = lines.filter_map(|l| l.strip_prefix("move ")?.trim().parse().ok()).collect();
        let position = Position::from_moves(n, true, &history).ok()?;
        Some(GameSession { id: id.to_string(), n, human_side, history, position })
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/moves", post(post_move))
        .route("/games/{id}/hint", get(get_hint))
        .route("/games/{id}/graph", get(get_graph))
        .route("/classify/{n}", get(classify))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

fn view(engine: &Engine, s: &GameSession) -> ApiResult<GameView> {
    let legal_moves = engine.graph(s.n)?.legal_moves(&s.position);
    let (status, to_move) = match (legal_moves.is_empty(), s.human_to_move()) {
        (true, true) => (Status::EngineWon, None),
        (true, false) => (Status::HumanWon, None),
        (false, true) => (Status::Ongoing, Some("human".to_string())),
        (false, false) => (Status::Ongoing, Some("engine".to_string())),
    };
    Ok(GameView {
        id: s.id.clone(),
        n: s.n,
        human_side: s.human_side,
        engine_side: s.human_side.other(),
        history: s.history.clone(),
        current: s.position.current(),
        legal_moves,
        to_move,
        status,
    })
}

fn play(state: &AppState, s: &mut GameSession, m: u32) -> ApiResult<()> {
    s.position = s.position.apply_move(m)?;
    s.history.push(m);
    state.append(&s.id, &format!("move {m}"));
    Ok(())
}

/// Lets the engine move if it is its turn; returns the move played.
fn engine_turn(state: &AppState, s: &mut GameSession) -> ApiResult<Option<u32>> {
    if s.human_to_move() {
        return Ok(None);
    }
    let Some(m) = state.engine.choose(s.n, &s.history)? else { return Ok(None) };
    if !s.position.is_legal(m) {
        return Err(ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("engine chose illegal move {m}")));
    }
    play(state, s, m)?;
    Ok(Some(m))
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
}

async fn create_game(
    State(state): State<Arc<AppState>>,
    Json(req): Json<CreateGame>,
) -> ApiResult<(StatusCode, Json<MoveReply>)> {
    let max = state.engine.config().max_n;
    if req.n < 2 || req.n > max {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, format!("n must be in 2..={max}")));
    }
    blocking(move || {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let position = juniper_core::initial_position(req.n, true)?;
        let session =
            state.insert(GameSession { id: id.clone(), n: req.n, human_side: req.human_side, history: vec![], position });
        state.append(&id, &format!("game {} {}", req.n, req.human_side.as_str()));
        let mut s = session.lock().unwrap();
        let engine_move = engine_turn(&state, &mut s)?;
        let game = view(&state.engine, &s)?;
        Ok((StatusCode::CREATED, Json(MoveReply { accepted: true, engine_move, game })))
    })
    .await
}

async fn get_game(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<GameView>> {
    let session = state.get(&id)?;
    blocking(move || {
        let s = session.lock().unwrap();
        Ok(Json(view(&state.engine, &s)?))
    })
    .await
}

async fn post_move(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<PostMove>,
) -> ApiResult<Json<MoveReply>> {
    let session = state.get(&id)?;
    blocking(move || {
        let mut s = session.lock().unwrap();
        let current = view(&state.engine, &s)?;
        if current.status != Status::Ongoing {
            return Err(ApiError::conflict("the game is over", vec![]));
        }
        if !s.human_to_move() {
            return Err(ApiError::conflict("it is the engine's turn", vec![]));
        }
        if !current.legal_moves.contains(&req.number) {
            return Err(ApiError::conflict(format!("{} is not a legal move", req.number), current.legal_moves));
        }
        play(&state, &mut s, req.number)?;
        let engine_move = engine_turn(&state, &mut s)?;
        let game = view(&state.engine, &s)?;
        Ok(Json(MoveReply { accepted: true, engine_move, game }))
    })
    .await
}

async fn get_hint(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<Hint>> {
    let session = state.get(&id)?;
    blocking(move || {
        let s = session.lock().unwrap();
        Ok(Json(state.engine.hint(s.n, &s.history)?))
    })
    .await
}

async fn get_graph(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<GraphDocument>> {
    let session = state.get(&id)?;
    blocking(move || {
        let s = session.lock().unwrap();
        Ok(Json(state.engine.graph(s.n)?.export(&s.position)))
    })
    .await
}

async fn classify(State(state): State<Arc<AppState>>, Path(n): Path<u32>) -> ApiResult<Json<ClassificationSummary>> {
    let max = state.engine.config().max_n;
    if n < 1 || n > max {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, format!("n must be in 1..={max}")));
    }
    blocking(move || {
        let r = state.engine.classify(n)?;
        Ok(Json(ClassificationSummary {
            n,
            verdict: r.verdict.map(|v| v.to_string()),
            cell: r.table_cell(),
            method: r.method.map(|m| format!("{m:?}")),
            verified: r.verified,
            evidence: serde_json::to_value(&r.evidence).unwrap_or_default(),
        }))
    })
    .await
}
