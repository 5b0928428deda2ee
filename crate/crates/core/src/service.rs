//! JSON HTTP API for interactive play.
//!
//! | method | path | body | response |
//! |---|---|---|---|
//! | POST | `/session` | `{n, m, k, mode?, seed?}` | `{id}` |
//! | POST | `/session/{id}/ask` | `{god, formula}` | `{word, question_number}` |
//! | GET | `/session/{id}/knowledge` | | `{possible, safe_gods, questions}` |
//! | POST | `/session/{id}/hint` | | `{god, formula, balance, source}` |
//! | POST | `/session/{id}/declare` | `{assignment}` | `{correct, true_assignment, chi_meaning, transcript}` |
//! | GET | `/catalog/strategies` | | `{strategies}` |
//!
//! Gods are 1-based on the wire. Asks are put through the self-template on
//! the server; the returned word is the god's raw word (`"chi"` or
//! `"other"`), so the player never learns what `χ` means before declaring.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Error;
use crate::formula::Formula;
use crate::knowledge::KnowledgeState;
use crate::model::{Assignment, PuzzleSpec};
use crate::simulator::{self, AskNode, RandomMode, SeededCoins, Transcript, TranscriptEntry, Word, WordSemantics};
use crate::strategy::{self, StrategyTree};
use crate::synthesis::{self, SearchConfig};

/// Environment variable holding the default port for `serve`.
pub const PORT_ENV: &str = "GODPUZZLE_PORT";
pub const DEFAULT_PORT: u16 = 8717;

/// Largest enumeration for which hints come from an optimal search witness.
const WITNESS_LIMIT: u128 = 12;

/// Salt separating the coin stream from the world draw.
const COIN_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    column: Option<usize>,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
            column: None,
        }
    }

    fn not_found(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, format!("no session {id:?}"))
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let column = match &e {
            Error::Syntax { column, .. } => Some(*column),
            _ => None,
        };
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: e.to_string(),
            column,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error": self.message });
        if let Some(c) = self.column {
            body["column"] = json!(c);
        }
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Active,
    Declared,
}

struct Session {
    spec: PuzzleSpec,
    mode: RandomMode,
    world: Assignment,
    ws: WordSemantics,
    coins: SeededCoins,
    knowledge: KnowledgeState,
    asks: Vec<(usize, Formula, bool)>,
    transcript: Transcript,
    status: Status,
}

#[derive(Default)]
struct Inner {
    next_id: u64,
    sessions: HashMap<String, Arc<Mutex<Session>>>,
    witnesses: HashMap<PuzzleSpec, Option<Arc<StrategyTree>>>,
}

/// Shared service state. Sessions are independent; each is locked on its own.
#[derive(Clone, Default)]
pub struct AppState {
    inner: Arc<Mutex<Inner>>,
}

impl AppState {
    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.inner
            .lock()
            .expect("state lock")
            .sessions
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(id))
    }

    fn witness(&self, spec: PuzzleSpec) -> Option<Arc<StrategyTree>> {
        if spec.possibility_count() > WITNESS_LIMIT {
            return None;
        }
        if let Some(w) = self.inner.lock().expect("state lock").witnesses.get(&spec) {
            return w.clone();
        }
        let w = synthesis::min_worst_case(spec, SearchConfig::default())
            .ok()
            .and_then(|r| r.witness)
            .map(Arc::new);
        self.inner
            .lock()
            .expect("state lock")
            .witnesses
            .insert(spec, w.clone());
        w
    }
}

#[derive(Debug, Deserialize)]
pub struct NewSession {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(default)]
    pub mode: RandomMode,
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct Created {
    pub id: String,
}

#[derive(Debug, Deserialize)]
pub struct AskRequest {
    pub god: usize,
    pub formula: String,
}

#[derive(Debug, Serialize)]
pub struct AskResponse {
    pub word: Word,
    pub question_number: usize,
}

#[derive(Debug, Serialize)]
pub struct KnowledgeResponse {
    pub possible: Vec<String>,
    pub safe_gods: Vec<usize>,
    pub questions: usize,
    pub status: Status,
}

#[derive(Debug, Serialize)]
pub struct HintResponse {
    pub god: usize,
    pub formula: String,
    pub balance: [usize; 2],
    pub source: &'static str,
}

#[derive(Debug, Deserialize)]
pub struct DeclareRequest {
    pub assignment: String,
}

#[derive(Debug, Serialize)]
pub struct DeclareResponse {
    pub correct: bool,
    pub true_assignment: String,
    pub chi_meaning: &'static str,
    pub transcript: String,
}

#[derive(Debug, Serialize)]
pub struct StrategyInfo {
    pub name: &'static str,
    pub spec: [usize; 3],
    pub mode: RandomMode,
    pub summary: &'static str,
}

pub fn router() -> Router {
    router_with_state(AppState::default())
}

pub fn router_with_state(state: AppState) -> Router {
    Router::new()
        .route("/session", post(create_session))
        .route("/session/{id}/ask", post(ask))
        .route("/session/{id}/knowledge", get(knowledge))
        .route("/session/{id}/hint", post(hint))
        .route("/session/{id}/declare", post(declare))
        .route("/catalog/strategies", get(catalog))
        .with_state(state)
}

/// Serves the API until the process is stopped.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router()).await
}

async fn create_session(State(state): State<AppState>, Json(req): Json<NewSession>) -> ApiResult<Created> {
    let spec = PuzzleSpec::new(req.n, req.m, req.k)?;
    if spec.possibility_count() > 1 << 20 {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, format!("{spec} is too large to play")));
    }
    let seed = req.seed.unwrap_or_else(rand::random);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let knowledge = KnowledgeState::new(spec);
    let world = knowledge.enumeration().assignments()[rng.random_range(0..knowledge.enumeration().len())].clone();
    let ws = WordSemantics {
        chi_means_yes: rng.random(),
    };
    let mut transcript = Transcript::new(spec);
    transcript.seed = Some(seed);
    transcript.world = Some((world.clone(), ws));
    let session = Session {
        spec,
        mode: req.mode,
        world,
        ws,
        coins: SeededCoins::new(seed ^ COIN_SALT),
        knowledge,
        asks: Vec::new(),
        transcript,
        status: Status::Active,
    };
    let mut inner = state.inner.lock().expect("state lock");
    inner.next_id += 1;
    let id = format!("s{}", inner.next_id);
    inner.sessions.insert(id.clone(), Arc::new(Mutex::new(session)));
    Ok(Json(Created { id }))
}

fn conflict() -> ApiError {
    ApiError::new(StatusCode::CONFLICT, "session already declared")
}

async fn ask(State(state): State<AppState>, Path(id): Path<String>, Json(req): Json<AskRequest>) -> ApiResult<AskResponse> {
    let session = state.session(&id)?;
    let mut s = session.lock().expect("session lock");
    if s.status != Status::Active {
        return Err(conflict());
    }
    let gods = s.spec.gods();
    if req.god == 0 || req.god > gods {
        return Err(Error::GodOutOfRange { god: req.god, gods }.into());
    }
    let god = req.god - 1;
    let formula = Formula::parse(&req.formula)?;
    formula.check_gods(s.spec)?;
    let node = AskNode::templated(god, formula.clone());
    let Session {
        world, ws, coins, mode, ..
    } = &mut *s;
    let word = simulator::god_answer(world, *ws, god, &node, coins, *mode)?;
    let bit = simulator::decode_template(word);
    s.knowledge = s.knowledge.update_formula(god, &formula, bit)?;
    s.asks.push((god, formula, bit));
    s.transcript.entries.push(TranscriptEntry { god, ask: node, word });
    Ok(Json(AskResponse {
        word,
        question_number: s.asks.len(),
    }))
}

async fn knowledge(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<KnowledgeResponse> {
    let session = state.session(&id)?;
    let s = session.lock().expect("session lock");
    Ok(Json(KnowledgeResponse {
        possible: s.knowledge.render(),
        safe_gods: s.knowledge.safe_gods().iter().map(|g| g + 1).collect(),
        questions: s.asks.len(),
        status: s.status,
    }))
}

/// Follows the witness along the session's asks; `None` once play leaves it.
fn witness_node<'a>(tree: &'a StrategyTree, asks: &[(usize, Formula, bool)]) -> Option<(usize, &'a Formula)> {
    let mut node = tree;
    for (god, formula, bit) in asks {
        match node {
            StrategyTree::Node { god: g, question, yes, no } if g == god && question == formula => {
                node = if *bit { yes } else { no };
            }
            _ => return None,
        }
    }
    match node {
        StrategyTree::Node { god, question, .. } => Some((*god, question)),
        StrategyTree::Leaf(_) => None,
    }
}

/// The move minimizing the larger child, then the total, then god index and
/// subset size.
pub fn balance_hint(state: &KnowledgeState) -> Option<(usize, Formula)> {
    let e = state.enumeration();
    let mut best: Option<((usize, usize), usize, Vec<usize>)> = None;
    for god in 0..state.spec().gods() {
        let random = e.random_at(god).ok()?.intersection(state.possible());
        let nonrandom: Vec<usize> = state.possible().difference(&random).iter().collect();
        let k = nonrandom.len();
        if k < 2 {
            continue;
        }
        let r = random.len();
        // Only the size of Q matters for balance; take the first |Q| members.
        for size in 1..k {
            let key = ((size + r).max(k - size + r), k + 2 * r);
            if best.as_ref().is_none_or(|(b, _, _)| key < *b) {
                best = Some((key, god, nonrandom[..size].to_vec()));
            }
        }
    }
    best.map(|(_, god, members)| {
        let assignments = members.iter().map(|&i| &e.assignments()[i]);
        (god, Formula::dnf_of(assignments))
    })
}

async fn hint(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<HintResponse> {
    let session = state.session(&id)?;
    let (spec, knowledge, asks) = {
        let s = session.lock().expect("session lock");
        if s.status != Status::Active {
            return Err(conflict());
        }
        (s.spec, s.knowledge.clone(), s.asks.clone())
    };
    let from_witness = state
        .witness(spec)
        .and_then(|w| witness_node(&w, &asks).map(|(g, f)| (g, f.clone())));
    let (source, (god, formula)) = match from_witness {
        Some(m) => ("synthesis", m),
        None => (
            "balance",
            balance_hint(&knowledge)
                .ok_or_else(|| ApiError::new(StatusCode::CONFLICT, "no question can narrow the possibilities further"))?,
        ),
    };
    let (yes, no) = knowledge.children(god, &crate::question::Question::new(formula.clone(), knowledge.enumeration())?)?;
    Ok(Json(HintResponse {
        god: god + 1,
        formula: formula.to_string(),
        balance: [yes.len(), no.len()],
        source,
    }))
}

async fn declare(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<DeclareRequest>,
) -> ApiResult<DeclareResponse> {
    let session = state.session(&id)?;
    let mut s = session.lock().expect("session lock");
    if s.status != Status::Active {
        return Err(conflict());
    }
    let declared: Assignment = req.assignment.parse()?;
    s.spec.check(&declared)?;
    s.status = Status::Declared;
    s.transcript.declared = Some(declared.clone());
    Ok(Json(DeclareResponse {
        correct: declared == s.world,
        true_assignment: s.world.to_string(),
        chi_meaning: if s.ws.chi_means_yes { "yes" } else { "no" },
        transcript: s.transcript.to_string(),
    }))
}

async fn catalog() -> Json<serde_json::Value> {
    let strategies: Vec<StrategyInfo> = strategy::builtins()
        .into_iter()
        .map(|b| StrategyInfo {
            name: b.name,
            spec: [b.spec.gods(), b.spec.random(), b.spec.truthful()],
            mode: b.mode,
            summary: b.summary,
        })
        .collect();
    Json(json!({ "strategies": strategies }))
}
