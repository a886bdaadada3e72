use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use juniper_cli::engine::{Engine, EngineConfig};
use juniper_cli::server::{router, AppState};
use serde_json::{json, Value};
use tower::ServiceExt;

fn engine() -> Arc<Engine> {
    Arc::new(Engine::new(EngineConfig { max_n: 200, ..EngineConfig::default() }).unwrap())
}

fn app_with(engine: Arc<Engine>, capacity: usize, dir: Option<&std::path::Path>) -> Router {
    router(Arc::new(AppState::new(engine, capacity, dir.map(|d| d.to_path_buf()))))
}

fn app() -> Router {
    app_with(engine(), 1024, None)
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = req.body(body.map_or(Body::empty(), |b| Body::from(b.to_string()))).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn create(app: &Router, n: u32, side: &str) -> Value {
    let (status, body) = call(app, "POST", "/games", Some(json!({"n": n, "human_side": side}))).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    body
}

#[tokio::test]
async fn engine_opens_twelve_with_six() {
    let app = app();
    let game = create(&app, 12, "second").await;
    assert_eq!(game["engine_move"], 6);
    assert_eq!(game["history"], json!([6]));
    assert_eq!(game["to_move"], "human");
    assert_eq!(game["legal_moves"], json!([1, 2, 3, 12]));
}

#[tokio::test]
async fn illegal_moves_are_rejected_with_the_legal_list() {
    let app = app();
    let game = create(&app, 40, "first").await;
    assert_eq!(game["engine_move"], Value::Null);
    let id = game["id"].as_str().unwrap();
    let (status, body) = call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"number": 21}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let legal = body["legal_moves"].as_array().unwrap();
    assert_eq!(legal.len(), 20);
    assert!(legal.iter().all(|m| m.as_u64().unwrap() % 2 == 0));

    let (status, body) = call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"number": 22}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["accepted"], true);
    let reply = body["engine_move"].as_u64().unwrap();
    assert!([1, 2, 11].contains(&reply));
}

#[tokio::test]
async fn a_finished_game_takes_no_moves() {
    let app = app();
    let id = create(&app, 2, "first").await["id"].as_str().unwrap().to_string();
    let (_, body) = call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"number": 2}))).await;
    assert_eq!(body["engine_move"], 1);
    assert_eq!(body["status"], "engine_won");
    let (status, body) = call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"number": 1}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["legal_moves"], json!([]));
}

#[tokio::test]
async fn unknown_sessions_and_oversized_games() {
    let app = app();
    assert_eq!(call(&app, "GET", "/games/nope", None).await.0, StatusCode::NOT_FOUND);
    assert_eq!(call(&app, "GET", "/games/nope/hint", None).await.0, StatusCode::NOT_FOUND);
    assert_eq!(call(&app, "POST", "/games/nope/moves", Some(json!({"number": 2}))).await.0, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "POST", "/games", Some(json!({"n": 201, "human_side": "first"}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(call(&app, "GET", "/classify/201", None).await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn hints_and_graphs() {
    let app = app();
    let id = create(&app, 9, "first").await["id"].as_str().unwrap().to_string();
    let (_, hint) = call(&app, "GET", &format!("/games/{id}/hint"), None).await;
    assert_eq!(hint["won"], false);
    assert_eq!(hint["exact"], true);
    let (status, graph) = call(&app, "GET", &format!("/games/{id}/graph"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(graph["n"], 9);
    let legal: Vec<u64> =
        graph["nodes"].as_array().unwrap().iter().filter(|n| n["legal"] == true).map(|n| n["number"].as_u64().unwrap()).collect();
    assert_eq!(legal, [2, 4, 6, 8]);

    let id = create(&app, 12, "first").await["id"].as_str().unwrap().to_string();
    let (_, hint) = call(&app, "GET", &format!("/games/{id}/hint"), None).await;
    assert_eq!((hint["won"].clone(), hint["best_move"].clone()), (json!(true), json!(6)));
}

#[tokio::test]
async fn classification_summaries() {
    let app = app();
    let (_, r) = call(&app, "GET", "/classify/118", None).await;
    assert_eq!(
        (r["verdict"].clone(), r["cell"].clone(), r["method"].clone()),
        (json!("P"), json!("|"), json!("EquivalenceLink"))
    );
    let (_, r) = call(&app, "GET", "/classify/200", None).await;
    assert_eq!(
        (r["verdict"].clone(), r["method"].clone(), r["verified"].clone()),
        (json!("G"), json!("ThreePrimeScript"), json!(true))
    );
    let (_, r) = call(&app, "GET", "/classify/92", None).await;
    assert_eq!(r["evidence"]["Certificate"]["certificate"]["excluded"], json!([91]));
}

#[tokio::test]
async fn evicted_sessions_are_replayed_from_their_logs() {
    let dir = tempfile::tempdir().unwrap();
    let engine = engine();
    let app = app_with(engine.clone(), 1, Some(dir.path()));
    let first = create(&app, 12, "second").await;
    let id = first["id"].as_str().unwrap().to_string();
    let (_, after) = call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"number": 2}))).await;
    create(&app, 10, "first").await;

    let log = std::fs::read_to_string(dir.path().join(format!("{id}.log"))).unwrap();
    assert_eq!(log.lines().next(), Some("game 12 second"));
    assert_eq!(log.lines().filter(|l| l.starts_with("move ")).count(), 3);

    let (status, restored) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(restored["history"], after["history"]);

    let fresh = app_with(engine, 8, Some(dir.path()));
    let (status, restored) = call(&fresh, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(restored["legal_moves"], after["legal_moves"]);
}

#[tokio::test]
async fn without_logs_eviction_forgets() {
    let app = app_with(engine(), 1, None);
    let id = create(&app, 12, "first").await["id"].as_str().unwrap().to_string();
    create(&app, 12, "first").await;
    assert_eq!(call(&app, "GET", &format!("/games/{id}"), None).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn replies_are_deterministic() {
    let app = app();
    let mut histories = Vec::new();
    for _ in 0..2 {
        let mut game = create(&app, 40, "first").await;
        let id = game["id"].as_str().unwrap().to_string();
        while game["status"] == "ongoing" {
            let smallest = game["legal_moves"][0].clone();
            let (status, b) = call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"number": smallest}))).await;
            assert_eq!(status, StatusCode::OK);
            game = b;
        }
        histories.push(game["history"].clone());
    }
    assert_eq!(histories[0], histories[1]);
}
