use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use godpuzzle::knowledge::KnowledgeState;
use godpuzzle::service::{router_with_state, AppState};
use godpuzzle::simulator::{decode_template, Word};
use godpuzzle::{Formula, PuzzleSpec};

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let request = Request::builder().method(method).uri(uri);
    let request = match body {
        Some(b) => request
            .header("content-type", "application/json")
            .body(Body::from(b.to_string())),
        None => request.body(Body::empty()),
    }
    .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, value)
}

fn app() -> Router {
    router_with_state(AppState::default())
}

async fn create(app: &Router, n: usize, m: usize, k: usize, seed: u64) -> String {
    let (status, body) = call(app, "POST", "/session", Some(json!({"n": n, "m": m, "k": k, "seed": seed}))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    body["id"].as_str().unwrap().to_string()
}

fn keys(v: &Value) -> Vec<&str> {
    let mut k: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    k.sort();
    k
}

#[tokio::test]
async fn unknown_session_is_404() {
    let app = app();
    let (status, body) = call(&app, "GET", "/session/nope/knowledge", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(body["error"].is_string());
    let (status, _) = call(&app, "POST", "/session/nope/ask", Some(json!({"god": 1, "formula": "g1=T"}))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn bad_formula_reports_column() {
    let app = app();
    let id = create(&app, 3, 1, 1, 1).await;
    let (status, body) = call(
        &app,
        "POST",
        &format!("/session/{id}/ask"),
        Some(json!({"god": 1, "formula": "g1=T & g2=Q"})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["column"].as_u64().is_some(), "{body}");
    assert!(body["error"].is_string());
}

#[tokio::test]
async fn bad_god_and_spec_are_400() {
    let app = app();
    let id = create(&app, 3, 1, 1, 1).await;
    for god in [0, 4] {
        let (status, _) = call(&app, "POST", &format!("/session/{id}/ask"), Some(json!({"god": god, "formula": "g1=T"}))).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "god {god}");
    }
    let (status, _) = call(&app, "POST", &format!("/session/{id}/ask"), Some(json!({"god": 1, "formula": "g7=T"}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", "/session", Some(json!({"n": 3, "m": 2, "k": 2}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn declaring_twice_conflicts() {
    let app = app();
    let id = create(&app, 3, 1, 1, 9).await;
    let declare = Some(json!({"assignment": "TFR"}));
    let (status, _) = call(&app, "POST", &format!("/session/{id}/declare"), declare.clone()).await;
    assert_eq!(status, StatusCode::OK);
    let (status, _) = call(&app, "POST", &format!("/session/{id}/declare"), declare).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = call(&app, "POST", &format!("/session/{id}/ask"), Some(json!({"god": 1, "formula": "g1=T"}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, body) = call(&app, "GET", &format!("/session/{id}/knowledge"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "declared");
}

#[tokio::test]
async fn hidden_world_is_not_exposed_before_declare() {
    let app = app();
    let id = create(&app, 3, 1, 1, 4).await;
    let (_, ask) = call(&app, "POST", &format!("/session/{id}/ask"), Some(json!({"god": 2, "formula": "g1=R"}))).await;
    assert_eq!(keys(&ask), ["question_number", "word"]);
    let (_, k) = call(&app, "GET", &format!("/session/{id}/knowledge"), None).await;
    assert_eq!(keys(&k), ["possible", "questions", "safe_gods", "status"]);
    let (_, hint) = call(&app, "POST", &format!("/session/{id}/hint"), None).await;
    assert_eq!(keys(&hint), ["balance", "formula", "god", "source"]);
    let (_, d) = call(&app, "POST", &format!("/session/{id}/declare"), Some(json!({"assignment": "RTF"}))).await;
    assert_eq!(keys(&d), ["chi_meaning", "correct", "transcript", "true_assignment"]);
}

#[tokio::test]
async fn knowledge_is_the_fold_of_updates() {
    let app = app();
    let spec = PuzzleSpec::new(4, 1, 2).unwrap();
    let id = create(&app, 4, 1, 2, 21).await;
    let asks = [(1, "g2=R | g3=T"), (3, "g1=F"), (2, "g4=T & g1!=R"), (4, "g2=T")];
    let mut expected = KnowledgeState::new(spec);
    for (n, (god, text)) in asks.iter().enumerate() {
        let (status, body) = call(&app, "POST", &format!("/session/{id}/ask"), Some(json!({"god": god, "formula": text}))).await;
        assert_eq!(status, StatusCode::OK, "{body}");
        assert_eq!(body["question_number"], n + 1);
        let word: Word = serde_json::from_value(body["word"].clone()).unwrap();
        let formula = Formula::parse(text).unwrap();
        expected = expected.update_formula(god - 1, &formula, decode_template(word)).unwrap();
        let (_, k) = call(&app, "GET", &format!("/session/{id}/knowledge"), None).await;
        let possible: Vec<String> = serde_json::from_value(k["possible"].clone()).unwrap();
        assert_eq!(possible, expected.render());
        let safe: Vec<usize> = serde_json::from_value(k["safe_gods"].clone()).unwrap();
        assert_eq!(safe, expected.safe_gods().iter().map(|g| g + 1).collect::<Vec<_>>());
        assert_eq!(k["questions"], n + 1);
    }
}

#[tokio::test]
async fn fresh_classic_hint_splits_four_four() {
    let app = app();
    let id = create(&app, 3, 1, 1, 0).await;
    let (status, hint) = call(&app, "POST", &format!("/session/{id}/hint"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(hint["balance"], json!([4, 4]));
    assert_eq!(hint["source"], "synthesis");
}

#[tokio::test]
async fn following_hints_always_wins() {
    let app = app();
    for (n, m, k) in [(3, 1, 1), (4, 1, 2), (5, 2, 3)] {
        for seed in 0..12 {
            let id = create(&app, n, m, k, seed).await;
            let mut asked = 0;
            let possible = loop {
                let (_, know) = call(&app, "GET", &format!("/session/{id}/knowledge"), None).await;
                let possible: Vec<String> = serde_json::from_value(know["possible"].clone()).unwrap();
                if possible.len() == 1 {
                    break possible;
                }
                assert!(asked < 12, "({n},{m},{k}) seed {seed} did not converge");
                let (_, hint) = call(&app, "POST", &format!("/session/{id}/hint"), None).await;
                let (status, _) = call(
                    &app,
                    "POST",
                    &format!("/session/{id}/ask"),
                    Some(json!({"god": hint["god"], "formula": hint["formula"]})),
                )
                .await;
                assert_eq!(status, StatusCode::OK);
                asked += 1;
            };
            let (_, d) = call(&app, "POST", &format!("/session/{id}/declare"), Some(json!({"assignment": possible[0]}))).await;
            assert_eq!(d["correct"], true, "({n},{m},{k}) seed {seed}: {d}");
            assert_eq!(d["true_assignment"], possible[0].as_str());
            assert!(d["transcript"].as_str().unwrap().starts_with("transcript v1"));
        }
    }
}

#[tokio::test]
async fn catalog_lists_builtins() {
    let (status, body) = call(&app(), "GET", "/catalog/strategies", None).await;
    assert_eq!(status, StatusCode::OK);
    let names: Vec<&str> = body["strategies"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, godpuzzle::strategy::BUILTIN_NAMES);
}
