//! Plays one game through the JSON session API in-process: create a
//! session, follow the hints until one assignment is left, then declare it.
//! `godpuzzle serve` exposes the same routes over HTTP.
//!
//! Usage: `cargo run --example session_server [n m k [seed]]`

use axum::body::Body;
use axum::http::Request;
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> anyhow::Result<Value> {
    let builder = Request::builder().method(method).uri(uri);
    let request = match &body {
        Some(b) => builder
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))?,
        None => builder.body(Body::empty())?,
    };
    let response = app.clone().oneshot(request).await?;
    let status = response.status();
    let bytes = response.into_body().collect().await?.to_bytes();
    let value: Value = serde_json::from_slice(&bytes)?;
    let sent = body.map(|b| format!(" {b}")).unwrap_or_default();
    println!("{method} {uri}{sent}\n  {status} {value}");
    Ok(value)
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (n, m, k, seed) = match args[..] {
        [n, m, k] => (n, m, k, 1),
        [n, m, k, s] => (n, m, k, s),
        _ => (3, 1, 1, 1),
    };
    let app = godpuzzle::service::router();
    call(&app, "GET", "/catalog/strategies", None).await?;
    let created = call(&app, "POST", "/session", Some(json!({"n": n, "m": m, "k": k, "seed": seed}))).await?;
    let id = created["id"].as_str().unwrap_or_default().to_string();
    let possible = loop {
        let state = call(&app, "GET", &format!("/session/{id}/knowledge"), None).await?;
        let possible = state["possible"].as_array().cloned().unwrap_or_default();
        if possible.len() <= 1 {
            break possible;
        }
        let hint = call(&app, "POST", &format!("/session/{id}/hint"), None).await?;
        let ask = json!({"god": hint["god"], "formula": hint["formula"]});
        call(&app, "POST", &format!("/session/{id}/ask"), Some(ask)).await?;
    };
    let guess = possible.first().cloned().unwrap_or(Value::Null);
    let verdict = call(&app, "POST", &format!("/session/{id}/declare"), Some(json!({"assignment": guess}))).await?;
    println!("\n{}", verdict["transcript"].as_str().unwrap_or_default());
    Ok(())
}
