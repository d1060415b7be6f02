mod support;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use base64::Engine as _;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use support::{read_stl, stl_is_closed};
use telefold::service::{router, ServiceConfig, BODY_LIMIT};
use telefold_core::design::baseline;
use tower::ServiceExt;

fn app() -> Router {
    router(&ServiceConfig::default())
}

async fn call(app: &Router, method: Method, uri: &str, body: impl Into<Body>) -> (StatusCode, Vec<u8>) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header(header::CONTENT_TYPE, "application/json")
        .body(body.into())
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    (status, res.into_body().collect().await.unwrap().to_bytes().to_vec())
}

async fn post(app: &Router, uri: &str, body: &Value) -> (StatusCode, Value) {
    let (s, b) = call(app, Method::POST, uri, body.to_string()).await;
    (s, serde_json::from_slice(&b).unwrap())
}

fn coarse(mut d: telefold_core::design::DesignParams) -> Value {
    d.resolution.angular_step_deg = 30.0;
    d.resolution.contour_points = 64;
    serde_json::to_value(d).unwrap()
}

#[tokio::test]
async fn generate_returns_a_closed_mesh() {
    let (status, v) = post(&app(), "/api/generate", &coarse(baseline())).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["diagnostics"]["watertight"], true);
    let stl = base64::engine::general_purpose::STANDARD.decode(v["mesh"].as_str().unwrap()).unwrap();
    let parsed = read_stl(&stl).unwrap();
    assert!(stl_is_closed(&parsed));
    assert_eq!(v["diagnostics"]["triangle_count"].as_u64().unwrap() as usize, parsed.facets.len());
    for key in ["bend", "metrics", "design_digest", "mesh_digest"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["metrics"]["bend_theta_deg"], 0.0);
}

#[tokio::test]
async fn validation_failures_list_every_violation() {
    let mut d = baseline();
    d.sections.0[0].midline.amplitude = -1.0;
    d.sections.0[0].midline.curve_weight = 0.0;
    let (status, v) = post(&app(), "/api/generate", &serde_json::to_value(d).unwrap()).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let fields: Vec<&str> = v["errors"].as_array().unwrap().iter().map(|e| e["field"].as_str().unwrap()).collect();
    assert_eq!(fields, ["sections[0].midline.amplitude", "sections[0].midline.curve_weight"]);
    assert!(v["errors"][0]["message"].as_str().unwrap().contains("> 0"));
}

#[tokio::test]
async fn malformed_bodies_are_400() {
    let app = app();
    for body in ["{not json", "[]", r#"{"sections": [], "colour": 1}"#, ""] {
        let (status, b) = call(&app, Method::POST, "/api/generate", body).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
        let v: Value = serde_json::from_slice(&b).unwrap();
        assert!(!v["errors"][0]["message"].as_str().unwrap().is_empty());
    }
    let (status, _) = call(&app, Method::POST, "/api/bend", r#"{"s0": "a"}"#).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn oversized_bodies_are_413() {
    let big = vec![b' '; BODY_LIMIT + 1];
    let (status, b) = call(&app(), Method::POST, "/api/generate", big).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    assert!(serde_json::from_slice::<Value>(&b).unwrap()["errors"].is_array());
}

#[tokio::test]
async fn bend_endpoint() {
    let app = app();
    let (s, v) = post(&app, "/api/bend", &json!({"s0": 100, "s1": 120, "r": 20})).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["x"], 55.0);
    assert!((v["h"].as_f64().unwrap() - 93.675).abs() < 1e-3);
    assert!((v["theta_deg"].as_f64().unwrap() - 30.42).abs() < 0.01);
    assert!(v.get("axial_ratio").is_none());
    let (s, v) = post(&app, "/api/bend", &json!({"s0": 50, "s1": 50, "r": 20})).await;
    assert_eq!((s, v["theta_deg"].as_f64().unwrap()), (StatusCode::OK, 0.0));
    let (s, v) = post(&app, "/api/bend", &json!({"s0": 10, "s1": 100, "r": 1})).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(v["errors"][0]["message"].as_str().unwrap().contains("no tilted cone"));
    let (s, v) = post(&app, "/api/bend", &json!({"s0": 100, "s1": 120, "r": 20, "h0": 50})).await;
    assert_eq!(s, StatusCode::OK);
    assert!((v["axial_ratio"].as_f64().unwrap() - v["h"].as_f64().unwrap() / 50.0).abs() < 1e-15);
}

#[tokio::test]
async fn presets_and_health() {
    let app = app();
    let (s, b) = call(&app, Method::GET, "/api/presets", Body::empty()).await;
    assert_eq!(s, StatusCode::OK);
    let v: Value = serde_json::from_slice(&b).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|p| p["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 15);
    assert_eq!(names[0], "BAS");
    assert_eq!(names[14], "THV-high");
    assert_eq!(v[0]["params"], serde_json::to_value(baseline()).unwrap());
    let (s, b) = call(&app, Method::GET, "/healthz", Body::empty()).await;
    assert_eq!((s, serde_json::from_slice::<Value>(&b).unwrap()), (StatusCode::OK, json!({"status": "ok"})));
    let (s, _) = call(&app, Method::GET, "/api/generate", Body::empty()).await;
    assert_eq!(s, StatusCode::METHOD_NOT_ALLOWED);
}

#[tokio::test]
async fn cors_preflight() {
    let app = router(&ServiceConfig { allowed_origin: Some("http://localhost:5173".parse().unwrap()) });
    let req = Request::builder()
        .method(Method::OPTIONS)
        .uri("/api/generate")
        .header(header::ORIGIN, "http://localhost:5173")
        .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
        .header(header::ACCESS_CONTROL_REQUEST_HEADERS, "content-type")
        .body(Body::empty())
        .unwrap();
    let res = app.oneshot(req).await.unwrap();
    assert_eq!(res.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "http://localhost:5173");
    let any = self::app()
        .oneshot(Request::get("/healthz").header(header::ORIGIN, "http://example.org").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(any.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "*");
}

/// Replays a fixed request set in two orders and compares bodies.
#[tokio::test]
async fn responses_depend_only_on_the_body() {
    let app = app();
    let mut amp = baseline();
    amp.sections.0[0].midline.amplitude = 12.0;
    let requests = [
        ("/api/generate", coarse(baseline())),
        ("/api/bend", json!({"s0": 100, "s1": 110, "r": 20})),
        ("/api/generate", coarse(amp)),
        ("/api/bend", json!({"s0": 10, "s1": 100, "r": 1})),
    ];
    let mut forward = Vec::new();
    for (uri, body) in &requests {
        forward.push(call(&app, Method::POST, uri, body.to_string()).await);
    }
    let mut backward = Vec::new();
    for (uri, body) in requests.iter().rev() {
        backward.push(call(&app, Method::POST, uri, body.to_string()).await);
    }
    backward.reverse();
    assert_eq!(forward, backward);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_identical_requests_agree() {
    let app = app();
    let body = coarse(baseline()).to_string();
    let tasks: Vec<_> = (0..6)
        .map(|_| {
            let (app, body) = (app.clone(), body.clone());
            tokio::spawn(async move { call(&app, Method::POST, "/api/generate", body).await })
        })
        .collect();
    let mut results = Vec::new();
    for t in tasks {
        results.push(t.await.unwrap());
    }
    assert_eq!(results[0].0, StatusCode::OK);
    assert!(results.iter().all(|r| r == &results[0]));
}
