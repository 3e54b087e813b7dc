use std::io::{Read, Write};
use std::net::TcpListener;
use std::process::Command;

use catbert_cli::{bfile_url, run, OEIS_URL_ENV};
use catbert_core::exact::int;
use catbert_core::ExactMatrix;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("catbert").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn seq_prefix() {
    let (code, out, _) = call(&["seq", "--p", "2", "--q", "-3", "--count", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1 -2 -2 -4 -10");
}

#[test]
fn invert_one_by_one() {
    let (code, out, _) = call(&["invert", "--p", "2", "--q", "-3", "--a", "1", "--n", "1", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"[["-2"]]"#);
}

#[test]
fn invert_json_round_trips() {
    let (code, out, _) = call(&["invert", "--p", "3", "--q", "2", "--a", "1", "--n", "5", "--format", "json"]);
    assert_eq!(code, 0);
    let inv = ExactMatrix::from_json(&out).unwrap();
    let (_, hankel, _) = call(&["hankel", "--p", "3", "--q", "2", "--a", "1", "--n", "5", "--format", "json"]);
    let g = ExactMatrix::from_json(&hankel).unwrap();
    assert_eq!(g.matmul(&inv).unwrap(), ExactMatrix::identity(5));
}

#[test]
fn scaled_inverse_is_q_times_inverse() {
    let args = ["invert", "--p", "5", "--q", "7", "--a", "2", "--n", "3", "--format", "json"];
    let plain = ExactMatrix::from_json(&call(&args).1).unwrap();
    let mut scaled_args = args.to_vec();
    scaled_args.push("--scaled");
    let scaled = ExactMatrix::from_json(&call(&scaled_args).1).unwrap();
    assert_eq!(plain.scale(&int(7)), scaled);
}

#[test]
fn det_formula_and_oracle() {
    let (code, out, _) = call(&["det", "--n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "-2");
    let (code, out, _) = call(&["det", "--n", "6", "--oracle"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn invalid_params_are_usage_errors() {
    let (code, _, err) = call(&["verify", "--suite", "three-term", "--p", "7", "--q", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("q must be nonzero and coprime to p"), "{err}");
    let (code, _, err) = call(&["seq", "--p", "1", "--q", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("p must be at least 2"), "{err}");
    let (code, _, err) = call(&["verify", "--suite", "bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown suite"), "{err}");
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn verify_single_member_json() {
    let (code, out, _) = call(&["verify", "--suite", "inverse,certificates", "--p", "3", "--q", "-2", "--a", "1", "--n-max", "4", "--format", "json"]);
    assert_eq!(code, 0);
    let reports: serde_json::Value = serde_json::from_str(&out).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r["violations"].as_array().unwrap().is_empty()));
}

#[test]
fn verify_all_on_small_grid() {
    let (code, out, _) = call(&["verify", "--all", "--p-list", "2,3", "--q-list", "1,-3", "--a-list", "0,1", "--n-max", "5"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains(", 0 failed"));
}

#[test]
fn catbert_views() {
    let (code, out, _) = call(&["catbert", "--n", "2", "--show", "inverse", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"[["-1","2"],["2","-2"]]"#);
    let (_, out, _) = call(&["catbert", "--n", "4", "--show", "dets"]);
    assert_eq!(out.trim(), "1 -2 -1400 -679140000");
    let (code, out, _) = call(&["catbert", "--n", "15", "--show", "oeis"]);
    assert_eq!(code, 0);
    assert!(out.contains("15 of 15 terms match at offset 1"), "{out}");
}

#[test]
fn catbert_oeis_mismatch_is_violation() {
    let path = std::env::temp_dir().join(format!("catbert-bad-{}.txt", std::process::id()));
    std::fs::write(&path, "1 1\n2 -2\n3 -1401\n").unwrap();
    let (code, out, _) = call(&["catbert", "--n", "3", "--show", "oeis", "--bfile", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, 1, "{out}");
}

#[test]
fn bench_csv() {
    let (code, out, _) = call(&["bench", "--n-list", "4,6", "--repetitions", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "method,p,q,a,n,wall_nanos,max_bits,multiplications");
    assert_eq!(lines.len(), 5);
}

#[test]
fn url_layout() {
    assert_eq!(bfile_url("https://oeis.org/", "A296056"), "https://oeis.org/A296056/b296056.txt");
}

#[test]
fn fetch_from_local_server() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let server = std::thread::spawn(move || {
        let (mut stream, _) = listener.accept().unwrap();
        let mut buf = [0u8; 4096];
        let n = stream.read(&mut buf).unwrap();
        let request = String::from_utf8_lossy(&buf[..n]).to_string();
        let body = "1 1\n2 -2\n3 -1400\n";
        write!(stream, "HTTP/1.1 200 OK\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}", body.len()).unwrap();
        request
    });
    let output = Command::new(env!("CARGO_BIN_EXE_catbert"))
        .args(["catbert", "--n", "3", "--show", "oeis", "--oeis-fetch", "--timeout", "10"])
        .env(OEIS_URL_ENV, format!("http://{addr}"))
        .output()
        .unwrap();
    let request = server.join().unwrap();
    assert!(request.starts_with("GET /A296056/b296056.txt "), "{request}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert_eq!(output.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("3 of 3 terms match at offset 1"), "{stdout}");
}
