use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::path::Path;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use telescope_cli::artifact::Artifact;
use telescope_core::oracle::standard::a6256;
use telescope_core::oracle::sum_values;

fn telescope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_telescope"))
        .args(args)
        .env_remove("TELESCOPE_CACHE")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn integral_prints_the_factored_pair() {
    let o = telescope(&["prove", "int", "(3*x^2-2*x^3)^n", "--bounds", "-1/2..3/2", "--style", "paper"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).starts_with("[9*(n+1)*(2*n+1) - 2*(3*n+4)*(3*n+2)*N, 2]\n"));
    let a: Artifact = serde_json::from_slice(&o.stdout).unwrap();
    assert!(a.verification.certificate_ok && a.verification.oracle_ok);
    assert_eq!(a.verification.oracle_window, Some((0, 20)));
}

#[test]
fn artifacts_recheck_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sum.json");
    let p = path.to_str().unwrap();
    let o = telescope(&["prove", "sum", "(-3)^k*binomial(3*n-k,n)", "--range", "0..2n", "--out", p]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    assert_eq!(code(&telescope(&["check", p])), 0);

    let good: Artifact = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let write = |a: &Artifact| std::fs::write(&path, serde_json::to_string(a).unwrap()).unwrap();

    let mut a = good.clone();
    a.operator.coefficients[0] = vec!["-26".into()];
    write(&a);
    let o = telescope(&["check", p]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("FAILED"));

    let mut a = good.clone();
    a.certificate.num[0].num[0] = "7".into();
    write(&a);
    assert_eq!(code(&telescope(&["check", p])), 3);

    let mut a = good.clone();
    a.rhs.terms[0].value = "-4".into();
    write(&a);
    assert_eq!(code(&telescope(&["check", p])), 3);

    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(code(&telescope(&["check", p])), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&telescope(&["prove", "sum", "binomial(n,", "--range", "0..n"])), 1);
    assert_eq!(code(&telescope(&["prove", "sum", "binomial(n,k)", "--range", "0..n^2"])), 1);
    assert_eq!(code(&telescope(&["prove", "sum", "binomial(n,k)"])), 1);
    assert_eq!(code(&telescope(&["frobnicate"])), 1);
    assert_eq!(code(&telescope(&["--version"])), 0);
    let o = telescope(&[
        "prove",
        "sum",
        "binomial(3*k,k)*binomial(3*n-3*k,n-k)",
        "--range",
        "0..n",
        "--max-order",
        "1",
    ]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let o = telescope(&["prove", "sum", "binomial(n,k)", "--range", "0..n"]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).starts_with("[(1)*N^1 + (-2)*N^0, 0]\n"), "{}", stderr(&o));
    let o = telescope(&["prove", "sum", "binomial(n,k)", "--range", "0..n", "--style", "factored"]);
    assert!(stderr(&o).starts_with("[2 - N, 0]\n"), "{}", stderr(&o));
}

/// Serves `body` for every request and counts the hits.
fn serve(body: String) -> (String, Arc<AtomicUsize>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    let hits = Arc::new(AtomicUsize::new(0));
    let counter = hits.clone();
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut line = String::new();
            let _ = reader.read_line(&mut line);
            while reader.read_line(&mut line).map(|n| n > 2).unwrap_or(false) {
                line.clear();
            }
            counter.fetch_add(1, Ordering::SeqCst);
            let _ = write!(
                stream,
                "HTTP/1.1 200 OK\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
                body.len(),
                body
            );
        }
    });
    (base, hits)
}

fn bfile(n: i64) -> String {
    let v = sum_values(&a6256(), 0, n - 1).unwrap();
    let mut s = String::from("# A006256\n");
    for (i, x) in v {
        s += &format!("{i} {}\n", x.numer());
    }
    s
}

fn oeis(base: &str, cache: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["oeis", "--id", "A006256", "--limit", "40", "--base-url", base, "--cache"];
    args.push(cache.to_str().unwrap());
    args.extend_from_slice(extra);
    telescope(&args)
}

#[test]
fn oeis_fetch_cache_and_offline() {
    let dir = tempfile::tempdir().unwrap();
    let (base, hits) = serve(bfile(60));
    let o = oeis(&base, dir.path(), &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(hits.load(Ordering::SeqCst), 1);
    assert!(dir.path().join("b006256.txt").exists());

    // warm cache: no request, even online
    assert_eq!(code(&oeis(&base, dir.path(), &[])), 0);
    assert_eq!(hits.load(Ordering::SeqCst), 1);
    let o = oeis("http://127.0.0.1:9", dir.path(), &["--offline"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(code(&oeis(&base, dir.path(), &["--refresh"])), 0);
    assert_eq!(hits.load(Ordering::SeqCst), 2);
}

#[test]
fn oeis_mismatch_and_missing_cache() {
    let dir = tempfile::tempdir().unwrap();
    let corrupted = bfile(40).replace("\n2 39\n", "\n2 40\n");
    std::fs::write(dir.path().join("b006256.txt"), corrupted).unwrap();
    let o = oeis("http://127.0.0.1:9", dir.path(), &["--offline"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stdout).contains("[2]"));

    // a short b-file cannot confirm the later terms
    std::fs::write(dir.path().join("b006256.txt"), bfile(10)).unwrap();
    assert_eq!(code(&oeis("http://127.0.0.1:9", dir.path(), &["--offline"])), 3);

    let empty = tempfile::tempdir().unwrap();
    assert_eq!(code(&oeis("http://127.0.0.1:9", empty.path(), &["--offline"])), 4);
    assert_eq!(code(&oeis("http://127.0.0.1:9", empty.path(), &[])), 4);
    assert!(!empty.path().join("b006256.txt").exists());
}
