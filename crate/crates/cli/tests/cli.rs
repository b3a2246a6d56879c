//! End-to-end tests of the `wittkit` binary over temp files.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn wittkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn tmp(name: &str, doc: &Value) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wittkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(doc).unwrap()).unwrap();
    path
}

fn free_ring_json() -> Value {
    json!({"kind": "FreeAssoc", "params": {"generators": ["a","b","c","d"], "maxWordLen": 6}})
}

#[test]
fn chi_integer_matrix() {
    let out = wittkit(&[
        "chi",
        "--ring",
        r#"{"kind":"Integers","params":{}}"#,
        "--in",
        r#"[["1","2"],["3","4"]]"#,
        "--S",
        "1,2",
        "--N",
        "3",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["series"], json!(["1", "-5", "-2"]));
    assert_eq!(doc["ghost"]["entries"]["1"], json!("5"));
    // tr(f^2) = 1 + 2*2*3 + 16 = 29
    assert_eq!(doc["ghost"]["entries"]["2"], json!("29"));
}

#[test]
fn chi_zero_matrix_is_neutral() {
    let out = wittkit(&[
        "chi",
        "--ring",
        r#"{"kind":"Integers","params":{}}"#,
        "--in",
        r#"[["0","0"],["0","0"]]"#,
        "--S",
        "1,2,3",
        "--N",
        "4",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["coords"], json!({}));
    assert_eq!(doc["series"], json!(["1", "0", "0", "0"]));
}

#[test]
fn chi_free_ring_leading_coefficients() {
    let matrix = json!([
        [[{"coeff": "1", "word": ["a"]}], [{"coeff": "1", "word": ["b"]}]],
        [[{"coeff": "1", "word": ["c"]}], [{"coeff": "1", "word": ["d"]}]]
    ]);
    let ring_path = tmp("ring.json", &free_ring_json());
    let mat_path = tmp("matrix.json", &matrix);
    let out = wittkit(&[
        "chi",
        "--ring",
        ring_path.to_str().unwrap(),
        "--in",
        mat_path.to_str().unwrap(),
        "--S",
        "1,2,3,4",
        "--N",
        "5",
    ]);
    let doc = stdout_json(&out);
    // -(a + d) at t^1 and ad - cb at t^2
    assert_eq!(
        doc["series"][1],
        json!([
            {"coeff": "-1", "word": ["a"]},
            {"coeff": "-1", "word": ["d"]}
        ])
    );
    assert_eq!(
        doc["series"][2],
        json!([
            {"coeff": "1", "word": ["a", "d"]},
            {"coeff": "-1", "word": ["c", "b"]}
        ])
    );
}

#[test]
fn op_verschiebung_moves_a_coordinate() {
    let w = json!({
        "ring": {"kind": "Integers", "params": {}},
        "N": 5,
        "S": [1, 2],
        "coords": {"1": "7"}
    });
    let path = tmp("v_in.json", &w);
    let out = wittkit(&[
        "op",
        "V",
        "2",
        "--in",
        path.to_str().unwrap(),
        "--S",
        "1,2,3,4",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["coords"], json!({"2": "7"}));
    assert_eq!(doc["S"], json!([1, 2, 3, 4]));
}

#[test]
fn op_frobenius_then_ghost() {
    let w = json!({
        "ring": {"kind": "Integers", "params": {}},
        "N": 9,
        "S": [1, 2, 3, 4, 5, 6, 7, 8],
        "coords": {"2": "5"}
    });
    let path = tmp("f_in.json", &w);
    let out = wittkit(&["op", "F", "2", "--in", path.to_str().unwrap()]);
    let doc = stdout_json(&out);
    // F_2 tau_2(5) = 2 tau_1(5): ghosts 2*5^n
    let f_path = tmp("f_out.json", &doc);
    let out = wittkit(&["op", "ghost", "--in", f_path.to_str().unwrap()]);
    let ghost = stdout_json(&out);
    assert_eq!(ghost["entries"]["1"], json!("10"));
    assert_eq!(ghost["entries"]["2"], json!("50"));
    assert_eq!(ghost["entries"]["3"], json!("250"));
}

#[test]
fn op_equals_on_the_defining_relation() {
    let ring = free_ring_json();
    let mk = |word: [&str; 2]| {
        json!({
            "ring": ring,
            "N": 5,
            "S": [1, 2, 3, 4],
            "coords": {"1": [{"coeff": "1", "word": word}]}
        })
    };
    let a = tmp("eq_ab.json", &mk(["a", "b"]));
    let b = tmp("eq_ba.json", &mk(["b", "a"]));
    let out = wittkit(&[
        "op",
        "equals",
        "--in",
        a.to_str().unwrap(),
        "--in2",
        b.to_str().unwrap(),
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["verdict"], json!("Equal"));
}

#[test]
fn op_add_and_restrict() {
    let w = |c: &str| {
        json!({
            "ring": {"kind": "Integers", "params": {}},
            "N": 5,
            "S": [1, 2, 3, 4],
            "coords": {"1": c}
        })
    };
    let a = tmp("add_a.json", &w("2"));
    let b = tmp("add_b.json", &w("3"));
    let out = wittkit(&[
        "op",
        "add",
        "--in",
        a.to_str().unwrap(),
        "--in2",
        b.to_str().unwrap(),
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["coords"]["1"], json!("5"));
    assert_eq!(doc["coords"]["2"], json!("-6"));

    let sum_path = tmp("sum.json", &doc);
    let out = wittkit(&[
        "op",
        "restrict",
        "--in",
        sum_path.to_str().unwrap(),
        "--S",
        "1,3",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["S"], json!([1, 3]));
    assert!(doc["coords"].get("2").is_none());
}

#[test]
fn oracle_small_instance_has_no_discrepancies() {
    let out = wittkit(&[
        "oracle",
        "--ring",
        r#"{"kind":"Modular","params":{"m":2}}"#,
        "--N",
        "4",
        "--checks",
        "all",
        "--seed",
        "0",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["groupSize"], json!(8));
    assert_eq!(doc["discrepancies"], json!([]));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let args = [
        "chi",
        "--ring",
        r#"{"kind":"Modular","params":{"m":7}}"#,
        "--in",
        r#"[["1","2"],["3","4"]]"#,
        "--S",
        "1,2,3",
        "--N",
        "4",
    ];
    let a = wittkit(&args);
    let b = wittkit(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes_follow_the_contract() {
    // malformed input -> 2
    let out = wittkit(&[
        "chi",
        "--ring",
        r#"{"kind":"Integers","params":{}}"#,
        "--in",
        r#"[["1","2"]]"#,
        "--S",
        "1,2",
        "--N",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // unknown operator -> 3
    let w = json!({
        "ring": {"kind": "Integers", "params": {}},
        "N": 3,
        "S": [1, 2],
        "coords": {}
    });
    let path = tmp("code_in.json", &w);
    let out = wittkit(&["op", "frobnicate", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    // unsupported tensor pair -> 3
    let free = json!({
        "ring": {"kind": "FreeAssoc", "params": {"generators": ["a"], "maxWordLen": 2}},
        "N": 3,
        "S": [1, 2],
        "coords": {}
    });
    let fpath = tmp("code_free.json", &free);
    let out = wittkit(&[
        "op",
        "star",
        "--in",
        fpath.to_str().unwrap(),
        "--in2",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));

    // resource guard -> 4
    let out = wittkit(&[
        "oracle",
        "--ring",
        r#"{"kind":"Modular","params":{"m":11}}"#,
        "--N",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn written_documents_reparse() {
    let dir = std::env::temp_dir().join(format!("wittkit-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("chi.json");
    let out = wittkit(&[
        "chi",
        "--ring",
        r#"{"kind":"Integers","params":{}}"#,
        "--in",
        r#"[["1","2"],["3","4"]]"#,
        "--S",
        "1,2",
        "--N",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["series"][1], json!("-5"));
}
