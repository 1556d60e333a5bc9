use std::process::{Command, Output};

use serde_json::Value;

fn qflag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qflag")).args(args).output().expect("run qflag")
}

fn doc(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn schema() -> Value {
    serde_json::from_str(include_str!("../schema/qflag-report.schema.json")).unwrap()
}

/// The top-level shape required by the shipped schema.
fn conforms(d: &Value) -> bool {
    let s = schema();
    let props = s["properties"].as_object().unwrap();
    let obj = d.as_object().unwrap();
    let required = s["required"].as_array().unwrap().iter().all(|k| obj.contains_key(k.as_str().unwrap()));
    let no_extra = obj.keys().all(|k| props.contains_key(k));
    let commands = props["command"]["enum"].as_array().unwrap();
    required
        && no_extra
        && d["schema"] == props["schema"]["const"]
        && d["schema_version"] == props["schema_version"]["const"]
        && commands.contains(&d["command"])
        && (d["pass"].is_boolean() || d["pass"].is_null())
}

#[test]
fn rep_dumps_the_fundamental() {
    let o = qflag(&["rep", "--type", "A2", "--weight", "1,0"]);
    assert!(o.status.success());
    let d = doc(&o);
    assert!(conforms(&d));
    assert_eq!(d["result"]["dim"], 3);
    assert_eq!(d["pass"], true);
}

#[test]
fn borel_weil_on_the_podles_sphere() {
    let o = qflag(&["borel-weil", "--flag", "A1/1", "--k", "-2:3", "--depth", "4"]);
    assert!(o.status.success());
    let d = doc(&o);
    assert!(conforms(&d));
    let dims: Vec<i64> = d["result"]["report"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["dim"].as_i64().unwrap())
        .collect();
    assert_eq!(dims, vec![0, 0, 1, 2, 3, 4]);
}

#[test]
fn crosscheck_and_word_check_flags() {
    let o = qflag(&["borel-weil", "--flag", "A2/1", "--k", "0:1", "--depth", "3", "--crosscheck", "--word-check"]);
    assert!(o.status.success());
    let d = doc(&o);
    assert_eq!(d["result"]["crosscheck"]["pass"], true);
    assert_eq!(d["result"]["word_check"]["pass"], true);
}

#[test]
fn catalog_lists_flags_and_spherical_weights() {
    let o = qflag(&["catalog"]);
    assert!(o.status.success());
    let d = doc(&o);
    assert!(conforms(&d));
    let flags = d["result"]["flags"].as_array().unwrap();
    let a21 = flags.iter().find(|f| f["flag"] == "A2/1").unwrap();
    assert_eq!(a21["spherical_weights"], serde_json::json!([[1, 1]]));
}

#[test]
fn usage_errors_exit_two_with_a_diagnostic() {
    for args in [
        vec!["rep", "--type", "X2", "--weight", "1"],
        vec!["liouville", "--flag", "B2/2"],
        vec!["--q", "2", "rep", "--type", "A1", "--weight", "1"],
        vec!["cache", "stats"],
    ] {
        let o = qflag(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let e: Value = serde_json::from_slice(o.stderr.split(|&b| b == b'\n').find(|l| l.starts_with(b"{")).unwrap())
            .unwrap();
        assert_eq!(e["schema"], "qflag-diagnostic");
        assert_eq!(e["error"], "usage");
    }
}

#[test]
fn too_shallow_truncation_fails_verification() {
    // Degree-3 monomials live in a block beyond depth 2.
    let o = qflag(&["coordring", "--flag", "A1/1", "--dmax", "3", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(doc(&o)["pass"], false);
}

#[test]
fn specialization_mode() {
    let o = qflag(&["--q", "4", "liouville", "--flag", "A1/1", "--depth", "3"]);
    assert!(o.status.success());
    let d = doc(&o);
    assert_eq!(d["q"], "q=4");
    assert_eq!(d["result"]["kernel_dim"], 1);
}

#[test]
fn warm_cache_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().to_str().unwrap();
    let out = dir.path().join("out.json");
    let args = ["--cache", c, "verify", "--flag", "A2/1", "--suite", "borel-weil,coordring,central"];
    let cold = qflag(&args);
    let warm = qflag(&args);
    let mut with_json = args.to_vec();
    with_json.extend(["--json", out.to_str().unwrap()]);
    let again = qflag(&with_json);
    assert!(cold.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(warm.stdout, again.stdout);
    assert_eq!(std::fs::read(&out).unwrap(), again.stdout);

    let stats = doc(&qflag(&["--cache", c, "cache", "stats"]));
    assert!(stats["result"]["entries"].as_u64().unwrap() > 0);
    let cleared = doc(&qflag(&["--cache", c, "cache", "clear"]));
    assert_eq!(cleared["result"]["removed"], stats["result"]["entries"]);
    let list = doc(&qflag(&["--cache", c, "cache", "list"]));
    assert_eq!(list["result"]["entries"], serde_json::json!([]));
}

#[test]
fn relations_report() {
    let o = qflag(&["relations", "--flag", "A1/1", "--gamma"]);
    assert!(o.status.success());
    let d = doc(&o);
    assert_eq!(d["result"]["mixed"]["holds"], true);
    assert_eq!(d["result"]["bracket_operator"]["commutes_with_action"], true);
}
