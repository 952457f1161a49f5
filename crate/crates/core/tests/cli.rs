use omega_workbench::cli::run;
use serde_json::Value;

fn owb(args: &str) -> (i32, String) {
    let r = run(std::iter::once("owb").chain(args.split_whitespace()));
    (r.code, r.output)
}

#[test]
fn exit_codes() {
    assert_eq!(owb("ord cmp w 3").0, 0);
    assert_eq!(owb("ord parse w+").0, 1);
    assert_eq!(owb("ord frobnicate").0, 2);
    assert_eq!(owb("--budget nope ord norm w").0, 2);
    assert_eq!(owb("--help").0, 0);
}

#[test]
fn json_errors_are_objects() {
    let (code, out) = owb("--json ord fund 0 3");
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["error"].is_string());
}

#[test]
fn small_results() {
    let (_, out) = owb("--json fgh eval 2 3");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["value"], 63);
    let (_, out) = owb("--json goodstein 3");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["terminated_at"], 5);
    let (code, out) = owb("ord fund w^(w) 2");
    assert_eq!((code, out.trim()), (0, "w^(2)"));
}
