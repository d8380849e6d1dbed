use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], cache_dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_protofusion"))
        .args(args)
        .env("PROTOFUSION_CACHE_DIR", cache_dir)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn protoessential_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(&["protoessential", "--group", "corpus:dihedral4", "--seed", "7"], dir.path()));
    for key in ["group", "prime", "mode", "stage_counts", "survivors", "traces"] {
        assert!(v.get(key).is_some(), "missing {}", key);
    }
    let counts = &v["stage_counts"];
    for key in ["total", "centric", "rank", "frattini", "radical", "lifting"] {
        assert!(counts[key].is_u64(), "missing count {}", key);
    }
    assert_eq!(v["survivors"].as_array().unwrap().len(), 1);
    assert_eq!(v["survivors"][0]["order"], 4);
    assert_eq!(v["config"]["seed"], 7);
    assert!(dir.path().join("aut_cache.json").exists());
}

#[test]
fn desk_scale_survivor_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (group, expected) in [("corpus:dihedral4", 1), ("corpus:extraspecial-3-27", 1), ("corpus:cpxcp-3", 0)] {
        let v = json(&run(&["protoessential", "--group", group], dir.path()));
        assert_eq!(v["survivors"].as_array().unwrap().len(), expected, "{}", group);
    }
}

#[test]
fn essentials_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (group, prime, expected) in [("corpus:symmetric4", "2", 1), ("corpus:alternating6", "2", 2), ("corpus:dihedral4", "2", 0)] {
        let v = json(&run(&["essentials", "--group", group, "--prime", prime], dir.path()));
        assert_eq!(v["classes"].as_array().unwrap().len(), expected, "{}", group);
        assert_eq!(v["thompson"]["weakly_closed"], true);
    }
}

#[test]
fn emitted_spec_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("q8.json");
    let out = run(&["corpus", "emit", "quaternion8", "--report", spec.to_str().unwrap()], dir.path());
    assert!(out.status.success());
    let text = std::fs::read_to_string(&spec).unwrap();
    let g = protofusion::io::parse_group_spec(&spec).unwrap();
    assert_eq!(g.group.order(), 8);
    assert_eq!(protofusion::io::GroupSpec::from_group(&g.name, &g.group).to_json(), text);

    let arg = format!("file:{}", spec.display());
    let v = json(&run(&["saturation", "--group", &arg, "--prime", "2"], dir.path()));
    assert_eq!(v["saturated"], true);
}

#[test]
fn report_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("focal.json");
    let args = ["focal", "--group", "corpus:symmetric4", "--prime", "2"];
    let stdout = run(&args, dir.path()).stdout;
    let mut with_file = args.to_vec();
    with_file.extend(["--report", path.to_str().unwrap()]);
    assert!(run(&with_file, dir.path()).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn bad_prime_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["essentials", "--group", "corpus:symmetric4", "--prime", "4"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
