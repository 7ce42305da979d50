use std::path::PathBuf;
use std::process::{Command, Output};

use hamcubic::constructive::{bases, BaseFile};
use hamcubic::io::{from_graph6, to_graph6, verify, Envelope, InstanceSpec};
use hamcubic::oracle::{brute_isomorphic, Certificate};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamcubic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hamcubic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn solve_petersen_is_negative() {
    let o = run(&["solve", "i", "5", "1", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let env = Envelope::from_json(&stdout(&o)).unwrap();
    assert!(matches!(env.certificate, Certificate::NoHamiltonian { .. }));
    assert!(verify(&env).unwrap().pass);
}

#[test]
fn gen_dot_has_twenty_nodes() {
    let o = run(&["gen", "x", "5", "4", "3", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(0));
    let nodes = stdout(&o).lines().filter(|l| l.trim().ends_with(';') && !l.contains("--")).count();
    assert_eq!(nodes, 20);
}

#[test]
fn graph6_refuses_multigraphs() {
    let o = run(&["gen", "x", "2", "2", "0", "--format", "graph6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("graph6"));
}

#[test]
fn graph6_reimports_isomorphic() {
    let cases: [&[&str]; 4] = [&["i", "12", "2", "3"], &["x", "5", "4", "3"], &["sgi", "4", "2", "2"], &["gpg", "10", "3"]];
    for args in cases {
        let mut full = vec!["gen"];
        full.extend(args);
        full.extend(["--format", "graph6"]);
        let o = run(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let h = from_graph6(&stdout(&o)).unwrap();
        let spec = InstanceSpec::parse_tokens(&args.iter().map(|a| a.to_string()).collect::<Vec<_>>()).unwrap();
        let g = spec.build().unwrap();
        assert_eq!(to_graph6(&h).unwrap(), stdout(&o).trim());
        assert!(brute_isomorphic(&g, &h).unwrap().bijection.is_some(), "{args:?}");
    }
}

#[test]
fn certificate_file_round_trip_and_tamper() {
    let path = temp("g72.json");
    let o = run(&["solve", "gpg", "7", "2", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let env = Envelope::from_json(&text).unwrap();
    assert_eq!(Envelope::from_json(&env.to_json()).unwrap(), env);

    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));

    let mut bad = env.clone();
    if let Certificate::HamiltonianCycle { cycle } = &mut bad.certificate {
        cycle.swap(1, 2);
    }
    let bad_path = temp("g72-bad.json");
    std::fs::write(&bad_path, bad.to_json()).unwrap();
    let o = run(&["verify", bad_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn exact_and_constructive_agree_on_grids() {
    for args in [["x", "5", "1", "2"], ["x", "6", "3", "1"], ["x", "5", "4", "3"], ["x", "2", "4", "1"]] {
        let mut a = vec!["solve", "--exact"];
        a.extend(args);
        let mut b = vec!["solve", "--constructive"];
        b.extend(args);
        let (ea, eb) = (run(&a), run(&b));
        assert_eq!(ea.status.code(), eb.status.code(), "{args:?}");
        for o in [ea, eb] {
            assert!(verify(&Envelope::from_json(&stdout(&o)).unwrap()).unwrap().pass, "{args:?}");
        }
    }
}

#[test]
fn iso_with_oracle() {
    let o = run(&["iso", "8", "1", "3", "4", "2", "2", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["iso", "8", "1", "3", "8", "1", "1", "--oracle"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn survey_is_independent_of_jobs() {
    let one = run(&["survey", "--n-max", "12", "--jobs", "1", "--no-timing"]);
    let four = run(&["survey", "--n-max", "12", "--jobs", "4", "--no-timing"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&four));
    let text = stdout(&one);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,p,q,connected,proper,hamiltonian,method,millis"));
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        if f[3] == "true" && f[5] == "false" {
            assert!(f[0] == "5" || f[0] == "11", "{line}");
        }
    }
}

#[test]
fn base_file_round_trip() {
    let path = temp("bases.json");
    let o = run(&["witness", "--regenerate-bases", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let file: BaseFile = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let stored: BaseFile = serde_json::from_str(include_str!("../data/base_witnesses.json")).unwrap();
    assert_eq!(file, stored);
    assert_eq!(file.witnesses.len(), bases().len());
}

#[test]
fn witness_and_contract_emit_json() {
    let o = run(&["witness", "6", "8", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["params"]["t"], 8);
    assert_eq!(run(&["witness", "5", "1", "2"]).status.code(), Some(1));

    let o = run(&["contract", "i", "12", "2", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["quotient"]["vertex_count"], 12);
    assert_eq!(v["quotient"]["edges"].as_array().unwrap().len(), 24);
    assert_eq!(run(&["contract", "x", "5", "4", "3"]).status.code(), Some(2));
}

#[test]
fn malformed_arguments_are_errors() {
    assert_eq!(run(&["solve", "i", "6", "3", "1"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "q", "1"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "x", "5", "-1", "2"]).status.code(), Some(2));
}
