use std::process::Command;

use serde_json::Value;
use vgit_cli::{run, Outcome};

const F6: &str = "x1^3+x2^3+x3^3+x4^3+x5^3+x6^3";
const NODAL: &str = "x0*x1^2+x0*x2^2+x0*x3^2+x0*x4^2+x0*x5^2+x0*x6^2 + x1^3+x2^3+x3^3+x4^3+x5^3+x6^3";

fn fermat7() -> String {
    format!("x0^3+{F6}")
}

fn vgit(args: &[&str]) -> Outcome {
    run(std::iter::once("vgit").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let out = vgit(&full);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn mu_pair_just_below_the_wall() {
    let v = json(&["mu-pair", "--Y", F6, "--H", "x0", "--t", "49/100", "--lambda", "6,-1,-1,-1,-1,-1,-1", "--verify"]);
    assert_eq!(v["result"]["mu_pair"], "-3/50");
    assert_eq!(v["inputs"]["nvars"], 7);
}

#[test]
fn degree_two_jacobian_piece_of_fermat_fivefold() {
    let f = fermat7();
    let v = json(&["jring", "--f", &f, "--k", "2", "--verify"]);
    assert_eq!(v["result"]["dim"], 21);
    assert_eq!(v["certificate"]["rank"]["witness"], "full rank mod 32003");
}

#[test]
fn limit_drops_the_x0_terms() {
    let y = format!("{F6}+x0*x1*x2");
    let v = json(&["limit", "--Y", &y, "--H", "x0", "--lambda", "-6,1,1,1,1,1,1", "--verify"]);
    assert_eq!(v["result"]["Y0"], "x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + x6^3");
    assert_eq!(v["result"]["H0"], "x0");
}

#[test]
fn text_and_json_agree_on_values() {
    let args = ["mu", "--f", "x0^2*x1 + x2^3", "--lambda", "2,-1,-1"];
    let text = vgit(&args);
    assert_eq!(text.code, 0);
    assert!(text.stdout.contains("mu: 3\n"), "{}", text.stdout);
    assert_eq!(json(&args)["result"]["mu"], 3);
}

#[test]
fn identical_argv_gives_identical_output() {
    let f = fermat7();
    let args = ["wall-scan", "--Y", f.as_str(), "--H", "x0", "--json"];
    let a = vgit(&args);
    let b = vgit(&args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    let walls = v["result"]["walls"].as_array().unwrap();
    assert_eq!(walls.len(), 1);
    assert_eq!(walls[0]["slope"], "1/2");
    assert_eq!(walls[0]["at_wall"], "TorusStrictlySemistable");
    assert_eq!(v["result"]["semistable_interval"]["hi"], "1/2");
}

#[test]
fn echoed_inputs_reproduce_the_report() {
    let first = json(&["torus-stab", "--Y", "x2^3 + 2/4*x1^3 +x0^3 - x0*x1*x2", "--H", "x1 + x0", "--t", "2/6"]);
    let inputs = &first["inputs"];
    let (y, h, t) = (
        inputs["Y"].as_str().unwrap(),
        inputs["H"].as_str().unwrap(),
        inputs["t"].as_str().unwrap(),
    );
    assert_eq!(t, "1/3");
    let second = json(&["torus-stab", "--Y", y, "--H", h, "--t", t]);
    assert_eq!(first, second);
}

#[test]
fn printed_polynomials_reparse_to_themselves() {
    let y = format!("{F6} + 3/7*x0*x1*x2 - x0^2*x4 + 5*x0^3");
    let v = json(&["limit", "--Y", &y, "--H", "x0 - 2*x3", "--lambda", "-6,1,1,1,1,1,1"]);
    for text in [&v["inputs"]["Y"], &v["inputs"]["H"], &v["result"]["Y0"], &v["result"]["H0"]] {
        let text = text.as_str().unwrap();
        let again = json(&["limit", "--Y", text, "--H", "x0", "--lambda", "0,0,0,0,0,0,0", "--nvars", "7"]);
        assert_eq!(again["inputs"]["Y"].as_str().unwrap(), text);
        assert_eq!(again["result"]["Y0"].as_str().unwrap(), text);
    }
}

#[test]
fn certificates_pass_the_independent_verifier() {
    let f = fermat7();
    let y = format!("{F6}+x0*x1*x2");
    let cases: Vec<Vec<&str>> = vec![
        vec!["torus-stab", "--Y", &f, "--H", "x0", "--t", "1/4"],
        vec!["torus-stab", "--Y", &f, "--H", "x0", "--t", "1/2"],
        vec!["torus-stab", "--Y", F6, "--H", "x0", "--t", "51/100"],
        vec!["destab", "--Y", &y, "--H", "x0 + x3", "--t", "51/100"],
        vec!["wall-scan", "--Y", &y, "--H", "x0", "--bound", "6"],
        vec!["smooth", "--f", "x0^3+x1^3+x2^3+x3^3"],
        vec!["hodge", "--f", "x0^3+x1^3+x2^3+x3^3+x4^3", "--p", "1"],
        vec!["pairing", "--f", "x0^3+x1^3+x2^3+x3^3", "--a", "1"],
        vec!["classify-point", "--f", NODAL, "--point", "2,0,0,0,0,0,0"],
        vec!["fiber-build", "--f3", F6],
        vec!["fiber-normal-form", "--f3", F6, "--Y", "x0*x1^2 + x0*x2*x3 + x0^2*x4 + x0^3 + x1^3+x2^3+x3^3+x4^3+x5^3+x6^3"],
    ];
    for mut args in cases {
        args.push("--verify");
        let out = vgit(&args);
        assert_eq!(out.code, 0, "{args:?}: {}{}", out.stdout, out.stderr);
    }
}

#[test]
fn torus_verdicts_carry_their_certificates() {
    let f = fermat7();
    let stable = json(&["torus-stab", "--Y", &f, "--H", "x0", "--t", "1/4"]);
    assert_eq!(stable["result"]["status"], "TorusStable");
    let coeffs = stable["certificate"]["hull_coefficients"].as_array().unwrap();
    assert_eq!(coeffs.len(), 7);
    let unstable = json(&["torus-stab", "--Y", F6, "--H", "x0", "--t", "51/100"]);
    assert_eq!(unstable["result"]["status"], "TorusUnstable");
    assert_eq!(unstable["certificate"]["lambda"], "-6,1,1,1,1,1,1");
    assert_eq!(unstable["certificate"]["mu_pair"], "-3/50");
}

#[test]
fn node_reports_the_degeneration_metadata() {
    let v = json(&["classify-point", "--f", NODAL, "--point", "1,0,0,0,0,0,0"]);
    assert_eq!(v["result"]["class"], "Node");
    let notes = v["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("dim 20")));
    let smooth = json(&["classify-point", "--f", NODAL, "--point", "0,1,0,0,0,0,0"]);
    assert_eq!(smooth["result"]["class"], "NotOnHypersurface");
}

#[test]
fn fiber_commands_record_their_hypotheses() {
    let build = json(&["fiber-build", "--f3", F6]);
    assert_eq!(build["result"]["w2_dim"], 15);
    assert_eq!(build["result"]["coordinate_ledger"], "15+6+1");
    assert_eq!(build["result"]["weights"], "(1^15, 2^6, 3)");
    assert!(build["notes"][0].as_str().unwrap().contains("assumed trivial"));

    let y = format!("{F6}+x0^2*x3");
    let z = format!("{F6}-x0^2*x3");
    let eq = json(&["fiber-equal", "--f3", F6, "--Y", &y, "--Z", &z]);
    assert_eq!(eq["result"]["equal"], true);
    assert_eq!(eq["result"]["twist_ambiguous"], true);
    assert_eq!(eq["notes"].as_array().unwrap().len(), 2);

    let w = format!("{F6}+x0*x1*x2+x0^2*x3");
    let ne = json(&["fiber-equal", "--f3", F6, "--Y", &y, "--Z", &w]);
    assert_eq!(ne["result"]["equal"], false);
    assert_eq!(ne["result"]["twist_ambiguous"], false);
}

#[test]
fn prime_field_input() {
    let f = fermat7();
    let v = json(&["jring", "--f", &f, "--k", "3", "--field", "32003"]);
    assert_eq!(v["inputs"]["field"], "F_32003");
    assert_eq!(v["result"]["dim"], 35);
}

#[test]
fn input_errors_exit_2_with_the_grammar() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["mu", "--f", "x1^2+x1", "--lambda", "1,-1"],
        vec!["mu", "--f", "x1^2", "--lambda", "1,1"],
        vec!["mu", "--f", "x1^2", "--lambda", "1,-1,0"],
        vec!["mu-pair", "--Y", F6, "--H", "x0", "--t", "1/0", "--lambda", "6,-1,-1,-1,-1,-1,-1"],
        vec!["mu", "--f", "(x1)^2", "--lambda", "1,-1"],
        vec!["jring", "--f", "x0^3", "--k", "2", "--field", "9"],
        vec!["torus-stab", "--Y", F6, "--H", "x0^2", "--t", "1"],
        vec!["fiber-build", "--f3", "x1^3+x2^3+x3^3+x4^3+x5^3", "--nvars", "7"],
        vec!["selftest", "--criteria", "11"],
        vec!["jring", "--f", "x0^3"],
        vec!["no-such-command"],
    ];
    for args in cases {
        let out = vgit(&args);
        assert_eq!(out.code, 2, "{args:?}: {}", out.stdout);
        assert!(out.stderr.contains("Polynomial grammar"), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn budget_exhaustion_exits_3() {
    let f = fermat7();
    let out = vgit(&["torus-stab", "--Y", &f, "--H", "x0", "--t", "1/3", "--pivot-budget", "0"]);
    assert_eq!(out.code, 3, "{}", out.stderr);
    let out = vgit(&["smooth", "--f", "x0*x1^2+x0*x2^2+x1^3+x2^3", "--primes", "7", "--exact-limit", "1"]);
    assert_eq!(out.code, 3, "{}", out.stderr);
    assert!(out.stderr.contains("exceeds the configured limit"));
}

#[test]
fn help_exits_0() {
    let out = vgit(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("wall-scan") && out.stdout.contains("Polynomial grammar"));
}

#[test]
fn timing_is_opt_in() {
    let args = ["mu", "--f", "x0*x1", "--lambda", "1,-1", "--json"];
    assert!(!vgit(&args).stdout.contains("timing"));
    let mut timed = args.to_vec();
    timed.push("--timing");
    assert!(vgit(&timed).stdout.contains("timing_ms"));
}

#[test]
fn selftest_subset_passes() {
    let v = json(&["selftest", "--criteria", "1,3,8"]);
    assert_eq!(v["result"]["passed"], "3/3");
}

#[test]
fn binary_runs_the_wall_example() {
    let out = Command::new(env!("CARGO_BIN_EXE_vgit"))
        .args(["mu-pair", "--Y", F6, "--H", "x0", "--t", "49/100", "--lambda", "6,-1,-1,-1,-1,-1,-1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("mu_pair: -3/50\n"));
    let bad = Command::new(env!("CARGO_BIN_EXE_vgit")).arg("jring").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
