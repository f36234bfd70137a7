//! End-to-end tests of the binary: corpus self-verification, report
//! structure, round-trips and exit codes.

use std::process::Command;

use tmf_cli::corpus;
use tmf_cli::session::Session;
use tmf_core::gbasis::AlgebraView;

fn tmf(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tmf"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    (out.status.code().unwrap_or(-1), stdout)
}

#[test]
fn every_corpus_session_self_verifies() {
    for name in corpus::names() {
        let (code, out) = tmf(&["example", "run", name]);
        assert_eq!(code, 0, "{name} exited {code}:\n{out}");
        assert!(!out.contains("\"ok\":false"), "{name} had a failing verdict:\n{out}");
    }
}

#[test]
fn corpus_sessions_round_trip_byte_identically() {
    for name in corpus::names() {
        let s = Session::parse(corpus::lookup(name).unwrap()).unwrap();
        let text = s.serialize();
        let again = Session::parse(&text).unwrap().serialize();
        assert_eq!(text, again, "serializer not stable on {name}");
    }
}

#[test]
fn sklyanin_relations_parse_term_exactly() {
    let s = Session::parse(corpus::lookup("sklyanin").unwrap()).unwrap();
    let gens = s.algebra.generators();
    let r1 = &s.rel_exprs[0];
    // y*z + z*y - x^2, term for term
    assert_eq!(r1.num_terms(), 3);
    let term = |names: &[&str]| {
        let letters: Vec<u8> = names
            .iter()
            .map(|n| gens.iter().position(|g| &g.name == n).unwrap() as u8)
            .collect();
        tmf_core::freealg::Word::from_letters(letters, gens)
    };
    assert_eq!(r1.coeff(&term(&["y", "z"])), Some(&s.field.from_int(1)));
    assert_eq!(r1.coeff(&term(&["z", "y"])), Some(&s.field.from_int(1)));
    assert_eq!(r1.coeff(&term(&["x", "x"])), Some(&s.field.from_int(-1)));
    // the free algebra keeps x*y - y*x nonzero
    let diff = tmf_core::freealg::NcPoly::monomial(s.field.one(), term(&["x", "y"]))
        .sub(&tmf_core::freealg::NcPoly::monomial(s.field.one(), term(&["y", "x"])))
        .unwrap();
    assert!(!diff.is_zero());
}

#[test]
fn detect_period_golden_output() {
    let (code, out) = tmf(&["detect-period", "T", "--pmax", "8", "--example", "ore-n3"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("\"record\":\"period\",\"subject\":\"T\",\"period\":3,\"shift\":6"),
        "unexpected period record:\n{out}"
    );
}

#[test]
fn verify_tmf_reports_identity() {
    let (code, out) = tmf(&["verify-tmf", "T", "--example", "sklyanin"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"name\":\"tmf.verify\""));
    assert!(out.contains("\"ok\":true"));
}

#[test]
fn resolve_prints_betti_table() {
    let (code, out) =
        tmf(&["resolve", "k", "--f", "g", "--hmax", "4", "--tmax", "8", "--example", "sklyanin"]);
    assert_eq!(code, 0);
    assert!(out.contains("[[0],[1,1,1],[2,2,2,3],[3,4,4,4],[5,5,5,6]]"), "{out}");
}

#[test]
fn heisenberg_resolve_matches_koszul() {
    let (code, out) = tmf(&[
        "resolve",
        "k",
        "--hmax",
        "5",
        "--tmax",
        "8",
        "--example",
        "heisenberg-n2",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("[[0],[1,1,1,1],[2,2,2,2,2,2],[3,3,3,3],[4]]"), "{out}");
}

#[test]
fn negative_verdict_exits_one() {
    let (code, out) = tmf(&["detect-period", "T", "--pmax", "12", "--example", "ore-nonperiodic"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("\"period\":null"));
}

#[test]
fn truncation_limit_exits_two() {
    let (code, out) =
        tmf(&["resolve", "k", "--f", "g", "--hmax", "8", "--tmax", "40", "--example", "sklyanin"]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("\"record\":\"truncation\""));
}

#[test]
fn input_errors_exit_three() {
    let (code, _) = tmf(&["check-normal", "nosuch", "--example", "sklyanin"]);
    assert_eq!(code, 3);
    let (code, _) = tmf(&["verify-tmf", "T", "--example", "no-such-example"]);
    assert_eq!(code, 3);
}

#[test]
fn zhang_command_reports_transport() {
    let (code, out) = tmf(&[
        "zhang",
        "--auto",
        "zeta",
        "--f",
        "f",
        "--transport",
        "T",
        "--example",
        "ore-zhang",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"name\":\"zhang.central\""));
    assert!(out.contains("\"name\":\"zhang.transport\""));
    let period_line = out
        .lines()
        .find(|l| l.contains("\"record\":\"period\""))
        .expect("period record present");
    let v: serde_json::Value = serde_json::from_str(period_line).unwrap();
    assert!(v["period"].as_u64().unwrap() <= 2);
}

#[test]
fn extract_command_round_trips_ore() {
    let (code, out) = tmf(&[
        "extract-tmf",
        "M",
        "--f",
        "f",
        "--tmax",
        "8",
        "--example",
        "ore-n3",
    ]);
    // module M is not declared in the session: input error
    assert_eq!(code, 3, "{out}");
    // the trivial module has ambient projective dimension 2, a negative verdict
    let (code, out) = tmf(&[
        "extract-tmf",
        "k",
        "--f",
        "f",
        "--tmax",
        "8",
        "--example",
        "ore-n3",
    ]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("projective dimension exceeds 1"));
}

#[test]
fn pipeline_reports_syzygy_index() {
    let (code, out) = tmf(&[
        "pipeline",
        "k",
        "--f",
        "g",
        "--dim",
        "3",
        "--tmax",
        "8",
        "--example",
        "sklyanin",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"name\":\"syzygy_index\",\"record\":\"value\",\"value\":2"), "{out}");
}

#[test]
fn unroll_reports_modules() {
    let (code, out) = tmf(&["unroll", "T", "--steps", "6", "--example", "ore-n3"]);
    assert_eq!(code, 0);
    assert!(out.contains("composites"));
    assert!(out.contains("\"record\":\"betti\""));
}

#[test]
fn roundtrip_command() {
    for name in ["sklyanin", "ore-n3", "invariant-n3-j2"] {
        let (code, out) = tmf(&["roundtrip", "--example", name]);
        assert_eq!(code, 0, "{out}");
    }
}

#[test]
fn cone_and_homotopy_commands() {
    // the cone of the identity verifies (exit 0)…
    let (code, out) = tmf(&["cone", "Id", "--example", "ore-n3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"name\":\"cone.verify\""));
    assert!(out.contains("\"value\":4"), "cone has rank 4: {out}");
    // …while the identity on a reduced factorization is not null homotopic
    // (a negative verdict, exit 1)
    let (code, out) = tmf(&["homotopy", "Id", "--example", "ore-n3"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("infeasible"));
}

#[test]
fn session_files_load_from_disk() {
    let dir = std::env::temp_dir().join("tmf-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("plane.session");
    std::fs::write(
        &path,
        "field Q;\nbound degree 6;\ngens x:1 y:1;\nrel y*x - x*y;\nelem f = x^2;\nmodule k = trivial;\n",
    )
    .unwrap();
    let (code, out) = tmf(&["check-normal", "f", "--session", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"name\":\"normal\""));
}

#[test]
fn reports_are_deterministic() {
    // identical inputs and bounds give identical verdict streams; only the
    // timing record may differ
    let strip_timing = |out: &str| -> Vec<String> {
        out.lines()
            .filter(|l| !l.contains("\"record\":\"timing\""))
            .map(|l| l.to_string())
            .collect()
    };
    for args in [
        vec!["detect-period", "T", "--pmax", "8", "--example", "ore-n3"],
        vec!["resolve", "k", "--f", "g", "--hmax", "4", "--tmax", "8", "--example", "sklyanin"],
        vec!["example", "run", "invariant-n3-j2"],
    ] {
        let (c1, o1) = tmf(&args);
        let (c2, o2) = tmf(&args);
        assert_eq!(c1, c2);
        assert_eq!(strip_timing(&o1), strip_timing(&o2), "nondeterministic output for {args:?}");
    }
}

#[test]
fn example_list_names_everything() {
    let (code, out) = tmf(&["example", "list"]);
    assert_eq!(code, 0);
    for name in corpus::names() {
        assert!(out.contains(name));
    }
}
