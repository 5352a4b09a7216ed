mod common;

use common::{code, fixture, psolve, stderr, stdout};
use psolve_core::format::{parse_bhg, print_bhg};
use psolve_testkit::{random_instance, random_pairs_instance, rng, Shape};

const PROOFS: [(&str, &str); 4] = [
    ("cnf_example.bhg", "cnf_example_ef.prf"),
    ("cnf_example.bhg", "cnf_example_fe.prf"),
    ("cnf_example.bhg", "cnf_example_alt.prf"),
    ("list_coloring.bhg", "list_coloring.prf"),
];

#[test]
fn decide_examples() {
    let dir = tempfile::tempdir().unwrap();
    let proof = dir.path().join("out.prf");
    let out = psolve([
        "decide".as_ref(),
        fixture("cnf_example.bhg").as_os_str(),
        "--method".as_ref(),
        "resolution".as_ref(),
        "--strategy".as_ref(),
        "ef".as_ref(),
        "--proof".as_ref(),
        proof.as_os_str(),
    ]);
    assert_eq!(code(&out), 1);
    let text = std::fs::read_to_string(&proof).unwrap();
    assert!(text.starts_with("mode: E-over-F\n"));
    assert_eq!(text.lines().count(), 1 + 5);

    let out = psolve(["decide".as_ref(), fixture("empty.bhg").as_os_str()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("X = {}"));

    let out = psolve([
        "decide".as_ref(),
        fixture("list_coloring.bhg").as_os_str(),
        "--method".as_ref(),
        "oracle".as_ref(),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn check_examples() {
    for (instance, proof) in PROOFS {
        let out = psolve([
            "check".as_ref(),
            fixture(instance).as_os_str(),
            fixture(proof).as_os_str(),
        ]);
        assert_eq!(code(&out), 0, "{proof}: {}", stdout(&out));
    }
}

/// Swapping the pivot of any step for another label is caught at that step.
#[test]
fn corrupted_pivots_name_the_step() {
    let dir = tempfile::tempdir().unwrap();
    for (instance, proof) in PROOFS {
        let b = parse_bhg(&std::fs::read_to_string(fixture(instance)).unwrap()).unwrap();
        let labels: Vec<&str> = b
            .e()
            .labels()
            .iter()
            .chain(b.f().labels())
            .map(String::as_str)
            .collect();
        let text = std::fs::read_to_string(fixture(proof)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let mut caught = 0;
        for (i, line) in lines.iter().enumerate().skip(1) {
            let (head, pivot) = line.rsplit_once("/ ").unwrap();
            let id = line.split(':').next().unwrap();
            for &other in labels.iter().filter(|&&l| l != pivot) {
                let mut corrupted = lines.clone();
                let replaced = format!("{head}/ {other}");
                corrupted[i] = &replaced;
                let path = dir.path().join("bad.prf");
                std::fs::write(&path, corrupted.join("\n")).unwrap();
                let out = psolve([
                    "check".as_ref(),
                    fixture(instance).as_os_str(),
                    path.as_os_str(),
                ]);
                if code(&out) == 1 {
                    assert!(
                        stdout(&out).contains(&format!("step {id}:")),
                        "{proof} {id}: {}",
                        stdout(&out)
                    );
                    caught += 1;
                } else {
                    assert_eq!(code(&out), 0);
                }
            }
        }
        assert!(caught > 0, "{proof}");
    }
}

#[test]
fn check_rejects_truncated_and_forward_proofs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.prf");
    std::fs::write(&path, "mode: E-over-F\n7: p -q <- 2, 3 / C\n").unwrap();
    let out = psolve([
        "check".as_ref(),
        fixture("cnf_example.bhg").as_os_str(),
        path.as_os_str(),
    ]);
    assert_eq!(code(&out), 1);

    std::fs::write(&path, "mode: E-over-F\n7: p <- 8 / A\n8: p <- 1 / A\n").unwrap();
    let out = psolve([
        "check".as_ref(),
        fixture("cnf_example.bhg").as_os_str(),
        path.as_os_str(),
    ]);
    assert_eq!(code(&out), 65);
    assert!(stderr(&out).contains("line 2"));
}

#[test]
fn encode_examples() {
    let dir = tempfile::tempdir().unwrap();
    let run = |kind: &str, input: &str| -> String {
        let out_path = dir.path().join(format!("{input}.bhg"));
        let out = psolve([
            "encode".as_ref(),
            kind.as_ref(),
            fixture(input).as_os_str(),
            "-o".as_ref(),
            out_path.as_os_str(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        std::fs::read_to_string(out_path).unwrap()
    };
    let count = |text: &str, prefix: &str| text.lines().filter(|l| l.starts_with(prefix)).count();

    let cnf = run("cnf", "cnf_example.cnf");
    assert_eq!((count(&cnf, "e "), count(&cnf, "f ")), (6, 3));

    let tri = run("coloring", "triangle.graph");
    assert_eq!(
        (count(&tri, "v "), count(&tri, "e "), count(&tri, "f ")),
        (9, 3, 9)
    );

    let ladder = run("listcoloring", "ladder_lists.graph");
    assert_eq!(
        (
            count(&ladder, "v "),
            count(&ladder, "e "),
            count(&ladder, "f ")
        ),
        (12, 6, 8)
    );

    run("sdr", "shared_singleton.sdr");
    let out = psolve([
        "decide".as_ref(),
        dir.path().join("shared_singleton.sdr.bhg").as_os_str(),
    ]);
    assert_eq!(code(&out), 1);

    let out = psolve([
        "encode".as_ref(),
        "coloring".as_ref(),
        fixture("ladder_lists.graph").as_os_str(),
    ]);
    assert_eq!(code(&out), 64);
    let out = psolve([
        "encode".as_ref(),
        "sdr".as_ref(),
        fixture("cnf_example.cnf").as_os_str(),
    ]);
    assert_eq!(code(&out), 65);
    assert!(stderr(&out).contains("line 1"));
}

#[test]
fn analyze_examples() {
    let out = psolve(["analyze".as_ref(), fixture("weight.bhg").as_os_str()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("weight_sum: HasS (sum = 1/4"));

    let out = psolve([
        "analyze".as_ref(),
        fixture("cnf_example.bhg").as_os_str(),
        "--json".as_ref(),
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let verdicts: Vec<&str> = doc["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["verdict"].as_str().unwrap())
        .collect();
    assert_eq!(verdicts, ["Unknown"; 3]);

    let out = psolve(["analyze".as_ref(), fixture("all_pairs3.bhg").as_os_str()]);
    assert!(stdout(&out).contains("all_large_subsets: FailsS"));
    let out = psolve(["oracle".as_ref(), fixture("all_pairs3.bhg").as_os_str()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn json_is_deterministic_with_sorted_keys() {
    for args in [
        vec!["decide", "--json", "--method", "resolution"],
        vec!["decide", "--json", "--method", "search"],
        vec!["oracle", "--json", "--count"],
        vec!["analyze", "--json"],
    ] {
        for instance in ["cnf_example.bhg", "weight.bhg", "empty.bhg"] {
            let mut full: Vec<std::ffi::OsString> = args.iter().map(Into::into).collect();
            full.insert(1, fixture(instance).into_os_string());
            let a = psolve(&full);
            let b = psolve(&full);
            assert_eq!(a.stdout, b.stdout);
            let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
            let reprinted = serde_json::to_string_pretty(&doc).unwrap() + "\n";
            assert_eq!(
                reprinted.as_bytes(),
                a.stdout.as_slice(),
                "keys not in canonical order"
            );
        }
    }
}

#[test]
fn json_decide_document() {
    let out = psolve([
        "decide".as_ref(),
        fixture("cnf_example.bhg").as_os_str(),
        "--json".as_ref(),
        "--method".as_ref(),
        "resolution".as_ref(),
        "--strategy".as_ref(),
        "fe".as_ref(),
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verdict"], "FailsS");
    assert_eq!(doc["witness"]["refutation"]["mode"], "F-over-E");
    let steps = doc["witness"]["refutation"]["steps"].as_array().unwrap();
    assert_eq!(steps.last().unwrap()["conclusion"], serde_json::json!([]));
    assert!(doc["stats"]["closure"]["generated"].as_u64().unwrap() > 0);
}

#[test]
fn exit_codes_depend_only_on_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("i.bhg");
    let mut r = rng(5);
    for i in 0..60 {
        let b = if i % 2 == 0 {
            random_pairs_instance(&mut r, 6, 5, 5)
        } else {
            random_instance(
                &mut r,
                Shape {
                    max_vertices: 6,
                    max_sets: 4,
                    max_size: 2,
                },
            )
        };
        std::fs::write(&path, print_bhg(&b)).unwrap();
        let codes: Vec<i32> = ["search", "resolution", "2sat", "oracle"]
            .iter()
            .map(|m| {
                code(&psolve([
                    "decide".as_ref(),
                    path.as_os_str(),
                    "--method".as_ref(),
                    m.as_ref(),
                ]))
            })
            .collect();
        assert!(
            codes.iter().all(|&c| c == codes[0]),
            "{codes:?} on\n{}",
            print_bhg(&b)
        );
        assert!(codes[0] <= 1);
    }
}

#[test]
fn every_written_proof_rechecks() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("i.bhg");
    let proof = dir.path().join("i.prf");
    let mut r = rng(9);
    let mut checked = 0;
    for i in 0..80 {
        let b = random_instance(
            &mut r,
            Shape {
                max_vertices: 7,
                max_sets: 6,
                max_size: 3,
            },
        );
        std::fs::write(&path, print_bhg(&b)).unwrap();
        let _ = std::fs::remove_file(&proof);
        let strategy = ["ef", "fe", "alt:1", "alt:2"][i % 4];
        let out = psolve([
            "decide".as_ref(),
            path.as_os_str(),
            "--strategy".as_ref(),
            strategy.as_ref(),
            "--proof".as_ref(),
            proof.as_os_str(),
        ]);
        if code(&out) == 1 {
            let out = psolve(["check".as_ref(), path.as_os_str(), proof.as_os_str()]);
            assert_eq!(code(&out), 0, "{}", stdout(&out));
            checked += 1;
        } else {
            assert!(!proof.exists());
        }
    }
    assert!(checked > 5);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&psolve(["frobnicate"])), 64);
    assert_eq!(code(&psolve(["decide"])), 64);
    assert_eq!(code(&psolve(["--help"])), 0);
    let out = psolve([
        "decide".as_ref(),
        fixture("cnf_example.bhg").as_os_str(),
        "--strategy".as_ref(),
        "alt:x".as_ref(),
    ]);
    assert_eq!(code(&out), 64);
    assert_eq!(code(&psolve(["decide", "/definitely/missing.bhg"])), 66);
}

#[test]
fn limits_report_indeterminate() {
    let out = psolve([
        "decide".as_ref(),
        fixture("cnf_example.bhg").as_os_str(),
        "--method".as_ref(),
        "resolution".as_ref(),
        "--max-sets".as_ref(),
        "2".as_ref(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("limit"));

    let out = std::process::Command::new(env!("CARGO_BIN_EXE_psolve"))
        .args([
            "decide".as_ref(),
            fixture("cnf_example.bhg").as_os_str(),
            "--method".as_ref(),
            "resolution".as_ref(),
        ])
        .env("PSOLVE_MAX_SETS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);

    let out = psolve([
        "decide".as_ref(),
        fixture("cnf_example.bhg").as_os_str(),
        "--method".as_ref(),
        "2sat".as_ref(),
    ]);
    assert_eq!(code(&out), 2);
}
