use std::path::{Path, PathBuf};
use std::process::Command as Process;

use morsepoly::chain_index::verify_representation;
use morsepoly_cli::{execute, verify_report, Command, Format, GenKind, Inputs, Loaded, RunConfig};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

/// Runs the real binary and returns (stdout, exit code).
fn bin(args: &[&str]) -> (String, i32) {
    let out = Process::new(env!("CARGO_BIN_EXE_morsepoly"))
        .args(args)
        .current_dir(data(""))
        .output()
        .unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn golden_outputs() {
    let cases: &[(&[&str], &str)] = &[
        (
            &["verify", "--in", "data/edge.json", "--morse", "data/edge_morse.json"],
            "golden/verify_edge.json",
        ),
        (&["check", "--in", "data/chain.json"], "golden/check_chain.json"),
        (
            &[
                "classify",
                "--in",
                "data/chain.json",
                "--morse",
                "data/chain_morse.json",
            ],
            "golden/classify_chain.json",
        ),
        (&["euler", "--in", "data/triangle.json"], "golden/euler_triangle.json"),
        (&["index", "--in", "data/triangle.json"], "golden/index_triangle.json"),
        (
            &["gen", "--seed", "1", "--vertices", "4", "--dim", "2"],
            "golden/gen_seed1.json",
        ),
    ];
    for (args, golden) in cases {
        let (out, code) = bin(args);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(out, read(golden), "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        bin(&["verify", "--in", "data/chain.json", "--morse", "data/chain_morse.json"]).1,
        2
    );
    assert_eq!(bin(&["check", "--in", "data/chain.json"]).1, 0);
    assert_eq!(bin(&["check", "--in", "data/chain.json", "--strict"]).1, 1);
    assert_eq!(bin(&["check", "--in", "data/triangle.json", "--strict"]).1, 0);
    assert_eq!(bin(&["check", "--in", "missing.json"]).1, 2);
    assert_eq!(bin(&["index", "--in", "data/edge_morse.json"]).1, 2);
    assert_eq!(bin(&["check", "--in", "data/edge.json", "--format", "csv"]).1, 2);
    // no rank function to fall back on
    assert_eq!(bin(&["verify", "--in", "data/parity_conflict.json"]).1, 2);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("morsepoly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("emb.csv");
    let (stdout, code) = bin(&[
        "embed",
        "--in",
        "data/edge.json",
        "--morse",
        "data/edge_morse.json",
        "--format",
        "csv",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!((stdout.as_str(), code), ("", 0));
    assert_eq!(
        std::fs::read_to_string(&target).unwrap(),
        "element,coord_1,coord_2,coord_3\na,0,1,0\nb,2,0,1\ne,1,0,0\n"
    );
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn cli_report_equals_library_report() {
    let loaded = Loaded::parse(&read("data/edge.json")).unwrap();
    let f = loaded.morse(Some(&read("data/edge_morse.json"))).unwrap();
    let lib = verify_representation(&loaded.poset, &f).unwrap();
    let mut cfg = RunConfig::new(Command::Index);
    let inputs = Inputs {
        input: Some(read("data/edge.json")),
        morse: Some(read("data/edge_morse.json")),
    };
    let out = execute(&cfg, &inputs).unwrap();
    let cli: serde_json::Value = serde_json::from_str(&out.output).unwrap();
    assert_eq!(cli, serde_json::to_value(&lib.report).unwrap());

    cfg.command = Command::Verify;
    let full: serde_json::Value = serde_json::from_str(&execute(&cfg, &inputs).unwrap().output).unwrap();
    assert_eq!(
        full,
        serde_json::to_value(verify_report(&loaded.poset, &f).unwrap()).unwrap()
    );
}

#[test]
fn normalize_output_reads_back_as_a_function() {
    let cfg = RunConfig::new(Command::Normalize);
    let inputs = Inputs {
        input: Some(read("data/triangle.json")),
        morse: None,
    };
    let normalized = execute(&cfg, &inputs).unwrap().output;
    let loaded = Loaded::parse(&read("data/triangle.json")).unwrap();
    let g = loaded.morse(Some(&normalized)).unwrap();
    assert!(g.is_injective());

    let verify = execute(
        &RunConfig::new(Command::Verify),
        &Inputs {
            morse: Some(normalized),
            ..inputs
        },
    )
    .unwrap();
    assert_eq!(verify.code, 0);
}

#[test]
fn generated_morse_function_is_accepted() {
    let mut cfg = RunConfig::new(Command::Gen);
    cfg.seed = 5;
    let complex = execute(&cfg, &Inputs::default()).unwrap().output;
    cfg.gen_kind = GenKind::Morse;
    let f = execute(
        &cfg,
        &Inputs {
            input: Some(complex.clone()),
            morse: None,
        },
    )
    .unwrap()
    .output;
    let out = execute(
        &RunConfig::new(Command::Verify),
        &Inputs {
            input: Some(complex),
            morse: Some(f),
        },
    )
    .unwrap();
    assert_eq!(out.code, 0, "{}", out.output);
}

#[test]
fn cellular_stand_in_is_flagged_unverified() {
    let mut cfg = RunConfig::new(Command::Check);
    cfg.format = Format::Text;
    let inputs = Inputs {
        input: Some(read("data/two_squares_cells.json")),
        morse: None,
    };
    let text = execute(&cfg, &inputs).unwrap().output;
    assert!(
        text.contains("2-wide: yes") && text.contains("downward Eulerian: yes"),
        "{text}"
    );
    cfg.format = Format::Json;
    let v: serde_json::Value = serde_json::from_str(&execute(&cfg, &inputs).unwrap().output).unwrap();
    assert_eq!(v["verified_regular_cw"], false);
}

#[test]
fn text_formats_render() {
    let inputs = Inputs {
        input: Some(read("data/triangle.json")),
        morse: None,
    };
    for command in [
        Command::Classify,
        Command::Normalize,
        Command::Index,
        Command::Verify,
        Command::Euler,
    ] {
        let mut cfg = RunConfig::new(command);
        cfg.format = Format::Text;
        let out = execute(&cfg, &inputs).unwrap();
        assert_eq!(out.code, 0);
        assert!(!out.output.trim().is_empty(), "{command:?}");
        assert!(
            serde_json::from_str::<serde_json::Value>(&out.output).is_err(),
            "{command:?} printed JSON"
        );
    }
}
