use bureau::cli::{run, Cli, Outcome};
use clap::Parser;

fn go(args: &[&str]) -> Outcome {
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let cli = Cli::try_parse_from(std::iter::once("bureau".to_string()).chain(argv.clone())).unwrap();
    run(&cli, &argv).unwrap()
}

#[test]
fn surface_type_of_v() {
    let o = go(&["surface-type", "V"]);
    assert!(o.ok);
    assert_eq!(o.report["result"]["label"], "E8(1)");
    assert_eq!(o.report["result"]["deltas"].as_array().unwrap().len(), 9);
    assert!(o.files[0].1.starts_with("graph \"V\""));
}

#[test]
fn ixb3_to_xiii_pair_verifies() {
    let o = go(&["verify-map", "--fixture", "IX.B(3) -> XIII"]);
    assert!(o.ok, "{}", o.text);
    assert_eq!(o.report["result"]["transport"]["ok"], true);
    assert_eq!(o.report["result"]["inverse"]["composes"], true);
}

#[test]
fn chiba_polytope_of_ixb2() {
    let o = go(&["newton", "--chiba", "IX.B(2)"]);
    assert_eq!(o.report["result"]["polygon"]["genus"], 0);
    assert_eq!(o.report["result"]["polygon"]["area"], "1");
}

#[test]
fn map_file_with_wrong_map_fails() {
    let dir = std::env::temp_dir().join(format!("bureau-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("flip.map");
    std::fs::write(&path, "first = -y\nsecond = z\ninverse first = -y\ninverse second = z\n").unwrap();
    let o = go(&["verify-map", path.to_str().unwrap(), "--from", "V", "--to", "V"]);
    assert!(!o.ok);
    assert_eq!(o.report["result"]["inverse"]["composes"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn hamiltonian_with_factor() {
    let o = go(&["hamiltonian", "IX.B(2)", "--factor", "z/36"]);
    assert!(o.ok);
    assert_eq!(o.report["result"]["standard"], false);
    assert_eq!(o.report["result"]["hamiltonian"], "-1/72*y^2*z^2 + 1/108*z^3 + 1/6*z^2*q");
}

#[test]
fn free_coefficient_gives_condition() {
    let o = go(&["regularize", "V", "--free", "f"]);
    assert_eq!(o.report["result"]["tree"]["conditions"], serde_json::json!(["f''"]));
}

#[test]
fn iterate_reports_the_match() {
    let o = go(&["iterate", "IX.B(5)", "--passes", "2"]);
    let nodes = o.report["result"]["nodes"].as_array().unwrap();
    assert!(nodes.iter().any(|n| n["match"]["id"] == "IX.B(2)" && n["match"]["scaling"] == serde_json::json!(["-1/2", "-1/2"])));
}

#[test]
fn machine_reports_are_reproducible() {
    for args in [&["regularize", "XIV"][..], &["surface-type", "XIII"], &["fixtures"]] {
        let a = serde_json::to_string(&go(args).report).unwrap();
        let b = serde_json::to_string(&go(args).report).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn fixtures_command_fails_on_known_discrepancies() {
    assert!(!go(&["fixtures"]).ok);
}

#[test]
fn unknown_system_is_an_error() {
    let cli = Cli::try_parse_from(["bureau", "regularize", "/nonexistent/system"]).unwrap();
    assert!(run(&cli, &[]).is_err());
}
