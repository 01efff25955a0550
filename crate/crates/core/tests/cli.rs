use std::path::PathBuf;

use rephat::cli::{run, CliError, Command, RunConfig};

fn data(name: &str) -> PathBuf {
    format!("{}/data/{name}.quiver", env!("CARGO_MANIFEST_DIR")).into()
}

#[test]
fn validate_reports_gentle() {
    let mut config = RunConfig::new(Command::Validate);
    config.input = Some(data("a2"));
    let o = run(&config).unwrap();
    assert!(o.stdout.contains("gentle: yes"), "{}", o.stdout);
    assert_eq!(o.violations, 0);
}

#[test]
fn artifacts_are_complete_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = RunConfig::new(Command::Strings);
    config.input = Some(data("a3"));
    config.out = Some(dir.path().to_path_buf());
    let o = run(&config).unwrap();
    assert!(!o.artifacts.is_empty());
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        assert!(!name.ends_with(".partial"), "{name}");
    }
    let text = std::fs::read_to_string(dir.path().join(&o.artifacts[0].0)).unwrap();
    assert!(text.starts_with("# rephat"), "{text}");
}

#[test]
fn errors_are_single_lines() {
    let mut config = RunConfig::new(Command::Validate);
    config.input = Some("/nonexistent/input.quiver".into());
    let e = run(&config).unwrap_err();
    assert!(!e.to_string().contains('\n'));

    let mut config = RunConfig::new(Command::Strings);
    config.input = Some(data("a2"));
    config.characteristic = 4;
    assert!(matches!(run(&config), Err(CliError::Config(_))));
    config.characteristic = 0;
    config.window = (0, 1);
    assert!(matches!(run(&config), Err(CliError::Config(_))));
}

#[test]
fn example_matches_golden_file() {
    let mut config = RunConfig::new(Command::Example4);
    config.check = true;
    let o = run(&config).unwrap();
    assert_eq!(o.violations, 0);
    assert!(o.stdout.contains("golden: match"), "{}", o.stdout);
}
