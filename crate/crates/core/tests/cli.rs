use std::fs;
use std::path::Path;
use std::process::Command;

use tempsal::cli::{self, EXIT_DATA, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};
use tempsal::io::{parse_saliency_csv, read_dataset, read_events};

fn run(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("tempsal").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn synth_default(dir: &Path) -> String {
    let p = path(dir, "conv.csv");
    let (code, out, err) = run(&["synth", "--output", &p]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("1218 frames") && out.contains("8 turns"), "{out}");
    p
}

fn saliency_args<'a>(dataset: &'a str, output: &'a str) -> Vec<&'a str> {
    vec![
        "saliency", dataset, "--tfut", "183", "46", "--horizon", "100", "--window", "30", "--stride", "1", "--output",
        output,
    ]
}

#[test]
fn synth_defaults_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let p = synth_default(dir.path());
    let events = read_events(&fs::read_to_string(path(dir.path(), "conv.events.json")).unwrap()).unwrap();
    assert_eq!((events[0].nod_onset_frame, events[0].handover_frame), (138, 183));
    let first = fs::read(&p).unwrap();
    let p2 = path(dir.path(), "again.csv");
    assert_eq!(run(&["synth", "--output", &p2]).0, EXIT_OK);
    assert_eq!(first, fs::read(&p2).unwrap());
    assert_eq!(
        fs::read(path(dir.path(), "conv.events.json")).unwrap(),
        fs::read(path(dir.path(), "again.events.json")).unwrap()
    );
}

#[test]
fn synth_three_participants_has_six_turns() {
    let dir = tempfile::tempdir().unwrap();
    let p = path(dir.path(), "three.csv");
    assert_eq!(run(&["synth", "--participants", "3", "--output", &p]).0, EXIT_OK);
    let events = read_events(&fs::read_to_string(path(dir.path(), "three.events.json")).unwrap()).unwrap();
    assert_eq!(events.len(), 6);
    let (_, seq) = read_dataset(fs::read(&p).unwrap().as_slice()).unwrap();
    assert_eq!(seq.participants(), 3);
}

#[test]
fn synth_config_file_and_bad_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "gen.toml");
    fs::write(&cfg, "participants = 5\nstable_frames = 20\n").unwrap();
    let p = path(dir.path(), "five.csv");
    assert_eq!(run(&["synth", "--config", &cfg, "--stable-frames", "12", "--output", &p]).0, EXIT_OK);
    let (header, seq) = read_dataset(fs::read(&p).unwrap().as_slice()).unwrap();
    assert_eq!(seq.participants(), 5);
    assert_eq!(header.generator.unwrap().stable_frames, 12);

    fs::write(&cfg, "participants = 4\nnod_speed = 2\n").unwrap();
    let (code, _, err) = run(&["synth", "--config", &cfg]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("nod_speed"), "{err}");

    let (code, _, err) = run(&["synth", "--nod-frames", "0", "--output", &p]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("nod_frames"), "{err}");
}

#[test]
fn saliency_rows_peak_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_default(dir.path());
    let a = path(dir.path(), "a.csv");
    let b = path(dir.path(), "b.csv");
    let (code, out, err) = run(&saliency_args(&data, &a));
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("71 windows"), "{out}");
    assert_eq!(run(&saliency_args(&data, &b)).0, EXIT_OK);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let table = parse_saliency_csv(&fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(table.window_starts.len(), 71);
    assert!(table.surprisal.is_none());
    let peak = (0..71).fold(0, |m, j| if table.saliency[j] > table.saliency[m] { j } else { m });
    // First window whose span includes frame 138 starts at 109.
    assert!(table.window_starts[peak].abs_diff(109) <= 2);

    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(path(dir.path(), "a.manifest.json")).unwrap()).unwrap();
    let digest = tempsal::io::sha256_hex(&fs::read(&data).unwrap());
    assert_eq!(manifest["input_digest"], digest.as_str());
    assert_eq!(manifest["saliency"]["window_length"], 30);
    assert_eq!(manifest["conversation"]["participants"], 4);
}

#[test]
fn saliency_config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_default(dir.path());
    let flags = path(dir.path(), "flags.csv");
    let mut args = saliency_args(&data, &flags);
    args.extend(["--scheme", "forward", "--prior", "uniform"]);
    assert_eq!(run(&args).0, EXIT_OK);
    let cfg = path(dir.path(), "run.toml");
    let from_file = path(dir.path(), "file.csv");
    fs::write(
        &cfg,
        format!("tfut = [183, 46]\nhorizon = 100\nwindow = 30\nscheme = \"forward\"\nprior = \"uniform\"\noutput = {from_file:?}\n"),
    )
    .unwrap();
    assert_eq!(run(&["saliency", &data, "--config", &cfg]).0, EXIT_OK);
    let text = fs::read_to_string(&flags).unwrap();
    assert!(text.starts_with("window_start,phi_nats,phi_mean_nats,saliency,surprisal\n"));
    assert_eq!(text, fs::read_to_string(&from_file).unwrap());
}

#[test]
fn saliency_errors_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_default(dir.path());
    let out = path(dir.path(), "s.csv");

    let mut args = saliency_args(&data, &out);
    args[10] = "80";
    let (code, _, err) = run(&args);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("at least 3 windows") && err.contains("gives 1"), "{err}");
    assert!(!Path::new(&out).exists());

    let (code, _, err) = run(&["saliency", &data, "--horizon", "100", "--window", "30"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--tfut"), "{err}");

    let (code, _, _) = run(&saliency_args(&path(dir.path(), "missing.csv"), &out));
    assert_eq!(code, EXIT_DATA);

    let broken = path(dir.path(), "broken.csv");
    let text = fs::read_to_string(&data).unwrap();
    fs::write(&broken, text.replacen("\n0,1,", "\n0,2,", 1)).unwrap();
    let (code, _, err) = run(&saliency_args(&broken, &out));
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("line 4"), "{err}");

    assert_eq!(run(&["saliency"]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn numerical_failures_map_to_exit_three() {
    let window = tempsal::TimeWindow::new(0, 3).unwrap();
    let empty = tempsal::Error::EmptySupport { t_obs: window };
    assert_eq!(cli::exit_code(&empty), EXIT_NUMERICAL);
    let wrapped = tempsal::Error::Forecast { index: 2, window, source: Box::new(empty) };
    assert_eq!(cli::exit_code(&wrapped), EXIT_NUMERICAL);
}

#[test]
fn entropy_command() {
    let dir = tempfile::tempdir().unwrap();
    let spec = path(dir.path(), "g.json");
    fs::write(&spec, r#"{"kind":"diagonal_gaussian","means":[0,0,0],"stds":[1,1,1]}"#).unwrap();
    let (code, out, _) = run(&["entropy", &spec]);
    assert_eq!(code, EXIT_OK);
    let value: f64 = out.lines().next().unwrap().trim_start_matches("entropy_nats: ").parse().unwrap();
    assert!((value - 4.25682).abs() < 1e-5, "{out}");
    assert!(out.contains("method: closed_form") && out.contains("std_error: none"));

    let one = path(dir.path(), "one.json");
    fs::write(
        &one,
        r#"{"kind":"gaussian_mixture","weights":[1.0],"components":[{"kind":"full_gaussian","mean":[1,2],"covariance":[[2,0.5],[0.5,1]]}]}"#,
    )
    .unwrap();
    let (code, out, _) = run(&["entropy", &one, "--method", "gmm-bounds"]);
    assert_eq!(code, EXIT_OK);
    let field = |name: &str| -> f64 {
        out.lines().find_map(|l| l.strip_prefix(name)).unwrap().trim().parse().unwrap()
    };
    assert_eq!(field("lower_nats:"), field("upper_nats:"));

    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let draws: Vec<String> = (0..10_000).map(|_| { let x: f64 = StandardNormal.sample(&mut rng); x.to_string() }).collect();
    let samples = path(dir.path(), "normal.txt");
    fs::write(&samples, draws.join("\n")).unwrap();
    let (code, out, _) = run(&["entropy", &samples, "--method", "knn"]);
    assert_eq!(code, EXIT_OK);
    let h: f64 = out.lines().next().unwrap().trim_start_matches("entropy_nats: ").parse().unwrap();
    assert!((h - 1.418939).abs() <= 0.05, "{out}");

    let bad = path(dir.path(), "bad.json");
    fs::write(&bad, r#"{"kind":"diagonal_gaussian","means":[0],"stds":[0]}"#).unwrap();
    let (code, _, err) = run(&["entropy", &bad]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("stds"), "{err}");

    let (code, _, err) = run(&["entropy", &samples, "--method", "closed-form"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("sample_set"), "{err}");
}

#[test]
fn plot_is_deterministic_and_refuses_empty_tables() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth_default(dir.path());
    let csv = path(dir.path(), "s.csv");
    assert_eq!(run(&saliency_args(&data, &csv)).0, EXIT_OK);
    let a = path(dir.path(), "a.svg");
    let b = path(dir.path(), "b.svg");
    for out in [&a, &b] {
        let (code, _, err) = run(&["plot", &csv, &data, "--participant", "3", "--dims", "qx,qy,speaking", "--output", out]);
        assert_eq!(code, EXIT_OK, "{err}");
    }
    let svg = fs::read_to_string(&a).unwrap();
    assert_eq!(svg, fs::read_to_string(&b).unwrap());
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("fill=\"none\" stroke=\"#444\"").count(), 3);

    let empty = path(dir.path(), "empty.csv");
    fs::write(&empty, "").unwrap();
    let target = path(dir.path(), "never.svg");
    let (code, _, _) = run(&["plot", &empty, &data, "--output", &target]);
    assert_eq!(code, EXIT_DATA);
    assert!(!Path::new(&target).exists());

    fs::write(&empty, "window_start,phi_nats\n0,1\n").unwrap();
    let (code, _, err) = run(&["plot", &empty, &data, "--output", &target]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("phi_mean_nats"), "{err}");

    let (code, _, _) = run(&["plot", &csv, &data, "--dims", "yaw", "--output", &target]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!Path::new(&target).exists());
}

#[test]
fn binary_honours_output_dir_variable() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_tempsal"))
        .args(["synth", "--participants", "3", "--stable-frames", "10"])
        .env(cli::OUTPUT_DIR_ENV, dir.path())
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    assert!(dir.path().join("conversation.csv").exists());
    assert!(dir.path().join("conversation.events.json").exists());

    let status = Command::new(env!("CARGO_BIN_EXE_tempsal")).args(["entropy", "/nonexistent.json"]).output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_DATA as i32));
}
