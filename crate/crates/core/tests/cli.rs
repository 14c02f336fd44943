use std::fs;
use std::io::BufReader;
use std::path::Path;
use std::process::{Command, Output};

use semantic_chemotaxis::engine::read_trace_dump;
use semantic_chemotaxis::experiment::CSV_FILES;
use semantic_chemotaxis::lattice::Lattice;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semantic-chemotaxis"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.conf");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn thread_count_does_not_change_output() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = write_config(tmp.path(), "horizon = 40\nnutrient_decay_prob = 0.1\n");
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = tmp.path().join(format!("t{threads}"));
        let res = cli(&[
            "--config", &conf, "--preset", "viability_fig3", "--runs", "600", "--seed", "9",
            "--threads", threads, "--out", out.to_str().unwrap(),
        ]);
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
        outputs.push(out);
    }
    for (name, header) in CSV_FILES.iter().map(|f| (f.0, f.1)).chain([("manifest.txt", "")]) {
        let a = fs::read(outputs[0].join(name)).unwrap();
        let b = fs::read(outputs[1].join(name)).unwrap();
        assert_eq!(a, b, "{name} differs");
        assert!(String::from_utf8(a).unwrap().starts_with(header));
    }
}

#[test]
fn seed_changes_output() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = write_config(tmp.path(), "horizon = 30\n");
    let mut csvs = Vec::new();
    for seed in ["1", "2"] {
        let out = tmp.path().join(seed);
        let res = cli(&["--config", &conf, "--runs", "200", "--seed", seed, "--out", out.to_str().unwrap()]);
        assert!(res.status.success());
        csvs.push(fs::read_to_string(out.join("cmi.csv")).unwrap());
    }
    assert_ne!(csvs[0], csvs[1]);
}

#[test]
fn grid_presets_write_one_directory_per_point() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = write_config(tmp.path(), "horizon = 30\n");
    let out = tmp.path().join("te");
    let res = cli(&["--config", &conf, "--preset", "te_vs_viability", "--runs", "100", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    for label in ["kns1", "kns2", "kns3"] {
        for (name, _) in CSV_FILES {
            assert!(out.join(label).join(name).is_file(), "{label}/{name}");
        }
    }
    let manifest = fs::read_to_string(out.join("manifest.txt")).unwrap();
    assert!(manifest.contains("preset = te_vs_viability"));
    assert_eq!(manifest.matches("config_hash = ").count(), 3);
    assert!(manifest.contains("source_rate = 3"));
}

#[test]
fn trace_dump_roundtrips() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = write_config(tmp.path(), "horizon = 15\nlattice_size = 6\nsource_hop = 2\n");
    let out = tmp.path().join("dump");
    let res = cli(&["--config", &conf, "--runs", "7", "--dump-traces", "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let file = fs::File::open(out.join("traces.txt")).unwrap();
    let set = read_trace_dump(BufReader::new(file), Lattice::new(6)).unwrap();
    assert_eq!(set.traces.len(), 7);
    assert!(set.traces.iter().all(|t| t.len() == 16));
}

#[test]
fn bad_config_fails_before_simulating() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("never");
    for (body, key) in [
        ("lattice_size = 1\n", "lattice_size"),
        ("source_hop = 10\n", "source_hop"),
        ("nutrient_decay_prob = 1.5\n", "nutrient_decay_prob"),
        ("receptors = 4\n", "receptors"),
    ] {
        let conf = write_config(tmp.path(), body);
        let res = cli(&["--config", &conf, "--out", out.to_str().unwrap()]);
        assert!(!res.status.success(), "{body}");
        assert!(String::from_utf8_lossy(&res.stderr).contains(key), "{body}");
    }
    let res = cli(&["--runs", "0", "--out", out.to_str().unwrap()]);
    assert!(!res.status.success());
    assert!(!out.exists());
}

#[test]
fn unknown_preset_is_rejected() {
    let res = cli(&["--preset", "figure9"]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("viability_fig3"));
}
