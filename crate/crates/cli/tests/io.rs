use std::fs;
use std::path::{Path, PathBuf};

use proptest::prelude::*;
use tsetlin_cli::data::{load_training, load_with_schema};
use tsetlin_cli::experiment::{median, prepare};
use tsetlin_cli::model_file::{ModelFile, FORMAT_VERSION};
use tsetlin_cli::CliError;
use tsetlin_core::trainer::fit;
use tsetlin_core::TmConfig;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn iris_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/iris.csv")
}

#[test]
fn labels_map_to_sorted_ids() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "d.csv", "a,b,kind\n1,2,zeta\n3,4,alpha\n5,6,zeta\n");
    let t = load_training(&p, None).unwrap();
    assert_eq!(t.label_column, "kind");
    assert_eq!(t.raw.feature_names, vec!["a", "b"]);
    assert_eq!(t.raw.class_names, vec!["alpha", "zeta"]);
    assert_eq!(t.raw.labels, vec![1, 0, 1]);
    assert_eq!(t.raw.rows[1], vec![3.0, 4.0]);

    // with `a` as the label, `kind` becomes a feature column
    assert!(matches!(
        load_training(&p, Some("a")),
        Err(CliError::NotNumeric { row: 1, ref column, .. }) if column == "kind"
    ));
}

#[test]
fn ingestion_errors_are_distinct() {
    let dir = tempfile::tempdir().unwrap();
    let header_only = write(dir.path(), "h.csv", "a,b,y\n");
    assert!(matches!(
        load_training(&header_only, None),
        Err(CliError::EmptyFile { .. })
    ));
    let empty = write(dir.path(), "e.csv", "");
    assert!(matches!(load_training(&empty, None), Err(CliError::EmptyFile { .. })));

    let bad = write(dir.path(), "b.csv", "a,b,y\n1,2,p\n3,oops,q\n");
    match load_training(&bad, None) {
        Err(CliError::NotNumeric { row, column, value, .. }) => {
            assert_eq!((row, column.as_str(), value.as_str()), (2, "b", "oops"));
        }
        other => panic!("{other:?}"),
    }
    let e = load_training(&bad, Some("missing")).unwrap_err();
    assert!(matches!(e, CliError::MissingColumn { ref column, .. } if column == "missing"));
    assert!(e.to_string().contains("missing"));

    let missing = load_training(&dir.path().join("nope.csv"), None).unwrap_err();
    assert!(matches!(missing, CliError::Read { .. }));
    assert_eq!(missing.exit_code(), 2);
}

#[test]
fn schema_loading_reorders_columns_and_checks_labels() {
    let dir = tempfile::tempdir().unwrap();
    let names = vec!["a".to_owned(), "b".to_owned()];
    let classes = vec!["n".to_owned(), "p".to_owned()];
    let p = write(dir.path(), "s.csv", "y,b,a\np,2,1\nn,4,3\n");
    let r = load_with_schema(&p, &names, "y", &classes).unwrap();
    assert_eq!(r.rows, vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
    assert_eq!(r.labels, Some(vec![1, 0]));

    let unlabelled = write(dir.path(), "u.csv", "a,b\n1,2\n");
    assert_eq!(
        load_with_schema(&unlabelled, &names, "y", &classes).unwrap().labels,
        None
    );

    let unknown = write(dir.path(), "k.csv", "a,b,y\n1,2,maybe\n");
    assert!(matches!(
        load_with_schema(&unknown, &names, "y", &classes),
        Err(CliError::UnknownClass { row: 1, .. })
    ));
    let narrow = write(dir.path(), "n.csv", "a,y\n1,p\n");
    assert!(matches!(
        load_with_schema(&narrow, &names, "y", &classes),
        Err(CliError::MissingColumn { .. })
    ));
}

fn iris_model(seed: u64, epochs: usize) -> ModelFile {
    let t = load_training(&iris_path(), None).unwrap();
    let p = prepare(&t.raw, 0.2, 4, seed).unwrap();
    let cfg = TmConfig {
        clauses: 20,
        epochs,
        seed,
        ..TmConfig::default()
    };
    let (clf, _) = fit(&p.train, &cfg).unwrap();
    ModelFile::new(&cfg, &clf, &p.binarizer, &p.train_raw, &t.label_column)
}

#[test]
fn iris_split_is_stratified_and_encodes_sixteen_bits() {
    let t = load_training(&iris_path(), None).unwrap();
    assert_eq!(t.raw.len(), 150);
    let p = prepare(&t.raw, 0.2, 4, 1).unwrap();
    assert_eq!((p.train.len(), p.test.as_ref().unwrap().len()), (120, 30));
    for c in 0..3 {
        assert_eq!(p.test_raw.labels.iter().filter(|&&l| l == c).count(), 10);
    }
    assert_eq!(p.binarizer.width(), 16);
    assert!(prepare(&t.raw, 1.0, 4, 1).is_err());
}

#[test]
fn model_file_round_trips_and_checks_version() {
    let dir = tempfile::tempdir().unwrap();
    let file = iris_model(2, 3);
    let path = dir.path().join("m.json");
    file.save(&path).unwrap();
    let (loaded, bin, clf) = ModelFile::load(&path).unwrap();
    assert_eq!(loaded, file);
    assert_eq!(clf, file.classifier().unwrap());
    assert_eq!(bin, file.binarizer().unwrap());

    let mut old = file.clone();
    old.version = FORMAT_VERSION + 1;
    let e = ModelFile::from_json(&old.to_json(), &path).unwrap_err();
    assert!(matches!(e, CliError::Version { .. }));
    assert_eq!(e.exit_code(), 3);

    let mut broken = file.clone();
    broken.machines[0].states.pop();
    assert_eq!(
        ModelFile::from_json(&broken.to_json(), &path).unwrap_err().exit_code(),
        3
    );

    let mut out_of_range = file.clone();
    out_of_range.machines[1].states[0] = 2 * out_of_range.machines[1].big_n + 1;
    assert!(matches!(
        ModelFile::from_json(&out_of_range.to_json(), &path),
        Err(CliError::Model { .. })
    ));
    let e = ModelFile::from_json("{\"version\": 1}", &path).unwrap_err();
    assert_eq!(e.exit_code(), 3);
}

#[test]
fn memory_estimate_counts_states_and_weights() {
    let file = iris_model(1, 1);
    let expect: usize = file
        .machines
        .iter()
        .map(|m| serde_json::to_string(&m.states).unwrap().len() + serde_json::to_string(&m.weights).unwrap().len())
        .sum();
    assert_eq!(file.memory_estimate(), expect);
    assert!(expect > 3 * 20 * 32);
}

#[test]
fn median_of_even_and_odd_lists() {
    assert_eq!(median(&[]), None);
    assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
    assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn training_is_reproducible_from_the_seed(seed in 0u64..10_000) {
        prop_assert_eq!(iris_model(seed, 2).to_json(), iris_model(seed, 2).to_json());
    }

    #[test]
    fn thresholds_survive_json(values in proptest::collection::vec(-1e6..1e6f64, 8..40)) {
        let dir = tempfile::tempdir().unwrap();
        let mut text = String::from("v,y\n");
        for (i, v) in values.iter().enumerate() {
            text.push_str(&format!("{v},{}\n", i % 2));
        }
        let path = write(dir.path(), "v.csv", &text);
        let t = load_training(&path, None).unwrap();
        let p = prepare(&t.raw, 0.0, 4, 0).unwrap();
        let cfg = TmConfig { clauses: 2, epochs: 1, ..TmConfig::default() };
        let (clf, _) = fit(&p.train, &cfg).unwrap();
        let file = ModelFile::new(&cfg, &clf, &p.binarizer, &p.train_raw, &t.label_column);
        let (_, bin, _) = ModelFile::from_json(&file.to_json(), &path).unwrap();
        prop_assert_eq!(bin.thresholds(), p.binarizer.thresholds());
    }
}
