use maboost::data::{self, read_csv, read_libsvm};
use maboost::{Dataset, Error, Subset};

#[test]
fn csv_round_trip_is_bit_exact() {
    let ds = data::gen_noisy(11, 64, 0.2).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("noisy.csv");
    ds.save_csv(&path).unwrap();
    let back = data::load_csv(&path, "label", None).unwrap();
    assert_eq!(back, ds);
}

#[test]
fn csv_round_trip_keeps_subsets() {
    let a = data::gen_blobs(1, 6, 0.3).unwrap();
    let b = data::gen_blobs(2, 4, 0.3).unwrap();
    let a = a.clone().with_subsets(vec![Subset::A; 6]).unwrap();
    let b = b.clone().with_subsets(vec![Subset::B; 4]).unwrap();
    let ds = a.concat(&b).unwrap();
    let mut buf = Vec::new();
    ds.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("label,f1,f2,subset\n"));
    assert_eq!(read_csv(&buf[..], "label", Some("subset")).unwrap(), ds);
}

#[test]
fn libsvm_agrees_with_csv() {
    let csv = "label,f1,f2,f3\n1,0.5,0,2\n-1,0,-1.25,0\n1,3,0,0\n";
    let svm = "+1 1:0.5 3:2\n-1 2:-1.25 # trailing comment\n\n1 1:3\n";
    let from_csv = read_csv(csv.as_bytes(), "label", None).unwrap();
    let from_svm = read_libsvm(svm.as_bytes()).unwrap();
    assert_eq!(from_csv, from_svm);
}

#[test]
fn zero_one_labels_map_to_signs() {
    let ds = read_csv("y,x\n0,1\n1,2\n".as_bytes(), "y", None).unwrap();
    assert_eq!(ds.labels(), &[-1.0, 1.0]);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let bad_label = read_csv("label,f1\n1,0.5\n2,0.1\n".as_bytes(), "label", None);
    assert!(
        matches!(bad_label, Err(Error::Parse { line: 3, .. })),
        "{bad_label:?}"
    );
    let bad_value = read_csv("label,f1\n1,abc\n".as_bytes(), "label", None);
    assert!(matches!(bad_value, Err(Error::Parse { line: 2, .. })));
    let missing = read_csv("label,f1\n1,0.5\n".as_bytes(), "target", None);
    assert!(matches!(missing, Err(Error::Parse { line: 1, .. })));
    let bad_index = read_libsvm("1 0:1.0\n".as_bytes());
    assert!(matches!(bad_index, Err(Error::Parse { line: 1, .. })));
    let repeated = read_libsvm("1 1:1\n-1 2:1 2:3\n".as_bytes());
    assert!(matches!(repeated, Err(Error::Parse { line: 2, .. })));
    let bad_subset = read_csv("label,f1,s\n1,0.5,C\n".as_bytes(), "label", Some("s"));
    assert!(matches!(bad_subset, Err(Error::Parse { line: 2, .. })));
}

#[test]
fn generators_are_reproducible() {
    assert_eq!(
        data::gen_blobs(3, 50, 0.2).unwrap(),
        data::gen_blobs(3, 50, 0.2).unwrap()
    );
    assert_ne!(
        data::gen_blobs(3, 50, 0.2).unwrap(),
        data::gen_blobs(4, 50, 0.2).unwrap()
    );
    let noisy = data::gen_noisy(5, 100, 0.1).unwrap();
    let clean = data::gen_blobs(5, 100, data::DEFAULT_MARGIN).unwrap();
    let flipped = (0..100)
        .filter(|&i| noisy.label(i) != clean.label(i))
        .count();
    assert_eq!(flipped, 10);
}

#[test]
fn blobs_are_separated_by_margin() {
    let ds: Dataset = data::gen_blobs(8, 200, 0.3).unwrap();
    for i in 0..ds.n() {
        assert!(ds.label(i) * ds.feature(i, 0) >= 0.3);
    }
}
