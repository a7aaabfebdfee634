use hartree_core::io::fmt_g17;
use hartree_harness::config::Comparator;
use hartree_harness::experiments::ErrorRow;
use hartree_harness::output::{write_csv, CsvRow};
use proptest::prelude::*;

proptest! {
    #[test]
    fn csv_numbers_reparse_exactly(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        let s = fmt_g17(x);
        prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}

#[test]
fn error_table_round_trip() {
    let rows = vec![
        ErrorRow {
            epsilon: 1.0 / 64.0,
            time: std::f64::consts::FRAC_PI_4,
            comparator: Comparator::Linear,
            l2: 0.1 + 0.2,
            j: 1.0 / 3.0,
            h: 2f64.sqrt(),
            rel_l2: 1e-300,
            status: "ok".into(),
        },
        ErrorRow {
            epsilon: 0.125,
            time: 0.0,
            comparator: Comparator::Wkb,
            l2: f64::NAN,
            j: f64::NAN,
            h: f64::NAN,
            rel_l2: f64::NAN,
            status: "failed: grid too coarse".into(),
        },
    ];
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), ErrorRow::HEADER);
    assert!(ErrorRow::HEADER.starts_with("epsilon,time,comparator,l2_error,j_error,h_error"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[2], "linear");
    let nums: Vec<f64> = [0, 1, 3, 4, 5, 6].iter().map(|&i| first[i].parse().unwrap()).collect();
    let r = &rows[0];
    assert_eq!(nums, vec![r.epsilon, r.time, r.l2, r.j, r.h, r.rel_l2]);
    let second = lines.next().unwrap();
    assert!(second.ends_with(",failed: grid too coarse"), "{second}");
    assert!(lines.next().is_none());
}
