use dicke_lab::output::{format_number, to_json, write_csv};
use dicke_lab::{parse_config, read_json, Cell, Table};
use proptest::prelude::*;

fn csv_text(t: &Table) -> String {
    let mut buf = Vec::new();
    write_csv(t, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn empty_table_is_header_only() {
    let t = Table::new(["Gamma", "jz_mean", "error"]);
    assert_eq!(csv_text(&t), "Gamma,jz_mean,error\n");
    let back = read_json(&to_json(&t).to_string()).unwrap();
    assert_eq!(back.names, t.names);
    assert!(back.is_empty());
}

#[test]
fn null_and_text_cells() {
    let mut t = Table::new(["x", "y", "error"]);
    t.push_row(vec![
        Cell::Num(1.5),
        Cell::Null,
        Cell::from("y: gap closed, stopped"),
    ]);
    assert_eq!(
        csv_text(&t),
        "x,y,error\n1.5000000000000000e0,,\"y: gap closed, stopped\"\n"
    );
    let back = read_json(&to_json(&t).to_string()).unwrap();
    assert_eq!(back.row(0), t.row(0));
}

#[test]
fn non_finite_numbers() {
    assert_eq!(format_number(f64::NAN), "NaN");
    assert_eq!(format_number(f64::INFINITY), "inf");
    assert_eq!(format_number(f64::NEG_INFINITY), "-inf");
    assert_eq!(format_number(-0.25), "-2.5000000000000000e-1");
}

#[test]
fn malformed_json_is_rejected() {
    assert!(read_json("[]").is_err());
    assert!(read_json(r#"{"metadata": {}, "columns": {"a": [1, 2], "b": [1]}}"#).is_err());
    assert!(read_json(r#"{"columns": {}}"#).is_err());
}

proptest! {
    #[test]
    fn csv_numbers_parse_back_exactly(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        let back: f64 = format_number(v).parse().unwrap();
        prop_assert_eq!(back.to_bits(), v.to_bits());
    }

    #[test]
    fn json_round_trip(rows in proptest::collection::vec((-1e300f64..1e300, proptest::option::of(-1e3f64..1e3)), 0..20)) {
        let mut t = Table::new(["a", "b"]);
        t.metadata.insert("tool".into(), "dicke-lab".into());
        for (a, b) in rows {
            t.push_row(vec![Cell::Num(a), b.into()]);
        }
        prop_assert_eq!(read_json(&to_json(&t).to_string()).unwrap(), t);
    }

    #[test]
    fn config_round_trip(k1 in -0.9f64..0.9, j2 in 1u32..40, start in 0.0f64..1.0, count in 2usize..50) {
        let text = format!(
            "[model]\nk1 = {k1}\nj = {}\n[sweep]\naxis1 = Gamma:{start}:3:{count}\nquantities = jz_mean, berry_phase\n",
            f64::from(j2) / 2.0
        );
        let spec = parse_config(&text).unwrap();
        let again = parse_config(&spec.to_config_string()).unwrap();
        prop_assert_eq!(again.to_config_string(), spec.to_config_string());
        prop_assert_eq!(again.model, spec.model);
    }
}

#[test]
fn config_errors_carry_kind_and_line() {
    use dicke_lab::config::ConfigErrorKind;
    let cases = [
        (
            "[model]\nomega_f = 1\nk1 = 1.5\n",
            ConfigErrorKind::Range,
            3,
        ),
        (
            "[model]\ngamma = 0.5\nbogus = 1\n",
            ConfigErrorKind::UnknownKey,
            3,
        ),
        ("[model]\ngamma 0.5\n", ConfigErrorKind::Syntax, 2),
        (
            "[sweep]\naxis1 = Gamma:1:1:5\nquantities = jz_mean\n",
            ConfigErrorKind::Range,
            2,
        ),
    ];
    for (text, kind, line) in cases {
        let e = parse_config(text).unwrap_err();
        assert_eq!((e.kind, e.line), (kind, line), "{text:?}");
    }
}

#[test]
fn model_section_and_axis_values() {
    let spec = parse_config("[model]\ngamma=0.5\nk1=0\nk2=0\n[sweep]\naxis1 = Gamma:0.0:3.0:301\nquantities = jz_mean\n")
        .unwrap();
    assert_eq!(
        (spec.model.gamma, spec.model.k1, spec.model.k2),
        (0.5, 0.0, 0.0)
    );
    let v = spec.axes[0].values();
    assert_eq!(v.len(), 301);
    assert_eq!((v[0], v[300]), (0.0, 3.0));
    assert!(v.windows(2).all(|w| (w[1] - w[0] - 0.01).abs() < 1e-12));
}
