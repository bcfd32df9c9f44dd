use proptest::prelude::*;
use shrinker_core::io::{format_curve, parse_curve};
use shrinker_core::metrics::PointUV;
use shrinker_core::Error;

#[test]
fn parses_metadata_comments_and_points() {
    let text = "# a free comment\n#n=3\n#closed=true\nu,v\n0.5,1.25\n\n-2,3e-2\n";
    let file = parse_curve(text).unwrap();
    assert_eq!(file.points, vec![PointUV::new(0.5, 1.25), PointUV::new(-2.0, 0.03)]);
    assert_eq!(file.get("n"), Some("3"));
    assert_eq!(file.flag("closed").unwrap(), Some(true));
    assert_eq!(file.flag("open").unwrap(), None);
}

#[test]
fn reports_the_offending_line() {
    let line = |text: &str| match parse_curve(text) {
        Err(Error::Parse { line, .. }) => line,
        other => panic!("expected a parse error, got {other:?}"),
    };
    assert_eq!(line("x,y\n1,2\n"), 1);
    assert_eq!(line("#n=2\nu,v\n1,2\n3\n"), 4);
    assert_eq!(line("u,v\n1,2,3\n"), 2);
    assert_eq!(line("u,v\n1,nan\n"), 2);
    assert!(parse_curve("#closed=maybe\nu,v\n").unwrap().flag("closed").is_err());
    assert!(parse_curve("").is_err());
}

#[test]
fn written_values_use_plain_decimals() {
    let text = format_curve(&[PointUV::new(1e-7, 2.5e20)], &[("n", "2".into())]);
    assert_eq!(text, "#n=2\nu,v\n0.0000001,250000000000000000000\n");
}

proptest! {
    #[test]
    fn format_then_parse_is_exact(
        raw in prop::collection::vec((-1e6f64..1e6, 1e-9f64..1e3), 0..50),
    ) {
        let pts: Vec<PointUV> = raw.iter().map(|&(u, v)| PointUV::new(u, v)).collect();
        let text = format_curve(&pts, &[("closed", "true".into()), ("g", "2".into())]);
        let back = parse_curve(&text).unwrap();
        prop_assert_eq!(&back.points, &pts);
        prop_assert_eq!(back.get("g"), Some("2"));
    }
}
