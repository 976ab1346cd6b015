use spa::io::{self, CsvSchema};
use spa::{generate, GenerationMode, ModelParams, SpaError};

fn sample() -> (spa::SpaGraph, ModelParams) {
    let prm = ModelParams::new(0.6, 0.8, 7.3).unwrap().with_seed(99);
    (generate(&prm, 500, GenerationMode::Fast).unwrap(), prm)
}

fn to_text(g: &spa::SpaGraph, prm: &ModelParams) -> String {
    let mut buf = Vec::new();
    io::write_graph(g, prm, GenerationMode::Fast, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn file_round_trip_through_disk() {
    let (g, prm) = sample();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.spa");
    io::save_graph(&path, &g, &prm, GenerationMode::Fast).unwrap();
    let file = io::load_graph(&path).unwrap();
    assert_eq!(file.graph, g);
    assert_eq!(file.header.params, prm);
    assert_eq!(file.header.mode, GenerationMode::Fast);
    assert_eq!(to_text(&file.graph, &file.header.params), std::fs::read_to_string(&path).unwrap());
}

fn tampered(edit: impl Fn(&mut Vec<String>)) -> SpaError {
    let (g, prm) = sample();
    let mut lines: Vec<String> = to_text(&g, &prm).lines().map(String::from).collect();
    edit(&mut lines);
    io::read_graph(lines.join("\n").as_bytes()).unwrap_err()
}

fn first_edge(lines: &[String]) -> usize {
    lines.iter().position(|l| l.starts_with("E ")).unwrap()
}

#[test]
fn tampered_files_are_rejected() {
    let err = tampered(|l| {
        let i = first_edge(l);
        let parts: Vec<&str> = l[i].split(' ').collect();
        l[i] = format!("E {} {}", parts[2], parts[1]);
    });
    assert!(matches!(err, SpaError::InvariantViolation(_)), "{err}");

    let err = tampered(|l| {
        let i = first_edge(l);
        let dup = l[i].clone();
        l.insert(i + 1, dup);
    });
    assert!(matches!(err, SpaError::InvariantViolation(_)), "{err}");

    let err = tampered(|l| l[0] = l[0].replace("spa-graph 1", "spa-graph 7"));
    assert!(matches!(err, SpaError::Parse { line: 1, .. }), "{err}");

    let err = tampered(|l| {
        l.remove(3);
    });
    assert!(matches!(err, SpaError::Parse { line: 4, .. }), "{err}");

    let err = tampered(|l| l.push("X 1 2".into()));
    assert!(matches!(err, SpaError::Parse { .. }), "{err}");
}

#[test]
fn hex_floats_are_exact() {
    for x in [0.0, 0.1, 0.5, 1.0 - f64::EPSILON, 30.0 / 7.0, 5e-324, f64::MIN_POSITIVE] {
        let s = io::format_hex_f64(x);
        assert_eq!(io::parse_hex_f64(&s).map(f64::to_bits), Some(x.to_bits()), "{s}");
    }
    assert_eq!(io::format_hex_f64(1.0), "0x1p+0");
    assert_eq!(io::parse_hex_f64("0x1.8p+1"), Some(3.0));
    assert_eq!(io::parse_hex_f64("1.5"), None);
}

#[test]
fn csv_validation_catches_schema_drift() {
    let schema: &CsvSchema = &io::TRAJECTORY;
    assert_eq!(io::validate_csv("v,t,deg\n1,10,3\n1,20,5\n".as_bytes(), schema).unwrap(), 2);
    assert!(io::validate_csv("v,deg,t\n1,3,10\n".as_bytes(), schema).is_err());
    assert!(io::validate_csv("v,t,deg\n1,x,3\n".as_bytes(), schema).is_err());
    assert!(io::validate_csv("d,C,count,directed_flag\n3,0.5,2,2\n".as_bytes(), &io::CC_BY_DEGREE).is_err());
}
