use esd_model::{DipoleChannel, TruncationPolicy};
use esd_sweep::config::band_edges;
use esd_sweep::presets::FIGURE_IDS;
use esd_sweep::{figure_preset, ConfigError, Measure, RunConfig, Spacing, XGrid, BASE_PER_DECADE};
use proptest::prelude::*;
use std::path::{Path, PathBuf};

fn parse(text: &str) -> Result<RunConfig, ConfigError> {
    RunConfig::from_toml(text, Path::new("test.toml"))
}

const MINIMAL: &str = "z = [2e6]\np = [0.98]\nx_min = 1e-3\nx_max = 1e3\n";

#[test]
fn minimal_file_takes_defaults() {
    let cfg = parse(MINIMAL).unwrap();
    assert_eq!(cfg.name, "run");
    assert_eq!(cfg.x.spacing, Spacing::Log);
    assert_eq!(cfg.x.count, 6 * BASE_PER_DECADE + 1);
    assert_eq!(cfg.nu_max, 100.0);
    assert_eq!(cfg.dipole_ratio, 5e-3);
    assert_eq!(cfg.policy, TruncationPolicy::OnePhoton);
    assert_eq!(cfg.channel, DipoleChannel::Averaged);
    assert_eq!(cfg.parallelism, None);
    assert!(cfg.refine);
    assert_eq!(cfg.columns(), Measure::ALL.to_vec());
}

#[test]
fn every_key_is_read() {
    let text = r#"
name = "scan"
z = [5.0, 50.0]
p = [0.5, 0.9]
x_min = 0.1
x_max = 10.0
x_count = 41
x_spacing = "linear"
dipole_ratio = 1e-3
nu_max = 200
channel = "dm1"
policy = "second-order"
output_dir = "elsewhere"
parallelism = 2
seed = 7
refine = false
light_cone_width = 1e-4
columns = ["c_ab", "N-AF"]
"#;
    let cfg = parse(text).unwrap();
    assert_eq!(cfg.name, "scan");
    assert_eq!(cfg.z, vec![5.0, 50.0]);
    assert_eq!(cfg.p, vec![0.5, 0.9]);
    assert_eq!(cfg.x, XGrid { min: 0.1, max: 10.0, count: 41, spacing: Spacing::Linear });
    assert_eq!(cfg.dipole_ratio, 1e-3);
    assert_eq!(cfg.nu_max, 200.0);
    assert_eq!(cfg.channel, DipoleChannel::Transverse);
    assert_eq!(cfg.policy, TruncationPolicy::SecondOrder);
    assert_eq!(cfg.output_dir, PathBuf::from("elsewhere"));
    assert_eq!(cfg.parallelism, Some(2));
    assert_eq!(cfg.seed, 7);
    assert!(!cfg.refine);
    assert_eq!(cfg.light_cone_width, 1e-4);
    assert_eq!(cfg.columns(), vec![Measure::AtomAtom, Measure::AtomField]);
}

#[test]
fn unknown_keys_are_refused() {
    let err = parse(&format!("{MINIMAL}zz = 1\n")).unwrap_err();
    assert!(matches!(err, ConfigError::Parse { .. }), "{err}");
    assert!(err.to_string().contains("zz"));
}

#[test]
fn missing_required_key_is_a_parse_error() {
    assert!(matches!(parse("z = [1.0]\np = [0.5]\nx_min = 1.0\n"), Err(ConfigError::Parse { .. })));
}

#[test]
fn invalid_values_name_their_key() {
    let cases = [
        ("z = []\np = [0.5]\nx_min = 0.1\nx_max = 10.0\n", "z"),
        ("z = [-1.0]\np = [0.5]\nx_min = 0.1\nx_max = 10.0\n", "z"),
        ("z = [1.0]\np = [0.5]\nx_min = 10.0\nx_max = 0.1\nx_count = 5\n", "x_max"),
        ("z = [1.0]\np = [0.5]\nx_min = 0.0\nx_max = 10.0\nx_count = 5\n", "x_min"),
        ("z = [1.0]\np = [0.5]\nx_min = 0.1\nx_max = 10.0\nx_count = 0\n", "x_count"),
        ("z = [1.0]\np = [0.5]\nx_min = 0.1\nx_max = 10.0\nx_spacing = \"linear\"\n", "x_count"),
        ("z = [1.0]\np = [0.5]\nx_min = 0.1\nx_max = 10.0\nlight_cone_width = 0.7\n", "light_cone_width"),
        ("z = [1.0]\np = [0.5]\nx_min = 0.1\nx_max = 10.0\nparallelism = 0\n", "parallelism"),
        ("name = \"a/b\"\nz = [1.0]\np = [0.5]\nx_min = 0.1\nx_max = 10.0\n", "name"),
        ("z = [1.0]\np = [0.5]\nx_min = 0.1\nx_max = 10.0\ncolumns = [\"C_XY\"]\n", "columns"),
    ];
    for (text, key) in cases {
        match parse(text) {
            Err(ConfigError::Invalid { key: k, .. }) => assert_eq!(k, key, "{text}"),
            other => panic!("{text}: expected invalid {key}, got {other:?}"),
        }
    }
}

#[test]
fn model_parameters_are_checked() {
    for text in [
        "z = [1.0]\np = [1.5]\nx_min = 0.1\nx_max = 10.0\n",
        "z = [1.0]\np = [0.5]\nx_min = 0.1\nx_max = 10.0\nnu_max = 0.5\n",
        "z = [1.0]\np = [0.5]\nx_min = 0.1\nx_max = 10.0\ndipole_ratio = -1.0\n",
        "z = [1.0]\np = [0.5]\nx_min = 0.1\nx_max = 10.0\npolicy = \"third\"\n",
        "z = [1.0]\np = [0.5]\nx_min = 0.1\nx_max = 10.0\nchannel = \"dm2\"\n",
    ] {
        assert!(matches!(parse(text), Err(ConfigError::Param(_))), "{text}");
    }
}

#[test]
fn grid_inside_the_light_cone_is_refused() {
    let text = "z = [1.0]\np = [0.5]\nx_min = 1.0\nx_max = 1.0\nx_count = 1\n";
    assert!(matches!(parse(text), Err(ConfigError::Invalid { key: "x_min", .. })));
}

#[test]
fn unreadable_file_is_a_read_error() {
    let err = RunConfig::load(Path::new("/nonexistent/run.toml")).unwrap_err();
    assert!(matches!(err, ConfigError::Read { .. }));
}

#[test]
fn overrides_replace_the_file() {
    let mut cfg = parse(MINIMAL).unwrap();
    cfg.apply_overrides(Some("/tmp/somewhere".into()), Some(" 3 ".into())).unwrap();
    assert_eq!(cfg.output_dir, PathBuf::from("/tmp/somewhere"));
    assert_eq!(cfg.parallelism, Some(3));
    // empty values are ignored
    cfg.apply_overrides(Some(String::new()), Some(String::new())).unwrap();
    assert_eq!(cfg.parallelism, Some(3));
    assert!(cfg.apply_overrides(None, Some("many".into())).is_err());
    assert!(cfg.apply_overrides(None, Some("0".into())).is_err());
}

#[test]
fn every_figure_has_a_valid_preset() {
    for id in FIGURE_IDS {
        let cfg = figure_preset(id).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.name, format!("fig{id}"));
        assert!(!cfg.columns.is_empty());
        assert_eq!(cfg.x.count, 1201);
    }
    assert!(matches!(figure_preset(0), Err(ConfigError::UnknownFigure(0))));
    assert!(matches!(figure_preset(9), Err(ConfigError::UnknownFigure(9))));
}

#[test]
fn band_edges_sit_just_outside() {
    for w in [1e-6, 1e-4, 0.1] {
        let (lo, hi) = band_edges(w);
        assert!(1.0 - lo >= w && hi - 1.0 >= w);
        assert!(1.0 - lo.next_up() < w && hi.next_down() - 1.0 < w);
    }
}

proptest! {
    #[test]
    fn grid_points_are_ordered_and_outside_the_band(
        lo in -3.0f64..0.5,
        span in 0.01f64..5.0,
        count in 2usize..400,
        log in any::<bool>(),
    ) {
        let (min, max) = (10f64.powf(lo), 10f64.powf(lo + span));
        let spacing = if log { Spacing::Log } else { Spacing::Linear };
        let g = XGrid { min, max, count, spacing };
        let width = 1e-6;
        match g.points(width) {
            Ok(xs) => {
                prop_assert_eq!(xs.len(), count);
                prop_assert!(xs.windows(2).all(|w| w[0] > w[1]));
                prop_assert!(xs.iter().all(|x| (x - 1.0).abs() >= width));
                prop_assert_eq!(xs[0], max);
                prop_assert_eq!(xs[count - 1], min);
            }
            // only an end pinned inside the band, or a grid too short to split, may be refused
            Err(_) => prop_assert!((min - 1.0).abs() < width || (max - 1.0).abs() < width || count < 4),
        }
    }
}
