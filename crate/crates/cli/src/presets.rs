//! Built-in simulation designs, stored as ordinary config files so a preset
//! and a user config go through the same parser.

use crate::config::SimulateConfig;
use crate::error::CliError;

pub const NAMES: [&str; 3] = ["table1", "table2", "table3"];

pub fn load(name: &str) -> Result<SimulateConfig, CliError> {
    let text = match name {
        "table1" => include_str!("../presets/table1.toml"),
        "table2" => include_str!("../presets/table2.toml"),
        "table3" => include_str!("../presets/table3.toml"),
        other => {
            return Err(CliError::Usage(format!(
                "unknown preset `{other}`; available: {}",
                NAMES.join(", ")
            )))
        }
    };
    SimulateConfig::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pauc_core::estimator::TrimSpec;

    #[test]
    fn all_presets_parse_and_build_scenarios() {
        for name in NAMES {
            let cfg = load(name).unwrap();
            for &trim in &cfg.trims {
                let spec = cfg.scenario(trim).unwrap();
                assert_eq!(spec.markers(), cfg.markers(), "{name}");
                assert_eq!(spec.delta(), 0.05);
            }
        }
    }

    #[test]
    fn preset_shapes_match_their_designs() {
        let t1 = load("table1").unwrap();
        assert_eq!(t1.markers(), 3);
        assert_eq!(t1.group_size, 100);
        assert_eq!(t1.spearman.len(), 6);
        assert!(t1.effect.is_none());

        let t2 = load("table2").unwrap();
        assert_eq!(t2.group_size, 60);
        let e2 = t2.effect.as_ref().unwrap();
        assert_eq!(e2.tunable_marker, 3);
        assert_eq!(e2.lambda, 0.107);
        assert_eq!(t2.trims.len(), 3);
        assert!(t2.trims.contains(&TrimSpec::new(1.0, 0.0).unwrap()));

        let t3 = load("table3").unwrap();
        assert_eq!(t3.markers(), 6);
        assert_eq!(t3.spearman.len(), 12);
        let c3 = t3.contrast.build(6).unwrap();
        assert_eq!(c3.len(), 6);
        assert_eq!(t3.effect.as_ref().unwrap().tunable_marker, 6);
    }

    #[test]
    fn unknown_preset_is_a_usage_error() {
        let err = load("table9").unwrap_err();
        assert!(err.to_string().contains("table1, table2, table3"));
    }
}
