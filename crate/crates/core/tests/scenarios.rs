use dynaquant::sim::algebra::{check_algebra, Profile};
use dynaquant::sim::config::{HChoice, HName, ScenarioKind};
use dynaquant::sim::{simulate, write_outputs, ScenarioConfig};

fn fp_config() -> ScenarioConfig {
    let mut cfg = ScenarioConfig { scenario: ScenarioKind::FokkerPlanck, n: 24, steps: 100, ..ScenarioConfig::default() };
    cfg.fp.h = HChoice::Named(HName::HStar);
    cfg
}

#[test]
fn fokker_planck_preserves_trace_and_hermiticity() {
    let sim = simulate(&fp_config()).unwrap();
    let ev = sim.evolution.unwrap();
    for k in 0..ev.len() {
        assert!((ev.trace_re[k] - 1.0).abs() < 1e-6, "t={} trace {}", ev.times[k], ev.trace_re[k]);
        assert!(ev.herm_defect[k] < 1e-9, "t={} defect {}", ev.times[k], ev.herm_defect[k]);
    }
}

#[test]
fn damped_outputs_are_byte_identical() {
    let cfg = ScenarioConfig { n: 16, steps: 50, ..ScenarioConfig::default() };
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let fa = write_outputs(&simulate(&cfg).unwrap(), a.path()).unwrap();
    let fb = write_outputs(&simulate(&cfg).unwrap(), b.path()).unwrap();
    assert_eq!(fa.len(), fb.len());
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap(), "{}", x.display());
    }
}

#[test]
fn algebra_report_reproducible_for_seed() {
    let a = check_algebra(24, Profile::Default, 7).unwrap().to_text();
    let b = check_algebra(24, Profile::Default, 7).unwrap().to_text();
    assert_eq!(a, b);
}
