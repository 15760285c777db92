use nsch::audit::{run_audit, Audit, CheckClass, Tolerances, REGISTRY};
use nsch::{make_constants, Grid};

fn small(seed: u64, rho: (f64, f64)) -> Audit {
    let mut a = Audit::new(
        seed,
        Grid::unit_square(32).unwrap(),
        make_constants(rho.0, rho.1).unwrap(),
    );
    a.samples = 100;
    a
}

#[test]
fn same_seed_gives_identical_report() {
    let k = make_constants(1000.0, 1.0).unwrap();
    let g = Grid::unit_square(32).unwrap();
    let a = run_audit(42, g, k, Tolerances::default());
    let b = run_audit(42, g, k, Tolerances::default());
    assert_eq!(a.to_tsv(), b.to_tsv());
    assert!(a.passed(), "{}", a.to_table());
}

#[test]
fn report_lists_every_check_once() {
    let report = small(3, (2.0, 1.0)).run();
    assert_eq!(report.checks.len(), REGISTRY.len());
    for spec in REGISTRY {
        assert_eq!(
            report.checks.iter().filter(|c| c.name == spec.name).count(),
            1
        );
    }
    let tsv = report.to_tsv();
    let records: Vec<&str> = tsv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(records.len(), REGISTRY.len());
    assert!(records.iter().all(|r| r.split('\t').count() == 6));
}

#[test]
fn flipped_sign_fails_only_its_check() {
    for spec in REGISTRY {
        let report = small(11, (3.0, 1.0)).with_fault(spec.name).run();
        for rec in &report.checks {
            assert_eq!(
                rec.passed,
                rec.name != spec.name,
                "fault in {} -> {} passed={}",
                spec.name,
                rec.name,
                rec.passed
            );
        }
    }
}

#[test]
fn matched_density_discretization_errors_vanish() {
    let report = small(1, (1.0, 1.0)).run();
    assert!(report.passed());
    for rec in report
        .checks
        .iter()
        .filter(|c| c.class == CheckClass::Discretization)
    {
        assert_eq!(rec.max_err, 0.0, "{}", rec.name);
    }
}
