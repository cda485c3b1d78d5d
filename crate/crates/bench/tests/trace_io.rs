use std::fs;

use proptest::prelude::*;

use projgrad_bench::run::{read_trace, run, summary_path, trace_path, write_trace, TraceRow};
use projgrad_bench::{registry, ConfigOverrides, RunSpec, Strategy as Method};

fn cell() -> impl Strategy<Value = Option<f64>> {
    prop::option::of(prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), Just(0.0), Just(-0.0)])
}

fn row() -> impl Strategy<Value = TraceRow> {
    (
        (0usize..10_000, -1e300..1e300f64, 0.0..1e10f64),
        (cell(), cell(), prop::option::of(0usize..80)),
        (cell(), cell(), cell(), cell()),
    )
        .prop_map(|((k, f, residual), (alpha, beta, inner_trials), (f_lev, epsilon_qf, dist_anchor, dist_known_solution))| {
            TraceRow { k, f, residual, alpha, beta, inner_trials, f_lev, epsilon_qf, dist_anchor, dist_known_solution }
        })
}

proptest! {
    #[test]
    fn csv_round_trip_is_exact(rows in prop::collection::vec(row(), 0..20)) {
        let mut buf = Vec::new();
        write_trace(&mut buf, &rows).unwrap();
        let back = read_trace(buf.as_slice()).unwrap();
        prop_assert_eq!(back.len(), rows.len());
        for (a, b) in rows.iter().zip(&back) {
            // bitwise, so −0.0 must survive too
            prop_assert_eq!(a.f.to_bits(), b.f.to_bits());
            prop_assert_eq!(a.alpha.map(f64::to_bits), b.alpha.map(f64::to_bits));
            prop_assert_eq!(a, b);
        }
    }
}

fn spec(strategy: Method, prefix: std::path::PathBuf) -> RunSpec {
    let overrides = ConfigOverrides { constant_beta: Some(0.5), exo_constant: Some(0.5), ..Default::default() };
    let inst = registry::instance("logsumexp-simplex", 7).unwrap();
    RunSpec::new("det".into(), "logsumexp-simplex".into(), inst, strategy, overrides, 7, Some(prefix)).unwrap()
}

#[test]
fn same_spec_and_seed_give_identical_traces() {
    let dir = tempfile::tempdir().unwrap();
    for s in Method::ALL {
        let (a, b) = (dir.path().join(format!("{}-1", s.code())), dir.path().join(format!("{}-2", s.code())));
        run(&spec(s, a.clone())).unwrap();
        run(&spec(s, b.clone())).unwrap();
        let (ta, tb) = (fs::read(trace_path(&a)).unwrap(), fs::read(trace_path(&b)).unwrap());
        assert!(!ta.is_empty());
        assert_eq!(ta, tb, "strategy {}", s.code());
    }
}

#[test]
fn written_trace_matches_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("nested/run");
    let outcome = run(&spec(Method::Strong, prefix.clone())).unwrap();
    let rows = read_trace(fs::File::open(trace_path(&prefix)).unwrap()).unwrap();
    let expected: Vec<TraceRow> = outcome.report.trace.iter().map(TraceRow::from).collect();
    assert_eq!(rows, expected);
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(summary_path(&prefix)).unwrap()).unwrap();
    assert_eq!(summary["strategy"], "A2");
    assert_eq!(summary["iterations"], outcome.report.iterations);
}
