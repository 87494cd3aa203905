use std::collections::BTreeSet;

use volform::scenarios::{self, Scenario};
use volform::{run, LaurentPoly, RunConfig, Vars};

const TARGETS: [&str; 13] = [
    "torus:1",
    "torus:2",
    "torus:3",
    "sl2",
    "surface",
    "surface:p=x^2,q=y^3",
    "surface:p=x^3,q=y^2",
    "xm1:1",
    "xm1:2",
    "xm1:3",
    "quadric",
    "product:quadric,torus:1",
    "product:torus:1,torus:2",
];

#[test]
fn every_scenario_passes() {
    for t in TARGETS {
        let s = scenarios::by_name(t).unwrap();
        let report = run(&s, t, &RunConfig::default());
        assert!(report.success(), "{t}:\n{}", report.to_text());
        assert_eq!(report.summary.unknown, 0, "{t}");
        assert!(report.summary.pass > 0, "{t}");
    }
}

#[test]
fn every_scenario_passes_under_other_seeds() {
    for seed in [1, 99, 2024] {
        let cfg = RunConfig {
            seed,
            points: 5,
            ..RunConfig::default()
        };
        for t in ["torus:3", "surface", "product:quadric,torus:1"] {
            let s = scenarios::by_name(t).unwrap();
            assert!(run(&s, t, &cfg).success(), "{t} seed {seed}");
        }
    }
}

/// Position-based view of a product scenario, insensitive to naming.
fn shape(s: &Scenario) -> (Vec<bool>, Vec<String>, String, BTreeSet<Vec<String>>, BTreeSet<Vec<String>>) {
    let c = &s.chart;
    let n = c.dim_ambient();
    let vars = Vars::new((0..n).map(|i| format!("c{i}")));
    let map: Vec<Option<usize>> = (0..n).map(Some).collect();
    let r = |p: &LaurentPoly| p.embed(&vars, &map).to_string();
    let rels = c.relations().iter().map(|rel| format!("{} / {}", r(&rel.poly), rel.solve_for)).collect();
    let vol = s.volume.as_ref().map(|(_, v)| r(&v.coefficient())).unwrap_or_default();
    let fields = s.fields.values().map(|f| f.coefficients().iter().map(r).collect()).collect();
    let actions = s.actions.values().map(|a| a.images().iter().map(r).collect()).collect();
    (c.invertible().to_vec(), rels, vol, fields, actions)
}

#[test]
fn product_is_associative_up_to_renaming() {
    for (a, b, c) in [
        ("torus:1", "torus:1", "torus:1"),
        ("quadric", "torus:1", "torus:2"),
        ("torus:1", "quadric", "xm1:2"),
    ] {
        let (a, b, c) = (
            scenarios::by_name(a).unwrap(),
            scenarios::by_name(b).unwrap(),
            scenarios::by_name(c).unwrap(),
        );
        let left = scenarios::product(&scenarios::product(&a, &b).unwrap(), &c).unwrap();
        let right = scenarios::product(&a, &scenarios::product(&b, &c).unwrap()).unwrap();
        assert_eq!(shape(&left), shape(&right), "{} x {} x {}", a.name, b.name, c.name);
        assert!(run(&left, "left", &RunConfig::default()).success());
        assert!(run(&right, "right", &RunConfig::default()).success());
    }
}
