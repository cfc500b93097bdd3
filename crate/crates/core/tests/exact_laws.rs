//! Frozen exact laws for small sizes, and independent checks of them.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_rational::Ratio;
use rrtlab_core::oracle::golden_json;
use serde_json::Value;

type Q = Ratio<i64>;

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/exact_laws.json")
}

fn parse_q(s: &str) -> Q {
    let (a, b) = s.split_once('/').expect("p/q");
    Q::new(a.parse().unwrap(), b.parse().unwrap())
}

/// Set `RRTLAB_BLESS=1` to rewrite the frozen file.
#[test]
fn regeneration_matches_frozen_file() {
    let fresh = golden_json(6).unwrap();
    let path = golden_path();
    if std::env::var_os("RRTLAB_BLESS").is_some() {
        std::fs::write(&path, serde_json::to_string_pretty(&fresh).unwrap() + "\n").unwrap();
    }
    let frozen: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(fresh, frozen);
}

/// Law of `sum_{i=2}^n Ber(2/i)` by convolution.
fn selection_size_law(n: i64) -> BTreeMap<u32, Q> {
    let mut law = BTreeMap::from([(0u32, Q::from_integer(1))]);
    for i in 2..=n {
        let p = Q::new(2, i);
        let mut next = BTreeMap::new();
        for (&s, &q) in &law {
            *next.entry(s).or_insert_with(|| Q::from_integer(0)) += q * (Q::from_integer(1) - p);
            *next.entry(s + 1).or_insert_with(|| Q::from_integer(0)) += q * p;
        }
        law = next;
    }
    law.retain(|_, q| *q != Q::from_integer(0));
    law
}

#[test]
fn frozen_file_agrees_with_independent_formulas() {
    let frozen: Value = serde_json::from_str(&std::fs::read_to_string(golden_path()).unwrap()).unwrap();
    assert_eq!(frozen["schema"], "rrtlab.record.v1");
    let sizes = frozen["sizes"].as_array().unwrap();
    assert_eq!(sizes.len(), 5);
    for entry in sizes {
        let n = entry["n"].as_i64().unwrap();
        let fact = |k: i64| (1..=k).product::<i64>();
        assert_eq!(entry["chains"].as_i64().unwrap(), fact(n) * fact(n - 1));
        assert_eq!(entry["increasing_trees"].as_i64().unwrap(), fact(n - 1));

        let sel: BTreeMap<u32, Q> = entry["selection_size_vertex_1"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| (x["size"].as_u64().unwrap() as u32, parse_q(x["p"].as_str().unwrap())))
            .collect();
        assert_eq!(sel, selection_size_law(n), "n = {n}");

        // degree: a run of heads before the first tails, capped by |S|;
        // depth given (degree, |S|): Bin(|S| - degree - 1, 1/2) + 1 after a
        // tails, or 0 when every selection was a heads
        let mut joint: BTreeMap<(u32, u32), Q> = BTreeMap::new();
        for (&s, &ps) in &sel {
            for d in 0..=s {
                let half = |e: u32| Q::new(1, 1i64 << e);
                if d == s {
                    *joint.entry((d, 0)).or_insert_with(|| Q::from_integer(0)) += ps * half(s);
                    continue;
                }
                let rest = s - d - 1;
                for j in 0..=rest {
                    let binom = (0..j).fold(1i64, |acc, t| acc * (rest - t) as i64 / (t + 1) as i64);
                    *joint.entry((d, j + 1)).or_insert_with(|| Q::from_integer(0)) +=
                        ps * half(d + 1) * Q::new(binom, 1i64 << rest);
                }
            }
        }
        let frozen_joint: BTreeMap<(u32, u32), Q> = entry["degree_depth_vertex_1"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| {
                (
                    (x["degree"].as_u64().unwrap() as u32, x["depth"].as_u64().unwrap() as u32),
                    parse_q(x["p"].as_str().unwrap()),
                )
            })
            .collect();
        assert_eq!(frozen_joint, joint, "n = {n}");
    }
}
