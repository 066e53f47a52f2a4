//! Consistency checks that can run from an installed binary: the golden
//! tables, count header and rational key monotonicity, and random agreement
//! between keys and the comparator.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::comparator::compare;
use crate::encoder::{hierar_count_header, rational_key, Encoder, Mode};
use crate::gen::{random_pair, random_tree, TreeConfig};
use crate::golden::{check_column, parse_golden};
use crate::tsodl::serialize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Runs every golden column; one result per table.
pub fn golden_checks(text: &str) -> Vec<CheckResult> {
    let columns = match parse_golden(text) {
        Ok(columns) => columns,
        Err(e) => return vec![CheckResult::new("golden", false, e.to_string())],
    };
    let mut results: Vec<CheckResult> = Vec::new();
    for column in &columns {
        let name = format!("golden table {}", column.table);
        let failures: Vec<String> = check_column(column)
            .into_iter()
            .filter(|c| !c.passed())
            .map(|c| match &c.error {
                Some(e) => format!("column {} `{}`: {e}", c.column, c.order),
                None => format!(
                    "column {} `{}`: comparator gave {}, keys gave {}",
                    c.column,
                    c.order,
                    c.oracle.join(" "),
                    c.pipeline.join(" ")
                ),
            })
            .collect();
        let positions = column.expected.len();
        match results.iter_mut().find(|r| r.name == name) {
            Some(result) => {
                result.passed &= failures.is_empty();
                if !failures.is_empty() {
                    result.detail = failures.join("; ");
                }
            }
            None => results.push(CheckResult::new(
                name,
                failures.is_empty(),
                if failures.is_empty() {
                    format!("{positions} positions per column")
                } else {
                    failures.join("; ")
                },
            )),
        }
    }
    if results.is_empty() {
        results.push(CheckResult::new("golden", false, "no tables"));
    }
    results
}

/// Adjacent counts `0..limit` plus `random` random pairs: keys must be
/// strictly increasing and prefix-free.
pub fn header_monotonicity(limit: u64, random: usize, seed: u64) -> CheckResult {
    let name = "count header monotonicity";
    let header = |n: u128| hierar_count_header(n).expect("counts below 2^64 encode");
    let broken = |a: u128, b: u128| {
        let (ka, kb) = (header(a), header(b));
        (a.cmp(&b) != ka.cmp(&kb) || (a != b && (kb.starts_with(&ka) || ka.starts_with(&kb))))
            .then(|| format!("{a} and {b} out of order"))
    };
    let mut prev = header(0);
    for n in 1..limit {
        let next = header(u128::from(n));
        if prev >= next || next.starts_with(&prev) {
            return CheckResult::new(name, false, format!("{} and {n} out of order", n - 1));
        }
        prev = next;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        // Spread over all widths rather than mostly huge values.
        let a = u128::from(rng.random::<u64>() >> rng.random_range(0..64));
        let b = u128::from(rng.random::<u64>() >> rng.random_range(0..64));
        if let Some(detail) = broken(a, b) {
            return CheckResult::new(name, false, detail);
        }
    }
    CheckResult::new(
        name,
        true,
        format!("{limit} adjacent counts, {random} random pairs"),
    )
}

/// Every `p/q` with `|p| <= max_num` and `1 <= q <= max_den`: keys must
/// order exactly like the fractions.
pub fn rational_brute_force(max_num: i64, max_den: u64) -> CheckResult {
    let name = "rational brute force";
    let mut all = Vec::new();
    for p in -max_num..=max_num {
        for q in 1..=max_den {
            match rational_key(p, q) {
                Ok(key) => all.push((p, q, key)),
                Err(e) => return CheckResult::new(name, false, format!("{p}/{q}: {e}")),
            }
        }
    }
    let value_cmp = |(p, q): (i64, u64), (r, s): (i64, u64)| {
        (i128::from(p) * i128::from(s)).cmp(&(i128::from(r) * i128::from(q)))
    };
    all.sort_by(|a, b| value_cmp((a.0, a.1), (b.0, b.1)));
    for w in all.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let want = value_cmp((a.0, a.1), (b.0, b.1));
        let (ka, kb) = (&a.2, &b.2);
        let prefix = want != Ordering::Equal && kb.starts_with(ka);
        if ka.cmp(kb) != want || prefix {
            return CheckResult::new(
                name,
                false,
                format!("{}/{} and {}/{} out of order", a.0, a.1, b.0, b.1),
            );
        }
    }
    CheckResult::new(name, true, format!("{} fractions", all.len()))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub trials: usize,
    pub disagreements: usize,
    /// Pairs on which key equality was checked against comparator equality.
    pub injectivity_pairs: usize,
    pub injectivity_failures: usize,
    pub first_failure: Option<String>,
}

/// `trees` random trees, `pairs` element pairs each: the bytewise order of
/// the keys must match the comparator, and equal keys must mean equal
/// elements.
pub fn oracle_trials(seed: u64, trees: usize, pairs: usize, config: &TreeConfig) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleReport::default();
    let fail = |report: &mut OracleReport, detail: String| {
        report.first_failure.get_or_insert(detail);
    };
    for _ in 0..trees {
        let tree = random_tree(&mut rng, config);
        let encoder = match Encoder::new(&tree, Mode::Padded) {
            Ok(encoder) => encoder,
            Err(e) => {
                report.trials += pairs;
                report.disagreements += pairs;
                fail(&mut report, format!("{}: {e}", serialize(&tree)));
                continue;
            }
        };
        for _ in 0..pairs {
            let (x, y) = random_pair(&mut rng, &tree);
            report.trials += 1;
            let expected = compare(&tree, &x, &y);
            let keys = encoder
                .encode(&x)
                .and_then(|kx| Ok((kx, encoder.encode(&y)?)));
            let (expected, (kx, ky)) = match (expected, keys) {
                (Ok(e), Ok(k)) => (e, k),
                (e, k) => {
                    report.disagreements += 1;
                    fail(
                        &mut report,
                        format!(
                            "{}: {x:?} vs {y:?}: comparator {e:?}, keys {k:?}",
                            serialize(&tree)
                        ),
                    );
                    continue;
                }
            };
            let got = kx.as_bytes().cmp(ky.as_bytes());
            if got != expected {
                report.disagreements += 1;
                fail(
                    &mut report,
                    format!(
                        "{}: {x:?} vs {y:?}: comparator {expected:?}, keys {got:?}",
                        serialize(&tree)
                    ),
                );
            }
            report.injectivity_pairs += 1;
            if (kx == ky) != (expected == Ordering::Equal) {
                report.injectivity_failures += 1;
                fail(
                    &mut report,
                    format!("{}: {x:?} vs {y:?}: injectivity", serialize(&tree)),
                );
            }
        }
    }
    report
}

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Random trees for the oracle check; ten element pairs each.
    pub trees: usize,
    pub golden: String,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            trees: 2000,
            golden: crate::golden::BINARY_STRING_TABLES.to_string(),
        }
    }
}

pub fn run_selftest(config: &SelftestConfig) -> Vec<CheckResult> {
    let mut results = golden_checks(&config.golden);
    results.push(header_monotonicity(1 << 16, 10_000, config.seed));
    results.push(rational_brute_force(100, 50));
    let tree_config = TreeConfig::default();
    let report = oracle_trials(config.seed, config.trees, 10, &tree_config);
    results.push(CheckResult::new(
        "random oracle agreement",
        report.disagreements == 0 && report.injectivity_failures == 0,
        match &report.first_failure {
            Some(f) => format!(
                "{} of {} trials failed; first: {f}",
                report.disagreements, report.trials
            ),
            None => format!("{} trials", report.trials),
        },
    ));
    results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        let results = run_selftest(&SelftestConfig {
            trees: 200,
            ..Default::default()
        });
        assert_eq!(results.len(), 5);
        for r in &results {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn corrupted_golden_names_the_table() {
        let golden = crate::golden::BINARY_STRING_TABLES
            .replace("expect ε 0 1 00 01 10 11", "expect ε 1 0 00 01 10 11");
        let results = golden_checks(&golden);
        let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].name, "golden table hierar");
    }
}
