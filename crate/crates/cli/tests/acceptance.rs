//! End-to-end acceptance checks. Runs without the test harness so that every
//! criterion prints exactly one PASS/FAIL line, even when all pass.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use nextify::encoder::{count_header_be, hierar_count_header, rational_key};
use nextify::gen::{random_pair, random_tree, TreeConfig};
use nextify::golden::{check_column, parse_golden, BINARY_STRING_TABLES};
use nextify::sorter::{sort_cells, LongCell, ShortCell, SortPolicy};
use nextify::tsodl::{parse, serialize, ParseError};
use nextify::{compare, compare_keys, Encoder, Mode, Operator, OrderNode};
use nextify_cli::bench::prefix_strings;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[path = "../../core/tests/support/size_oracle.rs"]
mod size_oracle;

type Outcome = Result<String, String>;

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    if took > limit {
        Err(format!("{detail}; took {took:.1?}, limit {limit:?}"))
    } else {
        Ok(format!("{detail}; {took:.1?}"))
    }
}

fn golden_tables() -> Outcome {
    let start = Instant::now();
    let columns = parse_golden(BINARY_STRING_TABLES).map_err(|e| e.to_string())?;
    let positions: usize = columns.iter().map(|c| c.expected.len()).sum();
    if columns.len() != 8 || positions != 56 {
        return Err(format!("{} columns, {positions} positions", columns.len()));
    }
    let mut mismatches = 0;
    for check in columns.iter().flat_map(check_column) {
        if let Some(e) = &check.error {
            return Err(format!("{} column {}: {e}", check.table, check.column));
        }
        mismatches += check.oracle_mismatches + check.pipeline_mismatches;
    }
    if mismatches != 0 {
        return Err(format!("{mismatches} mismatched positions"));
    }
    within(
        Duration::from_secs(1),
        start,
        "8 columns, 56 positions, oracle and keys agree".into(),
    )
}

fn operators(node: &OrderNode, seen: &mut BTreeSet<String>) {
    match node {
        OrderNode::Finite(_) | OrderNode::Builtin(_) => {}
        OrderNode::Inv(child) => {
            seen.insert("inv".into());
            operators(child, seen);
        }
        OrderNode::Seq(seq) => {
            seen.insert(format!("{:?}", seq.op));
            seq.prelude.iter().chain(&seq.period).for_each(|c| operators(c, seen));
        }
        OrderNode::Sum(sum) => {
            seen.insert("sum".into());
            sum.cases.iter().for_each(|c| operators(c, seen));
        }
    }
}

fn depth(node: &OrderNode) -> usize {
    match node {
        OrderNode::Finite(_) | OrderNode::Builtin(_) => 0,
        OrderNode::Inv(child) => depth(child),
        OrderNode::Seq(seq) => 1 + seq.prelude.iter().chain(&seq.period).map(depth).max().unwrap_or(0),
        OrderNode::Sum(sum) => 1 + sum.cases.iter().map(depth).max().unwrap_or(0),
    }
}

/// Random trials shared by the universality and size-law criteria.
struct Trials {
    trials: usize,
    equal_pairs: usize,
    disagreements: Vec<String>,
    injectivity_failures: usize,
    size_violations: Vec<String>,
    missing_operators: Vec<String>,
    too_deep: usize,
    elapsed: Duration,
}

fn run_trials() -> Trials {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let config = TreeConfig::default();
    let mut out = Trials {
        trials: 0,
        equal_pairs: 0,
        disagreements: Vec::new(),
        injectivity_failures: 0,
        size_violations: Vec::new(),
        missing_operators: Vec::new(),
        too_deep: 0,
        elapsed: Duration::ZERO,
    };
    let mut seen = BTreeSet::new();
    for _ in 0..10_000 {
        let tree = random_tree(&mut rng, &config);
        operators(&tree, &mut seen);
        if depth(&tree) > 5 {
            out.too_deep += 1;
        }
        let encoder = match Encoder::new(&tree, Mode::Padded) {
            Ok(encoder) => encoder,
            Err(e) => {
                out.disagreements.push(format!("{}: {e}", serialize(&tree)));
                continue;
            }
        };
        for _ in 0..10 {
            let (x, y) = random_pair(&mut rng, &tree);
            out.trials += 1;
            let keys = encoder.encode(&x).and_then(|kx| Ok((kx, encoder.encode(&y)?)));
            let (expected, (kx, ky)) = match (compare(&tree, &x, &y), keys) {
                (Ok(e), Ok(k)) => (e, k),
                (e, k) => {
                    out.disagreements.push(format!("{}: {e:?} {k:?}", serialize(&tree)));
                    continue;
                }
            };
            if compare_keys(kx.as_bytes(), ky.as_bytes()).ok() != Some(expected) {
                out.disagreements.push(format!("{}: {x:?} vs {y:?}", serialize(&tree)));
            }
            if expected == Ordering::Equal {
                out.equal_pairs += 1;
            }
            if (kx == ky) != (expected == Ordering::Equal) {
                out.injectivity_failures += 1;
            }
            for (value, key) in [(&x, &kx), (&y, &ky)] {
                let want = 3 * size_oracle::data_bytes(&tree, value);
                if key.len() != want {
                    out.size_violations
                        .push(format!("{}: {value:?}: {} bytes, want {want}", serialize(&tree), key.len()));
                }
            }
        }
    }
    let all = [
        Operator::Next,
        Operator::Lex,
        Operator::ContreLex,
        Operator::Hierar,
        Operator::ContreHierar,
        Operator::AntiLex,
        Operator::AntiContreLex,
        Operator::AntiHierar,
        Operator::AntiContreHierar,
    ];
    out.missing_operators = all
        .iter()
        .map(|op| format!("{op:?}"))
        .chain(["inv".to_string(), "sum".to_string()])
        .filter(|name| !seen.contains(name))
        .collect();
    out.elapsed = start.elapsed();
    out
}

fn universality(trials: &Trials) -> Outcome {
    if let Some(first) = trials.disagreements.first() {
        return Err(format!(
            "{} of {} trials disagree; first: {first}",
            trials.disagreements.len(),
            trials.trials
        ));
    }
    if !trials.missing_operators.is_empty() {
        return Err(format!("operators never generated: {}", trials.missing_operators.join(", ")));
    }
    if trials.too_deep > 0 {
        return Err(format!("{} trees deeper than 5", trials.too_deep));
    }
    if trials.trials < 100_000 {
        return Err(format!("only {} trials", trials.trials));
    }
    if trials.injectivity_failures > 0 {
        return Err(format!("{} injectivity failures", trials.injectivity_failures));
    }
    let detail = format!(
        "{} trials agree, injectivity on {} pairs ({} equal); {:.1?}",
        trials.trials, trials.trials, trials.equal_pairs, trials.elapsed
    );
    if trials.elapsed > Duration::from_secs(120) {
        return Err(format!("{detail}, limit 2 min"));
    }
    Ok(detail)
}

fn size_law(trials: &Trials) -> Outcome {
    match trials.size_violations.first() {
        Some(first) => Err(format!("{} violations; first: {first}", trials.size_violations.len())),
        None => Ok(format!("{} keys are exactly 3x their data bytes", 2 * trials.trials)),
    }
}

fn hierar_header() -> Outcome {
    let start = Instant::now();
    let mut big = vec![0u8; 51];
    big[0] = 1;
    let header = count_header_be(&big);
    if header.len() != 53 || header[..3] != [0x80, 0x33, 0x01] || header[3..].iter().any(|&b| b != 0) {
        return Err(format!("2^400 encodes as {}", hex(&header)));
    }
    let ordered = |a: &[u8], b: &[u8]| a < b && !b.starts_with(a);
    let mut prev = hierar_count_header(0).map_err(|e| e.to_string())?;
    for n in 1..=1u128 << 20 {
        let next = hierar_count_header(n).map_err(|e| e.to_string())?;
        if !ordered(&prev, &next) {
            return Err(format!("{} and {n} out of order", n - 1));
        }
        prev = next;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(400);
    for _ in 0..100_000 {
        let a = rng.random::<u64>() >> rng.random_range(0..64);
        let b = rng.random::<u64>() >> rng.random_range(0..64);
        let (ka, kb) = (
            hierar_count_header(a.into()).map_err(|e| e.to_string())?,
            hierar_count_header(b.into()).map_err(|e| e.to_string())?,
        );
        let fine = match a.cmp(&b) {
            Ordering::Less => ordered(&ka, &kb),
            Ordering::Equal => ka == kb,
            Ordering::Greater => ordered(&kb, &ka),
        };
        if !fine {
            return Err(format!("{a} and {b} out of order"));
        }
    }
    within(
        Duration::from_secs(30),
        start,
        "2^400 = 80 33 01 00.., adjacent to 2^20, 10^5 random pairs".into(),
    )
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn rationals() -> Outcome {
    let start = Instant::now();
    let mut fractions = Vec::new();
    for p in -100i64..=100 {
        for q in 1u64..=50 {
            if gcd(p.unsigned_abs(), q) == 1 {
                fractions.push((p, q, rational_key(p, q).map_err(|e| format!("{p}/{q}: {e}"))?));
            }
        }
    }
    let mut comparisons = 0u64;
    for (p, q, kp) in &fractions {
        for (r, s, kr) in &fractions {
            let want = (i128::from(*p) * i128::from(*s)).cmp(&(i128::from(*r) * i128::from(*q)));
            comparisons += 1;
            if kp.as_slice().cmp(kr.as_slice()) != want {
                return Err(format!("{p}/{q} vs {r}/{s}: keys disagree"));
            }
        }
    }
    within(
        Duration::from_secs(120),
        start,
        format!("{} reduced fractions, {comparisons} comparisons", fractions.len()),
    )
}

fn sorter() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let encoder = Encoder::new(&parse("uint64").unwrap(), Mode::Packed).map_err(|e| e.to_string())?;
    let mut values: Vec<u64> = Vec::with_capacity(1_000_000);
    for i in 0..1_000_000 {
        // One key in twenty repeats an earlier one.
        values.push(if i > 0 && rng.random_ratio(1, 20) {
            values[rng.random_range(0..i)]
        } else {
            rng.random()
        });
    }
    let keys: Vec<_> = values
        .iter()
        .map(|&v| encoder.encode(&nextify::ElementValue::Primitive(nextify::Primitive::Unsigned(v))))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut cells: Vec<ShortCell> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| ShortCell::from_key_bytes(k.as_bytes(), i as u64))
        .collect();
    let mut oracle: Vec<usize> = (0..keys.len()).collect();
    oracle.sort_by(|&a, &b| keys[a].as_bytes().cmp(keys[b].as_bytes()));
    for parallel in [false, true] {
        let mut sorted = cells.clone();
        sort_cells(&mut sorted, &SortPolicy { parallel, ..SortPolicy::default() });
        if sorted.iter().map(|c| c.reference as usize).ne(oracle.iter().copied()) {
            return Err(format!("uint64 keys differ from a stable sort (parallel: {parallel})"));
        }
    }
    cells.clear();

    let bytes = Encoder::new(&parse("bytes").unwrap(), Mode::Padded).map_err(|e| e.to_string())?;
    let mut strings = prefix_strings(&mut rng, 100_000);
    for i in 0..5_000 {
        let j = rng.random_range(0..strings.len());
        strings[i * 20] = strings[j].clone();
    }
    let keys: Vec<_> = strings
        .into_iter()
        .map(|s| bytes.encode(&nextify::ElementValue::bytes(s)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut oracle: Vec<usize> = (0..keys.len()).collect();
    oracle.sort_by(|&a, &b| keys[a].as_bytes().cmp(keys[b].as_bytes()));
    let duplicates = oracle.windows(2).filter(|w| keys[w[0]] == keys[w[1]]).count();
    for parallel in [false, true] {
        let mut cells: Vec<LongCell> = keys
            .iter()
            .enumerate()
            .map(|(i, k)| LongCell {
                key: k.as_bytes(),
                reference: i as u64,
            })
            .collect();
        sort_cells(&mut cells, &SortPolicy { parallel, ..SortPolicy::default() });
        if cells.iter().map(|c| c.reference as usize).ne(oracle.iter().copied()) {
            return Err(format!("prefix strings differ from a stable sort (parallel: {parallel})"));
        }
    }
    within(
        Duration::from_secs(60),
        start,
        format!("10^6 uint64 keys and 10^5 prefix strings ({duplicates} duplicates) match a stable sort"),
    )
}

fn benchmark() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_nextify"))
        .args(["bench", "--gen", "uniform", "--n", "2^10..2^22", "--repeat", "3"])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("bench failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    if header != ["generator", "n", "nextify_ns", "radix_sort_ns", "comparison_sort_ns", "ratio"] {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut sizes = Vec::new();
    let mut gate = None;
    for record in reader.records() {
        let record = record.map_err(|e| e.to_string())?;
        let n: usize = record[1].parse().map_err(|_| "bad n")?;
        let radix: f64 = record[3].parse().map_err(|_| "bad radix time")?;
        let comparison: f64 = record[4].parse().map_err(|_| "bad comparison time")?;
        let _: f64 = record[5].parse().map_err(|_| "bad ratio")?;
        if n == 1 << 20 {
            gate = Some((radix, comparison));
        }
        sizes.push(n);
    }
    let want: Vec<usize> = (10..=22).map(|k| 1 << k).collect();
    if sizes != want {
        return Err(format!("rows for {sizes:?}"));
    }
    let (radix, comparison) = gate.ok_or("no 2^20 row")?;
    let detail = format!(
        "2^10..2^22 rows; at 2^20 radix {:.1} ms, comparison {:.1} ms, ratio {:.2}",
        radix / 1e6,
        comparison / 1e6,
        comparison / radix
    );
    if radix > 2.0 * comparison {
        Err(format!("{detail}: radix more than 2x slower"))
    } else {
        Ok(detail)
    }
}

fn parser() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let config = TreeConfig::default();
    for _ in 0..10_000 {
        let tree = random_tree(&mut rng, &config);
        let text = serialize(&tree);
        let parsed = parse(&text).map_err(|e| format!("{text}: {e}"))?;
        if parsed != tree || serialize(&parsed) != text {
            return Err(format!("{text} does not round-trip"));
        }
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/errors");
    let mut fixtures = 0;
    for entry in fs::read_dir(&dir).map_err(|e| format!("{}: {e}", dir.display()))? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let text = fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let expect = text.lines().next().unwrap_or("").trim_start_matches("// expect ");
        let err = match parse(&text) {
            Ok(_) => return Err(format!("{} parsed", path.display())),
            Err(e) => e,
        };
        let kind = match err {
            ParseError::Syntax { .. } => "syntax",
            ParseError::Validation { .. } => "validation",
        };
        if format!("{} {kind}", err.span()) != expect {
            return Err(format!("{}: got {} {kind}, want {expect}", path.display(), err.span()));
        }
        fixtures += 1;
    }
    within(
        Duration::from_secs(30),
        start,
        format!("10^4 round-trips, {fixtures} error fixtures positioned"),
    )
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn main() -> ExitCode {
    let trials = run_trials();
    let criteria: [(&str, Box<dyn Fn() -> Outcome>); 8] = [
        ("golden tables", Box::new(golden_tables)),
        ("oracle universality", Box::new(|| universality(&trials))),
        ("size law", Box::new(|| size_law(&trials))),
        ("hierar count header", Box::new(hierar_header)),
        ("rational keys", Box::new(rationals)),
        ("sorter equivalence", Box::new(sorter)),
        ("benchmark report", Box::new(benchmark)),
        ("tsodl parser", Box::new(parser)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
