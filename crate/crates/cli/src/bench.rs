//! Benchmark harness. For every size the data is generated once, then each
//! repeat times encoding, the radix sort and the comparison sort on the same
//! cells; reported timings are medians over the repeats.
//!
//! CSV columns: `generator,n,nextify_ns,radix_sort_ns,comparison_sort_ns,ratio`
//! where `ratio = comparison_sort_ns / radix_sort_ns` (0 when undefined).

use std::io::Write;
use std::time::Instant;

use clap::ValueEnum;
use nextify::gen::random_element;
use nextify::sorter::{comparison_sort, sort_cells, LongCell, ShortCell, SortKey, SortPolicy};
use nextify::tsodl::parse;
use nextify::{ElementValue, Encoder, Mode, NanPolicy, OrderNode, Primitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::short_key_encoder;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    /// Uniform random 64-bit unsigned integers.
    Uniform,
    /// Byte strings of length 100 to 128 sharing a 90-byte prefix.
    Prefix,
    /// Random elements of the given order.
    Custom,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Uniform => "uniform",
            Generator::Prefix => "prefix",
            Generator::Custom => "custom",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub generator: Generator,
    pub sizes: Vec<usize>,
    pub repeat: usize,
    pub seed: u64,
    /// Required for [`Generator::Custom`].
    pub tree: Option<OrderNode>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub generator: Generator,
    pub n: usize,
    pub nextify_ns: u128,
    pub radix_sort_ns: u128,
    pub comparison_sort_ns: u128,
    pub ratio: f64,
}

/// `1024`, `2^10`, `2^10..2^22` (doubling), comma-separated.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>, String> {
    fn one(s: &str) -> Result<usize, String> {
        let s = s.trim();
        let bad = || format!("bad size `{s}`");
        match s.split_once('^') {
            Some(("2", k)) => {
                let k: u32 = k.trim().parse().map_err(|_| bad())?;
                1usize.checked_shl(k).filter(|_| k < usize::BITS).ok_or_else(bad)
            }
            Some(_) => Err(bad()),
            None => s.parse().map_err(|_| bad()),
        }
    }
    let mut sizes = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let (mut n, hi) = (one(lo)?, one(hi)?);
                if n == 0 || n > hi {
                    return Err(format!("bad range `{}`", part.trim()));
                }
                while n <= hi {
                    sizes.push(n);
                    n = match n.checked_mul(2) {
                        Some(next) => next,
                        None => break,
                    };
                }
            }
            None => sizes.push(one(part)?),
        }
    }
    if sizes.is_empty() {
        return Err("no sizes given".into());
    }
    Ok(sizes)
}

/// The common-prefix scenario: lengths 100..=128 over `a..z`, first 90
/// bytes shared.
pub fn prefix_strings(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<u8>> {
    let prefix: Vec<u8> = (0..90).map(|_| rng.random_range(b'a'..=b'z')).collect();
    (0..n)
        .map(|_| {
            let len = rng.random_range(100..=128);
            let mut s = prefix.clone();
            s.extend((90..len).map(|_| rng.random_range(b'a'..=b'z')));
            s
        })
        .collect()
}

fn generate(config: &BenchConfig, tree: &OrderNode, n: usize, rng: &mut ChaCha8Rng) -> Vec<ElementValue> {
    match config.generator {
        Generator::Uniform => (0..n)
            .map(|_| ElementValue::Primitive(Primitive::Unsigned(rng.random())))
            .collect(),
        Generator::Prefix => prefix_strings(rng, n).into_iter().map(ElementValue::bytes).collect(),
        Generator::Custom => (0..n).map(|_| random_element(rng, tree)).collect(),
    }
}

fn median(mut samples: Vec<u128>) -> u128 {
    samples.sort_unstable();
    samples[samples.len() / 2]
}

/// Times both sorts on copies of `cells`; fails if they disagree.
fn time_sorts<T: SortKey + Copy + Send>(cells: &[T]) -> Result<(u128, u128), CliError> {
    let mut radix = cells.to_vec();
    let start = Instant::now();
    sort_cells(&mut radix, &SortPolicy::default());
    let radix_ns = start.elapsed().as_nanos();
    let mut comparison = cells.to_vec();
    let start = Instant::now();
    comparison_sort(&mut comparison);
    let comparison_ns = start.elapsed().as_nanos();
    if radix.iter().map(T::reference).ne(comparison.iter().map(T::reference)) {
        return Err(CliError::Internal("radix and comparison sorts disagree".into()));
    }
    Ok((radix_ns, comparison_ns))
}

fn bench_size(config: &BenchConfig, tree: &OrderNode, n: usize, rng: &mut ChaCha8Rng) -> Result<BenchRow, CliError> {
    let encoder = match short_key_encoder(tree) {
        Some(encoder) => encoder,
        None => Encoder::new(tree, Mode::Padded).map_err(CliError::Encoder)?,
    }
    .with_nan_policy(NanPolicy::High);
    let values = generate(config, tree, n, rng);
    let (mut encode_ns, mut radix_ns, mut comparison_ns) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..config.repeat {
        let start = Instant::now();
        let mut keys = Vec::new();
        let mut ends = Vec::with_capacity(n);
        for value in &values {
            encoder
                .encode_into(value, &mut keys)
                .map_err(|e| CliError::Internal(format!("generated element failed to encode: {e}")))?;
            ends.push(keys.len());
        }
        encode_ns.push(start.elapsed().as_nanos());
        let slices = ends.iter().scan(0, |start, &end| {
            let key = &keys[*start..end];
            *start = end;
            Some(key)
        });
        let (radix, comparison) = if encoder.mode() == Mode::Packed {
            let cells: Vec<ShortCell> = slices
                .enumerate()
                .map(|(i, k)| ShortCell::from_key_bytes(k, i as u64))
                .collect();
            time_sorts(&cells)?
        } else {
            let cells: Vec<LongCell> = slices
                .enumerate()
                .map(|(i, key)| LongCell {
                    key,
                    reference: i as u64,
                })
                .collect();
            time_sorts(&cells)?
        };
        radix_ns.push(radix);
        comparison_ns.push(comparison);
    }
    let (radix, comparison) = (median(radix_ns), median(comparison_ns));
    Ok(BenchRow {
        generator: config.generator,
        n,
        nextify_ns: median(encode_ns),
        radix_sort_ns: radix,
        comparison_sort_ns: comparison,
        ratio: if radix == 0 {
            0.0
        } else {
            comparison as f64 / radix as f64
        },
    })
}

pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>, CliError> {
    let tree = match (config.generator, &config.tree) {
        (Generator::Uniform, _) => parse("uint64").expect("built-in order"),
        (Generator::Prefix, _) => parse("bytes").expect("built-in order"),
        (Generator::Custom, Some(tree)) => tree.clone(),
        (Generator::Custom, None) => return Err(CliError::Usage("--gen custom needs an order file".into())),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rows = Vec::with_capacity(config.sizes.len());
    for &n in &config.sizes {
        rows.push(if n == 0 {
            BenchRow {
                generator: config.generator,
                n,
                nextify_ns: 0,
                radix_sort_ns: 0,
                comparison_sort_ns: 0,
                ratio: 0.0,
            }
        } else {
            bench_size(config, &tree, n, &mut rng)?
        });
    }
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow], out: &mut dyn Write) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| CliError::Output(e.into());
    writer
        .write_record(["generator", "n", "nextify_ns", "radix_sort_ns", "comparison_sort_ns", "ratio"])
        .map_err(csv_err)?;
    for row in rows {
        writer
            .write_record([
                row.generator.name().to_string(),
                row.n.to_string(),
                row.nextify_ns.to_string(),
                row.radix_sort_ns.to_string(),
                row.comparison_sort_ns.to_string(),
                format!("{:.3}", row.ratio),
            ])
            .map_err(csv_err)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_sizes("1,2^3, 10").unwrap(), [1, 8, 10]);
        assert_eq!(parse_sizes("2^10..2^13").unwrap(), [1024, 2048, 4096, 8192]);
        assert_eq!(parse_sizes("3..12").unwrap(), [3, 6, 12]);
        assert_eq!(parse_sizes("0").unwrap(), [0]);
        for bad in ["", "x", "3^2", "2^99", "8..2", "0..4"] {
            assert!(parse_sizes(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn rows_for_every_generator() {
        let custom = parse("lex(0, omega, ([sum(finite(2), (int8, float32))]))").unwrap();
        for (generator, tree) in [
            (Generator::Uniform, None),
            (Generator::Prefix, None),
            (Generator::Custom, Some(custom)),
        ] {
            let config = BenchConfig {
                generator,
                sizes: vec![0, 1, 100],
                repeat: 2,
                seed: 3,
                tree,
            };
            let rows = run_bench(&config).unwrap();
            assert_eq!(rows.len(), 3);
            assert_eq!(rows[0].radix_sort_ns, 0);
            let mut csv = Vec::new();
            write_csv(&rows, &mut csv).unwrap();
            let text = String::from_utf8(csv).unwrap();
            assert!(text.starts_with("generator,n,nextify_ns,radix_sort_ns,comparison_sort_ns,ratio\n"));
            assert_eq!(text.lines().count(), 4);
        }
    }
}
