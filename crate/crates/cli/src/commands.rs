use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use nextify::dataset::{parse_record, records};
use nextify::selftest::{run_selftest, SelftestConfig};
use nextify::sorter::{sort_cells, LongCell, ShortCell, SortPolicy};
use nextify::tsodl::parse;
use nextify::{ElementValue, EncodedKey, Encoder, Mode, NanPolicy, OrderNode};

use crate::bench::{parse_sizes, run_bench, write_csv, BenchConfig, Generator};
use crate::CliError;

pub(crate) struct Inputs {
    pub order: PathBuf,
    pub data: PathBuf,
    pub skip_bad: bool,
    pub nan: NanPolicy,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(io_err)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

pub(crate) fn read_order(path: &Path) -> Result<OrderNode, CliError> {
    parse(&read_text(path)?).map_err(|source| CliError::Order {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn validate(order: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let tree = read_order(order)?;
    let stats = nextify::validate(&tree).map_err(|e| CliError::Internal(format!("parsed order fails validation: {e}")))?;
    writeln!(out, "{stats}")?;
    Ok(())
}

/// A dataset record that parsed and encoded.
struct Keyed<'a> {
    /// 0-based among the dataset's records.
    index: usize,
    text: &'a str,
    key: EncodedKey,
}

/// Parses and encodes every record; bad records abort, or are reported and
/// dropped with `skip_bad`.
fn encode_records<'a>(
    encoder: &Encoder,
    data: &'a str,
    skip_bad: bool,
    err: &mut dyn Write,
) -> Result<Vec<Keyed<'a>>, CliError> {
    let mut parsed: Vec<(usize, usize, &str, ElementValue)> = Vec::new();
    for (index, record) in records(data).enumerate() {
        match parse_record(encoder.tree(), record.text, record.line) {
            Ok(value) => parsed.push((index, record.line, record.text, value)),
            Err(e) if skip_bad => writeln!(err, "skipped: {e}")?,
            Err(e) => return Err(e.into()),
        }
    }
    let values: Vec<ElementValue> = parsed.iter().map(|p| p.3.clone()).collect();
    let mut keyed = Vec::with_capacity(parsed.len());
    for ((index, line, text, _), key) in parsed.into_iter().zip(encoder.encode_batch(&values)) {
        match key {
            Ok(key) => keyed.push(Keyed { index, text, key }),
            Err(source) => {
                let e = CliError::Encode { line, source };
                if skip_bad && e.exit_code() == 1 {
                    writeln!(err, "skipped: {e}")?;
                } else {
                    return Err(e);
                }
            }
        }
    }
    Ok(keyed)
}

pub(crate) fn encode(
    inputs: &Inputs,
    mode: Mode,
    hex: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let tree = read_order(&inputs.order)?;
    let encoder = Encoder::new(&tree, mode).map_err(CliError::Encoder)?.with_nan_policy(inputs.nan);
    let data = read_text(&inputs.data)?;
    for record in encode_records(&encoder, &data, inputs.skip_bad, err)? {
        if hex {
            writeln!(out, "{}", record.key.to_hex())?;
        } else {
            let len = u32::try_from(record.key.len()).map_err(|_| CliError::Internal("key longer than 4 GiB".into()))?;
            out.write_all(&len.to_be_bytes())?;
            out.write_all(record.key.as_bytes())?;
        }
    }
    Ok(())
}

/// Packed keys of at most eight bytes sort as inline `u64`s.
pub(crate) fn short_key_encoder(tree: &OrderNode) -> Option<Encoder> {
    let encoder = Encoder::new(tree, Mode::Packed).ok()?;
    (encoder.packed_width()? <= 8).then_some(encoder)
}

pub(crate) fn sort(
    inputs: &Inputs,
    indices: bool,
    parallel: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let tree = read_order(&inputs.order)?;
    let encoder = match short_key_encoder(&tree) {
        Some(encoder) => encoder,
        None => Encoder::new(&tree, Mode::Padded).map_err(CliError::Encoder)?,
    }
    .with_nan_policy(inputs.nan);
    let data = read_text(&inputs.data)?;
    let keyed = encode_records(&encoder, &data, inputs.skip_bad, err)?;
    let policy = SortPolicy {
        parallel,
        ..SortPolicy::default()
    };
    let order: Vec<u64> = if encoder.mode() == Mode::Packed {
        let mut cells: Vec<ShortCell> = keyed
            .iter()
            .enumerate()
            .map(|(i, k)| ShortCell::from_key_bytes(k.key.as_bytes(), i as u64))
            .collect();
        sort_cells(&mut cells, &policy);
        cells.iter().map(|c| c.reference).collect()
    } else {
        let mut cells: Vec<LongCell> = keyed
            .iter()
            .enumerate()
            .map(|(i, k)| LongCell {
                key: k.key.as_bytes(),
                reference: i as u64,
            })
            .collect();
        sort_cells(&mut cells, &policy);
        cells.iter().map(|c| c.reference).collect()
    };
    for reference in order {
        let record = &keyed[reference as usize];
        if indices {
            writeln!(out, "{}", record.index)?;
        } else {
            writeln!(out, "{}", record.text)?;
        }
    }
    Ok(())
}

pub(crate) fn bench(
    order: Option<&Path>,
    sizes: &str,
    generator: Option<Generator>,
    repeat: usize,
    seed: u64,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let tree = order.map(read_order).transpose()?;
    let generator = generator.unwrap_or(if tree.is_some() {
        Generator::Custom
    } else {
        Generator::Uniform
    });
    if generator == Generator::Custom && tree.is_none() {
        return Err(CliError::Usage("--gen custom needs an order file".into()));
    }
    let config = BenchConfig {
        generator,
        sizes: parse_sizes(sizes).map_err(CliError::Usage)?,
        repeat: repeat.max(1),
        seed,
        tree,
    };
    let rows = run_bench(&config)?;
    write_csv(&rows, out)
}

pub(crate) fn selftest(seed: u64, golden: Option<&Path>, trees: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let mut config = SelftestConfig {
        seed,
        trees,
        ..SelftestConfig::default()
    };
    if let Some(path) = golden {
        config.golden = read_text(path)?;
    }
    let results = run_selftest(&config);
    for r in &results {
        writeln!(out, "{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail)?;
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    if failed.is_empty() {
        writeln!(out, "all {} checks passed", results.len())?;
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("failed: {}", failed.join(", "))))
    }
}
