use std::fs;
use std::path::Path;

use cocluster::io::{self, Format};
use cocluster::synth::SMOOTHING_MASS;
use cocluster::{fixture, RawMatrix};

use crate::{FormatArg, Failure, InputArgs};

pub struct Dataset {
    pub name: String,
    pub raw: RawMatrix,
    pub row_truth: Option<Vec<usize>>,
    pub col_truth: Option<Vec<usize>>,
}

pub fn format_of(arg: Option<FormatArg>, delimiter: Option<char>, path: &Path) -> Result<Format, Failure> {
    let delim = |default: u8| -> Result<u8, Failure> {
        match delimiter {
            None => Ok(default),
            Some(c) if c.is_ascii() => Ok(c as u8),
            Some(c) => Err(Failure::config(format!("delimiter {c:?} is not ASCII"))),
        }
    };
    Ok(match arg {
        Some(FormatArg::Csv) => Format::Dense { delimiter: delim(b',')? },
        Some(FormatArg::Tsv) => Format::Dense { delimiter: delim(b'\t')? },
        Some(FormatArg::Triplets) => Format::Triplets,
        Some(FormatArg::Mtx) => Format::MatrixMarket,
        None => match Format::from_path(path) {
            Format::Dense { delimiter: d } => Format::Dense { delimiter: delim(d)? },
            f => f,
        },
    })
}

pub fn extension(format: FormatArg) -> &'static str {
    match format {
        FormatArg::Csv => "csv",
        FormatArg::Tsv => "tsv",
        FormatArg::Triplets => "txt",
        FormatArg::Mtx => "mtx",
    }
}

pub fn load(args: &InputArgs) -> Result<Dataset, Failure> {
    let mut ds = if let Some(name) = &args.fixture {
        let f = fixture(name)?;
        let truth = f.clustering("reference").or_else(|| f.clustering("ground_truth"));
        Dataset {
            name: name.clone(),
            raw: f.raw.clone(),
            row_truth: truth.map(|cc| cc.phi().to_vec()),
            col_truth: truth.map(|cc| cc.psi().to_vec()),
        }
    } else if let Some(path) = &args.input {
        let format = format_of(args.format, args.delimiter, path)?;
        let raw = match format {
            Format::Triplets => io::load_triplets_with_base(path, args.base)?,
            f => io::load(path, f)?,
        };
        let name = path.file_stem().map_or("input".into(), |s| s.to_string_lossy().into_owned());
        Dataset { name, raw, row_truth: None, col_truth: None }
    } else {
        return Err(Failure::config("one of --input or --fixture is required"));
    };
    if args.smooth {
        ds.raw = ds.raw.smoothed(SMOOTHING_MASS)?;
    }
    Ok(ds)
}

pub fn read_labels(path: &Path) -> Result<Vec<usize>, Failure> {
    read_label_sets(path)?
        .into_iter()
        .enumerate()
        .map(|(i, set)| match set.as_slice() {
            [l] => Ok(*l),
            _ => Err(Failure { code: 1, message: format!("{}: line {} must hold one label", path.display(), i + 1) }),
        })
        .collect()
}

/// One element per nonempty line; labels on a line are separated by commas
/// or whitespace.
pub fn read_label_sets(path: &Path) -> Result<Vec<Vec<usize>>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })?;
    let mut sets = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let set = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .map(|f| f.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| Failure { code: 1, message: format!("{}: line {}: bad label", path.display(), i + 1) })?;
        sets.push(set);
    }
    Ok(sets)
}

pub fn write_labels(path: &Path, labels: &[usize]) -> Result<(), Failure> {
    let text: String = labels.iter().map(|l| format!("{l}\n")).collect();
    fs::write(path, text).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })
}
