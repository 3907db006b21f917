//! Labeled datasets: validation, CSV and LIBSVM readers, and seeded
//! synthetic generators.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Margin used by [`gen_noisy`].
pub const DEFAULT_MARGIN: f64 = 0.5;

/// Stream offset for the label-flip permutation in [`gen_noisy`].
const FLIP_STREAM: u64 = 0xD1B5_4A32_D192_ED03;

/// Membership in the primary (`A`) or secondary (`B`) part of a combined dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subset {
    A,
    B,
}

/// `N` samples in `ℝ^d` with labels in `{−1, +1}`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    labels: Vec<f64>,
    subsets: Option<Vec<Subset>>,
    n: usize,
    d: usize,
}

impl Dataset {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Usage("dataset needs at least one sample".into()));
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(Error::Usage("dataset needs at least one feature".into()));
        }
        if labels.len() != n {
            return Err(Error::Usage(format!(
                "{} labels for {n} samples",
                labels.len()
            )));
        }
        let mut features = Vec::with_capacity(n * d);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != d {
                return Err(Error::Usage(format!(
                    "row {i} has {} features, expected {d}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::Domain(format!(
                    "feature {j} of row {i} is not finite"
                )));
            }
            features.extend(row);
        }
        if let Some(i) = labels.iter().position(|&a| a != 1.0 && a != -1.0) {
            return Err(Error::Domain(format!(
                "label of row {i} is {}, not ±1",
                labels[i]
            )));
        }
        Ok(Self {
            features,
            labels,
            subsets: None,
            n,
            d,
        })
    }

    pub fn with_subsets(mut self, subsets: Vec<Subset>) -> Result<Self> {
        if subsets.len() != self.n {
            return Err(Error::Usage(format!(
                "{} subset flags for {} samples",
                subsets.len(),
                self.n
            )));
        }
        self.subsets = Some(subsets);
        Ok(self)
    }

    /// Stacks `other` below `self`. Subset flags are kept only if both have them.
    pub fn concat(&self, other: &Dataset) -> Result<Dataset> {
        if self.d != other.d {
            return Err(Error::Usage(format!(
                "cannot stack {}-feature and {}-feature datasets",
                self.d, other.d
            )));
        }
        let mut features = self.features.clone();
        features.extend_from_slice(&other.features);
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        let subsets = match (&self.subsets, &other.subsets) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Ok(Dataset {
            features,
            labels,
            subsets,
            n: self.n + other.n,
            d: self.d,
        })
    }

    /// Applies `f` to every feature value of column `j`.
    pub fn map_feature(&self, j: usize, f: impl Fn(f64) -> f64) -> Result<Dataset> {
        let rows = (0..self.n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r[j] = f(r[j]);
                r
            })
            .collect();
        let ds = Dataset::new(rows, self.labels.clone())?;
        match &self.subsets {
            Some(s) => ds.with_subsets(s.clone()),
            None => Ok(ds),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn feature(&self, i: usize, j: usize) -> f64 {
        self.features[i * self.d + j]
    }

    /// `+1.0` or `-1.0`.
    pub fn label(&self, i: usize) -> f64 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn subsets(&self) -> Option<&[Subset]> {
        self.subsets.as_deref()
    }

    /// Writes `label,f1,…,fd[,subset]` with a header row. Values use Rust's
    /// shortest round-trip formatting, so reading the file back is exact.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let mut header = vec!["label".to_string()];
        header.extend((1..=self.d).map(|j| format!("f{j}")));
        if self.subsets.is_some() {
            header.push("subset".into());
        }
        writeln!(out, "{}", header.join(","))?;
        for i in 0..self.n {
            let mut fields = vec![format!("{}", self.labels[i] as i32)];
            fields.extend(self.row(i).iter().map(|v| format!("{v}")));
            if let Some(s) = &self.subsets {
                fields.push(format!("{:?}", s[i]));
            }
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut file = std::io::BufWriter::new(File::create(path)?);
        self.write_csv(&mut file)?;
        file.flush()?;
        Ok(())
    }
}

fn parse_label(raw: &str, line: usize) -> Result<f64> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("label '{raw}' is not numeric")))?;
    if v == 1.0 {
        Ok(1.0)
    } else if v == -1.0 || v == 0.0 {
        Ok(-1.0)
    } else {
        Err(Error::parse(
            line,
            format!("label '{raw}' is not one of -1, +1, 0, 1"),
        ))
    }
}

fn parse_subset(raw: &str, line: usize) -> Result<Subset> {
    match raw.trim() {
        "A" | "a" => Ok(Subset::A),
        "B" | "b" => Ok(Subset::B),
        other => Err(Error::parse(
            line,
            format!("subset '{other}' is not A or B"),
        )),
    }
}

/// Parses a comma-separated file with a header row. `label_column` names the
/// label column (values `±1`, or `0/1` with 0 read as −1); every other column
/// except `subset_column` is a feature.
pub fn read_csv<R: Read>(
    reader: R,
    label_column: &str,
    subset_column: Option<&str>,
) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(1, e.to_string()))?
        .clone();
    let position = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::parse(1, format!("no column named '{name}'")))
    };
    let label_idx = position(label_column)?;
    let subset_idx = subset_column.map(position).transpose()?;
    let feature_idx: Vec<usize> = (0..headers.len())
        .filter(|&j| j != label_idx && Some(j) != subset_idx)
        .collect();

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut subsets = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        labels.push(parse_label(&record[label_idx], line)?);
        if let Some(s) = subset_idx {
            subsets.push(parse_subset(&record[s], line)?);
        }
        let row = feature_idx
            .iter()
            .map(|&j| {
                let cell = record[j].trim();
                cell.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| {
                        Error::parse(line, format!("cell '{cell}' is not a finite number"))
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let ds = Dataset::new(rows, labels)?;
    if subset_idx.is_some() {
        ds.with_subsets(subsets)
    } else {
        Ok(ds)
    }
}

pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: &str,
    subset_column: Option<&str>,
) -> Result<Dataset> {
    read_csv(File::open(path)?, label_column, subset_column)
}

/// Parses LIBSVM lines `<label> <index>:<value> …` with 1-based indices.
/// Missing indices are zero; the dimension is the largest index seen.
/// Text after `#` is ignored, as are blank lines.
pub fn read_libsvm<R: Read>(reader: R) -> Result<Dataset> {
    let mut sparse: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut labels = Vec::new();
    let mut dim = 0usize;
    for (k, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = k + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label = parse_label(tokens.next().unwrap_or(""), lineno)?;
        let mut entries: Vec<(usize, f64)> = Vec::new();
        for tok in tokens {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| Error::parse(lineno, format!("token '{tok}' is not index:value")))?;
            let idx: usize = idx
                .parse()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| Error::parse(lineno, format!("bad index in '{tok}'")))?;
            let val: f64 = val
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::parse(lineno, format!("bad value in '{tok}'")))?;
            if entries.iter().any(|(i, _)| *i == idx) {
                return Err(Error::parse(lineno, format!("index {idx} repeated")));
            }
            dim = dim.max(idx);
            entries.push((idx, val));
        }
        sparse.push(entries);
        labels.push(label);
    }
    let dim = dim.max(1);
    let rows = sparse
        .into_iter()
        .map(|entries| {
            let mut row = vec![0.0; dim];
            for (i, v) in entries {
                row[i - 1] = v;
            }
            row
        })
        .collect();
    Dataset::new(rows, labels)
}

pub fn load_libsvm(path: impl AsRef<Path>) -> Result<Dataset> {
    read_libsvm(File::open(path)?)
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "sample count must be even and >= 2, got {n}"
        )));
    }
    Ok(())
}

/// Two axis-aligned boxes in 2-D. Even-indexed samples are positive with
/// `x₀ ∈ [margin, margin + 1)`, odd ones negative with `x₀ ∈ (−margin − 1, −margin]`;
/// `x₁` is uniform in `[−1, 1)`. The stump `sign(x₀)` separates them.
pub fn gen_blobs(seed: u64, n: usize, margin: f64) -> Result<Dataset> {
    check_size(n)?;
    if !(margin > 0.0 && margin.is_finite()) {
        return Err(Error::Config(format!(
            "margin must be positive, got {margin}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = if i % 2 == 0 { 1.0 } else { -1.0 };
        let x0 = label * (margin + rng.next_f64());
        let x1 = rng.uniform(-1.0, 1.0);
        rows.push(vec![x0, x1]);
        labels.push(label);
    }
    Dataset::new(rows, labels)
}

/// [`gen_blobs`] with [`DEFAULT_MARGIN`], then `round(flip_rate · n)` labels
/// flipped at positions drawn by a partial Fisher–Yates shuffle seeded with
/// `seed ^ 0xD1B54A32D192ED03`.
pub fn gen_noisy(seed: u64, n: usize, flip_rate: f64) -> Result<Dataset> {
    if !(0.0..0.5).contains(&flip_rate) {
        return Err(Error::Config(format!(
            "flip rate must be in [0, 0.5), got {flip_rate}"
        )));
    }
    let clean = gen_blobs(seed, n, DEFAULT_MARGIN)?;
    let flips = (flip_rate * n as f64).round() as usize;
    let mut rng = SplitMix64::new(seed ^ FLIP_STREAM);
    let mut idx: Vec<usize> = (0..n).collect();
    for k in 0..flips {
        let j = k + rng.below(n - k);
        idx.swap(k, j);
    }
    let mut labels = clean.labels.clone();
    for &i in &idx[..flips] {
        labels[i] = -labels[i];
    }
    let rows = (0..n).map(|i| clean.row(i).to_vec()).collect();
    Dataset::new(rows, labels)
}

/// Points uniform in `[−1, 1)²` labeled by `sign(x₀ + x₁)`, rejecting those
/// with `|x₀ + x₁| < margin`. Linearly separable but not by any single stump.
/// Labels alternate `+1, −1, …` by index.
pub fn gen_diagonal(seed: u64, n: usize, margin: f64) -> Result<Dataset> {
    check_size(n)?;
    if !(margin > 0.0 && margin < 1.5) {
        return Err(Error::Config(format!(
            "margin must be in (0, 1.5), got {margin}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = if i % 2 == 0 { 1.0 } else { -1.0 };
        loop {
            let x0 = rng.uniform(-1.0, 1.0);
            let x1 = rng.uniform(-1.0, 1.0);
            let s = x0 + x1;
            if s * label >= margin {
                rows.push(vec![x0, x1]);
                break;
            }
        }
        labels.push(label);
    }
    Dataset::new(rows, labels)
}

/// Combined-set data: `n_a` clean [`gen_blobs`] samples flagged `A`
/// followed by `n_b` [`gen_noisy`] samples (seed `seed + 100`) flagged `B`.
pub fn gen_combined(
    seed: u64,
    n_a: usize,
    n_b: usize,
    margin: f64,
    flip_rate: f64,
) -> Result<Dataset> {
    let a = gen_blobs(seed, n_a, margin)?.with_subsets(vec![Subset::A; n_a])?;
    let b =
        gen_noisy(seed.wrapping_add(100), n_b, flip_rate)?.with_subsets(vec![Subset::B; n_b])?;
    a.concat(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_basic() {
        let ds = read_csv("label,f1\n1,0.5\n-1,-0.5\n".as_bytes(), "label", None).unwrap();
        assert_eq!((ds.n(), ds.d()), (2, 1));
        assert_eq!(ds.labels(), &[1.0, -1.0]);
        assert_eq!(ds.row(1), &[-0.5]);
    }

    #[test]
    fn csv_zero_one_labels_and_subsets() {
        let text = "x,y,label,grp\n0.1,2,0,A\n0.3,4,1,B\n";
        let ds = read_csv(text.as_bytes(), "label", Some("grp")).unwrap();
        assert_eq!(ds.labels(), &[-1.0, 1.0]);
        assert_eq!(ds.row(0), &[0.1, 2.0]);
        assert_eq!(ds.subsets().unwrap(), &[Subset::A, Subset::B]);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let bad_label = read_csv("label,f1\n1,0.5\n2,0.1\n".as_bytes(), "label", None);
        assert!(
            matches!(bad_label, Err(Error::Parse { line: 3, .. })),
            "{bad_label:?}"
        );
        let bad_cell = read_csv("label,f1\n1,abc\n".as_bytes(), "label", None);
        assert!(matches!(bad_cell, Err(Error::Parse { line: 2, .. })));
        let ragged = read_csv("label,f1\n1,0.5,3\n".as_bytes(), "label", None);
        assert!(matches!(ragged, Err(Error::Parse { .. })));
        let missing = read_csv("y,f1\n1,0.5\n".as_bytes(), "label", None);
        assert!(matches!(missing, Err(Error::Parse { line: 1, .. })));
        let subset = read_csv("label,f1,s\n1,0.5,C\n".as_bytes(), "label", Some("s"));
        assert!(matches!(subset, Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn libsvm_basic() {
        let ds = read_libsvm("+1 1:0.5 3:1.0\n-1\n".as_bytes()).unwrap();
        assert_eq!(ds.d(), 3);
        assert_eq!(ds.row(0), &[0.5, 0.0, 1.0]);
        assert_eq!(ds.row(1), &[0.0, 0.0, 0.0]);
        assert_eq!(ds.labels(), &[1.0, -1.0]);
    }

    #[test]
    fn libsvm_errors() {
        for (text, line) in [
            ("+1 1:0.5\n-1 2=3\n", 2),
            ("+1 0:1\n", 1),
            ("3 1:1\n", 1),
            ("+1 1:x\n", 1),
            ("+1 1:1 1:2\n", 1),
        ] {
            let err = read_libsvm(text.as_bytes());
            assert!(
                matches!(err, Err(Error::Parse { line: l, .. }) if l == line),
                "{text:?}"
            );
        }
    }

    #[test]
    fn blobs_shape_and_determinism() {
        let a = gen_blobs(0, 100, 0.5).unwrap();
        let b = gen_blobs(0, 100, 0.5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_blobs(1, 100, 0.5).unwrap());
        for i in 0..a.n() {
            assert!(a.label(i) * a.feature(i, 0) >= 0.5);
        }
        assert!(gen_blobs(0, 5, 0.5).is_err());
        assert!(gen_blobs(0, 4, 0.0).is_err());
    }

    #[test]
    fn noisy_zero_rate_is_blobs() {
        assert_eq!(
            gen_noisy(3, 100, 0.0).unwrap(),
            gen_blobs(3, 100, DEFAULT_MARGIN).unwrap()
        );
        let noisy = gen_noisy(3, 100, 0.2).unwrap();
        let clean = gen_blobs(3, 100, DEFAULT_MARGIN).unwrap();
        let flipped = (0..100)
            .filter(|&i| noisy.label(i) != clean.label(i))
            .count();
        assert_eq!(flipped, 20);
        assert!(gen_noisy(3, 100, 0.5).is_err());
    }

    #[test]
    fn diagonal_respects_margin() {
        let ds = gen_diagonal(2, 60, 0.2).unwrap();
        for i in 0..ds.n() {
            assert!(ds.label(i) * (ds.feature(i, 0) + ds.feature(i, 1)) >= 0.2);
        }
    }

    #[test]
    fn combined_generator_flags() {
        let ds = gen_combined(0, 6, 4, 0.3, 0.25).unwrap();
        assert_eq!(ds.n(), 10);
        let flags = ds.subsets().unwrap();
        assert!(flags[..6].iter().all(|f| *f == Subset::A));
        assert!(flags[6..].iter().all(|f| *f == Subset::B));
        assert_eq!(ds.row(7), gen_noisy(100, 4, 0.25).unwrap().row(1));
    }
}
