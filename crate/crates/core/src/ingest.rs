//! CSV and TSV input of colored points.
//!
//! The header names the columns: `x1, ..., xd, color` and an optional
//! `weight`. Coordinates are the columns before `color`. Color labels are
//! interned in order of first appearance.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::entropy::ColorId;
use crate::error::{Error, Result};
use crate::points::ColoredPointSet;

/// Field separator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    /// `.tsv` and `.tab` files are tab separated, everything else comma separated.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("tsv" | "tab") => Format::Tsv,
            _ => Format::Csv,
        }
    }

    fn delimiter(self) -> u8 {
        match self {
            Format::Csv => b',',
            Format::Tsv => b'\t',
        }
    }
}

fn parse_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Reads points from CSV or TSV with a header row.
pub fn read_points<R: Read>(input: R, format: Format) -> Result<ColoredPointSet> {
    let mut rd = csv::ReaderBuilder::new().delimiter(format.delimiter()).has_headers(true).trim(csv::Trim::All).from_reader(input);
    let header = rd.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    let names: Vec<String> = header.iter().map(|h| h.to_ascii_lowercase()).collect();
    let color_col = names.iter().position(|h| h == "color").ok_or_else(|| parse_err(1, "header has no `color` column"))?;
    let weight_col = names.iter().position(|h| h == "weight");
    if color_col == 0 {
        return Err(parse_err(1, "no coordinate columns before `color`"));
    }
    if weight_col.is_some_and(|w| w < color_col) {
        return Err(parse_err(1, "`weight` must come after `color`"));
    }
    let dim = color_col;
    let mut points = ColoredPointSet::new(dim);
    let mut ids: HashMap<String, ColorId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut coords = vec![0.0; dim];
    for (row, rec) in rd.records().enumerate() {
        let line = row as u64 + 2;
        let rec = rec.map_err(|e| parse_err(line, e.to_string()))?;
        if rec.len() != names.len() {
            return Err(parse_err(line, format!("expected {} fields, found {}", names.len(), rec.len())));
        }
        for (k, c) in coords.iter_mut().enumerate() {
            let x: f64 = rec[k].parse().map_err(|_| parse_err(line, format!("bad coordinate `{}`", &rec[k])))?;
            if !x.is_finite() {
                return Err(parse_err(line, format!("non-finite coordinate `{}`", &rec[k])));
            }
            *c = x;
        }
        let label = &rec[color_col];
        let color = *ids.entry(label.to_string()).or_insert_with(|| {
            labels.push(label.to_string());
            labels.len() as ColorId - 1
        });
        let weight = match weight_col {
            Some(w) => {
                let v: f64 = rec[w].parse().map_err(|_| parse_err(line, format!("bad weight `{}`", &rec[w])))?;
                if !(v.is_finite() && v >= 0.0) {
                    return Err(parse_err(line, format!("weight must be finite and nonnegative, got `{}`", &rec[w])));
                }
                v
            }
            None => 1.0,
        };
        points.push_parts(&coords, color, weight).map_err(|e| parse_err(line, e.to_string()))?;
    }
    points.set_labels(labels);
    Ok(points)
}

pub fn read_points_file(path: &Path) -> Result<ColoredPointSet> {
    let file = std::fs::File::open(path)?;
    read_points(std::io::BufReader::new(file), Format::from_path(path))
}

/// Writes points with a header; colors use their labels when known.
pub fn write_points<W: Write>(points: &ColoredPointSet, out: W, format: Format) -> Result<()> {
    let mut w = csv::WriterBuilder::new().delimiter(format.delimiter()).from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    let mut header: Vec<String> = (1..=points.dim()).map(|k| format!("x{k}")).collect();
    header.push("color".into());
    let weighted = !points.is_unit_weight();
    if weighted {
        header.push("weight".into());
    }
    w.write_record(&header).map_err(csv_err)?;
    for i in 0..points.len() {
        let mut rec: Vec<String> = points.coords(i).iter().map(|x| x.to_string()).collect();
        let c = points.color(i);
        rec.push(points.label(c).map_or_else(|| c.to_string(), str::to_string));
        if weighted {
            rec.push(points.weight(i).to_string());
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
