//! Column files that are not phase-space grids.

use std::io::{Read, Write};

use pasts_core::{Error, Result};

/// One point of a Mandel Q curve; `q` is `None` where Q is undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QRow {
    pub r: f64,
    pub m: u32,
    pub q: Option<f64>,
}

pub const Q_HEADER: [&str; 3] = ["r", "m", "Q"];
pub const PND_HEADER: [&str; 2] = ["n", "P"];
const NULL: &str = "null";

pub fn write_q<W: Write>(rows: &[QRow], writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(Q_HEADER)?;
    for row in rows {
        let q = row.q.map_or_else(|| NULL.to_string(), |q| q.to_string());
        out.write_record([row.r.to_string(), row.m.to_string(), q])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_q<R: Read>(reader: R) -> Result<Vec<QRow>> {
    let mut input = csv::Reader::from_reader(reader);
    check_header(&mut input, &Q_HEADER)?;
    input
        .records()
        .map(|record| {
            let record = record?;
            let q = match field(&record, 2)? {
                NULL => None,
                s => Some(parse(s)?),
            };
            Ok(QRow {
                r: parse(field(&record, 0)?)?,
                m: parse(field(&record, 1)?)?,
                q,
            })
        })
        .collect()
}

pub fn write_pnd<W: Write>(probs: &[f64], writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(PND_HEADER)?;
    for (n, p) in probs.iter().enumerate() {
        out.write_record([n.to_string(), p.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// Probabilities in row order; rows must list `n = 0, 1, 2, ...`.
pub fn read_pnd<R: Read>(reader: R) -> Result<Vec<f64>> {
    let mut input = csv::Reader::from_reader(reader);
    check_header(&mut input, &PND_HEADER)?;
    input
        .records()
        .enumerate()
        .map(|(i, record)| {
            let record = record?;
            let n: usize = parse(field(&record, 0)?)?;
            if n != i {
                return Err(Error::Parse(format!("row {i} has n = {n}")));
            }
            parse(field(&record, 1)?)
        })
        .collect()
}

fn check_header<R: Read>(input: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = input.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
    }
    Ok(())
}

fn field(record: &csv::StringRecord, i: usize) -> Result<&str> {
    record
        .get(i)
        .ok_or_else(|| Error::Parse("short CSV row".into()))
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| Error::Parse(format!("'{s}': {e}")))
}
