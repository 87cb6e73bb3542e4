//! Line-based text format for instances.
//!
//! ```text
//! tarski-instance v1
//! d <dimension>
//! shape <n1> ... <nd>
//! kind target | kind table
//! target <x1> ... <xd>            (kind target)
//! <f1> ... <fd>                   (kind table: one line per point, lexicographic)
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lattice::Point;
use crate::oracle::instance::{Instance, InstanceKind};

const MAGIC: &str = "tarski-instance v1";

pub fn to_text(inst: &Instance) -> String {
    let mut out = String::new();
    let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "d {}", inst.dim()).unwrap();
    writeln!(out, "shape {}", join(inst.shape())).unwrap();
    match inst.kind() {
        InstanceKind::Target(t) => {
            writeln!(out, "kind target").unwrap();
            writeln!(out, "target {}", join(t.coords())).unwrap();
        }
        InstanceKind::Table(values) => {
            writeln!(out, "kind table").unwrap();
            for row in values.chunks(inst.dim()) {
                writeln!(out, "{}", join(row)).unwrap();
            }
        }
    }
    out
}

fn numbers(line_no: usize, fields: &[&str]) -> Result<Vec<i64>> {
    fields
        .iter()
        .map(|f| f.parse::<i64>().map_err(|_| Error::parse(line_no, format!("`{f}` is not an integer"))))
        .collect()
}

fn keyed<'a>(line_no: usize, line: Option<&'a str>, key: &str) -> Result<Vec<&'a str>> {
    let line = line.ok_or_else(|| Error::parse(line_no, format!("missing `{key}` line")))?;
    let mut fields = line.split(' ');
    if fields.next() != Some(key) {
        return Err(Error::parse(line_no, format!("expected `{key} ...`, found `{line}`")));
    }
    Ok(fields.collect())
}

pub fn from_text(text: &str) -> Result<Instance> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let lines: Vec<&str> = body.split('\n').collect();
    let mut it = lines.iter().copied();

    if it.next() != Some(MAGIC) {
        return Err(Error::parse(1, format!("expected header `{MAGIC}`")));
    }
    let d_fields = keyed(2, it.next(), "d")?;
    let d = match numbers(2, &d_fields)?.as_slice() {
        [d] if *d >= 1 => *d as usize,
        _ => return Err(Error::parse(2, "`d` takes one positive integer")),
    };
    let shape = numbers(3, &keyed(3, it.next(), "shape")?)?;
    if shape.len() != d {
        return Err(Error::parse(3, format!("d is {d} but shape has {} entries", shape.len())));
    }
    if shape.iter().any(|&n| n < 1) {
        return Err(Error::parse(3, "grid sides must be positive"));
    }
    let kind = keyed(4, it.next(), "kind")?;
    let inst = match kind.as_slice() {
        ["target"] => {
            let target = numbers(5, &keyed(5, it.next(), "target")?)?;
            if target.len() != d {
                return Err(Error::parse(5, format!("target has {} coordinates, expected {d}", target.len())));
            }
            if it.next().is_some() {
                return Err(Error::parse(6, "unexpected content after target line"));
            }
            Instance::target(&shape, Point::new(target)).map_err(|e| Error::parse(5, e.to_string()))?
        }
        ["table"] => {
            let expected: u128 = shape.iter().map(|&n| n as u128).product();
            let rows: Vec<&str> = it.collect();
            if rows.len() as u128 != expected {
                return Err(Error::parse(
                    5 + rows.len().min(expected as usize),
                    format!("table has {} rows, expected {expected}", rows.len()),
                ));
            }
            let mut values = Vec::with_capacity(rows.len() * d);
            for (i, row) in rows.iter().enumerate() {
                let line_no = 5 + i;
                let fields: Vec<&str> = row.split(' ').collect();
                if fields.len() != d {
                    return Err(Error::parse(line_no, format!("row has {} values, expected {d}", fields.len())));
                }
                let row = numbers(line_no, &fields)?;
                if row.iter().zip(&shape).any(|(&c, &n)| c < 1 || c > n) {
                    return Err(Error::parse(line_no, "value lies outside the grid"));
                }
                values.extend(row);
            }
            Instance::table(&shape, values).map_err(|e| Error::parse(5, e.to_string()))?
        }
        _ => return Err(Error::parse(4, "kind must be `target` or `table`")),
    };
    Ok(inst)
}

pub fn save(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_text(inst))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<Instance> {
    from_text(&fs::read_to_string(path)?)
}
