//! Output helpers shared by the subcommands.

use mh_core::fmt::{format_sig, fraction_string};
use mh_core::{ComparisonTuple, EuclidPoint, Rational, SolutionTuple};

pub fn sig(v: f64, digits: u32) -> String {
    format_sig(v, digits)
}

pub fn frac(r: &Rational) -> String {
    fraction_string(r)
}

pub fn point_json(p: &SolutionTuple) -> String {
    serde_json::to_string(p).expect("tuple serializes")
}

pub fn euclid_fracs(p: &EuclidPoint) -> Vec<String> {
    p.coords().iter().map(fraction_string).collect()
}

pub fn comparison_fracs(l: &ComparisonTuple) -> Vec<String> {
    l.values().iter().map(fraction_string).collect()
}

/// Left-aligned plain-text table with a header row.
pub fn print_table(header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (j, cell) in row.iter().enumerate() {
            if j < widths.len() {
                widths[j] = widths[j].max(cell.len());
            }
        }
    }
    let render = |cells: Vec<String>| {
        cells
            .iter()
            .enumerate()
            .map(|(j, c)| format!("{:<width$}", c, width = widths[j]))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    println!(
        "{}",
        render(header.iter().map(|h| h.to_string()).collect())
    );
    for row in rows {
        println!("{}", render(row.clone()));
    }
}

pub fn print_csv(header: &[&str], rows: &[Vec<String>]) {
    println!("{}", header.join(","));
    for row in rows {
        println!("{}", row.join(","));
    }
}
