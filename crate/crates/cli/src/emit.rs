//! Table and CSV rendering for check rows. Both carry the same columns;
//! CSV is for piping into other tools, the table for reading.

use finsler_core::CheckRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
}

pub const HEADER: [&str; 6] = ["test_id", "inputs", "value", "residual", "tolerance", "pass"];

/// 17 significant digits: enough to reproduce the f64 bit pattern, so two
/// runs can be compared byte for byte.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn cells(row: &CheckRow) -> [String; 6] {
    [
        row.id.to_string(),
        row.inputs.clone(),
        fmt_float(row.value),
        fmt_float(row.residual),
        fmt_float(row.tolerance),
        if row.pass { "pass" } else { "FAIL" }.to_string(),
    ]
}

pub fn render(rows: &[CheckRow], format: Format) -> String {
    match format {
        Format::Csv => render_csv(rows),
        Format::Table => render_table(rows),
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn render_csv(rows: &[CheckRow]) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = cells(row).iter().map(|c| csv_field(c)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn render_table(rows: &[CheckRow]) -> String {
    let mut widths: Vec<usize> = HEADER.iter().map(|h| h.chars().count()).collect();
    let all: Vec<[String; 6]> = rows.iter().map(cells).collect();
    for row in &all {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |row: &[String]| {
        let mut text = String::new();
        for (i, (cell, w)) in row.iter().zip(&widths).enumerate() {
            if i > 0 {
                text.push_str("  ");
            }
            text.push_str(cell);
            if i + 1 < row.len() {
                for _ in cell.chars().count()..*w {
                    text.push(' ');
                }
            }
        }
        text.push('\n');
        text
    };
    let header: Vec<String> = HEADER.iter().map(|h| h.to_string()).collect();
    out.push_str(&line(&header));
    for row in &all {
        out.push_str(&line(row));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<CheckRow> {
        vec![
            CheckRow {
                id: "jacobi",
                inputs: "dim=3".to_string(),
                value: 0.0,
                residual: 0.0,
                tolerance: 1e-12,
                pass: true,
            },
            CheckRow {
                id: "gv_finsler",
                inputs: "y=0.6, -0.8, 0; verdict=NotGeodesic".to_string(),
                value: 0.4,
                residual: 0.4,
                tolerance: 1e-9,
                pass: false,
            },
        ]
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let out = render_csv(&sample());
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], HEADER.join(","));
        assert!(lines[2].starts_with("gv_finsler,\"y=0.6, -0.8, 0; verdict=NotGeodesic\""));
        assert!(lines[2].ends_with("FAIL"));
    }

    #[test]
    fn floats_are_bit_faithful() {
        let x = 0.1 + 0.2;
        let text = fmt_float(x);
        assert_eq!(text.parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn table_columns_align() {
        let out = render_table(&sample());
        let lines: Vec<&str> = out.lines().collect();
        let col = lines[0].find("inputs").unwrap();
        assert_eq!(lines[1].find("dim=3").unwrap(), col);
        assert_eq!(lines[2].find("y=0.6").unwrap(), col);
    }
}
