//! Result formatting: a %g-style significant-digit renderer, the stable CSV
//! schema, and aligned text tables.

use super::{ExperimentResult, ExperimentSpec};

/// One emitted line of an experiment: the flat record behind both output
/// formats. Field order matches the CSV schema.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment_id: String,
    pub method: String,
    pub law: String,
    pub n: usize,
    pub coverage: f64,
    pub mean_length: f64,
    pub median_length: f64,
    pub trimmed_length: f64,
    pub infinite_count: usize,
    pub seed: u64,
}

/// Flatten a spec/result pair into an output row.
pub fn result_row(spec: &ExperimentSpec, result: &ExperimentResult) -> ResultRow {
    ResultRow {
        experiment_id: result.id.clone(),
        method: result.method.to_string(),
        law: spec.law.to_string(),
        n: spec.n,
        coverage: result.coverage,
        mean_length: result.mean_length,
        median_length: result.median_length,
        trimmed_length: result.trimmed_length,
        infinite_count: result.infinite_count,
        seed: spec.seed,
    }
}

/// Render with up to `digits` significant digits, %g style: fixed notation for
/// moderate exponents, scientific otherwise, trailing zeros dropped. Exactly
/// representable short values print exactly ("0.941"), so nothing is ever
/// rounded below the requested precision.
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    // {:e} renders a normalized mantissa and decimal exponent.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("f64 e-format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    // Re-render in fixed notation with exactly (digits - 1 - exp) decimals.
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}"))
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Significant digits used by the emitters; comfortably above the six the
/// output contract promises.
pub const OUTPUT_DIGITS: usize = 9;

const CSV_HEADER: &str =
    "experiment-id,method,law,n,coverage,mean_length,median_length,trimmed_length,infinite_count,seed";

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Render rows as CSV under the stable header.
pub fn to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            csv_field(&row.experiment_id),
            csv_field(&row.method),
            csv_field(&row.law),
            row.n,
            sig(row.coverage, OUTPUT_DIGITS),
            sig(row.mean_length, OUTPUT_DIGITS),
            sig(row.median_length, OUTPUT_DIGITS),
            sig(row.trimmed_length, OUTPUT_DIGITS),
            row.infinite_count,
            row.seed,
        ));
    }
    out
}

/// Render rows as an aligned text table: text columns left-aligned, numeric
/// columns right-aligned, two-space gutters.
pub fn to_aligned(rows: &[ResultRow]) -> String {
    let header = [
        "experiment-id",
        "method",
        "law",
        "n",
        "coverage",
        "mean_length",
        "median_length",
        "trimmed_length",
        "inf",
        "seed",
    ];
    let mut cells: Vec<[String; 10]> = Vec::with_capacity(rows.len());
    for row in rows {
        cells.push([
            row.experiment_id.clone(),
            row.method.clone(),
            row.law.clone(),
            row.n.to_string(),
            sig(row.coverage, OUTPUT_DIGITS),
            sig(row.mean_length, OUTPUT_DIGITS),
            sig(row.median_length, OUTPUT_DIGITS),
            sig(row.trimmed_length, OUTPUT_DIGITS),
            row.infinite_count.to_string(),
            row.seed.to_string(),
        ]);
    }
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &cells {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }
    // Columns 0..3 hold text, the rest numbers.
    let render = |cols: &[String]| -> String {
        let mut line = String::new();
        for (i, (cell, w)) in cols.iter().zip(&widths).enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i < 3 {
                line.push_str(&format!("{cell:<w$}"));
            } else {
                line.push_str(&format!("{cell:>w$}"));
            }
        }
        line.trim_end().to_string()
    };
    let header_cells: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    let mut out = render(&header_cells);
    out.push('\n');
    for row in &cells {
        out.push_str(&render(row.as_slice()));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> ResultRow {
        ResultRow {
            experiment_id: "t1-exponential-n30".into(),
            method: "I".into(),
            law: "exponential(1)".into(),
            n: 30,
            coverage: 0.941,
            mean_length: 1.61723456789,
            median_length: 1.5,
            trimmed_length: 1.55,
            infinite_count: 0,
            seed: 7,
        }
    }

    #[test]
    fn sig_matches_hand_checked_renderings() {
        assert_eq!(sig(0.941, 9), "0.941");
        assert_eq!(sig(1.61723456789, 9), "1.61723457");
        assert_eq!(sig(-0.699707, 6), "-0.699707");
        assert_eq!(sig(41.609, 6), "41.609");
        assert_eq!(sig(0.0, 9), "0");
        assert_eq!(sig(f64::INFINITY, 9), "inf");
        assert_eq!(sig(f64::NEG_INFINITY, 9), "-inf");
        assert_eq!(sig(1.0e-7, 6), "1e-7");
        assert_eq!(sig(123456789.0, 6), "1.23457e8");
        assert_eq!(sig(1322.15, 6), "1322.15");
        assert_eq!(sig(0.000123456, 6), "0.000123456");
    }

    #[test]
    fn sig_never_drops_below_requested_precision() {
        let x = 1.2601987654321;
        let rendered: f64 = sig(x, 9).parse().unwrap();
        assert!((rendered - x).abs() / x < 1e-8);
    }

    #[test]
    fn csv_has_header_and_quotes_commas() {
        let mut r = row();
        r.law = "binomial(10,0.1)".into();
        let csv = to_csv(&[r]);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "experiment-id,method,law,n,coverage,mean_length,median_length,trimmed_length,infinite_count,seed"
        );
        let body = lines.next().unwrap();
        assert!(body.contains("\"binomial(10,0.1)\""), "{body}");
        assert!(body.ends_with(",0,7"));
    }

    #[test]
    fn aligned_output_lines_share_layout() {
        let rows = vec![row(), {
            let mut r = row();
            r.experiment_id = "t1-beta-n10".into();
            r.mean_length = f64::INFINITY;
            r
        }];
        let text = to_aligned(&rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("experiment-id"));
        assert!(lines[1].len() >= lines[2].trim_end().len());
        assert!(text.contains("inf"));
    }
}
