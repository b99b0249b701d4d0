//! Plain-text renderings of reports (CSV rows with a fixed numeric format).

use crate::bounds::{AccumulationRow, BoundReport};

/// 15 significant digits in scientific notation with a `.` separator,
/// independent of locale.
pub fn csv_number(x: f64) -> String {
    format!("{x:.14e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(csv_number).unwrap_or_default()
}

fn anchor(a: Option<[f64; 2]>) -> [String; 2] {
    match a {
        Some([re, im]) => [csv_number(re), csv_number(im)],
        None => [String::new(), String::new()],
    }
}

pub const BOUND_REPORT_HEADER: &str = "degree,grid,interior_bound_sup,interior_anchor_re,interior_anchor_im,\
zero_set_bound,boundary_bound_sup,boundary_anchor_re,boundary_anchor_im,projection_bound,\
analytic_projection_bound,mixed_bound,operator_norm,symbol_sup_norm,ordering_ok,bound_tol,norm_tol,equality_rel";

pub fn bound_report_csv_row(r: &BoundReport) -> String {
    let [ia_re, ia_im] = anchor(r.interior_anchor);
    let [ba_re, ba_im] = anchor(r.boundary_anchor);
    [
        r.degree.to_string(),
        r.grid.to_string(),
        opt(r.interior_bound_sup),
        ia_re,
        ia_im,
        opt(r.zero_set_bound),
        opt(r.boundary_bound_sup),
        ba_re,
        ba_im,
        opt(r.projection_bound),
        opt(r.analytic_projection_bound),
        opt(r.mixed_bound),
        csv_number(r.operator_norm),
        csv_number(r.symbol_sup_norm),
        r.ordering_ok.to_string(),
        csv_number(r.tolerances.bound_tol),
        csv_number(r.tolerances.norm_tol),
        csv_number(r.tolerances.equality_rel),
    ]
    .join(",")
}

pub const ACCUMULATION_HEADER: &str = "m,grid,operator_norm,symbol_sup_norm,gap,zero_set_bound";

pub fn accumulation_csv(rows: &[AccumulationRow]) -> String {
    let mut out = String::from(ACCUMULATION_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.m,
            r.grid,
            csv_number(r.operator_norm),
            csv_number(r.symbol_sup_norm),
            csv_number(r.gap),
            csv_number(r.zero_set_bound)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(csv_number(1.0), "1.00000000000000e0");
        assert_eq!(csv_number(-0.125), "-1.25000000000000e-1");
        assert_eq!(csv_number(2.0f64.sqrt()), "1.41421356237310e0");
    }

    #[test]
    fn header_matches_row_width() {
        let rows = [AccumulationRow {
            m: 8,
            grid: 512,
            operator_norm: 0.9,
            symbol_sup_norm: 1.0,
            gap: 0.1,
            zero_set_bound: 0.875,
        }];
        let text = accumulation_csv(&rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
        assert_eq!(BOUND_REPORT_HEADER.split(',').count(), 18);
    }
}
