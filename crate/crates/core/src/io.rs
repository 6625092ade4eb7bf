//! CSV and JSON export of samples, sections, coefficient tables and reports.
//!
//! CSV files are UTF-8 with `,` separators and `.` decimals. Complex entries
//! are written as plain reals when the imaginary part is exactly zero and as
//! `a+bi` / `a-bi` otherwise; both forms parse back. JSON objects use sorted
//! keys, so identical inputs produce byte-identical files.

use std::io::Write;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::reconstruct::{AlgorithmTag, ReconstructionResult};
use crate::sections::{FiniteSection, SectionConvention};
use crate::spectral::{
    DistributionReport, RangeMembershipReport, RangeVerdict, SampleKind, SpectralSample,
};
use crate::symbols::FourierCoeffTable;
use crate::{Dense, C64};

pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn parse_complex(s: &str) -> Result<C64> {
    let s = s.trim();
    let bad = || Error::domain(format!("malformed complex literal {s:?}"));
    if let Some(body) = s.strip_suffix('i') {
        // split at the sign of the imaginary part (not a leading sign, not an
        // exponent sign)
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        let k = split.ok_or_else(bad)?;
        let re: f64 = body[..k].parse().map_err(|_| bad())?;
        let sign = if bytes[k] as char == '-' { -1.0 } else { 1.0 };
        let im: f64 = body[k + 1..].parse().map_err(|_| bad())?;
        Ok(C64::new(re, sign * im))
    } else {
        let re: f64 = s.parse().map_err(|_| bad())?;
        Ok(C64::new(re, 0.0))
    }
}

/// Zero out the imaginary parts when they are uniformly negligible
/// (relative tolerance against the largest entry).
pub fn realified(m: &Dense, rel_tol: f64) -> Dense {
    let scale = m.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let max_im = m.iter().map(|z| z.im.abs()).fold(0.0f64, f64::max);
    if max_im <= rel_tol * scale.max(f64::MIN_POSITIVE) {
        m.map(|z| C64::new(z.re, 0.0))
    } else {
        m.clone()
    }
}

pub fn write_dense_csv(m: &Dense, out: &mut dyn Write) -> Result<()> {
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format_complex(m[(i, j)])).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn read_dense_csv(text: &str) -> Result<Dense> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Result<Vec<C64>> = line.split(',').map(parse_complex).collect();
        rows.push(row?);
    }
    if rows.is_empty() {
        return Err(Error::domain("empty CSV matrix"));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::domain("ragged CSV matrix"));
    }
    let nrows = rows.len();
    Ok(Dense::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn kind_str(kind: SampleKind) -> &'static str {
    match kind {
        SampleKind::Eigen => "eigen",
        SampleKind::Singular => "singular",
    }
}

/// Columns: index, re, im, then one column per grid coordinate when present.
pub fn write_sample_csv(sample: &SpectralSample, out: &mut dyn Write) -> Result<()> {
    let d = sample.grid().map_or(0, |g| g.first().map_or(0, Vec::len));
    let mut header = vec!["index".to_string(), "re".to_string(), "im".to_string()];
    for k in 0..d {
        header.push(format!("s{}", k + 1));
    }
    writeln!(out, "{}", header.join(","))?;
    for (j, v) in sample.values().iter().enumerate() {
        let mut fields = vec![j.to_string(), format!("{}", v.re), format!("{}", v.im)];
        if let Some(grid) = sample.grid() {
            for c in &grid[j] {
                fields.push(format!("{c}"));
            }
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

pub fn sample_json(sample: &SpectralSample) -> Value {
    json!({
        "kind": kind_str(sample.kind()),
        "order": sample.order(),
        "values": sample.values().iter().map(|v| json!([v.re, v.im])).collect::<Vec<_>>(),
        "grid": sample.grid().map(|g| g.to_vec()),
    })
}

pub fn table_json(table: &FourierCoeffTable) -> Value {
    let (p, q) = table.block_dims();
    let entries: Vec<Value> = table
        .iter()
        .filter(|(_, v)| v.iter().any(|z| z.norm() > 0.0))
        .map(|(idx, v)| {
            let blocks: Vec<Vec<[f64; 2]>> = (0..p)
                .map(|r| (0..q).map(|c| [v[(r, c)].re, v[(r, c)].im]).collect())
                .collect();
            json!({ "j": idx, "value": blocks })
        })
        .collect();
    json!({
        "order": table.order(),
        "block": [p, q],
        "extent": table.extent(),
        "entries": entries,
    })
}

fn convention_str(c: SectionConvention) -> &'static str {
    match c {
        SectionConvention::Unnormalized => "unnormalized",
        SectionConvention::Orthonormal => "orthonormal",
    }
}

/// JSON sidecar describing a section export.
pub fn section_sidecar_json(section: &FiniteSection) -> Value {
    let (p, q) = section.block_dims();
    json!({
        "multiplier": section.multiplier_id(),
        "weight": section.weight().label(),
        "n": section.order(),
        "block": [p, q],
        "convention": convention_str(section.convention()),
        "has_basis_factor": section.basis_factor().is_some(),
    })
}

/// Columns: grid coordinates, reconstructed symbol re/im, reconstructed
/// multiplier re/im (empty when excluded), excluded flag, residual when
/// available.
pub fn write_reconstruction_csv(r: &ReconstructionResult, out: &mut dyn Write) -> Result<()> {
    let d = r.grid().first().map_or(1, Vec::len);
    let mut header: Vec<String> = (0..d).map(|k| format!("s{}", k + 1)).collect();
    header.extend(
        ["f_re", "f_im", "phi_re", "phi_im", "excluded", "residual"]
            .iter()
            .map(|s| s.to_string()),
    );
    writeln!(out, "{}", header.join(","))?;
    for j in 0..r.grid().len() {
        let mut fields: Vec<String> = r.grid()[j].iter().map(|c| format!("{c}")).collect();
        let f = r.f_values()[j];
        fields.push(format!("{}", f.re));
        fields.push(format!("{}", f.im));
        match r.phi_values()[j] {
            Some(v) => {
                fields.push(format!("{}", v.re));
                fields.push(format!("{}", v.im));
                fields.push("0".into());
            }
            None => {
                fields.push(String::new());
                fields.push(String::new());
                fields.push("1".into());
            }
        }
        match r.residuals().and_then(|res| res[j]) {
            Some(v) => fields.push(format!("{v}")),
            None => fields.push(String::new()),
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

fn algorithm_str(tag: AlgorithmTag) -> &'static str {
    match tag {
        AlgorithmTag::Direct => "direct",
        AlgorithmTag::HankelPeeled => "hankel_peeled",
    }
}

pub fn reconstruction_summary_json(r: &ReconstructionResult) -> Value {
    json!({
        "algorithm": algorithm_str(r.algorithm()),
        "grid_points": r.grid().len(),
        "excluded": r.excluded().len(),
        "max_residual": r.max_residual(),
        "mean_residual": r.mean_residual(),
        "coeff_decay": r.coeff_decay(),
    })
}

pub fn distribution_report_json(rep: &DistributionReport) -> Value {
    json!({
        "test_function": rep.test_function_id,
        "empirical_mean": [rep.empirical_mean.re, rep.empirical_mean.im],
        "integral_value": [rep.integral_value.re, rep.integral_value.im],
        "abs_error": rep.abs_error,
        "order": rep.order,
        "non_hermitian_flagged": rep.non_hermitian_flagged,
    })
}

fn verdict_str(v: RangeVerdict) -> &'static str {
    match v {
        RangeVerdict::MemberWithinEps => "member_within_eps",
        RangeVerdict::Excluded => "excluded",
        RangeVerdict::Inconclusive => "inconclusive",
    }
}

pub fn range_report_json(rep: &RangeMembershipReport) -> Value {
    json!({
        "point": [rep.point.re, rep.point.im],
        "eps": rep.radius,
        "fraction_inside": rep.fraction_inside,
        "verdict": verdict_str(rep.verdict),
    })
}

pub fn circulant_json(c: &crate::matrices::CirculantMatrix) -> Value {
    let (p, q) = c.block_dims();
    let column: Vec<Value> = c
        .first_column()
        .iter()
        .map(|b| {
            let rows: Vec<Vec<[f64; 2]>> = (0..p)
                .map(|r| (0..q).map(|cc| [b[(r, cc)].re, b[(r, cc)].im]).collect())
                .collect();
            json!(rows)
        })
        .collect();
    json!({
        "order": c.order(),
        "block": [p, q],
        "first_column": column,
    })
}

/// First column of a circulant as CSV rows `index, re, im` (scalar) or one
/// row per block entry `index, r, c, re, im`.
pub fn write_circulant_csv(
    c: &crate::matrices::CirculantMatrix,
    out: &mut dyn Write,
) -> Result<()> {
    let (p, q) = c.block_dims();
    if (p, q) == (1, 1) {
        writeln!(out, "index,re,im")?;
        for (k, b) in c.first_column().iter().enumerate() {
            writeln!(out, "{},{},{}", k, b[(0, 0)].re, b[(0, 0)].im)?;
        }
    } else {
        writeln!(out, "index,row,col,re,im")?;
        for (k, b) in c.first_column().iter().enumerate() {
            for r in 0..p {
                for cc in 0..q {
                    writeln!(out, "{},{},{},{},{}", k, r, cc, b[(r, cc)].re, b[(r, cc)].im)?;
                }
            }
        }
    }
    Ok(())
}
