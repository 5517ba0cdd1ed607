//! Butterfly sweeps: bands for every reduced fraction p/q up to a
//! denominator bound, with CSV, JSON, and SVG renderings.
//!
//! Rows are ordered by denominator, then numerator, and the sweep is
//! embarrassingly parallel; results are collected in job order so output
//! bytes do not depend on the worker count.  A failed row keeps its place,
//! carrying an error flag instead of aborting the sweep.

use super::bands::bands;
use super::RotationNumber;
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Bands at one rotation number within a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct ButterflyRow {
    pub p: u32,
    pub q: u32,
    pub lambda: f64,
    pub bands: Vec<[f64; 2]>,
    pub flags: Vec<String>,
}

/// A full sweep over 2 <= q <= q_max.
#[derive(Clone, Debug, Serialize)]
pub struct ButterflyData {
    pub lambda: f64,
    pub q_max: u32,
    pub rows: Vec<ButterflyRow>,
}

/// Bands for every reduced p/q with 2 <= q <= q_max at fixed coupling.
pub fn butterfly(q_max: u32, lambda: f64) -> Result<ButterflyData> {
    if q_max < 2 {
        return Err(Error::domain(format!("sweep needs q_max >= 2, got {q_max}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("coupling must be positive, got {lambda}")));
    }
    let jobs: Vec<(u32, u32)> = (2..=q_max)
        .flat_map(|q| {
            (1..q)
                .filter(move |&p| num_integer::gcd(p, q) == 1)
                .map(move |p| (p, q))
        })
        .collect();
    let rows: Result<Vec<ButterflyRow>> = jobs
        .par_iter()
        .map(|&(p, q)| {
            let theta = RotationNumber::new(p, q)?;
            Ok(match bands(&theta, lambda) {
                Ok(b) => ButterflyRow {
                    p,
                    q,
                    lambda,
                    bands: b.intervals().to_vec(),
                    flags: b.flags().to_vec(),
                },
                Err(e) => ButterflyRow {
                    p,
                    q,
                    lambda,
                    bands: Vec::new(),
                    flags: vec![format!("error: {e}")],
                },
            })
        })
        .collect();
    Ok(ButterflyData { lambda, q_max, rows: rows? })
}

/// One line per band: `p,q,theta,band_index,lower,upper`, floats at 12
/// significant digits.
pub fn render_csv(data: &ButterflyData) -> String {
    let mut out = String::from("p,q,theta,band_index,lower,upper\n");
    for row in &data.rows {
        let theta = row.p as f64 / row.q as f64;
        for (i, b) in row.bands.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{:.11e},{},{:.11e},{:.11e}\n",
                row.p, row.q, theta, i, b[0], b[1]
            ));
        }
    }
    out
}

/// Compact JSON of the whole sweep, rows in sweep order.
pub fn render_json(data: &ButterflyData) -> String {
    serde_json::to_string(data).expect("butterfly data serializes infallibly")
}

/// Standalone SVG, 1000 x 1000: energy maps [-2 - lambda, 2 + lambda] to
/// the x axis, theta to the y axis, one horizontal segment per band.
/// Deterministic: element order follows row order and all coordinates are
/// fixed-precision.
pub fn render_svg(data: &ButterflyData) -> String {
    let e = 2.0 + data.lambda;
    let map_x = |x: f64| (x + e) / (2.0 * e) * 1000.0;
    let stroke = (700.0 / data.rows.len().max(1) as f64).clamp(0.3, 6.0);
    let mut out = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\">\n\
         <rect width=\"1000\" height=\"1000\" fill=\"#ffffff\"/>\n",
    );
    for row in &data.rows {
        let y = row.p as f64 / row.q as f64 * 1000.0;
        for b in &row.bands {
            let (mut x1, mut x2) = (map_x(b[0]), map_x(b[1]));
            // Keep degenerate (touching-width) bands visible.
            if x2 - x1 < 0.5 {
                let mid = 0.5 * (x1 + x2);
                x1 = mid - 0.25;
                x2 = mid + 0.25;
            }
            out.push_str(&format!(
                "<line x1=\"{x1:.3}\" y1=\"{y:.3}\" x2=\"{x2:.3}\" y2=\"{y:.3}\" \
                 stroke=\"#1a1a66\" stroke-width=\"{stroke:.3}\"/>\n"
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}
