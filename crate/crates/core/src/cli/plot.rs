//! Log-scale decay curves rendered to PNG from diagnostic records.

use std::path::Path;

use image::{Rgb, RgbImage};

use crate::diagnostics::{column, DiagRecord};
use crate::{Error, Result};

const WIDTH: u32 = 800;
const HEIGHT: u32 = 500;
const MARGIN: u32 = 40;

/// Columns drawn and their colours.
const CURVES: [(&str, [u8; 3]); 3] = [
    ("rho_dev_l2", [200, 30, 30]),
    ("gradu_l2", [30, 60, 200]),
    ("u_l2", [20, 150, 60]),
];

pub fn plot_decay(records: &[DiagRecord], path: &Path) -> Result<()> {
    let mut series = Vec::new();
    for (name, colour) in CURVES {
        let pts: Vec<(f64, f64)> = column(records, name)?
            .into_iter()
            .filter(|&(_, v)| v > 0.0)
            .map(|(t, v)| (t, v.log10()))
            .collect();
        series.push((pts, colour));
    }
    let all = series.iter().flat_map(|(p, _)| p.iter());
    let (mut t0, mut t1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(t, y) in all {
        t0 = t0.min(t);
        t1 = t1.max(t);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let mut img = RgbImage::from_pixel(WIDTH, HEIGHT, Rgb([255, 255, 255]));
    let (l, r, top, bot) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    for x in l..=r {
        img.put_pixel(x, top, Rgb([0, 0, 0]));
        img.put_pixel(x, bot, Rgb([0, 0, 0]));
    }
    for y in top..=bot {
        img.put_pixel(l, y, Rgb([0, 0, 0]));
        img.put_pixel(r, y, Rgb([0, 0, 0]));
    }
    if t0 < t1 {
        let (y0, y1) = if y1 > y0 { (y0, y1) } else { (y0 - 1.0, y0 + 1.0) };
        let px = |t: f64, y: f64| {
            (
                l as f64 + (t - t0) / (t1 - t0) * (r - l) as f64,
                bot as f64 - (y - y0) / (y1 - y0) * (bot - top) as f64,
            )
        };
        for (pts, colour) in &series {
            for w in pts.windows(2) {
                line(&mut img, px(w[0].0, w[0].1), px(w[1].0, w[1].1), Rgb(*colour));
            }
        }
    }
    img.save(path).map_err(|e| Error::Image(e.to_string()))
}

fn line(img: &mut RgbImage, a: (f64, f64), b: (f64, f64), c: Rgb<u8>) {
    let n = (b.0 - a.0).abs().max((b.1 - a.1).abs()).ceil().max(1.0) as usize;
    for k in 0..=n {
        let s = k as f64 / n as f64;
        let (x, y) = (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1));
        let (x, y) = (x.round() as i64, y.round() as i64);
        if (0..WIDTH as i64).contains(&x) && (0..HEIGHT as i64).contains(&y) {
            img.put_pixel(x as u32, y as u32, c);
        }
    }
}
