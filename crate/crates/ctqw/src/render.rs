//! Heatmap rendering with a diverging red/white/blue colormap.
//!
//! `x` runs left to right and `k` bottom to top. Colours are symmetric
//! about zero: white at 0, saturated red at `+vmax` and blue at `-vmax`.

use std::io::Cursor;
use std::path::Path;

use ctqw_core::analysis::Grid;
use ctqw_core::wigner::WignerField;
use image::{ImageFormat, Rgb, RgbImage};

use crate::error::{CliError, Result};
use crate::format::write_atomic;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapOptions {
    pub cell: u32,
    /// Colour scale; defaults to the largest absolute value.
    pub vmax: Option<f64>,
}

impl Default for HeatmapOptions {
    fn default() -> Self {
        Self {
            cell: crate::config::DEFAULT_CELL_PIXELS,
            vmax: None,
        }
    }
}

/// Colour of `value` on a scale of `±vmax`.
pub fn diverging(value: f64, vmax: f64) -> Rgb<u8> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(vmax > 0.0) || value == 0.0 {
        return Rgb([255, 255, 255]);
    }
    let t = (value / vmax).clamp(-1.0, 1.0);
    let fade = (255.0 * (1.0 - t.abs())).round() as u8;
    if t > 0.0 {
        Rgb([255, fade, fade])
    } else {
        Rgb([fade, fade, 255])
    }
}

/// Renders an `x`-major grid of `nx × nk` cells.
pub fn render(nx: usize, nk: usize, values: &[f64], opts: HeatmapOptions) -> RgbImage {
    assert_eq!(values.len(), nx * nk);
    let vmax = opts
        .vmax
        .unwrap_or_else(|| values.iter().fold(0.0, |a: f64, v| a.max(v.abs())));
    let cell = opts.cell.max(1);
    let mut img = RgbImage::new(nx as u32 * cell, nk as u32 * cell);
    for x in 0..nx {
        for k in 0..nk {
            let colour = diverging(values[x * nk + k], vmax);
            let px0 = x as u32 * cell;
            let py0 = (nk - 1 - k) as u32 * cell;
            for dy in 0..cell {
                for dx in 0..cell {
                    img.put_pixel(px0 + dx, py0 + dy, colour);
                }
            }
        }
    }
    img
}

pub fn render_field(field: &WignerField, opts: HeatmapOptions) -> RgbImage {
    render(field.n(), field.n(), field.values(), opts)
}

/// Rows of the grid are `x`, columns `k`.
pub fn render_grid(grid: &Grid, opts: HeatmapOptions) -> RgbImage {
    render(grid.rows, grid.cols, &grid.values, opts)
}

pub fn save_png(img: &RgbImage, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    img.write_to(&mut Cursor::new(&mut buf), ImageFormat::Png)
        .map_err(|source| CliError::Image {
            path: path.to_path_buf(),
            source,
        })?;
    write_atomic(path, &buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colormap_endpoints() {
        assert_eq!(diverging(0.0, 1.0), Rgb([255, 255, 255]));
        assert_eq!(diverging(1.0, 1.0), Rgb([255, 0, 0]));
        assert_eq!(diverging(-1.0, 1.0), Rgb([0, 0, 255]));
        assert_eq!(diverging(5.0, 1.0), Rgb([255, 0, 0]));
        assert_eq!(diverging(0.5, 1.0), Rgb([255, 128, 128]));
        assert_eq!(diverging(0.3, 0.0), Rgb([255, 255, 255]));
    }

    #[test]
    fn orientation() {
        // 2 x-values by 3 k-values, only (x=1, k=0) set
        let values = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0];
        let img = render(
            2,
            3,
            &values,
            HeatmapOptions {
                cell: 2,
                vmax: None,
            },
        );
        assert_eq!(img.dimensions(), (4, 6));
        // bottom-right block is red
        assert_eq!(*img.get_pixel(3, 5), Rgb([255, 0, 0]));
        assert_eq!(*img.get_pixel(2, 4), Rgb([255, 0, 0]));
        assert_eq!(*img.get_pixel(0, 5), Rgb([255, 255, 255]));
        assert_eq!(*img.get_pixel(3, 0), Rgb([255, 255, 255]));
    }
}
