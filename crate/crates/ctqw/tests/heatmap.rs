use ctqw::render::{render, render_field, HeatmapOptions};
use ctqw_core::wigner::closed_form_limit_m1;
use image::Rgb;

const WHITE: Rgb<u8> = Rgb([255, 255, 255]);

/// Colour of cell (x, k) in an image with `n` rows of `cell`-pixel cells.
fn cell_colour(img: &image::RgbImage, n: usize, cell: u32, x: usize, k: usize) -> Rgb<u8> {
    let px = x as u32 * cell + cell / 2;
    let py = (n - 1 - k) as u32 * cell + cell / 2;
    *img.get_pixel(px, py)
}

#[test]
fn zero_field_is_white() {
    let img = render(5, 5, &[0.0; 25], HeatmapOptions::default());
    assert_eq!(img.dimensions(), (40, 40));
    assert!(img.pixels().all(|p| *p == WHITE));
}

#[test]
fn closed_form_pattern_lands_on_expected_cells() {
    let n = 50;
    let field = closed_form_limit_m1(n, 25).unwrap();
    let opts = HeatmapOptions::default();
    let img = render_field(&field, opts);
    let cell = opts.cell;
    for x in 0..n {
        let c = cell_colour(&img, n, cell, x, 0);
        if x == 0 || x == 25 {
            assert_eq!(c, Rgb([255, 0, 0]), "x={x}");
        } else {
            assert_eq!(c, WHITE, "x={x}");
        }
    }
    // 2/N^2 against a scale of 1/N: pale red on even k, white on odd k.
    let pale = cell_colour(&img, n, cell, 7, 2);
    assert_eq!(pale[0], 255);
    assert!(pale[1] > 240 && pale[1] < 255 && pale[1] == pale[2]);
    assert_eq!(cell_colour(&img, n, cell, 7, 3), WHITE);
}

#[test]
fn negation_swaps_red_and_blue() {
    let values: Vec<f64> = (0..36).map(|i| ((i * 7) % 11) as f64 - 5.0).collect();
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    let opts = HeatmapOptions {
        cell: 3,
        vmax: None,
    };
    let a = render(6, 6, &values, opts);
    let b = render(6, 6, &negated, opts);
    for (p, q) in a.pixels().zip(b.pixels()) {
        assert_eq!(*p, Rgb([q[2], q[1], q[0]]));
    }
}

#[test]
fn vmax_override_saturates() {
    let img = render(
        1,
        2,
        &[0.2, -0.2],
        HeatmapOptions {
            cell: 1,
            vmax: Some(0.1),
        },
    );
    assert_eq!(*img.get_pixel(0, 1), Rgb([255, 0, 0]));
    assert_eq!(*img.get_pixel(0, 0), Rgb([0, 0, 255]));
}
