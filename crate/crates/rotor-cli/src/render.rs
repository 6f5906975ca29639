//! Excursion-colored raster output.
//!
//! One pixel per lattice vertex in a rectangular window, binary PPM (P6).
//! Unvisited vertices are white; visited vertices are colored by the index
//! of the excursion that first reached them, through a fixed 20-color
//! palette that repeats beyond twenty.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("window of {0} pixels exceeds the 1e8 limit")]
    WindowTooLarge(u64),
    #[error("window corners out of order")]
    BadWindow,
}

/// Distinct colors for the first twenty excursions (from Kelly's list of
/// maximally contrasting colors).
pub const PALETTE: [[u8; 3]; 20] = [
    [230, 25, 75],
    [60, 180, 75],
    [255, 225, 25],
    [0, 130, 200],
    [245, 130, 48],
    [145, 30, 180],
    [70, 240, 240],
    [240, 50, 230],
    [210, 245, 60],
    [250, 190, 212],
    [0, 128, 128],
    [220, 190, 255],
    [170, 110, 40],
    [255, 250, 200],
    [128, 0, 0],
    [170, 255, 195],
    [128, 128, 0],
    [255, 215, 180],
    [0, 0, 128],
    [128, 128, 128],
];

const WHITE: [u8; 3] = [255, 255, 255];
const MAX_PIXELS: u64 = 100_000_000;

/// Renders the inclusive window `[x0, x1] x [y0, y1]` to PPM bytes.
/// `label` gives the zero-based excursion index that first visited a
/// vertex, or `None` for unvisited. Rows run top (large `y`) to bottom.
pub fn render_range(
    window: (i64, i64, i64, i64),
    label: impl Fn(i64, i64) -> Option<u32>,
) -> Result<Vec<u8>, RenderError> {
    let (x0, y0, x1, y1) = window;
    if x1 < x0 || y1 < y0 {
        return Err(RenderError::BadWindow);
    }
    let width = (x1 - x0 + 1) as u64;
    let height = (y1 - y0 + 1) as u64;
    let pixels = width * height;
    if pixels > MAX_PIXELS {
        return Err(RenderError::WindowTooLarge(pixels));
    }
    let mut out = Vec::with_capacity(32 + (pixels * 3) as usize);
    out.extend_from_slice(format!("P6\n{width} {height}\n255\n").as_bytes());
    for y in (y0..=y1).rev() {
        for x in x0..=x1 {
            let color = match label(x, y) {
                Some(n) => PALETTE[(n as usize) % PALETTE.len()],
                None => WHITE,
            };
            out.extend_from_slice(&color);
        }
    }
    Ok(out)
}
