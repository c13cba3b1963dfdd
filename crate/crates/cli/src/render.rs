//! Mask pictures: ASCII frames and a static SVG strip.

use std::fmt::Write;

use bmp_core::model::{mask_border_length, masks_of, Instance, Mask, Solution};
use bmp_core::Result;

fn frames(instance: &Instance, solution: &Solution) -> Result<Vec<(Mask, u64)>> {
    Ok(masks_of(&solution.placement, &solution.schedule)?
        .into_iter()
        .map(|m| {
            let bl = mask_border_length(&m, instance.grid);
            (m, bl)
        })
        .collect())
}

/// `#` for deposited cells, `.` otherwise; a header per mask and the total at the end.
pub fn ascii(instance: &Instance, solution: &Solution) -> Result<String> {
    let grid = instance.grid;
    let mut out = String::new();
    let mut total = 0;
    for (mask, bl) in frames(instance, solution)? {
        total += bl;
        let _ = writeln!(out, "mask {} token {} border {}", mask.step + 1, mask.token, bl);
        for r in 0..grid.rows {
            let line: String = (0..grid.cols)
                .map(|c| if mask.cells.contains(&(r, c)) { '#' } else { '.' })
                .collect();
            out.push_str(&line);
            out.push('\n');
        }
        out.push('\n');
    }
    let _ = writeln!(out, "total {total}");
    Ok(out)
}

const CELL: usize = 24;
const GAP: usize = 16;
const HEADER: usize = 20;

/// Masks side by side; deposited cells shaded, mask borders drawn bold.
pub fn svg(instance: &Instance, solution: &Solution) -> Result<String> {
    let grid = instance.grid;
    let frames = frames(instance, solution)?;
    let frame_w = grid.cols * CELL;
    let width = GAP + frames.len().max(1) * (frame_w + GAP);
    let height = HEADER + grid.rows * CELL + 2 * GAP;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    for (k, (mask, bl)) in frames.iter().enumerate() {
        let x0 = GAP + k * (frame_w + GAP);
        let y0 = GAP + HEADER;
        let _ = writeln!(
            out,
            r#"<text x="{x0}" y="{}" font-family="monospace" font-size="12">{} : {}</text>"#,
            y0 - 6,
            escape(mask.token.as_str()),
            bl
        );
        let on = |r: usize, c: usize| mask.cells.contains(&(r, c));
        for r in 0..grid.rows {
            for c in 0..grid.cols {
                let fill = if on(r, c) { "#9a9a9a" } else { "#ffffff" };
                let _ = writeln!(
                    out,
                    r##"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="#cccccc" stroke-width="1"/>"##,
                    x0 + c * CELL,
                    y0 + r * CELL
                );
            }
        }
        for r in 0..grid.rows {
            for c in 0..grid.cols {
                let (x, y) = (x0 + c * CELL, y0 + r * CELL);
                if c + 1 < grid.cols && on(r, c) != on(r, c + 1) {
                    line(&mut out, x + CELL, y, x + CELL, y + CELL);
                }
                if r + 1 < grid.rows && on(r, c) != on(r + 1, c) {
                    line(&mut out, x, y + CELL, x + CELL, y + CELL);
                }
            }
        }
        let _ = writeln!(
            out,
            r#"<rect x="{x0}" y="{y0}" width="{frame_w}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
            grid.rows * CELL
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn line(out: &mut String, x1: usize, y1: usize, x2: usize, y2: usize) {
    let _ = writeln!(
        out,
        r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="3"/>"#
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
