use std::fmt::Write;

use super::{CubeConfig, CubeError, ExactRational};

const SIZE: i64 = 512;
const MARGIN: i64 = 32;

/// Maps `x ∈ [0,1]` into the drawing area.
fn screen(x: &ExactRational) -> String {
    let span = ExactRational::from_integer(SIZE - 2 * MARGIN);
    (&ExactRational::from_integer(MARGIN) + &(x * &span)).to_decimal(3)
}

fn screen_y(y: &ExactRational) -> String {
    screen(&(&ExactRational::one() - y))
}

/// Draws a configuration of dimension 1 or 2 in a 512×512 SVG; dimension 1
/// is drawn as bars across the middle band.
pub fn render_svg(e: &CubeConfig) -> Result<String, CubeError> {
    if !(1..=2).contains(&e.dim()) {
        return Err(CubeError::UnsupportedDimension(e.dim()));
    }
    let mut out = String::new();
    let inner = SIZE - 2 * MARGIN;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"  <rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}" fill="none" stroke="black" stroke-width="2"/>"#
    )
    .unwrap();
    let band = (ExactRational::new(3, 8), ExactRational::new(5, 8));
    for (i, c) in e.cubes().iter().enumerate() {
        let (x0, x1) = c.interval(0);
        let (y0, y1) = if e.dim() == 2 {
            let (a, b) = c.interval(1);
            (a, b)
        } else {
            (&band.0, &band.1)
        };
        let width = ((x1 - x0) * ExactRational::from_integer(inner)).to_decimal(3);
        let height = ((y1 - y0) * ExactRational::from_integer(inner)).to_decimal(3);
        writeln!(
            out,
            r##"  <rect x="{}" y="{}" width="{width}" height="{height}" fill="#9ecae1" fill-opacity="0.6" stroke="#08519c"/>"##,
            screen(x0),
            screen_y(y1)
        )
        .unwrap();
        writeln!(
            out,
            r#"  <text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
            screen(&x0.midpoint(x1)),
            screen_y(&y0.midpoint(y1)),
            i + 1
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::LittleCube;

    #[test]
    fn empty_is_frame_only() {
        let s = render_svg(&CubeConfig::empty(2)).unwrap();
        assert_eq!(s.matches("<rect").count(), 1);
        assert!(s.contains(r#"width="512" height="512""#));
    }

    #[test]
    fn squares_are_transcribed() {
        let e = CubeConfig::plain(
            2,
            vec![
                LittleCube::from_fractions(&[((0, 1), (1, 2)), ((0, 1), (1, 4))]),
                LittleCube::from_fractions(&[((1, 2), (1, 1)), ((1, 2), (1, 1))]),
            ],
        )
        .unwrap();
        let s = render_svg(&e).unwrap();
        assert!(s.contains(r#"<rect x="32" y="368" width="224" height="112""#));
        assert!(s.contains(r#"<rect x="256" y="32" width="224" height="224""#));
        assert!(s.contains(">2</text>"));
    }

    #[test]
    fn bars_and_bad_dimension() {
        let e = CubeConfig::plain(1, vec![LittleCube::from_fractions(&[((1, 4), (3, 4))])]).unwrap();
        let s = render_svg(&e).unwrap();
        assert!(s.contains(r#"<rect x="144" y="200" width="224" height="112""#));
        assert!(matches!(
            render_svg(&CubeConfig::empty(3)),
            Err(CubeError::UnsupportedDimension(3))
        ));
    }
}
